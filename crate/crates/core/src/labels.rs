//! Connected-component labeling (8-connectivity).

use crate::raster::{BinaryMask, LabelMap};

struct DisjointSet {
    parent: Vec<u32>,
}

impl DisjointSet {
    fn new() -> Self {
        // Slot 0 is unused so provisional labels start at 1.
        Self { parent: vec![0] }
    }

    fn make(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        id
    }

    fn find(&mut self, mut a: u32) -> u32 {
        while self.parent[a as usize] != a {
            let grand = self.parent[self.parent[a as usize] as usize];
            self.parent[a as usize] = grand;
            a = grand;
        }
        a
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Labels foreground components `1..=k` in raster-scan discovery order;
/// background is 0. Returns the label map and `k`.
pub fn connected_components(mask: &BinaryMask) -> (LabelMap, usize) {
    let (w, h) = mask.dims();
    let mut provisional = vec![0u32; w * h];
    let mut sets = DisjointSet::new();

    for y in 0..h {
        for x in 0..w {
            if !mask.get(x, y) {
                continue;
            }
            // Already-visited neighbors: W, NW, N, NE.
            let mut found = 0u32;
            let prior = [
                (x.wrapping_sub(1), Some(y)),
                (x.wrapping_sub(1), y.checked_sub(1)),
                (x, y.checked_sub(1)),
                (x + 1, y.checked_sub(1)),
            ];
            for (nx, ny) in prior {
                let Some(ny) = ny else { continue };
                if nx >= w {
                    continue;
                }
                let l = provisional[ny * w + nx];
                if l == 0 {
                    continue;
                }
                if found == 0 {
                    found = l;
                } else {
                    sets.union(found, l);
                }
            }
            provisional[y * w + x] = if found == 0 { sets.make() } else { found };
        }
    }

    let mut relabel = vec![0i32; sets.parent.len()];
    let mut count = 0usize;
    let mut out = LabelMap::new(w, h, 0);
    for (i, &p) in provisional.iter().enumerate() {
        if p == 0 {
            continue;
        }
        let root = sets.find(p) as usize;
        if relabel[root] == 0 {
            count += 1;
            relabel[root] = count as i32;
        }
        out.data_mut()[i] = relabel[root];
    }
    (out, count)
}

/// The largest 8-connected component; ties go to the earliest discovered.
/// A blank mask is returned unchanged.
pub fn largest_component(mask: &BinaryMask) -> BinaryMask {
    let (labels, count) = connected_components(mask);
    if count == 0 {
        return mask.clone();
    }
    let mut sizes = vec![0usize; count + 1];
    for &l in labels.data() {
        sizes[l as usize] += 1;
    }
    let best = (1..=count)
        .max_by(|&a, &b| sizes[a].cmp(&sizes[b]).then(b.cmp(&a)))
        .unwrap() as i32;
    labels.map(|l| l == best)
}
