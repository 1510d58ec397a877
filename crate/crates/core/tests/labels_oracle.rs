use std::collections::VecDeque;

use lesionseg::labels::{connected_components, largest_component};
use lesionseg::BinaryMask;
use proptest::prelude::*;

/// Labels by 8-connected BFS flood fill, numbered in raster discovery order.
fn flood_labels(mask: &BinaryMask) -> (Vec<i32>, usize) {
    let (w, h) = mask.dims();
    let mut labels = vec![0i32; w * h];
    let mut next = 0;
    for start in 0..w * h {
        if !mask.data()[start] || labels[start] != 0 {
            continue;
        }
        next += 1;
        labels[start] = next;
        let mut queue = VecDeque::from([(start % w, start / w)]);
        while let Some((x, y)) = queue.pop_front() {
            for (nx, ny) in mask.neighbors8(x, y) {
                let i = ny * w + nx;
                if mask.data()[i] && labels[i] == 0 {
                    labels[i] = next;
                    queue.push_back((nx, ny));
                }
            }
        }
    }
    (labels, next as usize)
}

fn mask() -> impl Strategy<Value = BinaryMask> {
    (1usize..=16, 1usize..=16, 0.2f64..0.8).prop_flat_map(|(w, h, p)| {
        prop::collection::vec(prop::bool::weighted(p), w * h)
            .prop_map(move |data| BinaryMask::from_vec(w, h, data).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn matches_flood_fill(m in mask()) {
        let (labels, n) = connected_components(&m);
        let (want, k) = flood_labels(&m);
        prop_assert_eq!(n, k);
        prop_assert_eq!(labels.data(), &want[..]);
    }

    #[test]
    fn largest_component_is_a_maximal_component(m in mask()) {
        let (want, k) = flood_labels(&m);
        let big = largest_component(&m);
        if k == 0 {
            prop_assert!(big.is_blank());
        } else {
            let sizes: Vec<usize> = (1..=k as i32).map(|l| want.iter().filter(|&&v| v == l).count()).collect();
            let best = sizes.iter().copied().max().unwrap();
            let first = sizes.iter().position(|&s| s == best).unwrap() as i32 + 1;
            let expect: Vec<bool> = want.iter().map(|&v| v == first).collect();
            prop_assert_eq!(big.data(), &expect[..]);
        }
    }
}
