use lesionseg::meanshift::{mean_shift_filter, MeanShiftParams};
use lesionseg::RgbImage;
use proptest::prelude::*;

fn params(levels: usize) -> MeanShiftParams {
    MeanShiftParams {
        spatial_bandwidth: 5,
        color_bandwidth: 30.0,
        pyramid_levels: levels,
        ..Default::default()
    }
}

/// Rectangles whose colors come from a palette spaced wider than twice the
/// color bandwidth, plus noise well inside it.
fn blocky() -> impl Strategy<Value = RgbImage> {
    rects(8usize..=40, 8usize..=40, 1)
}

/// Same, but every region is at least one full spatial window thick.
fn chunky() -> impl Strategy<Value = RgbImage> {
    rects((1usize..=3).prop_map(|n| 11 * n), (1usize..=3).prop_map(|n| 11 * n), 11)
}

fn rects(
    w: impl Strategy<Value = usize>,
    h: impl Strategy<Value = usize>,
    grid: usize,
) -> impl Strategy<Value = RgbImage> {
    let color = || prop::array::uniform3(prop::sample::select(vec![20u8, 110, 200]));
    (
        w,
        h,
        prop::collection::vec((color(), 0usize..40, 0usize..40), 1..4),
        color(),
        any::<u64>(),
    )
        .prop_map(move |(w, h, rects, base, seed)| {
            RgbImage::from_fn(w, h, |x, y| {
                let mut c = base;
                for &(color, rx, ry) in &rects {
                    if x >= (rx % w) / grid * grid && y >= (ry % h) / grid * grid {
                        c = color;
                    }
                }
                let jitter = (seed.wrapping_mul((x * 131 + y * 7919 + 1) as u64) >> 61) as u8;
                c.map(|v| v.saturating_add(jitter))
            })
        })
}

fn max_change(a: &RgbImage, b: &RgbImage) -> f64 {
    a.data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (*x as f64 - *y as f64).abs())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    // Thin strips let the spatial mean wander along them, so the bound needs
    // regions at least one window thick. Output is rounded to u8, hence +1.
    #[test]
    fn second_pass_moves_no_channel_beyond_eps(img in chunky()) {
        let p = params(0);
        let once = mean_shift_filter(&img, &p);
        prop_assert!(max_change(&once, &mean_shift_filter(&once, &p)) <= p.convergence_eps + 1.0);
    }

    // Box-downsampled edge pixels bias the coarse modes, so the pyramid is
    // only nearly idempotent: no pixel should hop to another mode.
    #[test]
    fn pyramid_second_pass_stays_close(img in blocky(), levels in 1usize..=2) {
        let p = params(levels);
        let once = mean_shift_filter(&img, &p);
        prop_assert!(max_change(&once, &mean_shift_filter(&once, &p)) < p.color_bandwidth);
    }

    #[test]
    fn output_within_input_channel_range(img in blocky()) {
        let out = mean_shift_filter(&img, &params(2));
        for c in 0..3 {
            let channel = |im: &RgbImage| im.pixels().map(|p| p[c]).collect::<Vec<_>>();
            let (src, dst) = (channel(&img), channel(&out));
            let (lo, hi) = (*src.iter().min().unwrap(), *src.iter().max().unwrap());
            prop_assert!(dst.iter().all(|&v| v >= lo && v <= hi));
        }
    }
}

#[test]
fn constant_image_is_fixed() {
    let img = RgbImage::new(33, 20, [90, 140, 10]);
    assert_eq!(mean_shift_filter(&img, &MeanShiftParams::default()), img);
}

#[test]
fn sharp_edge_keeps_both_sides_flat() {
    let img = RgbImage::from_fn(40, 30, |x, _| if x < 17 { [40; 3] } else { [220; 3] });
    let p = MeanShiftParams { color_bandwidth: 30.0, ..Default::default() };
    let out = mean_shift_filter(&img, &p);
    for y in 0..30 {
        for x in 0..40 {
            let want = if x < 17 { 40i32 } else { 220 };
            assert!(out.get(x, y).iter().all(|&v| (v as i32 - want).abs() <= 2));
        }
    }
}
