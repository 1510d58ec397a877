use lesionseg::inpaint::{inpaint_diffusion, inpaint_rgb, inpaint_telea, InpaintMethod};
use lesionseg::raster::{merge_channels, split_channels};
use lesionseg::{BinaryMask, GrayImage, RgbImage};
use proptest::prelude::*;

fn case() -> impl Strategy<Value = (GrayImage, BinaryMask)> {
    (2usize..=16, 2usize..=16).prop_flat_map(|(w, h)| {
        (
            prop::collection::vec(any::<u8>(), w * h),
            prop::collection::vec(prop::bool::weighted(0.4), w * h),
        )
            .prop_map(move |(img, mask)| {
                (
                    GrayImage::from_vec(w, h, img).unwrap(),
                    BinaryMask::from_vec(w, h, mask).unwrap(),
                )
            })
    })
}

fn known_range(img: &GrayImage, mask: &BinaryMask) -> Option<(u8, u8)> {
    let known = img.data().iter().zip(mask.data()).filter(|(_, &m)| !m).map(|(&v, _)| v);
    let (lo, hi) = known.fold((255u8, 0u8), |(lo, hi), v| (lo.min(v), hi.max(v)));
    (lo <= hi).then_some((lo, hi))
}

fn check(img: &GrayImage, mask: &BinaryMask, out: &GrayImage) -> Result<(), TestCaseError> {
    for i in 0..img.len() {
        if !mask.data()[i] {
            prop_assert_eq!(out.data()[i], img.data()[i]);
        }
    }
    if let Some((lo, hi)) = known_range(img, mask) {
        prop_assert!(out.data().iter().all(|&v| v >= lo && v <= hi));
    } else {
        prop_assert_eq!(out, img);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn telea_keeps_exterior_and_obeys_maximum_principle((img, mask) in case(), radius in 1usize..6) {
        check(&img, &mask, &inpaint_telea(&img, &mask, radius).unwrap())?;
    }

    #[test]
    fn diffusion_keeps_exterior_and_obeys_maximum_principle((img, mask) in case(), iters in 1usize..60) {
        check(&img, &mask, &inpaint_diffusion(&img, &mask, iters).unwrap())?;
    }

    #[test]
    fn rgb_equals_split_fill_merge((img, mask) in case(), seed in any::<u64>(), method in prop_oneof![Just(InpaintMethod::Telea), Just(InpaintMethod::Diffusion)]) {
        let rgb = RgbImage::from_fn(img.width(), img.height(), |x, y| {
            let v = img.get(x, y);
            [v, (seed >> ((x + 3 * y) % 56)) as u8, v / 2]
        });
        let fill = |plane: &GrayImage| match method {
            InpaintMethod::Telea => inpaint_telea(plane, &mask, 3).unwrap(),
            InpaintMethod::Diffusion => inpaint_diffusion(plane, &mask, 30).unwrap(),
        };
        let [r, g, b] = split_channels(&rgb);
        let want = merge_channels(&fill(&r), &fill(&g), &fill(&b)).unwrap();
        prop_assert_eq!(inpaint_rgb(&rgb, &mask, method, 3, 30).unwrap(), want);
    }
}

#[test]
fn empty_mask_is_identity_and_constant_stays_constant() {
    let img = GrayImage::from_fn(9, 9, |x, y| (x * 20 + y) as u8);
    let none = BinaryMask::new(9, 9, false);
    assert_eq!(inpaint_telea(&img, &none, 5).unwrap(), img);
    assert_eq!(inpaint_diffusion(&img, &none, 10).unwrap(), img);

    let flat = GrayImage::new(12, 12, 140);
    let hole = BinaryMask::from_fn(12, 12, |x, y| (3..9).contains(&x) && (4..7).contains(&y));
    assert_eq!(inpaint_telea(&flat, &hole, 5).unwrap(), flat);
    assert_eq!(inpaint_diffusion(&flat, &hole, 50).unwrap(), flat);
}

#[test]
fn thin_line_filled_from_both_sides() {
    let img = GrayImage::from_fn(30, 20, |_, y| if y == 10 { 20 } else { 200 });
    let line = BinaryMask::from_fn(30, 20, |_, y| y == 10);
    for out in [
        inpaint_telea(&img, &line, 5).unwrap(),
        inpaint_diffusion(&img, &line, 300).unwrap(),
    ] {
        assert!(out.row(10).iter().all(|&v| (198..=202).contains(&v)));
    }
}
