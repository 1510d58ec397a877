use lesionseg::pipeline_watershed::{create_markers, watershed};
use lesionseg::{BinaryMask, Error, GrayImage, LabelMap, PipelineConfig};
use proptest::prelude::*;

fn relief_and_markers() -> impl Strategy<Value = (GrayImage, LabelMap)> {
    (2usize..=14, 2usize..=14).prop_flat_map(|(w, h)| {
        let n = w * h;
        (
            prop::collection::vec(any::<u8>(), n),
            prop::collection::vec(prop_oneof![6 => Just(0i32), 1 => 1i32..=4], n),
            0..n,
            0..n,
        )
            .prop_map(move |(relief, mut labels, i, j)| {
                // Guarantee two distinct labels.
                labels[i] = 1;
                if i != j {
                    labels[j] = 2;
                } else {
                    labels[(i + 1) % n] = 2;
                }
                (
                    GrayImage::from_vec(w, h, relief).unwrap(),
                    LabelMap::from_vec(w, h, labels).unwrap(),
                )
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn partition_marker_preservation_determinism((relief, markers) in relief_and_markers()) {
        let out = watershed(&relief, &markers).unwrap();
        let labels: Vec<i32> = markers.data().iter().copied().filter(|&l| l > 0).collect();
        for (i, &l) in out.data().iter().enumerate() {
            prop_assert!(l == -1 || labels.contains(&l));
            let m = markers.data()[i];
            if m > 0 {
                prop_assert_eq!(l, m);
            }
        }
        prop_assert_eq!(watershed(&relief, &markers).unwrap(), out);
    }

    #[test]
    fn labeled_regions_touch_only_their_own_label((relief, markers) in relief_and_markers()) {
        let out = watershed(&relief, &markers).unwrap();
        for y in 0..out.height() {
            for x in 0..out.width() {
                let l = out.get(x, y);
                if l <= 0 || markers.get(x, y) > 0 {
                    continue;
                }
                // A flooded pixel never sits next to a different flooded label.
                for (nx, ny) in out.neighbors4(x, y) {
                    let k = out.get(nx, ny);
                    prop_assert!(k == -1 || k == l || markers.get(nx, ny) > 0);
                }
            }
        }
    }

    #[test]
    fn marker_set_is_a_partition(data in prop::collection::vec(any::<bool>(), 24 * 20)) {
        let lesion = BinaryMask::from_vec(24, 20, data).unwrap();
        let cfg = PipelineConfig { marker_clean_radius: 1, bg_dilate_radius: 2, ..Default::default() };
        let Ok(m) = create_markers(&lesion, &cfg) else { return Ok(()) };
        for i in 0..lesion.len() {
            let (f, b, u) = (m.sure_foreground.data()[i], m.sure_background.data()[i], m.unknown.data()[i]);
            prop_assert_eq!([f, b, u].iter().filter(|&&v| v).count(), 1);
            let l = m.markers.data()[i];
            prop_assert_eq!(l == 0, u);
            prop_assert_eq!(l == 1, b);
            prop_assert_eq!(l >= 2, f);
        }
    }
}

#[test]
fn flat_row_meets_in_the_middle() {
    let relief = GrayImage::new(10, 1, 0);
    let mut markers = LabelMap::new(10, 1, 0);
    markers.set(0, 0, 1);
    markers.set(9, 0, 2);
    let out = watershed(&relief, &markers).unwrap();
    assert_eq!(out.data(), &[1, 1, 1, 1, 1, -1, 2, 2, 2, 2]);
}

#[test]
fn ridge_column_becomes_the_boundary() {
    let relief = GrayImage::from_fn(5, 5, |x, _| if x == 2 { 200 } else { 10 });
    let mut markers = LabelMap::new(5, 5, 0);
    markers.set(0, 2, 1);
    markers.set(4, 2, 2);
    let out = watershed(&relief, &markers).unwrap();
    for y in 0..5 {
        assert_eq!(out.get(0, y), 1);
        assert_eq!(out.get(1, y), 1);
        assert_eq!(out.get(2, y), -1);
        assert_eq!(out.get(3, y), 2);
        assert_eq!(out.get(4, y), 2);
    }
}

#[test]
fn rejects_bad_markers() {
    let relief = GrayImage::new(4, 4, 0);
    let mut one = LabelMap::new(4, 4, 0);
    one.set(0, 0, 3);
    one.set(3, 3, 3);
    assert!(matches!(watershed(&relief, &one), Err(Error::TooFewMarkers(1))));
    let two = LabelMap::from_fn(4, 3, |x, _| if x == 0 { 1 } else { 2 });
    assert!(matches!(watershed(&relief, &two), Err(Error::DimensionMismatch { .. })));
}
