//! Cross-module invariants checked with generated inputs.

mod common;

use proptest::prelude::*;

use blindspot::backend::ReplayTable;
use blindspot::eval::{coco_map, coco_map_with, ImageEval};
use blindspot::geometry::{iou, nms, BoundingBox, Detection};
use blindspot::par::Execution;

fn arb_box() -> impl Strategy<Value = BoundingBox> {
    (0.0..0.9f64, 0.0..0.9f64, 0.01..0.5f64, 0.01..0.5f64)
        .prop_map(|(x, y, w, h)| BoundingBox::new(x, y, (x + w).min(1.0), (y + h).min(1.0)).unwrap())
}

fn arb_det() -> impl Strategy<Value = Detection> {
    (arb_box(), 0.0..=1.0f64).prop_map(|(b, s)| Detection::new(b, s).unwrap())
}

fn arb_images() -> impl Strategy<Value = Vec<ImageEval>> {
    prop::collection::vec(
        (prop::collection::vec(arb_det(), 0..8), prop::collection::vec(arb_box(), 0..5)),
        0..6,
    )
    .prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (detections, ground_truth))| ImageEval { image_id: format!("im{i}"), detections, ground_truth })
            .collect()
    })
}

proptest! {
    #[test]
    fn nms_keeps_a_non_overlapping_subset(dets in prop::collection::vec(arb_det(), 0..24), thr in 0.05..1.0f64) {
        let kept = nms(&dets, thr);
        prop_assert!(kept.len() <= dets.len());
        for k in &kept {
            prop_assert!(dets.contains(k));
        }
        for (i, a) in kept.iter().enumerate() {
            for b in &kept[i + 1..] {
                prop_assert!(iou(&a.bbox, &b.bbox) < thr);
            }
        }
        prop_assert!(kept.windows(2).all(|w| w[0].score >= w[1].score));
        prop_assert_eq!(nms(&kept, thr), kept.clone());
    }

    #[test]
    fn nms_never_drops_the_top_detection(dets in prop::collection::vec(arb_det(), 1..24), thr in 0.0..1.0f64) {
        let top = dets[common::priority(&dets)[0]];
        prop_assert_eq!(nms(&dets, thr)[0], top);
    }

    #[test]
    fn iou_is_invariant_under_translation_and_scale(a in arb_box(), b in arb_box(), dx in -5.0..5.0f64, s in 0.1..10.0f64) {
        let t = |r: &BoundingBox| BoundingBox::new((r.x_min + dx) * s, r.y_min * s, (r.x_max + dx) * s, r.y_max * s).unwrap();
        prop_assert!((iou(&a, &b) - iou(&t(&a), &t(&b))).abs() < 1e-9);
    }

    #[test]
    fn map_is_bounded_and_execution_independent(images in arb_images()) {
        let seq = coco_map_with(Execution::Sequential, &images);
        let par = coco_map_with(Execution::Parallel, &images);
        prop_assert_eq!(&seq, &par);
        prop_assert!((0.0..=1.0).contains(&seq.map_coco));
        // a stricter threshold can only lose matches
        prop_assert!(seq.per_threshold.windows(2).all(|w| w[0].true_positives >= w[1].true_positives));
        prop_assert_eq!(seq.ap50, seq.per_threshold[0].ap);
        prop_assert_eq!(seq.ap75, seq.per_threshold[5].ap);
    }

    #[test]
    fn perfect_detections_score_one(gts in prop::collection::vec(arb_box(), 1..6)) {
        let detections = gts.iter().map(|&b| Detection::new(b, 0.9).unwrap()).collect();
        let m = coco_map(&[ImageEval { image_id: "x".into(), detections, ground_truth: gts }]);
        prop_assert_eq!(m.map_coco, 1.0);
    }

    #[test]
    fn replay_dump_parse_round_trip(rows in prop::collection::vec((0u64..50, arb_box(), 0.0..=1.0f64), 0..40), extra in 0u64..10) {
        let mut table = ReplayTable::default();
        for (f, b, s) in rows {
            table.push(f, b, s);
        }
        table.frame_count = Some(table.stream_len() + extra);
        let back = ReplayTable::parse(&table.dump()).unwrap();
        prop_assert_eq!(back.stream_len(), table.stream_len());
        prop_assert_eq!(back.frames.len(), table.frames.len());
        for (id, frame) in &table.frames {
            let other = &back.frames[id];
            prop_assert_eq!(other.boxes.len(), frame.boxes.len());
            for (x, y) in frame.boxes.iter().zip(&other.boxes) {
                prop_assert!(iou(&x.bbox, &y.bbox) > 1.0 - 1e-9);
                prop_assert!((x.score - y.score).abs() < 1e-9);
            }
        }
    }
}
