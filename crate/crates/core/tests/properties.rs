use digitopo::grid::{label_components_2d, label_components_3d};
use digitopo::io::{encode_pbm, encode_vox3, parse_pbm, parse_vox3, PbmFormat};
use digitopo::shapes::{
    drill_holes_2d, extrude, gen_fat_blob_3d, gen_fat_polyomino_2d, salt_volume,
};
use digitopo::topo2d::{
    check_preconditions_2d, classify_boundary_2d, find_pathologies_2d, hole_count, holes_pipeline,
    holes_pipeline_with, remove_speckles, repair_2d, HolesOptions,
};
use digitopo::topo3d::{
    analyze_volume, boundary_surfaces, find_pathologies_3d, outcome_from_stream, repair_3d,
    stream_surfaces, surfaces_of_volume, VolumeOptions, VolumeSlabs,
};
use digitopo::{oracle, Adjacency, Image2D, Method, Volume3D};
use proptest::prelude::*;

fn image(max: usize) -> impl Strategy<Value = Image2D> {
    (1..=max, 1..=max).prop_flat_map(|(w, h)| {
        proptest::collection::vec(any::<bool>(), w * h)
            .prop_map(move |bits| Image2D::from_bits(w, h, bits).unwrap())
    })
}

fn volume(max: usize) -> impl Strategy<Value = Volume3D> {
    (1..=max, 1..=max, 1..=max).prop_flat_map(|(x, y, z)| {
        proptest::collection::vec(prop::bool::weighted(0.4), x * y * z)
            .prop_map(move |bits| Volume3D::from_bits(x, y, z, bits).unwrap())
    })
}

fn transpose(img: &Image2D) -> Image2D {
    let mut t = Image2D::new(img.height(), img.width());
    for (x, y) in img.foreground() {
        t.set(y, x, true);
    }
    t
}

fn sorted_holes(img: &Image2D) -> Vec<(usize, i64)> {
    // repair flips depend on scan order, so compare unrepaired counts
    let mut v: Vec<_> = holes_pipeline_with(img, HolesOptions { repair: false })
        .unwrap()
        .reports()
        .map(|r| (r.area, r.holes))
        .collect();
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn direct_labels_refine_indirect(img in image(14)) {
        let direct = label_components_2d(&img, Adjacency::Direct2D);
        let indirect = label_components_2d(&img, Adjacency::Indirect2D);
        prop_assert!(direct.count() >= indirect.count());
        // pixels sharing a direct label share an indirect one
        let (d, i) = (direct.labels(), indirect.labels());
        for a in 0..d.len() {
            for b in a + 1..d.len() {
                if d[a] != 0 && d[a] == d[b] {
                    prop_assert_eq!(i[a], i[b]);
                }
            }
        }
    }

    #[test]
    fn extracted_component_is_one_component(img in image(14)) {
        let labels = label_components_2d(&img, Adjacency::Indirect2D);
        for id in 1..=labels.count() {
            let part = labels.extract_image(id).unwrap();
            prop_assert_eq!(label_components_2d(&part, Adjacency::Indirect2D).count(), 1);
        }
    }

    #[test]
    fn corner_identity_on_polyominoes(seed in any::<u64>(), area in 16usize..600) {
        let img = gen_fat_polyomino_2d(seed, area, 2);
        let hist = classify_boundary_2d(&img).unwrap();
        prop_assert_eq!(hist.cp2, hist.cp4 + 4);
        prop_assert!(check_preconditions_2d(&img, &hist).ok);
        prop_assert_eq!(hole_count(&img).unwrap().holes, 0);
    }

    #[test]
    fn holes_agree_with_oracles(img in image(16)) {
        for c in holes_pipeline(&img).unwrap().components {
            let flood = oracle::holes_by_floodfill(&c.image);
            prop_assert_eq!(c.report.holes, flood);
            prop_assert_eq!(flood, 1 - oracle::euler_2d(&c.image).chi);
            if c.report.method == Method::Formula {
                prop_assert!(c.report.precondition_ok);
            }
        }
    }

    #[test]
    fn repair_2d_is_sound_and_idempotent(img in image(16)) {
        let (despeckled, _) = remove_speckles(&img);
        let (fixed, _) = repair_2d(&despeckled).unwrap();
        prop_assert!(find_pathologies_2d(&fixed).is_empty());
        prop_assert!(repair_2d(&fixed).unwrap().1.is_empty());
    }

    #[test]
    fn holes_ignore_translation_and_transpose(img in image(14), pad in 0usize..4) {
        let base = sorted_holes(&img);
        prop_assert_eq!(&base, &sorted_holes(&img.padded(pad)));
        prop_assert_eq!(&base, &sorted_holes(&transpose(&img)));
    }

    #[test]
    fn drilling_adds_holes(seed in any::<u64>(), count in 0usize..4) {
        let img = gen_fat_polyomino_2d(seed, 900, 3).padded(1);
        let (drilled, cut) = drill_holes_2d(&img, seed, count);
        prop_assert_eq!(hole_count(&drilled).unwrap().holes, cut as i64);
    }

    #[test]
    fn extrusion_doubles_corners(seed in any::<u64>(), count in 0usize..3) {
        let img = gen_fat_polyomino_2d(seed, 700, 3).padded(1);
        let (drilled, cut) = drill_holes_2d(&img, seed, count);
        let hist = classify_boundary_2d(&drilled).unwrap();
        let vol = extrude(&drilled, 2).padded(1);
        let surfaces = boundary_surfaces(&vol, false).unwrap();
        prop_assert_eq!(surfaces.len(), 1);
        let m = surfaces[0].histogram.unwrap();
        prop_assert_eq!(m.m6, 0);
        prop_assert_eq!(m.m3, 2 * hist.cp2);
        prop_assert_eq!(m.m5, 2 * hist.cp4);
        prop_assert_eq!(surfaces[0].genus, cut as i64);
    }

    #[test]
    fn pbm_round_trips(img in image(40), raw in any::<bool>()) {
        let fmt = if raw { PbmFormat::Raw } else { PbmFormat::Plain };
        prop_assert_eq!(parse_pbm(&encode_pbm(&img, fmt)).unwrap(), img);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn direct_labels_refine_indirect_3d(vol in volume(7)) {
        let direct = label_components_3d(&vol, Adjacency::Direct3D);
        let indirect = label_components_3d(&vol, Adjacency::Indirect3D);
        prop_assert!(direct.count() >= indirect.count());
    }

    #[test]
    fn repair_3d_is_sound_and_idempotent(vol in volume(7)) {
        if let Ok((fixed, _)) = repair_3d(&vol) {
            prop_assert!(find_pathologies_3d(&fixed).is_empty());
            prop_assert!(repair_3d(&fixed).unwrap().1.is_empty());
        }
    }

    #[test]
    fn genus_agrees_with_euler_oracle(vol in volume(7)) {
        let Ok(outcome) = analyze_volume(&vol, VolumeOptions::default()) else {
            return Ok(());
        };
        for c in &outcome.components {
            let genera: Vec<i64> = c.report.surfaces.iter().map(|s| s.genus).collect();
            prop_assert_eq!(genera, oracle::genus_by_euler(&c.volume).unwrap());
            for s in &c.report.surfaces {
                if let Some(h) = &s.histogram {
                    prop_assert!(oracle::curvature_audit(h, s.genus));
                    prop_assert_eq!(h.m3 + 8 * s.genus as usize, 8 + h.m5 + 2 * h.m6);
                }
            }
        }
    }

    #[test]
    fn blobs_are_spheres(seed in any::<u64>(), size in 64usize..700) {
        let blob = gen_fat_blob_3d(seed, size, 2);
        let surfaces = boundary_surfaces(&blob, false).unwrap();
        prop_assert_eq!(surfaces.len(), 1);
        let m = surfaces[0].histogram.unwrap();
        prop_assert_eq!(m.m3, 8 + m.m5 + 2 * m.m6);
    }

    #[test]
    fn streaming_matches_memory(seed in any::<u64>()) {
        let blob = gen_fat_blob_3d(seed, 300, 2);
        let vol = salt_volume(&blob, seed, 30);
        let Ok((fixed, _)) = repair_3d(&vol) else { return Ok(()); };
        let opts = VolumeOptions { repair: true, fallback: true };
        let summary = stream_surfaces(&mut VolumeSlabs::new(&fixed)).unwrap();
        prop_assert!(summary.stats.peak_slab_buffers <= 3);
        if let Some(streamed) = outcome_from_stream(&summary, opts) {
            prop_assert_eq!(streamed, surfaces_of_volume(&fixed, opts).unwrap());
        }
    }

    #[test]
    fn vox3_round_trips(vol in volume(6)) {
        prop_assert_eq!(parse_vox3(&encode_vox3(&vol)).unwrap(), vol);
    }
}
