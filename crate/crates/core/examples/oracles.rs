//! Cross-checks formula results against the flood-fill and Euler oracles.

use digitopo::shapes::{gen_fat_blob_3d, gen_scene_2d};
use digitopo::topo2d::holes_pipeline;
use digitopo::topo3d::{analyze_volume, VolumeOptions};
use digitopo::{oracle, Method};

fn main() -> digitopo::Result<()> {
    let mut fallbacks = 0;
    for seed in 0..50 {
        let scene = gen_scene_2d(seed, 64);
        for c in holes_pipeline(&scene)?.components {
            let flood = oracle::holes_by_floodfill(&c.image);
            let euler = 1 - oracle::euler_2d(&c.image).chi;
            assert_eq!((c.report.holes, flood), (euler, euler), "seed {seed}");
            fallbacks += (c.report.method == Method::OracleFallback) as usize;
        }
    }
    println!("50 scenes agree ({fallbacks} components needed the fallback)");

    for seed in 0..20 {
        let blob = gen_fat_blob_3d(seed, 300, 2);
        for c in analyze_volume(&blob, VolumeOptions::default())?.components {
            let formula: Vec<i64> = c.report.surfaces.iter().map(|s| s.genus).collect();
            assert_eq!(formula, oracle::genus_by_euler(&c.volume)?);
            for s in &c.report.surfaces {
                let h = s.histogram.as_ref().unwrap();
                assert!(oracle::curvature_audit(h, s.genus));
            }
        }
    }
    println!("20 blobs agree with the cubical Euler oracle");
    Ok(())
}
