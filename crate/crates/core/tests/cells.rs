mod common;

use std::collections::BTreeMap;

use mlm::cells::{
    cell_id, component_labels, connected_regions, label_grid, CellHasher, CellId, Connectivity, GridSpec, LabelGrid,
    LabelOptions,
};
use mlm::geometry::Vec3;
use mlm::metrics::{cell_areas, min_intercell_distance_field};
use mlm::scenes::{generate_canyon_6b, generate_fig2_scene, CanyonParams};
use mlm::tracer::{CandidateEnumeration, ValidityVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{brute_force_distance, random_label_grid};

proptest! {
    #[test]
    fn streamed_hash_matches_one_shot(bits in prop::collection::vec(any::<bool>(), 0..300), split in 0usize..300) {
        let v = ValidityVector::from_bits(bits.iter().copied());
        let split = split.min(bits.len());
        let mut h = CellHasher::new(bits.len());
        for &b in &bits[..split] {
            h.push(b);
        }
        let rest = ValidityVector::from_bits(bits[split..].iter().copied());
        for b in rest.iter() {
            h.push(b);
        }
        prop_assert_eq!(h.finish(), cell_id(&v));
    }

    #[test]
    fn distance_field_matches_brute_force(seed in any::<u64>()) {
        let grid = random_label_grid(&mut ChaCha8Rng::seed_from_u64(seed), 24);
        prop_assert_eq!(min_intercell_distance_field(&grid).values, brute_force_distance(&grid));
    }

    #[test]
    fn metrics_ignore_label_names(seed in any::<u64>()) {
        let grid = random_label_grid(&mut ChaCha8Rng::seed_from_u64(seed), 24);
        // Any bijection of ids leaves distances, areas and region counts alone.
        let renamed = LabelGrid {
            labels: grid.labels.iter().map(|id| {
                let mut d = *id.digest();
                d.reverse();
                d[0] ^= 0x5a;
                CellId::from_parts(d, false)
            }).collect(),
            ..grid.clone()
        };
        prop_assert_eq!(min_intercell_distance_field(&grid), min_intercell_distance_field(&renamed));
        let mut a: Vec<f64> = cell_areas(&grid).into_values().collect();
        let mut b: Vec<f64> = cell_areas(&renamed).into_values().collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        prop_assert_eq!(a, b);
        for c in [Connectivity::Four, Connectivity::Eight] {
            prop_assert_eq!(component_labels(&grid, c).1, component_labels(&renamed, c).1);
        }
    }

    #[test]
    fn regions_add_up_to_components(seed in any::<u64>()) {
        let grid = random_label_grid(&mut ChaCha8Rng::seed_from_u64(seed), 32);
        for c in [Connectivity::Four, Connectivity::Eight] {
            let per_cell: usize = connected_regions(&grid, c).values().sum();
            prop_assert_eq!(per_cell, component_labels(&grid, c).1);
        }
        let four: usize = connected_regions(&grid, Connectivity::Four).values().sum();
        let eight: usize = connected_regions(&grid, Connectivity::Eight).values().sum();
        prop_assert!(eight <= four);
    }

    #[test]
    fn labeling_ignores_chunking_and_workers(chunk in 1usize..40, workers in 1usize..6, ty in -80.0..80.0f64) {
        let scene = generate_canyon_6b(&CanyonParams::default()).unwrap();
        let e = CandidateEnumeration::new(scene.len(), 1).unwrap();
        let spec = GridSpec { nx: 24, ny: 30, x_min: -60.0, x_max: 60.0, y_min: -92.5, y_max: 92.5, altitude: 1.5 };
        let tx = Vec3::new(0.0, ty, 32.0);
        let reference = label_grid(tx, &spec, &e, &scene, &LabelOptions { chunk_size: e.len(), workers: 1, retain_vectors: true }).unwrap();
        let other = label_grid(tx, &spec, &e, &scene, &LabelOptions { chunk_size: chunk, workers, retain_vectors: true }).unwrap();
        prop_assert_eq!(&reference.grid, &other.grid);
        prop_assert_eq!(reference.vectors, other.vectors);
    }
}

#[test]
fn retained_vectors_hash_to_their_cells() {
    let scene = generate_fig2_scene();
    let e = CandidateEnumeration::new(scene.len(), 2).unwrap();
    let spec = GridSpec { nx: 60, ny: 60, x_min: -0.5, x_max: 2.5, y_min: -1.5, y_max: 1.5, altitude: 0.0 };
    let options = LabelOptions { chunk_size: 2, retain_vectors: true, ..LabelOptions::default() };
    let labeling = label_grid(Vec3::ZERO, &spec, &e, &scene, &options).unwrap();
    let cells: BTreeMap<CellId, usize> = labeling.grid.labels.iter().fold(BTreeMap::new(), |mut m, id| {
        *m.entry(*id).or_insert(0) += 1;
        m
    });
    assert_eq!(labeling.vectors.len(), cells.len());
    for (id, v) in &labeling.vectors {
        assert_eq!(cell_id(v), *id);
        assert_eq!(v.len(), e.len());
        assert_eq!(id.is_no_multipath(), v.is_all_zero());
    }
}
