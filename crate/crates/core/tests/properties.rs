use cogradar::array::AngleGrid;
use cogradar::detection::discretize;
use cogradar::engine::format_float;
use cogradar::waveform::{gain_matrix, power_aware_waveform, weighted_beampatterns, TargetWeight};
use proptest::prelude::*;

proptest! {
    #[test]
    fn maxmin_beats_every_vertex_and_uniform(
        bins in prop::collection::btree_set(0usize..20, 2..4),
        exps in prop::collection::vec(-9.0..-5.0f64, 3),
    ) {
        let grid = AngleGrid::new(20).unwrap();
        let weights: Vec<TargetWeight> = bins
            .iter()
            .zip(&exps)
            .map(|(&b, &e)| TargetWeight { theta_deg: grid.center_deg(b), delta: 10f64.powf(e) })
            .collect();
        let m = weights.len();
        let spec = power_aware_waveform(&weights, 8, 1.0).unwrap();
        let best = weighted_beampatterns(&spec, &weights).into_iter().fold(f64::INFINITY, f64::min);
        let g = gain_matrix(&weights.iter().map(|w| w.theta_deg).collect::<Vec<_>>(), 8);
        let value = |p: &[f64]| (0..m)
            .map(|k| weights[k].delta * (0..m).map(|j| g[k][j] * p[j]).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        let uniform = vec![1.0 / m as f64; m];
        prop_assert!(best >= value(&uniform) * (1.0 - 1e-9));
        for v in 0..m {
            let mut p = vec![0.0; m];
            p[v] = 1.0;
            prop_assert!(best >= value(&p) * (1.0 - 1e-9));
        }
    }

    #[test]
    fn discretize_is_monotone(a in 0.0..50.0f64, b in 0.0..50.0f64, sigma in 0.01..5.0f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(discretize(lo, sigma) <= discretize(hi, sigma));
    }

    #[test]
    fn grid_bin_contains_angle(bins in 1usize..200, angle in -90.0..90.0f64) {
        let grid = AngleGrid::new(bins).unwrap();
        let k = grid.bin_of_angle(angle).unwrap();
        let (lo, hi) = grid.edges_deg(k);
        prop_assert!(lo <= angle + 1e-12 && angle < hi + 1e-12);
    }

    #[test]
    fn float_format_keeps_nine_digits(v in prop::num::f64::NORMAL) {
        let back: f64 = format_float(v).parse().unwrap();
        prop_assert!(((back - v) / v).abs() <= 5e-9);
    }
}
