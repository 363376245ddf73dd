use proptest::prelude::*;

use bandedge_ldos::crystal::{find_gap, BandEdge, EdgeSide, UnitCell};
use bandedge_ldos::exponent::{
    analyse_position, estimate_eta, prefactor_k, sample_ldos_loglog, sample_loglog, slope_curve,
    z_grid, EdgeApproach, SlopePoint,
};
use bandedge_ldos::Error;

fn slope_at(slopes: &[SlopePoint], z: f64) -> f64 {
    slopes
        .iter()
        .min_by(|a, b| (a.z - z).abs().total_cmp(&(b.z - z).abs()))
        .unwrap()
        .dydz
}

fn lower_edge() -> (UnitCell, BandEdge) {
    let cell = UnitCell::default_crystal();
    let (lo, _) = find_gap(&cell, 1).unwrap();
    (cell, lo)
}

proptest! {
    #[test]
    fn synthetic_power_law_is_recovered(
        eta in -1.0f64..=1.0,
        k in 1e-3f64..=100.0,
        wc in 0.5f64..10.0,
        upper in any::<bool>(),
    ) {
        let side = if upper { EdgeSide::Upper } else { EdgeSide::Lower };
        let z = z_grid(-8.0, -1.0, 71).unwrap();
        let s = sample_loglog(0.1, EdgeApproach::new(wc, side), &z, |d| Ok(k * d.offset.powf(eta))).unwrap();
        let est = estimate_eta(0.1, &slope_curve(&s).unwrap(), 0.02).unwrap();
        prop_assert!(est.converged);
        prop_assert!((est.eta_hat - eta).abs() < 1e-10);
        prop_assert!((prefactor_k(&s, &est, wc).unwrap() - k).abs() < 1e-6 * k.max(1.0));
    }
}

#[test]
fn edge_perturbation_barely_moves_the_slope() {
    let (cell, lo) = lower_edge();
    let z = z_grid(-7.0, -1.0, 61).unwrap();
    let base = analyse_position(&cell, EdgeApproach::from(&lo), 0.0, &z, 0.02).unwrap();
    let shifted = EdgeApproach::lower(lo.omega_c * (1.0 + 1e-12));
    let moved = analyse_position(&cell, shifted, 0.0, &z, 0.02).unwrap();
    assert!((base.estimate.eta_hat - moved.estimate.eta_hat).abs() < 1e-3);
}

#[test]
fn universality_and_monotone_convergence_depth() {
    let (cell, lo) = lower_edge();
    let z = z_grid(-8.0, -1.0, 71).unwrap();
    let mut previous = f64::INFINITY;
    for i in 0..8 {
        let x = i as f64 / 16.0;
        let r = analyse_position(&cell, EdgeApproach::from(&lo), x, &z, 0.02).unwrap();
        assert!(r.estimate.converged, "x = {x}");
        assert!((r.estimate.eta_hat + 0.5).abs() < 0.02);
        assert!(r.estimate.z_converged < previous, "x = {x}: {}", r.estimate.z_converged);
        previous = r.estimate.z_converged;
    }
}

#[test]
fn the_node_itself_has_exponent_plus_one_half() {
    // |E(0.5)|² vanishes at the edge and grows linearly in u, so ρ ~ u^{+1/2}.
    let (cell, lo) = lower_edge();
    let z = z_grid(-8.0, -1.0, 71).unwrap();
    let r = analyse_position(&cell, EdgeApproach::from(&lo), 0.5, &z, 0.02).unwrap();
    assert!((slope_at(&r.slopes, -8.0) - 0.5).abs() < 0.01);
    assert!(r.estimate.converged);
    assert!((r.estimate.eta_hat - 0.5).abs() < 0.02);
}

#[test]
fn near_node_position_converges_late() {
    let (cell, lo) = lower_edge();
    let x = 7.0 / 16.0;
    let z = z_grid(-8.0, -1.0, 71).unwrap();
    let r = analyse_position(&cell, EdgeApproach::from(&lo), x, &z, 0.02).unwrap();
    assert!((slope_at(&r.slopes, -2.0) + 0.5).abs() > 0.2);
    assert!((slope_at(&r.slopes, -8.0) + 0.5).abs() < 0.05);

    let short = z_grid(-3.0, -1.0, 21).unwrap();
    let r = analyse_position(&cell, EdgeApproach::from(&lo), x, &short, 0.02).unwrap();
    assert!(!r.estimate.converged);
    assert!(r.estimate.k_hat.is_none());
}

#[test]
fn integer_grid_samples_are_valid_and_grow_towards_the_edge() {
    let (cell, lo) = lower_edge();
    let z: Vec<f64> = (1..=8).map(|i| -(i as f64)).collect();
    let s = sample_ldos_loglog(&cell, EdgeApproach::from(&lo), 0.0, &z).unwrap();
    assert_eq!(s.len(), 8);
    assert!(s.iter().all(|p| p.valid));
    for pair in s.windows(2) {
        assert!(pair[1].y > pair[0].y);
    }
}

#[test]
fn prefactor_is_largest_at_the_field_maximum() {
    let (cell, lo) = lower_edge();
    let z = z_grid(-8.0, -1.0, 71).unwrap();
    let k = |x| {
        analyse_position(&cell, EdgeApproach::from(&lo), x, &z, 0.02)
            .unwrap()
            .estimate
            .k_hat
            .unwrap()
    };
    assert!(k(0.0) > k(0.25));
}

#[test]
fn upper_edge_swaps_the_roles_of_the_layers() {
    let cell = UnitCell::default_crystal();
    let (_, hi) = find_gap(&cell, 1).unwrap();
    let z = z_grid(-8.0, -1.0, 71).unwrap();
    let r = analyse_position(&cell, EdgeApproach::from(&hi), 0.5, &z, 0.02).unwrap();
    assert!(r.estimate.converged);
    assert!((r.estimate.eta_hat + 0.5).abs() < 0.02);
    // the upper-edge mode has its node at the dielectric centre
    let r = analyse_position(&cell, EdgeApproach::from(&hi), 0.0, &z, 0.02).unwrap();
    assert!((r.estimate.eta_hat - 0.5).abs() < 0.02);
}

#[test]
fn homogeneous_medium_has_no_gap() {
    let err = find_gap(&UnitCell::homogeneous(1.5).unwrap(), 1).unwrap_err();
    assert!(matches!(err, Error::NoBandGap { .. }), "{err}");
}
