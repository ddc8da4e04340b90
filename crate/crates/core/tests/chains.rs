use spindiscord::quadrature::QuadratureConfig;
use spindiscord::xxz::{pair_reduced_density, SectorBasis};
use spindiscord::xy::{g_coefficient, g_coefficient_estimate, magnetization};
use spindiscord::*;

#[test]
fn tighter_tolerance_converges() {
    let params = XYParams::ground(0.5, 0.9).unwrap();
    let reference = g_coefficient_estimate(7, &params, &QuadratureConfig::with_tolerance(1e-13))
        .unwrap()
        .value;
    for tol in [1e-4, 1e-6, 1e-8, 1e-10] {
        let est = g_coefficient_estimate(7, &params, &QuadratureConfig::with_tolerance(tol)).unwrap();
        assert!(
            (est.value - reference).abs() <= tol,
            "tol {tol}: {}",
            (est.value - reference).abs()
        );
        assert!(est.error <= tol);
    }
}

#[test]
fn low_temperature_matches_ground_state_away_from_criticality() {
    for lambda in [0.5, 1.5] {
        let cold = XYChain::new(XYParams::new(0.5, lambda, Temperature::Beta(1e4)).unwrap(), 4).unwrap();
        let ground = XYChain::new(XYParams::ground(0.5, lambda).unwrap(), 4).unwrap();
        assert!((cold.magnetization.value - ground.magnetization.value).abs() < 1e-6);
        for n in 1..=4 {
            let (x, y) = (cold.observables(n).unwrap(), ground.observables(n).unwrap());
            assert!((x.gxx - y.gxx).abs() < 1e-6);
            assert!((x.gyy - y.gyy).abs() < 1e-6);
            assert!((x.gzz - y.gzz).abs() < 1e-6);
        }
    }
}

#[test]
fn high_temperature_pair_is_nearly_uncorrelated() {
    let hot = build_pair_state(1, &XYParams::new(0.5, 0.5, Temperature::Beta(1e-3)).unwrap()).unwrap();
    assert!(quantum_discord(&hot, DiscordMethod::Optimized).unwrap().discord < 1e-6);
}

#[test]
fn zero_field_coupling_limit() {
    // λ = 0: fully polarized, all off-site coefficients vanish.
    let params = XYParams::ground(0.7, 0.0).unwrap();
    assert!((g_coefficient(0, &params).unwrap() - 1.0).abs() < 1e-10);
    for n in [-3, -1, 1, 2, 5] {
        assert!(g_coefficient(n, &params).unwrap().abs() < 1e-9);
    }
}

#[test]
fn strong_coupling_kills_magnetization() {
    let mz = magnetization(&XYParams::ground(1.0, 100.0).unwrap()).unwrap();
    assert!(mz.abs() < 0.01, "{mz}");
}

#[test]
fn pair_state_spectrum_is_physical() {
    let rho = build_pair_state(2, &XYParams::ground(0.5, 1.5).unwrap()).unwrap();
    let mut a = pair_spectrum(&rho).unwrap();
    let mut b = rho.eigenvalues();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-14));
    assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!(a[0] >= 0.0);
}

#[test]
fn heatmap_is_row_major_with_masked_cells() {
    let gammas = [0.5, 1.0];
    let lambdas = [0.0, 0.5, 1.5];
    let cells = heatmap_scan(&gammas, &lambdas, 5, 1e-10).unwrap();
    assert_eq!(cells.len(), 6);
    for (k, cell) in cells.iter().enumerate() {
        assert_eq!(cell.gamma, gammas[k / 3]);
        assert_eq!(cell.lambda, lambdas[k % 3]);
    }
    // λ = 0 is a product state, so the ratio is undefined.
    assert!(cells[0].ratio.is_none());
    assert!(cells[1].ratio.is_some());
}

#[test]
fn xxz_marginals_agree_across_pairs() {
    for (delta, h) in [(0.5, 1.0), (-1.5, 0.3), (1.5, 5.0)] {
        let gs = ground_state(&XXZSystem::new(10, delta, h).unwrap()).unwrap();
        for j in 2..=9 {
            let left = pair_reduced_density(&gs, j - 1, j).unwrap();
            let right = pair_reduced_density(&gs, j, j + 1).unwrap();
            let (_, mz_second, ..) = left.correlators();
            let (mz_first, ..) = right.correlators();
            assert!((mz_second - mz_first).abs() < 1e-12);
            let tr = left.p_uu + left.p_ud + left.p_du + left.p_dd;
            assert!((tr - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn xxz_reflection_with_spin_flip() {
    // The boundary fields are odd under reflection, so reflecting the chain and
    // flipping every spin is a symmetry of a non-degenerate ground state.
    let n = 10;
    let gs = ground_state(&XXZSystem::new(n, 0.5, 1.0).unwrap()).unwrap();
    assert_eq!(gs.sector, 0);
    assert!(!gs.is_degenerate());
    for (i, j) in [(1, 2), (3, 7), (5, 6)] {
        let direct = pair_reduced_density(&gs, i, j).unwrap().correlators();
        let mirror = pair_reduced_density(&gs, n + 1 - j, n + 1 - i)
            .unwrap()
            .swapped()
            .spin_flipped()
            .correlators();
        for (x, y) in [
            (direct.0, mirror.0),
            (direct.1, mirror.1),
            (direct.2, mirror.2),
            (direct.3, mirror.3),
            (direct.4, mirror.4),
        ] {
            assert!((x - y).abs() < 1e-9, "({i},{j}): {x} vs {y}");
        }
    }
}

#[test]
fn sector_dimensions_are_binomial() {
    let n = 12;
    let total: usize = (0..=n).map(|k| SectorBasis::new(n, k).unwrap().dim()).sum();
    assert_eq!(total, 1 << n);
}

#[test]
fn critical_field_domain() {
    assert!((critical_field(3.0).unwrap() - 2.0f64.sqrt()).abs() < 1e-15);
    assert_eq!(critical_field(1.0).unwrap(), 0.0);
    assert!(critical_field(0.5).is_err());
}

#[test]
fn halving_tolerance_stays_within_error_estimate() {
    use spindiscord::xy::magnetization_estimate;
    for (gamma, lambda) in [(0.5, 0.5), (1.0, 1.0), (0.1, 1.5)] {
        let params = XYParams::ground(gamma, lambda).unwrap();
        let (coarse, fine) = (
            QuadratureConfig::with_tolerance(1e-8),
            QuadratureConfig::with_tolerance(5e-9),
        );
        let (a, b) = (
            magnetization_estimate(&params, &coarse).unwrap(),
            magnetization_estimate(&params, &fine).unwrap(),
        );
        assert!((a.value - b.value).abs() <= a.error.max(1e-15));
        for n in -6..=6 {
            let a = g_coefficient_estimate(n, &params, &coarse).unwrap();
            let b = g_coefficient_estimate(n, &params, &fine).unwrap();
            assert!((a.value - b.value).abs() <= a.error.max(1e-15), "n={n}");
        }
    }
}

#[test]
fn finite_chains_approach_the_thermodynamic_limit() {
    use spindiscord_oracle::xy_finite_chain;
    for lambda in [0.5, 1.5] {
        let exact = XYChain::new(XYParams::ground(0.5, lambda).unwrap(), 2).unwrap();
        for n in 1..=2 {
            let o = exact.observables(n).unwrap();
            let gap = |sites| {
                let f = xy_finite_chain(0.5, lambda, sites, n).unwrap();
                (o.mz.abs() - f.abs_mz).abs() + (o.gxx - f.gxx).abs() + (o.gyy - f.gyy).abs() + (o.gzz - f.gzz).abs()
            };
            let (g10, g12, g14) = (gap(10), gap(12), gap(14));
            assert!(g14 <= g12 && g12 <= g10, "λ={lambda} n={n}: {g10:e} {g12:e} {g14:e}");
        }
    }
}
