use harvestkit::analytic::stationarity_solve;
use harvestkit::harvest::{
    compute_l, compute_m, density_matrix, negativity, Detector, HarvestParams,
};
use harvestkit::quadrature::QuadSpec;
use harvestkit::sweep_opt::*;
use proptest::prelude::*;

fn q() -> QuadSpec<f64> {
    QuadSpec::default()
}

fn params(omega: f64, mu: f64, sigma: f64, ell: f64) -> HarvestParams<f64> {
    HarvestParams::new(omega, mu, sigma, ell).unwrap()
}

fn neg(p: &HarvestParams<f64>) -> f64 {
    negativity(&density_matrix(p, &q()).unwrap().state)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn maximizer_finds_parabola_vertex(c in 0.2..9.8_f64, tol in 1e-8..1e-3_f64) {
        let r = maximize(|x: f64| Ok(-(x - c).powi(2)), 0.1, 10.0, tol, 25).unwrap();
        prop_assert!((r.arg_max - c).abs() <= tol, "{} vs {c}", r.arg_max);
        prop_assert!(r.bracket.0 <= r.arg_max && r.arg_max <= r.bracket.1);
        prop_assert!(r.bracket.1 - r.bracket.0 <= tol);
        prop_assert!(r.converged);
    }

    #[test]
    fn root_finder_brackets(c in -5.0..5.0_f64) {
        let r = brent_root(|x: f64| (x - c) * (1.0 + x * x), -10.0, 10.0, 1e-12).unwrap();
        prop_assert!((r.x - c).abs() < 1e-10);
    }
}

#[test]
fn omega_optimum_matches_stationarity_root() {
    for l in [5.0, 7.0, 9.0] {
        let r = maximize_over_omega(&params(2.0, 0.0, 0.0, l), &q(), 1e-6)
            .unwrap()
            .unwrap();
        assert!(
            (r.arg_max - stationarity_solve(l).unwrap()).abs() < 0.05,
            "l={l}: {}",
            r.arg_max
        );
    }
    let r = maximize_over_omega(&params(2.0, 0.0, 0.0, 20.0), &q(), 1e-6)
        .unwrap()
        .unwrap();
    assert!((r.arg_max - 10.0).abs() < 0.1);
}

#[test]
fn omega_optimum_is_a_local_maximum() {
    let tol = 1e-4;
    let p = params(2.0, 0.0, 0.2, 5.0);
    let r = maximize_over_omega(&p, &q(), tol).unwrap().unwrap();
    let at = |w: f64| margin(&p.with_gap(w), &q()).unwrap();
    assert!(r.max_value >= at(r.arg_max + 2.0 * tol));
    assert!(r.max_value >= at(r.arg_max - 2.0 * tol));
    assert!((r.arg_max - 2.24).abs() < 0.05, "{}", r.arg_max);
}

#[test]
fn no_entanglement_gives_none() {
    // At this separation every correlation underflows in double precision.
    let far = params(2.0, 0.0, 0.2, 60.0);
    assert!(maximize_over_omega(&far, &q(), 1e-4).unwrap().is_none());
    assert!(maximize_over_mu(&far, &q(), 1e-4, 1.0, GapChoice::Fixed)
        .unwrap()
        .is_none());
    assert!(threshold_omega(&far, &q(), 1e-4).unwrap().is_none());
    // Overlapping detectors are entangled from the smallest gap on: no rising edge.
    assert!(threshold_omega(&params(2.0, 0.0, 0.2, 0.5), &q(), 1e-4)
        .unwrap()
        .is_none());
}

#[test]
fn mass_optimum_is_interior_for_every_size() {
    for sigma in [0.0, 0.1, 0.2] {
        let p = params(2.0, 0.0, sigma, 5.0);
        let r = maximize_over_mu(&p, &q(), 1e-4, 1.0, GapChoice::Optimized(1e-5))
            .unwrap()
            .unwrap();
        let zero = maximize_over_omega(&p, &q(), 1e-5).unwrap().unwrap();
        assert!(
            r.interior && r.result.arg_max <= 0.25,
            "sigma={sigma}: {:?}",
            r.result
        );
        assert!(r.result.max_value > zero.max_value);
    }
}

#[test]
fn mass_optimum_with_fixed_gap() {
    let low = maximize_over_mu(
        &params(1.8, 0.0, 0.2, 5.0),
        &q(),
        1e-4,
        2.0,
        GapChoice::Fixed,
    )
    .unwrap()
    .unwrap();
    assert!(low.interior);
    assert!(low.result.max_value > neg(&params(1.8, 0.0, 0.2, 5.0)));
    let high = maximize_over_mu(
        &params(3.0, 0.0, 0.2, 5.0),
        &q(),
        1e-4,
        2.0,
        GapChoice::Fixed,
    )
    .unwrap()
    .unwrap();
    assert!(!high.interior);
    assert_eq!(high.omega, 3.0);
}

const THRESHOLD_PIN: f64 = 2.057_548_063_511_801;

#[test]
fn threshold_gap() {
    let tol = 1e-8;
    let p = params(2.0, 0.0, 0.2, 5.0);
    let t = threshold_omega(&p, &q(), tol).unwrap().unwrap();
    assert!((t - THRESHOLD_PIN).abs() < 1e-7, "{t}");
    assert_eq!(neg(&p.with_gap(t - tol)), 0.0);
    assert!(neg(&p.with_gap(t + tol)) > 0.0);
    let mut last = t;
    for mu in [0.5, 1.0] {
        let next = threshold_omega(&p.with_mass(mu), &q(), 1e-6)
            .unwrap()
            .unwrap();
        assert!(next < last, "mu={mu}: {next} !< {last}");
        last = next;
    }
}

#[test]
fn one_point_grid_is_direct_evaluation() {
    let p = params(2.4, 0.3, 0.2, 5.0);
    for quantity in Quantity::ALL {
        let grid = SweepGrid {
            axes: vec![],
            fixed: p,
            quantity,
        };
        let rows = run_sweep(&grid, &q()).unwrap();
        assert_eq!(rows.len(), 1);
        let direct = evaluate(quantity, &p, &q()).unwrap().map(|v| v.0);
        assert_eq!(rows[0].value, direct, "{quantity:?}");
    }
}

#[test]
fn local_term_sweep_matches_pointwise_calls() {
    let grid = SweepGrid {
        axes: vec![
            Axis::linear(AxisName::Omega, 1.0, 3.0, 5),
            Axis::linear(AxisName::Mu, 0.0, 1.0, 3),
        ],
        fixed: params(2.0, 0.0, 0.2, 5.0),
        quantity: Quantity::L,
    };
    let rows = run_sweep(&grid, &q()).unwrap();
    assert_eq!(rows.len(), 15);
    for (i, row) in rows.iter().enumerate() {
        // last axis fastest
        let (w, mu) = (1.0 + 0.5 * (i / 3) as f64, 0.5 * (i % 3) as f64);
        assert_eq!(row.params.gap_mean, w);
        assert_eq!(row.params.mass, mu);
        let l = compute_l(&row.params, &q(), Detector::A).unwrap().value;
        assert_eq!(row.value, Some(l));
    }
}

#[test]
fn sweep_is_identical_across_thread_counts() {
    let grid = SweepGrid {
        axes: vec![
            Axis::linear(AxisName::Omega, 1.0, 3.5, 6),
            Axis::linear(AxisName::Mu, 0.0, 1.5, 4),
        ],
        fixed: params(2.0, 0.0, 0.2, 5.0),
        quantity: Quantity::Negativity,
    };
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_sweep(&grid, &q()).unwrap())
    };
    let bits = |rows: Vec<harvestkit::Row>| -> Vec<(u64, u64)> {
        rows.iter()
            .map(|r| (r.value.unwrap().to_bits(), r.error.unwrap().to_bits()))
            .collect()
    };
    let reference = bits(run(1));
    for threads in [2, 3, 8] {
        assert_eq!(bits(run(threads)), reference, "{threads} threads");
    }
}

#[test]
fn failures_stay_in_their_row() {
    // Large coupling breaks the perturbative guard only at small gaps.
    let grid = SweepGrid {
        axes: vec![Axis::linear(AxisName::Omega, 0.0, 3.0, 4)],
        fixed: params(2.0, 0.0, 0.2, 5.0).with_coupling(2.5),
        quantity: Quantity::Negativity,
    };
    let rows = run_sweep(&grid, &q()).unwrap();
    assert!(matches!(rows[0].status, RowStatus::Failed(_)));
    assert_eq!(rows[0].value, None);
    assert_eq!(rows[3].status, RowStatus::Ok);
}

#[test]
fn invalid_grids_are_rejected() {
    let fixed = params(2.0, 0.0, 0.2, 5.0);
    let bad = [
        Axis::linear(AxisName::Mu, 0.0, 1.0, 1),
        Axis::linear(AxisName::Mu, 1.0, 0.0, 5),
        Axis {
            spacing: Spacing::Log,
            ..Axis::linear(AxisName::Mu, 0.0, 1.0, 5)
        },
    ];
    for axis in bad {
        let grid = SweepGrid {
            axes: vec![axis],
            fixed,
            quantity: Quantity::L,
        };
        assert!(run_sweep(&grid, &q()).is_err(), "{axis:?}");
    }
    let twice = SweepGrid {
        axes: vec![
            Axis::linear(AxisName::Mu, 0.0, 1.0, 2),
            Axis::linear(AxisName::Mu, 0.0, 1.0, 2),
        ],
        fixed,
        quantity: Quantity::L,
    };
    assert!(run_sweep(&twice, &q()).is_err());
}

#[test]
fn log_axis_spacing() {
    let a = Axis {
        spacing: Spacing::Log,
        ..Axis::linear(AxisName::Sigma, 0.01_f64, 1.0, 3)
    };
    let v = a.values();
    assert_eq!(v[0], 0.01);
    assert!((v[1] - 0.1).abs() < 1e-15);
    assert_eq!(v[2], 1.0);
}

#[test]
fn mass_derivatives_cross_at_the_mass_peak() {
    let p = params(2.0, 0.0, 0.2, 5.0);
    let step = 0.02;
    let masses: Vec<f64> = (0..16).map(|i| step * i as f64).collect();
    let rows = derivative_curves(&p, &q(), &masses, 1e-6).unwrap();
    assert_eq!(rows.len(), masses.len());
    assert_eq!(rows[0].dl_dmu, 0.0);
    assert_eq!(rows[0].dabs_m_dmu, 0.0);
    let last = rows.last().unwrap();
    assert!(last.dl_dmu < 0.0 && last.dabs_m_dmu < 0.0);
    let crossing = derivative_crossing(&rows).unwrap();
    let peak = maximize_over_mu(&p, &q(), 1e-4, 1.0, GapChoice::Optimized(1e-5))
        .unwrap()
        .unwrap();
    assert!(
        (crossing - peak.result.arg_max).abs() <= 2.0 * step,
        "{crossing} vs {}",
        peak.result.arg_max
    );
}

#[test]
fn regime_boundary_in_mass_dependence() {
    let shape = |w: f64| {
        let grid = SweepGrid {
            axes: vec![Axis::linear(AxisName::Mu, 0.0, 2.0, 41)],
            fixed: params(w, 0.0, 0.2, 5.0),
            quantity: Quantity::Negativity,
        };
        let v: Vec<f64> = run_sweep(&grid, &q())
            .unwrap()
            .iter()
            .map(|r| r.value.unwrap())
            .collect();
        let monotone = v.windows(2).all(|p| p[1] <= p[0]);
        let interior_peak = v.iter().skip(1).any(|&x| x > v[0]);
        (monotone, interior_peak)
    };
    assert_eq!(shape(1.8), (false, true));
    assert_eq!(shape(2.25), (false, true));
    assert_eq!(shape(2.3), (true, false));
    assert_eq!(shape(3.0), (true, false));
}

#[test]
fn local_and_nonlocal_terms_versus_mass() {
    // Below the boundary L starts above |M| and falls faster; above it |M| > L throughout.
    let masses: Vec<f64> = (0..=20).map(|i| 0.1 * i as f64).collect();
    let curves = |w: f64| -> Vec<(f64, f64)> {
        masses
            .iter()
            .map(|&mu| {
                let p = params(w, mu, 0.2, 5.0);
                let l = compute_l(&p, &q(), Detector::A).unwrap().value;
                (l, compute_m(&p, &q()).unwrap().0.norm())
            })
            .collect()
    };
    for w in [1.5, 2.0] {
        let c = curves(w);
        assert!(c[0].0 > c[0].1, "omega={w}");
        assert!(c.iter().any(|&(l, m)| m > l), "omega={w}");
        let drop_l = c[0].0 - c[5].0;
        let drop_m = c[0].1 - c[5].1;
        assert!(drop_l > drop_m);
    }
    assert!(curves(3.0).iter().all(|&(l, m)| m > l));
}

#[test]
fn negativity_decreases_with_gap_mismatch() {
    let q = QuadSpec::new(1e-11, 1e-22).unwrap();
    for w in [2.0, 2.5, 3.0] {
        let p = params(w, 0.0, 0.2, 5.0);
        let at = |d: f64| negativity(&density_matrix(&p.with_gap_split(d), &q).unwrap().state);
        let mut last = at(0.0);
        for i in 1..=15 {
            let d = 0.1 * i as f64;
            let (plus, minus) = (at(d), at(-d));
            assert!(
                (plus - minus).abs() <= 1e-12 * plus.max(1e-300),
                "omega={w} d={d}"
            );
            assert!(plus <= last, "omega={w} d={d}: {plus:e} > {last:e}");
            last = plus;
        }
    }
}
