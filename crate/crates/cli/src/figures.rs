//! Figure data by figure id. Every figure is one table; series are
//! told apart by the coordinate columns and the `quantity` column.

use harvestkit::analytic::{epsilon_solve, ExpansionConvention};
use harvestkit::harvest::wightman;
use harvestkit::sweep_opt::{
    derivative_crossing, derivative_curves, evaluate, maximize_over_mu, maximize_over_omega,
    run_sweep, Axis, AxisName, GapChoice, Quantity, SweepGrid,
};
use harvestkit::{Params, Spec};
use rayon::prelude::*;

use crate::commands::sweep_row;
use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::table::Row;

/// Figure identifiers accepted by `figure`.
pub const FIGURES: [&str; 12] = [
    "1", "3", "4", "5", "6", "7", "8", "9", "10", "11", "12", "A1",
];

const OMEGA_TOL: f64 = 1e-5;
const MU_TOL: f64 = 1e-4;

fn base() -> Params {
    Params::new(2.0, 0.0, 0.2, 5.0).expect("valid base point")
}

fn grid(fixed: Params, quantity: Quantity, axes: Vec<Axis<f64>>, q: &Spec) -> CliResult<Vec<Row>> {
    let g = SweepGrid {
        axes,
        fixed,
        quantity,
    };
    Ok(run_sweep(&g, q)?.iter().map(sweep_row).collect())
}

fn lin(name: AxisName, min: f64, max: f64, count: usize) -> Axis<f64> {
    Axis::linear(name, min, max, count)
}

fn steps(min: f64, max: f64, count: usize) -> Vec<f64> {
    lin(AxisName::Mu, min, max, count).values()
}

fn failed(p: &Params, quantity: &str, e: harvestkit::Error) -> Row {
    Row::at(p, quantity).status(e.to_string())
}

/// Negativity at the best gap, one row per mass.
fn best_gap_rows(p: Params, masses: &[f64], q: &Spec) -> Vec<Row> {
    const NAME: &str = "negativity_max_omega";
    masses
        .par_iter()
        .map(|&mu| {
            let pm = p.with_mass(mu);
            match maximize_over_omega(&pm, q, OMEGA_TOL) {
                Ok(Some(r)) => Row::at(&pm.with_gap(r.arg_max), NAME)
                    .value(r.max_value)
                    .err(OMEGA_TOL),
                Ok(None) => Row::at(&pm, NAME).value(0.0).status("no entanglement"),
                Err(e) => failed(&pm, NAME, e),
            }
        })
        .collect()
}

/// Negativity at the best mass on [0, 2], one row per gap.
fn best_mass_rows(p: Params, gaps: &[f64], q: &Spec) -> Vec<Row> {
    const NAME: &str = "negativity_max_mu";
    gaps.par_iter()
        .map(|&w| {
            let pw = p.with_gap(w);
            match maximize_over_mu(&pw, q, MU_TOL, 2.0, GapChoice::Fixed) {
                Ok(Some(r)) => Row::at(&pw.with_mass(r.result.arg_max), NAME)
                    .value(r.result.max_value)
                    .err(MU_TOL),
                Ok(None) => Row::at(&pw, NAME).value(0.0).status("no entanglement"),
                Err(e) => failed(&pw, NAME, e),
            }
        })
        .collect()
}

/// Location of the mass peak with the gap optimized at every mass.
fn peak_row(p: Params, mu_max: f64, q: &Spec) -> Row {
    const NAME: &str = "peak_mu";
    match maximize_over_mu(&p, q, MU_TOL, mu_max, GapChoice::Optimized(OMEGA_TOL)) {
        Ok(Some(r)) => Row::at(&p.with_mass(r.result.arg_max).with_gap(r.omega), NAME)
            .value(r.result.arg_max)
            .err(MU_TOL)
            .status(if r.interior { "interior" } else { "boundary" }),
        Ok(None) => Row::at(&p, NAME).status("no entanglement"),
        Err(e) => failed(&p, NAME, e),
    }
}

/// Divides each series (rows sharing `key`) by its largest value.
fn normalize(rows: &mut [Row], key: impl Fn(&Row) -> u64, suffix: &str) {
    let mut peaks = std::collections::HashMap::new();
    for r in rows.iter() {
        if let Some(v) = r.value {
            let e = peaks.entry(key(r)).or_insert(f64::NEG_INFINITY);
            *e = f64::max(*e, v);
        }
    }
    for r in rows.iter_mut() {
        let peak = peaks[&key(r)];
        if peak > 0.0 {
            r.value = r.value.map(|v| v / peak);
            r.err = r.err.filter(|_| false);
        }
        r.quantity.push_str(suffix);
    }
}

fn figure_1() -> CliResult<Vec<Row>> {
    let mut rows = Vec::new();
    for dx in [0.5, 1.0, 2.0] {
        for m in steps(0.0, 5.0, 51) {
            let w = wightman(0.0, dx, m, 4, 1e-12)?;
            let mut row = Row::named("wightman").value(w.re);
            row.mu = m;
            row.ell = dx;
            rows.push(row);
        }
    }
    Ok(rows)
}

fn figure_3(q: &Spec) -> CliResult<Vec<Row>> {
    let mut rows = Vec::new();
    for mu in [0.0, 0.5, 1.0, 1.5, 2.0] {
        rows.extend(grid(
            base().with_mass(mu),
            Quantity::Negativity,
            vec![lin(AxisName::Omega, 0.5, 4.5, 81)],
            q,
        )?);
    }
    Ok(rows)
}

fn figure_4(q: &Spec) -> CliResult<Vec<Row>> {
    let mut rows = Vec::new();
    for w in [1.5, 1.8, 2.0, 2.3, 2.5, 3.0] {
        rows.extend(grid(
            base().with_gap(w),
            Quantity::Negativity,
            vec![lin(AxisName::Mu, 0.0, 2.0, 41)],
            q,
        )?);
    }
    Ok(rows)
}

fn figure_5(q: &Spec) -> CliResult<Vec<Row>> {
    let mut rows = Vec::new();
    for w in [1.5, 2.0, 3.0] {
        for quantity in [Quantity::L, Quantity::AbsM] {
            rows.extend(grid(
                base().with_gap(w),
                quantity,
                vec![lin(AxisName::Mu, 0.0, 2.0, 41)],
                q,
            )?);
        }
    }
    Ok(rows)
}

fn figure_6(q: &Spec) -> CliResult<Vec<Row>> {
    let axes = || {
        vec![
            lin(AxisName::Omega, 0.5, 4.5, 50),
            lin(AxisName::Mu, 0.0, 3.0, 50),
        ]
    };
    let mut rows = grid(base(), Quantity::Negativity, axes(), q)?;
    rows.extend(grid(base(), Quantity::SignallingFraction, axes(), q)?);
    Ok(rows)
}

fn mass_peaks(sigmas: &[f64], masses: &[f64], mu_max: f64, q: &Spec) -> Vec<Row> {
    let mut rows = Vec::new();
    for &s in sigmas {
        let p = base().with_size(s);
        rows.extend(best_gap_rows(p, masses, q));
        rows.push(peak_row(p, mu_max, q));
    }
    rows
}

fn figure_9(q: &Spec) -> Vec<Row> {
    let mut rows = Vec::new();
    for ell in [4.0, 5.0, 6.0, 8.0] {
        rows.extend(best_gap_rows(
            base().with_separation(ell),
            &steps(0.0, 1.0, 41),
            q,
        ));
    }
    normalize(&mut rows, |r| r.ell.to_bits(), "_normalized");
    rows
}

fn figure_10(q: &Spec) -> CliResult<Vec<Row>> {
    let p = base();
    let curves = derivative_curves(&p, q, &steps(0.0, 0.5, 26), OMEGA_TOL)?;
    let mut rows = Vec::new();
    for c in &curves {
        let at = p.with_mass(c.mu).with_gap(c.omega_max);
        rows.push(Row::at(&at, "dL_dmu").value(c.dl_dmu));
        rows.push(Row::at(&at, "dabsM_dmu").value(c.dabs_m_dmu));
        rows.push(Row::at(&at, "negativity").value(c.negativity));
    }
    let crossing = derivative_crossing(&curves);
    rows.push(match crossing {
        Some(mu) => Row::at(&p.with_mass(mu), "crossing_mu").value(mu),
        None => Row::at(&p, "crossing_mu").status("no crossing"),
    });
    rows.push(peak_row(p, 1.0, q));
    Ok(rows)
}

fn figure_11(q: &Spec) -> Vec<Row> {
    let mut rows = Vec::new();
    for s in [0.1, 0.2, 0.3] {
        rows.extend(best_mass_rows(base().with_size(s), &steps(1.0, 4.0, 31), q));
    }
    let mut by_ell = Vec::new();
    for ell in [4.0, 5.0, 6.0, 8.0] {
        by_ell.extend(best_mass_rows(
            base().with_separation(ell),
            &steps(1.0, 5.0, 41),
            q,
        ));
    }
    normalize(&mut by_ell, |r| r.ell.to_bits(), "_normalized");
    rows.extend(by_ell);
    rows
}

fn figure_12(q: &Spec) -> Vec<Row> {
    let mut rows = Vec::new();
    for s in [0.0, 0.1, 0.2, 0.3] {
        let p = base().with_size(s);
        let masses = steps(0.0, 1.0, 21);
        rows.extend(
            masses
                .par_iter()
                .map(|&mu| {
                    let pm = p.with_mass(mu);
                    match maximize_over_omega(&pm, q, OMEGA_TOL) {
                        Ok(Some(r)) => Row::at(&pm.with_gap(r.arg_max), "omega_max")
                            .value(r.arg_max)
                            .err(OMEGA_TOL),
                        Ok(None) => Row::at(&pm, "omega_max").status("no entanglement"),
                        Err(e) => failed(&pm, "omega_max", e),
                    }
                })
                .collect::<Vec<_>>(),
        );
        for &mu in &masses {
            let pm = p.with_mass(mu);
            rows.push(
                match epsilon_solve(pm.separation, mu, s, ExpansionConvention::Standard) {
                    Ok(g) => {
                        Row::at(&pm.with_gap(g.omega_max), "omega_max_expansion").value(g.omega_max)
                    }
                    Err(e) => failed(&pm, "omega_max_expansion", e),
                },
            );
        }
    }
    rows
}

fn figure_a1(q: &Spec) -> Vec<Row> {
    // Integer steps keep the grid exactly symmetric about zero.
    let splits: Vec<f64> = (-15..=15).map(|i| 0.1 * f64::from(i)).collect();
    let mut rows = Vec::new();
    for w in [2.0, 2.5, 3.0] {
        let p = base().with_gap(w);
        rows.extend(
            splits
                .par_iter()
                .map(|&d| {
                    let pd = p.with_gap_split(d);
                    let row = Row::at(&pd, Quantity::Negativity.as_str());
                    match evaluate(Quantity::Negativity, &pd, q) {
                        Ok(Some((v, e))) => row.value(v).err(e),
                        Ok(None) => row.status("undefined"),
                        Err(e) => row.status(e.to_string()),
                    }
                })
                .collect::<Vec<_>>(),
        );
    }
    rows
}

pub fn figure(id: &str, s: &Settings) -> CliResult<Vec<Row>> {
    let q = &s.quad;
    let id = id.trim();
    if id == "2" {
        return Err(CliError::Config(
            "figure 2 is a schematic of the detector smearings and has no data; try 1, 3-12 or A1"
                .into(),
        ));
    }
    let run = || -> CliResult<Vec<Row>> {
        match id.to_ascii_uppercase().as_str() {
            "1" => figure_1(),
            "3" => figure_3(q),
            "4" => figure_4(q),
            "5" => figure_5(q),
            "6" => figure_6(q),
            "7" => Ok(mass_peaks(
                &[0.1, 0.2, 0.3, 0.4],
                &steps(0.0, 1.0, 41),
                1.0,
                q,
            )),
            "8" => Ok(mass_peaks(
                &[0.0, 0.05, 0.1, 0.15, 0.2],
                &steps(0.0, 0.3, 31),
                0.3,
                q,
            )),
            "9" => Ok(figure_9(q)),
            "10" => figure_10(q),
            "11" => Ok(figure_11(q)),
            "12" => Ok(figure_12(q)),
            "A1" => Ok(figure_a1(q)),
            _ => Err(CliError::Config(format!(
                "unknown figure {id:?}; expected one of {}",
                FIGURES.join(", ")
            ))),
        }
    };
    s.install(run)?
}
