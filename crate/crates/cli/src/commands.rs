use harvestkit::analytic::{fit_constants, linspace, ExpansionConvention, FitConstants};
use harvestkit::harvest::{density_matrix, NegativityBreakdown};
use harvestkit::sweep_opt::{
    maximize_over_mu, maximize_over_omega, run_sweep, threshold_omega, GapChoice, SweepGrid,
};

use crate::config::{parse_axis_flag, parse_quantity, AxisConfig, Settings, Target};
use crate::error::{CliError, CliResult};
use crate::table::Row;

/// Every matrix element and the negativity breakdown at one point.
pub fn eval(s: &Settings) -> CliResult<Vec<Row>> {
    let p = &s.params;
    let st = density_matrix(p, &s.quad)?;
    let b = NegativityBreakdown::from_state(&st.state);
    let m_err = st.re_m.error + st.im_m.error;
    let l_err = 0.5 * (st.l_aa_err + st.l_bb_err);
    let row = |q: &str, v: f64, e: f64| Row::at(p, q).value(v).err(e);
    let mut rows = vec![
        row("L_AA", st.state.l_aa, st.l_aa_err),
        row("L_BB", st.state.l_bb, st.l_bb_err),
        row("L_AB_re", st.state.l_ab.re, st.l_ab_err),
        row("L_AB_im", st.state.l_ab.im, 0.0),
        row("re_m", st.re_m.value, st.re_m.error),
        row("im_m", st.im_m.value, st.im_m.error),
        row("absM", st.state.m.norm(), m_err),
        row("negativity", b.negativity, m_err + l_err),
        row("n_plus", b.n_plus, st.re_m.error + l_err),
    ];
    rows.push(match b.signalling_fraction {
        Some(f) => Row::at(p, "signalling_fraction").value(f),
        None => Row::at(p, "signalling_fraction").status("undefined"),
    });
    Ok(rows)
}

pub fn sweep(s: &Settings, axes: &[String], quantity: Option<&str>) -> CliResult<Vec<Row>> {
    let configs: Vec<AxisConfig> = if axes.is_empty() {
        s.axes.clone()
    } else {
        axes.iter()
            .map(|a| parse_axis_flag(a))
            .collect::<CliResult<_>>()?
    };
    if configs.is_empty() {
        return Err(CliError::Config(
            "sweep needs at least one --axis (or axes in the config file)".into(),
        ));
    }
    let quantity = parse_quantity(quantity.or(s.quantity.as_deref()).unwrap_or("negativity"))?;
    let grid = SweepGrid {
        axes: configs
            .iter()
            .map(AxisConfig::to_axis)
            .collect::<CliResult<_>>()?,
        fixed: s.params,
        quantity,
    };
    grid.validate()?;
    let rows = s.install(|| run_sweep(&grid, &s.quad))??;
    Ok(rows.iter().map(|r| sweep_row(r)).collect())
}

pub(crate) fn sweep_row(r: &harvestkit::Row) -> Row {
    let mut row = Row::at(&r.params, r.quantity.as_str()).status(r.status.as_str());
    row.value = r.value;
    row.err = r.error.filter(|e| !e.is_nan());
    row
}

pub fn optimize(s: &Settings, target: &Target) -> CliResult<Vec<Row>> {
    let p = &s.params;
    match *target {
        Target::Omega { tol } => {
            let r = maximize_over_omega(p, &s.quad, tol)?;
            Ok(match r {
                Some(r) => vec![
                    Row::at(&p.with_gap(r.arg_max), "omega_max")
                        .value(r.arg_max)
                        .err(tol),
                    Row::at(&p.with_gap(r.arg_max), "negativity").value(r.max_value),
                ],
                None => vec![Row::at(p, "omega_max").status("no entanglement")],
            })
        }
        Target::Mu {
            tol,
            mu_max,
            optimize_gap,
        } => {
            let gap = if optimize_gap {
                GapChoice::Optimized(tol)
            } else {
                GapChoice::Fixed
            };
            let r = maximize_over_mu(p, &s.quad, tol, mu_max, gap)?;
            Ok(match r {
                Some(r) => {
                    let at = p.with_mass(r.result.arg_max).with_gap(r.omega);
                    let status = if r.interior { "interior" } else { "boundary" };
                    vec![
                        Row::at(&at, "mu_max")
                            .value(r.result.arg_max)
                            .err(tol)
                            .status(status),
                        Row::at(&at, "negativity").value(r.result.max_value),
                    ]
                }
                None => vec![Row::at(p, "mu_max").status("no entanglement")],
            })
        }
        Target::Threshold { tol } => Ok(match threshold_omega(p, &s.quad, tol)? {
            Some(w) => vec![Row::at(&p.with_gap(w), "threshold_omega").value(w).err(tol)],
            None => vec![Row::at(p, "threshold_omega").status("no threshold")],
        }),
    }
}

/// Separations of the reference fit.
pub fn fit_grid() -> Vec<f64> {
    linspace(5.0, 12.0, 16)
}

const CONSTANT_TOL: f64 = 0.05;
const L1_TOL: f64 = 0.005;

/// Fitted constants against the reference values; fails verification unless
/// every constant is within 5% and every fit error below 0.5%.
pub fn fit_check() -> CliResult<(Vec<Row>, bool)> {
    let report = fit_constants(&fit_grid(), ExpansionConvention::Standard)?;
    let mut rows = Vec::new();
    let mut ok = true;
    for ((name, got), (_, want)) in report
        .constants
        .as_array()
        .into_iter()
        .zip(FitConstants::REFERENCE.as_array())
    {
        let dev = ((got - want) / want).abs();
        let pass = dev < CONSTANT_TOL;
        ok &= pass;
        rows.push(
            Row::named(name)
                .value(got)
                .err(dev)
                .status(if pass { "pass" } else { "fail" }),
        );
    }
    for (name, e) in ["l1_E", "l1_A", "l1_B"].into_iter().zip(report.l1_relative) {
        let pass = e < L1_TOL;
        ok &= pass;
        rows.push(
            Row::named(name)
                .value(e)
                .status(if pass { "pass" } else { "fail" }),
        );
    }
    Ok((rows, ok))
}
