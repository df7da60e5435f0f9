use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::harvest::{
    breakdown, compute_l, compute_m, density_matrix, im_m, n_plus, negativity, re_m, Detector,
    HarvestParams,
};
use crate::quadrature::QuadSpec;
use crate::real::Real;

/// A swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxisName {
    Omega,
    Mu,
    Sigma,
    Ell,
    DeltaOmega,
}

impl AxisName {
    pub const ALL: [AxisName; 5] = [
        Self::Omega,
        Self::Mu,
        Self::Sigma,
        Self::Ell,
        Self::DeltaOmega,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Omega => "omega",
            Self::Mu => "mu",
            Self::Sigma => "sigma",
            Self::Ell => "ell",
            Self::DeltaOmega => "delta_omega",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.as_str() == s)
    }

    /// Copy of `p` with this coordinate set to `v`.
    pub fn apply<T: Real>(self, p: &HarvestParams<T>, v: T) -> HarvestParams<T> {
        match self {
            Self::Omega => p.with_gap(v),
            Self::Mu => p.with_mass(v),
            Self::Sigma => p.with_size(v),
            Self::Ell => p.with_separation(v),
            Self::DeltaOmega => p.with_gap_split(v),
        }
    }

    pub fn get<T: Real>(self, p: &HarvestParams<T>) -> T {
        match self {
            Self::Omega => p.gap_mean,
            Self::Mu => p.mass,
            Self::Sigma => p.size,
            Self::Ell => p.separation,
            Self::DeltaOmega => p.gap_split,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis<T> {
    pub name: AxisName,
    pub min: T,
    pub max: T,
    pub count: usize,
    pub spacing: Spacing,
}

impl<T: Real> Axis<T> {
    pub fn linear(name: AxisName, min: T, max: T, count: usize) -> Self {
        Self {
            name,
            min,
            max,
            count,
            spacing: Spacing::Linear,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::invalid(format!(
                "axis {} needs at least 2 points",
                self.name.as_str()
            )));
        }
        if !(self.min < self.max) {
            return Err(Error::invalid(format!(
                "axis {} needs min < max",
                self.name.as_str()
            )));
        }
        if self.spacing == Spacing::Log && !(self.min > T::zero()) {
            return Err(Error::invalid(format!(
                "log axis {} needs min > 0",
                self.name.as_str()
            )));
        }
        Ok(())
    }

    pub fn value(&self, i: usize) -> T {
        if i == 0 {
            return self.min;
        }
        if i + 1 == self.count {
            return self.max;
        }
        let t = T::from_usize_lossy(i) / T::from_usize_lossy(self.count - 1);
        match self.spacing {
            Spacing::Linear => self.min + (self.max - self.min) * t,
            Spacing::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * t).exp(),
        }
    }

    pub fn values(&self) -> Vec<T> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

/// Quantity evaluated at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    Negativity,
    NPlus,
    L,
    AbsM,
    ReM,
    ImM,
    SignallingFraction,
}

impl Quantity {
    pub const ALL: [Quantity; 7] = [
        Self::Negativity,
        Self::NPlus,
        Self::L,
        Self::AbsM,
        Self::ReM,
        Self::ImM,
        Self::SignallingFraction,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Negativity => "negativity",
            Self::NPlus => "n_plus",
            Self::L => "L",
            Self::AbsM => "absM",
            Self::ReM => "re_m",
            Self::ImM => "im_m",
            Self::SignallingFraction => "signalling_fraction",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|q| q.as_str() == s)
    }
}

/// Axes swept in row-major order (last axis fastest) around fixed parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid<T> {
    pub axes: Vec<Axis<T>>,
    pub fixed: HarvestParams<T>,
    pub quantity: Quantity,
}

impl<T: Real> SweepGrid<T> {
    pub fn validate(&self) -> Result<()> {
        for (i, a) in self.axes.iter().enumerate() {
            a.validate()?;
            if self.axes[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::invalid(format!(
                    "axis {} listed twice",
                    a.name.as_str()
                )));
            }
        }
        self.fixed.validate()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Parameters of the point with flat index `index`.
    pub fn point(&self, mut index: usize) -> HarvestParams<T> {
        let mut p = self.fixed;
        for a in self.axes.iter().rev() {
            p = a.name.apply(&p, a.value(index % a.count));
            index /= a.count;
        }
        p
    }
}

/// Outcome at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub enum RowStatus {
    Ok,
    /// The quantity is undefined here (signalling fraction without negativity).
    Undefined,
    Failed(String),
}

impl RowStatus {
    pub fn as_str(&self) -> &str {
        match self {
            Self::Ok => "ok",
            Self::Undefined => "undefined",
            Self::Failed(m) => m,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow<T> {
    pub params: HarvestParams<T>,
    pub quantity: Quantity,
    pub value: Option<T>,
    pub error: Option<T>,
    pub status: RowStatus,
}

/// Value and error bound of `quantity` at `p`; `None` where it is undefined.
pub fn evaluate<T: Real>(
    quantity: Quantity,
    p: &HarvestParams<T>,
    q: &QuadSpec<T>,
) -> Result<Option<(T, T)>> {
    let v = match quantity {
        Quantity::L => {
            let l = compute_l(p, q, Detector::A)?;
            (l.value, l.error)
        }
        Quantity::ReM => {
            let r = re_m(p, q)?;
            (r.value, r.error)
        }
        Quantity::ImM => {
            let r = im_m(p, q)?;
            (r.value, r.error)
        }
        Quantity::AbsM => {
            let (m, err) = compute_m(p, q)?;
            (m.norm(), err)
        }
        Quantity::Negativity => {
            let s = density_matrix(p, q)?;
            let err = s.re_m.error + s.im_m.error + T::c(0.5) * (s.l_aa_err + s.l_bb_err);
            (negativity(&s.state), err)
        }
        Quantity::NPlus => {
            if p.equal_gaps() {
                let r = n_plus(p, q)?;
                (r.value, r.error)
            } else {
                let s = density_matrix(p, q)?;
                let b = crate::harvest::NegativityBreakdown::from_state(&s.state);
                (
                    b.n_plus,
                    s.re_m.error + T::c(0.5) * (s.l_aa_err + s.l_bb_err),
                )
            }
        }
        Quantity::SignallingFraction => match breakdown(p, q)?.signalling_fraction {
            Some(f) => (f, T::nan()),
            None => return Ok(None),
        },
    };
    Ok(Some(v))
}

/// Evaluates the grid. Rows come back in grid order whatever the number of
/// worker threads; failures are recorded per row.
pub fn run_sweep<T: Real>(grid: &SweepGrid<T>, q: &QuadSpec<T>) -> Result<Vec<SweepRow<T>>> {
    grid.validate()?;
    q.validate()?;
    let rows = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let params = grid.point(i);
            let (value, error, status) = match evaluate(grid.quantity, &params, q) {
                Ok(Some((v, e))) => (Some(v), Some(e), RowStatus::Ok),
                Ok(None) => (None, None, RowStatus::Undefined),
                Err(e) => (None, None, RowStatus::Failed(e.to_string())),
            };
            SweepRow {
                params,
                quantity: grid.quantity,
                value,
                error,
                status,
            }
        })
        .collect();
    Ok(rows)
}
