//! Thermalization-strength sweeps and the information-backflow measure.
//!
//! With the switch off, `I(A:CM)` dissipates monotonically into the
//! baths as `s` grows.  With the switch on there is a turning point
//! past which information flows back; the integral of the positive
//! derivative past that point is the non-Markovianity measure reported
//! here.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::infomeasures::{
    computational_basis, family_mutual_information, family_output, free_coherence, InputParameter,
};
use crate::qmath::require;
use crate::scalar::Scalar;
use crate::switch::ControlState;
use crate::thermal::{Temperature, ThermalizationStrength};

/// One row of a strength sweep; all entropic fields in bits.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRecord<T> {
    pub s: T,
    pub i_on: T,
    pub i_off: T,
    pub delta_i: T,
    pub a_c: T,
}

/// Sweep configuration; `grid` must be strictly increasing within
/// `[0, 1]`.
#[derive(Debug, Clone)]
pub struct SweepConfig<T> {
    pub temperature: Temperature<T>,
    pub p: InputParameter<T>,
    pub grid: Vec<T>,
    pub omega_on: ControlState<T>,
    pub omega_off: ControlState<T>,
}

impl<T: Scalar> SweepConfig<T> {
    /// 101 uniform grid points on `[0, 1]` with the standard on/off
    /// control states.
    pub fn standard(temperature: Temperature<T>, p: InputParameter<T>) -> Self {
        Self::with_grid_points(temperature, p, 101)
    }

    pub fn with_grid_points(
        temperature: Temperature<T>,
        p: InputParameter<T>,
        points: usize,
    ) -> Self {
        assert!(points >= 2, "sweep grid needs at least two points");
        let denom = T::from_usize(points - 1).unwrap();
        let grid = (0..points)
            .map(|k| T::from_usize(k).unwrap() / denom)
            .collect();
        Self {
            temperature,
            p,
            grid,
            omega_on: ControlState::on(),
            omega_off: ControlState::off(),
        }
    }

    fn validate(&self) -> Result<()> {
        require(self.grid.len() >= 2, || {
            Error::InvalidArgument("sweep grid needs at least two points".into())
        })?;
        for w in self.grid.windows(2) {
            require(w[0] < w[1], || {
                Error::InvalidArgument("sweep grid must be strictly increasing".into())
            })?;
        }
        let first = self.grid[0];
        let last = *self.grid.last().expect("nonempty grid");
        require(first >= T::zero() && last <= T::one(), || {
            Error::InvalidArgument("sweep grid must stay within [0, 1]".into())
        })
    }
}

/// Evaluate one grid point of the sweep.
fn record_at<T: Scalar>(cfg: &SweepConfig<T>, s: T) -> SweepRecord<T> {
    let s = ThermalizationStrength::new(s).expect("validated grid");
    let i_on = family_mutual_information(cfg.temperature, s, cfg.p, &cfg.omega_on);
    let i_off = family_mutual_information(cfg.temperature, s, cfg.p, &cfg.omega_off);
    let control = family_output(cfg.temperature, s, cfg.p, &cfg.omega_on)
        .partial_trace(&["C"])
        .expect("joint output has a control subsystem");
    let a_c = free_coherence(&control, &computational_basis(2))
        .expect("computational basis is orthonormal");
    SweepRecord {
        s: s.value(),
        i_on,
        i_off,
        delta_i: i_on - i_off,
        a_c,
    }
}

/// Run the sweep; grid points are evaluated in parallel and the
/// records returned in grid order.
pub fn run_sweep<T: Scalar>(cfg: &SweepConfig<T>) -> Result<Vec<SweepRecord<T>>> {
    cfg.validate()?;
    Ok(cfg.grid.par_iter().map(|&s| record_at(cfg, s)).collect())
}

/// Central-difference slope of the `I(A:CM)` curve with step 1e-4;
/// the evaluation point is clamped so both probes stay inside `[0, 1]`.
pub fn mutual_information_slope<T: Scalar>(
    temperature: Temperature<T>,
    p: InputParameter<T>,
    switch_on: bool,
    s: T,
) -> T {
    let h = T::real(1e-4);
    let s = s.max(h).min(T::one() - h);
    let omega = if switch_on {
        ControlState::on()
    } else {
        ControlState::off()
    };
    let at = |x: T| {
        family_mutual_information(
            temperature,
            ThermalizationStrength::new(x).expect("probe stays in [0, 1]"),
            p,
            &omega,
        )
    };
    (at(s + h) - at(s - h)) / (h + h)
}

/// Turning points of the `I(A:CM)` curve: strengths where the slope
/// crosses from negative to positive.
#[derive(Debug, Clone, PartialEq)]
pub enum TurningPoint<T> {
    /// The curve is monotone; no backflow.
    Absent,
    Unique(T),
    /// Multiple sign changes; all are reported and the caller decides.
    Ambiguous(Vec<T>),
}

impl<T: Copy> TurningPoint<T> {
    /// The last turning point, if any; past it the curve rises to
    /// `s = 1`, which is the interval the backflow integral uses.
    pub fn last(&self) -> Option<T> {
        match self {
            Self::Absent => None,
            Self::Unique(s) => Some(*s),
            Self::Ambiguous(all) => all.last().copied(),
        }
    }

    pub fn all(&self) -> Vec<T> {
        match self {
            Self::Absent => Vec::new(),
            Self::Unique(s) => vec![*s],
            Self::Ambiguous(all) => all.clone(),
        }
    }
}

/// Locate the turning point of the strength curve: a coarse scan of
/// the central-difference slope followed by bisection to `|Δs| ≤ 1e-4`.
pub fn find_turning_point<T: Scalar>(
    temperature: Temperature<T>,
    p: InputParameter<T>,
    switch_on: bool,
) -> TurningPoint<T> {
    let slope = |s: T| mutual_information_slope(temperature, p, switch_on, s);
    let h = T::real(1e-4);
    let points = 101;
    let lo = h + h;
    let hi = T::one() - lo;
    let step = (hi - lo) / T::from_usize(points - 1).unwrap();

    let grid: Vec<T> = (0..points)
        .map(|k| lo + step * T::from_usize(k).unwrap())
        .collect();
    let slopes: Vec<T> = grid.iter().map(|&s| slope(s)).collect();

    let mut found = Vec::new();
    for k in 0..points - 1 {
        if slopes[k] < T::zero() && slopes[k + 1] > T::zero() {
            let mut a = grid[k];
            let mut b = grid[k + 1];
            while b - a > T::real(1e-4) {
                let mid = (a + b) * T::real(0.5);
                if slope(mid) < T::zero() {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            found.push((a + b) * T::real(0.5));
        }
    }
    match found.len() {
        0 => TurningPoint::Absent,
        1 => TurningPoint::Unique(found[0]),
        _ => TurningPoint::Ambiguous(found),
    }
}

/// The backflow measure, computed along two routes that must agree.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NonMarkovianity<T> {
    /// `I(1) - I(s_tp)`, valid because the curve rises monotonically
    /// past the turning point.
    pub endpoint: T,
    /// Composite-trapezoid integral of the positive part of `dI/ds`
    /// over `[s_tp, 1]` with step 1e-3.
    pub integral: T,
    /// Turning point used, if one exists.
    pub turning_point: Option<T>,
    /// Whether the curve was verified non-decreasing on the tail.
    pub monotone_tail: bool,
}

impl<T: Scalar> NonMarkovianity<T> {
    /// Headline value (the endpoint route).
    pub fn value(&self) -> T {
        self.endpoint
    }

    /// Disagreement between the two routes.
    pub fn residual(&self) -> T {
        (self.endpoint - self.integral).abs()
    }
}

/// Integral of the positive slope of `I(A:CM)` past the turning point
/// (zero when the curve is monotone).
pub fn non_markovianity<T: Scalar>(
    temperature: Temperature<T>,
    p: InputParameter<T>,
    switch_on: bool,
) -> NonMarkovianity<T> {
    let Some(tp) = find_turning_point(temperature, p, switch_on).last() else {
        return NonMarkovianity {
            endpoint: T::zero(),
            integral: T::zero(),
            turning_point: None,
            monotone_tail: true,
        };
    };

    let omega = if switch_on {
        ControlState::on()
    } else {
        ControlState::off()
    };
    let at = |s: T| {
        family_mutual_information(
            temperature,
            ThermalizationStrength::new(s).expect("tail stays in [0, 1]"),
            p,
            &omega,
        )
    };

    // shared node set: tp, tp + h, ..., then exactly 1
    let h = T::real(1e-3);
    let mut nodes = Vec::new();
    let mut s = tp;
    while s < T::one() {
        nodes.push(s);
        s += h;
    }
    nodes.push(T::one());

    let endpoint = at(T::one()) - at(tp);

    let mut monotone_tail = true;
    let mut prev = at(nodes[0]);
    for &n in &nodes[1..] {
        let cur = at(n);
        if cur < prev - T::real(1e-9) {
            monotone_tail = false;
        }
        prev = cur;
    }

    let slope = |s: T| {
        mutual_information_slope(temperature, p, switch_on, s).max(T::zero())
    };
    let slopes: Vec<T> = nodes.iter().map(|&n| slope(n)).collect();
    let mut integral = T::zero();
    for k in 0..nodes.len() - 1 {
        integral += (slopes[k] + slopes[k + 1]) * (nodes[k + 1] - nodes[k]) * T::real(0.5);
    }

    NonMarkovianity {
        endpoint,
        integral,
        turning_point: Some(tp),
        monotone_tail,
    }
}
