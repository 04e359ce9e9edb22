//! Solution operator Γ_t(u₀, u₀_t) = (u(t), u_t(t)) on sampled phase space.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::SampledField;
use crate::kernel::MediumParams;
use crate::solver::{solve_u, velocity_u};

/// Default time step for the velocity probe.
pub const DEFAULT_PROBE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct StatePair {
    pub u: SampledField,
    pub ut: SampledField,
}

impl StatePair {
    pub fn new(u: SampledField, ut: SampledField) -> Result<Self> {
        u.require_same_grid(&ut)?;
        Ok(StatePair { u, ut })
    }

    /// Larger of the two component-wise relative L² errors over [a, b].
    pub fn rel_l2_error_on(&self, reference: &StatePair, a: f64, b: f64) -> Result<f64> {
        let eu = self.u.rel_l2_error_on(&reference.u, a, b)?;
        let et = self.ut.rel_l2_error_on(&reference.ut, a, b)?;
        Ok(eu.max(et))
    }
}

/// Result of Γ_t with the error estimates of both components.
#[derive(Debug, Clone)]
pub struct Evolved {
    pub state: StatePair,
    pub u_error: f64,
    pub ut_error: f64,
}

pub fn gamma_with_probe(t: f64, state: &StatePair, params: &MediumParams, probe: f64) -> Result<Evolved> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Usage(format!("semigroup is defined for t >= 0, got {t}")));
    }
    let u = solve_u(&state.u, &state.ut, t, params)?;
    let ut = velocity_u(&state.u, &state.ut, t, params, probe)?;
    Ok(Evolved {
        state: StatePair {
            u: u.field,
            ut: ut.field,
        },
        u_error: u.error_estimate,
        ut_error: ut.error_estimate,
    })
}

/// Γ_t with the default velocity probe.
pub fn gamma(t: f64, state: &StatePair, params: &MediumParams) -> Result<StatePair> {
    gamma_with_probe(t, state, params, DEFAULT_PROBE).map(|e| e.state)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormRow {
    pub t: f64,
    pub u_l2: f64,
    pub ut_l2: f64,
    pub ux_l2: f64,
    pub envelope: f64,
}

impl NormRow {
    /// (‖u‖, ‖u_t‖, ‖u_x‖) divided by e^{−kt/2}.
    pub fn ratios(&self) -> [f64; 3] {
        [self.u_l2 / self.envelope, self.ut_l2 / self.envelope, self.ux_l2 / self.envelope]
    }
}

/// Discrete L² norms of Γ_t(state0) at each of `times`.
pub fn norm_report(state0: &StatePair, params: &MediumParams, times: &[f64]) -> Result<Vec<NormRow>> {
    if times.windows(2).any(|w| w[1] < w[0]) || times.iter().any(|t| !(*t >= 0.0)) {
        return Err(Error::Usage("report times must be non-negative and ascending".into()));
    }
    times
        .iter()
        .map(|&t| {
            let s = gamma(t, state0, params)?;
            Ok(NormRow {
                t,
                u_l2: s.u.l2_norm(),
                ut_l2: s.ut.l2_norm(),
                ux_l2: s.u.derivative().l2_norm(),
                envelope: params.damping_factor(t),
            })
        })
        .collect()
}
