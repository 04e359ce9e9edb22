//! Finite atom sets plus a bounded density: the representation used for
//! distributional solutions.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::SampledField;
use crate::quadrature::simpson;

/// Default Simpson panel count for density masses.
pub const MASS_PANELS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    #[serde(rename = "x")]
    pub position: f64,
    #[serde(rename = "w")]
    pub weight: f64,
}

impl Atom {
    pub fn new(position: f64, weight: f64) -> Self {
        Atom { position, weight }
    }
}

pub type DensityFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Atoms plus an absolutely continuous part supported on a closed interval.
///
/// The density is held as a pointwise profile when one is known in closed
/// form; `density` keeps its samples on the caller's grid for output. When
/// only samples exist the profile falls back to cubic interpolation.
#[derive(Clone)]
pub struct MixedMeasure {
    pub atoms: Vec<Atom>,
    pub density: Option<SampledField>,
    pub support: Option<(f64, f64)>,
    pub probabilistic: bool,
    profile: Option<DensityFn>,
}

impl fmt::Debug for MixedMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MixedMeasure")
            .field("atoms", &self.atoms)
            .field("density", &self.density.as_ref().map(|d| d.grid().len()))
            .field("support", &self.support)
            .field("probabilistic", &self.probabilistic)
            .field("profile", &self.profile.is_some())
            .finish()
    }
}

impl MixedMeasure {
    pub fn atoms_only(atoms: Vec<Atom>) -> Self {
        MixedMeasure {
            atoms,
            density: None,
            support: None,
            probabilistic: false,
            profile: None,
        }
    }

    /// Measure with a closed-form density on `support`. The profile is
    /// treated as zero outside the support.
    pub fn with_profile(atoms: Vec<Atom>, support: (f64, f64), profile: DensityFn) -> Result<Self> {
        check_support(support)?;
        Ok(MixedMeasure {
            atoms,
            density: None,
            support: Some(support),
            probabilistic: false,
            profile: Some(profile),
        })
    }

    /// Measure whose density is known only through samples.
    pub fn with_samples(atoms: Vec<Atom>, support: (f64, f64), samples: SampledField) -> Result<Self> {
        check_support(support)?;
        let (a, b) = support;
        let clipped = clip(&samples, a, b);
        Ok(MixedMeasure {
            atoms,
            density: Some(clipped),
            support: Some(support),
            probabilistic: false,
            profile: None,
        })
    }

    pub fn probabilistic(mut self) -> Self {
        self.probabilistic = true;
        self
    }

    /// Tabulates the density on `grid`, zero outside the support.
    pub fn tabulate_on(mut self, grid: &crate::grid::SpaceGrid) -> Self {
        let values = grid.points().map(|x| self.density_at(x)).collect();
        self.density = Some(SampledField::from_values_unchecked(*grid, values));
        self
    }

    pub fn has_density(&self) -> bool {
        self.support.is_some()
    }

    pub fn profile(&self) -> Option<&DensityFn> {
        self.profile.as_ref()
    }

    /// Density value at x; zero outside the support.
    pub fn density_at(&self, x: f64) -> f64 {
        let Some((a, b)) = self.support else {
            return 0.0;
        };
        if x < a || x > b {
            return 0.0;
        }
        if let Some(p) = &self.profile {
            p(x)
        } else if let Some(d) = &self.density {
            d.sample(x)
        } else {
            0.0
        }
    }

    pub fn atom_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// ∫ density over [lo, hi] ∩ support by composite Simpson.
    pub fn density_mass_between(&self, lo: f64, hi: f64, panels: usize) -> f64 {
        let Some((a, b)) = self.support else {
            return 0.0;
        };
        let (lo, hi) = (lo.max(a), hi.min(b));
        if hi <= lo {
            return 0.0;
        }
        simpson(|x| self.density_at(x), lo, hi, panels)
    }

    pub fn density_mass(&self, panels: usize) -> f64 {
        self.density_mass_between(f64::NEG_INFINITY, f64::INFINITY, panels)
    }

    pub fn total_mass(&self, panels: usize) -> f64 {
        self.atom_mass() + self.density_mass(panels)
    }

    /// Checks the probability-measure invariants: non-negative weights and
    /// density samples, total mass one within `tol`.
    pub fn check_probability(&self, tol: f64) -> Result<()> {
        if let Some(a) = self.atoms.iter().find(|a| a.weight < 0.0) {
            return Err(Error::Domain(format!("negative atom weight {} at {}", a.weight, a.position)));
        }
        if let Some(d) = &self.density {
            if let Some(v) = d.values().iter().find(|v| **v < 0.0) {
                return Err(Error::Domain(format!("negative density sample {v}")));
            }
        }
        let mass = self.total_mass(MASS_PANELS);
        if (mass - 1.0).abs() > tol {
            return Err(Error::Domain(format!("total mass {mass} differs from 1 by more than {tol}")));
        }
        Ok(())
    }

    /// Smallest closed interval holding every atom and the density support.
    pub fn hull(&self) -> Option<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for a in &self.atoms {
            lo = lo.min(a.position);
            hi = hi.max(a.position);
        }
        if let Some((a, b)) = self.support {
            lo = lo.min(a);
            hi = hi.max(b);
        }
        (lo <= hi).then_some((lo, hi))
    }
}

fn check_support((a, b): (f64, f64)) -> Result<()> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Usage(format!("density support must be bounded, got [{a}, {b}]")));
    }
    if a > b {
        return Err(Error::Usage(format!("empty density support [{a}, {b}]")));
    }
    Ok(())
}

fn clip(samples: &SampledField, a: f64, b: f64) -> SampledField {
    let g = *samples.grid();
    let values = g
        .points()
        .zip(samples.values())
        .map(|(x, &v)| if x < a || x > b { 0.0 } else { v })
        .collect();
    SampledField::from_values_unchecked(g, values)
}
