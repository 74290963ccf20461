//! Numerical tolerances used by the quantum instance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Explicit cutoffs for every numerical decision the quantum instance makes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Maximum `|M - M†|` entry for a matrix to count as Hermitian.
    pub herm: f64,
    /// Slack allowed on the spectrum `[0,1]` of an effect.
    pub spec: f64,
    /// Reconstruction tolerance of the eigensolver.
    pub eig: f64,
    /// Maximum `|P² - P|` entry for a projection.
    pub proj: f64,
    /// Eigenvalues above this belong to the support.
    pub ceil_cutoff: f64,
    /// Eigenvalues at least `1 - floor_cutoff` belong to the fixed space.
    pub floor_cutoff: f64,
    /// Extensional equality of predicates and maps.
    pub law: f64,
    /// Equality of scalars (validities, probabilities).
    pub tight: f64,
    /// Jacobi sweep cap.
    pub max_sweeps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            herm: 1e-9,
            spec: 1e-8,
            eig: 1e-9,
            proj: 1e-8,
            ceil_cutoff: 1e-8,
            floor_cutoff: 1e-6,
            law: 1e-8,
            tight: 1e-9,
            max_sweeps: 100,
        }
    }
}

impl Tolerances {
    /// Applies a `key=value` override, as passed to `--tol`.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got `{assignment}`")))?;
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        if key == "max_sweeps" {
            self.max_sweeps = value
                .parse()
                .map_err(|_| Error::Parse(format!("bad sweep count `{value}`")))?;
            return Ok(());
        }
        let v: f64 = value
            .parse()
            .map_err(|_| Error::Parse(format!("bad tolerance `{value}`")))?;
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::Parse(format!("tolerance must be a finite non-negative number, got `{value}`")));
        }
        let slot = match key.as_str() {
            "herm" => &mut self.herm,
            "spec" => &mut self.spec,
            "eig" => &mut self.eig,
            "proj" => &mut self.proj,
            "ceil_cutoff" | "ceil" => &mut self.ceil_cutoff,
            "floor_cutoff" | "floor" => &mut self.floor_cutoff,
            "law" => &mut self.law,
            "tight" => &mut self.tight,
            other => return Err(Error::Parse(format!("unknown tolerance `{other}`"))),
        };
        *slot = v;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let mut t = Tolerances::default();
        t.set("floor-cutoff=1e-3").unwrap();
        t.set("max_sweeps=7").unwrap();
        assert_eq!(t.floor_cutoff, 1e-3);
        assert_eq!(t.max_sweeps, 7);
        assert!(t.set("nosuch=1").is_err());
        assert!(t.set("law").is_err());
        assert!(t.set("law=-1").is_err());
    }
}
