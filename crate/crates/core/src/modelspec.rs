//! On-disk model description and its canonical JSON form.
//!
//! ```json
//! {
//!   "measure": {"type": "blume_capel", "theta": 1.2},
//!   "beta": 1.0,
//!   "coupling": {"type": "chain", "n": 4, "j": 1.0, "periodic": false}
//! }
//! ```
//!
//! Coupling variants: `chain` (nearest neighbor, constant bond), `dense`
//! (row-major full matrix), `hierarchical` (per-level couplings on 2^n sites,
//! optionally relabeled by `perm`). The canonical form is the pretty-printed
//! serialization of the parsed spec; parsing and re-serializing any valid
//! spec is idempotent, which the round-trip tests pin down.

use serde::{Deserialize, Serialize};

use crate::engines::ModelInstance;
use crate::error::{Error, Result};
use crate::models::{CouplingMatrix, HierarchySpec, SpinMeasure};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasureSpec {
    Ising,
    BlumeCapel { theta: f64 },
    Dilute { q: f64 },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CouplingSpec {
    Chain {
        n: usize,
        j: f64,
        #[serde(default)]
        periodic: bool,
    },
    Dense {
        n: usize,
        entries: Vec<f64>,
    },
    Hierarchical {
        n: usize,
        levels: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        perm: Option<Vec<usize>>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub measure: MeasureSpec,
    pub beta: f64,
    pub coupling: CouplingSpec,
}

impl MeasureSpec {
    pub fn build(&self) -> Result<SpinMeasure> {
        match *self {
            MeasureSpec::Ising => Ok(SpinMeasure::ising()),
            MeasureSpec::BlumeCapel { theta } => SpinMeasure::blume_capel(theta),
            MeasureSpec::Dilute { q } => SpinMeasure::dilute(q),
        }
    }
}

impl CouplingSpec {
    pub fn build(&self) -> Result<CouplingMatrix> {
        match self {
            CouplingSpec::Chain { n, j, periodic } => CouplingMatrix::chain(*n, *j, *periodic),
            CouplingSpec::Dense { n, entries } => CouplingMatrix::new(*n, entries.clone()),
            CouplingSpec::Hierarchical { n, levels, perm } => {
                let spec = self.hierarchy()?;
                if *n != levels.len() {
                    return Err(Error::InvalidHierarchy(format!(
                        "n = {n} disagrees with {} levels",
                        levels.len()
                    )));
                }
                match perm {
                    None => Ok(CouplingMatrix::hierarchical(&spec)),
                    Some(p) => CouplingMatrix::hierarchical_permuted(&spec, p),
                }
            }
        }
    }

    /// The hierarchy parameters, when this is a hierarchical coupling.
    pub fn hierarchy(&self) -> Result<HierarchySpec> {
        match self {
            CouplingSpec::Hierarchical { levels, .. } => HierarchySpec::new(levels.clone()),
            _ => Err(Error::InvalidHierarchy(
                "coupling is not hierarchical".into(),
            )),
        }
    }
}

impl ModelSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        // serde_json reports line/column in its Display output
        serde_json::from_str(s).map_err(|e| Error::InvalidModel(format!("model spec: {e}")))
    }

    /// Canonical JSON: pretty-printed, field order fixed by the type
    /// definitions, trailing newline.
    pub fn canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model spec serializes");
        s.push('\n');
        s
    }

    pub fn build(&self) -> Result<ModelInstance> {
        ModelInstance::new(self.measure.build()?, self.coupling.build()?, self.beta)
    }
}
