//! Single-spin measures, coupling matrices, and the dyadic hierarchical family.
//!
//! The single-spin measure is a finite atomic probability distribution on the
//! spin values. Three families are provided:
//!
//! - `Ising`: atoms at ±1, weight 1/2 each;
//! - `BlumeCapel(θ)`: atoms at {-1, 0, +1} with weights {1, 2θ, 1}/(2(1+θ)),
//!   where θ = e^{βΔ}/2 encodes the single-ion anisotropy Δ;
//! - `Dilute(p)`: a site survives thinning with probability p = 1 - q; the
//!   annealed average gives the same atoms as `BlumeCapel(q/p)`.
//!
//! Couplings are symmetric nonnegative matrices with zero diagonal, stored at
//! unit inverse temperature; engines multiply by β at evaluation time.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Which model family a [`SpinMeasure`] came from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MeasureLabel {
    Ising,
    BlumeCapel { theta: f64 },
    Dilute { p: f64 },
}

/// One atom of a finite spin distribution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub position: f64,
    pub weight: f64,
}

/// Finite atomic single-spin distribution, normalized to total mass 1.
///
/// Symmetric under spin flip for every in-scope family, which is what makes
/// the fugacity polynomials palindromic.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinMeasure {
    atoms: Vec<Atom>,
    label: MeasureLabel,
}

impl SpinMeasure {
    /// The s = ±1 Ising measure: two atoms of weight 1/2.
    pub fn ising() -> Self {
        SpinMeasure {
            atoms: vec![
                Atom {
                    position: -1.0,
                    weight: 0.5,
                },
                Atom {
                    position: 1.0,
                    weight: 0.5,
                },
            ],
            label: MeasureLabel::Ising,
        }
    }

    /// Blume-Capel measure with anisotropy parameter θ > 0: atoms at
    /// {-1, 0, +1} with weights {1, 2θ, 1}/(2(1+θ)).
    pub fn blume_capel(theta: f64) -> Result<Self> {
        if theta <= 0.0 || !theta.is_finite() {
            return Err(Error::InvalidMeasure(format!(
                "blume_capel requires theta > 0, got {theta}"
            )));
        }
        let edge = 1.0 / (2.0 * (1.0 + theta));
        Ok(SpinMeasure {
            atoms: vec![
                Atom {
                    position: -1.0,
                    weight: edge,
                },
                Atom {
                    position: 0.0,
                    weight: theta / (1.0 + theta),
                },
                Atom {
                    position: 1.0,
                    weight: edge,
                },
            ],
            label: MeasureLabel::BlumeCapel { theta },
        })
    }

    /// Annealed site-dilute Ising measure with thinning probability q ∈ [0, 1).
    ///
    /// For q > 0 the atoms coincide with `blume_capel(q/(1-q))`; q = 0 is the
    /// pure Ising measure (no zero atom, so weights stay strictly positive).
    pub fn dilute(q: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&q) {
            return Err(Error::InvalidMeasure(format!(
                "dilute requires 0 <= q < 1, got {q}"
            )));
        }
        let p = 1.0 - q;
        let atoms = if q == 0.0 {
            vec![
                Atom {
                    position: -1.0,
                    weight: 0.5,
                },
                Atom {
                    position: 1.0,
                    weight: 0.5,
                },
            ]
        } else {
            vec![
                Atom {
                    position: -1.0,
                    weight: p / 2.0,
                },
                Atom {
                    position: 0.0,
                    weight: q,
                },
                Atom {
                    position: 1.0,
                    weight: p / 2.0,
                },
            ]
        };
        Ok(SpinMeasure {
            atoms,
            label: MeasureLabel::Dilute { p },
        })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn label(&self) -> MeasureLabel {
        self.label
    }

    /// Anisotropy parameter of the measure: θ for Blume-Capel, q/p for the
    /// dilute family, 0 for pure Ising.
    pub fn theta(&self) -> f64 {
        match self.label {
            MeasureLabel::Ising => 0.0,
            MeasureLabel::BlumeCapel { theta } => theta,
            MeasureLabel::Dilute { p } => (1.0 - p) / p,
        }
    }

    /// Laplace transform φ(x) = Σ w e^{x·σ} of the measure.
    ///
    /// For Blume-Capel this is (cosh x + θ)/(1 + θ).
    pub fn phi(&self, x: Complex64) -> Complex64 {
        self.atoms
            .iter()
            .map(|a| (x * a.position).exp() * a.weight)
            .sum()
    }

    /// Log of the per-site normalization dropped relative to the counting
    /// measure convention: ln 2 for Ising and dilute models, ln(1 + 1/θ) for
    /// Blume-Capel. Reported so callers can reconstruct unnormalized values.
    pub fn log_prefactor_per_site(&self) -> f64 {
        match self.label {
            MeasureLabel::Ising | MeasureLabel::Dilute { .. } => std::f64::consts::LN_2,
            MeasureLabel::BlumeCapel { theta } => (1.0 + 1.0 / theta).ln(),
        }
    }

    /// Atom positions as integers. Errors if any position is not an integer;
    /// all in-scope measures live on {-1, 0, +1}.
    pub fn integer_positions(&self) -> Result<Vec<i64>> {
        self.atoms
            .iter()
            .map(|a| {
                let r = a.position.round();
                if (a.position - r).abs() > 1e-9 {
                    Err(Error::NonIntegerFrequency(a.position))
                } else {
                    Ok(r as i64)
                }
            })
            .collect()
    }
}

/// θ = e^{βΔ}/2, the map from the anisotropy Δ to the measure parameter.
pub fn theta_from_delta(beta: f64, delta: f64) -> f64 {
    assert!(beta > 0.0, "theta_from_delta requires beta > 0");
    (beta * delta).exp() / 2.0
}

/// Symmetric nonnegative interaction matrix with zero diagonal.
///
/// Entries are stored at unit β; partition engines multiply by β when they
/// exponentiate the interaction energy.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl CouplingMatrix {
    /// Validates symmetry, nonnegativity, and zero diagonal.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidCoupling("site count must be >= 1".into()));
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        for i in 0..n {
            if entries[i * n + i] != 0.0 {
                return Err(Error::InvalidCoupling(format!(
                    "diagonal entry K[{i}][{i}] = {} must be 0",
                    entries[i * n + i]
                )));
            }
            for j in 0..n {
                let k = entries[i * n + j];
                if !k.is_finite() || k < 0.0 {
                    return Err(Error::InvalidCoupling(format!(
                        "K[{i}][{j}] = {k} must be finite and >= 0"
                    )));
                }
                if k != entries[j * n + i] {
                    return Err(Error::InvalidCoupling(format!(
                        "K[{i}][{j}] = {k} != K[{j}][{i}] = {}",
                        entries[j * n + i]
                    )));
                }
            }
        }
        Ok(CouplingMatrix { n, entries })
    }

    pub fn zeros(n: usize) -> Self {
        CouplingMatrix {
            n,
            entries: vec![0.0; n * n],
        }
    }

    /// Nearest-neighbor chain with constant bond J > 0, optionally closed
    /// into a ring. With n = 2 the periodic flag is a no-op: the wrap bond
    /// would duplicate the single existing pair.
    pub fn chain(n: usize, j: f64, periodic: bool) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidCoupling(format!(
                "chain requires n >= 2, got {n}"
            )));
        }
        if j <= 0.0 || !j.is_finite() {
            return Err(Error::InvalidCoupling(format!(
                "chain requires J > 0, got {j}"
            )));
        }
        let mut m = CouplingMatrix::zeros(n);
        for i in 0..n - 1 {
            m.set_sym(i, i + 1, j);
        }
        if periodic && n > 2 {
            m.set_sym(0, n - 1, j);
        }
        Ok(m)
    }

    /// Hierarchical coupling on 2^n sites for the canonical dyadic blocks:
    /// K_ij equals the level-m coupling, where m is the lowest level whose
    /// block contains both i and j. With 0-based site labels that level is
    /// the bit length of i XOR j.
    pub fn hierarchical(spec: &HierarchySpec) -> Self {
        let n = spec.site_count();
        let mut m = CouplingMatrix::zeros(n);
        for i in 0..n {
            for j in (i + 1)..n {
                let level = usize::BITS - (i ^ j).leading_zeros();
                m.set_sym(i, j, spec.levels()[level as usize - 1]);
            }
        }
        m
    }

    /// Hierarchical coupling with relabeled sites: site `perm[i]` plays the
    /// role of canonical site `i`. Any dyadic block covering is a relabeling
    /// of the canonical one, so this covers the general construction.
    pub fn hierarchical_permuted(spec: &HierarchySpec, perm: &[usize]) -> Result<Self> {
        let n = spec.site_count();
        if perm.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: perm.len(),
            });
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidCoupling(format!(
                    "perm is not a permutation of 0..{n}"
                )));
            }
            seen[p] = true;
        }
        let canonical = CouplingMatrix::hierarchical(spec);
        let mut m = CouplingMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.entries[perm[i] * n + perm[j]] = canonical.entries[i * n + j];
            }
        }
        Ok(m)
    }

    fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.n + j] = v;
        self.entries[j * self.n + i] = v;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// All couplings multiplied by c >= 0.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if c < 0.0 || !c.is_finite() {
            return Err(Error::InvalidCoupling(format!(
                "scale factor {c} must be >= 0"
            )));
        }
        Ok(CouplingMatrix {
            n: self.n,
            entries: self.entries.iter().map(|&k| k * c).collect(),
        })
    }

    /// ½ Σ_{i,j} K_ij a_i a_j. Diagonal terms, were any present, would simply
    /// rescale; the constructor pins them to zero.
    pub(crate) fn quadratic_form(&self, freq: &[f64]) -> f64 {
        let mut q = 0.0;
        for i in 0..self.n {
            let row = self.row(i);
            let ai = freq[i];
            if ai == 0.0 {
                continue;
            }
            for j in (i + 1)..self.n {
                q += row[j] * ai * freq[j];
            }
            q += 0.5 * row[i] * ai * ai;
        }
        q
    }
}

/// Maximum number of hierarchy levels (2^10 = 1024 sites): above this the
/// dense matrix materialization dominates memory.
pub const MAX_HIERARCHY_LEVELS: usize = 10;

/// Per-level couplings κ^(1..n) of a Dyson-type hierarchy on 2^n sites.
#[derive(Clone, Debug, PartialEq)]
pub struct HierarchySpec {
    levels: Vec<f64>,
}

impl HierarchySpec {
    pub fn new(levels: Vec<f64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidHierarchy(
                "at least one level required".into(),
            ));
        }
        if levels.len() > MAX_HIERARCHY_LEVELS {
            return Err(Error::InvalidHierarchy(format!(
                "{} levels exceeds cap {MAX_HIERARCHY_LEVELS}",
                levels.len()
            )));
        }
        if let Some(bad) = levels.iter().find(|k| **k <= 0.0 || !k.is_finite()) {
            return Err(Error::InvalidHierarchy(format!(
                "level couplings must be > 0, got {bad}"
            )));
        }
        Ok(HierarchySpec { levels })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn site_count(&self) -> usize {
        1 << self.levels.len()
    }
}
