//! Exact algebra of multivariate exponential sums Σ c_a e^{a·x}.
//!
//! Products of single-spin Laplace transforms are exponential sums, and the
//! quadratic differential operator exp(½ Σ K_ij D_i D_j) acts on them in
//! closed form: D_i e^{a·x} = a_i e^{a·x}, so the operator exponential is
//! diagonal and multiplies each coefficient by exp(½ Σ K_ij a_i a_j). No
//! series truncation is involved; the representation is exact up to the
//! floating point of the coefficients.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fugacity::FugacityPolynomial;
use crate::models::{CouplingMatrix, SpinMeasure};

/// Default cap on the number of expanded terms (3^16).
pub const DEFAULT_TERM_CAP: usize = 43_046_721;

/// One term c·e^{a·x} of an exponential sum.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub freq: Box<[f64]>,
}

/// Canonical multivariate exponential sum: terms are merged by frequency
/// vector, sorted, and strictly positive.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpSum {
    sites: usize,
    terms: Vec<Term>,
}

impl ExpSum {
    /// ∏_{i=1..sites} φ(x_i) expanded into (atom count)^sites terms, with the
    /// default term cap.
    pub fn from_measure(measure: &SpinMeasure, sites: usize) -> Result<Self> {
        Self::from_measure_capped(measure, sites, DEFAULT_TERM_CAP)
    }

    pub fn from_measure_capped(measure: &SpinMeasure, sites: usize, cap: usize) -> Result<Self> {
        if sites == 0 {
            return Err(Error::InvalidModel("site count must be >= 1".into()));
        }
        let atoms = measure.atoms();
        let count = (atoms.len() as u128)
            .checked_pow(sites as u32)
            .unwrap_or(u128::MAX);
        if count > cap as u128 {
            return Err(Error::CapExceeded { size: count, cap });
        }
        let total = count as usize;
        let mut terms = Vec::with_capacity(total);
        // odometer over atom indices; last site runs fastest
        let mut idx = vec![0usize; sites];
        loop {
            let mut coeff = 1.0;
            let mut freq = Vec::with_capacity(sites);
            for &a in &idx {
                coeff *= atoms[a].weight;
                freq.push(atoms[a].position);
            }
            terms.push(Term {
                coeff,
                freq: freq.into_boxed_slice(),
            });
            let mut carry = sites;
            while carry > 0 {
                idx[carry - 1] += 1;
                if idx[carry - 1] < atoms.len() {
                    break;
                }
                idx[carry - 1] = 0;
                carry -= 1;
            }
            if carry == 0 {
                break;
            }
        }
        let mut s = ExpSum { sites, terms };
        s.canonicalize();
        Ok(s)
    }

    /// Builds directly from terms; merges duplicates and drops zeros.
    pub fn from_terms(sites: usize, terms: Vec<Term>) -> Result<Self> {
        for t in &terms {
            if t.freq.len() != sites {
                return Err(Error::DimensionMismatch {
                    expected: sites,
                    got: t.freq.len(),
                });
            }
            if !t.coeff.is_finite() || t.coeff < 0.0 {
                return Err(Error::InvalidModel(format!(
                    "term coefficients must be finite and >= 0, got {}",
                    t.coeff
                )));
            }
        }
        let mut s = ExpSum { sites, terms };
        s.canonicalize();
        Ok(s)
    }

    fn canonicalize(&mut self) {
        self.terms.sort_by(|a, b| {
            a.freq
                .iter()
                .zip(b.freq.iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut merged: Vec<Term> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            match merged.last_mut() {
                Some(last) if last.freq == t.freq => last.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff != 0.0);
        self.terms = merged;
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Applies exp(½ · scale · Σ_ij K_ij D_i D_j) exactly: every term picks up
    /// the factor exp(½ · scale · Σ_ij K_ij a_i a_j); frequencies are
    /// untouched and no terms are created or destroyed.
    pub fn apply_quadratic_exponential(
        &self,
        coupling: &CouplingMatrix,
        scale: f64,
    ) -> Result<ExpSum> {
        if coupling.n() != self.sites {
            return Err(Error::DimensionMismatch {
                expected: self.sites,
                got: coupling.n(),
            });
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coeff: t.coeff * (scale * coupling.quadratic_form(&t.freq)).exp(),
                freq: t.freq.clone(),
            })
            .collect();
        Ok(ExpSum {
            sites: self.sites,
            terms,
        })
    }

    /// Sets all x_i = x and collects by total frequency m = Σ a_i, yielding
    /// the fugacity polynomial Σ c_m z^m with z = e^{βh} and x = βh.
    pub fn restrict_to_diagonal(&self, beta: f64) -> Result<FugacityPolynomial> {
        let mut n_max = 0i64;
        let mut totals = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let total: f64 = t.freq.iter().sum();
            let m = total.round();
            if (total - m).abs() > 1e-9 {
                return Err(Error::NonIntegerFrequency(total));
            }
            let m = m as i64;
            n_max = n_max.max(m.abs());
            totals.push(m);
        }
        let mut coeffs = vec![0.0; 2 * n_max as usize + 1];
        for (t, &m) in self.terms.iter().zip(&totals) {
            coeffs[(m + n_max) as usize] += t.coeff;
        }
        Ok(FugacityPolynomial::new(beta, coeffs)?.normalized())
    }

    /// Σ c_a exp(a · point) with complex arithmetic.
    pub fn eval(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.sites {
            return Err(Error::DimensionMismatch {
                expected: self.sites,
                got: point.len(),
            });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let dot: Complex64 = t.freq.iter().zip(point).map(|(&a, &p)| p * a).sum();
            acc += dot.exp() * t.coeff;
        }
        Ok(acc)
    }

    /// Σ |c_a e^{a·point}|, the natural scale for backward-error comparisons
    /// of evaluations at `point`.
    pub fn eval_magnitude_sum(&self, point: &[Complex64]) -> Result<f64> {
        if point.len() != self.sites {
            return Err(Error::DimensionMismatch {
                expected: self.sites,
                got: point.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|t| {
                let re: f64 = t.freq.iter().zip(point).map(|(&a, p)| a * p.re).sum();
                t.coeff * re.exp()
            })
            .sum())
    }
}
