//! Four independent constructions of the fugacity polynomial Z_N(h):
//!
//! - [`brute_force_partition`]: the definitional Gibbs sum over all spin
//!   configurations;
//! - [`operator_partition`]: the differential-operator route through the
//!   exponential-sum algebra (algebraically identical to brute force);
//! - [`chain_transfer_partition`]: transfer matrices with short Laurent
//!   polynomials in z as entries, for open and periodic chains;
//! - [`hierarchical_partition`]: block-magnetization recursion for
//!   hierarchical couplings, O(N^2) instead of exponential.
//!
//! Engines agree coefficient-by-coefficient on overlapping domains; the
//! redundancy is the correctness argument. All of them accumulate in a
//! rescaled representation and return max-normalized coefficients with the
//! overall scale in `log_scale`, so strong couplings do not overflow.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expsum::ExpSum;
use crate::fugacity::FugacityPolynomial;
use crate::models::{CouplingMatrix, HierarchySpec, SpinMeasure};

/// Default cap on enumerated spin configurations (3^16).
pub const DEFAULT_STATE_CAP: usize = 43_046_721;

/// A spin model ready for evaluation: measure, couplings, inverse temperature.
#[derive(Clone, Debug)]
pub struct ModelInstance {
    pub measure: SpinMeasure,
    pub coupling: CouplingMatrix,
    pub beta: f64,
}

impl ModelInstance {
    pub fn new(measure: SpinMeasure, coupling: CouplingMatrix, beta: f64) -> Result<Self> {
        if beta <= 0.0 || !beta.is_finite() {
            return Err(Error::InvalidModel(format!("beta must be > 0, got {beta}")));
        }
        Ok(ModelInstance {
            measure,
            coupling,
            beta,
        })
    }

    pub fn sites(&self) -> usize {
        self.coupling.n()
    }
}

/// Scaled sum of exponentials: value = sum · e^{shift}. Keeps partition
/// weights representable however large β·E gets.
#[derive(Clone, Copy, Debug)]
struct LogSum {
    shift: f64,
    sum: f64,
}

impl LogSum {
    const EMPTY: LogSum = LogSum {
        shift: f64::NEG_INFINITY,
        sum: 0.0,
    };

    fn add_log(&mut self, l: f64) {
        if self.sum == 0.0 {
            self.shift = l;
            self.sum = 1.0;
        } else if l <= self.shift {
            self.sum += (l - self.shift).exp();
        } else {
            self.sum = self.sum * (self.shift - l).exp() + 1.0;
            self.shift = l;
        }
    }

    fn merge(&mut self, o: LogSum) {
        if o.sum == 0.0 {
            return;
        }
        if self.sum == 0.0 {
            *self = o;
        } else if o.shift <= self.shift {
            self.sum += o.sum * (o.shift - self.shift).exp();
        } else {
            self.sum = self.sum * (self.shift - o.shift).exp() + o.sum;
            self.shift = o.shift;
        }
    }

    fn log_value(&self) -> f64 {
        self.shift + self.sum.ln()
    }
}

/// Exact state compression for block merges: total weight per block
/// magnetization M ∈ {-B..B}, stored max-normalized with a log shift.
#[derive(Clone, Debug)]
pub struct BlockMagnetizationTable {
    /// weights[i] is the weight of magnetization m = i - B for a B-site block
    weights: Vec<f64>,
    log_shift: f64,
}

impl BlockMagnetizationTable {
    /// Single-site table from the measure atoms.
    pub fn leaf(measure: &SpinMeasure) -> Result<Self> {
        let positions = measure.integer_positions()?;
        let b = positions
            .iter()
            .map(|p| p.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        let mut weights = vec![0.0; 2 * b + 1];
        for (atom, &p) in measure.atoms().iter().zip(&positions) {
            weights[(p + b as i64) as usize] += atom.weight;
        }
        Ok(BlockMagnetizationTable {
            weights,
            log_shift: 0.0,
        }
        .renormalized())
    }

    /// Joins two blocks whose cross couplings are the constant
    /// `beta_kappa`: W(M) = Σ_{M1+M2=M} W1(M1) W2(M2) e^{βκ M1 M2}.
    pub fn merge(&self, other: &Self, beta_kappa: f64) -> Self {
        let b1 = (self.weights.len() / 2) as i64;
        let b2 = (other.weights.len() / 2) as i64;
        // pull the largest cross-energy out front so every exponent is <= 0
        let peak = beta_kappa * (b1 * b2) as f64;
        let mut weights = vec![0.0; self.weights.len() + other.weights.len() - 1];
        for (i1, &w1) in self.weights.iter().enumerate() {
            if w1 == 0.0 {
                continue;
            }
            let m1 = i1 as i64 - b1;
            for (i2, &w2) in other.weights.iter().enumerate() {
                if w2 == 0.0 {
                    continue;
                }
                let m2 = i2 as i64 - b2;
                let e = beta_kappa * (m1 * m2) as f64 - peak;
                weights[i1 + i2] += w1 * w2 * e.exp();
            }
        }
        BlockMagnetizationTable {
            weights,
            log_shift: self.log_shift + other.log_shift + peak,
        }
        .renormalized()
    }

    fn renormalized(mut self) -> Self {
        let max = self.weights.iter().cloned().fold(0.0, f64::max);
        if max > 0.0 && max != 1.0 {
            self.weights.iter_mut().for_each(|w| *w /= max);
            self.log_shift += max.ln();
        }
        self
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn into_polynomial(self, beta: f64) -> Result<FugacityPolynomial> {
        Ok(FugacityPolynomial::with_log_scale(beta, self.weights, self.log_shift)?.normalized())
    }
}

/// Σ over all spin configurations of ∏ w_{σ_i} · exp(β Σ_{i<j} K_ij σ_i σ_j),
/// accumulated into the coefficient of z^{Σσ_i}.
pub fn brute_force_partition(m: &ModelInstance) -> Result<FugacityPolynomial> {
    brute_force_partition_capped(m, DEFAULT_STATE_CAP)
}

pub fn brute_force_partition_capped(m: &ModelInstance, cap: usize) -> Result<FugacityPolynomial> {
    let n = m.sites();
    let positions = m.measure.integer_positions()?;
    let states = (positions.len() as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    if states > cap as u128 {
        return Err(Error::CapExceeded { size: states, cap });
    }
    let log_weights: Vec<f64> = m.measure.atoms().iter().map(|a| a.weight.ln()).collect();
    let max_abs = positions
        .iter()
        .map(|p| p.unsigned_abs() as i64)
        .max()
        .unwrap();
    let n_max = n as i64 * max_abs;

    // chunk by the first site's atom; each chunk enumerates sequentially and
    // the chunk results merge in a fixed order, so the output is bit-stable
    // across thread counts
    let buckets = (0..positions.len())
        .into_par_iter()
        .map(|first| {
            let mut buckets = vec![LogSum::EMPTY; 2 * n_max as usize + 1];
            let mut spins = vec![0i64; n];
            spins[0] = positions[first];
            enumerate(
                m,
                &positions,
                &log_weights,
                &mut spins,
                1,
                0.0,
                log_weights[first],
                positions[first],
                n_max,
                &mut buckets,
            );
            buckets
        })
        .collect::<Vec<_>>();

    let mut total = vec![LogSum::EMPTY; 2 * n_max as usize + 1];
    for chunk in buckets {
        for (t, c) in total.iter_mut().zip(chunk) {
            t.merge(c);
        }
    }
    polynomial_from_buckets(total, m.beta)
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    m: &ModelInstance,
    positions: &[i64],
    log_weights: &[f64],
    spins: &mut [i64],
    site: usize,
    energy: f64,
    log_w: f64,
    mag: i64,
    n_max: i64,
    buckets: &mut [LogSum],
) {
    let n = spins.len();
    if site == n {
        buckets[(mag + n_max) as usize].add_log(m.beta * energy + log_w);
        return;
    }
    let row = m.coupling.row(site);
    // field exerted on `site` by the sites already fixed
    let field: f64 = (0..site).map(|j| row[j] * spins[j] as f64).sum();
    for (&p, &lw) in positions.iter().zip(log_weights) {
        spins[site] = p;
        enumerate(
            m,
            positions,
            log_weights,
            spins,
            site + 1,
            energy + field * p as f64,
            log_w + lw,
            mag + p,
            n_max,
            buckets,
        );
    }
}

fn polynomial_from_buckets(buckets: Vec<LogSum>, beta: f64) -> Result<FugacityPolynomial> {
    let log_max = buckets
        .iter()
        .filter(|b| b.sum > 0.0)
        .map(LogSum::log_value)
        .fold(f64::NEG_INFINITY, f64::max);
    let coeffs = buckets
        .iter()
        .map(|b| {
            if b.sum == 0.0 {
                0.0
            } else {
                b.sum * (b.shift - log_max).exp()
            }
        })
        .collect();
    FugacityPolynomial::with_log_scale(beta, coeffs, log_max)
}

/// The operator route: expand ∏ φ(x_i), apply exp(½ Σ βK_ij D_i D_j) in
/// closed form, restrict to the diagonal. Algebraically identical to
/// [`brute_force_partition`].
pub fn operator_partition(m: &ModelInstance) -> Result<FugacityPolynomial> {
    operator_partition_capped(m, DEFAULT_STATE_CAP)
}

pub fn operator_partition_capped(m: &ModelInstance, cap: usize) -> Result<FugacityPolynomial> {
    ExpSum::from_measure_capped(&m.measure, m.sites(), cap)?
        .apply_quadratic_exponential(&m.coupling, m.beta)?
        .restrict_to_diagonal(m.beta)
}

/// Bond structure of a chain coupling: per-bond values plus the optional wrap
/// bond.
struct ChainBonds {
    bonds: Vec<f64>,
    wrap: f64,
}

fn validate_chain(k: &CouplingMatrix, periodic: bool) -> Result<ChainBonds> {
    let n = k.n();
    if n < 2 {
        return Err(Error::NotAChain("need at least two sites".into()));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let adjacent = j == i + 1 || (periodic && i == 0 && j == n - 1);
            if !adjacent && k.get(i, j) != 0.0 {
                return Err(Error::NotAChain(format!(
                    "nonzero entry K[{i}][{j}] off the chain"
                )));
            }
        }
    }
    Ok(ChainBonds {
        bonds: (0..n - 1).map(|i| k.get(i, i + 1)).collect(),
        wrap: if periodic && n > 2 {
            k.get(0, n - 1)
        } else {
            0.0
        },
    })
}

/// Laurent polynomial in z tracked during transfer steps.
#[derive(Clone, Debug)]
struct MagSeries {
    /// coefficient of z^{m} at index m + offset
    coeffs: Vec<f64>,
    offset: i64,
}

impl MagSeries {
    fn zero(n_max: i64) -> Self {
        MagSeries {
            coeffs: vec![0.0; 2 * n_max as usize + 1],
            offset: n_max,
        }
    }

    fn add_scaled(&mut self, o: &MagSeries, factor: f64, shift: i64) {
        for (i, &c) in o.coeffs.iter().enumerate() {
            if c != 0.0 {
                let m = i as i64 - o.offset + shift;
                self.coeffs[(m + self.offset) as usize] += c * factor;
            }
        }
    }

    fn max_abs(&self) -> f64 {
        self.coeffs.iter().cloned().fold(0.0, f64::max)
    }
}

/// Transfer-matrix evaluation for chains: entries are short Laurent
/// polynomials in z, open chains contract boundary vectors, periodic chains
/// take a trace. Equals brute force exactly.
pub fn chain_transfer_partition(m: &ModelInstance, periodic: bool) -> Result<FugacityPolynomial> {
    let chain = validate_chain(&m.coupling, periodic)?;
    let positions = m.measure.integer_positions()?;
    let atoms = m.measure.atoms();
    let a = atoms.len();
    let n = m.sites();
    let max_abs = positions
        .iter()
        .map(|p| p.unsigned_abs() as i64)
        .max()
        .unwrap();
    let n_max = n as i64 * max_abs;

    let mut log_shift = 0.0;
    let use_trace = periodic && n > 2;

    if !use_trace {
        // state[a] collects configurations whose last site is atom a
        let mut state: Vec<MagSeries> = (0..a)
            .map(|ai| {
                let mut s = MagSeries::zero(n_max);
                s.add_scaled(
                    &MagSeries {
                        coeffs: vec![atoms[ai].weight],
                        offset: 0,
                    },
                    1.0,
                    positions[ai],
                );
                s
            })
            .collect();
        for &bond in &chain.bonds {
            let mut next: Vec<MagSeries> = (0..a).map(|_| MagSeries::zero(n_max)).collect();
            for (curr, &p_curr) in positions.iter().enumerate() {
                for (nxt, &p_next) in positions.iter().enumerate() {
                    let factor =
                        (m.beta * bond * (p_curr * p_next) as f64).exp() * atoms[nxt].weight;
                    next[nxt].add_scaled(&state[curr], factor, p_next);
                }
            }
            state = next;
            log_shift += rescale(&mut state);
        }
        let mut out = MagSeries::zero(n_max);
        for s in &state {
            out.add_scaled(s, 1.0, 0);
        }
        return FugacityPolynomial::with_log_scale(m.beta, out.coeffs, log_shift)
            .map(|p| p.normalized());
    }

    // periodic: matrix[first][last] of Laurent polynomials; bond t couples
    // site t to site t+1, the wrap bond couples site n-1 back to site 0
    let mut matrix: Vec<Vec<MagSeries>> = (0..a)
        .map(|first| {
            (0..a)
                .map(|last| {
                    let mut s = MagSeries::zero(n_max);
                    if first == last {
                        s.add_scaled(
                            &MagSeries {
                                coeffs: vec![atoms[first].weight],
                                offset: 0,
                            },
                            1.0,
                            positions[first],
                        );
                    }
                    s
                })
                .collect()
        })
        .collect();
    for &bond in &chain.bonds {
        let mut next: Vec<Vec<MagSeries>> = (0..a)
            .map(|_| (0..a).map(|_| MagSeries::zero(n_max)).collect())
            .collect();
        for first in 0..a {
            for (curr, &p_curr) in positions.iter().enumerate() {
                for (nxt, &p_next) in positions.iter().enumerate() {
                    let factor =
                        (m.beta * bond * (p_curr * p_next) as f64).exp() * atoms[nxt].weight;
                    next[first][nxt].add_scaled(&matrix[first][curr], factor, p_next);
                }
            }
        }
        matrix = next;
        log_shift += rescale_matrix(&mut matrix);
    }
    let mut out = MagSeries::zero(n_max);
    for (first, &p_first) in positions.iter().enumerate() {
        for (last, &p_last) in positions.iter().enumerate() {
            let factor = (m.beta * chain.wrap * (p_last * p_first) as f64).exp();
            out.add_scaled(&matrix[first][last], factor, 0);
        }
    }
    FugacityPolynomial::with_log_scale(m.beta, out.coeffs, log_shift).map(|p| p.normalized())
}

fn rescale(state: &mut [MagSeries]) -> f64 {
    let max = state.iter().map(MagSeries::max_abs).fold(0.0, f64::max);
    if max <= 0.0 {
        return 0.0;
    }
    for s in state.iter_mut() {
        s.coeffs.iter_mut().for_each(|c| *c /= max);
    }
    max.ln()
}

fn rescale_matrix(matrix: &mut [Vec<MagSeries>]) -> f64 {
    let max = matrix
        .iter()
        .flat_map(|row| row.iter().map(MagSeries::max_abs))
        .fold(0.0, f64::max);
    if max <= 0.0 {
        return 0.0;
    }
    for row in matrix.iter_mut() {
        for s in row.iter_mut() {
            s.coeffs.iter_mut().for_each(|c| *c /= max);
        }
    }
    max.ln()
}

/// Bottom-up block-magnetization recursion for hierarchical couplings. The
/// cross energy between two sibling blocks depends only on their total
/// magnetizations, so merging costs O(B²) per pair instead of enumerating
/// states. The model's coupling matrix must be exactly the one generated by
/// `spec` (canonically labeled or relabeled by `perm`); the result is
/// label-independent.
pub fn hierarchical_partition(
    m: &ModelInstance,
    spec: &HierarchySpec,
) -> Result<FugacityPolynomial> {
    hierarchical_partition_permuted(m, spec, None)
}

pub fn hierarchical_partition_permuted(
    m: &ModelInstance,
    spec: &HierarchySpec,
    perm: Option<&[usize]>,
) -> Result<FugacityPolynomial> {
    let expected = match perm {
        None => CouplingMatrix::hierarchical(spec),
        Some(p) => CouplingMatrix::hierarchical_permuted(spec, p)?,
    };
    if expected != m.coupling {
        return Err(Error::HierarchyMismatch);
    }
    let leaf = BlockMagnetizationTable::leaf(&m.measure)?;
    let mut tables = vec![leaf; spec.site_count()];
    for &kappa in spec.levels() {
        tables = join_level(&tables, m.beta * kappa);
    }
    debug_assert_eq!(tables.len(), 1);
    tables.pop().unwrap().into_polynomial(m.beta)
}

fn join_level(tables: &[BlockMagnetizationTable], beta_kappa: f64) -> Vec<BlockMagnetizationTable> {
    // pairwise deterministic tree reduction; block pairs are independent
    tables
        .par_chunks(2)
        .map(|pair| pair[0].merge(&pair[1], beta_kappa))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bc_instance(theta: f64, coupling: CouplingMatrix, beta: f64) -> ModelInstance {
        ModelInstance::new(SpinMeasure::blume_capel(theta).unwrap(), coupling, beta).unwrap()
    }

    fn assert_close(a: &FugacityPolynomial, b: &FugacityPolynomial, tol: f64) {
        let err = crate::fugacity::max_relative_coeff_error(a, b);
        assert!(err <= tol, "relative coefficient error {err:e} > {tol:e}");
    }

    #[test]
    fn single_site_blume_capel() {
        let theta = 1.7;
        let m = bc_instance(theta, CouplingMatrix::zeros(1), 1.0);
        let p = brute_force_partition(&m).unwrap();
        let s = p.log_scale().exp();
        assert!((p.coeff(1) * s - 1.0 / (2.0 * (1.0 + theta))).abs() < 1e-15);
        assert!((p.coeff(0) * s - theta / (1.0 + theta)).abs() < 1e-15);
    }

    #[test]
    fn two_site_ising_closed_form() {
        let kappa = 0.9;
        let m = ModelInstance::new(
            SpinMeasure::ising(),
            CouplingMatrix::chain(2, kappa, false).unwrap(),
            1.0,
        )
        .unwrap();
        let p = brute_force_partition(&m).unwrap();
        let s = p.log_scale().exp();
        assert!((p.coeff(2) * s - kappa.exp() / 4.0).abs() < 1e-15);
        assert!((p.coeff(0) * s - (-kappa).exp() / 2.0).abs() < 1e-16);
    }

    #[test]
    fn two_site_blume_capel_kernel_expansion() {
        // oracle: (2(1+θ))²·Z = 4·(e^κ cosh²y + 2θ cosh y + θ² − sinh κ)
        // expanded in e^{±y}: [e^κ, 4θ, 4θ² + 2e^{-κ}, 4θ, e^κ]
        let (theta, kappa) = (1.4, 0.8);
        let m = bc_instance(theta, CouplingMatrix::chain(2, kappa, false).unwrap(), 1.0);
        let p = brute_force_partition(&m).unwrap();
        let norm = (2.0 * (1.0 + theta)).powi(2) * p.log_scale().exp();
        assert!((p.coeff(2) * norm - kappa.exp()).abs() < 1e-12);
        assert!((p.coeff(1) * norm - 4.0 * theta).abs() < 1e-12);
        assert!((p.coeff(0) * norm - (4.0 * theta * theta + 2.0 * (-kappa).exp())).abs() < 1e-12);
        assert!((p.palindromy_defect()) < 1e-14);
    }

    #[test]
    fn operator_equals_brute_force() {
        let entries = vec![
            0.0, 0.7, 0.0, 0.2, //
            0.7, 0.0, 0.3, 0.0, //
            0.0, 0.3, 0.0, 1.1, //
            0.2, 0.0, 1.1, 0.0,
        ];
        let k = CouplingMatrix::new(4, entries).unwrap();
        let m = bc_instance(1.2, k, 0.8);
        let a = brute_force_partition(&m).unwrap();
        let b = operator_partition(&m).unwrap();
        assert_close(&a, &b, 1e-13);
    }

    #[test]
    fn uncoupled_is_self_convolution() {
        let theta = 0.6;
        let n = 5;
        let m = bc_instance(theta, CouplingMatrix::zeros(n), 1.0);
        let p = operator_partition(&m).unwrap();
        // oracle: n-fold convolution of the single-site coefficient vector
        let atom = [
            1.0 / (2.0 * (1.0 + theta)),
            theta / (1.0 + theta),
            1.0 / (2.0 * (1.0 + theta)),
        ];
        let mut conv = vec![1.0];
        for _ in 0..n {
            let mut next = vec![0.0; conv.len() + 2];
            for (i, &c) in conv.iter().enumerate() {
                for (j, &a) in atom.iter().enumerate() {
                    next[i + j] += c * a;
                }
            }
            conv = next;
        }
        let s = p.log_scale().exp();
        for (i, &expected) in conv.iter().enumerate() {
            let got = p.coeff(i as i64 - n as i64) * s;
            assert!((got - expected).abs() <= 1e-14 * expected.max(1e-300));
        }
    }

    #[test]
    fn transfer_matches_brute_force_open() {
        let m = bc_instance(1.1, CouplingMatrix::chain(6, 0.7, false).unwrap(), 1.3);
        let a = brute_force_partition(&m).unwrap();
        let b = chain_transfer_partition(&m, false).unwrap();
        assert_close(&a, &b, 1e-13);
    }

    #[test]
    fn transfer_matches_brute_force_periodic() {
        for n in [3usize, 5] {
            let m = bc_instance(0.9, CouplingMatrix::chain(n, 1.2, true).unwrap(), 0.9);
            let a = brute_force_partition(&m).unwrap();
            let b = chain_transfer_partition(&m, true).unwrap();
            assert_close(&a, &b, 1e-13);
        }
    }

    #[test]
    fn transfer_zero_field_closed_form() {
        // 1D open Ising chain: Z(h=0) = 2^n cosh(βJ)^{n-1}; our measure is
        // probability-normalized so the 2^n prefactor is dropped
        let n = 10;
        let m = ModelInstance::new(
            SpinMeasure::ising(),
            CouplingMatrix::chain(n, 1.0, false).unwrap(),
            1.0,
        )
        .unwrap();
        let p = chain_transfer_partition(&m, false).unwrap();
        let expected = 1.0f64.cosh().powi(n as i32 - 1);
        assert!((p.log_value_at_one() - expected.ln()).abs() < 1e-12);
        assert!(
            (m.measure.log_prefactor_per_site() * n as f64 - (2.0f64).ln() * n as f64).abs()
                < 1e-15
        );
    }

    #[test]
    fn transfer_rejects_non_chains() {
        let m = bc_instance(
            1.0,
            CouplingMatrix::hierarchical(&HierarchySpec::new(vec![1.0, 0.5]).unwrap()),
            1.0,
        );
        assert!(matches!(
            chain_transfer_partition(&m, false),
            Err(Error::NotAChain(_))
        ));
        // open-chain validation rejects a wrap bond
        let k = CouplingMatrix::chain(4, 1.0, true).unwrap();
        let m = bc_instance(1.0, k, 1.0);
        assert!(chain_transfer_partition(&m, false).is_err());
        assert!(chain_transfer_partition(&m, true).is_ok());
    }

    #[test]
    fn hierarchical_single_merge() {
        let spec = HierarchySpec::new(vec![0.9]).unwrap();
        let m = bc_instance(1.3, CouplingMatrix::hierarchical(&spec), 1.0);
        let a = brute_force_partition(&m).unwrap();
        let b = hierarchical_partition(&m, &spec).unwrap();
        assert_close(&a, &b, 1e-14);
    }

    #[test]
    fn hierarchical_two_levels() {
        let spec = HierarchySpec::new(vec![1.0, 0.5]).unwrap();
        let m = bc_instance(1.2, CouplingMatrix::hierarchical(&spec), 1.0);
        let a = brute_force_partition(&m).unwrap();
        let b = hierarchical_partition(&m, &spec).unwrap();
        let c = operator_partition(&m).unwrap();
        assert_close(&a, &b, 1e-13);
        assert_close(&a, &c, 1e-13);
    }

    #[test]
    fn hierarchical_three_levels() {
        let spec = HierarchySpec::new(vec![1.0, 0.8, 0.6]).unwrap();
        let m = bc_instance(1.3, CouplingMatrix::hierarchical(&spec), 1.0);
        let a = brute_force_partition(&m).unwrap();
        let b = hierarchical_partition(&m, &spec).unwrap();
        assert_close(&a, &b, 1e-12);
    }

    #[test]
    fn hierarchical_permuted_relabeling() {
        let spec = HierarchySpec::new(vec![1.0, 0.5]).unwrap();
        let perm = [2usize, 0, 3, 1];
        let k = CouplingMatrix::hierarchical_permuted(&spec, &perm).unwrap();
        let m = bc_instance(1.2, k, 1.0);
        let a = brute_force_partition(&m).unwrap();
        let b = hierarchical_partition_permuted(&m, &spec, Some(&perm)).unwrap();
        assert_close(&a, &b, 1e-13);
        // the canonical validator rejects the relabeled matrix
        assert!(matches!(
            hierarchical_partition(&m, &spec),
            Err(Error::HierarchyMismatch)
        ));
    }

    #[test]
    fn strong_coupling_stays_finite() {
        // β κ N² large enough to overflow a naive e^{βκ M₁M₂}
        let spec = HierarchySpec::new(vec![40.0, 30.0, 20.0, 10.0, 5.0]).unwrap();
        let m = bc_instance(1.1, CouplingMatrix::hierarchical(&spec), 2.0);
        let p = hierarchical_partition(&m, &spec).unwrap();
        assert!(p.coeffs().iter().all(|c| c.is_finite()));
        assert!(p.log_scale().is_finite());
        assert!(
            p.log_scale() > 700.0,
            "scale should be far beyond f64 range"
        );
    }

    #[test]
    fn dilute_engines_agree() {
        // the dilute measure runs through the same machinery as Blume-Capel;
        // check the three chain engines on it anyway
        let m = ModelInstance::new(
            SpinMeasure::dilute(2.0 / 3.0).unwrap(), // θ = 2
            CouplingMatrix::chain(5, 1.1, false).unwrap(),
            0.8,
        )
        .unwrap();
        let a = brute_force_partition(&m).unwrap();
        let b = operator_partition(&m).unwrap();
        let c = chain_transfer_partition(&m, false).unwrap();
        assert_close(&a, &b, 1e-13);
        assert_close(&a, &c, 1e-13);
        // dilute(q) and blume_capel(q/(1-q)) give the same partition function
        let bc = ModelInstance::new(
            SpinMeasure::blume_capel(2.0).unwrap(),
            m.coupling.clone(),
            m.beta,
        )
        .unwrap();
        assert_close(&a, &brute_force_partition(&bc).unwrap(), 1e-14);
    }

    #[test]
    fn scaling_covariance() {
        // β and K enter only through βK
        let k = CouplingMatrix::chain(4, 0.6, false).unwrap();
        let a = brute_force_partition(&bc_instance(1.4, k.clone(), 1.5)).unwrap();
        let b = brute_force_partition(&bc_instance(1.4, k.scaled(3.0).unwrap(), 0.5)).unwrap();
        assert_close(&a, &b, 1e-13);
    }

    #[test]
    fn state_cap_enforced() {
        let m = bc_instance(1.0, CouplingMatrix::zeros(9), 1.0);
        assert!(matches!(
            brute_force_partition_capped(&m, 3usize.pow(8)),
            Err(Error::CapExceeded { .. })
        ));
    }
}
