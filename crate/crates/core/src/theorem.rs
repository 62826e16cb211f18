//! Executable form of the interaction-induced Lee-Yang bounds and the
//! two-spin objects behind them.
//!
//! For a coupling matrix admitting a perfect matching with matched entries
//! >= ϰ > 0, the Blume-Capel anisotropy range with guaranteed unit-circle
//! > zeros extends from the single-spin regime θ ≤ 1 to
//!
//! - θ ≤ √((e^{βϰ} + e^{-βϰ})/2) = √cosh(βϰ) under condition (i) alone;
//! - θ ≤ √((e^{βϰ} + 1)/2) when a pair partition with identical external
//!   columns also exists (condition (ii)), with ϰ taken over that partition.
//!
//! The proof machinery is exposed so it can be checked numerically: the
//! coupled two-spin kernel Φ_κ, its ω_± factorization on the θ² = cosh κ
//! slice, and the ε^± roots of the diagonal kernel.

use num_complex::Complex64;
use serde::Serialize;

use crate::engines::{brute_force_partition, ModelInstance};
use crate::error::{Error, Result};
use crate::expsum::ExpSum;
use crate::fugacity::FugacityPolynomial;
use crate::models::{CouplingMatrix, SpinMeasure};
use crate::structure::{bottleneck_matching, MatchingReport};
use crate::zeros::{classify, find_zeros_with, LeeYangVerdict, Precision, RootFindOptions};

/// √((e^x + e^{-x})/2) in an overflow-free form; the condition-(i) bound on θ
/// at x = βϰ. Equals 1 exactly when x = 0.
pub fn bound_condition_i(beta_kappa: f64) -> f64 {
    assert!(beta_kappa >= 0.0, "bound_condition_i requires βϰ >= 0");
    (0.5 * beta_kappa).exp() * (0.5 * (1.0 + (-2.0 * beta_kappa).exp())).sqrt()
}

/// √((e^x + 1)/2), the condition-(ii) bound; pointwise >= the condition-(i)
/// bound, with equality only at x = 0.
pub fn bound_condition_ii(beta_kappa: f64) -> f64 {
    assert!(beta_kappa >= 0.0, "bound_condition_ii requires βϰ >= 0");
    (0.5 * beta_kappa).exp() * (0.5 * (1.0 + (-beta_kappa).exp())).sqrt()
}

/// ω_± (κ) = e^{-κ}(√cosh κ ± √2 sinh(κ/2)), the factorization weights of the
/// two-spin kernel on the θ² = cosh κ slice. Returns (ω₋, ω₊); both lie in
/// (0, 1) for κ > 0 and ω₊ decreases strictly.
pub fn omega_pm(kappa: f64) -> (f64, f64) {
    assert!(kappa > 0.0, "omega_pm requires κ > 0");
    let root_cosh = bound_condition_i(kappa);
    let s = std::f64::consts::SQRT_2 * (0.5 * kappa).sinh();
    let e = (-kappa).exp();
    (e * (root_cosh - s), e * (root_cosh + s))
}

/// Solutions ε^± of the diagonal two-spin kernel: cosh y = e^{-K}(-θ ± δ)
/// with δ = √((e^K - 1)[(e^K + 1)/2 - θ²]). Returns (ε⁻, ε⁺); both have
/// modulus < 1 whenever K > 0 and θ is within the condition-(ii) range, which
/// pins the kernel zeros to the imaginary axis.
pub fn epsilon_pm(k_ij: f64, theta: f64) -> Result<(f64, f64)> {
    assert!(
        k_ij > 0.0 && theta > 0.0,
        "epsilon_pm requires K > 0 and θ > 0"
    );
    let ek = k_ij.exp();
    let limit = (ek + 1.0) / 2.0;
    let theta_sq = theta * theta;
    if theta_sq > limit * (1.0 + 1e-12) {
        return Err(Error::DeltaImaginary { theta_sq, limit });
    }
    let delta = ((ek - 1.0) * (limit - theta_sq).max(0.0)).sqrt();
    let minus = (-theta - delta) / ek;
    let plus = (-theta + delta) / ek;
    debug_assert!(plus.abs() <= minus.abs() && minus.abs() < 1.0);
    Ok((minus, plus))
}

/// Model-level corollary bounds at inverse temperature β and bottleneck ϰ.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CorollaryBounds {
    /// Largest anisotropy Δ with guaranteed unit-circle zeros at this β:
    /// [ln 2 + ln(e^{βϰ} + e^{-βϰ})]/(2β).
    pub delta_max: f64,
    /// Largest thinning probability q for the annealed dilute model:
    /// q/(1-q) = √cosh(βϰ).
    pub q_max: f64,
    /// Whether delta_max < ϰ/2; reported as a diagnostic, not asserted. The
    /// bound approaches ϰ/2 from above as β grows, so this is false for
    /// finite β.
    pub delta_max_below_half_kappa: bool,
}

pub fn corollary_bounds(beta: f64, kappa: f64) -> CorollaryBounds {
    assert!(
        beta > 0.0 && kappa > 0.0,
        "corollary_bounds requires β, ϰ > 0"
    );
    let x = beta * kappa;
    let log_two_cosh = std::f64::consts::LN_2 + x + (-2.0 * x).exp().ln_1p();
    let delta_max = 0.5 * log_two_cosh / beta;
    let t = bound_condition_i(x);
    CorollaryBounds {
        delta_max,
        q_max: t / (1.0 + t),
        delta_max_below_half_kappa: delta_max < kappa / 2.0,
    }
}

/// Inverse of the dilution bound: the smallest β at which a thinning
/// probability q is covered, i.e. q/(1-q) = √cosh(βϰ) solved for β. Zero for
/// q ≤ 1/2 (θ ≤ 1 needs no interaction help); every q < 1 gets a finite
/// threshold, which is the "sufficiently low temperature" reading.
pub fn beta_min_for_dilution(q: f64, kappa: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&q) || kappa <= 0.0 || !kappa.is_finite() {
        return Err(Error::InvalidModel(format!(
            "beta_min_for_dilution requires 0 <= q < 1 and ϰ > 0, got q = {q}, ϰ = {kappa}"
        )));
    }
    let t = q / (1.0 - q);
    if t <= 1.0 {
        return Ok(0.0);
    }
    Ok((t * t).acosh() / kappa)
}

/// The coupled two-spin kernel Φ_κ(x, y) = exp(κ D_x D_y) φ(x) φ(y) for the
/// Blume-Capel φ, in the closed forms the operator algebra produces.
#[derive(Clone, Copy, Debug)]
pub struct TwoSpinKernel {
    pub kappa: f64,
    pub theta: f64,
}

impl TwoSpinKernel {
    pub fn new(kappa: f64, theta: f64) -> Result<Self> {
        if kappa <= 0.0 || theta <= 0.0 || !kappa.is_finite() || !theta.is_finite() {
            return Err(Error::InvalidModel(format!(
                "two-spin kernel requires κ > 0 and θ > 0, got κ = {kappa}, θ = {theta}"
            )));
        }
        Ok(TwoSpinKernel { kappa, theta })
    }

    /// Ψ_κ = θ² - cosh κ + 2θ c_u c_v + e^κ c_u² + e^{-κ} c_v², with
    /// c_u = cosh((x+y)/2) and c_v = cosh((x-y)/2).
    pub fn psi(&self, x: Complex64, y: Complex64) -> Complex64 {
        let cu = ((x + y) / 2.0).cosh();
        let cv = ((x - y) / 2.0).cosh();
        let t = self.theta;
        cu * cu * self.kappa.exp()
            + cv * cv * (-self.kappa).exp()
            + cu * cv * 2.0 * t
            + (t * t - self.kappa.cosh())
    }

    /// Φ_κ = Ψ_κ / (1+θ)².
    pub fn value(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.psi(x, y) / (1.0 + self.theta).powi(2)
    }

    /// The same kernel assembled the direct way: [(θ + cosh x)(θ + cosh y) +
    /// (cosh κ - 1) cosh x cosh y + sinh κ sinh x sinh y]/(1+θ)².
    pub fn value_product_form(&self, x: Complex64, y: Complex64) -> Complex64 {
        let t = self.theta;
        let num = (x.cosh() + t) * (y.cosh() + t)
            + x.cosh() * y.cosh() * (self.kappa.cosh() - 1.0)
            + x.sinh() * y.sinh() * self.kappa.sinh();
        num / (1.0 + t).powi(2)
    }

    /// On the diagonal x = y: (e^κ cosh²y + 2θ cosh y + θ² - sinh κ)/(1+θ)².
    pub fn diagonal_value(&self, y: Complex64) -> Complex64 {
        let c = y.cosh();
        let t = self.theta;
        (c * c * self.kappa.exp() + c * 2.0 * t + (t * t - self.kappa.sinh())) / (1.0 + t).powi(2)
    }

    /// The operator route to the same number: expand φ(x)φ(y), apply
    /// exp(κ D_x D_y) in closed form, evaluate. Returns the value and the
    /// term-magnitude sum, the natural scale for comparing the two routes.
    pub fn operator_route(&self, x: Complex64, y: Complex64) -> Result<(Complex64, f64)> {
        let measure = SpinMeasure::blume_capel(self.theta)?;
        let k = CouplingMatrix::new(2, vec![0.0, self.kappa, self.kappa, 0.0])?;
        let coupled = ExpSum::from_measure(&measure, 2)?.apply_quadratic_exponential(&k, 1.0)?;
        let point = [x, y];
        Ok((coupled.eval(&point)?, coupled.eval_magnitude_sum(&point)?))
    }
}

/// e^κ (c_u + ω₊ c_v)(c_u + ω₋ c_v): the factorization of Ψ on the slice
/// θ² = cosh κ used to rule out zeros with positive real parts.
pub fn psi_factored(kappa: f64, x: Complex64, y: Complex64) -> Complex64 {
    let (om, op) = omega_pm(kappa);
    let cu = ((x + y) / 2.0).cosh();
    let cv = ((x - y) / 2.0).cosh();
    (cu + cv * op) * (cu + cv * om) * kappa.exp()
}

/// Which sufficient condition certified the prediction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremBranch {
    /// Pair partition satisfying both structural conditions.
    ConditionIi,
    /// Bottleneck perfect matching only.
    ConditionI,
    /// Single-spin regime θ ≤ 1; holds for any ferromagnetic coupling.
    LiebSokal,
    /// No sufficient condition covers this θ.
    None,
}

/// Bound values attached to a specific coupling matrix.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BoundReport {
    /// Bottleneck ϰ of condition (i); 0 when no perfect matching exists.
    pub kappa: f64,
    /// √cosh(βϰ); degenerates to the θ ≤ 1 boundary when ϰ = 0.
    pub theta_bound_i: f64,
    /// ϰ of the best partition satisfying both conditions, when one exists.
    pub kappa_ii: Option<f64>,
    /// √((e^{βϰ_ii} + 1)/2).
    pub theta_bound_ii: Option<f64>,
    pub applicable: TheoremBranch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Prediction {
    Holds,
    Silent,
}

/// Outcome of running the theorem against an exact computation.
#[derive(Clone, Debug, Serialize)]
pub struct TheoremVerification {
    pub theta: f64,
    pub beta: f64,
    pub structure: MatchingReport,
    pub bounds: BoundReport,
    pub predicted: Prediction,
    /// The bound that certified the prediction, when one did.
    pub bound_used: Option<f64>,
    pub observed: LeeYangVerdict,
}

impl TheoremVerification {
    /// True when the theorem promised unit-circle zeros but the computation
    /// disagrees; the CI-gating condition.
    pub fn mismatch(&self) -> bool {
        self.predicted == Prediction::Holds && !self.observed.holds
    }
}

/// Runs the structural checks, derives the applicable bound, computes the
/// partition function by brute force, and compares prediction to observation.
pub fn verify_lee_yang(m: &ModelInstance) -> Result<TheoremVerification> {
    let p = brute_force_partition(m)?;
    verify_with_polynomial(m, &p, &RootFindOptions::default())
}

/// Same, with the exact polynomial supplied by the caller (for instances
/// where a cheaper engine than brute force applies) and explicit root-finder
/// settings.
pub fn verify_with_polynomial(
    m: &ModelInstance,
    p: &FugacityPolynomial,
    opts: &RootFindOptions,
) -> Result<TheoremVerification> {
    let structure = bottleneck_matching(&m.coupling)?;
    let theta = m.measure.theta();
    let beta = m.beta;

    let kappa = structure.bottleneck_kappa;
    let theta_bound_i = bound_condition_i(beta * kappa);
    let kappa_ii = structure.joint.as_ref().map(|j| j.kappa);
    let theta_bound_ii = kappa_ii.map(|k| bound_condition_ii(beta * k));

    let mut candidates: Vec<(TheoremBranch, f64)> = vec![(TheoremBranch::LiebSokal, 1.0)];
    if structure.has_perfect_matching {
        candidates.push((TheoremBranch::ConditionI, theta_bound_i));
    }
    if let Some(b) = theta_bound_ii {
        candidates.push((TheoremBranch::ConditionIi, b));
    }
    let certifying = candidates
        .into_iter()
        .filter(|&(_, b)| theta <= b)
        .max_by(|a, b| a.1.total_cmp(&b.1));

    let zeros = find_zeros_with(p, opts)?;
    let observed = classify(&zeros, p, crate::zeros::DEFAULT_CIRCLE_TOL);

    let (applicable, predicted, bound_used) = match certifying {
        Some((branch, bound)) => (branch, Prediction::Holds, Some(bound)),
        None => (TheoremBranch::None, Prediction::Silent, None),
    };
    Ok(TheoremVerification {
        theta,
        beta,
        structure,
        bounds: BoundReport {
            kappa,
            theta_bound_i,
            kappa_ii,
            theta_bound_ii,
            applicable,
        },
        predicted,
        bound_used,
        observed,
    })
}

/// Result of bracketing the empirical critical θ of a family.
#[derive(Clone, Debug, Serialize)]
pub struct SharpnessScan {
    /// (θ, verdict) per grid point.
    pub grid: Vec<(f64, bool)>,
    /// Whether the verdict is a clean true-prefix/false-suffix over the grid;
    /// non-monotone patterns are reported, not rejected.
    pub monotone: bool,
    /// Bisection bracket: largest θ verified true, smallest verified false.
    pub bracket: (f64, f64),
}

/// Scans verdicts over an increasing θ grid and bisects the first
/// true-to-false transition down to `width`. Near the bracket the
/// classification switches to compensated evaluation, where roots tangent to
/// the circle are hardest to place.
pub fn sharpness_scan<F>(family: F, grid: &[f64], width: f64) -> Result<SharpnessScan>
where
    F: Fn(f64) -> Result<FugacityPolynomial> + Sync,
{
    if grid.len() < 2 || !grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidGrid(
            "sharpness scan needs a strictly increasing grid".into(),
        ));
    }
    let verdict_at = |theta: f64, precision: Precision| -> Result<bool> {
        let p = family(theta)?;
        let opts = RootFindOptions {
            precision,
            ..Default::default()
        };
        let zs = find_zeros_with(&p, &opts)?;
        Ok(classify(&zs, &p, crate::zeros::DEFAULT_CIRCLE_TOL).holds)
    };

    let verdicts: Vec<(f64, bool)> = grid
        .iter()
        .map(|&t| verdict_at(t, Precision::Double).map(|v| (t, v)))
        .collect::<Result<_>>()?;
    let first_false = verdicts.iter().position(|&(_, v)| !v);
    let last_true = verdicts.iter().rposition(|&(_, v)| v);
    let (Some(ff), Some(lt)) = (first_false, last_true) else {
        return Err(Error::InvalidGrid(
            "grid does not bracket the transition: verdict is constant".into(),
        ));
    };
    let monotone = lt + 1 == ff;
    // bisect the first adjacent true→false flip
    let flip = verdicts
        .windows(2)
        .position(|w| w[0].1 && !w[1].1)
        .expect("a true→false adjacency exists when both verdicts occur");
    let (mut lo, mut hi) = (verdicts[flip].0, verdicts[flip + 1].0);
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        let precision = if hi - lo < 1e-2 {
            Precision::Extended
        } else {
            Precision::Double
        };
        if verdict_at(mid, precision)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(SharpnessScan {
        grid: verdicts,
        monotone,
        bracket: (lo, hi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::HierarchySpec;

    #[test]
    fn bound_values() {
        assert_eq!(bound_condition_i(0.0), 1.0);
        assert!((bound_condition_i(1.0) - 1.2422079676186446).abs() < 1e-14);
        assert!((bound_condition_i(2.0) - 1.939638030943823).abs() < 1e-14);
        // stable form agrees with the naive one where the latter works, and
        // survives arguments where cosh alone would overflow
        for x in [0.1, 0.5, 3.0, 20.0] {
            assert!((bound_condition_i(x) - x.cosh().sqrt()).abs() < 1e-12 * x.cosh().sqrt());
        }
        assert!(1000.0f64.cosh().is_infinite());
        assert!(bound_condition_i(1000.0).is_finite());

        assert_eq!(bound_condition_ii(0.0), 1.0);
        assert!((bound_condition_ii(1.0) - 1.3635031771981767).abs() < 1e-14);
        assert!((bound_condition_ii(2.0) - 2.0480546988460353).abs() < 1e-14);
    }

    #[test]
    fn bound_ordering_pointwise() {
        for i in 0..=1000 {
            let x = i as f64 * 0.01;
            let (bi, bii) = (bound_condition_i(x), bound_condition_ii(x));
            assert!(bi >= 1.0);
            if x == 0.0 {
                assert_eq!(bi, bii);
            } else {
                assert!(bii > bi, "at x = {x}: {bii} <= {bi}");
            }
        }
    }

    #[test]
    fn omega_values_and_monotonicity() {
        let (om, op) = omega_pm(1.0);
        assert!((op - 0.7280878660984185).abs() < 1e-14);
        assert!((om - 0.18587767979410175).abs() < 1e-14);
        // ω₊ω₋ = e^{-2κ} exactly on the slice
        assert!((om * op - (-2.0f64).exp()).abs() < 1e-15);

        // κ → 0⁺ limit is 1 for both
        let (om, op) = omega_pm(1e-12);
        assert!((om - 1.0).abs() < 1e-9 && (op - 1.0).abs() < 1e-9);

        let mut prev = 1.0;
        for i in 1..=1000 {
            let kappa = i as f64 * 0.01;
            let (om, op) = omega_pm(kappa);
            assert!(0.0 < om && om <= op && op < 1.0, "κ = {kappa}");
            assert!(op < prev, "ω₊ must decrease strictly at κ = {kappa}");
            prev = op;

            // the rewritten form used for the derivative argument:
            // ω₊ = [e^{-κ}√(e^κ+e^{-κ}) + e^{-κ}(e^{κ/2} - e^{-κ/2})]/√2
            let e = (-kappa).exp();
            let alt = (e * (kappa.exp() + e).sqrt()
                + e * ((0.5 * kappa).exp() - (-0.5 * kappa).exp()))
                / std::f64::consts::SQRT_2;
            assert!((op - alt).abs() <= 1e-14 * alt, "κ = {kappa}: {op} vs {alt}");
        }
    }

    #[test]
    fn epsilon_values() {
        let (minus, plus) = epsilon_pm(1.0, 1.2).unwrap();
        assert!((minus - (-0.7536552188284193)).abs() < 1e-14);
        assert!((plus - (-0.1292554399830422)).abs() < 1e-14);

        // boundary of the condition-(ii) range: double root at -θ e^{-K}
        let theta = bound_condition_ii(1.0);
        let (minus, plus) = epsilon_pm(1.0, theta).unwrap();
        assert!((minus - plus).abs() < 1e-9);
        assert!((minus - (-theta * (-1.0f64).exp())).abs() < 1e-9);

        assert!(matches!(
            epsilon_pm(1.0, 2.0),
            Err(Error::DeltaImaginary { .. })
        ));
    }

    #[test]
    fn corollary_values() {
        let b = corollary_bounds(1.0, 1.0);
        assert!((b.delta_max - 0.9100375958014588).abs() < 1e-14);
        // at β = 1, ϰ = 1 the bound exceeds ϰ/2
        assert!(!b.delta_max_below_half_kappa);
        // β → ∞ approaches ϰ/2 from above
        let b = corollary_bounds(1e6, 1.0);
        assert!(b.delta_max > 0.5 && (b.delta_max - 0.5) < 1e-5);

        // ϰ → 0 recovers q ≤ 1/2, i.e. θ ≤ 1
        let b = corollary_bounds(1.0, 1e-12);
        assert!((b.q_max - 0.5).abs() < 1e-9);
        let b = corollary_bounds(1.0, 1.0);
        assert!((b.q_max - 0.5540110398135557).abs() < 1e-14);
        // consistency: q_max/(1 - q_max) = bound_i
        assert!((b.q_max / (1.0 - b.q_max) - bound_condition_i(1.0)).abs() < 1e-12);
    }

    #[test]
    fn dilution_threshold_inverts_q_max() {
        assert_eq!(beta_min_for_dilution(0.3, 1.0).unwrap(), 0.0);
        assert_eq!(beta_min_for_dilution(0.5, 2.0).unwrap(), 0.0);
        for (q, kappa) in [(0.6, 1.0), (0.75, 0.5), (0.9, 2.0)] {
            let beta = beta_min_for_dilution(q, kappa).unwrap();
            assert!(beta > 0.0);
            let back = corollary_bounds(beta, kappa).q_max;
            assert!((back - q).abs() < 1e-12, "q = {q}: round trip gave {back}");
        }
        assert!(beta_min_for_dilution(1.0, 1.0).is_err());
        assert!(beta_min_for_dilution(0.5, 0.0).is_err());
    }

    #[test]
    fn kernel_forms_agree() {
        let kernel = TwoSpinKernel::new(0.9, 1.4).unwrap();
        // κ → 0 is the identity operator: Φ reduces to φ(x)φ(y)
        let tiny = TwoSpinKernel::new(1e-15, 1.4).unwrap();
        let at0 = tiny.value(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        assert!((at0.re - 1.0).abs() < 1e-12 && at0.im.abs() < 1e-15);

        let points = [
            (Complex64::new(0.4, -1.1), Complex64::new(2.0, 0.3)),
            (Complex64::new(3.0, 2.0), Complex64::new(0.1, -0.2)),
            (Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)),
        ];
        for (x, y) in points {
            let a = kernel.value(x, y);
            let b = kernel.value_product_form(x, y);
            assert!((a - b).norm() <= 1e-13 * a.norm().max(1.0));
            let (c, scale) = kernel.operator_route(x, y).unwrap();
            assert!((a - c).norm() <= 1e-13 * scale);
            // diagonal closed form
            let d = kernel.diagonal_value(x);
            let full = kernel.value(x, x);
            assert!((d - full).norm() <= 1e-13 * full.norm().max(1.0));
        }
    }

    #[test]
    fn factorization_on_slice() {
        for kappa in [0.3, 1.0, 2.5] {
            let theta = bound_condition_i(kappa); // θ² = cosh κ
            let kernel = TwoSpinKernel::new(kappa, theta).unwrap();
            for (x, y) in [
                (Complex64::new(0.5, 0.7), Complex64::new(1.2, -0.4)),
                (Complex64::new(2.0, -2.0), Complex64::new(0.3, 0.9)),
            ] {
                let psi = kernel.psi(x, y);
                let fac = psi_factored(kappa, x, y);
                assert!((psi - fac).norm() <= 1e-12 * psi.norm().max(1.0));
            }
        }
    }

    #[test]
    fn verify_chain_branch_i() {
        let m = ModelInstance::new(
            SpinMeasure::blume_capel(1.2).unwrap(),
            CouplingMatrix::chain(4, 1.0, false).unwrap(),
            1.0,
        )
        .unwrap();
        let v = verify_lee_yang(&m).unwrap();
        assert_eq!(v.predicted, Prediction::Holds);
        assert_eq!(v.bounds.applicable, TheoremBranch::ConditionI);
        assert!(v.observed.holds);
        assert!(!v.mismatch());
        assert!((v.bounds.kappa - 1.0).abs() < 1e-15);
        assert_eq!(v.bounds.theta_bound_ii, None);
    }

    #[test]
    fn verify_hierarchical_branch_ii() {
        // θ = 1.35 is above the condition-(i) bound 1.2422 but below the
        // condition-(ii) bound 1.3635
        let spec = HierarchySpec::new(vec![1.0, 1.0]).unwrap();
        let m = ModelInstance::new(
            SpinMeasure::blume_capel(1.35).unwrap(),
            CouplingMatrix::hierarchical(&spec),
            1.0,
        )
        .unwrap();
        let v = verify_lee_yang(&m).unwrap();
        assert_eq!(v.predicted, Prediction::Holds);
        assert_eq!(v.bounds.applicable, TheoremBranch::ConditionIi);
        assert!(1.35 > v.bounds.theta_bound_i);
        assert!(v.observed.holds);
    }

    #[test]
    fn verify_silent_when_theta_large() {
        let m = ModelInstance::new(
            SpinMeasure::blume_capel(5.0).unwrap(),
            CouplingMatrix::chain(2, 1.0, false).unwrap(),
            1.0,
        )
        .unwrap();
        let v = verify_lee_yang(&m).unwrap();
        assert_eq!(v.predicted, Prediction::Silent);
        assert_eq!(v.bounds.applicable, TheoremBranch::None);
        // the verdict is still reported; for a single pair at θ = 5 the
        // zeros leave the circle
        assert!(!v.observed.holds);
        assert!(!v.mismatch());
    }

    #[test]
    fn verify_lieb_sokal_branch() {
        // odd site count: no matching, but θ ≤ 1 still predicts
        let m = ModelInstance::new(
            SpinMeasure::blume_capel(0.8).unwrap(),
            CouplingMatrix::chain(3, 2.0, false).unwrap(),
            1.0,
        )
        .unwrap();
        let v = verify_lee_yang(&m).unwrap();
        assert_eq!(v.predicted, Prediction::Holds);
        assert_eq!(v.bounds.applicable, TheoremBranch::LiebSokal);
        assert_eq!(v.bounds.kappa, 0.0);
        assert_eq!(v.bounds.theta_bound_i, 1.0);
        assert!(v.observed.holds);
    }

    #[test]
    fn sharpness_two_sites() {
        // the exact critical θ for a single coupled pair is the
        // condition-(ii) bound: the u-quadratic discriminant changes sign
        let kappa = 1.0;
        let family = |theta: f64| -> Result<FugacityPolynomial> {
            let m = ModelInstance::new(
                SpinMeasure::blume_capel(theta)?,
                CouplingMatrix::chain(2, kappa, false)?,
                1.0,
            )?;
            brute_force_partition(&m)
        };
        let grid: Vec<f64> = (0..14).map(|i| 1.0 + 0.05 * i as f64).collect();
        let scan = sharpness_scan(family, &grid, 1e-4).unwrap();
        assert!(scan.monotone);
        let (lo, hi) = scan.bracket;
        assert!(hi - lo <= 1e-4);
        assert!(lo >= bound_condition_i(kappa));
        let exact = bound_condition_ii(kappa);
        assert!(
            lo <= exact && exact <= hi + 1e-12,
            "bracket must contain {exact}"
        );
    }

    #[test]
    fn sharpness_rejects_unbracketed_grids() {
        let family = |theta: f64| -> Result<FugacityPolynomial> {
            let m = ModelInstance::new(
                SpinMeasure::blume_capel(theta)?,
                CouplingMatrix::chain(2, 1.0, false)?,
                1.0,
            )?;
            brute_force_partition(&m)
        };
        assert!(sharpness_scan(family, &[0.5, 0.9], 1e-4).is_err());
        assert!(sharpness_scan(family, &[2.0, 3.0], 1e-4).is_err());
        assert!(sharpness_scan(family, &[1.0], 1e-4).is_err());
    }
}
