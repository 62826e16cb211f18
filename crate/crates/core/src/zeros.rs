//! Root finding and Lee-Yang classification in the fugacity plane.
//!
//! The zeros of Z(h) as a function of the complex field live at the roots of
//! Q(z) = z^{N} P(z), a degree-2N polynomial with nonnegative palindromic
//! coefficients. The model has the Lee-Yang property exactly when every root
//! sits on the unit circle, i.e. every βh zero is purely imaginary. A root
//! e^{iφ} corresponds to the factor (1 + γ (βh)²) with γ = 1/φ².

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fugacity::FugacityPolynomial;
use crate::numerics::horner_dd;

/// Default tolerance on ||z| - 1| for the unit-circle verdict; backed by
/// residual-based backward-error estimates at desk-scale degrees.
pub const DEFAULT_CIRCLE_TOL: f64 = 1e-8;

/// Roots closer than this are treated as one multiple root and collapsed to
/// their centroid, where the first-order root-finding error cancels.
pub const CLUSTER_TOL: f64 = 1e-7;

/// Evaluation precision for root polishing and classification.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Precision {
    #[default]
    Double,
    /// Compensated (double-double) Horner evaluation; useful for adversarial
    /// near-boundary scans.
    Extended,
}

/// Root-finder knobs.
#[derive(Clone, Copy, Debug)]
pub struct RootFindOptions {
    pub max_iterations: usize,
    pub precision: Precision,
}

impl Default for RootFindOptions {
    fn default() -> Self {
        RootFindOptions {
            max_iterations: 400,
            precision: Precision::Double,
        }
    }
}

/// All 2N roots of Q(z) = z^N P(z), multiplicity resolved, sorted by
/// principal argument (ties by modulus).
#[derive(Clone, Debug)]
pub struct ZeroSet {
    pub roots: Vec<Complex64>,
    /// max |Q(root)| over the max-normalized coefficients after polishing.
    pub residual: f64,
}

/// Unit-circle classification of a zero set.
#[derive(Clone, Debug, serde::Serialize)]
pub struct LeeYangVerdict {
    pub holds: bool,
    /// max over roots of ||z| - 1|
    pub max_radial_deviation: f64,
    /// smallest phase φ ∈ (0, π] with a root e^{iφ}; None when off-circle
    pub first_zero_phase: Option<f64>,
    /// γ_j = 1/φ_j², positive and nonincreasing; empty when off-circle
    pub gammas: Vec<f64>,
    /// indices of roots within a decade of the tolerance boundary, worth
    /// caller scrutiny either way
    pub borderline: Vec<usize>,
}

/// Finds all roots of Q(z) = z^{N_max} P(z) by Aberth-Ehrlich simultaneous
/// iteration started on a circle slightly outside |z| = 1, then Newton
/// polishing and cluster collapsing.
pub fn find_zeros(p: &FugacityPolynomial) -> Result<ZeroSet> {
    find_zeros_with(p, &RootFindOptions::default())
}

pub fn find_zeros_with(p: &FugacityPolynomial, opts: &RootFindOptions) -> Result<ZeroSet> {
    if p.n_max() == 0 {
        return Err(Error::InvalidPolynomial(
            "degree must be >= 1 to have zeros".into(),
        ));
    }
    // Q's coefficient vector is exactly the stored Laurent coefficient list.
    // Normalize by a power of two near the max: exact scaling, so multiple
    // roots are not split by coefficient rounding.
    let max = p.coeffs().iter().cloned().fold(0.0, f64::max);
    let scale = max.log2().round().exp2();
    let coeffs: Vec<f64> = p.coeffs().iter().map(|c| c / scale).collect();
    let mut roots = aberth(&coeffs, opts.max_iterations)?;
    polish(&coeffs, &mut roots, opts.precision);
    collapse_clusters(&coeffs, &mut roots, opts.precision);
    roots.sort_by(|a, b| {
        a.arg()
            .total_cmp(&b.arg())
            .then(a.norm_sqr().total_cmp(&b.norm_sqr()))
    });
    let residual = roots
        .iter()
        .map(|&z| eval(&coeffs, z).0.norm())
        .fold(0.0, f64::max);
    Ok(ZeroSet { roots, residual })
}

/// |Q(z)/Q'(z)| at a reported root, evaluated in compensated arithmetic on
/// the exactly rescaled coefficients. This is the meaningful root-quality
/// measure: plain f64 evaluation at a converged root only sees rounding
/// noise.
pub fn newton_residual(p: &FugacityPolynomial, z: Complex64) -> f64 {
    let max = p.coeffs().iter().cloned().fold(0.0, f64::max);
    let scale = max.log2().round().exp2();
    let coeffs: Vec<f64> = p.coeffs().iter().map(|c| c / scale).collect();
    let (q, dq) = horner_dd(&coeffs, z);
    (q.norm_sqr().to_f64() / dq.norm_sqr().to_f64()).sqrt()
}

/// Horner evaluation of Q, Q' and the magnitude sum S = Σ|q_i||z|^i.
fn eval(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64, f64) {
    let az = z.norm();
    let mut q = Complex64::new(0.0, 0.0);
    let mut dq = Complex64::new(0.0, 0.0);
    let mut s = 0.0;
    for &c in coeffs.iter().rev() {
        dq = dq * z + q;
        q = q * z + c;
        s = s * az + c.abs();
    }
    (q, dq, s)
}

fn aberth(coeffs: &[f64], max_iterations: usize) -> Result<Vec<Complex64>> {
    let degree = coeffs.len() - 1;
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| {
            // a fixed angular offset breaks ties with the root symmetry axes
            let angle = 2.0 * std::f64::consts::PI * (k as f64 + 0.378) / degree as f64;
            Complex64::from_polar(1.1, angle)
        })
        .collect();
    let mut converged = vec![false; degree];

    for _ in 0..max_iterations {
        let mut moved = 0.0f64;
        for k in 0..degree {
            if converged[k] {
                continue;
            }
            let (q, dq, s) = eval(coeffs, z[k]);
            // evaluation noise floor reached: cannot do better in this metric
            if q.norm() <= 4.0 * f64::EPSILON * s {
                converged[k] = true;
                continue;
            }
            let newton = if dq.norm() == 0.0 {
                // exactly at a critical point: nudge off it
                z[k] *= 1.0 + 1e-9;
                continue;
            } else {
                q / dq
            };
            let repulsion: Complex64 = (0..degree)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d.norm_sqr() < 1e-300 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.finv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm_sqr() < 1e-300 {
                newton
            } else {
                newton / denom
            };
            z[k] -= step;
            moved = moved.max(step.norm() / z[k].norm().max(1.0));
        }
        if converged.iter().all(|&c| c) || moved < 1e-16 {
            return Ok(z);
        }
    }
    // verify how bad the leftover actually is before declaring failure
    let worst = z
        .iter()
        .map(|&zk| {
            let (q, _, s) = eval(coeffs, zk);
            q.norm() / s.max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max);
    if worst < 1e-10 {
        return Ok(z);
    }
    Err(Error::RootsNotConverged {
        iterations: max_iterations,
        residual: worst,
        best: z,
    })
}

fn polish(coeffs: &[f64], roots: &mut [Complex64], precision: Precision) {
    let rounds = match precision {
        Precision::Double => 4,
        Precision::Extended => 8,
    };
    for z in roots.iter_mut() {
        for _ in 0..rounds {
            let step = match precision {
                Precision::Double => {
                    let (q, dq, s) = eval(coeffs, *z);
                    if q.norm() <= f64::EPSILON * s || dq.norm() == 0.0 {
                        break;
                    }
                    q / dq
                }
                Precision::Extended => {
                    let (q, dq) = horner_dd(coeffs, *z);
                    if dq.norm_sqr().to_f64() == 0.0 {
                        break;
                    }
                    q.div(dq).to_c64()
                }
            };
            if !step.is_finite() || step.norm() > 0.5 * z.norm().max(1.0) {
                break; // reject wild steps; the iterate is already close
            }
            *z -= step;
            if step.norm() <= 1e-17 * z.norm().max(1.0) {
                break;
            }
        }
        // plain Newton stalls at the f64 evaluation noise floor; one
        // compensated step pushes a simple root to full f64 position accuracy
        if precision == Precision::Double {
            let (q, dq) = horner_dd(coeffs, *z);
            if dq.norm_sqr().to_f64() > 0.0 {
                let step = q.div(dq).to_c64();
                if step.is_finite() && step.norm() <= 1e-6 * z.norm().max(1.0) {
                    *z -= step;
                }
            }
        }
    }
}

/// Groups roots closer than [`CLUSTER_TOL`], replaces each group by its
/// centroid, and refines the centroid with multiplicity-aware Newton steps
/// (z -= m·Q/Q'), which converge quadratically on an m-fold root where plain
/// Newton stalls at the √eps noise ball.
fn collapse_clusters(coeffs: &[f64], roots: &mut [Complex64], precision: Precision) {
    let n = roots.len();
    let mut cluster: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            if (roots[i] - roots[j]).norm() < CLUSTER_TOL {
                let (a, b) = (cluster[i], cluster[j]);
                let target = a.min(b);
                for c in cluster.iter_mut() {
                    if *c == a || *c == b {
                        *c = target;
                    }
                }
            }
        }
    }
    for group in 0..n {
        let members: Vec<usize> = (0..n).filter(|&i| cluster[i] == group).collect();
        if members.len() > 1 {
            let mut centroid =
                members.iter().map(|&i| roots[i]).sum::<Complex64>() / members.len() as f64;
            let mult = members.len() as f64;
            for _ in 0..4 {
                let step = match precision {
                    Precision::Double => {
                        let (q, dq, _) = eval(coeffs, centroid);
                        if dq.norm() == 0.0 {
                            break;
                        }
                        q / dq * mult
                    }
                    Precision::Extended => {
                        let (q, dq) = horner_dd(coeffs, centroid);
                        if dq.norm_sqr().to_f64() == 0.0 {
                            break;
                        }
                        q.div(dq).to_c64() * mult
                    }
                };
                if !step.is_finite() || step.norm() > CLUSTER_TOL {
                    break; // the group is a tight cluster, not a true multiple root
                }
                centroid -= step;
            }
            for &i in &members {
                roots[i] = centroid;
            }
        }
    }
}

/// Classifies a zero set against the unit circle with tolerance `tol`.
pub fn classify(zs: &ZeroSet, p: &FugacityPolynomial, tol: f64) -> LeeYangVerdict {
    debug_assert_eq!(zs.roots.len(), 2 * p.n_max());
    let deviations: Vec<f64> = zs.roots.iter().map(|z| (z.norm() - 1.0).abs()).collect();
    let max_radial_deviation = deviations.iter().cloned().fold(0.0, f64::max);
    let holds = max_radial_deviation <= tol;
    let borderline = deviations
        .iter()
        .enumerate()
        .filter(|(_, &d)| d >= tol / 10.0 && d <= tol * 10.0)
        .map(|(i, _)| i)
        .collect();

    let (first_zero_phase, gammas) = if holds {
        // |arg| of conjugate partners coincide; sort and average each pair
        let mut phases: Vec<f64> = zs.roots.iter().map(|z| z.arg().abs()).collect();
        phases.sort_by(f64::total_cmp);
        let folded: Vec<f64> = phases
            .chunks(2)
            .map(|pair| 0.5 * (pair[0] + pair[1]))
            .collect();
        // ascending phases give descending γ = 1/φ²
        let gammas = folded.iter().map(|phi| 1.0 / (phi * phi)).collect();
        (folded.first().copied(), gammas)
    } else {
        (None, Vec::new())
    };
    LeeYangVerdict {
        holds,
        max_radial_deviation,
        first_zero_phase,
        gammas,
        borderline,
    }
}

/// One scan point: parameter value, matched roots, verdict.
#[derive(Clone, Debug)]
pub struct TrajectoryPoint {
    pub param: f64,
    pub zeros: ZeroSet,
    pub verdict: LeeYangVerdict,
}

/// Evaluates a parameterized family over a monotone grid and matches roots
/// between consecutive points by nearest-neighbor continuation, so columns of
/// the output trace smooth trajectories.
pub fn zero_trajectory<F>(
    family: F,
    grid: &[f64],
    tol: f64,
    opts: &RootFindOptions,
) -> Result<Vec<TrajectoryPoint>>
where
    F: Fn(f64) -> Result<FugacityPolynomial> + Sync,
{
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    let increasing = grid.windows(2).all(|w| w[0] < w[1]);
    let decreasing = grid.windows(2).all(|w| w[0] > w[1]);
    if !(increasing || decreasing) {
        return Err(Error::InvalidGrid(
            "grid values must be strictly monotone".into(),
        ));
    }

    // collect everything, then surface the first failing grid index, so the
    // error path is as deterministic as the success path
    let mut points: Vec<TrajectoryPoint> = grid
        .par_iter()
        .enumerate()
        .map(|(index, &param)| {
            let attach = |e: Error| Error::AtGridPoint {
                index,
                source: Box::new(e),
            };
            let poly = family(param).map_err(attach)?;
            let zeros = find_zeros_with(&poly, opts).map_err(attach)?;
            let verdict = classify(&zeros, &poly, tol);
            Ok(TrajectoryPoint {
                param,
                zeros,
                verdict,
            })
        })
        .collect::<Vec<Result<_>>>()
        .into_iter()
        .collect::<Result<_>>()?;

    for i in 1..points.len() {
        let prev = points[i - 1].zeros.roots.clone();
        reorder_to_match(&prev, &mut points[i].zeros.roots);
    }
    Ok(points)
}

/// Greedy nearest-neighbor assignment of `current` roots to `previous` ones.
fn reorder_to_match(previous: &[Complex64], current: &mut Vec<Complex64>) {
    if previous.len() != current.len() {
        return; // degree changed along the family; leave canonical order
    }
    let mut taken = vec![false; current.len()];
    let mut matched = Vec::with_capacity(current.len());
    for p in previous {
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (i, c) in current.iter().enumerate() {
            if !taken[i] {
                let d = (p - c).norm_sqr();
                if d < best_d {
                    best_d = d;
                    best = i;
                }
            }
        }
        taken[best] = true;
        matched.push(current[best]);
    }
    *current = matched;
}
