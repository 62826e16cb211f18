//! Output records and serializers: canonical JSON, CSV projections, and the
//! optional gnuplot companion scripts.

use num_complex::Complex64;
use serde::Serialize;

use lyzero_core::{FugacityPolynomial, LeeYangVerdict, ZeroSet};

#[derive(Serialize)]
pub struct PartitionRecord {
    pub engine: &'static str,
    pub sites: usize,
    pub beta: f64,
    pub coeffs: Vec<f64>,
    pub log_scale: f64,
    /// ln of the normalization dropped relative to the counting-measure
    /// convention; add it back to recover unnormalized values.
    pub log_prefactor: f64,
}

impl PartitionRecord {
    pub fn new(
        engine: &'static str,
        sites: usize,
        log_prefactor: f64,
        p: &FugacityPolynomial,
    ) -> Self {
        PartitionRecord {
            engine,
            sites,
            beta: p.beta(),
            coeffs: p.coeffs().to_vec(),
            log_scale: p.log_scale(),
            log_prefactor,
        }
    }

    pub fn to_csv(&self) -> String {
        let n_max = (self.coeffs.len() / 2) as i64;
        let mut out = String::from("m,coeff\n");
        for (i, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!("{},{}\n", i as i64 - n_max, c));
        }
        out
    }
}

#[derive(Serialize)]
pub struct RootRecord {
    pub re_z: f64,
    pub im_z: f64,
    pub abs_z_minus_1: f64,
    pub phase: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

#[derive(Serialize)]
pub struct ZerosRecord {
    pub tolerance: f64,
    pub residual: f64,
    pub verdict: LeeYangVerdict,
    pub roots: Vec<RootRecord>,
}

impl ZerosRecord {
    pub fn new(zs: &ZeroSet, verdict: LeeYangVerdict, tol: f64) -> Self {
        let roots = zs.roots.iter().map(|z| root_record(*z, tol)).collect();
        ZerosRecord {
            tolerance: tol,
            residual: zs.residual,
            verdict,
            roots,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("re_z,im_z,abs_z_minus_1,phase,gamma\n");
        for r in &self.roots {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.re_z,
                r.im_z,
                r.abs_z_minus_1,
                r.phase,
                r.gamma.map(|g| g.to_string()).unwrap_or_default()
            ));
        }
        out
    }
}

fn root_record(z: Complex64, tol: f64) -> RootRecord {
    let dev = (z.norm() - 1.0).abs();
    let phase = z.arg();
    RootRecord {
        re_z: z.re,
        im_z: z.im,
        abs_z_minus_1: dev,
        phase,
        gamma: (dev <= tol && phase != 0.0).then(|| 1.0 / (phase * phase)),
    }
}

#[derive(Serialize)]
pub struct ScanPoint {
    pub param: f64,
    pub holds: bool,
    pub max_radial_deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_zero_phase: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_gamma: Option<f64>,
}

pub fn scan_csv(points: &[ScanPoint]) -> String {
    let mut out = String::from("param,holds,max_radial_deviation,first_zero_phase,first_gamma\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            p.param,
            p.holds,
            p.max_radial_deviation,
            p.first_zero_phase
                .map(|v| v.to_string())
                .unwrap_or_default(),
            p.first_gamma.map(|v| v.to_string()).unwrap_or_default(),
        ));
    }
    out
}

#[derive(Serialize)]
pub struct BoundsRecord {
    pub beta: f64,
    pub kappa: f64,
    pub beta_kappa: f64,
    pub theta_bound_i: f64,
    pub theta_bound_ii: f64,
    pub delta_max: f64,
    pub q_max: f64,
    pub delta_max_below_half_kappa: bool,
}

/// Pretty JSON with a trailing newline: the canonical output form.
pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("record serializes");
    s.push('\n');
    s
}

/// Companion gnuplot script for a CSV written to `csv_path`.
pub fn gnuplot_script(kind: GnuplotKind, csv_path: &str) -> String {
    match kind {
        GnuplotKind::Zeros => format!(
            "set datafile separator ','\n\
             set size ratio -1\n\
             set parametric\n\
             set trange [0:2*pi]\n\
             set xlabel 're z'\n\
             set ylabel 'im z'\n\
             plot cos(t),sin(t) with lines lc rgb 'gray' title 'unit circle', \\\n\
             \t'{csv_path}' every ::1 using 1:2 with points pt 7 title 'zeros'\n"
        ),
        GnuplotKind::Scan => format!(
            "set datafile separator ','\n\
             set xlabel 'parameter'\n\
             set logscale y\n\
             set ylabel 'max | |z| - 1 |'\n\
             plot '{csv_path}' every ::1 using 1:3 with linespoints pt 7 title 'radial deviation'\n"
        ),
        GnuplotKind::Partition => format!(
            "set datafile separator ','\n\
             set xlabel 'magnetization m'\n\
             set ylabel 'coefficient (scaled)'\n\
             plot '{csv_path}' every ::1 using 1:2 with boxes title 'coefficients'\n"
        ),
    }
}

#[derive(Clone, Copy)]
pub enum GnuplotKind {
    Zeros,
    Scan,
    Partition,
}
