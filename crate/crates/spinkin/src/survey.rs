//! Random-state survey: generates an ensemble of symmetric two-qubit mixed
//! states, evaluates the kinematical and correlation-measure panel on each,
//! and emits per-figure scatter data, a Pearson correlation matrix, and the
//! spin-3/2 equal-angle landscape grid.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::Complex;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::averages::{total_acceleration_closed, total_acceleration_mixed, SphericalDesign22};
use crate::bures::bures_sq;
use crate::error::{Error, Result};
use crate::fs_kinematics::acc_norm_sq_closed;
use crate::matrix::{commutator, herm_norm_sq, partial_trace, trace, CMatrix};
use crate::measures::measure_panel;
use crate::spin_algebra::{axis_operator, spin_matrices, Spin};
use crate::states::{
    constellation_from_pairwise_angles, constellation_to_state, pauli, random_mixed_symmetric,
    random_pure, symmetric_embed,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex::new(re, im)
}

#[derive(Debug, Clone)]
pub struct SurveyConfig {
    pub samples: usize,
    pub master_seed: u64,
    /// Number of pure components mixed per state.
    pub components: usize,
    /// Every nth record is drawn pure instead of mixed (flag 1).
    pub pure_every: usize,
    /// Use the flat trace norm ½Tr(X²) instead of the Bures norm for the
    /// mixed-state kinematics (sensitivity check).
    pub trace_metric: bool,
}

impl Default for SurveyConfig {
    fn default() -> Self {
        SurveyConfig {
            samples: 3000,
            master_seed: 1,
            components: 3,
            pure_every: 10,
            trace_metric: false,
        }
    }
}

/// Record flags: 0 = mixed, 1 = pure draw, 2 = metric solver failure (the
/// Bures-dependent columns are zeroed but the record is kept).
#[derive(Debug, Clone, Copy)]
pub struct SurveyRecord {
    pub index: usize,
    pub seed: u64,
    pub flag: u8,
    pub purity: f64,
    pub s_vn: f64,
    pub s_vn_red: f64,
    pub s_lin: f64,
    pub s_lin_red: f64,
    pub concurrence: f64,
    pub negativity: f64,
    pub geo_discord: f64,
    pub totvar: f64,
    pub v2_total: f64,
    pub v2_red: f64,
    pub a2_total: f64,
    pub a2_red: f64,
    pub excess_f: f64,
}

pub const NUMERIC_COLUMNS: [&str; 14] = [
    "purity",
    "s_vn",
    "s_vn_red",
    "s_lin",
    "s_lin_red",
    "concurrence",
    "negativity",
    "geo_discord",
    "totvar",
    "v2_total",
    "v2_red",
    "a2_total",
    "a2_red",
    "excess_F",
];

impl SurveyRecord {
    pub fn numeric(&self) -> [f64; 14] {
        [
            self.purity,
            self.s_vn,
            self.s_vn_red,
            self.s_lin,
            self.s_lin_red,
            self.concurrence,
            self.negativity,
            self.geo_discord,
            self.totvar,
            self.v2_total,
            self.v2_red,
            self.a2_total,
            self.a2_red,
            self.excess_f,
        ]
    }

    pub fn column(&self, name: &str) -> Option<f64> {
        let idx = NUMERIC_COLUMNS.iter().position(|&n| n == name)?;
        Some(self.numeric()[idx])
    }
}

#[derive(Debug, Clone)]
pub struct SurveyResult {
    pub config: SurveyConfig,
    pub records: Vec<SurveyRecord>,
    /// Pearson correlations of the numeric columns, over non-failed records.
    pub correlations: Vec<Vec<f64>>,
    /// Fraction of mixed (flag 0) records with negative speed excess.
    pub negative_f_fraction: f64,
    /// Smallest speed excess among the pure (flag 1) records.
    pub min_pure_f: f64,
}

struct Kinematics {
    totvar: f64,
    v2_red: f64,
    a2_total: f64,
    a2_red: f64,
}

fn speed_norm_sq(rho: &CMatrix, v: &CMatrix, trace_metric: bool) -> Result<f64> {
    if trace_metric {
        Ok(herm_norm_sq(v))
    } else {
        bures_sq(rho, v)
    }
}

fn kinematics(rho3: &CMatrix, rho1: &CMatrix, pure: bool, cfg: &SurveyConfig) -> Result<Kinematics> {
    let (sx, sy, sz) = spin_matrices(Spin { two_s: 2 });
    let gens3 = [sx, sy, sz];
    let sig = pauli();

    let mut totvar = 0.0;
    for g in &gens3 {
        let v = commutator(g, rho3) * c(0.0, -1.0);
        totvar += speed_norm_sq(rho3, &v, cfg.trace_metric)?;
    }
    let mut v2_red = 0.0;
    for s in &sig {
        let half = s * c(0.5, 0.0);
        let v = commutator(&half, rho1) * c(0.0, -1.0);
        v2_red += speed_norm_sq(rho1, &v, cfg.trace_metric)? / 3.0;
    }

    let design = SphericalDesign22::icosahedral();
    let a2_total = if pure {
        // rank-1 state: the projective closed formula applies directly
        design.average(|n| acc_norm_sq_closed(rho3, &axis_operator(Spin { two_s: 2 }, n)))
    } else if cfg.trace_metric {
        design.average(|n| {
            let h = axis_operator(Spin { two_s: 2 }, n);
            let ddot = commutator(&h, &commutator(&h, rho3)) * c(-1.0, 0.0);
            herm_norm_sq(&ddot)
        })
    } else {
        total_acceleration_mixed(rho3, &gens3)?
    };

    let halves = [
        &sig[0] * c(0.5, 0.0),
        &sig[1] * c(0.5, 0.0),
        &sig[2] * c(0.5, 0.0),
    ];
    let a2_red = if cfg.trace_metric {
        design.average(|n| {
            let h = &halves[0] * c(n[0], 0.0) + &halves[1] * c(n[1], 0.0) + &halves[2] * c(n[2], 0.0);
            let ddot = commutator(&h, &commutator(&h, rho1)) * c(-1.0, 0.0);
            herm_norm_sq(&ddot)
        })
    } else {
        total_acceleration_mixed(rho1, &halves)?
    };

    Ok(Kinematics {
        totvar,
        v2_red,
        a2_total,
        a2_red,
    })
}

fn build_record(index: usize, cfg: &SurveyConfig) -> Result<SurveyRecord> {
    let seed = index as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.master_seed);
    rng.set_stream(seed);
    let pure = cfg.pure_every > 0 && index % cfg.pure_every == 0;
    let rho3 = if pure {
        random_pure(Spin { two_s: 2 }, &mut rng).projector()
    } else {
        random_mixed_symmetric(&mut rng, cfg.components).matrix
    };
    let rho4 = symmetric_embed(&rho3)?;
    let rho1 = partial_trace(&rho4, (2, 2), 1)?;
    let panel = measure_panel(&rho4)?;
    let purity = trace(&(&rho3 * &rho3)).re;

    let mut rec = SurveyRecord {
        index,
        seed,
        flag: if pure { 1 } else { 0 },
        purity,
        s_vn: panel.s_vn,
        s_vn_red: panel.s_vn_reduced,
        s_lin: panel.s_lin,
        s_lin_red: panel.s_lin_reduced,
        concurrence: panel.concurrence,
        negativity: panel.negativity,
        geo_discord: panel.geo_discord,
        totvar: 0.0,
        v2_total: 0.0,
        v2_red: 0.0,
        a2_total: 0.0,
        a2_red: 0.0,
        excess_f: 0.0,
    };
    match kinematics(&rho3, &rho1, pure, cfg) {
        Ok(k) => {
            rec.totvar = k.totvar;
            rec.v2_total = k.totvar / 3.0;
            rec.v2_red = k.v2_red;
            rec.a2_total = k.a2_total;
            rec.a2_red = k.a2_red;
            // symmetric state: both reduced states coincide
            rec.excess_f = rec.v2_total - 2.0 * k.v2_red;
        }
        Err(Error::Degenerate { .. }) => rec.flag = 2,
        Err(e) => return Err(e),
    }
    Ok(rec)
}

/// Numerically stable deterministic sum (recursive pairwise reduction).
fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

fn pearson_matrix(rows: &[[f64; 14]]) -> Vec<Vec<f64>> {
    let n = rows.len() as f64;
    let ncol = NUMERIC_COLUMNS.len();
    let mut means = vec![0.0; ncol];
    for (j, m) in means.iter_mut().enumerate() {
        let col: Vec<f64> = rows.iter().map(|r| r[j]).collect();
        *m = pairwise_sum(&col) / n;
    }
    let mut out = vec![vec![0.0; ncol]; ncol];
    for i in 0..ncol {
        for j in 0..ncol {
            let prod: Vec<f64> = rows
                .iter()
                .map(|r| (r[i] - means[i]) * (r[j] - means[j]))
                .collect();
            out[i][j] = pairwise_sum(&prod);
        }
    }
    for i in 0..ncol {
        for j in 0..ncol {
            if i != j {
                let d = (out[i][i] * out[j][j]).sqrt();
                out[i][j] = if d > 0.0 { out[i][j] / d } else { 0.0 };
            }
        }
    }
    for i in 0..ncol {
        out[i][i] = 1.0;
    }
    out
}

pub fn run_survey(cfg: &SurveyConfig) -> Result<SurveyResult> {
    if cfg.samples == 0 {
        return Err(Error::Invalid("sample count must be at least 1".into()));
    }
    let records: Result<Vec<SurveyRecord>> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| build_record(i, cfg))
        .collect();
    let records = records?;

    let good: Vec<[f64; 14]> = records
        .iter()
        .filter(|r| r.flag != 2)
        .map(|r| r.numeric())
        .collect();
    let correlations = pearson_matrix(&good);

    let mixed: Vec<&SurveyRecord> = records.iter().filter(|r| r.flag == 0).collect();
    let negative = mixed.iter().filter(|r| r.excess_f < 0.0).count();
    let negative_f_fraction = if mixed.is_empty() {
        0.0
    } else {
        negative as f64 / mixed.len() as f64
    };
    let min_pure_f = records
        .iter()
        .filter(|r| r.flag == 1)
        .map(|r| r.excess_f)
        .fold(f64::INFINITY, f64::min);

    Ok(SurveyResult {
        config: cfg.clone(),
        records,
        correlations,
        negative_f_fraction,
        min_pure_f,
    })
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn survey_csv(result: &SurveyResult) -> String {
    let cfg = &result.config;
    let metric = if cfg.trace_metric { "trace" } else { "bures" };
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# spinkin survey samples={} master_seed={} components={} pure_every={} metric={}",
        cfg.samples, cfg.master_seed, cfg.components, cfg.pure_every, metric
    );
    let _ = writeln!(
        out,
        "# kinematical columns are averaged over the x,y,z rotation axes"
    );
    let _ = writeln!(
        out,
        "# index,seed,flag,purity,s_vn,s_vn_red,s_lin,s_lin_red,concurrence,negativity,geo_discord,totvar,v2_total,v2_red,a2_total,a2_red,excess_F"
    );
    for r in &result.records {
        let nums: Vec<String> = r.numeric().iter().map(|&v| fmt(v)).collect();
        let _ = writeln!(out, "{},{},{},{}", r.index, r.seed, r.flag, nums.join(","));
    }
    out
}

pub fn correlation_csv(result: &SurveyResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# pearson correlations, columns = rows = {}", NUMERIC_COLUMNS.join(","));
    for row in &result.correlations {
        let cells: Vec<String> = row.iter().map(|&v| fmt(v)).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

/// Scatter-pair column names (x, y) for each known figure id.
pub fn figure_columns(figure_id: &str) -> Result<(&'static str, &'static str)> {
    let pair = match figure_id {
        "fig4a" => ("s_vn", "s_lin"),
        "fig4b" => ("s_vn_red", "s_vn"),
        "fig4c" => ("s_vn_red", "s_lin_red"),
        "fig5a" => ("s_vn_red", "concurrence"),
        "fig5b" => ("s_vn", "concurrence"),
        "fig5c" => ("concurrence", "negativity"),
        "fig6a" => ("a2_total", "s_vn"),
        "fig6b" => ("a2_total", "s_vn_red"),
        "fig6c" => ("a2_total", "concurrence"),
        "fig6d" => ("a2_total", "v2_total"),
        "fig6e" => ("a2_total", "v2_red"),
        "fig6f" => ("a2_total", "a2_red"),
        "fig7a" => ("a2_red", "s_vn"),
        "fig7b" => ("a2_red", "s_vn_red"),
        "fig7c" => ("a2_red", "concurrence"),
        "fig7d" => ("a2_red", "v2_total"),
        "fig7e" => ("a2_red", "v2_red"),
        "fig8a" => ("v2_total", "geo_discord"),
        "fig8b" => ("v2_red", "geo_discord"),
        "fig8c" => ("a2_total", "geo_discord"),
        "fig8d" => ("excess_F", "geo_discord"),
        "fig8e" => ("excess_F", "concurrence"),
        "fig8f" => ("v2_red", "s_lin_red"),
        _ => {
            return Err(Error::Invalid(format!("unknown figure id: {figure_id}")));
        }
    };
    Ok(pair)
}

pub const FIGURE_IDS: [&str; 23] = [
    "fig4a", "fig4b", "fig4c", "fig5a", "fig5b", "fig5c", "fig6a", "fig6b", "fig6c", "fig6d",
    "fig6e", "fig6f", "fig7a", "fig7b", "fig7c", "fig7d", "fig7e", "fig8a", "fig8b", "fig8c",
    "fig8d", "fig8e", "fig8f",
];

pub fn figure_data(records: &[SurveyRecord], figure_id: &str) -> Result<String> {
    let (xc, yc) = figure_columns(figure_id)?;
    let mut out = String::new();
    let _ = writeln!(out, "# {figure_id}: index,{xc},{yc}");
    for r in records {
        if r.flag == 2 {
            continue;
        }
        let x = r.column(xc).expect("known column");
        let y = r.column(yc).expect("known column");
        let _ = writeln!(out, "{},{},{}", r.index, fmt(x), fmt(y));
    }
    Ok(out)
}

pub fn emit_figure_data(records: &[SurveyRecord], figure_id: &str, dir: &Path) -> Result<()> {
    let text = figure_data(records, figure_id)?;
    std::fs::write(dir.join(format!("{figure_id}.csv")), text)
        .map_err(|e| Error::Invalid(format!("write failure: {e}")))
}

/// Equal-angle landscape of the spin-3/2 total acceleration over the three
/// pairwise star angles; rows "alpha,beta,gamma,realizable,value" with value
/// NA when the angle triple admits no constellation.
pub fn contour_grid(resolution: usize) -> Result<String> {
    if resolution < 2 {
        return Err(Error::Invalid("resolution must be at least 2".into()));
    }
    let mut out = String::new();
    let _ = writeln!(out, "# alpha,beta,gamma,realizable,value");
    let step = std::f64::consts::PI / (resolution - 1) as f64;
    for ia in 0..resolution {
        for ib in 0..resolution {
            for ig in 0..resolution {
                let (a, b, g) = (ia as f64 * step, ib as f64 * step, ig as f64 * step);
                match constellation_from_pairwise_angles(a, b, g) {
                    Ok(con) => {
                        let psi = constellation_to_state(&con)?;
                        let v = total_acceleration_closed(&psi)?;
                        let _ = writeln!(out, "{},{},{},1,{}", fmt(a), fmt(b), fmt(g), fmt(v));
                    }
                    Err(Error::Unrealizable { .. }) => {
                        let _ = writeln!(out, "{},{},{},0,NA", fmt(a), fmt(b), fmt(g));
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(out)
}
