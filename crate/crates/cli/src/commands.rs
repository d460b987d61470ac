//! The subcommand pipelines. Each returns its standard output as a string
//! plus an exit code, or a [`Failure`].

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use rigidkit_core::corpus::{CorpusEntry, CORPUS};
use rigidkit_core::energy::{energy_along_trajectory, EnergyFamily, EnergySpec};
use rigidkit_core::growth::fit_growth_order;
use rigidkit_core::ladder::{rigidity_order, OrderReport, Verdict};
use rigidkit_core::rigidity::decompose;
use rigidkit_core::{
    auto_pin, fourth_derivative_test, order2k_family_test, pin, second_order_rigidity_test, AnalyticTarget,
    AutoPinned, Framework, GrowthFit, PinnedFramework, PolyTrajectory, DEFAULT_RANK_TOL,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::report::{render_order, AnalysisReport, GrowthSummary, Timings, WitnessSummary, GROWTH_NOTE};
use crate::{Failure, EXIT_MISMATCH, EXIT_OK};

pub struct Output {
    pub stdout: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self { stdout, code: EXIT_OK }
    }
}

pub struct Loaded {
    pub name: String,
    pub sha256: String,
    pub framework: Framework,
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

pub fn load_framework(path: &Path) -> Result<Loaded, Failure> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let framework =
        Framework::from_json_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let name = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
    Ok(Loaded {
        name,
        sha256: hex::encode(Sha256::digest(&bytes)),
        framework,
    })
}

fn load_corpus_entry(entry: &CorpusEntry, dir: Option<&Path>) -> Result<Loaded, Failure> {
    match dir {
        Some(d) => load_framework(&d.join(format!("{}.json", entry.name))),
        None => Ok(Loaded {
            name: entry.name.to_string(),
            sha256: hex::encode(Sha256::digest(entry.json.as_bytes())),
            framework: entry.framework()?,
        }),
    }
}

/// Pins with or without relabeling; the permutation is identity when not
/// relabeled.
pub fn pin_framework(framework: &Framework, auto_permute: bool) -> Result<AutoPinned, Failure> {
    if auto_permute {
        Ok(auto_pin(framework, DEFAULT_RANK_TOL)?)
    } else {
        let (pinned, isometry) = pin(framework, DEFAULT_RANK_TOL)?;
        Ok(AutoPinned {
            pinned,
            isometry,
            permutation: (0..framework.n_vertices()).collect(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct GrowthOptions {
    pub family: EnergyFamily,
    pub r_min: f64,
    pub r_max: f64,
    pub n_radii: usize,
    pub starts: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub max_k: u32,
    pub tol: f64,
    pub auto_permute: bool,
    pub growth: Option<GrowthOptions>,
    pub timings: bool,
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

fn growth_fit(pf: &PinnedFramework, g: &GrowthOptions) -> Result<GrowthFit, Failure> {
    let spec = EnergySpec::new(g.family, pf.framework());
    Ok(fit_growth_order(&spec, pf, g.r_min, g.r_max, g.n_radii, g.starts, g.seed)?)
}

pub fn analyze(loaded: &Loaded, opts: &AnalyzeOptions) -> Result<AnalysisReport, Failure> {
    let start = Instant::now();
    let pinned = pin_framework(&loaded.framework, opts.auto_permute)?;
    let pin_ms = ms(start);
    let pf = &pinned.pinned;
    let t = Instant::now();
    let (_, kd) = decompose(pf);
    let kernel_ms = ms(t);
    let t = Instant::now();
    let report = rigidity_order(pf, opts.max_k, opts.tol)?;
    let order_ms = ms(t);
    let (growth, growth_ms) = match &opts.growth {
        Some(g) => {
            let t = Instant::now();
            let fit = growth_fit(pf, g)?;
            (Some(GrowthSummary::new(g.family.name(), &fit, g.starts, g.seed)), Some(ms(t)))
        }
        None => (None, None),
    };
    let total_ms = ms(start);
    let witness = report.witness.as_ref().map(|w| WitnessSummary {
        levels: w.degree(),
        flex: format!("(1,{})", w.degree()),
        coeff_norms: w.coeff_norms(),
    });
    let f = &loaded.framework;
    Ok(AnalysisReport {
        name: loaded.name.clone(),
        sha256: loaded.sha256.clone(),
        dimension: f.dimension(),
        n_vertices: f.n_vertices(),
        n_edges: f.n_edges(),
        n_free: pf.n_free(),
        permutation: pinned.permutation.iter().map(|p| p + 1).collect(),
        dim_k: kd.dim_k,
        first_order_rigid: kd.dim_k == 0,
        summary: report.summary(),
        margin: report.margin(),
        verdict: report.verdict,
        method: report.method,
        residuals: report.residuals,
        witness,
        growth,
        timings: opts.timings.then_some(Timings {
            pin_ms,
            kernel_ms,
            order_ms,
            growth_ms,
            total_ms,
        }),
    })
}

pub fn cmd_analyze(path: &Path, opts: &AnalyzeOptions, json: bool, expect: Option<u32>) -> Result<Output, Failure> {
    let loaded = load_framework(path)?;
    let report = analyze(&loaded, opts)?;
    let stdout = if json { report.to_json() + "\n" } else { report.render() };
    let code = match expect {
        Some(k) if report.verdict != Verdict::Order(k) => EXIT_MISMATCH,
        _ => EXIT_OK,
    };
    Ok(Output { stdout, code })
}

pub fn cmd_order(path: &Path, max_k: u32, tol: f64, auto_permute: bool, json: bool) -> Result<Output, Failure> {
    let loaded = load_framework(path)?;
    let pinned = pin_framework(&loaded.framework, auto_permute)?;
    let report = rigidity_order(&pinned.pinned, max_k, tol)?;
    let stdout = if json {
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
    } else {
        render_order(&report)
    };
    Ok(Output::ok(stdout))
}

pub fn growth_csv(fit: &GrowthFit) -> String {
    let mut out = String::from("r,m_r,log_r,log_m\n");
    for (r, m) in fit.radii.iter().zip(&fit.m_values) {
        let _ = writeln!(out, "{r:e},{m:e},{:e},{:e}", r.ln(), m.ln());
    }
    out
}

pub fn cmd_growth(
    path: &Path,
    opts: &GrowthOptions,
    auto_permute: bool,
    csv: Option<&Path>,
    json: bool,
) -> Result<Output, Failure> {
    let loaded = load_framework(path)?;
    let pinned = pin_framework(&loaded.framework, auto_permute)?;
    let fit = growth_fit(&pinned.pinned, opts)?;
    if let Some(p) = csv {
        fs::write(p, growth_csv(&fit)).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?;
    }
    if json {
        return Ok(Output::ok(serde_json::to_string_pretty(&fit).expect("fit serializes") + "\n"));
    }
    let mut out = String::new();
    if csv.is_none() {
        out.push_str(&growth_csv(&fit));
    }
    let _ = writeln!(
        out,
        "fit: s = {:.6}, nu = {:.6}, intercept = {:.6}, r2 = {:.8}, m(r) {}",
        fit.fitted_s,
        fit.nu_hat,
        fit.intercept,
        fit.r2,
        if fit.monotone { "monotone" } else { "NOT monotone" }
    );
    let _ = writeln!(out, "note: {GROWTH_NOTE}");
    Ok(Output::ok(out))
}

/// A trajectory file: either a bare trajectory or an order report carrying
/// a witness (as written by `order --json`).
#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum TrajectoryFile {
    Trajectory(PolyTrajectory),
    Report(OrderReport),
}

fn load_trajectory(path: &Path) -> Result<PolyTrajectory, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    match serde_json::from_str::<TrajectoryFile>(&text) {
        Ok(TrajectoryFile::Trajectory(t)) => Ok(t),
        Ok(TrajectoryFile::Report(r)) => {
            r.witness.ok_or_else(|| Failure::usage(format!("{}: report has no witness", path.display())))
        }
        Err(e) => Err(Failure::usage(format!("{}: {e}", path.display()))),
    }
}

fn ladder_witness(pf: &PinnedFramework) -> Result<PolyTrajectory, Failure> {
    let report = rigidity_order(pf, rigidkit_core::DEFAULT_MAX_K, rigidkit_core::DEFAULT_LADDER_TOL)?;
    let summary = report.summary();
    report
        .witness
        .ok_or_else(|| Failure::numerical(format!("no ladder witness ({summary})")))
}

pub fn energy_csv(jet: &rigidkit_core::Jet) -> String {
    let mut out = String::from("n,coeff,derivative,magnitude\n");
    for n in 0..=jet.order() {
        let _ = writeln!(out, "{n},{:e},{:e},{:e}", jet.coeff(n), jet.derivative(n), jet.magnitude(n));
    }
    out
}

pub fn cmd_energy(
    path: &Path,
    family: EnergyFamily,
    traj: Option<&Path>,
    order: Option<usize>,
    auto_permute: bool,
    csv: Option<&Path>,
) -> Result<Output, Failure> {
    let loaded = load_framework(path)?;
    let pinned = pin_framework(&loaded.framework, auto_permute)?;
    let pf = &pinned.pinned;
    let trajectory = match traj {
        Some(p) => load_trajectory(p)?,
        None => ladder_witness(pf)?,
    };
    if trajectory.n() != pf.n_free() {
        return Err(Failure::usage(format!(
            "trajectory has {} coordinates, the pinned framework has {}",
            trajectory.n(),
            pf.n_free()
        )));
    }
    let order = order.unwrap_or(2 * trajectory.degree() + 2);
    let spec = EnergySpec::new(family, pf.framework());
    let jet = energy_along_trajectory(&spec, pf, &trajectory, order)?;
    let table = energy_csv(&jet);
    match csv {
        Some(p) => {
            fs::write(p, &table).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?;
            Ok(Output::ok(format!("wrote {} coefficients to {}\n", order + 1, p.display())))
        }
        None => Ok(Output::ok(table)),
    }
}

pub enum CritInput {
    Polynomial(PathBuf),
    Framework { path: PathBuf, family: EnergyFamily, k: usize, auto_permute: bool },
}

pub fn cmd_critpoint(input: &CritInput, tol: f64, starts: usize) -> Result<Output, Failure> {
    let report = match input {
        CritInput::Polynomial(p) => {
            let text = fs::read_to_string(p).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?;
            let poly = rigidkit_core::Polynomial::from_json_str(&text)
                .map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?;
            fourth_derivative_test(&AnalyticTarget::Polynomial(poly), tol, starts)?
        }
        CritInput::Framework {
            path,
            family,
            k,
            auto_permute,
        } => {
            let loaded = load_framework(path)?;
            let pinned = pin_framework(&loaded.framework, *auto_permute)?;
            let pf = &pinned.pinned;
            let spec = EnergySpec::new(*family, pf.framework());
            match *k {
                0 | 1 => return Err(Failure::usage("--order must be at least 2")),
                2 => {
                    let (_, kd) = decompose(pf);
                    second_order_rigidity_test(pf, &spec, &kd, tol, starts)?
                }
                k => {
                    let witness = ladder_witness(pf)?;
                    if witness.degree() < k - 1 {
                        return Err(Failure::numerical(format!(
                            "no (1,{})-flex to build the order-{} family from: the ladder stops at a (1,{})-flex",
                            k - 1,
                            2 * k,
                            witness.degree()
                        )));
                    }
                    order2k_family_test(pf, &spec, &witness.truncated(k - 1), k, tol)?
                }
            }
        }
    };
    Ok(Output::ok(serde_json::to_string_pretty(&report).expect("report serializes") + "\n"))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusLine {
    pub name: String,
    pub expected: u32,
    pub dim_k: Option<usize>,
    pub verdict: Option<Verdict>,
    pub summary: String,
    pub margin: Option<f64>,
    pub ok: bool,
}

fn verify_entry(entry: &CorpusEntry, dir: Option<&Path>, max_k: u32, tol: f64) -> CorpusLine {
    let run = || -> Result<(usize, OrderReport), Failure> {
        let loaded = load_corpus_entry(entry, dir)?;
        let pinned = pin_framework(&loaded.framework, true)?;
        let (_, kd) = decompose(&pinned.pinned);
        Ok((kd.dim_k, rigidity_order(&pinned.pinned, max_k, tol)?))
    };
    match run() {
        Ok((dim_k, report)) => CorpusLine {
            name: entry.name.to_string(),
            expected: entry.expected_order,
            dim_k: Some(dim_k),
            ok: report.verdict == Verdict::Order(entry.expected_order),
            summary: report.summary(),
            margin: report.margin(),
            verdict: Some(report.verdict),
        },
        Err(e) => CorpusLine {
            name: entry.name.to_string(),
            expected: entry.expected_order,
            dim_k: None,
            verdict: None,
            summary: format!("error: {e}"),
            margin: None,
            ok: false,
        },
    }
}

pub fn cmd_corpus_verify(dir: Option<&Path>, max_k: u32, tol: f64, json: bool) -> Result<Output, Failure> {
    let lines: Vec<CorpusLine> = CORPUS.par_iter().map(|e| verify_entry(e, dir, max_k, tol)).collect();
    let matched = lines.iter().filter(|l| l.ok).count();
    let code = if matched == lines.len() { EXIT_OK } else { EXIT_MISMATCH };
    if json {
        return Ok(Output {
            stdout: serde_json::to_string_pretty(&lines).expect("lines serialize") + "\n",
            code,
        });
    }
    let mut out = String::new();
    for l in &lines {
        let dim = l.dim_k.map_or_else(|| "-".to_string(), |d| d.to_string());
        let margin = l.margin.map_or_else(|| "-".to_string(), |m| format!("{m:.1e}"));
        let _ = writeln!(
            out,
            "{:<20} expected {}  dimK {:<2} {:<34} margin {:<8} {}",
            l.name,
            l.expected,
            dim,
            l.summary,
            margin,
            if l.ok { "ok" } else { "MISMATCH" }
        );
    }
    let _ = writeln!(out, "{matched}/{} match", lines.len());
    Ok(Output { stdout: out, code })
}
