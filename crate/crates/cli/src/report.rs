//! The analysis report and its human-readable and JSON renderings.

use std::fmt::Write as _;

use rigidkit_core::ladder::{LevelResidual, Method, OrderReport, Verdict};
use rigidkit_core::GrowthFit;
use serde::{Deserialize, Serialize};

/// Shown next to every growth fit.
pub const GROWTH_NOTE: &str =
    "sphere minimization gives an upper bound on m(r); double precision limits reliable slopes to about s <= 10";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSummary {
    /// Number of flex coefficients `c_1..c_j` (the witness is a `(1, j)`-flex).
    pub levels: usize,
    pub flex: String,
    /// `|c_i|` for each coefficient.
    pub coeff_norms: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthSummary {
    pub family: String,
    pub r_min: f64,
    pub r_max: f64,
    pub n_radii: usize,
    pub starts: usize,
    pub seed: u64,
    pub fitted_s: f64,
    pub nu_hat: f64,
    pub r2: f64,
    pub monotone: bool,
    pub note: String,
}

impl GrowthSummary {
    pub fn new(family: &str, fit: &GrowthFit, starts: usize, seed: u64) -> Self {
        Self {
            family: family.to_string(),
            r_min: fit.radii[0],
            r_max: *fit.radii.last().unwrap(),
            n_radii: fit.radii.len(),
            starts,
            seed,
            fitted_s: fit.fitted_s,
            nu_hat: fit.nu_hat,
            r2: fit.r2,
            monotone: fit.monotone,
            note: GROWTH_NOTE.to_string(),
        }
    }
}

/// Wall-clock milliseconds per stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub pin_ms: f64,
    pub kernel_ms: f64,
    pub order_ms: f64,
    pub growth_ms: Option<f64>,
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub name: String,
    /// SHA-256 of the framework file bytes.
    pub sha256: String,
    pub dimension: usize,
    pub n_vertices: usize,
    pub n_edges: usize,
    /// Free coordinates after pinning.
    pub n_free: usize,
    /// `permutation[new] = old`, 1-based like the file's edges.
    pub permutation: Vec<usize>,
    pub dim_k: usize,
    pub first_order_rigid: bool,
    pub verdict: Verdict,
    pub method: Method,
    pub summary: String,
    pub margin: Option<f64>,
    pub residuals: Vec<LevelResidual>,
    pub witness: Option<WitnessSummary>,
    pub growth: Option<GrowthSummary>,
    pub timings: Option<Timings>,
}

impl AnalysisReport {
    pub fn is_identity_permutation(&self) -> bool {
        self.permutation.iter().enumerate().all(|(i, &p)| p == i + 1)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "framework   {} (sha256 {})", self.name, self.sha256);
        let _ = writeln!(
            out,
            "size        n={} |G|={} N={} in R^{}",
            self.n_vertices, self.n_edges, self.n_free, self.dimension
        );
        if self.is_identity_permutation() {
            let _ = writeln!(out, "pinning     identity");
        } else {
            let _ = writeln!(out, "pinning     relabeled {:?}", self.permutation);
        }
        let rigid = if self.first_order_rigid { "first-order rigid" } else { "not first-order rigid" };
        let _ = writeln!(out, "dimK        {} ({rigid})", self.dim_k);
        let _ = writeln!(out, "verdict     {}", self.summary);
        if let Some(m) = self.margin {
            let _ = writeln!(out, "margin      {m:.2e}");
        }
        out.push_str(&render_residuals(&self.residuals));
        if let Some(w) = &self.witness {
            let norms: Vec<String> = w.coeff_norms.iter().map(|x| format!("{x:.4e}")).collect();
            let _ = writeln!(out, "witness     {}-flex, |c_i| = [{}]", w.flex, norms.join(", "));
        }
        if let Some(g) = &self.growth {
            let shape = if g.monotone { "monotone" } else { "NOT monotone" };
            let _ = writeln!(
                out,
                "growth      {} s = {:.4} (nu = {:.4}, r2 = {:.6}, m(r) {shape}) over r in [{:e}, {:e}]",
                g.family, g.fitted_s, g.nu_hat, g.r2, g.r_min, g.r_max
            );
            let _ = writeln!(out, "            {}", g.note);
        }
        if let Some(t) = &self.timings {
            let growth = t.growth_ms.map(|g| format!(", growth {g:.1} ms")).unwrap_or_default();
            let _ = writeln!(
                out,
                "timings     pin {:.3} ms, kernel {:.3} ms, order {:.3} ms{growth}, total {:.3} ms",
                t.pin_ms, t.kernel_ms, t.order_ms, t.total_ms
            );
        }
        out
    }
}

pub fn render_residuals(residuals: &[LevelResidual]) -> String {
    let mut out = String::new();
    if residuals.is_empty() {
        return out;
    }
    let _ = writeln!(out, "levels      l   residual     |rhs|        relative     accepted");
    for r in residuals {
        let _ = writeln!(
            out,
            "            {:<3} {:<12.3e} {:<12.3e} {:<12.3e} {}",
            r.level,
            r.residual,
            r.rhs_norm,
            r.relative,
            if r.accepted { "yes" } else { "no" }
        );
    }
    out
}

/// Verdict, residuals and witness coefficients of an [`OrderReport`].
pub fn render_order(report: &OrderReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dimK        {}", report.dim_k);
    let _ = writeln!(out, "verdict     {}", report.summary());
    if let Some(m) = report.margin() {
        let _ = writeln!(out, "margin      {m:.2e}");
    }
    out.push_str(&render_residuals(&report.residuals));
    if let Some(w) = &report.witness {
        let _ = writeln!(out, "witness     (1,{})-flex, Taylor coefficients in pinned coordinates", w.degree());
        for (i, c) in w.coeffs.iter().enumerate() {
            let entries: Vec<String> = c.iter().map(|x| format!("{x:.12e}")).collect();
            let _ = writeln!(out, "  c_{} = [{}]", i + 1, entries.join(", "));
        }
    }
    out
}
