//! JSON report types. Field order is fixed, so identical inputs give byte-identical output.

use canonsys_core::criteria::{CriterionReport, Evidence, KacReport};
use canonsys_core::dyadic::DyadicProfile;
use canonsys_core::eigen_oracle::{CountingReport, SpectrumEstimate};
use canonsys_core::examples::{
    CaseOutcome, ExampleCase, ExpectedExponent, ExpectedIndependence, GalleryReport,
};
use canonsys_core::growth::ExponentEstimate;
use canonsys_core::hamiltonian::ValidationReport;
use canonsys_core::operator_lab::IndependenceReport;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CheckJson {
    pub name: String,
    pub passed: bool,
    pub heuristic: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationJson {
    pub spec: String,
    pub valid: bool,
    pub checks: Vec<CheckJson>,
}

impl ValidationJson {
    pub fn new(spec: String, r: &ValidationReport) -> Self {
        ValidationJson {
            spec,
            valid: r.all_passed(),
            checks: r
                .checks
                .iter()
                .map(|c| CheckJson { name: c.name.to_string(), passed: c.passed, heuristic: c.heuristic, detail: c.detail.clone() })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EvidenceJson {
    pub class: String,
    pub verdict: &'static str,
    pub trajectory: Vec<[f64; 2]>,
}

fn pairs(v: &[(f64, f64)]) -> Vec<[f64; 2]> {
    v.iter().map(|&(a, b)| [a, b]).collect()
}

impl From<&Evidence> for EvidenceJson {
    fn from(e: &Evidence) -> Self {
        EvidenceJson { class: e.class.clone(), verdict: e.verdict.as_str(), trajectory: pairs(&e.trajectory) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionJson {
    pub criterion: &'static str,
    pub verdict: &'static str,
    pub method: &'static str,
    /// Trajectory of the leading method: `[t, P(t)]` or `[n, value]`.
    pub trajectory: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vanishing: Option<&'static str>,
    pub depth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub continuous: Option<EvidenceJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sequential: Option<EvidenceJson>,
}

impl From<&CriterionReport> for CriterionJson {
    fn from(r: &CriterionReport) -> Self {
        CriterionJson {
            criterion: r.criterion,
            verdict: r.verdict.as_str(),
            method: r.method.as_str(),
            trajectory: pairs(r.trajectory()),
            agreement: r.agreement,
            vanishing: r.vanishing.map(|v| v.as_str()),
            depth: r.depth,
            continuous: r.continuous.as_ref().map(Into::into),
            sequential: r.sequential.as_ref().map(Into::into),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeJson {
    pub spec: String,
    pub depth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth: Option<String>,
    pub reports: Vec<CriterionJson>,
    /// Inconclusive verdicts and approximate inputs.
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProfileRow {
    pub n: usize,
    pub c_n: f64,
    pub omega_n: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DyadicJson {
    pub spec: String,
    pub depth: usize,
    pub total_h1: f64,
    pub rows: Vec<ProfileRow>,
}

impl DyadicJson {
    pub fn new(spec: String, p: &DyadicProfile) -> Self {
        DyadicJson { spec, depth: p.depth, total_h1: p.total, rows: profile_rows(p) }
    }
}

/// Rows `n = 0..N` (`ω_0` is reported as 0).
pub fn profile_rows(p: &DyadicProfile) -> Vec<ProfileRow> {
    p.points
        .iter()
        .enumerate()
        .map(|(n, c)| ProfileRow { n, c_n: c.t, omega_n: if n == 0 { 0.0 } else { p.omega[n - 1] } })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ExponentJson {
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
    pub points: usize,
}

impl From<&ExponentEstimate> for ExponentJson {
    fn from(e: &ExponentEstimate) -> Self {
        ExponentJson { slope: e.slope, intercept: e.intercept, residual: e.residual, points: e.points }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthJson {
    pub series: &'static str,
    pub partial_sum: f64,
    pub limsup_trend: &'static str,
    pub limsup: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumJson {
    pub spec: String,
    pub c: f64,
    pub c_gap: f64,
    pub beta: f64,
    pub window: f64,
    pub scan_step: f64,
    pub det_sqrt_integral: f64,
    pub eigenvalues: Vec<f64>,
    pub tangencies: Vec<f64>,
    pub counting: Vec<(f64, usize)>,
    pub exponent: Option<ExponentJson>,
    pub plus_ratio_mean: Option<f64>,
    pub minus_ratio_mean: Option<f64>,
    pub density_limit: Option<f64>,
    pub ratio_check_skipped: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthJson>,
    pub warnings: Vec<String>,
}

impl SpectrumJson {
    pub fn new(spec: String, est: &SpectrumEstimate, counting: Option<&CountingReport>) -> Self {
        SpectrumJson {
            spec,
            c: est.c,
            c_gap: est.c_gap,
            beta: est.beta,
            window: est.window,
            scan_step: est.scan_step,
            det_sqrt_integral: est.det_sqrt_integral,
            eigenvalues: est.eigenvalues.clone(),
            tangencies: est.tangencies.clone(),
            counting: est.counting.clone(),
            exponent: counting.map(|c| (&c.exponent).into()),
            plus_ratio_mean: counting.and_then(|c| c.plus_ratio_mean),
            minus_ratio_mean: counting.and_then(|c| c.minus_ratio_mean),
            density_limit: counting.and_then(|c| c.density_limit),
            ratio_check_skipped: counting.map(|c| c.ratio_check_skipped),
            growth: counting.and_then(|c| c.growth.as_ref()).map(|g| GrowthJson {
                series: g.series.verdict.as_str(),
                partial_sum: g.series.partial_sums.last().copied().unwrap_or(0.0),
                limsup_trend: g.limsup_trend.trend.as_str(),
                limsup: g.limsup.clone(),
            }),
            warnings: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OperatorJson {
    pub spec: String,
    pub grid: usize,
    pub levels: usize,
    pub rule: &'static str,
    pub dimension: usize,
    pub sigma: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndependenceJson {
    pub spec: String,
    pub grid: usize,
    pub fit_range: (usize, usize),
    pub rule: &'static str,
    pub slope_full: f64,
    pub slope_diag: f64,
    pub difference: f64,
    pub sigma_full: Vec<f64>,
    pub sigma_diag: Vec<f64>,
}

impl IndependenceJson {
    pub fn new(spec: String, r: &IndependenceReport) -> Self {
        IndependenceJson {
            spec,
            grid: r.cells,
            fit_range: r.fit_range,
            rule: r.rule.as_str(),
            slope_full: r.slope_full,
            slope_diag: r.slope_diag,
            difference: r.difference,
            sigma_full: r.sigma_full.clone(),
            sigma_diag: r.sigma_diag.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KacJson {
    pub membership: &'static str,
    pub bound: f64,
    pub tail_max: f64,
    pub swapped_tail_max: f64,
    pub trajectory: Vec<[f64; 2]>,
    pub swapped: Vec<[f64; 2]>,
}

impl From<&KacReport> for KacJson {
    fn from(r: &KacReport) -> Self {
        KacJson {
            membership: r.membership.as_str(),
            bound: r.bound,
            tail_max: r.tail_max,
            swapped_tail_max: r.swapped_tail_max,
            trajectory: pairs(&r.trajectory),
            swapped: pairs(&r.swapped),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExpectedJson {
    pub discrete: bool,
    pub invertible: bool,
    /// A number, `"infinite"`, or absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent_band: Option<[f64; 2]>,
    pub exponent_source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub independence: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limsup: Option<String>,
}

impl From<&ExampleCase> for ExpectedJson {
    fn from(c: &ExampleCase) -> Self {
        let e = &c.expected;
        let (exponent, exponent_band) = match e.exponent {
            Some(ExpectedExponent::Value { exponent, lo, hi }) => (Some(serde_json::json!(exponent)), Some([lo, hi])),
            Some(ExpectedExponent::Infinite) => (Some(serde_json::json!("infinite")), None),
            None => (None, None),
        };
        ExpectedJson {
            discrete: e.discrete,
            invertible: e.invertible,
            exponent,
            exponent_band,
            exponent_source: e.exponent_source.as_str(),
            independence: e.independence.map(|i| match i {
                ExpectedIndependence::Agree { tol } => format!("|slope difference| < {tol}"),
                ExpectedIndependence::Differ { gap, full, diag, tol } => {
                    format!("|slope difference| > {gap}, slopes near {full} and {diag} (±{tol})")
                }
            }),
            limsup: e.limsup.as_ref().map(|l| {
                format!("rho = {}: bounded {}, vanishing {}", l.g.order(), l.bounded, l.vanishing)
            }),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GalleryCheckJson {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ObservedJson {
    pub discreteness: Option<&'static str>,
    pub bounded_invertibility: Option<&'static str>,
    pub agreement: Option<bool>,
    pub exponent: Option<f64>,
    pub exponent_source: Option<&'static str>,
    pub slope_full: Option<f64>,
    pub slope_diag: Option<f64>,
    pub limsup_bounded: Option<&'static str>,
    pub limsup_vanishing: Option<&'static str>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GalleryEntryJson {
    pub case: &'static str,
    pub note: &'static str,
    pub expected: ExpectedJson,
    pub observed: ObservedJson,
    pub checks: Vec<GalleryCheckJson>,
    pub errors: Vec<String>,
    pub pass: bool,
}

impl GalleryEntryJson {
    pub fn new(case: &ExampleCase, out: &CaseOutcome) -> Self {
        let o = &out.observed;
        GalleryEntryJson {
            case: out.case,
            note: out.note,
            expected: case.into(),
            observed: ObservedJson {
                discreteness: o.discreteness.map(|v| v.as_str()),
                bounded_invertibility: o.bounded_invertibility.map(|v| v.as_str()),
                agreement: o.agreement,
                exponent: o.exponent,
                exponent_source: o.exponent_source.map(|s| s.as_str()),
                slope_full: o.slope_full,
                slope_diag: o.slope_diag,
                limsup_bounded: o.limsup_bounded.map(|v| v.as_str()),
                limsup_vanishing: o.limsup_vanishing.map(|v| v.as_str()),
            },
            checks: out
                .checks
                .iter()
                .map(|c| GalleryCheckJson { name: c.name.clone(), pass: c.pass, detail: c.detail.clone() })
                .collect(),
            errors: out.errors.clone(),
            pass: out.pass,
        }
    }
}

/// The gallery as a JSON array in registry order.
pub fn gallery_json(cases: &[ExampleCase], report: &GalleryReport) -> Vec<GalleryEntryJson> {
    cases.iter().zip(&report.cases).map(|(c, o)| GalleryEntryJson::new(c, o)).collect()
}
