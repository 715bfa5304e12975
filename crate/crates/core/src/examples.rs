//! Registry of worked examples with their known spectral properties, a checker for
//! the regularly-varying weight asymptotics, and a gallery runner that confronts the
//! criteria with both oracles.

use crate::criteria::{self, Verdict};
use crate::eigen_oracle;
use crate::error::{Error, Result};
use crate::growth::{conv_exponent, GrowthFunction};
use crate::hamiltonian::HamiltonianSpec;
use crate::math;
use crate::operator_lab::{self, DiagonalRule};
use crate::quad;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

/// Expected convergence exponent of the spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExpectedExponent {
    /// Value with the accepted band `[lo, hi]`.
    Value { exponent: f64, lo: f64, hi: f64 },
    /// Infinite: asserted as "estimate above 4 and increasing with depth".
    Infinite,
}

/// How a case's exponent is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentSource {
    /// Counting-function regression on eigenvalues of a truncated problem.
    Oracle,
    /// `−1/slope` of the singular values of `K_H` on the independence grid.
    Operator,
    /// Convergence exponent of the weights `ω_n`.
    Sequential,
}

impl ExponentSource {
    pub fn as_str(self) -> &'static str {
        match self {
            ExponentSource::Oracle => "oracle",
            ExponentSource::Operator => "operator",
            ExponentSource::Sequential => "sequential",
        }
    }
}

/// Expected slope relation between `K_H` and `K_{diag H}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExpectedIndependence {
    /// `|Δslope| < tol`.
    Agree { tol: f64 },
    /// `|Δslope| > gap`, with `slope_full ≈ full` and `slope_diag ≈ diag` within `tol`.
    Differ { gap: f64, full: f64, diag: f64, tol: f64 },
}

/// Expected limsup classification relative to `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedLimsup {
    pub g: GrowthFunction,
    pub bounded: bool,
    pub vanishing: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expected {
    pub discrete: bool,
    pub invertible: bool,
    pub exponent: Option<ExpectedExponent>,
    pub exponent_source: ExponentSource,
    pub independence: Option<ExpectedIndependence>,
    pub limsup: Option<ExpectedLimsup>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleCase {
    pub name: &'static str,
    pub spec: HamiltonianSpec,
    pub expected: Expected,
    /// Short statement of the known result the expectation encodes.
    pub note: &'static str,
}

fn power_log(alpha: f64, a1: f64, a2: f64) -> HamiltonianSpec {
    HamiltonianSpec::power_log(alpha, a1, a2).expect("registry parameters are valid")
}

fn band(exponent: f64, lo: f64, hi: f64) -> Option<ExpectedExponent> {
    Some(ExpectedExponent::Value { exponent, lo, hi })
}

/// The eight worked examples, in fixed order.
pub fn registry() -> Vec<ExampleCase> {
    let plain = |discrete, invertible, exponent, source| Expected {
        discrete,
        invertible,
        exponent,
        exponent_source: source,
        independence: None,
        limsup: None,
    };
    vec![
        ExampleCase {
            name: "power-log a=3",
            spec: power_log(3.0, 0.0, 0.0),
            expected: plain(false, false, None, ExponentSource::Oracle),
            note: "omega_n grows without bound: 0 lies in the essential spectrum",
        },
        ExampleCase {
            name: "power-log a=1.5",
            spec: power_log(1.5, 0.0, 0.0),
            expected: plain(true, true, band(1.0, 0.85, 1.2), ExponentSource::Oracle),
            note: "alpha < 2: discrete with convergence exponent 1",
        },
        ExampleCase {
            name: "power-log a=2 a1=0 a2=0",
            spec: power_log(2.0, 0.0, 0.0),
            expected: plain(false, true, None, ExponentSource::Oracle),
            note: "omega_n bounded away from 0 and infinity: not discrete, boundedly invertible",
        },
        ExampleCase {
            name: "power-log a=2 a1=0 a2=1",
            spec: power_log(2.0, 0.0, 1.0),
            expected: plain(true, true, Some(ExpectedExponent::Infinite), ExponentSource::Sequential),
            note: "omega_n decays logarithmically: discrete with infinite convergence exponent",
        },
        ExampleCase {
            name: "power-log a=2 a1=1 a2=0",
            spec: power_log(2.0, 1.0, 0.0),
            expected: Expected {
                limsup: Some(ExpectedLimsup {
                    g: GrowthFunction::power(2.0).expect("valid"),
                    bounded: true,
                    vanishing: false,
                }),
                ..plain(true, true, band(2.0, 1.75, 2.25), ExponentSource::Oracle)
            },
            note: "convergence exponent 2/a1 = 2; n/|lambda_n|^2 has a finite positive limsup",
        },
        ExampleCase {
            name: "power-log a=2 a1=3 a2=0",
            spec: power_log(2.0, 3.0, 0.0),
            expected: plain(true, true, band(1.0, 0.85, 1.2), ExponentSource::Oracle),
            note: "a1 >= 2: convergence exponent 1",
        },
        ExampleCase {
            name: "rank-one-power-log a1=1",
            spec: HamiltonianSpec::rank_one_power_log(1.0, 0.0).expect("valid"),
            expected: Expected {
                independence: Some(ExpectedIndependence::Agree { tol: 0.15 }),
                ..plain(true, true, band(2.0, 1.75, 2.25), ExponentSource::Operator)
            },
            note: "convergence exponent 2 = that of the diagonal part (exponent >= 1)",
        },
        ExampleCase {
            name: "rank-one-power-log a1=5",
            spec: HamiltonianSpec::rank_one_power_log(5.0, 0.0).expect("valid"),
            expected: Expected {
                independence: Some(ExpectedIndependence::Differ { gap: 0.5, full: -2.0, diag: -1.0, tol: 0.3 }),
                ..plain(true, true, band(0.5, 1.0 / 2.3, 1.0 / 1.7), ExponentSource::Operator)
            },
            note: "convergence exponent 1/2, while the diagonal part has exponent 1",
        },
    ]
}

/// Ratios `ω_n / (2^{−n}φ(1 − 2^{−n}))` for `κ = 1` on `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegvarReport {
    pub rho: f64,
    /// `(n, ratio)` for `n = 1..N`.
    pub ratios: Vec<(usize, f64)>,
    /// Extremes over `n ∈ [4, N]`.
    pub min: f64,
    pub max: f64,
    /// `[(1/4)^ρ, (5/4)^ρ]`.
    pub band: (f64, f64),
    pub within_band: bool,
}

/// Deepest level for which `1 − 2^{−n}` is still well resolved in `f64`.
pub const REGVAR_MAX_DEPTH: usize = 48;

/// Compares `ω_n = 2^{−n/2}(∫_{J_n} φ²)^{1/2}` (with `J_n = [1 − 2^{1−n}, 1 − 2^{−n})`)
/// against `2^{−n}φ(1 − 2^{−n})` for a weight `φ` regularly varying at 1 with index `ρ`.
pub fn regvar_check(phi: &dyn Fn(f64) -> f64, rho: f64, depth: usize) -> Result<RegvarReport> {
    if !(4..=REGVAR_MAX_DEPTH).contains(&depth) {
        return Err(Error::InvalidArgument(format!("depth must lie in [4, {REGVAR_MAX_DEPTH}], got {depth}")));
    }
    if !rho.is_finite() {
        return Err(Error::InvalidArgument(format!("index must be finite, got {rho}")));
    }
    let mut ratios = Vec::with_capacity(depth);
    for n in 1..=depth {
        // t = 1 − e^{−u}, dt = e^{−u}du
        let (u0, u1) = ((n - 1) as f64 * math::LN_2, n as f64 * math::LN_2);
        let mass = quad::integrate(
            |u| {
                let v = phi(-math::expm1(-u));
                v * v * math::exp(-u)
            },
            u0,
            u1,
            1e-10,
        );
        let scale = math::exp2(-(n as f64));
        let omega = math::sqrt(scale) * math::sqrt(mass);
        let reference = scale * phi(1.0 - scale);
        let r = omega / reference;
        if !r.is_finite() || !(r > 0.0) {
            return Err(Error::Numerical(format!("weight ratio at n = {n} is {r}")));
        }
        ratios.push((n, r));
    }
    let tail = ratios[3..].iter().map(|p| p.1);
    let min = tail.clone().fold(f64::INFINITY, f64::min);
    let max = tail.fold(0.0, f64::max);
    let band = (math::pow(0.25, rho), math::pow(1.25, rho));
    let (blo, bhi) = if band.0 <= band.1 { band } else { (band.1, band.0) };
    Ok(RegvarReport { rho, ratios, min, max, band: (blo, bhi), within_band: min >= blo && max <= bhi })
}

/// Settings of a gallery run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GalleryConfig {
    pub depth: usize,
    /// Operator grid size `M`.
    pub grid: usize,
    /// Eigenvalue window `R`.
    pub window: f64,
    /// Truncation `c = 1 − 2^{−k}` for the eigenvalue oracle.
    pub truncation_level: i32,
}

impl Default for GalleryConfig {
    fn default() -> Self {
        GalleryConfig { depth: 40, grid: 1024, window: 200.0, truncation_level: 12 }
    }
}

/// One comparison of a gallery case.
#[derive(Debug, Clone, PartialEq)]
pub struct GalleryCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Measured quantities of a gallery case.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Observed {
    pub discreteness: Option<Verdict>,
    pub bounded_invertibility: Option<Verdict>,
    pub agreement: Option<bool>,
    pub exponent: Option<f64>,
    pub exponent_source: Option<ExponentSource>,
    /// Sequential exponent at half and full depth (infinite-exponent cases).
    pub sequential_exponents: Option<(f64, f64)>,
    pub slope_full: Option<f64>,
    pub slope_diag: Option<f64>,
    pub limsup_bounded: Option<Verdict>,
    pub limsup_vanishing: Option<Verdict>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseOutcome {
    pub case: &'static str,
    pub note: &'static str,
    pub observed: Observed,
    pub checks: Vec<GalleryCheck>,
    /// Failures of individual engines; they fail the case without stopping the run.
    pub errors: Vec<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GalleryReport {
    pub config: GalleryConfig,
    pub cases: Vec<CaseOutcome>,
}

impl GalleryReport {
    pub fn passed(&self) -> usize {
        self.cases.iter().filter(|c| c.pass).count()
    }
}

fn verdict_of(b: bool) -> Verdict {
    if b {
        Verdict::Holds
    } else {
        Verdict::Fails
    }
}

/// Convergence exponent of `(ω_n)`: the regression of `log n` on `log(1/ω*_n)`.
pub fn sequential_exponent(h: &HamiltonianSpec, depth: usize) -> Result<f64> {
    let mut inv: Vec<f64> = crate::dyadic::profile(h, depth)?.omega_star().iter().map(|w| 1.0 / w).collect();
    inv.sort_by(f64::total_cmp);
    Ok(conv_exponent(&inv)?.slope)
}

struct CaseRun<'a> {
    cfg: &'a GalleryConfig,
    observed: Observed,
    checks: Vec<GalleryCheck>,
    errors: Vec<String>,
}

impl CaseRun<'_> {
    fn check(&mut self, name: &str, pass: bool, detail: String) {
        self.checks.push(GalleryCheck { name: name.to_string(), pass, detail });
    }

    fn record<T>(&mut self, what: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.errors.push(format!("{what}: {e}"));
                None
            }
        }
    }

    fn verdicts(&mut self, case: &ExampleCase) {
        let h = &case.spec;
        let depth = self.cfg.depth;
        if let Some(r) = self.record("discreteness", criteria::discreteness(h, depth)) {
            self.observed.discreteness = Some(r.verdict);
            let want = verdict_of(case.expected.discrete);
            self.check("discreteness", r.verdict == want, format!("{} (expected {})", r.verdict.as_str(), want.as_str()));
            self.observed.agreement = r.agreement;
        }
        if let Some(r) = self.record("bounded_invertibility", criteria::bounded_invertibility(h, depth)) {
            self.observed.bounded_invertibility = Some(r.verdict);
            let want = verdict_of(case.expected.invertible);
            self.check(
                "bounded_invertibility",
                r.verdict == want,
                format!("{} (expected {})", r.verdict.as_str(), want.as_str()),
            );
            if r.agreement == Some(false) {
                self.observed.agreement = Some(false);
            }
        }
    }

    fn oracle_exponent(&mut self, h: &HamiltonianSpec) -> Option<f64> {
        let c = 1.0 - math::exp2(-(self.cfg.truncation_level as f64));
        let est = self.record(
            "eigen_oracle",
            eigen_oracle::eigenvalues(h, c, self.cfg.window, core::f64::consts::FRAC_PI_2),
        )?;
        let report = self.record("counting_report", eigen_oracle::counting_report(&est, None))?;
        Some(report.exponent.slope)
    }

    fn operator(&mut self, case: &ExampleCase) -> Option<f64> {
        let h = &case.spec;
        let grid = self.record("independence_grid", operator_lab::independence_grid(h, self.cfg.grid))?;
        let rep = self.record(
            "independence_check",
            operator_lab::independence_check(h, &grid, (4, 32), DiagonalRule::Half),
        )?;
        self.observed.slope_full = Some(rep.slope_full);
        self.observed.slope_diag = Some(rep.slope_diag);
        match case.expected.independence {
            Some(ExpectedIndependence::Agree { tol }) => self.check(
                "independence",
                rep.difference < tol,
                format!("|Δslope| = {:.3} (expected < {tol})", rep.difference),
            ),
            Some(ExpectedIndependence::Differ { gap, full, diag, tol }) => {
                let pass = rep.difference > gap
                    && math::abs(rep.slope_full - full) <= tol
                    && math::abs(rep.slope_diag - diag) <= tol;
                self.check(
                    "independence",
                    pass,
                    format!(
                        "slopes {:.3} vs {:.3}, |Δslope| = {:.3} (expected > {gap}, near {full} and {diag} ± {tol})",
                        rep.slope_full, rep.slope_diag, rep.difference
                    ),
                )
            }
            None => {}
        }
        if rep.slope_full < 0.0 {
            Some(-1.0 / rep.slope_full)
        } else {
            self.errors.push(format!("operator slope {} is not negative", rep.slope_full));
            None
        }
    }

    fn exponent(&mut self, case: &ExampleCase) {
        let h = &case.spec;
        let source = case.expected.exponent_source;
        let measured = match (case.expected.exponent, source) {
            (None, _) => None,
            (Some(_), ExponentSource::Oracle) => self.oracle_exponent(h),
            (Some(_), ExponentSource::Operator) => self.operator(case),
            (Some(_), ExponentSource::Sequential) => {
                let half = self.record("sequential_exponent", sequential_exponent(h, self.cfg.depth / 2));
                let full = self.record("sequential_exponent", sequential_exponent(h, self.cfg.depth));
                match (half, full) {
                    (Some(a), Some(b)) => {
                        self.observed.sequential_exponents = Some((a, b));
                        Some(b)
                    }
                    _ => None,
                }
            }
        };
        if case.expected.independence.is_some() && source != ExponentSource::Operator {
            self.operator(case);
        }
        let Some(e) = measured else {
            if case.expected.exponent.is_some() {
                self.check("exponent", false, "no estimate".into());
            }
            return;
        };
        self.observed.exponent = Some(e);
        self.observed.exponent_source = Some(source);
        match case.expected.exponent {
            Some(ExpectedExponent::Value { exponent, lo, hi }) => self.check(
                "exponent",
                (lo..=hi).contains(&e),
                format!("{e:.3} from {} (expected {exponent} in [{lo:.3}, {hi:.3}])", source.as_str()),
            ),
            Some(ExpectedExponent::Infinite) => {
                let (a, b) = self.observed.sequential_exponents.unwrap_or((f64::NAN, e));
                self.check(
                    "exponent",
                    b > 4.0 && b > a,
                    format!("{a:.3} at depth {} → {b:.3} at depth {} (expected > 4 and increasing)", self.cfg.depth / 2, self.cfg.depth),
                )
            }
            None => {}
        }
    }

    fn limsup(&mut self, case: &ExampleCase) {
        let Some(exp) = &case.expected.limsup else { return };
        let Some(r) = self.record("limsup_distribution", criteria::limsup_distribution(&case.spec, &exp.g, self.cfg.depth))
        else {
            return;
        };
        self.observed.limsup_bounded = Some(r.verdict);
        self.observed.limsup_vanishing = r.vanishing;
        let pass = r.verdict == verdict_of(exp.bounded) && r.vanishing == Some(verdict_of(exp.vanishing));
        self.check(
            "limsup",
            pass,
            format!(
                "bounded: {}, vanishing: {} (expected {}, {})",
                r.verdict.as_str(),
                r.vanishing.map_or("n/a", Verdict::as_str),
                exp.bounded,
                exp.vanishing
            ),
        );
    }
}

/// Runs one registry case.
pub fn run_case(case: &ExampleCase, cfg: &GalleryConfig) -> CaseOutcome {
    let mut run = CaseRun { cfg, observed: Observed::default(), checks: Vec::new(), errors: Vec::new() };
    run.verdicts(case);
    run.exponent(case);
    run.limsup(case);
    let pass = run.errors.is_empty() && run.checks.iter().all(|c| c.pass);
    CaseOutcome { case: case.name, note: case.note, observed: run.observed, checks: run.checks, errors: run.errors, pass }
}

/// Runs criteria and both oracles on every registry case, in registry order.
pub fn run_all(cfg: &GalleryConfig) -> GalleryReport {
    GalleryReport { config: *cfg, cases: registry().iter().map(|c| run_case(c, cfg)).collect() }
}
