//! The `canonsys` command-line interface.

use crate::error::{exit, CliError, Result};
use crate::report::{
    gallery_json, AnalyzeJson, CriterionJson, DyadicJson, IndependenceJson, KacJson, OperatorJson, SpectrumJson,
    ValidationJson,
};
use crate::{export, growth_spec, spec_file};
use canonsys_core::criteria::{self, Verdict};
use canonsys_core::dyadic;
use canonsys_core::eigen_oracle::{self, OracleResolution};
use canonsys_core::examples::{self, GalleryConfig};
use canonsys_core::hamiltonian::Point;
use canonsys_core::operator_lab::{self, DiagonalRule, Grid};
use canonsys_core::HamiltonianSpec;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Spectral analysis of canonical systems `y′ = zJHy`.
#[derive(Debug, Parser)]
#[command(name = "canonsys", version)]
pub struct Cli {
    #[command(flatten)]
    pub opts: Options,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Dyadic depth N.
    #[arg(long, global = true, default_value_t = 40)]
    pub depth: usize,
    /// Operator grid size M.
    #[arg(long, global = true, default_value_t = 1024)]
    pub grid: usize,
    /// Eigenvalue window R: eigenvalues are sought in [−R, R].
    #[arg(long, global = true, default_value_t = 200.0)]
    pub window: f64,
    /// Comparison function: a JSON file or inline `rho=2,betas=[1],r0=3`.
    #[arg(long, global = true)]
    pub growth: Option<String>,
    /// Write result files into this directory instead of printing.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rule {
    Exclude,
    Half,
}

impl From<Rule> for DiagonalRule {
    fn from(r: Rule) -> Self {
        match r {
            Rule::Exclude => DiagonalRule::Exclude,
            Rule::Half => DiagonalRule::Half,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check positivity, integrability, limit point and normalization.
    Validate { spec: PathBuf },
    /// Run the criteria; with --growth also summability and limsup distribution.
    Analyze {
        spec: PathBuf,
        /// Also classify the Kac functional at this λ.
        #[arg(long)]
        lambda: Option<f64>,
        /// Bound K for the Kac classes.
        #[arg(long, default_value_t = 1.0)]
        kac_k: f64,
    },
    /// Dyadic points c_n and weights ω_n.
    Dyadic { spec: PathBuf },
    /// Eigenvalues of the problem truncated at c.
    Spectrum {
        spec: PathBuf,
        /// Truncation point; defaults to b for regular endpoints and to c_12 otherwise.
        #[arg(long)]
        c: Option<f64>,
        /// Boundary angle at c.
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        beta: f64,
    },
    /// Singular values of the discretized operator K_H.
    Operator {
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = Rule::Exclude)]
        rule: Rule,
        /// Write the K_H matrix as a binary dump.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Compare singular-value decay of K_H and K_{diag H}.
    CompareIndependence {
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = Rule::Half)]
        rule: Rule,
        #[arg(long, default_value_t = 4)]
        fit_lo: usize,
        #[arg(long, default_value_t = 32)]
        fit_hi: usize,
    },
    /// Run the built-in example gallery.
    Gallery {
        /// Truncation level k of the eigenvalue oracle (c = 1 − 2^{−k}).
        #[arg(long, default_value_t = 12)]
        truncation_level: i32,
    },
}

/// Rendered results of one command.
struct Output {
    stem: &'static str,
    json: String,
    /// `(file name, CSV bytes)`; the first one is printed without `--out`.
    tables: Vec<(String, Vec<u8>)>,
    warnings: Vec<String>,
    code: u8,
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

fn operator_grid(h: &HamiltonianSpec, m: usize) -> Result<Grid> {
    Ok(Grid::log_levels(h, (m / 4).clamp(1, 256), m, 2)?)
}

fn default_truncation(h: &HamiltonianSpec) -> Result<Point> {
    let iv = h.interval();
    if iv.is_bounded() && !h.is_limit_point() {
        return Ok(iv.end());
    }
    let pts = dyadic::dyadic_points(h, 12).map_err(|e| {
        CliError::Parse(format!("no default truncation point ({e}); pass --c"))
    })?;
    Ok(*pts.last().expect("dyadic points are nonempty"))
}

fn validate(spec: &Path) -> Result<Output> {
    let h = spec_file::load(spec)?;
    let r = ValidationJson::new(h.describe(), &h.validate());
    let rows: Vec<_> = r.checks.iter().map(|c| (&c.name, c.passed, c.heuristic, &c.detail)).collect();
    let table = csv_bytes(|b| export::write_rows(b, &["name", "passed", "heuristic", "detail"], &rows))?;
    Ok(Output {
        stem: "validation",
        code: if r.valid { exit::OK } else { exit::CRITERION_FAILS },
        json: json(&r),
        tables: vec![("validation.csv".into(), table)],
        warnings: vec![],
    })
}

fn analyze(opts: &Options, spec: &Path, lambda: Option<f64>, kac_k: f64) -> Result<Output> {
    let h = spec_file::load(spec)?;
    let g = opts.growth.as_deref().map(growth_spec::resolve).transpose()?;
    if let Some(g) = &g {
        g.require_order_above_one()?;
    }
    let mut reports = vec![criteria::discreteness(&h, opts.depth)?, criteria::bounded_invertibility(&h, opts.depth)?];
    if let Some(g) = &g {
        reports.push(criteria::summability(&h, g, opts.depth)?);
        reports.push(criteria::limsup_distribution(&h, g, opts.depth)?);
    }
    let mut warnings = Vec::new();
    if g.as_ref().is_some_and(|g| g.is_approximate()) {
        warnings.push("growth function is tabulated; order and inverse are approximate".to_string());
    }
    for r in &reports {
        if r.verdict == Verdict::Inconclusive {
            warnings.push(match r.agreement {
                Some(false) => format!("{}: continuous and sequential methods disagree", r.criterion),
                _ => format!("{}: inconclusive at depth {}", r.criterion, r.depth),
            });
        }
    }
    let kac = lambda.map(|l| criteria::kac_membership(&h, l, kac_k, opts.depth)).transpose()?;
    let failed = reports.iter().any(|r| r.verdict == Verdict::Fails);
    let rows: Vec<_> = reports
        .iter()
        .flat_map(|r| {
            let mut v = Vec::new();
            for (name, e) in [("continuous", &r.continuous), ("sequential", &r.sequential)] {
                if let Some(e) = e {
                    v.extend(e.trajectory.iter().map(move |&(x, y)| (r.criterion, name, x, y)));
                }
            }
            v
        })
        .collect();
    let table = csv_bytes(|b| export::write_rows(b, &["criterion", "method", "x", "value"], &rows))?;
    #[derive(Serialize)]
    struct Full {
        #[serde(flatten)]
        analysis: AnalyzeJson,
        #[serde(skip_serializing_if = "Option::is_none")]
        kac: Option<KacJson>,
    }
    let full = Full {
        analysis: AnalyzeJson {
            spec: h.describe(),
            depth: opts.depth,
            growth: opts.growth.clone(),
            reports: reports.iter().map(CriterionJson::from).collect(),
            warnings: warnings.clone(),
        },
        kac: kac.as_ref().map(KacJson::from),
    };
    Ok(Output {
        stem: "analysis",
        json: json(&full),
        tables: vec![("trajectories.csv".into(), table)],
        warnings,
        code: if failed { exit::CRITERION_FAILS } else { exit::OK },
    })
}

fn dyadic_cmd(opts: &Options, spec: &Path) -> Result<Output> {
    let h = spec_file::load(spec)?;
    let p = dyadic::profile(&h, opts.depth)?;
    let r = DyadicJson::new(h.describe(), &p);
    let table = csv_bytes(|b| export::write_profile(b, &r.rows))?;
    Ok(Output { stem: "profile", json: json(&r), tables: vec![("profile.csv".into(), table)], warnings: vec![], code: exit::OK })
}

fn spectrum(opts: &Options, spec: &Path, c: Option<f64>, beta: f64) -> Result<Output> {
    let h = spec_file::load(spec)?;
    let g = opts.growth.as_deref().map(growth_spec::resolve).transpose()?;
    let point = match c {
        Some(c) => {
            if !h.interval().contains(c) && c != h.interval().b_value() {
                return Err(canonsys_core::Error::OutOfDomain(c).into());
            }
            h.point(c)
        }
        None => default_truncation(&h)?,
    };
    let est = eigen_oracle::eigenvalues_at(&h, point, opts.window, beta, OracleResolution::default())?;
    let mut warnings = Vec::new();
    let counting = match eigen_oracle::counting_report(&est, g.as_ref()) {
        Ok(c) => Some(c),
        Err(e) => {
            warnings.push(format!("counting-function analysis skipped: {e}"));
            None
        }
    };
    let mut r = SpectrumJson::new(h.describe(), &est, counting.as_ref());
    r.warnings = warnings.clone();
    let spectrum = csv_bytes(|b| export::write_spectrum(b, &est.eigenvalues))?;
    let counting = csv_bytes(|b| export::write_counting(b, &est.counting))?;
    Ok(Output {
        stem: "spectrum",
        json: json(&r),
        tables: vec![("spectrum.csv".into(), spectrum), ("counting.csv".into(), counting)],
        warnings,
        code: exit::OK,
    })
}

fn operator(opts: &Options, spec: &Path, rule: DiagonalRule, dump: Option<&Path>) -> Result<Output> {
    let h = spec_file::load(spec)?;
    let grid = operator_grid(&h, opts.grid)?;
    let sigma = operator_lab::kh_singular_values(&h, &grid, rule)?.into_vec();
    if let Some(path) = dump {
        export::dump_to_file(path, &operator_lab::discretize_kh(&h, &grid, rule)?)?;
    }
    let r = OperatorJson {
        spec: h.describe(),
        grid: grid.len(),
        levels: (opts.grid / 4).clamp(1, 256),
        rule: rule.as_str(),
        dimension: 2 * grid.len(),
        sigma,
    };
    let table = csv_bytes(|b| export::write_singular_values(b, &r.sigma))?;
    Ok(Output { stem: "operator", json: json(&r), tables: vec![("singular_values.csv".into(), table)], warnings: vec![], code: exit::OK })
}

fn compare(opts: &Options, spec: &Path, rule: DiagonalRule, fit: (usize, usize)) -> Result<Output> {
    let h = spec_file::load(spec)?;
    let grid = operator_grid(&h, opts.grid)?;
    let rep = operator_lab::independence_check(&h, &grid, fit, rule)?;
    let r = IndependenceJson::new(h.describe(), &rep);
    let table = csv_bytes(|b| export::write_singular_pairs(b, &r.sigma_full, &r.sigma_diag))?;
    Ok(Output { stem: "independence", json: json(&r), tables: vec![("independence.csv".into(), table)], warnings: vec![], code: exit::OK })
}

fn gallery(opts: &Options, truncation_level: i32) -> Result<Output> {
    let cfg = GalleryConfig { depth: opts.depth, grid: opts.grid, window: opts.window, truncation_level };
    let cases = examples::registry();
    let report = examples::run_all(&cfg);
    let entries = gallery_json(&cases, &report);
    let rows: Vec<_> = entries
        .iter()
        .flat_map(|e| e.checks.iter().map(move |c| (e.case, &c.name, c.pass, &c.detail)))
        .collect();
    let table = csv_bytes(|b| export::write_rows(b, &["case", "check", "pass", "detail"], &rows))?;
    let warnings = entries.iter().flat_map(|e| e.errors.iter().map(move |m| format!("{}: {m}", e.case))).collect();
    Ok(Output {
        stem: "gallery",
        json: json(&entries),
        tables: vec![("gallery.csv".into(), table)],
        warnings,
        code: if report.passed() == report.cases.len() { exit::OK } else { exit::CRITERION_FAILS },
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

/// Runs a parsed command; returns the process exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<u8> {
    let opts = &cli.opts;
    let out = match &cli.command {
        Command::Validate { spec } => validate(spec)?,
        Command::Analyze { spec, lambda, kac_k } => analyze(opts, spec, *lambda, *kac_k)?,
        Command::Dyadic { spec } => dyadic_cmd(opts, spec)?,
        Command::Spectrum { spec, c, beta } => spectrum(opts, spec, *c, *beta)?,
        Command::Operator { spec, rule, dump } => operator(opts, spec, (*rule).into(), dump.as_deref())?,
        Command::CompareIndependence { spec, rule, fit_lo, fit_hi } => {
            compare(opts, spec, (*rule).into(), (*fit_lo, *fit_hi))?
        }
        Command::Gallery { truncation_level } => gallery(opts, *truncation_level)?,
    };
    let io = |source| CliError::Write { path: PathBuf::from("<stdout>"), source };
    for w in &out.warnings {
        writeln!(stderr, "warning: {w}").map_err(io)?;
    }
    match &opts.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|source| CliError::Write { path: dir.clone(), source })?;
            let mut written = Vec::new();
            match opts.format {
                Format::Json => {
                    let path = dir.join(format!("{}.json", out.stem));
                    write_file(&path, out.json.as_bytes())?;
                    written.push(path);
                }
                Format::Csv => {
                    for (name, bytes) in &out.tables {
                        let path = dir.join(name);
                        write_file(&path, bytes)?;
                        written.push(path);
                    }
                }
            }
            for p in written {
                writeln!(stdout, "{}", p.display()).map_err(io)?;
            }
        }
        None => match opts.format {
            Format::Json => stdout.write_all(out.json.as_bytes()).map_err(io)?,
            Format::Csv => stdout.write_all(&out.tables[0].1).map_err(io)?,
        },
    }
    Ok(out.code)
}
