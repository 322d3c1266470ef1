//! Batch driver: TOML run configurations, the bundled cases, CSV tables and
//! plain-text field dumps.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::ehl::{solve_ehl, EhlConfig, Hybrid};
use crate::error::{Error, Result};
use crate::grid::{Field, GridLevel};
use crate::lfa::{smoothing_factor_kappa, smoothing_surface};
use crate::limiter::LimiterSpec;
use crate::linear_cd::{mg_solve, CdProblem, CycleSpec, SplittingKind};
use crate::physics::{resolve_moes, GaugeDefaults};
use crate::report::{SolveReport, SolveStatus};

/// Overrides the configured output directory.
pub const OUT_ENV: &str = "TVD_EHL_OUT";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    LinearCd,
    Ehl,
    Lfa,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub name: String,
    pub experiment: Experiment,
    #[serde(default = "default_out")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    pub linear_cd: Option<LinearSection>,
    pub ehl: Option<EhlSection>,
    pub lfa: Option<LfaSection>,
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinearSection {
    pub a: f64,
    pub eps: f64,
    pub kappa: f64,
    pub splitting: String,
    pub coarsest_n: usize,
    pub levels: usize,
    pub nu1: usize,
    pub nu2: usize,
    pub gamma: usize,
    pub max_cycles: usize,
    pub rel_tol: f64,
    pub omega: Option<f64>,
}

impl Default for LinearSection {
    fn default() -> Self {
        let c = CycleSpec::default();
        Self {
            a: 1.0,
            eps: 1e-6,
            kappa: 1.0 / 3.0,
            splitting: "ls0".into(),
            coarsest_n: 5,
            levels: 7,
            nu1: c.nu1,
            nu2: c.nu2,
            gamma: c.gamma,
            max_cycles: c.max_cycles,
            rel_tol: c.rel_tol,
            omega: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EhlSection {
    pub m: f64,
    pub l: f64,
    pub alpha: f64,
    pub limiter: String,
    pub kappa: f64,
    pub hybrid: String,
    pub coarsest_n: usize,
    pub levels: usize,
    pub cycles: Option<usize>,
    pub omega_gs: Option<f64>,
    pub omega_jac: Option<f64>,
    pub c_h00: Option<f64>,
    pub switch_threshold: Option<f64>,
    pub direct_film: bool,
    pub dump_fields: bool,
}

impl Default for EhlSection {
    fn default() -> Self {
        Self {
            m: 20.0,
            l: 10.0,
            alpha: 1.7e-8,
            limiter: "kappa_fixed".into(),
            kappa: 1.0 / 3.0,
            hybrid: "hs1".into(),
            coarsest_n: 33,
            levels: 4,
            cycles: None,
            omega_gs: None,
            omega_jac: None,
            c_h00: None,
            switch_threshold: None,
            direct_film: false,
            dump_fields: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LfaSection {
    pub a: f64,
    pub eps: f64,
    pub kappa: f64,
    pub h: f64,
    pub samples: usize,
}

impl Default for LfaSection {
    fn default() -> Self {
        Self { a: 1.0, eps: 1e-6, kappa: 1.0 / 3.0, h: 1.0 / 64.0, samples: 64 }
    }
}

impl LinearSection {
    pub fn problem(&self) -> Result<(CdProblem, SplittingKind, CycleSpec)> {
        let kind = SplittingKind::parse(&self.splitting).map_err(|e| keyed("linear_cd.splitting", e))?;
        if self.levels == 0 || self.coarsest_n < 3 {
            return Err(Error::Config("linear_cd: levels must be ≥ 1 and coarsest_n ≥ 3".into()));
        }
        let problem = CdProblem::new(self.a, self.eps, self.kappa, self.coarsest_n, self.levels).map_err(cfg_err)?;
        let spec = CycleSpec {
            nu1: self.nu1,
            nu2: self.nu2,
            gamma: self.gamma,
            max_cycles: self.max_cycles,
            rel_tol: self.rel_tol,
            omega: self.omega,
        };
        Ok((problem, kind, spec))
    }
}

impl EhlSection {
    pub fn config(&self) -> Result<EhlConfig> {
        let physics = resolve_moes(self.m, self.l, self.alpha, GaugeDefaults::default()).map_err(cfg_err)?;
        let mut cfg = EhlConfig::new(physics);
        cfg.spec = LimiterSpec::parse(&self.limiter, self.kappa).map_err(|e| keyed("ehl.limiter", e))?;
        cfg.hybrid = Hybrid::parse(&self.hybrid).map_err(|e| keyed("ehl.hybrid", e))?;
        cfg.coarsest_n = self.coarsest_n;
        cfg.levels = self.levels;
        cfg.direct_film = self.direct_film;
        if let Some(v) = self.cycles {
            cfg.cycles = v;
        }
        if let Some(v) = self.omega_gs {
            cfg.omega_gs = v;
        }
        if let Some(v) = self.omega_jac {
            cfg.omega_jac = v;
        }
        if let Some(v) = self.c_h00 {
            cfg.c_h00 = v;
        }
        if let Some(v) = self.switch_threshold {
            cfg.switch_threshold = v;
        }
        cfg.validate()?;
        cfg.hierarchy().map_err(cfg_err)?;
        Ok(cfg)
    }
}

fn keyed(key: &str, e: Error) -> Error {
    match e {
        Error::Config(m) | Error::InvalidInput(m) => Error::Config(format!("{key}: {m}")),
        other => Error::Config(format!("{key}: {other}")),
    }
}

fn cfg_err(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

/// Parses and validates a configuration; errors name the offending key.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| {
        let at = e.span().map(|sp| {
            let line = text[..sp.start].matches('\n').count();
            format!(" (line {}: `{}`)", line + 1, text.lines().nth(line).unwrap_or("").trim())
        });
        Error::Config(format!("{}{}", e.message(), at.unwrap_or_default()))
    })?;
    let section_missing = match cfg.experiment {
        Experiment::LinearCd => cfg.linear_cd.is_none().then_some("linear_cd"),
        Experiment::Ehl => cfg.ehl.is_none().then_some("ehl"),
        Experiment::Lfa => cfg.lfa.is_none().then_some("lfa"),
    };
    if let Some(s) = section_missing {
        return Err(Error::Config(format!("missing section [{s}]")));
    }
    if let Some(s) = &cfg.linear_cd {
        s.problem()?;
    }
    if let Some(s) = &cfg.ehl {
        s.config()?;
    }
    if let Some(s) = &cfg.lfa {
        if s.samples < 4 || !(s.h > 0.0) || !(s.eps >= 0.0) || !(s.a >= 0.0) {
            return Err(Error::Config("lfa: need samples ≥ 4, h > 0, eps ≥ 0, a ≥ 0".into()));
        }
    }
    Ok(cfg)
}

pub fn config_hash(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Scientific notation with six significant digits, two-digit exponent.
pub fn sci6(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.5e}");
    let (mant, exp) = s.split_once('e').expect("exponent present");
    let e: i32 = exp.parse().expect("integer exponent");
    format!("{mant}e{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
}

fn opt6(x: Option<f64>) -> String {
    x.map_or_else(|| "--".into(), sci6)
}

fn header(hash: &str) -> String {
    format!("# tvd-ehl {VERSION} config-sha256 {hash}\n")
}

/// Columns `N, L1, p1, L2, p2, Linf, pinf` per successive-grid pair.
pub fn norms_csv(report: &SolveReport, hash: &str) -> String {
    let mut s = header(hash);
    s.push_str("N,L1,p1,L2,p2,Linf,pinf\n");
    for p in &report.pairs {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            p.n_fine,
            sci6(p.norms.l1),
            opt6(p.orders[0]),
            sci6(p.norms.l2),
            opt6(p.orders[1]),
            sci6(p.norms.linf),
            opt6(p.orders[2])
        );
    }
    s
}

/// Error against the exact solution per level.
pub fn exact_error_csv(report: &SolveReport, hash: &str) -> String {
    let mut s = header(hash);
    s.push_str("nx,ny,cycles,L1,L2,Linf\n");
    for l in &report.levels {
        if let Some(e) = l.exact_error {
            let _ = writeln!(s, "{},{},{},{},{},{}", l.nx, l.ny, l.cycles, sci6(e.l1), sci6(e.l2), sci6(e.linf));
        }
    }
    s
}

/// Columns: level, `H_m`, `H_m` in Moes scaling, `H_c`, `H_c` in Moes scaling.
pub fn film_csv(report: &SolveReport, moes_m: f64, hash: &str) -> String {
    let scale = (1.5 * moes_m).powf(2.0 / 3.0);
    let mut s = header(hash);
    s.push_str("level,n,H_m,H_m_moes,H_c,H_c_moes\n");
    for (k, l) in report.levels.iter().enumerate() {
        if let Some((hm, hc)) = l.hm_hc {
            let _ = writeln!(s, "{},{},{},{},{},{}", k + 1, l.nx, sci6(hm), sci6(hm * scale), sci6(hc), sci6(hc * scale));
        }
    }
    s
}

pub fn residual_csv(report: &SolveReport, hash: &str) -> String {
    let mut s = header(hash);
    s.push_str("level,n,cycle,residual\n");
    for (k, l) in report.levels.iter().enumerate() {
        for (c, r) in l.residual_history.iter().enumerate() {
            let _ = writeln!(s, "{},{},{},{}", k + 1, l.nx, c, sci6(*r));
        }
    }
    s
}

/// Plain-text grid dump: `# nx ny x0 y0 x1 y1`, then `x y value` rows with
/// `j` outer. Values are written in shortest round-trip form.
pub fn format_field(field: &Field) -> String {
    let l = field.level;
    let [x0, y0, x1, y1] = l.bounds();
    let mut s = format!("# {} {} {x0:e} {y0:e} {x1:e} {y1:e}\n", l.nx, l.ny);
    for j in 0..l.ny {
        for i in 0..l.nx {
            let _ = writeln!(s, "{:e} {:e} {:e}", l.x(i), l.y(j), field.get(i, j));
        }
    }
    s
}

pub fn emit_field(field: &Field, path: &Path) -> Result<()> {
    fs::write(path, format_field(field)).map_err(|e| io_err(path, e))
}

/// Inverse of [`format_field`].
pub fn parse_field(text: &str) -> Result<Field> {
    let bad = |m: &str| Error::InvalidInput(format!("field dump: {m}"));
    let mut lines = text.lines();
    let head = lines.next().ok_or_else(|| bad("empty"))?;
    let parts: Vec<&str> = head.trim_start_matches('#').split_whitespace().collect();
    if parts.len() != 6 {
        return Err(bad("header needs nx ny x0 y0 x1 y1"));
    }
    let nx: usize = parts[0].parse().map_err(|_| bad("nx"))?;
    let ny: usize = parts[1].parse().map_err(|_| bad("ny"))?;
    let mut b = [0.0; 4];
    for (v, p) in b.iter_mut().zip(&parts[2..]) {
        *v = p.parse().map_err(|_| bad("bounds"))?;
    }
    let level = GridLevel::new(b, nx, ny)?;
    let mut f = Field::zeros(level);
    let mut count = 0;
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let v: f64 = line.split_whitespace().nth(2).ok_or_else(|| bad("row needs three columns"))?.parse().map_err(|_| bad("value"))?;
        if count >= nx * ny {
            return Err(bad("too many rows"));
        }
        f.values[count] = v;
        count += 1;
    }
    if count != nx * ny {
        return Err(bad("row count does not match header"));
    }
    Ok(f)
}

pub fn read_field(path: &Path) -> Result<Field> {
    parse_field(&fs::read_to_string(path).map_err(|e| io_err(path, e))?)
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::InvalidInput(format!("{}: {e}", path.display()))
}

/// Files written by one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub status: SolveStatus,
    pub files: Vec<PathBuf>,
}

fn output_dir(cfg: &RunConfig) -> PathBuf {
    std::env::var_os(OUT_ENV).map(PathBuf::from).unwrap_or_else(|| cfg.output_dir.clone())
}

fn write(dir: &Path, name: &str, content: &str, files: &mut Vec<PathBuf>) -> Result<()> {
    let p = dir.join(name);
    fs::write(&p, content).map_err(|e| io_err(&p, e))?;
    files.push(p);
    Ok(())
}

/// Runs a parsed configuration. `text` is the source it was parsed from
/// and only feeds the hash in the table headers.
pub fn run_config(cfg: &RunConfig, text: &str) -> Result<RunOutcome> {
    let hash = config_hash(text);
    let dir = output_dir(cfg);
    fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
    let mut files = Vec::new();
    let name = &cfg.name;
    let status = match cfg.experiment {
        Experiment::LinearCd => {
            let (problem, kind, spec) = cfg.linear_cd.as_ref().expect("validated").problem()?;
            let report = mg_solve(&problem, kind, &spec)?;
            write(&dir, &format!("{name}_norms.csv"), &norms_csv(&report, &hash), &mut files)?;
            write(&dir, &format!("{name}_exact.csv"), &exact_error_csv(&report, &hash), &mut files)?;
            write(&dir, &format!("{name}_residuals.csv"), &residual_csv(&report, &hash), &mut files)?;
            write(&dir, &format!("{name}_timing.txt"), &timing(&report), &mut files)?;
            report.status
        }
        Experiment::Ehl => {
            let sec = cfg.ehl.as_ref().expect("validated");
            let ecfg = sec.config()?;
            let (sol, report) = solve_ehl(&ecfg)?;
            write(&dir, &format!("{name}_film.csv"), &film_csv(&report, sec.m, &hash), &mut files)?;
            write(&dir, &format!("{name}_norms.csv"), &norms_csv(&report, &hash), &mut files)?;
            write(&dir, &format!("{name}_residuals.csv"), &residual_csv(&report, &hash), &mut files)?;
            write(&dir, &format!("{name}_timing.txt"), &timing(&report), &mut files)?;
            if sec.dump_fields {
                write(&dir, &format!("{name}_pressure.txt"), &format_field(&sol.finest.u), &mut files)?;
                write(&dir, &format!("{name}_film.txt"), &format_field(&sol.finest.h), &mut files)?;
            }
            report.status
        }
        Experiment::Lfa => {
            let s = cfg.lfa.as_ref().expect("validated");
            let (a1, b) = (s.eps / (s.h * s.h), s.a / s.h);
            let rep = smoothing_factor_kappa(a1, b, s.kappa, s.samples)?;
            let mut out = header(&hash);
            let _ = writeln!(out, "# mu {} at theta ({}, {})", sci6(rep.mu), sci6(rep.argmax.0), sci6(rep.argmax.1));
            out.push_str(&surface_csv(a1, b, s.kappa, s.samples)?);
            write(&dir, &format!("{name}_surface.csv"), &out, &mut files)?;
            SolveStatus::Converged
        }
    };
    Ok(RunOutcome { status, files })
}

/// `theta1,theta2,abs_s` rows of the smoothing-factor surface.
pub fn surface_csv(alpha1: f64, beta: f64, kappa: f64, samples: usize) -> Result<String> {
    let mut s = String::from("theta1,theta2,abs_s\n");
    for (t1, t2, v) in smoothing_surface(alpha1, beta, kappa, samples)? {
        let _ = writeln!(s, "{},{},{}", sci6(t1), sci6(t2), sci6(v));
    }
    Ok(s)
}

fn timing(report: &SolveReport) -> String {
    let mut s = String::from("level_n wall_seconds\n");
    for l in &report.levels {
        let _ = writeln!(s, "{} {:.3}", l.nx, l.wall_time);
    }
    s
}

/// Bundled case files by name.
pub fn bundled_case(name: &str) -> Option<&'static str> {
    match name {
        "linear_ls0_k13" => Some(LINEAR_LS0_K13),
        "ehl_m20_l10" => Some(EHL_M20_L10),
        _ => None,
    }
}

pub const BUNDLED_CASES: [&str; 2] = ["linear_ls0_k13", "ehl_m20_l10"];

const LINEAR_LS0_K13: &str = r#"name = "linear_ls0_k13"
experiment = "linear_cd"

[linear_cd]
a = 1.0
eps = 1e-6
kappa = 0.3333333333333333
splitting = "ls0"
coarsest_n = 5
levels = 7
"#;

const EHL_M20_L10: &str = r#"name = "ehl_m20_l10"
experiment = "ehl"

[ehl]
m = 20.0
l = 10.0
alpha = 1.7e-8
limiter = "kappa_fixed"
kappa = 0.3333333333333333
hybrid = "hs1"
coarsest_n = 33
levels = 4
"#;
