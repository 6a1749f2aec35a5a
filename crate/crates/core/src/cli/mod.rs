//! Command-line dispatch. Every subcommand produces a [`Report`] with a
//! schema version, an echo of the configuration that determines it, and a
//! list of pass/fail checks.
//!
//! Exit codes: 0 all checks pass, 1 some check failed, 2 malformed input or
//! missing file, 3 internal invariant violation.

pub mod random;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::Error;
use crate::exactalg::{parse_rational, Scalar, Vector};
use crate::hilbtan::compare_tangents;
use crate::koszul::{ext_dims, hat_elements, koszul, massey_vanishing_report, verify_product_table, ExtAlgebra};
use crate::luna::{luna_report, sigma_matrix, SlicePoint};
use crate::potential::{eval_potential, gradient, hessian, verify_framing_independence, FramedRep};
use crate::quiver::{destabilizing_subvector_scan, ext_quiver, framed_3loop, PolystableData};
use crate::stability::quot_point_check;
use crate::superpotential::{extract_superpotential, sanity_j_plus_l, verify_trace_identity};
use random::{random_rep, rng};

pub const SCHEMA_VERSION: u32 = 1;

/// Bound on entries of randomly drawn test directions and framings.
const DIRECTION_BOUND: i64 = 3;

#[derive(Debug, Clone, Parser, Serialize, Deserialize)]
#[command(name = "critlocus", version, about = "Exact checks on critical loci of Tr A[B,C]")]
pub struct RunConfig {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of random trials for randomized checks.
    #[arg(long, global = true, default_value_t = 10)]
    pub trials: usize,
    /// Write the JSON report to this file.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Print the JSON report instead of a summary.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Potential, gradient and Hessian of a framed representation.
    #[command(subcommand)]
    Potential(PotentialCmd),
    /// Stability and criticality.
    #[command(subcommand)]
    Stability(StabilityCmd),
    /// Luna slice decomposition at a polystable point.
    #[command(subcommand)]
    Luna(LunaCmd),
    /// Hat-element product table of the Koszul dg-algebra.
    #[command(subcommand)]
    Koszul(KoszulCmd),
    /// Matrix dg-algebras and Chevalley–Eilenberg ideals.
    #[command(subcommand)]
    Dgalg(DgalgCmd),
    /// Hilbert-scheme tangent comparison over monomial ideals.
    #[command(subcommand)]
    Hilb(HilbCmd),
    /// Ext-quiver superpotential.
    #[command(subcommand)]
    Superpot(SuperpotCmd),
    /// Quiver constructions and the destabilizing-subvector scan.
    #[command(subcommand)]
    Quiver(QuiverCmd),
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct RepArg {
    #[arg(long)]
    pub rep: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct DataArg {
    #[arg(long)]
    pub data: PathBuf,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialCmd {
    Eval(RepArg),
    Grad(RepArg),
    Hess(RepArg),
    /// Emit a seeded random framed representation.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, default_value_t = 5)]
        bound: i64,
    },
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityCmd {
    Check(RepArg),
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LunaCmd {
    Decompose(DataArg),
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KoszulCmd {
    Table {
        /// Point as "a,b,c" with rational coordinates.
        #[arg(long, default_value = "0,0,0")]
        point: String,
    },
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DgalgCmd {
    Verify {
        #[arg(long)]
        n: usize,
    },
    Ce {
        /// Block sizes as "a1,a2,…".
        #[arg(long)]
        mults: String,
    },
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HilbCmd {
    Compare {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuperpotCmd {
    Extract {
        #[arg(long)]
        data: PathBuf,
        /// Also check the trace identity on random matrices.
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuiverCmd {
    Framed {
        #[arg(long)]
        r: usize,
    },
    Ext(DataArg),
    Scan {
        #[arg(long)]
        mults: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool) -> Self {
        Check { name: name.into(), pass, detail: None }
    }

    fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub config: Value,
    pub checks: Vec<Check>,
    pub all_pass: bool,
    pub result: Value,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.all_pass {
            0
        } else {
            1
        }
    }

    pub fn summary(&self) -> String {
        let mut s = format!("{}\n", self.command);
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            match &c.detail {
                Some(d) => s.push_str(&format!("  {tag} {} — {d}\n", c.name)),
                None => s.push_str(&format!("  {tag} {}\n", c.name)),
            }
        }
        s.push_str(&format!("all_pass: {}\n", self.all_pass));
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Malformed input or unreadable file.
    Input(String),
    /// An internal invariant failed.
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "invalid input: {m}"),
            CliError::Invariant(m) => write!(f, "invariant violated: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::InvalidInput(_) | Error::DimensionMismatch(_) | Error::CoincidentPoints(..) => {
                CliError::Input(e.to_string())
            }
            _ => CliError::Invariant(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn parse_list(s: &str) -> CliResult<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| CliError::Input(format!("{t:?} in {s:?}: {e}"))))
        .collect()
}

pub fn parse_point(s: &str) -> CliResult<[Scalar; 3]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::Input(format!("point {s:?} needs three coordinates")));
    }
    let c = |t: &str| parse_rational(t).map(Scalar::real).map_err(CliError::from);
    Ok([c(parts[0])?, c(parts[1])?, c(parts[2])?])
}

fn random_direction<R: rand::Rng>(r: &mut R, dim: usize) -> Vector {
    (0..dim).map(|_| random::random_scalar(r, DIRECTION_BOUND, true)).collect()
}

/// `f(ρ + tδ)` at `t = −1, 0, 1, 2`; `f` is cubic in `t`.
fn line_values(rep: &FramedRep, dir: &[Scalar]) -> CliResult<[Scalar; 4]> {
    let at = |t: i64| -> CliResult<Scalar> { Ok(eval_potential(&rep.shifted(dir, &Scalar::from_int(t))?)) };
    Ok([at(-1)?, at(0)?, at(1)?, at(2)?])
}

/// First and second derivatives at `t = 0` of the interpolating cubic.
fn derivatives_at_zero(p: &[Scalar; 4]) -> (Scalar, Scalar) {
    let [m1, z, p1, p2] = p;
    let first = &(&(&(p1 * &Scalar::from_int(6)) - &(m1 * &Scalar::from_int(2))) - &(z * &Scalar::from_int(3))) - p2;
    let second = &(p1 + m1) - &(z * &Scalar::from_int(2));
    (&first * &Scalar::frac(1, 6), second)
}

pub fn run(cfg: &RunConfig) -> CliResult<Report> {
    let (command, checks, result) = match &cfg.command {
        Command::Potential(c) => run_potential(cfg, c)?,
        Command::Stability(StabilityCmd::Check(a)) => {
            let rep: FramedRep = read_json(&a.rep)?;
            let q = quot_point_check(&rep);
            let checks = vec![
                Check::new("is_critical", q.is_critical).detail(format!("|grad|² = {}", q.gradient_norm_sq)),
                Check::new("is_stable", q.is_stable).detail(format!("Krylov dimension {} of {}", q.krylov_dim, q.n)),
            ];
            ("stability check", checks, to_value(&q))
        }
        Command::Luna(LunaCmd::Decompose(a)) => {
            let data: PolystableData = read_json(&a.data)?;
            data.validate()?;
            let r = luna_report(&data)?;
            let p = SlicePoint::new(data.clone())?;
            let s = sigma_matrix(&p);
            let h = hessian(p.y());
            let mut in_radical = true;
            for c in 0..s.cols() {
                in_radical &= h.in_radical(&s.column(c))?;
            }
            let sq: usize = data.mults.iter().map(|a| a * a).sum();
            let checks = vec![
                Check::new("direct_sum", r.dim_ya + r.dim_im_sigma + r.dim_yslice == 3 * r.n * r.n),
                Check::new("sigma_kernel_dim", r.sigma_kernel_dim == sq)
                    .detail(format!("{} vs Σa² = {sq}", r.sigma_kernel_dim)),
                Check::new("sigma_in_hessian_radical", in_radical),
                Check::new("slice_hessian_nondegenerate", r.slice_hessian_nondegenerate),
            ];
            ("luna decompose", checks, to_value(&r))
        }
        Command::Koszul(KoszulCmd::Table { point }) => {
            let p = parse_point(point)?;
            let k = koszul(&p);
            let table = verify_product_table(&k)?;
            let massey = massey_vanishing_report(&k)?;
            let h = hat_elements(&k);
            let mut checks: Vec<Check> = table.relations.iter().map(|r| Check::new(&r.name, r.holds)).collect();
            let mut cocycles = true;
            for g in [&h.one, &h.x, &h.y, &h.z] {
                cocycles &= crate::koszul::dg_differential(g, &k)?.is_zero();
            }
            checks.push(Check::new("hats_are_cocycles", cocycles && massey.all_cocycles));
            let dims = ext_dims(&k)?;
            checks.push(Check::new("ext_dims", dims == [1, 3, 3, 1]).detail(format!("{dims:?}")));
            checks.push(Check::new("closed_under_product", massey.closed_under_product));
            checks.push(Check::new("identity_on_homology", massey.identity_on_homology));
            let alg = ExtAlgebra::new(&k)?;
            let result = json!({
                "point": p,
                "relations": table.relations,
                "massey": massey,
                "trace_top": alg.trace_top(),
            });
            ("koszul table", checks, result)
        }
        Command::Dgalg(DgalgCmd::Verify { n }) => {
            if *n == 0 || *n > 4 {
                return Err(CliError::Input(format!("n = {n} outside 1..=4")));
            }
            let d = crate::dgalg::verify_delta_squared(*n)?;
            let h = crate::dgalg::h0_ideal_match(*n)?;
            let checks = vec![Check::new("delta_squared_zero", d.holds()), Check::new("h0_ideal_match", h.ideals_equal)];
            ("dgalg verify", checks, json!({ "delta_squared": d, "h0": h }))
        }
        Command::Dgalg(DgalgCmd::Ce { mults }) => {
            let a = parse_list(mults)?;
            if a.iter().sum::<usize>() > 4 {
                return Err(CliError::Input("Σ a_i must be at most 4".into()));
            }
            let r = crate::dgalg::ce_ideal_match(&a)?;
            let checks = vec![Check::new("ce_ideal_match", r.ideals_equal)];
            ("dgalg ce", checks, to_value(&r))
        }
        Command::Hilb(HilbCmd::Compare { n }) => {
            if *n == 0 || *n > 6 {
                return Err(CliError::Input(format!("n = {n} outside 1..=6")));
            }
            let r = compare_tangents(*n)?;
            let checks = vec![Check::new("hom_dim_equals_hessian_dim", r.all_equal)
                .detail(format!("{} ideals", r.ideal_count))];
            ("hilb compare", checks, to_value(&r))
        }
        Command::Superpot(SuperpotCmd::Extract { data, verify }) => {
            let data: PolystableData = read_json(data)?;
            data.validate()?;
            let w = extract_superpotential(&data)?;
            let mut checks = vec![
                Check::new("six_cubic_terms_per_vertex", w.terms.len() == 6 * data.k() && w.terms.keys().all(|t| t.len() == 3)),
                Check::new("j_plus_l_zero", sanity_j_plus_l(&data)?),
            ];
            let mut result = json!({ "terms": w });
            if *verify {
                let t = verify_trace_identity(&data, cfg.trials.max(1), cfg.seed)?;
                checks.push(Check::new("trace_identity", t.identity_ok).detail(format!("{} trials", t.trials)));
                result["trace_identity"] = to_value(&t);
            }
            ("superpot extract", checks, result)
        }
        Command::Quiver(c) => run_quiver(c)?,
    };
    let all_pass = checks.iter().all(|c| c.pass);
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        command: command.to_string(),
        config: to_value(cfg),
        checks,
        all_pass,
        result,
    })
}

fn run_potential(cfg: &RunConfig, c: &PotentialCmd) -> CliResult<(&'static str, Vec<Check>, Value)> {
    Ok(match c {
        PotentialCmd::Random { n, r, bound } => {
            let rep = random_rep(*n, *r, cfg.seed, *bound)?;
            ("potential random", vec![], to_value(&rep))
        }
        PotentialCmd::Eval(a) => {
            let rep: FramedRep = read_json(&a.rep)?;
            let value = eval_potential(&rep);
            let indep = verify_framing_independence(&rep, cfg.trials, cfg.seed)?;
            ("potential eval", vec![Check::new("framing_independent", indep)], json!({ "value": value }))
        }
        PotentialCmd::Grad(a) => {
            let rep: FramedRep = read_json(&a.rep)?;
            let g = gradient(&rep);
            let mut r = rng(cfg.seed);
            let mut ok = true;
            for _ in 0..cfg.trials {
                let dir = random_direction(&mut r, rep.dim());
                let d = FramedRep::from_coords(rep.n(), rep.r(), &dir)?;
                let (first, _) = derivatives_at_zero(&line_values(&rep, &dir)?);
                ok &= g.pair(d.a(), d.b(), d.c())? == first;
            }
            let checks = vec![Check::new("gradient_matches_line_derivative", ok).detail(format!("{} directions", cfg.trials))];
            ("potential grad", checks, json!({ "gradient": g, "is_critical": g.is_zero() }))
        }
        PotentialCmd::Hess(a) => {
            let rep: FramedRep = read_json(&a.rep)?;
            let h = hessian(&rep);
            let mut r = rng(cfg.seed);
            let mut ok = true;
            for _ in 0..cfg.trials {
                let dir = random_direction(&mut r, rep.dim());
                let (_, second) = derivatives_at_zero(&line_values(&rep, &dir)?);
                ok &= h.eval(&dir)? == second;
            }
            let mut v_radical = true;
            for i in 0..rep.n() {
                for k in 0..rep.r() {
                    let mut e = vec![Scalar::zero(); rep.dim()];
                    e[rep.framing_index(i, k)] = Scalar::one();
                    v_radical &= h.in_radical(&e)?;
                }
            }
            let mut checks = vec![
                Check::new("hessian_matches_second_difference", ok).detail(format!("{} directions", cfg.trials)),
                Check::new("framing_block_in_radical", v_radical),
            ];
            if gradient(&rep).is_zero() {
                let mut gauge = true;
                for g in rep.gauge_directions() {
                    gauge &= h.in_radical(&g)?;
                }
                checks.push(Check::new("gauge_directions_in_radical", gauge));
            }
            let result = json!({
                "dim": h.dim(),
                "rank": h.rank(),
                "radical_dim": h.dim() - h.rank(),
                "gram": h.gram(),
            });
            ("potential hess", checks, result)
        }
    })
}

fn run_quiver(c: &QuiverCmd) -> CliResult<(&'static str, Vec<Check>, Value)> {
    Ok(match c {
        QuiverCmd::Framed { r } => {
            let q = framed_3loop(*r)?;
            let loops_ok = q.loops_at(1).count() == 3;
            let checks = vec![
                Check::new("vertex_count", q.vertex_count() == 2),
                Check::new("edge_count", q.edges().len() == 3 + r),
                Check::new("three_loops_at_vertex_1", loops_ok),
            ];
            ("quiver framed", checks, to_value(&q))
        }
        QuiverCmd::Ext(a) => {
            let data: PolystableData = read_json(&a.data)?;
            let q = ext_quiver(&data)?;
            let mixed = (0..q.vertex_count())
                .flat_map(|i| (0..q.vertex_count()).map(move |j| (i, j)))
                .filter(|(i, j)| i != j)
                .all(|(i, j)| q.edges_between(i, j).next().is_none());
            let checks = vec![
                Check::new("three_loops_per_vertex", (0..q.vertex_count()).all(|v| q.loops_at(v).count() == 3)),
                Check::new("no_arrows_between_vertices", mixed),
            ];
            ("quiver ext", checks, to_value(&q))
        }
        QuiverCmd::Scan { mults } => {
            let a: Vec<u64> = parse_list(mults)?.into_iter().map(|x| x as u64).collect();
            let r = destabilizing_subvector_scan(&a)?;
            let checks = vec![Check::new("no_nonnegative_subvector", r.holds())];
            ("quiver scan", checks, to_value(&r))
        }
    })
}

/// Runs and emits the report; returns the process exit code.
pub fn main_with(cfg: &RunConfig) -> i32 {
    match run(cfg) {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            if let Some(path) = &cfg.out {
                if let Err(e) = fs::write(path, format!("{text}\n")) {
                    eprintln!("error: {}: {e}", path.display());
                    return 2;
                }
            }
            if cfg.json {
                println!("{text}");
            } else {
                print!("{}", report.summary());
            }
            report.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> RunConfig {
        let mut v = vec!["critlocus"];
        v.extend_from_slice(args);
        RunConfig::parse_from(v)
    }

    #[test]
    fn cubic_derivatives() {
        // p(t) = 2 + 3t − t² + 5t³
        let p = |t: i64| Scalar::from_int(2 + 3 * t - t * t + 5 * t * t * t);
        let (d1, d2) = derivatives_at_zero(&[p(-1), p(0), p(1), p(2)]);
        assert_eq!(d1, Scalar::from_int(3));
        assert_eq!(d2, Scalar::from_int(-2));
    }

    #[test]
    fn hilb_compare_three() {
        let r = run(&cfg(&["hilb", "compare", "--n", "3"])).unwrap();
        assert!(r.all_pass);
        assert_eq!(r.result["ideal_count"], 6);
    }

    #[test]
    fn missing_file_is_input_error() {
        let e = run(&cfg(&["stability", "check", "--rep", "/nonexistent/rep.json"])).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn config_echo_omits_output_flags() {
        let r = run(&cfg(&["--seed", "9", "--out", "/tmp/x.json", "quiver", "framed", "--r", "2"])).unwrap();
        assert_eq!(r.config["seed"], 9);
        assert!(r.config.get("out").is_none());
        assert!(r.all_pass);
    }

    #[test]
    fn koszul_table_reports_displayed_mismatch() {
        let r = run(&cfg(&["koszul", "table", "--point", "0,0,0"])).unwrap();
        let failing: Vec<&str> = r.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        assert_eq!(failing, vec!["x̂·ŷ = displayed", "−ŷ·x̂ = displayed", "x̂·ŷ·ẑ = 2"]);
        assert!(r.checks.iter().any(|c| c.name == "ext_dims" && c.pass));
    }

    #[test]
    fn error_exit_codes() {
        assert_eq!(CliError::from(Error::Parse("x".into())).exit_code(), 2);
        assert_eq!(CliError::from(Error::CoincidentPoints(0, 1)).exit_code(), 2);
        assert_eq!(CliError::from(Error::Invariant("x".into())).exit_code(), 3);
        assert_eq!(CliError::from(Error::Singular).exit_code(), 3);
        assert_eq!(CliError::from(Error::DegreeOverflow(4)).exit_code(), 3);
    }

    #[test]
    fn point_parsing() {
        assert_eq!(parse_point("1, -2/3, 0").unwrap()[1], Scalar::frac(-2, 3));
        assert!(parse_point("1,2").is_err());
    }
}
