//! The `hk` command line.
//!
//! Exit status 0 prints the JSON result, 1 prints `{"error": clause}` for a
//! domain failure, 2 reports a usage or input-format problem on stderr.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use hk_core::ghk::{generic_line_through, generic_vector_in};
use hk_core::lattice::fujiki_value;
use hk_core::ortho::pseudo_reflection;
use hk_core::period::{line_to_plane, ns_rank, plane_to_line};
use hk_core::subtwistor::{validate_chain, AuxMetric, DtwOptions};
use hk_core::{FujikiData, QuadLattice};
use serde_json::{json, Value};

use crate::io::{self, FormatError};
use crate::{catalog, par};

#[derive(Debug, Parser)]
#[command(name = "hk", version, about = "Exact period-domain and twistor-line computations")]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Debug, Args, Clone)]
pub struct LatticeArgs {
    /// Lattice file `{"name":..,"gram":[[..]]}`.
    #[arg(long, global = true, conflicts_with = "catalog")]
    pub lattice: Option<PathBuf>,
    /// Catalog key, optionally with `:param` (e.g. `K3n:3`).
    #[arg(long, global = true)]
    pub catalog: Option<String>,
    /// Catalog parameter for `K3n`, `Kummer` and `rank1`.
    #[arg(long, global = true)]
    pub param: Option<i64>,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for parallel verbs (0: all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Subcommand)]
pub enum Verb {
    /// Rank, signature and parity of a lattice.
    LatticeInfo(Plain),
    /// Check a line representative, a period point or a chain.
    Validate(ValidateArgs),
    /// Néron–Severi rank and basis of a period point.
    NsRank(PointArgs),
    /// Generic HK line through a period point, or a generic vector in a line.
    Generic(GenericArgs),
    /// Chain of at most 4 generic HK lines joining two period points.
    Connect(PairArgs),
    /// Upper and lower bounds for the subtwistor distance.
    Dtw(DtwArgs),
    /// Spinorial norm and determinant of an integer isometry.
    SpinNorm(SpinArgs),
    /// Pseudo-reflection in a vector of norm ±2.
    Reflect(ReflectArgs),
    /// Brute-force enumeration of small integer isometries.
    Search(SearchArgs),
    /// Fujiki value c·q(η,η)^n.
    Fujiki(FujikiArgs),
}

#[derive(Debug, Args)]
pub struct Plain {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub common: Common,
    /// Line representative `{"re":vec,"im":vec}`.
    #[arg(long, required_unless_present_any = ["x", "chain"])]
    pub line: Option<PathBuf>,
    /// Period point `{"span":[vec,vec]}`.
    #[arg(long)]
    pub x: Option<PathBuf>,
    /// Chain document as produced by `connect`.
    #[arg(long)]
    pub chain: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub x: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenericArgs {
    #[command(flatten)]
    pub common: Common,
    /// Period point to pass a generic line through.
    #[arg(long, required_unless_present = "w")]
    pub x: Option<PathBuf>,
    /// HK line `{"span":[v,v,v]}` to test and pick a generic vector in.
    #[arg(long, conflicts_with = "x")]
    pub w: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub x: PathBuf,
    #[arg(long)]
    pub y: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct DtwArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long, default_value_t = DtwOptions::default().restarts)]
    pub restarts: usize,
    #[arg(long, default_value_t = DtwOptions::default().iters)]
    pub iters: usize,
    /// Auxiliary metric `{"gram":[[float]]}`; identity when omitted.
    #[arg(long)]
    pub metric: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpinArgs {
    #[command(flatten)]
    pub common: Common,
    /// Isometry `{"matrix":[[int]]}`.
    #[arg(long)]
    pub isometry: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReflectArgs {
    #[command(flatten)]
    pub common: Common,
    /// Integer vector as a JSON array.
    #[arg(long)]
    pub vector: PathBuf,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 1)]
    pub height: i64,
}

#[derive(Debug, Args)]
pub struct FujikiArgs {
    #[command(flatten)]
    pub common: Common,
    /// η as a JSON vector.
    #[arg(long)]
    pub eta: PathBuf,
    /// Fujiki constant, a rational such as `3` or `1/2`.
    #[arg(long, default_value = "1")]
    pub c: String,
    /// Half the complex dimension.
    #[arg(long)]
    pub n: u32,
}

/// Outcome of a dispatch before it is written out.
#[derive(Debug)]
pub enum Failure {
    Domain(hk_core::Error),
    Usage(String),
}

impl From<hk_core::Error> for Failure {
    fn from(e: hk_core::Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Core(c) => Failure::Domain(c),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<Value, Failure>;

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn lattice_of(args: &LatticeArgs) -> Result<Option<Arc<QuadLattice>>, Failure> {
    let l = match (&args.lattice, &args.catalog) {
        (Some(path), _) => io::lattice_from_json(&read_json(path)?)?,
        (None, Some(key)) => catalog::lookup(key, args.param)?,
        (None, None) => return Ok(None),
    };
    Ok(Some(Arc::new(l)))
}

fn require_lattice(args: &LatticeArgs) -> Result<Arc<QuadLattice>, Failure> {
    lattice_of(args)?.ok_or_else(|| Failure::Usage("one of --lattice or --catalog is required".into()))
}

fn lattice_info(a: &Plain) -> Outcome {
    let l = require_lattice(&a.common.lattice)?;
    let (p, n) = l.signature();
    Ok(json!({ "rank": l.rank(), "signature": [p, n], "even": l.is_even() }))
}

fn validate(a: &ValidateArgs) -> Outcome {
    let l = lattice_of(&a.common.lattice)?;
    if let Some(path) = &a.line {
        let r = io::line_rep_from_json(&read_json(path)?, l.as_ref())?;
        let v = line_to_plane(&r)?;
        return Ok(json!({ "valid": true, "plane": io::period_to_json(&v) }));
    }
    if let Some(path) = &a.x {
        let v = io::period_from_json(&read_json(path)?, l.as_ref())?;
        return Ok(json!({ "valid": true, "line": io::line_rep_to_json(&plane_to_line(&v)?) }));
    }
    let path = a.chain.as_ref().expect("clap enforces one input");
    let c = io::chain_from_json(&read_json(path)?, l.as_ref())?;
    let report = validate_chain(&c);
    report.into_result()?;
    Ok(json!({ "valid": true, "lines": c.len() }))
}

fn ns(a: &PointArgs) -> Outcome {
    let l = lattice_of(&a.common.lattice)?;
    let v = io::period_from_json(&read_json(&a.x)?, l.as_ref())?;
    let (rank, basis) = ns_rank(&v)?;
    Ok(json!({ "rank": rank, "basis": basis.iter().map(|b| io::int_vector_to_json(b)).collect::<Vec<_>>() }))
}

fn generic(a: &GenericArgs) -> Outcome {
    let l = lattice_of(&a.common.lattice)?;
    if let Some(path) = &a.x {
        let v = io::period_from_json(&read_json(path)?, l.as_ref())?;
        let w = generic_line_through(&v, a.seed)?;
        return Ok(json!({ "line": io::hkline_to_json(&w), "generic": true }));
    }
    let l = l.ok_or_else(|| Failure::Usage("--w needs --lattice or --catalog".into()))?;
    let w = io::hkline_from_json(&read_json(a.w.as_ref().expect("clap enforces one input"))?, &l)?;
    let a_vec = generic_vector_in(&w, a.seed)?;
    Ok(json!({ "generic": true, "vector": io::vector_to_json(&a_vec) }))
}

fn read_pair(a: &PairArgs) -> Result<(hk_core::period::PeriodPoint, hk_core::period::PeriodPoint), Failure> {
    let l = lattice_of(&a.common.lattice)?;
    let vx = io::period_from_json(&read_json(&a.x)?, l.as_ref())?;
    let l = l.unwrap_or_else(|| vx.lattice().clone());
    let vy = io::period_from_json(&read_json(&a.y)?, Some(&l))?;
    Ok((vx, vy))
}

fn connect(a: &PairArgs) -> Outcome {
    let (vx, vy) = read_pair(a)?;
    let c = hk_core::ghk::connect_chain(&vx, &vy, a.seed)?;
    Ok(io::chain_to_json(&c))
}

fn dtw(a: &DtwArgs) -> Outcome {
    let (vx, vy) = read_pair(&a.pair)?;
    let g = match &a.metric {
        Some(path) => io::metric_from_json(&read_json(path)?)?,
        None => AuxMetric::identity(vx.lattice().rank()),
    };
    if g.dim() != vx.lattice().rank() {
        return Err(hk_core::Error::DimensionMismatch { expected: vx.lattice().rank(), found: g.dim() }.into());
    }
    let opts = DtwOptions { seed: a.pair.seed, restarts: a.restarts, iters: a.iters };
    let r = par::with_threads(a.pair.common.threads, || par::dtw_upper_par(&vx, &vy, &g, &opts, &[]))?;
    Ok(io::dtw_to_json(&r))
}

fn isometry_summary(a: &hk_core::ortho::Isometry) -> Value {
    let mut v = io::isometry_to_json(a);
    v["det"] = json!(a.det());
    v["spinorial_norm"] = json!(a.spinorial_norm());
    v
}

fn spin(a: &SpinArgs) -> Outcome {
    let l = lattice_of(&a.common.lattice)?;
    let iso = io::isometry_from_json(&read_json(&a.isometry)?, l.as_ref())?;
    Ok(json!({ "spinorial_norm": iso.spinorial_norm(), "det": iso.det(), "plus": iso.is_plus() }))
}

fn reflect(a: &ReflectArgs) -> Outcome {
    let l = require_lattice(&a.common.lattice)?;
    let v = io::int_vector_from_json(&read_json(&a.vector)?)?;
    if v.len() != l.rank() {
        return Err(hk_core::Error::DimensionMismatch { expected: l.rank(), found: v.len() }.into());
    }
    Ok(isometry_summary(&pseudo_reflection(&l, &v)?))
}

fn search(a: &SearchArgs) -> Outcome {
    let l = require_lattice(&a.common.lattice)?;
    let found = par::with_threads(a.common.threads, || par::search_isometries_par(&l, a.height))?;
    Ok(json!({ "count": found.len(), "isometries": found.iter().map(isometry_summary).collect::<Vec<_>>() }))
}

fn fujiki(a: &FujikiArgs) -> Outcome {
    let l = require_lattice(&a.common.lattice)?;
    let eta = io::vector_from_json(&read_json(&a.eta)?)?;
    let c = io::parse_rational(&a.c)?;
    let f = FujikiData::new(c, a.n)?;
    Ok(json!({ "value": io::scalar_to_json(&fujiki_value(&l, &eta, &f)?) }))
}

fn common(v: &Verb) -> &Common {
    match v {
        Verb::LatticeInfo(a) => &a.common,
        Verb::Validate(a) => &a.common,
        Verb::NsRank(a) => &a.common,
        Verb::Generic(a) => &a.common,
        Verb::Connect(a) => &a.common,
        Verb::Dtw(a) => &a.pair.common,
        Verb::SpinNorm(a) => &a.common,
        Verb::Reflect(a) => &a.common,
        Verb::Search(a) => &a.common,
        Verb::Fujiki(a) => &a.common,
    }
}

/// Runs one verb and returns its JSON result.
pub fn dispatch(cli: &Cli) -> Outcome {
    match &cli.verb {
        Verb::LatticeInfo(a) => lattice_info(a),
        Verb::Validate(a) => validate(a),
        Verb::NsRank(a) => ns(a),
        Verb::Generic(a) => generic(a),
        Verb::Connect(a) => connect(a),
        Verb::Dtw(a) => dtw(a),
        Verb::SpinNorm(a) => spin(a),
        Verb::Reflect(a) => reflect(a),
        Verb::Search(a) => search(a),
        Verb::Fujiki(a) => fujiki(a),
    }
}

fn emit(value: &Value, out: Option<&Path>) -> std::io::Result<()> {
    let mut text = serde_json::to_string(value).expect("JSON values serialize");
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

/// Parses `args`, dispatches, writes the result and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let out = common(&cli.verb).out.clone();
    let (value, status) = match dispatch(&cli) {
        Ok(v) => (v, 0),
        Err(Failure::Domain(e)) => (json!({ "error": e.clause() }), 1),
        Err(Failure::Usage(msg)) => {
            eprintln!("hk: {msg}");
            return 2;
        }
    };
    if let Err(e) = emit(&value, out.as_deref()) {
        eprintln!("hk: cannot write output: {e}");
        return 2;
    }
    status
}
