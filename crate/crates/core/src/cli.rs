// Copyright 2026 Lindkit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end: `engineer`, `analyze`, `wedge`, `simulate` and
//! `tables`, emitting JSON, CSV or plain text.
//!
//! Every JSON document has the shape `{"header": ..., "result": ...}`. The
//! header carries the schema version, tool version, a SHA-256 hash of the
//! resolved configuration, the seed and a timestamp; everything except the
//! timestamp is a function of the configuration.
//!
//! Exit codes: 0 success, 1 other failure, 2 no uniqueness certificate,
//! 3 malformed input, 4 Lie closure cap exceeded.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::engineering::{self, builtin, PureOptions, SolutionSet, TargetSpec};
use crate::error::{Error, Result};
use crate::evolution;
use crate::fixed_points::{self, DensityMatrix, FixedPointReport};
use crate::linalg::{c, CMat, CVec};
use crate::pauli::{self, SignedPauliString};
use crate::superop::{self, GeneratorSpec, LindbladTerm};
use crate::wedge::{self, WedgeOptions, WedgeRow};

pub const SCHEMA: u32 = 1;
pub const THREADS_ENV: &str = "LINDKIT_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_NO_CERTIFICATE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_CLOSURE_CAP: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "lindkit",
    version,
    about = "Lindblad generators, fixed-point engineering and Lie wedges"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Worker threads for parallel loops (default: all cores).
    #[arg(long, env = THREADS_ENV, global = true)]
    pub threads: Option<usize>,
    #[arg(long, default_value_t = 0x5eed, global = true)]
    pub seed: u64,
    /// Write output to a file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Engineer Lindblad terms with a prescribed unique fixed point.
    Engineer(EngineerArgs),
    /// Fixed points, dark space and translations of a generator.
    Analyze(AnalyzeArgs),
    /// Lie wedge rows for named scenarios, batteries or a full spec.
    Wedge(WedgeArgs),
    /// Propagate a random initial state under a generator.
    Simulate(SimulateArgs),
    /// Reproduce the built-in tables.
    Tables(TablesArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct EngineerArgs {
    /// ghz, w, ground, dicke4 or toric.
    #[arg(long)]
    pub builtin: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Comma-separated diagonal weights of a mixed target.
    #[arg(long, value_delimiter = ',')]
    pub diag: Option<Vec<f64>>,
    /// Target JSON document, inline or a file path.
    #[arg(long)]
    pub input: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 512)]
    pub max_attempts: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct AnalyzeArgs {
    /// Generator JSON document, inline or a file path.
    #[arg(long)]
    pub input: Option<String>,
    /// amplitude-damping, dichotomy-degenerate or dichotomy-unique.
    #[arg(long)]
    pub builtin: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct WedgeArgs {
    /// single-qubit or two-qubit.
    #[arg(long)]
    pub battery: Option<String>,
    /// local_control_depolarizing, depolarizing_single_control or y_noise_full_control.
    #[arg(long)]
    pub scenario: Option<String>,
    /// Controlled-system JSON document, inline or a file path.
    #[arg(long)]
    pub input: Option<String>,
    #[arg(long, default_value_t = 32)]
    pub batch: usize,
    #[arg(long, default_value_t = 64)]
    pub max_batches: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct SimulateArgs {
    /// Generator JSON document, inline or a file path.
    #[arg(long)]
    pub input: Option<String>,
    /// Engineer this builtin target first and simulate its terms.
    #[arg(long)]
    pub builtin: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 50.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 51)]
    pub points: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct TablesArgs {
    /// bell, ghz3, graph, wedge or all.
    #[arg(long, default_value = "all")]
    pub which: String,
}

// ---------------------------------------------------------------- JSON I/O

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    pub shape: [usize; 2],
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMat) -> Self {
        let rows = |f: fn(&crate::linalg::C64) -> f64| {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        MatrixJson {
            shape: [m.nrows(), m.ncols()],
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    pub fn to_matrix(&self) -> Result<CMat> {
        let [r, cc] = self.shape;
        let ok = |v: &Vec<Vec<f64>>| v.len() == r && v.iter().all(|row| row.len() == cc);
        if !ok(&self.re) || !(ok(&self.im) || self.im.is_empty()) {
            return Err(Error::Invalid("matrix rows do not match shape".into()));
        }
        Ok(CMat::from_fn(r, cc, |i, j| {
            c(self.re[i][j], self.im.get(i).map_or(0.0, |row| row[j]))
        }))
    }
}

/// An operator given either by Pauli coefficients {"x1": [re, im]} or densely.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum OperatorJson {
    Paulis { paulis: BTreeMap<String, [f64; 2]> },
    Matrix { matrix: MatrixJson },
}

impl OperatorJson {
    pub fn to_matrix(&self, n: usize) -> Result<CMat> {
        match self {
            OperatorJson::Matrix { matrix } => matrix.to_matrix(),
            OperatorJson::Paulis { paulis } => {
                let dim = 1usize << n;
                let mut m = CMat::zeros(dim, dim);
                for (label, [re, im]) in paulis {
                    let p = SignedPauliString::from_str(label)?;
                    if p.n() != n {
                        return Err(Error::Dimension(format!("{label} is not a {n}-qubit string")));
                    }
                    m += pauli::dense_matrix(&p)? * c(*re, *im);
                }
                Ok(m)
            }
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct GeneratorJson {
    pub schema: u32,
    pub n: usize,
    #[serde(default)]
    pub hamiltonian: Option<OperatorJson>,
    #[serde(default)]
    pub controls: Vec<OperatorJson>,
    #[serde(default)]
    pub terms: Vec<OperatorJson>,
}

impl GeneratorJson {
    pub fn to_spec(&self) -> Result<GeneratorSpec> {
        check_schema(self.schema)?;
        if self.n == 0 || self.n > fixed_points::KERNEL_GUARD + 2 {
            return Err(Error::SizeGuard(format!("{} qubits", self.n)));
        }
        let dim = 1usize << self.n;
        let h = match &self.hamiltonian {
            Some(h) => h.to_matrix(self.n)?,
            None => CMat::zeros(dim, dim),
        };
        let controls = self
            .controls
            .iter()
            .map(|o| o.to_matrix(self.n))
            .collect::<Result<Vec<_>>>()?;
        let terms = self
            .terms
            .iter()
            .map(|o| Ok(LindbladTerm::raw(o.to_matrix(self.n)?)))
            .collect::<Result<Vec<_>>>()?;
        GeneratorSpec::new(self.n, h, controls, terms)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetJson {
    Pure {
        re: Vec<f64>,
        #[serde(default)]
        im: Vec<f64>,
    },
    Diagonal {
        lambda: Vec<f64>,
    },
    Density {
        matrix: MatrixJson,
    },
    Graph {
        n: usize,
        edges: Vec<[usize; 2]>,
    },
}

#[derive(Clone, Debug, Deserialize)]
pub struct TargetDoc {
    pub schema: u32,
    #[serde(flatten)]
    pub target: TargetJson,
}

fn check_schema(s: u32) -> Result<()> {
    if s != SCHEMA {
        return Err(Error::Invalid(format!("unsupported schema {s}")));
    }
    Ok(())
}

/// Inline JSON when the argument starts with '{', otherwise a file path.
fn read_document(arg: &str) -> std::result::Result<String, CliError> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).map_err(|e| CliError::Parse(format!("{arg}: {e}")))
}

fn parse_json<T: for<'de> Deserialize<'de>>(arg: &str) -> std::result::Result<T, CliError> {
    let text = read_document(arg)?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(e.to_string()))
}

// ---------------------------------------------------------------- errors

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    ClosureCap(String),
    Other(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::ClosureCap(_) => EXIT_CLOSURE_CAP,
            CliError::Other(_) => EXIT_FAILURE,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::ClosureCap { .. } => CliError::ClosureCap(e.to_string()),
            Error::ParsePauli(_)
            | Error::Invalid(_)
            | Error::Dimension(_)
            | Error::LengthMismatch(..)
            | Error::NotHermitian(_)
            | Error::InvalidState(_)
            | Error::IndexOutOfRange(..) => CliError::Parse(e.to_string()),
            _ => CliError::Other(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

// ---------------------------------------------------------------- result views

fn report_json(r: &FixedPointReport) -> Value {
    json!({
        "unique": r.unique,
        "kernel_dim": r.kernel_dim,
        "dark_space_dim": r.dark_space.dim(),
        "certificates": r.certificates,
        "witness_subspace_dim": r.witness_subspace.as_ref().map(|s| s.dim()),
        "witness_state": r.witness_state.as_ref().map(|w| MatrixJson::from_matrix(w.matrix())),
    })
}

fn translations_json(terms: &[LindbladTerm]) -> CliResult<Value> {
    Ok(json!(superop::translation_directions_of(terms)?))
}

fn solution_json(sol: &SolutionSet) -> CliResult<Value> {
    let terms: Vec<Value> = sol
        .terms
        .iter()
        .enumerate()
        .map(|(k, t)| {
            json!({
                "index": k,
                "pauli_sum": superop::pauli_sum_string(&t.matrix),
                "rate": t.rate,
                "origin": sol.rationale.get(k),
                "nilpotent": t.is_nilpotent(1e-10),
                "matrix": MatrixJson::from_matrix(&t.matrix),
            })
        })
        .collect();
    Ok(json!({
        "terms": terms,
        "translations": translations_json(&sol.terms)?,
        "certificate": report_json(&sol.certificate),
        "target": sol.target.as_ref().map(|t| MatrixJson::from_matrix(t.matrix())),
    }))
}

// ---------------------------------------------------------------- commands

struct Outcome {
    result: Value,
    csv: String,
    pretty: String,
    /// Exit code to use after the document is written.
    code: i32,
}

fn engineer_builtin(name: &str, n: usize, opts: &PureOptions) -> CliResult<SolutionSet> {
    Ok(match name {
        "ghz" => builtin::ghz(n, opts)?,
        "w" => builtin::w(n, opts)?,
        "ground" => builtin::ground(n)?,
        "dicke4" => builtin::dicke4()?,
        "toric" => builtin::toric()?,
        _ => return Err(CliError::Parse(format!("unknown builtin target {name}"))),
    })
}

fn cmd_engineer(a: &EngineerArgs, seed: u64) -> CliResult<Outcome> {
    let opts = PureOptions {
        gamma: a.gamma,
        max_attempts: a.max_attempts,
        seed,
    };
    let sources = [a.builtin.is_some(), a.diag.is_some(), a.input.is_some()];
    if sources.iter().filter(|s| **s).count() != 1 {
        return Err(CliError::Parse("give exactly one of --builtin, --diag, --input".into()));
    }
    let sol = if let Some(name) = &a.builtin {
        engineer_builtin(name, a.n, &opts)?
    } else if let Some(lambda) = &a.diag {
        engineering::engineer_diagonal(lambda)?
    } else {
        let doc: TargetDoc = parse_json(a.input.as_deref().unwrap_or_default())?;
        check_schema(doc.schema)?;
        match doc.target {
            TargetJson::Pure { re, im } => {
                if !im.is_empty() && im.len() != re.len() {
                    return Err(CliError::Parse("re and im lengths differ".into()));
                }
                let v = CVec::from_fn(re.len(), |k, _| c(re[k], im.get(k).copied().unwrap_or(0.0)));
                engineering::engineer(&TargetSpec::Pure(v), &opts)?
            }
            TargetJson::Diagonal { lambda } => engineering::engineer(&TargetSpec::DiagonalMixed(lambda), &opts)?,
            TargetJson::Density { matrix } => {
                let rho = DensityMatrix::new(matrix.to_matrix()?)?;
                engineering::engineer(&TargetSpec::GeneralMixed(rho), &opts)?
            }
            TargetJson::Graph { n, edges } => {
                let e: Vec<(usize, usize)> = edges.iter().map(|[a, b]| (*a, *b)).collect();
                engineering::engineer_graph_state(n, &e, &opts)?
            }
        }
    };
    let result = solution_json(&sol)?;
    let mut csv = String::from("index,pauli_sum,rate,origin,nilpotent\n");
    let mut pretty = String::new();
    for (k, t) in sol.terms.iter().enumerate() {
        let origin = sol
            .rationale
            .get(k)
            .map(|o| {
                serde_json::to_value(o)
                    .ok()
                    .and_then(|v| v["kind"].as_str().map(String::from))
                    .unwrap_or_default()
            })
            .unwrap_or_default();
        let ps = superop::pauli_sum_string(&t.matrix);
        csv.push_str(&format!("{k},\"{ps}\",{},{origin},{}\n", t.rate, t.is_nilpotent(1e-10)));
        pretty.push_str(&format!("V{} = {ps}    [{origin}]\n", k + 1));
    }
    pretty.push_str(&format!(
        "unique: {:?}  kernel: {:?}  dark space: {}\ncertificates: {}\n",
        sol.certificate.unique,
        sol.certificate.kernel_dim,
        sol.certificate.dark_space.dim(),
        sol.certificate.certificates.join(", ")
    ));
    // Subspace targets (stabilizer codes) have no single fixed point to certify.
    let code = if sol.is_unique() || sol.target.is_none() {
        EXIT_OK
    } else {
        EXIT_NO_CERTIFICATE
    };
    Ok(Outcome {
        result,
        csv,
        pretty,
        code,
    })
}

fn analyze_builtin(name: &str) -> CliResult<GeneratorSpec> {
    let i = c(0.0, 1.0);
    let s = pauli::sigma;
    let terms = match name {
        "amplitude-damping" => vec![LindbladTerm::raw((s("x") + s("y") * i) * c(0.5, 0.0))],
        "dichotomy-degenerate" => vec![
            LindbladTerm::raw(s("x1") + s("y1") * i),
            LindbladTerm::raw(s("x1") + s("yz") * i),
        ],
        "dichotomy-unique" => vec![
            LindbladTerm::raw(s("x1") + s("y1") * i),
            LindbladTerm::raw(s("1x") + s("zy") * i),
        ],
        _ => return Err(CliError::Parse(format!("unknown builtin generator {name}"))),
    };
    let n = terms[0].matrix.nrows().trailing_zeros() as usize;
    Ok(GeneratorSpec::dissipative(n, terms)?)
}

fn cmd_analyze(a: &AnalyzeArgs) -> CliResult<Outcome> {
    let spec = match (&a.input, &a.builtin) {
        (Some(inp), None) => parse_json::<GeneratorJson>(inp)?.to_spec()?,
        (None, Some(b)) => analyze_builtin(b)?,
        _ => return Err(CliError::Parse("give exactly one of --input, --builtin".into())),
    };
    let dim = spec.dim();
    if spec.dissipators.is_empty() {
        let result = json!({
            "verdict": "no_dissipation",
            "kernel_dim": dim * dim,
            "dark_space_dim": dim,
            "translations": [],
        });
        return Ok(Outcome {
            csv: format!("verdict,kernel_dim\nno_dissipation,{}\n", dim * dim),
            pretty: format!(
                "no dissipation: every operator is fixed by Γ (kernel dimension {})\n",
                dim * dim
            ),
            result,
            code: EXIT_OK,
        });
    }
    let rep = fixed_points::analyze_fixed_points(&spec.dissipators)?;
    let mut result = report_json(&rep);
    result["translations"] = translations_json(&spec.dissipators)?;
    let has_h = crate::linalg::frob(&spec.drift) > 0.0;
    if has_h && spec.n <= fixed_points::KERNEL_GUARD {
        let l = superop::build_lindbladian(&spec, &vec![0.0; spec.controls.len()])?;
        let k = fixed_points::kernel_hermitian_basis(&l.matrix).len();
        result["generator_kernel_dim"] = json!(k);
    }
    let tr: Vec<String> = superop::translation_directions_of(&spec.dissipators)?
        .iter()
        .map(|t| format!("{:+.6}*tau_{}", t.coefficient, t.direction))
        .collect();
    let csv = format!(
        "unique,kernel_dim,dark_space_dim,certificates,translations\n{:?},{},{},\"{}\",\"{}\"\n",
        rep.unique,
        rep.kernel_dim.map(|k| k.to_string()).unwrap_or_default(),
        rep.dark_space.dim(),
        rep.certificates.join(";"),
        tr.join(" ")
    );
    let pretty = format!(
        "unique: {:?}\nkernel dimension: {:?}\ndark space dimension: {}\ncertificates: {}\ntranslations: {}\n",
        rep.unique,
        rep.kernel_dim,
        rep.dark_space.dim(),
        rep.certificates.join(", "),
        if tr.is_empty() { "none".into() } else { tr.join(" ") }
    );
    Ok(Outcome {
        result,
        csv,
        pretty,
        code: EXIT_OK,
    })
}

pub const WEDGE_CSV_HEADER: &str =
    "scenario,dim_kc,dim_kd,dim_g,span_dim,H,WH,A,semialgebra,span_dim_exact,stable,expected_span";

pub fn wedge_csv(rows: &[WedgeRow]) -> String {
    let mut out = format!("{WEDGE_CSV_HEADER}\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.scenario,
            r.dim_kc,
            r.dim_kd,
            r.dim_g,
            r.span_dim,
            r.h,
            r.wh,
            r.a,
            r.semialgebra,
            r.span_dim_exact,
            r.stable,
            r.expected_span.map(|e| e.to_string()).unwrap_or_default()
        ));
    }
    out
}

fn wedge_pretty(rows: &[WedgeRow]) -> String {
    let mut out = format!(
        "{:<32} {:>5} {:>5} {:>5} {:>6} {:>3} {:>3} {:>3} {:>6}\n",
        "scenario", "k_c", "k_d", "g", "span", "H", "WH", "A", "semi"
    );
    let b = |x: bool| if x { "y" } else { "n" };
    for r in rows {
        let exp = match r.expected_span {
            Some(e) if e != r.span_dim => format!("  (reference {e})"),
            _ => String::new(),
        };
        out.push_str(&format!(
            "{:<32} {:>5} {:>5} {:>5} {:>6} {:>3} {:>3} {:>3} {:>6}{exp}\n",
            r.scenario,
            r.dim_kc,
            r.dim_kd,
            r.dim_g,
            r.span_dim,
            b(r.h),
            b(r.wh),
            b(r.a),
            b(r.semialgebra)
        ));
    }
    out
}

fn cmd_wedge(a: &WedgeArgs, seed: u64) -> CliResult<Outcome> {
    let opts = WedgeOptions {
        batch: a.batch,
        max_batches: a.max_batches,
        seed,
        ..WedgeOptions::default()
    };
    let scenarios = match (&a.battery, &a.scenario, &a.input) {
        (Some(b), None, None) => wedge::battery::by_name(b)?,
        (None, Some(s), None) => vec![wedge::battery::named(s)?],
        (None, None, Some(inp)) => vec![wedge::Scenario {
            name: "input".into(),
            spec: parse_json::<GeneratorJson>(inp)?.to_spec()?,
            expected_span: None,
        }],
        _ => {
            return Err(CliError::Parse(
                "give exactly one of --battery, --scenario, --input".into(),
            ))
        }
    };
    let rows = wedge::wedge_tables(&scenarios, &opts)?;
    Ok(Outcome {
        result: json!({ "rows": rows }),
        csv: wedge_csv(&rows),
        pretty: wedge_pretty(&rows),
        code: EXIT_OK,
    })
}

fn cmd_simulate(a: &SimulateArgs, seed: u64) -> CliResult<Outcome> {
    if a.points < 2 || a.t_max.is_nan() || a.t_max <= 0.0 {
        return Err(CliError::Parse("need at least two points and t_max > 0".into()));
    }
    let (spec, target) = match (&a.input, &a.builtin) {
        (Some(inp), None) => (parse_json::<GeneratorJson>(inp)?.to_spec()?, None),
        (None, Some(b)) => {
            let opts = PureOptions {
                seed,
                ..PureOptions::default()
            };
            let sol = engineer_builtin(b, a.n, &opts)?;
            let n = sol.terms[0].matrix.nrows().trailing_zeros() as usize;
            (GeneratorSpec::dissipative(n, sol.terms)?, sol.target)
        }
        _ => return Err(CliError::Parse("give exactly one of --input, --builtin".into())),
    };
    if spec.n > evolution::CHOI_GUARD + 1 {
        return Err(CliError::Other(format!(
            "simulation limited to {} qubits",
            evolution::CHOI_GUARD + 1
        )));
    }
    let l = superop::build_lindbladian(&spec, &vec![0.0; spec.controls.len()])?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let rho0 = evolution::random_density(spec.dim(), &mut rng);
    let times: Vec<f64> = (0..a.points)
        .map(|k| a.t_max * k as f64 / (a.points - 1) as f64)
        .collect();
    let tr = evolution::trajectory(&l, rho0.matrix(), &times, target.as_ref())?;
    let pts = tr.points();
    let mut pretty = String::new();
    for p in &pts {
        pretty.push_str(&format!(
            "t = {:>10.4}  F = {}  tr = {:.12}  min eig = {:.3e}\n",
            p.t,
            p.fidelity.map(|f| format!("{f:.10}")).unwrap_or_else(|| "-".into()),
            p.trace,
            p.min_eig
        ));
    }
    Ok(Outcome {
        result: json!({ "points": pts, "physical": tr.physical() }),
        csv: tr.to_csv(),
        pretty,
        code: EXIT_OK,
    })
}

fn cmd_tables(a: &TablesArgs, seed: u64) -> CliResult<Outcome> {
    let which = a.which.as_str();
    if !matches!(which, "bell" | "ghz3" | "graph" | "wedge" | "all") {
        return Err(CliError::Parse(format!("unknown table {which}")));
    }
    let want = |t: &str| which == "all" || which == t;
    let mut result = serde_json::Map::new();
    let mut pretty = String::new();
    let mut csv = String::from("table,row,term,pauli_sum,unique\n");
    let sets = |name: &str, list: Vec<(String, SolutionSet)>, pretty: &mut String, csv: &mut String| {
        let mut rows = Vec::new();
        for (row, s) in &list {
            pretty.push_str(&format!("{name} {row}: unique = {:?}\n", s.certificate.unique));
            for (k, t) in s.terms.iter().enumerate() {
                let ps = superop::pauli_sum_string(&t.matrix);
                pretty.push_str(&format!("    V{} = {ps}\n", k + 1));
                csv.push_str(&format!("{name},{row},{k},\"{ps}\",{:?}\n", s.certificate.unique));
            }
            rows.push(json!({ "row": row, "solution": solution_json(s)? }));
        }
        Ok::<_, CliError>(rows)
    };
    if want("bell") {
        let list = builtin::bell_sets()?
            .into_iter()
            .enumerate()
            .map(|(k, s)| (format!("set{}", k + 1), s))
            .collect();
        result.insert("bell".into(), json!(sets("bell", list, &mut pretty, &mut csv)?));
    }
    if want("ghz3") {
        let mut list = Vec::new();
        for alpha in ['1', 'x', 'z'] {
            for (k, s) in builtin::ghz3_sets(alpha)?.into_iter().enumerate() {
                if k < 2 && alpha != '1' {
                    continue;
                }
                let tag = if k == 2 {
                    format!("set3_alpha_{alpha}")
                } else {
                    format!("set{}", k + 1)
                };
                list.push((tag, s));
            }
        }
        result.insert("ghz3".into(), json!(sets("ghz3", list, &mut pretty, &mut csv)?));
    }
    if want("graph") {
        let opts = PureOptions {
            seed,
            ..PureOptions::default()
        };
        let mut list = Vec::new();
        for (name, n, edges) in builtin::graph_rows() {
            list.push((name.to_string(), engineering::engineer_graph_state(n, &edges, &opts)?));
        }
        result.insert("graph".into(), json!(sets("graph", list, &mut pretty, &mut csv)?));
    }
    if want("wedge") {
        let opts = WedgeOptions {
            seed,
            ..WedgeOptions::default()
        };
        let mut all = wedge::battery::single_qubit()?;
        all.extend(wedge::battery::two_qubit()?);
        let rows = wedge::wedge_tables(&all, &opts)?;
        pretty.push_str(&wedge_pretty(&rows));
        if which == "wedge" {
            csv = wedge_csv(&rows);
        }
        result.insert("wedge".into(), json!(rows));
    }
    Ok(Outcome {
        result: Value::Object(result),
        csv,
        pretty,
        code: EXIT_OK,
    })
}

// ---------------------------------------------------------------- driver

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Engineer(_) => "engineer",
        Command::Analyze(_) => "analyze",
        Command::Wedge(_) => "wedge",
        Command::Simulate(_) => "simulate",
        Command::Tables(_) => "tables",
    }
}

fn command_config(c: &Command) -> Value {
    match c {
        Command::Engineer(a) => json!(a),
        Command::Analyze(a) => json!(a),
        Command::Wedge(a) => json!(a),
        Command::Simulate(a) => json!(a),
        Command::Tables(a) => json!(a),
    }
}

/// Resolved configuration of a run; its hash goes into the header.
pub fn config_value(cli: &Cli) -> Value {
    json!({
        "command": command_name(&cli.command),
        "args": command_config(&cli.command),
        "seed": cli.seed,
    })
}

pub fn config_hash(config: &Value) -> String {
    let bytes = serde_json::to_vec(config).expect("config serialises");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn header(cli: &Cli) -> Value {
    let config = config_value(cli);
    let ts = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    json!({
        "schema": SCHEMA,
        "tool": "lindkit",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command_name(&cli.command),
        "config": config,
        "config_hash": config_hash(&config),
        "seed": cli.seed,
        "timestamp": ts,
    })
}

fn render(cli: &Cli, out: &Outcome) -> String {
    match cli.format {
        Format::Json => {
            let doc = json!({ "header": header(cli), "result": out.result });
            let mut s = serde_json::to_string_pretty(&doc).expect("document serialises");
            s.push('\n');
            s
        }
        Format::Csv => {
            let h = header(cli);
            format!(
                "# schema={} version={} config_hash={} seed={}\n{}",
                SCHEMA,
                env!("CARGO_PKG_VERSION"),
                h["config_hash"].as_str().unwrap_or_default(),
                cli.seed,
                out.csv
            )
        }
        Format::Pretty => out.pretty.clone(),
    }
}

fn dispatch(cli: &Cli) -> CliResult<Outcome> {
    match &cli.command {
        Command::Engineer(a) => cmd_engineer(a, cli.seed),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Wedge(a) => cmd_wedge(a, cli.seed),
        Command::Simulate(a) => cmd_simulate(a, cli.seed),
        Command::Tables(a) => cmd_tables(a, cli.seed),
    }
}

/// Runs with explicit argument list and sinks; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
        }
    };
    if let Some(t) = cli.threads {
        // A second global build fails when the pool already exists (e.g. in
        // tests); the existing pool is kept.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    let (text, code) = match dispatch(&cli) {
        Ok(out) => (render(&cli, &out), out.code),
        Err(err) => {
            let _ = writeln!(stderr, "error: {}", describe(&err));
            return err.code();
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| e.to_string()),
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_FAILURE;
    }
    code
}

fn describe(e: &CliError) -> String {
    match e {
        CliError::Parse(s) => format!("malformed input: {s}"),
        CliError::ClosureCap(s) => s.clone(),
        CliError::Other(s) => s.clone(),
    }
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(args, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("lindkit").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn strip_timestamp(s: &str) -> Value {
        let mut v: Value = serde_json::from_str(s).unwrap();
        v["header"]["timestamp"] = Value::Null;
        v
    }

    #[test]
    fn matrix_json_roundtrip() {
        let m = pauli::sigma("xy") + pauli::sigma("z1") * c(0.0, 0.5);
        let j = MatrixJson::from_matrix(&m);
        assert_eq!(j.shape, [4, 4]);
        assert_eq!(j.to_matrix().unwrap(), m);
        let bad = MatrixJson {
            shape: [2, 2],
            re: vec![vec![1.0]],
            im: vec![],
        };
        assert!(bad.to_matrix().is_err());
    }

    #[test]
    fn engineer_ground_json() {
        let (code, out, _) = run_str(&["engineer", "--builtin", "ground", "--n", "2"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["header"]["schema"], 1);
        assert_eq!(v["result"]["terms"].as_array().unwrap().len(), 2);
        assert_eq!(v["result"]["certificate"]["unique"], "yes");
        let h = v["header"]["config_hash"].as_str().unwrap();
        assert_eq!(h.len(), 64);
    }

    #[test]
    fn identical_configs_identical_output() {
        let a = run_str(&["engineer", "--diag", "0.25,0.75,0,0"]);
        let b = run_str(&["engineer", "--diag", "0.25,0.75,0,0"]);
        assert_eq!(a.0, 0);
        assert_eq!(strip_timestamp(&a.1), strip_timestamp(&b.1));
        let c3 = run_str(&["engineer", "--diag", "0.25,0.75,0,0", "--seed", "7"]);
        assert_ne!(
            strip_timestamp(&a.1)["header"]["config_hash"],
            strip_timestamp(&c3.1)["header"]["config_hash"]
        );
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_str(&["engineer", "--builtin", "nope"]).0, EXIT_PARSE);
        assert_eq!(
            run_str(&[
                "analyze",
                "--input",
                "{\"schema\": 1, \"n\": 1, \"terms\": [{\"paulis\": {\"q\": [1, 0]}}]}"
            ])
            .0,
            EXIT_PARSE
        );
        assert_eq!(run_str(&["analyze", "--input", "{not json"]).0, EXIT_PARSE);
        assert_eq!(run_str(&["bogus"]).0, EXIT_PARSE);
        let target = r#"{"schema": 1, "kind": "graph", "n": 2, "edges": [[0, 1]]}"#;
        assert_eq!(run_str(&["engineer", "--input", target, "--format", "csv"]).0, EXIT_OK);
        // Graph with a self-loop is invalid input.
        let bad = r#"{"schema": 1, "kind": "graph", "n": 2, "edges": [[0, 0]]}"#;
        assert_ne!(run_str(&["engineer", "--input", bad]).0, EXIT_OK);
    }

    #[test]
    fn analyze_builtins() {
        let (code, out, _) = run_str(&["analyze", "--builtin", "amplitude-damping"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"]["unique"], "yes");
        let tr = v["result"]["translations"].as_array().unwrap();
        assert_eq!(tr.len(), 1);
        assert_eq!(tr[0]["direction"], "z");
        let (_, out, _) = run_str(&["analyze", "--builtin", "dichotomy-degenerate"]);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"]["unique"], "no");
        let (_, out, _) = run_str(&["analyze", "--input", r#"{"schema": 1, "n": 1}"#]);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"]["verdict"], "no_dissipation");
        assert_eq!(v["result"]["kernel_dim"], 4);
    }

    #[test]
    fn wedge_commands() {
        let (code, out, _) = run_str(&["wedge", "--battery", "single-qubit", "--format", "csv"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(lines[0], WEDGE_CSV_HEADER);
        let dims: Vec<&str> = lines[1..].iter().map(|l| l.split(',').nth(4).unwrap()).collect();
        assert_eq!(dims, vec!["9", "4", "4", "12"]);
        let (_, out, _) = run_str(&["wedge", "--scenario", "local_control_depolarizing"]);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"]["rows"][0]["semialgebra"], true);
        let (_, out, _) = run_str(&["wedge", "--scenario", "depolarizing_single_control"]);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"]["rows"][0]["semialgebra"], false);
    }

    #[test]
    fn simulate_csv() {
        let (code, out, _) = run_str(&[
            "simulate",
            "--builtin",
            "ground",
            "--n",
            "1",
            "--points",
            "5",
            "--t-max",
            "40",
            "--format",
            "csv",
        ]);
        assert_eq!(code, 0);
        let last = out.lines().last().unwrap();
        let f: f64 = last.split(',').nth(1).unwrap().parse().unwrap();
        assert!(f > 1.0 - 1e-9);
    }
}
