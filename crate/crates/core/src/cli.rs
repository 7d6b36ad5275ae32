//! Command-line front end. [`run`] parses arguments, runs one operation and
//! returns the rendered output with its exit status; `main` only prints.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::betti::{
    diesel_check, diesel_params, first_module_degrees, functional_equation_check, gotzmann_check,
    koszul_betti, socle_from_table, GorensteinShape,
};
use crate::bounds::{a_range, b_bound, entry_upper, max_hvector, realize_max};
use crate::error::{Error, Result};
use crate::hvec::{is_gorenstein_hvector, is_si_sequence, two_part_decompositions, GorensteinVerdict};
use crate::ideal::GradedIdeal;
use crate::invsys::{
    pencil_derivative_rank, sharp_pencil_witness, three_part_decomposition, Form, InverseModule,
};
use crate::level2::{decide, enumerate_rrr2, iarrobino_bound, Verdict};
use crate::macaulay::{binomial_expand, parse_int_list, HVector};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_PARSE: i32 = 65;
pub const EXIT_INTERNAL: i32 = 70;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "levelh", version, about = "Hilbert functions of type-2 level artinian algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: RunConfig,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args)]
struct RunConfig {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Redraws allowed when a generic construction misses its h-vector.
    #[arg(long, global = true, default_value_t = crate::invsys::DEFAULT_RETRIES)]
    retries: usize,
    /// Degree cap for ideal computations.
    #[arg(long, global = true)]
    cap: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// i-binomial expansion of n and the Macaulay bound n^<i>.
    Expand {
        /// Integer to expand
        #[arg(long)]
        n: u64,
        /// Binomial degree
        #[arg(long)]
        i: u64,
    },
    /// Is h an O-sequence?
    Oseq(HArg),
    /// Is h an SI-sequence?
    Si(HArg),
    /// Is h the h-vector of a Gorenstein algebra (where decidable)?
    Gor(HArg),
    /// h-vector of the module generated by the forms in a file.
    Hvector(ModuleArg),
    /// Degree-d piece of the annihilator of a module.
    Ann {
        #[command(flatten)]
        module: ModuleArg,
        #[arg(long)]
        d: u32,
    },
    /// Socle vector of the quotient of a module.
    Socle(ModuleArg),
    /// Decompositions h = g + tail with g Gorenstein and reverse(tail) an O-sequence.
    Decompose2(HArg),
    /// Parts h', h'', h''' for the two forms of a module.
    Decompose3(ModuleArg),
    /// Decide whether h is a type-2 level h-vector.
    Level2 {
        #[command(flatten)]
        h: HArg,
        /// Also report the lower bound on entry u of a Gorenstein quotient.
        #[arg(long)]
        u: Option<usize>,
        /// Directory for the witness file of a Level verdict.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Level vectors (1, r, ..., r, 2) up to socle degree e, each witnessed.
    Enumerate {
        /// Number of variables
        #[arg(long)]
        r: u64,
        /// Largest socle degree
        #[arg(long)]
        e: usize,
    },
    /// Bounds on a, b and the middle entries of (1, r, ..., b, a, 2).
    Bounds {
        /// Number of variables
        #[arg(long)]
        r: u64,
        /// h_(e-1)
        #[arg(long)]
        a: Option<u64>,
        /// Socle degree
        #[arg(long)]
        e: Option<u64>,
        /// Report the bound on h_(e-i)
        #[arg(long)]
        i: Option<u64>,
    },
    /// Entrywise-maximal level h-vector with given r, a, e.
    Maxh(RaeArg),
    /// Build and verify a module realizing the maximum.
    Witness {
        #[command(flatten)]
        rae: RaeArg,
        /// Directory for the witness file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// First-derivative counts along the pencil of two forms.
    Pencil {
        /// File with two forms of equal degree.
        #[arg(long)]
        module: Option<PathBuf>,
        /// Use the sharp witness in r variables instead of a file.
        #[arg(long)]
        r: Option<usize>,
        /// Socle degree of the sharp witness
        #[arg(long)]
        e: Option<u32>,
    },
    /// Betti table from the Koszul complex of an ideal or a module's annihilator.
    Betti {
        /// Module whose annihilator is resolved
        #[arg(long)]
        module: Option<PathBuf>,
        /// File with ideal generators in x1, x2, ...
        #[arg(long)]
        ideal: Option<PathBuf>,
    },
    /// Resolution constraints for a codimension-3 Gorenstein h-vector.
    Diesel {
        #[command(flatten)]
        h: HArg,
        /// Generator degrees of a candidate shape.
        #[arg(long)]
        q: Option<String>,
        /// Second-module degrees of a candidate shape.
        #[arg(long)]
        p: Option<String>,
    },
    /// First-syzygy degrees of a level (1, 3, ..., 3, 2) algebra.
    #[command(name = "mfr-f1")]
    MfrF1(HArg),
    /// Is a space of dimension n in degree d with dim R_1 V = m Gotzmann?
    Gotzmann {
        /// Number of variables
        #[arg(long)]
        r: u64,
        /// Degree of the space
        #[arg(long)]
        d: u64,
        /// Dimension of the space
        #[arg(long)]
        n: u64,
        /// Dimension of its degree-(d+1) span
        #[arg(long)]
        m: u64,
    },
}

#[derive(Debug, Args)]
struct HArg {
    /// Comma-separated h-vector.
    #[arg(long)]
    h: String,
}

#[derive(Debug, Args)]
struct ModuleArg {
    /// File with one form in y1, y2, ... per line.
    #[arg(long)]
    module: PathBuf,
}

#[derive(Debug, Args)]
struct RaeArg {
    /// Number of variables
    #[arg(long)]
    r: u64,
    /// h_(e-1)
    #[arg(long)]
    a: u64,
    /// Socle degree
    #[arg(long)]
    e: u64,
}

/// Rendered output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// The single structured record printed per invocation.
#[derive(Debug, Serialize)]
struct Report {
    subcommand: String,
    inputs: Value,
    verdict: String,
    trace: Value,
    artifacts: Value,
}

struct Answer {
    code: i32,
    verdict: String,
    trace: Value,
    artifacts: Value,
}

impl Answer {
    fn ok(artifacts: Value) -> Self {
        Answer { code: EXIT_OK, verdict: "ok".into(), trace: json!([]), artifacts }
    }

    fn boolean(holds: bool, artifacts: Value) -> Self {
        Answer {
            code: if holds { EXIT_OK } else { EXIT_NEGATIVE },
            verdict: if holds { "yes" } else { "no" }.into(),
            trace: json!([]),
            artifacts,
        }
    }

    fn with_trace(mut self, trace: Value) -> Self {
        self.trace = trace;
        self
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let (name, inputs) = describe(&cli);
    match execute(&cli.command, &cli.config) {
        Ok(answer) => {
            let report = Report {
                subcommand: name,
                inputs,
                verdict: answer.verdict,
                trace: answer.trace,
                artifacts: answer.artifacts,
            };
            Outcome { code: answer.code, stdout: render(&report, cli.config.format), stderr: String::new() }
        }
        Err(e) => {
            let code = match &e {
                Error::InvalidInput(_) => EXIT_USAGE,
                Error::Parse { .. } => EXIT_PARSE,
                Error::HypothesisNotMet(_) => EXIT_UNKNOWN,
                Error::Genericity { .. } | Error::Internal(_) => EXIT_INTERNAL,
            };
            if let Error::HypothesisNotMet(msg) = &e {
                let report = Report {
                    subcommand: name,
                    inputs,
                    verdict: "unknown".into(),
                    trace: json!([{ "reason": msg }]),
                    artifacts: json!({}),
                };
                return Outcome { code, stdout: render(&report, cli.config.format), stderr: String::new() };
            }
            Outcome { code, stdout: String::new(), stderr: format!("levelh: {e}\n") }
        }
    }
}

fn describe(cli: &Cli) -> (String, Value) {
    let c = &cli.config;
    let mut inputs = json!({ "seed": c.seed, "retries": c.retries });
    let mut put = |k: &str, v: Value| {
        if !v.is_null() {
            inputs[k] = v;
        }
    };
    let path = |p: &Path| json!(p.display().to_string());
    put("cap", json!(c.cap));
    let name = match &cli.command {
        Command::Expand { n, i } => {
            put("n", json!(n));
            put("i", json!(i));
            "expand"
        }
        Command::Oseq(h) | Command::Si(h) | Command::Gor(h) | Command::Decompose2(h) | Command::MfrF1(h) => {
            put("h", json!(h.h));
            match &cli.command {
                Command::Oseq(_) => "oseq",
                Command::Si(_) => "si",
                Command::Gor(_) => "gor",
                Command::Decompose2(_) => "decompose2",
                _ => "mfr-f1",
            }
        }
        Command::Hvector(m) | Command::Socle(m) | Command::Decompose3(m) => {
            put("module", path(&m.module));
            match &cli.command {
                Command::Hvector(_) => "hvector",
                Command::Socle(_) => "socle",
                _ => "decompose3",
            }
        }
        Command::Ann { module, d } => {
            put("module", path(&module.module));
            put("d", json!(d));
            "ann"
        }
        Command::Level2 { h, u, out } => {
            put("h", json!(h.h));
            put("u", json!(u));
            put("out", json!(out.as_ref().map(|p| p.display().to_string())));
            "level2"
        }
        Command::Enumerate { r, e } => {
            put("r", json!(r));
            put("e", json!(e));
            "enumerate"
        }
        Command::Bounds { r, a, e, i } => {
            put("r", json!(r));
            put("a", json!(a));
            put("e", json!(e));
            put("i", json!(i));
            "bounds"
        }
        Command::Maxh(rae) | Command::Witness { rae, .. } => {
            put("r", json!(rae.r));
            put("a", json!(rae.a));
            put("e", json!(rae.e));
            if let Command::Witness { out, .. } = &cli.command {
                put("out", json!(out.as_ref().map(|p| p.display().to_string())));
                "witness"
            } else {
                "maxh"
            }
        }
        Command::Pencil { module, r, e } => {
            put("module", json!(module.as_ref().map(|p| p.display().to_string())));
            put("r", json!(r));
            put("e", json!(e));
            "pencil"
        }
        Command::Betti { module, ideal } => {
            put("module", json!(module.as_ref().map(|p| p.display().to_string())));
            put("ideal", json!(ideal.as_ref().map(|p| p.display().to_string())));
            "betti"
        }
        Command::Diesel { h, q, p } => {
            put("h", json!(h.h));
            put("q", json!(q));
            put("p", json!(p));
            "diesel"
        }
        Command::Gotzmann { r, d, n, m } => {
            put("r", json!(r));
            put("d", json!(d));
            put("n", json!(n));
            put("m", json!(m));
            "gotzmann"
        }
    };
    (name.into(), inputs)
}

fn parse_h(arg: &HArg) -> Result<HVector> {
    arg.h.parse::<HVector>().map_err(|e| match e {
        Error::InvalidInput(m) => Error::parse(1, m),
        other => other,
    })
}

fn parse_degrees(text: &str) -> Result<Vec<usize>> {
    parse_int_list(text)?
        .into_iter()
        .map(|v| usize::try_from(v).map_err(|_| Error::parse(1, format!("negative degree {v}"))))
        .collect()
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))
}

fn load_module(path: &Path) -> Result<InverseModule> {
    InverseModule::parse(&read_file(path)?)
}

/// Ideal generators in `x1, x2, ...`, one per line; `#` starts a comment.
fn load_ideal(path: &Path, cap: Option<usize>) -> Result<GradedIdeal> {
    let text = read_file(path)?;
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let num_vars = lines
        .iter()
        .flat_map(|(_, l)| variable_indices(l, 'x'))
        .max()
        .ok_or_else(|| Error::parse(1, "the ideal file has no variables"))?;
    let forms: Vec<Form> = lines
        .iter()
        .map(|&(n, l)| Form::parse(l, 'x', num_vars, n))
        .collect::<Result<_>>()?;
    let top = forms.iter().map(|f| f.degree() as usize).max().unwrap_or(0);
    // A generous default: sums of generator degrees bound the socle degree of
    // a complete intersection, and the closure check catches anything larger.
    let cap = cap.unwrap_or_else(|| forms.iter().map(|f| f.degree() as usize).sum::<usize>().max(top + 1));
    GradedIdeal::from_generators(num_vars, &forms, cap)
}

fn variable_indices(text: &str, letter: char) -> Vec<usize> {
    let bytes: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    for (k, &c) in bytes.iter().enumerate() {
        if c == letter {
            let digits: String = bytes[k + 1..].iter().take_while(|c| c.is_ascii_digit()).collect();
            if let Ok(v) = digits.parse() {
                out.push(v);
            }
        }
    }
    out
}

fn write_witness(dir: &Path, name: &str, module: &InverseModule) -> Result<String> {
    fs::create_dir_all(dir).map_err(|e| Error::invalid(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, module.to_string()).map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))?;
    Ok(path.display().to_string())
}

fn generators(module: &InverseModule) -> Vec<String> {
    module.generators().iter().map(|g| g.to_string()).collect()
}

fn execute(command: &Command, config: &RunConfig) -> Result<Answer> {
    let (seed, retries) = (config.seed, config.retries);
    Ok(match command {
        Command::Expand { n, i } => {
            let x = binomial_expand(*n, *i)?;
            Answer::ok(json!({
                "expansion": x.to_string(),
                "terms": x.terms,
                "upper": x.upper().to_string(),
            }))
        }
        Command::Oseq(h) => {
            let seq = parse_int_list(&h.h)?;
            let holds = crate::macaulay::is_o_sequence(&seq);
            let violation = (!holds).then(|| first_growth_violation(&seq)).flatten();
            Answer::boolean(holds, json!({ "h": seq, "violation": violation }))
        }
        Command::Si(h) => {
            let h = parse_h(h)?;
            Answer::boolean(is_si_sequence(&h), json!({ "h": h.entries() }))
        }
        Command::Gor(h) => {
            let h = parse_h(h)?;
            let v = is_gorenstein_hvector(&h);
            Answer {
                code: match v {
                    GorensteinVerdict::Yes => EXIT_OK,
                    GorensteinVerdict::No => EXIT_NEGATIVE,
                    GorensteinVerdict::Unknown => EXIT_UNKNOWN,
                },
                verdict: v.to_string(),
                trace: json!([]),
                artifacts: json!({ "h": h.entries() }),
            }
        }
        Command::Hvector(m) => {
            let module = load_module(&m.module)?;
            Answer::ok(json!({ "hvector": module.hvector().entries() }))
        }
        Command::Socle(m) => {
            let module = load_module(&m.module)?;
            let s = module.socle_vector();
            Answer::ok(json!({ "socle": s.entries(), "type": s.type_(), "level": s.is_level() }))
        }
        Command::Ann { module, d } => {
            let module = load_module(&module.module)?;
            let forms: Vec<String> = module
                .annihilator_component(*d)
                .iter()
                .map(|f| f.display_with('x'))
                .collect();
            Answer::ok(json!({ "degree": d, "dimension": forms.len(), "basis": forms }))
        }
        Command::Decompose2(h) => {
            let h = parse_h(h)?;
            let pairs = two_part_decompositions(&h)?;
            let found = !pairs.is_empty();
            Answer::boolean(found, json!({ "decompositions": pairs }))
        }
        Command::Decompose3(m) => {
            let module = load_module(&m.module)?;
            let [f, g] = module.generators() else {
                return Err(Error::invalid("decompose3 needs exactly two forms"));
            };
            let d = three_part_decomposition(f, g)?;
            Answer::ok(json!({ "only_f": d.only_f, "shared": d.shared, "only_g": d.only_g }))
        }
        Command::Level2 { h, u, out } => {
            let h = parse_h(h)?;
            let cert = decide(&h, seed, retries)?;
            let mut artifacts = Map::new();
            artifacts.insert("stage".into(), json!(cert.stage));
            artifacts.insert("reason".into(), json!(cert.reason));
            if let Some(w) = &cert.witness {
                artifacts.insert("witness".into(), w.to_json());
                if let Some(dir) = out {
                    let path = write_witness(dir, "witness.txt", &w.module)?;
                    artifacts.insert("witness_file".into(), json!(path));
                }
            }
            if let Some(u) = u {
                artifacts.insert("iarrobino".into(), json!(iarrobino_bound(&h, *u)?));
            }
            Answer {
                code: match cert.verdict {
                    Verdict::Level => EXIT_OK,
                    Verdict::NotLevel => EXIT_NEGATIVE,
                    Verdict::Unknown => EXIT_UNKNOWN,
                },
                verdict: cert.verdict.to_string(),
                trace: json!(cert.trace),
                artifacts: Value::Object(artifacts),
            }
        }
        Command::Enumerate { r, e } => {
            let list = enumerate_rrr2(*r, *e, seed, retries)?;
            let rows: Vec<&[u64]> = list.iter().map(HVector::entries).collect();
            Answer::ok(json!({ "count": list.len(), "hvectors": rows }))
        }
        Command::Bounds { r, a, e, i } => {
            let mut artifacts = Map::new();
            artifacts.insert("a".into(), json!(a_range(*r)?));
            if let (Some(a), Some(e)) = (a, e) {
                artifacts.insert("b".into(), json!(b_bound(*r, *a, *e)?));
                if let Some(i) = i {
                    artifacts.insert("entry".into(), json!({ "index": e - i, "upper": entry_upper(*r, *a, *e, *i)? }));
                }
            } else if a.is_some() || e.is_some() || i.is_some() {
                return Err(Error::invalid("--a and --e go together; --i needs both"));
            }
            Answer::ok(Value::Object(artifacts))
        }
        Command::Maxh(rae) => {
            let (h, recipe) = max_hvector(rae.r, rae.a, rae.e)?;
            Answer::ok(json!({ "hvector": h.entries(), "recipe": recipe }))
        }
        Command::Witness { rae, out } => {
            let module = realize_max(rae.r, rae.a, rae.e, seed, retries)?;
            let a = module.analyze();
            let mut artifacts = json!({
                "generators": generators(&module),
                "hvector": a.hvector.entries(),
                "socle": a.socle.entries(),
            });
            if let Some(dir) = out {
                artifacts["witness_file"] = json!(write_witness(dir, "witness.txt", &module)?);
            }
            Answer::ok(artifacts)
        }
        Command::Pencil { module, r, e } => {
            let m = match (module, r, e) {
                (Some(path), None, None) => load_module(path)?,
                (None, Some(r), Some(e)) => sharp_pencil_witness(*r, *e)?,
                _ => return Err(Error::invalid("give either --module or both --r and --e")),
            };
            let [f, g] = m.generators() else {
                return Err(Error::invalid("the pencil needs exactly two forms"));
            };
            let rank = pencil_derivative_rank(f, g, seed)?;
            Answer::ok(json!({ "generators": generators(&m), "pencil": rank }))
        }
        Command::Betti { module, ideal } => {
            let (ideal, h) = match (module, ideal) {
                (Some(path), None) => {
                    let m = load_module(path)?;
                    let cap = config.cap.unwrap_or(m.max_degree() as usize + 1);
                    (GradedIdeal::from_module(&m, cap), Some(m.hvector()))
                }
                (None, Some(path)) => (load_ideal(path, config.cap)?, None),
                _ => return Err(Error::invalid("give exactly one of --module and --ideal")),
            };
            let table = koszul_betti(&ideal)?;
            let h = h.or_else(|| table.hvector().cloned()).expect("koszul tables carry h");
            let fe = functional_equation_check(&h, &table);
            let socle = socle_from_table(&table)?;
            Answer::ok(json!({
                "table": table.to_string(),
                "first_module": table.degrees(1),
                "hvector": h.entries(),
                "socle": socle.entries(),
                "functional_equation": fe,
            }))
        }
        Command::Diesel { h, q, p } => {
            let t = parse_h(h)?;
            let params = diesel_params(&t)?;
            match (q, p) {
                (None, None) => Answer::ok(json!({ "params": params })),
                (Some(q), Some(p)) => {
                    let shape = GorensteinShape::new(parse_degrees(q)?, parse_degrees(p)?, t.socle_degree())?;
                    let report = diesel_check(&t, &shape)?;
                    Answer::boolean(report.holds, json!({ "params": params, "shape": shape }))
                        .with_trace(json!(report.conditions))
                }
                _ => return Err(Error::invalid("--q and --p go together")),
            }
        }
        Command::MfrF1(h) => {
            let h = parse_h(h)?;
            Answer::ok(json!({ "first_module": first_module_degrees(&h)? }))
        }
        Command::Gotzmann { r, d, n, m } => Answer::boolean(gotzmann_check(*r, *d, *n, *m)?, json!({})),
    })
}

/// First index `d` with `h_{d+1} > h_d^{<d>}`, if any.
fn first_growth_violation(seq: &[i64]) -> Option<Value> {
    if seq.first() != Some(&1) || seq.iter().any(|&v| v < 0) {
        return Some(json!({ "index": 0 }));
    }
    (1..seq.len().saturating_sub(1)).find_map(|d| {
        let bound = crate::macaulay::macaulay_upper_u64(seq[d] as u64, d as u64);
        (seq[d + 1] as u64 > bound).then(|| json!({ "index": d + 1, "value": seq[d + 1], "bound": bound }))
    })
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json!(report)).expect("values serialize");
            s.push('\n');
            s
        }
        Format::Table => {
            let mut s = format!("subcommand: {}\nverdict: {}\n", report.subcommand, report.verdict);
            if let Value::Object(map) = &report.artifacts {
                for (k, v) in map {
                    s.push_str(&format!("{k}: {}\n", plain(v)));
                }
            }
            s
        }
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) if s.contains('\n') => format!("\n{}", s.trim_end()),
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(Value::is_number) => {
            items.iter().map(Value::to_string).collect::<Vec<_>>().join(",")
        }
        other => other.to_string(),
    }
}
