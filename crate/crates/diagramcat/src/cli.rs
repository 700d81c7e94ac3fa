//! Command-line driver: `compose`, `enumerate`, `analyze`, `eggbox`, `verify`
//! and `classify-iso`.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 on usage
//! errors (bad arguments, unparsable input, inputs over the enumeration bound).

use std::collections::HashSet;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::brauer::{self, BrauerParams, VerifyBounds};
use crate::diagrams::{CategoryTag, DiagramError, Partition, Vertex};
use crate::homsets::{self, HomSet};
use crate::numbers::VerifyRow;
use crate::sandwich::{canonical_labels, max_elements, SandwichContext, SandwichError};

pub const REPORT_SCHEMA: u32 = 1;

/// Largest regular part handed to the MI-domination check by default.
pub const DEFAULT_MI_LIMIT: usize = 6000;

#[derive(Parser)]
#[command(name = "diagramcat", version, about = "Diagram categories and their sandwich semigroups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compose two partitions given in text form, `m n | block | …`.
    Compose {
        left: String,
        right: String,
        /// Print the product as JSON.
        #[arg(long)]
        json: bool,
    },
    /// List K_mn in text form, one partition per line.
    Enumerate {
        tag: CategoryTag,
        m: usize,
        n: usize,
        /// Only print the number of elements.
        #[arg(long)]
        count: bool,
        /// Largest m+n to enumerate (defaults to the tag's bound).
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Report on a sandwich semigroup given by a context spec.
    Analyze {
        /// Inline JSON, a file path, or `-` for stdin.
        spec: String,
        /// Cross-check the structure against the engine semigroup.
        #[arg(long)]
        oracle: bool,
    },
    /// Eggbox diagrams in DOT form.
    Eggbox {
        spec: String,
        /// Keep only the regular D-classes.
        #[arg(long)]
        regular_only: bool,
        /// Write one `.dot` file per context here instead of to stdout.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Closed formulas against enumeration and the engine.
    Verify {
        #[arg(long)]
        tag: CategoryTag,
        #[arg(long, default_value_t = 10)]
        max_size: usize,
        #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
        report: ReportFormat,
        /// Write the report here instead of to stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Group contexts into isomorphism classes.
    ClassifyIso { spec: String },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Csv,
    Json,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failed(String),
    /// The reader went away; not an error for a CLI.
    ClosedPipe,
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::ClosedPipe => 0,
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return CliError::ClosedPipe;
        }
        CliError::Usage(e.to_string())
    }
}

impl From<SandwichError> for CliError {
    fn from(e: SandwichError) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// A context spec as read from JSON.
///
/// Exactly one of `sigma`, `sigmaRank` and `canonicalRank` may be given; with
/// none and `m = n` the spec denotes the monoid `K_n` (σ the identity).
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ContextSpec {
    pub tag: CategoryTag,
    pub m: usize,
    pub n: usize,
    #[serde(default)]
    pub sigma: Option<SigmaSpec>,
    /// Every σ of this rank, one context each.
    #[serde(default)]
    pub sigma_rank: Option<usize>,
    /// The Brauer σ with transversals `{i, i'}`, `i ≤ r`.
    #[serde(default)]
    pub canonical_rank: Option<usize>,
    #[serde(default)]
    pub options: SpecOptions,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SigmaSpec {
    Text(String),
    Blocks { m: usize, n: usize, blocks: Vec<Vec<Vertex>> },
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SpecOptions {
    /// Largest `m + n` enumerated.
    pub bound: Option<usize>,
    #[serde(default)]
    pub oracle: bool,
    /// Largest regular part checked for MI-domination.
    pub mi_limit: Option<usize>,
}

impl ContextSpec {
    fn sigma(&self) -> Result<Partition, CliError> {
        let located = |e: DiagramError| match e {
            DiagramError::Parse { column, message } => CliError::Usage(format!("sigma: column {column}: {message}")),
            other => CliError::Usage(format!("sigma: {other}")),
        };
        match &self.sigma {
            Some(SigmaSpec::Text(s)) => s.parse().map_err(located),
            Some(SigmaSpec::Blocks { m, n, blocks }) => Partition::new(*m, *n, blocks).map_err(located),
            None => Err(CliError::Usage("sigma missing".into())),
        }
    }

    /// The contexts this spec names.
    pub fn contexts(&self) -> Result<Vec<SandwichContext>, CliError> {
        let given = [self.sigma.is_some(), self.sigma_rank.is_some(), self.canonical_rank.is_some()];
        if given.iter().filter(|&&g| g).count() > 1 {
            return Err(CliError::Usage("give at most one of sigma, sigmaRank, canonicalRank".into()));
        }
        let bound = self.options.bound.unwrap_or_else(|| homsets::default_bound(self.tag));
        let homset = Arc::new(enumerate(self.tag, self.m, self.n, bound)?);
        let sigmas = if let Some(q) = self.sigma_rank {
            let all = enumerate(self.tag, self.n, self.m, bound)?;
            let out: Vec<Partition> = all.elements().iter().filter(|s| s.rank() == q).cloned().collect();
            if out.is_empty() {
                return Err(CliError::Usage(format!("no σ of rank {q} in {}_{{{},{}}}", self.tag, self.n, self.m)));
            }
            out
        } else if let Some(r) = self.canonical_rank {
            if self.tag != CategoryTag::B {
                return Err(CliError::Usage("canonicalRank is defined for tag B only".into()));
            }
            let p = BrauerParams::new(self.m, self.n, r).map_err(|e| CliError::Usage(e.to_string()))?;
            vec![p.canonical_sigma()]
        } else if self.sigma.is_some() {
            vec![self.sigma()?]
        } else if self.m == self.n {
            vec![Partition::identity(self.n)]
        } else {
            return Err(CliError::Usage("sigma is required when m ≠ n".into()));
        };
        sigmas
            .into_iter()
            .map(|s| SandwichContext::with_homset(s, homset.clone()).map_err(CliError::from))
            .collect()
    }
}

fn enumerate(tag: CategoryTag, m: usize, n: usize, bound: usize) -> Result<HomSet, CliError> {
    homsets::enumerate_bounded(tag, m, n, bound).map_err(|e| CliError::Usage(e.to_string()))
}

fn read_source(arg: &str) -> Result<String, CliError> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    if arg == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(arg).map_err(|e| CliError::Usage(format!("{arg}: {e}")))
}

/// Parse one spec or a JSON array of specs.
pub fn parse_specs(text: &str) -> Result<Vec<ContextSpec>, CliError> {
    let located = |e: serde_json::Error| {
        CliError::Usage(format!("spec: line {} column {}: {e}", e.line(), e.column()))
    };
    if text.trim_start().starts_with('[') {
        serde_json::from_str(text).map_err(located)
    } else {
        serde_json::from_str(text).map(|s| vec![s]).map_err(located)
    }
}

fn big(x: BigUint) -> Value {
    match x.to_u64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn distinct(ids: impl Iterator<Item = u32>) -> usize {
    ids.collect::<HashSet<_>>().len()
}

fn size_of(bits: &FixedBitSet) -> usize {
    bits.count_ones(..)
}

/// The JSON report for one context.
pub fn analyze_report(ctx: &SandwichContext, options: &SpecOptions) -> Result<Value, SandwichError> {
    let ps = ctx.p_sets();
    let reg = ctx.regular_elements();
    let g = ctx.sandwich_green();
    let classes: Vec<Value> = g
        .regular_d
        .iter()
        .map(|(q, members)| {
            let rc = distinct(members.iter().map(|&i| g.r[i]));
            let lc = distinct(members.iter().map(|&i| g.l[i]));
            json!({
                "q": q,
                "dSize": members.len(),
                "rClasses": rc,
                "lClasses": lc,
                "hSize": members.len() / (rc * lc),
                "rHatClasses": distinct(members.iter().filter_map(|&i| g.r_hat[i])),
                "lHatClasses": distinct(members.iter().filter_map(|&i| g.l_hat[i])),
            })
        })
        .collect();
    let d_total = distinct(g.d.iter().copied());
    let inv = ctx.inverse_sets();
    let maximal = ctx.maximal_j_classes();
    let egen = ctx.idempotent_generated()?;

    let mi_limit = options.mi_limit.unwrap_or(DEFAULT_MI_LIMIT);
    let mi = if !reg.is_empty() && reg.len() <= mi_limit {
        let oracle = ctx.regular_semigroup()?;
        let s = &oracle.semigroup;
        let (dominated, _) = s.is_mi_dominated()?;
        json!({ "dominated": dominated, "midIdentities": s.mid_identities().len() })
    } else {
        Value::Null
    };

    let mut ideals = Vec::new();
    for q in ctx.admissible_ranks() {
        if ctx.regular_d_class(q).is_empty() {
            continue;
        }
        let status = ctx.ideal_idempotent_status(q)?;
        ideals.push(json!({
            "q": q,
            "size": ctx.ideal(q)?.len(),
            "isEGenerated": status.is_e_generated,
            "byTopClass": status.by_top_class,
        }));
    }

    let mut report = json!({
        "schema": REPORT_SCHEMA,
        "tag": ctx.tag,
        "m": ctx.m,
        "n": ctx.n,
        "sigma": ctx.sigma.to_text(),
        "r": ctx.r,
        "homsetSize": ctx.len(),
        "pSets": {
            "p1": size_of(&ps.p1),
            "p2": size_of(&ps.p2),
            "p3": size_of(&ps.p3),
            "p": size_of(&ps.p),
        },
        "regSize": reg.len(),
        "regularClasses": classes,
        "nonregularDClasses": d_total - g.regular_d.len(),
        "idempotentCount": ctx.idempotents().len(),
        "inverseSets": {
            "pre": inv.pre.len(),
            "post": inv.post.len(),
            "v": inv.v.len(),
            "ri": inv.ri.len(),
            "li": inv.li.len(),
        },
        "maximalClasses": {
            "trivial": maximal.trivial.len(),
            "nontrivial": maximal.nontrivial.as_ref().map(Vec::len),
        },
        "minimalIdealSize": ctx.minimal_ideal().len(),
        "idempotentGenerated": {
            "size": size_of(&egen.members),
            "psiPreimageSize": size_of(&egen.psi_preimage),
            "closedFormSize": egen.closed_form.as_ref().map(size_of),
            "consistent": egen.consistent(),
        },
        "miDomination": mi,
        "ideals": ideals,
    });
    if ctx.tag == CategoryTag::B {
        if let Ok(p) = BrauerParams::new(ctx.m, ctx.n, ctx.r) {
            let e = brauer::e_gen_ranks(p);
            let ideal_ranks: Vec<Value> = p
                .ranks()
                .filter(|&q| q < p.r)
                .map(|q| json!({ "q": q, "rank": big(brauer::ideal_rank(p, q).expect("q < r")) }))
                .collect();
            report["brauer"] = json!({
                "regSize": big(brauer::reg_size(p)),
                "idempotentCount": big(brauer::idempotent_count(p)),
                "sandwichRank": big(brauer::sandwich_rank(p)),
                "regRank": big(brauer::reg_rank(p)),
                "eGenRank": big(e.rank),
                "eGenIdrank": big(e.idrank),
                "idealRanks": ideal_ranks,
            });
        }
    }
    if options.oracle {
        report["oracle"] = oracle_report(ctx)?;
    }
    Ok(report)
}

/// Theorem-derived structure against the engine semigroup on all of `K_mn`.
fn oracle_report(ctx: &SandwichContext) -> Result<Value, SandwichError> {
    let oracle = ctx.semigroup()?;
    let s = &oracle.semigroup;
    let eg = s.green();
    let len = ctx.len();
    let mut engine = vec![vec![0u32; len]; 4];
    let mut regular = FixedBitSet::with_capacity(len);
    let idem = s.idempotent_flags();
    let mut regular_d = HashSet::new();
    for (e, &flag) in idem.iter().enumerate() {
        if flag {
            regular_d.insert(eg.d[e]);
        }
    }
    let mut idempotents = Vec::new();
    for (e, &h) in oracle.to_homset.iter().enumerate() {
        engine[0][h] = eg.r[e];
        engine[1][h] = eg.l[e];
        engine[2][h] = eg.h[e];
        engine[3][h] = eg.d[e];
        regular.set(h, regular_d.contains(&eg.d[e]));
        if idem[e] {
            idempotents.push(h);
        }
    }
    idempotents.sort_unstable();
    let g = ctx.sandwich_green();
    let ours = [&g.r, &g.l, &g.h, &g.d];
    let green_agrees = (0..4).all(|k| canonical_labels(ours[k]) == canonical_labels(&engine[k]));
    let regular_agrees = regular.ones().eq(ctx.p_sets().p.ones());
    Ok(json!({
        "engineSize": s.len(),
        "greenAgrees": green_agrees,
        "regularAgrees": regular_agrees,
        "idempotentsAgree": idempotents == ctx.idempotents(),
    }))
}

fn oracle_failed(report: &Value) -> bool {
    report
        .get("oracle")
        .and_then(Value::as_object)
        .map_or(false, |o| o.values().any(|v| v == &Value::Bool(false)))
}

/// DOT eggbox of the engine semigroup, D-classes labelled `D<rank>`.
pub fn eggbox_dot(ctx: &SandwichContext, regular_only: bool) -> Result<String, SandwichError> {
    let oracle = ctx.semigroup()?;
    let keep = regular_only.then(|| {
        let mut k = FixedBitSet::with_capacity(oracle.semigroup.len());
        for (e, &h) in oracle.to_homset.iter().enumerate() {
            k.set(e, ctx.is_regular(h));
        }
        k
    });
    let egg = oracle.semigroup.eggbox_restricted(keep.as_ref(), |a, _| format!("D{}", a.rank()));
    Ok(egg.to_dot())
}

/// Index classes under isomorphism, and under isomorphism or anti-isomorphism.
pub fn classify_iso(contexts: &[SandwichContext]) -> Result<(Vec<Vec<usize>>, Vec<Vec<usize>>), SandwichError> {
    let engines: Vec<_> = contexts.iter().map(|c| c.semigroup()).collect::<Result<_, _>>()?;
    let limit = max_elements();
    let group = |with_anti: bool| -> Result<Vec<Vec<usize>>, SandwichError> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        'next: for (i, e) in engines.iter().enumerate() {
            for class in classes.iter_mut() {
                let rep = &engines[class[0]].semigroup;
                if e.semigroup.isomorphic(rep, false, limit)?
                    || (with_anti && e.semigroup.isomorphic(rep, true, limit)?)
                {
                    class.push(i);
                    continue 'next;
                }
            }
            classes.push(vec![i]);
        }
        Ok(classes)
    };
    Ok((group(false)?, group(true)?))
}

fn write_rows(rows: &[VerifyRow], format: ReportFormat, out: &mut dyn Write) -> Result<(), CliError> {
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in rows {
                w.serialize(row).map_err(|e| match e.into_kind() {
                    csv::ErrorKind::Io(io) => CliError::from(io),
                    other => CliError::Usage(format!("{other:?}")),
                })?;
            }
            w.flush()?;
        }
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, rows).map_err(|e| CliError::Usage(e.to_string()))?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn parse_partition(label: &str, text: &str) -> Result<Partition, CliError> {
    text.parse().map_err(|e| match e {
        DiagramError::Parse { column, message } => CliError::Usage(format!("{label}: column {column}: {message}")),
        other => CliError::Usage(format!("{label}: {other}")),
    })
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Compose { left, right, json } => {
            let a = parse_partition("left", &left)?;
            let b = parse_partition("right", &right)?;
            let ab = a.compose(&b).map_err(|e| CliError::Usage(e.to_string()))?;
            if json {
                writeln!(out, "{}", serde_json::to_string(&ab).expect("partitions serialize"))?;
            } else {
                writeln!(out, "{ab}")?;
            }
        }
        Command::Enumerate { tag, m, n, count, bound } => {
            let h = enumerate(tag, m, n, bound.unwrap_or_else(|| homsets::default_bound(tag)))?;
            if count {
                writeln!(out, "{}", h.len())?;
            } else {
                for a in h.elements() {
                    writeln!(out, "{a}")?;
                }
            }
        }
        Command::Analyze { spec, oracle } => {
            let specs = parse_specs(&read_source(&spec)?)?;
            let mut reports = Vec::new();
            for s in &specs {
                let mut options = s.options.clone();
                options.oracle |= oracle;
                for ctx in s.contexts()? {
                    reports.push(analyze_report(&ctx, &options)?);
                }
            }
            let failed = reports.iter().any(oracle_failed);
            let doc = if reports.len() == 1 { reports.pop().unwrap() } else { Value::Array(reports) };
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
            if failed {
                return Err(CliError::Failed("oracle disagreement".into()));
            }
        }
        Command::Eggbox { spec, regular_only, out_dir } => {
            let specs = parse_specs(&read_source(&spec)?)?;
            let mut k = 0;
            if let Some(dir) = &out_dir {
                fs::create_dir_all(dir)?;
            }
            for s in &specs {
                for ctx in s.contexts()? {
                    let dot = eggbox_dot(&ctx, regular_only)?;
                    match &out_dir {
                        Some(dir) => {
                            let path = dir.join(format!("{}_{}x{}_{k:02}.dot", ctx.tag, ctx.m, ctx.n));
                            fs::write(&path, dot)?;
                            writeln!(out, "{}\t{}", path.display(), ctx.sigma)?;
                        }
                        None => {
                            writeln!(out, "// σ = {}", ctx.sigma)?;
                            out.write_all(dot.as_bytes())?;
                        }
                    }
                    k += 1;
                }
            }
        }
        Command::Verify { tag, max_size, report, output } => {
            let counts_size = max_size.min(homsets::default_bound(tag));
            let mut rows = homsets::verify_counts(tag, counts_size).map_err(|e| CliError::Usage(e.to_string()))?;
            if tag == CategoryTag::B {
                let bounds = VerifyBounds { max_size, ..VerifyBounds::default() };
                rows.extend(brauer::verify_suite(bounds).map_err(|e| CliError::Usage(e.to_string()))?);
            }
            match output {
                Some(path) => {
                    let mut f = fs::File::create(&path)?;
                    write_rows(&rows, report, &mut f)?;
                }
                None => write_rows(&rows, report, out)?,
            }
            let failures = rows.iter().filter(|r| !r.matched).count();
            writeln!(err, "{} rows, {failures} mismatches", rows.len())?;
            if failures > 0 {
                return Err(CliError::Failed(format!("{failures} mismatches")));
            }
        }
        Command::ClassifyIso { spec } => {
            let specs = parse_specs(&read_source(&spec)?)?;
            let mut contexts = Vec::new();
            for s in &specs {
                contexts.extend(s.contexts()?);
            }
            let (iso, iso_anti) = classify_iso(&contexts)?;
            let doc = json!({
                "contexts": contexts.iter().map(|c| json!({
                    "tag": c.tag, "m": c.m, "n": c.n, "sigma": c.sigma.to_text(),
                })).collect::<Vec<_>>(),
                "isoClasses": iso,
                "isoAntiClasses": iso_anti,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
        }
    }
    Ok(())
}

/// Run with explicit streams; returns the exit code.
pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            if let CliError::Usage(msg) | CliError::Failed(msg) = &e {
                let _ = writeln!(err, "error: {msg}");
            }
            e.code()
        }
    }
}

pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
