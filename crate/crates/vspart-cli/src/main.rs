//! Command-line front end: judge partition types, print the numeric
//! bounds, dump section polytopes, build the explicit partitions, and
//! re-verify partition files.
//!
//! Exit codes: 0 completed, 1 usage or data error, 2 a verdict was left
//! unknown by the node budget.

use std::io::Read as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde_json::json;

use vspart::bounds::{all_reports, BoundReport};
use vspart::construct::{double_switch, field_spread, refine, switch_spread, SwitchParams};
use vspart::derive::{
    classify, FeasibilityContext, FeasibilityVerdict, FeasibleOptions, Judgment,
};
use vspart::gfq::prime_power;
use vspart::hyperplane::build_polytope;
use vspart::intfeas::DEFAULT_NODE_BUDGET;
use vspart::jsonio::{partition_from_json, partition_to_json, system_to_json, TypeFile};
use vspart::partition::{
    check_dimension, check_first_packing, check_sufficiency, check_tail, size_bounds,
    ExplicitPartition, PartitionType, Verdict,
};
use vspart::{Error, Result};

#[derive(Parser)]
#[command(
    name = "vspart",
    version,
    about = "feasibility and construction of vector space partition types"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every necessary condition on one type and judge it
    Check(CheckArgs),
    /// Closed-form deficit and deficiency reports for one type
    Bounds(BoundsArgs),
    /// Dump the section-type constraint system as JSON
    Polytope(PolytopeArgs),
    /// Build an explicit partition and emit or summarize it
    Construct(ConstructArgs),
    /// Re-verify a partition JSON file (or - for stdin) vector by vector
    Verify(VerifyArgs),
    /// Judge every packing- and dimension-valid type of V(n,q)
    Classify(ClassifyArgs),
}

#[derive(Args)]
struct TypeSpec {
    /// Ambient dimension n of V(n,q)
    #[arg(long)]
    n: u32,
    /// Field size q, a prime power
    #[arg(long)]
    q: u64,
    /// Member counts, highest dimension first
    #[arg(long = "type", value_name = "M_K,...,M_1")]
    ty: String,
}

impl TypeSpec {
    fn parse(&self) -> Result<PartitionType> {
        if prime_power(self.q).is_none() {
            return Err(Error::NotPrimePower(self.q));
        }
        let counts = self
            .ty
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::BadParameter(format!("bad count {s:?} in --type")))
            })
            .collect::<Result<Vec<_>>>()?;
        PartitionType::from_descending(self.n, self.q, &counts)
    }
}

#[derive(Args)]
struct SearchOpts {
    /// Skip the deficit bounds in the pipeline
    #[arg(long)]
    no_bounds: bool,
    /// Node budget per lattice search (or VSPART_MAX_NODES)
    #[arg(long, value_name = "NODES")]
    max_nodes: Option<u64>,
    /// Recursion depth cutoff; unlimited when absent
    #[arg(long, value_name = "DEPTH")]
    max_depth: Option<u32>,
    /// Depth of the tuple constraint rows in each polytope
    #[arg(long, value_name = "DEPTH", default_value_t = 2)]
    lemma_depth: u32,
}

impl SearchOpts {
    fn to_options(&self) -> Result<FeasibleOptions> {
        Ok(FeasibleOptions {
            use_bounds: !self.no_bounds,
            max_depth: self.max_depth,
            node_budget: self.budget()?,
            tuple_depth: self.lemma_depth,
        })
    }

    fn budget(&self) -> Result<u64> {
        if let Some(b) = self.max_nodes {
            return Ok(b);
        }
        match std::env::var("VSPART_MAX_NODES") {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::BadParameter(format!("VSPART_MAX_NODES: bad value {s:?}"))),
            Err(_) => Ok(DEFAULT_NODE_BUDGET),
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    spec: TypeSpec,
    #[command(flatten)]
    search: SearchOpts,
    /// Emit one JSON object instead of the report lines
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    spec: TypeSpec,
    /// Emit a JSON array instead of the report lines
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PolytopeArgs {
    #[command(flatten)]
    spec: TypeSpec,
    /// Depth of the tuple constraint rows
    #[arg(long, value_name = "DEPTH", default_value_t = 2)]
    lemma_depth: u32,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(subcommand)]
    which: ConstructKind,
}

#[derive(Subcommand)]
enum ConstructKind {
    /// Spread of t-dimensional subspaces of V(kt,q) from the field tower
    Bu(BuArgs),
    /// Subfield switching: replace coset classes by a mixed family
    C1(C1Args),
    /// Two-level switching in V(8,q) over GF(q^8) > GF(q^4) > GF(q^2)
    C2(C2Args),
}

#[derive(Args)]
struct EmitArgs {
    /// Refine the first member to this dimension plus lines (repeatable)
    #[arg(long = "refine", value_name = "DIM")]
    refine: Vec<u32>,
    /// Emit the partition as JSON instead of a summary line
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BuArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    t: u32,
    #[command(flatten)]
    emit: EmitArgs,
}

#[derive(Args)]
struct C1Args {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    t: u32,
    /// Rank of the switched subspace A over GF(q^t)
    #[arg(long)]
    l: u32,
    /// Dimension of the replacement subspace W
    #[arg(long = "dimw")]
    dim_w: u32,
    #[command(flatten)]
    emit: EmitArgs,
}

#[derive(Args)]
struct C2Args {
    #[arg(long)]
    q: u64,
    #[command(flatten)]
    emit: EmitArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Partition JSON file, or - for stdin
    file: String,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Ambient dimension n of V(n,q)
    #[arg(long)]
    n: u32,
    /// Field size q, a prime power
    #[arg(long)]
    q: u64,
    #[command(flatten)]
    search: SearchOpts,
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes, like any other filter.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Check(args) => run_check(args),
        Command::Bounds(args) => run_bounds(args),
        Command::Polytope(args) => run_polytope(args),
        Command::Construct(args) => run_construct(args),
        Command::Verify(args) => run_verify(args),
        Command::Classify(args) => run_classify(args),
    }
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Fails => "fails",
        Verdict::NotApplicable => "not applicable",
    }
}

fn packing_sides(ty: &PartitionType) -> (BigUint, BigUint) {
    let q = BigUint::from(ty.q());
    let mut lhs = BigUint::ZERO;
    for d in 1..=ty.max_dim() {
        lhs += BigUint::from(ty.count(d)) * (q.pow(d) - 1u32);
    }
    (lhs, q.pow(ty.n()) - 1u32)
}

struct ConditionLine {
    name: &'static str,
    verdict: Verdict,
    witness: String,
}

fn condition_lines(ty: &PartitionType) -> Vec<ConditionLine> {
    let (lhs, rhs) = packing_sides(ty);
    let packing = ConditionLine {
        name: "first packing",
        verdict: if check_first_packing(ty) { Verdict::Holds } else { Verdict::Fails },
        witness: format!("sum of m_d (q^d - 1) is {lhs}, q^n - 1 is {rhs}"),
    };
    let dimension = ConditionLine {
        name: "dimension",
        verdict: if check_dimension(ty) { Verdict::Holds } else { Verdict::Fails },
        witness: "any two members must fit in the ambient space".into(),
    };
    let tail = check_tail(ty);
    let size = size_bounds(ty);
    vec![
        packing,
        dimension,
        ConditionLine {
            name: "tail",
            verdict: tail.verdict,
            witness: tail.witness,
        },
        ConditionLine {
            name: "size",
            verdict: size.verdict,
            witness: size.witness,
        },
    ]
}

fn judgment_fields(v: &FeasibilityVerdict) -> (&'static str, Option<String>) {
    match &v.judgment {
        Judgment::Feasible => ("feasible", None),
        Judgment::Infeasible(r) => ("infeasible", Some(r.to_string())),
        Judgment::Unknown => ("unknown", None),
    }
}

fn final_line(v: &FeasibilityVerdict) -> String {
    match &v.judgment {
        Judgment::Feasible => {
            if v.ty.n() <= 2 {
                "FEASIBLE (base case)".into()
            } else {
                format!("FEASIBLE (green point, depth {})", v.depth)
            }
        }
        Judgment::Infeasible(r) => format!("INFEASIBLE ({r})"),
        Judgment::Unknown => "UNKNOWN (node budget exhausted)".into(),
    }
}

fn bound_status(r: &BoundReport) -> &'static str {
    if !r.applicable {
        "not applicable"
    } else {
        match r.violated {
            Some(true) => "violated",
            Some(false) => "satisfied",
            None => "report",
        }
    }
}

fn bound_json(r: &BoundReport) -> serde_json::Value {
    json!({
        "name": r.name,
        "applicable": r.applicable,
        "value": r.value.as_ref().map(|v| v.to_string()),
        "implied_lower": r.implied_lower.as_ref().map(|v| v.to_string()),
        "violated": r.violated,
        "detail": r.detail,
    })
}

fn run_check(args: &CheckArgs) -> Result<u8> {
    let ty = args.spec.parse()?;
    let ctx = FeasibilityContext::new(args.search.to_options()?);
    let verdict = ctx.feasible(&ty)?;
    let conditions = condition_lines(&ty);
    let sufficient = check_sufficiency(&ty);
    let reports: Vec<BoundReport> = if args.search.no_bounds {
        Vec::new()
    } else {
        all_reports(&ty)
            .into_iter()
            .filter(|r| r.violated.is_some())
            .collect()
    };

    if args.json {
        let (judgment, reason) = judgment_fields(&verdict);
        let out = json!({
            "type": TypeFile::from_type(&ty),
            "display": ty.to_string(),
            "conditions": conditions.iter().map(|c| json!({
                "condition": c.name,
                "verdict": verdict_word(c.verdict),
                "witness": c.witness,
            })).collect::<Vec<_>>(),
            "sufficiency": sufficient,
            "bounds": reports.iter().map(bound_json).collect::<Vec<_>>(),
            "judgment": judgment,
            "reason": reason,
            "depth": verdict.depth,
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("{ty} in V({},{})", ty.n(), ty.q());
        for c in &conditions {
            println!("  {}: {} ({})", c.name, verdict_word(c.verdict), c.witness);
        }
        if sufficient {
            println!("  sufficiency: met, the type is realizable outright");
        }
        for r in &reports {
            println!("  {}: {} ({})", r.name, bound_status(r), r.detail);
        }
        println!("{}", final_line(&verdict));
    }
    Ok(if verdict.judgment == Judgment::Unknown { 2 } else { 0 })
}

fn run_bounds(args: &BoundsArgs) -> Result<u8> {
    let ty = args.spec.parse()?;
    let reports = all_reports(&ty);
    if args.json {
        let out: Vec<_> = reports.iter().map(bound_json).collect();
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("{ty} in V({},{})", ty.n(), ty.q());
        for r in &reports {
            println!("  {}: {} ({})", r.name, bound_status(r), r.detail);
        }
    }
    Ok(0)
}

fn run_polytope(args: &PolytopeArgs) -> Result<u8> {
    let ty = args.spec.parse()?;
    let sys = build_polytope(&ty, args.lemma_depth)?;
    println!("{}", system_to_json(&sys)?);
    Ok(0)
}

fn run_construct(args: &ConstructArgs) -> Result<u8> {
    let (mut p, emit) = match &args.which {
        ConstructKind::Bu(a) => (field_spread(a.q, a.k, a.t)?, &a.emit),
        ConstructKind::C1(a) => {
            let params = SwitchParams {
                q: a.q,
                k: a.k,
                t: a.t,
                l: a.l,
                dim_w: a.dim_w,
            };
            (switch_spread(&params)?, &a.emit)
        }
        ConstructKind::C2(a) => (double_switch(a.q)?, &a.emit),
    };
    for &d in &emit.refine {
        p = refine(&p, 0, d)?;
    }
    if emit.json {
        println!("{}", partition_to_json(&p)?);
    } else {
        summarize(&p)?;
    }
    Ok(0)
}

fn summarize(p: &ExplicitPartition) -> Result<()> {
    let ty = p.observed_type()?;
    println!(
        "OK, type {ty}, {} members in V({},{})",
        p.members().len(),
        p.n(),
        p.q()
    );
    Ok(())
}

fn run_verify(args: &VerifyArgs) -> Result<u8> {
    let text = if args.file == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        std::fs::read_to_string(&args.file)?
    };
    let p = partition_from_json(&text)?;
    let report = p.verify()?;
    if report.valid {
        println!("OK, type {}", report.observed.expect("valid partitions have a type"));
        Ok(0)
    } else {
        println!("INVALID ({})", report.detail);
        Ok(1)
    }
}

fn run_classify(args: &ClassifyArgs) -> Result<u8> {
    if prime_power(args.q).is_none() {
        return Err(Error::NotPrimePower(args.q));
    }
    let ctx = FeasibilityContext::new(args.search.to_options()?);
    let records = classify(args.n, args.q, &ctx)?;
    let mut unknown = false;
    for r in &records {
        let (judgment, reason) = judgment_fields(&r.verdict);
        unknown |= r.verdict.judgment == Judgment::Unknown;
        let line = json!({
            "type": TypeFile::from_type(&r.verdict.ty),
            "display": r.verdict.ty.to_string(),
            "judgment": judgment,
            "reason": reason,
            "depth": r.verdict.depth,
            "published": r.published,
        });
        println!("{line}");
    }
    Ok(if unknown { 2 } else { 0 })
}
