//! The `capgroups` command line: classify, decide, build and verify witnesses,
//! sweep the classification, and export cross-check scripts.
//!
//! [`run`] is the whole program; the binary only forwards `argv` and the
//! standard streams to it.

use std::fmt::Write as _;
use std::io::Write;

use capgroups::capability::{
    self, membership_congruence_scan, LemmaContext, VerifyError, NON_CAPABILITY_DISCLAIMER,
};
use capgroups::class2::{Gen, GroupType, Relation};
use capgroups::oracle::{self, OracleError, DEFAULT_MAX_ORDER};
use capgroups::{
    build_witness, decide, model, validate, FreeElt, NilGroup, RawParams, Report, TypeParams,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Column names of the sweep table.
pub const SWEEP_HEADER: [&str; 9] = [
    "type", "alpha", "beta", "gamma", "sigma", "order", "verdict", "clause", "verified",
];

#[derive(Parser, Debug)]
#[command(
    name = "capgroups",
    version,
    about = "Capability of 2-generator 2-groups of class two"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Largest group the brute-force checks may enumerate.
    #[arg(long, env = "CAPGROUPS_MAX_ORDER", default_value_t = DEFAULT_MAX_ORDER, global = true)]
    max_order: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Tsv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate parameters and describe the presented group.
    Classify(ParamArgs),
    /// Decide capability.
    Decide(ParamArgs),
    /// Print the witness group for a capable group.
    Witness(ParamArgs),
    /// Build the witness and check K/Z(K) against the group.
    Verify(ParamArgs),
    /// Decide and verify every tuple with exponents up to a bound.
    Sweep {
        #[arg(long, default_value_t = 2)]
        max_alpha: u32,
    },
    /// Run a short battery of internal consistency checks.
    Selftest,
    /// Emit a GAP script that re-checks the verified witness.
    ExportCas(ParamArgs),
}

#[derive(Args, Debug)]
struct ParamArgs {
    /// Group type: i, ii or iii.
    #[arg(long = "type")]
    kind: String,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    sigma: Option<i64>,
}

impl ParamArgs {
    fn params(&self) -> Result<TypeParams, String> {
        let kind = self.kind.parse::<GroupType>().map_err(|e| e.to_string())?;
        validate(&RawParams {
            kind: Some(kind),
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
            sigma: self.sigma,
        })
        .map_err(|e| e.to_string())
    }
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    format: Format,
    max_order: u64,
}

/// Runs the program on `argv` (including the program name) and returns the
/// exit code: 0 success, 1 verification failure, 2 invalid input.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let mut ctx = Ctx {
        out,
        err,
        format: cli.format,
        max_order: cli.max_order,
    };
    let result = match &cli.command {
        Command::Classify(p) => with_params(&mut ctx, p, classify),
        Command::Decide(p) => with_params(&mut ctx, p, decide_cmd),
        Command::Witness(p) => with_params(&mut ctx, p, witness),
        Command::Verify(p) => with_params(&mut ctx, p, verify),
        Command::ExportCas(p) => with_params(&mut ctx, p, export_cas),
        Command::Sweep { max_alpha } => sweep_cmd(&mut ctx, *max_alpha),
        Command::Selftest => selftest(&mut ctx),
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(ctx.err, "error: writing output: {e}");
        EXIT_FAIL
    })
}

type CmdResult = std::io::Result<i32>;

fn with_params(
    ctx: &mut Ctx,
    p: &ParamArgs,
    f: fn(&mut Ctx, &TypeParams) -> CmdResult,
) -> CmdResult {
    match p.params() {
        Ok(params) => f(ctx, &params),
        Err(msg) => {
            writeln!(ctx.err, "error: {msg}")?;
            Ok(EXIT_USAGE)
        }
    }
}

fn param_cells(p: &TypeParams) -> [String; 5] {
    let [a, b, g, s] = p
        .parts()
        .map(|x| x.map_or("-".to_string(), |v| v.to_string()));
    [p.kind().as_str().to_string(), a, b, g, s]
}

fn write_tsv(out: &mut dyn Write, rows: &[Vec<String>]) -> std::io::Result<()> {
    for r in rows {
        writeln!(out, "{}", r.join("\t"))?;
    }
    Ok(())
}

fn write_columns(out: &mut dyn Write, rows: &[Vec<String>]) -> std::io::Result<()> {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    for r in rows {
        let mut line = String::new();
        for (c, cell) in r.iter().enumerate() {
            if c + 1 < r.len() {
                let _ = write!(line, "{cell:<w$} ", w = widths[c]);
            } else {
                line.push_str(cell);
            }
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

fn write_table(ctx: &mut Ctx, rows: &[Vec<String>]) -> std::io::Result<()> {
    match ctx.format {
        Format::Tsv => write_tsv(ctx.out, rows),
        Format::Text => write_columns(ctx.out, rows),
    }
}

fn classify(ctx: &mut Ctx, p: &TypeParams) -> CmdResult {
    let g = model(p);
    if ctx.format == Format::Tsv {
        let mut row = param_cells(p).to_vec();
        row.push(g.order().to_string());
        let header = SWEEP_HEADER[..6].iter().map(|s| s.to_string()).collect();
        write_tsv(ctx.out, &[header, row])?;
        return Ok(EXIT_OK);
    }
    writeln!(ctx.out, "{p}: order 2^{} = {}", p.order_log2(), g.order())?;
    let rels: Vec<String> = g.relations().iter().map(Relation::to_string).collect();
    writeln!(ctx.out, "relations: {}", rels.join(", "))?;
    let [oa, ob, oc] = g.generator_orders();
    writeln!(ctx.out, "orders: |a|={oa} |b|={ob} |[a,b]|={oc}")?;
    if g.order() <= ctx.max_order {
        let fp = g.fingerprint();
        let ab: Vec<String> = fp
            .abelian_invariants
            .iter()
            .map(|e| format!("C{}", 1u64 << e))
            .collect();
        writeln!(
            ctx.out,
            "exponent={} |Z|={} |G'|={} G/G'={}",
            fp.exponent,
            fp.center_order,
            fp.derived_order,
            ab.join(" x ")
        )?;
    }
    Ok(EXIT_OK)
}

fn decide_cmd(ctx: &mut Ctx, p: &TypeParams) -> CmdResult {
    let v = decide(p);
    if ctx.format == Format::Tsv {
        let mut row = param_cells(p).to_vec();
        row.push(p.order().to_string());
        row.push(
            if v.capable() {
                "capable"
            } else {
                "not_capable"
            }
            .into(),
        );
        row.push(v.clause.map_or("-".into(), |c| c.to_string()));
        let header = SWEEP_HEADER[..8].iter().map(|s| s.to_string()).collect();
        write_tsv(ctx.out, &[header, row])?;
        return Ok(EXIT_OK);
    }
    writeln!(ctx.out, "{v}")?;
    writeln!(ctx.out, "{p}: {}", v.rationale())?;
    if !v.capable() {
        writeln!(ctx.out, "note: {NON_CAPABILITY_DISCLAIMER}")?;
    }
    Ok(EXIT_OK)
}

fn witness(ctx: &mut Ctx, p: &TypeParams) -> CmdResult {
    let w = match build_witness(p) {
        Ok(w) => w,
        Err(e) => {
            writeln!(ctx.err, "error: {e}")?;
            return Ok(EXIT_FAIL);
        }
    };
    let k = match NilGroup::build(w.ambient.clone()) {
        Ok(k) => k,
        Err(e) => {
            writeln!(ctx.err, "error: witness does not build: {e}")?;
            return Ok(EXIT_FAIL);
        }
    };
    writeln!(ctx.out, "target: {} clause ({})", w.target, w.clause)?;
    writeln!(ctx.out, "K = {}", w.ambient)?;
    writeln!(
        ctx.out,
        "|K|={} lattice={:?}",
        k.order(),
        k.lattice().basis()
    )?;
    if k.order() > ctx.max_order {
        writeln!(
            ctx.out,
            "note: |K| exceeds --max-order {}; verify uses a reduced witness",
            ctx.max_order
        )?;
    }
    Ok(EXIT_OK)
}

fn verify_report(ctx: &mut Ctx, p: &TypeParams) -> std::io::Result<Result<Report, i32>> {
    match capability::verify(p, ctx.max_order) {
        Ok(r) => Ok(Ok(r)),
        Err(VerifyError::Oracle(OracleError::BoundExceeded { order, bound })) => {
            writeln!(
                ctx.err,
                "error: witness of order {order} exceeds --max-order {bound}; verification not run"
            )?;
            Ok(Err(EXIT_FAIL))
        }
        Err(e) => {
            writeln!(ctx.err, "error: {e}")?;
            Ok(Err(EXIT_FAIL))
        }
    }
}

fn verify(ctx: &mut Ctx, p: &TypeParams) -> CmdResult {
    let report = match verify_report(ctx, p)? {
        Ok(r) => r,
        Err(code) => return Ok(code),
    };
    writeln!(ctx.out, "{report}")?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAIL })
}

/// One row of the sweep table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub params: TypeParams,
    pub capable: bool,
    pub clause: Option<char>,
    pub verified: Verification,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verification {
    Pass,
    Fail(String),
    /// Not capable; nothing to verify.
    NotApplicable,
    /// The witness exceeds the enumeration budget.
    Skipped(String),
}

impl SweepRow {
    pub fn cells(&self) -> Vec<String> {
        let mut row = param_cells(&self.params).to_vec();
        row.push(self.params.order().to_string());
        row.push(
            if self.capable {
                "capable"
            } else {
                "not_capable"
            }
            .into(),
        );
        row.push(self.clause.map_or("-".into(), |c| c.to_string()));
        row.push(
            match self.verified {
                Verification::Pass => "PASS",
                Verification::Fail(_) => "FAIL",
                Verification::NotApplicable => "n/a",
                Verification::Skipped(_) => "skipped",
            }
            .into(),
        );
        row
    }
}

/// Decides and verifies every valid tuple with exponents at most `max_alpha`
/// (`γ ≤ max_alpha` for type iii). Rows are computed in parallel and
/// returned in parameter order.
pub fn sweep(max_alpha: u32, max_order: u64) -> Vec<SweepRow> {
    TypeParams::all_bounded(max_alpha)
        .into_par_iter()
        .map(|p| {
            let v = decide(&p);
            let verified = if !v.capable() {
                Verification::NotApplicable
            } else {
                match capability::verify(&p, max_order) {
                    Ok(r) if r.passed() => Verification::Pass,
                    Ok(r) => Verification::Fail(r.failure.unwrap_or_default()),
                    Err(VerifyError::Oracle(e @ OracleError::BoundExceeded { .. })) => {
                        Verification::Skipped(e.to_string())
                    }
                    Err(e) => Verification::Fail(e.to_string()),
                }
            };
            SweepRow {
                params: p,
                capable: v.capable(),
                clause: v.clause.map(|c| c.letter()),
                verified,
            }
        })
        .collect()
}

/// Parses the parameter columns of a sweep row back into validated
/// parameters.
pub fn parse_row(cells: &[&str]) -> Result<TypeParams, String> {
    if cells.len() < 5 {
        return Err(format!("expected at least 5 columns, got {}", cells.len()));
    }
    let num = |s: &str| -> Result<Option<i64>, String> {
        if s == "-" {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|e| format!("{s:?}: {e}"))
        }
    };
    let kind = cells[0].parse::<GroupType>().map_err(|e| e.to_string())?;
    validate(&RawParams {
        kind: Some(kind),
        alpha: num(cells[1])?,
        beta: num(cells[2])?,
        gamma: num(cells[3])?,
        sigma: num(cells[4])?,
    })
    .map_err(|e| e.to_string())
}

fn sweep_cmd(ctx: &mut Ctx, max_alpha: u32) -> CmdResult {
    let rows = sweep(max_alpha, ctx.max_order);
    let mut table = vec![SWEEP_HEADER
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()];
    let mut failed = false;
    for r in &rows {
        match &r.verified {
            Verification::Skipped(why) => {
                writeln!(ctx.err, "warning: {} left unverified: {why}", r.params)?;
            }
            Verification::Fail(why) => {
                failed = true;
                writeln!(ctx.err, "error: {} failed verification: {why}", r.params)?;
            }
            _ => {}
        }
        table.push(r.cells());
    }
    write_table(ctx, &table)?;
    Ok(if failed { EXIT_FAIL } else { EXIT_OK })
}

type Check = Box<dyn Fn() -> bool + Sync>;

fn selftest(ctx: &mut Ctx) -> CmdResult {
    let bound = ctx.max_order;
    let named =
        |p: TypeParams, clause: Option<char>| decide(&p).clause.map(|c| c.letter()) == clause;
    let checks: Vec<(&str, Check)> = vec![
        (
            "I(1,1,1) capable (a), 16-element witness",
            Box::new(move || {
                let p = TypeParams::i(1, 1, 1).unwrap();
                named(p, Some('a'))
                    && capability::verify(&p, bound)
                        .is_ok_and(|r| r.passed() && r.k_order == 16 && r.center_order == 2)
            }),
        ),
        (
            "III(1) not capable",
            Box::new(move || named(TypeParams::iii(1).unwrap(), None)),
        ),
        (
            "I(3,2,2) capable (b)",
            Box::new(move || named(TypeParams::i(3, 2, 2).unwrap(), Some('b'))),
        ),
        (
            "II(3,2,2,1) capable (d), |N| = 2",
            Box::new(move || {
                let p = TypeParams::ii(3, 2, 2, 1).unwrap();
                named(p, Some('d'))
                    && capability::verify(&p, bound).is_ok_and(|r| r.passed() && r.n_order() == 2)
            }),
        ),
        (
            "centers agree with brute force",
            Box::new(move || {
                let groups = [
                    NilGroup::product(1, 1),
                    NilGroup::product(2, 1),
                    NilGroup::product(2, 2),
                    NilGroup::product(3, 2),
                    NilGroup::with_central_powers(3, 3, 2),
                ];
                groups.into_iter().all(|g| {
                    let Ok(g) = g else { return false };
                    let Ok(t) = oracle::enumerate(g.clone(), bound) else {
                        return false;
                    };
                    let brute = oracle::brute_center(&t);
                    let span = g.span(g.center().generators());
                    span.len() == brute.order()
                        && span
                            .iter()
                            .all(|z| brute.contains(oracle::FiniteGroup::index_of(&g, z)))
                })
            }),
        ),
        (
            "sweep up to exponent 2 verifies",
            Box::new(move || {
                sweep(2, bound)
                    .iter()
                    .all(|r| matches!(r.verified, Verification::Pass | Verification::NotApplicable))
            }),
        ),
        (
            "membership congruences on K(3,3,2), sigma = 1",
            Box::new(|| membership_congruence_scan(3, 2, 1).is_ok_and(|s| s.clean())),
        ),
        (
            "lemma checkers on K(2,2,1)",
            Box::new(move || {
                NilGroup::with_central_powers(2, 2, 1)
                    .ok()
                    .and_then(|k| LemmaContext::new(k, bound).ok())
                    .is_some_and(|c| c.scan().clean())
            }),
        ),
    ];
    let results: Vec<bool> = checks.par_iter().map(|(_, f)| f()).collect();
    for ((name, _), ok) in checks.iter().zip(&results) {
        writeln!(ctx.out, "{} {name}", if *ok { "PASS" } else { "FAIL" })?;
    }
    Ok(if results.iter().all(|&b| b) {
        EXIT_OK
    } else {
        EXIT_FAIL
    })
}

fn gap_gen(g: Gen) -> &'static str {
    match g {
        Gen::A => "a",
        Gen::B => "b",
        Gen::C => "Comm(a,b)",
        Gen::CA => "Comm(Comm(a,b),a)",
        Gen::CB => "Comm(Comm(a,b),b)",
    }
}

fn gap_side(side: &[(Gen, i64)]) -> String {
    if side.is_empty() {
        return "One(F)".into();
    }
    side.iter()
        .map(|&(g, e)| {
            if e == 1 {
                gap_gen(g).to_string()
            } else {
                format!("{}^{e}", gap_gen(g))
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn gap_relator(r: &Relation) -> String {
    if r.rhs.is_empty() {
        gap_side(&r.lhs)
    } else {
        format!("{}*({})^-1", gap_side(&r.lhs), gap_side(&r.rhs))
    }
}

fn gap_word(x: &FreeElt) -> String {
    let names = [
        "a",
        "b",
        "Comm(a,b)",
        "Comm(Comm(a,b),a)",
        "Comm(Comm(a,b),b)",
    ];
    let parts: Vec<String> = x
        .coords()
        .iter()
        .zip(names)
        .filter(|(e, _)| **e != 0)
        .map(|(e, n)| format!("{n}^{e}"))
        .collect();
    if parts.is_empty() {
        "One(F)".into()
    } else {
        parts.join("*")
    }
}

/// A GAP script that rebuilds the group and the verified witness from their
/// presentations and checks `K / Z(K) ≅ G`.
pub fn cas_script(report: &Report) -> String {
    let g = model(&report.target);
    let spec = &report.ambient;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# capgroups cross-check (GAP): {} clause ({})",
        report.target, report.clause
    );
    let _ = writeln!(s, "# K = {}", spec);
    for r in g.relations() {
        let _ = writeln!(s, "# relation: {r}");
    }
    let _ = writeln!(s, "F := FreeGroup(\"a\", \"b\");; a := F.1;; b := F.2;;");
    let g_rels: Vec<String> = g.relations().iter().map(gap_relator).collect();
    let _ = writeln!(s, "Gfp := F / [ {} ];;", g_rels.join(", "));
    let _ = writeln!(s, "G := Image(EpimorphismPGroup(Gfp, 2, 2));;");
    let mut k_rels = vec![
        format!("a^{}", 1u64 << spec.alpha),
        format!("b^{}", 1u64 << spec.beta),
    ];
    for c in ["a", "b"] {
        for d in ["a", "b"] {
            k_rels.push(format!("Comm(Comm(Comm(a,b),{c}),{d})"));
        }
    }
    k_rels.extend(spec.extra_central.iter().map(gap_word));
    let _ = writeln!(s, "Kfp := F / [ {} ];;", k_rels.join(", "));
    let _ = writeln!(s, "K := Image(EpimorphismPGroup(Kfp, 2, 3));;");
    let _ = writeln!(s, "Z := Centre(K);;");
    let _ = writeln!(s, "Q := K / Z;;");
    let checks = [
        ("Size(K)", report.k_order),
        ("Size(Z)", report.center_order),
        ("Size(G)", g.order()),
    ];
    for (expr, val) in checks {
        let _ = writeln!(s, "if {expr} <> {val} then Error(\"{expr} <> {val}\"); fi;");
    }
    let _ = writeln!(
        s,
        "if IsomorphismGroups(Q, G) = fail then Error(\"K/Z(K) is not isomorphic to G\"); fi;"
    );
    let _ = writeln!(s, "Print(\"iso=PASS\\n\");");
    s
}

fn export_cas(ctx: &mut Ctx, p: &TypeParams) -> CmdResult {
    let report = match verify_report(ctx, p)? {
        Ok(r) => r,
        Err(code) => return Ok(code),
    };
    if !report.passed() {
        writeln!(
            ctx.err,
            "error: refusing to export an unverified witness\n{report}"
        )?;
        return Ok(EXIT_FAIL);
    }
    write!(ctx.out, "{}", cas_script(&report))?;
    Ok(EXIT_OK)
}
