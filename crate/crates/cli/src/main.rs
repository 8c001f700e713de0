//! `interpres`: load structures, interpretations, and theories from files,
//! run the workbench operations, and emit human-readable or JSON reports.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage error,
//! 3 input validation error.

mod report;


use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde_json::json;

use interpres_core::hf::{
    ack_decode, ack_encode, canonical_double_iso, coded_equiv, coded_member, decode_coded_pair,
    encode_coded_pair, mostowski_collapse, CodedPair, DoubleStructure, HFSet, DEFAULT_ACK_CAP,
};
use interpres_core::interp::{
    apply, check_bi, check_mutual, check_synonymy, check_theory_interpretation, scott_reduce,
    theory_disjunction, translate, BiInterpretation, Interpretation, SignatureDoc, Theory,
};
use interpres_core::logic::{
    definable_relations, evaluate, parse_formula, Assignment, EnumLimits, Signature,
};
use interpres_core::mathias::{
    fruitful_closure_check, growth_profile, in_tower, min_depth, min_depth_vstage,
    terminal_descents, tower_b, tower_sub, vcard, zermelo_stage, TowerCap, DEFAULT_DESCENT_CAP,
};
use interpres_core::model::{
    check_congruence, find_isomorphisms, is_extensional, is_wellfounded, quotient, BinRel,
    EqRelation, FinStructure,
};

use report::Report;

#[derive(Parser)]
#[command(name = "interpres", version, about = "Interpretation workbench for finite structures")]
struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Size cap for the isomorphism oracle.
    #[arg(long, global = true, default_value_t = 8)]
    max_size: usize,
    /// Formula depth bound for enumeration.
    #[arg(long, global = true, default_value_t = 2)]
    depth: usize,
    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Bit-index cap for Ackermann coding.
    #[arg(long, global = true, default_value_t = DEFAULT_ACK_CAP)]
    ack_cap: u64,
    /// Exact/symbolic boundary for tower integers, in bits.
    #[arg(long, global = true, default_value_t = 4096)]
    tower_bits: u64,
    /// Cap on enumerated terminal descents.
    #[arg(long, global = true, default_value_t = DEFAULT_DESCENT_CAP)]
    descent_cap: u64,
    /// Cap on enumerated candidate formulas.
    #[arg(long, global = true, default_value_t = 2_000_000)]
    max_formulas: usize,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Formula parsing, evaluation, and definable-relation enumeration.
    Logic {
        #[command(subcommand)]
        cmd: LogicCmd,
    },
    /// Structure-level operations: quotients, isomorphisms, well-foundedness.
    Model {
        #[command(subcommand)]
        cmd: ModelCmd,
    },
    /// Interpretations: translation, application, composition, checks.
    Interp {
        #[command(subcommand)]
        cmd: InterpCmd,
    },
    /// Hereditarily finite sets: coding, collapse, coded pairs.
    Hf {
        #[command(subcommand)]
        cmd: HfCmd,
    },
    /// Growth bounds, profiles, and the Zermelo tower.
    Mathias {
        #[command(subcommand)]
        cmd: MathiasCmd,
    },
    /// Run the full verification suite.
    Selftest {
        /// Run a single criterion (1..=9).
        #[arg(long)]
        only: Option<usize>,
    },
}

#[derive(Args)]
struct SigSource {
    /// Compact signature, e.g. "E/2,P/1,c" (relations with arity, constants).
    #[arg(long)]
    sig: Option<String>,
    /// Take the signature from a structure file.
    #[arg(long)]
    model: Option<String>,
}

#[derive(Subcommand)]
enum LogicCmd {
    /// Parse a formula and print its canonical rendering.
    Parse {
        formula: String,
        #[command(flatten)]
        sig: SigSource,
    },
    /// Evaluate a formula in a structure.
    Eval {
        model: String,
        formula: String,
        /// Assignment for free variables, e.g. "x=0,y=2".
        #[arg(long, default_value = "")]
        assign: String,
    },
    /// Enumerate the relations definable with bounded formula depth.
    Definable {
        model: String,
        #[arg(long, default_value_t = 1)]
        arity: usize,
        /// Parameters as a comma-separated element list.
        #[arg(long, default_value = "")]
        params: String,
    },
}

#[derive(Subcommand)]
enum ModelCmd {
    /// Quotient a structure by a congruence.
    Quotient { model: String, eq: String },
    /// All isomorphisms between two structures.
    Iso { a: String, b: String },
    /// Well-foundedness of a binary relation.
    Wf {
        model: String,
        #[arg(long, default_value = "E")]
        rel: String,
    },
    /// Extensionality of a binary relation, optionally modulo an equivalence.
    Ext {
        model: String,
        #[arg(long, default_value = "E")]
        rel: String,
        #[arg(long)]
        eq: Option<String>,
    },
}

#[derive(Subcommand)]
enum InterpCmd {
    /// Translate a formula along an interpretation.
    Translate {
        interp: String,
        formula: String,
        #[arg(long)]
        sig: Option<String>,
    },
    /// Apply an interpretation to a structure and print the quotient.
    Apply { model: String, interp: String },
    /// Compose two interpretations (inner's formulas through outer's).
    Compose {
        outer: String,
        inner: String,
        #[arg(long)]
        sig: Option<String>,
    },
    /// Evaluate the translations of a theory's axioms in a structure.
    CheckTheory {
        interp: String,
        theory: String,
        model: String,
    },
    /// Mutual interpretation of two structures.
    CheckMutual {
        m: String,
        n: String,
        i: String,
        j: String,
    },
    /// Bi-interpretation via candidate isomorphism formulas.
    CheckBi { m: String, n: String, bi: String },
    /// Synonymy: dimension-1 full-domain identity-equality bi-interpretation.
    CheckSyn { m: String, n: String, bi: String },
    /// Replace the interpreted equivalence by canonical minimal-rank
    /// representatives over a membership structure.
    Scott {
        model: String,
        interp: String,
        #[arg(long, default_value = "E")]
        mem: String,
    },
    /// Pairwise disjunction of two theories.
    TheoryOr { t1: String, t2: String },
}

#[derive(Subcommand)]
enum HfCmd {
    /// Ackermann code of a set literal.
    Encode { set: String },
    /// Set literal of an Ackermann code.
    Decode { code: String },
    /// Mostowski collapse of a relation file {"n":…, "E":[[i,j],…]}.
    Collapse {
        rel: String,
        #[arg(long)]
        eq: Option<String>,
    },
    /// Code a set literal as a pair (alpha, E).
    Code { set: String },
    /// Membership between coded pairs.
    Member { c1: String, c2: String },
    /// Equivalence of coded pairs.
    Equiv { c1: String, c2: String },
    /// Canonical isomorphism of a double-membership structure.
    DoubleIso { double: String },
}

#[derive(Subcommand)]
enum MathiasCmd {
    /// The superexponential bound b_k(n).
    B { k: u32, n: u64 },
    /// |V_n| as a tower integer.
    Vcard { n: u32 },
    /// Growth profile of a set literal.
    Profile { set: String },
    /// Least k with the profile bounded by b_k, for a literal or a stage.
    MinDepth {
        set: Option<String>,
        #[arg(long)]
        vstage: Option<u32>,
    },
    /// Replace every hereditary empty set by a seed set.
    TowerSub {
        set: String,
        #[arg(value_name = "SEED")]
        seed_set: String,
    },
    /// Whether every terminal descent passes through the seed.
    InTower {
        set: String,
        #[arg(value_name = "SEED")]
        seed_set: String,
    },
    /// All terminal descents of a set.
    Descents { set: String },
    /// Zermelo tower stage over a seed.
    Stage {
        #[arg(value_name = "SEED")]
        seed_set: String,
        alpha: usize,
    },
    /// Fruitful-class closure clauses over a sample of transitive sets.
    Closure {
        depth_bound: u32,
        /// Sample members as set literals.
        sample: Vec<String>,
        /// Use every transitive set in V4 as the sample.
        #[arg(long)]
        v4_transitive: bool,
    },
}

struct Invalid(String);

impl<E: std::fmt::Display> From<E> for Invalid {
    fn from(e: E) -> Self {
        Invalid(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok(mut report) => {
            report.millis = start.elapsed().as_millis();
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            } else {
                print!("{}", report.render_human());
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(Invalid(msg)) => {
            if cli.json {
                let report = Report::invalid("error", &msg);
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(3)
        }
    }
}

fn read_file(path: &str) -> Result<String, Invalid> {
    std::fs::read_to_string(path).map_err(|e| Invalid(format!("cannot read `{path}`: {e}")))
}

fn load_structure(path: &str) -> Result<FinStructure, Invalid> {
    Ok(FinStructure::from_json(&read_file(path)?)?)
}

fn parse_compact_sig(text: &str) -> Result<Signature, Invalid> {
    let mut relations = Vec::new();
    let mut constants = Vec::new();
    for entry in text.split(',').filter(|s| !s.trim().is_empty()) {
        let entry = entry.trim();
        match entry.split_once('/') {
            Some((name, arity)) => relations.push((
                name.to_string(),
                arity
                    .parse::<usize>()
                    .map_err(|_| Invalid(format!("bad arity in `{entry}`")))?,
            )),
            None => constants.push(entry.to_string()),
        }
    }
    Ok(Signature::new(relations, constants)?)
}

fn sig_from_source(src: &SigSource) -> Result<Signature, Invalid> {
    match (&src.sig, &src.model) {
        (Some(s), _) => parse_compact_sig(s),
        (None, Some(m)) => Ok(load_structure(m)?.signature().clone()),
        (None, None) => Err(Invalid(
            "a signature is required: pass --sig or --model".to_string(),
        )),
    }
}

fn load_interp(path: &str, default_target: Option<&Signature>) -> Result<Interpretation, Invalid> {
    Ok(Interpretation::from_json(&read_file(path)?, default_target)?)
}

fn load_eq(path: &str, size: usize) -> Result<EqRelation, Invalid> {
    #[derive(serde::Deserialize)]
    struct EqDoc {
        pairs: Vec<(usize, usize)>,
    }
    let doc: EqDoc = serde_json::from_str(&read_file(path)?)
        .map_err(|e| Invalid(format!("bad equivalence JSON: {e}")))?;
    Ok(EqRelation::new(size, doc.pairs)?)
}

#[derive(serde::Deserialize)]
struct RelDoc {
    n: usize,
    #[serde(rename = "E")]
    edges: Vec<(usize, usize)>,
}

fn load_rel(path: &str) -> Result<BinRel, Invalid> {
    let doc: RelDoc = serde_json::from_str(&read_file(path)?)
        .map_err(|e| Invalid(format!("bad relation JSON: {e}")))?;
    Ok(BinRel::new(doc.n, doc.edges)?)
}

fn parse_assignment(text: &str) -> Result<Assignment, Invalid> {
    let mut asg = Assignment::new();
    for entry in text.split(',').filter(|s| !s.trim().is_empty()) {
        let (var, value) = entry
            .split_once('=')
            .ok_or_else(|| Invalid(format!("bad assignment entry `{entry}`")))?;
        asg.insert(
            var.trim().to_string(),
            value
                .trim()
                .parse()
                .map_err(|_| Invalid(format!("bad element in `{entry}`")))?,
        );
    }
    Ok(asg)
}

fn structure_json(m: &FinStructure) -> serde_json::Value {
    serde_json::to_value(m.to_doc()).expect("serializable")
}

fn theory_json(t: &Theory) -> serde_json::Value {
    let sig = SignatureDoc::from_signature(&t.sig);
    json!({
        "name": t.name,
        "relations": sig.relations,
        "constants": sig.constants,
        "axioms": t.axioms.iter().map(|a| a.render()).collect::<Vec<_>>(),
    })
}

fn run(cli: &Cli) -> Result<Report, Invalid> {
    match &cli.cmd {
        Cmd::Logic { cmd } => run_logic(cli, cmd),
        Cmd::Model { cmd } => run_model(cli, cmd),
        Cmd::Interp { cmd } => run_interp(cli, cmd),
        Cmd::Hf { cmd } => run_hf(cli, cmd),
        Cmd::Mathias { cmd } => run_mathias(cli, cmd),
        Cmd::Selftest { only } => run_selftest(cli, *only),
    }
}

fn run_logic(cli: &Cli, cmd: &LogicCmd) -> Result<Report, Invalid> {
    match cmd {
        LogicCmd::Parse { formula, sig } => {
            let signature = sig_from_source(sig)?;
            let f = parse_formula(formula, &signature)?;
            let mut report = Report::new("logic parse").input("formula", formula);
            report.result(json!({
                "rendered": f.render(),
                "depth": f.depth(),
                "free_variables": f.free_vars(),
            }));
            Ok(report)
        }
        LogicCmd::Eval {
            model,
            formula,
            assign,
        } => {
            let m = load_structure(model)?;
            let f = parse_formula(formula, m.signature())?;
            let asg = parse_assignment(assign)?;
            let value = evaluate(&m, &f, &asg)?;
            let mut report = Report::new("logic eval")
                .input("model", model)
                .input("formula", formula);
            report.result(json!(value));
            Ok(report)
        }
        LogicCmd::Definable {
            model,
            arity,
            params,
        } => {
            let m = load_structure(model)?;
            let params: Vec<usize> = params
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.trim().parse().map_err(|_| Invalid(format!("bad element `{s}`"))))
                .collect::<Result<_, _>>()?;
            let rels = definable_relations(
                &m,
                *arity,
                cli.depth,
                &params,
                EnumLimits {
                    max_formulas: cli.max_formulas,
                },
            )?;
            let mut report = Report::new("logic definable").input("model", model);
            report.result(json!({
                "count": rels.len(),
                "relations": rels.iter().map(|r| r.iter().cloned().collect::<Vec<_>>()).collect::<Vec<_>>(),
            }));
            Ok(report)
        }
    }
}

fn run_model(cli: &Cli, cmd: &ModelCmd) -> Result<Report, Invalid> {
    match cmd {
        ModelCmd::Quotient { model, eq } => {
            let m = load_structure(model)?;
            let e = load_eq(eq, m.size())?;
            if !check_congruence(&m, &e)? {
                return Err(Invalid(
                    "the equivalence is not a congruence for the structure".to_string(),
                ));
            }
            let (q, proj) = quotient(&m, &e)?;
            let mut report = Report::new("model quotient")
                .input("model", model)
                .input("eq", eq);
            report.result(json!({
                "structure": structure_json(&q),
                "projection": proj,
            }));
            Ok(report)
        }
        ModelCmd::Iso { a, b } => {
            let sa = load_structure(a)?;
            let sb = load_structure(b)?;
            let isos = find_isomorphisms(&sa, &sb, cli.max_size)?;
            let mut report = Report::new("model iso").input("a", a).input("b", b);
            report.check("isomorphic", !isos.is_empty(), json!(isos));
            Ok(report)
        }
        ModelCmd::Wf { model, rel } => {
            let m = load_structure(model)?;
            let r = binrel_of(&m, rel)?;
            let mut report = Report::new("model wf").input("model", model);
            report.check("well-founded", is_wellfounded(&r), serde_json::Value::Null);
            Ok(report)
        }
        ModelCmd::Ext { model, rel, eq } => {
            let m = load_structure(model)?;
            let r = binrel_of(&m, rel)?;
            let e = match eq {
                Some(path) => load_eq(path, m.size())?,
                None => EqRelation::identity(m.size()),
            };
            let mut report = Report::new("model ext").input("model", model);
            report.check("extensional", is_extensional(&r, &e), serde_json::Value::Null);
            Ok(report)
        }
    }
}

fn binrel_of(m: &FinStructure, rel: &str) -> Result<BinRel, Invalid> {
    if m.signature().relation_arity(rel) != Some(2) {
        return Err(Invalid(format!("`{rel}` is not a binary relation symbol")));
    }
    let edges: Vec<(usize, usize)> = m
        .relation(rel)
        .expect("checked")
        .iter()
        .map(|t| (t[0], t[1]))
        .collect();
    Ok(BinRel::new(m.size(), edges)?)
}

fn run_interp(_cli: &Cli, cmd: &InterpCmd) -> Result<Report, Invalid> {
    match cmd {
        InterpCmd::Translate {
            interp,
            formula,
            sig,
        } => {
            let target = sig.as_deref().map(parse_compact_sig).transpose()?;
            let i = load_interp(interp, target.as_ref())?;
            let f = parse_formula(formula, i.source())?;
            let translated = translate(&f, &i)?;
            let mut report = Report::new("interp translate")
                .input("interp", interp)
                .input("formula", formula);
            report.result(json!(translated.render()));
            Ok(report)
        }
        InterpCmd::Apply { model, interp } => {
            let m = load_structure(model)?;
            let i = load_interp(interp, Some(m.signature()))?;
            let applied = apply(&i, &m)?;
            let mut report = Report::new("interp apply")
                .input("model", model)
                .input("interp", interp);
            report.result(json!({
                "structure": structure_json(&applied.structure),
                "representatives": applied.reps,
                "domain_size": applied.domain.len(),
            }));
            Ok(report)
        }
        InterpCmd::Compose { outer, inner, sig } => {
            let target = sig.as_deref().map(parse_compact_sig).transpose()?;
            let o = load_interp(outer, target.as_ref())?;
            let i = load_interp(inner, Some(o.source()))?;
            let composite = Interpretation::compose(&o, &i)?;
            let mut report = Report::new("interp compose")
                .input("outer", outer)
                .input("inner", inner);
            report.result(serde_json::to_value(composite.to_doc()).expect("serializable"));
            Ok(report)
        }
        InterpCmd::CheckTheory {
            interp,
            theory,
            model,
        } => {
            let m = load_structure(model)?;
            let t = Theory::from_json(&read_file(theory)?)?;
            let i = load_interp(interp, Some(m.signature()))?;
            let tr = check_theory_interpretation(&i, &t, &m)?;
            let mut report = Report::new("interp check-theory")
                .input("interp", interp)
                .input("theory", theory)
                .input("model", model);
            for ax in &tr.axioms {
                report.check(&ax.axiom, ax.holds, json!({ "translated": ax.translated }));
            }
            Ok(report)
        }
        InterpCmd::CheckMutual { m, n, i, j } => {
            let sm = load_structure(m)?;
            let sn = load_structure(n)?;
            let ii = load_interp(i, Some(sn.signature()))?;
            let jj = load_interp(j, Some(sm.signature()))?;
            let rep = check_mutual(&sm, &sn, &ii, &jj)?;
            let mut report = Report::new("interp check-mutual")
                .input("m", m)
                .input("n", n);
            report.check(
                "apply(J,M) isomorphic to N",
                rep.m_interprets_n.is_some(),
                json!(rep.m_interprets_n),
            );
            report.check(
                "apply(I,N) isomorphic to M",
                rep.n_interprets_m.is_some(),
                json!(rep.n_interprets_m),
            );
            report.check(
                "mutual",
                rep.mutual(),
                json!({
                    "mbar": structure_json(&rep.mbar.structure),
                    "nbar": structure_json(&rep.nbar.structure),
                }),
            );
            Ok(report)
        }
        InterpCmd::CheckBi { m, n, bi } => {
            let sm = load_structure(m)?;
            let sn = load_structure(n)?;
            let b = BiInterpretation::from_json(&read_file(bi)?, sm.signature(), sn.signature())?;
            let rep = check_bi(&b, &sm, &sn)?;
            let mut report = Report::new("interp check-bi")
                .input("m", m)
                .input("n", n)
                .input("bi", bi);
            report.check("mutual", rep.mutual.mutual(), serde_json::Value::Null);
            for (name, side) in [("source", &rep.source_side), ("target", &rep.target_side)] {
                match side {
                    Some(s) => report.check(
                        &format!("{name}-side isomorphism"),
                        s.ok(),
                        json!({ "diagnostics": s.diagnostics }),
                    ),
                    None => report.check(
                        &format!("{name}-side isomorphism"),
                        false,
                        json!("skipped: not mutual"),
                    ),
                }
            }
            Ok(report)
        }
        InterpCmd::CheckSyn { m, n, bi } => {
            let sm = load_structure(m)?;
            let sn = load_structure(n)?;
            let b = BiInterpretation::from_json(&read_file(bi)?, sm.signature(), sn.signature())?;
            let rep = check_synonymy(&b, &sm, &sn)?;
            let mut report = Report::new("interp check-syn")
                .input("m", m)
                .input("n", n)
                .input("bi", bi);
            report.check("bi-interpretation", rep.bi.ok(), serde_json::Value::Null);
            report.check("dimensions are 1", rep.dimensions_are_one, serde_json::Value::Null);
            report.check("domains are full", rep.domains_are_full, serde_json::Value::Null);
            report.check(
                "equalities are identity",
                rep.equalities_are_identity,
                serde_json::Value::Null,
            );
            Ok(report)
        }
        InterpCmd::Scott { model, interp, mem } => {
            let m = load_structure(model)?;
            let i = load_interp(interp, Some(m.signature()))?;
            let reduced = scott_reduce(&i, &m, mem)?;
            let mut report = Report::new("interp scott")
                .input("model", model)
                .input("interp", interp);
            report.result(serde_json::to_value(reduced.to_doc()).expect("serializable"));
            Ok(report)
        }
        InterpCmd::TheoryOr { t1, t2 } => {
            let a = Theory::from_json(&read_file(t1)?)?;
            let b = Theory::from_json(&read_file(t2)?)?;
            let t = theory_disjunction(&a, &b)?;
            let mut report = Report::new("interp theory-or").input("t1", t1).input("t2", t2);
            report.result(theory_json(&t));
            Ok(report)
        }
    }
}

fn run_hf(cli: &Cli, cmd: &HfCmd) -> Result<Report, Invalid> {
    match cmd {
        HfCmd::Encode { set } => {
            let x = HFSet::parse(set)?;
            let code = ack_encode(&x, cli.ack_cap)?;
            let mut report = Report::new("hf encode").input("set", set);
            report.result(json!(code.to_string()));
            Ok(report)
        }
        HfCmd::Decode { code } => {
            let n: BigUint = code
                .parse()
                .map_err(|_| Invalid(format!("`{code}` is not a natural number")))?;
            let x = ack_decode(&n, cli.ack_cap)?;
            let mut report = Report::new("hf decode").input("code", code);
            report.result(json!(x.to_string()));
            Ok(report)
        }
        HfCmd::Collapse { rel, eq } => {
            let r = load_rel(rel)?;
            let e = eq
                .as_deref()
                .map(|path| load_eq(path, r.size))
                .transpose()?;
            let pi = mostowski_collapse(&r, e.as_ref())?;
            let mut report = Report::new("hf collapse").input("rel", rel);
            report.result(json!(pi.iter().map(|x| x.to_string()).collect::<Vec<_>>()));
            Ok(report)
        }
        HfCmd::Code { set } => {
            let x = HFSet::parse(set)?;
            let c = encode_coded_pair(&x);
            let mut report = Report::new("hf code").input("set", set);
            report.result(serde_json::to_value(&c).expect("serializable"));
            Ok(report)
        }
        HfCmd::Member { c1, c2 } => {
            let a = CodedPair::from_json(&read_file(c1)?)?;
            let b = CodedPair::from_json(&read_file(c2)?)?;
            let member = coded_member(&a, &b)?;
            let mut report = Report::new("hf member").input("c1", c1).input("c2", c2);
            report.check(
                "member",
                member,
                json!({
                    "decoded_c1": decode_coded_pair(&a)?.to_string(),
                    "decoded_c2": decode_coded_pair(&b)?.to_string(),
                }),
            );
            Ok(report)
        }
        HfCmd::Equiv { c1, c2 } => {
            let a = CodedPair::from_json(&read_file(c1)?)?;
            let b = CodedPair::from_json(&read_file(c2)?)?;
            let equiv = coded_equiv(&a, &b)?;
            let mut report = Report::new("hf equiv").input("c1", c1).input("c2", c2);
            report.check("equivalent", equiv, json!(decode_coded_pair(&a)?.to_string()));
            Ok(report)
        }
        HfCmd::DoubleIso { double } => {
            let d: DoubleStructure = serde_json::from_str(&read_file(double)?)
                .map_err(|e| Invalid(format!("bad double-structure JSON: {e}")))?;
            let iso = canonical_double_iso(&d)?;
            let mut report = Report::new("hf double-iso").input("double", double);
            report.check("isomorphic", iso.is_some(), json!(iso));
            Ok(report)
        }
    }
}

fn run_mathias(cli: &Cli, cmd: &MathiasCmd) -> Result<Report, Invalid> {
    let cap = TowerCap::new(cli.tower_bits);
    match cmd {
        MathiasCmd::B { k, n } => {
            let v = tower_b(*k, *n, cap);
            let mut report = Report::new("mathias b");
            report.result(json!({ "rendered": v.to_string(), "value": v.to_json() }));
            Ok(report)
        }
        MathiasCmd::Vcard { n } => {
            let v = vcard(*n, cap);
            let mut report = Report::new("mathias vcard");
            report.result(json!({ "rendered": v.to_string(), "value": v.to_json() }));
            Ok(report)
        }
        MathiasCmd::Profile { set } => {
            let x = HFSet::parse(set)?;
            let p = growth_profile(&x);
            let mut report = Report::new("mathias profile").input("set", set);
            report.result(p.to_json());
            Ok(report)
        }
        MathiasCmd::MinDepth { set, vstage } => {
            let mut report = Report::new("mathias min-depth");
            let depth = match (set, vstage) {
                (Some(text), None) => min_depth(&HFSet::parse(text)?),
                (None, Some(m)) => min_depth_vstage(*m),
                _ => {
                    return Err(Invalid(
                        "pass exactly one of a set literal or --vstage".to_string(),
                    ))
                }
            };
            report.result(json!(depth));
            Ok(report)
        }
        MathiasCmd::TowerSub { set, seed_set } => {
            let x = HFSet::parse(set)?;
            let a = HFSet::parse(seed_set)?;
            let mut report = Report::new("mathias tower-sub").input("set", set).input("seed", seed_set);
            report.result(json!(tower_sub(&x, &a).to_string()));
            Ok(report)
        }
        MathiasCmd::InTower { set, seed_set } => {
            let x = HFSet::parse(set)?;
            let a = HFSet::parse(seed_set)?;
            let mut report = Report::new("mathias in-tower").input("set", set).input("seed", seed_set);
            report.check("in-tower", in_tower(&x, &a), serde_json::Value::Null);
            Ok(report)
        }
        MathiasCmd::Descents { set } => {
            let x = HFSet::parse(set)?;
            let chains = terminal_descents(&x, cli.descent_cap)?;
            let mut report = Report::new("mathias descents").input("set", set);
            report.result(json!(chains
                .iter()
                .map(|c| c.iter().map(|s| s.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>()));
            Ok(report)
        }
        MathiasCmd::Stage { seed_set, alpha } => {
            let a = HFSet::parse(seed_set)?;
            let stage = zermelo_stage(&a, *alpha)?;
            let mut report = Report::new("mathias stage").input("seed", seed_set);
            report.result(json!({
                "size": stage.len(),
                "members": stage.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            }));
            Ok(report)
        }
        MathiasCmd::Closure {
            depth_bound,
            sample,
            v4_transitive,
        } => {
            let sample: Vec<HFSet> = if *v4_transitive {
                interpres_core::hf::v_stage(4)
                    .expect("stage 4")
                    .into_iter()
                    .filter(|x| x.is_transitive())
                    .collect()
            } else {
                sample
                    .iter()
                    .map(|t| HFSet::parse(t))
                    .collect::<Result<_, _>>()?
            };
            if sample.is_empty() {
                return Err(Invalid("the sample is empty".to_string()));
            }
            let rep = fruitful_closure_check(*depth_bound, &sample)?;
            let mut report = Report::new("mathias closure");
            let violations = |clause: u8| {
                rep.violations
                    .iter()
                    .filter(|v| v.clause == clause)
                    .map(|v| {
                        json!({
                            "operands": v.operands,
                            "result": v.result,
                            "depth": v.result_depth,
                        })
                    })
                    .collect::<Vec<_>>()
            };
            report.check(
                "clause 3: closed under unions",
                violations(3).is_empty(),
                json!(violations(3)),
            );
            report.check(
                "clause 4: closed under powerset adjunction",
                violations(4).is_empty(),
                json!(violations(4)),
            );
            Ok(report)
        }
    }
}

fn run_selftest(cli: &Cli, only: Option<usize>) -> Result<Report, Invalid> {
    let results = match only {
        Some(index) => vec![interpres_core::selftest::run_criterion(index, cli.seed)],
        None => interpres_core::selftest::run_all(cli.seed),
    };
    let mut report = Report::new("selftest").input("seed", cli.seed);
    for r in &results {
        report.check(
            &format!("criterion {}: {}", r.index, r.name),
            r.pass,
            json!({ "detail": r.detail, "millis": r.millis }),
        );
    }
    Ok(report)
}
