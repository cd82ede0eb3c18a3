//! `prg`: command-line front end for the prg-core checks.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use prg_core::correspondence::{distinguished_report, fano_cross_check, kernel_pencil, quad_shell_check, reproduce_table};
use prg_core::finite_ring::{direct_product_ring, is_field, jacobson_radical, maximal_ideals, quotient_ring_gf2, units, zero_divisors, FiniteRing};
use prg_core::fixtures::Fixtures;
use prg_core::pauli::{self, commutation_graph, fano_embedding, mermin_square, mermin_squares, mub_partition, MerminReport, Phase, TableSet};
use prg_core::projective_line::{ProjectiveLineModel, ShellTag};
use prg_core::relation::{self, RelationMatrix};
use prg_core::verify::run_all;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RingChoice {
    /// GF(2)×GF(2)
    Gf2x2,
    /// GF(2)^3
    Gf2x3,
    /// GF(2)^4
    Gf2x4,
    /// GF(2)[x]/(x^2+x+1)
    Gf4,
    /// GF(2)[x]/(x^3+x+1)
    Gf8,
}

impl RingChoice {
    fn build(self) -> FiniteRing {
        match self {
            RingChoice::Gf2x2 => direct_product_ring(2),
            RingChoice::Gf2x3 => direct_product_ring(3),
            RingChoice::Gf2x4 => direct_product_ring(4),
            RingChoice::Gf4 => quotient_ring_gf2(0b111),
            RingChoice::Gf8 => quotient_ring_gf2(0b1011),
        }
        .expect("fixed ring parameters are valid")
    }

    fn id(self) -> &'static str {
        match self {
            RingChoice::Gf2x2 => "gf2x2",
            RingChoice::Gf2x3 => "gf2x3",
            RingChoice::Gf2x4 => "gf2x4",
            RingChoice::Gf4 => "gf4",
            RingChoice::Gf8 => "gf8",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SetChoice {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
    #[value(name = "AB")]
    Ab,
}

#[derive(Debug, Parser)]
#[command(name = "prg", version, about = "Exact checks of two-qubit Pauli structure against projective ring lines")]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ring tables and ideals
    Ring {
        #[command(subcommand)]
        action: RingAction,
    },
    /// Points or distant graph of a projective line
    Line {
        #[command(subcommand)]
        action: LineAction,
    },
    /// Pauli operator tables and bases
    Pauli {
        #[command(subcommand)]
        action: PauliAction,
    },
    /// Mermin square sign checks
    Mermin {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        square: Option<u8>,
    },
    /// Fano-plane lines of the kernel and the pencil through one label
    Fano {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=15))]
        pencil: u8,
    },
    /// Commutation graph of the eight outer operators
    Cube,
    /// Kernel pairs coupled to complementary outer four-tuples
    Coupling,
    /// Distant relations over GF(2)^3 against operator commutation
    Match {
        #[arg(long, value_parser = clap::value_parser!(u8).range(6..=9))]
        table: u8,
    },
    /// Shell decomposition and the four-coordinate shell check
    Shells,
    /// Every acceptance check
    VerifyAll,
}

#[derive(Debug, Subcommand)]
pub enum RingAction {
    /// Addition and multiplication tables, units, ideals
    Info {
        #[arg(long, value_enum)]
        ring: RingChoice,
    },
}

#[derive(Debug, Subcommand)]
pub enum LineAction {
    /// Canonical points with their shell tags
    Points {
        #[arg(long, value_enum)]
        ring: RingChoice,
    },
    /// Distant relation on all points
    Graph {
        #[arg(long, value_enum)]
        ring: RingChoice,
    },
}

#[derive(Debug, Subcommand)]
pub enum PauliAction {
    /// Phased product table, checked against the stored table
    Table {
        #[arg(long, value_enum)]
        set: SetChoice,
    },
    /// Joint eigenbases of the five rows and their mutual unbiasedness
    Mubs,
}

/// Command outcome before formatting.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub passed: bool,
    pub payload: Value,
    pub text: String,
    pub dot: Option<String>,
}

impl Report {
    fn new(command: &str, passed: bool, payload: Value, text: String) -> Self {
        Report { command: command.into(), passed, payload, text, dot: None }
    }

    fn with_dot(mut self, dot: String) -> Self {
        self.dot = Some(dot);
        self
    }
}

/// Undirected DOT text for a square symmetric relation.
pub fn export_dot(graph: &RelationMatrix, name: &str) -> Result<String, String> {
    if !graph.is_simple_graph() {
        return Err("relation is not a square symmetric matrix with empty diagonal".into());
    }
    relation::export_dot(graph, name).map_err(|e| e.to_string())
}

/// Canonical JSON: sorted keys, two-space indent, trailing newline.
pub fn export_json(report: &Report) -> String {
    let v = json!({
        "command": report.command,
        "status": if report.passed { "pass" } else { "fail" },
        "payload": report.payload,
    });
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn ring_info(choice: RingChoice, fx: &Fixtures) -> Result<Report, String> {
    let ring = choice.build();
    let names = |es: &[prg_core::finite_ring::RingElement]| es.iter().map(|&e| ring.name(e).to_string()).collect::<Vec<_>>();
    let maximal: Vec<Vec<String>> = maximal_ideals(&ring).iter().map(|m| m.names(&ring)).collect();
    let radical = jacobson_radical(&ring).names(&ring);
    let fixture = match choice {
        RingChoice::Gf2x2 => Some(("table4", 0..2)),
        RingChoice::Gf4 => Some(("table4", 2..4)),
        RingChoice::Gf2x3 => Some(("table5", 0..2)),
        _ => None,
    };
    let mut differences = Vec::new();
    if let Some((name, range)) = fixture.clone() {
        let blocks = fx.blocks(name).map_err(|e| e.to_string())?;
        for g in blocks.get(range).ok_or_else(|| format!("fixture {name} has too few blocks"))? {
            differences.extend(ring.grid_differences(g).map_err(|e| e.to_string())?);
        }
    }
    let axioms = ring.check_axioms().is_ok();
    let passed = axioms && differences.is_empty();
    let mut text = ring.render_tables();
    text.push_str(&format!("units: {}\n", names(&units(&ring)).join(" ")));
    text.push_str(&format!("zero-divisors: {}\n", names(&zero_divisors(&ring)).join(" ")));
    text.push_str(&format!("field: {}\n", is_field(&ring)));
    for m in &maximal {
        text.push_str(&format!("maximal ideal: {{{}}}\n", m.join(",")));
    }
    text.push_str(&format!("jacobson radical: {{{}}}\n", radical.join(",")));
    if let Some((name, _)) = &fixture {
        text.push_str(&format!("{name} fixture differences: {}\n", differences.len()));
    }
    let mut payload = ring.to_json();
    let obj = payload.as_object_mut().expect("ring json is an object");
    obj.insert("ring".into(), json!(choice.id()));
    obj.insert("units".into(), json!(names(&units(&ring))));
    obj.insert("zero_divisors".into(), json!(names(&zero_divisors(&ring))));
    obj.insert("is_field".into(), json!(is_field(&ring)));
    obj.insert("maximal_ideals".into(), json!(maximal));
    obj.insert("jacobson_radical".into(), json!(radical));
    obj.insert("fixture_differences".into(), json!(differences));
    Ok(Report::new("ring info", passed, payload, text))
}

fn line_model(choice: RingChoice) -> Result<ProjectiveLineModel, String> {
    ProjectiveLineModel::new(choice.build()).map_err(|e| e.to_string())
}

fn line_points(choice: RingChoice) -> Result<Report, String> {
    let m = line_model(choice)?;
    let mut text = String::new();
    for &p in m.points() {
        text.push_str(&format!("{} {}\n", m.name(p), m.classify_point(p)));
    }
    text.push_str(&format!("{} points\n", m.len()));
    let mut payload = m.to_json();
    payload.as_object_mut().expect("object").insert("ring".into(), json!(choice.id()));
    Ok(Report::new("line points", true, payload, text))
}

fn line_graph(choice: RingChoice) -> Result<Report, String> {
    let m = line_model(choice)?;
    let g = m.distant_graph();
    let name = format!("distant_{}", choice.id());
    let dot = export_dot(&g, &name)?;
    let payload = json!({
        "ring": choice.id(),
        "vertices": g.row_labels,
        "edges": g.edge_count(),
        "regular_degree": g.regular_degree(),
        "relation": to_value(&g),
    });
    let text = format!("{}{} vertices, {} edges\n", g.render_pm(), g.n_rows(), g.edge_count());
    Ok(Report::new("line graph", true, payload, text).with_dot(dot))
}

fn pauli_table(set: SetChoice, fx: &Fixtures) -> Result<Report, String> {
    let set = match set {
        SetChoice::A => TableSet::A,
        SetChoice::B => TableSet::B,
        SetChoice::Ab => TableSet::AB,
    };
    let report = pauli::verify_table(set, fx).map_err(|e| e.to_string())?;
    let mut text = pauli::render_table(set);
    text.push_str(&format!("{}/{} cells match the fixture\n", report.cells_checked - report.discrepancies.len(), report.cells_checked));
    for d in &report.discrepancies {
        text.push_str(&format!("  {} * {}: printed {}, computed {}\n", d.row, d.col, d.expected, d.computed));
    }
    let payload = json!({
        "set": format!("{set:?}"),
        "rows": set.rows(),
        "cols": set.cols(),
        "cells": to_value(&pauli::product_table(set)),
        "check": to_value(&report),
    });
    Ok(Report::new("pauli table", report.passed(), payload, text))
}

fn pauli_mubs() -> Result<Report, String> {
    let r = mub_partition().map_err(|e| e.to_string())?;
    let mut text = String::new();
    for b in &r.bases {
        let vs: Vec<String> = b.vectors.iter().map(|(v, s)| format!("{v}{s}")).collect();
        text.push_str(&format!("{:?}: {}{}\n", b.triple, vs.join(" "), if b.entangled { "  entangled" } else { "" }));
    }
    text.push_str(&format!("pairs checked: {}, all unbiased: {}\n", r.pairs_checked, r.all_unbiased));
    let passed = r.all_unbiased && r.pairs_checked == 10 && r.entangled_rows == [3, 5];
    Ok(Report::new("pauli mubs", passed, to_value(&r), text))
}

fn phase_list(ps: &[Option<Phase>]) -> Vec<Value> {
    ps.iter().map(|p| p.map_or(Value::Null, |p| json!(p.symbol()))).collect()
}

fn mermin_payload(r: &MerminReport) -> Value {
    json!({
        "square": r.square,
        "grid": r.grid,
        "lines_commute": r.lines_commute,
        "row_phases": phase_list(&r.row_phases),
        "col_phases": phase_list(&r.col_phases),
        "passed": r.has_expected_signs(),
    })
}

fn mermin_text(r: &MerminReport) -> String {
    let sym = |p: &Option<Phase>| p.map_or("?", |p| p.symbol());
    let mut text = format!("square {}\n", r.square);
    for (row, p) in r.grid.iter().zip(&r.row_phases) {
        text.push_str(&format!("{:>3} {:>3} {:>3}  | {}\n", row[0], row[1], row[2], sym(p)));
    }
    text.push_str(&format!("{:>3} {:>3} {:>3}\n", sym(&r.col_phases[0]), sym(&r.col_phases[1]), sym(&r.col_phases[2])));
    text
}

fn mermin(square: Option<u8>) -> Result<Report, String> {
    match square {
        Some(k) => {
            let r = mermin_square(k as usize).map_err(|e| e.to_string())?;
            Ok(Report::new("mermin", r.has_expected_signs(), mermin_payload(&r), mermin_text(&r)))
        }
        None => {
            let rs = mermin_squares();
            let passed = rs.iter().all(|r| r.has_expected_signs());
            let text = rs.iter().map(mermin_text).collect::<Vec<_>>().join("\n");
            let counts = pauli::mermin_label_counts();
            let payload = json!({ "squares": rs.iter().map(mermin_payload).collect::<Vec<_>>(), "label_counts": counts });
            Ok(Report::new("mermin", passed, payload, text))
        }
    }
}

fn fano(base: u8) -> Result<Report, String> {
    let emb = fano_embedding().ok_or("no Fano embedding exists")?;
    let cross = fano_cross_check().map_err(|e| e.to_string())?;
    let pencil = kernel_pencil(base).map_err(|e| e.to_string())?;
    let mut text = String::from("points (label -> vector):");
    for (l, v) in &emb.points {
        text.push_str(&format!(" {l}->{v:03b}"));
    }
    text.push('\n');
    for l in &emb.lines {
        text.push_str(&format!("line {:?}\n", l));
    }
    text.push_str(&format!("pencil through {base}:\n"));
    for l in &pencil {
        let kind = match (l.commuting, l.entangled) {
            (true, Some(true)) => "full, entangled",
            (true, _) => "full",
            (false, _) => "broken",
        };
        text.push_str(&format!("  {:?} {kind}\n", l.points));
    }
    text.push_str(&format!("views agree: {}\n", cross.agree));
    let payload = json!({
        "embedding": to_value(&emb),
        "cross_check": to_value(&cross),
        "pencil": { "base": base, "lines": to_value(&pencil) },
    });
    Ok(Report::new("fano", cross.agree && emb.lines.len() == 7, payload, text))
}

fn cube() -> Report {
    let c = pauli::cube_structure();
    let dot = export_dot(&c.graph, "outer_commutation").expect("commutation graphs are simple");
    let text = format!(
        "{}3-regular: {}, edges: {}, bipartite: {}, girth: {:?}, cube-isomorphic: {}\n",
        c.graph.render_pm(),
        c.regular_degree == Some(3),
        c.edges,
        c.bipartite,
        c.girth,
        c.isomorphism.is_some()
    );
    Report::new("cube", c.is_cube(), to_value(&c), text).with_dot(dot)
}

fn coupling() -> Report {
    let c = pauli::shell_coupling();
    let full = commutation_graph(&(1..16).collect::<Vec<u8>>());
    let dot = export_dot(&full, "commutation").expect("commutation graphs are simple");
    let mut text = String::new();
    for p in &c.pairs {
        text.push_str(&format!(
            "({},{}): {:?} | {:?} complementary: {}\n",
            p.pair.0, p.pair.1, p.first_commuters, p.second_commuters, p.complementary
        ));
    }
    text.push_str(&format!(
        "qualifying pairs: {:?}; full graph degree {:?}, {} edges\n",
        c.qualifying_pairs, c.full_graph_degree, c.full_graph_edges
    ));
    Report::new("coupling", c.matches_expected(), to_value(&c), text).with_dot(dot)
}

fn match_table(table: u8, fx: &Fixtures) -> Result<Report, String> {
    let r = reproduce_table(table, fx).map_err(|e| e.to_string())?;
    let mut text = format!("table {table}: computed distant relation, ! marks operator disagreement\n");
    text.push_str(&r.render());
    text.push_str(&format!("commutation relation of the labelled operators\n{}", r.commuting.render_pm()));
    text.push_str(&format!(
        "mismatch count: {} (stated {}), fixture differences: {}, flags match: {}",
        r.correspondence.mismatch_count,
        r.expected_mismatch,
        r.fixture_differences.len(),
        r.flags_match
    ));
    if let Some(m) = r.min_mismatch {
        text.push_str(&format!(", search minimum: {m}{}", if r.beats_stated() { " (below stated count)" } else { "" }));
    }
    if let Some(s) = r.swap_identical {
        text.push_str(&format!(", swapped coordinates identical: {s}"));
    }
    text.push('\n');
    let dot = r.distant.is_simple_graph().then(|| export_dot(&r.distant, &format!("table{table}")).ok()).flatten();
    let mut rep = Report::new("match", r.passed(), r.to_json(), text);
    rep.dot = dot;
    Ok(rep)
}

fn shells() -> Result<Report, String> {
    let tri = line_model(RingChoice::Gf2x3)?;
    let counts = tri.shell_counts();
    let get = |t: ShellTag| counts.get(&t).copied().unwrap_or(0);
    let d = distinguished_report(&RingChoice::Gf2x4.build()).map_err(|e| e.to_string())?;
    let q = quad_shell_check().map_err(|e| e.to_string())?;
    let counts_ok = (get(ShellTag::Nucleus), get(ShellTag::Mixed), get(ShellTag::Outer)) == (3, 12, 12);
    let passed = counts_ok && d.passed() && q.passed();
    let text = format!(
        "GF(2)^3 line: {} nucleus, {} mixed, {} outer\n\
         GF(2)^4 distinguished elements: {}\n\
         cube subset: {}\n  isomorphic to the outer commutation graph: {}\n\
         kernel subset: {}\n  isomorphic to the kernel commutation graph: {}\n\
         cross pairs: {} distant of {}; commuting operator cross pairs: {}\n\
         guided kernel-pattern subsets: {}, matching the operator coupling: {}\n\
         discrepancy detected: {}\n",
        get(ShellTag::Nucleus),
        get(ShellTag::Mixed),
        get(ShellTag::Outer),
        d.distinguished.join(" "),
        q.cube_points.join(" "),
        q.cube_isomorphic,
        q.kernel_points.join(" "),
        q.kernel_isomorphic,
        q.distant_cross_pairs,
        q.cross_pairs,
        q.commuting_cross_pairs,
        q.guided_candidates,
        q.guided_matching_coupling,
        q.discrepancy_detected
    );
    let payload = json!({
        "triangle_shells": { "nucleus": get(ShellTag::Nucleus), "mixed": get(ShellTag::Mixed), "outer": get(ShellTag::Outer) },
        "distinguished": to_value(&d),
        "quad_shell": to_value(&q),
    });
    Ok(Report::new("shells", passed, payload, text))
}

fn verify_all(fx: &Fixtures) -> Report {
    let results = run_all(fx);
    let passed = results.iter().all(|r| r.passed);
    let mut text = String::new();
    for r in &results {
        text.push_str(&format!("{:>2} {} {}: {}\n", r.id, if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail));
    }
    let checks: serde_json::Map<String, Value> = results.iter().map(|r| (format!("{:02}", r.id), json!(r.passed))).collect();
    let payload = json!({ "checks": checks, "results": to_value(&results) });
    Report::new("verify-all", passed, payload, text)
}

fn execute(cli: &Cli, fx: &Fixtures) -> Result<Report, String> {
    match &cli.command {
        Command::Ring { action: RingAction::Info { ring } } => ring_info(*ring, fx),
        Command::Line { action: LineAction::Points { ring } } => line_points(*ring),
        Command::Line { action: LineAction::Graph { ring } } => line_graph(*ring),
        Command::Pauli { action: PauliAction::Table { set } } => pauli_table(*set, fx),
        Command::Pauli { action: PauliAction::Mubs } => pauli_mubs(),
        Command::Mermin { square } => mermin(*square),
        Command::Fano { pencil } => fano(*pencil),
        Command::Cube => Ok(cube()),
        Command::Coupling => Ok(coupling()),
        Command::Match { table } => match_table(*table, fx),
        Command::Shells => shells(),
        Command::VerifyAll => Ok(verify_all(fx)),
    }
}

/// Parses `argv`, runs the command and writes the report. Returns the
/// exit code: 0 all checks pass, 1 a check failed, 2 usage or input error.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return if code == 0 { 0 } else { 2 };
        }
    };
    let fx = Fixtures::from_env();
    let report = match execute(&cli, &fx) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let rendered = match cli.format {
        Format::Text => report.text.clone(),
        Format::Json => export_json(&report),
        Format::Dot => match &report.dot {
            Some(d) => d.clone(),
            None => {
                let _ = writeln!(err, "error: `{}` has no graph to export as DOT", report.command);
                return 2;
            }
        },
    };
    let _ = write!(out, "{rendered}");
    if report.passed {
        0
    } else {
        1
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
