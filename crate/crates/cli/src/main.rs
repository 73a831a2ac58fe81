use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use infassoc::associahedron::{check_sphere_boundary, face_lattice};
use infassoc::complexnav::{
    self, bfs_distance, classify_link, isometry_consistency_check, minimal_cycle, neighbors,
    translation_length_upper, WindowPolicy,
};
use infassoc::ftess::{self, intersect, leq};
use infassoc::{Arc, Dyadic, Error, FTessellation, StandardPartition, ThompsonElement};

mod verify;

#[derive(Parser)]
#[command(name = "infassoc", version, about = "Associahedra, F-tessellations and the Thompson group T")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Window partition for complex queries, e.g. `0,1/4,1/2,3/4`.
    #[arg(long, global = true)]
    window: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Finite associahedron A(P_n).
    Associahedron {
        n: usize,
        #[arg(value_enum)]
        what: AssocQuery,
        #[arg(long, default_value_t = 9)]
        max_n: usize,
    },
    /// F-tessellations, given as JSON `{"removed":[..],"added":[..]}`, a file
    /// holding that JSON, or `A_F`.
    Tess {
        #[command(subcommand)]
        action: TessAction,
    },
    /// Elements of T^±, given as JSON, a file, or shorthands such as
    /// `rot 1/4`, `refl`, `x0`, `id` joined by `*`.
    Group {
        #[command(subcommand)]
        action: GroupAction,
    },
    /// Navigation in the complex C.
    Complex {
        #[command(subcommand)]
        action: ComplexAction,
    },
    /// Runs the verification suite at the given seed.
    VerifyAll,
}

#[derive(Clone, Copy, ValueEnum)]
enum AssocQuery {
    Fvector,
    Lattice,
    Flipgraph,
    SphereCheck,
}

#[derive(Subcommand)]
enum TessAction {
    Validate { tess: String },
    Rank { tess: String },
    Components { tess: String },
    Cell { tess: String },
    Support { tess: String },
    Intersect { a: String, b: String },
    Leq { a: String, b: String },
    Flip { tess: String, arc: String },
    Triangulations {
        tess: String,
        #[arg(long, default_value_t = ftess::DEFAULT_RANK_BOUND)]
        rank_bound: usize,
    },
}

#[derive(Subcommand)]
enum GroupAction {
    Compose { s: String, t: String },
    Inverse { t: String },
    Reduce { t: String },
    Sign { t: String },
    Eval { t: String, x: String },
    Act { t: String, tess: String },
    Witness {
        t: String,
        #[arg(long, default_value_t = 6)]
        max_level: u32,
    },
}

#[derive(Subcommand)]
enum ComplexAction {
    Neighbors { tess: String },
    Distance {
        a: String,
        b: String,
        #[arg(long, default_value_t = 0)]
        expansions: usize,
        #[arg(long, default_value_t = complexnav::DEFAULT_STATE_BUDGET)]
        budget: usize,
    },
    Cycle { e1: String, e2: String },
    Link { tess: String },
    Translation {
        t: String,
        #[arg(long, default_value_t = 1)]
        radius: usize,
        #[arg(long, default_value_t = 0)]
        expansions: usize,
        #[arg(long, default_value_t = complexnav::DEFAULT_STATE_BUDGET)]
        budget: usize,
    },
    IsometryCheck {
        t: String,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
}

/// What a command produced, in every format it supports.
struct Report {
    json: Value,
    text: String,
    dot: Option<String>,
    /// `false` when a check ran and found failures.
    ok: bool,
}

impl Report {
    fn new(json: Value, text: impl Into<String>) -> Self {
        Report {
            json,
            text: text.into(),
            dot: None,
            ok: true,
        }
    }

    fn of<T: Serialize>(value: &T, text: impl Into<String>) -> Self {
        Self::new(serde_json::to_value(value).expect("serializable"), text)
    }

    fn with_dot(mut self, dot: String) -> Self {
        self.dot = Some(dot);
        self
    }

    fn failed_if(mut self, failed: bool) -> Self {
        self.ok = !failed;
        self
    }
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExhausted(_) => 3,
            Error::Parse(_) => 2,
            _ => 1,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult = Result<Report, CliError>;

/// Inline text, or the contents of the file it names.
fn read_input(arg: &str) -> Result<String, CliError> {
    let trimmed = arg.trim_start();
    if !trimmed.starts_with('{') && Path::new(arg).is_file() {
        return std::fs::read_to_string(arg).map_err(|e| CliError::usage(format!("{arg}: {e}")));
    }
    Ok(arg.to_string())
}

fn parse_tess(arg: &str) -> Result<FTessellation, CliError> {
    let text = read_input(arg)?;
    let t = text.trim();
    if t == "A_F" || t == "base" {
        return Ok(FTessellation::base());
    }
    serde_json::from_str(t).map_err(|e| {
        let msg = e.to_string();
        // validation failures surface as check failures, syntax as usage
        if e.is_data() && msg.contains("invalid F-tessellation") {
            CliError { code: 1, message: msg }
        } else {
            CliError::usage(format!("cannot parse tessellation: {msg}"))
        }
    })
}

fn parse_element(arg: &str) -> Result<ThompsonElement, CliError> {
    let text = read_input(arg)?;
    text.parse().map_err(|e: Error| match e {
        Error::Parse(m) if m.contains("invalid Thompson element") => CliError { code: 1, message: m },
        other => CliError::usage(other.to_string()),
    })
}

fn parse_arc(arg: &str) -> Result<Arc, CliError> {
    arg.parse().map_err(|e: Error| CliError::usage(e.to_string()))
}

fn window_policy(cli_window: &Option<String>, inputs: &[&FTessellation], expansions: usize) -> Result<WindowPolicy, CliError> {
    match cli_window {
        Some(w) => {
            let p: StandardPartition = w.parse().map_err(|e: Error| CliError::usage(e.to_string()))?;
            Ok(WindowPolicy::new(p, expansions))
        }
        None => Ok(WindowPolicy::fitting(inputs.iter().copied(), expansions)),
    }
}

fn associahedron(n: usize, what: AssocQuery, max_n: usize) -> CliResult {
    if !(3..=max_n).contains(&n) {
        return Err(CliError::usage(format!("n must lie in 3..={max_n}, got {n}")));
    }
    match what {
        AssocQuery::Fvector => {
            let f = face_lattice(n)?.f_vector();
            let text = f.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
            Ok(Report::new(json!({ "n": n, "f_vector": f }), text))
        }
        AssocQuery::Lattice => {
            let lattice = face_lattice(n)?;
            let text = lattice
                .faces
                .iter()
                .enumerate()
                .map(|(i, f)| format!("{i}\tdim {}\t{f}", f.face_dim()))
                .collect::<Vec<_>>()
                .join("\n");
            let mut dot = format!("digraph face_lattice_p{n} {{\n");
            for (i, f) in lattice.faces.iter().enumerate() {
                dot.push_str(&format!("  {i} [label=\"{f}\"];\n"));
            }
            for (lo, up) in &lattice.covers {
                dot.push_str(&format!("  {lo} -> {up};\n"));
            }
            dot.push_str("}\n");
            Ok(Report::of(&lattice, text).with_dot(dot))
        }
        AssocQuery::Flipgraph => {
            let lattice = face_lattice(n)?;
            let verts = lattice.vertices();
            let edges = lattice.flip_graph();
            let text = format!("{} vertices, {} edges", verts.len(), edges.len());
            let json = json!({
                "n": n,
                "vertices": verts.iter().map(|&v| &lattice.faces[v]).collect::<Vec<_>>(),
                "edges": edges,
            });
            Ok(Report::new(json, text).with_dot(lattice.flip_graph_dot()))
        }
        AssocQuery::SphereCheck => {
            let r = check_sphere_boundary(n)?;
            let text = format!(
                "{} n={} euler={} expected={} components={}{}",
                if r.passed() { "pass" } else { "FAIL" },
                r.n,
                r.euler_characteristic,
                r.expected_euler_characteristic,
                r.components,
                r.failures.iter().map(|f| format!("\n  {f}")).collect::<String>()
            );
            let failed = !r.passed();
            Ok(Report::of(&r, text).failed_if(failed))
        }
    }
}

fn tess_summary(t: &FTessellation) -> Value {
    json!({
        "tessellation": t,
        "rank": t.rank(),
        "components": t.nontriangular_components(),
        "support": t.support_polygon(),
    })
}

fn tess(action: TessAction) -> CliResult {
    match action {
        TessAction::Validate { tess } => match parse_tess(&tess) {
            Ok(t) => {
                let mut v = tess_summary(&t);
                v["valid"] = json!(true);
                Ok(Report::new(v, format!("valid, rank {}", t.rank())))
            }
            Err(e) if e.code == 1 => {
                let text = read_input(&tess)?;
                let raw: Value = serde_json::from_str(&text).map_err(|e| CliError::usage(e.to_string()))?;
                let arcs = |key: &str| -> Result<Vec<Arc>, CliError> {
                    serde_json::from_value(raw.get(key).cloned().unwrap_or(json!([])))
                        .map_err(|e| CliError::usage(e.to_string()))
                };
                let violations = match FTessellation::validate(arcs("removed")?, arcs("added")?) {
                    Err(Error::InvalidTessellation(v)) => v,
                    _ => Vec::new(),
                };
                let text = violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("\n");
                Ok(Report::new(json!({ "valid": false, "violations": violations }), text).failed_if(true))
            }
            Err(e) => Err(e),
        },
        TessAction::Rank { tess } => {
            let t = parse_tess(&tess)?;
            Ok(Report::new(json!({ "rank": t.rank() }), t.rank().to_string()))
        }
        TessAction::Components { tess } => {
            let t = parse_tess(&tess)?;
            let comps = t.nontriangular_components();
            let text = comps
                .iter()
                .map(|c| c.iter().map(Dyadic::to_string).collect::<Vec<_>>().join(" < "))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Report::new(json!({ "components": comps }), text))
        }
        TessAction::Cell { tess } => {
            let c = parse_tess(&tess)?.cell();
            let text = format!("dimension {}, factors {:?}", c.dimension, c.factor_sizes);
            Ok(Report::of(&c, text))
        }
        TessAction::Support { tess } => {
            let w = parse_tess(&tess)?.support_polygon();
            Ok(Report::new(json!({ "support": w }), w.to_string()))
        }
        TessAction::Intersect { a, b } => {
            let r = intersect(&parse_tess(&a)?, &parse_tess(&b)?);
            Ok(Report::of(&r, r.to_string()))
        }
        TessAction::Leq { a, b } => {
            let r = leq(&parse_tess(&a)?, &parse_tess(&b)?);
            Ok(Report::new(json!({ "leq": r }), r.to_string()))
        }
        TessAction::Flip { tess, arc } => {
            let f = parse_tess(&tess)?.flip_arc(&parse_arc(&arc)?)?;
            let text = format!("{} -> {}: {}", f.old_arc, f.new_arc, f.target);
            Ok(Report::of(&f, text))
        }
        TessAction::Triangulations { tess, rank_bound } => {
            let t = parse_tess(&tess)?;
            let all = t.containing_triangulations(rank_bound)?;
            let text = all.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("\n");
            let dot = complexnav::flip_graph_dot(&all);
            Ok(Report::new(json!({ "count": all.len(), "triangulations": all }), text).with_dot(dot))
        }
    }
}

fn group(action: GroupAction) -> CliResult {
    let element = |t: ThompsonElement| {
        let text = t.to_string();
        Report::of(&t, text)
    };
    match action {
        GroupAction::Compose { s, t } => Ok(element(parse_element(&s)?.compose(&parse_element(&t)?))),
        GroupAction::Inverse { t } => Ok(element(parse_element(&t)?.inverse())),
        GroupAction::Reduce { t } => Ok(element(parse_element(&t)?.reduce_minimal())),
        GroupAction::Sign { t } => {
            let s = parse_element(&t)?.sign();
            Ok(Report::new(json!({ "sign": s }), s.to_string()))
        }
        GroupAction::Eval { t, x } => {
            let x: Dyadic = x.parse().map_err(|e: Error| CliError::usage(e.to_string()))?;
            let y = parse_element(&t)?.evaluate(&x);
            Ok(Report::new(json!({ "x": x, "image": y }), y.to_string()))
        }
        GroupAction::Act { t, tess } => {
            let r = parse_element(&t)?.act_tessellation(&parse_tess(&tess)?);
            Ok(Report::of(&r, r.to_string()))
        }
        GroupAction::Witness { t, max_level } => {
            let t = parse_element(&t)?;
            match t.faithfulness_witness(max_level)? {
                None => Ok(Report::new(json!({ "identity": true, "witness": null }), "identity")),
                Some(w) => {
                    let image = t.act_tessellation(&w);
                    let text = format!("{w} moves to {image}");
                    Ok(Report::new(
                        json!({ "identity": false, "witness": w, "image": image }),
                        text,
                    ))
                }
            }
        }
    }
}

fn complex(action: ComplexAction, window: &Option<String>, seed: u64) -> CliResult {
    match action {
        ComplexAction::Neighbors { tess } => {
            let a = parse_tess(&tess)?;
            let policy = window_policy(window, &[&a], 0)?;
            let list = neighbors(&a, &policy.base)?;
            let targets: Vec<FTessellation> = list.iter().map(|(_, t)| t.clone()).collect();
            let text = list
                .iter()
                .map(|(arc, t)| format!("{arc}\t{t}"))
                .collect::<Vec<_>>()
                .join("\n");
            let json = json!({
                "window": policy.base,
                "neighbors": list.iter().map(|(arc, t)| json!({ "arc": arc, "target": t })).collect::<Vec<_>>(),
            });
            let mut all = vec![a];
            all.extend(targets);
            Ok(Report::new(json, text).with_dot(complexnav::flip_graph_dot(&all)))
        }
        ComplexAction::Distance { a, b, expansions, budget } => {
            let (a, b) = (parse_tess(&a)?, parse_tess(&b)?);
            let policy = window_policy(window, &[&a, &b], expansions)?.with_budget(budget);
            let r = bfs_distance(&a, &b, &policy)?;
            let text = format!(
                "bound {}{} (window {}, {} expansions)",
                r.bound,
                if r.exact { ", exact" } else { "" },
                r.window,
                r.expansions
            );
            let dot = complexnav::flip_graph_dot(&r.path);
            Ok(Report::of(&r, text).with_dot(dot))
        }
        ComplexAction::Cycle { e1, e2 } => {
            let link = minimal_cycle(&parse_tess(&e1)?, &parse_tess(&e2)?)?;
            Ok(link_report(&link))
        }
        ComplexAction::Link { tess } => {
            let link = classify_link(&parse_tess(&tess)?)?;
            Ok(link_report(&link))
        }
        ComplexAction::Translation { t, radius, expansions, budget } => {
            let t = parse_element(&t)?;
            let policy = window_policy(window, &[], expansions)?.with_budget(budget);
            let r = translation_length_upper(&t, radius, &policy)?;
            let text = format!("bound {} at {}", r.bound, r.witness);
            Ok(Report::of(&r, text))
        }
        ComplexAction::IsometryCheck { t, samples } => {
            let t = parse_element(&t)?;
            let w = match window {
                Some(w) => w.parse().map_err(|e: Error| CliError::usage(e.to_string()))?,
                None => StandardPartition::uniform(3),
            };
            let r = isometry_consistency_check(&t, samples, seed, &w)?;
            let text = if r.passed() {
                format!("pass: {samples} samples")
            } else {
                r.violations.join("\n")
            };
            let failed = !r.passed();
            Ok(Report::of(&r, text).failed_if(failed))
        }
    }
}

fn link_report(link: &complexnav::CellLink) -> Report {
    let text = format!(
        "{:?}, {} vertices\n{}",
        link.shape,
        link.vertex_count,
        link.vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("\n")
    );
    Report::of(link, text).with_dot(link.to_dot())
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Associahedron { n, what, max_n } => associahedron(n, what, max_n),
        Command::Tess { action } => tess(action),
        Command::Group { action } => group(action),
        Command::Complex { action } => complex(action, &cli.window, cli.seed),
        Command::VerifyAll => {
            let results = verify::run_all(cli.seed);
            let failed = results.iter().any(|r| !r.passed);
            let text = results
                .iter()
                .map(|r| format!("{}  {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Report::of(&results, text).failed_if(failed))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(report) => {
            let out = match format {
                Format::Json => serde_json::to_string_pretty(&report.json).expect("valid json"),
                Format::Text => report.text,
                Format::Dot => match report.dot {
                    Some(d) => d.trim_end().to_string(),
                    None => {
                        eprintln!("error: this command has no DOT output");
                        return ExitCode::from(2);
                    }
                },
            };
            println!("{out}");
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
