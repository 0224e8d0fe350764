//! `majid`: JSON in, JSON report out.
//!
//! Exit codes: 0 the property holds, 1 it fails, 2 malformed input,
//! 3 budget refusal, 4 precondition violated, 5 I/O error.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use majid_core::cocycle::{
    classify, cocycle_counterexample, is_coboundary, Cochain3, Combination, Differential,
    TableCochain3,
};
use majid_core::construct::{
    cartan_construction, standard_construction, CartanInput, StandardOutcome,
};
use majid_core::diagram::Diagram;
use majid_core::double::{abelian_counterexample, is_abelian_spec, majid_axiom_check};
use majid_core::resolution::{obstruction_check, verify_resolution};
use majid_core::rootdatum::{
    braiding_of_yd, build_yd_module, check_congruences, determine_a, verify_root_datum, RootDatum,
};
use majid_core::sample::random_cochain2;
use majid_core::{Budget, CocycleSpec, Error, FinAbGroup, GroupElem, Phase};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "majid",
    version,
    about = "Exact computations with 3-cocycles, twisted doubles and root data"
)]
struct Cli {
    /// Maximum number of tuples an exhaustive check may visit.
    #[arg(long, global = true, env = "MAJID_BUDGET", default_value_t = Budget::DEFAULT_TUPLES,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "MAJID_JOBS", value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    /// Seed for randomized commands.
    #[arg(long, global = true, env = "MAJID_SEED", default_value_t = 0)]
    seed: u64,
    /// Also write the report to this file.
    #[arg(long = "json", global = true, value_name = "OUT")]
    json_out: Option<PathBuf>,
    #[command(subcommand)]
    group: Group,
}

#[derive(Subcommand)]
enum Group {
    /// Normalized 3-cocycles on a finite abelian group.
    Cocycle {
        #[command(subcommand)]
        action: CocycleCmd,
    },
    /// The twisted double and the quasi-Hopf axioms.
    Double {
        #[command(subcommand)]
        action: DoubleCmd,
    },
    /// Trivialization on the squared-moduli cover.
    Resolve {
        #[command(subcommand)]
        action: ResolveCmd,
    },
    /// Root data and their Yetter-Drinfeld modules.
    Rootdatum {
        #[command(subcommand)]
        action: RootDatumCmd,
    },
    /// Generators of genuine examples.
    Construct {
        #[command(subcommand)]
        action: ConstructCmd,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PhiInput {
    /// Coefficient vector JSON.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Tabulated cochain JSON `{"moduli", "values"}`.
    #[arg(long)]
    cochain: Option<PathBuf>,
}

#[derive(Args)]
struct SpecInput {
    /// Coefficient vector JSON.
    #[arg(long)]
    spec: PathBuf,
}

#[derive(Subcommand)]
enum CocycleCmd {
    /// Evaluate Φ_a at one triple.
    Eval {
        #[command(flatten)]
        input: SpecInput,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        x: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        y: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        z: Vec<i64>,
    },
    /// Exhaustive normalization and cocycle check.
    Check {
        #[command(flatten)]
        input: PhiInput,
    },
    /// The canonical coefficient vector of a cocycle.
    Classify {
        #[command(flatten)]
        input: PhiInput,
    },
    /// Decide whether a cocycle is a coboundary.
    IsCoboundary {
        #[command(flatten)]
        input: PhiInput,
    },
    /// Write Φ_a as a value table.
    Tabulate {
        #[command(flatten)]
        input: SpecInput,
    },
    /// Classify Φ_a + ∂J for seeded random 2-cochains J.
    Absorb {
        #[command(flatten)]
        input: SpecInput,
        /// Number of random cochains.
        #[arg(long, default_value_t = 10)]
        count: u32,
        /// Denominator of the random values (default: twice the exponent).
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        den: Option<u64>,
    },
}

#[derive(Subcommand)]
enum DoubleCmd {
    /// Commutativity (formula vs brute force) and the axiom suite.
    Check {
        #[command(flatten)]
        input: SpecInput,
    },
}

#[derive(Subcommand)]
enum ResolveCmd {
    /// Check ∂J_a = π*Φ_a, or the obstruction for non-abelian a.
    Verify {
        #[command(flatten)]
        input: SpecInput,
    },
}

#[derive(Args)]
struct DatumInput {
    /// Root datum JSON.
    #[arg(long)]
    datum: PathBuf,
}

#[derive(Subcommand)]
enum RootDatumCmd {
    /// Check every root-datum condition.
    Verify {
        #[command(flatten)]
        input: DatumInput,
        /// Also require a connected diagram.
        #[arg(long)]
        require_connected: bool,
    },
    /// The cocycle coefficients forced by the datum.
    DetermineA {
        #[command(flatten)]
        input: DatumInput,
    },
    /// Build the module, check descent and read the braiding back.
    Yd {
        #[command(flatten)]
        input: DatumInput,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Datum from a symmetrizable Cartan matrix.
    Cartan {
        /// JSON `{"cartan_matrix": [[...]], "component_orders": [...]}`.
        #[arg(long)]
        matrix: PathBuf,
        /// Per-component orders, overriding the file.
        #[arg(long, value_delimiter = ',')]
        orders: Option<Vec<u64>>,
    },
    /// Datum from a diagram with a non-squarefree label order.
    Standard {
        /// Diagram JSON `{"q_ii": [...], "q_tilde": {...}}`.
        #[arg(long)]
        diagram: PathBuf,
    },
}

enum Failure {
    Input(String),
    Budget(String),
    Precondition(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Budget(_) => 3,
            Failure::Precondition(_) => 4,
            Failure::Io(_) => 5,
        }
    }

    fn parts(&self) -> (&'static str, &str) {
        match self {
            Failure::Input(m) => ("malformed_input", m),
            Failure::Budget(m) => ("budget_exceeded", m),
            Failure::Precondition(m) => ("precondition", m),
            Failure::Io(m) => ("io", m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let m = e.to_string();
        match e {
            Error::InvalidInput(_)
            | Error::DimensionMismatch { .. }
            | Error::AsymmetricDiagram { .. }
            | Error::InvalidCartan(_) => Failure::Input(m),
            Error::BudgetExceeded { .. } => Failure::Budget(m),
            Error::Precondition(_)
            | Error::NotInvariantFactor(_)
            | Error::RankTooLarge { .. }
            | Error::NoClassFound
            | Error::Overflow(_) => Failure::Precondition(m),
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

/// A report and whether the property it checks holds.
struct Outcome {
    holds: bool,
    command: &'static str,
    claim: &'static str,
    input: Value,
    result: Value,
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Res<T> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Io(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

enum Phi {
    Spec(CocycleSpec),
    Table(TableCochain3),
}

impl Cochain3 for Phi {
    fn group(&self) -> &FinAbGroup {
        match self {
            Phi::Spec(s) => s.group(),
            Phi::Table(t) => t.group(),
        }
    }
    fn eval(&self, x: &GroupElem, y: &GroupElem, z: &GroupElem) -> Phase {
        match self {
            Phi::Spec(s) => s.eval(x, y, z).expect("elements belong to the group"),
            Phi::Table(t) => t.eval(x, y, z),
        }
    }
}

fn load_phi(input: &PhiInput) -> Res<(Phi, Value)> {
    match (&input.spec, &input.cochain) {
        (Some(p), _) => {
            let s: CocycleSpec = read_json(p)?;
            let echo = json!({ "spec": to_value(&s) });
            Ok((Phi::Spec(s), echo))
        }
        (None, Some(p)) => {
            let t: TableCochain3 = read_json(p)?;
            let echo =
                json!({ "cochain": { "moduli": t.group().moduli(), "entries": t.values().len() } });
            Ok((Phi::Table(t), echo))
        }
        (None, None) => Err(Failure::Input(
            "one of --spec or --cochain is required".into(),
        )),
    }
}

fn load_spec(input: &SpecInput) -> Res<(CocycleSpec, Value)> {
    let s: CocycleSpec = read_json(&input.spec)?;
    let echo = json!({ "spec": to_value(&s) });
    Ok((s, echo))
}

fn load_datum(input: &DatumInput) -> Res<(RootDatum, Value)> {
    let d: RootDatum = read_json(&input.datum)?;
    let echo = json!({ "datum": to_value(&d) });
    Ok((d, echo))
}

fn cocycle(cmd: &CocycleCmd, budget: &Budget, seed: u64) -> Res<Outcome> {
    Ok(match cmd {
        CocycleCmd::Eval { input, x, y, z } => {
            let (spec, mut echo) = load_spec(input)?;
            let g = spec.group();
            let (ex, ey, ez) = (g.elem(x)?, g.elem(y)?, g.elem(z)?);
            let v = spec.eval(&ex, &ey, &ez)?;
            echo["x"] = to_value(&ex);
            echo["y"] = to_value(&ey);
            echo["z"] = to_value(&ez);
            Outcome {
                holds: true,
                command: "cocycle eval",
                claim: "value of the normalized 3-cocycle with the given coefficients",
                input: echo,
                result: json!({ "value": v }),
            }
        }
        CocycleCmd::Check { input } => {
            let (phi, echo) = load_phi(input)?;
            let hit = cocycle_counterexample(&phi, budget)?;
            let mut result = json!({ "is_cocycle": hit.is_none() });
            if let Some(h) = &hit {
                let kind = if h.len() == 3 {
                    "normalization"
                } else {
                    "cocycle"
                };
                result["counterexample"] = json!({ "condition": kind, "elements": to_value(h) });
            }
            Outcome {
                holds: hit.is_none(),
                command: "cocycle check",
                claim: "the cochain is normalized and satisfies the 3-cocycle condition",
                input: echo,
                result,
            }
        }
        CocycleCmd::Classify { input } => {
            let (phi, echo) = load_phi(input)?;
            let spec = classify(&phi, budget)?;
            Outcome {
                holds: true,
                command: "cocycle classify",
                claim: "every normalized 3-cocycle is cohomologous to exactly one canonical Φ_a",
                input: echo,
                result: json!({ "spec": to_value(&spec) }),
            }
        }
        CocycleCmd::IsCoboundary { input } => {
            let (phi, echo) = load_phi(input)?;
            let w = is_coboundary(&phi, budget)?;
            let mut result = json!({ "coboundary": w.is_some() });
            if let Some(w) = &w {
                result["witness"] = to_value(w);
            }
            Outcome {
                holds: w.is_some(),
                command: "cocycle is-coboundary",
                claim: "Φ_a is a coboundary exactly when a = 0",
                input: echo,
                result,
            }
        }
        CocycleCmd::Tabulate { input } => {
            let (spec, echo) = load_spec(input)?;
            let t = TableCochain3::tabulate(&spec, budget)?;
            Outcome {
                holds: true,
                command: "cocycle tabulate",
                claim: "value table of Φ_a in index order, last coordinate fastest",
                input: echo,
                result: json!({ "cochain": to_value(&t) }),
            }
        }
        CocycleCmd::Absorb { input, count, den } => {
            let (spec, mut echo) = load_spec(input)?;
            let g = spec.group().clone();
            let den = den.unwrap_or(2 * g.exponent().max(1));
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut failures = Vec::new();
            for k in 0..*count {
                let j = random_cochain2(&g, den, &mut rng);
                let dj = Differential::new(&j);
                let sum = Combination::sum(&spec, &dj)?;
                let table = TableCochain3::tabulate(&sum, budget)?;
                if classify(&table, budget)? != spec.canonical() {
                    failures.push(k);
                }
            }
            echo["count"] = json!(count);
            echo["den"] = json!(den);
            echo["seed"] = json!(seed);
            Outcome {
                holds: failures.is_empty(),
                command: "cocycle absorb",
                claim: "adding a coboundary does not change the class of Φ_a",
                input: echo,
                result: json!({ "absorbed": failures.is_empty(), "failures": failures }),
            }
        }
    })
}

fn double(cmd: &DoubleCmd, budget: &Budget) -> Res<Outcome> {
    let DoubleCmd::Check { input } = cmd;
    let (spec, echo) = load_spec(input)?;
    let formula = is_abelian_spec(&spec);
    let hit = abelian_counterexample(&spec, budget)?;
    let axioms = majid_axiom_check(&spec, budget)?;
    let mut result = json!({
        "abelian": formula,
        "abelian_bruteforce": hit.is_none(),
        "axioms": to_value(&axioms),
        "axioms_hold": axioms.all_pass(),
    });
    if let Some(h) = &hit {
        result["noncommuting"] = json!({ "g": h[0], "x": h[1], "y": h[2] });
    }
    Ok(Outcome {
        holds: axioms.all_pass() && formula == hit.is_none(),
        command: "double check",
        claim: "the twisted double is commutative iff every a_rst vanishes; \
                (kG, Φ_a) satisfies the quasi-Hopf axioms on group-likes",
        input: echo,
        result,
    })
}

fn resolve(cmd: &ResolveCmd, budget: &Budget) -> Res<Outcome> {
    let ResolveCmd::Verify { input } = cmd;
    let (spec, echo) = load_spec(input)?;
    let (holds, result) = if spec.is_abelian() {
        let r = verify_resolution(&spec, budget)?;
        (r.resolved, to_value(&r))
    } else {
        let r = obstruction_check(&spec)?;
        (
            false,
            json!({ "abelian": false, "resolved": false, "obstruction": to_value(&r) }),
        )
    };
    Ok(Outcome {
        holds,
        command: "resolve verify",
        claim: "abelian 3-cocycles become coboundaries on the squared-moduli cover; \
                non-abelian ones keep a nonzero f_rst",
        input: echo,
        result,
    })
}

fn rootdatum(cmd: &RootDatumCmd) -> Res<Outcome> {
    Ok(match cmd {
        RootDatumCmd::Verify {
            input,
            require_connected,
        } => {
            let (d, mut echo) = load_datum(input)?;
            echo["require_connected"] = json!(require_connected);
            let r = verify_root_datum(&d, *require_connected);
            Outcome {
                holds: r.pass,
                command: "rootdatum verify",
                claim: "the datum satisfies every root-datum condition and its module descends",
                input: echo,
                result: to_value(&r),
            }
        }
        RootDatumCmd::DetermineA { input } => {
            let (d, echo) = load_datum(input)?;
            let t = d
                .t()
                .ok_or_else(|| Failure::Precondition("S has no left inverse T".into()))?;
            let rep = check_congruences(d.x(), t, d.base())?;
            let a = determine_a(&d)?;
            Outcome {
                holds: a.is_some(),
                command: "rootdatum determine-a",
                claim: "a root datum forces at most one abelian coefficient vector",
                input: echo,
                result: json!({ "a": a.as_ref().map(to_value), "congruences": to_value(&rep) }),
            }
        }
        RootDatumCmd::Yd { input } => {
            let (d, echo) = load_datum(input)?;
            let v = build_yd_module(&d)?;
            let braiding = braiding_of_yd(&v);
            let roundtrip = braiding == *d.diagram();
            let failures: Vec<Value> = v
                .descent_failures()
                .iter()
                .map(|(i, j, p)| json!({ "i": i + 1, "j": j + 1, "phase": p }))
                .collect();
            Outcome {
                holds: roundtrip && failures.is_empty(),
                command: "rootdatum yd",
                claim: "the twisted module descends to the base group and realizes the diagram",
                input: echo,
                result: json!({
                    "module": to_value(&v),
                    "braiding": to_value(&braiding),
                    "roundtrip": roundtrip,
                    "descends": failures.is_empty(),
                    "descent_failures": failures,
                    "support_group": to_value(&v.support_group()),
                }),
            }
        }
    })
}

fn construct(cmd: &ConstructCmd) -> Res<Outcome> {
    Ok(match cmd {
        ConstructCmd::Cartan { matrix, orders } => {
            let mut inp: CartanInput = read_json(matrix)?;
            if let Some(o) = orders {
                inp.component_orders = Some(o.clone());
            }
            let c = cartan_construction(&inp)?;
            Outcome {
                holds: c.genuine,
                command: "construct cartan",
                claim: "a Cartan matrix with odd component orders gives a genuine root datum with a_i = d_i",
                input: json!({ "cartan": to_value(&inp) }),
                result: to_value(&c),
            }
        }
        ConstructCmd::Standard { diagram } => {
            let d: Diagram = read_json(diagram)?;
            let out = standard_construction(&d)?;
            Outcome {
                holds: matches!(out, StandardOutcome::Built { .. }),
                command: "construct standard",
                claim:
                    "a diagram with a non-squarefree label order admits a genuine standard datum",
                input: json!({ "diagram": to_value(&d) }),
                result: to_value(&out),
            }
        }
    })
}

fn run(cli: &Cli) -> Res<Outcome> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j as usize)
            .build_global()
            .map_err(|e| Failure::Precondition(format!("thread pool: {e}")))?;
    }
    let budget = Budget::new(cli.budget);
    match &cli.group {
        Group::Cocycle { action } => cocycle(action, &budget, cli.seed),
        Group::Double { action } => double(action, &budget),
        Group::Resolve { action } => resolve(action, &budget),
        Group::Rootdatum { action } => rootdatum(action),
        Group::Construct { action } => construct(action),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Res<()> {
    print!("{text}");
    if let Some(p) = out {
        std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.json_out.as_deref();
    let result = run(&cli).and_then(|o| {
        let report = json!({
            "schema": 1,
            "command": o.command,
            "claim": o.claim,
            "holds": o.holds,
            "input": o.input,
            "result": o.result,
        });
        let text = serde_json::to_string_pretty(&report).expect("values serialize") + "\n";
        emit(&text, out)?;
        Ok(o.holds)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            let (kind, message) = f.parts();
            let report = json!({ "schema": 1, "error": { "kind": kind, "message": message } });
            eprintln!(
                "{}",
                serde_json::to_string(&report).expect("values serialize")
            );
            ExitCode::from(f.code())
        }
    }
}
