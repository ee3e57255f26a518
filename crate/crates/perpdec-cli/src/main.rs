use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use perpdec::address::{self, Reference};
use perpdec::bilinear::{self, BilinearMap};
use perpdec::frames::{self, Frame, TransportOutcome};
use perpdec::groups::{self, GroupPresentation};
use perpdec::linalg::SquareClass;
use perpdec::oracle::{self, OracleBudget};
use perpdec::structure::StarStructure;
use perpdec::{Error, ErrorKind};

#[derive(Parser)]
#[command(name = "perpdec", version, about = "Orthogonal decompositions of bilinear maps and central decompositions of p-groups")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Seed for all randomised steps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cross-check results with exhaustive oracles where the instance is small.
    #[arg(long, global = true)]
    oracle: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the main output here instead of stdout.
    #[arg(short = 'o', long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Disc {
    Square,
    Nonsquare,
}

impl From<Disc> for SquareClass {
    fn from(d: Disc) -> Self {
        match d {
            Disc::Square => SquareClass::Square,
            Disc::Nonsquare => SquareClass::Nonsquare,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a bilinear map (or a group presentation) from a named family.
    Construct(ConstructArgs),
    /// Structure of the adjoint algebra and the indecomposability verdict.
    Analyze { map: PathBuf },
    /// Frame, fully refined decomposition and invariants.
    Decompose {
        map: PathBuf,
        /// Directory for frame.json, decomposition.json and invariants.json.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Pair equal-address members of a frame into an involution.
    Semirefine { map: PathBuf, frame: PathBuf },
    /// Isometry carrying one frame onto another, or the address obstruction.
    Transport { map: PathBuf, from: PathBuf, to: PathBuf },
    /// Change the address of one orthogonal ideal of a frame.
    Readdress {
        map: PathBuf,
        frame: PathBuf,
        #[arg(long, default_value_t = 0)]
        ideal: usize,
        /// Number of members unequal to the reference after the change.
        #[arg(long)]
        target: usize,
    },
    /// Validate a frame file against a map.
    Verify { map: PathBuf, frame: PathBuf },
    /// Central decomposition of a presented group.
    GroupDecompose { presentation: PathBuf },
    /// Check a central decomposition file against a presentation.
    VerifyGroup { presentation: PathBuf, decomposition: PathBuf },
    /// Classify a presented group up to central indecomposability.
    ClassifyGroup { presentation: PathBuf },
    /// Orbit counts for 2n copies of the exterior square of GF(p)^3.
    VerifyOrbits {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        p: u64,
    },
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(value_enum)]
    family: Family,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 5)]
    p: u64,
    #[arg(long, value_enum, default_value_t = Disc::Square)]
    disc: Disc,
    /// Base for central-power, as family:n (for example exterior-square:3).
    #[arg(long)]
    base: Option<String>,
    #[arg(long, default_value_t = 2)]
    copies: usize,
    /// Emit the presentation of the group instead of the map.
    #[arg(long)]
    presentation: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    ExteriorSquare,
    Alternating,
    Exchange,
    Dot,
    CentralPower,
    /// Orthogonal sum of n copies of the alternating plane.
    Extraspecial,
}

struct Failure {
    kind: ErrorKind,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { kind: e.kind(), message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { kind: ErrorKind::Input, message: e.to_string() }
    }
}

fn verification(msg: impl Into<String>) -> Failure {
    Failure { kind: ErrorKind::Verification, message: msg.into() }
}

type Outcome = Result<Value, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = &cli.common;
    match run(&cli.command, c).and_then(|v| emit(&v, c)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(match f.kind {
                ErrorKind::Verification => 1,
                ErrorKind::Input => 2,
                ErrorKind::Budget => 3,
            })
        }
    }
}

fn emit(v: &Value, c: &Common) -> Result<(), Failure> {
    let text = match c.format {
        Format::Json => serde_json::to_string_pretty(v).expect("json value") + "\n",
        Format::Table => table(v),
    };
    match &c.output {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn table(v: &Value) -> String {
    let Value::Object(map) = v else {
        return format!("{v}\n");
    };
    let width = map.keys().map(|k| k.len()).max().unwrap_or(0);
    map.iter()
        .map(|(k, x)| {
            let shown = match x {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            format!("{k:<width$}  {shown}\n")
        })
        .collect()
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serialisable")
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure { kind: ErrorKind::Input, message: format!("{}: {e}", path.display()) })
}

fn load_map(path: &Path) -> Result<BilinearMap, Failure> {
    Ok(BilinearMap::from_json(&read(path)?)?)
}

fn load_frame(s: &StarStructure, path: &Path) -> Result<Frame, Failure> {
    Ok(Frame::from_json(s, &read(path)?)?)
}

fn load_presentation(path: &Path) -> Result<GroupPresentation, Failure> {
    Ok(GroupPresentation::from_json(&read(path)?)?)
}

fn run(cmd: &Command, c: &Common) -> Outcome {
    match cmd {
        Command::Construct(a) => construct(a),
        Command::Analyze { map } => analyze(&load_map(map)?, c),
        Command::Decompose { map, out_dir } => decompose(&load_map(map)?, out_dir.as_deref(), c),
        Command::Semirefine { map, frame } => {
            let s = StarStructure::new(&load_map(map)?)?;
            let fr = load_frame(&s, frame)?;
            let reference = Reference::canonical(&s)?;
            Ok(to_value(&address::semirefine(&s, &fr, &reference, c.seed)?.to_file()))
        }
        Command::Transport { map, from, to } => {
            let s = StarStructure::new(&load_map(map)?)?;
            let (a, b) = (load_frame(&s, from)?, load_frame(&s, to)?);
            match frames::transport_frames(&s, &a, &b, c.seed)? {
                TransportOutcome::Isometry(t) => Ok(json!({"isometry": t.isometry.to_rows(), "matching": t.matching})),
                TransportOutcome::AddressObstruction { ideal } => {
                    Err(verification(format!("address obstruction: orthogonal ideal {ideal} has different addresses in the two frames")))
                }
            }
        }
        Command::Readdress { map, frame, ideal, target } => {
            let s = StarStructure::new(&load_map(map)?)?;
            let fr = load_frame(&s, frame)?;
            let reference = Reference::canonical(&s)?;
            let out = address::readdress(&s, &fr, *ideal, *target, &reference, c.seed)?;
            Ok(to_value(&out.frame.to_file()))
        }
        Command::Verify { map, frame } => {
            let s = StarStructure::new(&load_map(map)?)?;
            let text = read(frame)?;
            match Frame::from_json(&s, &text) {
                Ok(fr) => Ok(json!({"valid": true, "members": fr.len()})),
                Err(e) if e.kind() == ErrorKind::Input && !matches!(e, Error::Json(_)) => Err(verification(e.to_string())),
                Err(e) => Err(e.into()),
            }
        }
        Command::GroupDecompose { presentation } => {
            let pres = load_presentation(presentation)?;
            let out = groups::central_decomposition(&pres, c.seed)?;
            let mut v = to_value(&out.decomposition);
            if let Some(inv) = out.invariants {
                v["invariants"] = to_value(&inv);
            }
            Ok(v)
        }
        Command::VerifyGroup { presentation, decomposition } => {
            let pres = load_presentation(presentation)?;
            let d = groups::CentralDecomposition::from_json(&read(decomposition)?)?;
            let check = groups::verify_central_decomposition(&pres, &d)?;
            if check.ok() {
                Ok(to_value(&check))
            } else {
                Err(verification(check.violations.join("; ")))
            }
        }
        Command::ClassifyGroup { presentation } => Ok(to_value(&groups::classify_group(&load_presentation(presentation)?)?)),
        Command::VerifyOrbits { n, p } => {
            let r = address::verify_many_orbits(*n, *p, c.seed)?;
            if r.ok() {
                Ok(to_value(&r))
            } else {
                Err(verification(format!("orbit counts differ from the expected values: {}", to_value(&r))))
            }
        }
    }
}

fn family_map(name: &str, n: usize, p: u64) -> Result<BilinearMap, Failure> {
    Ok(match name {
        "exterior-square" => bilinear::exterior_square(n, p)?,
        "alternating" => bilinear::standard_alternating(p)?,
        "exchange" => bilinear::exchange_map(n, p)?,
        "dot" => bilinear::dot_form(n, p, SquareClass::Square)?,
        "extraspecial" => bilinear::central_power(&bilinear::standard_alternating(p)?, n)?,
        other => return Err(Failure { kind: ErrorKind::Input, message: format!("unknown base family {other}") }),
    })
}

fn construct(a: &ConstructArgs) -> Outcome {
    let map = match a.family {
        Family::ExteriorSquare => bilinear::exterior_square(a.n, a.p)?,
        Family::Alternating => bilinear::standard_alternating(a.p)?,
        Family::Exchange => bilinear::exchange_map(a.n, a.p)?,
        Family::Dot => bilinear::dot_form(a.n, a.p, a.disc.into())?,
        Family::Extraspecial => bilinear::central_power(&bilinear::standard_alternating(a.p)?, a.n)?,
        Family::CentralPower => {
            let spec = a.base.as_deref().unwrap_or("exterior-square:3");
            let (name, dim) = spec.split_once(':').unwrap_or((spec, "3"));
            let dim = dim.parse().map_err(|_| Failure { kind: ErrorKind::Input, message: format!("bad base dimension in {spec}") })?;
            bilinear::central_power(&family_map(name, dim, a.p)?, a.copies)?
        }
    };
    if a.presentation {
        Ok(to_value(&groups::presentation_of(&map)?))
    } else {
        Ok(to_value(&map.to_file()))
    }
}

fn analyze(b: &BilinearMap, c: &Common) -> Outcome {
    let s = StarStructure::new(b)?;
    let mut v = to_value(&s.report());
    if c.oracle {
        let budget = OracleBudget::default();
        let ss = oracle::semisimplicity_oracle(s.quotient().algebra(), budget, 2000);
        let mut o = json!({"quotient_semisimple": ss.semisimple, "exhaustive": ss.exhaustive});
        match oracle::enumerate_idempotents(s.sym(), b.p(), budget) {
            Ok(all) => {
                let trivial_only = all.len() == 2;
                o["idempotents"] = json!(all.len());
                o["indecomposable_agrees"] = json!(trivial_only == s.is_indecomposable());
                if trivial_only != s.is_indecomposable() || !ss.semisimple {
                    return Err(verification(format!("oracle disagrees with the structure computation: {o}")));
                }
            }
            Err(_) => o["idempotents"] = json!("over budget"),
        }
        v["oracle"] = o;
    }
    Ok(v)
}

fn decompose(b: &BilinearMap, out_dir: Option<&Path>, c: &Common) -> Outcome {
    let s = StarStructure::new(b)?;
    let fr = frames::frame(&s, c.seed)?;
    let members = frames::frame_decomposition(&fr);
    let inv = address::invariants(&s, &fr, c.seed)?;
    let decomposition = json!({
        "members": members.iter().map(|x| x.vectors()).collect::<Vec<_>>(),
        "ideal": fr.ideals,
    });
    let mut v = json!({
        "member_count": fr.len(),
        "indecomposable": s.is_indecomposable(),
        "invariants": to_value(&inv),
    });
    if s.is_indecomposable() {
        v["notice"] = json!("map is orthogonally indecomposable: the decomposition has a single member");
    }
    if c.oracle {
        match oracle::enumerate_idempotents(s.sym(), b.p(), OracleBudget::default()) {
            Ok(all) => {
                let found = fr.idempotents.iter().all(|e| all.contains(e));
                if !found {
                    return Err(verification("a frame idempotent is missing from the enumerated idempotents"));
                }
                v["oracle"] = json!({"frame_idempotents_enumerated": true, "idempotents": all.len()});
            }
            Err(_) => v["oracle"] = json!({"idempotents": "over budget"}),
        }
    }
    match out_dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join("frame.json"), fr.to_json() + "\n")?;
            fs::write(dir.join("decomposition.json"), decomposition.to_string() + "\n")?;
            fs::write(dir.join("invariants.json"), serde_json::to_string(&inv).expect("json") + "\n")?;
        }
        None => {
            v["frame"] = to_value(&fr.to_file());
            v["decomposition"] = decomposition;
        }
    }
    Ok(v)
}
