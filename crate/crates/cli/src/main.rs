use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pointfree::colimits::pushout_loc;
use pointfree::frame::DEFAULT_MAX_FRAME;
use pointfree::json::{
    frame_to_json, hom_from_json, hom_to_json, map_from_json, map_to_json, maps_from_json, poset_from_json,
    poset_to_json, psspace_from_json, psspace_to_json, pushout_to_json, space_from_json, space_to_json,
    square_from_json, trace_to_json, frame_from_json, tensor_to_json,
};
use pointfree::lifting::bounded_factorize;
use pointfree::poset::DEFAULT_DOWNSET_CAP;
use pointfree::pstop::{continuity_witness, Filter, PsSpace};
use pointfree::spatial::{omega, pt};
use pointfree::suites::{self, SuiteConfig};
use pointfree::tensor::{copair, coproduct_capped};
use pointfree::{Error, FiniteFrame, Labels};

#[derive(Parser)]
#[command(name = "pointfree", version, about = "Finite frames, locales, pseudotopologies and lifting checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the JSON result to this file instead of stdout.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,

    /// Worker threads for the suites (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a structure and print its canonical form.
    Validate(ValidateArgs),
    /// The frame of downsets of a poset.
    Downsets {
        #[arg(long)]
        poset: PathBuf,
        #[arg(long)]
        max_frame_size: Option<usize>,
    },
    /// The frame of opens of a space.
    Omega {
        #[arg(long)]
        space: PathBuf,
    },
    /// The space of points of a frame.
    Pt {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long)]
        max_frame_size: Option<usize>,
    },
    /// The frame coproduct L ⊗ M.
    Coproduct {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        max_frame_size: Option<usize>,
    },
    /// The mediating map L ⊗ M → N of two homs L → N and M → N.
    Copair {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
    },
    /// The pushout of locales along a span of frame homs f: B → A, g: C → A.
    PushoutLoc {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
    },
    /// Pseudotopological spaces.
    Pstop {
        #[command(subcommand)]
        command: PstopCommand,
    },
    /// Lifting problems and bounded factorization.
    Lift {
        #[command(subcommand)]
        command: LiftCommand,
    },
    /// Run a group of verification suites.
    Check(CheckArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ValidateArgs {
    #[arg(long)]
    poset: Option<PathBuf>,
    #[arg(long)]
    frame: Option<PathBuf>,
    #[arg(long)]
    space: Option<PathBuf>,
    #[arg(long)]
    hom: Option<PathBuf>,
    #[arg(long)]
    map: Option<PathBuf>,
    #[arg(long)]
    psspace: Option<PathBuf>,
}

#[derive(Subcommand)]
enum PstopCommand {
    /// The topological modification τξ.
    Tau {
        #[arg(long)]
        space: PathBuf,
    },
    /// Pointwise union of limit sets (the coarser structure).
    Meet {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Pointwise intersection of limit sets (the finer structure).
    Join {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Continuity of a map {"source", "target", "map"} between pseudotopologies.
    Check {
        #[arg(long)]
        map: PathBuf,
    },
}

#[derive(Subcommand)]
enum LiftCommand {
    /// Solve a lifting square {"i", "f", "u", "v"}.
    Check {
        #[arg(long)]
        square: PathBuf,
    },
    /// Bounded small object argument.
    Factorize {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        gens: PathBuf,
        #[arg(long, default_value_t = 3)]
        steps: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Group {
    Frames,
    Colimits,
    Spatial,
    PstopLemmas,
    Lifting,
    All,
}

impl Group {
    fn name(self) -> &'static str {
        match self {
            Group::Frames => "frames",
            Group::Colimits => "colimits",
            Group::Spatial => "spatial",
            Group::PstopLemmas => "pstop-lemmas",
            Group::Lifting => "lifting",
            Group::All => "all",
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    #[arg(value_enum)]
    group: Group,
    /// Run one suite of the group by key.
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    max_points: Option<usize>,
    #[arg(long)]
    max_frame_size: Option<usize>,
    /// Step bound for the small object suite.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Include wall time per suite (makes the report nondeterministic).
    #[arg(long)]
    timings: bool,
}

enum Failure {
    Input(Error),
    Usage(String),
    Io(PathBuf, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

impl Failure {
    fn to_json(&self) -> Value {
        match self {
            Failure::Input(e) => json!({ "error": e.kind(), "message": e.to_string() }),
            Failure::Usage(m) => json!({ "error": "UsageError", "message": m }),
            Failure::Io(p, e) => json!({ "error": "IoError", "message": format!("{}: {e}", p.display()) }),
        }
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))?;
    Ok(serde_json::from_str(&text).map_err(Error::from)?)
}

fn read_frame(path: &Path, cap: Option<usize>) -> Result<Arc<FiniteFrame>, Failure> {
    Ok(Arc::new(frame_from_json(&read_json(path)?, cap.unwrap_or(DEFAULT_MAX_FRAME))?))
}

fn filter_json(labels: &Labels, f: Filter) -> Value {
    match f {
        Filter::Principal(base) => json!({ "base": pointfree::json::set_to_json(labels, base) }),
        Filter::Improper => json!("improper"),
    }
}

fn validate(args: &ValidateArgs) -> Result<Value, Failure> {
    let (kind, canonical) = if let Some(p) = &args.poset {
        ("poset", poset_to_json(&poset_from_json(&read_json(p)?)?))
    } else if let Some(p) = &args.frame {
        ("frame", frame_to_json(&*read_frame(p, None)?))
    } else if let Some(p) = &args.space {
        ("space", space_to_json(&space_from_json(&read_json(p)?)?)?)
    } else if let Some(p) = &args.hom {
        ("hom", hom_to_json(&hom_from_json(&read_json(p)?)?))
    } else if let Some(p) = &args.map {
        ("map", map_to_json(&map_from_json(&read_json(p)?)?)?)
    } else if let Some(p) = &args.psspace {
        ("psspace", psspace_to_json(&psspace_from_json(&read_json(p)?)?))
    } else {
        return Err(Failure::Usage("nothing to validate".into()));
    };
    Ok(json!({ "kind": kind, "valid": true, "canonical": canonical }))
}

fn pstop(cmd: &PstopCommand) -> Result<Value, Failure> {
    let read = |p: &Path| -> Result<PsSpace, Failure> { Ok(psspace_from_json(&read_json(p)?)?) };
    Ok(match cmd {
        PstopCommand::Tau { space } => space_to_json(&read(space)?.top_modification())?,
        PstopCommand::Meet { left, right } => psspace_to_json(&read(left)?.meet(&read(right)?)?),
        PstopCommand::Join { left, right } => psspace_to_json(&read(left)?.join(&read(right)?)?),
        PstopCommand::Check { map } => {
            let v = read_json(map)?;
            let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("missing field `{k}`")));
            let xi = psspace_from_json(field("source")?)?;
            let zeta = psspace_from_json(field("target")?)?;
            let obj = field("map")?
                .as_object()
                .ok_or_else(|| Error::Parse("`map` must be an object from labels to labels".into()))?;
            let mut f = vec![None; xi.len()];
            for (k, y) in obj {
                let y = y.as_str().ok_or_else(|| Error::Parse("`map` values must be labels".into()))?;
                f[xi.labels().position(k)?] = Some(zeta.labels().position(y)?);
            }
            let f = f
                .into_iter()
                .enumerate()
                .map(|(x, y)| y.ok_or_else(|| Error::Parse(format!("`map` has no value for {}", xi.label(x)))))
                .collect::<Result<Vec<_>, _>>()?;
            let witness = continuity_witness(&f, &xi, &zeta)?;
            json!({
                "continuous": witness.is_none(),
                "witness": witness.map(|w| filter_json(xi.labels(), w)),
            })
        }
    })
}

fn lift(cmd: &LiftCommand) -> Result<Value, Failure> {
    Ok(match cmd {
        LiftCommand::Check { square } => {
            let sq = square_from_json(&read_json(square)?)?;
            let lifts = sq.enumerate_lifts().iter().map(map_to_json).collect::<Result<Vec<_>, _>>()?;
            json!({ "has_lift": !lifts.is_empty(), "lifts": lifts })
        }
        LiftCommand::Factorize { map, gens, steps } => {
            let f = map_from_json(&read_json(map)?)?;
            let gens = maps_from_json(&read_json(gens)?)?;
            trace_to_json(&bounded_factorize(&f, &gens, *steps)?)?
        }
    })
}

fn check(args: &CheckArgs) -> Result<(Value, bool), Failure> {
    let mut selected = suites::select(args.group.name()).expect("group names match the registry");
    if let Some(key) = &args.suite {
        selected.retain(|s| s.key == key);
        if selected.is_empty() {
            return Err(Failure::Usage(format!("no suite `{key}` in group {}", args.group.name())));
        }
    }
    let cfg = SuiteConfig {
        max_points: args.max_points,
        max_frame_size: args.max_frame_size,
        steps: args.steps,
        seed: args.seed,
    };
    let reports: Vec<_> = selected.iter().map(|s| s.run(&cfg)).collect();
    let passed = reports.iter().all(|r| r.passed());
    let out = json!({
        "group": args.group.name(),
        "seed": args.seed,
        "max_points": args.max_points,
        "max_frame_size": args.max_frame_size,
        "steps": args.steps,
        "passed": passed,
        "failed_suites": reports.iter().filter(|r| !r.passed()).map(|r| r.key).collect::<Vec<_>>(),
        "suites": reports.iter().map(|r| r.to_json(args.timings)).collect::<Vec<_>>(),
    });
    Ok((out, passed))
}

fn run(cli: &Cli) -> Result<(Value, bool), Failure> {
    let value = match &cli.command {
        Command::Validate(args) => validate(args)?,
        Command::Downsets { poset, max_frame_size } => {
            let p = Arc::new(poset_from_json(&read_json(poset)?)?);
            let family = p.downsets(max_frame_size.unwrap_or(DEFAULT_DOWNSET_CAP))?;
            let labels = Labels::new(family.sets.iter().map(|&d| p.labels().render_set(d)).collect())?;
            frame_to_json(&FiniteFrame::from_sets(labels, &family.sets)?)
        }
        Command::Omega { space } => {
            let x = Arc::new(space_from_json(&read_json(space)?)?);
            frame_to_json(&omega(&x)?.frame)
        }
        Command::Pt { frame, max_frame_size } => space_to_json(&pt(&read_frame(frame, *max_frame_size)?)?.space)?,
        Command::Coproduct { left, right, max_frame_size } => {
            let cap = max_frame_size.unwrap_or(DEFAULT_MAX_FRAME);
            let t = coproduct_capped(&read_frame(left, Some(cap))?, &read_frame(right, Some(cap))?, cap)?;
            json!({ "size": t.len(), "tensor": tensor_to_json(&t), "frame": frame_to_json(t.frame()) })
        }
        Command::Copair { f, g } => {
            let f = hom_from_json(&read_json(f)?)?;
            let g = hom_from_json(&read_json(g)?)?;
            let t = coproduct_capped(f.source(), g.source(), DEFAULT_MAX_FRAME)?;
            hom_to_json(&copair(&t, &f, &g)?)
        }
        Command::PushoutLoc { f, g } => {
            let f = hom_from_json(&read_json(f)?)?;
            let g = hom_from_json(&read_json(g)?)?;
            pushout_to_json(&pushout_loc(&f, &g)?)
        }
        Command::Pstop { command } => pstop(command)?,
        Command::Lift { command } => lift(command)?,
        Command::Check(args) => return check(args),
    };
    Ok((value, true))
}

fn emit(value: &Value, out: Option<&Path>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("JSON values serialize") + "\n";
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Io(path.to_path_buf(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            println!("{}", Failure::Usage(e.render().to_string().trim().to_string()).to_json());
            return ExitCode::from(2);
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            println!("{}", Failure::Usage(e.to_string()).to_json());
            return ExitCode::from(2);
        }
    }
    let result = run(&cli).and_then(|(value, ok)| emit(&value, cli.json_out.as_deref()).map(|()| ok));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            println!("{}", f.to_json());
            ExitCode::from(2)
        }
    }
}
