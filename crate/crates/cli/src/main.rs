use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use dodeca_ca::catalog::{default_rules_dir, load_dir, load_files_unchecked, rule_files};
use dodeca_ca::geometry::RotationGroup;
use dodeca_ca::oracle::{cross, Laterality, SwitchKind, SwitchState};
use dodeca_ca::pentagrid::enumerate_levels;
use dodeca_ca::render::{render_scenario, ViewSide};
use dodeca_ca::rules::{check_rotation_invariance, rotated_context, Rule, RuleContext, RuleTable};
use dodeca_ca::scenario::{
    default_golden_dir, scenario, scenario_names, CrossingMode, Direction, ScenarioError,
};
use dodeca_ca::verify::{check_golden, check_traversal, oracle_crossing, verify_all, VerifyError};

#[derive(Parser)]
#[command(
    name = "dodeca-ca",
    version,
    about = "Railway automaton on the dodecagrid"
)]
struct Cli {
    /// Directory of *.rules files.
    #[arg(long, global = true)]
    rules: Option<PathBuf>,
    /// Directory of reference *.trace files.
    #[arg(long, global = true)]
    golden: Option<PathBuf>,
    /// Worker threads for verify-all.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rule files: invariance check and minimal forms.
    Rules {
        #[command(subcommand)]
        command: RulesCommand,
    },
    /// The 60 rotations of the dodecahedron.
    Rotations {
        #[command(subcommand)]
        command: RotationsCommand,
    },
    /// Known scenarios.
    Scenario {
        #[command(subcommand)]
        command: ScenarioCommand,
    },
    /// Run a scenario and print its trace.
    Run {
        #[arg(long)]
        scenario: String,
        /// Defaults to the scenario's own length.
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, value_enum, default_value_t = Emit::Paper)]
        emit: Emit,
    },
    /// Check one scenario against its reference trace or track properties.
    Verify {
        #[arg(long)]
        scenario: String,
    },
    /// Run every check and print a pass/fail matrix.
    VerifyAll,
    /// The event-level switch model.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// The Fibonacci tree of the pentagrid.
    Pentagrid {
        #[command(subcommand)]
        command: PentagridCommand,
    },
    /// Draw a scenario as SVG.
    Render {
        #[arg(long)]
        scenario: String,
        #[arg(long, default_value_t = 0)]
        time: usize,
        #[arg(long, value_enum, default_value_t = Side::Above)]
        side: Side,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum RulesCommand {
    /// Exit 0 iff the files (default: the rules directory) have no rotation
    /// conflicts.
    Check { files: Vec<PathBuf> },
    /// Minimal form of a rule `C N0 .. N11 -> NEW` or of a bare context.
    Minform { rule: Vec<String> },
}

#[derive(Subcommand)]
enum RotationsCommand {
    /// One line per rotation: `f0 f1 : i0 .. i11`.
    Dump,
}

#[derive(Subcommand)]
enum ScenarioCommand {
    List,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Exit and new state for each initial side.
    Crossings {
        #[arg(long)]
        kind: SwitchKind,
        #[arg(long)]
        mode: CrossingMode,
    },
}

#[derive(Subcommand)]
enum PentagridCommand {
    /// Number, kind and coordinate of every node down to `depth`.
    Levels {
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    /// Aligned columns, one row per step.
    Paper,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Above,
    Below,
}

impl Cli {
    fn table(&self) -> Result<RuleTable> {
        let dir = self.rules.clone().unwrap_or_else(default_rules_dir);
        load_dir(&dir).with_context(|| format!("loading rules from {}", dir.display()))
    }

    fn golden_dir(&self) -> PathBuf {
        self.golden.clone().unwrap_or_else(default_golden_dir)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` means the requested check ran and failed.
fn execute(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Rules { command } => match command {
            RulesCommand::Check { files } => rules_check(cli, files),
            RulesCommand::Minform { rule } => minform(&rule.join(" ")),
        },
        Command::Rotations { .. } => {
            for p in RotationGroup::get().elements() {
                println!("{} : {p}", p.motion());
            }
            Ok(true)
        }
        Command::Scenario { .. } => {
            for name in scenario_names() {
                println!("{name}");
            }
            Ok(true)
        }
        Command::Run {
            scenario: name,
            steps,
            emit,
        } => {
            let table = cli.table()?;
            let s = scenario(name)?;
            let trace = s.run(&table, steps.unwrap_or(s.steps))?;
            let t = trace.table(&s.print_order);
            print!(
                "{}",
                match emit {
                    Emit::Paper => t.to_text(),
                    Emit::Tsv => t.to_tsv(),
                }
            );
            Ok(true)
        }
        Command::Verify { scenario: name } => verify_one(cli, name),
        Command::VerifyAll => {
            let table = cli.table()?;
            let golden = cli.golden_dir();
            if !golden.is_dir() {
                bail!("golden directory {} does not exist", golden.display());
            }
            let report = verify_all(&table, &golden, cli.jobs);
            println!("{report}");
            Ok(report.passed())
        }
        Command::Oracle { command } => {
            let OracleCommand::Crossings { kind, mode } = command;
            for side in [Laterality::Left, Laterality::Right] {
                let s = SwitchState::new(*kind, side);
                match cross(s, oracle_crossing(*mode, side)) {
                    Ok((exit, next)) => {
                        println!(
                            "{kind} selecting {side}, {mode}: exit {exit}, now selects {}",
                            next.selected
                        )
                    }
                    Err(e) => println!("{kind} selecting {side}, {mode}: {e}"),
                }
            }
            Ok(true)
        }
        Command::Pentagrid { command } => {
            let PentagridCommand::Levels { depth } = command;
            let tree = enumerate_levels(*depth);
            for node in tree.nodes() {
                println!(
                    "{} {} {} {}",
                    node.level, node.number, node.kind, node.coord
                );
            }
            Ok(true)
        }
        Command::Render {
            scenario: name,
            time,
            side,
            out,
        } => {
            let table = cli.table()?;
            let s = scenario(name)?;
            let trace = s.run(&table, *time)?;
            let side = match side {
                Side::Above => ViewSide::Above,
                Side::Below => ViewSide::Below,
            };
            let svg = render_scenario(&s, trace.last(), side)?;
            std::fs::write(out, svg).with_context(|| format!("writing {}", out.display()))?;
            Ok(true)
        }
    }
}

fn rules_check(cli: &Cli, files: &[PathBuf]) -> Result<bool> {
    let files = if files.is_empty() {
        rule_files(&cli.rules.clone().unwrap_or_else(default_rules_dir))?
    } else {
        files.to_vec()
    };
    let table = load_files_unchecked(&files)?;
    let report = check_rotation_invariance(&table);
    for c in &report.conflicts {
        println!("conflict: {c}");
    }
    println!(
        "{} rules, {} minimal contexts, {} conflicts",
        report.rules_checked,
        report.distinct_minimal_contexts,
        report.conflicts.len()
    );
    Ok(report.is_ok())
}

fn minform(text: &str) -> Result<bool> {
    let (ctx, new_state) = match text.parse::<Rule>() {
        Ok(rule) => (rule.context, Some(rule.new_state)),
        Err(_) => (
            text.parse::<RuleContext>()
                .map_err(|e| anyhow::anyhow!("cannot parse {text:?}: {e}"))?,
            None,
        ),
    };
    let (sigma, min) = RotationGroup::get()
        .elements()
        .iter()
        .map(|s| (s, rotated_context(&ctx, s)))
        .min_by_key(|(_, c)| *c)
        .expect("non-empty group");
    match new_state {
        Some(n) => println!("{}", Rule::new(min, n)),
        None => println!("{min}"),
    }
    println!("rotation {}", sigma.motion());
    Ok(true)
}

fn verify_one(cli: &Cli, name: &str) -> Result<bool> {
    let table = cli.table()?;
    let s = scenario(name)?;
    let outcome = if s.golden_name.is_some() {
        check_golden(name, &table, &cli.golden_dir())
    } else {
        (0..s.tracks.len())
            .flat_map(|t| [(t, Direction::Forward), (t, Direction::Backward)])
            .try_for_each(|(t, dir)| check_traversal(&s, &table, t, dir).map(|_| ()))
    };
    match outcome {
        Ok(()) => {
            println!("{name}: ok");
            Ok(true)
        }
        Err(VerifyError::Diverged(diff)) => {
            println!("{name}: diverges from the reference");
            for d in diff {
                println!("  {d}");
            }
            Ok(false)
        }
        Err(
            e @ (VerifyError::Traversal { .. }
            | VerifyError::Engine(_)
            | VerifyError::Scenario(ScenarioError::Engine(_))),
        ) => {
            println!("{name}: {e}");
            Ok(false)
        }
        Err(e) => Err(e.into()),
    }
}
