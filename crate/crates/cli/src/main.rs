use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use zitterlab::equivalence::DEFAULT_SEED;
use zitterlab::export::{self, TrajectoryMeta, TRAJECTORY_SCHEMA};
use zitterlab::fieldmap::{self, DEFAULT_MAX_POINTS};
use zitterlab::plot;
use zitterlab::scenario::{Output, Scenario, Setup};
use zitterlab::simulate::simulate;
use zitterlab::units::Units;
use zitterlab::verify::{self, Suite, DEFAULT_SAMPLES};

#[derive(Parser, Debug)]
#[command(name = "zitterlab", version, about = "Zitterbewegung of the free and driven Dirac electron")]
struct Cli {
    /// Seed for every random draw (random spin directions, verification samples).
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Units of the written files; defaults to the scenario's own units.
    #[arg(long, global = true, value_enum)]
    units: Option<UnitsArg>,

    /// Output directory.
    #[arg(long, global = true, env = "ZITTERLAB_OUT", default_value = ".")]
    out: PathBuf,

    /// Trajectory format; both are written when omitted.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the built-in identity checks. Exits non-zero if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Random space-time points per frame in the Gordon suite.
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Print the machine-readable report instead of the text one.
        #[arg(long)]
        json: bool,
    },
    /// Integrate or sample one or more scenarios and write their trajectories.
    Simulate {
        #[arg(required = true)]
        scenarios: Vec<PathBuf>,
    },
    /// Sample the free-electron bilinear fields on the scenario's grid.
    Fieldmap {
        scenario: PathBuf,
        /// Refuse grids with more points than this.
        #[arg(long, default_value_t = DEFAULT_MAX_POINTS)]
        max_points: usize,
    },
    /// Draw SVG plots of trajectory files (CSV or JSONL).
    Plot {
        #[arg(required = true)]
        trajectories: Vec<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum UnitsArg {
    Natural,
    Si,
}

impl From<UnitsArg> for Units {
    fn from(u: UnitsArg) -> Self {
        match u {
            UnitsArg::Natural => Units::Natural,
            UnitsArg::Si => Units::Si,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Algebra,
    Gordon,
    Equivalence,
    Conservation,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Algebra => vec![Suite::Algebra],
            SuiteArg::Gordon => vec![Suite::Gordon],
            SuiteArg::Equivalence => vec![Suite::Equivalence],
            SuiteArg::Conservation => vec![Suite::Conservation],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    match &cli.command {
        Command::Verify { suite, samples, json } => {
            let report = verify::run(&suite.suites(), *samples, cli.seed)?;
            if *json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!("{report}");
            }
            Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Simulate { scenarios } => {
            let setups = scenarios.iter().map(|p| load(p, cli.seed)).collect::<anyhow::Result<Vec<_>>>()?;
            let mut names: Vec<&str> = setups.iter().map(|s| s.name.as_str()).collect();
            names.sort_unstable();
            if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
                bail!("two scenarios share the output name `{}`", w[0]);
            }
            std::fs::create_dir_all(&cli.out).with_context(|| format!("creating {}", cli.out.display()))?;
            // scenarios write disjoint files, so they can run side by side
            let results: Vec<anyhow::Result<Vec<PathBuf>>> = std::thread::scope(|scope| {
                let handles: Vec<_> = setups.iter().map(|s| scope.spawn(move || simulate_one(cli, s))).collect();
                handles.into_iter().map(|h| h.join().expect("simulation thread panicked")).collect()
            });
            for r in results {
                for path in r? {
                    println!("{}", path.display());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Fieldmap { scenario, max_points } => {
            let setup = load(scenario, cli.seed)?;
            std::fs::create_dir_all(&cli.out).with_context(|| format!("creating {}", cli.out.display()))?;
            let path = write_fieldmap(cli, &setup, *max_points)?;
            println!("{}", path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Plot { trajectories } => {
            std::fs::create_dir_all(&cli.out).with_context(|| format!("creating {}", cli.out.display()))?;
            for t in trajectories {
                let file = File::open(t).with_context(|| format!("opening {}", t.display()))?;
                let data = export::read_trajectory(BufReader::new(file))
                    .with_context(|| format!("reading {}", t.display()))?;
                for path in write_plots(&cli.out, &data)? {
                    println!("{}", path.display());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load(path: &Path, seed: u64) -> anyhow::Result<Setup> {
    let scenario = Scenario::load(path).with_context(|| format!("scenario {}", path.display()))?;
    scenario.resolve(seed).with_context(|| format!("scenario {}", path.display()))
}

fn meta(cli: &Cli, setup: &Setup, step: f64) -> TrajectoryMeta {
    TrajectoryMeta {
        schema: TRAJECTORY_SCHEMA.into(),
        name: setup.name.clone(),
        units: Units::Natural,
        mass: setup.electron.mass(),
        charge: setup.charge,
        formulation: setup.formulation.as_str().into(),
        field: setup.field_kind().into(),
        step,
        seed: cli.seed,
    }
    .in_units(cli.units.map(Units::from).unwrap_or(setup.units))
}

fn create(path: &Path) -> anyhow::Result<File> {
    File::create(path).with_context(|| format!("creating {}", path.display()))
}

fn simulate_one(cli: &Cli, setup: &Setup) -> anyhow::Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let run = simulate(setup).with_context(|| format!("simulating {}", setup.name))?;
    let meta = meta(cli, setup, run.step);
    let wants_csv = cli.format != Some(Format::Jsonl);
    if setup.wants(Output::Trajectory) || setup.wants(Output::Plots) {
        if wants_csv {
            let path = cli.out.join(format!("{}.csv", setup.name));
            export::write_trajectory_csv(create(&path)?, &meta, &run.records)?;
            written.push(path);
        }
        if cli.format != Some(Format::Csv) {
            let path = cli.out.join(format!("{}.jsonl", setup.name));
            export::write_trajectory_jsonl(create(&path)?, &meta, &run.records)?;
            written.push(path);
        }
    }
    if setup.wants(Output::Plots) {
        // plot from what a reader of the files would see
        let mut buf = Vec::new();
        export::write_trajectory_csv(&mut buf, &meta, &run.records)?;
        let data = export::read_trajectory(buf.as_slice())?;
        written.extend(write_plots(&cli.out, &data)?);
    }
    if setup.wants(Output::Fieldmap) {
        written.push(write_fieldmap(cli, setup, DEFAULT_MAX_POINTS)?);
    }
    Ok(written)
}

fn write_fieldmap(cli: &Cli, setup: &Setup, max_points: usize) -> anyhow::Result<PathBuf> {
    if cli.format == Some(Format::Jsonl) {
        bail!("field maps are written as CSV only");
    }
    let Some(grid) = &setup.grid else {
        bail!("scenario `{}` has no `grid`", setup.name);
    };
    if setup.fields.is_some() {
        bail!("field maps need a free-electron scenario (field kind `none`)");
    }
    let rows = fieldmap::field_map(&setup.electron, setup.charge, grid, max_points)?;
    let path = cli.out.join(format!("{}.fieldmap.csv", setup.name));
    export::write_fieldmap_csv(create(&path)?, &meta(cli, setup, 0.0), &rows)?;
    Ok(path)
}

fn write_plots(dir: &Path, data: &export::TrajectoryFile) -> anyhow::Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for (suffix, p) in plot::all_plots(data)? {
        let path = dir.join(format!("{}.{suffix}.svg", data.meta.name));
        std::fs::write(&path, p.svg).with_context(|| format!("writing {}", path.display()))?;
        written.push(path);
    }
    Ok(written)
}
