//! Argument parsing into a validated [`ExperimentConfig`] with a canonical
//! string form.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ilab_core::{Cut, OrderPreservingPermutation, PairMode, Space, Strategy, Window};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapSpec {
    Summing,
    Disjoint,
    Parity,
    Constant,
    Csv(PathBuf),
}

impl FromStr for MapSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "summing" => Ok(MapSpec::Summing),
            "disjoint" => Ok(MapSpec::Disjoint),
            "parity" => Ok(MapSpec::Parity),
            "constant" => Ok(MapSpec::Constant),
            _ => match s.strip_prefix("csv:") {
                Some(path) if !path.is_empty() => Ok(MapSpec::Csv(PathBuf::from(path))),
                _ => Err(format!(
                    "unknown map `{s}` (summing, disjoint, parity, constant, csv:<path>)"
                )),
            },
        }
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapSpec::Summing => f.write_str("summing"),
            MapSpec::Disjoint => f.write_str("disjoint"),
            MapSpec::Parity => f.write_str("parity"),
            MapSpec::Constant => f.write_str("constant"),
            MapSpec::Csv(p) => write!(f, "csv:{}", p.display()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyKind {
    Exhaustive,
    Greedy,
    Anneal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Mode {
    AllPairs,
    SeparatedPairs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Coding {
    Disjoint,
    Summing,
}

#[derive(Debug, Parser)]
#[command(
    name = "ilab",
    version,
    about = "Finite experiments on interlacing graphs"
)]
struct Cli {
    /// Worker threads (falls back to ILAB_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Run enumerations above 10^6 states.
    #[arg(long, global = true)]
    force: bool,
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Interlacing graph checks.
    Interlace {
        #[command(subcommand)]
        action: InterlaceAction,
    },
    /// Best-subwindow concentration ratio.
    Qtest(QtestArgs),
    /// Cut ratio of a map pair.
    Cutstab(CutstabArgs),
    /// Coded trees.
    Trees {
        #[command(subcommand)]
        action: TreesAction,
    },
    /// Tree decomposition of a bounded map.
    Decompose(DecomposeArgs),
}

#[derive(Debug, Subcommand)]
enum InterlaceAction {
    /// Compare the discrepancy formula with BFS on every pair.
    VerifyFormula {
        #[arg(long)]
        window: Window,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Debug, Args)]
struct QtestArgs {
    #[arg(long)]
    map: MapSpec,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    window: Window,
    #[arg(long)]
    size: usize,
    #[arg(long, value_enum, default_value = "exhaustive")]
    strategy: StrategyKind,
    #[arg(long, value_enum, default_value = "all_pairs")]
    mode: Mode,
    #[arg(long)]
    space: Option<Space>,
}

#[derive(Debug, Args)]
struct CutstabArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    l: usize,
    #[arg(long = "P")]
    p: Option<String>,
    #[arg(long = "Q")]
    q: Option<String>,
    /// Order-preserving permutation as a comma list of images.
    #[arg(long, conflicts_with_all = ["p", "q"])]
    pi: Option<String>,
    #[arg(long)]
    map: MapSpec,
    /// Map for the second slot; defaults to `--map`.
    #[arg(long)]
    g_map: Option<MapSpec>,
    #[arg(long)]
    window: Window,
    #[arg(long)]
    space: Option<Space>,
}

#[derive(Debug, Subcommand)]
enum TreesAction {
    /// Branch norms and projection defects of a coded tree.
    Demo {
        #[arg(long, value_enum)]
        coding: Coding,
        #[arg(long)]
        space: Option<Space>,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        window: Window,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        coeffs: Vec<f64>,
        #[arg(long = "P")]
        p: Option<String>,
    },
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    #[arg(long)]
    map: MapSpec,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    window: Window,
    #[arg(long)]
    space: Option<Space>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CutChoice {
    Cuts { p: Cut, q: Cut },
    Permutation(OrderPreservingPermutation),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    VerifyFormula {
        window: Window,
        k: usize,
    },
    Qtest {
        map: MapSpec,
        k: usize,
        window: Window,
        size: usize,
        strategy: Strategy,
        mode: PairMode,
        space: Space,
    },
    Cutstab {
        k: usize,
        l: usize,
        cuts: CutChoice,
        map: MapSpec,
        g_map: MapSpec,
        window: Window,
        space: Space,
    },
    TreesDemo {
        coding: Coding,
        space: Space,
        k: usize,
        window: Window,
        coeffs: Vec<f64>,
        p: Option<Cut>,
    },
    Decompose {
        map: MapSpec,
        k: usize,
        window: Window,
        space: Space,
    },
}

impl Command {
    pub fn tag(&self) -> &'static str {
        match self {
            Command::VerifyFormula { .. } => "interlace",
            Command::Qtest { .. } => "qtest",
            Command::Cutstab { .. } => "cutstab",
            Command::TreesDemo { .. } => "trees",
            Command::Decompose { .. } => "decompose",
        }
    }
}

/// Everything that determines a report. Thread count and `--force` only
/// affect how (or whether) it runs, so they live in [`RunOptions`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub seed: u64,
    pub format: Format,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    pub threads: Option<usize>,
    pub force: bool,
}

#[derive(Debug)]
pub enum ParseError {
    /// Help or version output requested; not a failure.
    Display(String),
    Usage(String),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Display(s) | ParseError::Usage(s) => f.write_str(s),
        }
    }
}

fn usage(flag: &str, msg: impl fmt::Display) -> ParseError {
    ParseError::Usage(format!("error: invalid value for '{flag}': {msg}"))
}

fn parse_list<T: FromStr>(flag: &str, s: &str) -> Result<Vec<T>, ParseError>
where
    T::Err: fmt::Display,
{
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<T>()
                .map_err(|e| usage(flag, format!("`{x}`: {e}")))
        })
        .collect()
}

fn parse_cut(flag: &str, s: &str, k: usize) -> Result<Cut, ParseError> {
    Cut::new(k, parse_list(flag, s)?).map_err(|e| usage(flag, e))
}

fn default_space(
    flag_space: Option<Space>,
    map: &MapSpec,
    window: &Window,
) -> Result<Space, ParseError> {
    match (flag_space, map) {
        (Some(s), MapSpec::Parity) if s == Space::real_line() => Ok(s),
        (Some(s), MapSpec::Parity) => Err(usage(
            "--space",
            format!("the parity map takes values in lp:1:1, not {s}"),
        )),
        (None, MapSpec::Parity) => Ok(Space::real_line()),
        (Some(s), _) => Ok(s),
        (None, MapSpec::Csv(_)) => Err(usage("--space", "required for csv maps")),
        (None, _) => Space::sup(window.max() as usize).map_err(|e| usage("--space", e)),
    }
}

fn positive(flag: &str, v: usize) -> Result<usize, ParseError> {
    if v == 0 {
        return Err(usage(flag, "must be at least 1"));
    }
    Ok(v)
}

/// Parses a full argument vector, program name first.
pub fn parse_config<I, T>(args: I) -> Result<(ExperimentConfig, RunOptions), ParseError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp
        | clap::error::ErrorKind::DisplayVersion
        | clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            ParseError::Display(e.render().to_string())
        }
        _ => ParseError::Usage(e.render().to_string()),
    })?;
    if !(cli.tolerance >= 0.0 && cli.tolerance.is_finite()) {
        return Err(usage("--tolerance", "must be a finite non-negative number"));
    }
    if cli.threads == Some(0) {
        return Err(usage("--threads", "must be at least 1"));
    }
    let command = match cli.command {
        CliCommand::Interlace {
            action: InterlaceAction::VerifyFormula { window, k },
        } => Command::VerifyFormula {
            window,
            k: positive("--k", k)?,
        },
        CliCommand::Qtest(a) => Command::Qtest {
            space: default_space(a.space, &a.map, &a.window)?,
            map: a.map,
            k: positive("--k", a.k)?,
            window: a.window,
            size: a.size,
            strategy: match a.strategy {
                StrategyKind::Exhaustive => Strategy::Exhaustive,
                StrategyKind::Greedy => Strategy::Greedy,
                StrategyKind::Anneal => Strategy::Anneal { seed: cli.seed },
            },
            mode: match a.mode {
                Mode::AllPairs => PairMode::AllPairs,
                Mode::SeparatedPairs => PairMode::SeparatedPairs,
            },
        },
        CliCommand::Cutstab(a) => {
            if a.l == 0 || a.l >= a.k {
                return Err(usage("--l", format!("need 0 < l < k = {}", a.k)));
            }
            let cuts = match a.pi {
                Some(pi) => CutChoice::Permutation(
                    OrderPreservingPermutation::new(a.l, parse_list("--pi", &pi)?)
                        .map_err(|e| usage("--pi", e))?,
                ),
                None => CutChoice::Cuts {
                    p: match a.p {
                        Some(s) => parse_cut("--P", &s, a.k)?,
                        None => Cut::trivial(a.k, a.l).map_err(|e| usage("--P", e))?,
                    },
                    q: match a.q {
                        Some(s) => parse_cut("--Q", &s, a.k)?,
                        None => Cut::alternating(a.k, a.l).map_err(|e| usage("--Q", e))?,
                    },
                },
            };
            if let CutChoice::Permutation(pi) = &cuts {
                if pi.k() != a.k {
                    return Err(usage(
                        "--pi",
                        format!("has {} entries, expected k = {}", pi.k(), a.k),
                    ));
                }
            }
            let g_map = a.g_map.unwrap_or_else(|| a.map.clone());
            Command::Cutstab {
                space: default_space(a.space, &a.map, &a.window)?,
                k: a.k,
                l: a.l,
                cuts,
                map: a.map,
                g_map,
                window: a.window,
            }
        }
        CliCommand::Trees {
            action:
                TreesAction::Demo {
                    coding,
                    space,
                    k,
                    window,
                    coeffs,
                    p,
                },
        } => {
            let k = positive("--k", k)?;
            if coeffs.len() != k {
                return Err(usage(
                    "--coeffs",
                    format!("{} values for k = {k}", coeffs.len()),
                ));
            }
            let map = match coding {
                Coding::Disjoint => MapSpec::Disjoint,
                Coding::Summing => MapSpec::Summing,
            };
            Command::TreesDemo {
                space: default_space(space, &map, &window)?,
                coding,
                k,
                window,
                coeffs,
                p: p.map(|s| parse_cut("--P", &s, k)).transpose()?,
            }
        }
        CliCommand::Decompose(a) => Command::Decompose {
            space: default_space(a.space, &a.map, &a.window)?,
            map: a.map,
            k: positive("--k", a.k)?,
            window: a.window,
        },
    };
    Ok((
        ExperimentConfig {
            command,
            seed: cli.seed,
            format: cli.format,
            tolerance: cli.tolerance,
        },
        RunOptions {
            threads: cli.threads,
            force: cli.force,
        },
    ))
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl ExperimentConfig {
    /// Canonical argument string: every default filled in, fixed flag order.
    pub fn canonical(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        let mut flag = |name: &str, value: String| {
            parts.push(format!("--{name}"));
            parts.push(value);
        };
        let head = match &self.command {
            Command::VerifyFormula { window, k } => {
                flag("window", window.to_string());
                flag("k", k.to_string());
                "interlace verify-formula"
            }
            Command::Qtest {
                map,
                k,
                window,
                size,
                strategy,
                mode,
                space,
            } => {
                flag("map", map.to_string());
                flag("k", k.to_string());
                flag("window", window.to_string());
                flag("size", size.to_string());
                let kind = match strategy {
                    Strategy::Exhaustive => "exhaustive",
                    Strategy::Greedy => "greedy",
                    Strategy::Anneal { .. } => "anneal",
                };
                flag("strategy", kind.into());
                flag("mode", mode.to_string());
                flag("space", space.to_string());
                "qtest"
            }
            Command::Cutstab {
                k,
                l,
                cuts,
                map,
                g_map,
                window,
                space,
            } => {
                flag("k", k.to_string());
                flag("l", l.to_string());
                match cuts {
                    CutChoice::Cuts { p, q } => {
                        flag("P", p.to_string());
                        flag("Q", q.to_string());
                    }
                    CutChoice::Permutation(pi) => flag("pi", join(pi.images())),
                }
                flag("map", map.to_string());
                flag("g-map", g_map.to_string());
                flag("window", window.to_string());
                flag("space", space.to_string());
                "cutstab"
            }
            Command::TreesDemo {
                coding,
                space,
                k,
                window,
                coeffs,
                p,
            } => {
                let coding = match coding {
                    Coding::Disjoint => "disjoint",
                    Coding::Summing => "summing",
                };
                flag("coding", coding.into());
                flag("space", space.to_string());
                flag("k", k.to_string());
                flag("window", window.to_string());
                flag("coeffs", join(coeffs));
                if let Some(p) = p {
                    flag("P", p.to_string());
                }
                "trees demo"
            }
            Command::Decompose {
                map,
                k,
                window,
                space,
            } => {
                flag("map", map.to_string());
                flag("k", k.to_string());
                flag("window", window.to_string());
                flag("space", space.to_string());
                "decompose"
            }
        };
        let format = match self.format {
            Format::Json => "json",
            Format::Csv => "csv",
        };
        format!(
            "{head} {} --seed {} --format {format} --tolerance {:e}",
            parts.join(" "),
            self.seed,
            self.tolerance
        )
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(line: &str) -> Result<ExperimentConfig, ParseError> {
        parse_config(std::iter::once("ilab").chain(line.split_whitespace())).map(|(c, _)| c)
    }

    fn usage_text(line: &str) -> String {
        match parse(line) {
            Err(ParseError::Usage(s)) => s,
            other => panic!("expected a usage error, got {other:?}"),
        }
    }

    #[test]
    fn qtest_defaults_are_filled() {
        let c = parse("qtest --map summing --k 3 --window 1..9 --size 8").unwrap();
        assert_eq!(
            c.canonical(),
            "qtest --map summing --k 3 --window 1..9 --size 8 --strategy exhaustive \
             --mode all_pairs --space sup:9 --seed 0 --format json --tolerance 1e-9"
        );
    }

    #[test]
    fn cuts_are_sets() {
        let c = parse("cutstab --P 2,1 --Q 1,3 --k 4 --l 2 --map summing --window 1..12").unwrap();
        match c.command {
            Command::Cutstab {
                cuts: CutChoice::Cuts { p, q },
                ..
            } => {
                assert_eq!(p, Cut::new(4, vec![1, 2]).unwrap());
                assert_eq!(q, Cut::new(4, vec![1, 3]).unwrap());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn canonical_round_trips() {
        for line in [
            "interlace verify-formula --window 1..10 --k 3",
            "qtest --map parity --k 2 --window 2,4,6,8,9 --size 4 --strategy anneal --seed 7",
            "qtest --map disjoint --k 2 --window 1..8 --size 5 --mode separated_pairs --space lp:2:8",
            "cutstab --k 4 --l 2 --pi 1,3,2,4 --map summing --window 1..12 --format csv",
            "cutstab --k 3 --l 1 --map summing --g-map disjoint --window 1..9",
            "trees demo --coding summing --k 2 --window 1..8 --coeffs 2,-1 --P 1",
            "decompose --map summing --k 2 --window 1..8 --tolerance 0.001",
        ] {
            let c = parse(line).unwrap();
            let again = parse(&c.canonical()).unwrap();
            assert_eq!(c, again, "{line}");
            assert_eq!(c.canonical(), again.canonical());
        }
    }

    #[test]
    fn errors_name_the_flag() {
        assert!(
            usage_text("qtest --map summing --k 3 --window 9..1 --size 8").contains("--window")
        );
        assert!(
            usage_text("qtest --map summing --k 3 --window 1..9 --size 8 --space lp:0.5:9")
                .contains("--space")
        );
        assert!(
            usage_text("qtest --map summing --k 3 --window 1..9 --size 8 --bogus 1")
                .contains("--bogus")
        );
        assert!(usage_text("qtest --map spiral --k 3 --window 1..9 --size 8").contains("--map"));
        assert!(
            usage_text("cutstab --P 1,5 --k 4 --l 2 --map summing --window 1..12").contains("--P")
        );
        assert!(
            usage_text("trees demo --coding summing --k 2 --window 1..8 --coeffs 1")
                .contains("--coeffs")
        );
        assert!(usage_text("decompose --map csv:x.csv --k 2 --window 1..8").contains("--space"));
    }

    #[test]
    fn help_is_not_an_error() {
        assert!(matches!(parse("--help"), Err(ParseError::Display(_))));
        assert!(matches!(parse("--version"), Err(ParseError::Display(_))));
    }

    #[test]
    fn run_options_stay_out_of_the_config() {
        let (a, oa) = parse_config([
            "ilab",
            "--threads",
            "2",
            "--force",
            "decompose",
            "--map",
            "summing",
            "--k",
            "2",
            "--window",
            "1..8",
        ])
        .unwrap();
        let (b, ob) = parse_config([
            "ilab",
            "decompose",
            "--map",
            "summing",
            "--k",
            "2",
            "--window",
            "1..8",
        ])
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(
            oa,
            RunOptions {
                threads: Some(2),
                force: true
            }
        );
        assert_eq!(ob, RunOptions::default());
    }
}
