//! Executes a parsed configuration and renders the report.

use std::time::Instant;

use ilab_core::combinatorics::binomial;
use ilab_core::concentration::empirical_q_ratio_capped;
use ilab_core::cut_stability::{cut_ratio, upper_stability_ratio};
use ilab_core::interlacing::verify_formula;
use ilab_core::trees::{
    branch_norm_range, derivatives, projection_defect, telescoping_defect, tree_decomposition,
};
use ilab_core::{Cut, Error, Point, PointMap, Space, Strategy, Tree, Window, DEFAULT_STATE_CAP};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Coding, Command, CutChoice, ExperimentConfig, Format, MapSpec, RunOptions};

pub const VERSION: &str = concat!("v", env!("CARGO_PKG_VERSION"));

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COUNTEREXAMPLE: i32 = 2;
pub const EXIT_REFUSED: i32 = 3;

#[derive(Debug)]
pub struct RunError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ResourceLimit { .. } => EXIT_REFUSED,
            _ => EXIT_USAGE,
        };
        RunError {
            code,
            message: format!("error: {e}"),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Metadata {
    pub wall_time_ms: u64,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub version: &'static str,
    pub config: String,
    pub result: Value,
    pub metadata: Metadata,
}

/// Result of a run: the report, its CSV table and the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub exit: i32,
}

impl Outcome {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.report).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let mut header = self.header.clone();
                header.push("wall_time_ms");
                w.write_record(&header).expect("in-memory write");
                for row in &self.rows {
                    let mut row = row.clone();
                    row.push(self.report.metadata.wall_time_ms.to_string());
                    w.write_record(&row).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
            }
        }
    }
}

/// Number of states the command enumerates.
pub fn state_estimate(command: &Command) -> u128 {
    let c = |n: usize, k: usize| binomial(n as u64, k as u64);
    match command {
        Command::VerifyFormula { window, k } => c(window.len(), *k).saturating_pow(2),
        Command::Qtest {
            window,
            k,
            size,
            strategy,
            ..
        } => match strategy {
            Strategy::Exhaustive => c(window.len(), *size).saturating_mul(c(*size, *k)),
            _ => c(window.len(), *k),
        },
        Command::Cutstab { window, k, .. } => c(window.len(), *k),
        Command::TreesDemo { window, k, .. } | Command::Decompose { window, k, .. } => {
            c(window.len(), *k)
        }
    }
}

fn thread_count(opts: &RunOptions) -> Result<Option<usize>, RunError> {
    if opts.threads.is_some() {
        return Ok(opts.threads);
    }
    match std::env::var("ILAB_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(RunError {
                code: EXIT_USAGE,
                message: format!("error: invalid value for 'ILAB_THREADS': `{v}`"),
            }),
        },
        Err(_) => Ok(None),
    }
}

pub fn run(config: &ExperimentConfig, opts: &RunOptions) -> Result<Outcome, RunError> {
    let estimate = state_estimate(&config.command);
    if estimate > DEFAULT_STATE_CAP && !opts.force {
        return Err(RunError {
            code: EXIT_REFUSED,
            message: format!(
                "refusing to run: about {estimate} states exceed the cap of {DEFAULT_STATE_CAP}; pass --force to run anyway"
            ),
        });
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count(opts)? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| RunError {
        code: EXIT_USAGE,
        message: format!("error: cannot start worker threads: {e}"),
    })?;
    let start = Instant::now();
    let (result, header, rows, exit) = pool.install(|| execute(config, opts))?;
    let wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(Outcome {
        report: Report {
            command: config.command.tag(),
            version: VERSION,
            config: config.canonical(),
            result,
            metadata: Metadata { wall_time_ms },
        },
        header,
        rows,
        exit,
    })
}

fn build_map(spec: &MapSpec, window: &Window, k: usize, space: &Space) -> Result<PointMap, Error> {
    match spec {
        MapSpec::Summing => PointMap::summing(window.clone(), k, space.clone()),
        MapSpec::Disjoint => PointMap::disjoint(window.clone(), k, space.clone()),
        MapSpec::Parity => PointMap::parity(window.clone(), k),
        MapSpec::Constant => {
            let value = if space.is_normed() {
                Point::basis(space.dim(), 1)
            } else {
                Point::Index(0)
            };
            PointMap::constant(window.clone(), k, space.clone(), value)
        }
        MapSpec::Csv(path) => PointMap::from_csv(path, k, Some(window.clone()), space.clone()),
    }
}

type Executed = (Value, Vec<&'static str>, Vec<Vec<String>>, i32);

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

fn execute(config: &ExperimentConfig, opts: &RunOptions) -> Result<Executed, RunError> {
    let cap = (!opts.force).then_some(DEFAULT_STATE_CAP);
    let out = match &config.command {
        Command::VerifyFormula { window, k } => {
            let check = verify_formula(window, *k)?;
            let exit = if check.counterexample.is_some() {
                EXIT_COUNTEREXAMPLE
            } else {
                EXIT_OK
            };
            let counterexample = check
                .counterexample
                .as_ref()
                .map(|c| format!("{} {}", c.m, c.n))
                .unwrap_or_default();
            let row = vec![
                window.to_string(),
                k.to_string(),
                check.vertices.to_string(),
                check.pairs_checked.to_string(),
                counterexample,
            ];
            (
                to_value(&check),
                vec!["window", "k", "vertices", "pairs_checked", "counterexample"],
                vec![row],
                exit,
            )
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
            let f = build_map(map, window, *k, space)?;
            let r = empirical_q_ratio_capped(&f, *size, *mode, *strategy, cap)?;
            let row = vec![
                r.lip.to_string(),
                r.best_window.to_string(),
                r.oscillation.to_string(),
                r.ratio.to_string(),
                r.strategy.to_string(),
                r.pair_mode.to_string(),
            ];
            (
                to_value(&r),
                vec![
                    "lip",
                    "best_window",
                    "oscillation",
                    "ratio",
                    "strategy",
                    "pair_mode",
                ],
                vec![row],
                EXIT_OK,
            )
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
            let f = build_map(map, window, *l, space)?;
            let g = build_map(g_map, window, k - l, space)?;
            let r = match cuts {
                CutChoice::Cuts { p, q } => cut_ratio(&f, &g, p, q, window)?,
                CutChoice::Permutation(pi) => upper_stability_ratio(&f, &g, pi, window)?,
            };
            let row = vec![
                r.p.to_string(),
                r.q.to_string(),
                r.l.to_string(),
                r.inf_value.to_string(),
                r.sup_value.to_string(),
                r.ratio.to_string(),
            ];
            (
                to_value(&r),
                vec!["P", "Q", "L", "inf_value", "sup_value", "ratio"],
                vec![row],
                EXIT_OK,
            )
        }
        Command::TreesDemo {
            coding,
            space,
            k,
            window,
            coeffs,
            p,
        } => {
            let tree = match coding {
                Coding::Disjoint => Tree::disjoint_coded(window.clone(), *k, space.clone())?,
                Coding::Summing => Tree::summing_coded(window.clone(), *k, space.clone())?,
            };
            let (lo, hi) = branch_norm_range(&tree, coeffs, None)?;
            let cuts: Vec<Cut> = match p {
                Some(p) => vec![p.clone()],
                None => (1..*k).flat_map(|l| Cut::all(*k, l)).collect(),
            };
            let mut defects = Vec::new();
            let mut rows = Vec::new();
            for cut in cuts {
                let d = projection_defect(&tree, coeffs, &cut)?;
                rows.push(vec![
                    lo.to_string(),
                    hi.to_string(),
                    tree.is_normalized().to_string(),
                    cut.to_string(),
                    d.to_string(),
                ]);
                defects.push(json!({ "P": cut, "defect": d }));
            }
            let result = json!({
                "branch_norm_min": lo,
                "branch_norm_max": hi,
                "normalized": tree.is_normalized(),
                "projection_defects": defects,
            });
            (
                result,
                vec![
                    "branch_norm_min",
                    "branch_norm_max",
                    "normalized",
                    "P",
                    "projection_defect",
                ],
                rows,
                EXIT_OK,
            )
        }
        Command::Decompose {
            map,
            k,
            window,
            space,
        } => {
            let f = build_map(map, window, *k, space)?;
            let d = tree_decomposition(&f)?;
            let telescoping = telescoping_defect(&f, &derivatives(&f)?)?;
            let within = d.node_residual_max <= config.tolerance && telescoping <= config.tolerance;
            let mut result = to_value(&d);
            result["telescoping_defect"] = json!(telescoping);
            result["reconstruction_within_tolerance"] = json!(within);
            let coefficients: Vec<String> = d.coefficients.iter().map(|a| a.to_string()).collect();
            let row = vec![
                d.a0.to_string(),
                coefficients.join(";"),
                d.residual_stats.max.to_string(),
                d.residual_stats.mean.to_string(),
                d.residual_stats.min.to_string(),
                d.node_residual_max.to_string(),
                telescoping.to_string(),
            ];
            (
                result,
                vec![
                    "a0",
                    "coefficients",
                    "residual_max",
                    "residual_mean",
                    "residual_min",
                    "node_residual_max",
                    "telescoping_defect",
                ],
                vec![row],
                EXIT_OK,
            )
        }
    };
    Ok(out)
}
