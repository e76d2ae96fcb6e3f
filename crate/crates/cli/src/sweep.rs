//! `sweep-q`, `sweep-kappa` and `sweep-va`.

use std::path::PathBuf;
use std::time::Instant;

use qnd_interface::metrics::{fidelity, invert_ps, negativity, InvertOptions, NegativitySearch};
use qnd_interface::protocols::{
    probabilistic_output, Kappa3Sign, ProbabilisticConfig, SequentialConfig,
};
use qnd_interface::{Wigner64, ENGINE_VERSION};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::Format;
use crate::config::{positive, variance, Grid, Settings};
use crate::error::{CliError, CliResult};
use crate::output::{csv, svg, tagged_path, write_text, Record};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Swept {
    Q,
    Kappa,
    Va,
}

impl Swept {
    fn command(self) -> &'static str {
        match self {
            Swept::Q => "sweep-q",
            Swept::Kappa => "sweep-kappa",
            Swept::Va => "sweep-va",
        }
    }

    fn label(self) -> &'static str {
        match self {
            Swept::Q => "Q",
            Swept::Kappa => "kappa",
            Swept::Va => "V_A",
        }
    }
}

/// Resolved parameters of one output file, echoed into the JSON metadata.
#[derive(Debug, Clone, Serialize)]
struct RunConfig {
    command: &'static str,
    swept: Swept,
    grid: Grid,
    /// Fixed couplings; absent when κ is swept.
    kappa1: Option<f64>,
    kappa2: Option<f64>,
    vm: f64,
    /// Fixed matter noise; absent when V_A is swept.
    va: Option<f64>,
    kappa3_sign: Kappa3Sign,
    ps_target: Option<f64>,
    quad_order: usize,
    negativity_search: NegativitySearch,
    input_state: &'static str,
}

impl RunConfig {
    fn probabilistic(&self, swept: f64) -> CliResult<ProbabilisticConfig<f64>> {
        let (k1, k2) = match self.swept {
            Swept::Kappa => (swept, swept),
            _ => (self.kappa1.unwrap(), self.kappa2.unwrap()),
        };
        let cfg = ProbabilisticConfig {
            sequential: SequentialConfig::with_sign(k1, k2, self.kappa3_sign)?,
            v_m: self.vm,
            v_a: if self.swept == Swept::Va { swept } else { self.va.unwrap() },
            q: if self.swept == Swept::Q { swept } else { 1.0 },
            quad_order: self.quad_order,
        };
        cfg.validate().map_err(|e| CliError::invalid(e.to_string()))?;
        Ok(cfg)
    }
}

struct Job {
    tag: Option<String>,
    config: RunConfig,
}

#[derive(Serialize)]
struct Metadata<'a> {
    config: &'a RunConfig,
    engine_version: &'static str,
    quad_order: usize,
    max_quad_order_used: usize,
    wall_time_s: f64,
}

#[derive(Serialize)]
struct SweepResult<'a> {
    records: &'a [Record],
    metadata: Metadata<'a>,
}

fn plan(s: &Settings, swept: Swept) -> CliResult<Vec<Job>> {
    let command = swept.command();
    s.reject(
        command,
        &[
            ("gamma-x", s.gamma_x.is_some()),
            ("gamma-p", s.gamma_p.is_some()),
            ("samples", s.samples.is_some()),
            ("dump-matrix", s.dump_matrix.is_some()),
            ("dump-state", s.dump_state.is_some()),
            ("variance", s.variance.is_some()),
            ("load", s.load.is_some()),
        ],
    )?;
    let order = s.order()?;
    s.jobs()?;
    let vm = variance("vm", s.vm.unwrap_or(0.5))?;
    let fixed_couplings = |default: &[f64]| -> CliResult<Vec<(f64, f64)>> {
        if s.kappa1.is_some() || s.kappa2.is_some() {
            if s.kappa.is_some() {
                return Err(CliError::invalid("give either --kappa or --kappa1/--kappa2"));
            }
            return Ok(vec![(
                positive("kappa1", s.kappa1.unwrap_or(0.5))?,
                positive("kappa2", s.kappa2.unwrap_or(0.5))?,
            )]);
        }
        let list = s.kappa.clone().unwrap_or_else(|| default.to_vec());
        if list.is_empty() {
            return Err(CliError::invalid("--kappa is empty"));
        }
        list.into_iter().map(|k| positive("kappa", k).map(|k| (k, k))).collect()
    };
    let targets = || -> CliResult<Vec<f64>> {
        let list = s.ps_target.clone().unwrap_or_else(|| vec![1e-2, 1e-3, 1e-4]);
        if list.is_empty() {
            return Err(CliError::invalid("--ps-target is empty"));
        }
        for &t in &list {
            if !(t > 0.0 && t < 1.0) {
                return Err(CliError::invalid(format!("--ps-target must lie in (0, 1), got {t}")));
            }
        }
        Ok(list)
    };
    let base = |grid: Grid| RunConfig {
        command,
        swept,
        grid,
        kappa1: None,
        kappa2: None,
        vm,
        va: None,
        kappa3_sign: s.sign(),
        ps_target: None,
        quad_order: order,
        negativity_search: NegativitySearch::default(),
        input_state: "single-photon",
    };

    let jobs: Vec<Job> = match swept {
        Swept::Q => {
            s.reject(command, &[("range", s.range.is_some()), ("ps-target", s.ps_target.is_some())])?;
            let grid = Grid::new("Q", s.q.unwrap_or([1e-3, 2.0]), s.points.unwrap_or(40), s.log, (0.0, 20.0, false))?;
            let va = variance("va", s.va.unwrap_or(5.0))?;
            let sets = fixed_couplings(&[0.3, 0.5])?;
            let several = sets.len() > 1;
            sets.into_iter()
                .map(|(k1, k2)| Job {
                    tag: several.then(|| coupling_tag(k1, k2)),
                    config: RunConfig {
                        kappa1: Some(k1),
                        kappa2: Some(k2),
                        va: Some(va),
                        ..base(grid)
                    },
                })
                .collect()
        }
        Swept::Kappa => {
            s.reject(
                command,
                &[
                    ("q", s.q.is_some()),
                    ("kappa", s.kappa.is_some()),
                    ("kappa1", s.kappa1.is_some()),
                    ("kappa2", s.kappa2.is_some()),
                ],
            )?;
            let grid = Grid::new("kappa", s.range.unwrap_or([0.1, 1.0]), s.points.unwrap_or(10), s.log, (0.0, 1.0, false))?;
            let va = variance("va", s.va.unwrap_or(5.0))?;
            let targets = targets()?;
            let several = targets.len() > 1;
            targets
                .into_iter()
                .map(|t| Job {
                    tag: several.then(|| format!("ps{t}")),
                    config: RunConfig {
                        va: Some(va),
                        ps_target: Some(t),
                        ..base(grid)
                    },
                })
                .collect()
        }
        Swept::Va => {
            s.reject(command, &[("q", s.q.is_some()), ("va", s.va.is_some())])?;
            let grid = Grid::new("V_A", s.range.unwrap_or([1.0, 10.0]), s.points.unwrap_or(10), s.log, (0.5, 20.0, true))?;
            let sets = fixed_couplings(&[0.5])?;
            if sets.len() != 1 {
                return Err(CliError::invalid("sweep-va takes a single coupling"));
            }
            let (k1, k2) = sets[0];
            let targets = targets()?;
            let several = targets.len() > 1;
            targets
                .into_iter()
                .map(|t| Job {
                    tag: several.then(|| format!("ps{t}")),
                    config: RunConfig {
                        kappa1: Some(k1),
                        kappa2: Some(k2),
                        ps_target: Some(t),
                        ..base(grid)
                    },
                })
                .collect()
        }
    };
    // every point's configuration must be valid before anything runs
    for job in &jobs {
        for v in job.config.grid.values() {
            job.config.probabilistic(v)?;
        }
    }
    Ok(jobs)
}

fn coupling_tag(k1: f64, k2: f64) -> String {
    if k1 == k2 {
        format!("kappa{k1}")
    } else {
        format!("kappa{k1}-{k2}")
    }
}

/// Output paths per job; `None` means stdout.
fn destinations(jobs: &[Job], base: Option<&PathBuf>, what: &str) -> CliResult<Vec<Option<PathBuf>>> {
    match base {
        None if jobs.len() > 1 => Err(CliError::invalid(format!(
            "this run writes {} {what} files; give a base path with --{}",
            jobs.len(),
            if what == "SVG" { "svg" } else { "out" }
        ))),
        None => Ok(vec![None]),
        Some(p) => Ok(jobs
            .iter()
            .map(|j| Some(j.tag.as_ref().map_or_else(|| p.clone(), |t| tagged_path(p, t))))
            .collect()),
    }
}

fn evaluate(config: &RunConfig, input: &Wigner64, swept: f64) -> (Record, usize) {
    let result = (|| -> CliResult<(Record, usize)> {
        let mut cfg = config.probabilistic(swept)?;
        if let Some(target) = config.ps_target {
            let q = invert_ps(target, input, &cfg, &InvertOptions::default());
            match q {
                Ok(q) => cfg = cfg.with_q(q),
                Err(e) => {
                    eprintln!("warning: {} = {swept}: {e}", config.swept.label());
                    return Ok((Record::failed(swept, None), 0));
                }
            }
        }
        let out = probabilistic_output(input, &cfg)?;
        let f = fidelity(&out, input)?;
        let n = negativity(&out, &config.negativity_search);
        Ok((
            Record {
                swept,
                q: Some(cfg.q),
                ps: Some(out.ps()),
                fidelity: Some(f),
                negativity: Some(n),
            },
            out.order(),
        ))
    })();
    result.unwrap_or_else(|e| {
        eprintln!("warning: {} = {swept}: {e}", config.swept.label());
        let q = (config.swept == Swept::Q).then_some(swept);
        (Record::failed(swept, q), 0)
    })
}

pub fn run(s: &Settings, swept: Swept) -> CliResult<()> {
    let jobs = plan(s, swept)?;
    let outs = destinations(&jobs, s.out.as_ref(), "output")?;
    let svgs = match &s.svg {
        Some(p) => destinations(&jobs, Some(p), "SVG")?,
        None => vec![None; jobs.len()],
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(s.jobs()?)
        .build()
        .map_err(|e| CliError::Numeric(e.to_string()))?;

    let input = Wigner64::single_photon();
    let start = Instant::now();
    let tasks: Vec<(usize, f64)> = jobs
        .iter()
        .enumerate()
        .flat_map(|(j, job)| job.config.grid.values().into_iter().map(move |v| (j, v)))
        .collect();
    let results: Vec<(usize, Record, usize)> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(j, v)| {
                let (r, order) = evaluate(&jobs[j].config, &input, v);
                (j, r, order)
            })
            .collect()
    });
    let wall = start.elapsed().as_secs_f64();

    let mut complete = 0;
    for (j, job) in jobs.iter().enumerate() {
        let records: Vec<Record> = results.iter().filter(|r| r.0 == j).map(|r| r.1).collect();
        let max_order = results.iter().filter(|r| r.0 == j).map(|r| r.2).max().unwrap_or(0);
        complete += records.iter().filter(|r| r.is_complete()).count();
        let text = match s.format() {
            Format::Csv => csv(&records),
            Format::Json => {
                let doc = SweepResult {
                    records: &records,
                    metadata: Metadata {
                        config: &job.config,
                        engine_version: ENGINE_VERSION,
                        quad_order: job.config.quad_order,
                        max_quad_order_used: max_order,
                        wall_time_s: wall,
                    },
                };
                serde_json::to_string_pretty(&doc).expect("sweep result serializes") + "\n"
            }
        };
        write_text(outs[j].as_deref(), &text)?;
        if let Some(path) = &svgs[j] {
            write_text(Some(path), &svg(&records, swept.label(), job.config.grid.log))?;
        }
    }
    if complete == 0 {
        return Err(CliError::Numeric("no sweep point could be evaluated".into()));
    }
    Ok(())
}
