//! Merging of `--config` files with command-line flags, and validation.

use std::path::{Path, PathBuf};

use qnd_interface::protocols::{Kappa3Sign, DEFAULT_QUAD_ORDER, MAX_QUAD_ORDER};
use serde::{Deserialize, Serialize};

use crate::args::{CommonArgs, Format, MatrixKind, SignArg, StateKind};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl OneOrMany {
    fn into_vec(self) -> Vec<f64> {
        match self {
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    kappa1: Option<f64>,
    kappa2: Option<f64>,
    kappa: Option<OneOrMany>,
    vm: Option<f64>,
    va: Option<f64>,
    kappa3_sign: Option<SignArg>,
    gamma_x: Option<f64>,
    gamma_p: Option<f64>,
    q: Option<[f64; 2]>,
    range: Option<[f64; 2]>,
    points: Option<usize>,
    log: Option<bool>,
    ps_target: Option<OneOrMany>,
    order: Option<usize>,
    jobs: Option<usize>,
    seed: Option<u64>,
    samples: Option<usize>,
    out: Option<PathBuf>,
    format: Option<Format>,
    svg: Option<PathBuf>,
    dump_matrix: Option<MatrixKind>,
    dump_state: Option<StateKind>,
    variance: Option<f64>,
    load: Option<PathBuf>,
}

/// Options after merging; `None` means "use the command's default".
#[derive(Debug, Clone, Default, Serialize)]
pub struct Settings {
    pub kappa1: Option<f64>,
    pub kappa2: Option<f64>,
    pub kappa: Option<Vec<f64>>,
    pub vm: Option<f64>,
    pub va: Option<f64>,
    pub kappa3_sign: Option<SignArg>,
    pub gamma_x: Option<f64>,
    pub gamma_p: Option<f64>,
    pub q: Option<[f64; 2]>,
    pub range: Option<[f64; 2]>,
    pub points: Option<usize>,
    pub log: bool,
    pub ps_target: Option<Vec<f64>>,
    pub order: Option<usize>,
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub svg: Option<PathBuf>,
    pub dump_matrix: Option<MatrixKind>,
    pub dump_state: Option<StateKind>,
    pub variance: Option<f64>,
    pub load: Option<PathBuf>,
}

fn parse_range(text: &str, flag: &str) -> CliResult<[f64; 2]> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| CliError::invalid(format!("--{flag}: cannot parse {s:?} as a number")))
    };
    match parts.as_slice() {
        [a] => {
            let v = num(a)?;
            Ok([v, v])
        }
        [a, b] => Ok([num(a)?, num(b)?]),
        _ => Err(CliError::invalid(format!("--{flag} expects `lo,hi`, got {text:?}"))),
    }
}

fn read_file(path: &Path) -> CliResult<FileConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::invalid(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::invalid(format!("config {}: {e}", path.display())))
}

impl Settings {
    pub fn load(args: &CommonArgs) -> CliResult<Settings> {
        let file = match &args.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let q = match &args.q {
            Some(t) => Some(parse_range(t, "q")?),
            None => file.q,
        };
        let range = match &args.range {
            Some(t) => Some(parse_range(t, "range")?),
            None => file.range,
        };
        Ok(Settings {
            kappa1: args.kappa1.or(file.kappa1),
            kappa2: args.kappa2.or(file.kappa2),
            kappa: args.kappa.clone().or(file.kappa.map(OneOrMany::into_vec)),
            vm: args.vm.or(file.vm),
            va: args.va.or(file.va),
            kappa3_sign: args.kappa3_sign.or(file.kappa3_sign),
            gamma_x: args.gamma_x.or(file.gamma_x),
            gamma_p: args.gamma_p.or(file.gamma_p),
            q,
            range,
            points: args.points.or(file.points),
            log: args.log || file.log.unwrap_or(false),
            ps_target: args.ps_target.clone().or(file.ps_target.map(OneOrMany::into_vec)),
            order: args.order.or(file.order),
            jobs: args.jobs.or(file.jobs),
            seed: args.seed.or(file.seed),
            samples: args.samples.or(file.samples),
            out: args.out.clone().or(file.out),
            format: args.format.or(file.format),
            svg: args.svg.clone().or(file.svg),
            dump_matrix: args.dump_matrix.or(file.dump_matrix),
            dump_state: args.dump_state.or(file.dump_state),
            variance: args.variance.or(file.variance),
            load: args.load.clone().or(file.load),
        })
    }

    pub fn sign(&self) -> Kappa3Sign {
        match self.kappa3_sign {
            Some(SignArg::Negative) => Kappa3Sign::Negative,
            _ => Kappa3Sign::Positive,
        }
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Csv)
    }

    pub fn order(&self) -> CliResult<usize> {
        let order = self.order.unwrap_or(DEFAULT_QUAD_ORDER);
        if !(2..=MAX_QUAD_ORDER).contains(&order) {
            return Err(CliError::invalid(format!(
                "--order must be in [2, {MAX_QUAD_ORDER}], got {order}"
            )));
        }
        Ok(order)
    }

    pub fn jobs(&self) -> CliResult<usize> {
        match self.jobs {
            Some(0) => Err(CliError::invalid("--jobs must be at least 1")),
            Some(j) => Ok(j),
            None => Ok(0),
        }
    }

    /// Rejects options that the current command would silently ignore.
    pub fn reject(&self, command: &str, present: &[(&str, bool)]) -> CliResult<()> {
        for (flag, set) in present {
            if *set {
                return Err(CliError::invalid(format!("--{flag} is not used by {command}")));
            }
        }
        Ok(())
    }
}

pub fn positive(name: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::invalid(format!("{name} must be positive and finite, got {v}")))
    }
}

pub fn variance(name: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() && v >= 0.5 {
        Ok(v)
    } else {
        Err(CliError::invalid(format!(
            "{name} must be a finite variance >= 0.5 (vacuum), got {v}"
        )))
    }
}

/// A swept grid, validated against `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub log: bool,
}

impl Grid {
    pub fn new(
        name: &str,
        bounds: [f64; 2],
        points: usize,
        log: bool,
        allowed: (f64, f64, bool),
    ) -> CliResult<Grid> {
        let [lo, hi] = bounds;
        let (min, max, min_inclusive) = allowed;
        let inside = |v: f64| {
            v.is_finite() && v <= max && if min_inclusive { v >= min } else { v > min }
        };
        if !inside(lo) || !inside(hi) {
            let open = if min_inclusive { '[' } else { '(' };
            return Err(CliError::invalid(format!(
                "{name} range [{lo}, {hi}] must lie in {open}{min}, {max}]"
            )));
        }
        if lo > hi {
            return Err(CliError::invalid(format!("{name} range is reversed: {lo} > {hi}")));
        }
        if points == 0 {
            return Err(CliError::invalid("--points must be at least 1"));
        }
        if points == 1 && lo != hi {
            return Err(CliError::invalid("a range with lo < hi needs --points >= 2"));
        }
        if log && lo <= 0.0 {
            return Err(CliError::invalid("--log needs a positive range"));
        }
        Ok(Grid { lo, hi, points, log })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.lo];
        }
        let n = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let t = i as f64 / n;
                if i == self.points - 1 {
                    self.hi
                } else if self.log {
                    tidy(self.lo * (self.hi / self.lo).powf(t))
                } else {
                    tidy(self.lo + (self.hi - self.lo) * t)
                }
            })
            .collect()
    }
}

// Rounds to 12 significant digits so that 0.1 + 0.8 prints as 0.9.
fn tidy(v: f64) -> f64 {
    format!("{v:.11e}").parse().unwrap_or(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_parse() {
        assert_eq!(parse_range("1e-3, 2", "q").unwrap(), [1e-3, 2.0]);
        assert_eq!(parse_range("0.5", "q").unwrap(), [0.5, 0.5]);
        assert!(parse_range("a,b", "q").is_err());
        assert!(parse_range("1,2,3", "q").is_err());
    }

    #[test]
    fn grids_hit_both_ends() {
        let g = Grid::new("Q", [1e-3, 2.0], 40, true, (0.0, 20.0, false)).unwrap();
        let v = g.values();
        assert_eq!(v.len(), 40);
        assert_eq!(v[0], 1e-3);
        assert_eq!(v[39], 2.0);
        assert!(v.windows(2).all(|w| w[1] > w[0]));
        let lin = Grid::new("κ", [0.1, 1.0], 10, false, (0.0, 1.0, false)).unwrap();
        assert_eq!(lin.values()[8], 0.9);
    }

    #[test]
    fn grids_reject_out_of_domain() {
        assert!(Grid::new("Q", [0.0, 1.0], 5, false, (0.0, 20.0, false)).is_err());
        assert!(Grid::new("Q", [1.0, 21.0], 5, false, (0.0, 20.0, false)).is_err());
        assert!(Grid::new("V_A", [0.5, 2.0], 5, false, (0.5, 20.0, true)).is_ok());
        assert!(Grid::new("Q", [2.0, 1.0], 5, false, (0.0, 20.0, false)).is_err());
        assert!(Grid::new("Q", [1.0, 2.0], 1, false, (0.0, 20.0, false)).is_err());
    }
}
