//! Figures of merit for the post-selected transfer: fidelity, Wigner
//! negativity, and inversion of the success probability `PS(Q)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocols::{probabilistic_output, success_probability, ProbabilisticConfig, ProbabilisticResult};
use crate::scalar::Real;
use crate::wigner::GaussPolyWigner;

/// `F = 2π ∫ W_out W_ref`, with `W_out` normalized by PS.
pub fn fidelity<T: Real>(w_out: &ProbabilisticResult<T>, w_ref: &GaussPolyWigner<T>) -> Result<T> {
    if w_ref.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: w_ref.dim(),
        });
    }
    let raw = w_out.slices().integrate_with(|s| s.overlap(w_ref))?;
    Ok(T::two_pi() * raw / w_out.ps())
}

/// Grid-plus-refinement search for the minimum of a Wigner function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegativitySearch {
    /// The coarse grid covers `[−half_width, half_width]²`.
    pub half_width: f64,
    pub grid_points: usize,
    /// Coordinate descent stops once the step falls below this.
    pub min_step: f64,
}

impl Default for NegativitySearch {
    fn default() -> Self {
        NegativitySearch {
            half_width: 4.0,
            grid_points: 81,
            min_step: 1e-6,
        }
    }
}

/// Minimum of `f` over the plane: coarse grid, then coordinate descent with
/// step halving. Returns `(value, x, p)`.
pub fn minimize_plane<T, F>(f: F, search: &NegativitySearch) -> (T, T, T)
where
    T: Real,
    F: Fn(T, T) -> T + Sync,
{
    let n = search.grid_points.max(2);
    let h = T::lit(search.half_width);
    let step0 = T::lit(2.0) * h / T::from_usize(n - 1).unwrap();
    let coord = |i: usize| -h + step0 * T::from_usize(i).unwrap();
    let (mut best, mut bx, mut bp) = (0..n)
        .into_par_iter()
        .map(|i| {
            let x = coord(i);
            (0..n)
                .map(|j| {
                    let p = coord(j);
                    (f(x, p), x, p)
                })
                .fold((T::infinity(), x, T::zero()), |a, b| if b.0 < a.0 { b } else { a })
        })
        .reduce(
            || (T::infinity(), T::zero(), T::zero()),
            |a, b| if b.0 < a.0 { b } else { a },
        );

    let min_step = T::lit(search.min_step);
    let mut step = step0;
    while step >= min_step {
        let mut moved = false;
        for (dx, dp) in [(step, T::zero()), (-step, T::zero()), (T::zero(), step), (T::zero(), -step)] {
            let v = f(bx + dx, bp + dp);
            if v < best {
                best = v;
                bx = bx + dx;
                bp = bp + dp;
                moved = true;
            }
        }
        if !moved {
            step = step * T::lit(0.5);
        }
    }
    (best, bx, bp)
}

/// `N = min W_out(x, p)`; negative values witness non-classicality.
pub fn negativity<T: Real>(w_out: &ProbabilisticResult<T>, search: &NegativitySearch) -> T {
    minimize_plane(|x, p| w_out.evaluate(x, p), search).0
}

/// Merits of one post-selected configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeritReport {
    pub fidelity: f64,
    pub negativity: f64,
    pub ps: f64,
    pub q_used: f64,
}

impl MeritReport {
    pub const CSV_HEADER: &'static str = "q,ps,fidelity,negativity";

    pub fn csv_row(&self) -> String {
        format!("{},{},{},{}", self.q_used, self.ps, self.fidelity, self.negativity)
    }
}

/// Runs the post-selection pipeline once and collects F, N and PS, using
/// `input_l` as the fidelity reference.
pub fn evaluate_merits<T: Real>(
    input_l: &GaussPolyWigner<T>,
    cfg: &ProbabilisticConfig<T>,
    search: &NegativitySearch,
) -> Result<MeritReport> {
    let out = probabilistic_output(input_l, cfg)?;
    Ok(MeritReport {
        fidelity: fidelity(&out, input_l)?.to_f64_lossy(),
        negativity: negativity(&out, search).to_f64_lossy(),
        ps: out.ps().to_f64_lossy(),
        q_used: cfg.q.to_f64_lossy(),
    })
}

/// Bracket and tolerance for [`invert_ps`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvertOptions {
    pub q_lo: f64,
    pub q_hi: f64,
    /// Relative tolerance on PS.
    pub rtol: f64,
    pub max_iter: usize,
}

impl Default for InvertOptions {
    fn default() -> Self {
        InvertOptions {
            q_lo: 1e-6,
            q_hi: 20.0,
            rtol: 1e-4,
            max_iter: 200,
        }
    }
}

/// Half-width `Q` at which the success probability equals `target_ps`.
///
/// Bisection on the monotone map `Q ↦ PS(Q)`, halving in `ln Q`. The `q`
/// field of `cfg` is ignored.
pub fn invert_ps<T: Real>(
    target_ps: T,
    input_l: &GaussPolyWigner<T>,
    cfg: &ProbabilisticConfig<T>,
    opts: &InvertOptions,
) -> Result<T> {
    if !(target_ps > T::zero()) || !target_ps.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "target PS must be in (0, 1), got {target_ps:?}"
        )));
    }
    let ps_at = |q: T| success_probability(input_l, &cfg.with_q(q));
    let mut lo = T::lit(opts.q_lo);
    let mut hi = T::lit(opts.q_hi);
    let ps_lo = ps_at(lo)?;
    let ps_hi = ps_at(hi)?;
    let rtol = T::lit(opts.rtol);
    let unreachable = || Error::Unreachable {
        target: target_ps.to_f64_lossy(),
        ps_lo: ps_lo.to_f64_lossy(),
        ps_hi: ps_hi.to_f64_lossy(),
        q_lo: opts.q_lo,
        q_hi: opts.q_hi,
    };
    // PS < 1 for every finite window, so certainty is never reachable.
    if target_ps >= T::one()
        || target_ps < ps_lo * (T::one() - rtol)
        || target_ps > ps_hi * (T::one() + rtol)
    {
        return Err(unreachable());
    }
    if (ps_hi - target_ps).abs() <= rtol * target_ps {
        return Ok(hi);
    }
    if (ps_lo - target_ps).abs() <= rtol * target_ps {
        return Ok(lo);
    }
    for _ in 0..opts.max_iter {
        let mid = (lo * hi).sqrt();
        let ps = ps_at(mid)?;
        if (ps - target_ps).abs() <= rtol * target_ps {
            return Ok(mid);
        }
        if ps < target_ps {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo - T::one() <= T::epsilon() * T::lit(4.0) {
            break;
        }
    }
    Err(unreachable())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizer_finds_displaced_minimum() {
        let f = |x: f64, p: f64| (x - 1.234).powi(2) + 2.0 * (p + 0.5).powi(2) - 3.0;
        let (v, x, p) = minimize_plane(f, &NegativitySearch::default());
        assert!((v + 3.0).abs() < 1e-10);
        assert!((x - 1.234).abs() < 1e-5 && (p + 0.5).abs() < 1e-5);
    }

    #[test]
    fn single_photon_minimum_is_at_origin() {
        let w = GaussPolyWigner::<f64>::single_photon();
        let (v, x, p) = minimize_plane(|x, p| w.evaluate(&[x, p]), &NegativitySearch::default());
        assert!((v + 1.0 / std::f64::consts::PI).abs() < 1e-12);
        assert!(x.abs() < 1e-5 && p.abs() < 1e-5);
    }

    #[test]
    fn csv_row_layout() {
        let r = MeritReport {
            fidelity: 0.9,
            negativity: -0.3,
            ps: 0.01,
            q_used: 0.15,
        };
        assert_eq!(MeritReport::CSV_HEADER, "q,ps,fidelity,negativity");
        assert_eq!(r.csv_row(), "0.15,0.01,0.9,-0.3");
    }

    #[test]
    fn invert_rejects_certain_success() {
        let one = GaussPolyWigner::<f64>::single_photon();
        let cfg = ProbabilisticConfig::new(0.5, 0.5, 5.0, 1.0).unwrap();
        let err = invert_ps(1.0, &one, &cfg, &InvertOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Unreachable { .. }), "{err}");
        assert!(invert_ps(0.0, &one, &cfg, &InvertOptions::default()).is_err());
    }
}
