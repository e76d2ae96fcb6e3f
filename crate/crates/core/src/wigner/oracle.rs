//! Brute-force trapezoid integration, used to cross-check the closed-form
//! calculus.
//!
//! Only pointwise evaluation of the integrand is used. The Gaussian part
//! is consulted solely to place integration boxes.

use crate::linalg::Matrix;
use crate::scalar::Real;

use super::GaussPolyWigner;

fn simpson<T: Real>(lo: T, hi: T, n: usize) -> Vec<(T, T)> {
    assert!(n >= 3 && n % 2 == 1, "Simpson rule needs an odd number of points");
    let h = (hi - lo) / T::from_usize(n - 1).unwrap();
    let third = h / T::lit(3.0);
    (0..n)
        .map(|i| {
            let x = lo + h * T::from_usize(i).unwrap();
            let w = if i == 0 || i == n - 1 {
                third
            } else if i % 2 == 1 {
                third * T::lit(4.0)
            } else {
                third * T::lit(2.0)
            };
            (x, w)
        })
        .collect()
}

fn trapezoid<T: Real>(lo: T, hi: T, n: usize) -> Vec<(T, T)> {
    assert!(n >= 2, "trapezoid rule needs at least two points");
    let h = (hi - lo) / T::from_usize(n - 1).unwrap();
    (0..n)
        .map(|i| {
            let x = lo + h * T::from_usize(i).unwrap();
            let w = if i == 0 || i == n - 1 { h * T::lit(0.5) } else { h };
            (x, w)
        })
        .collect()
}

/// Composite Simpson rule over the box `[−halfwidth, halfwidth]^dim` with
/// `grid_n` (odd) points per axis. The box should cover at least six
/// standard deviations of the Gaussian factor.
pub fn brute_force_integral<T: Real>(w: &GaussPolyWigner<T>, halfwidth: T, grid_n: usize) -> T {
    let axes: Vec<OracleAxis<T>> = (0..w.dim())
        .map(|_| OracleAxis::Window {
            lo: -halfwidth,
            hi: halfwidth,
            points: grid_n,
        })
        .collect();
    brute_force_axes(w, &axes)
}

/// How the oracle treats one variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleAxis<T> {
    /// Held at a value, not integrated.
    Fixed(T),
    /// Composite Simpson over `[lo, hi]`; `points` must be odd.
    Window { lo: T, hi: T, points: usize },
    /// Whole real line, truncated to `± sigmas` conditional standard
    /// deviations around the conditional mean of the Gaussian factor.
    Line { points: usize, sigmas: T },
}

struct LineLevel<T> {
    var: usize,
    /// variables not yet integrated at this level, `var` first
    inner: Vec<usize>,
    /// complement of `inner`
    outer: Vec<usize>,
    row0: Vec<T>,
    a_io: Matrix<T>,
    sd: T,
    points: usize,
    sigmas: T,
}

/// Nested trapezoid integration of `w` according to `axes` (one per
/// variable). Fixed and window axes form the outer loops; line axes are
/// integrated innermost, each centred on the conditional distribution given
/// the variables already assigned.
pub fn brute_force_axes<T: Real>(w: &GaussPolyWigner<T>, axes: &[OracleAxis<T>]) -> T {
    brute_force_with(|x| w.evaluate(x), w.quad_form(), w.linear(), axes)
}

/// Like [`brute_force_axes`] for an arbitrary integrand `f`. The Gaussian
/// `exp(−½ ξᵀAξ + bᵀξ)` only places the line axes; it should carry the
/// decay of `f`.
pub fn brute_force_with<T: Real>(
    f: impl Fn(&[T]) -> T,
    a: &Matrix<T>,
    b: &[T],
    axes: &[OracleAxis<T>],
) -> T {
    assert_eq!(axes.len(), a.rows(), "one oracle axis per variable");
    let line_vars: Vec<usize> = (0..axes.len())
        .filter(|&i| matches!(axes[i], OracleAxis::Line { .. }))
        .collect();

    let mut levels = Vec::with_capacity(line_vars.len());
    for (k, &var) in line_vars.iter().enumerate() {
        let inner: Vec<usize> = line_vars[k..].to_vec();
        let outer: Vec<usize> = (0..axes.len()).filter(|i| !inner.contains(i)).collect();
        let sigma = a
            .select(&inner, &inner)
            .inverse()
            .expect("positive-definite block")
            .symmetrize();
        let (points, sigmas) = match axes[var] {
            OracleAxis::Line { points, sigmas } => (points, sigmas),
            _ => unreachable!(),
        };
        levels.push(LineLevel {
            var,
            row0: sigma.row(0).to_vec(),
            sd: sigma[(0, 0)].sqrt(),
            a_io: a.select(&inner, &outer),
            inner,
            outer,
            points,
            sigmas,
        });
    }

    let outer_axes: Vec<(usize, Vec<(T, T)>)> = axes
        .iter()
        .enumerate()
        .filter_map(|(i, ax)| match *ax {
            OracleAxis::Fixed(v) => Some((i, vec![(v, T::one())])),
            OracleAxis::Window { lo, hi, points } => Some((i, simpson(lo, hi, points))),
            OracleAxis::Line { .. } => None,
        })
        .collect();

    let mut point = vec![T::zero(); axes.len()];
    let mut total = T::zero();
    let mut idx = vec![0usize; outer_axes.len()];
    loop {
        let mut weight = T::one();
        for (k, (var, grid)) in outer_axes.iter().enumerate() {
            let (x, wt) = grid[idx[k]];
            point[*var] = x;
            weight = weight * wt;
        }
        total = total + weight * integrate_lines(&f, b, &levels, 0, &mut point);

        let mut k = outer_axes.len();
        loop {
            if k == 0 {
                return total;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < outer_axes[k].1.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn integrate_lines<T: Real>(
    f: &impl Fn(&[T]) -> T,
    b: &[T],
    levels: &[LineLevel<T>],
    depth: usize,
    point: &mut [T],
) -> T {
    let Some(level) = levels.get(depth) else {
        return f(point);
    };
    // conditional mean of `var` given the outer variables:
    // (Σ (b_I − A_IO x_O))_0
    let mut mean = T::zero();
    for (r, &i) in level.inner.iter().enumerate() {
        let mut rhs = b[i];
        for (c, &o) in level.outer.iter().enumerate() {
            rhs = rhs - level.a_io[(r, c)] * point[o];
        }
        mean = mean + level.row0[r] * rhs;
    }
    let half = level.sigmas * level.sd;
    let mut acc = T::zero();
    for (x, wt) in trapezoid(mean - half, mean + half, level.points) {
        point[level.var] = x;
        acc = acc + wt * integrate_lines(f, b, levels, depth + 1, point);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_and_photon_normalized_on_grid() {
        let vac = GaussPolyWigner::<f64>::vacuum();
        assert!((brute_force_integral(&vac, 6.0, 201) - 1.0).abs() < 1e-6);
        let one = GaussPolyWigner::<f64>::single_photon();
        assert!((brute_force_integral(&one, 6.0, 201) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn line_axes_follow_correlations() {
        // strongly correlated thermal pair: (x, y) with y = 5x + noise
        let th = GaussPolyWigner::<f64>::thermal(0.5).unwrap();
        let t = Matrix::from_rows(&[vec![1.0, 0.0], vec![-5.0, 1.0]]).unwrap();
        let w = th.substitute_linear(&t).unwrap();
        let line = OracleAxis::Line {
            points: 41,
            sigmas: 9.0,
        };
        let got = brute_force_axes(&w, &[line, line]);
        assert!((got - 1.0).abs() < 1e-10, "{got}");
    }
}
