//! Gauss–Legendre rules and windowed slicing of Wigner functions.

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::GaussPolyWigner;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Rule with `order` nodes, exact for polynomials of degree `2·order − 1`.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let n = order;
        let nf = T::from_usize(n).unwrap();
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let two = T::lit(2.0);
        let tol = T::epsilon() * T::lit(4.0);
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess
            let k = T::from_usize(i + 1).unwrap();
            let mut x = (T::pi() * (k - T::lit(0.25)) / (nf + T::lit(0.5))).cos();
            let mut dp = T::one();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x = x - dx;
                if dx.abs() <= tol {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = two / ((T::one() - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = T::zero();
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes and weights mapped onto `[lo, hi]`.
    pub fn on_interval(&self, lo: T, hi: T) -> Vec<(T, T)> {
        let half = (hi - lo) * T::lit(0.5);
        let mid = (hi + lo) * T::lit(0.5);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| (mid + half * x, half * w))
            .collect()
    }

    pub fn integrate(&self, lo: T, hi: T, f: impl Fn(T) -> T) -> T {
        self.on_interval(lo, hi)
            .into_iter()
            .map(|(x, w)| w * f(x))
            .sum()
    }
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = T::from_usize(k).unwrap();
        let p2 = ((T::lit(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = T::from_usize(n).unwrap();
    let d = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

/// One tensor-grid node of a windowed integral.
#[derive(Debug, Clone)]
pub struct WindowNode<T> {
    pub weight: T,
    /// Values assigned to the windowed variables, in the order of
    /// [`WindowSlices::windowed`].
    pub fixed_values: Vec<T>,
    /// The Wigner function restricted to those values, over the remaining
    /// variables.
    pub slice: GaussPolyWigner<T>,
}

/// A Wigner function integrated numerically over a box in some of its
/// variables, represented as a weighted sum of slices over the rest.
#[derive(Debug, Clone)]
pub struct WindowSlices<T> {
    windowed: Vec<usize>,
    remaining: Vec<usize>,
    bounds: Vec<(T, T)>,
    order: usize,
    nodes: Vec<WindowNode<T>>,
}

impl<T: Real> WindowSlices<T> {
    pub fn windowed(&self) -> &[usize] {
        &self.windowed
    }

    /// Original indices of the slice variables.
    pub fn remaining(&self) -> &[usize] {
        &self.remaining
    }

    pub fn bounds(&self) -> &[(T, T)] {
        &self.bounds
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[WindowNode<T>] {
        &self.nodes
    }

    pub fn weight_sum(&self) -> T {
        self.nodes.iter().map(|n| n.weight).sum()
    }

    /// `Σ weight · f(slice)`
    pub fn integrate_with(&self, mut f: impl FnMut(&GaussPolyWigner<T>) -> Result<T>) -> Result<T> {
        let mut acc = T::zero();
        for n in &self.nodes {
            acc = acc + n.weight * f(&n.slice)?;
        }
        Ok(acc)
    }

    /// The windowed integral as a function of the remaining variables.
    pub fn evaluate(&self, point: &[T]) -> T {
        self.nodes
            .iter()
            .map(|n| n.weight * n.slice.evaluate(point))
            .sum()
    }

    /// Integral of the windowed function over the remaining variables.
    pub fn total_integral(&self) -> Result<T> {
        self.integrate_with(|s| s.total_integral())
    }
}

/// Tensor Gauss–Legendre grid over `[−q, q]` in each of `vars`.
pub fn window_reduce<T: Real>(
    w: &GaussPolyWigner<T>,
    vars: &[usize],
    q: T,
    order: usize,
) -> Result<WindowSlices<T>> {
    if !(q > T::zero()) || !q.is_finite() {
        return Err(Error::InvalidWindow(format!(
            "half-width must be positive and finite, got {:?}",
            q
        )));
    }
    let bounds = vec![(-q, q); vars.len()];
    window_reduce_box(w, vars, &bounds, order)
}

/// Tensor Gauss–Legendre grid over an arbitrary box `bounds[k]` in `vars[k]`.
pub fn window_reduce_box<T: Real>(
    w: &GaussPolyWigner<T>,
    vars: &[usize],
    bounds: &[(T, T)],
    order: usize,
) -> Result<WindowSlices<T>> {
    if order < 2 {
        return Err(Error::InvalidWindow(format!("order must be >= 2, got {order}")));
    }
    if vars.is_empty() || vars.len() != bounds.len() {
        return Err(Error::InvalidWindow("one bound per windowed variable".into()));
    }
    for &(lo, hi) in bounds {
        if !(hi > lo) {
            return Err(Error::InvalidWindow(format!("empty interval [{lo:?}, {hi:?}]")));
        }
    }
    let mut seen = vec![false; w.dim()];
    for &v in vars {
        if v >= w.dim() || std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidAssignment(format!("bad windowed variable {v}")));
        }
    }
    let remaining: Vec<usize> = (0..w.dim()).filter(|i| !seen[*i]).collect();
    let rule = GaussLegendre::<T>::new(order);
    let axes: Vec<Vec<(T, T)>> = bounds.iter().map(|&(lo, hi)| rule.on_interval(lo, hi)).collect();

    let mut nodes = Vec::with_capacity(order.pow(vars.len() as u32));
    let mut idx = vec![0usize; vars.len()];
    loop {
        let mut weight = T::one();
        let mut fixed = Vec::with_capacity(vars.len());
        for (k, &i) in idx.iter().enumerate() {
            let (x, wt) = axes[k][i];
            weight = weight * wt;
            fixed.push((vars[k], x));
        }
        let slice = w.fix_variables(&fixed)?;
        nodes.push(WindowNode {
            weight,
            fixed_values: fixed.iter().map(|&(_, x)| x).collect(),
            slice,
        });
        // odometer
        let mut k = vars.len();
        loop {
            if k == 0 {
                return Ok(WindowSlices {
                    windowed: vars.to_vec(),
                    remaining,
                    bounds: bounds.to_vec(),
                    order,
                    nodes,
                });
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < order {
                break;
            }
            idx[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_rules_match_tables() {
        let r = GaussLegendre::<f64>::new(2);
        let x = 1.0 / 3f64.sqrt();
        assert!((r.nodes[0] + x).abs() < 1e-15 && (r.nodes[1] - x).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-15);
        let r3 = GaussLegendre::<f64>::new(3);
        assert!((r3.nodes[2] - 0.6f64.sqrt()).abs() < 1e-15);
        assert!((r3.weights[1] - 8.0 / 9.0).abs() < 1e-15);
        assert!((r3.weights[0] - 5.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn exact_for_high_degree_polynomials() {
        for order in [5usize, 16, 32, 64] {
            let r = GaussLegendre::<f64>::new(order);
            let deg = 2 * order as i32 - 2;
            let got = r.integrate(-1.0, 1.0, |x| x.powi(deg));
            let want = 2.0 / (deg as f64 + 1.0);
            assert!((got - want).abs() < 1e-13, "order {order}: {got} vs {want}");
            let wsum: f64 = r.weights.iter().sum();
            assert!((wsum - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn f32_rule_is_usable() {
        let r = GaussLegendre::<f32>::new(8);
        let got = r.integrate(0.0, 1.0, |x| x * x);
        assert!((got - 1.0 / 3.0).abs() < 1e-6);
    }
}
