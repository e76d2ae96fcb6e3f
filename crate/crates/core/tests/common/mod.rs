//! Helpers shared by the integration tests.
#![allow(dead_code)]

use qnd_interface::linalg::Matrix;
use qnd_interface::protocols::{sequential_chain, ProbabilisticConfig};
use qnd_interface::wigner::{brute_force_with, GaussPolyWigner, OracleAxis, Polynomial};
use qnd_interface::Wigner64;
use rand::Rng;

/// A random positive-definite Gaussian times the square of a random
/// quadratic plus a positive constant, so every instance has positive mass
/// and total degree 4.
pub fn random_instance(rng: &mut impl Rng, dim: usize) -> Wigner64 {
    let mut l = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..=i {
            l[(i, j)] = rng.gen_range(-0.7..0.7);
        }
    }
    let mut a = l.matmul(&l.transpose());
    for i in 0..dim {
        a[(i, i)] += 0.5;
    }
    let b: Vec<f64> = (0..dim).map(|_| rng.gen_range(-0.5..0.5)).collect();

    let mut quad = Polynomial::constant(dim, rng.gen_range(-1.0..1.0));
    for i in 0..dim {
        quad = quad.add(&Polynomial::variable(dim, i).scale(rng.gen_range(-1.0..1.0)));
        for j in i..dim {
            let mono = Polynomial::variable(dim, i).mul(&Polynomial::variable(dim, j));
            quad = quad.add(&mono.scale(rng.gen_range(-0.5..0.5)));
        }
    }
    let poly = quad.mul(&quad).add(&Polynomial::constant(dim, rng.gen_range(0.1..1.0)));
    GaussPolyWigner::new(poly, a, b, rng.gen_range(-1.0..0.0)).unwrap()
}

/// Brute-force reference for the post-selected sequential scheme. The
/// integrand is the product of the three input Wigner functions evaluated
/// at `S⁻¹ξ`, with `S⁻¹` from a generic matrix inverse.
pub struct PipelineOracle {
    input_l: Wigner64,
    w_m: Wigner64,
    w_a: Wigner64,
    s_inv: Matrix<f64>,
    a: Matrix<f64>,
    b: Vec<f64>,
    q: f64,
    pub window_points: usize,
    pub line_points: usize,
    pub sigmas: f64,
}

impl PipelineOracle {
    pub fn new(input_l: &Wigner64, cfg: &ProbabilisticConfig<f64>) -> Self {
        let w_m = GaussPolyWigner::thermal(cfg.v_m).unwrap();
        let w_a = GaussPolyWigner::thermal(cfg.v_a).unwrap();
        let s = sequential_chain(&cfg.sequential).unwrap();
        let s_inv = s.matrix().inverse().unwrap();
        let mut a_in = Matrix::zeros(6, 6);
        let mut b_in = vec![0.0; 6];
        for (k, w) in [input_l, &w_m, &w_a].into_iter().enumerate() {
            for i in 0..2 {
                b_in[2 * k + i] = w.linear()[i];
                for j in 0..2 {
                    a_in[(2 * k + i, 2 * k + j)] = w.quad_form()[(i, j)];
                }
            }
        }
        let a = s_inv.transpose().matmul(&a_in).matmul(&s_inv).symmetrize();
        let b = s_inv.tr_mul_vec(&b_in);
        PipelineOracle {
            input_l: input_l.clone(),
            w_m,
            w_a,
            s_inv,
            a,
            b,
            q: cfg.q,
            window_points: 41,
            line_points: 15,
            sigmas: 7.0,
        }
    }

    fn integrand(&self, xi: &[f64]) -> f64 {
        let y = self.s_inv.mul_vec(xi);
        self.input_l.evaluate(&y[0..2]) * self.w_m.evaluate(&y[2..4]) * self.w_a.evaluate(&y[4..6])
    }

    fn axes(&self, matter: Option<(f64, f64)>) -> Vec<OracleAxis<f64>> {
        let window = OracleAxis::Window {
            lo: -self.q,
            hi: self.q,
            points: self.window_points,
        };
        let line = OracleAxis::Line {
            points: self.line_points,
            sigmas: self.sigmas,
        };
        let (xa, pa) = match matter {
            Some((x, p)) => (OracleAxis::Fixed(x), OracleAxis::Fixed(p)),
            None => (line, line),
        };
        // (x_L, p_L, x_M, p_M, x_A, p_A); x_M and p_L are measured
        vec![line, window, window, line, xa, pa]
    }

    pub fn success_probability(&self) -> f64 {
        brute_force_with(|x| self.integrand(x), &self.a, &self.b, &self.axes(None))
    }

    /// Unnormalized output at `(x_A, p_A)`.
    pub fn output(&self, x: f64, p: f64) -> f64 {
        brute_force_with(|v| self.integrand(v), &self.a, &self.b, &self.axes(Some((x, p))))
    }
}
