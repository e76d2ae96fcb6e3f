//! Wigner functions of the form polynomial × Gaussian.
//!
//! A [`GaussPolyWigner`] represents
//!
//! ```text
//! W(ξ) = P(ξ) · exp(−½ ξᵀ A ξ + bᵀ ξ + c)
//! ```
//!
//! with `A` symmetric positive definite. The family is closed under linear
//! changes of variables, pointwise products, fixing variables to constants and
//! integrating variables over the whole real line, and all of those are done
//! in closed form here.
//!
//! Convention: the vacuum has quadrature variance 1/2, i.e.
//! `W_vac(x, p) = exp(−x² − p²) / π`.

mod oracle;
mod poly;
mod quadrature;

use serde::{Deserialize, Serialize};

pub use oracle::{brute_force_axes, brute_force_integral, brute_force_with, OracleAxis};
pub use poly::{AffineForm, Exponents, GaussianMoments, Polynomial};
pub use quadrature::{window_reduce, window_reduce_box, GaussLegendre, WindowNode, WindowSlices};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Real;

/// Default cap on the total polynomial degree.
pub const DEFAULT_DEGREE_CAP: u32 = 8;

/// Largest accepted condition number of a Gaussian block being integrated out.
pub const CONDITION_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussPolyWigner<T> {
    poly: Polynomial<T>,
    a: Matrix<T>,
    b: Vec<T>,
    c: T,
    degree_cap: u32,
}

impl<T: Real> GaussPolyWigner<T> {
    pub fn new(poly: Polynomial<T>, a: Matrix<T>, b: Vec<T>, c: T) -> Result<Self> {
        Self::with_degree_cap(poly, a, b, c, DEFAULT_DEGREE_CAP)
    }

    pub fn with_degree_cap(
        poly: Polynomial<T>,
        a: Matrix<T>,
        b: Vec<T>,
        c: T,
        degree_cap: u32,
    ) -> Result<Self> {
        let dim = poly.nvars();
        if a.rows() != dim || a.cols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: a.rows() * a.cols(),
            });
        }
        if b.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: b.len(),
            });
        }
        if poly.degree() > degree_cap {
            return Err(Error::DegreeCap {
                degree: poly.degree(),
                cap: degree_cap,
            });
        }
        let scale = a
            .as_slice()
            .iter()
            .fold(T::one(), |m, &v| if v.abs() > m { v.abs() } else { m });
        if !a.is_symmetric(T::lit(1e-12) * scale) {
            return Err(Error::NotPositiveDefinite);
        }
        let a = a.symmetrize();
        if a.cholesky().is_none() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(GaussPolyWigner {
            poly,
            a,
            b,
            c,
            degree_cap,
        })
    }

    /// Thermal state of quadrature variance `v`:
    /// `exp(−(x² + p²) / 2v) / (2π v)`.
    pub fn thermal(v: T) -> Result<Self> {
        if !v.is_finite() {
            return Err(Error::NonFinite("variance"));
        }
        if v < T::lit(0.5) {
            return Err(Error::SubVacuum(v.to_f64_lossy()));
        }
        let a = Matrix::from_diagonal(&[T::one() / v, T::one() / v]);
        let c = -(T::two_pi() * v).ln();
        Self::new(Polynomial::constant(2, T::one()), a, vec![T::zero(); 2], c)
    }

    pub fn vacuum() -> Self {
        Self::thermal(T::lit(0.5)).expect("vacuum is a valid thermal state")
    }

    /// Single-photon Fock state: `(2x² + 2p² − 1) · exp(−x² − p²) / π`.
    pub fn single_photon() -> Self {
        let two = T::lit(2.0);
        let poly = Polynomial::from_terms(
            2,
            [
                (vec![2, 0], two),
                (vec![0, 2], two),
                (vec![0, 0], -T::one()),
            ],
        );
        let a = Matrix::from_diagonal(&[two, two]);
        Self::new(poly, a, vec![T::zero(); 2], -T::pi().ln())
            .expect("single-photon Wigner function is well formed")
    }

    pub fn dim(&self) -> usize {
        self.poly.nvars()
    }

    pub fn poly(&self) -> &Polynomial<T> {
        &self.poly
    }

    pub fn quad_form(&self) -> &Matrix<T> {
        &self.a
    }

    pub fn linear(&self) -> &[T] {
        &self.b
    }

    pub fn log_scale(&self) -> T {
        self.c
    }

    pub fn degree(&self) -> u32 {
        self.poly.degree()
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn evaluate(&self, point: &[T]) -> T {
        assert_eq!(point.len(), self.dim(), "evaluation point dimension");
        let mut expo = self.c;
        for (i, &x) in point.iter().enumerate() {
            expo = expo + self.b[i] * x;
        }
        expo = expo - T::lit(0.5) * self.a.quadratic_form(point);
        self.poly.evaluate(point) * expo.exp()
    }

    /// Mean and covariance of the Gaussian factor alone.
    pub fn gaussian_moments(&self) -> Result<(Vec<T>, Matrix<T>)> {
        let cov = self.a.inverse()?.symmetrize();
        let mean = cov.mul_vec(&self.b);
        Ok((mean, cov))
    }

    /// `ξ ↦ W(T ξ)`. For symplectic `T` the total integral is unchanged.
    pub fn substitute_linear(&self, t: &Matrix<T>) -> Result<Self> {
        if t.rows() != self.dim() || t.cols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim() * self.dim(),
                found: t.rows() * t.cols(),
            });
        }
        if t.determinant() == T::zero() {
            return Err(Error::Singular);
        }
        let a = t.transpose().matmul(&self.a).matmul(t).symmetrize();
        let b = t.tr_mul_vec(&self.b);
        let poly = self.poly.substitute_linear(t);
        Self::with_degree_cap(poly, a, b, self.c, self.degree_cap)
    }

    /// Integrates `vars` over the whole real line. `vars` must be a non-empty
    /// proper subset of the variables; the remaining variables keep their
    /// relative order.
    pub fn marginalize_full(&self, vars: &[usize]) -> Result<Self> {
        if vars.is_empty() || vars.len() >= self.dim() {
            return Err(Error::InvalidAssignment(format!(
                "marginalize {} of {} variables",
                vars.len(),
                self.dim()
            )));
        }
        self.integrate_out(vars)
    }

    fn split(&self, vars: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
        let mut mask = vec![false; self.dim()];
        for &v in vars {
            if v >= self.dim() || std::mem::replace(&mut mask[v], true) {
                return Err(Error::InvalidAssignment(format!("bad variable index {v}")));
            }
        }
        let keep = (0..self.dim()).filter(|&i| !mask[i]).collect();
        Ok((keep, vars.to_vec()))
    }

    fn integrate_out(&self, vars: &[usize]) -> Result<Self> {
        let (zi, yi) = self.split(vars)?;
        let (nz, ny) = (zi.len(), yi.len());
        if ny == 0 {
            return Ok(self.clone());
        }
        let a_yy = self.a.select(&yi, &yi);
        let a_yz = self.a.select(&yi, &zi);
        let a_zz = self.a.select(&zi, &zi);
        let b_y: Vec<T> = yi.iter().map(|&i| self.b[i]).collect();
        let b_z: Vec<T> = zi.iter().map(|&i| self.b[i]).collect();

        let cond = a_yy.spd_condition();
        if !(cond.to_f64_lossy() <= CONDITION_LIMIT) {
            return Err(Error::IllConditioned(cond.to_f64_lossy()));
        }
        let log_det = a_yy.spd_log_det().ok_or(Error::NotPositiveDefinite)?;
        let sigma = a_yy.inverse()?.symmetrize();

        // y = m0 + M z + η,  η ~ N(0, Σ)
        let m0 = sigma.mul_vec(&b_y);
        let mz = sigma.matmul(&a_yz).scale(-T::one());

        let a_new = a_zz.sub(&a_yz.transpose().matmul(&sigma).matmul(&a_yz)).symmetrize();
        let shift = mz.tr_mul_vec(&b_y);
        let b_new: Vec<T> = b_z.iter().zip(&shift).map(|(&x, &s)| x + s).collect();
        let half = T::lit(0.5);
        let ny_t = T::from_usize(ny).unwrap();
        let c_new = self.c + half * b_y.iter().zip(&m0).map(|(&x, &m)| x * m).sum::<T>()
            + half * ny_t * T::two_pi().ln()
            - half * log_det;

        let mut forms = vec![
            AffineForm {
                constant: T::zero(),
                coeffs: vec![T::zero(); nz + ny],
            };
            self.dim()
        ];
        for (k, &i) in zi.iter().enumerate() {
            forms[i].coeffs[k] = T::one();
        }
        for (j, &i) in yi.iter().enumerate() {
            forms[i].constant = m0[j];
            for k in 0..nz {
                forms[i].coeffs[k] = mz[(j, k)];
            }
            forms[i].coeffs[nz + j] = T::one();
        }
        let poly = self
            .poly
            .substitute_affine(nz + ny, &forms)
            .gaussian_expectation(&sigma);
        Self::with_degree_cap(poly, a_new, b_new, c_new, self.degree_cap)
    }

    /// Restricts `W` to fixed values of some variables.
    pub fn fix_variables(&self, fixed: &[(usize, T)]) -> Result<Self> {
        let vars: Vec<usize> = fixed.iter().map(|&(i, _)| i).collect();
        let (zi, yi) = self.split(&vars)?;
        let y0: Vec<T> = fixed.iter().map(|&(_, v)| v).collect();
        let a_zz = self.a.select(&zi, &zi);
        let a_zy = self.a.select(&zi, &yi);
        let a_yy = self.a.select(&yi, &yi);
        let cross = a_zy.mul_vec(&y0);
        let b_new: Vec<T> = zi
            .iter()
            .zip(&cross)
            .map(|(&i, &s)| self.b[i] - s)
            .collect();
        let lin: T = yi.iter().zip(&y0).map(|(&i, &v)| self.b[i] * v).sum();
        let c_new = self.c + lin - T::lit(0.5) * a_yy.quadratic_form(&y0);
        let poly = self.poly.fix_variables(fixed);
        Ok(GaussPolyWigner {
            poly,
            a: a_zz,
            b: b_new,
            c: c_new,
            degree_cap: self.degree_cap,
        })
    }

    /// Pointwise product of two functions on the same variables.
    pub fn product(&self, other: &GaussPolyWigner<T>) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let poly = self.poly.mul(&other.poly);
        let b = self.b.iter().zip(&other.b).map(|(&x, &y)| x + y).collect();
        Self::with_degree_cap(
            poly,
            self.a.add(&other.a),
            b,
            self.c + other.c,
            self.degree_cap.min(other.degree_cap),
        )
    }

    pub fn total_integral(&self) -> Result<T> {
        let all: Vec<usize> = (0..self.dim()).collect();
        let scalar = self.integrate_out(&all)?;
        Ok(scalar.poly.coefficient(&[]) * scalar.c.exp())
    }

    /// `∫ W₁ W₂ dξ`
    pub fn overlap(&self, other: &GaussPolyWigner<T>) -> Result<T> {
        self.product(other)?.total_integral()
    }

    /// `2π ∫ W² dξ` for a single mode.
    pub fn purity(&self) -> Result<T> {
        Ok(T::two_pi() * self.overlap(self)?)
    }

    /// Joint function `Π_k W_k` where variable `i` of factor `k` is placed at
    /// index `factors[k].1[i]`. Every index `0..total` must be covered exactly
    /// once.
    pub fn product_embed(factors: &[(&GaussPolyWigner<T>, &[usize])]) -> Result<Self> {
        let dim: usize = factors.iter().map(|(w, _)| w.dim()).sum();
        let mut covered = vec![false; dim];
        let mut poly = Polynomial::constant(dim, T::one());
        let mut a = Matrix::zeros(dim, dim);
        let mut b = vec![T::zero(); dim];
        let mut c = T::zero();
        let mut cap = DEFAULT_DEGREE_CAP;
        for (w, map) in factors {
            if map.len() != w.dim() {
                return Err(Error::InvalidAssignment(format!(
                    "factor of dimension {} given {} slots",
                    w.dim(),
                    map.len()
                )));
            }
            for &t in map.iter() {
                if t >= dim || std::mem::replace(&mut covered[t], true) {
                    return Err(Error::InvalidAssignment(format!(
                        "slot {t} missing or assigned twice"
                    )));
                }
            }
            for i in 0..w.dim() {
                b[map[i]] = w.b[i];
                for j in 0..w.dim() {
                    a[(map[i], map[j])] = w.a[(i, j)];
                }
            }
            poly = poly.mul(&w.poly.embed(dim, map));
            c = c + w.c;
            cap = cap.max(w.degree_cap);
        }
        Self::with_degree_cap(poly, a, b, c, cap)
    }

    pub fn to_json(&self) -> WignerJson {
        WignerJson {
            dim: self.dim(),
            poly: self
                .poly
                .terms()
                .map(|(e, &c)| (e.clone(), c.to_f64_lossy()))
                .collect(),
            a: (0..self.dim())
                .map(|i| self.a.row(i).iter().map(|v| v.to_f64_lossy()).collect())
                .collect(),
            b: self.b.iter().map(|v| v.to_f64_lossy()).collect(),
            c: self.c.to_f64_lossy(),
        }
    }

    pub fn from_json(json: &WignerJson) -> Result<Self> {
        let poly = Polynomial::from_terms(
            json.dim,
            json.poly.iter().map(|(e, c)| (e.clone(), T::lit(*c))),
        );
        let rows: Vec<Vec<T>> = json
            .a
            .iter()
            .map(|r| r.iter().map(|&v| T::lit(v)).collect())
            .collect();
        let a = if json.dim == 0 {
            Matrix::zeros(0, 0)
        } else {
            Matrix::from_rows(&rows)?
        };
        Self::new(
            poly,
            a,
            json.b.iter().map(|&v| T::lit(v)).collect(),
            T::lit(json.c),
        )
    }
}

/// JSON layout of a [`GaussPolyWigner`]:
/// `{"dim", "poly": [[exponents], coeff], "A", "b", "c"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerJson {
    pub dim: usize,
    pub poly: Vec<(Vec<u32>, f64)>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: f64,
}
