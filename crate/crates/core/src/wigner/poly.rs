//! Sparse multivariate polynomials.

use std::collections::{BTreeMap, HashMap};

use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Exponent tuple, one entry per variable.
pub type Exponents = Vec<u32>;

/// An affine form `constant + Σ coeffs[j] · y_j` in some set of variables.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineForm<T> {
    pub constant: T,
    pub coeffs: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    nvars: usize,
    terms: BTreeMap<Exponents, T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, T::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, T)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent tuple length");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &T)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, e: &[u32]) -> T {
        self.terms.get(e).copied().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn add_term(&mut self, e: Exponents, c: T) {
        if c == T::zero() {
            return;
        }
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = *o.get() + c;
                if s == T::zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial<T>) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, &c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial<T>) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn evaluate(&self, point: &[T]) -> T {
        assert_eq!(point.len(), self.nvars);
        self.terms.iter().fold(T::zero(), |acc, (e, &c)| {
            let mono = e
                .iter()
                .zip(point)
                .fold(T::one(), |m, (&k, &x)| m * pow(x, k));
            acc + c * mono
        })
    }

    /// Replace variable `i` by `forms[i]`, an affine form in `new_nvars`
    /// variables.
    pub fn substitute_affine(&self, new_nvars: usize, forms: &[AffineForm<T>]) -> Self {
        assert_eq!(forms.len(), self.nvars);
        let as_poly: Vec<Polynomial<T>> = forms
            .iter()
            .map(|f| {
                assert_eq!(f.coeffs.len(), new_nvars);
                let mut p = Polynomial::constant(new_nvars, f.constant);
                for (j, &c) in f.coeffs.iter().enumerate() {
                    p = p.add(&Polynomial::variable(new_nvars, j).scale(c));
                }
                p
            })
            .collect();
        // powers[i][k] = forms[i]^k, filled lazily
        let mut powers: Vec<Vec<Polynomial<T>>> = as_poly
            .iter()
            .map(|_| vec![Polynomial::constant(new_nvars, T::one())])
            .collect();
        let mut out = Self::zero(new_nvars);
        for (e, &c) in &self.terms {
            let mut term = Polynomial::constant(new_nvars, c);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&as_poly[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][k as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    /// Linear substitution `ξ → T ξ`: variable `i` becomes row `i` of `t`.
    pub fn substitute_linear(&self, t: &Matrix<T>) -> Self {
        assert_eq!(t.rows(), self.nvars);
        let forms: Vec<AffineForm<T>> = (0..t.rows())
            .map(|i| AffineForm {
                constant: T::zero(),
                coeffs: t.row(i).to_vec(),
            })
            .collect();
        self.substitute_affine(t.cols(), &forms)
    }

    /// Expectation over the trailing `cov.rows()` variables, taken as a
    /// zero-mean Gaussian vector with covariance `cov`. The result is a
    /// polynomial in the leading variables.
    pub fn gaussian_expectation(&self, cov: &Matrix<T>) -> Self {
        let ny = cov.rows();
        assert!(ny <= self.nvars);
        let nz = self.nvars - ny;
        let mut moments = GaussianMoments::new(cov);
        let mut out = Self::zero(nz);
        for (e, &c) in &self.terms {
            let m = moments.moment(&e[nz..]);
            if m != T::zero() {
                out.add_term(e[..nz].to_vec(), c * m);
            }
        }
        out
    }

    /// Fix the listed variables to constants; the remaining variables keep
    /// their relative order.
    pub fn fix_variables(&self, fixed: &[(usize, T)]) -> Self {
        let keep: Vec<usize> = (0..self.nvars)
            .filter(|i| fixed.iter().all(|(j, _)| j != i))
            .collect();
        let mut out = Self::zero(keep.len());
        for (e, &c) in &self.terms {
            let mut v = c;
            for &(j, x) in fixed {
                v = v * pow(x, e[j]);
            }
            out.add_term(keep.iter().map(|&i| e[i]).collect(), v);
        }
        out
    }

    /// Reorder and embed: variable `i` of `self` becomes variable `map[i]`
    /// of a polynomial in `nvars` variables.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars);
        let mut out = Self::zero(nvars);
        for (e, &c) in &self.terms {
            let mut ne = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                ne[map[i]] += k;
            }
            out.add_term(ne, c);
        }
        out
    }

    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(T) -> U) -> Polynomial<U> {
        Polynomial::from_terms(self.nvars, self.terms.iter().map(|(e, &c)| (e.clone(), f(c))))
    }
}

fn pow<T: Scalar>(x: T, k: u32) -> T {
    let mut acc = T::one();
    for _ in 0..k {
        acc = acc * x;
    }
    acc
}

/// Memoized raw moments `E[η^α]` of a zero-mean Gaussian vector (Isserlis).
pub struct GaussianMoments<'a, T> {
    cov: &'a Matrix<T>,
    memo: HashMap<Exponents, T>,
}

impl<'a, T: Scalar> GaussianMoments<'a, T> {
    pub fn new(cov: &'a Matrix<T>) -> Self {
        GaussianMoments {
            cov,
            memo: HashMap::new(),
        }
    }

    pub fn moment(&mut self, alpha: &[u32]) -> T {
        let total: u32 = alpha.iter().sum();
        if total == 0 {
            return T::one();
        }
        if total % 2 == 1 {
            return T::zero();
        }
        if let Some(&v) = self.memo.get(alpha) {
            return v;
        }
        // E[η_i η^β] = Σ_j Σ_ij β_j E[η^{β − e_j}],  β = α − e_i
        let i = alpha.iter().position(|&k| k > 0).unwrap();
        let mut beta = alpha.to_vec();
        beta[i] -= 1;
        let mut acc = T::zero();
        for j in 0..beta.len() {
            if beta[j] == 0 {
                continue;
            }
            let s = self.cov[(i, j)];
            if s == T::zero() {
                continue;
            }
            let mut gamma = beta.clone();
            gamma[j] -= 1;
            let count = T::from_u32(beta[j]).unwrap();
            acc = acc + s * count * self.moment(&gamma);
        }
        self.memo.insert(alpha.to_vec(), acc);
        acc
    }
}
