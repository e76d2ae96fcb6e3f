//! Linear phase-space maps on the three-mode quadrature vector.
//!
//! Quadratures are always ordered `(x_L, p_L, x_M, p_M, x_A, p_A)`; see
//! [`ORDERING`]. `L` and `M` are light modes, `A` is the matter mode.
//!
//! All matrices act in the Heisenberg picture: a gate `S` maps the input
//! quadrature vector `ξ` to `S ξ`, and gates applied one after another compose
//! as `S_n ⋯ S_2 S_1`. The symplectic form is `Ω = ⊕ [[0, 1], [-1, 0]]`, one
//! block per mode.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Real, Scalar};

/// Number of phase-space variables.
pub const DIM: usize = 6;

/// Row/column layout shared by every matrix and serialized artifact.
pub const ORDERING: [&str; DIM] = ["x_L", "p_L", "x_M", "p_M", "x_A", "p_A"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    L,
    M,
    A,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::L, Mode::M, Mode::A];

    /// Index of this mode's `x` quadrature.
    pub const fn offset(self) -> usize {
        match self {
            Mode::L => 0,
            Mode::M => 2,
            Mode::A => 4,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            Mode::L => "L",
            Mode::M => "M",
            Mode::A => "A",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quadrature {
    X,
    P,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadratureIndex {
    pub mode: Mode,
    pub quadrature: Quadrature,
}

impl QuadratureIndex {
    pub const fn x(mode: Mode) -> Self {
        QuadratureIndex {
            mode,
            quadrature: Quadrature::X,
        }
    }

    pub const fn p(mode: Mode) -> Self {
        QuadratureIndex {
            mode,
            quadrature: Quadrature::P,
        }
    }

    pub const fn index(self) -> usize {
        self.mode.offset()
            + match self.quadrature {
                Quadrature::X => 0,
                Quadrature::P => 1,
            }
    }

    pub fn from_index(i: usize) -> Option<Self> {
        let mode = *Mode::ALL.get(i / 2)?;
        Some(if i % 2 == 0 { Self::x(mode) } else { Self::p(mode) })
    }

    pub fn name(self) -> &'static str {
        ORDERING[self.index()]
    }
}

/// The symplectic form `Ω` on `dim / 2` modes.
pub fn omega<T: Scalar>(dim: usize) -> Matrix<T> {
    let mut w = Matrix::zeros(dim, dim);
    for k in 0..dim / 2 {
        w[(2 * k, 2 * k + 1)] = T::one();
        w[(2 * k + 1, 2 * k)] = -T::one();
    }
    w
}

/// A 6x6 linear phase-space map.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix<T> {
    m: Matrix<T>,
}

impl<T: Scalar> SymplecticMatrix<T> {
    pub fn identity() -> Self {
        SymplecticMatrix {
            m: Matrix::identity(DIM),
        }
    }

    /// Wraps a 6x6 matrix. The symplectic condition is not enforced here; use
    /// [`SymplecticMatrix::symplectic_residual`] to check it.
    pub fn from_matrix(m: Matrix<T>) -> Result<Self> {
        if m.rows() != DIM || m.cols() != DIM {
            return Err(Error::DimensionMismatch {
                expected: DIM * DIM,
                found: m.rows() * m.cols(),
            });
        }
        Ok(SymplecticMatrix { m })
    }

    pub fn from_row_major(entries: &[T]) -> Result<Self> {
        Self::from_matrix(Matrix::from_row_major(DIM, DIM, entries.to_vec())?)
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.m
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.m
    }

    /// Coefficient of input quadrature `col` in output quadrature `row`.
    pub fn coefficient(&self, row: QuadratureIndex, col: QuadratureIndex) -> T {
        self.m[(row.index(), col.index())]
    }

    /// The map obtained by applying `self` first and `next` afterwards.
    pub fn then(&self, next: &SymplecticMatrix<T>) -> Self {
        SymplecticMatrix {
            m: next.m.matmul(&self.m),
        }
    }

    /// `max |S Ω Sᵀ − Ω|`
    pub fn symplectic_residual(&self) -> T {
        let w = omega::<T>(DIM);
        self.m
            .matmul(&w)
            .matmul(&self.m.transpose())
            .max_abs_diff(&w)
    }

    pub fn is_symplectic(&self, tol: T) -> bool {
        self.symplectic_residual() <= tol
    }

    /// Symplectic inverse `−Ω Sᵀ Ω`. Exact (no division) and valid whenever
    /// `self` is symplectic.
    pub fn inverse(&self) -> Self {
        let w = omega::<T>(DIM);
        SymplecticMatrix {
            m: w.matmul(&self.m.transpose()).matmul(&w).scale(-T::one()),
        }
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            ordering: ORDERING.iter().map(|s| s.to_string()).collect(),
            entries: self.m.as_slice().iter().map(|v| v.to_f64_lossy()).collect(),
        }
    }

    pub fn from_json(json: &MatrixJson) -> Result<Self> {
        if json.ordering.iter().map(String::as_str).ne(ORDERING.iter().copied()) {
            return Err(Error::InvalidAssignment(format!(
                "matrix ordering {:?} differs from {:?}",
                json.ordering, ORDERING
            )));
        }
        let entries: Vec<T> = json.entries.iter().map(|&v| T::lit(v)).collect();
        Self::from_row_major(&entries)
    }
}

/// Serialized form of a 6x6 matrix: 36 row-major entries plus the quadrature
/// ordering they refer to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub ordering: Vec<String>,
    pub entries: Vec<f64>,
}

fn check_finite<T: Scalar>(v: T, name: &'static str) -> Result<()> {
    if v.is_finite_value() {
        Ok(())
    } else {
        Err(Error::NonFinite(name))
    }
}

/// QND coupling generated by `H = χ x_ctl p_tgt` with gain `κ = χT`:
///
/// ```text
/// x_tgt ← x_tgt + κ x_ctl
/// p_ctl ← p_ctl − κ p_tgt
/// ```
///
/// `x_ctl` and `p_tgt` are left untouched.
pub fn qnd_gate<T: Scalar>(ctl: Mode, tgt: Mode, kappa: T) -> Result<SymplecticMatrix<T>> {
    if ctl == tgt {
        return Err(Error::SameMode(ctl.name()));
    }
    check_finite(kappa, "kappa")?;
    let mut s = SymplecticMatrix::identity();
    s.m[(QuadratureIndex::x(tgt).index(), QuadratureIndex::x(ctl).index())] = kappa;
    s.m[(QuadratureIndex::p(ctl).index(), QuadratureIndex::p(tgt).index())] = -kappa;
    Ok(s)
}

/// Simultaneous coupling `H = χ (x_A p_L + p_A x_M)` with gain `κ`:
///
/// ```text
/// x_A ← x_A + κ x_M
/// p_A ← p_A − κ p_L
/// x_L ← x_L + κ x_A + κ²/2 x_M
/// p_M ← p_M − κ p_A + κ²/2 p_L
/// ```
pub fn joint_qnd_gate<T: Scalar>(kappa: T) -> Result<SymplecticMatrix<T>> {
    check_finite(kappa, "kappa")?;
    use QuadratureIndex as Q;
    let half_sq = kappa * kappa / (T::one() + T::one());
    let mut s = SymplecticMatrix::identity();
    s.m[(Q::x(Mode::A).index(), Q::x(Mode::M).index())] = kappa;
    s.m[(Q::p(Mode::A).index(), Q::p(Mode::L).index())] = -kappa;
    s.m[(Q::x(Mode::L).index(), Q::x(Mode::A).index())] = kappa;
    s.m[(Q::x(Mode::L).index(), Q::x(Mode::M).index())] = half_sq;
    s.m[(Q::p(Mode::M).index(), Q::p(Mode::A).index())] = -kappa;
    s.m[(Q::p(Mode::M).index(), Q::p(Mode::L).index())] = half_sq;
    Ok(s)
}

/// Squeezer with gain `g`: `x → x / g`, `p → g p` on `mode`.
pub fn squeeze_gate<T: Scalar>(mode: Mode, g: T) -> Result<SymplecticMatrix<T>> {
    if g == T::zero() {
        return Err(Error::ZeroGain("g"));
    }
    check_finite(g, "g")?;
    let mut s = SymplecticMatrix::identity();
    let x = QuadratureIndex::x(mode).index();
    let p = QuadratureIndex::p(mode).index();
    s.m[(x, x)] = T::one() / g;
    s.m[(p, p)] = g;
    Ok(s)
}

/// Phase-space rotation by π on one mode: `(x, p) → (−x, −p)`.
pub fn phase_flip_gate<T: Scalar>(mode: Mode) -> SymplecticMatrix<T> {
    let mut s = SymplecticMatrix::identity();
    let x = QuadratureIndex::x(mode).index();
    s.m[(x, x)] = -T::one();
    s.m[(x + 1, x + 1)] = -T::one();
    s
}

/// Balanced beam splitter in the reflection convention
///
/// ```text
/// q_1 ← (q_1 + q_2) / √2
/// q_2 ← (q_1 − q_2) / √2
/// ```
///
/// for `q ∈ {x, p}`. The 2x2 mixing matrix is orthogonal and its own inverse,
/// so applying the gate twice gives the identity.
pub fn balanced_bs_gate<T: Real>(mode1: Mode, mode2: Mode) -> Result<SymplecticMatrix<T>> {
    if mode1 == mode2 {
        return Err(Error::SameMode(mode1.name()));
    }
    let r = T::one() / T::lit(2.0).sqrt();
    let mut s = SymplecticMatrix::identity();
    for k in 0..2 {
        let i = mode1.offset() + k;
        let j = mode2.offset() + k;
        s.m[(i, i)] = r;
        s.m[(i, j)] = r;
        s.m[(j, i)] = r;
        s.m[(j, j)] = -r;
    }
    Ok(s)
}

/// Product of `gates` in temporal order: the first gate acts first.
pub fn compose<T: Scalar>(gates: &[SymplecticMatrix<T>]) -> SymplecticMatrix<T> {
    gates
        .iter()
        .fold(SymplecticMatrix::identity(), |acc, g| acc.then(g))
}

/// Heisenberg-picture output quadratures of the matter mode after homodyne
/// measurement and feed-forward displacement:
///
/// ```text
/// x_A_out = x'_A + γx · m₁
/// p_A_out = p'_A + γp · m₂
/// ```
///
/// where `m₁, m₂` are the measured output quadratures. Rows are linear
/// combinations of the six *input* quadratures.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalAffineMap<T> {
    rows: [[T; DIM]; 2],
}

impl<T: Scalar> ConditionalAffineMap<T> {
    pub fn from_rows(x_row: [T; DIM], p_row: [T; DIM]) -> Self {
        ConditionalAffineMap {
            rows: [x_row, p_row],
        }
    }

    pub fn x_row(&self) -> &[T; DIM] {
        &self.rows[0]
    }

    pub fn p_row(&self) -> &[T; DIM] {
        &self.rows[1]
    }

    pub fn coefficient(&self, output: Quadrature, input: QuadratureIndex) -> T {
        let r = match output {
            Quadrature::X => 0,
            Quadrature::P => 1,
        };
        self.rows[r][input.index()]
    }

    /// The 2x2 matrix `M Ω Mᵀ`.
    pub fn commutator(&self) -> [[T; 2]; 2] {
        let w = omega::<T>(DIM);
        let mut out = [[T::zero(); 2]; 2];
        for (a, ra) in self.rows.iter().enumerate() {
            for (b, rb) in self.rows.iter().enumerate() {
                let mut acc = T::zero();
                for i in 0..DIM {
                    for j in 0..DIM {
                        acc = acc + ra[i] * w[(i, j)] * rb[j];
                    }
                }
                out[a][b] = acc;
            }
        }
        out
    }

    /// `max |M Ω Mᵀ − [[0, 1], [−1, 0]]|`
    pub fn commutator_residual(&self) -> T {
        let c = self.commutator();
        let target = [[T::zero(), T::one()], [-T::one(), T::zero()]];
        let mut worst = T::zero();
        for a in 0..2 {
            for b in 0..2 {
                let d = (c[a][b] - target[a][b]).abs();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    /// Largest deviation from the ideal transfer `x_A_out = x_src`,
    /// `p_A_out = p_src`.
    pub fn transfer_residual(&self, src: Mode) -> T {
        let mut worst = T::zero();
        for (r, q) in [(0, QuadratureIndex::x(src)), (1, QuadratureIndex::p(src))] {
            for i in 0..DIM {
                let ideal = if i == q.index() { T::one() } else { T::zero() };
                let d = (self.rows[r][i] - ideal).abs();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    /// Largest coefficient on the matter-mode inputs `x_A`, `p_A`.
    pub fn matter_residual(&self) -> T {
        let a = Mode::A.offset();
        let mut worst = T::zero();
        for row in &self.rows {
            for v in &row[a..a + 2] {
                if v.abs() > worst {
                    worst = v.abs();
                }
            }
        }
        worst
    }
}

/// Builds the feed-forward output map from the gate chain `u`.
///
/// `measured[0]` drives the `x_A` displacement with gain `gains.0`, and
/// `measured[1]` drives `p_A` with gain `gains.1`. The two measured
/// quadratures must sit on the light modes, one on `L` and one on `M`.
pub fn conditional_map<T: Scalar>(
    u: &SymplecticMatrix<T>,
    measured: [QuadratureIndex; 2],
    gains: (T, T),
) -> Result<ConditionalAffineMap<T>> {
    let modes = [measured[0].mode, measured[1].mode];
    let valid = matches!(modes, [Mode::L, Mode::M] | [Mode::M, Mode::L]);
    if !valid {
        return Err(Error::InvalidMeasurement);
    }
    let row = |q: QuadratureIndex| u.m.row(q.index()).to_vec();
    let xa = row(QuadratureIndex::x(Mode::A));
    let pa = row(QuadratureIndex::p(Mode::A));
    let m0 = row(measured[0]);
    let m1 = row(measured[1]);
    let mut x_row = [T::zero(); DIM];
    let mut p_row = [T::zero(); DIM];
    for i in 0..DIM {
        x_row[i] = xa[i] + gains.0 * m0[i];
        p_row[i] = pa[i] + gains.1 * m1[i];
    }
    Ok(ConditionalAffineMap::from_rows(x_row, p_row))
}

/// Closed-form variable-change matrix `U` of the sequential chain, as used
/// when writing the post-selected output as `W_in(U ξ)`.
///
/// It coincides with `R_L(π) · S⁻¹`, where `S` is the forward chain built
/// by [`crate::protocols::sequential_chain`] with the positive pre-processing
/// gain `κ3 = +1/(κ1κ2)` and `R_L(π)` is [`phase_flip_gate`] on mode `L`.
/// So `U` is a pullback (output → input variables) up to a π
/// rotation of the light mode `L`, which is invisible to the post-selected
/// output for inputs with `W_L(−x, −p) = W_L(x, p)`.
pub fn reference_matrix_u<T: Scalar>(kappa1: T, kappa2: T) -> Result<SymplecticMatrix<T>> {
    if kappa1 == T::zero() {
        return Err(Error::ZeroGain("kappa1"));
    }
    if kappa2 == T::zero() {
        return Err(Error::ZeroGain("kappa2"));
    }
    check_finite(kappa1, "kappa1")?;
    check_finite(kappa2, "kappa2")?;
    let (o, z) = (T::one(), T::zero());
    let (k1, k2) = (kappa1, kappa2);
    #[rustfmt::skip]
    let entries = [
        z,       z,           o / k1,        z, -o,     z,
        z,       -o / k2,     z,             z, z,      -o,
        k1 * k2, z,           o,             z, -k1,    z,
        z,       o / (k1 * k2), z,           o, z,      o / k1,
        -k2,     z,           z,             z, o,      z,
        z,       z,           z,             k1, z,     o,
    ];
    SymplecticMatrix::from_row_major(&entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    type Q = QuadratureIndex;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn ordering_is_a_bijection() {
        for i in 0..DIM {
            let q = Q::from_index(i).unwrap();
            assert_eq!(q.index(), i);
            assert_eq!(q.name(), ORDERING[i]);
        }
        assert!(Q::from_index(6).is_none());
    }

    #[test]
    fn zero_coupling_is_identity() {
        assert_eq!(
            qnd_gate(Mode::A, Mode::L, 0.0).unwrap(),
            SymplecticMatrix::identity()
        );
        assert_eq!(joint_qnd_gate(0.0).unwrap(), SymplecticMatrix::identity());
        assert_eq!(
            squeeze_gate(Mode::L, 1.0).unwrap(),
            SymplecticMatrix::identity()
        );
    }

    #[test]
    fn qnd_acts_on_the_right_quadratures() {
        let k = r(3, 10);
        let s = qnd_gate(Mode::A, Mode::L, k).unwrap();
        let one = Rational64::from_integer(1);
        assert_eq!(s.coefficient(Q::x(Mode::L), Q::x(Mode::L)), one);
        assert_eq!(s.coefficient(Q::x(Mode::L), Q::x(Mode::A)), k);
        assert_eq!(s.coefficient(Q::p(Mode::A), Q::p(Mode::A)), one);
        assert_eq!(s.coefficient(Q::p(Mode::A), Q::p(Mode::L)), -k);
        // x_A and p_L untouched
        assert_eq!(s.matrix().row(Q::x(Mode::A).index()), &[0, 0, 0, 0, 1, 0].map(Rational64::from_integer));
        assert_eq!(s.matrix().row(Q::p(Mode::L).index()), &[0, 1, 0, 0, 0, 0].map(Rational64::from_integer));
        assert_eq!(s.symplectic_residual(), Rational64::from_integer(0));
    }

    #[test]
    fn qnd_rejects_same_mode() {
        assert_eq!(qnd_gate(Mode::M, Mode::M, 0.5), Err(Error::SameMode("M")));
        assert!(matches!(qnd_gate(Mode::L, Mode::A, f64::NAN), Err(Error::NonFinite(_))));
    }

    #[test]
    fn two_sequential_qnds_mix_p_l() {
        let (k1, k2) = (r(1, 3), r(2, 7));
        let s = compose(&[
            qnd_gate(Mode::A, Mode::M, k1).unwrap(),
            qnd_gate(Mode::L, Mode::A, k2).unwrap(),
        ]);
        let pl = Q::p(Mode::L);
        assert_eq!(s.coefficient(pl, Q::p(Mode::L)), r(1, 1));
        assert_eq!(s.coefficient(pl, Q::p(Mode::A)), -k2);
        assert_eq!(s.coefficient(pl, Q::p(Mode::M)), k1 * k2);
        assert_eq!(s.coefficient(Q::x(Mode::M), Q::x(Mode::A)), k1);
        assert_eq!(s.coefficient(Q::x(Mode::A), Q::x(Mode::L)), k2);
        assert_eq!(s.coefficient(Q::p(Mode::A), Q::p(Mode::M)), -k1);
    }

    #[test]
    fn joint_gate_rows() {
        let k = r(7, 10);
        let s = joint_qnd_gate(k).unwrap();
        assert_eq!(s.coefficient(Q::x(Mode::L), Q::x(Mode::M)), k * k / 2);
        assert_eq!(s.coefficient(Q::p(Mode::M), Q::p(Mode::L)), k * k / 2);
        assert_eq!(s.coefficient(Q::x(Mode::A), Q::x(Mode::M)), k);
        assert_eq!(s.symplectic_residual(), r(0, 1));
        let f = joint_qnd_gate(0.7f64).unwrap();
        assert!(f.symplectic_residual() < 1e-12);
    }

    #[test]
    fn squeeze_pair_inverts() {
        let s = squeeze_gate(Mode::L, 0.3f64).unwrap();
        assert!((s.coefficient(Q::x(Mode::L), Q::x(Mode::L)) - 1.0 / 0.3).abs() < 1e-15);
        assert!((s.coefficient(Q::p(Mode::L), Q::p(Mode::L)) - 0.3).abs() < 1e-15);
        let g = r(3, 10);
        let pair = compose(&[
            squeeze_gate(Mode::M, g).unwrap(),
            squeeze_gate(Mode::M, r(1, 1) / g).unwrap(),
        ]);
        assert_eq!(pair, SymplecticMatrix::identity());
        assert_eq!(squeeze_gate(Mode::A, 0.0), Err(Error::ZeroGain("g")));
    }

    #[test]
    fn beam_splitter_convention() {
        let bs = balanced_bs_gate::<f64>(Mode::M, Mode::L).unwrap();
        assert!(bs.symplectic_residual() < 1e-15);
        let twice = compose(&[bs.clone(), bs]);
        assert!(twice.matrix().max_abs_diff(SymplecticMatrix::identity().matrix()) < 1e-15);
        assert!(balanced_bs_gate::<f64>(Mode::A, Mode::A).is_err());
    }

    #[test]
    fn beam_splitter_and_squeezers_give_joint_preprocessing() {
        let kappa: f64 = 0.4;
        let g = 2f64.sqrt() / kappa;
        let pre = compose(&[
            balanced_bs_gate(Mode::M, Mode::L).unwrap(),
            squeeze_gate(Mode::L, g).unwrap(),
            squeeze_gate(Mode::M, 1.0 / g).unwrap(),
        ]);
        let c = |o, i| pre.coefficient(o, i);
        let close = |a: f64, b: f64| (a - b).abs() < 1e-14;
        assert!(close(c(Q::x(Mode::M), Q::x(Mode::M)), 1.0 / kappa));
        assert!(close(c(Q::x(Mode::M), Q::x(Mode::L)), 1.0 / kappa));
        assert!(close(c(Q::p(Mode::M), Q::p(Mode::M)), kappa / 2.0));
        assert!(close(c(Q::p(Mode::M), Q::p(Mode::L)), kappa / 2.0));
        assert!(close(c(Q::x(Mode::L), Q::x(Mode::M)), kappa / 2.0));
        assert!(close(c(Q::x(Mode::L), Q::x(Mode::L)), -kappa / 2.0));
        assert!(close(c(Q::p(Mode::L), Q::p(Mode::M)), 1.0 / kappa));
        assert!(close(c(Q::p(Mode::L), Q::p(Mode::L)), -1.0 / kappa));
    }

    #[test]
    fn compose_edge_cases() {
        assert_eq!(compose::<f64>(&[]), SymplecticMatrix::identity());
        let s = qnd_gate(Mode::A, Mode::M, 0.25).unwrap();
        assert_eq!(compose(&[s.clone()]), s);
    }

    #[test]
    fn inverse_is_exact_for_rationals() {
        let s = compose(&[
            squeeze_gate(Mode::L, r(2, 5)).unwrap(),
            qnd_gate(Mode::M, Mode::L, r(5, 3)).unwrap(),
            joint_qnd_gate(r(1, 2)).unwrap(),
        ]);
        assert_eq!(s.then(&s.inverse()), SymplecticMatrix::identity());
    }

    #[test]
    fn feed_forward_without_gains_keeps_matter_rows() {
        let u = qnd_gate(Mode::A, Mode::M, 0.5).unwrap();
        let m = conditional_map(&u, [Q::x(Mode::M), Q::p(Mode::L)], (0.0, 0.0)).unwrap();
        assert_eq!(m.x_row().as_slice(), u.matrix().row(4));
        assert_eq!(m.p_row().as_slice(), u.matrix().row(5));
    }

    #[test]
    fn measurement_on_matter_is_rejected() {
        let u = SymplecticMatrix::<f64>::identity();
        assert_eq!(
            conditional_map(&u, [Q::x(Mode::A), Q::p(Mode::L)], (1.0, 1.0)),
            Err(Error::InvalidMeasurement)
        );
        assert_eq!(
            conditional_map(&u, [Q::x(Mode::L), Q::p(Mode::L)], (1.0, 1.0)),
            Err(Error::InvalidMeasurement)
        );
    }

    #[test]
    fn reference_matrix_entries() {
        let (k1, k2) = (r(1, 2), r(1, 3));
        let u = reference_matrix_u(k1, k2).unwrap();
        // 1-based (row, col) = (5, 1) and (1, 3)
        assert_eq!(u.matrix()[(4, 0)], -k2);
        assert_eq!(u.matrix()[(0, 2)], r(1, 1) / k1);
        assert_eq!(u.symplectic_residual(), r(0, 1));
        assert!(reference_matrix_u(0.0, 0.5).is_err());
    }

    #[test]
    fn matrix_json_round_trip() {
        let s = joint_qnd_gate(0.5f64).unwrap();
        let json = s.to_json();
        assert_eq!(json.entries.len(), 36);
        assert_eq!(json.ordering, ORDERING);
        let text = serde_json::to_string(&json).unwrap();
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        assert_eq!(SymplecticMatrix::<f64>::from_json(&back).unwrap(), s);
    }
}
