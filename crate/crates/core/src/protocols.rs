//! The three transfer pipelines: deterministic sequential, deterministic
//! joint (parallel), and probabilistic post-selected.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase_space::{
    balanced_bs_gate, compose, conditional_map, joint_qnd_gate, qnd_gate, squeeze_gate,
    ConditionalAffineMap, Mode, QuadratureIndex, SymplecticMatrix,
};
use crate::scalar::{Real, Scalar};
use crate::wigner::{window_reduce_box, GaussLegendre, GaussPolyWigner, WindowSlices};

/// Sign of the all-optical coupling `κ3 = ±1/(κ1κ2)` in the sequential
/// pre-processing. Only `Positive` yields the ideal transfer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kappa3Sign {
    #[default]
    Positive,
    Negative,
}

/// Gains of the sequential scheme. The chain is
/// squeeze `L` by `g` → QND3 (`H = χ3 x_M p_L`) → QND1 (`H = χ1 x_A p_M`) →
/// QND2 (`H = χ2 x_L p_A`), followed by homodyne detection of `x'_M` and
/// `p'_L` and feed-forward `x_A += γx x'_M`, `p_A += γp p'_L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SequentialConfig<T> {
    pub kappa1: T,
    pub kappa2: T,
    pub kappa3: T,
    pub g: T,
    pub gamma_x: T,
    pub gamma_p: T,
}

impl<T: Scalar> SequentialConfig<T> {
    /// Ideal gains: `κ3 = 1/(κ1κ2)`, `g = κ2`, `γx = −1/κ1`, `γp = 1/κ2`.
    pub fn new(kappa1: T, kappa2: T) -> Result<Self> {
        Self::with_sign(kappa1, kappa2, Kappa3Sign::Positive)
    }

    pub fn with_sign(kappa1: T, kappa2: T, sign: Kappa3Sign) -> Result<Self> {
        nonzero(kappa1, "kappa1")?;
        nonzero(kappa2, "kappa2")?;
        let inv = T::one() / (kappa1 * kappa2);
        Ok(SequentialConfig {
            kappa1,
            kappa2,
            kappa3: match sign {
                Kappa3Sign::Positive => inv,
                Kappa3Sign::Negative => -inv,
            },
            g: kappa2,
            gamma_x: -T::one() / kappa1,
            gamma_p: T::one() / kappa2,
        })
    }

    /// Whether the gains satisfy the perfect-transfer conditions
    /// (`g = κ2`, `|κ3| = 1/(κ1κ2)`, `γx = −1/κ1`, `γp = 1/κ2`), up to `tol`.
    pub fn is_ideal(&self, tol: T) -> bool {
        let close = |a: T, b: T| (a - b).abs() <= tol * (T::one() + b.abs());
        close(self.g, self.kappa2)
            && close(self.kappa3.abs(), T::one() / (self.kappa1 * self.kappa2).abs())
            && close(self.gamma_x, -T::one() / self.kappa1)
            && close(self.gamma_p, T::one() / self.kappa2)
    }
}

fn nonzero<T: Scalar>(v: T, name: &'static str) -> Result<()> {
    if v == T::zero() {
        return Err(Error::ZeroGain(name));
    }
    if !v.is_finite_value() {
        return Err(Error::NonFinite(name));
    }
    Ok(())
}

/// Forward Heisenberg map of the sequential chain, before measurement.
pub fn sequential_chain<T: Scalar>(cfg: &SequentialConfig<T>) -> Result<SymplecticMatrix<T>> {
    nonzero(cfg.kappa1, "kappa1")?;
    nonzero(cfg.kappa2, "kappa2")?;
    Ok(compose(&[
        squeeze_gate(Mode::L, cfg.g)?,
        qnd_gate(Mode::M, Mode::L, cfg.kappa3)?,
        qnd_gate(Mode::A, Mode::M, cfg.kappa1)?,
        qnd_gate(Mode::L, Mode::A, cfg.kappa2)?,
    ]))
}

/// Output quadratures of the matter mode for the sequential scheme. With
/// ideal gains this is exactly `x_A_out = x_L`, `p_A_out = p_L`.
pub fn deterministic_sequential_map<T: Scalar>(
    cfg: &SequentialConfig<T>,
) -> Result<ConditionalAffineMap<T>> {
    let u = sequential_chain(cfg)?;
    conditional_map(
        &u,
        [QuadratureIndex::x(Mode::M), QuadratureIndex::p(Mode::L)],
        (cfg.gamma_x, cfg.gamma_p),
    )
}

/// Gains of the joint scheme. Pre-processing is a balanced beam splitter on
/// `(M, L)` followed by squeezing `L` with gain `g` and `M` with gain `1/g`;
/// then the joint coupling `H = χ(x_A p_L + p_A x_M)`, homodyne detection of
/// `x'_L` and `p'_M`, and feed-forward `x_A += γx x'_L`, `p_A += γp p'_M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointConfig<T> {
    pub kappa: T,
    /// `None` disables the optical pre-processing.
    pub g: Option<T>,
    pub gamma_x: T,
    pub gamma_p: T,
}

impl<T: Real> JointConfig<T> {
    /// Ideal gains: `g = √2/κ`, `γx = −1/κ`, `γp = 1/κ`.
    pub fn new(kappa: T) -> Result<Self> {
        nonzero(kappa, "kappa")?;
        Ok(JointConfig {
            kappa,
            g: Some(T::lit(2.0).sqrt() / kappa),
            gamma_x: -T::one() / kappa,
            gamma_p: T::one() / kappa,
        })
    }

    pub fn without_preprocessing(self) -> Self {
        JointConfig { g: None, ..self }
    }
}

pub fn joint_chain<T: Real>(cfg: &JointConfig<T>) -> Result<SymplecticMatrix<T>> {
    nonzero(cfg.kappa, "kappa")?;
    let mut gates = Vec::with_capacity(4);
    if let Some(g) = cfg.g {
        gates.push(balanced_bs_gate(Mode::M, Mode::L)?);
        gates.push(squeeze_gate(Mode::L, g)?);
        gates.push(squeeze_gate(Mode::M, T::one() / g)?);
    }
    gates.push(joint_qnd_gate(cfg.kappa)?);
    Ok(compose(&gates))
}

pub fn deterministic_joint_map<T: Real>(cfg: &JointConfig<T>) -> Result<ConditionalAffineMap<T>> {
    let u = joint_chain(cfg)?;
    conditional_map(
        &u,
        [QuadratureIndex::x(Mode::L), QuadratureIndex::p(Mode::M)],
        (cfg.gamma_x, cfg.gamma_p),
    )
}

/// Transmissions `(η, η′)` of the single-QND reference schemes:
/// `η = κ²/(1+κ²)`, `η′ = κ²/(1+κ²)²`.
pub fn single_qnd_reference<T: Scalar>(kappa: T) -> (T, T) {
    let k2 = kappa * kappa;
    let d = T::one() + k2;
    (k2 / d, k2 / (d * d))
}

/// Default Gauss–Legendre order per window axis.
pub const DEFAULT_QUAD_ORDER: usize = 32;
/// Upper limit for the automatic order doubling.
pub const MAX_QUAD_ORDER: usize = 512;
/// Relative change in PS below which an order is considered converged.
pub const ORDER_TOLERANCE: f64 = 1e-8;
/// Windows are clipped to this many standard deviations of the measured
/// quadratures' Gaussian factor.
const CLIP_SIGMAS: f64 = 12.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbabilisticConfig<T> {
    pub sequential: SequentialConfig<T>,
    pub v_m: T,
    pub v_a: T,
    /// Post-selection half-width.
    pub q: T,
    pub quad_order: usize,
}

impl<T: Real> ProbabilisticConfig<T> {
    /// Ideal sequential gains with `κ1 = κ2 = kappa`.
    pub fn new(kappa: T, v_m: T, v_a: T, q: T) -> Result<Self> {
        Ok(ProbabilisticConfig {
            sequential: SequentialConfig::new(kappa, kappa)?,
            v_m,
            v_a,
            q,
            quad_order: DEFAULT_QUAD_ORDER,
        })
    }

    pub fn with_q(self, q: T) -> Self {
        ProbabilisticConfig { q, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q > T::zero()) || !self.q.is_finite() {
            return Err(Error::InvalidWindow(format!("Q must be positive, got {:?}", self.q)));
        }
        for (v, name) in [(self.v_m, "v_m"), (self.v_a, "v_a")] {
            if !v.is_finite() {
                return Err(Error::NonFinite(name));
            }
            if v < T::lit(0.5) {
                return Err(Error::SubVacuum(v.to_f64_lossy()));
            }
        }
        if self.quad_order < 2 {
            return Err(Error::InvalidWindow("quadrature order must be >= 2".into()));
        }
        Ok(())
    }
}

// Conjugates of the measured x'_M and p'_L, integrated over the whole line.
const TRACED: [usize; 2] = [QuadratureIndex::x(Mode::L).index(), QuadratureIndex::p(Mode::M).index()];
const MATTER: [usize; 2] = [QuadratureIndex::x(Mode::A).index(), QuadratureIndex::p(Mode::A).index()];

/// The joint output Wigner function `W_in(S⁻¹ ξ)` of the sequential chain,
/// with `W_in = W_L ⊗ thermal(V_M) ⊗ thermal(V_A)`.
pub fn joint_output<T: Real>(
    input_l: &GaussPolyWigner<T>,
    cfg: &ProbabilisticConfig<T>,
) -> Result<GaussPolyWigner<T>> {
    cfg.validate()?;
    if input_l.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: input_l.dim(),
        });
    }
    let w_m = GaussPolyWigner::thermal(cfg.v_m)?;
    let w_a = GaussPolyWigner::thermal(cfg.v_a)?;
    let w_in = GaussPolyWigner::product_embed(&[
        (input_l, &[0, 1]),
        (&w_m, &[2, 3]),
        (&w_a, &[4, 5]),
    ])?;
    let pullback = sequential_chain(&cfg.sequential)?.inverse();
    w_in.substitute_linear(pullback.matrix())
}

/// Joint density of the two measured quadratures `(x'_M, p'_L)`.
fn measured_density<T: Real>(joint: &GaussPolyWigner<T>) -> Result<GaussPolyWigner<T>> {
    let mut rest: Vec<usize> = TRACED.iter().chain(&MATTER).copied().collect();
    rest.sort_unstable();
    joint.marginalize_full(&rest)
}

/// Window `[−Q, Q]²` clipped to where the measured density has support.
fn clipped_window<T: Real>(density: &GaussPolyWigner<T>, q: T) -> Result<Option<Vec<(T, T)>>> {
    let (mean, cov) = density.gaussian_moments()?;
    let k = T::lit(CLIP_SIGMAS);
    let mut bounds = Vec::with_capacity(2);
    for i in 0..2 {
        let sd = cov[(i, i)].sqrt();
        let lo = (-q).max(mean[i] - k * sd);
        let hi = q.min(mean[i] + k * sd);
        if !(hi > lo) {
            return Ok(None);
        }
        bounds.push((lo, hi));
    }
    Ok(Some(bounds))
}

fn windowed_mass<T: Real>(density: &GaussPolyWigner<T>, bounds: &[(T, T)], order: usize) -> T {
    let rule = GaussLegendre::<T>::new(order);
    let xs = rule.on_interval(bounds[0].0, bounds[0].1);
    let ps = rule.on_interval(bounds[1].0, bounds[1].1);
    let mut acc = T::zero();
    for &(x, wx) in &xs {
        for &(p, wp) in &ps {
            acc = acc + wx * wp * density.evaluate(&[x, p]);
        }
    }
    acc
}

// ORDER_TOLERANCE, floored at what the scalar type can resolve.
fn order_tolerance<T: Real>() -> T {
    T::lit(ORDER_TOLERANCE).max(T::epsilon() * T::lit(100.0))
}

/// Smallest order `n ≥ start` (doubling) whose PS differs from order `2n`
/// by less than [`ORDER_TOLERANCE`] relative, together with that PS.
fn converged_order<T: Real>(
    density: &GaussPolyWigner<T>,
    bounds: &[(T, T)],
    start: usize,
) -> (usize, T) {
    let mut n = start;
    let mut ps_n = windowed_mass(density, bounds, n);
    while n < MAX_QUAD_ORDER {
        let ps_2n = windowed_mass(density, bounds, 2 * n);
        let scale = ps_2n.abs().max(T::min_positive_value());
        if (ps_2n - ps_n).abs() <= order_tolerance::<T>() * scale {
            return (n, ps_n);
        }
        n *= 2;
        ps_n = ps_2n;
    }
    (n, ps_n)
}

/// Success probability of post-selecting both measured quadratures inside
/// `[−Q, Q]`.
pub fn success_probability<T: Real>(
    input_l: &GaussPolyWigner<T>,
    cfg: &ProbabilisticConfig<T>,
) -> Result<T> {
    let joint = joint_output(input_l, cfg)?;
    let density = measured_density(&joint)?;
    let Some(bounds) = clipped_window(&density, cfg.q)? else {
        return Ok(T::zero());
    };
    Ok(converged_order(&density, &bounds, cfg.quad_order).1)
}

/// Post-selected state of the matter mode.
#[derive(Debug, Clone)]
pub struct ProbabilisticResult<T> {
    slices: WindowSlices<T>,
    ps: T,
    q: T,
}

impl<T: Real> ProbabilisticResult<T> {
    /// Success probability (normalization of the windowed integral).
    pub fn ps(&self) -> T {
        self.ps
    }

    pub fn q(&self) -> T {
        self.q
    }

    /// Quadrature order actually used per window axis.
    pub fn order(&self) -> usize {
        self.slices.order()
    }

    /// Unnormalized windowed integral, as slices over `(x_A, p_A)`.
    pub fn slices(&self) -> &WindowSlices<T> {
        &self.slices
    }

    /// Normalized output Wigner function `W_out(x_A, p_A)`.
    pub fn evaluate(&self, x: T, p: T) -> T {
        self.slices.evaluate(&[x, p]) / self.ps
    }

    /// `∫ W_out`, which should be 1.
    pub fn normalized_integral(&self) -> Result<T> {
        Ok(self.slices.total_integral()? / self.ps)
    }
}

/// Post-selected output of the sequential scheme without feed-forward.
///
/// The conjugate quadratures `x'_L` and `p'_M` are integrated analytically
/// over the real line; the measured `x'_M` and `p'_L` are integrated over
/// `[−Q, Q]` by Gauss–Legendre. The order starts at `cfg.quad_order` and is
/// doubled until PS changes by less than [`ORDER_TOLERANCE`] relative.
pub fn probabilistic_output<T: Real>(
    input_l: &GaussPolyWigner<T>,
    cfg: &ProbabilisticConfig<T>,
) -> Result<ProbabilisticResult<T>> {
    let norm = input_l.total_integral()?;
    if (norm - T::one()).abs() > order_tolerance::<T>() {
        return Err(Error::InvalidParameter(format!(
            "input state must be normalized, integral is {norm:?}"
        )));
    }
    let joint = joint_output(input_l, cfg)?;
    let density = measured_density(&joint)?;
    let Some(bounds) = clipped_window(&density, cfg.q)? else {
        return Err(Error::Underflow);
    };
    let (order, _) = converged_order(&density, &bounds, cfg.quad_order);

    // remaining after tracing: (x_M, p_L, x_A, p_A) → measured at 0, 1
    let reduced = joint.marginalize_full(&TRACED)?;
    let slices = window_reduce_box(&reduced, &[0, 1], &bounds, order)?;
    let ps = slices.total_integral()?;
    if !(ps.abs() >= T::lit(1e-300)) {
        return Err(Error::Underflow);
    }
    Ok(ProbabilisticResult {
        slices,
        ps,
        q: cfg.q,
    })
}
