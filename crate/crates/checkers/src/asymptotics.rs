//! Special functions and the model's limit predictions: the continuum
//! (Bessel) limit of the wave function, chirality-reversal limits with their
//! even/odd-time splitting, and the uniform Airy approximation together with
//! the phase derivatives that drive it.
//!
//! `J0`, `J1` and `Ai` are implemented in-repo from their defining series so
//! that every oracle in the test suite stays independent of an external
//! special-function library:
//!
//! * Bessel: power series for small argument; Miller's backward recurrence
//!   with the `J0 + 2ΣJ_{2k} = 1` normalization beyond (DLMF 10.74(iv)).
//! * Airy: Maclaurin series around 0; for large |λ| the standard asymptotic
//!   expansions in `ζ = (2/3)|λ|^(3/2)` (DLMF 9.7).

use thiserror::Error;

use crate::lattice::{LatticeIndex, LatticeParams};
use crate::numeric::CompensatedSum;

#[derive(Debug, Error, PartialEq)]
pub enum AsymptoticsError {
    #[error("argument out of range: {what}")]
    OutOfRange { what: String },
    #[error("outside the asymptotic support: {what}")]
    OutOfSupport { what: String },
}

fn out_of_range(what: impl Into<String>) -> AsymptoticsError {
    AsymptoticsError::OutOfRange { what: what.into() }
}

fn out_of_support(what: impl Into<String>) -> AsymptoticsError {
    AsymptoticsError::OutOfSupport { what: what.into() }
}

// ---------------------------------------------------------------------------
// Bessel J0, J1

const BESSEL_SERIES_CUTOFF: f64 = 9.0;

fn bessel_series(z: f64) -> (f64, f64) {
    let q = -z * z / 4.0;
    let mut j0 = CompensatedSum::default();
    let mut j1 = CompensatedSum::default();
    let mut t0 = 1.0;
    let mut t1 = 1.0;
    j0.add(t0);
    j1.add(t1);
    for j in 1..200 {
        t0 *= q / ((j * j) as f64);
        t1 *= q / ((j * (j + 1)) as f64);
        j0.add(t0);
        j1.add(t1);
        if t0.abs() < 1e-20 && t1.abs() < 1e-20 {
            break;
        }
    }
    (j0.total(), z / 2.0 * j1.total())
}

/// Backward (Miller) recurrence from a start order well above the turning
/// point, normalized with `J0(z) + 2 Σ_{k>=1} J_{2k}(z) = 1`.
fn bessel_miller(z: f64) -> (f64, f64) {
    let m = {
        let m = (z + 12.0 * z.cbrt() + 30.0).ceil() as i64;
        m + (m & 1) // even start order
    };
    let mut f_above = 0.0_f64;
    let mut f = 1e-30_f64;
    let mut norm = 2.0 * f;
    let mut j1 = 0.0_f64;
    for k in (1..=m).rev() {
        let f_below = (2 * k) as f64 / z * f - f_above;
        f_above = f;
        f = f_below;
        let order = k - 1;
        if order == 1 {
            j1 = f;
        }
        if order >= 2 && order % 2 == 0 {
            norm += 2.0 * f;
        }
        if f.abs() > 1e250 {
            f *= 1e-250;
            f_above *= 1e-250;
            norm *= 1e-250;
            j1 *= 1e-250;
        }
    }
    norm += f; // f now holds the order-0 member
    (f / norm, j1 / norm)
}

fn bessel_j01(z: f64) -> (f64, f64) {
    if z == 0.0 {
        return (1.0, 0.0);
    }
    let az = z.abs();
    let (j0, j1) = if az <= BESSEL_SERIES_CUTOFF { bessel_series(az) } else { bessel_miller(az) };
    if z < 0.0 {
        (j0, -j1)
    } else {
        (j0, j1)
    }
}

/// Bessel function of the first kind, order 0.
pub fn bessel_j0(z: f64) -> f64 {
    bessel_j01(z).0
}

/// Bessel function of the first kind, order 1.
pub fn bessel_j1(z: f64) -> f64 {
    bessel_j01(z).1
}

// ---------------------------------------------------------------------------
// Airy Ai

/// `Ai(0)` and `Ai'(0)`.
const AI_0: f64 = 0.355_028_053_887_817_2;
const AIP_0: f64 = -0.258_819_403_792_806_8;

const AIRY_SERIES_CUTOFF: f64 = 7.0;
/// Blend band between the Maclaurin and oscillatory branches; a hard switch
/// would leave a ~1e-12 seam that finite-difference probes amplify by 1/h².
const AIRY_BLEND_LO: f64 = -7.6;
const AIRY_BLEND_HI: f64 = -6.6;
/// Upper end of the supported domain; the oscillatory region is unbounded
/// below since the large-|λ| expansion only improves there.
pub const AIRY_MAX_LAMBDA: f64 = 10.0;

fn airy_maclaurin(x: f64) -> f64 {
    let x3 = x * x * x;
    let mut f = CompensatedSum::default();
    let mut g = CompensatedSum::default();
    let mut tf = 1.0;
    let mut tg = x;
    f.add(tf);
    g.add(tg);
    for k in 0..120 {
        let k3 = 3 * k;
        tf *= x3 / ((k3 + 2) * (k3 + 3)) as f64;
        tg *= x3 / ((k3 + 3) * (k3 + 4)) as f64;
        f.add(tf);
        g.add(tg);
        if tf.abs() < 1e-22 && tg.abs() < 1e-22 {
            break;
        }
    }
    AI_0 * f.total() + AIP_0 * g.total()
}

/// Coefficients u_k of the Airy asymptotic series, generated on the fly:
/// u_0 = 1, u_k = u_{k-1} (6k-5)(6k-3)(6k-1) / (216 k (2k-1)).
fn airy_u_next(u: f64, k: i64) -> f64 {
    u * ((6 * k - 5) * (6 * k - 3) * (6 * k - 1)) as f64 / (216 * k * (2 * k - 1)) as f64
}

fn airy_asymptotic_positive(x: f64) -> f64 {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let mut sum = 1.0;
    let mut u = 1.0;
    let mut term = 1.0_f64;
    for k in 1..60 {
        u = airy_u_next(u, k);
        let next = u / zeta.powi(k as i32);
        if next.abs() >= term.abs() {
            break; // divergent tail reached
        }
        term = next;
        sum += if k % 2 == 0 { term } else { -term };
        if term.abs() < 1e-18 {
            break;
        }
    }
    (-zeta).exp() * sum / (2.0 * std::f64::consts::PI.sqrt() * x.powf(0.25))
}

fn airy_asymptotic_negative(x: f64) -> f64 {
    let z = -x;
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let mut even = 1.0;
    let mut odd = 0.0;
    let mut u = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..80 {
        u = airy_u_next(u, k);
        let term = u / zeta.powi(k as i32);
        if term.abs() >= prev {
            break;
        }
        prev = term.abs();
        let signed = if (k / 2) % 2 == 0 { term } else { -term };
        if k % 2 == 0 {
            even += signed;
        } else {
            odd += signed;
        }
        if term.abs() < 1e-18 {
            break;
        }
    }
    let phase = zeta - std::f64::consts::FRAC_PI_4;
    (phase.cos() * even + phase.sin() * odd)
        / (std::f64::consts::PI.sqrt() * z.powf(0.25))
}

/// Airy function `Ai(λ)` for `λ <= 10`; unbounded below. Absolute accuracy
/// around 1e-11 or better throughout.
pub fn airy_ai(lambda: f64) -> Result<f64, AsymptoticsError> {
    if !lambda.is_finite() || lambda > AIRY_MAX_LAMBDA {
        return Err(out_of_range(format!("Ai argument {lambda}, supported range is <= 10")));
    }
    if lambda > AIRY_SERIES_CUTOFF {
        Ok(airy_asymptotic_positive(lambda))
    } else if lambda >= AIRY_BLEND_HI {
        Ok(airy_maclaurin(lambda))
    } else if lambda > AIRY_BLEND_LO {
        let s = (lambda - AIRY_BLEND_LO) / (AIRY_BLEND_HI - AIRY_BLEND_LO);
        let w = s * s * (3.0 - 2.0 * s);
        Ok(w * airy_maclaurin(lambda) + (1.0 - w) * airy_asymptotic_negative(lambda))
    } else {
        Ok(airy_asymptotic_negative(lambda))
    }
}

// ---------------------------------------------------------------------------
// Continuum (Bessel) limits

/// A physical spacetime point strictly inside the light cone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumPoint {
    x: f64,
    t: f64,
}

impl ContinuumPoint {
    pub fn new(x: f64, t: f64) -> Result<Self, AsymptoticsError> {
        if !(x.is_finite() && t.is_finite() && x.abs() < t) {
            return Err(out_of_range(format!("point ({x}, {t}) not strictly inside |x| < t")));
        }
        Ok(Self { x, t })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn t(&self) -> f64 {
        self.t
    }
}

/// Small-step limit of the scaled wave function in the homogeneous field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumLimit {
    /// Limit of `P/4ε²`.
    pub density: f64,
    /// Limit of `a1/2ε`: `(m/2) J0(m√((t²-x²)/2))`.
    pub a1: f64,
    /// Limit of `a2/2ε`: `-(m/√2) √((t+x)/(t-x)) J1(m√((t²-x²)/2))`.
    pub a2: f64,
}

/// Continuum limit in the homogeneous field. The Bessel argument carries the
/// tell-tale `1/√2` of the renormalized mass.
pub fn continuum_field(pt: ContinuumPoint, m: f64) -> ContinuumLimit {
    assert!(m > 0.0, "continuum limit needs m > 0");
    let arg = m * ((pt.t * pt.t - pt.x * pt.x) / 2.0).sqrt();
    let ratio = (pt.t + pt.x) / (pt.t - pt.x);
    let a1 = m / 2.0 * bessel_j0(arg);
    let a2 = -m / 2.0_f64.sqrt() * ratio.sqrt() * bessel_j1(arg);
    ContinuumLimit { density: a1 * a1 + a2 * a2, a1, a2 }
}

/// Field-free continuum limit of `P/4ε²`:
/// `(m²/4)(J0(m√(t²-x²))² + (t+x)/(t-x) J1(m√(t²-x²))²)`.
pub fn continuum_free(pt: ContinuumPoint, m: f64) -> f64 {
    assert!(m > 0.0, "continuum limit needs m > 0");
    let arg = m * (pt.t * pt.t - pt.x * pt.x).sqrt();
    let ratio = (pt.t + pt.x) / (pt.t - pt.x);
    let (j0, j1) = bessel_j01(arg);
    m * m / 4.0 * (j0 * j0 + ratio * j1 * j1)
}

// ---------------------------------------------------------------------------
// Chirality-reversal limits

/// Parity of the time index `t/ε` along which the limit is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(ti: i64) -> Self {
        if ti.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Large-time limit of `Σ_x a1²` in the homogeneous field; the walk precesses
/// between two accumulation points, one per parity of `t/ε`.
pub fn chirality_limit(parity: Parity, params: &LatticeParams) -> f64 {
    let me = params.mass_step();
    let n = params.norm();
    match parity {
        Parity::Even => me / (2.0 + me * me).sqrt(),
        Parity::Odd => me / (n * (2.0 + me * me).sqrt()),
    }
}

/// Field-free counterpart: a single limit `mε/(2√(1+m²ε²))`.
pub fn chirality_limit_free(params: &LatticeParams) -> f64 {
    let me = params.mass_step();
    debug_assert!(me <= 1.0, "stated for 0 <= mε <= 1");
    me / (2.0 * params.norm().sqrt())
}

// ---------------------------------------------------------------------------
// Airy regime

const CLAMP_SLACK: f64 = 1e-10;

fn guarded_acos(arg: f64, what: &str) -> Result<f64, AsymptoticsError> {
    if arg.abs() > 1.0 + CLAMP_SLACK {
        return Err(out_of_support(format!("{what}: arccos argument {arg}")));
    }
    Ok(arg.clamp(-1.0, 1.0).acos())
}

fn check_airy_params(params: &LatticeParams) -> Result<(), AsymptoticsError> {
    let me = params.mass_step();
    if !(me > 0.0 && me <= 1.0) {
        return Err(out_of_range(format!("mε = {me}, Airy regime needs 0 < mε <= 1")));
    }
    Ok(())
}

/// Stationary phase value
///
/// ```text
/// θ̃(v) = (|v| arccos(|v|√(n²-1)/√(1-v²)) - arccos(√(n²-1)/(n√(1-v²)))) / 2ε
/// ```
///
/// even in `v` and strictly negative inside `|v| < 1/n`, vanishing at the
/// edges where the Airy argument degenerates.
pub fn theta_tilde(v: f64, params: &LatticeParams) -> Result<f64, AsymptoticsError> {
    check_airy_params(params)?;
    let n = params.norm();
    let av = v.abs();
    if av >= 1.0 / n {
        return Err(out_of_support(format!("|v| = {av} not inside 1/n = {}", 1.0 / n)));
    }
    let s = (n * n - 1.0).sqrt();
    let root = (1.0 - v * v).sqrt();
    let first = guarded_acos(av * s / root, "θ̃ first term")?;
    let second = guarded_acos(s / (n * root), "θ̃ second term")?;
    Ok((av * first - second) / (2.0 * params.step()))
}

/// Phase of the field-free uniform Airy approximation on the unit lattice at
/// unit mass; the Airy factor there reads `Ai(-θ(v) t^(2/3))`. Defined for
/// `|v| < 1/√2`.
pub fn theta_free(v: f64) -> Result<f64, AsymptoticsError> {
    let av = v.abs();
    let vmax = 1.0 / 2.0_f64.sqrt();
    if av >= vmax {
        return Err(out_of_support(format!("|v| = {av} not inside 1/√2")));
    }
    let root = (1.0 - v * v).sqrt();
    let first = guarded_acos(av / root, "θ first term")?;
    let second = guarded_acos(1.0 / (2.0_f64.sqrt() * root), "θ second term")?;
    Ok((1.5 * (-av * first + second)).powf(2.0 / 3.0))
}

/// Uniform Airy approximation of `a1(x, t)` for `x/2ε` and `t/2ε + 1` even:
///
/// ```text
/// (-1)^⌊(x+t+4ε)/4ε⌋ · √2 m^(1/2) ε n^(1/2) (-12θ̃)^(1/6)
///   / ((2+m²ε²)(1-(x/t)²n²))^(1/4) · t^(-1/3) · Ai(-(-(3/2)θ̃ t)^(2/3))
/// ```
///
/// with error `O(1/t)` uniformly inside the support.
pub fn airy_approx_a1(idx: LatticeIndex, params: &LatticeParams) -> Result<f64, AsymptoticsError> {
    check_airy_params(params)?;
    let (xi, ti) = (idx.xi(), idx.ti());
    if xi.rem_euclid(4) != 0 || ti.rem_euclid(4) != 2 {
        return Err(out_of_range(format!(
            "approximation needs xi ≡ 0 and ti ≡ 2 (mod 4), got ({xi}, {ti})"
        )));
    }
    let v = xi as f64 / ti as f64;
    let theta = theta_tilde(v, params)?;
    let me = params.mass_step();
    let n = params.norm();
    let eps = params.step();
    let t = ti as f64 * eps;
    let sign = if (xi + ti).div_euclid(4).rem_euclid(2) == 0 { -1.0 } else { 1.0 }; // ⌊(x+t+4ε)/4ε⌋ = ⌊(x+t)/4ε⌋ + 1
    let amp = 2.0_f64.sqrt() * params.mass().sqrt() * eps * n.sqrt() * (-12.0 * theta).powf(1.0 / 6.0)
        / ((2.0 + me * me) * (1.0 - v * v * n * n)).powf(0.25);
    let ai = airy_ai(-(-1.5 * theta * t).powf(2.0 / 3.0))?;
    Ok(sign * amp * t.powf(-1.0 / 3.0) * ai)
}

/// The phase `f(u, α) = u(1/n - α) - ω_u` of the Fourier representation and
/// its first three `u`-derivatives, plus the positive stationary point
/// `u0(α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDerivatives {
    pub f: f64,
    pub f_u: f64,
    pub f_uu: f64,
    pub f_uuu: f64,
    pub u0: f64,
}

/// Analytic phase derivatives:
///
/// ```text
/// f_u   = 1/n - α - cos 2uε / (n cos 2ω_uε)
/// f_uu  = (n²-1)/n³ · 2ε sin 2uε / cos³ 2ω_uε
/// f_uuu = (n²-1)/n⁵ · 4ε² cos 2uε (n² + 2 sin² 2uε) / cos⁵ 2ω_uε
/// u0(α) = arccos(v √((n²-1)/(1-v²))) / 2ε,  v = 1/n - α
/// ```
pub fn phase_derivatives(
    u: f64,
    alpha: f64,
    params: &LatticeParams,
) -> Result<PhaseDerivatives, AsymptoticsError> {
    if params.mass() <= 0.0 {
        return Err(out_of_range("phase function needs m > 0".to_string()));
    }
    let eps = params.step();
    let n = params.norm();
    let half_period = std::f64::consts::FRAC_PI_2 / eps;
    if u.abs() > half_period * (1.0 + 1e-12) {
        return Err(out_of_range(format!("|u| = {} beyond π/2ε = {half_period}", u.abs())));
    }
    if !(0.0..=1.0 / n + 1e-12).contains(&alpha) {
        return Err(out_of_range(format!("α = {alpha} outside [0, 1/n]")));
    }
    let s2u = (2.0 * u * eps).sin();
    let c2u = (2.0 * u * eps).cos();
    let c2w = (1.0 - (s2u / n) * (s2u / n)).sqrt();
    let omega = (s2u / n).asin() / (2.0 * eps);
    let v = 1.0 / n - alpha;
    let u0_arg = v * ((n * n - 1.0) / (1.0 - v * v)).sqrt();
    let u0 = guarded_acos(u0_arg, "u0")? / (2.0 * eps);
    Ok(PhaseDerivatives {
        f: u * v - omega,
        f_u: v - c2u / (n * c2w),
        f_uu: (n * n - 1.0) / n.powi(3) * 2.0 * eps * s2u / c2w.powi(3),
        f_uuu: (n * n - 1.0) / n.powi(5) * 4.0 * eps * eps * c2u * (n * n + 2.0 * s2u * s2u)
            / c2w.powi(5),
        u0,
    })
}
