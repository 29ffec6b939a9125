//! Momentum-space representation of the walk in the homogeneous field.
//!
//! Plane waves `e^(ipx - iω_p t)` with the lattice dispersion
//! `ω_p = arcsin(sin 2pε / n)/(2ε)`, `n = 1 + m²ε²`, diagonalize the
//! evolution. The wave function is recovered as a Fourier coefficient of
//! four explicit integrands (indexed by `t/ε mod 4`), and Parseval turns
//! sums over the slice into momentum integrals, which is where the
//! large-time distribution
//!
//! ```text
//! F'(v) = √(n²-1) / (π (1-v) √(1-n²v²)),   |v| <= 1/n
//! ```
//!
//! comes from. All integrands are smooth and periodic for `m > 0` because
//! `cos 2ω_pε >= √(n²-1)/n` stays away from zero; uniform trapezoid sums are
//! then spectrally accurate, and with enough nodes exact: `e^(ipx)·â(p)` is a
//! trigonometric polynomial of degree `|x/ε| + t/ε`, so any node count above
//! that resolves the zeroth Fourier coefficient up to roundoff.

use num::complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

use crate::lattice::{Amplitude, LatticeIndex, LatticeParams};
use crate::numeric::CompensatedSum;

#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("momentum-space formulas require m > 0 (cos 2ω_pε vanishes at m = 0)")]
    MassZero,
    #[error("quadrature underresolved: {points} nodes for ti = {ti}, need at least {needed}")]
    QuadratureUnderresolved { points: usize, ti: i64, needed: usize },
}

/// Minimum node count resolving the oscillation of the `ti`-th integrand.
pub fn min_quad_points(ti: i64) -> usize {
    (4 * ti + 64) as usize
}

/// The lattice dispersion relation and its derivative.
#[derive(Debug, Clone, Copy)]
pub struct Dispersion {
    params: LatticeParams,
}

impl Dispersion {
    pub fn new(params: LatticeParams) -> Self {
        Self { params }
    }

    /// `ω_p = arcsin(sin 2pε / n) / 2ε`; `|ω_p| <= π/4ε`.
    pub fn omega(&self, p: f64) -> f64 {
        let eps = self.params.step();
        ((2.0 * p * eps).sin() / self.params.norm()).asin() / (2.0 * eps)
    }

    /// `cos 2ω_pε = √(1 - sin²2pε/n²)`, bounded below by `√(n²-1)/n`.
    pub fn cos_2omega_eps(&self, p: f64) -> f64 {
        let s = (2.0 * p * self.params.step()).sin() / self.params.norm();
        (1.0 - s * s).sqrt()
    }

    /// Group velocity `ω'_p = cos 2pε / (n cos 2ω_pε)`; `|ω'_p| <= 1/n`.
    pub fn omega_prime(&self, p: f64) -> f64 {
        let c = (2.0 * p * self.params.step()).cos();
        c / (self.params.norm() * self.cos_2omega_eps(p))
    }

    /// Velocity bound `1/n` of the limiting distribution.
    pub fn support_bound(&self) -> f64 {
        1.0 / self.params.norm()
    }
}

fn require_positive_mass(params: &LatticeParams) -> Result<(), SpectralError> {
    if params.mass() > 0.0 {
        Ok(())
    } else {
        Err(SpectralError::MassZero)
    }
}

/// Normalized integrand `â1(p, t)` whose Fourier coefficients are (up to
/// sign) the `a1` amplitudes; the case split follows `ti mod 4`.
pub fn integrand_a1(p: f64, ti: i64, params: &LatticeParams) -> Result<Complex64, SpectralError> {
    require_positive_mass(params)?;
    let eps = params.step();
    let me = params.mass_step();
    let n = params.norm();
    let disp = Dispersion::new(*params);
    let w = disp.omega(p);
    let c2w = disp.cos_2omega_eps(p);
    let t = ti as f64 * eps;
    let i = Complex64::I;
    let v = match ti.rem_euclid(4) {
        1 => Complex64::from(2.0 * me * (w * (t - eps)).sin() * (p * eps).sin() / (n * c2w)),
        2 => (i * (w * (t - 2.0 * eps)).sin() - (w * t).cos()) * me / (n.sqrt() * c2w),
        3 => i * 2.0 * me * (w * (t - eps)).cos() * (p * eps).sin() / (n * c2w),
        _ => ((w * (t - 2.0 * eps)).cos() - i * (w * t).sin()) * me / (n.sqrt() * c2w),
    };
    Ok(v)
}

/// Normalized integrand `â2(p, t)`; see [`integrand_a1`].
pub fn integrand_a2(p: f64, ti: i64, params: &LatticeParams) -> Result<Complex64, SpectralError> {
    require_positive_mass(params)?;
    let eps = params.step();
    let me = params.mass_step();
    let n = params.norm();
    let disp = Dispersion::new(*params);
    let w = disp.omega(p);
    let c2w = disp.cos_2omega_eps(p);
    let t = ti as f64 * eps;
    let i = Complex64::I;
    let ratio = (me * me + (2.0 * p * eps).cos()) / (n * c2w);
    let e_m1 = Complex64::from_polar(1.0, -p * eps);
    let e_m2 = Complex64::from_polar(1.0, -2.0 * p * eps);
    let e_p2 = Complex64::from_polar(1.0, 2.0 * p * eps);
    let v = match ti.rem_euclid(4) {
        1 => e_m1 * (i * (w * (t - eps)).sin() * ratio - (w * (t - eps)).cos()),
        2 => e_m2 * (i * e_p2 * (w * (t - 2.0 * eps)).sin() - (w * t).cos()) / (n.sqrt() * c2w),
        3 => e_m1 * ((w * (t - eps)).cos() * ratio - i * (w * (t - eps)).sin()),
        _ => e_m2 * (e_p2 * (w * (t - 2.0 * eps)).cos() - i * (w * t).sin()) / (n.sqrt() * c2w),
    };
    Ok(v)
}

/// Trapezoid sum of `e^(ipx) f(p)` over one full period `[-π/ε, π/ε)`,
/// normalized so the result is the Fourier coefficient `(ε/2π)∫ e^(ipx) f dp`.
fn fourier_coefficient(
    xi: i64,
    params: &LatticeParams,
    points: usize,
    f: impl Fn(f64) -> Complex64,
) -> Complex64 {
    let eps = params.step();
    let x = xi as f64 * eps;
    let h = 2.0 * PI / (eps * points as f64);
    let mut re = CompensatedSum::default();
    let mut im = CompensatedSum::default();
    for j in 0..points {
        let p = -PI / eps + j as f64 * h;
        let v = Complex64::from_polar(1.0, p * x) * f(p);
        re.add(v.re);
        im.add(v.im);
    }
    Complex64::new(re.total(), im.total()) / points as f64
}

/// Sign prefactors `(-1)^(… + ⌊(x+t)/4ε⌋)` of the integral representation,
/// evaluated in integer arithmetic on lattice indices.
fn sign_exponents(xi: i64, ti: i64) -> (i64, i64) {
    let fl = (xi + ti).div_euclid(4);
    match ti.rem_euclid(4) {
        1 => ((xi - 1) / 2 + fl, (xi - 1) / 2 + fl),
        2 => (xi / 2 + fl, xi / 2 - 1 + fl),
        3 => ((xi - 1) / 2 + fl, (xi + 1) / 2 + fl),
        _ => (xi / 2 + 1 + fl, xi / 2 + fl),
    }
}

/// Wave function via the Fourier-integral representation, evaluated by
/// uniform trapezoid quadrature with `quad_points` nodes.
pub fn amplitude_integral(
    idx: LatticeIndex,
    params: &LatticeParams,
    quad_points: usize,
) -> Result<Amplitude, SpectralError> {
    require_positive_mass(params)?;
    let (xi, ti) = (idx.xi(), idx.ti());
    let needed = min_quad_points(ti);
    if quad_points < needed {
        return Err(SpectralError::QuadratureUnderresolved { points: quad_points, ti, needed });
    }
    if (xi + ti).rem_euclid(2) == 1 {
        // integrand is odd under p -> p + π/ε here, so the integral vanishes
        return Ok(Amplitude::ZERO);
    }
    let (k1, k2) = sign_exponents(xi, ti);
    let s1 = if k1.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let s2 = if k2.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let c1 = fourier_coefficient(xi, params, quad_points, |p| {
        integrand_a1(p, ti, params).expect("mass checked")
    });
    let c2 = fourier_coefficient(xi, params, quad_points, |p| {
        integrand_a2(p, ti, params).expect("mass checked")
    });
    Ok(Amplitude { a1: s1 * c1.re, a2: s2 * c2.re })
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

/// Large-time position CDF `F(v)` for the homogeneous field:
/// `(1/π) arccos((1 - n²v)/(n(1-v)))` inside `|v| <= 1/n`, clamped to 0/1
/// outside. Requires `m > 0`.
pub fn limit_cdf(v: f64, params: &LatticeParams) -> f64 {
    assert!(params.mass() > 0.0, "limit distribution needs m > 0");
    let n = params.norm();
    let vmax = 1.0 / n;
    if v < -vmax {
        0.0
    } else if v > vmax {
        1.0
    } else {
        (clamp_unit((1.0 - n * n * v) / (n * (1.0 - v)))).acos() / PI
    }
}

/// Density `F'(v) = √(n²-1)/(π(1-v)√(1-n²v²))` on the open support, zero
/// outside; diverges at the endpoints like an arcsine law.
pub fn limit_density(v: f64, params: &LatticeParams) -> f64 {
    assert!(params.mass() > 0.0, "limit distribution needs m > 0");
    let n = params.norm();
    if v.abs() > 1.0 / n {
        return 0.0;
    }
    let n2v2 = n * n * v * v;
    (n * n - 1.0).sqrt() / (PI * (1.0 - v) * (1.0 - n2v2).sqrt())
}

/// Field-free large-time CDF with mass `m0`:
/// `(1/π) arccos((1 - n₀v)/(√n₀(1-v)))` inside `|v| <= 1/√n₀`.
pub fn limit_cdf_free(v: f64, m0: f64, step: f64) -> f64 {
    assert!(m0 > 0.0 && step > 0.0);
    let n0 = 1.0 + m0 * m0 * step * step;
    let vmax = 1.0 / n0.sqrt();
    if v < -vmax {
        0.0
    } else if v > vmax {
        1.0
    } else {
        (clamp_unit((1.0 - n0 * v) / (n0.sqrt() * (1.0 - v)))).acos() / PI
    }
}

/// The field-free mass `m0` with the same limit distribution:
/// `1 + m0²ε² = (1 + m²ε²)²`.
pub fn renormalized_free_mass(params: &LatticeParams) -> f64 {
    let n = params.norm();
    (n * n - 1.0).sqrt() / params.step()
}

/// The large-time position distribution of the walk in the homogeneous
/// field: CDF, density, velocity support, and moments in one place.
#[derive(Debug, Clone, Copy)]
pub struct LimitDistribution {
    params: LatticeParams,
}

impl LimitDistribution {
    /// Requires `m > 0`; the distribution degenerates at zero mass.
    pub fn new(params: LatticeParams) -> Result<Self, SpectralError> {
        require_positive_mass(&params)?;
        Ok(Self { params })
    }

    /// Velocity support bound `1/(1+m²ε²)`.
    pub fn support_bound(&self) -> f64 {
        1.0 / self.params.norm()
    }

    pub fn cdf(&self, v: f64) -> f64 {
        limit_cdf(v, &self.params)
    }

    pub fn density(&self, v: f64) -> f64 {
        limit_density(v, &self.params)
    }

    pub fn moment(&self, r: u32) -> f64 {
        moment_limit(r, &self.params)
    }
}

type Node = (f64, f64);

fn simpson(f: &impl Fn(f64) -> f64, a: Node, b: Node) -> (Node, f64) {
    let c = 0.5 * (a.0 + b.0);
    let fc = f(c);
    ((c, fc), (b.0 - a.0) / 6.0 * (a.1 + 4.0 * fc + b.1))
}

fn adaptive_simpson(
    f: &impl Fn(f64) -> f64,
    a: Node,
    c: Node,
    b: Node,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let (cl, left) = simpson(f, a, c);
    let (cr, right) = simpson(f, c, b);
    let err = left + right - whole;
    if depth == 0 || err.abs() <= 15.0 * tol {
        return left + right + err / 15.0;
    }
    adaptive_simpson(f, a, cl, c, left, tol / 2.0, depth - 1)
        + adaptive_simpson(f, c, cr, b, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let a = (a, f(a));
    let b = (b, f(b));
    let (c, whole) = simpson(&f, a, b);
    adaptive_simpson(&f, a, c, b, whole, tol, 40)
}

/// `r`-th moment `∫ v^r F'(v) dv` of the limit distribution. The endpoint
/// singularity `(v_max² - v²)^(-1/2)` is removed by `v = v_max sin θ`, which
/// turns the integrand into `(sin θ / n)^r √(n²-1) / (π (n - sin θ))`.
pub fn moment_limit(r: u32, params: &LatticeParams) -> f64 {
    assert!(params.mass() > 0.0, "limit distribution needs m > 0");
    let n = params.norm();
    let scale = (n * n - 1.0).sqrt() / PI;
    integrate(
        |theta| {
            let s = theta.sin();
            (s / n).powi(r as i32) * scale / (n - s)
        },
        -PI / 2.0,
        PI / 2.0,
        1e-13,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{amplitude, GaugeField, WaveSlice};

    fn params(m: f64, eps: f64) -> LatticeParams {
        LatticeParams::new(m, eps).unwrap()
    }

    fn idx(xi: i64, ti: i64) -> LatticeIndex {
        LatticeIndex::new(xi, ti).unwrap()
    }

    #[test]
    fn dispersion_shape() {
        let d = Dispersion::new(params(1.0, 1.0));
        assert_eq!(d.omega(0.0), 0.0);
        assert!(d.omega(0.3).abs() <= PI / 4.0 + 1e-15);
        assert!((d.omega(0.3 + PI / 2.0) + d.omega(0.3)).abs() < 1e-13);
        assert!((d.omega(0.3 + PI) - d.omega(0.3)).abs() < 1e-13);
        assert!((d.omega_prime(0.0) - 0.5).abs() < 1e-15);
        assert!((d.support_bound() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn integrand_basics() {
        let p = params(1.0, 1.0);
        // odd sin(pε) factor at the origin for ti ≡ 1 (mod 4)
        assert_eq!(integrand_a1(0.0, 5, &p).unwrap().norm(), 0.0);
        // ω_{p+π/ε} = ω_p makes the integrands (-1)^ti-periodic over a half
        // Brillouin zone (the sin(pε) and e^{-ipε} factors flip for odd ti,
        // mirroring the parity of the supported positions), and fully
        // periodic over 2π/ε
        for ti in [5, 6, 7, 8] {
            let flip = if ti % 2 == 0 { 1.0 } else { -1.0 };
            for q in [-1.3, 0.2, 2.4] {
                let lhs = integrand_a1(q + PI, ti, &p).unwrap();
                let rhs = integrand_a1(q, ti, &p).unwrap();
                assert!((lhs - flip * rhs).norm() < 1e-12);
                let lhs = integrand_a2(q + PI, ti, &p).unwrap();
                let rhs = integrand_a2(q, ti, &p).unwrap();
                assert!((lhs - flip * rhs).norm() < 1e-12);
                let full = integrand_a2(q + 2.0 * PI, ti, &p).unwrap();
                assert!((full - rhs).norm() < 1e-12);
            }
        }
        assert_eq!(integrand_a1(0.1, 4, &params(0.0, 1.0)).unwrap_err(), SpectralError::MassZero);
    }

    #[test]
    fn integral_matches_known_values() {
        let p = params(1.0, 1.0);
        let a = amplitude_integral(idx(1, 1), &p, min_quad_points(1)).unwrap();
        assert!(a.a1.abs() < 1e-12 && (a.a2 + 1.0).abs() < 1e-12);
        // row t = 4ε
        let r = 1.0 / (2.0 * 2.0_f64.sqrt());
        let a = amplitude_integral(idx(0, 4), &p, min_quad_points(4)).unwrap();
        assert!((a.a1 - 2.0 * r).abs() < 1e-12 && (a.a2 + r).abs() < 1e-12);
        let a = amplitude_integral(idx(2, 4), &p, min_quad_points(4)).unwrap();
        assert!((a.a1 + r).abs() < 1e-12 && a.a2.abs() < 1e-12);
    }

    #[test]
    fn integral_matches_recurrence_sample() {
        let field = GaugeField::homogeneous();
        for m in [0.5, 1.0] {
            for eps in [1.0, 0.5] {
                let p = params(m, eps);
                for ti in [3, 6, 9, 12] {
                    for xi in [-ti + 2, -1, 0, 1, ti] {
                        let want = amplitude(idx(xi, ti), &p, &field);
                        let got = amplitude_integral(idx(xi, ti), &p, min_quad_points(ti)).unwrap();
                        assert!(
                            (want.a1 - got.a1).abs() < 1e-10 && (want.a2 - got.a2).abs() < 1e-10,
                            "xi={xi} ti={ti} m={m} eps={eps}: {want:?} vs {got:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn integral_vanishes_on_parity_mismatch() {
        let p = params(1.0, 1.0);
        // the early return
        let a = amplitude_integral(idx(2, 5), &p, min_quad_points(5)).unwrap();
        assert_eq!((a.a1, a.a2), (0.0, 0.0));
        // and the raw quadrature agrees that the coefficient is zero
        let c = fourier_coefficient(2, &p, min_quad_points(5), |q| {
            integrand_a1(q, 5, &p).unwrap()
        });
        assert!(c.norm() < 1e-13);
    }

    #[test]
    fn integral_error_paths() {
        let p = params(1.0, 1.0);
        assert_eq!(
            amplitude_integral(idx(0, 10), &p, 10).unwrap_err(),
            SpectralError::QuadratureUnderresolved { points: 10, ti: 10, needed: 104 }
        );
        assert_eq!(
            amplitude_integral(idx(0, 4), &params(0.0, 1.0), 1000).unwrap_err(),
            SpectralError::MassZero
        );
    }

    #[test]
    fn limit_cdf_values() {
        let p = params(1.0, 1.0);
        assert_eq!(limit_cdf(-1.0, &p), 0.0);
        assert_eq!(limit_cdf(1.0, &p), 1.0);
        assert!((limit_cdf(0.0, &p) - 1.0 / 3.0).abs() < 1e-14);
        // continuity at the support edges
        assert!(limit_cdf(-0.5, &p) < 1e-7);
        assert!((limit_cdf(0.5, &p) - 1.0).abs() < 1e-7);
        assert!((limit_cdf(0.5 + 1e-12, &p) - 1.0).abs() < 1e-7);
    }

    #[test]
    fn density_normalizes_and_matches_cdf_shape() {
        let p = params(0.8, 1.0);
        let total = moment_limit(0, &p);
        assert!((total - 1.0).abs() < 1e-10);
        let v2 = moment_limit(2, &p);
        let vmax = Dispersion::new(p).support_bound();
        assert!(v2 > 0.0 && v2 <= vmax * vmax);
        assert!(limit_density(vmax + 0.01, &p) == 0.0);
    }

    #[test]
    fn empirical_moment_approaches_limit() {
        let p = params(1.0, 1.0);
        let slice = WaveSlice::evolve_to(400, &p, &GaugeField::homogeneous());
        for r in [1u32, 2] {
            let lattice = slice.moment(r);
            let limit = moment_limit(r, &p);
            assert!((lattice - limit).abs() < 0.05, "r={r}: {lattice} vs {limit}");
        }
    }

    #[test]
    fn renormalization_connects_field_and_free() {
        let p = params(0.7, 0.9);
        let m0 = renormalized_free_mass(&p);
        for v in [-0.9, -0.4, -0.1, 0.0, 0.2, 0.45, 0.8] {
            let lhs = limit_cdf(v, &p);
            let rhs = limit_cdf_free(v, m0, p.step());
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn limit_distribution_wrapper() {
        assert_eq!(
            LimitDistribution::new(params(0.0, 1.0).to_owned()).unwrap_err(),
            SpectralError::MassZero
        );
        let p = params(1.0, 1.0);
        let dist = LimitDistribution::new(p).unwrap();
        assert_eq!(dist.support_bound(), 0.5);
        assert!((dist.cdf(0.0) - 1.0 / 3.0).abs() < 1e-14);
        assert_eq!(dist.cdf(dist.support_bound()), 1.0);
        assert!((dist.moment(0) - 1.0).abs() < 1e-10);
        assert!(dist.density(0.2) > 0.0);
    }
}
