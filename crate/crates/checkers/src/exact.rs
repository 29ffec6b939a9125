//! Closed-form amplitudes for the homogeneous field on the unit lattice.
//!
//! With `n = 1 + m²` and diagonal coordinates `(ξ, η)` labelling the point
//! `(ξ - η + 1, ξ + η + 1)`, the wave-function components are finite binomial
//! sums in `1 - n²`:
//!
//! ```text
//! a1 = (-1)^(ξ+1) m n^(δ₂(ξ(η+1))) / n^((ξ+η)/2) · Σ_j C(⌊ξ/2⌋,j) C(⌊(η-1)/2⌋,j) (1-n²)^j
//! a2 = (-1)^(ξ+1) / n^((ξ+η)/2) · Σ_j [C(⌊η/2⌋,j) n^(δ₂(ξη)) - C(⌊(η-1)/2⌋,j) n^(δ₂(ξ(η+1)))]
//!                                       · C(⌊ξ/2⌋,j) (1-n²)^j
//! ```
//!
//! with the convention `C(a, j) = 0` for `a < 0` or `j < 0`. The same values
//! can be written as terminating Gauss hypergeometric (Jacobi) polynomials,
//! and extracted as coefficients of two rational generating functions; both
//! rewrites live here and serve as independent oracles for the lattice
//! recurrence.
//!
//! The alternating sums cancel catastrophically in floating point once
//! `ξ + η` reaches a few dozen, so each evaluator has a float fast path and
//! an exact-rational path (`*_exact`) that does the cancellation in integer
//! arithmetic and rounds once at the end.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::numeric::CompensatedSum;

/// Series-truncation bound for [`generating_coeff`].
pub const GENERATING_MAX_ORDER: i64 = 40;

#[derive(Debug, Error, PartialEq)]
pub enum ExactError {
    #[error("invalid hypergeometric arguments a={a}, b={b}, c={c}: need b <= 0, c != 0, and c < b when c < 0")]
    InvalidArgs { a: i64, b: i64, c: i64 },
    #[error("diagonal order ξ+η = {order} exceeds the generating-series bound {max}")]
    TruncationExceeded { order: i64, max: i64 },
}

/// Diagonal coordinates `ξ, η >= 0`; the lattice point is
/// `(ξ - η + 1, ξ + η + 1)`, so `(ξ, η)` ranges over exactly the reachable
/// points with `ti = ξ + η + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DiagCoords {
    pub xi_d: i64,
    pub eta_d: i64,
}

impl DiagCoords {
    pub fn new(xi_d: i64, eta_d: i64) -> Option<Self> {
        (xi_d >= 0 && eta_d >= 0).then_some(Self { xi_d, eta_d })
    }

    /// Lattice point `(xi, ti) = (ξ - η + 1, ξ + η + 1)`.
    pub fn to_lattice(self) -> (i64, i64) {
        (self.xi_d - self.eta_d + 1, self.xi_d + self.eta_d + 1)
    }

    /// Inverse of [`Self::to_lattice`]; `None` off the reachable set.
    pub fn from_lattice(xi: i64, ti: i64) -> Option<Self> {
        if (xi + ti) % 2 != 0 {
            return None;
        }
        Self::new((xi + ti) / 2 - 1, (ti - xi) / 2)
    }
}

/// Arguments of a terminating Gauss hypergeometric polynomial: integer
/// `b <= 0` guarantees termination; a negative `c` is admitted when `c < b`,
/// in which case the sum is truncated at `k = |b|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypArgs {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub z: f64,
}

/// Evaluates `₂F₁(a, b; c; z) = 1 + Σ_k Π_{l<k} (a+l)(b+l)/((1+l)(c+l)) z^k`
/// for the terminating parameter ranges of [`HypArgs`].
pub fn hyp2f1_poly(args: HypArgs) -> Result<f64, ExactError> {
    let HypArgs { a, b, c, z } = args;
    if b > 0 || c == 0 || (c < 0 && c >= b) {
        return Err(ExactError::InvalidArgs { a, b, c });
    }
    let mut acc = CompensatedSum::default();
    acc.add(1.0);
    let mut term = 1.0;
    for l in 0..(-b) {
        term *= (a + l) as f64 * (b + l) as f64 / ((1 + l) as f64 * (c + l) as f64) * z;
        acc.add(term);
    }
    Ok(acc.total())
}

fn neg_one_pow(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `δ₂(a·b)` without forming the product.
fn delta2_prod(a: i64, b: i64) -> i64 {
    a.rem_euclid(2) * b.rem_euclid(2)
}

fn floor_half(v: i64) -> i64 {
    v.div_euclid(2)
}

/// `C(a, j)` with `C = 0` for `a < 0` or `j < 0`, in f64.
fn binomial_f64(a: i64, j: i64) -> f64 {
    if a < 0 || j < 0 || j > a {
        return 0.0;
    }
    let mut r = 1.0;
    for l in 0..j {
        r *= (a - l) as f64 / (l + 1) as f64;
    }
    r
}

fn binomial_big(a: i64, j: i64) -> BigInt {
    if a < 0 || j < 0 || j > a {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for l in 0..j {
        num *= a - l;
        den *= l + 1;
    }
    num / den
}

/// Rounds `num/den` (den > 0) to f64 without overflowing on huge operands
/// (the plain numer/denom quotient would).
fn bigint_ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let neg = num.is_negative();
    let n = num.abs();
    let shift = 64 - (n.bits() as i64 - den.bits() as i64);
    let q = if shift >= 0 { (n << shift as usize) / den } else { n / (den << (-shift) as usize) };
    let v = q.to_f64().expect("quotient fits in ~66 bits") * 2f64.powi(-shift as i32);
    if neg {
        -v
    } else {
        v
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    bigint_ratio_to_f64(r.numer(), r.denom())
}

fn rational_mass(m: f64) -> BigRational {
    BigRational::from_float(m).expect("finite mass")
}

/// Divides by `n^((ξ+η)/2)`, splitting off a final `√n` for odd `ξ+η`.
fn apply_half_power(value: BigRational, n: &BigRational, order: i64, n_f64: f64) -> f64 {
    let whole = n.pow((order.div_euclid(2)) as i32);
    let v = rational_to_f64(&(value / whole));
    if order.rem_euclid(2) == 1 {
        v / n_f64.sqrt()
    } else {
        v
    }
}

/// Dyadic decomposition of the mass and the integer pieces shared by the
/// exact evaluators: `m = mn/md`, `n = n_num/n_den`, `1 - n² = z_num/z_den`.
/// Plain `BigInt` fractions avoid the gcd that a `BigRational` would run on
/// every operation in the hot loop.
struct ExactPieces {
    mn: BigInt,
    md: BigInt,
    n_num: BigInt,
    n_den: BigInt,
    z_num: BigInt,
    z_den: BigInt,
}

impl ExactPieces {
    fn new(m: f64) -> Self {
        let m_r = rational_mass(m);
        let (mn, md) = (m_r.numer().clone(), m_r.denom().clone());
        let n_num = &md * &md + &mn * &mn;
        let n_den = &md * &md;
        let z_num = &n_den * &n_den - &n_num * &n_num;
        let z_den = &n_den * &n_den;
        Self { mn, md, n_num, n_den, z_num, z_den }
    }

    /// Rounds `sign·num / (den·n^(order/2))` to f64.
    fn finish(&self, negate: bool, num: BigInt, den: BigInt, order: i64, m: f64) -> f64 {
        let half = order.div_euclid(2) as u32;
        let num = num * self.n_den.pow(half);
        let den = den * self.n_num.pow(half);
        let v = bigint_ratio_to_f64(&num, &den);
        let v = if order.rem_euclid(2) == 1 { v / (1.0 + m * m).sqrt() } else { v };
        if negate {
            -v
        } else {
            v
        }
    }
}

/// Reversed-chirality component `a1` at `(ξ - η + 1, ξ + η + 1)`, float path.
pub fn a1_closed(d: DiagCoords, m: f64) -> f64 {
    debug_assert!(m >= 0.0);
    let (xi, eta) = (d.xi_d, d.eta_d);
    let n = 1.0 + m * m;
    let zf = 1.0 - n * n;
    let top = floor_half(xi);
    let other = floor_half(eta - 1);
    let mut acc = CompensatedSum::default();
    let mut zp = 1.0;
    for j in 0..=top {
        acc.add(binomial_f64(top, j) * binomial_f64(other, j) * zp);
        zp *= zf;
    }
    let exponent = delta2_prod(xi, eta + 1) as f64 - (xi + eta) as f64 / 2.0;
    neg_one_pow(xi + 1) * m * n.powf(exponent) * acc.total()
}

/// `a2` at `(ξ - η + 1, ξ + η + 1)`, float path. Exactly zero for even `ξ`,
/// odd `η` (the two binomials in the bracket coincide).
pub fn a2_closed(d: DiagCoords, m: f64) -> f64 {
    debug_assert!(m >= 0.0);
    let (xi, eta) = (d.xi_d, d.eta_d);
    let n = 1.0 + m * m;
    let zf = 1.0 - n * n;
    let top = floor_half(xi);
    let pow_a = n.powi(delta2_prod(xi, eta) as i32);
    let pow_b = n.powi(delta2_prod(xi, eta + 1) as i32);
    let mut acc = CompensatedSum::default();
    let mut zp = 1.0;
    for j in 0..=top {
        let bracket = binomial_f64(floor_half(eta), j) * pow_a
            - binomial_f64(floor_half(eta - 1), j) * pow_b;
        acc.add(bracket * binomial_f64(top, j) * zp);
        zp *= zf;
    }
    neg_one_pow(xi + 1) * n.powf(-((xi + eta) as f64) / 2.0) * acc.total()
}

/// `a1` with the alternating sum done in exact integer arithmetic; use for
/// large `ξ + η` where the float path cancels away.
pub fn a1_closed_exact(d: DiagCoords, m: f64) -> f64 {
    let (xi, eta) = (d.xi_d, d.eta_d);
    let p = ExactPieces::new(m);
    let top = floor_half(xi);
    let other = floor_half(eta - 1);
    // Σ C C z^j over the common denominator z_den^top
    let mut sum = BigInt::zero();
    let mut zj = p.z_den.pow(top as u32);
    for j in 0..=top {
        sum += binomial_big(top, j) * binomial_big(other, j) * &zj;
        if j < top {
            zj = zj * &p.z_num / &p.z_den; // exact: a z_den factor remains
        }
    }
    let delta = delta2_prod(xi, eta + 1) as u32;
    let num = sum * &p.mn * p.n_num.pow(delta);
    let den = &p.md * p.n_den.pow(delta) * p.z_den.pow(top as u32);
    p.finish(xi.rem_euclid(2) == 0, num, den, xi + eta, m)
}

/// `a2` with exact integer internals; see [`a1_closed_exact`].
pub fn a2_closed_exact(d: DiagCoords, m: f64) -> f64 {
    let (xi, eta) = (d.xi_d, d.eta_d);
    let p = ExactPieces::new(m);
    let top = floor_half(xi);
    let delta_a = delta2_prod(xi, eta) as u32;
    let delta_b = delta2_prod(xi, eta + 1) as u32;
    // both bracket terms over the common denominator n_den
    let pow_a = p.n_num.pow(delta_a) * p.n_den.pow(1 - delta_a);
    let pow_b = p.n_num.pow(delta_b) * p.n_den.pow(1 - delta_b);
    let mut sum = BigInt::zero();
    let mut zj = p.z_den.pow(top as u32);
    for j in 0..=top {
        let bracket = binomial_big(floor_half(eta), j) * &pow_a
            - binomial_big(floor_half(eta - 1), j) * &pow_b;
        sum += bracket * binomial_big(top, j) * &zj;
        if j < top {
            zj = zj * &p.z_num / &p.z_den;
        }
    }
    let den = &p.n_den * p.z_den.pow(top as u32);
    p.finish(xi.rem_euclid(2) == 0, sum, den, xi + eta, m)
}

/// `a1` through the hypergeometric rewrite
/// `(-1)^(ξ+1) m n^(δ-(ξ+η)/2) ₂F₁(-⌊(η-1)/2⌋, -⌊ξ/2⌋; 1; z)`, `z = 1 - n²`.
///
/// The rewrite degenerates on the light-cone column `η = 0` (its first
/// parameter turns positive and the series no longer terminates); there the
/// single straight path gives `a1 = 0` directly.
pub fn a1_hyper(d: DiagCoords, m: f64) -> f64 {
    debug_assert!(m >= 0.0);
    let (xi, eta) = (d.xi_d, d.eta_d);
    if eta == 0 {
        return 0.0;
    }
    let n = 1.0 + m * m;
    let z = 1.0 - n * n;
    let f = hyp2f1_poly(HypArgs { a: -floor_half(eta - 1), b: -floor_half(xi), c: 1, z })
        .expect("terminating parameters");
    let exponent = delta2_prod(1 + eta, xi) as f64 - (xi + eta) as f64 / 2.0;
    neg_one_pow(xi + 1) * m * n.powf(exponent) * f
}

/// `a2` through the four-case hypergeometric rewrite (cases indexed by the
/// parities of `ξ` and `η`); `η = 0` is the straight-path column
/// `a2 = (-1)^(ξ+1)/n^(ξ/2)` for the same reason as in [`a1_hyper`].
pub fn a2_hyper(d: DiagCoords, m: f64) -> f64 {
    debug_assert!(m >= 0.0);
    let (xi, eta) = (d.xi_d, d.eta_d);
    let n = 1.0 + m * m;
    if eta == 0 {
        return neg_one_pow(xi + 1) * n.powf(-(xi as f64) / 2.0);
    }
    let z = 1.0 - n * n;
    let half_pow = n.powf(-((xi + eta) as f64) / 2.0);
    let hyp = |a: i64, b: i64, c: i64| {
        hyp2f1_poly(HypArgs { a, b, c, z }).expect("terminating parameters")
    };
    match (xi.rem_euclid(2), eta.rem_euclid(2)) {
        (0, 0) => {
            // prefactor ξ/2 kills the ξ = 0 case before the series is touched
            if xi == 0 {
                0.0
            } else {
                -(xi as f64) / 2.0 * half_pow * z * hyp(1 - eta / 2, 1 - xi / 2, 2)
            }
        }
        (1, 0) => {
            let first = if xi == 1 {
                0.0
            } else {
                (xi - 1) as f64 * z * hyp(1 - eta / 2, 1 - (xi - 1) / 2, 2)
            };
            (first - 2.0 * m * m * hyp(1 - eta / 2, -(xi - 1) / 2, 1)) * half_pow / 2.0
        }
        (0, 1) => 0.0,
        _ => half_pow * m * m * hyp(-(eta - 1) / 2, -(xi - 1) / 2, 1),
    }
}

/// Which wave-function component a generating-function query addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    A1,
    A2,
}

/// Coefficient of `p^ξ q^η` in `Σ_l (p² + q² - n²p²q²)^l`, exact.
fn geometric_series_coeff(a: i64, b: i64, n: &BigRational) -> BigRational {
    if a < 0 || b < 0 || a % 2 != 0 || b % 2 != 0 {
        return BigRational::zero();
    }
    let (half_a, half_b) = (a / 2, b / 2);
    let n2 = n * n;
    let mut total = BigRational::zero();
    for k in 0..=half_a.min(half_b) {
        // multinomial (half_a + half_b - k; half_a - k, half_b - k, k)
        let (s1, s2) = (half_a - k, half_b - k);
        let coeff = binomial_big(s1 + s2, s2) * binomial_big(s1 + s2 + k, k);
        let term = BigRational::from(coeff) * n2.pow(k as i32);
        if k % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Coefficient of `p^ξ q^η` in the generating functions
///
/// ```text
/// Â1(p,q) = -m q (1 - p + q - n p q) / (1 - (p² + q² - n² p² q²))
/// Â2(p,q) = -(1 - q)(1 - p + q - n p q) / (1 - (p² + q² - n² p² q²))
/// ```
///
/// divided by `n^((ξ+η)/2)`; equals `a1_closed` / `a2_closed` respectively.
/// The overall sign of `Â2` is pinned by the boundary value `a2 = -1` at
/// `ξ = η = 0`. Exact rational internals throughout.
pub fn generating_coeff(d: DiagCoords, m: f64, component: Component) -> Result<f64, ExactError> {
    let (xi, eta) = (d.xi_d, d.eta_d);
    let order = xi + eta;
    if order > GENERATING_MAX_ORDER {
        return Err(ExactError::TruncationExceeded { order, max: GENERATING_MAX_ORDER });
    }
    let m_r = rational_mass(m);
    let n_r = BigRational::one() + &m_r * &m_r;
    let one = BigRational::one();

    // numerator monomials (p-degree, q-degree, coefficient)
    let monomials: Vec<(i64, i64, BigRational)> = match component {
        Component::A1 => vec![
            (0, 1, -&m_r * &one),
            (1, 1, m_r.clone()),
            (0, 2, -&m_r * &one),
            (1, 2, &m_r * &n_r),
        ],
        Component::A2 => vec![
            (0, 0, -&one * &one),
            (1, 0, one.clone()),
            (1, 1, &n_r - &one),
            (0, 2, one.clone()),
            (1, 2, -&n_r * &one),
        ],
    };

    let mut total = BigRational::zero();
    for (dp, dq, c) in monomials {
        total += c * geometric_series_coeff(xi - dp, eta - dq, &n_r);
    }
    Ok(apply_half_power(total, &n_r, order, 1.0 + m * m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{amplitude_bruteforce, GaugeField, LatticeIndex, LatticeParams};

    const TOL: f64 = 1e-12;

    fn d(xi: i64, eta: i64) -> DiagCoords {
        DiagCoords::new(xi, eta).unwrap()
    }

    #[test]
    fn diag_coords_bijection() {
        for xi_d in 0..12 {
            for eta_d in 0..12 {
                let (xi, ti) = d(xi_d, eta_d).to_lattice();
                assert!(LatticeIndex::new(xi, ti).unwrap().reachable());
                assert_eq!(DiagCoords::from_lattice(xi, ti), Some(d(xi_d, eta_d)));
            }
        }
        assert_eq!(DiagCoords::from_lattice(0, 3), None);
        assert_eq!(DiagCoords::from_lattice(5, 3), None);
    }

    #[test]
    fn hyp2f1_terminating_values() {
        // b = 0: only the k = 0 term survives
        assert_eq!(hyp2f1_poly(HypArgs { a: 5, b: 0, c: 1, z: 0.7 }).unwrap(), 1.0);
        // single k = 1 term: 1 + (-1)(-1)/(1·1) z
        let z = 0.37;
        assert!((hyp2f1_poly(HypArgs { a: -1, b: -1, c: 1, z }).unwrap() - (1.0 + z)).abs() < TOL);
        // 1 + 4z + z² at z = -3
        assert!(
            (hyp2f1_poly(HypArgs { a: -2, b: -2, c: 1, z: -3.0 }).unwrap() - (-2.0)).abs() < TOL
        );
        // extended definition with c < b <= 0 truncates at k = |b|: 1 - (2/3) z
        let f = hyp2f1_poly(HypArgs { a: -1, b: -2, c: -3, z: 0.5 }).unwrap();
        assert!((f - (1.0 - 2.0 / 3.0 * 0.5)).abs() < TOL);
    }

    #[test]
    fn hyp2f1_rejects_bad_args() {
        let bad = [(1, 1, 1), (0, 0, 0), (0, -2, -1), (0, -2, -2)];
        for (a, b, c) in bad {
            assert!(hyp2f1_poly(HypArgs { a, b, c, z: 1.0 }).is_err(), "({a},{b},{c})");
        }
    }

    #[test]
    fn closed_form_boundary_values() {
        // point (1,1): the C(-1,0) = 0 convention forces a1 = 0, a2 = -1
        for m in [0.0, 0.3, 1.0, 2.5] {
            assert_eq!(a1_closed(d(0, 0), m), 0.0);
            assert!((a2_closed(d(0, 0), m) + 1.0).abs() < TOL);
        }
        // point (1,3): a2 = m²/(1+m²)
        assert!((a2_closed(d(1, 1), 1.0) - 0.5).abs() < TOL);
        // Table row t = 2ε via (ξ,η) = (1,0) and (0,1)
        let m = 0.8;
        let n = 1.0 + m * m;
        assert!((a2_closed(d(1, 0), m) - 1.0 / n.sqrt()).abs() < TOL);
        assert!((a1_closed(d(0, 1), m) + m / n.sqrt()).abs() < TOL);
    }

    #[test]
    fn a2_vanishes_exactly_for_even_xi_odd_eta() {
        for xi in [0, 2, 4, 6] {
            for eta in [1, 3, 5] {
                for m in [0.5, 1.0, 2.0] {
                    assert_eq!(a2_closed(d(xi, eta), m), 0.0);
                    assert_eq!(a2_hyper(d(xi, eta), m), 0.0);
                    assert_eq!(a2_closed_exact(d(xi, eta), m), 0.0);
                }
            }
        }
    }

    #[test]
    fn closed_forms_match_path_sum() {
        let field = GaugeField::homogeneous();
        for m in [0.5, 1.0] {
            let params = LatticeParams::new(m, 1.0).unwrap();
            for xi_d in 0..8 {
                for eta_d in 0..(8 - xi_d) {
                    let dc = d(xi_d, eta_d);
                    let (xi, ti) = dc.to_lattice();
                    let idx = LatticeIndex::new(xi, ti).unwrap();
                    let bf = amplitude_bruteforce(idx, &params, &field).unwrap();
                    assert!(
                        (a1_closed(dc, m) - bf.a1).abs() < 1e-9,
                        "a1 at ξ={xi_d} η={eta_d} m={m}"
                    );
                    assert!(
                        (a2_closed(dc, m) - bf.a2).abs() < 1e-9,
                        "a2 at ξ={xi_d} η={eta_d} m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn hyper_form_matches_closed_form() {
        for m in [0.5, 1.0, 2.0] {
            for xi_d in 0..9 {
                for eta_d in 0..9 {
                    let dc = d(xi_d, eta_d);
                    assert!(
                        (a1_hyper(dc, m) - a1_closed(dc, m)).abs() < 1e-9,
                        "a1 at ξ={xi_d} η={eta_d} m={m}"
                    );
                    assert!(
                        (a2_hyper(dc, m) - a2_closed(dc, m)).abs() < 1e-9,
                        "a2 at ξ={xi_d} η={eta_d} m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn lemma_style_negative_c_route_agrees() {
        // binomial-prefactor form with c < 0 exercises the truncated regime:
        // a1 = (-1)^(ξ+1) m n^(δ-(ξ+η)/2) C(A+B, A) ₂F₁(-B, -A; -A-B; n²),
        // A = ⌊ξ/2⌋, B = ⌊(η-1)/2⌋
        for m in [0.5_f64, 1.0] {
            let n = 1.0 + m * m;
            for xi_d in 2..8 {
                for eta_d in 3..8 {
                    let a_low = floor_half(xi_d);
                    let b_low = floor_half(eta_d - 1);
                    let f = hyp2f1_poly(HypArgs {
                        a: -b_low,
                        b: -a_low,
                        c: -a_low - b_low,
                        z: n * n,
                    })
                    .unwrap();
                    let expect = neg_one_pow(xi_d + 1)
                        * m
                        * n.powf(
                            delta2_prod(1 + eta_d, xi_d) as f64 - (xi_d + eta_d) as f64 / 2.0,
                        )
                        * binomial_f64(a_low + b_low, a_low)
                        * f;
                    let got = a1_closed(d(xi_d, eta_d), m);
                    assert!((expect - got).abs() < 1e-9, "ξ={xi_d} η={eta_d} m={m}");
                }
            }
        }
    }

    #[test]
    fn exact_path_matches_float_path_on_small_grid() {
        for m in [0.25, 0.5, 1.0, 2.0] {
            for xi_d in 0..7 {
                for eta_d in 0..7 {
                    let dc = d(xi_d, eta_d);
                    assert!((a1_closed_exact(dc, m) - a1_closed(dc, m)).abs() < 1e-12);
                    assert!((a2_closed_exact(dc, m) - a2_closed(dc, m)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn generating_coeff_boundary_and_grid() {
        // sign pin: constant term of Â2 must reproduce a2(1,1) = -1
        assert!((generating_coeff(d(0, 0), 1.0, Component::A2).unwrap() + 1.0).abs() < TOL);
        for m in [0.5, 1.0] {
            let g = generating_coeff(d(0, 1), m, Component::A1).unwrap();
            assert!((g - a1_closed(d(0, 1), m)).abs() < 1e-9);
            for xi_d in 0..7 {
                for eta_d in 0..(7 - xi_d) {
                    let dc = d(xi_d, eta_d);
                    let g1 = generating_coeff(dc, m, Component::A1).unwrap();
                    let g2 = generating_coeff(dc, m, Component::A2).unwrap();
                    assert!((g1 - a1_closed(dc, m)).abs() < 1e-9, "A1 ξ={xi_d} η={eta_d}");
                    assert!((g2 - a2_closed(dc, m)).abs() < 1e-9, "A2 ξ={xi_d} η={eta_d}");
                }
            }
        }
        assert_eq!(
            generating_coeff(d(30, 11), 1.0, Component::A1),
            Err(ExactError::TruncationExceeded { order: 41, max: 40 })
        );
    }

    #[test]
    fn exact_path_survives_catastrophic_cancellation() {
        // at ξ + η ~ 120 the float path has no correct digits left; the exact
        // path must still produce a bounded wave-function value
        let dc = d(60, 61);
        let v1 = a1_closed_exact(dc, 1.0);
        let v2 = a2_closed_exact(dc, 1.0);
        assert!(v1.is_finite() && v1.abs() <= 1.0);
        assert!(v2.is_finite() && v2.abs() <= 1.0);
        assert!(v1 * v1 + v2 * v2 <= 1.0 + 1e-12);
    }
}
