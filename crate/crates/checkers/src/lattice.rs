//! Core lattice model: the checkerboard walk, its gauge field, and the
//! observables built from one evolved time slice.
//!
//! A checker starts at the origin, makes a mandatory first move to `(ε, ε)`,
//! and then moves diagonally up-left or up-right. Each path carries the weight
//! `(-i·mε)^turns` times the product of ±1 gauge factors over the edges it
//! traverses; the wave function at a lattice point is `i·(1+m²ε²)^((1-t/ε)/2)`
//! times the sum of path weights. Everything here works in lattice units
//! (integer `xi = x/ε`, `ti = t/ε`); physical coordinates appear only at API
//! boundaries.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest time index accepted by the brute-force path enumeration.
pub const BRUTEFORCE_MAX_TI: i64 = 24;

#[derive(Debug, Error, PartialEq)]
pub enum LatticeError {
    #[error("invalid lattice parameters: mass={mass}, step={step} (need mass >= 0, step > 0, both finite)")]
    InvalidParams { mass: f64, step: f64 },
    #[error("invalid lattice index: ti={ti} (need ti >= 1)")]
    InvalidIndex { ti: i64 },
    #[error("time index {ti} too large for path enumeration (max {max})")]
    TimeTooLarge { ti: i64, max: i64 },
}

/// Electron mass `m` and lattice step `ε`, the two knobs of every formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeParams {
    mass: f64,
    step: f64,
}

impl LatticeParams {
    pub fn new(mass: f64, step: f64) -> Result<Self, LatticeError> {
        if !(mass.is_finite() && step.is_finite() && mass >= 0.0 && step > 0.0) {
            return Err(LatticeError::InvalidParams { mass, step });
        }
        Ok(Self { mass, step })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// The dimensionless product `mε`.
    pub fn mass_step(&self) -> f64 {
        self.mass * self.step
    }

    /// `n = 1 + m²ε²`, the normalization constant; always >= 1.
    pub fn norm(&self) -> f64 {
        1.0 + self.mass_step() * self.mass_step()
    }
}

/// A gauge-field value on one auxiliary edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// Midpoint of an auxiliary edge, stored in doubled lattice units
/// `(2x/ε, 2t/ε)`; both coordinates are odd for a genuine edge midpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeMidpoint {
    pub x2: i64,
    pub t2: i64,
}

impl EdgeMidpoint {
    /// Midpoint of the edge traversed by an up-right move from `(xi, ti)`.
    pub fn from_up_right(xi: i64, ti: i64) -> Self {
        Self { x2: 2 * xi + 1, t2: 2 * ti + 1 }
    }

    /// Midpoint of the edge traversed by an up-left move from `(xi, ti)`.
    pub fn from_up_left(xi: i64, ti: i64) -> Self {
        Self { x2: 2 * xi - 1, t2: 2 * ti + 1 }
    }

    /// Converts a physical half-integer midpoint `(x, t)` on a lattice of the
    /// given step. Returns `None` if `(x, t)` is not a midpoint of that lattice.
    pub fn from_physical(x: f64, t: f64, step: f64) -> Option<Self> {
        let x2 = (2.0 * x / step).round();
        let t2 = (2.0 * t / step).round();
        let exact = (x2 * step / 2.0 - x).abs() < 1e-9 * step
            && (t2 * step / 2.0 - t).abs() < 1e-9 * step;
        if exact && (x2 as i64).rem_euclid(2) == 1 && (t2 as i64).rem_euclid(2) == 1 {
            Some(Self { x2: x2 as i64, t2: t2 as i64 })
        } else {
            None
        }
    }
}

/// Assignment of ±1 to auxiliary lattice edges; the external electromagnetic
/// field. Evaluated lazily by midpoint, so unbounded lattices need no storage.
#[derive(Clone)]
pub enum GaugeField {
    /// Identically +1 (the field-free model).
    Trivial,
    /// `-1` exactly where `(t - x)/4ε` is an integer; period 2 in space and time.
    Homogeneous,
    /// Pseudo-random ±1 per edge, reproducible from the seed.
    Seeded(u64),
    /// User-supplied evaluator.
    Custom(Arc<dyn Fn(EdgeMidpoint) -> Sign + Send + Sync>),
}

impl fmt::Debug for GaugeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaugeField::Trivial => write!(f, "GaugeField::Trivial"),
            GaugeField::Homogeneous => write!(f, "GaugeField::Homogeneous"),
            GaugeField::Seeded(s) => write!(f, "GaugeField::Seeded({s})"),
            GaugeField::Custom(_) => write!(f, "GaugeField::Custom(..)"),
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl GaugeField {
    /// The homogeneous electromagnetic field `u_ε`. In doubled lattice units
    /// the defining rule `(t - x)/4ε ∈ ℤ` reads `(t2 - x2) ≡ 0 (mod 8)`, so
    /// the evaluator is independent of the step.
    pub fn homogeneous() -> Self {
        GaugeField::Homogeneous
    }

    pub fn trivial() -> Self {
        GaugeField::Trivial
    }

    pub fn seeded(seed: u64) -> Self {
        GaugeField::Seeded(seed)
    }

    pub fn custom(f: impl Fn(EdgeMidpoint) -> Sign + Send + Sync + 'static) -> Self {
        GaugeField::Custom(Arc::new(f))
    }

    pub fn sign_at(&self, mid: EdgeMidpoint) -> Sign {
        match self {
            GaugeField::Trivial => Sign::Plus,
            GaugeField::Homogeneous => {
                if (mid.t2 - mid.x2).rem_euclid(8) == 0 {
                    Sign::Minus
                } else {
                    Sign::Plus
                }
            }
            GaugeField::Seeded(seed) => {
                let h = splitmix64(splitmix64(seed ^ mid.x2 as u64) ^ mid.t2 as u64);
                if h & 1 == 0 {
                    Sign::Plus
                } else {
                    Sign::Minus
                }
            }
            GaugeField::Custom(f) => f(mid),
        }
    }
}

/// Convenience constructor mirroring the definition of `u_ε`; the field rule
/// is scale-free in lattice units, so the parameters only document intent.
pub fn make_homogeneous_field(_params: &LatticeParams) -> GaugeField {
    GaugeField::homogeneous()
}

/// A spacetime point in lattice units, `ti >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeIndex {
    xi: i64,
    ti: i64,
}

impl LatticeIndex {
    pub fn new(xi: i64, ti: i64) -> Result<Self, LatticeError> {
        if ti < 1 {
            return Err(LatticeError::InvalidIndex { ti });
        }
        Ok(Self { xi, ti })
    }

    pub fn xi(&self) -> i64 {
        self.xi
    }

    pub fn ti(&self) -> i64 {
        self.ti
    }

    /// Whether any checker path reaches this point: `xi + ti` even and
    /// `-ti + 2 <= xi <= ti` (the first move is pinned to the right).
    pub fn reachable(&self) -> bool {
        (self.xi + self.ti) % 2 == 0 && self.xi >= -self.ti + 2 && self.xi <= self.ti
    }
}

/// The wave-function value at one spacetime point, `a = a1 + i·a2`.
/// `a1` is the reversed-chirality component.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Amplitude {
    pub a1: f64,
    pub a2: f64,
}

impl Amplitude {
    pub const ZERO: Amplitude = Amplitude { a1: 0.0, a2: 0.0 };

    /// `P = a1² + a2²`, the probability to find the electron at this point.
    pub fn probability(&self) -> f64 {
        self.a1 * self.a1 + self.a2 * self.a2
    }
}

/// All amplitudes at a fixed time index, stored densely over the reachable
/// window `xi ∈ [-ti + 2, ti]`. Entries of the wrong parity are exactly zero.
#[derive(Debug, Clone)]
pub struct WaveSlice {
    ti: i64,
    amps: Vec<Amplitude>,
}

impl WaveSlice {
    /// The slice at `ti = 1`: a single amplitude `i·u(first edge)` at `xi = 1`.
    pub fn initial(field: &GaugeField) -> Self {
        let seed = field.sign_at(EdgeMidpoint::from_up_right(0, 0));
        WaveSlice { ti: 1, amps: vec![Amplitude { a1: 0.0, a2: seed.as_f64() }] }
    }

    pub fn ti(&self) -> i64 {
        self.ti
    }

    /// Inclusive window of stored positions, `(-ti + 2, ti)`.
    pub fn window(&self) -> (i64, i64) {
        (-self.ti + 2, self.ti)
    }

    pub fn amplitude_at(&self, xi: i64) -> Amplitude {
        let (lo, hi) = self.window();
        if xi < lo || xi > hi {
            return Amplitude::ZERO;
        }
        self.amps[(xi - lo) as usize]
    }

    /// Iterates `(xi, amplitude)` over the parity-reachable positions.
    pub fn iter_reachable(&self) -> impl Iterator<Item = (i64, Amplitude)> + '_ {
        let (lo, _) = self.window();
        self.amps
            .iter()
            .enumerate()
            .filter(move |(k, _)| k % 2 == 0)
            .map(move |(k, &a)| (lo + k as i64, a))
    }

    /// One application of the lattice Dirac equation:
    ///
    /// ```text
    /// a1(x, t+ε) = u(x+ε/2, t+ε/2)·( a1(x+ε, t) + mε·a2(x+ε, t))/√n
    /// a2(x, t+ε) = u(x-ε/2, t+ε/2)·(-mε·a1(x-ε, t) +    a2(x-ε, t))/√n
    /// ```
    ///
    /// The field factor multiplies the edge actually traversed into `(x, t+ε)`.
    pub fn step(&self, params: &LatticeParams, field: &GaugeField) -> WaveSlice {
        let me = params.mass_step();
        let inv_sqrt_n = 1.0 / params.norm().sqrt();
        let new_ti = self.ti + 1;
        let new_lo = -new_ti + 2;
        let mut amps = vec![Amplitude::ZERO; (2 * new_ti - 1) as usize];
        let mut xi = new_lo + (new_ti - new_lo).rem_euclid(2); // first xi with xi + new_ti even
        debug_assert_eq!((xi + new_ti).rem_euclid(2), 0);
        while xi <= new_ti {
            let from_right = self.amplitude_at(xi + 1);
            let from_left = self.amplitude_at(xi - 1);
            let u_left_edge = field.sign_at(EdgeMidpoint::from_up_left(xi + 1, self.ti));
            let u_right_edge = field.sign_at(EdgeMidpoint::from_up_right(xi - 1, self.ti));
            amps[(xi - new_lo) as usize] = Amplitude {
                a1: u_left_edge.as_f64() * (from_right.a1 + me * from_right.a2) * inv_sqrt_n,
                a2: u_right_edge.as_f64() * (-me * from_left.a1 + from_left.a2) * inv_sqrt_n,
            };
            xi += 2;
        }
        WaveSlice { ti: new_ti, amps }
    }

    /// Evolves the initial slice up to time index `ti`.
    pub fn evolve_to(ti: i64, params: &LatticeParams, field: &GaugeField) -> WaveSlice {
        assert!(ti >= 1, "ti must be >= 1");
        let mut slice = WaveSlice::initial(field);
        while slice.ti < ti {
            slice = slice.step(params, field);
        }
        slice
    }

    /// `Σ_x P(x, t)`; equals 1 up to roundoff for every field.
    pub fn total_probability(&self) -> f64 {
        self.amps.iter().map(Amplitude::probability).sum()
    }

    /// `Σ_{x <= v·t} P(x, t)`, the empirical position CDF at velocity `v`.
    pub fn cdf(&self, v: f64) -> f64 {
        // tiny guard so that v·ti landing exactly on a lattice site is not
        // dropped to the left by roundoff in the product
        let bound = v * self.ti as f64 + 1e-9;
        self.iter_reachable()
            .filter(|(xi, _)| (*xi as f64) <= bound)
            .map(|(_, a)| a.probability())
            .sum()
    }

    /// `Σ_x (x/t)^r P(x, t)`, the r-th moment of the scaled position.
    pub fn moment(&self, r: u32) -> f64 {
        self.iter_reachable()
            .map(|(xi, a)| (xi as f64 / self.ti as f64).powi(r as i32) * a.probability())
            .sum()
    }

    /// `Σ_x a1(x, t)²`, the probability of chirality reversal at time `t`.
    pub fn chirality_reversal(&self) -> f64 {
        self.amps.iter().map(|a| a.a1 * a.a1).sum()
    }

    pub fn max_abs_amplitude(&self) -> f64 {
        self.amps
            .iter()
            .flat_map(|a| [a.a1.abs(), a.a2.abs()])
            .fold(0.0, f64::max)
    }
}

/// Wave function by direct path enumeration, straight from the definition:
/// `i·(1+m²ε²)^((1-ti)/2) Σ_s (-i·mε)^turns(s) Π u(edges)`.
///
/// Paths are generated per endpoint by depth-first search with light-cone
/// pruning, so the work is the binomial path count, not `2^(ti-1)`.
pub fn amplitude_bruteforce(
    idx: LatticeIndex,
    params: &LatticeParams,
    field: &GaugeField,
) -> Result<Amplitude, LatticeError> {
    if idx.ti() > BRUTEFORCE_MAX_TI {
        return Err(LatticeError::TimeTooLarge { ti: idx.ti(), max: BRUTEFORCE_MAX_TI });
    }
    if !idx.reachable() {
        return Ok(Amplitude::ZERO);
    }

    // accumulate Σ (-i)^turns m^turns Π u  as (re, im) by turns mod 4
    struct Walk<'a> {
        target_xi: i64,
        ti: i64,
        me: f64,
        field: &'a GaugeField,
        sum_re: f64,
        sum_im: f64,
    }

    impl Walk<'_> {
        fn go(&mut self, xi: i64, ti: i64, dir: i64, weight: f64, turns: u32) {
            if ti == self.ti {
                if xi == self.target_xi {
                    match turns % 4 {
                        0 => self.sum_re += weight,
                        1 => self.sum_im -= weight,
                        2 => self.sum_re -= weight,
                        _ => self.sum_im += weight,
                    }
                }
                return;
            }
            let left = self.ti - ti;
            if (self.target_xi - xi).abs() > left {
                return;
            }
            for next_dir in [1i64, -1] {
                let mid = if next_dir == 1 {
                    EdgeMidpoint::from_up_right(xi, ti)
                } else {
                    EdgeMidpoint::from_up_left(xi, ti)
                };
                let u = self.field.sign_at(mid).as_f64();
                let turned = next_dir != dir;
                let w = if turned { weight * self.me } else { weight };
                self.go(xi + next_dir, ti + 1, next_dir, w * u, turns + turned as u32);
            }
        }
    }

    let mut walk = Walk {
        target_xi: idx.xi(),
        ti: idx.ti(),
        me: params.mass_step(),
        field,
        sum_re: 0.0,
        sum_im: 0.0,
    };
    // mandatory first move to (ε, ε)
    let u0 = field.sign_at(EdgeMidpoint::from_up_right(0, 0)).as_f64();
    walk.go(1, 1, 1, u0, 0);

    let norm = params.norm().powf((1 - idx.ti()) as f64 / 2.0);
    // multiply the path sum by i
    Ok(Amplitude { a1: -walk.sum_im * norm, a2: walk.sum_re * norm })
}

/// Wave function via the Dirac recurrence; O(ti²) time, O(ti) memory.
/// Agrees with [`amplitude_bruteforce`] wherever both are defined.
pub fn amplitude(idx: LatticeIndex, params: &LatticeParams, field: &GaugeField) -> Amplitude {
    if !idx.reachable() {
        return Amplitude::ZERO;
    }
    WaveSlice::evolve_to(idx.ti(), params, field).amplitude_at(idx.xi())
}

/// `P(x, t)` for one point.
pub fn probability(idx: LatticeIndex, params: &LatticeParams, field: &GaugeField) -> f64 {
    amplitude(idx, params, field).probability()
}

/// Empirical CDF `Σ_{x <= v t} P(x, t)` from one evolved slice.
pub fn cdf_empirical(ti: i64, v: f64, params: &LatticeParams, field: &GaugeField) -> f64 {
    WaveSlice::evolve_to(ti, params, field).cdf(v)
}

/// Moment `Σ_x (x/t)^r P(x, t)` from one evolved slice.
pub fn moment(ti: i64, r: u32, params: &LatticeParams, field: &GaugeField) -> f64 {
    WaveSlice::evolve_to(ti, params, field).moment(r)
}

/// Chirality-reversal probability `Σ_x a1(x, t)²` from one evolved slice.
pub fn chirality_reversal_prob(ti: i64, params: &LatticeParams, field: &GaugeField) -> f64 {
    WaveSlice::evolve_to(ti, params, field).chirality_reversal()
}

/// Checks the rescaling identity `a(εx, εt, m, ε, u_ε) = a(x, t, mε, 1, u_1)`
/// by evaluating both sides through the recurrence.
pub fn rescaling_check(xi: i64, ti: i64, params: &LatticeParams) -> bool {
    assert!(ti >= 1, "ti must be >= 1");
    let idx = match LatticeIndex::new(xi, ti) {
        Ok(idx) => idx,
        Err(_) => return false,
    };
    let unit = LatticeParams::new(params.mass_step(), 1.0).expect("mε >= 0");
    let field = GaugeField::homogeneous();
    let lhs = amplitude(idx, params, &field);
    let rhs = amplitude(idx, &unit, &field);
    (lhs.a1 - rhs.a1).abs() < 1e-12 && (lhs.a2 - rhs.a2).abs() < 1e-12
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    fn params(m: f64, eps: f64) -> LatticeParams {
        LatticeParams::new(m, eps).unwrap()
    }

    fn idx(xi: i64, ti: i64) -> LatticeIndex {
        LatticeIndex::new(xi, ti).unwrap()
    }

    fn assert_amp(a: Amplitude, a1: f64, a2: f64, tol: f64) {
        assert!(
            (a.a1 - a1).abs() < tol && (a.a2 - a2).abs() < tol,
            "got ({}, {}), want ({}, {})",
            a.a1,
            a.a2,
            a1,
            a2
        );
    }

    #[test]
    fn params_validation() {
        assert!(LatticeParams::new(-1.0, 1.0).is_err());
        assert!(LatticeParams::new(1.0, 0.0).is_err());
        assert!(LatticeParams::new(f64::NAN, 1.0).is_err());
        assert!(params(0.0, 0.5).norm() >= 1.0);
    }

    #[test]
    fn homogeneous_field_rule() {
        let f = make_homogeneous_field(&params(1.0, 1.0));
        // midpoint (ε/2, ε/2): (t-x)/4ε = 0 ∈ ℤ
        assert_eq!(f.sign_at(EdgeMidpoint { x2: 1, t2: 1 }), Sign::Minus);
        // midpoint (3ε/2, ε/2): (t-x)/4ε = -1/4
        assert_eq!(f.sign_at(EdgeMidpoint { x2: 3, t2: 1 }), Sign::Plus);
        // midpoint (ε/2, 9ε/2): (t-x)/4ε = 1
        assert_eq!(f.sign_at(EdgeMidpoint { x2: 1, t2: 9 }), Sign::Minus);
    }

    #[test]
    fn physical_midpoint_roundtrip() {
        let eps = 0.25;
        let mid = EdgeMidpoint::from_physical(0.5 * eps, 4.5 * eps, eps).unwrap();
        assert_eq!(mid, EdgeMidpoint { x2: 1, t2: 9 });
        assert!(EdgeMidpoint::from_physical(eps, eps, eps).is_none());
    }

    #[test]
    fn seeded_field_is_deterministic() {
        let f = GaugeField::seeded(7);
        let g = GaugeField::seeded(7);
        let h = GaugeField::seeded(8);
        let mut differs = false;
        for x2 in (-9..9).step_by(2) {
            for t2 in (1..19).step_by(2) {
                let mid = EdgeMidpoint { x2, t2 };
                assert_eq!(f.sign_at(mid), g.sign_at(mid));
                differs |= f.sign_at(mid) != h.sign_at(mid);
            }
        }
        assert!(differs, "different seeds should give different fields");
    }

    #[test]
    fn bruteforce_first_step() {
        // homogeneous field: a(ε, ε) = -i; trivial field: +i
        let p = params(1.0, 1.0);
        let a = amplitude_bruteforce(idx(1, 1), &p, &GaugeField::homogeneous()).unwrap();
        assert_amp(a, 0.0, -1.0, TOL);
        let a = amplitude_bruteforce(idx(1, 1), &p, &GaugeField::trivial()).unwrap();
        assert_amp(a, 0.0, 1.0, TOL);
    }

    #[test]
    fn bruteforce_small_times() {
        let p = params(1.0, 1.0);
        let hom = GaugeField::homogeneous();
        let triv = GaugeField::trivial();
        let s = 1.0 / 2.0_f64.sqrt();
        // field-free value at (1, 3)
        assert_amp(amplitude_bruteforce(idx(1, 3), &p, &triv).unwrap(), 0.5, -0.5, TOL);
        // homogeneous-field values for small x and t
        assert_amp(amplitude_bruteforce(idx(1, 3), &p, &hom).unwrap(), 0.5, 0.5, TOL);
        assert_amp(amplitude_bruteforce(idx(0, 2), &p, &hom).unwrap(), -s, 0.0, TOL);
        assert_amp(amplitude_bruteforce(idx(2, 2), &p, &hom).unwrap(), 0.0, s, TOL);
        assert_amp(amplitude_bruteforce(idx(-1, 3), &p, &hom).unwrap(), -0.5, 0.0, TOL);
        assert_amp(amplitude_bruteforce(idx(3, 3), &p, &hom).unwrap(), 0.0, -0.5, TOL);
        // no paths outside the light cone
        let outside = amplitude_bruteforce(idx(3, 1), &p, &hom).unwrap();
        assert_eq!((outside.a1, outside.a2), (0.0, 0.0));
        assert!(amplitude_bruteforce(idx(1, 25), &p, &hom).is_err());
    }

    #[test]
    fn evolve_one_step_matches_known_row() {
        let p = params(1.0, 1.0);
        let hom = GaugeField::homogeneous();
        let slice = WaveSlice::initial(&hom).step(&p, &hom);
        let s = 1.0 / 2.0_f64.sqrt();
        assert_amp(slice.amplitude_at(0), -s, 0.0, TOL);
        assert_amp(slice.amplitude_at(2), 0.0, s, TOL);
    }

    #[test]
    fn amplitude_row_t4() {
        // row t = 4ε: a(-2ε) = a(2ε) = -mε/n^{3/2}, a(0) = ((mε+m³ε³) - m²ε²i)/n^{3/2},
        // a(4ε) = i/n^{3/2}
        let p = params(1.0, 1.0);
        let hom = GaugeField::homogeneous();
        let r = 1.0 / (2.0 * 2.0_f64.sqrt());
        assert_amp(amplitude(idx(-2, 4), &p, &hom), -r, 0.0, TOL);
        assert_amp(amplitude(idx(0, 4), &p, &hom), 2.0 * r, -r, TOL);
        assert_amp(amplitude(idx(2, 4), &p, &hom), -r, 0.0, TOL);
        assert_amp(amplitude(idx(4, 4), &p, &hom), 0.0, r, TOL);
        let outside = amplitude(idx(5, 3), &p, &hom);
        assert_eq!((outside.a1, outside.a2), (0.0, 0.0));
    }

    #[test]
    fn massless_evolution_is_pure_transport() {
        let p = params(0.0, 1.0);
        for field in [GaugeField::trivial(), GaugeField::homogeneous(), GaugeField::seeded(3)] {
            let slice = WaveSlice::evolve_to(9, &p, &field);
            for (xi, a) in slice.iter_reachable() {
                assert_eq!(a.a1, 0.0, "a1 must stay exactly zero at m = 0");
                if xi == 9 {
                    assert!((a.a2.abs() - 1.0).abs() < TOL);
                } else {
                    assert_eq!(a.a2, 0.0);
                }
            }
        }
    }

    #[test]
    fn recurrence_matches_bruteforce_all_fields() {
        let p = params(0.7, 1.0);
        for field in [GaugeField::trivial(), GaugeField::homogeneous(), GaugeField::seeded(11)] {
            for ti in 1..=10 {
                let slice = WaveSlice::evolve_to(ti, &p, &field);
                for xi in -ti - 1..=ti + 1 {
                    let bf = amplitude_bruteforce(idx(xi, ti), &p, &field).unwrap();
                    let rec = slice.amplitude_at(xi);
                    assert!(
                        (bf.a1 - rec.a1).abs() < TOL && (bf.a2 - rec.a2).abs() < TOL,
                        "mismatch at xi={xi} ti={ti} for {field:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn unitarity_and_parity_support() {
        let p = params(1.3, 0.8);
        let slice = WaveSlice::evolve_to(64, &p, &GaugeField::seeded(5));
        assert!((slice.total_probability() - 1.0).abs() < TOL);
        let (lo, hi) = slice.window();
        for xi in lo..=hi {
            if (xi + slice.ti()) % 2 != 0 {
                let a = slice.amplitude_at(xi);
                assert_eq!((a.a1, a.a2), (0.0, 0.0));
            }
        }
    }

    #[test]
    fn observables_on_one_slice() {
        let p = params(1.0, 1.0);
        let hom = GaugeField::homogeneous();
        // v beyond the light cone picks up the whole slice
        assert!((cdf_empirical(40, 1.5, &p, &hom) - 1.0).abs() < TOL);
        // zeroth moment is unitarity
        assert!((moment(40, 0, &p, &hom) - 1.0).abs() < TOL);
        // a(ε, ε) = -i has no real part
        assert_eq!(chirality_reversal_prob(1, &p, &hom), 0.0);
        let pr = probability(idx(2, 2), &p, &hom);
        assert!((pr - 0.5).abs() < TOL);
    }

    #[test]
    fn rescaling_identity_examples() {
        assert!(rescaling_check(1, 1, &params(2.0, 0.5)));
        assert!(rescaling_check(0, 4, &params(1.0, 0.25)));
        assert!(rescaling_check(2, 10, &params(0.7, 0.3)));
    }
}
