//! `∫₀^π s^A c^B dβ = B((A+1)/2, (B+1)/2)`.
//!
//! When both arguments lie in ½ℤ (integer `A`, `B`) the Beta function is
//! `rational · π^k`, `k ∈ {0, 1}`, and we keep it exact so that long sums of
//! large alternating terms do not cancel catastrophically. Otherwise we fall
//! back to log-gamma.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::{HalfInt, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum BetaValue {
    /// `rational · π^pi_power`
    Exact { rational: Rational, pi_power: u8 },
    Float(f64),
}

impl BetaValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            BetaValue::Exact { rational, pi_power } => {
                let r = rational.to_f64().unwrap_or(f64::NAN);
                if *pi_power == 1 {
                    r * PI
                } else {
                    r
                }
            }
            BetaValue::Float(x) => *x,
        }
    }
}

/// Γ(x) for x ∈ ½ℤ, x > 0, as `rational · √π^e`.
fn gamma_half(x: HalfInt) -> (Rational, u8) {
    debug_assert!(x > HalfInt::ZERO);
    if let Some(n) = x.as_integer() {
        let mut f = BigInt::one();
        for k in 2..n {
            f *= k;
        }
        (Rational::from_integer(f), 0)
    } else {
        // Γ(m + 1/2) = (2m)! / (4^m m!) √π  =  Π_{k=1..m} (k - 1/2) √π
        let m = (x.twice() - 1) / 2;
        let mut r = Rational::one();
        for k in 1..=m {
            r *= Rational::new(BigInt::from(2 * k - 1), BigInt::from(2));
        }
        (r, 1)
    }
}

/// `∫₀^π sin^A(β/2) cos^B(β/2) dβ`.
pub fn beta_integral(a: HalfInt, b: HalfInt) -> Result<BetaValue> {
    if a <= -HalfInt::ONE || b <= -HalfInt::ONE {
        return Err(Error::Divergent { a, b });
    }
    if a.is_integer() && b.is_integer() {
        // arguments (A+1)/2, (B+1)/2 as twice-values: A+1, B+1
        let x = HalfInt::from_twice(a.twice() / 2 + 1);
        let y = HalfInt::from_twice(b.twice() / 2 + 1);
        let (gx, ex) = gamma_half(x);
        let (gy, ey) = gamma_half(y);
        let (gxy, exy) = gamma_half(x + y);
        let sqrt_pi_power = ex + ey - exy;
        debug_assert!(sqrt_pi_power == 0 || sqrt_pi_power == 2);
        return Ok(BetaValue::Exact {
            rational: gx * gy / gxy,
            pi_power: sqrt_pi_power / 2,
        });
    }
    let x = (a.to_f64() + 1.0) / 2.0;
    let y = (b.to_f64() + 1.0) / 2.0;
    Ok(BetaValue::Float(
        (libm::lgamma(x) + libm::lgamma(y) - libm::lgamma(x + y)).exp(),
    ))
}

/// Sums `Σ r_i · B_i` keeping exact parts exact until the end.
#[derive(Default)]
pub(crate) struct BetaAccumulator {
    rational: Rational,
    pi: Rational,
    float: f64,
}

impl BetaAccumulator {
    pub(crate) fn add(&mut self, coeff: &Rational, v: &BetaValue) {
        match v {
            BetaValue::Exact { rational, pi_power } => {
                let term = coeff * rational;
                if *pi_power == 1 {
                    self.pi += term;
                } else {
                    self.rational += term;
                }
            }
            BetaValue::Float(x) => self.float += coeff.to_f64().unwrap_or(f64::NAN) * x,
        }
    }

    pub(crate) fn value(&self) -> f64 {
        let mut v = self.float;
        if !self.rational.is_zero() {
            v += self.rational.to_f64().unwrap_or(f64::NAN);
        }
        if !self.pi.is_zero() {
            v += self.pi.to_f64().unwrap_or(f64::NAN) * PI;
        }
        v
    }
}
