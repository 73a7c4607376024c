use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::integrate::{beta_integral, BetaAccumulator};
use super::{HalfInt, Rational};
use crate::error::{Error, Result};

/// One term `coeff · s^a c^b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TrigMonomial {
    pub coeff: Rational,
    /// Exponent of `sin(β/2)`.
    pub a: HalfInt,
    /// Exponent of `cos(β/2)`.
    pub b: HalfInt,
}

/// A canonical element of the trigonometric monomial ring.
///
/// Terms are grouped by the fractional parts of `(a, b)`. Inside a class the
/// value is stored as `s^a0 c^b0 · (P(c) + s·Q(c))` with `P`, `Q` polynomials
/// in `c` and with every common factor of `s` or `c` pulled into the prefactor.
/// Because `s` and `c` are nonvanishing on `(0, π)` and the coordinate ring of
/// the circle is reduced, that form is unique: structural equality is
/// functional equality, and `is_zero` is just "no terms".
///
/// Terms are sorted by `(a, b)`, never repeat an exponent pair, and never
/// carry a zero coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TrigPoly {
    terms: Vec<TrigMonomial>,
}

impl TrigPoly {
    pub fn zero() -> Self {
        TrigPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(r: Rational) -> Self {
        Self::monomial(r, HalfInt::ZERO, HalfInt::ZERO)
    }

    /// `r · s^a c^b`. Already canonical unless `r == 0`.
    pub fn monomial(r: Rational, a: HalfInt, b: HalfInt) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        TrigPoly {
            terms: vec![TrigMonomial { coeff: r, a, b }],
        }
    }

    /// `s^a c^b` from twice-values, coefficient 1.
    pub fn sc(a2: i64, b2: i64) -> Self {
        Self::monomial(Rational::one(), HalfInt::from_twice(a2), HalfInt::from_twice(b2))
    }

    /// Build from arbitrary (possibly redundant) terms and canonicalize.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Rational, HalfInt, HalfInt)>,
    {
        canonicalize(terms)
    }

    pub fn terms(&self) -> &[TrigMonomial] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exact zero test. Canonical forms make this a structural check.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Re-run canonicalization. Idempotent on values produced by this crate.
    pub fn canonicalize(&self) -> Self {
        canonicalize(self.terms.iter().map(|t| (t.coeff.clone(), t.a, t.b)))
    }

    pub fn add(&self, other: &TrigPoly) -> TrigPoly {
        let it = self.terms.iter().chain(&other.terms);
        canonicalize(it.map(|t| (t.coeff.clone(), t.a, t.b)))
    }

    pub fn sub(&self, other: &TrigPoly) -> TrigPoly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, r: &Rational) -> TrigPoly {
        if r.is_zero() {
            return Self::zero();
        }
        // A nonzero scalar preserves the canonical structure.
        TrigPoly {
            terms: self
                .terms
                .iter()
                .map(|t| TrigMonomial {
                    coeff: &t.coeff * r,
                    a: t.a,
                    b: t.b,
                })
                .collect(),
        }
    }

    /// Multiply by `r · s^da c^db`.
    pub fn mul_monomial(&self, da: HalfInt, db: HalfInt, r: &Rational) -> TrigPoly {
        if r.is_zero() {
            return Self::zero();
        }
        // Shifting every exponent by the same pair moves each class rigidly,
        // so the result is still canonical.
        TrigPoly {
            terms: self
                .terms
                .iter()
                .map(|t| TrigMonomial {
                    coeff: &t.coeff * r,
                    a: t.a + da,
                    b: t.b + db,
                })
                .collect(),
        }
    }

    pub fn mul(&self, other: &TrigPoly) -> TrigPoly {
        let mut raw = Vec::with_capacity(self.len() * other.len());
        for x in &self.terms {
            for y in &other.terms {
                raw.push((&x.coeff * &y.coeff, x.a + y.a, x.b + y.b));
            }
        }
        canonicalize(raw)
    }

    /// `d/dβ`, using `d s^a c^b = (a/2) s^(a-1) c^(b+1) - (b/2) s^(a+1) c^(b-1)`.
    pub fn differentiate(&self) -> TrigPoly {
        let mut raw = Vec::with_capacity(2 * self.len());
        for t in &self.terms {
            if t.a != HalfInt::ZERO {
                raw.push((
                    &t.coeff * t.a.to_rational() / BigInt::from(2),
                    t.a - HalfInt::ONE,
                    t.b + HalfInt::ONE,
                ));
            }
            if t.b != HalfInt::ZERO {
                raw.push((
                    -&t.coeff * t.b.to_rational() / BigInt::from(2),
                    t.a + HalfInt::ONE,
                    t.b - HalfInt::ONE,
                ));
            }
        }
        canonicalize(raw)
    }

    /// Evaluate at `beta`.
    ///
    /// Outside `(0, π)` only polynomials with nonnegative integer exponents
    /// can be evaluated.
    pub fn eval_at(&self, beta: f64) -> Result<f64> {
        let interior = beta > 0.0 && beta < PI;
        if !interior {
            let plain = self
                .terms
                .iter()
                .all(|t| t.a.is_integer() && t.b.is_integer() && t.a >= HalfInt::ZERO && t.b >= HalfInt::ZERO);
            if !plain || !beta.is_finite() {
                return Err(Error::Domain {
                    what: "TrigPoly::eval_at",
                    value: beta,
                    domain: "(0, π)",
                });
            }
        }
        let (s, c) = (0.5 * beta).sin_cos();
        Ok(self.eval_sc(s, c))
    }

    /// Evaluate from precomputed `s = sin(β/2)`, `c = cos(β/2)`.
    pub fn eval_sc(&self, s: f64, c: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let r = t.coeff.to_f64().unwrap_or(f64::NAN);
                r * pow_half(s, t.a) * pow_half(c, t.b)
            })
            .sum()
    }

    /// `∫₀^π p q dβ`, termwise through Beta integrals.
    pub fn inner_product(&self, other: &TrigPoly) -> Result<f64> {
        let mut acc = BetaAccumulator::default();
        for x in &self.terms {
            for y in &other.terms {
                let v = beta_integral(x.a + y.a, x.b + y.b)?;
                acc.add(&(&x.coeff * &y.coeff), &v);
            }
        }
        Ok(acc.value())
    }

    pub fn norm_squared(&self) -> Result<f64> {
        self.inner_product(self)
    }

    /// True iff `∫₀^π p² dβ` converges: every class has `a0, b0 > -1/2`.
    pub fn is_normalizable(&self) -> bool {
        let limit = -HalfInt::HALF;
        self.class_prefactors().values().all(|&(a0, b0)| a0 > limit && b0 > limit)
    }

    /// Minimal `(a, b)` per fractional class, i.e. the prefactor `s^a0 c^b0`.
    pub fn class_prefactors(&self) -> BTreeMap<(u8, u8), (HalfInt, HalfInt)> {
        let mut out: BTreeMap<(u8, u8), (HalfInt, HalfInt)> = BTreeMap::new();
        for t in &self.terms {
            let e = out.entry((t.a.frac_class(), t.b.frac_class())).or_insert((t.a, t.b));
            e.0 = e.0.min(t.a);
            e.1 = e.1.min(t.b);
        }
        out
    }

    /// `self = r · other` for a rational `r`? Returns `r`. Zero is
    /// proportional to everything with `r = 0`.
    pub fn ratio_to(&self, other: &TrigPoly) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        let lead = other.terms.first()?;
        let mine = self.terms.iter().find(|t| t.a == lead.a && t.b == lead.b)?;
        let r = &mine.coeff / &lead.coeff;
        (other.scale(&r) == *self).then_some(r)
    }

    /// Coefficient of the first term, if any.
    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.terms.first().map(|t| &t.coeff)
    }
}

fn pow_half(x: f64, e: HalfInt) -> f64 {
    match e.as_integer() {
        Some(n) => x.powi(n as i32),
        None => x.sqrt().powi(e.twice() as i32),
    }
}

/// Polynomial in `c`, dense, low degree first.
type CPoly = Vec<Rational>;

fn trim(p: &mut CPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn add_at(p: &mut CPoly, k: usize, v: Rational) {
    if p.len() <= k {
        p.resize(k + 1, Rational::zero());
    }
    p[k] += v;
}

/// Exact division by `1 - c²` if it divides `p`.
fn div_one_minus_c2(p: &CPoly) -> Option<CPoly> {
    if p.is_empty() {
        return Some(Vec::new());
    }
    // p(c) = (1 - c²) q(c)  ⇔  p_k = q_k - q_{k-2}. Solve from the top:
    // q_{k-2} = -p_k + q_k, with q of degree deg p - 2.
    let n = p.len();
    if n < 3 {
        return None;
    }
    let mut q = vec![Rational::zero(); n - 2];
    for k in (2..n).rev() {
        let upper = if k < n - 2 { q[k].clone() } else { Rational::zero() };
        q[k - 2] = upper - &p[k];
    }
    // Remaining low coefficients must match.
    let ok = p[0] == q[0] && p[1] == *q.get(1).unwrap_or(&Rational::zero());
    ok.then_some(q)
}

fn binom_row(h: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 0..h {
        let next = &row[k] * BigInt::from(h - k) / BigInt::from(k + 1);
        row.push(next);
    }
    row
}

/// Reduce one fractional class to `s^a0 c^b0 (P + sQ)` with maximal prefactor.
fn reduce_class(terms: &[(Rational, HalfInt, HalfInt)]) -> Vec<TrigMonomial> {
    let a_min = terms.iter().map(|t| t.1).min().unwrap();
    let b_min = terms.iter().map(|t| t.2).min().unwrap();
    let mut p: CPoly = Vec::new();
    let mut q: CPoly = Vec::new();
    for (r, a, b) in terms {
        let i = ((*a - a_min).twice() / 2) as usize;
        let k = ((*b - b_min).twice() / 2) as usize;
        // s^i = (1 - c²)^(i/2) or s (1 - c²)^((i-1)/2)
        let (target, h) = if i.is_multiple_of(2) { (&mut p, i / 2) } else { (&mut q, i / 2) };
        for (m, bin) in binom_row(h).into_iter().enumerate() {
            let sign = if m % 2 == 0 { bin } else { -bin };
            add_at(target, k + 2 * m, r * Rational::from_integer(sign));
        }
    }
    trim(&mut p);
    trim(&mut q);

    let (mut a0, mut b0) = (a_min, b_min);
    loop {
        if p.is_empty() && q.is_empty() {
            return Vec::new();
        }
        let p0_zero = p.first().is_none_or(Zero::is_zero);
        let q0_zero = q.first().is_none_or(Zero::is_zero);
        if p0_zero && q0_zero {
            // c | P and c | Q
            if !p.is_empty() {
                p.remove(0);
            }
            if !q.is_empty() {
                q.remove(0);
            }
            b0 += HalfInt::ONE;
            continue;
        }
        // s | (P + sQ)  ⇔  (1 - c²) | P; then P + sQ = s (Q + s P/(1-c²))
        if let Some(pt) = div_one_minus_c2(&p) {
            p = std::mem::take(&mut q);
            q = pt;
            trim(&mut q);
            a0 += HalfInt::ONE;
            continue;
        }
        break;
    }

    let mut out = Vec::with_capacity(p.len() + q.len());
    for (k, r) in p.into_iter().enumerate() {
        if !r.is_zero() {
            out.push(TrigMonomial {
                coeff: r,
                a: a0,
                b: b0 + HalfInt::from_int(k as i64),
            });
        }
    }
    for (k, r) in q.into_iter().enumerate() {
        if !r.is_zero() {
            out.push(TrigMonomial {
                coeff: r,
                a: a0 + HalfInt::ONE,
                b: b0 + HalfInt::from_int(k as i64),
            });
        }
    }
    out
}

fn canonicalize<I>(terms: I) -> TrigPoly
where
    I: IntoIterator<Item = (Rational, HalfInt, HalfInt)>,
{
    // Merge duplicates first; the class reduction then sees each pair once.
    let mut merged: BTreeMap<(HalfInt, HalfInt), Rational> = BTreeMap::new();
    for (r, a, b) in terms {
        if r.is_zero() {
            continue;
        }
        *merged.entry((a, b)).or_insert_with(Rational::zero) += r;
    }
    let mut classes = BTreeMap::<(u8, u8), Vec<_>>::new();
    for ((a, b), r) in merged {
        if !r.is_zero() {
            classes.entry((a.frac_class(), b.frac_class())).or_default().push((r, a, b));
        }
    }
    let mut out: Vec<TrigMonomial> = classes.values().flat_map(|ts| reduce_class(ts)).collect();
    out.sort_by_key(|t| (t.a, t.b));
    TrigPoly { terms: out }
}

impl Add for &TrigPoly {
    type Output = TrigPoly;
    fn add(self, rhs: &TrigPoly) -> TrigPoly {
        TrigPoly::add(self, rhs)
    }
}

impl Sub for &TrigPoly {
    type Output = TrigPoly;
    fn sub(self, rhs: &TrigPoly) -> TrigPoly {
        TrigPoly::sub(self, rhs)
    }
}

impl Mul for &TrigPoly {
    type Output = TrigPoly;
    fn mul(self, rhs: &TrigPoly) -> TrigPoly {
        TrigPoly::mul(self, rhs)
    }
}

impl Neg for &TrigPoly {
    type Output = TrigPoly;
    fn neg(self) -> TrigPoly {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write!(f, "{}", t.coeff.abs())?;
            if t.a != HalfInt::ZERO {
                write!(f, " s^({})", t.a)?;
            }
            if t.b != HalfInt::ZERO {
                write!(f, " c^({})", t.b)?;
            }
        }
        Ok(())
    }
}
