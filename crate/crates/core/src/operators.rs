//! Exact operators on the trigonometric ring.
//!
//! With `s = sin(β/2)`, `c = cos(β/2)`:
//!
//! * superpotential `W = (jz/2)(tan + cot) = jz / sin β`
//! * `A = d/dβ + W`, `A† = -d/dβ + W`, `H₊ = A A†`, `H₋ = A† A`
//! * ladder factors `k_upper(m) = ((m-1)/2) cot - (m/2) tan`,
//!   `k_lower(m) = (m/2) cot - ((m-1)/2) tan`
//! * `J₊` raises `jz → jz+1` with `-d/dβ + k(jz+1)` on each component,
//!   `J₋` lowers `jz → jz-1` with `d/dβ + k(jz)`.
//!
//! With these conventions
//! `(-d + k(jz))(d + k(jz)) = H_jz - (jz - 1/2)²` and
//! `(d + k(jz+1))(-d + k(jz+1)) = H_jz - (jz + 1/2)²` on both components,
//! which is what makes `J±, Jz` close into su(2).

use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::trigring::{rat, HalfInt, Rational, TrigPoly};

/// Upper (`s_z = +1/2`, acted on by `H₊`) or lower (`s_z = -1/2`, `H₋`)
/// spinor component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    Upper,
    Lower,
}

impl Component {
    pub fn sz(self) -> HalfInt {
        match self {
            Component::Upper => HalfInt::HALF,
            Component::Lower => -HalfInt::HALF,
        }
    }

    pub fn sign_char(self) -> char {
        match self {
            Component::Upper => '+',
            Component::Lower => '-',
        }
    }
}

/// One radial sector: a value of `jz` and a spinor component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SectorParams {
    jz: HalfInt,
    component: Component,
}

impl SectorParams {
    pub fn new(jz: HalfInt, component: Component) -> Result<Self> {
        ensure_half_odd("jz", jz)?;
        Ok(SectorParams { jz, component })
    }

    pub fn jz(&self) -> HalfInt {
        self.jz
    }

    pub fn component(&self) -> Component {
        self.component
    }
}

impl fmt::Display for SectorParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "jz={};{}", self.jz, self.component.sign_char())
    }
}

pub(crate) fn ensure_half_odd(name: &str, v: HalfInt) -> Result<()> {
    if v.is_half_odd() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} = {v} must be half-odd (±1/2, ±3/2, …)")))
    }
}

fn cot() -> TrigPoly {
    TrigPoly::sc(-2, 2)
}

fn tan() -> TrigPoly {
    TrigPoly::sc(2, -2)
}

/// `W(β) = (jz/2)(tan(β/2) + cot(β/2))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Superpotential {
    jz: HalfInt,
}

pub fn superpotential_w(jz: HalfInt) -> Superpotential {
    Superpotential { jz }
}

impl Superpotential {
    pub fn jz(&self) -> HalfInt {
        self.jz
    }

    pub fn to_poly(&self) -> TrigPoly {
        (&tan() + &cot()).scale(&(self.jz.to_rational() / Rational::from_integer(2.into())))
    }

    /// `p ↦ W p`, as the two monomial shifts of `tan` and `cot`.
    pub fn apply(&self, p: &TrigPoly) -> TrigPoly {
        let half_jz = self.jz.to_rational() / Rational::from_integer(2.into());
        let by_tan = p.mul_monomial(HalfInt::ONE, -HalfInt::ONE, &half_jz);
        let by_cot = p.mul_monomial(-HalfInt::ONE, HalfInt::ONE, &half_jz);
        &by_tan + &by_cot
    }

    /// `jz / sin β`.
    pub fn eval(&self, beta: f64) -> f64 {
        self.jz.to_f64() / beta.sin()
    }
}

/// `A p = p' + W p`.
pub fn susy_a_apply(jz: HalfInt, p: &TrigPoly) -> TrigPoly {
    &p.differentiate() + &superpotential_w(jz).apply(p)
}

/// `A† p = -p' + W p`.
pub fn susy_adag_apply(jz: HalfInt, p: &TrigPoly) -> TrigPoly {
    &superpotential_w(jz).apply(p) - &p.differentiate()
}

/// `H₊ = A A†` (upper) or `H₋ = A† A` (lower), by composition.
pub fn hamiltonian_composed(params: SectorParams, p: &TrigPoly) -> TrigPoly {
    let jz = params.jz;
    match params.component {
        Component::Upper => susy_a_apply(jz, &susy_adag_apply(jz, p)),
        Component::Lower => susy_adag_apply(jz, &susy_a_apply(jz, p)),
    }
}

/// Coefficients `(C_s, C_c)` of the partner potential
/// `V = C_s / sin²(β/2) + C_c / cos²(β/2)`.
pub fn potential_coefficients(params: SectorParams) -> (Rational, Rational) {
    let half = HalfInt::HALF;
    let x = params.jz - params.component.sz();
    let y = params.jz + params.component.sz();
    let quarter = rat(1, 4);
    let cs = &quarter * (x + half).to_rational() * (x - half).to_rational();
    let cc = &quarter * (y + half).to_rational() * (y - half).to_rational();
    (cs, cc)
}

/// `-p'' + V p` with the Pöschl–Teller I potential written directly.
pub fn hamiltonian_potential(params: SectorParams, p: &TrigPoly) -> TrigPoly {
    let (cs, cc) = potential_coefficients(params);
    let two = HalfInt::from_int(2);
    let kinetic = -&p.differentiate().differentiate();
    let vs = p.mul_monomial(-two, HalfInt::ZERO, &cs);
    let vc = p.mul_monomial(HalfInt::ZERO, -two, &cc);
    &(&kinetic + &vs) + &vc
}

/// Partner Hamiltonian applied to `p`. Computed both by composition and from
/// the explicit potential; the two must agree exactly.
pub fn hamiltonian_apply(params: SectorParams, p: &TrigPoly) -> Result<TrigPoly> {
    let composed = hamiltonian_composed(params, p);
    let direct = hamiltonian_potential(params, p);
    if composed != direct {
        return Err(Error::Inconsistency(format!(
            "H[{params}] by composition ({composed}) differs from potential form ({direct})"
        )));
    }
    Ok(composed)
}

/// `k(β) = cot_coeff · cot(β/2) - tan_coeff · tan(β/2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderCoefficient {
    pub cot_coeff: Rational,
    pub tan_coeff: Rational,
}

impl LadderCoefficient {
    pub fn to_poly(&self) -> TrigPoly {
        &cot().scale(&self.cot_coeff) - &tan().scale(&self.tan_coeff)
    }

    pub fn apply(&self, p: &TrigPoly) -> TrigPoly {
        let by_cot = p.mul_monomial(-HalfInt::ONE, HalfInt::ONE, &self.cot_coeff);
        let by_tan = p.mul_monomial(HalfInt::ONE, -HalfInt::ONE, &self.tan_coeff);
        &by_cot - &by_tan
    }

    /// The monomial `s^a c^b` with logarithmic derivative `k`, i.e. the
    /// solution of `(-d/dβ + k) φ = 0`: `a = 2·cot_coeff`, `b = 2·tan_coeff`.
    pub fn annihilated_monomial(&self) -> Option<TrigPoly> {
        let a = &self.cot_coeff * Rational::from_integer(4.into());
        let b = &self.tan_coeff * Rational::from_integer(4.into());
        if !a.is_integer() || !b.is_integer() {
            return None;
        }
        let a2 = i64::try_from(a.to_integer()).ok()?;
        let b2 = i64::try_from(b.to_integer()).ok()?;
        Some(TrigPoly::sc(a2, b2))
    }
}

/// Infeld–Hull ladder factor for the given component at parameter `m`.
pub fn ladder_k(family: Component, m: HalfInt) -> LadderCoefficient {
    let half = rat(1, 2);
    let m = m.to_rational();
    let m_minus = &m - Rational::one();
    match family {
        Component::Upper => LadderCoefficient {
            cot_coeff: &half * m_minus,
            tan_coeff: &half * m,
        },
        Component::Lower => LadderCoefficient {
            cot_coeff: &half * m,
            tan_coeff: &half * m_minus,
        },
    }
}

/// `B_m p = (-d/dβ + k(m)) p`; maps eigenfunctions of `H_(m-1)` to `H_m`.
pub fn ladder_b_apply(family: Component, m: HalfInt, p: &TrigPoly) -> TrigPoly {
    &ladder_k(family, m).apply(p) - &p.differentiate()
}

/// `B†_m p = (d/dβ + k(m)) p`; maps eigenfunctions of `H_m` to `H_(m-1)`.
pub fn ladder_bdag_apply(family: Component, m: HalfInt, p: &TrigPoly) -> TrigPoly {
    &ladder_k(family, m).apply(p) + &p.differentiate()
}

/// A two-component radial state `Z_jz = (Φ⁺, Φ⁻)`.
///
/// The angular phases `e^{i(jz-1/2)θ}` (upper) and `e^{i(jz+1/2)θ}` (lower)
/// are implicit in the `jz` label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinorState {
    pub jz: HalfInt,
    pub upper: TrigPoly,
    pub lower: TrigPoly,
}

impl SpinorState {
    pub fn new(jz: HalfInt, upper: TrigPoly, lower: TrigPoly) -> Self {
        SpinorState { jz, upper, lower }
    }

    pub fn zero(jz: HalfInt) -> Self {
        Self::new(jz, TrigPoly::zero(), TrigPoly::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.upper.is_zero() && self.lower.is_zero()
    }

    pub fn component(&self, c: Component) -> &TrigPoly {
        match c {
            Component::Upper => &self.upper,
            Component::Lower => &self.lower,
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::new(self.jz, self.upper.scale(r), self.lower.scale(r))
    }

    /// Componentwise sum; labels must agree.
    pub fn add(&self, other: &SpinorState) -> Result<Self> {
        self.same_label(other)?;
        Ok(Self::new(self.jz, &self.upper + &other.upper, &self.lower + &other.lower))
    }

    pub fn sub(&self, other: &SpinorState) -> Result<Self> {
        self.same_label(other)?;
        Ok(Self::new(self.jz, &self.upper - &other.upper, &self.lower - &other.lower))
    }

    fn same_label(&self, other: &SpinorState) -> Result<()> {
        // The zero state is label-agnostic.
        if self.jz == other.jz || self.is_zero() || other.is_zero() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "cannot combine states with jz = {} and jz = {}",
                self.jz, other.jz
            )))
        }
    }

    /// `⟨Z, Z'⟩ = ⟨Φ⁺, Φ'⁺⟩ + ⟨Φ⁻, Φ'⁻⟩`.
    pub fn inner_product(&self, other: &SpinorState) -> Result<f64> {
        Ok(self.upper.inner_product(&other.upper)? + self.lower.inner_product(&other.lower)?)
    }

    pub fn norm(&self) -> Result<f64> {
        Ok(self.inner_product(self)?.sqrt())
    }

    /// `r` with `self = r · other`, if it exists.
    pub fn ratio_to(&self, other: &SpinorState) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if other.is_zero() {
            return None;
        }
        let r = if other.upper.is_zero() {
            self.lower.ratio_to(&other.lower)?
        } else {
            self.upper.ratio_to(&other.upper)?
        };
        (other.scale(&r) == *self).then_some(r)
    }

    /// Divide by a positive rational so the first coefficient is `±1`.
    /// Keeps the sign, so ladder phases are untouched.
    pub fn normalized_content(&self) -> Self {
        let lead = self.upper.leading_coeff().or_else(|| self.lower.leading_coeff());
        match lead {
            Some(r) => self.scale(&(Rational::one() / r.abs())),
            None => self.clone(),
        }
    }
}

/// `J₊`: raises `jz` by one.
pub fn jplus_apply(z: &SpinorState) -> SpinorState {
    let m = z.jz + HalfInt::ONE;
    SpinorState::new(
        m,
        ladder_b_apply(Component::Upper, m, &z.upper),
        ladder_b_apply(Component::Lower, m, &z.lower),
    )
}

/// `J₋`: lowers `jz` by one.
pub fn jminus_apply(z: &SpinorState) -> SpinorState {
    let m = z.jz;
    SpinorState::new(
        m - HalfInt::ONE,
        ladder_bdag_apply(Component::Upper, m, &z.upper),
        ladder_bdag_apply(Component::Lower, m, &z.lower),
    )
}

/// `Jz` is diagonal on labelled states.
pub fn jz_apply(z: &SpinorState) -> (HalfInt, SpinorState) {
    (z.jz, z.scale(&z.jz.to_rational()))
}

/// `J² = J₋J₊ + Jz(Jz+1)`.
pub fn casimir_apply(z: &SpinorState) -> SpinorState {
    let jz = z.jz.to_rational();
    let shift = &jz * (&jz + Rational::one());
    let lowered = jminus_apply(&jplus_apply(z));
    SpinorState::new(
        z.jz,
        &lowered.upper + &z.upper.scale(&shift),
        &lowered.lower + &z.lower.scale(&shift),
    )
}

/// `H = diag(H₊, H₋)` in sector `jz`.
pub fn spinor_hamiltonian_apply(z: &SpinorState) -> Result<SpinorState> {
    let up = SectorParams::new(z.jz, Component::Upper)?;
    let lo = SectorParams::new(z.jz, Component::Lower)?;
    Ok(SpinorState::new(
        z.jz,
        hamiltonian_apply(up, &z.upper)?,
        hamiltonian_apply(lo, &z.lower)?,
    ))
}

fn square(h: HalfInt) -> Rational {
    let r = h.to_rational();
    &r * &r
}

/// Checks both Infeld–Hull factorizations of `H_(jz;±)` on `p`:
///
/// * `(-d + k(jz))(d + k(jz)) p = (H_jz - (jz - 1/2)²) p`
/// * `(d + k(jz+1))(-d + k(jz+1)) p = (H_jz - (jz + 1/2)²) p`
pub fn check_factorization(params: SectorParams, p: &TrigPoly) -> Result<()> {
    let jz = params.jz;
    let fam = params.component;
    let h = hamiltonian_apply(params, p)?;

    let lhs1 = ladder_b_apply(fam, jz, &ladder_bdag_apply(fam, jz, p));
    let rhs1 = &h - &p.scale(&square(jz - HalfInt::HALF));
    if lhs1 != rhs1 {
        return Err(Error::Inconsistency(format!("B B† ≠ H - (jz-1/2)² in {params} on {p}")));
    }
    let m = jz + HalfInt::ONE;
    let lhs2 = ladder_bdag_apply(fam, m, &ladder_b_apply(fam, m, p));
    let rhs2 = &h - &p.scale(&square(jz + HalfInt::HALF));
    if lhs2 != rhs2 {
        return Err(Error::Inconsistency(format!("B† B ≠ H - (jz+1/2)² in {params} on {p}")));
    }
    Ok(())
}

/// Random ring element: `terms` monomials with twice-exponents in
/// `[-max_twice, max_twice]` and small rational coefficients.
pub fn random_poly<R: Rng>(rng: &mut R, terms: usize, max_twice: i64) -> TrigPoly {
    TrigPoly::from_terms((0..terms).map(|_| {
        let num = rng.gen_range(-9i64..=9);
        let den = rng.gen_range(1i64..=7);
        (
            rat(num, den),
            HalfInt::from_twice(rng.gen_range(-max_twice..=max_twice)),
            HalfInt::from_twice(rng.gen_range(-max_twice..=max_twice)),
        )
    }))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    fn sector(t: i64, c: Component) -> SectorParams {
        SectorParams::new(h(t), c).unwrap()
    }

    #[test]
    fn superpotential_values() {
        let w = superpotential_w(h(1));
        let expected = TrigPoly::from_terms([(rat(1, 4), h(2), h(-2)), (rat(1, 4), h(-2), h(2))]);
        assert_eq!(w.apply(&TrigPoly::one()), expected);
        assert_eq!(w.to_poly(), expected);
        assert!((w.apply(&TrigPoly::one()).eval_at(PI / 2.0).unwrap() - 0.5).abs() < 1e-15);
        let w = superpotential_w(h(-3));
        assert!((w.apply(&TrigPoly::one()).eval_at(PI / 2.0).unwrap() + 1.5).abs() < 1e-15);
        assert!((w.eval(PI / 2.0) + 1.5).abs() < 1e-15);
    }

    #[test]
    fn susy_pair_on_ground_states() {
        assert_eq!(susy_adag_apply(h(1), &TrigPoly::sc(1, 3)), TrigPoly::sc(3, 1));
        assert_eq!(susy_a_apply(h(1), &TrigPoly::sc(3, 1)), TrigPoly::sc(1, 3));
        assert!(susy_a_apply(h(5), &TrigPoly::zero()).is_zero());
    }

    #[test]
    fn hamiltonian_examples() {
        let up = sector(1, Component::Upper);
        let lo = sector(1, Component::Lower);
        assert_eq!(hamiltonian_apply(up, &TrigPoly::sc(1, 3)).unwrap(), TrigPoly::sc(1, 3));
        assert_eq!(hamiltonian_apply(lo, &TrigPoly::sc(3, 1)).unwrap(), TrigPoly::sc(3, 1));
        let p = TrigPoly::sc(3, 5);
        let s = sector(3, Component::Upper);
        assert_eq!(hamiltonian_composed(s, &p), hamiltonian_potential(s, &p));
    }

    #[test]
    fn ladder_k_examples() {
        let k = ladder_k(Component::Upper, h(3));
        assert_eq!(k.to_poly(), &TrigPoly::sc(-2, 2).scale(&rat(1, 4)) - &TrigPoly::sc(2, -2).scale(&rat(3, 4)));
        let k = ladder_k(Component::Lower, h(3));
        assert_eq!(k.cot_coeff, rat(3, 4));
        assert_eq!(k.tan_coeff, rat(1, 4));
        assert_eq!(ladder_k(Component::Upper, h(3)).annihilated_monomial(), Some(TrigPoly::sc(1, 3)));
    }

    #[test]
    fn factorization_on_random_polys() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for t in [-5, -3, -1, 1, 3, 5] {
            for c in [Component::Upper, Component::Lower] {
                for _ in 0..10 {
                    let p = random_poly(&mut rng, 4, 7);
                    check_factorization(sector(t, c), &p).unwrap();
                }
            }
        }
    }

    #[test]
    fn literal_printed_ladder_factor_does_not_factorize() {
        // k = (jz/2)(cot - tan): the upper-family value at jz = 3/2 differs
        // from ours, and the B B† identity fails with it.
        let jz = h(3);
        let literal = LadderCoefficient { cot_coeff: rat(3, 4), tan_coeff: rat(3, 4) };
        let p = TrigPoly::sc(3, 5);
        let bbdag = &literal.apply(&(&literal.apply(&p) + &p.differentiate())) - &(&literal.apply(&p) + &p.differentiate()).differentiate();
        let rhs = &hamiltonian_apply(sector(3, Component::Upper), &p).unwrap() - &p.scale(&square(jz - HalfInt::HALF));
        assert_ne!(bbdag, rhs);
    }

    fn top_half() -> SpinorState {
        SpinorState::new(h(1), TrigPoly::sc(1, 3), TrigPoly::sc(3, 1))
    }

    #[test]
    fn ladder_action_on_j_half() {
        let z = top_half();
        assert!(jplus_apply(&z).is_zero());
        assert_eq!(jplus_apply(&z).jz, h(3));
        let down = jminus_apply(&z);
        assert_eq!(down.jz, h(-1));
        assert_eq!(down.upper, TrigPoly::sc(3, 1).scale(&rat(-1, 1)));
        assert_eq!(down.lower, TrigPoly::sc(1, 3));
        let ratio = down.norm().unwrap() / z.norm().unwrap();
        assert!((ratio - 1.0).abs() < 1e-14);
        assert!(jplus_apply(&SpinorState::zero(h(1))).is_zero());
        assert!(jminus_apply(&down).is_zero());
    }

    #[test]
    fn jz_bookkeeping() {
        let z = top_half();
        let (m, zz) = jz_apply(&z);
        assert_eq!(m, h(1));
        assert_eq!(zz, z.scale(&rat(1, 2)));
        let down = jminus_apply(&z);
        assert_eq!(jplus_apply(&down).jz, z.jz);
    }

    #[test]
    fn casimir_and_hamiltonian_on_j_half() {
        let z = top_half();
        assert_eq!(casimir_apply(&z), z.scale(&rat(3, 4)));
        let down = jminus_apply(&z);
        assert_eq!(casimir_apply(&down), down.scale(&rat(3, 4)));
        for s in [&z, &down] {
            let hz = spinor_hamiltonian_apply(s).unwrap();
            let j2 = casimir_apply(s);
            assert_eq!(hz, *s);
            assert_eq!(j2.add(&s.scale(&rat(1, 4))).unwrap(), hz);
        }
    }

    #[test]
    fn formal_adjointness() {
        // Functions vanishing at both ends: s^a c^b with a, b ≥ 3/2.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for jz in [-3, -1, 1, 3] {
            for _ in 0..5 {
                let mk = |rng: &mut ChaCha8Rng| {
                    TrigPoly::from_terms((0..3).map(|_| {
                        (rat(rng.gen_range(-5..=5), rng.gen_range(1..=4)), h(rng.gen_range(3..=9)), h(rng.gen_range(3..=9)))
                    }))
                };
                let p = mk(&mut rng);
                let q = mk(&mut rng);
                let lhs = susy_a_apply(h(jz), &p).inner_product(&q).unwrap();
                let rhs = p.inner_product(&susy_adag_apply(h(jz), &q)).unwrap();
                assert!((lhs - rhs).abs() < 1e-10, "{lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn sector_params_validate() {
        assert!(SectorParams::new(h(2), Component::Upper).is_err());
        assert!(SectorParams::new(h(-7), Component::Lower).is_ok());
    }
}
