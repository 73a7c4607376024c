//! su(2) multiplets, the spectrum, and the degeneracy count.
//!
//! A multiplet is built from its highest-weight state, found by solving
//! `J₊ Z = 0` in the ring, and then descended with `J₋`. Every other
//! relation (eigenvalue, Casimir, commutators, ladder norms) is then a
//! checkable consequence.

mod lattice;

use std::f64::consts::PI;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::operators::{
    casimir_apply, ensure_half_odd, jminus_apply, jplus_apply, jz_apply, ladder_k, spinor_hamiltonian_apply,
    susy_a_apply, susy_adag_apply, Component, SectorParams, SpinorState,
};
use crate::trigring::{HalfInt, Rational, TrigPoly};

pub use lattice::kernel_dimension;

/// Normalizable endpoint exponents `(γ, δ)` of a sector:
/// solutions behave as `sin^γ(β/2)` at `β → 0` and `cos^δ(β/2)` at `β → π`.
pub fn indicial_exponents(params: SectorParams) -> (HalfInt, HalfInt) {
    let sz = params.component().sz();
    let jz = params.jz();
    ((jz - sz).abs() + HalfInt::HALF, (jz + sz).abs() + HalfInt::HALF)
}

/// `ε_j = (j + 1/2)²`.
pub fn epsilon(j: HalfInt) -> Rational {
    let n = (j + HalfInt::HALF).to_rational();
    &n * &n
}

/// `(j + 1/2)`, the exact square root of `ε_j`.
pub fn sqrt_epsilon(j: HalfInt) -> Rational {
    (j + HalfInt::HALF).to_rational()
}

fn ensure_j(j: HalfInt) -> Result<()> {
    ensure_half_odd("j", j)?;
    if j < HalfInt::HALF {
        return Err(Error::InvalidArgument(format!("j = {j} must be positive")));
    }
    Ok(())
}

fn construction(msg: String) -> Error {
    Error::Construction(msg)
}

/// `Z_{j,j}`: upper component from `J₊`-annihilation, lower from
/// `Φ⁻ = ε^(-1/2) A† Φ⁺`.
pub fn build_highest_weight(j: HalfInt) -> Result<SpinorState> {
    ensure_j(j)?;
    let m = j + HalfInt::ONE;
    let upper = ladder_k(Component::Upper, m)
        .annihilated_monomial()
        .ok_or_else(|| construction(format!("no monomial kernel for the upper raising factor at j = {j}")))?;
    let inv_root = Rational::one() / sqrt_epsilon(j);
    let lower = susy_adag_apply(j, &upper).scale(&inv_root);
    let z = SpinorState::new(j, upper, lower);

    if !jplus_apply(&z).is_zero() {
        return Err(construction(format!("J₊ does not annihilate the top state at j = {j}")));
    }
    let eps = epsilon(j);
    if spinor_hamiltonian_apply(&z)? != z.scale(&eps) {
        return Err(construction(format!("top state at j = {j} is not an H eigenstate with ε = {eps}")));
    }
    Ok(z)
}

/// The `2j + 1` degenerate states of level `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multiplet {
    j: HalfInt,
    /// Ordered by `jz` from `-j` to `j`.
    states: Vec<SpinorState>,
    epsilon: Rational,
}

impl Multiplet {
    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn states(&self) -> &[SpinorState] {
        &self.states
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn degeneracy(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, jz: HalfInt) -> Option<&SpinorState> {
        if jz.abs() > self.j {
            return None;
        }
        let idx = (jz + self.j).twice() / 2;
        self.states.get(idx as usize)
    }

    pub fn top(&self) -> &SpinorState {
        self.states.last().expect("multiplets are never empty")
    }

    pub fn bottom(&self) -> &SpinorState {
        &self.states[0]
    }

    /// `Ẽ_j = -G² / (2 ε_j)`.
    pub fn e_tilde(&self, g: f64) -> f64 {
        e_tilde(self.j, g)
    }
}

/// Highest weight, then `2j` applications of `J₋`.
///
/// Each descended state is divided by a positive rational to keep the
/// coefficients small. Positive factors leave the Condon–Shortley signs
/// (`J± Z ∝ +Z'`) intact; that is re-checked explicitly afterwards.
pub fn build_multiplet(j: HalfInt) -> Result<Multiplet> {
    let top = build_highest_weight(j)?;
    let eps = epsilon(j);
    let count = (2 * j.twice() / 2 + 1) as usize;

    let mut descending = Vec::with_capacity(count);
    descending.push(top);
    for _ in 1..count {
        let next = jminus_apply(descending.last().unwrap());
        if next.is_zero() {
            return Err(construction(format!("J₋ chain for j = {j} terminated early at jz = {}", next.jz)));
        }
        descending.push(next.normalized_content());
    }
    descending.reverse();
    let states = descending;

    if !jminus_apply(&states[0]).is_zero() {
        return Err(construction(format!("J₋ does not annihilate the bottom state of j = {j}")));
    }
    // Sign pass: every ladder step must carry a positive coefficient.
    for w in states.windows(2) {
        let (lower, upper) = (&w[0], &w[1]);
        let down = jminus_apply(upper)
            .ratio_to(lower)
            .ok_or_else(|| construction(format!("J₋ Z[{}] is not proportional to Z[{}]", upper.jz, lower.jz)))?;
        let up = jplus_apply(lower)
            .ratio_to(upper)
            .ok_or_else(|| construction(format!("J₊ Z[{}] is not proportional to Z[{}]", lower.jz, upper.jz)))?;
        if !down.is_positive() || !up.is_positive() {
            return Err(construction(format!(
                "non-positive ladder coefficient between jz = {} and {}",
                lower.jz, upper.jz
            )));
        }
    }
    for z in &states {
        if spinor_hamiltonian_apply(z)? != z.scale(&eps) {
            return Err(construction(format!("Z[j={j}, jz={}] is not an H eigenstate", z.jz)));
        }
    }
    Ok(Multiplet { j, states, epsilon: eps })
}

/// Exact per-state relations, all at zero tolerance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateChecks {
    pub jz: HalfInt,
    /// `H Z = ε Z`
    pub eigen: bool,
    /// `J² Z = j(j+1) Z`
    pub casimir: bool,
    /// `Jz Z = jz Z`
    pub jz_eigen: bool,
    /// `[J₊, J₋] Z = 2 Jz Z`, `[Jz, J±] Z = ±J± Z`
    pub commutators: bool,
    /// `J₋J₊ Z = (H - (Jz+1/2)²) Z`, `J₊J₋ Z = (H - (Jz-1/2)²) Z`
    pub products: bool,
    /// `A†Φ⁺ = ε^(1/2) Φ⁻`, `AΦ⁻ = ε^(1/2) Φ⁺`
    pub intertwining: bool,
}

impl StateChecks {
    pub fn all_pass(&self) -> bool {
        self.eigen && self.casimir && self.jz_eigen && self.commutators && self.products && self.intertwining
    }
}

fn sq(h: HalfInt) -> Rational {
    let r = h.to_rational();
    &r * &r
}

fn check_state(j: HalfInt, z: &SpinorState) -> Result<StateChecks> {
    let eps = epsilon(j);
    let jz = z.jz;
    let jz_r = jz.to_rational();
    let hz = spinor_hamiltonian_apply(z)?;
    let eigen = hz == z.scale(&eps);

    let jr = j.to_rational();
    let casimir = casimir_apply(z) == z.scale(&(&jr * (&jr + Rational::one())));
    let (label, jzz) = jz_apply(z);
    let jz_eigen = label == jz && jzz == z.scale(&jz_r);

    let up = jplus_apply(z);
    let down = jminus_apply(z);
    let pm = jplus_apply(&down);
    let mp = jminus_apply(&up);
    let two_jz = z.scale(&(&jz_r * Rational::from_integer(2.into())));
    let comm_pm = pm.sub(&mp)? == two_jz;
    // [Jz, J₊] Z = Jz (J₊ Z) - J₊ (Jz Z)
    let comm_zp = jz_apply(&up).1.sub(&jplus_apply(&jzz))? == up;
    let comm_zm = jz_apply(&down).1.sub(&jminus_apply(&jzz))? == down.scale(&-Rational::one());
    let commutators = comm_pm && comm_zp && comm_zm;

    let products = mp == hz.sub(&z.scale(&sq(jz + HalfInt::HALF)))?
        && pm == hz.sub(&z.scale(&sq(jz - HalfInt::HALF)))?;

    let root = sqrt_epsilon(j);
    let intertwining = susy_adag_apply(jz, &z.upper) == z.lower.scale(&root)
        && susy_a_apply(jz, &z.lower) == z.upper.scale(&root)
        && susy_a_apply(jz, &susy_adag_apply(jz, &z.upper)) == z.upper.scale(&eps)
        && susy_adag_apply(jz, &susy_a_apply(jz, &z.lower)) == z.lower.scale(&eps);

    Ok(StateChecks {
        jz,
        eigen,
        casimir,
        jz_eigen,
        commutators,
        products,
        intertwining,
    })
}

/// Run [`StateChecks`] on every state of `m`.
pub fn verify_multiplet(m: &Multiplet) -> Result<Vec<StateChecks>> {
    m.states.iter().map(|z| check_state(m.j, z)).collect()
}

/// `‖J₊ Z_{j,jz}‖ / ‖Z_{j,jz}‖` against `√(j(j+1) - jz(jz+1))`.
#[derive(Clone, Debug, PartialEq)]
pub struct LadderCheck {
    pub jz: HalfInt,
    pub ratio: f64,
    pub expected: f64,
    pub deviation: f64,
}

pub fn ladder_coefficient_check(m: &Multiplet) -> Result<Vec<LadderCheck>> {
    let j = m.j.to_f64();
    m.states
        .iter()
        .map(|z| {
            let ratio = jplus_apply(z).norm()? / z.norm()?;
            let jz = z.jz.to_f64();
            let expected = (j * (j + 1.0) - jz * (jz + 1.0)).sqrt();
            Ok(LadderCheck {
                jz: z.jz,
                ratio,
                expected,
                deviation: (ratio - expected).abs(),
            })
        })
        .collect()
}

/// `Ẽ_j = -G² / (2 (j + 1/2)²)`.
pub fn e_tilde(j: HalfInt, g: f64) -> f64 {
    let n = j.to_f64() + 0.5;
    -(g * g) / (2.0 * n * n)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumRow {
    pub j: HalfInt,
    pub epsilon: Rational,
    pub e_tilde: f64,
    /// `Ẽ_j + 2πk²/L²`, the longitudinal offset exactly as the source model
    /// writes it (`E = Ẽ + 2πk²/L²`).
    pub e_total: f64,
    pub degeneracy: u64,
}

/// Rows for `j = 1/2, 3/2, …, j_max`.
pub fn spectrum_table(j_max: HalfInt, g: f64, k: i64, l: f64) -> Result<Vec<SpectrumRow>> {
    ensure_j(j_max)?;
    if !(g > 0.0 && g.is_finite()) {
        return Err(Error::InvalidArgument(format!("G = {g} must be positive")));
    }
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::InvalidArgument(format!("L = {l} must be positive")));
    }
    let offset = 2.0 * PI * (k as f64) * (k as f64) / (l * l);
    Ok(HalfInt::range_inclusive(HalfInt::HALF, j_max)
        .map(|j| {
            let et = e_tilde(j, g);
            SpectrumRow {
                j,
                epsilon: epsilon(j),
                e_tilde: et,
                e_total: et + offset,
                degeneracy: (j.twice() + 1) as u64,
            }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    /// `β → 0`
    Zero,
    /// `β → π`
    Pi,
}

/// Why no zero-energy state exists in a sector.
#[derive(Clone, Debug, PartialEq)]
pub struct BrokenSusyReport {
    pub jz: HalfInt,
    /// `sin^(-jz)(β/2) cos^(jz)(β/2)`, the would-be zero mode of `H₋ = A†A`.
    pub ground_candidate: TrigPoly,
    pub annihilated_by_a: bool,
    pub normalizable: bool,
    pub divergent_endpoint: Option<Endpoint>,
    /// `sin^(jz) cos^(-jz)`, the would-be zero mode of `H₊ = AA†`.
    pub partner_candidate: TrigPoly,
    pub partner_annihilated_by_adag: bool,
    pub partner_normalizable: bool,
    /// `n` with `ε = n²` for the lowest levels of `H₊` and `H₋` in this sector.
    pub upper_levels: Vec<u64>,
    pub lower_levels: Vec<u64>,
    pub spectra_coincide: bool,
    pub has_zero_mode: bool,
}

pub fn broken_susy_report(jz: HalfInt, levels: usize) -> Result<BrokenSusyReport> {
    ensure_half_odd("jz", jz)?;
    let r1 = Rational::one();
    let ground = TrigPoly::monomial(r1.clone(), -jz, jz);
    let partner = TrigPoly::monomial(r1, jz, -jz);
    let normalizable = ground.is_normalizable();
    let divergent_endpoint = if normalizable {
        None
    } else if -jz <= -HalfInt::HALF {
        Some(Endpoint::Zero)
    } else {
        Some(Endpoint::Pi)
    };

    let sector_levels = |c: Component| -> Result<Vec<u64>> {
        let (g, d) = indicial_exponents(SectorParams::new(jz, c)?);
        let n0 = ((g + d).twice() / 4) as u64;
        Ok((0..levels as u64).map(|k| n0 + k).collect())
    };
    let upper_levels = sector_levels(Component::Upper)?;
    let lower_levels = sector_levels(Component::Lower)?;
    let spectra_coincide = upper_levels == lower_levels;
    let has_zero_mode = upper_levels.first() == Some(&0) || lower_levels.first() == Some(&0);

    Ok(BrokenSusyReport {
        jz,
        annihilated_by_a: susy_a_apply(jz, &ground).is_zero(),
        ground_candidate: ground,
        normalizable,
        divergent_endpoint,
        partner_annihilated_by_adag: susy_adag_apply(jz, &partner).is_zero(),
        partner_normalizable: partner.is_normalizable(),
        partner_candidate: partner,
        upper_levels,
        lower_levels,
        spectra_coincide,
        has_zero_mode,
    })
}

/// Kernel dimensions of `H - ε_j` per sector, from the lattice oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegeneracyAudit {
    pub j: HalfInt,
    /// `(jz, dim upper, dim lower)` for `|jz| ≤ j + 1`.
    pub sectors: Vec<(HalfInt, usize, usize)>,
}

impl DegeneracyAudit {
    /// Number of spinor states found, counting each `jz` once when both
    /// components agree.
    pub fn count(&self) -> usize {
        self.sectors.iter().map(|&(_, u, l)| u.min(l)).sum()
    }

    pub fn consistent(&self) -> bool {
        let j = self.j;
        self.sectors
            .iter()
            .all(|&(jz, u, l)| u == l && u == usize::from(jz.abs() <= j))
    }
}

/// Lattice width `2j + 4` in integer steps.
pub fn degeneracy_audit(j: HalfInt) -> Result<DegeneracyAudit> {
    ensure_j(j)?;
    let eps = epsilon(j);
    let width = j.twice() + 4;
    let edge = j + HalfInt::ONE;
    let mut sectors = Vec::new();
    for jz in HalfInt::range_inclusive(-edge, edge) {
        let u = kernel_dimension(SectorParams::new(jz, Component::Upper)?, &eps, width);
        let l = kernel_dimension(SectorParams::new(jz, Component::Lower)?, &eps, width);
        sectors.push((jz, u, l));
    }
    Ok(DegeneracyAudit { j, sectors })
}

/// `|⟨Z, Z'⟩|` for equal `jz` and `j ≠ j'`.
pub fn cross_overlap(a: &SpinorState, b: &SpinorState) -> Result<f64> {
    if a.jz != b.jz {
        return Err(Error::InvalidArgument("overlaps are only defined within one jz sector".into()));
    }
    Ok(a.inner_product(b)?.abs() / (a.norm()? * b.norm()?))
}
