//! From `β` back to momentum space, and on to configuration space.
//!
//! With `κ = √(-2Ẽ)`, `p = κ tan(β/2)` and `α(p) = p²/2 - Ẽ`, a spinor
//! `Z(β)` corresponds to momentum amplitudes `F_i(p) = Z_i(β(p)) / (p^{1/2} α)`
//! which must solve
//!
//! ```text
//! (d/dp - (jz - 1/2)/p)(α F₁) + G F₂ = 0
//! (d/dp + (jz + 1/2)/p)(α F₂) - G F₁ = 0
//! ```
//!
//! Derivatives are taken exactly in the ring and pushed through
//! `dβ/dp = 2cos²(β/2)/κ`, so the residuals measure roundoff only.

mod hankel;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::multiplets::e_tilde;
use crate::operators::{ensure_half_odd, Component, SpinorState};
use crate::trigring::{HalfInt, TrigPoly};

pub use hankel::{
    bessel_j, gaussian_transform, hankel, hankel_at, hankel_roundtrip_error, test_suite, HankelOptions,
    RadialFunction,
};

fn check_energy(e: f64) -> Result<f64> {
    if !(e < 0.0 && e.is_finite()) {
        return Err(Error::Domain {
            what: "E_tilde",
            value: e,
            domain: "(-inf, 0)",
        });
    }
    Ok((-2.0 * e).sqrt())
}

/// `p = tan(β/2) √(-2Ẽ)`.
pub fn beta_to_p(beta: f64, e_tilde: f64) -> Result<f64> {
    let kappa = check_energy(e_tilde)?;
    if !(beta > 0.0 && beta < std::f64::consts::PI) {
        return Err(Error::Domain {
            what: "beta",
            value: beta,
            domain: "(0, pi)",
        });
    }
    Ok(kappa * (beta / 2.0).tan())
}

/// Inverse of [`beta_to_p`].
pub fn p_to_beta(p: f64, e_tilde: f64) -> Result<f64> {
    let kappa = check_energy(e_tilde)?;
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::Domain {
            what: "p",
            value: p,
            domain: "(0, inf)",
        });
    }
    Ok(2.0 * (p / kappa).atan())
}

/// `count` points spaced evenly in `ln p` over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2 && lo > 0.0 && hi > lo);
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// Power of `i` as an integer mod 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PhaseTag(pub u8);

impl PhaseTag {
    /// `i^{-m}`.
    pub fn inverse_power(m: i64) -> Self {
        PhaseTag((-m).rem_euclid(4) as u8)
    }

    /// `(re, im)` of `i^k`.
    pub fn value(self) -> (i8, i8) {
        match self.0 {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        }
    }
}

/// Momentum amplitudes of one exact multiplet state on a log grid.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumSpinor {
    pub jz: HalfInt,
    pub j: HalfInt,
    pub e_tilde: f64,
    pub kappa: f64,
    pub grid: Vec<f64>,
    pub f1: Vec<f64>,
    pub f2: Vec<f64>,
    /// Angular phases `i^{-(jz - 1/2)}` and `i^{-(jz + 1/2)}`.
    pub phases: [PhaseTag; 2],
    source: SpinorState,
    scale: [f64; 2],
}

fn jz_order(jz: HalfInt, c: Component) -> i64 {
    (jz - c.sz()).as_integer().expect("jz ∓ 1/2 is an integer")
}

impl MomentumSpinor {
    pub fn alpha(&self, p: f64) -> f64 {
        p * p / 2.0 - self.e_tilde
    }

    /// The same spinor with component `c` multiplied by `factor`.
    pub fn perturbed(&self, c: Component, factor: f64) -> Self {
        let mut out = self.clone();
        match c {
            Component::Upper => {
                out.f1.iter_mut().for_each(|v| *v *= factor);
                out.scale[0] *= factor;
            }
            Component::Lower => {
                out.f2.iter_mut().for_each(|v| *v *= factor);
                out.scale[1] *= factor;
            }
        }
        out
    }

    fn poly(&self, c: Component) -> (&TrigPoly, f64) {
        match c {
            Component::Upper => (&self.source.upper, self.scale[0]),
            Component::Lower => (&self.source.lower, self.scale[1]),
        }
    }

    /// `F_i(p)` at any `p > 0`.
    pub fn eval(&self, c: Component, p: f64) -> Result<f64> {
        let (z, k) = self.poly(c);
        let beta = p_to_beta(p, self.e_tilde)?;
        Ok(k * z.eval_at(beta)? / (p.sqrt() * self.alpha(p)))
    }

    /// `(α F_i, d(α F_i)/dp)` at `p`.
    fn alpha_f_and_derivative(&self, c: Component, dz: &TrigPoly, p: f64) -> Result<(f64, f64)> {
        let (z, k) = self.poly(c);
        let beta = p_to_beta(p, self.e_tilde)?;
        let cos_half = (beta / 2.0).cos();
        let dbeta_dp = 2.0 * cos_half * cos_half / self.kappa;
        let zv = k * z.eval_at(beta)?;
        let dz = k * dz.eval_at(beta)?;
        let rs = p.sqrt();
        Ok((zv / rs, dz * dbeta_dp / rs - 0.5 * zv / (p * rs)))
    }

    /// `∫ (F₁² + F₂²) p dp` over the grid up to `p_max`, trapezoid in `ln p`.
    pub fn norm_squared_up_to(&self, p_max: f64) -> f64 {
        let mut s = 0.0;
        for i in 1..self.grid.len() {
            let (a, b) = (self.grid[i - 1], self.grid[i]);
            if b > p_max {
                break;
            }
            let w = |k: usize| (self.f1[k].powi(2) + self.f2[k].powi(2)) * self.grid[k] * self.grid[k];
            s += 0.5 * (w(i - 1) + w(i)) * (b / a).ln();
        }
        s
    }
}

/// Samples `Z` of level `j` with coupling `G` on `[1e-3, 1e3]·κ`.
pub fn momentum_spinor(z: &SpinorState, j: HalfInt, g: f64, points: usize) -> Result<MomentumSpinor> {
    ensure_half_odd("jz", z.jz)?;
    ensure_half_odd("j", j)?;
    if !(g > 0.0 && g.is_finite()) {
        return Err(Error::Domain {
            what: "G",
            value: g,
            domain: "(0, inf)",
        });
    }
    let e = e_tilde(j, g);
    let kappa = check_energy(e)?;
    let grid = log_grid(1e-3 * kappa, 1e3 * kappa, points.max(2));
    let mut m = MomentumSpinor {
        jz: z.jz,
        j,
        e_tilde: e,
        kappa,
        grid,
        f1: Vec::new(),
        f2: Vec::new(),
        phases: [
            PhaseTag::inverse_power(jz_order(z.jz, Component::Upper)),
            PhaseTag::inverse_power(jz_order(z.jz, Component::Lower)),
        ],
        source: z.clone(),
        scale: [1.0, 1.0],
    };
    m.f1 = m.grid.iter().map(|&p| m.eval(Component::Upper, p)).collect::<Result<_>>()?;
    m.f2 = m.grid.iter().map(|&p| m.eval(Component::Lower, p)).collect::<Result<_>>()?;
    Ok(m)
}

/// Relative L² residuals `(r1, r2)` of the coupled momentum system.
pub fn coupled_residual(m: &MomentumSpinor, g: f64) -> Result<(f64, f64)> {
    let jz = m.jz.to_f64();
    let d1 = m.source.upper.differentiate();
    let d2 = m.source.lower.differentiate();
    let mut acc = [0.0f64; 4];
    for (k, &p) in m.grid.iter().enumerate() {
        let (y1, dy1) = m.alpha_f_and_derivative(Component::Upper, &d1, p)?;
        let (y2, dy2) = m.alpha_f_and_derivative(Component::Lower, &d2, p)?;
        let r1 = dy1 - (jz - 0.5) / p * y1 + g * m.f2[k];
        let r2 = dy2 + (jz + 0.5) / p * y2 - g * m.f1[k];
        // weight p dp = p² d(ln p); the log spacing is uniform
        let w = p * p;
        acc[0] += w * r1 * r1;
        acc[1] += w * y1 * y1;
        acc[2] += w * r2 * r2;
        acc[3] += w * y2 * y2;
    }
    let rel = |num: f64, den: f64| if den > 0.0 { (num / den).sqrt() } else { num.sqrt() };
    Ok((rel(acc[0], acc[1]), rel(acc[2], acc[3])))
}

/// `f_i(ρ) = ∫ p F_i(p) J_{jz∓1/2}(pρ) dp` on `rho`, the radial part of the
/// configuration-space spinor (phases in [`MomentumSpinor::phases`]).
pub fn configuration_component(
    m: &MomentumSpinor,
    c: Component,
    rho: &[f64],
    opts: HankelOptions,
) -> Result<RadialFunction> {
    let order = jz_order(m.jz, c) as i32;
    let f = |p: f64| if p > 0.0 { m.eval(c, p).unwrap_or(f64::NAN) } else { 0.0 };
    let values = rho
        .par_iter()
        .map(|&r| hankel_at(&f, order, r, opts))
        .collect::<Result<Vec<_>>>()?;
    RadialFunction::new(order.abs(), rho.to_vec(), values)
}
