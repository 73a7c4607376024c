//! Uniqueness oracle: exact kernel of `H - ε` on a truncated exponent lattice.
//!
//! Written with `1 = s² + c²` folded in, the partner Hamiltonian maps
//! `s^a c^b` into `{s^(a-2) c^(b+2), s^a c^b, s^(a+2) c^(b-2)}`, so it keeps
//! `a + b` and the parity of `a - γ` fixed. Each such chain is an invariant
//! subspace on which `H - ε` is an exact tridiagonal rational matrix. The
//! coefficients are derived here independently of [`crate::operators`].

use num_traits::{One, Zero};

use crate::operators::{potential_coefficients, SectorParams};
use crate::trigring::{rat, HalfInt, Rational};

use super::indicial_exponents;

/// Dimension of `ker(H - ε)` restricted to functions
/// `s^γ c^δ · (homogeneous polynomial in s, c of degree ≤ width)`, where
/// `(γ, δ)` are the normalizable endpoint exponents of the sector.
pub fn kernel_dimension(params: SectorParams, epsilon: &Rational, width: i64) -> usize {
    assert!(width >= 1);
    let (gamma, delta) = indicial_exponents(params);
    let (cs, cc) = potential_coefficients(params);
    let mut dim = 0;
    // Lower degrees embed in these via (s² + c²)^k; the two top degrees
    // and two parities give independent chains.
    for sigma in [width - 1, width] {
        for parity in 0..2 {
            let cols: Vec<i64> = (parity..=sigma).step_by(2).collect();
            if cols.is_empty() {
                continue;
            }
            let m = chain_matrix(gamma, delta, sigma, &cols, &cs, &cc, epsilon);
            dim += cols.len() - rank(m);
        }
    }
    dim
}

/// Rows: output powers `i' = i - 2 .. i + 2` of `s^(γ+i') c^(δ+σ-i')`.
fn chain_matrix(
    gamma: HalfInt,
    delta: HalfInt,
    sigma: i64,
    cols: &[i64],
    cs: &Rational,
    cc: &Rational,
    epsilon: &Rational,
) -> Vec<Vec<Rational>> {
    let lo = cols[0] - 2;
    let hi = cols[cols.len() - 1] + 2;
    let nrows = ((hi - lo) / 2 + 1) as usize;
    let mut m = vec![vec![Rational::zero(); cols.len()]; nrows];
    let quarter = rat(1, 4);
    for (ci, &i) in cols.iter().enumerate() {
        let a = (gamma + HalfInt::from_int(i)).to_rational();
        let b = (delta + HalfInt::from_int(sigma - i)).to_rational();
        let one = Rational::one();
        let down = cs - &quarter * &a * (&a - &one);
        let diag = &quarter * (&a * (&b + &one) + &b * (&a + &one)) + cs + cc - epsilon;
        let up = cc - &quarter * &b * (&b - &one);
        let row = |ip: i64| ((ip - lo) / 2) as usize;
        m[row(i - 2)][ci] += down;
        m[row(i)][ci] += diag;
        m[row(i + 2)][ci] += up;
    }
    m
}

/// Exact rank by Gaussian elimination.
fn rank(mut m: Vec<Vec<Rational>>) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in (r + 1)..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &pivot;
            let (top, rest) = m.split_at_mut(i);
            for (x, p) in rest[0][c..].iter_mut().zip(&top[r][c..]) {
                *x -= &f * p;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}
