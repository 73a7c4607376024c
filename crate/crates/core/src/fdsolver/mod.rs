//! Finite-difference cross-check of the sector spectra.
//!
//! `A = d/dβ + W` is discretized as a bidiagonal map from primal nodes
//! `β_i = ih` to dual nodes `β_{r+1/2}`, and `H₋ = BᵀB`, `H₊ = BBᵀ` are
//! formed from it, so both are symmetric and positive semidefinite and
//! share their nonzero spectrum exactly in exact arithmetic.
//!
//! Two stencils are available:
//!
//! * [`Stencil::Plain`]: `(f_{i+1} - f_i)/h + W (f_i + f_{i+1})/2` with
//!   Dirichlet ends.
//! * [`Stencil::Weighted`] (default): the same stencil applied to
//!   `g = f/ω`, `ω = s^γ c^δ` the lower-sector endpoint behaviour, with
//!   lumped masses `M_i = ∫_cell ω²`. At an end with `γ = 1/2` or `δ = 1/2`
//!   the boundary node is kept as an unknown. This removes the
//!   `-1/(4β²)` endpoint singularity from the discrete problem and gives
//!   second-order convergence, whereas the plain stencil converges only
//!   logarithmically in sectors with `|jz| = 1/2`.

mod tridiag;

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::multiplets::{build_multiplet, indicial_exponents};
use crate::operators::{ensure_half_odd, Component, SectorParams};
use crate::trigring::{rat, HalfInt};

pub use tridiag::TridiagonalSym;

/// Uniform grid on `[0, π]` with `n` interior primal nodes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    n: usize,
    h: f64,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 {
            return Err(Error::InvalidArgument(format!("grid needs n ≥ 8 interior nodes, got {n}")));
        }
        Ok(Grid { n, h: PI / (n as f64 + 1.0) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// `β_i = i h`, `i = 0..=n+1`.
    pub fn primal(&self, i: usize) -> f64 {
        i as f64 * self.h
    }

    /// `β_{r+1/2}`, `r = 0..=n`.
    pub fn dual(&self, r: usize) -> f64 {
        (r as f64 + 0.5) * self.h
    }
}

/// `H₊` (upper component, dual grid) or `H₋` (lower component, primal grid).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn component(self) -> Component {
        match self {
            Sign::Plus => Component::Upper,
            Sign::Minus => Component::Lower,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Stencil {
    Plain,
    #[default]
    Weighted,
}

/// Bidiagonal discrete `A`: row `r` (dual node `r + 1/2`) touches primal
/// nodes `r` and `r + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteA {
    grid: Grid,
    /// Primal index of column 0.
    first_node: usize,
    cols: usize,
    /// Coefficient on node `r`, if that node is an unknown.
    left: Vec<Option<f64>>,
    /// Coefficient on node `r + 1`, if that node is an unknown.
    right: Vec<Option<f64>>,
    /// `√M_i` per column.
    mass_sqrt: Vec<f64>,
    /// `(γ, δ)` of the weight `ω`; zero for the plain stencil.
    weight: (f64, f64),
}

const GL8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (-0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
];

fn omega(beta: f64, (g, d): (f64, f64)) -> f64 {
    (beta / 2.0).sin().powf(g) * (beta / 2.0).cos().powf(d)
}

fn cell_mass(a: f64, b: f64, w: (f64, f64)) -> f64 {
    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
    GL8.iter().map(|&(x, wt)| wt * omega(mid + half * x, w).powi(2)).sum::<f64>() * half
}

pub fn discretize_a(jz: HalfInt, grid: Grid, stencil: Stencil) -> Result<DiscreteA> {
    ensure_half_odd("jz", jz)?;
    let n = grid.n;
    let h = grid.h;
    let jzf = jz.to_f64();
    let (weight, keep_left, keep_right) = match stencil {
        Stencil::Plain => ((0.0, 0.0), false, false),
        Stencil::Weighted => {
            let (g, d) = indicial_exponents(SectorParams::new(jz, Component::Lower)?);
            ((g.to_f64(), d.to_f64()), g == HalfInt::HALF, d == HalfInt::HALF)
        }
    };
    let first_node = if keep_left { 0 } else { 1 };
    let last_node = if keep_right { n + 1 } else { n };
    let cols = last_node - first_node + 1;

    let mass_sqrt: Vec<f64> = (first_node..=last_node)
        .map(|i| match stencil {
            Stencil::Plain => h.sqrt(),
            Stencil::Weighted => {
                let a = (grid.primal(i) - h / 2.0).max(0.0);
                let b = (grid.primal(i) + h / 2.0).min(PI);
                cell_mass(a, b, weight).sqrt()
            }
        })
        .collect();

    let (g, d) = weight;
    let mut left = Vec::with_capacity(n + 1);
    let mut right = Vec::with_capacity(n + 1);
    for r in 0..=n {
        let beta = grid.dual(r);
        let t = (beta / 2.0).tan();
        let u = (g / 2.0) / t - (d / 2.0) * t + jzf / beta.sin();
        let scale = h.sqrt() * omega(beta, weight);
        let entry = |node: usize, c: f64| {
            (node >= first_node && node <= last_node).then(|| scale * c / mass_sqrt[node - first_node])
        };
        left.push(entry(r, -1.0 / h + u / 2.0));
        right.push(entry(r + 1, 1.0 / h + u / 2.0));
    }
    Ok(DiscreteA {
        grid,
        first_node,
        cols,
        left,
        right,
        mass_sqrt,
        weight,
    })
}

impl DiscreteA {
    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn rows(&self) -> usize {
        self.left.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Primal node index of each column.
    pub fn col_nodes(&self) -> std::ops::Range<usize> {
        self.first_node..self.first_node + self.cols
    }

    fn col(&self, node: usize) -> usize {
        node - self.first_node
    }

    /// Entry `(row, col)`, zero off the two bands.
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        let node = col + self.first_node;
        if node == row {
            self.left[row].unwrap_or(0.0)
        } else if node == row + 1 {
            self.right[row].unwrap_or(0.0)
        } else {
            0.0
        }
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("A expects {} entries, got {}", self.cols, v.len())));
        }
        Ok((0..self.rows())
            .map(|r| {
                let mut y = 0.0;
                if let Some(a) = self.left[r] {
                    y += a * v[self.col(r)];
                }
                if let Some(b) = self.right[r] {
                    y += b * v[self.col(r + 1)];
                }
                y
            })
            .collect())
    }

    pub fn apply_transpose(&self, u: &[f64]) -> Result<Vec<f64>> {
        if u.len() != self.rows() {
            return Err(Error::Dimension(format!("Aᵀ expects {} entries, got {}", self.rows(), u.len())));
        }
        let mut v = vec![0.0; self.cols];
        for (r, &ur) in u.iter().enumerate() {
            if let Some(a) = self.left[r] {
                v[self.col(r)] += a * ur;
            }
            if let Some(b) = self.right[r] {
                v[self.col(r + 1)] += b * ur;
            }
        }
        Ok(v)
    }

    /// `H₋ = BᵀB` or `H₊ = BBᵀ`.
    pub fn hamiltonian(&self, sign: Sign) -> TridiagonalSym {
        let sq = |x: Option<f64>| x.map_or(0.0, |v| v * v);
        match sign {
            Sign::Plus => {
                let diag = (0..self.rows()).map(|r| sq(self.left[r]) + sq(self.right[r])).collect();
                let off = (0..self.rows() - 1)
                    .map(|r| self.right[r].unwrap_or(0.0) * self.left[r + 1].unwrap_or(0.0))
                    .collect();
                TridiagonalSym { diag, off }
            }
            Sign::Minus => {
                let mut diag = vec![0.0; self.cols];
                let mut off = vec![0.0; self.cols - 1];
                for r in 0..self.rows() {
                    if let Some(a) = self.left[r] {
                        diag[self.col(r)] += a * a;
                    }
                    if let Some(b) = self.right[r] {
                        diag[self.col(r + 1)] += b * b;
                    }
                    if let (Some(a), Some(b)) = (self.left[r], self.right[r]) {
                        off[self.col(r)] = a * b;
                    }
                }
                TridiagonalSym { diag, off }
            }
        }
    }

    /// Zero eigenvalues forced by the shape of `B`, not by the physics.
    pub fn structural_zero_modes(&self, sign: Sign) -> usize {
        let (rows, cols) = (self.rows(), self.cols);
        match sign {
            Sign::Plus => rows.saturating_sub(cols),
            Sign::Minus => cols.saturating_sub(rows),
        }
    }
}

pub fn assemble_h(jz: HalfInt, sign: Sign, grid: Grid, stencil: Stencil) -> Result<TridiagonalSym> {
    Ok(discretize_a(jz, grid, stencil)?.hamiltonian(sign))
}

/// Lowest `levels` physical eigenvalues of `H±`, structural zero modes removed.
pub fn sector_levels(jz: HalfInt, sign: Sign, grid: Grid, stencil: Stencil, levels: usize) -> Result<Vec<f64>> {
    let a = discretize_a(jz, grid, stencil)?;
    let skip = a.structural_zero_modes(sign);
    let h = a.hamiltonian(sign);
    let ev = h.eigen_lowest(levels + skip)?;
    Ok(ev[skip..].to_vec())
}

/// `(|jz| + 1/2 + level)²`.
pub fn exact_level(jz: HalfInt, level: usize) -> f64 {
    let n = jz.abs().to_f64() + 0.5 + level as f64;
    n * n
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub level: usize,
    pub eigenvalue: f64,
    pub error: f64,
    /// `log(e_prev / e) / log(h_prev / h)`; absent for the first grid.
    pub order: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceStudy {
    pub jz: HalfInt,
    pub sign: Sign,
    pub stencil: Stencil,
    pub ns: Vec<usize>,
    pub exact: Vec<f64>,
    pub rows: Vec<ConvergenceRow>,
    /// Per level, from the last three grids.
    pub observed_order: Vec<Option<f64>>,
    pub extrapolated: Vec<f64>,
    /// Per level: `|error|` strictly decreasing along `ns`.
    pub monotone: Vec<bool>,
}

impl ConvergenceStudy {
    pub fn eigenvalues(&self, n: usize) -> Vec<f64> {
        self.rows.iter().filter(|r| r.n == n).map(|r| r.eigenvalue).collect()
    }

    pub fn all_monotone(&self) -> bool {
        self.monotone.iter().all(|&m| m)
    }
}

/// Richardson step from three values on grids refined by `ratio`.
/// Returns `(order, limit)`; falls back to the finest value when the
/// differences do not contract.
pub fn richardson(l1: f64, l2: f64, l3: f64, ratio: f64) -> (Option<f64>, f64) {
    let (d1, d2) = (l1 - l2, l2 - l3);
    if d2 == 0.0 {
        return (None, l3);
    }
    let q = d1 / d2;
    if q.partial_cmp(&1.0) != Some(std::cmp::Ordering::Greater) || !q.is_finite() {
        return (None, l3);
    }
    let p = q.ln() / ratio.ln();
    (Some(p), l3 - d2 / (ratio.powf(p) - 1.0))
}

pub fn convergence_study(
    jz: HalfInt,
    sign: Sign,
    levels: usize,
    ns: &[usize],
    stencil: Stencil,
) -> Result<ConvergenceStudy> {
    ensure_half_odd("jz", jz)?;
    if ns.len() < 3 || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("n list must be strictly ascending with at least 3 entries".into()));
    }
    if levels == 0 {
        return Err(Error::InvalidArgument("levels must be positive".into()));
    }
    let grids = ns.iter().map(|&n| Grid::new(n)).collect::<Result<Vec<_>>>()?;
    let values = grids
        .par_iter()
        .map(|&g| sector_levels(jz, sign, g, stencil, levels))
        .collect::<Result<Vec<_>>>()?;
    let exact: Vec<f64> = (0..levels).map(|l| exact_level(jz, l)).collect();

    let mut rows = Vec::new();
    for (gi, g) in grids.iter().enumerate() {
        for l in 0..levels {
            let e = values[gi][l] - exact[l];
            let order = (gi > 0).then(|| {
                let e0 = values[gi - 1][l] - exact[l];
                (e0.abs() / e.abs()).ln() / (grids[gi - 1].h / g.h).ln()
            });
            rows.push(ConvergenceRow {
                n: g.n,
                level: l,
                eigenvalue: values[gi][l],
                error: e,
                order,
            });
        }
    }
    let k = grids.len();
    let ratio = grids[k - 2].h / grids[k - 1].h;
    let mut observed_order = Vec::new();
    let mut extrapolated = Vec::new();
    let mut monotone = Vec::new();
    for l in 0..levels {
        let (p, lim) = richardson(values[k - 3][l], values[k - 2][l], values[k - 1][l], ratio);
        observed_order.push(p);
        extrapolated.push(lim);
        monotone.push(values.windows(2).all(|w| (w[1][l] - exact[l]).abs() < (w[0][l] - exact[l]).abs()));
    }
    Ok(ConvergenceStudy {
        jz,
        sign,
        stencil,
        ns: ns.to_vec(),
        exact,
        rows,
        observed_order,
        extrapolated,
        monotone,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactComparison {
    pub rayleigh: f64,
    /// Distance between the unit sampled state and the matching discrete
    /// eigenvector.
    pub l2_diff: f64,
    pub exact: f64,
    pub discrete: f64,
}

/// Samples component `sign` of `Z_{j,jz}` on the grid, normalized in the
/// discrete inner product matching `H±`.
pub fn sample_exact(jz: HalfInt, sign: Sign, j: HalfInt, grid: Grid, stencil: Stencil) -> Result<Vec<f64>> {
    if jz.abs() > j {
        return Err(Error::InvalidArgument(format!("no state with jz = {jz} in the j = {j} multiplet")));
    }
    let m = build_multiplet(j)?;
    let z = m.state(jz).ok_or_else(|| Error::InvalidArgument(format!("jz = {jz} not in multiplet")))?;
    let f = z.component(sign.component());
    let a = discretize_a(jz, grid, stencil)?;
    let h = grid.h;
    let mut v = match sign {
        Sign::Plus => (0..a.rows()).map(|r| Ok(h.sqrt() * f.eval_at(grid.dual(r))?)).collect::<Result<Vec<_>>>()?,
        Sign::Minus => {
            let (g, d) = a.weight;
            let to_half = |x: f64| HalfInt::from_twice((2.0 * x).round() as i64);
            let reduced = f.mul_monomial(-to_half(g), -to_half(d), &rat(1, 1));
            a.col_nodes()
                .zip(&a.mass_sqrt)
                .map(|(i, ms)| Ok(ms * reduced.eval_at(grid.primal(i))?))
                .collect::<Result<Vec<_>>>()?
        }
    };
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::Construction(format!("component {sign:?} of Z[{j},{jz}] vanishes on the grid")));
    }
    v.iter_mut().for_each(|x| *x /= norm);
    Ok(v)
}

pub fn compare_with_exact(jz: HalfInt, sign: Sign, j: HalfInt, grid: Grid, stencil: Stencil) -> Result<ExactComparison> {
    let v = sample_exact(jz, sign, j, grid, stencil)?;
    let a = discretize_a(jz, grid, stencil)?;
    let h = a.hamiltonian(sign);
    let hv = h.apply(&v);
    let rayleigh: f64 = hv.iter().zip(&v).map(|(x, y)| x * y).sum();
    let level = ((j - jz.abs()).twice() / 2) as usize;
    let discrete = h.eigenvalue(a.structural_zero_modes(sign) + level)?;
    let mut x = h.eigenvector(discrete);
    let dot: f64 = x.iter().zip(&v).map(|(a, b)| a * b).sum();
    if dot < 0.0 {
        x.iter_mut().for_each(|t| *t = -*t);
    }
    let l2_diff = x.iter().zip(&v).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let jf = j.to_f64() + 0.5;
    Ok(ExactComparison {
        rayleigh,
        l2_diff,
        exact: jf * jf,
        discrete,
    })
}

/// Largest relative mismatch between the nonzero spectra of `H₊` and `H₋`
/// over their lowest `levels` modes.
pub fn isospectrality_gap(jz: HalfInt, grid: Grid, stencil: Stencil, levels: usize) -> Result<f64> {
    let plus = sector_levels(jz, Sign::Plus, grid, stencil, levels)?;
    let minus = sector_levels(jz, Sign::Minus, grid, stencil, levels)?;
    Ok(plus
        .iter()
        .zip(&minus)
        .map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()))
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn grid_basics() {
        assert!(Grid::new(4).is_err());
        let g = Grid::new(8).unwrap();
        assert!((g.h() - PI / 9.0).abs() < 1e-15);
        assert!((g.dual(4) - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn plain_row_at_midpoint_uses_jz() {
        // n = 8: dual node r = 4 sits at π/2, where W = jz.
        let g = Grid::new(8).unwrap();
        let a = discretize_a(h(3), g, Stencil::Plain).unwrap();
        let hh = g.h();
        assert!((g.dual(4) - PI / 2.0).abs() < 1e-15);
        // plain columns are nodes 1..=n, so node r is column r - 1
        assert!((a.entry(4, 3) - (-1.0 / hh + 0.75)).abs() < 1e-12);
        assert!((a.entry(4, 4) - (1.0 / hh + 0.75)).abs() < 1e-12);
        assert_eq!(a.apply(&vec![0.0; a.cols()]).unwrap(), vec![0.0; a.rows()]);
        assert!(discretize_a(h(2), g, Stencil::Plain).is_err());
    }

    #[test]
    fn hamiltonians_are_gram_matrices() {
        let g = Grid::new(20).unwrap();
        for st in [Stencil::Plain, Stencil::Weighted] {
            for jz in [h(1), h(-1), h(3)] {
                let a = discretize_a(jz, g, st).unwrap();
                for sign in [Sign::Plus, Sign::Minus] {
                    let hm = a.hamiltonian(sign);
                    let dim = hm.dim();
                    for k in 0..dim {
                        let mut e = vec![0.0; dim];
                        e[k] = 1.0;
                        let dense = match sign {
                            Sign::Minus => a.apply_transpose(&a.apply(&e).unwrap()).unwrap(),
                            Sign::Plus => a.apply(&a.apply_transpose(&e).unwrap()).unwrap(),
                        };
                        let col = hm.apply(&e);
                        for (x, y) in dense.iter().zip(&col) {
                            assert!((x - y).abs() <= 1e-12 * hm.norm_inf());
                        }
                    }
                    let low = hm.eigenvalue(0).unwrap();
                    assert!(low >= -1e-12 * hm.norm_inf(), "{low}");
                }
            }
        }
    }

    #[test]
    fn mirror_symmetry() {
        let g = Grid::new(64).unwrap();
        for st in [Stencil::Plain, Stencil::Weighted] {
            for t in [1, 3] {
                let a = sector_levels(h(t), Sign::Minus, g, st, 3).unwrap();
                let b = sector_levels(h(-t), Sign::Minus, g, st, 3).unwrap();
                for (x, y) in a.iter().zip(&b) {
                    assert!((x - y).abs() < 1e-9 * x.abs().max(1.0), "{x} {y}");
                }
            }
        }
    }

    #[test]
    fn isospectral_partners() {
        let g = Grid::new(256).unwrap();
        for st in [Stencil::Plain, Stencil::Weighted] {
            for t in [1, -1, 3] {
                let gap = isospectrality_gap(h(t), g, st, 4).unwrap();
                assert!(gap < 1e-10, "{st:?} jz={t}/2: {gap}");
            }
        }
    }

    #[test]
    fn weighted_levels_at_moderate_n() {
        let g = Grid::new(512).unwrap();
        let ev = sector_levels(h(1), Sign::Minus, g, Stencil::Weighted, 3).unwrap();
        for (e, x) in ev.iter().zip([1.0, 4.0, 9.0]) {
            assert!((e - x).abs() < 1e-2 * x, "{ev:?}");
        }
        let ev = sector_levels(h(3), Sign::Plus, g, Stencil::Weighted, 2).unwrap();
        assert!((ev[0] - 4.0).abs() < 1e-2, "{ev:?}");
    }

    #[test]
    fn study_validation() {
        assert!(convergence_study(h(1), Sign::Minus, 2, &[64, 32, 128], Stencil::Weighted).is_err());
        assert!(convergence_study(h(1), Sign::Minus, 2, &[64, 128], Stencil::Weighted).is_err());
        let s = convergence_study(h(1), Sign::Minus, 2, &[64, 128, 256], Stencil::Weighted).unwrap();
        assert_eq!(s.rows.len(), 6);
        assert!(s.all_monotone());
        let p = s.observed_order[0].unwrap();
        assert!((p - 2.0).abs() < 0.3, "{p}");
    }

    #[test]
    fn richardson_on_model_sequence() {
        let f = |hh: f64| 3.0 + 0.5 * hh * hh;
        let (p, lim) = richardson(f(0.4), f(0.2), f(0.1), 2.0);
        assert!((p.unwrap() - 2.0).abs() < 1e-9);
        assert!((lim - 3.0).abs() < 1e-12);
        assert_eq!(richardson(1.0, 1.0, 1.0, 2.0), (None, 1.0));
    }

    #[test]
    fn exact_states_on_the_grid() {
        for st in [Stencil::Weighted, Stencil::Plain] {
            let mut last = f64::INFINITY;
            for n in [128, 256, 512] {
                let g = Grid::new(n).unwrap();
                let c = compare_with_exact(h(1), Sign::Plus, h(1), g, st).unwrap();
                assert!((c.rayleigh - 1.0).abs() < 0.1, "{st:?} {c:?}");
                assert!(c.l2_diff < last, "{st:?} {n} {c:?}");
                last = c.l2_diff;
            }
        }
        let g = Grid::new(512).unwrap();
        let c = compare_with_exact(h(1), Sign::Minus, h(3), g, Stencil::Weighted).unwrap();
        assert!((c.rayleigh - 4.0).abs() < 2e-2, "{c:?}");
        assert!(compare_with_exact(h(3), Sign::Minus, h(1), g, Stencil::Weighted).is_err());
    }
}
