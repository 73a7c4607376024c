//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::time::Instant;

use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use su2n_core::fdsolver::{self, convergence_study, isospectrality_gap, Grid, Sign, Stencil};
use su2n_core::multiplets::{
    broken_susy_report, build_multiplet, ladder_coefficient_check, spectrum_table, verify_multiplet,
};
use su2n_core::operators::{
    casimir_apply, check_factorization, jminus_apply, jplus_apply, jz_apply, random_poly, spinor_hamiltonian_apply,
    Component, SectorParams,
};
use su2n_core::transforms::{
    coupled_residual, hankel_at, hankel_roundtrip_error, log_grid, momentum_spinor, test_suite, HankelOptions,
};
use su2n_core::{HalfInt, Rational};

type Outcome = Result<String, String>;

fn h(t: i64) -> HalfInt {
    HalfInt::from_twice(t)
}

fn js(max_twice: i64) -> impl Iterator<Item = HalfInt> {
    (1..=max_twice).step_by(2).map(h)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exact_multiplets() -> Outcome {
    let t0 = Instant::now();
    for j in js(9) {
        let m = build_multiplet(j).map_err(|e| e.to_string())?;
        let eps = (j + HalfInt::HALF).to_rational().pow(2);
        let jr = j.to_rational();
        let cas = &jr * (&jr + Rational::one());
        ensure(m.degeneracy() as i64 == j.twice() + 1, || format!("j={j}: {} states", m.degeneracy()))?;
        for z in m.states() {
            let hz = spinor_hamiltonian_apply(z).map_err(|e| e.to_string())?;
            ensure(hz == z.scale(&eps), || format!("HZ ≠ εZ at j={j}, jz={}", z.jz))?;
            ensure(casimir_apply(z) == z.scale(&cas), || format!("J² at j={j}, jz={}", z.jz))?;
            ensure(jz_apply(z).1 == z.scale(&z.jz.to_rational()), || format!("Jz at j={j}, jz={}", z.jz))?;
        }
        ensure(jplus_apply(m.top()).is_zero(), || format!("J₊ top at j={j}"))?;
        ensure(jminus_apply(m.bottom()).is_zero(), || format!("J₋ bottom at j={j}"))?;
    }
    let dt = t0.elapsed().as_secs_f64();
    ensure(dt <= 10.0, || format!("took {dt:.2} s"))?;
    Ok(format!("j = 1/2..9/2, {dt:.2} s"))
}

fn algebra() -> Outcome {
    let mut states = 0;
    for j in js(9) {
        let m = build_multiplet(j).map_err(|e| e.to_string())?;
        for c in verify_multiplet(&m).map_err(|e| e.to_string())? {
            ensure(c.commutators && c.products, || format!("j={j}, jz={}: {c:?}", c.jz))?;
            states += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut polys = 0;
    for jz in [-5, -3, -1, 1, 3, 5].map(h) {
        for _ in 0..20 {
            let p = random_poly(&mut rng, 4, 9);
            for c in [Component::Upper, Component::Lower] {
                let params = SectorParams::new(jz, c).map_err(|e| e.to_string())?;
                check_factorization(params, &p).map_err(|e| e.to_string())?;
            }
            polys += 1;
        }
    }
    Ok(format!("{states} states, {polys} random elements × 2 components"))
}

fn ladder_norms() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for j in js(7) {
        let m = build_multiplet(j).map_err(|e| e.to_string())?;
        for c in ladder_coefficient_check(&m).map_err(|e| e.to_string())? {
            worst = worst.max(c.deviation);
            count += 1;
        }
    }
    ensure(worst <= 1e-10, || format!("max deviation {worst:e}"))?;
    Ok(format!("{count} ratios, max deviation {worst:.1e}"))
}

fn spectrum() -> Outcome {
    let mut worst: f64 = 0.0;
    for g in [0.5, 1.0, 2.0] {
        let rows = spectrum_table(h(9), g, 0, 1.0).map_err(|e| e.to_string())?;
        ensure(rows.len() == 5, || format!("{} rows", rows.len()))?;
        for (k, row) in rows.iter().enumerate() {
            let n = k as i64 + 1;
            ensure(row.epsilon == Rational::from_integer((n * n).into()), || {
                format!("ε at j={} is {}", row.j, row.epsilon)
            })?;
            let expected = -(g * g) / (2.0 * (n * n) as f64);
            worst = worst.max(((row.e_tilde - expected) / expected).abs());
            ensure(row.degeneracy as i64 == 2 * n, || format!("degeneracy at j={}", row.j))?;
        }
    }
    ensure(worst <= 1e-15, || format!("max relative error {worst:e}"))?;
    Ok(format!("max relative Ẽ error {worst:.1e}"))
}

fn broken_susy() -> Outcome {
    for t in (-9..=9).step_by(2) {
        let r = broken_susy_report(h(t), 3).map_err(|e| e.to_string())?;
        ensure(!r.normalizable && r.annihilated_by_a, || format!("zero-mode candidate at jz={}/2", t))?;
        ensure(!r.has_zero_mode && r.spectra_coincide, || format!("sector levels at jz={t}/2"))?;
    }
    let grid = Grid::new(1024).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for st in [Stencil::Weighted, Stencil::Plain] {
        for jz in [h(1), h(3)] {
            worst = worst.max(isospectrality_gap(jz, grid, st, 6).map_err(|e| e.to_string())?);
        }
    }
    ensure(worst <= 1e-10, || format!("H₊/H₋ gap {worst:e}"))?;
    Ok(format!("no normalizable zero mode for |jz| ≤ 9/2; H₊/H₋ gap {worst:.1e} at n = 1024"))
}

fn fd_cross_check() -> Outcome {
    let t0 = Instant::now();
    let ns = [512, 1024, 2048, 4096];
    let s = convergence_study(h(1), Sign::Minus, 3, &ns, Stencil::Weighted).map_err(|e| e.to_string())?;
    for (l, (x, target)) in s.extrapolated.iter().zip([1.0, 4.0, 9.0]).enumerate() {
        ensure((x - target).abs() <= 1e-2, || format!("jz=1/2 level {l}: {x}"))?;
    }
    let s3 = convergence_study(h(3), Sign::Minus, 1, &ns, Stencil::Weighted).map_err(|e| e.to_string())?;
    ensure((s3.extrapolated[0] - 4.0).abs() <= 1e-2, || format!("jz=3/2 lowest: {}", s3.extrapolated[0]))?;
    for &n in &ns {
        let grid = Grid::new(n).map_err(|e| e.to_string())?;
        for sign in [Sign::Minus, Sign::Plus] {
            let hm = fdsolver::assemble_h(h(3), sign, grid, Stencil::Weighted).map_err(|e| e.to_string())?;
            let near_one = hm.sturm_count(1.5) - hm.sturm_count(0.5);
            ensure(near_one == 0, || format!("jz=3/2 {sign:?} n={n}: {near_one} eigenvalues in (0.5, 1.5)"))?;
        }
    }
    let dt = t0.elapsed().as_secs_f64();
    ensure(dt <= 60.0, || format!("took {dt:.1} s"))?;
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(", ");
    Ok(format!(
        "jz=1/2: [{}], jz=3/2: {:.6}, {dt:.1} s",
        fmt(&s.extrapolated),
        s3.extrapolated[0]
    ))
}

fn transforms() -> Outcome {
    let mut worst_res: f64 = 0.0;
    for j in js(5) {
        let m = build_multiplet(j).map_err(|e| e.to_string())?;
        for z in m.states() {
            for g in [0.5, 1.0, 2.0] {
                let ms = momentum_spinor(z, j, g, 401).map_err(|e| e.to_string())?;
                let (r1, r2) = coupled_residual(&ms, g).map_err(|e| e.to_string())?;
                worst_res = worst_res.max(r1).max(r2);
            }
        }
    }
    ensure(worst_res <= 1e-10, || format!("coupled residual {worst_res:e}"))?;

    let opts = HankelOptions::default();
    let rt_opts = HankelOptions { tol: 1e-10, ..opts };
    let grid: Vec<f64> = (1..=12).map(|i| 0.25 * i as f64).collect();
    let mut worst_rt: f64 = 0.0;
    for nu in 0..3 {
        for (name, f) in test_suite(nu) {
            let e = hankel_roundtrip_error(f.as_ref(), nu, &grid, rt_opts).map_err(|e| format!("{name}: {e}"))?;
            ensure(e <= 1e-6, || format!("roundtrip {name}, ν={nu}: {e:e}"))?;
            worst_rt = worst_rt.max(e);
        }
    }

    let mut worst_exp: f64 = 0.0;
    for p in log_grid(1e-2, 20.0, 25) {
        let g = hankel_at(&|r: f64| (-r).exp(), 0, p, opts).map_err(|e| e.to_string())?;
        let exact = (1.0 + p * p).powf(-1.5);
        worst_exp = worst_exp.max(((g - exact) / exact).abs());
    }
    ensure(worst_exp <= 1e-6, || format!("e^-ρ transform {worst_exp:e}"))?;
    Ok(format!(
        "residual {worst_res:.1e}, roundtrip {worst_rt:.1e}, e^-ρ {worst_exp:.1e}"
    ))
}

type Check = fn() -> Outcome;

fn main() {
    let criteria: [(&str, Check); 7] = [
        ("exact multiplets", exact_multiplets),
        ("algebra", algebra),
        ("ladder coefficients", ladder_norms),
        ("spectrum table", spectrum),
        ("broken supersymmetry", broken_susy),
        ("finite-difference cross-check", fd_cross_check),
        ("momentum transforms", transforms),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
