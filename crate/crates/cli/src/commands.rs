use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use su2n_core::fdsolver::{convergence_study, isospectrality_gap, Grid, Sign, Stencil};
use su2n_core::multiplets::{
    broken_susy_report, build_multiplet, cross_overlap, degeneracy_audit, epsilon, ladder_coefficient_check,
    spectrum_table, verify_multiplet,
};
use su2n_core::operators::{check_factorization, random_poly, Component, SectorParams};
use su2n_core::transforms::{coupled_residual, hankel_at, hankel_roundtrip_error, momentum_spinor, HankelOptions};
use su2n_core::HalfInt;

use crate::args::{Cli, Command, FdArgs, Format, MultipletArgs, SpectrumArgs, TransformArgs, VerifyArgs};
use crate::output::{fmt_f64, fmt_opt, json_f64, json_opt, json_poly, json_rational, pass_fail};
use crate::{Failure, Report};

const MOMENTUM_POINTS: usize = 401;

pub fn run(cli: &Cli) -> Result<Report, Failure> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(Failure::Usage(format!("--tol {} must be positive", cli.tol)));
    }
    match &cli.command {
        Command::Spectrum(a) => spectrum(a, cli.format.unwrap_or(Format::Csv)),
        Command::Multiplet(a) => multiplet(a, cli.format.unwrap_or(Format::Json)),
        Command::Verify(a) => verify(a, cli.format.unwrap_or(Format::Csv), cli.tol),
        Command::Fd(a) => fd(a, cli.format.unwrap_or(Format::Csv)),
        Command::Transform(a) => transform(a, cli.format.unwrap_or(Format::Csv), cli.tol),
    }
}

fn sign_name(s: Sign) -> &'static str {
    match s {
        Sign::Plus => "plus",
        Sign::Minus => "minus",
    }
}

fn stencil_name(s: Stencil) -> &'static str {
    match s {
        Stencil::Weighted => "weighted",
        Stencil::Plain => "plain",
    }
}

fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn spectrum(a: &SpectrumArgs, format: Format) -> Result<Report, Failure> {
    let rows = spectrum_table(a.jmax, a.g, a.k, a.l)?;
    let text = match format {
        Format::Csv => {
            let mut s = String::from("j,epsilon,E_tilde,E_total,degeneracy\n");
            for r in &rows {
                writeln!(s, "{},{},{},{},{}", r.j, r.epsilon, fmt_f64(r.e_tilde), fmt_f64(r.e_total), r.degeneracy)
                    .unwrap();
            }
            s
        }
        Format::Json => to_json_text(&Value::Array(
            rows.iter()
                .map(|r| {
                    json!({
                        "j": r.j.to_string(),
                        "epsilon": json_rational(&r.epsilon),
                        "E_tilde": json_f64(r.e_tilde),
                        "E_total": json_f64(r.e_total),
                        "degeneracy": r.degeneracy,
                    })
                })
                .collect(),
        )),
    };
    Ok(Report { text, passed: true })
}

fn multiplet(a: &MultipletArgs, format: Format) -> Result<Report, Failure> {
    let m = build_multiplet(a.j)?;
    let checks = verify_multiplet(&m)?;
    let ladder = ladder_coefficient_check(&m)?;
    let passed = checks.iter().all(|c| c.all_pass()) && ladder.iter().all(|l| l.deviation <= 1e-10);
    let text = match format {
        Format::Json => {
            let states: Vec<Value> = m
                .states()
                .iter()
                .zip(&checks)
                .zip(&ladder)
                .map(|((z, c), l)| {
                    json!({
                        "jz": z.jz.to_string(),
                        "upper": json_poly(&z.upper),
                        "lower": json_poly(&z.lower),
                        "checks": {
                            "eigen": pass_fail(c.eigen),
                            "casimir": pass_fail(c.casimir),
                            "jz": pass_fail(c.jz_eigen),
                            "commutators": pass_fail(c.commutators),
                            "products": pass_fail(c.products),
                            "intertwining": pass_fail(c.intertwining),
                            "ladder": pass_fail(l.deviation <= 1e-10),
                        },
                    })
                })
                .collect();
            to_json_text(&json!({
                "j": m.j().to_string(),
                "epsilon": json_rational(m.epsilon()),
                "degeneracy": m.degeneracy(),
                "states": states,
            }))
        }
        Format::Csv => {
            let mut s = String::from("jz,component,num,den,a2,b2\n");
            for z in m.states() {
                for (name, p) in [("upper", &z.upper), ("lower", &z.lower)] {
                    for t in p.terms() {
                        writeln!(s, "{},{name},{},{},{},{}", z.jz, t.coeff.numer(), t.coeff.denom(), t.a.twice(), t.b.twice())
                            .unwrap();
                    }
                }
            }
            s
        }
    };
    Ok(Report { text, passed })
}

struct Check {
    name: String,
    ok: bool,
    detail: String,
}

struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    fn push(&mut self, name: String, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name,
            ok,
            detail: detail.into(),
        });
    }

    /// Records an error from the library as a failed check.
    fn push_result(&mut self, name: String, r: Result<(bool, String), su2n_core::Error>) {
        match r {
            Ok((ok, d)) => self.push(name, ok, d),
            Err(e) => self.push(name, false, e.to_string()),
        }
    }
}

fn half_odd_upto(max: HalfInt) -> impl Iterator<Item = HalfInt> {
    HalfInt::range_inclusive(HalfInt::HALF, max)
}

fn verify(a: &VerifyArgs, format: Format, tol: f64) -> Result<Report, Failure> {
    // validate before running anything
    spectrum_table(a.jmax, a.g, 0, 1.0)?;
    let mut suite = Suite { checks: Vec::new() };
    let tol_s = format!("{tol:e}");

    for j in half_odd_upto(a.jmax) {
        let m = match build_multiplet(j) {
            Ok(m) => m,
            Err(e) => {
                suite.push(format!("multiplet[j={j}]"), false, e.to_string());
                continue;
            }
        };
        suite.push(
            format!("multiplet[j={j}]"),
            m.degeneracy() as i64 == j.twice() + 1,
            format!("states={}", m.degeneracy()),
        );
        match verify_multiplet(&m) {
            Ok(cs) => {
                type Pick = fn(&su2n_core::multiplets::StateChecks) -> bool;
                let groups: [(&str, Pick); 6] = [
                    ("eigen", |c| c.eigen),
                    ("casimir", |c| c.casimir),
                    ("jz", |c| c.jz_eigen),
                    ("commutators", |c| c.commutators),
                    ("products", |c| c.products),
                    ("intertwining", |c| c.intertwining),
                ];
                for (name, pick) in groups {
                    let bad: Vec<String> = cs.iter().filter(|c| !pick(c)).map(|c| c.jz.to_string()).collect();
                    let detail = if bad.is_empty() { "exact".to_string() } else { format!("jz={}", bad.join(";")) };
                    suite.push(format!("{name}[j={j}]"), bad.is_empty(), detail);
                }
            }
            Err(e) => suite.push(format!("states[j={j}]"), false, e.to_string()),
        }
        match ladder_coefficient_check(&m) {
            Ok(ls) => {
                for l in ls {
                    let ok = l.deviation <= tol;
                    let detail = if ok { format!("dev<{tol_s}") } else { format!("dev={:e}", l.deviation) };
                    suite.push(format!("ladder_coeff[{j},{}]", l.jz), ok, detail);
                }
            }
            Err(e) => suite.push(format!("ladder_coeff[{j}]"), false, e.to_string()),
        }
        suite.push_result(
            format!("degeneracy[j={j}]"),
            degeneracy_audit(j).map(|d| {
                (d.consistent() && d.count() as i64 == j.twice() + 1, format!("kernel states={}", d.count()))
            }),
        );
        let next = j + HalfInt::ONE;
        if next <= a.jmax {
            suite.push_result(
                format!("orthogonal[j={j},j'={next}]"),
                build_multiplet(next).and_then(|m2| {
                    let o = cross_overlap(m.top(), m2.state(j).expect("|jz| ≤ j'"))?;
                    Ok((o <= tol, format!("overlap={}", fmt_f64(o))))
                }),
            );
        }
        for z in m.states() {
            suite.push_result(
                format!("transform[j={j},jz={}]", z.jz),
                momentum_spinor(z, j, a.g, MOMENTUM_POINTS).and_then(|ms| {
                    let (r1, r2) = coupled_residual(&ms, a.g)?;
                    Ok((r1.max(r2) <= tol, format!("r1={} r2={}", fmt_f64(r1), fmt_f64(r2))))
                }),
            );
        }
    }

    match spectrum_table(a.jmax, a.g, 0, 1.0) {
        Ok(rows) => {
            for r in rows {
                let n = r.j.to_f64() + 0.5;
                let expected = -(a.g * a.g) / (2.0 * n * n);
                let ok = r.epsilon == epsilon(r.j)
                    && ((r.e_tilde - expected) / expected).abs() <= 1e-15
                    && r.degeneracy as i64 == r.j.twice() + 1;
                suite.push(format!("spectrum[j={}]", r.j), ok, format!("epsilon={} E_tilde={}", r.epsilon, fmt_f64(r.e_tilde)));
            }
        }
        Err(e) => suite.push("spectrum".into(), false, e.to_string()),
    }

    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for jz in HalfInt::range_inclusive(-a.jmax, a.jmax) {
        let mut failures = 0;
        for _ in 0..20 {
            let p = random_poly(&mut rng, 4, 9);
            for c in [Component::Upper, Component::Lower] {
                let ok = SectorParams::new(jz, c).and_then(|s| check_factorization(s, &p)).is_ok();
                failures += usize::from(!ok);
            }
        }
        suite.push(format!("factorization[jz={jz}]"), failures == 0, format!("random=20 failures={failures}"));
        suite.push_result(
            format!("broken_susy[jz={jz}]"),
            broken_susy_report(jz, 3).map(|r| {
                let ok = !r.normalizable && r.annihilated_by_a && !r.has_zero_mode && r.spectra_coincide;
                (ok, format!("normalizable={} lowest={}", r.normalizable, r.lower_levels[0]))
            }),
        );
    }

    for jz in [HalfInt::HALF, HalfInt::from_twice(3)] {
        suite.push_result(
            format!("fd_isospectral[jz={jz}]"),
            Grid::new(1024).and_then(|g| isospectrality_gap(jz, g, Stencil::Weighted, 4)).map(|gap| (gap <= tol, format!("gap={}", fmt_f64(gap)))),
        );
    }
    let ns = [512, 1024, 2048, 4096];
    suite.push_result(
        "fd_convergence[jz=1/2]".into(),
        convergence_study(HalfInt::HALF, Sign::Minus, 3, &ns, Stencil::Weighted).map(|s| {
            let ok = s.extrapolated.iter().zip(&s.exact).all(|(x, e)| (x - e).abs() <= 1e-2);
            let vals: Vec<String> = s.extrapolated.iter().map(|x| format!("{x:.6}")).collect();
            (ok, format!("extrapolated={}", vals.join(";")))
        }),
    );
    suite.push_result(
        "fd_convergence[jz=3/2]".into(),
        convergence_study(HalfInt::from_twice(3), Sign::Minus, 1, &ns, Stencil::Weighted).map(|s| {
            let ok = (s.extrapolated[0] - 4.0).abs() <= 1e-2 && s.rows.iter().all(|r| (r.eigenvalue - 1.0).abs() > 0.5);
            (ok, format!("extrapolated={:.6}", s.extrapolated[0]))
        }),
    );

    let opts = HankelOptions::default();
    suite.push_result(
        "hankel_exp[nu=0]".into(),
        [0.1, 1.0, 3.0]
            .iter()
            .map(|&p| {
                let g = hankel_at(&|r: f64| (-r).exp(), 0, p, opts)?;
                let exact = (1.0 + p * p).powf(-1.5);
                Ok(((g - exact) / exact).abs())
            })
            .collect::<Result<Vec<f64>, _>>()
            .map(|errs| {
                let worst = errs.into_iter().fold(0.0, f64::max);
                (worst <= 1e-6, format!("rel={}", fmt_f64(worst)))
            }),
    );
    let grid: Vec<f64> = (1..=6).map(|i| 0.5 * i as f64).collect();
    suite.push_result(
        "hankel_roundtrip[nu=1]".into(),
        hankel_roundtrip_error(&|r: f64| r * (-r * r).exp(), 1, &grid, HankelOptions { tol: 1e-10, ..opts })
            .map(|e| (e <= 1e-6, format!("rel={}", fmt_f64(e)))),
    );

    let passed = suite.checks.iter().all(|c| c.ok);
    let text = match format {
        Format::Csv => {
            let mut s = String::new();
            for c in &suite.checks {
                writeln!(s, "CHECK {} {} {}", c.name, if c.ok { "PASS" } else { "FAIL" }, c.detail).unwrap();
            }
            s
        }
        Format::Json => to_json_text(&Value::Array(
            suite
                .checks
                .iter()
                .map(|c| json!({"name": c.name, "status": if c.ok { "PASS" } else { "FAIL" }, "detail": c.detail}))
                .collect(),
        )),
    };
    Ok(Report { text, passed })
}

fn fd(a: &FdArgs, format: Format) -> Result<Report, Failure> {
    let sign: Sign = a.sign.into();
    let stencil: Stencil = a.stencil.into();
    let s = convergence_study(a.jz, sign, a.levels, &a.n, stencil)?;
    let passed = s.all_monotone();
    let text = match format {
        Format::Csv => {
            let mut out = String::from("n,level,eigenvalue,error,order\n");
            for r in &s.rows {
                writeln!(out, "{},{},{},{},{}", r.n, r.level, fmt_f64(r.eigenvalue), fmt_f64(r.error), fmt_opt(r.order)).unwrap();
            }
            for (l, (x, p)) in s.extrapolated.iter().zip(&s.observed_order).enumerate() {
                writeln!(out, "extrapolated,{l},{},{},{}", fmt_f64(*x), fmt_f64(x - s.exact[l]), fmt_opt(*p)).unwrap();
            }
            out
        }
        Format::Json => to_json_text(&json!({
            "jz": a.jz.to_string(),
            "sign": sign_name(sign),
            "stencil": stencil_name(stencil),
            "rows": s.rows.iter().map(|r| json!({
                "n": r.n,
                "level": r.level,
                "eigenvalue": json_f64(r.eigenvalue),
                "error": json_f64(r.error),
                "order": json_opt(r.order),
            })).collect::<Vec<_>>(),
            "extrapolated": s.extrapolated.iter().enumerate().map(|(l, x)| json!({
                "level": l,
                "value": json_f64(*x),
                "error": json_f64(x - s.exact[l]),
                "order": json_opt(s.observed_order[l]),
            })).collect::<Vec<_>>(),
            "monotone": s.monotone,
        })),
    };
    Ok(Report { text, passed })
}

fn transform(a: &TransformArgs, format: Format, tol: f64) -> Result<Report, Failure> {
    if let Some(jz) = a.jz {
        SectorParams::new(jz, Component::Upper)?;
        if jz.abs() > a.j {
            return Err(Failure::Usage(format!("|jz| = {} exceeds j = {}", jz.abs(), a.j)));
        }
    }
    let m = build_multiplet(a.j)?;
    let mut rows = Vec::new();
    for z in m.states().iter().filter(|z| a.jz.is_none_or(|jz| jz == z.jz)) {
        let ms = momentum_spinor(z, a.j, a.g, MOMENTUM_POINTS)?;
        let (r1, r2) = coupled_residual(&ms, a.g)?;
        rows.push((z.jz, r1, r2));
    }
    let passed = rows.iter().all(|&(_, r1, r2)| r1 <= tol && r2 <= tol);
    let text = match format {
        Format::Csv => {
            let mut s = String::from("jz,j,r1,r2\n");
            for (jz, r1, r2) in &rows {
                writeln!(s, "{jz},{},{},{}", a.j, fmt_f64(*r1), fmt_f64(*r2)).unwrap();
            }
            s
        }
        Format::Json => to_json_text(&Value::Array(
            rows.iter()
                .map(|(jz, r1, r2)| json!({"jz": jz.to_string(), "j": a.j.to_string(), "r1": json_f64(*r1), "r2": json_f64(*r2)}))
                .collect(),
        )),
    };
    Ok(Report { text, passed })
}
