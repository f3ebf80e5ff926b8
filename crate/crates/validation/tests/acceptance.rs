use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use yangian_core::cartan::{CartanDatum, Coweight};
use yangian_core::diffop::{BetaMono, BetaVar, DiffOp};
use yangian_core::gklo::*;
use yangian_core::minors;
use yangian_core::poly::{q, qf, Poly, RatFunc, Var, Q};
use yangian_core::scenario::Scenario;
use yangian_core::series::TruncSeries;

type Outcome = Result<String, String>;

struct Case {
    label: String,
    ctx: GkloContext,
    /// Same weights with symbolic `c`, when `ctx` uses numeric values.
    symbolic: Option<GkloContext>,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn z() -> Poly {
    Poly::var(Var::z(0, 1))
}

fn c(r: usize) -> Poly {
    Poly::var(Var::c(0, r))
}

fn a1_context(order: usize) -> GkloContext {
    let cd = CartanDatum::build('A', 1, None).unwrap();
    let lam = Coweight::from_fund(&cd, vec![2]).unwrap();
    let mu = Coweight::zero(&cd);
    GkloContext::build(&cd, &lam, &mu, CMode::Symbolic, order).unwrap()
}

fn first_failure(rep: &RelationReport) -> String {
    let f = rep.failures();
    format!("{} nonzero residuals, first {} {:?}", f.len(), f[0].family, f[0].indices)
}

fn criterion_1() -> Outcome {
    let ctx = a1_context(8);
    let b = BetaVar::new(0, 1, 1);
    let zh = z().add(&Poly::h());
    let quad = zh.pow(2).add(&c(1).mul(&zh)).add(&c(2));
    ensure(*ctx.a[0].coeff(1) == RatFunc::from(z().neg()), || "A^(1) != -z".into())?;
    ensure((2..=ctx.a[0].order()).all(|s| ctx.a[0].coeff(s).is_zero()), || "A^(s) != 0 for s > 1".into())?;
    for s in 1..=8u32 {
        let e = DiffOp::term(BetaMono::single(b, -1), RatFunc::from(z().pow(s - 1)));
        let f = DiffOp::term(BetaMono::single(b, 1), RatFunc::from(zh.pow(s - 1).mul(&quad).neg()));
        ensure(*ctx.e[0].coeff(s as usize) == e, || format!("E^({}) = {}", s, ctx.e[0].coeff(s as usize)))?;
        ensure(*ctx.f[0].coeff(s as usize) == f, || format!("F^({}) = {}", s, ctx.f[0].coeff(s as usize)))?;
    }
    ensure(*ctx.h[0].coeff(1) == RatFunc::from(z().scale(&q(2))), || "H^(1) != 2z".into())?;
    let rep = verify_relations(&ctx, RelationRanges::for_context(&ctx)).map_err(err)?;
    ensure(rep.pass(), || first_failure(&rep))?;
    Ok(format!("images match, {} residuals zero", rep.entries.len()))
}

fn criterion_2() -> Outcome {
    let ctx = a1_context(4);
    let got = sl2_casimir_check(&ctx).map_err(err)?;
    let h = Poly::h();
    let want = c(2).scale(&q(2)).sub(&c(1).pow(2).scale(&qf(1, 2))).add(&h.pow(2).scale(&qf(1, 2)));
    let want = RatFunc::from(want);
    ensure(got == want, || format!("central scalar is {} but expected {}", got, want))?;
    Ok(format!("{}", got))
}

fn numeric_c(lam: &[usize]) -> Vec<Vec<Q>> {
    lam.iter()
        .enumerate()
        .map(|(i, &l)| (1..=l).map(|r| qf(2 * r as i64 - 3 * i as i64 - 1, r as i64 + 1)).collect())
        .collect()
}

/// `{A2, A3 (numeric c), B2, C2, G2}` × `λ - μ ∈ {α_i^∨, α_i^∨ + α_j^∨}` ×
/// `μ ∈ {0, ω_i^∨}` × both orientations, keeping dominant `λ`.
fn matrix_cases(order: usize) -> Vec<Case> {
    let mut out = Vec::new();
    for (kind, rank, numeric) in [('A', 2, false), ('A', 3, true), ('B', 2, false), ('C', 2, false), ('G', 2, false)] {
        let base = CartanDatum::build(kind, rank, None).unwrap();
        for (oname, cd) in [("default", base.clone()), ("reversed", base.reversed())] {
            let mut mus = vec![Coweight::zero(&cd)];
            mus.extend((0..rank).map(|i| Coweight::fundamental(&cd, i)));
            let mut deltas = Vec::new();
            for i in 0..rank {
                deltas.push(vec![i]);
                for j in i..rank {
                    deltas.push(vec![i, j]);
                }
            }
            for mu in &mus {
                for d in &deltas {
                    let lam = d.iter().fold(mu.clone(), |acc, &i| acc.add(&Coweight::simple_coroot(&cd, i)));
                    if !lam.is_dominant() {
                        continue;
                    }
                    let label = format!("{}{} {} λ={:?} μ={:?}", kind, rank, oname, lam.fund, mu.fund);
                    let sym = GkloContext::build(&cd, &lam, mu, CMode::Symbolic, order).unwrap();
                    let (ctx, symbolic) = if numeric {
                        let vals = numeric_c(&sym.sd.lam);
                        (GkloContext::build(&cd, &lam, mu, CMode::Numeric(vals), order).unwrap(), Some(sym))
                    } else {
                        (sym, None)
                    };
                    out.push(Case { label, ctx, symbolic });
                }
            }
        }
    }
    out
}

fn bundled_cases() -> Vec<Case> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut paths: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    paths
        .into_iter()
        .filter(|p| p.extension().is_some_and(|e| e == "toml"))
        .map(|p| {
            let s = Scenario::from_toml(&std::fs::read_to_string(&p).unwrap()).unwrap();
            let r = s.resolve().unwrap();
            let ctx = GkloContext::build(&r.cd, &r.lambda, &r.mu, r.c_mode.clone(), s.order).unwrap();
            let symbolic = match r.c_mode {
                CMode::Symbolic => None,
                _ => Some(GkloContext::build(&r.cd, &r.lambda, &r.mu, CMode::Symbolic, s.order).unwrap()),
            };
            Case { label: s.name.clone(), ctx, symbolic }
        })
        .collect()
}

fn criterion_3(cases: &[Case]) -> Outcome {
    let mut total = 0;
    let kinds: std::collections::BTreeSet<String> = cases.iter().map(|c| c.ctx.cd.label()).collect();
    for c in cases {
        ensure(c.ctx.order >= 6, || format!("{}: order {}", c.label, c.ctx.order))?;
        let ranges = RelationRanges::for_context(&c.ctx);
        ensure(ranges.serre_r == 3 && ranges.serre_s == 3, || "Serre range".into())?;
        let rep = verify_relations(&c.ctx, ranges).map_err(|e| format!("{}: {}", c.label, e))?;
        ensure(rep.pass(), || format!("{}: {}", c.label, first_failure(&rep)))?;
        total += rep.entries.len();
    }
    ensure(kinds.len() == 5, || format!("types covered: {:?}", kinds))?;
    Ok(format!("{} scenarios, {} residuals zero", cases.len(), total))
}

fn random_a(cd: &CartanDatum, n: usize, rng: &mut ChaCha8Rng) -> Vec<TruncSeries<RatFunc>> {
    let vars = [Var::H, Var::z(0, 1), Var::c(1, 1)];
    (0..cd.rank)
        .map(|_| {
            let mut cs = vec![RatFunc::one()];
            for _ in 0..n {
                let mut p = Poly::constant(qf(rng.gen_range(-5..=5), rng.gen_range(1..=4)));
                for v in vars {
                    if rng.gen_bool(0.5) {
                        p = p.add(&Poly::var(v).pow(rng.gen_range(1..=2)).scale(&q(rng.gen_range(-3..=3))));
                    }
                }
                cs.push(RatFunc::from(p));
            }
            TruncSeries::from_coeffs(cs)
        })
        .collect()
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut trips = 0;
    for (kind, rank) in [('A', 1), ('A', 2), ('A', 3), ('B', 2), ('C', 2), ('G', 2)] {
        let cd = CartanDatum::build(kind, rank, None).unwrap();
        for _ in 0..5 {
            let a = random_a(&cd, 6, &mut rng);
            let h = h_from_a(&cd, &a).map_err(err)?;
            let back = solve_a_from_h(&cd, &h).map_err(err)?;
            ensure(back == a, || format!("{}{} round trip differs", kind, rank))?;
            trips += 1;
        }
    }
    // sl2 closed forms on a generic A
    let cd = CartanDatum::build('A', 1, None).unwrap();
    let (a1, a2) = (Poly::var(Var::aux(0, 1)), Poly::var(Var::aux(0, 2)));
    let a = TruncSeries::from_coeffs(vec![RatFunc::one(), a1.clone().into(), a2.clone().into(), RatFunc::zero()]);
    let h = h_from_a(&cd, &[a]).map_err(err)?;
    let h1 = a1.scale(&q(-2));
    let h2 = a1.pow(2).scale(&q(3)).sub(&Poly::h().mul(&a1)).sub(&a2.scale(&q(2)));
    ensure(*h[0].coeff(1) == RatFunc::from(h1), || format!("H^(1) = {}", h[0].coeff(1)))?;
    ensure(*h[0].coeff(2) == RatFunc::from(h2), || format!("H^(2) = {}", h[0].coeff(2)))?;
    Ok(format!("{} random round trips, sl2 closed forms exact", trips))
}

fn all_checks(label: &str, checks: &[Check]) -> Result<(), String> {
    match checks.iter().find(|c| !c.pass) {
        None => Ok(()),
        Some(c) => Err(format!("{}: {} {}", label, c.name, c.detail.clone().unwrap_or_default())),
    }
}

fn criterion_5(cases: &[&Case]) -> Outcome {
    let mut n = 0;
    for c in cases {
        let checks = quotient_facts(&c.ctx);
        all_checks(&c.label, &checks)?;
        n += checks.len();
    }
    Ok(format!("{} checks over {} scenarios", n, cases.len()))
}

fn criterion_6(cases: &[&Case]) -> Outcome {
    let mut n = 0;
    for c in cases {
        let ctx = c.symbolic.as_ref().unwrap_or(&c.ctx);
        let (entries, checks) = grading_check(ctx);
        all_checks(&c.label, &checks[..1])?;
        n += entries.len();
    }
    Ok(format!("{} image coefficients homogeneous over {} scenarios", n, cases.len()))
}

fn criterion_7(cases: &[&Case]) -> Outcome {
    let mut n = 0;
    for (k, c) in cases.iter().enumerate() {
        let checks = classical_compatibility(&c.ctx, 100, 700 + k as u64).map_err(err)?;
        all_checks(&c.label, &checks)?;
        let nonzero = c.ctx.image_coefficients().iter().any(|x| !x.value.is_zero());
        ensure(!nonzero || checks.len() >= 100, || format!("{}: only {} pairs", c.label, checks.len()))?;
        n += checks.len();
    }
    Ok(format!("{} pairs over {} scenarios", n, cases.len()))
}

fn criterion_8() -> Outcome {
    let mut n = 0;
    for k in 0..=3 {
        let checks = minors::verify_kleinian(k).map_err(err)?;
        ensure(checks.len() >= 3, || format!("n={}: {} checks", k, checks.len()))?;
        all_checks(&format!("n={}", k), &checks)?;
        n += checks.len();
    }
    Ok(format!("{} checks for n=0..3", n))
}

fn criterion_9() -> Outcome {
    let pairs = yangian_validation::compare_with_oracle(4)?;
    let jac = minors::jacobi_suite(60, 3, 9).map_err(err)?;
    let triples = jac.iter().filter(|c| c.name.starts_with("Jacobi")).count();
    ensure(triples >= 50, || format!("{} Jacobi triples", triples))?;
    all_checks("jacobi", &jac)?;
    all_checks("det ideal", &minors::det_ideal_check(3).map_err(err)?)?;
    all_checks("phi", &minors::phi_bracket_check(4).map_err(err)?)?;
    Ok(format!("{} oracle entries, {} Jacobi triples, det ideal and phi at N=4", pairs, triples))
}

/// `∏_{i≥1} (1 - q^i)^{-e}` by repeated division by `(1 - q^i)`.
fn product_oracle(e: usize, n: usize) -> Vec<BigUint> {
    let mut c = vec![BigUint::from(0u32); n + 1];
    c[0] = BigUint::from(1u32);
    for i in 1..=n {
        for _ in 0..e {
            for k in i..=n {
                let prev = c[k - i].clone();
                c[k] += prev;
            }
        }
    }
    c
}

fn criterion_10() -> Outcome {
    let mut n = 0;
    for (kind, rank) in [('A', 1), ('A', 2), ('B', 2)] {
        let cd = CartanDatum::build(kind, rank, None).unwrap();
        let mut mus = vec![Coweight::zero(&cd)];
        for i in 0..rank {
            let w = Coweight::fundamental(&cd, i);
            mus.push(w.clone());
            mus.push(w.add(&w));
        }
        for mu in &mus {
            let a = cd.hilbert_count_slice(mu, 8).map_err(err)?;
            let b = cd.count_pbw_monomials(mu, 8).map_err(err)?;
            ensure(a == b, || format!("{}{} μ={:?}: {:?} vs {:?}", kind, rank, mu.fund, a, b))?;
            if mu.fund.iter().all(|&x| x == 0) {
                let p = product_oracle(cd.dim_g(), 8);
                ensure(a == p, || format!("{}{} μ=0 product formula", kind, rank))?;
            }
            n += 1;
        }
    }
    Ok(format!("{} slices agree to q^8", n))
}

fn criterion_11(cases: &[&Case]) -> Outcome {
    let mut n = 0;
    let mut used = 0;
    for c in cases {
        if c.ctx.sd.m.iter().any(|&m| m > 3) {
            continue;
        }
        let checks = verify_proof_identities(&c.ctx).map_err(|e| format!("{}: {}", c.label, e))?;
        all_checks(&c.label, &checks)?;
        n += checks.len();
        used += 1;
    }
    Ok(format!("{} identities over {} scenarios", n, used))
}

fn run(id: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {}", msg))
    });
    let secs = t.elapsed().as_secs_f64();
    match &res {
        Ok(d) => println!("PASS {:>2} {}: {} ({:.1}s)", id, name, d, secs),
        Err(d) => println!("FAIL {:>2} {}: {} ({:.1}s)", id, name, d, secs),
    }
    res.is_ok()
}

fn main() -> ExitCode {
    let t = Instant::now();
    let matrix = matrix_cases(6);
    let bundled = bundled_cases();
    let everything: Vec<&Case> = matrix.iter().chain(&bundled).collect();
    println!("built {} contexts in {:.1}s", everything.len(), t.elapsed().as_secs_f64());

    let results = [
        run(1, "sl2 anchor", criterion_1),
        run(2, "sl2 Casimir", criterion_2),
        run(3, "relation matrix", || criterion_3(&matrix)),
        run(4, "A from H", criterion_4),
        run(5, "quotient facts", || criterion_5(&everything)),
        run(6, "grading", || criterion_6(&everything)),
        run(7, "classical compatibility", || criterion_7(&everything)),
        run(8, "Kleinian and PGL2 examples", criterion_8),
        run(9, "minor bracket engine", criterion_9),
        run(10, "Hilbert counts", criterion_10),
        run(11, "proof identities", || criterion_11(&everything)),
    ];
    let passed = results.iter().filter(|&&r| r).count();
    println!("{}/{} criteria pass", passed, results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
