use proptest::prelude::*;

use yangian_core::cartan::{CartanDatum, Coweight, ShiftData};
use yangian_core::diffop::{BetaMono, BetaVar, DiffOp};
use yangian_core::gklo::{h_from_a, solve_a_from_h, CMode, GkloContext, RootSign};
use yangian_core::poly::{q, qf, Mono, Poly, RatFunc, Var, Q};
use yangian_core::scenario::{Basis, CSpec, CartanSpec, Number, OrientationChoice, Scenario, Suite, WeightSpec};
use yangian_core::series::{BiSeries, TruncSeries};

fn small_q() -> impl Strategy<Value = Q> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| qf(n, d))
}

fn vars() -> [Var; 4] {
    [Var::H, Var::z(0, 1), Var::z(0, 2), Var::c(0, 1)]
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((small_q(), prop::collection::vec(0u32..=2, 4)), 0..4).prop_map(|terms| {
        let mut p = Poly::zero();
        for (c, exps) in terms {
            let mut m = Mono::one();
            for (v, e) in vars().iter().zip(exps) {
                if e > 0 {
                    m = m.mul(&Mono::var(*v, e));
                }
            }
            p.add_term(m, c);
        }
        p
    })
}

/// Rational functions with denominators among `z1 - z2 - s h`.
fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly(), prop::collection::vec(-2i64..=2, 0..3)).prop_map(|(p, shifts)| {
        let mut f = RatFunc::from(p);
        for s in shifts {
            f = f.mul(&RatFunc::inv_linear(Var::z(0, 1), Var::z(0, 2), q(s)).unwrap());
        }
        f
    })
}

fn series(n: usize) -> impl Strategy<Value = TruncSeries<Poly>> {
    prop::collection::vec(poly(), n).prop_map(move |cs| {
        let mut c = vec![Poly::one()];
        c.extend(cs);
        TruncSeries::from_coeffs(c)
    })
}

fn number() -> impl Strategy<Value = Number> {
    prop_oneof![(-5i64..=5).prop_map(Number::Int), small_q().prop_map(|x| Number::Text(x.to_string()))]
}

fn weight() -> impl Strategy<Value = WeightSpec> {
    (any::<bool>(), prop::collection::vec(number(), 1..4)).prop_map(|(f, coords)| WeightSpec {
        basis: if f { Basis::Fundamental } else { Basis::Coroot },
        coords,
    })
}

fn scenario() -> impl Strategy<Value = Scenario> {
    (
        ("[a-z][a-z0-9_]{0,8}", 1usize..=12, any::<u64>(), 1usize..500),
        prop::sample::subsequence(Suite::ALL.to_vec(), 1..=8),
        (prop::sample::select(vec!["A", "B", "C", "G"]), 1usize..4, any::<bool>()),
        (weight(), weight()),
        prop::option::of(prop::collection::vec(prop::collection::vec(number(), 0..3), 1..4)),
    )
        .prop_map(|((name, order, seed, samples), suites, (kind, rank, rev), (lambda, mu), values)| Scenario {
            schema_version: 1,
            name,
            order,
            seed,
            samples,
            suites,
            cartan: CartanSpec {
                kind: kind.into(),
                rank,
                orientation: if rev { OrientationChoice::Reversed } else { OrientationChoice::Default },
                edges: None,
            },
            lambda,
            mu,
            c: CSpec { mode: if values.is_some() { "numeric" } else { "symbolic" }.into(), values },
        })
}

fn diffop() -> impl Strategy<Value = DiffOp> {
    prop::collection::vec((ratfunc(), -1i32..=1, -1i32..=1), 1..3).prop_map(|terms| {
        let mut x = DiffOp::zero();
        for (f, e1, e2) in terms {
            let mut m = BetaMono::one();
            if e1 != 0 {
                m = m.mul(&BetaMono::single(BetaVar::new(0, 1, 1), e1));
            }
            if e2 != 0 {
                m = m.mul(&BetaMono::single(BetaVar::new(0, 2, 1), e2));
            }
            x = x.add(&DiffOp::term(m, f));
        }
        x
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn poly_ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn ratfunc_field_ops(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn shift_has_inverse(f in ratfunc(), s in small_q()) {
        let v = Var::z(0, 1);
        prop_assert_eq!(f.shift(v, &s).shift(v, &-s.clone()), f.clone());
        let g = f.shift_z(0, 2, &s);
        prop_assert_eq!(g.shift_z(0, 2, &-s), f);
    }

    #[test]
    fn set_h_zero_is_a_ring_map(a in poly(), b in poly()) {
        let (fa, fb) = (RatFunc::from(a), RatFunc::from(b));
        prop_assert_eq!(fa.mul(&fb).set_h_zero(), fa.set_h_zero().mul(&fb.set_h_zero()));
        prop_assert_eq!(fa.add(&fb).set_h_zero(), fa.set_h_zero().add(&fb.set_h_zero()));
    }

    #[test]
    fn div_exact_h_inverts_mul_h(f in ratfunc()) {
        let hf = f.mul_poly(&Poly::h());
        prop_assert_eq!(hf.div_exact_h().unwrap(), f);
    }

    #[test]
    fn series_invert_and_shift(s in series(4), k in -3i64..=3) {
        let inv = s.invert().unwrap();
        prop_assert_eq!(s.mul(&inv), TruncSeries::one(4));
        let a = Poly::h().scale(&q(k));
        prop_assert_eq!(s.shift_arg(&a).shift_arg(&a.neg()), s.clone());
        prop_assert_eq!(s.mul(&s.shift_arg(&a)), s.shift_arg(&a).mul(&s));
    }

    #[test]
    fn divided_difference_times_u_minus_v(s in series(5)) {
        let dd = BiSeries::divided_difference(&s, 3, 3).unwrap();
        let lhs = dd.times_u_minus_v();
        let rhs = BiSeries::difference(&s, 2, 2);
        // agreement away from the constant terms, which (u - v) pushes out of range
        for r in 1..=2 {
            for t in 1..=2 {
                prop_assert_eq!(lhs.coeff(r, t), rhs.coeff(r, t));
            }
        }
        for r in 1..=2 {
            prop_assert_eq!(lhs.coeff(r, 0), rhs.coeff(r, 0));
            prop_assert_eq!(lhs.coeff(0, r), rhs.coeff(0, r));
        }
    }

    #[test]
    fn diffop_associative_and_jacobi(x in diffop(), y in diffop(), z in diffop()) {
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        let jac = x.commutator(&y.commutator(&z))
            .add(&y.commutator(&z.commutator(&x)))
            .add(&z.commutator(&x.commutator(&y)));
        prop_assert!(jac.is_zero());
        prop_assert_eq!(x.commutator(&y), y.commutator(&x).neg());
    }

    #[test]
    fn classical_limit_of_commutator(x in diffop(), y in diffop()) {
        let (x0, y0) = (x.set_h_zero(), y.set_h_zero());
        let lhs = x0.commutator(&y0).div_exact_h().unwrap().set_h_zero();
        prop_assert_eq!(lhs, x0.poisson_bracket(&y0).unwrap());
    }

    #[test]
    fn shift_data_identity(kind in 0usize..4, mu in prop::collection::vec(0i64..=2, 2),
                           n in prop::collection::vec(0i64..=2, 2)) {
        let (letter, rank) = [('A', 2), ('B', 2), ('C', 2), ('G', 2)][kind];
        let cd = CartanDatum::build(letter, rank, None).unwrap();
        let mu = Coweight::from_fund(&cd, mu).unwrap();
        let mut lam = mu.clone();
        for (i, k) in n.iter().enumerate() {
            for _ in 0..*k {
                lam = lam.add(&Coweight::simple_coroot(&cd, i));
            }
        }
        prop_assume!(lam.is_dominant());
        let sd = ShiftData::new(&cd, &lam, &mu).unwrap();
        for i in 0..rank {
            let rhs: i64 = (0..rank).map(|j| cd.a[j][i] * sd.m[j] as i64).sum();
            prop_assert_eq!(sd.lam[i] as i64 - sd.mu[i] as i64, rhs);
        }
        let back = Coweight::from_coroot(&cd, lam.coroot.clone()).unwrap();
        prop_assert_eq!(back, lam);
    }

    #[test]
    fn scenario_toml_round_trip(s in scenario()) {
        prop_assert_eq!(Scenario::from_toml(&s.to_toml()).unwrap(), s);
    }

    #[test]
    fn a_from_h_round_trip(kind in 0usize..3, coeffs in prop::collection::vec(small_q(), 6)) {
        let (letter, rank) = [('A', 2), ('B', 2), ('G', 2)][kind];
        let cd = CartanDatum::build(letter, rank, None).unwrap();
        let n = 3;
        let a: Vec<TruncSeries<RatFunc>> = (0..rank)
            .map(|i| {
                let mut c = vec![RatFunc::one()];
                for s in 0..n {
                    let x = Poly::constant(coeffs[i * n + s].clone()).add(&Poly::var(Var::aux(i, s + 1)));
                    c.push(RatFunc::from(x));
                }
                TruncSeries::from_coeffs(c)
            })
            .collect();
        let h = h_from_a(&cd, &a).unwrap();
        prop_assert_eq!(solve_a_from_h(&cd, &h).unwrap(), a);
    }
}

#[test]
fn root_vectors_independent_of_decomposition_failures() {
    // every node order yields h-divisible commutators for A3 and B2
    for (letter, rank) in [('A', 3), ('B', 2)] {
        let cd = CartanDatum::build(letter, rank, None).unwrap();
        let mut lam = Coweight::zero(&cd);
        for i in 0..rank {
            lam = lam.add(&Coweight::simple_coroot(&cd, i));
        }
        if !lam.is_dominant() {
            lam = lam.add(&Coweight::fundamental(&cd, 0));
        }
        let mu = if lam.is_dominant() { Coweight::zero(&cd) } else { unreachable!() };
        let ctx = match GkloContext::build(&cd, &lam, &mu, CMode::Symbolic, 3) {
            Ok(c) => c,
            Err(_) => continue,
        };
        for seed in 0..4 {
            let order = yangian_core::gklo::shuffled_order(rank, seed);
            for alpha in &cd.positive_roots {
                for sign in [RootSign::E, RootSign::F] {
                    let r = ctx.root_vector_image_with_order(sign, alpha, 2, &order);
                    assert!(r.is_ok(), "{:?} {:?} {:?}", alpha, sign, r);
                }
            }
        }
    }
}
