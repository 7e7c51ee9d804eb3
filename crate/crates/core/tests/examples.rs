use expoly::classifier::{check_theorem, classify, compute_coefficient_functions, ClassTag, Equation, Status};
use expoly::growth::indicators;
use expoly::{ConstExpr, DelayDiffOp, ExPoly, ParamEnv, Poly, Triple};

fn c(n: i64) -> ConstExpr {
    ConstExpr::from_int(n)
}

fn r(n: i64, d: i64) -> ConstExpr {
    ConstExpr::rational(n, d)
}

fn log(n: i64) -> ConstExpr {
    ConstExpr::log_int(n).unwrap()
}

fn pi_i(k: i64) -> ConstExpr {
    &(&ConstExpr::pi() * &ConstExpr::i()) * &c(k)
}

fn lin(k: ConstExpr) -> Poly {
    Poly::from_coeffs(vec![ConstExpr::zero(), k])
}

fn ekz(k: ConstExpr) -> ExPoly {
    ExPoly::exp_of(lin(k)).unwrap()
}

fn cst(k: ConstExpr) -> ExPoly {
    ExPoly::constant(k)
}

fn op(ts: Vec<(ConstExpr, u32, ConstExpr)>) -> DelayDiffOp {
    DelayDiffOp::new(ts.into_iter().map(|(b, r, c)| Triple::new(b, r, c)).collect()).unwrap()
}

struct Case {
    name: &'static str,
    eq: Equation,
    f: ExPoly,
    env: ParamEnv,
}

fn case(
    name: &'static str,
    n: u32,
    a: Vec<ConstExpr>,
    q: Poly,
    big_q: Poly,
    p: Poly,
    l: DelayDiffOp,
    f: ExPoly,
) -> Case {
    Case {
        name,
        eq: Equation::new(n, a, q, big_q, p, l).unwrap(),
        f,
        env: ParamEnv::new(),
    }
}

fn cases() -> Vec<Case> {
    let z0 = ConstExpr::zero();
    let d = ConstExpr::param("d");
    let a1 = ConstExpr::param("a1");
    let mut out = vec![
        case(
            "1.1",
            2,
            vec![z0.clone()],
            Poly::constant(r(-1, 4)),
            lin(c(2)),
            Poly::zero(),
            op(vec![(c(1), 2, pi_i(1))]),
            ekz(c(2)),
        ),
        case(
            "1.2",
            2,
            vec![z0.clone()],
            Poly::constant(r(-1, 2)),
            lin(c(1)),
            Poly::zero(),
            DelayDiffOp::delta(log(3)).unwrap(),
            ekz(c(1)),
        ),
        case(
            "1.3",
            2,
            vec![z0.clone()],
            Poly::from_ints(&[-1, -1]),
            Poly::from_ints(&[-1, 1]),
            Poly::zero(),
            op(vec![(c(1), 0, c(1)), (c(1), 1, c(1)), (c(-1), 2, c(1))]),
            ExPoly::term(Poly::from_ints(&[1, 1]), Poly::from_ints(&[0, 1])).unwrap(),
        ),
        case(
            "1.4",
            3,
            vec![z0.clone(), z0.clone()],
            Poly::constant(
                ConstExpr::one()
                    .checked_div(&(&(-ConstExpr::pi()).exp().unwrap() - &(&ConstExpr::i() * &log(2)).exp().unwrap()))
                    .unwrap(),
            ),
            lin(&c(2) * &ConstExpr::i()),
            Poly::zero(),
            op(vec![(c(1), 0, log(2)), (c(1), 2, pi_i(1))]),
            ekz(ConstExpr::i()),
        ),
        case(
            "1.5",
            2,
            vec![c(-2)],
            Poly::constant(r(1, 4)),
            lin(c(2)),
            Poly::from_ints(&[-1]),
            op(vec![(c(1), 1, log(4)), (c(-4), 0, log(3))]),
            ekz(c(2)).sub(&ekz(c(1))).unwrap().add(&ExPoly::one()).unwrap(),
        ),
        case(
            "1.6",
            2,
            vec![-&d],
            Poly::from_ints(&[-1]),
            lin(c(1)),
            Poly::zero(),
            op(vec![(c(1), 0, pi_i(2))]),
            cst(d.clone()).add(&ekz(c(1))).unwrap(),
        ),
        case(
            "1.6b",
            2,
            vec![&d * &c(-3)],
            Poly::from_ints(&[1]),
            lin(c(1)),
            Poly::constant(&(&d * &d) * &c(-2)),
            op(vec![(c(1), 0, pi_i(1))]),
            cst(d.clone()).add(&ekz(c(1))).unwrap(),
        ),
        case(
            "1.7",
            2,
            vec![c(-3)],
            Poly::constant(r(-3, 2)),
            lin(c(1)),
            Poly::from_ints(&[-2]),
            op(vec![(c(1), 0, log(2)), (c(1), 1, pi_i(1)), (c(1), 2, pi_i(2))]),
            cst(c(2)).add(&ekz(c(1)).scale(&c(3))).unwrap(),
        ),
        case(
            "1.7b",
            2,
            vec![c(-3)],
            Poly::from_ints(&[-1]),
            lin(c(1)),
            Poly::zero(),
            op(vec![(c(1), 0, log(3)), (c(-1), 1, log(4)), (c(1), 2, log(2))]),
            cst(c(3)).add(&ekz(c(1))).unwrap(),
        ),
        case(
            "1.8",
            2,
            vec![a1.clone()],
            Poly::constant(c(8).checked_div(&(&c(3) * &a1)).unwrap()),
            lin(c(6)),
            Poly::constant(&(&a1 * &a1) * &r(-1, 4)),
            op(vec![(c(3), 0, z0.clone()), (c(1), 1, log(2)), (c(-3), 2, pi_i(2))]),
            cst(&a1 * &r(-1, 2)).add(&ekz(c(3)).scale(&c(2))).unwrap(),
        ),
        case(
            "1.9",
            2,
            vec![a1.clone()],
            Poly::from_ints(&[0, -1]),
            lin(c(2)),
            Poly::constant(&(&a1 * &a1) * &r(-1, 4)),
            op(vec![
                (c(1), 0, z0.clone()),
                (c(-1), 0, log(2)),
                (r(1, 2), 1, log(2)),
                (r(2, 9), 1, log(3)),
                (r(-1, 9), 2, log(3)),
            ]),
            cst(&a1 * &r(-1, 2))
                .add(&ExPoly::term(Poly::z(), lin(c(2))).unwrap())
                .unwrap(),
        ),
    ];
    for k in out.iter_mut() {
        if k.name.starts_with("1.6") {
            k.env.declare("d", true);
        }
        if k.name == "1.8" || k.name == "1.9" {
            k.env.declare("a1", true);
        }
    }
    out
}

#[test]
fn residuals_vanish() {
    for k in cases() {
        let r = k.eq.residual(&k.f).unwrap();
        assert!(r.is_zero(), "{}: residual {r}", k.name);
    }
}

#[test]
fn classes_match_annotations() {
    let expect = [
        ("1.1", ClassTag::Gamma0),
        ("1.2", ClassTag::Gamma0),
        ("1.3", ClassTag::Gamma0P),
        ("1.4", ClassTag::Gamma0),
        ("1.5", ClassTag::Gamma2P),
        ("1.6", ClassTag::Gamma1),
        ("1.6b", ClassTag::Gamma1),
        ("1.7", ClassTag::Gamma1P),
        ("1.7b", ClassTag::Gamma1),
        ("1.8", ClassTag::Gamma1P),
        ("1.9", ClassTag::Gamma1P),
    ];
    for (k, (name, tag)) in cases().iter().zip(expect) {
        assert_eq!(k.name, name);
        assert_eq!(classify(&k.f).tag, tag, "{name}");
    }
}

#[test]
fn growth_matches_degree_of_q() {
    for k in cases() {
        let g = indicators(&k.f, 50).unwrap();
        assert_eq!(g.rho, k.eq.big_q.degree().unwrap(), "{}", k.name);
        if k.name == "1.1" || k.name == "1.2" {
            assert_eq!((g.rho, g.lambda), (1, 0));
        }
    }
}

#[test]
fn theorem_clauses() {
    for k in cases() {
        let rep = check_theorem(&k.eq, &k.f, &k.env, 50).unwrap();
        assert!(!rep.has_counterexample(), "{}:\n{rep}", k.name);
        assert_eq!(rep.status("(i)"), Some(Status::Holds), "{}:\n{rep}", k.name);
        let sub = |s: &str| rep.status(s).unwrap();
        match k.name {
            "1.5" => assert_eq!(sub("(v)(a)"), Status::Holds, "{rep}"),
            "1.6" | "1.6b" | "1.7" | "1.7b" => assert_eq!(sub("(v)(b)(I)"), Status::Holds, "{}:\n{rep}", k.name),
            "1.8" => assert_eq!(sub("(v)(b)(II)"), Status::Holds, "{rep}"),
            "1.9" => assert_eq!(sub("(v)(b)(III)"), Status::Holds, "{rep}"),
            "1.4" => assert_eq!(sub("(iv)"), Status::Holds, "{rep}"),
            _ => {}
        }
    }
}

#[test]
fn example_anchors() {
    let all = cases();
    let e8 = all.iter().find(|k| k.name == "1.8").unwrap();
    let a1 = ConstExpr::param("a1");
    assert_eq!(e8.eq.l.apply(&e8.f).unwrap(), cst(&a1 * &r(-3, 2)));
    let e9 = all.iter().find(|k| k.name == "1.9").unwrap();
    let view = e9.f.normalized_view().unwrap();
    let (_, ah) = compute_coefficient_functions(&e9.eq.l, &view).unwrap();
    assert_eq!(ah[0], ExPoly::from_poly(Poly::z()));
    assert_eq!(
        view.groups[0].1.pow(2).unwrap(),
        ExPoly::from_poly(Poly::monomial(c(1), 2))
    );
}
