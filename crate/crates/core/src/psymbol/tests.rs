use super::*;
use crate::scalar::c;
use proptest::prelude::*;

fn fin(z: C64) -> SpherePoint {
    SpherePoint::Finite(z)
}

fn heun_p() -> HeunParams {
    HeunParams::new(c(2.5, 0.5), r(0.3), c(0.4, 0.1), r(-0.7), c(1.2, -0.3), r(0.6))
}

#[test]
fn fuchs_sums_of_standard_symbols() {
    let g = GaussParams::new(c(0.3, 1.0), r(2.0), c(0.5, 0.5));
    assert!((fuchs_sum(&PSymbol::gauss(&g)) - r(1.0)).norm() < 1e-14);
    assert_eq!(PSymbol::gauss(&g).fuchs_target(), r(1.0));
    let h = PSymbol::heun(&heun_p());
    assert!((fuchs_sum(&h) - r(2.0)).norm() < 1e-14);
    let bad = PSymbol::new(
        2,
        vec![
            (fin(r(0.0)), vec![r(0.0), r(0.5)]),
            (fin(r(1.0)), vec![r(0.0), r(0.5)]),
            (SpherePoint::Infinity, vec![r(0.5), r(0.5)]),
        ],
    )
    .unwrap();
    assert!((fuchs_sum(&bad) - bad.fuchs_target()).norm() > 0.5);
}

#[test]
fn construction_rejects_bad_shapes() {
    assert!(PSymbol::new(2, vec![(fin(r(0.0)), vec![r(0.0)])]).is_err());
    assert!(PSymbol::new(2, vec![(fin(r(0.0)), vec![r(0.0), r(1.0)]), (fin(r(0.0)), vec![r(0.0), r(2.0)])]).is_err());
}

#[test]
fn mobius_lift_examples() {
    let g = GaussParams::new(r(0.3), r(0.7), r(1.5));
    let p = PSymbol::gauss(&g);
    assert_eq!(mobius_lift(&p, &MobiusMap::identity()), p);
    // m(x) = x/(x-1): m^-1(0) = 0, m^-1(1) = ∞, m^-1(∞) = 1
    let m = MobiusMap::new(r(1.0), r(0.0), r(1.0), r(-1.0)).unwrap();
    let q = mobius_lift(&p, &m);
    let locs: Vec<_> = q.columns().iter().map(|c| c.location).collect();
    assert_eq!(locs, vec![fin(r(0.0)), SpherePoint::Infinity, fin(r(1.0))]);
    for (a, b) in p.columns().iter().zip(q.columns()) {
        assert_eq!(a.exponents, b.exponents);
    }
}

#[test]
fn f_homotopy_examples() {
    let hp = heun_p();
    let p = PSymbol::heun(&hp);
    assert_eq!(f_homotopy(&p, fin(r(1.0)), r(0.0), false).unwrap(), p);
    let zeta = r(1.0) - hp.delta;
    let q = f_homotopy(&p, fin(r(1.0)), zeta, false).unwrap();
    let at1 = &q.column_at(&fin(r(1.0))).unwrap().exponents;
    assert!(exponents_match(at1, &[hp.delta - 1.0, r(0.0)], 1e-14));
    let inf = &q.column_at(&SpherePoint::Infinity).unwrap().exponents;
    assert!(exponents_match(inf, &[hp.alpha + 1.0 - hp.delta, hp.beta + 1.0 - hp.delta], 1e-14));
    assert!((fuchs_sum(&q) - fuchs_sum(&p)).norm() < 1e-14);

    assert!(matches!(f_homotopy(&p, fin(r(7.0)), r(0.5), false), Err(HeunError::MissingColumn(_))));
    let added = f_homotopy(&p, fin(r(7.0)), r(0.5), true).unwrap();
    assert_eq!(added.len(), 5);
    assert!((fuchs_sum(&added) - added.fuchs_target()).norm() < 1e-14);
}

#[test]
fn rational_lift_degree_one_matches_mobius() {
    let p = PSymbol::heun(&heun_p());
    let m = MobiusMap::new(c(1.0, 0.5), r(2.0), r(1.0), c(-3.0, 0.2)).unwrap();
    let rm = m.inverse().as_rational();
    // lifting along x' = m^-1(x)... the rational map is x -> m^-1(x)
    let inv = m.inverse();
    let table: Vec<BranchPoint> =
        p.columns().iter().map(|c| BranchPoint::new(m.apply(c.location), c.location, 1)).collect();
    let lifted = rational_lift(&p, &rm, &table).unwrap();
    assert!(lifted.equivalent(&mobius_lift(&p, &inv), 1e-10));
}

#[test]
fn rational_lift_rejects_bad_tables() {
    let g = GaussParams::new(r(0.3), r(0.7), r(1.5));
    let p = PSymbol::gauss(&g);
    let rm = quadratic_map(r(0.36), r(25.0 / 81.0)).unwrap();
    let mut table = quadratic_branching(r(0.36), r(25.0 / 81.0)).unwrap();
    table.remove(1);
    assert!(matches!(rational_lift(&p, &rm, &table), Err(HeunError::InconsistentBranching(_))));
}

#[test]
fn quadratic_lift_reproduces_erdelyi_scheme() {
    // t = 1
    let (a, a2, big_a) = (r(9.0 / 25.0), r(1.0 / 81.0), r(25.0 / 81.0));
    let (alpha, gamma) = (c(0.3, 0.2), c(1.1, -0.4));
    let rhs = HeunParams::new(a2, r(0.0), alpha, gamma - alpha, gamma, r(0.5));
    let rm = quadratic_map(a, big_a).unwrap();
    let table = quadratic_branching(a, big_a).unwrap();
    let lifted = rational_lift(&PSymbol::heun(&rhs), &rm, &table).unwrap();
    let lifted = f_homotopy(&lifted, fin(r(1.0)), alpha, false).unwrap();
    let lhs = HeunParams::new(a, r(0.0), 2.0 * alpha, gamma, gamma, 2.0 * alpha - gamma + 1.0);
    assert!(lifted.equivalent(&PSymbol::heun(&lhs), 1e-10), "{lifted}");
    assert!((fuchs_sum(&lifted) - lifted.fuchs_target()).norm() < 1e-12);
}

#[test]
fn quartic_lift_schema() {
    let a = c(2.0, 0.3);
    let gamma = c(0.8, 0.1);
    let rhs = HeunParams::new(a, r(0.0), gamma / 2.0 - 0.25, gamma / 2.0 + 0.25, gamma, r(0.5));
    let s = quartic_map(a).unwrap();
    let lifted = rational_lift(&PSymbol::heun(&rhs), &s, &quartic_branching(a)).unwrap();
    // four preimages of 0 plus the two double poles ±sqrt(a)
    assert_eq!(lifted.len(), 6);
    assert!((fuchs_sum(&lifted) - lifted.fuchs_target()).norm() < 1e-12);
    let sa = a.sqrt();
    let zeta = gamma - 0.5;
    let mut sym = f_homotopy(&lifted, fin(sa), zeta, false).unwrap();
    sym = f_homotopy(&sym, fin(-sa), zeta, false).unwrap();
    let sym = sym.drop_ordinary();
    assert_eq!(sym.len(), 4);
    let lhs = HeunParams::new(a, r(0.0), 2.0 * gamma - 1.0, gamma, gamma, gamma);
    assert!(sym.equivalent(&PSymbol::heun(&lhs), 1e-10), "{sym}");
}

#[test]
fn normalize_examples() {
    let hp = HeunParams::new(r(3.0), r(0.0), r(0.4), r(0.2), r(1.5), r(0.3));
    let p = PSymbol::heun(&hp);
    let (q, m, shifts) = normalize(&p).unwrap();
    assert!(q.equivalent(&p, 1e-14));
    assert!(shifts.is_empty());
    let z = fin(c(0.7, -0.2));
    assert!(m.apply(z).approx_eq(&z, 1e-14));

    let (al, be) = (c(0.3, 0.1), r(-0.4));
    let p = PSymbol::new(
        2,
        vec![
            (fin(r(2.0)), vec![r(1.0), r(2.0)]),
            (fin(r(3.0)), vec![r(0.0), r(5.0)]),
            (SpherePoint::Infinity, vec![al, be]),
        ],
    )
    .unwrap();
    let (q, _, shifts) = normalize(&p).unwrap();
    let want = PSymbol::new(
        2,
        vec![
            (fin(r(0.0)), vec![r(0.0), r(1.0)]),
            (fin(r(1.0)), vec![r(0.0), r(5.0)]),
            (SpherePoint::Infinity, vec![al + 1.0, be + 1.0]),
        ],
    )
    .unwrap();
    assert!(q.equivalent(&want, 1e-12), "{q}");
    assert_eq!(shifts.len(), 1);
    assert!((fuchs_sum(&q) - fuchs_sum(&p)).norm() < 1e-12);
    assert!(normalize(&PSymbol::new(2, vec![(fin(r(0.0)), vec![r(0.0), r(1.0)])]).unwrap()).is_err());
}

#[test]
fn derivative_symbol_examples() {
    let mut hp = heun_p();
    hp.alpha = r(1.0);
    let p = PSymbol::heun(&hp);
    assert_eq!(derivative_symbol(&p, 0).unwrap(), p);
    hp.alpha = r(-1.0);
    let p = PSymbol::heun(&hp);
    let d = derivative_symbol(&p, 2).unwrap();
    let eps = hp.epsilon();
    let want = PSymbol::new(
        2,
        vec![
            (fin(r(0.0)), vec![r(0.0), -1.0 - hp.gamma]),
            (fin(r(1.0)), vec![r(0.0), -1.0 - hp.delta]),
            (fin(hp.a), vec![r(0.0), -1.0 - eps]),
            (SpherePoint::Infinity, vec![r(3.0), hp.beta + 2.0]),
        ],
    )
    .unwrap();
    assert!(d.equivalent(&want, 1e-14));
    assert!((fuchs_sum(&d) - fuchs_sum(&p)).norm() < 1e-14);
    assert!(derivative_symbol(&PSymbol::heun(&heun_p()), 1).is_err());
}

#[test]
fn rendering_has_header_and_rows() {
    let g = GaussParams::new(r(0.5), r(1.5), r(2.0));
    let s = PSymbol::gauss(&g).to_string();
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].contains('∞'));
    assert!(lines[2].contains("0.5"));
}

fn cplx(bound: f64) -> impl Strategy<Value = C64> {
    (-bound..bound, -bound..bound).prop_map(|(a, b)| c(a, b))
}

fn arb_mobius() -> impl Strategy<Value = MobiusMap> {
    (cplx(2.0), cplx(2.0), cplx(2.0), cplx(2.0)).prop_filter_map("nondegenerate", |(a, b, cc, d)| {
        if (a * d - b * cc).norm() < 0.2 {
            None
        } else {
            MobiusMap::new(a, b, cc, d).ok()
        }
    })
}

fn arb_heun() -> impl Strategy<Value = HeunParams> {
    (cplx(3.0), cplx(2.0), cplx(2.0), cplx(2.0), cplx(2.0))
        .prop_filter("a away from 0, 1", |(a, ..)| a.norm() > 0.2 && (a - 1.0).norm() > 0.2)
        .prop_map(|(a, al, be, ga, de)| HeunParams::new(a, r(0.0), al, be, ga, de))
}

proptest! {
    #[test]
    fn fuchs_sum_invariant(hp in arb_heun(), m in arb_mobius(), zeta in cplx(2.0)) {
        let p = PSymbol::heun(&hp);
        let s = fuchs_sum(&p);
        let lifted = mobius_lift(&p, &m);
        prop_assert!((fuchs_sum(&lifted) - s).norm() <= 1e-12);
        let h = f_homotopy(&p, fin(hp.a), zeta, false).unwrap();
        prop_assert!((fuchs_sum(&h) - s).norm() <= 1e-12);
        let (nz, _, _) = normalize(&lifted).unwrap();
        prop_assert!((fuchs_sum(&nz) - s).norm() <= 1e-12 * s.norm().max(1.0) * 10.0);
    }

    #[test]
    fn mobius_lift_is_functorial(hp in arb_heun(), m1 in arb_mobius(), m2 in arb_mobius()) {
        let p = PSymbol::heun(&hp);
        let once = mobius_lift(&p, &m1.compose(&m2));
        let twice = mobius_lift(&mobius_lift(&p, &m1), &m2);
        for (x, y) in once.columns().iter().zip(twice.columns()) {
            prop_assert!(x.location.approx_eq(&y.location, 1e-8));
        }
    }

    #[test]
    fn f_homotopy_round_trip(hp in arb_heun(), zeta in cplx(2.0)) {
        let p = PSymbol::heun(&hp);
        let there = f_homotopy(&p, fin(r(1.0)), zeta, false).unwrap();
        let back = f_homotopy(&there, fin(r(1.0)), -zeta, false).unwrap();
        prop_assert!(back.equivalent(&p, 1e-13));
    }

    #[test]
    fn normalize_puts_zero_exponents(hp in arb_heun(), m in arb_mobius()) {
        let lifted = mobius_lift(&PSymbol::heun(&hp), &m);
        let (nz, map, _) = normalize(&lifted).unwrap();
        for col in nz.columns() {
            if !col.location.is_infinite() {
                prop_assert!(col.exponents.iter().any(|e| e.norm() <= 1e-10));
            }
        }
        for (old, new) in lifted.columns().iter().zip(nz.columns()) {
            prop_assert!(map.apply(old.location).approx_eq(&new.location, 1e-7));
        }
    }
}
