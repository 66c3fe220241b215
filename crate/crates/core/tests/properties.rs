use std::sync::Arc;

use num_traits::Zero;
use proptest::prelude::*;
use zhu_core::context::AlgebraContext;
use zhu_core::error::Error;
use zhu_core::linalg::SparseVec;
use zhu_core::rational::{grade, q, Grade};
use zhu_core::twisted::{iso_phi, iso_phi_inverse, mu_bracket, twisted_bracket, TwistedAffineElement};
use zhu_core::uea::{pbw_normalize, PBWElement, StructureConstants};
use zhu_core::voa::vertex::virasoro;
use zhu_core::voa::conformal_vector;
use zhu_core::voa::VertexOps;
use zhu_core::zhu::ZhuAlgebra;

fn cx(alg: &str, mu: &str, e: Option<&str>) -> AlgebraContext {
    AlgebraContext::new(alg, mu, e).unwrap()
}

fn combo(n: usize) -> impl Strategy<Value = SparseVec> {
    prop::collection::vec((0..n, -3i64..=3), 1..4).prop_map(|t| SparseVec::from_pairs(t.into_iter().map(|(i, c)| (i, q(c)))))
}

/// Random element with modes in the right cosets, `|m| ≤ 2`.
fn affine(ab_dim: usize, classes: Vec<usize>, order: i64) -> impl Strategy<Value = TwistedAffineElement> {
    (prop::collection::vec((0..ab_dim, -2i64..=1, -3i64..=3), 1..4), -2i64..=2).prop_map(move |(t, z)| {
        let mut x = TwistedAffineElement::central(q(z));
        for (a, j, c) in t {
            x.add_term(a, Grade::new(classes[a] as i64, order) + Grade::from_integer(j), q(c));
        }
        x
    })
}

fn flip_classes() -> Vec<usize> {
    let c = cx("A2", "flip", None);
    (0..c.ab.dim()).map(|a| c.ab.class(a)).collect()
}

fn skip_truncation<T>(r: Result<T, Error>) -> Result<T, TestCaseError> {
    match r {
        Ok(x) => Ok(x),
        Err(Error::Truncation { .. }) => Err(TestCaseError::reject("beyond truncation")),
        Err(e) => Err(TestCaseError::fail(e.to_string())),
    }
}

thread_local! {
    static ZHU_SL2: ZhuAlgebra = {
        let c = cx("A1", "id", Some("f"));
        ZhuAlgebra::new(c.ab.clone(), q(1), Some(4)).unwrap()
    };
    static ZHU_A2_FLIP: ZhuAlgebra = {
        let c = cx("A2", "flip", None);
        ZhuAlgebra::new(c.ab.clone(), q(1), Some(3)).unwrap()
    };
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pbw_product_is_concatenation(alg in prop::sample::select(vec!["A1", "A2"]), seed in any::<u64>()) {
        let g = cx(alg, "id", None).g;
        let sc = Arc::new(StructureConstants::from_lie(&g));
        let n = sc.dim();
        let mut s = seed;
        let mut word = |len: usize| -> Vec<usize> {
            (0..len).map(|_| { s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); ((s >> 33) as usize) % n }).collect()
        };
        let l1 = (seed % 4) as usize;
        let l2 = ((seed >> 8) % 3) as usize;
        let (w1, w2) = (word(l1), word(l2));
        let joint: Vec<usize> = w1.iter().chain(&w2).copied().collect();
        let p = pbw_normalize(&sc, &w1).multiply(&pbw_normalize(&sc, &w2)).unwrap();
        let whole = pbw_normalize(&sc, &joint);
        prop_assert_eq!(&p, &whole);
        // idempotent: normal monomials are fixed
        let mut again = PBWElement::zero(&sc);
        for (m, c) in whole.terms() {
            again = again.add(&pbw_normalize(&sc, m).scaled(c)).unwrap();
        }
        prop_assert_eq!(&again, &whole);
        // top symbol is the sorted word
        prop_assert!(whole.degree() <= joint.len());
        if !joint.is_empty() {
            let mut sorted = joint.clone();
            sorted.sort();
            let top: Vec<_> = whole.terms().iter().filter(|(m, _)| m.len() == joint.len()).collect();
            prop_assert_eq!(top.len(), 1);
            prop_assert_eq!(top[0].0, &sorted);
            prop_assert_eq!(top[0].1, &q(1));
        }
    }

    #[test]
    fn sigma_is_an_automorphism(x in combo(8), y in combo(8), with_e in any::<bool>()) {
        let c = cx("A2", "flip", if with_e { Some("f_10 + f_01") } else { None });
        let (g, aut) = (&c.g, &c.aut);
        let lhs = aut.sigma(g, &g.bracket(&x, &y));
        let rhs = g.bracket(&aut.sigma(g, &x), &aut.sigma(g, &y));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(g.invariant_form(&aut.mu(&x), &aut.mu(&y)), g.invariant_form(&x, &y));
    }

    #[test]
    fn phi_transports_brackets(x in affine(8, flip_classes(), 2), y in affine(8, flip_classes(), 2)) {
        let c = cx("A2", "flip", Some("f_10 + f_01"));
        let ab = &c.ab;
        prop_assert_eq!(iso_phi_inverse(ab, &iso_phi(ab, &x)), x.clone());
        let lhs = iso_phi(ab, &twisted_bracket(ab, &x, &y).unwrap());
        let rhs = mu_bracket(ab, &iso_phi(ab, &x), &iso_phi(ab, &y)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn twisted_currents_follow_the_sigma_bracket(
        a in 0usize..8, b in 0usize..8, j in -1i64..=1, k in -1i64..=1, s in 0usize..20,
    ) {
        let c = cx("A2", "flip", Some("f_10 + f_01"));
        let w = c.twisted_verma(&[1], &q(1), grade(2, 1)).unwrap();
        let ab = &c.ab;
        let level = w.level.clone();
        let m = Grade::new(ab.class(a) as i64, 2) + Grade::from_integer(j);
        let n = Grade::new(ab.class(b) as i64, 2) + Grade::from_integer(k);
        let x = SparseVec::unit(s % w.dim());
        // a ⊗ t^m acts as a(m) - δ_{m,0} ⟨e, a⟩ ℓ
        let act = |el: &TwistedAffineElement, v: &SparseVec| -> Result<SparseVec, Error> {
            let mut out = v.scaled(&(&el.central * &level));
            for (&(i, p), coef) in &el.terms {
                let mut y = w.act(i, p, v)?;
                if p.is_zero() {
                    y.add_scaled(v, &-(ab.form(&ab.e, &SparseVec::unit(i)) * &level));
                }
                out.add_scaled(&y, coef);
            }
            Ok(out)
        };
        let (xa, xb) = (TwistedAffineElement::basis(a, m), TwistedAffineElement::basis(b, n));
        let ab_x = skip_truncation(act(&xb, &x).and_then(|y| act(&xa, &y)))?;
        let ba_x = skip_truncation(act(&xa, &x).and_then(|y| act(&xb, &y)))?;
        let br = twisted_bracket(ab, &xa, &xb).unwrap();
        let rhs = skip_truncation(act(&br, &x))?;
        prop_assert_eq!(ab_x.sub(&ba_x), rhs);
    }

    #[test]
    fn l0_and_l_minus_one_commutators(a in 0usize..3, j in -2i64..=2, s in 0usize..40) {
        let c = cx("A1", "id", None);
        let v = c.vacuum_module(&q(1), 3).unwrap();
        let ops = VertexOps::on_self(v.clone()).unwrap();
        let omega = conformal_vector(&v, c.dual_coxeter()).unwrap();
        let n = Grade::from_integer(j);
        let x = SparseVec::unit(s % v.dim());
        let l = |p: i64, y: &SparseVec| virasoro(&ops, &omega, grade(p, 1), y);
        let lhs0 = skip_truncation(v.act(a, n, &x).and_then(|y| l(0, &y)))?
            .sub(&skip_truncation(l(0, &x).and_then(|y| v.act(a, n, &y)))?);
        prop_assert_eq!(lhs0, skip_truncation(v.act(a, n, &x))?.scaled(&-q(j)));
        let lhs1 = skip_truncation(v.act(a, n, &x).and_then(|y| l(-1, &y)))?
            .sub(&skip_truncation(l(-1, &x).and_then(|y| v.act(a, n, &y)))?);
        prop_assert_eq!(lhs1, skip_truncation(v.act(a, n - Grade::from_integer(1), &x))?.scaled(&-q(j)));
    }

    #[test]
    fn zhu_ideal_and_associativity(pick in prop::collection::vec((0usize..400, -2i64..=2), 3..9)) {
        ZHU_SL2.with(|z| -> Result<(), TestCaseError> {
            let v = z.v();
            let by_weight = |w: i64| -> Vec<usize> { (0..v.dim()).filter(|&i| v.depth_of(i) == grade(w, 1)).collect() };
            let mut vecs = Vec::new();
            for (t, (i, c)) in pick.iter().enumerate().take(3) {
                let states = by_weight((*i as i64) % 2);
                let mut x = SparseVec::single(states[i % states.len()], q(if *c == 0 { 1 } else { *c }));
                if let Some((i2, c2)) = pick.get(t + 3) {
                    x.add_term(states[i2 % states.len()], q(*c2));
                }
                if x.is_zero() {
                    x = SparseVec::unit(states[0]);
                }
                vecs.push(x);
            }
            let r = z.verify_ideal(&vecs[0], &vecs[1], &vecs[2]).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert!(r.equal, "{}", r.instance);
            let r = z.verify_associativity(&vecs[0], &vecs[1], &vecs[2]).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert!(r.equal, "{}", r.instance);
            Ok(())
        })?;
    }

    #[test]
    fn shifted_derivative_classes_vanish(a in 0usize..8, s in 0usize..12, k in 0i64..=1) {
        ZHU_A2_FLIP.with(|z| -> Result<(), TestCaseError> {
            let c = z.ab();
            prop_assume!(c.class(a) == 0);
            let v = z.v();
            let low: Vec<usize> = (0..v.dim()).filter(|&i| v.depth_of(i) <= grade(1 - k, 1)).collect();
            let x = SparseVec::unit(low[s % low.len()]);
            let mut y = skip_truncation(v.act(a, grade(-k - 2, 1), &x))?;
            y.add(&skip_truncation(v.act(a, grade(-k - 1, 1), &x))?);
            let r = z.reduce(&y).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert!(r.reduced.is_zero());
            Ok(())
        })?;
    }
}

#[test]
fn zero_class_is_zero() {
    ZHU_SL2.with(|z| {
        assert!(z.reduce(&SparseVec::new()).unwrap().reduced.is_zero());
        assert!(!z.vacuum_class().unwrap().reduced.is_zero());
    });
}
