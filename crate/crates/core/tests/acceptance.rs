//! Acceptance checks. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zhu_core::context::AlgebraContext;
use zhu_core::linalg::SparseVec;
use zhu_core::rational::{grade, q, Grade};
use zhu_core::twisted::{
    admissible_weights, classify, semisimplicity_certificate, verify_commutator, verify_power_field, verify_twisted_jacobi,
    verify_weak_associativity, TwistedModule,
};
use zhu_core::voa::shapovalov::generated_submodule;
use zhu_core::voa::Shapovalov;
use zhu_core::zhu::ZhuAlgebra;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ctx(alg: &str, mu: &str, e: Option<&str>) -> Result<AlgebraContext, String> {
    AlgebraContext::new(alg, mu, e).map_err(|x| x.to_string())
}

fn s<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Integer binomial on a possibly negative top argument.
fn binom(n: i64, k: i64) -> i64 {
    if k < 0 {
        return 0;
    }
    let mut num: i64 = 1;
    let mut den: i64 = 1;
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

fn fact(n: i64) -> i64 {
    (1..=n).product()
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for l in 1..=3i64 {
        let cx = ctx("A1", "id", Some("f"))?;
        let z = s(ZhuAlgebra::new(cx.ab.clone(), q(l), Some(l + 2)))?;
        let e = s(cx.adapted_index("e"))?;
        let ie = s(z.reduce(&s(z.i_vector(&SparseVec::unit(e)))?))?;
        for k in 1..=(l + 1) {
            let p = s(z.power(&ie, k as usize))?;
            let mut rhs = s(z.current_power(e, k as usize))?;
            for i in 0..k {
                let c = binom(k, i) * binom(l - i, k - i) * fact(k - i);
                rhs.add_scaled(&s(z.current_power(e, i as usize))?, &q(c));
            }
            ensure(p.reduced == s(z.reduce(&rhs))?.reduced, format!("l = {l}, k = {k}"))?;
            checked += 1;
        }
        let top = s(z.power(&ie, (l + 1) as usize))?;
        let pure = s(z.reduce(&s(z.current_power(e, (l + 1) as usize))?))?;
        ensure(top.reduced == pure.reduced, format!("l = {l}, k = l+1 leading term"))?;
    }
    Ok(format!("{checked} powers"))
}

fn criterion_2() -> Outcome {
    let mut checked = 0;
    for l in 1..=3i64 {
        let cx = ctx("A1", "id", Some("f"))?;
        let z = s(ZhuAlgebra::new(cx.ab.clone(), q(l), None))?;
        let v = z.v().clone();
        let (e, h, f) = (s(cx.adapted_index("e"))?, s(cx.adapted_index("h"))?, s(cx.adapted_index("f"))?);
        let pw = |k: i64| -> Result<SparseVec, String> {
            if k < 0 {
                Ok(SparseVec::new())
            } else {
                s(z.current_power(e, k as usize))
            }
        };
        for k in 0..=(l + 1) {
            let ek = pw(k)?;
            let lhs = s(v.act(f, grade(1, 1), &ek))?;
            ensure(lhs == pw(k - 1)?.scaled(&q(k * (l - k + 1))), format!("f(1) on e^k, l = {l}, k = {k}"))?;
            for i in 2..=(k + 1) {
                ensure(s(v.act(f, grade(i, 1), &ek))?.is_zero(), format!("f(i) kills e^k, l = {l}, k = {k}, i = {i}"))?;
            }
            for i in 1..=(k + 1) {
                ensure(s(v.act(h, grade(i, 1), &ek))?.is_zero(), format!("h(i) kills e^k, l = {l}, k = {k}, i = {i}"))?;
            }
            let lhs = s(z.star(&pw(1)?, &ek))?;
            let mut rhs = pw(k + 1)?;
            rhs.add_scaled(&ek, &q(-2 * k));
            rhs.add_scaled(&pw(k - 1)?, &q(-k * (l - k + 1)));
            ensure(lhs == rhs, format!("e * e^k recurrence, l = {l}, k = {k}"))?;
            checked += 4;
        }
    }
    Ok(format!("{checked} identities"))
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    let level = q(2);
    for alg in ["A1", "A2"] {
        let base = ctx(alg, "id", None)?;
        let mut choices: Vec<Option<String>> = vec![None];
        for a in 0..base.ab.dim() {
            let lab = base.ab.label(a);
            if lab.starts_with('e') || lab.starts_with('f') {
                choices.push(Some(lab.to_string()));
            }
        }
        for e in choices {
            let cx = ctx(alg, "id", e.as_deref())?;
            let z = s(ZhuAlgebra::new(cx.ab.clone(), level.clone(), Some(2)))?;
            let v = z.v().clone();
            let n = cx.ab.dim();
            for a in 0..n {
                for b in 0..n {
                    let ua = s(z.current_power(a, 1))?;
                    let ub = s(z.current_power(b, 1))?;
                    let lhs = s(z.star(&ua, &ub))?.sub(&s(z.star(&ub, &ua))?);
                    let br = cx.ab.bracket_basis(a, b).clone();
                    let mut rhs = s(v.act_element(&br, grade(-1, 1), &v.vacuum()))?;
                    let c = cx.ab.form(&cx.ab.ad_e(&SparseVec::unit(a)), &SparseVec::unit(b)) * &level;
                    rhs.add_scaled(&v.vacuum(), &c);
                    ensure(
                        s(z.reduce(&lhs))?.reduced == s(z.reduce(&rhs))?.reduced,
                        format!("{alg}, e = {e:?}, pair ({}, {})", cx.ab.label(a), cx.ab.label(b)),
                    )?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} pairs"))
}

fn criterion_4() -> Outcome {
    let mut out = Vec::new();
    for (alg, mu, e) in [("A1", "id", None), ("A1", "id", Some("f")), ("A2", "flip", None), ("A3", "flip", None)] {
        let cx = ctx(alg, mu, e)?;
        let z = s(ZhuAlgebra::new(cx.ab.clone(), q(1), Some(3)))?;
        let dims = s(z.map_i_span_dims(3))?;
        let n = cx.ab.fixed.len() as i64;
        for &(d, got, want) in &dims {
            ensure(got == want, format!("{alg} {mu} e = {e:?}: degree {d}: {got} vs {want}"))?;
            ensure(want as i64 == binom(n + d as i64, d as i64), "PBW count")?;
        }
        out.push(format!("{alg}/{mu}{}: {}", if e.is_some() { "/e" } else { "" }, dims.last().unwrap().1));
    }
    Ok(out.join(", "))
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    for alg in ["A2", "A3"] {
        let cx = ctx(alg, "flip", None)?;
        let z = s(ZhuAlgebra::new(cx.ab.clone(), q(1), Some(3)))?;
        let v = z.v().clone();
        for i in 0..v.dim() {
            if v.class_of(i) == 0 || v.depth_of(i) > grade(3, 1) {
                continue;
            }
            ensure(s(z.reduce(&SparseVec::unit(i)))?.reduced.is_zero(), format!("{alg}: {}", v.state_label(i)))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} basis vectors"))
}

fn random_homogeneous(by_weight: &BTreeMap<i64, Vec<usize>>, wt: i64, rng: &mut ChaCha8Rng) -> SparseVec {
    let states = &by_weight[&wt];
    let mut x = SparseVec::new();
    while x.is_zero() {
        for _ in 0..rng.gen_range(1..=3) {
            let i = states[rng.gen_range(0..states.len())];
            x.add_term(i, q(rng.gen_range(-3..=3)));
        }
    }
    x
}

fn random_weights(rng: &mut ChaCha8Rng, budget: i64) -> (i64, i64, i64) {
    loop {
        let (a, b, c) = (rng.gen_range(0..=budget), rng.gen_range(0..=budget), rng.gen_range(0..=budget));
        if a + b + c <= budget {
            return (a, b, c);
        }
    }
}

fn criterion_6() -> Outcome {
    let cx = ctx("A1", "id", None)?;
    let z = s(ZhuAlgebra::new(cx.ab.clone(), q(1), Some(4)))?;
    let v = z.v().clone();
    let mut by_weight: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for i in 0..v.dim() {
        by_weight.entry(v.depth_of(i).to_integer()).or_default().push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    let trials = 200;
    for t in 0..trials {
        let (a, b, c) = random_weights(&mut rng, 3);
        let (x, y, w) = (
            random_homogeneous(&by_weight, a, &mut rng),
            random_homogeneous(&by_weight, b, &mut rng),
            random_homogeneous(&by_weight, c, &mut rng),
        );
        let r = s(z.verify_ideal(&x, &y, &w))?;
        ensure(r.equal, format!("ideal trial {t}: {}", r.instance))?;
        let (a, b, c) = random_weights(&mut rng, 4);
        let (x, y, w) = (
            random_homogeneous(&by_weight, a, &mut rng),
            random_homogeneous(&by_weight, b, &mut rng),
            random_homogeneous(&by_weight, c, &mut rng),
        );
        let r = s(z.verify_associativity(&x, &y, &w))?;
        ensure(r.equal, format!("associativity trial {t}: {}", r.instance))?;
    }
    Ok(format!("{trials} ideal and {trials} associativity triples"))
}

fn criterion_7() -> Outcome {
    let mut checked = 0;
    let mut excluded = 0;
    let instances: Vec<(&str, &str, Option<&str>, Vec<i64>, Grade, Grade)> = vec![
        ("A1", "id", Some("f"), vec![0], grade(2, 1), grade(1, 1)),
        ("A1", "id", Some("f"), vec![1], grade(2, 1), grade(1, 1)),
        ("A2", "flip", None, vec![0], grade(3, 2), grade(1, 2)),
        ("A2", "flip", None, vec![1], grade(3, 2), grade(1, 2)),
    ];
    for (alg, mu, e, lam, depth, wdepth) in instances {
        let cx = ctx(alg, mu, e)?;
        let tm = s(TwistedModule::verma(&cx, &lam, &q(1), depth, 3))?;
        let ws = tm.basis_states(wdepth);
        let n = cx.ab.dim();
        for a in 0..n {
            for b in 0..n {
                let u = s(tm.current_power(&SparseVec::unit(a), 1))?;
                let v = s(tm.current_power(&SparseVec::unit(b), 1))?;
                for r in [
                    s(verify_twisted_jacobi(&tm, &u, &v, &ws, 2))?,
                    s(verify_commutator(&tm, &u, &v, &ws, 2))?,
                    s(verify_weak_associativity(&tm, &u, &v, &ws, 2))?,
                ] {
                    ensure(r.equal, format!("{alg} {mu} λ = {lam:?} {}: {} ({} vs {})", r.identity_name, r.instance, r.lhs, r.rhs))?;
                    checked += r.checked;
                    excluded += r.excluded;
                }
            }
        }
    }
    Ok(format!("{checked} coefficients equal, {excluded} excluded by truncation"))
}

fn criterion_8() -> Outcome {
    let cx = ctx("A1", "id", None)?;
    let v = s(cx.vacuum_module(&q(1), 4))?;
    let rad = s(Shapovalov::new(&v).radical())?;
    let e = s(cx.adapted_index("e"))?;
    let seed = s(v.act(e, grade(-1, 1), &s(v.act(e, grade(-1, 1), &v.vacuum()))?))?;
    let sub = s(generated_submodule(&v, &[seed]))?;
    let mut gen_dims: BTreeMap<Grade, usize> = BTreeMap::new();
    for p in sub.pivots() {
        *gen_dims.entry(v.depth_of(p)).or_default() += 1;
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    for &(d, _, r) in &rad.graded {
        a.push(r);
        b.push(gen_dims.get(&d).copied().unwrap_or(0));
    }
    ensure(a == b, format!("radical {a:?} vs generated {b:?}"))?;
    for row in sub.rows() {
        ensure(rad.contains(row), "generated vector outside radical")?;
    }
    Ok(format!("radical dims {a:?}"))
}

fn criterion_9() -> Outcome {
    let cx = ctx("A1", "id", None)?;
    let list = s(classify(&cx, &q(1), grade(1, 1), 2))?;
    let adm = admissible_weights(&list);
    ensure(adm == vec![vec![0], vec![1]], format!("admissible {adm:?}"))?;
    let bad = &list[2];
    ensure(bad.lambda == vec![2] && !bad.theta_power_vanishes && !bad.singular_vanishes, "λ = 2ω passes")?;
    Ok(format!("admissible {adm:?}, λ = [2] rejected"))
}

fn criterion_10() -> Outcome {
    let mut out = Vec::new();
    for (alg, mu, e, bound) in [("A1", "id", None, 2), ("A1", "id", Some("f"), 2), ("A2", "flip", None, 2), ("A3", "flip", None, 1)] {
        let cx = ctx(alg, mu, e)?;
        let list = s(classify(&cx, &q(1), grade(1, 1), bound))?;
        let adm = admissible_weights(&list);
        ensure(!adm.is_empty(), format!("{alg} {mu}: no admissible weight"))?;
        for lam in &adm {
            let tm = s(TwistedModule::simple(&cx, lam, &q(1), grade(1, 1), 2))?;
            let om = s(tm.omega_subspace(grade(1, 1)))?;
            let cert = s(semisimplicity_certificate(&cx, &tm, &om))?;
            ensure(
                cert.semisimple && cert.theta_power_vanishes,
                format!("{alg} {mu} λ = {lam:?}: {cert:?}"),
            )?;
        }
        out.push(format!("{alg}/{mu}{}: {adm:?}", if e.is_some() { "/e" } else { "" }));
    }
    Ok(out.join(", "))
}

fn criterion_11() -> Outcome {
    let plain = ctx("A2", "flip", None)?;
    let twisted = ctx("A2", "flip", Some("f_10 + f_01"))?;
    let a = admissible_weights(&s(classify(&plain, &q(1), grade(1, 1), 2))?);
    let b = admissible_weights(&s(classify(&twisted, &q(1), grade(1, 1), 2))?);
    ensure(!a.is_empty() && a == b, format!("μ-twisted {a:?} vs σ-twisted {b:?}"))?;
    Ok(format!("both {a:?}"))
}

fn criterion_12() -> Outcome {
    let mut checked = 0;
    let mut excluded = 0;
    for l in 1..=2i64 {
        let cx = ctx("A2", "flip", None)?;
        let f = s(cx.adapted_index("e_11"))?;
        let tm = s(TwistedModule::verma(&cx, &[0], &q(l), grade(3, 1), l + 1))?;
        let ws = tm.basis_states(grade(1, 1));
        let r = s(verify_power_field(&tm, f, (l + 1) as usize, &ws, 2))?;
        ensure(r.equal, format!("l = {l}: {} vs {}", r.lhs, r.rhs))?;
        checked += r.checked;
        excluded += r.excluded;
    }
    Ok(format!("{checked} coefficients equal, {excluded} excluded by truncation"))
}

fn main() {
    let criteria: Vec<(usize, fn() -> Outcome)> = vec![
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
        (12, criterion_12),
    ];
    let results: Vec<(usize, Outcome, f64)> = std::thread::scope(|sc| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&(n, f)| {
                sc.spawn(move || {
                    let t = Instant::now();
                    let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
                    (n, r, t.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("criterion thread")).collect()
    });
    let mut failed = 0;
    for (n, r, secs) in &results {
        match r {
            Ok(msg) => println!("criterion {n:2}: PASS ({secs:.1}s) {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n:2}: FAIL ({secs:.1}s) {msg}")
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
