use super::*;
use proptest::prelude::*;

fn brute_exists(n_bools: usize, cs: &[Vec<Lit>], f: impl Fn(&[bool]) -> bool) -> Option<Vec<bool>> {
    (0u32..(1 << n_bools)).find_map(|mask| {
        let vals: Vec<bool> = (0..n_bools).map(|i| mask >> i & 1 == 1).collect();
        let ok = cs.iter().all(|c| {
            c.iter()
                .any(|l| vals[l.var_index() - 1] != l.is_negated())
        });
        (ok && f(&vals)).then_some(vals)
    })
}

#[test]
fn exactly_one_and_card_eq() {
    for n in 0..=5usize {
        for len in 1..=6usize {
            let mut ctx = Context::new();
            let lits: Vec<Lit> = (0..len).map(|i| ctx.new_bool(format!("x{i}")).into()).collect();
            let e = ctx.card_eq(&lits, n);
            ctx.assert_lit(e);
            match ctx.check() {
                Outcome::Sat(m) => {
                    assert!(n <= len);
                    assert_eq!(lits.iter().filter(|&&l| m.lit(l)).count(), n);
                }
                Outcome::Unsat => assert!(n > len),
                Outcome::Timeout => unreachable!(),
            }
            if n <= len {
                let mut ctx2 = Context::new();
                let lits: Vec<Lit> =
                    (0..len).map(|i| ctx2.new_bool(format!("x{i}")).into()).collect();
                let e = ctx2.card_eq(&lits, n);
                ctx2.assert_lit(!e);
                match ctx2.check() {
                    Outcome::Sat(m) => {
                        assert_ne!(lits.iter().filter(|&&l| m.lit(l)).count(), n)
                    }
                    // only possible when every count equals n, which never happens for len >= 1
                    _ => panic!("negated card_eq must be satisfiable"),
                }
            }
        }
    }
}

#[test]
fn cardinality_errors() {
    assert_eq!(Context::exactly_one(&[]), Err(BackendError::EmptyCardinality));
    let l = Lit(2);
    assert!(matches!(
        Context::exactly_n(&[l], 2),
        Err(BackendError::CardinalityOutOfRange { n: 2, len: 1 })
    ));
}

#[test]
fn difference_chain_least_model() {
    let mut ctx = Context::new();
    let a = ctx.new_int("a", 2, None);
    let b = ctx.new_int("b", 0, Some(20));
    let c = ctx.new_int("c", 0, None);
    let l1 = ctx.diff_ge(b, a, 3);
    let l2 = ctx.diff_ge(c, b, 4);
    ctx.assert_lit(l1);
    ctx.assert_lit(l2);
    let Outcome::Sat(m) = ctx.check() else { panic!() };
    assert_eq!((m.int(a), m.int(b), m.int(c)), (2, 5, 9));
    let bad = ctx.le(c, 8);
    ctx.assert_lit(bad);
    assert!(matches!(ctx.check(), Outcome::Unsat));
}

#[test]
fn mirrored_atoms_share_a_variable() {
    let mut ctx = Context::new();
    let x = ctx.new_int("x", 0, None);
    let y = ctx.new_int("y", 0, None);
    let p = ctx.diff_le(x, y, 3);
    let q = ctx.diff_le(y, x, -4);
    assert_eq!(p, !q);
    assert_eq!(ctx.diff_le(x, x, 0), ctx.true_lit());
    assert_eq!(ctx.diff_le(x, x, -1), !ctx.true_lit());
}

#[test]
fn ite_with_variable_branches() {
    let mut ctx = Context::new();
    let c = ctx.new_bool("c");
    let x = ctx.new_int("x", 0, Some(10));
    let lx = ctx.ge(x, 7);
    ctx.assert_lit(lx);
    let e = ctx
        .ite(c.into(), LinExpr::int(x) + LinExpr::constant(2), LinExpr::constant(1))
        .unwrap();
    ctx.assert_lit(c.into());
    let Outcome::Sat(m) = ctx.check() else { panic!() };
    assert_eq!(m.eval(&e), m.int(x) + 2);
    let bad = LinExpr::int(x) + LinExpr::int(x);
    assert!(ctx.ite(c.into(), bad, LinExpr::constant(0)).is_err());
}

#[test]
fn minimize_single_int() {
    let mut ctx = Context::new();
    let x = ctx.new_int("x", 0, Some(100));
    let y = ctx.new_int("y", 0, Some(100));
    let b = ctx.new_bool("b");
    // b => x >= y + 10 ; !b => x >= 40 ; y >= 25
    let l1 = ctx.diff_ge(x, y, 10);
    let l2 = ctx.ge(x, 40);
    let l3 = ctx.ge(y, 25);
    ctx.assert(Context::clause([!Lit::from(b), l1]));
    ctx.assert(Context::clause([Lit::from(b), l2]));
    ctx.assert_lit(l3);
    ctx.minimize(LinExpr::int(x));
    let Outcome::Sat(m) = ctx.check_minimize().unwrap() else { panic!() };
    assert_eq!(m.objective, Some(35));
    // the bound guards must not leak into plain checks
    let Outcome::Sat(_) = ctx.check() else { panic!() };
}

#[test]
fn unsupported_objective() {
    let mut ctx = Context::new();
    let x = ctx.new_int("x", 0, None);
    ctx.minimize(LinExpr {
        constant: 0,
        bools: vec![],
        ints: vec![(x, -1)],
    });
    assert!(matches!(
        ctx.check_minimize(),
        Err(BackendError::UnsupportedObjective(_))
    ));
}

#[test]
fn smtlib_dump_mentions_everything() {
    let mut ctx = Context::new();
    let x = ctx.new_int("x", 1, None);
    let b = ctx.new_bool("flag");
    let l = ctx.le(x, 5);
    ctx.assert(Context::clause([Lit::from(b), l]));
    ctx.minimize(LinExpr::lit(b.into()));
    let s = ctx.to_smtlib();
    assert!(s.starts_with("(set-logic QF_IDL)"));
    assert!(s.contains("(declare-fun |x| () Int)"));
    assert!(s.contains("flag"));
    assert!(s.contains("(minimize"));
    assert!(s.trim_end().ends_with("(check-sat)"));
}

fn arb_clauses(n: usize) -> impl Strategy<Value = Vec<Vec<(usize, bool)>>> {
    prop::collection::vec(prop::collection::vec((0..n, any::<bool>()), 1..4), 0..14)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sat_agrees_with_enumeration(cs in arb_clauses(6)) {
        let mut ctx = Context::new();
        let vars: Vec<BoolVar> = (0..6).map(|i| ctx.new_bool(format!("v{i}"))).collect();
        let lits: Vec<Vec<Lit>> = cs.iter().map(|c| c.iter().map(|&(v, neg)| {
            let l = Lit::from(vars[v]);
            if neg { !l } else { l }
        }).collect()).collect();
        for c in &lits {
            ctx.assert(Context::clause(c.clone()));
        }
        let expected = brute_exists(6, &lits, |_| true);
        match ctx.check() {
            Outcome::Sat(m) => {
                prop_assert!(expected.is_some());
                for c in ctx.constraints() {
                    prop_assert!(c.holds(&m));
                }
            }
            Outcome::Unsat => prop_assert!(expected.is_none()),
            Outcome::Timeout => prop_assert!(false),
        }
    }

    #[test]
    fn pb_minimum_matches_enumeration(
        cs in arb_clauses(5),
        weights in prop::collection::vec(-4i64..6, 5),
        group in prop::collection::vec(0usize..5, 0..4),
    ) {
        let mut ctx = Context::new();
        let vars: Vec<BoolVar> = (0..5).map(|i| ctx.new_bool(format!("v{i}"))).collect();
        let lits: Vec<Vec<Lit>> = cs.iter().map(|c| c.iter().map(|&(v, neg)| {
            let l = Lit::from(vars[v]);
            if neg { !l } else { l }
        }).collect()).collect();
        for c in &lits {
            ctx.assert(Context::clause(c.clone()));
        }
        let mut g: Vec<usize> = group.clone();
        g.sort();
        g.dedup();
        if !g.is_empty() {
            let gl: Vec<Lit> = g.iter().map(|&i| vars[i].into()).collect();
            ctx.assert(Context::exactly_one(&gl).unwrap());
        }
        ctx.minimize(LinExpr {
            constant: 3,
            bools: vars.iter().zip(&weights).map(|(&v, &w)| (Lit::from(v), w)).collect(),
            ints: vec![],
        });
        let cost = |vals: &[bool]| 3 + vals.iter().zip(&weights).map(|(&b, &w)| if b { w } else { 0 }).sum::<i64>();
        let mut best: Option<i64> = None;
        for mask in 0u32..32 {
            let vals: Vec<bool> = (0..5).map(|i| mask >> i & 1 == 1).collect();
            let ok = brute_exists(5, &lits, |v| v == vals.as_slice()).is_some()
                && (g.is_empty() || g.iter().filter(|&&i| vals[i]).count() == 1);
            if ok {
                best = Some(best.map_or(cost(&vals), |b: i64| b.min(cost(&vals))));
            }
        }
        match ctx.check_minimize().unwrap() {
            Outcome::Sat(m) => prop_assert_eq!(m.objective, best),
            Outcome::Unsat => prop_assert!(best.is_none()),
            Outcome::Timeout => prop_assert!(false),
        }
    }

    #[test]
    fn difference_logic_agrees_with_enumeration(
        atoms in prop::collection::vec((0usize..4, 0usize..4, -3i64..4, any::<bool>()), 1..8),
        picks in prop::collection::vec(prop::collection::vec(0usize..8, 1..3), 0..6),
    ) {
        // ints in [0, 4]; atoms chosen at random, clauses over atom literals
        let mut ctx = Context::new();
        let xs: Vec<IntVar> = (0..4).map(|i| ctx.new_int(format!("x{i}"), 0, Some(4))).collect();
        let lits: Vec<(Lit, (usize, usize, i64, bool))> = atoms.iter().map(|&(a, b, k, neg)| {
            let l = ctx.diff_le(xs[a], xs[b], k);
            (if neg { !l } else { l }, (a, b, k, neg))
        }).collect();
        let clauses: Vec<Vec<usize>> = picks.iter().map(|c| c.iter().map(|&i| i % lits.len()).collect()).collect();
        for c in &clauses {
            ctx.assert(Context::clause(c.iter().map(|&i| lits[i].0)));
        }
        let holds = |v: &[i64], (a, b, k, neg): (usize, usize, i64, bool)| (v[a] - v[b] <= k) != neg;
        let mut exists = false;
        for code in 0..625usize {
            let v: Vec<i64> = (0..4).map(|i| (code / 5usize.pow(i as u32) % 5) as i64).collect();
            if clauses.iter().all(|c| c.iter().any(|&i| holds(&v, lits[i].1))) {
                exists = true;
                break;
            }
        }
        match ctx.check() {
            Outcome::Sat(m) => {
                prop_assert!(exists);
                let v: Vec<i64> = xs.iter().map(|&x| m.int(x)).collect();
                for &x in &v {
                    prop_assert!((0..=4).contains(&x));
                }
                for c in &clauses {
                    prop_assert!(c.iter().any(|&i| holds(&v, lits[i].1)));
                }
            }
            Outcome::Unsat => prop_assert!(!exists),
            Outcome::Timeout => prop_assert!(false),
        }
    }
}
