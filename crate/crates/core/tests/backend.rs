use comsat::backend::{Context, LinExpr, Lit, Outcome};

/// Counts models over `lits` by repeatedly blocking the last one found.
fn count_models(ctx: &mut Context, lits: &[Lit]) -> usize {
    let mut n = 0;
    while let Outcome::Sat(m) = ctx.check() {
        n += 1;
        let block: Vec<Lit> = lits.iter().map(|&l| if m.lit(l) { !l } else { l }).collect();
        ctx.assert(Context::clause(block));
        assert!(n <= 1 << lits.len());
    }
    n
}

fn bools(ctx: &mut Context, n: usize) -> Vec<Lit> {
    (0..n).map(|i| ctx.new_bool(format!("x{i}")).into()).collect()
}

/// Number of the 2^n assignments with exactly `k` true values.
fn brute_count(n: usize, k: usize) -> usize {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).count()
}

#[test]
fn exactly_one_singleton_forces_true() {
    let mut ctx = Context::new();
    let x = bools(&mut ctx, 1);
    ctx.assert(Context::exactly_one(&x).unwrap());
    let Outcome::Sat(m) = ctx.check() else { panic!() };
    assert!(m.lit(x[0]));
    assert_eq!(count_models(&mut ctx, &x), 1);
}

#[test]
fn exactly_one_rejects_two_true() {
    let mut ctx = Context::new();
    let x = bools(&mut ctx, 2);
    let c = Context::exactly_one(&x).unwrap();
    ctx.assert(c.clone());
    ctx.assert_lit(x[0]);
    ctx.assert_lit(x[1]);
    assert!(matches!(ctx.check(), Outcome::Unsat));
}

#[test]
fn exactly_one_of_three_has_three_models() {
    let mut ctx = Context::new();
    let x = bools(&mut ctx, 3);
    ctx.assert(Context::exactly_one(&x).unwrap());
    assert_eq!(count_models(&mut ctx, &x), brute_count(3, 1));
}

#[test]
fn exactly_n_examples() {
    let mut ctx = Context::new();
    let x = bools(&mut ctx, 2);
    ctx.assert(Context::exactly_n(&x, 0).unwrap());
    let Outcome::Sat(m) = ctx.check() else { panic!() };
    assert!(!m.lit(x[0]) && !m.lit(x[1]));

    let mut ctx = Context::new();
    let x = bools(&mut ctx, 3);
    ctx.assert(Context::exactly_n(&x, 2).unwrap());
    assert_eq!(count_models(&mut ctx, &x), brute_count(3, 2));

    let mut ctx = Context::new();
    let x = bools(&mut ctx, 1);
    ctx.assert(Context::exactly_n(&x, 1).unwrap());
    assert_eq!(count_models(&mut ctx, &x), 1);
}

#[test]
fn exactly_n_out_of_range() {
    let mut ctx = Context::new();
    let x = bools(&mut ctx, 2);
    assert!(Context::exactly_n(&x, 3).is_err());
    assert!(Context::exactly_one(&[]).is_err());
}

#[test]
fn ite_constants() {
    let mut ctx = Context::new();
    let t = ctx.true_lit();
    let on = ctx.ite(t, LinExpr::constant(5), LinExpr::constant(0)).unwrap();
    let off = ctx.ite(!t, LinExpr::constant(5), LinExpr::constant(0)).unwrap();
    let Outcome::Sat(m) = ctx.check() else { panic!() };
    assert_eq!(m.eval(&on), 5);
    assert_eq!(m.eval(&off), 0);
}

#[test]
fn minimize_bound_attained() {
    let mut ctx = Context::new();
    let x = ctx.new_int("x", 0, None);
    let lo = ctx.ge(x, 3);
    ctx.assert_lit(lo);
    ctx.minimize(LinExpr::int(x));
    let Outcome::Sat(m) = ctx.check_minimize().unwrap() else { panic!() };
    assert_eq!(m.int(x), 3);
}

#[test]
fn contradiction_is_unsat() {
    let mut ctx = Context::new();
    let x = ctx.new_int("x", 0, None);
    let a = ctx.ge(x, 1);
    let b = ctx.le(x, 0);
    ctx.assert_lit(a);
    ctx.assert_lit(b);
    ctx.minimize(LinExpr::int(x));
    assert!(matches!(ctx.check_minimize().unwrap(), Outcome::Unsat));
}

#[test]
fn path_choice_objective() {
    // two pairs, two candidates each, lengths {3,5} and {2,4}
    let lengths = [[3, 5], [2, 4]];
    let mut ctx = Context::new();
    let mut obj = LinExpr::default();
    let mut vars = Vec::new();
    for pair in &lengths {
        let v = bools(&mut ctx, 2);
        ctx.assert(Context::exactly_one(&v).unwrap());
        for (i, &len) in pair.iter().enumerate() {
            obj = obj + ctx.ite(v[i], LinExpr::constant(len), LinExpr::constant(0)).unwrap();
        }
        vars.push(v);
    }
    ctx.minimize(obj);
    let Outcome::Sat(m) = ctx.check_minimize().unwrap() else { panic!() };
    let brute = lengths.iter().map(|p| p[0].min(p[1])).sum::<i64>();
    assert_eq!(m.objective, Some(brute));
    assert_eq!(brute, 5);
    assert!(m.lit(vars[0][0]) && m.lit(vars[1][0]));
}

#[test]
fn timeout_is_reported() {
    let mut ctx = Context::new();
    // pigeonhole 9 into 8: hard enough to outlast an expired deadline
    let holes = 8;
    let p: Vec<Vec<Lit>> = (0..=holes).map(|_| bools(&mut ctx, holes)).collect();
    for row in &p {
        ctx.assert(Context::clause(row.clone()));
    }
    for h in 0..holes {
        for (a, pa) in p.iter().enumerate() {
            for pb in &p[a + 1..] {
                ctx.assert(Context::clause([!pa[h], !pb[h]]));
            }
        }
    }
    ctx.set_deadline(Some(std::time::Instant::now()));
    assert!(matches!(ctx.check(), Outcome::Timeout));
}

#[test]
fn floor_stops_minimization_early() {
    let mut ctx = Context::new();
    let x = bools(&mut ctx, 4);
    ctx.assert(Context::clause(x.clone()));
    ctx.minimize(x.iter().map(|&l| LinExpr::lit(l)).sum());
    ctx.set_objective_floor(Some(1));
    let Outcome::Sat(m) = ctx.check_minimize().unwrap() else { panic!() };
    assert_eq!(m.objective, Some(1));
}
