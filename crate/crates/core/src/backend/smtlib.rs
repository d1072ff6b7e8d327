//! SMT-LIB 2 (QF_IDL) rendering of a [`Context`].

use std::fmt::Write;

use super::{BoolVar, Context, IntVar, Lit};

fn quote(name: &str) -> String {
    let clean: String = name.chars().filter(|&c| c != '|' && c != '\\').collect();
    format!("|{clean}|")
}

fn int_name(ctx: &Context, x: IntVar) -> String {
    quote(ctx.int_name(x))
}

fn lit_term(ctx: &Context, l: Lit) -> String {
    let v = l.var();
    let base = match ctx.atom(v) {
        Some(a) => format!(
            "(<= (- {} {}) {})",
            int_name(ctx, a.x),
            int_name(ctx, a.y),
            num(a.k)
        ),
        None if v == ctx.true_lit().var() => "true".to_string(),
        None => quote(&format!("b{}:{}", v.0, ctx.bool_name(v))),
    };
    if l.is_negated() {
        format!("(not {base})")
    } else {
        base
    }
}

fn num(k: i64) -> String {
    if k < 0 {
        format!("(- {})", k.unsigned_abs())
    } else {
        k.to_string()
    }
}

pub(super) fn render(ctx: &Context) -> String {
    let mut out = String::new();
    out.push_str("(set-logic QF_IDL)\n");
    for v in 1..ctx.num_bools() {
        let v = BoolVar(v as u32);
        if ctx.atom(v).is_none() {
            let _ = writeln!(
                out,
                "(declare-fun {} () Bool)",
                quote(&format!("b{}:{}", v.0, ctx.bool_name(v)))
            );
        }
    }
    for x in 0..ctx.num_ints() {
        let _ = writeln!(out, "(declare-fun {} () Int)", int_name(ctx, IntVar(x as u32)));
    }
    let _ = writeln!(out, "(assert (= {} 0))", int_name(ctx, IntVar(0)));
    for c in ctx.clauses() {
        let terms: Vec<String> = c.iter().map(|&l| lit_term(ctx, l)).collect();
        match terms.len() {
            0 => out.push_str("(assert false)\n"),
            1 => {
                let _ = writeln!(out, "(assert {})", terms[0]);
            }
            _ => {
                let _ = writeln!(out, "(assert (or {}))", terms.join(" "));
            }
        }
    }
    if let Some(obj) = ctx.objective() {
        let mut parts = vec![num(obj.constant)];
        for &(l, c) in &obj.bools {
            parts.push(format!("(ite {} {} 0)", lit_term(ctx, l), num(c)));
        }
        for &(x, c) in &obj.ints {
            parts.push(format!("(* {} {})", num(c), int_name(ctx, x)));
        }
        let _ = writeln!(out, "(minimize (+ {}))", parts.join(" "));
    }
    out.push_str("(check-sat)\n");
    out
}
