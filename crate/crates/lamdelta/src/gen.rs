//! Random generation of well-typed terms, contexts and types, plus a
//! counterexample shrinker.
//!
//! Generation is goal directed: a target type is picked first and the term
//! is grown against it, because well-typed terms of this calculus are far
//! too sparse for generate-then-filter. To make Δ bodies (goal `bot`)
//! inhabitable, application moves prefer context variables of negation
//! type, which is exactly the head/argument shape the structural
//! substitution clauses dissect.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use lambda_delta::ast::{fresh, Context, Term, Type};
use lambda_delta::reduction::enumerate_steps;
use lambda_delta::typing::infer;

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    pub max_type_depth: usize,
    pub max_term_size: usize,
    pub base_type_pool: Vec<String>,
    /// Probability that abstraction generation picks Δ over λ when the goal
    /// type permits both.
    pub delta_bias: f64,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig {
            seed: 0xC0FFEE,
            max_type_depth: 3,
            max_term_size: 30,
            base_type_pool: vec!["b".to_string()],
            delta_bias: 0.35,
        }
    }
}

/// Generation could not find an inhabitant within its attempt budget.
/// Expected for genuinely uninhabited goals, e.g. `bot` in an empty
/// context.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GiveUp;

const ATTEMPTS: usize = 48;

/// Search-node cap per attempt; failed subtrees would otherwise cascade
/// exponentially on uninhabitable goals.
const NODE_FUEL: usize = 500;

pub fn gen_type(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Type {
    gen_type_depth(cfg, rng, cfg.max_type_depth)
}

fn gen_type_depth(cfg: &GenConfig, rng: &mut ChaCha8Rng, depth: usize) -> Type {
    if depth == 0 || rng.gen_bool(0.45) {
        if rng.gen_bool(0.15) {
            Type::Bottom
        } else {
            let i = rng.gen_range(0..cfg.base_type_pool.len());
            Type::base(cfg.base_type_pool[i].clone())
        }
    } else {
        let dom = gen_type_depth(cfg, rng, depth - 1);
        let cod = gen_type_depth(cfg, rng, depth - 1);
        Type::arrow(dom, cod)
    }
}

/// A small random context: always at least one base-typed variable, often a
/// negation binding so that `bot` goals are reachable.
pub fn gen_context(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Context {
    let mut ctx = Context::new();
    let i = rng.gen_range(0..cfg.base_type_pool.len());
    ctx.push("u", Type::base(cfg.base_type_pool[i].clone()));
    let extra = rng.gen_range(0..=2);
    for name in ["v", "w"].iter().take(extra) {
        ctx.push(*name, gen_type(cfg, rng));
    }
    if rng.gen_bool(0.5) {
        let inner = gen_type_depth(cfg, rng, cfg.max_type_depth.saturating_sub(1));
        ctx.push("k", Type::neg(inner));
    }
    ctx
}

/// Generates a term with `infer(ctx, term) == goal`, retrying up to a fixed
/// attempt budget. The result is re-checked with `infer` before being
/// returned.
pub fn gen_term(
    cfg: &GenConfig,
    rng: &mut ChaCha8Rng,
    ctx: &Context,
    goal: &Type,
    size_budget: usize,
) -> Result<Term, GiveUp> {
    for _ in 0..ATTEMPTS {
        let mut fuel = NODE_FUEL;
        if let Some(t) = try_gen(cfg, rng, ctx, goal, size_budget, &mut fuel) {
            if infer(ctx, &t).as_ref() == Ok(goal) {
                return Ok(t);
            }
        }
    }
    Err(GiveUp)
}

fn matching_vars(ctx: &Context, goal: &Type) -> Vec<String> {
    ctx.iter()
        .filter(|(name, ty)| *ty == goal && ctx.lookup(name) == Some(ty))
        .map(|(name, _)| name.to_string())
        .collect()
}

/// Application spines `x a1 .. ak` from a context variable whose type ends
/// in the goal: each plan is the head name with the domains to inhabit.
fn app_plans(ctx: &Context, goal: &Type) -> Vec<(String, Vec<Type>)> {
    let mut plans = Vec::new();
    for (name, ty) in ctx.iter() {
        if ctx.lookup(name) != Some(ty) {
            continue; // shadowed binding
        }
        let mut doms = Vec::new();
        let mut cur = ty;
        while let Some((dom, cod)) = cur.as_arrow() {
            doms.push(dom.clone());
            if cod == goal {
                plans.push((name.to_string(), doms.clone()));
            }
            cur = cod;
        }
    }
    plans
}

fn binder_name(rng: &mut ChaCha8Rng, ctx: &Context) -> String {
    const POOL: [&str; 6] = ["x", "y", "z", "f", "g", "h"];
    let hint = POOL[rng.gen_range(0..POOL.len())];
    let avoid = ctx.names().map(str::to_string).collect();
    fresh(&avoid, hint)
}

fn try_gen(
    cfg: &GenConfig,
    rng: &mut ChaCha8Rng,
    ctx: &Context,
    goal: &Type,
    budget: usize,
    fuel: &mut usize,
) -> Option<Term> {
    *fuel = fuel.checked_sub(1)?;
    let vars = matching_vars(ctx, goal);
    if budget <= 1 {
        if vars.is_empty() {
            return None;
        }
        return Some(Term::var(vars[rng.gen_range(0..vars.len())].clone()));
    }

    // Weighted move selection; each move may fail, in which case the next
    // one in the shuffled order is tried.
    #[derive(Clone, Copy, PartialEq)]
    enum Move {
        Var,
        Abs,
        Plan,
        AppGen,
    }
    let plans = app_plans(ctx, goal);
    let mut weighted: Vec<(Move, u32)> = Vec::new();
    if !vars.is_empty() {
        weighted.push((Move::Var, 20));
    }
    weighted.push((Move::Abs, 40));
    if !plans.is_empty() {
        // Applying a context variable is the preferred way in, and for bot
        // goals it is the shape the structural clauses care about.
        let w = if *goal == Type::Bottom { 55 } else { 25 };
        weighted.push((Move::Plan, w));
    }
    if budget >= 5 {
        weighted.push((Move::AppGen, 18));
    }

    while !weighted.is_empty() {
        let total: u32 = weighted.iter().map(|(_, w)| w).sum();
        let mut roll = rng.gen_range(0..total);
        let idx = weighted
            .iter()
            .position(|(_, w)| {
                if roll < *w {
                    true
                } else {
                    roll -= w;
                    false
                }
            })
            .unwrap();
        let (mv, _) = weighted.remove(idx);
        let produced = match mv {
            Move::Var => Some(Term::var(vars[rng.gen_range(0..vars.len())].clone())),
            Move::Abs => gen_abs(cfg, rng, ctx, goal, budget, fuel),
            Move::Plan => {
                let (head, doms) = plans[rng.gen_range(0..plans.len())].clone();
                gen_spine(cfg, rng, ctx, &head, &doms, budget, fuel)
            }
            Move::AppGen => {
                // A function of freshly invented domain applied to a fresh
                // argument; the function side is free to come out as an
                // abstraction, which is how generated terms acquire
                // redexes.
                let dom = gen_type_depth(cfg, rng, cfg.max_type_depth.min(2));
                let fun_ty = Type::arrow(dom.clone(), goal.clone());
                let fun_budget = (budget - 1) / 2;
                let arg_budget = budget - 1 - fun_budget;
                let fun = try_gen(cfg, rng, ctx, &fun_ty, fun_budget.max(1), fuel)?;
                let arg = try_gen(cfg, rng, ctx, &dom, arg_budget.max(1), fuel)?;
                Some(Term::app(fun, arg))
            }
        };
        if produced.is_some() {
            return produced;
        }
    }
    None
}

fn gen_abs(
    cfg: &GenConfig,
    rng: &mut ChaCha8Rng,
    ctx: &Context,
    goal: &Type,
    budget: usize,
    fuel: &mut usize,
) -> Option<Term> {
    let pick_delta = match goal.as_arrow() {
        Some(_) => rng.gen_bool(cfg.delta_bias),
        None => true,
    };
    if pick_delta {
        let x = binder_name(rng, ctx);
        let annot = Type::neg(goal.clone());
        let inner = ctx.extended(x.clone(), annot.clone());
        let body = try_gen(cfg, rng, &inner, &Type::Bottom, budget - 1, fuel)?;
        Some(Term::delta(x, annot, body))
    } else {
        let (dom, cod) = goal.as_arrow()?;
        let x = binder_name(rng, ctx);
        let inner = ctx.extended(x.clone(), dom.clone());
        let body = try_gen(cfg, rng, &inner, cod, budget - 1, fuel)?;
        Some(Term::lam(x, dom.clone(), body))
    }
}

fn gen_spine(
    cfg: &GenConfig,
    rng: &mut ChaCha8Rng,
    ctx: &Context,
    head: &str,
    doms: &[Type],
    budget: usize,
    fuel: &mut usize,
) -> Option<Term> {
    if budget < 1 + 2 * doms.len() {
        return None;
    }
    let per_arg = (budget - 1) / doms.len().max(1);
    let mut t = Term::var(head.to_string());
    for dom in doms {
        let arg = try_gen(cfg, rng, ctx, dom, per_arg.max(1), fuel)?;
        t = Term::app(t, arg);
    }
    Some(t)
}

/// Candidate smaller terms for counterexample minimization: shrinking
/// one-step reducts, well-typed direct subterms, and arguments replaced by
/// same-typed context variables. Every candidate is strictly smaller and
/// still well-typed in `ctx`.
pub fn shrink(ctx: &Context, t: &Term) -> Vec<Term> {
    if infer(ctx, t).is_err() {
        return Vec::new();
    }
    let mut out: Vec<Term> = Vec::new();
    let mut push = |cand: Term| {
        if cand.size() < t.size() && infer(ctx, &cand).is_ok() && !out.contains(&cand) {
            out.push(cand);
        }
    };
    for step in enumerate_steps(t) {
        push(step.result);
    }
    match t {
        Term::Var(_) => {}
        Term::Lam(_, _, body) | Term::Delta(_, _, body) => push(body.as_ref().clone()),
        Term::App(fun, arg) => {
            push(fun.as_ref().clone());
            push(arg.as_ref().clone());
            if let Ok(arg_ty) = infer(ctx, arg) {
                for (name, ty) in ctx.iter() {
                    if *ty == arg_ty && arg.as_ref() != &Term::var(name.to_string()) {
                        push(Term::app(fun.as_ref().clone(), Term::var(name.to_string())));
                    }
                }
            }
        }
    }
    out
}

/// Greedy minimization: repeatedly steps to the first shrink candidate that
/// still fails the predicate. Terminates because candidates strictly
/// shrink.
pub fn minimize(ctx: &Context, t: &Term, still_fails: impl Fn(&Term) -> bool) -> Term {
    let mut cur = t.clone();
    'outer: loop {
        for cand in shrink(ctx, &cur) {
            if still_fails(&cand) {
                cur = cand;
                continue 'outer;
            }
        }
        return cur;
    }
}
