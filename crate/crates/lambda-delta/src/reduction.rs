//! Small-step operational semantics: the compatible closure of the Beta and
//! StructRed rules, one-step enumeration, a deterministic fuel-bounded
//! normalizer used as the oracle, reduction traces, and a bounded
//! joinability search for desk-scale confluence checking.
//!
//! Beta contracts `(\x:A. t) s` to `[s/x]t`. StructRed pushes an application
//! into a Δ-abstraction's body: `(delta x:~(A -> B). t) s` contracts to
//! `delta z:~B. [\y:A -> B. (z (y s)) / x] t` with `z` and `y` fresh.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::ast::{all_names, alpha_eq, fresh, is_normal, subst, Term, Type};

/// The two reduction rules of the calculus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Beta,
    StructRed,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Beta => write!(f, "Beta"),
            Rule::StructRed => write!(f, "StructRed"),
        }
    }
}

/// A single reduction step: which rule fired, where (child indices from the
/// root; bodies are child 0, application arguments child 1), and the whole
/// term after the step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    pub path: Vec<usize>,
    pub result: Term,
}

/// A reduction sequence: each step's source is the previous step's result;
/// `end` is the last result, or `start` for the empty trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub start: Term,
    pub steps: Vec<Step>,
    pub end: Term,
}

/// How a bounded reduction run finished.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceOutcome {
    /// The end term is normal.
    Normal,
    /// Fuel ran out before a normal form was reached.
    FuelExhausted,
    /// No rule applies but the term is not normal. Only ill-typed terms can
    /// get stuck: an applied Δ whose annotation is not an arrow negation.
    Stuck,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContractError {
    /// The term is not a redex for the requested rule.
    NotARedex,
    /// An applied Δ is annotated `~C` with `C` not an arrow; such a term is
    /// ill-typed and has no contractum.
    MalformedDelta,
}

impl fmt::Display for ContractError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContractError::NotARedex => write!(f, "not a redex"),
            ContractError::MalformedDelta => {
                write!(f, "applied delta annotation is not an arrow negation")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReduceError {
    FuelExhausted { last: Term },
    Stuck { last: Term },
}

impl fmt::Display for ReduceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReduceError::FuelExhausted { last } => {
                write!(f, "fuel exhausted, last term: {last}")
            }
            ReduceError::Stuck { last } => write!(f, "stuck non-normal term: {last}"),
        }
    }
}

/// Redex selection strategy for the deterministic normalizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    LeftmostOutermost,
    RightmostInnermost,
}

/// Contracts a Beta redex at the root: `(\x:A. t) s` becomes `[s/x]t`.
pub fn contract_beta(redex: &Term) -> Result<Term, ContractError> {
    match redex {
        Term::App(fun, arg) => match fun.as_ref() {
            Term::Lam(x, _, body) => Ok(subst(arg, x, body)),
            _ => Err(ContractError::NotARedex),
        },
        _ => Err(ContractError::NotARedex),
    }
}

/// Contracts a StructRed redex at the root. Freshness for the introduced
/// continuation variable and wrapper binder draws from every name of the
/// redex plus `ambient`, so contracta can be spliced into larger terms
/// without capture.
pub fn contract_struct_in(
    redex: &Term,
    ambient: &BTreeSet<String>,
) -> Result<Term, ContractError> {
    let Term::App(fun, arg) = redex else {
        return Err(ContractError::NotARedex);
    };
    let Term::Delta(x, annot, body) = fun.as_ref() else {
        return Err(ContractError::NotARedex);
    };
    let Some(negated) = annot.negated() else {
        return Err(ContractError::NotARedex);
    };
    let Some((_, cod)) = negated.as_arrow() else {
        return Err(ContractError::MalformedDelta);
    };
    let mut avoid = all_names(redex);
    avoid.extend(ambient.iter().cloned());
    let z = fresh(&avoid, "z");
    avoid.insert(z.clone());
    let y = fresh(&avoid, "y");
    let wrapper = Term::lam(
        y.clone(),
        negated.clone(),
        Term::app(
            Term::var(z.clone()),
            Term::app(Term::var(y), arg.as_ref().clone()),
        ),
    );
    Ok(Term::delta(
        z,
        Type::neg(cod.clone()),
        subst(&wrapper, x, body),
    ))
}

/// [`contract_struct_in`] with an empty ambient avoid-set.
pub fn contract_struct(redex: &Term) -> Result<Term, ContractError> {
    contract_struct_in(redex, &BTreeSet::new())
}

/// Every position where Beta or StructRed applies, in leftmost-outermost
/// order. Empty exactly when the term is normal (or stuck, which cannot
/// happen for well-typed terms).
pub fn enumerate_steps(t: &Term) -> Vec<Step> {
    let ambient = all_names(t);
    let mut out = Vec::new();
    let mut path = Vec::new();
    collect(t, t, &mut path, &ambient, &mut out);
    out
}

fn collect(
    root: &Term,
    t: &Term,
    path: &mut Vec<usize>,
    ambient: &BTreeSet<String>,
    out: &mut Vec<Step>,
) {
    if let Ok(contractum) = contract_beta(t) {
        out.push(Step {
            rule: Rule::Beta,
            path: path.clone(),
            result: replace_at(root, path, &contractum),
        });
    } else if let Ok(contractum) = contract_struct_in(t, ambient) {
        out.push(Step {
            rule: Rule::StructRed,
            path: path.clone(),
            result: replace_at(root, path, &contractum),
        });
    }
    match t {
        Term::Var(_) => {}
        Term::Lam(_, _, b) | Term::Delta(_, _, b) => {
            path.push(0);
            collect(root, b, path, ambient, out);
            path.pop();
        }
        Term::App(a, b) => {
            path.push(0);
            collect(root, a, path, ambient, out);
            path.pop();
            path.push(1);
            collect(root, b, path, ambient, out);
            path.pop();
        }
    }
}

/// Rebuilds `root` with `new` in place of the subterm at `path`.
fn replace_at(root: &Term, path: &[usize], new: &Term) -> Term {
    match path.split_first() {
        None => new.clone(),
        Some((&i, rest)) => match root {
            Term::Lam(x, ty, b) if i == 0 => {
                Term::lam(x.clone(), ty.clone(), replace_at(b, rest, new))
            }
            Term::Delta(x, ty, b) if i == 0 => {
                Term::delta(x.clone(), ty.clone(), replace_at(b, rest, new))
            }
            Term::App(a, b) if i == 0 => Term::app(replace_at(a, rest, new), b.as_ref().clone()),
            Term::App(a, b) if i == 1 => Term::app(a.as_ref().clone(), replace_at(b, rest, new)),
            _ => unreachable!("step path addresses a valid subterm"),
        },
    }
}

/// The subterm of `t` at `path`.
pub fn subterm_at<'a>(t: &'a Term, path: &[usize]) -> Option<&'a Term> {
    match path.split_first() {
        None => Some(t),
        Some((&i, rest)) => match t {
            Term::Lam(_, _, b) | Term::Delta(_, _, b) if i == 0 => subterm_at(b, rest),
            Term::App(a, _) if i == 0 => subterm_at(a, rest),
            Term::App(_, b) if i == 1 => subterm_at(b, rest),
            _ => None,
        },
    }
}

/// Contracts the leftmost-outermost redex, rebuilding only along the path
/// to it. Cheaper than [`enumerate_steps`] when just one step is needed.
fn leftmost_step(t: &Term, ambient: &BTreeSet<String>) -> Option<Term> {
    if let Ok(c) = contract_beta(t) {
        return Some(c);
    }
    if let Ok(c) = contract_struct_in(t, ambient) {
        return Some(c);
    }
    match t {
        Term::Var(_) => None,
        Term::Lam(x, ty, b) => {
            leftmost_step(b, ambient).map(|nb| Term::lam(x.clone(), ty.clone(), nb))
        }
        Term::Delta(x, ty, b) => {
            leftmost_step(b, ambient).map(|nb| Term::delta(x.clone(), ty.clone(), nb))
        }
        Term::App(f, a) => match leftmost_step(f, ambient) {
            Some(nf) => Some(Term::app(nf, a.as_ref().clone())),
            None => leftmost_step(a, ambient).map(|na| Term::app(f.as_ref().clone(), na)),
        },
    }
}

fn pick_step(t: &Term, strategy: Strategy) -> Option<Step> {
    let mut steps = enumerate_steps(t);
    if steps.is_empty() {
        return None;
    }
    match strategy {
        Strategy::LeftmostOutermost => Some(steps.remove(0)),
        Strategy::RightmostInnermost => steps.into_iter().max_by(|a, b| {
            // Rightmost first, then innermost: later sibling indices win,
            // and on a shared prefix the deeper path wins.
            let mut ai = a.path.iter();
            let mut bi = b.path.iter();
            loop {
                match (ai.next(), bi.next()) {
                    (Some(x), Some(y)) if x == y => continue,
                    (Some(x), Some(y)) => return x.cmp(y),
                    (Some(_), None) => return core::cmp::Ordering::Greater,
                    (None, Some(_)) => return core::cmp::Ordering::Less,
                    (None, None) => return core::cmp::Ordering::Equal,
                }
            }
        }),
    }
}

/// Reduces to normal form under the given strategy, spending one unit of
/// fuel per step. By confluence the reached normal form is independent of
/// the strategy, up to α.
pub fn reduce_to_nf_with(t: &Term, fuel: usize, strategy: Strategy) -> Result<Term, ReduceError> {
    let mut cur = t.clone();
    let mut left = fuel;
    loop {
        if is_normal(&cur) {
            return Ok(cur);
        }
        // The leftmost-outermost step needs no full enumeration; it picks
        // the same redex enumerate_steps lists first.
        let next = match strategy {
            Strategy::LeftmostOutermost => leftmost_step(&cur, &all_names(&cur)),
            Strategy::RightmostInnermost => pick_step(&cur, strategy).map(|s| s.result),
        };
        let Some(next) = next else {
            return Err(ReduceError::Stuck { last: cur });
        };
        if left == 0 {
            return Err(ReduceError::FuelExhausted { last: cur });
        }
        left -= 1;
        cur = next;
    }
}

/// Leftmost-outermost [`reduce_to_nf_with`]; the oracle normalizer.
pub fn reduce_to_nf(t: &Term, fuel: usize) -> Result<Term, ReduceError> {
    reduce_to_nf_with(t, fuel, Strategy::LeftmostOutermost)
}

/// Leftmost-outermost reduction recording every step, stopping at a normal
/// form or when fuel runs out.
pub fn trace_to_nf(t: &Term, fuel: usize) -> (Trace, TraceOutcome) {
    let start = t.clone();
    let mut cur = t.clone();
    let mut steps = Vec::new();
    let outcome = loop {
        if is_normal(&cur) {
            break TraceOutcome::Normal;
        }
        let Some(step) = pick_step(&cur, Strategy::LeftmostOutermost) else {
            break TraceOutcome::Stuck;
        };
        if steps.len() == fuel {
            break TraceOutcome::FuelExhausted;
        }
        cur = step.result.clone();
        steps.push(step);
    };
    (
        Trace {
            start,
            steps,
            end: cur,
        },
        outcome,
    )
}

/// An α-invariant key: binders are numbered by traversal order, so two
/// α-equal terms render identically. Used only to deduplicate search
/// frontiers; structural α-comparison stays in [`alpha_eq`].
fn alpha_key(t: &Term) -> String {
    fn go(t: &Term, env: &mut Vec<String>, out: &mut String) {
        match t {
            Term::Var(x) => match env.iter().rposition(|n| n == x) {
                Some(i) => {
                    out.push('#');
                    out.push_str(&format!("{}", env.len() - i));
                }
                None => {
                    out.push('!');
                    out.push_str(x);
                }
            },
            Term::Lam(x, ty, b) | Term::Delta(x, ty, b) => {
                out.push(if matches!(t, Term::Lam(..)) { 'L' } else { 'D' });
                out.push_str(&format!("[{ty}]"));
                env.push(x.clone());
                go(b, env, out);
                env.pop();
            }
            Term::App(a, b) => {
                out.push('(');
                go(a, env, out);
                out.push(' ');
                go(b, env, out);
                out.push(')');
            }
        }
    }
    let mut out = String::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// Breadth-first search of the reducts of both terms to the given depth;
/// true iff some pair of reducts is α-equal.
pub fn joinable(t1: &Term, t2: &Term, depth: usize) -> bool {
    if alpha_eq(t1, t2) {
        return true;
    }
    let mut seen1 = BTreeSet::new();
    let mut seen2 = BTreeSet::new();
    seen1.insert(alpha_key(t1));
    seen2.insert(alpha_key(t2));
    let mut frontier1 = alloc::vec![t1.clone()];
    let mut frontier2 = alloc::vec![t2.clone()];
    for _ in 0..depth {
        frontier1 = expand(frontier1, &mut seen1);
        if frontier1.iter().any(|t| seen2.contains(&alpha_key(t))) {
            return true;
        }
        frontier2 = expand(frontier2, &mut seen2);
        if frontier2.iter().any(|t| seen1.contains(&alpha_key(t))) {
            return true;
        }
        if frontier1.is_empty() && frontier2.is_empty() {
            return false;
        }
    }
    false
}

fn expand(frontier: Vec<Term>, seen: &mut BTreeSet<String>) -> Vec<Term> {
    let mut next = Vec::new();
    for t in frontier {
        for step in enumerate_steps(&t) {
            let key = alpha_key(&step.result);
            if seen.insert(key) {
                next.push(step.result);
            }
        }
    }
    next
}
