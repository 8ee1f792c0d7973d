//! Syntax trees for the λΔ-calculus, name hygiene and the orderings the
//! rest of the crate is built on.
//!
//! Types are `bot`, named base types and arrows; negation `~A` is a derived
//! form, structurally `A -> bot`. Terms are variables, λ-abstractions,
//! Δ-abstractions and applications. Both binders carry explicit type
//! annotations.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Object-language types.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Type {
    /// The uninhabited absurdity type.
    Bottom,
    /// A named base type.
    Base(String),
    /// Function space.
    Arrow(Box<Type>, Box<Type>),
}

impl Type {
    pub fn base(name: impl Into<String>) -> Type {
        Type::Base(name.into())
    }

    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::Arrow(Box::new(dom), Box::new(cod))
    }

    /// Negation as a derived form: `~A` is `A -> bot`.
    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Type) -> Type {
        Type::arrow(a, Type::Bottom)
    }

    pub fn as_arrow(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Arrow(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// If the type has the shape `A -> bot`, returns `A`.
    pub fn negated(&self) -> Option<&Type> {
        match self {
            Type::Arrow(a, b) if **b == Type::Bottom => Some(a),
            _ => None,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Type::Bottom | Type::Base(_) => 0,
            Type::Arrow(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Type::Bottom | Type::Base(_) => 1,
            Type::Arrow(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Display adaptor that prints `A -> bot` as `~A`.
    pub fn sugared(&self) -> Sugared<'_> {
        Sugared(self)
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, atom: bool) -> fmt::Result {
        match self {
            Type::Bottom => write!(f, "bot"),
            Type::Base(n) => write!(f, "{n}"),
            Type::Arrow(a, b) => {
                if atom {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, true)?;
                write!(f, " -> ")?;
                b.fmt_prec(f, false)?;
                if atom {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }

    fn fmt_sugared(&self, f: &mut fmt::Formatter<'_>, atom: bool) -> fmt::Result {
        match self {
            Type::Bottom => write!(f, "bot"),
            Type::Base(n) => write!(f, "{n}"),
            Type::Arrow(a, b) if **b == Type::Bottom => {
                // Negations parse at atom level, so they never need parens.
                write!(f, "~")?;
                a.fmt_sugared(f, true)
            }
            Type::Arrow(a, b) => {
                if atom {
                    write!(f, "(")?;
                }
                a.fmt_sugared(f, true)?;
                write!(f, " -> ")?;
                b.fmt_sugared(f, false)?;
                if atom {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, false)
    }
}

/// See [`Type::sugared`].
pub struct Sugared<'a>(&'a Type);

impl fmt::Display for Sugared<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_sugared(f, false)
    }
}

/// Object-language terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Lam(String, Type, Box<Term>),
    Delta(String, Type, Box<Term>),
    App(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn lam(binder: impl Into<String>, annot: Type, body: Term) -> Term {
        Term::Lam(binder.into(), annot, Box::new(body))
    }

    pub fn delta(binder: impl Into<String>, annot: Type, body: Term) -> Term {
        Term::Delta(binder.into(), annot, Box::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    /// Node count, the third component of the hereditary substitution metric.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Lam(_, _, b) | Term::Delta(_, _, b) => 1 + b.size(),
            Term::App(a, b) => 1 + a.size() + b.size(),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::Lam(x, ty, b) => {
                if prec > 0 {
                    write!(f, "(")?;
                }
                write!(f, "\\{x}:{}. ", ty.sugared())?;
                b.fmt_prec(f, 0)?;
                if prec > 0 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Term::Delta(x, ty, b) => {
                if prec > 0 {
                    write!(f, "(")?;
                }
                write!(f, "delta {x}:{}. ", ty.sugared())?;
                b.fmt_prec(f, 0)?;
                if prec > 0 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Term::App(a, b) => {
                if prec > 1 {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, 1)?;
                write!(f, " ")?;
                b.fmt_prec(f, 2)?;
                if prec > 1 {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Term {
    /// Canonical ASCII form: `\`, `delta`, `~`, `bot`, minimal parentheses.
    /// Binder annotations are printed with negation sugar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// Variables occurring free in `t` under the usual binding of λ and Δ.
pub fn free_vars(t: &Term) -> BTreeSet<String> {
    fn go(t: &Term, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match t {
            Term::Var(x) => {
                if !bound.iter().any(|b| b == x) {
                    out.insert(x.clone());
                }
            }
            Term::Lam(x, _, b) | Term::Delta(x, _, b) => {
                bound.push(x.clone());
                go(b, bound, out);
                bound.pop();
            }
            Term::App(a, b) => {
                go(a, bound, out);
                go(b, bound, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// Every variable name occurring in `t`, free or bound (binders included).
pub fn all_names(t: &Term) -> BTreeSet<String> {
    fn go(t: &Term, out: &mut BTreeSet<String>) {
        match t {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Lam(x, _, b) | Term::Delta(x, _, b) => {
                out.insert(x.clone());
                go(b, out);
            }
            Term::App(a, b) => {
                go(a, out);
                go(b, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    go(t, &mut out);
    out
}

/// A name not in `avoid`, deterministically: the hint itself if unclaimed,
/// otherwise the hint with the smallest unused numeric suffix.
pub fn fresh(avoid: &BTreeSet<String>, hint: &str) -> String {
    if !avoid.contains(hint) {
        return hint.to_owned();
    }
    let mut n: u64 = 1;
    loop {
        let cand = format!("{hint}{n}");
        if !avoid.contains(&cand) {
            return cand;
        }
        n += 1;
    }
}

/// An explicit fresh-name supply: a growing avoid-set. Every coined name is
/// recorded so later requests cannot collide with earlier ones.
#[derive(Debug, Clone, Default)]
pub struct NameSupply {
    avoid: BTreeSet<String>,
}

impl NameSupply {
    pub fn new(avoid: BTreeSet<String>) -> NameSupply {
        NameSupply { avoid }
    }

    /// A supply seeded with every name (free or bound) of the given terms.
    pub fn from_terms<'a>(terms: impl IntoIterator<Item = &'a Term>) -> NameSupply {
        let mut avoid = BTreeSet::new();
        for t in terms {
            avoid.append(&mut all_names(t));
        }
        NameSupply { avoid }
    }

    pub fn reserve(&mut self, name: impl Into<String>) {
        self.avoid.insert(name.into());
    }

    pub fn contains(&self, name: &str) -> bool {
        self.avoid.contains(name)
    }

    pub fn fresh(&mut self, hint: &str) -> String {
        let name = fresh(&self.avoid, hint);
        self.avoid.insert(name.clone());
        name
    }
}

/// Capture-avoiding substitution `[replacement/var] target`. Bound variables
/// are renamed via [`fresh`] where capture would occur; no redex is reduced.
pub fn subst(replacement: &Term, var: &str, target: &Term) -> Term {
    match target {
        Term::Var(x) => {
            if x == var {
                replacement.clone()
            } else {
                target.clone()
            }
        }
        Term::Lam(x, ty, body) | Term::Delta(x, ty, body) => {
            let rebuild = |x: String, b: Term| match target {
                Term::Lam(..) => Term::lam(x, ty.clone(), b),
                _ => Term::delta(x, ty.clone(), b),
            };
            if x == var {
                // The binder shadows the substituted variable.
                return target.clone();
            }
            if !free_vars(body).contains(var) {
                // Nothing to replace below; keep the binder as is.
                return target.clone();
            }
            if free_vars(replacement).contains(x) {
                // Rename the binder out of the way of the replacement.
                let mut avoid = all_names(body);
                avoid.append(&mut all_names(replacement));
                avoid.insert(var.to_owned());
                let x2 = fresh(&avoid, x);
                let body2 = subst(&Term::var(x2.clone()), x, body);
                rebuild(x2, subst(replacement, var, &body2))
            } else {
                rebuild(x.clone(), subst(replacement, var, body))
            }
        }
        Term::App(a, b) => Term::app(subst(replacement, var, a), subst(replacement, var, b)),
    }
}

/// Equality up to consistent renaming of bound variables. Annotations are
/// compared structurally.
pub fn alpha_eq(t1: &Term, t2: &Term) -> bool {
    fn go(t1: &Term, t2: &Term, env: &mut Vec<(String, String)>) -> bool {
        match (t1, t2) {
            (Term::Var(x), Term::Var(y)) => {
                for (a, b) in env.iter().rev() {
                    if a == x || b == y {
                        return a == x && b == y;
                    }
                }
                x == y
            }
            (Term::Lam(x, tx, bx), Term::Lam(y, ty, by))
            | (Term::Delta(x, tx, bx), Term::Delta(y, ty, by)) => {
                if tx != ty {
                    return false;
                }
                env.push((x.clone(), y.clone()));
                let ok = go(bx, by, env);
                env.pop();
                ok
            }
            (Term::App(a1, b1), Term::App(a2, b2)) => go(a1, a2, env) && go(b1, b2, env),
            _ => false,
        }
    }
    go(t1, t2, &mut Vec::new())
}

/// Head variable of an application spine: `head(x) = x`,
/// `head(t1 t2) = head(t1)`; abstractions have no head.
pub fn head(t: &Term) -> Option<&str> {
    match t {
        Term::Var(x) => Some(x),
        Term::App(f, _) => head(f),
        _ => None,
    }
}

/// Whether `t` is generated by the normal-form grammar: variables, λ/Δ over
/// normal bodies, and applications `h n` with `h` a head.
pub fn is_normal(t: &Term) -> bool {
    match t {
        Term::Var(_) => true,
        Term::Lam(_, _, b) | Term::Delta(_, _, b) => is_normal(b),
        Term::App(f, a) => is_head(f) && is_normal(a),
    }
}

/// Whether `t` is generated by the heads grammar: `h ::= x | h n`.
pub fn is_head(t: &Term) -> bool {
    match t {
        Term::Var(_) => true,
        Term::App(f, a) => is_head(f) && is_normal(a),
        _ => false,
    }
}

/// Proper-subexpression test on types: the transitive closure of
/// `A -> B > A` and `A -> B > B`. Irreflexive, transitive, well founded.
pub fn is_strict_subexpr(a: &Type, b: &Type) -> bool {
    match b {
        Type::Bottom | Type::Base(_) => false,
        Type::Arrow(dom, cod) => {
            a == dom.as_ref()
                || a == cod.as_ref()
                || is_strict_subexpr(a, dom)
                || is_strict_subexpr(a, cod)
        }
    }
}

/// An ordered typing context with unique names (Γ). Lookup scans from the
/// tail so the innermost binding wins when inference shadows a name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Context {
    bindings: Vec<(String, Type)>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, Type)>) -> Context {
        Context {
            bindings: pairs.into_iter().collect(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, ty: Type) {
        self.bindings.push((name.into(), ty));
    }

    pub fn extended(&self, name: impl Into<String>, ty: Type) -> Context {
        let mut ctx = self.clone();
        ctx.push(name, ty);
        ctx
    }

    pub fn lookup(&self, name: &str) -> Option<&Type> {
        self.bindings
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Type)> {
        self.bindings.iter().map(|(n, t)| (n.as_str(), t))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.bindings.iter().map(|(n, _)| n.as_str())
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (n, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}:{t}")?;
        }
        Ok(())
    }
}

/// One triple of a multi-substitution: the source variable it replaces, the
/// fresh continuation variable, and the argument term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaEntry {
    pub source: String,
    pub continuation: String,
    pub argument: Term,
}

/// A multi-substitution Θ: a sequence of (source, continuation, argument)
/// triples. Entries are appended at the tail and lookup scans from the tail,
/// so the innermost entry wins if source names ever collide.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Theta {
    entries: Vec<ThetaEntry>,
}

impl Theta {
    pub fn new() -> Theta {
        Theta::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = ThetaEntry>) -> Theta {
        Theta {
            entries: entries.into_iter().collect(),
        }
    }

    pub fn single(
        source: impl Into<String>,
        continuation: impl Into<String>,
        argument: Term,
    ) -> Theta {
        Theta::from_entries([ThetaEntry {
            source: source.into(),
            continuation: continuation.into(),
            argument,
        }])
    }

    pub fn push(&mut self, entry: ThetaEntry) {
        self.entries.push(entry);
    }

    pub fn extended(&self, entry: ThetaEntry) -> Theta {
        let mut theta = self.clone();
        theta.push(entry);
        theta
    }

    pub fn lookup(&self, source: &str) -> Option<&ThetaEntry> {
        self.entries.iter().rev().find(|e| e.source == source)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ThetaEntry> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Checks the Θ well-formedness conditions: sources pairwise distinct,
    /// continuations pairwise distinct and disjoint from sources.
    pub fn check_invariants(&self) -> bool {
        let sources: BTreeSet<&str> = self.entries.iter().map(|e| e.source.as_str()).collect();
        let conts: BTreeSet<&str> = self
            .entries
            .iter()
            .map(|e| e.continuation.as_str())
            .collect();
        sources.len() == self.entries.len()
            && conts.len() == self.entries.len()
            && sources.is_disjoint(&conts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Type {
        Type::base("b")
    }

    /// λf:~(b->b). (f (λz:b. z)) -- shaped like the inner part of the
    /// structural-substitution example, with `u` left free.
    fn delta_f_fu() -> Term {
        Term::delta(
            "f",
            Type::neg(Type::arrow(b(), b())),
            Term::app(Term::var("f"), Term::var("u")),
        )
    }

    #[test]
    fn free_vars_of_lone_variable() {
        assert_eq!(free_vars(&Term::var("x")), BTreeSet::from(["x".into()]));
    }

    #[test]
    fn free_vars_binder_closes_body() {
        let t = Term::lam("x", b(), Term::var("x"));
        assert!(free_vars(&t).is_empty());
    }

    #[test]
    fn free_vars_under_delta() {
        assert_eq!(free_vars(&delta_f_fu()), BTreeSet::from(["u".into()]));
    }

    #[test]
    fn fresh_avoids_the_set() {
        let avoid = BTreeSet::from(["x".into(), "y".into()]);
        let n = fresh(&avoid, "x");
        assert!(!avoid.contains(&n));
        assert_eq!(n, fresh(&avoid, "x"));
        assert_eq!(n, "x1");
    }

    #[test]
    fn fresh_reuses_unclaimed_hint() {
        assert_eq!(fresh(&BTreeSet::new(), "z"), "z");
    }

    #[test]
    fn fresh_takes_minimal_suffix() {
        let avoid = BTreeSet::from(["z".into(), "z1".into()]);
        assert_eq!(fresh(&avoid, "z"), "z2");
    }

    #[test]
    fn subst_variable_hit() {
        assert_eq!(subst(&Term::var("u"), "x", &Term::var("x")), Term::var("u"));
    }

    #[test]
    fn subst_shadowed_binder() {
        let t = Term::lam("x", b(), Term::var("x"));
        assert_eq!(subst(&Term::var("u"), "x", &t), t);
    }

    #[test]
    fn subst_builds_application() {
        // [n1/y](y n2) = n1 n2
        let n1 = Term::lam("w", b(), Term::var("w"));
        let n2 = Term::var("u");
        let target = Term::app(Term::var("y"), n2.clone());
        assert_eq!(
            subst(&n1, "y", &target),
            Term::app(n1.clone(), n2.clone())
        );
    }

    #[test]
    fn subst_avoids_capture() {
        // [y/x](\y:b. x) must not capture the free y.
        let t = Term::lam("y", b(), Term::var("x"));
        let r = subst(&Term::var("y"), "x", &t);
        match &r {
            Term::Lam(binder, _, body) => {
                assert_ne!(binder, "y");
                assert_eq!(**body, Term::var("y"));
            }
            other => panic!("expected a lambda, got {other}"),
        }
    }

    #[test]
    fn alpha_eq_renamed_binder() {
        let t1 = Term::lam("x", b(), Term::var("x"));
        let t2 = Term::lam("y", b(), Term::var("y"));
        assert!(alpha_eq(&t1, &t2));
    }

    #[test]
    fn alpha_eq_distinct_bodies() {
        let t1 = Term::lam("x", b(), Term::var("x"));
        let t2 = Term::lam("x", b(), Term::var("u"));
        assert!(!alpha_eq(&t1, &t2));
    }

    #[test]
    fn alpha_eq_deltas() {
        let t1 = Term::delta(
            "z1",
            Type::neg(b()),
            Term::app(Term::var("z1"), Term::var("u")),
        );
        let t2 = Term::delta(
            "w",
            Type::neg(b()),
            Term::app(Term::var("w"), Term::var("u")),
        );
        assert!(alpha_eq(&t1, &t2));
    }

    #[test]
    fn alpha_eq_checks_annotations() {
        let t1 = Term::lam("x", b(), Term::var("x"));
        let t2 = Term::lam("x", Type::base("c"), Term::var("x"));
        assert!(!alpha_eq(&t1, &t2));
    }

    #[test]
    fn alpha_eq_free_variables_must_match() {
        assert!(alpha_eq(&Term::var("x"), &Term::var("x")));
        assert!(!alpha_eq(&Term::var("x"), &Term::var("y")));
    }

    #[test]
    fn head_of_variable() {
        assert_eq!(head(&Term::var("x")), Some("x"));
    }

    #[test]
    fn head_of_spine() {
        // (x (\y:b. y)) z
        let t = Term::app(
            Term::app(Term::var("x"), Term::lam("y", b(), Term::var("y"))),
            Term::var("z"),
        );
        assert_eq!(head(&t), Some("x"));
    }

    #[test]
    fn head_undefined_on_abstraction() {
        assert_eq!(head(&Term::lam("x", b(), Term::var("x"))), None);
    }

    #[test]
    fn beta_redex_is_not_normal() {
        let t = Term::app(Term::lam("x", b(), Term::var("x")), Term::var("u"));
        assert!(!is_normal(&t));
    }

    #[test]
    fn structural_example_output_is_normal() {
        // delta z1:~b. z1 (delta z2:~b. z2 u)
        let t = Term::delta(
            "z1",
            Type::neg(b()),
            Term::app(
                Term::var("z1"),
                Term::delta(
                    "z2",
                    Type::neg(b()),
                    Term::app(Term::var("z2"), Term::var("u")),
                ),
            ),
        );
        assert!(is_normal(&t));
    }

    #[test]
    fn head_application_is_normal() {
        let t = Term::app(Term::var("x"), Term::lam("y", b(), Term::var("y")));
        assert!(is_normal(&t));
    }

    #[test]
    fn applied_delta_is_not_normal() {
        let t = Term::app(delta_f_fu(), Term::var("u"));
        assert!(!is_normal(&t));
    }

    #[test]
    fn subexpr_direct() {
        assert!(is_strict_subexpr(&b(), &Type::arrow(b(), b())));
    }

    #[test]
    fn subexpr_irreflexive() {
        let t = Type::arrow(b(), b());
        assert!(!is_strict_subexpr(&t, &t));
    }

    #[test]
    fn subexpr_two_step() {
        let big = Type::arrow(Type::arrow(b(), b()), Type::arrow(b(), b()));
        assert!(is_strict_subexpr(&b(), &big));
        assert!(is_strict_subexpr(&Type::arrow(b(), b()), &big));
        assert!(!is_strict_subexpr(&big, &Type::arrow(b(), b())));
    }

    #[test]
    fn display_lambda() {
        let t = Term::lam("x", b(), Term::var("x"));
        assert_eq!(t.to_string(), "\\x:b. x");
    }

    #[test]
    fn display_delta_sugars_negation() {
        let t = Term::delta(
            "z1",
            Type::neg(b()),
            Term::app(Term::var("z1"), Term::var("u")),
        );
        assert_eq!(t.to_string(), "delta z1:~b. z1 u");
    }

    #[test]
    fn display_parenthesizes_redex_and_arguments() {
        let t = Term::app(Term::lam("x", b(), Term::var("x")), Term::var("u"));
        assert_eq!(t.to_string(), "(\\x:b. x) u");
        let t = Term::app(Term::var("x"), Term::app(Term::var("y"), Term::var("z")));
        assert_eq!(t.to_string(), "x (y z)");
        let t = Term::app(Term::app(Term::var("x"), Term::var("y")), Term::var("z"));
        assert_eq!(t.to_string(), "x y z");
    }

    #[test]
    fn display_types() {
        let t = Type::arrow(Type::arrow(b(), b()), Type::Bottom);
        assert_eq!(t.to_string(), "(b -> b) -> bot");
        assert_eq!(t.sugared().to_string(), "~(b -> b)");
        let t = Type::neg(Type::neg(b()));
        assert_eq!(t.sugared().to_string(), "~~b");
        let t = Type::arrow(Type::neg(b()), b());
        assert_eq!(t.sugared().to_string(), "~b -> b");
        let t = Type::arrow(b(), Type::arrow(b(), b()));
        assert_eq!(t.to_string(), "b -> b -> b");
    }

    #[test]
    fn context_lookup_is_order_insensitive() {
        let ctx = Context::from_pairs([("x".into(), b()), ("y".into(), Type::arrow(b(), b()))]);
        assert_eq!(ctx.lookup("x"), Some(&b()));
        assert_eq!(ctx.lookup("y"), Some(&Type::arrow(b(), b())));
        assert_eq!(ctx.lookup("z"), None);
    }

    #[test]
    fn theta_lookup_takes_innermost() {
        let mut theta = Theta::single("x", "z1", Term::var("u"));
        theta.push(ThetaEntry {
            source: "x".into(),
            continuation: "z2".into(),
            argument: Term::var("v"),
        });
        assert_eq!(theta.lookup("x").unwrap().continuation, "z2");
        assert!(!theta.check_invariants());
    }

    #[test]
    fn theta_invariants() {
        let mut theta = Theta::single("x", "z1", Term::var("u"));
        theta.push(ThetaEntry {
            source: "y".into(),
            continuation: "z2".into(),
            argument: Term::var("v"),
        });
        assert!(theta.check_invariants());
    }
}
