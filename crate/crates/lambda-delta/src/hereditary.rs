//! Hereditary substitution for the λΔ-calculus.
//!
//! `[t/x]^A t'` is capture-avoiding substitution that immediately reduces
//! any redex it creates, recursing at a strictly smaller cut type. A new
//! β-redex is reduced by a recursive hereditary substitution; a new
//! structural redex cannot be handled the same way without losing
//! well-foundedness, so it is discharged by the companion hereditary
//! structural substitution `<Θ>^{A}_{A'} t'`, which simultaneously performs
//! every continuation-wrapping substitution the redex demands.
//!
//! Both functions terminate on arbitrary input: every recursive call is
//! checked against the lexicographic metric (cut type, function tag,
//! target size), and a violation surfaces as [`HsErrorKind::MetricViolation`]
//! instead of divergence. On well-typed input no error is reachable.

use alloc::borrow::ToOwned;
use alloc::string::String;
use core::fmt;

use crate::ast::{
    alpha_eq, free_vars, is_strict_subexpr, subst, Context, NameSupply, Term, Theta,
    ThetaEntry, Type,
};
use crate::typing::{infer, TypeError};

/// The type index of a substitution together with the tag distinguishing
/// the two mutually defined functions: 0 for hereditary substitution, 1 for
/// hereditary structural substitution. The termination metric is
/// (cut_type, metric_tag, target size), lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutInfo {
    pub cut_type: Type,
    pub metric_tag: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HsErrorKind {
    /// A redex clause fired but ctype is undefined on the function part.
    CtypeUndefined,
    /// ctype is defined on the function part but is not an arrow.
    CtypeNotArrow,
    /// An abstraction reached a clause that requires a specific annotation
    /// (the λ-argument, Δ-argument and redex clauses) with a different one.
    AnnotationMismatch,
    /// A recursive call failed to decrease the termination metric.
    MetricViolation,
}

/// Failure of hereditary substitution. Reachable only on inputs that
/// violate the typing preconditions of the defining lemmas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HsError {
    pub kind: HsErrorKind,
    pub at: Term,
}

impl HsError {
    fn new(kind: HsErrorKind, at: &Term) -> HsError {
        HsError {
            kind,
            at: at.clone(),
        }
    }
}

impl fmt::Display for HsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            HsErrorKind::CtypeUndefined => "ctype undefined at redex clause",
            HsErrorKind::CtypeNotArrow => "ctype result is not an arrow at redex clause",
            HsErrorKind::AnnotationMismatch => "abstraction annotation mismatch",
            HsErrorKind::MetricViolation => "termination metric failed to decrease",
        };
        write!(f, "{what} in `{}`", self.at)
    }
}

/// Per-run counters for the definitional clauses, indexed in definition
/// order.
///
/// `hsubst`: 0 variable hit, 1 variable miss, 2 λ descent, 3 Δ descent,
/// 4 plain application, 5 new β-redex, 6 new structural redex.
///
/// `shsubst`: 0 variable hit (η-wrapper), 1 variable miss, 2 λ descent,
/// 3 Δ descent, 4 hit head with λ argument, 5 hit head with Δ argument,
/// 6 hit head with non-abstraction argument, 7 plain application.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClauseCoverage {
    pub hsubst: [u64; 7],
    pub shsubst: [u64; 8],
}

impl ClauseCoverage {
    pub fn merge(&mut self, other: &ClauseCoverage) {
        for (a, b) in self.hsubst.iter_mut().zip(other.hsubst.iter()) {
            *a += b;
        }
        for (a, b) in self.shsubst.iter_mut().zip(other.shsubst.iter()) {
            *a += b;
        }
    }

    /// True when every clause of both functions has fired at least once.
    pub fn all_covered(&self) -> bool {
        self.hsubst.iter().all(|&n| n > 0) && self.shsubst.iter().all(|&n| n > 0)
    }
}

/// Computes the type of an application in head normal form:
/// `ctype_T(x, x) = T` and `ctype_T(x, t1 t2) = T''` when
/// `ctype_T(x, t1) = T' -> T''`. Partial; when defined the result is the
/// cut type or a strict subexpression of it.
pub fn ctype(cut: &Type, var: &str, t: &Term) -> Option<Type> {
    match t {
        Term::Var(x) if x == var => Some(cut.clone()),
        Term::App(t1, _) => match ctype(cut, var, t1)? {
            Type::Arrow(_, cod) => Some(*cod),
            _ => None,
        },
        _ => None,
    }
}

struct Metric {
    info: CutInfo,
    size: usize,
}

impl Metric {
    fn new(cut: &Type, tag: u8, target: &Term) -> Metric {
        Metric {
            info: CutInfo {
                cut_type: cut.clone(),
                metric_tag: tag,
            },
            size: target.size(),
        }
    }

    fn decreases_from(&self, prev: &Metric) -> bool {
        if is_strict_subexpr(&self.info.cut_type, &prev.info.cut_type) {
            return true;
        }
        self.info.cut_type == prev.info.cut_type
            && (self.info.metric_tag < prev.info.metric_tag
                || (self.info.metric_tag == prev.info.metric_tag && self.size < prev.size))
    }
}

struct Hs<'c> {
    supply: NameSupply,
    cov: &'c mut ClauseCoverage,
}

impl Hs<'_> {
    fn check_metric(
        &self,
        metric: &Metric,
        prev: Option<&Metric>,
        at: &Term,
    ) -> Result<(), HsError> {
        match prev {
            Some(p) if !metric.decreases_from(p) => {
                Err(HsError::new(HsErrorKind::MetricViolation, at))
            }
            _ => Ok(()),
        }
    }

    fn hsubst(
        &mut self,
        t: &Term,
        var: &str,
        cut: &Type,
        target: &Term,
        prev: Option<&Metric>,
    ) -> Result<Term, HsError> {
        let metric = Metric::new(cut, 0, target);
        self.check_metric(&metric, prev, target)?;
        match target {
            Term::Var(x) if x == var => {
                self.cov.hsubst[0] += 1;
                Ok(t.clone())
            }
            Term::Var(_) => {
                self.cov.hsubst[1] += 1;
                Ok(target.clone())
            }
            Term::Lam(y, annot, body) | Term::Delta(y, annot, body) => {
                let is_lam = matches!(target, Term::Lam(..));
                self.cov.hsubst[if is_lam { 2 } else { 3 }] += 1;
                if y == var || !free_vars(body).contains(var) {
                    // The binder shadows the variable, or nothing occurs
                    // below: the substitution is the identity here.
                    return Ok(target.clone());
                }
                let (y, body) = self.unshadow(y, body, |name| free_vars(t).contains(name));
                let s = self.hsubst(t, var, cut, &body, Some(&metric))?;
                Ok(if is_lam {
                    Term::lam(y, annot.clone(), s)
                } else {
                    Term::delta(y, annot.clone(), s)
                })
            }
            Term::App(t1, t2) => {
                let s1 = self.hsubst(t, var, cut, t1, Some(&metric))?;
                let s2 = self.hsubst(t, var, cut, t2, Some(&metric))?;
                match &s1 {
                    Term::Lam(y, annot, body) if !matches!(t1.as_ref(), Term::Lam(..)) => {
                        // A new β-redex: reduce it hereditarily at the
                        // strictly smaller cut type given by ctype.
                        self.cov.hsubst[5] += 1;
                        let (dom, _cod) = self.redex_ctype(cut, var, t1, target)?;
                        if *annot != dom {
                            return Err(HsError::new(HsErrorKind::AnnotationMismatch, target));
                        }
                        self.hsubst(&s2, y, &dom, &body.clone(), Some(&metric))
                    }
                    Term::Delta(y, annot, body) if !matches!(t1.as_ref(), Term::Delta(..)) => {
                        // A new structural redex: discharge it through the
                        // structural substitution with a fresh continuation.
                        self.cov.hsubst[6] += 1;
                        let (dom, cod) = self.redex_ctype(cut, var, t1, target)?;
                        let expected = Type::neg(Type::arrow(dom.clone(), cod.clone()));
                        if *annot != expected {
                            return Err(HsError::new(HsErrorKind::AnnotationMismatch, target));
                        }
                        let z = self.supply.fresh("z");
                        let theta = Theta::single(y.clone(), z.clone(), s2);
                        let s = self.shsubst(&theta, &dom, &cod, &body.clone(), Some(&metric))?;
                        Ok(Term::delta(z, Type::neg(cod), s))
                    }
                    _ => {
                        self.cov.hsubst[4] += 1;
                        Ok(Term::app(s1, s2))
                    }
                }
            }
        }
    }

    fn shsubst(
        &mut self,
        theta: &Theta,
        dom: &Type,
        cod: &Type,
        target: &Term,
        prev: Option<&Metric>,
    ) -> Result<Term, HsError> {
        let metric = Metric::new(dom, 1, target);
        self.check_metric(&metric, prev, target)?;
        match target {
            Term::Var(x) => match theta.lookup(x) {
                Some(entry) => {
                    self.cov.shsubst[0] += 1;
                    let y = self.supply.fresh("y");
                    Ok(Term::lam(
                        y.clone(),
                        Type::arrow(dom.clone(), cod.clone()),
                        Term::app(
                            Term::var(entry.continuation.clone()),
                            Term::app(Term::var(y), entry.argument.clone()),
                        ),
                    ))
                }
                None => {
                    self.cov.shsubst[1] += 1;
                    Ok(target.clone())
                }
            },
            Term::Lam(y, annot, body) | Term::Delta(y, annot, body) => {
                let is_lam = matches!(target, Term::Lam(..));
                self.cov.shsubst[if is_lam { 2 } else { 3 }] += 1;
                let fv = free_vars(body);
                if !theta.iter().any(|e| fv.contains(&e.source)) {
                    return Ok(target.clone());
                }
                let (y, body) = self.unshadow(y, body, |name| theta_mentions(theta, name));
                let s = self.shsubst(theta, dom, cod, &body, Some(&metric))?;
                Ok(if is_lam {
                    Term::lam(y, annot.clone(), s)
                } else {
                    Term::delta(y, annot.clone(), s)
                })
            }
            Term::App(t1, t2) => {
                let hit = match t1.as_ref() {
                    Term::Var(x) => theta.lookup(x).cloned(),
                    _ => None,
                };
                let Some(entry) = hit else {
                    self.cov.shsubst[7] += 1;
                    let s1 = self.shsubst(theta, dom, cod, t1, Some(&metric))?;
                    let s2 = self.shsubst(theta, dom, cod, t2, Some(&metric))?;
                    return Ok(Term::app(s1, s2));
                };
                match t2.as_ref() {
                    Term::Lam(y, annot, body) => {
                        // The wrapper for the hit head would form a β-redex
                        // with this λ; reduce it now: substitute the stored
                        // argument hereditarily into the processed body.
                        self.cov.shsubst[4] += 1;
                        if annot != dom {
                            return Err(HsError::new(HsErrorKind::AnnotationMismatch, target));
                        }
                        let (y, body) = self.unshadow(y, body, |name| theta_mentions(theta, name));
                        let s = self.shsubst(theta, dom, cod, &body, Some(&metric))?;
                        let s = self.hsubst(&entry.argument, &y, dom, &s, Some(&metric))?;
                        Ok(Term::app(Term::var(entry.continuation), s))
                    }
                    Term::Delta(y, annot, body) => {
                        // The wrapper would form a structural redex with
                        // this Δ; extend Θ with a fresh continuation and the
                        // same argument instead.
                        self.cov.shsubst[5] += 1;
                        let expected = Type::neg(Type::arrow(dom.clone(), cod.clone()));
                        if *annot != expected {
                            return Err(HsError::new(HsErrorKind::AnnotationMismatch, target));
                        }
                        let (y, body) = self.unshadow(y, body, |name| theta_mentions(theta, name));
                        let z2 = self.supply.fresh("z");
                        let extended = theta.extended(ThetaEntry {
                            source: y,
                            continuation: z2.clone(),
                            argument: entry.argument.clone(),
                        });
                        let s = self.shsubst(&extended, dom, cod, &body, Some(&metric))?;
                        Ok(Term::app(
                            Term::var(entry.continuation),
                            Term::delta(z2, Type::neg(cod.clone()), s),
                        ))
                    }
                    _ => {
                        // The wrapper applied to a non-abstraction reduces
                        // in one β-step to the continuation applied to the
                        // argument spine extended with the stored term.
                        self.cov.shsubst[6] += 1;
                        let s = self.shsubst(theta, dom, cod, t2, Some(&metric))?;
                        Ok(Term::app(
                            Term::var(entry.continuation),
                            Term::app(s, entry.argument.clone()),
                        ))
                    }
                }
            }
        }
    }

    /// ctype lookup shared by the two redex clauses.
    fn redex_ctype(
        &self,
        cut: &Type,
        var: &str,
        t1: &Term,
        at: &Term,
    ) -> Result<(Type, Type), HsError> {
        let Some(ct) = ctype(cut, var, t1) else {
            return Err(HsError::new(HsErrorKind::CtypeUndefined, at));
        };
        match ct {
            Type::Arrow(dom, cod) => Ok((*dom, *cod)),
            _ => Err(HsError::new(HsErrorKind::CtypeNotArrow, at)),
        }
    }

    /// Renames a binder out of the way when it collides with names the
    /// substitution is about to insert (the assumption that all variables
    /// are renamed apart, made operational).
    fn unshadow(
        &mut self,
        binder: &str,
        body: &Term,
        collides: impl Fn(&str) -> bool,
    ) -> (String, Term) {
        if collides(binder) {
            let fresh = self.supply.fresh(binder);
            let body = subst(&Term::var(fresh.clone()), binder, body);
            (fresh, body)
        } else {
            (binder.to_owned(), body.clone())
        }
    }
}

fn theta_mentions(theta: &Theta, name: &str) -> bool {
    theta.iter().any(|e| {
        e.source == name || e.continuation == name || free_vars(&e.argument).contains(name)
    })
}

fn supply_for(terms: &[&Term], extra: &[&str]) -> NameSupply {
    let mut supply = NameSupply::from_terms(terms.iter().copied());
    for name in extra {
        supply.reserve(*name);
    }
    supply
}

fn theta_supply(theta: &Theta, target: &Term) -> NameSupply {
    let mut supply = NameSupply::from_terms(
        core::iter::once(target).chain(theta.iter().map(|e| &e.argument)),
    );
    for e in theta.iter() {
        supply.reserve(e.source.clone());
        supply.reserve(e.continuation.clone());
    }
    supply
}

/// The hereditary substitution function `[t/x]^A target`, recording clause
/// coverage into `cov`.
pub fn hsubst_with(
    cov: &mut ClauseCoverage,
    t: &Term,
    var: &str,
    cut: &Type,
    target: &Term,
) -> Result<Term, HsError> {
    let supply = supply_for(&[t, target], &[var]);
    Hs { supply, cov }.hsubst(t, var, cut, target, None)
}

/// The hereditary substitution function `[t/x]^A target`.
pub fn hsubst(t: &Term, var: &str, cut: &Type, target: &Term) -> Result<Term, HsError> {
    hsubst_with(&mut ClauseCoverage::default(), t, var, cut, target)
}

/// The hereditary structural substitution function `<Θ>^{dom}_{cod} target`,
/// recording clause coverage into `cov`.
pub fn shsubst_with(
    cov: &mut ClauseCoverage,
    theta: &Theta,
    dom: &Type,
    cod: &Type,
    target: &Term,
) -> Result<Term, HsError> {
    let supply = theta_supply(theta, target);
    Hs { supply, cov }.shsubst(theta, dom, cod, target, None)
}

/// The hereditary structural substitution function `<Θ>^{dom}_{cod} target`.
pub fn shsubst(theta: &Theta, dom: &Type, cod: &Type, target: &Term) -> Result<Term, HsError> {
    shsubst_with(&mut ClauseCoverage::default(), theta, dom, cod, target)
}

/// The uplift of Θ: plain capture-avoiding substitution of the wrapper
/// `\y:dom -> cod. (z_i (y t_i))` for each source `x_i`, applied left to
/// right. Performs no reduction; the reduction-soundness oracle for
/// [`shsubst`].
pub fn uplift_subst(theta: &Theta, dom: &Type, cod: &Type, target: &Term) -> Term {
    let mut supply = theta_supply(theta, target);
    let mut cur = target.clone();
    for entry in theta.iter() {
        let y = supply.fresh("y");
        let wrapper = Term::lam(
            y.clone(),
            Type::arrow(dom.clone(), cod.clone()),
            Term::app(
                Term::var(entry.continuation.clone()),
                Term::app(Term::var(y), entry.argument.clone()),
            ),
        );
        cur = subst(&wrapper, &entry.source, &cur);
    }
    cur
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormError {
    /// The normalization function needs the type of every application's
    /// function part, so the input must type-check.
    TypingRequired(TypeError),
    Hs(HsError),
}

impl fmt::Display for NormError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormError::TypingRequired(e) => write!(f, "{e}"),
            NormError::Hs(e) => write!(f, "{e}"),
        }
    }
}

/// The normalization function built on hereditary substitution: variables
/// map to themselves, abstractions normalize their bodies, and an
/// application normalizes both sides and cuts them together with
/// `[n1/r]^A (r n2)` for a fresh `r`, where `A` is the type of the
/// function part.
pub fn norm_with(cov: &mut ClauseCoverage, ctx: &Context, t: &Term) -> Result<Term, NormError> {
    match t {
        Term::Var(_) => Ok(t.clone()),
        Term::Lam(x, annot, body) => {
            let n = norm_with(cov, &ctx.extended(x.clone(), annot.clone()), body)?;
            Ok(Term::lam(x.clone(), annot.clone(), n))
        }
        Term::Delta(x, annot, body) => {
            let n = norm_with(cov, &ctx.extended(x.clone(), annot.clone()), body)?;
            Ok(Term::delta(x.clone(), annot.clone(), n))
        }
        Term::App(t1, t2) => {
            let n1 = norm_with(cov, ctx, t1)?;
            let n2 = norm_with(cov, ctx, t2)?;
            let fun_ty = infer(ctx, t1).map_err(NormError::TypingRequired)?;
            let mut supply = supply_for(&[&n1, &n2], &[]);
            for name in ctx.names() {
                supply.reserve(name.to_owned());
            }
            let r = supply.fresh("r");
            let target = Term::app(Term::var(r.clone()), n2);
            hsubst_with(cov, &n1, &r, &fun_ty, &target).map_err(NormError::Hs)
        }
    }
}

/// See [`norm_with`].
pub fn norm(ctx: &Context, t: &Term) -> Result<Term, NormError> {
    norm_with(&mut ClauseCoverage::default(), ctx, t)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EqError {
    Norm(NormError),
    TypeMismatch { left: Type, right: Type },
}

impl fmt::Display for EqError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EqError::Norm(e) => write!(f, "{e}"),
            EqError::TypeMismatch { left, right } => {
                write!(f, "type mismatch: `{left}` vs `{right}`")
            }
        }
    }
}

/// Decides β/structural equality of two terms of the same type by
/// comparing their normal forms up to α.
pub fn decide_eq(ctx: &Context, t1: &Term, t2: &Term) -> Result<bool, EqError> {
    let ty1 = infer(ctx, t1).map_err(|e| EqError::Norm(NormError::TypingRequired(e)))?;
    let ty2 = infer(ctx, t2).map_err(|e| EqError::Norm(NormError::TypingRequired(e)))?;
    if ty1 != ty2 {
        return Err(EqError::TypeMismatch {
            left: ty1,
            right: ty2,
        });
    }
    let n1 = norm(ctx, t1).map_err(EqError::Norm)?;
    let n2 = norm(ctx, t2).map_err(EqError::Norm)?;
    Ok(alpha_eq(&n1, &n2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::is_normal;
    use crate::reduction::reduce_to_nf;

    fn b() -> Type {
        Type::base("b")
    }

    fn bb() -> Type {
        Type::arrow(b(), b())
    }

    fn bbbb() -> Type {
        Type::arrow(bb(), bb())
    }

    /// \f:(b->b). f
    fn lam_f() -> Term {
        Term::lam("f", bb(), Term::var("f"))
    }

    /// (x (\y:b. y)) z
    fn spine_target() -> Term {
        Term::app(
            Term::app(Term::var("x"), Term::lam("y", b(), Term::var("y"))),
            Term::var("z"),
        )
    }

    /// delta f:~(b->b). f (delta f':~(b->b). f' (\z:b. z))
    fn example_delta_term() -> Term {
        let inner = Term::delta(
            "f'",
            Type::neg(bb()),
            Term::app(Term::var("f'"), Term::lam("z", b(), Term::var("z"))),
        );
        Term::delta("f", Type::neg(bb()), Term::app(Term::var("f"), inner))
    }

    /// delta z1:~b. z1 (delta z2:~b. z2 u)
    fn example_normal_form() -> Term {
        Term::delta(
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
        )
    }

    #[test]
    fn ctype_base_case() {
        assert_eq!(ctype(&bbbb(), "x", &Term::var("x")), Some(bbbb()));
    }

    #[test]
    fn ctype_application_peels_an_arrow() {
        let t = Term::app(Term::var("x"), Term::lam("y", b(), Term::var("y")));
        assert_eq!(ctype(&bbbb(), "x", &t), Some(bb()));
    }

    #[test]
    fn ctype_undefined_on_other_heads() {
        assert_eq!(ctype(&bb(), "x", &Term::var("y")), None);
        assert_eq!(ctype(&bb(), "x", &lam_f()), None);
        // A spine longer than the arrows of the cut type.
        let t = Term::app(Term::app(Term::var("x"), Term::var("u")), Term::var("v"));
        assert_eq!(ctype(&bb(), "x", &t), None);
    }

    #[test]
    fn hsubst_beta_example() {
        // [\f:(b->b). f / x]^{(b->b)->(b->b)} ((x (\y:b. y)) z) = z
        let got = hsubst(&lam_f(), "x", &bbbb(), &spine_target()).unwrap();
        assert_eq!(got, Term::var("z"));
    }

    #[test]
    fn hsubst_beta_example_intermediates() {
        // The inner application substitutes to \y:b. y ...
        let inner = Term::app(Term::var("x"), Term::lam("y", b(), Term::var("y")));
        let got = hsubst(&lam_f(), "x", &bbbb(), &inner).unwrap();
        assert!(alpha_eq(&got, &Term::lam("y", b(), Term::var("y"))));
        // ... via [\y:b. y / f]^{b->b} f = \y:b. y ...
        let id = Term::lam("y", b(), Term::var("y"));
        let got = hsubst(&id, "f", &bb(), &Term::var("f")).unwrap();
        assert_eq!(got, id);
        // ... and ctype certifies the cut at the head.
        assert_eq!(ctype(&bbbb(), "x", &Term::var("x")), Some(bbbb()));
    }

    #[test]
    fn hsubst_variable_miss() {
        let got = hsubst(&lam_f(), "x", &bbbb(), &Term::var("y")).unwrap();
        assert_eq!(got, Term::var("y"));
    }

    #[test]
    fn hsubst_structural_example() {
        // [t/x]^{b->b} (x u) with the worked Δ-term reproduces the golden
        // output, names included.
        let target = Term::app(Term::var("x"), Term::var("u"));
        let got = hsubst(&example_delta_term(), "x", &bb(), &target).unwrap();
        assert!(alpha_eq(&got, &example_normal_form()), "got {got}");
        assert_eq!(got, example_normal_form());
        assert!(is_normal(&got));
    }

    #[test]
    fn shsubst_example_outer_call() {
        // <(f,z1,u)>_b^b (f (delta f':~(b->b). f' (\z:b. z)))
        //   = z1 (delta z2:~b. z2 u)
        let theta = Theta::single("f", "z1", Term::var("u"));
        let inner = Term::delta(
            "f'",
            Type::neg(bb()),
            Term::app(Term::var("f'"), Term::lam("z", b(), Term::var("z"))),
        );
        let target = Term::app(Term::var("f"), inner);
        let got = shsubst(&theta, &b(), &b(), &target).unwrap();
        let expected = Term::app(
            Term::var("z1"),
            Term::delta(
                "z2",
                Type::neg(b()),
                Term::app(Term::var("z2"), Term::var("u")),
            ),
        );
        assert!(alpha_eq(&got, &expected), "got {got}");
    }

    #[test]
    fn shsubst_example_inner_call() {
        // <(f,z1,u),(f',z2,u)>_b^b (f' (\z:b. z)) = z2 u
        let theta = Theta::from_entries([
            ThetaEntry {
                source: "f".into(),
                continuation: "z1".into(),
                argument: Term::var("u"),
            },
            ThetaEntry {
                source: "f'".into(),
                continuation: "z2".into(),
                argument: Term::var("u"),
            },
        ]);
        let target = Term::app(Term::var("f'"), Term::lam("z", b(), Term::var("z")));
        let got = shsubst(&theta, &b(), &b(), &target).unwrap();
        assert_eq!(got, Term::app(Term::var("z2"), Term::var("u")));
    }

    #[test]
    fn shsubst_empty_theta_is_identity() {
        let got = shsubst(&Theta::new(), &b(), &bb(), &Term::var("x")).unwrap();
        assert_eq!(got, Term::var("x"));
    }

    #[test]
    fn shsubst_variable_hit_builds_wrapper() {
        // <(x,z,t)>^{A1}_{A2} x = \y:A1 -> A2. (z (y t)) with y fresh.
        let theta = Theta::single("x", "z", Term::var("u"));
        let got = shsubst(&theta, &b(), &b(), &Term::var("x")).unwrap();
        let expected = Term::lam(
            "y",
            bb(),
            Term::app(Term::var("z"), Term::app(Term::var("y"), Term::var("u"))),
        );
        assert!(alpha_eq(&got, &expected), "got {got}");
        match got {
            Term::Lam(y, _, _) => assert!(y != "x" && y != "z" && y != "u"),
            other => panic!("expected a lambda, got {other}"),
        }
    }

    #[test]
    fn uplift_single_entry_on_variable() {
        let theta = Theta::single("x", "z", Term::var("t"));
        let got = uplift_subst(&theta, &b(), &bb(), &Term::var("x"));
        let expected = Term::lam(
            "y",
            Type::arrow(b(), bb()),
            Term::app(Term::var("z"), Term::app(Term::var("y"), Term::var("t"))),
        );
        assert!(alpha_eq(&got, &expected), "got {got}");
    }

    #[test]
    fn uplift_empty_theta_is_identity() {
        let t = example_delta_term();
        assert_eq!(uplift_subst(&Theta::new(), &b(), &bb(), &t), t);
    }

    #[test]
    fn shsubst_non_abstraction_argument_applies_stored_term() {
        // <(x,z,u)>_b^b (x (w v)) with w : b -> b -> b, v : b. The uplift
        // oracle pins the contractum: (\y:b->b. z (y u)) (w v) steps to
        // z ((w v) u), so the direct clause must land there too.
        let theta = Theta::single("x", "z", Term::var("u"));
        let wv = Term::app(Term::var("w"), Term::var("v"));
        let target = Term::app(Term::var("x"), wv.clone());
        let direct = shsubst(&theta, &b(), &b(), &target).unwrap();
        let expected = Term::app(Term::var("z"), Term::app(wv, Term::var("u")));
        assert_eq!(direct, expected);
        let lifted = uplift_subst(&theta, &b(), &b(), &target);
        let nf = reduce_to_nf(&lifted, 100).unwrap();
        assert!(alpha_eq(&nf, &direct), "oracle {nf} vs direct {direct}");
        assert!(is_normal(&direct));
    }

    #[test]
    fn uplift_leaves_the_redex_for_the_oracle() {
        // <(f,z1,u)>^ (f (\w:b. w)) is an unreduced β-redex whose normal
        // form is the shsubst output.
        let theta = Theta::single("f", "z1", Term::var("u"));
        let target = Term::app(Term::var("f"), Term::lam("w", b(), Term::var("w")));
        let lifted = uplift_subst(&theta, &b(), &b(), &target);
        let expected = Term::app(
            Term::lam(
                "y",
                bb(),
                Term::app(Term::var("z1"), Term::app(Term::var("y"), Term::var("u"))),
            ),
            Term::lam("w", b(), Term::var("w")),
        );
        assert!(alpha_eq(&lifted, &expected), "got {lifted}");
        let direct = shsubst(&theta, &b(), &b(), &target).unwrap();
        let nf = reduce_to_nf(&lifted, 1000).unwrap();
        assert!(alpha_eq(&nf, &direct));
    }

    #[test]
    fn norm_single_beta() {
        let ctx = Context::from_pairs([("u".into(), b())]);
        let t = Term::app(Term::lam("x", b(), Term::var("x")), Term::var("u"));
        assert_eq!(norm(&ctx, &t), Ok(Term::var("u")));
    }

    #[test]
    fn norm_structural_example() {
        let ctx = Context::from_pairs([("u".into(), b())]);
        let t = Term::app(example_delta_term(), Term::var("u"));
        let got = norm(&ctx, &t).unwrap();
        assert!(alpha_eq(&got, &example_normal_form()), "got {got}");
    }

    #[test]
    fn norm_keeps_normal_forms() {
        let t = Term::lam("x", b(), Term::var("x"));
        assert_eq!(norm(&Context::new(), &t), Ok(t));
    }

    #[test]
    fn decide_eq_beta() {
        let ctx = Context::from_pairs([("u".into(), b())]);
        let t = Term::app(Term::lam("x", b(), Term::var("x")), Term::var("u"));
        assert_eq!(decide_eq(&ctx, &t, &Term::var("u")), Ok(true));
    }

    #[test]
    fn decide_eq_structural_example() {
        let ctx = Context::from_pairs([("u".into(), b())]);
        let t = Term::app(example_delta_term(), Term::var("u"));
        assert_eq!(decide_eq(&ctx, &t, &example_normal_form()), Ok(true));
    }

    #[test]
    fn decide_eq_same_type_distinct_normal_forms() {
        let ctx = Context::from_pairs([("u".into(), b())]);
        let t1 = Term::lam("x", b(), Term::var("x"));
        let t2 = Term::lam("x", b(), Term::var("u"));
        assert_eq!(decide_eq(&ctx, &t1, &t2), Ok(false));
    }

    #[test]
    fn decide_eq_type_mismatch() {
        let ctx = Context::from_pairs([("u".into(), b())]);
        let t1 = Term::lam("x", b(), Term::var("x"));
        let err = decide_eq(&ctx, &t1, &Term::var("u")).unwrap_err();
        assert!(matches!(err, EqError::TypeMismatch { .. }));
    }

    #[test]
    fn ctype_not_arrow_error() {
        // Forcing the β clause with a base cut type: ctype yields b, not an
        // arrow. Only ill-typed inputs can reach this.
        let target = Term::app(Term::var("x"), Term::var("u"));
        let id = Term::lam("y", b(), Term::var("y"));
        let err = hsubst(&id, "x", &b(), &target).unwrap_err();
        assert_eq!(err.kind, HsErrorKind::CtypeNotArrow);
    }

    #[test]
    fn annotation_mismatch_error() {
        // A λ argument annotated with c cannot meet dom = b.
        let theta = Theta::single("x", "z", Term::var("u"));
        let target = Term::app(
            Term::var("x"),
            Term::lam("y", Type::base("c"), Term::var("y")),
        );
        let err = shsubst(&theta, &b(), &b(), &target).unwrap_err();
        assert_eq!(err.kind, HsErrorKind::AnnotationMismatch);
    }

    #[test]
    fn coverage_counters_record_clauses() {
        let mut cov = ClauseCoverage::default();
        let target = Term::app(Term::var("x"), Term::var("u"));
        hsubst_with(&mut cov, &example_delta_term(), "x", &bb(), &target).unwrap();
        assert!(cov.hsubst[0] > 0, "variable hit");
        assert!(cov.hsubst[6] > 0, "structural redex clause");
        assert!(cov.shsubst[5] > 0, "delta-argument clause");
        assert!(cov.shsubst[4] > 0, "lambda-argument clause");
    }

    #[test]
    fn hsubst_shadowed_binder_stops_substitution() {
        let target = Term::lam("x", b(), Term::var("x"));
        let got = hsubst(&Term::var("u"), "x", &b(), &target).unwrap();
        assert_eq!(got, target);
    }

    #[test]
    fn hsubst_renames_captured_binder() {
        // [y/x]^b (\y:b. x y): the binder collides with the replacement.
        let target = Term::lam("y", b(), Term::app(Term::var("x"), Term::var("y")));
        let got = hsubst(&Term::var("y"), "x", &b(), &target).unwrap();
        let expected = Term::lam("w", b(), Term::app(Term::var("y"), Term::var("w")));
        assert!(alpha_eq(&got, &expected), "got {got}");
        match &got {
            Term::Lam(binder, _, body) => {
                assert_ne!(binder, "y");
                assert!(free_vars(body).contains("y"));
            }
            other => panic!("expected a lambda, got {other}"),
        }
    }

    #[test]
    fn norm_extends_context_under_binders() {
        let t = Term::lam(
            "x",
            bb(),
            Term::app(Term::lam("y", bb(), Term::var("y")), Term::var("x")),
        );
        let got = norm(&Context::new(), &t).unwrap();
        assert!(alpha_eq(&got, &Term::lam("x", bb(), Term::var("x"))));
    }

    #[test]
    fn shsubst_renames_shadowing_binders() {
        // The binder z1 collides with a continuation; descending under it
        // must not capture the inserted wrapper.
        let theta = Theta::single("x", "z1", Term::var("u"));
        let target = Term::lam("z1", bb(), Term::app(Term::var("z1"), Term::var("x")));
        let got = shsubst(&theta, &b(), &b(), &target).unwrap();
        match &got {
            Term::Lam(binder, _, body) => {
                assert_ne!(binder, "z1");
                // The wrapper inside mentions the free continuation z1.
                assert!(free_vars(body).contains("z1"));
            }
            other => panic!("expected a lambda, got {other}"),
        }
    }
}
