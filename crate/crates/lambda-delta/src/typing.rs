//! The typing judgment Γ ⊢ t : T.
//!
//! Inference is syntax directed: variables are looked up, a λ returns an
//! arrow, an application demands an arrow whose domain matches the argument
//! structurally, and a Δ demands a negation annotation `T -> bot` with a
//! body of type `bot`, concluding `T`. There is no type-level computation;
//! type equality is structural equality throughout.

use alloc::collections::BTreeSet;
use alloc::string::String;
use core::fmt;

use crate::ast::{Context, Term, Type};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeErrorKind {
    UnboundVariable,
    NotAnArrow,
    ArgumentMismatch,
    DeltaAnnotationNotNegation,
    DeltaBodyNotBottom,
    DuplicateContextName,
}

/// A typing failure, naming the offending subterm and, where applicable,
/// the expected and actual types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub subject: Term,
    pub expected: Option<Type>,
    pub actual: Option<Type>,
}

impl TypeError {
    fn new(kind: TypeErrorKind, subject: &Term) -> TypeError {
        TypeError {
            kind,
            subject: subject.clone(),
            expected: None,
            actual: None,
        }
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TypeErrorKind::UnboundVariable => {
                write!(f, "unbound variable `{}`", self.subject)
            }
            TypeErrorKind::NotAnArrow => write!(
                f,
                "`{}` has type `{}`, which is not an arrow, so it cannot be applied",
                self.subject,
                self.actual.as_ref().unwrap()
            ),
            TypeErrorKind::ArgumentMismatch => write!(
                f,
                "argument type mismatch in `{}`: expected `{}`, found `{}`",
                self.subject,
                self.expected.as_ref().unwrap(),
                self.actual.as_ref().unwrap()
            ),
            TypeErrorKind::DeltaAnnotationNotNegation => write!(
                f,
                "delta annotation `{}` is not a negation `T -> bot` in `{}`",
                self.actual.as_ref().unwrap(),
                self.subject
            ),
            TypeErrorKind::DeltaBodyNotBottom => write!(
                f,
                "delta body must have type `bot`, found `{}` in `{}`",
                self.actual.as_ref().unwrap(),
                self.subject
            ),
            TypeErrorKind::DuplicateContextName => {
                write!(f, "duplicate context name `{}`", self.subject)
            }
        }
    }
}

/// Syntax-directed type inference. Total: every term either gets a type or
/// a [`TypeError`] naming the offending subterm.
pub fn infer(ctx: &Context, t: &Term) -> Result<Type, TypeError> {
    match t {
        Term::Var(x) => ctx
            .lookup(x)
            .cloned()
            .ok_or_else(|| TypeError::new(TypeErrorKind::UnboundVariable, t)),
        Term::Lam(x, annot, body) => {
            let body_ty = infer(&ctx.extended(x.clone(), annot.clone()), body)?;
            Ok(Type::arrow(annot.clone(), body_ty))
        }
        Term::Delta(x, annot, body) => {
            let Some(concl) = annot.negated() else {
                let mut e = TypeError::new(TypeErrorKind::DeltaAnnotationNotNegation, t);
                e.actual = Some(annot.clone());
                return Err(e);
            };
            let body_ty = infer(&ctx.extended(x.clone(), annot.clone()), body)?;
            if body_ty != Type::Bottom {
                let mut e = TypeError::new(TypeErrorKind::DeltaBodyNotBottom, t);
                e.expected = Some(Type::Bottom);
                e.actual = Some(body_ty);
                return Err(e);
            }
            Ok(concl.clone())
        }
        Term::App(fun, arg) => {
            let fun_ty = infer(ctx, fun)?;
            let Some((dom, cod)) = fun_ty.as_arrow() else {
                let mut e = TypeError::new(TypeErrorKind::NotAnArrow, fun);
                e.actual = Some(fun_ty.clone());
                return Err(e);
            };
            let arg_ty = infer(ctx, arg)?;
            if arg_ty != *dom {
                let mut e = TypeError::new(TypeErrorKind::ArgumentMismatch, t);
                e.expected = Some(dom.clone());
                e.actual = Some(arg_ty);
                return Err(e);
            }
            Ok(cod.clone())
        }
    }
}

/// Checks that all names in the domain of the context are unique.
pub fn check_context(ctx: &Context) -> Result<(), TypeError> {
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for (name, _) in ctx.iter() {
        if !seen.insert(name) {
            return Err(TypeError::new(
                TypeErrorKind::DuplicateContextName,
                &Term::var(String::from(name)),
            ));
        }
    }
    Ok(())
}

/// Weakening predicate: if `t` types in `ctx`, it types to the structurally
/// equal type after adding an unused binding. Used as a property-test
/// oracle; `extra.0` must be fresh for `ctx` and `t`.
pub fn weaken_holds(ctx: &Context, t: &Term, extra: (&str, &Type)) -> bool {
    match infer(ctx, t) {
        Err(_) => true,
        Ok(ty) => infer(&ctx.extended(extra.0, extra.1.clone()), t) == Ok(ty),
    }
}
