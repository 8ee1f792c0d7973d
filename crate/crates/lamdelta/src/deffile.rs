//! Definition files: the persistent format of the artifact.
//!
//! Line oriented, UTF-8, LF or CRLF. Each non-blank, non-comment line is
//! one declaration:
//!
//! ```text
//! # a comment
//! base b
//! def id : b -> b = \x:b. x
//! def twice = \f:b -> b. \x:b. f (f x)
//! ```
//!
//! Later definitions may reference earlier ones; references are expanded
//! by capture-avoiding substitution in declaration order before any
//! checking, so the calculus itself stays recursion free.

use std::fmt;

use lambda_delta::ast::{subst, Term, Type};

use crate::syntax::{parser_at, DefLine, ParseError, SourceSpan};

#[derive(Debug, Clone, PartialEq)]
pub enum Decl {
    Base {
        name: String,
        span: SourceSpan,
    },
    Def {
        name: String,
        ascription: Option<Type>,
        body: Term,
        span: SourceSpan,
    },
}

impl Decl {
    pub fn name(&self) -> &str {
        match self {
            Decl::Base { name, .. } | Decl::Def { name, .. } => name,
        }
    }

    pub fn span(&self) -> SourceSpan {
        match self {
            Decl::Base { span, .. } | Decl::Def { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DefFile {
    pub declarations: Vec<Decl>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DefFileError {
    Parse(ParseError),
    DuplicateName { name: String, span: SourceSpan },
}

impl fmt::Display for DefFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DefFileError::Parse(e) => write!(f, "{e}"),
            DefFileError::DuplicateName { name, span } => {
                write!(f, "duplicate name `{name}` at {}:{}", span.line, span.col)
            }
        }
    }
}

impl std::error::Error for DefFileError {}

impl From<ParseError> for DefFileError {
    fn from(e: ParseError) -> DefFileError {
        DefFileError::Parse(e)
    }
}

pub fn parse_deffile(text: &str) -> Result<DefFile, DefFileError> {
    let mut decls = Vec::new();
    let mut offset = 0usize;
    for (line_idx, raw_line) in text.split('\n').enumerate() {
        let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);
        let meaningful = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        if !meaningful.trim().is_empty() {
            let mut p = parser_at(line, offset, line_idx as u32 + 1)?;
            let decl = match p.def_line()? {
                DefLine::Base { name, span } => Decl::Base { name, span },
                DefLine::Def {
                    name,
                    ascription,
                    body,
                    span,
                } => Decl::Def {
                    name,
                    ascription,
                    body,
                    span,
                },
            };
            if decls.iter().any(|d: &Decl| d.name() == decl.name()) {
                return Err(DefFileError::DuplicateName {
                    name: decl.name().to_string(),
                    span: decl.span(),
                });
            }
            decls.push(decl);
        }
        offset += raw_line.len() + 1;
    }
    Ok(DefFile { declarations: decls })
}

/// A definition with all references to earlier definitions substituted away.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpandedDef {
    pub name: String,
    pub ascription: Option<Type>,
    pub body: Term,
}

/// Expands each definition by substituting every earlier expanded
/// definition for its name, in declaration order.
pub fn expand(file: &DefFile) -> Vec<ExpandedDef> {
    let mut out: Vec<ExpandedDef> = Vec::new();
    for decl in &file.declarations {
        if let Decl::Def {
            name,
            ascription,
            body,
            ..
        } = decl
        {
            let mut expanded = body.clone();
            for prev in &out {
                expanded = subst(&prev.body, &prev.name, &expanded);
            }
            out.push(ExpandedDef {
                name: name.clone(),
                ascription: ascription.clone(),
                body: expanded,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use lambda_delta::ast::Type;

    #[test]
    fn base_and_def_lines() {
        let file = parse_deffile("base b\ndef id : b -> b = \\x:b. x").unwrap();
        assert_eq!(file.declarations.len(), 2);
        assert_eq!(file.declarations[0].name(), "b");
        match &file.declarations[1] {
            Decl::Def {
                name, ascription, ..
            } => {
                assert_eq!(name, "id");
                assert_eq!(
                    ascription,
                    &Some(Type::arrow(Type::base("b"), Type::base("b")))
                );
            }
            other => panic!("expected a def, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_names_rejected() {
        let err = parse_deffile("def two = \\x:b. x\ndef two = x").unwrap_err();
        match err {
            DefFileError::DuplicateName { name, span } => {
                assert_eq!(name, "two");
                assert_eq!(span.line, 2);
            }
            other => panic!("expected duplicate-name error, got {other}"),
        }
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let src = "# definitions\n\nbase b\n# trailing\ndef id = \\x:b. x  # inline\n";
        let file = parse_deffile(src).unwrap();
        assert_eq!(file.declarations.len(), 2);
    }

    #[test]
    fn worked_example_terms_as_defs() {
        let src = "base b\n\
                   def t = delta f:~(b->b). f (delta f':~(b->b). f' (\\z:b. z))\n\
                   def t' = \\f:(b->b). f\n";
        let file = parse_deffile(src).unwrap();
        assert_eq!(file.declarations.len(), 3);
    }

    #[test]
    fn expansion_substitutes_earlier_defs() {
        let src = "def id = \\x:b. x\ndef app_id = id u";
        let defs = expand(&parse_deffile(src).unwrap());
        assert_eq!(defs.len(), 2);
        assert_eq!(
            defs[1].body,
            Term::app(
                Term::lam("x", Type::base("b"), Term::var("x")),
                Term::var("u")
            )
        );
    }

    #[test]
    fn crlf_accepted() {
        let file = parse_deffile("base b\r\ndef id = \\x:b. x\r\n").unwrap();
        assert_eq!(file.declarations.len(), 2);
    }

    #[test]
    fn spans_point_into_the_file() {
        let src = "base b\ndef broken = \\x:b";
        let err = parse_deffile(src).unwrap_err();
        match err {
            DefFileError::Parse(e) => {
                assert_eq!(e.span.line, 2);
                assert!(e.span.start <= src.len() && e.span.end <= src.len());
            }
            other => panic!("expected parse error, got {other}"),
        }
    }
}
