//! Languages, terms and the textual syntax for terms and proportion queries.
//!
//! Terms are written in prefix form: `mul(z1,z1)`, `or(z1,one)`, `zero`.
//! Variables are the fixed family `z1, z2, ...`; every other identifier is a
//! function or constant symbol of the language.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FunctionSymbol {
    pub name: String,
    pub rank: usize,
}

/// A signature: function symbols with ranks plus constant symbols.
///
/// Symbols are kept sorted by name so that two languages declared in a
/// different order compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Language {
    functions: Vec<FunctionSymbol>,
    constants: Vec<String>,
}

impl Language {
    pub fn new(
        functions: impl IntoIterator<Item = (String, usize)>,
        constants: impl IntoIterator<Item = String>,
    ) -> Result<Self> {
        let mut functions: Vec<FunctionSymbol> = functions
            .into_iter()
            .map(|(name, rank)| FunctionSymbol { name, rank })
            .collect();
        let mut constants: Vec<String> = constants.into_iter().collect();
        functions.sort_by(|a, b| a.name.cmp(&b.name));
        constants.sort();

        let mut seen = std::collections::HashSet::new();
        for name in functions
            .iter()
            .map(|f| f.name.as_str())
            .chain(constants.iter().map(String::as_str))
        {
            if !is_identifier(name) {
                return Err(Error::InvalidLanguage(format!(
                    "`{name}` is not an identifier"
                )));
            }
            if variable_index(name).is_some() {
                return Err(Error::InvalidLanguage(format!(
                    "`{name}` clashes with the variable family z1, z2, ..."
                )));
            }
            if !seen.insert(name) {
                return Err(Error::InvalidLanguage(format!(
                    "symbol `{name}` declared twice"
                )));
            }
        }
        if let Some(f) = functions.iter().find(|f| f.rank == 0) {
            return Err(Error::InvalidLanguage(format!(
                "function symbol `{}` has rank 0; declare it as a constant",
                f.name
            )));
        }
        Ok(Language {
            functions,
            constants,
        })
    }

    pub fn functions(&self) -> &[FunctionSymbol] {
        &self.functions
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn function_index(&self, name: &str) -> Option<usize> {
        self.functions
            .binary_search_by(|f| f.name.as_str().cmp(name))
            .ok()
    }

    pub fn constant_index(&self, name: &str) -> Option<usize> {
        self.constants
            .binary_search_by(|c| c.as_str().cmp(name))
            .ok()
    }

    pub fn rank(&self, name: &str) -> Option<usize> {
        self.function_index(name).map(|i| self.functions[i].rank)
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty() && self.constants.is_empty()
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fns: Vec<String> = self
            .functions
            .iter()
            .map(|s| format!("{}/{}", s.name, s.rank))
            .collect();
        write!(f, "{{{}; {}}}", fns.join(", "), self.constants.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// 1-based variable index.
    Var(u32),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(index: u32) -> Term {
        assert!(index >= 1, "variables are 1-based");
        Term::Var(index)
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn app(symbol: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(symbol.into(), args)
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Distinct variable indices in order of first occurrence.
    pub fn variables(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<u32>) {
        match self {
            Term::Var(i) => {
                if !out.contains(i) {
                    out.push(*i);
                }
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn max_variable(&self) -> u32 {
        self.variables().into_iter().max().unwrap_or(0)
    }

    /// Checks symbol membership and arities against `lang`.
    pub fn check(&self, lang: &Language) -> Result<()> {
        match self {
            Term::Var(i) => {
                if *i == 0 {
                    Err(Error::UnboundVariable(0))
                } else {
                    Ok(())
                }
            }
            Term::Const(c) => lang
                .constant_index(c)
                .map(|_| ())
                .ok_or_else(|| Error::UnknownSymbol(c.clone())),
            Term::App(f, args) => {
                let rank = lang
                    .rank(f)
                    .ok_or_else(|| Error::UnknownSymbol(f.clone()))?;
                if rank != args.len() {
                    return Err(Error::ArityMismatch {
                        symbol: f.clone(),
                        expected: rank,
                        got: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(lang))
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "z{i}"),
            Term::Const(c) => f.write_str(c),
            Term::App(sym, args) => {
                write!(f, "{sym}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn print_term(t: &Term) -> String {
    t.to_string()
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// `Some(i)` when `s` is the variable `zi`.
pub(crate) fn variable_index(s: &str) -> Option<u32> {
    let digits = s.strip_prefix('z')?;
    if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

struct TermParser<'a> {
    src: &'a str,
    pos: usize,
    lang: &'a Language,
}

impl<'a> TermParser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn ident(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .char_indices()
            .find(|&(i, c)| {
                !(c.is_ascii_alphanumeric() || c == '_') || (i == 0 && c.is_ascii_digit())
            })
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(self.error("expected a variable or symbol"));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn term(&mut self) -> Result<Term> {
        let start = self.pos;
        let name = self.ident()?;
        if let Some(i) = variable_index(name) {
            return Ok(Term::Var(i));
        }
        if self.peek() == Some('(') {
            self.pos += 1;
            let mut args = vec![self.term()?];
            while self.peek() == Some(',') {
                self.pos += 1;
                args.push(self.term()?);
            }
            self.expect(')')?;
            let rank = self
                .lang
                .rank(name)
                .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
            if rank != args.len() {
                return Err(Error::ArityMismatch {
                    symbol: name.to_string(),
                    expected: rank,
                    got: args.len(),
                });
            }
            return Ok(Term::App(name.to_string(), args));
        }
        if self.lang.constant_index(name).is_some() {
            return Ok(Term::Const(name.to_string()));
        }
        if let Some(rank) = self.lang.rank(name) {
            return Err(Error::ArityMismatch {
                symbol: name.to_string(),
                expected: rank,
                got: 0,
            });
        }
        if name.starts_with('z') && name[1..].bytes().all(|b| b.is_ascii_digit()) {
            self.pos = start;
            return Err(self.error(format!("`{name}` is not a valid variable")));
        }
        Err(Error::UnknownSymbol(name.to_string()))
    }
}

pub fn parse_term(text: &str, lang: &Language) -> Result<Term> {
    let mut p = TermParser {
        src: text,
        pos: 0,
        lang,
    };
    let t = p.term()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error("trailing input"));
    }
    Ok(t)
}

/// `a:b::c:d` or `a:b::c:z` with an optional `@source,target` suffix.
///
/// Element literals are kept as text; algebras resolve them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProportionQuery {
    pub a: String,
    pub b: String,
    pub c: String,
    /// `None` is the solve marker `z`.
    pub d: Option<String>,
    pub source: Option<String>,
    pub target: Option<String>,
}

impl ProportionQuery {
    pub fn is_solve(&self) -> bool {
        self.d.is_none()
    }
}

impl fmt::Display for ProportionQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}::{}:{}",
            self.a,
            self.b,
            self.c,
            self.d.as_deref().unwrap_or("z")
        )?;
        if let (Some(s), Some(t)) = (&self.source, &self.target) {
            write!(f, " @{s},{t}")?;
        }
        Ok(())
    }
}

pub fn parse_query(text: &str) -> Result<ProportionQuery> {
    let syntax = |position: usize, message: &str| Error::Syntax {
        position,
        message: message.to_string(),
    };
    let (body, suffix) = match text.find('@') {
        Some(i) => (&text[..i], Some((i, &text[i + 1..]))),
        None => (text, None),
    };
    let (source, target) = match suffix {
        None => (None, None),
        Some((at, s)) => {
            let mut parts = s.split(',').map(str::trim);
            match (parts.next(), parts.next(), parts.next()) {
                (Some(src), Some(tgt), None) if !src.is_empty() && !tgt.is_empty() => {
                    (Some(src.to_string()), Some(tgt.to_string()))
                }
                (Some(one), None, None) if !one.is_empty() => {
                    (Some(one.to_string()), Some(one.to_string()))
                }
                _ => return Err(syntax(at, "expected `@source,target`")),
            }
        }
    };

    let halves: Vec<&str> = body.split("::").collect();
    if halves.len() != 2 {
        return Err(syntax(0, "expected exactly one `::`"));
    }
    let split_pair = |s: &str, offset: usize| -> Result<(String, String)> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 2 {
            return Err(syntax(offset, "expected `<elem> : <elem>`"));
        }
        let (x, y) = (parts[0].trim(), parts[1].trim());
        if x.is_empty() || y.is_empty() {
            return Err(syntax(offset, "empty element literal"));
        }
        Ok((x.to_string(), y.to_string()))
    };
    let (a, b) = split_pair(halves[0], 0)?;
    let (c, d) = split_pair(halves[1], halves[0].len() + 2)?;
    Ok(ProportionQuery {
        a,
        b,
        c,
        d: if d == "z" { None } else { Some(d) },
        source,
        target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lang(fns: &[(&str, usize)], consts: &[&str]) -> Language {
        Language::new(
            fns.iter().map(|(n, r)| (n.to_string(), *r)),
            consts.iter().map(|c| c.to_string()),
        )
        .unwrap()
    }

    #[test]
    fn parses_application_and_variables() {
        let l = lang(&[("mul", 2)], &[]);
        let t = parse_term("mul(z1,z1)", &l).unwrap();
        assert_eq!(t, Term::app("mul", vec![Term::var(1), Term::var(1)]));
        assert_eq!(parse_term("z1", &l).unwrap(), Term::Var(1));
        assert_eq!(print_term(&t), "mul(z1,z1)");
    }

    #[test]
    fn parses_constants() {
        let l = lang(&[("or", 2)], &["one"]);
        let t = parse_term("or(z1, one)", &l).unwrap();
        assert_eq!(
            t,
            Term::app("or", vec![Term::Var(1), Term::constant("one")])
        );
        assert_eq!(t.to_string(), "or(z1,one)");
        assert_eq!(Term::Var(2).to_string(), "z2");
        assert_eq!(Term::constant("one").to_string(), "one");
    }

    #[test]
    fn rejects_bad_terms() {
        let l = lang(&[("mul", 2)], &["one"]);
        assert!(matches!(
            parse_term("mul(z1)", &l),
            Err(Error::ArityMismatch {
                expected: 2,
                got: 1,
                ..
            })
        ));
        assert!(matches!(
            parse_term("add(z1,z2)", &l),
            Err(Error::UnknownSymbol(_))
        ));
        assert!(matches!(
            parse_term("mul(z1,z2", &l),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(parse_term("z0", &l), Err(Error::Syntax { .. })));
        assert!(matches!(
            parse_term("mul", &l),
            Err(Error::ArityMismatch { got: 0, .. })
        ));
        assert!(matches!(
            parse_term("one two", &l),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn language_invariants() {
        assert!(Language::new(vec![("f".into(), 0)], vec![]).is_err());
        assert!(Language::new(vec![("f".into(), 1)], vec!["f".into()]).is_err());
        assert!(Language::new(vec![("z3".into(), 1)], vec![]).is_err());
        let a = lang(&[("b", 1), ("a", 2)], &["y", "x"]);
        let b = lang(&[("a", 2), ("b", 1)], &["x", "y"]);
        assert_eq!(a, b);
    }

    #[test]
    fn depth_size_and_variables() {
        let l = lang(&[("f", 2), ("g", 1)], &["c"]);
        let t = parse_term("f(g(z2),f(z1,z2))", &l).unwrap();
        assert_eq!(t.depth(), 2);
        assert_eq!(t.size(), 6);
        assert_eq!(t.variables(), vec![2, 1]);
        assert_eq!(parse_term("c", &l).unwrap().depth(), 0);
    }

    #[test]
    fn queries() {
        let q = parse_query("2:4::3:z").unwrap();
        assert!(q.is_solve());
        assert_eq!((q.a.as_str(), q.b.as_str(), q.c.as_str()), ("2", "4", "3"));

        let q = parse_query("1:0::1:1").unwrap();
        assert_eq!(q.d.as_deref(), Some("1"));

        let q = parse_query("{a}:{a,b}::1:z @setsAB,natAdd1").unwrap();
        assert_eq!(q.a, "{a}");
        assert_eq!(q.b, "{a,b}");
        assert_eq!(q.source.as_deref(), Some("setsAB"));
        assert_eq!(q.target.as_deref(), Some("natAdd1"));
        assert!(q.is_solve());

        assert!(parse_query("1:2:3:4").is_err());
        assert!(parse_query("1:2::3").is_err());
        assert!(parse_query(":2::3:4").is_err());
        assert!(parse_query("1:2::3:4 @").is_err());
    }
}
