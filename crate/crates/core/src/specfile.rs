//! Algebra spec files.
//!
//! ```text
//! # comment
//! [language succ]
//! fn succ/1
//! const a, b
//!
//! [algebra succStruct]
//! kind = table
//! language = succ
//! elems = a, b', b, c, d
//! table succ: a -> b
//! ```
//!
//! An algebra section holds `key = value` lines passed to
//! [`builtin`](crate::builtins::builtin) and, for `kind = table`, `table`
//! lines of the form `sym: x, y -> r`. Naming a language checks the built
//! algebra against it; for tables it also supplies the function symbols.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use crate::algebra::{AlgebraPair, PartialAlgebra};
use crate::builtins::{builtin, Params};
use crate::error::{Error, Result};
use crate::lang::{is_identifier, Language};

/// The bundled spec reconstructing the standard example structures.
pub const BUNDLED_SPEC: &str = include_str!("../specs/structures.alg");

#[derive(Debug, Clone, Default)]
pub struct Registry {
    algebras: BTreeMap<String, Arc<PartialAlgebra>>,
    languages: BTreeMap<String, Language>,
}

impl Registry {
    pub fn get(&self, name: &str) -> Result<Arc<PartialAlgebra>> {
        self.algebras
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownAlgebra(name.to_string()))
    }

    pub fn language(&self, name: &str) -> Option<&Language> {
        self.languages.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.algebras.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.algebras.len()
    }

    pub fn is_empty(&self) -> bool {
        self.algebras.is_empty()
    }

    pub fn insert(&mut self, alg: PartialAlgebra) {
        self.algebras.insert(alg.name().to_string(), Arc::new(alg));
    }

    /// `"A"` names the single-domain pair, `"A,B"` a source/target pair.
    pub fn pair(&self, spec: &str) -> Result<AlgebraPair> {
        match spec.split_once(',') {
            None => Ok(AlgebraPair::single(self.get(spec.trim())?)),
            Some((s, t)) => AlgebraPair::new(self.get(s.trim())?, self.get(t.trim())?),
        }
    }
}

pub fn load_spec(path: impl AsRef<Path>) -> Result<Registry> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Spec {
        line: 0,
        message: format!("{}: {e}", path.display()),
    })?;
    parse_spec(&text)
}

pub fn bundled_registry() -> Registry {
    parse_spec(BUNDLED_SPEC).expect("bundled spec is valid")
}

enum Section {
    None,
    Language {
        line: usize,
        name: String,
        functions: Vec<(String, usize)>,
        constants: Vec<String>,
    },
    Algebra {
        line: usize,
        name: String,
        params: Params,
        rows: Vec<String>,
    },
}

pub fn parse_spec(text: &str) -> Result<Registry> {
    let mut reg = Registry::default();
    let mut section = Section::None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| Error::Spec { line, message };
        let body = raw.split_once('#').map_or(raw, |(b, _)| b).trim();
        if body.is_empty() {
            continue;
        }
        if let Some(header) = body.strip_prefix('[') {
            let header = header
                .strip_suffix(']')
                .ok_or_else(|| err("unterminated section header".into()))?;
            finish(&mut reg, std::mem::replace(&mut section, Section::None))?;
            let (kind, name) = header
                .trim()
                .split_once(char::is_whitespace)
                .unwrap_or((header.trim(), ""));
            let name = name.trim().to_string();
            section = match kind {
                "language" => {
                    if reg.languages.contains_key(&name) {
                        return Err(err(format!("language `{name}` defined twice")));
                    }
                    Section::Language {
                        line,
                        name,
                        functions: Vec::new(),
                        constants: Vec::new(),
                    }
                }
                "algebra" => {
                    if !is_identifier(&name) {
                        return Err(err(format!("bad algebra name `{name}`")));
                    }
                    if reg.algebras.contains_key(&name) {
                        return Err(err(format!("algebra `{name}` defined twice")));
                    }
                    Section::Algebra {
                        line,
                        name,
                        params: Params::new(),
                        rows: Vec::new(),
                    }
                }
                other => return Err(err(format!("unknown section `{other}`"))),
            };
            continue;
        }
        match &mut section {
            Section::None => return Err(err("content outside a section".into())),
            Section::Language {
                functions,
                constants,
                ..
            } => {
                if let Some(decls) = body.strip_prefix("fn ") {
                    for decl in decls.split(',').map(str::trim) {
                        let (sym, rank) = decl
                            .split_once('/')
                            .and_then(|(s, r)| Some((s.trim().to_string(), r.trim().parse().ok()?)))
                            .ok_or_else(|| err(format!("bad function declaration `{decl}`")))?;
                        functions.push((sym, rank));
                    }
                } else if let Some(decls) = body.strip_prefix("const ") {
                    constants.extend(decls.split(',').map(|c| c.trim().to_string()));
                } else {
                    return Err(err(format!("expected `fn` or `const`, found `{body}`")));
                }
            }
            Section::Algebra { params, rows, .. } => {
                if let Some(row) = body.strip_prefix("table ") {
                    let (sym, mapping) = row
                        .split_once(':')
                        .ok_or_else(|| err(format!("bad table line `{body}`")))?;
                    let (args, result) = mapping
                        .split_once("->")
                        .ok_or_else(|| err(format!("bad table line `{body}`")))?;
                    let args: Vec<&str> = args.split(',').map(str::trim).collect();
                    rows.push(format!(
                        "{}({})={}",
                        sym.trim(),
                        args.join(","),
                        result.trim()
                    ));
                } else {
                    let (key, value) = body
                        .split_once('=')
                        .ok_or_else(|| err(format!("expected `key = value`, found `{body}`")))?;
                    let key = key.trim().to_string();
                    if params
                        .insert(key.clone(), value.trim().to_string())
                        .is_some()
                    {
                        return Err(err(format!("key `{key}` given twice")));
                    }
                }
            }
        }
    }
    finish(&mut reg, section)?;
    Ok(reg)
}

fn finish(reg: &mut Registry, section: Section) -> Result<()> {
    match section {
        Section::None => Ok(()),
        Section::Language {
            line,
            name,
            functions,
            constants,
        } => {
            let lang = Language::new(functions, constants).map_err(|e| Error::Spec {
                line,
                message: e.to_string(),
            })?;
            reg.languages.insert(name, lang);
            Ok(())
        }
        Section::Algebra {
            line,
            name,
            mut params,
            rows,
        } => {
            let err = |message: String| Error::Spec { line, message };
            let kind = params
                .remove("kind")
                .ok_or_else(|| err(format!("algebra `{name}` has no kind")))?;
            let language = match params.remove("language") {
                None => None,
                Some(l) => Some(
                    reg.languages
                        .get(&l)
                        .cloned()
                        .ok_or_else(|| err(format!("unknown language `{l}`")))?,
                ),
            };
            if !rows.is_empty() {
                if kind != "table" {
                    return Err(err(format!("`table` lines need kind = table, not {kind}")));
                }
                if params.contains_key("rows") {
                    return Err(err(
                        "give rows either as `rows =` or as `table` lines".into()
                    ));
                }
                params.insert("rows".into(), rows.join(";"));
            }
            if kind == "table" && !params.contains_key("fns") {
                if let Some(lang) = &language {
                    let fns: Vec<String> = lang
                        .functions()
                        .iter()
                        .map(|f| format!("{}/{}", f.name, f.rank))
                        .collect();
                    params.insert("fns".into(), fns.join(","));
                }
            }
            let alg = builtin(&kind, &name, &params).map_err(|e| err(e.to_string()))?;
            if let Some(lang) = language {
                if *alg.language() != lang {
                    return Err(err(format!(
                        "algebra `{name}` has language {}, declared {lang}",
                        alg.language()
                    )));
                }
            }
            reg.insert(alg);
            Ok(())
        }
    }
}
