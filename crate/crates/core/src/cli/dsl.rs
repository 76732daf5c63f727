//! The line-oriented text format for fixtures.
//!
//! A block starts at column 1 with `<kind> <name>`; its declarations follow
//! on indented lines as whitespace-separated tokens, optionally split by a
//! lone `=`. `#` starts a comment and `include <file>` splices another file
//! relative to the including one.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("{file}:{line}:{col}: {msg}")]
    ParseError { file: String, line: usize, col: usize, msg: String },
    #[error("{file}:{line}: unresolved reference {name}")]
    UnresolvedReference { file: String, line: usize, name: String },
    #[error("{file}:{line}: duplicate name {name}")]
    DuplicateName { file: String, line: usize, name: String },
    #[error("cannot read {0}")]
    Io(String),
}

impl DslError {
    pub fn code(&self) -> &'static str {
        match self {
            DslError::ParseError { .. } => "ParseError",
            DslError::UnresolvedReference { .. } => "UnresolvedReference",
            DslError::DuplicateName { .. } => "DuplicateName",
            DslError::Io(_) => "Io",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockKind {
    Category,
    Monoidal,
    Bicategory,
    Base,
    PathObject,
    Distributor,
    Metric,
    Cocycle,
    Transport,
    Bimodule,
}

impl BlockKind {
    pub const ALL: [BlockKind; 10] = [
        BlockKind::Category,
        BlockKind::Monoidal,
        BlockKind::Bicategory,
        BlockKind::Base,
        BlockKind::PathObject,
        BlockKind::Distributor,
        BlockKind::Metric,
        BlockKind::Cocycle,
        BlockKind::Transport,
        BlockKind::Bimodule,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            BlockKind::Category => "category",
            BlockKind::Monoidal => "monoidal",
            BlockKind::Bicategory => "bicategory",
            BlockKind::Base => "base",
            BlockKind::PathObject => "pathobject",
            BlockKind::Distributor => "distributor",
            BlockKind::Metric => "metric",
            BlockKind::Cocycle => "cocycle",
            BlockKind::Transport => "transport",
            BlockKind::Bimodule => "bimodule",
        }
    }

    fn from_keyword(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.keyword() == s)
    }
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Where a line came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Span {
    pub file: String,
    pub line: usize,
}

/// `keyword args… [= rhs…]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decl {
    pub span: Span,
    pub keyword: String,
    pub args: Vec<String>,
    pub rhs: Option<Vec<String>>,
}

impl Decl {
    pub fn rhs1(&self) -> Option<&str> {
        match self.rhs.as_deref() {
            Some([x]) => Some(x),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub kind: BlockKind,
    pub name: String,
    pub span: Span,
    pub decls: Vec<Decl>,
}

impl Block {
    pub fn all<'a>(&'a self, keyword: &'a str) -> impl Iterator<Item = &'a Decl> + 'a {
        self.decls.iter().filter(move |d| d.keyword == keyword)
    }

    pub fn first<'a>(&'a self, keyword: &'a str) -> Option<&'a Decl> {
        self.all(keyword).next()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpecDocument {
    pub blocks: Vec<Block>,
}

impl SpecDocument {
    pub fn get(&self, kind: BlockKind, name: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.kind == kind && b.name == name)
    }

    pub fn of_kind(&self, kind: BlockKind) -> impl Iterator<Item = &Block> {
        self.blocks.iter().filter(move |b| b.kind == kind)
    }

    /// The only block of a kind, when there is exactly one.
    pub fn sole(&self, kind: BlockKind) -> Option<&Block> {
        let mut it = self.of_kind(kind);
        match (it.next(), it.next()) {
            (Some(b), None) => Some(b),
            _ => None,
        }
    }
}

/// Category names accepted without a block: `One`, `interval:N`,
/// `coarse:a,b,…`, `discrete:a,b,…`.
pub fn is_builtin_category(name: &str) -> bool {
    name == "One"
        || name.strip_prefix("interval:").is_some_and(|n| n.parse::<usize>().is_ok())
        || name.strip_prefix("coarse:").is_some_and(|s| !s.is_empty())
        || name.strip_prefix("discrete:").is_some_and(|s| !s.is_empty())
}

pub fn parse_spec(path: &Path) -> Result<SpecDocument, DslError> {
    let mut doc = SpecDocument::default();
    let mut seen = BTreeSet::new();
    read_into(path, &mut doc, &mut seen)?;
    resolve(&doc)?;
    Ok(doc)
}

/// Parses text as if read from `file`; includes resolve against `dir`.
pub fn parse_str(text: &str, file: &str, dir: &Path) -> Result<SpecDocument, DslError> {
    let mut doc = SpecDocument::default();
    let mut seen = BTreeSet::new();
    parse_text(text, file, dir, &mut doc, &mut seen)?;
    resolve(&doc)?;
    Ok(doc)
}

fn read_into(path: &Path, doc: &mut SpecDocument, seen: &mut BTreeSet<PathBuf>) -> Result<(), DslError> {
    let canonical = path.canonicalize().map_err(|_| DslError::Io(path.display().to_string()))?;
    if !seen.insert(canonical.clone()) {
        return Ok(());
    }
    let text = std::fs::read_to_string(&canonical).map_err(|_| DslError::Io(path.display().to_string()))?;
    let dir = canonical.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_text(&text, &path.display().to_string(), &dir, doc, seen)
}

fn parse_text(
    text: &str,
    file: &str,
    dir: &Path,
    doc: &mut SpecDocument,
    seen: &mut BTreeSet<PathBuf>,
) -> Result<(), DslError> {
    let err = |line: usize, col: usize, msg: String| DslError::ParseError { file: file.into(), line, col, msg };
    let mut current: Option<Block> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let indented = content.starts_with(' ') || content.starts_with('\t');
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let col = content.len() - content.trim_start().len() + 1;
        let span = Span { file: file.into(), line };
        if !indented {
            if let Some(b) = current.take() {
                doc.blocks.push(b);
            }
            if tokens[0] == "include" {
                let [_, target] = tokens[..] else {
                    return Err(err(line, col, "include takes one path".into()));
                };
                read_into(&dir.join(target), doc, seen)?;
                continue;
            }
            let kind = BlockKind::from_keyword(tokens[0])
                .ok_or_else(|| err(line, col, format!("unknown block kind {}", tokens[0])))?;
            let [_, name] = tokens[..] else {
                return Err(err(line, col, format!("{kind} block needs exactly one name")));
            };
            current = Some(Block { kind, name: name.into(), span, decls: Vec::new() });
            continue;
        }
        let Some(block) = current.as_mut() else {
            return Err(err(line, col, "declaration outside a block".into()));
        };
        let eq: Vec<usize> = tokens.iter().enumerate().filter(|(_, t)| **t == "=").map(|(i, _)| i).collect();
        let (lhs, rhs) = match eq[..] {
            [] => (&tokens[..], None),
            [k] => (&tokens[..k], Some(tokens[k + 1..].iter().map(|s| s.to_string()).collect::<Vec<_>>())),
            _ => return Err(err(line, col, "more than one '='".into())),
        };
        if lhs.is_empty() {
            return Err(err(line, col, "missing keyword".into()));
        }
        if rhs.as_ref().is_some_and(Vec::is_empty) {
            return Err(err(line, col, "nothing after '='".into()));
        }
        block.decls.push(Decl {
            span,
            keyword: lhs[0].into(),
            args: lhs[1..].iter().map(|s| s.to_string()).collect(),
            rhs,
        });
    }
    if let Some(b) = current.take() {
        doc.blocks.push(b);
    }
    Ok(())
}

/// Which declarations a block kind accepts, and how many arguments.
fn arity(kind: BlockKind, keyword: &str) -> Option<(usize, Option<usize>, bool)> {
    // (min args, max args, needs rhs)
    use BlockKind::*;
    Some(match (kind, keyword) {
        (Category, "object") => (1, None, false),
        (Category, "arrow") => (3, Some(3), false),
        (Category, "compose") => (2, Some(2), true),
        (Monoidal, "quantale") | (Monoidal, "twist") => (1, Some(1), false),
        (Monoidal, "boolean") => (0, Some(0), false),
        (Monoidal, "group") => (2, Some(2), false),
        (Monoidal, "matrix") => (1, Some(1), true),
        (Monoidal, "category") | (Monoidal, "unit") => (1, Some(1), false),
        (Monoidal, "tensor-obj") => (2, Some(2), true),
        (Bicategory, "suspend") => (1, Some(1), false),
        (Bicategory, "chaotic") => (2, None, false),
        (Base, "bicategory") | (Base, "w") => (1, Some(1), false),
        (Base, "wcell") => (3, Some(3), false),
        (PathObject, "base") | (PathObject, "shape") => (1, Some(1), false),
        (PathObject | Bimodule, "over") => (2, Some(2), false),
        (PathObject | Bimodule, "chain-image") => (1, Some(1), true),
        (PathObject | Bimodule, "hom-image") => (2, Some(2), true),
        (PathObject | Bimodule, "relation-image") => (2, Some(2), true),
        (PathObject | Bimodule, "colax") => (2, Some(3), true),
        (PathObject | Bimodule, "colax-unit") => (1, Some(1), true),
        (Distributor, "left") | (Distributor, "right") => (1, Some(1), false),
        (Distributor, "value") => (2, Some(2), true),
        (Distributor, "act-left") | (Distributor, "act-right") => (3, Some(3), true),
        (Metric, "quantale") => (1, Some(1), false),
        (Metric, "points") | (Cocycle, "objects") => (1, None, false),
        (Metric, "d") | (Cocycle, "f") => (2, Some(2), true),
        (Cocycle, "group") => (2, Some(2), false),
        (Transport, "groupoid") | (Transport, "monoidal") => (1, Some(1), false),
        (Transport, "map") => (1, Some(1), true),
        (Bimodule, "bridge") | (Bimodule, "base") | (Bimodule, "left") | (Bimodule, "right") => (1, Some(1), false),
        (Bimodule, "thin") => (2, Some(2), false),
        _ => return None,
    })
}

/// Checks declaration shapes, name uniqueness and cross-block references.
fn resolve(doc: &SpecDocument) -> Result<(), DslError> {
    let mut names: BTreeMap<(BlockKind, &str), ()> = BTreeMap::new();
    for b in &doc.blocks {
        if names.insert((b.kind, &b.name), ()).is_some() {
            return Err(DslError::DuplicateName { file: b.span.file.clone(), line: b.span.line, name: b.name.clone() });
        }
    }
    let has = |kind: BlockKind, name: &str| {
        names.contains_key(&(kind, name)) || (kind == BlockKind::Category && is_builtin_category(name))
    };
    for b in &doc.blocks {
        for d in &b.decls {
            let bad = |msg: String| DslError::ParseError { file: d.span.file.clone(), line: d.span.line, col: 1, msg };
            let (lo, hi, needs_rhs) =
                arity(b.kind, &d.keyword).ok_or_else(|| bad(format!("unknown declaration {} in {} block", d.keyword, b.kind)))?;
            if d.args.len() < lo || hi.is_some_and(|h| d.args.len() > h) {
                return Err(bad(format!("wrong number of arguments to {}", d.keyword)));
            }
            if needs_rhs != d.rhs.is_some() {
                return Err(bad(format!("{} {} '='", d.keyword, if needs_rhs { "needs" } else { "takes no" })));
            }
            let unresolved =
                |name: &str| DslError::UnresolvedReference { file: d.span.file.clone(), line: d.span.line, name: name.into() };
            let want = |kind: BlockKind, name: &str| if has(kind, name) { Ok(()) } else { Err(unresolved(name)) };
            use BlockKind::*;
            match (b.kind, d.keyword.as_str()) {
                (Monoidal, "category") | (PathObject, "shape") | (Transport, "groupoid") => want(Category, &d.args[0])?,
                (Distributor, "left") | (Distributor, "right") => want(Category, &d.args[0])?,
                (Bimodule, "thin") => {
                    want(Category, &d.args[0])?;
                    want(Category, &d.args[1])?;
                }
                (Bicategory, "suspend") | (Bicategory, "chaotic") | (Transport, "monoidal") => want(Monoidal, &d.args[0])?,
                (Base, "bicategory") => want(Bicategory, &d.args[0])?,
                (PathObject, "base") | (Bimodule, "base") => want(Base, &d.args[0])?,
                (Bimodule, "bridge") => want(Distributor, &d.args[0])?,
                (Bimodule, "left") | (Bimodule, "right") => want(PathObject, &d.args[0])?,
                _ => {}
            }
        }
        if b.kind == BlockKind::Category {
            check_category_names(b)?;
        }
    }
    Ok(())
}

/// Arrow endpoints and composites must name things declared in the block.
fn check_category_names(b: &Block) -> Result<(), DslError> {
    let objects: BTreeSet<&str> = b.all("object").flat_map(|d| d.args.iter().map(String::as_str)).collect();
    let mut arrows: BTreeSet<String> = objects.iter().map(|o| format!("1_{o}")).collect();
    for d in b.all("arrow") {
        for o in &d.args[1..] {
            if !objects.contains(o.as_str()) {
                return Err(DslError::UnresolvedReference { file: d.span.file.clone(), line: d.span.line, name: o.clone() });
            }
        }
        arrows.insert(d.args[0].clone());
    }
    for d in b.all("compose") {
        for a in d.args.iter().chain(d.rhs.iter().flatten()) {
            if !arrows.contains(a) {
                return Err(DslError::UnresolvedReference { file: d.span.file.clone(), line: d.span.line, name: a.clone() });
            }
        }
    }
    Ok(())
}
