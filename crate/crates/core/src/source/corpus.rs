use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;
use walkdir::WalkDir;

use super::ast::*;
use super::parser::parse_file;

/// Simple names treated as primitive values (boxed wrappers and `String`).
pub const PRIMITIVE_NAMES: &[&str] = &[
    "boolean", "byte", "char", "short", "int", "long", "float", "double", "Integer", "Long", "Double", "Boolean",
    "Character", "Byte", "Short", "Float", "String",
];

/// Library types recognised as iterable containers when no corpus class of
/// the same name exists. The element type is the last type argument.
pub const CONTAINER_NAMES: &[&str] = &[
    "Iterable",
    "Collection",
    "List",
    "ArrayList",
    "LinkedList",
    "Vector",
    "Stack",
    "Set",
    "HashSet",
    "LinkedHashSet",
    "TreeSet",
    "SortedSet",
    "NavigableSet",
    "Queue",
    "Deque",
    "ArrayDeque",
    "PriorityQueue",
    "Map",
    "HashMap",
    "LinkedHashMap",
    "TreeMap",
    "SortedMap",
    "NavigableMap",
];

#[derive(Debug, Error)]
pub enum SourceError {
    #[error("no classes could be parsed ({} diagnostics)", diagnostics.len())]
    NoClasses { diagnostics: Vec<Diagnostic> },
    #[error("method {class}.{name}/{arity} not found")]
    MethodNotFound { class: String, name: String, arity: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagnosticKind {
    FileUnreadable,
    Syntax,
    DuplicateClass,
    AmbiguousType,
}

/// A non-fatal problem, printed as `path:line: message`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Diagnostic {
    pub path: String,
    pub line: u32,
    pub kind: DiagnosticKind,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.path, self.line, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SourceFile {
    pub path: String,
    pub text: String,
}

impl SourceFile {
    pub fn new(path: impl Into<String>, text: impl Into<String>) -> Self {
        SourceFile { path: path.into(), text: text.into() }
    }
}

/// Identifies a method as (declaring class, index into its `methods`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MethodId {
    pub class: String,
    pub index: usize,
}

/// Parsed and (after [`resolve_types`]) resolved class corpus.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SourceCorpus {
    pub files: Vec<SourceFile>,
    pub classes: BTreeMap<String, ClassDecl>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Read every `.java` file below the given roots, in sorted path order.
/// Files that are not valid UTF-8 or cannot be read become diagnostics.
pub fn read_source_tree(roots: &[PathBuf]) -> (Vec<SourceFile>, Vec<Diagnostic>) {
    let mut paths = BTreeSet::new();
    let mut diags = Vec::new();
    for root in roots {
        if root.is_file() {
            paths.insert(root.clone());
            continue;
        }
        for entry in WalkDir::new(root).follow_links(true) {
            match entry {
                Ok(e) if e.file_type().is_file() && e.path().extension().is_some_and(|x| x == "java") => {
                    paths.insert(e.into_path());
                }
                Ok(_) => {}
                Err(e) => diags.push(Diagnostic {
                    kind: DiagnosticKind::FileUnreadable,
                    path: e.path().map(|p| p.display().to_string()).unwrap_or_else(|| root.display().to_string()),
                    line: 0,
                    message: e.to_string(),
                }),
            }
        }
    }
    let mut files = Vec::new();
    for path in paths {
        match std::fs::read(&path).map(String::from_utf8) {
            Ok(Ok(text)) => files.push(SourceFile::new(path.display().to_string(), text)),
            Ok(Err(_)) => diags.push(unreadable(&path, "not valid UTF-8")),
            Err(e) => diags.push(unreadable(&path, &e.to_string())),
        }
    }
    (files, diags)
}

fn unreadable(path: &Path, reason: &str) -> Diagnostic {
    Diagnostic {
        kind: DiagnosticKind::FileUnreadable,
        path: path.display().to_string(),
        line: 0,
        message: format!("unreadable: {reason}"),
    }
}

/// Parse a set of in-memory files into a corpus. Files with syntax errors
/// contribute a diagnostic instead of classes; the call fails only when not a
/// single class parses.
pub fn parse_corpus(files: Vec<SourceFile>) -> Result<SourceCorpus, SourceError> {
    parse_corpus_with(files, Vec::new())
}

/// As [`parse_corpus`], seeding the corpus with diagnostics from loading.
pub fn parse_corpus_with(files: Vec<SourceFile>, mut diagnostics: Vec<Diagnostic>) -> Result<SourceCorpus, SourceError> {
    let parsed: Vec<_> = files.par_iter().map(|f| parse_file(&f.text)).collect();
    let mut classes = BTreeMap::new();
    for (index, (file, result)) in files.iter().zip(parsed).enumerate() {
        match result {
            Ok(decls) => {
                // reject the whole file if it collides with an earlier one
                if let Some(dup) = decls.iter().find(|c| classes.contains_key(&c.name)) {
                    diagnostics.push(Diagnostic {
                        kind: DiagnosticKind::DuplicateClass,
                        path: file.path.clone(),
                        line: dup.span.line,
                        message: format!("duplicate class `{}`; file skipped", dup.name),
                    });
                    continue;
                }
                for mut c in decls {
                    c.file = index;
                    classes.insert(c.name.clone(), c);
                }
            }
            Err(e) => diagnostics.push(Diagnostic {
                kind: DiagnosticKind::Syntax,
                path: file.path.clone(),
                line: e.line,
                message: e.expected,
            }),
        }
    }
    if classes.is_empty() {
        return Err(SourceError::NoClasses { diagnostics });
    }
    Ok(SourceCorpus { files, classes, diagnostics })
}

/// Load, parse and resolve all sources under `roots`.
pub fn load_corpus(roots: &[PathBuf]) -> Result<SourceCorpus, SourceError> {
    let (files, diags) = read_source_tree(roots);
    parse_corpus_with(files, diags).map(resolve_types)
}

/// Resolve every type reference in the corpus.
///
/// Names are matched by simple name: type parameters first, then classes
/// nested in the current scope (innermost first), then any corpus class with
/// that simple name. Ambiguity picks the lexicographically first candidate
/// and records a diagnostic. Known container names not defined in the corpus
/// are tagged as containers; anything else becomes an opaque unresolved leaf.
pub fn resolve_types(mut corpus: SourceCorpus) -> SourceCorpus {
    corpus.diagnostics.retain(|d| d.kind != DiagnosticKind::AmbiguousType);
    let index = NameIndex::new(&corpus);
    let mut diags = BTreeSet::new();
    let names: Vec<String> = corpus.classes.keys().cloned().collect();
    let mut resolved = BTreeMap::new();
    for name in names {
        let mut class = corpus.classes[&name].clone();
        let path = corpus.files.get(class.file).map(|f| f.path.clone()).unwrap_or_default();
        let mut r = Resolver { index: &index, scope: &name, path: &path, diags: &mut diags };
        if let Some(s) = class.superclass.as_mut() {
            r.resolve(s);
        }
        for i in class.interfaces.iter_mut() {
            r.resolve(i);
        }
        for f in class.fields.iter_mut() {
            r.resolve(&mut f.ty);
            if let Some(e) = f.init.as_mut() {
                r.expr(e);
            }
        }
        for m in class.methods.iter_mut() {
            for p in m.params.iter_mut() {
                r.resolve(&mut p.ty);
            }
            if let Some(t) = m.return_type.as_mut() {
                r.resolve(t);
            }
            if let Some(b) = m.body.as_mut() {
                r.block(b);
            }
        }
        resolved.insert(name, class);
    }
    corpus.classes = resolved;
    corpus.diagnostics.extend(diags);
    corpus
}

impl SourceCorpus {
    pub fn class(&self, name: &str) -> Option<&ClassDecl> {
        self.classes.get(name)
    }

    pub fn path_of(&self, class: &ClassDecl) -> &str {
        self.files.get(class.file).map(|f| f.path.as_str()).unwrap_or("<memory>")
    }

    pub fn method(&self, id: &MethodId) -> &MethodDecl {
        &self.classes[&id.class].methods[id.index]
    }

    /// Find a class by qualified name, falling back to the first class (in
    /// name order) whose qualified name ends with `.name`.
    pub fn find_class(&self, name: &str) -> Option<&ClassDecl> {
        if let Some(c) = self.classes.get(name) {
            return Some(c);
        }
        let suffix = format!(".{name}");
        let mut hits = self.classes.values().filter(|c| c.name.ends_with(&suffix));
        let first = hits.next()?;
        Some(first)
    }

    /// The class followed by its superclasses present in the corpus.
    pub fn superclass_chain(&self, name: &str) -> Vec<&ClassDecl> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        let mut cur = self.classes.get(name);
        while let Some(c) = cur {
            if !seen.insert(c.name.as_str()) {
                break;
            }
            out.push(c);
            cur = c.superclass.as_ref().and_then(|s| s.class_target()).and_then(|t| self.classes.get(t));
        }
        out
    }

    /// Instance or static field visible on `class` through inheritance.
    pub fn lookup_field(&self, class: &str, field: &str) -> Option<(&ClassDecl, &FieldDecl)> {
        self.superclass_chain(class).into_iter().find_map(|c| c.field(field).map(|f| (c, f)))
    }

    /// Method on `class` or the nearest superclass declaring it.
    pub fn locate_method(&self, class: &str, name: &str, arity: usize) -> Result<MethodId, SourceError> {
        for c in self.superclass_chain(class) {
            if let Some(index) = c.methods.iter().position(|m| m.name == name && m.arity() == arity && !m.is_constructor) {
                return Ok(MethodId { class: c.name.clone(), index });
            }
        }
        Err(SourceError::MethodNotFound { class: class.to_string(), name: name.to_string(), arity })
    }

    pub fn constructors(&self, class: &str) -> impl Iterator<Item = MethodId> + '_ {
        let c = self.classes.get(class);
        c.into_iter().flat_map(|c| {
            c.methods
                .iter()
                .enumerate()
                .filter(|(_, m)| m.is_constructor)
                .map(move |(index, _)| MethodId { class: c.name.clone(), index })
        })
    }

    /// Every method in the corpus with the given name and arity.
    pub fn methods_named(&self, name: &str, arity: usize) -> Vec<MethodId> {
        self.classes
            .values()
            .flat_map(|c| {
                c.methods
                    .iter()
                    .enumerate()
                    .filter(|(_, m)| m.name == name && m.arity() == arity && !m.is_constructor)
                    .map(|(index, _)| MethodId { class: c.name.clone(), index })
            })
            .collect()
    }

    /// Enclosing classes from `name` outward (inclusive).
    pub fn enclosing(&self, name: &str) -> Vec<&ClassDecl> {
        let mut out = Vec::new();
        let mut cur = self.classes.get(name);
        while let Some(c) = cur {
            out.push(c);
            cur = c.outer.as_ref().and_then(|o| self.classes.get(o));
        }
        out
    }
}

/// Free-function form of [`SourceCorpus::locate_method`].
pub fn locate_method<'a>(
    corpus: &'a SourceCorpus,
    class: &str,
    name: &str,
    arity: usize,
) -> Result<(MethodId, &'a MethodDecl), SourceError> {
    let id = corpus.locate_method(class, name, arity)?;
    let m = corpus.method(&id);
    Ok((id, m))
}

struct NameIndex {
    qualified: BTreeSet<String>,
    by_simple: BTreeMap<String, Vec<String>>,
    type_params: BTreeMap<String, Vec<String>>,
    outer: BTreeMap<String, Option<String>>,
    static_nested: BTreeSet<String>,
}

impl NameIndex {
    fn new(corpus: &SourceCorpus) -> Self {
        let mut by_simple: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for c in corpus.classes.values() {
            by_simple.entry(c.simple_name.clone()).or_default().push(c.name.clone());
        }
        NameIndex {
            qualified: corpus.classes.keys().cloned().collect(),
            by_simple,
            type_params: corpus.classes.values().map(|c| (c.name.clone(), c.type_params.clone())).collect(),
            outer: corpus.classes.values().map(|c| (c.name.clone(), c.outer.clone())).collect(),
            static_nested: corpus.classes.values().filter(|c| c.is_static_nested).map(|c| c.name.clone()).collect(),
        }
    }
}

struct Resolver<'a> {
    index: &'a NameIndex,
    scope: &'a str,
    path: &'a str,
    diags: &'a mut BTreeSet<Diagnostic>,
}

impl Resolver<'_> {
    fn resolve(&mut self, ty: &mut TypeRef) {
        for a in ty.args.iter_mut() {
            self.resolve(a);
        }
        if let Some(e) = ty.element.as_mut() {
            self.resolve(e);
            ty.kind = TypeKind::Array;
            return;
        }
        ty.target = None;
        ty.container = false;
        let name = ty.name.clone();
        if PRIMITIVE_NAMES.contains(&name.as_str()) || name == "void" {
            ty.kind = if name == "void" { TypeKind::Named } else { TypeKind::Primitive };
            return;
        }
        if !name.contains('.') {
            if let Some(owner) = self.type_param_owner(&name) {
                ty.kind = TypeKind::TypeParameter;
                ty.target = Some(owner);
                return;
            }
        }
        if let Some(class) = self.class_named(&name) {
            ty.kind = TypeKind::Class;
            ty.target = Some(class);
            return;
        }
        let simple = name.rsplit('.').next().unwrap_or(&name);
        ty.kind = TypeKind::Unresolved;
        ty.container = CONTAINER_NAMES.contains(&simple);
    }

    fn type_param_owner(&self, name: &str) -> Option<String> {
        let mut cur = Some(self.scope.to_string());
        while let Some(c) = cur {
            if self.index.type_params.get(&c).is_some_and(|ps| ps.iter().any(|p| p == name)) {
                return Some(c);
            }
            if self.index.static_nested.contains(&c) {
                return None;
            }
            cur = self.index.outer.get(&c).cloned().flatten();
        }
        None
    }

    fn class_named(&mut self, name: &str) -> Option<String> {
        if self.index.qualified.contains(name) {
            // a qualified or top-level name; an inner class of the same simple
            // name still shadows it below
            if name.contains('.') {
                return Some(name.to_string());
            }
        }
        // scope walk, innermost first
        let mut cur = Some(self.scope.to_string());
        while let Some(c) = cur {
            let nested = format!("{c}.{name}");
            if self.index.qualified.contains(&nested) {
                return Some(nested);
            }
            let simple = c.rsplit('.').next().unwrap_or(&c);
            if simple == name {
                return Some(c);
            }
            cur = self.index.outer.get(&c).cloned().flatten();
        }
        if self.index.qualified.contains(name) {
            return Some(name.to_string());
        }
        let simple = name.rsplit('.').next().unwrap_or(name);
        let suffix = format!(".{name}");
        let candidates: Vec<&String> = self
            .index
            .by_simple
            .get(simple)
            .map(|v| v.iter().filter(|q| !name.contains('.') || q.ends_with(&suffix)).collect())
            .unwrap_or_default();
        match candidates.len() {
            0 => None,
            1 => Some(candidates[0].clone()),
            _ => {
                let mut sorted = candidates.clone();
                sorted.sort();
                self.diags.insert(Diagnostic {
                    kind: DiagnosticKind::AmbiguousType,
                    path: self.path.to_string(),
                    line: 0,
                    message: format!(
                        "ambiguous type `{name}` in {}: candidates {}; using `{}`",
                        self.scope,
                        sorted.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", "),
                        sorted[0]
                    ),
                });
                Some(sorted[0].clone())
            }
        }
    }

    fn block(&mut self, b: &mut Block) {
        for s in b.stmts.iter_mut() {
            self.stmt(s);
        }
    }

    fn stmt(&mut self, s: &mut Stmt) {
        match &mut s.kind {
            StmtKind::Block(b) => self.block(b),
            StmtKind::If { cond, then, otherwise } => {
                self.expr(cond);
                self.stmt(then);
                if let Some(o) = otherwise {
                    self.stmt(o);
                }
            }
            StmtKind::For { init, cond, update, body } => {
                for i in init {
                    self.stmt(i);
                }
                if let Some(c) = cond {
                    self.expr(c);
                }
                for u in update {
                    self.expr(u);
                }
                self.stmt(body);
            }
            StmtKind::ForEach { var, iterable, body } => {
                self.resolve(&mut var.ty);
                self.expr(iterable);
                self.stmt(body);
            }
            StmtKind::While { cond, body } | StmtKind::DoWhile { body, cond } => {
                self.expr(cond);
                self.stmt(body);
            }
            StmtKind::Return(e) => {
                if let Some(e) = e {
                    self.expr(e);
                }
            }
            StmtKind::Expr(e) | StmtKind::Throw(e) => self.expr(e),
            StmtKind::Local(vars) => {
                for v in vars {
                    self.resolve(&mut v.ty);
                    if let Some(e) = v.init.as_mut() {
                        self.expr(e);
                    }
                }
            }
            StmtKind::Break | StmtKind::Continue | StmtKind::Empty => {}
        }
    }

    fn expr(&mut self, e: &mut Expr) {
        match &mut e.kind {
            ExprKind::New { ty, .. } | ExprKind::Cast { ty, .. } | ExprKind::InstanceOf { ty, .. } | ExprKind::ClassLit(ty) => {
                self.resolve(ty)
            }
            ExprKind::NewArray { elem, .. } => self.resolve(elem),
            _ => {}
        }
        match &mut e.kind {
            ExprKind::Literal(_) | ExprKind::Name(_) | ExprKind::This | ExprKind::Super | ExprKind::ClassLit(_) => {}
            ExprKind::FieldAccess { receiver, .. } => self.expr(receiver),
            ExprKind::MethodCall { receiver, args, .. } => {
                if let Some(r) = receiver {
                    self.expr(r);
                }
                args.iter_mut().for_each(|a| self.expr(a));
            }
            ExprKind::New { args, .. } => args.iter_mut().for_each(|a| self.expr(a)),
            ExprKind::NewArray { dims, init, .. } => {
                dims.iter_mut().for_each(|a| self.expr(a));
                init.iter_mut().flatten().for_each(|a| self.expr(a));
            }
            ExprKind::ArrayInit(items) => items.iter_mut().for_each(|a| self.expr(a)),
            ExprKind::ArrayIndex { array, index } => {
                self.expr(array);
                self.expr(index);
            }
            ExprKind::Binary { lhs, rhs, .. } => {
                self.expr(lhs);
                self.expr(rhs);
            }
            ExprKind::Unary { operand, .. } => self.expr(operand),
            ExprKind::Assign { target, value, .. } => {
                self.expr(target);
                self.expr(value);
            }
            ExprKind::Conditional { cond, then, otherwise } => {
                self.expr(cond);
                self.expr(then);
                self.expr(otherwise);
            }
            ExprKind::Cast { expr, .. } | ExprKind::InstanceOf { expr, .. } => self.expr(expr),
        }
    }
}
