//! Syntax tree for the analyzed Java subset.

use serde::Serialize;

/// Byte range in the originating file, plus the 1-based line of `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: u32,
}

impl Span {
    pub fn to(self, other: Span) -> Span {
        Span { start: self.start, end: other.end.max(self.end), line: self.line }
    }
}

/// Classification of a type reference after resolution.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TypeKind {
    /// Not yet resolved (fresh from the parser).
    Named,
    Primitive,
    Class,
    TypeParameter,
    Array,
    Unresolved,
}

/// A type as written in source, annotated with its resolution.
///
/// `target` is the qualified class name for `Class`, and the owning class for
/// `TypeParameter`. `element` holds the component type of arrays. `container`
/// marks known library collection types (their element is the last type
/// argument).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TypeRef {
    pub name: String,
    pub args: Vec<TypeRef>,
    pub kind: TypeKind,
    pub target: Option<String>,
    pub element: Option<Box<TypeRef>>,
    pub container: bool,
}

impl TypeRef {
    pub fn named(name: impl Into<String>, args: Vec<TypeRef>) -> Self {
        TypeRef {
            name: name.into(),
            args,
            kind: TypeKind::Named,
            target: None,
            element: None,
            container: false,
        }
    }

    pub fn array_of(elem: TypeRef) -> Self {
        TypeRef {
            name: format!("{}[]", elem.name),
            args: Vec::new(),
            kind: TypeKind::Array,
            target: None,
            element: Some(Box::new(elem)),
            container: false,
        }
    }

    pub fn is_void(&self) -> bool {
        self.kind == TypeKind::Named && self.name == "void"
    }

    /// Qualified class this reference denotes, if it resolved to one.
    pub fn class_target(&self) -> Option<&str> {
        match self.kind {
            TypeKind::Class => self.target.as_deref(),
            _ => None,
        }
    }

    /// The type reached by iterating this one: array component or container
    /// element (last type argument). `None` for non-iterable types.
    pub fn iterated_element(&self) -> Option<&TypeRef> {
        match self.kind {
            TypeKind::Array => self.element.as_deref(),
            _ if self.container => self.args.last(),
            _ => None,
        }
    }

    pub fn is_iterable(&self) -> bool {
        self.kind == TypeKind::Array || self.container
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Annotation {
    pub name: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldDecl {
    pub name: String,
    pub ty: TypeRef,
    pub is_static: bool,
    pub init: Option<Expr>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Param {
    pub name: String,
    pub ty: TypeRef,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodDecl {
    pub name: String,
    pub params: Vec<Param>,
    /// `None` for constructors.
    pub return_type: Option<TypeRef>,
    /// `None` for abstract and interface methods.
    pub body: Option<Block>,
    pub is_static: bool,
    pub is_constructor: bool,
    pub annotations: Vec<Annotation>,
    pub span: Span,
}

impl MethodDecl {
    pub fn arity(&self) -> usize {
        self.params.len()
    }

    pub fn has_annotation(&self, name: &str) -> bool {
        self.annotations.iter().any(|a| a.name == name || a.name.ends_with(&format!(".{name}")))
    }

    pub fn returns_boolean(&self) -> bool {
        matches!(&self.return_type, Some(t) if t.name == "boolean" || t.name == "Boolean")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassDecl {
    /// Qualified within the corpus: `Outer.Inner`.
    pub name: String,
    pub simple_name: String,
    pub type_params: Vec<String>,
    pub superclass: Option<TypeRef>,
    pub interfaces: Vec<TypeRef>,
    pub is_interface: bool,
    pub is_static_nested: bool,
    pub fields: Vec<FieldDecl>,
    pub methods: Vec<MethodDecl>,
    /// Qualified names of directly nested classes.
    pub inner: Vec<String>,
    pub outer: Option<String>,
    /// Index into `SourceCorpus::files`.
    pub file: usize,
    pub span: Span,
}

impl ClassDecl {
    pub fn is_static_only(&self) -> bool {
        self.fields.iter().all(|f| f.is_static) && self.methods.iter().all(|m| m.is_static)
    }

    pub fn field(&self, name: &str) -> Option<&FieldDecl> {
        self.fields.iter().find(|f| f.name == name)
    }

    pub fn instance_fields(&self) -> impl Iterator<Item = &FieldDecl> {
        self.fields.iter().filter(|f| !f.is_static)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Block {
    pub stmts: Vec<Stmt>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalVar {
    pub name: String,
    pub ty: TypeRef,
    pub init: Option<Expr>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[allow(clippy::large_enum_variant)]
pub enum StmtKind {
    Block(Block),
    If { cond: Expr, then: Box<Stmt>, otherwise: Option<Box<Stmt>> },
    For { init: Vec<Stmt>, cond: Option<Expr>, update: Vec<Expr>, body: Box<Stmt> },
    ForEach { var: LocalVar, iterable: Expr, body: Box<Stmt> },
    While { cond: Expr, body: Box<Stmt> },
    DoWhile { body: Box<Stmt>, cond: Expr },
    Return(Option<Expr>),
    Expr(Expr),
    Local(Vec<LocalVar>),
    Throw(Expr),
    Break,
    Continue,
    Empty,
}

impl StmtKind {
    pub fn is_loop(&self) -> bool {
        matches!(
            self,
            StmtKind::For { .. } | StmtKind::ForEach { .. } | StmtKind::While { .. } | StmtKind::DoWhile { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Literal {
    Int(String),
    Float(String),
    Char(String),
    Str(String),
    Bool(bool),
    Null,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ExprKind {
    Literal(Literal),
    /// Bare identifier: a local, an implicit `this` field, or a class name.
    Name(String),
    This,
    Super,
    FieldAccess { receiver: Box<Expr>, field: String },
    MethodCall { receiver: Option<Box<Expr>>, name: String, args: Vec<Expr> },
    New { ty: TypeRef, args: Vec<Expr> },
    NewArray { elem: TypeRef, dims: Vec<Expr>, init: Option<Vec<Expr>> },
    ArrayInit(Vec<Expr>),
    ArrayIndex { array: Box<Expr>, index: Box<Expr> },
    Binary { op: String, lhs: Box<Expr>, rhs: Box<Expr> },
    Unary { op: String, operand: Box<Expr>, postfix: bool },
    Assign { op: String, target: Box<Expr>, value: Box<Expr> },
    Conditional { cond: Box<Expr>, then: Box<Expr>, otherwise: Box<Expr> },
    Cast { ty: TypeRef, expr: Box<Expr> },
    InstanceOf { expr: Box<Expr>, ty: TypeRef },
    ClassLit(TypeRef),
}

impl Expr {
    /// Direct subexpressions in evaluation order.
    pub fn children(&self) -> Vec<&Expr> {
        match &self.kind {
            ExprKind::Literal(_) | ExprKind::Name(_) | ExprKind::This | ExprKind::Super | ExprKind::ClassLit(_) => {
                Vec::new()
            }
            ExprKind::FieldAccess { receiver, .. } => vec![receiver],
            ExprKind::MethodCall { receiver, args, .. } => {
                receiver.iter().map(|r| r.as_ref()).chain(args.iter()).collect()
            }
            ExprKind::New { args, .. } => args.iter().collect(),
            ExprKind::NewArray { dims, init, .. } => {
                dims.iter().chain(init.iter().flatten()).collect()
            }
            ExprKind::ArrayInit(items) => items.iter().collect(),
            ExprKind::ArrayIndex { array, index } => vec![array, index],
            ExprKind::Binary { lhs, rhs, .. } => vec![lhs, rhs],
            ExprKind::Unary { operand, .. } => vec![operand],
            ExprKind::Assign { target, value, .. } => vec![target, value],
            ExprKind::Conditional { cond, then, otherwise } => vec![cond, then, otherwise],
            ExprKind::Cast { expr, .. } => vec![expr],
            ExprKind::InstanceOf { expr, .. } => vec![expr],
        }
    }
}

impl Stmt {
    /// Expressions held directly by this statement (not by nested
    /// statements), in source order.
    pub fn exprs(&self) -> Vec<&Expr> {
        match &self.kind {
            StmtKind::If { cond, .. } | StmtKind::While { cond, .. } | StmtKind::DoWhile { cond, .. } => vec![cond],
            StmtKind::For { cond, update, .. } => cond.iter().chain(update.iter()).collect(),
            StmtKind::ForEach { iterable, .. } => vec![iterable],
            StmtKind::Return(e) => e.iter().collect(),
            StmtKind::Expr(e) | StmtKind::Throw(e) => vec![e],
            StmtKind::Local(vars) => vars.iter().filter_map(|v| v.init.as_ref()).collect(),
            StmtKind::Block(_) | StmtKind::Break | StmtKind::Continue | StmtKind::Empty => Vec::new(),
        }
    }

    /// Directly nested statements.
    pub fn substmts(&self) -> Vec<&Stmt> {
        match &self.kind {
            StmtKind::Block(b) => b.stmts.iter().collect(),
            StmtKind::If { then, otherwise, .. } => std::iter::once(then.as_ref()).chain(otherwise.as_deref()).collect(),
            StmtKind::For { init, body, .. } => init.iter().chain(std::iter::once(body.as_ref())).collect(),
            StmtKind::ForEach { body, .. } | StmtKind::While { body, .. } | StmtKind::DoWhile { body, .. } => vec![body],
            _ => Vec::new(),
        }
    }
}

/// Pre-order visit of every expression under `block`, nested ones included.
pub fn visit_exprs<'a>(block: &'a Block, f: &mut impl FnMut(&'a Expr)) {
    fn expr<'a>(e: &'a Expr, f: &mut impl FnMut(&'a Expr)) {
        f(e);
        for c in e.children() {
            expr(c, f);
        }
    }
    fn stmt<'a>(s: &'a Stmt, f: &mut impl FnMut(&'a Expr)) {
        for e in s.exprs() {
            expr(e, f);
        }
        for s in s.substmts() {
            stmt(s, f);
        }
    }
    for s in &block.stmts {
        stmt(s, f);
    }
}
