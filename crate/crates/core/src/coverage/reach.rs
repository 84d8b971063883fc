//! Code reachable from an oracle, and the field accesses it performs.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::oracles::{OracleKind, OracleSpec};
use crate::graph::nodes_on_cycles;
use crate::source::{
    Block, Expr, ExprKind, Literal, MethodDecl, MethodId, SourceCorpus, Span, Stmt, StmtKind, TypeKind,
    TypeRef,
};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReachOptions {
    /// Treat every method on a call-graph cycle as iterating.
    pub recursion_as_iteration: bool,
    /// Only lexical loop bodies count; calls from a loop do not carry the
    /// loop context into the callee.
    pub strict_loop_bodies: bool,
}

/// A field read or written by reachable code.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FieldAccess {
    /// Declaring class of the field; `None` when the receiver's static type
    /// could not be determined.
    pub declaring: Option<String>,
    pub field: String,
    pub in_loop: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ReachableCode {
    /// Methods reached, with the loop context each was entered in.
    pub methods: BTreeSet<(MethodId, bool)>,
    pub accesses: BTreeSet<FieldAccess>,
    pub diagnostics: Vec<String>,
}

/// Simple-name index used to resolve class names in expressions.
pub struct ClassNames {
    by_simple: BTreeMap<String, Vec<String>>,
}

impl ClassNames {
    pub fn new(corpus: &SourceCorpus) -> Self {
        let mut by_simple: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for c in corpus.classes.values() {
            by_simple.entry(c.simple_name.clone()).or_default().push(c.name.clone());
        }
        ClassNames { by_simple }
    }

    fn resolve(&self, corpus: &SourceCorpus, scope: &str, name: &str) -> Option<String> {
        for c in corpus.enclosing(scope) {
            let nested = format!("{}.{name}", c.name);
            if corpus.classes.contains_key(&nested) {
                return Some(nested);
            }
            if c.simple_name == name {
                return Some(c.name.clone());
            }
        }
        if corpus.classes.contains_key(name) {
            return Some(name.to_string());
        }
        self.by_simple.get(name).and_then(|v| v.first()).cloned()
    }
}

/// Static type of an expression: a value of some type, or a class name used
/// as a qualifier.
#[derive(Debug, Clone)]
enum Ty {
    Value(TypeRef),
    Static(String),
}

fn prim(name: &str) -> TypeRef {
    TypeRef { kind: TypeKind::Primitive, ..TypeRef::named(name, Vec::new()) }
}

fn class_ref(name: &str) -> TypeRef {
    TypeRef { kind: TypeKind::Class, target: Some(name.to_string()), ..TypeRef::named(name, Vec::new()) }
}

fn class_of(ty: &Ty) -> Option<&str> {
    match ty {
        Ty::Value(t) => t.class_target(),
        Ty::Static(c) => Some(c),
    }
}

enum Callees {
    Resolved(Vec<MethodId>),
    /// Target known to lie outside the corpus.
    External,
}

struct Walker<'a> {
    corpus: &'a SourceCorpus,
    names: &'a ClassNames,
    method: MethodId,
    class: String,
    scopes: Vec<BTreeMap<String, TypeRef>>,
    /// Assertion call spans; `Some` while walking a test body outside its
    /// assertions.
    seeds: Option<&'a BTreeSet<Span>>,
    accesses: &'a mut BTreeSet<FieldAccess>,
    calls: Vec<(MethodId, bool)>,
    diags: &'a mut Vec<String>,
}

impl<'a> Walker<'a> {
    fn local(&self, name: &str) -> Option<&TypeRef> {
        self.scopes.iter().rev().find_map(|s| s.get(name))
    }

    fn declare(&mut self, name: &str, ty: TypeRef) {
        if let Some(s) = self.scopes.last_mut() {
            s.insert(name.to_string(), ty);
        }
    }

    /// Field visible by simple name from the current class: its own and
    /// inherited fields first, then those of enclosing classes.
    fn implicit_field(&self, name: &str) -> Option<(String, TypeRef)> {
        self.corpus
            .enclosing(&self.class)
            .into_iter()
            .find_map(|c| self.corpus.lookup_field(&c.name, name).map(|(d, f)| (d.name.clone(), f.ty.clone())))
    }

    fn field_of(&self, class: &str, field: &str) -> Option<(String, TypeRef)> {
        self.corpus.lookup_field(class, field).map(|(d, f)| (d.name.clone(), f.ty.clone()))
    }

    /// Field of a receiver of type `ty`. `this` (also `Outer.this`, which
    /// parses the same) searches the enclosing classes too.
    fn member_field(&self, receiver: &Expr, ty: &Ty, field: &str) -> Option<(String, TypeRef)> {
        if matches!(receiver.kind, ExprKind::This) {
            return self.implicit_field(field);
        }
        self.field_of(class_of(ty)?, field)
    }

    fn superclass(&self) -> Option<String> {
        self.corpus.class(&self.class)?.superclass.as_ref()?.class_target().map(str::to_string)
    }

    fn type_of(&self, e: &Expr) -> Option<Ty> {
        Some(match &e.kind {
            ExprKind::Literal(l) => Ty::Value(match l {
                Literal::Int(_) => prim("int"),
                Literal::Float(_) => prim("double"),
                Literal::Char(_) => prim("char"),
                Literal::Str(_) => prim("String"),
                Literal::Bool(_) => prim("boolean"),
                Literal::Null => return None,
            }),
            ExprKind::Name(n) => {
                if let Some(t) = self.local(n) {
                    Ty::Value(t.clone())
                } else if let Some((_, t)) = self.implicit_field(n) {
                    Ty::Value(t)
                } else {
                    Ty::Static(self.names.resolve(self.corpus, &self.class, n)?)
                }
            }
            ExprKind::This => Ty::Value(class_ref(&self.class)),
            ExprKind::Super => Ty::Value(class_ref(&self.superclass()?)),
            ExprKind::FieldAccess { receiver, field } => {
                let recv = self.type_of(receiver);
                match &recv {
                    Some(Ty::Value(t)) if t.kind == TypeKind::Array && field == "length" => Ty::Value(prim("int")),
                    Some(Ty::Static(c)) => {
                        let nested = format!("{c}.{field}");
                        if self.corpus.classes.contains_key(&nested) {
                            Ty::Static(nested)
                        } else {
                            Ty::Value(self.field_of(c, field)?.1)
                        }
                    }
                    Some(r) => Ty::Value(self.member_field(receiver, r, field)?.1),
                    None => return None,
                }
            }
            ExprKind::MethodCall { .. } => match self.callees(e) {
                Callees::Resolved(ids) => {
                    let mut rets = ids.iter().filter_map(|id| self.corpus.method(id).return_type.clone());
                    let first = rets.next()?;
                    if rets.any(|r| r != first) {
                        return None;
                    }
                    Ty::Value(first)
                }
                Callees::External => return None,
            },
            ExprKind::New { ty, .. } => Ty::Value(ty.clone()),
            ExprKind::NewArray { elem, dims, .. } => {
                let mut t = elem.clone();
                for _ in 0..dims.len().max(1) {
                    t = TypeRef::array_of(t);
                }
                Ty::Value(t)
            }
            ExprKind::ArrayInit(_) => return None,
            ExprKind::ArrayIndex { array, .. } => match self.type_of(array)? {
                Ty::Value(t) if t.kind == TypeKind::Array => Ty::Value(*t.element?),
                _ => return None,
            },
            ExprKind::Binary { op, lhs, .. } => match op.as_str() {
                "==" | "!=" | "<" | ">" | "<=" | ">=" | "&&" | "||" | "instanceof" => Ty::Value(prim("boolean")),
                _ => self.type_of(lhs)?,
            },
            ExprKind::Unary { op, operand, .. } => {
                if op == "!" {
                    Ty::Value(prim("boolean"))
                } else {
                    self.type_of(operand)?
                }
            }
            ExprKind::Assign { target, .. } => self.type_of(target)?,
            ExprKind::Conditional { then, otherwise, .. } => self.type_of(then).or_else(|| self.type_of(otherwise))?,
            ExprKind::Cast { ty, .. } => Ty::Value(ty.clone()),
            ExprKind::InstanceOf { .. } => Ty::Value(prim("boolean")),
            ExprKind::ClassLit(_) => Ty::Value(TypeRef { kind: TypeKind::Unresolved, ..TypeRef::named("Class", Vec::new()) }),
        })
    }

    fn with_bodies(&self, ids: Vec<MethodId>) -> Vec<MethodId> {
        ids.into_iter().filter(|id| self.corpus.method(id).body.is_some()).collect()
    }

    /// Methods a call may dispatch to. Unknown receivers fall back to every
    /// corpus method with the same name and arity; so do calls landing on a
    /// method without a body.
    fn callees(&self, call: &Expr) -> Callees {
        let ExprKind::MethodCall { receiver, name, args } = &call.kind else {
            return Callees::External;
        };
        let arity = args.len();
        let fallback = || self.with_bodies(self.corpus.methods_named(name, arity));
        let located = |class: &str| -> Option<Vec<MethodId>> {
            let id = self.corpus.locate_method(class, name, arity).ok()?;
            if self.corpus.method(&id).body.is_some() {
                Some(vec![id])
            } else {
                Some(fallback())
            }
        };
        let ctor = |class: Option<String>| match class {
            Some(c) => Callees::Resolved(
                self.corpus.constructors(&c).filter(|id| self.corpus.method(id).arity() == arity).collect(),
            ),
            None => Callees::External,
        };
        match receiver {
            None if name == "this" => ctor(Some(self.class.clone())),
            None if name == "super" => ctor(self.superclass()),
            None => {
                for c in self.corpus.enclosing(&self.class) {
                    if let Some(ids) = located(&c.name) {
                        return Callees::Resolved(ids);
                    }
                }
                Callees::External
            }
            Some(r) => match self.type_of(r) {
                None => Callees::Resolved(fallback()),
                Some(t) => match class_of(&t) {
                    Some(c) => located(c).map_or(Callees::External, Callees::Resolved),
                    None => Callees::External,
                },
            },
        }
    }

    fn record(&mut self, declaring: Option<String>, field: &str, in_loop: bool) {
        self.accesses.insert(FieldAccess { declaring, field: field.to_string(), in_loop });
    }

    fn expr(&mut self, e: &Expr, in_loop: bool, active: bool) {
        if !active {
            let seeded = matches!(e.kind, ExprKind::MethodCall { .. }) && self.seeds.is_some_and(|s| s.contains(&e.span));
            if let (true, ExprKind::MethodCall { args, .. }) = (seeded, &e.kind) {
                for a in args {
                    self.expr(a, in_loop, true);
                }
            } else {
                for c in e.children() {
                    self.expr(c, in_loop, false);
                }
            }
            return;
        }
        match &e.kind {
            ExprKind::Name(n) => {
                if self.local(n).is_none() {
                    if let Some((d, _)) = self.implicit_field(n) {
                        self.record(Some(d), n, in_loop);
                    }
                }
            }
            ExprKind::FieldAccess { receiver, field } => {
                match self.type_of(receiver) {
                    Some(Ty::Value(t)) if t.kind == TypeKind::Array => {}
                    Some(t) => {
                        if let Some((d, _)) = self.member_field(receiver, &t, field) {
                            self.record(Some(d), field, in_loop);
                        }
                    }
                    None => self.record(None, field, in_loop),
                }
                self.expr(receiver, in_loop, true);
            }
            ExprKind::MethodCall { receiver, name, args } => {
                match self.callees(e) {
                    Callees::Resolved(ids) => {
                        if ids.is_empty() && receiver.is_some() && self.type_of(receiver.as_ref().unwrap()).is_none() {
                            self.diags.push(format!("unresolved call `{name}/{}` in {}", args.len(), self.class));
                        }
                        self.calls.extend(ids.into_iter().map(|id| (id, in_loop)));
                    }
                    Callees::External => {}
                }
                if let Some(r) = receiver {
                    self.expr(r, in_loop, true);
                }
                for a in args {
                    self.expr(a, in_loop, true);
                }
            }
            ExprKind::New { ty, args } => {
                if let Some(c) = ty.class_target() {
                    let ids: Vec<MethodId> =
                        self.corpus.constructors(c).filter(|id| self.corpus.method(id).arity() == args.len()).collect();
                    self.calls.extend(ids.into_iter().map(|id| (id, in_loop)));
                }
                for a in args {
                    self.expr(a, in_loop, true);
                }
            }
            _ => {
                for c in e.children() {
                    self.expr(c, in_loop, true);
                }
            }
        }
    }

    fn local_type(&self, declared: &TypeRef, init: Option<&Expr>) -> TypeRef {
        if declared.name == "var" {
            if let Some(Ty::Value(t)) = init.and_then(|e| self.type_of(e)) {
                return t;
            }
        }
        declared.clone()
    }

    fn block(&mut self, b: &Block, in_loop: bool, active: bool) {
        self.scopes.push(BTreeMap::new());
        for s in &b.stmts {
            self.stmt(s, in_loop, active);
        }
        self.scopes.pop();
    }

    fn scoped(&mut self, s: &Stmt, in_loop: bool, active: bool) {
        self.scopes.push(BTreeMap::new());
        self.stmt(s, in_loop, active);
        self.scopes.pop();
    }

    fn stmt(&mut self, s: &Stmt, in_loop: bool, active: bool) {
        match &s.kind {
            StmtKind::Block(b) => self.block(b, in_loop, active),
            StmtKind::If { cond, then, otherwise } => {
                self.expr(cond, in_loop, active);
                self.scoped(then, in_loop, active);
                if let Some(o) = otherwise {
                    self.scoped(o, in_loop, active);
                }
            }
            StmtKind::For { init, cond, update, body } => {
                self.scopes.push(BTreeMap::new());
                for i in init {
                    self.stmt(i, in_loop, active);
                }
                if let Some(c) = cond {
                    self.expr(c, true, active);
                }
                for u in update {
                    self.expr(u, true, active);
                }
                self.scoped(body, true, active);
                self.scopes.pop();
            }
            StmtKind::ForEach { var, iterable, body } => {
                self.expr(iterable, true, active);
                let ty = if var.ty.name == "var" {
                    match self.type_of(iterable) {
                        Some(Ty::Value(t)) => t.iterated_element().cloned().unwrap_or_else(|| var.ty.clone()),
                        _ => var.ty.clone(),
                    }
                } else {
                    var.ty.clone()
                };
                self.scopes.push(BTreeMap::new());
                self.declare(&var.name, ty);
                self.stmt(body, true, active);
                self.scopes.pop();
            }
            StmtKind::While { cond, body } | StmtKind::DoWhile { body, cond } => {
                self.expr(cond, true, active);
                self.scoped(body, true, active);
            }
            StmtKind::Return(e) => {
                if let Some(e) = e {
                    self.expr(e, in_loop, active);
                }
            }
            StmtKind::Expr(e) | StmtKind::Throw(e) => self.expr(e, in_loop, active),
            StmtKind::Local(vars) => {
                for v in vars {
                    if let Some(init) = &v.init {
                        self.expr(init, in_loop, active);
                    }
                    let ty = self.local_type(&v.ty, v.init.as_ref());
                    self.declare(&v.name, ty);
                }
            }
            StmtKind::Break | StmtKind::Continue | StmtKind::Empty => {}
        }
    }
}

fn params_scope(m: &MethodDecl) -> BTreeMap<String, TypeRef> {
    m.params.iter().map(|p| (p.name.clone(), p.ty.clone())).collect()
}

struct Closure {
    reach: ReachableCode,
    edges: Vec<(MethodId, MethodId)>,
}

fn closure(
    corpus: &SourceCorpus,
    names: &ClassNames,
    oracle: &OracleSpec,
    opts: ReachOptions,
    recursive: &BTreeSet<MethodId>,
) -> Closure {
    let mut reach = ReachableCode::default();
    let mut edges = Vec::new();
    let mut queue: VecDeque<(MethodId, bool)> = VecDeque::new();
    let seeds: BTreeSet<Span> = oracle.assertions.iter().copied().collect();

    let entry_loop = recursive.contains(&oracle.method);
    queue.push_back((oracle.method.clone(), entry_loop));
    let mut first = true;

    while let Some((id, in_loop)) = queue.pop_front() {
        if reach.methods.contains(&(id.clone(), true)) || !reach.methods.insert((id.clone(), in_loop)) {
            continue;
        }
        if in_loop {
            reach.methods.remove(&(id.clone(), false));
        }
        let m = corpus.method(&id);
        let Some(body) = &m.body else { continue };
        let test_entry = first && oracle.kind == OracleKind::TestAssertions;
        first = false;
        let mut w = Walker {
            corpus,
            names,
            method: id.clone(),
            class: id.class.clone(),
            scopes: vec![params_scope(m)],
            seeds: test_entry.then_some(&seeds),
            accesses: &mut reach.accesses,
            calls: Vec::new(),
            diags: &mut reach.diagnostics,
        };
        w.block(body, in_loop, !test_entry);
        let calls = std::mem::take(&mut w.calls);
        let caller = w.method.clone();
        for (callee, at_loop) in calls {
            edges.push((caller.clone(), callee.clone()));
            // `at_loop` already includes the caller's own context
            let ctx = (!opts.strict_loop_bodies && at_loop) || recursive.contains(&callee);
            queue.push_back((callee, ctx));
        }
    }
    Closure { reach, edges }
}

/// Statements reachable from the oracle through intra-corpus calls, with
/// the field accesses they perform.
pub fn reachable_code(corpus: &SourceCorpus, oracle: &OracleSpec, opts: ReachOptions) -> ReachableCode {
    reachable_code_with(corpus, &ClassNames::new(corpus), oracle, opts)
}

pub fn reachable_code_with(corpus: &SourceCorpus, names: &ClassNames, oracle: &OracleSpec, opts: ReachOptions) -> ReachableCode {
    let first = closure(corpus, names, oracle, opts, &BTreeSet::new());
    if !opts.recursion_as_iteration {
        return first.reach;
    }
    let nodes: Vec<String> = first.reach.methods.iter().map(|(id, _)| method_key(id)).collect();
    let keys: Vec<(String, String)> = first.edges.iter().map(|(a, b)| (method_key(a), method_key(b))).collect();
    let cyclic = nodes_on_cycles(nodes.iter().map(String::as_str), keys.iter().map(|(a, b)| (a.as_str(), b.as_str())));
    if cyclic.is_empty() {
        return first.reach;
    }
    let recursive: BTreeSet<MethodId> =
        first.reach.methods.iter().map(|(id, _)| id.clone()).filter(|id| cyclic.contains(&method_key(id))).collect();
    closure(corpus, names, oracle, opts, &recursive).reach
}

fn method_key(id: &MethodId) -> String {
    format!("{}#{}", id.class, id.index)
}
