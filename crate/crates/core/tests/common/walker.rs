//! Exhaustive reference walker for covered labels.
//!
//! Enumerates every acyclic call path from the oracle instead of closing a
//! worklist, keeps one flat variable table per method, and resolves fields
//! and calls with its own small typing. Only default analysis options are
//! modeled: loop context flows into callees and recursion is not iteration.

#![allow(dead_code)]

use std::collections::BTreeMap;

use sfcov_core::graph::{Label, LabelSet};
use sfcov_core::source::{Block, Expr, ExprKind, MethodDecl, MethodId, SourceCorpus, Stmt, StmtKind, TypeKind, TypeRef};

#[derive(Clone, Debug)]
enum T {
    Obj(TypeRef),
    Class(String),
}

pub struct Walker<'a> {
    corpus: &'a SourceCorpus,
    /// (declaring class or None, field, in loop)
    hits: Vec<(Option<String>, String, bool)>,
}

fn collect_locals(b: &Block, out: &mut BTreeMap<String, TypeRef>) {
    fn stmt(s: &Stmt, out: &mut BTreeMap<String, TypeRef>) {
        match &s.kind {
            StmtKind::Local(vs) => {
                for v in vs {
                    out.insert(v.name.clone(), v.ty.clone());
                }
            }
            StmtKind::ForEach { var, .. } => {
                out.insert(var.name.clone(), var.ty.clone());
            }
            _ => {}
        }
        for c in s.substmts() {
            stmt(c, out);
        }
    }
    for s in &b.stmts {
        stmt(s, out);
    }
}

impl<'a> Walker<'a> {
    pub fn new(corpus: &'a SourceCorpus) -> Self {
        Walker { corpus, hits: Vec::new() }
    }

    fn classes_around(&self, class: &str) -> Vec<String> {
        let mut out = Vec::new();
        let mut cur = Some(class.to_string());
        while let Some(c) = cur {
            cur = self.corpus.classes.get(&c).and_then(|d| d.outer.clone());
            out.push(c);
        }
        out
    }

    fn field(&self, class: &str, name: &str) -> Option<(String, TypeRef)> {
        let mut cur = Some(class.to_string());
        let mut guard = 0;
        while let Some(c) = cur {
            let decl = self.corpus.classes.get(&c)?;
            if let Some(f) = decl.fields.iter().find(|f| f.name == name) {
                return Some((c, f.ty.clone()));
            }
            cur = decl.superclass.as_ref().filter(|s| s.kind == TypeKind::Class).and_then(|s| s.target.clone());
            guard += 1;
            if guard > 64 {
                return None;
            }
        }
        None
    }

    fn implicit(&self, class: &str, name: &str) -> Option<(String, TypeRef)> {
        self.classes_around(class).iter().find_map(|c| self.field(c, name))
    }

    fn class_name(&self, class: &str, name: &str) -> Option<String> {
        for c in self.classes_around(class) {
            let nested = format!("{c}.{name}");
            if self.corpus.classes.contains_key(&nested) {
                return Some(nested);
            }
            if self.corpus.classes[&c].simple_name == name {
                return Some(c);
            }
        }
        if self.corpus.classes.contains_key(name) {
            return Some(name.to_string());
        }
        self.corpus.classes.values().find(|c| c.simple_name == name).map(|c| c.name.clone())
    }

    fn methods_in(&self, class: &str, name: &str, arity: usize) -> Option<Vec<MethodId>> {
        let mut cur = Some(class.to_string());
        while let Some(c) = cur {
            let decl = self.corpus.classes.get(&c)?;
            if let Some(i) = decl.methods.iter().position(|m| m.name == name && m.params.len() == arity && !m.is_constructor) {
                if decl.methods[i].body.is_some() {
                    return Some(vec![MethodId { class: c, index: i }]);
                }
                return Some(self.all_named(name, arity));
            }
            cur = decl.superclass.as_ref().filter(|s| s.kind == TypeKind::Class).and_then(|s| s.target.clone());
        }
        None
    }

    fn all_named(&self, name: &str, arity: usize) -> Vec<MethodId> {
        let mut out = Vec::new();
        for c in self.corpus.classes.values() {
            for (i, m) in c.methods.iter().enumerate() {
                if m.name == name && m.params.len() == arity && !m.is_constructor && m.body.is_some() {
                    out.push(MethodId { class: c.name.clone(), index: i });
                }
            }
        }
        out
    }

    fn ctors(&self, class: &str, arity: usize) -> Vec<MethodId> {
        self.corpus
            .classes
            .get(class)
            .map(|c| {
                c.methods
                    .iter()
                    .enumerate()
                    .filter(|(_, m)| m.is_constructor && m.params.len() == arity)
                    .map(|(i, _)| MethodId { class: class.to_string(), index: i })
                    .collect()
            })
            .unwrap_or_default()
    }

    fn targets(&self, class: &str, vars: &BTreeMap<String, TypeRef>, e: &Expr) -> Option<Vec<MethodId>> {
        let ExprKind::MethodCall { receiver, name, args } = &e.kind else { return None };
        let n = args.len();
        if receiver.is_none() && name == "this" {
            return Some(self.ctors(class, n));
        }
        if receiver.is_none() && name == "super" {
            let sup = self.corpus.classes[class].superclass.as_ref().and_then(|s| s.class_target().map(str::to_string))?;
            return Some(self.ctors(&sup, n));
        }
        match receiver {
            None => self.classes_around(class).iter().find_map(|c| self.methods_in(c, name, n)),
            Some(r) => match self.ty(class, vars, r) {
                None => Some(self.all_named(name, n)),
                Some(T::Class(c)) => self.methods_in(&c, name, n),
                Some(T::Obj(t)) if t.kind == TypeKind::Class => self.methods_in(t.target.as_deref()?, name, n),
                Some(T::Obj(_)) => None,
            },
        }
    }

    fn ty(&self, class: &str, vars: &BTreeMap<String, TypeRef>, e: &Expr) -> Option<T> {
        let prim = |n: &str| T::Obj(TypeRef { kind: TypeKind::Primitive, ..TypeRef::named(n, vec![]) });
        let cls = |n: &str| T::Obj(TypeRef { kind: TypeKind::Class, target: Some(n.to_string()), ..TypeRef::named(n, vec![]) });
        match &e.kind {
            ExprKind::Literal(sfcov_core::source::Literal::Null) => None,
            ExprKind::Literal(_) => Some(prim("int")),
            ExprKind::Name(n) => match vars.get(n) {
                Some(t) => Some(T::Obj(t.clone())),
                None => match self.implicit(class, n) {
                    Some((_, t)) => Some(T::Obj(t)),
                    None => self.class_name(class, n).map(T::Class),
                },
            },
            ExprKind::This => Some(cls(class)),
            ExprKind::Super => {
                let s = self.corpus.classes[class].superclass.as_ref()?.class_target()?.to_string();
                Some(cls(&s))
            }
            ExprKind::FieldAccess { receiver, field } if matches!(receiver.kind, ExprKind::This) => {
                Some(T::Obj(self.implicit(class, field)?.1))
            }
            ExprKind::FieldAccess { receiver, field } => match self.ty(class, vars, receiver)? {
                T::Obj(t) if t.kind == TypeKind::Array => (field == "length").then(|| prim("int")),
                T::Obj(t) => Some(T::Obj(self.field(t.class_target()?, field)?.1)),
                T::Class(c) => {
                    let nested = format!("{c}.{field}");
                    if self.corpus.classes.contains_key(&nested) {
                        Some(T::Class(nested))
                    } else {
                        Some(T::Obj(self.field(&c, field)?.1))
                    }
                }
            },
            ExprKind::MethodCall { .. } => {
                let ts = self.targets(class, vars, e)?;
                let rets: Vec<TypeRef> = ts.iter().filter_map(|id| self.corpus.method(id).return_type.clone()).collect();
                let first = rets.first()?.clone();
                rets.iter().all(|r| *r == first).then_some(T::Obj(first))
            }
            ExprKind::New { ty, .. } | ExprKind::Cast { ty, .. } => Some(T::Obj(ty.clone())),
            ExprKind::ArrayIndex { array, .. } => match self.ty(class, vars, array)? {
                T::Obj(t) => t.element.map(|b| T::Obj(*b)),
                T::Class(_) => None,
            },
            ExprKind::Binary { op, lhs, .. } => {
                if ["==", "!=", "<", ">", "<=", ">=", "&&", "||"].contains(&op.as_str()) {
                    Some(prim("boolean"))
                } else {
                    self.ty(class, vars, lhs)
                }
            }
            ExprKind::Unary { operand, .. } => self.ty(class, vars, operand),
            ExprKind::Assign { target, .. } => self.ty(class, vars, target),
            ExprKind::Conditional { then, otherwise, .. } => self.ty(class, vars, then).or_else(|| self.ty(class, vars, otherwise)),
            _ => None,
        }
    }

    fn visit(&mut self, class: &str, vars: &BTreeMap<String, TypeRef>, e: &Expr, lp: bool, path: &mut Vec<MethodId>) {
        match &e.kind {
            ExprKind::Name(n) if !vars.contains_key(n) => {
                if let Some((d, _)) = self.implicit(class, n) {
                    self.hits.push((Some(d), n.clone(), lp));
                }
            }
            ExprKind::FieldAccess { receiver, field } if matches!(receiver.kind, ExprKind::This) => {
                if let Some((d, _)) = self.implicit(class, field) {
                    self.hits.push((Some(d), field.clone(), lp));
                }
            }
            ExprKind::FieldAccess { receiver, field } => match self.ty(class, vars, receiver) {
                None => self.hits.push((None, field.clone(), lp)),
                Some(T::Obj(t)) if t.kind == TypeKind::Array => {}
                Some(t) => {
                    let c = match t {
                        T::Obj(t) => t.class_target().map(str::to_string),
                        T::Class(c) => Some(c),
                    };
                    if let Some((d, _)) = c.and_then(|c| self.field(&c, field)) {
                        self.hits.push((Some(d), field.clone(), lp));
                    }
                }
            },
            ExprKind::MethodCall { .. } => {
                for id in self.targets(class, vars, e).unwrap_or_default() {
                    self.method(&id, lp, path);
                }
            }
            ExprKind::New { ty, args } => {
                if let Some(c) = ty.class_target() {
                    for id in self.ctors(c, args.len()) {
                        self.method(&id, lp, path);
                    }
                }
            }
            _ => {}
        }
        for c in e.children() {
            self.visit(class, vars, c, lp, path);
        }
    }

    fn stmt(&mut self, class: &str, vars: &BTreeMap<String, TypeRef>, s: &Stmt, depth: usize, lp: bool, path: &mut Vec<MethodId>) {
        let inner = lp || depth > 0 || s.kind.is_loop();
        match &s.kind {
            StmtKind::For { init, cond, update, body } => {
                for i in init {
                    self.stmt(class, vars, i, depth, lp, path);
                }
                for e in cond.iter().chain(update.iter()) {
                    self.visit(class, vars, e, inner, path);
                }
                self.stmt(class, vars, body, depth + 1, lp, path);
            }
            _ => {
                let here = if s.kind.is_loop() { inner } else { lp || depth > 0 };
                for e in s.exprs() {
                    self.visit(class, vars, e, here, path);
                }
                let d = if s.kind.is_loop() { depth + 1 } else { depth };
                for c in s.substmts() {
                    self.stmt(class, vars, c, d, lp, path);
                }
            }
        }
    }

    fn vars_of(m: &MethodDecl) -> BTreeMap<String, TypeRef> {
        let mut vars: BTreeMap<String, TypeRef> = m.params.iter().map(|p| (p.name.clone(), p.ty.clone())).collect();
        if let Some(b) = &m.body {
            collect_locals(b, &mut vars);
        }
        vars
    }

    fn method(&mut self, id: &MethodId, lp: bool, path: &mut Vec<MethodId>) {
        if path.contains(id) {
            return;
        }
        let m = self.corpus.method(id);
        let Some(body) = &m.body else { return };
        path.push(id.clone());
        let vars = Self::vars_of(m);
        for s in &body.stmts {
            self.stmt(&id.class, &vars, s, 0, lp, path);
        }
        path.pop();
    }

    /// Accesses of a whole invariant method.
    pub fn invariant(mut self, id: &MethodId) -> Vec<(Option<String>, String, bool)> {
        self.method(id, false, &mut Vec::new());
        self.hits
    }

    /// Accesses made from the arguments of `assert*` calls in a test.
    pub fn test(mut self, id: &MethodId) -> Vec<(Option<String>, String, bool)> {
        let m = self.corpus.method(id);
        let vars = Self::vars_of(m);
        let mut seeds: Vec<(&Expr, bool)> = Vec::new();
        fn find<'e>(e: &'e Expr, lp: bool, out: &mut Vec<(&'e Expr, bool)>) {
            if let ExprKind::MethodCall { name, args, .. } = &e.kind {
                if name.starts_with("assert") {
                    out.extend(args.iter().map(|a| (a, lp)));
                    return;
                }
            }
            for c in e.children() {
                find(c, lp, out);
            }
        }
        fn scan<'e>(s: &'e Stmt, depth: usize, out: &mut Vec<(&'e Expr, bool)>) {
            let lp = depth > 0 || s.kind.is_loop();
            let own = match &s.kind {
                StmtKind::For { init, .. } => {
                    for i in init {
                        scan(i, depth, out);
                    }
                    lp
                }
                _ if s.kind.is_loop() => lp,
                _ => depth > 0,
            };
            for e in s.exprs() {
                find(e, own, out);
            }
            let d = if s.kind.is_loop() { depth + 1 } else { depth };
            for c in s.substmts() {
                if matches!(&s.kind, StmtKind::For { init, .. } if init.iter().any(|i| std::ptr::eq(i, c))) {
                    continue;
                }
                scan(c, d, out);
            }
        }
        if let Some(b) = &m.body {
            for s in &b.stmts {
                scan(s, 0, &mut seeds);
            }
        }
        let mut path = vec![id.clone()];
        for (e, lp) in seeds {
            self.visit(&id.class, &vars, e, lp, &mut path);
        }
        self.hits
    }
}

/// Map raw accesses onto universe labels.
pub fn labels_of(hits: &[(Option<String>, String, bool)], universe: &LabelSet) -> LabelSet {
    let mut out = LabelSet::new();
    for (decl, field, lp) in hits {
        let candidates: Vec<&Label> = universe
            .iter()
            .filter(|l| !l.plus && &l.field == field && decl.as_ref().is_none_or(|d| &l.class == d))
            .collect();
        for c in candidates {
            out.insert(c.clone());
            if *lp {
                let plus = Label::plus(&c.class, &c.field);
                if universe.contains(&plus) {
                    out.insert(plus);
                }
            }
        }
    }
    out
}
