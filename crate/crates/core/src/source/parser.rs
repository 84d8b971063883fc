//! Recursive-descent parser for the analyzed Java subset.
//!
//! Accepts package/import headers, class and interface declarations with
//! generics and nesting, fields, constructors and methods, and the statement
//! and expression forms in [`super::ast`]. `try`, `switch`, `synchronized`
//! and `assert` are lowered onto blocks and expression statements. Lambdas,
//! method references, enums and records are rejected.

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: u32,
    pub expected: String,
}

type PResult<T> = Result<T, ParseError>;

const PRIMITIVES: &[&str] = &["boolean", "byte", "char", "short", "int", "long", "float", "double", "void"];

const MODIFIERS: &[&str] = &[
    "public",
    "protected",
    "private",
    "static",
    "final",
    "abstract",
    "native",
    "synchronized",
    "transient",
    "volatile",
    "strictfp",
    "default",
    "sealed",
];

const ASSIGN_OPS: &[&str] = &["=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="];

/// Parse one file's text. Classes come back flattened in declaration order
/// with qualified names; `file` is left at 0 for the caller to fill in.
pub fn parse_file(src: &str) -> PResult<Vec<ClassDecl>> {
    let tokens = tokenize(src).map_err(|e| ParseError { line: e.line, expected: e.message })?;
    let mut p = Parser { toks: tokens, pos: 0, out: Vec::new() };
    p.compilation_unit()?;
    Ok(p.out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    out: Vec<ClassDecl>,
}

#[derive(Default)]
struct Modifiers {
    is_static: bool,
    annotations: Vec<Annotation>,
}

impl Parser {
    // ---- token helpers ----

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn prev_span(&self) -> Span {
        self.toks[self.pos.saturating_sub(1)].span
    }

    fn line(&self) -> u32 {
        self.span().line
    }

    fn bump(&mut self) -> &Token {
        let t = &self.toks[self.pos];
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn err<T>(&self, expected: impl Into<String>) -> PResult<T> {
        let found = match self.peek() {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Punct(p) => format!("`{p}`"),
            Tok::Int(s) | Tok::Float(s) => format!("`{s}`"),
            Tok::Str(_) => "string literal".to_string(),
            Tok::Char(_) => "char literal".to_string(),
            Tok::At => "`@`".to_string(),
            Tok::Eof => "end of file".to_string(),
        };
        Err(ParseError { line: self.line(), expected: format!("expected {}, found {}", expected.into(), found) })
    }

    fn expect_punct(&mut self, p: &str) -> PResult<()> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            self.err(format!("`{p}`"))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.err("identifier"),
        }
    }

    /// `>` immediately followed (no whitespace) by `tail` tokens.
    fn adjacent_puncts(&self, seq: &[&str]) -> bool {
        let mut end = None;
        for (k, p) in seq.iter().enumerate() {
            let t = &self.toks[(self.pos + k).min(self.toks.len() - 1)];
            match &t.tok {
                Tok::Punct(q) if q == p => {}
                _ => return false,
            }
            if let Some(e) = end {
                if t.span.start != e {
                    return false;
                }
            }
            end = Some(t.span.end);
        }
        true
    }

    // ---- declarations ----

    fn compilation_unit(&mut self) -> PResult<()> {
        if self.is_kw("package") {
            self.bump();
            self.qualified_name()?;
            self.expect_punct(";")?;
        }
        while self.is_kw("import") {
            self.bump();
            self.eat_kw("static");
            self.ident()?;
            while self.eat_punct(".") {
                if self.eat_punct("*") {
                    break;
                }
                self.ident()?;
            }
            self.expect_punct(";")?;
        }
        while *self.peek() != Tok::Eof {
            if self.eat_punct(";") {
                continue;
            }
            let mods = self.modifiers()?;
            self.type_decl(mods, None)?;
        }
        Ok(())
    }

    fn qualified_name(&mut self) -> PResult<String> {
        let mut name = self.ident()?;
        while self.is_punct(".") && matches!(self.peek_at(1), Tok::Ident(_)) {
            self.bump();
            name.push('.');
            name.push_str(&self.ident()?);
        }
        Ok(name)
    }

    fn annotation(&mut self) -> PResult<Annotation> {
        let start = self.span();
        self.bump(); // '@'
        if self.is_kw("interface") {
            return self.err("annotation type declarations are not supported; identifier");
        }
        let name = self.qualified_name()?;
        if self.is_punct("(") {
            self.skip_balanced("(", ")")?;
        }
        Ok(Annotation { name, span: start.to(self.prev_span()) })
    }

    fn modifiers(&mut self) -> PResult<Modifiers> {
        let mut m = Modifiers::default();
        loop {
            match self.peek() {
                Tok::At => {
                    let a = self.annotation()?;
                    m.annotations.push(a);
                }
                Tok::Ident(s) if MODIFIERS.contains(&s.as_str()) => {
                    // `default:` inside a switch is never parsed here
                    if s == "static" {
                        m.is_static = true;
                    }
                    self.bump();
                }
                Tok::Ident(s) if s == "non" && matches!(self.peek_at(1), Tok::Punct("-")) => {
                    self.bump();
                    self.bump();
                    self.ident()?;
                }
                _ => return Ok(m),
            }
        }
    }

    fn skip_balanced(&mut self, open: &str, close: &str) -> PResult<()> {
        let mut depth = 0usize;
        loop {
            match self.peek() {
                Tok::Eof => return self.err(format!("`{close}`")),
                Tok::Punct(p) if *p == open => depth += 1,
                Tok::Punct(p) if *p == close => {
                    depth -= 1;
                    if depth == 0 {
                        self.bump();
                        return Ok(());
                    }
                }
                _ => {}
            }
            self.bump();
        }
    }

    fn type_decl(&mut self, mods: Modifiers, outer: Option<&str>) -> PResult<String> {
        let start = self.span();
        let is_interface = if self.eat_kw("class") {
            false
        } else if self.eat_kw("interface") {
            true
        } else if self.is_kw("enum") || self.is_kw("record") {
            return self.err("`class` or `interface` (enum and record declarations are not supported)");
        } else {
            return self.err("`class` or `interface`");
        };
        let simple = self.ident()?;
        let name = match outer {
            Some(o) => format!("{o}.{simple}"),
            None => simple.clone(),
        };
        let type_params = if self.is_punct("<") { self.type_params()? } else { Vec::new() };

        let mut superclass = None;
        let mut interfaces = Vec::new();
        if self.eat_kw("extends") {
            if is_interface {
                interfaces = self.type_list()?;
            } else {
                superclass = Some(self.parse_type()?);
            }
        }
        if self.eat_kw("implements") {
            interfaces.extend(self.type_list()?);
        }
        if self.eat_kw("permits") {
            self.type_list()?;
        }

        let index = self.out.len();
        self.out.push(ClassDecl {
            name: name.clone(),
            simple_name: simple,
            type_params,
            superclass,
            interfaces,
            is_interface,
            is_static_nested: outer.is_some() && (mods.is_static || is_interface),
            fields: Vec::new(),
            methods: Vec::new(),
            inner: Vec::new(),
            outer: outer.map(str::to_string),
            file: 0,
            span: start,
        });

        self.expect_punct("{")?;
        while !self.eat_punct("}") {
            if *self.peek() == Tok::Eof {
                return self.err("`}`");
            }
            self.member(index, &name, is_interface)?;
        }
        self.out[index].span = start.to(self.prev_span());
        Ok(name)
    }

    fn type_params(&mut self) -> PResult<Vec<String>> {
        self.expect_punct("<")?;
        let mut out = Vec::new();
        loop {
            while matches!(self.peek(), Tok::At) {
                self.annotation()?;
            }
            out.push(self.ident()?);
            if self.eat_kw("extends") {
                self.parse_type()?;
                while self.eat_punct("&") {
                    self.parse_type()?;
                }
            }
            if !self.eat_punct(",") {
                break;
            }
        }
        self.expect_punct(">")?;
        Ok(out)
    }

    fn type_list(&mut self) -> PResult<Vec<TypeRef>> {
        let mut out = vec![self.parse_type()?];
        while self.eat_punct(",") {
            out.push(self.parse_type()?);
        }
        Ok(out)
    }

    fn member(&mut self, class: usize, class_name: &str, in_interface: bool) -> PResult<()> {
        if self.eat_punct(";") {
            return Ok(());
        }
        // instance or static initializer
        if self.is_punct("{") || (self.is_kw("static") && matches!(self.peek_at(1), Tok::Punct("{"))) {
            self.eat_kw("static");
            self.block()?;
            return Ok(());
        }
        let start = self.span();
        let mut mods = self.modifiers()?;
        if in_interface && !mods.is_static && self.peek_is_field_in_interface() {
            // interface constants are implicitly static
            mods.is_static = true;
        }
        if self.is_kw("class") || self.is_kw("interface") || self.is_kw("enum") || self.is_kw("record") {
            let inner = self.type_decl(mods, Some(class_name))?;
            self.out[class].inner.push(inner);
            return Ok(());
        }
        if self.is_punct("<") {
            self.type_params()?;
        }
        let simple = self.out[class].simple_name.clone();
        if self.is_kw(&simple) && matches!(self.peek_at(1), Tok::Punct("(")) {
            self.bump();
            let params = self.params()?;
            self.throws_clause()?;
            let body = Some(self.block()?);
            let span = start.to(self.prev_span());
            self.out[class].methods.push(MethodDecl {
                name: simple,
                params,
                return_type: None,
                body,
                is_static: false,
                is_constructor: true,
                annotations: mods.annotations,
                span,
            });
            return Ok(());
        }

        let ty = self.parse_type()?;
        let name = self.ident()?;
        if self.is_punct("(") {
            let params = self.params()?;
            let mut return_type = ty;
            while self.is_punct("[") && matches!(self.peek_at(1), Tok::Punct("]")) {
                self.bump();
                self.bump();
                return_type = TypeRef::array_of(return_type);
            }
            self.throws_clause()?;
            let body = if self.eat_punct(";") {
                None
            } else if self.eat_kw("default") {
                // annotation element default
                while !self.eat_punct(";") {
                    if *self.peek() == Tok::Eof {
                        return self.err("`;`");
                    }
                    self.bump();
                }
                None
            } else {
                Some(self.block()?)
            };
            let span = start.to(self.prev_span());
            self.out[class].methods.push(MethodDecl {
                name,
                params,
                return_type: Some(return_type),
                body,
                is_static: mods.is_static,
                is_constructor: false,
                annotations: mods.annotations,
                span,
            });
            return Ok(());
        }

        // one or more field declarators
        let mut name = name;
        loop {
            let fstart = self.prev_span();
            let mut fty = ty.clone();
            while self.eat_punct("[") {
                self.expect_punct("]")?;
                fty = TypeRef::array_of(fty);
            }
            let init = if self.eat_punct("=") { Some(self.var_init()?) } else { None };
            if self.out[class].fields.iter().any(|f| f.name == name) {
                return Err(ParseError { line: fstart.line, expected: format!("unique field name, found duplicate `{name}`") });
            }
            let span = fstart.to(self.prev_span());
            self.out[class].fields.push(FieldDecl {
                name,
                ty: fty,
                is_static: mods.is_static,
                init,
                span,
            });
            if self.eat_punct(",") {
                name = self.ident()?;
                continue;
            }
            self.expect_punct(";")?;
            return Ok(());
        }
    }

    /// Type followed by identifier and then `=`, `;` or `,`.
    fn peek_is_field_in_interface(&mut self) -> bool {
        let save = self.pos;
        let ok = self.try_type().is_some()
            && matches!(self.peek(), Tok::Ident(_))
            && matches!(self.peek_at(1), Tok::Punct("=" | ";" | ","));
        self.pos = save;
        ok
    }

    fn throws_clause(&mut self) -> PResult<()> {
        if self.eat_kw("throws") {
            self.type_list()?;
        }
        Ok(())
    }

    fn params(&mut self) -> PResult<Vec<Param>> {
        self.expect_punct("(")?;
        let mut out = Vec::new();
        if self.eat_punct(")") {
            return Ok(out);
        }
        loop {
            self.modifiers()?;
            let mut ty = self.parse_type()?;
            if self.eat_punct("...") {
                ty = TypeRef::array_of(ty);
            }
            let name = self.ident()?;
            while self.eat_punct("[") {
                self.expect_punct("]")?;
                ty = TypeRef::array_of(ty);
            }
            out.push(Param { name, ty });
            if !self.eat_punct(",") {
                break;
            }
        }
        self.expect_punct(")")?;
        Ok(out)
    }

    // ---- types ----

    fn parse_type(&mut self) -> PResult<TypeRef> {
        let save = self.pos;
        match self.try_type() {
            Some(t) => Ok(t),
            None => {
                self.pos = save;
                self.err("type")
            }
        }
    }

    /// Speculative type parse; leaves `pos` advanced on success.
    fn try_type(&mut self) -> Option<TypeRef> {
        while matches!(self.peek(), Tok::At) {
            self.annotation().ok()?;
        }
        let Tok::Ident(first) = self.peek().clone() else { return None };
        if is_reserved(&first) && !PRIMITIVES.contains(&first.as_str()) {
            return None;
        }
        self.bump();
        let mut ty = if PRIMITIVES.contains(&first.as_str()) {
            TypeRef::named(first, Vec::new())
        } else {
            let mut name = first;
            let mut args = if self.is_punct("<") { self.try_type_args()? } else { Vec::new() };
            while self.is_punct(".") && matches!(self.peek_at(1), Tok::Ident(s) if !is_reserved(s)) {
                self.bump();
                let Tok::Ident(seg) = self.bump().tok.clone() else { return None };
                name.push('.');
                name.push_str(&seg);
                if self.is_punct("<") {
                    args = self.try_type_args()?;
                }
            }
            TypeRef::named(name, args)
        };
        while self.is_punct("[") && matches!(self.peek_at(1), Tok::Punct("]")) {
            self.bump();
            self.bump();
            ty = TypeRef::array_of(ty);
        }
        Some(ty)
    }

    fn try_type_args(&mut self) -> Option<Vec<TypeRef>> {
        self.bump(); // '<'
        let mut args = Vec::new();
        if self.eat_punct(">") {
            return Some(args); // diamond
        }
        loop {
            if self.eat_punct("?") {
                if self.eat_kw("extends") || self.eat_kw("super") {
                    args.push(self.try_type()?);
                } else {
                    args.push(TypeRef::named("?", Vec::new()));
                }
            } else {
                args.push(self.try_type()?);
            }
            if !self.eat_punct(",") {
                break;
            }
        }
        if self.eat_punct(">") {
            Some(args)
        } else {
            None
        }
    }

    // ---- statements ----

    fn block(&mut self) -> PResult<Block> {
        let start = self.span();
        self.expect_punct("{")?;
        let mut stmts = Vec::new();
        while !self.eat_punct("}") {
            if *self.peek() == Tok::Eof {
                return self.err("`}`");
            }
            stmts.push(self.block_stmt()?);
        }
        Ok(Block { stmts, span: start.to(self.prev_span()) })
    }

    fn block_stmt(&mut self) -> PResult<Stmt> {
        if self.is_kw("class") || self.is_kw("interface") {
            return self.err("statement (local classes are not supported)");
        }
        if let Some(stmt) = self.try_local_decl()? {
            self.expect_punct(";")?;
            return Ok(stmt);
        }
        self.statement()
    }

    fn is_local_decl_start(&mut self) -> bool {
        let save = self.pos;
        while self.is_kw("final") || matches!(self.peek(), Tok::At) {
            if self.eat_kw("final") {
                continue;
            }
            if self.annotation().is_err() {
                self.pos = save;
                return false;
            }
        }
        let ok = self.try_type().is_some()
            && matches!(self.peek(), Tok::Ident(s) if !is_reserved(s))
            && matches!(self.peek_at(1), Tok::Punct("=" | ";" | "," | "[" | ":"));
        self.pos = save;
        ok
    }

    /// Local variable declaration without the trailing `;`.
    fn try_local_decl(&mut self) -> PResult<Option<Stmt>> {
        if !self.is_local_decl_start() {
            return Ok(None);
        }
        let start = self.span();
        self.modifiers()?;
        let ty = self.parse_type()?;
        let mut vars = Vec::new();
        loop {
            let name = self.ident()?;
            let mut vty = ty.clone();
            while self.eat_punct("[") {
                self.expect_punct("]")?;
                vty = TypeRef::array_of(vty);
            }
            let init = if self.eat_punct("=") { Some(self.var_init()?) } else { None };
            vars.push(LocalVar { name, ty: vty, init });
            if !self.eat_punct(",") {
                break;
            }
        }
        Ok(Some(Stmt { kind: StmtKind::Local(vars), span: start.to(self.prev_span()) }))
    }

    fn var_init(&mut self) -> PResult<Expr> {
        if self.is_punct("{") {
            self.array_init()
        } else {
            self.expr()
        }
    }

    fn array_init(&mut self) -> PResult<Expr> {
        let start = self.span();
        self.expect_punct("{")?;
        let mut items = Vec::new();
        while !self.eat_punct("}") {
            items.push(self.var_init()?);
            if !self.eat_punct(",") {
                self.expect_punct("}")?;
                break;
            }
        }
        Ok(Expr { kind: ExprKind::ArrayInit(items), span: start.to(self.prev_span()) })
    }

    fn paren_expr(&mut self) -> PResult<Expr> {
        self.expect_punct("(")?;
        let e = self.expr()?;
        self.expect_punct(")")?;
        Ok(e)
    }

    fn statement(&mut self) -> PResult<Stmt> {
        let start = self.span();
        let kind = match self.peek().clone() {
            Tok::Punct("{") => StmtKind::Block(self.block()?),
            Tok::Punct(";") => {
                self.bump();
                StmtKind::Empty
            }
            Tok::Ident(kw) => match kw.as_str() {
                "if" => {
                    self.bump();
                    let cond = self.paren_expr()?;
                    let then = Box::new(self.statement()?);
                    let otherwise = if self.eat_kw("else") { Some(Box::new(self.statement()?)) } else { None };
                    StmtKind::If { cond, then, otherwise }
                }
                "while" => {
                    self.bump();
                    let cond = self.paren_expr()?;
                    let body = Box::new(self.statement()?);
                    StmtKind::While { cond, body }
                }
                "do" => {
                    self.bump();
                    let body = Box::new(self.statement()?);
                    if !self.eat_kw("while") {
                        return self.err("`while`");
                    }
                    let cond = self.paren_expr()?;
                    self.expect_punct(";")?;
                    StmtKind::DoWhile { body, cond }
                }
                "for" => {
                    self.bump();
                    self.for_stmt()?
                }
                "return" => {
                    self.bump();
                    let value = if self.is_punct(";") { None } else { Some(self.expr()?) };
                    self.expect_punct(";")?;
                    StmtKind::Return(value)
                }
                "break" | "continue" => {
                    self.bump();
                    if matches!(self.peek(), Tok::Ident(_)) {
                        self.bump();
                    }
                    self.expect_punct(";")?;
                    if kw == "break" {
                        StmtKind::Break
                    } else {
                        StmtKind::Continue
                    }
                }
                "throw" => {
                    self.bump();
                    let e = self.expr()?;
                    self.expect_punct(";")?;
                    StmtKind::Throw(e)
                }
                "assert" => {
                    self.bump();
                    let e = self.expr()?;
                    let mut stmts = vec![Stmt { span: e.span, kind: StmtKind::Expr(e) }];
                    if self.eat_punct(":") {
                        let msg = self.expr()?;
                        stmts.push(Stmt { span: msg.span, kind: StmtKind::Expr(msg) });
                    }
                    self.expect_punct(";")?;
                    StmtKind::Block(Block { stmts, span: start.to(self.prev_span()) })
                }
                "try" => {
                    self.bump();
                    self.try_stmt()?
                }
                "switch" => {
                    self.bump();
                    self.switch_stmt()?
                }
                "synchronized" => {
                    self.bump();
                    let lock = self.paren_expr()?;
                    let body = self.block()?;
                    let lock_stmt = Stmt { span: lock.span, kind: StmtKind::Expr(lock) };
                    let body_stmt = Stmt { span: body.span, kind: StmtKind::Block(body) };
                    StmtKind::Block(Block { stmts: vec![lock_stmt, body_stmt], span: start.to(self.prev_span()) })
                }
                _ if matches!(self.peek_at(1), Tok::Punct(":")) && !is_reserved(&kw) => {
                    // labeled statement
                    self.bump();
                    self.bump();
                    return self.statement();
                }
                _ => {
                    let e = self.expr()?;
                    self.expect_punct(";")?;
                    StmtKind::Expr(e)
                }
            },
            _ => {
                let e = self.expr()?;
                self.expect_punct(";")?;
                StmtKind::Expr(e)
            }
        };
        Ok(Stmt { kind, span: start.to(self.prev_span()) })
    }

    fn for_stmt(&mut self) -> PResult<StmtKind> {
        self.expect_punct("(")?;
        // enhanced for: decl followed by ':'
        if self.is_local_decl_start() {
            let save = self.pos;
            self.modifiers()?;
            let ty = self.parse_type()?;
            let name = self.ident()?;
            if self.eat_punct(":") {
                let iterable = self.expr()?;
                self.expect_punct(")")?;
                let body = Box::new(self.statement()?);
                return Ok(StmtKind::ForEach { var: LocalVar { name, ty, init: None }, iterable, body });
            }
            self.pos = save;
        }
        let mut init = Vec::new();
        if !self.is_punct(";") {
            if let Some(decl) = self.try_local_decl()? {
                init.push(decl);
            } else {
                loop {
                    let e = self.expr()?;
                    init.push(Stmt { span: e.span, kind: StmtKind::Expr(e) });
                    if !self.eat_punct(",") {
                        break;
                    }
                }
            }
        }
        self.expect_punct(";")?;
        let cond = if self.is_punct(";") { None } else { Some(self.expr()?) };
        self.expect_punct(";")?;
        let mut update = Vec::new();
        if !self.is_punct(")") {
            loop {
                update.push(self.expr()?);
                if !self.eat_punct(",") {
                    break;
                }
            }
        }
        self.expect_punct(")")?;
        let body = Box::new(self.statement()?);
        Ok(StmtKind::For { init, cond, update, body })
    }

    fn try_stmt(&mut self) -> PResult<StmtKind> {
        let start = self.prev_span();
        let mut stmts = Vec::new();
        if self.eat_punct("(") {
            while !self.eat_punct(")") {
                if let Some(decl) = self.try_local_decl()? {
                    stmts.push(decl);
                } else {
                    let e = self.expr()?;
                    stmts.push(Stmt { span: e.span, kind: StmtKind::Expr(e) });
                }
                self.eat_punct(";");
            }
        }
        let body = self.block()?;
        stmts.push(Stmt { span: body.span, kind: StmtKind::Block(body) });
        while self.eat_kw("catch") {
            let cstart = self.prev_span();
            self.expect_punct("(")?;
            self.modifiers()?;
            let ty = self.parse_type()?;
            while self.eat_punct("|") {
                self.parse_type()?;
            }
            let name = self.ident()?;
            self.expect_punct(")")?;
            let handler = self.block()?;
            let decl = Stmt { span: cstart, kind: StmtKind::Local(vec![LocalVar { name, ty, init: None }]) };
            let span = cstart.to(handler.span);
            let inner = Stmt { span: handler.span, kind: StmtKind::Block(handler) };
            stmts.push(Stmt { span, kind: StmtKind::Block(Block { stmts: vec![decl, inner], span }) });
        }
        if self.eat_kw("finally") {
            let fin = self.block()?;
            stmts.push(Stmt { span: fin.span, kind: StmtKind::Block(fin) });
        }
        Ok(StmtKind::Block(Block { stmts, span: start.to(self.prev_span()) }))
    }

    fn switch_stmt(&mut self) -> PResult<StmtKind> {
        let start = self.prev_span();
        let selector = self.paren_expr()?;
        let mut stmts = vec![Stmt { span: selector.span, kind: StmtKind::Expr(selector) }];
        self.expect_punct("{")?;
        while !self.eat_punct("}") {
            if self.eat_kw("case") {
                loop {
                    let label = self.ternary()?;
                    stmts.push(Stmt { span: label.span, kind: StmtKind::Expr(label) });
                    if !self.eat_punct(",") {
                        break;
                    }
                }
                if self.is_punct("->") {
                    return self.err("`:` (arrow-form switch is not supported)");
                }
                self.expect_punct(":")?;
            } else if self.is_kw("default") && matches!(self.peek_at(1), Tok::Punct(":")) {
                self.bump();
                self.bump();
            } else if *self.peek() == Tok::Eof {
                return self.err("`}`");
            } else {
                stmts.push(self.block_stmt()?);
            }
        }
        Ok(StmtKind::Block(Block { stmts, span: start.to(self.prev_span()) }))
    }

    // ---- expressions ----

    pub fn expr(&mut self) -> PResult<Expr> {
        let lhs = self.ternary()?;
        if let Some(op) = self.assign_op() {
            let value = self.expr()?;
            let span = lhs.span.to(value.span);
            return Ok(Expr { kind: ExprKind::Assign { op, target: Box::new(lhs), value: Box::new(value) }, span });
        }
        if self.is_punct("->") {
            return self.err("expression (lambdas are not supported)");
        }
        Ok(lhs)
    }

    fn assign_op(&mut self) -> Option<String> {
        if let Tok::Punct(p) = self.peek() {
            if ASSIGN_OPS.contains(p) {
                let op = p.to_string();
                self.bump();
                return Some(op);
            }
        }
        for (seq, op) in [(&[">", ">", ">", "="][..], ">>>="), (&[">", ">", "="][..], ">>=")] {
            if self.adjacent_puncts(seq) {
                for _ in 0..seq.len() {
                    self.bump();
                }
                return Some(op.to_string());
            }
        }
        None
    }

    fn ternary(&mut self) -> PResult<Expr> {
        let cond = self.binary(1)?;
        if self.eat_punct("?") {
            let then = self.expr()?;
            self.expect_punct(":")?;
            let otherwise = self.ternary()?;
            let span = cond.span.to(otherwise.span);
            return Ok(Expr {
                kind: ExprKind::Conditional { cond: Box::new(cond), then: Box::new(then), otherwise: Box::new(otherwise) },
                span,
            });
        }
        Ok(cond)
    }

    /// Binary operator at the cursor as (text, precedence, token count).
    fn binop(&self) -> Option<(String, u8, usize)> {
        if self.is_punct(">") {
            let run = [&[">", ">", ">"][..], &[">", ">"][..], &[">"][..]]
                .into_iter()
                .find(|seq| self.adjacent_puncts(seq))
                .map_or(1, |seq| seq.len());
            let mut with_eq = vec![">"; run];
            with_eq.push("=");
            return match (run, self.adjacent_puncts(&with_eq)) {
                (1, true) => Some((">=".into(), 7, 2)),
                (_, true) => None,
                (3, false) => Some((">>>".into(), 8, 3)),
                (2, false) => Some((">>".into(), 8, 2)),
                _ => Some((">".into(), 7, 1)),
            };
        }
        if self.is_kw("instanceof") {
            return Some(("instanceof".into(), 7, 1));
        }
        let Tok::Punct(p) = self.peek() else { return None };
        let prec = match *p {
            "||" => 1,
            "&&" => 2,
            "|" => 3,
            "^" => 4,
            "&" => 5,
            "==" | "!=" => 6,
            "<" | ">" | "<=" => 7,
            "<<" => 8,
            "+" | "-" => 9,
            "*" | "/" | "%" => 10,
            _ => return None,
        };
        Some((p.to_string(), prec, 1))
    }

    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while let Some((op, prec, ntok)) = self.binop() {
            if prec < min_prec {
                break;
            }
            for _ in 0..ntok {
                self.bump();
            }
            if op == "instanceof" {
                self.eat_kw("final");
                let ty = self.parse_type()?;
                // pattern variable is ignored
                if matches!(self.peek(), Tok::Ident(s) if !is_reserved(s)) {
                    self.bump();
                }
                let span = lhs.span.to(self.prev_span());
                lhs = Expr { kind: ExprKind::InstanceOf { expr: Box::new(lhs), ty }, span };
                continue;
            }
            let rhs = self.binary(prec + 1)?;
            let span = lhs.span.to(rhs.span);
            lhs = Expr { kind: ExprKind::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) }, span };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        let start = self.span();
        if let Tok::Punct(p @ ("+" | "-" | "!" | "~" | "++" | "--")) = self.peek().clone() {
            self.bump();
            let operand = self.unary()?;
            let span = start.to(operand.span);
            return Ok(Expr { kind: ExprKind::Unary { op: p.to_string(), operand: Box::new(operand), postfix: false }, span });
        }
        if self.is_punct("(") {
            if let Some(cast) = self.try_cast()? {
                return Ok(cast);
            }
        }
        self.postfix()
    }

    fn try_cast(&mut self) -> PResult<Option<Expr>> {
        let start = self.span();
        let save = self.pos;
        self.bump(); // '('
        let Some(ty) = self.try_type() else {
            self.pos = save;
            return Ok(None);
        };
        while self.eat_punct("&") {
            if self.try_type().is_none() {
                self.pos = save;
                return Ok(None);
            }
        }
        if !self.eat_punct(")") {
            self.pos = save;
            return Ok(None);
        }
        let primitive = ty.kind == TypeKind::Named && PRIMITIVES.contains(&ty.name.as_str());
        let castable = match self.peek() {
            Tok::Ident(s) => !matches!(s.as_str(), "instanceof"),
            Tok::Int(_) | Tok::Float(_) | Tok::Str(_) | Tok::Char(_) => true,
            Tok::Punct("(" | "!" | "~") => true,
            Tok::Punct("+" | "-" | "++" | "--") => primitive,
            _ => false,
        };
        if !castable {
            self.pos = save;
            return Ok(None);
        }
        let operand = self.unary()?;
        let span = start.to(operand.span);
        Ok(Some(Expr { kind: ExprKind::Cast { ty, expr: Box::new(operand) }, span }))
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let mut e = self.primary()?;
        loop {
            if self.is_punct(".") {
                self.bump();
                if self.is_punct("<") {
                    // explicit generic method call
                    self.skip_balanced("<", ">")?;
                }
                if self.eat_kw("class") {
                    let ty = expr_as_type(&e).unwrap_or_else(|| TypeRef::named("?", Vec::new()));
                    let span = e.span.to(self.prev_span());
                    e = Expr { kind: ExprKind::ClassLit(ty), span };
                    continue;
                }
                if self.eat_kw("this") {
                    // Outer.this
                    let span = e.span.to(self.prev_span());
                    e = Expr { kind: ExprKind::This, span };
                    continue;
                }
                if self.is_kw("new") {
                    return self.err("identifier (qualified inner-class creation is not supported)");
                }
                let name = self.ident()?;
                if self.is_punct("(") {
                    let args = self.args()?;
                    let span = e.span.to(self.prev_span());
                    e = Expr { kind: ExprKind::MethodCall { receiver: Some(Box::new(e)), name, args }, span };
                } else {
                    let span = e.span.to(self.prev_span());
                    e = Expr { kind: ExprKind::FieldAccess { receiver: Box::new(e), field: name }, span };
                }
            } else if self.is_punct("[") {
                self.bump();
                let index = self.expr()?;
                self.expect_punct("]")?;
                let span = e.span.to(self.prev_span());
                e = Expr { kind: ExprKind::ArrayIndex { array: Box::new(e), index: Box::new(index) }, span };
            } else if self.is_punct("++") || self.is_punct("--") {
                let Tok::Punct(p) = self.bump().tok.clone() else { unreachable!() };
                let span = e.span.to(self.prev_span());
                e = Expr { kind: ExprKind::Unary { op: p.to_string(), operand: Box::new(e), postfix: true }, span };
            } else if self.is_punct("::") {
                return self.err("expression (method references are not supported)");
            } else {
                return Ok(e);
            }
        }
    }

    fn args(&mut self) -> PResult<Vec<Expr>> {
        self.expect_punct("(")?;
        let mut out = Vec::new();
        if self.eat_punct(")") {
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            if !self.eat_punct(",") {
                break;
            }
        }
        self.expect_punct(")")?;
        Ok(out)
    }

    fn primary(&mut self) -> PResult<Expr> {
        let start = self.span();
        let tok = self.peek().clone();
        let kind = match tok {
            Tok::Int(s) => {
                self.bump();
                ExprKind::Literal(Literal::Int(s))
            }
            Tok::Float(s) => {
                self.bump();
                ExprKind::Literal(Literal::Float(s))
            }
            Tok::Str(s) => {
                self.bump();
                ExprKind::Literal(Literal::Str(s))
            }
            Tok::Char(s) => {
                self.bump();
                ExprKind::Literal(Literal::Char(s))
            }
            Tok::Punct("(") => {
                self.bump();
                let inner = self.expr()?;
                self.expect_punct(")")?;
                if self.is_punct("->") {
                    return self.err("expression (lambdas are not supported)");
                }
                return Ok(Expr { kind: inner.kind, span: start.to(self.prev_span()) });
            }
            Tok::Ident(s) => match s.as_str() {
                "true" | "false" => {
                    self.bump();
                    ExprKind::Literal(Literal::Bool(s == "true"))
                }
                "null" => {
                    self.bump();
                    ExprKind::Literal(Literal::Null)
                }
                "this" => {
                    self.bump();
                    if self.is_punct("(") {
                        // this(...) constructor chaining
                        let args = self.args()?;
                        ExprKind::MethodCall { receiver: None, name: "this".into(), args }
                    } else {
                        ExprKind::This
                    }
                }
                "super" => {
                    self.bump();
                    if self.is_punct("(") {
                        let args = self.args()?;
                        ExprKind::MethodCall { receiver: None, name: "super".into(), args }
                    } else {
                        ExprKind::Super
                    }
                }
                "new" => {
                    self.bump();
                    return self.creator(start);
                }
                p if PRIMITIVES.contains(&p) => {
                    let ty = self.parse_type()?;
                    self.expect_punct(".")?;
                    if !self.eat_kw("class") {
                        return self.err("`class`");
                    }
                    ExprKind::ClassLit(ty)
                }
                _ if is_reserved(&s) => return self.err("expression"),
                _ => {
                    self.bump();
                    if self.is_punct("(") {
                        let args = self.args()?;
                        ExprKind::MethodCall { receiver: None, name: s, args }
                    } else if self.is_punct("->") {
                        return self.err("expression (lambdas are not supported)");
                    } else {
                        ExprKind::Name(s)
                    }
                }
            },
            _ => return self.err("expression"),
        };
        Ok(Expr { kind, span: start.to(self.prev_span()) })
    }

    fn creator(&mut self, start: Span) -> PResult<Expr> {
        if self.is_punct("<") {
            self.skip_balanced("<", ">")?;
        }
        // element type without array dims
        let save = self.pos;
        let Tok::Ident(first) = self.peek().clone() else { return self.err("type") };
        self.bump();
        let mut name = first;
        let mut args = Vec::new();
        if self.is_punct("<") {
            args = match self.try_type_args() {
                Some(a) => a,
                None => {
                    self.pos = save;
                    return self.err("type arguments");
                }
            };
        }
        while self.is_punct(".") {
            self.bump();
            name.push('.');
            name.push_str(&self.ident()?);
            if self.is_punct("<") {
                args = self.try_type_args().ok_or(ParseError { line: self.line(), expected: "type arguments".into() })?;
            }
        }
        let ty = TypeRef::named(name, args);
        if self.is_punct("[") {
            let mut dims = Vec::new();
            let mut depth = 0;
            while self.eat_punct("[") {
                depth += 1;
                if self.eat_punct("]") {
                    continue;
                }
                dims.push(self.expr()?);
                self.expect_punct("]")?;
            }
            let init = if self.is_punct("{") {
                match self.array_init()?.kind {
                    ExprKind::ArrayInit(items) => Some(items),
                    _ => unreachable!(),
                }
            } else {
                None
            };
            let mut elem = ty;
            for _ in 1..depth {
                elem = TypeRef::array_of(elem);
            }
            return Ok(Expr { kind: ExprKind::NewArray { elem, dims, init }, span: start.to(self.prev_span()) });
        }
        let call_args = self.args()?;
        if self.is_punct("{") {
            // anonymous class body is not analyzed
            self.skip_balanced("{", "}")?;
        }
        Ok(Expr { kind: ExprKind::New { ty, args: call_args }, span: start.to(self.prev_span()) })
    }
}

fn expr_as_type(e: &Expr) -> Option<TypeRef> {
    fn path(e: &Expr) -> Option<String> {
        match &e.kind {
            ExprKind::Name(n) => Some(n.clone()),
            ExprKind::FieldAccess { receiver, field } => Some(format!("{}.{}", path(receiver)?, field)),
            _ => None,
        }
    }
    path(e).map(|p| TypeRef::named(p, Vec::new()))
}

fn is_reserved(s: &str) -> bool {
    matches!(
        s,
        "abstract"
            | "assert"
            | "boolean"
            | "break"
            | "byte"
            | "case"
            | "catch"
            | "char"
            | "class"
            | "const"
            | "continue"
            | "default"
            | "do"
            | "double"
            | "else"
            | "enum"
            | "extends"
            | "final"
            | "finally"
            | "float"
            | "for"
            | "goto"
            | "if"
            | "implements"
            | "import"
            | "instanceof"
            | "int"
            | "interface"
            | "long"
            | "native"
            | "new"
            | "package"
            | "private"
            | "protected"
            | "public"
            | "return"
            | "short"
            | "static"
            | "strictfp"
            | "super"
            | "switch"
            | "synchronized"
            | "this"
            | "throw"
            | "throws"
            | "transient"
            | "try"
            | "void"
            | "volatile"
            | "while"
            | "true"
            | "false"
            | "null"
    )
}
