//! Recursive-descent parser for single methods in the supported subset.

use super::ast::*;
use super::lexer::{lex, Tok, Token};
use super::SourceError;

pub const HOLE_MARKER: &str = "__HOLE__";

const MODIFIERS: &[&str] = &[
    "public", "private", "protected", "static", "final", "synchronized", "abstract", "native",
];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    holes: usize,
}

/// Parse exactly one method declaration.
pub fn parse_method(source_text: &str) -> Result<MethodIr, SourceError> {
    let toks = lex(source_text)?;
    let mut p = Parser { toks, pos: 0, holes: 0 };
    let m = p.method()?;
    p.expect_eof()?;
    if p.holes > 1 {
        return Err(SourceError::MultipleHoles { count: p.holes });
    }
    Ok(m)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn line(&self) -> u32 {
        self.toks[self.pos].line
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if matches!(self.peek(), Tok::Punct(q) if *q == p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), SourceError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{p}`")))
        }
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Tok::Ident(id) if id == kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn peek_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(id) if id == kw)
    }

    fn ident(&mut self) -> Result<String, SourceError> {
        match self.bump() {
            Tok::Ident(id) => Ok(id),
            _ => Err(SourceError::Syntax {
                line: self.toks[self.pos.saturating_sub(1)].line,
                message: "expected identifier".into(),
            }),
        }
    }

    fn err(&self, message: &str) -> SourceError {
        SourceError::Syntax { line: self.line(), message: message.into() }
    }

    fn expect_eof(&mut self) -> Result<(), SourceError> {
        if matches!(self.peek(), Tok::Eof) {
            Ok(())
        } else {
            Err(self.err("trailing input after method body"))
        }
    }

    fn method(&mut self) -> Result<MethodIr, SourceError> {
        while matches!(self.peek(), Tok::Ident(id) if MODIFIERS.contains(&id.as_str())) {
            self.bump();
        }
        // return type (possibly `void`), then the method name
        let _ret = self.parse_type()?;
        let name = self.ident()?;
        self.expect_punct("(")?;
        let mut parameters = Vec::new();
        if !self.eat_punct(")") {
            loop {
                let ty = self.parse_type()?;
                let pname = self.ident()?;
                parameters.push((pname, ty));
                if self.eat_punct(")") {
                    break;
                }
                self.expect_punct(",")?;
            }
        }
        if self.eat_kw("throws") {
            loop {
                self.parse_type()?;
                if !self.eat_punct(",") {
                    break;
                }
            }
        }
        let body = self.block()?;
        Ok(MethodIr { name, parameters, body })
    }

    /// A dotted, possibly generic, possibly array type. Generic arguments
    /// are parsed and erased; `X<Y>[]` comes back as `X[]`.
    fn parse_type(&mut self) -> Result<String, SourceError> {
        let mut name = self.ident()?;
        while matches!(self.peek(), Tok::Punct("."))
            && matches!(&self.toks[self.pos + 1].tok, Tok::Ident(_))
        {
            // stop if the dot belongs to an expression — types only appear
            // where we explicitly try them, so consume greedily
            self.bump();
            name.push('.');
            name.push_str(&self.ident()?);
        }
        if self.eat_punct("<") {
            self.skip_generic_args()?;
        }
        while matches!(self.peek(), Tok::Punct("["))
            && matches!(&self.toks[self.pos + 1].tok, Tok::Punct("]"))
        {
            self.bump();
            self.bump();
            name.push_str("[]");
        }
        Ok(name)
    }

    fn skip_generic_args(&mut self) -> Result<(), SourceError> {
        // consume balanced `< ... >`; contents restricted to type syntax
        let mut depth = 1usize;
        loop {
            match self.bump() {
                Tok::Punct("<") => depth += 1,
                Tok::Punct(">") => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(());
                    }
                }
                Tok::Punct(">>") => {
                    if depth < 2 {
                        return Err(self.err("unbalanced generic arguments"));
                    }
                    depth -= 2;
                    if depth == 0 {
                        return Ok(());
                    }
                }
                Tok::Ident(_) | Tok::Punct(",") | Tok::Punct(".") | Tok::Punct("?") => {}
                Tok::Eof => return Err(self.err("unbalanced generic arguments")),
                _ => return Err(self.err("unsupported generic argument syntax")),
            }
        }
    }

    fn block(&mut self) -> Result<Vec<Statement>, SourceError> {
        self.expect_punct("{")?;
        let mut stmts = Vec::new();
        loop {
            if self.eat_punct("}") {
                return Ok(stmts);
            }
            if matches!(self.peek(), Tok::Eof) {
                return Err(self.err("unbalanced `{`"));
            }
            stmts.append(&mut self.statement()?);
        }
    }

    fn block_or_single(&mut self) -> Result<Vec<Statement>, SourceError> {
        if matches!(self.peek(), Tok::Punct("{")) {
            self.block()
        } else {
            self.statement()
        }
    }

    /// One source statement. Declarations with a general-expression
    /// initializer desugar into a declaration plus an assignment, hence the
    /// Vec return.
    fn statement(&mut self) -> Result<Vec<Statement>, SourceError> {
        let line = self.line();
        if let Tok::Ident(id) = self.peek() {
            match id.as_str() {
                "if" => return Ok(vec![self.if_statement()?]),
                "while" => {
                    self.bump();
                    self.expect_punct("(")?;
                    let cond = self.expr()?;
                    self.expect_punct(")")?;
                    let body = self.block_or_single()?;
                    return Ok(vec![Statement {
                        kind: StatementKind::While,
                        line,
                        data: StatementData::While { cond, body },
                    }]);
                }
                "do" => {
                    self.bump();
                    let body = self.block_or_single()?;
                    if !self.eat_kw("while") {
                        return Err(self.err("expected `while` after do-body"));
                    }
                    self.expect_punct("(")?;
                    let cond = self.expr()?;
                    self.expect_punct(")")?;
                    self.expect_punct(";")?;
                    return Ok(vec![Statement {
                        kind: StatementKind::DoWhile,
                        line,
                        data: StatementData::DoWhile { body, cond },
                    }]);
                }
                "for" => return Ok(vec![self.for_statement()?]),
                "switch" => return Ok(vec![self.switch_statement()?]),
                "try" => return Ok(vec![self.try_statement()?]),
                "return" => {
                    self.bump();
                    let expr = if self.eat_punct(";") {
                        None
                    } else {
                        let e = self.expr()?;
                        self.expect_punct(";")?;
                        Some(e)
                    };
                    return Ok(vec![Statement {
                        kind: StatementKind::Return,
                        line,
                        data: StatementData::Return(expr),
                    }]);
                }
                "break" => {
                    self.bump();
                    self.expect_punct(";")?;
                    return Ok(vec![Statement {
                        kind: StatementKind::Break,
                        line,
                        data: StatementData::Empty,
                    }]);
                }
                "continue" => {
                    self.bump();
                    self.expect_punct(";")?;
                    return Ok(vec![Statement {
                        kind: StatementKind::Continue,
                        line,
                        data: StatementData::Empty,
                    }]);
                }
                m if m == HOLE_MARKER => {
                    self.bump();
                    self.expect_punct(";")?;
                    self.holes += 1;
                    return Ok(vec![Statement {
                        kind: StatementKind::HoleMarker,
                        line,
                        data: StatementData::Empty,
                    }]);
                }
                _ => {}
            }
        }
        // try a declaration: Type Ident (= init)? ;
        if let Some(stmts) = self.try_declaration(line)? {
            return Ok(stmts);
        }
        // assignment or expression statement
        let expr = self.expr()?;
        self.expect_punct(";")?;
        match expr {
            Expr::Assign { target, value } => Ok(vec![Statement {
                kind: StatementKind::Assign,
                line,
                data: StatementData::Assign { target, value: *value },
            }]),
            other => Ok(vec![Statement {
                kind: StatementKind::ExprStmt,
                line,
                data: StatementData::Expr(other),
            }]),
        }
    }

    /// Attempt `Type name (= init)? ;` with backtracking.
    fn try_declaration(&mut self, line: u32) -> Result<Option<Vec<Statement>>, SourceError> {
        let save = self.pos;
        if !matches!(self.peek(), Tok::Ident(_)) {
            return Ok(None);
        }
        let ty = match self.parse_type() {
            Ok(t) => t,
            Err(_) => {
                self.pos = save;
                return Ok(None);
            }
        };
        let name = match self.peek() {
            Tok::Ident(_) => self.ident()?,
            _ => {
                self.pos = save;
                return Ok(None);
            }
        };
        if self.eat_punct(";") {
            return Ok(Some(vec![Statement {
                kind: StatementKind::VarDecl,
                line,
                data: StatementData::VarDecl { var_type: ty, name, init: None },
            }]));
        }
        if !self.eat_punct("=") {
            self.pos = save;
            return Ok(None);
        }
        let init = self.expr()?;
        self.expect_punct(";")?;
        Ok(Some(Self::declaration_with_init(line, ty, name, init)))
    }

    fn declaration_with_init(line: u32, ty: String, name: String, init: Expr) -> Vec<Statement> {
        let kind = match &init {
            Expr::Null => StatementKind::VarDeclNull,
            Expr::Literal(_) => StatementKind::VarDeclConst,
            Expr::Chain { root: ChainRoot::New { .. }, segs } if segs.is_empty() => {
                StatementKind::VarDeclNew
            }
            _ => {
                // general initializer: desugar to declaration + assignment
                return vec![
                    Statement {
                        kind: StatementKind::VarDecl,
                        line,
                        data: StatementData::VarDecl {
                            var_type: ty,
                            name: name.clone(),
                            init: None,
                        },
                    },
                    Statement {
                        kind: StatementKind::Assign,
                        line,
                        data: StatementData::Assign { target: name, value: init },
                    },
                ];
            }
        };
        vec![Statement {
            kind,
            line,
            data: StatementData::VarDecl { var_type: ty, name, init: Some(init) },
        }]
    }

    fn if_statement(&mut self) -> Result<Statement, SourceError> {
        let line = self.line();
        self.bump(); // `if`
        self.expect_punct("(")?;
        let cond = self.expr()?;
        self.expect_punct(")")?;
        let then_block = self.block_or_single()?;
        let else_branch = if self.eat_kw("else") {
            if self.peek_kw("if") {
                Some(ElseBranch::ElseIf(Box::new(self.if_statement()?)))
            } else {
                Some(ElseBranch::Else(self.block_or_single()?))
            }
        } else {
            None
        };
        Ok(Statement {
            kind: StatementKind::If,
            line,
            data: StatementData::If { cond, then_block, else_branch },
        })
    }

    fn for_statement(&mut self) -> Result<Statement, SourceError> {
        let line = self.line();
        self.bump(); // `for`
        self.expect_punct("(")?;
        // foreach: `Type name : expr`
        let save = self.pos;
        if matches!(self.peek(), Tok::Ident(_)) {
            if let Ok(ty) = self.parse_type() {
                if let Tok::Ident(_) = self.peek() {
                    let vname = self.ident()?;
                    if self.eat_punct(":") {
                        let iterable = self.expr()?;
                        self.expect_punct(")")?;
                        let body = self.block_or_single()?;
                        return Ok(Statement {
                            kind: StatementKind::Foreach,
                            line,
                            data: StatementData::Foreach {
                                var_type: ty,
                                var_name: vname,
                                iterable,
                                body,
                            },
                        });
                    }
                }
            }
        }
        self.pos = save;
        let init = if self.eat_punct(";") {
            None
        } else {
            let mut stmts = match self.try_declaration(line)? {
                Some(s) => s,
                None => {
                    let e = self.expr()?;
                    self.expect_punct(";")?;
                    vec![Statement {
                        kind: StatementKind::ExprStmt,
                        line,
                        data: StatementData::Expr(e),
                    }]
                }
            };
            if stmts.len() != 1 {
                return Err(SourceError::Syntax {
                    line,
                    message: "unsupported for-loop initializer".into(),
                });
            }
            Some(Box::new(stmts.remove(0)))
        };
        let cond = if matches!(self.peek(), Tok::Punct(";")) { None } else { Some(self.expr()?) };
        self.expect_punct(";")?;
        let mut update = Vec::new();
        if !matches!(self.peek(), Tok::Punct(")")) {
            loop {
                update.push(self.expr()?);
                if !self.eat_punct(",") {
                    break;
                }
            }
        }
        self.expect_punct(")")?;
        let body = self.block_or_single()?;
        Ok(Statement {
            kind: StatementKind::For,
            line,
            data: StatementData::For { init, cond, update, body },
        })
    }

    fn switch_statement(&mut self) -> Result<Statement, SourceError> {
        let line = self.line();
        self.bump(); // `switch`
        self.expect_punct("(")?;
        let selector = self.expr()?;
        self.expect_punct(")")?;
        self.expect_punct("{")?;
        let mut cases = Vec::new();
        let mut default = None;
        loop {
            if self.eat_punct("}") {
                break;
            }
            if self.eat_kw("case") {
                let label = self.expr()?;
                self.expect_punct(":")?;
                cases.push(SwitchCase { label, body: self.case_body()? });
            } else if self.eat_kw("default") {
                self.expect_punct(":")?;
                if default.is_some() {
                    return Err(self.err("duplicate default label"));
                }
                default = Some(self.case_body()?);
            } else {
                return Err(self.err("expected `case`, `default` or `}` in switch"));
            }
        }
        Ok(Statement {
            kind: StatementKind::Switch,
            line,
            data: StatementData::Switch { selector, cases, default },
        })
    }

    fn case_body(&mut self) -> Result<Vec<Statement>, SourceError> {
        let mut stmts = Vec::new();
        loop {
            match self.peek() {
                Tok::Punct("}") => break,
                Tok::Ident(id) if id == "case" || id == "default" => break,
                Tok::Eof => return Err(self.err("unbalanced `{` in switch")),
                _ => stmts.append(&mut self.statement()?),
            }
        }
        Ok(stmts)
    }

    fn try_statement(&mut self) -> Result<Statement, SourceError> {
        let line = self.line();
        self.bump(); // `try`
        if !matches!(self.peek(), Tok::Punct("{")) {
            return Err(self.err("try-with-resources is not supported"));
        }
        let body = self.block()?;
        let mut catches = Vec::new();
        while self.eat_kw("catch") {
            self.expect_punct("(")?;
            let exc_type = self.parse_type()?;
            let var_name = self.ident()?;
            self.expect_punct(")")?;
            let cbody = self.block()?;
            catches.push(CatchClause { exc_type, var_name, body: cbody });
        }
        let finally = if self.eat_kw("finally") { Some(self.block()?) } else { None };
        if catches.is_empty() && finally.is_none() {
            return Err(self.err("try without catch or finally"));
        }
        Ok(Statement {
            kind: StatementKind::Try,
            line,
            data: StatementData::Try { body, catches, finally },
        })
    }

    // ---- expressions ----

    fn expr(&mut self) -> Result<Expr, SourceError> {
        self.assignment()
    }

    fn assignment(&mut self) -> Result<Expr, SourceError> {
        let lhs = self.binary(0)?;
        if matches!(self.peek(), Tok::Punct("=")) {
            let target = match lhs.as_var() {
                Some(v) => v.to_string(),
                None => return Err(self.err("assignment target must be a variable")),
            };
            self.bump();
            let value = self.assignment()?;
            return Ok(Expr::Assign { target, value: Box::new(value) });
        }
        for op in ["+=", "-=", "*=", "/=", "%="] {
            if matches!(self.peek(), Tok::Punct(p) if *p == op) {
                let target = match lhs.as_var() {
                    Some(v) => v.to_string(),
                    None => return Err(self.err("assignment target must be a variable")),
                };
                self.bump();
                let value = self.assignment()?;
                // `x op= v` reads and writes x
                let read = Expr::Chain { root: ChainRoot::Name(target.clone()), segs: vec![] };
                return Ok(Expr::Assign {
                    target,
                    value: Box::new(Expr::Binary {
                        op: op[..1].to_string(),
                        lhs: Box::new(read),
                        rhs: Box::new(value),
                    }),
                });
            }
        }
        Ok(lhs)
    }

    fn binary(&mut self, min_level: usize) -> Result<Expr, SourceError> {
        const LEVELS: &[&[&str]] = &[
            &["||"],
            &["&&"],
            &["|"],
            &["^"],
            &["&"],
            &["==", "!="],
            &["<", ">", "<=", ">="],
            &["+", "-"],
            &["*", "/", "%"],
        ];
        if min_level >= LEVELS.len() {
            return self.unary();
        }
        let mut lhs = self.binary(min_level + 1)?;
        loop {
            let mut hit = None;
            if let Tok::Punct(p) = self.peek() {
                if LEVELS[min_level].contains(p) {
                    hit = Some(p.to_string());
                }
            }
            match hit {
                Some(op) => {
                    self.bump();
                    let rhs = self.binary(min_level + 1)?;
                    lhs = Expr::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) };
                }
                None => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, SourceError> {
        for op in ["!", "-", "+", "++", "--"] {
            if matches!(self.peek(), Tok::Punct(p) if *p == op) {
                self.bump();
                let inner = self.unary()?;
                return Ok(Expr::Unary { op: op.into(), expr: Box::new(inner), postfix: false });
            }
        }
        self.postfix()
    }

    fn postfix(&mut self) -> Result<Expr, SourceError> {
        let expr = self.postfix_inner()?;
        // a parenthesized expression with no member access collapses to its
        // contents, so printing and re-parsing preserves structure
        match expr {
            Expr::Chain { root: ChainRoot::Paren(inner), segs } if segs.is_empty() => Ok(*inner),
            other => Ok(other),
        }
    }

    fn postfix_inner(&mut self) -> Result<Expr, SourceError> {
        let mut expr = self.primary()?;
        loop {
            if self.eat_punct(".") {
                let name = self.ident()?;
                let args = if self.eat_punct("(") { Some(self.call_args()?) } else { None };
                expr = match expr {
                    Expr::Chain { root, mut segs } => {
                        segs.push(ChainSeg { name, args });
                        Expr::Chain { root, segs }
                    }
                    other => Expr::Chain {
                        root: ChainRoot::Paren(Box::new(other)),
                        segs: vec![ChainSeg { name, args }],
                    },
                };
                continue;
            }
            if self.eat_punct("[") {
                let index = self.expr()?;
                self.expect_punct("]")?;
                expr = Expr::Index { target: Box::new(expr), index: Box::new(index) };
                continue;
            }
            if matches!(self.peek(), Tok::Punct("++")) || matches!(self.peek(), Tok::Punct("--")) {
                let op = if self.eat_punct("++") {
                    "++"
                } else {
                    self.bump();
                    "--"
                };
                expr = Expr::Unary { op: op.into(), expr: Box::new(expr), postfix: true };
                continue;
            }
            return Ok(expr);
        }
    }

    fn call_args(&mut self) -> Result<Vec<Expr>, SourceError> {
        let mut args = Vec::new();
        if self.eat_punct(")") {
            return Ok(args);
        }
        loop {
            args.push(self.expr()?);
            if self.eat_punct(")") {
                return Ok(args);
            }
            self.expect_punct(",")?;
        }
    }

    fn primary(&mut self) -> Result<Expr, SourceError> {
        let line = self.line();
        match self.bump() {
            Tok::Str(s) => Ok(Expr::Literal(Literal::Str(s))),
            Tok::Char(c) => Ok(Expr::Literal(Literal::Char(c))),
            Tok::Int(v) => Ok(Expr::Literal(Literal::Int(v))),
            Tok::Long(v) => Ok(Expr::Literal(Literal::Long(v))),
            Tok::Float(v) => Ok(Expr::Literal(Literal::Float(v))),
            Tok::Double(v) => Ok(Expr::Literal(Literal::Double(v))),
            Tok::Punct("(") => {
                let inner = self.expr()?;
                self.expect_punct(")")?;
                Ok(Expr::Chain { root: ChainRoot::Paren(Box::new(inner)), segs: vec![] })
            }
            Tok::Ident(id) => match id.as_str() {
                "null" => Ok(Expr::Null),
                "true" => Ok(Expr::Literal(Literal::Bool(true))),
                "false" => Ok(Expr::Literal(Literal::Bool(false))),
                "new" => {
                    let class_name = self.new_type_name()?;
                    if self.eat_punct("[") {
                        let len = self.expr()?;
                        self.expect_punct("]")?;
                        return Ok(Expr::NewArray { elem_type: class_name, len: Box::new(len) });
                    }
                    self.expect_punct("(")?;
                    let args = self.call_args()?;
                    Ok(Expr::Chain { root: ChainRoot::New { class_name, args }, segs: vec![] })
                }
                _ => {
                    if self.eat_punct("(") {
                        let args = self.call_args()?;
                        Ok(Expr::Chain { root: ChainRoot::Call { name: id, args }, segs: vec![] })
                    } else {
                        Ok(Expr::Chain { root: ChainRoot::Name(id), segs: vec![] })
                    }
                }
            },
            t => Err(SourceError::Syntax {
                line,
                message: format!("unexpected token in expression: {t:?}"),
            }),
        }
    }

    /// Type after `new`: dotted name plus erased generics; no trailing
    /// array brackets (those are handled by the caller).
    fn new_type_name(&mut self) -> Result<String, SourceError> {
        let mut name = self.ident()?;
        while matches!(self.peek(), Tok::Punct("."))
            && matches!(&self.toks[self.pos + 1].tok, Tok::Ident(_))
        {
            self.bump();
            name.push('.');
            name.push_str(&self.ident()?);
        }
        if self.eat_punct("<") {
            self.skip_generic_args()?;
        }
        Ok(name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_single_declaration() {
        let m = parse_method("void f(){ String s; }").unwrap();
        assert_eq!(m.name, "f");
        assert_eq!(m.body.len(), 1);
        assert_eq!(m.body[0].kind, StatementKind::VarDecl);
    }

    #[test]
    fn rejects_unbalanced_brace() {
        let err = parse_method("void f(){").unwrap_err();
        assert!(matches!(err, SourceError::Syntax { .. }));
    }

    #[test]
    fn rejects_two_holes() {
        let err = parse_method("void f(){ __HOLE__; __HOLE__; }").unwrap_err();
        assert!(matches!(err, SourceError::MultipleHoles { count: 2 }));
    }

    #[test]
    fn classifies_declaration_kinds() {
        let m = parse_method(
            "void f(){ String a; String b = \"x\"; String c = null; java.io.File d = new java.io.File(b); }",
        )
        .unwrap();
        let kinds: Vec<_> = m.body.iter().map(|s| s.kind).collect();
        assert_eq!(
            kinds,
            vec![
                StatementKind::VarDecl,
                StatementKind::VarDeclConst,
                StatementKind::VarDeclNull,
                StatementKind::VarDeclNew
            ]
        );
    }

    #[test]
    fn desugars_declaration_with_call_initializer() {
        let m = parse_method("void f(java.io.BufferedReader br){ String s = br.readLine(); }")
            .unwrap();
        let kinds: Vec<_> = m.body.iter().map(|s| s.kind).collect();
        assert_eq!(kinds, vec![StatementKind::VarDecl, StatementKind::Assign]);
    }

    #[test]
    fn parses_assignment_in_condition() {
        let m =
            parse_method("void f(java.io.BufferedReader br){ String s = null; while ((s = br.readLine()) != null) { s.length(); } }")
                .unwrap();
        assert_eq!(m.body[1].kind, StatementKind::While);
    }

    #[test]
    fn erases_generics() {
        let m = parse_method("void f(){ java.util.ArrayList<Integer> r = new java.util.ArrayList<Integer>(); }").unwrap();
        match &m.body[0].data {
            StatementData::VarDecl { var_type, .. } => assert_eq!(var_type, "java.util.ArrayList"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn keeps_statement_source_lines() {
        let m = parse_method("void f(){\n  String a;\n  String b;\n}").unwrap();
        assert_eq!(m.body[0].line, 2);
        assert_eq!(m.body[1].line, 3);
    }
}
