//! Statement-level intermediate representation of a parsed method.

/// One parsed method: name, parameters, body and the lexical type
/// environment built from declarations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodIr {
    pub name: String,
    /// Ordered (name, declared type) pairs.
    pub parameters: Vec<(String, String)>,
    pub body: Vec<Statement>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatementKind {
    VarDecl,
    VarDeclConst,
    VarDeclNull,
    VarDeclNew,
    Assign,
    ExprStmt,
    If,
    While,
    DoWhile,
    For,
    Foreach,
    Switch,
    Try,
    Return,
    Break,
    Continue,
    HoleMarker,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub kind: StatementKind,
    pub line: u32,
    pub data: StatementData,
}

/// Kind-specific payload. Control kinds carry exactly the sub-blocks their
/// expansion rules require.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StatementData {
    /// `Type name;` / `Type name = <init>;`. `init` is `None` for a plain
    /// declaration, the literal for Const, `Expr::Null` for Null, the
    /// creation expression for New.
    VarDecl {
        var_type: String,
        name: String,
        init: Option<Expr>,
    },
    /// `target op= value;` — target is a variable name (field paths are
    /// parsed as expression statements).
    Assign { target: String, value: Expr },
    Expr(Expr),
    If {
        cond: Expr,
        then_block: Vec<Statement>,
        else_branch: Option<ElseBranch>,
    },
    While {
        cond: Expr,
        body: Vec<Statement>,
    },
    DoWhile {
        body: Vec<Statement>,
        cond: Expr,
    },
    For {
        init: Option<Box<Statement>>,
        cond: Option<Expr>,
        update: Vec<Expr>,
        body: Vec<Statement>,
    },
    Foreach {
        var_type: String,
        var_name: String,
        iterable: Expr,
        body: Vec<Statement>,
    },
    Switch {
        selector: Expr,
        cases: Vec<SwitchCase>,
        default: Option<Vec<Statement>>,
    },
    Try {
        body: Vec<Statement>,
        catches: Vec<CatchClause>,
        finally: Option<Vec<Statement>>,
    },
    Return(Option<Expr>),
    /// Break, Continue, HoleMarker.
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElseBranch {
    ElseIf(Box<Statement>),
    Else(Vec<Statement>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchCase {
    pub label: Expr,
    pub body: Vec<Statement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatchClause {
    pub exc_type: String,
    pub var_name: String,
    pub body: Vec<Statement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Literal {
    Str(String),
    Char(char),
    Int(String),
    Long(String),
    Float(String),
    Double(String),
    Bool(bool),
}

impl Literal {
    /// Declared type used when matching the literal against catalog
    /// parameter types.
    pub fn type_name(&self) -> &'static str {
        match self {
            Literal::Str(_) => "java.lang.String",
            Literal::Char(_) => "char",
            Literal::Int(_) => "int",
            Literal::Long(_) => "long",
            Literal::Float(_) => "float",
            Literal::Double(_) => "double",
            Literal::Bool(_) => "boolean",
        }
    }
}

/// Root of a postfix chain like `a.b(x).c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainRoot {
    /// Bare identifier: a variable or the head of a (possibly qualified)
    /// class name.
    Name(String),
    /// Unqualified call `f(args)`; no receiver to resolve against.
    Call { name: String, args: Vec<Expr> },
    /// `new Type(args)`.
    New { class_name: String, args: Vec<Expr> },
    Paren(Box<Expr>),
}

/// One `.name` or `.name(args)` segment of a chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSeg {
    pub name: String,
    /// `None` marks a field access segment.
    pub args: Option<Vec<Expr>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Literal(Literal),
    Null,
    Chain {
        root: ChainRoot,
        segs: Vec<ChainSeg>,
    },
    /// Assignment expression, e.g. inside a loop condition.
    Assign {
        target: String,
        value: Box<Expr>,
    },
    Binary {
        op: String,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Unary {
        op: String,
        expr: Box<Expr>,
        /// postfix `x++` / `x--` when true
        postfix: bool,
    },
    Index {
        target: Box<Expr>,
        index: Box<Expr>,
    },
    NewArray {
        elem_type: String,
        len: Box<Expr>,
    },
}

impl Expr {
    /// Plain variable reference, if this expression is exactly one.
    pub fn as_var(&self) -> Option<&str> {
        match self {
            Expr::Chain { root: ChainRoot::Name(n), segs } if segs.is_empty() => Some(n),
            _ => None,
        }
    }
}

impl MethodIr {
    /// All statements in pre-order, paired with their global statement index.
    pub fn walk(&self) -> Vec<(usize, &Statement)> {
        let mut out = Vec::new();
        fn go<'a>(stmts: &'a [Statement], out: &mut Vec<(usize, &'a Statement)>) {
            for s in stmts {
                let idx = out.len();
                out.push((idx, s));
                let mut push_block = |b: &'a [Statement]| go(b, out);
                match &s.data {
                    StatementData::If { then_block, else_branch, .. } => {
                        push_block(then_block);
                        match else_branch {
                            Some(ElseBranch::ElseIf(inner)) => go(std::slice::from_ref(inner), out),
                            Some(ElseBranch::Else(b)) => go(b, out),
                            None => {}
                        }
                    }
                    StatementData::While { body, .. }
                    | StatementData::DoWhile { body, .. }
                    | StatementData::Foreach { body, .. } => push_block(body),
                    // The for-loop header (init/cond/update) belongs to the
                    // For statement itself; only the body introduces new
                    // statement indices.
                    StatementData::For { body, .. } => push_block(body),
                    StatementData::Switch { cases, default, .. } => {
                        for c in cases {
                            go(&c.body, out);
                        }
                        if let Some(d) = default {
                            go(d, out);
                        }
                    }
                    StatementData::Try { body, catches, finally } => {
                        push_block(body);
                        for c in catches {
                            go(&c.body, out);
                        }
                        if let Some(f) = finally {
                            go(f, out);
                        }
                    }
                    _ => {}
                }
            }
        }
        go(&self.body, &mut out);
        out
    }

    /// Total number of statements, counting nested blocks.
    pub fn statement_count(&self) -> usize {
        self.walk().len()
    }
}
