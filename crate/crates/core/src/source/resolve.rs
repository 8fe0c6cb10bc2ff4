//! Declared-type resolution of call / creation / field-access sites.
//!
//! The resolver walks a parsed method with a scoped type environment and
//! produces, for every statement, an ordered event stream: one event per
//! labelable site (in evaluation order, nested arguments before the
//! enclosing call) plus definition events for assignments that produce no
//! site. Cascading chains collapse into a single composite site; nested
//! calls in argument position become their own sites.

use std::collections::BTreeSet;

use super::ast::*;
use super::catalog::{is_primitive, ApiCatalog, ApiSignature, MemberKind};

#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedRef {
    pub signature: ApiSignature,
    pub receiver_var: Option<String>,
    /// One slot per argument; `Some` when the argument is a plain variable.
    pub arg_vars: Vec<Option<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiteKind {
    Declaration,
    Constant,
    Null,
    Creation,
    Call,
    FieldAccess,
}

impl SiteKind {
    /// Creation, call and field-access sites count as API invocations;
    /// bare declarations do not.
    pub fn is_invocation(self) -> bool {
        matches!(self, SiteKind::Creation | SiteKind::Call | SiteKind::FieldAccess)
    }
}

/// One graph-node-to-be.
#[derive(Debug, Clone, PartialEq)]
pub struct Site {
    pub label: String,
    pub kind: SiteKind,
    pub refs: Vec<ResolvedRef>,
    /// Variables this site reads (receiver and plain/floating argument uses).
    pub uses: Vec<String>,
    /// Variables whose latest definition this site becomes.
    pub defs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SiteEvent {
    Site(Site),
    /// An assignment whose right-hand side produced no site; the variable's
    /// previous definition node no longer applies.
    NodelessDef(String),
}

/// Per-statement resolution output, indexed by `MethodIr::walk` order.
#[derive(Debug, Clone, Default)]
pub struct StatementSites {
    /// Sites of the statement itself (for control statements: the header —
    /// condition, for-init/update, foreach iterable and loop variable).
    pub events: Vec<SiteEvent>,
}

#[derive(Debug, Clone)]
pub struct ResolvedMethod {
    pub ir: MethodIr,
    /// Parallel to `ir.walk()` statement indices.
    pub statements: Vec<StatementSites>,
    /// Catalog-or-primitive-typed names referenced per statement.
    pub stmt_names: Vec<BTreeSet<String>>,
    /// Method name followed by eligible parameter/variable names, source order.
    pub names: Vec<String>,
}

impl ResolvedMethod {
    pub fn has_invocation(&self) -> bool {
        self.statements.iter().any(|s| {
            s.events.iter().any(|e| match e {
                SiteEvent::Site(site) => site.kind.is_invocation(),
                _ => false,
            })
        })
    }
}

struct Scope {
    // (name, declared type, eligible)
    vars: Vec<(String, String, bool)>,
    marks: Vec<usize>,
}

impl Scope {
    fn new() -> Self {
        Scope { vars: Vec::new(), marks: Vec::new() }
    }
    fn push(&mut self) {
        self.marks.push(self.vars.len());
    }
    fn pop(&mut self) {
        let m = self.marks.pop().unwrap_or(0);
        self.vars.truncate(m);
    }
    fn declare(&mut self, name: &str, ty: &str, eligible: bool) {
        self.vars.push((name.to_string(), ty.to_string(), eligible));
    }
    fn lookup(&self, name: &str) -> Option<(&str, bool)> {
        self.vars
            .iter()
            .rev()
            .find(|(n, _, _)| n == name)
            .map(|(_, t, e)| (t.as_str(), *e))
    }
}

struct Resolver<'a> {
    catalog: &'a ApiCatalog,
    scope: Scope,
    statements: Vec<StatementSites>,
    stmt_names: Vec<BTreeSet<String>>,
    names: Vec<String>,
    cur_stmt: usize,
}

/// Annotate every call/creation/field-access site of `m` against `catalog`.
/// Non-catalog sites are kept as floating uses, not errors.
pub fn resolve_apis(m: &MethodIr, catalog: &ApiCatalog) -> ResolvedMethod {
    let stmt_count = m.statement_count();
    let mut r = Resolver {
        catalog,
        scope: Scope::new(),
        statements: vec![StatementSites::default(); stmt_count],
        stmt_names: vec![BTreeSet::new(); stmt_count],
        names: vec![m.name.clone()],
        cur_stmt: 0,
    };
    r.scope.push();
    for (name, ty) in &m.parameters {
        let eligible = r.eligible(ty);
        r.scope.declare(name, ty, eligible);
        if eligible {
            r.push_name(name);
        }
    }
    let mut idx = 0usize;
    r.resolve_block(&m.body, &mut idx);
    r.scope.pop();
    ResolvedMethod {
        ir: m.clone(),
        statements: r.statements,
        stmt_names: r.stmt_names,
        names: r.names,
    }
}

impl<'a> Resolver<'a> {
    fn eligible(&self, ty: &str) -> bool {
        is_primitive(ty) || self.catalog.is_known_class(ty)
    }

    fn push_name(&mut self, name: &str) {
        if !self.names.iter().any(|n| n == name) {
            self.names.push(name.to_string());
        }
    }

    fn note_name(&mut self, name: &str) {
        self.stmt_names[self.cur_stmt].insert(name.to_string());
    }

    /// Record a variable reference: statement-level name tracking plus the
    /// floating-use list used for data-flow attachment.
    fn touch_var(&mut self, name: &str, floats: &mut Vec<String>) {
        if let Some((_, eligible)) = self.scope.lookup(name) {
            if eligible {
                self.note_name(name);
            }
            floats.push(name.to_string());
        }
    }

    fn declare_var(&mut self, name: &str, ty: &str) -> bool {
        let eligible = self.eligible(ty);
        self.scope.declare(name, ty, eligible);
        if eligible {
            self.push_name(name);
            self.note_name(name);
        }
        eligible
    }

    fn emit(&mut self, ev: SiteEvent) {
        self.statements[self.cur_stmt].events.push(ev);
    }

    fn resolve_block(&mut self, stmts: &[Statement], idx: &mut usize) {
        self.scope.push();
        for s in stmts {
            self.resolve_statement(s, idx);
        }
        self.scope.pop();
    }

    fn resolve_statement(&mut self, s: &Statement, idx: &mut usize) {
        let my_idx = *idx;
        *idx += 1;
        self.cur_stmt = my_idx;
        match &s.data {
            StatementData::VarDecl { var_type, name, init } => {
                self.resolve_declaration(var_type, name, init.as_ref());
            }
            StatementData::Assign { target, value } => {
                self.resolve_assignment(target, value);
            }
            StatementData::Expr(e) | StatementData::Return(Some(e)) => {
                let mut floats = Vec::new();
                self.visit(e, &mut floats);
                self.attach_or_drop(floats);
            }
            StatementData::Return(None) | StatementData::Empty => {}
            StatementData::If { cond, then_block, else_branch } => {
                let mut floats = Vec::new();
                self.visit(cond, &mut floats);
                self.attach_or_drop(floats);
                self.resolve_block(then_block, idx);
                match else_branch {
                    Some(ElseBranch::ElseIf(inner)) => {
                        self.resolve_statement(inner, idx);
                    }
                    Some(ElseBranch::Else(b)) => self.resolve_block(b, idx),
                    None => {}
                }
            }
            StatementData::While { cond, body } | StatementData::DoWhile { body, cond } => {
                let mut floats = Vec::new();
                self.visit(cond, &mut floats);
                self.attach_or_drop(floats);
                self.resolve_block(body, idx);
            }
            StatementData::For { init, cond, update, body } => {
                self.scope.push();
                if let Some(init_stmt) = init {
                    // header shares the For statement's index
                    match &init_stmt.data {
                        StatementData::VarDecl { var_type, name, init } => {
                            self.resolve_declaration(var_type, name, init.as_ref())
                        }
                        StatementData::Assign { target, value } => {
                            self.resolve_assignment(target, value)
                        }
                        StatementData::Expr(e) => {
                            let mut floats = Vec::new();
                            self.visit(e, &mut floats);
                            self.attach_or_drop(floats);
                        }
                        _ => {}
                    }
                    self.cur_stmt = my_idx;
                }
                if let Some(c) = cond {
                    let mut floats = Vec::new();
                    self.visit(c, &mut floats);
                    self.attach_or_drop(floats);
                }
                for u in update {
                    let mut floats = Vec::new();
                    self.visit(u, &mut floats);
                    self.attach_or_drop(floats);
                }
                self.resolve_block(body, idx);
                self.scope.pop();
            }
            StatementData::Foreach { var_type, var_name, iterable, body } => {
                self.scope.push();
                let mut floats = Vec::new();
                self.visit(iterable, &mut floats);
                self.attach_or_drop(floats);
                let eligible = self.declare_var(var_name, var_type);
                if eligible {
                    if let Some(site) = self.declaration_site(var_type, var_name) {
                        self.emit(SiteEvent::Site(site));
                    } else {
                        self.emit(SiteEvent::NodelessDef(var_name.clone()));
                    }
                } else {
                    self.emit(SiteEvent::NodelessDef(var_name.clone()));
                }
                self.resolve_block(body, idx);
                self.scope.pop();
            }
            StatementData::Switch { selector, cases, default } => {
                let mut floats = Vec::new();
                self.visit(selector, &mut floats);
                self.attach_or_drop(floats);
                for c in cases {
                    self.resolve_block(&c.body, idx);
                }
                if let Some(d) = default {
                    self.resolve_block(d, idx);
                }
            }
            StatementData::Try { body, catches, finally } => {
                self.resolve_block(body, idx);
                for c in catches {
                    self.scope.push();
                    self.cur_stmt = my_idx;
                    self.declare_var(&c.var_name, &c.exc_type);
                    self.resolve_block(&c.body, idx);
                    self.scope.pop();
                }
                if let Some(f) = finally {
                    self.resolve_block(f, idx);
                }
            }
        }
    }

    /// Floating uses with no site in this statement produce no data-flow
    /// edge; attach them to the statement's last site when one exists so
    /// condition receivers still flow.
    fn attach_or_drop(&mut self, floats: Vec<String>) {
        if floats.is_empty() {
            return;
        }
        if let Some(SiteEvent::Site(last)) =
            self.statements[self.cur_stmt].events.iter_mut().rev().find(|e| matches!(e, SiteEvent::Site(_)))
        {
            for f in floats {
                if !last.uses.contains(&f) {
                    last.uses.push(f);
                }
            }
        }
    }

    fn declaration_site(&self, var_type: &str, name: &str) -> Option<Site> {
        let ty = self.canonical_type(var_type)?;
        Some(Site {
            label: format!("{ty}.Declaration"),
            kind: SiteKind::Declaration,
            refs: vec![],
            uses: vec![],
            defs: vec![name.to_string()],
        })
    }

    /// Primitive names pass through; class names canonicalize to the
    /// catalog's fully qualified form.
    fn canonical_type(&self, ty: &str) -> Option<String> {
        if is_primitive(ty) {
            return Some(ty.to_string());
        }
        self.catalog.resolve_class(ty).map(|s| s.to_string())
    }

    fn resolve_declaration(&mut self, var_type: &str, name: &str, init: Option<&Expr>) {
        let eligible = self.declare_var(name, var_type);
        match init {
            None => {
                if eligible {
                    if let Some(site) = self.declaration_site(var_type, name) {
                        self.emit(SiteEvent::Site(site));
                        return;
                    }
                }
                self.emit(SiteEvent::NodelessDef(name.to_string()));
            }
            Some(Expr::Null) => {
                match self.canonical_type(var_type).filter(|_| eligible) {
                    Some(ty) => self.emit(SiteEvent::Site(Site {
                        label: format!("{ty}.Null"),
                        kind: SiteKind::Null,
                        refs: vec![],
                        uses: vec![],
                        defs: vec![name.to_string()],
                    })),
                    None => self.emit(SiteEvent::NodelessDef(name.to_string())),
                }
            }
            Some(Expr::Literal(_)) => {
                match self.canonical_type(var_type).filter(|_| eligible) {
                    Some(ty) => self.emit(SiteEvent::Site(Site {
                        label: format!("{ty}.Constant"),
                        kind: SiteKind::Constant,
                        refs: vec![],
                        uses: vec![],
                        defs: vec![name.to_string()],
                    })),
                    None => self.emit(SiteEvent::NodelessDef(name.to_string())),
                }
            }
            Some(init_expr) => {
                // object creation: the creation site doubles as the
                // definition of the declared variable
                let mut floats = Vec::new();
                let emitted = self.visit(init_expr, &mut floats);
                self.attach_or_drop(floats);
                match emitted {
                    Some(pos) => {
                        if let SiteEvent::Site(site) =
                            &mut self.statements[self.cur_stmt].events[pos]
                        {
                            site.defs.push(name.to_string());
                        }
                    }
                    None => self.emit(SiteEvent::NodelessDef(name.to_string())),
                }
            }
        }
    }

    fn resolve_assignment(&mut self, target: &str, value: &Expr) {
        self.note_assign_target(target);
        let mut floats = Vec::new();
        let emitted = self.visit(value, &mut floats);
        self.attach_or_drop(floats);
        match emitted {
            Some(pos) => {
                if let SiteEvent::Site(site) = &mut self.statements[self.cur_stmt].events[pos] {
                    site.defs.push(target.to_string());
                }
            }
            None => self.emit(SiteEvent::NodelessDef(target.to_string())),
        }
    }

    fn note_assign_target(&mut self, target: &str) {
        if let Some((_, eligible)) = self.scope.lookup(target) {
            if eligible {
                self.note_name(target);
            }
        }
    }

    /// Visit an expression, emitting sites in evaluation order. Returns the
    /// event index of the site representing the expression's value, when
    /// one exists. `floats` collects variable uses not attached to any
    /// emitted site.
    fn visit(&mut self, e: &Expr, floats: &mut Vec<String>) -> Option<usize> {
        match e {
            Expr::Literal(_) | Expr::Null => None,
            Expr::Assign { target, value } => {
                self.note_assign_target(target);
                let emitted = self.visit(value, floats);
                match emitted {
                    Some(pos) => {
                        if let SiteEvent::Site(site) =
                            &mut self.statements[self.cur_stmt].events[pos]
                        {
                            site.defs.push(target.clone());
                        }
                        Some(pos)
                    }
                    None => {
                        self.emit(SiteEvent::NodelessDef(target.clone()));
                        None
                    }
                }
            }
            Expr::Binary { lhs, rhs, .. } => {
                self.visit(lhs, floats);
                self.visit(rhs, floats);
                None
            }
            Expr::Unary { expr, op, postfix: _ } => {
                let r = self.visit(expr, floats);
                if op == "++" || op == "--" {
                    if let Some(v) = expr.as_var() {
                        self.note_assign_target(v);
                        self.emit(SiteEvent::NodelessDef(v.to_string()));
                    }
                }
                r
            }
            Expr::Index { target, index } => {
                self.visit(target, floats);
                self.visit(index, floats);
                None
            }
            Expr::NewArray { len, .. } => {
                self.visit(len, floats);
                None
            }
            Expr::Chain { root, segs } => self.visit_chain(root, segs, floats),
        }
    }

    fn visit_args(&mut self, args: &[Expr], uses: &mut Vec<String>) -> Vec<Option<String>> {
        let mut arg_vars = Vec::new();
        for a in args {
            arg_vars.push(a.as_var().map(|s| s.to_string()));
            if let Some(v) = a.as_var() {
                self.touch_var(v, uses);
            } else {
                let mut inner = Vec::new();
                self.visit(a, &mut inner);
                // uses inside nested site-producing expressions stay there;
                // the rest belong to the enclosing call
                uses.append(&mut inner);
            }
        }
        arg_vars
    }

    fn visit_chain(
        &mut self,
        root: &ChainRoot,
        segs: &[ChainSeg],
        floats: &mut Vec<String>,
    ) -> Option<usize> {
        // establish the starting point for member resolution
        let mut seg_start = 0usize;
        let mut receiver_var: Option<String> = None;
        let mut current_type: Option<String> = None;
        let mut root_uses: Vec<String> = Vec::new();
        let mut events: Vec<usize> = Vec::new();

        match root {
            ChainRoot::Name(name) => {
                if let Some((ty, _)) = self.scope.lookup(name) {
                    let ty = ty.to_string();
                    receiver_var = Some(name.clone());
                    self.touch_var(name, &mut root_uses);
                    current_type = self.canonical_type(&ty);
                } else {
                    // longest dotted prefix naming a catalog class
                    let mut best: Option<(usize, String)> = None;
                    let mut prefix = name.clone();
                    if let Some(fq) = self.catalog.resolve_class(&prefix) {
                        best = Some((0, fq.to_string()));
                    }
                    for (k, seg) in segs.iter().enumerate() {
                        if seg.args.is_some() {
                            break;
                        }
                        prefix.push('.');
                        prefix.push_str(&seg.name);
                        if let Some(fq) = self.catalog.resolve_class(&prefix) {
                            best = Some((k + 1, fq.to_string()));
                        }
                    }
                    if let Some((k, fq)) = best {
                        seg_start = k;
                        current_type = Some(fq);
                    }
                }
            }
            ChainRoot::Call { args, .. } => {
                // unqualified call: arguments still get visited, the call
                // itself cannot be resolved
                let mut uses = Vec::new();
                self.visit_args(args, &mut uses);
                floats.append(&mut uses);
            }
            ChainRoot::New { class_name, args } => {
                let mut uses = Vec::new();
                let arg_vars = self.visit_args(args, &mut uses);
                match self.resolve_creation(class_name, args) {
                    Some(sig) => {
                        let fq = sig.fq_class.clone();
                        let site = Site {
                            label: sig.label_text(),
                            kind: SiteKind::Creation,
                            refs: vec![ResolvedRef { signature: sig, receiver_var: None, arg_vars }],
                            uses,
                            defs: vec![],
                        };
                        self.emit(SiteEvent::Site(site));
                        events.push(self.statements[self.cur_stmt].events.len() - 1);
                        current_type = Some(fq);
                    }
                    None => {
                        floats.append(&mut uses);
                        current_type = self.canonical_type(class_name);
                    }
                }
            }
            ChainRoot::Paren(inner) => {
                let emitted = self.visit(inner, floats);
                if let Some(pos) = emitted {
                    events.push(pos);
                }
                current_type = self.expr_type(inner);
            }
        }

        if segs.len() == seg_start {
            // bare variable (or pure class reference): any use floats to
            // the enclosing context
            floats.append(&mut root_uses);
            return events.last().copied();
        }

        // walk the member segments, collapsing cascades into one site
        let mut label = String::new();
        let mut refs: Vec<ResolvedRef> = Vec::new();
        let mut uses: Vec<String> = root_uses;
        let mut kind = SiteKind::FieldAccess;
        let mut resolved_any = false;
        for (i, seg) in segs.iter().enumerate().skip(seg_start) {
            let mut seg_uses = Vec::new();
            let arg_vars = match &seg.args {
                Some(args) => Some(self.visit_args(args, &mut seg_uses)),
                None => None,
            };
            let class = current_type.clone().and_then(|t| {
                if is_primitive(&t) || t.ends_with("[]") {
                    None
                } else {
                    Some(t)
                }
            });
            let sig = class.as_ref().and_then(|c| match &seg.args {
                Some(args) => self.resolve_member(c, MemberKind::Method, &seg.name, args),
                None => self.resolve_member(c, MemberKind::Field, &seg.name, &[]),
            });
            match sig {
                Some(sig) if resolved_any || i == seg_start => {
                    if !resolved_any {
                        label = sig.label_text();
                    } else {
                        match sig.kind {
                            MemberKind::Field => {
                                label.push('.');
                                label.push_str(&sig.member);
                            }
                            _ => {
                                label.push_str(&format!(
                                    ".{}({})",
                                    sig.member,
                                    sig.param_types.join(",")
                                ));
                            }
                        }
                    }
                    if sig.kind != MemberKind::Field {
                        kind = SiteKind::Call;
                    }
                    current_type = Some(sig.return_type.clone());
                    refs.push(ResolvedRef {
                        signature: sig,
                        receiver_var: if resolved_any { None } else { receiver_var.clone() },
                        arg_vars: arg_vars.unwrap_or_default(),
                    });
                    resolved_any = true;
                    uses.append(&mut seg_uses);
                }
                _ => {
                    // unresolved from here on: uses float upward
                    floats.append(&mut seg_uses);
                    current_type = None;
                    if !resolved_any {
                        // the receiver use floats too
                        floats.append(&mut uses);
                    }
                }
            }
        }
        if resolved_any {
            let site = Site { label, kind, refs, uses, defs: vec![] };
            self.emit(SiteEvent::Site(site));
            events.push(self.statements[self.cur_stmt].events.len() - 1);
        }
        events.last().copied()
    }

    fn resolve_creation(&self, class_name: &str, args: &[Expr]) -> Option<ApiSignature> {
        let fq = self.catalog.resolve_class(class_name)?.to_string();
        let candidates = self.catalog.lookup_members(&fq, MemberKind::Constructor, "new");
        let own: Vec<&ApiSignature> =
            candidates.into_iter().filter(|s| s.fq_class == fq).collect();
        self.select_overload(own, args)
    }

    fn resolve_member(
        &self,
        class: &str,
        kind: MemberKind,
        name: &str,
        args: &[Expr],
    ) -> Option<ApiSignature> {
        let fq = self.catalog.resolve_class(class)?;
        let candidates = self.catalog.lookup_members(fq, kind, name);
        self.select_overload(candidates, args)
    }

    /// Overload choice: arity, then exact declared argument types, then
    /// subtype-compatible, then lexicographically smallest parameter list.
    fn select_overload(
        &self,
        candidates: Vec<&ApiSignature>,
        args: &[Expr],
    ) -> Option<ApiSignature> {
        let mut arity: Vec<&ApiSignature> =
            candidates.into_iter().filter(|s| s.param_types.len() == args.len()).collect();
        if arity.is_empty() {
            return None;
        }
        arity.sort_by(|a, b| a.param_types.cmp(&b.param_types));
        let arg_types: Vec<Option<String>> = args.iter().map(|a| self.expr_type(a)).collect();
        if let Some(exact) = arity.iter().find(|s| {
            s.param_types
                .iter()
                .zip(&arg_types)
                .all(|(p, a)| a.as_deref() == Some(p.as_str()))
        }) {
            return Some((*exact).clone());
        }
        if let Some(compat) = arity.iter().find(|s| {
            s.param_types.iter().zip(&arg_types).all(|(p, a)| self.arg_compatible(p, a))
        }) {
            return Some((*compat).clone());
        }
        arity.first().map(|s| (*s).clone())
    }

    fn arg_compatible(&self, param: &str, arg: &Option<String>) -> bool {
        match arg {
            // untyped (null or unknown expression): compatible with any
            // reference parameter
            None => !is_primitive(param),
            Some(a) if a == param => true,
            Some(a) => {
                if is_primitive(a) || is_primitive(param) {
                    return false;
                }
                self.catalog.ancestry(a).contains(&param)
            }
        }
    }

    /// Declared-type inference for overload matching.
    fn expr_type(&self, e: &Expr) -> Option<String> {
        match e {
            Expr::Literal(l) => Some(l.type_name().to_string()),
            Expr::Null => None,
            Expr::Assign { target, .. } => {
                self.scope.lookup(target).and_then(|(t, _)| self.canonical_type(t))
            }
            Expr::Unary { op, expr, .. } => {
                if op == "!" {
                    Some("boolean".into())
                } else {
                    self.expr_type(expr)
                }
            }
            Expr::Binary { op, lhs, rhs } => match op.as_str() {
                "==" | "!=" | "<" | ">" | "<=" | ">=" | "&&" | "||" => Some("boolean".into()),
                "+" => {
                    let lt = self.expr_type(lhs);
                    let rt = self.expr_type(rhs);
                    if lt.as_deref() == Some("java.lang.String")
                        || rt.as_deref() == Some("java.lang.String")
                    {
                        Some("java.lang.String".into())
                    } else {
                        lt
                    }
                }
                _ => self.expr_type(lhs),
            },
            Expr::Index { target, .. } => {
                self.expr_type(target).map(|t| t.trim_end_matches("[]").to_string())
            }
            Expr::NewArray { elem_type, .. } => {
                Some(format!("{}[]", self.canonical_type(elem_type).unwrap_or_else(|| elem_type.clone())))
            }
            Expr::Chain { root, segs } => self.chain_type(root, segs),
        }
    }

    /// Result type of a chain, re-running resolution without emitting sites.
    fn chain_type(&self, root: &ChainRoot, segs: &[ChainSeg]) -> Option<String> {
        let mut seg_start = 0usize;
        let mut current: Option<String> = None;
        match root {
            ChainRoot::Name(name) => {
                if let Some((ty, _)) = self.scope.lookup(name) {
                    current = self.canonical_type(ty);
                } else {
                    let mut prefix = name.clone();
                    let mut best: Option<(usize, String)> = None;
                    if let Some(fq) = self.catalog.resolve_class(&prefix) {
                        best = Some((0, fq.to_string()));
                    }
                    for (k, seg) in segs.iter().enumerate() {
                        if seg.args.is_some() {
                            break;
                        }
                        prefix.push('.');
                        prefix.push_str(&seg.name);
                        if let Some(fq) = self.catalog.resolve_class(&prefix) {
                            best = Some((k + 1, fq.to_string()));
                        }
                    }
                    if let Some((k, fq)) = best {
                        seg_start = k;
                        current = Some(fq);
                    }
                }
            }
            ChainRoot::New { class_name, .. } => {
                current = self.canonical_type(class_name);
            }
            ChainRoot::Call { .. } => return None,
            ChainRoot::Paren(inner) => current = self.expr_type(inner),
        }
        for seg in segs.iter().skip(seg_start) {
            let class = current?;
            if is_primitive(&class) || class.ends_with("[]") {
                return None;
            }
            let kind = if seg.args.is_some() { MemberKind::Method } else { MemberKind::Field };
            let args: &[Expr] = match &seg.args {
                Some(a) => a,
                None => &[],
            };
            let sig = self.resolve_member(&class, kind, &seg.name, args)?;
            current = Some(sig.return_type);
        }
        current
    }
}
