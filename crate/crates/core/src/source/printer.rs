//! Canonical source rendering of a `MethodIr`. Re-parsing the output yields
//! a structurally identical method, which is also how structural equality
//! is checked in tests.

use super::ast::*;

pub fn to_source(m: &MethodIr) -> String {
    let mut out = String::new();
    let params: Vec<String> =
        m.parameters.iter().map(|(n, t)| format!("{t} {n}")).collect();
    out.push_str(&format!("void {}({}) {{\n", m.name, params.join(", ")));
    print_block(&m.body, 1, &mut out);
    out.push_str("}\n");
    out
}

fn indent(depth: usize, out: &mut String) {
    for _ in 0..depth {
        out.push_str("    ");
    }
}

fn print_block(stmts: &[Statement], depth: usize, out: &mut String) {
    for s in stmts {
        print_statement(s, depth, out);
    }
}

fn print_statement(s: &Statement, depth: usize, out: &mut String) {
    indent(depth, out);
    match &s.data {
        StatementData::VarDecl { var_type, name, init } => match init {
            None => out.push_str(&format!("{var_type} {name};\n")),
            Some(e) => out.push_str(&format!("{var_type} {name} = {};\n", expr_str(e))),
        },
        StatementData::Assign { target, value } => {
            out.push_str(&format!("{target} = {};\n", expr_str(value)));
        }
        StatementData::Expr(e) => out.push_str(&format!("{};\n", expr_str(e))),
        StatementData::Return(None) => out.push_str("return;\n"),
        StatementData::Return(Some(e)) => out.push_str(&format!("return {};\n", expr_str(e))),
        StatementData::Empty => match s.kind {
            StatementKind::Break => out.push_str("break;\n"),
            StatementKind::Continue => out.push_str("continue;\n"),
            _ => out.push_str("__HOLE__;\n"),
        },
        StatementData::If { cond, then_block, else_branch } => {
            out.push_str(&format!("if ({}) {{\n", expr_str(cond)));
            print_block(then_block, depth + 1, out);
            indent(depth, out);
            out.push('}');
            match else_branch {
                Some(ElseBranch::ElseIf(inner)) => {
                    out.push_str(" else ");
                    // inline the nested if without its indentation
                    let mut nested = String::new();
                    print_statement(inner, depth, &mut nested);
                    out.push_str(nested.trim_start());
                }
                Some(ElseBranch::Else(b)) => {
                    out.push_str(" else {\n");
                    print_block(b, depth + 1, out);
                    indent(depth, out);
                    out.push_str("}\n");
                }
                None => out.push('\n'),
            }
        }
        StatementData::While { cond, body } => {
            out.push_str(&format!("while ({}) {{\n", expr_str(cond)));
            print_block(body, depth + 1, out);
            indent(depth, out);
            out.push_str("}\n");
        }
        StatementData::DoWhile { body, cond } => {
            out.push_str("do {\n");
            print_block(body, depth + 1, out);
            indent(depth, out);
            out.push_str(&format!("}} while ({});\n", expr_str(cond)));
        }
        StatementData::For { init, cond, update, body } => {
            let init_str = match init {
                None => String::new(),
                Some(st) => match &st.data {
                    StatementData::VarDecl { var_type, name, init: Some(e) } => {
                        format!("{var_type} {name} = {}", expr_str(e))
                    }
                    StatementData::VarDecl { var_type, name, init: None } => {
                        format!("{var_type} {name}")
                    }
                    StatementData::Assign { target, value } => {
                        format!("{target} = {}", expr_str(value))
                    }
                    StatementData::Expr(e) => expr_str(e),
                    _ => String::new(),
                },
            };
            let cond_str = cond.as_ref().map(expr_str).unwrap_or_default();
            let update_str: Vec<String> = update.iter().map(expr_str).collect();
            out.push_str(&format!(
                "for ({init_str}; {cond_str}; {}) {{\n",
                update_str.join(", ")
            ));
            print_block(body, depth + 1, out);
            indent(depth, out);
            out.push_str("}\n");
        }
        StatementData::Foreach { var_type, var_name, iterable, body } => {
            out.push_str(&format!(
                "for ({var_type} {var_name} : {}) {{\n",
                expr_str(iterable)
            ));
            print_block(body, depth + 1, out);
            indent(depth, out);
            out.push_str("}\n");
        }
        StatementData::Switch { selector, cases, default } => {
            out.push_str(&format!("switch ({}) {{\n", expr_str(selector)));
            for c in cases {
                indent(depth + 1, out);
                out.push_str(&format!("case {}:\n", expr_str(&c.label)));
                print_block(&c.body, depth + 2, out);
            }
            if let Some(d) = default {
                indent(depth + 1, out);
                out.push_str("default:\n");
                print_block(d, depth + 2, out);
            }
            indent(depth, out);
            out.push_str("}\n");
        }
        StatementData::Try { body, catches, finally } => {
            out.push_str("try {\n");
            print_block(body, depth + 1, out);
            indent(depth, out);
            out.push('}');
            for c in catches {
                out.push_str(&format!(" catch ({} {}) {{\n", c.exc_type, c.var_name));
                print_block(&c.body, depth + 1, out);
                indent(depth, out);
                out.push('}');
            }
            if let Some(f) = finally {
                out.push_str(" finally {\n");
                print_block(f, depth + 1, out);
                indent(depth, out);
                out.push('}');
            }
            out.push('\n');
        }
    }
}

fn expr_str(e: &Expr) -> String {
    match e {
        Expr::Literal(l) => match l {
            Literal::Str(s) => format!("\"{s}\""),
            Literal::Char(c) => format!("'{c}'"),
            Literal::Int(v) => v.clone(),
            Literal::Long(v) => format!("{v}L"),
            Literal::Float(v) => format!("{v}f"),
            Literal::Double(v) => {
                if v.contains('.') {
                    v.clone()
                } else {
                    format!("{v}d")
                }
            }
            Literal::Bool(b) => b.to_string(),
        },
        Expr::Null => "null".into(),
        Expr::Assign { target, value } => format!("{target} = {}", expr_str(value)),
        Expr::Binary { op, lhs, rhs } => {
            format!("({} {op} {})", operand_str(lhs), operand_str(rhs))
        }
        Expr::Unary { op, expr, postfix } => {
            if *postfix {
                format!("{}{op}", operand_str(expr))
            } else {
                format!("{op}{}", operand_str(expr))
            }
        }
        Expr::Index { target, index } => {
            format!("{}[{}]", operand_str(target), expr_str(index))
        }
        Expr::NewArray { elem_type, len } => {
            format!("new {elem_type}[{}]", expr_str(len))
        }
        Expr::Chain { root, segs } => {
            let mut s = match root {
                ChainRoot::Name(n) => n.clone(),
                ChainRoot::Call { name, args } => format!("{name}({})", args_str(args)),
                ChainRoot::New { class_name, args } => {
                    format!("new {class_name}({})", args_str(args))
                }
                ChainRoot::Paren(inner) => format!("({})", expr_str(inner)),
            };
            for seg in segs {
                s.push('.');
                s.push_str(&seg.name);
                if let Some(args) = &seg.args {
                    s.push('(');
                    s.push_str(&args_str(args));
                    s.push(')');
                }
            }
            s
        }
    }
}

fn args_str(args: &[Expr]) -> String {
    args.iter().map(expr_str).collect::<Vec<_>>().join(", ")
}

/// Assignments used as operands need explicit parentheses to re-parse into
/// the same shape.
fn operand_str(e: &Expr) -> String {
    match e {
        Expr::Assign { .. } => format!("({})", expr_str(e)),
        _ => expr_str(e),
    }
}
