//! Golden tests for node labeling and control-statement expansion, plus the
//! end-to-end graph of the hash-code fixture.

mod common;

use common::{graph_of, graph_of_text};
use ctxrec_core::graph::EdgeType;

fn labels(g: &ctxrec_core::graph::ApiContextGraph) -> Vec<String> {
    g.nodes.iter().map(|n| n.label.text.clone()).collect()
}

// ---- node labels ----

#[test]
fn label_declaration() {
    let g = graph_of_text("void f(){ String str; }");
    assert_eq!(labels(&g), vec!["java.lang.String.Declaration"]);
}

#[test]
fn label_constant_assignment() {
    let g = graph_of_text("void f(){ String str = \"str\"; }");
    assert_eq!(labels(&g), vec!["java.lang.String.Constant"]);
}

#[test]
fn label_null_assignment() {
    let g = graph_of_text("void f(){ String str = null; }");
    assert_eq!(labels(&g), vec!["java.lang.String.Null"]);
}

#[test]
fn label_object_creation() {
    let g = graph_of_text("void f(String path){ File file = new File(path); }");
    assert_eq!(labels(&g), vec!["java.io.File.new(java.lang.String)"]);
}

#[test]
fn label_method_call() {
    let g = graph_of_text("void f(StringBuilder builder){ builder.append(\"str\"); }");
    assert_eq!(labels(&g), vec!["java.lang.StringBuilder.append(java.lang.String)"]);
}

#[test]
fn label_field_access() {
    let g = graph_of_text("void f(){ System.out; }");
    assert_eq!(labels(&g), vec!["java.lang.System.out"]);
}

#[test]
fn label_cascading_call() {
    let g = graph_of_text("void f(StringBuilder builder){ builder.append(\"str\").toString(); }");
    assert_eq!(
        labels(&g),
        vec!["java.lang.StringBuilder.append(java.lang.String).toString()"]
    );
}

#[test]
fn label_cascading_field_access_call() {
    let g = graph_of_text("void f(){ System.out.println(\"str\"); }");
    assert_eq!(labels(&g), vec!["java.lang.System.out.println(java.lang.String)"]);
}

#[test]
fn label_nested_call_two_nodes() {
    let g = graph_of_text(
        "void f(FileWriter writer, StringBuilder sb){ writer.write(sb.toString()); }",
    );
    assert_eq!(
        labels(&g),
        vec!["java.lang.StringBuilder.toString()", "java.io.FileWriter.write(java.lang.String)"]
    );
    assert_eq!(g.edge_between(0, 1), Some(EdgeType::C));
}

#[test]
fn label_nested_field_access() {
    let g = graph_of_text("void f(JLabel label){ label.setForeground(Color.blue); }");
    assert_eq!(
        labels(&g),
        vec!["java.awt.Color.blue", "javax.swing.JLabel.setForeground(java.awt.Color)"]
    );
}

#[test]
fn unresolved_site_produces_no_node() {
    let g = graph_of_text("void f(String s){ String t; unknownCall(s); t.trim(); }");
    assert_eq!(
        labels(&g),
        vec!["java.lang.String.Declaration", "java.lang.String.trim()"]
    );
    // sequencing skips the siteless statement
    assert_eq!(g.edge_between(0, 1), Some(EdgeType::Cd));
}

// ---- control statement expansion ----

#[test]
fn expansion_while() {
    let g = graph_of_text("void f(){ while (true) { } }");
    assert_eq!(labels(&g), vec!["While", "Condition", "Body"]);
    assert_eq!(g.edge_between(0, 1), Some(EdgeType::C));
    assert_eq!(g.edge_between(0, 2), Some(EdgeType::C));
    assert_eq!(g.edge_count(), 2);
}

#[test]
fn expansion_do_while() {
    let g = graph_of_text("void f(){ do { } while (true); }");
    assert_eq!(labels(&g), vec!["DoWhile", "Body", "Condition"]);
    assert_eq!(g.edge_between(0, 1), Some(EdgeType::C));
    assert_eq!(g.edge_between(0, 2), Some(EdgeType::C));
}

#[test]
fn expansion_for() {
    let g = graph_of_text("void f(int n){ for (int i = 0; i < n; i++) { } }");
    assert_eq!(labels(&g), vec!["For", "Condition", "int.Constant", "Body"]);
    assert_eq!(g.edge_between(0, 1), Some(EdgeType::C));
    assert_eq!(g.edge_between(1, 2), Some(EdgeType::C));
    assert_eq!(g.edge_between(0, 3), Some(EdgeType::C));
}

#[test]
fn expansion_foreach() {
    let g = graph_of_text("void f(String[] names){ for (String name : names) { name.trim(); } }");
    assert_eq!(
        labels(&g),
        vec!["Foreach", "Condition", "java.lang.String.Declaration", "Body", "java.lang.String.trim()"]
    );
    assert_eq!(g.edge_between(0, 1), Some(EdgeType::C));
    assert_eq!(g.edge_between(1, 2), Some(EdgeType::C));
    assert_eq!(g.edge_between(0, 3), Some(EdgeType::C));
    assert_eq!(g.edge_between(3, 4), Some(EdgeType::C));
    // loop variable flows into the body use
    assert_eq!(g.edge_between(2, 4), Some(EdgeType::D));
}

#[test]
fn expansion_if_then_else() {
    let g = graph_of_text("void f(boolean b){ if (b) { } else { } }");
    assert_eq!(labels(&g), vec!["If", "Condition", "Then", "Else"]);
    for child in 1..4 {
        assert_eq!(g.edge_between(0, child), Some(EdgeType::C));
    }
}

#[test]
fn expansion_if_else_if() {
    let g = graph_of_text("void f(boolean a, boolean b){ if (a) { } else if (b) { } }");
    assert_eq!(labels(&g), vec!["If", "Condition", "Then", "ElseIf", "If", "Condition", "Then"]);
    assert_eq!(g.edge_between(0, 3), Some(EdgeType::C));
    assert_eq!(g.edge_between(3, 4), Some(EdgeType::C));
    assert_eq!(g.edge_between(4, 5), Some(EdgeType::C));
}

#[test]
fn expansion_switch() {
    let g = graph_of_text(
        "void f(int x){ switch (x) { case 1: break; case 2: break; default: break; } }",
    );
    assert_eq!(labels(&g), vec!["Switch", "Selector", "Case", "Case", "Default"]);
    for child in 1..5 {
        assert_eq!(g.edge_between(0, child), Some(EdgeType::C));
    }
}

#[test]
fn expansion_try_catch_finally() {
    let g = graph_of_text(
        "void f(){ try { } catch (IOException e) { } catch (Exception e2) { } finally { } }",
    );
    assert_eq!(labels(&g), vec!["Try", "Body", "Catch", "Catch", "Finally"]);
    assert_eq!(g.edge_between(0, 1), Some(EdgeType::C));
    assert_eq!(g.edge_between(0, 2), Some(EdgeType::C));
    assert_eq!(g.edge_between(2, 3), Some(EdgeType::C));
    assert_eq!(g.edge_between(3, 4), Some(EdgeType::C));
}

#[test]
fn control_node_connects_to_following_statement() {
    let g = graph_of_text("void f(String s){ while (s.isEmpty()) { } s.trim(); }");
    assert_eq!(
        labels(&g),
        vec!["While", "Condition", "java.lang.String.isEmpty()", "Body", "java.lang.String.trim()"]
    );
    assert_eq!(g.edge_between(0, 4), Some(EdgeType::C));
    assert_eq!(g.edge_between(1, 2), Some(EdgeType::C));
}

// ---- end-to-end fixture graphs ----

#[test]
fn hash_code_fixture_graph_is_exact() {
    let g = graph_of("compute_hash_code.java");
    let expected = "\
N 0 java.util.ArrayList.new()
N 1 java.io.FileReader.new(java.lang.String)
N 2 java.io.BufferedReader.new(java.io.Reader)
N 3 java.lang.String.Null
N 4 While
N 5 Condition
N 6 java.io.BufferedReader.readLine()
N 7 Body
N 8 int.Declaration
N 9 java.lang.String.hashCode()
N 10 java.util.ArrayList.add(java.lang.Object)
N 11 java.io.Reader.close()
N 12 java.io.Reader.close()
E 0 1 c
E 0 10 d
E 1 2 cd
E 1 12 d
E 2 3 c
E 2 6 d
E 2 11 d
E 3 4 c
E 4 5 c
E 4 7 c
E 4 11 c
E 5 6 c
E 6 9 d
E 7 8 c
E 8 9 c
E 9 10 cd
E 11 12 c
";
    assert_eq!(g.dump(), expected);
    assert!(g.is_weakly_connected());
    assert!(g.hole.is_none());
}

#[test]
fn hole_fixture_graph_wires_hole_with_s_edges_only() {
    let g = graph_of("compute_hash_code_hole.java");
    let hole = g.hole.expect("hole node present");
    assert_eq!(g.nodes[hole].label.text, "Hole");
    assert!(g.is_weakly_connected());
    let mut incident = 0;
    for (s, d, t) in g.edges() {
        if s == hole || d == hole {
            assert_eq!(t, EdgeType::S, "hole edge ({s},{d}) must be type s");
            incident += 1;
        } else {
            assert_ne!(t, EdgeType::S, "s edge ({s},{d}) away from the hole");
        }
    }
    assert_eq!(incident, 2); // declaration -> hole -> add
}

#[test]
fn hole_and_score_fixtures_have_identical_graphs() {
    let a = graph_of("compute_hash_code_hole.java");
    let b = graph_of("get_integer_score_hole.java");
    assert_eq!(a.dump(), b.dump());
}

#[test]
fn graph_stats_count_api_nodes() {
    let g = graph_of("compute_hash_code.java");
    let st = g.stats();
    assert_eq!(st.nodes, 13);
    assert_eq!(st.api_nodes, 10);
    assert!(st.api_nodes >= 8);
    assert_eq!(st.total_edges(), g.edge_count());

    let hole = graph_of("compute_hash_code_hole.java");
    assert!(hole.stats().api_nodes >= 8);
}

#[test]
fn single_declaration_stats() {
    let g = graph_of_text("void f(){ String s; }");
    let st = g.stats();
    assert_eq!((st.nodes, st.total_edges(), st.api_nodes), (1, 0, 1));
}

#[test]
fn determinism_identical_builds() {
    let a = graph_of("compute_hash_code.java");
    let b = graph_of("compute_hash_code.java");
    assert_eq!(a, b);
}

#[test]
fn empty_method_is_an_error() {
    let ir = ctxrec_core::source::parse_method("void f(){ }").unwrap();
    let rm = ctxrec_core::source::resolve_apis(&ir, &common::catalog());
    assert!(matches!(
        ctxrec_core::graph::build_graph(&rm),
        Err(ctxrec_core::graph::GraphError::EmptyMethod)
    ));
}

#[test]
fn hole_after_declaration_without_successor() {
    let g = graph_of_text("void f(){ String s; __HOLE__; }");
    assert_eq!(labels(&g), vec!["java.lang.String.Declaration", "Hole"]);
    assert_eq!(g.edge_between(0, 1), Some(EdgeType::S));
    assert_eq!(g.edge_count(), 1);
}
