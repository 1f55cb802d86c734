use std::fmt::Write;

use super::MaterializedQuiver;

/// Renders the window as a DOT digraph. Nodes and edges follow the
/// canonical vertex and arrow order, so equal windows give equal text.
pub fn to_dot(q: &MaterializedQuiver) -> String {
    let mut out = String::from("digraph quiver {\n");
    for v in q.vertices() {
        writeln!(out, "  \"{v}\";").unwrap();
    }
    for a in q.arrows() {
        writeln!(out, "  \"{}\" -> \"{}\" [label=\"{}\"];", a.src, a.tgt, a.color).unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::super::examples::*;
    use super::super::{materialize, QuiverExpr};
    use super::*;

    #[test]
    fn loop_is_one_node_one_self_edge() {
        let dot = to_dot(&materialize(&one_loop("p"), 3));
        assert_eq!(dot, "digraph quiver {\n  \"v\";\n  \"v\" -> \"v\" [label=\"c@p\"];\n}\n");
    }

    #[test]
    fn tilde_edge_counts() {
        let dot = to_dot(&materialize(&tilde_edge(), 1));
        assert_eq!(dot.lines().filter(|l| l.contains("->")).count(), 6);
        assert_eq!(dot.lines().filter(|l| l.ends_with("\";")).count(), 4);
    }

    #[test]
    fn empty_sum_is_empty_graph() {
        let empty = QuiverExpr::sum(Vec::<(String, _)>::new()).unwrap();
        assert_eq!(to_dot(&materialize(&empty, 2)), "digraph quiver {\n}\n");
    }
}
