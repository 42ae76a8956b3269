//! Graphviz export of the specialization order.

use std::fmt::Write;

use crate::space::FinSpace;

fn quote(id: &str) -> String {
    format!("\"{}\"", id.replace('\\', "\\\\").replace('"', "\\\""))
}

/// A digraph with an edge `y -> x` for each covering pair `y ∈ U_x`.
pub fn to_dot(space: &FinSpace, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    for id in space.ids() {
        writeln!(out, "  {};", quote(id)).unwrap();
    }
    for (y, x) in space.hasse_edges() {
        writeln!(out, "  {} -> {};", quote(space.id(y)), quote(space.id(x))).unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sierpinski_has_one_edge() {
        let s = crate::gallery::sierpinski();
        let dot = to_dot(&s, "limit");
        assert_eq!(
            dot,
            "digraph \"limit\" {\n  \"a\";\n  \"b\";\n  \"a\" -> \"b\";\n}\n"
        );
    }

    #[test]
    fn quotes_are_escaped() {
        let s = FinSpace::point("say \"hi\"");
        assert!(to_dot(&s, "g").contains("\"say \\\"hi\\\"\""));
    }
}
