//! Graphviz export.

use std::fmt::Write as _;
use std::path::Path;

use nabla_core::fincat::FinCategory;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

/// One node per object and one edge per non-identity morphism, both in id order.
pub fn to_dot(c: &FinCategory) -> String {
    let mut s = String::new();
    writeln!(s, "digraph {} {{", quote(c.name())).unwrap();
    for o in c.objects() {
        writeln!(s, "  n{o} [label={}];", quote(c.object_label(o))).unwrap();
    }
    for f in c.morphisms().filter(|&f| !c.is_identity(f)) {
        writeln!(s, "  n{} -> n{} [label={}];", c.dom(f), c.cod(f), quote(c.label(f))).unwrap();
    }
    s.push_str("}\n");
    s
}

pub fn export_dot(c: &FinCategory, path: &Path) -> std::io::Result<()> {
    std::fs::write(path, to_dot(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nabla_core::fincat::CategoryBuilder;

    #[test]
    fn empty_category_is_a_bare_digraph() {
        let c = CategoryBuilder::new("empty").build_table(|_, _| None).unwrap();
        assert_eq!(to_dot(&c), "digraph \"empty\" {\n}\n");
    }

    #[test]
    fn labels_are_escaped() {
        let mut b = CategoryBuilder::new("q\"x");
        let o = b.add_object("a\\b");
        let i = b.add_morphism(o, o, "id");
        b.set_identity(o, i);
        let c = b.build_table(|_, _| Some(i)).unwrap();
        assert_eq!(to_dot(&c), "digraph \"q\\\"x\" {\n  n0 [label=\"a\\\\b\"];\n}\n");
    }
}
