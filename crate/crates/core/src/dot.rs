//! Graphviz export.

use std::fmt::Write;

use crate::cover::CoverGraph;
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::paley::PaleyGraph;

pub const DEFAULT_DOT_CAP: usize = 5000;

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::Precondition(format!("{n} vertices exceed the export cap {cap}")));
    }
    Ok(())
}

/// The base graph, one node per element named by its key.
pub fn paley_to_dot(paley: &PaleyGraph, cap: usize) -> Result<String> {
    let f = paley.field();
    let g = paley.graph();
    check_cap(g.n(), cap)?;
    let mut out = String::new();
    writeln!(out, "graph paley_{} {{", f.q()).unwrap();
    for x in f.elements() {
        writeln!(out, "  \"{}\" [label=\"{}\"];", f.key(x), f.pretty(x)).unwrap();
    }
    for (u, v) in g.edges() {
        let name = |i: usize| f.key(FieldElement::from_index(i));
        writeln!(out, "  \"{}\" -- \"{}\";", name(u), name(v)).unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}

/// The cover with nodes `(key,i)`, grouped into one cluster per sheet `i`;
/// each node also records the base vertex it lies over.
pub fn cover_to_dot(cover: &CoverGraph, cap: usize) -> Result<String> {
    let v = cover.voltage();
    let f = v.field();
    let ell = v.ell();
    let g = cover.graph();
    check_cap(g.n(), cap)?;
    let name = |id: usize| {
        let (x, i) = cover.label(id);
        format!("({},{})", f.key(x), i)
    };
    let mut out = String::new();
    writeln!(out, "graph cover_{}_{} {{", f.q(), ell).unwrap();
    for i in 0..ell {
        writeln!(out, "  subgraph cluster_sheet_{i} {{").unwrap();
        writeln!(out, "    label=\"sheet {i}\";").unwrap();
        for x in f.elements() {
            let id = cover.vertex(x, i);
            writeln!(out, "    \"{}\" [fiber=\"{}\", sheet={i}];", name(id), f.key(x)).unwrap();
        }
        out.push_str("  }\n");
    }
    for (a, b) in g.edges() {
        writeln!(out, "  \"{}\" -- \"{}\";", name(a), name(b)).unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}
