//! Graphviz export. Nodes are numbered in definition order so output is stable.

use std::fmt::Write;

use crate::fincat::{FinCategory, ObjId, OverCategory};
use crate::graphmod::{EvolutivePresentation, FinGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Flavor {
    /// The total category, labels annotated with their image.
    Total,
    /// The base category only.
    Base,
    /// The total category clustered by base object.
    Fibered,
}

fn esc(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn header(name: &str) -> String {
    format!("digraph {} {{\n  node [shape=box];\n", esc(name))
}

pub fn category_dot(name: &str, c: &FinCategory) -> String {
    let mut out = header(name);
    for x in c.objects() {
        writeln!(out, "  n{} [label={}];", x.index(), esc(c.obj_name(x))).unwrap();
    }
    for a in c.non_identity_arrows() {
        let tip = format!("{}: {} -> {}", c.arrow_name(a), c.obj_name(c.src(a)), c.obj_name(c.tgt(a)));
        writeln!(
            out,
            "  n{} -> n{} [label={}, tooltip={}];",
            c.src(a).index(),
            c.tgt(a).index(),
            esc(c.arrow_name(a)),
            esc(&tip)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn over_dot(name: &str, p: &OverCategory, flavor: Flavor) -> String {
    let (t, b) = (p.total(), p.base());
    if flavor == Flavor::Base {
        return category_dot(name, b);
    }
    let mut out = header(name);
    let node = |a: ObjId| {
        let label = format!("{} : {}", t.obj_name(a), b.obj_name(p.over_obj(a)));
        format!("  n{} [label={}];\n", a.index(), esc(&label))
    };
    if flavor == Flavor::Fibered {
        for (k, fiber) in p.objects_by_base().iter().enumerate() {
            if fiber.is_empty() {
                continue;
            }
            writeln!(out, "  subgraph cluster_{k} {{").unwrap();
            writeln!(out, "    label={};", esc(b.obj_name(ObjId::from(k)))).unwrap();
            for &a in fiber {
                out.push_str("  ");
                out.push_str(&node(a));
            }
            out.push_str("  }\n");
        }
    } else {
        for a in t.objects() {
            out.push_str(&node(a));
        }
    }
    for u in t.non_identity_arrows() {
        let label = format!("{} / {}", t.arrow_name(u), b.arrow_name(p.over_arrow(u)));
        writeln!(out, "  n{} -> n{} [label={}];", t.src(u).index(), t.tgt(u).index(), esc(&label)).unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn graph_dot(name: &str, g: &FinGraph) -> String {
    let mut out = header(name);
    for (i, n) in g.nodes.iter().enumerate() {
        writeln!(out, "  n{i} [label={}];", esc(n)).unwrap();
    }
    for e in &g.edges {
        writeln!(out, "  n{} -> n{} [label={}];", e.src, e.tgt, esc(&e.name)).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Frontier elements are dashed: a fresh infinite chain starts above each.
pub fn presentation_dot(name: &str, p: &EvolutivePresentation) -> String {
    let mut out = header(name);
    for (i, n) in p.elements.iter().enumerate() {
        let style = if p.succ[i].is_none() { ", style=dashed" } else { "" };
        writeln!(out, "  n{i} [label={}{style}];", esc(n)).unwrap();
    }
    for (i, s) in p.succ.iter().enumerate() {
        if let Some(j) = s {
            writeln!(out, "  n{i} -> n{j};").unwrap();
        }
    }
    out.push_str("}\n");
    out
}
