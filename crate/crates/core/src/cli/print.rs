//! Printers emitting the same grammar the parser reads.

use std::fmt::Write;

use super::syntax::is_bare;
use super::workspace::Workspace;
use crate::dinat::Profunctor;
use crate::fincat::{FinCategory, OverCategory};
use crate::graphmod::FinGraph;
use crate::setfun::{SetFunctor, Variance};

pub fn quote(s: &str) -> String {
    if is_bare(s) {
        s.to_string()
    } else {
        format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

fn list<'a>(names: impl IntoIterator<Item = &'a str>) -> String {
    names.into_iter().map(quote).collect::<Vec<_>>().join(", ")
}

/// Identities are left implicit when `build` would recreate them in place.
fn implicit_identities(c: &FinCategory) -> bool {
    let n = c.num_arrows() - c.num_objects();
    c.objects()
        .enumerate()
        .all(|(k, x)| c.id(x).index() == n + k && c.arrow_name(c.id(x)) == format!("id_{}", c.obj_name(x)))
}

pub fn print_category(name: &str, c: &FinCategory) -> String {
    let mut out = format!("category {} {{\n", quote(name));
    if c.num_objects() > 0 {
        writeln!(out, "  objects: {}", list(c.objects().map(|x| c.obj_name(x)))).unwrap();
    }
    let implicit = implicit_identities(c);
    for a in c.arrows() {
        let (s, t) = (quote(c.obj_name(c.src(a))), quote(c.obj_name(c.tgt(a))));
        if !c.is_identity(a) {
            writeln!(out, "  arrow {}: {s} -> {t}", quote(c.arrow_name(a))).unwrap();
        } else if !implicit {
            writeln!(out, "  identity {}: {s}", quote(c.arrow_name(a))).unwrap();
        }
    }
    for g in c.non_identity_arrows() {
        for f in c.non_identity_arrows() {
            if let Some(h) = c.try_compose(g, f) {
                let names = [g, f, h].map(|a| quote(c.arrow_name(a)));
                writeln!(out, "  compose {} . {} = {}", names[0], names[1], names[2]).unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}

pub fn print_set_functor(name: &str, base: &str, a: &SetFunctor) -> String {
    let c = &a.base;
    let mut out = match a.variance {
        Variance::Contravariant => format!("presheaf {} on {} {{\n", quote(name), quote(base)),
        Variance::Covariant => format!("copresheaf {} on {} {{\n", quote(name), quote(base)),
    };
    for x in c.objects() {
        writeln!(out, "  at {}: {{{}}}", quote(c.obj_name(x)), list(a.fibers[x.index()].iter().map(String::as_str))).unwrap();
    }
    for f in c.non_identity_arrows() {
        let (s, t) = (a.action_src(f), a.action_tgt(f));
        if a.fiber_size(s) == 0 {
            continue;
        }
        let pairs: Vec<String> = (0..a.fiber_size(s))
            .map(|i| format!("{} -> {}", quote(a.element_name(s, i)), quote(a.element_name(t, a.apply(f, i)))))
            .collect();
        writeln!(out, "  on {}: {}", quote(c.arrow_name(f)), pairs.join(", ")).unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn print_over(name: &str, total: &str, base: &str, p: &OverCategory) -> String {
    let (t, b) = (p.total(), p.base());
    let mut out = format!("functor {}: {} -> {} {{\n", quote(name), quote(total), quote(base));
    if t.num_objects() > 0 {
        let pairs: Vec<String> = t
            .objects()
            .map(|a| format!("{} -> {}", quote(t.obj_name(a)), quote(b.obj_name(p.over_obj(a)))))
            .collect();
        writeln!(out, "  objects: {}", pairs.join(", ")).unwrap();
    }
    let pairs: Vec<String> = t
        .non_identity_arrows()
        .map(|u| format!("{} -> {}", quote(t.arrow_name(u)), quote(b.arrow_name(p.over_arrow(u)))))
        .collect();
    if !pairs.is_empty() {
        writeln!(out, "  arrows: {}", pairs.join(", ")).unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn print_profunctor(name: &str, base: &str, h: &Profunctor) -> String {
    let c = &h.base;
    let mut out = format!("profunctor {} on {} {{\n", quote(name), quote(base));
    for x in c.objects() {
        for y in c.objects() {
            let v = list(h.value(x, y).iter().map(String::as_str));
            writeln!(out, "  at ({}, {}): {{{v}}}", quote(c.obj_name(x)), quote(c.obj_name(y))).unwrap();
        }
    }
    for f in c.non_identity_arrows() {
        let (x, y) = (c.src(f), c.tgt(f));
        for z in c.objects() {
            // left: H(y,z) -> H(x,z); right: H(z,x) -> H(z,y)
            let sides = [
                ("left", h.value(y, z), h.value(x, z), &h.left[f.index()][z.index()]),
                ("right", h.value(z, x), h.value(z, y), &h.right[f.index()][z.index()]),
            ];
            for (side, src, tgt, map) in sides {
                if src.is_empty() {
                    continue;
                }
                let pairs: Vec<String> = map
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| format!("{} -> {}", quote(&src[i]), quote(&tgt[j])))
                    .collect();
                writeln!(out, "  {side} {} at {}: {}", quote(c.arrow_name(f)), quote(c.obj_name(z)), pairs.join(", "))
                    .unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}

pub fn print_graph(name: &str, g: &FinGraph) -> String {
    let mut out = format!("graph {} {{\n", quote(name));
    if g.num_nodes() > 0 {
        writeln!(out, "  nodes: {}", list(g.nodes.iter().map(String::as_str))).unwrap();
    }
    for e in &g.edges {
        writeln!(out, "  edge {}: {} -> {}", quote(&e.name), quote(&g.nodes[e.src]), quote(&g.nodes[e.tgt])).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Every user definition, kinds in dependency order, blocks separated by blank lines.
pub fn print_workspace(ws: &Workspace) -> String {
    let name_of = |c| ws.category_name(c).unwrap_or("?").to_string();
    let mut blocks = Vec::new();
    blocks.extend(ws.categories.iter().map(|n| print_category(&n.name, &n.value)));
    blocks.extend(ws.set_functors.iter().map(|n| print_set_functor(&n.name, &name_of(&n.value.base), &n.value)));
    blocks.extend(
        ws.overs
            .iter()
            .map(|n| print_over(&n.name, &name_of(n.value.total()), &name_of(n.value.base()), &n.value)),
    );
    blocks.extend(ws.profunctors.iter().map(|n| print_profunctor(&n.name, &name_of(&n.value.base), &n.value)));
    blocks.extend(ws.graphs.iter().map(|n| print_graph(&n.name, &n.value)));
    blocks.join("\n")
}
