//! Graphs over a base graph, graph (op)fibrations, and reflections and
//! coreflections of graphs into evolutive sets, idempotent endomaps,
//! bijections and periodic endomaps.
//!
//! A graph over the loop is an endomap exactly when every node has one
//! out-edge. A node `x` with an edge `x -> y` imposes `s(x) = y` on the
//! reflection; `[n, x]` stands for `s^n(x)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{limits, Error, Result};
use crate::fincat::{ArrowId, CategoryBuilder, FinCategory, Functor, ObjId, OverCategory};
use crate::overbase::ComponentsResult;
use crate::reflect::{coreflect_df, coreflect_dof, reflect_df, reflect_dof};
use crate::setfun::{SetFunctor, Variance};
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

/// Nodes and edges; parallel edges and loops allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FinGraph {
    pub nodes: Vec<String>,
    pub edges: Vec<Edge>,
}

impl FinGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(&mut self, name: impl Into<String>) -> usize {
        self.nodes.push(name.into());
        self.nodes.len() - 1
    }

    pub fn edge(&mut self, name: impl Into<String>, src: usize, tgt: usize) -> usize {
        self.edges.push(Edge {
            name: name.into(),
            src,
            tgt,
        });
        self.edges.len() - 1
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn find_node(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n == name)
    }

    pub fn find_edge(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }

    pub fn out_edges(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.edges.len()).filter(move |&e| self.edges[e].src == x)
    }

    pub fn in_edges(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.edges.len()).filter(move |&e| self.edges[e].tgt == x)
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if self.nodes[..i].contains(n) {
                out.push(format!("duplicate node `{n}`"));
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            if self.edges[..i].iter().any(|f| f.name == e.name) {
                out.push(format!("duplicate edge `{}`", e.name));
            }
            if e.src >= self.nodes.len() || e.tgt >= self.nodes.len() {
                out.push(format!("edge `{}` has a missing endpoint", e.name));
            }
        }
        out
    }

    /// `Z_n`: nodes `0..n`, edges `s<i>: i -> i+1 mod n`. `cycle(1)` is the loop.
    pub fn cycle(n: usize) -> FinGraph {
        let mut g = FinGraph::new();
        for i in 0..n {
            g.node(i.to_string());
        }
        for i in 0..n {
            g.edge(format!("s{i}"), i, (i + 1) % n);
        }
        g
    }

    pub fn discrete(n: usize) -> FinGraph {
        let mut g = FinGraph::new();
        for i in 0..n {
            g.node(format!("n{i}"));
        }
        g
    }

    /// The graph of `succ`, edge `s<i>` leaving node `i`.
    pub fn from_endomap(names: Vec<String>, succ: &[usize]) -> FinGraph {
        let mut g = FinGraph {
            nodes: names,
            edges: Vec::new(),
        };
        for (i, &j) in succ.iter().enumerate() {
            g.edge(format!("s{i}"), i, j);
        }
        g
    }

    /// The endomap, when every node has exactly one out-edge.
    pub fn endomap(&self) -> Option<Vec<usize>> {
        let mut succ = vec![None; self.nodes.len()];
        for e in &self.edges {
            if succ[e.src].replace(e.tgt).is_some() {
                return None;
            }
        }
        succ.into_iter().collect()
    }

    /// Sorted cycle lengths, when the graph is a bijective endomap.
    pub fn cycle_lengths(&self) -> Option<Vec<usize>> {
        let succ = self.endomap()?;
        let mut indeg = vec![0; succ.len()];
        for &s in &succ {
            indeg[s] += 1;
        }
        if indeg.iter().any(|&d| d != 1) {
            return None;
        }
        let mut seen = vec![false; succ.len()];
        let mut out = Vec::new();
        for x in 0..succ.len() {
            let mut len = 0;
            let mut y = x;
            while !seen[y] {
                seen[y] = true;
                y = succ[y];
                len += 1;
            }
            if len > 0 {
                out.push(len);
            }
        }
        out.sort_unstable();
        Some(out)
    }

    pub fn is_acyclic(&self) -> bool {
        let mut indeg = vec![0; self.nodes.len()];
        for e in &self.edges {
            indeg[e.tgt] += 1;
        }
        let mut stack: Vec<usize> = (0..self.nodes.len()).filter(|&x| indeg[x] == 0).collect();
        let mut removed = 0;
        while let Some(x) = stack.pop() {
            removed += 1;
            for e in self.out_edges(x) {
                let t = self.edges[e].tgt;
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    stack.push(t);
                }
            }
        }
        removed == self.nodes.len()
    }
}

/// Zigzag components, numbered by minimum node.
pub fn graph_components(g: &FinGraph) -> ComponentsResult {
    let mut uf = UnionFind::new(g.num_nodes());
    for e in &g.edges {
        uf.union(e.src, e.tgt);
    }
    let (reps, class_of) = uf.classes();
    ComponentsResult {
        reps: reps.into_iter().map(ObjId::from).collect(),
        class_of,
    }
}

/// Node `(a, b)` has index `a * |H| + b`; edge `(e, f)` index `e * |E(H)| + f`.
pub fn graph_product(g: &FinGraph, h: &FinGraph) -> FinGraph {
    let mut out = FinGraph::new();
    for a in &g.nodes {
        for b in &h.nodes {
            out.node(format!("({a},{b})"));
        }
    }
    let n = h.num_nodes();
    for e in &g.edges {
        for f in &h.edges {
            out.edge(format!("({},{})", e.name, f.name), e.src * n + f.src, e.tgt * n + f.tgt);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphMorphism {
    pub dom: FinGraph,
    pub cod: FinGraph,
    pub node_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

impl GraphMorphism {
    pub fn new(dom: FinGraph, cod: FinGraph, node_map: Vec<usize>, edge_map: Vec<usize>) -> Result<Self> {
        let m = GraphMorphism {
            dom,
            cod,
            node_map,
            edge_map,
        };
        if m.node_map.len() != m.dom.num_nodes() || m.edge_map.len() != m.dom.num_edges() {
            return Err(Error::Invalid("graph morphism has the wrong number of images".into()));
        }
        for (i, e) in m.dom.edges.iter().enumerate() {
            let Some(f) = m.cod.edges.get(m.edge_map[i]) else {
                return Err(Error::Invalid(format!("edge `{}` has no image", e.name)));
            };
            if m.node_map.get(e.src) != Some(&f.src) || m.node_map.get(e.tgt) != Some(&f.tgt) {
                return Err(Error::Invalid(format!("edge `{}` is not sent to a matching edge", e.name)));
            }
        }
        Ok(m)
    }

    /// The unique morphism to the loop.
    pub fn to_loop(g: &FinGraph) -> GraphMorphism {
        GraphMorphism {
            dom: g.clone(),
            cod: FinGraph::cycle(1),
            node_map: vec![0; g.num_nodes()],
            edge_map: vec![0; g.num_edges()],
        }
    }
}

fn unique_lifting(p: &GraphMorphism, forward: bool) -> bool {
    let (dom, cod) = (&p.dom, &p.cod);
    let mut count = vec![0usize; cod.num_edges() * dom.num_nodes()];
    for (i, e) in dom.edges.iter().enumerate() {
        let end = if forward { e.src } else { e.tgt };
        count[p.edge_map[i] * dom.num_nodes() + end] += 1;
    }
    cod.edges.iter().enumerate().all(|(f, fe)| {
        let end = if forward { fe.src } else { fe.tgt };
        (0..dom.num_nodes())
            .filter(|&a| p.node_map[a] == end)
            .all(|a| count[f * dom.num_nodes() + a] == 1)
    })
}

/// Every base edge lifts uniquely at each node over its source.
pub fn is_graph_opfibration(p: &GraphMorphism) -> bool {
    unique_lifting(p, true)
}

/// Every base edge lifts uniquely at each node over its target.
pub fn is_graph_fibration(p: &GraphMorphism) -> bool {
    unique_lifting(p, false)
}

/// Number of graph morphisms `g -> h` sending each `(a, b)` in `fixed` to `a -> b`.
pub fn count_graph_morphisms(g: &FinGraph, h: &FinGraph, fixed: &[(usize, usize)]) -> u64 {
    let mut parallel = vec![0u64; h.num_nodes() * h.num_nodes()];
    for e in &h.edges {
        parallel[e.src * h.num_nodes() + e.tgt] += 1;
    }
    let mut assign: Vec<Option<usize>> = vec![None; g.num_nodes()];
    for &(a, b) in fixed {
        if assign[a].is_some_and(|c| c != b) {
            return 0;
        }
        assign[a] = Some(b);
    }
    let free: Vec<usize> = (0..g.num_nodes()).filter(|&a| assign[a].is_none()).collect();
    fn go(
        k: usize,
        free: &[usize],
        assign: &mut Vec<Option<usize>>,
        g: &FinGraph,
        h: &FinGraph,
        parallel: &[u64],
    ) -> u64 {
        // edges with both endpoints assigned must have images
        for e in &g.edges {
            if let (Some(s), Some(t)) = (assign[e.src], assign[e.tgt]) {
                if parallel[s * h.num_nodes() + t] == 0 {
                    return 0;
                }
            }
        }
        if k == free.len() {
            return g.edges.iter().fold(1u64, |acc, e| {
                acc.saturating_mul(parallel[assign[e.src].unwrap() * h.num_nodes() + assign[e.tgt].unwrap()])
            });
        }
        let mut total = 0u64;
        for b in 0..h.num_nodes() {
            assign[free[k]] = Some(b);
            total = total.saturating_add(go(k + 1, free, assign, g, h, parallel));
        }
        assign[free[k]] = None;
        total
    }
    go(0, &free, &mut assign, g, h, &parallel)
}

/// Short element names: `a..z`, then `a1..z1`, and so on.
pub fn element_name(i: usize) -> String {
    let letter = (b'a' + (i % 26) as u8) as char;
    if i < 26 {
        letter.to_string()
    } else {
        format!("{letter}{}", i / 26)
    }
}

/// A finitely presented evolutive set: a finite set with a partial successor,
/// freely extended by a fresh infinite chain above every frontier element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvolutivePresentation {
    pub elements: Vec<String>,
    pub succ: Vec<Option<usize>>,
    /// Node `x` of the input is `s^k(element)` for `(element, k)`.
    pub generator_image: Vec<(usize, usize)>,
    /// The certified truncation depth.
    pub depth: usize,
}

impl EvolutivePresentation {
    pub fn frontier(&self) -> Vec<usize> {
        (0..self.elements.len()).filter(|&i| self.succ[i].is_none()).collect()
    }

    /// The part of the presented set within `k` steps of the elements, as an
    /// endomap graph on `elements + frontier chains of length k`.
    pub fn unfold(&self, k: usize) -> (Vec<String>, Vec<Option<usize>>) {
        let mut names = self.elements.clone();
        let mut succ = self.succ.clone();
        for f in self.frontier() {
            let mut prev = f;
            for step in 1..=k {
                names.push(format!("{}+{}", self.elements[f], step));
                succ.push(None);
                let idx = names.len() - 1;
                succ[prev] = Some(idx);
                prev = idx;
            }
        }
        (names, succ)
    }
}

impl fmt::Display for EvolutivePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.elements.len())
            .map(|i| match self.succ[i] {
                Some(j) => format!("{} -> {}", self.elements[i], self.elements[j]),
                None => format!("{} -> ...", self.elements[i]),
            })
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// `↑P` in evolutive sets: components of the antichain times `P`, truncated
/// at a depth that doubles until the truncation is certified.
pub fn reflect_eset(p: &FinGraph, depth_cap: usize) -> Result<EvolutivePresentation> {
    let mut depth = 2 * (p.num_nodes() + p.num_edges()) + 2;
    while depth <= depth_cap {
        if let Some(found) = reflect_eset_at(p, depth) {
            return Ok(found);
        }
        depth *= 2;
    }
    Err(Error::DepthCap { cap: depth_cap })
}

/// The presentation read off a truncation at `depth` (at least 2), or `None`
/// when that truncation is not certified.
pub fn reflect_eset_at(p: &FinGraph, depth: usize) -> Option<EvolutivePresentation> {
    assert!(depth >= 2);
    let v = p.num_nodes();
    let mut uf = antichain_classes(p, depth);
    if !certified(&mut uf, p, depth) {
        return None;
    }
    // elements are the level-0 classes; s[0, x] = [1, x]
    let mut element_of_root: HashMap<usize, usize> = HashMap::new();
    let mut generator_image = Vec::with_capacity(v);
    for x in 0..v {
        let r = uf.find(x);
        let next = element_of_root.len();
        generator_image.push((*element_of_root.entry(r).or_insert(next), 0));
    }
    let count = element_of_root.len();
    let mut succ = vec![None; count];
    for x in 0..v {
        let up = uf.find(v + x);
        succ[generator_image[x].0] = element_of_root.get(&up).copied();
    }
    Some(normalize(succ, generator_image, depth))
}

fn antichain_classes(p: &FinGraph, depth: usize) -> UnionFind {
    let v = p.num_nodes();
    let mut uf = UnionFind::new((depth + 1) * v);
    for e in &p.edges {
        for l in 0..depth {
            uf.union((l + 1) * v + e.src, l * v + e.tgt);
        }
    }
    close_under_shift(&mut uf, depth * v, v);
    uf
}

/// Closes `uf` under `i ~ j => i + shift ~ j + shift` for members below `limit`.
fn close_under_shift(uf: &mut UnionFind, limit: usize, shift: usize) {
    let mut first = vec![usize::MAX; uf.len()];
    loop {
        let mut changed = false;
        first.iter_mut().for_each(|f| *f = usize::MAX);
        for i in 0..limit {
            let r = uf.find(i);
            if first[r] == usize::MAX {
                first[r] = i;
            } else if uf.union(i + shift, first[r] + shift) {
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}

/// Top two slices repeat the pattern below them, and no merge is pending
/// from the missing level above the top.
fn certified(uf: &mut UnionFind, p: &FinGraph, n: usize) -> bool {
    let v = p.num_nodes();
    let at = |l: usize, x: usize| l * v + x;
    for x in 0..v {
        for y in 0..v {
            if uf.same(at(n - 1, x), at(n - 1, y)) != uf.same(at(n, x), at(n, y)) {
                return false;
            }
            if uf.same(at(n - 1, x), at(n - 2, y)) != uf.same(at(n, x), at(n - 1, y)) {
                return false;
            }
        }
    }
    for e in &p.edges {
        // [n + 1, src] = [n, tgt], so every shift of a partner of [n, src] is [n, tgt]
        let top = at(n, e.tgt);
        for m in 0..n {
            for z in 0..v {
                if uf.same(at(m, z), at(n, e.src)) && !uf.same(top, at(m + 1, z)) {
                    return false;
                }
            }
        }
        for f in &p.edges {
            if uf.same(at(n, f.src), at(n, e.src)) && !uf.same(top, at(n, f.tgt)) {
                return false;
            }
        }
    }
    true
}

/// Drops frontier elements with a single predecessor, then renames elements
/// along successor chains starting from those without predecessors.
fn normalize(mut succ: Vec<Option<usize>>, mut generator_image: Vec<(usize, usize)>, depth: usize) -> EvolutivePresentation {
    let count = succ.len();
    let mut alive = vec![true; count];
    loop {
        let mut preds = vec![Vec::new(); count];
        for (i, s) in succ.iter().enumerate() {
            if let (true, Some(j)) = (alive[i], s) {
                preds[*j].push(i);
            }
        }
        let Some(t) = (0..count).find(|&t| alive[t] && succ[t].is_none() && preds[t].len() == 1) else {
            break;
        };
        let s = preds[t][0];
        alive[t] = false;
        succ[s] = None;
        for g in generator_image.iter_mut().filter(|g| g.0 == t) {
            *g = (s, g.1 + 1);
        }
    }
    // first node (at step 0) of each surviving element
    let mut first_node = vec![usize::MAX; count];
    for (x, &(e, k)) in generator_image.iter().enumerate() {
        if k == 0 && first_node[e] == usize::MAX {
            first_node[e] = x;
        }
    }
    let mut has_pred = vec![false; count];
    for (i, s) in succ.iter().enumerate() {
        if let (true, Some(j)) = (alive[i], s) {
            has_pred[*j] = true;
        }
    }
    let mut starts: Vec<usize> = (0..count).filter(|&i| alive[i]).collect();
    starts.sort_by_key(|&i| (has_pred[i], first_node[i]));
    let mut new_index = vec![usize::MAX; count];
    let mut order = Vec::new();
    for s in starts {
        let mut i = s;
        while new_index[i] == usize::MAX {
            new_index[i] = order.len();
            order.push(i);
            match succ[i] {
                Some(j) => i = j,
                None => break,
            }
        }
    }
    EvolutivePresentation {
        elements: (0..order.len()).map(element_name).collect(),
        succ: order.iter().map(|&i| succ[i].map(|j| new_index[j])).collect(),
        generator_image: generator_image.into_iter().map(|(e, k)| (new_index[e], k)).collect(),
        depth,
    }
}

/// A reflection into a class of finite endomaps, with the unit on nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphReflection {
    pub graph: FinGraph,
    pub unit: Vec<usize>,
}

/// Components of `shape x P` with the action induced by `shift` on `shape`;
/// each edge `a -> b` of `shape` pairs with each edge `x -> y` of `P`
/// as `(a, x) -> (b, y)`.
fn reflect_through(shape: &FinGraph, shift: &[usize], origin: usize, p: &FinGraph) -> GraphReflection {
    let prod = graph_product(shape, p);
    let comps = graph_components(&prod);
    let n = p.num_nodes();
    let names = comps.reps.iter().map(|&r| format!("[{}]", &prod.nodes[r.index()][1..prod.nodes[r.index()].len() - 1])).collect();
    let succ: Vec<usize> = comps
        .reps
        .iter()
        .map(|&r| {
            let (a, x) = (r.index() / n, r.index() % n);
            comps.class_of[shift[a] * n + x]
        })
        .collect();
    GraphReflection {
        graph: FinGraph::from_endomap(names, &succ),
        unit: (0..n).map(|x| comps.class_of[origin * n + x]).collect(),
    }
}

/// `E^op`: `o <- f` with a loop at `f`; shift `o, f -> f`.
fn e_op() -> FinGraph {
    let mut g = FinGraph::new();
    let o = g.node("o");
    let f = g.node("f");
    g.edge("d", f, o);
    g.edge("l", f, f);
    g
}

/// `↑P` in idempotent endomaps: components of `E^op x P`.
pub fn reflect_idem(p: &FinGraph) -> GraphReflection {
    reflect_through(&e_op(), &[1, 1], 0, p)
}

/// `↑P` in `n`-periodic endomaps: components of `Z_n x P`.
pub fn reflect_periodic(p: &FinGraph, n: usize) -> Result<GraphReflection> {
    if n == 0 {
        return Err(Error::Invalid("period must be positive".into()));
    }
    // edges i + 1 -> i, so that [i + 1, x] = [i, y] for x -> y
    let mut z = FinGraph::new();
    for i in 0..n {
        z.node(i.to_string());
    }
    for i in 0..n {
        z.edge(format!("s{i}"), (i + 1) % n, i);
    }
    let shift: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    Ok(reflect_through(&z, &shift, 0, p))
}

/// One orbit of a bijection: `Z` or `Z_period`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Orbit {
    pub period: Option<usize>,
}

/// `↑P` in bijections: one orbit per component of `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BijPresentation {
    pub orbits: Vec<Orbit>,
    /// Node `x` is `s^k(base of orbit)` for `(orbit, k)`, `k` reduced modulo the period.
    pub generator_image: Vec<(usize, i64)>,
}

impl BijPresentation {
    /// The finite bijection, when no orbit is `Z`.
    pub fn to_graph(&self) -> Option<FinGraph> {
        let mut names = Vec::new();
        let mut succ = Vec::new();
        for (k, o) in self.orbits.iter().enumerate() {
            let d = o.period?;
            let base = names.len();
            for i in 0..d {
                names.push(format!("{}{}", element_name(k), i));
                succ.push(base + (i + 1) % d);
            }
        }
        Some(FinGraph::from_endomap(names, &succ))
    }
}

impl fmt::Display for BijPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .orbits
            .iter()
            .map(|o| match o.period {
                Some(d) => format!("Z_{d}"),
                None => "Z".to_string(),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Components of `Z x P`: each component of `P` gets a potential with
/// `h(y) = h(x) + 1` along edges; the orbit has period the gcd of the defects.
pub fn reflect_bij(p: &FinGraph) -> BijPresentation {
    let v = p.num_nodes();
    let mut pot: Vec<Option<i64>> = vec![None; v];
    let mut orbit_of = vec![0; v];
    let mut orbits = Vec::new();
    for start in 0..v {
        if pot[start].is_some() {
            continue;
        }
        let k = orbits.len();
        pot[start] = Some(0);
        let mut stack = vec![start];
        let mut members = Vec::new();
        let mut period = 0u64;
        while let Some(x) = stack.pop() {
            members.push(x);
            orbit_of[x] = k;
            let hx = pot[x].unwrap();
            for e in &p.edges {
                let (y, hy) = if e.src == x {
                    (e.tgt, hx + 1)
                } else if e.tgt == x {
                    (e.src, hx - 1)
                } else {
                    continue;
                };
                match pot[y] {
                    None => {
                        pot[y] = Some(hy);
                        stack.push(y);
                    }
                    Some(h) => period = gcd(period, h.abs_diff(hy)),
                }
            }
        }
        let min = members.iter().map(|&x| pot[x].unwrap()).min().unwrap();
        for &x in &members {
            let h = pot[x].unwrap() - min;
            pot[x] = Some(if period > 0 { h.rem_euclid(period as i64) } else { h });
        }
        orbits.push(Orbit {
            period: (period > 0).then_some(period as usize),
        });
    }
    BijPresentation {
        orbits,
        generator_image: (0..v).map(|x| (orbit_of[x], pot[x].unwrap())).collect(),
    }
}

/// Target classes of endomaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndoClass {
    Eset,
    Idem,
    Bij,
    Periodic(usize),
}

impl FromStr for EndoClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eset" => Ok(EndoClass::Eset),
            "idem" => Ok(EndoClass::Idem),
            "bij" => Ok(EndoClass::Bij),
            _ => match s.strip_prefix("periodic:").map(str::parse::<usize>) {
                Some(Ok(n)) if n > 0 => Ok(EndoClass::Periodic(n)),
                _ => Err(Error::Invalid(format!("unknown target `{s}`"))),
            },
        }
    }
}

/// Why a coreflection is infinite. No cardinality is claimed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfinityReport {
    pub node: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoreflectOutcome {
    Finite(FinGraph),
    Infinite(InfinityReport),
}

/// `P↑` in the given class, materialized when finite.
pub fn coreflect_finite(p: &FinGraph, target: EndoClass) -> Result<CoreflectOutcome> {
    match target {
        EndoClass::Idem => Ok(CoreflectOutcome::Finite(coreflect_idem(p))),
        EndoClass::Periodic(n) => coreflect_periodic(p, n).map(CoreflectOutcome::Finite),
        EndoClass::Eset => coreflect_eset(p),
        EndoClass::Bij => Ok(coreflect_bij(p)),
    }
}

/// Morphisms `E -> P`: an edge `a: x -> y` with a loop `l` at `y`; `s(a, l) = (l, l)`.
fn coreflect_idem(p: &FinGraph) -> FinGraph {
    let mut pairs = Vec::new();
    for (a, ea) in p.edges.iter().enumerate() {
        for (l, el) in p.edges.iter().enumerate() {
            if el.src == ea.tgt && el.tgt == ea.tgt {
                pairs.push((a, l));
            }
        }
    }
    let names = pairs.iter().map(|&(a, l)| format!("{}/{}", p.edges[a].name, p.edges[l].name)).collect();
    let succ: Vec<usize> = pairs.iter().map(|&(_, l)| pairs.iter().position(|&q| q == (l, l)).unwrap()).collect();
    FinGraph::from_endomap(names, &succ)
}

/// Closed walks of length `n` with a marked start, rotated by the action.
fn coreflect_periodic(p: &FinGraph, n: usize) -> Result<FinGraph> {
    if n == 0 {
        return Err(Error::Invalid("period must be positive".into()));
    }
    let cap = limits().fiber_elements as usize;
    let mut walks: Vec<Vec<usize>> = Vec::new();
    let mut current = Vec::new();
    fn extend(p: &FinGraph, n: usize, current: &mut Vec<usize>, walks: &mut Vec<Vec<usize>>, cap: usize) -> Result<()> {
        if current.len() == n {
            if p.edges[current[n - 1]].tgt == p.edges[current[0]].src {
                if walks.len() == cap {
                    return Err(Error::SizeCap {
                        what: "closed walks".into(),
                        cap: cap as u64,
                    });
                }
                walks.push(current.clone());
            }
            return Ok(());
        }
        let candidates: Vec<usize> = match current.last() {
            Some(&e) => p.out_edges(p.edges[e].tgt).collect(),
            None => (0..p.num_edges()).collect(),
        };
        for e in candidates {
            current.push(e);
            extend(p, n, current, walks, cap)?;
            current.pop();
        }
        Ok(())
    }
    extend(p, n, &mut current, &mut walks, cap)?;
    let index: HashMap<Vec<usize>, usize> = walks.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let names = walks
        .iter()
        .map(|w| {
            let parts: Vec<&str> = w.iter().map(|&e| p.edges[e].name.as_str()).collect();
            format!("[{}]", parts.join(","))
        })
        .collect();
    let succ: Vec<usize> = walks
        .iter()
        .map(|w| {
            let mut r = w[1..].to_vec();
            r.push(w[0]);
            index[&r]
        })
        .collect();
    Ok(FinGraph::from_endomap(names, &succ))
}

/// Nodes from which arbitrarily long paths leave (`forward`) or arrive.
fn live_nodes(p: &FinGraph, forward: bool) -> Vec<bool> {
    let mut live = vec![true; p.num_nodes()];
    loop {
        let mut changed = false;
        for x in 0..p.num_nodes() {
            if live[x] {
                let ok = p.edges.iter().any(|e| {
                    if forward {
                        e.src == x && live[e.tgt]
                    } else {
                        e.tgt == x && live[e.src]
                    }
                });
                if !ok {
                    live[x] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return live;
        }
    }
}

/// Nodes lying on a cycle of the subgraph spanned by `keep`.
fn cyclic_nodes(p: &FinGraph, keep: &[bool]) -> Vec<bool> {
    let n = p.num_nodes();
    let mut reach = vec![vec![false; n]; n];
    for e in &p.edges {
        if keep[e.src] && keep[e.tgt] {
            reach[e.src][e.tgt] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    (0..n).map(|x| reach[x][x]).collect()
}

/// Infinite paths. Finite exactly when every live node on a live cycle has
/// one live out-edge; a path is then its edges up to the first such node.
fn coreflect_eset(p: &FinGraph) -> Result<CoreflectOutcome> {
    let live = live_nodes(p, true);
    let cyclic = cyclic_nodes(p, &live);
    let live_out = |x: usize| -> Vec<usize> { p.out_edges(x).filter(|&e| live[p.edges[e].tgt]).collect() };
    for x in 0..p.num_nodes() {
        if live[x] && cyclic[x] && live_out(x).len() != 1 {
            return Ok(CoreflectOutcome::Infinite(InfinityReport {
                node: p.nodes[x].clone(),
                reason: format!("node on a live cycle with {} live out-edges", live_out(x).len()),
            }));
        }
    }
    let cap = limits().fiber_elements as usize;
    // prefixes[x]: edge lists from x to its first cyclic node
    let mut prefixes: Vec<Option<Vec<Vec<usize>>>> = vec![None; p.num_nodes()];
    fn paths_from(
        x: usize,
        p: &FinGraph,
        cyclic: &[bool],
        live_out: &dyn Fn(usize) -> Vec<usize>,
        memo: &mut Vec<Option<Vec<Vec<usize>>>>,
        cap: usize,
    ) -> Result<Vec<Vec<usize>>> {
        if let Some(found) = &memo[x] {
            return Ok(found.clone());
        }
        let out = if cyclic[x] {
            vec![Vec::new()]
        } else {
            let mut out = Vec::new();
            for e in live_out(x) {
                for rest in paths_from(p.edges[e].tgt, p, cyclic, live_out, memo, cap)? {
                    let mut path = vec![e];
                    path.extend(rest);
                    out.push(path);
                }
                if out.len() > cap {
                    return Err(Error::SizeCap {
                        what: "infinite paths".into(),
                        cap: cap as u64,
                    });
                }
            }
            out
        };
        memo[x] = Some(out.clone());
        Ok(out)
    }
    let mut elements: Vec<(usize, Vec<usize>)> = Vec::new();
    for x in 0..p.num_nodes() {
        if live[x] {
            for path in paths_from(x, p, &cyclic, &live_out, &mut prefixes, cap)? {
                elements.push((x, path));
            }
        }
    }
    let index: HashMap<(usize, Vec<usize>), usize> = elements.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let names = elements
        .iter()
        .map(|(x, path)| {
            if path.is_empty() {
                p.nodes[*x].clone()
            } else {
                let parts: Vec<&str> = path.iter().map(|&e| p.edges[e].name.as_str()).collect();
                format!("{}/{}", p.nodes[*x], parts.join(","))
            }
        })
        .collect();
    let succ: Vec<usize> = elements
        .iter()
        .map(|(x, path)| match path.first() {
            Some(&e) => index[&(p.edges[e].tgt, path[1..].to_vec())],
            None => index[&(p.edges[live_out(*x)[0]].tgt, Vec::new())],
        })
        .collect();
    Ok(CoreflectOutcome::Finite(FinGraph::from_endomap(names, &succ)))
}

/// Bi-infinite paths; finite exactly when the two-sided live core is a sum of cycles.
fn coreflect_bij(p: &FinGraph) -> CoreflectOutcome {
    let fwd = live_nodes(p, true);
    let bwd = live_nodes(p, false);
    let core: Vec<bool> = (0..p.num_nodes()).map(|x| fwd[x] && bwd[x]).collect();
    let mut names = Vec::new();
    let mut index = vec![usize::MAX; p.num_nodes()];
    for x in 0..p.num_nodes() {
        if core[x] {
            index[x] = names.len();
            names.push(p.nodes[x].clone());
        }
    }
    let mut succ = vec![usize::MAX; names.len()];
    for x in 0..p.num_nodes() {
        if !core[x] {
            continue;
        }
        let outs: Vec<usize> = p.out_edges(x).filter(|&e| core[p.edges[e].tgt]).collect();
        let ins = p.in_edges(x).filter(|&e| core[p.edges[e].src]).count();
        if outs.len() != 1 || ins != 1 {
            return CoreflectOutcome::Infinite(InfinityReport {
                node: p.nodes[x].clone(),
                reason: format!("core node with {} out-edges and {} in-edges", outs.len(), ins),
            });
        }
        succ[index[x]] = index[p.edges[outs[0]].tgt];
    }
    CoreflectOutcome::Finite(FinGraph::from_endomap(names, &succ))
}

/// The free category on an acyclic graph; arrow names compose as `e2.e1`.
#[derive(Debug, Clone)]
pub struct FreeCategory {
    pub category: Arc<FinCategory>,
    /// Edge lists of the non-identity arrows, first edge first.
    pub paths: HashMap<Vec<usize>, ArrowId>,
}

pub fn free_category(g: &FinGraph) -> Result<FreeCategory> {
    if !g.is_acyclic() {
        return Err(Error::UnsupportedBase("free category on a graph with cycles is infinite".into()));
    }
    let cap = limits().fiber_elements as usize;
    let mut all: Vec<Vec<usize>> = g.edges.iter().enumerate().map(|(i, _)| vec![i]).collect();
    let mut frontier = all.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for path in &frontier {
            let end = g.edges[*path.last().unwrap()].tgt;
            for e in g.out_edges(end) {
                let mut longer = path.clone();
                longer.push(e);
                next.push(longer);
            }
        }
        all.extend(next.iter().cloned());
        if all.len() > cap {
            return Err(Error::SizeCap {
                what: "paths of the free category".into(),
                cap: cap as u64,
            });
        }
        frontier = next;
    }
    let mut b = CategoryBuilder::new();
    for n in &g.nodes {
        b.object(n.clone());
    }
    let mut paths = HashMap::new();
    for path in &all {
        let names: Vec<&str> = path.iter().rev().map(|&e| g.edges[e].name.as_str()).collect();
        let src = ObjId::from(g.edges[path[0]].src);
        let tgt = ObjId::from(g.edges[*path.last().unwrap()].tgt);
        paths.insert(path.clone(), b.arrow(names.join("."), src, tgt));
    }
    for f in &all {
        let end = g.edges[*f.last().unwrap()].tgt;
        for h in all.iter().filter(|h| g.edges[h[0]].src == end) {
            let mut gf = f.clone();
            gf.extend(h.iter().copied());
            b.compose(paths[h], paths[f], paths[&gf]);
        }
    }
    Ok(FreeCategory {
        category: Arc::new(b.build()),
        paths,
    })
}

/// `F(p): F(P) -> F(X)` as a category over `F(X)`.
pub fn free_over(p: &GraphMorphism) -> Result<OverCategory> {
    let fx = free_category(&p.cod)?;
    let fp = free_category(&p.dom)?;
    let (dom, cod) = (&fp.category, &fx.category);
    let mut arrow_map = vec![ArrowId(0); dom.num_arrows()];
    for x in dom.objects() {
        arrow_map[dom.id(x).index()] = cod.id(ObjId::from(p.node_map[x.index()]));
    }
    for (path, &a) in &fp.paths {
        let image: Vec<usize> = path.iter().map(|&e| p.edge_map[e]).collect();
        arrow_map[a.index()] = fx.paths[&image];
    }
    let obj_map = p.node_map.iter().map(|&x| ObjId::from(x)).collect();
    Ok(OverCategory::new(Functor::new(dom.clone(), cod.clone(), obj_map, arrow_map)))
}

/// Reflection of a graph over an acyclic base into graph opfibrations
/// (covariant) or fibrations (contravariant), as a set functor on `F(X)`.
pub fn reflect_over(p: &GraphMorphism, variance: Variance) -> Result<SetFunctor> {
    let q = free_over(p)?;
    Ok(match variance {
        Variance::Covariant => reflect_dof(&q)?.functor,
        Variance::Contravariant => reflect_df(&q)?.functor,
    })
}

/// Coreflection over an acyclic base, dual to [`reflect_over`].
pub fn coreflect_over(p: &GraphMorphism, variance: Variance) -> Result<SetFunctor> {
    let q = free_over(p)?;
    Ok(match variance {
        Variance::Covariant => coreflect_dof(&q)?.functor,
        Variance::Contravariant => coreflect_df(&q)?.functor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn graph(nodes: &[&str], edges: &[(&str, &str, &str)]) -> FinGraph {
        let mut g = FinGraph::new();
        for n in nodes {
            g.node(*n);
        }
        for (name, s, t) in edges {
            let (s, t) = (g.find_node(s).unwrap(), g.find_node(t).unwrap());
            g.edge(*name, s, t);
        }
        g
    }

    /// The graphs of the worked examples, in order, then `P1`, `P2`, `P3`.
    fn gallery() -> Vec<FinGraph> {
        vec![
            graph(&["x", "y"], &[("a", "x", "y")]),
            graph(&["l", "m", "r"], &[("u", "l", "l"), ("a", "m", "l"), ("b", "m", "r"), ("v", "r", "r")]),
            graph(&["l", "m", "r"], &[("c", "l", "r"), ("a", "m", "l"), ("b", "m", "r")]),
            graph(&["l", "m", "r"], &[("a", "m", "l"), ("b", "m", "r")]),
            graph(&["x", "y"], &[("u", "x", "x"), ("a", "x", "y")]),
            graph(&["x", "y"], &[("u", "x", "x"), ("a", "x", "y"), ("v", "y", "y")]),
            graph(&["x"], &[("u", "x", "x"), ("v", "x", "x")]),
        ]
    }

    /// Unary congruence closure: merge the targets of edges leaving one class.
    fn eset_oracle(p: &FinGraph) -> EvolutivePresentation {
        let v = p.num_nodes();
        let mut uf = UnionFind::new(v);
        loop {
            let mut succ: Vec<Option<usize>> = vec![None; v];
            let mut changed = false;
            for e in &p.edges {
                let r = uf.find(e.src);
                match succ[r] {
                    None => succ[r] = Some(e.tgt),
                    Some(t) => changed |= uf.union(t, e.tgt),
                }
            }
            if !changed {
                let (reps, class_of) = uf.classes();
                let mut s = vec![None; reps.len()];
                for e in &p.edges {
                    s[class_of[e.src]] = Some(class_of[e.tgt]);
                }
                return normalize(s, class_of.into_iter().map(|c| (c, 0)).collect(), 0);
            }
        }
    }

    fn same_presentation(a: &EvolutivePresentation, b: &EvolutivePresentation) -> bool {
        a.elements == b.elements && a.succ == b.succ && a.generator_image == b.generator_image
    }

    #[test]
    fn components_and_products() {
        let lp = FinGraph::cycle(1);
        assert_eq!(graph_components(&lp).count(), 1);
        assert_eq!(graph_components(&FinGraph::discrete(2)).count(), 2);
        let chain = graph(&["a", "b", "c"], &[("f", "a", "b"), ("g", "b", "c")]);
        assert_eq!(graph_components(&chain).count(), 1);
        let prod = graph_product(&chain, &lp);
        assert_eq!((prod.num_nodes(), prod.num_edges()), (3, 2));
        assert_eq!(graph_product(&FinGraph::cycle(2), &FinGraph::cycle(3)).cycle_lengths(), Some(vec![6]));
        assert_eq!(graph_product(&FinGraph::cycle(2), &FinGraph::cycle(4)).cycle_lengths(), Some(vec![4, 4]));
    }

    #[test]
    fn gcd_law() {
        for k in 1..=8usize {
            for n in 1..=8usize {
                let g = gcd(k as u64, n as u64) as usize;
                let lengths = graph_product(&FinGraph::cycle(k), &FinGraph::cycle(n)).cycle_lengths().unwrap();
                assert_eq!(lengths, vec![k * n / g; g]);
            }
        }
    }

    #[test]
    fn fibrations_over_the_loop() {
        let lp = FinGraph::cycle(1);
        let id = GraphMorphism::new(lp.clone(), lp.clone(), vec![0], vec![0]).unwrap();
        assert!(is_graph_opfibration(&id) && is_graph_fibration(&id));
        assert!(is_graph_opfibration(&GraphMorphism::to_loop(&FinGraph::cycle(3))));
        let arrow = graph(&["x", "y"], &[("a", "x", "y")]);
        assert!(!is_graph_opfibration(&GraphMorphism::to_loop(&arrow)));
        assert!(!is_graph_fibration(&GraphMorphism::to_loop(&arrow)));
        assert!(GraphMorphism::new(arrow.clone(), arrow.clone(), vec![0, 0], vec![0]).is_err());
    }

    #[test]
    fn eset_reflections_of_the_gallery() {
        let expected = ["a -> ...", "a -> b; b -> b", "a -> b; b -> b", "a -> ...", "a -> a", "a -> a", "a -> a"];
        for (g, want) in gallery().iter().zip(expected) {
            let r = reflect_eset(g, 1 << 12).unwrap();
            assert_eq!(r.to_string(), want);
            assert!(same_presentation(&r, &eset_oracle(g)));
        }
        // the target of the single edge is one step above the generator
        let r = reflect_eset(&gallery()[0], 1 << 12).unwrap();
        assert_eq!(r.generator_image, vec![(0, 0), (0, 1)]);
        assert_eq!(reflect_eset(&FinGraph::new(), 16).unwrap().to_string(), "");
    }

    #[test]
    fn eset_depth_cap() {
        let g = gallery()[1].clone();
        assert!(matches!(reflect_eset(&g, 4), Err(Error::DepthCap { cap: 4 })));
    }

    #[test]
    fn idem_reflections() {
        let chain = graph(&["x", "y"], &[("a", "x", "y")]);
        let r = reflect_idem(&chain);
        assert_eq!(r.graph.num_nodes(), 2);
        let succ = r.graph.endomap().unwrap();
        assert_eq!(succ[r.unit[0]], r.unit[1]);
        assert_eq!(succ[r.unit[1]], r.unit[1]);
        assert_eq!(reflect_idem(&FinGraph::cycle(1)).graph.num_nodes(), 1);
        // connected, every node a codomain: a single fixed point
        assert_eq!(reflect_idem(&FinGraph::cycle(3)).graph.num_nodes(), 1);
        for g in gallery() {
            let sources = (0..g.num_nodes()).filter(|&x| g.in_edges(x).next().is_none()).count();
            assert_eq!(reflect_idem(&g).graph.num_nodes(), sources + 1);
        }
    }

    #[test]
    fn periodic_reflections() {
        for k in 1..=6usize {
            for n in 1..=6usize {
                let r = reflect_periodic(&FinGraph::cycle(k), n).unwrap();
                assert_eq!(r.graph.cycle_lengths(), Some(vec![gcd(k as u64, n as u64) as usize]));
            }
        }
        let mut two_cycles = FinGraph::cycle(2);
        two_cycles.node("c");
        let c = two_cycles.num_nodes() - 1;
        two_cycles.edge("t", c, c);
        let r = reflect_periodic(&two_cycles, 4).unwrap();
        assert_eq!(r.graph.cycle_lengths(), Some(vec![1, 2]));
        assert!(reflect_periodic(&FinGraph::cycle(1), 0).is_err());
        assert_eq!(reflect_periodic(&FinGraph::cycle(1), 5).unwrap().graph.cycle_lengths(), Some(vec![1]));
    }

    #[test]
    fn bij_reflections() {
        let g = gallery();
        let want = ["Z", "Z_1", "Z_1", "Z", "Z_1", "Z_1", "Z_1"];
        for (p, w) in g.iter().zip(want) {
            assert_eq!(reflect_bij(p).to_string(), w);
        }
        let tail = graph(&["x", "y", "z"], &[("a", "x", "y"), ("b", "y", "z"), ("c", "z", "y")]);
        let r = reflect_bij(&tail);
        assert_eq!(r.to_string(), "Z_2");
        assert_eq!(r.to_graph().unwrap().cycle_lengths(), Some(vec![2]));
        match coreflect_finite(&tail, EndoClass::Bij).unwrap() {
            CoreflectOutcome::Finite(c) => assert_eq!(c.cycle_lengths(), Some(vec![2])),
            other => panic!("{other:?}"),
        }
        assert_eq!(reflect_bij(&FinGraph::cycle(3)).to_string(), "Z_3");
    }

    /// Classes of `(k, x)` for `k` in `[-w, w]` under `(k + 1, x) ~ (k, y)`.
    fn bij_period_oracle(p: &FinGraph, x: usize) -> Option<usize> {
        let w = 2 * (p.num_nodes() + p.num_edges()) as i64 + 2;
        let v = p.num_nodes();
        let at = |k: i64, x: usize| (k + w) as usize * v + x;
        let mut uf = UnionFind::new((2 * w + 1) as usize * v);
        for e in &p.edges {
            for k in -w..w {
                uf.union(at(k + 1, e.src), at(k, e.tgt));
            }
        }
        (1..=p.num_edges() as i64).find(|&k| uf.same(at(0, x), at(k, x))).map(|k| k as usize)
    }

    #[test]
    fn bij_periods_against_truncation() {
        let mut samples = gallery();
        samples.push(graph(&["x", "y", "z"], &[("a", "x", "y"), ("b", "y", "z"), ("c", "z", "y")]));
        samples.push(graph(&["x", "y", "z"], &[("a", "x", "y"), ("b", "y", "z"), ("c", "x", "z")]));
        samples.push(graph(&["x", "y", "z", "w"], &[("a", "x", "y"), ("b", "y", "x"), ("c", "z", "w"), ("d", "w", "z"), ("e", "w", "z"), ("f", "z", "z")]));
        for p in samples {
            let r = reflect_bij(&p);
            for x in 0..p.num_nodes() {
                assert_eq!(r.orbits[r.generator_image[x].0].period, bij_period_oracle(&p, x));
            }
        }
    }

    #[test]
    fn eset_coreflections_of_the_gallery() {
        let g = gallery();
        let finite = |p: &FinGraph| match coreflect_finite(p, EndoClass::Eset).unwrap() {
            CoreflectOutcome::Finite(c) => Some(c),
            CoreflectOutcome::Infinite(_) => None,
        };
        assert_eq!(finite(&g[0]).unwrap().num_nodes(), 0);
        let c = finite(&g[1]).unwrap();
        assert_eq!(c.num_nodes(), 4);
        assert_eq!(graph_components(&c).count(), 2);
        assert_eq!(finite(&g[4]).unwrap().cycle_lengths(), Some(vec![1]));
        assert!(finite(&g[5]).is_none());
        assert!(finite(&g[6]).is_none());
    }

    #[test]
    fn idem_and_periodic_coreflections() {
        let g = gallery();
        let CoreflectOutcome::Finite(c) = coreflect_finite(&g[1], EndoClass::Idem).unwrap() else { panic!() };
        // (a, u), (b, v), (u, u), (v, v)
        assert_eq!(c.num_nodes(), 4);
        let CoreflectOutcome::Finite(c) = coreflect_finite(&FinGraph::cycle(3), EndoClass::Periodic(6)).unwrap() else { panic!() };
        assert_eq!(c.cycle_lengths(), Some(vec![3]));
        let CoreflectOutcome::Finite(c) = coreflect_finite(&FinGraph::cycle(3), EndoClass::Periodic(2)).unwrap() else { panic!() };
        assert_eq!(c.num_nodes(), 0);
    }

    #[test]
    fn free_category_reflections() {
        // base a -> b, P two nodes over a both mapping to one node over b
        let x = graph(&["a", "b"], &[("f", "a", "b")]);
        let p = graph(&["p", "q", "r"], &[("g", "p", "r"), ("h", "q", "r")]);
        let m = GraphMorphism::new(p, x.clone(), vec![0, 0, 1], vec![0, 0]).unwrap();
        assert!(is_graph_opfibration(&m));
        assert!(!is_graph_fibration(&m));
        let up = reflect_over(&m, Variance::Covariant).unwrap();
        assert_eq!((up.fiber_size(ObjId(0)), up.fiber_size(ObjId(1))), (2, 1));
        let down = reflect_over(&m, Variance::Contravariant).unwrap();
        assert_eq!((down.fiber_size(ObjId(0)), down.fiber_size(ObjId(1))), (1, 1));
        let co = coreflect_over(&m, Variance::Contravariant).unwrap();
        assert_eq!((co.fiber_size(ObjId(0)), co.fiber_size(ObjId(1))), (2, 2));
        let cyc = GraphMorphism::to_loop(&x);
        assert!(matches!(reflect_over(&cyc, Variance::Covariant), Err(Error::UnsupportedBase(_))));
        let fc = free_category(&graph(&["a", "b", "c"], &[("f", "a", "b"), ("g", "b", "c")])).unwrap();
        assert_eq!(fc.category.num_arrows(), 6);
        assert!(fc.category.is_valid());
        assert!(fc.category.find_arrow("g.f").is_some());
    }

    fn arb_graph() -> impl Strategy<Value = FinGraph> {
        (1usize..=5).prop_flat_map(|n| {
            prop::collection::vec((0..n, 0..n), 0..=6).prop_map(move |edges| {
                let mut g = FinGraph::discrete(n);
                for (i, (s, t)) in edges.into_iter().enumerate() {
                    g.edge(format!("e{i}"), s, t);
                }
                g
            })
        })
    }

    fn arb_endomap(idempotent: bool) -> impl Strategy<Value = FinGraph> {
        (1usize..=4).prop_flat_map(move |n| {
            prop::collection::vec(0..n, n).prop_map(move |r| {
                let succ: Vec<usize> = if idempotent {
                    let mut fixed: Vec<usize> = (0..n).filter(|&x| r[x] == x).collect();
                    if fixed.is_empty() {
                        fixed.push(0);
                    }
                    (0..n)
                        .map(|x| if fixed.contains(&x) { x } else if fixed.contains(&r[x]) { r[x] } else { fixed[0] })
                        .collect()
                } else {
                    r
                };
                let names = (0..n).map(|i| format!("t{i}")).collect();
                FinGraph::from_endomap(names, &succ)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn eset_truncation_matches_congruence_closure(p in arb_graph()) {
            let r = reflect_eset(&p, 1 << 12).unwrap();
            prop_assert!(same_presentation(&r, &eset_oracle(&p)));
            let deeper = reflect_eset_at(&p, r.depth + 3).unwrap();
            prop_assert!(same_presentation(&r, &deeper));
        }

        #[test]
        fn idem_adjunction_counts(p in arb_graph(), t in arb_endomap(true)) {
            let r = reflect_idem(&p);
            prop_assert_eq!(count_graph_morphisms(&r.graph, &t, &[]), count_graph_morphisms(&p, &t, &[]));
        }

        #[test]
        fn periodic_adjunction_counts(p in arb_graph(), n in 1usize..=4, k in 1usize..=4) {
            prop_assume!(n % k == 0);
            let t = FinGraph::cycle(k);
            let r = reflect_periodic(&p, n).unwrap();
            prop_assert_eq!(count_graph_morphisms(&r.graph, &t, &[]), count_graph_morphisms(&p, &t, &[]));
        }

        #[test]
        fn idem_reflections_are_orthogonal_to_e(p in arb_graph()) {
            let r = reflect_idem(&p).graph;
            let mut e = FinGraph::new();
            let o = e.node("o");
            let b = e.node("b");
            e.edge("d", o, b);
            e.edge("l", b, b);
            for t in 0..r.num_nodes() {
                prop_assert_eq!(count_graph_morphisms(&e, &r, &[(o, t)]), 1);
            }
        }

        #[test]
        fn bij_reflection_sizes(p in arb_graph()) {
            let r = reflect_bij(&p);
            prop_assert_eq!(r.orbits.len(), graph_components(&p).count());
            for x in 0..p.num_nodes() {
                prop_assert_eq!(r.orbits[r.generator_image[x].0].period, bij_period_oracle(&p, x));
            }
        }
    }
}
