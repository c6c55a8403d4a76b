//! Finite-set-valued functors on a finite category, the category of elements,
//! recognition of discrete (op)fibrations and the function-set constructions
//! (exponentials of a discrete fibration by a discrete opfibration, complements).

use std::sync::Arc;

use crate::error::{limits, Error, Result};
use crate::fincat::{same_category, ArrowId, CategoryBuilder, FinCategory, Functor, ObjId, OverCategory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variance {
    Contravariant,
    Covariant,
}

impl Variance {
    pub fn flip(self) -> Variance {
        match self {
            Variance::Contravariant => Variance::Covariant,
            Variance::Covariant => Variance::Contravariant,
        }
    }
}

/// A functor `X^op -> FinSet` (contravariant) or `X -> FinSet` (covariant).
///
/// For `f: x -> y`, `action[f]` maps the fiber at `y` to the fiber at `x` in
/// the contravariant case and the fiber at `x` to the fiber at `y` otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFunctor {
    pub base: Arc<FinCategory>,
    pub variance: Variance,
    pub fibers: Vec<Vec<String>>,
    pub action: Vec<Vec<usize>>,
}

/// Natural transformation components, one map per object.
pub type Components = Vec<Vec<usize>>;

impl SetFunctor {
    pub fn new(
        base: Arc<FinCategory>,
        variance: Variance,
        fibers: Vec<Vec<String>>,
        action: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let a = SetFunctor {
            base,
            variance,
            fibers,
            action,
        };
        let report = a.violations();
        if report.is_empty() {
            Ok(a)
        } else {
            Err(Error::Invalid(report.join("; ")))
        }
    }

    /// Object whose fiber `action[f]` reads from.
    pub fn action_src(&self, f: ArrowId) -> ObjId {
        match self.variance {
            Variance::Contravariant => self.base.tgt(f),
            Variance::Covariant => self.base.src(f),
        }
    }

    /// Object whose fiber `action[f]` lands in.
    pub fn action_tgt(&self, f: ArrowId) -> ObjId {
        match self.variance {
            Variance::Contravariant => self.base.src(f),
            Variance::Covariant => self.base.tgt(f),
        }
    }

    pub fn fiber_size(&self, x: ObjId) -> usize {
        self.fibers[x.index()].len()
    }

    pub fn apply(&self, f: ArrowId, i: usize) -> usize {
        self.action[f.index()][i]
    }

    pub fn total_elements(&self) -> usize {
        self.fibers.iter().map(Vec::len).sum()
    }

    pub fn element_name(&self, x: ObjId, i: usize) -> &str {
        &self.fibers[x.index()][i]
    }

    pub fn find_element(&self, x: ObjId, name: &str) -> Option<usize> {
        self.fibers[x.index()].iter().position(|e| e == name)
    }

    pub fn violations(&self) -> Vec<String> {
        let c = &self.base;
        let mut out = Vec::new();
        if self.fibers.len() != c.num_objects() || self.action.len() != c.num_arrows() {
            out.push("fiber or action table is not total".to_string());
            return out;
        }
        for f in c.arrows() {
            let (s, t) = (self.action_src(f), self.action_tgt(f));
            let m = &self.action[f.index()];
            if m.len() != self.fiber_size(s) || m.iter().any(|&j| j >= self.fiber_size(t)) {
                out.push(format!("action of `{}` has the wrong shape", c.arrow_name(f)));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for x in c.objects() {
            let m = &self.action[c.id(x).index()];
            if m.iter().enumerate().any(|(i, &j)| i != j) {
                out.push(format!("identity of `{}` does not act trivially", c.obj_name(x)));
            }
        }
        for (g, f) in c.composable_pairs() {
            let gf = c.compose(g, f);
            let (first, second) = match self.variance {
                Variance::Contravariant => (g, f),
                Variance::Covariant => (f, g),
            };
            let ok = (0..self.fiber_size(self.action_src(first)))
                .all(|i| self.apply(gf, i) == self.apply(second, self.apply(first, i)));
            if !ok {
                out.push(format!(
                    "action does not respect {} . {}",
                    c.arrow_name(g),
                    c.arrow_name(f)
                ));
            }
        }
        out
    }

    pub fn constant(base: &Arc<FinCategory>, variance: Variance, names: &[String]) -> SetFunctor {
        SetFunctor {
            base: base.clone(),
            variance,
            fibers: vec![names.to_vec(); base.num_objects()],
            action: vec![(0..names.len()).collect(); base.num_arrows()],
        }
    }

    pub fn terminal(base: &Arc<FinCategory>, variance: Variance) -> SetFunctor {
        SetFunctor::constant(base, variance, &["*".to_string()])
    }

    /// `X(-, x)`, acting by precomposition.
    pub fn representable(base: &Arc<FinCategory>, x: ObjId) -> SetFunctor {
        let c = base;
        let fibers: Vec<Vec<ArrowId>> = c.objects().map(|z| c.hom(z, x).to_vec()).collect();
        let action = c
            .arrows()
            .map(|f| {
                let (z, w) = (c.src(f), c.tgt(f));
                fibers[w.index()]
                    .iter()
                    .map(|&h| {
                        let hf = c.compose(h, f);
                        fibers[z.index()].iter().position(|&k| k == hf).unwrap()
                    })
                    .collect()
            })
            .collect();
        SetFunctor {
            base: base.clone(),
            variance: Variance::Contravariant,
            fibers: names_of(c, &fibers),
            action,
        }
    }

    /// `X(x, -)`, acting by postcomposition.
    pub fn corepresentable(base: &Arc<FinCategory>, x: ObjId) -> SetFunctor {
        let c = base;
        let fibers: Vec<Vec<ArrowId>> = c.objects().map(|z| c.hom(x, z).to_vec()).collect();
        let action = c
            .arrows()
            .map(|f| {
                let (z, w) = (c.src(f), c.tgt(f));
                fibers[z.index()]
                    .iter()
                    .map(|&h| {
                        let fh = c.compose(f, h);
                        fibers[w.index()].iter().position(|&k| k == fh).unwrap()
                    })
                    .collect()
            })
            .collect();
        SetFunctor {
            base: base.clone(),
            variance: Variance::Covariant,
            fibers: names_of(c, &fibers),
            action,
        }
    }

    /// The same data read as a functor of the opposite variance on `dual_base`,
    /// which must be the opposite of `self.base`.
    pub fn dualize(&self, dual_base: &Arc<FinCategory>) -> SetFunctor {
        debug_assert_eq!(**dual_base, self.base.opposite());
        SetFunctor {
            base: dual_base.clone(),
            variance: self.variance.flip(),
            fibers: self.fibers.clone(),
            action: self.action.clone(),
        }
    }

    /// Restriction along `f: Z -> base`.
    pub fn restrict(&self, f: &Functor) -> Result<SetFunctor> {
        if !same_category(&f.cod, &self.base) {
            return Err(Error::BaseMismatch("restriction along a functor into another base".into()));
        }
        Ok(SetFunctor {
            base: f.dom.clone(),
            variance: self.variance,
            fibers: f.obj_map.iter().map(|&x| self.fibers[x.index()].clone()).collect(),
            action: f.arrow_map.iter().map(|&a| self.action[a.index()].clone()).collect(),
        })
    }

    /// The category of elements over the base.
    pub fn elements(&self) -> Elements {
        let c = &self.base;
        let mut b = CategoryBuilder::new();
        let mut object_of = Vec::new();
        let mut element_of = Vec::new();
        for x in c.objects() {
            let mut row = Vec::new();
            for (i, name) in self.fibers[x.index()].iter().enumerate() {
                row.push(b.object(format!("({},{})", c.obj_name(x), name)));
                element_of.push((x, i));
            }
            object_of.push(row);
        }
        // arrow (f, i) for i in the fiber the action of f reads from
        let mut arrow_of = Vec::new();
        let mut proj = Vec::new();
        for f in c.arrows() {
            let (s, t) = (self.action_src(f), self.action_tgt(f));
            let mut row = Vec::new();
            for i in 0..self.fiber_size(s) {
                let (from, to) = match self.variance {
                    Variance::Contravariant => (object_of[t.index()][self.apply(f, i)], object_of[s.index()][i]),
                    Variance::Covariant => (object_of[s.index()][i], object_of[t.index()][self.apply(f, i)]),
                };
                let name = format!("({},{})", c.arrow_name(f), self.fibers[s.index()][i]);
                let a = if c.is_identity(f) {
                    b.identity(from, name)
                } else {
                    b.arrow(name, from, to)
                };
                row.push(a);
                proj.push(f);
            }
            arrow_of.push(row);
        }
        for (g, f) in c.composable_pairs() {
            let gf = c.compose(g, f);
            match self.variance {
                Variance::Contravariant => {
                    // (g, k) . (f, A(g) k) = (g f, k)
                    for k in 0..self.fiber_size(c.tgt(g)) {
                        let mid = self.apply(g, k);
                        b.compose(arrow_of[g.index()][k], arrow_of[f.index()][mid], arrow_of[gf.index()][k]);
                    }
                }
                Variance::Covariant => {
                    // (g, D(f) i) . (f, i) = (g f, i)
                    for i in 0..self.fiber_size(c.src(f)) {
                        let mid = self.apply(f, i);
                        b.compose(arrow_of[g.index()][mid], arrow_of[f.index()][i], arrow_of[gf.index()][i]);
                    }
                }
            }
        }
        let total = Arc::new(b.build());
        let obj_map = element_of.iter().map(|&(x, _)| x).collect();
        Elements {
            over: OverCategory::new(Functor::new(total, c.clone(), obj_map, proj)),
            object_of,
            element_of,
            arrow_of,
        }
    }
}

fn names_of(c: &FinCategory, fibers: &[Vec<ArrowId>]) -> Vec<Vec<String>> {
    fibers
        .iter()
        .map(|row| row.iter().map(|&h| c.arrow_name(h).to_string()).collect())
        .collect()
}

/// The category of elements together with the element/object correspondence.
#[derive(Debug, Clone)]
pub struct Elements {
    pub over: OverCategory,
    /// `object_of[x][i]`: the object `<x, i>` of the total category.
    pub object_of: Vec<Vec<ObjId>>,
    /// Inverse of `object_of`.
    pub element_of: Vec<(ObjId, usize)>,
    /// `arrow_of[f][i]`: the lift of `f` at element `i` of the fiber its action reads from.
    pub arrow_of: Vec<Vec<ArrowId>>,
}

/// First base arrow/object pair violating unique lifting, if any.
fn lifting_defect(p: &OverCategory, opfibration: bool) -> Option<String> {
    let (total, base) = (p.total(), p.base());
    let mut count = vec![0usize; base.num_arrows() * total.num_objects()];
    for u in total.arrows() {
        let end = if opfibration { total.src(u) } else { total.tgt(u) };
        count[p.over_arrow(u).index() * total.num_objects() + end.index()] += 1;
    }
    for f in base.arrows() {
        let end = if opfibration { base.src(f) } else { base.tgt(f) };
        for b in total.objects().filter(|&b| p.over_obj(b) == end) {
            let n = count[f.index() * total.num_objects() + b.index()];
            if n != 1 {
                return Some(format!(
                    "arrow `{}` has {} lifts at `{}`",
                    base.arrow_name(f),
                    n,
                    total.obj_name(b)
                ));
            }
        }
    }
    None
}

pub fn is_discrete_fibration(p: &OverCategory) -> bool {
    lifting_defect(p, false).is_none()
}

pub fn is_discrete_opfibration(p: &OverCategory) -> bool {
    lifting_defect(p, true).is_none()
}

/// The presheaf of a discrete fibration: fibers are the objects over each base object.
pub fn to_presheaf(p: &OverCategory) -> Result<SetFunctor> {
    if let Some(d) = lifting_defect(p, false) {
        return Err(Error::NotDiscreteFibration(d));
    }
    Ok(fibration_to_functor(p, Variance::Contravariant))
}

/// The copresheaf of a discrete opfibration.
pub fn to_copresheaf(p: &OverCategory) -> Result<SetFunctor> {
    if let Some(d) = lifting_defect(p, true) {
        return Err(Error::NotDiscreteOpfibration(d));
    }
    Ok(fibration_to_functor(p, Variance::Covariant))
}

fn fibration_to_functor(p: &OverCategory, variance: Variance) -> SetFunctor {
    let (total, base) = (p.total(), p.base());
    let by_base = p.objects_by_base();
    let mut position = vec![0; total.num_objects()];
    for row in &by_base {
        for (i, &a) in row.iter().enumerate() {
            position[a.index()] = i;
        }
    }
    let fibers = by_base
        .iter()
        .map(|row| row.iter().map(|&a| total.obj_name(a).to_string()).collect())
        .collect();
    let mut action: Vec<Vec<usize>> = base
        .arrows()
        .map(|f| {
            let s = if variance == Variance::Contravariant { base.tgt(f) } else { base.src(f) };
            vec![0; by_base[s.index()].len()]
        })
        .collect();
    for u in total.arrows() {
        let f = p.over_arrow(u);
        let (from, to) = match variance {
            Variance::Contravariant => (total.tgt(u), total.src(u)),
            Variance::Covariant => (total.src(u), total.tgt(u)),
        };
        action[f.index()][position[from.index()]] = position[to.index()];
    }
    SetFunctor {
        base: base.clone(),
        variance,
        fibers,
        action,
    }
}

/// Decodes index `idx` of the function set `cod^dom` (first argument most significant).
pub fn decode_function(mut idx: usize, dom: usize, cod: usize) -> Vec<usize> {
    let mut out = vec![0; dom];
    for slot in out.iter_mut().rev() {
        *slot = idx % cod;
        idx /= cod;
    }
    out
}

pub fn encode_function(values: &[usize], cod: usize) -> usize {
    values.iter().fold(0, |acc, &v| acc * cod + v)
}

fn function_count(dom: usize, cod: usize, what: &str) -> Result<usize> {
    let cap = limits().fiber_elements;
    let mut n: u64 = 1;
    for _ in 0..dom {
        n = n.saturating_mul(cod as u64);
        if n > cap {
            return Err(Error::SizeCap {
                what: what.to_string(),
                cap,
            });
        }
    }
    Ok(n as usize)
}

fn function_name(values: &[usize], names: &[String]) -> String {
    let parts: Vec<&str> = values.iter().map(|&v| names[v].as_str()).collect();
    format!("[{}]", parts.join(","))
}

/// `D^A` as a copresheaf: `(D^A)x = Dx^(Ax)`, `(D^A)f: h -> Df . h . Af`.
pub fn exponential_df_dof(a: &SetFunctor, d: &SetFunctor) -> Result<SetFunctor> {
    if a.variance != Variance::Contravariant || d.variance != Variance::Covariant {
        return Err(Error::Invalid("exponential needs a presheaf exponent and a copresheaf".into()));
    }
    if !same_category(&a.base, &d.base) {
        return Err(Error::BaseMismatch("exponential of functors on different bases".into()));
    }
    let c = &a.base;
    let mut fibers: Vec<Vec<String>> = Vec::new();
    for x in c.objects() {
        let (na, nd) = (a.fiber_size(x), d.fiber_size(x));
        let count = function_count(na, nd, "exponential fiber")?;
        fibers.push(
            (0..count)
                .map(|i| function_name(&decode_function(i, na, nd), &d.fibers[x.index()]))
                .collect(),
        );
    }
    let action = c
        .arrows()
        .map(|f| {
            let (x, y) = (c.src(f), c.tgt(f));
            let (nax, ndx, nay, ndy) = (a.fiber_size(x), d.fiber_size(x), a.fiber_size(y), d.fiber_size(y));
            (0..fibers[x.index()].len())
                .map(|i| {
                    let h = decode_function(i, nax, ndx);
                    let image: Vec<usize> = (0..nay).map(|b| d.apply(f, h[a.apply(f, b)])).collect();
                    encode_function(&image, ndy)
                })
                .collect()
        })
        .collect();
    Ok(SetFunctor {
        base: c.clone(),
        variance: Variance::Covariant,
        fibers,
        action,
    })
}

/// `Set(A-, S)`, of the opposite variance, acting by precomposition.
pub fn complement(a: &SetFunctor, s: &[String]) -> Result<SetFunctor> {
    let c = &a.base;
    let ns = s.len();
    let mut fibers: Vec<Vec<String>> = Vec::new();
    for x in c.objects() {
        let na = a.fiber_size(x);
        let count = function_count(na, ns, "complement fiber")?;
        fibers.push((0..count).map(|i| function_name(&decode_function(i, na, ns), s)).collect());
    }
    // Af: fiber(from) -> fiber(to); a map h on fiber(to) goes to h . Af on fiber(from)
    let action = c
        .arrows()
        .map(|f| {
            let (from, to) = (a.action_src(f), a.action_tgt(f));
            let (nfrom, nto) = (a.fiber_size(from), a.fiber_size(to));
            (0..fibers[to.index()].len())
                .map(|i| {
                    let h = decode_function(i, nto, ns);
                    let image: Vec<usize> = (0..nfrom).map(|e| h[a.apply(f, e)]).collect();
                    encode_function(&image, ns)
                })
                .collect()
        })
        .collect();
    Ok(SetFunctor {
        base: c.clone(),
        variance: a.variance.flip(),
        fibers,
        action,
    })
}

/// Same fibers with every action inverted, of the opposite variance.
pub fn bifibration_inverse(a: &SetFunctor) -> Result<SetFunctor> {
    let c = &a.base;
    let mut action = Vec::new();
    for f in c.arrows() {
        let m = &a.action[f.index()];
        let n = a.fiber_size(a.action_tgt(f));
        let mut inv = vec![usize::MAX; n];
        for (i, &j) in m.iter().enumerate() {
            if inv[j] != usize::MAX {
                return Err(Error::NotBijective(c.arrow_name(f).to_string()));
            }
            inv[j] = i;
        }
        if m.len() != n {
            return Err(Error::NotBijective(c.arrow_name(f).to_string()));
        }
        action.push(inv);
    }
    Ok(SetFunctor {
        base: c.clone(),
        variance: a.variance.flip(),
        fibers: a.fibers.clone(),
        action,
    })
}

/// Backtracking over element-wise component choices; each choice is propagated
/// along every action so conflicts are found early.
struct NatSearch<'a> {
    a: &'a SetFunctor,
    b: &'a SetFunctor,
    injective: bool,
    assign: Vec<Vec<usize>>,
    used: Vec<Vec<bool>>,
    trail: Vec<(usize, usize)>,
    order: Vec<(usize, usize)>,
    out_arrows: Vec<Vec<ArrowId>>,
    nodes: u64,
    cap: u64,
}

const UNSET: usize = usize::MAX;

impl<'a> NatSearch<'a> {
    fn new(a: &'a SetFunctor, b: &'a SetFunctor, injective: bool) -> Self {
        let c = &a.base;
        let mut out_arrows = vec![Vec::new(); c.num_objects()];
        for f in c.non_identity_arrows() {
            out_arrows[a.action_src(f).index()].push(f);
        }
        let order = c
            .objects()
            .flat_map(|x| (0..a.fiber_size(x)).map(move |i| (x.index(), i)))
            .collect();
        NatSearch {
            a,
            b,
            injective,
            assign: a.fibers.iter().map(|r| vec![UNSET; r.len()]).collect(),
            used: b.fibers.iter().map(|r| vec![false; r.len()]).collect(),
            trail: Vec::new(),
            order,
            out_arrows,
            nodes: 0,
            cap: limits().search_nodes,
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (x, i) = self.trail.pop().unwrap();
            let j = self.assign[x][i];
            if self.injective {
                self.used[x][j] = false;
            }
            self.assign[x][i] = UNSET;
        }
    }

    fn set(&mut self, x: usize, i: usize, j: usize) -> bool {
        let mut stack = vec![(x, i, j)];
        while let Some((x, i, j)) = stack.pop() {
            let cur = self.assign[x][i];
            if cur != UNSET {
                if cur != j {
                    return false;
                }
                continue;
            }
            if self.injective {
                if self.used[x][j] {
                    return false;
                }
                self.used[x][j] = true;
            }
            self.assign[x][i] = j;
            self.trail.push((x, i));
            for &f in &self.out_arrows[x] {
                let t = self.a.action_tgt(f).index();
                stack.push((t, self.a.apply(f, i), self.b.apply(f, j)));
            }
        }
        true
    }

    fn run(&mut self, pos: usize, visit: &mut dyn FnMut(&Components) -> bool) -> Result<bool> {
        let mut pos = pos;
        while pos < self.order.len() && self.assign[self.order[pos].0][self.order[pos].1] != UNSET {
            pos += 1;
        }
        if pos == self.order.len() {
            return Ok(visit(&self.assign));
        }
        let (x, i) = self.order[pos];
        for j in 0..self.b.fibers[x].len() {
            self.nodes += 1;
            if self.nodes > self.cap {
                return Err(Error::SizeCap {
                    what: "natural transformation search".into(),
                    cap: self.cap,
                });
            }
            let mark = self.trail.len();
            if self.set(x, i, j) && !self.run(pos + 1, visit)? {
                self.undo_to(mark);
                return Ok(false);
            }
            self.undo_to(mark);
        }
        Ok(true)
    }
}

fn check_comparable(a: &SetFunctor, b: &SetFunctor) -> Result<()> {
    if a.variance != b.variance {
        return Err(Error::Invalid("natural transformations between functors of different variance".into()));
    }
    if !same_category(&a.base, &b.base) {
        return Err(Error::BaseMismatch("functors on different bases".into()));
    }
    Ok(())
}

/// Visits every natural transformation `a -> b`; stops when `visit` returns false.
pub fn for_each_nat(a: &SetFunctor, b: &SetFunctor, visit: &mut dyn FnMut(&Components) -> bool) -> Result<()> {
    check_comparable(a, b)?;
    NatSearch::new(a, b, false).run(0, visit)?;
    Ok(())
}

pub fn nat_transformations(a: &SetFunctor, b: &SetFunctor) -> Result<Vec<Components>> {
    let mut out = Vec::new();
    for_each_nat(a, b, &mut |m| {
        out.push(m.clone());
        true
    })?;
    Ok(out)
}

pub fn count_nat(a: &SetFunctor, b: &SetFunctor) -> Result<usize> {
    let mut n = 0;
    for_each_nat(a, b, &mut |_| {
        n += 1;
        true
    })?;
    Ok(n)
}

/// A natural isomorphism `a -> b`, if one exists.
pub fn find_isomorphism(a: &SetFunctor, b: &SetFunctor) -> Result<Option<Components>> {
    check_comparable(a, b)?;
    if a.base.objects().any(|x| a.fiber_size(x) != b.fiber_size(x)) {
        return Ok(None);
    }
    let mut found = None;
    NatSearch::new(a, b, true).run(0, &mut |m| {
        found = Some(m.clone());
        false
    })?;
    Ok(found)
}

pub fn is_isomorphic(a: &SetFunctor, b: &SetFunctor) -> Result<bool> {
    Ok(find_isomorphism(a, b)?.is_some())
}

/// Checks that `m` is a natural transformation `a -> b`.
pub fn is_natural(a: &SetFunctor, b: &SetFunctor, m: &Components) -> bool {
    a.base.arrows().all(|f| {
        let (s, t) = (a.action_src(f), a.action_tgt(f));
        (0..a.fiber_size(s)).all(|i| m[t.index()][a.apply(f, i)] == b.apply(f, m[s.index()][i]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::fincat::{slice, Functor};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn two() -> Arc<FinCategory> {
        Arc::new(catalog::two())
    }

    /// On TWO: Ax = {a}, Ay = {b, b'}, both sent to a.
    fn fork(c: &Arc<FinCategory>) -> SetFunctor {
        let f = c.arrow("f").unwrap();
        let mut action = vec![vec![]; c.num_arrows()];
        action[f.index()] = vec![0, 0];
        action[c.id(ObjId(0)).index()] = vec![0];
        action[c.id(ObjId(1)).index()] = vec![0, 1];
        SetFunctor::new(c.clone(), Variance::Contravariant, vec![names(&["a"]), names(&["b", "b'"])], action).unwrap()
    }

    #[test]
    fn elements_of_the_fork() {
        let c = two();
        let el = fork(&c).elements();
        let t = el.over.total();
        assert_eq!(t.num_objects(), 3);
        assert_eq!(t.non_identity_arrows().count(), 2);
        assert!(t.validate().is_empty());
        assert!(el.over.projection.is_valid());
        assert!(is_discrete_fibration(&el.over));
        assert!(!is_discrete_opfibration(&el.over));
    }

    #[test]
    fn elements_of_terminal_is_the_base() {
        let c = Arc::new(catalog::idem());
        let el = SetFunctor::terminal(&c, Variance::Contravariant).elements();
        assert_eq!(el.over.total().num_objects(), 1);
        assert_eq!(el.over.total().num_arrows(), 2);
        assert!(is_discrete_fibration(&el.over) && is_discrete_opfibration(&el.over));
    }

    #[test]
    fn representable_elements_match_the_slice() {
        let c = two();
        let y = c.object("y").unwrap();
        let rep = SetFunctor::representable(&c, y);
        let s = slice(&c, y).unwrap();
        assert!(is_discrete_fibration(&s.over));
        let from_slice = to_presheaf(&s.over).unwrap();
        assert!(is_isomorphic(&from_slice, &rep).unwrap());
        let back = to_presheaf(&rep.elements().over).unwrap();
        assert!(is_isomorphic(&back, &rep).unwrap());
    }

    #[test]
    fn parallel_pair_over_one_is_not_a_fibration() {
        let pair = Arc::new(catalog::pair());
        let one = Arc::new(catalog::one());
        let collapse = Functor::new(pair.clone(), one.clone(), vec![ObjId(0); 2], vec![ArrowId(0); pair.num_arrows()]);
        assert!(collapse.is_valid());
        let p = OverCategory::new(collapse);
        assert!(!is_discrete_fibration(&p));
        assert!(to_presheaf(&p).is_err());
        let id = OverCategory::identity_over(&pair);
        assert!(is_discrete_fibration(&id) && is_discrete_opfibration(&id));
    }

    #[test]
    fn exponential_on_the_interval() {
        let c = two();
        let (x, y) = (ObjId(0), ObjId(1));
        let f = c.arrow("f").unwrap();
        // |Ax| = 1, |Ay| = 2
        let a = fork(&c);
        // |Dx| = 2, |Dy| = 1
        let mut act = vec![vec![]; c.num_arrows()];
        act[f.index()] = vec![0, 0];
        act[c.id(x).index()] = vec![0, 1];
        act[c.id(y).index()] = vec![0];
        let d = SetFunctor::new(c.clone(), Variance::Covariant, vec![names(&["d0", "d1"]), names(&["d"])], act).unwrap();
        let e = exponential_df_dof(&a, &d).unwrap();
        assert!(e.violations().is_empty());
        assert_eq!(e.fiber_size(x), 2);
        assert_eq!(e.fiber_size(y), 1);
        assert_eq!(e.action[f.index()], vec![0, 0]);
    }

    #[test]
    fn exponential_degenerate_cases() {
        let c = two();
        let empty = SetFunctor::constant(&c, Variance::Contravariant, &[]);
        let d = SetFunctor::corepresentable(&c, ObjId(0));
        let e = exponential_df_dof(&empty, &d).unwrap();
        assert!(c.objects().all(|x| e.fiber_size(x) == 1));
        let one = SetFunctor::terminal(&c, Variance::Covariant);
        let e = exponential_df_dof(&fork(&c), &one).unwrap();
        assert!(c.objects().all(|x| e.fiber_size(x) == 1));
    }

    #[test]
    fn complements() {
        let c = two();
        let y = c.object("y").unwrap();
        let rep = SetFunctor::representable(&c, y);
        let s = names(&["0", "1"]);
        let neg = complement(&rep, &s).unwrap();
        assert_eq!(neg.variance, Variance::Covariant);
        assert!(neg.violations().is_empty());
        assert_eq!((neg.fiber_size(ObjId(0)), neg.fiber_size(y)), (2, 2));
        let f = c.arrow("f").unwrap();
        // X(x,y) -> X(y,y) is a bijection, so precomposition is too
        assert_eq!(neg.action[f.index()], vec![0, 1]);

        let single = complement(&fork(&c), &names(&["*"])).unwrap();
        assert!(is_isomorphic(&single, &SetFunctor::terminal(&c, Variance::Covariant)).unwrap());
        let one = SetFunctor::terminal(&c, Variance::Contravariant);
        let cs = complement(&one, &s).unwrap();
        assert!(is_isomorphic(&cs, &SetFunctor::constant(&c, Variance::Covariant, &s)).unwrap());
        let via_exp = exponential_df_dof(&rep, &SetFunctor::constant(&c, Variance::Covariant, &s)).unwrap();
        assert_eq!(via_exp, neg);
    }

    #[test]
    fn bifibration_inverse_on_c2() {
        let c = Arc::new(catalog::cyclic_group(3));
        let reg = SetFunctor::representable(&c, ObjId(0));
        let inv = bifibration_inverse(&reg).unwrap();
        assert_eq!(inv.variance, Variance::Covariant);
        assert!(inv.violations().is_empty());
        assert_eq!(bifibration_inverse(&inv).unwrap(), reg);
        let cst = SetFunctor::constant(&c, Variance::Contravariant, &names(&["p", "q"]));
        assert_eq!(
            bifibration_inverse(&cst).unwrap(),
            SetFunctor::constant(&c, Variance::Covariant, &names(&["p", "q"]))
        );
        assert!(matches!(bifibration_inverse(&fork(&two())), Err(Error::NotBijective(_))));
    }

    #[test]
    fn nat_counts() {
        let c = two();
        let y = c.object("y").unwrap();
        let rep = SetFunctor::representable(&c, y);
        // Yoneda: Nat(X(-,y), A) = Ay
        assert_eq!(count_nat(&rep, &fork(&c)).unwrap(), 2);
        let two_pt = SetFunctor::constant(&c, Variance::Contravariant, &names(&["p", "q"]));
        assert_eq!(count_nat(&two_pt, &two_pt).unwrap(), 4);
        for m in nat_transformations(&fork(&c), &two_pt).unwrap() {
            assert!(is_natural(&fork(&c), &two_pt, &m));
        }
    }

    #[test]
    fn invalid_action_is_rejected() {
        let c = two();
        let f = c.arrow("f").unwrap();
        let mut action = vec![vec![0]; c.num_arrows()];
        action[f.index()] = vec![3];
        assert!(SetFunctor::new(c, Variance::Contravariant, vec![names(&["a"]), names(&["b"])], action).is_err());
    }
}
