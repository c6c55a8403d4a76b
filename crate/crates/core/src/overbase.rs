//! Morphisms, sections and components of categories over a base, the tensor
//! `ten(p, q) = components(p x q)` and the classical tensor product oracle.

use std::sync::Arc;

use crate::error::{limits, Result};
use crate::fincat::{
    product_over, same_category, ArrowId, CategoryBuilder, FinCategory, Functor, ObjId,
    OverCategory, Pullback,
};
use crate::search::{search_functors, FunctorProblem};
use crate::setfun::{SetFunctor, Variance};
use crate::unionfind::UnionFind;
use crate::Error;

/// Connected components; class `k` is identified by its minimum object `reps[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentsResult {
    pub reps: Vec<ObjId>,
    pub class_of: Vec<usize>,
}

impl ComponentsResult {
    pub fn count(&self) -> usize {
        self.reps.len()
    }

    pub fn class_names(&self, c: &FinCategory) -> Vec<String> {
        self.reps.iter().map(|&o| c.obj_name(o).to_string()).collect()
    }
}

pub fn components(c: &FinCategory) -> ComponentsResult {
    let mut uf = UnionFind::new(c.num_objects());
    for a in c.arrows() {
        uf.union(c.src(a).index(), c.tgt(a).index());
    }
    let (reps, class_of) = uf.classes();
    ComponentsResult {
        reps: reps.into_iter().map(ObjId::from).collect(),
        class_of,
    }
}

/// Visits every functor `total(p) -> total(q)` over the base.
pub fn for_each_hom_over(
    p: &OverCategory,
    q: &OverCategory,
    visit: &mut dyn FnMut(&[ObjId], &[ArrowId]) -> bool,
) -> Result<()> {
    p.check_same_base(q)?;
    let by_base = q.objects_by_base();
    let candidates = p
        .total()
        .objects()
        .map(|a| by_base[p.over_obj(a).index()].clone())
        .collect();
    let filter = |u: ArrowId, v: ArrowId| q.over_arrow(v) == p.over_arrow(u);
    let problem = FunctorProblem {
        dom: p.total(),
        cod: q.total(),
        obj_candidates: candidates,
        arrow_filter: &filter,
        injective: false,
    };
    search_functors(&problem, limits().search_nodes, visit)
}

pub fn hom_over(p: &OverCategory, q: &OverCategory) -> Result<Vec<Functor>> {
    let mut out = Vec::new();
    for_each_hom_over(p, q, &mut |o, a| {
        out.push(Functor::new(p.total().clone(), q.total().clone(), o.to_vec(), a.to_vec()));
        true
    })?;
    Ok(out)
}

pub fn count_hom_over(p: &OverCategory, q: &OverCategory) -> Result<usize> {
    let mut n = 0;
    for_each_hom_over(p, q, &mut |_, _| {
        n += 1;
        true
    })?;
    Ok(n)
}

/// Sections `s: base -> total` with `projection . s = id`.
pub fn sections(p: &OverCategory) -> Result<Vec<Functor>> {
    let base = OverCategory::identity_over(p.base());
    let mut out = Vec::new();
    for_each_hom_over(&base, p, &mut |o, a| {
        out.push(Functor::new(p.base().clone(), p.total().clone(), o.to_vec(), a.to_vec()));
        true
    })?;
    Ok(out)
}

/// An isomorphism of categories over the base, if one exists.
pub fn find_isomorphism_over(p: &OverCategory, q: &OverCategory) -> Result<Option<Functor>> {
    p.check_same_base(q)?;
    let (tp, tq) = (p.total(), q.total());
    if tp.num_objects() != tq.num_objects() || tp.num_arrows() != tq.num_arrows() {
        return Ok(None);
    }
    let by_base = q.objects_by_base();
    let candidates = tp.objects().map(|a| by_base[p.over_obj(a).index()].clone()).collect();
    let filter = |u: ArrowId, v: ArrowId| q.over_arrow(v) == p.over_arrow(u);
    let problem = FunctorProblem {
        dom: tp,
        cod: tq,
        obj_candidates: candidates,
        arrow_filter: &filter,
        injective: true,
    };
    let mut found = None;
    search_functors(&problem, limits().search_nodes, &mut |o, a| {
        found = Some(Functor::new(tp.clone(), tq.clone(), o.to_vec(), a.to_vec()));
        false
    })?;
    Ok(found)
}

/// `ten(p, q)`: the product over the base and its components.
#[derive(Debug, Clone)]
pub struct Tensor {
    pub product: Pullback,
    pub components: ComponentsResult,
}

impl Tensor {
    pub fn count(&self) -> usize {
        self.components.count()
    }
}

pub fn ten(p: &OverCategory, q: &OverCategory) -> Result<Tensor> {
    let product = product_over(p, q)?;
    let components = components(&product.total);
    Ok(Tensor {
        product,
        components,
    })
}

/// The quotient of `sum_x Ax x Dx` by `(A(f) a, d) ~ (a, D(f) d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalTensor {
    /// `(x, a, d)` triples in lexicographic order.
    pub elements: Vec<(ObjId, usize, usize)>,
    pub class_of: Vec<usize>,
    pub count: usize,
}

impl ClassicalTensor {
    pub fn index_of(&self, x: ObjId, a: usize, d: usize) -> Option<usize> {
        self.elements.binary_search(&(x, a, d)).ok()
    }
}

pub fn tensor_product_classical(a: &SetFunctor, d: &SetFunctor) -> Result<ClassicalTensor> {
    if a.variance != Variance::Contravariant || d.variance != Variance::Covariant {
        return Err(Error::Invalid("tensor needs a presheaf and a copresheaf".into()));
    }
    if !same_category(&a.base, &d.base) {
        return Err(Error::BaseMismatch("tensor of functors on different bases".into()));
    }
    let c = &a.base;
    let mut elements = Vec::new();
    let mut offset = Vec::new();
    for x in c.objects() {
        offset.push(elements.len());
        for i in 0..a.fiber_size(x) {
            for j in 0..d.fiber_size(x) {
                elements.push((x, i, j));
            }
        }
    }
    let idx = |x: ObjId, i: usize, j: usize| offset[x.index()] + i * d.fiber_size(x) + j;
    let mut uf = UnionFind::new(elements.len());
    for f in c.non_identity_arrows() {
        let (x, y) = (c.src(f), c.tgt(f));
        // a in Ay, d in Dx
        for i in 0..a.fiber_size(y) {
            for j in 0..d.fiber_size(x) {
                uf.union(idx(x, a.apply(f, i), j), idx(y, i, d.apply(f, j)));
            }
        }
    }
    let (reps, class_of) = uf.classes();
    Ok(ClassicalTensor {
        elements,
        class_of,
        count: reps.len(),
    })
}

/// `S x X` over `X`: a copy of the base for every element of `s`.
pub fn discrete_object(s: &[String], x: &Arc<FinCategory>) -> OverCategory {
    let mut b = CategoryBuilder::new();
    let mut obj_map = Vec::new();
    for name in s {
        for o in x.objects() {
            b.object(format!("({},{})", name, x.obj_name(o)));
            obj_map.push(o);
        }
    }
    let no = x.num_objects();
    let mut arrow_map = Vec::new();
    for (k, name) in s.iter().enumerate() {
        for a in x.arrows() {
            let (src, tgt) = (ObjId::from(k * no + x.src(a).index()), ObjId::from(k * no + x.tgt(a).index()));
            let label = format!("({},{})", name, x.arrow_name(a));
            if x.is_identity(a) {
                b.identity(src, label);
            } else {
                b.arrow(label, src, tgt);
            }
            arrow_map.push(a);
        }
    }
    let na = x.num_arrows();
    for k in 0..s.len() {
        for (g, f) in x.composable_pairs() {
            let h = x.compose(g, f);
            b.compose(
                ArrowId::from(k * na + g.index()),
                ArrowId::from(k * na + f.index()),
                ArrowId::from(k * na + h.index()),
            );
        }
    }
    OverCategory::new(Functor::new(Arc::new(b.build()), x.clone(), obj_map, arrow_map))
}
