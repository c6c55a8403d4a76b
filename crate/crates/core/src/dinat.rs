//! Profunctors `H: X^op x X -> FinSet`, the category over `X` they induce,
//! strong dinatural transformations, ends, strong coends and classical coends.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{same_category, ArrowId, CategoryBuilder, FinCategory, Functor, ObjId, OverCategory};
use crate::overbase::{components, for_each_hom_over, sections, ComponentsResult};
use crate::setfun::{decode_function, encode_function, SetFunctor, Variance};
use crate::unionfind::UnionFind;

/// For `f: x -> y`: `left[f][z]` maps `H(y,z) -> H(x,z)` and
/// `right[f][z]` maps `H(z,x) -> H(z,y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profunctor {
    pub base: Arc<FinCategory>,
    /// `values[x * n + y] = H(x, y)`.
    pub values: Vec<Vec<String>>,
    pub left: Vec<Vec<Vec<usize>>>,
    pub right: Vec<Vec<Vec<usize>>>,
}

impl Profunctor {
    fn n(&self) -> usize {
        self.base.num_objects()
    }

    pub fn value(&self, x: ObjId, y: ObjId) -> &[String] {
        &self.values[x.index() * self.n() + y.index()]
    }

    pub fn size(&self, x: ObjId, y: ObjId) -> usize {
        self.value(x, y).len()
    }

    /// `H(f, z)`.
    pub fn left_act(&self, f: ArrowId, z: ObjId, i: usize) -> usize {
        self.left[f.index()][z.index()][i]
    }

    /// `H(z, f)`.
    pub fn right_act(&self, f: ArrowId, z: ObjId, i: usize) -> usize {
        self.right[f.index()][z.index()][i]
    }

    pub fn violations(&self) -> Vec<String> {
        let c = &self.base;
        let n = self.n();
        let mut out = Vec::new();
        if self.values.len() != n * n || self.left.len() != c.num_arrows() || self.right.len() != c.num_arrows() {
            out.push("value or action table is not total".into());
            return out;
        }
        for f in c.arrows() {
            let (x, y) = (c.src(f), c.tgt(f));
            for z in c.objects() {
                let l = &self.left[f.index()][z.index()];
                let r = &self.right[f.index()][z.index()];
                if l.len() != self.size(y, z) || l.iter().any(|&j| j >= self.size(x, z)) {
                    out.push(format!("left action of `{}` at `{}` has the wrong shape", c.arrow_name(f), c.obj_name(z)));
                }
                if r.len() != self.size(z, x) || r.iter().any(|&j| j >= self.size(z, y)) {
                    out.push(format!("right action of `{}` at `{}` has the wrong shape", c.arrow_name(f), c.obj_name(z)));
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for x in c.objects() {
            let id = c.id(x);
            for z in c.objects() {
                let trivial = |m: &Vec<usize>| m.iter().enumerate().all(|(i, &j)| i == j);
                if !trivial(&self.left[id.index()][z.index()]) || !trivial(&self.right[id.index()][z.index()]) {
                    out.push(format!("identity of `{}` does not act trivially", c.obj_name(x)));
                }
            }
        }
        for (g, f) in c.composable_pairs() {
            let gf = c.compose(g, f);
            for z in c.objects() {
                // H(gf, z) = H(f, z) . H(g, z)
                let ok_l = (0..self.size(c.tgt(g), z))
                    .all(|i| self.left_act(gf, z, i) == self.left_act(f, z, self.left_act(g, z, i)));
                // H(z, gf) = H(z, g) . H(z, f)
                let ok_r = (0..self.size(z, c.src(f)))
                    .all(|i| self.right_act(gf, z, i) == self.right_act(g, z, self.right_act(f, z, i)));
                if !ok_l || !ok_r {
                    out.push(format!(
                        "action does not respect {} . {} at `{}`",
                        c.arrow_name(g),
                        c.arrow_name(f),
                        c.obj_name(z)
                    ));
                }
            }
        }
        for f in c.arrows() {
            for g in c.arrows() {
                // H(f: x->y, -) and H(-, g: u->v) commute on H(y, u)
                let (x, y, u, v) = (c.src(f), c.tgt(f), c.src(g), c.tgt(g));
                let ok = (0..self.size(y, u)).all(|i| {
                    self.right_act(g, x, self.left_act(f, u, i)) == self.left_act(f, v, self.right_act(g, y, i))
                });
                if !ok {
                    out.push(format!(
                        "left action of `{}` and right action of `{}` do not commute",
                        c.arrow_name(f),
                        c.arrow_name(g)
                    ));
                }
            }
        }
        out
    }

    /// Builds from value sizes/names and two action rules; validates the result.
    fn build(
        base: &Arc<FinCategory>,
        values: Vec<Vec<String>>,
        left: impl Fn(ArrowId, ObjId, usize) -> usize,
        right: impl Fn(ArrowId, ObjId, usize) -> usize,
    ) -> Profunctor {
        let c = base;
        let n = c.num_objects();
        let size = |x: ObjId, y: ObjId| values[x.index() * n + y.index()].len();
        let l = c
            .arrows()
            .map(|f| c.objects().map(|z| (0..size(c.tgt(f), z)).map(|i| left(f, z, i)).collect()).collect())
            .collect();
        let r = c
            .arrows()
            .map(|f| c.objects().map(|z| (0..size(z, c.src(f))).map(|i| right(f, z, i)).collect()).collect())
            .collect();
        Profunctor {
            base: base.clone(),
            values,
            left: l,
            right: r,
        }
    }

    /// `hom_X`.
    pub fn hom(base: &Arc<FinCategory>) -> Profunctor {
        let c = base.clone();
        let homs: Vec<Vec<ArrowId>> = c
            .objects()
            .flat_map(|x| c.objects().map(move |y| (x, y)))
            .map(|(x, y)| c.hom(x, y).to_vec())
            .collect();
        let n = c.num_objects();
        let values = homs
            .iter()
            .map(|row| row.iter().map(|&h| c.arrow_name(h).to_string()).collect())
            .collect();
        let pos = |x: ObjId, y: ObjId, h: ArrowId| homs[x.index() * n + y.index()].iter().position(|&k| k == h).unwrap();
        Profunctor::build(
            base,
            values,
            |f, z, i| {
                let h = homs[c.tgt(f).index() * n + z.index()][i];
                pos(c.src(f), z, c.compose(h, f))
            },
            |f, z, i| {
                let h = homs[z.index() * n + c.src(f).index()][i];
                pos(z, c.tgt(f), c.compose(f, h))
            },
        )
    }

    pub fn constant(base: &Arc<FinCategory>, s: &[String]) -> Profunctor {
        let n = base.num_objects();
        Profunctor::build(base, vec![s.to_vec(); n * n], |_, _, i| i, |_, _, i| i)
    }

    /// `H(x, y) = Ax x Dy`.
    pub fn product(a: &SetFunctor, d: &SetFunctor) -> Result<Profunctor> {
        check_pair(a, d, Variance::Contravariant, Variance::Covariant)?;
        let c = &a.base;
        let values = c
            .objects()
            .flat_map(|x| c.objects().map(move |y| (x, y)))
            .map(|(x, y)| {
                let mut v = Vec::new();
                for ea in &a.fibers[x.index()] {
                    for ed in &d.fibers[y.index()] {
                        v.push(format!("({ea},{ed})"));
                    }
                }
                v
            })
            .collect();
        Ok(Profunctor::build(
            &a.base,
            values,
            |f, z, i| {
                let nd = d.fiber_size(z);
                a.apply(f, i / nd) * nd + i % nd
            },
            |f, _z, i| {
                let (ndx, ndy) = (d.fiber_size(c.src(f)), d.fiber_size(c.tgt(f)));
                (i / ndx) * ndy + d.apply(f, i % ndx)
            },
        ))
    }

    /// `H(x, y) = Set(Ax, By)` for covariant `A`, `B`; its end is `Nat(A, B)`.
    pub fn functions(a: &SetFunctor, b: &SetFunctor) -> Result<Profunctor> {
        check_pair(a, b, Variance::Covariant, Variance::Covariant)?;
        let c = &a.base;
        let mut values = Vec::new();
        for x in c.objects() {
            for y in c.objects() {
                let (na, nb) = (a.fiber_size(x), b.fiber_size(y));
                let count = (nb as u64).checked_pow(na as u32).unwrap_or(u64::MAX);
                if count > crate::error::limits().fiber_elements {
                    return Err(Error::SizeCap {
                        what: "function-set profunctor value".into(),
                        cap: crate::error::limits().fiber_elements,
                    });
                }
                values.push(
                    (0..count as usize)
                        .map(|i| {
                            let h = decode_function(i, na, nb);
                            let parts: Vec<&str> = h.iter().map(|&v| b.fibers[y.index()][v].as_str()).collect();
                            format!("[{}]", parts.join(","))
                        })
                        .collect::<Vec<_>>(),
                );
            }
        }
        Ok(Profunctor::build(
            &a.base,
            values,
            |f, z, i| {
                // h: A(tgt f) -> Bz becomes h . Af
                let (x, y) = (c.src(f), c.tgt(f));
                let h = decode_function(i, a.fiber_size(y), b.fiber_size(z));
                let img: Vec<usize> = (0..a.fiber_size(x)).map(|e| h[a.apply(f, e)]).collect();
                encode_function(&img, b.fiber_size(z))
            },
            |f, z, i| {
                // h: Az -> B(src f) becomes Bf . h
                let (x, y) = (c.src(f), c.tgt(f));
                let h = decode_function(i, a.fiber_size(z), b.fiber_size(x));
                let img: Vec<usize> = h.iter().map(|&v| b.apply(f, v)).collect();
                encode_function(&img, b.fiber_size(y))
            },
        ))
    }
}

fn check_pair(a: &SetFunctor, b: &SetFunctor, va: Variance, vb: Variance) -> Result<()> {
    if a.variance != va || b.variance != vb {
        return Err(Error::Invalid("set functors of the wrong variance".into()));
    }
    if !same_category(&a.base, &b.base) {
        return Err(Error::BaseMismatch("set functors on different bases".into()));
    }
    Ok(())
}

/// The category over `X` with objects `<x, a in H(x,x)>` and one arrow
/// `f: a -> b` whenever `H(x,f) a = H(f,y) b`.
#[derive(Debug, Clone)]
pub struct ProfunctorOver {
    pub over: OverCategory,
    /// `object_of[x][a]`.
    pub object_of: Vec<Vec<ObjId>>,
    pub element_of: Vec<(ObjId, usize)>,
}

pub fn profunctor_over(h: &Profunctor) -> Result<ProfunctorOver> {
    let c = &h.base;
    let mut b = CategoryBuilder::new();
    let mut object_of = Vec::new();
    let mut element_of = Vec::new();
    for x in c.objects() {
        let row: Vec<ObjId> = (0..h.size(x, x))
            .map(|i| {
                element_of.push((x, i));
                b.object(format!("({},{})", c.obj_name(x), h.value(x, x)[i]))
            })
            .collect();
        object_of.push(row);
    }
    let mut index = std::collections::HashMap::new();
    let mut arrows = Vec::new();
    for f in c.arrows() {
        let (x, y) = (c.src(f), c.tgt(f));
        for i in 0..h.size(x, x) {
            let via_a = h.right_act(f, x, i);
            for j in 0..h.size(y, y) {
                if via_a == h.left_act(f, y, j) {
                    let (s, t) = (object_of[x.index()][i], object_of[y.index()][j]);
                    let name = format!("({},{},{})", c.arrow_name(f), h.value(x, x)[i], h.value(y, y)[j]);
                    let u = if c.is_identity(f) && i == j { b.identity(s, name) } else { b.arrow(name, s, t) };
                    index.insert((f, i, j), u);
                    arrows.push((f, i, j));
                }
            }
        }
    }
    for &(g, j, k) in &arrows {
        for &(f, i, j2) in &arrows {
            if c.tgt(f) != c.src(g) || j != j2 {
                continue;
            }
            let gf = c.compose(g, f);
            match index.get(&(gf, i, k)) {
                Some(&u) => b.compose(index[&(g, j, k)], index[&(f, i, j)], u),
                None => {
                    return Err(Error::Invalid(format!(
                        "composite {} . {} has no lift between the given elements",
                        c.arrow_name(g),
                        c.arrow_name(f)
                    )))
                }
            }
        }
    }
    let total = Arc::new(b.build());
    let proj = Functor::new(
        total,
        c.clone(),
        element_of.iter().map(|&(x, _)| x).collect(),
        arrows.iter().map(|&(f, _, _)| f).collect(),
    );
    Ok(ProfunctorOver {
        over: OverCategory::new(proj),
        object_of,
        element_of,
    })
}

/// Families `x -> H(x,x)` forming sections of the induced category.
pub fn end(h: &Profunctor) -> Result<Vec<Vec<usize>>> {
    let po = profunctor_over(h)?;
    Ok(sections(&po.over)?
        .into_iter()
        .map(|s| s.obj_map.iter().map(|&o| po.element_of[o.index()].1).collect())
        .collect())
}

/// Components of the induced category; classes named by their minimum element.
pub fn strong_coend(h: &Profunctor) -> Result<(ProfunctorOver, ComponentsResult)> {
    let po = profunctor_over(h)?;
    let comps = components(po.over.total());
    Ok((po, comps))
}

/// `sum_x H(x,x)` modulo `H(f,x) h ~ H(y,f) h` for `f: x -> y`, `h in H(y,x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalCoend {
    pub elements: Vec<(ObjId, usize)>,
    pub class_of: Vec<usize>,
    pub count: usize,
}

pub fn coend_classical(h: &Profunctor) -> ClassicalCoend {
    let c = &h.base;
    let mut offset = Vec::new();
    let mut elements = Vec::new();
    for x in c.objects() {
        offset.push(elements.len());
        elements.extend((0..h.size(x, x)).map(|i| (x, i)));
    }
    let mut uf = UnionFind::new(elements.len());
    for f in c.arrows() {
        let (x, y) = (c.src(f), c.tgt(f));
        for i in 0..h.size(y, x) {
            uf.union(offset[x.index()] + h.left_act(f, x, i), offset[y.index()] + h.right_act(f, y, i));
        }
    }
    let (reps, class_of) = uf.classes();
    ClassicalCoend {
        elements,
        class_of,
        count: reps.len(),
    }
}

/// Families `alpha_x: H(x,x) -> K(x,x)` that are morphisms of the induced categories.
pub fn strong_dinaturals(h: &Profunctor, k: &Profunctor) -> Result<Vec<Vec<Vec<usize>>>> {
    if !same_category(&h.base, &k.base) {
        return Err(Error::BaseMismatch("profunctors on different bases".into()));
    }
    let (ph, pk) = (profunctor_over(h)?, profunctor_over(k)?);
    let c = &h.base;
    let mut out = Vec::new();
    for_each_hom_over(&ph.over, &pk.over, &mut |objs, _| {
        let mut fam: Vec<Vec<usize>> = c.objects().map(|x| vec![0; h.size(x, x)]).collect();
        for (o, &img) in objs.iter().enumerate() {
            let (x, i) = ph.element_of[o];
            fam[x.index()][i] = pk.element_of[img.index()].1;
        }
        out.push(fam);
        true
    })?;
    Ok(out)
}

/// Whether `H(y,x) -> {(a, b) | H(x,f) a = H(f,y) b}`, `h -> (H(f,x) h, H(y,f) h)`, is a bijection.
pub fn check_strong_pullback(h: &Profunctor, f: ArrowId) -> Result<bool> {
    let c = &h.base;
    if f.index() >= c.num_arrows() {
        return Err(Error::UnknownArrow(format!("#{}", f.0)));
    }
    let (x, y) = (c.src(f), c.tgt(f));
    let mut pullback = Vec::new();
    for i in 0..h.size(x, x) {
        for j in 0..h.size(y, y) {
            if h.right_act(f, x, i) == h.left_act(f, y, j) {
                pullback.push((i, j));
            }
        }
    }
    let mut hit = vec![false; pullback.len()];
    for e in 0..h.size(y, x) {
        let pair = (h.left_act(f, x, e), h.right_act(f, y, e));
        let pos = pullback.binary_search(&pair).expect("square commutes");
        if std::mem::replace(&mut hit[pos], true) {
            return Ok(false);
        }
    }
    Ok(hit.iter().all(|&b| b))
}
