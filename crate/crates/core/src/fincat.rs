//! Finite categories stored as explicit composition tables, functors between
//! them, and categories over a base (a total category with a projection).
//!
//! Objects and arrows are interned as dense indices; names exist for display
//! and parsing only. Composition is written `compose(g, f)` = "g after f".

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{limits, Error, Result};
use crate::search::{search_functors, FunctorProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArrowId(pub u32);

impl ObjId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl ArrowId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for ObjId {
    fn from(i: usize) -> Self {
        ObjId(i as u32)
    }
}

impl From<usize> for ArrowId {
    fn from(i: usize) -> Self {
        ArrowId(i as u32)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct ArrowData {
    name: String,
    src: ObjId,
    tgt: ObjId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<String>,
    arrows: Vec<ArrowData>,
    identity: Vec<ArrowId>,
    // index g * |arrows| + f
    compose: Vec<Option<ArrowId>>,
    // index src * |objects| + tgt
    hom: Vec<Vec<ArrowId>>,
}

/// Accumulates raw category data. `build` materializes missing identities
/// (named `id_<object>`) and the unit-law compositions; it does not validate.
#[derive(Debug, Clone, Default)]
pub struct CategoryBuilder {
    objects: Vec<String>,
    arrows: Vec<ArrowData>,
    identity: Vec<Option<ArrowId>>,
    compose: Vec<(ArrowId, ArrowId, ArrowId)>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(&mut self, name: impl Into<String>) -> ObjId {
        self.objects.push(name.into());
        self.identity.push(None);
        ObjId::from(self.objects.len() - 1)
    }

    pub fn arrow(&mut self, name: impl Into<String>, src: ObjId, tgt: ObjId) -> ArrowId {
        self.arrows.push(ArrowData {
            name: name.into(),
            src,
            tgt,
        });
        ArrowId::from(self.arrows.len() - 1)
    }

    /// Adds an arrow and registers it as the identity of `obj`.
    pub fn identity(&mut self, obj: ObjId, name: impl Into<String>) -> ArrowId {
        let a = self.arrow(name, obj, obj);
        self.identity[obj.index()] = Some(a);
        a
    }

    pub fn compose(&mut self, g: ArrowId, f: ArrowId, h: ArrowId) {
        self.compose.push((g, f, h));
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn build(mut self) -> FinCategory {
        for (i, slot) in self.identity.iter_mut().enumerate() {
            if slot.is_none() {
                let o = ObjId::from(i);
                self.arrows.push(ArrowData {
                    name: format!("id_{}", self.objects[i]),
                    src: o,
                    tgt: o,
                });
                *slot = Some(ArrowId::from(self.arrows.len() - 1));
            }
        }
        let identity: Vec<ArrowId> = self.identity.into_iter().map(Option::unwrap).collect();
        let n = self.arrows.len();
        let mut compose = vec![None; n * n];
        for (g, f, h) in self.compose {
            compose[g.index() * n + f.index()] = Some(h);
        }
        for (i, a) in self.arrows.iter().enumerate() {
            let id_t = identity[a.tgt.index()].index();
            let id_s = identity[a.src.index()].index();
            compose[id_t * n + i].get_or_insert(ArrowId::from(i));
            compose[i * n + id_s].get_or_insert(ArrowId::from(i));
        }
        FinCategory::from_parts(self.objects, self.arrows, identity, compose)
    }
}

impl FinCategory {
    fn from_parts(
        objects: Vec<String>,
        arrows: Vec<ArrowData>,
        identity: Vec<ArrowId>,
        compose: Vec<Option<ArrowId>>,
    ) -> Self {
        let no = objects.len();
        let mut hom = vec![Vec::new(); no * no];
        for (i, a) in arrows.iter().enumerate() {
            hom[a.src.index() * no + a.tgt.index()].push(ArrowId::from(i));
        }
        FinCategory {
            objects,
            arrows,
            identity,
            compose,
            hom,
        }
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> + '_ {
        (0..self.objects.len()).map(ObjId::from)
    }

    pub fn arrows(&self) -> impl Iterator<Item = ArrowId> + '_ {
        (0..self.arrows.len()).map(ArrowId::from)
    }

    pub fn non_identity_arrows(&self) -> impl Iterator<Item = ArrowId> + '_ {
        self.arrows().filter(|&a| !self.is_identity(a))
    }

    pub fn obj_name(&self, x: ObjId) -> &str {
        &self.objects[x.index()]
    }

    pub fn arrow_name(&self, a: ArrowId) -> &str {
        &self.arrows[a.index()].name
    }

    pub fn find_object(&self, name: &str) -> Option<ObjId> {
        self.objects.iter().position(|o| o == name).map(ObjId::from)
    }

    pub fn find_arrow(&self, name: &str) -> Option<ArrowId> {
        self.arrows.iter().position(|a| a.name == name).map(ArrowId::from)
    }

    pub fn object(&self, name: &str) -> Result<ObjId> {
        self.find_object(name)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn arrow(&self, name: &str) -> Result<ArrowId> {
        self.find_arrow(name)
            .ok_or_else(|| Error::UnknownArrow(name.to_string()))
    }

    pub fn src(&self, a: ArrowId) -> ObjId {
        self.arrows[a.index()].src
    }

    pub fn tgt(&self, a: ArrowId) -> ObjId {
        self.arrows[a.index()].tgt
    }

    pub fn id(&self, x: ObjId) -> ArrowId {
        self.identity[x.index()]
    }

    pub fn is_identity(&self, a: ArrowId) -> bool {
        let s = self.src(a);
        s == self.tgt(a) && self.id(s) == a
    }

    pub fn try_compose(&self, g: ArrowId, f: ArrowId) -> Option<ArrowId> {
        self.compose[g.index() * self.arrows.len() + f.index()]
    }

    /// `g` after `f`. Panics when the pair has no entry, which cannot happen
    /// for a composable pair of a valid category.
    pub fn compose(&self, g: ArrowId, f: ArrowId) -> ArrowId {
        self.try_compose(g, f).unwrap_or_else(|| {
            panic!(
                "no composite {} . {}",
                self.arrow_name(g),
                self.arrow_name(f)
            )
        })
    }

    pub fn hom(&self, x: ObjId, y: ObjId) -> &[ArrowId] {
        &self.hom[x.index() * self.objects.len() + y.index()]
    }

    pub fn arrows_from(&self, x: ObjId) -> impl Iterator<Item = ArrowId> + '_ {
        self.arrows().filter(move |&a| self.src(a) == x)
    }

    pub fn arrows_into(&self, x: ObjId) -> impl Iterator<Item = ArrowId> + '_ {
        self.arrows().filter(move |&a| self.tgt(a) == x)
    }

    /// Composable pairs `(g, f)` with `tgt f = src g`.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (ArrowId, ArrowId)> + '_ {
        self.arrows().flat_map(move |f| {
            let t = self.tgt(f);
            self.arrows_from(t).map(move |g| (g, f))
        })
    }

    pub fn is_groupoid(&self) -> bool {
        self.arrows().all(|f| self.inverse(f).is_some())
    }

    pub fn inverse(&self, f: ArrowId) -> Option<ArrowId> {
        let (x, y) = (self.src(f), self.tgt(f));
        self.hom(y, x).iter().copied().find(|&g| {
            self.try_compose(g, f) == Some(self.id(x)) && self.try_compose(f, g) == Some(self.id(y))
        })
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate_category(self)
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Same identifiers, endpoints swapped, composition reversed.
    pub fn opposite(&self) -> FinCategory {
        let n = self.arrows.len();
        let arrows = self
            .arrows
            .iter()
            .map(|a| ArrowData {
                name: a.name.clone(),
                src: a.tgt,
                tgt: a.src,
            })
            .collect();
        let mut compose = vec![None; n * n];
        for g in 0..n {
            for f in 0..n {
                compose[g * n + f] = self.compose[f * n + g];
            }
        }
        FinCategory::from_parts(self.objects.clone(), arrows, self.identity.clone(), compose)
    }

    /// Full subcategory on `keep` (in the given order).
    pub fn full_subcategory(&self, keep: &[ObjId]) -> (FinCategory, Vec<ArrowId>) {
        let mut b = CategoryBuilder::new();
        let mut new_obj = HashMap::new();
        for &x in keep {
            new_obj.insert(x, b.object(self.obj_name(x)));
        }
        let mut new_arrow = HashMap::new();
        let mut old_arrows = Vec::new();
        for a in self.arrows() {
            if let (Some(&s), Some(&t)) = (new_obj.get(&self.src(a)), new_obj.get(&self.tgt(a))) {
                let na = if self.is_identity(a) {
                    b.identity(s, self.arrow_name(a))
                } else {
                    b.arrow(self.arrow_name(a), s, t)
                };
                new_arrow.insert(a, na);
                old_arrows.push(a);
            }
        }
        for (&g, &ng) in &new_arrow {
            for (&f, &nf) in &new_arrow {
                if self.tgt(f) == self.src(g) {
                    b.compose(ng, nf, new_arrow[&self.compose(g, f)]);
                }
            }
        }
        (b.build(), old_arrows)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateObjectName(String),
    DuplicateArrowName(String),
    IdentityEndpoints { object: String, arrow: String },
    MissingComposite { g: String, f: String },
    NotComposable { g: String, f: String },
    CompositeEndpoints { g: String, f: String, h: String },
    LeftUnit { arrow: String },
    RightUnit { arrow: String },
    Associativity { h: String, g: String, f: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateObjectName(n) => write!(out, "duplicate object name `{n}`"),
            Violation::DuplicateArrowName(n) => write!(out, "duplicate arrow name `{n}`"),
            Violation::IdentityEndpoints { object, arrow } => {
                write!(out, "identity `{arrow}` of `{object}` is not an endo-arrow of it")
            }
            Violation::MissingComposite { g, f } => {
                write!(out, "missing composite for composable pair {g} . {f}")
            }
            Violation::NotComposable { g, f } => {
                write!(out, "composite given for non-composable pair {g} . {f}")
            }
            Violation::CompositeEndpoints { g, f, h } => {
                write!(out, "composite {g} . {f} = {h} has wrong endpoints")
            }
            Violation::LeftUnit { arrow } => write!(out, "left unit law fails for `{arrow}`"),
            Violation::RightUnit { arrow } => write!(out, "right unit law fails for `{arrow}`"),
            Violation::Associativity { h, g, f } => {
                write!(out, "associativity fails for {h} . {g} . {f}")
            }
        }
    }
}

pub fn validate_category(c: &FinCategory) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for o in &c.objects {
        if !seen.insert(o.as_str()) {
            out.push(Violation::DuplicateObjectName(o.clone()));
        }
    }
    seen.clear();
    for a in &c.arrows {
        if !seen.insert(a.name.as_str()) {
            out.push(Violation::DuplicateArrowName(a.name.clone()));
        }
    }
    for x in c.objects() {
        let i = c.id(x);
        if c.src(i) != x || c.tgt(i) != x {
            out.push(Violation::IdentityEndpoints {
                object: c.obj_name(x).to_string(),
                arrow: c.arrow_name(i).to_string(),
            });
        }
    }
    if !out.is_empty() {
        return out;
    }
    let name = |a: ArrowId| c.arrow_name(a).to_string();
    let mut table_ok = true;
    for g in c.arrows() {
        for f in c.arrows() {
            let composable = c.tgt(f) == c.src(g);
            match (composable, c.try_compose(g, f)) {
                (true, None) => {
                    table_ok = false;
                    out.push(Violation::MissingComposite { g: name(g), f: name(f) });
                }
                (false, Some(_)) => {
                    out.push(Violation::NotComposable { g: name(g), f: name(f) });
                }
                (true, Some(h)) if c.src(h) != c.src(f) || c.tgt(h) != c.tgt(g) => {
                    table_ok = false;
                    out.push(Violation::CompositeEndpoints {
                        g: name(g),
                        f: name(f),
                        h: name(h),
                    });
                }
                _ => {}
            }
        }
    }
    if !table_ok {
        return out;
    }
    for a in c.arrows() {
        if c.compose(c.id(c.tgt(a)), a) != a {
            out.push(Violation::LeftUnit { arrow: name(a) });
        }
        if c.compose(a, c.id(c.src(a))) != a {
            out.push(Violation::RightUnit { arrow: name(a) });
        }
    }
    for (g, f) in c.composable_pairs() {
        let gf = c.compose(g, f);
        for h in c.arrows_from(c.tgt(g)) {
            if c.compose(c.compose(h, g), f) != c.compose(h, gf) {
                out.push(Violation::Associativity {
                    h: name(h),
                    g: name(g),
                    f: name(f),
                });
            }
        }
    }
    out
}

pub fn same_category(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functor {
    pub dom: Arc<FinCategory>,
    pub cod: Arc<FinCategory>,
    pub obj_map: Vec<ObjId>,
    pub arrow_map: Vec<ArrowId>,
}

impl Functor {
    pub fn new(
        dom: Arc<FinCategory>,
        cod: Arc<FinCategory>,
        obj_map: Vec<ObjId>,
        arrow_map: Vec<ArrowId>,
    ) -> Self {
        Functor {
            dom,
            cod,
            obj_map,
            arrow_map,
        }
    }

    pub fn identity(c: &Arc<FinCategory>) -> Self {
        Functor::new(
            c.clone(),
            c.clone(),
            c.objects().collect(),
            c.arrows().collect(),
        )
    }

    /// The functor from the one-object category picking `x`.
    pub fn object(c: &Arc<FinCategory>, x: ObjId) -> Self {
        Functor::new(
            Arc::new(crate::catalog::one()),
            c.clone(),
            vec![x],
            vec![c.id(x)],
        )
    }

    /// The functor from the interval category picking `f`.
    pub fn arrow(c: &Arc<FinCategory>, f: ArrowId) -> Self {
        let two = crate::catalog::two();
        let (s, t) = (c.src(f), c.tgt(f));
        let mut arrow_map = vec![f; two.num_arrows()];
        for a in two.arrows() {
            arrow_map[a.index()] = if two.is_identity(a) {
                if two.src(a) == ObjId(0) {
                    c.id(s)
                } else {
                    c.id(t)
                }
            } else {
                f
            };
        }
        Functor::new(Arc::new(two), c.clone(), vec![s, t], arrow_map)
    }

    pub fn obj(&self, x: ObjId) -> ObjId {
        self.obj_map[x.index()]
    }

    pub fn arr(&self, a: ArrowId) -> ArrowId {
        self.arrow_map[a.index()]
    }

    /// `next` after `self`.
    pub fn then(&self, next: &Functor) -> Functor {
        Functor::new(
            self.dom.clone(),
            next.cod.clone(),
            self.obj_map.iter().map(|&x| next.obj(x)).collect(),
            self.arrow_map.iter().map(|&a| next.arr(a)).collect(),
        )
    }

    pub fn violations(&self) -> Vec<String> {
        let (d, c) = (&self.dom, &self.cod);
        let mut out = Vec::new();
        if self.obj_map.len() != d.num_objects() || self.arrow_map.len() != d.num_arrows() {
            out.push("object or arrow map is not total".to_string());
            return out;
        }
        if self.obj_map.iter().any(|x| x.index() >= c.num_objects())
            || self.arrow_map.iter().any(|a| a.index() >= c.num_arrows())
        {
            out.push("map lands outside the codomain".to_string());
            return out;
        }
        for a in d.arrows() {
            let fa = self.arr(a);
            if c.src(fa) != self.obj(d.src(a)) || c.tgt(fa) != self.obj(d.tgt(a)) {
                out.push(format!("arrow `{}` is not sent between the images of its endpoints", d.arrow_name(a)));
            }
        }
        for x in d.objects() {
            if self.arr(d.id(x)) != c.id(self.obj(x)) {
                out.push(format!("identity of `{}` is not preserved", d.obj_name(x)));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for (g, f) in d.composable_pairs() {
            if self.arr(d.compose(g, f)) != c.compose(self.arr(g), self.arr(f)) {
                out.push(format!(
                    "composite {} . {} is not preserved",
                    d.arrow_name(g),
                    d.arrow_name(f)
                ));
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    pub fn is_bijective(&self) -> bool {
        let bij = |m: &[usize], n: usize| {
            let mut seen = vec![false; n];
            m.len() == n && m.iter().all(|&i| !std::mem::replace(&mut seen[i], true))
        };
        let objs: Vec<usize> = self.obj_map.iter().map(|x| x.index()).collect();
        let arrs: Vec<usize> = self.arrow_map.iter().map(|a| a.index()).collect();
        bij(&objs, self.cod.num_objects()) && bij(&arrs, self.cod.num_arrows())
    }
}

/// A category `total` together with a projection functor to `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverCategory {
    pub projection: Functor,
}

impl OverCategory {
    pub fn new(projection: Functor) -> Self {
        OverCategory { projection }
    }

    pub fn total(&self) -> &Arc<FinCategory> {
        &self.projection.dom
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        &self.projection.cod
    }

    pub fn over_obj(&self, a: ObjId) -> ObjId {
        self.projection.obj(a)
    }

    pub fn over_arrow(&self, u: ArrowId) -> ArrowId {
        self.projection.arr(u)
    }

    /// Objects of the total category grouped by the base object they lie over.
    pub fn objects_by_base(&self) -> Vec<Vec<ObjId>> {
        let mut out = vec![Vec::new(); self.base().num_objects()];
        for a in self.total().objects() {
            out[self.over_obj(a).index()].push(a);
        }
        out
    }

    pub fn identity_over(base: &Arc<FinCategory>) -> Self {
        OverCategory::new(Functor::identity(base))
    }

    pub fn object_over(base: &Arc<FinCategory>, x: ObjId) -> Self {
        OverCategory::new(Functor::object(base, x))
    }

    pub fn arrow_over(base: &Arc<FinCategory>, f: ArrowId) -> Self {
        OverCategory::new(Functor::arrow(base, f))
    }

    pub fn empty_over(base: &Arc<FinCategory>) -> Self {
        OverCategory::new(Functor::new(
            Arc::new(CategoryBuilder::new().build()),
            base.clone(),
            Vec::new(),
            Vec::new(),
        ))
    }

    /// `total^op` over `base^op`, identifiers unchanged.
    pub fn opposite(&self) -> OverCategory {
        OverCategory::new(Functor::new(
            Arc::new(self.total().opposite()),
            Arc::new(self.base().opposite()),
            self.projection.obj_map.clone(),
            self.projection.arrow_map.clone(),
        ))
    }

    pub fn check_same_base(&self, other: &OverCategory) -> Result<()> {
        if same_category(self.base(), other.base()) {
            Ok(())
        } else {
            Err(Error::BaseMismatch(
                "categories over different bases".to_string(),
            ))
        }
    }
}

/// The pullback `A ×_X B` of two functors into the same category.
#[derive(Debug, Clone)]
pub struct Pullback {
    pub total: Arc<FinCategory>,
    pub left: Functor,
    pub right: Functor,
    pub to_base: Functor,
    obj_index: HashMap<(ObjId, ObjId), ObjId>,
    arrow_index: HashMap<(ArrowId, ArrowId), ArrowId>,
}

impl Pullback {
    pub fn object(&self, a: ObjId, b: ObjId) -> Option<ObjId> {
        self.obj_index.get(&(a, b)).copied()
    }

    pub fn arrow(&self, u: ArrowId, v: ArrowId) -> Option<ArrowId> {
        self.arrow_index.get(&(u, v)).copied()
    }

    /// The pullback viewed over the common codomain.
    pub fn over(&self) -> OverCategory {
        OverCategory::new(self.to_base.clone())
    }
}

pub fn pullback(f: &Functor, g: &Functor) -> Result<Pullback> {
    if !same_category(&f.cod, &g.cod) {
        return Err(Error::BaseMismatch(
            "pullback of functors with different codomains".to_string(),
        ));
    }
    let (ca, cb, base) = (&f.dom, &g.dom, &f.cod);
    let mut b_objs_over = vec![Vec::new(); base.num_objects()];
    for y in cb.objects() {
        b_objs_over[g.obj(y).index()].push(y);
    }
    let mut b_arrows_over = vec![Vec::new(); base.num_arrows()];
    for v in cb.arrows() {
        b_arrows_over[g.arr(v).index()].push(v);
    }
    let mut builder = CategoryBuilder::new();
    let mut obj_index = HashMap::new();
    let mut pairs = Vec::new();
    for x in ca.objects() {
        for &y in &b_objs_over[f.obj(x).index()] {
            let o = builder.object(format!("({},{})", ca.obj_name(x), cb.obj_name(y)));
            obj_index.insert((x, y), o);
            pairs.push((x, y));
        }
    }
    let mut arrow_index = HashMap::new();
    let mut arrow_pairs = Vec::new();
    for u in ca.arrows() {
        for &v in &b_arrows_over[f.arr(u).index()] {
            let s = obj_index[&(ca.src(u), cb.src(v))];
            let t = obj_index[&(ca.tgt(u), cb.tgt(v))];
            let name = format!("({},{})", ca.arrow_name(u), cb.arrow_name(v));
            let a = if ca.is_identity(u) && cb.is_identity(v) {
                builder.identity(s, name)
            } else {
                builder.arrow(name, s, t)
            };
            arrow_index.insert((u, v), a);
            arrow_pairs.push((u, v));
        }
    }
    for &(u2, v2) in &arrow_pairs {
        for &(u1, v1) in &arrow_pairs {
            if ca.tgt(u1) == ca.src(u2) && cb.tgt(v1) == cb.src(v2) {
                let h = arrow_index[&(ca.compose(u2, u1), cb.compose(v2, v1))];
                builder.compose(arrow_index[&(u2, v2)], arrow_index[&(u1, v1)], h);
            }
        }
    }
    let total = Arc::new(builder.build());
    let left = Functor::new(
        total.clone(),
        ca.clone(),
        pairs.iter().map(|p| p.0).collect(),
        arrow_pairs.iter().map(|p| p.0).collect(),
    );
    let right = Functor::new(
        total.clone(),
        cb.clone(),
        pairs.iter().map(|p| p.1).collect(),
        arrow_pairs.iter().map(|p| p.1).collect(),
    );
    let to_base = left.then(f);
    Ok(Pullback {
        total,
        left,
        right,
        to_base,
        obj_index,
        arrow_index,
    })
}

/// Binary product in `Cat/X`: the pullback of the two totals over the base.
pub fn product_over(p: &OverCategory, q: &OverCategory) -> Result<Pullback> {
    p.check_same_base(q)?;
    pullback(&p.projection, &q.projection)
}

/// The fiber over `x`: objects over `x`, arrows over its identity.
pub fn fiber(p: &OverCategory, x: ObjId) -> Result<FinCategory> {
    let base = p.base();
    if x.index() >= base.num_objects() {
        return Err(Error::UnknownObject(format!("#{}", x.0)));
    }
    let total = p.total();
    let mut b = CategoryBuilder::new();
    let mut new_obj = HashMap::new();
    for a in total.objects().filter(|&a| p.over_obj(a) == x) {
        new_obj.insert(a, b.object(total.obj_name(a)));
    }
    let id_x = base.id(x);
    let mut new_arrow = HashMap::new();
    for u in total.arrows().filter(|&u| p.over_arrow(u) == id_x) {
        let s = new_obj[&total.src(u)];
        let na = if total.is_identity(u) {
            b.identity(s, total.arrow_name(u))
        } else {
            b.arrow(total.arrow_name(u), s, new_obj[&total.tgt(u)])
        };
        new_arrow.insert(u, na);
    }
    for (&g, &ng) in &new_arrow {
        for (&f, &nf) in &new_arrow {
            if total.tgt(f) == total.src(g) {
                b.compose(ng, nf, new_arrow[&total.compose(g, f)]);
            }
        }
    }
    Ok(b.build())
}

/// The pullback of `p` along the interval category picking `f`, over the interval.
pub fn fiber_arrow(p: &OverCategory, f: ArrowId) -> Result<OverCategory> {
    if f.index() >= p.base().num_arrows() {
        return Err(Error::UnknownArrow(format!("#{}", f.0)));
    }
    let pick = Functor::arrow(p.base(), f);
    let pb = pullback(&pick, &p.projection)?;
    Ok(OverCategory::new(pb.left))
}

/// A slice `C/x` (or coslice `x/C`) with lookups from arrows of `C` to its data.
#[derive(Debug, Clone)]
pub struct Slice {
    pub over: OverCategory,
    pub apex: ObjId,
    pub coslice: bool,
    legs: Vec<ArrowId>,
    leg_object: HashMap<ArrowId, ObjId>,
    arrow_index: HashMap<(ArrowId, ObjId, ObjId), ArrowId>,
}

impl Slice {
    /// The arrow of the base that object `o` of the slice stands for.
    pub fn leg(&self, o: ObjId) -> ArrowId {
        self.legs[o.index()]
    }

    pub fn object_for(&self, leg: ArrowId) -> Option<ObjId> {
        self.leg_object.get(&leg).copied()
    }

    /// The slice arrow over `u` from the object of leg `from` to that of leg `to`.
    pub fn arrow_for(&self, u: ArrowId, from: ArrowId, to: ArrowId) -> Option<ArrowId> {
        let (s, t) = (self.object_for(from)?, self.object_for(to)?);
        self.arrow_index.get(&(u, s, t)).copied()
    }
}

/// `C/x`: objects are arrows `h` into `x`, arrows `u: h -> k` satisfy `k . u = h`.
pub fn slice(c: &Arc<FinCategory>, x: ObjId) -> Result<Slice> {
    make_slice(c, x, false)
}

/// `x/C`: objects are arrows `h` out of `x`, arrows `u: h -> k` satisfy `u . h = k`.
pub fn coslice(c: &Arc<FinCategory>, x: ObjId) -> Result<Slice> {
    make_slice(c, x, true)
}

fn make_slice(c: &Arc<FinCategory>, x: ObjId, co: bool) -> Result<Slice> {
    if x.index() >= c.num_objects() {
        return Err(Error::UnknownObject(format!("#{}", x.0)));
    }
    let legs: Vec<ArrowId> = if co {
        c.arrows_from(x).collect()
    } else {
        c.arrows_into(x).collect()
    };
    let mut b = CategoryBuilder::new();
    let mut leg_object = HashMap::new();
    for &h in &legs {
        leg_object.insert(h, b.object(c.arrow_name(h)));
    }
    // The "foot" of a leg: its source for a slice, its target for a coslice.
    let foot = |h: ArrowId| if co { c.tgt(h) } else { c.src(h) };
    let mut arrow_index = HashMap::new();
    // (u, h, k) with u: h -> k
    let mut triples = Vec::new();
    if co {
        for &h in &legs {
            for u in c.arrows_from(c.tgt(h)) {
                triples.push((u, h, c.compose(u, h)));
            }
        }
    } else {
        for &k in &legs {
            for u in c.arrows_into(c.src(k)) {
                triples.push((u, c.compose(k, u), k));
            }
        }
        triples.sort_by_key(|&(u, h, k)| (h, k, u));
    }
    let mut proj_arrows = Vec::new();
    for &(u, h, k) in &triples {
        let (s, t) = (leg_object[&h], leg_object[&k]);
        let name = format!("{}[{},{}]", c.arrow_name(u), c.arrow_name(h), c.arrow_name(k));
        let a = if c.is_identity(u) {
            b.identity(s, name)
        } else {
            b.arrow(name, s, t)
        };
        arrow_index.insert((u, s, t), a);
        proj_arrows.push(u);
    }
    for &(u2, k, m) in &triples {
        for &(u1, h, k1) in &triples {
            if k1 == k {
                let (sh, sk, sm) = (leg_object[&h], leg_object[&k], leg_object[&m]);
                let comp = arrow_index[&(c.compose(u2, u1), sh, sm)];
                b.compose(arrow_index[&(u2, sk, sm)], arrow_index[&(u1, sh, sk)], comp);
            }
        }
    }
    let total = Arc::new(b.build());
    let projection = Functor::new(
        total,
        c.clone(),
        legs.iter().map(|&h| foot(h)).collect(),
        proj_arrows,
    );
    Ok(Slice {
        over: OverCategory::new(projection),
        apex: x,
        coslice: co,
        legs,
        leg_object,
        arrow_index,
    })
}

/// Every functor `C -> D`, in a deterministic order.
pub fn enumerate_functors(c: &Arc<FinCategory>, d: &Arc<FinCategory>) -> Result<Vec<Functor>> {
    let candidates = vec![d.objects().collect::<Vec<_>>(); c.num_objects()];
    let filter = |_: ArrowId, _: ArrowId| true;
    let problem = FunctorProblem {
        dom: c,
        cod: d,
        obj_candidates: candidates,
        arrow_filter: &filter,
        injective: false,
    };
    let mut out = Vec::new();
    search_functors(&problem, limits().search_nodes, &mut |objs, arrows| {
        out.push(Functor::new(c.clone(), d.clone(), objs.to_vec(), arrows.to_vec()));
        true
    })?;
    Ok(out)
}
