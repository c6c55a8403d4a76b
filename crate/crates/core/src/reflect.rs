//! Reflections and coreflections of categories over `X` into discrete
//! fibrations and opfibrations, their universality, limits and colimits of set
//! functors and of functors into `X`, initial functors and absolute colimits.
//!
//! `(↑P)x = components(P/x)` and `(↓P)x = components(x/P)`, where `P/x` is the
//! product of `P` with the slice `X/x` over `X`. `(P↑)x = hom(x/X, P)` and
//! `(P↓)x = hom(X/x, P)`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::Result;
use crate::fincat::{coslice, product_over, slice, ArrowId, FinCategory, Functor, ObjId, OverCategory, Slice};
use crate::overbase::{components, for_each_hom_over, sections, ComponentsResult};
use crate::setfun::{
    find_isomorphism, for_each_nat, Components, Elements, SetFunctor, Variance,
};

/// `↑P` (covariant) or `↓P` (contravariant) with the unit `P -> elements`.
#[derive(Debug, Clone)]
pub struct ReflectionResult {
    pub functor: SetFunctor,
    pub elements: Elements,
    pub unit: Functor,
}

type MorphismKey = (Vec<ObjId>, Vec<ArrowId>);

/// `P↑` (covariant) or `P↓` (contravariant) with the counit `elements -> P`.
#[derive(Debug, Clone)]
pub struct CoreflectionResult {
    pub functor: SetFunctor,
    pub elements: Elements,
    pub counit: Functor,
    /// Every element of every fiber as the morphism out of the (co)slice it is.
    pub morphisms: Vec<Vec<Functor>>,
}

/// `↑P`, the reflection into discrete opfibrations.
pub fn reflect_dof(p: &OverCategory) -> Result<ReflectionResult> {
    reflect(p, Variance::Covariant)
}

/// `↓P`, the reflection into discrete fibrations.
pub fn reflect_df(p: &OverCategory) -> Result<ReflectionResult> {
    reflect(p, Variance::Contravariant)
}

fn make_slice(base: &Arc<FinCategory>, x: ObjId, variance: Variance) -> Result<Slice> {
    match variance {
        // P/x pairs a with legs pi(a) -> x
        Variance::Covariant => slice(base, x),
        // x/P pairs a with legs x -> pi(a)
        Variance::Contravariant => coslice(base, x),
    }
}

fn reflect(p: &OverCategory, variance: Variance) -> Result<ReflectionResult> {
    let base = p.base().clone();
    let total = p.total();
    let mut slices = Vec::new();
    let mut products = Vec::new();
    let mut comps: Vec<ComponentsResult> = Vec::new();
    let mut fibers = Vec::new();
    for x in base.objects() {
        let s = make_slice(&base, x, variance)?;
        let pb = product_over(p, &s.over)?;
        let cr = components(&pb.total);
        fibers.push(
            cr.reps
                .iter()
                .map(|&o| {
                    let (a, leg) = (pb.left.obj(o), pb.right.obj(o));
                    format!("[{},{}]", total.obj_name(a), base.arrow_name(s.leg(leg)))
                })
                .collect(),
        );
        slices.push(s);
        products.push(pb);
        comps.push(cr);
    }
    // class of <a, h> at x
    let class_at = |x: ObjId, a: ObjId, h: ArrowId| -> usize {
        let leg = slices[x.index()].object_for(h).expect("leg exists");
        let o = products[x.index()].object(a, leg).expect("pair exists");
        comps[x.index()].class_of[o.index()]
    };
    let mut action = Vec::new();
    for f in base.arrows() {
        // covariant: f: x -> y sends [a, h] at x to [a, f h] at y
        // contravariant: f: x -> y sends [a, h] at y to [a, h f] at x
        let (from, to) = match variance {
            Variance::Covariant => (base.src(f), base.tgt(f)),
            Variance::Contravariant => (base.tgt(f), base.src(f)),
        };
        let pb = &products[from.index()];
        let s = &slices[from.index()];
        let moved = |o: ObjId| {
            let (a, h) = (pb.left.obj(o), s.leg(pb.right.obj(o)));
            let h2 = match variance {
                Variance::Covariant => base.compose(f, h),
                Variance::Contravariant => base.compose(h, f),
            };
            class_at(to, a, h2)
        };
        let cr = &comps[from.index()];
        let row: Vec<usize> = cr.reps.iter().map(|&o| moved(o)).collect();
        debug_assert!(
            pb.total.objects().all(|o| moved(o) == row[cr.class_of[o.index()]]),
            "reflection action is not well defined"
        );
        action.push(row);
    }
    let functor = SetFunctor {
        base: base.clone(),
        variance,
        fibers,
        action,
    };
    debug_assert!(functor.violations().is_empty(), "{:?}", functor.violations());
    let elements = functor.elements();
    // unit: a over x goes to [a, id_x]; u over f goes to the lift of f at [a, id]
    let obj_map: Vec<ObjId> = total
        .objects()
        .map(|a| {
            let x = p.over_obj(a);
            elements.object_of[x.index()][class_at(x, a, base.id(x))]
        })
        .collect();
    let arrow_map = total
        .arrows()
        .map(|u| {
            let f = p.over_arrow(u);
            let a = match variance {
                Variance::Covariant => total.src(u),
                Variance::Contravariant => total.tgt(u),
            };
            let x = p.over_obj(a);
            elements.arrow_of[f.index()][class_at(x, a, base.id(x))]
        })
        .collect();
    let unit = Functor::new(total.clone(), elements.over.total().clone(), obj_map, arrow_map);
    debug_assert!(unit.is_valid(), "unit is not a functor: {:?}", unit.violations());
    Ok(ReflectionResult {
        functor,
        elements,
        unit,
    })
}

/// `P↑`, the coreflection into discrete opfibrations.
pub fn coreflect_dof(p: &OverCategory) -> Result<CoreflectionResult> {
    coreflect(p, Variance::Covariant)
}

/// `P↓`, the coreflection into discrete fibrations.
pub fn coreflect_df(p: &OverCategory) -> Result<CoreflectionResult> {
    coreflect(p, Variance::Contravariant)
}

fn coreflect(p: &OverCategory, variance: Variance) -> Result<CoreflectionResult> {
    let base = p.base().clone();
    let total = p.total();
    let mut slices = Vec::new();
    let mut morphisms: Vec<Vec<Functor>> = Vec::new();
    // per base object: a morphism's (object map, arrow map) -> its index
    let mut lookup: Vec<HashMap<MorphismKey, usize>> = Vec::new();
    for x in base.objects() {
        // covariant: x/X; contravariant: X/x
        let s = match variance {
            Variance::Covariant => coslice(&base, x)?,
            Variance::Contravariant => slice(&base, x)?,
        };
        let mut found = Vec::new();
        let mut index = HashMap::new();
        for_each_hom_over(&s.over, p, &mut |o, a| {
            index.insert((o.to_vec(), a.to_vec()), found.len());
            found.push(Functor::new(s.over.total().clone(), total.clone(), o.to_vec(), a.to_vec()));
            true
        })?;
        slices.push(s);
        morphisms.push(found);
        lookup.push(index);
    }
    let fibers = base
        .objects()
        .map(|x| {
            let s = &slices[x.index()];
            let mut seen: HashMap<String, usize> = HashMap::new();
            morphisms[x.index()]
                .iter()
                .map(|xi| {
                    let legs: Vec<&str> = s.over.total().objects().map(|o| total.obj_name(xi.obj(o))).collect();
                    let name = format!("<{}>", legs.join(","));
                    let k = seen.entry(name.clone()).or_insert(0);
                    *k += 1;
                    if *k == 1 { name } else { format!("{name}#{k}") }
                })
                .collect()
        })
        .collect();
    let mut action = Vec::new();
    for f in base.arrows() {
        let (from, to) = match variance {
            Variance::Covariant => (base.src(f), base.tgt(f)),
            Variance::Contravariant => (base.tgt(f), base.src(f)),
        };
        let (sf, st) = (&slices[from.index()], &slices[to.index()]);
        // a leg h of the target slice is read at leg h . f (covariant) or f . h
        let pull = |h: ArrowId| match variance {
            Variance::Covariant => base.compose(h, f),
            Variance::Contravariant => base.compose(f, h),
        };
        let row = morphisms[from.index()]
            .iter()
            .map(|xi| {
                let tt = st.over.total();
                let obj_map: Vec<ObjId> = tt
                    .objects()
                    .map(|o| xi.obj(sf.object_for(pull(st.leg(o))).unwrap()))
                    .collect();
                let arrow_map: Vec<ArrowId> = tt
                    .arrows()
                    .map(|v| {
                        let u = st.over.over_arrow(v);
                        let (h, k) = (st.leg(tt.src(v)), st.leg(tt.tgt(v)));
                        xi.arr(sf.arrow_for(u, pull(h), pull(k)).unwrap())
                    })
                    .collect();
                lookup[to.index()][&(obj_map, arrow_map)]
            })
            .collect();
        action.push(row);
    }
    let functor = SetFunctor {
        base: base.clone(),
        variance,
        fibers,
        action,
    };
    debug_assert!(functor.violations().is_empty(), "{:?}", functor.violations());
    let elements = functor.elements();
    let et = elements.over.total();
    let obj_map = et
        .objects()
        .map(|o| {
            let (x, i) = elements.element_of[o.index()];
            let s = &slices[x.index()];
            morphisms[x.index()][i].obj(s.object_for(base.id(x)).unwrap())
        })
        .collect();
    let mut arrow_map = vec![ArrowId(0); et.num_arrows()];
    for f in base.arrows() {
        let from = match variance {
            Variance::Covariant => base.src(f),
            Variance::Contravariant => base.tgt(f),
        };
        let s = &slices[from.index()];
        let idx = base.id(from);
        for (i, xi) in morphisms[from.index()].iter().enumerate() {
            // the (co)slice arrow f between id and f
            let v = match variance {
                Variance::Covariant => s.arrow_for(f, idx, f),
                Variance::Contravariant => s.arrow_for(f, f, idx),
            }
            .unwrap();
            arrow_map[elements.arrow_of[f.index()][i].index()] = xi.arr(v);
        }
    }
    let counit = Functor::new(et.clone(), total.clone(), obj_map, arrow_map);
    debug_assert!(counit.is_valid(), "counit is not a functor: {:?}", counit.violations());
    Ok(CoreflectionResult {
        functor,
        elements,
        counit,
        morphisms,
    })
}

/// Counts from a universality check by enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalityReport {
    /// Morphisms between `p` and `elements(D)` over the base.
    pub morphisms: usize,
    /// Transformations between the (co)reflection and `D`.
    pub transformations: usize,
    /// Whether every morphism arises from exactly one transformation.
    pub universal: bool,
}

/// Every morphism `p -> elements(D)` factors uniquely through the unit of the
/// reflection of the variance of `D`.
pub fn verify_reflection_universal(p: &OverCategory, d: &SetFunctor) -> Result<UniversalityReport> {
    let r = reflect(p, d.variance)?;
    let del = d.elements();
    p.check_same_base(&del.over)?;
    // morphisms into elements of a (op)fibration are determined by their object maps
    let mut morphisms: HashMap<Vec<ObjId>, usize> = HashMap::new();
    for_each_hom_over(p, &del.over, &mut |o, _| {
        morphisms.insert(o.to_vec(), 0);
        true
    })?;
    let mut transformations = 0;
    let mut stray = false;
    let unit = &r.unit;
    for_each_nat(&r.functor, d, &mut |m: &Components| {
        transformations += 1;
        let composite: Vec<ObjId> = unit
            .obj_map
            .iter()
            .map(|&o| {
                let (x, i) = r.elements.element_of[o.index()];
                del.object_of[x.index()][m[x.index()][i]]
            })
            .collect();
        match morphisms.get_mut(&composite) {
            Some(n) => *n += 1,
            None => stray = true,
        }
        true
    })?;
    let universal = !stray && morphisms.values().all(|&n| n == 1);
    Ok(UniversalityReport {
        morphisms: morphisms.len(),
        transformations,
        universal,
    })
}

/// Every morphism `elements(D) -> p` factors uniquely through the counit of the
/// coreflection of the variance of `D`.
pub fn verify_coreflection_universal(p: &OverCategory, d: &SetFunctor) -> Result<UniversalityReport> {
    let r = coreflect(p, d.variance)?;
    let del = d.elements();
    p.check_same_base(&del.over)?;
    let mut morphisms: HashMap<(Vec<ObjId>, Vec<ArrowId>), usize> = HashMap::new();
    for_each_hom_over(&del.over, p, &mut |o, a| {
        morphisms.insert((o.to_vec(), a.to_vec()), 0);
        true
    })?;
    let mut transformations = 0;
    let mut stray = false;
    let dt = del.over.total();
    let counit = &r.counit;
    for_each_nat(d, &r.functor, &mut |m: &Components| {
        transformations += 1;
        let obj: Vec<ObjId> = dt
            .objects()
            .map(|o| {
                let (x, i) = del.element_of[o.index()];
                counit.obj(r.elements.object_of[x.index()][m[x.index()][i]])
            })
            .collect();
        let mut arr = vec![ArrowId(0); dt.num_arrows()];
        for f in d.base.arrows() {
            let from = d.action_src(f);
            for (i, &u) in del.arrow_of[f.index()].iter().enumerate() {
                let j = m[from.index()][i];
                arr[u.index()] = counit.arr(r.elements.arrow_of[f.index()][j]);
            }
        }
        match morphisms.get_mut(&(obj, arr)) {
            Some(n) => *n += 1,
            None => stray = true,
        }
        true
    })?;
    let universal = !stray && morphisms.values().all(|&n| n == 1);
    Ok(UniversalityReport {
        morphisms: morphisms.len(),
        transformations,
        universal,
    })
}

/// Compatible families: one element per object, preserved by every action.
pub fn limit_setfunctor(a: &SetFunctor) -> Result<Vec<Vec<usize>>> {
    let el = a.elements();
    Ok(sections(&el.over)?
        .into_iter()
        .map(|s| s.obj_map.iter().map(|&o| el.element_of[o.index()].1).collect())
        .collect())
}

/// Components of the category of elements; `element_of` maps objects to `(x, a)`.
pub fn colimit_setfunctor(a: &SetFunctor) -> (Elements, ComponentsResult) {
    let el = a.elements();
    let cr = components(el.over.total());
    (el, cr)
}

/// A cone over or under `p` with its legs indexed by the objects of the total category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    pub apex: ObjId,
    pub legs: Vec<ArrowId>,
}

fn cones(p: &OverCategory, y: ObjId, colimit: bool) -> Result<Vec<Vec<ArrowId>>> {
    let base = p.base();
    // colimit cones are morphisms p -> X/y, limit cones p -> y/X
    let s = if colimit { slice(base, y)? } else { coslice(base, y)? };
    let mut out = Vec::new();
    for_each_hom_over(p, &s.over, &mut |o, _| {
        out.push(o.iter().map(|&l| s.leg(l)).collect());
        true
    })?;
    Ok(out)
}

fn universal_cone(p: &OverCategory, colimit: bool) -> Result<Option<Cone>> {
    let base = p.base();
    let all: Vec<Vec<Vec<ArrowId>>> = base.objects().map(|y| cones(p, y, colimit)).collect::<Result<_>>()?;
    let sets: Vec<HashMap<&Vec<ArrowId>, ()>> = all.iter().map(|v| v.iter().map(|c| (c, ())).collect()).collect();
    for x in base.objects() {
        'cone: for c in &all[x.index()] {
            for y in base.objects() {
                // colimit: g: x -> y acts by g . c; limit: g: y -> x acts by c . g
                let hom = if colimit { base.hom(x, y) } else { base.hom(y, x) };
                if hom.len() != all[y.index()].len() {
                    continue 'cone;
                }
                let mut images: Vec<Vec<ArrowId>> = hom
                    .iter()
                    .map(|&g| {
                        c.iter()
                            .map(|&l| if colimit { base.compose(g, l) } else { base.compose(l, g) })
                            .collect()
                    })
                    .collect();
                if !images.iter().all(|im| sets[y.index()].contains_key(im)) {
                    continue 'cone;
                }
                images.sort();
                images.dedup();
                if images.len() != hom.len() {
                    continue 'cone;
                }
            }
            return Ok(Some(Cone {
                apex: x,
                legs: c.clone(),
            }));
        }
    }
    Ok(None)
}

/// The colimit in the base of the functor `p` with its universal cocone.
pub fn colimit_in_base(p: &OverCategory) -> Result<Option<Cone>> {
    universal_cone(p, true)
}

/// The limit in the base of the functor `p` with its universal cone.
pub fn limit_in_base(p: &OverCategory) -> Result<Option<Cone>> {
    universal_cone(p, false)
}

/// Every fiber of `↑p` is a singleton.
pub fn is_initial_functor(p: &OverCategory) -> Result<bool> {
    let r = reflect_dof(p)?;
    Ok(p.base().objects().all(|x| r.functor.fiber_size(x) == 1))
}

/// An object `x` with `↓p ≅ X(-, x)`, and the isomorphism.
pub fn absolute_colimit(p: &OverCategory) -> Result<Option<(ObjId, Components)>> {
    let r = reflect_df(p)?;
    for x in p.base().objects() {
        if let Some(iso) = find_isomorphism(&r.functor, &SetFunctor::representable(p.base(), x))? {
            return Ok(Some((x, iso)));
        }
    }
    Ok(None)
}

/// An object `x` with `↑p ≅ X(x, -)`, and the isomorphism.
pub fn absolute_limit(p: &OverCategory) -> Result<Option<(ObjId, Components)>> {
    let r = reflect_dof(p)?;
    for x in p.base().objects() {
        if let Some(iso) = find_isomorphism(&r.functor, &SetFunctor::corepresentable(p.base(), x))? {
            return Ok(Some((x, iso)));
        }
    }
    Ok(None)
}

/// A section/retraction pair exhibiting `a` as a retract of `rep`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Retract {
    pub object: ObjId,
    /// `iota: a -> rep`.
    pub section: Components,
    /// `rho: rep -> a`.
    pub retraction: Components,
}

/// First `x` (in object order) such that `a` is a retract of the (co)representable at `x`.
pub fn retract_of_hom_functor(a: &SetFunctor) -> Result<Option<Retract>> {
    let base = &a.base;
    for x in base.objects() {
        let rep = match a.variance {
            Variance::Contravariant => SetFunctor::representable(base, x),
            Variance::Covariant => SetFunctor::corepresentable(base, x),
        };
        if let Some((section, retraction)) = split_retract(a, &rep, x)? {
            return Ok(Some(Retract {
                object: x,
                section,
                retraction,
            }));
        }
    }
    Ok(None)
}

/// `(iota, rho)` with `rho . iota = id_a`, `rep` the (co)representable at `x`.
/// By Yoneda `rho` is determined by the element `rho(id_x)` of `a` at `x`.
fn split_retract(a: &SetFunctor, rep: &SetFunctor, x: ObjId) -> Result<Option<(Components, Components)>> {
    let base = &a.base;
    let hom = |z: ObjId| match a.variance {
        Variance::Contravariant => base.hom(z, x),
        Variance::Covariant => base.hom(x, z),
    };
    let mut found = None;
    for r in 0..a.fiber_size(x) {
        let rho: Components = base
            .objects()
            .map(|z| hom(z).iter().map(|&h| a.apply(h, r)).collect())
            .collect();
        for_each_nat(a, rep, &mut |iota: &Components| {
            let ok = base
                .objects()
                .all(|z| (0..a.fiber_size(z)).all(|i| rho[z.index()][iota[z.index()][i]] == i));
            if ok {
                found = Some((iota.clone(), rho.clone()));
            }
            !ok
        })?;
        if found.is_some() {
            break;
        }
    }
    Ok(found)
}

/// An object `x` with `↓p` a retract of `X(-, x)`.
pub fn weak_absolute_colimit(p: &OverCategory) -> Result<Option<ObjId>> {
    let r = reflect_df(p)?;
    Ok(retract_of_hom_functor(&r.functor)?.map(|w| w.object))
}

/// An object `x` with `↑p` a retract of `X(x, -)`.
pub fn weak_absolute_limit(p: &OverCategory) -> Result<Option<ObjId>> {
    let r = reflect_dof(p)?;
    Ok(retract_of_hom_functor(&r.functor)?.map(|w| w.object))
}
