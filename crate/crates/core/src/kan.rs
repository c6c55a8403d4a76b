//! Base change along a functor `f: X -> Y`: `f_!` (compose the projection with
//! `f`), `f*` (pull back along `f`), the Frobenius comparison, and left and
//! right Kan extensions of copresheaves.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{coslice, product_over, pullback, same_category, FinCategory, Functor, ObjId, OverCategory};
use crate::overbase::{for_each_hom_over, tensor_product_classical};
use crate::reflect::{colimit_in_base, reflect_dof, Cone};
use crate::setfun::{SetFunctor, Variance};

/// A functor `f: X -> Y` used to move categories over `X` to `Y` and back.
#[derive(Debug, Clone)]
pub struct BaseChange {
    pub f: Functor,
}

impl BaseChange {
    pub fn new(f: Functor) -> Result<Self> {
        let report = f.violations();
        if report.is_empty() {
            Ok(BaseChange { f })
        } else {
            Err(Error::Invalid(report.join("; ")))
        }
    }

    pub fn source(&self) -> &Arc<FinCategory> {
        &self.f.dom
    }

    pub fn target(&self) -> &Arc<FinCategory> {
        &self.f.cod
    }
}

/// `f_! p`: the same total category projected through `f`.
pub fn pushforward(f: &BaseChange, p: &OverCategory) -> Result<OverCategory> {
    if !same_category(p.base(), f.source()) {
        return Err(Error::BaseMismatch("pushforward of a category over another base".into()));
    }
    Ok(OverCategory::new(p.projection.then(&f.f)))
}

/// `f* q`: the pullback of `q` along `f`.
pub fn pullback_along(f: &BaseChange, q: &OverCategory) -> Result<OverCategory> {
    if !same_category(q.base(), f.target()) {
        return Err(Error::BaseMismatch("pullback of a category over another base".into()));
    }
    Ok(OverCategory::new(pullback(&f.f, &q.projection)?.left))
}

/// `f* D = D . f`.
pub fn restrict(f: &BaseChange, d: &SetFunctor) -> Result<SetFunctor> {
    d.restrict(&f.f)
}

/// Whether `f_!(p x f* q) -> f_! p x q`, `(a, (x, b)) -> (a, b)`, is an
/// isomorphism of categories over `Y`.
pub fn check_frobenius(f: &BaseChange, p: &OverCategory, q: &OverCategory) -> Result<bool> {
    let pulled = pullback(&f.f, &q.projection)?;
    let lhs = product_over(p, &OverCategory::new(pulled.left.clone()))?;
    let rhs = product_over(&pushforward(f, p)?, q)?;
    let (lt, rt) = (&lhs.total, &rhs.total);
    let mut obj_map = Vec::new();
    for o in lt.objects() {
        let (a, m) = (lhs.left.obj(o), lhs.right.obj(o));
        match rhs.object(a, pulled.right.obj(m)) {
            Some(t) => obj_map.push(t),
            None => return Ok(false),
        }
    }
    let mut arrow_map = Vec::new();
    for u in lt.arrows() {
        let (v, w) = (lhs.left.arr(u), lhs.right.arr(u));
        match rhs.arrow(v, pulled.right.arr(w)) {
            Some(t) => arrow_map.push(t),
            None => return Ok(false),
        }
    }
    let comparison = Functor::new(lt.clone(), rt.clone(), obj_map, arrow_map);
    let over_y = lhs.to_base.then(&f.f);
    let commutes = lt.objects().all(|o| rhs.to_base.obj(comparison.obj(o)) == over_y.obj(o))
        && lt.arrows().all(|u| rhs.to_base.arr(comparison.arr(u)) == over_y.arr(u));
    Ok(commutes && comparison.is_valid() && comparison.is_bijective())
}

/// `∃_f D = ↑(f_! elements(D))`.
pub fn lan(f: &BaseChange, d: &SetFunctor) -> Result<SetFunctor> {
    check_cov(d, f)?;
    Ok(reflect_dof(&pushforward(f, &d.elements().over)?)?.functor)
}

/// `(∃_f D) y = Y(f-, y) ⊗ D`, computed with the classical tensor product.
pub fn lan_via_coend(f: &BaseChange, d: &SetFunctor) -> Result<SetFunctor> {
    check_cov(d, f)?;
    let (x_cat, y_cat) = (f.source(), f.target());
    let mut tensors = Vec::new();
    let mut fibers = Vec::new();
    for y in y_cat.objects() {
        let weight = SetFunctor::representable(y_cat, y).restrict(&f.f)?;
        let t = tensor_product_classical(&weight, d)?;
        let mut names = vec![String::new(); t.count];
        let mut named = vec![false; t.count];
        for (k, &(x, i, j)) in t.elements.iter().enumerate() {
            let c = t.class_of[k];
            if !named[c] {
                named[c] = true;
                names[c] = format!("[{},{},{}]", x_cat.obj_name(x), weight.fibers[x.index()][i], d.fibers[x.index()][j]);
            }
        }
        fibers.push(names);
        tensors.push(t);
    }
    let mut action = Vec::new();
    for g in y_cat.arrows() {
        let (y, y2) = (y_cat.src(g), y_cat.tgt(g));
        let (t, t2) = (&tensors[y.index()], &tensors[y2.index()]);
        let mut row = vec![usize::MAX; t.count];
        for (k, &(x, i, j)) in t.elements.iter().enumerate() {
            let fx = f.f.obj(x);
            let h = y_cat.hom(fx, y)[i];
            let i2 = y_cat.hom(fx, y2).iter().position(|&a| a == y_cat.compose(g, h)).unwrap();
            let k2 = t2.index_of(x, i2, j).unwrap();
            row[t.class_of[k]] = t2.class_of[k2];
        }
        action.push(row);
    }
    Ok(SetFunctor {
        base: y_cat.clone(),
        variance: Variance::Covariant,
        fibers,
        action,
    })
}

/// `(∀_f D) y = hom(f*(y/Y), elements(D))`, acting by precomposition.
pub fn ran(f: &BaseChange, d: &SetFunctor) -> Result<SetFunctor> {
    check_cov(d, f)?;
    let y_cat = f.target();
    let del = d.elements();
    let mut cosl = Vec::new();
    let mut pulled = Vec::new();
    let mut maps: Vec<Vec<Vec<ObjId>>> = Vec::new();
    let mut lookup: Vec<HashMap<Vec<ObjId>, usize>> = Vec::new();
    for y in y_cat.objects() {
        let s = coslice(y_cat, y)?;
        let pb = pullback(&f.f, &s.over.projection)?;
        let over = OverCategory::new(pb.left.clone());
        let mut found = Vec::new();
        let mut index = HashMap::new();
        // morphisms into an opfibration are determined by their object maps
        for_each_hom_over(&over, &del.over, &mut |o, _| {
            index.insert(o.to_vec(), found.len());
            found.push(o.to_vec());
            true
        })?;
        cosl.push(s);
        pulled.push(pb);
        maps.push(found);
        lookup.push(index);
    }
    let dt = del.over.total();
    let fibers = maps
        .iter()
        .map(|row| {
            row.iter()
                .map(|m| {
                    let parts: Vec<&str> = m.iter().map(|&o| dt.obj_name(o)).collect();
                    format!("<{}>", parts.join(","))
                })
                .collect()
        })
        .collect();
    let mut action = Vec::new();
    for g in y_cat.arrows() {
        let (y, y2) = (y_cat.src(g), y_cat.tgt(g));
        let (pb, pb2) = (&pulled[y.index()], &pulled[y2.index()]);
        let (s, s2) = (&cosl[y.index()], &cosl[y2.index()]);
        let row = maps[y.index()]
            .iter()
            .map(|xi| {
                // (g xi)(x, k) = xi(x, k . g)
                let moved: Vec<ObjId> = pb2
                    .total
                    .objects()
                    .map(|o| {
                        let (x, leg) = (pb2.left.obj(o), pb2.right.obj(o));
                        let k = s2.leg(leg);
                        let o1 = pb.object(x, s.object_for(y_cat.compose(k, g)).unwrap()).unwrap();
                        xi[o1.index()]
                    })
                    .collect();
                lookup[y2.index()][&moved]
            })
            .collect();
        action.push(row);
    }
    Ok(SetFunctor {
        base: y_cat.clone(),
        variance: Variance::Covariant,
        fibers,
        action,
    })
}

/// The colimit in `Y` of `f` weighted by the presheaf `a`.
pub fn weighted_colimit(a: &SetFunctor, f: &BaseChange) -> Result<Option<Cone>> {
    if a.variance != Variance::Contravariant {
        return Err(Error::Invalid("weights are presheaves".into()));
    }
    colimit_in_base(&pushforward(f, &a.elements().over)?)
}

fn check_cov(d: &SetFunctor, f: &BaseChange) -> Result<()> {
    if d.variance != Variance::Covariant {
        return Err(Error::Invalid("Kan extensions take copresheaves".into()));
    }
    if !same_category(&d.base, f.source()) {
        return Err(Error::BaseMismatch("copresheaf not on the source of the base change".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::overbase::{components, ten};
    use crate::setfun::{count_nat, is_discrete_opfibration, is_isomorphic, to_presheaf};
    use crate::fincat::{enumerate_functors, slice};

    fn arc(c: FinCategory) -> Arc<FinCategory> {
        Arc::new(c)
    }

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn all_changes(x: &Arc<FinCategory>, y: &Arc<FinCategory>) -> Vec<BaseChange> {
        enumerate_functors(x, y).unwrap().into_iter().map(|f| BaseChange::new(f).unwrap()).collect()
    }

    #[test]
    fn identity_changes_nothing() {
        let c = arc(catalog::split_idem());
        let id = BaseChange::new(Functor::identity(&c)).unwrap();
        let d = SetFunctor::corepresentable(&c, ObjId(1));
        assert!(is_isomorphic(&lan(&id, &d).unwrap(), &d).unwrap());
        assert!(is_isomorphic(&ran(&id, &d).unwrap(), &d).unwrap());
        let p = OverCategory::arrow_over(&c, c.arrow("r").unwrap());
        assert_eq!(pushforward(&id, &p).unwrap(), p);
        let q = pullback_along(&id, &p).unwrap();
        assert_eq!(q.total().num_objects(), p.total().num_objects());
        assert_eq!(q.total().num_arrows(), p.total().num_arrows());
    }

    #[test]
    fn pushforward_keeps_components_and_moves_objects() {
        let (x, y) = (arc(catalog::two()), arc(catalog::split_idem()));
        for f in all_changes(&x, &y) {
            let p = OverCategory::identity_over(&x);
            let pf = pushforward(&f, &p).unwrap();
            assert_eq!(components(pf.total()).count(), components(p.total()).count());
            let obj = pushforward(&f, &OverCategory::object_over(&x, ObjId(0))).unwrap();
            assert_eq!(obj.over_obj(ObjId(0)), f.f.obj(ObjId(0)));
        }
    }

    #[test]
    fn pullback_of_a_slice_is_the_comma_presheaf() {
        let (x, y) = (arc(catalog::pair()), arc(catalog::split_idem()));
        for f in all_changes(&x, &y) {
            for t in y.objects() {
                let s = slice(&y, t).unwrap();
                let pulled = pullback_along(&f, &s.over).unwrap();
                let a = to_presheaf(&pulled).unwrap();
                let expected = SetFunctor::representable(&y, t).restrict(&f.f).unwrap();
                assert!(is_isomorphic(&a, &expected).unwrap());
            }
            let d = SetFunctor::corepresentable(&y, ObjId(0));
            let pulled = pullback_along(&f, &d.elements().over).unwrap();
            assert!(is_discrete_opfibration(&pulled));
        }
    }

    #[test]
    fn frobenius_on_small_bases() {
        let (x, y) = (arc(catalog::two()), arc(catalog::idem()));
        for f in all_changes(&x, &y) {
            let p = OverCategory::identity_over(&x);
            let q = OverCategory::identity_over(&y);
            assert!(check_frobenius(&f, &p, &q).unwrap());
            let d = SetFunctor::constant(&y, Variance::Covariant, &names(&["a", "b"]));
            let q = d.elements().over;
            let p = OverCategory::arrow_over(&x, x.arrow("f").unwrap());
            assert!(check_frobenius(&f, &p, &q).unwrap());
            let lhs = ten(&p, &pullback_along(&f, &q).unwrap()).unwrap().count();
            let rhs = ten(&pushforward(&f, &p).unwrap(), &q).unwrap().count();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn lan_two_ways_and_adjunctions() {
        let (x, y) = (arc(catalog::two()), arc(catalog::split_idem()));
        let ds = [
            SetFunctor::corepresentable(&x, ObjId(0)),
            SetFunctor::constant(&x, Variance::Covariant, &names(&["p", "q"])),
        ];
        let es = [
            SetFunctor::corepresentable(&y, ObjId(0)),
            SetFunctor::corepresentable(&y, ObjId(1)),
            SetFunctor::terminal(&y, Variance::Covariant),
        ];
        for f in all_changes(&x, &y) {
            for d in &ds {
                let l = lan(&f, d).unwrap();
                let l2 = lan_via_coend(&f, d).unwrap();
                assert!(l2.violations().is_empty());
                assert!(is_isomorphic(&l, &l2).unwrap());
                let r = ran(&f, d).unwrap();
                assert!(r.violations().is_empty());
                for e in &es {
                    let fe = restrict(&f, e).unwrap();
                    assert_eq!(count_nat(&l, e).unwrap(), count_nat(d, &fe).unwrap());
                    assert_eq!(count_nat(&fe, d).unwrap(), count_nat(e, &r).unwrap());
                }
            }
            let one = SetFunctor::terminal(&x, Variance::Covariant);
            assert!(is_isomorphic(&ran(&f, &one).unwrap(), &SetFunctor::terminal(&y, Variance::Covariant)).unwrap());
        }
    }

    #[test]
    fn weighted_colimits() {
        let (x, y) = (arc(catalog::two()), arc(catalog::split_idem()));
        for f in all_changes(&x, &y) {
            for t in x.objects() {
                let a = SetFunctor::representable(&x, t);
                let cone = weighted_colimit(&a, &f).unwrap().unwrap();
                // apex is unique up to isomorphism; here the objects are pairwise non-isomorphic
                assert_eq!(cone.apex, f.f.obj(t));
            }
        }
    }
}
