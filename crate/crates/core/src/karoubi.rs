//! Idempotents, atoms over a base, and the Karoubi envelope.

use std::sync::Arc;

use crate::catalog;
use crate::error::{Error, Result};
use crate::fincat::{ArrowId, CategoryBuilder, FinCategory, Functor, ObjId, OverCategory};
use crate::overbase::{count_hom_over, ten};
use crate::reflect::{reflect_df, reflect_dof, retract_of_hom_functor};
use crate::setfun::{find_isomorphism, is_isomorphic, Components, SetFunctor, Variance};

/// An endo-arrow `e: x -> x` with `e . e = e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Idempotent {
    pub carrier: ObjId,
    pub arrow: ArrowId,
}

impl Idempotent {
    pub fn new(x: &FinCategory, arrow: ArrowId) -> Result<Self> {
        let carrier = x.src(arrow);
        if x.tgt(arrow) != carrier || x.compose(arrow, arrow) != arrow {
            return Err(Error::NotIdempotent(x.arrow_name(arrow).to_string()));
        }
        Ok(Idempotent { carrier, arrow })
    }

    /// The functor from the idempotent monoid picking out this arrow.
    pub fn classifying(&self, x: &Arc<FinCategory>) -> OverCategory {
        let idem = Arc::new(catalog::idem());
        let mut arrow_map = vec![self.arrow; idem.num_arrows()];
        arrow_map[idem.id(ObjId(0)).index()] = x.id(self.carrier);
        OverCategory::new(Functor::new(idem, x.clone(), vec![self.carrier], arrow_map))
    }
}

/// All idempotents, identities included, in arrow order.
pub fn idempotents(x: &FinCategory) -> Vec<Idempotent> {
    x.arrows().filter_map(|a| Idempotent::new(x, a).ok()).collect()
}

/// `(r, i)` with `i . r = e` and `r . i = id`, if `e` splits.
pub fn split_idempotent(x: &FinCategory, e: Idempotent) -> Result<Option<(ArrowId, ArrowId)>> {
    Idempotent::new(x, e.arrow)?;
    for y in x.objects() {
        for &r in x.hom(e.carrier, y) {
            for &i in x.hom(y, e.carrier) {
                if x.compose(i, r) == e.arrow && x.compose(r, i) == x.id(y) {
                    return Ok(Some((r, i)));
                }
            }
        }
    }
    Ok(None)
}

/// `↓e = fix X(-, e)`: the arrows `f: z -> x` with `e . f = f`.
pub fn reflect_idempotent(x: &Arc<FinCategory>, e: Idempotent) -> SetFunctor {
    fixed_hom(x, e, Variance::Contravariant)
}

/// `↑e = fix X(e, -)`: the arrows `f: x -> z` with `f . e = f`.
pub fn reflect_idempotent_dof(x: &Arc<FinCategory>, e: Idempotent) -> SetFunctor {
    fixed_hom(x, e, Variance::Covariant)
}

fn fixed_hom(x: &Arc<FinCategory>, e: Idempotent, variance: Variance) -> SetFunctor {
    let fixed: Vec<Vec<ArrowId>> = x
        .objects()
        .map(|z| match variance {
            Variance::Contravariant => x.hom(z, e.carrier).iter().copied().filter(|&f| x.compose(e.arrow, f) == f).collect(),
            Variance::Covariant => x.hom(e.carrier, z).iter().copied().filter(|&f| x.compose(f, e.arrow) == f).collect(),
        })
        .collect();
    let fibers = fixed
        .iter()
        .map(|row| row.iter().map(|&f| x.arrow_name(f).to_string()).collect())
        .collect();
    let action = x
        .arrows()
        .map(|g| {
            let (from, to) = match variance {
                Variance::Contravariant => (x.tgt(g), x.src(g)),
                Variance::Covariant => (x.src(g), x.tgt(g)),
            };
            fixed[from.index()]
                .iter()
                .map(|&f| {
                    let moved = match variance {
                        Variance::Contravariant => x.compose(f, g),
                        Variance::Covariant => x.compose(g, f),
                    };
                    fixed[to.index()].iter().position(|&h| h == moved).unwrap()
                })
                .collect()
        })
        .collect();
    SetFunctor {
        base: x.clone(),
        variance,
        fibers,
        action,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomReport {
    /// An idempotent with `↓p ≅ ↓e` and `↑p ≅ ↑e`.
    pub witness: Option<Idempotent>,
    /// Representables `R` (df's then dof's) with `|ten(p, R)| != |hom(p, R)|`.
    pub mismatches: Vec<(Variance, ObjId)>,
}

impl AtomReport {
    pub fn is_atom(&self) -> bool {
        self.witness.is_some()
    }
}

pub fn atom_report(p: &OverCategory) -> Result<AtomReport> {
    let x = p.base();
    let down = reflect_df(p)?.functor;
    let up = reflect_dof(p)?.functor;
    let mut witness = None;
    for e in idempotents(x) {
        if is_isomorphic(&down, &reflect_idempotent(x, e))? && is_isomorphic(&up, &reflect_idempotent_dof(x, e))? {
            witness = Some(e);
            break;
        }
    }
    let mut mismatches = Vec::new();
    for variance in [Variance::Contravariant, Variance::Covariant] {
        for z in x.objects() {
            let r = match variance {
                Variance::Contravariant => SetFunctor::representable(x, z),
                Variance::Covariant => SetFunctor::corepresentable(x, z),
            }
            .elements()
            .over;
            if ten(p, &r)?.count() != count_hom_over(p, &r)? {
                mismatches.push((variance, z));
            }
        }
    }
    Ok(AtomReport { witness, mismatches })
}

pub fn is_atom(p: &OverCategory) -> Result<bool> {
    let report = atom_report(p)?;
    debug_assert!(!report.is_atom() || report.mismatches.is_empty());
    Ok(report.is_atom())
}

/// The idempotent completion: objects are idempotents, `hom(e, e')` the
/// arrows `f` with `f . e = f = e' . f`, and the identity of `e` is `e`.
#[derive(Debug, Clone)]
pub struct KaroubiEnvelope {
    pub category: Arc<FinCategory>,
    /// Object `k` of the envelope is `idempotents[k]`.
    pub idempotents: Vec<Idempotent>,
    /// The underlying arrow of each envelope arrow.
    pub underlying: Vec<ArrowId>,
    /// `x -> id_x`, full and faithful.
    pub embedding: Functor,
}

pub fn karoubi_envelope(x: &Arc<FinCategory>) -> KaroubiEnvelope {
    let idems = idempotents(x);
    let mut b = CategoryBuilder::new();
    for e in &idems {
        b.object(x.arrow_name(e.arrow));
    }
    let n = idems.len();
    // index[(k * n + l) * |arrows| + f]: the envelope arrow for f: e_k -> e_l
    let mut index = vec![None; n * n * x.num_arrows()];
    let mut underlying = Vec::new();
    for (k, e) in idems.iter().enumerate() {
        for (l, e2) in idems.iter().enumerate() {
            for &f in x.hom(e.carrier, e2.carrier) {
                if x.compose(f, e.arrow) == f && x.compose(e2.arrow, f) == f {
                    let name = format!("{}[{},{}]", x.arrow_name(f), x.arrow_name(e.arrow), x.arrow_name(e2.arrow));
                    let a = if k == l && f == e.arrow {
                        b.identity(ObjId::from(k), name)
                    } else {
                        b.arrow(name, ObjId::from(k), ObjId::from(l))
                    };
                    index[(k * n + l) * x.num_arrows() + f.index()] = Some(a);
                    underlying.push(f);
                }
            }
        }
    }
    let lookup = |k: usize, l: usize, f: ArrowId| index[(k * n + l) * x.num_arrows() + f.index()].unwrap();
    for k in 0..n {
        for l in 0..n {
            for m in 0..n {
                for &f in x.hom(idems[k].carrier, idems[l].carrier) {
                    let Some(u) = index[(k * n + l) * x.num_arrows() + f.index()] else { continue };
                    for &g in x.hom(idems[l].carrier, idems[m].carrier) {
                        if let Some(v) = index[(l * n + m) * x.num_arrows() + g.index()] {
                            b.compose(v, u, lookup(k, m, x.compose(g, f)));
                        }
                    }
                }
            }
        }
    }
    let category = Arc::new(b.build());
    let position = |a: ArrowId| idems.iter().position(|e| e.arrow == a).unwrap();
    let obj_map: Vec<ObjId> = x.objects().map(|o| ObjId::from(position(x.id(o)))).collect();
    let arrow_map = x
        .arrows()
        .map(|f| lookup(obj_map[x.src(f).index()].index(), obj_map[x.tgt(f).index()].index(), f))
        .collect();
    let embedding = Functor::new(x.clone(), category.clone(), obj_map, arrow_map);
    KaroubiEnvelope {
        category,
        idempotents: idems,
        underlying,
        embedding,
    }
}

impl KaroubiEnvelope {
    /// For each envelope object, an object of the original category isomorphic
    /// to it in the envelope, if any.
    pub fn essential_preimages(&self) -> Vec<Option<ObjId>> {
        let k = &self.category;
        let x = &self.embedding.dom;
        k.objects()
            .map(|o| {
                x.objects().find(|&z| {
                    let t = self.embedding.obj(z);
                    k.hom(o, t)
                        .iter()
                        .any(|&f| k.hom(t, o).iter().any(|&g| k.compose(g, f) == k.id(o) && k.compose(f, g) == k.id(t)))
                })
            })
            .collect()
    }

    /// Whether the embedding is an equivalence.
    pub fn is_equivalence(&self) -> bool {
        self.essential_preimages().iter().all(Option::is_some)
    }
}

/// A presheaf exhibited as a retract of `X(-, x)`, with the idempotent it splits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentableRetract {
    pub object: ObjId,
    /// `iota . rho` at the identity of `object`.
    pub idempotent: Idempotent,
    pub section: Components,
    pub retraction: Components,
}

pub fn retract_of_representable(a: &SetFunctor) -> Result<Option<RepresentableRetract>> {
    if a.variance != Variance::Contravariant {
        return Err(Error::Invalid("expected a presheaf".into()));
    }
    let x = &a.base;
    // a representable presheaf splits the identity
    for x0 in x.objects() {
        let rep = SetFunctor::representable(x, x0);
        if let Some(section) = find_isomorphism(a, &rep)? {
            let mut retraction: Components = section.iter().map(|row| vec![0; row.len()]).collect();
            for (z, row) in section.iter().enumerate() {
                for (i, &j) in row.iter().enumerate() {
                    retraction[z][j] = i;
                }
            }
            return Ok(Some(RepresentableRetract {
                object: x0,
                idempotent: Idempotent::new(x, x.id(x0))?,
                section,
                retraction,
            }));
        }
    }
    let Some(r) = retract_of_hom_functor(a)? else {
        return Ok(None);
    };
    let x0 = r.object;
    let homs = x.hom(x0, x0);
    let id_pos = homs.iter().position(|&h| h == x.id(x0)).unwrap();
    let e = homs[r.section[x0.index()][r.retraction[x0.index()][id_pos]]];
    Ok(Some(RepresentableRetract {
        object: x0,
        idempotent: Idempotent::new(x, e)?,
        section: r.section,
        retraction: r.retraction,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::validate_category;
    use crate::overbase::hom_over;
    use crate::reflect::{absolute_colimit, colimit_setfunctor, limit_setfunctor};

    fn arc(c: FinCategory) -> Arc<FinCategory> {
        Arc::new(c)
    }

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn idempotent_lists() {
        assert_eq!(idempotents(&catalog::one()).len(), 1);
        assert_eq!(idempotents(&catalog::idem()).len(), 2);
        assert_eq!(idempotents(&catalog::two()).len(), 2);
        assert_eq!(idempotents(&catalog::cyclic_group(3)).len(), 1);
        let idem = catalog::idem();
        assert!(Idempotent::new(&catalog::cyclic_group(2), ArrowId(1)).is_err());
        assert!(Idempotent::new(&idem, idem.arrow("e").unwrap()).is_ok());
    }

    #[test]
    fn splitting() {
        let idem = catalog::idem();
        let e = Idempotent::new(&idem, idem.arrow("e").unwrap()).unwrap();
        assert_eq!(split_idempotent(&idem, e).unwrap(), None);
        let id = Idempotent::new(&idem, idem.id(ObjId(0))).unwrap();
        assert_eq!(split_idempotent(&idem, id).unwrap(), Some((id.arrow, id.arrow)));
        let split = catalog::split_idem();
        let e = Idempotent::new(&split, split.arrow("e").unwrap()).unwrap();
        let (r, i) = split_idempotent(&split, e).unwrap().unwrap();
        assert_eq!((split.arrow_name(r), split.arrow_name(i)), ("r", "i"));
    }

    #[test]
    fn fixed_points_of_hom() {
        let c = arc(catalog::idem());
        let e = Idempotent::new(&c, c.arrow("e").unwrap()).unwrap();
        let down = reflect_idempotent(&c, e);
        assert_eq!(down.fibers[0], names(&["e"]));
        let id = Idempotent::new(&c, c.id(ObjId(0))).unwrap();
        assert!(is_isomorphic(&reflect_idempotent(&c, id), &SetFunctor::representable(&c, ObjId(0))).unwrap());
        for cat in [catalog::idem(), catalog::split_idem(), catalog::two()] {
            let c = arc(cat);
            for e in idempotents(&c) {
                let p = e.classifying(&c);
                assert!(down_and_up_agree(&c, e, &p));
            }
        }
    }

    fn down_and_up_agree(c: &Arc<FinCategory>, e: Idempotent, p: &OverCategory) -> bool {
        is_isomorphic(&reflect_df(p).unwrap().functor, &reflect_idempotent(c, e)).unwrap()
            && is_isomorphic(&reflect_dof(p).unwrap().functor, &reflect_idempotent_dof(c, e)).unwrap()
    }

    #[test]
    fn atoms() {
        for cat in [catalog::idem(), catalog::split_idem(), catalog::pair()] {
            let c = arc(cat);
            for x in c.objects() {
                let r = atom_report(&OverCategory::object_over(&c, x)).unwrap();
                assert!(r.is_atom() && r.mismatches.is_empty());
            }
            for e in idempotents(&c) {
                assert!(is_atom(&e.classifying(&c)).unwrap());
            }
        }
        let pair = arc(catalog::pair());
        let r = atom_report(&OverCategory::identity_over(&pair)).unwrap();
        assert!(!r.is_atom());
        assert!(!r.mismatches.is_empty());
        assert!(!is_atom(&OverCategory::empty_over(&pair)).unwrap());
    }

    #[test]
    fn fix_formula() {
        let c = arc(catalog::split_idem());
        let ds = [
            SetFunctor::corepresentable(&c, ObjId(0)),
            SetFunctor::corepresentable(&c, ObjId(1)),
            SetFunctor::constant(&c, Variance::Covariant, &names(&["a", "b"])),
        ];
        for e in idempotents(&c) {
            let p = e.classifying(&c);
            for d in &ds {
                let fixed = (0..d.fiber_size(e.carrier)).filter(|&i| d.apply(e.arrow, i) == i).count();
                let q = d.elements().over;
                assert_eq!(ten(&p, &q).unwrap().count(), fixed);
                assert_eq!(hom_over(&p, &q).unwrap().len(), fixed);
            }
        }
    }

    #[test]
    fn limit_and_colimit_of_an_idempotent_map() {
        let idem = arc(catalog::idem());
        // e on {0,1,2,3}: 0->0, 1->0, 2->2, 3->2
        let d = SetFunctor::new(
            idem.clone(),
            Variance::Covariant,
            vec![names(&["0", "1", "2", "3"])],
            idem.arrows()
                .map(|a| if idem.is_identity(a) { vec![0, 1, 2, 3] } else { vec![0, 0, 2, 2] })
                .collect(),
        )
        .unwrap();
        let lim = limit_setfunctor(&d).unwrap();
        let (el, comps) = colimit_setfunctor(&d);
        assert_eq!(lim.len(), comps.count());
        // beta x = [x] is injective on fixed points
        let classes: Vec<usize> = lim.iter().map(|s| comps.class_of[el.object_of[0][s[0]].index()]).collect();
        let mut sorted = classes.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), classes.len());
    }

    #[test]
    fn envelope_of_the_idempotent_monoid() {
        let idem = arc(catalog::idem());
        let k = karoubi_envelope(&idem);
        let kc = &k.category;
        assert!(validate_category(kc).is_empty());
        assert_eq!(kc.num_objects(), 2);
        let (one, e) = (kc.object("id_s").unwrap(), kc.object("e").unwrap());
        assert_eq!(kc.hom(one, one).len(), 2);
        assert_eq!(kc.hom(e, e).len(), 1);
        assert_eq!(kc.hom(one, e).len(), 1);
        assert_eq!(kc.hom(e, one).len(), 1);
        assert!(k.embedding.is_valid());
        let ee = Idempotent::new(kc, kc.arrow("e[id_s,id_s]").unwrap()).unwrap();
        assert!(split_idempotent(kc, ee).unwrap().is_some());
        assert!(!k.is_equivalence());
        assert!(idempotents(kc).into_iter().all(|i| split_idempotent(kc, i).unwrap().is_some()));
        // every envelope object is the absolute colimit of its idempotent
        for (o, i) in k.idempotents.iter().enumerate() {
            let embedded = Idempotent::new(kc, k.embedding.arr(i.arrow)).unwrap();
            let (apex, _) = absolute_colimit(&embedded.classifying(kc)).unwrap().unwrap();
            assert_eq!(apex, ObjId::from(o));
        }
    }

    #[test]
    fn envelope_of_complete_categories() {
        let one = arc(catalog::one());
        let k = karoubi_envelope(&one);
        assert_eq!((k.category.num_objects(), k.category.num_arrows()), (1, 1));
        for cat in [catalog::split_idem(), catalog::two(), catalog::cyclic_group(3)] {
            let c = arc(cat);
            let k = karoubi_envelope(&c);
            assert!(validate_category(&k.category).is_empty());
            assert!(k.is_equivalence());
        }
    }

    #[test]
    fn retracts_of_representables() {
        let c = arc(catalog::split_idem());
        for x in c.objects() {
            let r = retract_of_representable(&SetFunctor::representable(&c, x)).unwrap().unwrap();
            assert!(c.is_identity(r.idempotent.arrow));
        }
        let idem = arc(catalog::idem());
        let e = Idempotent::new(&idem, idem.arrow("e").unwrap()).unwrap();
        let r = retract_of_representable(&reflect_idempotent(&idem, e)).unwrap().unwrap();
        assert_eq!(r.idempotent, e);
        let two = arc(catalog::two());
        let a = SetFunctor::constant(&two, Variance::Contravariant, &names(&["a", "b"]));
        assert!(retract_of_representable(&a).unwrap().is_none());
    }
}
