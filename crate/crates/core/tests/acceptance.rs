//! The acceptance suite: eleven exact criteria, each under a pinned time
//! limit, each printing one PASS/FAIL line. Exits non-zero if any fails.
//!
//! Derived quantities are checked against oracles written here from the
//! definitions (conjugacy classes, brute-force limits, two-sided fixes),
//! not against the library's own algorithms.

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use fibrae::catalog;
use fibrae::dinat::{coend_classical, strong_coend, Profunctor};
use fibrae::fincat::{coslice, slice, CategoryBuilder, FinCategory, ObjId, OverCategory};
use fibrae::generate::{random_category, random_copresheaf, random_functor, random_over, random_presheaf, random_set_functor};
use fibrae::graphmod::{
    coreflect_finite, graph_product, reflect_bij, reflect_eset, reflect_periodic, CoreflectOutcome, EndoClass, FinGraph,
};
use fibrae::kan::{check_frobenius, lan, ran, restrict, BaseChange};
use fibrae::karoubi::{idempotents, karoubi_envelope, split_idempotent};
use fibrae::overbase::{count_hom_over, hom_over, ten, tensor_product_classical};
use fibrae::reflect::{
    absolute_colimit, colimit_setfunctor, limit_setfunctor, reflect_dof, verify_coreflection_universal,
    verify_reflection_universal, weak_absolute_colimit,
};
use fibrae::setfun::{complement, count_nat, is_isomorphic, SetFunctor, Variance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn criterion_1() -> Outcome {
    for (name, c) in [("interval", catalog::two()), ("idempotent monoid", catalog::idem())] {
        let h = Profunctor::hom(&Arc::new(c));
        let strong = ok(strong_coend(&h))?.1.count();
        let classical = coend_classical(&h).count;
        ensure!((strong, classical) == (1, 2), "{name}: strong {strong}, classical {classical}");
    }
    Ok("1 vs 2 on both".into())
}

/// Permutations of `0..n` closed under composition from `gens`; identity first.
fn group(n: usize, gens: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let id: Vec<usize> = (0..n).collect();
    let mut elems = vec![id];
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let p: Vec<usize> = (0..n).map(|k| g[elems[i][k]]).collect();
            if !elems.contains(&p) {
                elems.push(p);
            }
        }
        i += 1;
    }
    elems
}

fn compose_perm(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&k| p[k]).collect()
}

/// Conjugacy classes of a permutation group, by direct orbit enumeration.
fn conjugacy_classes(g: &[Vec<usize>]) -> usize {
    let inverse = |p: &Vec<usize>| {
        let mut inv = vec![0; p.len()];
        for (i, &j) in p.iter().enumerate() {
            inv[j] = i;
        }
        inv
    };
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut classes = 0;
    for x in g {
        if seen.contains(x) {
            continue;
        }
        classes += 1;
        for h in g {
            seen.insert(compose_perm(&compose_perm(h, x), &inverse(h)));
        }
    }
    classes
}

/// Disjoint union of connected groupoids `k x k x G`.
fn groupoid(parts: &[(Vec<Vec<usize>>, usize)]) -> FinCategory {
    let mut b = CategoryBuilder::new();
    let mut arrows = Vec::new();
    for (c, (g, k)) in parts.iter().enumerate() {
        let objs: Vec<ObjId> = (0..*k).map(|i| b.object(format!("o{c}_{i}"))).collect();
        // arrow[i][j][e]: objs[i] -> objs[j] labelled g[e]
        let mut arr = vec![vec![Vec::new(); *k]; *k];
        for i in 0..*k {
            for j in 0..*k {
                for e in 0..g.len() {
                    let name = format!("g{e}_{c}_{i}{j}");
                    let a = if i == j && e == 0 {
                        b.identity(objs[i], name)
                    } else {
                        b.arrow(name, objs[i], objs[j])
                    };
                    arr[i][j].push(a);
                }
            }
        }
        arrows.push(arr);
    }
    for (c, (g, k)) in parts.iter().enumerate() {
        let arr = &arrows[c];
        for i in 0..*k {
            for j in 0..*k {
                for l in 0..*k {
                    for (e1, p) in g.iter().enumerate() {
                        for (e2, q) in g.iter().enumerate() {
                            let r = compose_perm(q, p);
                            let e3 = g.iter().position(|s| *s == r).unwrap();
                            b.compose(arr[j][l][e2], arr[i][j][e1], arr[i][l][e3]);
                        }
                    }
                }
            }
        }
    }
    b.build()
}

fn criterion_2() -> Outcome {
    let c2 = Profunctor::hom(&Arc::new(catalog::cyclic_group(2)));
    let (strong, classical) = (ok(strong_coend(&c2))?.1.count(), coend_classical(&c2).count);
    ensure!(strong == 2 && classical == 2, "C2: strong {strong}, classical {classical}");
    let groups = [
        group(1, &[]),
        group(2, &[vec![1, 0]]),
        group(3, &[vec![1, 2, 0]]),
        group(4, &[vec![1, 2, 3, 0]]),
        group(4, &[vec![1, 0, 3, 2], vec![2, 3, 0, 1]]),
        group(3, &[vec![1, 0, 2], vec![1, 2, 0]]),
    ];
    let mut r = rng(2);
    let samples = 30;
    for s in 0..samples {
        let parts: Vec<(Vec<Vec<usize>>, usize)> = (0..r.gen_range(1..=2))
            .map(|_| (groups[r.gen_range(0..groups.len())].clone(), r.gen_range(1..=3)))
            .collect();
        let x = Arc::new(groupoid(&parts));
        ensure!(x.is_valid() && x.is_groupoid(), "sample {s}: generated groupoid is invalid");
        let expected: usize = parts.iter().map(|(g, _)| conjugacy_classes(g)).sum();
        let h = Profunctor::hom(&x);
        let (strong, classical) = (ok(strong_coend(&h))?.1.count(), coend_classical(&h).count);
        ensure!(
            strong == expected && classical == expected,
            "sample {s}: strong {strong}, classical {classical}, conjugacy classes {expected}"
        );
    }
    Ok(format!("C2 gives 2; {samples} groupoids agree with conjugacy classes"))
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    for s in 0..500 {
        let mut r = rng(3_000 + s);
        let x = Arc::new(random_category(&mut r));
        let a = random_presheaf(&mut r, &x);
        let el = a.elements();
        for o in x.objects() {
            let n = a.fiber_size(o);
            // Yoneda: a morphism X/x -> elements(A) is its value at id_x
            let sl = ok(slice(&x, o))?;
            let top = sl.object_for(x.id(o)).unwrap();
            let homs = ok(hom_over(&sl.over, &el.over))?;
            ensure!(homs.len() == n, "sample {s}: |hom(X/x, A)| = {} but |Ax| = {n}", homs.len());
            let mut hit = vec![false; n];
            for f in &homs {
                let (y, i) = el.element_of[f.obj(top).index()];
                ensure!(y == o && !hit[i], "sample {s}: evaluation at id_x is not injective");
                hit[i] = true;
            }
            // co-Yoneda: every component of x/X x A contains exactly one (id_x, a)
            let co = ok(coslice(&x, o))?;
            let bottom = co.object_for(x.id(o)).unwrap();
            let t = ok(ten(&co.over, &el.over))?;
            ensure!(t.count() == n, "sample {s}: |ten(x/X, A)| = {} but |Ax| = {n}", t.count());
            let classes: BTreeSet<usize> = (0..n)
                .map(|i| t.components.class_of[t.product.object(bottom, el.object_of[o.index()][i]).unwrap().index()])
                .collect();
            ensure!(classes.len() == n, "sample {s}: a -> [id_x, a] is not a bijection");
            checked += 1;
        }
    }
    Ok(format!("500 samples, {checked} objects"))
}

fn criterion_4() -> Outcome {
    for s in 0..200 {
        let mut r = rng(4_000 + s);
        let x = Arc::new(random_category(&mut r));
        let p = random_over(&mut r, &x);
        let variance = if r.gen_bool(0.5) { Variance::Contravariant } else { Variance::Covariant };
        let d = random_set_functor(&mut r, &x, variance);
        let u = ok(verify_reflection_universal(&p, &d))?;
        ensure!(u.universal && u.morphisms == u.transformations, "sample {s}: reflection {u:?}");
        let c = ok(verify_coreflection_universal(&p, &d))?;
        ensure!(c.universal && c.morphisms == c.transformations, "sample {s}: coreflection {c:?}");
    }
    Ok("200 pairs".into())
}

/// Whether `f` (total on `0..from.len()`) induces a bijection of the partitions
/// `from` and `to`: classes map to classes, injectively and onto.
fn induces_bijection(from: &[usize], to: &[usize], f: impl Fn(usize) -> usize) -> bool {
    let nf = from.iter().max().map_or(0, |m| m + 1);
    let nt = to.iter().max().map_or(0, |m| m + 1);
    let mut image = vec![None; nf];
    for (i, &c) in from.iter().enumerate() {
        let d = to[f(i)];
        if *image[c].get_or_insert(d) != d {
            return false;
        }
    }
    let hit: BTreeSet<usize> = image.iter().flatten().copied().collect();
    hit.len() == nf && nf == nt
}

fn criterion_5() -> Outcome {
    for s in 0..200 {
        let mut r = rng(5_000 + s);
        let x = Arc::new(random_category(&mut r));
        let a = random_presheaf(&mut r, &x);
        let d = random_copresheaf(&mut r, &x);
        let (ea, ed) = (a.elements(), d.elements());
        let t = ok(ten(&ea.over, &ed.over))?;
        let cl = ok(tensor_product_classical(&a, &d))?;
        ensure!(t.count() == cl.count, "sample {s}: ten {} vs classical {}", t.count(), cl.count);
        let same = induces_bijection(&cl.class_of, &t.components.class_of, |i| {
            let (o, ai, di) = cl.elements[i];
            t.product.object(ea.object_of[o.index()][ai], ed.object_of[o.index()][di]).unwrap().index()
        });
        ensure!(same, "sample {s}: the canonical map of tensors is not a bijection");

        let p = random_over(&mut r, &x);
        let up = ok(reflect_dof(&p))?;
        let lhs = ok(ten(&p, &ea.over))?;
        let rhs = ok(ten(&up.functor.elements().over, &ea.over))?;
        ensure!(lhs.count() == rhs.count(), "sample {s}: ten(p, A) {} vs ten(up p, A) {}", lhs.count(), rhs.count());
        // the unit p -> elements(up p) induces the bijection
        let pt = p.total();
        let pairs: Vec<(ObjId, ObjId)> = pt
            .objects()
            .flat_map(|u| ea.over.total().objects().map(move |v| (u, v)))
            .filter(|&(u, v)| p.over_obj(u) == ea.over.over_obj(v))
            .collect();
        let from: Vec<usize> = pairs.iter().map(|&(u, v)| lhs.components.class_of[lhs.product.object(u, v).unwrap().index()]).collect();
        let to_index: Vec<usize> = pairs
            .iter()
            .map(|&(u, v)| rhs.product.object(up.unit.obj(u), v).unwrap().index())
            .collect();
        let unit_ok = induces_bijection(&from, &rhs.components.class_of, |i| to_index[i]);
        ensure!(unit_ok, "sample {s}: the unit does not induce a bijection of tensors");
    }
    Ok("200 instances".into())
}

/// Compatible families by filtering the product of the fibers.
fn brute_limit(a: &SetFunctor) -> BTreeSet<Vec<usize>> {
    let c = &a.base;
    let sizes: Vec<usize> = c.objects().map(|x| a.fiber_size(x)).collect();
    let mut out = BTreeSet::new();
    if sizes.contains(&0) {
        return out;
    }
    let mut fam = vec![0; sizes.len()];
    loop {
        let compatible = c.arrows().all(|f| a.apply(f, fam[a.action_src(f).index()]) == fam[a.action_tgt(f).index()]);
        if compatible {
            out.insert(fam.clone());
        }
        let mut k = 0;
        loop {
            if k == fam.len() {
                return out;
            }
            fam[k] += 1;
            if fam[k] < sizes[k] {
                break;
            }
            fam[k] = 0;
            k += 1;
        }
    }
}

/// The disjoint union of the fibers modulo `a ~ A(f) a`, as a class label per `(x, a)`.
fn brute_colimit(a: &SetFunctor) -> Vec<Vec<usize>> {
    let c = &a.base;
    let mut label: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    for x in c.objects() {
        label.push((next..next + a.fiber_size(x)).collect());
        next += a.fiber_size(x);
    }
    loop {
        let mut changed = false;
        for f in c.arrows() {
            let (s, t) = (a.action_src(f).index(), a.action_tgt(f).index());
            for i in 0..label[s].len() {
                let j = a.apply(f, i);
                let (l1, l2) = (label[s][i], label[t][j]);
                if l1 != l2 {
                    let (keep, drop) = (l1.min(l2), l1.max(l2));
                    for row in label.iter_mut() {
                        for v in row.iter_mut().filter(|v| **v == drop) {
                            *v = keep;
                        }
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            return label;
        }
    }
}

fn criterion_6() -> Outcome {
    for s in 0..200 {
        let mut r = rng(6_000 + s);
        let x = Arc::new(random_category(&mut r));
        let variance = if s % 2 == 0 { Variance::Contravariant } else { Variance::Covariant };
        let a = random_set_functor(&mut r, &x, variance);
        let lim: BTreeSet<Vec<usize>> = ok(limit_setfunctor(&a))?.into_iter().collect();
        ensure!(lim == brute_limit(&a), "sample {s}: limits differ");
        let (el, comps) = colimit_setfunctor(&a);
        let labels = brute_colimit(&a);
        let flat: Vec<usize> = el.element_of.iter().map(|&(x, i)| labels[x.index()][i]).collect();
        let mut relabel = std::collections::HashMap::new();
        for (o, &l) in flat.iter().enumerate() {
            let k = comps.class_of[o];
            ensure!(*relabel.entry(l).or_insert(k) == k, "sample {s}: colimit classes differ");
        }
        ensure!(relabel.len() == comps.count(), "sample {s}: colimit counts differ");
    }
    Ok("200 set functors".into())
}

/// A random functor between two random categories, retrying until one exists.
fn random_base_change(r: &mut ChaCha8Rng) -> BaseChange {
    loop {
        let x = Arc::new(random_category(r));
        let y = Arc::new(random_category(r));
        if let Some(f) = random_functor(r, &x, &y) {
            return BaseChange::new(f).unwrap();
        }
    }
}

fn criterion_7() -> Outcome {
    for s in 0..100 {
        let mut r = rng(7_000 + s);
        let f = random_base_change(&mut r);
        let d = random_copresheaf(&mut r, f.source());
        let e = random_copresheaf(&mut r, f.target());
        let fe = ok(restrict(&f, &e))?;
        let (l, rr) = (ok(lan(&f, &d))?, ok(ran(&f, &d))?);
        let (n1, n2) = (ok(count_nat(&l, &e))?, ok(count_nat(&d, &fe))?);
        ensure!(n1 == n2, "sample {s}: |Nat(lan D, E)| = {n1}, |Nat(D, f*E)| = {n2}");
        let (n3, n4) = (ok(count_nat(&fe, &d))?, ok(count_nat(&e, &rr))?);
        ensure!(n3 == n4, "sample {s}: |Nat(f*E, D)| = {n3}, |Nat(E, ran D)| = {n4}");
    }
    for s in 0..100 {
        let mut r = rng(7_500 + s);
        let f = random_base_change(&mut r);
        let p = random_over(&mut r, f.source());
        let q = random_over(&mut r, f.target());
        ensure!(ok(check_frobenius(&f, &p, &q))?, "sample {s}: Frobenius comparison is not an isomorphism");
    }
    let two: Vec<String> = vec!["0".into(), "1".into()];
    for s in 0..50 {
        let mut r = rng(7_800 + s);
        let f = random_base_change(&mut r);
        let variance = if s % 2 == 0 { Variance::Contravariant } else { Variance::Covariant };
        let a = random_set_functor(&mut r, f.target(), variance);
        let lhs = ok(restrict(&f, &ok(complement(&a, &two))?))?;
        let rhs = ok(complement(&ok(restrict(&f, &a))?, &two))?;
        ensure!(ok(is_isomorphic(&lhs, &rhs))?, "sample {s}: f* does not preserve the complement");
    }
    Ok("100 adjunction triples, 100 Frobenius triples, 50 complements".into())
}

/// `{f | f . e = f = e' . f}` straight from the composition table.
fn fix_homs(x: &FinCategory, e: fibrae::ArrowId, e2: fibrae::ArrowId) -> usize {
    x.arrows()
        .filter(|&f| x.try_compose(f, e) == Some(f) && x.try_compose(e2, f) == Some(f))
        .count()
}

fn criterion_8() -> Outcome {
    let idem = Arc::new(catalog::idem());
    let k = karoubi_envelope(&idem);
    let kc = &k.category;
    ensure!(kc.num_objects() == 2, "envelope of the idempotent monoid has {} objects", kc.num_objects());
    let mut sizes = Vec::new();
    for a in kc.objects() {
        for b in kc.objects() {
            let (ea, eb) = (k.idempotents[a.index()].arrow, k.idempotents[b.index()].arrow);
            let expected = fix_homs(&idem, ea, eb);
            ensure!(kc.hom(a, b).len() == expected, "hom({a:?}, {b:?}) has {} arrows, fix gives {expected}", kc.hom(a, b).len());
            sizes.push(expected);
        }
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    ensure!(sizes == [2, 1, 1, 1], "hom cardinalities {sizes:?}");

    let mut envelopes = 0;
    for s in 0..30 {
        let mut r = rng(8_000 + s);
        let x = Arc::new(random_category(&mut r));
        let k = karoubi_envelope(&x);
        for e in idempotents(&k.category) {
            ensure!(ok(split_idempotent(&k.category, e))?.is_some(), "sample {s}: an envelope idempotent does not split");
        }
        envelopes += 1;
    }

    for s in 0..100 {
        let mut r = rng(8_500 + s);
        let x = Arc::new(random_category(&mut r));
        let idems = idempotents(&x);
        let e = idems[r.gen_range(0..idems.len())];
        let d = random_copresheaf(&mut r, &x);
        let p = e.classifying(&x);
        let fix = (0..d.fiber_size(e.carrier)).filter(|&i| d.apply(e.arrow, i) == i).count();
        let t = ok(ten(&p, &d.elements().over))?.count();
        let h = ok(count_hom_over(&p, &d.elements().over))?;
        ensure!(t == fix && h == fix, "sample {s}: |ten| = {t}, |hom| = {h}, |fix| = {fix}");
    }
    Ok(format!("homs (2,1,1,1); {envelopes} envelopes split; 100 classifiers"))
}

fn graph(nodes: &[&str], edges: &[(&str, &str, &str)]) -> FinGraph {
    let mut g = FinGraph::new();
    for n in nodes {
        g.node(*n);
    }
    for (e, s, t) in edges {
        let (s, t) = (g.find_node(s).unwrap(), g.find_node(t).unwrap());
        g.edge(*e, s, t);
    }
    g
}

fn criterion_9() -> Outcome {
    let items = [
        graph(&["x", "y"], &[("a", "x", "y")]),
        graph(&["l", "m", "r"], &[("u", "l", "l"), ("a", "m", "l"), ("b", "m", "r"), ("v", "r", "r")]),
        graph(&["l", "m", "r"], &[("c", "l", "r"), ("a", "m", "l"), ("b", "m", "r")]),
        graph(&["l", "m", "r"], &[("a", "m", "l"), ("b", "m", "r")]),
        graph(&["x", "y"], &[("u", "x", "x"), ("a", "x", "y")]),
        graph(&["x", "y"], &[("u", "x", "x"), ("a", "x", "y"), ("v", "y", "y")]),
        graph(&["x"], &[("u", "x", "x"), ("v", "x", "x")]),
    ];
    let expected = ["a -> ...", "a -> b; b -> b", "a -> b; b -> b", "a -> ...", "a -> a", "a -> a", "a -> a"];
    for (i, (g, want)) in items.iter().zip(expected).enumerate() {
        let got = ok(reflect_eset(g, 1 << 12))?.to_string();
        ensure!(got == want, "item {}: reflection `{got}`, expected `{want}`", i + 1);
        let bij = reflect_bij(g).to_string();
        ensure!(bij == "Z" || bij == "Z_1", "item {}: bijective reflection `{bij}`", i + 1);
    }
    match ok(coreflect_finite(&items[0], EndoClass::Eset))? {
        CoreflectOutcome::Finite(c) => ensure!(c.num_nodes() == 0, "item 1: coreflection has {} nodes", c.num_nodes()),
        other => return Err(format!("item 1: {other:?}")),
    }
    match ok(coreflect_finite(&items[1], EndoClass::Eset))? {
        CoreflectOutcome::Finite(c) => ensure!(c.num_nodes() == 4, "item 2: coreflection has {} nodes", c.num_nodes()),
        other => return Err(format!("item 2: {other:?}")),
    }
    let p3 = match ok(coreflect_finite(&items[6], EndoClass::Eset))? {
        CoreflectOutcome::Infinite(report) => report,
        other => return Err(format!("P3: expected an infinity report, got {other:?}")),
    };
    let tail = graph(&["a", "b", "c"], &[("s", "a", "b"), ("t", "b", "c"), ("w", "c", "b")]);
    let bij = reflect_bij(&tail).to_string();
    ensure!(bij == "Z_2", "tail into a 2-cycle: reflection `{bij}`");
    match ok(coreflect_finite(&tail, EndoClass::Bij))? {
        CoreflectOutcome::Finite(c) => ensure!(c.cycle_lengths() == Some(vec![2]), "tail: coreflection {c:?}"),
        other => return Err(format!("tail: {other:?}")),
    }
    Ok(format!("P3 infinite at `{}`", p3.node))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn criterion_10() -> Outcome {
    for k in 1..=8 {
        for n in 1..=8 {
            let (g, l) = (gcd(k, n), k * n / gcd(k, n));
            let prod = graph_product(&FinGraph::cycle(k), &FinGraph::cycle(n));
            ensure!(prod.cycle_lengths() == Some(vec![l; g]), "Z_{k} x Z_{n}: {:?}", prod.cycle_lengths());
            let up = ok(reflect_periodic(&FinGraph::cycle(k), n))?;
            ensure!(up.graph.cycle_lengths() == Some(vec![g]), "periodic reflection of Z_{k} at {n}: {:?}", up.graph.cycle_lengths());
        }
    }
    Ok("all 64 pairs".into())
}

fn criterion_11() -> Outcome {
    let mut objects = 0;
    for c in [catalog::two(), catalog::idem(), catalog::pair(), catalog::split_idem(), catalog::cyclic_group(3)] {
        let c = Arc::new(c);
        for x in c.objects() {
            let found = ok(absolute_colimit(&OverCategory::object_over(&c, x)))?;
            ensure!(matches!(found, Some((y, _)) if y == x), "object {} reports {found:?}", c.obj_name(x));
            objects += 1;
        }
    }
    for s in 0..20 {
        let mut r = rng(11_000 + s);
        let c = Arc::new(random_category(&mut r));
        for x in c.objects() {
            let found = ok(absolute_colimit(&OverCategory::object_over(&c, x)))?;
            let at = found.map(|(y, _)| y);
            // an isomorphic object may be found first
            ensure!(at.is_some_and(|y| c.hom(x, y).iter().any(|&f| c.inverse(f).is_some())), "sample {s}: object {x:?} reports {at:?}");
            objects += 1;
        }
    }
    let idem = Arc::new(catalog::idem());
    let e = idempotents(&idem).into_iter().find(|e| !idem.is_identity(e.arrow)).unwrap();
    let p = e.classifying(&idem);
    ensure!(ok(absolute_colimit(&p))?.is_none(), "non-split idempotent reports an absolute colimit");
    ensure!(ok(weak_absolute_colimit(&p))?.is_some(), "non-split idempotent has no weak absolute colimit");
    let split = Arc::new(catalog::split_idem());
    let e = idempotents(&split).into_iter().find(|e| !split.is_identity(e.arrow)).unwrap();
    let at = ok(absolute_colimit(&e.classifying(&split)))?.map(|(y, _)| split.obj_name(y).to_string());
    ensure!(at.as_deref() == Some("t"), "split idempotent reports {at:?}");
    Ok(format!("{objects} object atoms; weak-only and split cases"))
}

struct Criterion {
    id: usize,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "coend contrast", limit: secs(1), run: criterion_1 },
        Criterion { id: 2, name: "conjugacy", limit: secs(1), run: criterion_2 },
        Criterion { id: 3, name: "Yoneda and co-Yoneda", limit: secs(60), run: criterion_3 },
        Criterion { id: 4, name: "reflection universality", limit: secs(120), run: criterion_4 },
        Criterion { id: 5, name: "tensor coherence", limit: secs(60), run: criterion_5 },
        Criterion { id: 6, name: "limits and colimits", limit: secs(30), run: criterion_6 },
        Criterion { id: 7, name: "Kan adjunctions", limit: secs(120), run: criterion_7 },
        Criterion { id: 8, name: "Karoubi", limit: secs(30), run: criterion_8 },
        Criterion { id: 9, name: "graph gallery", limit: secs(10), run: criterion_9 },
        Criterion { id: 10, name: "cycle law", limit: secs(5), run: criterion_10 },
        Criterion { id: 11, name: "initial and absolute", limit: secs(5), run: criterion_11 },
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for c in &criteria {
        let label = format!("{} {}", c.id, c.name);
        if !filter.is_empty() && !filter.iter().any(|f| label.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = result.and_then(|detail| {
            if elapsed <= c.limit {
                Ok(detail)
            } else {
                Err(format!("took {elapsed:.2?}, limit {:?}", c.limit))
            }
        });
        match result {
            Ok(detail) => println!("PASS criterion {label}: {detail} ({elapsed:.2?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {label}: {why} ({elapsed:.2?})");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
