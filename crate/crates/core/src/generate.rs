//! Random finite categories, set functors, categories over a base and graphs,
//! for property tests and the acceptance suite. Deterministic given the RNG.
//!
//! Categories are concrete: each object is a set of size 1 to 3, a few random
//! functions generate the arrows, and the result is closed under composition,
//! so associativity holds by construction.

use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::limits;
use crate::fincat::{ArrowId, CategoryBuilder, FinCategory, Functor, ObjId, OverCategory};
use crate::graphmod::FinGraph;
use crate::search::{search_functors, FunctorProblem};
use crate::setfun::{SetFunctor, Variance};
use crate::unionfind::UnionFind;

pub const MAX_OBJECTS: usize = 4;
pub const MAX_ARROWS: usize = 10;
pub const MAX_FIBER: usize = 3;

/// A category with at most `max_objects` objects and at most
/// `max_arrows` non-identity arrows.
pub fn random_category_bounded<R: Rng>(rng: &mut R, max_objects: usize, max_arrows: usize) -> FinCategory {
    loop {
        if let Some(c) = try_concrete_category(rng, max_objects, max_arrows) {
            return c;
        }
    }
}

/// A category with at most 4 objects and 10 non-identity arrows.
pub fn random_category<R: Rng>(rng: &mut R) -> FinCategory {
    random_category_bounded(rng, MAX_OBJECTS, MAX_ARROWS)
}

type Arrow = (usize, usize, Vec<usize>);

fn try_concrete_category<R: Rng>(rng: &mut R, max_objects: usize, max_arrows: usize) -> Option<FinCategory> {
    let n = rng.gen_range(1..=max_objects);
    let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
    let mut arrows: Vec<Arrow> = (0..n).map(|x| (x, x, (0..sizes[x]).collect())).collect();
    let mut index: HashMap<Arrow, usize> = arrows.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
    let generators = rng.gen_range(0..=4);
    for _ in 0..generators {
        let (s, t) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let table = (0..sizes[s]).map(|_| rng.gen_range(0..sizes[t])).collect();
        let a = (s, t, table);
        if !index.contains_key(&a) {
            index.insert(a.clone(), arrows.len());
            arrows.push(a);
        }
    }
    let generated = arrows.len();
    // close under composition
    let mut compose = HashMap::new();
    let mut done = 0;
    while done < arrows.len() {
        done = arrows.len();
        for gi in 0..arrows.len() {
            for fi in 0..arrows.len() {
                if compose.contains_key(&(gi, fi)) || arrows[fi].1 != arrows[gi].0 {
                    continue;
                }
                let table = arrows[fi].2.iter().map(|&v| arrows[gi].2[v]).collect();
                let h = (arrows[fi].0, arrows[gi].1, table);
                let hi = match index.get(&h) {
                    Some(&hi) => hi,
                    None => {
                        index.insert(h.clone(), arrows.len());
                        arrows.push(h);
                        if arrows.len() - n > max_arrows {
                            return None;
                        }
                        arrows.len() - 1
                    }
                };
                compose.insert((gi, fi), hi);
            }
        }
    }
    let mut b = CategoryBuilder::new();
    for x in 0..n {
        b.object(format!("o{x}"));
    }
    let mut ids = Vec::new();
    for (i, (s, t, _)) in arrows.iter().enumerate() {
        let (s, t) = (ObjId::from(*s), ObjId::from(*t));
        ids.push(if i < n {
            b.identity(s, format!("id_o{i}"))
        } else if i < generated {
            b.arrow(format!("a{}", i - n), s, t)
        } else {
            b.arrow(format!("c{}", i - generated), s, t)
        });
    }
    for (&(g, f), &h) in &compose {
        b.compose(ids[g], ids[f], ids[h]);
    }
    Some(b.build())
}

/// Raw set-functor data: fibers as element counts, action tables per arrow.
struct Raw {
    sizes: Vec<usize>,
    names: Vec<Vec<String>>,
    action: Vec<Vec<usize>>,
}

impl Raw {
    fn add(&mut self, f: &SetFunctor, tag: &str) {
        let base = &f.base;
        let offset = self.sizes.clone();
        for x in base.objects() {
            for name in &f.fibers[x.index()] {
                self.names[x.index()].push(format!("{tag}{name}"));
            }
            self.sizes[x.index()] += f.fiber_size(x);
        }
        for a in base.arrows() {
            let to = f.action_tgt(a).index();
            let row = f.action[a.index()].iter().map(|&j| offset[to] + j);
            self.action[a.index()].extend(row);
        }
    }
}

/// A presheaf or copresheaf with fibers of at most 3 elements: a coproduct of
/// (co)representables and a constant part, cut down to a random subfunctor,
/// then quotiented by random congruences.
pub fn random_set_functor<R: Rng>(rng: &mut R, base: &Arc<FinCategory>, variance: Variance) -> SetFunctor {
    let n = base.num_objects();
    let mut raw = Raw {
        sizes: vec![0; n],
        names: vec![Vec::new(); n],
        action: vec![Vec::new(); base.num_arrows()],
    };
    let reps = rng.gen_range(1..=2);
    for k in 0..reps {
        let x = ObjId::from(rng.gen_range(0..n));
        let r = match variance {
            Variance::Contravariant => SetFunctor::representable(base, x),
            Variance::Covariant => SetFunctor::corepresentable(base, x),
        };
        raw.add(&r, &format!("r{k}:"));
    }
    if rng.gen_bool(0.5) {
        let k = rng.gen_range(1..=2);
        let names: Vec<String> = (0..k).map(|i| format!("k{i}")).collect();
        raw.add(&SetFunctor::constant(base, variance, &names), "");
    }
    let src_of = |a: ArrowId| match variance {
        Variance::Contravariant => base.tgt(a),
        Variance::Covariant => base.src(a),
    };
    let tgt_of = |a: ArrowId| match variance {
        Variance::Contravariant => base.src(a),
        Variance::Covariant => base.tgt(a),
    };
    // random subfunctor generated by some seeds
    let mut keep: Vec<Vec<bool>> = raw.sizes.iter().map(|&s| vec![false; s]).collect();
    let mut stack = Vec::new();
    for x in 0..n {
        for i in 0..raw.sizes[x] {
            if rng.gen_bool(0.4) {
                stack.push((x, i));
            }
        }
    }
    while let Some((x, i)) = stack.pop() {
        if keep[x][i] {
            continue;
        }
        keep[x][i] = true;
        for a in base.arrows().filter(|&a| src_of(a).index() == x) {
            stack.push((tgt_of(a).index(), raw.action[a.index()][i]));
        }
    }
    // global numbering of kept elements, then quotient
    let mut global = vec![Vec::new(); n];
    let mut owner = Vec::new();
    for x in 0..n {
        for i in 0..raw.sizes[x] {
            global[x].push(owner.len());
            owner.push((x, i));
        }
    }
    let mut uf = UnionFind::new(owner.len());
    let class_sizes = |uf: &mut UnionFind| -> Vec<Vec<usize>> {
        (0..n)
            .map(|x| {
                let mut roots: Vec<usize> = (0..raw.sizes[x]).filter(|&i| keep[x][i]).map(|i| uf.find(global[x][i])).collect();
                roots.sort_unstable();
                roots.dedup();
                roots
            })
            .collect()
    };
    loop {
        let roots = class_sizes(&mut uf);
        let Some(x) = (0..n).find(|&x| roots[x].len() > MAX_FIBER) else { break };
        let pair: Vec<&usize> = roots[x].choose_multiple(rng, 2).collect();
        uf.union(*pair[0], *pair[1]);
        // congruence closure
        loop {
            let mut changed = false;
            for a in base.arrows() {
                let (s, t) = (src_of(a).index(), tgt_of(a).index());
                let mut image_of_root: HashMap<usize, usize> = HashMap::new();
                for i in (0..raw.sizes[s]).filter(|&i| keep[s][i]) {
                    let r = uf.find(global[s][i]);
                    let img = global[t][raw.action[a.index()][i]];
                    match image_of_root.get(&r) {
                        Some(&other) => changed |= uf.union(other, img),
                        None => {
                            image_of_root.insert(r, img);
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }
    // rebuild with class representatives in fiber order
    let mut fibers = vec![Vec::new(); n];
    let mut position: HashMap<usize, usize> = HashMap::new();
    for x in 0..n {
        for i in (0..raw.sizes[x]).filter(|&i| keep[x][i]) {
            let r = uf.find(global[x][i]);
            if let std::collections::hash_map::Entry::Vacant(slot) = position.entry(r) {
                slot.insert(fibers[x].len());
                fibers[x].push(raw.names[x][i].clone());
            }
        }
    }
    let action = base
        .arrows()
        .map(|a| {
            let (s, t) = (src_of(a).index(), tgt_of(a).index());
            let mut row = vec![0; fibers[s].len()];
            for i in (0..raw.sizes[s]).filter(|&i| keep[s][i]) {
                let img = global[t][raw.action[a.index()][i]];
                row[position[&uf.find(global[s][i])]] = position[&uf.find(img)];
            }
            row
        })
        .collect();
    SetFunctor::new(base.clone(), variance, fibers, action).expect("generated set functor is valid")
}

pub fn random_presheaf<R: Rng>(rng: &mut R, base: &Arc<FinCategory>) -> SetFunctor {
    random_set_functor(rng, base, Variance::Contravariant)
}

pub fn random_copresheaf<R: Rng>(rng: &mut R, base: &Arc<FinCategory>) -> SetFunctor {
    random_set_functor(rng, base, Variance::Covariant)
}

/// A random functor `x -> y`, chosen among the first few found by a search
/// with shuffled object candidates.
pub fn random_functor<R: Rng>(rng: &mut R, x: &Arc<FinCategory>, y: &Arc<FinCategory>) -> Option<Functor> {
    let candidates = (0..x.num_objects())
        .map(|_| {
            let mut c: Vec<ObjId> = y.objects().collect();
            c.shuffle(rng);
            c
        })
        .collect();
    let filter = |_: ArrowId, _: ArrowId| true;
    let problem = FunctorProblem {
        dom: x,
        cod: y,
        obj_candidates: candidates,
        arrow_filter: &filter,
        injective: false,
    };
    let mut found = Vec::new();
    let _ = search_functors(&problem, limits().search_nodes, &mut |o, a| {
        found.push((o.to_vec(), a.to_vec()));
        found.len() < 16
    });
    let (o, a) = found.choose(rng)?.clone();
    Some(Functor::new(x.clone(), y.clone(), o, a))
}

/// A category over `base`: an object, an arrow, the identity, the elements of a
/// random (co)presheaf, or a small random category with a random projection.
pub fn random_over<R: Rng>(rng: &mut R, base: &Arc<FinCategory>) -> OverCategory {
    match rng.gen_range(0..6) {
        0 => OverCategory::object_over(base, ObjId::from(rng.gen_range(0..base.num_objects()))),
        1 => OverCategory::arrow_over(base, ArrowId::from(rng.gen_range(0..base.num_arrows()))),
        2 => OverCategory::identity_over(base),
        3 => random_presheaf(rng, base).elements().over,
        4 => random_copresheaf(rng, base).elements().over,
        _ => {
            let total = Arc::new(random_category_bounded(rng, 3, 5));
            let f = random_functor(rng, &total, base).expect("constant functors always exist");
            OverCategory::new(f)
        }
    }
}

/// A graph with 1 to `max_nodes` nodes and up to `max_edges` edges.
pub fn random_graph<R: Rng>(rng: &mut R, max_nodes: usize, max_edges: usize) -> FinGraph {
    let n = rng.gen_range(1..=max_nodes);
    let mut g = FinGraph::new();
    for i in 0..n {
        g.node(format!("n{i}"));
    }
    for i in 0..rng.gen_range(0..=max_edges) {
        g.edge(format!("e{i}"), rng.gen_range(0..n), rng.gen_range(0..n));
    }
    g
}
