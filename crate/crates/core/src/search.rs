//! Backtracking search for functors between finite categories.
//!
//! Objects are assigned first in a connectivity-driven order; each arrow is
//! scheduled right after both of its endpoints are assigned. A composition
//! constraint `F(g . f) = F(g) . F(f)` is checked at the step where the last of
//! its three arrows receives an image.

use crate::error::{Error, Result};
use crate::fincat::{ArrowId, FinCategory, ObjId};

pub(crate) struct FunctorProblem<'a> {
    pub dom: &'a FinCategory,
    pub cod: &'a FinCategory,
    /// Allowed images per domain object.
    pub obj_candidates: Vec<Vec<ObjId>>,
    /// Extra admissibility test `(domain arrow, candidate image)`.
    pub arrow_filter: &'a dyn Fn(ArrowId, ArrowId) -> bool,
    /// Require injectivity on objects and arrows.
    pub injective: bool,
}

#[derive(Clone, Copy)]
enum Step {
    Obj(ObjId),
    Arrow(ArrowId),
}

struct Plan {
    steps: Vec<Step>,
    // composition triples (g, f, g.f) checked after step i
    checks: Vec<Vec<(ArrowId, ArrowId, ArrowId)>>,
}

fn plan(dom: &FinCategory) -> Plan {
    let n = dom.num_objects();
    let mut assigned = vec![false; n];
    let mut scheduled = vec![false; dom.num_arrows()];
    let mut step_of_arrow = vec![usize::MAX; dom.num_arrows()];
    let mut steps = Vec::new();
    for _ in 0..n {
        // most arrows touching assigned objects first, then lowest index
        let next = (0..n)
            .filter(|&i| !assigned[i])
            .max_by_key(|&i| {
                let o = ObjId::from(i);
                let links = dom
                    .arrows()
                    .filter(|&a| {
                        (dom.src(a) == o && assigned[dom.tgt(a).index()])
                            || (dom.tgt(a) == o && assigned[dom.src(a).index()])
                    })
                    .count();
                (links, std::cmp::Reverse(i))
            })
            .unwrap();
        assigned[next] = true;
        let o = ObjId::from(next);
        step_of_arrow[dom.id(o).index()] = steps.len();
        scheduled[dom.id(o).index()] = true;
        steps.push(Step::Obj(o));
        for a in dom.arrows() {
            if !scheduled[a.index()] && assigned[dom.src(a).index()] && assigned[dom.tgt(a).index()]
            {
                scheduled[a.index()] = true;
                step_of_arrow[a.index()] = steps.len();
                steps.push(Step::Arrow(a));
            }
        }
    }
    let mut checks = vec![Vec::new(); steps.len()];
    for (g, f) in dom.composable_pairs() {
        if dom.is_identity(g) || dom.is_identity(f) {
            continue;
        }
        let h = dom.compose(g, f);
        let last = step_of_arrow[g.index()]
            .max(step_of_arrow[f.index()])
            .max(step_of_arrow[h.index()]);
        checks[last].push((g, f, h));
    }
    Plan { steps, checks }
}

struct State<'a, 'b> {
    problem: &'a FunctorProblem<'b>,
    plan: Plan,
    obj_img: Vec<ObjId>,
    arrow_img: Vec<ArrowId>,
    used_obj: Vec<bool>,
    used_arrow: Vec<bool>,
    nodes: u64,
    cap: u64,
}

/// Calls `visit` with `(object map, arrow map)` for every functor satisfying the
/// problem, stopping early when `visit` returns false.
pub(crate) fn search_functors(
    problem: &FunctorProblem<'_>,
    cap: u64,
    visit: &mut dyn FnMut(&[ObjId], &[ArrowId]) -> bool,
) -> Result<()> {
    let dom = problem.dom;
    let mut state = State {
        problem,
        plan: plan(dom),
        obj_img: vec![ObjId(0); dom.num_objects()],
        arrow_img: vec![ArrowId(0); dom.num_arrows()],
        used_obj: vec![false; problem.cod.num_objects()],
        used_arrow: vec![false; problem.cod.num_arrows()],
        nodes: 0,
        cap,
    };
    state.descend(0, visit)?;
    Ok(())
}

impl State<'_, '_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::SizeCap {
                what: "functor search".to_string(),
                cap: self.cap,
            });
        }
        Ok(())
    }

    fn checks_pass(&self, step: usize) -> bool {
        let cod = self.problem.cod;
        self.plan.checks[step].iter().all(|&(g, f, h)| {
            cod.compose(self.arrow_img[g.index()], self.arrow_img[f.index()])
                == self.arrow_img[h.index()]
        })
    }

    /// Returns Ok(false) when the visitor asked to stop.
    fn descend(
        &mut self,
        step: usize,
        visit: &mut dyn FnMut(&[ObjId], &[ArrowId]) -> bool,
    ) -> Result<bool> {
        if step == self.plan.steps.len() {
            return Ok(visit(&self.obj_img, &self.arrow_img));
        }
        let (dom, cod) = (self.problem.dom, self.problem.cod);
        match self.plan.steps[step] {
            Step::Obj(o) => {
                let candidates = self.problem.obj_candidates[o.index()].clone();
                let id = dom.id(o);
                for y in candidates {
                    self.tick()?;
                    if self.problem.injective && self.used_obj[y.index()] {
                        continue;
                    }
                    let idy = cod.id(y);
                    if !(self.problem.arrow_filter)(id, idy) {
                        continue;
                    }
                    self.obj_img[o.index()] = y;
                    self.arrow_img[id.index()] = idy;
                    if !self.checks_pass(step) {
                        continue;
                    }
                    self.used_obj[y.index()] = true;
                    self.used_arrow[idy.index()] = true;
                    let go_on = self.descend(step + 1, visit);
                    self.used_obj[y.index()] = false;
                    self.used_arrow[idy.index()] = false;
                    if !go_on? {
                        return Ok(false);
                    }
                }
            }
            Step::Arrow(a) => {
                let s = self.obj_img[dom.src(a).index()];
                let t = self.obj_img[dom.tgt(a).index()];
                let candidates = cod.hom(s, t).to_vec();
                for b in candidates {
                    self.tick()?;
                    if self.problem.injective && self.used_arrow[b.index()] {
                        continue;
                    }
                    if !(self.problem.arrow_filter)(a, b) {
                        continue;
                    }
                    self.arrow_img[a.index()] = b;
                    if !self.checks_pass(step) {
                        continue;
                    }
                    self.used_arrow[b.index()] = true;
                    let go_on = self.descend(step + 1, visit);
                    self.used_arrow[b.index()] = false;
                    if !go_on? {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}
