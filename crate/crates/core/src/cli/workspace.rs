//! Named values loaded from input files.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::catalog;
use crate::dinat::Profunctor;
use crate::error::{Error, Result};
use crate::fincat::{FinCategory, OverCategory};
use crate::graphmod::FinGraph;
use crate::setfun::SetFunctor;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Named<T> {
    pub name: String,
    pub value: T,
}

/// User definitions, per kind and in definition order, plus the builtins.
/// Builtins may be shadowed by a user definition until they are first referenced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Workspace {
    pub categories: Vec<Named<Arc<FinCategory>>>,
    pub set_functors: Vec<Named<SetFunctor>>,
    pub overs: Vec<Named<OverCategory>>,
    pub profunctors: Vec<Named<Profunctor>>,
    pub graphs: Vec<Named<FinGraph>>,
    builtin_categories: Vec<Named<Arc<FinCategory>>>,
    builtin_graphs: Vec<Named<FinGraph>>,
    used_builtins: BTreeSet<String>,
}

impl Default for Workspace {
    fn default() -> Self {
        Self::new()
    }
}

fn find<'a, T>(list: &'a [Named<T>], name: &str) -> Option<&'a T> {
    list.iter().find(|n| n.name == name).map(|n| &n.value)
}

impl Workspace {
    pub fn new() -> Self {
        let cats = [
            ("ONE", catalog::one()),
            ("TWO", catalog::two()),
            ("IDEM", catalog::idem()),
            ("PAIR", catalog::pair()),
            ("C2", catalog::cyclic_group(2)),
            ("SPLIT", catalog::split_idem()),
        ];
        Workspace {
            categories: Vec::new(),
            set_functors: Vec::new(),
            overs: Vec::new(),
            profunctors: Vec::new(),
            graphs: Vec::new(),
            builtin_categories: cats
                .into_iter()
                .map(|(n, c)| Named {
                    name: n.into(),
                    value: Arc::new(c),
                })
                .collect(),
            builtin_graphs: vec![Named {
                name: "LOOP".into(),
                value: FinGraph::cycle(1),
            }],
            used_builtins: BTreeSet::new(),
        }
    }

    /// Parses `text` into a fresh workspace.
    pub fn parse(text: &str) -> Result<Workspace> {
        let mut ws = Workspace::new();
        ws.load(text)?;
        Ok(ws)
    }

    /// Parses `text` and registers its definitions; on error nothing is registered.
    pub fn load(&mut self, text: &str) -> Result<()> {
        let mut scratch = self.clone();
        super::syntax::parse_into(text, &mut scratch)?;
        *self = scratch;
        Ok(())
    }

    pub fn builtin_names() -> Vec<&'static str> {
        vec!["ONE", "TWO", "IDEM", "PAIR", "C2", "SPLIT", "LOOP"]
    }

    pub fn category(&self, name: &str) -> Option<&Arc<FinCategory>> {
        find(&self.categories, name).or_else(|| find(&self.builtin_categories, name))
    }

    pub fn set_functor(&self, name: &str) -> Option<&SetFunctor> {
        find(&self.set_functors, name)
    }

    pub fn over(&self, name: &str) -> Option<&OverCategory> {
        find(&self.overs, name)
    }

    pub fn profunctor(&self, name: &str) -> Option<&Profunctor> {
        find(&self.profunctors, name)
    }

    pub fn graph(&self, name: &str) -> Option<&FinGraph> {
        find(&self.graphs, name).or_else(|| find(&self.builtin_graphs, name))
    }

    /// Like `category`, but pins a builtin against later shadowing.
    pub(super) fn use_category(&mut self, name: &str) -> Option<Arc<FinCategory>> {
        if let Some(c) = find(&self.categories, name) {
            return Some(c.clone());
        }
        let c = find(&self.builtin_categories, name)?.clone();
        self.used_builtins.insert(name.to_string());
        Some(c)
    }

    /// The name under which `c` is registered, user definitions first.
    pub fn category_name(&self, c: &Arc<FinCategory>) -> Option<&str> {
        let all = || self.categories.iter().chain(&self.builtin_categories);
        all()
            .find(|n| Arc::ptr_eq(&n.value, c))
            .or_else(|| all().find(|n| *n.value == **c))
            .map(|n| n.name.as_str())
    }

    fn check_fresh<T>(list: &[Named<T>], pinned: Option<&BTreeSet<String>>, name: &str, kind: &str) -> Result<()> {
        if find(list, name).is_some() {
            return Err(Error::Invalid(format!("{kind} `{name}` is already defined")));
        }
        if pinned.is_some_and(|used| used.contains(name)) {
            return Err(Error::Invalid(format!("builtin {kind} `{name}` is already in use")));
        }
        Ok(())
    }

    pub fn add_category(&mut self, name: &str, c: Arc<FinCategory>) -> Result<()> {
        Self::check_fresh(&self.categories, Some(&self.used_builtins), name, "category")?;
        self.categories.push(Named {
            name: name.into(),
            value: c,
        });
        Ok(())
    }

    pub fn add_set_functor(&mut self, name: &str, a: SetFunctor) -> Result<()> {
        Self::check_fresh(&self.set_functors, None, name, "set functor")?;
        self.set_functors.push(Named {
            name: name.into(),
            value: a,
        });
        Ok(())
    }

    pub fn add_over(&mut self, name: &str, p: OverCategory) -> Result<()> {
        Self::check_fresh(&self.overs, None, name, "functor")?;
        self.overs.push(Named {
            name: name.into(),
            value: p,
        });
        Ok(())
    }

    pub fn add_profunctor(&mut self, name: &str, h: Profunctor) -> Result<()> {
        Self::check_fresh(&self.profunctors, None, name, "profunctor")?;
        self.profunctors.push(Named {
            name: name.into(),
            value: h,
        });
        Ok(())
    }

    pub fn add_graph(&mut self, name: &str, g: FinGraph) -> Result<()> {
        Self::check_fresh(&self.graphs, None, name, "graph")?;
        self.graphs.push(Named {
            name: name.into(),
            value: g,
        });
        Ok(())
    }
}
