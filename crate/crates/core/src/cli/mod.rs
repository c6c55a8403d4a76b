//! The batch command line: text formats, command dispatch and DOT export.
//!
//! Counting commands print the count alone; `--list` appends the members,
//! one per line, in a deterministic order.

pub mod dot;
pub mod print;
mod syntax;
mod workspace;

use std::sync::Arc;

use clap::{Parser, Subcommand};

pub use dot::Flavor;
pub use print::{print_category, print_graph, print_over, print_profunctor, print_set_functor, print_workspace};
pub use syntax::is_bare;
pub use workspace::{Named, Workspace};

use crate::dinat::{coend_classical, end, strong_coend, strong_dinaturals, Profunctor};
use crate::error::{Error, Result};
use crate::fincat::{FinCategory, Functor, OverCategory};
use crate::graphmod::{coreflect_finite, reflect_bij, reflect_eset, reflect_idem, reflect_periodic, CoreflectOutcome, EndoClass, FinGraph};
use crate::kan::{check_frobenius, lan, ran, BaseChange};
use crate::karoubi::{atom_report, idempotents, karoubi_envelope, split_idempotent};
use crate::overbase::{components, hom_over, sections, ten};
use crate::reflect::{colimit_in_base, colimit_setfunctor, coreflect_df, coreflect_dof, limit_setfunctor, reflect_df, reflect_dof};
use crate::setfun::{SetFunctor, Variance};

/// Default depth cap for the evolutive-set reflection.
pub const DEFAULT_DEPTH_CAP: usize = 1 << 14;

#[derive(Debug, Parser)]
#[command(name = "fibrae", version, about = "Exact computation with finite categories over a base")]
pub struct Cli {
    /// Input file, `-` for standard input; repeat to load several in order.
    #[arg(short, long = "input", global = true)]
    pub inputs: Vec<std::path::PathBuf>,
    /// List the members after a count.
    #[arg(long, global = true)]
    pub list: bool,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_class(s: &str) -> std::result::Result<EndoClass, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Summarize every definition (all of them were validated on load).
    Validate,
    /// Connected components of a category, functor, set functor or graph.
    Components { name: String },
    /// Sections of a functor.
    Sections { name: String },
    /// Morphisms over the base.
    Hom { p: String, q: String },
    /// Components of the product over the base.
    Tensor { p: String, q: String },
    /// Reflection into discrete fibrations.
    ReflectDf { name: String },
    /// Reflection into discrete opfibrations.
    ReflectDof { name: String },
    /// Coreflection into discrete fibrations.
    CoreflectDf { name: String },
    /// Coreflection into discrete opfibrations.
    CoreflectDof { name: String },
    /// Compatible families of a set functor.
    Limit { name: String },
    /// Components of the category of elements of a set functor.
    Colimit { name: String },
    /// The colimit in the base of a functor, or `none`.
    ColimitInBase { name: String },
    /// End of a profunctor; `hom X` names the hom profunctor.
    End {
        #[arg(num_args = 1..=2, required = true)]
        profunctor: Vec<String>,
    },
    /// Classical coend.
    Coend {
        #[arg(num_args = 1..=2, required = true)]
        profunctor: Vec<String>,
    },
    /// Strong coend.
    CoendStrong {
        #[arg(num_args = 1..=2, required = true)]
        profunctor: Vec<String>,
    },
    /// Strong dinatural transformations between two profunctors.
    Dinat {
        #[arg(num_args = 2..=4, required = true)]
        profunctors: Vec<String>,
    },
    /// Left Kan extension of a copresheaf along a functor.
    Lan { functor: String, copresheaf: String },
    /// Right Kan extension of a copresheaf along a functor.
    Ran { functor: String, copresheaf: String },
    /// Whether the Frobenius comparison along a functor is an isomorphism.
    FrobeniusCheck { functor: String, p: String, q: String },
    /// Whether a functor is an atom, with its idempotent.
    Atoms { name: String },
    /// Idempotents of a category and their splittings.
    Idempotents { name: String },
    /// The Karoubi envelope of a category.
    Karoubi { name: String },
    /// Reflect a graph into a class of endomaps.
    GraphReflect {
        #[arg(long, value_parser = parse_class)]
        into: EndoClass,
        #[arg(long, default_value_t = DEFAULT_DEPTH_CAP)]
        depth_cap: usize,
        name: String,
    },
    /// Coreflect a graph into a class of endomaps.
    GraphCoreflect {
        #[arg(long, value_parser = parse_class)]
        into: EndoClass,
        name: String,
    },
    /// Graphviz rendering of a category, functor, set functor or graph.
    Dot {
        #[arg(long, value_enum, default_value_t = Flavor::Total)]
        flavor: Flavor,
        /// Draw the evolutive-set reflection of a graph instead.
        #[arg(long)]
        eset: bool,
        #[arg(long, default_value_t = DEFAULT_DEPTH_CAP)]
        depth_cap: usize,
        name: String,
    },
}

/// 1 on domain errors, 2 on parse or validation errors, 3 on caps.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => 2,
        e if e.is_cap() => 3,
        _ => 1,
    }
}

fn unknown(kind: &str, name: &str) -> Error {
    Error::UnknownName(format!("{kind} {name}"))
}

fn category_arg<'a>(ws: &'a Workspace, name: &str) -> Result<&'a Arc<FinCategory>> {
    ws.category(name).ok_or_else(|| unknown("category", name))
}

fn set_functor_arg<'a>(ws: &'a Workspace, name: &str) -> Result<&'a SetFunctor> {
    ws.set_functor(name).ok_or_else(|| unknown("set functor", name))
}

fn graph_arg<'a>(ws: &'a Workspace, name: &str) -> Result<&'a FinGraph> {
    ws.graph(name).ok_or_else(|| unknown("graph", name))
}

/// A functor, or the category of elements of a set functor.
fn over_arg(ws: &Workspace, name: &str) -> Result<OverCategory> {
    if let Some(p) = ws.over(name) {
        return Ok(p.clone());
    }
    if let Some(a) = ws.set_functor(name) {
        return Ok(a.elements().over);
    }
    Err(unknown("functor or set functor", name))
}

fn base_change_arg(ws: &Workspace, name: &str) -> Result<BaseChange> {
    BaseChange::new(ws.over(name).ok_or_else(|| unknown("functor", name))?.projection.clone())
}

/// Reads profunctors from `args`: `hom X` is the hom of category `X`.
fn profunctor_args(ws: &Workspace, args: &[String]) -> Result<Vec<Profunctor>> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < args.len() {
        if args[i] == "hom" && i + 1 < args.len() && ws.category(&args[i + 1]).is_some() {
            out.push(Profunctor::hom(category_arg(ws, &args[i + 1])?));
            i += 2;
        } else {
            out.push(ws.profunctor(&args[i]).ok_or_else(|| unknown("profunctor", &args[i]))?.clone());
            i += 1;
        }
    }
    Ok(out)
}

fn one_profunctor(ws: &Workspace, args: &[String]) -> Result<Profunctor> {
    let mut hs = profunctor_args(ws, args)?;
    if hs.len() != 1 {
        return Err(Error::Invalid("expected one profunctor".into()));
    }
    Ok(hs.remove(0))
}

/// Classes of `names` under `class_of`, one bracketed line each, in class order.
fn class_lines(names: impl IntoIterator<Item = String>, class_of: &[usize], count: usize) -> Vec<String> {
    let mut classes = vec![Vec::new(); count];
    for (n, &k) in names.into_iter().zip(class_of) {
        classes[k].push(n);
    }
    classes.into_iter().map(|c| format!("[{}]", c.join(", "))).collect()
}

fn functor_line(f: &Functor) -> String {
    let (d, c) = (&f.dom, &f.cod);
    let objs: Vec<String> = d.objects().map(|a| format!("{} -> {}", d.obj_name(a), c.obj_name(f.obj(a)))).collect();
    let arrows: Vec<String> = d
        .non_identity_arrows()
        .map(|u| format!("{} -> {}", d.arrow_name(u), c.arrow_name(f.arr(u))))
        .collect();
    if arrows.is_empty() {
        objs.join(", ")
    } else {
        format!("{}; {}", objs.join(", "), arrows.join(", "))
    }
}

fn counted(count: usize, lines: impl FnOnce() -> Vec<String>, list: bool) -> String {
    let mut out = format!("{count}\n");
    if list {
        for l in lines() {
            out.push_str(&l);
            out.push('\n');
        }
    }
    out
}

fn set_functor_out(ws: &Workspace, name: &str, a: &SetFunctor) -> String {
    print_set_functor(name, ws.category_name(&a.base).unwrap_or("?"), a)
}

/// Runs one command against a loaded workspace and returns its standard output.
pub fn run(command: &Command, ws: &Workspace, list: bool) -> Result<String> {
    Ok(match command {
        Command::Validate => {
            let mut out = String::new();
            for n in &ws.categories {
                out += &format!("category {}: {} objects, {} arrows\n", n.name, n.value.num_objects(), n.value.num_arrows());
            }
            for n in &ws.set_functors {
                let kind = match n.value.variance {
                    Variance::Contravariant => "presheaf",
                    Variance::Covariant => "copresheaf",
                };
                out += &format!("{kind} {}: {} elements\n", n.name, n.value.total_elements());
            }
            for n in &ws.overs {
                out += &format!("functor {}: {} objects over {} objects\n", n.name, n.value.total().num_objects(), n.value.base().num_objects());
            }
            for n in &ws.profunctors {
                out += &format!("profunctor {}: {} objects in the base\n", n.name, n.value.base.num_objects());
            }
            for n in &ws.graphs {
                out += &format!("graph {}: {} nodes, {} edges\n", n.name, n.value.num_nodes(), n.value.num_edges());
            }
            out + "ok\n"
        }
        Command::Components { name } => {
            let (cat, comps) = if let Ok(p) = over_arg(ws, name) {
                let t = p.total().clone();
                let c = components(&t);
                (t, c)
            } else if let Some(c) = ws.category(name) {
                (c.clone(), components(c))
            } else {
                let g = graph_arg(ws, name)?;
                let c = crate::graphmod::graph_components(g);
                return Ok(counted(c.count(), || class_lines(g.nodes.iter().cloned(), &c.class_of, c.count()), list));
            };
            counted(comps.count(), || class_lines(cat.objects().map(|o| cat.obj_name(o).to_string()), &comps.class_of, comps.count()), list)
        }
        Command::Sections { name } => {
            let s = sections(&over_arg(ws, name)?)?;
            counted(s.len(), || s.iter().map(functor_line).collect(), list)
        }
        Command::Hom { p, q } => {
            let h = hom_over(&over_arg(ws, p)?, &over_arg(ws, q)?)?;
            counted(h.len(), || h.iter().map(functor_line).collect(), list)
        }
        Command::Tensor { p, q } => {
            let t = ten(&over_arg(ws, p)?, &over_arg(ws, q)?)?;
            let total = &t.product.total;
            counted(
                t.count(),
                || class_lines(total.objects().map(|o| total.obj_name(o).to_string()), &t.components.class_of, t.count()),
                list,
            )
        }
        Command::ReflectDf { name } => set_functor_out(ws, &format!("down_{name}"), &reflect_df(&over_arg(ws, name)?)?.functor),
        Command::ReflectDof { name } => set_functor_out(ws, &format!("up_{name}"), &reflect_dof(&over_arg(ws, name)?)?.functor),
        Command::CoreflectDf { name } => {
            set_functor_out(ws, &format!("{name}_down"), &coreflect_df(&over_arg(ws, name)?)?.functor)
        }
        Command::CoreflectDof { name } => {
            set_functor_out(ws, &format!("{name}_up"), &coreflect_dof(&over_arg(ws, name)?)?.functor)
        }
        Command::Limit { name } => {
            let a = set_functor_arg(ws, name)?;
            let fams = limit_setfunctor(a)?;
            let c = &a.base;
            counted(
                fams.len(),
                || {
                    fams.iter()
                        .map(|f| {
                            c.objects()
                                .map(|x| format!("{} = {}", c.obj_name(x), a.element_name(x, f[x.index()])))
                                .collect::<Vec<_>>()
                                .join(", ")
                        })
                        .collect()
                },
                list,
            )
        }
        Command::Colimit { name } => {
            let (el, comps) = colimit_setfunctor(set_functor_arg(ws, name)?);
            let t = el.over.total();
            counted(comps.count(), || class_lines(t.objects().map(|o| t.obj_name(o).to_string()), &comps.class_of, comps.count()), list)
        }
        Command::ColimitInBase { name } => {
            let p = over_arg(ws, name)?;
            match colimit_in_base(&p)? {
                None => "none\n".to_string(),
                Some(cone) => {
                    let (t, b) = (p.total(), p.base());
                    let mut out = format!("{}\n", b.obj_name(cone.apex));
                    if list {
                        for a in t.objects() {
                            out += &format!("{}: {}\n", t.obj_name(a), b.arrow_name(cone.legs[a.index()]));
                        }
                    }
                    out
                }
            }
        }
        Command::End { profunctor } => {
            let h = one_profunctor(ws, profunctor)?;
            let fams = end(&h)?;
            let c = &h.base;
            counted(
                fams.len(),
                || {
                    fams.iter()
                        .map(|f| {
                            c.objects()
                                .map(|x| format!("{} = {}", c.obj_name(x), h.value(x, x)[f[x.index()]]))
                                .collect::<Vec<_>>()
                                .join(", ")
                        })
                        .collect()
                },
                list,
            )
        }
        Command::Coend { profunctor } => {
            let h = one_profunctor(ws, profunctor)?;
            let co = coend_classical(&h);
            let c = &h.base;
            let names = co.elements.iter().map(|&(x, i)| format!("({},{})", c.obj_name(x), h.value(x, x)[i]));
            counted(co.count, || class_lines(names, &co.class_of, co.count), list)
        }
        Command::CoendStrong { profunctor } => {
            let h = one_profunctor(ws, profunctor)?;
            let (po, comps) = strong_coend(&h)?;
            let t = po.over.total();
            counted(comps.count(), || class_lines(t.objects().map(|o| t.obj_name(o).to_string()), &comps.class_of, comps.count()), list)
        }
        Command::Dinat { profunctors } => {
            let hs = profunctor_args(ws, profunctors)?;
            if hs.len() != 2 {
                return Err(Error::Invalid("expected two profunctors".into()));
            }
            let (h, k) = (&hs[0], &hs[1]);
            let fams = strong_dinaturals(h, k)?;
            let c = &h.base;
            counted(
                fams.len(),
                || {
                    fams.iter()
                        .map(|f| {
                            c.objects()
                                .flat_map(|x| {
                                    (0..h.size(x, x)).map(move |i| format!("{} -> {}", h.value(x, x)[i], k.value(x, x)[f[x.index()][i]]))
                                })
                                .collect::<Vec<_>>()
                                .join(", ")
                        })
                        .collect()
                },
                list,
            )
        }
        Command::Lan { functor, copresheaf } => {
            let r = lan(&base_change_arg(ws, functor)?, set_functor_arg(ws, copresheaf)?)?;
            set_functor_out(ws, &format!("lan_{copresheaf}"), &r)
        }
        Command::Ran { functor, copresheaf } => {
            let r = ran(&base_change_arg(ws, functor)?, set_functor_arg(ws, copresheaf)?)?;
            set_functor_out(ws, &format!("ran_{copresheaf}"), &r)
        }
        Command::FrobeniusCheck { functor, p, q } => {
            let ok = check_frobenius(&base_change_arg(ws, functor)?, &over_arg(ws, p)?, &over_arg(ws, q)?)?;
            format!("{ok}\n")
        }
        Command::Atoms { name } => {
            let p = over_arg(ws, name)?;
            let report = atom_report(&p)?;
            let b = p.base();
            let mut out = match report.witness {
                Some(e) => format!("atom {}\n", b.arrow_name(e.arrow)),
                None => "not an atom\n".to_string(),
            };
            for (v, x) in &report.mismatches {
                let kind = match v {
                    Variance::Contravariant => "representable",
                    Variance::Covariant => "corepresentable",
                };
                out += &format!("mismatch at {kind} {}\n", b.obj_name(*x));
            }
            out
        }
        Command::Idempotents { name } => {
            let c = category_arg(ws, name)?;
            let mut out = String::new();
            for e in idempotents(c) {
                let (en, s) = (c.arrow_name(e.arrow), c.obj_name(e.carrier));
                out += &match split_idempotent(c, e)? {
                    Some((r, i)) => format!(
                        "{en} at {s} splits through {} as {} . {}\n",
                        c.obj_name(c.tgt(r)),
                        c.arrow_name(i),
                        c.arrow_name(r)
                    ),
                    None => format!("{en} at {s} does not split\n"),
                };
            }
            out
        }
        Command::Karoubi { name } => print_category(&format!("Karoubi_{name}"), &karoubi_envelope(category_arg(ws, name)?).category),
        Command::GraphReflect { into, depth_cap, name } => {
            let g = graph_arg(ws, name)?;
            match into {
                EndoClass::Eset => {
                    let p = reflect_eset(g, *depth_cap)?;
                    let mut out = format!("{p}\n");
                    if list {
                        for (x, &(e, k)) in g.nodes.iter().zip(&p.generator_image) {
                            out += &generator_line(x, &p.elements[e], k as i64);
                        }
                    }
                    out
                }
                EndoClass::Bij => {
                    let p = reflect_bij(g);
                    let mut out = format!("{p}\n");
                    if list {
                        for (x, &(o, k)) in g.nodes.iter().zip(&p.generator_image) {
                            out += &generator_line(x, &crate::graphmod::element_name(o), k);
                        }
                    }
                    out
                }
                EndoClass::Idem => print_graph(&format!("up_{name}"), &reflect_idem(g).graph),
                EndoClass::Periodic(n) => print_graph(&format!("up_{name}"), &reflect_periodic(g, *n)?.graph),
            }
        }
        Command::GraphCoreflect { into, name } => match coreflect_finite(graph_arg(ws, name)?, *into)? {
            CoreflectOutcome::Finite(c) => print_graph(&format!("{name}_up"), &c),
            CoreflectOutcome::Infinite(r) => format!("infinite at {}: {}\n", r.node, r.reason),
        },
        Command::Dot { flavor, eset, depth_cap, name } => {
            if *eset {
                return Ok(dot::presentation_dot(name, &reflect_eset(graph_arg(ws, name)?, *depth_cap)?));
            }
            if let Ok(p) = over_arg(ws, name) {
                dot::over_dot(name, &p, *flavor)
            } else if let Some(c) = ws.category(name) {
                dot::category_dot(name, c)
            } else {
                dot::graph_dot(name, graph_arg(ws, name)?)
            }
        }
    })
}

fn generator_line(node: &str, element: &str, k: i64) -> String {
    match k {
        0 => format!("{node} = {element}\n"),
        _ => format!("{node} = s^{k}({element})\n"),
    }
}
