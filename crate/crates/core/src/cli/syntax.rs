//! Lexer and parser for the workspace text format.
//!
//! Statements are keyword-led, so newlines carry no meaning; `#` starts a
//! comment. Names are bare (`is_bare`) or double-quoted with `\"` and `\\`
//! escapes. Keywords are only recognized unquoted and in statement position.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::workspace::Workspace;
use crate::dinat::Profunctor;
use crate::error::{Error, Result};
use crate::fincat::{ArrowId, CategoryBuilder, FinCategory, Functor, ObjId, OverCategory};
use crate::graphmod::FinGraph;
use crate::setfun::{SetFunctor, Variance};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Punct(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    quoted: bool,
    line: usize,
    col: usize,
}

const PUNCT: [&str; 8] = ["{", "}", ":", ",", ".", "=", "(", ")"];

fn is_bare_char(c: char) -> bool {
    c.is_alphanumeric() || "_'*^+/[]<>!?@$%&~|".contains(c)
}

/// Whether `s` can be written without quotes.
pub fn is_bare(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_bare_char)
}

fn parse_error(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize| {
        if chars[*i] == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
        *i += 1;
    };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col);
        } else if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col);
            }
        } else if c == '-' {
            if chars.get(i + 1) != Some(&'>') {
                return Err(parse_error(l0, c0, "expected `->`"));
            }
            advance(&mut i, &mut line, &mut col);
            advance(&mut i, &mut line, &mut col);
            out.push(Token {
                tok: Tok::Punct("->"),
                quoted: false,
                line: l0,
                col: c0,
            });
        } else if let Some(p) = PUNCT.iter().find(|p| p.starts_with(c)) {
            advance(&mut i, &mut line, &mut col);
            out.push(Token {
                tok: Tok::Punct(p),
                quoted: false,
                line: l0,
                col: c0,
            });
        } else if c == '"' {
            advance(&mut i, &mut line, &mut col);
            let mut s = String::new();
            loop {
                match chars.get(i) {
                    None => return Err(parse_error(l0, c0, "unterminated quoted name")),
                    Some('"') => break,
                    Some('\\') => {
                        advance(&mut i, &mut line, &mut col);
                        match chars.get(i) {
                            Some(&e @ ('"' | '\\')) => s.push(e),
                            _ => return Err(parse_error(line, col, "unknown escape in quoted name")),
                        }
                    }
                    Some(&ch) => s.push(ch),
                }
                advance(&mut i, &mut line, &mut col);
            }
            advance(&mut i, &mut line, &mut col);
            out.push(Token {
                tok: Tok::Name(s),
                quoted: true,
                line: l0,
                col: c0,
            });
        } else if is_bare_char(c) {
            let mut s = String::new();
            while i < chars.len() && is_bare_char(chars[i]) {
                s.push(chars[i]);
                advance(&mut i, &mut line, &mut col);
            }
            out.push(Token {
                tok: Tok::Name(s),
                quoted: false,
                line: l0,
                col: c0,
            });
        } else {
            return Err(parse_error(l0, c0, format!("unexpected character `{c}`")));
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        quoted: false,
        line,
        col,
    });
    Ok(out)
}

/// A name with the position it was read at.
#[derive(Debug, Clone)]
struct Spanned {
    name: String,
    line: usize,
    col: usize,
}

impl Spanned {
    fn err(&self, msg: impl Into<String>) -> Error {
        parse_error(self.line, self.col, msg)
    }
}

type Pairs = Vec<(Spanned, Spanned)>;

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    ws: &'a mut Workspace,
}

pub(super) fn parse_into(text: &str, ws: &mut Workspace) -> Result<()> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        ws,
    };
    loop {
        let t = p.bump();
        let kw = match (&t.tok, t.quoted) {
            (Tok::Eof, _) => return Ok(()),
            (Tok::Name(s), false) => s.clone(),
            _ => return Err(parse_error(t.line, t.col, "expected a definition")),
        };
        match kw.as_str() {
            "category" => p.category()?,
            "presheaf" => p.set_functor(Variance::Contravariant)?,
            "copresheaf" => p.set_functor(Variance::Covariant)?,
            "over" | "functor" => p.over()?,
            "profunctor" => p.profunctor()?,
            "graph" => p.graph()?,
            _ => return Err(parse_error(t.line, t.col, format!("unknown definition keyword `{kw}`"))),
        }
    }
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn here(&self, msg: impl Into<String>) -> Error {
        let t = self.peek();
        parse_error(t.line, t.col, msg)
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek().tok, Tok::Punct(q) if q == p)
    }

    fn is_keyword(&self, kw: &str) -> bool {
        let t = self.peek();
        !t.quoted && matches!(&t.tok, Tok::Name(s) if s == kw)
    }

    fn punct(&mut self, p: &str) -> Result<()> {
        if self.is_punct(p) {
            self.bump();
            Ok(())
        } else {
            Err(self.here(format!("expected `{p}`")))
        }
    }

    fn keyword(&mut self) -> Result<Spanned> {
        let t = self.peek().clone();
        match (&t.tok, t.quoted) {
            (Tok::Name(s), false) => {
                self.bump();
                Ok(Spanned {
                    name: s.clone(),
                    line: t.line,
                    col: t.col,
                })
            }
            _ => Err(self.here("expected a keyword")),
        }
    }

    fn name(&mut self) -> Result<Spanned> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Name(s) => {
                self.bump();
                Ok(Spanned {
                    name: s.clone(),
                    line: t.line,
                    col: t.col,
                })
            }
            _ => Err(self.here("expected a name")),
        }
    }

    /// `name (, name)*`
    fn name_list(&mut self) -> Result<Vec<Spanned>> {
        let mut out = vec![self.name()?];
        while self.is_punct(",") {
            self.bump();
            out.push(self.name()?);
        }
        Ok(out)
    }

    /// `{ [name (, name)*] }`
    fn element_set(&mut self) -> Result<Vec<Spanned>> {
        self.punct("{")?;
        if self.is_punct("}") {
            self.bump();
            return Ok(Vec::new());
        }
        let out = self.name_list()?;
        self.punct("}")?;
        Ok(out)
    }

    /// `a -> b (, a -> b)*`
    fn pairs(&mut self) -> Result<Pairs> {
        let mut out = Vec::new();
        loop {
            let a = self.name()?;
            self.punct("->")?;
            let b = self.name()?;
            out.push((a, b));
            if !self.is_punct(",") {
                return Ok(out);
            }
            self.bump();
        }
    }

    fn category_ref(&mut self) -> Result<Arc<FinCategory>> {
        let n = self.name()?;
        self.ws
            .use_category(&n.name)
            .ok_or_else(|| n.err(format!("unknown category `{}`", n.name)))
    }

    fn register(&mut self, at: &Spanned, r: Result<()>) -> Result<()> {
        r.map_err(|e| at.err(e.to_string()))
    }

    fn category(&mut self) -> Result<()> {
        let at = self.name()?;
        self.punct("{")?;
        let mut b = CategoryBuilder::new();
        let mut objs: HashMap<String, ObjId> = HashMap::new();
        let mut arrows: HashMap<String, ArrowId> = HashMap::new();
        let mut has_identity = HashSet::new();
        let mut composites: HashMap<(ArrowId, ArrowId), ArrowId> = HashMap::new();
        let obj = |objs: &HashMap<String, ObjId>, s: &Spanned| {
            objs.get(&s.name).copied().ok_or_else(|| s.err(format!("unknown object `{}`", s.name)))
        };
        let arr = |arrows: &HashMap<String, ArrowId>, s: &Spanned| {
            arrows.get(&s.name).copied().ok_or_else(|| s.err(format!("unknown arrow `{}`", s.name)))
        };
        while !self.is_punct("}") {
            let kw = self.keyword()?;
            match kw.name.as_str() {
                "objects" => {
                    self.punct(":")?;
                    for n in self.name_list()? {
                        if objs.contains_key(&n.name) {
                            return Err(n.err(format!("duplicate object `{}`", n.name)));
                        }
                        objs.insert(n.name.clone(), b.object(n.name.clone()));
                    }
                }
                "arrow" | "identity" => {
                    let n = self.name()?;
                    if arrows.contains_key(&n.name) {
                        return Err(n.err(format!("duplicate arrow `{}`", n.name)));
                    }
                    self.punct(":")?;
                    let s = self.name()?;
                    let src = obj(&objs, &s)?;
                    let a = if kw.name == "arrow" {
                        self.punct("->")?;
                        let tgt = obj(&objs, &self.name()?)?;
                        b.arrow(n.name.clone(), src, tgt)
                    } else {
                        if !has_identity.insert(src) {
                            return Err(s.err(format!("object `{}` already has an identity", s.name)));
                        }
                        b.identity(src, n.name.clone())
                    };
                    arrows.insert(n.name, a);
                }
                "compose" => {
                    let g = self.name()?;
                    self.punct(".")?;
                    let f = self.name()?;
                    self.punct("=")?;
                    let h = self.name()?;
                    let (ga, fa, ha) = (arr(&arrows, &g)?, arr(&arrows, &f)?, arr(&arrows, &h)?);
                    if let Some(&old) = composites.get(&(ga, fa)) {
                        if old != ha {
                            return Err(g.err(format!("conflicting composites for {} . {}", g.name, f.name)));
                        }
                    }
                    composites.insert((ga, fa), ha);
                    b.compose(ga, fa, ha);
                }
                other => {
                    return Err(kw.err(format!(
                        "expected `objects`, `arrow`, `identity`, `compose` or `}}`, found `{other}`"
                    )))
                }
            }
        }
        self.punct("}")?;
        let c = b.build();
        let report: Vec<String> = c.validate().iter().map(|v| v.to_string()).collect();
        if !report.is_empty() {
            return Err(at.err(format!("category `{}` is invalid: {}", at.name, report.join("; "))));
        }
        let r = self.ws.add_category(&at.name, Arc::new(c));
        self.register(&at, r)
    }

    fn set_functor(&mut self, default: Variance) -> Result<()> {
        let at = self.name()?;
        if !self.is_keyword("on") {
            return Err(self.here("expected `on`"));
        }
        self.bump();
        let base = self.category_ref()?;
        let mut variance = default;
        if self.is_keyword("contravariant") {
            self.bump();
            variance = Variance::Contravariant;
        } else if self.is_keyword("covariant") {
            self.bump();
            variance = Variance::Covariant;
        }
        self.punct("{")?;
        let mut fibers: Vec<Option<Vec<Spanned>>> = vec![None; base.num_objects()];
        let mut actions: Vec<Option<Pairs>> = vec![None; base.num_arrows()];
        while !self.is_punct("}") {
            let kw = self.keyword()?;
            match kw.name.as_str() {
                "at" => {
                    let x = self.name()?;
                    let o = base.find_object(&x.name).ok_or_else(|| x.err(format!("unknown object `{}`", x.name)))?;
                    self.punct(":")?;
                    if fibers[o.index()].is_some() {
                        return Err(x.err(format!("fiber at `{}` given twice", x.name)));
                    }
                    fibers[o.index()] = Some(self.element_set()?);
                }
                "on" => {
                    let f = self.name()?;
                    let a = base.find_arrow(&f.name).ok_or_else(|| f.err(format!("unknown arrow `{}`", f.name)))?;
                    self.punct(":")?;
                    if actions[a.index()].is_some() {
                        return Err(f.err(format!("action of `{}` given twice", f.name)));
                    }
                    actions[a.index()] = Some(self.pairs()?);
                }
                other => return Err(kw.err(format!("expected `at`, `on` or `}}`, found `{other}`"))),
            }
        }
        self.punct("}")?;
        let fibers: Vec<Vec<String>> = fibers
            .into_iter()
            .map(|f| distinct(f.unwrap_or_default()))
            .collect::<Result<_>>()?;
        let mut action = Vec::new();
        for f in base.arrows() {
            let (s, t) = match variance {
                Variance::Contravariant => (base.tgt(f), base.src(f)),
                Variance::Covariant => (base.src(f), base.tgt(f)),
            };
            let (src, tgt) = (&fibers[s.index()], &fibers[t.index()]);
            action.push(match &actions[f.index()] {
                Some(pairs) => resolve_map(pairs, src, tgt, base.arrow_name(f))?,
                None if base.is_identity(f) || src.is_empty() => (0..src.len()).collect(),
                None => return Err(at.err(format!("no action given for arrow `{}`", base.arrow_name(f)))),
            });
        }
        let a = SetFunctor::new(base, variance, fibers, action)
            .map_err(|e| at.err(format!("set functor `{}` is invalid: {e}", at.name)))?;
        let r = self.ws.add_set_functor(&at.name, a);
        self.register(&at, r)
    }

    fn over(&mut self) -> Result<()> {
        let at = self.name()?;
        self.punct(":")?;
        let total = self.category_ref()?;
        self.punct("->")?;
        let base = self.category_ref()?;
        self.punct("{")?;
        let mut obj_map: Vec<Option<ObjId>> = vec![None; total.num_objects()];
        let mut arrow_map: Vec<Option<ArrowId>> = vec![None; total.num_arrows()];
        while !self.is_punct("}") {
            let kw = self.keyword()?;
            match kw.name.as_str() {
                "objects" => {
                    self.punct(":")?;
                    for (a, x) in self.pairs()? {
                        let ao = total.find_object(&a.name).ok_or_else(|| a.err(format!("unknown object `{}`", a.name)))?;
                        let xo = base.find_object(&x.name).ok_or_else(|| x.err(format!("unknown object `{}`", x.name)))?;
                        if obj_map[ao.index()].replace(xo).is_some() {
                            return Err(a.err(format!("object `{}` mapped twice", a.name)));
                        }
                    }
                }
                "arrows" => {
                    self.punct(":")?;
                    for (u, f) in self.pairs()? {
                        let ua = total.find_arrow(&u.name).ok_or_else(|| u.err(format!("unknown arrow `{}`", u.name)))?;
                        let fa = base.find_arrow(&f.name).ok_or_else(|| f.err(format!("unknown arrow `{}`", f.name)))?;
                        if arrow_map[ua.index()].replace(fa).is_some() {
                            return Err(u.err(format!("arrow `{}` mapped twice", u.name)));
                        }
                    }
                }
                other => return Err(kw.err(format!("expected `objects`, `arrows` or `}}`, found `{other}`"))),
            }
        }
        self.punct("}")?;
        let obj_map: Vec<ObjId> = total
            .objects()
            .map(|a| obj_map[a.index()].ok_or_else(|| at.err(format!("object `{}` is not mapped", total.obj_name(a)))))
            .collect::<Result<_>>()?;
        let arrow_map: Vec<ArrowId> = total
            .arrows()
            .map(|u| match arrow_map[u.index()] {
                Some(f) => Ok(f),
                None if total.is_identity(u) => Ok(base.id(obj_map[total.src(u).index()])),
                None => Err(at.err(format!("arrow `{}` is not mapped", total.arrow_name(u)))),
            })
            .collect::<Result<_>>()?;
        let f = Functor::new(total, base, obj_map, arrow_map);
        let report = f.violations();
        if !report.is_empty() {
            return Err(at.err(format!("functor `{}` is invalid: {}", at.name, report.join("; "))));
        }
        let r = self.ws.add_over(&at.name, OverCategory::new(f));
        self.register(&at, r)
    }

    fn profunctor(&mut self) -> Result<()> {
        let at = self.name()?;
        if !self.is_keyword("on") {
            return Err(self.here("expected `on`"));
        }
        self.bump();
        let base = self.category_ref()?;
        let n = base.num_objects();
        self.punct("{")?;
        let object = |s: &Spanned| {
            base.find_object(&s.name).ok_or_else(|| s.err(format!("unknown object `{}`", s.name)))
        };
        let mut values: Vec<Option<Vec<Spanned>>> = vec![None; n * n];
        // (left?, arrow, z) -> pairs
        let mut actions: HashMap<(bool, ArrowId, ObjId), Pairs> = HashMap::new();
        while !self.is_punct("}") {
            let kw = self.keyword()?;
            match kw.name.as_str() {
                "at" => {
                    self.punct("(")?;
                    let x = self.name()?;
                    self.punct(",")?;
                    let y = self.name()?;
                    self.punct(")")?;
                    self.punct(":")?;
                    let (xo, yo) = (object(&x)?, object(&y)?);
                    let slot = &mut values[xo.index() * n + yo.index()];
                    if slot.is_some() {
                        return Err(x.err(format!("value at ({}, {}) given twice", x.name, y.name)));
                    }
                    *slot = Some(self.element_set()?);
                }
                "left" | "right" => {
                    let f = self.name()?;
                    let fa = base.find_arrow(&f.name).ok_or_else(|| f.err(format!("unknown arrow `{}`", f.name)))?;
                    if !self.is_keyword("at") {
                        return Err(self.here("expected `at`"));
                    }
                    self.bump();
                    let z = self.name()?;
                    let zo = object(&z)?;
                    self.punct(":")?;
                    let key = (kw.name == "left", fa, zo);
                    if actions.contains_key(&key) {
                        return Err(f.err(format!("{} action of `{}` at `{}` given twice", kw.name, f.name, z.name)));
                    }
                    let pairs = self.pairs()?;
                    actions.insert(key, pairs);
                }
                other => {
                    return Err(kw.err(format!("expected `at`, `left`, `right` or `}}`, found `{other}`")))
                }
            }
        }
        self.punct("}")?;
        let values: Vec<Vec<String>> = values
            .into_iter()
            .map(|v| distinct(v.unwrap_or_default()))
            .collect::<Result<_>>()?;
        let val = |x: ObjId, y: ObjId| &values[x.index() * n + y.index()];
        let mut left = Vec::new();
        let mut right = Vec::new();
        for f in base.arrows() {
            let (x, y) = (base.src(f), base.tgt(f));
            let mut l = Vec::new();
            let mut r = Vec::new();
            for z in base.objects() {
                for (is_left, src, tgt, out) in [(true, val(y, z), val(x, z), &mut l), (false, val(z, x), val(z, y), &mut r)] {
                    let side = if is_left { "left" } else { "right" };
                    out.push(match actions.get(&(is_left, f, z)) {
                        Some(pairs) => resolve_map(pairs, src, tgt, base.arrow_name(f))?,
                        None if base.is_identity(f) || src.is_empty() => (0..src.len()).collect(),
                        None => {
                            return Err(at.err(format!(
                                "no {side} action given for arrow `{}` at `{}`",
                                base.arrow_name(f),
                                base.obj_name(z)
                            )))
                        }
                    });
                }
            }
            left.push(l);
            right.push(r);
        }
        let h = Profunctor {
            base,
            values,
            left,
            right,
        };
        let report = h.violations();
        if !report.is_empty() {
            return Err(at.err(format!("profunctor `{}` is invalid: {}", at.name, report.join("; "))));
        }
        let r = self.ws.add_profunctor(&at.name, h);
        self.register(&at, r)
    }

    fn graph(&mut self) -> Result<()> {
        let at = self.name()?;
        self.punct("{")?;
        let mut g = FinGraph::new();
        while !self.is_punct("}") {
            let kw = self.keyword()?;
            match kw.name.as_str() {
                "nodes" => {
                    self.punct(":")?;
                    for n in self.name_list()? {
                        if g.find_node(&n.name).is_some() {
                            return Err(n.err(format!("duplicate node `{}`", n.name)));
                        }
                        g.node(n.name);
                    }
                }
                "edge" => {
                    let e = self.name()?;
                    if g.find_edge(&e.name).is_some() {
                        return Err(e.err(format!("duplicate edge `{}`", e.name)));
                    }
                    self.punct(":")?;
                    let s = self.name()?;
                    self.punct("->")?;
                    let t = self.name()?;
                    let node = |n: &Spanned| g.find_node(&n.name).ok_or_else(|| n.err(format!("unknown node `{}`", n.name)));
                    let (si, ti) = (node(&s)?, node(&t)?);
                    g.edge(e.name, si, ti);
                }
                other => return Err(kw.err(format!("expected `nodes`, `edge` or `}}`, found `{other}`"))),
            }
        }
        self.punct("}")?;
        let r = self.ws.add_graph(&at.name, g);
        self.register(&at, r)
    }
}

fn distinct(names: Vec<Spanned>) -> Result<Vec<String>> {
    let mut seen = HashSet::new();
    for n in &names {
        if !seen.insert(n.name.as_str()) {
            return Err(n.err(format!("duplicate element `{}`", n.name)));
        }
    }
    Ok(names.into_iter().map(|n| n.name).collect())
}

/// A total map `src -> tgt` from named pairs.
fn resolve_map(pairs: &Pairs, src: &[String], tgt: &[String], arrow: &str) -> Result<Vec<usize>> {
    let mut map: Vec<Option<usize>> = vec![None; src.len()];
    for (a, b) in pairs {
        let i = src
            .iter()
            .position(|s| *s == a.name)
            .ok_or_else(|| a.err(format!("`{}` is not in the domain of `{arrow}`", a.name)))?;
        let j = tgt
            .iter()
            .position(|s| *s == b.name)
            .ok_or_else(|| b.err(format!("`{}` is not in the codomain of `{arrow}`", b.name)))?;
        if map[i].replace(j).is_some() {
            return Err(a.err(format!("`{}` is mapped twice by `{arrow}`", a.name)));
        }
    }
    map.iter()
        .enumerate()
        .map(|(i, m)| m.ok_or_else(|| {
            let last = &pairs[pairs.len() - 1].0;
            last.err(format!("`{}` is not mapped by `{arrow}`", src[i]))
        }))
        .collect()
}
