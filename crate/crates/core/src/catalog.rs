//! Small named categories used as bases, shapes and test fixtures.

use crate::fincat::{CategoryBuilder, FinCategory};

/// The terminal category: object `*`.
pub fn one() -> FinCategory {
    let mut b = CategoryBuilder::new();
    b.object("*");
    b.build()
}

/// The interval `f: x -> y`.
pub fn two() -> FinCategory {
    let mut b = CategoryBuilder::new();
    let x = b.object("x");
    let y = b.object("y");
    b.arrow("f", x, y);
    b.build()
}

/// The idempotent monoid `{1, e}` with `e . e = e`, on object `s`.
pub fn idem() -> FinCategory {
    let mut b = CategoryBuilder::new();
    let s = b.object("s");
    let e = b.arrow("e", s, s);
    b.compose(e, e, e);
    b.build()
}

/// Two parallel arrows `f, g: x -> y`.
pub fn pair() -> FinCategory {
    let mut b = CategoryBuilder::new();
    let x = b.object("x");
    let y = b.object("y");
    b.arrow("f", x, y);
    b.arrow("g", x, y);
    b.build()
}

/// The cyclic group of order `n` as a one-object category; `g<k>` is the k-th power.
pub fn cyclic_group(n: usize) -> FinCategory {
    assert!(n >= 1);
    let mut b = CategoryBuilder::new();
    let o = b.object("*");
    let mut elems = vec![b.identity(o, "1")];
    for k in 1..n {
        elems.push(b.arrow(format!("g{k}"), o, o));
    }
    for i in 1..n {
        for j in 1..n {
            b.compose(elems[i], elems[j], elems[(i + j) % n]);
        }
    }
    b.build()
}

/// `n` objects `o0, o1, ...` and identities only.
pub fn discrete(n: usize) -> FinCategory {
    let mut b = CategoryBuilder::new();
    for i in 0..n {
        b.object(format!("o{i}"));
    }
    b.build()
}

/// The splitting of the idempotent monoid: `s` with `e = i . r`, retract `t`.
pub fn split_idem() -> FinCategory {
    let mut b = CategoryBuilder::new();
    let s = b.object("s");
    let t = b.object("t");
    let e = b.arrow("e", s, s);
    let r = b.arrow("r", s, t);
    let i = b.arrow("i", t, s);
    let id_t = b.identity(t, "id_t");
    b.compose(e, e, e);
    b.compose(i, r, e);
    b.compose(r, i, id_t);
    b.compose(r, e, r);
    b.compose(e, i, i);
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_valid() {
        for c in [one(), two(), idem(), pair(), discrete(3), split_idem()] {
            assert!(c.validate().is_empty(), "{:?}", c.validate());
        }
        for n in 1..6 {
            assert!(cyclic_group(n).validate().is_empty());
            assert!(cyclic_group(n).is_groupoid());
        }
        assert!(!two().is_groupoid());
    }
}
