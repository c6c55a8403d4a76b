//! Exact computation with finite categories, set-valued functors and
//! categories over a base: discrete (op)fibrations, reflections and
//! coreflections, ends and coends, Kan extensions, Karoubi envelopes and
//! graph reflections into endomap algebras.

#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod cli;
pub mod dinat;
pub mod error;
pub mod fincat;
pub mod generate;
pub mod graphmod;
pub mod kan;
pub mod karoubi;
pub mod overbase;
pub mod reflect;
mod search;
pub mod setfun;
pub mod unionfind;

pub use error::{Error, Result};
pub use fincat::{ArrowId, CategoryBuilder, FinCategory, Functor, ObjId, OverCategory};
