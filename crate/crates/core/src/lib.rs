//! Normal forms, term clones, and finite models for the variety defined by
//!
//! ```text
//! 0*x = x*0 = 0,    x*y*z = x*z*y,    x*(y*z) = 0,    x*y*y = 0
//! ```
//!
//! over one binary operation `*` and two constants `p` and `0` (with `a*b*c`
//! read as `(a*b)*c`).

pub mod clones;
pub mod element;
pub mod free;
pub mod models;
pub mod parse;
pub mod rewrite;
pub mod subst;
pub mod term;

pub use element::{Element, Letter, LetterSet};
pub use term::Term;
