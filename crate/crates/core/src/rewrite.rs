//! A term-level normalizer independent of the algebra's product.
//!
//! The four laws are oriented as rewrite rules: the zero laws and `x*(y*z)`
//! and `x*y*y` collapse to `0`, while `x*y*z = x*z*y` is used as a sorting
//! rule that swaps adjacent out-of-order factors. A fixpoint is either `0`,
//! a single letter, or a left-nested product of a letter with strictly
//! ascending distinct factors, which maps directly onto a normal form.
//!
//! Agreement with [`eval_term`](crate::free::eval_term) on every input is a
//! test target; nothing at runtime depends on it.

use crate::element::{Element, Letter};
use crate::term::Term;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    /// The step budget ran out before a fixpoint; the system is terminating,
    /// so this signals a bug.
    #[error("no fixpoint after {steps} rewrite steps on a term of size {size}")]
    BudgetExceeded { steps: usize, size: usize },
    /// A fixpoint that is not a canonical term; also a bug.
    #[error("rewriting stopped at the non-canonical term {0}")]
    NotCanonical(Term),
}

/// Normalizes a term by exhaustive rewriting and converts the resulting
/// canonical term to its normal form.
pub fn rewrite_normalize(t: &Term) -> Result<Element, RewriteError> {
    let size = t.size();
    let budget = 10 * size * size;
    let mut current = t.clone();
    let mut steps = 0;
    while let Some(next) = rewrite_once(&current) {
        steps += 1;
        if steps > budget {
            return Err(RewriteError::BudgetExceeded { steps, size });
        }
        current = next;
    }
    canonical_to_element(&current).ok_or(RewriteError::NotCanonical(current))
}

/// Applies one rule at the outermost-leftmost redex, if any.
fn rewrite_once(t: &Term) -> Option<Term> {
    let Term::Star(l, r) = t else {
        return None;
    };
    // 0*x -> 0 and x*0 -> 0
    if **l == Term::Zero || **r == Term::Zero {
        return Some(Term::Zero);
    }
    // x*(y*z) -> 0
    if matches!(**r, Term::Star(..)) {
        return Some(Term::Zero);
    }
    if let Term::Star(u, y) = &**l {
        // x*y*y -> 0
        if y == r {
            return Some(Term::Zero);
        }
        // x*y*z -> x*z*y, oriented to sort factors
        if **r < **y {
            let swapped = Term::star((**u).clone(), (**r).clone());
            return Some(Term::star(swapped, (**y).clone()));
        }
    }
    if let Some(l2) = rewrite_once(l) {
        return Some(Term::star(l2, (**r).clone()));
    }
    rewrite_once(r).map(|r2| Term::star((**l).clone(), r2))
}

fn as_letter(t: &Term) -> Option<Letter> {
    match t {
        Term::P => Some(Letter::P),
        Term::Var(i) => Some(Letter::var(*i)),
        _ => None,
    }
}

/// Reads a rewriting fixpoint back as an element. `None` if the term is not
/// canonical (zero, a letter, or a sorted duplicate-free spine of letters).
fn canonical_to_element(t: &Term) -> Option<Element> {
    match t {
        Term::Zero => Some(Element::Zero),
        Term::P | Term::Var(_) => as_letter(t).map(Element::Letter),
        Term::Star(..) => {
            let mut factors = Vec::new();
            let mut spine = t;
            while let Term::Star(l, r) = spine {
                factors.push(as_letter(r)?);
                spine = l;
            }
            let head = as_letter(spine)?;
            factors.reverse();
            if factors.windows(2).any(|w| w[0] >= w[1]) {
                return None;
            }
            Some(Element::word(head, factors))
        }
    }
}
