//! The free algebra on `n` generators: product, term evaluation, canonical
//! terms, enumeration, and the exhaustive law suite.

use crate::element::{Element, Letter};
use crate::term::Term;
use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Largest `n` for which [`enumerate_free`] will materialize the carrier by
/// default; the carrier has `1 + (n+1)*2^(n+1)` elements (about 2.2 million
/// at 16).
pub const ENUMERATION_GUARD: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{what} at {requested} exceeds the guard {guard}")]
pub struct GuardError {
    pub what: &'static str,
    pub requested: usize,
    pub guard: usize,
}

/// The product of two normal forms, case by case:
///
/// 1. if either operand is `0`, the product is `0`;
/// 2. two letters `x`, `y` multiply to the word `x y`;
/// 3. anything times a word is `0`;
/// 4. a word times a letter already in its tail is `0`;
/// 5. a word times a fresh letter appends that letter to the tail.
pub fn star(a: &Element, b: &Element) -> Element {
    match (a, b) {
        (Element::Zero, _) | (_, Element::Zero) => Element::Zero,
        (Element::Letter(x), Element::Letter(y)) => Element::word(*x, [*y]),
        (_, Element::Word { .. }) => Element::Zero,
        (Element::Word { head, tail }, Element::Letter(y)) => {
            if tail.contains(*y) {
                Element::Zero
            } else {
                Element::Word {
                    head: *head,
                    tail: tail.with(*y),
                }
            }
        }
    }
}

/// Evaluates a term to its normal form: constants map to `0` and `p`,
/// variables to themselves, and `*` to [`star`]. Left-nested factor chains
/// are folded iteratively, so recursion depth is bounded by the term's
/// right-nesting depth.
pub fn eval_term(t: &Term) -> Element {
    match t {
        Term::Zero => Element::Zero,
        Term::P => Element::p(),
        Term::Var(i) => Element::var(*i),
        Term::Star(..) => {
            let (head, factors) = t.spine();
            let mut acc = eval_term(head);
            for factor in factors {
                acc = star(&acc, &eval_term(factor));
            }
            acc
        }
    }
}

/// A term that evaluates back to the given element: the head multiplied by
/// the tail letters in canonical order, folded left-associatively.
pub fn canonical_term(e: &Element) -> Term {
    fn letter_term(l: Letter) -> Term {
        match l {
            Letter::P => Term::P,
            Letter::Var(i) => Term::Var(i),
        }
    }
    match e {
        Element::Zero => Term::Zero,
        Element::Letter(l) => letter_term(*l),
        Element::Word { head, tail } => tail
            .iter()
            .fold(letter_term(*head), |acc, l| Term::star(acc, letter_term(l))),
    }
}

/// Whether two terms denote the same element of the free algebra, i.e.
/// whether their normal forms coincide.
pub fn equivalent(t1: &Term, t2: &Term) -> bool {
    eval_term(t1) == eval_term(t2)
}

/// `1 + (n+1) * 2^(n+1)`, the size of the free algebra on `n` generators.
/// `None` when the value does not fit in a `u128`.
pub fn free_size(n: u32) -> Option<u128> {
    let letters = u128::from(n).checked_add(1)?;
    let subsets = 1u128.checked_shl(n.checked_add(1)?)?;
    letters.checked_mul(subsets)?.checked_add(1)
}

/// The letters of the free algebra on `n` generators: `p, x1, ..., xn` in
/// canonical order.
pub fn letters(n: u32) -> Vec<Letter> {
    std::iter::once(Letter::P)
        .chain((1..=n).map(Letter::Var))
        .collect()
}

/// Materializes the full carrier of the free algebra on `n` generators:
/// zero, the `n+1` letters, and every word over them. Deterministic order,
/// no repetitions.
pub fn enumerate_free(n: u32) -> Result<Vec<Element>, GuardError> {
    enumerate_free_with_guard(n, ENUMERATION_GUARD)
}

/// As [`enumerate_free`] with an explicit guard. Tails are enumerated by
/// 64-bit masks, so guards past 62 generators are not honored.
pub fn enumerate_free_with_guard(n: u32, guard: u32) -> Result<Vec<Element>, GuardError> {
    if n > guard.min(62) {
        return Err(GuardError {
            what: "free algebra enumeration",
            requested: n as usize,
            guard: guard.min(62) as usize,
        });
    }
    let alphabet = letters(n);
    let k = alphabet.len();
    let mut out = Vec::with_capacity(free_size(n).expect("guarded size fits") as usize);
    out.push(Element::Zero);
    out.extend(alphabet.iter().map(|&l| Element::Letter(l)));
    for &head in &alphabet {
        for mask in 1u64..(1 << k) {
            let tail = (0..k)
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| alphabet[i]);
            out.push(Element::word(head, tail));
        }
    }
    Ok(out)
}

/// The four defining laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    /// `0*x = x*0 = 0`
    ZeroProduct,
    /// `x*y*z = x*z*y`
    FactorSwap,
    /// `x*(y*z) = 0`
    NestedRight,
    /// `x*y*y = 0`
    RepeatedFactor,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eq = match self {
            Law::ZeroProduct => "0*x = x*0 = 0",
            Law::FactorSwap => "x*y*z = x*z*y",
            Law::NestedRight => "x*(y*z) = 0",
            Law::RepeatedFactor => "x*y*y = 0",
        };
        write!(f, "{eq}")
    }
}

/// Outcome of an exhaustive law check, over elements rendered as `V`.
#[derive(Debug, Clone, Serialize)]
pub struct LawReport<V> {
    pub pass: bool,
    pub counterexample: Option<LawViolation<V>>,
    pub checked: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LawViolation<V> {
    pub law: Law,
    pub args: Vec<V>,
    pub lhs: V,
    pub rhs: V,
}

impl<V: fmt::Display> fmt::Display for LawReport<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None if self.pass => write!(f, "pass ({} instances checked)", self.checked),
            None => write!(f, "fail ({} instances checked)", self.checked),
            Some(v) => {
                let args = v
                    .args
                    .iter()
                    .map(|a| format!("[{a}]"))
                    .collect::<Vec<_>>()
                    .join(", ");
                write!(
                    f,
                    "fail: law {} violated at {}: got [{}] vs [{}] ({} instances checked)",
                    v.law, args, v.lhs, v.rhs, self.checked
                )
            }
        }
    }
}

/// Exhaustively checks the four laws over the carrier of the free algebra on
/// `n` generators, as element equations.
pub fn check_free_laws(n: u32) -> Result<LawReport<Element>, GuardError> {
    check_free_laws_with_guard(n, ENUMERATION_GUARD)
}

/// As [`check_free_laws`] with an explicit guard.
pub fn check_free_laws_with_guard(n: u32, guard: u32) -> Result<LawReport<Element>, GuardError> {
    let carrier = enumerate_free_with_guard(n, guard)?;
    let mut checked = 0u64;
    let fail = |law, args: Vec<Element>, lhs: Element, rhs: Element, checked| LawReport {
        pass: false,
        counterexample: Some(LawViolation {
            law,
            args,
            lhs,
            rhs,
        }),
        checked,
    };

    for a in &carrier {
        checked += 2;
        let left = star(&Element::Zero, a);
        if left != Element::Zero {
            return Ok(fail(
                Law::ZeroProduct,
                vec![a.clone()],
                left,
                Element::Zero,
                checked,
            ));
        }
        let right = star(a, &Element::Zero);
        if right != Element::Zero {
            return Ok(fail(
                Law::ZeroProduct,
                vec![a.clone()],
                right,
                Element::Zero,
                checked,
            ));
        }
    }

    for a in &carrier {
        for b in &carrier {
            let ab = star(a, b);
            checked += 1;
            let abb = star(&ab, b);
            if abb != Element::Zero {
                return Ok(fail(
                    Law::RepeatedFactor,
                    vec![a.clone(), b.clone()],
                    abb,
                    Element::Zero,
                    checked,
                ));
            }
            for c in &carrier {
                checked += 2;
                let lhs = star(&ab, c);
                let rhs = star(&star(a, c), b);
                if lhs != rhs {
                    return Ok(fail(
                        Law::FactorSwap,
                        vec![a.clone(), b.clone(), c.clone()],
                        lhs,
                        rhs,
                        checked,
                    ));
                }
                let nested = star(a, &star(b, c));
                if nested != Element::Zero {
                    return Ok(fail(
                        Law::NestedRight,
                        vec![a.clone(), b.clone(), c.clone()],
                        nested,
                        Element::Zero,
                        checked,
                    ));
                }
            }
        }
    }

    Ok(LawReport {
        pass: true,
        counterexample: None,
        checked,
    })
}
