//! Substitution of normal forms for variables, the closure condition's
//! elementary step.

use crate::element::{Element, Letter};
use crate::free::{eval_term, star};
use crate::parse::{parse_term, ParseError};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// A finite mapping from variable indices to elements, acting as the
/// identity outside its support. Identity bindings are never stored, so
/// equality of substitutions is equality as functions.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Substitution {
    bindings: BTreeMap<u32, Element>,
}

impl Substitution {
    pub fn identity() -> Substitution {
        Substitution::default()
    }

    pub fn new(bindings: impl IntoIterator<Item = (u32, Element)>) -> Substitution {
        let mut s = Substitution::identity();
        for (i, e) in bindings {
            s.bind(i, e);
        }
        s
    }

    /// Binds `x_index` to `value`, replacing any previous binding.
    pub fn bind(&mut self, index: u32, value: Element) {
        assert!(index >= 1, "variable indices start at 1");
        if value == Element::Letter(Letter::var(index)) {
            self.bindings.remove(&index);
        } else {
            self.bindings.insert(index, value);
        }
    }

    /// The image of `x_index`.
    pub fn image(&self, index: u32) -> Element {
        self.bindings
            .get(&index)
            .cloned()
            .unwrap_or_else(|| Element::var(index))
    }

    /// Indices with non-identity images, ascending.
    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.bindings.keys().copied()
    }

    pub fn is_identity(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Element)> {
        self.bindings.iter().map(|(&i, e)| (i, e))
    }

    /// The composite acting as `self` then `after`.
    pub fn then(&self, after: &Substitution) -> Substitution {
        let support: Vec<u32> = self.support().chain(after.support()).collect();
        let mut out = Substitution::identity();
        for i in support {
            out.bind(i, substitute(&self.image(i), after));
        }
        out
    }
}

/// Applies a substitution to a normal form: the zero element and `p` are
/// fixed, a variable maps to its image, and a word is rebuilt by multiplying
/// the image of its head by the images of its tail letters in canonical
/// order.
pub fn substitute(w: &Element, s: &Substitution) -> Element {
    let pairs: Vec<(u32, &Element)> = s.bindings.iter().map(|(&i, e)| (i, e)).collect();
    substitute_pairs(w, &pairs)
}

/// As [`substitute`], over a sparse binding slice. Hot path for the
/// exhaustive closure checks.
pub(crate) fn substitute_pairs(w: &Element, pairs: &[(u32, &Element)]) -> Element {
    let image = |l: Letter| -> Element {
        match l {
            Letter::P => Element::p(),
            Letter::Var(i) => pairs
                .iter()
                .find(|(j, _)| *j == i)
                .map(|(_, e)| (*e).clone())
                .unwrap_or(Element::Letter(l)),
        }
    };
    match w {
        Element::Zero => Element::Zero,
        Element::Letter(l) => image(*l),
        Element::Word { head, tail } => {
            let mut acc = image(*head);
            for l in tail.iter() {
                if acc == Element::Zero {
                    return Element::Zero;
                }
                acc = star(&acc, &image(l));
            }
            acc
        }
    }
}

impl fmt::Display for Substitution {
    /// Renders in the binding syntax accepted by [`parse_substitution`],
    /// e.g. `x1=p*x2; x2=0`; the identity renders as `(identity)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bindings.is_empty() {
            return write!(f, "(identity)");
        }
        let mut first = true;
        for (i, e) in &self.bindings {
            if !first {
                write!(f, "; ")?;
            }
            first = false;
            write!(f, "x{i}={}", crate::free::canonical_term(e))?;
        }
        Ok(())
    }
}

impl Serialize for Substitution {
    /// `{"x1": <element>, "x2": <element>}` keyed by variable name.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.bindings.len()))?;
        for (i, e) in &self.bindings {
            map.serialize_entry(&format!("x{i}"), e)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstParseError {
    #[error("binding {index} ({text:?}): expected the form x<K>=<term>")]
    MalformedBinding { index: usize, text: String },
    #[error("binding {index} ({text:?}): left-hand side must be a variable")]
    BadVariable { index: usize, text: String },
    #[error("binding {index}: variable x{var} is bound twice")]
    DuplicateBinding { index: usize, var: u32 },
    #[error("binding {index}: {source}")]
    BadTerm {
        index: usize,
        #[source]
        source: ParseError,
    },
}

/// Parses semicolon-separated bindings `x1=p*x2; x2=0`. Right-hand sides use
/// the term grammar and are normalized before use. The empty string (or only
/// separators) denotes the identity.
pub fn parse_substitution(text: &str) -> Result<Substitution, SubstParseError> {
    let mut s = Substitution::identity();
    let mut bound: Vec<u32> = Vec::new();
    for (index, segment) in text.split(';').enumerate() {
        let segment = segment.trim();
        if segment.is_empty() {
            continue;
        }
        let Some((lhs, rhs)) = segment.split_once('=') else {
            return Err(SubstParseError::MalformedBinding {
                index,
                text: segment.to_owned(),
            });
        };
        let var = match lhs.trim().parse::<Letter>() {
            Ok(Letter::Var(i)) => i,
            _ => {
                return Err(SubstParseError::BadVariable {
                    index,
                    text: segment.to_owned(),
                })
            }
        };
        if bound.contains(&var) {
            return Err(SubstParseError::DuplicateBinding { index, var });
        }
        bound.push(var);
        let term = parse_term(rhs).map_err(|source| SubstParseError::BadTerm { index, source })?;
        s.bind(var, eval_term(&term));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free::canonical_term;
    use proptest::prelude::*;

    fn x(i: u32) -> Letter {
        Letter::var(i)
    }

    #[test]
    fn renames_variables() {
        let w = Element::word(Letter::P, [x(1), x(2)]);
        let s = Substitution::new([(1, Element::var(3)), (2, Element::var(4))]);
        assert_eq!(substitute(&w, &s), Element::word(Letter::P, [x(3), x(4)]));
    }

    #[test]
    fn word_image_collapses_to_zero() {
        let w = Element::word(Letter::P, [x(1)]);
        let s = Substitution::new([(1, Element::word(Letter::P, [x(2)]))]);
        assert_eq!(substitute(&w, &s), Element::Zero);
    }

    #[test]
    fn merging_variables_collapses_to_zero() {
        let w = Element::word(Letter::P, [x(1), x(2)]);
        let s = Substitution::new([(1, Element::var(3)), (2, Element::var(3))]);
        assert_eq!(substitute(&w, &s), Element::Zero);
        // cross-check against the rewriting oracle on p*x3*x3
        let t = crate::parse::parse_term("p*x3*x3").unwrap();
        assert_eq!(
            crate::rewrite::rewrite_normalize(&t).unwrap(),
            Element::Zero
        );
    }

    #[test]
    fn identity_fixes_everything() {
        let id = Substitution::identity();
        for e in crate::free::enumerate_free(2).unwrap() {
            assert_eq!(substitute(&e, &id), e);
        }
    }

    #[test]
    fn identity_bindings_are_dropped() {
        let s = Substitution::new([(1, Element::var(1)), (2, Element::p())]);
        assert_eq!(s.support().collect::<Vec<_>>(), vec![2]);
        assert_eq!(s, Substitution::new([(2, Element::p())]));
    }

    #[test]
    fn parses_binding_syntax() {
        let s = parse_substitution("x1=p*x2; x2=0").unwrap();
        assert_eq!(s.image(1), Element::word(Letter::P, [x(2)]));
        assert_eq!(s.image(2), Element::Zero);
        assert_eq!(s.image(3), Element::var(3));
        assert!(parse_substitution("").unwrap().is_identity());
        assert!(parse_substitution(" ; ").unwrap().is_identity());
    }

    #[test]
    fn rejects_malformed_bindings() {
        assert!(matches!(
            parse_substitution("x1"),
            Err(SubstParseError::MalformedBinding { .. })
        ));
        assert!(matches!(
            parse_substitution("p=x1"),
            Err(SubstParseError::BadVariable { .. })
        ));
        assert!(matches!(
            parse_substitution("x1=p; x1=0"),
            Err(SubstParseError::DuplicateBinding { .. })
        ));
        assert!(matches!(
            parse_substitution("x1=p*"),
            Err(SubstParseError::BadTerm { .. })
        ));
    }

    #[test]
    fn display_round_trips_through_the_parser() {
        let s = Substitution::new([
            (1, Element::word(Letter::P, [x(2), Letter::P])),
            (4, Element::Zero),
        ]);
        assert_eq!(parse_substitution(&s.to_string()).unwrap(), s);
    }

    fn arb_element() -> impl Strategy<Value = Element> {
        let letter = prop_oneof![Just(Letter::P), (1u32..4).prop_map(Letter::var)];
        prop_oneof![
            1 => Just(Element::Zero),
            2 => letter.clone().prop_map(Element::Letter),
            4 => (letter.clone(), proptest::collection::btree_set(letter, 1..4))
                .prop_map(|(h, t)| Element::word(h, t)),
        ]
    }

    fn arb_subst() -> impl Strategy<Value = Substitution> {
        proptest::collection::btree_map(1u32..4, arb_element(), 0..3).prop_map(Substitution::new)
    }

    proptest! {
        #[test]
        fn composition_associates_with_application(
            w in arb_element(),
            s in arb_subst(),
            r in arb_subst(),
        ) {
            prop_assert_eq!(
                substitute(&substitute(&w, &s), &r),
                substitute(&w, &s.then(&r))
            );
        }

        #[test]
        fn agrees_with_term_level_substitution(w in arb_element(), s in arb_subst()) {
            let term = canonical_term(&w);
            let bindings = s
                .iter()
                .map(|(i, e)| (i, canonical_term(e)))
                .collect();
            let substituted = term.substitute_vars(&bindings);
            prop_assert_eq!(eval_term(&substituted), substitute(&w, &s));
        }
    }
}
