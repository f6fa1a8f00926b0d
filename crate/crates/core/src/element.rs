//! Normal forms of the free algebra: the zero element, letters, and words.
//!
//! A word is a pair of a head letter and a nonempty finite set of letters.
//! Two words are equal exactly when their heads agree and their tails agree
//! as sets; the strings `x y1 y2` and `x y2 y1` are two notations for the
//! same word.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// The constant letter `p` or a variable `x1, x2, ...`.
///
/// The derived order is the canonical letter order: `p` first, then
/// variables by ascending index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    P,
    Var(u32),
}

impl Letter {
    /// The variable `x<index>`. Indices are 1-based.
    pub fn var(index: u32) -> Letter {
        assert!(index >= 1, "variable indices start at 1");
        Letter::Var(index)
    }

    pub fn var_index(self) -> Option<u32> {
        match self {
            Letter::P => None,
            Letter::Var(i) => Some(i),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::P => write!(f, "p"),
            Letter::Var(i) => write!(f, "x{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid letter {0:?}: expected \"p\" or \"x<index>\" with index >= 1")]
pub struct LetterParseError(pub String);

impl FromStr for Letter {
    type Err = LetterParseError;

    fn from_str(s: &str) -> Result<Letter, LetterParseError> {
        if s == "p" {
            return Ok(Letter::P);
        }
        let digits = s
            .strip_prefix('x')
            .ok_or_else(|| LetterParseError(s.to_owned()))?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(LetterParseError(s.to_owned()));
        }
        match digits.parse::<u32>() {
            Ok(i) if i >= 1 => Ok(Letter::Var(i)),
            _ => Err(LetterParseError(s.to_owned())),
        }
    }
}

/// A nonempty set of letters, stored sorted in canonical order without
/// duplicates. Equality is set equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LetterSet(Box<[Letter]>);

impl LetterSet {
    /// Builds the set of the given letters. Panics if no letter is supplied.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> LetterSet {
        let mut v: Vec<Letter> = letters.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        assert!(
            !v.is_empty(),
            "a word tail must contain at least one letter"
        );
        LetterSet(v.into_boxed_slice())
    }

    pub fn contains(&self, l: Letter) -> bool {
        self.0.binary_search(&l).is_ok()
    }

    /// The set extended by one letter not already present.
    pub fn with(&self, l: Letter) -> LetterSet {
        debug_assert!(!self.contains(l));
        let pos = self.0.partition_point(|&x| x < l);
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0[..pos]);
        v.push(l);
        v.extend_from_slice(&self.0[pos..]);
        LetterSet(v.into_boxed_slice())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Letters in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = Letter> + '_ {
        self.0.iter().copied()
    }
}

/// An element of the free algebra in normal form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Zero,
    Letter(Letter),
    Word { head: Letter, tail: LetterSet },
}

impl Element {
    pub fn letter(l: Letter) -> Element {
        Element::Letter(l)
    }

    pub fn var(index: u32) -> Element {
        Element::Letter(Letter::var(index))
    }

    pub fn p() -> Element {
        Element::Letter(Letter::P)
    }

    /// A word with the given head and tail letters. The head may recur in
    /// the tail. Panics if the tail is empty.
    pub fn word(head: Letter, tail: impl IntoIterator<Item = Letter>) -> Element {
        Element::Word {
            head,
            tail: LetterSet::new(tail),
        }
    }

    /// 0 for the zero element, 1 for a letter, tail size + 1 for a word.
    pub fn length(&self) -> usize {
        match self {
            Element::Zero => 0,
            Element::Letter(_) => 1,
            Element::Word { tail, .. } => tail.len() + 1,
        }
    }

    /// Indices of the variables occurring in the element, in ascending order.
    pub fn variables(&self) -> Vec<u32> {
        match self {
            Element::Zero => Vec::new(),
            Element::Letter(l) => l.var_index().into_iter().collect(),
            Element::Word { head, tail } => {
                // Tail iteration is sorted and the head is merged in.
                let mut vars: Vec<u32> = tail.iter().filter_map(Letter::var_index).collect();
                if let Some(i) = head.var_index() {
                    if let Err(pos) = vars.binary_search(&i) {
                        vars.insert(pos, i);
                    }
                }
                vars
            }
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Zero => write!(f, "0"),
            Element::Letter(l) => write!(f, "{l}"),
            Element::Word { head, tail } => {
                write!(f, "{head}")?;
                for l in tail.iter() {
                    write!(f, " {l}")?;
                }
                Ok(())
            }
        }
    }
}

/// Wire representation of [`Element`]:
/// `{"kind":"zero"}`, `{"kind":"letter","letter":"x3"}`, or
/// `{"kind":"word","head":"p","tail":["p","x1"]}`.
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum ElementRepr {
    Zero,
    Letter { letter: String },
    Word { head: String, tail: Vec<String> },
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr = match self {
            Element::Zero => ElementRepr::Zero,
            Element::Letter(l) => ElementRepr::Letter {
                letter: l.to_string(),
            },
            Element::Word { head, tail } => ElementRepr::Word {
                head: head.to_string(),
                tail: tail.iter().map(|l| l.to_string()).collect(),
            },
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Element, D::Error> {
        match ElementRepr::deserialize(deserializer)? {
            ElementRepr::Zero => Ok(Element::Zero),
            ElementRepr::Letter { letter } => {
                let l: Letter = letter.parse().map_err(D::Error::custom)?;
                Ok(Element::Letter(l))
            }
            ElementRepr::Word { head, tail } => {
                let head: Letter = head.parse().map_err(D::Error::custom)?;
                if tail.is_empty() {
                    return Err(D::Error::custom("a word tail must be nonempty"));
                }
                let mut letters = Vec::with_capacity(tail.len());
                for s in &tail {
                    letters.push(s.parse::<Letter>().map_err(D::Error::custom)?);
                }
                let set = LetterSet::new(letters.iter().copied());
                if set.len() != letters.len() {
                    return Err(D::Error::custom("a word tail must not repeat letters"));
                }
                Ok(Element::Word { head, tail: set })
            }
        }
    }
}
