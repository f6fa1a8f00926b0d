//! Substitution-closed subsets of the free algebra: closure computation,
//! exhaustive closure verification, and the length-parameterized family that
//! separates one closed set per set of admissible lengths.

use crate::element::{Element, Letter};
use crate::free::{letters, GuardError, ENUMERATION_GUARD};
use crate::subst::{substitute_pairs, Substitution};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// A finite set of admissible word lengths, all at least 2, together with
/// the largest length the description covers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LengthSet {
    lengths: BTreeSet<usize>,
    bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LengthSetError {
    #[error("length {0} is not admissible: words have length at least 2")]
    BelowTwo(usize),
    #[error("invalid length {0:?}: expected a decimal integer")]
    NotANumber(String),
}

impl LengthSet {
    pub fn new(lengths: impl IntoIterator<Item = usize>) -> Result<LengthSet, LengthSetError> {
        let lengths: BTreeSet<usize> = lengths.into_iter().collect();
        if let Some(&bad) = lengths.iter().find(|&&n| n < 2) {
            return Err(LengthSetError::BelowTwo(bad));
        }
        let bound = lengths.iter().next_back().copied().unwrap_or(1);
        Ok(LengthSet { lengths, bound })
    }

    pub fn empty() -> LengthSet {
        LengthSet {
            lengths: BTreeSet::new(),
            bound: 1,
        }
    }

    /// Parses comma-separated lengths, e.g. `2,4,5`; the empty string (or
    /// only whitespace) denotes the empty set.
    pub fn parse(text: &str) -> Result<LengthSet, LengthSetError> {
        let mut lengths = Vec::new();
        for token in text.split(',') {
            let token = token.trim();
            if token.is_empty() && lengths.is_empty() && text.trim().is_empty() {
                break;
            }
            let n: usize = token
                .parse()
                .map_err(|_| LengthSetError::NotANumber(token.to_owned()))?;
            lengths.push(n);
        }
        LengthSet::new(lengths)
    }

    pub fn lengths(&self) -> &BTreeSet<usize> {
        &self.lengths
    }

    pub fn contains(&self, n: usize) -> bool {
        self.lengths.contains(&n)
    }

    /// The largest admissible length; 1 when the set is empty.
    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }
}

impl fmt::Display for LengthSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for n in &self.lengths {
            if !first {
                write!(f, ",")?;
            }
            first = false;
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

/// A finite subset of the free algebra on `var_bound` generators, optionally
/// flagged as verified substitution-closed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CloneSet {
    members: BTreeSet<Element>,
    var_bound: u32,
    closed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CloneError {
    #[error(transparent)]
    Guard(#[from] GuardError),
    #[error("element [{element}] uses x{var}, outside the ambient bound m={bound}")]
    VariableOutOfBound {
        element: Element,
        var: u32,
        bound: u32,
    },
}

impl CloneSet {
    /// A set of elements living in the free algebra on `var_bound`
    /// generators; fails if a member mentions a variable above the bound.
    pub fn new(
        members: impl IntoIterator<Item = Element>,
        var_bound: u32,
    ) -> Result<CloneSet, CloneError> {
        let members: BTreeSet<Element> = members.into_iter().collect();
        for e in &members {
            check_bound(e, var_bound)?;
        }
        Ok(CloneSet {
            members,
            var_bound,
            closed: false,
        })
    }

    pub fn members(&self) -> &BTreeSet<Element> {
        &self.members
    }

    pub fn var_bound(&self) -> u32 {
        self.var_bound
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.members.contains(e)
    }

    /// Whether the set has been constructed closed or has passed
    /// [`is_clone`] verification.
    pub fn is_flagged_closed(&self) -> bool {
        self.closed
    }

    /// Runs [`is_clone`] and records a passing outcome in the closed flag.
    pub fn verify(&mut self) -> CloneReport {
        let report = is_clone(self);
        self.closed = report.pass;
        report
    }
}

fn check_bound(e: &Element, bound: u32) -> Result<(), CloneError> {
    if let Some(&var) = e.variables().iter().find(|&&v| v > bound) {
        return Err(CloneError::VariableOutOfBound {
            element: e.clone(),
            var,
            bound,
        });
    }
    Ok(())
}

/// Outcome of an exhaustive substitution-closure check.
#[derive(Debug, Clone, Serialize)]
pub struct CloneReport {
    pub pass: bool,
    pub counterexample: Option<CloneCounterexample>,
    pub checked: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub missing_generators: Vec<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CloneCounterexample {
    pub member: Element,
    pub substitution: Substitution,
    pub result: Element,
}

impl CloneReport {
    fn pass(checked: u64) -> CloneReport {
        CloneReport {
            pass: true,
            counterexample: None,
            checked,
            missing_generators: Vec::new(),
        }
    }
}

impl fmt::Display for CloneReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass {
            return write!(f, "pass ({} substitutions checked)", self.checked);
        }
        if !self.missing_generators.is_empty() {
            let gens = self
                .missing_generators
                .iter()
                .map(|i| format!("x{i}"))
                .collect::<Vec<_>>()
                .join(", ");
            return write!(f, "fail: missing generator(s) {gens}");
        }
        match &self.counterexample {
            Some(c) => write!(
                f,
                "fail: substituting [{}] into [{}] yields [{}], outside the set ({} substitutions checked)",
                c.substitution, c.member, c.result, self.checked
            ),
            None => write!(f, "fail ({} substitutions checked)", self.checked),
        }
    }
}

/// Iterates all `base^k` digit tuples, calling `f` until it returns `false`.
fn each_tuple(k: usize, base: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    if k == 0 {
        return f(&[]);
    }
    if base == 0 {
        return true;
    }
    let mut digits = vec![0usize; k];
    loop {
        if !f(&digits) {
            return false;
        }
        let mut i = 0;
        loop {
            digits[i] += 1;
            if digits[i] < base {
                break;
            }
            digits[i] = 0;
            i += 1;
            if i == k {
                return true;
            }
        }
    }
}

/// The least subset of the free algebra on `m` generators containing the
/// generators and the given elements and closed under substitution with
/// values drawn from the set itself. Worklist fixpoint; terminates because
/// the ambient algebra is finite.
pub fn clone_closure(generators: &[Element], m: u32) -> Result<CloneSet, CloneError> {
    clone_closure_with_guard(generators, m, ENUMERATION_GUARD)
}

/// As [`clone_closure`] with an explicit guard.
pub fn clone_closure_with_guard(
    generators: &[Element],
    m: u32,
    guard: u32,
) -> Result<CloneSet, CloneError> {
    if m > guard {
        return Err(GuardError {
            what: "clone closure",
            requested: m as usize,
            guard: guard as usize,
        }
        .into());
    }
    for g in generators {
        check_bound(g, m)?;
    }

    let mut members: Vec<Element> = Vec::new();
    let mut seen: BTreeSet<Element> = BTreeSet::new();
    let push = |e: Element, members: &mut Vec<Element>, seen: &mut BTreeSet<Element>| {
        if seen.insert(e.clone()) {
            members.push(e);
        }
    };
    for i in 1..=m {
        push(Element::var(i), &mut members, &mut seen);
    }
    for g in generators {
        push(g.clone(), &mut members, &mut seen);
    }

    // Tuples entirely inside members[..processed] were handled in an
    // earlier round and cannot produce anything new.
    let mut processed = 0usize;
    while processed < members.len() {
        let snapshot = members.len();
        let mut fresh: Vec<Element> = Vec::new();
        for iw in 0..snapshot {
            let w = members[iw].clone();
            let vars = w.variables();
            let mut pairs: Vec<(u32, &Element)> = Vec::with_capacity(vars.len());
            each_tuple(vars.len(), snapshot, |digits| {
                if iw < processed && digits.iter().all(|&d| d < processed) {
                    return true;
                }
                pairs.clear();
                pairs.extend(
                    vars.iter()
                        .copied()
                        .zip(digits.iter().map(|&d| &members[d])),
                );
                let result = substitute_pairs(&w, &pairs);
                if !seen.contains(&result) {
                    seen.insert(result.clone());
                    fresh.push(result);
                }
                true
            });
        }
        processed = snapshot;
        members.extend(fresh);
    }

    Ok(CloneSet {
        members: seen,
        var_bound: m,
        closed: true,
    })
}

/// Exhaustively verifies that a set contains all generators and is closed
/// under substitution, with values ranging over the set itself and only the
/// variables occurring in each member substituted.
pub fn is_clone(s: &CloneSet) -> CloneReport {
    let missing: Vec<u32> = (1..=s.var_bound)
        .filter(|&i| !s.members.contains(&Element::var(i)))
        .collect();
    if !missing.is_empty() {
        return CloneReport {
            pass: false,
            counterexample: None,
            checked: 0,
            missing_generators: missing,
        };
    }

    let pool: Vec<&Element> = s.members.iter().collect();
    let mut checked = 0u64;
    for w in &pool {
        let vars = w.variables();
        let mut pairs: Vec<(u32, &Element)> = Vec::with_capacity(vars.len());
        let mut counterexample = None;
        each_tuple(vars.len(), pool.len(), |digits| {
            checked += 1;
            pairs.clear();
            pairs.extend(vars.iter().copied().zip(digits.iter().map(|&d| pool[d])));
            let result = substitute_pairs(w, &pairs);
            if s.members.contains(&result) {
                true
            } else {
                counterexample = Some(CloneCounterexample {
                    member: (*w).clone(),
                    substitution: Substitution::new(
                        vars.iter()
                            .copied()
                            .zip(digits.iter().map(|&d| pool[d].clone())),
                    ),
                    result,
                });
                false
            }
        });
        if counterexample.is_some() {
            return CloneReport {
                pass: false,
                counterexample,
                checked,
                missing_generators: Vec::new(),
            };
        }
    }
    CloneReport::pass(checked)
}

/// The family member for a length set: the zero element plus every word
/// with head `p` over the `m+1` letters whose length is admissible. No
/// generator letters are included.
pub fn s_of(a: &LengthSet, m: u32) -> Result<CloneSet, GuardError> {
    s_of_with_guard(a, m, ENUMERATION_GUARD)
}

/// As [`s_of`] with an explicit guard; tails are enumerated by 64-bit
/// masks, so guards past 62 generators are not honored.
pub fn s_of_with_guard(a: &LengthSet, m: u32, guard: u32) -> Result<CloneSet, GuardError> {
    if m > guard.min(62) {
        return Err(GuardError {
            what: "family enumeration",
            requested: m as usize,
            guard: guard.min(62) as usize,
        });
    }
    let alphabet = letters(m);
    let k = alphabet.len();
    let mut members = BTreeSet::from([Element::Zero]);
    for mask in 1u64..(1 << k) {
        let tail_size = mask.count_ones() as usize;
        if a.contains(tail_size + 1) {
            let tail = (0..k)
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| alphabet[i]);
            members.insert(Element::word(Letter::P, tail));
        }
    }
    Ok(CloneSet {
        members,
        var_bound: m,
        closed: false,
    })
}

/// The family member together with the generator letters `x1..xm`; this is
/// the set verified to be substitution-closed. Returned unflagged; run
/// [`CloneSet::verify`] or [`verify_family_closed`] to check and flag it.
pub fn t_of(a: &LengthSet, m: u32) -> Result<CloneSet, GuardError> {
    t_of_with_guard(a, m, ENUMERATION_GUARD)
}

/// As [`t_of`] with an explicit guard.
pub fn t_of_with_guard(a: &LengthSet, m: u32, guard: u32) -> Result<CloneSet, GuardError> {
    let mut s = s_of_with_guard(a, m, guard)?;
    for i in 1..=m {
        s.members.insert(Element::var(i));
    }
    Ok(s)
}

/// Combined check of a family member: closure of the generator-extended set
/// plus the invariance of word lengths under substitution.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyReport {
    pub pass: bool,
    pub closure: CloneReport,
    pub length: CloneReport,
}

impl fmt::Display for FamilyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass {
            return write!(
                f,
                "pass (closure: {} substitutions checked; length invariance: {} substitutions checked)",
                self.closure.checked, self.length.checked
            );
        }
        if !self.closure.pass {
            return write!(f, "closure {}", self.closure);
        }
        match &self.length.counterexample {
            Some(c) => write!(
                f,
                "fail: substituting [{}] into [{}] (length {}) yields [{}] (length {}) ({} substitutions checked)",
                c.substitution,
                c.member,
                c.member.length(),
                c.result,
                c.result.length(),
                self.length.checked
            ),
            None => write!(f, "length invariance {}", self.length),
        }
    }
}

/// Verifies that the generator-extended family member is substitution-closed
/// and that substituting into a family word yields zero or a word of the
/// same length.
pub fn verify_family_closed(a: &LengthSet, m: u32) -> Result<FamilyReport, GuardError> {
    verify_family_closed_with_guard(a, m, ENUMERATION_GUARD)
}

/// As [`verify_family_closed`] with an explicit guard.
pub fn verify_family_closed_with_guard(
    a: &LengthSet,
    m: u32,
    guard: u32,
) -> Result<FamilyReport, GuardError> {
    let mut extended = t_of_with_guard(a, m, guard)?;
    let closure = extended.verify();

    let raw = s_of_with_guard(a, m, guard)?;
    let pool: Vec<&Element> = extended.members.iter().collect();
    let mut checked = 0u64;
    let mut counterexample = None;
    'members: for w in raw.members() {
        let vars = w.variables();
        let mut pairs: Vec<(u32, &Element)> = Vec::with_capacity(vars.len());
        let aborted = !each_tuple(vars.len(), pool.len(), |digits| {
            checked += 1;
            pairs.clear();
            pairs.extend(vars.iter().copied().zip(digits.iter().map(|&d| pool[d])));
            let result = substitute_pairs(w, &pairs);
            if result == Element::Zero || result.length() == w.length() {
                true
            } else {
                counterexample = Some(CloneCounterexample {
                    member: w.clone(),
                    substitution: Substitution::new(
                        vars.iter()
                            .copied()
                            .zip(digits.iter().map(|&d| pool[d].clone())),
                    ),
                    result,
                });
                false
            }
        });
        if aborted {
            break 'members;
        }
    }

    let length = CloneReport {
        pass: counterexample.is_none(),
        counterexample,
        checked,
        missing_generators: Vec::new(),
    };
    Ok(FamilyReport {
        pass: closure.pass && length.pass,
        closure,
        length,
    })
}

/// Lengths of the `p`-headed words in a set. Recovers the length set from a
/// family member built over a sufficiently large ambient algebra.
pub fn length_spectrum(s: &CloneSet) -> BTreeSet<usize> {
    s.members
        .iter()
        .filter(|e| {
            matches!(
                e,
                Element::Word {
                    head: Letter::P,
                    ..
                }
            )
        })
        .map(Element::length)
        .collect()
}

/// How two family members compare.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum Distinction {
    /// The length sets agree, so the family members are the same set.
    Equal,
    /// A word in exactly one of the two family members.
    Witness { element: Element, in_first: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("lengths up to {bound} need ambient bound m >= {required}, but m={given} was supplied")]
pub struct DistinguishError {
    pub bound: usize,
    pub required: usize,
    pub given: u32,
}

/// For distinct length sets, produces a word of the least differing length;
/// it belongs to exactly one of the two family members. Requires the ambient
/// bound to realize every described length (a word of length `n` needs
/// `n - 1` of the `m + 1` letters).
pub fn distinguish(a: &LengthSet, b: &LengthSet, m: u32) -> Result<Distinction, DistinguishError> {
    if a.lengths == b.lengths {
        return Ok(Distinction::Equal);
    }
    let bound = a.bound().max(b.bound());
    if bound > m as usize + 2 {
        return Err(DistinguishError {
            bound,
            required: bound.saturating_sub(2),
            given: m,
        });
    }
    let n = *a
        .lengths
        .symmetric_difference(&b.lengths)
        .next()
        .expect("sets differ");
    let tail_size = n - 1;
    let tail: Vec<Letter> = if tail_size <= m as usize {
        (1..=tail_size as u32).map(Letter::var).collect()
    } else {
        // tail_size = m + 1: every variable plus the letter p
        std::iter::once(Letter::P)
            .chain((1..=m).map(Letter::var))
            .collect()
    };
    Ok(Distinction::Witness {
        element: Element::word(Letter::P, tail),
        in_first: a.contains(n),
    })
}
