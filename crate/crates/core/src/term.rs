//! Terms over the signature `*`, `p`, `0` with variables `x1, x2, ...`.

use std::collections::BTreeMap;
use std::fmt;

/// A term tree. `a*b*c` denotes `(a*b)*c`.
///
/// The derived order sorts `0`, then `p`, then variables by index, then
/// products; the rewriting engine uses it to put factors into canonical
/// order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Zero,
    P,
    Var(u32),
    Star(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(index: u32) -> Term {
        assert!(index >= 1, "variable indices start at 1");
        Term::Var(index)
    }

    pub fn star(left: Term, right: Term) -> Term {
        Term::Star(Box::new(left), Box::new(right))
    }

    /// Number of `*` nodes.
    pub fn size(&self) -> usize {
        let mut count = 0;
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            if let Term::Star(l, r) = t {
                count += 1;
                stack.push(l);
                stack.push(r);
            }
        }
        count
    }

    /// Indices of the variables occurring in the term, ascending.
    pub fn variables(&self) -> Vec<u32> {
        let mut vars = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t {
                Term::Zero | Term::P => {}
                Term::Var(i) => vars.push(*i),
                Term::Star(l, r) => {
                    stack.push(l);
                    stack.push(r);
                }
            }
        }
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    /// The head and factors of the maximal left-nested product ending here:
    /// `h*a1*...*ak` yields `(h, [a1..ak])`. A non-product term is its own
    /// head. Iterative, so factor chains of any length are safe to process.
    pub(crate) fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut factors = Vec::new();
        let mut head = self;
        while let Term::Star(l, r) = head {
            factors.push(&**r);
            head = l;
        }
        factors.reverse();
        (head, factors)
    }

    /// Replaces every `x_i` bound in `bindings` by the bound term, leaving
    /// other variables in place.
    pub fn substitute_vars(&self, bindings: &BTreeMap<u32, Term>) -> Term {
        match self {
            Term::Zero | Term::P => self.clone(),
            Term::Var(i) => bindings.get(i).cloned().unwrap_or_else(|| self.clone()),
            Term::Star(l, r) => {
                Term::star(l.substitute_vars(bindings), r.substitute_vars(bindings))
            }
        }
    }
}

impl fmt::Display for Term {
    /// Renders with `*` left-associative, so parentheses appear only around
    /// compound right factors: `x1*x2*x3` but `x1*(x2*x3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Zero => write!(f, "0"),
            Term::P => write!(f, "p"),
            Term::Var(i) => write!(f, "x{i}"),
            Term::Star(..) => {
                let (head, factors) = self.spine();
                write!(f, "{head}")?;
                for factor in factors {
                    if matches!(factor, Term::Star(..)) {
                        write!(f, "*({factor})")?;
                    } else {
                        write!(f, "*{factor}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl Drop for Term {
    /// Flattens the tree before the boxes unwind, so dropping a term never
    /// recurses deeper than one level regardless of its shape.
    fn drop(&mut self) {
        let mut stack = Vec::new();
        let flatten = |t: &mut Term, stack: &mut Vec<Term>| {
            if let Term::Star(l, r) = t {
                stack.push(std::mem::replace(&mut **l, Term::Zero));
                stack.push(std::mem::replace(&mut **r, Term::Zero));
            }
        };
        flatten(self, &mut stack);
        while let Some(mut t) = stack.pop() {
            flatten(&mut t, &mut stack);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_counts_star_nodes() {
        let t = Term::star(Term::star(Term::var(1), Term::P), Term::Zero);
        assert_eq!(t.size(), 2);
        assert_eq!(Term::P.size(), 0);
    }

    #[test]
    fn display_parenthesizes_right_nesting_only() {
        let left = Term::star(Term::star(Term::var(1), Term::var(2)), Term::var(3));
        assert_eq!(left.to_string(), "x1*x2*x3");
        let right = Term::star(Term::var(1), Term::star(Term::var(2), Term::var(3)));
        assert_eq!(right.to_string(), "x1*(x2*x3)");
    }

    #[test]
    fn substitute_vars_leaves_unbound_variables() {
        let t = Term::star(Term::var(1), Term::var(2));
        let bindings = BTreeMap::from([(1, Term::P)]);
        assert_eq!(
            t.substitute_vars(&bindings),
            Term::star(Term::P, Term::var(2))
        );
    }

    #[test]
    fn long_factor_chains_do_not_recurse() {
        // size, variables, Display, and Drop must all survive a left spine
        // far deeper than any stack
        let mut t = Term::P;
        for _ in 0..500_000 {
            t = Term::star(t, Term::var(1));
        }
        assert_eq!(t.size(), 500_000);
        assert_eq!(t.variables(), vec![1]);
        let rendered = t.to_string();
        assert!(rendered.starts_with("p*x1*x1"));
        assert_eq!(rendered.len(), 1 + 3 * 500_000);
        drop(t);
    }
}
