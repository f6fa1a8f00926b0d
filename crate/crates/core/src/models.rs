//! Brute-force enumeration and checking of finite models of the variety,
//! and the desk-scale evidence that the normal-form algebra is free:
//! evaluation maps into verified models are homomorphisms, and the
//! generators together with the constants generate everything.

use crate::element::Element;
use crate::free::{canonical_term, enumerate_free, star, GuardError, Law, LawReport, LawViolation};
use crate::term::Term;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// Largest carrier size [`enumerate_models`] will search by default;
/// size `k` means `k^(k*k)` tables times `k*k` constant placements.
pub const MODEL_SIZE_GUARD: usize = 3;

/// A carrier index, rendered `e0..e(k-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct CarrierIndex(pub usize);

impl fmt::Display for CarrierIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// A finite carrier with a binary operation table and the two distinguished
/// constants. Structurally validated on construction and deserialization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawModel", into = "RawModel")]
pub struct FiniteModel {
    size: usize,
    zero_elem: usize,
    p_elem: usize,
    table: Vec<Vec<usize>>,
}

/// Wire form: `{"size":k, "zero":i, "p":j, "table":[[...],...]}`.
#[derive(Serialize, Deserialize)]
struct RawModel {
    size: usize,
    zero: usize,
    p: usize,
    table: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("a model needs at least one element")]
    EmptyCarrier,
    #[error("constant {name} = {value} is outside the carrier 0..{size}")]
    ConstantOutOfRange {
        name: &'static str,
        value: usize,
        size: usize,
    },
    #[error("table must be {size}x{size}, found row {row} of width {width}")]
    BadTableShape {
        size: usize,
        row: usize,
        width: usize,
    },
    #[error("table entry [{row}][{col}] = {value} is outside the carrier 0..{size}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        size: usize,
    },
}

impl FiniteModel {
    pub fn new(
        size: usize,
        zero_elem: usize,
        p_elem: usize,
        table: Vec<Vec<usize>>,
    ) -> Result<FiniteModel, ModelError> {
        if size == 0 {
            return Err(ModelError::EmptyCarrier);
        }
        for (name, value) in [("zero", zero_elem), ("p", p_elem)] {
            if value >= size {
                return Err(ModelError::ConstantOutOfRange { name, value, size });
            }
        }
        if table.len() != size {
            return Err(ModelError::BadTableShape {
                size,
                row: table.len(),
                width: 0,
            });
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != size {
                return Err(ModelError::BadTableShape {
                    size,
                    row,
                    width: r.len(),
                });
            }
            for (col, &value) in r.iter().enumerate() {
                if value >= size {
                    return Err(ModelError::EntryOutOfRange {
                        row,
                        col,
                        value,
                        size,
                    });
                }
            }
        }
        Ok(FiniteModel {
            size,
            zero_elem,
            p_elem,
            table,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero_elem(&self) -> usize {
        self.zero_elem
    }

    pub fn p_elem(&self) -> usize {
        self.p_elem
    }

    /// The interpretation of `*`.
    pub fn product(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }
}

impl TryFrom<RawModel> for FiniteModel {
    type Error = ModelError;
    fn try_from(raw: RawModel) -> Result<FiniteModel, ModelError> {
        FiniteModel::new(raw.size, raw.zero, raw.p, raw.table)
    }
}

impl From<FiniteModel> for RawModel {
    fn from(m: FiniteModel) -> RawModel {
        RawModel {
            size: m.size,
            zero: m.zero_elem,
            p: m.p_elem,
            table: m.table,
        }
    }
}

impl fmt::Display for FiniteModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "carrier e0..e{} with 0 = e{}, p = e{}",
            self.size - 1,
            self.zero_elem,
            self.p_elem
        )?;
        for (i, row) in self.table.iter().enumerate() {
            let cells = row
                .iter()
                .map(|&v| format!("e{v}"))
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(f, "  e{i} | {cells}")?;
        }
        Ok(())
    }
}

/// Exhaustively checks the four laws over the whole carrier, reporting the
/// first violating tuple.
pub fn check_laws(model: &FiniteModel) -> LawReport<CarrierIndex> {
    let k = model.size;
    let z = model.zero_elem;
    let mut checked = 0u64;
    let fail = |law, args: &[usize], lhs: usize, rhs: usize, checked| LawReport {
        pass: false,
        counterexample: Some(LawViolation {
            law,
            args: args.iter().copied().map(CarrierIndex).collect(),
            lhs: CarrierIndex(lhs),
            rhs: CarrierIndex(rhs),
        }),
        checked,
    };

    for x in 0..k {
        checked += 2;
        if model.table[z][x] != z {
            return fail(Law::ZeroProduct, &[x], model.table[z][x], z, checked);
        }
        if model.table[x][z] != z {
            return fail(Law::ZeroProduct, &[x], model.table[x][z], z, checked);
        }
    }
    for x in 0..k {
        for y in 0..k {
            checked += 1;
            let xyy = model.table[model.table[x][y]][y];
            if xyy != z {
                return fail(Law::RepeatedFactor, &[x, y], xyy, z, checked);
            }
        }
    }
    for x in 0..k {
        for y in 0..k {
            let xy = model.table[x][y];
            for w in 0..k {
                checked += 2;
                let lhs = model.table[xy][w];
                let rhs = model.table[model.table[x][w]][y];
                if lhs != rhs {
                    return fail(Law::FactorSwap, &[x, y, w], lhs, rhs, checked);
                }
                let nested = model.table[x][model.table[y][w]];
                if nested != z {
                    return fail(Law::NestedRight, &[x, y, w], nested, z, checked);
                }
            }
        }
    }
    LawReport {
        pass: true,
        counterexample: None,
        checked,
    }
}

/// All models of the variety on carrier `{0..k-1}`: every operation table
/// combined with every placement of the constants, filtered by
/// [`check_laws`]. Emitted in lexicographic order on the table (row-major),
/// then the zero constant, then `p`.
pub fn enumerate_models(k: usize) -> Result<Vec<FiniteModel>, GuardError> {
    enumerate_models_with_guard(k, MODEL_SIZE_GUARD)
}

/// As [`enumerate_models`] with an explicit guard.
pub fn enumerate_models_with_guard(k: usize, guard: usize) -> Result<Vec<FiniteModel>, GuardError> {
    if k > guard {
        return Err(GuardError {
            what: "model enumeration",
            requested: k,
            guard,
        });
    }
    let mut out = Vec::new();
    if k == 0 {
        return Ok(out);
    }
    let cells = k * k;
    let mut table = vec![vec![0usize; k]; k];
    loop {
        // The laws never mention p, so validity depends only on the table
        // and the zero constant.
        for zero in 0..k {
            let candidate = FiniteModel {
                size: k,
                zero_elem: zero,
                p_elem: 0,
                table: table.clone(),
            };
            if check_laws(&candidate).pass {
                for p in 0..k {
                    let mut model = candidate.clone();
                    model.p_elem = p;
                    out.push(model);
                }
            }
        }
        // advance the table odometer, last cell fastest
        let mut i = cells;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            let (r, c) = (i / k, i % k);
            table[r][c] += 1;
            if table[r][c] < k {
                break;
            }
            table[r][c] = 0;
        }
    }
}

/// Keeps one representative per isomorphism class, preserving enumeration
/// order. Canonicalizes by relabeling the carrier with every permutation and
/// taking the least (table, zero, p) triple; intended for the small carriers
/// [`enumerate_models`] covers.
pub fn dedup_isomorphic(models: &[FiniteModel]) -> Vec<FiniteModel> {
    let mut seen = BTreeSet::new();
    models
        .iter()
        .filter(|m| seen.insert(canonical_form(m)))
        .cloned()
        .collect()
}

fn canonical_form(model: &FiniteModel) -> (Vec<Vec<usize>>, usize, usize) {
    let k = model.size;
    let mut best: Option<(Vec<Vec<usize>>, usize, usize)> = None;
    for perm in permutations(k) {
        let mut table = vec![vec![0usize; k]; k];
        for a in 0..k {
            for b in 0..k {
                table[perm[a]][perm[b]] = perm[model.table[a][b]];
            }
        }
        let candidate = (table, perm[model.zero_elem], perm[model.p_elem]);
        if best.as_ref().is_none_or(|b| candidate < *b) {
            best = Some(candidate);
        }
    }
    best.expect("carrier is nonempty")
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..k).filter_map(move |v| {
                    if p.contains(&v) {
                        None
                    } else {
                        let mut next = p.clone();
                        next.push(v);
                        Some(next)
                    }
                })
            })
            .collect();
    }
    out
}

/// A total assignment of carrier indices to the variables `x1..xn`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Assignment(Vec<usize>);

impl Assignment {
    pub fn new(values: Vec<usize>) -> Assignment {
        Assignment(values)
    }

    /// Every assignment of `n` variables into a carrier of size `k`, in
    /// lexicographic order.
    pub fn all(n: u32, k: usize) -> Vec<Assignment> {
        let n = n as usize;
        if n == 0 {
            return vec![Assignment(Vec::new())];
        }
        if k == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut digits = vec![0usize; n];
        loop {
            out.push(Assignment(digits.clone()));
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < k {
                    break;
                }
                digits[i] = 0;
            }
        }
    }

    pub fn get(&self, var: u32) -> Option<usize> {
        self.0.get(var as usize - 1).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable x{0} is not bound by the assignment")]
    UnboundVariable(u32),
    #[error("assignment value {value} for x{var} is outside the carrier 0..{size}")]
    ValueOutOfRange { var: u32, value: usize, size: usize },
}

/// Evaluates a term in a model under an assignment.
pub fn eval_in_model(t: &Term, model: &FiniteModel, a: &Assignment) -> Result<usize, EvalError> {
    match t {
        Term::Zero => Ok(model.zero_elem),
        Term::P => Ok(model.p_elem),
        Term::Var(i) => {
            let value = a.get(*i).ok_or(EvalError::UnboundVariable(*i))?;
            if value >= model.size {
                return Err(EvalError::ValueOutOfRange {
                    var: *i,
                    value,
                    size: model.size,
                });
            }
            Ok(value)
        }
        Term::Star(l, r) => {
            let lv = eval_in_model(l, model, a)?;
            let rv = eval_in_model(r, model, a)?;
            Ok(model.table[lv][rv])
        }
    }
}

/// The evaluation map from the free algebra on `n` generators into a model,
/// with its exhaustively verified homomorphism report.
#[derive(Debug, Clone, Serialize)]
pub struct InducedMap {
    pub images: BTreeMap<Element, CarrierIndex>,
    pub report: HomReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct HomReport {
    pub pass: bool,
    pub counterexample: Option<HomViolation>,
    pub checked: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HomViolation {
    pub left: Element,
    pub right: Element,
    pub image_of_product: CarrierIndex,
    pub product_of_images: CarrierIndex,
}

impl fmt::Display for HomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None if self.pass => write!(f, "pass ({} products checked)", self.checked),
            None => write!(f, "fail ({} products checked)", self.checked),
            Some(v) => write!(
                f,
                "fail: h([{}] * [{}]) = {} but h([{}]) * h([{}]) = {} ({} products checked)",
                v.left,
                v.right,
                v.image_of_product,
                v.left,
                v.right,
                v.product_of_images,
                self.checked
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InducedMapError {
    #[error(transparent)]
    Guard(#[from] GuardError),
    #[error(transparent)]
    Eval(EvalError),
}

/// Maps every element of the free algebra on `n` generators into the model
/// by evaluating its canonical term, then exhaustively verifies that the map
/// preserves the constants and every product.
pub fn induced_map(
    n: u32,
    model: &FiniteModel,
    a: &Assignment,
) -> Result<InducedMap, InducedMapError> {
    let carrier = enumerate_free(n)?;
    let mut images = BTreeMap::new();
    for e in &carrier {
        let image = eval_in_model(&canonical_term(e), model, a).map_err(InducedMapError::Eval)?;
        images.insert(e.clone(), CarrierIndex(image));
    }

    let mut checked = 0u64;
    let mut counterexample = None;
    let h = |e: &Element| images[e].0;

    // constants first
    checked += 2;
    let pass_constants = h(&Element::Zero) == model.zero_elem && h(&Element::p()) == model.p_elem;
    if pass_constants {
        'outer: for e1 in &carrier {
            for e2 in &carrier {
                checked += 1;
                let image_of_product = h(&star(e1, e2));
                let product_of_images = model.table[h(e1)][h(e2)];
                if image_of_product != product_of_images {
                    counterexample = Some(HomViolation {
                        left: e1.clone(),
                        right: e2.clone(),
                        image_of_product: CarrierIndex(image_of_product),
                        product_of_images: CarrierIndex(product_of_images),
                    });
                    break 'outer;
                }
            }
        }
    }

    let report = HomReport {
        pass: pass_constants && counterexample.is_none(),
        counterexample,
        checked,
    };
    Ok(InducedMap { images, report })
}

/// Whether the constants and generator letters generate the whole free
/// algebra on `n` generators under the product. Certifies that a
/// homomorphism fixing generators and constants is unique.
pub fn check_generation(n: u32) -> Result<bool, GuardError> {
    check_generation_with_guard(n, crate::free::ENUMERATION_GUARD)
}

/// As [`check_generation`] with an explicit guard.
pub fn check_generation_with_guard(n: u32, guard: u32) -> Result<bool, GuardError> {
    let carrier: BTreeSet<Element> = crate::free::enumerate_free_with_guard(n, guard)?
        .into_iter()
        .collect();
    let mut generated: BTreeSet<Element> = [Element::Zero, Element::p()].into();
    generated.extend((1..=n).map(Element::var));

    let mut frontier: Vec<Element> = generated.iter().cloned().collect();
    while let Some(e) = frontier.pop() {
        let known: Vec<Element> = generated.iter().cloned().collect();
        for other in known {
            for product in [star(&e, &other), star(&other, &e)] {
                if generated.insert(product.clone()) {
                    frontier.push(product);
                }
            }
        }
    }
    Ok(generated == carrier)
}
