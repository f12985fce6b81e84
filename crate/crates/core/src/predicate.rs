//! Intensional structures on natural numbers and power sets, checked on
//! bounded slices.
//!
//! A slice quantifies over `{x ∈ universe | x ≤ bound}` but evaluates the
//! relation and products exactly, so products may leave the slice. Positive
//! verdicts only mean no counterexample exists within the bound.

use std::fmt;

use crate::check::{classify, identity_elems, Axiom, ClassReport, LocalityStructure, Verdict, Witness};
use crate::error::{Error, Result};
use crate::model::{ElementId, FinitePartialMagma};

/// Largest bound accepted by [`PredicateMagma::slice`]; checks are cubic in it.
pub const MAX_SLICE_BOUND: u64 = 2000;

/// Largest base set accepted by [`powerset_magma`].
pub const MAX_POWERSET_BASE: usize = 4;

type Relation = Box<dyn Fn(u64, u64) -> bool + Send + Sync>;
type Product = Box<dyn Fn(u64, u64) -> u64 + Send + Sync>;

/// A locality set with partial product on a subset of the naturals, given by
/// predicates.
pub struct PredicateMagma {
    name: &'static str,
    least: u64,
    relation: Relation,
    product: Product,
}

impl fmt::Debug for PredicateMagma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PredicateMagma")
            .field("name", &self.name)
            .field("least", &self.least)
            .finish_non_exhaustive()
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn multiply(a: u64, b: u64) -> u64 {
    a.checked_mul(b)
        .unwrap_or_else(|| panic!("product {a}·{b} overflows u64"))
}

/// `N⁺` with `(a, b)` related iff `gcd(a, b) = 1`, under multiplication.
pub fn coprime_magma() -> PredicateMagma {
    PredicateMagma {
        name: "coprime",
        least: 1,
        relation: Box::new(|a, b| gcd(a, b) == 1),
        product: Box::new(multiply),
    }
}

/// `N` with coprime pairs plus every pair involving `0`, under multiplication.
pub fn coprime_with_zero() -> PredicateMagma {
    PredicateMagma {
        name: "coprime-with-zero",
        least: 0,
        relation: Box::new(|a, b| a == 0 || b == 0 || gcd(a, b) == 1),
        product: Box::new(multiply),
    }
}

/// `N⁺` with the full relation under multiplication.
pub fn full_multiplication() -> PredicateMagma {
    PredicateMagma {
        name: "multiplication",
        least: 1,
        relation: Box::new(|_, _| true),
        product: Box::new(multiply),
    }
}

impl PredicateMagma {
    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn contains(&self, x: u64) -> bool {
        x >= self.least
    }

    pub fn related(&self, a: u64, b: u64) -> bool {
        (self.relation)(a, b)
    }

    pub fn product(&self, a: u64, b: u64) -> Option<u64> {
        self.related(a, b).then(|| (self.product)(a, b))
    }

    /// The elements `≤ bound`, in increasing order.
    pub fn slice(&self, bound: u64) -> Result<Slice<'_>> {
        if bound > MAX_SLICE_BOUND {
            return Err(Error::Capacity {
                what: "slice bound",
                size: bound as usize,
                limit: MAX_SLICE_BOUND as usize,
            });
        }
        let elems: Vec<u64> = (self.least..=bound).collect();
        if elems.is_empty() {
            return Err(Error::Domain(format!("no element of {} is ≤ {bound}", self.name)));
        }
        let mut slice = Slice {
            magma: self,
            bound,
            elems,
            identities: Vec::new(),
        };
        slice.identities = identity_elems(&slice, &slice.elems);
        Ok(slice)
    }
}

/// A bounded view of a [`PredicateMagma`].
#[derive(Debug)]
pub struct Slice<'a> {
    magma: &'a PredicateMagma,
    bound: u64,
    elems: Vec<u64>,
    identities: Vec<u64>,
}

impl Slice<'_> {
    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn elements(&self) -> &[u64] {
        &self.elems
    }
}

impl LocalityStructure for Slice<'_> {
    type Elem = u64;

    fn domain(&self) -> Vec<u64> {
        self.elems.clone()
    }

    fn related(&self, a: u64, b: u64) -> bool {
        self.magma.related(a, b)
    }

    fn product(&self, a: u64, b: u64) -> Option<u64> {
        self.magma.product(a, b)
    }

    fn label(&self, a: u64) -> ElementId {
        ElementId::new(&a.to_string()).expect("decimal labels are valid")
    }

    /// Tuples repeating an element or containing an identity of the slice.
    fn is_degenerate(&self, elems: &[u64]) -> bool {
        elems.iter().any(|e| self.identities.contains(e))
            || elems.iter().enumerate().any(|(i, e)| elems[..i].contains(e))
    }
}

/// A [`ClassReport`] whose positive verdicts hold only within `bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledReport {
    pub structure: &'static str,
    pub bound: u64,
    pub report: ClassReport,
}

impl fmt::Display for SampledReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "STRUCTURE {} within bound {}", self.structure, self.bound)?;
        write!(f, "{}", self.report)
    }
}

pub fn sampled_classify(p: &PredicateMagma, bound: u64) -> Result<SampledReport> {
    let slice = p.slice(bound)?;
    Ok(SampledReport {
        structure: p.name,
        bound,
        report: classify(&slice),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersection,
}

impl std::str::FromStr for SetOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "union" => Ok(SetOp::Union),
            "intersection" => Ok(SetOp::Intersection),
            other => Err(Error::Domain(format!("unknown set operation `{other}`"))),
        }
    }
}

fn subset_label(bits: u32, base: usize) -> ElementId {
    let members: Vec<String> = (0..base)
        .filter(|i| bits & (1 << i) != 0)
        .map(|i| (i + 1).to_string())
        .collect();
    ElementId::new(&format!("{{{}}}", members.join(","))).expect("set labels are valid")
}

/// Subsets of `{1, …, base}` related by inclusion, multiplied by `op`.
pub fn powerset_magma(base: usize, op: SetOp) -> Result<FinitePartialMagma> {
    if base > MAX_POWERSET_BASE {
        return Err(Error::Capacity {
            what: "power set base",
            size: base,
            limit: MAX_POWERSET_BASE,
        });
    }
    let sets: Vec<u32> = (0..1u32 << base).collect();
    let mut products = Vec::new();
    for &a in &sets {
        for &b in sets.iter().filter(|&&b| a & !b == 0) {
            let c = match op {
                SetOp::Union => a | b,
                SetOp::Intersection => a & b,
            };
            products.push((subset_label(a, base), subset_label(b, base), subset_label(c, base)));
        }
    }
    FinitePartialMagma::new(sets.iter().map(|&s| subset_label(s, base)), products)
}

/// Euler's totient by counting `1 ≤ k ≤ n` with `gcd(k, n) = 1`.
pub fn totient(n: u64) -> u64 {
    (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64
}

/// `φ(ab) = φ(a)φ(b)` for all coprime `a, b ≥ 1` with `ab ≤ bound`.
pub fn totient_hom_check(bound: u64) -> Result<Verdict> {
    if bound < 2 {
        return Err(Error::Domain(format!("totient bound must be at least 2, got {bound}")));
    }
    if bound > MAX_SLICE_BOUND {
        return Err(Error::Capacity {
            what: "totient bound",
            size: bound as usize,
            limit: MAX_SLICE_BOUND as usize,
        });
    }
    let phi: Vec<u64> = (0..=bound).map(totient).collect();
    for a in 1..=bound {
        for b in (1..=bound / a).filter(|&b| gcd(a, b) == 1) {
            if phi[(a * b) as usize] != phi[a as usize] * phi[b as usize] {
                let label = |x: u64| ElementId::new(&x.to_string()).expect("decimal labels are valid");
                return Ok(Verdict::Fails(Witness::new(
                    Axiom::Multiplicative,
                    vec![label(a), label(b)],
                    "phi-ab-differs-from-phi-a-phi-b",
                )));
            }
        }
    }
    Ok(Verdict::Holds)
}
