//! Membership tests for the axiom classes of partial multiplications.
//!
//! Every check works over any [`LocalityStructure`]: a finite
//! [`FinitePartialMagma`] or a bounded slice of an intensional structure.
//! Quantifiers range over [`LocalityStructure::domain`]; relation tests and
//! products are evaluated exactly, even on products that fall outside the
//! domain. Failures come back as a [`Witness`] naming the violated axiom and
//! the offending elements, chosen as the first violation in domain order.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{ElementId, FinitePartialMagma};

/// A carrier (the quantification domain), a relation and a product defined on related pairs.
pub trait LocalityStructure {
    type Elem: Copy + Eq + fmt::Debug;

    /// Elements the quantifiers range over, in witness-search order.
    fn domain(&self) -> Vec<Self::Elem>;

    fn related(&self, a: Self::Elem, b: Self::Elem) -> bool;

    /// `a·b` when `(a, b)` is related, `None` otherwise.
    fn product(&self, a: Self::Elem, b: Self::Elem) -> Option<Self::Elem>;

    fn label(&self, a: Self::Elem) -> ElementId;

    /// Degenerate tuples are only reported when no other violation exists.
    fn is_degenerate(&self, _elems: &[Self::Elem]) -> bool {
        false
    }
}

impl LocalityStructure for FinitePartialMagma {
    type Elem = usize;

    fn domain(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }

    #[inline]
    fn related(&self, a: usize, b: usize) -> bool {
        self.related_at(a, b)
    }

    #[inline]
    fn product(&self, a: usize, b: usize) -> Option<usize> {
        self.product_at(a, b)
    }

    fn label(&self, a: usize) -> ElementId {
        FinitePartialMagma::label(self, a).clone()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    /// `(a,c),(b,c),(a,b)` related but `(ab,c)` not: left polar of `{c}` not closed.
    LeftPolarClosure,
    /// `(c,a),(c,b),(a,b)` related but `(c,ab)` not: right polar of `{c}` not closed.
    RightPolarClosure,
    LocalityAssociativity,
    StrongLeft,
    StrongRight,
    StrongAssociativity,
    RefinedLeft,
    RefinedRight,
    RefinedAssociativity,
    PartialEquivalence,
    PartialAssociativity,
    Transitivity,
    SubClosure,
    LeftIdeal,
    RightIdeal,
    LocalityMap,
    Multiplicative,
    /// Total associativity of a completed table.
    Associativity,
    StrongZero,
    FoldOrder,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::LeftPolarClosure => "left-polar-closure",
            Axiom::RightPolarClosure => "right-polar-closure",
            Axiom::LocalityAssociativity => "locality-associativity",
            Axiom::StrongLeft => "strong-left",
            Axiom::StrongRight => "strong-right",
            Axiom::StrongAssociativity => "strong-associativity",
            Axiom::RefinedLeft => "refined-left",
            Axiom::RefinedRight => "refined-right",
            Axiom::RefinedAssociativity => "refined-associativity",
            Axiom::PartialEquivalence => "partial-equivalence",
            Axiom::PartialAssociativity => "partial-associativity",
            Axiom::Transitivity => "transitivity",
            Axiom::SubClosure => "sub-closure",
            Axiom::LeftIdeal => "left-ideal",
            Axiom::RightIdeal => "right-ideal",
            Axiom::LocalityMap => "locality-map",
            Axiom::Multiplicative => "multiplicative",
            Axiom::Associativity => "associativity",
            Axiom::StrongZero => "strong-zero",
            Axiom::FoldOrder => "fold-order",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A concrete axiom violation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub axiom: Axiom,
    pub elements: Vec<ElementId>,
    pub detail: &'static str,
}

impl Witness {
    pub fn new(axiom: Axiom, elements: Vec<ElementId>, detail: &'static str) -> Self {
        Witness {
            axiom,
            elements,
            detail,
        }
    }
}

/// `axiom elements`; the alternate form appends the detail code.
impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.axiom)?;
        let e = &self.elements;
        match (self.axiom, e.len()) {
            (Axiom::LeftPolarClosure | Axiom::RightPolarClosure, 3) => write!(f, "U={{{}}} ({},{})", e[2], e[0], e[1])?,
            (Axiom::LocalityAssociativity | Axiom::Associativity, 3) => write!(f, "({},{},{})", e[0], e[1], e[2])?,
            (_, 3) => write!(f, "({},{}),({},{})", e[0], e[1], e[1], e[2])?,
            (_, 2) => write!(f, "({},{})", e[0], e[1])?,
            _ => {
                let parts: Vec<&str> = e.iter().map(ElementId::as_str).collect();
                write!(f, "({})", parts.join(","))?
            }
        }
        if f.alternate() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(Witness),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }

    fn or_else(self, next: impl FnOnce() -> Verdict) -> Verdict {
        match self {
            Verdict::Holds => next(),
            fails => fails,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => f.write_str("yes"),
            Verdict::Fails(w) => write!(f, "no[witness: {w}]"),
        }
    }
}

type Hit = Option<(Axiom, &'static str)>;

fn witness_of<S: LocalityStructure>(s: &S, axiom: Axiom, elems: &[S::Elem], detail: &'static str) -> Witness {
    Witness::new(axiom, elems.iter().map(|&e| s.label(e)).collect(), detail)
}

/// Runs `check` over `tuples`, returning the first non-degenerate violation,
/// else the first degenerate one.
fn first_violation<S, I, const K: usize>(s: &S, tuples: I, mut check: impl FnMut([S::Elem; K]) -> Hit) -> Verdict
where
    S: LocalityStructure,
    I: IntoIterator<Item = [S::Elem; K]>,
{
    let mut fallback = None;
    for t in tuples {
        if let Some((axiom, detail)) = check(t) {
            if !s.is_degenerate(&t) {
                return Verdict::Fails(witness_of(s, axiom, &t, detail));
            }
            fallback.get_or_insert_with(|| witness_of(s, axiom, &t, detail));
        }
    }
    fallback.map_or(Verdict::Holds, Verdict::Fails)
}

fn triples<E: Copy>(dom: &[E]) -> impl Iterator<Item = [E; 3]> + '_ {
    dom.iter()
        .flat_map(move |&a| dom.iter().flat_map(move |&b| dom.iter().map(move |&c| [a, b, c])))
}

fn pairs<'a, E: Copy>(left: &'a [E], right: &'a [E]) -> impl Iterator<Item = [E; 2]> + 'a {
    left.iter().flat_map(move |&a| right.iter().map(move |&b| [a, b]))
}

fn defined<S: LocalityStructure>(s: &S, a: S::Elem, b: S::Elem) -> S::Elem {
    s.product(a, b)
        .unwrap_or_else(|| panic!("product of related pair ({a:?}, {b:?}) is undefined"))
}

// Per-triple axiom evaluations. Each returns the first violated clause at
// `(a, b, c)`; the class scans and witness replay share them.

fn polar_closure_at<S: LocalityStructure>(s: &S, [a, b, c]: [S::Elem; 3]) -> Hit {
    if !s.related(a, b) {
        return None;
    }
    if s.related(a, c) && s.related(b, c) && !s.related(defined(s, a, b), c) {
        return Some((Axiom::LeftPolarClosure, "ab-c-unrelated"));
    }
    if s.related(c, a) && s.related(c, b) && !s.related(c, defined(s, a, b)) {
        return Some((Axiom::RightPolarClosure, "c-ab-unrelated"));
    }
    None
}

fn locality_assoc_at<S: LocalityStructure>(s: &S, [a, b, c]: [S::Elem; 3]) -> Hit {
    if !(s.related(a, b) && s.related(b, c) && s.related(a, c)) {
        return None;
    }
    let lhs = s.product(defined(s, a, b), c);
    let rhs = s.product(a, defined(s, b, c));
    match (lhs, rhs) {
        (Some(l), Some(r)) if l != r => Some((Axiom::LocalityAssociativity, "ab.c-differs-from-a.bc")),
        _ => None,
    }
}

fn strong_at<S: LocalityStructure>(s: &S, [a, b, c]: [S::Elem; 3]) -> Hit {
    if !(s.related(a, b) && s.related(b, c)) {
        return None;
    }
    let (ab, bc) = (defined(s, a, b), defined(s, b, c));
    if !s.related(ab, c) {
        return Some((Axiom::StrongLeft, "ab-c-unrelated"));
    }
    if !s.related(a, bc) {
        return Some((Axiom::StrongRight, "a-bc-unrelated"));
    }
    if s.product(ab, c) != s.product(a, bc) {
        return Some((Axiom::StrongAssociativity, "ab.c-differs-from-a.bc"));
    }
    None
}

fn refined_at<S: LocalityStructure>(s: &S, [a, b, c]: [S::Elem; 3]) -> Hit {
    let (rab, rbc) = (s.related(a, b), s.related(b, c));
    if rab {
        let rabc = s.related(defined(s, a, b), c);
        if rbc && !rabc {
            return Some((Axiom::RefinedLeft, "b-c-related-but-ab-c-unrelated"));
        }
        if !rbc && rabc {
            return Some((Axiom::RefinedLeft, "ab-c-related-but-b-c-unrelated"));
        }
    }
    if rbc {
        let rabc = s.related(a, defined(s, b, c));
        if rab && !rabc {
            return Some((Axiom::RefinedRight, "a-b-related-but-a-bc-unrelated"));
        }
        if !rab && rabc {
            return Some((Axiom::RefinedRight, "a-bc-related-but-a-b-unrelated"));
        }
    }
    if rab && rbc && s.product(defined(s, a, b), c) != s.product(a, defined(s, b, c)) {
        return Some((Axiom::RefinedAssociativity, "ab.c-differs-from-a.bc"));
    }
    None
}

fn partial_at<S: LocalityStructure>(s: &S, [a, b, c]: [S::Elem; 3]) -> Hit {
    if !(s.related(a, b) && s.related(b, c)) {
        return None;
    }
    let (ab, bc) = (defined(s, a, b), defined(s, b, c));
    match (s.related(ab, c), s.related(a, bc)) {
        (false, true) => Some((Axiom::PartialEquivalence, "ab-c-unrelated-but-a-bc-related")),
        (true, false) => Some((Axiom::PartialEquivalence, "ab-c-related-but-a-bc-unrelated")),
        (true, true) if s.product(ab, c) != s.product(a, bc) => {
            Some((Axiom::PartialAssociativity, "ab.c-differs-from-a.bc"))
        }
        _ => None,
    }
}

fn transitive_at<S: LocalityStructure>(s: &S, [a, b, c]: [S::Elem; 3]) -> Hit {
    (s.related(a, b) && s.related(b, c) && !s.related(a, c)).then_some((Axiom::Transitivity, "a-c-unrelated"))
}

/// Polar closure on singletons, then the locality associative law.
///
/// Closure of `^⊤U` and `U^⊤` under the product for every subset `U`
/// reduces to singletons because `^⊤U` is the intersection of the `^⊤{u}`.
/// Associativity is only evaluated once closure holds, which guarantees both
/// sides are defined.
pub fn is_locality_semigroup<S: LocalityStructure>(s: &S) -> Verdict {
    let dom = s.domain();
    first_violation(s, triples(&dom), |t| polar_closure_at(s, t))
        .or_else(|| first_violation(s, triples(&dom), |t| locality_assoc_at(s, t)))
}

pub fn is_strong_locality_semigroup<S: LocalityStructure>(s: &S) -> Verdict {
    let dom = s.domain();
    first_violation(s, triples(&dom), |t| strong_at(s, t))
}

pub fn is_refined_locality_semigroup<S: LocalityStructure>(s: &S) -> Verdict {
    let dom = s.domain();
    first_violation(s, triples(&dom), |t| refined_at(s, t))
}

pub fn is_partial_semigroup<S: LocalityStructure>(s: &S) -> Verdict {
    let dom = s.domain();
    first_violation(s, triples(&dom), |t| partial_at(s, t))
}

pub fn is_transitive<S: LocalityStructure>(s: &S) -> Verdict {
    let dom = s.domain();
    first_violation(s, triples(&dom), |t| transitive_at(s, t))
}

/// Re-evaluates a witness produced by one of the intrinsic class checks.
/// Returns whether the violation reproduces.
pub fn replay(m: &FinitePartialMagma, w: &Witness) -> Result<bool> {
    let idx = w.elements.iter().map(|e| m.index(e)).collect::<Result<Vec<_>>>()?;
    let t: [usize; 3] = match idx.as_slice() {
        &[a, b, c] => [a, b, c],
        _ => return Err(Error::Domain(format!("{} witnesses carry three elements", w.axiom))),
    };
    let hit = match w.axiom {
        Axiom::LeftPolarClosure | Axiom::RightPolarClosure => polar_closure_at(m, t),
        Axiom::LocalityAssociativity => locality_assoc_at(m, t),
        Axiom::StrongLeft | Axiom::StrongRight | Axiom::StrongAssociativity => strong_at(m, t),
        Axiom::RefinedLeft | Axiom::RefinedRight | Axiom::RefinedAssociativity => refined_at(m, t),
        Axiom::PartialEquivalence | Axiom::PartialAssociativity => partial_at(m, t),
        Axiom::Transitivity => transitive_at(m, t),
        other => {
            return Err(Error::Domain(format!(
                "{other} witnesses cannot be replayed intrinsically"
            )))
        }
    };
    Ok(hit.map(|(axiom, _)| axiom) == Some(w.axiom))
}

/// Which side of the polar-closure condition a subset violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolarSide {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarViolation {
    pub side: PolarSide,
    pub subset: Vec<ElementId>,
    pub pair: (ElementId, ElementId),
    pub product: ElementId,
}

impl fmt::Display for PolarViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            PolarSide::Left => "left",
            PolarSide::Right => "right",
        };
        let u: Vec<&str> = self.subset.iter().map(ElementId::as_str).collect();
        write!(
            f,
            "{side} polar of U={{{}}} not closed: ({},{}) -> {}",
            u.join(","),
            self.pair.0,
            self.pair.1,
            self.product
        )
    }
}

pub const MAX_SUBSET_SCAN: usize = 16;

/// Literal evaluation of polar closure over every subset `U` of the carrier.
/// Exponential; kept as an independent check of the singleton reduction in
/// [`is_locality_semigroup`].
pub fn check_polar_closure_subsets(m: &FinitePartialMagma) -> Result<Option<PolarViolation>> {
    let n = m.len();
    if n > MAX_SUBSET_SCAN {
        return Err(Error::Capacity {
            what: "carrier size for subset scan",
            size: n,
            limit: MAX_SUBSET_SCAN,
        });
    }
    let full: u32 = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    // left_of[v]: elements x with (x, v) related; right_of[v]: x with (v, x) related.
    let row = |x: usize| {
        (0..n)
            .filter(move |&v| m.related_at(x, v))
            .fold(0u32, |acc, v| acc | 1 << v)
    };
    let col = |v: usize| (0..n).filter(|&x| m.related_at(x, v)).fold(0u32, |acc, x| acc | 1 << x);
    let left_of: Vec<u32> = (0..n).map(col).collect();
    let right_of: Vec<u32> = (0..n).map(row).collect();
    let members = |mask: u32| (0..n).filter(move |&i| mask & (1 << i) != 0);
    for u in 0..=full {
        for (side, cols) in [(PolarSide::Left, &left_of), (PolarSide::Right, &right_of)] {
            let polar = members(u).fold(full, |acc, v| acc & cols[v]);
            for a in members(polar) {
                for b in members(polar) {
                    if let Some(ab) = m.product_at(a, b) {
                        if polar & (1 << ab) == 0 {
                            return Ok(Some(PolarViolation {
                                side,
                                subset: members(u).map(|i| m.label(i).clone()).collect(),
                                pair: (m.label(a).clone(), m.label(b).clone()),
                                product: m.label(ab).clone(),
                            }));
                        }
                    }
                }
            }
        }
        if u == full {
            break;
        }
    }
    Ok(None)
}

/// Left, right and two-sided identities and zeros, each in domain order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Units {
    pub left_identities: Vec<ElementId>,
    pub right_identities: Vec<ElementId>,
    pub identities: Vec<ElementId>,
    pub left_zeros: Vec<ElementId>,
    pub right_zeros: Vec<ElementId>,
    pub zeros: Vec<ElementId>,
}

pub(crate) fn identity_elems<S: LocalityStructure>(s: &S, dom: &[S::Elem]) -> Vec<S::Elem> {
    dom.iter()
        .copied()
        .filter(|&e| {
            dom.iter()
                .all(|&a| s.product(e, a) == Some(a) && s.product(a, e) == Some(a))
        })
        .collect()
}

pub fn find_units<S: LocalityStructure>(s: &S) -> Units {
    let dom = s.domain();
    let pick = |pred: &dyn Fn(S::Elem, S::Elem) -> bool| -> Vec<ElementId> {
        dom.iter()
            .copied()
            .filter(|&e| dom.iter().all(|&a| pred(e, a)))
            .map(|e| s.label(e))
            .collect()
    };
    let left_identities = pick(&|e, a| s.product(e, a) == Some(a));
    let right_identities = pick(&|e, a| s.product(a, e) == Some(a));
    let left_zeros = pick(&|e, a| s.product(e, a) == Some(e));
    let right_zeros = pick(&|e, a| s.product(a, e) == Some(e));
    let both = |l: &[ElementId], r: &[ElementId]| l.iter().filter(|x| r.contains(x)).cloned().collect();
    Units {
        identities: both(&left_identities, &right_identities),
        zeros: both(&left_zeros, &right_zeros),
        left_identities,
        right_identities,
        left_zeros,
        right_zeros,
    }
}

/// Flag pattern of a [`ClassReport`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Flags {
    pub locality: bool,
    pub strong: bool,
    pub partial: bool,
    pub refined: bool,
    pub transitive: bool,
}

impl Flags {
    /// `LSPRT` with `-` for each false flag.
    pub fn code(&self) -> String {
        [
            (self.locality, 'L'),
            (self.strong, 'S'),
            (self.partial, 'P'),
            (self.refined, 'R'),
            (self.transitive, 'T'),
        ]
        .iter()
        .map(|&(on, c)| if on { c } else { '-' })
        .collect()
    }

    pub fn from_code(code: &str) -> Option<Flags> {
        let c: Vec<char> = code.chars().collect();
        if c.len() != 5 {
            return None;
        }
        let bit = |i: usize, letter: char| match c[i] {
            x if x == letter => Some(true),
            '-' => Some(false),
            _ => None,
        };
        Some(Flags {
            locality: bit(0, 'L')?,
            strong: bit(1, 'S')?,
            partial: bit(2, 'P')?,
            refined: bit(3, 'R')?,
            transitive: bit(4, 'T')?,
        })
    }

    /// The class inclusions every structure must satisfy.
    pub fn respects_inclusions(&self) -> bool {
        (!self.refined || self.strong)
            && (!self.strong || (self.locality && self.partial))
            && (!(self.transitive && self.locality) || self.partial)
    }
}

impl fmt::Display for Flags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassReport {
    pub locality: Verdict,
    pub strong: Verdict,
    pub refined: Verdict,
    pub partial_semigroup: Verdict,
    pub transitive: Verdict,
    pub units: Units,
}

impl ClassReport {
    pub fn flags(&self) -> Flags {
        Flags {
            locality: self.locality.holds(),
            strong: self.strong.holds(),
            partial: self.partial_semigroup.holds(),
            refined: self.refined.holds(),
            transitive: self.transitive.holds(),
        }
    }

    pub fn verdicts(&self) -> [(&'static str, &Verdict); 5] {
        [
            ("locality", &self.locality),
            ("strong", &self.strong),
            ("refined", &self.refined),
            ("partial", &self.partial_semigroup),
            ("transitive", &self.transitive),
        ]
    }
}

fn classify_flags_only<S: LocalityStructure>(s: &S) -> ClassReport {
    ClassReport {
        locality: is_locality_semigroup(s),
        strong: is_strong_locality_semigroup(s),
        refined: is_refined_locality_semigroup(s),
        partial_semigroup: is_partial_semigroup(s),
        transitive: is_transitive(s),
        units: Units::default(),
    }
}

/// All five class checks plus identity and zero detection.
///
/// Panics if the result breaks refined ⇒ strong ⇒ (locality ∧ partial) or
/// transitive ∧ locality ⇒ partial.
pub fn classify<S: LocalityStructure>(s: &S) -> ClassReport {
    let mut report = classify_flags_only(s);
    let flags = report.flags();
    assert!(
        flags.respects_inclusions(),
        "class inclusions violated by pattern {flags}: {report:?}"
    );
    report.units = find_units(s);
    report
}

/// [`classify`] without identity/zero detection, for bulk enumeration.
pub fn classify_flags<S: LocalityStructure>(s: &S) -> Flags {
    let flags = classify_flags_only(s).flags();
    assert!(
        flags.respects_inclusions(),
        "class inclusions violated by pattern {flags}"
    );
    flags
}

fn list(xs: &[ElementId]) -> String {
    if xs.is_empty() {
        "-".into()
    } else {
        xs.iter().map(ElementId::as_str).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for ClassReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CLASS")?;
        for (name, v) in self.verdicts() {
            write!(f, " {name}={v}")?;
        }
        writeln!(f)?;
        for (name, v) in self.verdicts() {
            if let Some(w) = v.witness() {
                writeln!(f, "WITNESS {name} {w:#}")?;
            }
        }
        let u = &self.units;
        writeln!(
            f,
            "IDENTITIES left={} right={} two-sided={}",
            list(&u.left_identities),
            list(&u.right_identities),
            list(&u.identities)
        )?;
        writeln!(
            f,
            "ZEROS left={} right={} two-sided={}",
            list(&u.left_zeros),
            list(&u.right_zeros),
            list(&u.zeros)
        )
    }
}

/// `(φ×φ)(⊤₁) ⊆ ⊤₂`, quantified over the source domain.
pub fn is_locality_map<S, T>(src: &S, dst: &T, phi: impl Fn(S::Elem) -> T::Elem) -> Verdict
where
    S: LocalityStructure,
    T: LocalityStructure,
{
    let dom = src.domain();
    first_violation(src, pairs(&dom, &dom), |[a, b]| {
        (src.related(a, b) && !dst.related(phi(a), phi(b))).then_some((Axiom::LocalityMap, "image-pair-unrelated"))
    })
}

/// Locality map that also satisfies `φ(ab) = φ(a)φ(b)` on every related pair.
pub fn is_locality_homomorphism<S, T>(src: &S, dst: &T, phi: impl Fn(S::Elem) -> T::Elem) -> Verdict
where
    S: LocalityStructure,
    T: LocalityStructure,
{
    let dom = src.domain();
    first_violation(src, pairs(&dom, &dom), |[a, b]| {
        if !src.related(a, b) {
            return None;
        }
        let (x, y) = (phi(a), phi(b));
        if !dst.related(x, y) {
            return Some((Axiom::LocalityMap, "image-pair-unrelated"));
        }
        (dst.product(x, y) != Some(phi(defined(src, a, b))))
            .then_some((Axiom::Multiplicative, "image-of-product-differs"))
    })
}

/// Resolves a label map between two finite magmas into an index table.
pub fn resolve_map(
    src: &FinitePartialMagma,
    dst: &FinitePartialMagma,
    map: &BTreeMap<ElementId, ElementId>,
) -> Result<Vec<usize>> {
    if let Some(k) = map.keys().find(|k| !src.contains(k)) {
        return Err(Error::UnknownElement(k.clone()));
    }
    src.labels()
        .iter()
        .map(|a| {
            let img = map.get(a).ok_or_else(|| Error::NotTotal(a.clone()))?;
            dst.index(img)
        })
        .collect()
}

fn subset_members<S: LocalityStructure>(s: &S, member: &impl Fn(S::Elem) -> bool) -> Result<Vec<S::Elem>> {
    let a: Vec<_> = s.domain().into_iter().filter(|&x| member(x)).collect();
    if a.is_empty() {
        return Err(Error::EmptySubset);
    }
    Ok(a)
}

/// `(a, b)` related in `A` implies `ab ∈ A`.
pub fn is_sub_locality_semigroup<S: LocalityStructure>(s: &S, member: impl Fn(S::Elem) -> bool) -> Result<Verdict> {
    let a = subset_members(s, &member)?;
    Ok(first_violation(s, pairs(&a, &a), |[x, y]| {
        (s.related(x, y) && !member(defined(s, x, y))).then_some((Axiom::SubClosure, "product-outside-subset"))
    }))
}

/// `(s, a)` related with `a ∈ A` implies `sa ∈ A`.
pub fn is_left_locality_ideal<S: LocalityStructure>(s: &S, member: impl Fn(S::Elem) -> bool) -> Result<Verdict> {
    let a = subset_members(s, &member)?;
    let dom = s.domain();
    Ok(first_violation(s, pairs(&dom, &a), |[x, y]| {
        (s.related(x, y) && !member(defined(s, x, y))).then_some((Axiom::LeftIdeal, "product-outside-subset"))
    }))
}

/// `(a, s)` related with `a ∈ A` implies `as ∈ A`.
pub fn is_right_locality_ideal<S: LocalityStructure>(s: &S, member: impl Fn(S::Elem) -> bool) -> Result<Verdict> {
    let a = subset_members(s, &member)?;
    let dom = s.domain();
    Ok(first_violation(s, pairs(&a, &dom), |[x, y]| {
        (s.related(x, y) && !member(defined(s, x, y))).then_some((Axiom::RightIdeal, "product-outside-subset"))
    }))
}

pub fn is_locality_ideal<S: LocalityStructure>(s: &S, member: impl Fn(S::Elem) -> bool) -> Result<Verdict> {
    Ok(
        is_left_locality_ideal(s, &member)?
            .or_else(|| is_right_locality_ideal(s, &member).expect("subset is nonempty")),
    )
}

/// Membership closure for a label subset of a finite magma.
pub fn subset_member(m: &FinitePartialMagma, subset: &[ElementId]) -> Result<impl Fn(usize) -> bool> {
    let idx = m.indices(subset)?;
    let mut mask = vec![false; m.len()];
    for i in idx {
        mask[i] = true;
    }
    Ok(move |i: usize| mask[i])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> ElementId {
        ElementId::from(s)
    }

    fn magma(elements: &[&str], ops: &[(&str, &str, &str)]) -> FinitePartialMagma {
        FinitePartialMagma::new(
            elements.iter().copied(),
            ops.iter().map(|&(a, b, c)| (id(a), id(b), id(c))),
        )
        .unwrap()
    }

    fn ex3_6() -> FinitePartialMagma {
        magma(&["0", "1"], &[("0", "0", "0"), ("0", "1", "1"), ("1", "0", "1")])
    }

    fn ex3_8() -> FinitePartialMagma {
        magma(&["0", "1"], &[("0", "0", "0"), ("0", "1", "0"), ("1", "0", "1")])
    }

    fn psg_not_lsg() -> FinitePartialMagma {
        magma(&["a", "b"], &[("a", "a", "a"), ("b", "b", "a")])
    }

    fn ex4_3() -> FinitePartialMagma {
        magma(&["a", "b"], &[("a", "a", "a"), ("a", "b", "a")])
    }

    fn empty_relation() -> FinitePartialMagma {
        magma(&["a", "b"], &[])
    }

    fn w(axiom: Axiom, elems: &[&str]) -> (Axiom, Vec<ElementId>) {
        (axiom, elems.iter().map(|e| id(e)).collect())
    }

    fn got(v: &Verdict) -> (Axiom, Vec<ElementId>) {
        let w = v.witness().expect("expected a failing verdict");
        (w.axiom, w.elements.clone())
    }

    #[test]
    fn locality_semigroup_verdicts() {
        assert!(is_locality_semigroup(&ex3_8()).holds());
        assert!(is_locality_semigroup(&empty_relation()).holds());
        let v = is_locality_semigroup(&psg_not_lsg());
        assert_eq!(got(&v), w(Axiom::LeftPolarClosure, &["b", "b", "b"]));
        assert_eq!(v.witness().unwrap().to_string(), "left-polar-closure U={b} (b,b)");
    }

    #[test]
    fn subset_scan_agrees_on_fixtures() {
        assert_eq!(check_polar_closure_subsets(&ex3_8()).unwrap(), None);
        assert_eq!(check_polar_closure_subsets(&empty_relation()).unwrap(), None);
        let v = check_polar_closure_subsets(&psg_not_lsg()).unwrap().unwrap();
        assert_eq!(v.subset, vec![id("b")]);
        assert_eq!(v.side, PolarSide::Left);
        assert_eq!(v.product, id("a"));
        let big = FinitePartialMagma::new((0..17).map(|i| ElementId::new(&i.to_string()).unwrap()), []).unwrap();
        assert!(matches!(check_polar_closure_subsets(&big), Err(Error::Capacity { .. })));
    }

    #[test]
    fn strong_verdicts() {
        let v = is_strong_locality_semigroup(&ex3_6());
        assert_eq!(got(&v), w(Axiom::StrongLeft, &["1", "0", "1"]));
        assert_eq!(v.to_string(), "no[witness: strong-left (1,0),(0,1)]");
        assert!(is_strong_locality_semigroup(&ex4_3()).holds());
        assert!(is_strong_locality_semigroup(&empty_relation()).holds());
    }

    #[test]
    fn refined_verdicts() {
        let v = is_refined_locality_semigroup(&ex4_3());
        assert_eq!(got(&v), w(Axiom::RefinedLeft, &["a", "b", "a"]));
        assert_eq!(v.witness().unwrap().detail, "ab-c-related-but-b-c-unrelated");
        let z3 = FinitePartialMagma::total(["0", "1", "2"], |a, b| {
            let s = (a.as_str().parse::<u32>().unwrap() + b.as_str().parse::<u32>().unwrap()) % 3;
            ElementId::new(&s.to_string()).unwrap()
        })
        .unwrap();
        assert!(is_refined_locality_semigroup(&z3).holds());
    }

    #[test]
    fn partial_semigroup_verdicts() {
        assert!(is_partial_semigroup(&ex3_6()).holds());
        assert!(is_partial_semigroup(&psg_not_lsg()).holds());
        let v = is_partial_semigroup(&ex3_8());
        assert_eq!(got(&v), w(Axiom::PartialEquivalence, &["1", "0", "1"]));
    }

    #[test]
    fn transitivity_verdicts() {
        let v = is_transitive(&ex3_8());
        assert_eq!(got(&v), w(Axiom::Transitivity, &["1", "0", "1"]));
        let full = FinitePartialMagma::total(["a", "b"], |a, _| a.clone()).unwrap();
        assert!(is_transitive(&full).holds());
    }

    #[test]
    fn witnesses_replay() {
        for (m, v) in [
            (psg_not_lsg(), is_locality_semigroup(&psg_not_lsg())),
            (ex3_6(), is_strong_locality_semigroup(&ex3_6())),
            (ex4_3(), is_refined_locality_semigroup(&ex4_3())),
            (ex3_8(), is_partial_semigroup(&ex3_8())),
            (ex3_8(), is_transitive(&ex3_8())),
        ] {
            assert!(replay(&m, v.witness().unwrap()).unwrap());
        }
        // a witness of the wrong class does not replay
        let bogus = Witness::new(Axiom::StrongLeft, vec![id("0"), id("0"), id("0")], "");
        assert!(!replay(&ex3_6(), &bogus).unwrap());
    }

    #[test]
    fn units_follow_the_all_elements_definition() {
        let empty = magma(&["a"], &[]);
        assert_eq!(find_units(&empty), Units::default());
        let u = find_units(&ex3_6());
        assert_eq!(u.identities, vec![id("0")]);
        let lz = magma(&["a", "b"], &[("a", "a", "a"), ("a", "b", "a"), ("b", "a", "a")]);
        let u = find_units(&lz);
        assert_eq!(u.zeros, vec![id("a")]);
        assert_eq!(u.left_zeros, vec![id("a")]);
    }

    #[test]
    fn classify_reports_all_flags() {
        let r = classify(&ex3_6());
        assert_eq!(
            r.flags(),
            Flags {
                locality: true,
                strong: false,
                partial: true,
                refined: false,
                transitive: false
            }
        );
        let r = classify(&ex4_3());
        assert!(r.strong.holds() && !r.refined.holds());
        let r = classify(&empty_relation());
        assert_eq!(r.flags().code(), "LSPRT");
        assert!(r
            .to_string()
            .starts_with("CLASS locality=yes strong=yes refined=yes partial=yes transitive=yes\n"));
    }

    #[test]
    fn flag_codes_round_trip() {
        for bits in 0..32u8 {
            let f = Flags {
                locality: bits & 1 != 0,
                strong: bits & 2 != 0,
                partial: bits & 4 != 0,
                refined: bits & 8 != 0,
                transitive: bits & 16 != 0,
            };
            assert_eq!(Flags::from_code(&f.code()), Some(f));
        }
        assert_eq!(Flags::from_code("LSX--"), None);
    }

    #[test]
    fn identity_map_is_a_homomorphism() {
        for m in [ex3_6(), ex3_8(), ex4_3(), psg_not_lsg()] {
            assert!(is_locality_homomorphism(&m, &m, |i| i).holds());
        }
    }

    #[test]
    fn maps_must_be_total() {
        let m = ex3_6();
        let partial: BTreeMap<_, _> = [(id("0"), id("0"))].into_iter().collect();
        assert_eq!(resolve_map(&m, &m, &partial), Err(Error::NotTotal(id("1"))));
        // collapsing 1 to 0 is a homomorphism into the one-point full magma
        let point = magma(&["p"], &[("p", "p", "p")]);
        let phi: BTreeMap<_, _> = [(id("0"), id("p")), (id("1"), id("p"))].into_iter().collect();
        let idx = resolve_map(&m, &point, &phi).unwrap();
        assert!(is_locality_homomorphism(&m, &point, |i| idx[i]).holds());
        // the reverse direction is not even a locality map into the empty relation
        let empty = magma(&["p"], &[]);
        let v = is_locality_map(&m, &empty, |_| 0);
        assert_eq!(got(&v), w(Axiom::LocalityMap, &["0", "0"]));
    }

    #[test]
    fn ideals_in_a_finite_magma() {
        let m = ex3_6();
        let whole = subset_member(&m, m.labels()).unwrap();
        assert!(is_sub_locality_semigroup(&m, &whole).unwrap().holds());
        assert!(is_locality_ideal(&m, &whole).unwrap().holds());
        let zero = subset_member(&m, &[id("0")]).unwrap();
        assert!(is_sub_locality_semigroup(&m, &zero).unwrap().holds());
        let v = is_left_locality_ideal(&m, &zero).unwrap();
        assert_eq!(got(&v), w(Axiom::LeftIdeal, &["1", "0"]));
        assert_eq!(is_sub_locality_semigroup(&m, |_| false), Err(Error::EmptySubset));
    }
}
