//! Finite locality sets carrying a partial binary operation.
//!
//! A [`FinitePartialMagma`] stores its carrier as a label-sorted list and its
//! operation as a dense `n x n` table of optional products. The locality
//! relation is exactly the set of cells holding a product, so a related pair
//! without a product cannot be represented.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Opaque, totally ordered element label.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(Arc<str>);

impl ElementId {
    pub fn new(label: &str) -> Result<Self> {
        if label.is_empty() || label.chars().any(|c| c.is_whitespace() || c == '#') {
            return Err(Error::InvalidLabel(label.to_string()));
        }
        Ok(ElementId(Arc::from(label)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// Panics on an invalid label; meant for literals in code and tests.
impl From<&str> for ElementId {
    fn from(label: &str) -> Self {
        ElementId::new(label).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl From<&ElementId> for ElementId {
    fn from(id: &ElementId) -> Self {
        id.clone()
    }
}

/// A set of ordered pairs of labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LocalityRelation {
    pairs: BTreeSet<(ElementId, ElementId)>,
}

impl LocalityRelation {
    pub fn new(pairs: impl IntoIterator<Item = (ElementId, ElementId)>) -> Self {
        LocalityRelation {
            pairs: pairs.into_iter().collect(),
        }
    }

    /// All pairs over `carrier`.
    pub fn full<'a>(carrier: impl IntoIterator<Item = &'a ElementId> + Clone) -> Self {
        let mut pairs = BTreeSet::new();
        for a in carrier.clone() {
            for b in carrier.clone() {
                pairs.insert((a.clone(), b.clone()));
            }
        }
        LocalityRelation { pairs }
    }

    pub fn contains(&self, a: &ElementId, b: &ElementId) -> bool {
        self.pairs.contains(&(a.clone(), b.clone()))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(ElementId, ElementId)> {
        self.pairs.iter()
    }

    pub fn is_transitive(&self) -> bool {
        self.pairs.iter().all(|(a, b)| {
            self.pairs
                .range((b.clone(), b.clone())..)
                .take_while(|(x, _)| x == b)
                .all(|(_, c)| self.contains(a, c))
        })
    }
}

/// A finite carrier with a partial binary operation whose domain is the
/// locality relation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinitePartialMagma {
    labels: Vec<ElementId>,
    table: Vec<Option<usize>>,
}

impl FinitePartialMagma {
    /// Builds a magma from a carrier and a list of `(a, b, a·b)` triples.
    /// The relation is the set of `(a, b)` keys.
    pub fn new<L, P>(carrier: L, products: P) -> Result<Self>
    where
        L: IntoIterator,
        L::Item: Into<ElementId>,
        P: IntoIterator<Item = (ElementId, ElementId, ElementId)>,
    {
        let mut labels: Vec<ElementId> = carrier.into_iter().map(Into::into).collect();
        labels.sort();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateLabel(w[0].clone()));
        }
        let n = labels.len();
        let mut magma = FinitePartialMagma {
            labels,
            table: vec![None; n * n],
        };
        for (a, b, c) in products {
            let (i, j, k) = (magma.index(&a)?, magma.index(&b)?, magma.index(&c)?);
            let cell = &mut magma.table[i * n + j];
            if cell.is_some() {
                return Err(Error::DuplicateProduct(a, b));
            }
            *cell = Some(k);
        }
        Ok(magma)
    }

    /// Builds a magma from a label-sorted carrier and a dense row-major table
    /// of carrier indices.
    pub fn from_table(labels: Vec<ElementId>, table: Vec<Option<usize>>) -> Result<Self> {
        let n = labels.len();
        if table.len() != n * n {
            return Err(Error::Domain(format!(
                "table has {} cells, expected {}",
                table.len(),
                n * n
            )));
        }
        if let Some(w) = labels.windows(2).find(|w| w[0] >= w[1]) {
            return Err(if w[0] == w[1] {
                Error::DuplicateLabel(w[0].clone())
            } else {
                Error::Domain("carrier labels must be sorted".into())
            });
        }
        if let Some(&bad) = table.iter().flatten().find(|&&k| k >= n) {
            return Err(Error::Domain(format!("table value {bad} out of range")));
        }
        Ok(FinitePartialMagma { labels, table })
    }

    /// Total operation on `carrier` given by `op`.
    pub fn total<L, F>(carrier: L, mut op: F) -> Result<Self>
    where
        L: IntoIterator,
        L::Item: Into<ElementId>,
        F: FnMut(&ElementId, &ElementId) -> ElementId,
    {
        Self::from_fn(carrier, |a, b| Some(op(a, b)))
    }

    /// Operation defined where `op` returns `Some`.
    pub fn from_fn<L, F>(carrier: L, mut op: F) -> Result<Self>
    where
        L: IntoIterator,
        L::Item: Into<ElementId>,
        F: FnMut(&ElementId, &ElementId) -> Option<ElementId>,
    {
        let labels: Vec<ElementId> = carrier.into_iter().map(Into::into).collect();
        let mut products = Vec::new();
        for a in &labels {
            for b in &labels {
                if let Some(c) = op(a, b) {
                    products.push((a.clone(), b.clone(), c));
                }
            }
        }
        Self::new(labels, products)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Carrier labels in sorted order; positions are the element indices.
    pub fn labels(&self) -> &[ElementId] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &ElementId {
        &self.labels[i]
    }

    pub fn index(&self, label: &ElementId) -> Result<usize> {
        self.labels
            .binary_search(label)
            .map_err(|_| Error::UnknownElement(label.clone()))
    }

    pub fn contains(&self, label: &ElementId) -> bool {
        self.labels.binary_search(label).is_ok()
    }

    /// Resolves a set of labels to sorted, distinct indices.
    pub fn indices<'a>(&self, labels: impl IntoIterator<Item = &'a ElementId>) -> Result<Vec<usize>> {
        let mut out = labels.into_iter().map(|l| self.index(l)).collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    pub fn table(&self) -> &[Option<usize>] {
        &self.table
    }

    #[inline]
    pub fn product_at(&self, i: usize, j: usize) -> Option<usize> {
        self.table[i * self.labels.len() + j]
    }

    #[inline]
    pub fn related_at(&self, i: usize, j: usize) -> bool {
        self.product_at(i, j).is_some()
    }

    /// `a·b`, or `None` when `(a, b)` lies outside the relation.
    pub fn product(&self, a: &ElementId, b: &ElementId) -> Result<Option<ElementId>> {
        let (i, j) = (self.index(a)?, self.index(b)?);
        Ok(self.product_at(i, j).map(|k| self.labels[k].clone()))
    }

    pub fn related(&self, a: &ElementId, b: &ElementId) -> Result<bool> {
        Ok(self.related_at(self.index(a)?, self.index(b)?))
    }

    pub fn relation(&self) -> LocalityRelation {
        LocalityRelation::new(self.products().map(|(a, b, _)| (a.clone(), b.clone())))
    }

    pub fn relation_len(&self) -> usize {
        self.table.iter().filter(|c| c.is_some()).count()
    }

    pub fn is_total(&self) -> bool {
        self.table.iter().all(Option::is_some)
    }

    /// Defined products `(a, b, a·b)` in label order.
    pub fn products(&self) -> impl Iterator<Item = (&ElementId, &ElementId, &ElementId)> + '_ {
        let n = self.labels.len();
        self.table
            .iter()
            .enumerate()
            .filter_map(move |(cell, v)| v.map(|k| (&self.labels[cell / n], &self.labels[cell % n], &self.labels[k])))
    }

    pub(crate) fn left_polar_idx(&self, u: &[usize]) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| u.iter().all(|&v| self.related_at(x, v)))
            .collect()
    }

    pub(crate) fn right_polar_idx(&self, u: &[usize]) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| u.iter().all(|&v| self.related_at(v, x)))
            .collect()
    }

    fn to_labels(&self, idx: impl IntoIterator<Item = usize>) -> BTreeSet<ElementId> {
        idx.into_iter().map(|i| self.labels[i].clone()).collect()
    }

    /// `{x | (x, u) in the relation for all u in U}`; the whole carrier for empty `U`.
    pub fn left_polar<'a>(&self, u: impl IntoIterator<Item = &'a ElementId>) -> Result<BTreeSet<ElementId>> {
        let u = self.indices(u)?;
        Ok(self.to_labels(self.left_polar_idx(&u)))
    }

    /// `{x | (u, x) in the relation for all u in U}`; the whole carrier for empty `U`.
    pub fn right_polar<'a>(&self, u: impl IntoIterator<Item = &'a ElementId>) -> Result<BTreeSet<ElementId>> {
        let u = self.indices(u)?;
        Ok(self.to_labels(self.right_polar_idx(&u)))
    }

    /// Restriction to `A`: carrier `A`, relation `(A x A) ∩ ⊤` minus the
    /// pairs whose product leaves `A`. Those pairs are kept as escapes.
    pub fn sub_structure<'a>(&self, subset: impl IntoIterator<Item = &'a ElementId>) -> Result<SubStructure> {
        let idx = self.indices(subset)?;
        if idx.is_empty() {
            return Err(Error::EmptySubset);
        }
        let labels: Vec<ElementId> = idx.iter().map(|&i| self.labels[i].clone()).collect();
        let position: BTreeMap<usize, usize> = idx.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let m = idx.len();
        let mut table = vec![None; m * m];
        let mut escapes = Vec::new();
        for (p, &i) in idx.iter().enumerate() {
            for (q, &j) in idx.iter().enumerate() {
                if let Some(k) = self.product_at(i, j) {
                    match position.get(&k) {
                        Some(&r) => table[p * m + q] = Some(r),
                        None => escapes.push((self.labels[i].clone(), self.labels[j].clone(), self.labels[k].clone())),
                    }
                }
            }
        }
        Ok(SubStructure {
            magma: FinitePartialMagma { labels, table },
            escapes,
        })
    }
}

impl fmt::Debug for FinitePartialMagma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinitePartialMagma {{ elements: {:?}, products: [", self.labels)?;
        for (i, (a, b, c)) in self.products().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}{b}={c}")?;
        }
        f.write_str("] }")
    }
}

/// Result of [`FinitePartialMagma::sub_structure`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubStructure {
    pub magma: FinitePartialMagma,
    /// Pairs `(a, b, a·b)` of the restricted relation whose product is outside the subset.
    pub escapes: Vec<(ElementId, ElementId, ElementId)>,
}

impl SubStructure {
    pub fn is_closed(&self) -> bool {
        self.escapes.is_empty()
    }
}
