//! Structures built from other structures: identity and zero adjunction,
//! generated sub-structures, zero-completion to a total semigroup, and
//! restriction of a total semigroup to a partial one.

use std::collections::BTreeSet;

use crate::check::{Axiom, Verdict, Witness};
use crate::error::{Error, Result};
use crate::format::MagmaDocument;
use crate::model::{ElementId, FinitePartialMagma};

fn fresh(m: &FinitePartialMagma, label: &ElementId) -> Result<()> {
    if m.contains(label) {
        return Err(Error::LabelCollision(label.clone()));
    }
    Ok(())
}

fn existing_products(m: &FinitePartialMagma) -> Vec<(ElementId, ElementId, ElementId)> {
    m.products()
        .map(|(a, b, c)| (a.clone(), b.clone(), c.clone()))
        .collect()
}

/// `S¹`: adds `one` related to everything on both sides, acting neutrally.
pub fn adjoin_identity(m: &FinitePartialMagma, one: &ElementId) -> Result<FinitePartialMagma> {
    fresh(m, one)?;
    let mut products = existing_products(m);
    products.push((one.clone(), one.clone(), one.clone()));
    for a in m.labels() {
        products.push((one.clone(), a.clone(), a.clone()));
        products.push((a.clone(), one.clone(), a.clone()));
    }
    FinitePartialMagma::new(m.labels().iter().chain([one]).cloned(), products)
}

/// `S⁰`: adds `zero` related to everything on both sides, absorbing.
pub fn adjoin_zero(m: &FinitePartialMagma, zero: &ElementId) -> Result<FinitePartialMagma> {
    fresh(m, zero)?;
    let mut products = existing_products(m);
    products.push((zero.clone(), zero.clone(), zero.clone()));
    for a in m.labels() {
        products.push((zero.clone(), a.clone(), zero.clone()));
        products.push((a.clone(), zero.clone(), zero.clone()));
    }
    FinitePartialMagma::new(m.labels().iter().chain([zero]).cloned(), products)
}

/// Smallest `B ⊇ A` with `ab ∈ B` for every related `(a, b) ∈ B × B`.
pub fn generated_sub_locality_semigroup(m: &FinitePartialMagma, subset: &[ElementId]) -> Result<BTreeSet<ElementId>> {
    let start = m.indices(subset)?;
    if start.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut inside = vec![false; m.len()];
    for &i in &start {
        inside[i] = true;
    }
    let mut members = start;
    loop {
        let mut added = Vec::new();
        for &a in &members {
            for &b in &members {
                if let Some(c) = m.product_at(a, b) {
                    if !inside[c] {
                        inside[c] = true;
                        added.push(c);
                    }
                }
            }
        }
        if added.is_empty() {
            break;
        }
        members.extend(added);
    }
    Ok(members.into_iter().map(|i| m.label(i).clone()).collect())
}

/// A total table with a designated zero element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupWithZero {
    pub table: FinitePartialMagma,
    pub zero: ElementId,
}

impl SemigroupWithZero {
    pub fn to_document(&self) -> MagmaDocument {
        MagmaDocument {
            magma: self.table.clone(),
            zero: Some(self.zero.clone()),
        }
    }

    pub fn product(&self, a: &ElementId, b: &ElementId) -> Result<ElementId> {
        Ok(self.table.product(a, b)?.expect("completed tables are total"))
    }
}

/// First `(x, y, z)` in label order with `(xy)z ≠ x(yz)`. Requires a total table.
pub fn check_associative(t: &FinitePartialMagma) -> Result<()> {
    let n = t.len();
    for i in 0..n {
        for j in 0..n {
            if t.product_at(i, j).is_none() {
                return Err(Error::NotTotalTable(t.label(i).clone(), t.label(j).clone()));
            }
        }
    }
    let p = |i, j| t.product_at(i, j).expect("total");
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (lhs, rhs) = (p(p(a, b), c), p(a, p(b, c)));
                if lhs != rhs {
                    return Err(Error::NotAssociative {
                        a: t.label(a).clone(),
                        b: t.label(b).clone(),
                        c: t.label(c).clone(),
                        lhs: t.label(lhs).clone(),
                        rhs: t.label(rhs).clone(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Totalizes the operation on `S ∪ {zero}` by sending every unrelated pair
/// to `zero`, then verifies associativity by brute force.
///
/// For a refined locality semigroup the check always passes; for anything
/// else the first non-associative triple is returned as
/// [`Error::NotAssociative`].
pub fn complete_to_semigroup_with_zero(m: &FinitePartialMagma, zero: &ElementId) -> Result<SemigroupWithZero> {
    fresh(m, zero)?;
    let table = FinitePartialMagma::total(m.labels().iter().chain([zero]).cloned(), |a, b| {
        if a == zero || b == zero {
            return zero.clone();
        }
        m.product(a, b)
            .expect("labels come from the carrier")
            .unwrap_or_else(|| zero.clone())
    })?;
    check_associative(&table)?;
    Ok(SemigroupWithZero {
        table,
        zero: zero.clone(),
    })
}

/// `abc ≠ 0 ⇔ (ab ≠ 0 ∧ bc ≠ 0)` for all `a, b, c`.
///
/// Errors when the table is not total, not associative, or `zero` is not a
/// two-sided zero.
pub fn is_strong_semigroup_with_zero(t: &SemigroupWithZero) -> Result<Verdict> {
    let m = &t.table;
    check_associative(m)?;
    let z = m.index(&t.zero)?;
    if let Some(a) = (0..m.len()).find(|&a| m.product_at(z, a) != Some(z) || m.product_at(a, z) != Some(z)) {
        return Err(Error::Domain(format!(
            "`{}` is not a zero: it does not absorb `{}`",
            t.zero,
            m.label(a)
        )));
    }
    let p = |i, j| m.product_at(i, j).expect("total");
    let n = m.len();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (ab, bc) = (p(a, b), p(b, c));
                let abc_nonzero = p(ab, c) != z;
                let both_nonzero = ab != z && bc != z;
                if abc_nonzero != both_nonzero {
                    let detail = if abc_nonzero {
                        "abc-nonzero-but-ab-or-bc-zero"
                    } else {
                        "abc-zero-but-ab-and-bc-nonzero"
                    };
                    let elements = [a, b, c].iter().map(|&i| m.label(i).clone()).collect();
                    return Ok(Verdict::Fails(Witness::new(Axiom::StrongZero, elements, detail)));
                }
            }
        }
    }
    Ok(Verdict::Holds)
}

/// Restricts a total semigroup to `A` with relation `{(a, b) ∈ A × A | ab ∈ A}`.
pub fn partial_from_semigroup(t: &FinitePartialMagma, subset: &[ElementId]) -> Result<FinitePartialMagma> {
    check_associative(t)?;
    Ok(t.sub_structure(subset)?.magma)
}
