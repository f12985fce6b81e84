use thiserror::Error;

use crate::check::Witness;
use crate::model::ElementId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element `{0}` is not in the carrier")]
    UnknownElement(ElementId),
    #[error("label `{0}` appears more than once in the carrier")]
    DuplicateLabel(ElementId),
    #[error("label `{0}` is already in the carrier")]
    LabelCollision(ElementId),
    #[error("invalid label `{0}`: labels are non-empty tokens without whitespace or '#'")]
    InvalidLabel(String),
    #[error("product ({0}, {1}) is defined more than once")]
    DuplicateProduct(ElementId, ElementId),
    #[error("subset must be nonempty")]
    EmptySubset,
    #[error("{what}: {size} exceeds the limit of {limit}")]
    Capacity {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("map has no image for `{0}`")]
    NotTotal(ElementId),
    #[error("operation is undefined on ({0}, {1}); a total table is required")]
    NotTotalTable(ElementId, ElementId),
    #[error("not associative: ({a}*{b})*{c} = {lhs} but {a}*({b}*{c}) = {rhs}")]
    NotAssociative {
        a: ElementId,
        b: ElementId,
        c: ElementId,
        lhs: ElementId,
        rhs: ElementId,
    },
    #[error("target is not a refined locality semigroup: {0}")]
    NotRefined(Witness),
    #[error("not a locality map: {0}")]
    NotLocalityMap(Witness),
    #[error("paths {0} and {1} are not composable")]
    CompositionUndefined(String, String),
    #[error("trivial path {0} has no arrow decomposition")]
    TrivialPath(String),
    #[error("{0}")]
    Domain(String),
}
