//! Quivers, their paths, the path locality semigroup and the free extension
//! of arrow maps into refined locality semigroups.
//!
//! Paths are labelled `e_<vertex>` when trivial and by their arrows joined
//! with `.` otherwise (`alpha.beta`). Arrow labels therefore may not contain
//! `.`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::check::{is_refined_locality_semigroup, Axiom, Verdict, Witness};
use crate::error::{Error, Result};
use crate::format::{label_at, parse_error, strip_comment};
use crate::model::{ElementId, FinitePartialMagma};

/// Largest path set [`Quiver::materialize`] and [`verify_free_property`] will build.
pub const MAX_PATHS: usize = 1024;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub label: ElementId,
    pub source: usize,
    pub target: usize,
}

/// A finite directed multigraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<ElementId>,
    arrows: Vec<Arrow>,
}

/// A trivial path at a vertex, or a nonempty chain of composable arrows
/// (stored as arrow indices).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Path {
    Trivial(usize),
    Arrows(Vec<usize>),
}

impl Path {
    /// Number of arrows; trivial paths have length zero.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        match self {
            Path::Trivial(_) => 0,
            Path::Arrows(a) => a.len(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, Path::Trivial(_))
    }

    pub fn arrows(&self) -> &[usize] {
        match self {
            Path::Trivial(_) => &[],
            Path::Arrows(a) => a,
        }
    }
}

impl Quiver {
    pub fn new<V>(vertices: V, arrows: Vec<(ElementId, ElementId, ElementId)>) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<ElementId>,
    {
        let vertices: Vec<ElementId> = vertices.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v) {
                return Err(Error::DuplicateLabel(v.clone()));
            }
        }
        let vertex_index = |v: &ElementId| {
            vertices
                .iter()
                .position(|x| x == v)
                .ok_or_else(|| Error::UnknownElement(v.clone()))
        };
        let mut labels = BTreeSet::new();
        let mut out = Vec::with_capacity(arrows.len());
        for (label, s, t) in arrows {
            if label.as_str().contains('.') {
                return Err(Error::InvalidLabel(format!(
                    "{label} (arrow labels may not contain '.')"
                )));
            }
            if !labels.insert(label.clone()) {
                return Err(Error::DuplicateLabel(label));
            }
            out.push(Arrow {
                source: vertex_index(&s)?,
                target: vertex_index(&t)?,
                label,
            });
        }
        Ok(Quiver { vertices, arrows: out })
    }

    pub fn vertices(&self) -> &[ElementId] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_index(&self, label: &ElementId) -> Result<usize> {
        self.arrows
            .iter()
            .position(|a| &a.label == label)
            .ok_or_else(|| Error::UnknownElement(label.clone()))
    }

    /// The single-arrow path `α`.
    pub fn arrow_path(&self, label: &str) -> Result<Path> {
        Ok(Path::Arrows(vec![self.arrow_index(&ElementId::new(label)?)?]))
    }

    pub fn trivial_path(&self, vertex: &str) -> Result<Path> {
        let v = ElementId::new(vertex)?;
        self.vertices
            .iter()
            .position(|x| *x == v)
            .map(Path::Trivial)
            .ok_or(Error::UnknownElement(v))
    }

    pub fn source(&self, p: &Path) -> usize {
        match p {
            Path::Trivial(v) => *v,
            Path::Arrows(a) => self.arrows[a[0]].source,
        }
    }

    pub fn target(&self, p: &Path) -> usize {
        match p {
            Path::Trivial(v) => *v,
            Path::Arrows(a) => self.arrows[*a.last().expect("nonempty")].target,
        }
    }

    pub fn path_label(&self, p: &Path) -> String {
        match p {
            Path::Trivial(v) => format!("e_{}", self.vertices[*v]),
            Path::Arrows(a) => a
                .iter()
                .map(|&i| self.arrows[i].label.as_str())
                .collect::<Vec<_>>()
                .join("."),
        }
    }

    pub fn parse_path(&self, label: &str) -> Result<Path> {
        if let Some(v) = label.strip_prefix("e_") {
            if let Ok(p) = self.trivial_path(v) {
                return Ok(p);
            }
        }
        let arrows = label
            .split('.')
            .map(|a| self.arrow_index(&ElementId::new(a)?))
            .collect::<Result<Vec<_>>>()?;
        let p = Path::Arrows(arrows);
        self.validate(&p)?;
        Ok(p)
    }

    fn validate(&self, p: &Path) -> Result<()> {
        if let Path::Arrows(a) = p {
            if a.is_empty() {
                return Err(Error::Domain("arrow paths are nonempty".into()));
            }
            if let Some(w) = a
                .windows(2)
                .find(|w| self.arrows[w[0]].target != self.arrows[w[1]].source)
            {
                return Err(Error::CompositionUndefined(
                    self.arrows[w[0]].label.to_string(),
                    self.arrows[w[1]].label.to_string(),
                ));
            }
        }
        Ok(())
    }

    /// Composition `pq`, defined when `t(p) = s(q)`. Trivial paths are neutral.
    pub fn compose(&self, p: &Path, q: &Path) -> Result<Path> {
        if self.target(p) != self.source(q) {
            return Err(Error::CompositionUndefined(self.path_label(p), self.path_label(q)));
        }
        Ok(match (p, q) {
            (Path::Trivial(_), _) => q.clone(),
            (_, Path::Trivial(_)) => p.clone(),
            (Path::Arrows(a), Path::Arrows(b)) => Path::Arrows(a.iter().chain(b).copied().collect()),
        })
    }

    /// All paths of length exactly `n`, in lexicographic arrow order.
    pub fn paths_of_length(&self, n: usize) -> Vec<Path> {
        if n == 0 {
            return (0..self.vertices.len()).map(Path::Trivial).collect();
        }
        let mut layer: Vec<Vec<usize>> = (0..self.arrows.len()).map(|i| vec![i]).collect();
        for _ in 1..n {
            layer = layer
                .into_iter()
                .flat_map(|chain| {
                    let end = self.arrows[*chain.last().expect("nonempty")].target;
                    self.arrows
                        .iter()
                        .enumerate()
                        .filter(move |(_, a)| a.source == end)
                        .map(move |(i, _)| {
                            let mut next = chain.clone();
                            next.push(i);
                            next
                        })
                })
                .collect();
            if layer.is_empty() {
                break;
            }
        }
        layer.into_iter().map(Path::Arrows).collect()
    }

    /// Paths of length `0..=max_len`, failing once the count exceeds `limit`.
    pub fn paths_up_to(&self, max_len: usize, limit: usize) -> Result<Vec<Path>> {
        let mut out = Vec::new();
        for n in 0..=max_len {
            let layer = self.paths_of_length(n);
            if layer.is_empty() && n > 0 {
                break;
            }
            out.extend(layer);
            if out.len() > limit {
                return Err(Error::Capacity {
                    what: "path count",
                    size: out.len(),
                    limit,
                });
            }
        }
        Ok(out)
    }

    /// Length of the longest path, or `None` when an oriented cycle exists.
    pub fn longest_path_len(&self) -> Option<usize> {
        let n = self.vertices.len();
        let mut indegree = vec![0usize; n];
        for a in &self.arrows {
            indegree[a.target] += 1;
        }
        let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut depth = vec![0usize; n];
        let mut visited = 0;
        while let Some(v) = ready.pop() {
            visited += 1;
            for a in self.arrows.iter().filter(|a| a.source == v) {
                depth[a.target] = depth[a.target].max(depth[v] + 1);
                indegree[a.target] -= 1;
                if indegree[a.target] == 0 {
                    ready.push(a.target);
                }
            }
        }
        (visited == n).then(|| depth.into_iter().max().unwrap_or(0))
    }

    pub fn has_oriented_cycle(&self) -> bool {
        self.longest_path_len().is_none()
    }

    /// Pairs of arrows `(α, β)` with `t(α) = s(β)`.
    pub fn arrow_relation(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.arrows.len();
        (0..n)
            .flat_map(move |a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.arrows[a].target == self.arrows[b].source)
    }

    /// The path locality semigroup truncated at `max_len`.
    ///
    /// The carrier holds every path of length at most `max_len`. A pair with
    /// matching endpoints is related only if its composite also fits; the
    /// others are returned as boundary pairs.
    pub fn materialize(&self, max_len: usize) -> Result<PathMagma> {
        let paths = self.paths_up_to(max_len, MAX_PATHS)?;
        let labels: Vec<ElementId> = paths
            .iter()
            .map(|p| ElementId::new(&self.path_label(p)))
            .collect::<Result<_>>()?;
        let mut products = Vec::new();
        let mut boundary = Vec::new();
        for (p, lp) in paths.iter().zip(&labels) {
            for (q, lq) in paths.iter().zip(&labels) {
                if self.target(p) != self.source(q) {
                    continue;
                }
                if p.len() + q.len() > max_len {
                    boundary.push((lp.clone(), lq.clone()));
                    continue;
                }
                let pq = self.compose(p, q)?;
                products.push((lp.clone(), lq.clone(), ElementId::new(&self.path_label(&pq))?));
            }
        }
        let magma = FinitePartialMagma::new(labels.iter().cloned(), products)?;
        let paths = labels.into_iter().zip(paths).collect();
        Ok(PathMagma { magma, paths, boundary })
    }
}

impl fmt::Display for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("vertices:")?;
        for v in &self.vertices {
            write!(f, " {v}")?;
        }
        writeln!(f)?;
        for a in &self.arrows {
            writeln!(
                f,
                "arrow: {} {} {}",
                a.label, self.vertices[a.source], self.vertices[a.target]
            )?;
        }
        Ok(())
    }
}

/// Parses `vertices: x y z` followed by `arrow: alpha x y` lines.
impl FromStr for Quiver {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut vertices: Option<Vec<ElementId>> = None;
        let mut arrows = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| parse_error(lineno, format!("expected `key: value`, got `{line}`")))?;
            match key.trim() {
                "vertices" => {
                    if vertices.is_some() {
                        return Err(parse_error(lineno, "duplicate `vertices` line"));
                    }
                    vertices = Some(
                        rest.split_whitespace()
                            .map(|t| label_at(lineno, t))
                            .collect::<Result<_>>()?,
                    );
                }
                "arrow" => {
                    let tokens: Vec<&str> = rest.split_whitespace().collect();
                    let [label, s, t] = tokens[..] else {
                        return Err(parse_error(lineno, "expected `arrow: label source target`"));
                    };
                    arrows.push((
                        lineno,
                        [label_at(lineno, label)?, label_at(lineno, s)?, label_at(lineno, t)?],
                    ));
                }
                other => return Err(parse_error(lineno, format!("unknown key `{other}`"))),
            }
        }
        let vertices = vertices.ok_or_else(|| parse_error(text.lines().count().max(1), "missing `vertices` line"))?;
        // Validate arrow by arrow so errors carry a line number.
        let mut accepted = Vec::new();
        for (lineno, [label, s, t]) in arrows {
            accepted.push((label, s, t));
            Quiver::new(vertices.iter().cloned(), accepted.clone()).map_err(|e| parse_error(lineno, e.to_string()))?;
        }
        Quiver::new(vertices, accepted)
    }
}

/// A materialized path locality semigroup.
#[derive(Clone, Debug)]
pub struct PathMagma {
    pub magma: FinitePartialMagma,
    pub paths: BTreeMap<ElementId, Path>,
    /// Composable pairs left out of the relation because the composite is too long.
    pub boundary: Vec<(ElementId, ElementId)>,
}

impl PathMagma {
    /// The inclusion of arrows as length-one paths.
    pub fn arrow_inclusion(&self, q: &Quiver) -> BTreeMap<ElementId, ElementId> {
        q.arrows()
            .iter()
            .filter(|a| self.magma.contains(&a.label))
            .map(|a| (a.label.clone(), a.label.clone()))
            .collect()
    }
}

/// `(f(α), f(β))` related in `target` for every `(α, β)` with `t(α) = s(β)`.
pub fn is_arrow_locality_map(
    q: &Quiver,
    target: &FinitePartialMagma,
    f: &BTreeMap<ElementId, ElementId>,
) -> Result<Verdict> {
    let images = resolve_arrow_map(q, target, f)?;
    Ok(arrow_map_verdict(q, target, &images))
}

fn resolve_arrow_map(
    q: &Quiver,
    target: &FinitePartialMagma,
    f: &BTreeMap<ElementId, ElementId>,
) -> Result<Vec<usize>> {
    if let Some(k) = f.keys().find(|k| q.arrow_index(k).is_err()) {
        return Err(Error::UnknownElement(k.clone()));
    }
    q.arrows()
        .iter()
        .map(|a| target.index(f.get(&a.label).ok_or_else(|| Error::NotTotal(a.label.clone()))?))
        .collect()
}

fn arrow_map_verdict(q: &Quiver, target: &FinitePartialMagma, images: &[usize]) -> Verdict {
    for (a, b) in q.arrow_relation() {
        if !target.related_at(images[a], images[b]) {
            return Verdict::Fails(Witness::new(
                Axiom::LocalityMap,
                vec![q.arrows()[a].label.clone(), q.arrows()[b].label.clone()],
                "image-pair-unrelated",
            ));
        }
    }
    Verdict::Holds
}

/// The extension `f̄(α₁⋯α_k) = f(α₁)⋯f(α_k)` of an arrow map into a
/// refined locality semigroup, defined on nonempty paths.
#[derive(Clone, Debug)]
pub struct FreeExtension<'a> {
    quiver: &'a Quiver,
    target: &'a FinitePartialMagma,
    images: Vec<usize>,
}

impl<'a> FreeExtension<'a> {
    /// Checks that `target` is refined and `f` is a locality map on composable arrows.
    pub fn new(quiver: &'a Quiver, target: &'a FinitePartialMagma, f: &BTreeMap<ElementId, ElementId>) -> Result<Self> {
        let images = resolve_arrow_map(quiver, target, f)?;
        if let Verdict::Fails(w) = is_refined_locality_semigroup(target) {
            return Err(Error::NotRefined(w));
        }
        if let Verdict::Fails(w) = arrow_map_verdict(quiver, target, &images) {
            return Err(Error::NotLocalityMap(w));
        }
        Ok(FreeExtension { quiver, target, images })
    }

    fn fold_left(&self, arrows: &[usize]) -> usize {
        let mut acc = self.images[arrows[0]];
        for &a in &arrows[1..] {
            let next = self.images[a];
            acc = self.target.product_at(acc, next).unwrap_or_else(|| {
                panic!(
                    "partial product ({}, {}) undefined although the target is refined",
                    self.target.label(acc),
                    self.target.label(next)
                )
            });
        }
        acc
    }

    pub(crate) fn apply_idx(&self, p: &Path) -> Result<usize> {
        match p {
            Path::Trivial(_) => Err(Error::TrivialPath(self.quiver.path_label(p))),
            Path::Arrows(a) => Ok(self.fold_left(a)),
        }
    }

    /// `f̄(p)` by left-to-right folding.
    pub fn apply(&self, p: &Path) -> Result<ElementId> {
        self.apply_idx(p).map(|i| self.target.label(i).clone())
    }

    /// Every value `f̄(p)` can take over all bracketings of its arrow
    /// decomposition; `None` if some bracketing hits an undefined product.
    pub fn bracketing_values(&self, p: &Path) -> Option<BTreeSet<usize>> {
        let arrows = p.arrows();
        let k = arrows.len();
        if k == 0 {
            return None;
        }
        // values[i][j]: products of arrows[i..=j] over all bracketings
        let mut values: Vec<Vec<BTreeSet<usize>>> = vec![vec![BTreeSet::new(); k]; k];
        for i in 0..k {
            values[i][i].insert(self.images[arrows[i]]);
        }
        for span in 1..k {
            for i in 0..k - span {
                let j = i + span;
                let mut acc = BTreeSet::new();
                for split in i..j {
                    for &x in &values[i][split] {
                        for &y in &values[split + 1][j] {
                            acc.insert(self.target.product_at(x, y)?);
                        }
                    }
                }
                values[i][j] = acc;
            }
        }
        Some(std::mem::take(&mut values[0][k - 1]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreePropertyReport {
    pub paths_checked: usize,
    pub pairs_checked: usize,
    pub verdict: Verdict,
}

/// Checks on every nonempty path up to `max_len`:
///
/// * `f̄(α) = f(α)` on arrows;
/// * `(f̄(p), f̄(q))` is related and `f̄(pq) = f̄(p)f̄(q)` for composable
///   pairs with `ℓ(pq) ≤ max_len`;
/// * every bracketing of `f(α₁)⋯f(α_k)` is defined and equals `f̄(p)`.
///
/// A homomorphism agreeing with `f` on arrows must take one of the
/// bracketing values on each path, so a single value per path also shows
/// uniqueness.
pub fn verify_free_property(
    q: &Quiver,
    target: &FinitePartialMagma,
    f: &BTreeMap<ElementId, ElementId>,
    max_len: usize,
) -> Result<FreePropertyReport> {
    let ext = FreeExtension::new(q, target, f)?;
    let paths: Vec<Path> = q
        .paths_up_to(max_len, MAX_PATHS)?
        .into_iter()
        .filter(|p| !p.is_trivial())
        .collect();
    let label = |p: &Path| ElementId::new(&q.path_label(p));
    let fail = |axiom, elements, detail| {
        Ok(FreePropertyReport {
            paths_checked: 0,
            pairs_checked: 0,
            verdict: Verdict::Fails(Witness::new(axiom, elements, detail)),
        })
    };

    for (i, a) in q.arrows().iter().enumerate() {
        if ext.apply_idx(&Path::Arrows(vec![i]))? != ext.images[i] {
            return fail(
                Axiom::Multiplicative,
                vec![a.label.clone()],
                "extension-differs-on-arrow",
            );
        }
    }

    let values: HashMap<&Path, usize> = paths
        .iter()
        .map(|p| ext.apply_idx(p).map(|v| (p, v)))
        .collect::<Result<_>>()?;
    let mut pairs_checked = 0;
    for p in &paths {
        for r in &paths {
            if q.target(p) != q.source(r) || p.len() + r.len() > max_len {
                continue;
            }
            pairs_checked += 1;
            let (x, y) = (values[p], values[r]);
            let Some(xy) = target.product_at(x, y) else {
                return fail(Axiom::LocalityMap, vec![label(p)?, label(r)?], "image-pair-unrelated");
            };
            let pr = q.compose(p, r)?;
            if values[&pr] != xy {
                return fail(
                    Axiom::Multiplicative,
                    vec![label(p)?, label(r)?],
                    "image-of-product-differs",
                );
            }
        }
    }

    for p in &paths {
        match ext.bracketing_values(p) {
            Some(v) if v.len() == 1 && v.contains(&values[p]) => {}
            Some(_) => return fail(Axiom::FoldOrder, vec![label(p)?], "bracketings-disagree"),
            None => return fail(Axiom::FoldOrder, vec![label(p)?], "bracketing-undefined"),
        }
    }

    Ok(FreePropertyReport {
        paths_checked: paths.len(),
        pairs_checked,
        verdict: Verdict::Holds,
    })
}
