//! Exhaustive and sampled enumeration of partial magmas on small carriers.
//!
//! A magma on `n` elements is encoded as an `n²`-digit number in base
//! `n + 1`, one digit per ordered cell in row-major order with the first
//! cell most significant. Digit `0` leaves the cell undefined and digit
//! `k > 0` sets the product to the `k`-th element. Enumeration counts codes
//! upward, so code order is lexicographic table order and code `0` is the
//! empty relation.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::check::{classify, classify_flags, Flags};
use crate::construct::{adjoin_identity, adjoin_zero};
use crate::error::{Error, Result};
use crate::model::{ElementId, FinitePartialMagma};

/// Largest carrier enumerated exhaustively.
pub const MAX_EXHAUSTIVE: usize = 3;

/// Largest carrier accepted in sampling mode.
pub const MAX_SAMPLED: usize = 8;

/// Labels `a`, `b`, `c`, … of the enumerated carrier.
pub fn carrier(n: usize) -> Vec<ElementId> {
    (0..n)
        .map(|i| ElementId::new(&char::from(b'a' + i as u8).to_string()).expect("letters are valid labels"))
        .collect()
}

/// `(n+1)^(n²)`, or `None` on overflow.
pub fn space_size(n: usize) -> Option<u64> {
    (n as u64 + 1).checked_pow(u32::try_from(n * n).ok()?)
}

fn check_size(n: usize, limit: usize, mode: &'static str) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("carrier size must be at least 1".into()));
    }
    if n > limit {
        return Err(Error::Capacity {
            what: mode,
            size: n,
            limit,
        });
    }
    Ok(())
}

fn decode_table(n: usize, mut code: u64) -> Vec<Option<usize>> {
    let base = n as u64 + 1;
    let mut table = vec![None; n * n];
    for cell in table.iter_mut().rev() {
        let digit = (code % base) as usize;
        code /= base;
        *cell = digit.checked_sub(1);
    }
    table
}

fn encode_table(n: usize, table: impl IntoIterator<Item = Option<usize>>) -> u64 {
    let base = n as u64 + 1;
    table
        .into_iter()
        .fold(0, |acc, cell| acc * base + cell.map_or(0, |k| k as u64 + 1))
}

/// The magma with the given code on [`carrier`]`(n)`.
pub fn decode(n: usize, code: u64) -> Result<FinitePartialMagma> {
    let total = space_size(n).ok_or(Error::Capacity {
        what: "encodable carrier size",
        size: n,
        limit: 4,
    })?;
    if code >= total {
        return Err(Error::Domain(format!("code {code} out of range for size {n}")));
    }
    FinitePartialMagma::from_table(carrier(n), decode_table(n, code))
}

/// The code of `m`'s table, reading elements in label order.
pub fn encode(m: &FinitePartialMagma) -> Result<u64> {
    let n = m.len();
    space_size(n).ok_or(Error::Capacity {
        what: "encodable carrier size",
        size: n,
        limit: 4,
    })?;
    Ok(encode_table(n, m.table().iter().copied()))
}

/// Least code over all relabellings of the carrier.
pub fn canonical_code(m: &FinitePartialMagma) -> Result<u64> {
    encode(m)?;
    let n = m.len();
    let table = m.table();
    let best = (0..n)
        .permutations(n)
        .map(|perm| {
            // perm[i] is the new position of element i
            let mut relabelled = vec![None; n * n];
            for i in 0..n {
                for j in 0..n {
                    relabelled[perm[i] * n + perm[j]] = table[i * n + j].map(|k| perm[k]);
                }
            }
            encode_table(n, relabelled)
        })
        .min()
        .unwrap_or(0);
    Ok(best)
}

/// Visits every magma on `n ≤ MAX_EXHAUSTIVE` elements in code order and
/// returns how many were visited.
pub fn enumerate_magmas(n: usize, mut consumer: impl FnMut(u64, &FinitePartialMagma)) -> Result<u64> {
    check_size(n, MAX_EXHAUSTIVE, "exhaustive carrier size")?;
    let total = space_size(n).expect("small sizes fit");
    let labels = carrier(n);
    for code in 0..total {
        let m = FinitePartialMagma::from_table(labels.clone(), decode_table(n, code))?;
        consumer(code, &m);
    }
    Ok(total)
}

/// `samples` magmas on `n ≤ MAX_SAMPLED` elements with independently uniform
/// cells, reproducible from `seed`.
pub fn sample_magmas(n: usize, samples: usize, seed: u64) -> Result<Vec<FinitePartialMagma>> {
    check_size(n, MAX_SAMPLED, "sampled carrier size")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = carrier(n);
    (0..samples)
        .map(|_| {
            let table = (0..n * n).map(|_| rng.gen_range(0..=n).checked_sub(1)).collect();
            FinitePartialMagma::from_table(labels.clone(), table)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CensusOptions {
    /// Worker threads; `None` uses the available parallelism.
    pub jobs: Option<usize>,
    /// Also count isomorphism classes per pattern.
    pub dedup: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRow {
    pub flags: Flags,
    pub count: u64,
    /// Isomorphism classes, when deduplication was requested.
    pub classes: Option<u64>,
    /// First magma with this pattern, in code order (or sample order).
    pub witness: FinitePartialMagma,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sampling {
    pub samples: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub size: usize,
    pub total: u64,
    pub rows: Vec<CensusRow>,
    pub sampling: Option<Sampling>,
}

impl Census {
    pub fn row(&self, flags: Flags) -> Option<&CensusRow> {
        self.rows.iter().find(|r| r.flags == flags)
    }

    pub fn count_where(&self, pred: impl Fn(Flags) -> bool) -> u64 {
        self.rows.iter().filter(|r| pred(r.flags)).map(|r| r.count).sum()
    }

    /// Magmas breaking refined ⇒ strong ⇒ (locality ∧ partial).
    pub fn chain_violations(&self) -> u64 {
        self.count_where(|f| (f.refined && !f.strong) || (f.strong && !(f.locality && f.partial)))
    }
}

#[derive(Default)]
struct Tally {
    count: u64,
    first: u64,
    canon: HashSet<u64>,
}

type Partial = BTreeMap<Flags, Tally>;

fn merge(mut left: Partial, right: Partial) -> Partial {
    for (flags, t) in right {
        let slot = left.entry(flags).or_insert_with(|| Tally {
            first: u64::MAX,
            ..Tally::default()
        });
        slot.count += t.count;
        slot.first = slot.first.min(t.first);
        slot.canon.extend(t.canon);
    }
    left
}

fn scan(n: usize, codes: std::ops::Range<u64>, dedup: bool) -> Result<Partial> {
    let labels = carrier(n);
    let mut out = Partial::new();
    for code in codes {
        let m = FinitePartialMagma::from_table(labels.clone(), decode_table(n, code))?;
        let slot = out.entry(classify_flags(&m)).or_insert_with(|| Tally {
            first: code,
            ..Tally::default()
        });
        slot.count += 1;
        if dedup {
            slot.canon.insert(canonical_code(&m)?);
        }
    }
    Ok(out)
}

fn with_pool<T: Send>(jobs: Option<usize>, work: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(work()),
        Some(0) => Err(Error::Domain("--jobs must be at least 1".into())),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map(|pool| pool.install(work))
            .map_err(|e| Error::Domain(format!("thread pool: {e}"))),
    }
}

/// Classifies every magma on `n ≤ MAX_EXHAUSTIVE` elements and aggregates by
/// flag pattern. Work is split into code ranges; the merge is associative
/// and commutative, so the result does not depend on the worker count.
pub fn census(n: usize, opts: CensusOptions) -> Result<Census> {
    check_size(n, MAX_EXHAUSTIVE, "exhaustive carrier size")?;
    let total = space_size(n).expect("small sizes fit");
    const CHUNKS: u64 = 256;
    let step = total.div_ceil(CHUNKS);
    let partial = with_pool(opts.jobs, || {
        (0..CHUNKS)
            .into_par_iter()
            .map(|c| scan(n, (c * step).min(total)..((c + 1) * step).min(total), opts.dedup))
            .try_reduce(Partial::new, |a, b| Ok(merge(a, b)))
    })??;
    let rows = partial
        .into_iter()
        .map(|(flags, t)| {
            Ok(CensusRow {
                flags,
                count: t.count,
                classes: opts.dedup.then_some(t.canon.len() as u64),
                witness: decode(n, t.first)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Census {
        size: n,
        total,
        rows,
        sampling: None,
    })
}

/// Census over [`sample_magmas`]; counts are of samples, not of the space.
pub fn sampled_census(n: usize, samples: usize, seed: u64, jobs: Option<usize>) -> Result<Census> {
    let magmas = sample_magmas(n, samples, seed)?;
    let flags: Vec<Flags> = with_pool(jobs, || magmas.par_iter().map(classify_flags).collect())?;
    let mut rows: BTreeMap<Flags, CensusRow> = BTreeMap::new();
    for (m, f) in magmas.iter().zip(flags) {
        rows.entry(f)
            .or_insert_with(|| CensusRow {
                flags: f,
                count: 0,
                classes: None,
                witness: m.clone(),
            })
            .count += 1;
    }
    Ok(Census {
        size: n,
        total: samples as u64,
        rows: rows.into_values().collect(),
        sampling: Some(Sampling { samples, seed }),
    })
}

impl fmt::Display for Census {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.sampling {
            None => writeln!(f, "size={} total={} mode=exhaustive", self.size, self.total)?,
            Some(s) => writeln!(
                f,
                "size={} total={} mode=sampled samples={} seed={}",
                self.size, self.total, s.samples, s.seed
            )?,
        }
        let dedup = self.rows.iter().any(|r| r.classes.is_some());
        writeln!(
            f,
            "{:<8} {:>10}{}",
            "pattern",
            "count",
            if dedup { "    classes" } else { "" }
        )?;
        for r in &self.rows {
            write!(f, "{:<8} {:>10}", r.flags.code(), r.count)?;
            if let Some(c) = r.classes {
                write!(f, " {c:>10}")?;
            }
            writeln!(f)?;
        }
        for r in &self.rows {
            write!(f, "pattern={} counts={}", r.flags.code(), r.count)?;
            if let Some(c) = r.classes {
                write!(f, " classes={c}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A partial assignment of class flags.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FlagPattern {
    pub locality: Option<bool>,
    pub strong: Option<bool>,
    pub partial: Option<bool>,
    pub refined: Option<bool>,
    pub transitive: Option<bool>,
}

impl FlagPattern {
    pub fn matches(&self, f: Flags) -> bool {
        [
            (self.locality, f.locality),
            (self.strong, f.strong),
            (self.partial, f.partial),
            (self.refined, f.refined),
            (self.transitive, f.transitive),
        ]
        .iter()
        .all(|&(want, got)| want.is_none_or(|w| w == got))
    }
}

/// Parses `locality=yes,partial=no`; the empty string is the empty pattern.
impl FromStr for FlagPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = FlagPattern::default();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Domain(format!("expected `class=yes|no`, got `{item}`")))?;
            let value = match value.trim() {
                "yes" | "true" => true,
                "no" | "false" => false,
                other => return Err(Error::Domain(format!("flag value must be yes or no, got `{other}`"))),
            };
            let slot = match key.trim() {
                "locality" => &mut p.locality,
                "strong" => &mut p.strong,
                "partial" => &mut p.partial,
                "refined" => &mut p.refined,
                "transitive" => &mut p.transitive,
                other => return Err(Error::Domain(format!("unknown class `{other}`"))),
            };
            if slot.replace(value).is_some() {
                return Err(Error::Domain(format!("class `{}` given twice", key.trim())));
            }
        }
        Ok(p)
    }
}

/// First magma on `n` elements, in code order, matching `pattern`.
pub fn find_witness(pattern: &FlagPattern, n: usize) -> Result<Option<FinitePartialMagma>> {
    check_size(n, MAX_EXHAUSTIVE, "exhaustive carrier size")?;
    let total = space_size(n).expect("small sizes fit");
    let labels = carrier(n);
    for code in 0..total {
        let m = FinitePartialMagma::from_table(labels.clone(), decode_table(n, code))?;
        if pattern.matches(classify_flags(&m)) {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// How many inputs of a class stay in it after adjoining an identity or a zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Preservation {
    pub inputs: u64,
    pub with_identity: u64,
    pub with_zero: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AdjunctionStats {
    pub size: usize,
    pub locality: Preservation,
    pub strong: Preservation,
    pub refined: Preservation,
    /// Locality inputs whose adjoined element is reported as a two-sided identity / zero.
    pub identity_recognized: u64,
    pub zero_recognized: u64,
}

/// Adjoins `1` and `0` to every locality semigroup on `n` elements and
/// records which classes survive. Nothing is asserted about strong or
/// refined inputs.
pub fn adjunction_preservation(n: usize) -> Result<AdjunctionStats> {
    let (one, zero) = (ElementId::new("1")?, ElementId::new("0")?);
    let mut stats = AdjunctionStats {
        size: n,
        ..AdjunctionStats::default()
    };
    let mut failure = None;
    enumerate_magmas(n, |_, m| {
        if failure.is_some() {
            return;
        }
        let before = classify_flags(m);
        if !before.locality {
            return;
        }
        let adjoined = adjoin_identity(m, &one).and_then(|s1| Ok((s1, adjoin_zero(m, &zero)?)));
        let (s1, s0) = match adjoined {
            Ok(pair) => pair,
            Err(e) => {
                failure = Some(e);
                return;
            }
        };
        let (r1, r0) = (classify(&s1), classify(&s0));
        let (f1, f0) = (r1.flags(), r0.flags());
        let bump = |p: &mut Preservation, was: bool, kept1: bool, kept0: bool| {
            if was {
                p.inputs += 1;
                p.with_identity += u64::from(kept1);
                p.with_zero += u64::from(kept0);
            }
        };
        bump(&mut stats.locality, true, f1.locality, f0.locality);
        bump(&mut stats.strong, before.strong, f1.strong, f0.strong);
        bump(&mut stats.refined, before.refined, f1.refined, f0.refined);
        stats.identity_recognized += u64::from(r1.units.identities.contains(&one));
        stats.zero_recognized += u64::from(r0.units.zeros.contains(&zero));
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(stats),
    }
}

impl fmt::Display for AdjunctionStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "size={}", self.size)?;
        for (name, p) in [
            ("locality", self.locality),
            ("strong", self.strong),
            ("refined", self.refined),
        ] {
            writeln!(
                f,
                "class={name} inputs={} kept-with-identity={} kept-with-zero={}",
                p.inputs, p.with_identity, p.with_zero
            )?;
        }
        writeln!(
            f,
            "identity-recognized={} zero-recognized={}",
            self.identity_recognized, self.zero_recognized
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::classify;

    #[test]
    fn space_sizes() {
        assert_eq!(space_size(1), Some(2));
        assert_eq!(space_size(2), Some(81));
        assert_eq!(space_size(3), Some(262_144));
        assert_eq!(space_size(4), Some(152_587_890_625));
        assert_eq!(space_size(5), None);
    }

    #[test]
    fn size_one_has_two_magmas() {
        let mut seen = Vec::new();
        let count = enumerate_magmas(1, |_, m| seen.push(m.relation_len())).unwrap();
        assert_eq!(count, 2);
        assert_eq!(seen, [0, 1]);
    }

    #[test]
    fn code_zero_is_the_empty_relation() {
        assert_eq!(decode(2, 0).unwrap().relation_len(), 0);
        // last code: every cell holds the last element
        let m = decode(2, 80).unwrap();
        assert!(m.is_total());
        assert!(m.table().iter().all(|&c| c == Some(1)));
    }

    #[test]
    fn codes_round_trip() {
        for code in [0, 1, 17, 4095, 262_143] {
            assert_eq!(encode(&decode(3, code).unwrap()).unwrap(), code);
        }
        assert!(decode(2, 81).is_err());
    }

    #[test]
    fn canonical_code_is_relabelling_invariant() {
        // ab = a only, versus its mirror ba = b
        let m = FinitePartialMagma::new(["a", "b"], [("a".into(), "b".into(), "a".into())]).unwrap();
        let mirrored = FinitePartialMagma::new(["a", "b"], [("b".into(), "a".into(), "b".into())]).unwrap();
        assert_eq!(canonical_code(&m).unwrap(), canonical_code(&mirrored).unwrap());
        assert!(canonical_code(&m).unwrap() <= encode(&m).unwrap());
    }

    #[test]
    fn size_limits() {
        assert!(matches!(enumerate_magmas(4, |_, _| ()), Err(Error::Capacity { .. })));
        assert!(matches!(census(0, CensusOptions::default()), Err(Error::Domain(_))));
        assert!(sample_magmas(4, 3, 7).is_ok());
        assert!(sample_magmas(MAX_SAMPLED + 1, 3, 7).is_err());
    }

    #[test]
    fn sampling_is_reproducible() {
        assert_eq!(sample_magmas(4, 20, 42).unwrap(), sample_magmas(4, 20, 42).unwrap());
        assert_ne!(sample_magmas(4, 20, 42).unwrap(), sample_magmas(4, 20, 43).unwrap());
        let c = sampled_census(4, 200, 1, Some(2)).unwrap();
        assert_eq!(c.rows.iter().map(|r| r.count).sum::<u64>(), 200);
        assert_eq!(c, sampled_census(4, 200, 1, Some(1)).unwrap());
    }

    #[test]
    fn census_of_size_two() {
        let c = census(2, CensusOptions::default()).unwrap();
        assert_eq!(c.rows.iter().map(|r| r.count).sum::<u64>(), 81);
        assert_eq!(c.chain_violations(), 0);
        for r in &c.rows {
            assert_eq!(classify(&r.witness).flags(), r.flags);
        }
        assert_eq!(
            c.rows
                .iter()
                .find(|r| r.witness.relation_len() == 0)
                .unwrap()
                .flags
                .code(),
            "LSPRT"
        );
    }

    #[test]
    fn census_is_independent_of_worker_count() {
        let one = census(
            2,
            CensusOptions {
                jobs: Some(1),
                dedup: true,
            },
        )
        .unwrap();
        let four = census(
            2,
            CensusOptions {
                jobs: Some(4),
                dedup: true,
            },
        )
        .unwrap();
        assert_eq!(one, four);
        assert!(one.rows.iter().all(|r| r.classes.unwrap() <= r.count));
        assert!(matches!(
            census(
                2,
                CensusOptions {
                    jobs: Some(0),
                    dedup: false
                }
            ),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn pattern_parsing() {
        let p: FlagPattern = "locality=yes, partial=no".parse().unwrap();
        assert_eq!(p.locality, Some(true));
        assert_eq!(p.partial, Some(false));
        assert_eq!(p.strong, None);
        assert_eq!("".parse::<FlagPattern>().unwrap(), FlagPattern::default());
        assert!("locality=maybe".parse::<FlagPattern>().is_err());
        assert!("associative=yes".parse::<FlagPattern>().is_err());
        assert!("strong=yes,strong=no".parse::<FlagPattern>().is_err());
    }

    #[test]
    fn witness_search() {
        let empty = find_witness(&FlagPattern::default(), 2).unwrap().unwrap();
        assert_eq!(empty.relation_len(), 0);
        let p: FlagPattern = "refined=yes,locality=no".parse().unwrap();
        assert_eq!(find_witness(&p, 2).unwrap(), None);
        let p: FlagPattern = "locality=yes,partial=yes,strong=no".parse().unwrap();
        let m = find_witness(&p, 2).unwrap().unwrap();
        assert!(p.matches(classify(&m).flags()));
    }

    #[test]
    fn adjunction_on_size_one() {
        let s = adjunction_preservation(1).unwrap();
        assert_eq!(s.locality.inputs, 2);
        assert_eq!(s.locality.with_identity, 2);
        assert_eq!(s.locality.with_zero, 2);
        assert_eq!(s.identity_recognized, 2);
        assert_eq!(s.zero_recognized, 2);
    }
}
