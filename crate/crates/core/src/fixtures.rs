//! Named example structures shipped with the library.

use crate::error::{Error, Result};
use crate::model::FinitePartialMagma;
use crate::quiver::Quiver;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixtureKind {
    Magma,
    Quiver,
}

#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub kind: FixtureKind,
    pub text: &'static str,
}

macro_rules! fixture {
    ($name:literal, Magma) => {
        Fixture {
            name: $name,
            kind: FixtureKind::Magma,
            text: include_str!(concat!("../fixtures/", $name, ".magma")),
        }
    };
    ($name:literal, Quiver) => {
        Fixture {
            name: $name,
            kind: FixtureKind::Quiver,
            text: include_str!(concat!("../fixtures/", $name, ".quiver")),
        }
    };
}

pub const FIXTURES: &[Fixture] = &[
    fixture!("ex2_5_powerset", Magma),
    fixture!("ex2_17_quiver", Quiver),
    fixture!("ex3_6", Magma),
    fixture!("ex3_8", Magma),
    fixture!("ex3_psg_not_lsg", Magma),
    fixture!("ex4_3", Magma),
    fixture!("loop_quiver", Quiver),
    fixture!("cyclic_loop", Quiver),
    fixture!("z3", Magma),
];

pub fn fixture(name: &str) -> Result<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name).ok_or_else(|| {
        let names: Vec<&str> = FIXTURES.iter().map(|f| f.name).collect();
        Error::Domain(format!("unknown example `{name}` (known: {})", names.join(", ")))
    })
}

pub fn magma(name: &str) -> Result<FinitePartialMagma> {
    let f = fixture(name)?;
    match f.kind {
        FixtureKind::Magma => f.text.parse(),
        FixtureKind::Quiver => Err(Error::Domain(format!("`{name}` is a quiver"))),
    }
}

pub fn quiver(name: &str) -> Result<Quiver> {
    let f = fixture(name)?;
    match f.kind {
        FixtureKind::Quiver => f.text.parse(),
        FixtureKind::Magma => Err(Error::Domain(format!("`{name}` is a magma"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predicate::{powerset_magma, SetOp};

    #[test]
    fn every_fixture_parses() {
        for f in FIXTURES {
            match f.kind {
                FixtureKind::Magma => assert!(magma(f.name).is_ok(), "{}", f.name),
                FixtureKind::Quiver => assert!(quiver(f.name).is_ok(), "{}", f.name),
            }
        }
    }

    #[test]
    fn powerset_fixture_matches_the_builder() {
        assert_eq!(
            magma("ex2_5_powerset").unwrap(),
            powerset_magma(2, SetOp::Union).unwrap()
        );
    }

    #[test]
    fn lookup_errors() {
        assert!(fixture("nope").unwrap_err().to_string().contains("ex3_8"));
        assert!(magma("ex2_17_quiver").is_err());
        assert!(quiver("ex3_8").is_err());
    }
}
