//! Bundled groups: cyclic, dihedral, symmetric and alternating groups,
//! `AGL_1(p)`, `PGL_2(q)`, a set of wreath products, and generator
//! fixtures for `PSL_3(2)`, `PSL_2(11)`, `M_11` and `M_23`. Every group is
//! checked against its known order when loaded.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::arith::factorial;
use crate::error::{Error, Result};
use crate::group::{generate, GroupSpec, PermGroup, DEFAULT_ENUMERATION_CAP};
use crate::perm::Permutation;
use crate::wreath::{agl1, iterated_wreath, pgl, psl};

const FIXTURES: [(&str, &str); 4] = [
    ("PSL3(2)", include_str!("../fixtures/psl3_2.json")),
    ("PSL2(11)", include_str!("../fixtures/psl2_11.json")),
    ("M11", include_str!("../fixtures/m11.json")),
    ("M23", include_str!("../fixtures/m23.json")),
];

const WREATHS: [&str; 15] = [
    "C2wrC2",
    "C2wrC2wrC2",
    "C2wrC2wrC2wrC2",
    "C3wrC2",
    "C2wrC3",
    "C3wrC3",
    "C5wrC2",
    "S3wrC2",
    "C2wrS3",
    "S3wrC3",
    "D4wrC2",
    "AGL1(5)wrC2",
    "S4wrC2",
    "S4wrC3",
    "A5wrC2",
];

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub family: &'static str,
    pub degree: usize,
    #[serde(serialize_with = "crate::report::as_string")]
    pub order: BigUint,
}

#[derive(Deserialize)]
struct FixtureDoc {
    #[serde(flatten)]
    spec: GroupSpec,
    order: String,
}

fn fixture_meta(text: &str) -> Result<(GroupSpec, BigUint)> {
    let doc: FixtureDoc = serde_json::from_str(text)?;
    let order = doc.order.parse().map_err(|_| Error::Fixture {
        name: doc.spec.name.clone(),
        reason: format!("bad order {:?}", doc.order),
    })?;
    Ok((doc.spec, order))
}

/// Builds a fixture document and checks the recorded order.
pub fn load_fixture_str(text: &str) -> Result<PermGroup> {
    let (spec, order) = fixture_meta(text)?;
    let g = spec.build(DEFAULT_ENUMERATION_CAP).map_err(|e| Error::Fixture {
        name: spec.name.clone(),
        reason: e.to_string(),
    })?;
    if g.order() != &order {
        return Err(Error::Fixture {
            name: spec.name,
            reason: format!("order {} but {} recorded", g.order(), order),
        });
    }
    Ok(g)
}

fn split_call(s: &str, prefix: &str) -> Option<u64> {
    s.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?.parse().ok()
}

fn parse_linear(s: &str, prefix: &str) -> Option<(usize, u64)> {
    let rest = s.strip_prefix(prefix)?;
    let (d, q) = rest.split_once('(')?;
    Some((d.parse().ok()?, q.strip_suffix(')')?.parse().ok()?))
}

fn order_of(name: &str) -> Option<(BigUint, usize, &'static str)> {
    if let Some((_, text)) = FIXTURES.iter().find(|(n, _)| *n == name) {
        let (spec, order) = fixture_meta(text).ok()?;
        return Some((order, spec.degree, "fixture"));
    }
    if name.contains("wr") {
        let parts: Vec<(BigUint, usize, &str)> = name.split("wr").map(order_of).collect::<Option<_>>()?;
        let (order, degree) = parts.iter().rev().skip(1).fold(
            (parts.last()?.0.clone(), parts.last()?.1),
            |(ord, deg), (h, s, _)| (h.pow(deg as u32) * ord, deg * s),
        );
        return Some((order, degree, "wreath"));
    }
    if let Some(p) = split_call(name, "AGL1") {
        return Some((BigUint::from(p * (p - 1)), p as usize, "affine"));
    }
    if let Some((2, q)) = parse_linear(name, "PGL") {
        return Some((BigUint::from(q * (q * q - 1)), q as usize + 1, "projective"));
    }
    let (family, n) = name.split_at(1);
    let n: usize = n.parse().ok()?;
    let nb = BigUint::from(n);
    match family {
        "C" => Some((nb, n, "cyclic")),
        "D" => Some((nb * 2u32, n, "dihedral")),
        "S" => Some((factorial(n as u64), n, "symmetric")),
        "A" => Some((factorial(n as u64) / 2u32, n, "alternating")),
        _ => None,
    }
}

/// Every bundled group, smallest families first.
pub fn catalog() -> Vec<CatalogEntry> {
    let mut names: Vec<String> = Vec::new();
    names.extend((1..=12).map(|n| format!("C{n}")));
    names.extend((3..=12).map(|n| format!("D{n}")));
    names.extend((1..=8).map(|n| format!("S{n}")));
    names.extend((3..=8).map(|n| format!("A{n}")));
    names.extend([2, 3, 5, 7, 11].map(|p| format!("AGL1({p})")));
    names.extend([2, 3, 4, 5, 7, 8].map(|q| format!("PGL2({q})")));
    names.extend(WREATHS.iter().map(|s| s.to_string()));
    names.extend(FIXTURES.iter().map(|(n, _)| n.to_string()));
    names
        .into_iter()
        .map(|name| {
            let (order, degree, family) = order_of(&name).expect("bundled names parse");
            CatalogEntry { name, family, degree, order }
        })
        .collect()
}

fn named_generators(name: &str) -> Result<PermGroup> {
    let bad = || Error::Parse(format!("unknown group name {name:?}"));
    if let Some((_, text)) = FIXTURES.iter().find(|(n, _)| *n == name) {
        return load_fixture_str(text);
    }
    if name.contains("wr") {
        let mut parts = name.split("wr").map(named_generators).collect::<Result<Vec<_>>>()?;
        parts.reverse();
        return iterated_wreath(&parts);
    }
    if let Some(p) = split_call(name, "AGL1") {
        return agl1(p);
    }
    if let Some((d, q)) = parse_linear(name, "PGL") {
        return pgl(d, q);
    }
    if let Some((d, q)) = parse_linear(name, "PSL") {
        return psl(d, q);
    }
    let (family, n) = name.split_at(name.chars().next().map_or(0, char::len_utf8));
    let n: usize = n.parse().map_err(|_| bad())?;
    if n == 0 {
        return Err(bad());
    }
    let gens: Vec<Permutation> = match family {
        "C" => vec![Permutation::rotation(n)],
        "D" if n >= 3 => vec![
            Permutation::rotation(n),
            Permutation::new((0..n).map(|x| (n - x) % n).collect())?,
        ],
        "S" if n >= 2 => vec![Permutation::from_cycles(n, &[&[0, 1]])?, Permutation::rotation(n)],
        "S" => vec![Permutation::identity(n)],
        "A" if n >= 3 => (2..n)
            .map(|k| Permutation::from_cycles(n, &[&[0, 1, k]]))
            .collect::<Result<_>>()?,
        _ => return Err(bad()),
    };
    generate(&gens, DEFAULT_ENUMERATION_CAP)
}

/// Builds a group by name: any bundled name, or `Cn`, `Dn`, `Sn`, `An`,
/// `AGL1(p)`, `PGLd(q)`, `PSLd(q)`, and `XwrY...` combinations of these.
/// Bundled groups are checked against their recorded order.
pub fn load(name: &str) -> Result<PermGroup> {
    let g = named_generators(name)?;
    if let Some(entry) = catalog().into_iter().find(|e| e.name == name) {
        if g.order() != &entry.order || g.degree() != entry.degree {
            return Err(Error::Fixture {
                name: name.to_string(),
                reason: format!("built order {} but expected {}", g.order(), entry.order),
            });
        }
    }
    Ok(g)
}

/// Names of bundled groups of order at most `max_order`.
pub fn names_up_to_order(max_order: u64) -> Vec<String> {
    let cap = BigUint::from(max_order);
    catalog().into_iter().filter(|e| e.order <= cap).map(|e| e.name).collect()
}
