// SPDX-License-Identifier: Apache-2.0

//! RDP types with Artin coindices, the non-equivariance predicate and
//! regeneration of the non-equivariant configuration tables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::dynkin::{parse_summand, Component, DynkinType, Family};
use crate::embedding::{embedding_classes, ClassInvariant, EmbeddingError, RootData};
use crate::exec::{par_map, Strategy};

const BUNDLED_CATALOG: &str = include_str!("../data/rdp_catalog.json");
const BUNDLED_TABLES: &str = include_str!("../data/tables.json");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unsupported characteristic {0}; expected 3, 5 or 7")]
    UnsupportedCharacteristic(u32),
    #[error("degree {0} outside 1..=8")]
    UnsupportedDegree(u32),
    #[error("no catalog entry for {ty} in characteristic {p}")]
    CatalogMiss { ty: String, p: u32 },
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("configuration {0} exceeds rank 8")]
    RankTooLarge(String),
    #[error("catalog document: {0}")]
    Document(String),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

fn check_p(p: u32) -> Result<(), CatalogError> {
    if matches!(p, 3 | 5 | 7) {
        Ok(())
    } else {
        Err(CatalogError::UnsupportedCharacteristic(p))
    }
}

/// A single RDP type, e.g. `A2` or `E6^0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RdpType {
    pub base: Component,
    pub coindex: Option<u8>,
}

impl RdpType {
    pub fn new(base: Component, coindex: Option<u8>) -> Self {
        Self { base, coindex }
    }

    pub fn plain(family: Family, rank: usize) -> Result<Self, CatalogError> {
        let c = Component::new(family, rank).map_err(|e| CatalogError::Parse(e.to_string()))?;
        Ok(Self { base: c, coindex: None })
    }

    fn key(&self) -> (std::cmp::Reverse<(Family, usize)>, Option<u8>) {
        (std::cmp::Reverse((self.base.family, self.base.rank)), self.coindex)
    }

    /// Checks the coindex against the catalog for characteristic `p`.
    pub fn validate(&self, p: u32) -> Result<(), CatalogError> {
        Catalog::bundled().entry(self, p).map(|_| ())
    }
}

impl PartialOrd for RdpType {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RdpType {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for RdpType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        if let Some(r) = self.coindex {
            write!(f, "^{r}")?;
        }
        Ok(())
    }
}

fn parse_coindex(tail: &str) -> Result<Option<u8>, ()> {
    let t = tail.trim();
    if t.is_empty() {
        return Ok(None);
    }
    let t = t.strip_prefix('^').ok_or(())?;
    let t = t.trim_start_matches('{').trim_end_matches('}');
    t.parse::<u8>().map(Some).map_err(|_| ())
}

impl FromStr for RdpType {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || CatalogError::Parse(s.to_string());
        let (mult, fam, rank, tail) = parse_summand(s).ok_or_else(err)?;
        if mult != 1 {
            return Err(err());
        }
        let base = Component::new(fam, rank).map_err(|_| err())?;
        Ok(Self { base, coindex: parse_coindex(tail).map_err(|_| err())? })
    }
}

impl Serialize for RdpType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RdpType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Multiset of RDP types, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RdpConfiguration {
    entries: Vec<RdpType>,
}

impl RdpConfiguration {
    pub fn new(mut entries: Vec<RdpType>) -> Result<Self, CatalogError> {
        entries.sort();
        let c = Self { entries };
        if c.rank() > 8 {
            return Err(CatalogError::RankTooLarge(c.to_string()));
        }
        Ok(c)
    }

    pub fn entries(&self) -> &[RdpType] {
        &self.entries
    }

    pub fn rank(&self) -> usize {
        self.entries.iter().map(|e| e.base.rank).sum()
    }

    /// Underlying lattice type.
    pub fn lattice_type(&self) -> DynkinType {
        DynkinType::new(self.entries.iter().map(|e| e.base).collect())
    }
}

impl fmt::Display for RdpConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        let mut i = 0;
        while i < self.entries.len() {
            let e = self.entries[i];
            let m = self.entries[i..].iter().take_while(|x| **x == e).count();
            if i > 0 {
                write!(f, "+")?;
            }
            if m > 1 {
                write!(f, "{m}")?;
            }
            write!(f, "{e}")?;
            i += m;
        }
        Ok(())
    }
}

impl FromStr for RdpConfiguration {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || CatalogError::Parse(s.to_string());
        let mut entries = Vec::new();
        for part in s.split('+') {
            let (mult, fam, rank, tail) = parse_summand(part).ok_or_else(err)?;
            let base = Component::new(fam, rank).map_err(|_| err())?;
            let coindex = parse_coindex(tail).map_err(|_| err())?;
            if mult == 0 {
                return Err(err());
            }
            entries.extend(std::iter::repeat(RdpType { base, coindex }).take(mult));
        }
        Self::new(entries)
    }
}

impl Serialize for RdpConfiguration {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RdpConfiguration {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Which of several embedding classes a primed table entry refers to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassTag {
    /// 1-based class index.
    pub index: usize,
    pub of: usize,
    pub invariant: ClassInvariant,
}

/// One generated table entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    pub configuration: RdpConfiguration,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<ClassTag>,
}

impl TableEntry {
    /// Name with the class suffix collapsed, e.g. `(A5)'`.
    pub fn normalized(&self) -> String {
        match self.class {
            Some(_) => format!("({})'", self.configuration),
            None => self.configuration.to_string(),
        }
    }
}

impl fmt::Display for TableEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.class {
            Some(c) => write!(f, "({})'#{}", self.configuration, c.index),
            None => write!(f, "{}", self.configuration),
        }
    }
}

/// Normalizes a printed table name: `(A_5)'` -> `(A5)'`, `E_6^0+A_2` -> `E6^0+A2`.
pub fn normalize_name(s: &str) -> Result<String, CatalogError> {
    let t = s.trim();
    if let Some(inner) = t.strip_prefix('(').and_then(|x| x.strip_suffix(")'")) {
        return Ok(format!("({})'", inner.parse::<RdpConfiguration>()?));
    }
    Ok(t.parse::<RdpConfiguration>()?.to_string())
}

/// One catalog record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub p: u32,
    #[serde(rename = "type")]
    pub ty: RdpType,
    pub normal_form: String,
    pub tjurina: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CatalogDoc {
    schema: String,
    entries: Vec<CatalogEntry>,
}

/// Normal forms and Tjurina numbers per characteristic.
#[derive(Clone, Debug)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn from_json(src: &str) -> Result<Self, CatalogError> {
        let doc: CatalogDoc = serde_json::from_str(src).map_err(|e| CatalogError::Document(e.to_string()))?;
        if doc.schema != "rdp_catalog" {
            return Err(CatalogError::Document(format!("unexpected schema {:?}", doc.schema)));
        }
        let mut seen = BTreeSet::new();
        for e in &doc.entries {
            check_p(e.p)?;
            if !seen.insert((e.p, e.ty)) {
                return Err(CatalogError::Document(format!("duplicate entry {} at p={}", e.ty, e.p)));
            }
        }
        Ok(Self { entries: doc.entries })
    }

    /// The catalog compiled into the crate.
    pub fn bundled() -> &'static Catalog {
        static CELL: OnceLock<Catalog> = OnceLock::new();
        CELL.get_or_init(|| Catalog::from_json(BUNDLED_CATALOG).expect("bundled catalog is valid"))
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn entry(&self, t: &RdpType, p: u32) -> Result<&CatalogEntry, CatalogError> {
        check_p(p)?;
        self.entries
            .iter()
            .find(|e| e.p == p && e.ty == *t)
            .ok_or_else(|| CatalogError::CatalogMiss { ty: t.to_string(), p })
    }

    /// Catalogued variants of a base type in characteristic `p`.
    pub fn variants(&self, base: Component, p: u32) -> Vec<RdpType> {
        let mut v: Vec<RdpType> = self.entries.iter().filter(|e| e.p == p && e.ty.base == base).map(|e| e.ty).collect();
        v.sort();
        v
    }

    /// Whether `base` splits into several Artin forms in characteristic `p`.
    pub fn splits(&self, base: Component, p: u32) -> bool {
        self.variants(base, p).iter().any(|t| t.coindex.is_some())
    }
}

/// Whether the minimal resolution of an RDP of type `t` fails to be
/// T_X-equivariant in characteristic `p`.
pub fn is_nonequivariant(t: &RdpType, p: u32) -> Result<bool, CatalogError> {
    check_p(p)?;
    let n = t.base.rank;
    Ok(match t.base.family {
        Family::A => (n + 1) % p as usize == 0,
        Family::D => false,
        Family::E => match (p, n, t.coindex) {
            (3, 6, Some(0 | 1)) | (3, 7, Some(0)) | (3, 8, Some(0 | 1)) => true,
            (5, 8, Some(0)) => true,
            _ => false,
        },
    })
}

/// Tjurina number of the Artin normal form of `t` in characteristic `p`.
pub fn tjurina_reference(t: &RdpType, p: u32) -> Result<u32, CatalogError> {
    Ok(Catalog::bundled().entry(t, p)?.tjurina)
}

fn check_args(p: u32, d: u32) -> Result<(), CatalogError> {
    check_p(p)?;
    if !(1..=8).contains(&d) {
        return Err(CatalogError::UnsupportedDegree(d));
    }
    Ok(())
}

/// All non-equivariant configurations on RDP del Pezzo surfaces of degree
/// `d` in characteristic `p`, one entry per embedding class for lattice
/// types with several classes.
pub fn generate_config_table(p: u32, d: u32) -> Result<Vec<TableEntry>, CatalogError> {
    generate_config_table_with(p, d, Strategy::default())
}

/// [`generate_config_table`] with an explicit execution strategy.
pub fn generate_config_table_with(p: u32, d: u32, strategy: Strategy) -> Result<Vec<TableEntry>, CatalogError> {
    check_args(p, d)?;
    let cat = Catalog::bundled();
    let data = RootData::for_degree(d)?;
    let max_rank = data.root_type().rank();
    let noneq_base = |c: &Component| cat.variants(*c, p).iter().any(|t| is_nonequivariant(t, p).unwrap_or(false));
    let candidates: Vec<DynkinType> = DynkinType::all_up_to_rank(max_rank)
        .into_iter()
        .filter(|t| t.components().iter().any(noneq_base))
        .collect();
    let embeds = par_map(strategy, &candidates, |t| data.embeds(t));
    let mut out = Vec::new();
    for (t, ok) in candidates.iter().zip(embeds) {
        if !ok {
            continue;
        }
        let configs = expand_coindices(t, p, cat)?;
        let configs: Vec<RdpConfiguration> = configs
            .into_iter()
            .filter(|c| c.entries().iter().any(|e| is_nonequivariant(e, p).unwrap_or(false)))
            .collect();
        if configs.is_empty() {
            continue;
        }
        let classes = embedding_classes(t, d, false, strategy)?;
        for c in configs {
            if classes.len() >= 2 {
                for (i, cl) in classes.iter().enumerate() {
                    let tag = ClassTag { index: i + 1, of: classes.len(), invariant: cl.invariant.clone() };
                    out.push(TableEntry { configuration: c.clone(), class: Some(tag) });
                }
            } else {
                out.push(TableEntry { configuration: c, class: None });
            }
        }
    }
    out.sort_by(|a, b| {
        (a.configuration.rank(), a.normalized(), a.class.as_ref().map(|c| c.index))
            .cmp(&(b.configuration.rank(), b.normalized(), b.class.as_ref().map(|c| c.index)))
    });
    Ok(out)
}

/// Every assignment of catalogued coindices to the components of `t`.
fn expand_coindices(t: &DynkinType, p: u32, cat: &Catalog) -> Result<Vec<RdpConfiguration>, CatalogError> {
    let mut acc: Vec<Vec<RdpType>> = vec![Vec::new()];
    for c in t.components() {
        let vars = cat.variants(*c, p);
        if vars.is_empty() {
            return Err(CatalogError::CatalogMiss { ty: c.to_string(), p });
        }
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                vars.iter().map(move |v| {
                    let mut x = prefix.clone();
                    x.push(*v);
                    x
                })
            })
            .collect();
    }
    let set: BTreeSet<RdpConfiguration> = acc.into_iter().map(RdpConfiguration::new).collect::<Result<_, _>>()?;
    Ok(set.into_iter().collect())
}

/// Row of a bundled expected table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpectedRow {
    pub d: u32,
    pub configurations: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpectedTable {
    pub p: u32,
    pub rows: Vec<ExpectedRow>,
}

/// A documented correction to a printed table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Erratum {
    pub p: u32,
    pub d: u32,
    pub add: String,
    pub reason: String,
}

/// Bundled printed tables plus errata.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpectedTables {
    pub schema: String,
    pub tables: Vec<ExpectedTable>,
    pub errata: Vec<Erratum>,
}

impl ExpectedTables {
    pub fn from_json(src: &str) -> Result<Self, CatalogError> {
        let t: ExpectedTables = serde_json::from_str(src).map_err(|e| CatalogError::Document(e.to_string()))?;
        if t.schema != "delpezzo-tables/1" {
            return Err(CatalogError::Document(format!("unexpected schema {:?}", t.schema)));
        }
        for tab in &t.tables {
            for row in &tab.rows {
                for c in &row.configurations {
                    normalize_name(c)?;
                }
            }
        }
        Ok(t)
    }

    pub fn bundled() -> &'static ExpectedTables {
        static CELL: OnceLock<ExpectedTables> = OnceLock::new();
        CELL.get_or_init(|| ExpectedTables::from_json(BUNDLED_TABLES).expect("bundled tables are valid"))
    }

    /// Printed configurations for (p, d), normalized; empty if no row.
    pub fn printed(&self, p: u32, d: u32) -> BTreeSet<String> {
        self.tables
            .iter()
            .filter(|t| t.p == p)
            .flat_map(|t| t.rows.iter().filter(|r| r.d == d))
            .flat_map(|r| r.configurations.iter().map(|c| normalize_name(c).expect("validated at load")))
            .collect()
    }

    pub fn errata_for(&self, p: u32, d: u32) -> Vec<&Erratum> {
        self.errata.iter().filter(|e| e.p == p && e.d == d).collect()
    }
}

/// Difference between a generated row and the printed row.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TableDiff {
    pub p: u32,
    pub d: u32,
    /// Generated but not printed.
    pub extra: Vec<String>,
    /// Printed but not generated.
    pub missing: Vec<String>,
    /// Extra entries explained by a bundled erratum.
    pub errata: Vec<String>,
}

impl TableDiff {
    /// True when the generated row equals the printed row exactly.
    pub fn exact(&self) -> bool {
        self.extra.is_empty() && self.missing.is_empty()
    }

    /// True when every difference is covered by an erratum.
    pub fn explained(&self) -> bool {
        self.missing.is_empty() && self.extra.iter().all(|e| self.errata.contains(e))
    }
}

/// Compares generated entries with the printed table row.
pub fn diff_table(p: u32, d: u32, generated: &[TableEntry], expected: &ExpectedTables) -> TableDiff {
    let gen: BTreeSet<String> = generated.iter().map(|e| e.normalized()).collect();
    let printed = expected.printed(p, d);
    let errata = expected
        .errata_for(p, d)
        .iter()
        .filter_map(|e| normalize_name(&e.add).ok())
        .collect();
    TableDiff {
        p,
        d,
        extra: gen.difference(&printed).cloned().collect(),
        missing: printed.difference(&gen).cloned().collect(),
        errata,
    }
}

/// Generated tables for every degree, keyed by d (rows with no entries omitted).
pub fn generate_all(p: u32, strategy: Strategy) -> Result<BTreeMap<u32, Vec<TableEntry>>, CatalogError> {
    let mut out = BTreeMap::new();
    for d in (1..=8).rev() {
        let rows = generate_config_table_with(p, d, strategy)?;
        if !rows.is_empty() {
            out.insert(d, rows);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rt(s: &str) -> RdpType {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(rt("E_6^0").to_string(), "E6^0");
        assert_eq!(rt("A_2").to_string(), "A2");
        let c: RdpConfiguration = "A_1+E_6^1".parse().unwrap();
        assert_eq!(c.to_string(), "E6^1+A1");
        let c: RdpConfiguration = "A_1+2A_2+A_3".parse().unwrap();
        assert_eq!(c.to_string(), "A3+2A2+A1");
        assert!("E6+2A2+A1".parse::<RdpConfiguration>().is_err());
        assert_eq!(normalize_name("(A_5+A_1)'").unwrap(), "(A5+A1)'");
        assert!("A9+A1".parse::<RdpConfiguration>().is_err());
        assert!("E9".parse::<RdpType>().is_err());
    }

    #[test]
    fn nonequivariance_examples() {
        assert!(is_nonequivariant(&rt("A6"), 7).unwrap());
        assert!(!is_nonequivariant(&rt("E8^1"), 5).unwrap());
        assert!(!is_nonequivariant(&rt("A2"), 5).unwrap());
        assert!(is_nonequivariant(&rt("E7^0"), 3).unwrap());
        assert!(!is_nonequivariant(&rt("E7^1"), 3).unwrap());
        assert!(matches!(is_nonequivariant(&rt("A1"), 2), Err(CatalogError::UnsupportedCharacteristic(2))));
    }

    #[test]
    fn nonequivariant_lists() {
        let cat = Catalog::bundled();
        let list = |p| {
            let mut v: Vec<String> =
                cat.entries().iter().filter(|e| e.p == p && is_nonequivariant(&e.ty, p).unwrap()).map(|e| e.ty.to_string()).collect();
            v.sort();
            v
        };
        assert_eq!(list(7), ["A6"]);
        assert_eq!(list(5), ["A4", "E8^0"]);
        assert_eq!(list(3), ["A2", "A5", "A8", "E6^0", "E6^1", "E7^0", "E8^0", "E8^1"]);
    }

    #[test]
    fn tjurina_lookup() {
        assert_eq!(tjurina_reference(&rt("A6"), 7).unwrap(), 7);
        assert_eq!(tjurina_reference(&rt("A1"), 7).unwrap(), 1);
        assert_ne!(tjurina_reference(&rt("E6^0"), 3).unwrap(), tjurina_reference(&rt("E6^1"), 3).unwrap());
        assert!(matches!(tjurina_reference(&rt("E6^0"), 7), Err(CatalogError::CatalogMiss { .. })));
    }

    #[test]
    fn coindices_separated_by_tau() {
        let cat = Catalog::bundled();
        for p in [3, 5, 7] {
            let mut fibres: BTreeMap<Component, Vec<u32>> = BTreeMap::new();
            for e in cat.entries().iter().filter(|e| e.p == p) {
                fibres.entry(e.ty.base).or_default().push(e.tjurina);
            }
            for (base, taus) in fibres {
                let distinct: BTreeSet<_> = taus.iter().collect();
                assert_eq!(distinct.len(), taus.len(), "{base} at p={p}");
            }
        }
    }

    #[test]
    fn small_tables() {
        let names = |p, d| generate_config_table(p, d).unwrap().iter().map(|e| e.normalized()).collect::<Vec<_>>();
        assert_eq!(names(7, 2), ["A6"]);
        assert_eq!(names(5, 3), ["A4", "A4+A1"]);
        assert_eq!(names(3, 6), ["A2", "A2+A1"]);
        assert!(names(7, 3).is_empty());
    }
}
