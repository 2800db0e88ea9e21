// SPDX-License-Identifier: Apache-2.0

//! The bundled surface dataset: schema, validation and verification.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action::{
    parse_with_constants, point_motion, verify_invariance, verify_relations, ActionError, GeneratorSpec, GroupSchemeGenerator,
    Motion,
};
use crate::catalog::{generate_config_table_with, RdpConfiguration, RdpType, TableEntry};
use crate::exec::{par_map, with_jobs, Strategy};
use crate::ffpoly::{Fe, Field, FieldSpec, Ring};
use crate::singularity::{
    classify_rdp, local_singularity, normalize_point, render_point, singular_coordinates, AmbientSpace, SingularityError, Surface,
};

/// Schema tag of dataset documents.
pub const SCHEMA: &str = "delpezzo-dataset/1";

/// Environment variable overriding the bundled data directory.
pub const DATA_DIR_ENV: &str = "DPK_DATA_DIR";

const BUNDLED: [(u32, &str); 3] = [
    (3, include_str!("../data/dataset/char3.json")),
    (5, include_str!("../data/dataset/char5.json")),
    (7, include_str!("../data/dataset/char7.json")),
];

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{context}: {msg}")]
    Json { context: String, msg: String },
    #[error("schema {found:?} is not {SCHEMA}")]
    SchemaVersion { found: String },
    #[error("record {id}, field {field}: {msg}")]
    Invalid { id: String, field: String, msg: String },
    #[error("no bundled dataset for characteristic {0}")]
    UnknownCharacteristic(u32),
    #[error("no record with id {0}")]
    UnknownId(String),
}

/// A parameter of a family and its representative value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParameter {
    pub name: String,
    pub value: String,
    /// Conditions `lhs != rhs` or `lhs == rhs` separated by `;`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<String>,
}

/// A claimed singular point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularityClaim {
    pub point: Vec<String>,
    #[serde(rename = "type")]
    pub ty: RdpType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Claimed behavior of a point under a generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotionClaim {
    pub generator: String,
    pub point: Vec<String>,
    pub claim: Motion,
}

/// A claimed relation between generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationClaim {
    pub generator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub companion: Option<String>,
    pub relation: String,
}

/// Where a record comes from: table name and 1-based row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub table: String,
    pub row: u32,
}

/// One surface of the classification tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceRecord {
    pub id: String,
    pub characteristic: u32,
    pub degree: u32,
    pub configuration: RdpConfiguration,
    pub ambient: AmbientSpace,
    /// Polynomials whose common zero set is the surface.
    pub equations: Vec<String>,
    pub parameters: Vec<FamilyParameter>,
    /// Field over which all singular points are rational.
    pub field: FieldSpec,
    pub singularities: Vec<SingularityClaim>,
    pub aut0: Vec<GeneratorSpec>,
    pub motion_claims: Vec<MotionClaim>,
    pub relations: Vec<RelationClaim>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub provenance: Provenance,
}

/// On-disk document: all records of one characteristic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetDocument {
    pub schema: String,
    pub characteristic: u32,
    pub records: Vec<SurfaceRecord>,
}

impl DatasetDocument {
    pub fn from_json(src: &str, context: &str) -> Result<Self, DatasetError> {
        let doc: DatasetDocument =
            serde_json::from_str(src).map_err(|e| DatasetError::Json { context: context.into(), msg: e.to_string() })?;
        if doc.schema != SCHEMA {
            return Err(DatasetError::SchemaVersion { found: doc.schema });
        }
        Ok(doc)
    }

    /// Canonical serialization: two-space indentation and a final newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("dataset serializes");
        s.push('\n');
        s
    }
}

/// A record with everything parsed and checked.
#[derive(Clone, Debug)]
pub struct LoadedRecord {
    pub record: SurfaceRecord,
    pub field: Arc<Field>,
    pub constants: BTreeMap<String, Fe>,
    pub surface: Surface,
    pub points: Vec<Vec<Fe>>,
    pub generators: Vec<GroupSchemeGenerator>,
}

impl LoadedRecord {
    pub fn id(&self) -> &str {
        &self.record.id
    }

    fn generator(&self, label: &str) -> Option<&GroupSchemeGenerator> {
        self.generators.iter().find(|g| g.label == label)
    }

    fn parse_point(&self, coords: &[String]) -> Result<Vec<Fe>, String> {
        parse_point(&self.field, coords)
    }
}

fn parse_point(field: &Field, coords: &[String]) -> Result<Vec<Fe>, String> {
    coords.iter().map(|c| field.parse_element(c).map_err(|e| format!("{c:?}: {e}"))).collect()
}

/// Checks `a != b` / `a == b` clauses at the given values.
pub fn check_constraint(field: &Arc<Field>, constraint: &str, values: &BTreeMap<String, Fe>) -> Result<bool, String> {
    let names: Vec<&String> = values.keys().collect();
    let ring = Ring::new(field.clone(), &names, &[]).map_err(|e| e.to_string())?;
    let point: Vec<Fe> = values.values().copied().collect();
    let eval = |s: &str| -> Result<Fe, String> {
        let p = ring.parse(s.trim()).map_err(|e| format!("{s:?}: {e}"))?;
        let v = p.specialize_vars(&point).map_err(|e| e.to_string())?;
        Ok(v.constant_value().unwrap_or(0))
    };
    for clause in constraint.split(';').map(str::trim).filter(|c| !c.is_empty()) {
        let ok = if let Some((l, r)) = clause.split_once("!=") {
            eval(l)? != eval(r)?
        } else if let Some((l, r)) = clause.split_once("==") {
            eval(l)? == eval(r)?
        } else {
            return Err(format!("clause {clause:?} has no != or =="));
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Validates a record and compiles its equations and actions.
pub fn load_record(record: &SurfaceRecord) -> Result<LoadedRecord, DatasetError> {
    let id = record.id.clone();
    let invalid = |field: &str, msg: String| DatasetError::Invalid { id: id.clone(), field: field.into(), msg };
    if !(1..=8).contains(&record.degree) {
        return Err(invalid("degree", format!("{} outside 1..=8", record.degree)));
    }
    if record.field.p != record.characteristic {
        return Err(invalid("field.p", format!("{} differs from the characteristic", record.field.p)));
    }
    let field = Field::new(&record.field).map_err(|e| invalid("field", e.to_string()))?;
    for t in record.configuration.entries() {
        t.validate(record.characteristic).map_err(|e| invalid("configuration", e.to_string()))?;
    }
    let mut constants = BTreeMap::new();
    for (i, p) in record.parameters.iter().enumerate() {
        let v = field.parse_element(&p.value).map_err(|e| invalid(&format!("parameters[{i}].value"), e.to_string()))?;
        constants.insert(p.name.clone(), v);
    }
    for (i, p) in record.parameters.iter().enumerate() {
        if let Some(c) = &p.constraint {
            match check_constraint(&field, c, &constants) {
                Ok(true) => {}
                Ok(false) => return Err(invalid(&format!("parameters[{i}].constraint"), format!("{c:?} fails at the bundled values"))),
                Err(e) => return Err(invalid(&format!("parameters[{i}].constraint"), e)),
            }
        }
    }
    record.ambient.validate().map_err(|e| invalid("ambient", e.to_string()))?;
    let ring = Ring::new(field.clone(), &record.ambient.variables, &[]).map_err(|e| invalid("ambient.variables", e.to_string()))?;
    let mut eqs = Vec::new();
    for (i, e) in record.equations.iter().enumerate() {
        eqs.push(parse_with_constants(e, &ring, &constants).map_err(|err| invalid(&format!("equations[{i}]"), err.to_string()))?);
    }
    let surface = Surface::new(record.ambient.clone(), eqs).map_err(|e| invalid("equations", e.to_string()))?;
    let mut points = Vec::new();
    for (i, s) in record.singularities.iter().enumerate() {
        let f = format!("singularities[{i}]");
        s.ty.validate(record.characteristic).map_err(|e| invalid(&format!("{f}.type"), e.to_string()))?;
        let pt = parse_point(&field, &s.point).map_err(|e| invalid(&format!("{f}.point"), e))?;
        if pt.len() != record.ambient.variables.len() || !surface.contains(&pt).unwrap_or(false) {
            return Err(invalid(&format!("{f}.point"), "point does not lie on the surface".into()));
        }
        points.push(pt);
    }
    let claimed = RdpConfiguration::new(record.singularities.iter().map(|s| s.ty).collect())
        .map_err(|e| invalid("singularities", e.to_string()))?;
    if claimed != record.configuration {
        return Err(invalid("singularities", format!("types add up to {claimed}, not {}", record.configuration)));
    }
    let mut generators = Vec::new();
    for (i, g) in record.aut0.iter().enumerate() {
        if record.aut0[..i].iter().any(|h| h.label == g.label) {
            return Err(invalid(&format!("aut0[{i}].label"), format!("duplicate label {:?}", g.label)));
        }
        generators.push(
            GroupSchemeGenerator::compile(g, &record.ambient, &field, &constants)
                .map_err(|e| invalid(&format!("aut0[{i}]"), e.to_string()))?,
        );
    }
    let loaded = LoadedRecord { record: record.clone(), field, constants, surface, points, generators };
    for (i, m) in record.motion_claims.iter().enumerate() {
        if loaded.generator(&m.generator).is_none() {
            return Err(invalid(&format!("motion_claims[{i}].generator"), format!("unknown generator {:?}", m.generator)));
        }
        let pt = loaded.parse_point(&m.point).map_err(|e| invalid(&format!("motion_claims[{i}].point"), e))?;
        if !loaded.surface.contains(&pt).unwrap_or(false) {
            return Err(invalid(&format!("motion_claims[{i}].point"), "point does not lie on the surface".into()));
        }
    }
    for (i, r) in record.relations.iter().enumerate() {
        for label in std::iter::once(&r.generator).chain(r.companion.iter()) {
            if loaded.generator(label).is_none() {
                return Err(invalid(&format!("relations[{i}]"), format!("unknown generator {label:?}")));
            }
        }
        r.relation.parse::<crate::action::Relation>().map_err(|e| invalid(&format!("relations[{i}].relation"), e.to_string()))?;
    }
    Ok(loaded)
}

/// Loads and validates every record of a document.
pub fn load_document(doc: &DatasetDocument) -> Result<Vec<LoadedRecord>, DatasetError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for r in &doc.records {
        if r.characteristic != doc.characteristic {
            return Err(DatasetError::Invalid {
                id: r.id.clone(),
                field: "characteristic".into(),
                msg: format!("document is for characteristic {}", doc.characteristic),
            });
        }
        if !seen.insert(r.id.clone()) {
            return Err(DatasetError::Invalid { id: r.id.clone(), field: "id".into(), msg: "duplicate id".into() });
        }
        out.push(load_record(r)?);
    }
    Ok(out)
}

/// Loads a dataset file.
pub fn load_dataset(path: &Path) -> Result<Vec<LoadedRecord>, DatasetError> {
    let src = std::fs::read_to_string(path).map_err(|e| DatasetError::Io { path: path.into(), source: e })?;
    load_document(&DatasetDocument::from_json(&src, &path.display().to_string())?)
}

/// File name of the document for characteristic `p`.
pub fn file_name(p: u32) -> String {
    format!("char{p}.json")
}

/// Source text of the document for `p`, from `DPK_DATA_DIR` if set.
pub fn document_source(p: u32) -> Result<(String, String), DatasetError> {
    if let Some(dir) = std::env::var_os(DATA_DIR_ENV) {
        let path = PathBuf::from(dir).join(file_name(p));
        let src = std::fs::read_to_string(&path).map_err(|e| DatasetError::Io { path: path.clone(), source: e })?;
        return Ok((src, path.display().to_string()));
    }
    BUNDLED
        .iter()
        .find(|(q, _)| *q == p)
        .map(|(_, s)| (s.to_string(), format!("bundled {}", file_name(p))))
        .ok_or(DatasetError::UnknownCharacteristic(p))
}

/// The document for `p` (bundled unless overridden).
pub fn document(p: u32) -> Result<DatasetDocument, DatasetError> {
    let (src, context) = document_source(p)?;
    DatasetDocument::from_json(&src, &context)
}

/// Verification categories.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    SingularSet,
    Classification,
    Invariance,
    Motion,
    TableRegeneration,
    Resource,
}

impl Category {
    pub const ALL: [Category; 6] = [
        Category::SingularSet,
        Category::Classification,
        Category::Invariance,
        Category::Motion,
        Category::TableRegeneration,
        Category::Resource,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Category::SingularSet => "singular-set",
            Category::Classification => "classification",
            Category::Invariance => "invariance",
            Category::Motion => "motion",
            Category::TableRegeneration => "table-regeneration",
            Category::Resource => "resource",
        }
    }
}

/// Result of one category for one record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub pass: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

/// Results for one record.
#[derive(Clone, Debug, Serialize)]
pub struct RecordResult {
    pub id: String,
    pub checks: BTreeMap<Category, CheckResult>,
    pub millis: u128,
}

impl RecordResult {
    pub fn pass(&self) -> bool {
        self.checks.values().all(|c| c.pass)
    }
}

/// Outcome of a verification run.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationSummary {
    pub pass: bool,
    pub records: Vec<RecordResult>,
}

impl VerificationSummary {
    pub fn new(records: Vec<RecordResult>) -> Self {
        Self { pass: records.iter().all(RecordResult::pass), records }
    }

    pub fn failed_ids(&self) -> Vec<&str> {
        self.records.iter().filter(|r| !r.pass()).map(|r| r.id.as_str()).collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            let cats: Vec<String> = r
                .checks
                .iter()
                .map(|(c, res)| format!("{}={}", c.name(), if res.pass { "ok" } else { "FAIL" }))
                .collect();
            let _ = writeln!(s, "{:<4} {:<18} {} ({} ms)", if r.pass() { "PASS" } else { "FAIL" }, r.id, cats.join(" "), r.millis);
            for (c, res) in &r.checks {
                for f in &res.failures {
                    let _ = writeln!(s, "       {}: {f}", c.name());
                }
            }
        }
        let failed = self.failed_ids().len();
        let _ = writeln!(s, "{} records, {} passed, {} failed", self.records.len(), self.records.len() - failed, failed);
        s
    }
}

/// Options of a verification run.
#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Worker threads; 0 uses the default pool.
    pub jobs: usize,
    pub strategy: Strategy,
}

type TableCache = Mutex<HashMap<(u32, u32), Result<BTreeSet<String>, String>>>;

fn table_configurations(cache: &TableCache, p: u32, d: u32) -> Result<BTreeSet<String>, String> {
    if let Some(v) = cache.lock().unwrap().get(&(p, d)) {
        return v.clone();
    }
    let v = generate_config_table_with(p, d, Strategy::Sequential)
        .map(|t: Vec<TableEntry>| t.into_iter().map(|e| e.configuration.to_string()).collect())
        .map_err(|e| e.to_string());
    cache.lock().unwrap().insert((p, d), v.clone());
    v
}

#[derive(Default)]
struct Checks(BTreeMap<Category, CheckResult>);

impl Checks {
    fn touch(&mut self, c: Category) {
        self.0.entry(c).or_insert(CheckResult { pass: true, failures: vec![] });
    }

    fn fail(&mut self, c: Category, msg: String) {
        let e = self.0.entry(c).or_insert(CheckResult { pass: true, failures: vec![] });
        e.pass = false;
        e.failures.push(msg);
    }

    fn singularity_error(&mut self, c: Category, context: &str, e: SingularityError) {
        match e {
            SingularityError::Resource(m) => self.fail(Category::Resource, format!("{context}: {m}")),
            e => self.fail(c, format!("{context}: {e}")),
        }
    }
}

fn verify_record(rec: &LoadedRecord, strategy: Strategy, tables: &TableCache) -> RecordResult {
    let start = Instant::now();
    let mut checks = Checks::default();
    for c in [Category::SingularSet, Category::Classification, Category::Invariance, Category::Motion, Category::TableRegeneration] {
        checks.touch(c);
    }
    let f = &rec.field;
    let ambient = rec.surface.ambient();

    // Singular set.
    match singular_coordinates(&rec.surface, strategy) {
        Ok(found) => {
            let found: BTreeSet<Vec<Fe>> = found.into_iter().collect();
            let claimed: BTreeSet<Vec<Fe>> = rec.points.iter().filter_map(|p| normalize_point(ambient, f, p)).collect();
            for p in found.difference(&claimed) {
                checks.fail(Category::SingularSet, format!("unlisted singular point {}", render_point(f, p)));
            }
            for p in claimed.difference(&found) {
                checks.fail(Category::SingularSet, format!("listed point {} is not singular", render_point(f, p)));
            }
        }
        Err(e) => checks.singularity_error(Category::SingularSet, "sweep", e),
    }

    // Classification of each listed point.
    for (claim, pt) in rec.record.singularities.iter().zip(&rec.points) {
        let ctx = render_point(f, pt);
        match local_singularity(&rec.surface, pt).and_then(|l| classify_rdp(&l)) {
            Ok(t) if t == claim.ty => {}
            Ok(t) => checks.fail(Category::Classification, format!("{ctx}: classified {t}, listed {}", claim.ty)),
            Err(e) => checks.singularity_error(Category::Classification, &ctx, e),
        }
    }

    // Invariance and relations.
    for g in &rec.generators {
        match verify_invariance(&rec.surface, g) {
            Ok(r) if r.preserved => {}
            Ok(r) => checks.fail(Category::Invariance, format!("{}: {}", g.label, r.detail.unwrap_or_default())),
            Err(e) => checks.fail(Category::Invariance, format!("{}: {e}", g.label)),
        }
    }
    for r in &rec.record.relations {
        let g = rec.generator(&r.generator).expect("validated at load");
        let h = r.companion.as_deref().and_then(|l| rec.generator(l));
        match verify_relations(g, h, &r.relation) {
            Ok(true) => {}
            Ok(false) => checks.fail(Category::Invariance, format!("relation {:?} fails for {}", r.relation, r.generator)),
            Err(e) => checks.fail(Category::Invariance, format!("relation {:?}: {e}", r.relation)),
        }
    }

    // Motion claims.
    for m in &rec.record.motion_claims {
        let g = rec.generator(&m.generator).expect("validated at load");
        let pt = rec.parse_point(&m.point).expect("validated at load");
        match point_motion(&rec.surface, g, &pt) {
            Ok(obs) if obs == m.claim => {}
            Ok(obs) => checks.fail(
                Category::Motion,
                format!("{} {:?} {}, claimed {:?}", m.generator, obs, render_point(f, &pt), m.claim).to_lowercase(),
            ),
            Err(ActionError::PointNotOnSurface) => checks.fail(Category::Motion, "point not on surface".into()),
            Err(e) => checks.fail(Category::Motion, e.to_string()),
        }
    }

    // Table regeneration: the configuration must be generated for (p, d).
    match table_configurations(tables, rec.record.characteristic, rec.record.degree) {
        Ok(set) => {
            if !set.contains(&rec.record.configuration.to_string()) {
                checks.fail(
                    Category::TableRegeneration,
                    format!("{} is not among the generated configurations for d={}", rec.record.configuration, rec.record.degree),
                );
            }
        }
        Err(e) => checks.fail(Category::TableRegeneration, e),
    }

    RecordResult { id: rec.record.id.clone(), checks: checks.0, millis: start.elapsed().as_millis() }
}

/// Verifies records, fanning out over `options.jobs` workers. The summary
/// lists records in input order whatever the number of workers.
pub fn run_verify(records: &[LoadedRecord], options: &VerifyOptions) -> VerificationSummary {
    let tables: TableCache = Mutex::new(HashMap::new());
    let strategy = options.strategy;
    let results = with_jobs(options.jobs, || par_map(strategy, records, |r| verify_record(r, Strategy::Sequential, &tables)));
    VerificationSummary::new(results)
}

/// Loads the document for `p` and all its records.
pub fn load_characteristic(p: u32) -> Result<Vec<LoadedRecord>, DatasetError> {
    load_document(&document(p)?)
}

/// Records selected by id (all when `id` is `None`).
pub fn select<'a>(records: &'a [LoadedRecord], id: Option<&str>) -> Result<Vec<LoadedRecord>, DatasetError> {
    match id {
        None => Ok(records.to_vec()),
        Some(id) => {
            let v: Vec<LoadedRecord> = records.iter().filter(|r| r.id() == id).cloned().collect();
            if v.is_empty() {
                Err(DatasetError::UnknownId(id.into()))
            } else {
                Ok(v)
            }
        }
    }
}

/// Singular points of a record's surface over its declared field, with types.
pub fn probe_singularities(record: &SurfaceRecord) -> Result<Vec<(String, Result<RdpType, String>)>, DatasetError> {
    let mut r = record.clone();
    r.singularities.clear();
    r.configuration = RdpConfiguration::new(vec![]).expect("empty configuration");
    r.motion_claims.clear();
    let loaded = load_record(&r)?;
    let f = &loaded.field;
    let pts = singular_coordinates(&loaded.surface, Strategy::Parallel)
        .map_err(|e| DatasetError::Invalid { id: r.id.clone(), field: "equations".into(), msg: e.to_string() })?;
    Ok(pts
        .iter()
        .map(|p| {
            let t = local_singularity(&loaded.surface, p).and_then(|l| classify_rdp(&l)).map_err(|e| e.to_string());
            (render_point(f, p), t)
        })
        .collect())
}
