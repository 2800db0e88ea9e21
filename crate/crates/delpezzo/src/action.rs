// SPDX-License-Identifier: Apache-2.0

//! Group-scheme actions given as parametrized substitutions: invariance of a
//! surface, motion of points, and relations between generators.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ffpoly::{quadric_ideal_membership, FfError, Fe, Field, ParamKind, ParamSpec, Polynomial, Ring};
use crate::singularity::{AmbientKind, AmbientSpace, Surface};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error("generator {label}: {msg}")]
    Invalid { label: String, msg: String },
    #[error("rings of generator and surface differ")]
    RingMismatch,
    #[error("the point is not on the surface")]
    PointNotOnSurface,
    #[error("unparsable relation {0:?}")]
    Relation(String),
    #[error(transparent)]
    Poly(#[from] FfError),
}

/// Serialized form of an action.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ActionMap {
    /// Image of each coordinate; omitted coordinates are fixed.
    Substitution { substitution: BTreeMap<String, String> },
    /// Row i gives the image of x_i as sum_j m[i][j] x_j.
    Matrix { matrix: Vec<Vec<String>> },
}

/// A generator as stored in the dataset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub label: String,
    pub params: Vec<ParamSpec>,
    #[serde(flatten)]
    pub action: ActionMap,
}

/// Parses `src` in `target`, replacing the named constants by field values.
pub fn parse_with_constants(src: &str, target: &Arc<Ring>, constants: &BTreeMap<String, Fe>) -> Result<Polynomial, FfError> {
    if constants.is_empty() {
        return target.parse(src);
    }
    let mut vars: Vec<String> = target.vars().to_vec();
    vars.extend(constants.keys().cloned());
    let ring = Ring::new(target.field().clone(), &vars, target.params())?;
    let p = ring.parse(src)?;
    let map: HashMap<String, Polynomial> = constants.iter().map(|(k, &v)| (k.clone(), target.constant(v))).collect();
    p.substitute_into(&map, target)
}

/// A compiled generator: images of the coordinates over the ring of
/// coordinates and group parameters.
#[derive(Clone, Debug)]
pub struct GroupSchemeGenerator {
    pub label: String,
    pub params: Vec<ParamSpec>,
    ring: Arc<Ring>,
    weights: Vec<u32>,
    images: Vec<Polynomial>,
}

impl GroupSchemeGenerator {
    pub fn compile(
        spec: &GeneratorSpec,
        ambient: &AmbientSpace,
        field: &Arc<Field>,
        constants: &BTreeMap<String, Fe>,
    ) -> Result<Self, ActionError> {
        let invalid = |msg: String| ActionError::Invalid { label: spec.label.clone(), msg };
        for ps in &spec.params {
            ps.validate(field.p()).map_err(|e| invalid(e.to_string()))?;
        }
        let ring = Ring::new(field.clone(), &ambient.variables, &spec.params)?;
        let vars = &ambient.variables;
        let images: Vec<Polynomial> = match &spec.action {
            ActionMap::Substitution { substitution } => {
                if let Some(k) = substitution.keys().find(|k| !vars.contains(k)) {
                    return Err(invalid(format!("unknown coordinate {k}")));
                }
                vars.iter()
                    .map(|v| match substitution.get(v) {
                        Some(s) => parse_with_constants(s, &ring, constants),
                        None => ring.gen(v),
                    })
                    .collect::<Result<_, _>>()?
            }
            ActionMap::Matrix { matrix } => {
                if matrix.len() != vars.len() || matrix.iter().any(|r| r.len() != vars.len()) {
                    return Err(invalid(format!("matrix must be {n}x{n}", n = vars.len())));
                }
                let mut out = Vec::new();
                for row in matrix {
                    let mut img = ring.zero();
                    for (entry, v) in row.iter().zip(vars) {
                        img = &img + &(&parse_with_constants(entry, &ring, constants)? * &ring.gen(v)?);
                    }
                    out.push(img);
                }
                out
            }
        };
        let g = Self { label: spec.label.clone(), params: spec.params.clone(), ring, weights: ambient.weights(), images };
        g.check_weights(ambient).map_err(invalid)?;
        let id = g.specialize_identity()?;
        for (v, img) in vars.iter().zip(&id) {
            if *img != g.ring.gen(v)? {
                return Err(invalid(format!("does not specialize to the identity: {v} -> {img}")));
            }
        }
        Ok(g)
    }

    fn check_weights(&self, ambient: &AmbientSpace) -> Result<(), String> {
        if ambient.kind == AmbientKind::Affine {
            return Ok(());
        }
        for ((v, img), &w) in ambient.variables.iter().zip(&self.images).zip(&self.weights) {
            match img.weighted_homogeneous_check(&self.weights).map_err(|e| e.to_string())? {
                Some(d) if d == w as i64 || img.is_zero() => {}
                _ => return Err(format!("image of {v} is not homogeneous of weight {w}")),
            }
        }
        Ok(())
    }

    /// Images with additive and nilpotent parameters set to 0 and unit
    /// parameters set to 1.
    pub fn specialize_identity(&self) -> Result<Vec<Polynomial>, ActionError> {
        let vars_ring = Ring::new(self.ring.field().clone(), self.ring.vars(), &[])?;
        let map: HashMap<String, Polynomial> = self
            .params
            .iter()
            .map(|p| {
                let v = match p.kind {
                    ParamKind::Nilpotent { .. } | ParamKind::Additive => 0,
                    ParamKind::RootOfUnity { .. } | ParamKind::Unit => 1,
                };
                (p.name.clone(), vars_ring.constant(v))
            })
            .collect();
        let back: HashMap<String, Polynomial> = HashMap::new();
        self.images
            .iter()
            .map(|i| Ok(i.substitute_into(&map, &vars_ring)?.substitute_into(&back, &self.ring)?))
            .collect()
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    /// The same action over a larger ring containing this one's generators.
    pub fn lift(&self, target: &Arc<Ring>) -> Result<Self, ActionError> {
        let empty = HashMap::new();
        let images = self.images.iter().map(|i| i.substitute_into(&empty, target)).collect::<Result<_, _>>()?;
        Ok(Self { ring: target.clone(), images, ..self.clone() })
    }

    /// Replaces parameters by expressions in this ring.
    pub fn reparametrize(&self, map: &HashMap<String, Polynomial>) -> Result<Self, ActionError> {
        let images = self.images.iter().map(|i| i.substitute_into(map, &self.ring)).collect::<Result<_, _>>()?;
        Ok(Self { images, ..self.clone() })
    }

    /// compose(s, t)(x_i) = s(x_i) evaluated at x = t(x).
    pub fn compose(&self, other: &Self) -> Result<Self, ActionError> {
        if self.ring != other.ring {
            return Err(ActionError::RingMismatch);
        }
        let map: HashMap<String, Polynomial> = self.ring.vars().iter().cloned().zip(other.images.iter().cloned()).collect();
        let images = self.images.iter().map(|i| i.substitute_into(&map, &self.ring)).collect::<Result<_, _>>()?;
        Ok(Self { label: format!("{}*{}", self.label, other.label), images, ..self.clone() })
    }

    /// Equality of the induced maps on the (weighted) projective space:
    /// s(x_j) t(x_i)^{w_j} = t(x_j) s(x_i)^{w_j} for weight-1 coordinates i.
    pub fn projectively_equal(&self, other: &Self) -> Result<bool, ActionError> {
        if self.ring != other.ring {
            return Err(ActionError::RingMismatch);
        }
        let n = self.images.len();
        for i in (0..n).filter(|&i| self.weights[i] == 1) {
            for j in 0..n {
                let w = self.weights[j] as u64;
                let lhs = &self.images[j] * &other.images[i].pow(w);
                let rhs = &other.images[j] * &self.images[i].pow(w);
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn identity(&self) -> Result<Self, ActionError> {
        let images = self.ring.vars().iter().map(|v| self.ring.gen(v)).collect::<Result<_, _>>()?;
        Ok(Self { label: "id".into(), images, ..self.clone() })
    }
}

/// Outcome of an invariance check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub label: String,
    pub preserved: bool,
    /// Scaling unit of a hypersurface equation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    /// Coefficients expressing each transformed generator in the ideal.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

fn lift_equations(surface: &Surface, ring: &Arc<Ring>) -> Result<Vec<Polynomial>, ActionError> {
    if surface.field().spec() != ring.field().spec() || surface.ambient().variables.as_slice() != ring.vars() {
        return Err(ActionError::RingMismatch);
    }
    let empty = HashMap::new();
    Ok(surface.equations().iter().map(|e| e.substitute_into(&empty, ring)).collect::<Result<_, _>>()?)
}

fn transform(g: &GroupSchemeGenerator, e: &Polynomial) -> Result<Polynomial, ActionError> {
    let map: HashMap<String, Polynomial> = g.ring.vars().iter().cloned().zip(g.images.iter().cloned()).collect();
    Ok(e.substitute_into(&map, &g.ring)?)
}

/// Whether `g` maps the surface to itself.
pub fn verify_invariance(surface: &Surface, g: &GroupSchemeGenerator) -> Result<InvarianceReport, ActionError> {
    let eqs = lift_equations(surface, &g.ring)?;
    let mut report = InvarianceReport { label: g.label.clone(), preserved: false, unit: None, certificate: None, detail: None };
    if eqs.len() == 1 {
        let f = &eqs[0];
        let tf = transform(g, f)?;
        let (e, c) = f.terms().next().map(|(e, c)| (e[..g.ring.nvars()].to_vec(), c)).expect("nonzero equation");
        let field = g.ring.field();
        let u = match tf.by_var_monomial().get(&e) {
            Some(coef) => coef.scale(field.inv(c).expect("nonzero coefficient")),
            None => g.ring.zero(),
        };
        if &u * f != tf {
            report.detail = Some("transformed equation is not a multiple of the equation".into());
        } else if !u.is_unit() {
            report.detail = Some(format!("scaling factor {u} is not a unit"));
        } else {
            report.preserved = true;
        }
        report.unit = Some(u.to_string());
        return Ok(report);
    }
    let mut cert = Vec::new();
    for (k, q) in eqs.iter().enumerate() {
        let tq = transform(g, q)?;
        match quadric_ideal_membership(&tq, &eqs)? {
            Some(coeffs) => {
                let mut sum = g.ring.zero();
                for (c, h) in coeffs.iter().zip(&eqs) {
                    sum = &sum + &(c * h);
                }
                if sum != tq {
                    report.detail = Some(format!("certificate for equation {} does not recheck", k + 1));
                    return Ok(report);
                }
                cert.push(coeffs.iter().map(|c| c.to_string()).collect());
            }
            None => {
                report.detail = Some(format!("image of equation {} is not in the ideal", k + 1));
                return Ok(report);
            }
        }
    }
    report.preserved = true;
    report.certificate = Some(cert);
    Ok(report)
}

/// Whether a point is fixed or moved by an action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Motion {
    Fixes,
    Moves,
}

/// Observed motion of `point` under `g`.
pub fn point_motion(surface: &Surface, g: &GroupSchemeGenerator, point: &[Fe]) -> Result<Motion, ActionError> {
    if !surface.contains(point).map_err(|_| ActionError::PointNotOnSurface)? {
        return Err(ActionError::PointNotOnSurface);
    }
    let im: Vec<Polynomial> = g.images.iter().map(|i| i.specialize_vars(point)).collect::<Result<_, _>>()?;
    let ring = &g.ring;
    let w = &g.weights;
    let n = point.len();
    let f = ring.field();
    // Coordinates that vanish must stay zero.
    if (0..n).any(|j| point[j] == 0 && !im[j].is_zero()) {
        return Ok(Motion::Moves);
    }
    let nz: Vec<usize> = (0..n).filter(|&j| point[j] != 0).collect();
    if !nz.iter().any(|&j| im[j].is_unit()) {
        return Ok(Motion::Moves);
    }
    for &i in &nz {
        for &j in &nz {
            // im_i^{w_j} P_j^{w_i} == im_j^{w_i} P_i^{w_j}
            let lhs = im[i].pow(w[j] as u64).scale(f.pow(point[j], w[i] as i64));
            let rhs = im[j].pow(w[i] as u64).scale(f.pow(point[i], w[j] as i64));
            if lhs != rhs {
                return Ok(Motion::Moves);
            }
        }
    }
    Ok(Motion::Fixes)
}

/// Whether the observed motion matches the claim.
pub fn verify_point_motion(surface: &Surface, g: &GroupSchemeGenerator, point: &[Fe], claim: Motion) -> Result<bool, ActionError> {
    Ok(point_motion(surface, g, point)? == claim)
}

/// Relation between a generator and a companion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    /// g composed with itself n times is the identity.
    Power(u32),
    /// g h = h g.
    Commute,
    /// h g = g' h where g' is g with each parameter replaced by its expression.
    Conjugate(Vec<(String, String)>),
}

impl std::str::FromStr for Relation {
    type Err = ActionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ActionError::Relation(s.to_string());
        let t = s.trim();
        if t == "commute" {
            return Ok(Relation::Commute);
        }
        if let Some(rest) = t.strip_prefix("power ") {
            let n: u32 = rest.trim().parse().map_err(|_| bad())?;
            return if n == 0 { Err(bad()) } else { Ok(Relation::Power(n)) };
        }
        if let Some(rest) = t.strip_prefix("conjugate ") {
            let mut subs = Vec::new();
            for part in rest.split(',') {
                let (param, expr) = part.split_once("->").ok_or_else(bad)?;
                let (param, expr) = (param.trim(), expr.trim());
                if param.is_empty() || expr.is_empty() {
                    return Err(bad());
                }
                subs.push((param.to_string(), expr.to_string()));
            }
            return Ok(Relation::Conjugate(subs));
        }
        Err(bad())
    }
}

/// Checks a relation as an identity of maps over the joint parameter ring.
pub fn verify_relations(g: &GroupSchemeGenerator, companion: Option<&GroupSchemeGenerator>, relation: &str) -> Result<bool, ActionError> {
    let rel: Relation = relation.parse()?;
    if let Relation::Power(n) = rel {
        let mut acc = g.clone();
        for _ in 1..n {
            acc = acc.compose(g)?;
        }
        return acc.projectively_equal(&g.identity()?);
    }
    let h = companion.ok_or_else(|| ActionError::Relation(format!("{relation}: needs a companion generator")))?;
    if g.ring.vars() != h.ring.vars() || g.ring.field().spec() != h.ring.field().spec() {
        return Err(ActionError::RingMismatch);
    }
    let mut params = g.params.clone();
    for p in &h.params {
        match params.iter().find(|q| q.name == p.name) {
            Some(q) if q != p => return Err(ActionError::Relation(format!("parameter {} declared twice", p.name))),
            Some(_) => {}
            None => params.push(p.clone()),
        }
    }
    let joint = Ring::new(g.ring.field().clone(), g.ring.vars(), &params)?;
    let (g, h) = (g.lift(&joint)?, h.lift(&joint)?);
    match rel {
        Relation::Commute => g.compose(&h)?.projectively_equal(&h.compose(&g)?),
        Relation::Conjugate(subs) => {
            let mut map = HashMap::new();
            for (param, expr) in subs {
                if !g.params.iter().any(|p| p.name == param) {
                    return Err(ActionError::Relation(format!("{relation}: {param} is not a parameter of {}", g.label)));
                }
                map.insert(param, joint.parse(&expr)?);
            }
            let g2 = g.reparametrize(&map)?;
            h.compose(&g)?.projectively_equal(&g2.compose(&h)?)
        }
        Relation::Power(_) => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::FieldSpec;

    fn setup(p: u32, ambient: AmbientSpace, eqs: &[&str]) -> Surface {
        let field = Field::new(&FieldSpec::prime(p)).unwrap();
        let ring = Ring::new(field, &ambient.variables, &[]).unwrap();
        Surface::new(ambient, eqs.iter().map(|e| ring.parse(e).unwrap()).collect()).unwrap()
    }

    fn subst(label: &str, params: Vec<ParamSpec>, pairs: &[(&str, &str)]) -> GeneratorSpec {
        let substitution = pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        GeneratorSpec { label: label.into(), params, action: ActionMap::Substitution { substitution } }
    }

    fn matrix(label: &str, params: Vec<ParamSpec>, rows: &[&[&str]]) -> GeneratorSpec {
        let matrix = rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
        GeneratorSpec { label: label.into(), params, action: ActionMap::Matrix { matrix } }
    }

    fn compile(s: &Surface, g: &GeneratorSpec) -> GroupSchemeGenerator {
        GroupSchemeGenerator::compile(g, s.ambient(), s.field(), &BTreeMap::new()).unwrap()
    }

    fn mu(n: u32) -> Vec<ParamSpec> {
        vec![ParamSpec::new("lambda", ParamKind::RootOfUnity { order: n })]
    }

    fn alpha(n: u32) -> Vec<ParamSpec> {
        vec![ParamSpec::new("eps", ParamKind::Nilpotent { order: n })]
    }

    fn klein() -> Surface {
        setup(7, AmbientSpace::weighted(&["x", "y", "z", "w"], &[1, 1, 1, 2]), &["w^2 - (x^3*y + y^3*z + z^3*x)"])
    }

    #[test]
    fn mu7_preserves_klein_cover() {
        let s = klein();
        let g = compile(&s, &subst("mu_7", mu(7), &[("x", "lambda*x"), ("y", "lambda^4*y"), ("z", "lambda^2*z")]));
        let r = verify_invariance(&s, &g).unwrap();
        assert!(r.preserved, "{r:?}");
        assert_eq!(r.unit.as_deref(), Some("1"));
        let wrong = compile(&s, &subst("mu_7", mu(7), &[("x", "lambda*x"), ("y", "lambda*y"), ("z", "lambda*z")]));
        assert!(!verify_invariance(&s, &wrong).unwrap().preserved);
    }

    #[test]
    fn alpha5_on_quintic_moves_the_singular_point() {
        let s = setup(
            5,
            AmbientSpace::projective(&["x0", "x1", "x2", "x3", "x4", "x5"]),
            &["x0*x2 - x1^2", "x0*x3 - x1*x4", "x2*x4 - x1*x3", "x1*x2 + x4^2 + x0*x5", "x2^2 + x3*x4 + x1*x5"],
        );
        let g = compile(
            &s,
            &matrix(
                "alpha_5",
                alpha(5),
                &[
                    &["1", "0", "0", "0", "0", "0"],
                    &["0", "1", "-2*eps^2", "2*eps^3", "eps", "2*eps^4"],
                    &["0", "0", "1", "2*eps", "0", "-eps^2"],
                    &["0", "0", "0", "1", "0", "-eps"],
                    &["0", "0", "eps", "eps^2", "1", "-2*eps^3"],
                    &["0", "0", "0", "0", "0", "1"],
                ],
            ),
        );
        let r = verify_invariance(&s, &g).unwrap();
        assert!(r.preserved, "{r:?}");
        assert!(verify_point_motion(&s, &g, &[0, 0, 0, 0, 0, 1], Motion::Moves).unwrap());
    }

    #[test]
    fn identity_specialization_fixes_points() {
        let s = klein();
        let g = compile(&s, &subst("id", vec![], &[]));
        assert!(verify_invariance(&s, &g).unwrap().preserved);
        assert_eq!(point_motion(&s, &g, &[1, 2, 4, 0]).unwrap(), Motion::Fixes);
        assert!(matches!(point_motion(&s, &g, &[1, 1, 0, 0]), Err(ActionError::PointNotOnSurface)));
    }

    #[test]
    fn generator_must_specialize_to_identity() {
        let s = klein();
        let bad = subst("bad", mu(7), &[("x", "y")]);
        assert!(matches!(GroupSchemeGenerator::compile(&bad, s.ambient(), s.field(), &BTreeMap::new()), Err(ActionError::Invalid { .. })));
        let inhomogeneous = subst("bad", alpha(7), &[("w", "w + eps*x")]);
        assert!(GroupSchemeGenerator::compile(&inhomogeneous, s.ambient(), s.field(), &BTreeMap::new()).is_err());
    }

    #[test]
    fn relations() {
        let s = setup(3, AmbientSpace::projective(&["x0", "x1", "x2", "x3"]), &["x0^3 + x1*x2*x3"]);
        let m = compile(&s, &subst("mu_3", mu(3), &[("x1", "lambda*x1"), ("x2", "lambda^2*x2")]));
        assert!(verify_relations(&m, None, "power 3").unwrap());
        assert!(!verify_relations(&m, None, "power 2").unwrap());
        let e = vec![ParamSpec::new("e1", ParamKind::Nilpotent { order: 3 })];
        let f = vec![ParamSpec::new("e2", ParamKind::Nilpotent { order: 3 })];
        let a1 = compile(&s, &subst("a1", e, &[("x0", "x0 + e1*x1")]));
        let a2 = compile(&s, &subst("a2", f, &[("x0", "x0 + e2*x2")]));
        assert!(verify_relations(&a1, Some(&a2), "commute").unwrap());
        let gm = vec![ParamSpec::new("mu", ParamKind::Unit)];
        let t = compile(&s, &subst("G_m", gm, &[("x1", "mu*x1"), ("x2", "mu^-1*x2")]));
        assert!(verify_relations(&a1, Some(&t), "conjugate e1 -> mu^-1*e1").unwrap());
        assert!(!verify_relations(&a1, Some(&t), "conjugate e1 -> e1").unwrap());
        assert!(matches!(verify_relations(&a1, None, "braid"), Err(ActionError::Relation(_))));
    }
}
