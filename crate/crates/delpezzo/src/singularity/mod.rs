// SPDX-License-Identifier: Apache-2.0

//! Singular points of the table surfaces over finite fields and their
//! classification as rational double points.

mod classify;
mod local;
pub(crate) mod series;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::CatalogError;
use crate::exec::{par_map, Strategy};
use crate::ffpoly::{FfError, Fe, Field, Polynomial};

pub use classify::{classify_rdp, classify_report, tjurina_number, tjurina_number_with, ClassificationReport, DEFAULT_MAX_DEGREE};
pub use local::local_singularity;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SingularityError {
    #[error("the point is not singular")]
    NotSingular,
    #[error("not a rational double point: {0}")]
    NotRdp(String),
    #[error("classification conflict: normal form gives {normal_form} (tau {expected}) but tau = {tau}")]
    Conflict { normal_form: String, tau: u32, expected: u32 },
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("point {0} lies outside the weight-1 charts")]
    UnsupportedChart(String),
    #[error("invalid ambient space: {0}")]
    Ambient(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Poly(#[from] FfError),
}

/// Kind of ambient space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AmbientKind {
    Projective,
    Weighted { weights: Vec<u32> },
    Affine,
}

/// Ambient space with its coordinate names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbientSpace {
    #[serde(flatten)]
    pub kind: AmbientKind,
    pub variables: Vec<String>,
}

impl AmbientSpace {
    pub fn projective(vars: &[&str]) -> Self {
        Self { kind: AmbientKind::Projective, variables: vars.iter().map(|s| s.to_string()).collect() }
    }

    pub fn weighted(vars: &[&str], weights: &[u32]) -> Self {
        Self { kind: AmbientKind::Weighted { weights: weights.to_vec() }, variables: vars.iter().map(|s| s.to_string()).collect() }
    }

    pub fn affine(vars: &[&str]) -> Self {
        Self { kind: AmbientKind::Affine, variables: vars.iter().map(|s| s.to_string()).collect() }
    }

    pub fn weights(&self) -> Vec<u32> {
        match &self.kind {
            AmbientKind::Weighted { weights } => weights.clone(),
            _ => vec![1; self.variables.len()],
        }
    }

    pub fn validate(&self) -> Result<(), SingularityError> {
        let n = self.variables.len();
        match &self.kind {
            AmbientKind::Projective if (4..=7).contains(&n) => Ok(()),
            AmbientKind::Weighted { weights } if weights == &[1, 1, 1, 2] || weights == &[1, 1, 2, 3] => Ok(()),
            AmbientKind::Affine if n == 3 => Ok(()),
            _ => Err(SingularityError::Ambient(format!("{self:?}"))),
        }
    }

    /// Dimension of the affine charts.
    fn chart_dim(&self) -> usize {
        match self.kind {
            AmbientKind::Affine => self.variables.len(),
            _ => self.variables.len() - 1,
        }
    }

    /// Chart index for a point: the first weight-1 coordinate that is nonzero.
    pub fn chart_of(&self, point: &[Fe]) -> Option<usize> {
        if self.kind == AmbientKind::Affine {
            return None;
        }
        let w = self.weights();
        (0..point.len()).find(|&i| w[i] == 1 && point[i] != 0)
    }
}

/// A surface given by equations over a finite field.
#[derive(Clone, Debug)]
pub struct Surface {
    ambient: AmbientSpace,
    equations: Vec<Polynomial>,
}

impl Surface {
    /// Equations must be parameter-free, live in a ring whose variables are
    /// the ambient coordinates, and be (weighted) homogeneous.
    pub fn new(ambient: AmbientSpace, equations: Vec<Polynomial>) -> Result<Self, SingularityError> {
        ambient.validate()?;
        let first = equations.first().ok_or_else(|| SingularityError::Ambient("no equations".into()))?;
        let ring = first.ring().clone();
        if ring.vars() != ambient.variables.as_slice() {
            return Err(SingularityError::Ambient("ring variables differ from ambient coordinates".into()));
        }
        let weights = ambient.weights();
        for e in &equations {
            if e.ring() != &ring || !e.is_parameter_free() {
                return Err(SingularityError::Ambient(format!("equation {e} is not over the ambient ring")));
            }
            if ambient.kind != AmbientKind::Affine && e.weighted_homogeneous_check(&weights)?.is_none() {
                return Err(SingularityError::Ambient(format!("equation {e} is not homogeneous")));
            }
        }
        let codim = ambient.chart_dim() - 2;
        if equations.len() < codim {
            return Err(SingularityError::Ambient(format!("{} equations cannot cut out a surface", equations.len())));
        }
        Ok(Self { ambient, equations })
    }

    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }

    pub fn equations(&self) -> &[Polynomial] {
        &self.equations
    }

    pub fn field(&self) -> &Arc<Field> {
        self.equations[0].field()
    }

    /// Whether the point satisfies every equation.
    pub fn contains(&self, point: &[Fe]) -> Result<bool, SingularityError> {
        for e in &self.equations {
            if !e.specialize_vars(point)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether the Jacobian criterion flags the point as singular.
    pub fn is_singular_at(&self, point: &[Fe]) -> Result<bool, SingularityError> {
        if !self.contains(point)? {
            return Ok(false);
        }
        let charts = self.charts();
        let chart = match self.ambient.chart_of(point) {
            Some(i) => charts.iter().find(|c| c.index == Some(i)).expect("chart exists"),
            None if self.ambient.kind == AmbientKind::Affine => &charts[0],
            None => return Err(SingularityError::UnsupportedChart(render_point(self.field(), point))),
        };
        let scaled = normalize_point(&self.ambient, self.field(), point).unwrap();
        let u: Vec<Fe> = chart.free_all.iter().map(|&j| scaled[j]).collect();
        Ok(chart.singular(self.field(), &u))
    }

    fn charts(&self) -> Vec<Chart> {
        let f = self.field();
        let n = self.ambient.variables.len();
        let weights = self.ambient.weights();
        let mut out = Vec::new();
        let mk = |index: Option<usize>, zero: Vec<usize>| {
            let free_all: Vec<usize> = (0..n).filter(|&j| Some(j) != index).collect();
            let free_scan: Vec<usize> = free_all.iter().copied().filter(|j| !zero.contains(j)).collect();
            let eqs: Vec<CompiledPoly> = self.equations.iter().map(|e| CompiledPoly::dehomogenize(e, index, &free_all)).collect();
            let jac: Vec<Vec<CompiledPoly>> = eqs.iter().map(|e| (0..free_all.len()).map(|j| e.derivative(j, f)).collect()).collect();
            Chart { index, free_all, free_scan, eqs, jac, codim: self.ambient.chart_dim() - 2 }
        };
        match self.ambient.kind {
            AmbientKind::Affine => out.push(mk(None, vec![])),
            _ => {
                for i in 0..n {
                    if weights[i] == 1 {
                        let zero: Vec<usize> = (0..i).filter(|&j| weights[j] == 1).collect();
                        out.push(mk(Some(i), zero));
                    }
                }
            }
        }
        out
    }
}

/// Dehomogenized equation as a flat term list over the chart coordinates.
#[derive(Clone, Debug)]
struct CompiledPoly {
    terms: Vec<(Fe, Vec<u32>)>,
}

impl CompiledPoly {
    fn dehomogenize(p: &Polynomial, chart: Option<usize>, free: &[usize]) -> Self {
        let mut map = std::collections::BTreeMap::new();
        let f = p.field();
        for (e, c) in p.terms() {
            if chart.is_some_and(|i| e[i] < 0) {
                continue;
            }
            let key: Vec<u32> = free.iter().map(|&j| e[j] as u32).collect();
            let v = map.entry(key).or_insert(0);
            *v = f.add(*v, c);
        }
        Self { terms: map.into_iter().filter(|(_, c)| *c != 0).map(|(k, c)| (c, k)).collect() }
    }

    fn derivative(&self, j: usize, f: &Field) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(_, e)| e[j] > 0)
            .map(|(c, e)| {
                let mut d = e.clone();
                d[j] -= 1;
                (f.scale(*c, e[j] as i64), d)
            })
            .filter(|(c, _)| *c != 0)
            .collect();
        Self { terms }
    }

    fn eval(&self, f: &Field, u: &[Fe]) -> Fe {
        let mut acc = 0;
        for (c, e) in &self.terms {
            let mut v = *c;
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    v = f.mul(v, f.pow(u[i], x as i64));
                    if v == 0 {
                        break;
                    }
                }
            }
            acc = f.add(acc, v);
        }
        acc
    }
}

struct Chart {
    /// Coordinate set to 1 (None for affine ambients).
    index: Option<usize>,
    /// All chart coordinates, in ambient order.
    free_all: Vec<usize>,
    /// Coordinates scanned (those not forced to 0 by earlier charts).
    free_scan: Vec<usize>,
    eqs: Vec<CompiledPoly>,
    jac: Vec<Vec<CompiledPoly>>,
    codim: usize,
}

impl Chart {
    fn singular(&self, f: &Field, u: &[Fe]) -> bool {
        if self.eqs.iter().any(|e| e.eval(f, u) != 0) {
            return false;
        }
        let mut m: Vec<Vec<Fe>> = self.jac.iter().map(|row| row.iter().map(|d| d.eval(f, u)).collect()).collect();
        rank(f, &mut m) < self.codim
    }
}

/// Rank over the field (destroys the matrix).
pub(crate) fn rank(f: &Field, m: &mut [Vec<Fe>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        let inv = f.inv(m[r][c]).unwrap();
        for i in r + 1..rows {
            if m[i][c] != 0 {
                let k = f.mul(m[i][c], inv);
                for j in c..cols {
                    m[i][j] = f.sub(m[i][j], f.mul(k, m[r][j]));
                }
            }
        }
        r += 1;
    }
    r
}

/// Scales a point so that its chart coordinate is 1.
pub fn normalize_point(ambient: &AmbientSpace, f: &Field, point: &[Fe]) -> Option<Vec<Fe>> {
    if ambient.kind == AmbientKind::Affine {
        return Some(point.to_vec());
    }
    let i = ambient.chart_of(point)?;
    let inv = f.inv(point[i])?;
    let w = ambient.weights();
    Some(point.iter().zip(&w).map(|(&x, &wi)| f.mul(x, f.pow(inv, wi as i64))).collect())
}

pub fn render_point(f: &Field, point: &[Fe]) -> String {
    let parts: Vec<String> = point.iter().map(|&x| f.render(x)).collect();
    format!("[{}]", parts.join(":"))
}

/// A singular point with its local equation in three affine variables.
#[derive(Clone, Debug)]
pub struct LocalSingularity {
    /// Ambient coordinate set to 1, if any.
    pub chart: Option<usize>,
    /// Point coordinates, normalized so the chart coordinate is 1.
    pub point: Vec<Fe>,
    /// Local equation after translation to the origin.
    pub local_equation: Polynomial,
    /// Set when the equation is only known modulo m^{D+1}.
    pub truncation: Option<u32>,
}

impl LocalSingularity {
    /// Germ at the origin of an affine equation in three variables.
    pub fn from_germ(f: Polynomial) -> Result<Self, SingularityError> {
        if f.ring().nvars() != 3 || !f.is_parameter_free() {
            return Err(SingularityError::Ambient("a germ needs three variables and no parameters".into()));
        }
        Ok(Self { chart: None, point: vec![0; 3], local_equation: f, truncation: None })
    }

    pub fn field(&self) -> &Arc<Field> {
        self.local_equation.field()
    }
}

impl fmt::Display for LocalSingularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_point(self.field(), &self.point))
    }
}

/// All rational singular points over the surface's field, chart by chart.
pub fn singular_points(surface: &Surface) -> Result<Vec<LocalSingularity>, SingularityError> {
    singular_points_with(surface, Strategy::default())
}

/// [`singular_points`] with an explicit execution strategy.
pub fn singular_points_with(surface: &Surface, strategy: Strategy) -> Result<Vec<LocalSingularity>, SingularityError> {
    let points = singular_coordinates(surface, strategy)?;
    points.iter().map(|p| local_singularity(surface, p)).collect()
}

/// Coordinates of the rational singular points (no local analysis).
pub fn singular_coordinates(surface: &Surface, strategy: Strategy) -> Result<Vec<Vec<Fe>>, SingularityError> {
    let f = surface.field().clone();
    let q = f.q() as u64;
    let n = surface.ambient.variables.len();
    let mut out = Vec::new();
    for chart in surface.charts() {
        let k = chart.free_scan.len() as u32;
        let total = q.checked_pow(k).filter(|&t| t <= 50_000_000).ok_or_else(|| {
            SingularityError::Resource(format!("chart sweep of {q}^{k} points"))
        })?;
        let blocks: Vec<u64> = if k == 0 { vec![0] } else { (0..q).collect() };
        let per_block = if k == 0 { 1 } else { total / q };
        let found: Vec<Vec<Vec<Fe>>> = par_map(strategy, &blocks, |&b| {
            let mut hits = Vec::new();
            let mut u = vec![0 as Fe; chart.free_all.len()];
            for s in 0..per_block {
                let mut code = b * per_block + s;
                let mut full = vec![0 as Fe; n];
                if let Some(i) = chart.index {
                    full[i] = 1;
                }
                for &j in chart.free_scan.iter().rev() {
                    full[j] = (code % q) as Fe;
                    code /= q;
                }
                for (slot, &j) in u.iter_mut().zip(&chart.free_all) {
                    *slot = full[j];
                }
                if chart.singular(&f, &u) {
                    hits.push(full);
                }
            }
            hits
        });
        out.extend(found.into_iter().flatten());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::{FieldSpec, Ring};

    fn surface(p: u32, ambient: AmbientSpace, eqs: &[&str]) -> Surface {
        let field = Field::new(&FieldSpec::prime(p)).unwrap();
        let ring = Ring::new(field, &ambient.variables, &[]).unwrap();
        Surface::new(ambient, eqs.iter().map(|e| ring.parse(e).unwrap()).collect()).unwrap()
    }

    fn summary(s: &Surface) -> Vec<(String, String)> {
        let f = s.field().clone();
        singular_points(s)
            .unwrap()
            .iter()
            .map(|l| (render_point(&f, &l.point), classify_rdp(l).unwrap().to_string()))
            .collect()
    }

    #[test]
    fn weighted_degree_two_a6() {
        let s = surface(7, AmbientSpace::weighted(&["x", "y", "z", "w"], &[1, 1, 1, 2]), &["w^2 - (x^3*y + y^3*z + z^3*x)"]);
        let pts = summary(&s);
        assert_eq!(pts.len(), 1, "{pts:?}");
        assert_eq!(pts[0].1, "A6");
    }

    #[test]
    fn cubic_surface_char5() {
        let s = surface(5, AmbientSpace::projective(&["x0", "x1", "x2", "x3"]), &["x0^2*x1 + x1^2*x2 + x2^2*x3 + x3^2*x0"]);
        let pts = summary(&s);
        assert_eq!(pts.len(), 1, "{pts:?}");
        assert_eq!(pts[0].1, "A4");
    }

    #[test]
    fn weighted_degree_two_e6_char3() {
        let s = surface(3, AmbientSpace::weighted(&["x", "y", "z", "w"], &[1, 1, 1, 2]), &["w^2 - (y^4 + x*z^3)"]);
        assert_eq!(summary(&s), vec![("[1:0:0:0]".to_string(), "E6^0".to_string())]);
    }

    #[test]
    fn quartic_del_pezzo_complete_intersection() {
        // At x4 = 1 the germ is x0*x1 = (x3^2 + x0^2 + x1^2)^2.
        let s = surface(7, AmbientSpace::projective(&["x0", "x1", "x2", "x3", "x4"]), &["x0*x1 - x2^2", "x2*x4 - x3^2 - x0^2 - x1^2"]);
        let pts = summary(&s);
        assert_eq!(pts, vec![("[0:0:0:0:1]".to_string(), "A3".to_string())]);
    }
}
