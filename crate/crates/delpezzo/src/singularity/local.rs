// SPDX-License-Identifier: Apache-2.0

//! Local equations at singular points, including elimination of variables
//! for surfaces cut out by several equations.

use std::collections::HashMap;
use std::sync::Arc;

use super::series::{compose_terms, MonoTable, Series};
use super::{normalize_point, render_point, AmbientKind, LocalSingularity, SingularityError, Surface};
use crate::ffpoly::{Fe, Field, Polynomial, Ring};

/// Truncation degree for local equations obtained by elimination.
pub(crate) const ELIMINATION_DEGREE: usize = 12;

/// Local data at a point of the surface; fails if the point is off the
/// surface or outside the weight-1 charts.
pub fn local_singularity(surface: &Surface, point: &[Fe]) -> Result<LocalSingularity, SingularityError> {
    let f = surface.field().clone();
    let amb = surface.ambient();
    if point.len() != amb.variables.len() {
        return Err(SingularityError::Ambient("point has the wrong number of coordinates".into()));
    }
    let chart = amb.chart_of(point);
    if chart.is_none() && amb.kind != AmbientKind::Affine {
        return Err(SingularityError::UnsupportedChart(render_point(&f, point)));
    }
    let point = normalize_point(amb, &f, point).expect("chart coordinate is nonzero");
    if !surface.contains(&point)? {
        return Err(SingularityError::Ambient(format!("{} is not on the surface", render_point(&f, &point))));
    }
    let free: Vec<usize> = (0..point.len()).filter(|&j| Some(j) != chart).collect();
    let free_names: Vec<String> = free.iter().map(|&j| amb.variables[j].clone()).collect();
    // Translate: chart coordinate -> 1, free coordinate x_j -> P_j + x_j.
    let ring = Ring::new(f.clone(), &free_names, &[])?;
    let mut map = HashMap::new();
    if let Some(i) = chart {
        map.insert(amb.variables[i].clone(), ring.one());
    }
    for (&j, name) in free.iter().zip(&free_names) {
        map.insert(name.clone(), &ring.gen(name)? + &ring.constant(point[j]));
    }
    let translated: Vec<Polynomial> =
        surface.equations().iter().map(|e| e.substitute_into(&map, &ring)).collect::<Result<_, _>>()?;
    if free.len() == 3 && translated.len() == 1 {
        return Ok(LocalSingularity { chart, point, local_equation: translated[0].clone(), truncation: None });
    }
    let (names, eq) = eliminate(&f, &free_names, &translated, ELIMINATION_DEGREE)?;
    let local_ring = Ring::new(f.clone(), &names, &[])?;
    let mut poly = local_ring.zero();
    for (k, &c) in eq.c.iter().enumerate() {
        if c != 0 {
            let e = eq.t.exps[k];
            poly = &poly + &local_ring.monomial(vec![e[0] as i32, e[1] as i32, e[2] as i32], c);
        }
    }
    Ok(LocalSingularity { chart, point, local_equation: poly, truncation: Some(ELIMINATION_DEGREE as u32) })
}

/// Linear part of a polynomial vanishing at the origin.
fn linear_part(p: &Polynomial, n: usize) -> Vec<Fe> {
    let mut v = vec![0; n];
    for (e, c) in p.terms() {
        if e.iter().sum::<i32>() == 1 {
            let j = e.iter().position(|&x| x == 1).unwrap();
            v[j] = c;
        }
    }
    v
}

/// Solves n-3 equations with independent differentials for n-3 variables
/// and returns a local equation in the remaining three.
fn eliminate(f: &Arc<Field>, names: &[String], eqs: &[Polynomial], deg: usize) -> Result<(Vec<String>, Series), SingularityError> {
    let n = names.len();
    if n < 3 {
        return Err(SingularityError::Ambient("fewer than three chart coordinates".into()));
    }
    let k = n - 3;
    let jac: Vec<Vec<Fe>> = eqs.iter().map(|e| linear_part(e, n)).collect();
    // Greedy pivot choice: rows S and columns V with an invertible minor.
    let mut m = jac.clone();
    let mut rows = Vec::new();
    let mut cols = Vec::new();
    let mut row_ids: Vec<usize> = (0..eqs.len()).collect();
    for c in 0..n {
        let r0 = rows.len();
        let Some(p) = (r0..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r0, p);
        row_ids.swap(r0, p);
        let inv = f.inv(m[r0][c]).unwrap();
        for i in r0 + 1..m.len() {
            if m[i][c] != 0 {
                let s = f.mul(m[i][c], inv);
                for j in 0..n {
                    m[i][j] = f.sub(m[i][j], f.mul(s, m[r0][j]));
                }
            }
        }
        rows.push(row_ids[r0]);
        cols.push(c);
    }
    if rows.len() > k {
        return Err(SingularityError::NotSingular);
    }
    if rows.len() < k {
        return Err(SingularityError::NotRdp(format!("embedding dimension {} instead of 3", n - rows.len())));
    }
    let keep: Vec<usize> = (0..n).filter(|j| !cols.contains(j)).collect();
    let a: Vec<Vec<Fe>> = rows.iter().map(|&r| cols.iter().map(|&c| jac[r][c]).collect()).collect();
    let ainv = invert(f, &a).expect("pivot minor is invertible");
    let t = MonoTable::get(deg);
    let w: Vec<Series> = (0..3).map(|i| Series::var(f, &t, i)).collect();
    let mut phi: Vec<Series> = vec![Series::zero(f, &t); k];
    let images = |phi: &[Series]| -> Vec<Series> {
        (0..n)
            .map(|j| match cols.iter().position(|&c| c == j) {
                Some(i) => phi[i].clone(),
                None => w[keep.iter().position(|&x| x == j).unwrap()].clone(),
            })
            .collect()
    };
    let eval = |p: &Polynomial, img: &[Series]| {
        compose_terms(f, &t, p.terms().map(|(e, c)| (c, e.iter().map(|&x| x as u32).collect())), img)
    };
    for _ in 0..=deg + 1 {
        let img = images(&phi);
        let res: Vec<Series> = rows.iter().map(|&r| eval(&eqs[r], &img)).collect();
        if res.iter().all(|s| s.is_zero()) {
            break;
        }
        for i in 0..k {
            let mut corr = Series::zero(f, &t);
            for (j, r) in res.iter().enumerate() {
                corr = corr.add(&r.scale(ainv[i][j]));
            }
            phi[i] = phi[i].sub(&corr);
        }
    }
    let img = images(&phi);
    if rows.iter().any(|&r| !eval(&eqs[r], &img).is_zero()) {
        return Err(SingularityError::Resource("elimination did not converge".into()));
    }
    let mut best: Option<Series> = None;
    for (r, e) in eqs.iter().enumerate() {
        if rows.contains(&r) {
            continue;
        }
        let s = eval(e, &img);
        match s.order() {
            Some(0 | 1) => return Err(SingularityError::NotSingular),
            Some(2) => {
                best = Some(s);
                break;
            }
            _ => {}
        }
    }
    let eq = best.ok_or_else(|| SingularityError::NotRdp("no remaining equation of order 2".into()))?;
    Ok((keep.iter().map(|&j| names[j].clone()).collect(), eq))
}

/// Inverse of a square matrix over the field.
pub(crate) fn invert(f: &Field, a: &[Vec<Fe>]) -> Option<Vec<Vec<Fe>>> {
    let n = a.len();
    let mut m: Vec<Vec<Fe>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| (i == j) as Fe));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| m[i][c] != 0)?;
        m.swap(c, p);
        let inv = f.inv(m[c][c]).unwrap();
        for x in m[c].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..n {
            if i != c && m[i][c] != 0 {
                let s = m[i][c];
                let pivot = m[c].clone();
                for (x, y) in m[i].iter_mut().zip(pivot) {
                    *x = f.sub(*x, f.mul(s, y));
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}
