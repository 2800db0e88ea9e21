// SPDX-License-Identifier: Apache-2.0

//! Classification of double points: reduction toward Artin's normal forms
//! cross-checked against the Tjurina number.

use serde::Serialize;

use super::series::{MonoTable, Series};
use super::{LocalSingularity, SingularityError};
use crate::catalog::{tjurina_reference, Catalog, RdpType};
use crate::dynkin::{Component, Family};
use crate::ffpoly::{Fe, Field, Polynomial};

/// Default bound on the truncation degree for Tjurina numbers.
pub const DEFAULT_MAX_DEGREE: u32 = 24;

/// Working truncation degree for exact local equations.
const REDUCTION_DEGREES: [usize; 3] = [16, 24, 32];

/// Result of both classification routes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub rdp: RdpType,
    pub tjurina: u32,
}

/// ADE type and Artin coindex of a rational double point.
pub fn classify_rdp(s: &LocalSingularity) -> Result<RdpType, SingularityError> {
    classify_report(s).map(|r| r.rdp)
}

/// Classifies by normal-form reduction and confirms with the Tjurina number.
pub fn classify_report(s: &LocalSingularity) -> Result<ClassificationReport, SingularityError> {
    let p = s.field().p();
    let rdp = normal_form_type(s)?;
    let tau = tjurina_number(s)?;
    let expected = tjurina_reference(&rdp, p)?;
    if tau != expected {
        return Err(SingularityError::Conflict { normal_form: rdp.to_string(), tau, expected });
    }
    Ok(ClassificationReport { rdp, tjurina: tau })
}

/// Tjurina number with the default degree bound.
pub fn tjurina_number(s: &LocalSingularity) -> Result<u32, SingularityError> {
    tjurina_number_with(s, DEFAULT_MAX_DEGREE)
}

/// dim k[[x,y,z]]/(f, df) computed modulo m^N for N = 1, 2, ... until two
/// consecutive values agree.
pub fn tjurina_number_with(s: &LocalSingularity, max_degree: u32) -> Result<u32, SingularityError> {
    let f = s.field().clone();
    let terms = poly_terms(&s.local_equation);
    if terms.iter().any(|(_, e)| e.iter().sum::<usize>() < 2) {
        return Err(SingularityError::NotSingular);
    }
    let mut gens = vec![terms.clone()];
    for v in 0..3 {
        gens.push(
            terms
                .iter()
                .filter(|(_, e)| e[v] > 0)
                .map(|(c, e)| {
                    let mut d = *e;
                    d[v] -= 1;
                    (f.scale(*c, e[v] as i64), d)
                })
                .filter(|(c, _)| *c != 0)
                .collect(),
        );
    }
    // With truncation D the data is exact modulo m^{D+1}, so levels N <= D are usable.
    let usable = s.truncation.map_or(u32::MAX, |d| d);
    let mut prev = None;
    for n in 1..=max_degree {
        if n > usable {
            return Err(SingularityError::Resource(format!("Tjurina number needs precision beyond degree {usable}")));
        }
        let tau = tau_level(&f, &gens, n as usize);
        if prev == Some(tau) {
            return Ok(tau as u32);
        }
        prev = Some(tau);
    }
    Err(SingularityError::Resource(format!("Tjurina number did not stabilize by degree {max_degree}")))
}

fn poly_terms(p: &Polynomial) -> Vec<(Fe, [usize; 3])> {
    p.terms().map(|(e, c)| (c, [e[0] as usize, e[1] as usize, e[2] as usize])).collect()
}

/// dim k[x,y,z]/(I + m^n).
fn tau_level(f: &Field, gens: &[Vec<(Fe, [usize; 3])>], n: usize) -> usize {
    let t = MonoTable::get(n - 1);
    let cols = t.len();
    let mut pivots: Vec<Option<Vec<Fe>>> = vec![None; cols];
    let mut rank = 0;
    for g in gens {
        let Some(ord) = g.iter().map(|(_, e)| e.iter().sum::<usize>()).min() else { continue };
        if ord >= n {
            continue;
        }
        for m in 0..t.start[n - ord] {
            let me = t.exps[m];
            let mut row = vec![0 as Fe; cols];
            for (c, e) in g {
                if let Some(k) = t.idx([e[0] + me[0] as usize, e[1] + me[1] as usize, e[2] + me[2] as usize]) {
                    row[k] = f.add(row[k], *c);
                }
            }
            // Reduce against existing pivots (pivot = first nonzero column).
            let mut col = 0;
            while col < cols {
                if row[col] == 0 {
                    col += 1;
                    continue;
                }
                match &pivots[col] {
                    Some(prow) => {
                        let s = row[col];
                        for j in col..cols {
                            if prow[j] != 0 {
                                row[j] = f.sub(row[j], f.mul(s, prow[j]));
                            }
                        }
                    }
                    None => {
                        let inv = f.inv(row[col]).unwrap();
                        for x in row[col..].iter_mut() {
                            *x = f.mul(*x, inv);
                        }
                        pivots[col] = Some(row);
                        rank += 1;
                        break;
                    }
                }
            }
        }
    }
    cols - rank
}

enum Fail {
    Precision,
    Err(SingularityError),
}

impl From<SingularityError> for Fail {
    fn from(e: SingularityError) -> Self {
        Fail::Err(e)
    }
}

fn to_series(p: &Polynomial, deg: usize) -> Series {
    let t = MonoTable::get(deg);
    let mut s = Series::zero(p.field(), &t);
    for (c, e) in poly_terms(p) {
        if e.iter().sum::<usize>() <= deg {
            s.set(e, c);
        }
    }
    s
}

/// Step (i): reduction toward a normal form.
fn normal_form_type(s: &LocalSingularity) -> Result<RdpType, SingularityError> {
    let p = s.field().p();
    let degrees: Vec<usize> = match s.truncation {
        Some(d) => vec![d as usize],
        None => REDUCTION_DEGREES.to_vec(),
    };
    for d in degrees {
        match reduce(&to_series(&s.local_equation, d), p) {
            Ok(t) => return Ok(t),
            Err(Fail::Err(e)) => return Err(e),
            Err(Fail::Precision) => continue,
        }
    }
    Err(SingularityError::Resource("normal-form reduction needs more precision (non-isolated singularity?)".into()))
}

fn comp(family: Family, rank: usize) -> Result<Component, Fail> {
    Component::new(family, rank).map_err(|e| Fail::Err(SingularityError::NotRdp(e.to_string())))
}

fn reduce(g: &Series, p: u32) -> Result<RdpType, Fail> {
    let f = g.f.clone();
    let t = g.t.clone();
    if g.part(0).chain(g.part(1)).any(|(_, c)| c != 0) {
        return Err(SingularityError::NotSingular.into());
    }
    if g.part(2).all(|(_, c)| c == 0) {
        return Err(SingularityError::NotRdp("multiplicity at least 3".into()).into());
    }
    // Quadratic form and its diagonalization.
    let half = f.inv(f.from_int(2)).unwrap();
    let mut b = [[0 as Fe; 3]; 3];
    for (e, c) in g.part(2) {
        let idx: Vec<usize> = (0..3).flat_map(|i| std::iter::repeat(i).take(e[i] as usize)).collect();
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            b[i][i] = c;
        } else {
            b[i][j] = f.mul(c, half);
            b[j][i] = b[i][j];
        }
    }
    let (basis, diag) = diagonalize(&f, &b);
    let r = diag.iter().filter(|&&x| x != 0).count();
    if r == 3 {
        return Ok(RdpType::new(comp(Family::A, 1)?, None));
    }
    let m: [[Fe; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| basis[j][i]));
    let g1 = g.linear_change(&m);
    // Splitting lemma: eliminate the nondegenerate variables.
    let h = split(&g1, r, &diag)?;
    if r == 2 {
        let ord = h.order().ok_or(Fail::Precision)?;
        return Ok(RdpType::new(comp(Family::A, ord - 1)?, None));
    }
    corank_two(&f, &t, &h, p)
}

/// Diagonalizes a symmetric form: returns basis vectors b_k and Q(b_k).
fn diagonalize(f: &Field, b: &[[Fe; 3]; 3]) -> (Vec<[Fe; 3]>, Vec<Fe>) {
    let form = |u: &[Fe; 3], v: &[Fe; 3]| {
        let mut s = 0;
        for i in 0..3 {
            for j in 0..3 {
                s = f.add(s, f.mul(u[i], f.mul(b[i][j], v[j])));
            }
        }
        s
    };
    let mut basis: Vec<[Fe; 3]> = (0..3).map(|i| std::array::from_fn(|j| (i == j) as Fe)).collect();
    let mut diag = vec![0; 3];
    for k in 0..3 {
        let mut found = (k..3).find(|&j| form(&basis[j], &basis[j]) != 0);
        if found.is_none() {
            'outer: for j in k..3 {
                for l in j + 1..3 {
                    if form(&basis[j], &basis[l]) != 0 {
                        let (bj, bl) = (basis[j], basis[l]);
                        basis[j] = std::array::from_fn(|i| f.add(bj[i], bl[i]));
                        found = Some(j);
                        break 'outer;
                    }
                }
            }
        }
        let Some(j) = found else { break };
        basis.swap(k, j);
        let q = form(&basis[k], &basis[k]);
        diag[k] = q;
        let qi = f.inv(q).unwrap();
        for m in k + 1..3 {
            let s = f.mul(form(&basis[m], &basis[k]), qi);
            let (bm, bk) = (basis[m], basis[k]);
            basis[m] = std::array::from_fn(|i| f.sub(bm[i], f.mul(s, bk[i])));
        }
    }
    (basis, diag)
}

/// Solves d/dv_k g = 0 (k < r) for v_k as series in the other variables and
/// returns the restriction of g.
fn split(g: &Series, r: usize, diag: &[Fe]) -> Result<Series, Fail> {
    let f = &g.f;
    let t = &g.t;
    let mut phi: Vec<Series> = vec![Series::zero(f, t); r];
    let images = |phi: &[Series]| -> [Series; 3] {
        std::array::from_fn(|i| if i < r { phi[i].clone() } else { Series::var(f, t, i) })
    };
    let grads: Vec<Series> = (0..r).map(|k| g.derivative(k)).collect();
    let inv2: Vec<Fe> = (0..r).map(|k| f.inv(f.scale(diag[k], 2)).unwrap()).collect();
    for _ in 0..=t.deg + 1 {
        let img = images(&phi);
        let res: Vec<Series> = grads.iter().map(|d| d.compose(&img)).collect();
        // The derivative is exact only below degree deg.
        if res.iter().all(|s| (0..s.deg()).all(|d| s.part(d).all(|(_, c)| c == 0))) {
            break;
        }
        for k in 0..r {
            phi[k] = phi[k].sub(&res[k].scale(inv2[k]));
        }
    }
    Ok(g.compose(&images(&phi)))
}

/// Homogeneous part of degree d of a series in variables (1, 2), as
/// coefficients of Y^a Z^{d-a} for a = 0..=d.
fn binary_part(s: &Series, d: usize) -> Vec<Fe> {
    (0..=d).map(|a| s.coeff([0, a, d - a])).collect()
}

fn corank_two(f: &std::sync::Arc<Field>, t: &std::sync::Arc<MonoTable>, h: &Series, p: u32) -> Result<RdpType, Fail> {
    if h.order().is_some_and(|o| o < 3) {
        return Err(SingularityError::NotRdp("unexpected quadratic residue".into()).into());
    }
    let cubic = binary_part(h, 3); // [d, c, b, a] for a y^3 + b y^2 z + c y z^2 + d z^3
    let (a, b, c, d) = (cubic[3], cubic[2], cubic[1], cubic[0]);
    if [a, b, c, d].iter().all(|&x| x == 0) {
        return Err(SingularityError::NotRdp("corank 2 with vanishing cubic term".into()).into());
    }
    let mul = |xs: &[Fe]| xs.iter().fold(1, |acc, &x| f.mul(acc, x));
    let disc = [
        (1, mul(&[b, b, c, c])),
        (-4, mul(&[a, c, c, c])),
        (-4, mul(&[b, b, b, d])),
        (-27, mul(&[a, a, d, d])),
        (18, mul(&[a, b, c, d])),
    ]
    .iter()
    .fold(0, |acc, &(k, v)| f.add(acc, f.scale(v, k)));
    if disc != 0 {
        return Ok(RdpType::new(comp(Family::D, 4)?, None));
    }
    let eval = |s: Fe, u: Fe| -> [Fe; 3] {
        // cubic, d/dy, d/dz at (y, z) = (s, u)
        let v = mul(&[a, s, s, s]);
        let v = f.add(v, mul(&[b, s, s, u]));
        let v = f.add(v, mul(&[c, s, u, u]));
        let v = f.add(v, mul(&[d, u, u, u]));
        let dy = f.add(f.add(f.scale(mul(&[a, s, s]), 3), f.scale(mul(&[b, s, u]), 2)), mul(&[c, u, u]));
        let dz = f.add(f.add(mul(&[b, s, s]), f.scale(mul(&[c, s, u]), 2)), f.scale(mul(&[d, u, u]), 3));
        [v, dy, dz]
    };
    let points: Vec<(Fe, Fe)> = std::iter::once((1, 0)).chain(f.elements().map(|s| (s, 1))).collect();
    let roots: Vec<(Fe, Fe, bool)> = points
        .into_iter()
        .filter_map(|(s, u)| {
            let [v, dy, dz] = eval(s, u);
            (v == 0).then_some((s, u, dy == 0 && dz == 0))
        })
        .collect();
    let Some(&(s0, u0, _)) = roots.iter().find(|r| r.2) else {
        return Err(SingularityError::NotRdp("repeated root of the cubic term not found".into()).into());
    };
    // Linear form vanishing at (s0, u0): L = u0*y - s0*z.
    let l1 = [u0, f.neg(s0)];
    let l1_cubed = {
        // coefficients of L^3 in y^3, y^2 z, y z^2, z^3
        let (p_, q_) = (l1[0], l1[1]);
        [mul(&[p_, p_, p_]), f.scale(mul(&[p_, p_, q_]), 3), f.scale(mul(&[p_, q_, q_]), 3), mul(&[q_, q_, q_])]
    };
    let target = [a, b, c, d];
    let triple = {
        let k = (0..4).find(|&i| l1_cubed[i] != 0).unwrap();
        let kappa = f.mul(target[k], f.inv(l1_cubed[k]).unwrap());
        (0..4).all(|i| f.mul(kappa, l1_cubed[i]) == target[i])
    };
    if triple {
        let z_form = if l1[0] != 0 { [0, 1] } else { [1, 0] };
        let hh = change_binary(f, h, l1, z_form);
        return e_type(f, t, &hh, p);
    }
    let Some(&(s1, u1, _)) = roots.iter().find(|r| !r.2) else {
        return Err(SingularityError::NotRdp("simple root of the cubic term not found".into()).into());
    };
    let l2 = [u1, f.neg(s1)];
    let hh = change_binary(f, h, l1, l2);
    let n = d_index(f, t, &hh)?;
    Ok(RdpType::new(comp(Family::D, n)?, None))
}

/// Rewrites h(y, z) in coordinates Y = l1 . (y, z), Z = l2 . (y, z).
fn change_binary(f: &Field, h: &Series, l1: [Fe; 2], l2: [Fe; 2]) -> Series {
    let det = f.sub(f.mul(l1[0], l2[1]), f.mul(l1[1], l2[0]));
    let di = f.inv(det).expect("independent linear forms");
    // Inverse of [[l1],[l2]]: y = (l2[1] Y - l1[1] Z)/det, z = (-l2[0] Y + l1[0] Z)/det.
    let m = [
        [1, 0, 0],
        [0, f.mul(l2[1], di), f.mul(f.neg(l1[1]), di)],
        [0, f.mul(f.neg(l2[0]), di), f.mul(l1[0], di)],
    ];
    h.linear_change(&m)
}

/// Degree-k part of a series in (Y, Z) as a full series.
fn homogeneous(s: &Series, k: usize) -> Series {
    let mut out = Series::zero(&s.f, &s.t);
    for a in 0..=k {
        out.set([0, a, k - a], s.coeff([0, a, k - a]));
    }
    out
}

/// Index n of D_n: factor h = A*B with A = kZ + ..., B = Y^2 + ...; then B
/// is an A_{n-3} curve singularity.
fn d_index(f: &Field, t: &std::sync::Arc<MonoTable>, h: &Series) -> Result<usize, Fail> {
    let fa = &h.f;
    let deg = t.deg;
    let kappa = h.coeff([0, 2, 1]);
    let ki = f.inv(kappa).unwrap();
    let mut a_ser = Series::zero(fa, t);
    a_ser.set([0, 0, 1], kappa);
    let mut b_ser = Series::zero(fa, t);
    b_ser.set([0, 2, 0], 1);
    for k in 4..=deg {
        let prod = a_ser.mul(&b_ser);
        let r: Vec<Fe> = (0..=k).map(|a| f.sub(h.coeff([0, a, k - a]), prod.coeff([0, a, k - a]))).collect();
        a_ser.set([0, k - 2, 0], r[k]);
        for (a, &ra) in r.iter().enumerate().take(k) {
            b_ser.set([0, a, k - 1 - a], f.mul(ra, ki));
        }
    }
    // B is known below degree deg; drop the top degree.
    let b_known = b_ser.sub(&homogeneous(&b_ser, deg));
    let inv2 = f.inv(f.from_int(2)).unwrap();
    let mut psi = Series::zero(fa, t);
    let dy = b_known.derivative(1);
    for _ in 0..=deg + 1 {
        let img = [Series::var(fa, t, 0), psi.clone(), Series::var(fa, t, 2)];
        let res = dy.compose(&img);
        if res.is_zero() {
            break;
        }
        psi = psi.sub(&res.scale(inv2));
    }
    let img = [Series::var(fa, t, 0), psi, Series::var(fa, t, 2)];
    let b = b_known.compose(&img);
    let ord = (0..deg).find(|&k| b.coeff([0, 0, k]) != 0).ok_or(Fail::Precision)?;
    Ok(ord + 2)
}

/// E-type recognition from the Weierstrass cubic of h = kY^3 + ...
fn e_type(f: &Field, t: &std::sync::Arc<MonoTable>, h: &Series, p: u32) -> Result<RdpType, Fail> {
    let fa = &h.f;
    let deg = t.deg;
    if deg < 6 {
        return Err(Fail::Precision);
    }
    let kappa = h.coeff([0, 3, 0]);
    let ki = f.inv(kappa).unwrap();
    let mut u = Series::constant(fa, t, kappa);
    let mut w = Series::zero(fa, t);
    w.set([0, 3, 0], 1);
    let (mut ca, mut cb, mut cc) = (vec![0 as Fe; deg + 1], vec![0 as Fe; deg + 1], vec![0 as Fe; deg + 1]);
    for k in 4..=deg {
        let prod = u.mul(&w);
        let r: Vec<Fe> = (0..=k).map(|a| f.sub(h.coeff([0, a, k - a]), prod.coeff([0, a, k - a]))).collect();
        for a in 3..=k {
            u.set([0, a - 3, k - a], r[a]);
        }
        ca[k - 2] = f.mul(r[2], ki);
        cb[k - 1] = f.mul(r[1], ki);
        cc[k] = f.mul(r[0], ki);
        w.set([0, 2, k - 2], ca[k - 2]);
        w.set([0, 1, k - 1], cb[k - 1]);
        w.set([0, 0, k], cc[k]);
    }
    let (a2, a3, b3, b4, c4, c5) = (ca[2], ca[3], cb[3], cb[4], cc[4], cc[5]);
    let cat = Catalog::bundled();
    let e = |rank: usize, r: Option<u8>| -> Result<RdpType, Fail> {
        let base = comp(Family::E, rank)?;
        Ok(RdpType::new(base, if cat.splits(base, p) { r } else { None }))
    };
    if p == 3 {
        let r01 = Some((a2 != 0) as u8);
        if c4 != 0 {
            return e(6, r01);
        }
        if b3 != 0 {
            return e(7, r01);
        }
        if c5 != 0 {
            let r = if a2 != 0 {
                2
            } else {
                let shifted = f.sub(a3, f.mul(f.mul(b4, b4), f.inv(c5).unwrap()));
                (shifted != 0) as u8
            };
            return e(8, Some(r));
        }
        return Err(SingularityError::NotRdp("triple cubic factor beyond E8".into()).into());
    }
    // Tschirnhaus shift y -> y - a/3 removes the y^2 term.
    let third = f.inv(f.from_int(3)).unwrap();
    if c4 != 0 {
        return e(6, None);
    }
    if b3 != 0 {
        return e(7, None);
    }
    if c5 != 0 {
        let big_b4 = f.sub(b4, f.mul(f.mul(a2, a2), third));
        return e(8, Some((big_b4 != 0) as u8));
    }
    Err(SingularityError::NotRdp("triple cubic factor beyond E8".into()).into())
}
