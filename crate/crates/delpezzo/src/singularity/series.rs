// SPDX-License-Identifier: Apache-2.0

//! Dense power series in up to three variables, truncated above a fixed
//! total degree.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::ffpoly::{Fe, Field};

/// Monomials of degree <= `deg` in three variables, graded order.
#[derive(Debug)]
pub(crate) struct MonoTable {
    pub deg: usize,
    pub exps: Vec<[u8; 3]>,
    pub degree: Vec<usize>,
    /// First index of each degree; `start[deg + 1]` is the table size.
    pub start: Vec<usize>,
    index: Vec<u32>,
}

impl MonoTable {
    pub fn get(deg: usize) -> Arc<MonoTable> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<MonoTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut g = cache.lock().unwrap();
        g.entry(deg).or_insert_with(|| Arc::new(MonoTable::build(deg))).clone()
    }

    fn build(deg: usize) -> Self {
        let side = deg + 1;
        let mut exps = Vec::new();
        let mut degree = Vec::new();
        let mut start = Vec::new();
        let mut index = vec![u32::MAX; side * side * side];
        for d in 0..=deg {
            start.push(exps.len());
            for a in (0..=d).rev() {
                for b in (0..=d - a).rev() {
                    let c = d - a - b;
                    index[(a * side + b) * side + c] = exps.len() as u32;
                    exps.push([a as u8, b as u8, c as u8]);
                    degree.push(d);
                }
            }
        }
        start.push(exps.len());
        Self { deg, exps, degree, start, index }
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    /// Index of a monomial of degree <= deg.
    pub fn idx(&self, e: [usize; 3]) -> Option<usize> {
        if e[0] + e[1] + e[2] > self.deg {
            return None;
        }
        let side = self.deg + 1;
        Some(self.index[(e[0] * side + e[1]) * side + e[2]] as usize)
    }
}

/// Power series modulo m^{deg+1}.
#[derive(Clone, Debug)]
pub(crate) struct Series {
    pub f: Arc<Field>,
    pub t: Arc<MonoTable>,
    pub c: Vec<Fe>,
}

impl PartialEq for Series {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c
    }
}

impl Series {
    pub fn zero(f: &Arc<Field>, t: &Arc<MonoTable>) -> Self {
        Self { f: f.clone(), t: t.clone(), c: vec![0; t.len()] }
    }

    pub fn constant(f: &Arc<Field>, t: &Arc<MonoTable>, v: Fe) -> Self {
        let mut s = Self::zero(f, t);
        s.c[0] = v;
        s
    }

    pub fn var(f: &Arc<Field>, t: &Arc<MonoTable>, i: usize) -> Self {
        let mut s = Self::zero(f, t);
        let mut e = [0; 3];
        e[i] = 1;
        if let Some(k) = t.idx(e) {
            s.c[k] = 1;
        }
        s
    }

    pub fn deg(&self) -> usize {
        self.t.deg
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn coeff(&self, e: [usize; 3]) -> Fe {
        self.t.idx(e).map_or(0, |k| self.c[k])
    }

    pub fn set(&mut self, e: [usize; 3], v: Fe) {
        if let Some(k) = self.t.idx(e) {
            self.c[k] = v;
        }
    }

    /// Lowest degree with a nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.c.iter().position(|&x| x != 0).map(|k| self.t.degree[k])
    }

    /// Coefficients of the degree-d part as (exponents, coefficient).
    pub fn part(&self, d: usize) -> impl Iterator<Item = ([u8; 3], Fe)> + '_ {
        let r = if d <= self.t.deg { self.t.start[d]..self.t.start[d + 1] } else { 0..0 };
        r.map(move |k| (self.t.exps[k], self.c[k]))
    }

    pub fn add(&self, o: &Series) -> Series {
        let f = &self.f;
        Series { f: f.clone(), t: self.t.clone(), c: self.c.iter().zip(&o.c).map(|(&a, &b)| f.add(a, b)).collect() }
    }

    pub fn sub(&self, o: &Series) -> Series {
        let f = &self.f;
        Series { f: f.clone(), t: self.t.clone(), c: self.c.iter().zip(&o.c).map(|(&a, &b)| f.sub(a, b)).collect() }
    }

    pub fn scale(&self, v: Fe) -> Series {
        let f = &self.f;
        Series { f: f.clone(), t: self.t.clone(), c: self.c.iter().map(|&a| f.mul(a, v)).collect() }
    }

    pub fn mul(&self, o: &Series) -> Series {
        let (f, t) = (&self.f, &self.t);
        let mut out = vec![0; t.len()];
        let nz_b: Vec<usize> = (0..t.len()).filter(|&j| o.c[j] != 0).collect();
        for i in 0..t.len() {
            let a = self.c[i];
            if a == 0 {
                continue;
            }
            let (ea, da) = (t.exps[i], t.degree[i]);
            for &j in &nz_b {
                if da + t.degree[j] > t.deg {
                    break;
                }
                let eb = t.exps[j];
                let k = t.idx([(ea[0] + eb[0]) as usize, (ea[1] + eb[1]) as usize, (ea[2] + eb[2]) as usize]).unwrap();
                out[k] = f.add(out[k], f.mul(a, o.c[j]));
            }
        }
        Series { f: f.clone(), t: t.clone(), c: out }
    }

    /// Formal derivative in variable i (exact modulo m^deg).
    pub fn derivative(&self, i: usize) -> Series {
        let mut out = Series::zero(&self.f, &self.t);
        for (k, &c) in self.c.iter().enumerate() {
            let e = self.t.exps[k];
            if c != 0 && e[i] > 0 {
                let mut d = [e[0] as usize, e[1] as usize, e[2] as usize];
                d[i] -= 1;
                out.set(d, self.f.scale(c, e[i] as i64));
            }
        }
        out
    }

    /// Substitutes series for the three variables.
    pub fn compose(&self, images: &[Series; 3]) -> Series {
        compose_terms(
            &self.f,
            &self.t,
            self.c.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| {
                let e = self.t.exps[k];
                (c, vec![e[0] as u32, e[1] as u32, e[2] as u32])
            }),
            images,
        )
    }

    /// Applies the linear change x_i = sum_j m[i][j] v_j.
    pub fn linear_change(&self, m: &[[Fe; 3]; 3]) -> Series {
        let images: [Series; 3] = std::array::from_fn(|i| {
            let mut s = Series::zero(&self.f, &self.t);
            for j in 0..3 {
                let mut e = [0; 3];
                e[j] = 1;
                s.set(e, m[i][j]);
            }
            s
        });
        self.compose(&images)
    }
}

/// Evaluates sum c * prod images[i]^e[i] with cached powers.
pub(crate) fn compose_terms(
    f: &Arc<Field>,
    t: &Arc<MonoTable>,
    terms: impl Iterator<Item = (Fe, Vec<u32>)>,
    images: &[Series],
) -> Series {
    let mut pows: Vec<Vec<Series>> = images.iter().map(|s| vec![Series::constant(f, t, 1), s.clone()]).collect();
    let mut out = Series::zero(f, t);
    for (c, e) in terms {
        let mut term = Series::constant(f, t, c);
        for (i, &x) in e.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let x = x as usize;
            while pows[i].len() <= x {
                let next = pows[i].last().unwrap().mul(&images[i]);
                pows[i].push(next);
            }
            term = term.mul(&pows[i][x]);
            if term.is_zero() {
                break;
            }
        }
        out = out.add(&term);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_truncates() {
        let f = Field::prime(5).unwrap();
        let t = MonoTable::get(4);
        let x = Series::var(&f, &t, 0);
        let y = Series::var(&f, &t, 1);
        let s = x.add(&y);
        let s3 = s.mul(&s).mul(&s);
        assert_eq!(s3.coeff([2, 1, 0]), 3);
        assert!(s3.mul(&s).mul(&s).is_zero());
        assert_eq!(s3.order(), Some(3));
        assert_eq!(s3.derivative(0).coeff([1, 1, 0]), 1);
    }
}
