// SPDX-License-Identifier: Apache-2.0

//! Finite fields F_{p^k} with elements encoded as integers: the element
//! sum c_i t^i is stored as sum c_i p^i.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::FfError;

/// Field description as it appears in datasets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    #[serde(default = "one")]
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<String>,
}

fn one() -> u32 {
    1
}

impl FieldSpec {
    pub fn prime(p: u32) -> Self {
        Self { p, k: 1, modulus: None }
    }
}

/// Field element (index into the field's encoding).
pub type Fe = u32;

/// Arithmetic tables of F_{p^k}.
#[derive(Debug)]
pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    log: Vec<u32>,
    exp: Vec<Fe>,
    spec: FieldSpec,
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl Field {
    pub fn prime(p: u32) -> Result<Arc<Field>, FfError> {
        Field::new(&FieldSpec::prime(p))
    }

    /// Builds the field, checking that the modulus is monic and irreducible.
    pub fn new(spec: &FieldSpec) -> Result<Arc<Field>, FfError> {
        let p = spec.p;
        if !is_prime(p) || p > 1000 {
            return Err(FfError::Field(format!("{p} is not a supported prime")));
        }
        let k = spec.k;
        if k == 0 || k > 8 || (p as u64).pow(k) > 1 << 16 {
            return Err(FfError::Field(format!("unsupported extension degree {k}")));
        }
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            let src = spec
                .modulus
                .as_deref()
                .ok_or_else(|| FfError::Field("extension field needs a modulus".into()))?;
            let m = super::parse::parse_univariate(src, "t", p)?;
            if m.len() != k as usize + 1 || m[k as usize] != 1 {
                return Err(FfError::Field(format!("modulus {src} must be monic of degree {k}")));
            }
            if !irreducible(&m, p) {
                return Err(FfError::Field(format!("modulus {src} is reducible over F_{p}")));
            }
            m
        };
        let q = p.pow(k);
        let mut f = Field { p, k, q, modulus, log: vec![0; q as usize], exp: Vec::new(), spec: spec.clone() };
        // Find a generator of the multiplicative group.
        'gen: for g in 2..q.max(3) {
            let g = if q == 2 { 1 } else { g.min(q - 1) };
            let mut seen = vec![false; q as usize];
            let mut exp = Vec::with_capacity(q as usize - 1);
            let mut x: Fe = 1;
            for _ in 0..q - 1 {
                if seen[x as usize] {
                    continue 'gen;
                }
                seen[x as usize] = true;
                exp.push(x);
                x = f.mul_slow(x, g);
            }
            f.exp = exp;
            break;
        }
        if f.exp.len() != (q - 1) as usize {
            return Err(FfError::Field("no primitive element found".into()));
        }
        for (i, &x) in f.exp.iter().enumerate() {
            f.log[x as usize] = i as u32;
        }
        Ok(Arc::new(f))
    }

    fn digits(&self, a: Fe) -> Vec<u32> {
        let mut d = Vec::with_capacity(self.k as usize);
        let mut a = a;
        for _ in 0..self.k {
            d.push(a % self.p);
            a /= self.p;
        }
        d
    }

    fn undigits(&self, d: &[u32]) -> Fe {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn mul_slow(&self, a: Fe, b: Fe) -> Fe {
        let (p, k) = (self.p, self.k as usize);
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u32; 2 * k];
        for i in 0..k {
            for j in 0..k {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        for i in (k..2 * k).rev() {
            let c = prod[i];
            if c != 0 {
                for j in 0..=k {
                    prod[i - k + j] = (prod[i - k + j] + p * p - c * self.modulus[j] % p) % p;
                }
            }
        }
        self.undigits(&prod[..k])
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// The generator t (or 0 for k = 1... t is only meaningful for k > 1).
    pub fn generator(&self) -> Fe {
        if self.k == 1 {
            0
        } else {
            self.p
        }
    }

    pub fn from_int(&self, n: i64) -> Fe {
        n.rem_euclid(self.p as i64) as Fe
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.k == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: Fe) -> Fe {
        if self.k == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let (mut a, mut out, mut place) = (a, 0, 1);
        for _ in 0..self.k {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[(if s >= n { s - n } else { s }) as usize]
    }

    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a == 0 {
            return None;
        }
        let n = self.q - 1;
        Some(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn pow(&self, a: Fe, e: i64) -> Fe {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let n = (self.q - 1) as i64;
        self.exp[((self.log[a as usize] as i64 * e).rem_euclid(n)) as usize]
    }

    /// Multiplies by an integer.
    pub fn scale(&self, a: Fe, n: i64) -> Fe {
        self.mul(a, self.from_int(n))
    }

    /// All elements, 0 first.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        0..self.q
    }

    /// Renders an element as a polynomial in `t`.
    pub fn render(&self, a: Fe) -> String {
        if self.k == 1 {
            return a.to_string();
        }
        let d = self.digits(a);
        let mut parts = Vec::new();
        for i in (0..d.len()).rev() {
            let c = d[i];
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{i}"),
            };
            parts.push(match (c, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono,
                (_, false) => format!("{c}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }

    /// Parses an element written as an integer polynomial in `t`.
    pub fn parse_element(&self, s: &str) -> Result<Fe, FfError> {
        let coeffs = super::parse::parse_univariate(s, "t", self.p)?;
        let mut acc: Fe = 0;
        for &c in coeffs.iter().rev() {
            acc = self.add(self.mul(acc, self.generator_or_err()?), c);
        }
        if coeffs.len() > 1 && self.k == 1 {
            return Err(FfError::Field(format!("{s:?} uses t in a prime field")));
        }
        Ok(acc)
    }

    fn generator_or_err(&self) -> Result<Fe, FfError> {
        Ok(if self.k == 1 { 0 } else { self.p })
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}", self.p, self.k)
        }
    }
}

/// Exhaustive irreducibility test: no monic factor of degree <= deg/2.
fn irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut f = vec![0u32; d + 1];
            let mut c = code;
            for x in f.iter_mut().take(d) {
                *x = c % p;
                c /= p;
            }
            f[d] = 1;
            if poly_rem(m, &f, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let c = *r.last().unwrap() % p;
        let shift = r.len() - 1 - db;
        for j in 0..=db {
            r[shift + j] = (r[shift + j] + p * p - c * b[j] % p) % p;
        }
        r.pop();
    }
    r
}
