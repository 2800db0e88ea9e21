// SPDX-License-Identifier: Apache-2.0

//! Sparse polynomials over a parameter ring.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::field::{Fe, Field};
use super::parse::{parse_expr, Expr};
use super::{FfError, ParamKind, ParamSpec};

/// Variables plus parameters over a finite field. Exponent vectors index
/// variables first, then parameters.
#[derive(Debug)]
pub struct Ring {
    field: Arc<Field>,
    vars: Vec<String>,
    params: Vec<ParamSpec>,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.field.spec() == other.field.spec() && self.vars == other.vars && self.params == other.params
    }
}

impl Eq for Ring {}

impl Ring {
    pub fn new<S: AsRef<str>>(field: Arc<Field>, vars: &[S], params: &[ParamSpec]) -> Result<Arc<Ring>, FfError> {
        let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        let mut seen = std::collections::HashSet::new();
        for name in vars.iter().chain(params.iter().map(|p| &p.name)) {
            let ok = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok || !seen.insert(name.clone()) {
                return Err(FfError::Syntax { pos: 0, msg: format!("invalid or duplicate symbol {name:?}") });
            }
        }
        for p in params {
            p.validate(field.p())?;
        }
        Ok(Arc::new(Ring { field, vars, params: params.to_vec() }))
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn params(&self) -> &[ParamSpec] {
        &self.params
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn nslots(&self) -> usize {
        self.vars.len() + self.params.len()
    }

    fn slot_name(&self, i: usize) -> &str {
        if i < self.vars.len() {
            &self.vars[i]
        } else {
            &self.params[i - self.vars.len()].name
        }
    }

    fn slot(&self, name: &str) -> Option<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .or_else(|| self.params.iter().position(|p| p.name == name).map(|i| i + self.vars.len()))
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    fn kind(&self, slot: usize) -> Option<ParamKind> {
        slot.checked_sub(self.vars.len()).map(|i| self.params[i].kind)
    }

    /// Reduces parameter exponents; returns false when the term vanishes.
    fn normalize(&self, e: &mut [i32]) -> bool {
        for (i, x) in e.iter_mut().enumerate().skip(self.vars.len()) {
            match self.kind(i).unwrap() {
                ParamKind::Nilpotent { order } => {
                    if *x >= order as i32 {
                        return false;
                    }
                }
                ParamKind::RootOfUnity { order } => *x = x.rem_euclid(order as i32),
                ParamKind::Unit | ParamKind::Additive => {}
            }
        }
        true
    }

    pub fn zero(self: &Arc<Self>) -> Polynomial {
        Polynomial { ring: self.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(self: &Arc<Self>, c: Fe) -> Polynomial {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(vec![0; self.nslots()], c);
        }
        Polynomial { ring: self.clone(), terms }
    }

    pub fn one(self: &Arc<Self>) -> Polynomial {
        self.constant(1)
    }

    pub fn int(self: &Arc<Self>, n: i64) -> Polynomial {
        self.constant(self.field.from_int(n))
    }

    /// The generator named `name` (variable or parameter).
    pub fn gen(self: &Arc<Self>, name: &str) -> Result<Polynomial, FfError> {
        let i = self.slot(name).ok_or_else(|| FfError::UnknownSymbol { name: name.into(), pos: 0 })?;
        let mut e = vec![0; self.nslots()];
        e[i] = 1;
        Ok(self.monomial(e, 1))
    }

    /// A single term; exponents are normalized.
    pub fn monomial(self: &Arc<Self>, mut exps: Vec<i32>, c: Fe) -> Polynomial {
        let mut terms = BTreeMap::new();
        if c != 0 && self.normalize(&mut exps) {
            terms.insert(exps, c);
        }
        Polynomial { ring: self.clone(), terms }
    }

    /// Parses `src` in the grammar of [`parse_expr`].
    pub fn parse(self: &Arc<Self>, src: &str) -> Result<Polynomial, FfError> {
        self.eval_expr(&parse_expr(src)?)
    }

    /// Evaluates an expression tree in this ring.
    pub fn eval_expr(self: &Arc<Self>, e: &Expr) -> Result<Polynomial, FfError> {
        Ok(match e {
            Expr::Int(n) => self.int(*n),
            Expr::Ident { name, pos } => {
                self.gen(name).map_err(|_| FfError::UnknownSymbol { name: name.clone(), pos: *pos })?
            }
            Expr::Neg(a) => -&self.eval_expr(a)?,
            Expr::Add(a, b) => &self.eval_expr(a)? + &self.eval_expr(b)?,
            Expr::Sub(a, b) => &self.eval_expr(a)? - &self.eval_expr(b)?,
            Expr::Mul(a, b) => &self.eval_expr(a)? * &self.eval_expr(b)?,
            Expr::Pow { base, exp, pos } => {
                let b = self.eval_expr(base)?;
                if *exp < 0 {
                    b.inverse_monomial().map_err(|_| FfError::NegativeExponent { pos: *pos })?.pow(exp.unsigned_abs())
                } else {
                    b.pow(*exp as u64)
                }
            }
        })
    }
}

/// Polynomial with a canonical sparse term map.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: Arc<Ring>,
    terms: BTreeMap<Vec<i32>, Fe>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

fn same(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Polynomial {
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.ring.field
    }

    /// Terms as (exponent vector, coefficient); variables come first.
    pub fn terms(&self) -> impl Iterator<Item = (&[i32], Fe)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: Vec<i32>, c: Fe) {
        if c == 0 {
            return;
        }
        let f = &self.ring.field;
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, FfError> {
        if !same(&self.ring, &other.ring) {
            return Err(FfError::RingMismatch);
        }
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, FfError> {
        if !same(&self.ring, &other.ring) {
            return Err(FfError::RingMismatch);
        }
        let f = &self.ring.field;
        let mut out = self.ring.zero();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let mut e: Vec<i32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if self.ring.normalize(&mut e) {
                    out.add_term(e, f.mul(ca, cb));
                }
            }
        }
        Ok(out)
    }

    /// Multiplies by a field scalar.
    pub fn scale(&self, c: Fe) -> Polynomial {
        let f = &self.ring.field;
        let mut out = self.ring.zero();
        if c != 0 {
            for (e, &x) in &self.terms {
                out.terms.insert(e.clone(), f.mul(x, c));
            }
        }
        out
    }

    pub fn pow(&self, n: u64) -> Polynomial {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Inverse of a single term built from units and roots of unity.
    pub fn inverse_monomial(&self) -> Result<Polynomial, FfError> {
        if self.terms.len() != 1 {
            return Err(FfError::NotInvertible);
        }
        let (e, &c) = self.terms.iter().next().unwrap();
        for (i, &x) in e.iter().enumerate() {
            let unit = matches!(self.ring.kind(i), Some(ParamKind::Unit | ParamKind::RootOfUnity { .. }));
            if x != 0 && !unit {
                return Err(FfError::NotInvertible);
            }
        }
        let inv = self.ring.field.inv(c).ok_or(FfError::NotInvertible)?;
        Ok(self.ring.monomial(e.iter().map(|x| -x).collect(), inv))
    }

    /// The constant value if the polynomial has no variables or parameters.
    pub fn constant_value(&self) -> Option<Fe> {
        match self.terms.len() {
            0 => Some(0),
            1 => {
                let (e, &c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then_some(c)
            }
            _ => None,
        }
    }

    /// True when no parameter occurs.
    pub fn is_parameter_free(&self) -> bool {
        let n = self.ring.nvars();
        self.terms.keys().all(|e| e[n..].iter().all(|&x| x == 0))
    }

    /// Total degree in the variables of each term, as (min, max).
    pub fn degree_range(&self) -> Option<(i32, i32)> {
        let n = self.ring.nvars();
        let degs = self.terms.keys().map(|e| e[..n].iter().sum::<i32>());
        degs.fold(None, |acc, d| match acc {
            None => Some((d, d)),
            Some((lo, hi)) => Some((lo.min(d), hi.max(d))),
        })
    }

    /// Groups terms by variable monomial; values are parameter polynomials.
    pub fn by_var_monomial(&self) -> BTreeMap<Vec<i32>, Polynomial> {
        let n = self.ring.nvars();
        let mut out: BTreeMap<Vec<i32>, Polynomial> = BTreeMap::new();
        for (e, &c) in &self.terms {
            let mut pe = e.clone();
            pe[..n].iter_mut().for_each(|x| *x = 0);
            out.entry(e[..n].to_vec()).or_insert_with(|| self.ring.zero()).add_term(pe, c);
        }
        out
    }

    /// Formal partial derivative in variable `v`.
    pub fn partial_derivative(&self, v: &str) -> Result<Polynomial, FfError> {
        let i = self.ring.var_index(v).ok_or_else(|| FfError::NotAVariable(v.into()))?;
        let f = &self.ring.field;
        let mut out = self.ring.zero();
        for (e, &c) in &self.terms {
            if e[i] > 0 {
                let mut d = e.clone();
                d[i] -= 1;
                out.add_term(d, f.scale(c, e[i] as i64));
            }
        }
        Ok(out)
    }

    /// Common weighted degree of all terms (variables only), or `None`.
    pub fn weighted_homogeneous_check(&self, weights: &[u32]) -> Result<Option<i64>, FfError> {
        let n = self.ring.nvars();
        if weights.len() != n {
            return Err(FfError::Inhomogeneous(format!("{} weights for {n} variables", weights.len())));
        }
        let mut deg = None;
        for e in self.terms.keys() {
            let d: i64 = e[..n].iter().zip(weights).map(|(&x, &w)| x as i64 * w as i64).sum();
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => return Ok(None),
                _ => {}
            }
        }
        Ok(Some(deg.unwrap_or(0)))
    }

    /// Substitutes generators by polynomials. Unmapped generators are looked
    /// up by name in the target ring (the ring of the images, or `self`'s
    /// ring when `map` is empty).
    pub fn substitute(&self, map: &HashMap<String, Polynomial>) -> Result<Polynomial, FfError> {
        let target = match map.values().next() {
            Some(v) => v.ring.clone(),
            None => self.ring.clone(),
        };
        self.substitute_into(map, &target)
    }

    /// As [`Polynomial::substitute`] with an explicit target ring.
    pub fn substitute_into(&self, map: &HashMap<String, Polynomial>, target: &Arc<Ring>) -> Result<Polynomial, FfError> {
        if map.values().any(|v| !same(&v.ring, target)) {
            return Err(FfError::RingMismatch);
        }
        if target.field.p() != self.ring.field.p() || (self.ring.field.k() > 1 && target.field.spec() != self.ring.field.spec()) {
            return Err(FfError::RingMismatch);
        }
        let ns = self.ring.nslots();
        let mut images = Vec::with_capacity(ns);
        for i in 0..ns {
            let name = self.ring.slot_name(i);
            let img = match map.get(name) {
                Some(v) => v.clone(),
                None => target.gen(name).map_err(|_| FfError::NotAVariable(name.into()))?,
            };
            images.push(img);
        }
        let mut cache: HashMap<(usize, i32), Polynomial> = HashMap::new();
        let mut out = target.zero();
        for (e, &c) in &self.terms {
            let mut term = target.constant(c);
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let p = match cache.get(&(i, x)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = if x < 0 { images[i].inverse_monomial()?.pow(x.unsigned_abs() as u64) } else { images[i].pow(x as u64) };
                        cache.insert((i, x), p.clone());
                        p
                    }
                };
                term = &term * &p;
                if term.is_zero() {
                    break;
                }
            }
            for (te, tc) in term.terms {
                out.add_term(te, tc);
            }
        }
        Ok(out)
    }

    /// Sets all variables to field values, leaving a parameter polynomial.
    pub fn specialize_vars(&self, point: &[Fe]) -> Result<Polynomial, FfError> {
        let n = self.ring.nvars();
        if point.len() != n {
            return Err(FfError::RingMismatch);
        }
        let f = &self.ring.field;
        let mut out = self.ring.zero();
        for (e, &c) in &self.terms {
            let mut v = c;
            for i in 0..n {
                v = f.mul(v, f.pow(point[i], e[i] as i64));
            }
            let mut pe = e.clone();
            pe[..n].iter_mut().for_each(|x| *x = 0);
            out.add_term(pe, v);
        }
        Ok(out)
    }

    /// Whether this parameter polynomial is a unit: after setting nilpotents
    /// to 0 and p-power roots of unity to 1, a single term in the free unit
    /// parameters with nonzero coefficient.
    pub fn is_unit(&self) -> bool {
        let r = &self.ring;
        let n = r.nvars();
        let p = r.field.p();
        let mut reduced: BTreeMap<Vec<i32>, Fe> = BTreeMap::new();
        for (e, &c) in &self.terms {
            if e[..n].iter().any(|&x| x != 0) {
                return false;
            }
            let mut k = e.clone();
            let mut vanish = false;
            for (i, x) in k.iter_mut().enumerate().skip(n) {
                match r.kind(i).unwrap() {
                    ParamKind::Nilpotent { .. } => vanish |= *x > 0,
                    ParamKind::RootOfUnity { order } => {
                        let mut m = order;
                        while m % p == 0 {
                            m /= p;
                        }
                        if m == 1 {
                            *x = 0;
                        }
                    }
                    _ => {}
                }
            }
            if !vanish {
                let s = r.field.add(*reduced.get(&k).unwrap_or(&0), c);
                if s == 0 {
                    reduced.remove(&k);
                } else {
                    reduced.insert(k, s);
                }
            }
        }
        if reduced.len() != 1 {
            return false;
        }
        let e = reduced.keys().next().unwrap();
        e.iter().enumerate().skip(n).all(|(i, &x)| x == 0 || !matches!(r.kind(i), Some(ParamKind::Additive)))
    }

    fn fmt_coeff(&self, c: Fe) -> (bool, String) {
        let f = &self.ring.field;
        if f.k() == 1 {
            let p = f.p();
            if c > p / 2 {
                (true, (p - c).to_string())
            } else {
                (false, c.to_string())
            }
        } else {
            let s = f.render(c);
            if s.contains('+') {
                (false, format!("({s})"))
            } else {
                (false, s)
            }
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let n = self.ring.nvars();
        let mut terms: Vec<(&Vec<i32>, &Fe)> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: i32 = a.0[..n].iter().sum();
            let db: i32 = b.0[..n].iter().sum();
            db.cmp(&da).then(b.0.cmp(a.0))
        });
        for (idx, (e, &c)) in terms.into_iter().enumerate() {
            let (neg, cs) = self.fmt_coeff(c);
            let mut parts = Vec::new();
            for (i, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => parts.push(self.ring.slot_name(i).to_string()),
                    _ => parts.push(format!("{}^{x}", self.ring.slot_name(i))),
                }
            }
            let body = if parts.is_empty() {
                cs
            } else if cs == "1" {
                parts.join("*")
            } else {
                format!("{cs}*{}", parts.join("*"))
            };
            match (idx, neg) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    /// Panics on ring mismatch; use [`Polynomial::try_add`] to check.
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("ring mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(&-rhs).expect("ring mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("ring mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let f = &self.ring.field;
        Polynomial { ring: self.ring.clone(), terms: self.terms.iter().map(|(e, &c)| (e.clone(), f.neg(c))).collect() }
    }
}

/// Writes `g` as a combination of equal-degree parameter-free generators
/// with coefficients in the parameter ring, by elimination over the field.
pub fn quadric_ideal_membership(g: &Polynomial, generators: &[Polynomial]) -> Result<Option<Vec<Polynomial>>, FfError> {
    let ring = g.ring.clone();
    if generators.iter().any(|h| !same(&h.ring, &ring)) {
        return Err(FfError::RingMismatch);
    }
    let mut degree = None;
    for h in generators.iter().chain(std::iter::once(g)) {
        match h.degree_range() {
            None => {}
            Some((lo, hi)) if lo != hi => return Err(FfError::Inhomogeneous(h.to_string())),
            Some((d, _)) => match degree {
                None => degree = Some(d),
                Some(d0) if d0 != d => return Err(FfError::Inhomogeneous(h.to_string())),
                _ => {}
            },
        }
    }
    if generators.iter().any(|h| !h.is_parameter_free()) {
        return Err(FfError::Inhomogeneous("generators must be parameter-free".into()));
    }
    let f = ring.field.clone();
    let gb = g.by_var_monomial();
    let hb: Vec<_> = generators.iter().map(|h| h.by_var_monomial()).collect();
    let mut monos: Vec<Vec<i32>> = gb.keys().cloned().collect();
    for h in &hb {
        monos.extend(h.keys().cloned());
    }
    monos.sort();
    monos.dedup();
    let m = generators.len();
    let mut rows: Vec<(Vec<Fe>, Polynomial)> = monos
        .iter()
        .map(|mono| {
            let a = hb.iter().map(|h| h.get(mono).and_then(|c| c.constant_value()).unwrap_or(0)).collect();
            (a, gb.get(mono).cloned().unwrap_or_else(|| ring.zero()))
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..m {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i].0[col] != 0) else { continue };
        rows.swap(r, pr);
        let inv = f.inv(rows[r].0[col]).unwrap();
        let (a, b) = rows[r].clone();
        let a: Vec<Fe> = a.iter().map(|&x| f.mul(x, inv)).collect();
        let b = b.scale(inv);
        rows[r] = (a.clone(), b.clone());
        for i in 0..rows.len() {
            if i != r && rows[i].0[col] != 0 {
                let c = rows[i].0[col];
                for j in 0..m {
                    rows[i].0[j] = f.sub(rows[i].0[j], f.mul(c, a[j]));
                }
                rows[i].1 = &rows[i].1 - &b.scale(c);
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|(_, b)| !b.is_zero()) {
        return Ok(None);
    }
    let mut coeffs = vec![ring.zero(); m];
    for (i, &col) in pivots.iter().enumerate() {
        coeffs[col] = rows[i].1.clone();
    }
    let mut check = ring.zero();
    for (c, h) in coeffs.iter().zip(generators) {
        check = &check + &(c * h);
    }
    debug_assert_eq!(check, *g);
    Ok((check == *g).then_some(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::FieldSpec;

    fn ring(p: u32, vars: &[&str], params: &[ParamSpec]) -> Arc<Ring> {
        Ring::new(Field::new(&FieldSpec::prime(p)).unwrap(), vars, params).unwrap()
    }

    #[test]
    fn parse_print_round_trip() {
        let r = ring(7, &["x", "y", "z", "w"], &[]);
        let f = r.parse("x^3*y + y^3*z + z^3*x").unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(r.parse(&f.to_string()).unwrap(), f);
        let g = r.parse("w^2 - 3*(x+y)^2 + 6").unwrap();
        assert_eq!(r.parse(&g.to_string()).unwrap(), g);
        assert!(r.parse("0").unwrap().is_zero());
    }

    #[test]
    fn parameter_reduction() {
        let r = ring(7, &["x"], &[ParamSpec::new("l", ParamKind::RootOfUnity { order: 7 })]);
        assert!(r.parse("l^7*x - x").unwrap().is_zero());
        assert_eq!(r.parse("l^-1").unwrap(), r.parse("l^6").unwrap());
        let r = ring(3, &["x", "y"], &[ParamSpec::new("e", ParamKind::Nilpotent { order: 3 })]);
        assert!(r.parse("e^3*x").unwrap().is_zero());
        assert!(matches!(r.parse("e^-1"), Err(FfError::NegativeExponent { .. })));
        assert!(matches!(r.parse("q*x"), Err(FfError::UnknownSymbol { .. })));
    }

    #[test]
    fn substitution_and_derivative() {
        let r = ring(3, &["x", "y"], &[ParamSpec::new("e", ParamKind::Nilpotent { order: 3 })]);
        let f = r.parse("x*y").unwrap();
        let map = HashMap::from([("x".to_string(), r.parse("x + e*y").unwrap())]);
        assert_eq!(f.substitute(&map).unwrap(), r.parse("x*y + e*y^2").unwrap());
        let r7 = ring(7, &["x", "y", "z"], &[]);
        assert!(r7.parse("z^7").unwrap().partial_derivative("z").unwrap().is_zero());
        assert_eq!(r7.parse("x^3*y").unwrap().partial_derivative("x").unwrap(), r7.parse("3*x^2*y").unwrap());
    }

    #[test]
    fn weighted_degree() {
        let r = ring(5, &["s", "t", "x", "y"], &[]);
        let f = r.parse("y^2 - x^3 - s^5*t").unwrap();
        assert_eq!(f.weighted_homogeneous_check(&[1, 1, 2, 3]).unwrap(), Some(6));
        let g = r.parse("x + y^2").unwrap();
        assert_eq!(g.weighted_homogeneous_check(&[1, 1, 1, 1]).unwrap(), None);
    }

    #[test]
    fn units() {
        let r = ring(
            3,
            &["x"],
            &[
                ParamSpec::new("e", ParamKind::Nilpotent { order: 9 }),
                ParamSpec::new("l", ParamKind::Unit),
                ParamSpec::new("a", ParamKind::Additive),
                ParamSpec::new("m", ParamKind::RootOfUnity { order: 3 }),
            ],
        );
        assert!(r.parse("2*l^2 + e*a").unwrap().is_unit());
        assert!(r.parse("m^2 + e").unwrap().is_unit());
        assert!(!r.parse("a").unwrap().is_unit());
        assert!(!r.parse("l + 1").unwrap().is_unit());
        assert!(!r.parse("m - 1").unwrap().is_unit());
    }

    #[test]
    fn ideal_membership() {
        let r = ring(5, &["x", "y", "z"], &[ParamSpec::new("e", ParamKind::Nilpotent { order: 5 })]);
        let gens = vec![r.parse("x*y - z^2").unwrap(), r.parse("x^2 - y*z").unwrap()];
        let c = quadric_ideal_membership(&gens[0], &gens).unwrap().unwrap();
        assert_eq!(c[0], r.one());
        assert!(c[1].is_zero());
        let g = r.parse("(1+e)*(x*y - z^2) + e^2*(x^2 - y*z)").unwrap();
        assert!(quadric_ideal_membership(&g, &gens).unwrap().is_some());
        assert!(quadric_ideal_membership(&r.parse("x*z").unwrap(), &gens).unwrap().is_none());
        assert!(quadric_ideal_membership(&r.parse("x").unwrap(), &gens).is_err());
    }
}
