// SPDX-License-Identifier: Apache-2.0

//! Reflections, vector orbits and fundamental-chamber computations.

use std::collections::{HashSet, VecDeque};

use thiserror::Error;

use crate::lattice::{LatticeError, LatticeVector, QuadraticSpace};

/// Default cap on orbit sizes.
pub const DEFAULT_ORBIT_CAP: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeylError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("not a root: {0} has square {1}, expected -2")]
    InvalidRoot(LatticeVector, i64),
    #[error("root {0} is not orthogonal to the canonical vector")]
    NotInE(LatticeVector),
    #[error("orbit exceeds cap of {0} vectors")]
    OrbitCap(usize),
    #[error("generator {0} of the subconfiguration is not among the curves")]
    NotContained(LatticeVector),
}

/// s_r(v) = v + (v.r) r for r^2 = -2.
pub fn reflect(
    space: &QuadraticSpace,
    root: &LatticeVector,
    v: &LatticeVector,
) -> Result<LatticeVector, WeylError> {
    let rr = space.inner_product(root, root)?;
    if rr != -2 {
        return Err(WeylError::InvalidRoot(root.clone(), rr));
    }
    let c = space.inner_product(v, root)?;
    Ok(v.scaled_add(c, root))
}

/// Reflection without validation, for inner loops over known roots.
pub(crate) fn reflect_unchecked(root: &LatticeVector, v: &LatticeVector) -> LatticeVector {
    v.scaled_add(v.dot(root), root)
}

/// Subgroup of O(I^{1,n}) generated by reflections in the given roots.
#[derive(Clone, Debug)]
pub struct ReflectionGroupSpec {
    space: QuadraticSpace,
    generators: Vec<LatticeVector>,
}

impl ReflectionGroupSpec {
    /// Validates that each generator is a root of E = k^perp.
    pub fn new(space: QuadraticSpace, generators: Vec<LatticeVector>) -> Result<Self, WeylError> {
        let k = space.canonical();
        for g in &generators {
            let gg = space.inner_product(g, g)?;
            if gg != -2 {
                return Err(WeylError::InvalidRoot(g.clone(), gg));
            }
            if g.dot(&k) != 0 {
                return Err(WeylError::NotInE(g.clone()));
            }
        }
        Ok(Self { space, generators })
    }

    pub fn space(&self) -> &QuadraticSpace {
        &self.space
    }

    pub fn generators(&self) -> &[LatticeVector] {
        &self.generators
    }

    /// The fundamental chamber C = { v : v.w >= 0 for all generators w }.
    pub fn chamber(&self) -> Chamber {
        Chamber { roots: self.generators.clone() }
    }
}

/// Closed cone cut out by v.w >= 0.
#[derive(Clone, Debug)]
pub struct Chamber {
    roots: Vec<LatticeVector>,
}

impl Chamber {
    pub fn contains(&self, v: &LatticeVector) -> bool {
        self.roots.iter().all(|w| v.dot(w) >= 0)
    }
}

/// Orbit of `seed` under the group, sorted lexicographically.
pub fn orbit(group: &ReflectionGroupSpec, seed: &LatticeVector) -> Result<Vec<LatticeVector>, WeylError> {
    orbit_capped(group, seed, DEFAULT_ORBIT_CAP)
}

/// [`orbit`] with an explicit size cap.
pub fn orbit_capped(
    group: &ReflectionGroupSpec,
    seed: &LatticeVector,
    cap: usize,
) -> Result<Vec<LatticeVector>, WeylError> {
    group.space.inner_product(seed, seed)?;
    let mut seen: HashSet<LatticeVector> = HashSet::from([seed.clone()]);
    let mut queue = VecDeque::from([seed.clone()]);
    while let Some(v) = queue.pop_front() {
        for r in &group.generators {
            let w = reflect_unchecked(r, &v);
            if !seen.contains(&w) {
                if seen.len() >= cap {
                    return Err(WeylError::OrbitCap(cap));
                }
                seen.insert(w.clone());
                queue.push_back(w);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Exceptional vectors in the chamber of all (-2)-curves: the (-1)-curves.
pub fn minus_one_curves(all_curves: &ReflectionGroupSpec) -> Result<Vec<LatticeVector>, WeylError> {
    let chamber = all_curves.chamber();
    Ok(all_curves
        .space
        .enumerate_exceptional()?
        .into_iter()
        .filter(|v| chamber.contains(v))
        .collect())
}

/// (-1)-curves disjoint from every curve of `subconfig`.
pub fn curves_disjoint_from(
    all_curves: &ReflectionGroupSpec,
    subconfig: &ReflectionGroupSpec,
) -> Result<Vec<LatticeVector>, WeylError> {
    for g in &subconfig.generators {
        if !all_curves.generators.contains(g) {
            return Err(WeylError::NotContained(g.clone()));
        }
    }
    Ok(minus_one_curves(all_curves)?
        .into_iter()
        .filter(|v| subconfig.generators.iter().all(|r| v.dot(r) == 0))
        .collect())
}
