// SPDX-License-Identifier: Apache-2.0

//! Polynomials over F_{p^k} extended by group-scheme parameters:
//! nilpotents (eps^m = 0), roots of unity (l^n = 1), free units (Laurent)
//! and free additive parameters.

mod field;
pub mod parse;
mod poly;

pub use field::{Fe, Field, FieldSpec};
pub use parse::{parse_expr, Expr};
pub use poly::{quadric_ideal_membership, Polynomial, Ring};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by field and polynomial operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FfError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol {name:?} at {pos}")]
    UnknownSymbol { name: String, pos: usize },
    #[error("negative exponent at {pos} applied to a non-unit")]
    NegativeExponent { pos: usize },
    #[error("parameter {name} has invalid order {order}")]
    NilpotentOrder { name: String, order: u32 },
    #[error("field: {0}")]
    Field(String),
    #[error("polynomials live in different rings")]
    RingMismatch,
    #[error("{0} is not a ring variable")]
    NotAVariable(String),
    #[error("inhomogeneous input: {0}")]
    Inhomogeneous(String),
    #[error("element is not invertible")]
    NotInvertible,
}

/// Kind of a group-scheme parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParamKind {
    /// eps with eps^order = 0 (alpha_{p^n}).
    Nilpotent { order: u32 },
    /// l with l^order = 1 (mu_n).
    RootOfUnity { order: u32 },
    /// Invertible free parameter (G_m).
    Unit,
    /// Free parameter (G_a).
    Additive,
}

/// A named parameter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParamSpec {
    pub name: String,
    #[serde(flatten)]
    pub kind: ParamKind,
}

impl ParamSpec {
    pub fn new(name: &str, kind: ParamKind) -> Self {
        Self { name: name.to_string(), kind }
    }

    /// Checks the order against the characteristic: nilpotent orders must be
    /// powers of p.
    pub fn validate(&self, p: u32) -> Result<(), FfError> {
        let bad = || FfError::NilpotentOrder { name: self.name.clone(), order: 0 };
        match self.kind {
            ParamKind::Nilpotent { order } => {
                let mut m = order;
                if m < 2 {
                    return Err(FfError::NilpotentOrder { name: self.name.clone(), order });
                }
                while m % p == 0 {
                    m /= p;
                }
                if m != 1 {
                    return Err(FfError::NilpotentOrder { name: self.name.clone(), order });
                }
                Ok(())
            }
            ParamKind::RootOfUnity { order } if order == 0 => Err(bad()),
            _ => Ok(()),
        }
    }
}
