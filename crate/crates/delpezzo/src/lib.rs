// SPDX-License-Identifier: Apache-2.0

//! Verification toolkit for RDP del Pezzo surfaces in characteristics 3, 5
//! and 7: lattice enumeration in I^{1,9-d}, root sublattice embeddings and
//! the blow-down criterion, configuration tables, finite-field polynomial
//! arithmetic, rational double point classification and group-scheme
//! action checks over a bundled dataset.

pub mod action;
pub mod catalog;
pub mod cli;
pub mod dataset;
pub mod dynkin;
pub mod embedding;
pub mod exec;
pub mod ffpoly;
pub mod lattice;
pub mod singularity;
pub mod weyl;
