// Copyright 2026 Lindkit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Lindblad-Kossakowski generators for open qubit systems.
//!
//! The crate builds dissipative superoperators from Pauli-string data,
//! engineers Lindblad terms with prescribed unique fixed points, certifies
//! uniqueness, and computes Lie wedges of coherently controlled systems.

pub mod cli;
pub mod engineering;
pub mod error;
pub mod evolution;
pub mod fixed_points;
pub mod linalg;
pub mod lk_algebra;
pub mod pauli;
pub mod superop;
pub mod wedge;

pub use error::{Error, Result};
