// Copyright 2026 Lindkit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Library error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid Pauli string: {0}")]
    ParsePauli(String),
    #[error("identity string is not allowed here")]
    IdentityString,
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("index {0} out of range for {1} basis states")]
    IndexOutOfRange(usize, usize),
    #[error("matrix is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not unitary")]
    NotUnitary,
    #[error("not a valid density matrix: {0}")]
    InvalidState(String),
    #[error("term is not canonical: {0}")]
    NotCanonical(String),
    #[error("Pauli strings commute; an anticommuting choice is required")]
    Commuting,
    #[error("superoperator outside the expected algebra: {0}")]
    OutsideAlgebra(String),
    #[error("Lie closure exceeded cap {cap} (partial dimension {dim})")]
    ClosureCap { cap: usize, dim: usize },
    #[error("target is not a fixed point (residual {0:.3e})")]
    NotFixed(f64),
    #[error("subspace is not invariant")]
    NotInvariant,
    #[error("GKS matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotCompletelyPositive(f64),
    #[error("degenerate nonzero eigenvalues in mixed target")]
    Degenerate,
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("open problem: {0}")]
    OpenProblem(String),
    #[error("negative time {0}")]
    NegativeTime(f64),
    #[error("kernel is empty")]
    EmptyKernel,
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
