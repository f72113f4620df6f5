// Copyright 2026 Lindkit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Pauli strings, their products and the star product on signed indices.
//!
//! Strings are written qubit 1 first, e.g. `"xz1y"`, with an optional leading
//! `-`. In Kronecker products qubit 1 is the most significant factor, so the
//! basis index of `e_k` has qubit 1 as its high bit.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, CMat, C64};

/// Largest qubit count for which dense Pauli matrices are built.
pub const DENSE_GUARD: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PauliAxis {
    I,
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 4] = [PauliAxis::I, PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> PauliAxis {
        PauliAxis::ALL[i & 3]
    }

    pub fn symbol(self) -> char {
        match self {
            PauliAxis::I => '1',
            PauliAxis::X => 'x',
            PauliAxis::Y => 'y',
            PauliAxis::Z => 'z',
        }
    }

    pub fn from_symbol(ch: char) -> Option<PauliAxis> {
        match ch {
            '1' | 'i' | 'I' => Some(PauliAxis::I),
            'x' | 'X' => Some(PauliAxis::X),
            'y' | 'Y' => Some(PauliAxis::Y),
            'z' | 'Z' => Some(PauliAxis::Z),
            _ => None,
        }
    }

    /// Single-site product a*b = i^phase * result, phase in {0, 1, 3}.
    pub fn times(self, other: PauliAxis) -> (PauliAxis, u8) {
        use PauliAxis::*;
        match (self, other) {
            (I, b) => (b, 0),
            (a, I) => (a, 0),
            (a, b) if a == b => (I, 0),
            (X, Y) => (Z, 1),
            (Y, Z) => (X, 1),
            (Z, X) => (Y, 1),
            (Y, X) => (Z, 3),
            (Z, Y) => (X, 3),
            (X, Z) => (Y, 3),
            _ => unreachable!(),
        }
    }
}

/// A Pauli string with a sign; the index object of star products and
/// translation directions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct SignedPauliString {
    pub axes: Vec<PauliAxis>,
    pub sign: i8,
}

/// Exact product of two strings: i^phase times the bare string `axes`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhasedPauliProduct {
    pub axes: Vec<PauliAxis>,
    pub phase: u8,
}

/// Element of the group generated by single-site bit flips: true = sigma_x.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct XGroupElement {
    pub axes: Vec<bool>,
}

impl SignedPauliString {
    pub fn new(axes: Vec<PauliAxis>, sign: i8) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::ParsePauli("empty string".into()));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::ParsePauli(format!("sign {sign}")));
        }
        Ok(SignedPauliString { axes, sign })
    }

    pub fn identity(n: usize) -> Self {
        SignedPauliString {
            axes: vec![PauliAxis::I; n],
            sign: 1,
        }
    }

    /// Parse, panicking on malformed input. For literals in code and tests.
    pub fn p(s: &str) -> Self {
        s.parse().expect("valid Pauli string literal")
    }

    pub fn n(&self) -> usize {
        self.axes.len()
    }

    pub fn is_identity(&self) -> bool {
        self.axes.iter().all(|&a| a == PauliAxis::I)
    }

    pub fn weight(&self) -> usize {
        self.axes.iter().filter(|&&a| a != PauliAxis::I).count()
    }

    pub fn unsigned(&self) -> Self {
        SignedPauliString {
            axes: self.axes.clone(),
            sign: 1,
        }
    }

    pub fn negated(&self) -> Self {
        SignedPauliString {
            axes: self.axes.clone(),
            sign: -self.sign,
        }
    }

    /// Position in the lexicographic basis (1 < x < y < z, qubit 1 first).
    pub fn basis_index(&self) -> usize {
        self.axes.iter().fold(0, |acc, a| acc * 4 + a.index())
    }

    pub fn from_basis_index(n: usize, mut idx: usize) -> Self {
        let mut axes = vec![PauliAxis::I; n];
        for k in (0..n).rev() {
            axes[k] = PauliAxis::from_index(idx & 3);
            idx >>= 2;
        }
        SignedPauliString { axes, sign: 1 }
    }

    /// Bit mask (qubit 1 = high bit) of the sites carrying x or y.
    pub fn flip_mask(&self) -> usize {
        let n = self.n();
        self.axes.iter().enumerate().fold(0, |m, (k, a)| {
            if matches!(a, PauliAxis::X | PauliAxis::Y) {
                m | (1 << (n - 1 - k))
            } else {
                m
            }
        })
    }

    /// Embed a single-site axis at qubit `site` (0-based) of an n-qubit string.
    pub fn local(n: usize, site: usize, axis: PauliAxis) -> Self {
        let mut axes = vec![PauliAxis::I; n];
        axes[site] = axis;
        SignedPauliString { axes, sign: 1 }
    }
}

impl fmt::Display for SignedPauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        for a in &self.axes {
            write!(f, "{}", a.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for SignedPauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let (sign, body) = match t.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, t.strip_prefix('+').unwrap_or(t)),
        };
        let axes = body
            .chars()
            .map(|ch| PauliAxis::from_symbol(ch).ok_or_else(|| Error::ParsePauli(s.to_string())))
            .collect::<Result<Vec<_>>>()?;
        SignedPauliString::new(axes, sign)
    }
}

impl From<SignedPauliString> for String {
    fn from(p: SignedPauliString) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for SignedPauliString {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl Serialize for PhasedPauliProduct {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let body: String = self.axes.iter().map(|a| a.symbol()).collect();
        s.serialize_str(&format!("i^{}{}", self.phase, body))
    }
}

fn check_len(p: &SignedPauliString, q: &SignedPauliString) -> Result<()> {
    if p.n() != q.n() {
        return Err(Error::LengthMismatch(p.n(), q.n()));
    }
    Ok(())
}

/// Number of sites where both axes are non-identity and differ.
pub fn anticommuting_sites(p: &SignedPauliString, q: &SignedPauliString) -> Result<usize> {
    check_len(p, q)?;
    Ok(p.axes
        .iter()
        .zip(&q.axes)
        .filter(|(a, b)| **a != PauliAxis::I && **b != PauliAxis::I && a != b)
        .count())
}

pub fn commutes(p: &SignedPauliString, q: &SignedPauliString) -> Result<bool> {
    Ok(anticommuting_sites(p, q)? % 2 == 0)
}

pub fn anticommutes(p: &SignedPauliString, q: &SignedPauliString) -> Result<bool> {
    Ok(!commutes(p, q)?)
}

/// Exact product sigma_p sigma_q = i^phase sigma_m, input signs included.
pub fn string_product(p: &SignedPauliString, q: &SignedPauliString) -> Result<PhasedPauliProduct> {
    check_len(p, q)?;
    let mut phase: u8 = if p.sign * q.sign < 0 { 2 } else { 0 };
    let axes = p
        .axes
        .iter()
        .zip(&q.axes)
        .map(|(a, b)| {
            let (m, ph) = a.times(*b);
            phase = (phase + ph) % 4;
            m
        })
        .collect();
    Ok(PhasedPauliProduct { axes, phase })
}

/// Star product on signed indices.
///
/// The result m satisfies sigma_p sigma_q = i^(eps mod 2) * sign(m) * sigma_|m|
/// with eps the anticommuting-site count: for anticommuting inputs this is
/// the ±i sigma_m rule, for commuting inputs a plain ±sigma_m.
pub fn star_product(p: &SignedPauliString, q: &SignedPauliString) -> Result<SignedPauliString> {
    let prod = string_product(p, q)?;
    // phase odd <=> anticommuting; fold the real part of i^phase into the sign.
    let sign = match prod.phase {
        0 | 1 => 1,
        _ => -1,
    };
    Ok(SignedPauliString { axes: prod.axes, sign })
}

/// All unsigned ordered pairs (p, q) with p * q = m (sign included) and
/// {sigma_p, sigma_q} = 0.
pub fn star_preimages(m: &SignedPauliString) -> Result<Vec<(SignedPauliString, SignedPauliString)>> {
    if m.is_identity() {
        return Err(Error::IdentityString);
    }
    let n = m.n();
    let mut out = Vec::new();
    for idx in 0..(1usize << (2 * n)) {
        let p = SignedPauliString::from_basis_index(n, idx);
        if commutes(&p, m)? {
            continue;
        }
        // sigma_q is proportional to sigma_p sigma_m.
        let q = SignedPauliString {
            axes: string_product(&p, &m.unsigned())?.axes,
            sign: 1,
        };
        if star_product(&p, &q)? == *m {
            out.push((p, q));
        }
    }
    Ok(out)
}

/// All 4^n unsigned strings in basis order.
pub fn basis_strings(n: usize) -> Vec<SignedPauliString> {
    (0..(1usize << (2 * n)))
        .map(|i| SignedPauliString::from_basis_index(n, i))
        .collect()
}

/// The 4^n - 1 traceless basis strings.
pub fn traceless_strings(n: usize) -> Vec<SignedPauliString> {
    basis_strings(n).into_iter().skip(1).collect()
}

/// Dense 2^n x 2^n matrix of a signed string.
pub fn dense_matrix(p: &SignedPauliString) -> Result<CMat> {
    let n = p.n();
    if n > DENSE_GUARD {
        return Err(Error::SizeGuard(format!("dense Pauli matrix for n = {n}")));
    }
    Ok(dense_unchecked(&p.axes, p.sign as f64))
}

/// Dense matrix of a string literal; panics on malformed input.
pub fn sigma(s: &str) -> CMat {
    dense_matrix(&SignedPauliString::p(s)).expect("string within dense guard")
}

/// The single nonzero entry of row `r` of scale·σ_axes, at column r ^ flip.
fn row_entry(axes: &[PauliAxis], r: usize, scale: f64) -> C64 {
    let n = axes.len();
    // Accumulate i^k and a real sign site by site.
    let mut ipow = 0u8;
    let mut s = scale;
    for (k, a) in axes.iter().enumerate() {
        let bit = (r >> (n - 1 - k)) & 1;
        match a {
            PauliAxis::I | PauliAxis::X => {}
            PauliAxis::Y => ipow += if bit == 0 { 3 } else { 1 },
            PauliAxis::Z => {
                if bit == 1 {
                    s = -s
                }
            }
        }
    }
    match ipow % 4 {
        0 => c(s, 0.0),
        1 => c(0.0, s),
        2 => c(-s, 0.0),
        _ => c(0.0, -s),
    }
}

fn dense_unchecked(axes: &[PauliAxis], scale: f64) -> CMat {
    let n = axes.len();
    let dim = 1usize << n;
    let flip = SignedPauliString {
        axes: axes.to_vec(),
        sign: 1,
    }
    .flip_mask();
    let mut m = CMat::zeros(dim, dim);
    for r in 0..dim {
        m[(r, r ^ flip)] = row_entry(axes, r, scale);
    }
    m
}

/// tr(σ_p Y) in O(2^n) without forming σ_p.
pub fn trace_with(p: &SignedPauliString, y: &CMat) -> Result<C64> {
    let dim = 1usize << p.n();
    if y.shape() != (dim, dim) {
        return Err(Error::Dimension(format!(
            "{}x{} operator for {p}",
            y.nrows(),
            y.ncols()
        )));
    }
    let flip = p.flip_mask();
    Ok((0..dim)
        .map(|r| row_entry(&p.axes, r, p.sign as f64) * y[(r ^ flip, r)])
        .sum())
}

impl XGroupElement {
    pub fn identity(n: usize) -> Self {
        XGroupElement { axes: vec![false; n] }
    }

    /// Element with flip bit mask `mask` (qubit 1 = high bit).
    pub fn from_mask(n: usize, mask: usize) -> Self {
        XGroupElement {
            axes: (0..n).map(|k| (mask >> (n - 1 - k)) & 1 == 1).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.axes.len()
    }

    pub fn mask(&self) -> usize {
        let n = self.n();
        self.axes
            .iter()
            .enumerate()
            .fold(0, |m, (k, &b)| if b { m | (1 << (n - 1 - k)) } else { m })
    }

    pub fn as_pauli(&self) -> SignedPauliString {
        SignedPauliString {
            axes: self
                .axes
                .iter()
                .map(|&b| if b { PauliAxis::X } else { PauliAxis::I })
                .collect(),
            sign: 1,
        }
    }

    pub fn dense(&self) -> CMat {
        dense_unchecked(&self.as_pauli().axes, 1.0)
    }
}

/// Index j with G e_k = e_j.
pub fn xgroup_action(g: &XGroupElement, k: usize) -> Result<usize> {
    let dim = 1usize << g.n();
    if k >= dim {
        return Err(Error::IndexOutOfRange(k, dim));
    }
    Ok(k ^ g.mask())
}
