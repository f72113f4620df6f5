// Copyright 2026 Lindkit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Shared fixtures for the integration tests: single-qubit commutation
//! tables, independent oracles (Choi by reshuffling, local translation
//! operators by explicit Kraus-like sums) and random generator builders.

#![allow(dead_code)]

use lindkit::linalg::{c, kron, CMat, C64};
use lindkit::superop::{GeneratorSpec, LindbladTerm};
use rand::Rng;

pub fn pauli1(a: char) -> CMat {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match a {
        '1' => CMat::from_row_slice(2, 2, &[o, z, z, o]),
        'x' => CMat::from_row_slice(2, 2, &[z, o, o, z]),
        'y' => CMat::from_row_slice(2, 2, &[z, -i, i, z]),
        'z' => CMat::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => panic!("bad axis {a}"),
    }
}

pub fn pauli_string(s: &str) -> CMat {
    s.chars().fold(CMat::identity(1, 1), |acc, a| kron(&acc, &pauli1(a)))
}

/// X ↦ A X B as a column-stacked superoperator.
pub fn sandwich(a: &CMat, b: &CMat) -> CMat {
    kron(&b.transpose(), a)
}

/// ½[σ_a, ·] built from left and right multiplication.
pub fn hat1(a: char) -> CMat {
    let p = pauli1(a);
    let one = CMat::identity(2, 2);
    (sandwich(&p, &one) - sandwich(&one, &p)) * c(0.5, 0.0)
}

/// ½{σ_a, ·}.
pub fn hat1_plus(a: char) -> CMat {
    let p = pauli1(a);
    let one = CMat::identity(2, 2);
    (sandwich(&p, &one) + sandwich(&one, &p)) * c(0.5, 0.0)
}

/// Named single-qubit superoperators: `ix` = iσ̂_x, `x2` = σ̂_x²,
/// `{yz}` = {σ̂_y, σ̂_z}, `iyz+` = iσ̂_yσ̂_z⁺.
pub fn named(name: &str) -> CMat {
    let ch: Vec<char> = name.chars().collect();
    let i = c(0.0, 1.0);
    match ch.as_slice() {
        ['i', a] => hat1(*a) * i,
        [a, '2'] => hat1(*a) * hat1(*a),
        ['{', a, b, '}'] => hat1(*a) * hat1(*b) + hat1(*b) * hat1(*a),
        ['i', a, b, '+'] => hat1(*a) * hat1_plus(*b) * i,
        _ => panic!("bad name {name}"),
    }
}

/// Parses "0", "-{yz}", "2 y2 -2 z2" style entries.
pub fn entry(expr: &str) -> CMat {
    let mut acc = CMat::zeros(4, 4);
    if expr.trim() == "0" {
        return acc;
    }
    for tok in expr.split_whitespace() {
        let split = tok
            .find(|ch: char| !(ch.is_ascii_digit() || ch == '-' || ch == '+' || ch == '.'))
            .unwrap_or(tok.len());
        let (num, name) = tok.split_at(split);
        let k = match num {
            "" | "+" => 1.0,
            "-" => -1.0,
            s => s.parse::<f64>().expect("coefficient"),
        };
        acc += named(name) * c(k, 0.0);
    }
    acc
}

pub struct CommutationTable {
    pub name: &'static str,
    pub rows: [&'static str; 3],
    pub cols: [&'static str; 3],
    pub entries: [[&'static str; 3]; 3],
    /// true: row operand first, [row, col]; false: [col, row].
    pub row_first: bool,
}

pub fn commutation_tables() -> Vec<CommutationTable> {
    vec![
        CommutationTable {
            name: "[i hat, hat^2]",
            rows: ["ix", "iy", "iz"],
            cols: ["x2", "y2", "z2"],
            entries: [["0", "-{yz}", "{yz}"], ["{zx}", "0", "-{zx}"], ["-{xy}", "{xy}", "0"]],
            row_first: true,
        },
        CommutationTable {
            name: "[i hat, {hat, hat}]",
            rows: ["ix", "iy", "iz"],
            cols: ["{yz}", "{zx}", "{xy}"],
            entries: [
                ["2y2 -2z2", "{xy}", "-{zx}"],
                ["-{xy}", "2z2 -2x2", "{yz}"],
                ["{zx}", "-{yz}", "2x2 -2y2"],
            ],
            row_first: true,
        },
        CommutationTable {
            name: "[{hat, hat}, {hat, hat}]",
            rows: ["{yz}", "{zx}", "{xy}"],
            cols: ["{yz}", "{zx}", "{xy}"],
            entries: [["0", "-iz", "iy"], ["iz", "0", "-ix"], ["-iy", "ix", "0"]],
            row_first: true,
        },
        CommutationTable {
            name: "[hat^2, {hat, hat}]",
            rows: ["x2", "y2", "z2"],
            cols: ["{yz}", "{zx}", "{xy}"],
            entries: [["0", "-iy", "iz"], ["ix", "0", "-iz"], ["-ix", "iy", "0"]],
            row_first: true,
        },
        CommutationTable {
            name: "[quasi, i hat]",
            rows: ["iyz+", "izx+", "ixy+"],
            cols: ["ix", "iy", "iz"],
            entries: [["0", "-ixy+", "izx+"], ["ixy+", "0", "-iyz+"], ["-izx+", "iyz+", "0"]],
            row_first: true,
        },
        // Reference header reads [iσ̂_pσ̂_q⁺, iσ̂_r²]; its entries are those of
        // [σ̂_r², iσ̂_pσ̂_q⁺].
        CommutationTable {
            name: "[hat^2, quasi]",
            rows: ["iyz+", "izx+", "ixy+"],
            cols: ["x2", "y2", "z2"],
            entries: [["0", "iyz+", "iyz+"], ["izx+", "0", "izx+"], ["ixy+", "ixy+", "0"]],
            row_first: false,
        },
        CommutationTable {
            name: "[quasi, {hat, hat}]",
            rows: ["ixy+", "iyz+", "izx+"],
            cols: ["{xy}", "{yz}", "{zx}"],
            entries: [["0", "izx+", "iyz+"], ["izx+", "0", "ixy+"], ["iyz+", "ixy+", "0"]],
            row_first: true,
        },
    ]
}

/// Largest entrywise deviation of a table from the numerical commutators.
pub fn table_deviation(t: &CommutationTable) -> f64 {
    let mut worst: f64 = 0.0;
    for (r, row) in t.rows.iter().enumerate() {
        for (k, col) in t.cols.iter().enumerate() {
            let (a, b) = (named(row), named(col));
            let got = if t.row_first {
                &a * &b - &b * &a
            } else {
                &b * &a - &a * &b
            };
            let want = entry(t.entries[r][k]);
            let dev = (got - want).iter().map(|z| z.norm()).fold(0.0, f64::max);
            worst = worst.max(dev);
        }
    }
    worst
}

/// Choi matrix Σ_ij E_ij ⊗ T(E_ij) by reshuffling a column-stacked
/// superoperator: C[(i,a),(j,b)] = T[(a + N b), (i + N j)].
pub fn choi_by_reshuffle(t: &CMat) -> CMat {
    let n = (t.nrows() as f64).sqrt().round() as usize;
    CMat::from_fn(n * n, n * n, |r, s| {
        let (i, a) = (r / n, r % n);
        let (j, b) = (s / n, s % n);
        t[(a + n * b, i + n * j)]
    })
}

/// Local translation X ↦ ½ Tr_k(X) ⊗_k σ_axis on qubit `k` of `n`.
pub fn local_tau(n: usize, k: usize, axis: char) -> CMat {
    let d = 1usize << n;
    let mut acc = CMat::zeros(d * d, d * d);
    let embed = |m: &CMat| {
        let before = CMat::identity(1usize << k, 1usize << k);
        let after = CMat::identity(1usize << (n - k - 1), 1usize << (n - k - 1));
        kron(&kron(&before, m), &after)
    };
    let p = pauli1(axis);
    for a in 0..2 {
        for b in 0..2 {
            let mut ba = CMat::zeros(2, 2);
            ba[(b, a)] = c(1.0, 0.0);
            let mut ab = CMat::zeros(2, 2);
            ab[(a, b)] = c(1.0, 0.0);
            acc += sandwich(&embed(&(&p * ba)), &embed(&ab)) * c(0.5, 0.0);
        }
    }
    acc
}

pub fn random_complex<R: Rng>(rng: &mut R, d: usize, scale: f64) -> CMat {
    CMat::from_fn(d, d, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale
    })
}

pub fn random_hermitian<R: Rng>(rng: &mut R, d: usize, scale: f64) -> CMat {
    let a = random_complex(rng, d, scale);
    (&a + a.adjoint()) * c(0.5, 0.0)
}

/// Random generator on `n` qubits: Hermitian drift and 1 to 3 dense
/// Lindblad terms.
pub fn random_spec<R: Rng>(rng: &mut R, n: usize) -> GeneratorSpec {
    let d = 1usize << n;
    let h = random_hermitian(rng, d, 1.0);
    let k = rng.random_range(1..=3);
    let terms = (0..k).map(|_| LindbladTerm::raw(random_complex(rng, d, 0.7))).collect();
    GeneratorSpec::new(n, h, vec![], terms).expect("valid random generator")
}
