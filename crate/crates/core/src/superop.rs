// Copyright 2026 Lindkit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Superoperator representation of Lindblad generators.
//!
//! Operators on C^N are vectorised by stacking columns, so
//! vec(AXB) = (B^T ⊗ A) vec X. Generators are stored as L with flow
//! exp(-tL), L = i ad_H + Γ and
//! Γ vec ρ = vec(½ Σ_k (V_k†V_k ρ + ρ V_k†V_k - 2 V_k ρ V_k†)).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, frob, kron, CMat, C64, I};
use crate::pauli::{self, anticommutes, star_product, SignedPauliString, XGroupElement};

pub const HERMITIAN_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    Generator,
    Dissipator,
    Hamiltonian,
}

#[derive(Clone, Debug)]
pub struct Superoperator {
    pub matrix: CMat,
    pub convention: Convention,
}

impl Superoperator {
    pub fn new(matrix: CMat, convention: Convention) -> Self {
        Superoperator { matrix, convention }
    }

    /// Hilbert-space dimension N of the operators acted on.
    pub fn hilbert_dim(&self) -> usize {
        (self.matrix.nrows() as f64).sqrt().round() as usize
    }

    pub fn apply(&self, x: &CMat) -> CMat {
        unvec(&(&self.matrix * vec(x)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Raw,
    /// (√γ/2)(σ_p + iσ_q) = (√γ/2) σ_p (1 - σ_m) with m = p ⋆ q.
    Canonical {
        p: SignedPauliString,
        q: SignedPauliString,
        m: SignedPauliString,
    },
    /// √γ G P with P the projector onto the listed basis states.
    Generalized {
        g: XGroupElement,
        support: Vec<usize>,
    },
}

#[derive(Clone, Debug)]
pub struct LindbladTerm {
    pub matrix: CMat,
    pub rate: f64,
    pub provenance: Provenance,
}

impl LindbladTerm {
    pub fn raw(matrix: CMat) -> Self {
        LindbladTerm {
            matrix,
            rate: 1.0,
            provenance: Provenance::Raw,
        }
    }

    /// (√γ/2)(σ_p + iσ_q) for anticommuting unsigned strings p, q.
    pub fn canonical(p: &SignedPauliString, q: &SignedPauliString, gamma: f64) -> Result<Self> {
        if !anticommutes(p, q)? {
            return Err(Error::Commuting);
        }
        let (p, q) = (p.unsigned(), q.unsigned());
        let m = star_product(&p, &q)?;
        let v = (pauli::dense_matrix(&p)? + pauli::dense_matrix(&q)? * I) * c(gamma.sqrt() / 2.0, 0.0);
        Ok(LindbladTerm {
            matrix: v,
            rate: gamma,
            provenance: Provenance::Canonical { p, q, m },
        })
    }

    /// √γ G P_S with P_S the coordinate projector on `support`.
    pub fn generalized(g: &XGroupElement, support: &[usize], gamma: f64) -> Result<Self> {
        let dim = 1usize << g.n();
        let mut proj = CMat::zeros(dim, dim);
        for &k in support {
            if k >= dim {
                return Err(Error::IndexOutOfRange(k, dim));
            }
            proj[(k, k)] = c(1.0, 0.0);
        }
        Ok(LindbladTerm {
            matrix: g.dense() * proj * c(gamma.sqrt(), 0.0),
            rate: gamma,
            provenance: Provenance::Generalized {
                g: g.clone(),
                support: support.to_vec(),
            },
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn conjugated(&self, u: &CMat) -> Self {
        LindbladTerm {
            matrix: u * &self.matrix * u.adjoint(),
            rate: self.rate,
            provenance: Provenance::Raw,
        }
    }

    pub fn is_nilpotent(&self, tol: f64) -> bool {
        frob(&(&self.matrix * &self.matrix)) < tol * frob(&self.matrix).max(1.0)
    }
}

/// A coherently controlled (or free) Lindblad system.
#[derive(Clone, Debug)]
pub struct GeneratorSpec {
    pub n: usize,
    pub drift: CMat,
    pub controls: Vec<CMat>,
    pub dissipators: Vec<LindbladTerm>,
}

impl GeneratorSpec {
    /// Validates sizes and symmetrises Hamiltonians within tolerance.
    pub fn new(n: usize, drift: CMat, controls: Vec<CMat>, dissipators: Vec<LindbladTerm>) -> Result<Self> {
        let dim = 1usize << n;
        let check = |m: &CMat, what: &str| -> Result<()> {
            if m.shape() != (dim, dim) {
                return Err(Error::Dimension(format!(
                    "{what} is {}x{}, expected {dim}x{dim}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            Ok(())
        };
        check(&drift, "drift")?;
        let drift = hermitian_input(&drift)?;
        let controls = controls
            .iter()
            .map(|h| {
                check(h, "control")?;
                hermitian_input(h)
            })
            .collect::<Result<Vec<_>>>()?;
        for v in &dissipators {
            check(&v.matrix, "Lindblad term")?;
        }
        Ok(GeneratorSpec {
            n,
            drift,
            controls,
            dissipators,
        })
    }

    pub fn dissipative(n: usize, dissipators: Vec<LindbladTerm>) -> Result<Self> {
        let dim = 1usize << n;
        Self::new(n, CMat::zeros(dim, dim), Vec::new(), dissipators)
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    /// Total drift D = i ad_{H_d} + Γ.
    pub fn drift_superop(&self) -> CMat {
        i_ad(&self.drift) + dissipator(&self.dissipators)
    }
}

fn hermitian_input(h: &CMat) -> Result<CMat> {
    let defect = linalg::hermitian_defect(h);
    if defect > HERMITIAN_TOL * frob(h).max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    Ok(linalg::symmetrize(h))
}

pub fn vec(x: &CMat) -> CMat {
    CMat::from_column_slice(x.len(), 1, x.as_slice())
}

pub fn unvec(v: &CMat) -> CMat {
    let n = (v.len() as f64).sqrt().round() as usize;
    assert_eq!(n * n, v.len(), "unvec needs a square number of entries");
    CMat::from_column_slice(n, n, v.as_slice())
}

pub fn checked_vec(x: &CMat) -> Result<CMat> {
    if !x.is_square() {
        return Err(Error::Dimension("vec of a non-square matrix".into()));
    }
    Ok(vec(x))
}

/// Left multiplication X -> AX.
pub fn left(a: &CMat) -> CMat {
    kron(&linalg::identity(a.nrows()), a)
}

/// Right multiplication X -> XA.
pub fn right(a: &CMat) -> CMat {
    kron(&a.transpose(), &linalg::identity(a.nrows()))
}

/// ad_A = 1 ⊗ A - A^T ⊗ 1.
pub fn ad(a: &CMat) -> CMat {
    left(a) - right(a)
}

/// ad⁺_A = 1 ⊗ A + A^T ⊗ 1.
pub fn ad_plus(a: &CMat) -> CMat {
    left(a) + right(a)
}

/// i ad_H, the Hamiltonian generator component.
pub fn i_ad(h: &CMat) -> CMat {
    ad(h) * I
}

/// σ̂_A = ½ ad_A.
pub fn hat(a: &CMat) -> CMat {
    ad(a) * c(0.5, 0.0)
}

/// σ̂⁺_A = ½ ad⁺_A.
pub fn hat_plus(a: &CMat) -> CMat {
    ad_plus(a) * c(0.5, 0.0)
}

pub fn hat_sigma(p: &SignedPauliString) -> Result<CMat> {
    Ok(hat(&pauli::dense_matrix(p)?))
}

pub fn hat_sigma_plus(p: &SignedPauliString) -> Result<CMat> {
    Ok(hat_plus(&pauli::dense_matrix(p)?))
}

/// Γ_V for a single operator V.
pub fn single_dissipator(v: &CMat) -> CMat {
    let vdv = v.adjoint() * v;
    (left(&vdv) + right(&vdv)) * c(0.5, 0.0) - kron(&v.conjugate(), v)
}

/// Γ as a superoperator from a list of Lindblad terms.
pub fn dissipator(terms: &[LindbladTerm]) -> CMat {
    dissipator_of(terms.iter().map(|t| &t.matrix))
}

pub fn dissipator_of<'a>(vs: impl IntoIterator<Item = &'a CMat>) -> CMat {
    let mut it = vs.into_iter().peekable();
    let Some(first) = it.peek() else {
        return CMat::zeros(0, 0);
    };
    let n = first.nrows();
    let mut g = CMat::zeros(n * n, n * n);
    for v in it {
        g += single_dissipator(v);
    }
    g
}

/// Γ(ρ) evaluated directly on the Hilbert space, without the superoperator.
pub fn apply_dissipator(terms: &[LindbladTerm], rho: &CMat) -> CMat {
    let mut out = CMat::zeros(rho.nrows(), rho.ncols());
    for t in terms {
        let v = &t.matrix;
        let vdv = v.adjoint() * v;
        out += (&vdv * rho + rho * &vdv) * c(0.5, 0.0) - v * rho * v.adjoint();
    }
    out
}

/// L = i ad_{H_u} + Γ with H_u = H_d + Σ u_j H_j.
pub fn build_lindbladian(spec: &GeneratorSpec, u: &[f64]) -> Result<Superoperator> {
    if u.len() != spec.controls.len() {
        return Err(Error::LengthMismatch(u.len(), spec.controls.len()));
    }
    let mut h = spec.drift.clone();
    for (uj, hj) in u.iter().zip(&spec.controls) {
        h += hj * c(*uj, 0.0);
    }
    let n2 = spec.dim() * spec.dim();
    let mut l = i_ad(&h);
    if !spec.dissipators.is_empty() {
        l += dissipator(&spec.dissipators);
    }
    debug_assert_eq!(l.nrows(), n2);
    Ok(Superoperator::new(l, Convention::Generator))
}

/// Hamiltonian / purely dissipative split of a generator.
#[derive(Clone, Debug)]
pub struct HamiltonianDissipativeSplit {
    /// Traceless Hermitian H₀ with i ad_{H₀} the projection of L onto i ad_su(N).
    pub h0: CMat,
    pub gamma0: CMat,
}

/// Orthogonal projection of L onto i ad_{su(N)} and its complement.
pub fn split_hamiltonian_dissipative(l: &CMat) -> HamiltonianDissipativeSplit {
    let n = (l.nrows() as f64).sqrt().round() as usize;
    let qubits = n.trailing_zeros() as usize;
    let mut h0 = CMat::zeros(n, n);
    // ‖ad_σ‖² = 2 N² for traceless Pauli strings.
    let norm2 = 2.0 * (n * n) as f64;
    for p in pauli::traceless_strings(qubits) {
        let s = pauli::dense_matrix(&p).expect("guarded by superoperator size");
        let coef = linalg::hs_re(&i_ad(&s), l) / norm2;
        if coef != 0.0 {
            h0 += s * c(coef, 0.0);
        }
    }
    let gamma0 = l - i_ad(&h0);
    HamiltonianDissipativeSplit { h0, gamma0 }
}

/// Split computed from an explicit Hamiltonian plus Lindblad terms. Also
/// reports whether every term is traceless, in which case H₀ = H stays the
/// Hamiltonian part up to its trace.
pub fn split_terms(h: &CMat, terms: &[LindbladTerm]) -> (HamiltonianDissipativeSplit, bool) {
    let n = h.nrows();
    let l = i_ad(h)
        + if terms.is_empty() {
            CMat::zeros(n * n, n * n)
        } else {
            dissipator(terms)
        };
    let traceless = terms
        .iter()
        .all(|t| t.matrix.trace().norm() <= 1e-12 * frob(&t.matrix).max(1.0));
    (split_hamiltonian_dissipative(&l), traceless)
}

/// Orthonormal traceless basis σ_m / √N, m in basis order.
pub fn normalized_pauli_basis(n: usize) -> Vec<CMat> {
    let s = 1.0 / ((1usize << n) as f64).sqrt();
    pauli::traceless_strings(n)
        .iter()
        .map(|p| pauli::dense_matrix(p).expect("small n") * c(s, 0.0))
        .collect()
}

/// GKS matrix a_jk = Σ_terms v_j conj(v_k) with V = Σ_j v_j B_j.
pub fn gks_matrix(terms: &[LindbladTerm], basis: &[CMat]) -> Result<CMat> {
    let d = basis.len();
    let mut a = CMat::zeros(d, d);
    for t in terms {
        if t.matrix.trace().norm() > 1e-10 * frob(&t.matrix).max(1.0) {
            return Err(Error::Invalid("GKS expansion needs traceless terms".into()));
        }
        let coeffs: Vec<C64> = basis.iter().map(|b| linalg::hs(b, &t.matrix)).collect();
        for j in 0..d {
            for k in 0..d {
                a[(j, k)] += coeffs[j] * coeffs[k].conj();
            }
        }
    }
    Ok(a)
}

/// Lindblad terms from a GKS matrix by diagonalisation.
pub fn from_gks(a: &CMat, basis: &[CMat]) -> Result<Vec<LindbladTerm>> {
    let (vals, vecs) = linalg::eigh(a);
    let scale = vals.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
    if let Some(&lo) = vals.first() {
        if lo < -1e-10 * scale {
            return Err(Error::NotCompletelyPositive(lo));
        }
    }
    let mut out = Vec::new();
    for (l, &lam) in vals.iter().enumerate() {
        if lam <= 1e-12 * scale {
            continue;
        }
        let n = basis[0].nrows();
        let mut v = CMat::zeros(n, n);
        for (j, b) in basis.iter().enumerate() {
            v += b * vecs[(j, l)];
        }
        out.push(LindbladTerm::raw(v * c(lam.sqrt(), 0.0)));
    }
    Ok(out)
}

/// Pauli coefficients v_m = tr(σ_m V)/N over the full basis.
pub fn pauli_coefficients(v: &CMat) -> Vec<(SignedPauliString, C64)> {
    let n = v.nrows();
    let qubits = n.trailing_zeros() as usize;
    // σ_m only sees the band V[r ^ f, r] for its flip mask f.
    let band: Vec<bool> = (0..n)
        .map(|f| (0..n).any(|r| v[(r ^ f, r)] != C64::new(0.0, 0.0)))
        .collect();
    pauli::basis_strings(qubits)
        .into_iter()
        .map(|p| {
            let coef = if band[p.flip_mask()] {
                pauli::trace_with(&p, v).expect("matching size") / c(n as f64, 0.0)
            } else {
                C64::new(0.0, 0.0)
            };
            (p, coef)
        })
        .collect()
}

/// Human-readable Pauli sum, e.g. "0.5*y1 + 0.5i*zx - 0.25*xx".
pub fn pauli_sum_string(v: &CMat) -> String {
    let r = |x: f64| (x * 1e10).round() / 1e10;
    let mut out = String::new();
    for (p, z) in pauli_coefficients(v) {
        if z.norm() < 1e-12 {
            continue;
        }
        // Purely real or imaginary coefficients carry their sign into the
        // separator.
        let (neg, coef) = if z.im.abs() < 1e-12 {
            (z.re < 0.0, format!("{}", r(z.re.abs())))
        } else if z.re.abs() < 1e-12 {
            (z.im < 0.0, format!("{}i", r(z.im.abs())))
        } else {
            (false, format!("({}{:+}i)", r(z.re), r(z.im)))
        };
        let sep = match (out.is_empty(), neg) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        out.push_str(&format!("{sep}{coef}*{p}"));
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Unital and translational parts of a canonical dissipator.
#[derive(Clone, Debug)]
pub struct UnitalMixedSplit {
    pub unital: CMat,
    pub mixed: CMat,
}

/// Γ₀ = Σ 2|a|²(σ̂_p² + σ̂_q²) and Γ_m = Σ 4 s |a|² i σ̂_p σ̂_q⁺ for terms
/// a(σ_p + s iσ_q); a term a σ_p contributes 2|a|² σ̂_p² to Γ₀ only.
pub fn split_unital_mixed(terms: &[LindbladTerm]) -> Result<UnitalMixedSplit> {
    let first = terms
        .first()
        .ok_or_else(|| Error::NotCanonical("empty term list".into()))?;
    let n = first.dim();
    let mut unital = CMat::zeros(n * n, n * n);
    let mut mixed = CMat::zeros(n * n, n * n);
    for t in terms {
        let comps: Vec<(SignedPauliString, C64)> = pauli_coefficients(&t.matrix)
            .into_iter()
            .filter(|(_, z)| z.norm() > 1e-12 * frob(&t.matrix).max(1.0))
            .collect();
        match comps.as_slice() {
            [(p, a)] if !p.is_identity() => {
                unital += hat_sigma(p)? * hat_sigma(p)? * c(2.0 * a.norm_sqr(), 0.0);
            }
            [(p, a), (q, b)] if !p.is_identity() && !q.is_identity() && anticommutes(p, q)? => {
                let ratio = b / a;
                let s = if (ratio - I).norm() < 1e-10 {
                    1.0
                } else if (ratio + I).norm() < 1e-10 {
                    -1.0
                } else {
                    return Err(Error::NotCanonical(pauli_sum_string(&t.matrix)));
                };
                let w = a.norm_sqr();
                let (hp, hq) = (hat_sigma(p)?, hat_sigma(q)?);
                unital += (&hp * &hp + &hq * &hq) * c(2.0 * w, 0.0);
                mixed += &hp * hat_sigma_plus(q)? * c(0.0, 4.0 * s * w);
            }
            _ => return Err(Error::NotCanonical(pauli_sum_string(&t.matrix))),
        }
    }
    Ok(UnitalMixedSplit { unital, mixed })
}

/// A translation direction with its signed coefficient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranslationComponent {
    pub direction: SignedPauliString,
    pub coefficient: f64,
}

/// Real matrix U†ΓU in the coherence basis (σ_m/√N for m ≠ 1, then 1/√N).
pub fn coherence_representation(gamma: &CMat) -> CMat {
    let n = (gamma.nrows() as f64).sqrt().round() as usize;
    let qubits = n.trailing_zeros() as usize;
    let s = 1.0 / (n as f64).sqrt();
    let mut cols: Vec<CMat> = pauli::traceless_strings(qubits)
        .iter()
        .map(|p| vec(&(pauli::dense_matrix(p).expect("small n") * c(s, 0.0))))
        .collect();
    cols.push(vec(&(linalg::identity(n) * c(s, 0.0))));
    let u = linalg::hstack(&cols);
    u.adjoint() * gamma * u
}

/// Translation components of Γ: the affine shift of the maximally mixed
/// state. Coefficients are those of -Γ(1)/N along σ_m, i.e. the direction in
/// which the flow exp(-tΓ) moves the identity (amplitude damping gives +z).
pub fn translation_directions(gamma: &CMat) -> Vec<TranslationComponent> {
    let n = (gamma.nrows() as f64).sqrt().round() as usize;
    let qubits = n.trailing_zeros() as usize;
    let y = unvec(&(gamma * vec(&linalg::identity(n))));
    let scale = frob(gamma).max(1e-300);
    let mut out = Vec::new();
    for p in pauli::traceless_strings(qubits) {
        let s = pauli::dense_matrix(&p).expect("small n");
        let coef = -(&s * &y).trace().re / n as f64;
        if coef.abs() > 1e-12 * scale {
            out.push(TranslationComponent {
                direction: p,
                coefficient: coef,
            });
        }
    }
    out
}

/// Translation components computed on the Hilbert space from
/// Γ(1) = Σ (V†V - VV†), for sizes where Γ itself is too large to form.
pub fn translation_directions_of(terms: &[LindbladTerm]) -> Result<Vec<TranslationComponent>> {
    let Some(first) = terms.first() else {
        return Ok(Vec::new());
    };
    let n = first.dim();
    let mut y = CMat::zeros(n, n);
    let mut scale: f64 = 0.0;
    for t in terms {
        let v = &t.matrix;
        y += v.adjoint() * v - v * v.adjoint();
        scale += frob(v) * frob(v);
    }
    Ok(pauli_coefficients(&y)
        .into_iter()
        .filter(|(p, z)| !p.is_identity() && z.re.abs() > 1e-12 * scale.max(1e-300))
        .map(|(p, z)| TranslationComponent {
            direction: p,
            coefficient: -z.re,
        })
        .collect())
}

/// Trace of the output of L on each input: zero for trace-preserving L.
pub fn trace_defect(l: &CMat, v: &CMat) -> C64 {
    unvec(&(l * v)).trace()
}
