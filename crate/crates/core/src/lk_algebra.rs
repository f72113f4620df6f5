// Copyright 2026 Lindkit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Lindblad-Kossakowski Lie algebras: explicit bases, the χ projection onto
//! the translation ideal, translation operators τ_m and a numerical Lie
//! closure engine.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, c, frob, CMat, RealSpan, I};
use crate::pauli::{self, SignedPauliString};
use crate::superop::{self, hat_sigma, hat_sigma_plus, i_ad, GeneratorSpec};

/// Independence threshold for closure insertions, relative to the
/// (normalised) bracket partners.
pub const RANK_TOL: f64 = 1e-8;

/// Guard for full-algebra enumeration.
pub const FULL_BASIS_GUARD: usize = 2;

/// Guard for χ and τ_m.
pub const TAU_GUARD: usize = 4;

/// Orthonormal (Re tr(A†B)) basis of a real span of superoperators.
#[derive(Clone, Debug)]
pub struct OperatorBasis {
    span: RealSpan,
}

impl OperatorBasis {
    pub fn new(size: usize) -> Self {
        OperatorBasis {
            span: RealSpan::new(size, size),
        }
    }

    pub fn from_span(span: RealSpan) -> Self {
        OperatorBasis { span }
    }

    /// Basis of the real span of `elements`.
    pub fn spanning(size: usize, elements: &[CMat]) -> Self {
        let mut b = OperatorBasis::new(size);
        for e in elements {
            b.span.insert_rel(e, RANK_TOL);
        }
        b
    }

    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    pub fn size(&self) -> usize {
        self.span.shape().0
    }

    pub fn elements(&self) -> &[CMat] {
        self.span.elements()
    }

    pub fn span(&self) -> &RealSpan {
        &self.span
    }

    pub fn contains(&self, m: &CMat, tol: f64) -> bool {
        self.span.relative_distance(m) < tol
    }

    pub fn project(&self, m: &CMat) -> CMat {
        self.span.project(m)
    }

    /// Whether every element of `other` lies in this span.
    pub fn contains_span(&self, other: &OperatorBasis, tol: f64) -> bool {
        other.elements().iter().all(|e| self.contains(e, tol))
    }

    /// Largest relative residual of brackets of basis pairs outside the span.
    pub fn closure_defect(&self) -> f64 {
        let els = self.elements();
        (0..els.len())
            .into_par_iter()
            .map(|i| {
                let mut worst: f64 = 0.0;
                for j in (i + 1)..els.len() {
                    let br = linalg::commutator(&els[i], &els[j]);
                    worst = worst.max(frob(&self.span.residual(&br)));
                }
                worst
            })
            .reduce(|| 0.0, f64::max)
    }

    pub(crate) fn span_mut(&mut self) -> &mut RealSpan {
        &mut self.span
    }
}

/// Result of a Lie closure that may have stopped at its cap.
#[derive(Clone, Debug)]
pub struct Closure {
    pub basis: OperatorBasis,
    pub capped: bool,
}

/// Smallest real Lie algebra containing `generators`, or the partial basis
/// with `capped` set once the dimension would exceed `cap`.
///
/// Left-normed brackets [g_1, [g_2, ..., g_k]] span the generated algebra, so
/// each new element is bracketed with the generators only. Processing is
/// breadth-first in input order, which makes the basis deterministic. When
/// `ambient` is given (the dimension of a Lie algebra known to contain every
/// generator) the closure stops as soon as it is reached.
pub fn lie_closure_bounded(generators: &[CMat], cap: usize, ambient: Option<usize>) -> Closure {
    const CHUNK: usize = 256;
    let size = generators.first().map(|g| g.nrows()).unwrap_or(0);
    let full = ambient.unwrap_or(usize::MAX);
    let mut basis = OperatorBasis::new(size);
    let gens: Vec<CMat> = generators
        .iter()
        .filter(|g| frob(g) > 0.0)
        .map(|g| g * c(1.0 / frob(g), 0.0))
        .collect();
    let done = |basis: &OperatorBasis, capped: bool| Closure {
        basis: basis.clone(),
        capped,
    };
    let mut frontier = Vec::new();
    for g in &gens {
        if let Some(e) = basis.span.insert_abs(g, RANK_TOL) {
            if basis.dim() > cap {
                return done(&basis, true);
            }
            frontier.push(e);
        }
    }
    while !frontier.is_empty() && basis.dim() < full {
        let pairs: Vec<(usize, usize)> = (0..frontier.len())
            .flat_map(|i| (0..gens.len()).map(move |j| (i, j)))
            .collect();
        let mut next = Vec::new();
        for chunk in pairs.chunks(CHUNK) {
            let brackets: Vec<CMat> = chunk
                .par_iter()
                .map(|&(i, j)| linalg::commutator(&gens[j], &frontier[i]))
                .collect();
            for b in &brackets {
                if let Some(e) = basis.span.insert_abs(b, RANK_TOL) {
                    if basis.dim() > cap {
                        return done(&basis, true);
                    }
                    next.push(e);
                    if basis.dim() >= full {
                        return done(&basis, false);
                    }
                }
            }
        }
        frontier = next;
    }
    done(&basis, false)
}

pub fn lie_closure_partial(generators: &[CMat], cap: usize) -> Closure {
    lie_closure_bounded(generators, cap, None)
}

pub fn lie_closure(generators: &[CMat], cap: usize) -> Result<OperatorBasis> {
    closure_result(lie_closure_partial(generators, cap), cap)
}

/// Closure inside an ambient algebra of known dimension.
pub fn lie_closure_within(generators: &[CMat], cap: usize, ambient: usize) -> Result<OperatorBasis> {
    closure_result(lie_closure_bounded(generators, cap, Some(ambient)), cap)
}

fn closure_result(cl: Closure, cap: usize) -> Result<OperatorBasis> {
    if cl.capped {
        return Err(Error::ClosureCap {
            cap,
            dim: cl.basis.dim(),
        });
    }
    Ok(cl.basis)
}

/// Default cap: the dimension of gl(4^n) as a real space is 2·16^n, but
/// everything here lives in the LK algebra of dimension (4^n - 1)4^n.
pub fn default_cap(n: usize) -> usize {
    let d = 1usize << (2 * n);
    (d - 1) * d
}

/// (4^n - 1)², the dimension of the unital LK algebra.
pub fn unital_dim(n: usize) -> usize {
    let d = (1usize << (2 * n)) - 1;
    d * d
}

fn guard(n: usize, limit: usize, what: &str) -> Result<()> {
    if n == 0 || n > limit {
        return Err(Error::SizeGuard(format!("{what} requires 1 <= n <= {limit}, got {n}")));
    }
    Ok(())
}

/// Spanning set {σ̂_p², {σ̂_α, σ̂_μ}₊ | α < μ, iσ̂_p} of the unital algebra.
pub fn unital_spanning_set(n: usize) -> Result<Vec<CMat>> {
    guard(n, FULL_BASIS_GUARD, "unital basis")?;
    let hats: Vec<CMat> = pauli::traceless_strings(n)
        .iter()
        .map(hat_sigma)
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for h in &hats {
        out.push(h * h);
    }
    for a in 0..hats.len() {
        for b in (a + 1)..hats.len() {
            out.push(linalg::anticommutator(&hats[a], &hats[b]));
        }
    }
    // Hamiltonian parts last: their brackets with the rest stay in the span,
    // so the closure front reaches new elements sooner.
    for h in &hats {
        out.push(h * I);
    }
    Ok(out)
}

/// Basis of the unital LK algebra, dimension (4^n - 1)².
pub fn unital_basis(n: usize) -> Result<OperatorBasis> {
    let gens = unital_spanning_set(n)?;
    lie_closure_within(&gens, default_cap(n), unital_dim(n))
}

/// Basis of the full LK algebra: the unital part plus all τ_m, dimension
/// (4^n - 1)4^n.
pub fn lk_basis(n: usize) -> Result<OperatorBasis> {
    let mut gens = unital_spanning_set(n)?;
    for m in pauli::traceless_strings(n) {
        gens.push(translation_tau(&m)?);
    }
    lie_closure_within(&gens, default_cap(n), default_cap(n))
}

/// C₀ = 2^{-(2n-1)} Σ_{p ≠ 1} σ̂_p², the projector onto traceless operators.
pub fn c0(n: usize) -> Result<CMat> {
    guard(n, TAU_GUARD, "C0")?;
    let d = 1usize << (2 * n);
    let mut acc = CMat::zeros(d, d);
    for p in pauli::traceless_strings(n) {
        let h = hat_sigma(&p)?;
        acc += &h * &h;
    }
    Ok(acc * c(2f64.powi(-(2 * n as i32 - 1)), 0.0))
}

/// Largest |tr(unvec(A v))| over basis vectors v, relative to |A|.
pub fn trace_range_defect(a: &CMat) -> f64 {
    let n = (a.nrows() as f64).sqrt().round() as usize;
    // tr(unvec(w)) = <vec 1, w>, so the defect is |vec(1)† A|.
    let one = superop::vec(&linalg::identity(n));
    let row = one.adjoint() * a;
    frob(&row) / frob(a).max(1e-300)
}

/// χ(A) = [C₀, A] for A with traceless range.
pub fn chi_projection(a: &CMat) -> Result<CMat> {
    let n = (a.nrows() as f64).sqrt().round() as usize;
    let qubits = n.trailing_zeros() as usize;
    if trace_range_defect(a) > 1e-9 {
        return Err(Error::OutsideAlgebra("range is not traceless".into()));
    }
    let c0 = c0(qubits)?;
    Ok(linalg::commutator(&c0, a))
}

/// τ_m = χ(iσ̂_q σ̂_p⁺) for the first (p, q) with p ⋆ q = m.
pub fn translation_tau(m: &SignedPauliString) -> Result<CMat> {
    guard(m.n(), TAU_GUARD, "translation operator")?;
    let pre = pauli::star_preimages(m)?;
    let (p, q) = &pre[0];
    tau_from_preimage(p, q)
}

/// χ(iσ̂_q σ̂_p⁺) for a specific preimage pair.
pub fn tau_from_preimage(p: &SignedPauliString, q: &SignedPauliString) -> Result<CMat> {
    let quasi = hat_sigma(q)? * hat_sigma_plus(p)? * I;
    chi_projection(&quasi)
}

/// Skew-Hermitian and Hermitian parts of a basis.
#[derive(Clone, Debug)]
pub struct CartanSplit {
    pub k_part: OperatorBasis,
    pub p_part: OperatorBasis,
}

pub fn cartan_split(basis: &OperatorBasis) -> CartanSplit {
    let size = basis.size();
    let mut k = OperatorBasis::new(size);
    let mut p = OperatorBasis::new(size);
    for e in basis.elements() {
        let herm = (e + e.adjoint()) * c(0.5, 0.0);
        let skew = (e - e.adjoint()) * c(0.5, 0.0);
        k.span_mut().insert_abs(&skew, RANK_TOL);
        p.span_mut().insert_abs(&herm, RANK_TOL);
    }
    CartanSplit { k_part: k, p_part: p }
}

/// Dimensions and accessibility flags of a controlled Lindblad system.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SystemAlgebraReport {
    pub dim_kc: usize,
    pub dim_kd: usize,
    pub dim_g: usize,
    /// Full Hamiltonian controllability by the controls alone.
    pub h: bool,
    /// Full Hamiltonian controllability only with the drift Hamiltonian.
    pub wh: bool,
    /// System algebra equals the full (unital resp. non-unital) LK algebra.
    pub a: bool,
    pub unital: bool,
}

pub fn control_algebra(spec: &GeneratorSpec, cap: usize) -> Result<OperatorBasis> {
    let gens: Vec<CMat> = spec.controls.iter().map(i_ad).collect();
    let size = spec.dim() * spec.dim();
    if gens.is_empty() {
        return Ok(OperatorBasis::new(size));
    }
    lie_closure(&gens, cap)
}

pub fn classify_system_algebra(spec: &GeneratorSpec, cap: usize) -> Result<SystemAlgebraReport> {
    let d = spec.dim() * spec.dim();
    let su = d - 1;
    let kc = control_algebra(spec, cap)?;
    let mut kd_gens: Vec<CMat> = vec![i_ad(&spec.drift)];
    kd_gens.extend(spec.controls.iter().map(i_ad));
    let kd = lie_closure(&kd_gens, cap)?;
    let drift = spec.drift_superop();
    let mut g_gens = vec![drift.clone()];
    g_gens.extend(spec.controls.iter().map(i_ad));
    let g = lie_closure(&g_gens, cap)?;
    let n = spec.dim();
    let gamma_one = &drift * superop::vec(&linalg::identity(n));
    let unital = frob(&gamma_one) <= 1e-10 * frob(&drift).max(1.0);
    let full = if unital { su * su } else { su * d };
    let h = kc.dim() == su;
    Ok(SystemAlgebraReport {
        dim_kc: kc.dim(),
        dim_kd: kd.dim(),
        dim_g: g.dim(),
        h,
        wh: !h && kd.dim() == su,
        a: g.dim() == full,
        unital,
    })
}
