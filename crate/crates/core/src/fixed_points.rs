// Copyright 2026 Lindkit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Fixed points of purely dissipative generators.
//!
//! Dark spaces, invariant subspaces, pure-state conditions, uniqueness
//! certificates, reduced generators, and the Pauli eigenstructure of a single
//! canonical term.
//!
//! A subspace S is invariant when V_k S ⊆ S for all k and (Σ V_k†V_k) S ⊆ S.
//! Invariant subspaces are closed under sums, so every subspace W contains a
//! largest invariant one; [`maximal_invariant_subspace`] computes it by
//! repeatedly discarding directions that leave W. This turns the search for
//! an invariant subspace orthogonal to the dark space into a finite
//! computation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, c, frob, CMat, CVec, C64};
use crate::pauli::{self, commutes, SignedPauliString};
use crate::superop::{self, apply_dissipator, LindbladTerm, Provenance};

/// Null-space threshold relative to σ_max.
pub const NULL_TOL: f64 = 1e-9;

/// Absolute threshold for invariance residuals of normalised operators.
pub const INVARIANCE_TOL: f64 = 1e-9;

/// Largest qubit count for which the 4^n x 4^n kernel is computed.
pub const KERNEL_GUARD: usize = 4;

/// Beyond this size only the cheap dark-space criteria run.
pub const SEARCH_GUARD: usize = 6;

#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: CMat,
}

impl DensityMatrix {
    pub fn new(m: CMat) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidState("not square".into()));
        }
        if !linalg::is_hermitian(&m, 1e-9) {
            return Err(Error::InvalidState("not Hermitian".into()));
        }
        let m = linalg::symmetrize(&m);
        let tr = m.trace().re;
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let lo = linalg::min_eigenvalue_hermitian(&m);
        if lo < -1e-9 {
            return Err(Error::InvalidState(format!("negative eigenvalue {lo:.3e}")));
        }
        Ok(DensityMatrix { matrix: m })
    }

    /// Normalises `m` by its trace before validation.
    pub fn normalized(m: CMat) -> Result<Self> {
        let tr = m.trace();
        if tr.norm() < 1e-300 {
            return Err(Error::InvalidState("zero trace".into()));
        }
        Self::new(m / tr)
    }

    pub fn pure(psi: &CVec) -> Result<Self> {
        let n = psi.norm();
        if n == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let v = psi / c(n, 0.0);
        Ok(DensityMatrix {
            matrix: &v * v.adjoint(),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            matrix: linalg::identity(dim) / c(dim as f64, 0.0),
        }
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// The state vector if the state is pure to `tol`.
    pub fn pure_vector(&self, tol: f64) -> Option<CVec> {
        let (vals, vecs) = linalg::eigh(&self.matrix);
        let top = *vals.last()?;
        if (top - 1.0).abs() < tol {
            Some(vecs.column(vals.len() - 1).into_owned())
        } else {
            None
        }
    }

    pub fn rank(&self, tol: f64) -> usize {
        linalg::eigh(&self.matrix).0.iter().filter(|&&v| v > tol).count()
    }

    /// Orthonormal frame of the support.
    pub fn support(&self, tol: f64) -> Subspace {
        let (vals, vecs) = linalg::eigh(&self.matrix);
        let cols: Vec<CVec> = vals
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > tol)
            .map(|(i, _)| vecs.column(i).into_owned())
            .collect();
        Subspace::from_orthonormal(if cols.is_empty() {
            CMat::zeros(self.dim(), 0)
        } else {
            CMat::from_columns(&cols)
        })
    }
}

/// Orthonormal column frame of a subspace of C^N.
#[derive(Clone, Debug)]
pub struct Subspace {
    frame: CMat,
}

impl Subspace {
    /// Span of arbitrary columns.
    pub fn span_of(vectors: &CMat) -> Self {
        Subspace {
            frame: linalg::column_span(vectors, NULL_TOL),
        }
    }

    pub fn from_vectors(dim: usize, vs: &[CVec]) -> Self {
        if vs.is_empty() {
            return Self::zero(dim);
        }
        Self::span_of(&CMat::from_columns(vs))
    }

    pub fn from_orthonormal(frame: CMat) -> Self {
        Subspace { frame }
    }

    pub fn zero(dim: usize) -> Self {
        Subspace {
            frame: CMat::zeros(dim, 0),
        }
    }

    pub fn full(dim: usize) -> Self {
        Subspace {
            frame: linalg::identity(dim),
        }
    }

    /// Span of computational basis vectors.
    pub fn coordinate(dim: usize, indices: &[usize]) -> Self {
        let mut f = CMat::zeros(dim, indices.len());
        for (j, &k) in indices.iter().enumerate() {
            f[(k, j)] = c(1.0, 0.0);
        }
        Subspace { frame: f }
    }

    pub fn frame(&self) -> &CMat {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.frame.ncols()
    }

    pub fn ambient(&self) -> usize {
        self.frame.nrows()
    }

    pub fn projector(&self) -> CMat {
        linalg::projector(&self.frame)
    }

    pub fn complement(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.ambient());
        }
        Subspace {
            frame: linalg::null_space_abs(&self.frame.adjoint(), 1e-10),
        }
    }

    /// Distance of a unit-normalised `v` from the subspace.
    pub fn distance(&self, v: &CVec) -> f64 {
        let n = v.norm();
        if n == 0.0 {
            return 0.0;
        }
        let r = v - &self.frame * (self.frame.adjoint() * v);
        r.norm() / n
    }

    pub fn contains(&self, v: &CVec, tol: f64) -> bool {
        self.distance(v) < tol
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span_of(&linalg::hstack(&[self.frame.clone(), other.frame.clone()]))
    }
}

/// Tri-state uniqueness verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Uniqueness {
    Yes,
    No,
    Undecided,
}

#[derive(Clone, Debug)]
pub struct FixedPointReport {
    pub dark_space: Subspace,
    /// Dimension of ker Γ̂ when it was computed (n small enough).
    pub kernel_dim: Option<usize>,
    pub unique: Uniqueness,
    /// An invariant subspace orthogonal to the dark space, when one exists.
    pub witness_subspace: Option<Subspace>,
    /// A fixed point different from the target.
    pub witness_state: Option<DensityMatrix>,
    /// Names of the criteria that were applied, in order.
    pub certificates: Vec<String>,
}

fn check_terms(terms: &[LindbladTerm]) -> Result<usize> {
    let dim = terms
        .first()
        .map(|t| t.dim())
        .ok_or_else(|| Error::Invalid("no Lindblad terms".into()))?;
    if terms.iter().any(|t| t.matrix.shape() != (dim, dim)) {
        return Err(Error::Dimension("Lindblad terms of different sizes".into()));
    }
    Ok(dim)
}

/// Σ_k V_k†V_k.
pub fn sum_vdv(terms: &[LindbladTerm]) -> CMat {
    let dim = terms.first().map(|t| t.dim()).unwrap_or(0);
    let mut m = CMat::zeros(dim, dim);
    for t in terms {
        m += t.matrix.adjoint() * &t.matrix;
    }
    m
}

/// Σ_k V_k.
pub fn sum_v(terms: &[LindbladTerm]) -> CMat {
    let dim = terms.first().map(|t| t.dim()).unwrap_or(0);
    let mut m = CMat::zeros(dim, dim);
    for t in terms {
        m += &t.matrix;
    }
    m
}

/// D₀ = ∩ ker V_k = ker Σ V_k†V_k, from the Hermitian eigendecomposition.
pub fn dark_space_zero(terms: &[LindbladTerm]) -> Subspace {
    let Some(first) = terms.first() else {
        return Subspace::zero(0);
    };
    let dim = first.dim();
    let m = sum_vdv(terms);
    let (vals, vecs) = linalg::eigh(&m);
    let top = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if top == 0.0 {
        return Subspace::full(dim);
    }
    // Eigenvalues of V†V are squared singular values.
    let tol = NULL_TOL * NULL_TOL.sqrt() * top;
    let cols: Vec<CVec> = vals
        .iter()
        .enumerate()
        .filter(|(_, &v)| v.abs() <= tol.max(1e-13 * top))
        .map(|(i, _)| vecs.column(i).into_owned())
        .collect();
    Subspace::from_vectors(dim, &cols)
}

/// Dark space D_Λ: vectors with V_k ψ = λ_k ψ and ψ† V_Σ = λ_Σ ψ†,
/// V_Σ = Σ conj(λ_k) V_k, λ_Σ = Σ |λ_k|². Without Λ this is D₀.
pub fn dark_space(terms: &[LindbladTerm], lambda: Option<&[C64]>) -> Result<Subspace> {
    let dim = check_terms(terms)?;
    let Some(lam) = lambda else {
        return Ok(dark_space_zero(terms));
    };
    if lam.len() != terms.len() {
        return Err(Error::LengthMismatch(lam.len(), terms.len()));
    }
    let id = linalg::identity(dim);
    let mut blocks: Vec<CMat> = terms.iter().zip(lam).map(|(t, &l)| &t.matrix - &id * l).collect();
    let mut vsig_dag = CMat::zeros(dim, dim);
    for (t, &l) in terms.iter().zip(lam) {
        vsig_dag += t.matrix.adjoint() * l;
    }
    let lsig: f64 = lam.iter().map(|l| l.norm_sqr()).sum();
    blocks.push(vsig_dag - &id * c(lsig, 0.0));
    let stacked = linalg::vstack(&blocks);
    let scale = terms.iter().map(|t| frob(&t.matrix)).fold(1.0, f64::max);
    Ok(Subspace::from_orthonormal(linalg::null_space_abs(
        &stacked,
        NULL_TOL * scale,
    )))
}

/// Largest subspace of `within` invariant under every operator in `ops`.
pub fn maximal_invariant_subspace(ops: &[CMat], within: &Subspace) -> Subspace {
    let normed: Vec<CMat> = ops
        .iter()
        .filter(|o| frob(o) > 0.0)
        .map(|o| o / c(frob(o), 0.0))
        .collect();
    let mut q = within.frame().clone();
    let dim = within.ambient();
    loop {
        if q.ncols() == 0 || normed.is_empty() {
            return Subspace::from_orthonormal(q);
        }
        let perp = linalg::identity(dim) - &q * q.adjoint();
        let blocks: Vec<CMat> = normed.iter().map(|o| &perp * o * &q).collect();
        let ns = linalg::null_space_abs(&linalg::vstack(&blocks), INVARIANCE_TOL);
        if ns.ncols() == q.ncols() {
            return Subspace::from_orthonormal(q);
        }
        q = if ns.ncols() == 0 { CMat::zeros(dim, 0) } else { &q * ns };
    }
}

/// Smallest subspace containing `v` and invariant under `ops`.
pub fn krylov_closure(ops: &[CMat], v: &CVec) -> Subspace {
    let dim = v.len();
    let mut frame: Vec<CVec> = Vec::new();
    let mut queue = vec![v.clone()];
    while let Some(x) = queue.pop() {
        let mut r = x.clone();
        for _ in 0..2 {
            for b in &frame {
                let coef = b.dotc(&r);
                r -= b * coef;
            }
        }
        let nr = r.norm();
        if nr > 1e-10 * x.norm().max(1e-300) && nr > 1e-14 {
            let e = r / c(nr, 0.0);
            for o in ops {
                queue.push(o * &e);
            }
            frame.push(e);
        }
    }
    Subspace::from_vectors(dim, &frame)
}

/// The generators whose common invariant subspaces carry fixed points.
fn invariance_ops(terms: &[LindbladTerm]) -> Vec<CMat> {
    let mut ops: Vec<CMat> = terms.iter().map(|t| t.matrix.clone()).collect();
    ops.push(sum_vdv(terms));
    ops
}

/// Whether V_k S ⊆ S for all k and (Σ V_k†V_k) S ⊆ S.
pub fn invariant_subspace_test(terms: &[LindbladTerm], s: &Subspace) -> bool {
    if s.dim() == 0 || s.dim() == s.ambient() {
        return true;
    }
    let perp = linalg::identity(s.ambient()) - s.projector();
    invariance_ops(terms).iter().all(|o| {
        let scale = frob(o).max(1e-300);
        frob(&(&perp * o * s.frame())) <= 1e-10 * scale.max(1.0)
    })
}

/// Whether only the V_k (not Σ V_k†V_k) leave S invariant.
pub fn terms_leave_invariant(terms: &[LindbladTerm], s: &Subspace) -> bool {
    let perp = linalg::identity(s.ambient()) - s.projector();
    terms
        .iter()
        .all(|t| frob(&(&perp * &t.matrix * s.frame())) <= 1e-10 * frob(&t.matrix).max(1.0))
}

#[derive(Clone, Debug)]
pub struct PureFixedPointTest {
    pub is_fixed: bool,
    pub lambdas: Vec<C64>,
    pub residual: f64,
}

/// Simultaneous right eigenvector of all V_k and left eigenvector of V_Σ.
pub fn pure_fixed_point_test(terms: &[LindbladTerm], psi: &CVec) -> PureFixedPointTest {
    let v = psi / c(psi.norm(), 0.0);
    let lambdas: Vec<C64> = terms.iter().map(|t| v.dotc(&(&t.matrix * &v))).collect();
    let mut residual: f64 = 0.0;
    let dim = v.len();
    let mut vsig_dag = CMat::zeros(dim, dim);
    for (t, &l) in terms.iter().zip(&lambdas) {
        residual = residual.max((&t.matrix * &v - &v * l).norm() / frob(&t.matrix).max(1.0));
        vsig_dag += t.matrix.adjoint() * l;
    }
    let lsig: f64 = lambdas.iter().map(|l| l.norm_sqr()).sum();
    let scale = terms.iter().map(|t| frob(&t.matrix)).fold(1.0, f64::max);
    residual = residual.max((vsig_dag * &v - &v * c(lsig, 0.0)).norm() / (scale * scale));
    PureFixedPointTest {
        is_fixed: residual < 1e-9,
        lambdas,
        residual,
    }
}

/// A generalised dark space together with its eigenvalue vector.
#[derive(Clone, Debug)]
pub struct GeneralizedDarkSpace {
    pub lambda: Vec<C64>,
    pub space: Subspace,
}

fn eigen_split(op: &CMat, space: &Subspace) -> Vec<(C64, Subspace)> {
    // `space` is invariant under `op`, so the compression is exact.
    let q = space.frame();
    let b = q.adjoint() * op * q;
    let scale = frob(op).max(1.0);
    let mut reps: Vec<C64> = vec![c(0.0, 0.0)];
    let evs = linalg::eigenvalues(&b);
    for ev in evs {
        if !reps.iter().any(|r| (r - ev).norm() < 1e-6 * scale) {
            reps.push(ev);
        }
    }
    let r = b.nrows();
    let mut out = Vec::new();
    for lam in reps {
        let ns = linalg::null_space_abs(&(&b - linalg::identity(r) * lam), 1e-8 * scale);
        if ns.ncols() > 0 {
            out.push((lam, Subspace::from_orthonormal(q * ns)));
        }
    }
    out
}

/// All generalised dark spaces D_Λ with their Λ.
///
/// Every D_Λ lies in an eigenspace of the Hermitian Σ V_k†V_k; inside each
/// eigenspace the terms are split one after another on their maximal
/// invariant subspace, where compressed eigenvectors are exact.
pub fn complete_dark_space(terms: &[LindbladTerm]) -> Result<Vec<GeneralizedDarkSpace>> {
    let dim = check_terms(terms)?;
    let m = sum_vdv(terms);
    let (vals, vecs) = linalg::eigh(&m);
    let scale = vals.iter().map(|v| v.abs()).fold(1.0, f64::max);
    // Group eigenvalues of Σ V†V.
    let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
    for (i, &v) in vals.iter().enumerate() {
        match groups.last_mut() {
            Some((g, idx)) if (v - *g).abs() < 1e-8 * scale => idx.push(i),
            _ => groups.push((v, vec![i])),
        }
    }
    let mut out: Vec<GeneralizedDarkSpace> = Vec::new();
    for (mu, idx) in groups {
        let cols: Vec<CVec> = idx.iter().map(|&i| vecs.column(i).into_owned()).collect();
        let eig = Subspace::from_vectors(dim, &cols);
        if mu.abs() < 1e-8 * scale {
            // λ_Σ = 0 forces every λ_k = 0: this is D₀.
            let d0 = dark_space_zero(terms);
            if d0.dim() > 0 {
                out.push(GeneralizedDarkSpace {
                    lambda: vec![c(0.0, 0.0); terms.len()],
                    space: d0,
                });
            }
            continue;
        }
        let mut partial: Vec<(Vec<C64>, Subspace)> = vec![(Vec::new(), eig)];
        for t in terms {
            let mut next = Vec::new();
            for (lam, s) in partial {
                let inv = maximal_invariant_subspace(std::slice::from_ref(&t.matrix), &s);
                if inv.dim() == 0 {
                    continue;
                }
                for (l, sub) in eigen_split(&t.matrix, &inv) {
                    let mut lv = lam.clone();
                    lv.push(l);
                    next.push((lv, sub));
                }
            }
            partial = next;
        }
        for (lam, _) in partial {
            let lsig: f64 = lam.iter().map(|l| l.norm_sqr()).sum();
            if (lsig - mu).abs() > 1e-7 * scale {
                continue;
            }
            // Re-derive with the exact defining equations.
            let d = dark_space(terms, Some(&lam))?;
            if d.dim() > 0 {
                out.push(GeneralizedDarkSpace { lambda: lam, space: d });
            }
        }
    }
    Ok(out)
}

/// The complete dark space D = ⊕ D_Λ.
pub fn complete_dark_space_sum(terms: &[LindbladTerm]) -> Result<Subspace> {
    let dim = check_terms(terms)?;
    let mut acc = Subspace::zero(dim);
    for g in complete_dark_space(terms)? {
        acc = acc.sum(&g.space);
    }
    Ok(acc)
}

/// Kernel of Γ̂ as Hermitian matrices plus a representative fixed state.
#[derive(Clone, Debug)]
pub struct KernelFixedPoints {
    /// Orthonormal (Hilbert-Schmidt) Hermitian basis of ker Γ̂.
    pub basis: Vec<CMat>,
    pub representative: Option<DensityMatrix>,
}

impl KernelFixedPoints {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Hermitian orthonormal basis of ker Γ̂ (Γ̂ is Hermiticity preserving, so
/// its kernel is spanned by Hermitian matrices).
pub fn kernel_hermitian_basis(gamma: &CMat) -> Vec<CMat> {
    let n = superop::Superoperator::new(gamma.clone(), superop::Convention::Dissipator).hilbert_dim();
    let ns = linalg::null_space(gamma, NULL_TOL);
    let mut span = linalg::RealSpan::new(n, n);
    let h = linalg::c(0.5, 0.0);
    for j in 0..ns.ncols() {
        let x = superop::unvec(&ns.columns(j, 1).into_owned());
        // Null vectors are unit norm, so an absolute floor discards the
        // rounding-level part of a vector that is Hermitian up to a phase.
        span.insert_abs(&((&x + x.adjoint()) * h), 1e-6);
        span.insert_abs(&((&x - x.adjoint()) * c(0.0, 0.5)), 1e-6);
    }
    span.into_elements()
}

/// ker Γ̂ with a representative obtained by propagating 1/N to stationarity
/// (doubling T until |Γ ρ(T)| < 1e-9) and projecting onto the kernel.
pub fn kernel_fixed_points(gamma: &CMat) -> Result<KernelFixedPoints> {
    let basis = kernel_hermitian_basis(gamma);
    if basis.is_empty() {
        return Err(Error::EmptyKernel);
    }
    let n = basis[0].nrows();
    let rho0 = superop::vec(&(linalg::identity(n) / c(n as f64, 0.0)));
    let scale = frob(gamma).max(1e-300);
    let mut prop = linalg::expm(&(gamma * c(-1.0 / scale, 0.0)));
    let mut rho = &prop * &rho0;
    for _ in 0..60 {
        if frob(&(gamma * &rho)) / scale < 1e-9 {
            break;
        }
        prop = &prop * &prop;
        rho = &prop * &rho0;
    }
    let r = superop::unvec(&rho);
    let mut proj = CMat::zeros(n, n);
    for b in &basis {
        proj += b * c(linalg::hs_re(b, &r), 0.0);
    }
    let representative = DensityMatrix::normalized(proj).ok();
    Ok(KernelFixedPoints { basis, representative })
}

/// Γ|_S on operators supported in S, as an r² x r² superoperator in the
/// frame of S.
pub fn reduced_generator(terms: &[LindbladTerm], s: &Subspace) -> Result<CMat> {
    check_terms(terms)?;
    if !terms_leave_invariant(terms, s) {
        return Err(Error::NotInvariant);
    }
    let q = s.frame();
    let perp = s.complement();
    let mut out: Option<CMat> = None;
    for t in terms {
        let a = q.adjoint() * &t.matrix * q;
        let cb = perp.frame().adjoint() * &t.matrix * q;
        let ctc = cb.adjoint() * &cb;
        let g = superop::single_dissipator(&a) + (superop::left(&ctc) + superop::right(&ctc)) * c(0.5, 0.0);
        out = Some(match out {
            None => g,
            Some(acc) => acc + g,
        });
    }
    Ok(out.unwrap())
}

/// Fixed-point check through the support: supp ρ invariant and the
/// compressed state fixed by the reduced generator.
pub fn fixed_via_support(terms: &[LindbladTerm], rho: &DensityMatrix) -> Result<bool> {
    let s = rho.support(1e-10);
    if !invariant_subspace_test(terms, &s) {
        return Ok(false);
    }
    let red = reduced_generator(terms, &s)?;
    let q = s.frame();
    let ra = q.adjoint() * rho.matrix() * q;
    Ok(frob(&(red * superop::vec(&ra))) < 1e-9 * frob(rho.matrix()).max(1.0))
}

/// A fixed state supported inside an invariant subspace S.
pub fn fixed_state_in(terms: &[LindbladTerm], s: &Subspace) -> Option<DensityMatrix> {
    let red = reduced_generator(terms, s).ok()?;
    let q = s.frame();
    let k = kernel_fixed_points(&red).ok()?;
    let ra = k.representative?;
    DensityMatrix::normalized(q * ra.matrix() * q.adjoint()).ok()
}

fn residual_of(terms: &[LindbladTerm], rho: &CMat) -> f64 {
    let scale: f64 = terms.iter().map(|t| frob(&t.matrix).powi(2)).sum::<f64>().max(1e-300);
    frob(&apply_dissipator(terms, rho)) / scale
}

pub fn is_fixed(terms: &[LindbladTerm], rho: &CMat) -> bool {
    residual_of(terms, rho) < 1e-9
}

fn pairwise_commuting(terms: &[LindbladTerm]) -> bool {
    for i in 0..terms.len() {
        for j in (i + 1)..terms.len() {
            let (a, b) = (&terms[i].matrix, &terms[j].matrix);
            if frob(&linalg::commutator(a, b)) > 1e-10 * (frob(a) * frob(b)).max(1.0) {
                return false;
            }
        }
    }
    true
}

/// Certificate names recorded in reports.
pub mod certificate {
    pub const DARK_SPACE: &str = "dark_space";
    pub const NILPOTENT_COMMUTING: &str = "nilpotent_commuting";
    pub const SUM_EIGENVECTOR: &str = "sum_has_no_orthogonal_eigenvector";
    pub const COMBINATION_EIGENVECTOR: &str = "combination_has_no_orthogonal_eigenvector";
    pub const INVARIANT_SEARCH: &str = "maximal_invariant_subspace";
    pub const KERNEL_RANK: &str = "kernel_rank";
}

/// Uniqueness analysis for a state already known to be fixed.
pub fn uniqueness_certificate(terms: &[LindbladTerm], target: &DensityMatrix) -> Result<FixedPointReport> {
    let dim = check_terms(terms)?;
    if target.dim() != dim {
        return Err(Error::Dimension("target and terms differ in size".into()));
    }
    let res = residual_of(terms, target.matrix());
    if res >= 1e-9 {
        return Err(Error::NotFixed(res));
    }
    let n = dim.trailing_zeros() as usize;
    let mut certs = Vec::new();
    let nilpotent = terms.iter().all(|t| t.is_nilpotent(1e-10));
    let d0 = dark_space_zero(terms);
    let psi = target.pure_vector(1e-9);

    // Cheap path for large systems.
    if n > SEARCH_GUARD {
        certs.push(certificate::DARK_SPACE.to_string());
        let mut unique = Uniqueness::Undecided;
        let mut witness_state = None;
        if nilpotent && (terms.len() == 1 || pairwise_commuting(terms)) {
            certs.push(certificate::NILPOTENT_COMMUTING.to_string());
            unique = if d0.dim() == 1 && psi.is_some() {
                Uniqueness::Yes
            } else {
                Uniqueness::No
            };
        }
        if d0.dim() > 1 {
            unique = Uniqueness::No;
            witness_state = other_pure_state(&d0, psi.as_ref());
        }
        return Ok(FixedPointReport {
            dark_space: d0,
            kernel_dim: None,
            unique,
            witness_subspace: None,
            witness_state,
            certificates: certs,
        });
    }

    let spaces = complete_dark_space(terms)?;
    let mut dspace = Subspace::zero(dim);
    for g in &spaces {
        dspace = dspace.sum(&g.space);
    }
    let kernel = if n <= KERNEL_GUARD {
        Some(kernel_hermitian_basis(&superop::dissipator(terms)))
    } else {
        None
    };
    let kernel_dim = kernel.as_ref().map(|k| k.len());
    let mut report = FixedPointReport {
        dark_space: dspace.clone(),
        kernel_dim,
        unique: Uniqueness::Undecided,
        witness_subspace: None,
        witness_state: None,
        certificates: Vec::new(),
    };

    let Some(psi) = psi else {
        // Mixed target: decided by the kernel alone.
        if let Some(k) = &kernel {
            report.certificates.push(certificate::KERNEL_RANK.to_string());
            if k.len() == 1 {
                report.unique = Uniqueness::Yes;
            } else {
                report.unique = Uniqueness::No;
                report.witness_state = kernel_witness(k, target);
            }
        }
        return Ok(report);
    };

    certs.push(certificate::DARK_SPACE.to_string());
    if dspace.dim() > 1 {
        report.unique = Uniqueness::No;
        let others: Vec<&GeneralizedDarkSpace> = spaces.iter().collect();
        report.witness_state = others.iter().find_map(|g| other_pure_state(&g.space, Some(&psi)));
        report.certificates = certs;
        return Ok(report);
    }

    let dperp = dspace.complement();
    let mut decided = false;
    if nilpotent && (terms.len() == 1 || pairwise_commuting(terms)) {
        certs.push(certificate::NILPOTENT_COMMUTING.to_string());
        decided = true;
    }
    if !decided {
        certs.push(certificate::SUM_EIGENVECTOR.to_string());
        if maximal_invariant_subspace(&[sum_v(terms)], &dperp).dim() == 0 {
            decided = true;
        }
    }
    if !decided && terms.len() > 1 {
        certs.push(certificate::COMBINATION_EIGENVECTOR.to_string());
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..4 {
            let mut comb = CMat::zeros(dim, dim);
            for t in terms {
                comb += &t.matrix * c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            }
            if maximal_invariant_subspace(&[comb], &dperp).dim() == 0 {
                decided = true;
                break;
            }
        }
    }
    if decided {
        report.unique = Uniqueness::Yes;
    } else {
        certs.push(certificate::INVARIANT_SEARCH.to_string());
        let inv = maximal_invariant_subspace(&invariance_ops(terms), &dperp);
        if inv.dim() == 0 {
            report.unique = Uniqueness::Yes;
        } else {
            report.unique = Uniqueness::No;
            report.witness_state = fixed_state_in(terms, &inv);
            report.witness_subspace = Some(inv);
        }
    }
    if let Some(k) = &kernel {
        certs.push(certificate::KERNEL_RANK.to_string());
        let kernel_unique = k.len() == 1;
        let claimed = report.unique == Uniqueness::Yes;
        if kernel_unique != claimed {
            // The structural criteria and the kernel disagree; do not guess.
            report.unique = Uniqueness::Undecided;
        }
    }
    report.certificates = certs;
    Ok(report)
}

/// A second fixed state from a multi-dimensional kernel: move from the
/// target along a traceless kernel direction to the boundary of the cone.
fn kernel_witness(kernel: &[CMat], target: &DensityMatrix) -> Option<DensityMatrix> {
    let n = target.dim();
    let id = linalg::identity(n);
    for b in kernel {
        // Remove the trace and the target component.
        let mut x = b - &id * c(b.trace().re / n as f64, 0.0);
        let t = target.matrix();
        let t0 = t - &id * c(1.0 / n as f64, 0.0);
        let t00 = linalg::hs_re(&t0, &t0);
        if t00 > 1e-14 {
            x -= &t0 * c(linalg::hs_re(&t0, &x) / t00, 0.0);
        }
        if frob(&x) < 1e-8 {
            continue;
        }
        // Largest s with ρ + s X ⪰ 0, by bisection.
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        while linalg::min_eigenvalue_hermitian(&(t + &x * c(hi, 0.0))) >= -1e-12 && hi < 1e6 {
            lo = hi;
            hi *= 2.0;
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if linalg::min_eigenvalue_hermitian(&(t + &x * c(mid, 0.0))) >= -1e-12 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if lo > 1e-8 {
            let w = linalg::symmetrize(&(t + &x * c(lo, 0.0)));
            if let Ok(d) = DensityMatrix::normalized(w) {
                return Some(d);
            }
        }
    }
    None
}

fn other_pure_state(space: &Subspace, psi: Option<&CVec>) -> Option<DensityMatrix> {
    let q = space.frame();
    let mut best: Option<CVec> = None;
    for j in 0..q.ncols() {
        let mut v = q.column(j).into_owned();
        if let Some(p) = psi {
            let pn = p / c(p.norm(), 0.0);
            v -= &pn * pn.dotc(&v);
        }
        if v.norm() > best.as_ref().map(|b| b.norm()).unwrap_or(1e-6) {
            best = Some(v);
        }
    }
    best.and_then(|v| DensityMatrix::pure(&v).ok())
}

/// Uniqueness analysis without a target: the fixed set is inspected
/// directly.
pub fn analyze_fixed_points(terms: &[LindbladTerm]) -> Result<FixedPointReport> {
    let dim = check_terms(terms)?;
    let n = dim.trailing_zeros() as usize;
    let d = if n <= SEARCH_GUARD {
        complete_dark_space_sum(terms)?
    } else {
        dark_space_zero(terms)
    };
    let mut certs = vec![certificate::DARK_SPACE.to_string()];
    let mut report = FixedPointReport {
        dark_space: d.clone(),
        kernel_dim: None,
        unique: Uniqueness::Undecided,
        witness_subspace: None,
        witness_state: None,
        certificates: Vec::new(),
    };
    if n <= KERNEL_GUARD {
        let k = kernel_fixed_points(&superop::dissipator(terms))?;
        certs.push(certificate::KERNEL_RANK.to_string());
        report.kernel_dim = Some(k.dim());
        report.unique = if k.dim() == 1 { Uniqueness::Yes } else { Uniqueness::No };
        if let Some(rep) = k.representative.clone() {
            if k.dim() == 1 {
                report.witness_state = None;
            }
            if let Ok(r2) = uniqueness_certificate(terms, &rep) {
                report.witness_subspace = r2.witness_subspace;
                report.witness_state = r2.witness_state;
            }
        }
    } else if n <= SEARCH_GUARD && d.dim() == 1 {
        let psi = d.frame().column(0).into_owned();
        let target = DensityMatrix::pure(&psi)?;
        let r = uniqueness_certificate(terms, &target)?;
        report.unique = r.unique;
        report.witness_subspace = r.witness_subspace;
        report.witness_state = r.witness_state;
        certs.extend(r.certificates);
    } else if d.dim() > 1 {
        report.unique = Uniqueness::No;
        report.witness_state = other_pure_state(&d, None);
    }
    report.certificates = certs;
    Ok(report)
}

/// Case distinction for a single Lindblad term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SingleTermCase {
    /// ψ is the only simultaneous eigenvector of V and V†, ker V ⊆ span ψ.
    OnlyEigenvector,
    /// ker V = span ψ and V, V† share no eigenvector.
    KernelOnly,
    /// Several pure fixed points.
    Multiple,
    /// No pure fixed point.
    NoPure,
}

#[derive(Clone, Debug)]
pub struct SingleTermReport {
    pub case: SingleTermCase,
    pub kernel: Subspace,
    pub common_eigenvectors: Subspace,
    pub psi: Option<CVec>,
    /// For `OnlyEigenvector`: the mixed fixed point (V⊥†V⊥)⁺/tr supported on ψ⊥.
    pub second_fixed_point: Option<DensityMatrix>,
    /// Residual |Γ(ρ)| of the second fixed point.
    pub second_residual: Option<f64>,
    /// For `KernelOnly`: unique iff V has no eigenvector orthogonal to ψ.
    pub unique: Option<bool>,
}

/// Simultaneous eigenvectors of V and V† (null spaces of [V - λ; V† - λ̄]).
pub fn common_eigenvectors(v: &CMat) -> Subspace {
    let n = v.nrows();
    let scale = frob(v).max(1.0);
    let mut reps: Vec<C64> = vec![c(0.0, 0.0)];
    for ev in linalg::eigenvalues(v) {
        if !reps.iter().any(|r| (r - ev).norm() < 1e-6 * scale) {
            reps.push(ev);
        }
    }
    let id = linalg::identity(n);
    let mut acc = Subspace::zero(n);
    for lam in reps {
        let st = linalg::vstack(&[v - &id * lam, v.adjoint() - &id * lam.conj()]);
        let ns = linalg::null_space_abs(&st, 1e-8 * scale);
        if ns.ncols() > 0 {
            acc = acc.sum(&Subspace::from_orthonormal(ns));
        }
    }
    acc
}

pub fn single_term_analysis(v: &CMat) -> SingleTermReport {
    let n = v.nrows();
    let scale = frob(v).max(1.0);
    let kernel = Subspace::from_orthonormal(linalg::null_space_abs(v, NULL_TOL * scale));
    let common = common_eigenvectors(v);
    let mut report = SingleTermReport {
        case: SingleTermCase::NoPure,
        kernel: kernel.clone(),
        common_eigenvectors: common.clone(),
        psi: None,
        second_fixed_point: None,
        second_residual: None,
        unique: None,
    };
    let kernel_in_common = kernel
        .frame()
        .column_iter()
        .all(|col| common.contains(&col.into_owned(), 1e-8));
    if common.dim() == 1 && (kernel.dim() == 0 || (kernel.dim() == 1 && kernel_in_common)) {
        let psi = common.frame().column(0).into_owned();
        report.case = SingleTermCase::OnlyEigenvector;
        let pperp = linalg::identity(n) - &psi * psi.adjoint();
        let vp = &pperp * v * &pperp;
        let m = linalg::pinv(&(vp.adjoint() * &vp), 1e-10);
        let tr = m.trace();
        if tr.norm() > 1e-300 {
            let rho = m / tr;
            let term = LindbladTerm::raw(v.clone());
            report.second_residual = Some(residual_of(std::slice::from_ref(&term), &rho));
            report.second_fixed_point = DensityMatrix::new(linalg::symmetrize(&rho)).ok();
        }
        report.psi = Some(psi);
    } else if kernel.dim() == 1 && common.dim() == 0 {
        let psi = kernel.frame().column(0).into_owned();
        report.case = SingleTermCase::KernelOnly;
        let perp = Subspace::from_vectors(n, std::slice::from_ref(&psi)).complement();
        report.unique = Some(maximal_invariant_subspace(std::slice::from_ref(v), &perp).dim() == 0);
        report.psi = Some(psi);
    } else if kernel.sum(&common).dim() >= 2 {
        report.case = SingleTermCase::Multiple;
    }
    report
}

/// Pauli-string eigenstructure of a single canonical term.
#[derive(Clone, Debug, Serialize)]
pub struct CanonicalEigenstructure {
    /// Strings commuting with both σ_p and σ_q: ker Γ_u.
    pub kernel_unital: Vec<SignedPauliString>,
    /// Strings anticommuting with exactly one of σ_p, σ_q: Γ_u eigenvalue γ/2.
    pub e_minus2: Vec<SignedPauliString>,
    /// Strings anticommuting with both: Γ_u eigenvalue γ.
    pub e_minus4: Vec<SignedPauliString>,
    /// ker Γ_m: strings anticommuting with σ_p or σ_q.
    pub kernel_mixed: Vec<SignedPauliString>,
    /// range Γ_m: σ_m σ_r for r in ker Γ_u (as unsigned strings).
    pub range_mixed: Vec<SignedPauliString>,
}

pub fn canonical_eigenstructure(term: &LindbladTerm) -> Result<CanonicalEigenstructure> {
    let Provenance::Canonical { p, q, m } = &term.provenance else {
        return Err(Error::NotCanonical("term has no canonical provenance".into()));
    };
    let n = p.n();
    let mut s = CanonicalEigenstructure {
        kernel_unital: Vec::new(),
        e_minus2: Vec::new(),
        e_minus4: Vec::new(),
        kernel_mixed: Vec::new(),
        range_mixed: Vec::new(),
    };
    for r in pauli::basis_strings(n) {
        let cp = commutes(p, &r)?;
        let cq = commutes(q, &r)?;
        match (cp, cq) {
            (true, true) => {
                let mr = pauli::string_product(&m.unsigned(), &r)?;
                s.range_mixed.push(SignedPauliString { axes: mr.axes, sign: 1 });
                s.kernel_unital.push(r);
            }
            (false, false) => {
                s.kernel_mixed.push(r.clone());
                s.e_minus4.push(r);
            }
            _ => {
                s.kernel_mixed.push(r.clone());
                s.e_minus2.push(r);
            }
        }
    }
    s.range_mixed.sort();
    Ok(s)
}
