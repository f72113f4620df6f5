// Copyright 2026 Lindkit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra shared by every module.
//!
//! Everything is built on `nalgebra::DMatrix<Complex64>`. Null spaces and
//! ranks go through the SVD; Hermitian spectra through the symmetric
//! eigensolver; general spectra through the complex Schur form.

use nalgebra::{DMatrix, DMatrixView, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> CMat {
    CMat::zeros(r, c)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn dagger(a: &CMat) -> CMat {
    a.adjoint()
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn anticommutator(a: &CMat, b: &CMat) -> CMat {
    a * b + b * a
}

pub fn frob(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Hilbert-Schmidt inner product tr(A†B).
pub fn hs(a: &CMat, b: &CMat) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Real part of the Hilbert-Schmidt product; the inner product of a real span.
pub fn hs_re(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.re * y.re + x.im * y.im).sum()
}

pub fn trace(a: &CMat) -> C64 {
    a.trace()
}

pub fn scale(a: &CMat, s: f64) -> CMat {
    a * c(s, 0.0)
}

pub fn hermitian_defect(a: &CMat) -> f64 {
    frob(&(a - a.adjoint()))
}

pub fn is_hermitian(a: &CMat, rel_tol: f64) -> bool {
    let n = frob(a);
    hermitian_defect(a) <= rel_tol * n.max(1.0)
}

pub fn symmetrize(a: &CMat) -> CMat {
    (a + a.adjoint()) * c(0.5, 0.0)
}

pub fn is_unitary(u: &CMat, tol: f64) -> bool {
    u.is_square() && frob(&(u.adjoint() * u - identity(u.nrows()))) < tol
}

/// Singular values in descending order.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    s
}

/// Numerical rank: singular values above `rel_tol * sigma_max`.
pub fn rank(a: &CMat, rel_tol: f64) -> usize {
    let s = singular_values(a);
    match s.first() {
        None => 0,
        Some(&0.0) => 0,
        Some(&smax) => s.iter().filter(|&&x| x > rel_tol * smax).count(),
    }
}

/// Orthonormal basis (as columns) of the right null space of `a`.
///
/// Singular values below `rel_tol * sigma_max` count as zero. A zero matrix
/// has the whole space as kernel.
pub fn null_space(a: &CMat, rel_tol: f64) -> CMat {
    let n = a.ncols();
    if n == 0 {
        return zeros(0, 0);
    }
    // Pad to square so the SVD returns a full right basis.
    let work = if a.nrows() < n {
        let mut p = zeros(n, n);
        p.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = work.svd(false, true);
    let vt = svd.v_t.expect("requested v_t");
    let s = &svd.singular_values;
    let smax = s.iter().copied().fold(0.0, f64::max);
    let cols: Vec<CVec> = (0..s.len())
        .filter(|&i| smax == 0.0 || s[i] <= rel_tol * smax)
        .map(|i| vt.row(i).adjoint())
        .collect();
    if cols.is_empty() {
        return zeros(n, 0);
    }
    CMat::from_columns(&cols)
}

/// Null space with an absolute singular-value threshold, for matrices whose
/// scale is fixed by construction (so a tiny σ_max is genuinely zero).
pub fn null_space_abs(a: &CMat, abs_tol: f64) -> CMat {
    let n = a.ncols();
    if n == 0 {
        return zeros(0, 0);
    }
    if a.nrows() == 0 {
        return identity(n);
    }
    let work = if a.nrows() < n {
        let mut p = zeros(n, n);
        p.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = work.svd(false, true);
    let vt = svd.v_t.expect("requested v_t");
    let s = &svd.singular_values;
    let cols: Vec<CVec> = (0..s.len())
        .filter(|&i| s[i] <= abs_tol)
        .map(|i| vt.row(i).adjoint())
        .collect();
    if cols.is_empty() {
        return zeros(n, 0);
    }
    CMat::from_columns(&cols)
}

/// Orthonormal basis of the column span of `a`.
pub fn column_span(a: &CMat, rel_tol: f64) -> CMat {
    if a.ncols() == 0 {
        return zeros(a.nrows(), 0);
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("requested u");
    let s = &svd.singular_values;
    let smax = s.iter().copied().fold(0.0, f64::max);
    let cols: Vec<CVec> = (0..s.len())
        .filter(|&i| smax > 0.0 && s[i] > rel_tol * smax)
        .map(|i| u.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        return zeros(a.nrows(), 0);
    }
    CMat::from_columns(&cols)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eigh(a: &CMat) -> (Vec<f64>, CMat) {
    let h = symmetrize(a);
    let eig = h.symmetric_eigen();
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let cols: Vec<CVec> = idx.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect();
    let vecs = if cols.is_empty() {
        zeros(a.nrows(), 0)
    } else {
        CMat::from_columns(&cols)
    };
    (vals, vecs)
}

pub fn min_eigenvalue_hermitian(a: &CMat) -> f64 {
    eigh(a).0.first().copied().unwrap_or(0.0)
}

/// Eigenvalues of a general complex matrix from its Schur form.
pub fn eigenvalues(a: &CMat) -> Vec<C64> {
    let n = a.nrows();
    if n == 0 {
        return Vec::new();
    }
    let schur = a.clone().schur();
    let (_, t) = schur.unpack();
    (0..n).map(|i| t[(i, i)]).collect()
}

/// Distinct eigenvalues, clustered within `tol`, each with its eigenspace
/// (orthonormal columns of ker(A - lambda)).
pub fn eigenspaces(a: &CMat, tol: f64) -> Vec<(C64, CMat)> {
    let mut reps: Vec<C64> = Vec::new();
    for ev in eigenvalues(a) {
        if !reps.iter().any(|r| (r - ev).norm() < tol) {
            reps.push(ev);
        }
    }
    let n = a.nrows();
    let mut out = Vec::new();
    for lam in reps {
        let shifted = a - identity(n) * lam;
        // Clustered eigenvalues are only accurate to about sqrt(eps), so the
        // kernel threshold is looser than the general one.
        let ns = null_space(&shifted, 1e-7);
        if ns.ncols() > 0 {
            out.push((lam, ns));
        }
    }
    out
}

/// Principal square root of a positive semidefinite Hermitian matrix.
pub fn psd_sqrt(a: &CMat) -> CMat {
    let (vals, vecs) = eigh(a);
    let d = CMat::from_diagonal(&CVec::from_iterator(
        vals.len(),
        vals.iter().map(|&v| c(v.max(0.0).sqrt(), 0.0)),
    ));
    &vecs * d * vecs.adjoint()
}

/// Moore-Penrose pseudo-inverse.
pub fn pinv(a: &CMat, rel_tol: f64) -> CMat {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let eps = rel_tol * smax;
    svd.pseudo_inverse(eps.max(f64::MIN_POSITIVE))
        .expect("svd computed with u and v")
}

/// Orthogonal projector onto the span of the columns of an orthonormal frame.
pub fn projector(frame: &CMat) -> CMat {
    frame * frame.adjoint()
}

/// Stack matrices vertically, all with equal column count.
pub fn vstack(blocks: &[CMat]) -> CMat {
    let cols = blocks.first().map(|b| b.ncols()).unwrap_or(0);
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = zeros(rows, cols);
    let mut r = 0;
    for b in blocks {
        out.view_mut((r, 0), (b.nrows(), cols)).copy_from(b);
        r += b.nrows();
    }
    out
}

/// Stack matrices horizontally, all with equal row count.
pub fn hstack(blocks: &[CMat]) -> CMat {
    let rows = blocks.first().map(|b| b.nrows()).unwrap_or(0);
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = zeros(rows, cols);
    let mut k = 0;
    for b in blocks {
        out.view_mut((0, k), (rows, b.ncols())).copy_from(b);
        k += b.ncols();
    }
    out
}

/// Orthonormal basis of a real-linear span of complex matrices.
///
/// The inner product is Re tr(A†B), so `i A` and `A` are independent. This is
/// the workhorse for Lie closures and wedge spans. Elements are kept both as
/// matrices and as flattened real vectors (re, im interleaved, column-major)
/// so that projections are two matrix-vector products; insertion runs
/// classical Gram-Schmidt twice.
#[derive(Clone, Debug)]
pub struct RealSpan {
    rows: usize,
    cols: usize,
    flat: Vec<f64>,
    basis: Vec<CMat>,
}

fn flatten(m: &CMat) -> DVector<f64> {
    let mut v = DVector::zeros(2 * m.len());
    for (k, z) in m.iter().enumerate() {
        v[2 * k] = z.re;
        v[2 * k + 1] = z.im;
    }
    v
}

fn unflatten(v: &DVector<f64>, rows: usize, cols: usize) -> CMat {
    CMat::from_iterator(rows, cols, (0..rows * cols).map(|k| c(v[2 * k], v[2 * k + 1])))
}

impl RealSpan {
    pub fn new(rows: usize, cols: usize) -> Self {
        RealSpan {
            rows,
            cols,
            flat: Vec::new(),
            basis: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn elements(&self) -> &[CMat] {
        &self.basis
    }

    pub fn into_elements(self) -> Vec<CMat> {
        self.basis
    }

    fn flat_residual(&self, m: &CMat) -> DVector<f64> {
        let mut r = flatten(m);
        let k = self.dim();
        if k == 0 {
            return r;
        }
        let b = DMatrixView::from_slice(&self.flat, r.len(), k);
        for _ in 0..2 {
            let coef = b.tr_mul(&r);
            r.gemv(-1.0, &b, &coef, 1.0);
        }
        r
    }

    /// Component of `m` orthogonal to the span.
    pub fn residual(&self, m: &CMat) -> CMat {
        unflatten(&self.flat_residual(m), self.rows, self.cols)
    }

    /// Orthogonal projection of `m` onto the span.
    pub fn project(&self, m: &CMat) -> CMat {
        m - self.residual(m)
    }

    /// Real coordinates of `m` in the orthonormal basis.
    pub fn coordinates(&self, m: &CMat) -> Vec<f64> {
        self.basis.iter().map(|b| hs_re(b, m)).collect()
    }

    /// Distance of `m` from the span relative to its own size.
    pub fn relative_distance(&self, m: &CMat) -> f64 {
        let n = frob(m);
        if n == 0.0 {
            return 0.0;
        }
        self.flat_residual(m).norm() / n
    }

    /// Insert `m` if its residual exceeds `tol` (absolute, in Frobenius norm).
    /// Returns the normalised new element when the span grew.
    pub fn insert_abs(&mut self, m: &CMat, tol: f64) -> Option<CMat> {
        debug_assert_eq!(m.shape(), (self.rows, self.cols));
        let r = self.flat_residual(m);
        let nr = r.norm();
        if nr > tol {
            let e = r / nr;
            self.flat.extend(e.iter());
            let mat = unflatten(&e, self.rows, self.cols);
            self.basis.push(mat.clone());
            Some(mat)
        } else {
            None
        }
    }

    /// Insert `m` if its residual exceeds `rel_tol * |m|`.
    pub fn insert_rel(&mut self, m: &CMat, rel_tol: f64) -> Option<CMat> {
        let n = frob(m);
        if n == 0.0 {
            return None;
        }
        self.insert_abs(m, rel_tol * n)
    }
}

/// Matrix exponential by scaling and squaring with Padé order selected from
/// the 1-norm (Higham 2005).
pub fn expm(a: &CMat) -> CMat {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    if n == 0 {
        return zeros(0, 0);
    }
    if n == 1 {
        return CMat::from_element(1, 1, a[(0, 0)].exp());
    }
    let norm = one_norm(a);
    const THETA: [(usize, f64); 4] = [
        (3, 1.495585217958292e-2),
        (5, 2.539_398_330_063_23e-1),
        (7, 9.504178996162932e-1),
        (9, 2.097847961257068e0),
    ];
    for &(m, theta) in THETA.iter() {
        if norm <= theta {
            return pade_low(a, m);
        }
    }
    let theta13 = 5.371920351148152;
    let s = if norm > theta13 {
        (norm / theta13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = a * c(2f64.powi(-s), 0.0);
    let mut r = pade13(&scaled);
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

fn one_norm(a: &CMat) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn pade_coefficients(m: usize) -> &'static [f64] {
    match m {
        3 => &[120.0, 60.0, 12.0, 1.0],
        5 => &[30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0],
        7 => &[17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0],
        9 => &[
            17643225600.0,
            8821612800.0,
            2075673600.0,
            302702400.0,
            30270240.0,
            2162160.0,
            110880.0,
            3960.0,
            90.0,
            1.0,
        ],
        13 => &[
            64764752532480000.0,
            32382376266240000.0,
            7771770303897600.0,
            1187353796428800.0,
            129060195264000.0,
            10559470521600.0,
            670442572800.0,
            33522128640.0,
            1323241920.0,
            40840800.0,
            960960.0,
            16380.0,
            182.0,
            1.0,
        ],
        _ => unreachable!("unsupported Pade order"),
    }
}

fn pade_low(a: &CMat, m: usize) -> CMat {
    let b = pade_coefficients(m);
    let n = a.nrows();
    let id = identity(n);
    let a2 = a * a;
    let mut u_even = id.clone() * c(b[1], 0.0);
    let mut v = id.clone() * c(b[0], 0.0);
    let mut p = id;
    for k in 1..=m / 2 {
        p = &p * &a2;
        u_even += &p * c(b[2 * k + 1], 0.0);
        v += &p * c(b[2 * k], 0.0);
    }
    let u = a * u_even;
    solve_pade(&u, &v)
}

fn pade13(a: &CMat) -> CMat {
    let b = pade_coefficients(13);
    let n = a.nrows();
    let id = identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let s = |x: f64| c(x, 0.0);
    let inner_u = &a6 * s(b[13]) + &a4 * s(b[11]) + &a2 * s(b[9]);
    let u = a * (&a6 * inner_u + &a6 * s(b[7]) + &a4 * s(b[5]) + &a2 * s(b[3]) + &id * s(b[1]));
    let inner_v = &a6 * s(b[12]) + &a4 * s(b[10]) + &a2 * s(b[8]);
    let v = &a6 * inner_v + &a6 * s(b[6]) + &a4 * s(b[4]) + &a2 * s(b[2]) + &id * s(b[0]);
    solve_pade(&u, &v)
}

fn solve_pade(u: &CMat, v: &CMat) -> CMat {
    let p = v + u;
    let q = v - u;
    q.lu().solve(&p).expect("Pade denominator is singular")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli_x() -> CMat {
        CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
    }

    #[test]
    fn expm_of_rotation_generator() {
        let t = 0.7;
        let a = pauli_x() * c(0.0, -t);
        let e = expm(&a);
        let expect = identity(2) * c(t.cos(), 0.0) - pauli_x() * c(0.0, t.sin());
        assert!(frob(&(e - expect)) < 1e-14);
    }

    #[test]
    fn expm_large_norm_scales() {
        // diag(-40, 3) stresses the squaring phase.
        let a = CMat::from_diagonal(&CVec::from_vec(vec![c(-40.0, 0.0), c(3.0, 0.0)]));
        let e = expm(&a);
        assert!((e[(0, 0)].re - (-40f64).exp()).abs() < 1e-25);
        assert!((e[(1, 1)].re - 3f64.exp()).abs() / 3f64.exp() < 1e-13);
    }

    #[test]
    fn expm_nilpotent_is_finite_series() {
        let mut a = zeros(3, 3);
        a[(0, 1)] = c(2.0, 0.0);
        a[(1, 2)] = c(3.0, 0.0);
        let e = expm(&a);
        // I + A + A^2/2, A^2 has a single entry 6 at (0,2).
        assert!((e[(0, 2)].re - 3.0).abs() < 1e-13);
        assert!((e[(0, 1)].re - 2.0).abs() < 1e-13);
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let a = CMat::from_row_slice(1, 3, &[ONE, ONE, ZERO]);
        let ns = null_space(&a, 1e-12);
        assert_eq!(ns.ncols(), 2);
        assert!(frob(&(&a * &ns)) < 1e-12);
    }

    #[test]
    fn real_span_distinguishes_i() {
        let mut s = RealSpan::new(2, 2);
        assert!(s.insert_rel(&pauli_x(), 1e-10).is_some());
        assert!(s.insert_rel(&(pauli_x() * I), 1e-10).is_some());
        assert!(s.insert_rel(&(pauli_x() * c(2.0, -3.0)), 1e-10).is_none());
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn eigenspaces_of_defective_matrix() {
        let mut a = zeros(2, 2);
        a[(0, 1)] = ONE;
        let es = eigenspaces(&a, 1e-6);
        assert_eq!(es.len(), 1);
        assert_eq!(es[0].1.ncols(), 1);
    }
}
