// Copyright 2026 Lindkit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Engineering Lindblad terms with a prescribed unique fixed point.
//!
//! Pure targets go through the centraliser of |ψ⟩⟨ψ|: bare Pauli strings
//! that stabilise ψ give canonical terms (√γ/2)σ_p(1 - σ_m), other
//! centraliser elements give shifted terms √γ σ_p(|λ| ± i s). Diagonal mixed
//! targets are built from X-group elements acting on computational basis
//! states, and general mixed targets by conjugating a diagonal solution.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixed_points::{
    analyze_fixed_points, dark_space_zero, uniqueness_certificate, DensityMatrix, FixedPointReport, Uniqueness,
};
use crate::linalg::{self, c, frob, CMat, CVec, C64, I};
use crate::pauli::{self, anticommutes, string_product, PauliAxis, SignedPauliString, XGroupElement};
use crate::superop::{LindbladTerm, Provenance};

/// Tolerance for eigenvector and commutation checks on targets.
const STATE_TOL: f64 = 1e-9;

/// Number of p-choice combinations tried in lexicographic order before
/// switching to seeded random draws.
pub const LEX_CANDIDATES: usize = 64;

/// Certificate name for the jump-graph argument on basis-state jumps.
pub const JUMP_GRAPH: &str = "jump_graph";

#[derive(Clone, Debug)]
pub enum TargetSpec {
    Pure(CVec),
    DiagonalMixed(Vec<f64>),
    GeneralMixed(DensityMatrix),
}

impl TargetSpec {
    pub fn dim(&self) -> usize {
        match self {
            TargetSpec::Pure(v) => v.len(),
            TargetSpec::DiagonalMixed(l) => l.len(),
            TargetSpec::GeneralMixed(r) => r.dim(),
        }
    }

    pub fn qubits(&self) -> Result<usize> {
        qubits_of(self.dim())
    }

    pub fn density(&self) -> Result<DensityMatrix> {
        match self {
            TargetSpec::Pure(v) => DensityMatrix::pure(v),
            TargetSpec::DiagonalMixed(l) => {
                let d = nalgebra::DVector::from_iterator(l.len(), l.iter().map(|&x| c(x, 0.0)));
                DensityMatrix::new(CMat::from_diagonal(&d))
            }
            TargetSpec::GeneralMixed(r) => Ok(r.clone()),
        }
    }
}

fn qubits_of(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::Dimension(format!("{dim} is not a qubit dimension")));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Real basis of the centraliser s_ρ ⊂ su(2^n), in Pauli coordinates.
#[derive(Clone, Debug)]
pub struct CentraliserBasis {
    pub n: usize,
    /// Traceless basis strings, in basis order.
    pub strings: Vec<SignedPauliString>,
    /// Orthonormal real coefficient vectors; element k is i Σ_j c_kj σ_j.
    pub coefficients: Vec<Vec<f64>>,
}

impl CentraliserBasis {
    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn element(&self, k: usize) -> CMat {
        let dim = 1usize << self.n;
        let mut m = CMat::zeros(dim, dim);
        for (s, &x) in self.strings.iter().zip(&self.coefficients[k]) {
            if x.abs() > 1e-14 {
                m += pauli::dense_matrix(s).expect("small n") * c(0.0, x);
            }
        }
        m
    }

    pub fn elements(&self) -> Vec<CMat> {
        (0..self.dim()).map(|k| self.element(k)).collect()
    }

    /// Membership of a skew-Hermitian matrix, by projection onto the span.
    pub fn contains(&self, s: &CMat, tol: f64) -> bool {
        let dim = 1usize << self.n;
        let a: Vec<f64> = self
            .strings
            .iter()
            .map(|p| {
                let sp = pauli::dense_matrix(p).expect("small n");
                ((&sp * s).trace() / c(0.0, dim as f64)).re
            })
            .collect();
        let norm2: f64 = a.iter().map(|x| x * x).sum();
        let mut proj2 = 0.0;
        for v in &self.coefficients {
            let d: f64 = v.iter().zip(&a).map(|(x, y)| x * y).sum();
            proj2 += d * d;
        }
        (norm2 - proj2).max(0.0).sqrt() <= tol * norm2.sqrt().max(1.0)
    }
}

/// A bare stabilising string: σ_m ψ = eigensign · ψ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianElement {
    pub m: SignedPauliString,
    pub eigensign: i8,
}

impl AbelianElement {
    /// The signed string whose +1 eigenspace contains ψ.
    pub fn direction(&self) -> SignedPauliString {
        if self.eigensign < 0 {
            self.m.negated()
        } else {
            self.m.clone()
        }
    }
}

/// Why a term is in a solution set.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TermOrigin {
    /// Canonical term for the signed direction m.
    Direction {
        m: SignedPauliString,
        p: SignedPauliString,
    },
    /// Shifted centraliser term with eigenvalue λ = i·mu.
    Centraliser {
        mu: f64,
        p: SignedPauliString,
    },
    /// Difference of two (1 - σ_z)-products acting on the listed sites.
    Difference {
        first: Vec<usize>,
        second: Vec<usize>,
    },
    /// √γ G P with G an X-group element.
    GroupElement {
        mask: usize,
        support: Vec<usize>,
        gamma: f64,
    },
    Stabilizer {
        stabilizer: SignedPauliString,
        p: SignedPauliString,
    },
    Conjugated {
        of: Box<TermOrigin>,
    },
    Explicit {
        label: String,
    },
}

#[derive(Clone, Debug)]
pub struct SolutionSet {
    pub terms: Vec<LindbladTerm>,
    pub rationale: Vec<TermOrigin>,
    /// None for subspace targets (stabilizer codes).
    pub target: Option<DensityMatrix>,
    pub certificate: FixedPointReport,
}

impl SolutionSet {
    pub fn is_unique(&self) -> bool {
        self.certificate.unique == Uniqueness::Yes
    }
}

fn basis_expectations(rho: &CMat, n: usize) -> Vec<C64> {
    pauli::basis_strings(n)
        .iter()
        .map(|p| (pauli::dense_matrix(p).expect("small n") * rho).trace())
        .collect()
}

/// Algorithm-2 centraliser: kernel of M_ij = tr([ρ,σ_i]σ_j) over the
/// traceless basis.
pub fn centraliser(rho: &DensityMatrix) -> Result<CentraliserBasis> {
    let n = qubits_of(rho.dim())?;
    if n > 5 {
        return Err(Error::SizeGuard(format!("centraliser for n = {n}")));
    }
    let strings = pauli::traceless_strings(n);
    let e = basis_expectations(rho.matrix(), n);
    let k = strings.len();
    // tr([ρ,σ_i]σ_j) = tr(ρ[σ_i,σ_j]); nonzero only for anticommuting pairs,
    // where it is 2 i^phase e_m, a purely imaginary number.
    let mut a = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            if !anticommutes(&strings[i], &strings[j])? {
                continue;
            }
            let prod = string_product(&strings[i], &strings[j])?;
            let idx = SignedPauliString {
                axes: prod.axes,
                sign: 1,
            }
            .basis_index();
            let phase = match prod.phase {
                0 => c(1.0, 0.0),
                1 => I,
                2 => c(-1.0, 0.0),
                _ => -I,
            };
            a[(i, j)] = (phase * e[idx] * c(2.0, 0.0)).im;
        }
    }
    let svd = a.clone().svd(false, true);
    let vt = svd.v_t.expect("requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let mut coefficients = Vec::new();
    for (r, &s) in svd.singular_values.iter().enumerate() {
        if s <= 1e-9 * smax.max(1.0) {
            coefficients.push(vt.row(r).iter().cloned().collect::<Vec<f64>>());
        }
    }
    Ok(CentraliserBasis {
        n,
        strings,
        coefficients,
    })
}

fn normalized(psi: &CVec) -> Result<CVec> {
    let nrm = psi.norm();
    if nrm.is_nan() || nrm <= 1e-12 {
        return Err(Error::InvalidState("zero vector".into()));
    }
    if (nrm - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidState(format!("target has norm {nrm}")));
    }
    Ok(psi / c(nrm, 0.0))
}

/// All bare strings with σ_m ψ = ±ψ, in basis order.
pub fn stabilising_strings(psi: &CVec) -> Result<Vec<AbelianElement>> {
    let n = qubits_of(psi.len())?;
    let psi = normalized(psi)?;
    let mut out = Vec::new();
    for m in pauli::traceless_strings(n) {
        let v = pauli::dense_matrix(&m)? * &psi;
        let ov = psi.dotc(&v);
        if (ov.re.abs() - 1.0).abs() < STATE_TOL && (&v - &psi * ov).norm() < STATE_TOL {
            out.push(AbelianElement {
                m,
                eigensign: if ov.re > 0.0 { 1 } else { -1 },
            });
        }
    }
    Ok(out)
}

fn pairwise_commuting_greedy(elems: Vec<AbelianElement>, cap: usize) -> Result<Vec<AbelianElement>> {
    let mut chosen: Vec<AbelianElement> = Vec::new();
    for e in elems {
        if chosen.len() >= cap {
            break;
        }
        let mut ok = true;
        for x in &chosen {
            if anticommutes(&x.m, &e.m)? {
                ok = false;
                break;
            }
        }
        if ok {
            chosen.push(e);
        }
    }
    Ok(chosen)
}

/// Greedy commuting set of bare centraliser elements iσ_m with σ_mψ = ±ψ,
/// at most 2^n - 1 of them.
pub fn abelian_subalgebra(cent: &CentraliserBasis, psi: &CVec) -> Result<Vec<AbelianElement>> {
    let n = qubits_of(psi.len())?;
    if cent.n != n {
        return Err(Error::LengthMismatch(cent.n, n));
    }
    let mut bare = Vec::new();
    for e in stabilising_strings(psi)? {
        let s = pauli::dense_matrix(&e.m)? * I;
        if cent.contains(&s, 1e-8) {
            bare.push(e);
        }
    }
    let chosen = pairwise_commuting_greedy(bare, (1usize << n) - 1)?;
    if chosen.len() < n {
        return Err(Error::Construction(format!(
            "only {} bare commuting elements, need {n}",
            chosen.len()
        )));
    }
    Ok(chosen)
}

/// Picks elements that shrink the joint eigenspace, stopping at dimension 1.
fn independent_elements(elems: &[AbelianElement], dim: usize) -> Result<(Vec<AbelianElement>, usize)> {
    let mut frame = linalg::identity(dim);
    let mut out = Vec::new();
    for e in elems {
        if frame.ncols() <= 1 {
            break;
        }
        let s = pauli::dense_matrix(&e.m)?;
        let r = frame.adjoint() * s * &frame - linalg::identity(frame.ncols()) * c(e.eigensign as f64, 0.0);
        let k = linalg::null_space_abs(&r, 1e-9);
        if k.ncols() < frame.ncols() {
            frame = &frame * k;
            out.push(e.clone());
        }
    }
    Ok((out, frame.ncols()))
}

/// Canonical term (√γ/2)σ_p(1 - σ_m) for the signed direction m; the
/// kernel contains the +1 eigenspace of σ_m. Any p anticommuting with m is
/// accepted; q comes out signed when p is not a star preimage of m.
pub fn canonical_term(m: &SignedPauliString, p: &SignedPauliString, gamma: f64) -> Result<LindbladTerm> {
    if m.is_identity() {
        return Err(Error::IdentityString);
    }
    if !anticommutes(p, m)? {
        return Err(Error::Commuting);
    }
    let p = p.unsigned();
    let q0 = SignedPauliString {
        axes: string_product(&p, &m.unsigned())?.axes,
        sign: 1,
    };
    let q = if pauli::star_product(&p, &q0)? == *m {
        q0
    } else {
        q0.negated()
    };
    let v = (pauli::dense_matrix(&p)? + pauli::dense_matrix(&q)? * I) * c(gamma.sqrt() / 2.0, 0.0);
    Ok(LindbladTerm {
        matrix: v,
        rate: gamma,
        provenance: Provenance::Canonical { p, q, m: m.clone() },
    })
}

/// Same as [`canonical_term`] with the direction given as unsigned m plus
/// the eigen-sign of the target.
pub fn canonical_term_for(
    m: &SignedPauliString,
    eigensign: i8,
    p: &SignedPauliString,
    gamma: f64,
) -> Result<LindbladTerm> {
    let dir = if eigensign < 0 {
        m.unsigned().negated()
    } else {
        m.unsigned()
    };
    canonical_term(&dir, p, gamma)
}

/// Shifted centraliser term with a given eigenvalue λ = iμ of s on the
/// target: V = √γ σ_p(|λ|1 + i s) for μ ≥ 0 and √γ σ_p(|λ|1 - i s) for μ < 0.
pub fn shifted_term_with_eigenvalue(s: &CMat, lambda: C64, p: &SignedPauliString, gamma: f64) -> Result<LindbladTerm> {
    let dim = s.nrows();
    if dim != 1usize << p.n() {
        return Err(Error::Dimension("centraliser element and p differ in size".into()));
    }
    // Skew-Hermitian up to a trace.
    if frob(&(s + s.adjoint())) > 1e-9 * frob(s).max(1.0) {
        return Err(Error::Invalid("centraliser element is not skew-Hermitian".into()));
    }
    let sp = pauli::dense_matrix(&p.unsigned())?;
    if frob(&linalg::commutator(&sp, s)) < 1e-10 * frob(s).max(1.0) {
        return Err(Error::Commuting);
    }
    if (&sp * s).trace().norm() > 1e-9 * frob(s).max(1.0) {
        return Err(Error::Invalid("tr(σ_p s) ≠ 0".into()));
    }
    let mu = lambda.im;
    let sign = if mu >= 0.0 { 1.0 } else { -1.0 };
    let shifted = linalg::identity(dim) * c(lambda.norm(), 0.0) + s * (I * c(sign, 0.0));
    Ok(LindbladTerm::raw(&sp * shifted * c(gamma.sqrt(), 0.0)).with_rate(gamma))
}

/// Shifted centraliser term for a target vector ψ; λ = ⟨ψ|s|ψ⟩.
pub fn shifted_centraliser_term(s: &CMat, psi: &CVec, p: &SignedPauliString, gamma: f64) -> Result<LindbladTerm> {
    let psi = normalized(psi)?;
    let lambda = psi.dotc(&(s * &psi));
    if (s * &psi - &psi * lambda).norm() > 1e-8 * frob(s).max(1.0) {
        return Err(Error::Invalid("target is not an eigenvector of s".into()));
    }
    shifted_term_with_eigenvalue(s, lambda, p, gamma)
}

trait WithRate {
    fn with_rate(self, gamma: f64) -> Self;
}

impl WithRate for LindbladTerm {
    fn with_rate(mut self, gamma: f64) -> Self {
        self.rate = gamma;
        self
    }
}

/// Options for [`engineer_pure`].
#[derive(Clone, Debug)]
pub struct PureOptions {
    pub gamma: f64,
    /// Total number of certificate evaluations allowed.
    pub max_attempts: usize,
    pub seed: u64,
}

impl Default for PureOptions {
    fn default() -> Self {
        PureOptions {
            gamma: 1.0,
            max_attempts: 512,
            seed: 0x5eed,
        }
    }
}

/// Product over `sites` of (1 - σ_z), times σ_x on every other site.
fn excitation_selector(n: usize, sites: &[usize]) -> CMat {
    let one_minus_z = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]);
    let x = pauli::sigma("x");
    let mut m = CMat::identity(1, 1);
    for k in 0..n {
        let f = if sites.contains(&k) { &one_minus_z } else { &x };
        m = linalg::kron(&m, f);
    }
    m
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Difference terms ∏_S σ⁺ - ∏_T σ⁺ from centraliser elements
/// -(i/2^k)(E_S - E_T) that annihilate ψ, consecutive pairs first.
fn difference_candidates(psi: &CVec, n: usize) -> Vec<(CMat, Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    let xs = SignedPauliString {
        axes: vec![PauliAxis::X; n],
        sign: 1,
    };
    let sx = pauli::dense_matrix(&xs).expect("small n");
    for k in 1..n {
        let subs = subsets(n, k);
        let mut pairs = Vec::new();
        for a in 0..subs.len().saturating_sub(1) {
            pairs.push((a, a + 1));
        }
        for a in 0..subs.len() {
            for b in (a + 2)..subs.len() {
                pairs.push((a, b));
            }
        }
        for (a, b) in pairs {
            let d = excitation_selector(n, &subs[a]) - excitation_selector(n, &subs[b]);
            if (&d * psi).norm() > STATE_TOL {
                continue;
            }
            // V = σ_{x..x} (i s_c) with s_c = -(i/2^k) d.
            let v = &sx * &d * c(1.0 / (1u64 << k) as f64, 0.0);
            out.push((v, subs[a].clone(), subs[b].clone()));
        }
    }
    out
}

/// Enumerates p-choice combinations for the fixed directions; lexicographic
/// first, then seeded random draws.
fn p_combinations(lists: &[Vec<SignedPauliString>], budget: usize, seed: u64) -> Vec<Vec<usize>> {
    let total: f64 = lists.iter().map(|l| l.len() as f64).product();
    let mut out = Vec::new();
    let lex = (LEX_CANDIDATES as f64).min(total) as usize;
    for mut idx in 0..lex.min(budget) {
        let mut combo = vec![0; lists.len()];
        for k in (0..lists.len()).rev() {
            combo[k] = idx % lists[k].len();
            idx /= lists[k].len();
        }
        out.push(combo);
    }
    if total > lex as f64 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        while out.len() < budget {
            out.push(lists.iter().map(|l| rng.random_range(0..l.len())).collect());
        }
    }
    out
}

fn first_unique(
    combos: &[Vec<usize>],
    build: impl Fn(&[usize]) -> Result<(Vec<LindbladTerm>, Vec<TermOrigin>)> + Sync,
    target: &DensityMatrix,
) -> Result<Option<SolutionSet>> {
    let batch = rayon::current_num_threads().max(1);
    for chunk in combos.chunks(batch) {
        let results: Vec<Result<Option<SolutionSet>>> = chunk
            .par_iter()
            .map(|combo| {
                let (terms, rationale) = build(combo)?;
                let cert = uniqueness_certificate(&terms, target)?;
                Ok((cert.unique == Uniqueness::Yes).then(|| SolutionSet {
                    terms,
                    rationale,
                    target: Some(target.clone()),
                    certificate: cert,
                }))
            })
            .collect();
        for r in results {
            if let Some(s) = r? {
                return Ok(Some(s));
            }
        }
    }
    Ok(None)
}

/// Lexicographic list of p's forming star preimages of the signed m.
fn preimage_ps(m: &SignedPauliString) -> Result<Vec<SignedPauliString>> {
    Ok(pauli::star_preimages(m)?.into_iter().map(|(p, _)| p).collect())
}

/// Pure-state engineering.
///
/// Abelian path: n independent bare stabilising strings give n canonical
/// terms; their p-choices are searched until the certificate says unique.
/// Centraliser path: the bare terms are completed by difference terms and
/// then by shifted terms from a generic centraliser basis until the dark
/// space is span{ψ}, after which the bare p-choices are searched.
pub fn engineer_pure(psi: &CVec, opts: &PureOptions) -> Result<SolutionSet> {
    let n = qubits_of(psi.len())?;
    let psi = normalized(psi)?;
    let dim = psi.len();
    let target = DensityMatrix::pure(&psi)?;
    let stab = pairwise_commuting_greedy(stabilising_strings(&psi)?, dim - 1)?;
    let (chosen, joint) = independent_elements(&stab, dim)?;
    let dirs: Vec<SignedPauliString> = chosen.iter().map(|e| e.direction()).collect();
    let lists: Vec<Vec<SignedPauliString>> = dirs.iter().map(preimage_ps).collect::<Result<_>>()?;

    let mut extra: Vec<LindbladTerm> = Vec::new();
    let mut extra_why: Vec<TermOrigin> = Vec::new();
    if joint > 1 {
        let base: Vec<LindbladTerm> = dirs
            .iter()
            .zip(&lists)
            .map(|(m, l)| canonical_term(m, &l[0], opts.gamma))
            .collect::<Result<_>>()?;
        let mut d0 = if base.is_empty() {
            dim
        } else {
            dark_space_zero(&base).dim()
        };
        let mut current = base.clone();
        for (v, s, t) in difference_candidates(&psi, n) {
            if d0 <= 1 {
                break;
            }
            let term = LindbladTerm::raw(v * c(opts.gamma.sqrt(), 0.0)).with_rate(opts.gamma);
            current.push(term.clone());
            let nd = dark_space_zero(&current).dim();
            if nd < d0 {
                d0 = nd;
                extra.push(term);
                extra_why.push(TermOrigin::Difference { first: s, second: t });
            } else {
                current.pop();
            }
        }
        if d0 > 1 {
            let cent = centraliser(&target)?;
            let strings = pauli::traceless_strings(n);
            'outer: for s in cent.elements() {
                for p in &strings {
                    let Ok(term) = shifted_centraliser_term(&s, &psi, p, opts.gamma) else {
                        continue;
                    };
                    current.push(term.clone());
                    let nd = dark_space_zero(&current).dim();
                    if nd < d0 {
                        d0 = nd;
                        let mu = psi.dotc(&(&s * &psi)).im;
                        extra.push(term);
                        extra_why.push(TermOrigin::Centraliser { mu, p: p.clone() });
                        if d0 <= 1 {
                            break 'outer;
                        }
                        continue 'outer;
                    }
                    current.pop();
                }
            }
        }
        if d0 > 1 {
            return Err(Error::Construction(format!(
                "dark space stays {d0}-dimensional after all centraliser candidates"
            )));
        }
    }

    search_p_choices(&dirs, &lists, &extra, &extra_why, &target, opts, false)
}

/// Searches p-choices for canonical terms along `dirs` (lexicographic in
/// `lists`, then seeded random), appending the fixed `extra` terms, until
/// the certificate for `target` says unique.
fn search_p_choices(
    dirs: &[SignedPauliString],
    lists: &[Vec<SignedPauliString>],
    extra: &[LindbladTerm],
    extra_why: &[TermOrigin],
    target: &DensityMatrix,
    opts: &PureOptions,
    stabilizer: bool,
) -> Result<SolutionSet> {
    let build = |combo: &[usize]| -> Result<(Vec<LindbladTerm>, Vec<TermOrigin>)> {
        let mut terms = Vec::new();
        let mut why = Vec::new();
        for (k, &j) in combo.iter().enumerate() {
            let p = &lists[k][j];
            terms.push(canonical_term(&dirs[k], p, opts.gamma)?);
            why.push(if stabilizer {
                TermOrigin::Stabilizer {
                    stabilizer: dirs[k].clone(),
                    p: p.clone(),
                }
            } else {
                TermOrigin::Direction {
                    m: dirs[k].clone(),
                    p: p.clone(),
                }
            });
        }
        terms.extend(extra.iter().cloned());
        why.extend(extra_why.iter().cloned());
        Ok((terms, why))
    };
    let combos = if dirs.is_empty() {
        vec![Vec::new()]
    } else {
        p_combinations(lists, opts.max_attempts, opts.seed)
    };
    if let Some(sol) = first_unique(&combos, build, target)? {
        return Ok(sol);
    }
    Err(Error::Construction(format!(
        "no certified-unique p-choice within {} attempts",
        combos.len()
    )))
}

/// Terms V_k = (√γ/2)σ_{p_k}(1 - S_k) for commuting signed stabilizers.
/// The default p_k is the first single-site string anticommuting with S_k.
pub fn stabilizer_terms(
    stabilizers: &[SignedPauliString],
    p_choices: Option<&[SignedPauliString]>,
    gamma: f64,
) -> Result<SolutionSet> {
    let first = stabilizers
        .first()
        .ok_or_else(|| Error::Invalid("no stabilizers".into()))?;
    let n = first.n();
    for (i, a) in stabilizers.iter().enumerate() {
        for b in &stabilizers[i + 1..] {
            if anticommutes(a, b)? {
                return Err(Error::Invalid(format!("stabilizers {a} and {b} anticommute")));
            }
        }
    }
    if let Some(ps) = p_choices {
        if ps.len() != stabilizers.len() {
            return Err(Error::LengthMismatch(ps.len(), stabilizers.len()));
        }
    }
    let mut terms = Vec::new();
    let mut why = Vec::new();
    for (k, s) in stabilizers.iter().enumerate() {
        let p = match p_choices {
            Some(ps) => ps[k].clone(),
            None => default_single_site_p(s, n)?,
        };
        terms.push(canonical_term(s, &p, gamma)?);
        why.push(TermOrigin::Stabilizer {
            stabilizer: s.clone(),
            p,
        });
    }
    let d0 = dark_space_zero(&terms);
    if d0.dim() == 0 {
        return Err(Error::Invalid("stabilizers have no joint +1 eigenspace".into()));
    }
    let (target, certificate) = if d0.dim() == 1 {
        let psi = d0.frame().column(0).into_owned();
        let t = DensityMatrix::pure(&psi)?;
        let cert = uniqueness_certificate(&terms, &t)?;
        (Some(t), cert)
    } else {
        (None, analyze_fixed_points(&terms)?)
    };
    Ok(SolutionSet {
        terms,
        rationale: why,
        target,
        certificate,
    })
}

fn default_single_site_p(s: &SignedPauliString, n: usize) -> Result<SignedPauliString> {
    for site in 0..n {
        for axis in [PauliAxis::X, PauliAxis::Y, PauliAxis::Z] {
            let p = SignedPauliString::local(n, site, axis);
            if anticommutes(&p, s)? {
                return Ok(p);
            }
        }
    }
    Err(Error::IdentityString)
}

/// Graph-state stabilizers S_k = σ_{x,k} ∏_{b ∈ N_k} σ_{z,b} for a simple
/// undirected graph on vertices 0..n given as an edge list.
pub fn graph_stabilizers(n: usize, edges: &[(usize, usize)]) -> Result<Vec<SignedPauliString>> {
    if n == 0 {
        return Err(Error::Invalid("empty graph".into()));
    }
    let mut out: Vec<SignedPauliString> = (0..n).map(|k| SignedPauliString::local(n, k, PauliAxis::X)).collect();
    let mut seen = std::collections::BTreeSet::new();
    for &(a, b) in edges {
        if a >= n || b >= n {
            return Err(Error::IndexOutOfRange(a.max(b), n));
        }
        if a == b {
            return Err(Error::Invalid(format!("self-loop at vertex {a}")));
        }
        if !seen.insert((a.min(b), a.max(b))) {
            continue;
        }
        out[a].axes[b] = PauliAxis::Z;
        out[b].axes[a] = PauliAxis::Z;
    }
    Ok(out)
}

/// Graph-state terms with p = σ_y on each vertex.
pub fn graph_state_terms(n: usize, edges: &[(usize, usize)], gamma: f64) -> Result<SolutionSet> {
    let stabs = graph_stabilizers(n, edges)?;
    let ps: Vec<SignedPauliString> = (0..n).map(|k| SignedPauliString::local(n, k, PauliAxis::Y)).collect();
    stabilizer_terms(&stabs, Some(&ps), gamma)
}

/// Graph-state engineering with a certified unique fixed point: σ_y on each
/// vertex first, then other p-choices among the star preimages of S_k.
pub fn engineer_graph_state(n: usize, edges: &[(usize, usize)], opts: &PureOptions) -> Result<SolutionSet> {
    let stabs = graph_stabilizers(n, edges)?;
    let mut lists = Vec::new();
    for (k, s) in stabs.iter().enumerate() {
        let y = SignedPauliString::local(n, k, PauliAxis::Y);
        let mut l = vec![y.clone()];
        l.extend(preimage_ps(s)?.into_iter().filter(|p| *p != y));
        lists.push(l);
    }
    let probe = graph_state_terms(n, edges, opts.gamma)?;
    if probe.is_unique() {
        return Ok(probe);
    }
    let target = probe
        .target
        .clone()
        .ok_or_else(|| Error::Construction("graph stabilizers leave a degenerate code space".into()))?;
    search_p_choices(&stabs, &lists, &[], &[], &target, opts, true)
}

/// Toric-code stabilizers on an L x L periodic lattice, qubits on edges:
/// h(i,j) = 2(iL + j), v(i,j) = 2(iL + j) + 1. Returns (stars, plaquettes).
pub fn toric_code_stabilizers(l: usize) -> Result<(Vec<SignedPauliString>, Vec<SignedPauliString>)> {
    if l < 2 {
        return Err(Error::Invalid("toric lattice needs L ≥ 2".into()));
    }
    let n = 2 * l * l;
    let h = |i: usize, j: usize| 2 * ((i % l) * l + (j % l));
    let v = |i: usize, j: usize| 2 * ((i % l) * l + (j % l)) + 1;
    let word = |sites: [usize; 4], axis: PauliAxis| {
        let mut axes = vec![PauliAxis::I; n];
        for s in sites {
            axes[s] = axis;
        }
        SignedPauliString { axes, sign: 1 }
    };
    let mut stars = Vec::new();
    let mut plaqs = Vec::new();
    for i in 0..l {
        for j in 0..l {
            stars.push(word([h(i, j), h(i, j + l - 1), v(i, j), v(i + l - 1, j)], PauliAxis::X));
            plaqs.push(word([h(i, j), h(i + 1, j), v(i, j), v(i, j + 1)], PauliAxis::Z));
        }
    }
    Ok((stars, plaqs))
}

/// Terms driving into the toric code space: p = σ_z on the first edge of a
/// star, σ_x on the first edge of a plaquette.
pub fn toric_code_terms(l: usize, gamma: f64) -> Result<SolutionSet> {
    let (stars, plaqs) = toric_code_stabilizers(l)?;
    let n = 2 * l * l;
    if n > pauli::DENSE_GUARD {
        return Err(Error::SizeGuard(format!("toric code with {n} qubits")));
    }
    let first_site = |s: &SignedPauliString| s.axes.iter().position(|a| *a != PauliAxis::I).unwrap();
    let mut stabs = Vec::new();
    let mut ps = Vec::new();
    for s in &stars {
        ps.push(SignedPauliString::local(n, first_site(s), PauliAxis::Z));
        stabs.push(s.clone());
    }
    for s in &plaqs {
        ps.push(SignedPauliString::local(n, first_site(s), PauliAxis::X));
        stabs.push(s.clone());
    }
    stabilizer_terms(&stabs, Some(&ps), gamma)
}

/// Which diagonal construction to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MixedVariant {
    /// All 2^n entries nonzero: one cyclic term per state.
    FullRank,
    /// Cycle on the support plus one term per off-support state.
    RankDeficient,
    /// Cycle on the support plus a single term for all off-support states.
    Compressed,
}

impl MixedVariant {
    pub fn for_spectrum(lambda: &[f64]) -> Self {
        if lambda.iter().all(|&x| x > 0.0) {
            MixedVariant::FullRank
        } else {
            MixedVariant::RankDeficient
        }
    }
}

fn validate_spectrum(lambda: &[f64]) -> Result<Vec<usize>> {
    qubits_of(lambda.len())?;
    if lambda.iter().any(|&x| !x.is_finite() || x < 0.0) {
        return Err(Error::InvalidState("negative or non-finite weight".into()));
    }
    let total: f64 = lambda.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidState(format!("weights sum to {total}")));
    }
    let support: Vec<usize> = (0..lambda.len()).filter(|&k| lambda[k] > 0.0).collect();
    for (a, &i) in support.iter().enumerate() {
        for &j in &support[a + 1..] {
            if (lambda[i] - lambda[j]).abs() <= 1e-12 * lambda[i].max(lambda[j]) {
                return Err(Error::Degenerate);
            }
        }
    }
    Ok(support)
}

/// Unique closed class reached from every state, every edge a basis jump,
/// and every state outside a singleton class has an outgoing jump.
fn jump_graph_unique(dim: usize, jumps: &[(usize, usize)], support: &[usize]) -> bool {
    let mut adj = vec![Vec::new(); dim];
    for &(a, b) in jumps {
        adj[a].push(b);
    }
    let reach = |s: usize| {
        let mut seen = vec![false; dim];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    };
    let in_supp = |k: usize| support.contains(&k);
    // Support strongly connected and closed.
    for &s in support {
        let r = reach(s);
        if (0..dim).any(|k| r[k] != in_supp(k)) {
            return false;
        }
    }
    // Everything else drains to the support.
    for k in 0..dim {
        if !in_supp(k) && !support.iter().any(|&s| reach(k)[s]) {
            return false;
        }
    }
    support.len() == 1 || support.iter().all(|&s| !adj[s].is_empty())
}

/// Diagonal mixed target from X-group elements: a cycle through the
/// support in index order with rates γ_k = λ_r/λ_k (r the last support
/// index), plus γ = 1 terms moving off-support states into the support.
pub fn engineer_mixed(lambda: &[f64], variant: MixedVariant) -> Result<SolutionSet> {
    let support = validate_spectrum(lambda)?;
    let dim = lambda.len();
    let n = qubits_of(dim)?;
    let r = support.len();
    let off: Vec<usize> = (0..dim).filter(|k| !support.contains(k)).collect();
    match variant {
        MixedVariant::FullRank if r != dim => {
            return Err(Error::Invalid("full-rank variant needs every weight positive".into()))
        }
        MixedVariant::RankDeficient | MixedVariant::Compressed if r == dim => {
            return Err(Error::Invalid("target has full rank".into()))
        }
        MixedVariant::Compressed if 2 * r < dim => {
            return Err(Error::Invalid(format!("compressed variant needs rank ≥ {}", dim / 2)))
        }
        _ => {}
    }
    let lref = lambda[*support.last().unwrap()];
    let mut terms = Vec::new();
    let mut why = Vec::new();
    let mut jumps = Vec::new();
    if r > 1 {
        for (a, &k) in support.iter().enumerate() {
            let next = support[(a + 1) % r];
            let g = XGroupElement::from_mask(n, k ^ next);
            let gamma = lref / lambda[k];
            terms.push(LindbladTerm::generalized(&g, &[k], gamma)?);
            why.push(TermOrigin::GroupElement {
                mask: g.mask(),
                support: vec![k],
                gamma,
            });
            jumps.push((k, next));
        }
    }
    let mut single_jumps = true;
    if variant == MixedVariant::Compressed {
        let mask = (1..dim)
            .find(|&g| off.iter().all(|&j| support.contains(&(j ^ g))))
            .ok_or_else(|| Error::Construction("no X-group element maps the complement into the support".into()))?;
        let g = XGroupElement::from_mask(n, mask);
        terms.push(LindbladTerm::generalized(&g, &off, 1.0)?);
        why.push(TermOrigin::GroupElement {
            mask,
            support: off.clone(),
            gamma: 1.0,
        });
        single_jumps = off.len() == 1;
        jumps.extend(off.iter().map(|&j| (j, j ^ mask)));
    } else {
        for &j in &off {
            let to = support[0];
            let g = XGroupElement::from_mask(n, j ^ to);
            terms.push(LindbladTerm::generalized(&g, &[j], 1.0)?);
            why.push(TermOrigin::GroupElement {
                mask: g.mask(),
                support: vec![j],
                gamma: 1.0,
            });
            jumps.push((j, to));
        }
    }
    for t in &terms {
        if !t.is_nilpotent(1e-12) {
            return Err(Error::Construction("group-element term is not nilpotent".into()));
        }
    }
    let target = TargetSpec::DiagonalMixed(lambda.to_vec()).density()?;
    let mut cert = uniqueness_certificate(&terms, &target)?;
    if single_jumps {
        cert.certificates.push(JUMP_GRAPH.to_string());
        let graph = jump_graph_unique(dim, &jumps, &support);
        match cert.unique {
            Uniqueness::Undecided => {
                cert.unique = if graph { Uniqueness::Yes } else { Uniqueness::No };
            }
            u if (u == Uniqueness::Yes) != graph => cert.unique = Uniqueness::Undecided,
            _ => {}
        }
    }
    Ok(SolutionSet {
        terms,
        rationale: why,
        target: Some(target),
        certificate: cert,
    })
}

/// Conjugates every term by U; the target becomes UρU† and the certificate
/// is recomputed.
pub fn conjugate_solution(sol: &SolutionSet, u: &CMat) -> Result<SolutionSet> {
    if let Some(t) = sol.terms.first() {
        if u.shape() != (t.dim(), t.dim()) {
            return Err(Error::Dimension("unitary and terms differ in size".into()));
        }
    }
    if !linalg::is_unitary(u, 1e-10) {
        return Err(Error::NotUnitary);
    }
    let terms: Vec<LindbladTerm> = sol.terms.iter().map(|t| t.conjugated(u)).collect();
    let rationale = sol
        .rationale
        .iter()
        .map(|r| TermOrigin::Conjugated {
            of: Box::new(r.clone()),
        })
        .collect();
    let target = match &sol.target {
        Some(t) => Some(DensityMatrix::new(linalg::symmetrize(&(u * t.matrix() * u.adjoint())))?),
        None => None,
    };
    let certificate = match &target {
        Some(t) => uniqueness_certificate(&terms, t)?,
        None => analyze_fixed_points(&terms)?,
    };
    Ok(SolutionSet {
        terms,
        rationale,
        target,
        certificate,
    })
}

/// General mixed target: diagonalise, engineer the spectrum, conjugate back.
pub fn general_mixed(rho: &DensityMatrix) -> Result<SolutionSet> {
    let (vals, vecs) = linalg::eigh(rho.matrix());
    let lambda: Vec<f64> = vals.iter().map(|&x| if x.abs() < 1e-12 { 0.0 } else { x }).collect();
    let total: f64 = lambda.iter().sum();
    let lambda: Vec<f64> = lambda.iter().map(|x| x / total).collect();
    let diag = engineer_mixed(&lambda, MixedVariant::for_spectrum(&lambda))?;
    conjugate_solution(&diag, &vecs)
}

/// Diagonal target with the fewest terms available: the compressed variant
/// when one X-group element covers all off-support states and certifies,
/// otherwise one term per off-support state.
pub fn engineer_diagonal(lambda: &[f64]) -> Result<SolutionSet> {
    match MixedVariant::for_spectrum(lambda) {
        MixedVariant::FullRank => engineer_mixed(lambda, MixedVariant::FullRank),
        _ => match engineer_mixed(lambda, MixedVariant::Compressed) {
            Ok(sol) if sol.is_unique() => Ok(sol),
            Err(e @ (Error::Degenerate | Error::InvalidState(_))) => Err(e),
            _ => engineer_mixed(lambda, MixedVariant::RankDeficient),
        },
    }
}

/// Dispatch on the target kind.
pub fn engineer(target: &TargetSpec, opts: &PureOptions) -> Result<SolutionSet> {
    match target {
        TargetSpec::Pure(v) => engineer_pure(v, opts),
        TargetSpec::DiagonalMixed(l) => engineer_diagonal(l),
        TargetSpec::GeneralMixed(r) => general_mixed(r),
    }
}

/// Computational basis state |k⟩ on n qubits.
pub fn basis_state(n: usize, k: usize) -> CVec {
    let mut v = CVec::zeros(1 << n);
    v[k] = c(1.0, 0.0);
    v
}

/// (|0..0⟩ + |1..1⟩)/√2.
pub fn ghz_state(n: usize) -> CVec {
    let mut v = CVec::zeros(1 << n);
    v[0] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v[(1 << n) - 1] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v
}

/// Equal superposition of all basis states with k ones.
pub fn dicke_state(n: usize, k: usize) -> CVec {
    let idx: Vec<usize> = (0..(1usize << n)).filter(|x| x.count_ones() as usize == k).collect();
    let mut v = CVec::zeros(1 << n);
    let a = 1.0 / (idx.len() as f64).sqrt();
    for i in idx {
        v[i] = c(a, 0.0);
    }
    v
}

pub fn w_state(n: usize) -> CVec {
    dicke_state(n, 1)
}

/// σ⁺ = |0⟩⟨1| on qubit `site` (0-based).
pub fn raising(n: usize, site: usize) -> CMat {
    let sp = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let mut m = CMat::identity(1, 1);
    for k in 0..n {
        m = if k == site {
            linalg::kron(&m, &sp)
        } else {
            linalg::kron(&m, &linalg::identity(2))
        };
    }
    m
}

fn explicit(terms: Vec<(CMat, &str)>) -> (Vec<LindbladTerm>, Vec<TermOrigin>) {
    terms
        .into_iter()
        .map(|(m, l)| (LindbladTerm::raw(m), TermOrigin::Explicit { label: l.to_string() }))
        .unzip()
}

fn certified(terms: Vec<LindbladTerm>, rationale: Vec<TermOrigin>, psi: &CVec) -> Result<SolutionSet> {
    let target = DensityMatrix::pure(psi)?;
    let certificate = uniqueness_certificate(&terms, &target)?;
    Ok(SolutionSet {
        terms,
        rationale,
        target: Some(target),
        certificate,
    })
}

fn canonical_set(pairs: &[(&str, &str)]) -> Result<(Vec<LindbladTerm>, Vec<TermOrigin>)> {
    let mut terms = Vec::new();
    let mut why = Vec::new();
    for (p, q) in pairs {
        let t = LindbladTerm::canonical(&SignedPauliString::p(p), &SignedPauliString::p(q), 1.0)?;
        if let Provenance::Canonical { m, p, .. } = &t.provenance {
            why.push(TermOrigin::Direction {
                m: m.clone(),
                p: p.clone(),
            });
        }
        terms.push(t);
    }
    Ok((terms, why))
}

/// Built-in solution sets.
pub mod builtin {
    use super::*;

    /// (label, qubits, edges).
    pub type GraphRow = (&'static str, usize, Vec<(usize, usize)>);

    /// {σ_k⁺}: the ground state |0..0⟩.
    pub fn ground(n: usize) -> Result<SolutionSet> {
        let (terms, why) = explicit((0..n).map(|k| (raising(n, k), "amplitude damping")).collect());
        certified(terms, why, &basis_state(n, 0))
    }

    pub fn ghz(n: usize, opts: &PureOptions) -> Result<SolutionSet> {
        engineer_pure(&ghz_state(n), opts)
    }

    pub fn w(n: usize, opts: &PureOptions) -> Result<SolutionSet> {
        engineer_pure(&w_state(n), opts)
    }

    /// The three 2-qubit Bell-state sets, given as (p, q) pairs.
    pub fn bell_sets() -> Result<Vec<SolutionSet>> {
        let sets: [[(&str, &str); 2]; 3] = [
            [("y1", "zx"), ("1x", "zy")],
            [("y1", "zx"), ("1x", "yz")],
            [("x1", "yz"), ("xy", "z1")],
        ];
        sets.iter()
            .map(|s| {
                let (t, w) = canonical_set(s)?;
                certified(t, w, &ghz_state(2))
            })
            .collect()
    }

    /// The three 3-qubit GHZ sets; `alpha` ∈ {1, x, z} fills the free slot
    /// of the third set.
    pub fn ghz3_sets(alpha: char) -> Result<Vec<SolutionSet>> {
        if !matches!(alpha, '1' | 'x' | 'z') {
            return Err(Error::ParsePauli(alpha.to_string()));
        }
        let a = |s: &str| s.replace('a', &alpha.to_string());
        let third = [
            ("11y".to_string(), "xxz".to_string()),
            (a("x1a"), a("yza")),
            (a("ax1"), a("ayz")),
        ];
        let first = [("x11", "zyx"), ("yzy", "1y1"), ("xyx", "11z")];
        let second = [("11x", "1zy"), ("xyx", "z11"), ("1y1", "xzx")];
        let third_ref: Vec<(&str, &str)> = third.iter().map(|(p, q)| (p.as_str(), q.as_str())).collect();
        [first.to_vec(), second.to_vec(), third_ref]
            .iter()
            .map(|s| {
                let (t, w) = canonical_set(s)?;
                certified(t, w, &ghz_state(3))
            })
            .collect()
    }

    /// W_3 set with non-nilpotent terms: ½(σ_x11 - iσ_yzz) and two terms
    /// σ_p(4·1 - a) built from XX + YY couplings.
    pub fn w3_alternative() -> Result<SolutionSet> {
        let s = pauli::sigma;
        let v1 = (s("x11") - s("yzz") * I) * c(0.5, 0.0);
        let a2 = s("xx1") + s("x1x") + s("1xx") + s("yy1") + s("y1y") + s("1yy");
        let a3 = s("xxz") + s("xzx") + s("zxx") + s("yyz") + s("yzy") + s("zyy");
        let four = linalg::identity(8) * c(4.0, 0.0);
        let v2 = s("1x1") * (&four - a2);
        let v3 = s("11x") * (&four - a3);
        let (terms, why) = explicit(vec![
            (v1, "global canonical term for -zzz"),
            (v2, "shifted two-body coupling"),
            (v3, "shifted two-body coupling with z"),
        ]);
        certified(terms, why, &w_state(3))
    }

    /// The 4-qubit Dicke state with two excitations.
    pub fn dicke4() -> Result<SolutionSet> {
        let sp = |k| raising(4, k);
        let v1 = (pauli::sigma("y111") + pauli::sigma("zxxx") * I) * c(0.5, 0.0);
        let v2 = sp(0) * sp(1) - sp(0) * sp(2);
        let v3 = sp(1) * sp(2) - sp(1) * sp(3);
        let v4 = sp(2) * sp(3) - sp(0) * sp(2);
        let (terms, why) = explicit(vec![
            (v1, "global canonical term for zzzz"),
            (v2, "pair difference (12)-(13)"),
            (v3, "pair difference (23)-(24)"),
            (v4, "pair difference (34)-(13)"),
        ]);
        certified(terms, why, &dicke_state(4, 2))
    }

    /// Dicke recipes for other sizes are not known in closed form.
    pub fn dicke(n: usize) -> Result<SolutionSet> {
        match n {
            4 => dicke4(),
            _ => Err(Error::OpenProblem(format!(
                "no known solution set for the {n}-qubit Dicke state"
            ))),
        }
    }

    /// Graph-state rows: edge, 3-path, triangle, 4-star centred on vertex 1,
    /// 4-cycle. Vertex labels are 0-based.
    pub fn graph_rows() -> Vec<GraphRow> {
        vec![
            ("edge", 2, vec![(0, 1)]),
            ("path", 3, vec![(0, 1), (1, 2)]),
            ("triangle", 3, vec![(0, 1), (1, 2), (0, 2)]),
            ("star", 4, vec![(0, 1), (0, 2), (0, 3)]),
            ("cycle", 4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]),
        ]
    }

    pub fn toric() -> Result<SolutionSet> {
        toric_code_terms(2, 1.0)
    }

    /// exp(-iπ/8(σ_xy + σ_yx)), rotating |00⟩ to the Bell state.
    pub fn bell_rotation() -> CMat {
        let h = pauli::sigma("xy") + pauli::sigma("yx");
        linalg::expm(&(h * c(0.0, -std::f64::consts::PI / 8.0)))
    }

    /// exp(-iπ/16(σ_yxx + σ_xyx + σ_xxy - σ_yyy)), rotating |000⟩ to GHZ_3.
    pub fn ghz3_rotation() -> CMat {
        let s = pauli::sigma;
        let h = s("yxx") + s("xyx") + s("xxy") - s("yyy");
        linalg::expm(&(h * c(0.0, -std::f64::consts::PI / 16.0)))
    }
}

/// Projector weight of a solution's dark space onto the target.
pub fn target_overlap(sol: &SolutionSet) -> Option<f64> {
    let t = sol.target.as_ref()?;
    let p = sol.certificate.dark_space.projector();
    Some(linalg::hs_re(&p, t.matrix()))
}
