// Copyright 2026 Lindkit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Time propagation ρ(t) = e^{-tL} ρ₀ and channel diagnostics.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixed_points::DensityMatrix;
use crate::linalg::{self, c, CMat};
use crate::superop::{unvec, vec, Superoperator};

/// Choi matrices are built for at most this many qubits.
pub const CHOI_GUARD: usize = 3;

/// e^{-tL} as a dense superoperator.
pub fn propagator(l: &Superoperator, t: f64) -> Result<CMat> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    Ok(linalg::expm(&(&l.matrix * c(-t, 0.0))))
}

fn apply(prop: &CMat, rho: &CMat) -> CMat {
    linalg::symmetrize(&unvec(&(prop * vec(rho))))
}

/// unvec(e^{-tL} vec ρ₀), Hermitian-symmetrised. No positivity check, so
/// invalid generators can be propagated for diagnostics.
pub fn propagate(l: &Superoperator, rho0: &CMat, t: f64) -> Result<CMat> {
    Ok(apply(&propagator(l, t)?, rho0))
}

/// ⟨ψ|ρ|ψ⟩ for pure targets, (tr√(√σ ρ √σ))² otherwise.
pub fn fidelity(rho: &CMat, target: &DensityMatrix) -> f64 {
    if let Some(psi) = target.pure_vector(1e-12) {
        return (psi.adjoint() * rho * &psi)[(0, 0)].re;
    }
    let s = linalg::psd_sqrt(target.matrix());
    let inner = linalg::symmetrize(&(&s * rho * &s));
    let (vals, _) = linalg::eigh(&inner);
    let root: f64 = vals.iter().map(|v| v.max(0.0).sqrt()).sum();
    root * root
}

/// Ginibre-distributed random density matrix of full rank.
pub fn random_density<R: Rng>(dim: usize, rng: &mut R) -> DensityMatrix {
    let g = CMat::from_fn(dim, dim, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let m = &g * g.adjoint();
    DensityMatrix::normalized(m).expect("Ginibre matrices are positive definite")
}

#[derive(Clone, Debug, Serialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub fidelity: Option<f64>,
    pub trace: f64,
    pub min_eig: f64,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<CMat>,
    pub fidelities: Option<Vec<f64>>,
}

impl Trajectory {
    pub fn points(&self) -> Vec<TrajectoryPoint> {
        self.times
            .iter()
            .zip(&self.states)
            .enumerate()
            .map(|(k, (t, s))| TrajectoryPoint {
                t: *t,
                fidelity: self.fidelities.as_ref().map(|f| f[k]),
                trace: s.trace().re,
                min_eig: linalg::min_eigenvalue_hermitian(s),
            })
            .collect()
    }

    /// Traces within 1e-8 of one and eigenvalues above -1e-7 at every step.
    pub fn physical(&self) -> bool {
        self.points()
            .iter()
            .all(|p| (p.trace - 1.0).abs() <= 1e-8 && p.min_eig >= -1e-7)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,fidelity,trace,min_eig\n");
        for p in self.points() {
            let f = p.fidelity.map(|f| format!("{f:.12}")).unwrap_or_default();
            out.push_str(&format!("{:.6},{},{:.12},{:.6e}\n", p.t, f, p.trace, p.min_eig));
        }
        out
    }
}

/// Samples ρ(t) on a grid of nondecreasing times.
pub fn trajectory(l: &Superoperator, rho0: &CMat, times: &[f64], target: Option<&DensityMatrix>) -> Result<Trajectory> {
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Invalid("times must be nondecreasing".into()));
    }
    let mut states = Vec::with_capacity(times.len());
    let mut cur = rho0.clone();
    let mut last = 0.0;
    for &t in times {
        cur = apply(&propagator(l, t - last)?, &cur);
        last = t;
        states.push(cur.clone());
    }
    let fidelities = target.map(|tg| states.iter().map(|s| fidelity(s, tg)).collect());
    Ok(Trajectory {
        times: times.to_vec(),
        states,
        fidelities,
    })
}

#[derive(Clone, Debug)]
pub struct Convergence {
    pub trajectory: Trajectory,
    pub converged: bool,
    pub t_final: f64,
    pub fidelity: f64,
}

/// Doubles t from `t0` until F(ρ(t), target) ≥ 1 - tol or t exceeds
/// `t_max`, with a last evaluation at `t_max` itself. Each step squares the previous propagator, so ρ(t) is always
/// computed from ρ₀ directly.
pub fn converge(
    l: &Superoperator,
    rho0: &CMat,
    target: &DensityMatrix,
    tol: f64,
    t0: f64,
    t_max: f64,
) -> Result<Convergence> {
    if tol <= 0.0 || t0 <= 0.0 {
        return Err(Error::Invalid("tolerance and initial step must be positive".into()));
    }
    let mut times = vec![0.0];
    let mut states = vec![rho0.clone()];
    let mut fids = vec![fidelity(rho0, target)];
    let mut t = t0;
    let mut prop = propagator(l, t0)?;
    while fids.last().copied().unwrap_or(0.0) < 1.0 - tol && t <= t_max {
        let s = apply(&prop, rho0);
        fids.push(fidelity(&s, target));
        states.push(s);
        times.push(t);
        t *= 2.0;
        prop = &prop * &prop;
    }
    // Doubling can step over t_max; finish exactly there.
    let last = *times.last().unwrap();
    if fids.last().copied().unwrap_or(0.0) < 1.0 - tol && last < t_max && t > t_max {
        let s = apply(&propagator(l, t_max)?, rho0);
        fids.push(fidelity(&s, target));
        states.push(s);
        times.push(t_max);
    }
    let f = *fids.last().unwrap();
    let t_final = *times.last().unwrap();
    Ok(Convergence {
        trajectory: Trajectory {
            times,
            states,
            fidelities: Some(fids),
        },
        converged: f >= 1.0 - tol,
        t_final,
        fidelity: f,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CptpPoint {
    pub t: f64,
    /// max |tr T(E_ij) - δ_ij| over matrix units.
    pub trace_deviation: f64,
    pub choi_min_eig: f64,
    /// max |T(E_ji) - T(E_ij)†|.
    pub hermiticity_defect: f64,
}

impl CptpPoint {
    pub fn is_cptp(&self, tol: f64) -> bool {
        self.trace_deviation <= tol && self.choi_min_eig >= -tol && self.hermiticity_defect <= tol
    }
}

fn column_image(t: &CMat, k: usize) -> CMat {
    unvec(&t.columns(k, 1).into_owned())
}

/// Choi matrix Σ_ij E_ij ⊗ T(E_ij) of the map with superoperator `t`.
pub fn choi(t: &CMat) -> Result<CMat> {
    let n2 = t.nrows();
    let n = (n2 as f64).sqrt().round() as usize;
    if n * n != n2 || n > 1 << CHOI_GUARD {
        return Err(Error::SizeGuard(format!("Choi matrix for {n}-dimensional space")));
    }
    let mut out = CMat::zeros(n2, n2);
    // Column-stacking: column j*n + i of T is vec T(E_ij).
    for i in 0..n {
        for j in 0..n {
            let img = column_image(t, j * n + i);
            out.view_mut((i * n, j * n), (n, n)).copy_from(&img);
        }
    }
    Ok(out)
}

pub fn cptp_diagnostics(l: &Superoperator, times: &[f64]) -> Result<Vec<CptpPoint>> {
    let n = l.hilbert_dim();
    times
        .iter()
        .map(|&t| {
            let p = propagator(l, t)?;
            let ch = choi(&p)?;
            let mut tr_dev: f64 = 0.0;
            let mut herm: f64 = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let a = column_image(&p, j * n + i);
                    let b = column_image(&p, i * n + j);
                    let want = if i == j { 1.0 } else { 0.0 };
                    tr_dev = tr_dev.max((a.trace() - c(want, 0.0)).norm());
                    herm = herm.max(linalg::frob(&(b - a.adjoint())));
                }
            }
            Ok(CptpPoint {
                t,
                trace_deviation: tr_dev,
                choi_min_eig: linalg::min_eigenvalue_hermitian(&linalg::symmetrize(&ch)),
                hermiticity_defect: herm,
            })
        })
        .collect()
}
