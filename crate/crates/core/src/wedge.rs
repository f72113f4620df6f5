// Copyright 2026 Lindkit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Lie wedges of coherently controlled Lindblad systems.
//!
//! The wedge is represented by its edge k_c (the control algebra) and a
//! finite set of cone generators: the conjugated drift Ad_{e^x}(D), x ∈ k_c,
//! with its k_c component removed. Everything computed here (span
//! dimension, semialgebra verdict, table rows) depends only on these samples.

use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, c, frob, CMat, RealSpan, I};
use crate::lk_algebra::{self, OperatorBasis, SystemAlgebraReport, RANK_TOL};
use crate::pauli::sigma;
use crate::superop::{hat, hat_plus, GeneratorSpec, LindbladTerm};

/// Radii of the orbit-sampling spheres in k_c coordinates.
pub const RADII: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 5.0];

/// Commutator threshold (relative) for the semialgebra test.
pub const COMMUTE_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct ControlSystem {
    pub spec: GeneratorSpec,
    kc: OperatorBasis,
    drift: CMat,
}

impl ControlSystem {
    pub fn new(spec: GeneratorSpec, cap: usize) -> Result<Self> {
        let kc = lk_algebra::control_algebra(&spec, cap)?;
        let drift = spec.drift_superop();
        Ok(ControlSystem { spec, kc, drift })
    }

    pub fn kc(&self) -> &OperatorBasis {
        &self.kc
    }

    /// D = i ad_{H_d} + Γ.
    pub fn drift(&self) -> &CMat {
        &self.drift
    }

    /// Drift with its k_c component removed.
    pub fn drift_perp(&self) -> CMat {
        if self.kc.dim() == 0 {
            return self.drift.clone();
        }
        &self.drift - self.kc.project(&self.drift)
    }
}

#[derive(Clone, Debug)]
pub struct WedgeOptions {
    pub batch: usize,
    /// Consecutive batches without rank change required to stop.
    pub stable_batches: usize,
    pub max_batches: usize,
    pub min_samples: usize,
    pub seed: u64,
}

impl Default for WedgeOptions {
    fn default() -> Self {
        WedgeOptions {
            batch: 32,
            stable_batches: 3,
            max_batches: 64,
            min_samples: 8,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Debug)]
pub struct WedgeApprox {
    pub edge: OperatorBasis,
    /// Ad-orbit points of the drift, projected onto k_c⊥.
    pub cone_samples: Vec<CMat>,
    /// dim(w - w) = rank of edge ∪ samples ∪ {D}.
    pub span_dim: usize,
    /// False when the rank was still growing at the batch budget; span_dim
    /// is then a lower bound.
    pub stable: bool,
    pub seed: u64,
}

impl WedgeApprox {
    /// The cone lies in the open half-space tr > 0, so it is pointed.
    pub fn pointed_by_trace(&self) -> bool {
        self.cone_samples.iter().all(|s| s.trace().re > 1e-12)
    }

    /// Rank arithmetic for edge ∩ span(cone) = {0}.
    pub fn edge_meets_cone_trivially(&self) -> bool {
        let size = self.edge.size();
        let cone = OperatorBasis::spanning(size, &self.cone_samples);
        let mut all: Vec<CMat> = self.edge.elements().to_vec();
        all.extend(cone.elements().iter().cloned());
        OperatorBasis::spanning(size, &all).dim() == self.edge.dim() + cone.dim()
    }
}

fn random_edge_element(edge: &OperatorBasis, radius: f64, rng: &mut rand_chacha::ChaCha8Rng) -> CMat {
    let k = edge.dim();
    let mut u: Vec<f64> = (0..k).map(|_| StandardNormal.sample(rng)).collect();
    let nrm = u.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
    for x in &mut u {
        *x *= radius / nrm;
    }
    let size = edge.size();
    let mut m = CMat::zeros(size, size);
    for (b, x) in edge.elements().iter().zip(&u) {
        m += b * c(*x, 0.0);
    }
    m
}

fn conjugate(x: &CMat, a: &CMat) -> CMat {
    let e = linalg::expm(x);
    let ei = linalg::expm(&(-x));
    &e * a * ei
}

/// Inner approximation by orbit sampling, stopped when the rank has been
/// stable for `stable_batches` consecutive batches.
pub fn inner_approximation(sys: &ControlSystem, opts: &WedgeOptions) -> Result<WedgeApprox> {
    if opts.min_samples < 8 || opts.batch == 0 {
        return Err(Error::Invalid("at least 8 samples per run and a nonzero batch".into()));
    }
    let size = sys.drift.nrows();
    let edge = sys.kc.clone();
    let mut span = RealSpan::new(size, size);
    for b in edge.elements() {
        span.insert_rel(b, RANK_TOL);
    }
    span.insert_rel(&sys.drift, RANK_TOL);
    let d_perp = sys.drift_perp();
    let mut samples = vec![d_perp.clone()];
    if edge.dim() == 0 {
        // Nothing to conjugate by: the cone is the ray through D.
        return Ok(WedgeApprox {
            edge,
            cone_samples: samples,
            span_dim: span.dim(),
            stable: true,
            seed: opts.seed,
        });
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(opts.seed);
    let mut last = span.dim();
    let mut unchanged = 0;
    let mut stable = false;
    let mut drawn = 0usize;
    for _ in 0..opts.max_batches {
        let xs: Vec<CMat> = (0..opts.batch)
            .map(|j| random_edge_element(&edge, RADII[(drawn + j) % RADII.len()], &mut rng))
            .collect();
        drawn += xs.len();
        let batch: Vec<CMat> = xs
            .par_iter()
            .map(|x| {
                let s = conjugate(x, &sys.drift);
                &s - edge.project(&s)
            })
            .collect();
        for s in batch {
            span.insert_rel(&s, RANK_TOL);
            samples.push(s);
        }
        if span.dim() == last && drawn >= opts.min_samples {
            unchanged += 1;
            if unchanged >= opts.stable_batches {
                stable = true;
                break;
            }
        } else {
            unchanged = 0;
            last = span.dim();
        }
    }
    Ok(WedgeApprox {
        edge,
        cone_samples: samples,
        span_dim: span.dim(),
        stable,
        seed: opts.seed,
    })
}

/// Largest relative residual of Ad_{e^x}(sample) outside the sampled span,
/// over `checks` random x ∈ k_c.
pub fn edge_invariance_defect(approx: &WedgeApprox, checks: usize, seed: u64) -> f64 {
    let size = approx.edge.size();
    let mut span = RealSpan::new(size, size);
    for e in approx.edge.elements().iter().chain(&approx.cone_samples) {
        span.insert_rel(e, RANK_TOL);
    }
    if approx.edge.dim() == 0 {
        return 0.0;
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for k in 0..checks {
        let x = random_edge_element(&approx.edge, RADII[k % RADII.len()], &mut rng);
        let s = &approx.cone_samples[k % approx.cone_samples.len()];
        worst = worst.max(span.relative_distance(&conjugate(&x, s)));
    }
    worst
}

/// dim(w - w) from the smallest ad(k_c)-invariant subspace containing D.
/// For connected K this equals the span of the Ad-orbit, so it checks the
/// sampler without randomness.
pub fn orbit_span_exact(sys: &ControlSystem) -> usize {
    let size = sys.drift.nrows();
    let mut span = RealSpan::new(size, size);
    for b in sys.kc.elements() {
        span.insert_rel(b, RANK_TOL);
    }
    let mut frontier = Vec::new();
    if let Some(e) = span.insert_rel(&sys.drift, RANK_TOL) {
        frontier.push(e);
    }
    while let Some(v) = frontier.pop() {
        let next: Vec<(CMat, f64)> = sys
            .kc
            .elements()
            .par_iter()
            .map(|b| (linalg::commutator(b, &v), frob(b) * frob(&v)))
            .collect();
        // Absolute floor: a vanishing bracket must not be rescaled into the span.
        for (w, scale) in next {
            if let Some(e) = span.insert_abs(&w, RANK_TOL * scale) {
                frontier.push(e);
            }
        }
    }
    span.dim()
}

#[derive(Clone, Debug, Serialize)]
pub struct SemialgebraVerdict {
    pub is_semialgebra: bool,
    /// Index of the first edge basis element with [b, D⊥] ≠ 0 and the
    /// relative size of that commutator.
    pub violating_commutator: Option<(usize, f64)>,
}

/// Semialgebra test: every edge element commutes with the drift component
/// orthogonal to the edge.
pub fn semialgebra_test(sys: &ControlSystem) -> SemialgebraVerdict {
    let d = sys.drift_perp();
    let scale = frob(&d).max(1e-300);
    for (k, b) in sys.kc.elements().iter().enumerate() {
        let r = frob(&linalg::commutator(b, &d)) / (scale * frob(b).max(1e-300));
        if r > COMMUTE_TOL {
            return SemialgebraVerdict {
                is_semialgebra: false,
                violating_commutator: Some((k, r)),
            };
        }
    }
    SemialgebraVerdict {
        is_semialgebra: true,
        violating_commutator: None,
    }
}

fn axis_index(ch: char) -> Result<usize> {
    match ch {
        'x' => Ok(0),
        'y' => Ok(1),
        'z' => Ok(2),
        _ => Err(Error::ParsePauli(ch.to_string())),
    }
}

/// Single-qubit drift and control data for the closed-form curves.
#[derive(Clone, Debug)]
pub struct SingleQubitConfig {
    /// Control axis.
    pub c: char,
    /// Drift Hamiltonian axis; the drift Hamiltonian part is iσ̂_d.
    pub d: char,
    /// Unital terms (axis k, γ_k), each contributing 2γ_k σ̂_k².
    pub unital: Vec<(char, f64)>,
    /// Amplitude damping rate γ for V = √γ(σ_x + iσ_y).
    pub damping: Option<f64>,
}

fn hat_vec(v: [f64; 3]) -> CMat {
    let mut m = CMat::zeros(4, 4);
    for (k, p) in ["x", "y", "z"].iter().enumerate() {
        m += hat(&sigma(p)) * c(v[k], 0.0);
    }
    m
}

fn hat_plus_vec(v: [f64; 3]) -> CMat {
    let mut m = CMat::zeros(4, 4);
    for (k, p) in ["x", "y", "z"].iter().enumerate() {
        m += hat_plus(&sigma(p)) * c(v[k], 0.0);
    }
    m
}

/// Right-handed rotation of v by θ about the unit axis e_c.
fn rotate(c_axis: usize, theta: f64, v: [f64; 3]) -> [f64; 3] {
    let (s, co) = theta.sin_cos();
    let mut e = [0.0; 3];
    e[c_axis] = 1.0;
    let dot = v[c_axis];
    let cross = [
        e[1] * v[2] - e[2] * v[1],
        e[2] * v[0] - e[0] * v[2],
        e[0] * v[1] - e[1] * v[0],
    ];
    let mut out = [0.0; 3];
    for k in 0..3 {
        out[k] = v[k] * co + cross[k] * s + e[k] * dot * (1.0 - co);
    }
    out
}

fn unit(k: usize) -> [f64; 3] {
    let mut e = [0.0; 3];
    e[k] = 1.0;
    e
}

impl SingleQubitConfig {
    pub fn validate(&self) -> Result<()> {
        axis_index(self.c)?;
        axis_index(self.d)?;
        for (k, g) in &self.unital {
            axis_index(*k)?;
            if *g < 0.0 {
                return Err(Error::Invalid("negative rate".into()));
            }
        }
        if matches!(self.damping, Some(g) if g < 0.0) {
            return Err(Error::Invalid("negative rate".into()));
        }
        Ok(())
    }

    /// The drift iσ̂_d + Σ 2γ_k σ̂_k² + damping, as a 4 x 4 superoperator.
    pub fn drift(&self) -> Result<CMat> {
        self.curve(0.0)
    }

    /// K_d^c(θ) + Σ P_k^c(θ) (+ the damping terms): the drift conjugated by
    /// e^{-iθσ̂_c}, evaluated by rotating Pauli vectors.
    pub fn curve(&self, theta: f64) -> Result<CMat> {
        self.validate()?;
        let ci = axis_index(self.c)?;
        let rot = |k: usize| rotate(ci, theta, unit(k));
        let mut m = hat_vec(rot(axis_index(self.d)?)) * I;
        for (k, g) in &self.unital {
            let h = hat_vec(rot(axis_index(*k)?));
            m += &h * &h * c(2.0 * g, 0.0);
        }
        if let Some(g) = self.damping {
            let hx = hat_vec(rot(0));
            let hy = hat_vec(rot(1));
            let hyp = hat_plus_vec(rot(1));
            m += (&hx * &hx + &hy * &hy) * c(2.0 * g, 0.0) + &hx * hyp * (I * c(4.0 * g, 0.0));
        }
        Ok(m)
    }

    /// The same point from the orbit: e^{-iθσ̂_c} D e^{iθσ̂_c}.
    pub fn orbit_point(&self, theta: f64) -> Result<CMat> {
        let ci = axis_index(self.c)?;
        let x = hat(&sigma(["x", "y", "z"][ci])) * c(0.0, -theta);
        Ok(conjugate(&x, &self.drift()?))
    }
}

/// Samples of the single-qubit cone curve on a θ grid.
pub fn single_qubit_cone_curves(cfg: &SingleQubitConfig, thetas: &[f64]) -> Result<Vec<CMat>> {
    thetas.iter().map(|&t| cfg.curve(t)).collect()
}

/// A named wedge scenario with its reference span dimension.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub spec: GeneratorSpec,
    pub expected_span: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WedgeRow {
    pub scenario: String,
    pub dim_kc: usize,
    pub dim_kd: usize,
    pub dim_g: usize,
    pub span_dim: usize,
    /// Same quantity from the ad(k_c)-invariant closure of D.
    pub span_dim_exact: usize,
    pub h: bool,
    pub wh: bool,
    pub a: bool,
    pub semialgebra: bool,
    pub stable: bool,
    pub expected_span: Option<usize>,
}

impl WedgeRow {
    pub fn matches(&self) -> bool {
        self.expected_span.is_none_or(|e| e == self.span_dim) && self.stable && self.span_dim == self.span_dim_exact
    }
}

pub fn analyze_scenario(s: &Scenario, cap: usize, opts: &WedgeOptions) -> Result<WedgeRow> {
    let sys = ControlSystem::new(s.spec.clone(), cap)?;
    let rep: SystemAlgebraReport = lk_algebra::classify_system_algebra(&s.spec, cap)?;
    let w = inner_approximation(&sys, opts)?;
    let v = semialgebra_test(&sys);
    Ok(WedgeRow {
        scenario: s.name.clone(),
        dim_kc: rep.dim_kc,
        dim_kd: rep.dim_kd,
        dim_g: rep.dim_g,
        span_dim: w.span_dim,
        span_dim_exact: orbit_span_exact(&sys),
        h: rep.h,
        wh: rep.wh,
        a: rep.a,
        semialgebra: v.is_semialgebra,
        stable: w.stable,
        expected_span: s.expected_span,
    })
}

pub fn wedge_tables(battery: &[Scenario], opts: &WedgeOptions) -> Result<Vec<WedgeRow>> {
    battery
        .iter()
        .map(|s| analyze_scenario(s, lk_algebra::default_cap(s.spec.n), opts))
        .collect()
}

fn pauli_terms(list: &[&str], gamma: f64) -> Vec<LindbladTerm> {
    list.iter()
        .map(|p| {
            let mut t = LindbladTerm::raw(sigma(p) * c(gamma.sqrt(), 0.0));
            t.rate = gamma;
            t
        })
        .collect()
}

fn hams(list: &[&str]) -> Vec<CMat> {
    list.iter().map(|p| sigma(p)).collect()
}

fn scenario(
    name: &str,
    n: usize,
    drift: CMat,
    controls: &[&str],
    terms: Vec<LindbladTerm>,
    expected: usize,
) -> Result<Scenario> {
    Ok(Scenario {
        name: name.to_string(),
        spec: GeneratorSpec::new(n, drift, hams(controls), terms)?,
        expected_span: Some(expected),
    })
}

/// Built-in scenario batteries.
pub mod battery {
    use super::*;

    /// Single-qubit rows with drift σ_z.
    pub fn single_qubit() -> Result<Vec<Scenario>> {
        let z = sigma("z");
        let ad = LindbladTerm::raw((sigma("x") + sigma("y") * I) * c(0.5, 0.0));
        Ok(vec![
            scenario(
                "unital_single_pauli_h",
                1,
                z.clone(),
                &["x", "y"],
                pauli_terms(&["x"], 1.0),
                9,
            )?,
            scenario(
                "isotropic_depolarizing_h",
                1,
                z.clone(),
                &["x", "y"],
                pauli_terms(&["x", "y", "z"], 1.0),
                4,
            )?,
            scenario(
                "isotropic_depolarizing_wh",
                1,
                z.clone(),
                &["y"],
                pauli_terms(&["x", "y", "z"], 1.0),
                4,
            )?,
            scenario("amplitude_damping_h", 1, z, &["x", "y"], vec![ad], 12)?,
        ])
    }

    /// Two-qubit rows. Full control is generated by σ_x1, σ_y1, σ_1x, σ_1y,
    /// σ_zz; local control by the first four.
    pub fn two_qubit() -> Result<Vec<Scenario>> {
        let ising = sigma("z1") + sigma("1z") + sigma("zz");
        let local_z = sigma("z1") + sigma("1z");
        let full = ["x1", "y1", "1x", "1y", "zz"];
        let local = ["x1", "y1", "1x", "1y"];
        let nonlocal: Vec<String> = ["x", "y", "z"]
            .iter()
            .flat_map(|a| ["x", "y", "z"].iter().map(move |b| format!("{a}{b}")))
            .collect();
        let nonlocal_ref: Vec<&str> = nonlocal.iter().map(|s| s.as_str()).collect();
        let all: Vec<String> = crate::pauli::traceless_strings(2)
            .iter()
            .map(|p| p.to_string())
            .collect();
        let all_ref: Vec<&str> = all.iter().map(|s| s.as_str()).collect();
        let ad = || LindbladTerm::raw((sigma("x1") + sigma("y1") * I) * c(0.5, 0.0));
        Ok(vec![
            scenario(
                "unital_single_pauli_full",
                2,
                ising.clone(),
                &full,
                pauli_terms(&["x1"], 1.0),
                135,
            )?,
            scenario(
                "local_unital_local",
                2,
                ising.clone(),
                &local,
                pauli_terms(&["x1"], 1.0),
                21,
            )?,
            scenario(
                "local_dephasing_ising",
                2,
                ising.clone(),
                &["x1", "1x"],
                pauli_terms(&["z1", "1z"], 1.0),
                16,
            )?,
            scenario(
                "local_dephasing_local_drift",
                2,
                local_z.clone(),
                &["x1", "1x"],
                pauli_terms(&["z1", "1z"], 1.0),
                12,
            )?,
            scenario(
                "global_depolarizing_local",
                2,
                local_z.clone(),
                &local,
                pauli_terms(&nonlocal_ref, 1.0),
                7,
            )?,
            scenario(
                "complete_depolarizing_full",
                2,
                local_z,
                &full,
                pauli_terms(&all_ref, 1.0),
                16,
            )?,
            scenario("amplitude_damping_full", 2, ising.clone(), &full, vec![ad()], 240)?,
            scenario("amplitude_damping_local", 2, ising, &local, vec![ad()], 24)?,
        ])
    }

    pub fn by_name(name: &str) -> Result<Vec<Scenario>> {
        match name {
            "single-qubit" | "single" => single_qubit(),
            "two-qubit" | "two" => two_qubit(),
            _ => Err(Error::Invalid(format!("unknown battery {name}"))),
        }
    }

    /// Two-qubit nonlocal isotropic depolarizing with local controls.
    pub fn local_control_depolarizing() -> Result<Scenario> {
        let nine: Vec<String> = ["x", "y", "z"]
            .iter()
            .flat_map(|a| ["x", "y", "z"].iter().map(move |b| format!("{a}{b}")))
            .collect();
        let nine_ref: Vec<&str> = nine.iter().map(|s| s.as_str()).collect();
        let mut s = scenario(
            "local_control_depolarizing",
            2,
            sigma("z1") + sigma("1z"),
            &["x1", "y1", "1x", "1y"],
            pauli_terms(&nine_ref, 1.0),
            7,
        )?;
        s.expected_span = Some(7);
        Ok(s)
    }

    /// Single qubit, drift σ_z, control σ_y, isotropic depolarizing.
    pub fn depolarizing_single_control() -> Result<Scenario> {
        scenario(
            "depolarizing_single_control",
            1,
            sigma("z"),
            &["y"],
            pauli_terms(&["x", "y", "z"], 1.0),
            4,
        )
    }

    /// Single qubit, drift σ_z, controls σ_x, σ_y, noise σ_y.
    pub fn y_noise_full_control() -> Result<Scenario> {
        scenario(
            "y_noise_full_control",
            1,
            sigma("z"),
            &["x", "y"],
            pauli_terms(&["y"], 1.0),
            9,
        )
    }

    pub fn named(name: &str) -> Result<Scenario> {
        match name {
            "local_control_depolarizing" => local_control_depolarizing(),
            "depolarizing_single_control" => depolarizing_single_control(),
            "y_noise_full_control" => y_noise_full_control(),
            _ => single_qubit()?
                .into_iter()
                .chain(two_qubit()?)
                .find(|s| s.name == name)
                .ok_or_else(|| Error::Invalid(format!("unknown scenario {name}"))),
        }
    }
}

/// The separating functional λ(g) = ⟨2σ̂_x² - σ̂_y², g⟩ used for the
/// single-qubit H-controllable example, with ⟨A, B⟩ = Re tr(A†B).
pub fn separating_functional(g: &CMat) -> f64 {
    let sx = hat(&sigma("x"));
    let sy = hat(&sigma("y"));
    let f = &sx * &sx * c(2.0, 0.0) - &sy * &sy;
    linalg::hs_re(&f, g)
}
