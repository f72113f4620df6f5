// Copyright 2026 Lindkit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite. Each test prints one `PASS`/`FAIL` line for its
//! criterion, then asserts it. Tests hold a shared lock so the timing
//! budgets are measured without contention.

mod common;

use std::io::Write;
use std::sync::Mutex;
use std::time::Instant;

use common::*;
use lindkit::engineering::{self, builtin, MixedVariant, PureOptions};
use lindkit::evolution::{self, random_density};
use lindkit::fixed_points::{kernel_fixed_points, uniqueness_certificate, DensityMatrix, Uniqueness};
use lindkit::linalg::{self, c, frob, CMat, CVec, I};
use lindkit::lk_algebra::{self, chi_projection, tau_from_preimage, translation_tau};
use lindkit::pauli::{self, star_preimages, traceless_strings, SignedPauliString, XGroupElement};
use lindkit::superop::{self, build_lindbladian, dissipator, translation_directions_of, GeneratorSpec, LindbladTerm};
use lindkit::wedge::{self, battery, inner_approximation, semialgebra_test, ControlSystem, WedgeOptions};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

static LOCK: Mutex<()> = Mutex::new(());

// Tolerances.
const TOL_TABLE: f64 = 1e-12;
const TOL_CHI: f64 = 1e-10;
const TOL_TRANSLATION_REL: f64 = 1e-8;
const TOL_FIDELITY: f64 = 1e-6;
const TOL_RESIDUAL: f64 = 1e-10;
const TOL_FIXED: f64 = 1e-10;
const TOL_PROP: f64 = 1e-9;
const TOL_CANONICAL: f64 = 1e-12;
const PROPERTY_CASES: u32 = 128;

fn report(k: usize, what: &str, ok: bool, detail: String) {
    // Written to the raw handle so the line shows without --nocapture.
    let line = format!("{} criterion {k}: {what} ({detail})\n", if ok { "PASS" } else { "FAIL" });
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).ok();
    out.flush().ok();
    assert!(ok, "criterion {k} failed: {detail}");
}

fn serial() -> std::sync::MutexGuard<'static, ()> {
    LOCK.lock().unwrap_or_else(|e| e.into_inner())
}

fn sp(s: &str) -> SignedPauliString {
    SignedPauliString::p(s)
}

fn lindbladian(n: usize, terms: &[LindbladTerm]) -> superop::Superoperator {
    let spec = GeneratorSpec::dissipative(n, terms.to_vec()).unwrap();
    build_lindbladian(&spec, &[]).unwrap()
}

/// Converges from `count` seeded random states; returns (all ok, worst
/// fidelity, latest time used).
fn converge_from_random(
    terms: &[LindbladTerm],
    n: usize,
    target: &DensityMatrix,
    count: usize,
    seed: u64,
) -> (bool, f64, f64) {
    let gamma = terms.iter().map(|t| t.rate).fold(f64::INFINITY, f64::min);
    let t_max = 100.0 / gamma;
    let l = lindbladian(n, terms);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = true;
    let mut worst: f64 = 1.0;
    let mut latest: f64 = 0.0;
    for _ in 0..count {
        let rho0 = random_density(1 << n, &mut rng);
        let conv = evolution::converge(&l, rho0.matrix(), target, TOL_FIDELITY, 0.5, t_max).unwrap();
        ok &= conv.converged && conv.t_final <= t_max;
        worst = worst.min(conv.fidelity);
        latest = latest.max(conv.t_final);
    }
    (ok, worst, latest)
}

/// Σ_k V ρ V† - ½{V†V, ρ}, the action -Γ(ρ), written out directly.
fn lindblad_action(terms: &[LindbladTerm], rho: &CMat) -> CMat {
    let mut acc = CMat::zeros(rho.nrows(), rho.ncols());
    for t in terms {
        let v = &t.matrix;
        let vdv = v.adjoint() * v;
        acc += v * rho * v.adjoint() - (&vdv * rho + rho * &vdv) * c(0.5, 0.0);
    }
    acc
}

fn cosine(a: &CMat, b: &CMat) -> f64 {
    linalg::hs(a, b).norm() / (frob(a) * frob(b))
}

#[test]
fn criterion_01_algebra_dimensions() {
    let _g = serial();
    let mut ok = true;
    let mut parts = Vec::new();
    for (label, want, f) in [
        (
            "unital n=1",
            9usize,
            (|| lk_algebra::unital_basis(1)) as fn() -> lindkit::Result<lk_algebra::OperatorBasis>,
        ),
        ("unital n=2", 225, || lk_algebra::unital_basis(2)),
        ("full n=1", 12, || lk_algebra::lk_basis(1)),
    ] {
        let t0 = Instant::now();
        let dim = f().unwrap().dim();
        let secs = t0.elapsed().as_secs_f64();
        ok &= dim == want && secs < 1.0;
        parts.push(format!("{label}: {dim} in {secs:.2}s"));
    }
    report(1, "algebra dimensions 9/225/12", ok, parts.join(", "));
}

#[test]
fn criterion_02_star_degeneracy() {
    let _g = serial();
    let t0 = Instant::now();
    let mut ok = true;
    for n in 1..=3 {
        let all = pauli::basis_strings(n);
        let dense: Vec<CMat> = all.iter().map(|p| pauli::dense_matrix(p).unwrap()).collect();
        let want = 4usize.pow(n as u32 - 1);
        for m in traceless_strings(n) {
            let pre = star_preimages(&m).unwrap();
            // Oracle: ordered pairs with σ_p σ_q = iσ_m, by dense products.
            let target = pauli::dense_matrix(&m).unwrap() * I;
            let count = (0..all.len())
                .flat_map(|a| (0..all.len()).map(move |b| (a, b)))
                .filter(|&(a, b)| frob(&(&dense[a] * &dense[b] - &target)) < 1e-12)
                .count();
            ok &= pre.len() == want && count == want;
            ok &= pre.iter().all(|(p, q)| pauli::star_product(p, q).unwrap() == m);
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    ok &= secs < 5.0;
    report(2, "|S_m| = 4^(n-1) for n = 1..3", ok, format!("{secs:.2}s"));
}

#[test]
fn criterion_03_commutation_tables() {
    let _g = serial();
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for t in commutation_tables() {
        let d = table_deviation(&t);
        worst = worst.max(d);
        parts.push(format!("{} {:.1e}", t.name, d));
    }
    // The library's σ̂ and σ̂⁺ must agree with the fixture construction.
    for a in ['x', 'y', 'z'] {
        let s = sp(&a.to_string());
        worst = worst.max(frob(&(superop::hat_sigma(&s).unwrap() - hat1(a))));
        worst = worst.max(frob(&(superop::hat_sigma_plus(&s).unwrap() - hat1_plus(a))));
    }
    let secs = t0.elapsed().as_secs_f64();
    report(
        3,
        "single-qubit commutation tables",
        worst < TOL_TABLE && secs < 1.0,
        format!("{}; {secs:.3}s", parts.join(", ")),
    );
}

#[test]
fn criterion_04_chi_and_tau() {
    let _g = serial();
    let n = 2;
    let mut worst: f64 = 0.0;
    // χ² = χ on every quasi-translation.
    for m in traceless_strings(n) {
        for (p, q) in star_preimages(&m).unwrap() {
            let quasi = superop::hat_sigma(&q).unwrap() * superop::hat_sigma_plus(&p).unwrap() * I;
            let once = chi_projection(&quasi).unwrap();
            let twice = chi_projection(&once).unwrap();
            worst = worst.max(frob(&(&twice - &once)));
        }
    }
    let idempotent = worst;
    // χ vanishes on the unital algebra.
    let mut unital: f64 = 0.0;
    for a in lk_algebra::unital_basis(n).unwrap().elements() {
        unital = unital.max(frob(&chi_projection(a).unwrap()) / frob(a));
    }
    let one = superop::vec(&linalg::identity(4));
    let mut shift: f64 = 0.0;
    let mut indep: f64 = 0.0;
    let mut product: f64 = 0.0;
    for m in traceless_strings(n) {
        let tau = translation_tau(&m).unwrap();
        let want = superop::vec(&pauli::dense_matrix(&m).unwrap());
        shift = shift.max(frob(&(&tau * &one - want)));
        for (p, q) in star_preimages(&m).unwrap() {
            indep = indep.max(frob(&(tau_from_preimage(&p, &q).unwrap() - &tau)));
        }
        // Local product form: τ_(ab) = τ_(a,1) τ_(b,2), τ_(1,...) acting trivially.
        let s = m.to_string();
        let axes: Vec<char> = s.chars().collect();
        let mut local = CMat::identity(16, 16);
        for (k, a) in axes.iter().enumerate() {
            if *a != '1' {
                local *= local_tau(n, k, *a);
            }
        }
        if !axes.contains(&'1') {
            product = product.max(frob(&(local - &tau)));
        }
    }
    let ok = idempotent < TOL_CHI && unital < TOL_CHI && shift < TOL_CHI && indep < TOL_CHI && product < TOL_CHI;
    report(
        4,
        "chi projection and translation operators",
        ok,
        format!("chi^2-chi {idempotent:.1e}, chi(unital) {unital:.1e}, tau(1) {shift:.1e}, preimages {indep:.1e}, product {product:.1e}"),
    );
}

fn coefficient_map(terms: &[LindbladTerm]) -> Vec<(String, f64)> {
    translation_directions_of(terms)
        .unwrap()
        .into_iter()
        .map(|d| (d.direction.to_string(), d.coefficient))
        .collect()
}

/// Relative deviation of `got` from `scale * want`, with `scale` fitted on
/// the first entry of `want`; unlisted directions count against it.
fn pattern_deviation(got: &[(String, f64)], want: &[(&str, f64)]) -> f64 {
    let find = |m: &str| got.iter().find(|(d, _)| d == m).map(|(_, v)| *v).unwrap_or(0.0);
    let scale = find(want[0].0) / want[0].1;
    if scale <= 0.0 {
        return f64::INFINITY;
    }
    let mut dev: f64 = 0.0;
    for (m, w) in want {
        dev = dev.max((find(m) - scale * w).abs() / (scale * w.abs()));
    }
    for (d, v) in got {
        if !want.iter().any(|(m, _)| m == d) {
            dev = dev.max(v.abs() / scale);
        }
    }
    dev
}

#[test]
fn criterion_05_translation_extraction() {
    let _g = serial();
    let bell = engineering::conjugate_solution(&builtin::ground(2).unwrap(), &builtin::bell_rotation()).unwrap();
    let bell_dirs = coefficient_map(&bell.terms);
    let bell_dev = pattern_deviation(&bell_dirs, &[("xx", 1.0), ("yy", -1.0)]);
    let ghz = engineering::conjugate_solution(&builtin::ground(3).unwrap(), &builtin::ghz3_rotation()).unwrap();
    let ghz_dirs = coefficient_map(&ghz.terms);
    let ghz_dev = pattern_deviation(
        &ghz_dirs,
        &[
            ("xxx", 0.75),
            ("zzz", -0.75),
            ("xyy", -0.75),
            ("yyx", -0.75),
            ("yxy", -0.75),
            ("11z", 0.25),
            ("1z1", 0.25),
            ("z11", 0.25),
        ],
    );
    let ok =
        bell_dev < TOL_TRANSLATION_REL && ghz_dev < TOL_TRANSLATION_REL && bell_dirs.len() == 2 && ghz_dirs.len() == 8;
    report(
        5,
        "translation directions of rotated ground-state sets",
        ok,
        format!("bell {bell_dirs:?} dev {bell_dev:.1e}; ghz3 dev {ghz_dev:.1e}"),
    );
}

#[test]
fn criterion_06_ghz3() {
    let _g = serial();
    let t0 = Instant::now();
    let sets = builtin::ghz3_sets('1').unwrap();
    let sol = &sets[2];
    let target = DensityMatrix::pure(&engineering::ghz_state(3)).unwrap();
    let (conv, worst, latest) = converge_from_random(&sol.terms, 3, &target, 5, 0x6a3);
    let secs = t0.elapsed().as_secs_f64();
    let ok = sol.is_unique() && conv && secs < 30.0;
    report(
        6,
        "GHZ3 third set unique and convergent",
        ok,
        format!(
            "unique {}, worst fidelity {worst:.9}, t {latest}, {secs:.2}s",
            sol.is_unique()
        ),
    );
}

fn dichotomy_terms(second: bool) -> Vec<LindbladTerm> {
    let s = pauli::sigma;
    let v1 = s("x1") + s("y1") * I;
    let v2 = if second {
        s("1x") + s("zy") * I
    } else {
        s("x1") + s("yz") * I
    };
    vec![LindbladTerm::raw(v1), LindbladTerm::raw(v2)]
}

#[test]
fn criterion_07_dichotomy() {
    let _g = serial();
    let target = DensityMatrix::pure(&engineering::basis_state(2, 0)).unwrap();
    let a = dichotomy_terms(false);
    let ra = uniqueness_certificate(&a, &target).unwrap();
    let expect = CMat::from_diagonal(&CVec::from_vec(vec![
        c(0.0, 0.0),
        c(0.5, 0.0),
        c(0.0, 0.0),
        c(0.5, 0.0),
    ]));
    let (witness_dev, residual) = match &ra.witness_state {
        Some(w) => (frob(&(w.matrix() - &expect)), frob(&lindblad_action(&a, w.matrix()))),
        None => (f64::INFINITY, f64::INFINITY),
    };
    let residual_expect = frob(&lindblad_action(&a, &expect));
    let b = dichotomy_terms(true);
    let rb = uniqueness_certificate(&b, &target).unwrap();
    let ok = ra.unique == Uniqueness::No
        && witness_dev < TOL_RESIDUAL
        && residual < TOL_RESIDUAL
        && residual_expect < TOL_RESIDUAL
        && rb.unique == Uniqueness::Yes;
    report(
        7,
        "two-qubit example dichotomy",
        ok,
        format!(
            "first {:?} witness dev {witness_dev:.1e} residual {residual:.1e}; second {:?}",
            ra.unique, rb.unique
        ),
    );
}

#[test]
fn criterion_08_w3() {
    let _g = serial();
    let sol = builtin::w(3, &PureOptions::default()).unwrap();
    let psi = engineering::w_state(3);
    let target = DensityMatrix::pure(&psi).unwrap();
    let k = kernel_fixed_points(&dissipator(&sol.terms)).unwrap();
    let align = k.basis.first().map(|b| cosine(b, target.matrix())).unwrap_or(0.0);
    let (conv, worst, latest) = converge_from_random(&sol.terms, 3, &target, 5, 0x3e);
    let ok = k.dim() == 1 && (1.0 - align) < TOL_FIXED && conv;
    report(
        8,
        "W3 kernel and convergence",
        ok,
        format!(
            "kernel dim {}, alignment {align:.12}, worst fidelity {worst:.9}, t {latest}",
            k.dim()
        ),
    );
}

#[test]
fn criterion_09_toric_code() {
    let _g = serial();
    let t0 = Instant::now();
    let (stars, plaqs) = engineering::toric_code_stabilizers(2).unwrap();
    let d = 256;
    let mut sum = CMat::zeros(d, d);
    for s in stars.iter().chain(plaqs.iter()) {
        sum += (CMat::identity(d, d) - pauli::dense_matrix(s).unwrap()) * c(2.0, 0.0);
    }
    let null = linalg::null_space(&sum, 1e-9).ncols();
    let lib = builtin::toric().unwrap().certificate.dark_space.dim();
    let secs = t0.elapsed().as_secs_f64();
    report(
        9,
        "toric code L = 2 dark space",
        null == 4 && lib == 4 && secs < 10.0,
        format!("null space {null}, engineered dark space {lib}, {secs:.2}s"),
    );
}

#[test]
fn criterion_10_mixed_states() {
    let _g = serial();
    let mut worst6: f64 = 0.0;
    for (g1, g2) in [(0.3, 1.0), (1.0, 1.0), (2.5, 0.4), (0.05, 7.0)] {
        let lower = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let terms = vec![
            LindbladTerm::raw(&lower * c(f64::sqrt(g1), 0.0)),
            LindbladTerm::raw(lower.adjoint() * c(f64::sqrt(g2), 0.0)),
        ];
        let k = kernel_fixed_points(&dissipator(&terms)).unwrap();
        let want = CMat::from_diagonal(&CVec::from_vec(vec![c(g2, 0.0), c(g1, 0.0)])) / c(g1 + g2, 0.0);
        let got = k
            .representative
            .as_ref()
            .map(|r| r.matrix().clone())
            .unwrap_or_else(|| CMat::zeros(2, 2));
        worst6 = worst6.max(frob(&(got - want)));
        worst6 = worst6.max(if k.dim() == 1 { 0.0 } else { 1.0 });
    }
    let mut kernels = Vec::new();
    let mut ok = worst6 < TOL_FIXED;
    for (lambda, variant) in [
        (vec![0.7, 0.3], MixedVariant::FullRank),
        (vec![0.1, 0.2, 0.3, 0.4], MixedVariant::FullRank),
        (vec![0.25, 0.75, 0.0, 0.0], MixedVariant::Compressed),
    ] {
        let sol = engineering::engineer_mixed(&lambda, variant).unwrap();
        let k = kernel_fixed_points(&dissipator(&sol.terms)).unwrap();
        let target = CMat::from_diagonal(&CVec::from_vec(lambda.iter().map(|&l| c(l, 0.0)).collect()));
        let align = k.basis.first().map(|b| cosine(b, &target)).unwrap_or(0.0);
        ok &= k.dim() == 1 && 1.0 - align < TOL_FIXED;
        kernels.push(format!("{lambda:?}: dim {} align {align:.12}", k.dim()));
    }
    report(
        10,
        "mixed-state fixed points",
        ok,
        format!("single-qubit dev {worst6:.1e}; {}", kernels.join("; ")),
    );
}

#[test]
fn criterion_11_wedge_tables() {
    let _g = serial();
    let opts = WedgeOptions::default();
    let single = wedge::wedge_tables(&battery::single_qubit().unwrap(), &opts).unwrap();
    let t0 = Instant::now();
    let two = wedge::wedge_tables(&battery::two_qubit().unwrap(), &opts).unwrap();
    let secs = t0.elapsed().as_secs_f64();
    let mut ok = secs < 300.0;
    let mut parts = Vec::new();
    for row in single.iter().chain(two.iter()) {
        ok &= row.matches();
        let want = row.expected_span.map_or("-".to_string(), |e| e.to_string());
        let mark = if row.matches() { "" } else { " MISMATCH" };
        parts.push(format!("{} {}/{}{}", row.scenario, row.span_dim, want, mark));
    }
    report(
        11,
        "wedge span dimensions",
        ok,
        format!("{}; n=2 rows {secs:.1}s", parts.join(", ")),
    );
}

#[test]
fn criterion_12_semialgebra() {
    let _g = serial();
    let opts = WedgeOptions::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, want) in [
        ("local_control_depolarizing", true),
        ("depolarizing_single_control", false),
        ("y_noise_full_control", false),
    ] {
        let s = battery::named(name).unwrap();
        let sys = ControlSystem::new(s.spec.clone(), lk_algebra::default_cap(s.spec.n)).unwrap();
        let verdict = semialgebra_test(&sys).is_semialgebra;
        let span = inner_approximation(&sys, &opts).unwrap().span_dim;
        let by_span = span == sys.kc().dim() + 1;
        ok &= verdict == want && by_span == want;
        parts.push(format!(
            "{name}: commutator {verdict}, span {span} vs dim k_c {}",
            sys.kc().dim()
        ));
    }
    report(12, "semialgebra verdicts", ok, parts.join("; "));
}

fn run_property<S, F>(label: &str, strategy: S, f: F) -> std::result::Result<(), String>
where
    S: Strategy,
    S::Value: std::fmt::Debug,
    F: Fn(S::Value) -> std::result::Result<(), TestCaseError>,
{
    let mut config = Config::with_cases(PROPERTY_CASES);
    config.failure_persistence = None;
    let mut runner = TestRunner::new_with_rng(
        config,
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    runner.run(&strategy, f).map_err(|e| format!("{label}: {e}"))
}

fn propagator_for(seed: u64, n: usize, t: f64) -> CMat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = build_lindbladian(&random_spec(&mut rng, n), &[]).unwrap();
    evolution::propagator(&l, t).unwrap()
}

fn prop_trace(args: (u64, usize, f64)) -> std::result::Result<(), TestCaseError> {
    let (seed, n, t) = args;
    let prop = propagator_for(seed, n, t);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
    let rho = random_density(1 << n, &mut rng);
    let out = superop::unvec(&(&prop * superop::vec(rho.matrix())));
    prop_assert!((linalg::trace(&out) - c(1.0, 0.0)).norm() < TOL_PROP);
    Ok(())
}

fn prop_hermitian(args: (u64, usize, f64)) -> std::result::Result<(), TestCaseError> {
    let (seed, n, t) = args;
    let prop = propagator_for(seed, n, t);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5a5);
    let x = random_hermitian(&mut rng, 1 << n, 1.0);
    let out = superop::unvec(&(&prop * superop::vec(&x)));
    prop_assert!(frob(&(&out - out.adjoint())) < TOL_PROP * frob(&x).max(1.0));
    Ok(())
}

fn prop_choi(args: (u64, usize, f64)) -> std::result::Result<(), TestCaseError> {
    let (seed, n, t) = args;
    let prop = propagator_for(seed, n, t);
    let oracle = choi_by_reshuffle(&prop);
    let lib = evolution::choi(&prop).unwrap();
    prop_assert!(frob(&(&oracle - &lib)) < TOL_PROP * frob(&oracle));
    prop_assert!(linalg::min_eigenvalue_hermitian(&linalg::symmetrize(&oracle)) > -TOL_PROP);
    Ok(())
}

fn prop_semigroup(args: (u64, usize, f64, f64)) -> std::result::Result<(), TestCaseError> {
    let (seed, n, s, t) = args;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = build_lindbladian(&random_spec(&mut rng, n), &[]).unwrap();
    let whole = evolution::propagator(&l, s + t).unwrap();
    let parts = evolution::propagator(&l, s).unwrap() * evolution::propagator(&l, t).unwrap();
    prop_assert!(frob(&(&whole - &parts)) < TOL_PROP * frob(&whole).max(1.0));
    Ok(())
}

/// (γ/2)(σ̂_p² + σ̂_q²) + iγ σ̂_p σ̂_q⁺ with σ̂ built from dense Pauli strings.
fn canonical_superop(p: &str, q: &str, gamma: f64) -> CMat {
    let one = CMat::identity(1 << p.len(), 1 << p.len());
    let (sp_, sq) = (pauli_string(p), pauli_string(q));
    let hat = |a: &CMat| (sandwich(a, &one) - sandwich(&one, a)) * c(0.5, 0.0);
    let hat_plus = |a: &CMat| (sandwich(a, &one) + sandwich(&one, a)) * c(0.5, 0.0);
    let (hp, hq) = (hat(&sp_), hat(&sq));
    (&hp * &hp + &hq * &hq) * c(gamma / 2.0, 0.0) + hp * hat_plus(&sq) * c(0.0, gamma)
}

fn prop_canonical_identity(gamma: f64) -> std::result::Result<(), TestCaseError> {
    for n in 1..=2 {
        for m in traceless_strings(n) {
            for (p, q) in star_preimages(&m).unwrap() {
                let term = LindbladTerm::canonical(&p, &q, gamma).unwrap();
                let got = dissipator(&[term]);
                let want = canonical_superop(&p.unsigned().to_string(), &q.unsigned().to_string(), gamma);
                prop_assert!(
                    frob(&(got - want)) < TOL_CANONICAL * gamma.max(1.0),
                    "m {m} p {p} q {q}"
                );
            }
        }
    }
    Ok(())
}

fn prop_nilpotent(args: (usize, u64)) -> std::result::Result<(), TestCaseError> {
    let (n, seed) = args;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let strings = traceless_strings(n);
    let m = &strings[rand::Rng::random_range(&mut rng, 0..strings.len())];
    let pre = star_preimages(m).unwrap();
    let (p, q) = &pre[rand::Rng::random_range(&mut rng, 0..pre.len())];
    let gamma = rand::Rng::random_range(&mut rng, 0.1..5.0);
    let v = LindbladTerm::canonical(p, q, gamma).unwrap().matrix;
    prop_assert!(frob(&(&v * &v)) < TOL_CANONICAL * gamma);
    // Generalised terms √γ G P_S are nilpotent exactly when G maps S off S.
    let dim = 1usize << n;
    let mask = rand::Rng::random_range(&mut rng, 1..dim);
    let support: Vec<usize> = (0..dim).filter(|_| rand::Rng::random_bool(&mut rng, 0.5)).collect();
    let g = XGroupElement::from_mask(n, mask);
    let w = LindbladTerm::generalized(&g, &support, gamma).unwrap().matrix;
    let qualifying = support.iter().all(|k| !support.contains(&(k ^ mask)));
    let sq = frob(&(&w * &w));
    if qualifying {
        prop_assert!(sq < TOL_CANONICAL * gamma);
    } else {
        prop_assert!(sq > 1e-6);
    }
    Ok(())
}

#[test]
fn criterion_13_property_suites() {
    let _g = serial();
    let t = || (any::<u64>(), 1usize..=2, 0.0f64..3.0);
    let results = [
        run_property("trace preservation", t(), prop_trace),
        run_property("hermiticity preservation", t(), prop_hermitian),
        run_property("choi positivity", (any::<u64>(), 1usize..=2, 0.01f64..3.0), prop_choi),
        run_property(
            "semigroup law",
            (any::<u64>(), 1usize..=2, 0.0f64..2.0, 0.0f64..2.0),
            prop_semigroup,
        ),
        run_property("canonical dissipator identity", 0.01f64..10.0, prop_canonical_identity),
        run_property("nilpotency", (1usize..=3, any::<u64>()), prop_nilpotent),
    ];
    let failures: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    report(
        13,
        "property suites",
        failures.is_empty(),
        format!("6 suites x {PROPERTY_CASES} cases; failures {failures:?}"),
    );
}
