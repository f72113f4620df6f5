// Copyright 2026 Lindkit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Randomized module invariants.

mod common;

use std::sync::OnceLock;

use common::*;
use lindkit::engineering::{self, builtin, PureOptions};
use lindkit::evolution;
use lindkit::fixed_points::dark_space_zero;
use lindkit::linalg::{self, c, frob, CMat, I};
use lindkit::lk_algebra::{self, translation_tau};
use lindkit::pauli::{self, SignedPauliString, XGroupElement};
use lindkit::superop::{self, build_lindbladian, dissipator, LindbladTerm};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn string(n: usize, idx: usize, negative: bool) -> SignedPauliString {
    let s = SignedPauliString::from_basis_index(n, idx % (1usize << (2 * n)));
    if negative {
        s.negated()
    } else {
        s
    }
}

fn phase(k: u8) -> linalg::C64 {
    [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][k as usize % 4]
}

fn ideal_fixture() -> &'static (lk_algebra::OperatorBasis, Vec<CMat>, lk_algebra::OperatorBasis) {
    static CELL: OnceLock<(lk_algebra::OperatorBasis, Vec<CMat>, lk_algebra::OperatorBasis)> = OnceLock::new();
    CELL.get_or_init(|| {
        let taus: Vec<CMat> = pauli::traceless_strings(2)
            .iter()
            .map(|m| translation_tau(m).unwrap())
            .collect();
        let ideal = lk_algebra::OperatorBasis::spanning(16, &taus);
        (lk_algebra::unital_basis(2).unwrap(), taus, ideal)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(128) })]

    #[test]
    fn string_product_matches_dense(n in 1usize..=3, a in any::<usize>(), b in any::<usize>(), sa in any::<bool>(), sb in any::<bool>()) {
        let (p, q) = (string(n, a, sa), string(n, b, sb));
        let prod = pauli::string_product(&p, &q).unwrap();
        let bare = SignedPauliString { axes: prod.axes.clone(), sign: 1 };
        let want = pauli::dense_matrix(&p).unwrap() * pauli::dense_matrix(&q).unwrap();
        let got = pauli::dense_matrix(&bare).unwrap() * phase(prod.phase);
        prop_assert!(frob(&(got - want)) < 1e-12);
        // Exactly one of commute / anticommute.
        prop_assert!(pauli::commutes(&p, &q).unwrap() != pauli::anticommutes(&p, &q).unwrap());
        let sq = pauli::string_product(&p, &p).unwrap();
        prop_assert_eq!(sq.phase, 0);
        prop_assert!(sq.axes.iter().all(|x| *x == pauli::PauliAxis::I));
    }

    #[test]
    fn star_product_sign_rule(n in 1usize..=3, a in any::<usize>(), b in any::<usize>()) {
        let (p, q) = (string(n, a, false), string(n, b, false));
        prop_assume!(pauli::anticommutes(&p, &q).unwrap());
        let m = pauli::star_product(&p, &q).unwrap();
        let want = pauli::dense_matrix(&p).unwrap() * pauli::dense_matrix(&q).unwrap();
        prop_assert!(frob(&(pauli::dense_matrix(&m).unwrap() * I - want)) < 1e-12);
    }

    #[test]
    fn xgroup_action_is_bijection(n in 1usize..=6, mask in any::<usize>()) {
        let g = XGroupElement::from_mask(n, mask % (1usize << n));
        let mut seen = vec![false; 1usize << n];
        for k in 0..(1usize << n) {
            let j = pauli::xgroup_action(&g, k).unwrap();
            prop_assert!(!seen[j]);
            seen[j] = true;
        }
    }

    #[test]
    fn vec_sandwich_identity(seed in any::<u64>(), n in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = 1usize << n;
        let (a, x, b) = (random_complex(&mut rng, d, 1.0), random_complex(&mut rng, d, 1.0), random_complex(&mut rng, d, 1.0));
        let lhs = superop::vec(&(&a * &x * &b));
        let rhs = linalg::kron(&b.transpose(), &a) * superop::vec(&x);
        prop_assert!(frob(&(lhs - rhs)) < 1e-12 * frob(&a) * frob(&x) * frob(&b));
        prop_assert!(frob(&(superop::unvec(&superop::vec(&x)) - x)) == 0.0);
    }

    #[test]
    fn generator_trace_annihilation(seed in any::<u64>(), n in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = build_lindbladian(&random_spec(&mut rng, n), &[]).unwrap();
        let v = CMat::from_fn(1usize << (2 * n), 1, |_, _| c(rand::Rng::random_range(&mut rng, -1.0..1.0), rand::Rng::random_range(&mut rng, -1.0..1.0)));
        let out = superop::unvec(&(&l.matrix * v));
        prop_assert!(linalg::trace(&out).norm() < 1e-10 * frob(&l.matrix));
    }

    #[test]
    fn traceless_dissipators_orthogonal_to_hamiltonians(seed in any::<u64>(), n in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = 1usize << n;
        let mut v = random_complex(&mut rng, d, 1.0);
        let tr = linalg::trace(&v) / c(d as f64, 0.0);
        for k in 0..d {
            v[(k, k)] -= tr;
        }
        let gamma = dissipator(&[LindbladTerm::raw(v)]);
        for m in pauli::traceless_strings(n) {
            let h = superop::i_ad(&pauli::dense_matrix(&m).unwrap());
            prop_assert!(linalg::hs(&h, &gamma).norm() < 1e-10 * frob(&gamma).max(1.0));
        }
    }

    #[test]
    fn translation_ideal(pick in any::<usize>(), m_idx in 1usize..16) {
        let (basis, taus, ideal) = ideal_fixture();
        let g = &basis.elements()[pick % basis.dim()];
        let tau = &taus[m_idx - 1];
        let br = linalg::commutator(g, tau);
        prop_assert!(frob(&(ideal.project(&br) - &br)) < 1e-8 * frob(g) * frob(tau));
    }

    #[test]
    fn p_choice_keeps_dark_space(n in 1usize..=3, m_idx in any::<usize>(), a in any::<usize>(), b in any::<usize>()) {
        let strings = pauli::traceless_strings(n);
        let m = &strings[m_idx % strings.len()];
        let pre = pauli::star_preimages(m).unwrap();
        let (p1, q1) = &pre[a % pre.len()];
        let (p2, q2) = &pre[b % pre.len()];
        let d1 = dark_space_zero(&[LindbladTerm::canonical(p1, q1, 1.0).unwrap()]);
        let d2 = dark_space_zero(&[LindbladTerm::canonical(p2, q2, 1.0).unwrap()]);
        prop_assert_eq!(d1.dim(), d2.dim());
        prop_assert!(frob(&(d1.projector() - d2.projector())) < 1e-10);
    }

    #[test]
    fn trajectory_trace_constant(seed in any::<u64>(), n in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = build_lindbladian(&random_spec(&mut rng, n), &[]).unwrap();
        let rho = evolution::random_density(1 << n, &mut rng);
        let times: Vec<f64> = (0..6).map(|k| 0.4 * k as f64).collect();
        let traj = evolution::trajectory(&l, rho.matrix(), &times, None).unwrap();
        for s in &traj.states {
            prop_assert!((linalg::trace(s) - c(1.0, 0.0)).norm() < 1e-10);
        }
    }
}

#[test]
fn c0_is_identity_on_traceless() {
    for n in 1..=2 {
        let c0 = lk_algebra::c0(n).unwrap();
        for m in pauli::traceless_strings(n) {
            let v = superop::vec(&pauli::dense_matrix(&m).unwrap());
            assert!(frob(&(&c0 * &v - &v)) < 1e-12);
        }
        let one = superop::vec(&linalg::identity(1 << n));
        assert!(frob(&(&c0 * one)) < 1e-12);
    }
}

#[test]
fn cartan_split_dimensions() {
    for n in 1..=2usize {
        let split = lk_algebra::cartan_split(&lk_algebra::unital_basis(n).unwrap());
        let d = 4usize.pow(n as u32);
        assert_eq!(split.k_part.dim(), (d - 1) * (d - 2) / 2);
        assert_eq!(split.p_part.dim(), d * (d - 1) / 2);
    }
}

#[test]
fn builtin_solutions_fix_their_targets() {
    let opts = PureOptions::default();
    let mut sets = vec![
        builtin::ground(3).unwrap(),
        builtin::ghz(3, &opts).unwrap(),
        builtin::w(3, &opts).unwrap(),
        builtin::w3_alternative().unwrap(),
    ];
    sets.extend(builtin::bell_sets().unwrap());
    for a in ['1', 'x', 'z'] {
        sets.extend(builtin::ghz3_sets(a).unwrap());
    }
    sets.push(engineering::engineer_mixed(&[0.1, 0.2, 0.3, 0.4], engineering::MixedVariant::FullRank).unwrap());
    for s in &sets {
        let target = s.target.as_ref().unwrap();
        let gamma = dissipator(&s.terms);
        assert!(frob(&(&gamma * superop::vec(target.matrix()))) < 1e-10);
        assert!(!s.certificate.certificates.is_empty());
    }
}

#[test]
fn canonical_terms_square_to_zero_exhaustively() {
    for n in 1..=2 {
        for m in pauli::traceless_strings(n) {
            for (p, q) in pauli::star_preimages(&m).unwrap() {
                let v = LindbladTerm::canonical(&p, &q, 1.0).unwrap().matrix;
                assert!(frob(&(&v * &v)) < 1e-12);
            }
        }
    }
}
