mod common;

use common::corpus::{c2, corpus};
use latori::classify::{is_invertible, is_permutation, is_stably_permutation, SearchBounds, Status};
use latori::isomorphism::{lattices_isomorphic, Isomorphism};
use latori::lattice::is_equivariant;
use latori::{is_coflabby, is_flabby, GLattice, IntMatrix, Mode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Conjugates the action by a random product of elementary matrices.
fn scramble(m: &GLattice, rng: &mut ChaCha8Rng) -> (GLattice, IntMatrix) {
    let n = m.rank();
    let mut p = IntMatrix::identity(n);
    let mut pinv = IntMatrix::identity(n);
    if n > 1 {
        for _ in 0..4 {
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            let k: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
            let mut e = IntMatrix::identity(n);
            e[(i, j)] = k.into();
            let mut einv = IntMatrix::identity(n);
            einv[(i, j)] = (-k).into();
            p = &p * &e;
            pinv = &einv * &pinv;
        }
    }
    let images: Vec<IntMatrix> = m
        .group()
        .generator_indices()
        .iter()
        .map(|&g| &(&pinv * m.action(g)) * &p)
        .collect();
    (GLattice::from_generator_images(m.group().clone(), n, &images).unwrap(), p)
}

#[test]
fn implication_chain_and_certificates() {
    for e in corpus() {
        let m = &e.lattice;
        let b = SearchBounds::default_for(m);
        let p = is_permutation(m, &b).unwrap();
        let s = is_stably_permutation(m, &b).unwrap();
        let i = is_invertible(m, &b).unwrap();
        let fl = is_flabby(m, Mode::Strict).unwrap();
        let cofl = is_coflabby(m, Mode::Strict).unwrap();
        assert!(p.verify(m) && s.verify(m) && i.verify(m), "{}", e.name);
        if p.status == Status::Yes {
            assert_eq!(s.status, Status::Yes, "{}", e.name);
        }
        if s.status == Status::Yes {
            assert_ne!(i.status, Status::No, "{}", e.name);
        }
        if i.status != Status::No {
            assert!(fl && cofl, "{}", e.name);
        }
        if e.permutation {
            assert_eq!(p.status, Status::Yes, "{}", e.name);
        }
    }
}

#[test]
fn verdicts_invariant_under_basis_change() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for e in corpus() {
        let m = &e.lattice;
        let (n, p) = scramble(m, &mut rng);
        assert!(is_equivariant(&p, &n, m), "{}", e.name);
        let b = SearchBounds::default_for(m);
        assert_eq!(is_permutation(m, &b).unwrap().status, is_permutation(&n, &b).unwrap().status, "{}", e.name);
        assert_eq!(
            is_stably_permutation(m, &b).unwrap().status,
            is_stably_permutation(&n, &b).unwrap().status,
            "{}",
            e.name
        );
        assert_eq!(is_invertible(m, &b).unwrap().status, is_invertible(&n, &b).unwrap().status, "{}", e.name);
        assert!(matches!(lattices_isomorphic(m, &n, 3).unwrap(), Isomorphism::Yes(_)), "{}", e.name);
    }
}

#[test]
fn paper_literal_mode_only_looks_at_the_whole_group() {
    let g = c2();
    let sign = GLattice::natural(g.clone());
    assert!(!is_flabby(&sign, Mode::PaperLiteral).unwrap());
    let v4 = common::corpus::v4();
    // sign character of V₄ trivial on one factor
    let m = GLattice::from_generator_images(
        v4.clone(),
        1,
        &[IntMatrix::from_rows(&[[-1]]), IntMatrix::from_rows(&[[1]])],
    )
    .unwrap();
    let strict = is_coflabby(&m, Mode::Strict).unwrap();
    let literal = is_coflabby(&m, Mode::PaperLiteral).unwrap();
    assert!(!strict);
    assert_eq!(literal, latori::h1(&m).unwrap().is_trivial());
}

#[test]
fn product_of_sign_characters_is_stably_rational() {
    use latori::classify::{rationality_verdict, RationalityLevel, SearchOptions};
    let m = GLattice::natural(common::corpus::v4());
    let r = rationality_verdict(&m, &SearchOptions::default()).unwrap();
    assert_eq!(r.level, RationalityLevel::StablyRational);
}
