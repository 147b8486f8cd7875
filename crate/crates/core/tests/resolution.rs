mod common;

use common::corpus::corpus;
use latori::classify::{SearchBounds, Status};
use latori::cohomology::tate_minus1_profile;
use latori::resolution::{flabby_class_obstruction, flabby_class_trivial, reduced_flabby_resolution};
use latori::cohomology::h1_profile;
use latori::{flabby_resolution, verify_resolution, GLattice, IntMatrix};

#[test]
fn every_corpus_resolution_verifies() {
    for e in corpus() {
        let r = flabby_resolution(&e.lattice).unwrap();
        assert!(verify_resolution(&r), "{}", e.name);
        assert!(tate_minus1_profile(&r.quotient).unwrap().is_trivial(), "{}", e.name);
        assert_eq!(r.middle.rank(), e.lattice.rank() + r.quotient.rank());
    }
}

#[test]
fn reduced_resolution_is_smaller_and_in_the_same_class() {
    for e in corpus() {
        let full = flabby_resolution(&e.lattice).unwrap();
        let r = reduced_flabby_resolution(&e.lattice).unwrap();
        assert!(verify_resolution(&r), "{}", e.name);
        assert!(r.middle.rank() <= full.middle.rank(), "{}", e.name);
        assert_eq!(h1_profile(&r.quotient).unwrap(), h1_profile(&full.quotient).unwrap(), "{}", e.name);
    }
}

#[test]
fn flabby_class_of_permutation_lattices_is_trivial() {
    for e in corpus().into_iter().filter(|e| e.permutation) {
        let f = flabby_resolution(&e.lattice).unwrap().quotient;
        assert!(flabby_class_obstruction(&e.lattice).unwrap().is_trivial(), "{}", e.name);
        let v = flabby_class_trivial(&e.lattice, &SearchBounds::default_for(&f)).unwrap();
        assert_eq!(v.status, Status::Yes, "{}", e.name);
        assert!(v.verify(&f), "{}", e.name);
    }
}

#[test]
fn obstruction_is_a_basis_invariant() {
    let m = latori::catalog::catalog_get("norm_one_V4").unwrap().character_lattice;
    let p = IntMatrix::from_rows(&[[1, 1, 0], [0, 1, 0], [0, 1, 1]]);
    let pinv = IntMatrix::from_rows(&[[1, -1, 0], [0, 1, 0], [0, -1, 1]]);
    assert!((&p * &pinv).is_identity());
    let images: Vec<IntMatrix> =
        m.group().generator_indices().iter().map(|&g| &(&pinv * m.action(g)) * &p).collect();
    let n = GLattice::from_generator_images(m.group().clone(), 3, &images).unwrap();
    assert_eq!(flabby_class_obstruction(&m).unwrap(), flabby_class_obstruction(&n).unwrap());
}
