//! Test lattices over C2, C3, C4, V4 and S3.

use std::sync::Arc;

use latori::catalog;
use latori::lattice::{coset_lattice, direct_sum, dual, permutation_lattice};
use latori::{FiniteMatrixGroup, GLattice, IntMatrix};

pub struct Entry {
    pub name: String,
    pub lattice: GLattice,
    /// Built as a sum of coset lattices.
    pub permutation: bool,
}

fn group(dim: usize, gens: &[IntMatrix]) -> Arc<FiniteMatrixGroup> {
    Arc::new(FiniteMatrixGroup::close(dim, gens, 24).unwrap())
}

pub fn c2() -> Arc<FiniteMatrixGroup> {
    group(1, &[IntMatrix::from_rows(&[[-1]])])
}

pub fn c3() -> Arc<FiniteMatrixGroup> {
    group(2, &[IntMatrix::from_rows(&[[0, -1], [1, -1]])])
}

pub fn c4() -> Arc<FiniteMatrixGroup> {
    group(2, &[IntMatrix::from_rows(&[[0, -1], [1, 0]])])
}

pub fn v4() -> Arc<FiniteMatrixGroup> {
    group(2, &[IntMatrix::diagonal(&[-1, 1]), IntMatrix::diagonal(&[1, -1])])
}

pub fn s3() -> Arc<FiniteMatrixGroup> {
    group(
        3,
        &[
            IntMatrix::from_rows(&[[0, 1, 0], [1, 0, 0], [0, 0, 1]]),
            IntMatrix::from_rows(&[[0, 0, 1], [1, 0, 0], [0, 1, 0]]),
        ],
    )
}

pub fn groups() -> Vec<(&'static str, Arc<FiniteMatrixGroup>)> {
    vec![("C2", c2()), ("C3", c3()), ("C4", c4()), ("V4", v4()), ("S3", s3())]
}

fn label(g: &FiniteMatrixGroup, hs: &[latori::Subgroup]) -> String {
    hs.iter()
        .map(|h| format!("Z[G/H{}]", g.class_representatives().iter().position(|r| r == h).unwrap()))
        .collect::<Vec<_>>()
        .join("+")
}

/// Coset lattices and pairwise sums of rank at most 6 for one group.
pub fn permutation_entries(name: &str, g: &Arc<FiniteMatrixGroup>) -> Vec<Entry> {
    let reps = g.class_representatives();
    let index = |h: &latori::Subgroup| g.order() / h.order();
    let mut out: Vec<Entry> = reps
        .iter()
        .map(|h| Entry {
            name: format!("{} {}", name, label(g, std::slice::from_ref(h))),
            lattice: coset_lattice(g, h),
            permutation: true,
        })
        .collect();
    for i in 0..reps.len() {
        for j in i..reps.len() {
            if index(&reps[i]) + index(&reps[j]) <= 6 {
                let hs = [reps[i].clone(), reps[j].clone()];
                out.push(Entry {
                    name: format!("{} {}", name, label(g, &hs)),
                    lattice: permutation_lattice(g, &hs),
                    permutation: true,
                });
            }
        }
    }
    out
}

/// Natural representations, their duals and a few sums with them.
pub fn other_entries(name: &str, g: &Arc<FiniteMatrixGroup>) -> Vec<Entry> {
    let nat = GLattice::natural(g.clone());
    let triv = GLattice::trivial(g.clone(), 1);
    let mut out = vec![
        Entry { name: format!("{} natural", name), lattice: nat.clone(), permutation: false },
        Entry { name: format!("{} natural dual", name), lattice: dual(&nat), permutation: false },
    ];
    if nat.rank() < 6 {
        out.push(Entry {
            name: format!("{} natural+Z", name),
            lattice: direct_sum(&nat, &triv).unwrap(),
            permutation: false,
        });
    }
    out
}

pub fn catalog_entries() -> Vec<Entry> {
    catalog::list()
        .into_iter()
        .map(|d| Entry { name: format!("catalog {}", d.name), lattice: d.character_lattice, permutation: false })
        .collect()
}

/// Everything: coset lattices and pairwise sums, natural lattices and the catalog.
pub fn corpus() -> Vec<Entry> {
    let mut out = Vec::new();
    for (name, g) in groups() {
        out.extend(permutation_entries(name, &g));
        out.extend(other_entries(name, &g));
    }
    let g = c2();
    out.push(Entry {
        name: "C2 skew [[1,2],[0,-1]]".into(),
        lattice: GLattice::from_generator_images(g.clone(), 2, &[IntMatrix::from_rows(&[[1, 2], [0, -1]])]).unwrap(),
        permutation: false,
    });
    out.extend(catalog_entries());
    out
}
