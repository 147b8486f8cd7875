#![allow(dead_code)]

pub mod corpus;
pub mod linalg_check;
pub mod oracle;

use latori::{FiniteAbelianGroup, GLattice, IntMatrix, Subgroup};
use num_traits::ToPrimitive;

pub fn to_mat(m: &IntMatrix) -> oracle::Mat {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| x.to_i128().expect("fits i128")).collect())
        .collect()
}

/// The oracle's view of `m` restricted to `h`.
pub fn module_at(m: &GLattice, h: &Subgroup) -> oracle::Module {
    oracle::Module {
        elements: h.members().iter().map(|&g| to_mat(m.group().element(g))).collect(),
        action: h.members().iter().map(|&g| to_mat(m.action(g))).collect(),
        rank: m.rank(),
    }
}

pub fn module(m: &GLattice) -> oracle::Module {
    module_at(m, &m.group().whole())
}

/// `(free rank, invariant factors > 1)`.
pub fn factors(g: &FiniteAbelianGroup) -> (usize, Vec<i128>) {
    (g.free_rank(), g.torsion().iter().map(|d| d.to_i128().unwrap()).collect())
}
