//! Finite groups of unimodular integer matrices and their subgroups.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::OnceLock;

use num_traits::{Signed, One};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// Default bound on the group order accepted by [`FiniteMatrixGroup::close`].
pub const DEFAULT_ORDER_CAP: usize = 24;

/// A finite subgroup of `GL(n, ℤ)`, fully enumerated.
///
/// Element 0 is the identity. `mul(i, j)` is the index of
/// `elements[i] · elements[j]`.
#[derive(Debug)]
pub struct FiniteMatrixGroup {
    dim: usize,
    generators: Vec<IntMatrix>,
    generator_indices: Vec<usize>,
    elements: Vec<IntMatrix>,
    mul_table: Vec<usize>,
    inverse_table: Vec<usize>,
    subgroups: OnceLock<SubgroupLattice>,
}

impl PartialEq for FiniteMatrixGroup {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.elements == other.elements
    }
}

impl Eq for FiniteMatrixGroup {}

/// A subgroup, as a sorted set of element indices of the parent group.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, element: usize) -> bool {
        self.members.binary_search(&element).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }
}

/// All subgroups of a group with their conjugacy classes.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    /// Every subgroup once, sorted by `(order, members)`.
    pub subgroups: Vec<Subgroup>,
    /// `class_of[i]` is the position in `representatives` of the class of `subgroups[i]`.
    pub class_of: Vec<usize>,
    /// Indices into `subgroups` of one representative per conjugacy class
    /// (the first member of the class in sorted order).
    pub representatives: Vec<usize>,
}

fn sort_key(m: &IntMatrix) -> Vec<num_bigint::BigInt> {
    m.entries().to_vec()
}

impl FiniteMatrixGroup {
    /// Closes `generators` under multiplication (breadth first from the
    /// identity, generators taken in sorted order).
    pub fn close(dim: usize, generators: &[IntMatrix], cap: usize) -> Result<Self> {
        for (index, g) in generators.iter().enumerate() {
            if g.rows() != dim || g.cols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "generator {} is {}x{}, expected {}x{}",
                    index,
                    g.rows(),
                    g.cols(),
                    dim,
                    dim
                )));
            }
            let det = g.determinant();
            if !det.abs().is_one() {
                return Err(Error::NotInvertible {
                    index,
                    determinant: det.to_string(),
                });
            }
        }
        let mut gens = generators.to_vec();
        gens.sort_by_key(sort_key);
        gens.dedup();

        let mut elements = vec![IntMatrix::identity(dim)];
        let mut index: HashMap<IntMatrix, usize> = HashMap::new();
        index.insert(elements[0].clone(), 0);
        let mut cursor = 0;
        while cursor < elements.len() {
            for g in &gens {
                let p = &elements[cursor] * g;
                if !index.contains_key(&p) {
                    if elements.len() == cap {
                        return Err(Error::OrderCapExceeded { cap });
                    }
                    index.insert(p.clone(), elements.len());
                    elements.push(p);
                }
            }
            cursor += 1;
        }
        let generator_indices = gens.iter().map(|g| index[g]).collect();
        Ok(Self::with_tables(dim, gens, generator_indices, elements, &index))
    }

    fn with_tables(
        dim: usize,
        generators: Vec<IntMatrix>,
        generator_indices: Vec<usize>,
        elements: Vec<IntMatrix>,
        index: &HashMap<IntMatrix, usize>,
    ) -> Self {
        let n = elements.len();
        let mut mul_table = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                mul_table[i * n + j] = index[&(&elements[i] * &elements[j])];
            }
        }
        let inverse_table = (0..n)
            .map(|i| {
                (0..n)
                    .find(|&j| mul_table[i * n + j] == 0)
                    .expect("closed finite group has inverses")
            })
            .collect();
        FiniteMatrixGroup {
            dim,
            generators,
            generator_indices,
            elements,
            mul_table,
            inverse_table,
            subgroups: OnceLock::new(),
        }
    }

    /// The subgroup `h` as a standalone group. Element `i` of the result is
    /// element `h.members()[i]` of `self`.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> FiniteMatrixGroup {
        let elements: Vec<IntMatrix> = h.members.iter().map(|&i| self.elements[i].clone()).collect();
        let index: HashMap<IntMatrix, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        // greedy generating set in member order
        let mut generator_indices = Vec::new();
        let mut spanned = Subgroup { members: vec![0] };
        for &m in &h.members {
            if !spanned.contains(m) {
                generator_indices.push(m);
                spanned = self.generate(&generator_indices);
            }
        }
        let generators = generator_indices.iter().map(|&i| self.elements[i].clone()).collect();
        let local = generator_indices
            .iter()
            .map(|i| h.members.binary_search(i).unwrap())
            .collect();
        Self::with_tables(self.dim, generators, local, elements, &index)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[IntMatrix] {
        &self.generators
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generator_indices
    }

    pub fn elements(&self) -> &[IntMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &IntMatrix {
        &self.elements[i]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul_table[a * self.elements.len() + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse_table[a]
    }

    pub fn index_of(&self, m: &IntMatrix) -> Option<usize> {
        self.elements.iter().position(|e| e == m)
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            members: (0..self.order()).collect(),
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { members: vec![0] }
    }

    /// Subgroup generated by the given element indices.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut seen: BTreeSet<usize> = BTreeSet::from([0]);
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Subgroup {
            members: seen.into_iter().collect(),
        }
    }

    /// Checks that `members` is a subgroup and wraps it.
    pub fn subgroup(&self, members: &[usize]) -> Option<Subgroup> {
        let mut m = members.to_vec();
        m.sort_unstable();
        m.dedup();
        if m.first() != Some(&0) || m.iter().any(|&x| x >= self.order()) {
            return None;
        }
        let s = Subgroup { members: m };
        let closed = s
            .members
            .iter()
            .all(|&a| s.contains(self.inverse(a)) && s.members.iter().all(|&b| s.contains(self.mul(a, b))));
        closed.then_some(s)
    }

    pub fn conjugate(&self, h: &Subgroup, g: usize) -> Subgroup {
        let gi = self.inverse(g);
        let mut members: Vec<usize> = h.members.iter().map(|&x| self.mul(self.mul(g, x), gi)).collect();
        members.sort_unstable();
        Subgroup { members }
    }

    /// All subgroups, computed once: cyclic subgroups first, then closed under
    /// pairwise joins until nothing new appears.
    pub fn subgroup_lattice(&self) -> &SubgroupLattice {
        self.subgroups.get_or_init(|| self.compute_subgroup_lattice())
    }

    fn compute_subgroup_lattice(&self) -> SubgroupLattice {
        let mut all: BTreeSet<Subgroup> = (0..self.order()).map(|g| self.generate(&[g])).collect();
        let mut frontier: Vec<Subgroup> = all.iter().cloned().collect();
        while !frontier.is_empty() {
            let current: Vec<Subgroup> = all.iter().cloned().collect();
            let mut next = Vec::new();
            for a in &frontier {
                for b in &current {
                    let mut gens = a.members.clone();
                    gens.extend_from_slice(&b.members);
                    let j = self.generate(&gens);
                    if !all.contains(&j) {
                        all.insert(j.clone());
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        let mut subgroups: Vec<Subgroup> = all.into_iter().collect();
        subgroups.sort_by(|a, b| (a.order(), &a.members).cmp(&(b.order(), &b.members)));

        let position: HashMap<&Subgroup, usize> =
            subgroups.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut class_of = vec![usize::MAX; subgroups.len()];
        let mut representatives = Vec::new();
        for i in 0..subgroups.len() {
            if class_of[i] != usize::MAX {
                continue;
            }
            let class = representatives.len();
            representatives.push(i);
            for g in 0..self.order() {
                let c = self.conjugate(&subgroups[i], g);
                class_of[position[&c]] = class;
            }
        }
        SubgroupLattice {
            subgroups,
            class_of,
            representatives,
        }
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroup_lattice().subgroups
    }

    /// One subgroup per conjugacy class, in sorted subgroup order.
    pub fn class_representatives(&self) -> Vec<Subgroup> {
        let lat = self.subgroup_lattice();
        lat.representatives.iter().map(|&i| lat.subgroups[i].clone()).collect()
    }

    /// The conjugacy-class representative of `h`.
    pub fn representative_of(&self, h: &Subgroup) -> Subgroup {
        let lat = self.subgroup_lattice();
        let i = lat
            .subgroups
            .iter()
            .position(|s| s == h)
            .expect("not a subgroup of this group");
        lat.subgroups[lat.representatives[lat.class_of[i]]].clone()
    }

    /// Left cosets `gK` ordered by their minimal element index. Each coset is
    /// listed with its minimal element first.
    pub fn left_cosets(&self, k: &Subgroup) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.order()];
        let mut cosets = Vec::new();
        for g in 0..self.order() {
            if assigned[g] {
                continue;
            }
            let mut coset: Vec<usize> = k.members.iter().map(|&x| self.mul(g, x)).collect();
            coset.sort_unstable();
            for &x in &coset {
                assigned[x] = true;
            }
            cosets.push(coset);
        }
        cosets
    }

    /// Number of `H`-orbits on `G/K`, i.e. the number of double cosets `H\G/K`.
    pub fn double_coset_count(&self, h: &Subgroup, k: &Subgroup) -> usize {
        let cosets = self.left_cosets(k);
        let mut coset_of = vec![0; self.order()];
        for (c, members) in cosets.iter().enumerate() {
            for &x in members {
                coset_of[x] = c;
            }
        }
        let mut seen = vec![false; cosets.len()];
        let mut orbits = 0;
        for c in 0..cosets.len() {
            if seen[c] {
                continue;
            }
            orbits += 1;
            let rep = cosets[c][0];
            for &x in &h.members {
                seen[coset_of[self.mul(x, rep)]] = true;
            }
        }
        orbits
    }
}
