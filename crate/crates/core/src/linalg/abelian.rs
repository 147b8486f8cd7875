use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{snf, IntMatrix};

/// Finitely generated abelian group `ℤ^r ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/dₖ` in invariant-factor form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FiniteAbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Canonicalizes an arbitrary list of cyclic orders (zeros and units are
    /// dropped, negative orders taken in absolute value) into invariant factors.
    pub fn from_cyclic_orders(free_rank: usize, orders: &[BigInt]) -> Self {
        let mut factors: Vec<BigInt> = orders
            .iter()
            .map(|d| d.abs())
            .filter(|d| !d.is_zero() && !d.is_one())
            .collect();
        // Repeatedly replace (a, b) by (gcd, lcm) until the chain divides.
        let n = factors.len();
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (factors[i].clone(), factors[j].clone());
                factors[i] = a.gcd(&b);
                factors[j] = a.lcm(&b);
            }
        }
        factors.retain(|d| !d.is_one());
        FiniteAbelianGroup {
            free_rank,
            torsion: factors,
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.torsion.iter().fold(BigInt::one(), |acc, d| acc * d))
    }

    /// True when `n·x = 0` for every element.
    pub fn annihilated_by(&self, n: &BigInt) -> bool {
        self.free_rank == 0 && self.torsion.iter().all(|d| n.is_multiple_of(d))
    }

    /// Direct sum, re-canonicalized.
    pub fn direct_sum(&self, other: &FiniteAbelianGroup) -> Self {
        let orders: Vec<BigInt> = self.torsion.iter().chain(&other.torsion).cloned().collect();
        Self::from_cyclic_orders(self.free_rank + other.free_rank, &orders)
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{}", d)).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{}", r)),
        }
        write!(f, "{}", parts.join(" x "))
    }
}

impl Serialize for FiniteAbelianGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FiniteAbelianGroup", 3)?;
        st.serialize_field("text", &self.to_string())?;
        st.serialize_field("free_rank", &self.free_rank)?;
        let torsion: Vec<String> = self.torsion.iter().map(|d| d.to_string()).collect();
        st.serialize_field("torsion", &torsion)?;
        st.end()
    }
}

/// `ℤ^ambient_rank / span(columns of image_basis)` via Smith normal form.
pub fn cokernel(image_basis: &IntMatrix, ambient_rank: usize) -> FiniteAbelianGroup {
    assert_eq!(
        image_basis.rows(),
        ambient_rank,
        "image basis does not live in the ambient lattice"
    );
    let s = snf(image_basis);
    let diag = s.diagonal();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    FiniteAbelianGroup::from_cyclic_orders(ambient_rank - rank, &diag)
}
