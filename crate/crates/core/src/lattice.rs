//! Full-rank sublattices of `Z^3` in the `([a,b], [a,b,a], [a,b,b])` exponent
//! coordinates, kept in upper-triangular Hermite form.

use thiserror::Error;

/// An integer triple `(t, u, v)`.
pub type Triple = [i64; 3];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("infinite commutator block: generators span a rank-{rank} sublattice of Z^3")]
    InfiniteCommutatorBlock { rank: usize },
}

/// A finite-index sublattice of `Z^3`.
///
/// Rows of `basis` generate the lattice. The basis is upper triangular with
/// positive pivots, and every entry above a pivot lies in `[0, pivot)`, which
/// makes it canonical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CommLattice {
    basis: [Triple; 3],
    index: u64,
}

impl CommLattice {
    /// Canonical basis of the lattice spanned by `generators`.
    pub fn canonical_basis(generators: &[Triple]) -> Result<Self, LatticeError> {
        let mut rows: Vec<Triple> = generators
            .iter()
            .copied()
            .filter(|g| *g != [0, 0, 0])
            .collect();
        let mut basis = [[0i64; 3]; 3];

        for col in 0..3 {
            // Euclid on the column among the remaining rows.
            loop {
                let pivot = rows
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| r[col] != 0)
                    .min_by_key(|(_, r)| r[col].abs())
                    .map(|(i, _)| i);
                let Some(p) = pivot else {
                    return Err(LatticeError::InfiniteCommutatorBlock { rank: col });
                };
                let prow = rows[p];
                let mut done = true;
                for (i, row) in rows.iter_mut().enumerate() {
                    if i == p || row[col] == 0 {
                        continue;
                    }
                    let q = row[col].div_euclid(prow[col]);
                    for k in 0..3 {
                        row[k] -= q * prow[k];
                    }
                    if row[col] != 0 {
                        done = false;
                    }
                }
                if done {
                    let mut prow = rows.swap_remove(p);
                    if prow[col] < 0 {
                        prow.iter_mut().for_each(|x| *x = -*x);
                    }
                    basis[col] = prow;
                    rows.retain(|r| *r != [0, 0, 0]);
                    break;
                }
            }
        }
        debug_assert!(rows.is_empty());

        for j in 1..3 {
            let pj = basis[j];
            for row in basis.iter_mut().take(j) {
                let q = row[j].div_euclid(pj[j]);
                for k in 0..3 {
                    row[k] -= q * pj[k];
                }
            }
        }

        let index = (basis[0][0] * basis[1][1] * basis[2][2]) as u64;
        Ok(CommLattice { basis, index })
    }

    pub fn basis(&self) -> &[Triple; 3] {
        &self.basis
    }

    pub fn pivots(&self) -> Triple {
        [self.basis[0][0], self.basis[1][1], self.basis[2][2]]
    }

    /// Index of the lattice in `Z^3`, the product of the pivots.
    pub fn index(&self) -> u64 {
        self.index
    }

    /// The unique representative of `vec + L` with coordinate `i` in
    /// `[0, pivot_i)`.
    pub fn reduce(&self, vec: Triple) -> Triple {
        let mut x = vec;
        for (i, row) in self.basis.iter().enumerate() {
            let q = x[i].div_euclid(row[i]);
            if q != 0 {
                for k in i..3 {
                    x[k] -= q * row[k];
                }
            }
        }
        x
    }

    pub fn contains(&self, vec: Triple) -> bool {
        self.reduce(vec) == [0, 0, 0]
    }

    /// Every boxed representative, `index()` of them, in lexicographic order.
    pub fn representatives(&self) -> impl Iterator<Item = Triple> + '_ {
        let [p0, p1, p2] = self.pivots();
        (0..p0).flat_map(move |t| (0..p1).flat_map(move |u| (0..p2).map(move |v| [t, u, v])))
    }
}
