//! Subquotients `ker / im` inside a free chain group, and the maps they inherit.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::abelian::FGAbelianGroup;
use super::matrix::{IntMatrix, SparseVec};
use super::smith::{eliminate, Track};
use crate::error::{Error, Result};

/// `ker(d_out) / im(d_in)` with canonical generators.
///
/// Generators follow the Smith column order of the boundary lattice inside the
/// cycle lattice: torsion generators first (orders ascending along the
/// divisibility chain), then free generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubquotientGroup {
    pub ambient_rank: usize,
    /// Columns form a basis of `ker(d_out)`.
    pub cycle_basis: IntMatrix,
    /// Columns form a basis of `im(d_in)`.
    pub boundary_basis: IntMatrix,
    pub presentation: FGAbelianGroup,
    /// One ambient cycle per presented generator.
    pub generator_lifts: IntMatrix,
    /// `None` for free generators, `Some(d)` for a generator of order `d`.
    pub orders: Vec<Option<BigInt>>,
    /// Maps an ambient cycle to its (unreduced) generator coordinates.
    coordinates: IntMatrix,
    /// The outgoing boundary, kept for cycle tests.
    d_out: IntMatrix,
}

/// Computes `ker(d_out) / im(d_in)`.
pub fn homology_of_pair(d_out: &IntMatrix, d_in: &IntMatrix) -> Result<SubquotientGroup> {
    let ambient = d_out.cols();
    if d_in.rows() != ambient {
        return Err(Error::DimensionMismatch {
            context: "homology_of_pair: rows of d_in vs columns of d_out",
            expected: ambient,
            found: d_in.rows(),
        });
    }
    if !d_out.checked_mul(d_in)?.is_zero() {
        return Err(Error::MalformedComplex(
            "d_out * d_in is nonzero".to_string(),
        ));
    }

    let outer = eliminate(
        d_out,
        Track {
            right: true,
            right_inverse: true,
            ..Track::default()
        },
    );
    let rank_out = outer.invariants.len();
    let kernel_dim = ambient - rank_out;
    let cycle_basis = outer.right.unwrap().select_columns(rank_out..ambient);
    let to_cycle_coords = outer.right_inverse.unwrap().select_rows(rank_out..ambient);

    // Boundaries expressed in cycle coordinates.
    let inner_matrix = to_cycle_coords.checked_mul(d_in)?;
    let inner = eliminate(
        &inner_matrix,
        Track {
            left: true,
            left_inverse: true,
            ..Track::default()
        },
    );
    let lifts_all = cycle_basis.checked_mul(&inner.left_inverse.unwrap())?;
    let coords_all = inner.left.unwrap().checked_mul(&to_cycle_coords)?;

    let rank_in = inner.invariants.len();
    let mut kept = Vec::new();
    let mut orders = Vec::new();
    for (i, d) in inner.invariants.iter().enumerate() {
        if !d.is_one() {
            kept.push(i);
            orders.push(Some(d.clone()));
        }
    }
    for i in rank_in..kernel_dim {
        kept.push(i);
        orders.push(None);
    }

    let generator_lifts = IntMatrix::from_columns(
        ambient,
        kept.iter().map(|&i| lifts_all.column(i).clone()).collect(),
    );
    let coordinates = {
        let t = coords_all.transpose();
        IntMatrix::from_columns(ambient, kept.iter().map(|&i| t.column(i).clone()).collect())
            .transpose()
    };
    let boundary_basis = IntMatrix::from_columns(
        ambient,
        inner
            .invariants
            .iter()
            .enumerate()
            .map(|(i, d)| lifts_all.column(i).iter().map(|(&r, v)| (r, v * d)).collect())
            .collect(),
    );
    let torsion: Vec<BigInt> = orders.iter().flatten().cloned().collect();
    let presentation = FGAbelianGroup {
        free_rank: kernel_dim - rank_in,
        torsion,
    };
    debug_assert!(presentation.is_canonical());

    Ok(SubquotientGroup {
        ambient_rank: ambient,
        cycle_basis,
        boundary_basis,
        presentation,
        generator_lifts,
        orders,
        coordinates,
        d_out: d_out.clone(),
    })
}

impl SubquotientGroup {
    pub fn num_generators(&self) -> usize {
        self.orders.len()
    }

    pub fn is_cycle(&self, v: &SparseVec) -> bool {
        self.d_out.apply(v).is_empty()
    }

    /// Reduces generator coordinates modulo the torsion orders.
    pub fn reduce(&self, coords: &mut [BigInt]) {
        for (c, order) in coords.iter_mut().zip(&self.orders) {
            if let Some(d) = order {
                *c = c.mod_floor(d);
            }
        }
    }

    /// Canonical coordinates of the class of an ambient cycle.
    pub fn class_of(&self, v: &SparseVec) -> Result<Vec<BigInt>> {
        if let Some((&last, _)) = v.iter().next_back() {
            if last >= self.ambient_rank {
                return Err(Error::IndexOutOfRange {
                    context: "subquotient ambient",
                    index: last,
                    bound: self.ambient_rank,
                });
            }
        }
        if !self.is_cycle(v) {
            return Err(Error::NotACycleMap(
                "vector is not a cycle of the outgoing boundary".to_string(),
            ));
        }
        let sparse = self.coordinates.apply(v);
        let mut coords = vec![BigInt::zero(); self.num_generators()];
        for (i, c) in sparse {
            coords[i] = c;
        }
        self.reduce(&mut coords);
        Ok(coords)
    }

    pub fn is_boundary(&self, v: &SparseVec) -> Result<bool> {
        Ok(self.class_of(v)?.iter().all(Zero::is_zero))
    }
}

/// A homomorphism between subquotients, as a matrix on presented generators.
///
/// Entries in rows of torsion generators are reduced into `[0, order)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubquotientMap {
    pub source: SubquotientGroup,
    pub target: SubquotientGroup,
    pub matrix: IntMatrix,
}

/// The map on subquotients induced by an ambient map `f`.
pub fn induced_subquotient_map(
    f: &IntMatrix,
    source: &SubquotientGroup,
    target: &SubquotientGroup,
) -> Result<SubquotientMap> {
    if f.cols() != source.ambient_rank || f.rows() != target.ambient_rank {
        return Err(Error::DimensionMismatch {
            context: "induced_subquotient_map",
            expected: source.ambient_rank * target.ambient_rank,
            found: f.cols() * f.rows(),
        });
    }
    for (j, col) in source.cycle_basis.columns().iter().enumerate() {
        if !target.is_cycle(&f.apply(col)) {
            return Err(Error::NotACycleMap(format!(
                "image of cycle basis vector {j} is not a cycle"
            )));
        }
    }
    for (j, col) in source.boundary_basis.columns().iter().enumerate() {
        if !target.is_boundary(&f.apply(col))? {
            return Err(Error::NotACycleMap(format!(
                "image of boundary basis vector {j} is not a boundary"
            )));
        }
    }
    let columns = source
        .generator_lifts
        .columns()
        .iter()
        .map(|lift| {
            let coords = target.class_of(&f.apply(lift))?;
            Ok(coords
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect())
        })
        .collect::<Result<Vec<SparseVec>>>()?;
    Ok(SubquotientMap {
        source: source.clone(),
        target: target.clone(),
        matrix: IntMatrix::from_columns(target.num_generators(), columns),
    })
}

impl SubquotientMap {
    fn reduced(target: &SubquotientGroup, m: IntMatrix) -> IntMatrix {
        let columns = m
            .into_columns()
            .into_iter()
            .map(|col| {
                col.into_iter()
                    .map(|(i, v)| match &target.orders[i] {
                        Some(d) => (i, v.mod_floor(d)),
                        None => (i, v),
                    })
                    .collect()
            })
            .collect();
        IntMatrix::from_columns(target.num_generators(), columns)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SubquotientMap) -> Result<SubquotientMap> {
        if self.target.presentation != other.source.presentation
            || self.target.ambient_rank != other.source.ambient_rank
        {
            return Err(Error::DimensionMismatch {
                context: "composition of subquotient maps",
                expected: self.target.num_generators(),
                found: other.source.num_generators(),
            });
        }
        let m = other.matrix.checked_mul(&self.matrix)?;
        Ok(SubquotientMap {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: Self::reduced(&other.target, m),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    /// True when the map is onto its target.
    pub fn is_surjective(&self) -> bool {
        let g = self.target.num_generators();
        let relations: Vec<BigInt> = self
            .target
            .orders
            .iter()
            .map(|o| o.clone().unwrap_or_default())
            .collect();
        let augmented = self
            .matrix
            .hconcat(&IntMatrix::diagonal(g, g, &relations))
            .expect("same row count");
        let e = eliminate(&augmented, Track::default());
        e.invariants.len() == g && e.invariants.iter().all(One::is_one)
    }

    /// Bijective. Between isomorphic finitely generated groups surjectivity suffices.
    pub fn is_isomorphism(&self) -> bool {
        self.source.presentation == self.target.presentation && self.is_surjective()
    }

    /// Same matrix on canonical generators, with matching presentations.
    pub fn same_map(&self, other: &SubquotientMap) -> bool {
        self.source.presentation == other.source.presentation
            && self.target.presentation == other.target.presentation
            && self.matrix == other.matrix
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    #[test]
    fn cokernel_of_two() {
        let h = homology_of_pair(&IntMatrix::zeros(0, 1), &m(&[vec![2]])).unwrap();
        assert_eq!(h.presentation, FGAbelianGroup::cyclic(2));
    }

    #[test]
    fn zero_boundaries_give_free_group() {
        let h = homology_of_pair(&IntMatrix::zeros(0, 3), &IntMatrix::zeros(3, 0)).unwrap();
        assert_eq!(h.presentation, FGAbelianGroup::free(3));
        assert_eq!(h.generator_lifts.cols(), 3);
    }

    #[test]
    fn injective_boundary_kills_everything() {
        let h = homology_of_pair(&m(&[vec![1]]), &IntMatrix::zeros(1, 0)).unwrap();
        assert!(h.presentation.is_trivial());
    }

    #[test]
    fn malformed_complex_detected() {
        let err = homology_of_pair(&m(&[vec![1]]), &m(&[vec![1]])).unwrap_err();
        assert!(matches!(err, Error::MalformedComplex(_)));
        let err = homology_of_pair(&m(&[vec![1, 0]]), &m(&[vec![1]])).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn identity_and_zero_maps() {
        let h = homology_of_pair(&m(&[vec![1, -1, 0]]), &m(&[vec![1], vec![1], vec![2]])).unwrap();
        let id = induced_subquotient_map(&IntMatrix::identity(3), &h, &h).unwrap();
        assert!(id.is_identity());
        assert!(id.is_isomorphism());
        let zero = induced_subquotient_map(&IntMatrix::zeros(3, 3), &h, &h).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn multiplication_by_three_on_z_mod_two() {
        let h = homology_of_pair(&IntMatrix::zeros(0, 1), &m(&[vec![2]])).unwrap();
        let f = induced_subquotient_map(&m(&[vec![3]]), &h, &h).unwrap();
        assert_eq!(f.matrix, m(&[vec![1]]));
    }

    #[test]
    fn non_cycle_map_rejected() {
        // Source: Z (ambient Z, no boundaries); target: ker [1] = 0 inside Z.
        let src = homology_of_pair(&IntMatrix::zeros(0, 1), &IntMatrix::zeros(1, 0)).unwrap();
        let tgt = homology_of_pair(&m(&[vec![1]]), &IntMatrix::zeros(1, 0)).unwrap();
        let err = induced_subquotient_map(&m(&[vec![1]]), &src, &tgt).unwrap_err();
        assert!(matches!(err, Error::NotACycleMap(_)));
    }

    #[test]
    fn boundaries_must_map_to_boundaries() {
        // Z/2 -> Z by the identity on ambient Z is not well defined.
        let src = homology_of_pair(&IntMatrix::zeros(0, 1), &m(&[vec![2]])).unwrap();
        let tgt = homology_of_pair(&IntMatrix::zeros(0, 1), &IntMatrix::zeros(1, 0)).unwrap();
        assert!(induced_subquotient_map(&m(&[vec![1]]), &src, &tgt).is_err());
    }
}
