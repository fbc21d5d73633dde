use num_bigint::BigInt;

use super::GModule;
use crate::error::Result;
use crate::intalg::{homology_of_pair, FGAbelianGroup, IntMatrix, SparseVec, SubquotientGroup};

/// `M_G`: the total group modulo `g·m - m`.
#[derive(Clone, Debug)]
pub struct Coinvariants {
    pub group: FGAbelianGroup,
    pub quotient: SubquotientGroup,
    /// Generator coordinates of `[m]` for each basis vector of the total group.
    pub projection: IntMatrix,
}

pub fn coinvariants(m: &GModule) -> Result<Coinvariants> {
    let g = m.groupoid();
    let total = m.total_rank();
    let mut relations = Vec::new();
    for a in 0..g.n_arrows() {
        if g.is_unit(a) {
            continue;
        }
        let (s, r) = (g.source(a), g.range(a));
        for j in 0..m.rank(s) {
            let mut col: SparseVec = m
                .act(a, &SparseVec::from([(j, BigInt::from(1))]))
                .into_iter()
                .map(|(i, v)| (m.offset(r) + i, v))
                .collect();
            crate::intalg::sparse_axpy(&mut col, m.offset(s) + j, BigInt::from(-1));
            if !col.is_empty() {
                relations.push(col);
            }
        }
    }
    let relations = IntMatrix::from_columns(total, relations);
    let quotient = homology_of_pair(&IntMatrix::zeros(0, total), &relations)?;
    let columns = (0..total)
        .map(|i| {
            let coords = quotient.class_of(&SparseVec::from([(i, BigInt::from(1))]))?;
            Ok(coords
                .into_iter()
                .enumerate()
                .filter(|(_, c)| c != &BigInt::from(0))
                .collect())
        })
        .collect::<Result<Vec<SparseVec>>>()?;
    Ok(Coinvariants {
        group: quotient.presentation.clone(),
        projection: IntMatrix::from_columns(quotient.num_generators(), columns),
        quotient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmodule::trivial_module;
    use crate::groupoid::{cyclic_group, discrete, disjoint_union, pair_groupoid, symmetric_group};

    #[test]
    fn trivial_module_coinvariants_count_orbits() {
        let p = pair_groupoid(2);
        let c = coinvariants(&trivial_module(&p)).unwrap();
        assert_eq!(c.group, FGAbelianGroup::free(1));
        assert_eq!(c.projection.column(0), c.projection.column(1));
        assert_eq!(
            coinvariants(&trivial_module(&symmetric_group(3))).unwrap().group,
            FGAbelianGroup::free(1)
        );
        let g = disjoint_union(&[&p, &cyclic_group(3), &discrete(2)]).unwrap();
        assert_eq!(
            coinvariants(&trivial_module(&g)).unwrap().group,
            FGAbelianGroup::free(g.orbits().len())
        );
    }

    #[test]
    fn sign_character_has_two_torsion_coinvariants() {
        let z2 = cyclic_group(2);
        let sign = GModule::new(
            &z2,
            vec![1],
            vec![IntMatrix::identity(1), IntMatrix::from_rows(&[vec![-1]])],
        )
        .unwrap();
        assert_eq!(coinvariants(&sign).unwrap().group, FGAbelianGroup::cyclic(2));
    }
}
