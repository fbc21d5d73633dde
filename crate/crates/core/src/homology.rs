//! Coinvariant-level chain complexes and their homology.
//!
//! The bar complex with coefficients in `M` has `C_n = ⊕ M_{s(g_n)}` over
//! composable `(g_1, ..., g_n)` (and `C_0 = ⊕_x M_x`), ordered tuple-major and
//! then by fiber coordinate.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::gmodule::{induce, GModule};
use crate::groupoid::{boundary_matrix, face_tuple, nerve, FiniteGroupoid, Nerve, Subgroupoid, Variant};
use crate::intalg::{homology_of_pair, sparse_axpy, FGAbelianGroup, IntMatrix, SparseVec, SubquotientGroup};

/// `C_0 <- C_1 <- ... <- C_N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntChainComplex {
    ranks: Vec<usize>,
    /// `boundaries[n - 1]` is `C_n -> C_{n-1}`.
    boundaries: Vec<IntMatrix>,
}

impl IntChainComplex {
    /// Checks shapes and `d_n d_{n+1} = 0`.
    pub fn new(ranks: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self> {
        if ranks.is_empty() || boundaries.len() + 1 != ranks.len() {
            return Err(Error::MalformedComplex(format!(
                "{} ranks and {} boundaries",
                ranks.len(),
                boundaries.len()
            )));
        }
        for (i, d) in boundaries.iter().enumerate() {
            if d.shape() != (ranks[i], ranks[i + 1]) {
                return Err(Error::MalformedComplex(format!(
                    "boundary of degree {} has shape {:?}",
                    i + 1,
                    d.shape()
                )));
            }
        }
        for (n, w) in boundaries.windows(2).enumerate() {
            if !(&w[0] * &w[1]).is_zero() {
                return Err(Error::MalformedComplex(format!(
                    "boundary({}) · boundary({}) is nonzero",
                    n + 1,
                    n + 2
                )));
            }
        }
        Ok(IntChainComplex { ranks, boundaries })
    }

    pub fn max_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, n: usize) -> usize {
        self.ranks[n]
    }

    /// `C_n -> C_{n-1}` for `1 <= n <= N`; `C_0 -> 0` for `n = 0`.
    pub fn boundary(&self, n: usize) -> Result<IntMatrix> {
        if n > self.max_degree() {
            return Err(Error::DegreeOutOfRange {
                degree: n,
                max: self.max_degree(),
            });
        }
        Ok(if n == 0 {
            IntMatrix::zeros(0, self.ranks[0])
        } else {
            self.boundaries[n - 1].clone()
        })
    }
}

/// `H_n`, which needs the boundary out of degree `n + 1`.
pub fn homology_groups(c: &IntChainComplex, n: usize) -> Result<SubquotientGroup> {
    if n >= c.max_degree() {
        return Err(Error::DegreeOutOfRange {
            degree: n,
            max: c.max_degree().saturating_sub(1),
        });
    }
    homology_of_pair(&c.boundary(n)?, &c.boundary(n + 1)?)
}

/// Basis of the degree-`n` bar chains: offsets of each tuple's fiber block.
#[derive(Clone, Debug)]
pub struct BarBasis {
    pub nerve: Nerve,
    pub offsets: Vec<usize>,
    pub rank: usize,
}

impl BarBasis {
    pub fn new(g: &FiniteGroupoid, m: &GModule, n: usize) -> Self {
        let nerve = nerve(g, n);
        let mut offsets = Vec::with_capacity(nerve.len());
        let mut acc = 0;
        for t in nerve.tuples() {
            offsets.push(acc);
            acc += m.rank(Self::base(g, n, t));
        }
        BarBasis {
            nerve,
            offsets,
            rank: acc,
        }
    }

    /// The object carrying the coefficient: `s(g_n)`, or the object itself in degree 0.
    pub fn base(g: &FiniteGroupoid, n: usize, t: &[usize]) -> usize {
        if n == 0 {
            t[0]
        } else {
            g.source(t[n - 1])
        }
    }

    /// Coordinate of fiber vector `j` on tuple `t`.
    pub fn index(&self, t: &[usize], j: usize) -> usize {
        self.offsets[self.nerve.index_of(t).expect("tuple in the nerve")] + j
    }
}

fn bar_boundary(g: &FiniteGroupoid, m: &GModule, dom: &BarBasis, cod: &BarBasis) -> IntMatrix {
    let n = dom.nerve.degree();
    let mut columns = Vec::with_capacity(dom.rank);
    for t in dom.nerve.tuples() {
        let base = BarBasis::base(g, n, t);
        for j in 0..m.rank(base) {
            let mut col = SparseVec::new();
            for i in 0..=n {
                let sign = BigInt::from(if i % 2 == 0 { 1 } else { -1 });
                let face = face_tuple(g, t, i, Variant::Matui);
                if i == n {
                    let moved = m.act(t[n - 1], &SparseVec::from([(j, BigInt::from(1))]));
                    for (k, v) in moved {
                        sparse_axpy(&mut col, cod.index(&face, k), &sign * v);
                    }
                } else {
                    sparse_axpy(&mut col, cod.index(&face, j), sign);
                }
            }
            columns.push(col);
        }
    }
    IntMatrix::from_columns(cod.rank, columns)
}

/// The bar complex of `G` with coefficients in `M`, degrees `0..=max_degree`.
pub fn bar_complex(g: &FiniteGroupoid, m: &GModule, max_degree: usize) -> Result<IntChainComplex> {
    g.ensure_same(m.groupoid(), "coefficient module is over another groupoid")?;
    let bases: Vec<BarBasis> = (0..=max_degree).map(|n| BarBasis::new(g, m, n)).collect();
    let boundaries = (1..=max_degree)
        .map(|n| bar_boundary(g, m, &bases[n], &bases[n - 1]))
        .collect();
    IntChainComplex::new(bases.iter().map(|b| b.rank).collect(), boundaries)
}

/// The complex `Z[G^•]` with Matui face boundaries.
pub fn matui_complex(g: &FiniteGroupoid, max_degree: usize) -> Result<IntChainComplex> {
    let ranks = (0..=max_degree).map(|n| nerve(g, n).len()).collect();
    let boundaries = (1..=max_degree)
        .map(|n| boundary_matrix(g, n, Variant::Matui))
        .collect::<Result<Vec<_>>>()?;
    IntChainComplex::new(ranks, boundaries)
}

/// `H_0, ..., H_max` with coefficients in `M`.
pub fn homology_with(g: &FiniteGroupoid, m: &GModule, max_degree: usize) -> Result<Vec<FGAbelianGroup>> {
    let c = bar_complex(g, m, max_degree + 1)?;
    (0..=max_degree)
        .map(|n| Ok(homology_groups(&c, n)?.presentation))
        .collect()
}

/// `H_0, ..., H_max` with trivial coefficients.
pub fn homology(g: &FiniteGroupoid, max_degree: usize) -> Result<Vec<FGAbelianGroup>> {
    let c = matui_complex(g, max_degree + 1)?;
    (0..=max_degree)
        .map(|n| Ok(homology_groups(&c, n)?.presentation))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapiroReport {
    /// `H_n(G; Ind N)`.
    pub induced: Vec<FGAbelianGroup>,
    /// `H_n(H; N)`.
    pub restricted: Vec<FGAbelianGroup>,
}

impl ShapiroReport {
    pub fn holds(&self) -> bool {
        self.induced == self.restricted
    }
}

pub fn shapiro_check(
    g: &FiniteGroupoid,
    sub: &Subgroupoid,
    n: &GModule,
    max_degree: usize,
) -> Result<ShapiroReport> {
    let ind = induce(g, sub, n)?;
    Ok(ShapiroReport {
        induced: homology_with(g, &ind.module, max_degree)?,
        restricted: homology_with(&sub.groupoid, n, max_degree)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmodule::trivial_module;
    use crate::groupoid::{
        cyclic_group, discrete, full_subgroupoid, pair_groupoid, subgroupoid, symmetric_group, trivial_group,
    };

    fn z() -> FGAbelianGroup {
        FGAbelianGroup::free(1)
    }

    #[test]
    fn bar_complex_ranks_for_cyclic_two() {
        let g = cyclic_group(2);
        let c = bar_complex(&g, &trivial_module(&g), 3).unwrap();
        assert_eq!(c.ranks(), &[1, 2, 4, 8]);
    }

    #[test]
    fn trivial_coefficients_match_matui() {
        for g in [cyclic_group(3), pair_groupoid(2), symmetric_group(3)] {
            assert_eq!(
                bar_complex(&g, &trivial_module(&g), 3).unwrap(),
                matui_complex(&g, 3).unwrap()
            );
        }
    }

    #[test]
    fn small_examples() {
        assert_eq!(homology(&pair_groupoid(2), 1).unwrap(), vec![z(), FGAbelianGroup::trivial()]);
        assert_eq!(homology(&cyclic_group(2), 1).unwrap(), vec![z(), FGAbelianGroup::cyclic(2)]);
        assert_eq!(
            homology(&discrete(3), 2).unwrap(),
            vec![FGAbelianGroup::free(3), FGAbelianGroup::trivial(), FGAbelianGroup::trivial()]
        );
        assert_eq!(homology(&cyclic_group(3), 1).unwrap()[1], FGAbelianGroup::cyclic(3));
    }

    #[test]
    fn morita_pair_groupoid() {
        assert_eq!(homology(&pair_groupoid(2), 3).unwrap(), homology(&trivial_group(), 3).unwrap());
    }

    #[test]
    fn h0_counts_orbits() {
        let g = crate::groupoid::disjoint_union(&[&pair_groupoid(2), &cyclic_group(2)]).unwrap();
        assert_eq!(homology(&g, 0).unwrap()[0], FGAbelianGroup::free(2));
    }

    #[test]
    fn sign_coefficients() {
        // H_n(Z/2; Z_sign) = Z/2, 0, Z/2, 0 ...
        let g = cyclic_group(2);
        let sign = GModule::new(
            &g,
            vec![1],
            vec![IntMatrix::identity(1), IntMatrix::from_rows(&[vec![-1]])],
        )
        .unwrap();
        let h = homology_with(&g, &sign, 3).unwrap();
        assert_eq!(
            h,
            vec![
                FGAbelianGroup::cyclic(2),
                FGAbelianGroup::trivial(),
                FGAbelianGroup::cyclic(2),
                FGAbelianGroup::trivial()
            ]
        );
    }

    #[test]
    fn degree_range_checked() {
        let c = matui_complex(&cyclic_group(2), 2).unwrap();
        assert!(homology_groups(&c, 2).is_err());
        assert!(homology_groups(&c, 1).is_ok());
    }

    #[test]
    fn shapiro_examples() {
        let p = pair_groupoid(2);
        let all = full_subgroupoid(&p, &[0, 1]).unwrap();
        assert!(shapiro_check(&p, &all, &trivial_module(&p), 2).unwrap().holds());
        let one = full_subgroupoid(&p, &[0]).unwrap();
        let r = shapiro_check(&p, &one, &trivial_module(&one.groupoid), 2).unwrap();
        assert!(r.holds());
        assert_eq!(r.induced, homology(&trivial_group(), 2).unwrap());
        let z2 = cyclic_group(2);
        let e = subgroupoid(&z2, &[0], &[0]).unwrap();
        let r = shapiro_check(&z2, &e, &trivial_module(&e.groupoid), 3).unwrap();
        assert!(r.holds());
        assert_eq!(r.induced[0], z());
        assert!(r.induced[1..].iter().all(FGAbelianGroup::is_trivial));
    }
}
