use num_bigint::BigInt;

use super::EtaleCorrespondence;
use crate::error::Result;
use crate::gmodule::{coinvariants, induce_general, trivial_module, GModule, GModuleMap, InducedModule};
use crate::intalg::{induced_subquotient_map, IntMatrix, SparseVec, SubquotientMap};

/// `Ind_Ω N = Z[Ω] ⊗_H N`, one block `N_{σ(ω)}` per orbit representative.
pub fn induce_module(omega: &EtaleCorrespondence, n: &GModule) -> Result<InducedModule> {
    omega
        .target()
        .ensure_same(n.groupoid(), "module is not over the target groupoid")?;
    induce_general(
        omega.source(),
        omega.rhos(),
        omega.sigmas(),
        |a, p| omega.left_act(a, p),
        |p, b| omega.right_act(p, b),
        n,
    )
}

/// `ω ⊗ n ↦ n` from the total group of `Ind_Ω N` to the total group of `N`.
pub fn delta_matrix(omega: &EtaleCorrespondence, ind: &InducedModule, n: &GModule) -> IntMatrix {
    let g = omega.source();
    let mut columns = Vec::with_capacity(ind.module.total_rank());
    for x in 0..g.n_objects() {
        for &(w, _) in &ind.blocks[x] {
            let y = omega.sigma(w);
            for j in 0..n.rank(y) {
                columns.push(SparseVec::from([(n.offset(y) + j, BigInt::from(1))]));
            }
        }
    }
    IntMatrix::from_columns(n.total_rank(), columns)
}

/// `δ_Ω ⊗ id : (Ind_Ω N)_G -> N_H` on canonical generators.
///
/// Fails if the total-level map does not descend, which would mean the
/// induced module and the correspondence disagree.
pub fn delta(omega: &EtaleCorrespondence, n: &GModule) -> Result<SubquotientMap> {
    let ind = induce_module(omega, n)?;
    let src = coinvariants(&ind.module)?;
    let tgt = coinvariants(n)?;
    induced_subquotient_map(&delta_matrix(omega, &ind, n), &src.quotient, &tgt.quotient)
}

/// `Ind_Ω f`, acting as `f_{σ(ω)}` on each block.
pub fn induce_module_map(omega: &EtaleCorrespondence, f: &GModuleMap) -> Result<GModuleMap> {
    let src = induce_module(omega, &f.source)?;
    let tgt = induce_module(omega, &f.target)?;
    let components = (0..omega.source().n_objects())
        .map(|x| {
            let mut m = IntMatrix::zeros(tgt.module.rank(x), src.module.rank(x));
            for &(w, off) in &src.blocks[x] {
                let (_, toff) = tgt.block(w);
                for (i, j, v) in f.components[omega.sigma(w)].entries() {
                    m.set(toff + i, off + j, v.clone());
                }
            }
            m
        })
        .collect();
    GModuleMap::new(&src.module, &tgt.module, components)
}

/// `ρ̄^* : Z[G^0] -> Ind_Ω Z[H^0]`, each object to the sum of the orbits over it.
pub fn rho_bar_pullback(omega: &EtaleCorrespondence) -> Result<GModuleMap> {
    let g = omega.source();
    let ind = induce_module(omega, &trivial_module(omega.target()))?;
    let components = (0..g.n_objects())
        .map(|x| {
            let col: SparseVec = (0..ind.blocks[x].len()).map(|i| (i, BigInt::from(1))).collect();
            IntMatrix::from_columns(ind.blocks[x].len(), vec![col])
        })
        .collect();
    GModuleMap::new(&trivial_module(g), &ind.module, components)
}
