//! Correspondences attached to homomorphisms and to actions, with lifts
//! written down directly.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;

use super::lift::{ChainLift, IndElem, LiftContext};
use super::EtaleCorrespondence;
use crate::error::Result;
use crate::gmodule::trivial_module;
use crate::groupoid::{action_groupoid, nerve, ActionGroupoid, FiniteGroupoid, Functor, GSet, Subgroupoid};
use crate::homology::BarBasis;
use crate::intalg::{sparse_axpy, IntMatrix, SparseVec};

fn unit_elem(key: (usize, usize, usize)) -> IndElem {
    IndElem::from([(key, BigInt::one())])
}

/// `Ω_φ = G^0 ×_{H^0} H`, points `x|h` with `φ(x) = r(h)`.
#[derive(Clone, Debug)]
pub struct HomomorphismCorrespondence {
    pub correspondence: EtaleCorrespondence,
    pub functor: Functor,
    /// `(x, h) -> point`.
    point_of: HashMap<(usize, usize), usize>,
}

pub fn from_homomorphism(g: &FiniteGroupoid, h: &FiniteGroupoid, phi: &Functor) -> Result<HomomorphismCorrespondence> {
    phi.validate(g, h)?;
    let pairs: Vec<(usize, usize)> = (0..g.n_objects())
        .flat_map(|x| h.arrows_into(phi.object_map[x]).iter().map(move |&b| (x, b)))
        .collect();
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let names: Vec<String> = pairs
        .iter()
        .map(|&(x, b)| format!("{}|{}", g.object_id(x), h.arrow_id(b)))
        .collect();
    let correspondence = EtaleCorrespondence::from_fn(
        g,
        h,
        &names,
        |p| pairs[p].0,
        |p| h.source(pairs[p].1),
        |a, p| index[&(g.range(a), h.compose(phi.arrow_map[a], pairs[p].1))],
        |p, b| index[&(pairs[p].0, h.compose(pairs[p].1, b))],
    )?;
    let point_of = pairs
        .iter()
        .zip(&names)
        .map(|(&pair, name)| (pair, correspondence.point_index(name).expect("named point")))
        .collect();
    Ok(HomomorphismCorrespondence {
        correspondence,
        functor: phi.clone(),
        point_of,
    })
}

impl HomomorphismCorrespondence {
    /// `(1_x, g_1, ..., g_n) ↦ (x, 1) ⊗ (1, φg_1, ..., φg_n)`, trivial coefficients.
    pub fn explicit_lift(&self, max_degree: usize) -> Result<ChainLift> {
        let omega = &self.correspondence;
        let (g, h, phi) = (omega.source(), omega.target(), &self.functor);
        let (m, n) = (trivial_module(g), trivial_module(h));
        let ctx = LiftContext::new(omega, &m, &n, max_degree)?;
        let images = (0..=max_degree)
            .map(|k| {
                nerve(g, k)
                    .tuples()
                    .iter()
                    .map(|t| {
                        let x = if k == 0 { t[0] } else { g.range(t[0]) };
                        let u = h.unit(phi.object_map[x]);
                        let p = self.point_of[&(x, u)];
                        let mut tuple = vec![u];
                        if k > 0 {
                            tuple.extend(t.iter().map(|&a| phi.arrow_map[a]));
                        }
                        ((t.clone(), 0), unit_elem(ctx.normalize(p, &tuple, 0)))
                    })
                    .collect()
            })
            .collect();
        Ok(ctx.finish(images))
    }

    /// `φ_* : C_k(G) -> C_k(H)` on bar chains.
    pub fn pushforward_matrix(&self, k: usize) -> IntMatrix {
        let omega = &self.correspondence;
        let (g, h, phi) = (omega.source(), omega.target(), &self.functor);
        let tgt = BarBasis::new(h, &trivial_module(h), k);
        let columns = nerve(g, k)
            .tuples()
            .iter()
            .map(|t| {
                let image: Vec<usize> = if k == 0 {
                    vec![phi.object_map[t[0]]]
                } else {
                    t.iter().map(|&a| phi.arrow_map[a]).collect()
                };
                SparseVec::from([(tgt.index(&image, 0), BigInt::one())])
            })
            .collect();
        IntMatrix::from_columns(tgt.rank, columns)
    }
}

/// Arrows of `G` with source in the subgroupoid, as a `G`-`H` bispace: `G`
/// composes on the left, `H` on the right.
pub fn from_subgroupoid(g: &FiniteGroupoid, sub: &Subgroupoid) -> Result<EtaleCorrespondence> {
    let pts: Vec<usize> = (0..g.n_arrows())
        .filter(|&a| sub.local_object(g.source(a)).is_some())
        .collect();
    let pos: HashMap<usize, usize> = pts.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let names: Vec<String> = pts.iter().map(|&a| g.arrow_id(a).to_string()).collect();
    EtaleCorrespondence::from_fn(
        g,
        &sub.groupoid,
        &names,
        |p| g.range(pts[p]),
        |p| sub.local_object(g.source(pts[p])).expect("source in the subgroupoid"),
        |a, p| pos[&g.compose(a, pts[p])],
        |p, b| pos[&g.compose(pts[p], sub.arrow_map[b])],
    )
}

/// `Ω = G ⋉ X` as a `G`-`(G ⋉ X)` correspondence: `ρ(g|x) = r(g)`, `σ(g|x) = x`.
#[derive(Clone, Debug)]
pub struct ActionCorrespondence {
    pub correspondence: EtaleCorrespondence,
    pub action: ActionGroupoid,
    pub gset: GSet,
    /// Arrow of the action groupoid to point.
    point_of: Vec<usize>,
}

pub fn from_action(g: &FiniteGroupoid, x: &GSet) -> Result<ActionCorrespondence> {
    x.validate(g)?;
    let action = action_groupoid(g, x)?;
    let h = &action.groupoid;
    let names: Vec<String> = h.arrows().to_vec();
    let parts = &action.parts;
    let correspondence = EtaleCorrespondence::from_fn(
        g,
        h,
        &names,
        |p| g.range(parts[p].0),
        |p| parts[p].1,
        |a, p| action.arrow_of(g.compose(a, parts[p].0), parts[p].1).expect("composable"),
        |p, b| h.compose(p, b),
    )?;
    let point_of = names
        .iter()
        .map(|name| correspondence.point_index(name).expect("named point"))
        .collect();
    Ok(ActionCorrespondence {
        correspondence,
        action,
        gset: x.clone(),
        point_of,
    })
}

impl ActionCorrespondence {
    /// The lifts of `(g_1, ..., g_n)` ending at `s(g_n)`, one per point over it.
    fn lifted(&self, t: &[usize]) -> Vec<Vec<usize>> {
        let g = self.correspondence.source();
        let last = *t.last().expect("nonempty tuple");
        self.gset
            .fiber(g.source(last))
            .into_iter()
            .map(|xn| {
                let mut out = vec![0; t.len()];
                let mut cur = xn;
                for i in (0..t.len()).rev() {
                    out[i] = self.action.arrow_of(t[i], cur).expect("anchored");
                    cur = self.gset.act(t[i], cur).expect("anchored");
                }
                out
            })
            .collect()
    }

    /// `τ^*` lifted: `(1_x, g_1, ..., g_n) ↦ Σ` of the lifted tuples, trivial coefficients.
    pub fn explicit_lift(&self, max_degree: usize) -> Result<ChainLift> {
        let omega = &self.correspondence;
        let (g, h) = (omega.source(), omega.target());
        let (m, n) = (trivial_module(g), trivial_module(h));
        let ctx = LiftContext::new(omega, &m, &n, max_degree)?;
        let images = (0..=max_degree)
            .map(|k| {
                nerve(g, k)
                    .tuples()
                    .iter()
                    .map(|t| {
                        let x = if k == 0 { t[0] } else { g.range(t[0]) };
                        let mut full = vec![g.unit(x)];
                        if k > 0 {
                            full.extend_from_slice(t);
                        }
                        let mut elem = IndElem::new();
                        for lifted in self.lifted(&full) {
                            let mut tuple = lifted.clone();
                            tuple[0] = h.unit(h.source(lifted[0]));
                            let key = ctx.normalize(self.point_of[lifted[0]], &tuple, 0);
                            *elem.entry(key).or_default() += 1;
                        }
                        ((t.clone(), 0), elem)
                    })
                    .collect()
            })
            .collect();
        Ok(ctx.finish(images))
    }

    /// `τ^* : C_k(G) -> C_k(G ⋉ X)`, the sum over lifts.
    pub fn transfer_matrix(&self, k: usize) -> IntMatrix {
        let g = self.correspondence.source();
        let h = self.correspondence.target();
        let tgt = BarBasis::new(h, &trivial_module(h), k);
        let columns = nerve(g, k)
            .tuples()
            .iter()
            .map(|t| {
                let mut col = SparseVec::new();
                if k == 0 {
                    for y in self.gset.fiber(t[0]) {
                        sparse_axpy(&mut col, tgt.index(&[y], 0), BigInt::one());
                    }
                } else {
                    for lifted in self.lifted(t) {
                        sparse_axpy(&mut col, tgt.index(&lifted, 0), BigInt::one());
                    }
                }
                col
            })
            .collect();
        IntMatrix::from_columns(tgt.rank, columns)
    }
}
