//! Restriction to a subgroupoid, induction along free right actions, and the
//! unit and counit of the adjunction between them.

use std::collections::HashMap;

use super::{GModule, GModuleMap};
use crate::error::{Error, Result, Violation};
use crate::groupoid::{FiniteGroupoid, Subgroupoid};
use crate::intalg::IntMatrix;

/// Orbits of a free right action. Each orbit is represented by its least point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbits {
    /// Representatives, ascending.
    pub reps: Vec<usize>,
    pub rep_of: Vec<usize>,
    /// The unique arrow `t` with `p = rep_of[p]·t`.
    pub transport: Vec<usize>,
}

impl Orbits {
    /// `right(p, h)` must be defined exactly when `sigma[p] = r(h)`.
    pub fn new(
        h: &FiniteGroupoid,
        sigma: &[usize],
        right: impl Fn(usize, usize) -> Option<usize>,
    ) -> Result<Self, Violation> {
        let n = sigma.len();
        let mut rep_of = vec![usize::MAX; n];
        let mut transport = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for p in 0..n {
            if rep_of[p] != usize::MAX {
                continue;
            }
            reps.push(p);
            for &b in h.arrows_into(sigma[p]) {
                let q = right(p, b).ok_or_else(|| {
                    Violation::new("right action undefined", format!("point {p} by {}", h.arrow_id(b)))
                })?;
                if rep_of[q] != usize::MAX {
                    return Err(Violation::new(
                        "right action not free",
                        format!("point {p} has a nontrivial stabilizer"),
                    ));
                }
                rep_of[q] = p;
                transport[q] = b;
            }
        }
        Ok(Orbits {
            reps,
            rep_of,
            transport,
        })
    }
}

/// An induced module together with the orbit data fixing its basis.
///
/// The fiber over `x` is `⊕ N_{σ(ω)}` over representatives `ω` anchored at
/// `x`, in ascending order.
#[derive(Clone, Debug)]
pub struct InducedModule {
    pub module: GModule,
    pub orbits: Orbits,
    /// Per object of the acting groupoid: `(representative, offset in fiber)`.
    pub blocks: Vec<Vec<(usize, usize)>>,
    block_of: HashMap<usize, (usize, usize)>,
}

impl InducedModule {
    /// `(object, offset)` of the block of a representative.
    pub fn block(&self, rep: usize) -> (usize, usize) {
        self.block_of[&rep]
    }
}

/// Induction along a `G`-`H` bispace with free right action.
///
/// `left(g, p)` is defined when `s(g) = rho[p]`, `right(p, h)` when `sigma[p] = r(h)`.
pub fn induce_general(
    g: &FiniteGroupoid,
    rho: &[usize],
    sigma: &[usize],
    left: impl Fn(usize, usize) -> Option<usize>,
    right: impl Fn(usize, usize) -> Option<usize>,
    n: &GModule,
) -> Result<InducedModule> {
    let h = n.groupoid();
    let orbits = Orbits::new(h, sigma, right)?;
    let mut blocks = vec![Vec::new(); g.n_objects()];
    let mut ranks = vec![0; g.n_objects()];
    let mut block_of = HashMap::new();
    for &w in &orbits.reps {
        let x = rho[w];
        blocks[x].push((w, ranks[x]));
        block_of.insert(w, (x, ranks[x]));
        ranks[x] += n.rank(sigma[w]);
    }
    let action = (0..g.n_arrows())
        .map(|a| {
            let mut m = IntMatrix::zeros(ranks[g.range(a)], ranks[g.source(a)]);
            for &(w, off) in &blocks[g.source(a)] {
                let p = left(a, w).ok_or_else(|| {
                    Violation::new("left action undefined", format!("{} on point {w}", g.arrow_id(a)))
                })?;
                let (r, t) = (orbits.rep_of[p], orbits.transport[p]);
                let (_, target_off) = block_of[&r];
                for (i, j, v) in n.action(t).entries() {
                    m.set(target_off + i, off + j, v.clone());
                }
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InducedModule {
        module: GModule::new(g, ranks, action)?,
        orbits,
        blocks,
        block_of,
    })
}

/// Arrows of `G` with source in the subgroupoid, as points of the inducing bispace.
struct SubgroupoidBispace<'a> {
    g: &'a FiniteGroupoid,
    sub: &'a Subgroupoid,
    points: Vec<usize>,
    position: HashMap<usize, usize>,
}

impl<'a> SubgroupoidBispace<'a> {
    fn new(g: &'a FiniteGroupoid, sub: &'a Subgroupoid) -> Self {
        let points: Vec<usize> = (0..g.n_arrows())
            .filter(|&a| sub.local_object(g.source(a)).is_some())
            .collect();
        let position = points.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        SubgroupoidBispace {
            g,
            sub,
            points,
            position,
        }
    }

    fn induce(&self, n: &GModule) -> Result<InducedModule> {
        let (g, sub) = (self.g, self.sub);
        let rho: Vec<usize> = self.points.iter().map(|&a| g.range(a)).collect();
        let sigma: Vec<usize> = self
            .points
            .iter()
            .map(|&a| sub.local_object(g.source(a)).unwrap())
            .collect();
        induce_general(
            g,
            &rho,
            &sigma,
            |a, p| g.try_compose(a, self.points[p]).map(|c| self.position[&c]),
            |p, b| {
                g.try_compose(self.points[p], sub.arrow_map[b])
                    .map(|c| self.position[&c])
            },
            n,
        )
    }
}

fn check_sub(g: &FiniteGroupoid, sub: &Subgroupoid, h: &FiniteGroupoid) -> Result<()> {
    sub.groupoid.ensure_same(h, "module is not over the subgroupoid")?;
    if sub.object_map.iter().any(|&x| x >= g.n_objects())
        || sub.arrow_map.iter().any(|&a| a >= g.n_arrows())
    {
        return Err(Error::GroupoidMismatch(
            "subgroupoid does not belong to the groupoid".to_string(),
        ));
    }
    Ok(())
}

/// Keeps the fibers over the subgroupoid's objects and the actions of its arrows.
pub fn restrict(sub: &Subgroupoid, m: &GModule) -> Result<GModule> {
    let g = m.groupoid();
    if sub.object_map.iter().any(|&x| x >= g.n_objects()) {
        return Err(Error::GroupoidMismatch("subgroupoid object out of range".to_string()));
    }
    let ranks = sub.object_map.iter().map(|&x| m.rank(x)).collect();
    let action = sub.arrow_map.iter().map(|&a| m.action(a).clone()).collect();
    GModule::new(&sub.groupoid, ranks, action)
}

pub fn restrict_map(sub: &Subgroupoid, f: &GModuleMap) -> Result<GModuleMap> {
    let components = sub
        .object_map
        .iter()
        .map(|&x| f.components[x].clone())
        .collect();
    GModuleMap::new_unchecked(
        &restrict(sub, &f.source)?,
        &restrict(sub, &f.target)?,
        components,
    )
}

/// `Ind^G_H N`, with representatives the least arrows in each orbit.
pub fn induce(g: &FiniteGroupoid, sub: &Subgroupoid, n: &GModule) -> Result<InducedModule> {
    check_sub(g, sub, n.groupoid())?;
    SubgroupoidBispace::new(g, sub).induce(n)
}

/// `Ind f`, blockwise `f_{σ(ω)}` on each representative.
pub fn induce_map(g: &FiniteGroupoid, sub: &Subgroupoid, f: &GModuleMap) -> Result<GModuleMap> {
    let src = induce(g, sub, &f.source)?;
    let tgt = induce(g, sub, &f.target)?;
    let space = SubgroupoidBispace::new(g, sub);
    let components = (0..g.n_objects())
        .map(|x| {
            let blocks: Vec<&IntMatrix> = src.blocks[x]
                .iter()
                .map(|&(w, _)| {
                    let y = sub.local_object(g.source(space.points[w])).unwrap();
                    &f.components[y]
                })
                .collect();
            IntMatrix::direct_sum(&blocks)
        })
        .collect();
    GModuleMap::new(&src.module, &tgt.module, components)
}

/// `η_N : N -> Res Ind N`, `n ↦ 1_y ⊗ n`.
pub fn adjunction_unit(g: &FiniteGroupoid, sub: &Subgroupoid, n: &GModule) -> Result<GModuleMap> {
    check_sub(g, sub, n.groupoid())?;
    let space = SubgroupoidBispace::new(g, sub);
    let ind = space.induce(n)?;
    let res = restrict(sub, &ind.module)?;
    let components = (0..sub.groupoid.n_objects())
        .map(|y| {
            let x = sub.object_map[y];
            let p = space.position[&g.unit(x)];
            let (r, t) = (ind.orbits.rep_of[p], ind.orbits.transport[p]);
            let (_, off) = ind.block(r);
            let mut m = IntMatrix::zeros(res.rank(y), n.rank(y));
            for (i, j, v) in n.action(t).entries() {
                m.set(off + i, j, v.clone());
            }
            m
        })
        .collect();
    GModuleMap::new(n, &res, components)
}

/// `ε_M : Ind Res M -> M`, `g ⊗ m ↦ g·m`.
pub fn adjunction_counit(g: &FiniteGroupoid, sub: &Subgroupoid, m: &GModule) -> Result<GModuleMap> {
    m.groupoid().ensure_same(g, "module is not over the groupoid")?;
    let space = SubgroupoidBispace::new(g, sub);
    let res = restrict(sub, m)?;
    let ind = space.induce(&res)?;
    let components = (0..g.n_objects())
        .map(|x| {
            let blocks: Vec<&IntMatrix> = ind.blocks[x]
                .iter()
                .map(|&(w, _)| m.action(space.points[w]))
                .collect();
            blocks
                .iter()
                .skip(1)
                .try_fold(
                    blocks
                        .first()
                        .map(|b| (*b).clone())
                        .unwrap_or_else(|| IntMatrix::zeros(m.rank(x), 0)),
                    |acc, b| acc.hconcat(b),
                )
        })
        .collect::<Result<Vec<_>>>()?;
    GModuleMap::new(&ind.module, m, components)
}

/// Checks `ε_{Ind N} ∘ Ind η_N = id` and `Res ε_M ∘ η_{Res M} = id`.
pub fn triangle_check(g: &FiniteGroupoid, sub: &Subgroupoid, n: &GModule, m: &GModule) -> Result<()> {
    let ind_n = induce(g, sub, n)?.module;
    let first = induce_map(g, sub, &adjunction_unit(g, sub, n)?)?
        .then(&adjunction_counit(g, sub, &ind_n)?)?;
    if let Some(x) = first.components.iter().position(|c| !c.is_identity()) {
        return Err(Error::TriangleIdentity(format!(
            "counit after induced unit differs from the identity at object {}",
            g.object_id(x)
        )));
    }
    let res_m = restrict(sub, m)?;
    let second = adjunction_unit(g, sub, &res_m)?
        .then(&restrict_map(sub, &adjunction_counit(g, sub, m)?)?)?;
    if let Some(y) = second.components.iter().position(|c| !c.is_identity()) {
        return Err(Error::TriangleIdentity(format!(
            "restricted counit after unit differs from the identity at object {}",
            sub.groupoid.object_id(y)
        )));
    }
    Ok(())
}
