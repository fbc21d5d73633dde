//! Modules over a finite groupoid: a free abelian group `M_x` over each object
//! and an invertible integer matrix `M_{s(g)} -> M_{r(g)}` for each arrow.
//!
//! The total group `⊕_x M_x` is ordered by object index, each fiber in its own
//! standard basis.

mod coinvariants;
mod induction;
mod kappa;

use num_bigint::BigInt;

use crate::error::{Error, Result, Violation};
use crate::groupoid::{FiniteGroupoid, GSet};
use crate::intalg::{IntMatrix, SparseVec};
use crate::schema::ModuleData;

pub use coinvariants::{coinvariants, Coinvariants};
pub use induction::{
    adjunction_counit, adjunction_unit, induce, induce_general, induce_map, restrict, restrict_map,
    triangle_check, InducedModule, Orbits,
};
pub use kappa::{tensor_kappa, Kappa};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GModule {
    groupoid: FiniteGroupoid,
    ranks: Vec<usize>,
    offsets: Vec<usize>,
    action: Vec<IntMatrix>,
}

fn offsets_of(ranks: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(ranks.len() + 1);
    let mut acc = 0;
    out.push(0);
    for r in ranks {
        acc += r;
        out.push(acc);
    }
    out
}

impl GModule {
    pub fn new(g: &FiniteGroupoid, ranks: Vec<usize>, action: Vec<IntMatrix>) -> Result<Self> {
        let m = Self::new_unchecked(g, ranks, action)?;
        m.validate()?;
        Ok(m)
    }

    /// Checks only the sizes of the tables.
    pub fn new_unchecked(g: &FiniteGroupoid, ranks: Vec<usize>, action: Vec<IntMatrix>) -> Result<Self> {
        if ranks.len() != g.n_objects() {
            return Err(Error::DimensionMismatch {
                context: "module fibers",
                expected: g.n_objects(),
                found: ranks.len(),
            });
        }
        if action.len() != g.n_arrows() {
            return Err(Error::DimensionMismatch {
                context: "module actions",
                expected: g.n_arrows(),
                found: action.len(),
            });
        }
        for (a, m) in action.iter().enumerate() {
            let want = (ranks[g.range(a)], ranks[g.source(a)]);
            if m.shape() != want {
                return Err(Violation::new(
                    "action shape",
                    format!(
                        "{} acts by a {}x{} matrix, expected {}x{}",
                        g.arrow_id(a),
                        m.rows(),
                        m.cols(),
                        want.0,
                        want.1
                    ),
                )
                .into());
            }
        }
        Ok(GModule {
            groupoid: g.clone(),
            offsets: offsets_of(&ranks),
            ranks,
            action,
        })
    }

    pub fn validate(&self) -> Result<(), Violation> {
        let g = &self.groupoid;
        for x in 0..g.n_objects() {
            if !self.action[g.unit(x)].is_identity() {
                return Err(Violation::new(
                    "unit acts trivially",
                    format!("unit at {} acts nontrivially", g.object_id(x)),
                ));
            }
        }
        for a in 0..g.n_arrows() {
            for &b in g.arrows_into(g.source(a)) {
                let ab = g.compose(a, b);
                if &self.action[a] * &self.action[b] != self.action[ab] {
                    return Err(Violation::new(
                        "action not functorial",
                        format!("M({}·{}) != M({})·M({})", g.arrow_id(a), g.arrow_id(b), g.arrow_id(a), g.arrow_id(b)),
                    ));
                }
            }
            if !self.action[a].is_unimodular() {
                return Err(Violation::new(
                    "action not invertible",
                    format!("M({}) is not unimodular", g.arrow_id(a)),
                ));
            }
        }
        Ok(())
    }

    pub fn from_data(g: &FiniteGroupoid, data: &ModuleData) -> Result<Self> {
        let mut ranks = vec![usize::MAX; g.n_objects()];
        for (x, &r) in &data.fibers {
            let x = g
                .object_index(x)
                .ok_or_else(|| Violation::new("unknown object", format!("{x:?}")))?;
            ranks[x] = r;
        }
        if let Some(x) = ranks.iter().position(|&r| r == usize::MAX) {
            return Err(Violation::new("missing fiber", g.object_id(x).to_string()).into());
        }
        let mut action: Vec<Option<IntMatrix>> = vec![None; g.n_arrows()];
        for (a, rows) in &data.action {
            let a = g
                .arrow_index(a)
                .ok_or_else(|| Violation::new("unknown arrow", format!("{a:?}")))?;
            let (r, c) = (ranks[g.range(a)], ranks[g.source(a)]);
            if rows.len() != r || rows.iter().any(|row| row.len() != c) {
                return Err(Violation::new(
                    "action shape",
                    format!("{} must act by a {r}x{c} matrix", g.arrow_id(a)),
                )
                .into());
            }
            action[a] = Some(if r == 0 {
                IntMatrix::zeros(0, c)
            } else {
                IntMatrix::from_rows(rows)
            });
        }
        let action = action
            .into_iter()
            .enumerate()
            .map(|(a, m)| {
                m.ok_or_else(|| Violation::new("missing action", g.arrow_id(a).to_string()).into())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(g, ranks, action)
    }

    pub fn to_data(&self, groupoid: &str) -> Result<ModuleData> {
        let g = &self.groupoid;
        let mut action = std::collections::BTreeMap::new();
        for a in 0..g.n_arrows() {
            let m = &self.action[a];
            let rows = m.to_i64_rows().ok_or({
                Error::IndexOutOfRange {
                    context: "action entry exceeds 64 bits",
                    index: a,
                    bound: 0,
                }
            })?;
            action.insert(g.arrow_id(a).to_string(), rows);
        }
        Ok(ModuleData {
            groupoid: groupoid.to_string(),
            fibers: (0..g.n_objects())
                .map(|x| (g.object_id(x).to_string(), self.ranks[x]))
                .collect(),
            action,
        })
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    pub fn rank(&self, x: usize) -> usize {
        self.ranks[x]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn total_rank(&self) -> usize {
        self.offsets[self.ranks.len()]
    }

    /// Position of the fiber over `x` inside the total group.
    pub fn offset(&self, x: usize) -> usize {
        self.offsets[x]
    }

    pub fn action(&self, g: usize) -> &IntMatrix {
        &self.action[g]
    }

    pub fn actions(&self) -> &[IntMatrix] {
        &self.action
    }

    /// `g·v` for `v` in fiber coordinates over `s(g)`.
    pub fn act(&self, g: usize, v: &SparseVec) -> SparseVec {
        self.action[g].apply(v)
    }

    pub fn is_trivial_action(&self) -> bool {
        self.ranks.iter().all(|&r| r == 1) && self.action.iter().all(IntMatrix::is_identity)
    }
}

/// Rank one everywhere, every arrow acting by `[1]`.
pub fn trivial_module(g: &FiniteGroupoid) -> GModule {
    let action = (0..g.n_arrows()).map(|_| IntMatrix::identity(1)).collect();
    GModule::new(g, vec![1; g.n_objects()], action).expect("trivial module is valid")
}

/// The zero module.
pub fn zero_module(g: &FiniteGroupoid) -> GModule {
    let action = (0..g.n_arrows()).map(|_| IntMatrix::zeros(0, 0)).collect();
    GModule::new(g, vec![0; g.n_objects()], action).expect("zero module is valid")
}

/// Fiberwise direct sum.
pub fn direct_sum(a: &GModule, b: &GModule) -> Result<GModule> {
    a.groupoid.ensure_same(&b.groupoid, "direct sum of modules")?;
    let g = &a.groupoid;
    let ranks = (0..g.n_objects()).map(|x| a.rank(x) + b.rank(x)).collect();
    let action = (0..g.n_arrows())
        .map(|e| IntMatrix::direct_sum(&[a.action(e), b.action(e)]))
        .collect();
    GModule::new(g, ranks, action)
}

/// `Z[X]`: the fiber over `x` has basis the points anchored at `x`, ascending,
/// and arrows act by permutation matrices.
pub fn gset_module(g: &FiniteGroupoid, x: &GSet) -> GModule {
    let fibers: Vec<Vec<usize>> = (0..g.n_objects()).map(|o| x.fiber(o)).collect();
    let local = local_positions(x, &fibers);
    let action = (0..g.n_arrows())
        .map(|a| {
            let src = &fibers[g.source(a)];
            let columns = src
                .iter()
                .map(|&p| {
                    let q = x.act(a, p).expect("anchored at the source");
                    SparseVec::from([(local[q], BigInt::from(1))])
                })
                .collect();
            IntMatrix::from_columns(fibers[g.range(a)].len(), columns)
        })
        .collect();
    GModule::new(g, fibers.iter().map(Vec::len).collect(), action).expect("permutation module is valid")
}

fn local_positions(x: &GSet, fibers: &[Vec<usize>]) -> Vec<usize> {
    let mut local = vec![0; x.len()];
    for f in fibers {
        for (i, &p) in f.iter().enumerate() {
            local[p] = i;
        }
    }
    local
}

/// `f_*: Z[X] -> Z[Y]` for an equivariant map `f` of left sets.
pub fn pushforward(g: &FiniteGroupoid, x: &GSet, y: &GSet, f: &[usize]) -> Result<GModuleMap> {
    if f.len() != x.len() {
        return Err(Error::DimensionMismatch {
            context: "pushforward map",
            expected: x.len(),
            found: f.len(),
        });
    }
    for p in 0..x.len() {
        if f[p] >= y.len() || y.anchor(f[p]) != x.anchor(p) {
            return Err(Violation::new("map not over the objects", x.point_id(p).to_string()).into());
        }
        for &a in g.arrows_out_of(x.anchor(p)) {
            if y.act(a, f[p]) != x.act(a, p).map(|q| f[q]) {
                return Err(Violation::new(
                    "map not equivariant",
                    format!("{} on {}", g.arrow_id(a), x.point_id(p)),
                )
                .into());
            }
        }
    }
    let mx = gset_module(g, x);
    let my = gset_module(g, y);
    let fx: Vec<Vec<usize>> = (0..g.n_objects()).map(|o| x.fiber(o)).collect();
    let fy: Vec<Vec<usize>> = (0..g.n_objects()).map(|o| y.fiber(o)).collect();
    let local_y = local_positions(y, &fy);
    let components = (0..g.n_objects())
        .map(|o| {
            let columns = fx[o]
                .iter()
                .map(|&p| SparseVec::from([(local_y[f[p]], BigInt::from(1))]))
                .collect();
            IntMatrix::from_columns(fy[o].len(), columns)
        })
        .collect();
    GModuleMap::new(&mx, &my, components)
}

/// An equivariant map, one matrix `M_x -> N_x` per object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GModuleMap {
    pub source: GModule,
    pub target: GModule,
    pub components: Vec<IntMatrix>,
}

impl GModuleMap {
    pub fn new(source: &GModule, target: &GModule, components: Vec<IntMatrix>) -> Result<Self> {
        let f = Self::new_unchecked(source, target, components)?;
        f.validate()?;
        Ok(f)
    }

    pub fn new_unchecked(source: &GModule, target: &GModule, components: Vec<IntMatrix>) -> Result<Self> {
        source.groupoid.ensure_same(&target.groupoid, "module map")?;
        let g = &source.groupoid;
        if components.len() != g.n_objects() {
            return Err(Error::DimensionMismatch {
                context: "module map components",
                expected: g.n_objects(),
                found: components.len(),
            });
        }
        for (x, c) in components.iter().enumerate() {
            if c.shape() != (target.rank(x), source.rank(x)) {
                return Err(Violation::new(
                    "component shape",
                    format!("component at {} has the wrong shape", g.object_id(x)),
                )
                .into());
            }
        }
        Ok(GModuleMap {
            source: source.clone(),
            target: target.clone(),
            components,
        })
    }

    pub fn validate(&self) -> Result<(), Violation> {
        let g = &self.source.groupoid;
        for a in 0..g.n_arrows() {
            let lhs = &self.components[g.range(a)] * self.source.action(a);
            let rhs = self.target.action(a) * &self.components[g.source(a)];
            if lhs != rhs {
                return Err(Violation::new(
                    "map not equivariant",
                    format!("fails on arrow {}", g.arrow_id(a)),
                ));
            }
        }
        Ok(())
    }

    pub fn identity(m: &GModule) -> Self {
        let components = m.ranks.iter().map(|&r| IntMatrix::identity(r)).collect();
        GModuleMap {
            source: m.clone(),
            target: m.clone(),
            components,
        }
    }

    pub fn zero(source: &GModule, target: &GModule) -> Result<Self> {
        let components = (0..source.groupoid.n_objects())
            .map(|x| IntMatrix::zeros(target.rank(x), source.rank(x)))
            .collect();
        Self::new_unchecked(source, target, components)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GModuleMap) -> Result<GModuleMap> {
        if self.target != other.source {
            return Err(Error::GroupoidMismatch(
                "composed module maps do not match".to_string(),
            ));
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(f, g)| g * f)
            .collect();
        Ok(GModuleMap {
            source: self.source.clone(),
            target: other.target.clone(),
            components,
        })
    }

    /// The block-diagonal matrix on total groups.
    pub fn total_matrix(&self) -> IntMatrix {
        let blocks: Vec<&IntMatrix> = self.components.iter().collect();
        IntMatrix::direct_sum(&blocks)
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.components.iter().all(IntMatrix::is_identity)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{cyclic_group, pair_groupoid};

    #[test]
    fn trivial_modules() {
        let p = pair_groupoid(2);
        let t = trivial_module(&p);
        assert_eq!(t.ranks(), &[1, 1]);
        assert!(t.actions().iter().all(IntMatrix::is_identity));
        assert_eq!(t.total_rank(), p.n_objects());
        let z2 = trivial_module(&cyclic_group(2));
        assert_eq!(z2.total_rank(), 1);
    }

    #[test]
    fn object_set_module_is_trivial() {
        let p = pair_groupoid(3);
        assert_eq!(gset_module(&p, &GSet::objects(&p)), trivial_module(&p));
    }

    #[test]
    fn left_regular_fiber_ranks() {
        let p = pair_groupoid(3);
        let m = gset_module(&p, &GSet::left_regular(&p));
        for x in 0..3 {
            assert_eq!(m.rank(x), p.arrows_into(x).len());
        }
    }

    #[test]
    fn pushforward_along_range_is_augmentation() {
        use crate::groupoid::{boundary_matrix, Variant};
        let g = pair_groupoid(2);
        let arrows = GSet::left_regular(&g);
        let objects = GSet::objects(&g);
        let f: Vec<usize> = (0..g.n_arrows()).map(|a| g.range(a)).collect();
        let push = pushforward(&g, &arrows, &objects, &f).unwrap();
        // Fibers of Z[G] are ordered by range then arrow, which is the arrow order
        // after grouping; compare entries arrow by arrow.
        let d0 = boundary_matrix(&g, 0, Variant::Resolution).unwrap();
        let m = gset_module(&g, &arrows);
        for a in 0..g.n_arrows() {
            let x = g.range(a);
            let local = arrows.fiber(x).iter().position(|&p| p == a).unwrap();
            let col = m.offset(x) + local;
            assert_eq!(push.total_matrix().get(x, col), d0.get(x, a));
        }
        // The source is not equivariant for left multiplication.
        let s: Vec<usize> = (0..g.n_arrows()).map(|a| g.source(a)).collect();
        assert!(pushforward(&g, &arrows, &objects, &s).is_err());
    }

    #[test]
    fn sign_character_validates() {
        let z2 = cyclic_group(2);
        let m = GModule::new(
            &z2,
            vec![1],
            vec![IntMatrix::identity(1), IntMatrix::from_rows(&[vec![-1]])],
        )
        .unwrap();
        let back = GModule::from_data(&z2, &m.to_data("Z2").unwrap()).unwrap();
        assert_eq!(back, m);
        let bad = GModule::new(
            &z2,
            vec![1],
            vec![IntMatrix::identity(1), IntMatrix::from_rows(&[vec![2]])],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn equivariance_checked() {
        let z2 = cyclic_group(2);
        let sign = GModule::new(
            &z2,
            vec![1],
            vec![IntMatrix::identity(1), IntMatrix::from_rows(&[vec![-1]])],
        )
        .unwrap();
        let triv = trivial_module(&z2);
        assert!(GModuleMap::new(&triv, &sign, vec![IntMatrix::identity(1)]).is_err());
        assert!(GModuleMap::new(&triv, &sign, vec![IntMatrix::zeros(1, 1)]).is_ok());
    }
}
