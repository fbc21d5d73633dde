//! Seeded random instances for the verification suites.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::correspondence::{from_action, from_homomorphism, from_subgroupoid, EtaleCorrespondence};
use crate::gmodule::{direct_sum, gset_module, trivial_module, zero_module, GModule};
use crate::groupoid::{
    action_groupoid, cyclic_group, discrete, disjoint_union, generated_subgroupoid, pair_groupoid, symmetric_group,
    trivial_group, FiniteGroupoid, Functor, GSet, Subgroupoid,
};
use crate::invsemi::{generated_inverse_semigroup, group_semigroup, symmetric_inverse_monoid, FiniteInverseSemigroup};

/// Fixed small groupoids covering each family.
pub fn standard_groupoids() -> Vec<FiniteGroupoid> {
    let z2 = cyclic_group(2);
    vec![
        trivial_group(),
        cyclic_group(2),
        cyclic_group(3),
        cyclic_group(4),
        symmetric_group(3),
        pair_groupoid(2),
        pair_groupoid(3),
        discrete(2),
        disjoint_union(&[&pair_groupoid(2), &z2]).expect("disjoint union"),
        action_groupoid(&z2, &GSet::left_regular(&z2)).expect("action groupoid").groupoid,
    ]
}

/// Left cosets of a subgroupoid: arrows with source in it, modulo right multiplication.
pub fn coset_gset(g: &FiniteGroupoid, sub: &Subgroupoid) -> GSet {
    let arrows: Vec<usize> = (0..g.n_arrows())
        .filter(|&a| sub.local_object(g.source(a)).is_some())
        .collect();
    let mut rep_of: HashMap<usize, usize> = HashMap::new();
    let mut reps = Vec::new();
    for &a in &arrows {
        if rep_of.contains_key(&a) {
            continue;
        }
        let idx = reps.len();
        reps.push(a);
        let y = sub.local_object(g.source(a)).expect("source in subgroupoid");
        for &b in sub.groupoid.arrows_into(y) {
            rep_of.insert(g.compose(a, sub.arrow_map[b]), idx);
        }
    }
    let names: Vec<String> = reps.iter().map(|&a| format!("{}K", g.arrow_id(a))).collect();
    GSet::from_fn(g, &names, |p| g.range(reps[p]), |a, p| rep_of[&g.compose(a, reps[p])])
        .expect("cosets form a G-set")
}

/// `X ⊔ Y`, points prefixed `0.` and `1.`.
pub fn union_gset(g: &FiniteGroupoid, x: &GSet, y: &GSet) -> GSet {
    let names: Vec<String> = x
        .points()
        .iter()
        .map(|p| format!("0.{p}"))
        .chain(y.points().iter().map(|p| format!("1.{p}")))
        .collect();
    let split = x.len();
    GSet::from_fn(
        g,
        &names,
        |p| if p < split { x.anchor(p) } else { y.anchor(p - split) },
        |a, p| {
            if p < split {
                x.act(a, p).expect("anchored")
            } else {
                split + y.act(a, p - split).expect("anchored")
            }
        },
    )
    .expect("union of G-sets")
}

pub struct Corpus {
    rng: ChaCha8Rng,
    size_bound: usize,
}

impl Corpus {
    pub fn new(seed: u64, size_bound: usize) -> Self {
        Corpus {
            rng: ChaCha8Rng::seed_from_u64(seed),
            size_bound: size_bound.max(1),
        }
    }

    pub fn size_bound(&self) -> usize {
        self.size_bound
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn base(&mut self, depth: usize) -> FiniteGroupoid {
        let r = &mut self.rng;
        match r.gen_range(0..if depth == 0 { 6 } else { 4 }) {
            0 => cyclic_group(r.gen_range(1..=6)),
            1 => pair_groupoid(r.gen_range(1..=4)),
            2 => discrete(r.gen_range(1..=3)),
            3 => {
                if r.gen_bool(0.3) {
                    symmetric_group(3)
                } else {
                    trivial_group()
                }
            }
            4 => {
                let g = cyclic_group(r.gen_range(2..=4));
                let x = if r.gen_bool(0.5) {
                    GSet::left_regular(&g)
                } else {
                    union_gset(&g, &GSet::left_regular(&g), &GSet::objects(&g))
                };
                action_groupoid(&g, &x).expect("action groupoid").groupoid
            }
            _ => {
                let a = self.base(depth + 1);
                let b = self.base(depth + 1);
                disjoint_union(&[&a, &b]).expect("disjoint union")
            }
        }
    }

    /// A groupoid with at most `bound` arrows, sometimes with shuffled identifiers.
    pub fn groupoid_within(&mut self, bound: usize) -> FiniteGroupoid {
        loop {
            let g = self.base(0);
            if g.n_arrows() > bound.max(1) {
                continue;
            }
            if self.rng.gen_bool(0.3) {
                let mut objs: Vec<usize> = (0..g.n_objects()).collect();
                let mut arrs: Vec<usize> = (0..g.n_arrows()).collect();
                objs.shuffle(&mut self.rng);
                arrs.shuffle(&mut self.rng);
                return g.relabeled(&objs, &arrs).expect("relabeling");
            }
            return g;
        }
    }

    pub fn groupoid(&mut self) -> FiniteGroupoid {
        self.groupoid_within(self.size_bound)
    }

    pub fn subgroupoid(&mut self, g: &FiniteGroupoid) -> Subgroupoid {
        let mut objs: Vec<usize> = (0..g.n_objects()).filter(|_| self.rng.gen_bool(0.6)).collect();
        if objs.is_empty() {
            objs.push(self.rng.gen_range(0..g.n_objects()));
        }
        let inside: Vec<usize> = (0..g.n_arrows())
            .filter(|&a| objs.contains(&g.source(a)) && objs.contains(&g.range(a)))
            .collect();
        let k = self.rng.gen_range(0..=2.min(inside.len()));
        let arrs: Vec<usize> = inside.choose_multiple(&mut self.rng, k).copied().collect();
        generated_subgroupoid(g, &objs, &arrs)
    }

    pub fn gset(&mut self, g: &FiniteGroupoid) -> GSet {
        match self.rng.gen_range(0..4) {
            0 => GSet::objects(g),
            1 => GSet::left_regular(g),
            2 => {
                let sub = self.subgroupoid(g);
                coset_gset(g, &sub)
            }
            _ => {
                let sub = self.subgroupoid(g);
                union_gset(g, &GSet::objects(g), &coset_gset(g, &sub))
            }
        }
    }

    pub fn module(&mut self, g: &FiniteGroupoid) -> GModule {
        match self.rng.gen_range(0..6) {
            0 | 1 => trivial_module(g),
            2 => zero_module(g),
            3 => {
                let x = self.gset(g);
                gset_module(g, &x)
            }
            _ => {
                let x = self.gset(g);
                direct_sum(&trivial_module(g), &gset_module(g, &x)).expect("same groupoid")
            }
        }
    }

    /// A correspondence out of `g` whose target has at most `bound` arrows.
    pub fn correspondence_within(&mut self, g: &FiniteGroupoid, bound: usize) -> EtaleCorrespondence {
        for _ in 0..8 {
            let c = match self.rng.gen_range(0..4) {
                0 => EtaleCorrespondence::identity(g),
                1 => {
                    let t = trivial_group();
                    let phi = Functor::new(g, &t, vec![0; g.n_objects()], vec![0; g.n_arrows()])
                        .expect("collapse is a functor");
                    from_homomorphism(g, &t, &phi).expect("homomorphism").correspondence
                }
                2 => {
                    let x = self.gset(g);
                    from_action(g, &x).expect("action").correspondence
                }
                _ => {
                    let sub = self.subgroupoid(g);
                    from_subgroupoid(g, &sub).expect("subgroupoid bispace")
                }
            };
            if c.target().n_arrows() <= bound {
                return c;
            }
        }
        EtaleCorrespondence::identity(g)
    }

    pub fn semigroup(&mut self) -> FiniteInverseSemigroup {
        match self.rng.gen_range(0..5) {
            0 => symmetric_inverse_monoid(self.rng.gen_range(1..=2)).expect("monoid"),
            1 => group_semigroup(&cyclic_group(self.rng.gen_range(1..=4))).expect("group"),
            _ => {
                let n = self.rng.gen_range(1..=3);
                let k = self.rng.gen_range(1..=2);
                let gens: Vec<Vec<Option<usize>>> = (0..k)
                    .map(|_| {
                        let mut perm: Vec<usize> = (0..n).collect();
                        perm.shuffle(&mut self.rng);
                        perm.into_iter()
                            .map(|i| if self.rng.gen_bool(0.7) { Some(i) } else { None })
                            .collect()
                    })
                    .collect();
                generated_inverse_semigroup(n, &gens).expect("generated semigroup")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_a_seed() {
        let mut a = Corpus::new(7, 24);
        let mut b = Corpus::new(7, 24);
        for _ in 0..10 {
            assert_eq!(a.groupoid(), b.groupoid());
        }
    }

    #[test]
    fn respects_bounds_and_validity() {
        let mut c = Corpus::new(1, 12);
        for _ in 0..30 {
            let g = c.groupoid();
            assert!(g.n_arrows() <= 12);
            assert!(g.validate().is_ok());
            let m = c.module(&g);
            assert!(m.validate().is_ok());
            let x = c.gset(&g);
            assert!(x.validate(&g).is_ok());
            let om = c.correspondence_within(&g, 16);
            assert!(om.validate().is_ok());
        }
        for _ in 0..10 {
            assert!(c.semigroup().validate().is_ok());
        }
    }

    #[test]
    fn cosets_of_trivial_subgroup_are_regular() {
        let g = cyclic_group(4);
        let e = crate::groupoid::subgroupoid(&g, &[0], &[0]).unwrap();
        assert_eq!(coset_gset(&g, &e).len(), 4);
        let all = crate::groupoid::subgroupoid(&g, &[0], &[0, 1, 2, 3]).unwrap();
        assert_eq!(coset_gset(&g, &all).len(), 1);
    }
}
