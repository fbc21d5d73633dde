//! Finite discrete groupoids, their nerves, face maps and the bar homotopy.
//!
//! # Conventions
//!
//! An arrow `g` goes from `source(g)` to `range(g)`. The product `g·h` is
//! defined exactly when `source(g) == range(h)`, and a composable tuple
//! `(g_1, ..., g_n)` satisfies `source(g_i) == range(g_{i+1})`, read left to
//! right. Swapping this convention transposes every boundary matrix.
//!
//! Objects and arrows are stored sorted by identifier. Indices therefore
//! follow lexicographic identifier order, and every basis derived from them
//! (nerves, induced modules) inherits that order.

mod build;
mod faces;
mod functor;
mod gset;
mod nerve;

use std::collections::HashMap;

use crate::error::{Error, Result, Violation};
use crate::schema::{ArrowData, GroupoidData};

pub use build::{
    action_groupoid, cyclic_group, discrete, disjoint_union, from_group, full_subgroupoid,
    generated_subgroupoid, pair_groupoid, subgroupoid, symmetric_group, trivial_group,
    unit_subgroupoid, ActionGroupoid, Subgroupoid,
};
pub use faces::{boundary_matrix, face_matrix, face_tuple, homotopy_matrix, Variant};
pub use functor::Functor;
pub use gset::{GSet, RightGSet};
pub use nerve::{nerve, Nerve};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    objects: Vec<String>,
    arrows: Vec<String>,
    source: Vec<usize>,
    range: Vec<usize>,
    /// `compose[g * n + h] = g·h`.
    compose: Vec<Option<usize>>,
    inverse: Vec<usize>,
    unit: Vec<usize>,
    object_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
    into: Vec<Vec<usize>>,
    out_of: Vec<Vec<usize>>,
}

fn index_of(
    names: &HashMap<String, usize>,
    name: &str,
    rule: &'static str,
) -> Result<usize, Violation> {
    names
        .get(name)
        .copied()
        .ok_or_else(|| Violation::new(rule, format!("unknown identifier {name:?}")))
}

fn unique_sorted(names: &[String], what: &'static str) -> Result<Vec<String>, Violation> {
    let mut sorted = names.to_vec();
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Violation::new(what, format!("duplicate identifier {:?}", w[0])));
    }
    Ok(sorted)
}

impl FiniteGroupoid {
    /// Builds the tables without checking the groupoid axioms.
    ///
    /// Only structural problems (unknown or duplicate identifiers, conflicting
    /// products, missing units) are reported here; see [`Self::validate`].
    pub fn from_data_unchecked(data: &GroupoidData) -> Result<Self, Violation> {
        let objects = unique_sorted(&data.objects, "duplicate object")?;
        let arrow_ids: Vec<String> = data.arrows.iter().map(|a| a.id.clone()).collect();
        let arrows = unique_sorted(&arrow_ids, "duplicate arrow")?;
        let object_index: HashMap<String, usize> = objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.clone(), i))
            .collect();
        let arrow_index: HashMap<String, usize> = arrows
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        let n = arrows.len();
        let mut source = vec![0; n];
        let mut range = vec![0; n];
        for a in &data.arrows {
            let g = arrow_index[&a.id];
            source[g] = index_of(&object_index, &a.src, "arrow endpoint")?;
            range[g] = index_of(&object_index, &a.dst, "arrow endpoint")?;
        }
        let mut compose = vec![None; n * n];
        for [a, b, ab] in &data.mul {
            let g = index_of(&arrow_index, a, "composition table")?;
            let h = index_of(&arrow_index, b, "composition table")?;
            let gh = index_of(&arrow_index, ab, "composition table")?;
            match compose[g * n + h] {
                Some(prev) if prev != gh => {
                    return Err(Violation::new(
                        "conflicting products",
                        format!("{a}·{b} listed as both {} and {ab}", arrows[prev]),
                    ))
                }
                _ => compose[g * n + h] = Some(gh),
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for (a, b) in &data.inv {
            let g = index_of(&arrow_index, a, "inverse table")?;
            inverse[g] = index_of(&arrow_index, b, "inverse table")?;
        }
        if let Some(g) = inverse.iter().position(|&i| i == usize::MAX) {
            return Err(Violation::new(
                "missing inverse",
                format!("no inverse listed for {:?}", arrows[g]),
            ));
        }
        let mut unit = vec![usize::MAX; objects.len()];
        for g in 0..n {
            if source[g] == range[g] && compose[g * n + g] == Some(g) && unit[source[g]] == usize::MAX
            {
                unit[source[g]] = g;
            }
        }
        if let Some(x) = unit.iter().position(|&u| u == usize::MAX) {
            return Err(Violation::new(
                "missing unit",
                format!("no idempotent loop at object {:?}", objects[x]),
            ));
        }
        let mut into = vec![Vec::new(); objects.len()];
        let mut out_of = vec![Vec::new(); objects.len()];
        for g in 0..n {
            into[range[g]].push(g);
            out_of[source[g]].push(g);
        }
        Ok(FiniteGroupoid {
            objects,
            arrows,
            source,
            range,
            compose,
            inverse,
            unit,
            object_index,
            arrow_index,
            into,
            out_of,
        })
    }

    /// Builds and validates.
    pub fn from_data(data: &GroupoidData) -> Result<Self> {
        let g = Self::from_data_unchecked(data)?;
        g.validate()?;
        Ok(g)
    }

    pub fn to_data(&self) -> GroupoidData {
        let n = self.n_arrows();
        let mut mul = Vec::new();
        for g in 0..n {
            for h in 0..n {
                if let Some(gh) = self.compose[g * n + h] {
                    mul.push([
                        self.arrows[g].clone(),
                        self.arrows[h].clone(),
                        self.arrows[gh].clone(),
                    ]);
                }
            }
        }
        GroupoidData {
            objects: self.objects.clone(),
            arrows: (0..n)
                .map(|g| ArrowData {
                    id: self.arrows[g].clone(),
                    src: self.objects[self.source[g]].clone(),
                    dst: self.objects[self.range[g]].clone(),
                })
                .collect(),
            mul,
            inv: (0..n)
                .map(|g| (self.arrows[g].clone(), self.arrows[self.inverse[g]].clone()))
                .collect(),
        }
    }

    /// Exhaustively checks the groupoid axioms; reports the first violation.
    pub fn validate(&self) -> Result<(), Violation> {
        let n = self.n_arrows();
        let name = |g: usize| &self.arrows[g];
        for g in 0..n {
            for h in 0..n {
                let composable = self.source[g] == self.range[h];
                match (composable, self.compose[g * n + h]) {
                    (false, Some(_)) => {
                        return Err(Violation::new(
                            "not composable",
                            format!("{}·{} listed but src({}) != dst({})", name(g), name(h), name(g), name(h)),
                        ))
                    }
                    (true, None) => {
                        return Err(Violation::new(
                            "composition table incomplete",
                            format!("missing product {}·{}", name(g), name(h)),
                        ))
                    }
                    (true, Some(gh)) => {
                        if self.source[gh] != self.source[h] || self.range[gh] != self.range[g] {
                            return Err(Violation::new(
                                "product endpoints",
                                format!("{}·{} = {} has wrong endpoints", name(g), name(h), name(gh)),
                            ));
                        }
                    }
                    (false, None) => {}
                }
            }
        }
        for (x, &u) in self.unit.iter().enumerate() {
            for &g in &self.into[x] {
                if self.compose[u * n + g] != Some(g) {
                    return Err(Violation::new(
                        "unit law",
                        format!("{}·{} != {}", name(u), name(g), name(g)),
                    ));
                }
            }
            for &g in &self.out_of[x] {
                if self.compose[g * n + u] != Some(g) {
                    return Err(Violation::new(
                        "unit law",
                        format!("{}·{} != {}", name(g), name(u), name(g)),
                    ));
                }
            }
        }
        for g in 0..n {
            for &h in &self.out_of_range_of(g) {
                let gh = self.compose[g * n + h].unwrap();
                for &k in &self.out_of_range_of(h) {
                    let hk = self.compose[h * n + k].unwrap();
                    if self.compose[gh * n + k] != self.compose[g * n + hk] {
                        return Err(Violation::new(
                            "associativity",
                            format!("({}·{})·{} != {}·({}·{})", name(g), name(h), name(k), name(g), name(h), name(k)),
                        ));
                    }
                }
            }
        }
        for g in 0..n {
            let gi = self.inverse[g];
            if self.compose[g * n + gi] != Some(self.unit[self.range[g]])
                || self.compose[gi * n + g] != Some(self.unit[self.source[g]])
            {
                return Err(Violation::new(
                    "inverse",
                    format!("{} is not inverse to {}", name(gi), name(g)),
                ));
            }
        }
        Ok(())
    }

    /// Arrows `h` with `range(h) == source(g)`, i.e. those composable on the right of `g`.
    fn out_of_range_of(&self, g: usize) -> Vec<usize> {
        self.into[self.source[g]].clone()
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[String] {
        &self.arrows
    }

    pub fn object_id(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn arrow_id(&self, g: usize) -> &str {
        &self.arrows[g]
    }

    pub fn object_index(&self, id: &str) -> Option<usize> {
        self.object_index.get(id).copied()
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrow_index.get(id).copied()
    }

    pub fn source(&self, g: usize) -> usize {
        self.source[g]
    }

    pub fn range(&self, g: usize) -> usize {
        self.range[g]
    }

    pub fn unit(&self, x: usize) -> usize {
        self.unit[x]
    }

    pub fn is_unit(&self, g: usize) -> bool {
        self.unit[self.source[g]] == g
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn try_compose(&self, g: usize, h: usize) -> Option<usize> {
        self.compose[g * self.n_arrows() + h]
    }

    /// `g·h`; panics unless `source(g) == range(h)`.
    pub fn compose(&self, g: usize, h: usize) -> usize {
        self.try_compose(g, h).unwrap_or_else(|| {
            panic!("{}·{} is not composable", self.arrows[g], self.arrows[h])
        })
    }

    /// Arrows with range `x`, ascending.
    pub fn arrows_into(&self, x: usize) -> &[usize] {
        &self.into[x]
    }

    /// Arrows with source `x`, ascending.
    pub fn arrows_out_of(&self, x: usize) -> &[usize] {
        &self.out_of[x]
    }

    pub fn is_group(&self) -> bool {
        self.n_objects() == 1
    }

    /// Objects grouped into orbits (connected components), each sorted, ordered by least member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n_objects()];
        let mut out = Vec::new();
        for x in 0..self.n_objects() {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = self.out_of[x].iter().map(|&g| self.range[g]).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push(orbit);
        }
        out
    }

    /// Arrows from `x` to `x`.
    pub fn isotropy(&self, x: usize) -> Vec<usize> {
        self.out_of[x]
            .iter()
            .copied()
            .filter(|&g| self.range[g] == x)
            .collect()
    }

    /// Relabels through permutations of object and arrow indices, renaming
    /// identifiers so that the new sorted order realizes the permutation.
    pub fn relabeled(&self, object_perm: &[usize], arrow_perm: &[usize]) -> Result<Self> {
        let width = |n: usize| n.to_string().len();
        let (wo, wa) = (width(self.n_objects()), width(self.n_arrows()));
        let obj = |x: usize| format!("o{:0wo$}", object_perm[x]);
        let arr = |g: usize| format!("a{:0wa$}", arrow_perm[g]);
        let mut data = self.to_data();
        data.objects = (0..self.n_objects()).map(obj).collect();
        for a in &mut data.arrows {
            let g = self.arrow_index[&a.id];
            a.id = arr(g);
            a.src = obj(self.source[g]);
            a.dst = obj(self.range[g]);
        }
        for t in &mut data.mul {
            for s in t.iter_mut() {
                *s = arr(self.arrow_index[s.as_str()]);
            }
        }
        data.inv = (0..self.n_arrows())
            .map(|g| (arr(g), arr(self.inverse[g])))
            .collect();
        Self::from_data(&data)
    }

    /// Checks that `other` refers to the same groupoid (same identifier tables).
    pub fn ensure_same(&self, other: &FiniteGroupoid, context: &str) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GroupoidMismatch(context.to_string()))
        }
    }
}
