//! Étale correspondences `Ω: G -> H` between finite groupoids: a set with a
//! left `G`-action along `ρ` and a free right `H`-action along `σ`, commuting.

mod examples;
mod induce;
mod lift;

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result, Violation};
use crate::groupoid::FiniteGroupoid;
use crate::schema::CorrespondenceData;

pub use examples::{from_action, from_homomorphism, from_subgroupoid, ActionCorrespondence, HomomorphismCorrespondence};
pub use induce::{delta, delta_matrix, induce_module, induce_module_map, rho_bar_pullback};
pub use lift::{
    homology_map, homology_map_with, homology_maps, homology_maps_with, lift_chain_map, maps_from_lift,
    verify_lift, ChainLift, IndElem,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaleCorrespondence {
    source: FiniteGroupoid,
    target: FiniteGroupoid,
    points: Vec<String>,
    rho: Vec<usize>,
    sigma: Vec<usize>,
    /// `left[g * |Ω| + p] = g·p`.
    left: Vec<Option<usize>>,
    /// `right[h * |Ω| + p] = p·h`.
    right: Vec<Option<usize>>,
}

impl EtaleCorrespondence {
    /// Builds from closures over the given point order; points are then sorted
    /// by identifier. Closures are only called where the action is defined.
    pub fn from_fn(
        g: &FiniteGroupoid,
        h: &FiniteGroupoid,
        names: &[String],
        rho: impl Fn(usize) -> usize,
        sigma: impl Fn(usize) -> usize,
        left: impl Fn(usize, usize) -> usize,
        right: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let c = Self::from_fn_unchecked(g, h, names, rho, sigma, left, right)?;
        c.validate()?;
        Ok(c)
    }

    pub fn from_fn_unchecked(
        g: &FiniteGroupoid,
        h: &FiniteGroupoid,
        names: &[String],
        rho: impl Fn(usize) -> usize,
        sigma: impl Fn(usize) -> usize,
        left: impl Fn(usize, usize) -> usize,
        right: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let n = names.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| names[a].cmp(&names[b]));
        if let Some(w) = order.windows(2).find(|w| names[w[0]] == names[w[1]]) {
            return Err(Violation::new("duplicate point", names[w[0]].clone()).into());
        }
        let mut new_of = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            new_of[old] = new;
        }
        let points: Vec<String> = order.iter().map(|&i| names[i].clone()).collect();
        let mut r = vec![0; n];
        let mut s = vec![0; n];
        for old in 0..n {
            r[new_of[old]] = rho(old);
            s[new_of[old]] = sigma(old);
        }
        if let Some(p) = r.iter().position(|&x| x >= g.n_objects()) {
            return Err(Violation::new("anchor out of range", points[p].clone()).into());
        }
        if let Some(p) = s.iter().position(|&y| y >= h.n_objects()) {
            return Err(Violation::new("anchor out of range", points[p].clone()).into());
        }
        let image = |q: usize| -> Result<usize> {
            if q < n {
                Ok(new_of[q])
            } else {
                Err(Error::IndexOutOfRange {
                    context: "action image",
                    index: q,
                    bound: n,
                })
            }
        };
        let mut lt = vec![None; g.n_arrows() * n];
        for a in 0..g.n_arrows() {
            for old in 0..n {
                if g.source(a) == r[new_of[old]] {
                    lt[a * n + new_of[old]] = Some(image(left(a, old))?);
                }
            }
        }
        let mut rt = vec![None; h.n_arrows() * n];
        for b in 0..h.n_arrows() {
            for old in 0..n {
                if h.range(b) == s[new_of[old]] {
                    rt[b * n + new_of[old]] = Some(image(right(old, b))?);
                }
            }
        }
        Ok(EtaleCorrespondence {
            source: g.clone(),
            target: h.clone(),
            points,
            rho: r,
            sigma: s,
            left: lt,
            right: rt,
        })
    }

    /// Reads the JSON form without checking the axioms.
    pub fn from_data_unchecked(g: &FiniteGroupoid, h: &FiniteGroupoid, data: &CorrespondenceData) -> Result<Self> {
        let index: HashMap<&str, usize> = data
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_str(), i))
            .collect();
        let point = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::from(Violation::new("unknown point", format!("{s:?}"))))
        };
        let anchors = |map: &BTreeMap<String, String>, grp: &FiniteGroupoid, what: &'static str| {
            let mut out = vec![usize::MAX; data.points.len()];
            for (p, x) in map {
                out[point(p)?] = grp
                    .object_index(x)
                    .ok_or_else(|| Violation::new("unknown object", format!("{x:?}")))?;
            }
            if let Some(p) = out.iter().position(|&x| x == usize::MAX) {
                return Err(Error::from(Violation::new(what, data.points[p].clone())));
            }
            Ok(out)
        };
        let rho = anchors(&data.rho, g, "missing rho")?;
        let sigma = anchors(&data.sigma, h, "missing sigma")?;
        let mut left = HashMap::new();
        for [a, p, q] in &data.left {
            let a = g
                .arrow_index(a)
                .ok_or_else(|| Violation::new("unknown arrow", format!("{a:?}")))?;
            if left.insert((a, point(p)?), point(q)?).is_some() {
                return Err(Violation::new("conflicting action", format!("{} on {p}", g.arrow_id(a))).into());
            }
        }
        let mut right = HashMap::new();
        for [p, b, q] in &data.right {
            let b = h
                .arrow_index(b)
                .ok_or_else(|| Violation::new("unknown arrow", format!("{b:?}")))?;
            if right.insert((point(p)?, b), point(q)?).is_some() {
                return Err(Violation::new("conflicting action", format!("{p} by {}", h.arrow_id(b))).into());
            }
        }
        for a in 0..g.n_arrows() {
            for p in 0..data.points.len() {
                if left.contains_key(&(a, p)) != (g.source(a) == rho[p]) {
                    return Err(Violation::new(
                        "left action domain",
                        format!("{} on {}", g.arrow_id(a), data.points[p]),
                    )
                    .into());
                }
            }
        }
        for b in 0..h.n_arrows() {
            for p in 0..data.points.len() {
                if right.contains_key(&(p, b)) != (h.range(b) == sigma[p]) {
                    return Err(Violation::new(
                        "right action domain",
                        format!("{} by {}", data.points[p], h.arrow_id(b)),
                    )
                    .into());
                }
            }
        }
        Self::from_fn_unchecked(
            g,
            h,
            &data.points,
            |p| rho[p],
            |p| sigma[p],
            |a, p| left[&(a, p)],
            |p, b| right[&(p, b)],
        )
    }

    pub fn from_data(g: &FiniteGroupoid, h: &FiniteGroupoid, data: &CorrespondenceData) -> Result<Self> {
        let c = Self::from_data_unchecked(g, h, data)?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_data(&self, source: &str, target: &str) -> CorrespondenceData {
        let (g, h) = (&self.source, &self.target);
        let mut left = Vec::new();
        for a in 0..g.n_arrows() {
            for p in 0..self.len() {
                if let Some(q) = self.left_act(a, p) {
                    left.push([g.arrow_id(a).to_string(), self.points[p].clone(), self.points[q].clone()]);
                }
            }
        }
        let mut right = Vec::new();
        for p in 0..self.len() {
            for b in 0..h.n_arrows() {
                if let Some(q) = self.right_act(p, b) {
                    right.push([self.points[p].clone(), h.arrow_id(b).to_string(), self.points[q].clone()]);
                }
            }
        }
        CorrespondenceData {
            source: source.to_string(),
            target: target.to_string(),
            points: self.points.clone(),
            rho: (0..self.len())
                .map(|p| (self.points[p].clone(), g.object_id(self.rho[p]).to_string()))
                .collect(),
            sigma: (0..self.len())
                .map(|p| (self.points[p].clone(), h.object_id(self.sigma[p]).to_string()))
                .collect(),
            left,
            right,
        }
    }

    /// Checks every bispace axiom and freeness of the right action.
    pub fn validate(&self) -> Result<(), Violation> {
        let (g, h) = (&self.source, &self.target);
        let name = |p: usize| &self.points[p];
        for p in 0..self.len() {
            if self.left_act(g.unit(self.rho[p]), p) != Some(p) {
                return Err(Violation::new("left unit", format!("unit does not fix {}", name(p))));
            }
            if self.right_act(p, h.unit(self.sigma[p])) != Some(p) {
                return Err(Violation::new("right unit", format!("unit does not fix {}", name(p))));
            }
        }
        for a in 0..g.n_arrows() {
            for p in 0..self.len() {
                let Some(q) = self.left_act(a, p) else { continue };
                if self.rho[q] != g.range(a) || self.sigma[q] != self.sigma[p] {
                    return Err(Violation::new(
                        "left action anchors",
                        format!("{}·{} = {}", g.arrow_id(a), name(p), name(q)),
                    ));
                }
                for &b in g.arrows_out_of(g.range(a)) {
                    if self.left_act(b, q) != self.left_act(g.compose(b, a), p) {
                        return Err(Violation::new(
                            "left action associativity",
                            format!("{}·({}·{})", g.arrow_id(b), g.arrow_id(a), name(p)),
                        ));
                    }
                }
            }
        }
        for b in 0..h.n_arrows() {
            for p in 0..self.len() {
                let Some(q) = self.right_act(p, b) else { continue };
                if self.sigma[q] != h.source(b) || self.rho[q] != self.rho[p] {
                    return Err(Violation::new(
                        "right action anchors",
                        format!("{}·{} = {}", name(p), h.arrow_id(b), name(q)),
                    ));
                }
                for &c in h.arrows_into(h.source(b)) {
                    if self.right_act(q, c) != self.right_act(p, h.compose(b, c)) {
                        return Err(Violation::new(
                            "right action associativity",
                            format!("({}·{})·{}", name(p), h.arrow_id(b), h.arrow_id(c)),
                        ));
                    }
                }
                if q == p && !h.is_unit(b) {
                    return Err(Violation::new(
                        "right action not free",
                        format!("{}·{} = {}", name(p), h.arrow_id(b), name(p)),
                    ));
                }
            }
        }
        for a in 0..g.n_arrows() {
            for p in 0..self.len() {
                let Some(q) = self.left_act(a, p) else { continue };
                for &b in h.arrows_into(self.sigma[p]) {
                    let lhs = self.right_act(q, b);
                    let rhs = self.right_act(p, b).and_then(|pb| self.left_act(a, pb));
                    if lhs != rhs {
                        return Err(Violation::new(
                            "actions do not commute",
                            format!("({}·{})·{} != {}·({}·{})", g.arrow_id(a), name(p), h.arrow_id(b), g.arrow_id(a), name(p), h.arrow_id(b)),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &FiniteGroupoid {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroupoid {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn point_id(&self, p: usize) -> &str {
        &self.points[p]
    }

    pub fn point_index(&self, id: &str) -> Option<usize> {
        self.points.binary_search_by(|p| p.as_str().cmp(id)).ok()
    }

    pub fn rho(&self, p: usize) -> usize {
        self.rho[p]
    }

    pub fn sigma(&self, p: usize) -> usize {
        self.sigma[p]
    }

    pub fn rhos(&self) -> &[usize] {
        &self.rho
    }

    pub fn sigmas(&self) -> &[usize] {
        &self.sigma
    }

    pub fn left_act(&self, g: usize, p: usize) -> Option<usize> {
        self.left[g * self.len() + p]
    }

    pub fn right_act(&self, p: usize, h: usize) -> Option<usize> {
        self.right[h * self.len() + p]
    }

    /// The right `H`-set underlying the correspondence.
    pub fn right_set(&self) -> crate::groupoid::RightGSet {
        crate::groupoid::RightGSet::from_fn(
            &self.target,
            &self.points,
            |p| self.sigma[p],
            |p, b| self.right_act(p, b).unwrap(),
        )
        .expect("validated right action")
    }

    /// Orbits of the right action.
    pub fn orbits(&self) -> crate::gmodule::Orbits {
        crate::gmodule::Orbits::new(&self.target, &self.sigma, |p, b| self.right_act(p, b))
            .expect("validated right action")
    }

    /// The identity correspondence: the arrows of `h`, acting on both sides by composition.
    pub fn identity(h: &FiniteGroupoid) -> Self {
        Self::from_fn(
            h,
            h,
            h.arrows(),
            |a| h.range(a),
            |a| h.source(a),
            |b, a| h.compose(b, a),
            |a, b| h.compose(a, b),
        )
        .expect("identity correspondence is valid")
    }

    /// `other ∘ self`: `H`-orbits of pairs `(ω, λ)` with `σ(ω) = ρ(λ)`, under
    /// `(ω·h, λ) ~ (ω, h·λ)`, each represented by its least pair.
    pub fn compose(&self, other: &EtaleCorrespondence) -> Result<EtaleCorrespondence> {
        self.target
            .ensure_same(&other.source, "composed correspondences do not match")?;
        let h = &self.target;
        let mut reps: Vec<(usize, usize)> = Vec::new();
        let mut class: HashMap<(usize, usize), usize> = HashMap::new();
        for w in 0..self.len() {
            for l in 0..other.len() {
                if self.sigma[w] != other.rho[l] || class.contains_key(&(w, l)) {
                    continue;
                }
                let id = reps.len();
                reps.push((w, l));
                for &b in h.arrows_into(self.sigma[w]) {
                    let wb = self.right_act(w, b).unwrap();
                    let bl = other.left_act(h.inverse(b), l).unwrap();
                    class.insert((wb, bl), id);
                }
            }
        }
        let names: Vec<String> = reps
            .iter()
            .map(|&(w, l)| format!("({},{})", self.points[w], other.points[l]))
            .collect();
        EtaleCorrespondence::from_fn(
            &self.source,
            &other.target,
            &names,
            |i| self.rho[reps[i].0],
            |i| other.sigma[reps[i].1],
            |a, i| {
                let (w, l) = reps[i];
                class[&(self.left_act(a, w).unwrap(), l)]
            },
            |i, c| {
                let (w, l) = reps[i];
                class[&(w, other.right_act(l, c).unwrap())]
            },
        )
    }

    /// A bijection of points (index in `self` to index in `other`) respecting
    /// anchors and both actions, if one exists.
    pub fn find_isomorphism(&self, other: &EtaleCorrespondence) -> Option<Vec<usize>> {
        if self.source != other.source || self.target != other.target || self.len() != other.len() {
            return None;
        }
        let mut map = vec![None; self.len()];
        let mut used = vec![false; other.len()];
        if self.extend_iso(other, &mut map, &mut used) {
            Some(map.into_iter().map(Option::unwrap).collect())
        } else {
            None
        }
    }

    fn extend_iso(&self, other: &EtaleCorrespondence, map: &mut [Option<usize>], used: &mut [bool]) -> bool {
        let Some(p) = map.iter().position(Option::is_none) else {
            return true;
        };
        for q in 0..other.len() {
            if used[q] || self.rho[p] != other.rho[q] || self.sigma[p] != other.sigma[q] {
                continue;
            }
            // Propagate p -> q through both actions; undo on conflict.
            let mut assigned = Vec::new();
            let mut stack = vec![(p, q)];
            let mut ok = true;
            while let Some((a, b)) = stack.pop() {
                match map[a] {
                    Some(c) if c == b => continue,
                    Some(_) => {
                        ok = false;
                        break;
                    }
                    None => {}
                }
                if used[b] || self.rho[a] != other.rho[b] || self.sigma[a] != other.sigma[b] {
                    ok = false;
                    break;
                }
                map[a] = Some(b);
                used[b] = true;
                assigned.push(a);
                for &g in self.source.arrows_out_of(self.rho[a]) {
                    stack.push((self.left_act(g, a).unwrap(), other.left_act(g, b).unwrap()));
                }
                for &h in self.target.arrows_into(self.sigma[a]) {
                    stack.push((self.right_act(a, h).unwrap(), other.right_act(b, h).unwrap()));
                }
            }
            if ok && self.extend_iso(other, map, used) {
                return true;
            }
            for a in assigned {
                used[map[a].unwrap()] = false;
                map[a] = None;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{cyclic_group, pair_groupoid, symmetric_group, trivial_group};

    fn collapse(k: usize) -> EtaleCorrespondence {
        let p = pair_groupoid(k);
        let t = trivial_group();
        let names: Vec<String> = p.objects().to_vec();
        EtaleCorrespondence::from_fn(&p, &t, &names, |x| x, |_| 0, |a, _| p.range(a), |x, _| x).unwrap()
    }

    #[test]
    fn identity_is_valid() {
        for g in [cyclic_group(3), pair_groupoid(2), symmetric_group(3)] {
            EtaleCorrespondence::identity(&g).validate().unwrap();
        }
    }

    #[test]
    fn stabilizer_detected() {
        let z2 = cyclic_group(2);
        let t = trivial_group();
        // One point, Z/2 acting trivially on the right.
        let c = EtaleCorrespondence::from_fn_unchecked(&t, &z2, &["w".into()], |_| 0, |_| 0, |_, p| p, |p, _| p)
            .unwrap();
        assert_eq!(c.validate().unwrap_err().rule, "right action not free");
    }

    #[test]
    fn corrupted_commutation_detected() {
        let g = cyclic_group(3);
        let id = EtaleCorrespondence::identity(&g);
        let mut data = id.to_data("G", "G");
        // Make the left action of "1" act as "2" would: still an action? No: it
        // breaks either associativity or commutation, reported with a witness.
        for t in data.left.iter_mut() {
            if t[0] == "1" {
                t[2] = g.arrow_id(g.compose(2, g.arrow_index(&t[1]).unwrap())).to_string();
            }
        }
        let c = EtaleCorrespondence::from_data_unchecked(&g, &g, &data).unwrap();
        let v = c.validate().unwrap_err();
        assert!(v.witness.contains('·'), "{v}");
        // Same experiment on the right action of the identity of Z/3 acting on a
        // free two-sided set: swapping one right product breaks commutation.
        let mut data = id.to_data("G", "G");
        let i = data.right.iter().position(|t| t[0] == "1" && t[1] == "1").unwrap();
        data.right[i][2] = "0".into();
        let c = EtaleCorrespondence::from_data_unchecked(&g, &g, &data).unwrap();
        assert!(c.validate().is_err());
    }

    #[test]
    fn compose_with_identity() {
        let c = collapse(2);
        let t = trivial_group();
        let composed = c.compose(&EtaleCorrespondence::identity(&t)).unwrap();
        assert!(composed.find_isomorphism(&c).is_some());
        let composed = EtaleCorrespondence::identity(c.source()).compose(&c).unwrap();
        assert!(composed.find_isomorphism(&c).is_some());
    }

    #[test]
    fn composition_counts_orbits() {
        let s3 = symmetric_group(3);
        let id = EtaleCorrespondence::identity(&s3);
        let both = id.compose(&id).unwrap();
        // 36 composable pairs in free orbits of size 6.
        assert_eq!(both.len(), 6);
        assert!(both.find_isomorphism(&id).is_some());
    }

    #[test]
    fn json_round_trip() {
        let c = collapse(3);
        let back = EtaleCorrespondence::from_data(c.source(), c.target(), &c.to_data("P3", "T")).unwrap();
        assert_eq!(back, c);
    }
}
