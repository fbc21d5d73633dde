//! Finite sets with a groupoid action, anchored over the objects.

use std::collections::HashMap;

use super::FiniteGroupoid;
use crate::error::{Error, Result, Violation};
use crate::schema::GSetData;

/// Sorts `names` and returns (sorted names, old index -> new index).
fn sort_names(names: &[String]) -> Result<(Vec<String>, Vec<usize>), Violation> {
    let mut order: Vec<usize> = (0..names.len()).collect();
    order.sort_by(|&a, &b| names[a].cmp(&names[b]));
    if let Some(w) = order.windows(2).find(|w| names[w[0]] == names[w[1]]) {
        return Err(Violation::new("duplicate point", format!("{:?}", names[w[0]])));
    }
    let mut new_of = vec![0; names.len()];
    for (new, &old) in order.iter().enumerate() {
        new_of[old] = new;
    }
    Ok((order.iter().map(|&i| names[i].clone()).collect(), new_of))
}

/// A left action: `g·p` is defined when `s(g) = anchor(p)`, and lands over `r(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSet {
    points: Vec<String>,
    anchor: Vec<usize>,
    table: Vec<Option<usize>>,
}

impl GSet {
    /// Builds from closures on the given (unsorted) point order, then validates.
    pub fn from_fn(
        g: &FiniteGroupoid,
        names: &[String],
        anchor: impl Fn(usize) -> usize,
        act: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let (points, new_of) = sort_names(names)?;
        let n = points.len();
        let mut anch = vec![0; n];
        for (old, &new) in new_of.iter().enumerate() {
            anch[new] = anchor(old);
        }
        let mut table = vec![None; g.n_arrows() * n];
        for a in 0..g.n_arrows() {
            for (old, &new) in new_of.iter().enumerate() {
                if g.source(a) == anch[new] {
                    let image = act(a, old);
                    if image >= n {
                        return Err(Error::IndexOutOfRange {
                            context: "action image",
                            index: image,
                            bound: n,
                        });
                    }
                    table[a * n + new] = Some(new_of[image]);
                }
            }
        }
        let x = GSet {
            points,
            anchor: anch,
            table,
        };
        x.validate(g)?;
        Ok(x)
    }

    /// The objects, acted on by `g·s(g) = r(g)`.
    pub fn objects(g: &FiniteGroupoid) -> Self {
        let names = g.objects().to_vec();
        Self::from_fn(g, &names, |x| x, |a, _| g.range(a)).expect("canonical action")
    }

    /// The arrows under left multiplication, anchored by the range.
    pub fn left_regular(g: &FiniteGroupoid) -> Self {
        let names = g.arrows().to_vec();
        Self::from_fn(g, &names, |h| g.range(h), |a, h| g.compose(a, h)).expect("left regular action")
    }

    pub fn from_data(g: &FiniteGroupoid, data: &GSetData) -> Result<Self> {
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
                .ok_or_else(|| Violation::new("unknown point", format!("{s:?}")))
        };
        let mut anchor = vec![usize::MAX; data.points.len()];
        for (p, x) in &data.anchor {
            anchor[point(p)?] = g
                .object_index(x)
                .ok_or_else(|| Violation::new("unknown object", format!("{x:?}")))?;
        }
        if let Some(p) = anchor.iter().position(|&x| x == usize::MAX) {
            return Err(Violation::new("missing anchor", data.points[p].clone()).into());
        }
        let mut act: HashMap<(usize, usize), usize> = HashMap::new();
        for [a, p, q] in &data.action {
            let a = g
                .arrow_index(a)
                .ok_or_else(|| Violation::new("unknown arrow", format!("{a:?}")))?;
            if act.insert((a, point(p)?), point(q)?).is_some() {
                return Err(Violation::new("conflicting action", format!("{} on {p}", g.arrow_id(a))).into());
            }
        }
        for a in 0..g.n_arrows() {
            for p in 0..data.points.len() {
                let defined = act.contains_key(&(a, p));
                if defined != (g.source(a) == anchor[p]) {
                    return Err(Violation::new(
                        "action not covering anchor",
                        format!("{} on {}", g.arrow_id(a), data.points[p]),
                    )
                    .into());
                }
            }
        }
        Self::from_fn(g, &data.points, |p| anchor[p], |a, p| act[&(a, p)])
    }

    pub fn to_data(&self, g: &FiniteGroupoid, groupoid: &str) -> GSetData {
        let mut action = Vec::new();
        for a in 0..g.n_arrows() {
            for p in 0..self.len() {
                if let Some(q) = self.act(a, p) {
                    action.push([
                        g.arrow_id(a).to_string(),
                        self.points[p].clone(),
                        self.points[q].clone(),
                    ]);
                }
            }
        }
        GSetData {
            groupoid: groupoid.to_string(),
            points: self.points.clone(),
            anchor: (0..self.len())
                .map(|p| (self.points[p].clone(), g.object_id(self.anchor[p]).to_string()))
                .collect(),
            action,
        }
    }

    pub fn validate(&self, g: &FiniteGroupoid) -> Result<(), Violation> {
        let n = self.len();
        if self.table.len() != g.n_arrows() * n {
            return Err(Violation::new("action table size", "does not match the groupoid"));
        }
        for p in 0..n {
            if self.anchor[p] >= g.n_objects() {
                return Err(Violation::new("anchor", format!("{} anchored outside", self.points[p])));
            }
            if self.act(g.unit(self.anchor[p]), p) != Some(p) {
                return Err(Violation::new("unit acts trivially", self.points[p].clone()));
            }
        }
        for a in 0..g.n_arrows() {
            for p in 0..n {
                let Some(q) = self.act(a, p) else { continue };
                if self.anchor[q] != g.range(a) {
                    return Err(Violation::new(
                        "anchor equivariance",
                        format!("{}·{} not over {}", g.arrow_id(a), self.points[p], g.object_id(g.range(a))),
                    ));
                }
                for &b in g.arrows_out_of(g.range(a)) {
                    if self.act(b, q) != self.act(g.compose(b, a), p) {
                        return Err(Violation::new(
                            "action associativity",
                            format!("{}·({}·{})", g.arrow_id(b), g.arrow_id(a), self.points[p]),
                        ));
                    }
                }
            }
        }
        Ok(())
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

    pub fn anchor(&self, p: usize) -> usize {
        self.anchor[p]
    }

    /// `g·p`, or `None` when `s(g)` differs from the anchor of `p`.
    pub fn act(&self, g: usize, p: usize) -> Option<usize> {
        self.table[g * self.len() + p]
    }

    /// Points anchored at `x`, ascending.
    pub fn fiber(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&p| self.anchor[p] == x).collect()
    }
}

/// A right action: `p·g` is defined when `anchor(p) = r(g)`, and lands over `s(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightGSet {
    points: Vec<String>,
    anchor: Vec<usize>,
    table: Vec<Option<usize>>,
}

impl RightGSet {
    pub fn from_fn(
        g: &FiniteGroupoid,
        names: &[String],
        anchor: impl Fn(usize) -> usize,
        act: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let (points, new_of) = sort_names(names)?;
        let n = points.len();
        let mut anch = vec![0; n];
        for (old, &new) in new_of.iter().enumerate() {
            anch[new] = anchor(old);
        }
        let mut table = vec![None; g.n_arrows() * n];
        for a in 0..g.n_arrows() {
            for (old, &new) in new_of.iter().enumerate() {
                if g.range(a) == anch[new] {
                    let image = act(old, a);
                    if image >= n {
                        return Err(Error::IndexOutOfRange {
                            context: "action image",
                            index: image,
                            bound: n,
                        });
                    }
                    table[a * n + new] = Some(new_of[image]);
                }
            }
        }
        let x = RightGSet {
            points,
            anchor: anch,
            table,
        };
        x.validate(g)?;
        Ok(x)
    }

    /// The objects, acted on by `r(g)·g = s(g)`.
    pub fn objects(g: &FiniteGroupoid) -> Self {
        let names = g.objects().to_vec();
        Self::from_fn(g, &names, |x| x, |_, a| g.source(a)).expect("canonical action")
    }

    /// The arrows under right multiplication, anchored by the source.
    pub fn right_regular(g: &FiniteGroupoid) -> Self {
        let names = g.arrows().to_vec();
        Self::from_fn(g, &names, |h| g.source(h), |h, a| g.compose(h, a)).expect("right regular action")
    }

    pub fn validate(&self, g: &FiniteGroupoid) -> Result<(), Violation> {
        let n = self.len();
        for p in 0..n {
            if self.act(p, g.unit(self.anchor[p])) != Some(p) {
                return Err(Violation::new("unit acts trivially", self.points[p].clone()));
            }
        }
        for a in 0..g.n_arrows() {
            for p in 0..n {
                let Some(q) = self.act(p, a) else { continue };
                if self.anchor[q] != g.source(a) {
                    return Err(Violation::new(
                        "anchor equivariance",
                        format!("{}·{} not over {}", self.points[p], g.arrow_id(a), g.object_id(g.source(a))),
                    ));
                }
                for &b in g.arrows_into(g.source(a)) {
                    if self.act(q, b) != self.act(p, g.compose(a, b)) {
                        return Err(Violation::new(
                            "action associativity",
                            format!("({}·{})·{}", self.points[p], g.arrow_id(a), g.arrow_id(b)),
                        ));
                    }
                }
            }
        }
        Ok(())
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

    pub fn anchor(&self, p: usize) -> usize {
        self.anchor[p]
    }

    /// `p·g`, or `None` when the anchor of `p` differs from `r(g)`.
    pub fn act(&self, p: usize, g: usize) -> Option<usize> {
        self.table[g * self.len() + p]
    }
}
