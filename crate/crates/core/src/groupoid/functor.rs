use super::FiniteGroupoid;
use crate::error::{Result, Violation};
use crate::schema::FunctorData;

/// A homomorphism of groupoids, given on objects and arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
    pub object_map: Vec<usize>,
    pub arrow_map: Vec<usize>,
}

impl Functor {
    pub fn new(
        g: &FiniteGroupoid,
        h: &FiniteGroupoid,
        object_map: Vec<usize>,
        arrow_map: Vec<usize>,
    ) -> Result<Self> {
        let f = Functor {
            object_map,
            arrow_map,
        };
        f.validate(g, h)?;
        Ok(f)
    }

    pub fn identity(g: &FiniteGroupoid) -> Self {
        Functor {
            object_map: (0..g.n_objects()).collect(),
            arrow_map: (0..g.n_arrows()).collect(),
        }
    }

    pub fn validate(&self, g: &FiniteGroupoid, h: &FiniteGroupoid) -> Result<(), Violation> {
        if self.object_map.len() != g.n_objects() || self.arrow_map.len() != g.n_arrows() {
            return Err(Violation::new("not a functor", "map sizes do not match the source"));
        }
        if self.object_map.iter().any(|&y| y >= h.n_objects())
            || self.arrow_map.iter().any(|&b| b >= h.n_arrows())
        {
            return Err(Violation::new("not a functor", "image outside the target"));
        }
        for a in 0..g.n_arrows() {
            let b = self.arrow_map[a];
            if h.source(b) != self.object_map[g.source(a)] || h.range(b) != self.object_map[g.range(a)] {
                return Err(Violation::new(
                    "not a functor",
                    format!("endpoints of {} not preserved", g.arrow_id(a)),
                ));
            }
        }
        for x in 0..g.n_objects() {
            if self.arrow_map[g.unit(x)] != h.unit(self.object_map[x]) {
                return Err(Violation::new(
                    "not a functor",
                    format!("unit at {} not preserved", g.object_id(x)),
                ));
            }
        }
        for a in 0..g.n_arrows() {
            for &b in g.arrows_into(g.source(a)) {
                let ab = g.compose(a, b);
                if self.arrow_map[ab] != h.compose(self.arrow_map[a], self.arrow_map[b]) {
                    return Err(Violation::new(
                        "not a functor",
                        format!("product {}·{} not preserved", g.arrow_id(a), g.arrow_id(b)),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn from_data(g: &FiniteGroupoid, h: &FiniteGroupoid, data: &FunctorData) -> Result<Self> {
        let mut object_map = vec![usize::MAX; g.n_objects()];
        for (x, y) in &data.objects {
            let x = g
                .object_index(x)
                .ok_or_else(|| Violation::new("unknown object", format!("{x:?}")))?;
            object_map[x] = h
                .object_index(y)
                .ok_or_else(|| Violation::new("unknown object", format!("{y:?}")))?;
        }
        let mut arrow_map = vec![usize::MAX; g.n_arrows()];
        for (a, b) in &data.arrows {
            let a = g
                .arrow_index(a)
                .ok_or_else(|| Violation::new("unknown arrow", format!("{a:?}")))?;
            arrow_map[a] = h
                .arrow_index(b)
                .ok_or_else(|| Violation::new("unknown arrow", format!("{b:?}")))?;
        }
        if let Some(x) = object_map.iter().position(|&y| y == usize::MAX) {
            return Err(Violation::new("incomplete functor", g.object_id(x).to_string()).into());
        }
        if let Some(a) = arrow_map.iter().position(|&b| b == usize::MAX) {
            return Err(Violation::new("incomplete functor", g.arrow_id(a).to_string()).into());
        }
        Self::new(g, h, object_map, arrow_map)
    }

    pub fn to_data(&self, g: &FiniteGroupoid, h: &FiniteGroupoid, source: &str, target: &str) -> FunctorData {
        FunctorData {
            source: source.to_string(),
            target: target.to_string(),
            objects: (0..g.n_objects())
                .map(|x| (g.object_id(x).to_string(), h.object_id(self.object_map[x]).to_string()))
                .collect(),
            arrows: (0..g.n_arrows())
                .map(|a| (g.arrow_id(a).to_string(), h.arrow_id(self.arrow_map[a]).to_string()))
                .collect(),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Functor) -> Functor {
        Functor {
            object_map: self.object_map.iter().map(|&y| other.object_map[y]).collect(),
            arrow_map: self.arrow_map.iter().map(|&b| other.arrow_map[b]).collect(),
        }
    }

    pub fn is_bijective(&self, h: &FiniteGroupoid) -> bool {
        let bij = |m: &[usize], n: usize| {
            let mut seen = vec![false; n];
            m.len() == n && m.iter().all(|&i| !std::mem::replace(&mut seen[i], true))
        };
        bij(&self.object_map, h.n_objects()) && bij(&self.arrow_map, h.n_arrows())
    }

    /// Exhaustive search for an isomorphism `g -> h`.
    pub fn find_isomorphism(g: &FiniteGroupoid, h: &FiniteGroupoid) -> Option<Functor> {
        if g.n_objects() != h.n_objects() || g.n_arrows() != h.n_arrows() {
            return None;
        }
        let mut search = IsoSearch {
            g,
            h,
            arrow_map: vec![None; g.n_arrows()],
            object_map: vec![None; g.n_objects()],
            used_arrows: vec![false; h.n_arrows()],
            used_objects: vec![false; h.n_objects()],
        };
        if search.assign(0) {
            let f = Functor {
                object_map: search.object_map.into_iter().map(Option::unwrap).collect(),
                arrow_map: search.arrow_map.into_iter().map(Option::unwrap).collect(),
            };
            Some(f)
        } else {
            None
        }
    }
}

struct IsoSearch<'a> {
    g: &'a FiniteGroupoid,
    h: &'a FiniteGroupoid,
    arrow_map: Vec<Option<usize>>,
    object_map: Vec<Option<usize>>,
    used_arrows: Vec<bool>,
    used_objects: Vec<bool>,
}

impl IsoSearch<'_> {
    fn consistent(&self, a: usize) -> bool {
        let (g, h) = (self.g, self.h);
        let b = self.arrow_map[a].unwrap();
        if g.is_unit(a) != h.is_unit(b) {
            return false;
        }
        for c in 0..g.n_arrows() {
            if self.arrow_map[c].is_none() {
                continue;
            }
            for (x, y) in [(a, c), (c, a)] {
                let (bx, by) = (self.arrow_map[x].unwrap(), self.arrow_map[y].unwrap());
                match (g.try_compose(x, y), h.try_compose(bx, by)) {
                    (None, None) => {}
                    (Some(xy), Some(bxy)) => {
                        if let Some(m) = self.arrow_map[xy] {
                            if m != bxy {
                                return false;
                            }
                        }
                    }
                    _ => return false,
                }
            }
        }
        true
    }

    fn assign(&mut self, a: usize) -> bool {
        let (g, h) = (self.g, self.h);
        if a == g.n_arrows() {
            let f = Functor {
                object_map: self.object_map.iter().map(|x| x.unwrap()).collect(),
                arrow_map: self.arrow_map.iter().map(|x| x.unwrap()).collect(),
            };
            return f.validate(g, h).is_ok();
        }
        for b in 0..h.n_arrows() {
            if self.used_arrows[b] {
                continue;
            }
            let ends = [(g.source(a), h.source(b)), (g.range(a), h.range(b))];
            let mut fresh = Vec::new();
            let mut ok = true;
            for (x, y) in ends {
                match self.object_map[x] {
                    Some(m) if m != y => ok = false,
                    Some(_) => {}
                    None => {
                        if self.used_objects[y] {
                            ok = false;
                        } else {
                            self.object_map[x] = Some(y);
                            self.used_objects[y] = true;
                            fresh.push(x);
                        }
                    }
                }
                if !ok {
                    break;
                }
            }
            if ok {
                self.arrow_map[a] = Some(b);
                self.used_arrows[b] = true;
                if self.consistent(a) && self.assign(a + 1) {
                    return true;
                }
                self.arrow_map[a] = None;
                self.used_arrows[b] = false;
            }
            for x in fresh {
                self.used_objects[self.object_map[x].unwrap()] = false;
                self.object_map[x] = None;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{cyclic_group, pair_groupoid, trivial_group};

    #[test]
    fn collapse_is_a_functor() {
        let p = pair_groupoid(2);
        let t = trivial_group();
        assert!(Functor::new(&p, &t, vec![0; 2], vec![0; 4]).is_ok());
    }

    #[test]
    fn non_homomorphism_rejected() {
        let z3 = cyclic_group(3);
        let z2 = cyclic_group(2);
        let err = Functor::new(&z3, &z2, vec![0], vec![0, 1, 1]).unwrap_err();
        assert!(err.to_string().contains("not a functor"));
    }

    #[test]
    fn isomorphism_search() {
        let z4 = cyclic_group(4);
        let relabeled = z4.relabeled(&[0], &[2, 0, 3, 1]).unwrap();
        let f = Functor::find_isomorphism(&z4, &relabeled).unwrap();
        assert!(f.is_bijective(&relabeled));
        assert!(Functor::find_isomorphism(&z4, &crate::groupoid::from_group(
            &["a".into(), "b".into(), "c".into(), "d".into()],
            &[vec![0, 1, 2, 3], vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![3, 2, 1, 0]],
        ).unwrap()).is_none());
    }
}
