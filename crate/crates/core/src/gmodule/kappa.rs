use std::collections::HashMap;

use crate::groupoid::{FiniteGroupoid, GSet, RightGSet};

/// `Y ×_G Z`: orbits of `Y ×_{G^0} Z` under `(y·g, z) ~ (y, g·z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kappa {
    /// Least pair of each orbit, ascending.
    pub reps: Vec<(usize, usize)>,
    /// Orbit index of every pair in the fibre product.
    pub class: HashMap<(usize, usize), usize>,
}

impl Kappa {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Image of the basis tensor `χ_y ⊗ χ_z`.
    pub fn kappa(&self, y: usize, z: usize) -> Option<usize> {
        self.class.get(&(y, z)).copied()
    }
}

pub fn tensor_kappa(g: &FiniteGroupoid, y: &RightGSet, z: &GSet) -> Kappa {
    let mut reps = Vec::new();
    let mut class = HashMap::new();
    for a in 0..y.len() {
        for b in 0..z.len() {
            if y.anchor(a) != z.anchor(b) || class.contains_key(&(a, b)) {
                continue;
            }
            // Pairs are visited in ascending order, so the first one seen is least.
            let id = reps.len();
            reps.push((a, b));
            for &t in g.arrows_into(y.anchor(a)) {
                // (a·t, t⁻¹·b) lies in the same orbit.
                let pa = y.act(a, t).unwrap();
                let pb = z.act(g.inverse(t), b).unwrap();
                class.insert((pa, pb), id);
            }
        }
    }
    Kappa { reps, class }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{discrete, pair_groupoid, symmetric_group};

    #[test]
    fn regular_over_objects_is_objects() {
        let g = symmetric_group(3);
        let k = tensor_kappa(&g, &RightGSet::right_regular(&g), &GSet::objects(&g));
        assert_eq!(k.len(), g.n_objects());
        let p = pair_groupoid(3);
        let k = tensor_kappa(&p, &RightGSet::right_regular(&p), &GSet::objects(&p));
        assert_eq!(k.len(), 3);
    }

    #[test]
    fn pair_groupoid_arrows() {
        let p = pair_groupoid(2);
        let k = tensor_kappa(&p, &RightGSet::right_regular(&p), &GSet::left_regular(&p));
        // Y ×_{G0} Z has 2·2·2 = 8 pairs, in orbits of size 2.
        assert_eq!(k.class.len(), 8);
        assert_eq!(k.len(), 4);
    }

    #[test]
    fn units_only_identifies_nothing() {
        let d = discrete(3);
        let y = RightGSet::right_regular(&d);
        let z = GSet::left_regular(&d);
        let k = tensor_kappa(&d, &y, &z);
        assert_eq!(k.len(), k.class.len());
    }
}
