use std::collections::HashMap;

use super::FiniteGroupoid;

/// The composable `n`-tuples of a groupoid in canonical order.
///
/// Degree-0 elements are objects, stored as one-element tuples `[x]`.
/// Higher tuples hold arrow indices and are sorted lexicographically.
#[derive(Clone, Debug)]
pub struct Nerve {
    degree: usize,
    tuples: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl Nerve {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuple(&self, i: usize) -> &[usize] {
        &self.tuples[i]
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        self.index.get(tuple).copied()
    }

    /// Renders a tuple with identifiers, e.g. `(a,b)` or `[x]` in degree 0.
    pub fn describe(&self, g: &FiniteGroupoid, i: usize) -> String {
        let t = &self.tuples[i];
        if self.degree == 0 {
            format!("[{}]", g.object_id(t[0]))
        } else {
            let names: Vec<&str> = t.iter().map(|&a| g.arrow_id(a)).collect();
            format!("({})", names.join(","))
        }
    }
}

pub fn nerve(g: &FiniteGroupoid, n: usize) -> Nerve {
    let mut tuples = Vec::new();
    if n == 0 {
        tuples.extend((0..g.n_objects()).map(|x| vec![x]));
    } else {
        let mut current = Vec::with_capacity(n);
        for a in 0..g.n_arrows() {
            current.push(a);
            extend(g, n, &mut current, &mut tuples);
            current.pop();
        }
    }
    let index = tuples
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i))
        .collect();
    Nerve {
        degree: n,
        tuples,
        index,
    }
}

fn extend(g: &FiniteGroupoid, n: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if current.len() == n {
        out.push(current.clone());
        return;
    }
    let last = *current.last().unwrap();
    for &b in g.arrows_into(g.source(last)) {
        current.push(b);
        extend(g, n, current, out);
        current.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{cyclic_group, pair_groupoid};

    #[test]
    fn cyclic_two_has_four_pairs() {
        assert_eq!(nerve(&cyclic_group(2), 2).len(), 4);
    }

    #[test]
    fn pair_groupoid_two_has_eight_pairs() {
        assert_eq!(nerve(&pair_groupoid(2), 2).len(), 8);
    }

    #[test]
    fn degree_zero_is_objects() {
        let g = pair_groupoid(3);
        let n0 = nerve(&g, 0);
        assert_eq!(n0.len(), 3);
        assert_eq!(n0.tuple(2), &[2]);
    }

    #[test]
    fn tuples_are_sorted_and_indexed() {
        let g = pair_groupoid(3);
        let n2 = nerve(&g, 2);
        assert!(n2.tuples().windows(2).all(|w| w[0] < w[1]));
        for (i, t) in n2.tuples().iter().enumerate() {
            assert_eq!(n2.index_of(t), Some(i));
            assert_eq!(g.source(t[0]), g.range(t[1]));
        }
    }
}
