//! Smith normal form by exact elimination with optional transform tracking.
//!
//! Pivots are chosen as the entry of smallest absolute value in the remaining
//! block, ties broken row-major. Reductions use the nearest-integer quotient so
//! remainders stay at most half the pivot.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{sparse_add_scaled, IntMatrix, SparseVec};
use crate::error::{Error, Result};

/// Row- and column-indexed sparse storage used while eliminating.
#[derive(Clone, Debug)]
struct Work {
    rows: Vec<BTreeMap<usize, BigInt>>,
    col_index: Vec<BTreeSet<usize>>,
}

impl Work {
    fn from_matrix(m: &IntMatrix) -> Self {
        let mut rows = vec![BTreeMap::new(); m.rows()];
        let mut col_index = vec![BTreeSet::new(); m.cols()];
        for (i, j, v) in m.entries() {
            rows[i].insert(j, v.clone());
            col_index[j].insert(i);
        }
        Work { rows, col_index }
    }

    fn identity(n: usize) -> Self {
        Self::from_matrix(&IntMatrix::identity(n))
    }

    fn get(&self, i: usize, j: usize) -> Option<&BigInt> {
        self.rows[i].get(&j)
    }

    fn update(&mut self, i: usize, j: usize, delta: BigInt) {
        if delta.is_zero() {
            return;
        }
        let entry = self.rows[i].entry(j).or_insert_with(BigInt::zero);
        *entry += delta;
        if entry.is_zero() {
            self.rows[i].remove(&j);
            self.col_index[j].remove(&i);
        } else {
            self.col_index[j].insert(i);
        }
    }

    /// `row[target] += q * row[source]`
    fn add_row(&mut self, target: usize, source: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let src: Vec<(usize, BigInt)> = self.rows[source]
            .iter()
            .map(|(&c, v)| (c, v * q))
            .collect();
        for (c, v) in src {
            self.update(target, c, v);
        }
    }

    /// `col[target] += q * col[source]`
    fn add_col(&mut self, target: usize, source: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let src: Vec<(usize, BigInt)> = self.col_index[source]
            .iter()
            .map(|&r| (r, &self.rows[r][&source] * q))
            .collect();
        for (r, v) in src {
            self.update(r, target, v);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let touched: BTreeSet<usize> = self.rows[a]
            .keys()
            .chain(self.rows[b].keys())
            .copied()
            .collect();
        self.rows.swap(a, b);
        for c in touched {
            for r in [a, b] {
                if self.rows[r].contains_key(&c) {
                    self.col_index[c].insert(r);
                } else {
                    self.col_index[c].remove(&r);
                }
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let touched: BTreeSet<usize> = self.col_index[a]
            .iter()
            .chain(self.col_index[b].iter())
            .copied()
            .collect();
        for r in touched {
            let va = self.rows[r].remove(&a);
            let vb = self.rows[r].remove(&b);
            if let Some(v) = va {
                self.rows[r].insert(b, v);
            }
            if let Some(v) = vb {
                self.rows[r].insert(a, v);
            }
        }
        self.col_index.swap(a, b);
    }

    fn negate_row(&mut self, a: usize) {
        for v in self.rows[a].values_mut() {
            *v = -std::mem::take(v);
        }
    }

    fn negate_col(&mut self, a: usize) {
        let rows: Vec<usize> = self.col_index[a].iter().copied().collect();
        for r in rows {
            if let Some(v) = self.rows[r].get_mut(&a) {
                *v = -std::mem::take(v);
            }
        }
    }

    fn into_matrix(self, cols: usize) -> IntMatrix {
        let n_rows = self.rows.len();
        let mut columns = vec![SparseVec::new(); cols];
        for (i, row) in self.rows.into_iter().enumerate() {
            for (j, v) in row {
                columns[j].insert(i, v);
            }
        }
        IntMatrix::from_columns(n_rows, columns)
    }
}

/// Which transforms to accumulate during elimination.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Track {
    pub left: bool,
    pub left_inverse: bool,
    pub right: bool,
    pub right_inverse: bool,
}

#[cfg(test)]
impl Track {
    pub const ALL: Track = Track {
        left: true,
        left_inverse: true,
        right: true,
        right_inverse: true,
    };
}

/// Output of the elimination engine: `U * A * V = diag(invariants)`.
#[derive(Clone, Debug)]
pub(crate) struct Elimination {
    pub invariants: Vec<BigInt>,
    pub left: Option<IntMatrix>,
    pub left_inverse: Option<IntMatrix>,
    pub right: Option<IntMatrix>,
    pub right_inverse: Option<IntMatrix>,
}

struct Engine {
    a: Work,
    n_rows: usize,
    n_cols: usize,
    u: Option<Work>,
    u_inv: Option<Work>,
    v: Option<Work>,
    v_inv: Option<Work>,
}

/// Nearest-integer quotient of `a / p`.
fn nearest_quotient(a: &BigInt, p: &BigInt) -> BigInt {
    let (mut q, r) = a.div_rem(p);
    let twice = r.abs() * 2u32;
    if twice > p.abs() {
        if r.is_positive() == p.is_positive() {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

impl Engine {
    fn new(a: &IntMatrix, track: Track) -> Self {
        let (m, n) = a.shape();
        Engine {
            a: Work::from_matrix(a),
            n_rows: m,
            n_cols: n,
            u: track.left.then(|| Work::identity(m)),
            u_inv: track.left_inverse.then(|| Work::identity(m)),
            v: track.right.then(|| Work::identity(n)),
            v_inv: track.right_inverse.then(|| Work::identity(n)),
        }
    }

    fn row_op(&mut self, target: usize, source: usize, q: &BigInt) {
        self.a.add_row(target, source, q);
        if let Some(u) = &mut self.u {
            u.add_row(target, source, q);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.add_col(source, target, &-q);
        }
    }

    fn col_op(&mut self, target: usize, source: usize, q: &BigInt) {
        self.a.add_col(target, source, q);
        if let Some(v) = &mut self.v {
            v.add_col(target, source, q);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.add_row(source, target, &-q);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.a.swap_rows(a, b);
        if let Some(u) = &mut self.u {
            u.swap_rows(a, b);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.swap_cols(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.a.swap_cols(a, b);
        if let Some(v) = &mut self.v {
            v.swap_cols(a, b);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.swap_rows(a, b);
        }
    }

    fn negate_row(&mut self, a: usize) {
        self.a.negate_row(a);
        if let Some(u) = &mut self.u {
            u.negate_row(a);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.negate_col(a);
        }
    }

    /// Smallest-magnitude entry in the block `rows >= t, cols >= t`, row-major ties.
    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.n_rows {
            for (&j, v) in self.a.rows[i].range(t..) {
                let mag = v.abs();
                if best.as_ref().is_none_or(|(_, _, b)| mag < *b) {
                    let unit = mag.is_one();
                    best = Some((i, j, mag));
                    if unit {
                        return best.map(|(i, j, _)| (i, j));
                    }
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    /// Clears row and column `t` using the pivot at `(t, t)`.
    fn clear_cross(&mut self, t: usize) {
        loop {
            let p = self.a.get(t, t).expect("pivot present").clone();
            let mut leftover = false;
            let below: Vec<usize> = self.a.col_index[t].range(t + 1..).copied().collect();
            for i in below {
                let q = nearest_quotient(self.a.get(i, t).expect("indexed entry"), &p);
                self.row_op(i, t, &-q);
                leftover |= self.a.get(i, t).is_some();
            }
            let right: Vec<usize> = self.a.rows[t].range(t + 1..).map(|(&j, _)| j).collect();
            for j in right {
                let q = nearest_quotient(self.a.get(t, j).expect("indexed entry"), &p);
                self.col_op(j, t, &-q);
                leftover |= self.a.get(t, j).is_some();
            }
            if !leftover {
                return;
            }
            // Move the smallest remainder on the cross into the pivot slot.
            let mut best: Option<(bool, usize, BigInt)> = None;
            for &i in self.a.col_index[t].range(t + 1..) {
                let mag = self.a.get(i, t).unwrap().abs();
                if best.as_ref().is_none_or(|(_, _, b)| mag < *b) {
                    best = Some((true, i, mag));
                }
            }
            for (&j, v) in self.a.rows[t].range(t + 1..) {
                let mag = v.abs();
                if best.as_ref().is_none_or(|(_, _, b)| mag < *b) {
                    best = Some((false, j, mag));
                }
            }
            match best {
                Some((true, i, _)) => self.swap_rows(t, i),
                Some((false, j, _)) => self.swap_cols(t, j),
                None => return,
            }
        }
    }

    /// A row below `t` holding an entry (in columns > t) not divisible by the pivot.
    fn non_divisible_row(&self, t: usize) -> Option<usize> {
        let p = self.a.get(t, t)?;
        if p.abs().is_one() {
            return None;
        }
        (t + 1..self.n_rows).find(|&i| {
            self.a.rows[i]
                .range(t + 1..)
                .any(|(_, v)| !v.is_multiple_of(p))
        })
    }

    fn run(mut self) -> Elimination {
        let mut invariants = Vec::new();
        let mut t = 0;
        while t < self.n_rows.min(self.n_cols) {
            let Some((i, j)) = self.find_pivot(t) else {
                break;
            };
            self.swap_rows(t, i);
            self.swap_cols(t, j);
            loop {
                self.clear_cross(t);
                match self.non_divisible_row(t) {
                    Some(i) => self.row_op(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a.get(t, t).unwrap().is_negative() {
                self.negate_row(t);
            }
            invariants.push(self.a.get(t, t).unwrap().clone());
            t += 1;
        }
        let (m, n) = (self.n_rows, self.n_cols);
        Elimination {
            invariants,
            left: self.u.map(|w| w.into_matrix(m)),
            left_inverse: self.u_inv.map(|w| w.into_matrix(m)),
            right: self.v.map(|w| w.into_matrix(n)),
            right_inverse: self.v_inv.map(|w| w.into_matrix(n)),
        }
    }
}

pub(crate) fn eliminate(a: &IntMatrix, track: Track) -> Elimination {
    Engine::new(a, track).run()
}

/// `U * A * V = S` with `U`, `V` unimodular and `S` in Smith normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub rows: usize,
    pub cols: usize,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self.s.get(i, i))
            .take_while(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form with both transforms. Deterministic for a fixed input.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let e = eliminate(
        a,
        Track {
            left: true,
            right: true,
            ..Track::default()
        },
    );
    let (rows, cols) = a.shape();
    SmithDecomposition {
        u: e.left.unwrap(),
        s: IntMatrix::diagonal(rows, cols, &e.invariants),
        v: e.right.unwrap(),
        rows,
        cols,
    }
}

/// Reusable solver for `A x = b` over the integers.
///
/// Factorizes once; each solve is two sparse matrix-vector products.
#[derive(Clone, Debug)]
pub struct IntSolver {
    rows: usize,
    cols: usize,
    invariants: Vec<BigInt>,
    u: IntMatrix,
    v: IntMatrix,
}

impl IntSolver {
    pub fn new(a: &IntMatrix) -> Self {
        let e = eliminate(
            a,
            Track {
                left: true,
                right: true,
                ..Track::default()
            },
        );
        IntSolver {
            rows: a.rows(),
            cols: a.cols(),
            invariants: e.invariants,
            u: e.left.unwrap(),
            v: e.right.unwrap(),
        }
    }

    /// The canonical solution: free coordinates in Smith coordinates are zero.
    pub fn solve_sparse(&self, b: &SparseVec) -> Option<SparseVec> {
        if let Some((&last, _)) = b.iter().next_back() {
            if last >= self.rows {
                return None;
            }
        }
        let c = self.u.apply(b);
        let rank = self.invariants.len();
        let mut y = SparseVec::new();
        for (&i, ci) in &c {
            if i >= rank {
                return None;
            }
            let (q, r) = ci.div_rem(&self.invariants[i]);
            if !r.is_zero() {
                return None;
            }
            y.insert(i, q);
        }
        let mut x = SparseVec::new();
        for (&i, yi) in &y {
            sparse_add_scaled(&mut x, self.v.column(i), yi);
        }
        Some(x)
    }

    pub fn solve(&self, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                context: "solve_integer right-hand side",
                expected: self.rows,
                found: b.len(),
            });
        }
        let sparse: SparseVec = b
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i, v.clone()))
            .collect();
        Ok(self.solve_sparse(&sparse).map(|x| {
            let mut dense = vec![BigInt::zero(); self.cols];
            for (i, v) in x {
                dense[i] = v;
            }
            dense
        }))
    }
}

/// Solves `A x = b` over the integers; `Ok(None)` when no integer solution exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            context: "solve_integer right-hand side",
            expected: a.rows(),
            found: b.len(),
        });
    }
    IntSolver::new(a).solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check(a: &IntMatrix) -> SmithDecomposition {
        let d = smith_normal_form(a);
        assert_eq!(&(&d.u * a) * &d.v, d.s);
        assert!(d.u.is_unimodular());
        assert!(d.v.is_unimodular());
        let f = d.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        assert!(f.iter().all(|x| x.is_positive()));
        d
    }

    #[test]
    fn empty_matrix() {
        let d = check(&IntMatrix::zeros(0, 0));
        assert_eq!(d.u, IntMatrix::identity(0));
        assert_eq!(d.v, IntMatrix::identity(0));
        assert_eq!(d.rank(), 0);
    }

    #[test]
    fn identity_is_fixed() {
        let d = check(&IntMatrix::identity(3));
        assert_eq!(d.s, IntMatrix::identity(3));
    }

    #[test]
    fn two_by_two_example() {
        // gcd of entries is 2 and |det| = 8, so the factors are 2 and 4.
        let d = check(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(d.invariant_factors(), ints(&[2, 4]));
    }

    #[test]
    fn divisibility_repair() {
        // diag(2, 3) is diagonal but not in Smith form.
        let d = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(d.invariant_factors(), ints(&[1, 6]));
    }

    #[test]
    fn rectangular_and_rank_deficient() {
        let a = IntMatrix::from_rows(&[vec![1, 1, 0, 0], vec![0, 0, 1, 1], vec![1, 1, 1, 1]]);
        let d = check(&a);
        assert_eq!(d.invariant_factors(), ints(&[1, 1]));
    }

    #[test]
    fn parity_obstruction() {
        let a = IntMatrix::from_rows(&[vec![2]]);
        assert_eq!(solve_integer(&a, &ints(&[3])).unwrap(), None);
    }

    #[test]
    fn underdetermined_solution() {
        let a = IntMatrix::from_rows(&[vec![1, 1]]);
        let x = solve_integer(&a, &ints(&[5])).unwrap().unwrap();
        assert_eq!(a.apply_dense(&x).unwrap(), ints(&[5]));
        assert_eq!(x, ints(&[5, 0]));
    }

    #[test]
    fn identity_solve() {
        let b = ints(&[4, -7, 0]);
        let x = solve_integer(&IntMatrix::identity(3), &b).unwrap();
        assert_eq!(x, Some(b));
    }

    #[test]
    fn dimension_mismatch() {
        let a = IntMatrix::identity(2);
        assert!(solve_integer(&a, &ints(&[1])).is_err());
    }

    #[test]
    fn inverse_tracking() {
        let a = IntMatrix::from_rows(&[vec![4, 6, 2], vec![2, 8, 10], vec![0, 3, 9]]);
        let e = eliminate(&a, Track::ALL);
        let (u, ui) = (e.left.unwrap(), e.left_inverse.unwrap());
        let (v, vi) = (e.right.unwrap(), e.right_inverse.unwrap());
        assert!((&u * &ui).is_identity());
        assert!((&v * &vi).is_identity());
    }
}
