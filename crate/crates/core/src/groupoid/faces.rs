//! Face maps of the nerve.
//!
//! `Resolution` faces act on the resolution `Z[G^{n+1}]`, tuples `(g_0, ..., g_n)`:
//! face `i < n` composes `g_i g_{i+1}`, face `n` drops `g_n`. In degree 0 the
//! single face is the augmentation `g_0 -> r(g_0)`. Taking the range (not the
//! source) is what makes `h_0` and `h_1` below a contracting homotopy, and it
//! is the only choice equivariant for left multiplication.
//!
//! `Matui` faces act on the coinvariant complex `Z[G^n]`, tuples `(g_1, ..., g_n)`:
//! face 0 drops `g_1`, face `n` drops `g_n`, and the middle faces compose. In
//! degree 1 this reads `g -> s(g)` for face 0 and `g -> r(g)` for face 1.

use num_bigint::BigInt;

use super::nerve::{nerve, Nerve};
use super::FiniteGroupoid;
use crate::error::{Error, Result};
use crate::intalg::{IntMatrix, SparseVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Resolution,
    Matui,
}

/// Image of one tuple under face `i`. Degree-0 results are `[object]`.
pub fn face_tuple(g: &FiniteGroupoid, tuple: &[usize], i: usize, variant: Variant) -> Vec<usize> {
    let len = tuple.len();
    match variant {
        Variant::Resolution => {
            let n = len - 1;
            if n == 0 {
                vec![g.range(tuple[0])]
            } else if i < n {
                let mut out = Vec::with_capacity(n);
                out.extend_from_slice(&tuple[..i]);
                out.push(g.compose(tuple[i], tuple[i + 1]));
                out.extend_from_slice(&tuple[i + 2..]);
                out
            } else {
                tuple[..n].to_vec()
            }
        }
        Variant::Matui => {
            let n = len;
            if n == 1 {
                if i == 0 {
                    vec![g.source(tuple[0])]
                } else {
                    vec![g.range(tuple[0])]
                }
            } else if i == 0 {
                tuple[1..].to_vec()
            } else if i == n {
                tuple[..n - 1].to_vec()
            } else {
                let mut out = Vec::with_capacity(n - 1);
                out.extend_from_slice(&tuple[..i - 1]);
                out.push(g.compose(tuple[i - 1], tuple[i]));
                out.extend_from_slice(&tuple[i + 1..]);
                out
            }
        }
    }
}

fn check_face(n: usize, i: usize, variant: Variant) -> Result<()> {
    if variant == Variant::Matui && n == 0 {
        return Err(Error::DegreeOutOfRange { degree: 0, max: 0 });
    }
    if i > n {
        return Err(Error::IndexOutOfRange {
            context: "face index",
            index: i,
            bound: n,
        });
    }
    Ok(())
}

/// Domain and codomain nerves of the degree-`n` faces.
pub(crate) fn face_nerves(g: &FiniteGroupoid, n: usize, variant: Variant) -> (Nerve, Nerve) {
    match variant {
        Variant::Resolution => (nerve(g, n + 1), nerve(g, n)),
        Variant::Matui => (nerve(g, n), nerve(g, n - 1)),
    }
}

/// Alternating sum of the faces in `faces` with signs `(-1)^i`, between given nerves.
pub(crate) fn signed_faces(
    g: &FiniteGroupoid,
    dom: &Nerve,
    cod: &Nerve,
    faces: impl Iterator<Item = usize> + Clone,
    variant: Variant,
) -> IntMatrix {
    let columns = dom
        .tuples()
        .iter()
        .map(|t| {
            let mut col = SparseVec::new();
            for i in faces.clone() {
                let image = face_tuple(g, t, i, variant);
                let row = cod.index_of(&image).expect("face image lies in the nerve");
                let sign = if i % 2 == 0 { 1 } else { -1 };
                crate::intalg::sparse_axpy(&mut col, row, BigInt::from(sign));
            }
            col
        })
        .collect();
    IntMatrix::from_columns(cod.len(), columns)
}

pub fn face_matrix(g: &FiniteGroupoid, n: usize, i: usize, variant: Variant) -> Result<IntMatrix> {
    check_face(n, i, variant)?;
    let (dom, cod) = face_nerves(g, n, variant);
    // A single face with positive sign.
    let faces = std::iter::once(i);
    let m = signed_faces(g, &dom, &cod, faces, variant);
    Ok(if i % 2 == 1 { -&m } else { m })
}

/// `Resolution`: `Z[G^{n+1}] -> Z[G^n]`; `Matui`: `Z[G^n] -> Z[G^{n-1}]` (needs `n >= 1`).
pub fn boundary_matrix(g: &FiniteGroupoid, n: usize, variant: Variant) -> Result<IntMatrix> {
    check_face(n, 0, variant)?;
    let (dom, cod) = face_nerves(g, n, variant);
    Ok(boundary_between(g, &dom, &cod, variant))
}

pub(crate) fn boundary_between(
    g: &FiniteGroupoid,
    dom: &Nerve,
    cod: &Nerve,
    variant: Variant,
) -> IntMatrix {
    let n = match variant {
        Variant::Resolution => dom.degree() - 1,
        Variant::Matui => dom.degree(),
    };
    signed_faces(g, dom, cod, 0..=n, variant)
}

/// `h_n : Z[G^n] -> Z[G^{n+1}]`, `(g_0, ..., g_{n-1}) -> (r(g_0), g_0, ..., g_{n-1})`,
/// and `h_0(x) = x` viewed as a unit arrow.
pub fn homotopy_matrix(g: &FiniteGroupoid, n: usize) -> IntMatrix {
    let dom = nerve(g, n);
    let cod = nerve(g, n + 1);
    let columns = dom
        .tuples()
        .iter()
        .map(|t| {
            let image = if n == 0 {
                vec![g.unit(t[0])]
            } else {
                let mut v = Vec::with_capacity(n + 1);
                v.push(g.unit(g.range(t[0])));
                v.extend_from_slice(t);
                v
            };
            let mut col = SparseVec::new();
            col.insert(cod.index_of(&image).unwrap(), BigInt::from(1));
            col
        })
        .collect();
    IntMatrix::from_columns(cod.len(), columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{cyclic_group, disjoint_union, pair_groupoid, symmetric_group};
    use crate::intalg::smith_normal_form;

    fn corpus() -> Vec<FiniteGroupoid> {
        vec![
            cyclic_group(2),
            cyclic_group(3),
            pair_groupoid(2),
            symmetric_group(3),
            disjoint_union(&[&pair_groupoid(2), &cyclic_group(2)]).unwrap(),
        ]
    }

    #[test]
    fn matui_middle_face_composes() {
        let g = cyclic_group(3);
        let m = face_matrix(&g, 2, 1, Variant::Matui).unwrap();
        let n2 = nerve(&g, 2);
        for (c, t) in n2.tuples().iter().enumerate() {
            let gh = g.compose(t[0], t[1]);
            assert_eq!(m.get(gh, c), BigInt::from(1));
        }
    }

    #[test]
    fn matui_degree_one_faces() {
        let g = pair_groupoid(2);
        let e0 = face_matrix(&g, 1, 0, Variant::Matui).unwrap();
        let e1 = face_matrix(&g, 1, 1, Variant::Matui).unwrap();
        for a in 0..g.n_arrows() {
            assert_eq!(e0.get(g.source(a), a), BigInt::from(1));
            assert_eq!(e1.get(g.range(a), a), BigInt::from(1));
        }
        let b1 = boundary_matrix(&g, 1, Variant::Matui).unwrap();
        let b2 = boundary_matrix(&g, 2, Variant::Matui).unwrap();
        assert!((&b1 * &b2).is_zero());
    }

    #[test]
    fn resolution_face_columns_sum_to_one() {
        for g in corpus() {
            for n in 0..3 {
                for i in 0..=n {
                    let m = face_matrix(&g, n, i, Variant::Resolution).unwrap();
                    for c in m.columns() {
                        assert_eq!(c.values().sum::<BigInt>(), BigInt::from(1));
                        assert_eq!(c.len(), 1);
                    }
                }
            }
        }
    }

    #[test]
    fn group_degree_one_boundary_vanishes() {
        assert!(boundary_matrix(&cyclic_group(2), 1, Variant::Matui)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn pair_groupoid_boundary_has_cokernel_z() {
        let b = boundary_matrix(&pair_groupoid(2), 1, Variant::Matui).unwrap();
        let snf = smith_normal_form(&b);
        assert_eq!(snf.rank(), 1);
        assert_eq!(snf.invariant_factors(), vec![BigInt::from(1)]);
    }

    #[test]
    fn boundaries_square_to_zero() {
        for g in corpus() {
            for n in 0..4 {
                let r = &boundary_matrix(&g, n, Variant::Resolution).unwrap()
                    * &boundary_matrix(&g, n + 1, Variant::Resolution).unwrap();
                assert!(r.is_zero());
                if n >= 1 {
                    let m = &boundary_matrix(&g, n, Variant::Matui).unwrap()
                        * &boundary_matrix(&g, n + 1, Variant::Matui).unwrap();
                    assert!(m.is_zero());
                }
            }
        }
    }

    #[test]
    fn homotopy_low_degrees() {
        let g = pair_groupoid(2);
        let h0 = homotopy_matrix(&g, 0);
        for x in 0..2 {
            assert_eq!(h0.get(g.unit(x), x), BigInt::from(1));
        }
        let h1 = homotopy_matrix(&g, 1);
        let n2 = nerve(&g, 2);
        for a in 0..g.n_arrows() {
            let row = n2.index_of(&[g.unit(g.range(a)), a]).unwrap();
            assert_eq!(h1.get(row, a), BigInt::from(1));
        }
    }

    #[test]
    fn contracting_homotopy() {
        for g in corpus() {
            let d0 = boundary_matrix(&g, 0, Variant::Resolution).unwrap();
            assert!((&d0 * &homotopy_matrix(&g, 0)).is_identity());
            for n in 0..3 {
                let lhs = &(&boundary_matrix(&g, n + 1, Variant::Resolution).unwrap()
                    * &homotopy_matrix(&g, n + 1))
                    + &(&homotopy_matrix(&g, n) * &boundary_matrix(&g, n, Variant::Resolution).unwrap());
                assert!(lhs.is_identity(), "degree {n}");
            }
        }
    }

    #[test]
    fn face_index_checked() {
        let g = cyclic_group(2);
        assert!(face_matrix(&g, 1, 2, Variant::Matui).is_err());
        assert!(boundary_matrix(&g, 0, Variant::Matui).is_err());
    }
}
