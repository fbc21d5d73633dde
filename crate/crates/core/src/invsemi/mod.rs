//! Finite inverse semigroups, the groupoids `S ⋉ E^×` and `G_S`, the
//! correspondence `Ω_S` between them, and the stabilizer decomposition of
//! `H_*(G_S)`.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result, Violation};
use crate::groupoid::FiniteGroupoid;
use crate::schema::{ArrowData, GroupoidData, SemigroupData};

mod omega;

pub use omega::{chain_iso_check, omega_s, stabilizer_decomposition, ChainIsoReport, DegreeCheck, OmegaS, StabilizerReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteInverseSemigroup {
    elements: Vec<String>,
    /// `table[a * n + b] = ab`.
    table: Vec<usize>,
    star: Vec<usize>,
    zero: Option<usize>,
}

impl FiniteInverseSemigroup {
    /// Builds from a multiplication table; `star` is derived when absent.
    pub fn new(elements: Vec<String>, table: Vec<Vec<usize>>, star: Option<Vec<usize>>) -> Result<Self> {
        let s = Self::new_unchecked(elements, table, star)?;
        s.validate()?;
        Ok(s)
    }

    /// Shape checks only. A missing `star` is derived, which may itself fail.
    pub fn new_unchecked(elements: Vec<String>, table: Vec<Vec<usize>>, star: Option<Vec<usize>>) -> Result<Self> {
        let n = elements.len();
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                context: "multiplication table",
                expected: n * n,
                found: table.iter().map(Vec::len).sum(),
            });
        }
        let mut seen = std::collections::HashSet::new();
        for e in &elements {
            if !seen.insert(e) {
                return Err(Violation::new("duplicate element", e.clone()).into());
            }
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        if let Some(&bad) = flat.iter().find(|&&v| v >= n) {
            return Err(Error::IndexOutOfRange {
                context: "multiplication table",
                index: bad,
                bound: n,
            });
        }
        let mut s = FiniteInverseSemigroup {
            elements,
            table: flat,
            star: Vec::new(),
            zero: None,
        };
        s.star = match star {
            Some(st) => {
                if st.len() != n || st.iter().any(|&v| v >= n) {
                    return Err(Error::DimensionMismatch {
                        context: "star table",
                        expected: n,
                        found: st.len(),
                    });
                }
                st
            }
            None => s.derive_star()?,
        };
        s.zero = (0..n).find(|&z| (0..n).all(|x| s.mul(z, x) == z && s.mul(x, z) == z));
        Ok(s)
    }

    fn derive_star(&self) -> Result<Vec<usize>, Violation> {
        let n = self.len();
        (0..n)
            .map(|s| {
                let found: Vec<usize> = (0..n)
                    .filter(|&t| self.mul(self.mul(s, t), s) == s && self.mul(self.mul(t, s), t) == t)
                    .collect();
                match found.as_slice() {
                    [t] => Ok(*t),
                    _ => Err(Violation::new(
                        "no unique generalized inverse",
                        format!("{} has {} candidates", self.elements[s], found.len()),
                    )),
                }
            })
            .collect()
    }

    /// Exhaustive axiom check.
    pub fn validate(&self) -> Result<(), Violation> {
        let n = self.len();
        let id = |a: usize| self.elements[a].as_str();
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Violation::new(
                            "associativity",
                            format!("({}{}){} vs {}({}{})", id(a), id(b), id(c), id(a), id(b), id(c)),
                        ));
                    }
                }
            }
        }
        for s in 0..n {
            let t = self.star[s];
            if self.mul(self.mul(s, t), s) != s {
                return Err(Violation::new("sts ≠ s", format!("s = {}, star = {}", id(s), id(t))));
            }
            if self.mul(self.mul(t, s), t) != t {
                return Err(Violation::new("tst ≠ t", format!("s = {}, star = {}", id(s), id(t))));
            }
            if self.star[t] != s {
                return Err(Violation::new("star not involutive", id(s).to_string()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.star[self.mul(a, b)] != self.mul(self.star[b], self.star[a]) {
                    return Err(Violation::new(
                        "star not an anti-homomorphism",
                        format!("{} {}", id(a), id(b)),
                    ));
                }
            }
        }
        let idem = self.idempotents();
        for &e in &idem {
            for &f in &idem {
                if self.mul(e, f) != self.mul(f, e) {
                    return Err(Violation::new(
                        "idempotents do not commute",
                        format!("{} {}", id(e), id(f)),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Overrides zero detection: `None` keeps every element nonzero.
    pub fn with_zero(mut self, zero: Option<usize>) -> Result<Self> {
        if let Some(z) = zero {
            if !(0..self.len()).all(|x| self.mul(z, x) == z && self.mul(x, z) == z) {
                return Err(Violation::new("zero not absorbing", self.elements[z].clone()).into());
            }
        }
        self.zero = zero;
        Ok(self)
    }

    pub fn from_data(data: &SemigroupData) -> Result<Self> {
        let index: HashMap<&str, usize> = data
            .elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.as_str(), i))
            .collect();
        let look = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::Unresolved(format!("unknown element {name}")))
        };
        let table = data
            .mul
            .iter()
            .map(|row| row.iter().map(|e| look(e)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let star = match &data.star {
            Some(map) => Some(
                data.elements
                    .iter()
                    .map(|e| {
                        let t = map
                            .get(e)
                            .ok_or_else(|| Error::Unresolved(format!("star of {e} missing")))?;
                        look(t)
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => None,
        };
        let s = Self::new(data.elements.clone(), table, star)?;
        match data.zero.as_deref() {
            None => Ok(s),
            Some("none") => s.with_zero(None),
            Some(z) => {
                let z = look(z)?;
                s.with_zero(Some(z))
            }
        }
    }

    pub fn to_data(&self) -> SemigroupData {
        let n = self.len();
        SemigroupData {
            elements: self.elements.clone(),
            mul: (0..n)
                .map(|a| (0..n).map(|b| self.elements[self.mul(a, b)].clone()).collect())
                .collect(),
            star: Some(
                (0..n)
                    .map(|a| (self.elements[a].clone(), self.elements[self.star[a]].clone()))
                    .collect(),
            ),
            zero: Some(match self.zero {
                Some(z) => self.elements[z].clone(),
                None => "none".to_string(),
            }),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element_id(&self, a: usize) -> &str {
        &self.elements[a]
    }

    pub fn element_index(&self, id: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == id)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.len() + b]
    }

    pub fn star(&self, a: usize) -> usize {
        self.star[a]
    }

    pub fn zero(&self) -> Option<usize> {
        self.zero
    }

    pub fn is_zero(&self, a: usize) -> bool {
        self.zero == Some(a)
    }

    pub fn is_idempotent(&self, a: usize) -> bool {
        self.mul(a, a) == a
    }

    /// `s*s`.
    pub fn source_idempotent(&self, s: usize) -> usize {
        self.mul(self.star[s], s)
    }

    /// `ss*`.
    pub fn range_idempotent(&self, s: usize) -> usize {
        self.mul(s, self.star[s])
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.is_idempotent(a)).collect()
    }

    /// `E^×`, ordered by identifier.
    pub fn nonzero_idempotents(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .idempotents()
            .into_iter()
            .filter(|&e| !self.is_zero(e))
            .collect();
        out.sort_by(|&a, &b| self.elements[a].cmp(&self.elements[b]));
        out
    }

    /// `e ≤ f` in the natural order on idempotents.
    pub fn leq(&self, e: usize, f: usize) -> bool {
        self.mul(e, f) == e
    }

    /// Nonzero elements, ordered by identifier.
    pub fn nonzero_elements(&self) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.len()).filter(|&a| !self.is_zero(a)).collect();
        out.sort_by(|&a, &b| self.elements[a].cmp(&self.elements[b]));
        out
    }
}

/// A single-object groupoid as an inverse semigroup (no zero).
pub fn group_semigroup(g: &FiniteGroupoid) -> Result<FiniteInverseSemigroup> {
    if g.n_objects() != 1 {
        return Err(Violation::new("not a group", format!("{} objects", g.n_objects())).into());
    }
    let n = g.n_arrows();
    let table = (0..n).map(|a| (0..n).map(|b| g.compose(a, b)).collect()).collect();
    let star = (0..n).map(|a| g.inverse(a)).collect();
    FiniteInverseSemigroup::new(g.arrows().to_vec(), table, Some(star))
}

/// Partial bijections of `{1..n}` as image strings, `-` where undefined.
type Partial = Vec<Option<usize>>;

fn partial_name(p: &Partial) -> String {
    p.iter()
        .map(|v| match v {
            Some(i) => char::from_digit(*i as u32 + 1, 36).expect("small alphabet"),
            None => '-',
        })
        .collect()
}

/// `(st)(i) = s(t(i))`.
fn partial_compose(s: &Partial, t: &Partial) -> Partial {
    t.iter().map(|v| v.and_then(|i| s[i])).collect()
}

fn partial_inverse(s: &Partial) -> Partial {
    let mut out = vec![None; s.len()];
    for (i, v) in s.iter().enumerate() {
        if let Some(j) = v {
            out[*j] = Some(i);
        }
    }
    out
}

fn from_partials(elements: Vec<Partial>) -> Result<FiniteInverseSemigroup> {
    let mut elements = elements;
    elements.sort_by_key(partial_name);
    let index: BTreeMap<Partial, usize> = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let table = elements
        .iter()
        .map(|s| elements.iter().map(|t| index[&partial_compose(s, t)]).collect())
        .collect();
    let star = elements.iter().map(|s| index[&partial_inverse(s)]).collect();
    FiniteInverseSemigroup::new(elements.iter().map(partial_name).collect(), table, Some(star))
}

/// All partial bijections of an `n`-letter set (`n ≤ 9`).
pub fn symmetric_inverse_monoid(n: usize) -> Result<FiniteInverseSemigroup> {
    if n > 9 {
        return Err(Violation::new("too many letters", n.to_string()).into());
    }
    let mut all: Vec<Partial> = vec![Vec::new()];
    for _ in 0..n {
        all = all
            .into_iter()
            .flat_map(|p| {
                (0..=n)
                    .map(move |v| {
                        let mut q = p.clone();
                        q.push(if v == n { None } else { Some(v) });
                        q
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    all.retain(|p| {
        let mut seen = vec![false; n];
        p.iter().flatten().all(|&i| !std::mem::replace(&mut seen[i], true))
    });
    from_partials(all)
}

/// The inverse subsemigroup of partial bijections of `{1..n}` generated by
/// `gens` (images, `None` where undefined).
pub fn generated_inverse_semigroup(n: usize, gens: &[Partial]) -> Result<FiniteInverseSemigroup> {
    if gens.iter().any(|g| g.len() != n || g.iter().flatten().any(|&i| i >= n)) {
        return Err(Violation::new("bad generator", format!("{gens:?}")).into());
    }
    let mut set: std::collections::BTreeSet<Partial> = gens.iter().cloned().collect();
    set.extend(gens.iter().map(partial_inverse));
    loop {
        let cur: Vec<Partial> = set.iter().cloned().collect();
        let before = set.len();
        for a in &cur {
            for b in &cur {
                set.insert(partial_compose(a, b));
            }
        }
        if set.len() == before {
            break;
        }
    }
    from_partials(set.into_iter().collect())
}

/// `S ⋉ E^×`: objects `E^×`, arrows the nonzero elements, `s : s*s -> ss*`.
pub fn discrete_groupoid(s: &FiniteInverseSemigroup) -> Result<FiniteGroupoid> {
    let arrows = s.nonzero_elements();
    let id = |a: usize| s.element_id(a).to_string();
    let mut data = GroupoidData {
        objects: s.nonzero_idempotents().into_iter().map(id).collect(),
        arrows: arrows
            .iter()
            .map(|&a| ArrowData {
                id: id(a),
                src: id(s.source_idempotent(a)),
                dst: id(s.range_idempotent(a)),
            })
            .collect(),
        mul: Vec::new(),
        inv: arrows.iter().map(|&a| (id(a), id(s.star(a)))).collect(),
    };
    for &a in &arrows {
        for &b in &arrows {
            if s.source_idempotent(a) == s.range_idempotent(b) {
                data.mul.push([id(a), id(b), id(s.mul(a, b))]);
            }
        }
    }
    FiniteGroupoid::from_data(&data)
}

/// `G_S = S ⋉ Ê` with its basic sets `U_e`.
#[derive(Clone, Debug)]
pub struct UniversalGroupoid {
    pub groupoid: FiniteGroupoid,
    /// Object to the idempotent `f` of the filter `f↑`.
    pub filters: Vec<usize>,
    /// Arrow to its normalized germ representative `s·f`.
    pub germs: Vec<usize>,
    /// `(e, U_e)` for `e ∈ E^×`, `U_e` as ascending objects.
    pub basis: Vec<(usize, Vec<usize>)>,
}

impl UniversalGroupoid {
    pub fn object_of_filter(&self, f: usize) -> usize {
        self.filters.iter().position(|&x| x == f).expect("nonzero idempotent")
    }

    pub fn arrow_of_germ(&self, u: usize) -> usize {
        self.germs.iter().position(|&x| x == u).expect("nonzero element")
    }
}

fn filter_id(s: &FiniteInverseSemigroup, f: usize) -> String {
    format!("↑{}", s.element_id(f))
}

fn germ_id(s: &FiniteInverseSemigroup, u: usize) -> String {
    format!("[{},↑{}]", s.element_id(u), s.element_id(s.source_idempotent(u)))
}

/// Germs `[s, f↑]` with `f ≤ s*s`, stored as `s·f`.
pub fn universal_groupoid(s: &FiniteInverseSemigroup) -> Result<UniversalGroupoid> {
    let idem = s.nonzero_idempotents();
    let mut germs: Vec<usize> = Vec::new();
    for a in s.nonzero_elements() {
        for &f in &idem {
            if s.leq(f, s.source_idempotent(a)) {
                let u = s.mul(a, f);
                if !germs.contains(&u) {
                    germs.push(u);
                }
            }
        }
    }
    let range = |u: usize| s.range_idempotent(u);
    let mut data = GroupoidData {
        objects: idem.iter().map(|&f| filter_id(s, f)).collect(),
        arrows: germs
            .iter()
            .map(|&u| ArrowData {
                id: germ_id(s, u),
                src: filter_id(s, s.source_idempotent(u)),
                dst: filter_id(s, range(u)),
            })
            .collect(),
        mul: Vec::new(),
        inv: germs.iter().map(|&u| (germ_id(s, u), germ_id(s, s.star(u)))).collect(),
    };
    for &u in &germs {
        for &v in &germs {
            if s.source_idempotent(u) == range(v) {
                data.mul.push([germ_id(s, u), germ_id(s, v), germ_id(s, s.mul(u, v))]);
            }
        }
    }
    let groupoid = FiniteGroupoid::from_data(&data)?;
    let filters: Vec<usize> = (0..groupoid.n_objects())
        .map(|x| {
            *idem
                .iter()
                .find(|&&f| filter_id(s, f) == groupoid.object_id(x))
                .expect("filter object")
        })
        .collect();
    let germs_by_arrow: Vec<usize> = (0..groupoid.n_arrows())
        .map(|a| {
            *germs
                .iter()
                .find(|&&u| germ_id(s, u) == groupoid.arrow_id(a))
                .expect("germ arrow")
        })
        .collect();
    let basis = idem
        .iter()
        .map(|&e| {
            let u: Vec<usize> = (0..filters.len()).filter(|&x| s.leq(filters[x], e)).collect();
            (e, u)
        })
        .collect();
    Ok(UniversalGroupoid {
        groupoid,
        filters,
        germs: germs_by_arrow,
        basis,
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::groupoid::{cyclic_group, Functor};

    pub(crate) fn semilattice() -> FiniteInverseSemigroup {
        FiniteInverseSemigroup::new(
            vec!["1".into(), "e".into()],
            vec![vec![0, 1], vec![1, 1]],
            None,
        )
        .unwrap()
        .with_zero(None)
        .unwrap()
    }

    #[test]
    fn examples_validate() {
        let s = semilattice();
        assert_eq!(s.star(1), 1);
        assert!(s.zero().is_none());
        let g = group_semigroup(&cyclic_group(3)).unwrap();
        assert_eq!(g.star(1), 2);
        assert_eq!(g.zero(), None);
        let m = symmetric_inverse_monoid(2).unwrap();
        assert_eq!(m.len(), 7);
        assert_eq!(m.element_id(m.zero().unwrap()), "--");
    }

    #[test]
    fn corrupted_star_is_reported() {
        let m = symmetric_inverse_monoid(2).unwrap();
        let mut data = m.to_data();
        // "21" is its own inverse; claim it is "12".
        data.star.as_mut().unwrap().insert("21".into(), "12".into());
        match FiniteInverseSemigroup::from_data(&data) {
            Err(Error::Invalid(v)) => assert_eq!(v.rule, "sts ≠ s"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn discrete_groupoid_examples() {
        let g = discrete_groupoid(&group_semigroup(&cyclic_group(4)).unwrap()).unwrap();
        assert_eq!((g.n_objects(), g.n_arrows()), (1, 4));
        let d = discrete_groupoid(&semilattice()).unwrap();
        assert_eq!((d.n_objects(), d.n_arrows()), (2, 2));
        assert!((0..2).all(|a| d.is_unit(a)));
        let m = symmetric_inverse_monoid(2).unwrap();
        let d = discrete_groupoid(&m).unwrap();
        assert_eq!(d.objects(), &["-2", "1-", "12"]);
        let mut orbits = d.orbits();
        orbits.sort();
        assert_eq!(orbits, vec![vec![0, 1], vec![2]]);
        assert_eq!(d.isotropy(2).len(), 2);
        // Isotropy is the stabilizer {s : s*s = e = ss*}.
        for x in 0..d.n_objects() {
            let e = m.element_index(d.object_id(x)).unwrap();
            let expected: Vec<String> = (0..m.len())
                .filter(|&a| m.source_idempotent(a) == e && m.range_idempotent(a) == e)
                .map(|a| m.element_id(a).to_string())
                .collect();
            let mut got: Vec<String> = d.isotropy(x).iter().map(|&a| d.arrow_id(a).to_string()).collect();
            got.sort();
            let mut expected = expected;
            expected.sort();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn universal_groupoid_examples() {
        let s = semilattice();
        let u = universal_groupoid(&s).unwrap();
        assert_eq!(u.groupoid.n_objects(), 2);
        let one = s.element_index("1").unwrap();
        let e = s.element_index("e").unwrap();
        let ue: HashMap<usize, usize> = u.basis.iter().map(|(f, pts)| (*f, pts.len())).collect();
        assert_eq!((ue[&one], ue[&e]), (2, 1));
        let g = group_semigroup(&cyclic_group(3)).unwrap();
        let ug = universal_groupoid(&g).unwrap();
        assert_eq!(ug.basis, vec![(0, vec![0])]);
        for s in [s, g, symmetric_inverse_monoid(2).unwrap(), symmetric_inverse_monoid(3).unwrap()] {
            let d = discrete_groupoid(&s).unwrap();
            let u = universal_groupoid(&s).unwrap();
            assert!(Functor::find_isomorphism(&d, &u.groupoid).is_some());
        }
    }

    #[test]
    fn generated_subsemigroup() {
        // One partial shift on 3 letters: 1 -> 2 -> 3.
        let shift = vec![Some(1), Some(2), None];
        let s = generated_inverse_semigroup(3, &[shift]).unwrap();
        assert!(s.validate().is_ok());
        assert!(s.zero().is_some());
    }
}
