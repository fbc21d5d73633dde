//! Constructors for standard families.

use std::collections::{BTreeSet, HashMap};

use super::gset::GSet;
use super::FiniteGroupoid;
use crate::error::{Error, Result, Violation};
use crate::schema::{ArrowData, GroupoidData};

fn padded(i: usize, n: usize) -> String {
    let w = n.saturating_sub(1).to_string().len();
    format!("{i:0w$}")
}

/// One-object groupoid from a multiplication table, `table[a][b] = a·b`.
pub fn from_group(names: &[String], table: &[Vec<usize>]) -> Result<FiniteGroupoid> {
    let n = names.len();
    if table.len() != n || table.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch {
            context: "group table",
            expected: n,
            found: table.len(),
        });
    }
    if let Some(&bad) = table.iter().flatten().find(|&&c| c >= n) {
        return Err(Error::IndexOutOfRange {
            context: "group table",
            index: bad,
            bound: n,
        });
    }
    let e = (0..n)
        .find(|&a| table[a][a] == a)
        .ok_or_else(|| Violation::new("missing unit", "no idempotent element"))?;
    let mut inv = std::collections::BTreeMap::new();
    for a in 0..n {
        let b = (0..n)
            .find(|&b| table[a][b] == e && table[b][a] == e)
            .ok_or_else(|| Violation::new("inverse", format!("{} has no inverse", names[a])))?;
        inv.insert(names[a].clone(), names[b].clone());
    }
    let data = GroupoidData {
        objects: vec!["*".into()],
        arrows: names
            .iter()
            .map(|a| ArrowData {
                id: a.clone(),
                src: "*".into(),
                dst: "*".into(),
            })
            .collect(),
        mul: (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| [names[a].clone(), names[b].clone(), names[table[a][b]].clone()])
            .collect(),
        inv,
    };
    FiniteGroupoid::from_data(&data)
}

pub fn trivial_group() -> FiniteGroupoid {
    cyclic_group(1)
}

/// `Z/m` with elements named by residue.
pub fn cyclic_group(m: usize) -> FiniteGroupoid {
    assert!(m >= 1);
    let names: Vec<String> = (0..m).map(|i| padded(i, m)).collect();
    let table: Vec<Vec<usize>> = (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect();
    from_group(&names, &table).expect("cyclic group table is valid")
}

/// The symmetric group on `n` letters; elements are one-line notations, `(στ)(i) = σ(τ(i))`.
pub fn symmetric_group(n: usize) -> FiniteGroupoid {
    assert!((1..=9).contains(&n));
    let mut perms: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..n {
        perms = perms
            .into_iter()
            .flat_map(|p| {
                (0..n)
                    .filter(|i| !p.contains(i))
                    .map(|i| {
                        let mut q = p.clone();
                        q.push(i);
                        q
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    let names: Vec<String> = perms
        .iter()
        .map(|p| p.iter().map(|d| d.to_string()).collect())
        .collect();
    let table: Vec<Vec<usize>> = perms
        .iter()
        .map(|s| {
            perms
                .iter()
                .map(|t| {
                    let st: Vec<usize> = t.iter().map(|&i| s[i]).collect();
                    perms.iter().position(|p| *p == st).unwrap()
                })
                .collect()
        })
        .collect();
    from_group(&names, &table).expect("symmetric group table is valid")
}

/// `k` objects, one arrow `i_j` from `j` to `i` for every pair.
pub fn pair_groupoid(k: usize) -> FiniteGroupoid {
    let obj: Vec<String> = (0..k).map(|i| padded(i, k)).collect();
    let arrow = |i: usize, j: usize| format!("{}_{}", obj[i], obj[j]);
    let mut data = GroupoidData {
        objects: obj.clone(),
        arrows: Vec::new(),
        mul: Vec::new(),
        inv: Default::default(),
    };
    for i in 0..k {
        for j in 0..k {
            data.arrows.push(ArrowData {
                id: arrow(i, j),
                src: obj[j].clone(),
                dst: obj[i].clone(),
            });
            data.inv.insert(arrow(i, j), arrow(j, i));
            for l in 0..k {
                data.mul.push([arrow(i, j), arrow(j, l), arrow(i, l)]);
            }
        }
    }
    FiniteGroupoid::from_data(&data).expect("pair groupoid is valid")
}

/// `k` objects and only unit arrows.
pub fn discrete(k: usize) -> FiniteGroupoid {
    let obj: Vec<String> = (0..k).map(|i| padded(i, k)).collect();
    let data = GroupoidData {
        objects: obj.clone(),
        arrows: obj
            .iter()
            .map(|x| ArrowData {
                id: x.clone(),
                src: x.clone(),
                dst: x.clone(),
            })
            .collect(),
        mul: obj.iter().map(|x| [x.clone(), x.clone(), x.clone()]).collect(),
        inv: obj.iter().map(|x| (x.clone(), x.clone())).collect(),
    };
    FiniteGroupoid::from_data(&data).expect("discrete groupoid is valid")
}

/// Components are prefixed `c.` with `c` the zero-padded component index.
pub fn disjoint_union(parts: &[&FiniteGroupoid]) -> Result<FiniteGroupoid> {
    let mut data = GroupoidData {
        objects: Vec::new(),
        arrows: Vec::new(),
        mul: Vec::new(),
        inv: Default::default(),
    };
    for (c, g) in parts.iter().enumerate() {
        let p = |s: &str| format!("{}.{}", padded(c, parts.len()), s);
        let d = g.to_data();
        data.objects.extend(d.objects.iter().map(|x| p(x)));
        data.arrows.extend(d.arrows.iter().map(|a| ArrowData {
            id: p(&a.id),
            src: p(&a.src),
            dst: p(&a.dst),
        }));
        data.mul
            .extend(d.mul.iter().map(|[a, b, ab]| [p(a), p(b), p(ab)]));
        data.inv
            .extend(d.inv.iter().map(|(a, b)| (p(a), p(b))));
    }
    FiniteGroupoid::from_data(&data)
}

/// `G ⋉ X` together with the decomposition of each arrow as `(g, x)`.
#[derive(Clone, Debug)]
pub struct ActionGroupoid {
    pub groupoid: FiniteGroupoid,
    /// `parts[a] = (g, x)`: arrow `a` goes from `x` to `g·x`.
    pub parts: Vec<(usize, usize)>,
    lookup: HashMap<(usize, usize), usize>,
}

impl ActionGroupoid {
    pub fn arrow_of(&self, g: usize, x: usize) -> Option<usize> {
        self.lookup.get(&(g, x)).copied()
    }
}

/// Arrows `g|x` from `x` to `g·x`, for `s(g)` equal to the anchor of `x`.
pub fn action_groupoid(g: &FiniteGroupoid, x: &GSet) -> Result<ActionGroupoid> {
    let arrow = |a: usize, p: usize| format!("{}|{}", g.arrow_id(a), x.point_id(p));
    let mut data = GroupoidData {
        objects: x.points().to_vec(),
        arrows: Vec::new(),
        mul: Vec::new(),
        inv: Default::default(),
    };
    for a in 0..g.n_arrows() {
        for p in 0..x.len() {
            let Some(q) = x.act(a, p) else { continue };
            data.arrows.push(ArrowData {
                id: arrow(a, p),
                src: x.point_id(p).to_string(),
                dst: x.point_id(q).to_string(),
            });
            data.inv.insert(arrow(a, p), arrow(g.inverse(a), q));
            for &b in g.arrows_into(g.source(a)) {
                for r in 0..x.len() {
                    if x.act(b, r) == Some(p) {
                        data.mul
                            .push([arrow(a, p), arrow(b, r), arrow(g.compose(a, b), r)]);
                    }
                }
            }
        }
    }
    let groupoid = FiniteGroupoid::from_data(&data)?;
    let mut parts = vec![(0, 0); groupoid.n_arrows()];
    for a in 0..g.n_arrows() {
        for p in 0..x.len() {
            if x.act(a, p).is_some() {
                parts[groupoid.arrow_index(&arrow(a, p)).unwrap()] = (a, p);
            }
        }
    }
    let lookup = parts.iter().enumerate().map(|(a, &p)| (p, a)).collect();
    Ok(ActionGroupoid {
        groupoid,
        parts,
        lookup,
    })
}

/// A subgroupoid with identifiers inherited from the ambient groupoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroupoid {
    pub groupoid: FiniteGroupoid,
    /// Ambient index of each object, ascending.
    pub object_map: Vec<usize>,
    /// Ambient index of each arrow, ascending.
    pub arrow_map: Vec<usize>,
}

impl Subgroupoid {
    pub fn local_object(&self, ambient: usize) -> Option<usize> {
        self.object_map.binary_search(&ambient).ok()
    }

    pub fn local_arrow(&self, ambient: usize) -> Option<usize> {
        self.arrow_map.binary_search(&ambient).ok()
    }
}

/// Checks closure and builds the subgroupoid on the given objects and arrows.
pub fn subgroupoid(g: &FiniteGroupoid, objects: &[usize], arrows: &[usize]) -> Result<Subgroupoid> {
    let objs: BTreeSet<usize> = objects.iter().copied().collect();
    let arrs: BTreeSet<usize> = arrows.iter().copied().collect();
    for &x in &objs {
        if x >= g.n_objects() {
            return Err(Error::IndexOutOfRange {
                context: "subgroupoid object",
                index: x,
                bound: g.n_objects(),
            });
        }
        if !arrs.contains(&g.unit(x)) {
            return Err(Violation::new(
                "subgroupoid not closed",
                format!("unit of {} missing", g.object_id(x)),
            )
            .into());
        }
    }
    for &a in &arrs {
        if a >= g.n_arrows() {
            return Err(Error::IndexOutOfRange {
                context: "subgroupoid arrow",
                index: a,
                bound: g.n_arrows(),
            });
        }
        if !objs.contains(&g.source(a)) || !objs.contains(&g.range(a)) {
            return Err(Violation::new(
                "subgroupoid not closed",
                format!("endpoint of {} missing", g.arrow_id(a)),
            )
            .into());
        }
        if !arrs.contains(&g.inverse(a)) {
            return Err(Violation::new(
                "subgroupoid not closed",
                format!("inverse of {} missing", g.arrow_id(a)),
            )
            .into());
        }
        for &b in &arrs {
            if let Some(ab) = g.try_compose(a, b) {
                if !arrs.contains(&ab) {
                    return Err(Violation::new(
                        "subgroupoid not closed",
                        format!("{}·{} missing", g.arrow_id(a), g.arrow_id(b)),
                    )
                    .into());
                }
            }
        }
    }
    let object_map: Vec<usize> = objs.into_iter().collect();
    let arrow_map: Vec<usize> = arrs.into_iter().collect();
    let full = g.to_data();
    let keep: BTreeSet<&str> = arrow_map.iter().map(|&a| g.arrow_id(a)).collect();
    let data = GroupoidData {
        objects: object_map.iter().map(|&x| g.object_id(x).to_string()).collect(),
        arrows: full
            .arrows
            .into_iter()
            .filter(|a| keep.contains(a.id.as_str()))
            .collect(),
        mul: full
            .mul
            .into_iter()
            .filter(|[a, b, _]| keep.contains(a.as_str()) && keep.contains(b.as_str()))
            .collect(),
        inv: full
            .inv
            .into_iter()
            .filter(|(a, _)| keep.contains(a.as_str()))
            .collect(),
    };
    Ok(Subgroupoid {
        groupoid: FiniteGroupoid::from_data(&data)?,
        object_map,
        arrow_map,
    })
}

/// The unit space as a subgroupoid.
pub fn unit_subgroupoid(g: &FiniteGroupoid) -> Subgroupoid {
    let objects: Vec<usize> = (0..g.n_objects()).collect();
    let units: Vec<usize> = objects.iter().map(|&x| g.unit(x)).collect();
    subgroupoid(g, &objects, &units).expect("unit space is a subgroupoid")
}

/// The full subgroupoid on a set of objects.
pub fn full_subgroupoid(g: &FiniteGroupoid, objects: &[usize]) -> Result<Subgroupoid> {
    let set: BTreeSet<usize> = objects.iter().copied().collect();
    let arrows: Vec<usize> = (0..g.n_arrows())
        .filter(|&a| set.contains(&g.source(a)) && set.contains(&g.range(a)))
        .collect();
    subgroupoid(g, objects, &arrows)
}

/// The smallest subgroupoid containing the given objects and arrows.
pub fn generated_subgroupoid(g: &FiniteGroupoid, objects: &[usize], arrows: &[usize]) -> Subgroupoid {
    let mut objs: BTreeSet<usize> = objects.iter().copied().collect();
    let mut arrs: BTreeSet<usize> = arrows.iter().copied().collect();
    loop {
        let before = (objs.len(), arrs.len());
        for &a in &arrs.clone() {
            objs.insert(g.source(a));
            objs.insert(g.range(a));
            arrs.insert(g.inverse(a));
        }
        for &x in &objs {
            arrs.insert(g.unit(x));
        }
        let current: Vec<usize> = arrs.iter().copied().collect();
        for &a in &current {
            for &b in &current {
                if let Some(ab) = g.try_compose(a, b) {
                    arrs.insert(ab);
                }
            }
        }
        if (objs.len(), arrs.len()) == before {
            break;
        }
    }
    let objs: Vec<usize> = objs.into_iter().collect();
    let arrs: Vec<usize> = arrs.into_iter().collect();
    subgroupoid(g, &objs, &arrs).expect("closure is a subgroupoid")
}
