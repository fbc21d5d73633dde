//! Lifting a module map `f : M -> Ind_Ω N` to a chain map between bar
//! resolutions, and the induced maps on homology.
//!
//! `P_n` is the bar resolution of `M` over `G`, free on generators
//! `(1_x, τ_1, ..., τ_n; e_j)`. `Q_n` is the bar resolution of `N` over `H`,
//! with basis `(h_0, ..., h_n; e_j)` lying over `r(h_0)`. Elements of
//! `Ind_Ω Q_n` are indexed by `(orbit representative, tuple index, j)`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::induce::{induce_module, rho_bar_pullback};
use super::EtaleCorrespondence;
use crate::error::{Error, Result};
use crate::gmodule::{trivial_module, GModule, GModuleMap, InducedModule, Orbits};
use crate::groupoid::{face_tuple, nerve, FiniteGroupoid, Nerve, Variant};
use crate::homology::{bar_complex, homology_groups, BarBasis};
use crate::intalg::{induced_subquotient_map, IntMatrix, IntSolver, SparseVec, SubquotientMap};

/// `(representative, tuple index in the nerve of H of length n + 1, j)`.
///
/// In degree `-1` (the module `Ind_Ω N` itself) the tuple index is `0`.
pub type IndElem = BTreeMap<(usize, usize, usize), BigInt>;

/// Images of the generators of `P_n`, keyed by `(τ, j)`; in degree 0 `τ = [x]`.
#[derive(Clone, Debug)]
pub struct ChainLift {
    pub images: Vec<HashMap<(Vec<usize>, usize), IndElem>>,
    /// `C_n(G; M) -> C_n(H; N)` after passing to coinvariants.
    pub coinvariant_maps: Vec<IntMatrix>,
}

impl ChainLift {
    pub fn max_degree(&self) -> usize {
        self.images.len() - 1
    }
}

fn add(e: &mut IndElem, key: (usize, usize, usize), v: BigInt) {
    if v.is_zero() {
        return;
    }
    let slot = e.entry(key).or_insert_with(BigInt::zero);
    *slot += v;
    if slot.is_zero() {
        e.remove(&key);
    }
}

fn add_scaled(e: &mut IndElem, other: &IndElem, c: &BigInt) {
    for (&k, v) in other {
        add(e, k, v * c);
    }
}

/// The data shared by lifting and checking.
pub(crate) struct LiftContext<'a> {
    omega: &'a EtaleCorrespondence,
    m: &'a GModule,
    n: &'a GModule,
    ind: InducedModule,
    /// `q_nerves[k]` holds tuples of length `k + 1`.
    q_nerves: Vec<Nerve>,
    /// `fibers[k][y]`: `(tuple index, j)` with `r(h_0) = y`, in order.
    fibers: Vec<Vec<Vec<(usize, usize)>>>,
    local: Vec<HashMap<(usize, usize), usize>>,
    solvers: Vec<HashMap<usize, IntSolver>>,
}

impl<'a> LiftContext<'a> {
    pub(crate) fn new(
        omega: &'a EtaleCorrespondence,
        m: &'a GModule,
        n: &'a GModule,
        max_degree: usize,
    ) -> Result<Self> {
        omega
            .source()
            .ensure_same(m.groupoid(), "module is not over the source groupoid")?;
        let ind = induce_module(omega, n)?;
        let h = omega.target();
        let q_nerves: Vec<Nerve> = (0..=max_degree).map(|k| nerve(h, k + 1)).collect();
        let mut fibers = Vec::with_capacity(q_nerves.len());
        let mut local = Vec::with_capacity(q_nerves.len());
        for nv in &q_nerves {
            let mut f = vec![Vec::new(); h.n_objects()];
            let mut l = HashMap::new();
            for (ti, t) in nv.tuples().iter().enumerate() {
                let y = h.range(t[0]);
                for j in 0..n.rank(h.source(*t.last().unwrap())) {
                    l.insert((ti, j), f[y].len());
                    f[y].push((ti, j));
                }
            }
            fibers.push(f);
            local.push(l);
        }
        Ok(LiftContext {
            omega,
            m,
            n,
            ind,
            q_nerves,
            fibers,
            local,
            solvers: (0..=max_degree).map(|_| HashMap::new()).collect(),
        })
    }

    fn g(&self) -> &FiniteGroupoid {
        self.omega.source()
    }

    fn h(&self) -> &FiniteGroupoid {
        self.omega.target()
    }

    fn orbits(&self) -> &Orbits {
        &self.ind.orbits
    }

    pub(crate) fn induced(&self) -> &InducedModule {
        &self.ind
    }

    /// Rewrites `(p, (h_0, ...), j)` for any point `p` in representative form.
    pub(crate) fn normalize(&self, p: usize, tuple: &[usize], j: usize) -> (usize, usize, usize) {
        let (r, t) = (self.orbits().rep_of[p], self.orbits().transport[p]);
        let mut moved = tuple.to_vec();
        moved[0] = self.h().compose(t, tuple[0]);
        let ti = self.q_nerves[tuple.len() - 1]
            .index_of(&moved)
            .expect("tuple in the nerve");
        (r, ti, j)
    }

    /// `a · e` in degree `k`.
    fn act(&self, a: usize, e: &IndElem, k: usize) -> IndElem {
        if self.g().is_unit(a) {
            return e.clone();
        }
        let mut out = IndElem::new();
        for (&(w, ti, j), c) in e {
            let p = self.omega.left_act(a, w).expect("anchored element");
            let key = self.normalize(p, self.q_nerves[k].tuple(ti), j);
            add(&mut out, key, c.clone());
        }
        out
    }

    /// `∂^Q_k` on the fiber over `y`, in local coordinates; the augmentation for `k = 0`.
    fn fiber_boundary(&self, k: usize, y: usize) -> IntMatrix {
        let columns = self.fibers[k][y]
            .iter()
            .map(|&(ti, j)| {
                let mut col = SparseVec::new();
                for (key, v) in self.boundary_terms(k, ti, j) {
                    let row = if k == 0 {
                        key.2
                    } else {
                        self.local[k - 1][&(key.1, key.2)]
                    };
                    crate::intalg::sparse_axpy(&mut col, row, v);
                }
                col
            })
            .collect();
        let rows = if k == 0 {
            self.n.rank(y)
        } else {
            self.fibers[k - 1][y].len()
        };
        IntMatrix::from_columns(rows, columns)
    }

    /// Terms of `∂^Q_k (h_0, ..., h_k; e_j)` as `(0, tuple index, j')`.
    fn boundary_terms(&self, k: usize, ti: usize, j: usize) -> Vec<((usize, usize, usize), BigInt)> {
        let h = self.h();
        let t = self.q_nerves[k].tuple(ti);
        let moved = self.n.act(t[k], &SparseVec::from([(j, BigInt::one())]));
        let sign_k = if k.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
        let mut out = Vec::new();
        if k == 0 {
            for (jj, v) in moved {
                out.push(((0, 0, jj), v));
            }
            return out;
        }
        for i in 0..k {
            let face = face_tuple(h, t, i, Variant::Resolution);
            let fi = self.q_nerves[k - 1].index_of(&face).expect("face in the nerve");
            let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            out.push(((0, fi, j), sign));
        }
        let fi = self.q_nerves[k - 1].index_of(&t[..k]).expect("face in the nerve");
        for (jj, v) in moved {
            out.push(((0, fi, jj), &sign_k * v));
        }
        out
    }

    /// `Ind(∂^Q_k)`; for `k = 0` the augmentation into `Ind N`.
    fn apply_boundary(&self, k: usize, e: &IndElem) -> IndElem {
        let mut out = IndElem::new();
        for (&(w, ti, j), c) in e {
            for ((_, fi, jj), v) in self.boundary_terms(k, ti, j) {
                add(&mut out, (w, fi, jj), v * c);
            }
        }
        out
    }

    /// `f̃_{k-1}(g'_0, rest; v)` where `(rest; v)` names a generator.
    fn image_of(
        &self,
        images: &[HashMap<(Vec<usize>, usize), IndElem>],
        k: usize,
        face: &[usize],
        v: &SparseVec,
    ) -> IndElem {
        let g = self.g();
        let g0 = face[0];
        let key: Vec<usize> = if face.len() == 1 {
            vec![g.source(g0)]
        } else {
            face[1..].to_vec()
        };
        let mut acc = IndElem::new();
        for (jj, c) in v {
            add_scaled(&mut acc, &images[k - 1][&(key.clone(), *jj)], c);
        }
        self.act(g0, &acc, k - 1)
    }

    /// What `Ind(∂^Q)` of the image of the generator `(1, τ; e_j)` must equal.
    fn target_of(
        &self,
        f: &GModuleMap,
        images: &[HashMap<(Vec<usize>, usize), IndElem>],
        k: usize,
        tau: &[usize],
        j: usize,
    ) -> IndElem {
        let g = self.g();
        let mut rhs = IndElem::new();
        if k == 0 {
            let x = tau[0];
            let col = f.components[x].column(j);
            for &(w, off) in &self.ind.blocks[x] {
                let y = self.omega.sigma(w);
                for jj in 0..self.n.rank(y) {
                    if let Some(v) = col.get(&(off + jj)) {
                        add(&mut rhs, (w, 0, jj), v.clone());
                    }
                }
            }
            return rhs;
        }
        let x = g.range(tau[0]);
        let mut full = Vec::with_capacity(k + 1);
        full.push(g.unit(x));
        full.extend_from_slice(tau);
        let e_j = SparseVec::from([(j, BigInt::one())]);
        for i in 0..=k {
            let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let part = if i < k {
                let face = face_tuple(g, &full, i, Variant::Resolution);
                self.image_of(images, k, &face, &e_j)
            } else {
                let moved = self.m.act(tau[k - 1], &e_j);
                self.image_of(images, k, &full[..k], &moved)
            };
            add_scaled(&mut rhs, &part, &sign);
        }
        rhs
    }

    fn solver(&mut self, k: usize, y: usize) -> &IntSolver {
        if !self.solvers[k].contains_key(&y) {
            let s = IntSolver::new(&self.fiber_boundary(k, y));
            self.solvers[k].insert(y, s);
        }
        &self.solvers[k][&y]
    }

    /// Solves `Ind(∂^Q_k) u = rhs` one orbit at a time.
    fn solve(&mut self, k: usize, rhs: &IndElem) -> Option<IndElem> {
        let mut by_rep: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (&(w, ti, j), v) in rhs {
            let row = if k == 0 { j } else { self.local[k - 1][&(ti, j)] };
            by_rep.entry(w).or_default().insert(row, v.clone());
        }
        let mut out = IndElem::new();
        for (w, b) in by_rep {
            let y = self.omega.sigma(w);
            let sol = self.solver(k, y).solve_sparse(&b)?;
            for (l, v) in sol {
                let (ti, j) = self.fibers[k][y][l];
                add(&mut out, (w, ti, j), v);
            }
        }
        Some(out)
    }

    fn generators(&self, k: usize) -> Vec<(Vec<usize>, usize)> {
        let g = self.g();
        let mut out = Vec::new();
        for t in nerve(g, k).tuples() {
            for j in 0..self.m.rank(BarBasis::base(g, k, t)) {
                out.push((t.clone(), j));
            }
        }
        out
    }

    /// `F_k`, the coinvariant map of degree `k`.
    pub(crate) fn coinvariant_map(&self, k: usize, images: &HashMap<(Vec<usize>, usize), IndElem>) -> IntMatrix {
        let h = self.h();
        let src = BarBasis::new(self.g(), self.m, k);
        let tgt = BarBasis::new(h, self.n, k);
        let columns = self
            .generators(k)
            .into_iter()
            .map(|gen| {
                let mut col = SparseVec::new();
                for (&(_, ti, j), v) in &images[&gen] {
                    let t = self.q_nerves[k].tuple(ti);
                    let row = if k == 0 {
                        tgt.index(&[h.source(t[0])], j)
                    } else {
                        tgt.index(&t[1..], j)
                    };
                    crate::intalg::sparse_axpy(&mut col, row, v.clone());
                }
                col
            })
            .collect();
        let out = IntMatrix::from_columns(tgt.rank, columns);
        debug_assert_eq!(out.cols(), src.rank);
        out
    }

    pub(crate) fn finish(&self, images: Vec<HashMap<(Vec<usize>, usize), IndElem>>) -> ChainLift {
        let coinvariant_maps = images
            .iter()
            .enumerate()
            .map(|(k, im)| self.coinvariant_map(k, im))
            .collect();
        ChainLift {
            images,
            coinvariant_maps,
        }
    }
}

fn check_map(ctx: &LiftContext, f: &GModuleMap) -> Result<()> {
    if f.source != *ctx.m || f.target != ctx.induced().module {
        return Err(Error::GroupoidMismatch(
            "module map must run from M to the induced module".to_string(),
        ));
    }
    Ok(())
}

/// Lifts `f : M -> Ind_Ω N` through degrees `0..=max_degree`.
pub fn lift_chain_map(
    omega: &EtaleCorrespondence,
    m: &GModule,
    n: &GModule,
    f: &GModuleMap,
    max_degree: usize,
) -> Result<ChainLift> {
    let mut ctx = LiftContext::new(omega, m, n, max_degree)?;
    check_map(&ctx, f)?;
    let mut images: Vec<HashMap<(Vec<usize>, usize), IndElem>> = Vec::with_capacity(max_degree + 1);
    for k in 0..=max_degree {
        let mut level = HashMap::new();
        for (tau, j) in ctx.generators(k) {
            let rhs = ctx.target_of(f, &images, k, &tau, j);
            let sol = ctx.solve(k, &rhs).ok_or_else(|| {
                Error::LiftFailed(format!("degree {k}, generator {tau:?} coordinate {j}"))
            })?;
            level.insert((tau, j), sol);
        }
        images.push(level);
    }
    Ok(ctx.finish(images))
}

/// Checks that a lift commutes with the boundaries and the augmentations.
pub fn verify_lift(
    omega: &EtaleCorrespondence,
    m: &GModule,
    n: &GModule,
    f: &GModuleMap,
    lift: &ChainLift,
) -> Result<()> {
    let ctx = LiftContext::new(omega, m, n, lift.max_degree())?;
    check_map(&ctx, f)?;
    for k in 0..=lift.max_degree() {
        for (tau, j) in ctx.generators(k) {
            let image = lift.images[k].get(&(tau.clone(), j)).ok_or_else(|| {
                Error::LiftFailed(format!("degree {k}: no image for {tau:?} coordinate {j}"))
            })?;
            if ctx.apply_boundary(k, image) != ctx.target_of(f, &lift.images, k, &tau, j) {
                return Err(Error::LiftFailed(format!(
                    "degree {k}: square fails at {tau:?} coordinate {j}"
                )));
            }
        }
    }
    Ok(())
}

/// `H_k(G; M) -> H_k(H; N)` for `k <= max`, read off a lift of degree `max + 1`
/// or more.
pub fn maps_from_lift(
    omega: &EtaleCorrespondence,
    m: &GModule,
    n: &GModule,
    lift: &ChainLift,
) -> Result<Vec<SubquotientMap>> {
    let top = lift.max_degree();
    if top == 0 {
        return Ok(Vec::new());
    }
    let cg = bar_complex(omega.source(), m, top)?;
    let ch = bar_complex(omega.target(), n, top)?;
    (0..top)
        .map(|k| {
            induced_subquotient_map(
                &lift.coinvariant_maps[k],
                &homology_groups(&cg, k)?,
                &homology_groups(&ch, k)?,
            )
        })
        .collect()
}

/// `H_k(G; M) -> H_k(H; N)` for `k = 0..=max_degree`.
pub fn homology_maps_with(
    omega: &EtaleCorrespondence,
    m: &GModule,
    n: &GModule,
    f: &GModuleMap,
    max_degree: usize,
) -> Result<Vec<SubquotientMap>> {
    let lift = lift_chain_map(omega, m, n, f, max_degree + 1)?;
    maps_from_lift(omega, m, n, &lift)
}

pub fn homology_map_with(
    omega: &EtaleCorrespondence,
    m: &GModule,
    n: &GModule,
    f: &GModuleMap,
    degree: usize,
) -> Result<SubquotientMap> {
    Ok(homology_maps_with(omega, m, n, f, degree)?.pop().expect("nonempty"))
}

/// `H_k(Ω) : H_k(G) -> H_k(H)`, lifting `ρ̄^*`.
pub fn homology_maps(omega: &EtaleCorrespondence, max_degree: usize) -> Result<Vec<SubquotientMap>> {
    let m = trivial_module(omega.source());
    let n = trivial_module(omega.target());
    homology_maps_with(omega, &m, &n, &rho_bar_pullback(omega)?, max_degree)
}

pub fn homology_map(omega: &EtaleCorrespondence, degree: usize) -> Result<SubquotientMap> {
    Ok(homology_maps(omega, degree)?.pop().expect("nonempty"))
}
