//! Randomized verification suites. Each failing case is dumped as a
//! self-contained instance that can be reloaded and rechecked.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{standard_groupoids, Corpus};
use crate::correspondence::{homology_maps, induce_module, EtaleCorrespondence};
use crate::error::{Error, Result};
use crate::gmodule::{gset_module, tensor_kappa, triangle_check, GModule};
use crate::groupoid::{face_matrix, homotopy_matrix, nerve, subgroupoid, FiniteGroupoid, Functor, GSet, Subgroupoid, Variant};
use crate::homology::{bar_complex, matui_complex, shapiro_check};
use crate::intalg::IntMatrix;
use crate::invsemi::{chain_iso_check, discrete_groupoid, omega_s, stabilizer_decomposition, universal_groupoid, FiniteInverseSemigroup};
use crate::schema::{CorrespondenceData, GSetData, GroupoidData, ModuleData, SemigroupData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Adjunction,
    Shapiro,
    Functoriality,
    Homotopy,
    Kappa,
    Invsemi,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Adjunction,
        Suite::Shapiro,
        Suite::Functoriality,
        Suite::Homotopy,
        Suite::Kappa,
        Suite::Invsemi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Adjunction => "adjunction",
            Suite::Shapiro => "shapiro",
            Suite::Functoriality => "functoriality",
            Suite::Homotopy => "homotopy",
            Suite::Kappa => "kappa",
            Suite::Invsemi => "invsemi",
        }
    }

    fn default_cases(self) -> usize {
        match self {
            Suite::Adjunction | Suite::Shapiro | Suite::Kappa => 50,
            Suite::Functoriality => 30,
            Suite::Homotopy => 10,
            Suite::Invsemi => 8,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Unresolved(format!("unknown suite {s}")))
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Largest arrow count for randomized groupoids.
    pub size_bound: usize,
    /// Overrides the per-suite case count.
    pub cases: Option<usize>,
    /// Flips the sign of face 0 in the resolution boundary. Mutation testing only.
    #[doc(hidden)]
    pub face_sign_bug: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0,
            size_bound: 24,
            cases: None,
            face_sign_bug: false,
        }
    }
}

/// A checkable instance, serializable on its own.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Instance {
    Homotopy {
        groupoid: GroupoidData,
        max_degree: usize,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        face_sign_bug: bool,
    },
    Adjunction {
        groupoid: GroupoidData,
        sub_objects: Vec<String>,
        sub_arrows: Vec<String>,
        /// Over the subgroupoid.
        n: ModuleData,
        /// Over the groupoid.
        m: ModuleData,
    },
    Shapiro {
        groupoid: GroupoidData,
        sub_objects: Vec<String>,
        sub_arrows: Vec<String>,
        module: ModuleData,
        max_degree: usize,
    },
    Functoriality {
        g: GroupoidData,
        h: GroupoidData,
        k: GroupoidData,
        omega: CorrespondenceData,
        lambda: CorrespondenceData,
        max_degree: usize,
    },
    Kappa {
        source: GroupoidData,
        target: GroupoidData,
        omega: CorrespondenceData,
        /// A left set over the target; the coefficients are its permutation module.
        z: GSetData,
    },
    Invsemi {
        semigroup: SemigroupData,
        max_degree: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub suite: String,
    pub detail: String,
    pub instance: Instance,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: usize,
    pub failures: Vec<Counterexample>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn sub_ids(g: &FiniteGroupoid, sub: &Subgroupoid) -> (Vec<String>, Vec<String>) {
    (
        sub.object_map.iter().map(|&x| g.object_id(x).to_string()).collect(),
        sub.arrow_map.iter().map(|&a| g.arrow_id(a).to_string()).collect(),
    )
}

fn load_sub(g: &FiniteGroupoid, objects: &[String], arrows: &[String]) -> Result<Subgroupoid> {
    let objs = objects
        .iter()
        .map(|o| g.object_index(o).ok_or_else(|| Error::Unresolved(format!("object {o}"))))
        .collect::<Result<Vec<_>>>()?;
    let arrs = arrows
        .iter()
        .map(|a| g.arrow_index(a).ok_or_else(|| Error::Unresolved(format!("arrow {a}"))))
        .collect::<Result<Vec<_>>>()?;
    subgroupoid(g, &objs, &arrs)
}

fn first_non_identity(m: &IntMatrix) -> Option<(usize, usize, String)> {
    let d = m.to_dense();
    for j in 0..m.cols() {
        for (i, row) in d.iter().enumerate() {
            let expected = i64::from(i == j);
            if row[j] != expected.into() {
                return Some((i, j, row[j].to_string()));
            }
        }
    }
    None
}

fn resolution_boundary(g: &FiniteGroupoid, n: usize, bug: bool) -> Result<IntMatrix> {
    let mut total: Option<IntMatrix> = None;
    for i in 0..=n {
        let mut f = face_matrix(g, n, i, Variant::Resolution)?;
        if (i % 2 == 1) != (bug && i == 0) {
            f = -&f;
        }
        total = Some(match total {
            None => f,
            Some(t) => t.checked_add(&f)?,
        });
    }
    Ok(total.expect("at least one face"))
}

fn check_homotopy(g: &FiniteGroupoid, max_degree: usize, bug: bool) -> Result<Option<String>> {
    let d0 = resolution_boundary(g, 0, bug)?;
    if let Some((i, j, v)) = first_non_identity(&d0.checked_mul(&homotopy_matrix(g, 0))?) {
        return Ok(Some(format!("∂₀h₀ entry ({i},{j}) is {v}")));
    }
    for n in 0..=max_degree {
        let lhs = resolution_boundary(g, n + 1, bug)?
            .checked_mul(&homotopy_matrix(g, n + 1))?
            .checked_add(&homotopy_matrix(g, n).checked_mul(&resolution_boundary(g, n, bug)?)?)?;
        if let Some((i, j, v)) = first_non_identity(&lhs) {
            let cells = nerve(g, n + 1);
            return Ok(Some(format!(
                "degree {n}: ∂h + h∂ at row {} column {} is {v}",
                cells.describe(g, i),
                cells.describe(g, j)
            )));
        }
    }
    let trivial = crate::gmodule::trivial_module(g);
    if bar_complex(g, &trivial, max_degree + 1)? != matui_complex(g, max_degree + 1)? {
        return Ok(Some("bar complex with trivial coefficients differs from the face complex".into()));
    }
    Ok(None)
}

fn check_functoriality(omega: &EtaleCorrespondence, lambda: &EtaleCorrespondence, max: usize) -> Result<Option<String>> {
    let direct = homology_maps(&omega.compose(lambda)?, max)?;
    let first = homology_maps(omega, max)?;
    let second = homology_maps(lambda, max)?;
    for n in 0..=max {
        let composed = first[n].then(&second[n])?;
        if !composed.same_map(&direct[n]) {
            return Ok(Some(format!(
                "degree {n}: composite gives {:?}, product gives {:?}",
                direct[n].matrix.to_dense(),
                composed.matrix.to_dense()
            )));
        }
    }
    Ok(None)
}

/// `tensor_kappa` fiber ranks of `Ω ×_H Z` against `Ind_Ω Z[Z]`.
fn check_kappa(omega: &EtaleCorrespondence, z: &GSet) -> Result<Option<String>> {
    let g = omega.source();
    let h = omega.target();
    let k = tensor_kappa(h, &omega.right_set(), z);
    let mut ranks = vec![0; g.n_objects()];
    for &(w, _) in &k.reps {
        ranks[omega.rho(w)] += 1;
    }
    let ind = induce_module(omega, &gset_module(h, z))?;
    if ind.module.ranks() != ranks.as_slice() {
        return Ok(Some(format!("κ ranks {ranks:?}, induced ranks {:?}", ind.module.ranks())));
    }
    Ok(None)
}

fn check_invsemi(s: &FiniteInverseSemigroup, max: usize) -> Result<Option<String>> {
    let d = discrete_groupoid(s)?;
    let u = universal_groupoid(s)?;
    if Functor::find_isomorphism(&d, &u.groupoid).is_none() {
        return Ok(Some("discrete and universal groupoids are not isomorphic".into()));
    }
    if omega_s(s)?.isomorphism.is_none() {
        return Ok(Some("composite and displayed Ω_S differ".into()));
    }
    let c = chain_iso_check(s, max)?;
    if !c.holds() {
        return Ok(Some(format!("chain isomorphism check failed: {:?}", c.degrees)));
    }
    let st = stabilizer_decomposition(s, max)?;
    if !st.holds() {
        return Ok(Some(format!(
            "stabilizer sum {:?} vs universal {:?}",
            st.summed, st.universal
        )));
    }
    Ok(None)
}

/// `None` when the instance passes, otherwise a witness.
pub fn check(instance: &Instance) -> Result<Option<String>> {
    match instance {
        Instance::Homotopy {
            groupoid,
            max_degree,
            face_sign_bug,
        } => check_homotopy(&FiniteGroupoid::from_data(groupoid)?, *max_degree, *face_sign_bug),
        Instance::Adjunction {
            groupoid,
            sub_objects,
            sub_arrows,
            n,
            m,
        } => {
            let g = FiniteGroupoid::from_data(groupoid)?;
            let sub = load_sub(&g, sub_objects, sub_arrows)?;
            let n = GModule::from_data(&sub.groupoid, n)?;
            let m = GModule::from_data(&g, m)?;
            match triangle_check(&g, &sub, &n, &m) {
                Ok(()) => Ok(None),
                Err(Error::TriangleIdentity(w)) => Ok(Some(w)),
                Err(e) => Err(e),
            }
        }
        Instance::Shapiro {
            groupoid,
            sub_objects,
            sub_arrows,
            module,
            max_degree,
        } => {
            let g = FiniteGroupoid::from_data(groupoid)?;
            let sub = load_sub(&g, sub_objects, sub_arrows)?;
            let n = GModule::from_data(&sub.groupoid, module)?;
            let r = shapiro_check(&g, &sub, &n, *max_degree)?;
            Ok((!r.holds()).then(|| format!("induced {:?} vs restricted {:?}", r.induced, r.restricted)))
        }
        Instance::Functoriality {
            g,
            h,
            k,
            omega,
            lambda,
            max_degree,
        } => {
            let (g, h, k) = (
                FiniteGroupoid::from_data(g)?,
                FiniteGroupoid::from_data(h)?,
                FiniteGroupoid::from_data(k)?,
            );
            let omega = EtaleCorrespondence::from_data(&g, &h, omega)?;
            let lambda = EtaleCorrespondence::from_data(&h, &k, lambda)?;
            check_functoriality(&omega, &lambda, *max_degree)
        }
        Instance::Kappa {
            source,
            target,
            omega,
            z,
        } => {
            let g = FiniteGroupoid::from_data(source)?;
            let h = FiniteGroupoid::from_data(target)?;
            let omega = EtaleCorrespondence::from_data(&g, &h, omega)?;
            check_kappa(&omega, &GSet::from_data(&h, z)?)
        }
        Instance::Invsemi { semigroup, max_degree } => {
            check_invsemi(&FiniteInverseSemigroup::from_data(semigroup)?, *max_degree)
        }
    }
}

/// Reloads a dumped counterexample and rechecks it.
pub fn replay(json: &str) -> Result<Option<String>> {
    let c: Counterexample = serde_json::from_str(json)?;
    check(&c.instance)
}

fn instances(suite: Suite, opts: &VerifyOptions) -> Result<Vec<Instance>> {
    let cases = opts.cases.unwrap_or(suite.default_cases());
    // Each suite draws from its own stream.
    let seed = opts.seed.wrapping_mul(31).wrapping_add(suite as u64);
    let mut c = Corpus::new(seed, opts.size_bound);
    let bound = opts.size_bound;
    let mut out = Vec::with_capacity(cases);
    match suite {
        Suite::Homotopy => {
            let mut gs = standard_groupoids();
            while gs.len() < cases {
                gs.push(c.groupoid_within(bound.min(12)));
            }
            for g in gs.into_iter().take(cases.max(1)) {
                out.push(Instance::Homotopy {
                    groupoid: g.to_data(),
                    max_degree: 3,
                    face_sign_bug: opts.face_sign_bug,
                });
            }
        }
        Suite::Adjunction => {
            for _ in 0..cases {
                let g = c.groupoid();
                let sub = c.subgroupoid(&g);
                let n = c.module(&sub.groupoid);
                let m = c.module(&g);
                let (sub_objects, sub_arrows) = sub_ids(&g, &sub);
                out.push(Instance::Adjunction {
                    groupoid: g.to_data(),
                    sub_objects,
                    sub_arrows,
                    n: n.to_data("sub")?,
                    m: m.to_data("g")?,
                });
            }
        }
        Suite::Shapiro => {
            for _ in 0..cases {
                let g = c.groupoid_within(bound.min(6));
                let sub = c.subgroupoid(&g);
                let n = c.module(&sub.groupoid);
                let (sub_objects, sub_arrows) = sub_ids(&g, &sub);
                out.push(Instance::Shapiro {
                    groupoid: g.to_data(),
                    sub_objects,
                    sub_arrows,
                    module: n.to_data("sub")?,
                    max_degree: 3,
                });
            }
        }
        Suite::Functoriality => {
            for _ in 0..cases {
                let g = c.groupoid_within(bound.min(6));
                let omega = c.correspondence_within(&g, 8);
                let h = omega.target().clone();
                let lambda = c.correspondence_within(&h, 8);
                let k = lambda.target().clone();
                out.push(Instance::Functoriality {
                    g: g.to_data(),
                    h: h.to_data(),
                    k: k.to_data(),
                    omega: omega.to_data("g", "h"),
                    lambda: lambda.to_data("h", "k"),
                    max_degree: 2,
                });
            }
        }
        Suite::Kappa => {
            for _ in 0..cases {
                let g = c.groupoid();
                let omega = c.correspondence_within(&g, bound.max(1));
                let h = omega.target().clone();
                let z = c.gset(&h);
                out.push(Instance::Kappa {
                    source: g.to_data(),
                    target: h.to_data(),
                    omega: omega.to_data("g", "h"),
                    z: z.to_data(&h, "h"),
                });
            }
        }
        Suite::Invsemi => {
            for _ in 0..cases {
                out.push(Instance::Invsemi {
                    semigroup: c.semigroup().to_data(),
                    max_degree: 2,
                });
            }
        }
    }
    Ok(out)
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport> {
    let cases = instances(suite, opts)?;
    let mut failures = Vec::new();
    for instance in &cases {
        if let Some(detail) = check(instance)? {
            failures.push(Counterexample {
                suite: suite.name().to_string(),
                detail,
                instance: instance.clone(),
            });
        }
    }
    Ok(SuiteReport {
        suite,
        cases: cases.len(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> VerifyOptions {
        VerifyOptions {
            seed,
            size_bound: 12,
            cases: Some(4),
            face_sign_bug: false,
        }
    }

    #[test]
    fn suites_pass_on_small_corpora() {
        for suite in Suite::ALL {
            let r = run_suite(suite, &small(3)).map_err(|e| format!("{suite}: {e}")).unwrap();
            assert!(r.passed(), "{suite}: {:?}", r.failures.first().map(|f| &f.detail));
            assert_eq!(r.cases, 4);
        }
    }

    #[test]
    fn face_sign_bug_is_caught_and_replays() {
        let opts = VerifyOptions {
            face_sign_bug: true,
            ..small(0)
        };
        let r = run_suite(Suite::Homotopy, &opts).unwrap();
        assert!(!r.passed());
        let dump = serde_json::to_string(&r.failures[0]).unwrap();
        assert_eq!(replay(&dump).unwrap(), Some(r.failures[0].detail.clone()));
    }

    #[test]
    fn suite_names_parse() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
