//! Acceptance criteria, one line each. Exits nonzero if any fails.

use std::time::{Duration, Instant};

use ghom::corpus::{standard_groupoids, Corpus};
use ghom::correspondence::{from_action, from_homomorphism, homology_maps, maps_from_lift};
use ghom::gmodule::trivial_module;
use ghom::groupoid::{cyclic_group, pair_groupoid, symmetric_group, trivial_group, FiniteGroupoid, Functor, GSet};
use ghom::homology::{bar_complex, homology, matui_complex};
use ghom::intalg::FGAbelianGroup;
use ghom::invsemi::{chain_iso_check, stabilizer_decomposition, symmetric_inverse_monoid};
use ghom::verify::{check, run_suite, Instance, Suite, VerifyOptions};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fail(msg: impl Into<String>) -> Outcome {
    Err(msg.into())
}

fn cyclic_oracle() -> Outcome {
    let mut worst = Duration::ZERO;
    for m in [2u64, 3, 4] {
        let t = Instant::now();
        let got = homology(&cyclic_group(m as usize), 4).map_err(|e| e.to_string())?;
        let z = FGAbelianGroup::cyclic(m);
        let want = vec![FGAbelianGroup::free(1), z.clone(), FGAbelianGroup::trivial(), z, FGAbelianGroup::trivial()];
        let dt = t.elapsed();
        worst = worst.max(dt);
        if got != want {
            return fail(format!("Z/{m}: got {got:?}"));
        }
        if dt > Duration::from_secs(10) {
            return fail(format!("Z/{m} took {dt:?}"));
        }
    }
    Ok(format!("m = 2, 3, 4; slowest {worst:.2?}"))
}

/// Standard groupoids plus a few random ones.
fn corpus_groupoids(seed: u64, extra: usize, bound: usize) -> Vec<FiniteGroupoid> {
    let mut c = Corpus::new(seed, bound);
    let mut out = standard_groupoids();
    out.extend((0..extra).map(|_| c.groupoid()));
    out
}

fn bar_homotopy() -> Outcome {
    let gs = corpus_groupoids(11, 10, 8);
    for g in &gs {
        let inst = Instance::Homotopy {
            groupoid: g.to_data(),
            max_degree: 3,
            face_sign_bug: false,
        };
        if let Some(d) = check(&inst).map_err(|e| e.to_string())? {
            return fail(format!("{:?}: {d}", g.arrows()));
        }
    }
    Ok(format!("{} groupoids, n <= 3", gs.len()))
}

fn two_paths() -> Outcome {
    let gs = corpus_groupoids(12, 10, 10);
    for g in &gs {
        let bar = bar_complex(g, &trivial_module(g), 4).map_err(|e| e.to_string())?;
        let matui = matui_complex(g, 4).map_err(|e| e.to_string())?;
        if bar != matui {
            return fail(format!("complexes differ for {:?}", g.arrows()));
        }
    }
    Ok(format!("{} groupoids, degrees <= 4", gs.len()))
}

fn suite(s: Suite, min_cases: usize) -> Outcome {
    let r = run_suite(s, &VerifyOptions::default()).map_err(|e| e.to_string())?;
    if r.cases < min_cases {
        return fail(format!("only {} cases", r.cases));
    }
    match r.failures.first() {
        Some(c) => fail(format!("{} of {} failed; first: {}", r.failures.len(), r.cases, c.detail)),
        None => Ok(format!("{} cases", r.cases)),
    }
}

fn sign(s3: &FiniteGroupoid, a: usize) -> usize {
    let p: Vec<u8> = s3.arrow_id(a).bytes().collect();
    let inversions = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
    inversions % 2
}

fn homomorphisms() -> Vec<(FiniteGroupoid, FiniteGroupoid, Functor)> {
    let mut out = Vec::new();
    let t = trivial_group();
    for g in standard_groupoids() {
        out.push((g.clone(), g.clone(), Functor::identity(&g)));
        let collapse = Functor::new(&g, &t, vec![0; g.n_objects()], vec![0; g.n_arrows()]).unwrap();
        out.push((g, t.clone(), collapse));
    }
    for (m, d) in [(4, 2), (6, 3), (6, 2)] {
        let (a, b) = (cyclic_group(m), cyclic_group(d));
        let phi = Functor::new(&a, &b, vec![0], (0..m).map(|i| i % d).collect()).unwrap();
        out.push((a, b, phi));
    }
    let (s3, z2) = (symmetric_group(3), cyclic_group(2));
    let phi = Functor::new(&s3, &z2, vec![0], (0..6).map(|a| sign(&s3, a)).collect()).unwrap();
    out.push((s3, z2, phi));
    let p2 = pair_groupoid(2);
    out.push((pair_groupoid(2), pair_groupoid(2), Functor::new(&p2, &p2, vec![1, 0], (0..4).map(|a| 3 - a).collect()).unwrap()));
    out
}

fn lifts_agree() -> Outcome {
    const N: usize = 3;
    let mut count = 0;
    for (g, h, phi) in homomorphisms() {
        let c = from_homomorphism(&g, &h, &phi).map_err(|e| e.to_string())?;
        let omega = &c.correspondence;
        let lift = c.explicit_lift(N + 1).map_err(|e| e.to_string())?;
        let explicit = maps_from_lift(omega, &trivial_module(&g), &trivial_module(&h), &lift).map_err(|e| e.to_string())?;
        let generic = homology_maps(omega, N).map_err(|e| e.to_string())?;
        if explicit.len() != generic.len() || explicit.iter().zip(&generic).any(|(a, b)| !a.same_map(b)) {
            return fail(format!("homomorphism {:?} -> {:?}", g.arrows(), h.arrows()));
        }
        count += 1;
    }
    let mut corpus = Corpus::new(13, 6);
    let mut actions: Vec<(FiniteGroupoid, GSet)> = standard_groupoids()
        .into_iter()
        .filter(|g| g.n_arrows() <= 6)
        .flat_map(|g| [GSet::objects(&g), GSet::left_regular(&g)].map(|x| (g.clone(), x)))
        .collect();
    for _ in 0..8 {
        let g = corpus.groupoid();
        let x = corpus.gset(&g);
        actions.push((g, x));
    }
    for (g, x) in &actions {
        let c = from_action(g, x).map_err(|e| e.to_string())?;
        let omega = &c.correspondence;
        let (m, n) = (trivial_module(g), trivial_module(omega.target()));
        let lift = c.explicit_lift(N + 1).map_err(|e| e.to_string())?;
        let explicit = maps_from_lift(omega, &m, &n, &lift).map_err(|e| e.to_string())?;
        let generic = homology_maps(omega, N).map_err(|e| e.to_string())?;
        if explicit.len() != generic.len() || explicit.iter().zip(&generic).any(|(a, b)| !a.same_map(b)) {
            return fail(format!("action of {:?} on {:?}", g.arrows(), x.points()));
        }
        count += 1;
    }
    Ok(format!("{count} correspondences, n <= {N}"))
}

fn morita() -> Outcome {
    let t = trivial_group();
    for k in [2, 3, 4] {
        let p = pair_groupoid(k);
        let phi = Functor::new(&p, &t, vec![0; k], vec![0; k * k]).unwrap();
        let c = from_homomorphism(&p, &t, &phi).map_err(|e| e.to_string())?;
        let maps = homology_maps(&c.correspondence, 3).map_err(|e| e.to_string())?;
        if let Some(n) = maps.iter().position(|f| !f.is_isomorphism()) {
            return fail(format!("P{k}: H{n} map is not an isomorphism"));
        }
    }
    Ok("k = 2, 3, 4; n <= 3".into())
}

fn inverse_semigroups() -> Outcome {
    let t = Instant::now();
    let s = symmetric_inverse_monoid(2).map_err(|e| e.to_string())?;
    if s.len() != 7 {
        return fail(format!("monoid has {} elements", s.len()));
    }
    let c = chain_iso_check(&s, 3).map_err(|e| e.to_string())?;
    if !c.degrees.iter().all(|d| d.unimodular()) || c.degrees.len() != 4 {
        return fail(format!("chain map not unimodular: {:?}", c.degrees));
    }
    if !c.holds() {
        return fail("chain isomorphism report does not hold");
    }
    let st = stabilizer_decomposition(&s, 3).map_err(|e| e.to_string())?;
    let z2 = FGAbelianGroup::cyclic(2);
    let want = vec![FGAbelianGroup::free(2), z2.clone(), FGAbelianGroup::trivial(), z2];
    if st.summed != want || st.universal != want {
        return fail(format!("summed {:?}, universal {:?}", st.summed, st.universal));
    }
    let dt = t.elapsed();
    if dt > Duration::from_secs(60) {
        return fail(format!("took {dt:?}"));
    }
    Ok(format!("H = Z^2, Z/2, 0, Z/2 on both sides; {dt:.2?}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("cyclic-group oracle", cyclic_oracle),
        ("bar homotopy identity", bar_homotopy),
        ("bar and Matui complexes coincide", two_paths),
        ("induction-restriction triangle identities", || suite(Suite::Adjunction, 50)),
        ("Shapiro isomorphism", || suite(Suite::Shapiro, 50)),
        ("explicit and solver lifts agree", lifts_agree),
        ("functoriality of induced maps", || suite(Suite::Functoriality, 30)),
        ("pair groupoid collapse is an isomorphism", morita),
        ("symmetric inverse monoid on two letters", inverse_semigroups),
        ("kappa fiber ranks", || suite(Suite::Kappa, 50)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let dt = t.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({detail}) [{dt:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{dt:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
