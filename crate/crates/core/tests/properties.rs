use num_bigint::BigInt;
use proptest::prelude::*;

use ghom::corpus::{union_gset, Corpus};
use ghom::correspondence::{delta, homology_maps, induce_module, induce_module_map};
use ghom::gmodule::{coinvariants, gset_module, pushforward, tensor_kappa, trivial_module, GModuleMap};
use ghom::groupoid::{boundary_matrix, cyclic_group, homotopy_matrix, nerve, pair_groupoid, GSet, RightGSet, Variant};
use ghom::homology::{bar_complex, homology, matui_complex};
use ghom::intalg::{
    homology_of_pair, induced_subquotient_map, smith_normal_form, solve_integer, FGAbelianGroup, IntMatrix,
    SubquotientMap,
};
use ghom::verify::{run_suite, Suite, VerifyOptions};

fn matrix(rows: usize, cols: usize, range: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(prop::collection::vec(-range..=range, cols), rows)
        .prop_map(move |r| if rows == 0 { IntMatrix::zeros(0, cols) } else { IntMatrix::from_rows(&r) })
}

fn any_matrix() -> impl Strategy<Value = IntMatrix> {
    (0usize..6, 0usize..6).prop_flat_map(|(r, c)| matrix(r, c, 9))
}

fn hcat(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let mut cols = a.columns().to_vec();
    cols.extend(b.columns().iter().cloned());
    IntMatrix::from_columns(a.rows(), cols)
}

fn is_diagonal_chain(s: &IntMatrix) -> bool {
    let off_diagonal_zero = s.entries().all(|(i, j, _)| i == j);
    let d: Vec<BigInt> = (0..s.rows().min(s.cols())).map(|i| s.get(i, i)).collect();
    let nonneg = d.iter().all(|x| *x >= BigInt::from(0));
    let divides = d.windows(2).all(|w| {
        if w[0] == BigInt::from(0) {
            w[1] == BigInt::from(0)
        } else {
            &w[1] % &w[0] == BigInt::from(0)
        }
    });
    off_diagonal_zero && nonneg && divides
}

fn quotient(d: &IntMatrix) -> ghom::intalg::SubquotientGroup {
    homology_of_pair(&IntMatrix::zeros(0, d.rows()), d).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_is_a_unimodular_factorization(a in any_matrix()) {
        let snf = smith_normal_form(&a);
        let usv = snf.u.checked_mul(&a).unwrap().checked_mul(&snf.v).unwrap();
        prop_assert_eq!(&usv, &snf.s);
        prop_assert!(is_diagonal_chain(&snf.s));
        prop_assert!(snf.u.is_unimodular());
        prop_assert!(snf.v.is_unimodular());
    }

    #[test]
    fn solver_matches_brute_force(a in matrix(4, 4, 3), x0 in prop::collection::vec(-2i64..=2, 4), shift in prop::collection::vec(0i64..=1, 4)) {
        let x0: Vec<BigInt> = x0.into_iter().map(BigInt::from).collect();
        let mut b = a.apply_dense(&x0).unwrap();
        for (bi, s) in b.iter_mut().zip(shift) {
            *bi += s;
        }
        let found = solve_integer(&a, &b).unwrap();
        if let Some(x) = &found {
            prop_assert_eq!(&a.apply_dense(x).unwrap(), &b);
        }
        let mut brute = false;
        'outer: for code in 0..7usize.pow(4) {
            let x: Vec<BigInt> = (0..4).map(|k| BigInt::from((code / 7usize.pow(k)) % 7) - 3).collect();
            if a.apply_dense(&x).unwrap() == b {
                brute = true;
                break 'outer;
            }
        }
        if brute {
            prop_assert!(found.is_some());
        }
    }

    #[test]
    fn exact_pairs_have_trivial_homology(b in any_matrix()) {
        let cycles = homology_of_pair(&b, &IntMatrix::zeros(b.cols(), 0)).unwrap().cycle_basis;
        let h = homology_of_pair(&b, &cycles).unwrap();
        prop_assert!(h.presentation.is_trivial());
    }

    #[test]
    fn induced_maps_compose(
        d1 in matrix(3, 2, 4),
        f in matrix(3, 3, 4),
        r2 in matrix(3, 1, 4),
        g in matrix(2, 3, 4),
        r3 in matrix(2, 1, 4),
    ) {
        let d2 = hcat(&f.checked_mul(&d1).unwrap(), &r2);
        let d3 = hcat(&g.checked_mul(&d2).unwrap(), &r3);
        let (q1, q2, q3) = (quotient(&d1), quotient(&d2), quotient(&d3));
        let mf = induced_subquotient_map(&f, &q1, &q2).unwrap();
        let mg = induced_subquotient_map(&g, &q2, &q3).unwrap();
        let gf = induced_subquotient_map(&g.checked_mul(&f).unwrap(), &q1, &q3).unwrap();
        prop_assert!(mf.then(&mg).unwrap().same_map(&gf));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn boundaries_square_to_zero(seed in any::<u64>()) {
        let g = Corpus::new(seed, 6).groupoid();
        for variant in [Variant::Resolution, Variant::Matui] {
            for n in 1..=4 {
                let d = boundary_matrix(&g, n, variant).unwrap();
                let dd = boundary_matrix(&g, n + 1, variant).unwrap();
                prop_assert!(d.checked_mul(&dd).unwrap().is_zero(), "{:?} n={}", variant, n);
            }
        }
    }

    #[test]
    fn contracting_homotopy(seed in any::<u64>()) {
        let g = Corpus::new(seed, 8).groupoid();
        for n in 0..=3 {
            let d_next = boundary_matrix(&g, n + 1, Variant::Resolution).unwrap();
            let h_next = homotopy_matrix(&g, n + 1);
            let d = boundary_matrix(&g, n, Variant::Resolution).unwrap();
            let sum = d_next
                .checked_mul(&h_next)
                .unwrap()
                .checked_add(&homotopy_matrix(&g, n).checked_mul(&d).unwrap())
                .unwrap();
            prop_assert_eq!(sum, IntMatrix::identity(nerve(&g, n + 1).len()), "n = {}", n);
        }
    }

    #[test]
    fn bar_and_matui_agree(seed in any::<u64>()) {
        let g = Corpus::new(seed, 10).groupoid();
        prop_assert_eq!(bar_complex(&g, &trivial_module(&g), 3).unwrap(), matui_complex(&g, 3).unwrap());
    }

    #[test]
    fn homology_ignores_labels(seed in any::<u64>()) {
        let mut c = Corpus::new(seed, 10);
        let g = c.groupoid();
        let mut objs: Vec<usize> = (0..g.n_objects()).collect();
        let mut arrs: Vec<usize> = (0..g.n_arrows()).collect();
        use rand::seq::SliceRandom;
        objs.shuffle(c.rng());
        arrs.shuffle(c.rng());
        let r = g.relabeled(&objs, &arrs).unwrap();
        prop_assert_eq!(homology(&g, 3).unwrap(), homology(&r, 3).unwrap());
    }

    #[test]
    fn coinvariants_of_trivial_module_count_orbits(seed in any::<u64>()) {
        let g = Corpus::new(seed, 16).groupoid();
        let c = coinvariants(&trivial_module(&g)).unwrap();
        prop_assert_eq!(c.group, FGAbelianGroup::free(g.orbits().len()));
    }

    #[test]
    fn kappa_reproduces_induced_ranks(seed in any::<u64>()) {
        let mut c = Corpus::new(seed, 12);
        let g = c.groupoid();
        let x = c.gset(&g);
        let k = tensor_kappa(&g, &RightGSet::right_regular(&g), &x);
        let mut ranks = vec![0; g.n_objects()];
        for &(a, _) in &k.reps {
            ranks[g.range(a)] += 1;
        }
        let id = ghom::correspondence::EtaleCorrespondence::identity(&g);
        let ind = induce_module(&id, &gset_module(&g, &x)).unwrap();
        prop_assert_eq!(ind.module.ranks(), ranks.as_slice());
    }

    #[test]
    fn delta_is_natural(seed in any::<u64>()) {
        let mut c = Corpus::new(seed, 10);
        let g = c.groupoid();
        let omega = c.correspondence_within(&g, 16);
        let h = omega.target().clone();
        let x = c.gset(&h);
        // Fold X ⊔ X -> X, and X -> H^0 along the anchor.
        let xx = union_gset(&h, &x, &x);
        let fold: Vec<usize> = (0..xx.len()).map(|p| p % x.len().max(1)).collect();
        let anchor: Vec<usize> = (0..x.len()).map(|p| x.anchor(p)).collect();
        let maps: Vec<GModuleMap> = vec![
            pushforward(&h, &xx, &x, &fold).unwrap(),
            pushforward(&h, &x, &GSet::objects(&h), &anchor).unwrap(),
        ];
        for f in &maps {
            let ind_f = induce_module_map(&omega, f).unwrap();
            let coinv = |m: &GModuleMap| -> SubquotientMap {
                let (s, t) = (coinvariants(&m.source).unwrap(), coinvariants(&m.target).unwrap());
                induced_subquotient_map(&m.total_matrix(), &s.quotient, &t.quotient).unwrap()
            };
            let left = coinv(&ind_f).then(&delta(&omega, &f.target).unwrap()).unwrap();
            let right = delta(&omega, &f.source).unwrap().then(&coinv(f)).unwrap();
            prop_assert!(left.same_map(&right));
        }
    }

    #[test]
    fn identity_correspondence_induces_identity(seed in any::<u64>()) {
        let g = Corpus::new(seed, 8).groupoid();
        let id = ghom::correspondence::EtaleCorrespondence::identity(&g);
        for f in homology_maps(&id, 2).unwrap() {
            prop_assert!(f.is_identity());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn suites_pass_for_any_seed(seed in any::<u64>()) {
        for suite in Suite::ALL {
            let opts = VerifyOptions { seed, size_bound: 12, cases: Some(3), ..VerifyOptions::default() };
            let r = run_suite(suite, &opts).unwrap();
            prop_assert!(r.passed(), "{}: {:?}", suite, r.failures.first());
        }
    }
}

#[test]
fn nerve_sizes() {
    for m in 1..=4 {
        let g = cyclic_group(m);
        for n in 0..=4 {
            assert_eq!(nerve(&g, n).len(), m.pow(n as u32));
        }
    }
    for k in 1..=4 {
        let p = pair_groupoid(k);
        for n in 0..=4 {
            assert_eq!(nerve(&p, n).len(), k * k.pow(n as u32));
        }
    }
}
