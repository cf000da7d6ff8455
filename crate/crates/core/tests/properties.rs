mod common;

use common::*;
use cumulant_core::cumulant::{kappa_exec, verify_thm4, verify_thm6};
use cumulant_core::cyclic::{enumerate_cyclic, enumerate_nested, enumerate_nested_indecomposable, nested_sign};
use cumulant_core::die::{thm1_involution, thm4_involution, thm6_involution};
use cumulant_core::oracle::{DistributionOracle, SymbolicOracle};
use cumulant_core::partition::{enumerate_partitions, induced_partition, refines, vars};
use cumulant_core::{kappa, ConditionalOracle, Exec, GridShape, Partition, Rational, VarSelection};
use num::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn partitions(n: u32) -> Vec<Partition> {
    enumerate_partitions(&vars(n)).unwrap().collect()
}

fn cumulant_of(d: &cumulant_core::FiniteDistribution, names: &[&str]) -> Rational {
    let sel = VarSelection::new(d, names).unwrap();
    kappa(&sel.ground(), &DistributionOracle::new(d, &sel)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cumulant_is_multilinear(seed in any::<u64>(), a in -3i64..=3, b in -3i64..=3, tail in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_distribution(&mut rng, &["X", "Z", "W"]);
        let (ra, rb) = (rat(a, 1), rat(b, 1));
        let d = d.with_column("L", |v| &ra * &v[0] + &rb * &v[1]).unwrap();
        let rest = &["W", "X", "W"][..tail];
        let with = |head: &'static str| [&[head][..], rest].concat();
        let lhs = cumulant_of(&d, &with("L"));
        let rhs = rat(a, 1) * cumulant_of(&d, &with("X")) + rat(b, 1) * cumulant_of(&d, &with("Z"));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cumulant_is_symmetric_and_shift_invariant(seed in any::<u64>(), c in -4i64..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_distribution(&mut rng, &["X", "Z", "W"]);
        let cc = rat(c, 1);
        let d = d.with_column("S", |v| &v[0] + &cc).unwrap();
        let base = cumulant_of(&d, &["X", "Z", "W"]);
        prop_assert_eq!(&cumulant_of(&d, &["W", "X", "Z"]), &base);
        prop_assert_eq!(&cumulant_of(&d, &["S", "Z", "W"]), &base);
        prop_assert_eq!(cumulant_of(&d, &["S"]), cumulant_of(&d, &["X"]) + rat(c, 1));
    }

    #[test]
    fn tower_property_holds_for_every_block(seed in any::<u64>(), ys in 1i64..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_conditioned(&mut rng, &["A", "B", "C"], ys);
        let cond = ConditionalOracle::new(d.clone(), "Y").unwrap();
        for k in 1..=3 {
            for cols in multisets(&["0", "1", "2", "3"], k) {
                let cols: Vec<usize> = cols.iter().map(|c| c.parse().unwrap()).collect();
                let mixed = cond.y_support().iter().fold(Rational::zero(), |acc, (y, p)| {
                    acc + p * cond.conditional_expectation_of(&cols, y).unwrap()
                });
                prop_assert_eq!(mixed, d.expectation_of(&cols));
            }
        }
    }

    #[test]
    fn refinement_is_a_partial_order(i in 0usize..52, j in 0usize..52, k in 0usize..52) {
        let all = partitions(5);
        let (p, q, r) = (&all[i], &all[j], &all[k]);
        prop_assert!(refines(p, p).unwrap());
        if refines(p, q).unwrap() && refines(q, p).unwrap() {
            prop_assert_eq!(p, q);
        }
        if refines(p, q).unwrap() && refines(q, r).unwrap() {
            prop_assert!(refines(p, r).unwrap());
        }
        let singletons = Partition::singletons(&vars(5)).unwrap();
        let whole = Partition::single(&vars(5)).unwrap();
        prop_assert!(refines(&singletons, p).unwrap() && refines(p, &whole).unwrap());
    }

    #[test]
    fn induced_partition_is_monotone(i in 0usize..15, j in 0usize..15, shape_index in 0usize..4) {
        let shape: GridShape = ["1,1,1,1", "2,1,1,1", "1,2,1,2", "3,1,2,1"][shape_index].parse().unwrap();
        let all = partitions(4);
        let (a, b) = (&all[i], &all[j]);
        let (sa, sb) = (induced_partition(a, &shape).unwrap(), induced_partition(b, &shape).unwrap());
        prop_assert_eq!(refines(a, b).unwrap(), refines(&sa, &sb).unwrap());
    }

    #[test]
    fn cyclic_merge_split_is_an_involution(n in 2u32..=6, pick in any::<prop::sample::Index>()) {
        let objects: Vec<_> = enumerate_cyclic(&vars(n)).unwrap().collect();
        let sigma = pick.get(&objects);
        let image = thm1_involution(sigma).unwrap();
        prop_assert_eq!(image.len().abs_diff(sigma.len()), 1);
        prop_assert_eq!(&thm1_involution(&image).unwrap(), sigma);
    }

    #[test]
    fn nested_merge_split_keeps_inner_blocks(n in 1u32..=5, pick in any::<prop::sample::Index>()) {
        let objects: Vec<_> = enumerate_nested(&vars(n)).unwrap().collect();
        let rho = pick.get(&objects);
        match thm4_involution(rho) {
            None => prop_assert_eq!(rho.inner_count(), 1),
            Some(image) => {
                prop_assert_eq!(image.inner_blocks(), rho.inner_blocks());
                prop_assert_eq!(nested_sign(&image), -nested_sign(rho));
                prop_assert_eq!(&thm4_involution(&image).unwrap(), rho);
            }
        }
    }

    #[test]
    fn grid_involution_stays_indecomposable(shape_index in 0usize..6, pick in any::<prop::sample::Index>()) {
        let shape: GridShape = ["2,2", "3,2", "2,1,2", "1,3,1", "2,2,1", "1,1,1,2"][shape_index].parse().unwrap();
        let objects: Vec<_> = enumerate_nested_indecomposable(&shape).unwrap().collect();
        let rho = pick.get(&objects);
        if let Some(image) = thm6_involution(rho, &shape) {
            prop_assert!(objects.contains(&image));
            prop_assert_eq!(&thm6_involution(&image, &shape).unwrap(), rho);
        }
    }
}

#[test]
fn sequential_and_parallel_agree() {
    for n in 1..=5 {
        assert_eq!(verify_thm4(n, Exec::Sequential).unwrap().right, verify_thm4(n, Exec::Parallel).unwrap().right);
        let a = kappa_exec(&vars(n), &SymbolicOracle, Exec::Sequential).unwrap();
        assert_eq!(a, kappa_exec(&vars(n), &SymbolicOracle, Exec::Parallel).unwrap());
    }
    let shape: GridShape = "2,2".parse().unwrap();
    assert_eq!(verify_thm6(&shape, Exec::Sequential).unwrap().left, verify_thm6(&shape, Exec::Parallel).unwrap().left);
}
