mod common;

use std::collections::BTreeSet;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use common::{shaped_instance, ShapeCase};
use linext::counting::{count_le, le_bruteforce, le_dp, le_parallel, le_series, Count};
use linext::enumeration::{
    enumerate_backtracking, enumerate_modular, enumerate_pivots, is_linear_extension, pivots_of,
};
use linext::instances::random_poset;
use linext::modular::{
    coarsen_by_inconsistency, find_inconsistent_pairs, find_modular_partition, is_graph_partition,
    is_module, is_poset_partition, reorient, CoarsenOutcome, JoinedStructure,
};
use linext::netbuild::{assemble_network, verify_network, ModuleSpec, NetworkSpec, SearchLimits};
use linext::poset::{Poset, UndirectedGraph};
use linext::tournament::{
    all_reverse_pairs, count_transitive_subtournaments, hamiltonian_permutation, inversion_set,
    poset_from_reverse_edges, reverse_edge_digraph, tournament_from_permutation, verify_three_way,
    Digraph, EquivLimits, ReverseEdgeSet,
};

fn poset_strategy(max_n: usize) -> impl Strategy<Value = Poset> {
    (0..=max_n, 0.0f64..1.0, any::<u64>())
        .prop_map(|(n, density, seed)| random_poset(n, density, &mut StdRng::seed_from_u64(seed)))
}

fn shaped_strategy(max_n: usize) -> impl Strategy<Value = (Poset, Vec<Vec<usize>>)> {
    (0..ShapeCase::ALL.len(), any::<u64>()).prop_map(move |(i, seed)| {
        shaped_instance(ShapeCase::ALL[i], 1, max_n, &mut StdRng::seed_from_u64(seed))
    })
}

fn reverse_set_strategy(max_n: usize) -> impl Strategy<Value = ReverseEdgeSet> {
    (1..=max_n, any::<u64>()).prop_map(|(n, bits)| {
        let pairs: Vec<(usize, usize)> = all_reverse_pairs(n)
            .into_iter()
            .enumerate()
            .filter(|(k, _)| bits >> k & 1 == 1)
            .map(|(_, p)| p)
            .collect();
        ReverseEdgeSet::new(n, &pairs).unwrap()
    })
}

fn permutation_strategy(max_n: usize) -> impl Strategy<Value = Vec<usize>> {
    (0..=max_n).prop_flat_map(|n| Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn oracles_agree(p in poset_strategy(8)) {
        prop_assert_eq!(le_dp(&p, 20).unwrap(), le_bruteforce(&p, 8).unwrap());
    }

    #[test]
    fn dispatcher_matches_dp(p in poset_strategy(13)) {
        prop_assert_eq!(count_le(&p).unwrap(), le_dp(&p, 20).unwrap());
    }

    #[test]
    fn dual_and_relabel_keep_the_count(p in poset_strategy(10), seed in any::<u64>()) {
        let n = p.n();
        let expected = le_dp(&p, 20).unwrap();
        prop_assert_eq!(le_dp(&p.dual(), 20).unwrap(), expected.clone());
        let mut perm: Vec<usize> = (0..n).collect();
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut StdRng::seed_from_u64(seed));
        prop_assert_eq!(le_dp(&p.relabel(&perm), 20).unwrap(), expected);
    }

    #[test]
    fn graphs_are_complementary(p in poset_strategy(10)) {
        let cg = p.comparability_graph();
        prop_assert_eq!(p.incomparability_graph().complement(), cg.clone());
        prop_assert_eq!(cg.complement().complement(), cg);
        let covers = p.hasse_covers();
        prop_assert_eq!(Poset::from_relations(p.n(), &covers).unwrap(), p);
    }

    #[test]
    fn dropping_a_cover_never_decreases_the_count(p in poset_strategy(10), pick in any::<usize>()) {
        let covers = p.hasse_covers();
        prop_assume!(!covers.is_empty());
        let dropped = covers[pick % covers.len()];
        let rest: Vec<(usize, usize)> = p.relations().filter(|&r| r != dropped).collect();
        let q = Poset::from_relations(p.n(), &rest).unwrap();
        prop_assert_eq!(q.relation_count() + 1, p.relation_count());
        prop_assert!(le_dp(&q, 20).unwrap() >= le_dp(&p, 20).unwrap());
    }

    #[test]
    fn sums_match_the_oracle(a in poset_strategy(5), b in poset_strategy(5)) {
        let counts = [le_dp(&a, 20).unwrap(), le_dp(&b, 20).unwrap()];
        let sizes = [a.n(), b.n()];
        prop_assert_eq!(
            le_series(&counts, &sizes).unwrap(),
            le_dp(&Poset::ordinal_sum(&a, &b), 20).unwrap()
        );
        prop_assert_eq!(
            le_parallel(&counts, &sizes).unwrap(),
            le_dp(&Poset::disjoint_sum(&a, &b), 20).unwrap()
        );
    }

    #[test]
    fn reorient_keeps_incomparability((p, blocks) in shaped_strategy(10)) {
        let q = reorient(&p, &blocks).unwrap();
        prop_assert_eq!(q.incomparability_graph(), p.incomparability_graph());
        prop_assert!(is_poset_partition(&q, &blocks).unwrap());
        prop_assert_eq!(le_dp(&q, 20).unwrap(), le_dp(&p, 20).unwrap());
    }

    #[test]
    fn inconsistency_characterises_poset_partitions((p, blocks) in shaped_strategy(10)) {
        prop_assert!(is_graph_partition(&p.comparability_graph(), &blocks).unwrap());
        let pairs = find_inconsistent_pairs(&p, &blocks).unwrap();
        prop_assert_eq!(pairs.is_empty(), is_poset_partition(&p, &blocks).unwrap());
        let c = coarsen_by_inconsistency(&p, &blocks).unwrap();
        prop_assert!(is_poset_partition(&p, c.partition.blocks()).unwrap());
        match c.outcome {
            CoarsenOutcome::PosetPartition => prop_assert!(c.partition.len() > 1 || blocks.len() <= 1),
            CoarsenOutcome::DominatingVertex => prop_assert_eq!(c.partition.len(), 1),
        }
        if pairs.is_empty() {
            prop_assert_eq!(c.partition.blocks(), blocks.as_slice());
        }
    }

    #[test]
    fn found_partitions_are_modular(p in poset_strategy(10)) {
        let ig = p.incomparability_graph();
        if let Some(m) = find_modular_partition(&ig, 2000) {
            prop_assert!(m.len() > 1);
            for b in m.blocks() {
                prop_assert!(is_module(&ig, b).unwrap());
            }
        }
    }

    #[test]
    fn enumerators_agree((p, blocks) in shaped_strategy(7)) {
        let q = reorient(&p, &blocks).unwrap();
        let reference: Vec<Vec<usize>> = enumerate_backtracking(&q, 7).unwrap().collect();
        let as_set: BTreeSet<Vec<usize>> = reference.iter().cloned().collect();
        prop_assert_eq!(as_set.len(), reference.len());
        prop_assert_eq!(BigUint::from(reference.len()), le_dp(&q, 20).unwrap());
        for ext in &reference {
            prop_assert!(is_linear_extension(&q, ext).unwrap());
        }
        let modular: Vec<Vec<usize>> = enumerate_modular(&q, &blocks).unwrap().collect();
        prop_assert_eq!(modular.len(), reference.len());
        prop_assert_eq!(modular.into_iter().collect::<BTreeSet<_>>(), as_set.clone());

        if let Ok(js) = JoinedStructure::from_partition(&q, &blocks) {
            let oriented = reorient(&q, &js.blocks()).unwrap();
            let mut seen = BTreeSet::new();
            for (pivots, ext) in enumerate_pivots(&oriented, &js).unwrap().tagged() {
                // The pivot tuple is recoverable from the extension.
                prop_assert_eq!(pivots_of(&js, &ext), pivots);
                prop_assert!(is_linear_extension(&oriented, &ext).unwrap());
                prop_assert!(seen.insert(ext));
            }
            prop_assert_eq!(BigUint::from(seen.len()), le_dp(&p, 20).unwrap());
        }
    }

    #[test]
    fn three_views_agree(r in reverse_set_strategy(6)) {
        verify_three_way(&r, EquivLimits::default()).unwrap();
    }

    #[test]
    fn more_reverse_arcs_never_hurt(r in reverse_set_strategy(6), extra in any::<u64>()) {
        let mut pairs: Vec<(usize, usize)> = r.pairs().collect();
        for (k, p) in all_reverse_pairs(r.n()).into_iter().enumerate() {
            if extra >> k & 1 == 1 && !pairs.contains(&p) {
                pairs.push(p);
            }
        }
        let bigger = ReverseEdgeSet::new(r.n(), &pairs).unwrap();
        prop_assert!(r.is_subset(&bigger));
        let small = count_transitive_subtournaments(&reverse_edge_digraph(&r), 24).unwrap();
        let large = count_transitive_subtournaments(&reverse_edge_digraph(&bigger), 24).unwrap();
        prop_assert!(small <= large);
        let lp = poset_from_reverse_edges(&bigger);
        prop_assert!(poset_from_reverse_edges(&r).relations().collect::<BTreeSet<_>>()
            .is_superset(&lp.relations().collect()));
    }

    #[test]
    fn tournaments_and_permutations_correspond(perm in permutation_strategy(8)) {
        let t = tournament_from_permutation(&perm).unwrap();
        prop_assert!(t.is_tournament() && t.is_acyclic());
        prop_assert_eq!(hamiltonian_permutation(&t).unwrap(), perm.clone());
        // The reversed arcs of the tournament are exactly the inversions.
        let reversed: Vec<(usize, usize)> = t.arcs().filter(|&(a, b)| a > b).collect();
        let mut reversed = reversed;
        reversed.sort_unstable();
        prop_assert_eq!(reversed, inversion_set(&perm).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn assembled_networks_reach_their_targets(
        sizes in prop::collection::vec(1usize..=4, 1..=4),
        seed in any::<u64>(),
    ) {
        // Targets are counts of random reverse sets, hence achievable.
        let mut rng = StdRng::seed_from_u64(seed);
        let mut targets: Vec<Count> = Vec::new();
        for &m in &sizes {
            let pairs: Vec<(usize, usize)> = all_reverse_pairs(m)
                .into_iter()
                .filter(|_| rand::Rng::gen_bool(&mut rng, 0.5))
                .collect();
            let r = ReverseEdgeSet::new(m, &pairs).unwrap();
            targets.push(le_dp(&poset_from_reverse_edges(&r), 20).unwrap());
        }
        let k = sizes.len();
        let arcs: Vec<(usize, usize)> = (0..k)
            .flat_map(|a| (0..k).map(move |b| (a, b)))
            .filter(|&(a, b)| a < b && rand::Rng::gen_bool(&mut rng, 0.5))
            .collect();
        let modules = sizes
            .iter()
            .zip(&targets)
            .map(|(&size, t)| ModuleSpec::Target { size, target: t.clone() })
            .collect();
        let spec = NetworkSpec::new(Digraph::new(k, &arcs).unwrap(), modules).unwrap();
        let net = assemble_network(&spec, SearchLimits::default()).unwrap();
        for b in &net.blocks {
            prop_assert!(net.digraph.is_module(b));
        }
        prop_assert_eq!(verify_network(&net.digraph, &net.blocks).unwrap(), targets);
    }
}

#[test]
fn acyclic_tournaments_are_transitive() {
    for n in 0..=4usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let mut acyclic = 0;
        for mask in 0u32..(1 << pairs.len()) {
            let arcs: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .map(|(k, &(a, b))| if mask >> k & 1 == 1 { (b, a) } else { (a, b) })
                .collect();
            let t = Digraph::new(n, &arcs).unwrap();
            assert!(t.is_tournament());
            assert_eq!(t.is_acyclic(), t.is_transitive());
            if t.is_acyclic() {
                acyclic += 1;
            }
        }
        // One acyclic tournament per ordering of the vertices.
        assert_eq!(acyclic, (1..=n).product::<usize>());
    }
}

#[test]
fn complete_graph_modules() {
    let k4 = UndirectedGraph::complete(4);
    let m = find_modular_partition(&k4, 2000).unwrap();
    assert!(m.len() > 1);
    assert!(m.blocks().iter().all(|b| is_module(&k4, b).unwrap()));
}
