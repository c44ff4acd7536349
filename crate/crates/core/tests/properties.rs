//! Randomized invariants across modules. Instances come from seeded generators so a
//! failing case shrinks to a seed.

use matkern::a2sat::{is_satisfiable_2sat, maximum_matching, reduce_vc_above_lp, vc_lp_doubled};
use matkern::exactfield::{FMatrix, Field};
use matkern::graphcut::{bypass_vertex, reachable_after};
use matkern::matroid::RepresentedMatroid;
use matkern::mwc::{half_integral_mwc_lp_exhaustive, half_integral_mwc_lp_simplex};
use matkern::oracle::{brute_dpc, brute_min_vertex_cover, brute_multiway_cut, truth_table_satisfiable, OracleBudget};
use matkern::paircut::solve_dpc;
use matkern::{gen, io};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_files_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(0..9);
        let d = gen::random_digraph(&mut r, n, 0.3);
        let back = io::parse_digraph(&io::write_digraph(&d)).unwrap();
        prop_assert_eq!(back.arcs().collect::<Vec<_>>(), d.arcs().collect::<Vec<_>>());
        let g = gen::random_graph(&mut r, n, 0.4);
        let back = io::parse_undirected(&io::write_graph(&g)).unwrap();
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn cnf_files_round_trip(seed in any::<u64>()) {
        let f = gen::random_cnf2(&mut rng(seed), 8, 12);
        prop_assert_eq!(io::parse_cnf2(&io::write_cnf2(&f)).unwrap(), f);
    }

    #[test]
    fn two_sat_assignments_satisfy_and_agree_with_truth_tables(seed in any::<u64>()) {
        let f = gen::random_cnf2(&mut rng(seed), 7, 12);
        match is_satisfiable_2sat(&f) {
            Some(a) => {
                for c in &f.clauses {
                    prop_assert!(c.iter().any(|l| a[l.var] != l.neg), "clause {:?} unsatisfied", c);
                }
            }
            None => prop_assert!(!truth_table_satisfiable(&f, &[])),
        }
    }

    #[test]
    fn pair_cut_solutions_are_valid_and_complete(seed in any::<u64>()) {
        let inst = gen::random_dpc(&mut rng(seed), 9, 3);
        let out = solve_dpc(&inst);
        let brute = brute_dpc(&inst.graph, inst.source, &inst.tuples, inst.k, &OracleBudget::default()).unwrap();
        prop_assert_eq!(out.solution.is_some(), brute.is_some());
        if let Some(x) = out.solution {
            prop_assert!(x.len() <= inst.k && inst.is_solution(&x));
        }
        prop_assert!(out.leaves <= 1 << inst.k);
    }

    #[test]
    fn gammoid_sources_are_a_basis_and_independence_is_hereditary(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..9);
        let d = gen::random_digraph(&mut r, n, 0.3);
        let count = r.gen_range(1..=3);
        let s = gen::random_subset(&mut r, n, count);
        let m = RepresentedMatroid::gammoid(Field::mersenne61(), &d, &s, &mut r).unwrap();
        prop_assert!(m.is_independent_ids(&s));
        prop_assert_eq!(m.rank(), s.len());
        let count = r.gen_range(0..=4);
        let x = gen::random_subset(&mut r, n, count);
        if m.is_independent_ids(&x) {
            for i in 0..x.len() {
                let mut y = x.clone();
                y.remove(i);
                prop_assert!(m.is_independent_ids(&y));
            }
        }
    }

    #[test]
    fn matrix_rank_is_transpose_invariant(rows in prop::collection::vec(prop::collection::vec(-3i64..4, 5), 1..6)) {
        let a = FMatrix::from_rows(Field::mersenne61(), &rows).unwrap();
        prop_assert_eq!(a.rank(), a.transpose().rank());
        prop_assert!(a.rank() <= a.rows().min(a.cols()));
    }

    #[test]
    fn bypass_keeps_reachability_among_the_rest(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..9);
        let d = gen::random_digraph(&mut r, n, 0.3);
        let v = r.gen_range(1..n);
        let b = bypass_vertex(&d, v);
        let before = reachable_after(&d, &[0], &[]);
        let after = reachable_after(&b, &[0], &[]);
        for u in 0..n {
            if u == v {
                continue;
            }
            let id = b.id(d.label(u)).unwrap();
            prop_assert_eq!(before[u], after[id]);
        }
    }

    #[test]
    fn multiway_lp_routes_agree_and_bracket_the_optimum(seed in any::<u64>()) {
        let inst = gen::random_mwc(&mut rng(seed), 9, 3, 3, false);
        let a = half_integral_mwc_lp_exhaustive(&inst.graph, &inst.terminals).unwrap();
        let b = half_integral_mwc_lp_simplex(&inst.graph, &inst.terminals).unwrap();
        prop_assert_eq!(a.as_ref().map(|l| l.doubled_objective), b.map(|l| l.doubled_objective));
        if let Some(lp) = a {
            let parts: Vec<Vec<usize>> = inst.terminals.iter().map(|&t| vec![t]).collect();
            let budget = OracleBudget { max_k: 9, ..OracleBudget::default() };
            let opt = (0..=inst.graph.n())
                .find(|&k| brute_multiway_cut(&inst.graph, &parts, k, false, &budget).unwrap().is_some())
                .unwrap();
            prop_assert!(lp.doubled_objective <= 2 * opt);
            prop_assert!(opt <= lp.doubled_objective);
        }
    }

    #[test]
    fn matching_lp_and_cover_are_ordered(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..11);
        let g = gen::random_graph(&mut r, n, 0.35);
        let m = maximum_matching(&g).len();
        let lp = vc_lp_doubled(&g);
        let vc = brute_min_vertex_cover(&g).unwrap();
        prop_assert!(2 * m <= lp && lp <= 2 * vc && vc <= 2 * m);
        let red = reduce_vc_above_lp(&g, r.gen_range(0..3));
        if !red.dummy {
            prop_assert_eq!(red.matching, m);
        }
    }
}
