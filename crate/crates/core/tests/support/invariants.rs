//! Property checks over random graphs and data. Each returns the shrunk
//! counterexample on failure.

use netcorr::inference::{conditional_permutation_local, configuration_null, double_edge_swap, permutation_null};
use netcorr::stats::{global_moran, lee_l, local_moran, moran_scatter};
use netcorr::{Error, Graph, NodeData, NullResult, NullSpec, WeightKind, WeightMatrix};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

/// A random connected graph: a random tree plus extra edges.
fn connected_graph(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n)
        .prop_flat_map(|n| {
            let parents = (1..n).map(|i| 0..i).collect::<Vec<_>>();
            let extras = proptest::collection::vec(any::<bool>(), n * (n - 1) / 2);
            (Just(n), parents, extras, 0.0f64..0.6)
        })
        .prop_map(|(n, parents, extras, density)| {
            let mut edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, &p)| (i + 1, p)).collect();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    // Use the first `density` fraction of the coin flips as edges.
                    if extras[k] && (k as f64) < density * extras.len() as f64 * 2.0 {
                        edges.push((i, j));
                    }
                    k += 1;
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
}

fn graph_and_data() -> impl Strategy<Value = (Graph, Vec<f64>, Vec<f64>)> {
    connected_graph(3, 12).prop_flat_map(|g| {
        let n = g.n_nodes();
        (
            Just(g),
            proptest::collection::vec(-10.0f64..10.0, n),
            proptest::collection::vec(-10.0f64..10.0, n),
        )
    })
}

fn spread(v: &[f64]) -> f64 {
    let (lo, hi) = v
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    hi - lo
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn same(a: &NullResult, b: &NullResult) -> bool {
    a.p_value.to_bits() == b.p_value.to_bits()
        && a.replicate_values.len() == b.replicate_values.len()
        && a.replicate_values
            .iter()
            .zip(&b.replicate_values)
            .all(|(x, y)| x.to_bits() == y.to_bits())
}

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

type Outcome = Result<(), String>;

fn finish<T: std::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<T>>) -> Outcome {
    r.map_err(|e| e.to_string())
}

pub fn moran_scale_shift_invariant(cases: u32) -> Outcome {
    let strategy = (
        graph_and_data(),
        prop_oneof![-100.0f64..-0.01, 0.01f64..100.0],
        -1000.0f64..1000.0,
    );
    finish(runner(cases).run(&strategy, |((g, v, _), a, b)| {
        prop_assume!(spread(&v) > 1e-3);
        let w = WeightMatrix::row_normalized(&g, false);
        let i = global_moran(&w, &NodeData::new("x", v.clone())).unwrap();
        let t: Vec<f64> = v.iter().map(|x| a * x + b).collect();
        let j = global_moran(&w, &NodeData::new("x", t)).unwrap();
        prop_assert!(close(i, j, 1e-9), "{} vs {}", i, j);
        Ok(())
    }))
}

pub fn local_values_sum_to_global(cases: u32) -> Outcome {
    finish(
        runner(cases).run(&(graph_and_data(), any::<bool>()), |((g, v, _), self_loops)| {
            prop_assume!(spread(&v) > 1e-3);
            let w = WeightMatrix::row_normalized(&g, self_loops);
            let x = NodeData::new("x", v);
            let total: f64 = local_moran(&w, &x).unwrap().into_iter().map(Option::unwrap).sum();
            let i = global_moran(&w, &x).unwrap();
            prop_assert!(close(total, i, 1e-12), "{} vs {}", total, i);
            Ok(())
        }),
    )
}

pub fn scatter_slope_is_moran(cases: u32) -> Outcome {
    finish(runner(cases).run(&graph_and_data(), |(g, v, _)| {
        prop_assume!(spread(&v) > 1e-3);
        let w = WeightMatrix::row_normalized(&g, false);
        let x = NodeData::new("x", v);
        let s = moran_scatter(&w, &x).unwrap();
        prop_assert_eq!(s.points.len(), g.n_nodes());
        prop_assert!(close(s.slope, global_moran(&w, &x).unwrap(), 1e-12));
        Ok(())
    }))
}

pub fn lee_symmetric_and_self_nonnegative(cases: u32) -> Outcome {
    finish(
        runner(cases).run(&(graph_and_data(), any::<bool>()), |((g, v, u), self_loops)| {
            prop_assume!(spread(&v) > 1e-3 && spread(&u) > 1e-3);
            let w = WeightMatrix::row_normalized(&g, self_loops);
            let (x, y) = (NodeData::new("x", v), NodeData::new("y", u));
            let xy = lee_l(&w, &x, &y).unwrap();
            let yx = lee_l(&w, &y, &x).unwrap();
            prop_assert!(close(xy, yx, 1e-12));
            prop_assert!(lee_l(&w, &x, &x).unwrap() >= 0.0);
            Ok(())
        }),
    )
}

pub fn swaps_preserve_every_degree(cases: u32) -> Outcome {
    finish(runner(cases).run(&(connected_graph(6, 15), any::<u64>()), |(g, seed)| {
        match double_edge_swap(&g, 10_000, seed) {
            Ok(h) => {
                prop_assert_eq!(h.degrees(), g.degrees());
                prop_assert_eq!(h.n_edges(), g.n_edges());
                prop_assert!(h.edges().all(|(i, j)| i != j));
            }
            // Nearly rigid graphs can exhaust the proposal budget.
            Err(Error::NotRewireable {
                accepted,
                requested,
                proposals,
            }) => {
                prop_assert!(accepted < requested);
                prop_assert_eq!(proposals, 100 * requested);
            }
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
        Ok(())
    }))
}

pub fn p_values_independent_of_thread_count(cases: u32) -> Outcome {
    finish(
        runner(cases).run(&(graph_and_data(), any::<u64>()), |((g, v, _), seed)| {
            prop_assume!(spread(&v) > 1e-3);
            let w = WeightMatrix::row_normalized(&g, false);
            let x = NodeData::new("x", v);
            let run = |threads: usize| {
                let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
                pool.install(|| {
                    let d = permutation_null(global_moran, &w, &x, &NullSpec::data_permutation(99, seed)).unwrap();
                    let c =
                        conditional_permutation_local(&w, &x, &NullSpec::conditional_permutation(49, seed)).unwrap();
                    let spec = NullSpec::configuration(19, seed).with_swaps(20);
                    let m = configuration_null(global_moran, &g, WeightKind::RowNormalized, &x, &spec);
                    (d, c, m)
                })
            };
            let (d1, c1, m1) = run(1);
            let (d4, c4, m4) = run(4);
            prop_assert!(same(&d1, &d4));
            for (a, b) in c1.iter().zip(&c4) {
                prop_assert!(same(a.as_ref().unwrap(), b.as_ref().unwrap()));
            }
            match (m1, m4) {
                (Ok(a), Ok(b)) => prop_assert!(same(&a, &b)),
                (Err(a), Err(b)) => prop_assert_eq!(a, b),
                (a, b) => prop_assert!(false, "{a:?} vs {b:?}"),
            }
            Ok(())
        }),
    )
}
