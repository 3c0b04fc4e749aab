//! Independent dense double-loop evaluations of every statistic, and the
//! exact small-instance checks built on them. Checks panic on mismatch.

use netcorr::stats::*;
use netcorr::{Error, Graph, NodeData, WeightMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-12;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL * (1.0 + a.abs().max(b.abs()))
}

/// Dense weights over the induced subgraph on `present`, indexed by the
/// original node ids (absent rows and columns are zero).
#[derive(Clone, Copy)]
enum Kind {
    Binary,
    Row,
    RowSelf,
}

fn dense(g: &Graph, present: &[bool], kind: Kind) -> Vec<Vec<f64>> {
    let n = g.n_nodes();
    let mut w = vec![vec![0.0; n]; n];
    for i in 0..n {
        if !present[i] {
            continue;
        }
        let nbrs: Vec<usize> = (0..n).filter(|&j| j != i && present[j] && g.has_edge(i, j)).collect();
        match kind {
            Kind::Binary => nbrs.iter().for_each(|&j| w[i][j] = 1.0),
            Kind::Row => nbrs.iter().for_each(|&j| w[i][j] = 1.0 / nbrs.len() as f64),
            Kind::RowSelf => {
                let k = nbrs.len() as f64 + 1.0;
                w[i][i] = 1.0 / k;
                nbrs.iter().for_each(|&j| w[i][j] = 1.0 / k);
            }
        }
    }
    w
}

fn dense_distance_class(g: &Graph, d: usize, present: &[bool]) -> Vec<Vec<f64>> {
    let n = g.n_nodes();
    let inf = usize::MAX / 4;
    let mut dist = vec![vec![inf; n]; n];
    for i in 0..n {
        dist[i][i] = 0;
        for j in 0..n {
            if g.has_edge(i, j) {
                dist[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if dist[i][k] + dist[k][j] < dist[i][j] {
                    dist[i][j] = dist[i][k] + dist[k][j];
                }
            }
        }
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if present[i] && present[j] && dist[i][j] == d {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

struct Centered {
    idx: Vec<usize>,
    z: Vec<f64>,
}

fn centered(x: &[f64], present: &[bool]) -> Centered {
    let idx: Vec<usize> = (0..x.len()).filter(|&i| present[i]).collect();
    let mean = idx.iter().map(|&i| x[i]).sum::<f64>() / idx.len() as f64;
    let mut z = vec![0.0; x.len()];
    for &i in &idx {
        z[i] = x[i] - mean;
    }
    Centered { idx, z }
}

fn total(w: &[Vec<f64>]) -> f64 {
    w.iter().flatten().sum()
}

fn moran_oracle(w: &[Vec<f64>], x: &[f64], present: &[bool]) -> Option<f64> {
    let c = centered(x, present);
    let s0 = total(w);
    let zz: f64 = c.idx.iter().map(|&i| c.z[i] * c.z[i]).sum();
    if s0 == 0.0 || zz == 0.0 {
        return None;
    }
    let mut num = 0.0;
    for &i in &c.idx {
        for &j in &c.idx {
            num += w[i][j] * c.z[i] * c.z[j];
        }
    }
    Some(c.idx.len() as f64 / s0 * num / zz)
}

fn local_oracle(w: &[Vec<f64>], x: &[f64], present: &[bool]) -> Vec<Option<f64>> {
    let c = centered(x, present);
    let zz: f64 = c.idx.iter().map(|&i| c.z[i] * c.z[i]).sum();
    (0..x.len())
        .map(|i| present[i].then(|| c.z[i] * c.idx.iter().map(|&j| w[i][j] * c.z[j]).sum::<f64>() / zz))
        .collect()
}

fn geary_oracle(w: &[Vec<f64>], x: &[f64], present: &[bool]) -> Option<f64> {
    let c = centered(x, present);
    let s0 = total(w);
    let zz: f64 = c.idx.iter().map(|&i| c.z[i] * c.z[i]).sum();
    if s0 == 0.0 {
        return None;
    }
    let mut num = 0.0;
    for &i in &c.idx {
        for &j in &c.idx {
            num += w[i][j] * (x[i] - x[j]).powi(2);
        }
    }
    Some((c.idx.len() as f64 - 1.0) * num / (2.0 * s0 * zz))
}

fn getis_global_oracle(w: &[Vec<f64>], x: &[f64], present: &[bool]) -> Option<f64> {
    let (mut num, mut den) = (0.0, 0.0);
    for i in (0..x.len()).filter(|&i| present[i]) {
        for j in (0..x.len()).filter(|&j| present[j] && j != i) {
            num += w[i][j] * x[i] * x[j];
            den += x[i] * x[j];
        }
    }
    (den > 0.0).then(|| num / den)
}

fn getis_local_oracle(w: &[Vec<f64>], x: &[f64], present: &[bool]) -> Vec<Option<f64>> {
    (0..x.len())
        .map(|i| {
            if !present[i] {
                return None;
            }
            let (mut num, mut den) = (0.0, 0.0);
            for j in (0..x.len()).filter(|&j| present[j] && j != i) {
                num += w[i][j] * x[j];
                den += x[j];
            }
            (den > 0.0).then(|| num / den)
        })
        .collect()
}

fn assortativity_oracle(a: &[Vec<f64>], x: &[f64], present: &[bool]) -> Option<f64> {
    let idx: Vec<usize> = (0..x.len()).filter(|&i| present[i]).collect();
    let k: Vec<f64> = (0..x.len()).map(|i| a[i].iter().sum()).collect();
    let two_e: f64 = idx.iter().map(|&i| k[i]).sum();
    let n = idx.len() as f64;
    let mean = idx.iter().map(|&i| k[i]).sum::<f64>() / n;
    let var = idx.iter().map(|&i| (k[i] - mean).powi(2)).sum::<f64>() / n;
    if two_e == 0.0 || var == 0.0 {
        return None;
    }
    let mut num = 0.0;
    for &i in &idx {
        for &j in &idx {
            num += x[i] * (a[i][j] - k[i] * k[j] / two_e) * x[j];
        }
    }
    Some(num / var)
}

fn coscia_oracle(w: &[Vec<f64>], x: &[f64], y: &[f64], present: &[bool]) -> Option<f64> {
    let (cx, cy) = (centered(x, present), centered(y, present));
    let (mut xy, mut xx, mut yy) = (0.0, 0.0, 0.0);
    for &i in &cx.idx {
        for &j in &cx.idx {
            xy += w[i][j] * cx.z[i] * cy.z[j];
            xx += w[i][j] * cx.z[i] * cx.z[j];
            yy += w[i][j] * cy.z[i] * cy.z[j];
        }
    }
    let scale = total(w) / cx.idx.len() as f64;
    let nx: f64 = cx.idx.iter().map(|&i| cx.z[i].powi(2)).sum();
    let ny: f64 = cy.idx.iter().map(|&i| cy.z[i].powi(2)).sum();
    let positive = xx > VARIANCE_RTOL * scale * nx && yy > VARIANCE_RTOL * scale * ny;
    positive.then(|| xy / (xx.sqrt() * yy.sqrt()))
}

fn lee_oracle(w: &[Vec<f64>], x: &[f64], y: &[f64], present: &[bool]) -> Option<f64> {
    let (cx, cy) = (centered(x, present), centered(y, present));
    let idx = &cx.idx;
    let row_sq: f64 = idx
        .iter()
        .map(|&i| idx.iter().map(|&j| w[i][j]).sum::<f64>().powi(2))
        .sum();
    if row_sq == 0.0 {
        return None;
    }
    let mut num = 0.0;
    for &i in idx {
        let lx: f64 = idx.iter().map(|&j| w[i][j] * cx.z[j]).sum();
        let ly: f64 = idx.iter().map(|&j| w[i][j] * cy.z[j]).sum();
        num += lx * ly;
    }
    let nx: f64 = idx.iter().map(|&i| cx.z[i].powi(2)).sum();
    let ny: f64 = idx.iter().map(|&i| cy.z[i].powi(2)).sum();
    Some(idx.len() as f64 / row_sq * num / (nx * ny).sqrt())
}

fn pearson_oracle(x: &[f64], y: &[f64], present: &[bool]) -> f64 {
    let (cx, cy) = (centered(x, present), centered(y, present));
    let sxy: f64 = cx.idx.iter().map(|&i| cx.z[i] * cy.z[i]).sum();
    let sxx: f64 = cx.idx.iter().map(|&i| cx.z[i].powi(2)).sum();
    let syy: f64 = cx.idx.iter().map(|&i| cy.z[i].powi(2)).sum();
    sxy / (sxx * syy).sqrt()
}

struct Instance {
    g: Graph,
    x: Vec<f64>,
    y: Vec<f64>,
    present: Vec<bool>,
}

impl Instance {
    fn data(&self, v: &[f64]) -> NodeData {
        NodeData::with_mask("v", v.to_vec(), self.present.clone()).unwrap()
    }
}

fn random_instance(rng: &mut ChaCha8Rng) -> Instance {
    loop {
        let n = rng.random_range(2..=6);
        let p = rng.random_range(0.2..0.9);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(p) {
                    edges.push((i, j));
                }
            }
        }
        if edges.is_empty() {
            continue;
        }
        let g = Graph::from_edges(n, edges).unwrap();
        let x = (0..n).map(|_| rng.random_range(0.0..10.0)).collect();
        let y = (0..n).map(|_| rng.random_range(0.0..10.0)).collect();
        let mut present = vec![true; n];
        if n > 3 && rng.random_bool(0.3) {
            present[rng.random_range(0..n)] = false;
        }
        return Instance { g, x, y, present };
    }
}

fn agree(label: &str, ours: Result<f64, Error>, oracle: Option<f64>) {
    match (ours, oracle) {
        (Ok(a), Some(b)) => assert!(close(a, b), "{label}: {a} vs oracle {b}"),
        (Err(_), None) => {}
        (ours, oracle) => panic!("{label}: {ours:?} vs oracle {oracle:?}"),
    }
}

fn agree_vec(label: &str, ours: Vec<Option<f64>>, oracle: Vec<Option<f64>>) {
    assert_eq!(ours.len(), oracle.len());
    for (i, (a, b)) in ours.into_iter().zip(oracle).enumerate() {
        match (a, b) {
            (Some(a), Some(b)) => assert!(close(a, b), "{label}[{i}]: {a} vs oracle {b}"),
            (None, None) => {}
            (a, b) => panic!("{label}[{i}]: {a:?} vs oracle {b:?}"),
        }
    }
}

pub fn random_instances_match_double_loop_sums(cases: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    for case in 0..cases {
        let inst = random_instance(&mut rng);
        let (g, x, y, present) = (&inst.g, inst.data(&inst.x), inst.data(&inst.y), &inst.present);
        let tag = |s: &str| format!("case {case} {s}");
        let weights = [
            (Kind::Binary, WeightMatrix::binary_adjacency(g)),
            (Kind::Row, WeightMatrix::row_normalized(g, false)),
            (Kind::RowSelf, WeightMatrix::row_normalized(g, true)),
        ];
        for (kind, w) in &weights {
            let d = dense(g, present, *kind);
            agree(&tag("moran"), global_moran(w, &x), moran_oracle(&d, &inst.x, present));
            agree(&tag("geary"), geary_c(w, &x), geary_oracle(&d, &inst.x, present));
            agree(
                &tag("getis"),
                getis_ord_global(w, &x),
                getis_global_oracle(&d, &inst.x, present),
            );
            agree_vec(
                &tag("getis local"),
                getis_ord_local(w, &x).unwrap(),
                getis_local_oracle(&d, &inst.x, present),
            );
            agree(
                &tag("coscia"),
                coscia_rho(w, &x, &y),
                coscia_oracle(&d, &inst.x, &inst.y, present),
            );
            agree(&tag("lee"), lee_l(w, &x, &y), lee_oracle(&d, &inst.x, &inst.y, present));
            if total(&d) == 0.0 {
                assert_eq!(local_moran(w, &x), Err(Error::EmptyWeights));
                assert!(moran_scatter(w, &x).is_err());
                continue;
            }
            agree_vec(
                &tag("local"),
                local_moran(w, &x).unwrap(),
                local_oracle(&d, &inst.x, present),
            );
            let s = moran_scatter(w, &x).unwrap();
            let z = centered(&inst.x, present).z;
            for p in &s.points {
                let lag: f64 = (0..g.n_nodes()).map(|j| d[p.node][j] * z[j]).sum();
                assert!(close(p.lag, lag), "{}", tag("scatter lag"));
            }
        }
        let a = dense(g, present, Kind::Binary);
        agree(
            &tag("assortativity"),
            assortativity_continuous(g, &x),
            assortativity_oracle(&a, &inst.x, present),
        );
        let r = pearson(&x, &y).unwrap();
        assert!(
            close(r.r, pearson_oracle(&inst.x, &inst.y, present)),
            "{}",
            tag("pearson")
        );

        let points = correlogram(g, &x, 3, None).unwrap();
        for p in points {
            let d = dense_distance_class(g, p.d, present);
            assert!(close(p.total_weight, total(&d)), "{}", tag("class weight"));
            match (p.value, moran_oracle(&d, &inst.x, present)) {
                (Some(a), Some(b)) => assert!(close(a, b), "{}: {a} vs {b}", tag("correlogram")),
                (None, None) => {}
                (a, b) => panic!("{}: {a:?} vs {b:?}", tag("correlogram")),
            }
        }
    }
}

fn p3() -> Graph {
    Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
}

pub fn p3_exact_values() {
    let g = p3();
    let w = WeightMatrix::row_normalized(&g, false);
    let x = NodeData::new("x", vec![0.0, 0.0, 1.0]);
    assert!(close(global_moran(&w, &x).unwrap(), -0.25));
    let local: Vec<f64> = local_moran(&w, &x).unwrap().into_iter().map(Option::unwrap).collect();
    for (a, b) in local.iter().zip([1.0 / 6.0, -1.0 / 12.0, -1.0 / 3.0]) {
        assert!(close(*a, b));
    }
    assert!(close(local.iter().sum(), -0.25));
    assert!(close(geary_c(&w, &x).unwrap(), 0.75));
    let ws = WeightMatrix::row_normalized(&g, true);
    assert!(close(lee_l(&ws, &x, &x).unwrap(), 5.0 / 24.0));
}

pub fn k22_two_block_data() {
    let g = Graph::from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
    let w = WeightMatrix::row_normalized(&g, false);
    let x = NodeData::new("x", vec![1.0, 1.0, 0.0, 0.0]);
    assert!(close(global_moran(&w, &x).unwrap(), -1.0));
    assert_eq!(coscia_rho(&w, &x, &x), Err(Error::NetworkVarianceNotPositive));
    assert_eq!(
        Error::NetworkVarianceNotPositive.to_string(),
        "network variance not positive"
    );
}

pub fn clique_value_is_minus_one_over_n_minus_one() {
    let n = 5;
    let g = Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        let x = NodeData::new("x", v.clone());
        let present = vec![true; n];
        for kind in [Kind::Binary, Kind::Row] {
            let oracle = moran_oracle(&dense(&g, &present, kind), &v, &present).unwrap();
            assert!(close(oracle, -1.0 / (n as f64 - 1.0)));
        }
        let w = WeightMatrix::row_normalized(&g, false);
        assert!(close(global_moran(&w, &x).unwrap(), -0.25));
    }
}

fn permutations(items: &[f64]) -> Vec<Vec<f64>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

pub fn exhaustive_permutation_mean_on_four_nodes() {
    let graphs = [
        vec![(0, 1), (1, 2), (2, 3)],
        vec![(0, 1), (0, 2), (0, 3)],
        vec![(0, 1), (1, 2), (2, 3), (3, 0)],
        vec![(0, 1), (1, 2), (2, 0), (2, 3)],
        vec![(0, 1), (2, 3)],
    ];
    for edges in graphs {
        let g = Graph::from_edges(4, edges).unwrap();
        for w in [
            WeightMatrix::binary_adjacency(&g),
            WeightMatrix::row_normalized(&g, false),
        ] {
            let perms = permutations(&[0.3, 1.7, -2.0, 5.5]);
            assert_eq!(perms.len(), 24);
            let mean = perms
                .iter()
                .map(|p| global_moran(&w, &NodeData::new("x", p.clone())).unwrap())
                .sum::<f64>()
                / 24.0;
            assert!(close(mean, -1.0 / 3.0), "{mean}");
        }
    }
}

pub fn conditional_null_matches_enumeration() {
    use netcorr::inference::conditional_permutation_local;
    use netcorr::NullSpec;
    // Star with the centre at 0: each leaf's lag is the centre's value, the
    // centre's lag averages all leaves.
    let g = Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (1, 4)]).unwrap();
    let w = WeightMatrix::row_normalized(&g, false);
    let v = vec![4.0, -1.0, 2.5, 0.0, 7.0];
    let x = NodeData::new("x", v.clone());
    let observed = local_moran(&w, &x).unwrap();
    let spec = NullSpec::conditional_permutation(20_000, 11);
    let results = conditional_permutation_local(&w, &x, &spec).unwrap();
    for i in 0..5 {
        let others: Vec<f64> = (0..5).filter(|&j| j != i).map(|j| v[j]).collect();
        let perms = permutations(&others);
        let obs = observed[i].unwrap();
        let extreme = perms
            .iter()
            .filter(|p| {
                let mut vals = p.to_vec();
                vals.insert(i, v[i]);
                let li = local_moran(&w, &NodeData::new("x", vals)).unwrap()[i].unwrap();
                li >= obs - 1e-12 * obs.abs().max(1.0)
            })
            .count();
        let exact = extreme as f64 / perms.len() as f64;
        let r = results[i].as_ref().unwrap();
        assert!(close(r.observed, obs));
        let se = (exact * (1.0 - exact) / 20_000.0).sqrt().max(1e-4);
        assert!(
            (r.p_value - exact).abs() < 4.0 * se + 1e-4,
            "node {i}: {} vs {exact}",
            r.p_value
        );
    }
}

pub fn permutation_null_mean_converges_to_enumeration() {
    use netcorr::inference::permutation_null;
    use netcorr::NullSpec;
    let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 2)]).unwrap();
    let w = WeightMatrix::row_normalized(&g, false);
    let v = [1.0, 4.0, -2.0, 0.5, 3.0, 9.0];
    let all: Vec<f64> = permutations(&v)
        .into_iter()
        .map(|p| global_moran(&w, &NodeData::new("x", p)).unwrap())
        .collect();
    let exact = all.iter().sum::<f64>() / all.len() as f64;
    let sd = (all.iter().map(|i| (i - exact).powi(2)).sum::<f64>() / all.len() as f64).sqrt();
    let r = permutation_null(
        global_moran,
        &w,
        &NodeData::new("x", v.to_vec()),
        &NullSpec::data_permutation(10_000, 3),
    )
    .unwrap();
    let se = sd / 100.0;
    assert!((r.null_mean - exact).abs() < 3.0 * se, "{} vs {exact}", r.null_mean);
}
