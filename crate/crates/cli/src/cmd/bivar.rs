use netcorr::inference::{configuration_null, permutation_null};
use netcorr::io::{NullSummary, ResultDocument};
use netcorr::stats::{lee_l, pearson};
use netcorr::{NodeData, Tail, WeightKind, WeightMatrix};

use crate::args::BivarArgs;
use crate::common::*;
use crate::error::CliResult;

/// Lee's L always uses self-loop row-normalized weights so that each node's
/// own pair of values contributes.
pub fn run(args: &BivarArgs) -> CliResult<()> {
    let g = load_graph(&args.graph.graph)?;
    let table = load_table(&args.values.values)?;
    let x = load_column(&table, &args.x, &g, args.values.log10)?;
    let y = load_column(&table, &args.y, &g, args.values.log10)?;
    let tail: Tail = args.tail.into();
    let kind = WeightKind::RowNormalizedSelfLoops;
    let w = kind.build(&g)?;

    let lee = |w: &WeightMatrix, x: &NodeData| lee_l(w, x, &y);
    let r = |_: &WeightMatrix, x: &NodeData| pearson(x, &y).map(|p| p.r);
    let observed_l = lee(&w, &x)?;
    let observed_r = pearson(&x, &y)?;

    let mut columns = vec!["value".to_string()];
    let mut l_row = vec![Some(observed_l)];
    let mut r_row = vec![Some(observed_r.r)];
    let mut nulls = Vec::new();
    if args.null.null.data() {
        let spec = data_spec(&args.null, tail);
        let rl = permutation_null(lee, &w, &x, &spec)?;
        let rr = permutation_null(r, &w, &x, &spec)?;
        columns.push("p_d".into());
        l_row.push(Some(rl.p_value));
        r_row.push(Some(rr.p_value));
        nulls.push(NullSummary::from_result("p_d", &spec, &rl));
    }
    if args.null.null.config() {
        let spec = config_spec(&args.null, tail);
        let rl = configuration_null(lee, &g, kind, &x, &spec)?;
        columns.push("p_c".into());
        l_row.push(Some(rl.p_value));
        // Pearson ignores the graph, so rewiring leaves it unchanged.
        r_row.push(None);
        nulls.push(NullSummary::from_result("p_c", &spec, &rl));
    }
    columns.push("p_t".into());
    l_row.push(None);
    r_row.push(Some(observed_r.p_value));

    let mut doc = ResultDocument::new("bivariate", kind.to_string(), columns.clone());
    println!("stat\t{}", columns.join("\t"));
    for (key, row) in [("lee_l", &l_row), ("pearson", &r_row)] {
        let shown: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, v)| {
                if c == 0 {
                    show(*v)
                } else {
                    format!("{}{}", show(*v), mark(*v, args.null.alpha))
                }
            })
            .collect();
        println!("{key}\t{}", shown.join("\t"));
        doc.push_row(key, row.clone())?;
    }
    doc.nulls = nulls;
    doc.metadata = Provenance::new()
        .input("graph", &args.graph.graph)?
        .input("values", &args.values.values)?
        .param("x", &args.x)
        .param("y", &args.y)
        .param("log10", args.values.log10)
        .param("tail", tail.as_str())
        .param("pairs", observed_r.n)
        .nulls(&args.null)
        .metadata();
    emit(&doc, &args.output)
}
