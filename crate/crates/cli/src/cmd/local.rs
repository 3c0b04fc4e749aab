use netcorr::inference::{conditional_permutation_local, configuration_null_local, NullResult};
use netcorr::io::{NullSummary, ResultDocument};
use netcorr::report::{render_local_histogram, HistogramOptions};
use netcorr::stats::local_moran;
use netcorr::{NullSpec, Tail};

use crate::args::LocalArgs;
use crate::common::*;
use crate::error::{CliError, CliResult};

fn p_values(results: &[Option<NullResult>]) -> Vec<Option<f64>> {
    results.iter().map(|r| r.as_ref().map(|r| r.p_value)).collect()
}

pub fn run(args: &LocalArgs) -> CliResult<()> {
    let g = load_graph(&args.graph.graph)?;
    let table = load_table(&args.values.values)?;
    let x = load_column(&table, &args.column, &g, args.values.log10)?;
    let tail: Tail = args.tail.into();
    let kind = weight_kind(args.graph.self_loops);
    let w = kind.build(&g)?;
    let values = local_moran(&w, &x)?;

    let mut columns = vec!["I_i".to_string()];
    let mut p_columns = Vec::new();
    let mut nulls = Vec::new();
    if args.null.null.data() {
        let spec = NullSpec::conditional_permutation(args.null.nperm, args.null.seed).with_tail(tail);
        p_columns.push(p_values(&conditional_permutation_local(&w, &x, &spec)?));
        columns.push("p_d".into());
        nulls.push(NullSummary::from_spec("p_d", &spec));
    }
    if args.null.null.config() {
        let spec = config_spec(&args.null, tail);
        p_columns.push(p_values(&configuration_null_local(local_moran, &g, kind, &x, &spec)?));
        columns.push("p_c".into());
        nulls.push(NullSummary::from_spec("p_c", &spec));
    }

    let mut doc = ResultDocument::new("local-moran", kind.to_string(), columns.clone());
    println!(
        "{}",
        ["node"]
            .into_iter()
            .chain(columns.iter().map(String::as_str))
            .collect::<Vec<_>>()
            .join("\t")
    );
    for i in 0..g.n_nodes() {
        let mut row = vec![values[i]];
        row.extend(p_columns.iter().map(|p| p[i]));
        let shown: Vec<String> = std::iter::once(show(row[0]))
            .chain(
                row[1..]
                    .iter()
                    .map(|p| format!("{}{}", show(*p), mark(*p, args.null.alpha))),
            )
            .collect();
        println!("{}\t{}", g.label(i), shown.join("\t"));
        doc.push_row(g.label(i), row)?;
    }
    doc.nulls = nulls;
    doc.metadata = Provenance::new()
        .input("graph", &args.graph.graph)?
        .input("values", &args.values.values)?
        .param("column", &args.column)
        .param("log10", args.values.log10)
        .param("tail", tail.as_str())
        .nulls(&args.null)
        .metadata();

    if let Some(path) = &args.histogram {
        let highlight = p_columns.first().cloned().unwrap_or_else(|| vec![None; g.n_nodes()]);
        let opts = HistogramOptions {
            alpha: args.null.alpha,
            title: format!("Node Moran indices of {}", args.column),
            ..HistogramOptions::default()
        };
        render_local_histogram(&values, &highlight, &opts, path).map_err(CliError::runtime)?;
    }
    emit(&doc, &args.output)
}
