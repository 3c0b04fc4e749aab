use netcorr::io::{NullSummary, ResultDocument};
use netcorr::report::{render_correlogram, CorrelogramOptions};
use netcorr::stats::{correlogram_with, CorrelogramPoint};
use netcorr::Tail;

use crate::args::CorrelogramArgs;
use crate::common::*;
use crate::error::{CliError, CliResult};

pub fn run(args: &CorrelogramArgs) -> CliResult<()> {
    let g = load_graph(&args.graph)?;
    let table = load_table(&args.values.values)?;
    let x = load_column(&table, &args.column, &g, args.values.log10)?;
    let tail: Tail = args.tail.into();

    let mut columns = vec!["I".to_string(), "total_weight".to_string()];
    let mut nulls = Vec::new();
    let mut series: Vec<Vec<CorrelogramPoint>> = Vec::new();
    if args.null.null.data() {
        let spec = data_spec(&args.null, tail);
        series.push(correlogram_with(&g, &x, args.dmax, args.row_normalized, Some(&spec))?);
        columns.push("p_d".into());
        nulls.push(NullSummary::from_spec("p_d", &spec));
    }
    if args.null.null.config() {
        let spec = config_spec(&args.null, tail);
        series.push(correlogram_with(&g, &x, args.dmax, args.row_normalized, Some(&spec))?);
        columns.push("p_c".into());
        nulls.push(NullSummary::from_spec("p_c", &spec));
    }
    if series.is_empty() {
        series.push(correlogram_with(&g, &x, args.dmax, args.row_normalized, None)?);
    }

    let weights = if args.row_normalized {
        "distance-class-row-normalized"
    } else {
        "distance-class"
    };
    let mut doc = ResultDocument::new("correlogram", weights, columns.clone());
    println!("d\t{}", columns.join("\t"));
    for (k, point) in series[0].iter().enumerate() {
        let mut row = vec![point.value, Some(point.total_weight)];
        if nulls.is_empty() {
            row.truncate(2);
        } else {
            row.extend(series.iter().map(|s| s[k].p_value));
        }
        let shown: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, v)| {
                if c < 2 {
                    show(*v)
                } else {
                    format!("{}{}", show(*v), mark(*v, args.null.alpha))
                }
            })
            .collect();
        println!("{}\t{}", point.d, shown.join("\t"));
        doc.push_row(point.d.to_string(), row)?;
    }
    doc.nulls = nulls;
    doc.metadata = Provenance::new()
        .input("graph", &args.graph)?
        .input("values", &args.values.values)?
        .param("column", &args.column)
        .param("log10", args.values.log10)
        .param("dmax", args.dmax)
        .param("tail", tail.as_str())
        .nulls(&args.null)
        .metadata();

    if let Some(path) = &args.plot {
        let opts = CorrelogramOptions {
            alpha: args.null.alpha,
            title: format!("Correlogram of {}", args.column),
            ..CorrelogramOptions::default()
        };
        render_correlogram(&series[0], &opts, path).map_err(CliError::runtime)?;
    }
    emit(&doc, &args.output)
}
