use netcorr::inference::conditional_permutation_local;
use netcorr::io::{NullSummary, ResultDocument};
use netcorr::report::{render_scatter, ScatterOptions};
use netcorr::stats::moran_scatter;
use netcorr::{NullSpec, Tail};

use crate::args::ScatterArgs;
use crate::common::*;
use crate::error::{CliError, CliResult};

pub fn run(args: &ScatterArgs) -> CliResult<()> {
    let g = load_graph(&args.graph.graph)?;
    let table = load_table(&args.values.values)?;
    let x = load_column(&table, &args.column, &g, args.values.log10)?;
    let kind = weight_kind(args.graph.self_loops);
    let w = kind.build(&g)?;
    let scatter = moran_scatter(&w, &x)?;
    let residuals = scatter.residuals();
    let outliers = scatter.outliers(args.outliers);

    let mut columns: Vec<String> = ["z", "lag", "residual", "outlier", "slope"].map(String::from).to_vec();
    let mut nulls = Vec::new();
    let p_values = if args.pvalues {
        let spec = NullSpec::conditional_permutation(args.nperm, args.seed).with_tail(Tail::TwoSided);
        let r = conditional_permutation_local(&w, &x, &spec)?;
        columns.push("p_d".into());
        nulls.push(NullSummary::from_spec("p_d", &spec));
        Some(r.iter().map(|r| r.as_ref().map(|r| r.p_value)).collect::<Vec<_>>())
    } else {
        None
    };

    let mut doc = ResultDocument::new("moran-scatter", kind.to_string(), columns.clone());
    println!(
        "node\tquadrant\t{}",
        columns[..4].join("\t") + if p_values.is_some() { "\tp_d" } else { "" }
    );
    for (k, pt) in scatter.points.iter().enumerate() {
        let is_outlier = outliers.contains(&k);
        let mut row = vec![
            Some(pt.z),
            Some(pt.lag),
            Some(residuals[k]),
            Some(f64::from(u8::from(is_outlier))),
            None,
        ];
        let mut line = format!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            g.label(pt.node),
            pt.quadrant.as_str(),
            pt.z,
            pt.lag,
            residuals[k],
            u8::from(is_outlier)
        );
        if let Some(p) = &p_values {
            row.push(p[pt.node]);
            line.push_str(&format!("\t{}{}", show(p[pt.node]), mark(p[pt.node], args.alpha)));
        }
        println!("{line}");
        doc.push_row(g.label(pt.node), row)?;
    }
    let mut slope_row = vec![None; columns.len()];
    slope_row[4] = Some(scatter.slope);
    doc.push_row("global", slope_row)?;
    println!("slope = {}", scatter.slope);
    doc.nulls = nulls;
    doc.metadata = Provenance::new()
        .input("graph", &args.graph.graph)?
        .input("values", &args.values.values)?
        .param("column", &args.column)
        .param("log10", args.values.log10)
        .param("outliers", args.outliers)
        .param("nperm", args.nperm)
        .param("seed", args.seed)
        .param("alpha", args.alpha)
        .metadata();

    if let Some(path) = &args.plot {
        let opts = ScatterOptions {
            alpha: args.alpha,
            outlier_k: Some(args.outliers),
            labels: Some(g.labels().to_vec()),
            title: format!("Moran scatter plot of {}", args.column),
        };
        render_scatter(&scatter, p_values.as_deref(), &opts, path).map_err(CliError::runtime)?;
    }
    emit(&doc, &args.output)
}
