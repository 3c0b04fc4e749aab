use netcorr::inference::{configuration_null, permutation_null};
use netcorr::io::{NullSummary, ResultDocument};
use netcorr::stats::{assortativity_weights, coscia_rho, geary_c, getis_ord_global, global_moran};
use netcorr::{NodeData, Result, Tail, WeightKind, WeightMatrix};

use crate::args::{GlobalArgs, GlobalStat};
use crate::common::*;
use crate::error::{CliError, CliResult};

pub fn run(args: &GlobalArgs) -> CliResult<()> {
    let g = load_graph(&args.graph.graph)?;
    let table = load_table(&args.values.values)?;
    let x = load_column(&table, &args.column, &g, args.values.log10)?;
    let y = match (&args.stat, &args.y) {
        (GlobalStat::Coscia, Some(col)) => Some(load_column(&table, col, &g, args.values.log10)?),
        (GlobalStat::Coscia, None) => return Err(CliError::input("--stat coscia needs --y")),
        _ => None,
    };
    let tail: Tail = args.tail.into();
    let kind = match args.stat {
        GlobalStat::Assort => WeightKind::BinaryAdjacency,
        _ => weight_kind(args.graph.self_loops),
    };
    let stat = |w: &WeightMatrix, x: &NodeData| -> Result<f64> {
        match args.stat {
            GlobalStat::Moran => global_moran(w, x),
            GlobalStat::Geary => geary_c(w, x),
            GlobalStat::Getis => getis_ord_global(w, x),
            GlobalStat::Assort => assortativity_weights(w, x),
            GlobalStat::Coscia => coscia_rho(w, x, y.as_ref().expect("checked")),
        }
    };
    let name = format!("{:?}", args.stat).to_lowercase();
    let w = kind.build(&g)?;
    let observed = stat(&w, &x)?;

    let mut columns = vec!["value".to_string()];
    let mut values = vec![Some(observed)];
    let mut nulls = Vec::new();
    if args.null.null.data() {
        let spec = data_spec(&args.null, tail);
        let r = permutation_null(stat, &w, &x, &spec)?;
        columns.push("p_d".into());
        values.push(Some(r.p_value));
        nulls.push(NullSummary::from_result("p_d", &spec, &r));
    }
    if args.null.null.config() {
        let spec = config_spec(&args.null, tail);
        let r = configuration_null(stat, &g, kind, &x, &spec)?;
        columns.push("p_c".into());
        values.push(Some(r.p_value));
        nulls.push(NullSummary::from_result("p_c", &spec, &r));
    }

    let mut prov = Provenance::new()
        .input("graph", &args.graph.graph)?
        .input("values", &args.values.values)?
        .param("column", &args.column)
        .param("log10", args.values.log10)
        .param("stat", &name)
        .param("tail", tail.as_str())
        .nulls(&args.null)
        .counts(&g, &x);
    if let Some(col) = &args.y {
        prov = prov.param("y", col);
    }
    let mut doc = ResultDocument::new(&name, kind.to_string(), columns.clone());
    doc.push_row("global", values.clone())?;
    doc.nulls = nulls;
    doc.metadata = prov.metadata();

    let mut line = format!("{name} = {}", show(values[0]));
    for (c, v) in columns.iter().zip(&values).skip(1) {
        line.push_str(&format!("  {c} = {}{}", show(*v), mark(*v, args.null.alpha)));
    }
    println!("{line}");
    println!(
        "nodes = {}  edges = {}  present = {}",
        g.n_nodes(),
        g.n_edges(),
        x.n_present()
    );
    emit(&doc, &args.output)
}
