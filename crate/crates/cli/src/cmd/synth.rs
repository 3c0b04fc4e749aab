use netcorr::io::write_edge_list;
use netcorr::synth::{er_graph, karate, planted_partition, value_propagation, PropagationSpec};

use crate::args::{SynthArgs, SynthKind};
use crate::common::create_dir;
use crate::error::{CliError, CliResult};

/// Writes `graph.txt` and `values.csv` (column `x`, plus `block` for planted
/// partitions). The noise uses seed + 1 so it is not drawn from the same
/// stream as the graph.
pub fn run(args: &SynthArgs) -> CliResult<()> {
    let (g, blocks) = match args.kind {
        SynthKind::Er => (er_graph(args.n, args.p, args.seed)?, None),
        SynthKind::Planted => {
            let pp = planted_partition(args.n, args.blocks, args.p_in, args.p_out, args.seed)?;
            (pp.graph, Some(pp.blocks))
        }
        SynthKind::Karate => (karate(), None),
    };
    let source = match &args.source {
        Some(label) => g
            .index_of(label)
            .ok_or_else(|| CliError::input(format!("source {label:?} is not a node")))?,
        None => 0,
    };
    let spec = PropagationSpec {
        source,
        steps: args.steps,
        noise_sd: args.sigma,
        seed: args.seed.wrapping_add(1),
    };
    let x = value_propagation(&g, &spec)?;

    let isolated = g.isolated_nodes();
    if !isolated.is_empty() {
        log::warn!(
            "{} isolated node(s) cannot be written to an edge list and are omitted",
            isolated.len()
        );
    }
    create_dir(&args.out)?;
    write_edge_list(&g, args.out.join("graph.txt")).map_err(CliError::runtime)?;
    let path = args.out.join("values.csv");
    let fail = |e: csv::Error| CliError::runtime(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(&path).map_err(fail)?;
    let mut header = vec!["label", "x"];
    if blocks.is_some() {
        header.push("block");
    }
    w.write_record(&header).map_err(fail)?;
    for i in (0..g.n_nodes()).filter(|&i| g.degree(i) > 0) {
        let mut row = vec![g.label(i).to_string(), x.values()[i].to_string()];
        if let Some(b) = &blocks {
            row.push(b[i].to_string());
        }
        w.write_record(&row).map_err(fail)?;
    }
    w.flush()
        .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
    println!(
        "nodes = {}  edges = {}  isolated = {}  source = {}",
        g.n_nodes(),
        g.n_edges(),
        isolated.len(),
        g.label(source)
    );
    Ok(())
}
