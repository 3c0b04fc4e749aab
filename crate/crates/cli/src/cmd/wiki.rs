use std::time::Duration;

use netcorr_wiki::{
    build_ego_minus_ego, fetch_metrics, Cache, Client, ClientConfig, Endpoints, Http, Month, Offline, Transport,
};
use serde_json::json;

use crate::args::WikiArgs;
use crate::common::create_dir;
use crate::error::{CliError, CliResult};

fn count(v: Option<u64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// Writes `edges.txt`, `metrics.csv` (pages with at least one edge, so it
/// aligns with the edge list), `pages.csv` (every member with its degree) and
/// `network.json`.
pub fn run(args: &WikiArgs) -> CliResult<()> {
    let month: Month = args.month.parse()?;
    let transport: Box<dyn Transport> = if args.offline {
        Box::new(Offline)
    } else {
        Box::new(Http::new(&args.user_agent, Duration::from_secs(30)))
    };
    let config = ClientConfig {
        rate_limit: args.rate_limit,
        seed: args.seed,
        ..ClientConfig::default()
    };
    let client = Client::new(transport, Some(Cache::new(&args.cache_dir)), config);
    let endpoints = Endpoints::default();
    let ego = build_ego_minus_ego(&client, &endpoints, &args.seed_page)?;
    let metrics = fetch_metrics(&client, &endpoints, &ego.members, month);
    log::info!("{} network request(s)", client.network_requests());

    create_dir(&args.out)?;
    let g = &ego.graph;
    let edges_path = args.out.join("edges.txt");
    std::fs::write(&edges_path, netcorr::io::format_edge_list(g))
        .map_err(|e| CliError::runtime(format!("{}: {e}", edges_path.display())))?;

    for (name, connected_only) in [("metrics.csv", true), ("pages.csv", false)] {
        let path = args.out.join(name);
        let fail = |e: csv::Error| CliError::runtime(format!("{}: {e}", path.display()));
        let mut w = csv::Writer::from_path(&path).map_err(fail)?;
        let mut header = vec!["label", "views", "watchers", "length_bytes", "edits"];
        if !connected_only {
            header.push("degree");
        }
        w.write_record(&header).map_err(fail)?;
        for rec in &metrics.records {
            let degree = g.index_of(&rec.title).map_or(0, |i| g.degree(i));
            if connected_only && degree == 0 {
                continue;
            }
            let mut row = vec![
                rec.title.clone(),
                count(rec.views),
                count(rec.watchers),
                count(rec.length_bytes),
                count(rec.edits),
            ];
            if !connected_only {
                row.push(degree.to_string());
            }
            w.write_record(&row).map_err(fail)?;
        }
        w.flush()
            .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
    }

    let isolated: Vec<&str> = g.isolated_nodes().into_iter().map(|i| g.label(i)).collect();
    let summary = json!({
        "seed": ego.seed,
        "month": month.to_string(),
        "members": ego.members.len(),
        "edges": g.n_edges(),
        "directed_links": ego.links.len(),
        "isolated": isolated,
        "red_links": ego.red_links,
        "link_failures": ego.failures,
        "metric_failures": metrics.failures,
    });
    let path = args.out.join("network.json");
    let text = serde_json::to_string_pretty(&summary).expect("serializable") + "\n";
    std::fs::write(&path, text).map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;

    println!(
        "members = {}  edges = {}  isolated = {}  red_links = {}  failures = {}",
        ego.members.len(),
        g.n_edges(),
        isolated.len(),
        ego.red_links.len(),
        ego.failures.len() + metrics.failures.len()
    );
    Ok(())
}
