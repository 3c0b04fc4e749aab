//! EgoMinusEgo link networks: the pages a seed links to, joined by an
//! undirected edge when either links to the other.

use std::collections::BTreeSet;

use netcorr::{Graph, GraphBuilder};
use rayon::prelude::*;

use crate::api::{fetch_outlinks, Endpoints};
use crate::client::Client;
use crate::error::{Result, WikiError};
use crate::title::canonical;

#[derive(Debug, Clone)]
pub struct EgoNetwork {
    pub seed: String,
    /// Member pages, sorted; includes pages whose own links failed to load.
    pub members: Vec<String>,
    /// Directed links between members, sorted.
    pub links: Vec<(String, String)>,
    /// Seed links to pages that do not exist.
    pub red_links: Vec<String>,
    /// `(title, error)` for members whose links could not be fetched.
    pub failures: Vec<(String, String)>,
    /// Undirected graph over all members.
    pub graph: Graph,
}

/// Builds the EgoMinusEgo network of `seed`. Aborts if more than 5% of the
/// member fetches fail; red links are dropped, not counted as failures.
pub fn build_ego_minus_ego(client: &Client, endpoints: &Endpoints, seed: &str) -> Result<EgoNetwork> {
    let seed = canonical(seed);
    let candidates: Vec<String> = fetch_outlinks(client, endpoints, &seed)?
        .into_iter()
        .filter(|t| *t != seed)
        .collect();
    let fetched: Vec<Result<Vec<String>>> = candidates
        .par_iter()
        .map(|t| fetch_outlinks(client, endpoints, t))
        .collect();

    let mut members = Vec::new();
    let mut red_links = Vec::new();
    let mut failures = Vec::new();
    let mut outlinks = Vec::new();
    for (title, result) in candidates.iter().zip(fetched) {
        match result {
            Ok(links) => {
                members.push(title.clone());
                outlinks.push((title.clone(), links));
            }
            Err(WikiError::PageNotFound(_)) => red_links.push(title.clone()),
            Err(e) => {
                members.push(title.clone());
                failures.push((title.clone(), e.to_string()));
            }
        }
    }
    let attempted = members.len();
    if failures.len() * 20 > attempted {
        return Err(WikiError::TooManyFailures {
            failed: failures.len(),
            total: attempted,
            last: failures.last().map(|(t, e)| format!("{t}: {e}")).unwrap_or_default(),
        });
    }
    for (t, e) in &failures {
        log::warn!("links of {t} unavailable: {e}");
    }

    let member_set: BTreeSet<&String> = members.iter().collect();
    let mut links = BTreeSet::new();
    for (from, outs) in &outlinks {
        for to in outs {
            if to != from && member_set.contains(to) {
                links.insert((from.clone(), to.clone()));
            }
        }
    }
    let mut builder = GraphBuilder::new();
    for m in &members {
        builder.node(m);
    }
    for (a, b) in &links {
        builder.edge(a, b);
    }
    let graph = builder.build_sorted()?;
    Ok(EgoNetwork {
        seed,
        members,
        links: links.into_iter().collect(),
        red_links,
        failures,
        graph,
    })
}
