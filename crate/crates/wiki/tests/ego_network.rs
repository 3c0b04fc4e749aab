mod common;

use std::sync::Arc;

use common::{fixture_dir, World, MONTH, SEED};
use netcorr::io::format_edge_list;
use netcorr_wiki::{
    build_ego_minus_ego, fetch_metrics, fetch_outlinks, Cache, Client, ClientConfig, EgoNetwork, MetricsReport, Month,
    Request, Response, Result, Transport, WikiError,
};

struct Shared(Arc<World>);

impl Transport for Shared {
    fn get(&self, req: &Request) -> Result<Response> {
        self.0.get(req)
    }
}

fn config() -> ClientConfig {
    ClientConfig {
        rate_limit: 0.0,
        ..ClientConfig::default()
    }
}

fn run(client: &Client) -> (EgoNetwork, MetricsReport) {
    let world = World::standard();
    let ego = build_ego_minus_ego(client, &world.endpoints, SEED).unwrap();
    let month: Month = MONTH.parse().unwrap();
    let metrics = fetch_metrics(client, &world.endpoints, &ego.members, month);
    (ego, metrics)
}

fn summary(ego: &EgoNetwork, metrics: &MetricsReport) -> String {
    format!(
        "{}\n{:?}\n{:?}\n{:?}",
        format_edge_list(&ego.graph),
        ego.members,
        ego.links,
        metrics
    )
}

#[test]
fn builds_expected_network() {
    let client = Client::new(Box::new(World::standard()), None, config());
    let (ego, metrics) = run(&client);
    assert_eq!(ego.members, ["Alpha", "Beta", "Delta", "Epsilon", "Gamma", "Omega"]);
    assert_eq!(ego.red_links, ["Red_page"]);
    assert!(ego.failures.is_empty());
    assert_eq!(ego.graph.n_nodes(), 6);
    assert_eq!(ego.graph.n_edges(), 5);
    let omega = ego.graph.index_of("Omega").unwrap();
    assert_eq!(ego.graph.degree(omega), 0);
    let expected = std::fs::read_to_string(fixture_dir().join("expected_edges.txt")).unwrap();
    assert_eq!(format_edge_list(&ego.graph), expected);

    assert!(metrics.failures.is_empty(), "{:?}", metrics.failures);
    let rec = |t: &str| metrics.records.iter().find(|r| r.title == t).unwrap().clone();
    let alpha_views: u64 = (0..30u64).map(|d| 120 + d % 3).sum();
    assert_eq!(rec("Alpha").views, Some(alpha_views));
    assert_eq!(rec("Omega").views, Some(0));
    assert_eq!(rec("Delta").watchers, None);
    assert_eq!(rec("Delta").edits, Some(35));
    assert_eq!(rec("Beta").length_bytes, Some(6_500));
}

#[test]
fn single_and_mutual_links_give_one_edge() {
    let world = World::from_links(&[
        ("S", &["A", "B", "C", "S"]),
        ("A", &["B", "S"]),
        ("B", &["A"]),
        ("C", &["S"]),
    ]);
    let endpoints = world.endpoints.clone();
    let client = Client::new(Box::new(world), None, config());
    let ego = build_ego_minus_ego(&client, &endpoints, "S").unwrap();
    assert_eq!(ego.members, ["A", "B", "C"]);
    assert_eq!(
        ego.links,
        [("A".to_string(), "B".to_string()), ("B".to_string(), "A".to_string())]
    );
    assert_eq!(ego.graph.n_nodes(), 3);
    assert_eq!(ego.graph.n_edges(), 1);
    assert!(ego.graph.index_of("S").is_none());
    assert_eq!(format_edge_list(&ego.graph), "A B\n");
}

#[test]
fn continuation_collects_every_link() {
    let world = World::standard();
    let endpoints = world.endpoints.clone();
    let client = Client::new(Box::new(world), None, config());
    let links = fetch_outlinks(&client, &endpoints, SEED).unwrap();
    assert_eq!(links.len(), 8);
    assert!(!links.iter().any(|t| t.starts_with("Talk:")));
    assert_eq!(client.network_requests(), 3);
    assert!(matches!(
        fetch_outlinks(&client, &endpoints, "Red page"),
        Err(WikiError::PageNotFound(_))
    ));
}

#[test]
fn warm_cache_issues_no_requests() {
    let dir = tempfile::tempdir().unwrap();
    let cold = Client::new(Box::new(World::standard()), Some(Cache::new(dir.path())), config());
    let (ego, metrics) = run(&cold);
    assert!(cold.network_requests() > 0);
    let warm = Client::offline(Cache::new(dir.path()));
    let (ego2, metrics2) = run(&warm);
    assert_eq!(warm.network_requests(), 0);
    assert_eq!(summary(&ego, &metrics), summary(&ego2, &metrics2));
}

#[test]
fn committed_fixtures_replay_offline() {
    let client = Client::offline(Cache::new(fixture_dir().join("cache")));
    let (ego, metrics) = run(&client);
    assert_eq!(client.network_requests(), 0);
    let fresh = Client::new(Box::new(World::standard()), None, config());
    let (ego2, metrics2) = run(&fresh);
    assert_eq!(summary(&ego, &metrics), summary(&ego2, &metrics2));
}

#[test]
fn completion_order_does_not_matter() {
    let mut world = World::standard();
    world.jitter = Some(15);
    let world = Arc::new(world);
    let outputs: Vec<String> = [1, 4]
        .iter()
        .map(|&threads| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            let client = Client::new(Box::new(Shared(world.clone())), None, config());
            pool.install(|| {
                let (ego, metrics) = run(&client);
                summary(&ego, &metrics)
            })
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
}

struct Failing {
    inner: World,
    broken: Vec<&'static str>,
}

impl Transport for Failing {
    fn get(&self, req: &Request) -> Result<Response> {
        if self
            .broken
            .iter()
            .any(|b| req.params.get("titles").map(String::as_str) == Some(*b))
        {
            return Ok(Response {
                status: 403,
                body: String::new(),
                retry_after: None,
            });
        }
        self.inner.get(req)
    }
}

#[test]
fn aborts_when_too_many_members_fail() {
    let endpoints = World::standard().endpoints;
    let client = Client::new(
        Box::new(Failing {
            inner: World::standard(),
            broken: vec!["Gamma"],
        }),
        None,
        config(),
    );
    let err = build_ego_minus_ego(&client, &endpoints, SEED).unwrap_err();
    assert!(
        matches!(
            err,
            WikiError::TooManyFailures {
                failed: 1,
                total: 6,
                ..
            }
        ),
        "{err}"
    );
}

/// Rewrites the committed fixture cache from the synthetic wiki.
#[test]
#[ignore]
fn regenerate_fixtures() {
    let dir = fixture_dir();
    let _ = std::fs::remove_dir_all(dir.join("cache"));
    let client = Client::new(
        Box::new(World::standard()),
        Some(Cache::new(dir.join("cache"))),
        config(),
    );
    let (ego, _) = run(&client);
    std::fs::write(dir.join("expected_edges.txt"), format_edge_list(&ego.graph)).unwrap();
}
