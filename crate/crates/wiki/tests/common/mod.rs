//! A small synthetic wiki served through the `Transport` trait.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Duration;

use netcorr_wiki::{Endpoints, Request, Response, Result, Transport};
use serde_json::{json, Value};

pub const SEED: &str = "Network science";
pub const MONTH: &str = "2024-04";
pub const LINKS_PER_RESPONSE: usize = 3;

pub struct Page {
    pub links: Vec<&'static str>,
    pub daily_views: Option<Vec<u64>>,
    pub watchers: Option<u64>,
    pub length: u64,
    pub edits: u64,
}

pub struct World {
    pub endpoints: Endpoints,
    pub pages: BTreeMap<&'static str, Page>,
    /// Sleep before answering, keyed by request, to scramble completion order.
    pub jitter: Option<u64>,
    pub served: AtomicUsize,
}

fn page(links: &[&'static str], views: Option<u64>, watchers: Option<u64>, length: u64, edits: u64) -> Page {
    Page {
        links: links.to_vec(),
        daily_views: views.map(|v| (0..30).map(|d| v + d % 3).collect()),
        watchers,
        length,
        edits,
    }
}

impl World {
    /// Pages given as `(title, links)`, with fixed metrics.
    pub fn from_links(pages: &[(&'static str, &[&'static str])]) -> Self {
        World {
            endpoints: Endpoints::default(),
            pages: pages
                .iter()
                .map(|(t, l)| (*t, page(l, Some(1), Some(30), 100, 1)))
                .collect(),
            jitter: None,
            served: AtomicUsize::new(0),
        }
    }

    /// Seed with eight links over three responses (one red, one self link,
    /// one non-article); Beta has two links; Delta's watcher count is
    /// suppressed; Omega has no pageview data and no links to members.
    pub fn standard() -> Self {
        let mut pages = BTreeMap::new();
        pages.insert(
            SEED,
            page(
                &[
                    "Alpha",
                    "Beta",
                    "Delta",
                    "Epsilon",
                    "Gamma",
                    "Network science",
                    "Omega",
                    "Red page",
                    "Talk:Alpha",
                ],
                Some(900),
                Some(310),
                52_000,
                4_100,
            ),
        );
        pages.insert(
            "Alpha",
            page(
                &["Beta", "Gamma", "Network science", "Outside"],
                Some(120),
                Some(45),
                18_000,
                640,
            ),
        );
        pages.insert("Beta", page(&["Gamma", "Outside"], Some(40), Some(31), 6_500, 150));
        pages.insert("Gamma", page(&["Delta"], Some(75), Some(38), 9_800, 320));
        pages.insert("Delta", page(&[], Some(8), None, 2_100, 35));
        pages.insert("Epsilon", page(&["Alpha", "Red page"], Some(22), Some(30), 3_900, 80));
        pages.insert("Omega", page(&["Outside"], None, Some(30), 1_200, 12));
        pages.insert("Outside", page(&[], Some(5), Some(30), 800, 4));
        World {
            endpoints: Endpoints::default(),
            pages,
            jitter: None,
            served: AtomicUsize::new(0),
        }
    }

    fn ok(body: Value) -> Result<Response> {
        Ok(Response {
            status: 200,
            body: body.to_string(),
            retry_after: None,
        })
    }

    fn not_found() -> Result<Response> {
        Ok(Response {
            status: 404,
            body: json!({"title": "Not found."}).to_string(),
            retry_after: None,
        })
    }

    fn links(&self, req: &Request) -> Result<Response> {
        let title = req.params["titles"].as_str();
        let Some(p) = self.pages.get(title) else {
            return Self::ok(
                json!({"batchcomplete": true, "query": {"pages": [{"ns": 0, "title": title, "missing": true}]}}),
            );
        };
        let start: usize = req.params.get("plcontinue").map_or(0, |c| c.parse().unwrap());
        let end = (start + LINKS_PER_RESPONSE).min(p.links.len());
        let links: Vec<Value> = p.links[start..end]
            .iter()
            .map(|t| json!({"ns": if t.starts_with("Talk:") { 1 } else { 0 }, "title": t}))
            .collect();
        let mut body = json!({"query": {"pages": [{"pageid": 1, "ns": 0, "title": title, "links": links}]}});
        if end < p.links.len() {
            body["continue"] = json!({"plcontinue": end.to_string(), "continue": "||"});
        } else {
            body["batchcomplete"] = json!(true);
        }
        Self::ok(body)
    }

    fn info(&self, req: &Request) -> Result<Response> {
        let pages: Vec<Value> = req.params["titles"]
            .split('|')
            .map(|t| match self.pages.get(t) {
                Some(p) => {
                    let mut v = json!({"ns": 0, "title": t, "length": p.length});
                    if let Some(w) = p.watchers {
                        v["watchers"] = json!(w);
                    }
                    v
                }
                None => json!({"ns": 0, "title": t, "missing": true}),
            })
            .collect();
        Self::ok(json!({"batchcomplete": true, "query": {"pages": pages}}))
    }

    fn rest(&self, req: &Request) -> Result<Response> {
        let url = url::Url::parse(&req.endpoint).unwrap();
        let segs: Vec<String> = url
            .path_segments()
            .unwrap()
            .map(|s| percent_decode(s).replace('_', " "))
            .collect();
        if url.host_str() == Some("wikimedia.org") {
            let title = &segs[segs.len() - 4];
            return match self.pages.get(title.as_str()).and_then(|p| p.daily_views.as_ref()) {
                Some(days) => Self::ok(
                    json!({"items": days.iter().map(|v| json!({"article": title, "views": v})).collect::<Vec<_>>()}),
                ),
                None => Self::not_found(),
            };
        }
        let title = &segs[segs.len() - 4];
        match self.pages.get(title.as_str()) {
            Some(p) => Self::ok(json!({"count": p.edits, "limit": false})),
            None => Self::not_found(),
        }
    }
}

fn percent_decode(s: &str) -> String {
    url::form_urlencoded::parse(format!("x={s}").as_bytes())
        .next()
        .map(|(_, v)| v.into_owned())
        .unwrap_or_default()
}

impl Transport for World {
    fn get(&self, req: &Request) -> Result<Response> {
        self.served.fetch_add(1, Ordering::SeqCst);
        if let Some(max) = self.jitter {
            let h = req
                .canonical()
                .bytes()
                .fold(7u64, |h, b| h.wrapping_mul(31).wrapping_add(b as u64));
            std::thread::sleep(Duration::from_millis(h % max));
        }
        if req.endpoint == self.endpoints.action_api {
            match req.params.get("prop").map(String::as_str) {
                Some("links") => self.links(req),
                Some("info") => self.info(req),
                _ => panic!("unexpected request {}", req.canonical()),
            }
        } else {
            self.rest(req)
        }
    }
}

pub fn fixture_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}
