//! Link, page-info, pageview and edit-count queries.

use std::collections::{BTreeMap, BTreeSet};

use chrono::{Datelike, NaiveDate};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::client::Client;
use crate::error::{Result, WikiError};
use crate::title::{canonical, display, is_article};
use crate::transport::Request;

/// Base URLs of the services queried.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Endpoints {
    pub action_api: String,
    pub rest_api: String,
    pub pageviews: String,
    pub project: String,
}

impl Default for Endpoints {
    fn default() -> Self {
        Endpoints {
            action_api: "https://en.wikipedia.org/w/api.php".into(),
            rest_api: "https://en.wikipedia.org/w/rest.php/v1".into(),
            pageviews: "https://wikimedia.org/api/rest_v1/metrics/pageviews".into(),
            project: "en.wikipedia".into(),
        }
    }
}

/// Titles per page-info request.
pub const INFO_BATCH: usize = 50;

fn json(url: &str, body: &str) -> Result<Value> {
    let v: Value = serde_json::from_str(body).map_err(|e| WikiError::Response {
        url: url.to_string(),
        message: e.to_string(),
    })?;
    if let Some(err) = v.get("error") {
        return Err(WikiError::Response {
            url: url.to_string(),
            message: err
                .get("info")
                .and_then(Value::as_str)
                .unwrap_or("API error")
                .to_string(),
        });
    }
    Ok(v)
}

fn malformed(url: &str, what: &str) -> WikiError {
    WikiError::Response {
        url: url.to_string(),
        message: format!("missing {what}"),
    }
}

pub fn links_request(endpoints: &Endpoints, title: &str) -> Request {
    Request::new(&endpoints.action_api)
        .param("action", "query")
        .param("format", "json")
        .param("formatversion", "2")
        .param("prop", "links")
        .param("plnamespace", "0")
        .param("pllimit", "max")
        .param("redirects", "1")
        .param("titles", display(title))
}

/// Article-namespace outlinks of `title`, following continuation to the end.
/// Returned canonical, sorted and deduplicated.
pub fn fetch_outlinks(client: &Client, endpoints: &Endpoints, title: &str) -> Result<Vec<String>> {
    let base = links_request(endpoints, title);
    let mut out = BTreeSet::new();
    let mut cont: BTreeMap<String, String> = BTreeMap::new();
    loop {
        let mut req = base.clone();
        for (k, v) in &cont {
            req = req.param(k, v);
        }
        let url = req.canonical();
        let fetched = client.fetch(&req)?;
        if fetched.status == 404 {
            return Err(WikiError::PageNotFound(display(title)));
        }
        let v = json(&url, &fetched.body)?;
        let pages = v
            .pointer("/query/pages")
            .and_then(Value::as_array)
            .ok_or_else(|| malformed(&url, "query.pages"))?;
        let page = pages.first().ok_or_else(|| malformed(&url, "page"))?;
        if page.get("missing").is_some() || page.get("invalid").is_some() {
            return Err(WikiError::PageNotFound(display(title)));
        }
        for link in page.get("links").and_then(Value::as_array).into_iter().flatten() {
            if let Some(t) = link.get("title").and_then(Value::as_str) {
                let ns = link.get("ns").and_then(Value::as_i64).unwrap_or(0);
                if ns == 0 && is_article(t) {
                    out.insert(canonical(t));
                }
            }
        }
        match v.get("continue").and_then(Value::as_object) {
            Some(c) => {
                cont = c
                    .iter()
                    .map(|(k, v)| (k.clone(), v.as_str().map_or_else(|| v.to_string(), str::to_string)))
                    .collect();
            }
            None => break,
        }
    }
    Ok(out.into_iter().collect())
}

/// A calendar month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Month {
    pub year: i32,
    pub month: u32,
}

impl std::str::FromStr for Month {
    type Err = WikiError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || WikiError::InvalidMonth(s.to_string());
        let (y, m) = s.trim().split_once('-').ok_or_else(bad)?;
        let month = Month {
            year: y.parse().map_err(|_| bad())?,
            month: m.parse().map_err(|_| bad())?,
        };
        NaiveDate::from_ymd_opt(month.year, month.month, 1).ok_or_else(bad)?;
        Ok(month)
    }
}

impl std::fmt::Display for Month {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl Month {
    pub fn first_day(self) -> NaiveDate {
        NaiveDate::from_ymd_opt(self.year, self.month, 1).expect("validated month")
    }

    pub fn last_day(self) -> NaiveDate {
        let (y, m) = if self.month == 12 {
            (self.year + 1, 1)
        } else {
            (self.year, self.month + 1)
        };
        NaiveDate::from_ymd_opt(y, m, 1)
            .expect("valid date")
            .pred_opt()
            .expect("valid date")
    }

    pub fn days(self) -> u32 {
        self.last_day().day()
    }
}

fn path_request(base: &str, segments: &[&str]) -> Result<Request> {
    let mut url = url::Url::parse(base).map_err(|e| WikiError::Transport {
        url: base.to_string(),
        message: e.to_string(),
    })?;
    url.path_segments_mut()
        .map_err(|_| WikiError::Transport {
            url: base.to_string(),
            message: "cannot be a base URL".into(),
        })?
        .extend(segments);
    Ok(Request::new(String::from(url)))
}

pub fn pageviews_request(endpoints: &Endpoints, title: &str, month: Month) -> Result<Request> {
    let start = format!("{}00", month.first_day().format("%Y%m%d"));
    let end = format!("{}00", month.last_day().format("%Y%m%d"));
    path_request(
        &endpoints.pageviews,
        &[
            "per-article",
            &endpoints.project,
            "all-access",
            "user",
            &canonical(title),
            "daily",
            &start,
            &end,
        ],
    )
}

pub fn edits_request(endpoints: &Endpoints, title: &str) -> Result<Request> {
    path_request(
        &endpoints.rest_api,
        &["page", &canonical(title), "history", "counts", "edits"],
    )
}

pub fn info_request(endpoints: &Endpoints, titles: &[String]) -> Request {
    let joined: Vec<String> = titles.iter().map(|t| display(t)).collect();
    Request::new(&endpoints.action_api)
        .param("action", "query")
        .param("format", "json")
        .param("formatversion", "2")
        .param("prop", "info")
        .param("inprop", "watchers")
        .param("redirects", "1")
        .param("titles", joined.join("|"))
}

/// Sum of daily user views over `month`; no data (404) counts as zero.
pub fn fetch_monthly_views(client: &Client, endpoints: &Endpoints, title: &str, month: Month) -> Result<u64> {
    let req = pageviews_request(endpoints, title, month)?;
    let fetched = client.fetch(&req)?;
    if fetched.status == 404 {
        return Ok(0);
    }
    let url = req.canonical();
    let v = json(&url, &fetched.body)?;
    let items = v
        .get("items")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed(&url, "items"))?;
    items
        .iter()
        .map(|i| {
            i.get("views")
                .and_then(Value::as_u64)
                .ok_or_else(|| malformed(&url, "views"))
        })
        .sum()
}

/// Total edits from the page-history counts endpoint. The endpoint caps
/// large counts and flags them with `limit`; the capped value is returned.
pub fn fetch_edit_count(client: &Client, endpoints: &Endpoints, title: &str) -> Result<u64> {
    let req = edits_request(endpoints, title)?;
    let fetched = client.fetch(&req)?;
    if fetched.status == 404 {
        return Err(WikiError::PageNotFound(display(title)));
    }
    let url = req.canonical();
    let v = json(&url, &fetched.body)?;
    if v.get("limit").and_then(Value::as_bool) == Some(true) {
        log::warn!("edit count of {} is capped by the service", display(title));
    }
    v.get("count")
        .and_then(Value::as_u64)
        .ok_or_else(|| malformed(&url, "count"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PageInfo {
    pub length_bytes: Option<u64>,
    /// Absent when the count is suppressed for privacy.
    pub watchers: Option<u64>,
}

/// Length and watcher counts, batched. Titles that resolve to missing pages
/// are absent from the result.
pub fn fetch_info(client: &Client, endpoints: &Endpoints, titles: &[String]) -> Result<BTreeMap<String, PageInfo>> {
    let mut out = BTreeMap::new();
    for batch in titles.chunks(INFO_BATCH) {
        let req = info_request(endpoints, batch);
        let url = req.canonical();
        let v = json(&url, &client.fetch(&req)?.body)?;
        // Requested title -> resolved title, through normalization and redirects.
        let mut resolve: BTreeMap<String, String> = BTreeMap::new();
        for key in ["normalized", "redirects"] {
            for r in v
                .pointer(&format!("/query/{key}"))
                .and_then(Value::as_array)
                .into_iter()
                .flatten()
            {
                if let (Some(from), Some(to)) = (
                    r.get("from").and_then(Value::as_str),
                    r.get("to").and_then(Value::as_str),
                ) {
                    resolve.insert(canonical(from), canonical(to));
                }
            }
        }
        let mut by_title = BTreeMap::new();
        for page in v
            .pointer("/query/pages")
            .and_then(Value::as_array)
            .ok_or_else(|| malformed(&url, "query.pages"))?
        {
            if page.get("missing").is_some() || page.get("invalid").is_some() {
                continue;
            }
            let Some(t) = page.get("title").and_then(Value::as_str) else {
                continue;
            };
            by_title.insert(
                canonical(t),
                PageInfo {
                    length_bytes: page.get("length").and_then(Value::as_u64),
                    watchers: page.get("watchers").and_then(Value::as_u64),
                },
            );
        }
        for t in batch {
            let mut resolved = canonical(t);
            for _ in 0..2 {
                match resolve.get(&resolved) {
                    Some(next) => resolved = next.clone(),
                    None => break,
                }
            }
            if let Some(info) = by_title.get(&resolved) {
                out.insert(canonical(t), *info);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageRecord {
    pub title: String,
    pub views: Option<u64>,
    pub watchers: Option<u64>,
    pub length_bytes: Option<u64>,
    pub edits: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MetricsReport {
    /// One record per requested title, in request order.
    pub records: Vec<PageRecord>,
    /// `(title, error)` for every failed measurement.
    pub failures: Vec<(String, String)>,
}

/// Monthly views, length, watchers and edit counts for `titles`. Failures
/// leave the affected fields missing and are listed in the report.
pub fn fetch_metrics(client: &Client, endpoints: &Endpoints, titles: &[String], month: Month) -> MetricsReport {
    let titles: Vec<String> = titles.iter().map(|t| canonical(t)).collect();
    let mut failures = Vec::new();
    let info = match fetch_info(client, endpoints, &titles) {
        Ok(info) => info,
        Err(e) => {
            failures.push(("<page info>".to_string(), e.to_string()));
            BTreeMap::new()
        }
    };
    let per_title: Vec<(Result<u64>, Result<u64>)> = titles
        .par_iter()
        .map(|t| {
            (
                fetch_monthly_views(client, endpoints, t, month),
                fetch_edit_count(client, endpoints, t),
            )
        })
        .collect();
    let mut records = Vec::with_capacity(titles.len());
    for (t, (views, edits)) in titles.iter().zip(per_title) {
        let mut take = |r: Result<u64>, what: &str| match r {
            Ok(v) => Some(v),
            Err(e) => {
                failures.push((t.clone(), format!("{what}: {e}")));
                None
            }
        };
        let views = take(views, "views");
        let edits = take(edits, "edits");
        let page = info.get(t).copied().unwrap_or_default();
        records.push(PageRecord {
            title: t.clone(),
            views,
            watchers: page.watchers,
            length_bytes: page.length_bytes,
            edits,
        });
    }
    MetricsReport { records, failures }
}
