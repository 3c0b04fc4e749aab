//! Requests and the network layer beneath the cache.

use std::collections::BTreeMap;
use std::io::Read;
use std::time::Duration;

use crate::error::{Result, WikiError};

/// A GET request: endpoint URL plus query parameters kept in key order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Request {
    pub endpoint: String,
    pub params: BTreeMap<String, String>,
}

impl Request {
    pub fn new(endpoint: impl Into<String>) -> Self {
        Request {
            endpoint: endpoint.into(),
            params: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.params.insert(key.into(), value.into());
        self
    }

    /// `endpoint?k1=v1&k2=v2` with keys sorted and values form-encoded.
    pub fn canonical(&self) -> String {
        if self.params.is_empty() {
            return self.endpoint.clone();
        }
        let query = url::form_urlencoded::Serializer::new(String::new())
            .extend_pairs(&self.params)
            .finish();
        format!("{}?{query}", self.endpoint)
    }

    pub fn url(&self) -> Result<String> {
        let url = url::Url::parse(&self.canonical()).map_err(|e| WikiError::Transport {
            url: self.endpoint.clone(),
            message: e.to_string(),
        })?;
        Ok(url.into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub status: u16,
    pub body: String,
    pub retry_after: Option<Duration>,
}

pub trait Transport: Send + Sync {
    fn get(&self, request: &Request) -> Result<Response>;
}

/// Refuses every request; used when only the cache may be consulted.
#[derive(Debug, Default, Clone, Copy)]
pub struct Offline;

impl Transport for Offline {
    fn get(&self, request: &Request) -> Result<Response> {
        Err(WikiError::Offline(request.canonical()))
    }
}

/// Blocking HTTPS client.
pub struct Http {
    agent: ureq::Agent,
}

impl Http {
    pub fn new(user_agent: &str, timeout: Duration) -> Self {
        let config = ureq::Agent::config_builder()
            .user_agent(user_agent)
            .timeout_global(Some(timeout))
            .http_status_as_error(false)
            .build();
        Http { agent: config.into() }
    }
}

fn parse_retry_after(value: &str) -> Option<Duration> {
    value.trim().parse::<u64>().ok().map(Duration::from_secs)
}

impl Transport for Http {
    fn get(&self, request: &Request) -> Result<Response> {
        let url = request.url()?;
        let err = |e: &dyn std::fmt::Display| WikiError::Transport {
            url: url.clone(),
            message: e.to_string(),
        };
        let mut resp = self.agent.get(&url).call().map_err(|e| err(&e))?;
        let status = resp.status().as_u16();
        let retry_after = resp
            .headers()
            .get("retry-after")
            .and_then(|v| v.to_str().ok())
            .and_then(parse_retry_after);
        let mut body = String::new();
        resp.body_mut()
            .as_reader()
            .read_to_string(&mut body)
            .map_err(|e| err(&e))?;
        Ok(Response {
            status,
            body,
            retry_after,
        })
    }
}
