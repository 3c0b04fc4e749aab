//! Builds link networks and page metrics from a MediaWiki site, with an
//! on-disk cache so every analysis can be rerun offline.

pub mod api;
pub mod cache;
pub mod client;
pub mod ego;
pub mod error;
pub mod title;
pub mod transport;

pub use api::{fetch_metrics, fetch_outlinks, Endpoints, MetricsReport, Month, PageRecord};
pub use cache::{Cache, CacheEntry};
pub use client::{Client, ClientConfig, DEFAULT_USER_AGENT};
pub use ego::{build_ego_minus_ego, EgoNetwork};
pub use error::{Result, WikiError};
pub use transport::{Http, Offline, Request, Response, Transport};
