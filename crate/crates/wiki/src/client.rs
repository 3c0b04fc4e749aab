//! Cached, rate-limited, retrying access to the wiki endpoints.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::cache::{Cache, CacheEntry};
use crate::error::{Result, WikiError};
use crate::transport::{Offline, Request, Transport};

pub const DEFAULT_USER_AGENT: &str = concat!(
    "netcorr/",
    env!("CARGO_PKG_VERSION"),
    " (network autocorrelation research tool)"
);

#[derive(Debug, Clone)]
pub struct ClientConfig {
    /// Request ceiling per second across all threads; 0 disables limiting.
    pub rate_limit: f64,
    pub max_retries: u32,
    pub base_delay: Duration,
    pub max_delay: Duration,
    /// Seeds the backoff jitter.
    pub seed: u64,
}

impl Default for ClientConfig {
    fn default() -> Self {
        ClientConfig {
            rate_limit: 10.0,
            max_retries: 5,
            base_delay: Duration::from_millis(500),
            max_delay: Duration::from_secs(60),
            seed: 0,
        }
    }
}

/// Spaces request start times at least `1/rate` apart.
#[derive(Debug)]
pub struct RateLimiter {
    interval: Duration,
    next: Mutex<Option<Instant>>,
}

impl RateLimiter {
    pub fn new(rate: f64) -> Self {
        let interval = if rate > 0.0 && rate.is_finite() {
            Duration::from_secs_f64(1.0 / rate)
        } else {
            Duration::ZERO
        };
        RateLimiter {
            interval,
            next: Mutex::new(None),
        }
    }

    pub fn acquire(&self) {
        if self.interval.is_zero() {
            return;
        }
        let wait = {
            let mut next = self.next.lock().expect("rate limiter poisoned");
            let now = Instant::now();
            let slot = next.map_or(now, |n| n.max(now));
            *next = Some(slot + self.interval);
            slot - now
        };
        if !wait.is_zero() {
            std::thread::sleep(wait);
        }
    }
}

/// A successful (2xx) or not-found (404) response.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fetched {
    pub status: u16,
    pub body: String,
}

pub struct Client {
    transport: Box<dyn Transport>,
    cache: Option<Cache>,
    limiter: RateLimiter,
    config: ClientConfig,
    requests: AtomicUsize,
}

impl Client {
    pub fn new(transport: Box<dyn Transport>, cache: Option<Cache>, config: ClientConfig) -> Self {
        Client {
            limiter: RateLimiter::new(config.rate_limit),
            transport,
            cache,
            config,
            requests: AtomicUsize::new(0),
        }
    }

    /// Serves from `cache` only.
    pub fn offline(cache: Cache) -> Self {
        Self::new(Box::new(Offline), Some(cache), ClientConfig::default())
    }

    /// Requests handed to the transport so far, retries included.
    pub fn network_requests(&self) -> usize {
        self.requests.load(Ordering::Relaxed)
    }

    fn backoff(&self, request: &Request, attempt: u32) -> Duration {
        let key = Sha256::digest(request.canonical().as_bytes());
        let mut stream = [0u8; 8];
        stream.copy_from_slice(&key[..8]);
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        rng.set_stream(u64::from_le_bytes(stream));
        rng.set_word_pos(u128::from(attempt) * 16);
        let base = self.config.base_delay.saturating_mul(1 << attempt.min(16));
        let jitter = base.mul_f64(rng.random::<f64>());
        (base + jitter).min(self.config.max_delay)
    }

    pub fn fetch(&self, request: &Request) -> Result<Fetched> {
        if let Some(cache) = &self.cache {
            if let Some(entry) = cache.get(request)? {
                return Ok(Fetched {
                    status: entry.status,
                    body: entry.body,
                });
            }
        }
        let mut attempt = 0;
        loop {
            self.limiter.acquire();
            self.requests.fetch_add(1, Ordering::Relaxed);
            let outcome = self.transport.get(request);
            let retry_after = match outcome {
                Ok(resp) if (200..300).contains(&resp.status) || resp.status == 404 => {
                    if let Some(cache) = &self.cache {
                        cache.put(&CacheEntry {
                            key: request.canonical(),
                            status: resp.status,
                            fetched_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
                            body: resp.body.clone(),
                        })?;
                    }
                    return Ok(Fetched {
                        status: resp.status,
                        body: resp.body,
                    });
                }
                Ok(resp) if resp.status == 429 || resp.status >= 500 => {
                    if attempt >= self.config.max_retries {
                        return Err(WikiError::Http {
                            status: resp.status,
                            url: request.canonical(),
                        });
                    }
                    resp.retry_after
                }
                Ok(resp) => {
                    return Err(WikiError::Http {
                        status: resp.status,
                        url: request.canonical(),
                    })
                }
                Err(e @ WikiError::Offline(_)) => return Err(e),
                Err(e) => {
                    if attempt >= self.config.max_retries {
                        return Err(e);
                    }
                    None
                }
            };
            let delay = retry_after
                .map(|d| d.min(self.config.max_delay))
                .unwrap_or_else(|| self.backoff(request, attempt));
            log::info!("retrying {} in {:?}", request.canonical(), delay);
            std::thread::sleep(delay);
            attempt += 1;
        }
    }
}
