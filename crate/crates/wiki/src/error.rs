use thiserror::Error;

#[derive(Debug, Error)]
pub enum WikiError {
    #[error("page not found: {0}")]
    PageNotFound(String),
    #[error("HTTP {status} from {url}")]
    Http { status: u16, url: String },
    #[error("request to {url} failed: {message}")]
    Transport { url: String, message: String },
    #[error("offline and not cached: {0}")]
    Offline(String),
    #[error("unexpected response from {url}: {message}")]
    Response { url: String, message: String },
    #[error("cache error at {path}: {message}")]
    Cache { path: String, message: String },
    #[error("{failed} of {total} page fetches failed (limit 5%); last: {last}")]
    TooManyFailures { failed: usize, total: usize, last: String },
    #[error("invalid month {0:?}, expected YYYY-MM")]
    InvalidMonth(String),
    #[error(transparent)]
    Core(#[from] netcorr::Error),
}

pub type Result<T> = std::result::Result<T, WikiError>;
