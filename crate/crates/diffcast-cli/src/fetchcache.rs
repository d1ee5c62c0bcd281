//! Content-addressed download cache with conditional revalidation.
//!
//! Each URL maps to `sha256(url).bin` plus a `.meta.json` sidecar holding
//! the validators (ETag, Last-Modified) and the body digest. A second fetch
//! of an unchanged URL costs one conditional request answered with 304. A
//! *transport* failure (DNS, connect, timeout, socket read) falls back to
//! the cached copy when one exists; an HTTP error status never does, so a
//! resource deliberately removed upstream is not resurrected from cache.
//! Cache writes go through a temp file and rename, and a body shorter or
//! longer than the announced Content-Length is rejected before anything is
//! written, so interrupted downloads cannot pollute the cache.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::sha256_hex;

/// Upper bound on accepted body size, applied while streaming.
pub const BODY_LIMIT: u64 = 64 * 1024 * 1024;

/// Sidecar metadata for one cached URL.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheMeta {
    pub url: String,
    pub etag: Option<String>,
    pub last_modified: Option<String>,
    pub content_length: Option<u64>,
    pub body_sha256: String,
}

/// Where the returned bytes came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    /// Fresh download.
    Network,
    /// Server answered 304; the cached copy is current.
    Revalidated,
    /// Transport failure; the cached copy was served as-is.
    Stale { transport_error: String },
}

#[derive(Debug)]
pub struct Fetched {
    /// Path of the cached body file.
    pub path: PathBuf,
    pub bytes: Vec<u8>,
    pub source: Source,
}

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("invalid url {url:?}: {detail}")]
    BadUrl { url: String, detail: String },
    #[error("http status {status} fetching {url}")]
    Status { url: String, status: u16 },
    #[error("{detail} fetching {url} (no usable cached copy)")]
    Transport { url: String, detail: String },
    #[error(
        "truncated or padded download from {url}: content-length said {expected} bytes, \
         body had {got}; cache left untouched"
    )]
    Integrity { url: String, expected: u64, got: u64 },
    #[error("response body exceeds the {limit}-byte limit")]
    TooLarge { limit: u64 },
    #[error("cache i/o under {dir}: {source}")]
    CacheIo { dir: PathBuf, source: std::io::Error },
}

/// Paths of the body and metadata files for a URL.
pub fn cache_paths(cache_dir: &Path, url: &str) -> (PathBuf, PathBuf) {
    let key = sha256_hex(url.as_bytes());
    (cache_dir.join(format!("{key}.bin")), cache_dir.join(format!("{key}.meta.json")))
}

fn load_cache(cache_dir: &Path, url: &str) -> Option<(CacheMeta, Vec<u8>)> {
    let (body_path, meta_path) = cache_paths(cache_dir, url);
    let meta: CacheMeta = serde_json::from_slice(&std::fs::read(meta_path).ok()?).ok()?;
    if meta.url != url {
        return None;
    }
    let bytes = std::fs::read(body_path).ok()?;
    if sha256_hex(&bytes) != meta.body_sha256 {
        return None;
    }
    Some((meta, bytes))
}

fn write_atomic(dir: &Path, path: &Path, bytes: &[u8]) -> Result<(), FetchError> {
    let io_err = |source| FetchError::CacheIo { dir: dir.to_path_buf(), source };
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    std::fs::write(&tmp, bytes).map_err(io_err)?;
    std::fs::rename(&tmp, path).map_err(io_err)
}

fn header<'r>(resp: &'r ureq::http::Response<ureq::Body>, name: &str) -> Option<&'r str> {
    resp.headers().get(name).and_then(|v| v.to_str().ok())
}

/// One human-readable phrase naming the transport failure class.
fn classify_transport(e: &ureq::Error) -> String {
    match e {
        ureq::Error::HostNotFound => "dns resolution failed".to_string(),
        ureq::Error::Timeout(t) => format!("timed out ({t})"),
        ureq::Error::Io(io) => format!("socket i/o failed ({io})"),
        ureq::Error::ConnectionFailed => "connection failed".to_string(),
        other => format!("transport failed ({other})"),
    }
}

/// Fetches `url` through the cache under `cache_dir`.
pub fn fetch(agent: &ureq::Agent, url: &str, cache_dir: &Path) -> Result<Fetched, FetchError> {
    std::fs::create_dir_all(cache_dir)
        .map_err(|source| FetchError::CacheIo { dir: cache_dir.to_path_buf(), source })?;
    let (body_path, meta_path) = cache_paths(cache_dir, url);
    let cached = load_cache(cache_dir, url);

    let mut request = agent.get(url);
    if let Some((meta, _)) = &cached {
        if let Some(etag) = &meta.etag {
            request = request.header("if-none-match", etag);
        }
        if let Some(lm) = &meta.last_modified {
            request = request.header("if-modified-since", lm);
        }
    }

    let mut response = match request.call() {
        Ok(response) => response,
        Err(ureq::Error::StatusCode(status)) => {
            return Err(FetchError::Status { url: url.into(), status });
        }
        Err(ureq::Error::BadUri(detail)) => {
            return Err(FetchError::BadUrl { url: url.into(), detail });
        }
        Err(ureq::Error::Http(e)) => {
            return Err(FetchError::BadUrl { url: url.into(), detail: e.to_string() });
        }
        Err(transport) => {
            let detail = classify_transport(&transport);
            return match cached {
                Some((_, bytes)) => Ok(Fetched {
                    path: body_path,
                    bytes,
                    source: Source::Stale { transport_error: detail },
                }),
                None => Err(FetchError::Transport { url: url.into(), detail }),
            };
        }
    };

    if response.status() == ureq::http::StatusCode::NOT_MODIFIED {
        if let Some((_, bytes)) = cached {
            return Ok(Fetched { path: body_path, bytes, source: Source::Revalidated });
        }
        // A 304 without having sent validators is a server defect; surface
        // it as the status it is.
        return Err(FetchError::Status { url: url.into(), status: 304 });
    }
    if !response.status().is_success() {
        return Err(FetchError::Status { url: url.into(), status: response.status().as_u16() });
    }

    let expected_len = header(&response, "content-length").and_then(|v| v.parse::<u64>().ok());
    // When the transfer is content-encoded the header describes the wire
    // bytes, not the decoded body, so the length check only applies to
    // identity transfers.
    let encoded = header(&response, "content-encoding").is_some_and(|v| v != "identity");
    let etag = header(&response, "etag").map(str::to_string);
    let last_modified = header(&response, "last-modified").map(str::to_string);

    let bytes = match response.body_mut().with_config().limit(BODY_LIMIT).read_to_vec() {
        Ok(bytes) => bytes,
        Err(ureq::Error::BodyExceedsLimit(limit)) => {
            return Err(FetchError::TooLarge { limit });
        }
        Err(transport) => {
            let detail = classify_transport(&transport);
            return match cached {
                Some((_, bytes)) => Ok(Fetched {
                    path: body_path,
                    bytes,
                    source: Source::Stale { transport_error: detail },
                }),
                None => Err(FetchError::Transport { url: url.into(), detail }),
            };
        }
    };

    if let Some(expected) = expected_len {
        if !encoded && expected != bytes.len() as u64 {
            return Err(FetchError::Integrity {
                url: url.into(),
                expected,
                got: bytes.len() as u64,
            });
        }
    }

    let meta = CacheMeta {
        url: url.to_string(),
        etag,
        last_modified,
        content_length: expected_len,
        body_sha256: sha256_hex(&bytes),
    };
    write_atomic(cache_dir, &body_path, &bytes)?;
    let meta_json = serde_json::to_vec_pretty(&meta).expect("meta serializes");
    write_atomic(cache_dir, &meta_path, &meta_json)?;
    Ok(Fetched { path: body_path, bytes, source: Source::Network })
}
