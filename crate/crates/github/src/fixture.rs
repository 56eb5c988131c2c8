//! Offline transports: replay of recorded responses, and an instrumented
//! wrapper that measures request concurrency.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::transport::{Request, Response, Transport, TransportError};

/// One recorded exchange. Files hold a JSON array of these.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recorded {
    #[serde(default = "get")]
    pub method: String,
    pub path: String,
    #[serde(default = "first_page")]
    pub page: u32,
    #[serde(default = "ok")]
    pub status: u16,
    #[serde(default)]
    pub headers: BTreeMap<String, String>,
    pub body: serde_json::Value,
}

fn get() -> String {
    "GET".into()
}

fn first_page() -> u32 {
    1
}

fn ok() -> u16 {
    200
}

type Key = (String, String, u32);

/// Serves recorded responses keyed by (method, path, page). Unknown keys get
/// a 404 with GitHub's error body.
#[derive(Debug, Default)]
pub struct FixtureTransport {
    routes: HashMap<Key, Response>,
    /// Keys that fail at the transport level, with the number of failures
    /// left before the recorded response is served.
    failures: Mutex<HashMap<Key, usize>>,
    log: Mutex<Vec<Key>>,
}

impl FixtureTransport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Loads every `*.json` file in `dir`, in file-name order.
    pub fn load(dir: &Path) -> std::io::Result<Self> {
        let mut files: Vec<_> = std::fs::read_dir(dir)?
            .filter_map(Result::ok)
            .map(|e| e.path())
            .filter(|p| p.extension().is_some_and(|e| e == "json"))
            .collect();
        files.sort();
        let mut t = Self::new();
        for path in files {
            let text = std::fs::read_to_string(&path)?;
            let entries: Vec<Recorded> = serde_json::from_str(&text).map_err(|e| {
                std::io::Error::new(std::io::ErrorKind::InvalidData, format!("{}: {e}", path.display()))
            })?;
            for r in entries {
                t.insert(r);
            }
        }
        Ok(t)
    }

    pub fn insert(&mut self, r: Recorded) {
        let headers = r.headers.into_iter().map(|(k, v)| (k.to_ascii_lowercase(), v)).collect();
        let body = serde_json::to_vec(&r.body).expect("json value serializes");
        self.routes.insert((r.method, r.path, r.page), Response { status: r.status, headers, body });
    }

    /// Convenience for a 200 JSON response.
    pub fn route(&mut self, path: &str, page: u32, body: serde_json::Value) {
        self.insert(Recorded {
            method: get(),
            path: path.into(),
            page,
            status: 200,
            headers: BTreeMap::new(),
            body,
        });
    }

    /// Makes the next `times` requests for this key fail before any response.
    pub fn fail_times(&self, path: &str, page: u32, times: usize) {
        self.failures.lock().unwrap().insert((get(), path.into(), page), times);
    }

    /// Every request served so far as (path, page), in arrival order.
    pub fn requests(&self) -> Vec<(String, u32)> {
        self.log.lock().unwrap().iter().map(|(_, p, n)| (p.clone(), *n)).collect()
    }
}

impl Transport for FixtureTransport {
    fn send(&self, req: &Request) -> Result<Response, TransportError> {
        let key = (req.method().to_string(), req.path.clone(), req.page());
        self.log.lock().unwrap().push(key.clone());
        if let Some(left) = self.failures.lock().unwrap().get_mut(&key) {
            if *left > 0 {
                *left -= 1;
                return Err(TransportError(format!("connection reset on {}", req.path)));
            }
        }
        Ok(self.routes.get(&key).cloned().unwrap_or_else(|| Response {
            status: 404,
            headers: BTreeMap::new(),
            body: br#"{"message":"Not Found"}"#.to_vec(),
        }))
    }
}

/// Wraps a transport and records the peak number of concurrent requests.
pub struct CountingTransport<T> {
    inner: T,
    delay: Duration,
    current: AtomicUsize,
    peak: AtomicUsize,
    total: AtomicUsize,
}

impl<T> CountingTransport<T> {
    /// `delay` is held inside each request so overlapping calls are visible.
    pub fn new(inner: T, delay: Duration) -> Self {
        CountingTransport {
            inner,
            delay,
            current: AtomicUsize::new(0),
            peak: AtomicUsize::new(0),
            total: AtomicUsize::new(0),
        }
    }

    pub fn peak(&self) -> usize {
        self.peak.load(Ordering::SeqCst)
    }

    pub fn total(&self) -> usize {
        self.total.load(Ordering::SeqCst)
    }

    pub fn inner(&self) -> &T {
        &self.inner
    }
}

impl<T: Transport> Transport for CountingTransport<T> {
    fn send(&self, req: &Request) -> Result<Response, TransportError> {
        let now = self.current.fetch_add(1, Ordering::SeqCst) + 1;
        self.peak.fetch_max(now, Ordering::SeqCst);
        self.total.fetch_add(1, Ordering::SeqCst);
        std::thread::sleep(self.delay);
        let out = self.inner.send(req);
        self.current.fetch_sub(1, Ordering::SeqCst);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keyed_by_path_and_page() {
        let mut t = FixtureTransport::new();
        t.route("/a", 1, json!([1]));
        t.route("/a", 2, json!([2]));
        let page2 = t.send(&Request::get("/a").param("page", 2)).unwrap();
        assert_eq!(page2.body, b"[2]");
        let page1 = t.send(&Request::get("/a")).unwrap();
        assert_eq!(page1.body, b"[1]");
        assert_eq!(t.send(&Request::get("/b")).unwrap().status, 404);
        assert_eq!(t.requests(), vec![("/a".into(), 2), ("/a".into(), 1), ("/b".into(), 1)]);
    }

    #[test]
    fn injected_failures_run_out() {
        let mut t = FixtureTransport::new();
        t.route("/a", 1, json!({}));
        t.fail_times("/a", 1, 2);
        assert!(t.send(&Request::get("/a")).is_err());
        assert!(t.send(&Request::get("/a")).is_err());
        assert_eq!(t.send(&Request::get("/a")).unwrap().status, 200);
    }

    #[test]
    fn loads_recordings_from_dir() {
        let tmp = tempfile::tempdir().unwrap();
        let dir = tmp.path();
        std::fs::write(
            dir.join("one.json"),
            r#"[{"path": "/x", "page": 3, "headers": {"X-RateLimit-Remaining": "5"}, "body": {"ok": true}}]"#,
        )
        .unwrap();
        std::fs::write(dir.join("ignored.txt"), "not json").unwrap();
        let t = FixtureTransport::load(dir).unwrap();
        let r = t.send(&Request::get("/x").param("page", 3)).unwrap();
        assert_eq!(r.header("x-ratelimit-remaining"), Some("5"));
    }
}
