use std::sync::Mutex;
use std::time::Duration;

use chrono::{DateTime, TimeZone, Utc};
use issuescope_core::model::Timestamp;

use crate::transport::Response;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RateLimitState {
    pub remaining: u64,
    pub reset_at: Timestamp,
}

impl RateLimitState {
    /// Reads `X-RateLimit-Remaining` / `X-RateLimit-Reset` (epoch seconds).
    /// `response_time` is the response's `Date`, or the local clock when
    /// absent; `reset_at` is clamped so it never precedes it.
    pub fn from_response(resp: &Response, fallback_now: Timestamp) -> Option<Self> {
        let remaining = resp.header("x-ratelimit-remaining")?.trim().parse().ok()?;
        let response_time = resp
            .header("date")
            .and_then(|d| DateTime::parse_from_rfc2822(d).ok())
            .map(|d| d.with_timezone(&Utc))
            .unwrap_or(fallback_now);
        let reset_at = resp
            .header("x-ratelimit-reset")
            .and_then(|r| r.trim().parse::<i64>().ok())
            .and_then(|secs| Utc.timestamp_opt(secs, 0).single())
            .unwrap_or(response_time)
            .max(response_time);
        Some(RateLimitState { remaining, reset_at })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RateLimitPolicy {
    /// Sleep until the window resets.
    #[default]
    Wait,
    /// Give up with `RateLimited`.
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Proceed,
    Sleep(Duration),
    Abort { reset_at: Timestamp },
}

pub fn respect_rate_limit(state: &RateLimitState, policy: RateLimitPolicy, now: Timestamp) -> Decision {
    if state.remaining > 0 {
        return Decision::Proceed;
    }
    match policy {
        RateLimitPolicy::Fail => Decision::Abort { reset_at: state.reset_at },
        RateLimitPolicy::Wait => {
            let wait = (state.reset_at - now).to_std().unwrap_or(Duration::ZERO);
            Decision::Sleep(wait)
        }
    }
}

/// Source of "now" and of blocking waits, replaceable in tests.
pub trait Clock: Send + Sync {
    fn now(&self) -> Timestamp;
    fn sleep(&self, d: Duration);
}

#[derive(Debug, Default, Clone, Copy)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> Timestamp {
        Utc::now()
    }

    fn sleep(&self, d: Duration) {
        std::thread::sleep(d);
    }
}

/// A clock that only moves when slept on, and remembers every sleep.
#[derive(Debug)]
pub struct ManualClock {
    now: Mutex<Timestamp>,
    sleeps: Mutex<Vec<Duration>>,
}

impl ManualClock {
    pub fn new(start: Timestamp) -> Self {
        ManualClock { now: Mutex::new(start), sleeps: Mutex::new(Vec::new()) }
    }

    pub fn sleeps(&self) -> Vec<Duration> {
        self.sleeps.lock().unwrap().clone()
    }
}

impl Clock for ManualClock {
    fn now(&self) -> Timestamp {
        *self.now.lock().unwrap()
    }

    fn sleep(&self, d: Duration) {
        self.sleeps.lock().unwrap().push(d);
        let mut now = self.now.lock().unwrap();
        *now += chrono::Duration::from_std(d).expect("sleep fits in chrono range");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use issuescope_core::model::parse_timestamp;
    use std::collections::BTreeMap;

    fn ts(s: &str) -> Timestamp {
        parse_timestamp(s).unwrap()
    }

    fn state(remaining: u64, reset: &str) -> RateLimitState {
        RateLimitState { remaining, reset_at: ts(reset) }
    }

    #[test]
    fn budget_left_proceeds() {
        let d = respect_rate_limit(&state(10, "2023-06-18T12:00:00Z"), RateLimitPolicy::Fail, ts("2023-06-18T11:00:00Z"));
        assert_eq!(d, Decision::Proceed);
    }

    #[test]
    fn exhausted_with_fail_aborts() {
        let s = state(0, "2023-06-18T12:00:00Z");
        assert_eq!(
            respect_rate_limit(&s, RateLimitPolicy::Fail, ts("2023-06-18T11:59:00Z")),
            Decision::Abort { reset_at: s.reset_at }
        );
    }

    #[test]
    fn exhausted_with_wait_sleeps_until_reset() {
        let resp = Response {
            status: 403,
            headers: BTreeMap::from([
                ("x-ratelimit-remaining".into(), "0".into()),
                ("x-ratelimit-reset".into(), ts("2023-06-18T12:01:30Z").timestamp().to_string()),
                ("date".into(), "Sun, 18 Jun 2023 12:00:00 GMT".into()),
            ]),
            body: vec![],
        };
        let s = RateLimitState::from_response(&resp, ts("2000-01-01T00:00:00Z")).unwrap();
        let d = respect_rate_limit(&s, RateLimitPolicy::Wait, ts("2023-06-18T12:00:00Z"));
        assert_eq!(d, Decision::Sleep(Duration::from_secs(90)));
        // A local clock running two seconds fast shortens the wait by as much.
        let skewed = respect_rate_limit(&s, RateLimitPolicy::Wait, ts("2023-06-18T12:00:02Z"));
        assert_eq!(skewed, Decision::Sleep(Duration::from_secs(88)));
    }

    #[test]
    fn reset_never_before_response_time() {
        let resp = Response {
            status: 200,
            headers: BTreeMap::from([
                ("x-ratelimit-remaining".into(), "0".into()),
                ("x-ratelimit-reset".into(), "0".into()),
                ("date".into(), "Sun, 18 Jun 2023 12:00:00 GMT".into()),
            ]),
            body: vec![],
        };
        let s = RateLimitState::from_response(&resp, ts("2000-01-01T00:00:00Z")).unwrap();
        assert_eq!(s.reset_at, ts("2023-06-18T12:00:00Z"));
        let past = respect_rate_limit(&s, RateLimitPolicy::Wait, ts("2023-06-18T12:05:00Z"));
        assert_eq!(past, Decision::Sleep(Duration::ZERO));
    }

    #[test]
    fn missing_headers_mean_no_state() {
        let resp = Response { status: 200, headers: BTreeMap::new(), body: vec![] };
        assert_eq!(RateLimitState::from_response(&resp, Utc::now()), None);
    }
}
