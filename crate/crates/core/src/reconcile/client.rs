//! HTTP clients for the W3C Reconciliation API and VIAF AutoSuggest.
//!
//! Network access goes through [`Transport`] so that tests can replay
//! recorded responses.

use std::collections::{BTreeSet, HashMap};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use super::{sort_links, AuthorityLink, AuthoritySource, EntityKind, ReconcileError};
use crate::normalize::{slugify, Coordinates};

#[derive(Debug, Error)]
pub enum TransportError {
    #[error("request to {url} timed out")]
    Timeout { url: String },
    #[error("{url} answered with status {status}")]
    Status { url: String, status: u16 },
    #[error("request to {url} failed: {reason}")]
    Other { url: String, reason: String },
}

pub trait Transport: Send + Sync {
    fn get(&self, url: &str, query: &[(&str, &str)]) -> Result<String, TransportError>;
    fn post_form(&self, url: &str, form: &[(&str, &str)]) -> Result<String, TransportError>;
}

pub struct UreqTransport {
    agent: ureq::Agent,
}

impl UreqTransport {
    pub fn new(timeout: Duration) -> Self {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .build()
            .into();
        UreqTransport { agent }
    }

    fn map_err(url: &str, e: ureq::Error) -> TransportError {
        match e {
            ureq::Error::StatusCode(status) => TransportError::Status {
                url: url.to_string(),
                status,
            },
            ureq::Error::Timeout(_) => TransportError::Timeout {
                url: url.to_string(),
            },
            other => TransportError::Other {
                url: url.to_string(),
                reason: other.to_string(),
            },
        }
    }
}

impl Transport for UreqTransport {
    fn get(&self, url: &str, query: &[(&str, &str)]) -> Result<String, TransportError> {
        let mut req = self.agent.get(url);
        for (k, v) in query {
            req = req.query(*k, *v);
        }
        req.call()
            .and_then(|mut r| r.body_mut().read_to_string())
            .map_err(|e| Self::map_err(url, e))
    }

    fn post_form(&self, url: &str, form: &[(&str, &str)]) -> Result<String, TransportError> {
        self.agent
            .post(url)
            .send_form(form.iter().copied())
            .and_then(|mut r| r.body_mut().read_to_string())
            .map_err(|e| Self::map_err(url, e))
    }
}

/// Spaces out requests to the same host.
struct RateLimiter {
    min_interval: Duration,
    next_slot: Mutex<HashMap<String, Instant>>,
}

impl RateLimiter {
    fn new(min_interval: Duration) -> Self {
        RateLimiter {
            min_interval,
            next_slot: Mutex::new(HashMap::new()),
        }
    }

    fn wait(&self, url: &str) {
        let host = host_of(url).to_string();
        let slot = {
            let mut slots = self.next_slot.lock().unwrap_or_else(|e| e.into_inner());
            let now = Instant::now();
            let slot = slots.get(&host).map_or(now, |&s| s.max(now));
            slots.insert(host, slot + self.min_interval);
            slot
        };
        let now = Instant::now();
        if slot > now {
            std::thread::sleep(slot - now);
        }
    }
}

fn host_of(url: &str) -> &str {
    let rest = url.split_once("://").map_or(url, |(_, r)| r);
    rest.split(['/', '?']).next().unwrap_or(rest)
}

fn tokens(s: &str) -> BTreeSet<String> {
    slugify(s)
        .map(|slug| slug.split('-').map(str::to_string).collect())
        .unwrap_or_default()
}

/// Token Jaccard similarity of two labels, in [0, 1].
pub(crate) fn label_similarity(a: &str, b: &str) -> f64 {
    let (a, b) = (tokens(a), tokens(b));
    let union = a.union(&b).count();
    if union == 0 {
        return 0.0;
    }
    a.intersection(&b).count() as f64 / union as f64
}

fn bad_response(service: &str, reason: impl ToString) -> ReconcileError {
    ReconcileError::Response {
        service: service.to_string(),
        reason: reason.to_string(),
    }
}

/// Client for a W3C Reconciliation API endpoint backed by Wikidata.
pub struct ReconciliationClient {
    url: String,
    limit: usize,
}

#[derive(Deserialize)]
struct ReconCandidate {
    id: String,
    name: String,
    #[serde(default)]
    score: f64,
    #[serde(default, rename = "match")]
    is_match: bool,
}

impl ReconciliationClient {
    pub fn new(url: impl Into<String>) -> Self {
        ReconciliationClient {
            url: url.into(),
            limit: 5,
        }
    }

    fn type_constraint(kind: EntityKind) -> &'static str {
        match kind {
            EntityKind::Person => "Q5",
            EntityKind::Work => "Q17537576",
            EntityKind::Place => "Q17334923",
        }
    }

    pub fn query(
        &self,
        transport: &dyn Transport,
        limiter: Option<&RateLimiterHandle>,
        kind: EntityKind,
        label: &str,
    ) -> Result<Vec<AuthorityLink>, ReconcileError> {
        let queries = json!({
            "q0": { "query": label, "type": Self::type_constraint(kind), "limit": self.limit }
        })
        .to_string();
        if let Some(l) = limiter {
            l.0.wait(&self.url);
        }
        let body = transport.post_form(&self.url, &[("queries", &queries)])?;
        let mut links = parse_recon_response(&body)?;
        if kind == EntityKind::Place && !links.is_empty() {
            let ids: Vec<&str> = links.iter().map(|l| l.external_id.as_str()).collect();
            let extend = json!({
                "ids": ids,
                "properties": [{ "id": "P625" }, { "id": "P17" }]
            })
            .to_string();
            if let Some(l) = limiter {
                l.0.wait(&self.url);
            }
            let body = transport.post_form(&self.url, &[("extend", &extend)])?;
            apply_extend_response(&body, &mut links)?;
        }
        Ok(links)
    }
}

fn parse_recon_response(body: &str) -> Result<Vec<AuthorityLink>, ReconcileError> {
    let value: Value = serde_json::from_str(body).map_err(|e| bad_response("reconciliation", e))?;
    let result = value
        .get("q0")
        .and_then(|q| q.get("result"))
        .ok_or_else(|| bad_response("reconciliation", "missing q0.result"))?;
    let candidates: Vec<ReconCandidate> =
        serde_json::from_value(result.clone()).map_err(|e| bad_response("reconciliation", e))?;
    let mut links: Vec<AuthorityLink> = candidates
        .into_iter()
        .map(|c| {
            // Wikidata scores run 0..100.
            let mut score = (c.score / 100.0).clamp(0.0, 1.0);
            if c.is_match {
                score = 1.0;
            }
            AuthorityLink {
                source: AuthoritySource::Wikidata,
                external_id: c.id,
                controlled_label: c.name,
                coordinates: None,
                country: None,
                score,
            }
        })
        .collect();
    sort_links(&mut links);
    Ok(links)
}

fn apply_extend_response(body: &str, links: &mut [AuthorityLink]) -> Result<(), ReconcileError> {
    let value: Value = serde_json::from_str(body).map_err(|e| bad_response("extend", e))?;
    let rows = value
        .get("rows")
        .and_then(Value::as_object)
        .ok_or_else(|| bad_response("extend", "missing rows"))?;
    for link in links.iter_mut() {
        let Some(row) = rows.get(&link.external_id) else {
            continue;
        };
        let coords = row
            .get("P625")
            .and_then(Value::as_array)
            .and_then(|v| v.first())
            .and_then(|v| v.get("str"))
            .and_then(Value::as_str);
        if let Some(text) = coords {
            match Coordinates::parse(text) {
                Ok(c) => link.coordinates = Some(c),
                Err(e) => log::warn!("ignoring coordinates of {}: {e}", link.external_id),
            }
        }
        link.country = row
            .get("P17")
            .and_then(Value::as_array)
            .and_then(|v| v.first())
            .and_then(|v| v.get("name"))
            .and_then(Value::as_str)
            .map(str::to_string);
    }
    Ok(())
}

/// Client for the VIAF AutoSuggest endpoint.
pub struct ViafClient {
    url: String,
}

#[derive(Deserialize)]
struct ViafResponse {
    #[serde(default)]
    result: Option<Vec<ViafHit>>,
}

#[derive(Deserialize)]
struct ViafHit {
    term: String,
    #[serde(default)]
    nametype: String,
    viafid: String,
}

impl ViafClient {
    pub fn new(url: impl Into<String>) -> Self {
        ViafClient { url: url.into() }
    }

    fn accepts(kind: EntityKind, nametype: &str) -> bool {
        match kind {
            EntityKind::Person => nametype == "personal",
            EntityKind::Work => nametype.starts_with("uniformtitle"),
            EntityKind::Place => nametype == "geographic",
        }
    }

    pub fn autosuggest(
        &self,
        transport: &dyn Transport,
        limiter: Option<&RateLimiterHandle>,
        kind: EntityKind,
        label: &str,
    ) -> Result<Vec<AuthorityLink>, ReconcileError> {
        if let Some(l) = limiter {
            l.0.wait(&self.url);
        }
        let body = transport.get(&self.url, &[("query", label)])?;
        let mut links = parse_viaf_response(&body, kind, label)?;
        sort_links(&mut links);
        Ok(links)
    }
}

fn parse_viaf_response(
    body: &str,
    kind: EntityKind,
    label: &str,
) -> Result<Vec<AuthorityLink>, ReconcileError> {
    let parsed: ViafResponse = serde_json::from_str(body).map_err(|e| bad_response("VIAF", e))?;
    let mut seen = BTreeSet::new();
    Ok(parsed
        .result
        .unwrap_or_default()
        .into_iter()
        .filter(|h| ViafClient::accepts(kind, &h.nametype))
        .filter(|h| seen.insert(h.viafid.clone()))
        .map(|h| AuthorityLink {
            source: AuthoritySource::Viaf,
            score: label_similarity(label, &h.term),
            external_id: h.viafid,
            controlled_label: h.term,
            coordinates: None,
            country: None,
        })
        .collect())
}

/// Opaque handle so the clients can share one limiter.
pub struct RateLimiterHandle(RateLimiter);

#[derive(Debug, Clone, PartialEq, Deserialize, serde::Serialize)]
#[serde(default)]
pub struct OnlineConfig {
    pub recon_url: Option<String>,
    pub viaf_url: Option<String>,
    pub timeout_ms: u64,
    pub max_concurrent: usize,
    pub min_interval_ms: u64,
}

impl Default for OnlineConfig {
    fn default() -> Self {
        OnlineConfig {
            recon_url: Some("https://wikidata.reconci.link/en/api".to_string()),
            viaf_url: Some("https://viaf.org/viaf/AutoSuggest".to_string()),
            timeout_ms: 10_000,
            max_concurrent: 4,
            min_interval_ms: 250,
        }
    }
}

type LookupResult = ((EntityKind, String), Result<Vec<AuthorityLink>, ReconcileError>);

/// Runs lookups against every configured service with bounded
/// concurrency and per-host rate limiting.
pub struct OnlineResolver {
    transport: Box<dyn Transport>,
    recon: Option<ReconciliationClient>,
    viaf: Option<ViafClient>,
    max_concurrent: usize,
    limiter: RateLimiterHandle,
}

impl OnlineResolver {
    pub fn new(config: &OnlineConfig, transport: Box<dyn Transport>) -> Self {
        OnlineResolver {
            transport,
            recon: config.recon_url.as_deref().map(ReconciliationClient::new),
            viaf: config.viaf_url.as_deref().map(ViafClient::new),
            max_concurrent: config.max_concurrent.max(1),
            limiter: RateLimiterHandle(RateLimiter::new(Duration::from_millis(
                config.min_interval_ms,
            ))),
        }
    }

    pub fn with_ureq(config: &OnlineConfig) -> Self {
        let transport = UreqTransport::new(Duration::from_millis(config.timeout_ms));
        OnlineResolver::new(config, Box::new(transport))
    }

    /// Candidates from all services. Fails only when every service fails.
    pub fn lookup(&self, kind: EntityKind, label: &str) -> Result<Vec<AuthorityLink>, ReconcileError> {
        let mut links = Vec::new();
        let mut first_err = None;
        let mut attempted = 0;
        if let Some(recon) = &self.recon {
            attempted += 1;
            match recon.query(self.transport.as_ref(), Some(&self.limiter), kind, label) {
                Ok(l) => links.extend(l),
                Err(e) => first_err = Some(e),
            }
        }
        if let Some(viaf) = &self.viaf {
            if kind != EntityKind::Place {
                attempted += 1;
                match viaf.autosuggest(self.transport.as_ref(), Some(&self.limiter), kind, label) {
                    Ok(l) => links.extend(l),
                    Err(e) => {
                        if let Some(prev) = &first_err {
                            log::warn!("{prev}");
                        }
                        first_err = Some(e);
                    }
                }
            }
        }
        match first_err {
            Some(e) if links.is_empty() && attempted > 0 => Err(e),
            Some(e) => {
                log::warn!("partial reconciliation for {label:?}: {e}");
                sort_links(&mut links);
                Ok(links)
            }
            None => {
                sort_links(&mut links);
                Ok(links)
            }
        }
    }

    /// Results come back in query order.
    pub fn lookup_many(&self, queries: &[(EntityKind, String)]) -> Vec<LookupResult> {
        let next = AtomicUsize::new(0);
        let results: Mutex<Vec<Option<LookupResult>>> =
            Mutex::new((0..queries.len()).map(|_| None).collect());
        std::thread::scope(|scope| {
            for _ in 0..self.max_concurrent.min(queries.len()) {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    let Some((kind, label)) = queries.get(i) else {
                        break;
                    };
                    let result = self.lookup(*kind, label);
                    let mut guard = results.lock().unwrap_or_else(|e| e.into_inner());
                    guard[i] = Some(((*kind, label.clone()), result));
                });
            }
        });
        results
            .into_inner()
            .unwrap_or_else(|e| e.into_inner())
            .into_iter()
            .flatten()
            .collect()
    }
}
