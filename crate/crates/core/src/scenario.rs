//! Slice-type catalog and randomized network scenarios.
//!
//! A scenario fixes which of the five slice positions are active, which slice
//! type occupies each active position, and how many UEs each slice serves.
//! Scenarios are pure functions of `(seed, catalog, bounds)`.

use std::fs;
use std::path::Path;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::{rng, MAX_SLICES, MAX_UES};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("catalog parse error: {0}")]
    Syntax(String),
    #[error("catalog row {row} ({name}), field `{field}`: {message}")]
    Row {
        row: usize,
        name: String,
        field: String,
        message: String,
    },
    #[error("reliability {0}% outside (0, 100)")]
    Reliability(f64),
    #[error("invalid scenario bounds: {0}")]
    Bounds(String),
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("manifest error: {0}")]
    Manifest(String),
}

/// One slice type: its intent triple, priority and traffic/buffer parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceSpec {
    pub name: String,
    pub high_priority: bool,
    /// Effective-throughput requirement in Mbps.
    #[serde(default)]
    pub thr_req: Option<f64>,
    /// Buffer-latency requirement in ms.
    #[serde(default)]
    pub lat_req: Option<f64>,
    /// Reliability requirement as a percentage, e.g. 99.999.
    #[serde(default)]
    pub rel_req: Option<f64>,
    /// UE buffer capacity in packets.
    pub buffer_capacity: u64,
    /// Maximum time a packet may wait, in ms (= TTIs).
    pub max_buffer_latency: u32,
    /// Packet size in bits.
    pub packet_size: u32,
    /// UE speed in km/h.
    pub speed: f64,
    /// Mean requested traffic per UE in Mbps.
    pub traffic_mean: f64,
    pub ue_min: usize,
    pub ue_max: usize,
}

/// Which intents a slice carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IntentFlags {
    pub thr: bool,
    pub lat: bool,
    pub loss: bool,
}

impl SliceSpec {
    #[allow(clippy::too_many_arguments)]
    fn row(
        name: &str,
        high_priority: bool,
        thr_req: Option<f64>,
        lat_req: Option<f64>,
        rel_req: Option<f64>,
        buffer_capacity: u64,
        max_buffer_latency: u32,
        packet_size: u32,
        speed: f64,
        traffic_mean: f64,
        ue_min: usize,
        ue_max: usize,
    ) -> Self {
        Self {
            name: name.to_string(),
            high_priority,
            thr_req,
            lat_req,
            rel_req,
            buffer_capacity,
            max_buffer_latency,
            packet_size,
            speed,
            traffic_mean,
            ue_min,
            ue_max,
        }
    }

    /// Packet-loss requirement derived from the reliability percentage.
    pub fn loss_req(&self) -> Option<f64> {
        self.rel_req.map(|r| {
            reliability_to_loss_req(r).expect("catalog reliability validated on load")
        })
    }

    pub fn intents(&self) -> IntentFlags {
        IntentFlags {
            thr: self.thr_req.is_some(),
            lat: self.lat_req.is_some(),
            loss: self.rel_req.is_some(),
        }
    }

    /// Mean packet arrivals per TTI for one UE.
    pub fn mean_packets_per_tti(&self) -> f64 {
        self.traffic_mean * 1e6 * crate::TTI_S / f64::from(self.packet_size)
    }

    /// Checks the row invariants, reporting the first offending field.
    pub fn validate(&self) -> Result<(), (String, String)> {
        let err = |f: &str, m: &str| Err((f.to_string(), m.to_string()));
        if self.thr_req.is_none() && self.lat_req.is_none() && self.rel_req.is_none() {
            return err("thr_req", "slice type needs at least one intent");
        }
        if let Some(t) = self.thr_req {
            if !(t.is_finite() && t > 0.0) {
                return err("thr_req", "must be positive");
            }
        }
        if let Some(l) = self.lat_req {
            if !(l.is_finite() && l > 0.0) {
                return err("lat_req", "must be positive");
            }
            if f64::from(self.max_buffer_latency) <= l {
                return err("max_buffer_latency", "must exceed lat_req");
            }
        }
        if let Some(r) = self.rel_req {
            if reliability_to_loss_req(r).is_err() {
                return err("rel_req", "must lie strictly between 0 and 100");
            }
        }
        if self.buffer_capacity == 0 {
            return err("buffer_capacity", "must be positive");
        }
        if self.max_buffer_latency == 0 {
            return err("max_buffer_latency", "must be positive");
        }
        if self.packet_size == 0 {
            return err("packet_size", "must be positive");
        }
        if !(self.speed.is_finite() && self.speed >= 0.0) {
            return err("speed", "must be non-negative");
        }
        if !(self.traffic_mean.is_finite() && self.traffic_mean >= 0.0) {
            return err("traffic_mean", "must be non-negative");
        }
        if self.ue_min == 0 || self.ue_min > self.ue_max {
            return err("ue_min", "need 0 < ue_min <= ue_max");
        }
        if self.ue_max > crate::MAX_UES_PER_SLICE {
            return err("ue_max", "at most 5 UEs per slice");
        }
        Ok(())
    }
}

/// Maps a reliability percentage to a packet-loss fraction.
pub fn reliability_to_loss_req(rel: f64) -> Result<f64, ScenarioError> {
    if !(rel > 0.0 && rel < 100.0) {
        return Err(ScenarioError::Reliability(rel));
    }
    Ok((100.0 - rel) / 100.0)
}

/// The built-in ten slice types.
pub fn default_catalog() -> Vec<SliceSpec> {
    use SliceSpec as S;
    vec![
        S::row("Control case 2", true, None, Some(50.0), Some(99.999999), 10240, 100, 8192, 0.0, 5.0, 4, 5),
        S::row("Monitoring case 1", false, Some(10.0), None, None, 10240, 100, 8192, 72.0, 10.0, 4, 5),
        S::row("Robotic surgery case 1", true, Some(20.0), Some(20.0), Some(99.9999), 1_024_000, 40, 16000, 0.0, 30.0, 4, 5),
        S::row("Robotic diagnosis", false, Some(15.0), Some(20.0), Some(99.999), 1_024_000, 40, 640, 0.0, 15.0, 4, 5),
        S::row("Medical monitoring", false, Some(10.0), Some(100.0), Some(99.9999), 10240, 200, 8000, 0.0, 10.0, 4, 5),
        S::row("UAV app case 1", true, Some(100.0), Some(200.0), None, 1_024_000, 400, 65536, 30.0, 100.0, 2, 4),
        S::row("UAV control non-VLOS", true, Some(20.0), Some(140.0), Some(99.99), 10240, 300, 65536, 30.0, 20.0, 4, 5),
        S::row("VR gaming", false, Some(100.0), Some(10.0), Some(99.99), 1_024_000, 20, 65536, 0.0, 100.0, 2, 4),
        S::row("Cloud gaming", false, Some(50.0), Some(80.0), None, 10240, 160, 65536, 0.0, 50.0, 2, 5),
        S::row("Video streaming 4K", false, Some(30.0), None, None, 10240, 100, 65536, 0.0, 30.0, 2, 5),
    ]
}

/// Parses a catalog document: a JSON array of rows of slice-type columns,
/// absent intents written as `null`.
pub fn parse_catalog(text: &str) -> Result<Vec<SliceSpec>, ScenarioError> {
    let rows: Vec<serde_json::Value> =
        serde_json::from_str(text).map_err(|e| ScenarioError::Syntax(e.to_string()))?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.into_iter().enumerate() {
        let name = row
            .get("name")
            .and_then(|v| v.as_str())
            .unwrap_or("<unnamed>")
            .to_string();
        let spec: SliceSpec = serde_json::from_value(row).map_err(|e| {
            let message = e.to_string();
            ScenarioError::Row {
                row: i,
                name: name.clone(),
                field: backticked_field(&message).unwrap_or_else(|| "?".into()),
                message,
            }
        })?;
        spec.validate().map_err(|(field, message)| ScenarioError::Row {
            row: i,
            name: name.clone(),
            field,
            message,
        })?;
        out.push(spec);
    }
    Ok(out)
}

fn backticked_field(msg: &str) -> Option<String> {
    let start = msg.find('`')? + 1;
    let len = msg[start..].find('`')?;
    Some(msg[start..start + len].to_string())
}

/// Loads a catalog file, or the built-in catalog when `path` is `None`.
pub fn load_catalog(path: Option<&Path>) -> Result<Vec<SliceSpec>, ScenarioError> {
    match path {
        None => Ok(default_catalog()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|source| ScenarioError::Io {
                path: p.display().to_string(),
                source,
            })?;
            parse_catalog(&text)
        }
    }
}

pub fn catalog_to_json(catalog: &[SliceSpec]) -> String {
    serde_json::to_string_pretty(catalog).expect("catalog serializes")
}

/// One active slice of a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActiveSlice {
    /// Slice position, 1-based (1..=5).
    pub index: usize,
    pub spec: SliceSpec,
    pub ue_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkScenario {
    pub scenario_id: u32,
    pub seed: u64,
    /// Active slices sorted by position.
    pub slices: Vec<ActiveSlice>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioBounds {
    pub min_slices: usize,
    pub max_slices: usize,
}

impl Default for ScenarioBounds {
    fn default() -> Self {
        Self {
            min_slices: crate::scenario::MIN_ACTIVE_SLICES,
            max_slices: MAX_SLICES,
        }
    }
}

pub const MIN_ACTIVE_SLICES: usize = 3;

impl NetworkScenario {
    /// Generates scenario `scenario_id` from `seed`.
    pub fn from_seed(
        scenario_id: u32,
        seed: u64,
        catalog: &[SliceSpec],
        bounds: ScenarioBounds,
    ) -> Result<Self, ScenarioError> {
        let mut r = rng::stream(seed, &[rng::tag::SCENARIO]);
        let mut s = generate_scenario(&mut r, catalog, bounds)?;
        s.scenario_id = scenario_id;
        s.seed = seed;
        Ok(s)
    }

    pub fn total_ues(&self) -> usize {
        self.slices.iter().map(|s| s.ue_count).sum()
    }

    pub fn active_count(&self) -> usize {
        self.slices.len()
    }

    pub fn high_priority_count(&self) -> usize {
        self.slices.iter().filter(|s| s.spec.high_priority).count()
    }

    /// Active flag per slice position (position 1 at element 0).
    pub fn active_mask(&self) -> [bool; MAX_SLICES] {
        let mut m = [false; MAX_SLICES];
        for s in &self.slices {
            m[s.index - 1] = true;
        }
        m
    }

    pub fn slice_at(&self, index: usize) -> Option<&ActiveSlice> {
        self.slices.iter().find(|s| s.index == index)
    }

    /// Global UE ordering: slices by position, UEs consecutively within each.
    /// Returns, for each UE, `(position in self.slices, local UE index)`.
    pub fn ue_layout(&self) -> Vec<(usize, usize)> {
        self.slices
            .iter()
            .enumerate()
            .flat_map(|(k, s)| (0..s.ue_count).map(move |u| (k, u)))
            .collect()
    }

    /// Index of the first UE of each slice in the global ordering.
    pub fn ue_offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.slices
            .iter()
            .map(|s| {
                let o = acc;
                acc += s.ue_count;
                o
            })
            .collect()
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let bad = |m: String| Err(ScenarioError::Invalid(m));
        let n = self.slices.len();
        if !(1..=MAX_SLICES).contains(&n) {
            return bad(format!("{n} active slices"));
        }
        if self.total_ues() > MAX_UES {
            return bad(format!("{} UEs exceeds {MAX_UES}", self.total_ues()));
        }
        for (k, s) in self.slices.iter().enumerate() {
            if !(1..=MAX_SLICES).contains(&s.index) {
                return bad(format!("slice position {} out of range", s.index));
            }
            if k > 0 && self.slices[k - 1].index >= s.index {
                return bad("slice positions must be strictly increasing".into());
            }
            if s.ue_count < s.spec.ue_min || s.ue_count > s.spec.ue_max {
                return bad(format!("slice {} has {} UEs", s.index, s.ue_count));
            }
            if self.slices[..k].iter().any(|o| o.spec.name == s.spec.name) {
                return bad(format!("slice type {} repeated", s.spec.name));
            }
            s.spec
                .validate()
                .or_else(|(f, m)| bad(format!("slice {} field {f}: {m}", s.index)))?;
        }
        Ok(())
    }
}

/// Draws a random scenario: slice count uniform in the bounds, positions and
/// types without replacement, UE counts uniform per type.
pub fn generate_scenario<R: Rng + ?Sized>(
    rng: &mut R,
    catalog: &[SliceSpec],
    bounds: ScenarioBounds,
) -> Result<NetworkScenario, ScenarioError> {
    let ScenarioBounds {
        min_slices,
        max_slices,
    } = bounds;
    if min_slices == 0 || min_slices > max_slices || max_slices > MAX_SLICES {
        return Err(ScenarioError::Bounds(format!(
            "need 1 <= min ({min_slices}) <= max ({max_slices}) <= {MAX_SLICES}"
        )));
    }
    if catalog.len() < max_slices {
        return Err(ScenarioError::Bounds(format!(
            "catalog has {} types, fewer than {max_slices}",
            catalog.len()
        )));
    }
    let count = rng.random_range(min_slices..=max_slices);
    let mut positions: Vec<usize> = sample(rng, MAX_SLICES, count)
        .into_iter()
        .map(|i| i + 1)
        .collect();
    let types: Vec<usize> = sample(rng, catalog.len(), count).into_vec();
    // Keep the type drawn for each position paired with it while sorting.
    let mut pairs: Vec<(usize, usize)> = positions.drain(..).zip(types).collect();
    pairs.sort_by_key(|p| p.0);

    let min_total: usize = pairs.iter().map(|&(_, t)| catalog[t].ue_min).sum();
    if min_total > MAX_UES {
        return Err(ScenarioError::Invalid(format!(
            "selected types need at least {min_total} UEs"
        )));
    }
    let ue_counts = loop {
        let counts: Vec<usize> = pairs
            .iter()
            .map(|&(_, t)| rng.random_range(catalog[t].ue_min..=catalog[t].ue_max))
            .collect();
        if counts.iter().sum::<usize>() <= MAX_UES {
            break counts;
        }
    };
    let slices = pairs
        .into_iter()
        .zip(ue_counts)
        .map(|((index, t), ue_count)| ActiveSlice {
            index,
            spec: catalog[t].clone(),
            ue_count,
        })
        .collect();
    Ok(NetworkScenario {
        scenario_id: 0,
        seed: 0,
        slices,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    version: u32,
    scenarios: Vec<NetworkScenario>,
}

const MANIFEST_VERSION: u32 = 1;

pub fn manifest_to_json(scenarios: &[NetworkScenario]) -> String {
    serde_json::to_string_pretty(&Manifest {
        version: MANIFEST_VERSION,
        scenarios: scenarios.to_vec(),
    })
    .expect("manifest serializes")
}

pub fn manifest_from_json(text: &str) -> Result<Vec<NetworkScenario>, ScenarioError> {
    let m: Manifest =
        serde_json::from_str(text).map_err(|e| ScenarioError::Manifest(e.to_string()))?;
    if m.version != MANIFEST_VERSION {
        return Err(ScenarioError::Manifest(format!(
            "unsupported manifest version {}",
            m.version
        )));
    }
    for s in &m.scenarios {
        s.validate()?;
    }
    Ok(m.scenarios)
}

pub fn save_manifest(path: &Path, scenarios: &[NetworkScenario]) -> Result<(), ScenarioError> {
    fs::write(path, manifest_to_json(scenarios)).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_manifest(path: &Path) -> Result<Vec<NetworkScenario>, ScenarioError> {
    let text = fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })?;
    manifest_from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * b.abs().max(1e-300)
    }

    #[test]
    fn default_catalog_matches_table() {
        let c = load_catalog(None).unwrap();
        assert_eq!(c.len(), 10);
        let rs = c.iter().find(|s| s.name == "Robotic surgery case 1").unwrap();
        assert_eq!(rs.thr_req, Some(20.0));
        assert_eq!(rs.lat_req, Some(20.0));
        assert_eq!(rs.rel_req, Some(99.9999));
        assert_eq!(rs.buffer_capacity, 1_024_000);
        assert_eq!(rs.max_buffer_latency, 40);
        assert_eq!(rs.packet_size, 16000);
        assert_eq!(rs.speed, 0.0);
        assert_eq!(rs.traffic_mean, 30.0);
        assert_eq!((rs.ue_min, rs.ue_max), (4, 5));
        assert!(rs.high_priority);

        let v = c.iter().find(|s| s.name == "Video streaming 4K").unwrap();
        assert_eq!(v.thr_req, Some(30.0));
        assert_eq!(v.lat_req, None);
        assert_eq!(v.rel_req, None);
        assert!(!v.high_priority);

        for s in &c {
            s.validate().unwrap();
        }
    }

    #[test]
    fn reliability_mapping() {
        assert!(close(reliability_to_loss_req(99.999).unwrap(), 1e-5));
        assert!(close(reliability_to_loss_req(50.0).unwrap(), 0.5));
        assert!(close(reliability_to_loss_req(99.9999).unwrap(), 1e-6));
        assert!(reliability_to_loss_req(100.0).is_err());
        assert!(reliability_to_loss_req(0.0).is_err());
        assert!(reliability_to_loss_req(-3.0).is_err());
    }

    #[test]
    fn catalog_json_round_trip() {
        let c = default_catalog();
        let back = parse_catalog(&catalog_to_json(&c)).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn malformed_row_names_row_and_field() {
        let mut rows: Vec<serde_json::Value> =
            serde_json::from_str(&catalog_to_json(&default_catalog())).unwrap();
        rows[3]["packet_size"] = serde_json::json!("big");
        let err = parse_catalog(&serde_json::to_string(&rows).unwrap()).unwrap_err();
        match err {
            ScenarioError::Row { row, name, .. } => {
                assert_eq!(row, 3);
                assert_eq!(name, "Robotic diagnosis");
            }
            e => panic!("unexpected {e}"),
        }

        rows[3]["packet_size"] = serde_json::json!(640);
        rows[5]["ue_min"] = serde_json::json!(9);
        let err = parse_catalog(&serde_json::to_string(&rows).unwrap()).unwrap_err();
        assert!(
            matches!(err, ScenarioError::Row { row: 5, ref field, .. } if field == "ue_min"),
            "{err}"
        );

        rows[5]["ue_min"] = serde_json::json!(2);
        rows[1]
            .as_object_mut()
            .unwrap()
            .remove("buffer_capacity");
        let err = parse_catalog(&serde_json::to_string(&rows).unwrap()).unwrap_err();
        assert!(
            matches!(err, ScenarioError::Row { row: 1, ref field, .. } if field == "buffer_capacity"),
            "{err}"
        );
    }

    #[test]
    fn forced_bounds_give_exact_count() {
        let c = default_catalog();
        let mut r = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let s = generate_scenario(
                &mut r,
                &c,
                ScenarioBounds {
                    min_slices: 3,
                    max_slices: 3,
                },
            )
            .unwrap();
            assert_eq!(s.active_count(), 3);
        }
    }

    #[test]
    fn small_catalog_is_rejected() {
        let c = default_catalog()[..4].to_vec();
        let mut r = ChaCha8Rng::seed_from_u64(0);
        assert!(generate_scenario(&mut r, &c, ScenarioBounds::default()).is_err());
    }

    #[test]
    fn seeded_scenario_with_gap_at_position_two() {
        // Seed found by scanning; frozen so the layout stays reproducible.
        let s = NetworkScenario::from_seed(0, 22, &default_catalog(), ScenarioBounds::default())
            .unwrap();
        let positions: Vec<usize> = s.slices.iter().map(|x| x.index).collect();
        assert_eq!(positions, vec![1, 3, 4, 5]);
        assert_eq!(s.active_mask(), [true, false, true, true, true]);
    }

    #[test]
    fn manifest_round_trip() {
        let c = default_catalog();
        let ss: Vec<_> = (0..3)
            .map(|i| NetworkScenario::from_seed(i, 100 + u64::from(i), &c, Default::default()).unwrap())
            .collect();
        assert_eq!(manifest_from_json(&manifest_to_json(&ss)).unwrap(), ss);
    }
}
