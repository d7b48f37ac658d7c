//! Policy checkpoints.
//!
//! Layout: magic `IRRSCKPT`, a little-endian u32 header length, a JSON
//! header (format version, controller, step counter and one entry per
//! network with its shape and Adam step), then for each network in header
//! order its parameters, Adam first moments and Adam second moments as
//! little-endian f64.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::nn::{ActorCritic, NetShape};
use super::policy::{HeadKind, Policy};
use super::ppo::Adam;

pub const CHECKPOINT_VERSION: u32 = 1;
const MAGIC: &[u8; 8] = b"IRRSCKPT";

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad magic")]
    BadMagic,
    #[error("truncated checkpoint")]
    Truncated,
    #[error("unsupported checkpoint version {found} (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("shape mismatch for {role}: {detail}")]
    ShapeMismatch { role: String, detail: String },
    #[error("malformed header: {0}")]
    Header(String),
}

/// A trained network with its optimizer state.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedNet {
    pub role: String,
    pub policy: Policy,
    pub adam: Adam,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolicyCheckpoint {
    pub controller: String,
    pub env_steps: u64,
    pub nets: Vec<TrainedNet>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    version: u32,
    controller: String,
    env_steps: u64,
    nets: Vec<NetHeader>,
}

#[derive(Debug, Serialize, Deserialize)]
struct NetHeader {
    role: String,
    kind: HeadKind,
    shape: NetShape,
    adam_t: u64,
}

impl PolicyCheckpoint {
    pub fn net(&self, role: &str) -> Option<&TrainedNet> {
        self.nets.iter().find(|n| n.role == role)
    }

    /// Checks that `role` exists with the expected shape.
    pub fn expect_shape(&self, role: &str, shape: &NetShape) -> Result<&TrainedNet, CheckpointError> {
        let n = self.net(role).ok_or_else(|| CheckpointError::ShapeMismatch {
            role: role.into(),
            detail: "network missing".into(),
        })?;
        if &n.policy.net.shape != shape {
            return Err(CheckpointError::ShapeMismatch {
                role: role.into(),
                detail: format!("found {:?}, expected {:?}", n.policy.net.shape, shape),
            });
        }
        Ok(n)
    }
}

pub fn encode_checkpoint(c: &PolicyCheckpoint) -> Vec<u8> {
    let header = Header {
        version: CHECKPOINT_VERSION,
        controller: c.controller.clone(),
        env_steps: c.env_steps,
        nets: c
            .nets
            .iter()
            .map(|n| NetHeader {
                role: n.role.clone(),
                kind: n.policy.kind,
                shape: n.policy.net.shape.clone(),
                adam_t: n.adam.t,
            })
            .collect(),
    };
    let h = serde_json::to_vec(&header).expect("header serializes");
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&(h.len() as u32).to_le_bytes());
    buf.extend_from_slice(&h);
    for n in &c.nets {
        for arr in [&n.policy.net.params, &n.adam.m, &n.adam.v] {
            for x in arr.iter() {
                buf.extend_from_slice(&x.to_le_bytes());
            }
        }
    }
    buf
}

pub fn decode_checkpoint(bytes: &[u8]) -> Result<PolicyCheckpoint, CheckpointError> {
    if bytes.len() < 8 || &bytes[..8] != MAGIC {
        return Err(CheckpointError::BadMagic);
    }
    if bytes.len() < 12 {
        return Err(CheckpointError::Truncated);
    }
    let hlen = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let body = bytes.get(12..12 + hlen).ok_or(CheckpointError::Truncated)?;
    let v: serde_json::Value = serde_json::from_slice(body).map_err(|e| CheckpointError::Header(e.to_string()))?;
    let found = v.get("version").and_then(|x| x.as_u64()).unwrap_or(0) as u32;
    if found != CHECKPOINT_VERSION {
        return Err(CheckpointError::VersionMismatch {
            found,
            expected: CHECKPOINT_VERSION,
        });
    }
    let header: Header = serde_json::from_value(v).map_err(|e| CheckpointError::Header(e.to_string()))?;
    let mut pos = 12 + hlen;
    let mut read = |n: usize| -> Result<Vec<f64>, CheckpointError> {
        let end = pos + n * 8;
        let chunk = bytes.get(pos..end).ok_or(CheckpointError::Truncated)?;
        pos = end;
        Ok(chunk
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    };
    let mut nets = Vec::with_capacity(header.nets.len());
    for nh in header.nets {
        let n = nh.shape.param_count();
        let params = read(n)?;
        let m = read(n)?;
        let v = read(n)?;
        let expect_extra = if nh.kind == HeadKind::Gaussian { nh.shape.actor } else { 0 };
        if nh.shape.extra != expect_extra {
            return Err(CheckpointError::ShapeMismatch {
                role: nh.role,
                detail: format!("{} extra parameters for a {:?} head", nh.shape.extra, nh.kind),
            });
        }
        nets.push(TrainedNet {
            role: nh.role,
            policy: Policy {
                kind: nh.kind,
                net: ActorCritic { shape: nh.shape, params },
            },
            adam: Adam { m, v, t: nh.adam_t },
        });
    }
    if pos != bytes.len() {
        return Err(CheckpointError::Header(format!("{} trailing bytes", bytes.len() - pos)));
    }
    Ok(PolicyCheckpoint {
        controller: header.controller,
        env_steps: header.env_steps,
        nets,
    })
}

pub fn save_checkpoint(c: &PolicyCheckpoint, path: &Path) -> Result<(), CheckpointError> {
    fs::write(path, encode_checkpoint(c))?;
    Ok(())
}

pub fn load_checkpoint(path: &Path) -> Result<PolicyCheckpoint, CheckpointError> {
    decode_checkpoint(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sample() -> PolicyCheckpoint {
        let mut r = ChaCha8Rng::seed_from_u64(5);
        let inter = Policy::new(HeadKind::Gaussian, 50, &[64, 64], 5, &mut r);
        let intra = Policy::new(HeadKind::Categorical, 19, &[64, 64], 3, &mut r);
        let mut a = Adam::new(inter.net.params.len());
        a.t = 7;
        a.m[3] = 0.25;
        PolicyCheckpoint {
            controller: "proposed".into(),
            env_steps: 4096,
            nets: vec![
                TrainedNet {
                    role: "inter".into(),
                    adam: a,
                    policy: inter,
                },
                TrainedNet {
                    role: "intra".into(),
                    adam: Adam::new(intra.net.params.len()),
                    policy: intra,
                },
            ],
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let c = sample();
        let back = decode_checkpoint(&encode_checkpoint(&c)).unwrap();
        assert_eq!(back, c);
        let mut r = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let x: Vec<f64> = (0..50).map(|_| r.random_range(-1.0..1.0)).collect();
            let a = c.nets[0].policy.net.forward(&x);
            let b = back.nets[0].policy.net.forward(&x);
            assert_eq!(a.actor, b.actor);
            assert_eq!(a.value, b.value);
        }
    }

    #[test]
    fn errors_are_distinct() {
        let bytes = encode_checkpoint(&sample());
        assert!(matches!(
            decode_checkpoint(&bytes[..bytes.len() - 1]),
            Err(CheckpointError::Truncated)
        ));
        let mut bad = bytes.clone();
        bad[0] = b'x';
        assert!(matches!(decode_checkpoint(&bad), Err(CheckpointError::BadMagic)));

        let text = String::from_utf8_lossy(&bytes[12..40]).to_string();
        assert!(text.contains("\"version\":1"));
        let mut v2 = bytes.clone();
        let at = bytes.windows(11).position(|w| w == b"\"version\":1").unwrap();
        v2[at + 10] = b'2';
        assert!(matches!(
            decode_checkpoint(&v2),
            Err(CheckpointError::VersionMismatch { found: 2, .. })
        ));

        let c = sample();
        let wrong = NetShape {
            input: 10,
            hidden: vec![64, 64],
            actor: 5,
            extra: 5,
            separate_value: false,
        };
        assert!(matches!(
            c.expect_shape("inter", &wrong),
            Err(CheckpointError::ShapeMismatch { .. })
        ));
    }
}
