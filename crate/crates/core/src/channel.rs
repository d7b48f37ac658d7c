//! UE mobility and spectral-efficiency grids.
//!
//! The scheduler only ever sees a [`SeGrid`]: spectral efficiency per
//! `(step, ue, rb)`. Grids come either from the synthetic generator here
//! (dual-slope path loss, distance-dependent LOS, correlated shadowing,
//! time/frequency-correlated Rician or Rayleigh fading) or from trace files
//! in the `SEGRID01` format, so externally generated channels can be dropped in.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scenario::NetworkScenario;
use crate::{RB_COUNT, TTI_S};

const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad magic")]
    BadMagic,
    #[error("truncated payload: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("trailing bytes after payload: {0}")]
    Trailing(usize),
    #[error("dimension overflow: {ues} x {rbs} x {steps}")]
    DimensionOverflow { ues: u32, rbs: u32, steps: u32 },
    #[error("invalid grid value {value} at step {step}, ue {ue}, rb {rb}")]
    InvalidValue {
        step: usize,
        ue: usize,
        rb: usize,
        value: f32,
    },
    #[error("invalid channel parameters: {0}")]
    Params(String),
    #[error("sidecar error: {0}")]
    Sidecar(String),
}

/// Link-budget and propagation parameters of the synthetic generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChannelParams {
    pub carrier_frequency_ghz: f64,
    pub bandwidth_mhz: f64,
    pub total_tx_power_w: f64,
    pub rb_count: usize,
    pub noise_figure_db: f64,
    pub thermal_noise_dbm_hz: f64,
    pub bs_height_m: f64,
    pub ue_height_m: f64,
    /// Near-slope exponent of the LOS path loss.
    pub pathloss_exponent_los: f64,
    /// Exponent of the NLOS path loss.
    pub pathloss_exponent_nlos: f64,
    /// Far-slope exponent applied beyond the breakpoint distance.
    pub pathloss_exponent_far: f64,
    pub breakpoint_distance_m: f64,
    /// Lumped antenna, penetration and implementation losses.
    pub system_loss_db: f64,
    pub shadowing_sigma_los_db: f64,
    pub shadowing_sigma_nlos_db: f64,
    pub shadowing_decorrelation_m: f64,
    pub rician_k_los_db: f64,
    pub coherence_bandwidth_mhz: f64,
    /// Shape constant `c0` of the fading time correlation `exp(-2 pi f_D T c0)`.
    pub doppler_shape: f64,
    /// Doppler floor for static UEs (scatterer motion), Hz.
    pub ambient_doppler_hz: f64,
    pub shadowing: bool,
    pub fading: bool,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            carrier_frequency_ghz: 2.6,
            bandwidth_mhz: 100.0,
            total_tx_power_w: 100.0,
            rb_count: RB_COUNT,
            noise_figure_db: 7.0,
            thermal_noise_dbm_hz: -174.0,
            bs_height_m: 25.0,
            ue_height_m: 1.5,
            pathloss_exponent_los: 2.2,
            pathloss_exponent_nlos: 3.9,
            pathloss_exponent_far: 4.0,
            breakpoint_distance_m: 160.0,
            system_loss_db: 0.0,
            shadowing_sigma_los_db: 4.0,
            shadowing_sigma_nlos_db: 6.0,
            shadowing_decorrelation_m: 50.0,
            rician_k_los_db: 9.0,
            coherence_bandwidth_mhz: 2.0,
            doppler_shape: 1.0,
            ambient_doppler_hz: 2.0,
            shadowing: true,
            fading: true,
        }
    }
}

impl ChannelParams {
    pub fn validate(&self) -> Result<(), ChannelError> {
        let bad = |m: &str| Err(ChannelError::Params(m.to_string()));
        if !(self.bandwidth_mhz > 0.0) {
            return bad("bandwidth must be positive");
        }
        if !(self.total_tx_power_w > 0.0) {
            return bad("transmit power must be positive");
        }
        if !(self.carrier_frequency_ghz > 0.0) {
            return bad("carrier frequency must be positive");
        }
        if self.rb_count == 0 {
            return bad("rb_count must be positive");
        }
        if !(self.shadowing_decorrelation_m > 0.0 && self.coherence_bandwidth_mhz > 0.0) {
            return bad("correlation scales must be positive");
        }
        Ok(())
    }

    pub fn bandwidth_hz(&self) -> f64 {
        self.bandwidth_mhz * 1e6
    }

    pub fn rb_bandwidth_hz(&self) -> f64 {
        self.bandwidth_hz() / self.rb_count as f64
    }

    pub fn tx_power_per_rb_w(&self) -> f64 {
        self.total_tx_power_w / self.rb_count as f64
    }

    /// Noise power over one RB, watts.
    pub fn noise_power_w(&self) -> f64 {
        let dbm = self.thermal_noise_dbm_hz
            + 10.0 * self.rb_bandwidth_hz().log10()
            + self.noise_figure_db;
        10f64.powf((dbm - 30.0) / 10.0)
    }

    fn fspl_1m_db(&self) -> f64 {
        20.0 * (4.0 * PI * self.carrier_frequency_ghz * 1e9 / SPEED_OF_LIGHT).log10()
    }

    /// Path loss in dB at 3-D distance `d` for the given LOS state.
    pub fn path_loss_db(&self, d: f64, los: bool) -> f64 {
        let d = d.max(1.0);
        let near = |n: f64| self.fspl_1m_db() + 10.0 * n * d.log10();
        let los_pl = if d <= self.breakpoint_distance_m {
            near(self.pathloss_exponent_los)
        } else {
            self.fspl_1m_db()
                + 10.0 * self.pathloss_exponent_los * self.breakpoint_distance_m.log10()
                + 10.0 * self.pathloss_exponent_far * (d / self.breakpoint_distance_m).log10()
        };
        let pl = if los {
            los_pl
        } else {
            los_pl.max(near(self.pathloss_exponent_nlos))
        };
        pl + self.system_loss_db
    }

    /// Urban-macro style LOS probability at ground distance `d`.
    pub fn los_probability(d: f64) -> f64 {
        if d <= 18.0 {
            1.0
        } else {
            18.0 / d + (-d / 63.0).exp() * (1.0 - 18.0 / d)
        }
    }

    fn doppler_hz(&self, speed_kmh: f64) -> f64 {
        let v = speed_kmh / 3.6;
        (v * self.carrier_frequency_ghz * 1e9 / SPEED_OF_LIGHT).max(self.ambient_doppler_hz)
    }
}

/// Received SNR on one RB: `alpha * p * |h|^2 / sigma^2`.
pub fn snr(alpha: f64, tx_power_per_rb: f64, h_abs_sq: f64, noise_power: f64) -> f64 {
    debug_assert!(noise_power > 0.0);
    alpha * tx_power_per_rb * h_abs_sq / noise_power
}

/// Shannon spectral efficiency in bits/s/Hz.
pub fn spectral_efficiency(snr: f64) -> f64 {
    (1.0 + snr.max(0.0)).log2()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MobilityParams {
    pub min_radius_m: f64,
    pub max_radius_m: f64,
    pub turn_probability: f64,
    /// Steps between heading-redraw opportunities.
    pub turn_interval_steps: usize,
}

impl Default for MobilityParams {
    fn default() -> Self {
        Self {
            min_radius_m: 35.0,
            max_radius_m: 250.0,
            turn_probability: 0.5,
            turn_interval_steps: 200,
        }
    }
}

/// Per-step ground positions of one UE.
#[derive(Debug, Clone, PartialEq)]
pub struct UeTrajectory {
    pub positions: Vec<[f64; 2]>,
    pub speed_kmh: f64,
}

impl UeTrajectory {
    pub fn radius(&self, step: usize) -> f64 {
        let [x, y] = self.positions[step];
        x.hypot(y)
    }

    pub fn path_length(&self) -> f64 {
        self.positions
            .windows(2)
            .map(|w| (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]))
            .sum()
    }
}

/// Random-direction mobility inside the annulus around the base station.
///
/// Each UE starts uniformly (by area) in the annulus and moves in a straight
/// line at its slice's speed. At every turn epoch the heading is redrawn with
/// the turn probability; a move that would leave the annulus forces a redraw.
pub fn simulate_mobility<R: Rng + ?Sized>(
    scenario: &NetworkScenario,
    params: &MobilityParams,
    rng: &mut R,
    steps: usize,
) -> Vec<UeTrajectory> {
    assert!(steps >= 1, "need at least one step");
    let (r_lo, r_hi) = (params.min_radius_m, params.max_radius_m);
    let inside = |p: [f64; 2]| {
        let r = p[0].hypot(p[1]);
        r >= r_lo && r <= r_hi
    };
    let mut out = Vec::with_capacity(scenario.total_ues());
    for slice in &scenario.slices {
        for _ in 0..slice.ue_count {
            let radius = rng.random_range(r_lo * r_lo..=r_hi * r_hi).sqrt();
            let angle = rng.random_range(0.0..2.0 * PI);
            let mut pos = [radius * angle.cos(), radius * angle.sin()];
            let mut heading = rng.random_range(0.0..2.0 * PI);
            let step_len = slice.spec.speed / 3.6 * TTI_S;
            let mut positions = Vec::with_capacity(steps);
            positions.push(pos);
            for k in 1..steps {
                if step_len == 0.0 {
                    positions.push(pos);
                    continue;
                }
                if params.turn_interval_steps > 0
                    && k % params.turn_interval_steps == 0
                    && rng.random_bool(params.turn_probability)
                {
                    heading = rng.random_range(0.0..2.0 * PI);
                }
                let mut next = [pos[0] + step_len * heading.cos(), pos[1] + step_len * heading.sin()];
                let mut tries = 0;
                while !inside(next) && tries < 256 {
                    heading = rng.random_range(0.0..2.0 * PI);
                    next = [pos[0] + step_len * heading.cos(), pos[1] + step_len * heading.sin()];
                    tries += 1;
                }
                if inside(next) {
                    pos = next;
                }
                positions.push(pos);
            }
            out.push(UeTrajectory {
                positions,
                speed_kmh: slice.spec.speed,
            });
        }
    }
    out
}

/// Spectral efficiency in bits/s/Hz indexed `[step][ue][rb]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeGrid {
    ue_count: usize,
    rb_count: usize,
    step_count: usize,
    values: Vec<f32>,
}

impl SeGrid {
    pub fn new(
        ue_count: usize,
        rb_count: usize,
        step_count: usize,
        values: Vec<f32>,
    ) -> Result<Self, ChannelError> {
        let n = ue_count
            .checked_mul(rb_count)
            .and_then(|x| x.checked_mul(step_count))
            .ok_or(ChannelError::DimensionOverflow {
                ues: ue_count as u32,
                rbs: rb_count as u32,
                steps: step_count as u32,
            })?;
        if values.len() != n {
            return Err(ChannelError::Truncated {
                expected: n * 4,
                found: values.len() * 4,
            });
        }
        let grid = Self {
            ue_count,
            rb_count,
            step_count,
            values,
        };
        grid.check_values()?;
        Ok(grid)
    }

    fn check_values(&self) -> Result<(), ChannelError> {
        if let Some(i) = self.values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            let rb = i % self.rb_count;
            let ue = (i / self.rb_count) % self.ue_count;
            let step = i / (self.rb_count * self.ue_count);
            return Err(ChannelError::InvalidValue {
                step,
                ue,
                rb,
                value: self.values[i],
            });
        }
        Ok(())
    }

    pub fn ue_count(&self) -> usize {
        self.ue_count
    }
    pub fn rb_count(&self) -> usize {
        self.rb_count
    }
    pub fn step_count(&self) -> usize {
        self.step_count
    }
    pub fn values(&self) -> &[f32] {
        &self.values
    }

    /// SE of one UE across all RBs at `step`.
    pub fn row(&self, step: usize, ue: usize) -> &[f32] {
        let start = (step * self.ue_count + ue) * self.rb_count;
        &self.values[start..start + self.rb_count]
    }

    pub fn get(&self, step: usize, ue: usize, rb: usize) -> f32 {
        self.row(step, ue)[rb]
    }

    /// Mean SE of one UE over all RBs at `step`.
    pub fn mean_se(&self, step: usize, ue: usize) -> f64 {
        let row = self.row(step, ue);
        row.iter().map(|&v| f64::from(v)).sum::<f64>() / row.len() as f64
    }
}

/// Synthetic SE grid for the given trajectories.
///
/// Per UE: a LOS/NLOS state drawn once from the initial distance, AR(1)
/// log-normal shadowing over travelled distance, and per-RB complex fading
/// that is AR(1) in time (Doppler-keyed) and AR(1) across RBs (coherence
/// bandwidth). Each UE uses its own stream drawn from `rng`.
pub fn generate_se_grid<R: Rng + ?Sized>(
    trajectories: &[UeTrajectory],
    params: &ChannelParams,
    rng: &mut R,
) -> Result<SeGrid, ChannelError> {
    params.validate()?;
    if trajectories.is_empty() {
        return Err(ChannelError::Params("no trajectories".into()));
    }
    let steps = trajectories[0].positions.len();
    if trajectories.iter().any(|t| t.positions.len() != steps) {
        return Err(ChannelError::Params("trajectory lengths differ".into()));
    }
    let ues = trajectories.len();
    let rbs = params.rb_count;
    let seeds: Vec<u64> = (0..ues).map(|_| rng.next_u64()).collect();
    let per_ue: Vec<Vec<f32>> = trajectories
        .iter()
        .zip(&seeds)
        .map(|(t, &s)| ue_se_series(t, params, &mut ChaCha8Rng::seed_from_u64(s)))
        .collect();
    let mut values = vec![0f32; steps * ues * rbs];
    for (u, series) in per_ue.iter().enumerate() {
        for step in 0..steps {
            let dst = (step * ues + u) * rbs;
            values[dst..dst + rbs].copy_from_slice(&series[step * rbs..(step + 1) * rbs]);
        }
    }
    SeGrid::new(ues, rbs, steps, values)
}

fn ue_se_series(t: &UeTrajectory, p: &ChannelParams, rng: &mut ChaCha8Rng) -> Vec<f32> {
    let steps = t.positions.len();
    let rbs = p.rb_count;
    let dh = p.bs_height_m - p.ue_height_m;
    let los = rng.random_bool(ChannelParams::los_probability(t.radius(0)).clamp(0.0, 1.0));
    let sigma_sh = if los {
        p.shadowing_sigma_los_db
    } else {
        p.shadowing_sigma_nlos_db
    };
    let k_lin = if los {
        10f64.powf(p.rician_k_los_db / 10.0)
    } else {
        0.0
    };
    let los_amp = (k_lin / (k_lin + 1.0)).sqrt();
    let diffuse_amp = (1.0 / (k_lin + 1.0)).sqrt();
    let rho_t = (-2.0 * PI * p.doppler_hz(t.speed_kmh) * TTI_S * p.doppler_shape).exp();
    let rho_f = (-p.rb_bandwidth_hz() / (p.coherence_bandwidth_mhz * 1e6)).exp();
    let innov_t = (1.0 - rho_t * rho_t).max(0.0).sqrt();
    let innov_f = (1.0 - rho_f * rho_f).max(0.0).sqrt();
    let los_phase: Vec<f64> = (0..rbs).map(|_| rng.random_range(0.0..2.0 * PI)).collect();

    let tx = p.tx_power_per_rb_w();
    let noise = p.noise_power_w();
    let mut gauss = || -> f64 { rng.sample(StandardNormal) };

    // Frequency-correlated unit-power complex Gaussian vector.
    let freq_correlated = |buf: &mut [(f64, f64)], g: &mut dyn FnMut() -> f64| {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut prev = (g() * s, g() * s);
        buf[0] = prev;
        for slot in buf.iter_mut().skip(1) {
            prev = (
                rho_f * prev.0 + innov_f * g() * s,
                rho_f * prev.1 + innov_f * g() * s,
            );
            *slot = prev;
        }
    };

    let mut diffuse = vec![(0.0, 0.0); rbs];
    let mut innov = vec![(0.0, 0.0); rbs];
    if p.fading {
        freq_correlated(&mut diffuse, &mut gauss);
    }
    let mut shadow = if p.shadowing { sigma_sh * gauss() } else { 0.0 };
    let mut out = Vec::with_capacity(steps * rbs);
    for step in 0..steps {
        if step > 0 {
            let [x0, y0] = t.positions[step - 1];
            let [x1, y1] = t.positions[step];
            let moved = (x1 - x0).hypot(y1 - y0);
            if p.shadowing && moved > 0.0 {
                let rho = (-moved / p.shadowing_decorrelation_m).exp();
                shadow = rho * shadow + (1.0 - rho * rho).sqrt() * sigma_sh * gauss();
            }
            if p.fading {
                freq_correlated(&mut innov, &mut gauss);
                for (d, w) in diffuse.iter_mut().zip(&innov) {
                    d.0 = rho_t * d.0 + innov_t * w.0;
                    d.1 = rho_t * d.1 + innov_t * w.1;
                }
            }
        }
        let d3 = t.radius(step).hypot(dh);
        let alpha = 10f64.powf(-(p.path_loss_db(d3, los) + shadow) / 10.0);
        for g in 0..rbs {
            let h_sq = if p.fading {
                let re = los_amp * los_phase[g].cos() + diffuse_amp * diffuse[g].0;
                let im = los_amp * los_phase[g].sin() + diffuse_amp * diffuse[g].1;
                re * re + im * im
            } else {
                1.0
            };
            out.push(spectral_efficiency(snr(alpha, tx, h_sq, noise)) as f32);
        }
    }
    out
}

const MAGIC: &[u8; 8] = b"SEGRID01";
const HEADER_LEN: usize = 8 + 12;

/// Serializes a grid: magic, three LE u32 counts (UEs, RBs, steps), LE f32
/// payload ordered `[step][ue][rb]`.
pub fn encode_se_grid(grid: &SeGrid) -> Vec<u8> {
    let mut buf = Vec::with_capacity(HEADER_LEN + grid.values.len() * 4);
    buf.extend_from_slice(MAGIC);
    for n in [grid.ue_count, grid.rb_count, grid.step_count] {
        buf.extend_from_slice(&(n as u32).to_le_bytes());
    }
    for v in &grid.values {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    buf
}

pub fn decode_se_grid(bytes: &[u8]) -> Result<SeGrid, ChannelError> {
    if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
        return Err(ChannelError::BadMagic);
    }
    if bytes.len() < HEADER_LEN {
        return Err(ChannelError::Truncated {
            expected: HEADER_LEN,
            found: bytes.len(),
        });
    }
    let word = |i: usize| {
        let o = 8 + 4 * i;
        u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap())
    };
    let (ues, rbs, steps) = (word(0), word(1), word(2));
    let expected = (ues as usize)
        .checked_mul(rbs as usize)
        .and_then(|n| n.checked_mul(steps as usize))
        .and_then(|n| n.checked_mul(4))
        .and_then(|n| n.checked_add(HEADER_LEN))
        .filter(|&n| n <= isize::MAX as usize)
        .ok_or(ChannelError::DimensionOverflow { ues, rbs, steps })?;
    if bytes.len() < expected {
        return Err(ChannelError::Truncated {
            expected,
            found: bytes.len(),
        });
    }
    if bytes.len() > expected {
        return Err(ChannelError::Trailing(bytes.len() - expected));
    }
    let values = bytes[HEADER_LEN..]
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    SeGrid::new(ues as usize, rbs as usize, steps as usize, values)
}

pub fn save_se_grid(grid: &SeGrid, path: &Path) -> Result<(), ChannelError> {
    let mut f = fs::File::create(path)?;
    f.write_all(&encode_se_grid(grid))?;
    Ok(())
}

pub fn load_se_grid(path: &Path) -> Result<SeGrid, ChannelError> {
    decode_se_grid(&fs::read(path)?)
}

/// Metadata written next to a grid file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSidecar {
    pub scenario_id: u32,
    pub episode: u32,
    pub seed: u64,
    pub params: ChannelParams,
    pub mobility: MobilityParams,
}

pub fn save_sidecar(meta: &GridSidecar, path: &Path) -> Result<(), ChannelError> {
    let text = serde_json::to_string_pretty(meta).map_err(|e| ChannelError::Sidecar(e.to_string()))?;
    fs::write(path, text)?;
    Ok(())
}

pub fn load_sidecar(path: &Path) -> Result<GridSidecar, ChannelError> {
    serde_json::from_str(&fs::read_to_string(path)?).map_err(|e| ChannelError::Sidecar(e.to_string()))
}
