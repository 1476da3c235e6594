//! System configuration, channel generation, and end-to-end SINR evaluation.
//!
//! Powers are normalized: noise power 1 and unit channel variances, so the
//! three average-SNR ratios rho1 (source-relay), rho2 (relay-destination)
//! and rho_i (interferer-relay) carry all the physics. Complex channel
//! entries are circularly symmetric Gaussian, variance 1/2 per component.
//!
//! Two samplers are exposed for each configuration: the faithful vector-level
//! formula over raw channel draws, and a statistically equivalent scalar
//! reduction over Gamma/exponential magnitudes. Both have identical outage
//! at every threshold; the scalar one is the cross-check.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use thiserror::Error;

/// Which node carries the antenna array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    /// N antennas at the source (transmit beamforming).
    N11,
    /// N antennas at the destination (MRC).
    OneOneN,
    /// N antennas at the relay (MRC/MRT relay matrix).
    OneNOne,
}

impl Topology {
    pub fn label(self) -> &'static str {
        match self {
            Topology::N11 => "n11",
            Topology::OneOneN => "11n",
            Topology::OneNOne => "1n1",
        }
    }
}

/// Relay amplification policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Gain set from average channel statistics.
    FixedGain,
    /// Gain set from the instantaneous relay receive power.
    VariableGain,
}

impl Scheme {
    pub fn label(self) -> &'static str {
        match self {
            Scheme::FixedGain => "fixed",
            Scheme::VariableGain => "variable",
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ConfigError {
    #[error("n_antennas must be >= 1")]
    ZeroAntennas,
    #[error("n_antennas capped at {max} (log-domain assembly loses meaning beyond)", max = SystemConfig::MAX_ANTENNAS)]
    TooManyAntennas,
    #[error("{0} must be positive and finite")]
    NonPositive(&'static str),
    #[error("rho_i must be finite and >= 0")]
    NegativeInterference,
}

/// Full description of one dual-hop link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    pub topology: Topology,
    pub scheme: Scheme,
    /// Interferer-channel knowledge at the relay. Only meaningful for the
    /// 1-N-1 variable-gain system; forced to `false` everywhere else.
    pub ici_at_relay: bool,
    pub n_antennas: u32,
    /// First-hop average SNR, linear.
    pub rho1: f64,
    /// Second-hop average SNR, linear.
    pub rho2: f64,
    /// Interference-to-noise ratio, linear; 0 disables interference.
    pub rho_i: f64,
    /// SINR outage threshold, linear.
    pub gamma_th: f64,
}

impl SystemConfig {
    pub const MAX_ANTENNAS: u32 = 64;

    #[allow(clippy::too_many_arguments)]
    pub fn new(
        topology: Topology,
        scheme: Scheme,
        ici_at_relay: bool,
        n_antennas: u32,
        rho1: f64,
        rho2: f64,
        rho_i: f64,
        gamma_th: f64,
    ) -> Result<Self, ConfigError> {
        if n_antennas == 0 {
            return Err(ConfigError::ZeroAntennas);
        }
        if n_antennas > Self::MAX_ANTENNAS {
            return Err(ConfigError::TooManyAntennas);
        }
        for (v, name) in [(rho1, "rho1"), (rho2, "rho2"), (gamma_th, "gamma_th")] {
            if !v.is_finite() || v <= 0.0 {
                return Err(ConfigError::NonPositive(name));
            }
        }
        if !rho_i.is_finite() || rho_i < 0.0 {
            return Err(ConfigError::NegativeInterference);
        }
        let ici = ici_at_relay && topology == Topology::OneNOne && scheme == Scheme::VariableGain;
        Ok(SystemConfig {
            topology,
            scheme,
            ici_at_relay: ici,
            n_antennas,
            rho1,
            rho2,
            rho_i,
            gamma_th,
        })
    }

    /// The constant C in the fixed-type relay gain w^2 = rho2 / C. Also the
    /// normalization of the 1-N-1 variable gain without interferer knowledge,
    /// whose gain happens to be a constant as well.
    pub fn fixed_gain_constant(&self) -> f64 {
        let n = f64::from(self.n_antennas);
        match (self.topology, self.scheme) {
            (Topology::N11, _) => n * self.rho1 + self.rho_i + 1.0,
            (Topology::OneOneN, _) => self.rho1 + self.rho_i + 1.0,
            (Topology::OneNOne, Scheme::FixedGain) => n * self.rho1 + n * self.rho_i + 1.0,
            (Topology::OneNOne, Scheme::VariableGain) => n * self.rho1 + self.rho_i + 1.0,
        }
    }

    /// Shape parameters (n1, n2) of the scalar magnitude pair (y1, y2).
    pub(crate) fn gamma_shapes(&self) -> (u32, u32) {
        let n = self.n_antennas;
        match self.topology {
            Topology::N11 => (n, 1),
            Topology::OneOneN => (1, n),
            Topology::OneNOne => match self.scheme {
                Scheme::FixedGain => (1, n),
                Scheme::VariableGain => (n, n),
            },
        }
    }

    /// True when the relay gain tracks the instantaneous channel (the
    /// 1-N-1 "without interferer knowledge" design keeps a constant gain
    /// even though it is classed as variable).
    pub(crate) fn has_instantaneous_gain(&self) -> bool {
        self.scheme == Scheme::VariableGain
            && !(self.topology == Topology::OneNOne && !self.ici_at_relay)
    }
}

/// Raw channel realization; vector lengths depend on the topology.
#[derive(Debug, Clone)]
pub struct ChannelDraw {
    /// Source-relay link.
    pub h1: Vec<Complex64>,
    /// Relay-destination link.
    pub h2: Vec<Complex64>,
    /// Interferer-relay link.
    pub h_i: Vec<Complex64>,
}

fn draw_vec<R: Rng>(len: usize, rng: &mut R) -> Vec<Complex64> {
    (0..len)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * std::f64::consts::FRAC_1_SQRT_2, im * std::f64::consts::FRAC_1_SQRT_2)
        })
        .collect()
}

/// Draw one independent realization of the three links.
pub fn draw_channels<R: Rng>(cfg: &SystemConfig, rng: &mut R) -> ChannelDraw {
    let n = cfg.n_antennas as usize;
    let (l1, l2, li) = match cfg.topology {
        Topology::N11 => (n, 1, 1),
        Topology::OneOneN => (1, n, 1),
        Topology::OneNOne => (n, n, n),
    };
    ChannelDraw {
        h1: draw_vec(l1, rng),
        h2: draw_vec(l2, rng),
        h_i: draw_vec(li, rng),
    }
}

fn norm_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn inner_product(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// End-to-end SINR of one channel realization, from the faithful vector
/// formula of the configured topology and relaying scheme.
pub fn sinr_from_draw(cfg: &SystemConfig, draw: &ChannelDraw) -> f64 {
    let (rho1, rho2, rho_i) = (cfg.rho1, cfg.rho2, cfg.rho_i);
    match cfg.topology {
        // Source beamforming (w_t = h1^H/|h1|) and destination MRC both
        // collapse the array onto its squared norm.
        Topology::N11 | Topology::OneOneN => {
            let y1 = norm_sq(&draw.h1);
            let y2 = norm_sq(&draw.h2);
            let y3 = norm_sq(&draw.h_i);
            let w2 = match cfg.scheme {
                Scheme::FixedGain => rho2 / cfg.fixed_gain_constant(),
                Scheme::VariableGain => rho2 / (y1 * rho1 + y3 * rho_i + 1.0),
            };
            let sig = w2 * y2 * y1 * rho1;
            sig / (w2 * y2 * y3 * rho_i + w2 * y2 + 1.0)
        }
        Topology::OneNOne => match cfg.scheme {
            // W = w I: inner products against h2 carry the combining.
            Scheme::FixedGain => {
                let s1 = inner_product(&draw.h2, &draw.h1).norm_sqr();
                let si = inner_product(&draw.h2, &draw.h_i).norm_sqr();
                let y2 = norm_sq(&draw.h2);
                let w2 = rho2 / cfg.fixed_gain_constant();
                w2 * s1 * rho1 / (w2 * si * rho_i + w2 * y2 + 1.0)
            }
            // W = w h2^H h1^H / (|h2||h1|): MRC on receive, MRT on transmit.
            Scheme::VariableGain => {
                let y1 = norm_sq(&draw.h1);
                let y2 = norm_sq(&draw.h2);
                let y3 = inner_product(&draw.h1, &draw.h_i).norm_sqr() / y1;
                let w2 = if cfg.ici_at_relay {
                    rho2 / (y1 * rho1 + y3 * rho_i + 1.0)
                } else {
                    rho2 / cfg.fixed_gain_constant()
                };
                w2 * y2 * y1 * rho1 / (w2 * y2 * y3 * rho_i + w2 * y2 + 1.0)
            }
        },
    }
}

/// Draw channels and return the vector-level end-to-end SINR.
pub fn sample_sinr_vector<R: Rng>(cfg: &SystemConfig, rng: &mut R) -> f64 {
    let draw = draw_channels(cfg, rng);
    sinr_from_draw(cfg, &draw)
}

/// End-to-end SINR from the scalar magnitudes (y1, y2, y3).
///
/// Every (topology, scheme) pair reduces to one of two shapes:
/// constant gain   g = r1 r2 y1 y2 / (r2 y2 (rI y3 + 1) + C)
/// instant gain    g = r1 r2 y1 y2 / ((r2 y2 + 1)(rI y3 + 1) + r1 y1)
pub fn scalar_sinr(cfg: &SystemConfig, y1: f64, y2: f64, y3: f64) -> f64 {
    let num = cfg.rho1 * cfg.rho2 * y1 * y2;
    if cfg.has_instantaneous_gain() {
        num / ((cfg.rho2 * y2 + 1.0) * (cfg.rho_i * y3 + 1.0) + cfg.rho1 * y1)
    } else {
        num / (cfg.rho2 * y2 * (cfg.rho_i * y3 + 1.0) + cfg.fixed_gain_constant())
    }
}

/// Gamma(n, 1) for integer shape, as a sum of unit exponentials.
pub(crate) fn sample_gamma_int<R: Rng>(n: u32, rng: &mut R) -> f64 {
    (0..n).map(|_| rng.sample::<f64, _>(Exp1)).sum()
}

/// Draw (y1, y2, y3) from the equivalent scalar law and return the SINR.
/// Distributionally identical to [`sample_sinr_vector`].
pub fn sample_sinr_equivalent<R: Rng>(cfg: &SystemConfig, rng: &mut R) -> f64 {
    let (n1, n2) = cfg.gamma_shapes();
    let y1 = sample_gamma_int(n1, rng);
    let y2 = sample_gamma_int(n2, rng);
    let y3 = rng.sample::<f64, _>(Exp1);
    scalar_sinr(cfg, y1, y2, y3)
}

/// High-SNR query: evaluation point rho1 with the coupling rho2 = mu * rho1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticQuery {
    pub mu: f64,
    pub rho1: f64,
}

impl AsymptoticQuery {
    pub fn new(mu: f64, rho1: f64) -> Result<Self, ConfigError> {
        if !mu.is_finite() || mu <= 0.0 {
            return Err(ConfigError::NonPositive("mu"));
        }
        if !rho1.is_finite() || rho1 <= 0.0 {
            return Err(ConfigError::NonPositive("rho1"));
        }
        Ok(AsymptoticQuery { mu, rho1 })
    }
}
