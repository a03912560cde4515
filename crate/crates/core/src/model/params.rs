use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use crate::error::{Error, Result};

/// Classical drive amplitudes before elimination of the excited levels,
/// in units of `g`. `omega_a` is per atom.
#[derive(Clone, Debug, PartialEq)]
pub struct RawDrives {
    pub lambda_a: f64,
    pub lambda_b: f64,
    pub omega_a: [f64; 3],
    pub omega_b: f64,
    pub omega_c: f64,
}

impl RawDrives {
    /// Default binding: atoms 1 and 3 get `Ω_a = GΔ/g`, atom 2 gets
    /// `Ω_a/√2`, and `λ_a = λ_b = Ω_b = Ω_c = √(ΩΔ)` so both Raman
    /// couplings equal `Ω`.
    pub fn bind(p: &SystemParams) -> Self {
        let oa = p.coupling * p.detuning.abs() / p.g;
        let raman = (p.drive * p.detuning.abs()).sqrt();
        Self {
            lambda_a: raman,
            lambda_b: raman,
            omega_a: [oa, oa * FRAC_1_SQRT_2, oa],
            omega_b: raman,
            omega_c: raman,
        }
    }
}

/// Physical parameters. Rates and detunings are in units of the
/// atom–cavity coupling `g`; the feedback angle is in radians.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemParams {
    pub g: f64,
    /// Large single-photon detuning `Δ`.
    pub detuning: f64,
    /// Inter-cavity hopping `J`.
    pub hopping: f64,
    /// Effective atom–mode coupling `G`.
    pub coupling: f64,
    /// Effective Raman drive `Ω`.
    pub drive: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub gamma_prime: f64,
    pub omega_fb: f64,
    pub eta: f64,
    /// Boson truncation per mode (states `0..=n_max`).
    pub n_max: usize,
    pub raw: Option<RawDrives>,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            g: 1.0,
            detuning: 200.0,
            hopping: 200.0 * FRAC_1_SQRT_2,
            coupling: 1.0,
            drive: 0.5,
            kappa: 1.0,
            gamma: 0.0,
            gamma_prime: 0.0,
            omega_fb: 0.3 * PI,
            eta: 1.0,
            n_max: 1,
            raw: None,
        }
    }
}

fn check_rate(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParam {
            name,
            reason: format!("must be finite and >= 0, got {v}"),
        })
    }
}

fn check_finite(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParam {
            name,
            reason: format!("must be finite, got {v}"),
        })
    }
}

impl SystemParams {
    /// Effective-model parameters with `G = κ = 1`, so `Γ = 1` and times
    /// come out in units of `1/Γ`.
    pub fn effective(drive_over_gamma: f64, omega_fb: f64, eta: f64) -> Self {
        Self {
            drive: drive_over_gamma,
            omega_fb,
            eta,
            ..Self::default()
        }
    }

    /// Collective amplitude damping rate `Γ = G²/κ`.
    pub fn collective_rate(&self) -> f64 {
        self.coupling * self.coupling / self.kappa
    }

    /// Single-atom cooperativity `g²/(γκ)`.
    pub fn cooperativity(&self) -> f64 {
        self.g * self.g / (self.gamma * self.kappa)
    }

    /// Sets `Ω` from a ratio `Ω/Γ` at the current `G` and `κ`.
    pub fn with_drive_over_gamma(mut self, ratio: f64) -> Self {
        self.drive = ratio * self.collective_rate();
        self
    }

    /// Sets `Δ` and the hopping `J = Δ/√2` that makes mode `c₃` resonant.
    pub fn with_detuning(mut self, detuning: f64) -> Self {
        self.detuning = detuning;
        self.hopping = detuning / SQRT_2;
        self
    }

    /// Attaches raw drive amplitudes via [`RawDrives::bind`].
    pub fn with_bound_drives(mut self) -> Self {
        self.raw = Some(RawDrives::bind(&self));
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_rate("g", self.g)?;
        check_rate("coupling", self.coupling)?;
        check_rate("drive", self.drive)?;
        check_rate("kappa", self.kappa)?;
        check_rate("gamma", self.gamma)?;
        check_rate("gamma_prime", self.gamma_prime)?;
        check_finite("detuning", self.detuning)?;
        check_finite("hopping", self.hopping)?;
        check_finite("omega_fb", self.omega_fb)?;
        if self.kappa <= 0.0 {
            return Err(Error::InvalidParam {
                name: "kappa",
                reason: "cavity decay must be > 0".into(),
            });
        }
        if self.g <= 0.0 {
            return Err(Error::InvalidParam {
                name: "g",
                reason: "reference coupling must be > 0".into(),
            });
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(Error::InvalidParam {
                name: "eta",
                reason: format!("detector efficiency must lie in [0, 1], got {}", self.eta),
            });
        }
        if self.n_max < 1 {
            return Err(Error::InvalidParam {
                name: "n_max",
                reason: "boson truncation must be >= 1".into(),
            });
        }
        if let Some(raw) = &self.raw {
            self.validate_binding(raw)?;
        }
        Ok(())
    }

    fn validate_binding(&self, raw: &RawDrives) -> Result<()> {
        for (name, v) in [
            ("lambda_a", raw.lambda_a),
            ("lambda_b", raw.lambda_b),
            ("Omega_a", raw.omega_a[0]),
            ("Omega_a", raw.omega_a[1]),
            ("Omega_a", raw.omega_a[2]),
            ("Omega_b", raw.omega_b),
            ("Omega_c", raw.omega_c),
        ] {
            check_rate(name, v)?;
        }
        if self.detuning == 0.0 {
            return Err(Error::InvalidParam {
                name: "detuning",
                reason: "raw drive amplitudes need a non-zero detuning".into(),
            });
        }
        let d = self.detuning.abs();
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-300);
        let checks = [
            ("coupling", self.coupling, self.g * raw.omega_a[0] / d),
            ("coupling", self.coupling, self.g * raw.omega_a[2] / d),
            ("coupling", self.coupling / SQRT_2, self.g * raw.omega_a[1] / d),
            ("drive", self.drive, raw.omega_b * raw.omega_c / d),
            ("drive", self.drive, raw.lambda_a * raw.lambda_b / d),
        ];
        for (name, have, bound) in checks {
            if !close(have, bound) {
                return Err(Error::InvalidParam {
                    name,
                    reason: format!("value {have} inconsistent with raw drive amplitudes ({bound})"),
                });
            }
        }
        Ok(())
    }
}
