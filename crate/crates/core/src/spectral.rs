//! Boundary spectrum, amplitude a_T = max{|λ − 1| : λ ∈ σ(T), |λ| = 1},
//! primitivity, and the Allan–Ransford decay bound 2a/√(4 − a²).

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::apostol::omega;
use crate::linalg::{eigen_decomposition, ComplexMatrix, SpaceDescriptor, C64, DEFAULT_EIGEN_TOL};
use crate::sampling::SamplingConfig;
use crate::verdict::Verdict;
use crate::{Error, Result};

pub const DEFAULT_BAND: f64 = 1e-8;

/// A quantity defined only when the boundary spectrum is nonempty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Amplitude {
    Empty,
    Value(f64),
}

impl Amplitude {
    pub fn value(self) -> Option<f64> {
        match self {
            Amplitude::Empty => None,
            Amplitude::Value(v) => Some(v),
        }
    }
}

impl Serialize for Amplitude {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Amplitude::Empty => s.serialize_str("empty"),
            Amplitude::Value(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for Amplitude {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Amplitude::Value(v)),
            Raw::Str(s) if s == "empty" => Ok(Amplitude::Empty),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("expected number or \"empty\", got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralEigenvalue {
    pub value: C64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub spectrum: Vec<SpectralEigenvalue>,
    /// Indices into `spectrum` with ||λ| − 1| ≤ band.
    pub boundary: Vec<usize>,
    pub band: f64,
    pub amplitude: Amplitude,
    pub tau: Amplitude,
    pub primitive: bool,
}

impl SpectralReport {
    pub fn boundary_values(&self) -> Vec<C64> {
        self.boundary.iter().map(|&i| self.spectrum[i].value).collect()
    }
}

pub fn spectral_report(t: &ComplexMatrix, band: f64) -> Result<SpectralReport> {
    if !(band >= 0.0 && band.is_finite()) {
        return Err(Error::Input(format!("band must be nonnegative, got {band}")));
    }
    let pairs = eigen_decomposition(t, DEFAULT_EIGEN_TOL)?;
    let spectrum: Vec<SpectralEigenvalue> = pairs
        .iter()
        .map(|p| SpectralEigenvalue { value: p.value, residual: p.residual })
        .collect();
    let boundary: Vec<usize> = (0..spectrum.len())
        .filter(|&i| (spectrum[i].value.norm() - 1.0).abs() <= band)
        .collect();
    let one = C64::new(1.0, 0.0);
    let amplitude = if boundary.is_empty() {
        Amplitude::Empty
    } else {
        let a = boundary
            .iter()
            .map(|&i| (spectrum[i].value - one).norm())
            .fold(0.0, f64::max)
            .min(2.0);
        Amplitude::Value(a)
    };
    let tau = match amplitude {
        Amplitude::Empty => Amplitude::Empty,
        Amplitude::Value(a) => Amplitude::Value(2.0 * (a / 2.0).asin()),
    };
    let primitive = boundary.iter().all(|&i| (spectrum[i].value - one).norm() <= band);
    Ok(SpectralReport { spectrum, boundary, band, amplitude, tau, primitive })
}

/// 2a/√(4 − a²) for 0 ≤ a < 2.
pub fn kt_bound(a: f64) -> Result<f64> {
    if !(0.0..2.0).contains(&a) {
        return Err(Error::Domain(format!(
            "bound undefined for amplitude {a}; needs 0 <= a < 2"
        )));
    }
    Ok(2.0 * a / (4.0 - a * a).sqrt())
}

/// Same bound with ω_T in place of a_T.
pub fn kt_bound_from_omega(w: f64) -> Result<f64> {
    kt_bound(w)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeCheck {
    pub verdict: Verdict,
    pub amplitude: Amplitude,
    pub omega: f64,
    pub slack: f64,
}

/// Constructive form of a_T ≤ ω_T: the eigenvector-seeded ω estimate must
/// reach a_T − slack.
pub fn check_amplitude_omega(
    t: &ComplexMatrix,
    space: &SpaceDescriptor,
    cfg: &SamplingConfig,
) -> Result<AmplitudeCheck> {
    space.check_square(t)?;
    let report = spectral_report(t, DEFAULT_BAND)?;
    let est = omega(t, space, cfg)?;
    let slack = 0.01;
    let verdict = match report.amplitude {
        Amplitude::Empty => Verdict::Vacuous,
        Amplitude::Value(a) => Verdict::from_bool(est.extrapolated >= a - slack),
    };
    Ok(AmplitudeCheck { verdict, amplitude: report.amplitude, omega: est.extrapolated, slack })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn counterexample_report() {
        let t = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, -1.0]]);
        let r = spectral_report(&t, DEFAULT_BAND).unwrap();
        assert_eq!(r.boundary_values().len(), 1);
        assert!((r.boundary_values()[0] - c(-1.0, 0.0)).norm() < 1e-12);
        assert_eq!(r.amplitude.value().map(|a| (a - 2.0).abs() < 1e-12), Some(true));
        assert!(!r.primitive);
    }

    #[test]
    fn projection_is_primitive() {
        let p = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let r = spectral_report(&p, DEFAULT_BAND).unwrap();
        assert!(r.primitive);
        assert!(r.amplitude.value().unwrap() < 1e-12);
    }

    #[test]
    fn rotation_amplitude() {
        let w = C64::from_polar(1.0, PI / 4.0);
        let t = ComplexMatrix::from_diag(&[w, c(0.5, 0.0)]);
        let r = spectral_report(&t, DEFAULT_BAND).unwrap();
        let a = r.amplitude.value().unwrap();
        assert!((a - (c(1.0, 0.0) - w).norm()).abs() < 1e-10);
        assert!((a - 0.765_366_864_730_18).abs() < 1e-9);
        assert!((r.tau.value().unwrap() - PI / 4.0).abs() < 1e-10);
        assert!(((r.tau.value().unwrap() / 2.0).sin() * 2.0 - a).abs() < 1e-12);
    }

    #[test]
    fn strict_contraction_has_empty_boundary() {
        let t = ComplexMatrix::from_diag(&[c(0.5, 0.0), c(0.0, 0.3)]);
        let r = spectral_report(&t, DEFAULT_BAND).unwrap();
        assert_eq!(r.amplitude, Amplitude::Empty);
        assert_eq!(serde_json::to_value(r.amplitude).unwrap(), serde_json::json!("empty"));
        assert!(r.primitive);
    }

    #[test]
    fn kt_bound_examples() {
        assert_eq!(kt_bound(0.0).unwrap(), 0.0);
        assert!((kt_bound(2f64.sqrt()).unwrap() - 2.0).abs() < 1e-12);
        assert!((kt_bound(1.0).unwrap() - 2.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!(matches!(kt_bound(2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn amplitude_omega_examples() {
        let cfg = SamplingConfig::with_seed(3).with_samples(2000);
        let t = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, -1.0]]);
        let chk = check_amplitude_omega(&t, &SpaceDescriptor::max_norm(2), &cfg).unwrap();
        assert_eq!(chk.verdict, Verdict::Pass);
        assert!((chk.omega - 2.0).abs() < 1e-9);

        let chk = check_amplitude_omega(&ComplexMatrix::identity(2), &SpaceDescriptor::hilbert(2), &cfg).unwrap();
        assert_eq!(chk.verdict, Verdict::Pass);
        assert_eq!(chk.omega, 0.0);

        let t = ComplexMatrix::from_diag(&[C64::from_polar(1.0, 0.2), c(0.0, 0.0)]);
        let chk = check_amplitude_omega(&t, &SpaceDescriptor::hilbert(2), &cfg).unwrap();
        assert_eq!(chk.verdict, Verdict::Pass);
    }
}
