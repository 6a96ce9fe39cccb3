//! Quantum detection for the binary coherent ensemble `{|0⟩, |α⟩}`.
//!
//! Only the overlap `⟨0|α⟩ = e^{-n̄/2}` enters any downstream quantity, so the
//! Fock expansion of the states is never built. Angles are radians.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::numerics::{h2, maximize_1d, Interval};

/// Vacuum (with prior `prior_q`) against a coherent pulse of `mean_photons`
/// received photons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryCoherentEnsemble {
    mean_photons: f64,
    prior_q: f64,
}

impl BinaryCoherentEnsemble {
    pub fn new(mean_photons: f64, prior_q: f64) -> Result<Self> {
        check_photons("BinaryCoherentEnsemble::new", mean_photons)?;
        if !(0.0..=1.0).contains(&prior_q) {
            return Err(Error::domain(
                "BinaryCoherentEnsemble::new",
                format!("prior {prior_q} outside [0, 1]"),
            ));
        }
        Ok(Self {
            mean_photons,
            prior_q,
        })
    }

    pub fn mean_photons(&self) -> f64 {
        self.mean_photons
    }

    pub fn prior_q(&self) -> f64 {
        self.prior_q
    }

    fn overlap(&self) -> f64 {
        (-0.5 * self.mean_photons).exp()
    }
}

/// Minimum-error measurement for a [`BinaryCoherentEnsemble`].
///
/// The two measurement vectors are orthogonal and bracket the two states in
/// their common plane: vector 0 sits `projector_angle_0` outside the vacuum,
/// vector 1 sits `projector_angle_1` outside the pulse, so the three angles
/// sum to `π/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelstromSolution {
    pub avg_error: f64,
    pub error_given_0: f64,
    pub error_given_1: f64,
    pub angle_phi: f64,
    pub projector_angle_0: f64,
    pub projector_angle_1: f64,
}

impl HelstromSolution {
    /// Mutual information (bits) of the classical binary channel this
    /// measurement induces, for input prior `q` on the vacuum symbol.
    pub fn mutual_information(&self, q: f64) -> f64 {
        let p_z0 = q * (1.0 - self.error_given_0) + (1.0 - q) * self.error_given_1;
        h2(p_z0) - q * h2(self.error_given_0) - (1.0 - q) * h2(self.error_given_1)
    }
}

fn check_photons(what: &'static str, mean_photons: f64) -> Result<()> {
    if !(mean_photons >= 0.0) {
        return Err(Error::domain(
            what,
            format!("mean photon number must be >= 0, got {mean_photons}"),
        ));
    }
    Ok(())
}

/// `⟨0|α⟩ = e^{-n̄/2}`.
pub fn overlap(mean_photons: f64) -> Result<f64> {
    check_photons("overlap", mean_photons)?;
    Ok((-0.5 * mean_photons).exp())
}

/// Angle between the two states in their rank-2 span, `arccos⟨0|α⟩`.
pub fn distinguishability_angle(mean_photons: f64) -> Result<f64> {
    Ok(overlap(mean_photons)?.acos())
}

/// Closed-form Helstrom error `(1 − √(1 − 4q(1−q)e^{−n̄}))/2`.
pub fn helstrom_error(ensemble: &BinaryCoherentEnsemble) -> f64 {
    let q = ensemble.prior_q;
    let disc = 1.0 - 4.0 * q * (1.0 - q) * (-ensemble.mean_photons).exp();
    0.5 * (1.0 - disc.max(0.0).sqrt())
}

/// Resolves the optimal projector angles.
///
/// For a uniform prior the split is symmetric, `φ₀ = φ₁ = (π/2 − φ)/2`. For
/// other priors the weighted error `q·sin²φ₀ + (1−q)·sin²φ₁` is minimised
/// numerically along the constraint `φ₀ + φ₁ = π/2 − φ`.
pub fn helstrom_projector(ensemble: &BinaryCoherentEnsemble) -> HelstromSolution {
    let q = ensemble.prior_q;
    let phi = ensemble.overlap().acos();
    let budget = FRAC_PI_2 - phi;

    let angle_0 = if q == 0.5 || budget <= 0.0 {
        0.5 * budget
    } else {
        let weighted = |x: f64| {
            let (s0, s1) = (x.sin(), (budget - x).sin());
            q * s0 * s0 + (1.0 - q) * s1 * s1
        };
        let domain = Interval::new(0.0, budget).expect("budget is positive here");
        maximize_1d(|x| -weighted(x), domain, 1e-13)
            .expect("objective is finite on a valid interval")
            .argmax
    };
    let angle_1 = budget - angle_0;
    let e0 = angle_0.sin().powi(2);
    let e1 = angle_1.sin().powi(2);
    HelstromSolution {
        avg_error: q * e0 + (1.0 - q) * e1,
        error_given_0: e0,
        error_given_1: e1,
        angle_phi: phi,
        projector_angle_0: angle_0,
        projector_angle_1: angle_1,
    }
}

/// Holevo quantity (bits) of the ensemble: the von Neumann entropy of the
/// average state, whose two eigenvalues are `(1 ± √(1 − 4q(1−q)(1−c²)))/2`.
pub fn holevo_binary(ensemble: &BinaryCoherentEnsemble) -> f64 {
    let q = ensemble.prior_q;
    let c = ensemble.overlap();
    let disc = 1.0 - 4.0 * q * (1.0 - q) * (1.0 - c * c);
    h2(0.5 * (1.0 + disc.max(0.0).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ens(n: f64, q: f64) -> BinaryCoherentEnsemble {
        BinaryCoherentEnsemble::new(n, q).unwrap()
    }

    #[test]
    fn overlap_values() {
        assert_eq!(overlap(0.0).unwrap(), 1.0);
        assert!((overlap(0.4).unwrap() - 0.818_730_753).abs() < 1e-9);
        assert!((overlap(100.0).unwrap() - 1.928_749_847_963_918e-22).abs() < 1e-24);
        assert!(overlap(-0.1).is_err());
        assert!(overlap(f64::NAN).is_err());
    }

    #[test]
    fn angle_values() {
        assert_eq!(distinguishability_angle(0.0).unwrap(), 0.0);
        let deg = distinguishability_angle(0.4).unwrap().to_degrees();
        assert!((deg - 35.0).abs() < 0.5, "{deg}");
        let mut prev = 0.0;
        for i in 1..60 {
            let a = distinguishability_angle(0.5 * i as f64).unwrap();
            assert!(a > prev && a < FRAC_PI_2);
            prev = a;
        }
        assert!((FRAC_PI_2 - distinguishability_angle(80.0).unwrap()) < 1e-15);
    }

    #[test]
    fn ensemble_validation() {
        assert!(BinaryCoherentEnsemble::new(-1.0, 0.5).is_err());
        assert!(BinaryCoherentEnsemble::new(1.0, 1.5).is_err());
        assert!(BinaryCoherentEnsemble::new(1.0, -0.1).is_err());
    }

    #[test]
    fn helstrom_error_values() {
        assert_eq!(helstrom_error(&ens(0.0, 0.5)), 0.5);
        let e = helstrom_error(&ens(0.4, 0.5));
        assert!((e - 0.2134).abs() < 5e-4, "{e}");
        assert_eq!(helstrom_error(&ens(3.0, 0.0)), 0.0);
        assert_eq!(helstrom_error(&ens(3.0, 1.0)), 0.0);
    }

    #[test]
    fn projector_symmetric_point() {
        let s = helstrom_projector(&ens(0.4, 0.5));
        assert!((s.projector_angle_0.to_degrees() - 27.5).abs() < 0.3);
        assert!((s.projector_angle_1.to_degrees() - 27.5).abs() < 0.3);
        assert!((s.avg_error - 0.2134).abs() < 5e-4);
        assert!((s.avg_error - helstrom_error(&ens(0.4, 0.5))).abs() < 1e-12);

        let s = helstrom_projector(&ens(0.0, 0.5));
        assert!((s.projector_angle_0 - FRAC_PI_2 / 2.0).abs() < 1e-15);
        assert!((s.error_given_0 - 0.5).abs() < 1e-15);
        assert!((s.error_given_1 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn projector_general_prior_matches_closed_form() {
        let s = helstrom_projector(&ens(0.4, 0.3));
        let closed = helstrom_error(&ens(0.4, 0.3));
        assert!((closed - 0.169_496).abs() < 1e-6, "{closed}");
        assert!((s.avg_error - closed).abs() < 1e-6);
    }

    #[test]
    fn projector_invariants_on_grid() {
        for qi in 1..=9 {
            let q = qi as f64 / 10.0;
            for ni in 0..=30 {
                let n = 10f64.powf(-2.0 + 3.0 * ni as f64 / 30.0);
                let e = ens(n, q);
                let s = helstrom_projector(&e);
                let weighted = q * s.error_given_0 + (1.0 - q) * s.error_given_1;
                assert!((weighted - s.avg_error).abs() < 1e-12);
                assert!(
                    (s.projector_angle_0 + s.projector_angle_1 - (FRAC_PI_2 - s.angle_phi)).abs()
                        < 1e-12
                );
                assert!((0.0..=0.5 + 1e-12).contains(&s.avg_error));
                for p in [s.error_given_0, s.error_given_1] {
                    assert!((0.0..=1.0).contains(&p), "q={q} n={n}: {p}");
                }
                assert!(
                    (s.avg_error - helstrom_error(&e)).abs() < 1e-6,
                    "q={q} n={n}"
                );
            }
        }
    }

    #[test]
    fn helstrom_below_guessing_and_monotone() {
        for qi in 0..=20 {
            let q = qi as f64 / 20.0;
            let mut prev = f64::INFINITY;
            for ni in 0..=40 {
                let n = 0.25 * ni as f64;
                let e = helstrom_error(&ens(n, q));
                assert!(e <= q.min(1.0 - q) + 1e-15);
                assert!(e <= prev + 1e-15);
                prev = e;
            }
        }
    }

    #[test]
    fn holevo_values() {
        assert!(holevo_binary(&ens(0.0, 0.5)).abs() < 1e-15);
        let chi = holevo_binary(&ens(0.4, 0.5));
        let c = overlap(0.4).unwrap();
        assert!((chi - h2(0.5 * (1.0 + c))).abs() < 1e-12);
        assert!((chi - 0.4388).abs() < 1e-3, "{chi}");
        assert!((holevo_binary(&ens(80.0, 0.5)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn accessible_information_below_holevo() {
        for qi in 1..=9 {
            let q = qi as f64 / 10.0;
            for ni in 0..=30 {
                let n = 10f64.powf(-2.0 + 3.0 * ni as f64 / 30.0);
                let e = ens(n, q);
                let info = helstrom_projector(&e).mutual_information(q);
                assert!(info <= holevo_binary(&e) + 1e-12, "q={q} n={n}");
                assert!(info >= -1e-12);
            }
        }
    }
}
