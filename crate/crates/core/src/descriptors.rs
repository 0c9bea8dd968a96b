//! Closed-form ensemble energies and chemical descriptors.
//!
//! Along a horizontal line of the simplex (fixed `omega_N`) the energy varies
//! with slope `mu0/q`; along a vertical line (fixed `nu`) it varies with slope
//! `±eta0/q`. [`delta_h`] and [`delta_u`] evaluate both differences by direct
//! subtraction of energies; the functions in [`closed_form`] give the same
//! quantities from the descriptors alone.

use std::fmt;

use crate::error::SimplexError;
use crate::simplex::{
    reference_fraction, weights_from_omega_n, weights_from_reference, ChargeFraction, DomainSpec,
    ReferenceFraction, Side, SimplexPoint, WeightVector,
};

/// `I^q`, `A^q`, chemical potential, hardness and mean ionic energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescriptorSet {
    pub i_q: f64,
    pub a_q: f64,
    pub mu0: f64,
    pub eta0: f64,
    pub e_bar: f64,
}

/// Raised when `|A^q| >= I^q`; results are still computed.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityWarning {
    pub label: String,
    pub i_q: f64,
    pub a_q: f64,
}

impl fmt::Display for ConvexityWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: |A_q|={} is not below I_q={}; mu0 < 0 and eta0 > 0 are not guaranteed",
            self.label,
            self.a_q.abs(),
            self.i_q
        )
    }
}

impl DescriptorSet {
    pub fn convexity_holds(&self) -> bool {
        self.a_q.abs() < self.i_q
    }
}

/// Descriptors of a domain plus the non-fatal convexity flag.
pub fn descriptor_set(domain: &DomainSpec) -> (DescriptorSet, Option<ConvexityWarning>) {
    let i_q = domain.ionization();
    let a_q = domain.affinity();
    let set = DescriptorSet {
        i_q,
        a_q,
        // written as a difference so a symmetric domain gives +0, not -0
        mu0: (-a_q - i_q) / 2.0,
        eta0: (i_q - a_q) / 2.0,
        e_bar: (domain.e_anion() + domain.e_cation()) / 2.0,
    };
    let warning = (!set.convexity_holds()).then(|| ConvexityWarning {
        label: domain.label().to_string(),
        i_q,
        a_q,
    });
    (set, warning)
}

/// Convex combination of the sector ground energies.
pub fn energy(domain: &DomainSpec, w: WeightVector) -> f64 {
    w.w_minus() * domain.e_cation() + w.w_zero() * domain.e_neutral() + w.w_plus() * domain.e_anion()
}

/// Two-state ground-line energy on `gamma±` at edge fraction `nu0`.
pub fn edge_energy(domain: &DomainSpec, nu0: ReferenceFraction) -> f64 {
    let t = nu0.nu0() / f64::from(nu0.q());
    if t >= 0.0 {
        (1.0 - t) * domain.e_neutral() + t * domain.e_anion()
    } else {
        (1.0 + t) * domain.e_neutral() - t * domain.e_cation()
    }
}

/// A simplex point with its weights and energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyPoint {
    pub point: SimplexPoint,
    pub weights: WeightVector,
    pub energy: f64,
}

pub fn energy_point(domain: &DomainSpec, x: f64, w_zero: f64) -> Result<EnergyPoint, SimplexError> {
    let weights = weights_from_omega_n(x, w_zero)?;
    Ok(EnergyPoint {
        point: SimplexPoint::new(x, w_zero),
        weights,
        energy: energy(domain, weights),
    })
}

fn check_q(domain: &DomainSpec, q: u32) -> Result<(), SimplexError> {
    if domain.q() != q {
        return Err(SimplexError::ChargeMismatch {
            left: domain.q(),
            right: q,
        });
    }
    Ok(())
}

/// Sign of the side a reference fraction refers to; the top vertex counts as
/// acceptor since both sides coincide there.
fn side_sign(nu0: ReferenceFraction) -> f64 {
    nu0.side().unwrap_or(Side::Acceptor).sign()
}

/// `ΔH± = ±(E(nu; nu0) - E0(gamma±))`: energy of a state relative to the
/// ground line closing its horizontal line.
pub fn delta_h(
    domain: &DomainSpec,
    nu: ChargeFraction,
    nu0: ReferenceFraction,
) -> Result<f64, SimplexError> {
    check_q(domain, nu.q())?;
    let w = weights_from_reference(nu, nu0)?;
    Ok(side_sign(nu0) * (energy(domain, w) - edge_energy(domain, nu0)))
}

/// `ΔU± = E(nu; nu0') - E(nu; nu0)`: energy change along the vertical line
/// through `nu`.
pub fn delta_u(
    domain: &DomainSpec,
    nu: ChargeFraction,
    nu0: ReferenceFraction,
    nu0_prime: ReferenceFraction,
) -> Result<f64, SimplexError> {
    check_q(domain, nu.q())?;
    if let (Some(a), Some(b)) = (nu0.side(), nu0_prime.side()) {
        if a != b {
            return Err(SimplexError::SideMismatch {
                nu0: nu0.nu0(),
                nu0_prime: nu0_prime.nu0(),
            });
        }
    }
    let lower = energy(domain, weights_from_reference(nu, nu0)?);
    let upper = energy(domain, weights_from_reference(nu, nu0_prime)?);
    Ok(upper - lower)
}

/// Descriptor-only expressions for the energy differences.
pub mod closed_form {
    use super::DescriptorSet;

    /// `±((nu - nu0)/q) mu0`.
    pub fn delta_h_from_mu(d: &DescriptorSet, nu: f64, nu0: f64, q: u32) -> f64 {
        side(nu0) * (nu - nu0) / f64::from(q) * d.mu0
    }

    /// `∓((nu - nu0)/2q)(A^q + I^q)`.
    pub fn delta_h_from_ai(d: &DescriptorSet, nu: f64, nu0: f64, q: u32) -> f64 {
        -side(nu0) * (nu - nu0) / (2.0 * f64::from(q)) * (d.a_q + d.i_q)
    }

    /// `±((nu0' - nu0)/q) eta0`.
    pub fn delta_u_from_eta(d: &DescriptorSet, nu0: f64, nu0_prime: f64, q: u32) -> f64 {
        let s = if nu0 != 0.0 { side(nu0) } else { side(nu0_prime) };
        s * (nu0_prime - nu0) / f64::from(q) * d.eta0
    }

    fn side(nu0: f64) -> f64 {
        if nu0 < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
}

/// Energies at `samples` equally spaced states on the horizontal line of
/// height `w_zero`, from `gamma-` to `gamma+` inclusive.
pub fn energy_trend_check(
    domain: &DomainSpec,
    w_zero: f64,
    samples: usize,
) -> Result<Vec<f64>, SimplexError> {
    let q = domain.q();
    let samples = samples.max(2);
    let acceptor = reference_fraction(w_zero, Side::Acceptor, q)?;
    let donor = reference_fraction(w_zero, Side::Donor, q)?;
    let reach = acceptor.nu0();
    let last = (samples - 1) as f64;
    (0..samples)
        .map(|k| {
            let nu = if k + 1 == samples {
                reach
            } else {
                -reach + 2.0 * reach * (k as f64) / last
            };
            let reference = if nu < 0.0 { donor } else { acceptor };
            let w = weights_from_reference(ChargeFraction::new(nu, q)?, reference)?;
            Ok(energy(domain, w))
        })
        .collect()
}

/// Default finite-difference step for a domain: `1e-5 q`.
pub fn default_step(domain: &DomainSpec) -> f64 {
    1e-5 * f64::from(domain.q())
}

/// Central differences `(∂E/∂nu, ∂E/∂nu0)` at `p`, with `nu0` taken on the
/// side of `p`. Requires a margin larger than `h` to every boundary and to
/// the neutral axis.
pub fn slope_checks(domain: &DomainSpec, p: SimplexPoint, h: f64) -> Result<(f64, f64), SimplexError> {
    let q = domain.q();
    let qf = f64::from(q);
    let nu = p.x * qf;
    let reach = qf * (1.0 - p.w_zero);
    let fits = h > 0.0
        && nu.abs() > h
        && nu.abs() + h < reach
        && reach + h < qf
        && p.w_zero < 1.0;
    if !fits {
        return Err(SimplexError::BoundaryTooClose { h });
    }
    let side = if nu > 0.0 { 1.0 } else { -1.0 };
    let nu0 = side * reach;
    let at = |nu: f64, nu0: f64| -> Result<f64, SimplexError> {
        let w = weights_from_reference(ChargeFraction::new(nu, q)?, ReferenceFraction::new(nu0, q)?)?;
        Ok(energy(domain, w))
    };
    let d_nu = (at(nu + h, nu0)? - at(nu - h, nu0)?) / (2.0 * h);
    let d_nu0 = (at(nu, nu0 + h)? - at(nu, nu0 - h)?) / (2.0 * h);
    Ok((d_nu, d_nu0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> DomainSpec {
        DomainSpec::new("fixture", 6, 1, -100.0, -99.0, -90.0).unwrap()
    }

    fn symmetric(c: f64) -> DomainSpec {
        DomainSpec::new("symmetric", 8, 2, -50.0, -50.0 + c, -50.0 + c).unwrap()
    }

    fn cf(nu: f64) -> ChargeFraction {
        ChargeFraction::new(nu, 1).unwrap()
    }

    fn rf(nu0: f64) -> ReferenceFraction {
        ReferenceFraction::new(nu0, 1).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn descriptor_examples() {
        let (d, warn) = descriptor_set(&fixture());
        assert!(warn.is_none());
        assert_eq!(
            d,
            DescriptorSet {
                i_q: 10.0,
                a_q: -1.0,
                mu0: -4.5,
                eta0: 5.5,
                e_bar: -94.5
            }
        );
        // A_q = -I_q sits on the convexity boundary and is flagged
        let (d, warn) = descriptor_set(&symmetric(3.0));
        assert!(warn.is_some());
        assert_eq!(d.mu0, 0.0);
        assert!(d.mu0.is_sign_positive());
        assert_eq!(d.eta0, 3.0);
    }

    #[test]
    fn convexity_warning_is_flagged() {
        // bound anion deeper than the ionization step: A_q = 11 > I_q = 10
        let d = DomainSpec::new("deep", 6, 1, -100.0, -111.0, -90.0).unwrap();
        let (set, warn) = descriptor_set(&d);
        let warn = warn.expect("warning");
        assert_eq!(warn.label, "deep");
        assert_eq!(set.a_q, 11.0);
        assert!(set.eta0 < 0.0);
        // positive affinity below I_q is fine
        let bound = DomainSpec::new("bound", 6, 1, -100.0, -101.0, -90.0).unwrap();
        assert!(descriptor_set(&bound).1.is_none());
    }

    #[test]
    fn energy_examples() {
        let d = fixture();
        assert_eq!(energy(&d, WeightVector::vertex(0)), -100.0);
        let w = WeightVector::new(0.05, 0.4, 0.55).unwrap();
        close(energy(&d, w), -98.95, 1e-12);
        let origin = WeightVector::new(0.5, 0.0, 0.5).unwrap();
        assert_eq!(energy(&d, origin), -94.5);
    }

    #[test]
    fn edge_energy_examples() {
        let d = fixture();
        assert_eq!(edge_energy(&d, rf(0.0)), -100.0);
        close(edge_energy(&d, rf(0.6)), -99.4, 1e-12);
        assert_eq!(edge_energy(&d, rf(-1.0)), -90.0);
        assert_eq!(edge_energy(&d, rf(1.0)), -99.0);
        for nu0 in [-0.9, -0.3, 0.2, 0.75] {
            let via_weights = energy(&d, weights_from_reference(cf(nu0), rf(nu0)).unwrap());
            close(edge_energy(&d, rf(nu0)), via_weights, 1e-12);
        }
    }

    #[test]
    fn delta_h_examples() {
        let d = fixture();
        let (set, _) = descriptor_set(&d);
        let dh = delta_h(&d, cf(0.5), rf(0.6)).unwrap();
        close(dh, 0.45, 1e-12);
        close(closed_form::delta_h_from_mu(&set, 0.5, 0.6, 1), 0.45, 1e-12);
        close(closed_form::delta_h_from_ai(&set, 0.5, 0.6, 1), 0.45, 1e-12);

        assert_eq!(delta_h(&d, cf(0.6), rf(0.6)).unwrap(), 0.0);
        assert_eq!(delta_h(&d, cf(-0.35), rf(-0.35)).unwrap(), 0.0);

        let dh = delta_h(&d, cf(-0.2), rf(-0.6)).unwrap();
        close(dh, 1.8, 1e-12);
        close(closed_form::delta_h_from_mu(&set, -0.2, -0.6, 1), 1.8, 1e-12);
        close(closed_form::delta_h_from_ai(&set, -0.2, -0.6, 1), 1.8, 1e-12);

        assert!(matches!(
            delta_h(&d, cf(0.7), rf(0.6)),
            Err(SimplexError::InconsistentReference { .. })
        ));
        let other_q = ChargeFraction::new(0.5, 2).unwrap();
        assert!(matches!(
            delta_h(&d, other_q, ReferenceFraction::new(0.6, 2).unwrap()),
            Err(SimplexError::ChargeMismatch { .. })
        ));
    }

    #[test]
    fn delta_u_examples() {
        let d = fixture();
        let (set, _) = descriptor_set(&d);
        let du = delta_u(&d, cf(0.3), rf(0.6), rf(0.4)).unwrap();
        close(du, -1.1, 1e-12);
        close(closed_form::delta_u_from_eta(&set, 0.6, 0.4, 1), -1.1, 1e-12);
        assert_eq!(delta_u(&d, cf(0.3), rf(0.6), rf(0.6)).unwrap(), 0.0);
        let du = delta_u(&d, cf(-0.1), rf(-0.5), rf(-0.2)).unwrap();
        close(du, -1.65, 1e-12);
        close(closed_form::delta_u_from_eta(&set, -0.5, -0.2, 1), -1.65, 1e-12);

        assert!(matches!(
            delta_u(&d, cf(0.0), rf(0.5), rf(-0.2)),
            Err(SimplexError::SideMismatch { .. })
        ));
        assert!(matches!(
            delta_u(&d, cf(0.3), rf(0.6), rf(0.2)),
            Err(SimplexError::InconsistentReference { .. })
        ));
    }

    #[test]
    fn trend_on_fixture() {
        let d = fixture();
        let e = energy_trend_check(&d, 0.4, 5).unwrap();
        assert_eq!(e.len(), 5);
        // endpoints are the two ground lines
        close(e[0], edge_energy(&d, rf(-0.6)), 1e-12);
        close(e[0], -94.0, 1e-12);
        close(e[4], -99.4, 1e-12);
        assert!(e.windows(2).all(|w| w[0] > w[1]), "{e:?}");

        let flat = energy_trend_check(&symmetric(2.0), 0.3, 7).unwrap();
        assert!(flat.iter().all(|&v| (v - flat[0]).abs() < 1e-12));

        let top = energy_trend_check(&d, 1.0, 4).unwrap();
        assert!(top.iter().all(|&v| v == -100.0));
    }

    #[test]
    fn slopes_on_fixture() {
        let d = fixture();
        let h = default_step(&d);
        let (dn, dn0) = slope_checks(&d, SimplexPoint::new(0.3, 0.4), h).unwrap();
        close(dn, -4.5, 4.5e-6);
        close(dn0, 5.5, 5.5e-6);
        let (dn, dn0) = slope_checks(&d, SimplexPoint::new(-0.3, 0.4), h).unwrap();
        close(dn, -4.5, 4.5e-6);
        close(dn0, -5.5, 5.5e-6);

        let s = symmetric(3.0);
        let (dn, dn0) = slope_checks(&s, SimplexPoint::new(0.2, 0.5), default_step(&s)).unwrap();
        close(dn, 0.0, 1e-6);
        close(dn0, 1.5, 1.5e-6);

        for p in [(0.0, 0.4), (0.6, 0.4), (0.1, 0.0), (0.0, 1.0)] {
            assert!(matches!(
                slope_checks(&d, SimplexPoint::new(p.0, p.1), h),
                Err(SimplexError::BoundaryTooClose { .. })
            ));
        }
    }

    #[test]
    fn neutral_axis_energy() {
        let d = fixture();
        let (set, _) = descriptor_set(&d);
        for nu0 in [0.2, 0.6, -0.8] {
            let w = weights_from_reference(cf(0.0), rf(nu0)).unwrap();
            assert_eq!(w.w_plus(), w.w_minus());
            let t = f64::abs(nu0);
            close(energy(&d, w), (1.0 - t) * d.e_neutral() + t * set.e_bar, 1e-12);
        }
    }
}
