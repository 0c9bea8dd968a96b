//! Weight algebra and geometry of the three-state 2-simplex.
//!
//! A domain with `N` electrons that may donate or accept at most `q`
//! electrons is described by a convex mixture of the ground states of the
//! `N - q`, `N` and `N + q` sectors. The mixture coefficients live on a
//! triangle whose coordinates are `(nu/q, omega_N)`: the top vertex is the
//! pure neutral state, the bottom corners are the pure ionic states, and the
//! sides `gamma+` / `gamma-` are the two-state ground lines.

use std::fmt;

use crate::error::{DomainError, SimplexError};

/// Absolute slack for weight normalization and bounds.
pub const WEIGHT_TOL: f64 = 1e-12;

/// Default band used by [`classify`] to decide boundary membership.
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-9;

/// A molecular domain: electron count, maximal transfer and the ground-state
/// energies of its three sectors.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    label: String,
    n_electrons: u32,
    q: u32,
    e_neutral: f64,
    e_anion: f64,
    e_cation: f64,
}

impl DomainSpec {
    /// Validates `q >= 1`, `N - q >= 0`, finite energies and `I^q > 0`.
    pub fn new(
        label: impl Into<String>,
        n_electrons: u32,
        q: u32,
        e_neutral: f64,
        e_anion: f64,
        e_cation: f64,
    ) -> Result<Self, DomainError> {
        let label = label.into();
        if q == 0 {
            return Err(DomainError::ZeroTransfer { label });
        }
        if n_electrons < q {
            return Err(DomainError::ElectronCountUnderflow {
                label,
                n_electrons,
                q,
            });
        }
        for (field, value) in [
            ("e_neutral", e_neutral),
            ("e_anion", e_anion),
            ("e_cation", e_cation),
        ] {
            if !value.is_finite() {
                return Err(DomainError::NonFinite { label, field });
            }
        }
        let i_q = e_cation - e_neutral;
        if i_q <= 0.0 {
            return Err(DomainError::NonPositiveIonization { label, i_q });
        }
        Ok(Self {
            label,
            n_electrons,
            q,
            e_neutral,
            e_anion,
            e_cation,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n_electrons(&self) -> u32 {
        self.n_electrons
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn e_neutral(&self) -> f64 {
        self.e_neutral
    }

    pub fn e_anion(&self) -> f64 {
        self.e_anion
    }

    pub fn e_cation(&self) -> f64 {
        self.e_cation
    }

    /// `I^q = E(N-q) - E(N)`.
    pub fn ionization(&self) -> f64 {
        self.e_cation - self.e_neutral
    }

    /// `A^q = E(N) - E(N+q)`.
    pub fn affinity(&self) -> f64 {
        self.e_neutral - self.e_anion
    }

    /// Particle counts of the cation, neutral and anion sectors.
    pub fn sector_counts(&self) -> [u32; 3] {
        [
            self.n_electrons - self.q,
            self.n_electrons,
            self.n_electrons + self.q,
        ]
    }

    /// Sector ground energies in the same order as [`Self::sector_counts`].
    pub fn sector_energies(&self) -> [f64; 3] {
        [self.e_cation, self.e_neutral, self.e_anion]
    }
}

fn check_range(what: &'static str, value: f64, min: f64, max: f64) -> Result<f64, SimplexError> {
    let slack = WEIGHT_TOL * max.abs().max(1.0);
    if !value.is_finite() || value < min - slack || value > max + slack {
        return Err(SimplexError::OutOfRange {
            what,
            value,
            min,
            max,
        });
    }
    Ok(value.clamp(min, max))
}

fn check_transfer(q: u32) -> Result<u32, SimplexError> {
    if q == 0 {
        return Err(SimplexError::OutOfRange {
            what: "q",
            value: 0.0,
            min: 1.0,
            max: f64::from(u32::MAX),
        });
    }
    Ok(q)
}

/// Transferred charge `nu` in electrons, `-q <= nu <= q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargeFraction {
    nu: f64,
    q: u32,
}

impl ChargeFraction {
    pub fn new(nu: f64, q: u32) -> Result<Self, SimplexError> {
        let qf = f64::from(check_transfer(q)?);
        let nu = check_range("nu", nu, -qf, qf)?;
        Ok(Self { nu, q })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Dimensionless abscissa `nu/q`.
    pub fn ratio(&self) -> f64 {
        self.nu / f64::from(self.q)
    }
}

/// Which side of the simplex a horizontal line is referenced to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// Right half, `nu > 0`, edge `gamma+`.
    Acceptor,
    /// Left half, `nu < 0`, edge `gamma-`.
    Donor,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Acceptor => 1.0,
            Side::Donor => -1.0,
        }
    }
}

/// Edge value `nu0` of the charge fraction on a horizontal line of the simplex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceFraction {
    nu0: f64,
    q: u32,
}

impl ReferenceFraction {
    pub fn new(nu0: f64, q: u32) -> Result<Self, SimplexError> {
        let qf = f64::from(check_transfer(q)?);
        let nu0 = check_range("nu0", nu0, -qf, qf)?;
        Ok(Self { nu0, q })
    }

    pub fn nu0(&self) -> f64 {
        self.nu0
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// `None` only at the top vertex, where `nu0 = 0`.
    pub fn side(&self) -> Option<Side> {
        if self.nu0 > 0.0 {
            Some(Side::Acceptor)
        } else if self.nu0 < 0.0 {
            Some(Side::Donor)
        } else {
            None
        }
    }

    /// Neutral weight shared by every state on this horizontal line.
    pub fn omega_n(&self) -> f64 {
        1.0 - self.nu0.abs() / f64::from(self.q)
    }
}

/// Edge fraction of the horizontal line at height `w_zero`: `nu0 = ±q (1 - w_zero)`.
pub fn reference_fraction(w_zero: f64, side: Side, q: u32) -> Result<ReferenceFraction, SimplexError> {
    let w_zero = check_range("omega_n", w_zero, 0.0, 1.0)?;
    let q = check_transfer(q)?;
    ReferenceFraction::new(side.sign() * f64::from(q) * (1.0 - w_zero), q)
}

/// Maps values within [`WEIGHT_TOL`] of the unit interval onto it.
fn clamp_unit(w: f64) -> Option<f64> {
    if (0.0..=1.0).contains(&w) {
        // folds -0.0 into +0.0
        Some(w + 0.0)
    } else if (-WEIGHT_TOL..0.0).contains(&w) {
        Some(0.0)
    } else if w > 1.0 && w <= 1.0 + WEIGHT_TOL {
        Some(1.0)
    } else {
        None
    }
}

/// Convex coefficients of the cation, neutral and anion ground states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightVector {
    w_minus: f64,
    w_zero: f64,
    w_plus: f64,
}

impl WeightVector {
    pub fn new(w_minus: f64, w_zero: f64, w_plus: f64) -> Result<Self, SimplexError> {
        let unit = |what, w: f64| {
            clamp_unit(w).ok_or(SimplexError::OutOfRange {
                what,
                value: w,
                min: 0.0,
                max: 1.0,
            })
        };
        let w_minus = unit("w_minus", w_minus)?;
        let w_zero = unit("omega_n", w_zero)?;
        let w_plus = unit("w_plus", w_plus)?;
        let sum = w_minus + w_zero + w_plus;
        if (sum - 1.0).abs() > WEIGHT_TOL {
            return Err(SimplexError::OutOfRange {
                what: "weight sum",
                value: sum,
                min: 1.0,
                max: 1.0,
            });
        }
        Ok(Self {
            w_minus,
            w_zero,
            w_plus,
        })
    }

    /// Pure state of the cation (`-1`), neutral (`0`) or anion (`+1`) sector.
    pub fn vertex(sector: i8) -> Self {
        let (w_minus, w_zero, w_plus) = match sector.signum() {
            -1 => (1.0, 0.0, 0.0),
            0 => (0.0, 1.0, 0.0),
            _ => (0.0, 0.0, 1.0),
        };
        Self {
            w_minus,
            w_zero,
            w_plus,
        }
    }

    pub fn w_minus(&self) -> f64 {
        self.w_minus
    }

    pub fn w_zero(&self) -> f64 {
        self.w_zero
    }

    pub fn w_plus(&self) -> f64 {
        self.w_plus
    }

    /// `[w_minus, w_zero, w_plus]`.
    pub fn as_array(&self) -> [f64; 3] {
        [self.w_minus, self.w_zero, self.w_plus]
    }

    pub fn sum(&self) -> f64 {
        self.w_minus + self.w_zero + self.w_plus
    }

    /// Simplex coordinate `(w_plus - w_minus, w_zero)` of this mixture.
    pub fn point(&self) -> SimplexPoint {
        SimplexPoint::new(self.w_plus - self.w_minus, self.w_zero)
    }

    /// Builds the weights for a charge fraction on the line of height `w_zero`.
    pub fn from_charge(nu: ChargeFraction, w_zero: f64) -> Result<Self, SimplexError> {
        weights_from_omega_n(nu.ratio(), w_zero)
    }
}

/// Solves the normalization and first-moment conditions for the ionic
/// weights given the abscissa `x = nu/q` and the neutral weight.
pub fn weights_from_omega_n(x: f64, w_zero: f64) -> Result<WeightVector, SimplexError> {
    let x = check_range("x", x, -1.0, 1.0)?;
    let w_zero = check_range("omega_n", w_zero, 0.0, 1.0)?;
    let w_plus = (1.0 + x - w_zero) / 2.0;
    let w_minus = (1.0 - x - w_zero) / 2.0;
    if w_plus < -WEIGHT_TOL || w_minus < -WEIGHT_TOL {
        return Err(SimplexError::OutsideSimplex { x, w_zero });
    }
    WeightVector::new(w_minus, w_zero, w_plus)
}

/// Region-resolved weights of a state at charge `nu` on the horizontal line
/// referenced by the edge fraction `nu0`.
pub fn weights_from_reference(
    nu: ChargeFraction,
    nu0: ReferenceFraction,
) -> Result<WeightVector, SimplexError> {
    if nu.q() != nu0.q() {
        return Err(SimplexError::ChargeMismatch {
            left: nu.q(),
            right: nu0.q(),
        });
    }
    let (n, r) = (nu.nu(), nu0.nu0());
    let qf = f64::from(nu.q());
    let slack = WEIGHT_TOL * qf;
    if n.abs() > r.abs() + slack {
        return Err(SimplexError::InconsistentReference { nu: n, nu0: r });
    }
    if (r > 0.0 && n < -slack) || (r < 0.0 && n > slack) {
        return Err(SimplexError::SignMismatch { nu: n, nu0: r });
    }
    let two_q = 2.0 * qf;
    let (w_minus, w_zero, w_plus) = if r >= 0.0 {
        ((-n + r) / two_q, 1.0 - r / qf, (n + r) / two_q)
    } else {
        ((-n - r) / two_q, 1.0 + r / qf, (n - r) / two_q)
    };
    WeightVector::new(w_minus, w_zero, w_plus)
}

/// A coordinate `(nu/q, omega_N)` of the simplex diagram. Any pair is
/// representable; use [`classify`] to decide where it falls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexPoint {
    pub x: f64,
    pub w_zero: f64,
}

impl SimplexPoint {
    pub fn new(x: f64, w_zero: f64) -> Self {
        Self { x, w_zero }
    }

    /// `(w_minus, w_plus)` implied by normalization and the first moment.
    pub fn edge_weights(&self) -> (f64, f64) {
        (
            (1.0 - self.x - self.w_zero) / 2.0,
            (1.0 + self.x - self.w_zero) / 2.0,
        )
    }

    pub fn contains(&self, tol: f64) -> bool {
        classify(*self, tol) != Region::Outside
    }
}

/// Location of a simplex point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    /// `Δ+`: all three weights positive, `nu > 0`.
    InteriorAcceptor,
    /// `Δ-`: all three weights positive, `nu < 0`.
    InteriorDonor,
    /// `γ+`: cation weight zero.
    EdgeAcceptor,
    /// `γ-`: anion weight zero.
    EdgeDonor,
    /// `nu = 0` strictly between the origin and the top vertex.
    NeutralAxis,
    VertexNeutral,
    VertexAnion,
    VertexCation,
    /// Midpoint of the base: equal mixture of the two ionic states.
    Origin,
    Outside,
}

impl Region {
    pub const ALL: [Region; 10] = [
        Region::InteriorAcceptor,
        Region::InteriorDonor,
        Region::EdgeAcceptor,
        Region::EdgeDonor,
        Region::NeutralAxis,
        Region::VertexNeutral,
        Region::VertexAnion,
        Region::VertexCation,
        Region::Origin,
        Region::Outside,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Region::InteriorAcceptor => "InteriorAcceptor",
            Region::InteriorDonor => "InteriorDonor",
            Region::EdgeAcceptor => "EdgeAcceptor",
            Region::EdgeDonor => "EdgeDonor",
            Region::NeutralAxis => "NeutralAxis",
            Region::VertexNeutral => "VertexNeutral",
            Region::VertexAnion => "VertexAnion",
            Region::VertexCation => "VertexCation",
            Region::Origin => "Origin",
            Region::Outside => "Outside",
        }
    }

    pub fn is_vertex(self) -> bool {
        matches!(
            self,
            Region::VertexNeutral | Region::VertexAnion | Region::VertexCation
        )
    }

    pub fn is_edge(self) -> bool {
        matches!(self, Region::EdgeAcceptor | Region::EdgeDonor)
    }

    /// Vertices, edges, axis and origin.
    pub fn is_boundary(self) -> bool {
        self.is_vertex()
            || self.is_edge()
            || matches!(self, Region::NeutralAxis | Region::Origin)
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Assigns a point to exactly one [`Region`].
///
/// Priority: vertices and origin, then edges, then the neutral axis, then
/// the two interiors. Base points with `0 < |x| < 1` belong to the interiors.
pub fn classify(p: SimplexPoint, tol: f64) -> Region {
    let tol = tol.max(0.0);
    let SimplexPoint { x, w_zero: w } = p;
    if !x.is_finite() || !w.is_finite() {
        return Region::Outside;
    }
    if x < -1.0 - tol || x > 1.0 + tol || w < -tol || w > 1.0 + tol {
        return Region::Outside;
    }
    if w > 1.0 - x.abs() + tol {
        return Region::Outside;
    }
    let near = |a: f64, b: f64| (a - b).abs() <= tol;
    if near(x, 0.0) && near(w, 1.0) {
        return Region::VertexNeutral;
    }
    if near(x, 1.0) && near(w, 0.0) {
        return Region::VertexAnion;
    }
    if near(x, -1.0) && near(w, 0.0) {
        return Region::VertexCation;
    }
    if near(x, 0.0) && near(w, 0.0) {
        return Region::Origin;
    }
    if near(w, 1.0 - x.abs()) {
        return if x > 0.0 {
            Region::EdgeAcceptor
        } else {
            Region::EdgeDonor
        };
    }
    if near(x, 0.0) {
        return Region::NeutralAxis;
    }
    if x > 0.0 {
        Region::InteriorAcceptor
    } else {
        Region::InteriorDonor
    }
}

/// Symbolic three-state mixture: sector particle count mapped to weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedState<'a> {
    domain: &'a DomainSpec,
    weights: WeightVector,
}

impl<'a> MixedState<'a> {
    pub fn domain(&self) -> &'a DomainSpec {
        self.domain
    }

    pub fn weights(&self) -> WeightVector {
        self.weights
    }

    /// `(M, weight)` for `M = N-q, N, N+q`.
    pub fn sectors(&self) -> [(u32, f64); 3] {
        let [m_minus, m_zero, m_plus] = self.domain.sector_counts();
        [
            (m_minus, self.weights.w_minus),
            (m_zero, self.weights.w_zero),
            (m_plus, self.weights.w_plus),
        ]
    }

    /// Weight carried by the sector with `m` particles (zero if absent).
    pub fn weight_of(&self, m: u32) -> f64 {
        self.sectors()
            .iter()
            .find(|(count, _)| *count == m)
            .map_or(0.0, |(_, w)| *w)
    }

    /// True when one sector carries all the weight.
    pub fn is_pure(&self) -> bool {
        self.weights.as_array().contains(&1.0)
    }
}

pub fn assemble_state(domain: &DomainSpec, w: WeightVector) -> MixedState<'_> {
    MixedState { domain, weights: w }
}

/// First moment `<M>` of the sector distribution.
pub fn mean_particle_number(domain: &DomainSpec, w: WeightVector) -> f64 {
    let [m_minus, m_zero, m_plus] = domain.sector_counts();
    f64::from(m_minus) * w.w_minus + f64::from(m_zero) * w.w_zero + f64::from(m_plus) * w.w_plus
}
