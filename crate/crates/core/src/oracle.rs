//! Brute-force verification path.
//!
//! Density operators are built as explicit dense matrices over a finite Fock
//! space `F = ⊕ H_M`, and every ensemble quantity is read off with a matrix
//! trace. Nothing here calls into the closed-form weight or energy code, so
//! agreement between the two paths is a genuine check.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::OracleError;
use crate::simplex::{DomainSpec, MixedState};

/// Hermiticity and trace tolerance of a valid ensemble.
pub const MATRIX_TOL: f64 = 1e-12;

/// Lowest eigenvalue accepted as positive semidefinite.
pub const PSD_FLOOR: f64 = -1e-10;

/// One particle-number sector of the model Fock space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sector {
    pub particle_count: u32,
    pub dimension: usize,
    pub ground_energy: f64,
}

/// Ordered list of sectors; the matrix basis is their concatenation.
#[derive(Debug, Clone, PartialEq)]
pub struct FockSpaceSpec {
    sectors: Vec<Sector>,
}

impl FockSpaceSpec {
    pub fn new(sectors: Vec<Sector>) -> Result<Self, OracleError> {
        if sectors.is_empty() {
            return Err(OracleError::EmptySpace);
        }
        if let Some(s) = sectors.iter().find(|s| s.dimension == 0) {
            return Err(OracleError::EmptySector(s.particle_count));
        }
        if sectors
            .windows(2)
            .any(|w| w[0].particle_count >= w[1].particle_count)
        {
            return Err(OracleError::UnorderedSectors);
        }
        Ok(Self { sectors })
    }

    /// The cation, neutral and anion sectors of a domain, each padded to
    /// `dimension` basis states.
    pub fn three_state(domain: &DomainSpec, dimension: usize) -> Result<Self, OracleError> {
        let counts = domain.sector_counts();
        let energies = domain.sector_energies();
        Self::new(
            counts
                .iter()
                .zip(energies)
                .map(|(&particle_count, ground_energy)| Sector {
                    particle_count,
                    dimension,
                    ground_energy,
                })
                .collect(),
        )
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    pub fn total_dimension(&self) -> usize {
        self.sectors.iter().map(|s| s.dimension).sum()
    }

    /// Index of the first basis vector of sector `m`.
    pub fn offset_of(&self, m: u32) -> Option<usize> {
        let mut offset = 0;
        for s in &self.sectors {
            if s.particle_count == m {
                return Some(offset);
            }
            offset += s.dimension;
        }
        None
    }

    /// Sector index of every basis vector.
    fn block_of_each_basis_vector(&self) -> Vec<usize> {
        self.sectors
            .iter()
            .enumerate()
            .flat_map(|(i, s)| std::iter::repeat_n(i, s.dimension))
            .collect()
    }
}

/// Hamiltonian and particle-number operator of a Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct Operators {
    pub hamiltonian: DMatrix<f64>,
    pub number: DMatrix<f64>,
}

/// Block-diagonal `H` and `N̂`. Each sector's Hamiltonian block is diagonal
/// with the ground energy first and fillers `E + 1, E + 2, ...` after it.
pub fn build_operators(space: &FockSpaceSpec) -> Operators {
    let dim = space.total_dimension();
    let mut hamiltonian = DMatrix::zeros(dim, dim);
    let mut number = DMatrix::zeros(dim, dim);
    let mut offset = 0;
    for s in space.sectors() {
        for k in 0..s.dimension {
            let i = offset + k;
            hamiltonian[(i, i)] = s.ground_energy + k as f64;
            number[(i, i)] = f64::from(s.particle_count);
        }
        offset += s.dimension;
    }
    Operators {
        hamiltonian,
        number,
    }
}

/// An explicit density operator over a [`FockSpaceSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleState {
    space: FockSpaceSpec,
    matrix: DMatrix<f64>,
}

impl EnsembleState {
    pub fn space(&self) -> &FockSpaceSpec {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Checks Hermiticity, unit trace, block-diagonal structure and
    /// positive semidefiniteness.
    pub fn check_invariants(&self) -> Result<(), OracleError> {
        let m = &self.matrix;
        let asym = (m - m.transpose()).amax();
        if asym > MATRIX_TOL {
            return Err(OracleError::NotHermitian(asym));
        }
        let trace = m.trace();
        if (trace - 1.0).abs() > MATRIX_TOL {
            return Err(OracleError::InvalidTrace(trace));
        }
        let blocks = self.space.block_of_each_basis_vector();
        for (col, bc) in blocks.iter().enumerate() {
            for (row, br) in blocks.iter().enumerate() {
                if br != bc && m[(row, col)] != 0.0 {
                    return Err(OracleError::OffBlock {
                        row,
                        col,
                        value: m[(row, col)],
                    });
                }
            }
        }
        let min_eigenvalue = self.eigenvalues().min();
        if min_eigenvalue < PSD_FLOOR {
            return Err(OracleError::NotPsd(min_eigenvalue));
        }
        Ok(())
    }

    pub fn eigenvalues(&self) -> nalgebra::DVector<f64> {
        SymmetricEigen::new(self.matrix.clone()).eigenvalues
    }
}

/// `D = Σ ω_M |Φ0^M⟩⟨Φ0^M|` with each sector's ground state as its first
/// basis vector. Repeated sectors in `weights` are accumulated.
pub fn build_ensemble(
    space: &FockSpaceSpec,
    weights: &[(u32, f64)],
) -> Result<EnsembleState, OracleError> {
    let dim = space.total_dimension();
    let mut matrix = DMatrix::zeros(dim, dim);
    let mut total = 0.0;
    for &(sector, weight) in weights {
        if weight < 0.0 {
            return Err(OracleError::NegativeWeight { sector, weight });
        }
        let i = space
            .offset_of(sector)
            .ok_or(OracleError::UnknownSector(sector))?;
        let mut ket = nalgebra::DVector::zeros(dim);
        ket[i] = 1.0;
        matrix += weight * &ket * ket.transpose();
        total += weight;
    }
    if (total - 1.0).abs() > MATRIX_TOL {
        return Err(OracleError::WeightSumError(total));
    }
    Ok(EnsembleState {
        space: space.clone(),
        matrix,
    })
}

/// Oracle representation of a symbolic three-state mixture.
pub fn ensemble_of(state: &MixedState<'_>, space: &FockSpaceSpec) -> Result<EnsembleState, OracleError> {
    build_ensemble(space, &state.sectors())
}

/// `Tr(obs · D)` by full matrix product.
pub fn trace_observable(state: &EnsembleState, obs: &DMatrix<f64>) -> Result<f64, OracleError> {
    let dim = state.matrix.nrows();
    if obs.nrows() != dim || obs.ncols() != dim {
        return Err(OracleError::DimensionMismatch {
            state: dim,
            rows: obs.nrows(),
            cols: obs.ncols(),
        });
    }
    Ok((obs * &state.matrix).trace())
}

/// `Tr(D²)`.
pub fn purity(state: &EnsembleState) -> f64 {
    (&state.matrix * &state.matrix).trace()
}
