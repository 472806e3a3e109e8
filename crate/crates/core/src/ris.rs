//! Phase-shift matrices for the three RIS circuit architectures.
//!
//! Element, block, row and column indices reported in errors are 1-based,
//! matching the usual `m ∈ {1, …, M}` numbering of surface elements.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::{CMatrix, CVector, C64};

/// Max-norm tolerance for unit-modulus and unitarity checks.
pub const UNIT_TOLERANCE: f64 = 1e-10;

/// Relative threshold on the smallest singular value below which
/// [`project_to_unitary`] treats its input as singular.
const SINGULAR_RCOND: f64 = 1e-12;

/// Circuit architecture of the surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Architecture {
    /// Classical diagonal RIS: every element is an independent phase shifter.
    SingleConnected,
    /// Beyond-diagonal RIS with every element interconnected.
    FullyConnected,
    /// Beyond-diagonal RIS split into `group_count` equal interconnected groups.
    GroupConnected { group_count: usize },
}

impl Architecture {
    /// Number of groups `U` for a surface with `elements` elements.
    pub fn group_count(&self, elements: usize) -> usize {
        match *self {
            Architecture::SingleConnected => elements,
            Architecture::FullyConnected => 1,
            Architecture::GroupConnected { group_count } => group_count,
        }
    }

    /// Elements per group `M̄ = M / U`.
    pub fn group_size(&self, elements: usize) -> Result<usize, RisError> {
        self.check_elements(elements)?;
        Ok(match *self {
            Architecture::SingleConnected => 1,
            Architecture::FullyConnected => elements,
            Architecture::GroupConnected { group_count } => elements / group_count,
        })
    }

    /// Number of entries of Φ allowed to be non-zero.
    pub fn nonzero_elements(&self, elements: usize) -> Result<usize, RisError> {
        let size = self.group_size(elements)?;
        Ok(self.group_count(elements) * size * size)
    }

    /// Checks that this architecture can be paired with `elements` elements.
    pub fn check_elements(&self, elements: usize) -> Result<(), RisError> {
        if elements == 0 {
            return Err(RisError::DimensionMismatch(
                "a surface needs at least one element".into(),
            ));
        }
        if let Architecture::GroupConnected { group_count } = *self {
            if group_count == 0 || !elements.is_multiple_of(group_count) {
                return Err(RisError::DimensionMismatch(format!(
                    "group count {group_count} does not divide element count {elements}"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Architecture::SingleConnected => f.write_str("sc"),
            Architecture::FullyConnected => f.write_str("fc"),
            Architecture::GroupConnected { group_count } => write!(f, "gc:{group_count}"),
        }
    }
}

impl FromStr for Architecture {
    type Err = RisError;

    /// Parses the labels `sc`, `fc` and `gc:U`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "sc" => return Ok(Architecture::SingleConnected),
            "fc" => return Ok(Architecture::FullyConnected),
            _ => {}
        }
        let groups = s
            .strip_prefix("gc:")
            .or_else(|| s.strip_prefix("GC:"))
            .ok_or_else(|| RisError::UnknownArchitecture(s.to_string()))?;
        match groups.trim().parse::<usize>() {
            Ok(group_count) if group_count > 0 => Ok(Architecture::GroupConnected { group_count }),
            _ => Err(RisError::UnknownArchitecture(s.to_string())),
        }
    }
}

/// Where a feasibility constraint failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintLocation {
    /// Diagonal entry `element` does not have unit modulus.
    UnitModulus { element: usize },
    /// Entry (`row`, `col`) of `Φ_uᴴ Φ_u − I` for block `block` is too large.
    Unitarity { block: usize, row: usize, col: usize },
    /// Entry (`row`, `col`) lies outside the architecture's sparsity pattern
    /// and is not exactly zero.
    OffPattern { row: usize, col: usize },
}

impl fmt::Display for ConstraintLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintLocation::UnitModulus { element } => {
                write!(f, "non-unit modulus at element m={element}")
            }
            ConstraintLocation::Unitarity { block, row, col } => {
                write!(f, "non-unitary block u={block} at ({row}, {col})")
            }
            ConstraintLocation::OffPattern { row, col } => {
                write!(f, "non-zero off-pattern entry at ({row}, {col})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RisError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("constraint violated: {location} (residual {residual:e})")]
    ConstraintViolated {
        location: ConstraintLocation,
        residual: f64,
    },
    #[error("matrix is singular to working precision")]
    SingularInput,
    #[error("singular value decomposition did not converge")]
    DecompositionFailed,
    #[error("channel entries must be finite")]
    NonFinite,
    #[error("unknown architecture label {0:?} (expected sc, fc or gc:U)")]
    UnknownArchitecture(String),
}

/// Scans `matrix` against the constraint set of `arch`.
///
/// Returns the largest numeric residual seen, or the first entry whose
/// residual exceeds `tol`. Off-pattern entries must be exactly zero
/// regardless of `tol`.
fn scan(matrix: &CMatrix, arch: &Architecture, tol: f64) -> Result<f64, RisError> {
    let (rows, cols) = matrix.shape();
    if rows != cols {
        return Err(RisError::DimensionMismatch(format!(
            "phase-shift matrix must be square, got {rows}x{cols}"
        )));
    }
    let size = arch.group_size(rows)?;

    for col in 0..cols {
        for row in 0..rows {
            if row / size != col / size {
                let entry = matrix[(row, col)];
                if entry != C64::new(0.0, 0.0) {
                    return Err(RisError::ConstraintViolated {
                        location: ConstraintLocation::OffPattern {
                            row: row + 1,
                            col: col + 1,
                        },
                        residual: entry.norm(),
                    });
                }
            }
        }
    }

    let mut worst = 0.0_f64;
    if size == 1 {
        for m in 0..rows {
            let residual = (matrix[(m, m)].norm() - 1.0).abs();
            if !(residual <= tol) {
                return Err(RisError::ConstraintViolated {
                    location: ConstraintLocation::UnitModulus { element: m + 1 },
                    residual,
                });
            }
            worst = worst.max(residual);
        }
        return Ok(worst);
    }

    for block in 0..rows / size {
        let start = block * size;
        let sub = matrix.view((start, start), (size, size));
        let gram = sub.adjoint() * sub;
        for col in 0..size {
            for row in 0..size {
                let target = if row == col { 1.0 } else { 0.0 };
                let residual = (gram[(row, col)] - C64::new(target, 0.0)).norm();
                if !(residual <= tol) {
                    return Err(RisError::ConstraintViolated {
                        location: ConstraintLocation::Unitarity {
                            block: block + 1,
                            row: row + 1,
                            col: col + 1,
                        },
                        residual,
                    });
                }
                worst = worst.max(residual);
            }
        }
    }
    Ok(worst)
}

/// Checks `matrix` against the feasibility constraints of `arch` at
/// [`UNIT_TOLERANCE`].
pub fn validate(matrix: &CMatrix, arch: &Architecture) -> Result<(), RisError> {
    scan(matrix, arch, UNIT_TOLERANCE).map(|_| ())
}

/// Largest unit-modulus or unitarity residual of `matrix` under `arch`.
///
/// Structural problems (wrong shape, non-zero off-pattern entries) are still
/// reported as errors.
pub fn constraint_residual(matrix: &CMatrix, arch: &Architecture) -> Result<f64, RisError> {
    scan(matrix, arch, f64::INFINITY)
}

/// A feasible phase-shift matrix tagged with its architecture.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseShiftMatrix {
    matrix: CMatrix,
    arch: Architecture,
}

impl PhaseShiftMatrix {
    /// Wraps `matrix` after checking it against `arch`.
    pub fn new(matrix: CMatrix, arch: Architecture) -> Result<Self, RisError> {
        validate(&matrix, &arch)?;
        Ok(Self { matrix, arch })
    }

    /// Skips validation. Only for constructions that are feasible by
    /// design; callers in tests re-check with [`validate`].
    pub(crate) fn from_parts_unchecked(matrix: CMatrix, arch: Architecture) -> Self {
        Self { matrix, arch }
    }

    /// Single-connected matrix `diag(e^{jθ_1}, …, e^{jθ_M})`.
    pub fn from_phases(phases: &[f64]) -> Result<Self, RisError> {
        let diag = CVector::from_iterator(
            phases.len(),
            phases.iter().map(|&theta| C64::from_polar(1.0, theta)),
        );
        Self::new(CMatrix::from_diagonal(&diag), Architecture::SingleConnected)
    }

    /// Block-diagonal matrix from equally sized square blocks.
    ///
    /// One block yields a fully-connected matrix, otherwise group-connected.
    pub fn from_blocks(blocks: &[CMatrix]) -> Result<Self, RisError> {
        let first = blocks
            .first()
            .ok_or_else(|| RisError::DimensionMismatch("no blocks given".into()))?;
        let size = first.nrows();
        if blocks.iter().any(|b| b.nrows() != size || b.ncols() != size) {
            return Err(RisError::DimensionMismatch(
                "blocks must be square and equally sized".into(),
            ));
        }
        let arch = if blocks.len() == 1 {
            Architecture::FullyConnected
        } else {
            Architecture::GroupConnected {
                group_count: blocks.len(),
            }
        };
        Self::new(block_diagonal(blocks, size), arch)
    }

    /// Identity matrix, feasible for every architecture.
    pub fn identity(arch: Architecture, elements: usize) -> Result<Self, RisError> {
        arch.check_elements(elements)?;
        Ok(Self {
            matrix: CMatrix::identity(elements, elements),
            arch,
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn architecture(&self) -> Architecture {
        self.arch
    }

    /// Number of surface elements `M`.
    pub fn elements(&self) -> usize {
        self.matrix.nrows()
    }

    /// Re-checks the stored matrix.
    pub fn validate(&self) -> Result<(), RisError> {
        validate(&self.matrix, &self.arch)
    }

    /// See [`constraint_residual`].
    pub fn residual(&self) -> Result<f64, RisError> {
        constraint_residual(&self.matrix, &self.arch)
    }
}

pub(crate) fn block_diagonal(blocks: &[CMatrix], size: usize) -> CMatrix {
    let total = size * blocks.len();
    let mut out = CMatrix::zeros(total, total);
    for (u, block) in blocks.iter().enumerate() {
        out.view_mut((u * size, u * size), (size, size))
            .copy_from(block);
    }
    out
}

/// One channel realization: LEO→RIS vector `h`, RIS→UT vector `g` and the
/// direct LEO→UT scalar `h_d`, all as dimensionless amplitude gains.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    h: CVector,
    g: CVector,
    direct: C64,
}

impl ChannelSet {
    pub fn new(h: CVector, g: CVector, direct: C64) -> Result<Self, RisError> {
        if h.len() != g.len() {
            return Err(RisError::DimensionMismatch(format!(
                "h has {} entries but g has {}",
                h.len(),
                g.len()
            )));
        }
        let finite = |z: &C64| z.re.is_finite() && z.im.is_finite();
        if !(h.iter().all(finite) && g.iter().all(finite) && finite(&direct)) {
            return Err(RisError::NonFinite);
        }
        Ok(Self { h, g, direct })
    }

    /// Convenience constructor from slices.
    pub fn from_slices(h: &[C64], g: &[C64], direct: C64) -> Result<Self, RisError> {
        Self::new(CVector::from_column_slice(h), CVector::from_column_slice(g), direct)
    }

    pub fn h(&self) -> &CVector {
        &self.h
    }

    pub fn g(&self) -> &CVector {
        &self.g
    }

    pub fn direct(&self) -> C64 {
        self.direct
    }

    pub fn elements(&self) -> usize {
        self.h.len()
    }
}

/// End-to-end scalar channel `h_eff = gᵀ Φ h + h_d`.
///
/// `g` enters transposed, not conjugated, so a single-connected surface
/// contributes `Σ_m g_m φ_m h_m`.
pub fn effective_channel(phi: &PhaseShiftMatrix, ch: &ChannelSet) -> Result<C64, RisError> {
    if phi.elements() != ch.elements() {
        return Err(RisError::DimensionMismatch(format!(
            "surface has {} elements but channel has {}",
            phi.elements(),
            ch.elements()
        )));
    }
    let reflected = phi.matrix() * ch.h();
    Ok(ch.g().dot(&reflected) + ch.direct())
}

/// Closest unitary matrix to `a` in Frobenius norm (unitary polar factor).
pub fn project_to_unitary(a: &CMatrix) -> Result<CMatrix, RisError> {
    if !a.is_square() || a.nrows() == 0 {
        return Err(RisError::DimensionMismatch(format!(
            "expected a non-empty square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if a.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(RisError::NonFinite);
    }
    let svd = a
        .clone()
        .try_svd(true, true, f64::EPSILON, 0)
        .ok_or(RisError::DecompositionFailed)?;
    let largest = svd.singular_values.max();
    let smallest = svd.singular_values.min();
    if largest == 0.0 || smallest <= SINGULAR_RCOND * largest {
        return Err(RisError::SingularInput);
    }
    match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => Ok(u * v_t),
        _ => Err(RisError::DecompositionFailed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_norm(m: &CMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn diag(entries: &[C64]) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_column_slice(entries))
    }

    #[test]
    fn unit_modulus_diagonal_is_single_connected() {
        let m = diag(&[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)]);
        assert!(validate(&m, &Architecture::SingleConnected).is_ok());
    }

    #[test]
    fn identity_is_fully_connected() {
        assert!(validate(&CMatrix::identity(4, 4), &Architecture::FullyConnected).is_ok());
    }

    #[test]
    fn oversized_modulus_reports_element_and_residual() {
        let m = diag(&[c(2.0, 0.0), c(1.0, 0.0)]);
        let err = validate(&m, &Architecture::SingleConnected).unwrap_err();
        assert_eq!(
            err,
            RisError::ConstraintViolated {
                location: ConstraintLocation::UnitModulus { element: 1 },
                residual: 1.0,
            }
        );
    }

    #[test]
    fn off_diagonal_entry_breaks_single_connected() {
        let mut m = CMatrix::identity(3, 3);
        m[(0, 2)] = c(1e-300, 0.0);
        match validate(&m, &Architecture::SingleConnected) {
            Err(RisError::ConstraintViolated {
                location: ConstraintLocation::OffPattern { row: 1, col: 3 },
                ..
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn group_count_must_divide_elements() {
        let arch = Architecture::GroupConnected { group_count: 3 };
        assert!(matches!(
            validate(&CMatrix::identity(4, 4), &arch),
            Err(RisError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn non_unitary_block_is_located() {
        let mut m = CMatrix::identity(4, 4);
        m[(2, 3)] = c(0.5, 0.0);
        let err = validate(&m, &Architecture::GroupConnected { group_count: 2 }).unwrap_err();
        assert!(matches!(
            err,
            RisError::ConstraintViolated {
                location: ConstraintLocation::Unitarity { block: 2, .. },
                ..
            }
        ));
    }

    #[test]
    fn nan_entries_are_rejected() {
        let m = diag(&[c(f64::NAN, 0.0)]);
        assert!(validate(&m, &Architecture::SingleConnected).is_err());
        assert!(validate(&m, &Architecture::FullyConnected).is_err());
    }

    #[test]
    fn architecture_labels_round_trip() {
        for arch in [
            Architecture::SingleConnected,
            Architecture::FullyConnected,
            Architecture::GroupConnected { group_count: 4 },
        ] {
            assert_eq!(arch.to_string().parse::<Architecture>().unwrap(), arch);
        }
        assert!("gc:0".parse::<Architecture>().is_err());
        assert!("xc".parse::<Architecture>().is_err());
    }

    #[test]
    fn nonzero_counts_follow_group_sizes() {
        assert_eq!(Architecture::SingleConnected.nonzero_elements(8).unwrap(), 8);
        assert_eq!(Architecture::FullyConnected.nonzero_elements(8).unwrap(), 64);
        let gc = Architecture::GroupConnected { group_count: 2 };
        assert_eq!(gc.nonzero_elements(8).unwrap(), 32);
        assert_eq!(gc.group_size(8).unwrap(), 4);
    }

    #[test]
    fn effective_channel_examples() {
        let phi = PhaseShiftMatrix::identity(Architecture::FullyConnected, 2).unwrap();
        let ch = ChannelSet::from_slices(&[c(0.0, 0.0), c(1.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)], c(0.0, 0.0))
            .unwrap();
        assert_eq!(effective_channel(&phi, &ch).unwrap(), c(0.0, 0.0));

        let phi = PhaseShiftMatrix::new(diag(&[c(1.0, 0.0), c(0.0, 1.0)]), Architecture::SingleConnected)
            .unwrap();
        let ones = [c(1.0, 0.0), c(1.0, 0.0)];
        let ch = ChannelSet::from_slices(&ones, &ones, c(1.0, 0.0)).unwrap();
        let h_eff = effective_channel(&phi, &ch).unwrap();
        assert!((h_eff - c(2.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn effective_channel_rejects_length_mismatch() {
        let phi = PhaseShiftMatrix::identity(Architecture::SingleConnected, 3).unwrap();
        let ones = [c(1.0, 0.0); 2];
        let ch = ChannelSet::from_slices(&ones, &ones, c(0.0, 0.0)).unwrap();
        assert!(matches!(
            effective_channel(&phi, &ch),
            Err(RisError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn channel_set_rejects_bad_input() {
        let one = [c(1.0, 0.0)];
        let two = [c(1.0, 0.0); 2];
        assert!(ChannelSet::from_slices(&one, &two, c(0.0, 0.0)).is_err());
        assert_eq!(
            ChannelSet::from_slices(&one, &[c(f64::INFINITY, 0.0)], c(0.0, 0.0)),
            Err(RisError::NonFinite)
        );
    }

    #[test]
    fn projection_removes_scaling() {
        let a = CMatrix::identity(3, 3) * c(2.0, 0.0);
        let u = project_to_unitary(&a).unwrap();
        assert!(max_norm(&(u - CMatrix::identity(3, 3))) < 1e-14);
    }

    #[test]
    fn projection_fixes_unitary_input() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let a = CMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(0.0, s), c(0.0, s), c(s, 0.0)]);
        let u = project_to_unitary(&a).unwrap();
        assert!(max_norm(&(u - &a)) < 1e-12);
    }

    #[test]
    fn projection_rejects_singular_and_non_square() {
        assert_eq!(project_to_unitary(&CMatrix::zeros(2, 2)), Err(RisError::SingularInput));
        let rank_one = CMatrix::from_element(3, 3, c(1.0, 0.0));
        assert_eq!(project_to_unitary(&rank_one), Err(RisError::SingularInput));
        assert!(matches!(
            project_to_unitary(&CMatrix::zeros(2, 3)),
            Err(RisError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn from_blocks_picks_architecture() {
        let i2 = CMatrix::identity(2, 2);
        let fc = PhaseShiftMatrix::from_blocks(std::slice::from_ref(&i2)).unwrap();
        assert_eq!(fc.architecture(), Architecture::FullyConnected);
        let gc = PhaseShiftMatrix::from_blocks(&[i2.clone(), i2.clone(), i2]).unwrap();
        assert_eq!(gc.architecture(), Architecture::GroupConnected { group_count: 3 });
        assert_eq!(gc.elements(), 6);
        assert_eq!(gc.residual().unwrap(), 0.0);
    }
}
