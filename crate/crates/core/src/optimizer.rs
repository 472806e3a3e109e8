//! Phase-shift designs maximizing the end-to-end channel gain `|h_eff|`.
//!
//! With one antenna at each end every architecture has an exact optimum:
//!
//! - single-connected: co-phase each term `g_m φ_m h_m` with `h_d`, giving
//!   `|h_d| + Σ_m |g_m||h_m|`;
//! - fully-connected: map `h/‖h‖` onto `conj(g)/‖g‖` with a unitary, giving
//!   `|h_d| + ‖g‖‖h‖`;
//! - group-connected: the fully-connected design per group, giving
//!   `|h_d| + Σ_u ‖g_u‖‖h_u‖`.
//!
//! The brute-force searches in this module are only meant as test oracles.

use std::f64::consts::{FRAC_PI_2, TAU};

use thiserror::Error;

use crate::ris::{block_diagonal, effective_channel, Architecture, ChannelSet, PhaseShiftMatrix, RisError};
use crate::{CMatrix, CVector, C64};

/// Largest surface [`brute_force_sc`] accepts.
pub const BRUTE_FORCE_MAX_ELEMENTS: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptimizeError {
    #[error(transparent)]
    Ris(#[from] RisError),
    #[error("brute force over {elements} elements is too large (max {BRUTE_FORCE_MAX_ELEMENTS})")]
    TooLarge { elements: usize },
    #[error("the two-element unitary search needs exactly 2 elements, got {0}")]
    WrongDimension(usize),
    #[error("grid needs at least {min} points, got {got}")]
    GridTooCoarse { min: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeResult {
    pub phi: PhaseShiftMatrix,
    /// `|h_eff|` recomputed from `phi` and the channel.
    pub objective: f64,
    pub architecture: Architecture,
    /// Set when `g` or `h` is identically zero: every feasible design then
    /// attains `|h_d|` and the returned matrix is an arbitrary choice.
    pub degenerate: bool,
}

impl OptimizeResult {
    fn evaluate(phi: PhaseShiftMatrix, ch: &ChannelSet) -> Result<Self, RisError> {
        let objective = effective_channel(&phi, ch)?.norm();
        let degenerate = ch.g().norm() == 0.0 || ch.h().norm() == 0.0;
        Ok(Self {
            architecture: phi.architecture(),
            phi,
            objective,
            degenerate,
        })
    }
}

/// Phase of the direct link, or 0 when there is none.
fn reference_phase(ch: &ChannelSet) -> f64 {
    let d = ch.direct();
    if d == C64::new(0.0, 0.0) {
        0.0
    } else {
        d.arg()
    }
}

/// Dispatches to the optimizer for `arch`.
pub fn optimize(ch: &ChannelSet, arch: Architecture) -> Result<OptimizeResult, OptimizeError> {
    match arch {
        Architecture::SingleConnected => Ok(optimize_sc(ch)),
        Architecture::FullyConnected => Ok(optimize_fc(ch)),
        Architecture::GroupConnected { group_count } => optimize_gc(ch, group_count),
    }
}

/// Optimal diagonal design `φ_m = e^{j(arg h_d − arg(g_m h_m))}`.
pub fn optimize_sc(ch: &ChannelSet) -> OptimizeResult {
    let theta = reference_phase(ch);
    let phases: Vec<C64> = ch
        .g()
        .iter()
        .zip(ch.h().iter())
        .map(|(g, h)| C64::from_polar(1.0, theta - (g * h).arg()))
        .collect();
    let phi = PhaseShiftMatrix::from_parts_unchecked(
        CMatrix::from_diagonal(&CVector::from_vec(phases)),
        Architecture::SingleConnected,
    );
    OptimizeResult::evaluate(phi, ch).expect("design matches channel length")
}

/// Optimal unitary design `Φ = e^{jθ} u vᴴ + U⊥ V⊥ᴴ` with `u = conj(g)/‖g‖`
/// and `v = h/‖h‖`.
///
/// Falls back to `Φ = I` with [`OptimizeResult::degenerate`] set when `g` or
/// `h` vanishes.
pub fn optimize_fc(ch: &ChannelSet) -> OptimizeResult {
    let theta = reference_phase(ch);
    let m = ch.elements();
    let matrix = aligning_unitary(ch.g().as_slice(), ch.h().as_slice(), theta)
        .unwrap_or_else(|| CMatrix::identity(m, m));
    let phi = PhaseShiftMatrix::from_parts_unchecked(matrix, Architecture::FullyConnected);
    OptimizeResult::evaluate(phi, ch).expect("design matches channel length")
}

/// Optimal block-diagonal design: the fully-connected construction on each
/// group `(g_u, h_u)`, all sharing the reference phase of `h_d`.
pub fn optimize_gc(ch: &ChannelSet, group_count: usize) -> Result<OptimizeResult, OptimizeError> {
    let arch = Architecture::GroupConnected { group_count };
    let size = arch.group_size(ch.elements())?;
    let theta = reference_phase(ch);
    let g = ch.g().as_slice();
    let h = ch.h().as_slice();
    let blocks: Vec<CMatrix> = (0..group_count)
        .map(|u| {
            let span = u * size..(u + 1) * size;
            aligning_unitary(&g[span.clone()], &h[span], theta).unwrap_or_else(|| {
                CMatrix::identity(size, size) * C64::from_polar(1.0, theta)
            })
        })
        .collect();
    let phi = PhaseShiftMatrix::from_parts_unchecked(block_diagonal(&blocks, size), arch);
    Ok(OptimizeResult::evaluate(phi, ch)?)
}

/// Householder reflector data `(w, β)` with `(I − 2wwᴴ/wᴴw) x = β e₁` for a
/// unit vector `x`. The sign of `β` is chosen against `x₀` so `w ≠ 0`.
fn householder(x: &[C64]) -> (Vec<C64>, C64) {
    let x0 = x[0];
    let phase = if x0 == C64::new(0.0, 0.0) {
        C64::new(1.0, 0.0)
    } else {
        x0 / x0.norm()
    };
    let beta = -phase;
    let mut w = x.to_vec();
    w[0] -= beta;
    (w, beta)
}

/// Unitary `Φ` with `gᵀ Φ h = e^{jθ} ‖g‖‖h‖`, or `None` if `g` or `h` is zero.
///
/// Built as `Q_u D Q_vᴴ` where `Q_u`, `Q_v` are scaled Householder
/// reflectors whose first columns are `u` and `v` and
/// `D = diag(e^{jθ}, 1, …, 1)`. Cost is O(M²).
fn aligning_unitary(g: &[C64], h: &[C64], theta: f64) -> Option<CMatrix> {
    let g_norm = g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let h_norm = h.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if g_norm == 0.0 || h_norm == 0.0 {
        return None;
    }
    let u: Vec<C64> = g.iter().map(|z| z.conj() / g_norm).collect();
    let v: Vec<C64> = h.iter().map(|z| z / h_norm).collect();
    let (wu, beta_u) = householder(&u);
    let (wv, beta_v) = householder(&v);
    let tau_u = 2.0 / wu.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let tau_v = 2.0 / wv.iter().map(|z| z.norm_sqr()).sum::<f64>();

    let n = g.len();
    let rotation = C64::from_polar(1.0, theta);
    let d = |i: usize| if i == 0 { rotation } else { C64::new(1.0, 0.0) };

    // X = D H_v = D − τ_v (D w_v) w_vᴴ
    let mut x = CMatrix::from_fn(n, n, |i, j| {
        let diag = if i == j { d(i) } else { C64::new(0.0, 0.0) };
        diag - d(i) * wv[i] * wv[j].conj() * tau_v
    });
    // H_u X = X − τ_u w_u (w_uᴴ X)
    let row: Vec<C64> = (0..n)
        .map(|j| (0..n).map(|i| wu[i].conj() * x[(i, j)]).sum::<C64>())
        .collect();
    let scale = beta_u * beta_v.conj();
    for j in 0..n {
        for i in 0..n {
            x[(i, j)] = (x[(i, j)] - wu[i] * row[j] * tau_u) * scale;
        }
    }
    Some(x)
}

/// Exhaustive search over `φ_m ∈ {e^{j2πk/grid}}` for `M ≤ 4`.
pub fn brute_force_sc(ch: &ChannelSet, grid: usize) -> Result<OptimizeResult, OptimizeError> {
    let m = ch.elements();
    if m > BRUTE_FORCE_MAX_ELEMENTS {
        return Err(OptimizeError::TooLarge { elements: m });
    }
    if grid < 4 {
        return Err(OptimizeError::GridTooCoarse { min: 4, got: grid });
    }
    Architecture::SingleConnected.check_elements(m)?;
    let points: Vec<C64> = (0..grid)
        .map(|k| C64::from_polar(1.0, TAU * k as f64 / grid as f64))
        .collect();
    let terms: Vec<C64> = ch.g().iter().zip(ch.h().iter()).map(|(g, h)| g * h).collect();

    let mut index = vec![0usize; m];
    let mut best = (f64::NEG_INFINITY, index.clone());
    loop {
        let value = index
            .iter()
            .zip(&terms)
            .fold(ch.direct(), |acc, (&k, t)| acc + t * points[k])
            .norm();
        if value > best.0 {
            best = (value, index.clone());
        }
        // odometer increment
        let mut pos = 0;
        while pos < m {
            index[pos] += 1;
            if index[pos] < grid {
                break;
            }
            index[pos] = 0;
            pos += 1;
        }
        if pos == m {
            break;
        }
    }
    let diag = CVector::from_iterator(m, best.1.iter().map(|&k| points[k]));
    let phi = PhaseShiftMatrix::new(CMatrix::from_diagonal(&diag), Architecture::SingleConnected)?;
    Ok(OptimizeResult::evaluate(phi, ch)?)
}

/// 2×2 unitary `e^{jα} [[e^{jβ}cosγ, e^{jδ}sinγ], [−e^{−jδ}sinγ, e^{−jβ}cosγ]]`.
pub fn unitary2(alpha: f64, beta: f64, gamma: f64, delta: f64) -> CMatrix {
    let global = C64::from_polar(1.0, alpha);
    let (s, c) = gamma.sin_cos();
    CMatrix::from_row_slice(
        2,
        2,
        &[
            global * C64::from_polar(c, beta),
            global * C64::from_polar(s, delta),
            -global * C64::from_polar(s, -delta),
            global * C64::from_polar(c, -beta),
        ],
    )
}

/// Grid search over the four-angle parametrization of U(2).
///
/// `α, β, δ` take `grid` points on `[0, 2π)`; `γ` takes `grid` points on
/// `[0, π/2]` including both ends.
pub fn brute_force_fc2(ch: &ChannelSet, grid: usize) -> Result<OptimizeResult, OptimizeError> {
    if ch.elements() != 2 {
        return Err(OptimizeError::WrongDimension(ch.elements()));
    }
    if grid < 2 {
        return Err(OptimizeError::GridTooCoarse { min: 2, got: grid });
    }
    let (g, h, hd) = (ch.g(), ch.h(), ch.direct());
    let phases: Vec<(f64, C64)> = (0..grid)
        .map(|k| {
            let angle = TAU * k as f64 / grid as f64;
            (angle, C64::from_polar(1.0, angle))
        })
        .collect();
    let tilts: Vec<(f64, f64, f64)> = (0..grid)
        .map(|k| {
            let gamma = FRAC_PI_2 * k as f64 / (grid - 1) as f64;
            let (s, c) = gamma.sin_cos();
            (gamma, s, c)
        })
        .collect();

    // gᵀ U h = e^{jα} [cosγ (g₀h₀e^{jβ} + g₁h₁e^{−jβ}) + sinγ (g₀h₁e^{jδ} − g₁h₀e^{−jδ})]
    let diagonal: Vec<C64> = phases
        .iter()
        .map(|&(_, e)| g[0] * h[0] * e + g[1] * h[1] * e.conj())
        .collect();
    let cross: Vec<C64> = phases
        .iter()
        .map(|&(_, e)| g[0] * h[1] * e - g[1] * h[0] * e.conj())
        .collect();

    let mut best = (f64::NEG_INFINITY, [0.0; 4]);
    for &(alpha, rot) in &phases {
        for (ib, diag) in diagonal.iter().enumerate() {
            for &(gamma, s, c) in &tilts {
                for (id, off) in cross.iter().enumerate() {
                    let value = (rot * (diag * c + off * s) + hd).norm();
                    if value > best.0 {
                        best = (value, [alpha, phases[ib].0, gamma, phases[id].0]);
                    }
                }
            }
        }
    }
    let [a, b, c, d] = best.1;
    let phi = PhaseShiftMatrix::new(unitary2(a, b, c, d), Architecture::FullyConnected)?;
    Ok(OptimizeResult::evaluate(phi, ch)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::gaussian_channels;
    use crate::ris::validate;

    fn max_norm(m: &CMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn channels(h: &[C64], g: &[C64], hd: C64) -> ChannelSet {
        ChannelSet::from_slices(h, g, hd).unwrap()
    }

    #[test]
    fn sc_aligns_every_term() {
        let ch = channels(&[c(1.0, 0.0), c(1.0, 0.0)], &[c(1.0, 0.0), c(0.0, 1.0)], c(1.0, 0.0));
        let res = optimize_sc(&ch);
        assert!((res.objective - 3.0).abs() < 1e-14);
        let diag = res.phi.matrix().diagonal();
        assert!((diag[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((diag[1] - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn sc_single_element_without_direct_link() {
        let ch = channels(&[C64::from_polar(0.7, 1.1)], &[C64::from_polar(2.0, -0.4)], c(0.0, 0.0));
        assert!((optimize_sc(&ch).objective - 1.4).abs() < 1e-14);
    }

    #[test]
    fn fc_beats_sc_on_disjoint_supports() {
        let ch = channels(&[c(0.0, 0.0), c(1.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)], c(0.0, 0.0));
        assert!(optimize_sc(&ch).objective.abs() < 1e-15);
        let fc = optimize_fc(&ch);
        assert!((fc.objective - 1.0).abs() < 1e-14);
        validate(fc.phi.matrix(), &Architecture::FullyConnected).unwrap();
    }

    #[test]
    fn fc_equals_sc_under_common_magnitudes() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = [C64::from_polar(s, 0.3), C64::from_polar(s, -2.0)];
        let g = [C64::from_polar(s, 1.7), C64::from_polar(s, 0.9)];
        let ch = channels(&h, &g, c(0.0, 0.0));
        assert!((optimize_fc(&ch).objective - optimize_sc(&ch).objective).abs() < 1e-14);
    }

    #[test]
    fn fc_degenerate_channel_returns_identity() {
        let ch = channels(&[c(0.0, 0.0); 3], &[c(1.0, 0.0); 3], c(0.5, 0.5));
        let res = optimize_fc(&ch);
        assert!(res.degenerate);
        assert_eq!(res.phi.matrix(), &CMatrix::identity(3, 3));
        assert!((res.objective - c(0.5, 0.5).norm()).abs() < 1e-15);
    }

    #[test]
    fn gc_extremes_match_sc_and_fc() {
        for seed in 0..20 {
            let ch = gaussian_channels(6, seed);
            let sc = optimize_sc(&ch);
            let fc = optimize_fc(&ch);
            let gc_m = optimize_gc(&ch, 6).unwrap();
            let gc_1 = optimize_gc(&ch, 1).unwrap();
            assert!(max_norm(&(gc_m.phi.matrix() - sc.phi.matrix())) < 1e-12);
            assert!((gc_m.objective - sc.objective).abs() < 1e-12);
            assert!((gc_1.objective - fc.objective).abs() < 1e-12);
        }
    }

    #[test]
    fn gc_sandwiched_between_sc_and_fc() {
        for seed in 0..50 {
            let ch = gaussian_channels(4, seed);
            let gc = optimize_gc(&ch, 2).unwrap();
            assert!(optimize_sc(&ch).objective <= gc.objective + 1e-12);
            assert!(gc.objective <= optimize_fc(&ch).objective + 1e-12);
            validate(gc.phi.matrix(), &gc.architecture).unwrap();
        }
    }

    #[test]
    fn gc_rejects_non_divisor() {
        let ch = gaussian_channels(6, 0);
        assert!(matches!(optimize_gc(&ch, 4), Err(OptimizeError::Ris(RisError::DimensionMismatch(_)))));
    }

    #[test]
    fn brute_force_sc_trivial_and_limits() {
        let ch = channels(&[c(1.0, 0.0)], &[c(1.0, 0.0)], c(0.0, 0.0));
        assert!((brute_force_sc(&ch, 4).unwrap().objective - 1.0).abs() < 1e-15);
        assert_eq!(
            brute_force_sc(&gaussian_channels(5, 0), 4),
            Err(OptimizeError::TooLarge { elements: 5 })
        );
        assert!(brute_force_sc(&ch, 3).is_err());
    }

    #[test]
    fn brute_force_sc_never_beats_closed_form() {
        for seed in 0..5 {
            let ch = gaussian_channels(3, seed);
            let grid = brute_force_sc(&ch, 32).unwrap();
            assert!(grid.objective <= optimize_sc(&ch).objective + 1e-12);
        }
    }

    #[test]
    fn unitary2_is_unitary() {
        let u = unitary2(0.3, -1.2, 0.7, 2.9);
        validate(&u, &Architecture::FullyConnected).unwrap();
    }

    #[test]
    fn brute_force_fc2_small_cases() {
        let ch = channels(&[c(0.0, 0.0), c(1.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)], c(0.0, 0.0));
        assert!(brute_force_fc2(&ch, 32).unwrap().objective >= 0.995);
        let ch = channels(&[c(1.0, 0.0), c(0.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)], c(0.0, 0.0));
        assert!(brute_force_fc2(&ch, 32).unwrap().objective >= 0.995);
        assert_eq!(
            brute_force_fc2(&gaussian_channels(3, 0), 8),
            Err(OptimizeError::WrongDimension(3))
        );
    }
}
