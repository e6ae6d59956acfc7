//! Seeded generation of Schottky deformations, conjugators and perturbations.

use std::f64::consts::{PI, TAU};

use margulis_core::affine::{is_radiant, Cocycle};
use margulis_core::group::make_schottky;
use margulis_core::linalg::{DMatrix, Svd};
use margulis_core::lorentz::{boundary_angle, boundary_point, null_frame};
use margulis_core::{AffineIso, Error, LorentzMap, MVec, Presentation, Tolerances};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchottkyParams {
    pub rank: usize,
    pub t_min: f64,
    pub t_max: f64,
    /// Jitter of the axis angles, as a fraction of the even spacing `π/rank`.
    pub theta_jitter: f64,
    pub cocycle_scale: f64,
}

impl SchottkyParams {
    /// Translation lengths just above the ping-pong threshold for `rank`
    /// evenly spaced axes, so that no extra power is needed.
    pub fn for_rank(rank: usize) -> Self {
        let (t_min, t_max) = match rank {
            0..=2 => (1.9, 2.6),
            3 => (2.8, 3.4),
            _ => (3.4, 4.0),
        };
        Self { rank, t_min, t_max, theta_jitter: 0.1, cocycle_scale: 1.0 }
    }
}

impl Default for SchottkyParams {
    fn default() -> Self {
        Self::for_rank(2)
    }
}

pub fn random_vec(rng: &mut impl Rng, scale: f64) -> MVec {
    MVec::new(rng.gen_range(-scale..=scale), rng.gen_range(-scale..=scale), rng.gen_range(-scale..=scale))
}

/// Schottky generators with axes near evenly spaced angles and a uniform
/// random cocycle.
pub fn schottky_deformation(params: &SchottkyParams, rng: &mut impl Rng, tol: &Tolerances) -> Result<Presentation, Error> {
    let n = params.rank;
    let spacing = PI / n as f64;
    let ts: Vec<f64> = (0..n).map(|_| rng.gen_range(params.t_min..=params.t_max)).collect();
    let thetas: Vec<f64> = (0..n)
        .map(|i| i as f64 * spacing + params.theta_jitter * spacing * rng.gen_range(-0.5..=0.5))
        .collect();
    let linear = make_schottky(&ts, &thetas, tol)?;
    let u = Cocycle::new((0..n).map(|_| random_vec(rng, params.cocycle_scale)).collect());
    Ok(linear.with_cocycle(&u))
}

/// `rotation · boost · rotation`, optionally composed with the reflection
/// `diag(−1, 1, 1)`, and a random translation.
pub fn random_conjugator(rng: &mut impl Rng, reverse: bool, trans_scale: f64) -> AffineIso {
    let f = LorentzMap::rotation(rng.gen_range(0.0..TAU))
        .compose(&LorentzMap::boost(rng.gen_range(-1.0..=1.0)))
        .compose(&LorentzMap::rotation(rng.gen_range(0.0..TAU)));
    let f = if reverse { f.compose(&LorentzMap::reflection()) } else { f };
    AffineIso::new(f, random_vec(rng, trans_scale))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Perturbation {
    /// Contracting eigenvalue scaled by `1 + δ`.
    Eigenvalue,
    /// Attracting boundary point rotated by angle `δ`.
    EigendirectionAngle,
    /// Translational part moved by `δ` along a unit direction transverse to
    /// the coboundaries.
    Translation,
}

pub const PERTURBATIONS: [Perturbation; 3] = [Perturbation::Eigenvalue, Perturbation::EigendirectionAngle, Perturbation::Translation];

/// Unit vector of `R^{3n}` orthogonal to every coboundary `(v − gⱼ v)ⱼ`.
pub fn non_coboundary_direction(gens: &[LorentzMap], rng: &mut impl Rng) -> Vec<f64> {
    let n = gens.len();
    let mut c = DMatrix::zeros(3 * n, 3);
    for (k, g) in gens.iter().enumerate() {
        for i in 0..3 {
            for j in 0..3 {
                c.set(3 * k + i, j, if i == j { 1.0 } else { 0.0 } - g.matrix()[i][j]);
            }
        }
    }
    let svd = Svd::new(&c);
    let mut x: Vec<f64> = (0..3 * n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    for k in 0..3 {
        if svd.sigma[k] > 0.0 {
            let dot: f64 = (0..3 * n).map(|i| svd.u.get(i, k) * x[i]).sum();
            for (i, xi) in x.iter_mut().enumerate() {
                *xi -= dot * svd.u.get(i, k);
            }
        }
    }
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter().map(|v| v / norm).collect()
}

/// Applies a single-parameter perturbation of size `delta` to generator
/// `index` (or, for translations, to the whole cocycle).
pub fn perturb(p: &Presentation, kind: Perturbation, index: usize, delta: f64, rng: &mut impl Rng, tol: &Tolerances) -> Result<Presentation, Error> {
    let mut q = p.clone();
    let g = p.gens[index];
    match kind {
        Perturbation::Eigenvalue => {
            let f = null_frame(&g.linear, tol)?;
            let lin = LorentzMap::hyperbolic_from_endpoints(&f.xm, &f.xp, f.lambda * (1.0 + delta), tol)?;
            q.gens[index] = AffineIso::new(lin, g.trans);
        }
        Perturbation::EigendirectionAngle => {
            let f = null_frame(&g.linear, tol)?;
            let xp = boundary_point(boundary_angle(&f.xp) + delta);
            let lin = LorentzMap::hyperbolic_from_endpoints(&f.xm, &xp, f.lambda, tol)?;
            q.gens[index] = AffineIso::new(lin, g.trans);
        }
        Perturbation::Translation => {
            let dir = non_coboundary_direction(&p.linear_parts(), rng);
            for (j, gen) in q.gens.iter_mut().enumerate() {
                gen.trans += MVec::new(dir[3 * j], dir[3 * j + 1], dir[3 * j + 2]) * delta;
            }
        }
    }
    Ok(q)
}

/// Radiance residual below which a group counts as radiant.
pub fn radiant_point(p: &Presentation) -> Option<MVec> {
    is_radiant(&p.gens, margulis_core::isospectral::RADIANCE_TOL)
}
