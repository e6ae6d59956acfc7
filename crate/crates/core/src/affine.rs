//! Affine isometries `x ↦ g(x) + v` of Minkowski space, with the origin of the
//! affine chart fixed once and for all.

use alloc::vec::Vec;


use crate::error::{Error, Result};
use crate::linalg::{self, DMatrix};
use crate::lorentz::{null_frame, LorentzMap, MVec};
use crate::tolerance::Tolerances;
use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineIso {
    pub linear: LorentzMap,
    pub trans: MVec,
}

impl AffineIso {
    pub fn new(linear: LorentzMap, trans: MVec) -> Self {
        Self { linear, trans }
    }

    pub fn identity() -> Self {
        Self::new(LorentzMap::identity(), MVec::ZERO)
    }

    pub fn translation(v: MVec) -> Self {
        Self::new(LorentzMap::identity(), v)
    }

    pub fn linear(g: LorentzMap) -> Self {
        Self::new(g, MVec::ZERO)
    }

    pub fn apply(&self, x: &MVec) -> MVec {
        self.linear.apply(x) + self.trans
    }

    /// `self ∘ other`; the translational part is `v_self + g_self(v_other)`.
    pub fn compose(&self, other: &AffineIso) -> AffineIso {
        AffineIso::new(self.linear.compose(&other.linear), self.trans + self.linear.apply(&other.trans))
    }

    pub fn inverse(&self) -> AffineIso {
        let inv = self.linear.inverse();
        AffineIso::new(inv, -inv.apply(&self.trans))
    }

    pub fn pow(&self, n: i64) -> AffineIso {
        let base = if n < 0 { self.inverse() } else { *self };
        let mut acc = AffineIso::identity();
        for _ in 0..n.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    /// `eta ∘ self ∘ eta⁻¹`.
    pub fn conjugate_by(&self, eta: &AffineIso) -> AffineIso {
        eta.compose(self).compose(&eta.inverse())
    }

    /// 4×4 homogeneous matrix `[[g, v], [0, 1]]`.
    pub fn homogeneous(&self) -> [[f64; 4]; 4] {
        let m = self.linear.matrix();
        let v = self.trans.0;
        [
            [m[0][0], m[0][1], m[0][2], v[0]],
            [m[1][0], m[1][1], m[1][2], v[1]],
            [m[2][0], m[2][1], m[2][2], v[2]],
            [0.0, 0.0, 0.0, 1.0],
        ]
    }

    /// Operator ∞-norm (max absolute row sum) of the difference of the
    /// homogeneous matrices.
    pub fn op_distance(&self, other: &AffineIso) -> f64 {
        let (a, b) = (self.homogeneous(), other.homogeneous());
        (0..4)
            .map(|i| (0..4).map(|j| (a[i][j] - b[i][j]).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// The unique spacelike line preserved by a hyperbolic affine isometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantLine {
    pub point: MVec,
    /// `x⁰` of the owning element.
    pub dir: MVec,
}

impl InvariantLine {
    pub fn translated(&self, v: &MVec) -> InvariantLine {
        InvariantLine { point: self.point + *v, dir: self.dir }
    }

    /// Euclidean distance from `x` to the line.
    pub fn distance_to(&self, x: &MVec) -> f64 {
        let d = *x - self.point;
        let u = self.dir.euclid_normalized().unwrap_or(self.dir);
        (d - u * d.euclid_dot(&u)).euclid_norm()
    }
}

/// Splitting `v = a x⁰ + w` with `w ∈ span{x⁻, x⁺}`, the point
/// `p = s x⁻ + t x⁺` solving `(g − I)p = −w` lies on the invariant line.
pub fn invariant_line(gamma: &AffineIso, tol: &Tolerances) -> Result<InvariantLine> {
    let f = null_frame(&gamma.linear, tol)?;
    let v = gamma.trans;
    let a = v.dot(&f.x0);
    let w = v - f.x0 * a;
    let pm = f.xm.dot(&f.xp);
    // w = b x⁻ + c x⁺ (both null, so ⟨w, x⁺⟩ = b ⟨x⁻, x⁺⟩)
    let b = w.dot(&f.xp) / pm;
    let c = w.dot(&f.xm) / pm;
    let s = -b / (f.lambda - 1.0);
    let t = -c / (1.0 / f.lambda - 1.0);
    Ok(InvariantLine { point: f.xm * s + f.xp * t, dir: f.x0 })
}

/// `α(γ) = ⟨γ(x) − x, x⁰(γ)⟩`, evaluated at the origin.
pub fn margulis(gamma: &AffineIso, tol: &Tolerances) -> Result<f64> {
    let f = null_frame(&gamma.linear, tol)?;
    Ok(gamma.trans.dot(&f.x0))
}

/// `⟨γ(x) − x, x⁰(γ)⟩` at an arbitrary point `x`.
pub fn margulis_at(gamma: &AffineIso, x: &MVec, tol: &Tolerances) -> Result<f64> {
    let f = null_frame(&gamma.linear, tol)?;
    Ok((gamma.apply(x) - *x).dot(&f.x0))
}

/// Least-squares common fixed point of the stacked system `(I − gᵢ)x = vᵢ`;
/// returns the point and the residual norm.
pub fn radiance(gens: &[AffineIso]) -> (MVec, f64) {
    let mut a = DMatrix::zeros(3 * gens.len(), 3);
    let mut rhs = Vec::with_capacity(3 * gens.len());
    for (k, g) in gens.iter().enumerate() {
        let m = g.linear.matrix();
        for i in 0..3 {
            for j in 0..3 {
                a.set(3 * k + i, j, if i == j { 1.0 } else { 0.0 } - m[i][j]);
            }
            rhs.push(g.trans.0[i]);
        }
    }
    let (x, res) = linalg::least_squares(&a, &rhs);
    (MVec([x[0], x[1], x[2]]), res)
}

/// The common fixed point, when the least-squares residual is below `tol`.
pub fn is_radiant(gens: &[AffineIso], tol: f64) -> Option<MVec> {
    let (x, res) = radiance(gens);
    (res < tol).then_some(x)
}

/// Translational parts of the generators; extended to words by
/// `u(gh) = u(g) + g u(h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cocycle {
    pub gen_trans: Vec<MVec>,
}

impl Cocycle {
    pub fn new(gen_trans: Vec<MVec>) -> Self {
        Self { gen_trans }
    }

    /// The coboundary `g ↦ v − g(v)`.
    pub fn coboundary_of(v: &MVec, gens: &[LorentzMap]) -> Self {
        Self::new(gens.iter().map(|g| coboundary(v, g)).collect())
    }
}

pub fn cocycle_extend(u: &Cocycle, w: &Word, gens: &[LorentzMap]) -> Result<MVec> {
    let mut trans = MVec::ZERO;
    let mut prefix = LorentzMap::identity();
    for &(j, e) in w.syllables() {
        let (g, v) = match (gens.get(j), u.gen_trans.get(j)) {
            (Some(g), Some(v)) => (g, v),
            _ => return Err(Error::UnknownGenerator(j)),
        };
        let (step, step_trans) = if e > 0 {
            (*g, *v)
        } else {
            let gi = g.inverse();
            (gi, -gi.apply(v))
        };
        for _ in 0..e.unsigned_abs() {
            trans += prefix.apply(&step_trans);
            prefix = prefix.compose(&step);
        }
    }
    Ok(trans)
}

/// `v − g(v)`.
pub fn coboundary(v: &MVec, g: &LorentzMap) -> MVec {
    *v - g.apply(v)
}
