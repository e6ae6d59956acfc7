//! Lorentzian linear algebra on R^{2,1}.
//!
//! The scalar product has signature `(+, +, −)`; a vector is future-pointing
//! when its third coordinate is positive. Boundary points of the hyperbolic
//! plane are future-pointing null rays, always stored with unit Euclidean
//! length.

use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat3, IDENTITY3};
use crate::tolerance::Tolerances;

/// A vector of R^{2,1}.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MVec(pub [f64; 3]);

impl MVec {
    pub const ZERO: MVec = MVec([0.0; 3]);

    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        MVec([x1, x2, x3])
    }

    /// Constructor rejecting NaN and infinite coordinates.
    pub fn checked(x1: f64, x2: f64, x3: f64) -> Result<Self> {
        let v = MVec([x1, x2, x3]);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn x1(&self) -> f64 {
        self.0[0]
    }
    pub fn x2(&self) -> f64 {
        self.0[1]
    }
    pub fn x3(&self) -> f64 {
        self.0[2]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    /// Lorentzian scalar product.
    pub fn dot(&self, w: &MVec) -> f64 {
        lorentz_dot(self, w)
    }

    pub fn euclid_dot(&self, w: &MVec) -> f64 {
        self.0[0] * w.0[0] + self.0[1] * w.0[1] + self.0[2] * w.0[2]
    }

    pub fn euclid_norm(&self) -> f64 {
        linalg::norm3(&self.0)
    }

    /// Euclidean distance between the endpoints of `self` and `w`.
    pub fn dist(&self, w: &MVec) -> f64 {
        (*self - *w).euclid_norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Rescaled to unit Euclidean length; `None` for the zero vector.
    pub fn euclid_normalized(&self) -> Option<MVec> {
        let n = self.euclid_norm();
        if n > 0.0 && n.is_finite() {
            Some(*self * (1.0 / n))
        } else {
            None
        }
    }

    /// Unit Euclidean representative of the ray, flipped to the future.
    pub fn future_ray(&self) -> Option<MVec> {
        let u = self.euclid_normalized()?;
        Some(if u.0[2] < 0.0 { -u } else { u })
    }
}

impl Add for MVec {
    type Output = MVec;
    fn add(self, o: MVec) -> MVec {
        MVec([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl AddAssign for MVec {
    fn add_assign(&mut self, o: MVec) {
        *self = *self + o;
    }
}

impl Sub for MVec {
    type Output = MVec;
    fn sub(self, o: MVec) -> MVec {
        MVec([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl SubAssign for MVec {
    fn sub_assign(&mut self, o: MVec) {
        *self = *self - o;
    }
}

impl Neg for MVec {
    type Output = MVec;
    fn neg(self) -> MVec {
        MVec([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<f64> for MVec {
    type Output = MVec;
    fn mul(self, s: f64) -> MVec {
        MVec([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl Mul<MVec> for f64 {
    type Output = MVec;
    fn mul(self, v: MVec) -> MVec {
        v * self
    }
}

/// `x1 y1 + x2 y2 − x3 y3`.
pub fn lorentz_dot(v: &MVec, w: &MVec) -> f64 {
    v.0[0] * w.0[0] + v.0[1] * w.0[1] - v.0[2] * w.0[2]
}

/// Lorentzian cross-product: the unique `z` with `⟨u, z⟩ = det[u v w]` for
/// every `u`. Since `⟨u, z⟩ = u · Jz`, this is `J (v × w)`.
pub fn box_product(v: &MVec, w: &MVec) -> MVec {
    let c = linalg::cross(&v.0, &w.0);
    MVec([c[0], c[1], -c[2]])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CausalClass {
    Zero,
    Spacelike,
    TimelikeFuture,
    TimelikePast,
    NullFuture,
    NullPast,
}

/// Causal character of `v`; `eps` is relative to the Euclidean norm.
pub fn causal_class(v: &MVec, eps: f64) -> CausalClass {
    let n = v.euclid_norm();
    if n <= eps {
        return CausalClass::Zero;
    }
    let q = v.dot(v);
    let future = v.0[2] > 0.0;
    if q.abs() <= eps * n * n {
        if future {
            CausalClass::NullFuture
        } else {
            CausalClass::NullPast
        }
    } else if q > 0.0 {
        CausalClass::Spacelike
    } else if future {
        CausalClass::TimelikeFuture
    } else {
        CausalClass::TimelikePast
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IsometryClass {
    Identity,
    Hyperbolic,
    Parabolic,
    Elliptic,
}

/// A linear isometry of the Lorentzian form, `mᵀ J m = J`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzMap {
    m: Mat3,
    det_sign: i8,
    time_sign: i8,
}

const J: [f64; 3] = [1.0, 1.0, -1.0];

fn lorentz_inverse(m: &Mat3) -> Mat3 {
    let mut inv = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            inv[i][j] = J[i] * m[j][i] * J[j];
        }
    }
    inv
}

/// `max |mᵀ J m − J|`.
pub fn orthogonality_defect(m: &Mat3) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let mut s = 0.0;
            for k in 0..3 {
                s += m[k][i] * J[k] * m[k][j];
            }
            let target = if i == j { J[i] } else { 0.0 };
            worst = worst.max((s - target).abs());
        }
    }
    worst
}

impl LorentzMap {
    /// Validates finiteness and `mᵀJm = J` to `tol.orth`, relative to
    /// `max(1, |m|²)`.
    pub fn new(m: Mat3, tol: &Tolerances) -> Result<Self> {
        if !m.iter().flatten().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let scale = linalg::mat3_max_abs(&m).max(1.0);
        let defect = orthogonality_defect(&m);
        if defect > tol.orth * scale * scale {
            return Err(Error::NotLorentzian { defect });
        }
        Ok(Self::from_matrix_unchecked(m))
    }

    /// Wraps a matrix known to be an isometry (products, inverses, closed
    /// forms). Orientation flags are recomputed.
    pub fn from_matrix_unchecked(m: Mat3) -> Self {
        // adj(m) = det(m)·J mᵀ J, so the (3,3) cofactor equals det(m)·m33
        let cof = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let det_sign = if cof * m[2][2] < 0.0 { -1 } else { 1 };
        let time_sign = if m[2][2] < 0.0 { -1 } else { 1 };
        Self { m, det_sign, time_sign }
    }

    pub fn identity() -> Self {
        Self::from_matrix_unchecked(IDENTITY3)
    }

    /// One-parameter hyperbolic subgroup fixing `e1`; `[0,1,1]` is its
    /// `eᵗ`-eigenvector.
    pub fn boost(t: f64) -> Self {
        let (c, s) = (t.cosh(), t.sinh());
        Self::from_matrix_unchecked([[1.0, 0.0, 0.0], [0.0, c, s], [0.0, s, c]])
    }

    /// Rotation by `theta` about the timelike axis `e3`.
    pub fn rotation(theta: f64) -> Self {
        let (c, s) = (theta.cos(), theta.sin());
        Self::from_matrix_unchecked([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    }

    /// `diag(-1, 1, 1)`: orientation-reversing, time-preserving.
    pub fn reflection() -> Self {
        Self::from_matrix_unchecked([[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    /// The hyperbolic element with repelling ray `xm`, attracting ray `xp`
    /// and eigenvalue `lambda ∈ (0,1)`.
    pub fn hyperbolic_from_endpoints(xm: &MVec, xp: &MVec, lambda: f64, tol: &Tolerances) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::NotHyperbolic);
        }
        let xm = null_future_ray(xm, tol)?;
        let xp = null_future_ray(xp, tol)?;
        if xm.dist(&xp) <= tol.null {
            return Err(Error::DegeneratePair);
        }
        let x0 = box_product(&xm, &xp) * (-1.0 / xm.dot(&xp));
        let p = linalg::mat3_from_columns(&x0.0, &xm.0, &xp.0);
        let pinv = linalg::mat3_inverse(&p).ok_or(Error::DegeneratePair)?;
        let d = [[1.0, 0.0, 0.0], [0.0, lambda, 0.0], [0.0, 0.0, 1.0 / lambda]];
        let m = linalg::mat3_mul(&linalg::mat3_mul(&p, &d), &pinv);
        Ok(Self::from_matrix_unchecked(m))
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.m
    }

    pub fn det_sign(&self) -> i8 {
        self.det_sign
    }

    pub fn time_sign(&self) -> i8 {
        self.time_sign
    }

    /// Membership in SO(2,1)⁰.
    pub fn is_identity_component(&self) -> bool {
        self.det_sign == 1 && self.time_sign == 1
    }

    pub fn apply(&self, v: &MVec) -> MVec {
        MVec(linalg::mat3_apply(&self.m, &v.0))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LorentzMap) -> LorentzMap {
        Self::from_matrix_unchecked(linalg::mat3_mul(&self.m, &other.m))
    }

    /// Exact inverse `J mᵀ J`.
    pub fn inverse(&self) -> LorentzMap {
        Self {
            m: lorentz_inverse(&self.m),
            det_sign: self.det_sign,
            time_sign: self.time_sign,
        }
    }

    pub fn negate(&self) -> LorentzMap {
        let mut m = self.m;
        m.iter_mut().flatten().for_each(|x| *x = -*x);
        Self::from_matrix_unchecked(m)
    }

    pub fn pow(&self, n: i64) -> LorentzMap {
        let base = if n < 0 { self.inverse() } else { *self };
        let mut acc = LorentzMap::identity();
        for _ in 0..n.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    /// `f ∘ self ∘ f⁻¹`.
    pub fn conjugate_by(&self, f: &LorentzMap) -> LorentzMap {
        f.compose(self).compose(&f.inverse())
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    /// Largest entrywise difference.
    pub fn distance(&self, other: &LorentzMap) -> f64 {
        linalg::mat3_max_abs(&linalg::mat3_sub(&self.m, &other.m))
    }

    pub fn max_abs(&self) -> f64 {
        linalg::mat3_max_abs(&self.m)
    }
}

fn null_future_ray(v: &MVec, tol: &Tolerances) -> Result<MVec> {
    match causal_class(v, tol.null) {
        CausalClass::NullFuture => v.euclid_normalized().ok_or(Error::NotFutureDirection),
        _ => Err(Error::NotFutureDirection),
    }
}

/// Classification of an element of SO(2,1)⁰ by its trace.
pub fn classify(g: &LorentzMap, tol: &Tolerances) -> Result<IsometryClass> {
    if !g.is_identity_component() {
        return Err(Error::NotInIdentityComponent);
    }
    if g.distance(&LorentzMap::identity()) <= tol.identity {
        return Ok(IsometryClass::Identity);
    }
    let excess = g.trace() - 3.0;
    Ok(if excess > tol.trace {
        IsometryClass::Hyperbolic
    } else if excess < -tol.trace {
        IsometryClass::Elliptic
    } else {
        IsometryClass::Parabolic
    })
}

pub fn is_hyperbolic(g: &LorentzMap, tol: &Tolerances) -> bool {
    matches!(classify(g, tol), Ok(IsometryClass::Hyperbolic))
}

/// Null frame `{x⁰, x⁻, x⁺}` and contracting eigenvalue of a hyperbolic
/// element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullFrame {
    /// Unit-spacelike 1-eigenvector, orienting `det[x⁰ | x⁻ | x⁺] > 0`.
    pub x0: MVec,
    /// Null future `λ`-eigenvector, unit Euclidean length (repelling point).
    pub xm: MVec,
    /// Null future `λ⁻¹`-eigenvector, unit Euclidean length (attracting point).
    pub xp: MVec,
    pub lambda: f64,
    /// Set when `trace − 3` is below `Tolerances::near_parabolic`: the
    /// eigenvectors are poorly separated.
    pub near_parabolic: bool,
}

impl NullFrame {
    /// `det[x⁰ | x⁻ | x⁺]`.
    pub fn orientation(&self) -> f64 {
        linalg::mat3_det(&linalg::mat3_from_columns(&self.x0.0, &self.xm.0, &self.xp.0))
    }

    /// `x⁰` rebuilt from the null vectors: `−x⁻ ⊠ x⁺ / ⟨x⁻, x⁺⟩`.
    pub fn x0_from_null_vectors(&self) -> MVec {
        box_product(&self.xm, &self.xp) * (-1.0 / self.xm.dot(&self.xp))
    }
}

/// Eigen-decomposition through the characteristic polynomial: the trace gives
/// `λ + 1 + 1/λ`, each eigenline is a null vector of `g − μI` found from
/// cross products of rows. The repelling vector is computed as the dominant
/// eigenvector of `g⁻¹ = J gᵀ J` and `x⁰` from `g + g⁻¹ − 2I`, which keeps all
/// three well conditioned when `λ` is small.
pub fn null_frame(g: &LorentzMap, tol: &Tolerances) -> Result<NullFrame> {
    if classify(g, tol)? != IsometryClass::Hyperbolic {
        return Err(Error::NotHyperbolic);
    }
    let s = g.trace() - 1.0;
    let big = 0.5 * (s + (s * s - 4.0).max(0.0).sqrt());
    let lambda = 1.0 / big;

    let shifted = |m: &Mat3, mu: f64| {
        let mut a = *m;
        for (i, row) in a.iter_mut().enumerate() {
            row[i] -= mu;
        }
        a
    };
    let ginv = g.inverse();
    let xp = MVec(linalg::null_vector3(&shifted(g.matrix(), big)))
        .future_ray()
        .ok_or(Error::NotHyperbolic)?;
    let xm = MVec(linalg::null_vector3(&shifted(ginv.matrix(), big)))
        .future_ray()
        .ok_or(Error::NotHyperbolic)?;

    let mut sym = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            sym[i][j] = g.matrix()[i][j] + ginv.matrix()[i][j] - if i == j { 2.0 } else { 0.0 };
        }
    }
    let raw = MVec(linalg::null_vector3(&sym));
    let q = raw.dot(&raw);
    if !(q > 0.0) {
        return Err(Error::NotHyperbolic);
    }
    let mut x0 = raw * (1.0 / q.sqrt());
    let det = linalg::mat3_det(&linalg::mat3_from_columns(&x0.0, &xm.0, &xp.0));
    if det < 0.0 {
        x0 = -x0;
    }
    Ok(NullFrame {
        x0,
        xm,
        xp,
        lambda,
        near_parabolic: g.trace() - 3.0 < tol.near_parabolic,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Canonical {
    Boost(f64),
    Rotation(f64),
}

pub fn canonical_isometry(kind: Canonical) -> LorentzMap {
    match kind {
        Canonical::Boost(t) => LorentzMap::boost(t),
        Canonical::Rotation(theta) => LorentzMap::rotation(theta),
    }
}

/// `g(v) / ‖g(v)‖`: the action on future-pointing unit directions.
pub fn projective_action(g: &LorentzMap, v: &MVec) -> Result<MVec> {
    g.apply(v).euclid_normalized().ok_or(Error::ZeroImage)
}

/// The element `f ∈ O(2,1)` sending the ray of each `src[i]` to the ray of
/// `dst[i]`.
///
/// Writing `f(sᵢ) = cᵢ dᵢ` with `cᵢ > 0`, preservation of the form on the
/// basis `{sᵢ}` forces `cᵢ cⱼ = ⟨sᵢ,sⱼ⟩ / ⟨dᵢ,dⱼ⟩`, which fixes the scales.
/// `f` is time-preserving and may reverse orientation.
pub fn triple_conjugator(src: &[MVec; 3], dst: &[MVec; 3], tol: &Tolerances) -> Result<LorentzMap> {
    let mut s = [MVec::ZERO; 3];
    let mut d = [MVec::ZERO; 3];
    for i in 0..3 {
        s[i] = null_future_ray(&src[i], tol)?;
        d[i] = null_future_ray(&dst[i], tol)?;
    }
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        if s[i].dist(&s[j]) <= tol.null || d[i].dist(&d[j]) <= tol.null {
            return Err(Error::DegenerateTriple);
        }
    }
    let r = |i: usize, j: usize| s[i].dot(&s[j]) / d[i].dot(&d[j]);
    let (r01, r12, r02) = (r(0, 1), r(1, 2), r(0, 2));
    let c = [(r01 * r02 / r12).sqrt(), (r01 * r12 / r02).sqrt(), (r02 * r12 / r01).sqrt()];
    if !c.iter().all(|x| x.is_finite() && *x > 0.0) {
        return Err(Error::DegenerateTriple);
    }
    let smat = linalg::mat3_from_columns(&s[0].0, &s[1].0, &s[2].0);
    let dmat = linalg::mat3_from_columns(&(d[0] * c[0]).0, &(d[1] * c[1]).0, &(d[2] * c[2]).0);
    let sinv = linalg::mat3_inverse(&smat).ok_or(Error::DegenerateTriple)?;
    Ok(LorentzMap::from_matrix_unchecked(linalg::mat3_mul(&dmat, &sinv)))
}

/// Angle of a future ray seen from the time axis: `atan2(x2, x1)`.
pub fn boundary_angle(v: &MVec) -> f64 {
    v.0[1].atan2(v.0[0])
}

/// Unit Euclidean null future ray at angle `phi`.
pub fn boundary_point(phi: f64) -> MVec {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    MVec([h * phi.cos(), h * phi.sin(), h])
}
