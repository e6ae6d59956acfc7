//! Presentations of free products of cyclic groups by affine isometries,
//! Schottky generators and hyperbolization of generating sets.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use crate::affine::{AffineIso, Cocycle};
use crate::error::{Error, Result};
use crate::lorentz::{boundary_angle, boundary_point, classify, null_frame, IsometryClass, LorentzMap, MVec, NullFrame};
use crate::tolerance::Tolerances;
use crate::word::{reduce_word, Word};

/// Generators of `𝔊 = *ⱼ ⟨gⱼ | gⱼ^{mⱼ}⟩` realised as affine isometries.
#[derive(Debug, Clone, PartialEq)]
pub struct Presentation {
    pub gens: Vec<AffineIso>,
    /// `Some(m)` for a generator of finite order `m`, `None` for infinite order.
    pub orders: Vec<Option<u32>>,
}

impl Presentation {
    /// Checks that linear parts lie in SO(2,1)⁰ and that `gⱼ^{mⱼ} = I` to
    /// `1e−9` for every finite order.
    pub fn new(gens: Vec<AffineIso>, orders: Vec<Option<u32>>) -> Result<Self> {
        if orders.len() != gens.len() {
            return Err(Error::PresentationMismatch);
        }
        for (j, g) in gens.iter().enumerate() {
            if !g.linear.is_identity_component() {
                return Err(Error::NotInIdentityComponent);
            }
            if let Some(m) = orders[j] {
                if m == 0 || g.pow(m as i64).op_distance(&AffineIso::identity()) > 1e-9 {
                    return Err(Error::OrderViolated { index: j, order: m });
                }
            }
        }
        Ok(Self { gens, orders })
    }

    /// Free group on `gens` (all of infinite order).
    pub fn free(gens: Vec<AffineIso>) -> Result<Self> {
        let n = gens.len();
        Self::new(gens, alloc::vec![None; n])
    }

    /// Linear group with the zero cocycle.
    pub fn from_linear(gens: Vec<LorentzMap>) -> Result<Self> {
        Self::free(gens.into_iter().map(AffineIso::linear).collect())
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn linear_parts(&self) -> Vec<LorentzMap> {
        self.gens.iter().map(|g| g.linear).collect()
    }

    pub fn cocycle(&self) -> Cocycle {
        Cocycle::new(self.gens.iter().map(|g| g.trans).collect())
    }

    /// Same linear parts, translational parts replaced by `u`.
    pub fn with_cocycle(&self, u: &Cocycle) -> Self {
        let gens = self.gens.iter().zip(&u.gen_trans).map(|(g, v)| AffineIso::new(g.linear, *v)).collect();
        Self { gens, orders: self.orders.clone() }
    }

    /// Every generator replaced by `η γ η⁻¹`.
    pub fn conjugate_by(&self, eta: &AffineIso) -> Self {
        Self {
            gens: self.gens.iter().map(|g| g.conjugate_by(eta)).collect(),
            orders: self.orders.clone(),
        }
    }

    pub fn evaluate(&self, w: &Word) -> Result<AffineIso> {
        evaluate_word(self, w)
    }

    pub fn same_shape(&self, other: &Presentation) -> bool {
        self.orders == other.orders
    }
}

/// Product of generator powers, left to right.
pub fn evaluate_word(p: &Presentation, w: &Word) -> Result<AffineIso> {
    let mut acc = AffineIso::identity();
    for &(j, e) in w.syllables() {
        let g = p.gens.get(j).ok_or(Error::UnknownGenerator(j))?;
        acc = acc.compose(&g.pow(e));
    }
    Ok(acc)
}

pub fn evaluate_linear(gens: &[LorentzMap], w: &Word) -> Result<LorentzMap> {
    let mut acc = LorentzMap::identity();
    for &(j, e) in w.syllables() {
        let g = gens.get(j).ok_or(Error::UnknownGenerator(j))?;
        acc = acc.compose(&g.pow(e));
    }
    Ok(acc)
}

/// Counter-clockwise arc of the boundary circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub start: f64,
    pub len: f64,
}

fn wrap(phi: f64) -> f64 {
    let r = phi % TAU;
    if r < 0.0 {
        r + TAU
    } else {
        r
    }
}

impl Arc {
    pub fn contains(&self, phi: f64, slack: f64) -> bool {
        let d = wrap(phi - self.start);
        d <= self.len + slack || d >= TAU - slack
    }

    pub fn center(&self) -> f64 {
        wrap(self.start + 0.5 * self.len)
    }

    /// Smallest angular gap between the two arcs; negative when they overlap.
    pub fn gap(&self, other: &Arc) -> f64 {
        let ab = wrap(other.start - self.start) - self.len;
        let ba = wrap(self.start - other.start) - other.len;
        ab.min(ba)
    }
}

/// Ping-pong intervals: `repelling[i]` around `x⁻(gᵢ)`, `attracting[i]`
/// around `x⁺(gᵢ)` with `gᵢ` mapping the complement of the first onto the
/// second.
#[derive(Debug, Clone, PartialEq)]
pub struct SchottkyIntervals {
    pub repelling: Vec<Arc>,
    pub attracting: Vec<Arc>,
    /// Smallest gap between any two of the `2n` arcs.
    pub min_gap: f64,
}

impl SchottkyIntervals {
    /// The interval `A^{sign}_i`.
    pub fn interval(&self, i: usize, sign: i64) -> Arc {
        if sign > 0 {
            self.attracting[i]
        } else {
            self.repelling[i]
        }
    }
}

const BISECTION_STEPS: usize = 40;
const SAMPLES: usize = 256;

fn image_angle(g: &LorentzMap, phi: f64) -> f64 {
    boundary_angle(&g.apply(&boundary_point(phi)))
}

/// `g` applied to the complement of the arc of half-width `r` about `a_minus`.
fn image_of_complement(g: &LorentzMap, a_minus: f64, r: f64) -> Arc {
    let start = image_angle(g, a_minus + r);
    let end = image_angle(g, a_minus - r + TAU);
    Arc { start: wrap(start), len: wrap(end - start) }
}

fn balanced_intervals(g: &LorentzMap, frame: &NullFrame) -> Option<(Arc, Arc)> {
    let a_minus = boundary_angle(&frame.xm);
    let a_plus = boundary_angle(&frame.xp);
    let sep = wrap(a_plus - a_minus);
    let r_max = sep.min(TAU - sep);
    let excess = |r: f64| 2.0 * r - image_of_complement(g, a_minus, r).len;
    let (mut lo, mut hi) = (0.0, r_max * (1.0 - 1e-9));
    if !(excess(hi) > 0.0) {
        return None;
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let r = hi;
    let repelling = Arc { start: wrap(a_minus - r), len: 2.0 * r };
    let attracting = image_of_complement(g, a_minus, r);
    if !attracting.contains(a_plus, 1e-12) {
        return None;
    }
    // the mapping condition, sampled on the complement of the repelling arc
    let slack = 1e-9;
    for k in 0..=SAMPLES {
        let phi = a_minus + r + (TAU - 2.0 * r) * (k as f64) / (SAMPLES as f64);
        if !attracting.contains(image_angle(g, phi), slack) {
            return None;
        }
    }
    Some((repelling, attracting))
}

/// Constructs ping-pong intervals for hyperbolic generators, or `None` when
/// the balanced intervals of some generator fail to be pairwise disjoint with
/// the given angular `margin`.
pub fn schottky_intervals(gens: &[LorentzMap], margin: f64, tol: &Tolerances) -> Result<Option<SchottkyIntervals>> {
    let mut repelling = Vec::with_capacity(gens.len());
    let mut attracting = Vec::with_capacity(gens.len());
    for g in gens {
        let frame = null_frame(g, tol)?;
        match balanced_intervals(g, &frame) {
            Some((a, b)) => {
                repelling.push(a);
                attracting.push(b);
            }
            None => return Ok(None),
        }
    }
    let all: Vec<Arc> = repelling.iter().chain(attracting.iter()).copied().collect();
    let mut min_gap = PI;
    for i in 0..all.len() {
        for j in (i + 1)..all.len() {
            min_gap = min_gap.min(all[i].gap(&all[j]));
        }
    }
    if min_gap < margin {
        return Ok(None);
    }
    Ok(Some(SchottkyIntervals { repelling, attracting, min_gap }))
}

pub fn verify_schottky(gens: &[LorentzMap], margin: f64, tol: &Tolerances) -> Result<bool> {
    Ok(schottky_intervals(gens, margin, tol)?.is_some())
}

pub const DEFAULT_SCHOTTKY_MARGIN: f64 = 1e-3;
pub const MAX_SCHOTTKY_POWER: u32 = 64;

/// Distance between the fixed-point sets of two hyperbolic elements.
pub fn fixed_point_separation(a: &NullFrame, b: &NullFrame) -> f64 {
    [a.xm.dist(&b.xm), a.xm.dist(&b.xp), a.xp.dist(&b.xm), a.xp.dist(&b.xp)]
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}

/// Generators `r_{θᵢ} boost(tᵢ) r_{θᵢ}⁻¹`, raised to the smallest common
/// power `k ≤ 64` for which they verify as Schottky generators. Zero cocycle.
pub fn make_schottky(ts: &[f64], thetas: &[f64], tol: &Tolerances) -> Result<Presentation> {
    let base: Vec<LorentzMap> = ts
        .iter()
        .zip(thetas)
        .map(|(&t, &th)| LorentzMap::boost(t).conjugate_by(&LorentzMap::rotation(th)))
        .collect();
    let frames = base.iter().map(|g| null_frame(g, tol)).collect::<Result<Vec<_>>>()?;
    for i in 0..frames.len() {
        for j in (i + 1)..frames.len() {
            if fixed_point_separation(&frames[i], &frames[j]) < 1e-8 {
                return Err(Error::FailedToSeparate { max_power: MAX_SCHOTTKY_POWER });
            }
        }
    }
    for k in 1..=MAX_SCHOTTKY_POWER {
        let gens: Vec<LorentzMap> = base.iter().map(|g| g.pow(k as i64)).collect();
        if verify_schottky(&gens, DEFAULT_SCHOTTKY_MARGIN, tol)? {
            return Presentation::from_linear(gens);
        }
    }
    Err(Error::FailedToSeparate { max_power: MAX_SCHOTTKY_POWER })
}

/// `g = boost(t1)` and `h = r_θ boost(t2) r_θ⁻¹`, raised to Schottky powers.
pub fn make_schottky_pair(t1: f64, t2: f64, theta: f64, tol: &Tolerances) -> Result<Presentation> {
    make_schottky(&[t1, t2], &[0.0, theta], tol)
}

pub const K_MAX: i64 = 32;

/// `1, −1, 2, −2, …, ±k_max`.
fn search_order(k_max: i64) -> impl Iterator<Item = i64> {
    (1..=k_max).flat_map(|k| [k, -k])
}

/// Result of [`hyperbolize`]: the new generating words (over the original
/// alphabet) and both presentations regenerated by them.
#[derive(Debug, Clone)]
pub struct Hyperbolized {
    pub first: Presentation,
    pub second: Presentation,
    pub words: Vec<Word>,
}

fn hyperbolic_with_margin(g: &LorentzMap, tol: &Tolerances) -> Option<NullFrame> {
    if classify(g, tol).ok()? != IsometryClass::Hyperbolic || g.trace() <= 3.0 + tol.hyperbolic_margin {
        return None;
    }
    null_frame(g, tol).ok()
}

/// No elliptic generator moves a fixed point of `frame` onto the fixed-point
/// set (within `tol.elliptic_margin`).
fn avoids_elliptic_generators(frame: &NullFrame, p: &Presentation, tol: &Tolerances) -> bool {
    p.gens.iter().all(|e| {
        if classify(&e.linear, tol) != Ok(IsometryClass::Elliptic) {
            return true;
        }
        [frame.xm, frame.xp].iter().all(|x| {
            let y = e.linear.apply(x).euclid_normalized().unwrap_or(*x);
            y.dist(&frame.xm) > tol.elliptic_margin && y.dist(&frame.xp) > tol.elliptic_margin
        })
    })
}

/// Rewrites the generating set of two presentations of the same abstract
/// group so that every generator is hyperbolic in both, following the
/// substitutions `gⱼ`, `g_a g_b^k` (for the first generator) and
/// `w₁^k gⱼ` (for the rest), searching `k = 1, −1, 2, −2, …` up to
/// [`K_MAX`].
pub fn hyperbolize(p1: &Presentation, p2: &Presentation, tol: &Tolerances) -> Result<Hyperbolized> {
    if p1.rank() != p2.rank() || !p1.same_shape(p2) {
        return Err(Error::PresentationMismatch);
    }
    let n = p1.rank();
    let orders = &p1.orders;
    let good_in_both = |w: &Word, pivot: bool| -> Result<bool> {
        for p in [p1, p2] {
            let g = evaluate_word(p, w)?.linear;
            match hyperbolic_with_margin(&g, tol) {
                Some(frame) if !pivot || avoids_elliptic_generators(&frame, p, tol) => {}
                _ => return Ok(false),
            }
        }
        Ok(true)
    };

    let mut pivot = None;
    for i in 0..n {
        let w = Word::generator(i);
        if good_in_both(&w, true)? {
            pivot = Some((i, w));
            break;
        }
    }
    if pivot.is_none() {
        'search: for a in 0..n {
            for b in (0..n).filter(|&b| b != a) {
                for k in search_order(K_MAX) {
                    let w = reduce_word(&[(a, 1), (b, k)], orders);
                    if good_in_both(&w, true)? {
                        pivot = Some((a, w));
                        break 'search;
                    }
                }
            }
        }
    }
    let (pivot_index, pivot_word) = pivot.ok_or(Error::HyperbolizationFailed { k_max: K_MAX })?;

    let mut words = alloc::vec![pivot_word.clone()];
    for j in (0..n).filter(|&j| j != pivot_index) {
        let gj = Word::generator(j);
        if good_in_both(&gj, false)? {
            words.push(gj);
            continue;
        }
        let mut found = None;
        for k in search_order(K_MAX) {
            let w = pivot_word.pow(k, orders).concat(&gj, orders);
            if good_in_both(&w, false)? {
                found = Some(w);
                break;
            }
        }
        words.push(found.ok_or(Error::HyperbolizationFailed { k_max: K_MAX })?);
    }

    let regenerate = |p: &Presentation| -> Result<Presentation> {
        let gens = words.iter().map(|w| evaluate_word(p, w)).collect::<Result<Vec<_>>>()?;
        Presentation::free(gens)
    };
    let first = regenerate(p1)?;
    let second = regenerate(p2)?;

    if n >= 2 {
        for p in [&first, &second] {
            let frames = p.gens.iter().map(|g| null_frame(&g.linear, tol)).collect::<Result<Vec<_>>>()?;
            let separated = frames[1..].iter().any(|f| fixed_point_separation(&frames[0], f) > 1e-8);
            if !separated {
                return Err(Error::NonElementaryViolated);
            }
        }
    }
    Ok(Hyperbolized { first, second, words })
}

/// Shortest angular distance between two boundary points.
pub fn angular_distance(a: &MVec, b: &MVec) -> f64 {
    let d = wrap(boundary_angle(a) - boundary_angle(b));
    d.min(TAU - d)
}
