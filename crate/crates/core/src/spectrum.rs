//! Marked Margulis spectra, the α functional on cocycles, and the asymptotics
//! of `α(ηⁿγᵐ)`.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::affine::{invariant_line, radiance, AffineIso};
use crate::error::{Error, Result};
use crate::group::{evaluate_linear, Presentation};
use crate::linalg::{self, DMatrix, Mat3};
use crate::lorentz::{box_product, null_frame, projective_action, LorentzMap, MVec, NullFrame};
use crate::tolerance::Tolerances;
use crate::word::{enumerate_words, Word};

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEntry {
    pub word: Word,
    /// `None` when the word is not hyperbolic.
    pub alpha: Option<f64>,
}

impl SpectrumEntry {
    pub fn skipped(&self) -> bool {
        self.alpha.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Spectrum {
    pub entries: Vec<SpectrumEntry>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn alpha(&self, w: &Word) -> Option<f64> {
        self.entries.iter().find(|e| &e.word == w).and_then(|e| e.alpha)
    }

    /// Largest `|Δα|` over words hyperbolic in both spectra.
    pub fn max_difference(&self, other: &Spectrum) -> f64 {
        self.common(other).map(|(_, a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// First word, in spectrum order, whose values differ by more than `tol`.
    pub fn first_mismatch(&self, other: &Spectrum, tol: f64) -> Option<(Word, f64)> {
        self.common(other)
            .find(|(_, a, b)| !((a - b).abs() <= tol))
            .map(|(w, a, b)| (w.clone(), (a - b).abs()))
    }

    fn common<'a>(&'a self, other: &'a Spectrum) -> impl Iterator<Item = (&'a Word, f64, f64)> + 'a {
        self.entries.iter().zip(&other.entries).filter_map(|(x, y)| match (x.alpha, y.alpha) {
            (Some(a), Some(b)) if x.word == y.word => Some((&x.word, a, b)),
            _ => None,
        })
    }
}

/// `α(w) = ⟨w(x) − x, x⁰(w)⟩` with the base point `x` pushed through the
/// word one letter at a time. Near the least-squares fixed point of the
/// generators the displacement stays small, which keeps radiant and nearly
/// radiant groups accurate on long words.
pub fn word_alpha_at(p: &Presentation, w: &Word, base: &MVec, tol: &Tolerances) -> Result<Option<f64>> {
    let g = evaluate_linear(&p.linear_parts(), w)?;
    let x0 = match null_frame(&g, tol) {
        Ok(f) => f.x0,
        Err(Error::NotHyperbolic) => return Ok(None),
        Err(e) => return Err(e),
    };
    let mut y = *base;
    for &(j, e) in w.syllables().iter().rev() {
        let gj = p.gens.get(j).ok_or(Error::UnknownGenerator(j))?;
        let step = if e > 0 { *gj } else { gj.inverse() };
        for _ in 0..e.unsigned_abs() {
            y = step.apply(&y);
        }
    }
    Ok(Some((y - *base).dot(&x0)))
}

/// `α` of a single word, or `None` when the word is not hyperbolic.
pub fn word_alpha(p: &Presentation, w: &Word, tol: &Tolerances) -> Result<Option<f64>> {
    word_alpha_at(p, w, &radiance(&p.gens).0, tol)
}

pub fn spectrum_of_words(p: &Presentation, words: &[Word], tol: &Tolerances) -> Result<Spectrum> {
    let base = radiance(&p.gens).0;
    let entries = words
        .iter()
        .map(|w| Ok(SpectrumEntry { word: w.clone(), alpha: word_alpha_at(p, w, &base, tol)? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(Spectrum { entries })
}

/// `α` over all reduced words of letter length `≤ max_len`, in
/// [`enumerate_words`] order.
pub fn marked_spectrum(p: &Presentation, max_len: usize, tol: &Tolerances) -> Result<Spectrum> {
    spectrum_of_words(p, &enumerate_words(p.rank(), &p.orders, max_len), tol)
}

/// Row `w`, block `j`: the gradient of `α(w)` with respect to the
/// translational part of generator `j`.
pub fn alpha_functional_matrix(gens: &[LorentzMap], words: &[Word], tol: &Tolerances) -> Result<DMatrix> {
    let n = gens.len();
    let mut out = DMatrix::zeros(words.len(), 3 * n);
    for (row, w) in words.iter().enumerate() {
        let g = evaluate_linear(gens, w)?;
        let x0 = null_frame(&g, tol).map_err(|_| Error::NonHyperbolicWord)?.x0;
        // u(w) = Σⱼ Aⱼ u(gⱼ)
        let mut blocks = alloc::vec![[[0.0; 3]; 3]; n];
        let mut prefix = LorentzMap::identity();
        for &(j, e) in w.syllables() {
            let gj = gens.get(j).ok_or(Error::UnknownGenerator(j))?;
            let gi = gj.inverse();
            for _ in 0..e.unsigned_abs() {
                let contrib: Mat3 = if e > 0 {
                    *prefix.matrix()
                } else {
                    let m = linalg::mat3_mul(prefix.matrix(), gi.matrix());
                    m.map(|r| r.map(|x| -x))
                };
                for (a, c) in blocks[j].iter_mut().zip(contrib.iter()) {
                    for (x, y) in a.iter_mut().zip(c) {
                        *x += y;
                    }
                }
                prefix = prefix.compose(if e > 0 { gj } else { &gi });
            }
        }
        // ⟨A u, x⁰⟩ = uᵀ Aᵀ J x⁰
        let jx = [x0.0[0], x0.0[1], -x0.0[2]];
        for (j, a) in blocks.iter().enumerate() {
            for k in 0..3 {
                let v = (0..3).map(|i| a[i][k] * jx[i]).sum::<f64>();
                out.set(row, 3 * j + k, v);
            }
        }
    }
    Ok(out)
}

/// `x⁰(g, h) = −(x⁻(g) ⊠ x⁺(h)) / ⟨x⁻(g), x⁺(h)⟩`, the limit of `x⁰(hⁿgᵐ)`.
pub fn x0_limit(g: &LorentzMap, h: &LorentzMap, tol: &Tolerances) -> Result<MVec> {
    let fg = null_frame(g, tol)?;
    let fh = null_frame(h, tol)?;
    x0_limit_from_frames(&fg, &fh)
}

fn x0_limit_from_frames(fg: &NullFrame, fh: &NullFrame) -> Result<MVec> {
    let d = fg.xm.dot(&fh.xp);
    if !(d.abs() > 1e-9) {
        return Err(Error::DegeneratePair);
    }
    Ok(box_product(&fg.xm, &fh.xp) * (-1.0 / d))
}

pub const PLANE_CONDITION_GUARD: f64 = 1e12;

/// Ingredients of the asymptotic expansion of `α(ηⁿγᵐ)` where `γ` has linear
/// part `g` and `η` has linear part `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticData {
    pub x0_gh: MVec,
    pub kappa: f64,
    pub lambda_g: f64,
    pub lambda_h: f64,
    pub alpha_g: f64,
    pub alpha_h: f64,
    /// `⟨x⁻(h), x⁰(g,h)⟩`.
    pub inner_xm_h: f64,
    /// `C_γ ∩ E⁻(η)`.
    pub q: MVec,
    /// Point of `C_η` with `q = r + κ x⁻(h)`.
    pub r: MVec,
    pub frame_g: NullFrame,
    pub frame_h: NullFrame,
}

/// Intersects the invariant line `C_γ` with the plane `E⁻(η)` through `C_η`
/// spanned by `x⁰(η)` and `x⁻(η)`, and reads off `κ` from
/// `q − r = κ x⁻(h)`.
pub fn kappa(gamma: &AffineIso, eta: &AffineIso, tol: &Tolerances) -> Result<AsymptoticData> {
    let fg = null_frame(&gamma.linear, tol)?;
    let fh = null_frame(&eta.linear, tol)?;
    let x0_gh = x0_limit_from_frames(&fg, &fh)?;
    let cg = invariant_line(gamma, tol)?;
    let ch = invariant_line(eta, tol)?;
    // p_γ + t x⁰(g) = r_η + a x⁰(h) + κ x⁻(h)
    let a = linalg::mat3_from_columns(&fg.x0.0, &(-fh.x0).0, &(-fh.xm).0);
    let rhs = (ch.point - cg.point).0;
    let [t, s, k] = linalg::solve3_guarded(&a, &rhs, PLANE_CONDITION_GUARD).map_err(|_| Error::ParallelNoIntersect)?;
    let q = cg.point + fg.x0 * t;
    let r = ch.point + fh.x0 * s;
    Ok(AsymptoticData {
        x0_gh,
        kappa: k,
        lambda_g: fg.lambda,
        lambda_h: fh.lambda,
        alpha_g: gamma.trans.dot(&fg.x0),
        alpha_h: eta.trans.dot(&fh.x0),
        inner_xm_h: fh.xm.dot(&x0_gh),
        q,
        r,
        frame_g: fg,
        frame_h: fh,
    })
}

/// `m α(γ) + n α(η) + κ (λ_hⁿ − 1) ⟨x⁻(h), x⁰(g,h)⟩`.
pub fn asymptotic_alpha(data: &AsymptoticData, m: u32, n: u32) -> f64 {
    if m == 0 && n == 0 {
        return 0.0;
    }
    let decay = data.lambda_h.powi(n as i32) - 1.0;
    m as f64 * data.alpha_g + n as f64 * data.alpha_h + data.kappa * decay * data.inner_xm_h
}

const SWEEP_LIMIT: usize = 64;

/// Attracting boundary point of the product `letters[0] · letters[1] ⋯` by
/// power iteration on unit null directions, applying one letter at a time so
/// the entries never grow.
fn attracting_point(letters: &[LorentzMap], start: MVec) -> Result<MVec> {
    let mut v = start;
    for _ in 0..SWEEP_LIMIT {
        let prev = v;
        for g in letters.iter().rev() {
            v = projective_action(g, &v)?;
        }
        if v.dist(&prev) <= 4.0 * f64::EPSILON {
            break;
        }
    }
    Ok(v)
}

/// `x⁰` of `hⁿgᵐ` computed from its fixed boundary points.
pub fn power_word_x0(g: &LorentzMap, h: &LorentzMap, m: u32, n: u32, tol: &Tolerances) -> Result<MVec> {
    let fg = null_frame(g, tol)?;
    let fh = null_frame(h, tol)?;
    let mut letters = Vec::with_capacity((m + n) as usize);
    letters.extend(core::iter::repeat_n(*h, n as usize));
    letters.extend(core::iter::repeat_n(*g, m as usize));
    let xp = attracting_point(&letters, fh.xp)?;
    let inv: Vec<LorentzMap> = letters.iter().rev().map(LorentzMap::inverse).collect();
    let xm = attracting_point(&inv, fg.xm)?;
    let d = xm.dot(&xp);
    if !(d.abs() > 1e-12) {
        return Err(Error::NotHyperbolic);
    }
    Ok(box_product(&xm, &xp) * (-1.0 / d))
}

/// `α(ηⁿγᵐ)` evaluated at the base point `γ⁻ᵐ(q)`:
/// `⟨ηⁿ(q) − γ⁻ᵐ(q), x⁰(ηⁿγᵐ)⟩`, where both displacements have closed forms
/// in the frames of `γ` and `η`. Accurate for large `m`, `n` where the
/// product matrix is too ill-conditioned to evaluate directly.
pub fn power_word_alpha(gamma: &AffineIso, eta: &AffineIso, data: &AsymptoticData, m: u32, n: u32, tol: &Tolerances) -> Result<f64> {
    match (m, n) {
        (0, 0) => return Ok(0.0),
        (_, 0) => return Ok(m as f64 * data.alpha_g),
        (0, _) => return Ok(n as f64 * data.alpha_h),
        _ => {}
    }
    let x0 = power_word_x0(&gamma.linear, &eta.linear, m, n, tol)?;
    let disp = data.frame_h.x0 * (n as f64 * data.alpha_h)
        + data.frame_g.x0 * (m as f64 * data.alpha_g)
        + data.frame_h.xm * (data.kappa * (data.lambda_h.powi(n as i32) - 1.0));
    Ok(disp.dot(&x0))
}

/// Least-squares `κ` from exact values of `α(ηⁿγᵐ)`:
/// fits `α − mα(γ) − nα(η) ≈ κ (λ_hⁿ − 1) ⟨x⁻(h), x⁰(g,h)⟩` over `samples`
/// of `(m, n, α)`.
pub fn estimate_kappa(data: &AsymptoticData, samples: &[(u32, u32, f64)]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for &(m, n, alpha) in samples {
        let a = (data.lambda_h.powi(n as i32) - 1.0) * data.inner_xm_h;
        let b = alpha - m as f64 * data.alpha_g - n as f64 * data.alpha_h;
        num += a * b;
        den += a * a;
    }
    num / den
}

/// Least-squares slope of `ln y` against `x`.
pub fn log_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1.ln()).sum::<f64>() / k;
    let sxy = points.iter().map(|p| (p.0 - mx) * (p.1.ln() - my)).sum::<f64>();
    let sxx = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum::<f64>();
    sxy / sxx
}

/// `d(g̃ⁿ(v), x⁺(g))` for `n = 0..=n_max`, with `g̃` the action on unit
/// Euclidean null directions.
pub fn convergence_report(g: &LorentzMap, v: &MVec, n_max: usize, tol: &Tolerances) -> Result<Vec<(usize, f64)>> {
    let f = null_frame(g, tol)?;
    let mut x = v.euclid_normalized().ok_or(Error::ZeroImage)?;
    if x.dist(&f.xm) < tol.null {
        return Err(Error::StartAtRepeller);
    }
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        out.push((n, x.dist(&f.xp)));
        if n < n_max {
            x = projective_action(g, &x)?;
        }
    }
    Ok(out)
}

/// Geometric-mean contraction ratio over the window `[n_max/2, n_max]`.
pub fn fitted_rate(report: &[(usize, f64)]) -> f64 {
    let n_max = report.last().map(|r| r.0).unwrap_or(0);
    let window: Vec<(f64, f64)> = report
        .iter()
        .filter(|(n, d)| *n >= n_max / 2 && *d > 0.0)
        .map(|(n, d)| (*n as f64, *d))
        .collect();
    if window.len() < 2 {
        return f64::NAN;
    }
    log_slope(&window).exp()
}

/// `(max(d(x⁻(g),x⁻(h)), d(x⁺(g),x⁺(h))), d(x⁰(g),x⁰(h)))`.
pub fn frame_distance_report(g: &LorentzMap, h: &LorentzMap, tol: &Tolerances) -> Result<(f64, f64)> {
    let fg = null_frame(g, tol)?;
    let fh = null_frame(h, tol)?;
    Ok((fg.xm.dist(&fh.xm).max(fg.xp.dist(&fh.xp)), fg.x0.dist(&fh.x0)))
}

/// `g_c = boost(ln λ)` with `x⁻ = (0, β, β)`, `x⁺ = (0, −β, β)`, and the
/// start `v_c = (β, 0, β)`, `β = √2/2`.
pub fn canonical_orbit(lambda: f64) -> (LorentzMap, MVec) {
    let b = core::f64::consts::FRAC_1_SQRT_2;
    (LorentzMap::boost(lambda.ln()), MVec::new(b, 0.0, b))
}

/// The pair `(g, h)` sharing `x⁻ = (0, β, β)`, with `x⁺(g) = (0, −β, β)` and
/// `x⁺(h) = (β sin δ, −β cos δ, β)`, both with eigenvalue `λ`.
pub fn delta_family(delta: f64, lambda: f64, tol: &Tolerances) -> Result<(LorentzMap, LorentzMap)> {
    let b = core::f64::consts::FRAC_1_SQRT_2;
    let xm = MVec::new(0.0, b, b);
    let g = LorentzMap::hyperbolic_from_endpoints(&xm, &MVec::new(0.0, -b, b), lambda, tol)?;
    let h = LorentzMap::hyperbolic_from_endpoints(&xm, &MVec::new(b * delta.sin(), -b * delta.cos(), b), lambda, tol)?;
    Ok((g, h))
}
