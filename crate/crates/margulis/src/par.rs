//! Parallel spectrum assembly with deterministic, ordered output.

use margulis_core::affine::radiance;
use margulis_core::spectrum::{word_alpha_at, Spectrum, SpectrumEntry};
use margulis_core::word::enumerate_words;
use margulis_core::{Error, Presentation, Tolerances, Word};
use rayon::prelude::*;

pub const THREADS_ENV: &str = "MARGULIS_THREADS";

/// Thread pool sized by `MARGULIS_THREADS` when set, rayon's default otherwise.
pub fn pool() -> rayon::ThreadPool {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()).filter(|n| *n > 0) {
        b = b.num_threads(n);
    }
    b.build().expect("thread pool")
}

pub fn spectrum_of_words(p: &Presentation, words: &[Word], tol: &Tolerances) -> Result<Spectrum, Error> {
    let base = radiance(&p.gens).0;
    let entries = pool().install(|| {
        words
            .par_iter()
            .map(|w| Ok(SpectrumEntry { word: w.clone(), alpha: word_alpha_at(p, w, &base, tol)? }))
            .collect::<Result<Vec<_>, Error>>()
    })?;
    Ok(Spectrum { entries })
}

pub fn marked_spectrum(p: &Presentation, max_len: usize, tol: &Tolerances) -> Result<Spectrum, Error> {
    spectrum_of_words(p, &enumerate_words(p.rank(), &p.orders, max_len), tol)
}
