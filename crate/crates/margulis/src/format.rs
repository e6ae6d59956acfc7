//! Group files (JSON), spectrum tables and certificate documents.

use std::io::{self, Write};

use margulis_core::{AffineIso, ConjugacyCertificate, Error as CoreError, LorentzMap, MVec, Presentation, Spectrum, Tolerances, Verdict};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("io: {0}")]
    Io(#[from] io::Error),
    #[error("malformed group file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version {0}")]
    Schema(u32),
    #[error("generator {index}: {source}")]
    Generator { index: usize, source: CoreError },
    #[error("invalid presentation: {0}")]
    Presentation(CoreError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorRecord {
    /// Row-major.
    pub linear: [f64; 9],
    pub trans: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Metadata {
    pub seed: Option<u64>,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupFile {
    pub schema_version: u32,
    pub generators: Vec<GeneratorRecord>,
    pub orders: Vec<Option<u32>>,
    pub metadata: Metadata,
}

impl GroupFile {
    pub fn from_presentation(p: &Presentation, metadata: Metadata) -> Self {
        let generators = p
            .gens
            .iter()
            .map(|g| {
                let m = g.linear.matrix();
                GeneratorRecord {
                    linear: [m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2], m[2][0], m[2][1], m[2][2]],
                    trans: g.trans.0,
                }
            })
            .collect();
        Self { schema_version: SCHEMA_VERSION, generators, orders: p.orders.clone(), metadata }
    }

    /// Rebuilds the presentation, checking every linear block for membership
    /// in O(2,1).
    pub fn to_presentation(&self, tol: &Tolerances) -> Result<Presentation, FormatError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(FormatError::Schema(self.schema_version));
        }
        let mut gens = Vec::with_capacity(self.generators.len());
        for (index, g) in self.generators.iter().enumerate() {
            let l = g.linear;
            let m = [[l[0], l[1], l[2]], [l[3], l[4], l[5]], [l[6], l[7], l[8]]];
            let lin = LorentzMap::new(m, tol).map_err(|source| FormatError::Generator { index, source })?;
            let t = MVec::checked(g.trans[0], g.trans[1], g.trans[2]).map_err(|source| FormatError::Generator { index, source })?;
            gens.push(AffineIso::new(lin, t));
        }
        Presentation::new(gens, self.orders.clone()).map_err(FormatError::Presentation)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn from_json(s: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn read(path: &std::path::Path) -> Result<Self, FormatError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Seventeen significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// Pretty JSON with every float written by [`fmt_f64`].
#[derive(Default)]
pub struct SciFormatter<'a> {
    pretty: serde_json::ser::PrettyFormatter<'a>,
}

impl serde_json::ser::Formatter for SciFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt_f64(value).as_bytes())
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.pretty.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.pretty.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_object_value(w)
    }
}

pub const SPECTRUM_HEADER: &str = "word\talpha\tskipped";

/// One row per word: word, α (or `nan` when skipped), skip flag.
pub fn spectrum_table(s: &Spectrum) -> String {
    let mut out = String::from(SPECTRUM_HEADER);
    out.push('\n');
    for e in &s.entries {
        let (a, flag) = match e.alpha {
            Some(a) => (fmt_f64(a), 0),
            None => ("nan".to_string(), 1),
        };
        out.push_str(&format!("{}\t{}\t{}\n", e.word, a, flag));
    }
    out
}

pub fn spectrum_json(s: &Spectrum) -> String {
    #[derive(Serialize)]
    struct Row {
        word: String,
        alpha: Option<f64>,
        skipped: bool,
    }
    let rows: Vec<Row> = s
        .entries
        .iter()
        .map(|e| Row { word: e.word.to_string(), alpha: e.alpha, skipped: e.skipped() })
        .collect();
    to_json(&rows)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter::default());
    value.serialize(&mut ser).expect("serializing to memory");
    buf.push(b'\n');
    String::from_utf8(buf).expect("utf-8")
}

pub fn verdict_name(v: &Verdict) -> &'static str {
    match v {
        Verdict::Conjugate => "conjugate",
        Verdict::Mismatch { .. } => "mismatch",
        Verdict::Inconclusive { .. } => "inconclusive",
    }
}

fn matrix_row_major(f: &LorentzMap) -> [f64; 9] {
    let m = f.matrix();
    [m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2], m[2][0], m[2][1], m[2][2]]
}

pub fn certificate_table(c: &ConjugacyCertificate) -> String {
    let join = |xs: &[f64]| xs.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join("\t");
    let mut out = String::new();
    out.push_str(&format!("verdict\t{}\n", verdict_name(&c.verdict)));
    out.push_str(&format!("f\t{}\n", join(&matrix_row_major(&c.f))));
    out.push_str(&format!("tau\t{}\n", join(&c.tau.0)));
    out.push_str(&format!("residual\t{}\n", fmt_f64(c.residual)));
    out.push_str(&format!("words_checked\t{}\n", c.words_checked));
    match &c.verdict {
        Verdict::Mismatch { word, delta } => out.push_str(&format!("witness\t{}\t{}\n", word, fmt_f64(*delta))),
        Verdict::Inconclusive { reason } => out.push_str(&format!("reason\t{reason}\n")),
        Verdict::Conjugate => {}
    }
    out
}

pub fn certificate_json(c: &ConjugacyCertificate) -> String {
    #[derive(Serialize)]
    struct Witness {
        word: String,
        delta_alpha: f64,
    }
    #[derive(Serialize)]
    struct Doc {
        verdict: &'static str,
        f: [f64; 9],
        tau: [f64; 3],
        residual: Option<f64>,
        words_checked: usize,
        witness: Option<Witness>,
        reason: Option<&'static str>,
    }
    let doc = Doc {
        verdict: verdict_name(&c.verdict),
        f: matrix_row_major(&c.f),
        tau: c.tau.0,
        residual: c.residual.is_finite().then_some(c.residual),
        words_checked: c.words_checked,
        witness: match &c.verdict {
            Verdict::Mismatch { word, delta } => Some(Witness { word: word.to_string(), delta_alpha: *delta }),
            _ => None,
        },
        reason: match &c.verdict {
            Verdict::Inconclusive { reason } => Some(reason),
            _ => None,
        },
    };
    to_json(&doc)
}
