use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("matrix is not a Lorentzian isometry (defect {defect:e})")]
    NotLorentzian { defect: f64 },
    #[error("isometry is not in the identity component SO(2,1)0")]
    NotInIdentityComponent,
    #[error("element is not hyperbolic")]
    NotHyperbolic,
    #[error("vector is not a future-pointing null or timelike direction")]
    NotFutureDirection,
    #[error("two boundary directions of the triple coincide")]
    DegenerateTriple,
    #[error("isometry maps a direction to zero")]
    ZeroImage,
    #[error("generator index {0} out of range")]
    UnknownGenerator(usize),
    #[error("generator {index} does not satisfy its order relation g^{order} = I")]
    OrderViolated { index: usize, order: u32 },
    #[error("no Schottky powers found up to {max_power}")]
    FailedToSeparate { max_power: u32 },
    #[error("hyperbolization search exhausted |k| <= {k_max}")]
    HyperbolizationFailed { k_max: i64 },
    #[error("all candidate generators share fixed points")]
    NonElementaryViolated,
    #[error("word is not hyperbolic")]
    NonHyperbolicWord,
    #[error("pair shares a boundary fixed point")]
    DegeneratePair,
    #[error("invariant line is parallel to the plane")]
    ParallelNoIntersect,
    #[error("starting vector lies on the repelling eigendirection")]
    StartAtRepeller,
    #[error("presentations do not share their linear parts")]
    SharedLinearPartViolated,
    #[error("linear group is elementary")]
    ElementaryGroup,
    #[error("invariant lines are not parallel after normalization")]
    NotParallel,
    #[error("presentations have different ranks or orders")]
    PresentationMismatch,
    #[error("group is radiant (fixes a point)")]
    RadiantInput,
    #[error("linear part of the group is elementary")]
    ElementaryInput,
    #[error("ill-conditioned linear system (condition {0:e})")]
    IllConditioned(f64),
    #[error("malformed word: {0}")]
    MalformedWord(&'static str),
}
