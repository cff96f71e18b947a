//! The group generated by a configuration's pairings: words, ping-pong
//! reduction, limit-set sampling and finite-length certificates.

mod checks;
mod cloud;
mod reduce;
mod word;

use serde::Serialize;
use thiserror::Error;

pub use checks::{
    check_free_loxodromic, check_precise_invariance, check_round_trips, random_word, fold_word_fixed_points, invariant_component_probe,
    invariant_component_probe_with_cloud, sample_exterior, word_fixed_points, FixedPointEntry, FreenessReport,
    FreenessViolation, InvarianceReport, InvarianceWitness, ProbeCrossing, ProbeReport, RoundTripFailure, RoundTripReport, Side, MAX_WITNESSES,
    PROBE_CLOUD, ROUND_TRIP_TOLERANCE,
};
pub use cloud::{
    check_disk_cover, directed_hausdorff, disk_cover, limit_cloud, limit_cloud_with_threads, CloudEntry, CloudParams,
    CoverDisk, CoverReport, LimitCloud, PointIndex,
};
pub use reduce::{reduce, reduce_precise, ReductionStep, ReductionTrace, ReductionVerdict, DEFAULT_MAX_STEPS};
pub use word::{enumerate_words, evaluate, letter_from_key, letter_key, word_count, Alphabet, ReducedWord, WordIter};

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GroupError {
    #[error("letter 0 is not a generator")]
    ZeroLetter,
    #[error("word is not reduced at position {position}")]
    NotReduced { position: usize },
    #[error("letter {letter} exceeds rank {rank}")]
    BadIndex { letter: i32, rank: usize },
    #[error("cannot parse word {0:?}")]
    BadWord(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("base point lies on the test circle")]
    BaseOnTestCircle,
}
