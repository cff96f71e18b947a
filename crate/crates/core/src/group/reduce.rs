use serde::Serialize;

use super::word::{Alphabet, ReducedWord};
use crate::config::{Location, SchottkyConfiguration};
use crate::moebius::{PrecisePoint, SpherePoint};

pub const DEFAULT_MAX_STEPS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionVerdict {
    ReducedToExt,
    LimitSuspected,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReductionStep {
    pub letter: i32,
    pub point: SpherePoint,
}

/// Ping-pong reduction of a point towards `Ext(𝔠)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReductionTrace {
    pub input: SpherePoint,
    /// Letters in the order they were applied, with the resulting points.
    pub steps: Vec<ReductionStep>,
    pub verdict: ReductionVerdict,
}

impl ReductionTrace {
    pub fn terminal(&self) -> SpherePoint {
        self.steps.last().map_or(self.input, |s| s.point)
    }

    /// The element `g` with `g(input) = terminal`: the applied letters read
    /// right to left. For `input = w(z)` with `z ∈ Ext(𝔠)⁰` this is `w⁻¹`.
    pub fn word(&self) -> ReducedWord {
        ReducedWord::from_letters_unchecked(self.steps.iter().rev().map(|s| s.letter).collect())
    }
}

/// While `p ∈ Int(C'_k)` apply `A_k⁻¹`, while `p ∈ Int(C_k)` apply `A_k`;
/// stop once `p` lands in `Ext(𝔠)⁰` or on a circle, or after `max_steps`.
pub fn reduce(config: &SchottkyConfiguration, p: SpherePoint, max_steps: usize) -> ReductionTrace {
    reduce_precise(config, PrecisePoint::from(p), max_steps)
}

/// [`reduce`] for a point known to more than double precision, such as an
/// orbit point built with [`Alphabet::apply_word`]. The letters are applied
/// in double-double arithmetic; locations use the rounded point.
pub fn reduce_precise(config: &SchottkyConfiguration, p: PrecisePoint, max_steps: usize) -> ReductionTrace {
    let alphabet = Alphabet::new(config);
    let input = p.to_point();
    let mut steps = Vec::new();
    let mut q = p;
    loop {
        let letter = match config.locate(&q.to_point()) {
            Location::Exterior | Location::OnCircle(_) => {
                return ReductionTrace { input, steps, verdict: ReductionVerdict::ReducedToExt };
            }
            Location::Interior(r) => {
                let k = r.pair as i32 + 1;
                if r.primed {
                    -k
                } else {
                    k
                }
            }
        };
        if steps.len() == max_steps {
            return ReductionTrace { input, steps, verdict: ReductionVerdict::LimitSuspected };
        }
        q = q.apply(alphabet.letter(letter).expect("letter from a located circle"));
        steps.push(ReductionStep { letter, point: q.to_point() });
    }
}
