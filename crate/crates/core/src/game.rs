//! The online game between a generator and an adversary.
//!
//! Order of play: the generator moves first at every step, then the adversary
//! reveals. The generator may never output a previously revealed element; the
//! adversary's outputs are unique (enforced by default, relaxable for noisy
//! exploration via [`GameOptions::allow_repeats`]). Mistake flags are scored
//! post hoc against the adversary's final declared target, so adaptive
//! adversaries may commit mid-game; the declaration is fixed thereafter.

use crate::error::Error;
use crate::lang::{Element, LanguageClass};
use serde::Serialize;
use std::collections::BTreeSet;

/// A deterministic generation strategy. Constructed fresh per game.
pub trait Generator {
    fn id(&self) -> String;

    /// The next output, given everything observed so far.
    fn propose(&mut self) -> Result<Element, Error>;

    /// Feed the adversary's revealed element back.
    fn observe(&mut self, revealed: Element) -> Result<(), Error>;

    /// Whether every exact potential check passed so far; strategies without
    /// a weight potential report true.
    fn potential_ok(&self) -> bool {
        true
    }
}

/// A deterministic adversary strategy. Constructed fresh per game.
pub trait Adversary {
    fn id(&self) -> String;

    /// Reveal the next element, having observed the generator's output.
    fn reveal(&mut self, generated: Element) -> Element;

    /// The declared target, once committed (1-based class index).
    fn target(&self) -> Option<usize>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub t: u64,
    pub generated: Element,
    pub revealed: Element,
    pub generator_mistake: bool,
    pub adversary_noise: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub steps: Vec<StepRecord>,
    pub target_index: usize,
    pub horizon: u64,
}

impl Transcript {
    /// Number of steps flagged as generator mistakes.
    pub fn total_mistakes(&self) -> u64 {
        self.steps.iter().filter(|s| s.generator_mistake).count() as u64
    }

    /// Last step with a generator mistake, or 0 if none within the horizon.
    pub fn last_mistake_time(&self) -> u64 {
        self.steps
            .iter()
            .filter(|s| s.generator_mistake)
            .map(|s| s.t)
            .max()
            .unwrap_or(0)
    }

    pub fn noise_count(&self) -> u64 {
        self.steps.iter().filter(|s| s.adversary_noise).count() as u64
    }

    /// CSV export: `t,generated,revealed,generator_mistake,adversary_noise`.
    pub fn to_csv(&self) -> Result<String, Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "t",
            "generated",
            "revealed",
            "generator_mistake",
            "adversary_noise",
        ])?;
        for s in &self.steps {
            w.write_record([
                s.t.to_string(),
                s.generated.to_string(),
                s.revealed.to_string(),
                s.generator_mistake.to_string(),
                s.adversary_noise.to_string(),
            ])?;
        }
        let bytes = w.into_inner().expect("csv into_inner");
        Ok(String::from_utf8(bytes).expect("csv is utf8"))
    }
}

#[derive(Debug, Clone)]
pub struct GameResult {
    pub transcript: Transcript,
    pub total_mistakes: u64,
    pub last_mistake_time: u64,
    pub noise_count: u64,
    /// All exact potential checks passed (true for weight-free generators).
    pub potential_ok: bool,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct GameOptions {
    /// Allow the adversary to repeat elements (noisy exploration only).
    pub allow_repeats: bool,
}

/// Plays `horizon` steps and scores the transcript against the adversary's
/// declared target.
pub fn run_game(
    generator: &mut dyn Generator,
    adversary: &mut dyn Adversary,
    class: &LanguageClass,
    horizon: u64,
    options: GameOptions,
) -> Result<GameResult, Error> {
    assert!(horizon >= 1);
    let mut revealed: BTreeSet<Element> = BTreeSet::new();
    let mut raw: Vec<(u64, Element, Element)> = Vec::with_capacity(horizon as usize);

    for t in 1..=horizon {
        let generated = generator.propose()?;
        if revealed.contains(&generated) {
            return Err(Error::GeneratorRepeatedElement {
                t,
                element: generated,
            });
        }
        let shown = adversary.reveal(generated);
        if !options.allow_repeats && revealed.contains(&shown) {
            return Err(Error::AdversaryRepeatedElement { t, element: shown });
        }
        revealed.insert(shown);
        generator.observe(shown)?;
        raw.push((t, generated, shown));
    }

    let target_index = adversary
        .target()
        .ok_or(Error::AdversaryNeverDeclaredTarget)?;
    let target = class.language(target_index)?;
    let steps: Vec<StepRecord> = raw
        .into_iter()
        .map(|(t, generated, shown)| StepRecord {
            t,
            generated,
            revealed: shown,
            generator_mistake: !target.contains(generated),
            adversary_noise: !target.contains(shown),
        })
        .collect();
    let transcript = Transcript {
        steps,
        target_index,
        horizon,
    };
    let total_mistakes = transcript.total_mistakes();
    let last_mistake_time = transcript.last_mistake_time();
    let noise_count = transcript.noise_count();
    debug_assert!(last_mistake_time == 0 || total_mistakes <= last_mistake_time);
    Ok(GameResult {
        transcript,
        total_mistakes,
        last_mistake_time,
        noise_count,
        potential_ok: generator.potential_ok(),
    })
}
