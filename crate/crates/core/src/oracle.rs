//! Brute-force minimax oracle for small instances.
//!
//! Elements are quotiented by membership pattern: two unseen elements lying
//! in exactly the same languages are interchangeable for both players, and
//! within a pattern only the number of revealed elements matters. The state
//! is therefore (per-pattern revealed counts, alive languages, per-language
//! mistake counts, steps left), which memoizes well.
//!
//! The generator minimizes, the adversary maximizes; the adversary must keep
//! at least one language consistent with its stream and at the end declares
//! the alive language with the most generator mistakes. The value is the
//! number of mistakes forced within the depth.
//!
//! The oracle leans only on language membership — not on the intersection
//! machinery or any generator — so it is an independent check of the game
//! values the constructions are supposed to force.

use crate::error::Error;
use crate::lang::{Atom, Element, Language};
use std::collections::HashMap;

const MAX_CLASS: usize = 4;
const MAX_DEPTH: u32 = 6;

/// Exact minimax number of forced generator mistakes within `depth` steps.
pub fn minimax_oracle(class: &[Language], depth: u32) -> Result<u32, Error> {
    if class.len() > MAX_CLASS {
        return Err(Error::SearchBudgetExceeded(format!(
            "class size {} exceeds {MAX_CLASS}",
            class.len()
        )));
    }
    if depth > MAX_DEPTH {
        return Err(Error::SearchBudgetExceeded(format!(
            "depth {depth} exceeds {MAX_DEPTH}"
        )));
    }

    let patterns = scan_patterns(class, depth);
    let all_alive: u8 = ((1u16 << class.len()) - 1) as u8;
    let mut memo = HashMap::new();
    let state = State {
        revealed: [0; 16],
        alive: all_alive,
        mistakes: [0; MAX_CLASS],
        steps_left: depth,
    };
    Ok(value(&patterns, class.len(), state, &mut memo))
}

/// One membership pattern: the set of languages containing its elements.
struct Pattern {
    mask: u8,
    /// Total number of elements carrying this pattern, or `None` if
    /// infinitely many.
    total: Option<u32>,
}

/// Scan far enough that every pattern achievable by unseen elements shows
/// up: beyond the largest finite value and progression start, membership is
/// periodic with the strides' lcm, so a pattern seen in the periodic window
/// is infinite and a pattern absent there is fully enumerated below it.
fn scan_patterns(class: &[Language], depth: u32) -> Vec<Pattern> {
    let mut max_start = 0u64;
    let mut lcm = 1u64;
    for l in class {
        for a in l.expr().atoms() {
            match a {
                Atom::Finite(v) => max_start = max_start.max(v.last().map_or(0, |e| e.0)),
                Atom::Progression { start, stride } => {
                    max_start = max_start.max(start.0);
                    lcm = num_integer::lcm(lcm, *stride);
                }
            }
        }
    }
    let p = max_start + 1;
    let horizon = p + lcm;
    let mut finite_counts: HashMap<u8, u32> = HashMap::new();
    let mut infinite: Vec<u8> = Vec::new();
    for x in 0..p {
        let mask = membership_mask(class, Element(x));
        *finite_counts.entry(mask).or_insert(0) += 1;
    }
    for x in p..=horizon {
        let mask = membership_mask(class, Element(x));
        if !infinite.contains(&mask) {
            infinite.push(mask);
        }
    }
    let mut patterns = Vec::new();
    for mask in infinite.iter().copied() {
        patterns.push(Pattern { mask, total: None });
        finite_counts.remove(&mask);
    }
    for (mask, count) in finite_counts {
        patterns.push(Pattern {
            mask,
            total: Some(count),
        });
    }
    patterns.sort_by_key(|p| p.mask);
    debug_assert!(patterns.len() <= 16, "at most 2^4 patterns for 4 languages");
    let _ = depth;
    patterns
}

fn membership_mask(class: &[Language], x: Element) -> u8 {
    class
        .iter()
        .enumerate()
        .filter(|(_, l)| l.contains(x))
        .map(|(i, _)| 1u8 << i)
        .sum()
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct State {
    revealed: [u8; 16], // per-pattern revealed count
    alive: u8,
    mistakes: [u8; MAX_CLASS],
    steps_left: u32,
}

fn value(
    patterns: &[Pattern],
    class_len: usize,
    state: State,
    memo: &mut HashMap<State, u32>,
) -> u32 {
    if state.steps_left == 0 {
        return (0..class_len)
            .filter(|&l| state.alive >> l & 1 == 1)
            .map(|l| state.mistakes[l] as u32)
            .max()
            .expect("adversary keeps a language alive");
    }
    if let Some(&v) = memo.get(&state) {
        return v;
    }

    let available =
        |p: usize, st: &State| patterns[p].total.is_none_or(|t| st.revealed[p] < t as u8);

    // generator minimizes over its pattern choice
    let mut best_gen: Option<u32> = None;
    for (gp, gen_pattern) in patterns.iter().enumerate() {
        if !available(gp, &state) {
            continue;
        }
        let mut mid = state;
        for l in 0..class_len {
            if gen_pattern.mask >> l & 1 == 0 {
                mid.mistakes[l] = mid.mistakes[l].saturating_add(1);
            }
        }
        // adversary maximizes over consistency-preserving reveals
        let mut best_adv: Option<u32> = None;
        for (ap, adv_pattern) in patterns.iter().enumerate() {
            if !available(ap, &mid) {
                continue;
            }
            let alive = mid.alive & adv_pattern.mask;
            if alive == 0 {
                continue;
            }
            let mut next = mid;
            next.alive = alive;
            next.revealed[ap] += 1;
            next.steps_left -= 1;
            // dead languages can never be declared: canonicalize their
            // counters away for better memo hits
            for l in 0..class_len {
                if alive >> l & 1 == 0 {
                    next.mistakes[l] = 0;
                }
            }
            let v = value(patterns, class_len, next, memo);
            if best_adv.is_none_or(|b| v > b) {
                best_adv = Some(v);
            }
        }
        let v = best_adv.expect("adversary always has a consistent reveal");
        if best_gen.is_none_or(|b| v < b) {
            best_gen = Some(v);
        }
    }
    let v = best_gen.expect("generator always has an available pattern");
    memo.insert(state, v);
    v
}
