//! Baseline generators: the uniform-generation algorithm for finite classes
//! and Modified-Greedy for streams. Both "arbitrary" branches are resolved
//! to the smallest unseen element so transcripts are reproducible.

use crate::error::Error;
use crate::game::Generator;
use crate::lang::{Element, LanguageClass, SetExpr};
use crate::weighted::{FInverse, GrowthFunction};
use std::collections::BTreeSet;
use std::sync::Arc;

/// Uniform-generation baseline for finite classes: play from the common
/// intersection of all consistent languages while it has unseen elements,
/// otherwise play the globally smallest unseen element.
pub struct UniformBaseline {
    class: Arc<LanguageClass>,
    /// Indices still consistent with the history, maintained incrementally
    /// and cross-checked against recomputation every step.
    consistent: Vec<usize>,
    seen: BTreeSet<Element>,
    history: Vec<Element>,
}

impl UniformBaseline {
    pub fn new(class: Arc<LanguageClass>) -> Self {
        let consistent = (1..=class.len()).collect();
        UniformBaseline {
            class,
            consistent,
            seen: BTreeSet::new(),
            history: Vec::new(),
        }
    }

    pub fn consistent(&self) -> &[usize] {
        &self.consistent
    }

    /// One step of the baseline: the element it would output given the
    /// current history.
    pub fn step(&self) -> Element {
        let mut expr: Option<SetExpr> = None;
        for &i in &self.consistent {
            let l = self.class.languages()[i - 1].expr();
            expr = Some(match expr {
                None => l.clone(),
                Some(e) => e.intersect(l),
            });
        }
        expr.and_then(|e| e.smallest_unseen(&self.seen))
            .unwrap_or_else(|| {
                SetExpr::universe()
                    .smallest_unseen(&self.seen)
                    .expect("universe is infinite")
            })
    }
}

impl Generator for UniformBaseline {
    fn id(&self) -> String {
        "uniform_baseline".into()
    }

    fn propose(&mut self) -> Result<Element, Error> {
        Ok(self.step())
    }

    fn observe(&mut self, revealed: Element) -> Result<(), Error> {
        self.seen.insert(revealed);
        self.history.push(revealed);
        self.consistent
            .retain(|&i| self.class.languages()[i - 1].contains(revealed));
        // incremental maintenance must agree with recomputation
        let recomputed: Vec<usize> = (1..=self.class.len())
            .filter(|&i| {
                self.history
                    .iter()
                    .all(|&x| self.class.languages()[i - 1].contains(x))
            })
            .collect();
        assert_eq!(self.consistent, recomputed, "consistent-set drift");
        Ok(())
    }
}

/// Modified-Greedy: start from the whole universe, refine through languages
/// 1..t in order, skipping any whose intersection would leave no unseen
/// element, and output the smallest unseen element of the result.
///
/// The running intersection is a plain [`SetExpr`]; the exclusion of the
/// history is carried by the `seen` set, which is semantically the paper's
/// `X \ x_{1:t-1}` initialization.
pub struct ModifiedGreedy {
    class: Arc<LanguageClass>,
    seen: BTreeSet<Element>,
    history: Vec<Element>,
    t: u64,
    /// Per-mistake elimination witnesses recorded for invariant checks:
    /// (step, index that went inconsistent at that step).
    eliminations: Vec<(u64, usize)>,
}

impl ModifiedGreedy {
    pub fn new(class: Arc<LanguageClass>) -> Self {
        ModifiedGreedy {
            class,
            seen: BTreeSet::new(),
            history: Vec::new(),
            t: 0,
            eliminations: Vec::new(),
        }
    }

    pub fn step(&self) -> Element {
        let t = self.t + 1;
        let limit = (t as usize).min(self.class.len());
        let mut current = SetExpr::universe();
        for i in 1..=limit {
            let lang = &self.class.languages()[i - 1];
            let consistent = self.history.iter().all(|&x| lang.contains(x));
            if !consistent {
                continue;
            }
            let refined = current.intersect(lang.expr());
            if refined.smallest_unseen(&self.seen).is_some() {
                current = refined;
            }
        }
        current
            .smallest_unseen(&self.seen)
            .expect("universe refinement keeps an unseen witness")
    }

    /// Steps at which some prefix language became inconsistent.
    pub fn eliminations(&self) -> &[(u64, usize)] {
        &self.eliminations
    }
}

impl Generator for ModifiedGreedy {
    fn id(&self) -> String {
        "modified_greedy".into()
    }

    fn propose(&mut self) -> Result<Element, Error> {
        Ok(self.step())
    }

    fn observe(&mut self, revealed: Element) -> Result<(), Error> {
        self.t += 1;
        for (idx, lang) in self.class.languages().iter().enumerate() {
            let was_consistent = self.history.iter().all(|&x| lang.contains(x));
            if was_consistent && !lang.contains(revealed) {
                self.eliminations.push((self.t, idx + 1));
            }
        }
        self.seen.insert(revealed);
        self.history.push(revealed);
        Ok(())
    }
}

/// Modified-Greedy guarantees for target index i:
/// `(last_mistake_bound, mistake_bound)` =
/// `(max{i-1, m(L_i)+1}, min{2(i-1), max{i-1, m(L_i)+1}})`.
pub fn greedy_bounds(class: &LanguageClass, i: usize) -> Result<(u64, u64), Error> {
    let m = crate::lang::nonuniform_complexity(class, i)?;
    let i = i as u64;
    let last = (i - 1).max(m + 1);
    let mistakes = (2 * (i - 1)).min(last);
    Ok((last, mistakes))
}

/// `f^{-1}(i)` as a plain number for reporting; errors when infinite.
pub fn finite_f_inverse(growth: GrowthFunction, i: u64) -> Result<u64, Error> {
    match growth.inverse(i) {
        FInverse::Finite(t) => Ok(t),
        FInverse::Infinite => Err(Error::UnboundedMistakeBound { index: i as usize }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes;
    use crate::lang::{Atom, Language, PairCode};

    #[test]
    fn baseline_plays_intersection_first() {
        let class = Arc::new(classes::venn_class(6));
        let mut gen = UniformBaseline::new(class);
        assert_eq!(gen.propose().unwrap(), Element(0));
        gen.observe(Element(0)).unwrap();
        assert_eq!(gen.propose().unwrap(), Element(1));
    }

    #[test]
    fn baseline_arbitrary_branch_when_no_consistent_language() {
        // reachable only in noisy play: force it by revealing an element
        // outside both Venn languages
        let class = Arc::new(classes::venn_class(2));
        let mut gen = UniformBaseline::new(class);
        gen.observe(Element(4)).unwrap(); // noise residue: in neither
        assert!(gen.consistent().is_empty());
        assert_eq!(gen.propose().unwrap(), Element(0));
    }

    #[test]
    fn baseline_follows_single_consistent_language() {
        let class = Arc::new(classes::venn_class(2));
        let mut gen = UniformBaseline::new(class);
        gen.observe(Element(2)).unwrap(); // 2 ∈ L1 \ L2 (tail of L1)
        assert_eq!(gen.consistent(), &[1]);
        assert_eq!(gen.propose().unwrap(), Element(0)); // smallest unseen of L1
    }

    #[test]
    fn greedy_first_step_plays_from_l1() {
        let class = Arc::new(classes::tradeoff_class(3, 6, 7).unwrap());
        let gen = ModifiedGreedy::new(class);
        let pc = PairCode::new(7);
        assert_eq!(gen.step(), pc.encode(1, 1));
    }

    #[test]
    fn greedy_boundary_stays_inside_l1() {
        // After the whole first block (1,1..3) is revealed, greedy at the
        // boundary refines by L1 (still consistent) and skips every later
        // language because the shared prefix is exhausted, so its output is
        // in L1 but none of L_j for j >= 2.
        let class = Arc::new(classes::tradeoff_class(3, 6, 7).unwrap());
        let pc = PairCode::new(7);
        let mut gen = ModifiedGreedy::new(class.clone());
        for j in 1..=3 {
            gen.observe(pc.encode(1, j)).unwrap();
        }
        let out = gen.step();
        assert_eq!(out, pc.encode(1, 4));
        assert!(class.language(1).unwrap().contains(out));
        for j in 2..=6 {
            assert!(!class.language(j).unwrap().contains(out));
        }
    }

    #[test]
    fn greedy_skips_language_with_empty_refinement() {
        // Two disjoint consistent languages: greedy refines by L1, then the
        // guard |L2 ∩ I| > 0 fails and L2 is skipped.
        let l1 = Language::new(vec![Atom::progression(0, 2)], None).unwrap();
        let l2 = Language::new(vec![Atom::progression(1, 2)], None).unwrap();
        let class = Arc::new(LanguageClass::finite(vec![l1, l2]));
        let mut gen = ModifiedGreedy::new(class);
        // nothing revealed yet: at t >= 2 both are considered
        gen.observe(Element(0)).unwrap(); // consistent with L1 only
        let out = gen.step();
        assert_eq!(out, Element(2));
        // fresh game, empty history, step at t = 2 considers both
        let l1 = Language::new(vec![Atom::progression(0, 2)], None).unwrap();
        let l2 = Language::new(vec![Atom::progression(1, 2)], None).unwrap();
        let class = Arc::new(LanguageClass::finite(vec![l1, l2]));
        let mut gen = ModifiedGreedy::new(class);
        gen.t = 1; // pretend one step passed without reveals
        assert_eq!(gen.step(), Element(0)); // refined by L1; L2 skipped
    }

    #[test]
    fn greedy_bounds_examples() {
        let class = classes::tradeoff_class(3, 6, 7).unwrap();
        assert_eq!(greedy_bounds(&class, 1).unwrap(), (1, 0));
        assert_eq!(greedy_bounds(&class, 3).unwrap(), (13, 4));
        // i=2 with m(L2)=3: (max{1,4}, min{2,4})
        assert_eq!(greedy_bounds(&class, 2).unwrap(), (4, 2));
        // a class where m(L2) = 0: two disjoint progressions
        let l1 = Language::new(vec![Atom::progression(0, 2)], None).unwrap();
        let l2 = Language::new(vec![Atom::progression(1, 2)], None).unwrap();
        let disjoint = LanguageClass::finite(vec![l1, l2]);
        assert_eq!(greedy_bounds(&disjoint, 2).unwrap(), (1, 1));
    }
}
