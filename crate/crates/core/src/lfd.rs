//! Learning from correct demonstrations, and the reduction that turns any
//! such learner into a language generator.
//!
//! The learner sees a context, outputs an action, then receives only a
//! demonstration — never its own reward. Weights over a stream of reward
//! functions evolve multiplicatively: with `gamma = 1` inconsistent reward
//! functions are zeroed and functions that the demonstrator satisfied but
//! the learner missed are doubled; with `gamma` in (0, 3/4] weights are
//! softened by `(1+gamma)^lambda(action) * (1-gamma)^lambda(demo)` and never
//! reach zero, which is what tolerates noisy demonstrators.
//!
//! The reduction plays the generation game by showing the learner the
//! history as context, emitting the learner's action, and feeding the
//! adversary's element back as the demonstration. Reward function i values
//! an action y at context s as `1[y ∈ L_i \ s]`.
//!
//! The argmax here is deliberately implemented on its own (cached subset
//! descent over reward functions, not a call into the weighted generator),
//! so that transcript equality between the gamma = 1 reduction and the
//! weighted generator is a meaningful cross-check of both.

use crate::error::Error;
use crate::game::Generator;
use crate::lang::{Element, Language, LanguageClass, SetExpr, SUBSET_CAP};
use crate::rational::{denom_lcm, Rational};
use crate::weighted::{GrowthFunction, PriorWeights};
use num_bigint::BigUint;
use std::cmp::Reverse;
use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

// ---------------------------------------------------------------------------
// Contexts and rewards
// ---------------------------------------------------------------------------

/// A context: for the reduction, the ordered history of revealed elements.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Context {
    history: Vec<Element>,
    seen: BTreeSet<Element>,
}

impl Context {
    pub fn root() -> Context {
        Context::default()
    }

    pub fn push(&mut self, e: Element) {
        self.history.push(e);
        self.seen.insert(e);
    }

    pub fn history(&self) -> &[Element] {
        &self.history
    }

    pub fn seen(&self) -> &BTreeSet<Element> {
        &self.seen
    }
}

/// Binary reward backed by a language: `r(x_s, y) = 1[y ∈ L \ s]`.
///
/// The general contract allows values in [0, 1]; every shipped reward is the
/// indicator above, for which the supremum over actions is always 1 because
/// languages are infinite and contexts are finite.
#[derive(Debug, Clone)]
pub struct LanguageReward {
    expr: SetExpr,
}

impl LanguageReward {
    pub fn new(language: &Language) -> LanguageReward {
        LanguageReward {
            expr: language.expr().clone(),
        }
    }

    pub fn reward_bit(&self, ctx: &Context, y: Element) -> bool {
        self.expr.contains(y) && !ctx.seen().contains(&y)
    }

    pub fn reward(&self, ctx: &Context, y: Element) -> Rational {
        if self.reward_bit(ctx, y) {
            Rational::one()
        } else {
            Rational::zero()
        }
    }

    /// `sup_y r(x, y)`: constant 1 for language rewards.
    pub fn sup(&self, _ctx: &Context) -> Rational {
        Rational::one()
    }

    /// `lambda(x, y) = sup_y' r(x, y') - r(x, y)`, in {0, 1} here.
    pub fn lambda_bit(&self, ctx: &Context, y: Element) -> bool {
        !self.reward_bit(ctx, y)
    }
}

/// Update discount. `One` is the zero/keep/double regime; values in
/// (0, 3/4] soften updates for noisy play.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gamma {
    One,
    Value(Rational),
}

impl Gamma {
    pub fn parse(s: &str) -> Result<Gamma, Error> {
        match s {
            "1" => Ok(Gamma::One),
            "1/2" => Ok(Gamma::Value(Rational::ratio(1, 2))),
            "1/4" => Ok(Gamma::Value(Rational::ratio(1, 4))),
            "3/4" => Ok(Gamma::Value(Rational::ratio(3, 4))),
            other => Err(Error::InvalidGamma {
                gamma: other.into(),
            }),
        }
    }

    pub fn value(v: Rational) -> Result<Gamma, Error> {
        if !v.is_positive() || v > Rational::ratio(3, 4) {
            return Err(Error::InvalidGamma {
                gamma: v.to_string(),
            });
        }
        Ok(Gamma::Value(v))
    }

    pub fn id(&self) -> String {
        match self {
            Gamma::One => "1".into(),
            Gamma::Value(v) => v.to_string(),
        }
    }
}

// ---------------------------------------------------------------------------
// The learner
// ---------------------------------------------------------------------------

/// Multiplicative-weights learner over a stream of language rewards.
pub struct LfdLearner {
    class: Arc<LanguageClass>,
    rewards: Vec<LanguageReward>,
    weights: Vec<Rational>, // window prefix, weights[i-1] = w(i)
    gamma: Gamma,
    prior: PriorWeights,
    growth: GrowthFunction,
    t: u64,
    demos: Vec<Element>,
    prior_partial: Rational,
    potential_violations: u64,
    prior_sum_violations: u64,
    /// Demonstrator regret per index inside its window [f^{-1}(i)+1, t].
    window_regret: Vec<u64>,
    expr_cache: HashMap<u64, SetExpr>,
}

impl LfdLearner {
    pub fn new(
        class: Arc<LanguageClass>,
        gamma: Gamma,
        prior: PriorWeights,
        growth: GrowthFunction,
    ) -> LfdLearner {
        let rewards = class.languages().iter().map(LanguageReward::new).collect();
        let mut learner = LfdLearner {
            class,
            rewards,
            weights: Vec::new(),
            gamma,
            prior,
            growth,
            t: 0,
            demos: Vec::new(),
            prior_partial: Rational::zero(),
            potential_violations: 0,
            prior_sum_violations: 0,
            window_regret: Vec::new(),
            expr_cache: HashMap::new(),
        };
        let window = learner.window_at(1);
        for i in 1..=window {
            let w0 = learner.prior.w0(i as u64);
            learner.prior_partial += &w0;
            learner.weights.push(w0);
            learner.window_regret.push(0);
        }
        learner.check_prior_partial();
        learner
    }

    fn window_at(&self, t: u64) -> usize {
        (self.growth.eval(t).min(self.class.len() as u64)) as usize
    }

    fn check_prior_partial(&mut self) {
        if self.prior_partial > self.prior.total_bound() {
            self.prior_sum_violations += 1;
        }
    }

    pub fn weight(&self, i: usize) -> Rational {
        self.weights
            .get(i - 1)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn window_regret(&self, i: usize) -> u64 {
        self.window_regret.get(i - 1).copied().unwrap_or(0)
    }

    pub fn potential_ok(&self) -> bool {
        self.potential_violations == 0 && self.prior_sum_violations == 0
    }

    fn subtree_expr(&mut self, global_mask: u64) -> SetExpr {
        if let Some(e) = self.expr_cache.get(&global_mask) {
            return e.clone();
        }
        let low = global_mask.trailing_zeros() as usize;
        let rest = global_mask & (global_mask - 1);
        let expr = if rest == 0 {
            self.class.languages()[low].expr().clone()
        } else {
            let prefix = self.subtree_expr(rest);
            prefix.intersect(self.class.languages()[low].expr())
        };
        self.expr_cache.insert(global_mask, expr.clone());
        expr
    }

    /// Action maximizing the weighted reward sum at this context: walk
    /// positive-weight subsets in descending total weight (ties to the
    /// lexicographically smaller index set) and return the smallest action
    /// all of the subset rewards rate 1.
    pub fn propose(&mut self, ctx: &Context) -> Result<Element, Error> {
        let active: Vec<usize> = self
            .weights
            .iter()
            .enumerate()
            .filter(|(_, w)| w.is_positive())
            .map(|(i, _)| i + 1)
            .collect();
        if active.len() > SUBSET_CAP {
            return Err(Error::ActiveSetTooLarge {
                size: active.len(),
                cap: SUBSET_CAP,
            });
        }
        if active.is_empty() {
            // no preference at all: smallest legal action
            return Ok(SetExpr::universe()
                .smallest_unseen(ctx.seen())
                .expect("universe is infinite"));
        }

        let weights: Vec<Rational> = active.iter().map(|&i| self.weight(i)).collect();
        let common = denom_lcm(weights.iter());
        let scaled: Vec<BigUint> = weights.iter().map(|w| w.scaled_numer(&common)).collect();
        let count = 1usize << active.len();
        let mut sums: Vec<BigUint> = Vec::with_capacity(count);
        sums.push(BigUint::from(0u32));
        for mask in 1..count {
            let low = mask.trailing_zeros() as usize;
            sums.push(&sums[mask & (mask - 1)] + &scaled[low]);
        }
        let mut order: Vec<usize> = (1..count).collect();
        order.sort_by_cached_key(|&mask| {
            let indices: Vec<usize> = (0..active.len())
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| active[b])
                .collect();
            (Reverse(sums[mask].clone()), indices)
        });
        for mask in order {
            let global: u64 = (0..active.len())
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| 1u64 << (active[b] - 1))
                .sum();
            let expr = self.subtree_expr(global);
            if let Some(y) = expr.smallest_unseen(ctx.seen()) {
                return Ok(y);
            }
        }
        unreachable!("singleton rewards always have a satisfying action");
    }

    /// Weight update after one round: the learner played `action`, the
    /// demonstrator showed `demo`, both at context `ctx`. Checks the exact
    /// potential inequality `W_t <= W_{t-1} + sum_new w0(i)`.
    pub fn update(&mut self, ctx: &Context, action: Element, demo: Element) {
        let before = self.total_weight();

        match self.gamma.clone() {
            Gamma::One => {
                for (idx, w) in self.weights.iter_mut().enumerate() {
                    if w.is_zero() {
                        continue;
                    }
                    let r = &self.rewards[idx];
                    if !r.reward_bit(ctx, demo) {
                        *w = Rational::zero();
                    } else if !r.reward_bit(ctx, action) {
                        *w = w.double();
                    }
                }
            }
            Gamma::Value(g) => {
                let up = &Rational::one() + &g; // (1+gamma)^lambda(action)
                let down = &Rational::one() - &g; // (1-gamma)^lambda(demo)
                for (idx, w) in self.weights.iter_mut().enumerate() {
                    let r = &self.rewards[idx];
                    if r.lambda_bit(ctx, action) {
                        *w = &*w * &up;
                    }
                    if r.lambda_bit(ctx, demo) {
                        *w = &*w * &down;
                    }
                }
            }
        }
        for (idx, reg) in self.window_regret.iter_mut().enumerate() {
            if self.rewards[idx].lambda_bit(ctx, demo) {
                *reg += 1;
            }
        }

        self.t += 1;
        self.demos.push(demo);

        let old_window = self.weights.len();
        let new_window = self.window_at(self.t + 1).max(old_window);
        let mut new_mass = Rational::zero();
        for i in old_window + 1..=new_window {
            let w0 = self.prior.w0(i as u64);
            new_mass += &w0;
            self.prior_partial += &w0;
            let weight = match &self.gamma {
                Gamma::Value(_) => w0,
                Gamma::One => {
                    // w0(i) iff every past demonstration scored 1 under r_i
                    let ok = {
                        let r = &self.rewards[i - 1];
                        let mut replay = Context::root();
                        self.demos.iter().all(|&y| {
                            let hit = r.reward_bit(&replay, y);
                            replay.push(y);
                            hit
                        })
                    };
                    if ok {
                        w0
                    } else {
                        Rational::zero()
                    }
                }
            };
            self.weights.push(weight);
            self.window_regret.push(0);
        }
        self.check_prior_partial();

        let after = self.total_weight();
        if after > (&before + &new_mass) {
            self.potential_violations += 1;
        }
    }

    fn total_weight(&self) -> Rational {
        self.weights.iter().fold(Rational::zero(), |mut acc, w| {
            acc += w;
            acc
        })
    }
}

// ---------------------------------------------------------------------------
// The reduction: an LfD learner as a generator
// ---------------------------------------------------------------------------

/// Plays the generation game through an [`LfdLearner`]: context = history,
/// generated element = learner action, adversary element = demonstration.
pub struct LfdGenerator {
    learner: LfdLearner,
    ctx: Context,
    pending: Option<Element>,
}

impl LfdGenerator {
    pub fn new(
        class: Arc<LanguageClass>,
        gamma: Gamma,
        prior: PriorWeights,
        growth: GrowthFunction,
    ) -> LfdGenerator {
        LfdGenerator {
            learner: LfdLearner::new(class, gamma, prior, growth),
            ctx: Context::root(),
            pending: None,
        }
    }

    pub fn learner(&self) -> &LfdLearner {
        &self.learner
    }
}

impl Generator for LfdGenerator {
    fn id(&self) -> String {
        format!(
            "lfd(gamma={},{},{})",
            self.learner.gamma.id(),
            self.learner.prior.id(),
            self.learner.growth.id()
        )
    }

    fn propose(&mut self) -> Result<Element, Error> {
        let ctx = self.ctx.clone();
        let y = self.learner.propose(&ctx)?;
        self.pending = Some(y);
        Ok(y)
    }

    fn observe(&mut self, revealed: Element) -> Result<(), Error> {
        let action = self.pending.take().expect("observe follows propose");
        let ctx = self.ctx.clone();
        self.learner.update(&ctx, action, revealed);
        self.ctx.push(revealed);
        Ok(())
    }

    fn potential_ok(&self) -> bool {
        self.learner.potential_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversaries::{Enumerator, NoiseSchedule, NoisyAdversary, VennAdversary};
    use crate::bounds;
    use crate::classes;
    use crate::game::{run_game, GameOptions};
    use crate::lang::Atom;
    use crate::weighted::WeightedGenerator;

    #[test]
    fn single_reward_proposes_its_smallest_action() {
        let l = Language::new(vec![Atom::progression(5, 3)], None).unwrap();
        let class = Arc::new(LanguageClass::finite(vec![l]));
        let mut learner = LfdLearner::new(
            class,
            Gamma::One,
            PriorWeights::Uniform { count: 1 },
            GrowthFunction::Constant(1),
        );
        assert_eq!(learner.propose(&Context::root()).unwrap(), Element(5));
    }

    #[test]
    fn heavier_reward_wins_disjoint_actions() {
        let l1 = Language::new(vec![Atom::progression(10, 2)], None).unwrap();
        let l2 = Language::new(vec![Atom::progression(1, 2)], None).unwrap();
        let class = Arc::new(LanguageClass::finite(vec![l1, l2]));
        let mut learner = LfdLearner::new(
            class,
            Gamma::Value(Rational::ratio(1, 2)),
            PriorWeights::Uniform { count: 2 },
            GrowthFunction::Constant(2),
        );
        // drive w(1) to 3/2 and w(2) to 1/2 via one asymmetric round:
        // action 1 (in L2 only), demo 10 (in L1 only)
        let ctx = Context::root();
        learner.update(&ctx, Element(1), Element(10));
        assert_eq!(learner.weight(1), Rational::ratio(3, 2));
        assert_eq!(learner.weight(2), Rational::ratio(1, 2));
        // disjoint rewards: the weight-3/2 function dictates the action
        let mut ctx = Context::root();
        ctx.push(Element(10));
        assert_eq!(learner.propose(&ctx).unwrap(), Element(12));
    }

    #[test]
    fn gamma_half_update_factors() {
        let l1 = Language::new(vec![Atom::progression(0, 2)], None).unwrap();
        let class = Arc::new(LanguageClass::finite(vec![l1]));
        let mut learner = LfdLearner::new(
            class,
            Gamma::Value(Rational::ratio(1, 2)),
            PriorWeights::Uniform { count: 1 },
            GrowthFunction::Constant(1),
        );
        let ctx = Context::root();
        // lambda(action)=1, lambda(demo)=0: weight * 3/2
        learner.update(&ctx, Element(1), Element(0));
        assert_eq!(learner.weight(1), Rational::ratio(3, 2));
        // lambda(action)=0, lambda(demo)=1: weight * 1/2
        let mut ctx = Context::root();
        ctx.push(Element(0));
        learner.update(&ctx, Element(2), Element(3));
        assert_eq!(learner.weight(1), Rational::ratio(3, 4));
        // the first action here was NOT the argmax (reward 0 while the demo
        // scored 1), and the continuous potential check catches exactly that
        assert!(!learner.potential_ok());
    }

    #[test]
    fn gamma_one_zeroes_on_inconsistent_demo() {
        let l1 = Language::new(vec![Atom::progression(0, 2)], None).unwrap();
        let class = Arc::new(LanguageClass::finite(vec![l1]));
        let mut learner = LfdLearner::new(
            class,
            Gamma::One,
            PriorWeights::Uniform { count: 1 },
            GrowthFunction::Constant(1),
        );
        let ctx = Context::root();
        learner.update(&ctx, Element(0), Element(3)); // demo outside L1
        assert!(learner.weight(1).is_zero());
    }

    #[test]
    fn gamma_one_reduction_matches_weighted_generator() {
        // step-for-step equivalence on the Venn class over a 50-step game
        let (class, mut adv_a) = VennAdversary::build(6);
        let mut weighted = WeightedGenerator::hybrid(class.clone());
        let a = run_game(
            &mut weighted,
            &mut adv_a,
            &class,
            50,
            GameOptions::default(),
        )
        .unwrap();

        let (_, mut adv_b) = VennAdversary::build(6);
        let mut reduced = LfdGenerator::new(
            class.clone(),
            Gamma::One,
            PriorWeights::Uniform { count: 2 },
            GrowthFunction::Constant(2),
        );
        let b = run_game(&mut reduced, &mut adv_b, &class, 50, GameOptions::default()).unwrap();
        assert_eq!(a.transcript, b.transcript);
        assert_eq!(
            a.transcript.to_csv().unwrap(),
            b.transcript.to_csv().unwrap()
        );
    }

    #[test]
    fn noiseless_gamma_three_quarters_never_errs_on_first_language() {
        // B3 with R=0, i=1: bound log2(1.644934)/(3/4) < 1, so zero mistakes.
        let class = Arc::new(classes::tradeoff_class(3, 8, 9).unwrap());
        let mut gen = LfdGenerator::new(
            class.clone(),
            Gamma::Value(Rational::ratio(3, 4)),
            PriorWeights::InverseSquare,
            GrowthFunction::PowerOfTwo,
        );
        let mut adv = Enumerator::new(&class, 1).unwrap();
        let result = run_game(&mut gen, &mut adv, &class, 40, GameOptions::default()).unwrap();
        assert_eq!(result.total_mistakes, 0);
        assert!(result.potential_ok);
    }

    #[test]
    fn noisy_stream_respects_lemma_7_2_window_bound() {
        // gamma=1/2, trade-off class, target 4, one noise step
        let class = Arc::new(classes::tradeoff_class(3, 8, 9).unwrap());
        let base = Enumerator::new(&class, 4).unwrap();
        let schedule = NoiseSchedule::new([3], classes::tradeoff_noise(8, 9).unwrap());
        let mut adv = NoisyAdversary::new(Box::new(base), schedule, &class).unwrap();
        let mut gen = LfdGenerator::new(
            class.clone(),
            Gamma::Value(Rational::ratio(1, 2)),
            PriorWeights::InverseSquare,
            GrowthFunction::PowerOfTwo,
        );
        let result = run_game(&mut gen, &mut adv, &class, 60, GameOptions::default()).unwrap();
        assert!(result.potential_ok);

        let gamma = Rational::ratio(1, 2);
        // window noise per the B3 window [f^{-1}(4)+1, T] = [2, T]
        let window_noise: u64 = result.transcript.steps[1..]
            .iter()
            .filter(|s| s.adversary_noise)
            .count() as u64;
        let bound = bounds::lemma_7_2(&gamma, 4, window_noise);
        assert!(bound.satisfied_by(result.total_mistakes));
        let b3 = bounds::theorem_b3(
            &gamma,
            PriorWeights::InverseSquare,
            GrowthFunction::PowerOfTwo,
            4,
            gen.learner().window_regret(4),
        )
        .unwrap();
        assert!(b3.satisfied_by(result.total_mistakes));
    }

    #[test]
    fn b3_holds_at_multiple_checkpoints() {
        let class = Arc::new(classes::littlestone_class(8).unwrap());
        let base = Enumerator::new(&class, 3).unwrap();
        let schedule = NoiseSchedule::new([3, 7], classes::littlestone_noise(8).unwrap());
        let mut adv = NoisyAdversary::new(Box::new(base), schedule, &class).unwrap();
        let mut gen = LfdGenerator::new(
            class.clone(),
            Gamma::Value(Rational::ratio(1, 2)),
            PriorWeights::Uniform { count: 8 },
            GrowthFunction::Constant(8),
        );
        let result = run_game(&mut gen, &mut adv, &class, 50, GameOptions::default()).unwrap();
        let target = class.language(3).unwrap();
        let gamma = Rational::ratio(1, 2);
        for t_check in [10u64, 50] {
            let steps = &result.transcript.steps[..t_check as usize];
            let mistakes = steps.iter().filter(|s| s.generator_mistake).count() as u64;
            // constant growth: the window starts at step 1
            let regret = steps
                .iter()
                .filter(|s| !target.contains(s.revealed))
                .count() as u64;
            let b3 = bounds::theorem_b3(
                &gamma,
                PriorWeights::Uniform { count: 8 },
                GrowthFunction::Constant(8),
                3,
                regret,
            )
            .unwrap();
            assert!(b3.satisfied_by(mistakes), "T={t_check}");
        }
        assert!(result.potential_ok);
    }

    #[test]
    fn gamma_parsing() {
        assert_eq!(Gamma::parse("1").unwrap(), Gamma::One);
        assert_eq!(
            Gamma::parse("1/2").unwrap(),
            Gamma::Value(Rational::ratio(1, 2))
        );
        assert!(Gamma::parse("7/8").is_err());
        assert!(Gamma::value(Rational::ratio(7, 8)).is_err());
        assert!(Gamma::value(Rational::zero()).is_err());
    }
}
