//! Online language-generation games over a computable algebra of infinite
//! languages.
//!
//! A generator plays against an adversary: at each step the generator outputs
//! an element it believes lies in the unknown target language, then the
//! adversary reveals one more element of that language. The crate provides
//!
//! - an exact set algebra of finite sets and arithmetic progressions
//!   ([`lang`]), with closure dimension and non-uniform complexity measures,
//! - a deterministic game engine with mistake accounting ([`game`]),
//! - weighted, baseline, and demonstration-driven generators ([`weighted`],
//!   [`baseline`], [`lfd`]),
//! - adversary strategies including adaptive lower-bound constructions and
//!   noise injection ([`adversaries`]),
//! - a brute-force minimax oracle for small instances ([`oracle`]),
//! - bound verification, scenario orchestration and CSV reporting
//!   ([`verify`], [`config`], [`report`]).
//!
//! All state is immutable after construction or owned by a single game, and
//! every strategy is deterministic: replaying a configuration yields a
//! bit-identical transcript.

pub mod adversaries;
pub mod baseline;
pub mod bounds;
pub mod classes;
pub mod config;
pub mod error;
pub mod game;
pub mod lang;
pub mod lfd;
pub mod oracle;
pub mod rational;
pub mod report;
pub mod verify;
pub mod weighted;

pub use error::Error;
pub use lang::{Atom, Element, Language, LanguageClass, PairCode, SetExpr, Size};
pub use rational::Rational;
