//! Computable algebra of infinite languages over the universe of unsigned
//! 64-bit naturals.
//!
//! A language is a finite union of explicit finite sets and unbounded
//! arithmetic progressions `{start + k*stride : k >= 0}`. This carrier is
//! closed under intersection (progressions intersect by congruence solving),
//! has decidable membership, and supports exact finite/infinite cardinality
//! classification — everything the game strategies and the structural
//! complexity measures need.
//!
//! Canonical form for a [`SetExpr`]: all finite atoms merged into one sorted
//! duplicate-free list, no finite element covered by a progression atom, no
//! progression contained in another, progressions sorted by (start, stride).

use crate::error::Error;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// Brute-force subset enumeration cap for the complexity measures.
pub const SUBSET_CAP: usize = 25;

/// A point of the universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(pub u64);

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One building block of a set expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Atom {
    /// Strictly increasing, duplicate-free.
    #[serde(rename = "finite")]
    Finite(Vec<Element>),
    /// `{start + k*stride : k >= 0}`, stride >= 1.
    #[serde(rename = "progression")]
    Progression { start: Element, stride: u64 },
}

impl Atom {
    pub fn finite(values: impl IntoIterator<Item = u64>) -> Atom {
        let mut v: Vec<Element> = values.into_iter().map(Element).collect();
        v.sort_unstable();
        v.dedup();
        Atom::Finite(v)
    }

    pub fn progression(start: u64, stride: u64) -> Atom {
        assert!(stride >= 1, "stride must be positive");
        Atom::Progression {
            start: Element(start),
            stride,
        }
    }

    pub fn contains(&self, x: Element) -> bool {
        match self {
            Atom::Finite(v) => v.binary_search(&x).is_ok(),
            Atom::Progression { start, stride } => {
                x >= *start && (x.0 - start.0).is_multiple_of(*stride)
            }
        }
    }

    fn is_empty(&self) -> bool {
        matches!(self, Atom::Finite(v) if v.is_empty())
    }
}

// ---------------------------------------------------------------------------
// SetExpr — canonical unions, intersections
// ---------------------------------------------------------------------------

/// A canonical union of atoms. May be finite or empty (intersections produce
/// both), unlike [`Language`] which always has infinite support.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SetExpr {
    atoms: Vec<Atom>,
}

/// Cardinality classification of a [`SetExpr`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Size {
    Finite(u64),
    Infinite,
}

impl SetExpr {
    pub fn new(atoms: Vec<Atom>) -> SetExpr {
        canonicalize(atoms)
    }

    pub fn empty() -> SetExpr {
        SetExpr { atoms: Vec::new() }
    }

    /// The whole universe `{0, 1, 2, ...}`.
    pub fn universe() -> SetExpr {
        SetExpr {
            atoms: vec![Atom::progression(0, 1)],
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn contains(&self, x: Element) -> bool {
        self.atoms.iter().any(|a| a.contains(x))
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `Infinite` iff some progression atom survives canonicalization.
    pub fn classify_size(&self) -> Size {
        let mut count = 0u64;
        for atom in &self.atoms {
            match atom {
                Atom::Progression { .. } => return Size::Infinite,
                Atom::Finite(v) => count += v.len() as u64,
            }
        }
        Size::Finite(count)
    }

    /// Canonical intersection. Progression pairs are solved by congruence;
    /// everything involving a finite atom filters.
    pub fn intersect(&self, other: &SetExpr) -> SetExpr {
        let mut raw = Vec::new();
        for a in &self.atoms {
            for b in &other.atoms {
                let atom = intersect_atoms(a, b);
                if !atom.is_empty() {
                    raw.push(atom);
                }
            }
        }
        canonicalize(raw)
    }

    /// Minimum element of `self \ seen`, or `None` if that set is empty.
    ///
    /// A progression atom needs at most `|seen| + 1` probes before hitting an
    /// unseen value, so this always terminates.
    pub fn smallest_unseen(&self, seen: &BTreeSet<Element>) -> Option<Element> {
        let mut best: Option<Element> = None;
        for atom in &self.atoms {
            let candidate = match atom {
                Atom::Finite(v) => v.iter().copied().find(|e| !seen.contains(e)),
                Atom::Progression { start, stride } => {
                    let mut x = *start;
                    loop {
                        if !seen.contains(&x) {
                            break Some(x);
                        }
                        x = Element(x.0 + stride);
                    }
                }
            };
            if let Some(c) = candidate {
                if best.is_none_or(|b| c < b) {
                    best = Some(c);
                }
            }
        }
        best
    }

    /// Ascending iteration over distinct members.
    pub fn iter_ascending(&self) -> AscendingIter<'_> {
        AscendingIter::new(self)
    }
}

/// `a ⊆ b` for progressions: divides + congruent + starts no earlier.
fn progression_subset(a_start: u64, a_stride: u64, b_start: u64, b_stride: u64) -> bool {
    a_start >= b_start
        && a_stride.is_multiple_of(b_stride)
        && (a_start - b_start).is_multiple_of(b_stride)
}

fn canonicalize(raw: Vec<Atom>) -> SetExpr {
    let mut finite: BTreeSet<Element> = BTreeSet::new();
    let mut progs: Vec<(u64, u64)> = Vec::new();
    for atom in raw {
        match atom {
            Atom::Finite(v) => finite.extend(v),
            Atom::Progression { start, stride } => progs.push((start.0, stride)),
        }
    }
    progs.sort_unstable();
    progs.dedup();
    // drop progressions contained in another surviving progression
    let kept: Vec<(u64, u64)> = progs
        .iter()
        .copied()
        .filter(|&(s, d)| {
            !progs
                .iter()
                .any(|&(s2, d2)| (s, d) != (s2, d2) && progression_subset(s, d, s2, d2))
        })
        .collect();
    // two identical-after-filter atoms cannot both survive since dedup ran;
    // mutual containment only happens for equal atoms
    let finite: Vec<Element> = finite
        .into_iter()
        .filter(|&e| !kept.iter().any(|&(s, d)| e.0 >= s && (e.0 - s) % d == 0))
        .collect();
    let mut atoms = Vec::new();
    if !finite.is_empty() {
        atoms.push(Atom::Finite(finite));
    }
    atoms.extend(kept.into_iter().map(|(s, d)| Atom::progression(s, d)));
    SetExpr { atoms }
}

fn intersect_atoms(a: &Atom, b: &Atom) -> Atom {
    match (a, b) {
        (Atom::Finite(u), Atom::Finite(v)) => Atom::Finite(
            u.iter()
                .copied()
                .filter(|e| v.binary_search(e).is_ok())
                .collect(),
        ),
        (Atom::Finite(u), p @ Atom::Progression { .. })
        | (p @ Atom::Progression { .. }, Atom::Finite(u)) => {
            Atom::Finite(u.iter().copied().filter(|&e| p.contains(e)).collect())
        }
        (
            Atom::Progression {
                start: a0,
                stride: s,
            },
            Atom::Progression {
                start: b0,
                stride: t,
            },
        ) => intersect_progressions(a0.0, *s, b0.0, *t),
    }
}

/// `{a + s*k} ∩ {b + t*k}` by solving `x ≡ a (mod s), x ≡ b (mod t)`.
fn intersect_progressions(a: u64, s: u64, b: u64, t: u64) -> Atom {
    let g = num_integer::gcd(s, t);
    let (lo, hi, lo_stride, hi_stride) = if a <= b { (a, b, s, t) } else { (b, a, t, s) };
    if (hi - lo) % g != 0 {
        return Atom::Finite(Vec::new());
    }
    let lcm = (s as u128 / g as u128) * t as u128;
    // smallest x >= hi with x ≡ lo (mod lo_stride) and x ≡ hi (mod hi_stride):
    // walk x = hi + hi_stride*k and solve k ≡ (lo - hi)/g * inv(hi_stride/g)
    // modulo lo_stride/g.
    let m = (lo_stride / g) as i128;
    if m == 1 {
        return bounded_progression_atom(hi as u128, lcm);
    }
    let rhs = (((lo as i128 - hi as i128) / g as i128) % m + m) % m;
    let inv = mod_inverse((hi_stride / g) as i128 % m, m)
        .expect("stride/g invertible modulo lo_stride/g");
    let k0 = (rhs * inv) % m;
    let x0 = hi as u128 + hi_stride as u128 * k0 as u128;
    bounded_progression_atom(x0, lcm)
}

fn bounded_progression_atom(start: u128, stride: u128) -> Atom {
    assert!(
        start <= u64::MAX as u128 && stride <= u64::MAX as u128,
        "progression intersection overflows u64"
    );
    Atom::progression(start as u64, stride as u64)
}

fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m))
}

/// Merges the atoms' cursors, skipping duplicates across overlapping atoms.
pub struct AscendingIter<'a> {
    finite: std::iter::Peekable<std::slice::Iter<'a, Element>>,
    progs: Vec<(u64, u64)>, // (next value, stride)
}

impl<'a> AscendingIter<'a> {
    fn new(expr: &'a SetExpr) -> Self {
        let mut finite: &'a [Element] = &[];
        let mut progs = Vec::new();
        for atom in &expr.atoms {
            match atom {
                Atom::Finite(v) => finite = v,
                Atom::Progression { start, stride } => progs.push((start.0, *stride)),
            }
        }
        AscendingIter {
            finite: finite.iter().peekable(),
            progs,
        }
    }
}

impl Iterator for AscendingIter<'_> {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        let mut min: Option<u64> = self.finite.peek().map(|e| e.0);
        for &(head, _) in &self.progs {
            if min.is_none_or(|m| head < m) {
                min = Some(head);
            }
        }
        let m = min?;
        if self.finite.peek().map(|e| e.0) == Some(m) {
            self.finite.next();
        }
        for p in &mut self.progs {
            if p.0 == m {
                p.0 += p.1;
            }
        }
        Some(Element(m))
    }
}

// ---------------------------------------------------------------------------
// Language, LanguageClass
// ---------------------------------------------------------------------------

/// An infinite language: a canonical [`SetExpr`] with at least one
/// progression atom, optionally labelled for display.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Language {
    expr: SetExpr,
    label: Option<String>,
}

impl Language {
    pub fn new(atoms: Vec<Atom>, label: Option<String>) -> Result<Language, Error> {
        let expr = canonicalize(atoms);
        if !expr
            .atoms
            .iter()
            .any(|a| matches!(a, Atom::Progression { .. }))
        {
            return Err(Error::InvalidLanguage(
                "a language needs at least one progression atom (infinite support)".into(),
            ));
        }
        Ok(Language { expr, label })
    }

    pub fn expr(&self) -> &SetExpr {
        &self.expr
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn contains(&self, x: Element) -> bool {
        self.expr.contains(x)
    }
}

/// A finite class, or a desk-scale prefix of an infinite stream.
///
/// A stream is materialized up to its declared maximum index; strategies
/// clamp their active window there. Bounds proved for the full stream hold
/// verbatim for any prefix containing the target.
#[derive(Debug, Clone)]
pub enum LanguageClass {
    Finite(Vec<Language>),
    Stream {
        /// Display name of the indexed constructor, e.g. `tradeoff:3`.
        builder: String,
        languages: Vec<Language>,
    },
}

impl LanguageClass {
    pub fn finite(languages: Vec<Language>) -> LanguageClass {
        assert!(!languages.is_empty(), "class must contain a language");
        LanguageClass::Finite(languages)
    }

    pub fn stream(builder: impl Into<String>, languages: Vec<Language>) -> LanguageClass {
        assert!(!languages.is_empty(), "stream prefix must be nonempty");
        LanguageClass::Stream {
            builder: builder.into(),
            languages,
        }
    }

    /// Number of materializable languages (class size, or stream cap).
    pub fn len(&self) -> usize {
        self.languages().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_stream(&self) -> bool {
        matches!(self, LanguageClass::Stream { .. })
    }

    pub fn languages(&self) -> &[Language] {
        match self {
            LanguageClass::Finite(l) => l,
            LanguageClass::Stream { languages, .. } => languages,
        }
    }

    /// 1-based lookup.
    pub fn language(&self, index: usize) -> Result<&Language, Error> {
        if index == 0 || index > self.len() {
            return Err(Error::IndexOutOfRange {
                index,
                max: self.len(),
            });
        }
        Ok(&self.languages()[index - 1])
    }
}

// ---------------------------------------------------------------------------
// Structural complexity measures
// ---------------------------------------------------------------------------

/// Closure dimension: the largest finite `|⋂ L'|` over nonempty
/// subcollections `L' ⊆ C`, or 0 if no subcollection has a finite
/// intersection. Brute force over all `2^|C| - 1` subcollections.
pub fn closure_dimension(class: &[Language]) -> Result<u64, Error> {
    if class.len() > SUBSET_CAP {
        return Err(Error::ClassTooLarge {
            size: class.len(),
            cap: SUBSET_CAP,
        });
    }
    let mut best = 0u64;
    // DFS shares intersection prefixes; an empty branch cannot grow back.
    fn dfs(class: &[Language], from: usize, current: Option<&SetExpr>, best: &mut u64) {
        for j in from..class.len() {
            let expr = match current {
                None => class[j].expr().clone(),
                Some(c) => c.intersect(class[j].expr()),
            };
            if let Size::Finite(n) = expr.classify_size() {
                *best = (*best).max(n);
                if n == 0 {
                    continue;
                }
            }
            dfs(class, j + 1, Some(&expr), best);
        }
    }
    dfs(class, 0, None, &mut best);
    Ok(best)
}

/// Non-uniform complexity `m(L_i)`: the largest finite `|⋂ L' ∩ L_i|` over
/// subcollections `L'` of the strict predecessors of `L_i`, or 0 when none
/// is finite (in particular `m(L_1) = 0`; the empty subcollection yields
/// `L_i` itself, which is never finite).
pub fn nonuniform_complexity(class: &LanguageClass, index: usize) -> Result<u64, Error> {
    if index == 0 || index > class.len() {
        return Err(Error::IndexOutOfRange {
            index,
            max: class.len(),
        });
    }
    if index > SUBSET_CAP {
        return Err(Error::ClassTooLarge {
            size: index,
            cap: SUBSET_CAP,
        });
    }
    let target = class.language(index)?.expr();
    let predecessors = &class.languages()[..index - 1];
    let mut best = 0u64;
    fn dfs(preds: &[Language], from: usize, current: &SetExpr, best: &mut u64) {
        for j in from..preds.len() {
            let expr = current.intersect(preds[j].expr());
            if let Size::Finite(n) = expr.classify_size() {
                *best = (*best).max(n);
                if n == 0 {
                    continue;
                }
            }
            dfs(preds, j + 1, &expr, best);
        }
    }
    dfs(predecessors, 0, target, &mut best);
    Ok(best)
}

// ---------------------------------------------------------------------------
// Pair coding for N x N universes
// ---------------------------------------------------------------------------

/// Row-capped pairing of `N x N` into the universe, so that a full column
/// `{(i, j) : j in N}` is the progression `{(i-1) + rowCap*k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCode {
    pub row_cap: u64,
}

impl PairCode {
    pub fn new(row_cap: u64) -> PairCode {
        assert!(row_cap >= 1);
        PairCode { row_cap }
    }

    /// `encode(i, j) = (j-1)*rowCap + (i-1)`; requires `1 <= i <= rowCap`.
    pub fn encode(&self, i: u64, j: u64) -> Element {
        assert!(i >= 1 && i <= self.row_cap, "row out of range");
        assert!(j >= 1, "column must be positive");
        Element((j - 1) * self.row_cap + (i - 1))
    }

    pub fn decode(&self, x: Element) -> (u64, u64) {
        (x.0 % self.row_cap + 1, x.0 / self.row_cap + 1)
    }

    /// The column `{(i, j) : j >= 1}` as a progression atom.
    pub fn column(&self, i: u64) -> Atom {
        Atom::progression(self.encode(i, 1).0, self.row_cap)
    }
}
