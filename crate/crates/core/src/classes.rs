//! Named class constructions used by the adversaries and the config layer.
//!
//! Private infinite tails are realized as progressions sharing one large
//! stride with distinct residues, which makes pairwise disjointness a residue
//! argument. Each builder reserves one extra residue (or row) so that noisy
//! scenarios have a noise source provably disjoint from every language.

use crate::error::Error;
use crate::lang::{Atom, Element, Language, LanguageClass, PairCode};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Desk-scale cap on Littlestone class size.
pub const LITTLESTONE_CAP: usize = 1 << 10;

// ---------------------------------------------------------------------------
// Venn pair: two languages with a finite shared intersection
// ---------------------------------------------------------------------------

/// `{L1, L2}` with `|L1 ∩ L2| = n`: the intersection is `{0..n-1}` and the
/// tails are the residues n and n+1 modulo 3 starting at n.
pub fn venn_class(n: u64) -> LanguageClass {
    assert!(n >= 1);
    let l1 = Language::new(
        vec![Atom::finite(0..n), Atom::progression(n, 3)],
        Some("L1".into()),
    )
    .unwrap();
    let l2 = Language::new(
        vec![Atom::finite(0..n), Atom::progression(n + 1, 3)],
        Some("L2".into()),
    )
    .unwrap();
    LanguageClass::finite(vec![l1, l2])
}

/// Residue n+2 mod 3: disjoint from both Venn languages.
pub fn venn_noise(n: u64) -> Atom {
    Atom::progression(n + 2, 3)
}

// ---------------------------------------------------------------------------
// Littlestone tree: prefix-coded languages over bit strings
// ---------------------------------------------------------------------------

/// Element layout of the Littlestone-tree class.
///
/// Points `x_p` for bit strings `p` of length 1..=m occupy values
/// `2^|p| - 2 + int(p)` (so all of `0 .. 2^(m+1)-2`). Tails start at
/// `b0 = 2^(m+1) - 2` with stride n+1; language `l` (1-based) owns residue
/// `l-1` and residue `n` is reserved for noise.
#[derive(Debug, Clone, Copy)]
pub struct LittlestoneLayout {
    pub m: u32,
    pub n: usize,
    pub b0: u64,
    pub stride: u64,
}

impl LittlestoneLayout {
    pub fn new(n: usize) -> Result<LittlestoneLayout, Error> {
        if !(2..=LITTLESTONE_CAP).contains(&n) {
            return Err(Error::config(
                "littlestone.n",
                format!("n must lie in [2, {LITTLESTONE_CAP}], got {n}"),
            ));
        }
        let m = usize::BITS - 1 - n.leading_zeros(); // floor(log2 n)
        Ok(LittlestoneLayout {
            m,
            n,
            b0: (1u64 << (m + 1)) - 2,
            stride: n as u64 + 1,
        })
    }

    /// The element `x_p`; `p` is most-significant-bit first, 1 <= |p| <= m.
    pub fn point(&self, p: &[bool]) -> Element {
        assert!(!p.is_empty() && p.len() <= self.m as usize);
        let val: u64 = p.iter().fold(0, |acc, &b| (acc << 1) | b as u64);
        Element((1u64 << p.len()) - 2 + val)
    }

    /// The bit string associated with an element: the label `p` of a tree
    /// point, or the full leaf string `v` of a real language's tail. Dummy
    /// tails and noise elements carry no string.
    pub fn string_of(&self, x: Element) -> Option<Vec<bool>> {
        if x.0 < self.b0 {
            let mut len = 1u32;
            while (1u64 << (len + 1)) - 2 <= x.0 {
                len += 1;
            }
            let val = x.0 - ((1u64 << len) - 2);
            return Some(bits_of(val, len));
        }
        let residue = (x.0 - self.b0) % self.stride;
        if residue < (1u64 << self.m) {
            Some(bits_of(residue, self.m))
        } else {
            None
        }
    }

    /// 1-based class index of the leaf language `L_v`.
    pub fn language_index(&self, v: &[bool]) -> usize {
        assert_eq!(v.len(), self.m as usize);
        v.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize) + 1
    }
}

fn bits_of(val: u64, len: u32) -> Vec<bool> {
    (0..len).rev().map(|i| val >> i & 1 == 1).collect()
}

/// The class `{L_v}` over bit strings `v` of length `m = floor(log2 n)`,
/// padded with disjoint dummy languages up to exactly `n` members. A point
/// `x_p` lies in `L_v` iff `p` is a prefix of `v`.
pub fn littlestone_class(n: usize) -> Result<LanguageClass, Error> {
    let layout = LittlestoneLayout::new(n)?;
    let m = layout.m;
    let mut languages = Vec::with_capacity(n);
    for v in 0..(1u64 << m) {
        let leaf = bits_of(v, m);
        let prefixes: Vec<u64> = (1..=m)
            .map(|i| layout.point(&leaf[..i as usize]).0)
            .collect();
        let label: String = leaf.iter().map(|&b| if b { '1' } else { '0' }).collect();
        languages.push(
            Language::new(
                vec![
                    Atom::finite(prefixes),
                    Atom::progression(layout.b0 + v, layout.stride),
                ],
                Some(format!("L_{label}")),
            )
            .unwrap(),
        );
    }
    for l in (1u64 << m)..n as u64 {
        languages.push(
            Language::new(
                vec![Atom::progression(layout.b0 + l, layout.stride)],
                Some(format!("dummy_{}", l + 1)),
            )
            .unwrap(),
        );
    }
    Ok(LanguageClass::finite(languages))
}

/// Residue n of the tail stride: in no language.
pub fn littlestone_noise(n: usize) -> Result<Atom, Error> {
    let layout = LittlestoneLayout::new(n)?;
    Ok(Atom::progression(layout.b0 + n as u64, layout.stride))
}

// ---------------------------------------------------------------------------
// Trade-off stream: nested rapidly growing finite prefixes
// ---------------------------------------------------------------------------

/// The stream `L_i = {(i, j) : j in N} ∪ ⋃_{k<i} {(k, j) : j in [n^k]}`
/// under the row-capped pair coding, materialized up to `max_index`.
///
/// Requires `row_cap >= max_index`; leaving `row_cap > max_index` reserves a
/// row for the noise source.
pub fn tradeoff_class(n: u64, max_index: usize, row_cap: u64) -> Result<LanguageClass, Error> {
    if n < 2 {
        return Err(Error::config(
            "tradeoff.n",
            format!("n must be >= 2, got {n}"),
        ));
    }
    if row_cap < max_index as u64 || max_index == 0 {
        return Err(Error::config(
            "tradeoff.row_cap",
            format!("need row_cap >= max_index >= 1, got row_cap={row_cap}, max_index={max_index}"),
        ));
    }
    let total: u64 = (1..max_index as u32)
        .map(|k| n.checked_pow(k).unwrap_or(u64::MAX))
        .fold(0u64, u64::saturating_add);
    if total > 4_000_000 {
        return Err(Error::config(
            "tradeoff.max_index",
            format!("n^i prefixes exceed desk scale ({total} shared elements)"),
        ));
    }
    let pc = PairCode::new(row_cap);
    let mut languages = Vec::with_capacity(max_index);
    let mut shared: Vec<u64> = Vec::new(); // ⋃_{k<i} {(k, j) : j in [n^k]}, grows with i
    for i in 1..=max_index as u64 {
        let mut atoms = vec![pc.column(i)];
        if !shared.is_empty() {
            atoms.push(Atom::finite(shared.iter().copied()));
        }
        languages.push(Language::new(atoms, Some(format!("L{i}"))).unwrap());
        let block = n
            .checked_pow(i as u32)
            .ok_or_else(|| Error::config("tradeoff", "n^i overflows u64"))?;
        for j in 1..=block {
            shared.push(pc.encode(i, j).0);
        }
    }
    Ok(LanguageClass::stream(
        format!("tradeoff:n={n},max_index={max_index},row_cap={row_cap}"),
        languages,
    ))
}

/// The last row's column, unused by any language when `row_cap > max_index`.
pub fn tradeoff_noise(max_index: usize, row_cap: u64) -> Result<Atom, Error> {
    if row_cap <= max_index as u64 {
        return Err(Error::config(
            "tradeoff.row_cap",
            "noise source needs row_cap > max_index (a spare row)",
        ));
    }
    Ok(PairCode::new(row_cap).column(row_cap))
}

/// Boundary step `t_i = 1 + sum_{j<i} n^j` at which the trade-off adversary
/// would reveal `(i, 1)`.
pub fn tradeoff_boundary(n: u64, i: u32) -> u64 {
    1 + (1..i).map(|j| n.pow(j)).sum::<u64>()
}

// ---------------------------------------------------------------------------
// Random finite classes for randomized coverage
// ---------------------------------------------------------------------------

/// A seeded random finite class: each language is one progression plus a
/// small finite set, all element values below `element_bound`.
pub fn random_class(count: usize, element_bound: u64, seed: u64) -> LanguageClass {
    assert!(count >= 1 && element_bound >= 8);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let languages = (0..count)
        .map(|i| {
            let start = rng.gen_range(0..element_bound);
            let stride = rng.gen_range(1..=8u64);
            let extras: Vec<u64> = (0..rng.gen_range(0..=6usize))
                .map(|_| rng.gen_range(0..element_bound))
                .collect();
            Language::new(
                vec![Atom::progression(start, stride), Atom::finite(extras)],
                Some(format!("R{}", i + 1)),
            )
            .unwrap()
        })
        .collect();
    LanguageClass::finite(languages)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::closure_dimension;

    #[test]
    fn venn_intersection_has_size_n() {
        for n in [1, 6, 20] {
            let class = venn_class(n);
            let inter = class.languages()[0]
                .expr()
                .intersect(class.languages()[1].expr());
            assert_eq!(inter.classify_size(), crate::lang::Size::Finite(n), "n={n}");
            assert_eq!(closure_dimension(class.languages()).unwrap(), n);
        }
    }

    #[test]
    fn venn_noise_disjoint() {
        let class = venn_class(6);
        let noise = crate::lang::SetExpr::new(vec![venn_noise(6)]);
        for l in class.languages() {
            assert!(l.expr().intersect(&noise).is_empty());
        }
    }

    #[test]
    fn littlestone_prefix_membership() {
        let layout = LittlestoneLayout::new(8).unwrap();
        assert_eq!(layout.m, 3);
        let class = littlestone_class(8).unwrap();
        // x_p ∈ L_v iff p is a prefix of v
        for v in 0..8u64 {
            let leaf = bits_of(v, 3);
            let lang = &class.languages()[layout.language_index(&leaf) - 1];
            for len in 1..=3u32 {
                for p in 0..(1u64 << len) {
                    let bits = bits_of(p, len);
                    let is_prefix = leaf[..len as usize] == bits[..];
                    assert_eq!(lang.contains(layout.point(&bits)), is_prefix);
                }
            }
        }
    }

    #[test]
    fn littlestone_strings_round_trip() {
        let layout = LittlestoneLayout::new(8).unwrap();
        assert_eq!(layout.string_of(Element(0)), Some(vec![false]));
        assert_eq!(
            layout.string_of(layout.point(&[true, false])),
            Some(vec![true, false])
        );
        // tail of L_101 maps back to the leaf string
        let tail = Element(layout.b0 + 0b101 + layout.stride * 4);
        assert_eq!(layout.string_of(tail), Some(vec![true, false, true]));
        // noise residue has no string
        let noise = Element(layout.b0 + 8);
        assert_eq!(layout.string_of(noise), None);
    }

    #[test]
    fn littlestone_pads_with_dummies() {
        let class = littlestone_class(5).unwrap();
        assert_eq!(class.len(), 5);
        let noise = crate::lang::SetExpr::new(vec![littlestone_noise(5).unwrap()]);
        for (a, la) in class.languages().iter().enumerate() {
            assert!(la.expr().intersect(&noise).is_empty());
            for lb in &class.languages()[a + 1..] {
                if a >= 4 {
                    // dummies are disjoint from everything
                    assert!(la.expr().intersect(lb.expr()).is_empty());
                }
            }
        }
    }

    #[test]
    fn tradeoff_nested_prefixes() {
        let class = tradeoff_class(3, 6, 7).unwrap();
        let pc = PairCode::new(7);
        let l3 = class.language(3).unwrap();
        assert!(l3.contains(pc.encode(3, 999)));
        assert!(l3.contains(pc.encode(2, 9)));
        assert!(!l3.contains(pc.encode(2, 10)));
        assert!(l3.contains(pc.encode(1, 3)));
        assert!(!l3.contains(pc.encode(1, 4)));
        let noise = crate::lang::SetExpr::new(vec![tradeoff_noise(6, 7).unwrap()]);
        for l in class.languages() {
            assert!(l.expr().intersect(&noise).is_empty());
        }
        assert_eq!(tradeoff_boundary(3, 2), 4);
        assert_eq!(tradeoff_boundary(3, 4), 40);
    }

    #[test]
    fn random_class_is_deterministic() {
        let a = random_class(5, 64, 7);
        let b = random_class(5, 64, 7);
        assert_eq!(a.languages(), b.languages());
        let c = random_class(5, 64, 8);
        assert_ne!(a.languages(), c.languages());
    }
}
