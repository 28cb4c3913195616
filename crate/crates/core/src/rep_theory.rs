//! Two-modular representations of `Sz(q)` seen through the cyclic subgroup
//! generated by `τ`: each irreducible `V_I` is recorded as the multiset of
//! exponents `w` of its `τ`-eigenvalues `ζ^w`.

use serde::Serialize;
use std::collections::BTreeMap;

use crate::dieudonne::{Decomposition, Word};
use crate::error::{Error, Result};

/// Exponent `w` in `[0, q-2]` with multiplicity.
pub type Exponents = BTreeMap<u32, u64>;

fn order(m: u32) -> u32 {
    (1u32 << (2 * m + 1)) - 1
}

fn check_m(m: u32, max: u32) -> Result<()> {
    if m == 0 || m > max {
        return Err(Error::UnsupportedM(m, if max == 10 { "1..=10" } else { "1..=6" }));
    }
    Ok(())
}

/// `i` and `j` are joined by a long edge.
pub fn adjacent(i: u32, j: u32, m: u32) -> bool {
    let n = 2 * m + 1;
    let d = (j + n - i % n) % n;
    d == m || d == m + 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodSubset {
    pub elements: Vec<u32>,
    pub multiplicity: u64,
    pub dimension: u64,
}

impl GoodSubset {
    fn mask(&self) -> u32 {
        self.elements.iter().fold(0, |acc, &i| acc | (1 << i))
    }
}

/// Subsets of `Z/(2m+1)` with no two elements joined by a long edge, with
/// the multiplicity `2^{m+1-|I|}` of `V_I` in de Rham cohomology.
pub fn good_subsets(m: u32) -> Result<Vec<GoodSubset>> {
    check_m(m, 10)?;
    let n = 2 * m + 1;
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let elems: Vec<u32> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let good = elems
            .iter()
            .all(|&i| elems.iter().all(|&j| !adjacent(i, j, m)));
        if good {
            let k = elems.len() as u32;
            out.push(GoodSubset {
                multiplicity: 1 << (m + 1 - k),
                dimension: 1 << (2 * k),
                elements: elems,
            });
        }
    }
    out.sort_by(|a, b| (a.elements.len(), &a.elements).cmp(&(b.elements.len(), &b.elements)));
    Ok(out)
}

/// Sum of `4^{|I|} 2^{m+1-|I|}` over good `I`.
pub fn good_dimension_total(subsets: &[GoodSubset]) -> u64 {
    subsets.iter().map(|s| s.dimension * s.multiplicity).sum()
}

/// The family of good subsets is stable under `i ↦ i + 1`.
pub fn translation_stable(subsets: &[GoodSubset], m: u32) -> bool {
    let n = 2 * m + 1;
    let masks: std::collections::HashSet<u32> = subsets.iter().map(|s| s.mask()).collect();
    masks.iter().all(|&mask| {
        let shifted = ((mask << 1) | (mask >> (n - 1))) & ((1 << n) - 1);
        masks.contains(&shifted)
    })
}

fn add_all(acc: &mut Exponents, other: &Exponents, times: u64) {
    for (&w, &k) in other {
        *acc.entry(w).or_insert(0) += k * times;
    }
}

/// `τ`-exponents on `V_i`: `2^i · {±(2^{m+1}+1), ±1}`.
fn single_exponents(i: u32, m: u32) -> [u32; 4] {
    let ord = order(m) as u64;
    let twist = (1u64 << (i % (2 * m + 1))) % ord;
    let theta1 = (1u64 << (m + 1)) + 1;
    [theta1, 1, ord - 1, ord - theta1].map(|e| ((e * twist) % ord) as u32)
}

/// Exponents on `V_I = ⊗_{i∈I} V_i`: all sums of one exponent per factor.
pub fn vi_exponents(set: &[u32], m: u32) -> Exponents {
    let ord = order(m);
    let mut acc: Exponents = BTreeMap::from([(0, 1)]);
    for &i in set {
        let mut next = Exponents::new();
        for (&w, &k) in &acc {
            for e in single_exponents(i, m) {
                *next.entry((w + e) % ord).or_insert(0) += k;
            }
        }
        acc = next;
    }
    acc
}

/// `τ`-exponents of `⊕_{I good} V_I^{2^{m+1-|I|}}`.
pub fn predicted_hdr_exponents(m: u32) -> Result<Exponents> {
    check_m(m, 6)?;
    let mut acc = Exponents::new();
    for s in good_subsets(m)? {
        add_all(&mut acc, &vi_exponents(&s.elements, m), s.multiplicity);
    }
    Ok(acc)
}

/// `φ_i² = 4 + 2 φ_{i+long} + φ_{i+short}` on `τ`-exponents.
pub fn brauer_square_identity(i: u32, m: u32, long: u32, short: u32) -> bool {
    let ord = order(m);
    let e = single_exponents(i, m);
    let mut lhs = Exponents::new();
    for a in e {
        for b in e {
            *lhs.entry((a + b) % ord).or_insert(0) += 1;
        }
    }
    let n = 2 * m + 1;
    let mut rhs: Exponents = BTreeMap::from([(0, 4)]);
    add_all(&mut rhs, &vi_exponents(&[(i + long) % n], m), 2);
    add_all(&mut rhs, &vi_exponents(&[(i + short) % n], m), 1);
    lhs == rhs
}

/// `φ_i² = 4 + 2 φ_{i+m+1} + φ_{i+1}`.
pub fn brauer_square_check(i: u32, m: u32) -> bool {
    brauer_square_identity(i, m, m + 1, 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub m: u32,
    pub word: String,
    pub multiplicity: usize,
    pub predicted: u64,
    /// `dim W_m = (2m+1) 4^m`
    pub w_m_dimension: u64,
    pub holds: bool,
    /// whether the value is stated for this `m` in the literature
    pub established: bool,
    pub matches_known: Option<bool>,
}

/// Multiplicity of `(F^{-1})^{2m+1} V^{2m+1}` against `4^m`.
pub fn conjecture_report(m: u32, computed: &Decomposition) -> ConjectureReport {
    let t = (2 * m + 1) as usize;
    let word = Word::easy(t);
    let multiplicity = computed.multiplicity(&word);
    let predicted = 4u64.pow(m);
    let holds = multiplicity as u64 == predicted;
    let established = m <= 2;
    ConjectureReport {
        m,
        word: word.to_string(),
        multiplicity,
        predicted,
        w_m_dimension: t as u64 * predicted,
        holds,
        established,
        matches_known: established.then_some(holds),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn listed(m: u32) -> Vec<(Vec<u32>, u64)> {
        good_subsets(m).unwrap().into_iter().map(|s| (s.elements, s.multiplicity)).collect()
    }

    #[test]
    fn good_subsets_small() {
        assert_eq!(listed(1), [(vec![], 4), (vec![0], 2), (vec![1], 2), (vec![2], 2)]);
        let g2 = good_subsets(2).unwrap();
        assert_eq!(g2.len(), 11);
        let pairs: Vec<Vec<u32>> = g2.iter().filter(|s| s.elements.len() == 2).map(|s| s.elements.clone()).collect();
        assert_eq!(pairs, [vec![0, 1], vec![0, 4], vec![1, 2], vec![2, 3], vec![3, 4]]);
        assert!(g2.iter().all(|s| s.multiplicity == 1 << (3 - s.elements.len())));
        assert_eq!(good_dimension_total(&g2), 248);
        assert!(adjacent(0, 1, 1));
    }

    #[test]
    fn good_subset_totals() {
        for m in 1..=10 {
            let g = good_subsets(m).unwrap();
            let q0 = 1u64 << m;
            assert_eq!(good_dimension_total(&g), 2 * q0 * (2 * q0 * q0 - 1), "m={m}");
            assert!(translation_stable(&g, m));
        }
    }

    #[test]
    fn exponent_examples() {
        let v0: Vec<u32> = vi_exponents(&[0], 1).keys().copied().collect();
        assert_eq!(v0, [1, 2, 5, 6]);
        let v1: Vec<u32> = vi_exponents(&[1], 1).keys().copied().collect();
        assert_eq!(v1, [2, 3, 4, 5]);
        assert_eq!(vi_exponents(&[], 3), BTreeMap::from([(0, 1)]));
        assert_eq!(vi_exponents(&[0, 1], 2).values().sum::<u64>(), 16);
    }

    #[test]
    fn predicted_counts() {
        let p = predicted_hdr_exponents(1).unwrap();
        assert_eq!(p, (0..7).map(|w| (w, 4)).collect::<Exponents>());
        assert_eq!(predicted_hdr_exponents(2).unwrap().values().sum::<u64>(), 248);
        assert_eq!(predicted_hdr_exponents(3).unwrap().values().sum::<u64>(), 2032);
    }

    #[test]
    fn brauer_squares() {
        assert!(brauer_square_check(0, 1));
        assert!(brauer_square_check(3, 2));
        for m in 1..=5 {
            for i in 0..2 * m + 1 {
                assert!(brauer_square_check(i, m), "m={m} i={i}");
                assert!(!brauer_square_identity(i, m, m + 1, 2));
            }
        }
    }
}
