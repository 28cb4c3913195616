//! Cyclic words over `{F^{-1}, V}` and the modules they present.

use serde::{Serialize, Serializer};
use std::fmt;

use super::filtration::Letter;
use crate::gf2m::FieldElem;
use crate::linalg::Matrix;

/// A primitive cyclic word in its lexicographically minimal rotation
/// (`F^{-1}` before `V`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    /// Canonical primitive word of a cyclic sequence, with the number of
    /// times it repeats.
    pub fn canonical(letters: &[Letter]) -> (Word, usize) {
        assert!(!letters.is_empty(), "empty word");
        let n = letters.len();
        let period = (1..=n)
            .find(|&p| n.is_multiple_of(p) && (0..n).all(|i| letters[i] == letters[(i + p) % n]))
            .unwrap_or(n);
        let base = &letters[..period];
        let best = (0..period)
            .map(|r| base[r..].iter().chain(&base[..r]).copied().collect::<Vec<_>>())
            .min()
            .unwrap_or_default();
        (Word(best), n / period)
    }

    /// `(F^{-1})^t V^t`.
    pub fn easy(t: usize) -> Word {
        let mut w = vec![Letter::F; t];
        w.extend(std::iter::repeat_n(Letter::V, t));
        Word(w)
    }

    /// Word of the module with relations `V^{a_i} X_i = F^{b_i} X_{i+1}`,
    /// with the number of times the primitive word repeats.
    pub fn from_relations(rel: &[(usize, usize)]) -> (Word, usize) {
        let r = rel.len();
        let mut letters = Vec::new();
        for i in 0..r {
            letters.extend(std::iter::repeat_n(Letter::F, rel[(i + r - 1) % r].1));
            letters.extend(std::iter::repeat_n(Letter::V, rel[i].0));
        }
        Word::canonical(&letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_local_local(&self) -> bool {
        self.0.contains(&Letter::F) && self.0.contains(&Letter::V)
    }

    /// `Some(t)` for `(F^{-1})^t V^t`.
    pub fn easy_exponent(&self) -> Option<usize> {
        let t = self.len() / 2;
        (*self == Word::easy(t) && t > 0).then_some(t)
    }

    /// Maximal runs `(F-run length, V-run length)` in cyclic order. Only
    /// meaningful for words containing both letters.
    pub fn runs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        let mut prev = None;
        for &l in &self.0 {
            match l {
                Letter::F if prev != Some(Letter::F) => out.push((1, 0)),
                Letter::F => out.last_mut().expect("run").0 += 1,
                Letter::V => out.last_mut().expect("word starts with F").1 += 1,
            }
            prev = Some(l);
        }
        out
    }

    /// Dimension of `ker F ∩ ker V` in the module: one per generator.
    pub fn a_number(&self) -> usize {
        if self.is_local_local() {
            self.runs().len()
        } else {
            0
        }
    }

    /// Relations `V^{a_i} X_i = F^{b_i} X_{i+1}` of the presented module, as
    /// `(a_i, b_i)`.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        let runs = self.runs();
        let r = runs.len();
        (0..r).map(|i| (runs[i].1, runs[(i + 1) % r].0)).collect()
    }

    pub fn presentation(&self) -> String {
        if let Some(t) = self.easy_exponent() {
            return format!("E/E({}+{})", power("F", t), power("V", t));
        }
        if !self.0.contains(&Letter::V) {
            return format!("E/E(F-1)^{}", self.len());
        }
        if !self.0.contains(&Letter::F) {
            return format!("E/E(V-1)^{}", self.len());
        }
        let rel = self.relations();
        let r = rel.len();
        let body: Vec<String> = rel
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| format!("{}X{} = {}X{}", power("V", a), i + 1, power("F", b), (i + 1) % r + 1))
            .collect();
        format!("E<{}>", body.join("; "))
    }
}

fn power(x: &str, e: usize) -> String {
    if e == 1 {
        x.to_string()
    } else {
        format!("{x}^{e}")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == l {
                j += 1;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let base = if l == Letter::F { "(F^-1)" } else { "V" };
            if j - i == 1 {
                write!(f, "{base}")?;
            } else {
                write!(f, "{base}^{}", j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Matrices of `F` and `V` on the module generated by `X_1..X_r` with
/// relations `V^{a_i} X_i = F^{b_i} X_{i+1}` (indices cyclic), all `a_i, b_i
/// >= 1`. Entries are 0/1, so the twists are immaterial.
pub fn relation_matrices(rel: &[(usize, usize)]) -> (Matrix, Matrix) {
    let r = rel.len();
    // per generator: X_i, F^k X_i (1 <= k < b_{i-1}), V^j X_i (1 <= j <= a_i)
    let mut start = Vec::with_capacity(r);
    let mut n = 0;
    for i in 0..r {
        start.push(n);
        n += rel[(i + r - 1) % r].1 + rel[i].0;
    }
    let b_prev = |i: usize| rel[(i + r - 1) % r].1;
    let x = |i: usize| start[i];
    let f_chain = |i: usize, k: usize| start[i] + k;
    let v_chain = |i: usize, j: usize| start[i] + b_prev(i) - 1 + j;
    let mut fm = Matrix::zeros(n, n);
    let mut vm = Matrix::zeros(n, n);
    for i in 0..r {
        let p = (i + r - 1) % r;
        let b = b_prev(i);
        for k in 0..b {
            let src = if k == 0 { x(i) } else { f_chain(i, k) };
            let dst = if k + 1 < b { f_chain(i, k + 1) } else { v_chain(p, rel[p].0) };
            fm.set(dst, src, FieldElem::ONE);
        }
        let a = rel[i].0;
        for j in 0..a {
            let src = if j == 0 { x(i) } else { v_chain(i, j) };
            vm.set(v_chain(i, j + 1), src, FieldElem::ONE);
        }
    }
    (fm, vm)
}
