//! The canonical filtration, reduced to combinatorial data.
//!
//! Members are totally ordered, so each is identified by its dimension.
//! Recording, for every member, which member `V` and `F^{-1}` send it to is
//! enough to recover the Ekedahl-Oort type and the block permutation.

use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::linalg::Subspace;

/// Members `0 = N_0 < N_1 < ... < N_z = N` with the maps induced by `V` and
/// `F^{-1}` on member indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Filtration {
    pub dims: Vec<usize>,
    pub v_map: Vec<usize>,
    pub finv_map: Vec<usize>,
    #[serde(skip)]
    pub subspaces: Option<Vec<Subspace>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Letter {
    /// `F^{-1}`
    F,
    V,
}

/// Block `B_i = N_i / N_{i-1}` for `i >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub dim: usize,
    pub letter: Letter,
    /// Index of the block the letter maps this one onto.
    pub target: usize,
}

impl Filtration {
    /// Closure of `{0, N}` under `v` and `finv`, given as functions on
    /// subspaces.
    pub fn close(
        n: usize,
        mut v: impl FnMut(&Subspace) -> Subspace,
        mut finv: impl FnMut(&Subspace) -> Subspace,
    ) -> Result<Filtration> {
        let mut members: Vec<Subspace> = vec![Subspace::zero(n), Subspace::full(n)];
        let mut edges: Vec<(usize, usize, usize)> = Vec::new();
        let mut queue: VecDeque<usize> = VecDeque::from([0, 1]);
        let find_or_add = |s: Subspace, members: &mut Vec<Subspace>, queue: &mut VecDeque<usize>| {
            if let Some(i) = members.iter().position(|m| m.dim() == s.dim() && *m == s) {
                i
            } else {
                members.push(s);
                queue.push_back(members.len() - 1);
                members.len() - 1
            }
        };
        while let Some(i) = queue.pop_front() {
            let vi = v(&members[i]);
            let fi = finv(&members[i]);
            let a = find_or_add(vi, &mut members, &mut queue);
            let b = find_or_add(fi, &mut members, &mut queue);
            edges.push((i, a, b));
        }
        let mut order: Vec<usize> = (0..members.len()).collect();
        order.sort_by_key(|&i| members[i].dim());
        for w in order.windows(2) {
            let (s, t) = (&members[w[0]], &members[w[1]]);
            if s.dim() == t.dim() {
                return Err(Error::Internal("canonical filtration is not totally ordered".into()));
            }
        }
        let mut rank = vec![0; members.len()];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        let z = members.len();
        let mut v_map = vec![0; z];
        let mut finv_map = vec![0; z];
        for (i, a, b) in edges {
            v_map[rank[i]] = rank[a];
            finv_map[rank[i]] = rank[b];
        }
        let subspaces: Vec<Subspace> = order.iter().map(|&i| members[i].clone()).collect();
        let f = Filtration {
            dims: subspaces.iter().map(|s| s.dim()).collect(),
            v_map,
            finv_map,
            subspaces: Some(subspaces),
        };
        Ok(f)
    }

    /// Verifies that consecutive members are nested.
    pub fn check_nested(&self, field: &crate::gf2m::FieldParams) -> Result<()> {
        if let Some(s) = &self.subspaces {
            for w in s.windows(2) {
                if !w[0].is_subspace_of(&w[1], field) {
                    return Err(Error::Internal("canonical filtration is not totally ordered".into()));
                }
            }
        }
        Ok(())
    }

    /// Canonical filtration of a direct sum from those of the summands: a
    /// word in `V` and `F^{-1}` applied to `N` acts on each summand
    /// separately.
    pub fn direct_sum(parts: &[Filtration]) -> Result<Filtration> {
        let start0: Vec<usize> = vec![0; parts.len()];
        let start1: Vec<usize> = parts.iter().map(|p| p.dims.len() - 1).collect();
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut states: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::new();
        for s in [start0, start1] {
            if !index.contains_key(&s) {
                index.insert(s.clone(), states.len());
                states.push(s.clone());
                queue.push_back(s);
            }
        }
        let mut edges = Vec::new();
        while let Some(s) = queue.pop_front() {
            let vs: Vec<usize> = s.iter().zip(parts).map(|(&i, p)| p.v_map[i]).collect();
            let fs: Vec<usize> = s.iter().zip(parts).map(|(&i, p)| p.finv_map[i]).collect();
            let mut ids = [0; 2];
            for (k, t) in [vs, fs].into_iter().enumerate() {
                ids[k] = *index.entry(t.clone()).or_insert_with(|| {
                    states.push(t.clone());
                    queue.push_back(t);
                    states.len() - 1
                });
            }
            edges.push((index[&s], ids[0], ids[1]));
        }
        let dim_of = |s: &Vec<usize>| -> usize { s.iter().zip(parts).map(|(&i, p)| p.dims[i]).sum() };
        let mut order: Vec<usize> = (0..states.len()).collect();
        order.sort_by_key(|&i| dim_of(&states[i]));
        for w in order.windows(2) {
            let (a, b) = (&states[w[0]], &states[w[1]]);
            if !a.iter().zip(b).all(|(x, y)| x <= y) || a == b {
                return Err(Error::Internal("direct-sum filtration is not totally ordered".into()));
            }
        }
        let mut rank = vec![0; states.len()];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        let mut v_map = vec![0; states.len()];
        let mut finv_map = vec![0; states.len()];
        for (i, a, b) in edges {
            v_map[rank[i]] = rank[a];
            finv_map[rank[i]] = rank[b];
        }
        Ok(Filtration {
            dims: order.iter().map(|&i| dim_of(&states[i])).collect(),
            v_map,
            finv_map,
            subspaces: None,
        })
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// `dim V(N_i)`.
    pub fn nu(&self, i: usize) -> usize {
        self.dims[self.v_map[i]]
    }

    /// `[nu_1, ..., nu_g]`, interpolated linearly on blocks where `V` is
    /// injective and constantly where it vanishes.
    pub fn eo_type(&self, g: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(g);
        for j in 1..self.dims.len() {
            let (lo, hi) = (self.dims[j - 1], self.dims[j]);
            let base = self.nu(j - 1);
            let injective = self.nu(j) > base;
            for i in lo + 1..=hi {
                if out.len() == g {
                    return out;
                }
                out.push(if injective { base + (i - lo) } else { base });
            }
        }
        out
    }

    /// Blocks with their letters and targets. Fails unless every block is
    /// mapped isomorphically onto another block.
    pub fn blocks(&self) -> Result<Vec<Block>> {
        let mut out = Vec::with_capacity(self.dims.len() - 1);
        for i in 1..self.dims.len() {
            let dim = self.dims[i] - self.dims[i - 1];
            let (letter, map) = if self.nu(i) > self.nu(i - 1) {
                (Letter::V, &self.v_map)
            } else {
                (Letter::F, &self.finv_map)
            };
            let (hi, lo) = (map[i], map[i - 1]);
            if hi == 0 || lo + 1 != hi || self.dims[hi] - self.dims[lo] != dim {
                return Err(Error::NotBt1(format!(
                    "block {i} (dim {dim}) is not carried onto a block by {letter:?}"
                )));
            }
            out.push(Block {
                dim,
                letter,
                target: hi - 1,
            });
        }
        let targets: BTreeSet<usize> = out.iter().map(|b| b.target).collect();
        if targets.len() != out.len() {
            return Err(Error::NotBt1("block map is not a permutation".into()));
        }
        Ok(out)
    }

    /// Cycles of the block permutation as `(word, block dimension)`, words
    /// read along the cycle.
    pub fn cycles(&self) -> Result<Vec<(Vec<Letter>, usize)>> {
        let blocks = self.blocks()?;
        let mut seen = vec![false; blocks.len()];
        let mut out = Vec::new();
        for s in 0..blocks.len() {
            if seen[s] {
                continue;
            }
            let mut word = Vec::new();
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                word.push(blocks[i].letter);
                i = blocks[i].target;
            }
            out.push((word, blocks[s].dim));
        }
        Ok(out)
    }
}
