//! Mod-2 Dieudonné modules: `F` (σ-semilinear) and `V` (σ⁻¹-semilinear) on
//! a vector space over `F_q`, with `FV = VF = 0`.
//!
//! The canonical filtration is the closure of `{0, N}` under `V` and `F^{-1}`.
//! Its blocks are permuted by `V` and `F^{-1}`; cycles of that permutation
//! are the cyclic words whose modules make up the decomposition.
//!
//! When an automorphism `τ` of order prime to 2 is present, `F` and `V`
//! respect its eigenspaces up to doubling and halving of the eigenvalue
//! exponent, so the module splits along orbits of `w ↦ 2w`. The analysis is
//! done per orbit and reassembled; this keeps every linear solve small.

mod filtration;
mod words;

pub use filtration::{Block, Filtration, Letter};
pub use words::{relation_matrices, Word};

use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

use crate::cohomology::Cohomology;
use crate::error::{Error, Result};
use crate::gf2m::{FieldElem, FieldParams};
use crate::linalg::{Matrix, SemilinearOp, Subspace, Vector};

/// A change of basis `P` together with `P^{-1}`.
type BasisChange = (Matrix, Matrix);

#[derive(Clone, Debug)]
pub struct EModule {
    pub field: FieldParams,
    pub f: SemilinearOp,
    pub v: SemilinearOp,
    pub tau: Option<SemilinearOp>,
}

/// Final-filtration values `[ν_1, ..., ν_g]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct EoType(pub Vec<usize>);

impl fmt::Display for EoType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summand {
    pub word: Word,
    pub presentation: String,
    pub rank: usize,
    pub multiplicity: usize,
    pub a_number: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    pub summands: Vec<Summand>,
    pub eo_type: EoType,
}

impl Decomposition {
    fn from_words(words: BTreeMap<Word, usize>, eo_type: EoType) -> Decomposition {
        let mut summands: Vec<Summand> = words
            .into_iter()
            .map(|(word, multiplicity)| Summand {
                presentation: word.presentation(),
                rank: word.len(),
                a_number: word.a_number(),
                multiplicity,
                word,
            })
            .collect();
        summands.sort_by(|a, b| (a.rank, &a.word).cmp(&(b.rank, &b.word)));
        Decomposition {
            m: None,
            summands,
            eo_type,
        }
    }

    pub fn rank(&self) -> usize {
        self.summands.iter().map(|s| s.rank * s.multiplicity).sum()
    }

    pub fn a_number(&self) -> usize {
        self.summands.iter().map(|s| s.a_number * s.multiplicity).sum()
    }

    pub fn multiplicity(&self, word: &Word) -> usize {
        self.summands.iter().find(|s| &s.word == word).map_or(0, |s| s.multiplicity)
    }

    /// `(word, multiplicity)` pairs, for comparing decompositions.
    pub fn multiset(&self) -> Vec<(Word, usize)> {
        self.summands.iter().map(|s| (s.word.clone(), s.multiplicity)).collect()
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|s| {
                if s.multiplicity == 1 {
                    s.presentation.clone()
                } else {
                    format!("{}·{}", s.multiplicity, s.presentation)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Eigenspace data of `τ`.
#[derive(Clone, Debug)]
pub struct TauSplit {
    pub trivial: EModule,
    pub nontrivial: EModule,
    /// Exponent `w` (with eigenvalue `ζ^w`) and its multiplicity.
    pub multiplicities: BTreeMap<u32, usize>,
}

/// Invariants of a module computed orbit by orbit.
#[derive(Clone, Debug, Serialize)]
pub struct Analysis {
    pub dim: usize,
    pub a_number: usize,
    pub p_rank: usize,
    pub decomposition: Decomposition,
}

impl EModule {
    pub fn new(field: FieldParams, f: SemilinearOp, v: SemilinearOp, tau: Option<SemilinearOp>) -> Result<Self> {
        let n = f.dim();
        let square = |op: &SemilinearOp| op.matrix.rows == n && op.matrix.cols == n;
        if !square(&f) || !square(&v) || tau.as_ref().is_some_and(|t| !square(t)) {
            return Err(Error::Dimension(format!("operators must all be {n}x{n}")));
        }
        if f.twist != 1 || v.twist != -1 || tau.as_ref().is_some_and(|t| t.twist != 0) {
            return Err(Error::Dimension("expected twists +1 for F, -1 for V, 0 for tau".into()));
        }
        Ok(EModule { field, f, v, tau })
    }

    pub fn from_cohomology(coh: &Cohomology) -> Result<Self> {
        EModule::new(
            coh.params().field.clone(),
            coh.frobenius_matrix()?,
            coh.verschiebung_matrix()?,
            Some(coh.tau_matrix()),
        )
    }

    /// The module `E(w)` of a word containing both letters, with `τ` absent.
    pub fn from_word(field: FieldParams, word: &Word) -> Result<Self> {
        EModule::from_relations(field, &word.relations())
    }

    /// Module with generators `X_1..X_r` and relations `V^{a_i} X_i =
    /// F^{b_i} X_{i+1}`.
    pub fn from_relations(field: FieldParams, rel: &[(usize, usize)]) -> Result<Self> {
        if rel.is_empty() || rel.iter().any(|&(a, b)| a == 0 || b == 0) {
            return Err(Error::Dimension("relation exponents must be positive".into()));
        }
        let (f, v) = relation_matrices(rel);
        EModule::new(field, SemilinearOp::new(f, 1), SemilinearOp::new(v, -1), None)
    }

    /// Direct sum, block diagonal. `τ` is kept only if every part has one.
    pub fn direct_sum(field: FieldParams, parts: &[EModule]) -> Result<Self> {
        let n: usize = parts.iter().map(|p| p.dim()).sum();
        let block = |get: &dyn Fn(&EModule) -> &Matrix| {
            let mut m = Matrix::zeros(n, n);
            let mut off = 0;
            for p in parts {
                let a = get(p);
                for i in 0..a.rows {
                    for j in 0..a.cols {
                        m.set(off + i, off + j, a.get(i, j));
                    }
                }
                off += a.rows;
            }
            m
        };
        let tau = parts
            .iter()
            .all(|p| p.tau.is_some())
            .then(|| SemilinearOp::new(block(&|p| &p.tau.as_ref().expect("tau").matrix), 0));
        EModule::new(
            field,
            SemilinearOp::new(block(&|p| &p.f.matrix), 1),
            SemilinearOp::new(block(&|p| &p.v.matrix), -1),
            tau,
        )
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    pub fn check_relations(&self) -> Result<()> {
        let fp = &self.field;
        if !self.f.compose(&self.v, fp).is_zero() || !self.v.compose(&self.f, fp).is_zero() {
            return Err(Error::Dimension("FV or VF is nonzero".into()));
        }
        Ok(())
    }

    /// `ker F = im V` and `ker V = im F`.
    pub fn is_bt1(&self) -> bool {
        let fp = &self.field;
        let full = Subspace::full(self.dim());
        self.f.kernel(fp) == self.v.image(&full, fp) && self.v.kernel(fp) == self.f.image(&full, fp)
    }

    pub fn a_number(&self) -> usize {
        let fp = &self.field;
        self.f.kernel(fp).intersection(&self.v.kernel(fp), fp).dim()
    }

    /// Dimension of the stable image of `F`.
    pub fn p_rank(&self) -> usize {
        let fp = &self.field;
        let mut w = Subspace::full(self.dim());
        loop {
            let next = self.f.image(&w, fp);
            if next.dim() == w.dim() {
                return w.dim();
            }
            w = next;
        }
    }

    pub fn canonical_filtration(&self) -> Result<Filtration> {
        let fp = &self.field;
        let filt = Filtration::close(self.dim(), |w| self.v.image(w, fp), |w| self.f.preimage(w, fp))?;
        filt.check_nested(fp)?;
        Ok(filt)
    }

    /// Restriction to an invariant coordinate subset.
    pub fn restrict(&self, idx: &[usize]) -> EModule {
        EModule {
            field: self.field.clone(),
            f: self.f.restrict(idx),
            v: self.v.restrict(idx),
            tau: self.tau.as_ref().map(|t| t.restrict(idx)),
        }
    }

    fn tau_order(&self) -> u32 {
        self.field.order() - 1
    }

    fn tau_diagonal_weights(&self) -> Option<Result<Vec<u32>>> {
        let tau = self.tau.as_ref()?;
        let m = &tau.matrix;
        for i in 0..m.rows {
            for j in 0..m.cols {
                if i != j && !m.get(i, j).is_zero() {
                    return None;
                }
            }
        }
        Some(
            (0..m.rows)
                .map(|i| {
                    let d = m.get(i, i);
                    self.field.dlog(d).map_err(|_| Error::BadTauOrder(self.tau_order()))
                })
                .collect(),
        )
    }

    /// Basis change to `τ`-eigenvectors: the columns of `P` and their
    /// exponents. Diagonal `τ` gives `P = I`.
    fn eigenbasis(&self) -> Result<(Option<BasisChange>, Vec<u32>)> {
        let tau = self.tau.as_ref().ok_or_else(|| Error::Dimension("module has no tau".into()))?;
        let fp = &self.field;
        let ord = self.tau_order();
        if let Some(w) = self.tau_diagonal_weights() {
            return Ok((None, w?));
        }
        let n = self.dim();
        let mut cols: Vec<Vector> = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for w in 0..ord {
            let mut a = tau.matrix.clone();
            let z = fp.zeta_pow(w as i64);
            for i in 0..n {
                a.set(i, i, fp.add(a.get(i, i), z));
            }
            for v in a.kernel(fp) {
                cols.push(v);
                weights.push(w);
            }
        }
        if cols.len() != n {
            return Err(Error::BadTauOrder(ord));
        }
        let p = Matrix::from_columns(n, &cols);
        let p_inv = p.inverse(fp).ok_or(Error::BadTauOrder(ord))?;
        Ok((Some((p, p_inv)), weights))
    }

    /// Rewrites the module in a `τ`-eigenbasis, returning the exponents.
    fn diagonalized(&self) -> Result<(EModule, Vec<u32>)> {
        let (p, weights) = self.eigenbasis()?;
        let ord = self.tau_order();
        if weights.iter().any(|&w| w >= ord) {
            return Err(Error::BadTauOrder(ord));
        }
        let Some((p, p_inv)) = p else {
            return Ok((self.clone(), weights));
        };
        let fp = &self.field;
        let mut t = Matrix::zeros(weights.len(), weights.len());
        for (i, &w) in weights.iter().enumerate() {
            t.set(i, i, fp.zeta_pow(w as i64));
        }
        let m = EModule {
            field: self.field.clone(),
            f: self.f.conjugate(&p, &p_inv, fp),
            v: self.v.conjugate(&p, &p_inv, fp),
            tau: Some(SemilinearOp::new(t, 0)),
        };
        Ok((m, weights))
    }

    pub fn tau_split(&self) -> Result<TauSplit> {
        let tau = self.tau.as_ref().ok_or_else(|| Error::Dimension("module has no tau".into()))?;
        let ord = self.tau_order();
        let fp = &self.field;
        if tau.matrix.pow(ord as u64, fp) != Matrix::identity(self.dim()) {
            return Err(Error::BadTauOrder(ord));
        }
        let (m, weights) = self.diagonalized()?;
        let mut multiplicities = BTreeMap::new();
        for &w in &weights {
            *multiplicities.entry(w).or_insert(0) += 1;
        }
        let (zero, rest): (Vec<usize>, Vec<usize>) = (0..weights.len()).partition(|&i| weights[i] == 0);
        Ok(TauSplit {
            trivial: m.restrict(&zero),
            nontrivial: m.restrict(&rest),
            multiplicities,
        })
    }

    /// Summands along orbits of `w ↦ 2w` on `τ`-exponents, or the module
    /// itself when there is no `τ`.
    pub fn components(&self) -> Result<Vec<EModule>> {
        if self.tau.is_none() {
            return Ok(vec![self.clone()]);
        }
        let (m, weights) = self.diagonalized()?;
        let ord = self.tau_order();
        let mut orbit_of: BTreeMap<u32, u32> = BTreeMap::new();
        for &w in &weights {
            if orbit_of.contains_key(&w) {
                continue;
            }
            let mut x = w;
            loop {
                orbit_of.insert(x, w);
                x = (2 * x) % ord;
                if x == w {
                    break;
                }
            }
        }
        let mut groups: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (i, w) in weights.iter().enumerate() {
            groups.entry(orbit_of[w]).or_default().push(i);
        }
        Ok(groups.values().map(|idx| m.restrict(idx)).collect())
    }

    pub fn eo_type(&self) -> Result<EoType> {
        let filt = self.canonical_filtration()?;
        Ok(EoType(filt.eo_type(self.dim() / 2)))
    }

    fn words(filt: &Filtration) -> Result<BTreeMap<Word, usize>> {
        let mut out = BTreeMap::new();
        for (letters, dim) in filt.cycles()? {
            let (word, power) = Word::canonical(&letters);
            *out.entry(word).or_insert(0) += dim * power;
        }
        Ok(out)
    }

    /// Decomposition into indecomposables read from a single canonical
    /// filtration.
    pub fn decompose(&self) -> Result<Decomposition> {
        let p = self.p_rank();
        if p > 0 {
            return Err(Error::PositivePRank(p));
        }
        let filt = self.canonical_filtration()?;
        let words = EModule::words(&filt)?;
        Ok(Decomposition::from_words(words, EoType(filt.eo_type(self.dim() / 2))))
    }

    /// Decomposition, a-number and p-rank computed per `τ`-orbit component,
    /// with the EO type of the whole module assembled from the component
    /// filtrations.
    pub fn analyze(&self) -> Result<Analysis> {
        let comps = self.components()?;
        let per: Vec<Result<(usize, usize, Filtration)>> = comps
            .par_iter()
            .map(|c| Ok((c.a_number(), c.p_rank(), c.canonical_filtration()?)))
            .collect();
        let mut a_number = 0;
        let mut p_rank = 0;
        let mut filts = Vec::with_capacity(per.len());
        for r in per {
            let (a, p, f) = r?;
            a_number += a;
            p_rank += p;
            filts.push(f);
        }
        if p_rank > 0 {
            return Err(Error::PositivePRank(p_rank));
        }
        let mut words: BTreeMap<Word, usize> = BTreeMap::new();
        for f in &filts {
            for (w, k) in EModule::words(f)? {
                *words.entry(w).or_insert(0) += k;
            }
        }
        let whole = Filtration::direct_sum(&filts)?;
        let eo = EoType(whole.eo_type(self.dim() / 2));
        Ok(Analysis {
            dim: self.dim(),
            a_number,
            p_rank,
            decomposition: Decomposition::from_words(words, eo),
        })
    }

    /// `P^{-1} M P` for an invertible `P`, transporting `τ` too.
    pub fn conjugate(&self, p: &Matrix) -> Option<EModule> {
        let fp = &self.field;
        let p_inv = p.inverse(fp)?;
        Some(EModule {
            field: self.field.clone(),
            f: self.f.conjugate(p, &p_inv, fp),
            v: self.v.conjugate(p, &p_inv, fp),
            tau: self.tau.as_ref().map(|t| t.conjugate(p, &p_inv, fp)),
        })
    }
}

/// Basis vector `e_i` of length `n`.
pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = vec![FieldElem::ZERO; n];
    v[i] = FieldElem::ONE;
    v
}

#[cfg(test)]
mod tests;
