//! Explicit bases of `H^0(Omega^1)`, `H^1(O)` and `H^1_dR`, and the
//! operators `F`, `V`, `tau` on `H^1_dR` as matrices.
//!
//! Cohomology is computed with the Čech cover `U_inf` (the affine part) and
//! `U_0` (the complement of the fiber over `y = 0`). In cone coordinates
//! membership is a per-monomial test:
//!
//! | space            | cone monomial `y^a z^b h1^c h2^d` (pole order `n`) |
//! |------------------|-----------------------------------------------------|
//! | `Gamma(U_inf, O)`  | `a >= 0`                                          |
//! | `Gamma(U_0, O)`    | `n <= 0`                                          |
//! | `Gamma(U_inf, Omega)` | `a >= 0` (coefficient of `dy`)                 |
//! | `Gamma(U_0, Omega)`   | `n <= 2g - 2`, since `div(dy) = (2g-2) P_inf`  |
//!
//! Monomials satisfying both conditions are assigned to `U_inf`.

mod cartier;
mod table2;

pub use cartier::{cartier_raw, raw_monomial, verify_cartier_table, CartierRow, CartierRowReport, CARTIER_TABLE};
pub use table2::{
    fit_section, new_basis_change, table2_rows, verify_table2, NewBasisElem, Side, Table2Entry, Table2Report,
    Table2Row, Table2RowReport,
};

use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gf2m::FieldElem;
use crate::linalg::{Matrix, SemilinearOp};
use crate::suzuki_ff::{ConeFunc, ConeMono, Curve, CurveParams};

/// The tuples `(a, b, c, d)` indexing the regular differentials
/// `y^a z^b h1^c h2^d dy`, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexSet {
    pub tuples: Vec<ConeMono>,
}

impl IndexSet {
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ConeMono> + '_ {
        self.tuples.iter().copied()
    }
}

/// All `(a, b, c, d)` with `a >= 0`, `b <= 1`, `c, d < q0` and pole order at
/// most `2g - 2`. There are exactly `g` of them.
pub fn index_set(p: &CurveParams) -> IndexSet {
    let bound = p.canonical_degree();
    let mut tuples = Vec::new();
    for a in 0..=bound / p.q as i64 {
        for b in 0..2 {
            for c in 0..p.q0 {
                for d in 0..p.q0 {
                    let t = ConeMono::new(a, b, c, d);
                    if t.pole_order(p) <= bound {
                        tuples.push(t);
                    }
                }
            }
        }
    }
    tuples.sort();
    assert_eq!(tuples.len(), p.genus as usize, "index set must have g elements");
    IndexSet { tuples }
}

/// `f_t = z h1^(q0-1) h2^(q0-1) / (y^(a+1) z^b h1^c h2^d)` as a cone monomial.
pub fn h1o_basis_fn(t: ConeMono, p: &CurveParams) -> Result<ConeMono> {
    let in_range = t.a >= 0 && t.b <= 1 && t.c < p.q0 && t.d < p.q0;
    if !in_range || t.pole_order(p) > p.canonical_degree() {
        return Err(Error::NotInIndexSet(t.tuple()));
    }
    Ok(ConeMono::new(-(t.a + 1), 1 - t.b, p.q0 - 1 - t.c, p.q0 - 1 - t.d))
}

/// Inverse of [`h1o_basis_fn`] on cone monomials.
fn h1o_index_tuple(f: ConeMono, p: &CurveParams) -> ConeMono {
    ConeMono::new(-(f.a + 1), 1 - f.b, p.q0 - 1 - f.c, p.q0 - 1 - f.d)
}

/// A class in `H^1_dR`: coordinates on `psi(f_t)` for `t` in the index set,
/// followed by coordinates on `lambda(g_t)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeRhamClass {
    pub coords: Vec<FieldElem>,
}

impl DeRhamClass {
    pub fn zero(dim: usize) -> Self {
        DeRhamClass {
            coords: vec![FieldElem::ZERO; dim],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn psi_part(&self) -> &[FieldElem] {
        &self.coords[..self.coords.len() / 2]
    }

    pub fn lambda_part(&self) -> &[FieldElem] {
        &self.coords[self.coords.len() / 2..]
    }

    /// Nonzero coordinates as `(index, coefficient)`.
    pub fn support(&self) -> Vec<(usize, FieldElem)> {
        self.coords.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, &c)| (i, c)).collect()
    }
}

/// Which open set a differential monomial (coefficient of `dy`) belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiffSide {
    Infinity,
    Zero,
    /// Neither: the residue class spanning `H^1(Omega)`.
    Obstruction,
}

/// `H^1_dR` of a Suzuki curve with the tables needed for `F`, `V`, `tau`.
pub struct Cohomology {
    pub curve: Curve,
    pub index: IndexSet,
    position: HashMap<ConeMono, usize>,
    /// `C(y^r core dy) / dy` for `r in {0, 1}` and every core.
    cartier_table: [Vec<ConeFunc>; 2],
    /// `d f_t = (U_inf part, U_0 part)`.
    split_df: Vec<(ConeFunc, ConeFunc)>,
}

impl std::fmt::Debug for Cohomology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Cohomology").field("params", &self.curve.params).finish()
    }
}

impl Cohomology {
    pub fn new(m: u32) -> Result<Self> {
        Self::from_curve(Curve::new(m)?)
    }

    pub fn from_curve(curve: Curve) -> Result<Self> {
        let p = curve.params.clone();
        let index = index_set(&p);
        let position = index.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let cartier_table = [0i64, 1].map(|r| {
            (0..p.q as usize)
                .into_par_iter()
                .map(|idx| {
                    let mono = ConeMono::from_core_index(r, idx, &p);
                    let raw = curve.to_raw(&ConeFunc::monomial(mono, FieldElem::ONE));
                    curve.to_cone(&cartier_raw(&raw, &p))
                })
                .collect()
        });
        let mut coh = Cohomology {
            curve,
            index,
            position,
            cartier_table,
            split_df: vec![],
        };
        let split_df = coh
            .index
            .tuples
            .par_iter()
            .map(|&t| {
                let f = ConeFunc::monomial(h1o_basis_fn(t, &p)?, FieldElem::ONE);
                coh.split_differential(&coh.curve.cone_derivative(&f))
            })
            .collect::<Result<Vec<_>>>()?;
        coh.split_df = split_df;
        Ok(coh)
    }

    pub fn params(&self) -> &CurveParams {
        &self.curve.params
    }

    pub fn genus(&self) -> usize {
        self.index.len()
    }

    pub fn dim(&self) -> usize {
        2 * self.genus()
    }

    /// Position of `t` in the index set.
    pub fn position(&self, t: ConeMono) -> Option<usize> {
        self.position.get(&t).copied()
    }

    /// `f_t` as a cone function.
    pub fn psi_function(&self, i: usize) -> ConeFunc {
        let f = h1o_basis_fn(self.index.tuples[i], self.params()).expect("index set member");
        ConeFunc::monomial(f, FieldElem::ONE)
    }

    /// `g_t` as a cone function (coefficient of `dy`).
    pub fn lambda_function(&self, i: usize) -> ConeFunc {
        ConeFunc::monomial(self.index.tuples[i], FieldElem::ONE)
    }

    /// The canonical split `d f_t = (df_inf, df_0)`.
    pub fn psi_split(&self, i: usize) -> &(ConeFunc, ConeFunc) {
        &self.split_df[i]
    }

    /// Labels `psi(f_(a,b,c,d))` then `lambda(g_(a,b,c,d))`.
    pub fn basis_labels(&self) -> Vec<String> {
        let tup = |t: ConeMono| format!("({},{},{},{})", t.a, t.b, t.c, t.d);
        let mut v: Vec<String> = self.index.iter().map(|t| format!("psi(f_{})", tup(t))).collect();
        v.extend(self.index.iter().map(|t| format!("lambda(g_{})", tup(t))));
        v
    }

    /// `C(omega dy) / dy` for a cone function `omega`.
    pub fn cartier(&self, omega: &ConeFunc) -> ConeFunc {
        let p = self.params();
        let fp = &p.field;
        let mut out = ConeFunc::zero();
        for (m, v) in omega.terms() {
            let r = m.a.rem_euclid(2);
            let k = (m.a - r) / 2;
            out.add_scaled_shifted(&self.cartier_table[r as usize][m.core_index(p)], fp.sqrt(v), k, fp);
        }
        out
    }

    pub fn diff_side(&self, m: ConeMono) -> DiffSide {
        if m.a >= 0 {
            DiffSide::Infinity
        } else if m.pole_order(self.params()) <= self.params().canonical_degree() {
            DiffSide::Zero
        } else {
            DiffSide::Obstruction
        }
    }

    /// Splits `omega dy`, regular on `U_inf ∩ U_0`, as `omega_inf + omega_0`.
    pub fn split_differential(&self, omega: &ConeFunc) -> Result<(ConeFunc, ConeFunc)> {
        let mut bad = false;
        let (inf, rest) = omega.partition(|m| m.a >= 0);
        let (zero, _) = rest.partition(|m| {
            let ok = self.diff_side(m) == DiffSide::Zero;
            bad |= !ok;
            ok
        });
        if bad {
            return Err(Error::NotACocycle);
        }
        Ok((inf, zero))
    }

    /// Coordinates of a regular differential `omega dy` on the `g_t dy`.
    pub fn differential_coords(&self, omega: &ConeFunc) -> Result<Vec<FieldElem>> {
        let mut out = vec![FieldElem::ZERO; self.genus()];
        for (m, v) in omega.terms() {
            let i = self
                .position(m)
                .ok_or_else(|| Error::Internal(format!("{m} dy is not a regular differential")))?;
            out[i] = v;
        }
        Ok(out)
    }

    /// Class of the cocycle `(f, (omega_inf, omega_0))`, which must satisfy
    /// `df = omega_inf - omega_0` with `omega_inf` regular on `U_inf` and
    /// `omega_0` regular on `U_0`.
    pub fn reduce_cocycle(&self, f: &ConeFunc, omega_inf: &ConeFunc, omega_0: &ConeFunc) -> Result<DeRhamClass> {
        let p = self.params();
        let g = self.genus();
        let on_inf = omega_inf.terms().all(|(m, _)| m.a >= 0);
        let on_zero = omega_0.terms().all(|(m, _)| m.pole_order(p) <= p.canonical_degree());
        if !on_inf || !on_zero || self.curve.cone_derivative(f) != omega_inf.add(omega_0) {
            return Err(Error::NotACocycle);
        }
        let fp = &p.field;
        let (kappa_inf, rest) = f.partition(|m| m.a >= 0);
        let (kappa_0, classes) = rest.partition(|m| m.pole_order(p) <= 0);

        let mut w_inf = omega_inf.add(&self.curve.cone_derivative(&kappa_inf));
        let mut w_0 = omega_0.add(&self.curve.cone_derivative(&kappa_0));
        let mut out = DeRhamClass::zero(2 * g);
        for (m, v) in classes.terms() {
            let i = self
                .position(h1o_index_tuple(m, p))
                .ok_or_else(|| Error::Internal(format!("{m} is not a basis function of H^1(O)")))?;
            out.coords[i] = v;
            let (di, d0) = &self.split_df[i];
            w_inf.add_scaled_shifted(di, v, 0, fp);
            w_0.add_scaled_shifted(d0, v, 0, fp);
        }
        if w_inf != w_0 {
            return Err(Error::Internal("leftover differential is not global".into()));
        }
        for (i, c) in self.differential_coords(&w_inf)?.into_iter().enumerate() {
            out.coords[g + i] = c;
        }
        Ok(out)
    }

    /// Column images of the basis under `F`.
    pub fn frobenius_columns(&self) -> Result<Vec<DeRhamClass>> {
        let g = self.genus();
        let zero = ConeFunc::zero();
        (0..2 * g)
            .into_par_iter()
            .map(|j| {
                if j >= g {
                    return Ok(DeRhamClass::zero(2 * g));
                }
                let f = self.psi_function(j);
                self.reduce_cocycle(&self.curve.cone_mul(&f, &f), &zero, &zero)
            })
            .collect()
    }

    /// Column images of the basis under `V`.
    pub fn verschiebung_columns(&self) -> Result<Vec<DeRhamClass>> {
        let g = self.genus();
        (0..2 * g)
            .into_par_iter()
            .map(|j| {
                let image = if j < g {
                    let (di, d0) = &self.split_df[j];
                    let c = self.cartier(di);
                    if c != self.cartier(d0) {
                        return Err(Error::Internal(format!("Cartier images of the split of d f_{j} differ")));
                    }
                    c
                } else {
                    self.cartier(&self.lambda_function(j - g))
                };
                let mut out = DeRhamClass::zero(2 * g);
                for (i, c) in self.differential_coords(&image)?.into_iter().enumerate() {
                    out.coords[g + i] = c;
                }
                Ok(out)
            })
            .collect()
    }

    pub fn frobenius_matrix(&self) -> Result<SemilinearOp> {
        Ok(SemilinearOp::new(columns_to_matrix(&self.frobenius_columns()?), 1))
    }

    pub fn verschiebung_matrix(&self) -> Result<SemilinearOp> {
        Ok(SemilinearOp::new(columns_to_matrix(&self.verschiebung_columns()?), -1))
    }

    /// Exponents `w` with `tau^*(basis vector) = zeta^w * basis vector`.
    pub fn tau_weights(&self) -> Vec<u32> {
        let p = self.params();
        let ord = p.q - 1;
        let mut w: Vec<u32> = (0..self.genus())
            .map(|i| h1o_basis_fn(self.index.tuples[i], p).expect("member").tau_weight(p))
            .collect();
        w.extend(self.index.iter().map(|t| (t.tau_weight(p) + 1) % ord));
        w
    }

    pub fn tau_matrix(&self) -> SemilinearOp {
        let fp = &self.params().field;
        let w = self.tau_weights();
        let mut m = Matrix::zeros(w.len(), w.len());
        for (i, &e) in w.iter().enumerate() {
            m.set(i, i, fp.zeta_pow(e as i64));
        }
        SemilinearOp::new(m, 0)
    }
}

pub fn columns_to_matrix(cols: &[DeRhamClass]) -> Matrix {
    let n = cols.len();
    let vecs: Vec<Vec<FieldElem>> = cols.iter().map(|c| c.coords.clone()).collect();
    Matrix::from_columns(n, &vecs)
}
