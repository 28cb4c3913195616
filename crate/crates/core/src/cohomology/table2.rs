//! The action of `F` and `V` on `H^1_dR` for `m = 1`, in the adapted bases
//! built from sums such as `f_(0,1,0,0) + f_(3,0,0,0)`.
//!
//! The printed table depends on a choice of section `psi` of
//! `H^1_dR -> H^1(O)`: different splittings `df = df_inf + df_0` change
//! `psi(f)` by a regular differential. [`fit_section`] looks for a map
//! `s: H^1(O) -> H^0(Omega)` such that `psi + lambda s` reproduces the table,
//! which separates genuine disagreements from a different choice of split.

use serde::Serialize;

use super::Cohomology;
use crate::error::{Error, Result};
use crate::gf2m::FieldElem;
use crate::linalg::{Matrix, SemilinearOp};
use crate::suzuki_ff::ConeMono;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    Psi,
    Lambda,
}

/// A sum of `psi(f_t)` or of `lambda(g_t)` over several tuples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewBasisElem {
    pub side: Side,
    pub tuples: Vec<[i64; 4]>,
}

impl std::fmt::Display for NewBasisElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (wrap, letter) = match self.side {
            Side::Psi => ("psi", "f"),
            Side::Lambda => ("lambda", "g"),
        };
        let parts: Vec<String> = self
            .tuples
            .iter()
            .map(|t| format!("{letter}_({},{},{},{})", t[0], t[1], t[2], t[3]))
            .collect();
        write!(f, "{wrap}({})", parts.join("+"))
    }
}

pub type Table2Entry = Option<NewBasisElem>;

/// One printed row: a basis element and its images under `V` and `F`
/// (`None` is zero).
#[derive(Clone, Debug, Serialize)]
pub struct Table2Row {
    pub elem: NewBasisElem,
    pub v: Table2Entry,
    pub f: Table2Entry,
}

fn e(side: Side, ts: &[[i64; 4]]) -> NewBasisElem {
    NewBasisElem {
        side,
        tuples: ts.to_vec(),
    }
}

/// The 28 printed rows, in printed order.
pub fn table2_rows() -> Vec<Table2Row> {
    use Side::{Lambda as L, Psi as P};
    let row = |elem, v, f| Table2Row { elem, v, f };
    vec![
        row(e(L, &[[0, 0, 0, 0]]), None, None),
        row(e(L, &[[2, 0, 0, 0]]), None, None),
        row(e(L, &[[0, 1, 0, 0], [3, 0, 0, 0]]), None, None),
        row(e(L, &[[2, 1, 0, 0], [0, 0, 1, 0]]), None, None),
        row(e(L, &[[0, 0, 0, 1], [1, 0, 1, 0]]), None, None),
        row(e(L, &[[1, 0, 0, 0]]), Some(e(L, &[[0, 0, 0, 0]])), None),
        row(e(L, &[[0, 0, 1, 0]]), Some(e(L, &[[2, 0, 0, 0]])), None),
        row(e(L, &[[1, 0, 0, 1]]), Some(e(L, &[[0, 1, 0, 0], [3, 0, 0, 0]])), None),
        row(e(L, &[[0, 0, 1, 1]]), Some(e(L, &[[2, 1, 0, 0], [0, 0, 1, 0]])), None),
        row(e(L, &[[1, 0, 1, 0]]), Some(e(L, &[[0, 0, 0, 1], [1, 0, 1, 0]])), None),
        row(e(L, &[[0, 1, 0, 0]]), Some(e(L, &[[1, 0, 0, 0]])), None),
        row(e(L, &[[1, 1, 0, 0]]), Some(e(L, &[[0, 0, 1, 0]])), None),
        row(e(L, &[[0, 1, 1, 0]]), Some(e(L, &[[1, 0, 0, 1]])), None),
        row(e(L, &[[0, 1, 0, 1]]), Some(e(L, &[[0, 0, 1, 1]])), None),
        row(e(P, &[[0, 1, 0, 1]]), None, Some(e(L, &[[0, 0, 0, 0]]))),
        row(e(P, &[[0, 1, 1, 0]]), None, Some(e(L, &[[2, 0, 0, 0]]))),
        row(e(P, &[[1, 1, 0, 0]]), None, Some(e(L, &[[0, 1, 0, 0], [3, 0, 0, 0]]))),
        row(e(P, &[[0, 1, 0, 0], [3, 0, 0, 0]]), None, Some(e(L, &[[2, 1, 0, 0], [0, 0, 1, 0]]))),
        row(e(P, &[[0, 0, 0, 1], [1, 0, 1, 0]]), None, Some(e(L, &[[0, 0, 0, 1], [1, 0, 1, 0]]))),
        row(e(P, &[[0, 0, 1, 1]]), None, Some(e(P, &[[0, 1, 0, 1]]))),
        row(e(P, &[[1, 0, 0, 1]]), None, Some(e(P, &[[0, 1, 1, 0]]))),
        row(e(P, &[[2, 1, 0, 0], [0, 0, 1, 0]]), None, Some(e(P, &[[1, 1, 0, 0]]))),
        row(e(P, &[[1, 0, 0, 0]]), None, Some(e(P, &[[0, 1, 1, 0]]))),
        row(e(P, &[[1, 0, 1, 0]]), Some(e(L, &[[1, 0, 1, 0]])), Some(e(P, &[[0, 0, 0, 1], [1, 0, 1, 0]]))),
        row(e(P, &[[2, 1, 0, 0]]), Some(e(L, &[[0, 1, 0, 0]])), Some(e(P, &[[0, 0, 1, 1]]))),
        row(e(P, &[[3, 0, 0, 0]]), Some(e(L, &[[1, 1, 0, 0]])), Some(e(P, &[[1, 0, 0, 1]]))),
        row(e(P, &[[2, 0, 0, 0]]), Some(e(L, &[[0, 1, 1, 0]])), Some(e(P, &[[2, 1, 0, 0], [0, 0, 1, 0]]))),
        row(e(P, &[[0, 0, 0, 0]]), Some(e(L, &[[0, 1, 0, 1]])), Some(e(P, &[[1, 0, 0, 0]]))),
    ]
}

fn elem_vector(coh: &Cohomology, el: &NewBasisElem) -> Result<Vec<FieldElem>> {
    let g = coh.genus();
    let mut v = vec![FieldElem::ZERO; 2 * g];
    for t in &el.tuples {
        let mono = ConeMono::new(t[0], t[1] as u32, t[2] as u32, t[3] as u32);
        let i = coh.position(mono).ok_or(Error::NotInIndexSet(*t))?;
        let off = if el.side == Side::Psi { 0 } else { g };
        v[off + i] = FieldElem(v[off + i].0 ^ 1);
    }
    Ok(v)
}

/// The printed row elements as a basis: returns them together with the
/// matrix whose columns are their coordinates in the plain basis. The psi
/// rows come first, matching the plain coordinate layout.
pub fn new_basis_change(coh: &Cohomology) -> Result<(Vec<NewBasisElem>, Matrix)> {
    if coh.params().m != 1 {
        return Err(Error::UnsupportedM(coh.params().m, "1"));
    }
    let rows = table2_rows();
    let mut elems: Vec<NewBasisElem> = rows.iter().filter(|r| r.elem.side == Side::Psi).map(|r| r.elem.clone()).collect();
    elems.extend(rows.iter().filter(|r| r.elem.side == Side::Lambda).map(|r| r.elem.clone()));
    let cols = elems.iter().map(|el| elem_vector(coh, el)).collect::<Result<Vec<_>>>()?;
    Ok((elems, Matrix::from_columns(2 * coh.genus(), &cols)))
}

/// Solves for `s` (a `g x g` matrix from psi-coordinates to
/// lambda-coordinates) with `V_ll s = T_V - V_lp` and `s F_pp = T_F - F_lp`,
/// using only the psi columns not listed in `skip_f` for the `F` equations.
/// `None` if no such `s` exists.
pub fn fit_section(
    f_op: &Matrix,
    v_op: &Matrix,
    target_f: &Matrix,
    target_v: &Matrix,
    g: usize,
    skip_f: &[usize],
    field: &crate::gf2m::FieldParams,
) -> Option<Matrix> {
    let n = g * g;
    let var = |k: usize, c: usize| k * g + c;
    let mut rows: Vec<Vec<FieldElem>> = Vec::new();
    for r in 0..g {
        for c in 0..g {
            // sum_k V[g+r][g+k] S[k][c] = T_V[g+r][c] - V[g+r][c]
            let mut eq = vec![FieldElem::ZERO; n + 1];
            for k in 0..g {
                eq[var(k, c)] = v_op.get(g + r, g + k);
            }
            eq[n] = field.add(target_v.get(g + r, c), v_op.get(g + r, c));
            rows.push(eq);
            if skip_f.contains(&c) {
                continue;
            }
            // sum_k S[r][k] F[k][c] = T_F[g+r][c] - F[g+r][c]
            let mut eq = vec![FieldElem::ZERO; n + 1];
            for k in 0..g {
                eq[var(r, k)] = f_op.get(k, c);
            }
            eq[n] = field.add(target_f.get(g + r, c), f_op.get(g + r, c));
            rows.push(eq);
        }
    }
    let mut m = Matrix::from_rows(n + 1, &rows);
    let pivots = m.rref_in_place(field);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut s = Matrix::zeros(g, g);
    for (row, &p) in pivots.iter().enumerate() {
        s.set(p / g, p % g, m.get(row, n));
    }
    Some(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct Table2RowReport {
    pub elem: String,
    pub printed_v: String,
    pub printed_f: String,
    /// Images with the section used throughout the crate.
    pub computed_v: String,
    pub computed_f: String,
    /// Images after adjusting the section by the fitted `s`.
    pub adjusted_v: String,
    pub adjusted_f: String,
    pub matches_v: bool,
    pub matches_f: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table2Report {
    pub rows: Vec<Table2RowReport>,
    /// Rows whose `F` image was left out of the fit.
    pub excluded_f: Vec<String>,
    /// Nonzero entries `lambda-part += g` of the fitted section change, as
    /// `(psi element, lambda element)` pairs.
    pub section_adjustment: Vec<(String, String)>,
    /// Rows matching without any section adjustment.
    pub plain_matches: usize,
}

impl Table2Report {
    pub fn mismatches(&self) -> Vec<&Table2RowReport> {
        self.rows.iter().filter(|r| !(r.matches_v && r.matches_f)).collect()
    }
}

fn describe(col: &[FieldElem], elems: &[NewBasisElem]) -> String {
    let parts: Vec<String> = col
        .iter()
        .zip(elems)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, el)| if *c == FieldElem::ONE { el.to_string() } else { format!("[{c}]{el}") })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn target(rows: &[Table2Row], elems: &[NewBasisElem], pick: impl Fn(&Table2Row) -> &Table2Entry) -> Matrix {
    let n = elems.len();
    let mut t = Matrix::zeros(n, n);
    for r in rows {
        let j = elems.iter().position(|x| *x == r.elem).expect("row element is a basis element");
        if let Some(img) = pick(r) {
            let i = elems.iter().position(|x| x == img).expect("image is a basis element");
            t.set(i, j, FieldElem::ONE);
        }
    }
    t
}

/// Recomputes the table and diffs it against the printed rows. The `F`
/// images of the rows in `exclude_f` (labels such as `psi(f_(1,0,0,0))`) are
/// not used when fitting the section.
pub fn verify_table2(coh: &Cohomology, exclude_f: &[&str]) -> Result<Table2Report> {
    let fp = &coh.params().field;
    let g = coh.genus();
    let (elems, p) = new_basis_change(coh)?;
    let p_inv = p.inverse(fp).ok_or_else(|| Error::Internal("adapted basis is singular".into()))?;
    let f_new = coh.frobenius_matrix()?.conjugate(&p, &p_inv, fp).matrix;
    let v_new = coh.verschiebung_matrix()?.conjugate(&p, &p_inv, fp).matrix;
    let rows = table2_rows();
    let t_f = target(&rows, &elems, |r| &r.f);
    let t_v = target(&rows, &elems, |r| &r.v);

    let skip: Vec<usize> = exclude_f
        .iter()
        .filter_map(|lab| elems.iter().position(|x| x.to_string() == *lab))
        .collect();
    let s = fit_section(&f_new, &v_new, &t_f, &t_v, g, &skip, fp).unwrap_or_else(|| Matrix::zeros(g, g));

    // Q = [[I, 0], [s, I]] is its own inverse in characteristic 2.
    let mut q = Matrix::identity(2 * g);
    for r in 0..g {
        for c in 0..g {
            q.set(g + r, c, s.get(r, c));
        }
    }
    let f_adj = SemilinearOp::new(f_new.clone(), 1).conjugate(&q, &q, fp).matrix;
    let v_adj = SemilinearOp::new(v_new.clone(), -1).conjugate(&q, &q, fp).matrix;

    let mut reports = Vec::new();
    let mut plain = 0;
    for r in &rows {
        let j = elems.iter().position(|x| *x == r.elem).expect("basis element");
        let show = |e: &Table2Entry| e.as_ref().map_or("0".to_string(), |x| x.to_string());
        let computed_v = describe(&v_new.column(j), &elems);
        let computed_f = describe(&f_new.column(j), &elems);
        let adjusted_v = describe(&v_adj.column(j), &elems);
        let adjusted_f = describe(&f_adj.column(j), &elems);
        let (pv, pf) = (show(&r.v), show(&r.f));
        if computed_v == pv && computed_f == pf {
            plain += 1;
        }
        reports.push(Table2RowReport {
            elem: r.elem.to_string(),
            matches_v: adjusted_v == pv,
            matches_f: adjusted_f == pf,
            printed_v: pv,
            printed_f: pf,
            computed_v,
            computed_f,
            adjusted_v,
            adjusted_f,
        });
    }
    let mut section_adjustment = Vec::new();
    for r in 0..g {
        for c in 0..g {
            if !s.get(r, c).is_zero() {
                section_adjustment.push((elems[c].to_string(), elems[g + r].to_string()));
            }
        }
    }
    Ok(Table2Report {
        rows: reports,
        excluded_f: exclude_f.iter().map(|s| s.to_string()).collect(),
        section_adjustment,
        plain_matches: plain,
    })
}
