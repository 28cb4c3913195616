//! The Cartier operator on differentials `f dy`, and the closed-form table
//! of its values on the regular differentials.

use serde::Serialize;

use crate::gf2m::FieldElem;
use crate::suzuki_ff::{ConeFunc, Curve, CurveParams, RawFunc};

/// `C(f dy) = g dy`; returns `g`.
///
/// Odd powers of `z` are first rewritten once with
/// `z = z^q + y^(q+q0) + y^(q0+1)`, which leaves only even `z`-exponents. Then
/// `C(y^(2k+1) z^(2j) dy) = y^k z^j dy` and even powers of `y` are killed.
pub fn cartier_raw(f: &RawFunc, p: &CurveParams) -> RawFunc {
    let fp = &p.field;
    let (q, q0) = (p.q as i64, p.q0 as i64);
    let mut even: Vec<(i64, u64, FieldElem)> = Vec::with_capacity(3 * f.len());
    for ((i, j), c) in f.terms() {
        if j % 2 == 0 {
            even.push((i, j as u64, c));
        } else {
            let j0 = j as u64 - 1;
            even.push((i, j0 + q as u64, c));
            even.push((i + q + q0, j0, c));
            even.push((i + q0 + 1, j0, c));
        }
    }
    let mut out = RawFunc::zero();
    for (i, j, c) in even {
        if i.rem_euclid(2) == 1 {
            out.add_unreduced((i - 1) / 2, j / 2, fp.sqrt(c), p);
        }
    }
    out
}

/// Exponents `[y, z, h1, h2]` of a monomial.
pub type Exponents = [u32; 4];

/// One row of the Cartier table: `C(lhs dy) = (sum of rhs monomials) dy`,
/// with exponents given as functions of `q0`.
pub struct CartierRow {
    pub label: &'static str,
    pub lhs: Exponents,
    pub rhs: fn(u32) -> Vec<Exponents>,
    pub printed: &'static str,
}

pub const CARTIER_TABLE: [CartierRow; 15] = [
    CartierRow { label: "1", lhs: [0, 0, 0, 0], rhs: |_| vec![], printed: "0" },
    CartierRow { label: "y", lhs: [1, 0, 0, 0], rhs: |_| vec![[0, 0, 0, 0]], printed: "dy" },
    CartierRow { label: "z", lhs: [0, 1, 0, 0], rhs: |q0| vec![[q0 / 2, 0, 0, 0]], printed: "y^{q0/2} dy" },
    CartierRow { label: "h1", lhs: [0, 0, 1, 0], rhs: |q0| vec![[q0, 0, 0, 0]], printed: "y^{q0} dy" },
    CartierRow {
        label: "h2",
        lhs: [0, 0, 0, 1],
        rhs: |q0| vec![[q0 / 2, 0, q0 / 2, 0], [0, 0, 0, 1]],
        printed: "((y h1)^{q0/2} + h2) dy",
    },
    CartierRow { label: "yz", lhs: [1, 1, 0, 0], rhs: |q0| vec![[0, 0, q0 / 2, 0]], printed: "h1^{q0/2} dy" },
    CartierRow {
        label: "yh1",
        lhs: [1, 0, 1, 0],
        rhs: |q0| vec![[q0 / 2, 0, q0 / 2, 0], [0, 0, 0, 1]],
        printed: "((y h1)^{q0/2} + h2) dy",
    },
    CartierRow { label: "zh1", lhs: [0, 1, 1, 0], rhs: |q0| vec![[q0 / 2, 0, 0, q0 / 2]], printed: "(y h2)^{q0/2} dy" },
    CartierRow { label: "zh2", lhs: [0, 1, 0, 1], rhs: |q0| vec![[0, 0, q0 / 2, q0 / 2]], printed: "(h1 h2)^{q0/2} dy" },
    CartierRow {
        label: "h1h2",
        lhs: [0, 0, 1, 1],
        rhs: |q0| vec![[0, 0, 1, 0], [q0, 1, 0, 0]],
        printed: "(h1 + z y^{q0}) dy",
    },
    CartierRow {
        label: "yzh1",
        lhs: [1, 1, 1, 0],
        rhs: |q0| vec![[q0 / 2, 1, 0, 0], [0, 0, q0 / 2, q0 / 2]],
        printed: "(y^{q0/2} z + (h1 h2)^{q0/2}) dy",
    },
    CartierRow {
        label: "yzh2",
        lhs: [1, 1, 0, 1],
        rhs: |q0| vec![[0, 1, q0 / 2, 0], [q0 / 2 + 1, 0, 0, q0 / 2]],
        printed: "(z h1^{q0/2} + y^{q0/2+1} h2^{q0/2}) dy",
    },
    CartierRow {
        label: "zh1h2",
        lhs: [0, 1, 1, 1],
        rhs: |q0| vec![[q0 / 2, 1, 0, q0 / 2], [0, 0, q0 / 2 + 1, 0]],
        printed: "(z y^{q0/2} h2^{q0/2} + h1^{q0/2+1}) dy",
    },
    CartierRow {
        label: "yh1h2",
        lhs: [1, 0, 1, 1],
        rhs: |q0| vec![[q0 / 2, 1, q0 / 2, 0], [0, 1, 0, q0 / 2]],
        printed: "((y h1)^{q0/2} z + h2^{q0/2} z) dy",
    },
    CartierRow {
        label: "yzh1h2",
        lhs: [1, 1, 1, 1],
        rhs: |q0| vec![[q0 / 2, 0, 0, 1], [0, 1, q0 / 2, q0 / 2]],
        printed: "(y^{q0/2} h2 + z h1^{q0/2} h2^{q0 2}) dy",
    },
];

/// Outcome of checking one row for a given curve.
#[derive(Clone, Debug, Serialize)]
pub struct CartierRowReport {
    pub label: String,
    pub printed: String,
    pub matches: bool,
    /// `C(lhs dy) / dy` in cone monomials.
    pub computed: ConeFunc,
    /// The printed right-hand side, instantiated and written in cone monomials.
    pub expected: ConeFunc,
}

/// Raw form of `y^a z^b h1^c h2^d`.
pub fn raw_monomial(curve: &Curve, e: Exponents) -> RawFunc {
    let p = &curve.params;
    RawFunc::y()
        .pow(e[0], p)
        .mul(&RawFunc::z().pow(e[1], p), p)
        .mul(&curve.h1().pow(e[2], p), p)
        .mul(&curve.h2().pow(e[3], p), p)
}

/// Evaluates every row of the table on the given curve by computing both
/// sides as raw functions.
pub fn verify_cartier_table(curve: &Curve) -> Vec<CartierRowReport> {
    let q0 = curve.params.q0;
    CARTIER_TABLE
        .iter()
        .map(|row| {
            let lhs = raw_monomial(curve, row.lhs);
            let computed = cartier_raw(&lhs, &curve.params);
            let mut expected = RawFunc::zero();
            for e in (row.rhs)(q0) {
                expected.add_assign(&raw_monomial(curve, e));
            }
            CartierRowReport {
                label: row.label.to_string(),
                printed: row.printed.to_string(),
                matches: computed == expected,
                computed: curve.to_cone(&computed),
                expected: curve.to_cone(&expected),
            }
        })
        .collect()
}
