//! Functions regular off `P_inf` and the fiber `y = 0`, written in the
//! monomial basis `y^i z^j` with `i` any integer and `0 <= j < q`.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::CurveParams;
use crate::gf2m::{FieldElem, FieldParams};

/// Sparse Laurent polynomial in `y` with `z`-degree `< q`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawFunc {
    terms: BTreeMap<(i64, u32), FieldElem>,
}

impl RawFunc {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, FieldElem::ONE)
    }

    /// `coeff * y^i z^j`; the caller guarantees `j < q`.
    pub fn monomial(i: i64, j: u32, coeff: FieldElem) -> Self {
        let mut f = Self::zero();
        if !coeff.is_zero() {
            f.terms.insert((i, j), coeff);
        }
        f
    }

    pub fn y() -> Self {
        Self::monomial(1, 0, FieldElem::ONE)
    }

    pub fn z() -> Self {
        Self::monomial(0, 1, FieldElem::ONE)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms `((i, j), coeff)` in increasing `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = ((i64, u32), FieldElem)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    pub fn coeff(&self, i: i64, j: u32) -> FieldElem {
        self.terms.get(&(i, j)).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn min_y_exponent(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.0).min()
    }

    pub fn max_z_exponent(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).max()
    }

    /// Adds `coeff * y^i z^j` in place. `j` must already be reduced.
    pub fn add_term(&mut self, i: i64, j: u32, coeff: FieldElem) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((i, j)) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                let s = FieldElem(e.get().0 ^ coeff.0);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// Adds `coeff * y^i z^j` for arbitrary `j >= 0`, rewriting
    /// `z^q = z + y^(q+q0) + y^(q0+1)` until the `z`-degree drops below `q`.
    pub fn add_unreduced(&mut self, i: i64, j: u64, coeff: FieldElem, c: &CurveParams) {
        let q = c.q as u64;
        if j < q {
            self.add_term(i, j as u32, coeff);
            return;
        }
        let rest = j - q;
        let (q, q0) = (c.q as i64, c.q0 as i64);
        self.add_unreduced(i, rest + 1, coeff, c);
        self.add_unreduced(i + q + q0, rest, coeff, c);
        self.add_unreduced(i + q0 + 1, rest, coeff, c);
    }

    pub fn add(&self, other: &RawFunc) -> RawFunc {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &RawFunc) {
        for (&(i, j), &v) in &other.terms {
            self.add_term(i, j, v);
        }
    }

    pub fn scale(&self, s: FieldElem, f: &FieldParams) -> RawFunc {
        let mut out = RawFunc::zero();
        if s.is_zero() {
            return out;
        }
        for (&(i, j), &v) in &self.terms {
            out.terms.insert((i, j), f.mul(s, v));
        }
        out
    }

    /// Multiplies by `y^k`.
    pub fn shift_y(&self, k: i64) -> RawFunc {
        RawFunc {
            terms: self.terms.iter().map(|(&(i, j), &v)| ((i + k, j), v)).collect(),
        }
    }

    pub fn mul(&self, other: &RawFunc, c: &CurveParams) -> RawFunc {
        let f = &c.field;
        let mut out = RawFunc::zero();
        for (&(i1, j1), &v1) in &self.terms {
            for (&(i2, j2), &v2) in &other.terms {
                out.add_unreduced(i1 + i2, (j1 + j2) as u64, f.mul(v1, v2), c);
            }
        }
        out
    }

    pub fn pow(&self, e: u32, c: &CurveParams) -> RawFunc {
        let mut acc = RawFunc::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, c);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, c);
            }
        }
        acc
    }

    /// Frobenius: squares every coefficient and doubles exponents.
    pub fn square(&self, c: &CurveParams) -> RawFunc {
        let mut out = RawFunc::zero();
        for (&(i, j), &v) in &self.terms {
            out.add_unreduced(2 * i, 2 * j as u64, c.field.square(v), c);
        }
        out
    }

    /// `df/dy = df/dy|_z + y^q0 * df/dz`, using `dz = y^q0 dy`.
    pub fn derivative(&self, c: &CurveParams) -> RawFunc {
        let mut out = RawFunc::zero();
        let q0 = c.q0 as i64;
        for (&(i, j), &v) in &self.terms {
            if i.rem_euclid(2) == 1 {
                out.add_term(i - 1, j, v);
            }
            if j % 2 == 1 {
                out.add_term(i + q0, j - 1, v);
            }
        }
        out
    }

    /// Pull-back by `tau: y -> zeta y, z -> zeta^(q0+1) z`.
    pub fn tau(&self, c: &CurveParams) -> RawFunc {
        let f = &c.field;
        let w = c.q0 as i64 + 1;
        let mut out = RawFunc::zero();
        for (&(i, j), &v) in &self.terms {
            out.terms.insert((i, j), f.mul(v, f.zeta_pow(i + w * j as i64)));
        }
        out
    }

    /// Evaluates at an affine point; `y` must be nonzero if negative powers occur.
    pub fn eval(&self, y: FieldElem, z: FieldElem, f: &FieldParams) -> Option<FieldElem> {
        let mut acc = FieldElem::ZERO;
        for (&(i, j), &v) in &self.terms {
            if i < 0 && y.is_zero() {
                return None;
            }
            let t = f.mul(v, f.mul(f.pow(y, i), f.pow(z, j as i64)));
            acc = f.add(acc, t);
        }
        Some(acc)
    }

    /// JSON form: array of `[i, j, coeff_bitmask]`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(&(i, j), v)| serde_json::json!([i, j, v.0]))
                .collect(),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct RawTerm(i64, u32, u32);

impl Serialize for RawFunc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(&(i, j), v)| RawTerm(i, j, v.0)))
    }
}

impl<'de> Deserialize<'de> for RawFunc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms: Vec<RawTerm> = Vec::deserialize(d)?;
        let mut f = RawFunc::zero();
        for RawTerm(i, j, v) in terms {
            f.add_term(i, j, FieldElem(v));
        }
        Ok(f)
    }
}
