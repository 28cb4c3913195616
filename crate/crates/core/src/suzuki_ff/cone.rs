//! Cone monomials `y^a z^b h1^c h2^d` with `a` any integer, `b in {0, 1}`
//! and `0 <= c, d < q0`.
//!
//! Every integer is the pole order at `P_inf` of exactly one cone monomial,
//! so a cone expansion is also an expansion by pole order: the valuation at
//! `P_inf` of a nonzero [`ConeFunc`] is minus its largest term pole order.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

use super::CurveParams;
use crate::gf2m::{FieldElem, FieldParams};

/// Exponent tuple `(a, b, c, d)` of a cone monomial.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConeMono {
    pub a: i64,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl ConeMono {
    pub const fn new(a: i64, b: u32, c: u32, d: u32) -> Self {
        ConeMono { a, b, c, d }
    }

    pub fn tuple(self) -> [i64; 4] {
        [self.a, self.b as i64, self.c as i64, self.d as i64]
    }

    /// Pole order at `P_inf`: `aq + b(q+q0) + c(q+2q0) + d(q+2q0+1)`.
    pub fn pole_order(self, p: &CurveParams) -> i64 {
        let (q, q0) = (p.q as i64, p.q0 as i64);
        self.a * q + self.b as i64 * (q + q0) + self.c as i64 * (q + 2 * q0) + self.d as i64 * (q + 2 * q0 + 1)
    }

    /// The unique cone monomial with the given pole order.
    pub fn from_pole_order(n: i64, p: &CurveParams) -> Self {
        let (q, q0) = (p.q as i64, p.q0 as i64);
        let d = n.rem_euclid(q0);
        let r = (n - d * (q + 2 * q0 + 1)) / q0;
        let bc = r.rem_euclid(2 * q0);
        let (b, c) = (bc % 2, bc / 2);
        let rest = n - b * (q + q0) - c * (q + 2 * q0) - d * (q + 2 * q0 + 1);
        debug_assert_eq!(rest.rem_euclid(q), 0);
        ConeMono::new(rest / q, b as u32, c as u32, d as u32)
    }

    pub fn is_reduced(self, p: &CurveParams) -> bool {
        self.b <= 1 && self.c < p.q0 && self.d < p.q0
    }

    /// Index of the `(b, c, d)` part among the `q` reduced cores.
    pub fn core_index(self, p: &CurveParams) -> usize {
        let q0 = p.q0 as usize;
        (self.b as usize * q0 + self.c as usize) * q0 + self.d as usize
    }

    pub fn from_core_index(a: i64, idx: usize, p: &CurveParams) -> Self {
        let q0 = p.q0 as usize;
        ConeMono::new(a, (idx / (q0 * q0)) as u32, ((idx / q0) % q0) as u32, (idx % q0) as u32)
    }

    /// Weight `w` with `tau^* (monomial) = zeta^w * monomial`, in `[0, q-2]`.
    pub fn tau_weight(self, p: &CurveParams) -> u32 {
        let q0 = p.q0 as i64;
        let w = self.a + (q0 + 1) * self.b as i64 + (2 * q0 + 1) * self.c as i64 + (2 * q0 + 2) * self.d as i64;
        w.rem_euclid(p.q as i64 - 1) as u32
    }
}

impl fmt::Debug for ConeMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Display for ConeMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![];
        if self.a != 0 {
            parts.push(if self.a == 1 { "y".to_string() } else { format!("y^{}", self.a) });
        }
        if self.b == 1 {
            parts.push("z".into());
        }
        for (name, e) in [("h1", self.c), ("h2", self.d)] {
            match e {
                0 => {}
                1 => parts.push(name.into()),
                e => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// `F_q`-linear combination of reduced cone monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConeFunc {
    terms: BTreeMap<ConeMono, FieldElem>,
}

impl ConeFunc {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: ConeMono, coeff: FieldElem) -> Self {
        let mut f = Self::zero();
        f.add_term(m, coeff);
        f
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

    pub fn terms(&self) -> impl Iterator<Item = (ConeMono, FieldElem)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    pub fn coeff(&self, m: ConeMono) -> FieldElem {
        self.terms.get(&m).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn add_term(&mut self, m: ConeMono, coeff: FieldElem) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
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

    pub fn add(&self, other: &ConeFunc) -> ConeFunc {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &ConeFunc) {
        for (&m, &v) in &other.terms {
            self.add_term(m, v);
        }
    }

    /// Adds `s * y^k * other` in place.
    pub fn add_scaled_shifted(&mut self, other: &ConeFunc, s: FieldElem, k: i64, f: &FieldParams) {
        if s.is_zero() {
            return;
        }
        for (&m, &v) in &other.terms {
            self.add_term(ConeMono { a: m.a + k, ..m }, f.mul(s, v));
        }
    }

    pub fn scale(&self, s: FieldElem, f: &FieldParams) -> ConeFunc {
        let mut out = ConeFunc::zero();
        out.add_scaled_shifted(self, s, 0, f);
        out
    }

    pub fn shift_y(&self, k: i64) -> ConeFunc {
        ConeFunc {
            terms: self.terms.iter().map(|(&m, &v)| (ConeMono { a: m.a + k, ..m }, v)).collect(),
        }
    }

    /// Largest pole order among the terms, i.e. `-v_{P_inf}`.
    pub fn pole_order(&self, p: &CurveParams) -> Option<i64> {
        self.terms.keys().map(|m| m.pole_order(p)).max()
    }

    /// Term with the largest pole order.
    pub fn leading_term(&self, p: &CurveParams) -> Option<(ConeMono, FieldElem)> {
        self.terms().max_by_key(|(m, _)| m.pole_order(p))
    }

    /// Splits into the terms satisfying `pred` and the rest.
    pub fn partition(&self, mut pred: impl FnMut(ConeMono) -> bool) -> (ConeFunc, ConeFunc) {
        let mut yes = ConeFunc::zero();
        let mut no = ConeFunc::zero();
        for (&m, &v) in &self.terms {
            if pred(m) {
                yes.terms.insert(m, v);
            } else {
                no.terms.insert(m, v);
            }
        }
        (yes, no)
    }

    /// JSON form: array of `[a, b, c, d, coeff_bitmask]`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }
}

impl fmt::Display for ConeFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, v)| if *v == FieldElem::ONE { m.to_string() } else { format!("[{v}]{m}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct ConeTerm(i64, u32, u32, u32, u32);

impl Serialize for ConeFunc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(m, v)| ConeTerm(m.a, m.b, m.c, m.d, v.0)))
    }
}

impl<'de> Deserialize<'de> for ConeFunc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms: Vec<ConeTerm> = Vec::deserialize(d)?;
        let mut f = ConeFunc::zero();
        for ConeTerm(a, b, c, dd, v) in terms {
            f.add_term(ConeMono::new(a, b, c, dd), FieldElem(v));
        }
        Ok(f)
    }
}
