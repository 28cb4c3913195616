//! The function field of the Suzuki curve `z^q + z = y^q0 (y^q + y)`.
//!
//! Two coordinate systems are kept side by side. [`RawFunc`] uses the
//! monomials `y^i z^j` (`j < q`); [`ConeFunc`] uses the cone monomials
//! `y^a z^b h1^c h2^d`. Both are bases of the Laurent-polynomial ring
//! `F_q[y, 1/y, z]` of functions regular away from `P_inf` and the fiber
//! over `y = 0`. Conversions are linear over `F_q[y, 1/y]`, so they reduce to
//! `q` precomputed images in each direction.
//!
//! The cone side is closed under multiplication by the rewriting rules
//!
//! ```text
//! z^2     = y h1 + h2
//! h1^q0   = z + y^(q0+1)
//! h2^q0   = h1 + y^q0 z
//! ```
//!
//! which follow from the curve equation and the definitions
//! `h1 = z^(2q0) + y^(2q0+1)`, `h2 = y z^(2q0) + h1^(2q0)`. Each rule lowers
//! `b(q+q0) + c(q+2q0) + d(q+2q0+1)`, so normalization terminates.

mod cone;
mod raw;
mod series;

pub use cone::{ConeFunc, ConeMono};
pub use raw::RawFunc;
pub use series::LocalSeries;

use serde::Serialize;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gf2m::{make_field, FieldElem, FieldParams};

/// Size parameters of the `m`-th Suzuki curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveParams {
    pub m: u32,
    pub q0: u32,
    pub q: u32,
    pub genus: u32,
    pub field: FieldParams,
}

impl CurveParams {
    pub fn new(m: u32) -> Result<Self> {
        let field = make_field(m)?;
        let q0 = 1u32 << m;
        let q = field.order();
        Ok(CurveParams {
            m,
            q0,
            q,
            genus: q0 * (q - 1),
            field,
        })
    }

    /// `2g - 2`, the pole order of the canonical divisor `div(dy)` at `P_inf`.
    pub fn canonical_degree(&self) -> i64 {
        2 * self.genus as i64 - 2
    }
}

/// Pole orders and coefficients of a function at `P_inf`, read from its cone
/// expansion, listed from the most negative valuation upwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleExpansion {
    pub terms: Vec<(i64, ConeMono, FieldElem)>,
}

impl PoleExpansion {
    /// `v_{P_inf}`; `None` for the zero function.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.first().map(|t| -t.0)
    }

    pub fn leading_coeff(&self) -> Option<FieldElem> {
        self.terms.first().map(|t| t.2)
    }
}

/// A Suzuki curve with its conversion tables.
pub struct Curve {
    pub params: CurveParams,
    /// Normal forms of `z^b h1^c h2^d` for `b <= 2`, `c, d <= 2q0 - 1`.
    products: Vec<ConeFunc>,
    /// Raw images of the `q` reduced cores `z^b h1^c h2^d`.
    raw_cores: Vec<RawFunc>,
    /// Cone images of `z^j`, `0 <= j < q`.
    cone_zpow: Vec<ConeFunc>,
}

impl std::fmt::Debug for Curve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Curve").field("params", &self.params).finish()
    }
}

fn normal_form(
    memo: &mut HashMap<(u32, u32, u32), ConeFunc>,
    b: u32,
    c: u32,
    d: u32,
    p: &CurveParams,
) -> ConeFunc {
    if let Some(f) = memo.get(&(b, c, d)) {
        return f.clone();
    }
    let q0 = p.q0;
    let f = &p.field;
    let mut out = ConeFunc::zero();
    if b >= 2 {
        out.add_scaled_shifted(&normal_form(memo, b - 2, c + 1, d, p), FieldElem::ONE, 1, f);
        out.add_scaled_shifted(&normal_form(memo, b - 2, c, d + 1, p), FieldElem::ONE, 0, f);
    } else if c >= q0 {
        out.add_scaled_shifted(&normal_form(memo, b + 1, c - q0, d, p), FieldElem::ONE, 0, f);
        out.add_scaled_shifted(&normal_form(memo, b, c - q0, d, p), FieldElem::ONE, q0 as i64 + 1, f);
    } else if d >= q0 {
        out.add_scaled_shifted(&normal_form(memo, b, c + 1, d - q0, p), FieldElem::ONE, 0, f);
        out.add_scaled_shifted(&normal_form(memo, b + 1, c, d - q0, p), FieldElem::ONE, q0 as i64, f);
    } else {
        out.add_term(ConeMono::new(0, b, c, d), FieldElem::ONE);
    }
    memo.insert((b, c, d), out.clone());
    out
}

impl Curve {
    /// Builds the curve and its tables. Supported for `1 <= m <= 3`.
    pub fn new(m: u32) -> Result<Self> {
        if !(1..=3).contains(&m) {
            return Err(Error::UnsupportedM(m, "1..=3"));
        }
        let params = CurveParams::new(m)?;
        let q0 = params.q0;
        let span = 2 * q0;

        let mut memo = HashMap::new();
        let mut products = Vec::with_capacity((3 * span * span) as usize);
        for b in 0..3 {
            for c in 0..span {
                for d in 0..span {
                    products.push(normal_form(&mut memo, b, c, d, &params));
                }
            }
        }

        let h1 = Self::h1_of(&params);
        let h2 = Self::h2_of(&params, &h1);
        let mut h1_pows = vec![RawFunc::one()];
        let mut h2_pows = vec![RawFunc::one()];
        for k in 1..q0 as usize {
            h1_pows.push(h1_pows[k - 1].mul(&h1, &params));
            h2_pows.push(h2_pows[k - 1].mul(&h2, &params));
        }
        let mut raw_cores = Vec::with_capacity(params.q as usize);
        for idx in 0..params.q as usize {
            let m = ConeMono::from_core_index(0, idx, &params);
            let zb = if m.b == 1 { RawFunc::z() } else { RawFunc::one() };
            raw_cores.push(zb.mul(&h1_pows[m.c as usize], &params).mul(&h2_pows[m.d as usize], &params));
        }

        let mut curve = Curve {
            params,
            products,
            raw_cores,
            cone_zpow: vec![],
        };
        let z = ConeFunc::monomial(ConeMono::new(0, 1, 0, 0), FieldElem::ONE);
        let mut cur = ConeFunc::monomial(ConeMono::new(0, 0, 0, 0), FieldElem::ONE);
        let mut zpow = Vec::with_capacity(curve.params.q as usize);
        for _ in 0..curve.params.q {
            zpow.push(cur.clone());
            cur = curve.cone_mul(&cur, &z);
        }
        curve.cone_zpow = zpow;
        Ok(curve)
    }

    pub fn params(&self) -> &CurveParams {
        &self.params
    }

    pub fn field(&self) -> &FieldParams {
        &self.params.field
    }

    fn h1_of(p: &CurveParams) -> RawFunc {
        let mut h = RawFunc::zero();
        h.add_unreduced(0, 2 * p.q0 as u64, FieldElem::ONE, p);
        h.add_unreduced(2 * p.q0 as i64 + 1, 0, FieldElem::ONE, p);
        h
    }

    fn h2_of(p: &CurveParams, h1: &RawFunc) -> RawFunc {
        let mut h = h1.pow(2 * p.q0, p);
        h.add_unreduced(1, 2 * p.q0 as u64, FieldElem::ONE, p);
        h
    }

    /// `h1 = z^(2q0) + y^(2q0+1)`.
    pub fn h1(&self) -> RawFunc {
        Self::h1_of(&self.params)
    }

    /// `h2 = y z^(2q0) + h1^(2q0)`, reduced to `z`-degree `< q`.
    pub fn h2(&self) -> RawFunc {
        Self::h2_of(&self.params, &self.h1())
    }

    fn product_index(&self, b: u32, c: u32, d: u32) -> usize {
        let span = 2 * self.params.q0;
        ((b * span + c) * span + d) as usize
    }

    pub fn cone_mul(&self, f: &ConeFunc, g: &ConeFunc) -> ConeFunc {
        let fp = &self.params.field;
        let mut out = ConeFunc::zero();
        for (m1, v1) in f.terms() {
            for (m2, v2) in g.terms() {
                let nf = &self.products[self.product_index(m1.b + m2.b, m1.c + m2.c, m1.d + m2.d)];
                out.add_scaled_shifted(nf, fp.mul(v1, v2), m1.a + m2.a, fp);
            }
        }
        out
    }

    pub fn cone_pow(&self, f: &ConeFunc, mut e: u32) -> ConeFunc {
        let mut acc = ConeFunc::monomial(ConeMono::new(0, 0, 0, 0), FieldElem::ONE);
        let mut base = f.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.cone_mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.cone_mul(&base, &base);
            }
        }
        acc
    }

    /// Normal form of `y^a z^b h1^c h2^d` for arbitrary nonnegative `b, c, d`.
    pub fn cone_monomial(&self, a: i64, b: u32, c: u32, d: u32) -> ConeFunc {
        let one = FieldElem::ONE;
        let gen = |m: ConeMono| ConeFunc::monomial(m, one);
        let f = self.cone_pow(&gen(ConeMono::new(0, 1, 0, 0)), b);
        let f = self.cone_mul(&f, &self.cone_pow(&gen(ConeMono::new(0, 0, 1, 0)), c));
        let f = self.cone_mul(&f, &self.cone_pow(&gen(ConeMono::new(0, 0, 0, 1)), d));
        f.shift_y(a)
    }

    pub fn to_cone(&self, f: &RawFunc) -> ConeFunc {
        let fp = &self.params.field;
        let mut out = ConeFunc::zero();
        for ((i, j), v) in f.terms() {
            out.add_scaled_shifted(&self.cone_zpow[j as usize], v, i, fp);
        }
        out
    }

    pub fn to_raw(&self, g: &ConeFunc) -> RawFunc {
        let fp = &self.params.field;
        let mut out = RawFunc::zero();
        for (m, v) in g.terms() {
            debug_assert!(m.is_reduced(&self.params));
            for ((i, j), w) in self.raw_cores[m.core_index(&self.params)].terms() {
                out.add_term(i + m.a, j, fp.mul(v, w));
            }
        }
        out
    }

    /// Cone expansion ordered by pole order, the most polar term first.
    pub fn expand_at_infinity(&self, f: &RawFunc) -> PoleExpansion {
        self.pole_expansion(&self.to_cone(f))
    }

    pub fn pole_expansion(&self, g: &ConeFunc) -> PoleExpansion {
        let mut terms: Vec<_> = g.terms().map(|(m, v)| (m.pole_order(&self.params), m, v)).collect();
        terms.sort_by_key(|x| std::cmp::Reverse(x.0));
        PoleExpansion { terms }
    }

    /// `v_{P_inf}(f)`; `None` for the zero function.
    pub fn valuation_at_infinity(&self, f: &RawFunc) -> Option<i64> {
        self.to_cone(f).pole_order(&self.params).map(|n| -n)
    }

    /// `d/dy` in cone coordinates, using `dh1 = y^(2q0) dy` and
    /// `dh2 = z^(2q0) dy = (h1 + y^(2q0+1)) dy`.
    pub fn cone_derivative(&self, g: &ConeFunc) -> ConeFunc {
        let fp = &self.params.field;
        let q0 = self.params.q0 as i64;
        let mut out = ConeFunc::zero();
        let push = |a: i64, b: u32, c: u32, d: u32, v: FieldElem, out: &mut ConeFunc| {
            let nf = &self.products[self.product_index(b, c, d)];
            out.add_scaled_shifted(nf, v, a, fp);
        };
        for (m, v) in g.terms() {
            if m.a.rem_euclid(2) == 1 {
                push(m.a - 1, m.b, m.c, m.d, v, &mut out);
            }
            if m.b == 1 {
                push(m.a + q0, 0, m.c, m.d, v, &mut out);
            }
            if m.c % 2 == 1 {
                push(m.a + 2 * q0, m.b, m.c - 1, m.d, v, &mut out);
            }
            if m.d % 2 == 1 {
                push(m.a, m.b, m.c + 1, m.d - 1, v, &mut out);
                push(m.a + 2 * q0 + 1, m.b, m.c, m.d - 1, v, &mut out);
            }
        }
        out
    }

    /// Pull-back by `tau`, acting on each cone monomial by `zeta^weight`.
    pub fn cone_tau(&self, g: &ConeFunc) -> ConeFunc {
        let fp = &self.params.field;
        let mut out = ConeFunc::zero();
        for (m, v) in g.terms() {
            out.add_term(m, fp.mul(v, fp.zeta_pow(m.tau_weight(&self.params) as i64)));
        }
        out
    }

    /// Number of `F_q`-rational points, by enumerating the affine plane and
    /// adding `P_inf`.
    pub fn count_points(&self) -> u64 {
        let f = &self.params.field;
        let mut n = 1u64;
        for y in f.elements() {
            for z in f.elements() {
                if self.on_curve(y, z) {
                    n += 1;
                }
            }
        }
        n
    }
}

#[cfg(test)]
mod tests;
