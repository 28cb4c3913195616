//! Truncated power series at affine points.
//!
//! At an affine point `(y0, z0)` the partial derivative of `z^q + z` in `z`
//! is 1, so `t = y - y0` is a local parameter and `z` is recovered by the
//! contracting iteration `z <- R(y) + z^q`, `R(y) = y^(q+q0) + y^(q0+1)`.

use super::{Curve, RawFunc};
use crate::error::{Error, Result};
use crate::gf2m::{FieldElem, FieldParams};

/// Laurent series `sum_k coeffs[k] t^(start + k)`, known for exponents
/// strictly below `precision`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSeries {
    pub point: (FieldElem, FieldElem),
    pub start: i64,
    pub coeffs: Vec<FieldElem>,
    pub precision: i64,
}

impl LocalSeries {
    /// Exponent of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|k| self.start + k as i64)
    }

    pub fn leading_coeff(&self) -> Option<FieldElem> {
        self.coeffs.iter().copied().find(|c| !c.is_zero())
    }

    pub fn coeff(&self, e: i64) -> FieldElem {
        if e < self.start {
            return FieldElem::ZERO;
        }
        self.coeffs.get((e - self.start) as usize).copied().unwrap_or(FieldElem::ZERO)
    }
}

/// Power series truncated to `n` coefficients.
type Ps = Vec<FieldElem>;

fn ps_mul(a: &Ps, b: &Ps, n: usize, f: &FieldParams) -> Ps {
    let mut out = vec![FieldElem::ZERO; n];
    for (i, &x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

fn ps_pow(base: &Ps, mut e: u64, n: usize, f: &FieldParams) -> Ps {
    let mut acc = vec![FieldElem::ZERO; n];
    acc[0] = FieldElem::ONE;
    let mut b = base.clone();
    b.resize(n, FieldElem::ZERO);
    while e > 0 {
        if e & 1 == 1 {
            acc = ps_mul(&acc, &b, n, f);
        }
        e >>= 1;
        if e > 0 {
            b = ps_mul(&b, &b, n, f);
        }
    }
    acc
}

/// Inverse of a unit power series.
fn ps_inv(a: &Ps, n: usize, f: &FieldParams) -> Result<Ps> {
    let a0 = f.inv(a[0])?;
    let mut out = vec![FieldElem::ZERO; n];
    out[0] = a0;
    for k in 1..n {
        let mut s = FieldElem::ZERO;
        for j in 1..=k.min(a.len() - 1) {
            s = f.add(s, f.mul(a[j], out[k - j]));
        }
        out[k] = f.mul(s, a0);
    }
    Ok(out)
}

impl Curve {
    /// Whether `(y0, z0)` satisfies the affine equation.
    pub fn on_curve(&self, y0: FieldElem, z0: FieldElem) -> bool {
        let f = &self.params.field;
        let (q, q0) = (self.params.q as i64, self.params.q0 as i64);
        let lhs = f.add(f.pow(z0, q), z0);
        let rhs = f.add(f.pow(y0, q + q0), f.pow(y0, q0 + 1));
        lhs == rhs
    }

    /// Series of `y` and `z` at `(y0, z0)` in `t = y - y0`, to `n` terms.
    fn coordinate_series(&self, y0: FieldElem, z0: FieldElem, n: usize) -> (Ps, Ps) {
        let f = &self.params.field;
        let (q, q0) = (self.params.q as u64, self.params.q0 as u64);
        let mut y: Ps = vec![FieldElem::ZERO; n.max(2)];
        y[0] = y0;
        y[1] = FieldElem::ONE;
        y.truncate(n);
        let r: Ps = ps_pow(&y, q + q0, n, f)
            .iter()
            .zip(ps_pow(&y, q0 + 1, n, f))
            .map(|(&a, b)| f.add(a, b))
            .collect();
        let mut z = vec![FieldElem::ZERO; n];
        z[0] = z0;
        loop {
            // z^q: coefficients raised to q = identity on F_q, exponents scaled by q
            let mut next = r.clone();
            for (k, &c) in z.iter().enumerate() {
                let e = k * q as usize;
                if e >= n {
                    break;
                }
                next[e] = f.add(next[e], c);
            }
            if next == z {
                break;
            }
            z = next;
        }
        (y, z)
    }

    /// Expansion of `f` at the affine point `(y0, z0)` in `t = y - y0`,
    /// correct for exponents below `order`.
    pub fn expand_at_point(&self, g: &RawFunc, y0: FieldElem, z0: FieldElem, order: i64) -> Result<LocalSeries> {
        if !self.on_curve(y0, z0) {
            return Err(Error::NotOnCurve { y: y0.0, z: z0.0 });
        }
        let f = &self.params.field;
        let min_i = g.min_y_exponent().unwrap_or(0).min(0);
        // with y0 = 0, y^i = t^i and negative powers lower the start
        let start = if y0.is_zero() { min_i } else { 0 };
        let n = (order - start).max(1) as usize;
        let (y, z) = self.coordinate_series(y0, z0, n);
        let y_inv = if y0.is_zero() { None } else { Some(ps_inv(&y, n, f)?) };

        let max_j = g.max_z_exponent().unwrap_or(0) as usize;
        let mut zpow = Vec::with_capacity(max_j + 1);
        let mut cur = vec![FieldElem::ZERO; n];
        cur[0] = FieldElem::ONE;
        for _ in 0..=max_j {
            zpow.push(cur.clone());
            cur = ps_mul(&cur, &z, n, f);
        }

        let mut acc = vec![FieldElem::ZERO; n];
        for ((i, j), c) in g.terms() {
            let term = if y0.is_zero() {
                // t^i * z^j, placed at offset i - start
                let off = ((i - start) as usize).min(n);
                let mut t = vec![FieldElem::ZERO; n];
                let len = n - off;
                t[off..off + len].copy_from_slice(&zpow[j as usize][..len]);
                t
            } else {
                let ypow = if i >= 0 {
                    ps_pow(&y, i as u64, n, f)
                } else {
                    ps_pow(y_inv.as_ref().expect("y0 != 0"), (-i) as u64, n, f)
                };
                ps_mul(&ypow, &zpow[j as usize], n, f)
            };
            for (a, b) in acc.iter_mut().zip(term) {
                *a = f.add(*a, f.mul(c, b));
            }
        }
        if !g.is_zero() && acc.iter().all(|c| c.is_zero()) {
            return Err(Error::IncreaseOrder(order.max(0) as usize));
        }
        Ok(LocalSeries {
            point: (y0, z0),
            start,
            coeffs: acc,
            precision: order,
        })
    }

    /// Expansion at the point `(0, z0)` over `y = 0`; `y` itself is the local
    /// parameter there.
    pub fn expand_at_origin_fiber(&self, g: &RawFunc, z0: FieldElem, order: i64) -> Result<LocalSeries> {
        self.expand_at_point(g, FieldElem::ZERO, z0, order)
    }

    /// Valuation at an affine point, retrying with doubled truncation order
    /// until the leading term is visible. `None` for the zero function.
    pub fn valuation_at_point(&self, g: &RawFunc, y0: FieldElem, z0: FieldElem) -> Result<Option<i64>> {
        self.valuation_at_point_with_order(g, y0, z0, 2 * self.params.q as i64)
    }

    pub fn valuation_at_point_with_order(
        &self,
        g: &RawFunc,
        y0: FieldElem,
        z0: FieldElem,
        mut order: i64,
    ) -> Result<Option<i64>> {
        if g.is_zero() {
            return Ok(None);
        }
        // retry cap
        let cap = 1 << 16;
        loop {
            match self.expand_at_point(g, y0, z0, order) {
                Ok(s) => return Ok(s.valuation()),
                Err(Error::IncreaseOrder(_)) if order < cap => order *= 2,
                Err(e) => return Err(e),
            }
        }
    }
}
