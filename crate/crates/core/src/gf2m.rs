//! Arithmetic in the binary fields `F_{2^n}` for odd `n = 2m + 1`.
//!
//! Elements are plain bitmasks of their polynomial representative modulo a
//! primitive polynomial. There is no global field context: every operation
//! goes through an explicit [`FieldParams`], which also owns the log/antilog
//! tables used for multiplication and discrete logarithms.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// An element of `F_{2^n}`, stored as the coefficient bitmask of its
/// polynomial representative (degree `< n`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Parameters of `F_q`, `q = 2^n`, together with precomputed tables.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldParams {
    n: u32,
    modulus: u32,
    q: u32,
    /// `exp[i] = zeta^i` for `0 <= i < 2(q - 1)`.
    exp: Vec<u32>,
    /// `log[x]` for `x != 0`; `log[0]` is unused.
    log: Vec<u32>,
}

impl fmt::Debug for FieldParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldParams")
            .field("n", &self.n)
            .field("modulus", &format_args!("{:#b}", self.modulus))
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct FieldParamsRepr {
    n: u32,
    modulus_bitmask: u32,
}

impl Serialize for FieldParams {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FieldParamsRepr {
            n: self.n,
            modulus_bitmask: self.modulus,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldParams {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = FieldParamsRepr::deserialize(d)?;
        FieldParams::with_modulus(repr.n, repr.modulus_bitmask)
            .ok_or_else(|| serde::de::Error::custom("modulus is not a primitive polynomial"))
    }
}

/// Reduce-multiply two bitmask polynomials modulo `modulus` of degree `n`.
fn clmul_mod(mut a: u32, mut b: u32, modulus: u32, n: u32) -> u32 {
    let top = 1u32 << n;
    let mut acc = 0;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= modulus;
        }
    }
    acc
}

/// Multiplicative order of `x` modulo `modulus`, or `None` if `x` never
/// returns to 1 within `2^n - 1` steps (the modulus is then reducible).
fn order_of_x(modulus: u32, n: u32) -> Option<u32> {
    let q = 1u32 << n;
    let mut cur = 1u32;
    for k in 1..q {
        cur = clmul_mod(cur, 2, modulus, n);
        if cur == 1 {
            return Some(k);
        }
        if cur == 0 {
            return None;
        }
    }
    None
}

/// Lexicographically smallest primitive polynomial of degree `n` over `F_2`,
/// comparing coefficient bitmasks as integers.
pub fn smallest_primitive_modulus(n: u32) -> u32 {
    let q = 1u32 << n;
    (q + 1..2 * q)
        .step_by(2)
        .find(|&p| order_of_x(p, n) == Some(q - 1))
        .expect("a primitive polynomial exists in every degree")
}

/// Parameters for `F_{2^{2m+1}}` with the smallest primitive modulus; `zeta`
/// is the residue class of `x`.
pub fn make_field(m: u32) -> Result<FieldParams> {
    if !(1..=4).contains(&m) {
        return Err(Error::UnsupportedM(m, "1..=4"));
    }
    let n = 2 * m + 1;
    Ok(FieldParams::with_modulus(n, smallest_primitive_modulus(n)).expect("primitive by construction"))
}

impl FieldParams {
    /// Builds the tables for an explicit modulus. Returns `None` unless the
    /// modulus has degree `n` and is primitive.
    pub fn with_modulus(n: u32, modulus: u32) -> Option<FieldParams> {
        if n == 0 || n > 16 || modulus >> n != 1 {
            return None;
        }
        let q = 1u32 << n;
        if order_of_x(modulus, n) != Some(q - 1) {
            return None;
        }
        let ord = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * ord];
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for (i, slot) in exp.iter_mut().enumerate().take(ord) {
            *slot = cur;
            log[cur as usize] = i as u32;
            cur = clmul_mod(cur, 2, modulus, n);
        }
        for i in ord..2 * ord {
            exp[i] = exp[i - ord];
        }
        Some(FieldParams {
            n,
            modulus,
            q,
            exp,
            log,
        })
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// The distinguished generator of `F_q^x`.
    pub fn zeta(&self) -> FieldElem {
        FieldElem(self.exp[1])
    }

    /// Interprets a bitmask as an element, rejecting out-of-range values.
    pub fn elem(&self, bits: u32) -> Option<FieldElem> {
        (bits < self.q).then_some(FieldElem(bits))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(FieldElem)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(a.0 ^ b.0)
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElem(self.exp[s as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero(self.q));
        }
        let ord = self.q - 1;
        let l = self.log[a.0 as usize];
        Ok(FieldElem(self.exp[((ord - l) % ord) as usize]))
    }

    /// `zeta^k` for any integer `k`.
    pub fn zeta_pow(&self, k: i64) -> FieldElem {
        let ord = (self.q - 1) as i64;
        FieldElem(self.exp[k.rem_euclid(ord) as usize])
    }

    /// `a^e` for a signed exponent; `0^e` for `e <= 0` is treated as `1` only
    /// when `e == 0`, and panics otherwise.
    pub fn pow(&self, a: FieldElem, e: i64) -> FieldElem {
        if e == 0 {
            return FieldElem::ONE;
        }
        if a.is_zero() {
            assert!(e > 0, "negative power of zero");
            return FieldElem::ZERO;
        }
        let ord = (self.q - 1) as i64;
        let l = self.log[a.0 as usize] as i64;
        FieldElem(self.exp[(l * e.rem_euclid(ord)).rem_euclid(ord) as usize])
    }

    /// `a^(2^k)`; negative `k` applies the inverse Frobenius.
    pub fn pow2(&self, a: FieldElem, k: i64) -> FieldElem {
        if a.is_zero() {
            return a;
        }
        let n = self.n as i64;
        let k = k.rem_euclid(n) as u32;
        let ord = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        FieldElem(self.exp[((l << k) % ord) as usize])
    }

    #[inline]
    pub fn square(&self, a: FieldElem) -> FieldElem {
        self.mul(a, a)
    }

    /// The unique square root, `a^(q/2)`.
    pub fn sqrt(&self, a: FieldElem) -> FieldElem {
        self.pow2(a, self.n as i64 - 1)
    }

    /// Discrete logarithm to base `zeta`, in `[0, q - 2]`.
    pub fn dlog(&self, a: FieldElem) -> Result<u32> {
        if a.is_zero() {
            return Err(Error::DivisionByZero(self.q));
        }
        Ok(self.log[a.0 as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent primitivity check: `x^(q-1) = 1` and `x^((q-1)/r) != 1`
    /// for each prime `r | q - 1`, evaluated by repeated polynomial
    /// multiplication.
    fn is_primitive_slow(p: u32, n: u32) -> bool {
        let q = 1u64 << n;
        let ord = q - 1;
        let powmod = |e: u64| {
            let mut r = 1u32;
            for _ in 0..e {
                r = clmul_mod(r, 2, p, n);
            }
            r
        };
        if powmod(ord) != 1 {
            return false;
        }
        let mut primes = vec![];
        let mut k = ord;
        let mut d = 2;
        while d * d <= k {
            if k.is_multiple_of(d) {
                primes.push(d);
                while k.is_multiple_of(d) {
                    k /= d;
                }
            }
            d += 1;
        }
        if k > 1 {
            primes.push(k);
        }
        primes.iter().all(|r| powmod(ord / r) != 1)
    }

    #[test]
    fn field_sizes() {
        assert_eq!(make_field(1).unwrap().order(), 8);
        assert_eq!(make_field(2).unwrap().order(), 32);
        assert_eq!(make_field(1).unwrap().degree(), 3);
        assert!(make_field(0).is_err());
        assert!(make_field(5).is_err());
    }

    #[test]
    fn smallest_modulus_matches_scan() {
        for n in [3u32, 5, 7, 9] {
            let q = 1u32 << n;
            let expect = (q..2 * q).find(|&p| is_primitive_slow(p, n)).unwrap();
            assert_eq!(smallest_primitive_modulus(n), expect, "n = {n}");
        }
        assert_eq!(smallest_primitive_modulus(3), 0b1011);
    }

    #[test]
    fn zeta_cubed_in_f8() {
        let f = make_field(1).unwrap();
        let z = f.zeta();
        let z3 = f.mul(f.mul(z, z), z);
        // x^3 = x + 1 modulo x^3 + x + 1
        assert_eq!(z3, FieldElem(0b011));
        assert_eq!(f.mul(z, f.inv(z).unwrap()), FieldElem::ONE);
    }

    #[test]
    fn inverse_of_zero_fails() {
        let f = make_field(2).unwrap();
        assert!(f.inv(FieldElem::ZERO).is_err());
        assert!(f.dlog(FieldElem::ZERO).is_err());
    }

    #[test]
    fn sqrt_and_frobenius() {
        for m in 1..=4 {
            let f = make_field(m).unwrap();
            assert_eq!(f.sqrt(FieldElem::ONE), FieldElem::ONE);
            for x in f.elements() {
                assert_eq!(f.square(f.sqrt(x)), x);
                assert_eq!(f.sqrt(f.square(x)), x);
                assert_eq!(f.pow2(x, f.degree() as i64), x);
                assert_eq!(f.pow2(f.pow2(x, 2), -2), x);
                if !x.is_zero() {
                    assert_eq!(f.mul(x, f.inv(x).unwrap()), FieldElem::ONE);
                }
            }
        }
    }

    #[test]
    fn dlog_table() {
        let f = make_field(2).unwrap();
        assert_eq!(f.dlog(FieldElem::ONE).unwrap(), 0);
        assert_eq!(f.dlog(f.zeta()).unwrap(), 1);
        assert_eq!(f.dlog(f.zeta_pow(31)).unwrap(), 0);
        for x in f.elements().skip(1) {
            assert_eq!(f.zeta_pow(f.dlog(x).unwrap() as i64), x);
        }
    }

    #[test]
    fn zeta_has_full_order() {
        for m in 1..=4 {
            let f = make_field(m).unwrap();
            let ord = f.order() - 1;
            let mut x = FieldElem::ONE;
            for k in 1..=ord {
                x = f.mul(x, f.zeta());
                assert_eq!(x == FieldElem::ONE, k == ord);
            }
        }
    }

    #[test]
    fn serde_roundtrip() {
        let f = make_field(2).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"n":5,"modulus_bitmask":37}"#);
        let back: FieldParams = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert_eq!(serde_json::to_string(&FieldElem(6)).unwrap(), "6");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn frobenius_is_additive(m in 1u32..=4, a in 0u32..512, b in 0u32..512) {
                let f = make_field(m).unwrap();
                let (a, b) = (FieldElem(a % f.order()), FieldElem(b % f.order()));
                prop_assert_eq!(f.square(f.add(a, b)), f.add(f.square(a), f.square(b)));
            }

            #[test]
            fn mul_distributes(m in 1u32..=4, a in 0u32..512, b in 0u32..512, c in 0u32..512) {
                let f = make_field(m).unwrap();
                let q = f.order();
                let (a, b, c) = (FieldElem(a % q), FieldElem(b % q), FieldElem(c % q));
                prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                prop_assert_eq!(f.mul(a, FieldElem(clmul_mod(1, 1, f.modulus(), f.degree()))), a);
                prop_assert_eq!(f.mul(a, b), FieldElem(clmul_mod(a.0, b.0, f.modulus(), f.degree())));
            }
        }
    }
}
