//! Closed-form predictions that need no curve computation: the explicit
//! model of the `τ`-invariant part of the Dieudonné module, its generators
//! and relations, and the genus, a-number and point-count formulas.

use serde::Serialize;

use crate::dieudonne::{Decomposition, EModule, EoType, Word};
use crate::error::{Error, Result};
use crate::gf2m::{FieldElem, FieldParams};
use crate::linalg::{Matrix, SemilinearOp};

const MAX_M: u32 = 20;

fn check_m(m: u32) -> Result<u64> {
    if !(1..=MAX_M).contains(&m) {
        return Err(Error::UnsupportedM(m, "1..=20"));
    }
    Ok(1u64 << m)
}

/// The prime field `F_2`; the model has 0/1 entries.
fn prime_field() -> FieldParams {
    FieldParams::with_modulus(1, 0b11).expect("x + 1 is primitive over F_2")
}

/// The `2 q0`-dimensional module on `X_1..X_{q0}, Y_1..Y_{q0}` with
///
/// * `F(Y_j) = 0`,
/// * `V(Y_j) = Y_{2j}` for `j <= q0/2`, else `0`,
/// * `F(X_j) = X_{j/2}` for even `j`, `Y_{q0 - (j-1)/2}` for odd `j`,
/// * `V(X_j) = 0` for `j <= q0/2`, else `Y_{2 q0 - 2j + 1}`.
///
/// Coordinates: `X_j` is index `j - 1`, `Y_j` is index `q0 + j - 1`.
pub fn d_m0_action(m: u32) -> Result<EModule> {
    let c = check_m(m)? as usize;
    let (x, y) = (|j: usize| j - 1, |j: usize| c + j - 1);
    let mut f = Matrix::zeros(2 * c, 2 * c);
    let mut v = Matrix::zeros(2 * c, 2 * c);
    for j in 1..=c {
        if 2 * j <= c {
            v.set(y(2 * j), y(j), FieldElem::ONE);
        }
        let fx = if j % 2 == 0 { x(j / 2) } else { y(c - (j - 1) / 2) };
        f.set(fx, x(j), FieldElem::ONE);
        if 2 * j > c {
            v.set(y(2 * c - 2 * j + 1), x(j), FieldElem::ONE);
        }
    }
    EModule::new(prime_field(), SemilinearOp::new(f, 1), SemilinearOp::new(v, -1), None)
}

/// The auxiliary maps on a generator `j` of the model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorData {
    pub j: u64,
    /// odd part of `j`
    pub ell: u64,
    /// `j = 2^e ell`
    pub e: u32,
    pub s: u64,
    /// `2c - 2j + 1`
    pub m: u64,
    pub epsilon: u32,
    /// `2^epsilon m(j)`, the representative in the generator range
    pub t: u64,
    pub iota: u64,
}

/// Generators `X_j`, `⌈(c+1)/2⌉ <= j <= c`, and the bijection `ι` with
/// `t(ι(j)) = s(j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrivialEigenModel {
    pub c: u64,
    pub generators: Vec<GeneratorData>,
}

impl TrivialEigenModel {
    pub fn new(m: u32) -> Result<Self> {
        let c = check_m(m)?;
        let lo = (c + 2) / 2;
        let range = lo..=c;
        let mut gens: Vec<GeneratorData> = range
            .clone()
            .map(|j| {
                let e = j.trailing_zeros();
                let ell = j >> e;
                let mj = 2 * c - 2 * j + 1;
                let mut epsilon = 0;
                while !range.contains(&(mj << epsilon)) {
                    epsilon += 1;
                }
                GeneratorData {
                    j,
                    ell,
                    e,
                    s: c - (ell - 1) / 2,
                    m: mj,
                    epsilon,
                    t: mj << epsilon,
                    iota: 0,
                }
            })
            .collect();
        let by_t: std::collections::HashMap<u64, u64> = gens.iter().map(|g| (g.t, g.j)).collect();
        for g in &mut gens {
            g.iota = *by_t
                .get(&g.s)
                .ok_or_else(|| Error::Internal(format!("no generator with t = {}", g.s)))?;
        }
        Ok(TrivialEigenModel { c, generators: gens })
    }

    pub fn get(&self, j: u64) -> Option<&GeneratorData> {
        self.generators.iter().find(|g| g.j == j)
    }

    /// `F^{e(j)+1} X_j + V^{ε(ι(j))+1} X_{ι(j)}` as `(j, e(j)+1, ι(j),
    /// ε(ι(j))+1)`.
    pub fn relations(&self) -> Vec<(u64, u32, u64, u32)> {
        self.generators
            .iter()
            .map(|g| {
                let k = self.get(g.iota).expect("iota lands in the generators");
                (g.j, g.e + 1, g.iota, k.epsilon + 1)
            })
            .collect()
    }

    /// Words of the presented module: each cycle of `ι` chains the relations
    /// `V^{ε(k)+1} X_k = F^{e(j)+1} X_j`, `k = ι(j)`.
    pub fn words(&self) -> Vec<(Word, usize)> {
        let mut seen = std::collections::BTreeSet::new();
        let mut counts: std::collections::BTreeMap<Word, usize> = Default::default();
        let inv: std::collections::HashMap<u64, u64> = self.generators.iter().map(|g| (g.iota, g.j)).collect();
        for g in &self.generators {
            if seen.contains(&g.j) {
                continue;
            }
            let mut rel = Vec::new();
            let mut k = g.j;
            while seen.insert(k) {
                let next = inv[&k];
                let eps = self.get(k).expect("generator").epsilon;
                let e = self.get(next).expect("generator").e;
                rel.push(((eps + 1) as usize, (e + 1) as usize));
                k = next;
            }
            let (w, power) = Word::from_relations(&rel);
            *counts.entry(w).or_insert(0) += power;
        }
        counts.into_iter().collect()
    }
}

/// The generator carrying `(F^{e+1} + V^{e+1}) X_j = 0`, when
/// `2^m ≡ 2^e mod 2^{e+1} + 1`.
pub fn w0_occurrence(m: u32, e: u32) -> Option<u64> {
    if m > 60 || e > 60 {
        return None;
    }
    let q0 = 1u128 << m;
    let modulus = (1u128 << (e + 1)) + 1;
    if q0 % modulus != (1u128 << e) % modulus {
        return None;
    }
    let j = ((1u128 << (e + 1)) * q0 + (1u128 << e)) / modulus;
    u64::try_from(j).ok()
}

/// Scans the relations of the model for `F^{e+1} X_j + V^{e+1} X_j`.
pub fn w0_scan(m: u32, e: u32) -> Result<Option<u64>> {
    let model = TrivialEigenModel::new(m)?;
    Ok(model
        .relations()
        .into_iter()
        .find(|&(j, a, k, b)| j == k && a == e + 1 && b == e + 1)
        .map(|r| r.0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub m: u32,
    pub genus: u64,
    pub a_number: u64,
    pub eo_trivial: EoType,
    pub trivial_a_number: u64,
    pub point_count: u64,
}

pub fn expected(m: u32) -> Result<Expected> {
    let q0 = check_m(m)?;
    let q = 2 * q0 * q0;
    Ok(Expected {
        m,
        genus: q0 * (q - 1),
        a_number: q0 * (q0 + 1) * (2 * q0 + 1) / 6,
        eo_trivial: eo_trivial(q0 as usize),
        trivial_a_number: q0 / 2,
        point_count: q * q + 1,
    })
}

/// `[0,1,1,2,2,...]` of length `q0`, i.e. `ν_i = ⌊i/2⌋`.
pub fn eo_trivial(q0: usize) -> EoType {
    EoType((1..=q0).map(|i| i / 2).collect())
}

/// Decomposition predicted by the generators and relations.
pub fn predicted_trivial_decomposition(m: u32) -> Result<Vec<(Word, usize)>> {
    let mut w = TrivialEigenModel::new(m)?.words();
    w.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    Ok(w)
}

/// Compares a decomposition of the `τ`-invariant part with the prediction.
pub fn matches_trivial_prediction(m: u32, d: &Decomposition) -> Result<bool> {
    Ok(d.multiset() == predicted_trivial_decomposition(m)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_examples() {
        let m = d_m0_action(1).unwrap();
        let x2 = crate::dieudonne::unit_vector(4, 1);
        // V X_2 = Y_1, F X_2 = X_1
        assert_eq!(m.v.apply(&x2, &m.field), crate::dieudonne::unit_vector(4, 2));
        assert_eq!(m.f.apply(&x2, &m.field), crate::dieudonne::unit_vector(4, 0));
        for m in 1..=4 {
            let d = d_m0_action(m).unwrap();
            let c = 1usize << m;
            for j in 0..c {
                let yj = crate::dieudonne::unit_vector(2 * c, c + j);
                assert!(d.f.apply(&yj, &d.field).iter().all(|x| x.is_zero()));
            }
            d.check_relations().unwrap();
            assert!(d.is_bt1());
        }
    }

    #[test]
    fn model_maps_are_bijections() {
        for m in 1..=10 {
            let t = TrivialEigenModel::new(m).unwrap();
            let c = t.c;
            let js: Vec<u64> = t.generators.iter().map(|g| g.j).collect();
            assert_eq!(js, ((c / 2 + 1)..=c).collect::<Vec<_>>());
            for key in [|g: &GeneratorData| g.s, |g: &GeneratorData| g.t, |g: &GeneratorData| g.iota] {
                let mut v: Vec<u64> = t.generators.iter().map(key).collect();
                v.sort();
                assert_eq!(v, js);
            }
            for g in &t.generators {
                assert_eq!(t.get(g.iota).unwrap().t, g.s);
                assert_eq!(g.ell << g.e, g.j);
                assert_eq!(g.ell % 2, 1);
            }
        }
    }

    #[test]
    fn iota_examples() {
        let t = TrivialEigenModel::new(1).unwrap();
        assert_eq!(t.relations(), [(2, 2, 2, 2)]);
        assert_eq!(t.words(), [(Word::easy(2), 1)]);
        let t = TrivialEigenModel::new(2).unwrap();
        assert!(t.generators.iter().all(|g| g.iota == g.j));
        assert_eq!(t.relations(), [(3, 1, 3, 1), (4, 3, 4, 3)]);
    }

    #[test]
    fn w0_examples() {
        for m in 1..=10 {
            assert_eq!(w0_occurrence(m, m), Some(1 << m));
        }
        assert_eq!(w0_occurrence(2, 0), Some(3));
        assert_eq!(w0_occurrence(4, 0), Some(11));
        assert_eq!(w0_occurrence(1, 0), None);
        assert_eq!(w0_occurrence(1, 1), Some(2));
        // m = 1 mod 4 gives the E/E(F^2+V^2) summand
        assert_eq!(w0_occurrence(5, 1), Some((4 * 32 + 2) / 5));
        assert_eq!(w0_occurrence(3, 1), None);
    }

    #[test]
    fn congruence_matches_scan() {
        for m in 1..=10 {
            for e in 0..=m {
                assert_eq!(w0_occurrence(m, e), w0_scan(m, e).unwrap(), "m={m} e={e}");
            }
        }
    }

    #[test]
    fn expected_values() {
        let e = expected(1).unwrap();
        assert_eq!((e.genus, e.a_number, e.point_count), (14, 5, 65));
        assert_eq!(e.eo_trivial, EoType(vec![0, 1]));
        let e = expected(2).unwrap();
        assert_eq!((e.genus, e.a_number, e.point_count), (124, 30, 1025));
        assert_eq!(e.eo_trivial, EoType(vec![0, 1, 1, 2]));
        let e = expected(3).unwrap();
        assert_eq!((e.genus, e.a_number, e.point_count), (1016, 204, 16385));
        assert_eq!(e.eo_trivial, EoType(vec![0, 1, 1, 2, 2, 3, 3, 4]));
        assert!(expected(0).is_err());
    }

    #[test]
    fn model_agrees_with_prediction() {
        for m in 1..=6 {
            let d = d_m0_action(m).unwrap();
            let q0 = 1usize << m;
            assert_eq!(d.eo_type().unwrap(), eo_trivial(q0), "m={m}");
            assert_eq!(d.a_number(), q0 / 2);
            let dec = d.decompose().unwrap();
            assert!(matches_trivial_prediction(m, &dec).unwrap(), "m={m}: {dec}");
        }
    }
}
