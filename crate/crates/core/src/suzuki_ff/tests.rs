use super::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

fn curve(m: u32) -> Curve {
    Curve::new(m).unwrap()
}

fn raw(terms: &[(i64, u32)]) -> RawFunc {
    let mut f = RawFunc::zero();
    for &(i, j) in terms {
        f.add_term(i, j, FieldElem::ONE);
    }
    f
}

/// Multiplies two polynomials in `z` over `F_2[y, 1/y]` without any
/// reduction, then reduces by repeatedly cancelling the top `z`-degree with
/// `z^q + z + y^(q+q0) + y^(q0+1)`.
fn oracle_reduce(mut poly: BTreeMap<(u64, i64), bool>, p: &CurveParams) -> RawFunc {
    let q = p.q as u64;
    loop {
        let top = poly.iter().filter(|(_, &v)| v).map(|(k, _)| k.0).max();
        match top {
            Some(j) if j >= q => {
                let ys: Vec<i64> = poly.iter().filter(|(k, &v)| v && k.0 == j).map(|(k, _)| k.1).collect();
                for i in ys {
                    // z^j y^i = z^(j-q) y^i (z + y^(q+q0) + y^(q0+1))
                    *poly.entry((j, i)).or_insert(false) ^= true;
                    *poly.entry((j - q + 1, i)).or_insert(false) ^= true;
                    *poly.entry((j - q, i + (p.q + p.q0) as i64)).or_insert(false) ^= true;
                    *poly.entry((j - q, i + (p.q0 + 1) as i64)).or_insert(false) ^= true;
                }
            }
            _ => break,
        }
    }
    let mut f = RawFunc::zero();
    for ((j, i), v) in poly {
        if v {
            f.add_term(i, j as u32, FieldElem::ONE);
        }
    }
    f
}

fn unreduced_product(a: &[(i64, u64)], b: &[(i64, u64)]) -> BTreeMap<(u64, i64), bool> {
    let mut out = BTreeMap::new();
    for &(i1, j1) in a {
        for &(i2, j2) in b {
            *out.entry((j1 + j2, i1 + i2)).or_insert(false) ^= true;
        }
    }
    out
}

#[test]
fn h1_h2_for_m1() {
    let c = curve(1);
    assert_eq!(c.h1(), raw(&[(0, 4), (5, 0)]));
    // h2 = z^4 y + h1^4 with h1^4 = z^16 + y^20, reduced independently
    let mut poly = unreduced_product(&[(0, 16), (20, 0)], &[(0, 0)]);
    *poly.entry((4, 1)).or_insert(false) ^= true;
    assert_eq!(c.h2(), oracle_reduce(poly, &c.params));
    // h1^2 = z + y^3
    assert_eq!(c.h1().mul(&c.h1(), &c.params), raw(&[(0, 1), (3, 0)]));
}

#[test]
fn h2_closed_form() {
    // h2 = y h1 + z^2 follows from h1^(2q0) = z^2 + y^(2q0+2)
    for m in 1..=3 {
        let c = curve(m);
        let expect = c.h1().shift_y(1).add(&raw(&[(0, 2)]));
        assert_eq!(c.h2(), expect, "m = {m}");
    }
}

#[test]
fn derivatives_m1() {
    let c = curve(1);
    assert_eq!(c.h1().derivative(&c.params), raw(&[(4, 0)]));
    assert_eq!(c.h2().derivative(&c.params), raw(&[(0, 4)]));
}

#[test]
fn valuations_at_infinity() {
    for m in 1..=3 {
        let c = curve(m);
        let (q, q0) = (c.params.q as i64, c.params.q0 as i64);
        assert_eq!(c.valuation_at_infinity(&RawFunc::y()), Some(-q));
        assert_eq!(c.valuation_at_infinity(&RawFunc::z()), Some(-(q + q0)));
        assert_eq!(c.valuation_at_infinity(&c.h1()), Some(-(q + 2 * q0)));
        assert_eq!(c.valuation_at_infinity(&c.h2()), Some(-(q + 2 * q0 + 1)));
        assert_eq!(c.valuation_at_infinity(&RawFunc::zero()), None);
        assert_eq!(c.expand_at_infinity(&c.h2()).leading_coeff(), Some(FieldElem::ONE));
    }
}

#[test]
fn valuations_on_origin_fiber() {
    for m in 1..=2 {
        let c = curve(m);
        let q0 = c.params.q0 as i64;
        let o = FieldElem::ZERO;
        let v = |f: &RawFunc, z0| c.valuation_at_point(f, o, z0).unwrap().unwrap();
        assert_eq!(v(&RawFunc::z(), o), q0 + 1);
        assert_eq!(v(&c.h1(), o), 2 * q0 + 1);
        assert_eq!(v(&c.h2(), o), c.params.q as i64 + 2 * q0 + 1);
        for z0 in c.field().elements() {
            assert_eq!(v(&RawFunc::y(), z0), 1);
        }
    }
}

#[test]
fn series_satisfies_curve_equation() {
    let c = curve(1);
    let f = c.field();
    for z0 in f.elements() {
        let sz = c.expand_at_origin_fiber(&RawFunc::z(), z0, 40).unwrap();
        // z^q + z - y^(q+q0) - y^(q0+1) vanishes through the truncation order
        let mut lhs = [FieldElem::ZERO; 40];
        for (k, cf) in sz.coeffs.iter().enumerate() {
            if k * 8 < 40 {
                lhs[k * 8] = f.add(lhs[k * 8], *cf);
            }
            lhs[k] = f.add(lhs[k], *cf);
        }
        lhs[10] = f.add(lhs[10], FieldElem::ONE);
        lhs[3] = f.add(lhs[3], FieldElem::ONE);
        assert!(lhs.iter().all(|x| x.is_zero()), "z0 = {z0}");
    }
    // both sides vanish identically on F_q x F_q
    assert!(f.elements().all(|y| f.elements().all(|z| c.on_curve(y, z))));
}

#[test]
fn truncation_too_small_is_reported() {
    let c = curve(1);
    let o = FieldElem::ZERO;
    // h2 vanishes to order 13 at the origin
    let err = c.expand_at_origin_fiber(&c.h2(), o, 5).unwrap_err();
    assert!(matches!(err, Error::IncreaseOrder(5)));
    assert_eq!(c.valuation_at_point_with_order(&c.h2(), o, o, 2).unwrap(), Some(13));
}

/// Sum of the orders of the zeros of `f` over all affine `F_q`-points.
fn affine_zero_orders(c: &Curve, f: &RawFunc) -> BTreeMap<(u32, u32), i64> {
    let fp = c.field();
    let mut out = BTreeMap::new();
    for y in fp.elements() {
        for z in fp.elements() {
            if !c.on_curve(y, z) {
                continue;
            }
            if f.eval(y, z, fp) == Some(FieldElem::ZERO) {
                let v = c.valuation_at_point(f, y, z).unwrap().unwrap();
                out.insert((y.0, z.0), v);
            }
        }
    }
    out
}

#[test]
fn divisors_of_coordinate_functions() {
    for m in 1..=2 {
        let c = curve(m);
        let fp = c.field();
        let (q, q0) = (c.params.q as i64, c.params.q0 as i64);
        // y: simple zeros at (0, z), all z
        let zy = affine_zero_orders(&c, &RawFunc::y());
        assert_eq!(zy.len() as i64, q);
        assert!(zy.iter().all(|(k, &v)| k.0 == 0 && v == 1));
        // z: simple zeros at (y, 0), y != 0, and order q0+1 at the origin
        let zz = affine_zero_orders(&c, &RawFunc::z());
        for (k, v) in &zz {
            assert_eq!(k.1, 0);
            assert_eq!(*v, if k.0 == 0 { q0 + 1 } else { 1 });
        }
        assert_eq!(zz.len() as i64, q);
        // h1: simple zeros on S and order 2q0+1 at the origin
        let zh1 = affine_zero_orders(&c, &c.h1());
        let mut s_count = 0;
        for y in fp.elements() {
            for z in fp.elements() {
                let on_s = fp.pow(y, 2 * q0 + 1) == fp.pow(z, 2 * q0) && (y, z) != (FieldElem::ZERO, FieldElem::ZERO);
                if on_s {
                    s_count += 1;
                    assert_eq!(zh1.get(&(y.0, z.0)), Some(&1));
                }
            }
        }
        assert_eq!(zh1[&(0, 0)], 2 * q0 + 1);
        assert_eq!(zh1.len(), s_count + 1);
        // h2: only the origin
        let zh2 = affine_zero_orders(&c, &c.h2());
        assert_eq!(zh2.len(), 1);
        assert_eq!(zh2[&(0, 0)], q + 2 * q0 + 1);
        // degree zero: finite zeros balance the pole at infinity
        for f in [RawFunc::y(), RawFunc::z(), c.h1(), c.h2()] {
            let zeros: i64 = affine_zero_orders(&c, &f).values().sum();
            assert_eq!(zeros + c.valuation_at_infinity(&f).unwrap(), 0);
        }
    }
}

#[test]
fn cone_examples_m1() {
    let c = curve(1);
    let z2 = c.to_cone(&raw(&[(0, 2)]));
    let mut expect = ConeFunc::zero();
    expect.add_term(ConeMono::new(1, 0, 1, 0), FieldElem::ONE);
    expect.add_term(ConeMono::new(0, 0, 0, 1), FieldElem::ONE);
    assert_eq!(z2, expect);
    assert_eq!(c.to_cone(&raw(&[(7, 0)])), ConeFunc::monomial(ConeMono::new(7, 0, 0, 0), FieldElem::ONE));
}

#[test]
fn pole_order_representation_is_unique() {
    for m in 1..=3 {
        let p = CurveParams::new(m).unwrap();
        for n in -600..600 {
            let mono = ConeMono::from_pole_order(n, &p);
            assert!(mono.is_reduced(&p));
            assert_eq!(mono.pole_order(&p), n);
        }
    }
}

#[test]
fn every_core_round_trips() {
    for m in 1..=3 {
        let c = curve(m);
        for idx in 0..c.params.q as usize {
            for a in [-3i64, 0, 2] {
                let mono = ConeMono::from_core_index(a, idx, &c.params);
                let g = ConeFunc::monomial(mono, FieldElem::ONE);
                assert_eq!(c.to_cone(&c.to_raw(&g)), g, "m = {m}, {mono:?}");
            }
        }
        for j in 0..c.params.q {
            let f = raw(&[(-1, j)]);
            assert_eq!(c.to_raw(&c.to_cone(&f)), f);
        }
    }
}

#[test]
fn cone_rules_hold_in_raw_coordinates() {
    for m in 1..=3 {
        let c = curve(m);
        let q0 = c.params.q0;
        let p = &c.params;
        let one = FieldElem::ONE;
        // h1^q0 = z + y^(q0+1), h2^q0 = h1 + y^q0 z
        assert_eq!(c.h1().pow(q0, p), raw(&[(0, 1), (q0 as i64 + 1, 0)]));
        assert_eq!(c.h2().pow(q0, p), c.h1().add(&RawFunc::monomial(q0 as i64, 1, one)));
        // cone products agree with raw products
        let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
        for _ in 0..20 {
            let f = random_cone(&c, &mut rng, 4);
            let g = random_cone(&c, &mut rng, 4);
            assert_eq!(c.to_raw(&c.cone_mul(&f, &g)), c.to_raw(&f).mul(&c.to_raw(&g), p));
        }
    }
}

pub(crate) fn random_cone(c: &Curve, rng: &mut impl Rng, terms: usize) -> ConeFunc {
    let p = &c.params;
    let mut g = ConeFunc::zero();
    for _ in 0..terms {
        let mono = ConeMono::from_core_index(rng.gen_range(-4..6), rng.gen_range(0..p.q as usize), p);
        g.add_term(mono, FieldElem(rng.gen_range(1..p.q)));
    }
    g
}

fn random_raw(c: &Curve, rng: &mut impl Rng, terms: usize) -> RawFunc {
    let p = &c.params;
    let mut f = RawFunc::zero();
    for _ in 0..terms {
        f.add_term(rng.gen_range(-4..6), rng.gen_range(0..p.q), FieldElem(rng.gen_range(1..p.q)));
    }
    f
}

#[test]
fn valuation_is_additive() {
    for m in 1..=2 {
        let c = curve(m);
        let mut rng = ChaCha8Rng::seed_from_u64(10 + m as u64);
        let o = FieldElem::ZERO;
        for _ in 0..25 {
            let f = random_raw(&c, &mut rng, 3);
            let g = random_raw(&c, &mut rng, 3);
            if f.is_zero() || g.is_zero() {
                continue;
            }
            let fg = f.mul(&g, &c.params);
            let vi = |h: &RawFunc| c.valuation_at_infinity(h).unwrap();
            assert_eq!(vi(&fg), vi(&f) + vi(&g));
            let z0 = FieldElem(rng.gen_range(0..c.params.q));
            let v0 = |h: &RawFunc| c.valuation_at_point(h, o, z0).unwrap().unwrap();
            assert_eq!(v0(&fg), v0(&f) + v0(&g));
        }
    }
}

#[test]
fn derivative_routes_agree() {
    for m in 1..=3 {
        let c = curve(m);
        let mut rng = ChaCha8Rng::seed_from_u64(20 + m as u64);
        for _ in 0..20 {
            let g = random_cone(&c, &mut rng, 5);
            let via_cone = c.to_raw(&c.cone_derivative(&g));
            let via_raw = c.to_raw(&g).derivative(&c.params);
            assert_eq!(via_cone, via_raw);
            // squares are d-constants
            let sq = c.to_raw(&g).square(&c.params);
            assert!(sq.derivative(&c.params).is_zero());
        }
    }
}

#[test]
fn tau_weights() {
    let p = CurveParams::new(2).unwrap();
    let q0 = p.q0;
    assert_eq!(ConeMono::new(1, 0, 0, 0).tau_weight(&p), 1);
    assert_eq!(ConeMono::new(0, 1, 0, 0).tau_weight(&p), q0 + 1);
    assert_eq!(ConeMono::new(0, 0, 0, 1).tau_weight(&p), 2 * q0 + 2);
    assert_eq!((p.q + 2 * q0 + 1) % (p.q - 1), 2 * q0 + 2);
}

#[test]
fn tau_equivariance() {
    for m in 1..=2 {
        let c = curve(m);
        let mut rng = ChaCha8Rng::seed_from_u64(30 + m as u64);
        for _ in 0..10 {
            let f = random_raw(&c, &mut rng, 6);
            assert_eq!(c.to_cone(&f.tau(&c.params)), c.cone_tau(&c.to_cone(&f)));
        }
    }
}

#[test]
fn point_counts() {
    assert_eq!(curve(1).count_points(), 65);
    assert_eq!(curve(2).count_points(), 1025);
    assert_eq!(curve(3).count_points(), 16385);
}

#[test]
fn json_shapes() {
    let c = curve(1);
    assert_eq!(serde_json::to_string(&c.h1()).unwrap(), "[[0,4,1],[5,0,1]]");
    let g = c.to_cone(&c.h1());
    assert_eq!(serde_json::to_string(&g).unwrap(), "[[0,0,1,0,1]]");
    let back: ConeFunc = serde_json::from_str("[[0,0,1,0,1]]").unwrap();
    assert_eq!(back, g);
}
