use super::*;
use crate::gf2m::make_field;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn field() -> FieldParams {
    make_field(1).unwrap()
}

fn ops(n: usize, f: &[(usize, usize)], v: &[(usize, usize)]) -> EModule {
    let mut fm = Matrix::zeros(n, n);
    let mut vm = Matrix::zeros(n, n);
    for &(i, j) in f {
        fm.set(i, j, FieldElem::ONE);
    }
    for &(i, j) in v {
        vm.set(i, j, FieldElem::ONE);
    }
    EModule::new(field(), SemilinearOp::new(fm, 1), SemilinearOp::new(vm, -1), None).unwrap()
}

fn random_invertible(n: usize, fp: &FieldParams, rng: &mut impl Rng) -> Matrix {
    loop {
        let mut p = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                p.set(i, j, FieldElem(rng.gen_range(0..fp.order())));
            }
        }
        if p.inverse(fp).is_some() {
            return p;
        }
    }
}

#[test]
fn filtration_of_e_mod_f_plus_v() {
    // F e1 = e2, V e1 = e2
    let m = ops(2, &[(1, 0)], &[(1, 0)]);
    let filt = m.canonical_filtration().unwrap();
    assert_eq!(filt.dims, [0, 1, 2]);
    let subs = filt.subspaces.as_ref().unwrap();
    assert!(subs[1].contains(&unit_vector(2, 1), &m.field));
    assert_eq!(m.eo_type().unwrap(), EoType(vec![0]));
    assert_eq!(m.decompose().unwrap().to_string(), "E/E(F+V)");
}

#[test]
fn zero_operators() {
    let m = ops(2, &[], &[]);
    let filt = m.canonical_filtration().unwrap();
    assert_eq!(filt.dims, [0, 2]);
    assert_eq!(m.a_number(), 2);
    assert_eq!(m.eo_type().unwrap(), EoType(vec![0]));
    assert!(!m.is_bt1());
    assert!(matches!(m.decompose(), Err(Error::NotBt1(_))));
}

#[test]
fn positive_p_rank_is_rejected() {
    let m = ops(1, &[(0, 0)], &[]);
    assert_eq!(m.p_rank(), 1);
    assert!(matches!(m.decompose(), Err(Error::PositivePRank(1))));
}

#[test]
fn easy_words() {
    for t in 1..=6 {
        let m = EModule::from_relations(field(), &[(t, t)]).unwrap();
        assert_eq!(m.dim(), 2 * t);
        assert!(m.is_bt1());
        m.check_relations().unwrap();
        let d = m.decompose().unwrap();
        assert_eq!(d.multiset(), [(Word::easy(t), 1)]);
        assert_eq!(d.eo_type, EoType((0..t).collect()));
        assert_eq!(m.a_number(), 1);
        assert_eq!(m.p_rank(), 0);
    }
}

#[test]
fn module_z() {
    let rel = [(3, 3), (4, 3), (3, 4)];
    let m = EModule::from_relations(field(), &rel).unwrap();
    assert_eq!(m.dim(), 20);
    assert_eq!(m.a_number(), 3);
    assert_eq!(m.p_rank(), 0);
    let d = m.decompose().unwrap();
    assert_eq!(d.summands.len(), 1);
    let s = &d.summands[0];
    assert_eq!((s.rank, s.a_number, s.multiplicity), (20, 3, 1));
    assert_eq!(s.word.relations(), rel);
    assert_eq!(s.presentation, "E<V^3X1 = F^3X2; V^4X2 = F^3X3; V^3X3 = F^4X1>");
}

#[test]
fn word_canonical_form() {
    use Letter::{F, V};
    let (w, k) = Word::canonical(&[V, F, V, F]);
    assert_eq!((w.letters(), k), (&[F, V][..], 2));
    let (w, k) = Word::canonical(&[V, V, F, V, F, F]);
    assert_eq!((w.letters(), k), (&[F, F, V, V, F, V][..], 1));
    assert_eq!(w.to_string(), "(F^-1)^2 V^2 (F^-1) V");
    assert_eq!(Word::easy(3).easy_exponent(), Some(3));
    assert_eq!(Word::easy(3).presentation(), "E/E(F^3+V^3)");
}

fn random_relations(rng: &mut impl Rng) -> Vec<(usize, usize)> {
    let r = rng.gen_range(1..=3);
    (0..r).map(|_| (rng.gen_range(1..=3), rng.gen_range(1..=3))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn invariants_survive_base_change(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fp = field();
        let parts: Vec<EModule> = (0..rng.gen_range(1..=3))
            .map(|_| EModule::from_relations(fp.clone(), &random_relations(&mut rng)).unwrap())
            .collect();
        let m = EModule::direct_sum(fp.clone(), &parts).unwrap();
        let d = m.decompose().unwrap();
        prop_assert_eq!(d.rank(), m.dim());
        prop_assert_eq!(d.a_number(), m.a_number());
        let p = random_invertible(m.dim(), &fp, &mut rng);
        let c = m.conjugate(&p).unwrap();
        c.check_relations().unwrap();
        let dc = c.decompose().unwrap();
        prop_assert_eq!(&dc, &d);
        prop_assert_eq!(c.a_number(), m.a_number());
        // blocks in one cycle share a dimension
        let filt = c.canonical_filtration().unwrap();
        let blocks = filt.blocks().unwrap();
        for b in &blocks {
            prop_assert_eq!(b.dim, blocks[b.target].dim);
        }
    }

    #[test]
    fn combined_filtration_matches_direct_sum(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fp = field();
        let parts: Vec<EModule> = (0..rng.gen_range(2..=3))
            .map(|_| EModule::from_relations(fp.clone(), &random_relations(&mut rng)).unwrap())
            .collect();
        let whole = EModule::direct_sum(fp, &parts).unwrap().canonical_filtration().unwrap();
        let filts: Vec<Filtration> = parts.iter().map(|p| p.canonical_filtration().unwrap()).collect();
        let combined = Filtration::direct_sum(&filts).unwrap();
        prop_assert_eq!(&combined.dims, &whole.dims);
        prop_assert_eq!(&combined.v_map, &whole.v_map);
        prop_assert_eq!(&combined.finv_map, &whole.finv_map);
    }

    #[test]
    fn eo_type_steps(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rel = random_relations(&mut rng);
        let m = EModule::from_relations(field(), &rel).unwrap();
        let nu = m.eo_type().unwrap().0;
        prop_assert!(nu[0] <= 1);
        for w in nu.windows(2) {
            prop_assert!(w[1] >= w[0] && w[1] - w[0] <= 1);
        }
    }
}

fn with_tau(m: &EModule, weights: &[u32]) -> EModule {
    let fp = &m.field;
    let mut t = Matrix::zeros(weights.len(), weights.len());
    for (i, &w) in weights.iter().enumerate() {
        t.set(i, i, fp.zeta_pow(w as i64));
    }
    EModule {
        tau: Some(SemilinearOp::new(t, 0)),
        ..m.clone()
    }
}

#[test]
fn bad_tau_order() {
    let m = ops(2, &[], &[]);
    let mut t = Matrix::identity(2);
    t.set(0, 1, FieldElem::ONE);
    let m = EModule {
        tau: Some(SemilinearOp::new(t, 0)),
        ..m
    };
    assert!(matches!(m.tau_split(), Err(Error::BadTauOrder(7))));
}

#[test]
fn suzuki_m1() {
    let coh = Cohomology::new(1).unwrap();
    let m = EModule::from_cohomology(&coh).unwrap();
    m.check_relations().unwrap();
    assert!(m.is_bt1());
    assert_eq!(m.a_number(), 5);
    assert_eq!(m.p_rank(), 0);
    let d = m.decompose().unwrap();
    assert_eq!(d.to_string(), "E/E(F^2+V^2) + 4·E/E(F^3+V^3)");
    let a = m.analyze().unwrap();
    assert_eq!(a.decomposition, d);
    assert_eq!(a.a_number, 5);

    let split = m.tau_split().unwrap();
    assert_eq!(split.trivial.dim(), 4);
    assert_eq!(split.nontrivial.dim(), 24);
    assert!(split.multiplicities.values().all(|&k| k == 4));
    assert_eq!(split.multiplicities.len(), 7);
    let triv = split.trivial.canonical_filtration().unwrap();
    assert_eq!(triv.dims, [0, 1, 2, 3, 4]);
    assert_eq!(split.trivial.eo_type().unwrap(), EoType(vec![0, 1]));
    assert_eq!(split.trivial.decompose().unwrap().to_string(), "E/E(F^2+V^2)");

    // the same split after hiding the eigenbasis
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p = random_invertible(m.dim(), &m.field, &mut rng);
    let c = m.conjugate(&p).unwrap();
    let cs = c.tau_split().unwrap();
    assert_eq!(cs.multiplicities, split.multiplicities);
    assert_eq!(cs.trivial.decompose().unwrap(), split.trivial.decompose().unwrap());
    assert_eq!(c.analyze().unwrap().decomposition, d);
}

#[test]
fn suzuki_m2() {
    let coh = Cohomology::new(2).unwrap();
    let m = EModule::from_cohomology(&coh).unwrap();
    let a = m.analyze().unwrap();
    assert_eq!(a.a_number, 30);
    assert_eq!(a.p_rank, 0);
    let d = &a.decomposition;
    let z = Word::from_relations(&[(3, 3), (4, 3), (3, 4)]).0;
    assert_eq!(
        d.multiset(),
        [(Word::easy(1), 1), (Word::easy(3), 1), (Word::easy(5), 16), (z.clone(), 4)]
    );
    assert_eq!(d.multiplicity(&z), 4);
    assert_eq!(d.rank(), 248);
    assert_eq!(d.a_number(), 30);
    // the EO type assembled from components agrees with the module's own
    assert_eq!(d.eo_type, m.eo_type().unwrap());
    let split = m.tau_split().unwrap();
    assert_eq!(split.trivial.eo_type().unwrap(), EoType(vec![0, 1, 1, 2]));
    assert_eq!(split.trivial.a_number(), 2);
}

#[test]
fn components_cover_module() {
    let coh = Cohomology::new(1).unwrap();
    let m = EModule::from_cohomology(&coh).unwrap();
    let comps = m.components().unwrap();
    assert_eq!(comps.iter().map(|c| c.dim()).sum::<usize>(), 28);
    assert_eq!(comps.len(), 3);
    let w: Vec<u32> = coh.tau_weights();
    let again = with_tau(&m, &w);
    assert_eq!(again.components().unwrap().len(), 3);
}
