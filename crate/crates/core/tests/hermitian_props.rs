use num_traits::Zero;
use proptest::prelude::*;
use zpcp::arith::vp;
use zpcp::generate::{elementary_hermitian, random_formed, random_hermitian_gram, rng_from_seed};
use zpcp::hermitian::{
    bilinear_to_hermitian, dual_of, hermitian_to_bilinear, is_elementary, is_integral, is_unimodular, jordan_split,
    r_basis,
};
use zpcp::modulestruct::decomposition_type;
use zpcp::{Prime, QMatrix, Valuation};

fn prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![2u32, 3, 5]).prop_map(|p| Prime::new(p).unwrap())
}

fn is_unit(x: &zpcp::Rational, p: Prime) -> bool {
    vp(x, p) == Valuation::Finite(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hermitian_round_trip(p in prime(), seed in any::<u64>(), a in 1usize..4) {
        let mut rng = rng_from_seed(seed);
        let g = random_hermitian_gram(p, a, &mut rng).unwrap();
        let l = hermitian_to_bilinear(&g).unwrap();
        let basis = r_basis(&l).unwrap();
        // The standard lattice has the standard R-basis; any R-basis gives a congruent Gram.
        let standard = zpcp::RBasis {
            vectors: (0..a).map(|i| zpcp::ZpLattice::unit_vector(p.as_usize() * a, p.as_usize() * i)).collect(),
        };
        prop_assert_eq!(bilinear_to_hermitian(&l, &standard).unwrap(), g);
        prop_assert_eq!(basis.len(), a);
    }

    #[test]
    fn bilinear_round_trip(p in prime(), seed in any::<u64>(), a in 1usize..3, t in 0usize..3) {
        prop_assume!(t <= a);
        let mut rng = rng_from_seed(seed);
        let l = elementary_hermitian(p, a, t, &mut rng).unwrap().lattice;
        let basis = r_basis(&l).unwrap();
        let back = hermitian_to_bilinear(&bilinear_to_hermitian(&l, &basis).unwrap()).unwrap();
        // Gram of the orbit basis (g_i σ^k) must be the form of the rebuilt lattice.
        let orbit: Vec<Vec<zpcp::Rational>> = basis.vectors.iter().flat_map(|g| l.module().orbit(g)).collect();
        let x = QMatrix::from_rows(l.module().ambient_dim(), orbit);
        prop_assert_eq!(&(&x * l.form()) * &x.transpose(), back.form().clone());
    }

    #[test]
    fn dual_is_an_involution_and_scales_inversely(p in prime(), seed in any::<u64>(), a in 0usize..2, b in 0usize..2, c in 0usize..2) {
        prop_assume!(a + b + c > 0);
        let mut rng = rng_from_seed(seed);
        let l = random_formed(p, a, b, c, &mut rng).unwrap();
        let d = dual_of(&l).unwrap();
        prop_assert_eq!(dual_of(&d).unwrap(), l.clone());
        let pl = l.scaled(&p.to_rational()).unwrap();
        let expected = d.lattice().scale(&p.pow(-1)).unwrap();
        prop_assert_eq!(dual_of(&pl).unwrap().lattice().clone(), expected);
        prop_assert_eq!(decomposition_type(d.module()).unwrap(), decomposition_type(l.module()).unwrap());
    }

    #[test]
    fn jordan_split_invariants(p in prime(), seed in any::<u64>(), a in 1usize..3, t in 0usize..3) {
        prop_assume!(t <= a);
        let mut rng = rng_from_seed(seed);
        let inst = elementary_hermitian(p, a, t, &mut rng).unwrap();
        let l = &inst.lattice;
        prop_assert!(is_elementary(l).unwrap());
        prop_assert!(is_integral(l).unwrap());

        let split = jordan_split(l).unwrap();
        prop_assert_eq!(split.t, t);
        let index = dual_of(l).unwrap().lattice().index_of(l.lattice()).unwrap();
        prop_assert_eq!(index, (p.as_usize() * (a - t)) as i64);
        if split.l0.lattice().rank() > 0 {
            prop_assert!(is_unit(&split.l0.gram().det(), p));
            prop_assert!(is_unimodular(&split.l0).unwrap());
        }
        if split.l1.lattice().rank() > 0 {
            let scaled = split.l1.gram().scale(&p.pow(-1));
            prop_assert!(is_unit(&scaled.det(), p));
        }
        let cross = &(split.l0.lattice().basis() * l.form()) * &split.l1.lattice().basis().transpose();
        prop_assert!(cross.row_iter().flatten().all(Zero::is_zero));
    }
}
