use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;
use zpcp::generate::{
    free_module, free_pair, random_gl_local, random_matrix, random_r_unimodular, random_sublattice, r_matrix_rows,
    rng_from_seed,
};
use zpcp::modulestruct::{
    compatible_basis, decomposition_type, radical_lattice, split_off_free_summand, verify_compatible,
};
use zpcp::plattice::{hnf_local, snf_local};
use zpcp::{Prime, QMatrix, Rational, ZpLattice};

fn prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![2u32, 3, 5]).prop_map(|p| Prime::new(p).unwrap())
}

fn symmetric_form(p: Prime, n: usize, rng: &mut impl Rng) -> QMatrix {
    loop {
        let a = random_matrix(p, n, n, rng);
        let f = &a + &a.transpose();
        if !f.det().is_zero() {
            return f;
        }
    }
}

fn full_rank_lattice(p: Prime, n: usize, rng: &mut impl Rng) -> ZpLattice {
    loop {
        let m = random_matrix(p, n, n, rng);
        if !m.det().is_zero() {
            return ZpLattice::from_generators(&m, p).unwrap();
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hnf_ignores_row_scrambles(p in prime(), seed in any::<u64>(), rows in 1usize..5, cols in 1usize..5) {
        let mut rng = rng_from_seed(seed);
        let m = random_matrix(p, rows, cols, &mut rng);
        let u = random_gl_local(p, rows, &mut rng);
        prop_assert_eq!(hnf_local(&(&u * &m), p).unwrap(), hnf_local(&m, p).unwrap());
    }

    #[test]
    fn snf_ignores_two_sided_scrambles(p in prime(), seed in any::<u64>(), rows in 1usize..5, cols in 1usize..5) {
        let mut rng = rng_from_seed(seed);
        let m = random_matrix(p, rows, cols, &mut rng);
        let u = random_gl_local(p, rows, &mut rng);
        let v = random_gl_local(p, cols, &mut rng);
        prop_assert_eq!(snf_local(&(&(&u * &m) * &v), p).unwrap(), snf_local(&m, p).unwrap());
    }

    #[test]
    fn dual_is_an_involution(p in prime(), seed in any::<u64>(), n in 1usize..5) {
        let mut rng = rng_from_seed(seed);
        let l = full_rank_lattice(p, n, &mut rng);
        let b = symmetric_form(p, n, &mut rng);
        prop_assert_eq!(l.dual(&b).unwrap().dual(&b).unwrap(), l);
    }

    #[test]
    fn index_is_additive_in_towers(p in prime(), seed in any::<u64>(), n in 1usize..5) {
        let mut rng = rng_from_seed(seed);
        let a = full_rank_lattice(p, n, &mut rng);
        let b = random_sublattice(&a, &mut rng).unwrap();
        let c = random_sublattice(&b, &mut rng).unwrap();
        prop_assert!(a.contains_lattice(&b) && b.contains_lattice(&c));
        prop_assert_eq!(a.index_of(&c).unwrap(), a.index_of(&b).unwrap() + b.index_of(&c).unwrap());
    }

    #[test]
    fn dual_turns_intersection_into_sum(p in prime(), seed in any::<u64>(), n in 1usize..4) {
        let mut rng = rng_from_seed(seed);
        let a = full_rank_lattice(p, n, &mut rng);
        let b = full_rank_lattice(p, n, &mut rng);
        let form = symmetric_form(p, n, &mut rng);
        let lhs = a.intersection(&b).unwrap().dual(&form).unwrap();
        let rhs = a.dual(&form).unwrap().sum(&b.dual(&form).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn compatible_t_is_read_off_from_the_index(p in prime(), seed in any::<u64>(), a in 1usize..3, t in 0usize..3) {
        prop_assume!(t <= a);
        let mut rng = rng_from_seed(seed);
        let pair = free_pair(p, a, t, &mut rng).unwrap();
        let res = compatible_basis(&pair.outer, &pair.inner).unwrap();
        let index = pair.outer.lattice().index_of(pair.inner.lattice()).unwrap();
        prop_assert_eq!(index, (p.as_usize() * (a - res.t)) as i64);
        prop_assert_eq!(res.t, pair.t);
        prop_assert!(verify_compatible(&pair.outer, &pair.inner, &res));
    }

    #[test]
    fn type_survives_coordinate_changes(p in prime(), seed in any::<u64>(), a in 0usize..2, b in 0usize..2, c in 0usize..3) {
        prop_assume!(a + b + c > 0);
        let mut rng = rng_from_seed(seed);
        let m = zpcp::SigmaLattice::block(p, a, b, c);
        let q = random_gl_local(p, m.ambient_dim(), &mut rng);
        let moved = m.change_coordinates(&q).unwrap();
        prop_assert_eq!(decomposition_type(&moved).unwrap(), decomposition_type(&m).unwrap());
        prop_assert_eq!(decomposition_type(&m).unwrap(), zpcp::DecompositionType::new(a, b, c));
    }

    #[test]
    fn split_off_summand_is_direct(p in prime(), seed in any::<u64>(), a in 1usize..3) {
        let mut rng = rng_from_seed(seed);
        let m = free_module(p, a);
        let u = random_r_unimodular(p, a, &mut rng).unwrap();
        let m = m.with_lattice(m.r_span(&r_matrix_rows(&u)).unwrap()).unwrap();
        let radical = radical_lattice(&m).unwrap();
        let coeffs: Vec<i64> = (0..m.rank()).map(|_| rng.gen_range(-3..4)).collect();
        let g: Vec<Rational> = m
            .lattice()
            .basis()
            .row_iter()
            .zip(&coeffs)
            .fold(vec![Rational::zero(); m.ambient_dim()], |acc, (row, &c)| {
                acc.iter().zip(row).map(|(x, y)| x + y * Rational::from_integer(c.into())).collect()
            });
        prop_assume!(!radical.contains(&g));
        let (rg, rest) = split_off_free_summand(&m, &g).unwrap();
        prop_assert_eq!(rg.lattice().sum(rest.lattice()).unwrap(), m.lattice().clone());
        prop_assert_eq!(rg.lattice().intersection(rest.lattice()).unwrap().rank(), 0);
        prop_assert_eq!(rg.rank(), p.as_usize());
    }
}
