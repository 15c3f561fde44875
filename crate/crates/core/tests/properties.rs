use formal_rings::canonical::has_block_form;
use formal_rings::format::SystemFile;
use formal_rings::{
    canonicalize, similarity_partition, transport, BaseRing, EquivalencePartition, ExponentMatrix,
    FactorSystem, FormalMatrixRing, Permutation,
};
use proptest::prelude::*;
use proptest::sample::SizeRange;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|images| Permutation::new(images).unwrap())
}

/// Class maps using labels `1..=k` with every label present.
fn class_map(n: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0usize..n, SizeRange::from(n)).prop_map(|raw| {
        let mut used: Vec<usize> = raw.clone();
        used.sort_unstable();
        used.dedup();
        raw.iter()
            .map(|v| used.binary_search(v).unwrap() + 1)
            .collect()
    })
}

fn modulus() -> impl Strategy<Value = i64> {
    prop::sample::select(vec![4i64, 8, 9, 16, 27])
}

fn system() -> impl Strategy<Value = (FactorSystem, i64)> {
    (2usize..=4, modulus(), any::<u64>()).prop_flat_map(|(n, m, seed)| {
        class_map(n).prop_map(move |classes| {
            let ring = BaseRing::modular(m).unwrap();
            let s = ring.nilradical_generator();
            (FactorSystem::binary(&classes, &s).unwrap(), seed as i64)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn inverse_permutation_undoes_permute((sys, _) in system(), seed in any::<u64>()) {
        let n = sys.n();
        let tau = {
            let mut images: Vec<usize> = (1..=n).collect();
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            rand::seq::SliceRandom::shuffle(images.as_mut_slice(), &mut r);
            Permutation::new(images).unwrap()
        };
        prop_assert!(sys.permute(&tau).permute(&tau.inverse()).same_table(&sys));
        prop_assert!(tau.compose(&tau.inverse()).is_identity());
    }

    #[test]
    fn permuted_system_stays_valid((sys, _) in system(), tau in permutation(4)) {
        prop_assume!(sys.n() == 4);
        let p = sys.permute(&tau);
        prop_assert!(FactorSystem::validate(sys.ring(), &p.to_nested()).is_ok());
    }

    #[test]
    fn transport_preserves_products((sys, seed) in system(), tau in permutation(4)) {
        prop_assume!(sys.n() == 4);
        let src = FormalMatrixRing::new(sys.clone());
        let dst = FormalMatrixRing::new(sys.permute(&tau));
        let mut rng = ChaCha8Rng::seed_from_u64(seed as u64);
        let (a, b) = (src.random(&mut rng), src.random(&mut rng));
        prop_assert_eq!(
            transport(&tau, &src.mul(&a, &b).unwrap()),
            dst.mul(&transport(&tau, &a), &transport(&tau, &b)).unwrap()
        );
    }

    #[test]
    fn ring_laws_on_random_triples((sys, seed) in system()) {
        let k = FormalMatrixRing::new(sys);
        let mut rng = ChaCha8Rng::seed_from_u64(seed as u64);
        let (a, b, c) = (k.random(&mut rng), k.random(&mut rng), k.random(&mut rng));
        let ab_c = k.mul(&k.mul(&a, &b).unwrap(), &c).unwrap();
        let a_bc = k.mul(&a, &k.mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let left = k.mul(&a, &k.add(&b, &c).unwrap()).unwrap();
        let right = k.add(&k.mul(&a, &b).unwrap(), &k.mul(&a, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(k.mul(&k.identity(), &a).unwrap(), a.clone());
        prop_assert_eq!(k.mul(&a, &k.identity()).unwrap(), a);
    }

    #[test]
    fn partition_and_blocks_recovered(classes in (2usize..=6).prop_flat_map(class_map), m in modulus()) {
        let ring = BaseRing::modular(m).unwrap();
        let s = ring.nilradical_generator();
        let sys = FactorSystem::binary(&classes, &s).unwrap();
        let part = similarity_partition(&sys).unwrap();
        prop_assert_eq!(&part, &EquivalencePartition::from_class_map(&classes));
        let canon = canonicalize(&sys, &s).unwrap();
        prop_assert!(has_block_form(&canon.canonical_s, &canon.descriptor.block_sizes, s.value(), 1));
        prop_assert!(canon.descriptor.block_sizes.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn descriptor_is_permutation_invariant(classes in class_map(5), tau in permutation(5)) {
        let s = BaseRing::modular(8).unwrap().element(2);
        let sys = FactorSystem::binary(&classes, &s).unwrap();
        let a = canonicalize(&sys, &s).unwrap().descriptor;
        let b = canonicalize(&sys.permute(&tau), &s).unwrap().descriptor;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn coboundary_of_class_order_is_binary(classes in (2usize..=5).prop_flat_map(class_map)) {
        let s = BaseRing::modular(9).unwrap().element(3);
        let g = ExponentMatrix::from_class_order(&classes).unwrap();
        let via_g = FactorSystem::coboundary(&g, &s).unwrap();
        prop_assert!(via_g.same_table(&FactorSystem::binary(&classes, &s).unwrap()));
    }

    #[test]
    fn system_files_round_trip((sys, _) in system()) {
        let file = SystemFile::explicit(&sys, None);
        let back = SystemFile::parse(&file.to_json()).unwrap().build().unwrap();
        prop_assert!(back.system.same_table(&sys));
        prop_assert_eq!(SystemFile::parse(&file.to_json()).unwrap(), file);
    }
}
