use pathcat::simplex::{
    compose_delta, compose_word, enumerate_hom, factorize_generators, ordinal_sum, DeltaMap, Generator, SimplexError,
};
use proptest::prelude::*;

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// An arbitrary nondecreasing map into `cod`, built from sorted draws.
fn delta_map(max: usize) -> impl Strategy<Value = DeltaMap> {
    (0..=max, 1..=max).prop_flat_map(|(dom, cod)| {
        prop::collection::vec(0..cod, dom).prop_map(move |mut v| {
            v.sort_unstable();
            DeltaMap::new(dom, cod, v).unwrap()
        })
    })
}

#[test]
fn spot_counts() {
    for n in 0..6 {
        assert_eq!(enumerate_hom(0, n).len(), 1);
    }
    assert_eq!(enumerate_hom(2, 2).len(), 3);
    assert_eq!(enumerate_hom(3, 2).len(), 4);
    assert!(enumerate_hom(2, 0).is_empty());
    let images: Vec<Vec<usize>> = enumerate_hom(2, 2).iter().map(|f| f.images().to_vec()).collect();
    assert_eq!(images, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
}

#[test]
fn hom_sizes_are_multiset_coefficients() {
    for m in 0..6 {
        for n in 1..6 {
            assert_eq!(enumerate_hom(m, n).len(), binomial(n + m - 1, m), "Δ({m},{n})");
        }
    }
}

#[test]
fn invalid_maps_are_rejected() {
    assert_eq!(DeltaMap::new(2, 2, vec![1, 0]), Err(SimplexError::InvalidMap { dom: 2, cod: 2 }));
    assert!(DeltaMap::new(1, 1, vec![1]).is_err());
    assert!(DeltaMap::new(2, 3, vec![0]).is_err());
    let f = DeltaMap::identity(2);
    let g = DeltaMap::identity(3);
    assert_eq!(compose_delta(&g, &f), Err(SimplexError::DomainMismatch { cod: 2, dom: 3 }));
}

#[test]
fn generators_have_their_shapes() {
    let d = Generator::Coface { n: 2, i: 1 }.to_map();
    assert_eq!(d.images(), &[0, 2]);
    assert!(d.is_injective());
    let s = Generator::Codegeneracy { n: 2, i: 0 }.to_map();
    assert_eq!(s.images(), &[0, 0, 1]);
    assert!(s.is_surjective());
}

#[test]
fn every_map_factorizes() {
    for m in 0..5 {
        for n in 1..5 {
            for f in enumerate_hom(m, n) {
                let word = factorize_generators(&f);
                assert_eq!(compose_word(m, &word), f);
                let split = word.iter().position(|g| matches!(g, Generator::Coface { .. })).unwrap_or(word.len());
                assert!(word[split..].iter().all(|g| matches!(g, Generator::Coface { .. })));
            }
        }
    }
}

#[test]
fn ordinal_sum_on_all_small_triples() {
    let maps: Vec<DeltaMap> = (0..3).flat_map(|m| (1..3).flat_map(move |n| enumerate_hom(m, n))).collect();
    let empty = DeltaMap::identity(0);
    for f in &maps {
        assert_eq!(&ordinal_sum(f, &empty), f);
        assert_eq!(&ordinal_sum(&empty, f), f);
        for g in &maps {
            for h in &maps {
                assert_eq!(ordinal_sum(&ordinal_sum(f, g), h), ordinal_sum(f, &ordinal_sum(g, h)));
            }
        }
    }
}

proptest! {
    #[test]
    fn factorization_recomposes(f in delta_map(6)) {
        prop_assert_eq!(compose_word(f.dom(), &factorize_generators(&f)), f);
    }

    #[test]
    fn composition_is_associative_and_unital(f in delta_map(4), images in prop::collection::vec(0usize..4, 8)) {
        let g = DeltaMap::new(f.cod(), 4, { let mut v = images[..f.cod()].to_vec(); v.sort_unstable(); v }).unwrap();
        let h = DeltaMap::new(4, 3, vec![0, 1, 1, 2]).unwrap();
        let gf = compose_delta(&g, &f).unwrap();
        prop_assert_eq!(compose_delta(&h, &gf).unwrap(), compose_delta(&compose_delta(&h, &g).unwrap(), &f).unwrap());
        prop_assert_eq!(compose_delta(&DeltaMap::identity(f.cod()), &f).unwrap(), f.clone());
        prop_assert_eq!(compose_delta(&f, &DeltaMap::identity(f.dom())).unwrap(), f);
    }

    #[test]
    fn ordinal_sum_is_bifunctorial(f in delta_map(3), f2 in delta_map(3), seed in prop::collection::vec(0usize..3, 6)) {
        let mk = |dom: usize, off: usize| {
            let mut v: Vec<usize> = seed[off..off + dom].to_vec();
            v.sort_unstable();
            DeltaMap::new(dom, 3, v).unwrap()
        };
        let (g, g2) = (mk(f.cod(), 0), mk(f2.cod(), 3));
        let lhs = compose_delta(&ordinal_sum(&g, &g2), &ordinal_sum(&f, &f2)).unwrap();
        let rhs = ordinal_sum(&compose_delta(&g, &f).unwrap(), &compose_delta(&g2, &f2).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
