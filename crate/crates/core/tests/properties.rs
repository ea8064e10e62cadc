use covlab_core::covering::{
    excise_with_stars, join, meet, point_projection, refines, star_of_point, star_power, Covering,
};
use covlab_core::guards::Guards;
use covlab_core::matching::{
    compatible_matching, covering_graph, deficiency_bound, iterate, matching_number, mu,
    refinement_injection,
};
use covlab_core::sample;
use covlab_core::uniformity::{complexity, complexity_bruteforce, is_admissible, UniformStructure};
use covlab_core::Subset;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn refinement_is_a_preorder(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let a = sample::covering(&mut r, n, 5);
        let b = sample::covering(&mut r, n, 5);
        let c = sample::covering(&mut r, n, 5);
        prop_assert!(refines(&a, &a).unwrap());
        if refines(&a, &b).unwrap() && refines(&b, &c).unwrap() {
            prop_assert!(refines(&a, &c).unwrap());
        }
        let ac = a.canonicalize();
        prop_assert!(refines(&a, &ac).unwrap() && refines(&ac, &a).unwrap());
    }

    #[test]
    fn stars_are_antitone(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let u = sample::covering(&mut r, n, 4);
        let v = join(&[u.clone(), sample::covering(&mut r, n, 4)]).unwrap();
        prop_assert!(refines(&u, &v).unwrap());
        for x in 0..n {
            prop_assert!(star_of_point(x, &v).is_subset_of(&star_of_point(x, &u)));
        }
    }

    #[test]
    fn join_and_meet_bounds(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let u = sample::covering(&mut r, n, 4);
        let v = sample::covering(&mut r, n, 4);
        let j = join(&[u.clone(), v.clone()]).unwrap();
        let m = meet(&[u.clone(), v.clone()]).unwrap();
        prop_assert!(refines(&u, &j).unwrap() && refines(&v, &j).unwrap());
        prop_assert!(refines(&m, &u).unwrap() && refines(&m, &v).unwrap());
    }

    #[test]
    fn star_powers_grow(seed in any::<u64>(), n in 1usize..=8, k in 0usize..4) {
        let mut r = rng(seed);
        let u = sample::covering(&mut r, n, 4);
        let a = star_power(&u, k);
        let b = star_power(&u, k + 1);
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.members().iter().zip(b.members()) {
            prop_assert!(x.is_subset_of(y));
        }
    }

    #[test]
    fn excision_refines_the_join(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let u = sample::covering(&mut r, n, 4);
        let v = sample::covering(&mut r, n, 4);
        let s = sample::subset(&mut r, n, 0.4);
        let w = excise_with_stars(&u, &v, &s).unwrap();
        prop_assert!(refines(&w, &join(&[u, v]).unwrap()).unwrap());
    }

    #[test]
    fn point_projection_clauses(seed in any::<u64>(), n in 1usize..=7) {
        let mut r = rng(seed);
        let ground = covlab_core::GroundSet::new(n).unwrap();
        let s = UniformStructure::discrete(ground);
        let u = sample::partition(&mut r, n, n);
        let v = Covering::singletons(ground);
        let pi = point_projection(&u, &v, &s).unwrap();
        let uc = u.canonicalize();
        prop_assert!(pi.is_injective());
        prop_assert_eq!(pi.len(), uc.len());
        for (i, x) in pi.iter() {
            let star = star_of_point(x, &v);
            prop_assert!(star.is_subset_of(&uc.members()[i]));
            for (j, other) in uc.members().iter().enumerate() {
                prop_assert!(j == i || !star.is_subset_of(other));
            }
        }
    }

    #[test]
    fn complexity_is_monotone_and_class_invariant(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let s = sample::structure(&mut r, n);
        let u = sample::admissible_covering(&mut r, s.finest(), 5);
        let v = join(&[u.clone(), sample::admissible_covering(&mut r, s.finest(), 5)]).unwrap();
        prop_assert!(is_admissible(&v, &s).unwrap());
        let nu = complexity(&u, &s).unwrap();
        prop_assert!(nu <= complexity(&v, &s).unwrap());
        prop_assert!(nu <= u.canonicalize().len());
        let raw = Covering::new(u.ground(), [u.members(), u.members()].concat()).unwrap();
        prop_assert_eq!(complexity(&raw, &s).unwrap(), nu);
    }

    #[test]
    fn mu_is_symmetric_and_antitone(seed in any::<u64>(), n in 1usize..=10) {
        let mut r = rng(seed);
        let u = sample::covering(&mut r, n, 4);
        let fine = join(&[u.clone(), sample::covering(&mut r, n, 4)]).unwrap();
        let e = sample::subset(&mut r, n, 0.5);
        let f = sample::subset(&mut r, n, 0.5);
        prop_assert_eq!(mu(&e, &f, &u).unwrap(), mu(&f, &e, &u).unwrap());
        prop_assert!(mu(&e, &f, &fine).unwrap() <= mu(&e, &f, &u).unwrap());
    }

    #[test]
    fn auxiliary_matchings(seed in any::<u64>(), n in 1usize..=10) {
        let mut r = rng(seed);
        let f = sample::partial_injection(&mut r, n, 0.7);
        let domain: Subset = f.domain().collect();
        let image: Subset = f.image().collect();
        // Points outside the image have no preimage.
        let y_set = image;
        for x in 0..n {
            for y in 0..n {
                if y_set.contains(x) || y_set.contains(y) {
                    continue;
                }
                for a in 0..=n {
                    for b in 0..=n {
                        if let (Some(p), Some(q)) = (iterate(&f, x, a), iterate(&f, y, b)) {
                            if p == q {
                                prop_assert!(a == b && x == y, "f^{a}({x}) = f^{b}({y}) = {p}");
                            }
                        }
                    }
                }
            }
        }
        prop_assert!(domain.len() == f.len());
    }

    #[test]
    fn compatible_matching_assertions(seed in any::<u64>(), n in 1usize..=10, k in 1usize..=4) {
        let mut r = rng(seed);
        let u = sample::covering(&mut r, n, 4);
        let e = sample::subset(&mut r, n, 0.5);
        let f = sample::subset(&mut r, n, 0.5);
        let c = compatible_matching(&u, &e, &f, k).unwrap();
        prop_assert!(c.phi1.is_injective());
        let target = covering_graph(&(e - f), &(f - e), &star_power(&u, k - 1)).unwrap();
        prop_assert!(target.is_matching(&c.phi1));
        prop_assert!(c.bound_holds());
    }
}

#[test]
fn hall_ore_identity() {
    let guards = Guards::default();
    let mut r = rng(1);
    for _ in 0..1000 {
        let (a, b) = (r.gen_range(0..=10), r.gen_range(0..=10));
        let p = r.gen_range(0.05..0.6);
        let g = sample::bipartite_graph(&mut r, a, b, p);
        assert_eq!(matching_number(&g), deficiency_bound(&g, &guards).unwrap());
    }
}

#[test]
fn complexity_matches_bruteforce() {
    let guards = Guards::default();
    let mut r = rng(2);
    for _ in 0..500 {
        let n = r.gen_range(1..=8);
        let s = sample::structure(&mut r, n);
        let u = sample::admissible_covering(&mut r, s.finest(), 6);
        assert_eq!(
            complexity(&u, &s).unwrap(),
            complexity_bruteforce(&u, &s, &guards).unwrap(),
            "{u}"
        );
    }
}

#[test]
fn refinement_injection_is_perfect() {
    let mut r = rng(3);
    for _ in 0..200 {
        let n = r.gen_range(1..=8);
        let (s, u, v, w) = sample::refinement_injection_case(&mut r, n).unwrap();
        let inj = refinement_injection(&u, &v, &w, &s).unwrap();
        assert_eq!(inj.map.len(), inj.from.len());
        assert!(inj.map.is_injective());
        for (a, b) in inj.pairs() {
            assert!(a.intersects(&b));
        }
    }
}
