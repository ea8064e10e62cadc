use covlab_core::dynamics::{check_inequalities, exact_mu, exact_omega};
use covlab_core::guards::Guards;
use covlab_core::oracle::{literal_mu, literal_omega};
use covlab_core::{sample, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn exact_invariants_match_literal_definitions() {
    let guards = Guards::default();
    let mut r = ChaCha8Rng::seed_from_u64(5);
    for i in 0..60 {
        let n = r.gen_range(1..=4);
        let d = sample::dynamical_instance(&mut r, n, 2, &guards).unwrap();
        let mu = exact_mu(&d, &guards).unwrap();
        let omega = exact_omega(&d, &guards).unwrap();
        assert_eq!(mu.value, literal_mu(&d).unwrap(), "instance {i}");
        assert_eq!(
            omega.value(),
            Some(literal_omega(&d).unwrap()),
            "instance {i}"
        );
        let report = check_inequalities(&d, &guards).unwrap();
        assert!(report.holds());
        let one = Rational::from_integer(1);
        assert!(omega.upper >= one && omega.upper <= Rational::from_integer(2));
    }
}
