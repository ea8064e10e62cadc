//! Seeded byte-level mutations of the fuzz corpus: loading either fails
//! cleanly or yields an instance that survives a save/load round trip.

use std::path::Path;

use covlab_cli::instance::{parse, GridSpec};
use covlab_core::guards::Guards;
use covlab_core::perm::parse_perm;
use covlab_core::rational::{format_rational, parse_rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ROUNDS: usize = 400;
const ALPHABET: &[u8] = b"0123456789-/:,[]{}\" abtrue";

fn corpus(target: &str) -> Vec<Vec<u8>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut seeds: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| std::fs::read(e.unwrap().path()).unwrap())
        .collect();
    seeds.sort();
    seeds
}

fn mutate(rng: &mut ChaCha8Rng, seed: &[u8]) -> String {
    let mut bytes = seed.to_vec();
    for _ in 0..rng.gen_range(1..=4) {
        let c = ALPHABET[rng.gen_range(0..ALPHABET.len())];
        match rng.gen_range(0..3) {
            0 if !bytes.is_empty() => {
                let i = rng.gen_range(0..bytes.len());
                bytes[i] = c;
            }
            1 if !bytes.is_empty() => {
                bytes.remove(rng.gen_range(0..bytes.len()));
            }
            _ => bytes.insert(rng.gen_range(0..=bytes.len()), c),
        }
    }
    String::from_utf8_lossy(&bytes).into_owned()
}

fn each_mutation(target: &str, mut check: impl FnMut(&str)) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for seed in corpus(target) {
        for _ in 0..ROUNDS {
            check(&mutate(&mut rng, &seed));
        }
    }
}

#[test]
fn instance_documents() {
    let guards = Guards {
        ground: 16,
        group_cap: 720,
        ..Guards::default()
    };
    let mut accepted = 0;
    each_mutation("instance_json", |text| {
        if let Ok(inst) = parse(text, &guards) {
            accepted += 1;
            let again = parse(&inst.to_json(), &guards).expect("saved instance reloads");
            assert_eq!(inst.to_json(), again.to_json());
        }
    });
    assert!(accepted > 0);
}

#[test]
fn rationals() {
    each_mutation("rational", |text| {
        if let Ok(r) = parse_rational(text) {
            assert!(*r.denom() > 0);
            assert_eq!(parse_rational(&format_rational(&r)), Ok(r));
        }
    });
}

#[test]
fn permutations() {
    each_mutation("permutation", |text| {
        if let Ok(p) = parse_perm(text) {
            assert_eq!(parse_perm(&p.to_string()).unwrap(), p);
            assert!(p.compose(&p.inverse()).is_identity());
        }
    });
}

#[test]
fn grids() {
    each_mutation("grid", |text| {
        if let Ok(spec) = GridSpec::parse(text) {
            if let Ok(grid) = spec.grid() {
                assert!(grid.radii().windows(2).all(|w| w[0] > w[1]));
            }
        }
    });
}
