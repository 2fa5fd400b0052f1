mod common;

use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cases() -> Vec<(&'static str, asdim_core::Group, Oracle, usize)> {
    vec![
        ("F2", group("f2.toml"), sanov(), 6),
        ("Z2*Z3", group("z2_z3.toml"), modular(), 8),
        ("Z^2", asdim_core::Group::from_spec(&asdim_core::GroupSpec::free_abelian(&["a", "b"])).unwrap(), abelianization(), 6),
        ("trefoil", group("trefoil.toml"), burau_trefoil(), 6),
        ("BS(1,2)", group("bs12.toml"), affine_bs12(), 6),
    ]
}

#[test]
fn random_words_agree_with_representations() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, g, oracle, _) in cases() {
        let r = check_normal_forms(&g, &oracle, &mut rng, 10_000);
        assert_eq!(r.mismatches(), 0, "{name}: {r:?}");
    }
}

#[test]
fn short_words_partition_like_representations() {
    for (name, g, oracle, len) in cases() {
        assert_eq!(exhaustive_mismatches(&g, &oracle, len), 0, "{name}");
    }
}

#[test]
fn racg_matches_move_closure() {
    let g = square_racg();
    let commute = |s: usize, t: usize| (s + 1) % 4 == t || (t + 1) % 4 == s;
    for w in all_words(&g, 8) {
        assert_eq!(g.reduce_word(&w), racg_closure(commute, &w), "{w:?}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let r = check_normal_forms(&g, &abelianization_mod2(), &mut rng, 10_000);
    assert_eq!(r.idempotence + r.multiplicativity, 0, "{r:?}");
}

fn abelianization_mod2() -> Oracle {
    Box::new(|g, w| {
        let mut v = vec![0u8; g.rank()];
        for l in w {
            v[l.generator()] ^= 1;
        }
        format!("{v:?}")
    })
}
