mod common;

use common::*;
use gkz_core::apex::conjugate_multipliers;
use gkz_core::scalar::rat;
use gkz_core::{GkzSystem, ParameterVector};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn block_search_matches_box_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, cfg) in shipped() {
        let sys = GkzSystem::new(cfg.clone()).unwrap();
        let trials = if name == "appell-f2" { 6 } else { 60 };
        for _ in 0..trials {
            let alpha = random_alpha(&mut rng, cfg.rank(), 12);
            let fast = sys.apex_points(&alpha).apex_points;
            let slow = brute_force_apex(&cfg, &alpha, 1);
            assert_eq!(fast, slow, "{name} alpha={:?}", alpha.values());
        }
    }
}

#[test]
fn box_scan_on_appell_parameters() {
    let cfg = appell_f2();
    let alpha = ParameterVector::from_fractions(&[(1, 10), (7, 10), (9, 10), (3, 5), (1, 5)]);
    let sys = GkzSystem::new(cfg.clone()).unwrap();
    for k in [1, 3, 7, 9] {
        let a = alpha.scale(&BigInt::from(k));
        assert_eq!(
            sys.apex_points(&a).apex_points,
            brute_force_apex(&cfg, &a, 1)
        );
    }
}

#[test]
fn signature_bounded_by_volume_and_shift_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, cfg) in shipped() {
        let sys = GkzSystem::new(cfg.clone()).unwrap();
        let vol: usize = sys.volume().try_into().unwrap();
        let mut maximal_seen = false;
        for _ in 0..500 {
            let alpha = random_alpha(&mut rng, cfg.rank(), 12);
            let s = sys.signature(&alpha);
            assert!(s <= vol, "{name}: {s} > {vol}");
            maximal_seen |= s == vol;
            let z: Vec<BigInt> = (0..cfg.rank())
                .map(|_| BigInt::from(rand::Rng::gen_range(&mut rng, -4..5)))
                .collect();
            assert_eq!(sys.signature(&alpha.shift(&z)), s, "{name}");
        }
        assert!(maximal_seen, "{name}: maximal signature never attained");
    }
}

#[test]
fn apex_points_lie_in_shifted_lattice_and_satisfy_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (_, cfg) in shipped() {
        let sys = GkzSystem::new(cfg.clone()).unwrap();
        let cone = CaratheodoryCone::new(&cfg);
        for _ in 0..40 {
            let alpha = random_alpha(&mut rng, cfg.rank(), 9);
            let rep = sys.apex_points(&alpha);
            assert_eq!(rep.signature, rep.apex_points.len());
            for p in &rep.apex_points {
                assert!(p
                    .iter()
                    .zip(alpha.values())
                    .all(|(x, a)| (x - a).is_integer()));
                assert!(cone.contains(p));
            }
            let mut sorted = rep.apex_points.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted, rep.apex_points);
        }
    }
}

#[test]
fn gauss_signature_matches_interlacing_per_conjugate() {
    let sys = GkzSystem::new(gauss()).unwrap();
    let grid = fractions(10);
    let mut irreducible = 0usize;
    for a in &grid {
        for b in &grid {
            if b < a {
                continue;
            }
            for c in &grid {
                let alpha = gauss_alpha(a, b, c);
                let irr = sys.is_irreducible(&alpha);
                assert_eq!(
                    irr,
                    gauss_irreducible(a, b, c),
                    "irreducibility {a} {b} {c}"
                );
                if !irr {
                    continue;
                }
                irreducible += 1;
                let d = alpha.denominator();
                for k in conjugate_multipliers(d) {
                    let s = sys.signature(&alpha.scale(&k));
                    assert_eq!(s == 2, interlaces(a, b, c, &k), "a={a} b={b} c={c} k={k}");
                }
            }
        }
    }
    assert!(irreducible > 1000);
}

#[test]
fn gauss_examples_against_interlacing() {
    let sys = GkzSystem::new(gauss()).unwrap();
    let cases = [
        ((1, 6), (5, 6), (1, 2), true),
        ((1, 3), (2, 3), (1, 5), false),
    ];
    for ((an, ad), (bn, bd), (cn, cd), expect) in cases {
        let (a, b, c) = (rat(an, ad), rat(bn, bd), rat(cn, cd));
        let alpha = gauss_alpha(&a, &b, &c);
        let all = conjugate_multipliers(alpha.denominator())
            .iter()
            .all(|k| interlaces(&a, &b, &c, k));
        assert_eq!(all, expect);
        assert_eq!(sys.decide_algebraic(&alpha).algebraic, expect);
    }
}

#[test]
fn conjugates_are_the_units_mod_d() {
    for d in 1..60u32 {
        let ks = conjugate_multipliers(&BigInt::from(d));
        let expect: Vec<BigInt> = if d == 1 {
            vec![BigInt::one()]
        } else {
            (1..d)
                .filter(|k| k.gcd(&d) == 1)
                .map(BigInt::from)
                .collect()
        };
        assert_eq!(ks, expect);
    }
}
