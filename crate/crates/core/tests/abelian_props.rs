mod common;

use num_bigint::BigInt;
use proptest::prelude::*;
use z2coh::abelian::{
    present, exact_sequence_constrain, ext_group, extension_candidates, is_exact_at, is_isomorphic, SequenceTemplate,
};
use z2coh::{FgAbelianGroup, GroupHom, IntMatrix};

use common::{extensions_by_search, groups_of_order, invariants_by_minors};

fn group() -> impl Strategy<Value = FgAbelianGroup> {
    (0usize..3, prop::collection::vec(0i64..13, 0..4)).prop_map(|(r, c)| FgAbelianGroup::from_small(r, &c))
}

fn finite_group() -> impl Strategy<Value = FgAbelianGroup> {
    prop::collection::vec(1i64..7, 1..4).prop_map(|c| FgAbelianGroup::from_small(0, &c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Canonicalizing a diagonal list agrees with the Smith form of the
    /// diagonal matrix and with its determinantal divisors.
    #[test]
    fn diagonal_canonicalization(c in prop::collection::vec(-40i64..40, 0..7)) {
        let g = FgAbelianGroup::from_small(0, &c);
        let d: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        let n = d.len();
        prop_assert_eq!(&present(n, &IntMatrix::diagonal(n, n, &d)).group, &g);
        let rows: Vec<Vec<BigInt>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { d[i].clone() } else { BigInt::from(0) }).collect()).collect();
        let inv: Vec<BigInt> = invariants_by_minors(&rows, n).into_iter().filter(|x| *x != BigInt::from(1)).collect();
        let zeros = c.iter().filter(|&&x| x == 0).count();
        prop_assert_eq!(g.rank(), zeros);
        prop_assert_eq!(g.torsion(), &inv[..]);
    }

    #[test]
    fn canonical_form_is_idempotent(g in group()) {
        let again = FgAbelianGroup::new(g.rank(), g.torsion());
        prop_assert_eq!(&again, &g);
        let parsed: FgAbelianGroup = g.to_string().parse().unwrap();
        prop_assert_eq!(&parsed, &g);
        for w in g.torsion().windows(2) {
            prop_assert!((&w[1] % &w[0]) == BigInt::from(0));
        }
        prop_assert!(g.torsion().iter().all(|t| *t > BigInt::from(1)));
    }

    #[test]
    fn json_round_trip(g in group()) {
        let s = serde_json::to_string(&g).unwrap();
        let back: FgAbelianGroup = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    /// `0 → im f → B → coker f → 0` for a random `f: Z^k → B`.
    #[test]
    fn random_short_exact_sequences(b in finite_group(), k in 1usize..3, seed in prop::collection::vec(-6i64..7, 9)) {
        let src = FgAbelianGroup::free(k);
        let rows: Vec<Vec<i64>> = (0..b.ngens()).map(|i| (0..k).map(|j| seed[(i * k + j) % seed.len()]).collect()).collect();
        let f = GroupHom::new(src, b.clone(), IntMatrix::from_rows_with_cols(&rows, k)).unwrap();
        let image = f.image();
        let coker = f.cokernel();
        prop_assert!(image.inclusion.is_injective());
        prop_assert!(coker.projection.is_surjective());
        prop_assert!(is_exact_at(&image.inclusion, &coker.projection).unwrap());
        let (a, c) = (image.group.clone(), coker.group.clone());
        prop_assert_eq!(a.order().unwrap() * c.order().unwrap(), b.order().unwrap());
        let middles = extension_candidates(&c, &a).unwrap();
        prop_assert!(middles.contains(&b), "{} not among extensions of {} by {}", b, c, a);
        let constrained = exact_sequence_constrain(&SequenceTemplate::short(a, c)).unwrap();
        prop_assert!(constrained.iter().any(|(slot, set)| *slot == 2 && set.contains(&b)));
    }

    #[test]
    fn first_isomorphism_theorem(b in finite_group(), a in finite_group(), seed in prop::collection::vec(-6i64..7, 9)) {
        let rows: Vec<Vec<i64>> = (0..b.ngens()).map(|i| (0..a.ngens()).map(|j| seed[(i * 3 + j) % seed.len()]).collect()).collect();
        let m = IntMatrix::from_rows_with_cols(&rows, a.ngens());
        // Only well-defined matrices are homomorphisms; skip the others.
        if let Ok(f) = GroupHom::new(a.clone(), b, m) {
            let ker = f.kernel().group;
            let im = f.image().group;
            prop_assert_eq!(ker.order().unwrap() * im.order().unwrap(), a.order().unwrap());
            prop_assert!(is_exact_at(&f.kernel().inclusion, &f).unwrap());
        }
    }
}

#[test]
fn ext_of_cyclics_is_gcd() {
    for m in 1..10i64 {
        for n in 1..10i64 {
            let e = ext_group(&FgAbelianGroup::cyclic(m), &FgAbelianGroup::cyclic(n));
            assert!(is_isomorphic(&e, &FgAbelianGroup::cyclic(num_integer::gcd(m, n))), "Ext(Z_{m}, Z_{n}) = {e}");
        }
    }
    assert!(ext_group(&FgAbelianGroup::free(2), &FgAbelianGroup::cyclic(5)).is_trivial());
}

#[test]
fn extension_candidates_match_exhaustive_search() {
    for total in 1..=24u64 {
        for a in 1..=total {
            if total % a != 0 {
                continue;
            }
            for sub in groups_of_order(a) {
                for quotient in groups_of_order(total / a) {
                    let fast = extension_candidates(&quotient, &sub).unwrap();
                    let slow = extensions_by_search(&quotient, &sub);
                    assert_eq!(fast, slow, "extensions of {quotient} by {sub}");
                }
            }
        }
    }
}

#[test]
fn cyclic_by_two_extensions() {
    for q in 1..=3i64 {
        let set = extension_candidates(&FgAbelianGroup::cyclic(2 * q), &FgAbelianGroup::cyclic(2)).unwrap();
        let expected: std::collections::BTreeSet<_> =
            [FgAbelianGroup::from_small(0, &[2, 2 * q]), FgAbelianGroup::cyclic(4 * q)].into_iter().collect();
        assert_eq!(set, expected);
    }
}

#[test]
fn group_strings() {
    for (s, want) in [("0", "0"), ("Z^2 ⊕ Z_4 ⊕ Z_6", "Z^2 ⊕ Z_2 ⊕ Z_12"), ("Z2", "Z_2"), ("Z_2^3", "Z_2 ⊕ Z_2 ⊕ Z_2")] {
        let g: FgAbelianGroup = s.parse().unwrap();
        assert_eq!(g.to_string(), want);
    }
    assert!("Z_x".parse::<FgAbelianGroup>().is_err());
}
