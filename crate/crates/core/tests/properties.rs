use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use trunc_spaces::embeddings::{embeds, Status};
use trunc_spaces::gm::gm_check;
use trunc_spaces::interpolation::{k_functional, WeightedLqPair};
use trunc_spaces::params::{
    canonicalize_descriptor, conjugate_exponent, dual_descriptor, lift_descriptor, parse_descriptor, Exponent, Num,
    SpaceDescriptor,
};
use trunc_spaces::sequences::{block_of, lift_sequence, rearrange, rearranged_values, ScalarSequence};
use trunc_spaces::verify::{confirm_embedding, falsify_embedding, random_sequence, Target};

const EXPS: &[&str] = &["1/2", "1", "3/2", "2", "3", "inf"];

fn exp() -> impl Strategy<Value = Exponent> {
    (0..EXPS.len()).prop_map(|i| Exponent::parse(EXPS[i]).unwrap())
}

fn finite_exp() -> impl Strategy<Value = Exponent> {
    (0..EXPS.len() - 1).prop_map(|i| Exponent::parse(EXPS[i]).unwrap())
}

fn above_one() -> impl Strategy<Value = Exponent> {
    (1i64..=4).prop_flat_map(|den| (den + 1..=6 * den).prop_map(move |n| Exponent::ratio(n, den)))
}

fn num() -> impl Strategy<Value = Num> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| Num::ratio(n, d))
}

fn nonzero() -> impl Strategy<Value = Num> {
    num().prop_map(|b| if b.is_zero() { Num::ratio(1, 3) } else { b })
}

/// TB with d = 1 on the small grid, b ≠ 0.
fn tb() -> impl Strategy<Value = SpaceDescriptor> {
    (num(), exp(), exp(), exp(), nonzero()).prop_map(|(s, p, q, r, b)| SpaceDescriptor::tb(s, p, q, r, b, 1))
}

fn tb_or_tf() -> impl Strategy<Value = SpaceDescriptor> {
    (any::<bool>(), num(), exp(), finite_exp(), exp(), nonzero()).prop_map(|(tf, s, q, p, r, b)| {
        if tf {
            SpaceDescriptor::tf(s, p, q, r, b, 1)
        } else {
            SpaceDescriptor::tb(s, p, q, r, b, 1)
        }
    })
}

/// The classical B ↪ B table, stated directly.
fn classical_oracle(a: &SpaceDescriptor, b: &SpaceDescriptor) -> bool {
    if a.p.gt(&b.p) {
        return false;
    }
    let (ia, ib) = (a.sobolev_index(), b.sobolev_index());
    if ia.gt(&ib) {
        return true;
    }
    if !ia.eq_num(&ib) {
        return false;
    }
    if a.q.le(&b.q) {
        a.b.ge(&b.b)
    } else {
        a.b.add(&a.q.reciprocal()).gt(&b.b.add(&b.q.reciprocal()))
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn reflexive(d in tb_or_tf()) {
        prop_assert_eq!(embeds(&d, &d).unwrap().status, Status::Holds);
    }

    #[test]
    fn transitive(a in tb(), b in tb(), c in tb()) {
        let ab = embeds(&a, &b).unwrap().status;
        let bc = embeds(&b, &c).unwrap().status;
        if ab == Status::Holds && bc == Status::Holds {
            prop_assert_ne!(embeds(&a, &c).unwrap().status, Status::Fails);
        }
    }

    #[test]
    fn transitive_through_neighbour(a in tb(), ds in num(), db in num()) {
        // a nearby middle space makes the Holds/Holds case common
        let b = a.with_s(a.s.sub(&ds.half().half())).with_b(a.b.sub(&db.half()));
        let c = b.with_s(b.s.sub(&ds.half().half())).with_b(b.b.sub(&db.half()));
        prop_assume!(!b.b.is_zero() && !c.b.is_zero());
        let ab = embeds(&a, &b).unwrap().status;
        let bc = embeds(&b, &c).unwrap().status;
        if ab == Status::Holds && bc == Status::Holds {
            prop_assert_ne!(embeds(&a, &c).unwrap().status, Status::Fails);
        }
    }

    #[test]
    fn monotone_in_target_b(a in tb_or_tf(), t in tb_or_tf(), drop in 1i64..8) {
        let t = t.with_s(a.s.sub(&a.p.reciprocal()).add(&t.p.reciprocal()));
        let lower = t.with_b(t.b.sub(&Num::ratio(drop, 4)));
        prop_assume!(!lower.b.is_zero());
        let (hi, lo) = (embeds(&a, &t), embeds(&a, &lower));
        prop_assume!(hi.is_ok() && lo.is_ok());
        if hi.unwrap().status == Status::Holds {
            let lo = lo.unwrap();
            prop_assert_eq!(lo.status, Status::Holds, "{} -> {} ({}): {:?}", a, lower, t, lo);
        }
    }

    #[test]
    fn classical_table(s0 in num(), b0 in nonzero(), p0 in exp(), q0 in exp(),
                       off in -2i64..=2, b1 in nonzero(), p1 in exp(), q1 in exp()) {
        let a = SpaceDescriptor::besov(s0.clone(), b0, p0.clone(), q0, 1);
        let s1 = s0.sub(&p0.reciprocal()).add(&p1.reciprocal()).add(&Num::ratio(off, 4));
        let b = SpaceDescriptor::besov(s1, b1, p1, q1, 1);
        let got = embeds(&a, &b).unwrap().status;
        prop_assert_eq!(got == Status::Holds, classical_oracle(&a, &b), "{} -> {}: {:?}", a, b, got);
        prop_assert_ne!(got, Status::UnknownPerPaper);
    }

    #[test]
    fn fails_have_runnable_witness(a in tb_or_tf(), t in tb_or_tf()) {
        let v = embeds(&a, &t);
        prop_assume!(v.is_ok());
        let v = v.unwrap();
        if v.status == Status::Fails {
            prop_assert!(v.witness.is_some() && v.witness_kind.is_some());
            let run = falsify_embedding(&a, &Target::Space(t.clone()), &[16, 32]);
            prop_assert!(run.is_ok(), "{} -> {}: {:?}", a, t, run);
        }
    }

    #[test]
    fn dual_involution(tf in any::<bool>(), s in num(), p in above_one(), q in above_one(), r in above_one(), b in nonzero()) {
        let x = if tf { SpaceDescriptor::tf(s, p, q, r, b, 2) } else { SpaceDescriptor::tb(s, p, q, r, b, 2) };
        let back = dual_descriptor(&dual_descriptor(&x).unwrap()).unwrap();
        prop_assert_eq!(back.to_string(), x.to_string());
    }

    #[test]
    fn conjugate_involution(p in prop_oneof![above_one(), Just(Exponent::int(1)), Just(Exponent::parse("inf").unwrap())]) {
        prop_assert_eq!(conjugate_exponent(&conjugate_exponent(&p)), p);
    }

    #[test]
    fn canonicalize_idempotent(d in tb_or_tf(), which in 0..3, b in num(), p in finite_exp(), q in exp()) {
        let x = match which {
            0 => d,
            1 => SpaceDescriptor::besov(d.s.clone(), b, p, q, 1),
            _ => SpaceDescriptor::bdiff_zero(q.reciprocal().neg().add(&Num::ratio(1, 2)).add(&b.max(Num::zero())), p, q, 1),
        };
        let once = canonicalize_descriptor(&x).unwrap().desc;
        prop_assert_eq!(canonicalize_descriptor(&once).unwrap().desc, once);
    }

    #[test]
    fn lift_inverse(d in tb_or_tf(), sigma in num()) {
        let there = lift_descriptor(&d, &sigma).unwrap();
        prop_assert_eq!(lift_descriptor(&there, &sigma.neg()).unwrap(), d);
    }

    #[test]
    fn display_reparses(d in tb_or_tf()) {
        prop_assert_eq!(parse_descriptor(&d.to_string()).unwrap(), d);
    }

    #[test]
    fn lift_sequence_inverse(seed in any::<u64>(), sigma in -3.0f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_sequence(&mut rng, 2, 20, 1 << 10, 6);
        let back = lift_sequence(&lift_sequence(&x, sigma), -sigma);
        for ((k0, v0), (k1, v1)) in x.entries().zip(back.entries()) {
            prop_assert_eq!(k0, k1);
            prop_assert!((v0 - v1).abs() <= 1e-12 * v0.abs());
        }
    }

    #[test]
    fn rearrange_matches_sort(v in prop::collection::vec(-100.0f64..100.0, 0..64)) {
        let a = ScalarSequence::from_values(&v);
        let mut oracle: Vec<f64> = v.iter().filter(|x| **x != 0.0).map(|x| x.abs()).collect();
        oracle.sort_by(|x, y| y.partial_cmp(x).unwrap());
        prop_assert_eq!(rearranged_values(&a), oracle);
        prop_assert_eq!(rearrange(&rearrange(&a)), rearrange(&a));
    }

    #[test]
    fn monotone_sequences_are_gm(v in prop::collection::vec(0.001f64..100.0, 1..128)) {
        let mut v = v;
        v.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let n = v.len() as u64;
        let rep = gm_check(&ScalarSequence::from_values(&v), n);
        prop_assert!(rep.is_gm && rep.constant <= 1.0 + 1e-12);
    }

    #[test]
    fn k_functional_monotone(x in prop::collection::vec(0.0f64..10.0, 1..24), t0 in -8.0f64..8.0, dt in 0.0f64..4.0, q in exp()) {
        let pair = WeightedLqPair::new(0.0, 1.0, q).unwrap();
        let (t, u) = (t0.exp2(), (t0 + dt).exp2());
        let (kt, ku) = (k_functional(&x, t, &pair).value, k_functional(&x, u, &pair).value);
        prop_assert!(kt <= ku * (1.0 + 1e-12));
        prop_assert!(ku <= (u / t) * kt * (1.0 + 1e-12));
    }
}

#[test]
fn blocks_partition_levels() {
    let mut k = 0;
    for j in 0..(1u64 << 20) {
        let b = block_of(j);
        assert!(b.k == k || b.k == k + 1);
        k = b.k;
        assert!((1u64 << b.k) - 1 <= j && j <= (1u64 << (b.k + 1)) - 2);
    }
}

#[test]
fn harness_is_deterministic() {
    let a = parse_descriptor("TB(s=1,p=2,q=1,r=1,b=1/2,d=1)").unwrap();
    let t = Target::Space(parse_descriptor("TB(s=1,p=2,q=2,r=2,b=1/4,d=1)").unwrap());
    let x = confirm_embedding(&a, &t, 8, 256, 99).unwrap();
    let y = confirm_embedding(&a, &t, 8, 256, 99).unwrap();
    assert_eq!(x, y);
}
