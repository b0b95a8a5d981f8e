//! Cross-module invariants as property tests. Inputs are drawn from a
//! proptest-chosen seed so shrinking reports a reproducible seed.

use std::collections::BTreeSet;

use num_rational::Ratio;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{radius_ok, TradeoffQuery};
use crate::channel::{measure, transmit, within, ChannelSpec};
use crate::gf::{as_base_vector, make_field, FieldCtx};
use crate::kk::{unique_fit, KkParams};
use crate::lfrs::{self, LfrsParams};
use crate::linalg;
use crate::linpoly::LinPoly;
use crate::mv::MvParams;
use crate::subspace::Subspace;

fn field_for(choice: u8) -> FieldCtx {
    match choice % 4 {
        0 => make_field(2, 5),
        1 => make_field(3, 3),
        2 => make_field(5, 2),
        _ => make_field(2, 8),
    }
    .unwrap()
}

fn random_poly(f: &FieldCtx, len: usize, rng: &mut ChaCha8Rng) -> LinPoly {
    LinPoly::new((0..len).map(|_| f.random(rng)).collect())
}

/// Independent `dim(U ∩ V)` by the dimension law on a stacked rank.
fn meet_by_rank(u: &Subspace, v: &Subspace) -> usize {
    let stacked: Vec<Vec<u32>> = u.basis().iter().chain(v.basis()).cloned().collect();
    u.dim() + v.dim() - linalg::rank(&linalg::PrimeField::new(u.q()), &stacked)
}

proptest! {
    #[test]
    fn field_axioms(choice: u8, seed: u64) {
        let f = field_for(choice);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
        prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
        if !a.is_zero() {
            prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
        }
    }

    #[test]
    fn frobenius_is_an_automorphism(choice: u8, seed: u64) {
        let f = field_for(choice);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (f.random(&mut rng), f.random(&mut rng));
        prop_assert_eq!(f.frobenius(&f.add(&x, &y), 1), f.add(&f.frobenius(&x, 1), &f.frobenius(&y, 1)));
        prop_assert_eq!(f.frobenius(&f.mul(&x, &y), 1), f.mul(&f.frobenius(&x, 1), &f.frobenius(&y, 1)));
        prop_assert_eq!(f.frobenius(&x, f.degree()), x);
    }

    #[test]
    fn base_coordinates_invert_combination(choice: u8, seed: u64) {
        let f = field_for(choice);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis = f.conjugates(&f.find_normal_element(seed % 50).unwrap(), f.degree());
        let u: Vec<u32> = (0..f.degree()).map(|_| rng.gen_range(0..f.q())).collect();
        let x = u.iter().zip(&basis).fold(f.zero(), |acc, (&c, b)| f.add(&acc, &f.scale(c, b)));
        prop_assert_eq!(as_base_vector(&f, &x, &basis).unwrap(), u);
    }

    #[test]
    fn composition_evaluates_as_composition(choice: u8, seed: u64, l1 in 0usize..4, l2 in 0usize..4) {
        let f = field_for(choice);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, g) = (random_poly(&f, l1, &mut rng), random_poly(&f, l2, &mut rng));
        let x = f.random(&mut rng);
        prop_assert_eq!(
            p.compose(&f, &g).eval(&f, &x).unwrap(),
            p.eval(&f, &g.eval(&f, &x).unwrap()).unwrap()
        );
        prop_assert_eq!(
            p.add(&f, &g).eval(&f, &x).unwrap(),
            f.add(&p.eval(&f, &x).unwrap(), &g.eval(&f, &x).unwrap())
        );
    }

    #[test]
    fn root_space_is_small(choice: u8, seed: u64, len in 1usize..6) {
        let f = field_for(choice);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_poly(&f, len, &mut rng);
        if let Some(k) = p.qdeg() {
            prop_assert!(p.root_space(&f).unwrap().dim() <= k);
        }
    }

    #[test]
    fn frobenius_shift_roundtrip(choice: u8, seed: u64, j in 0usize..3, len in 0usize..4) {
        let f = field_for(choice);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut coeffs = vec![f.zero(); j];
        coeffs.extend((0..len).map(|_| f.random(&mut rng)));
        let p = LinPoly::new(coeffs);
        let shifted = p.frobenius_shift(&f, j).unwrap();
        prop_assert_eq!(shifted.frobenius_unshift(&f, j), p);
    }

    #[test]
    fn subspace_laws(q in prop::sample::select(vec![2u32, 3, 5]), n in 1usize..7, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = Subspace::random(q, n, rng.gen_range(0..=n), &mut rng).unwrap();
        let v = Subspace::random(q, n, rng.gen_range(0..=n), &mut rng).unwrap();
        prop_assert_eq!(Subspace::span(q, n, u.basis().to_vec()).unwrap(), u.clone());
        let (s, i) = (u.sum(&v).unwrap(), u.intersect(&v).unwrap());
        prop_assert_eq!(s.dim() + i.dim(), u.dim() + v.dim());
        prop_assert_eq!(i.dim(), meet_by_rank(&u, &v));
        prop_assert!(i.is_subspace_of(&u).unwrap() && i.is_subspace_of(&v).unwrap());
        prop_assert!(u.is_subspace_of(&s).unwrap() && v.is_subspace_of(&s).unwrap());
    }

    #[test]
    fn channel_realizes_its_request(seed: u64, r in 0usize..4, t in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = Subspace::random(2, 8, 3, &mut rng).unwrap();
        let r = r.min(3);
        let out = transmit(&v, &ChannelSpec::random(r, t), &mut rng).unwrap();
        prop_assert_eq!(out.received.dim(), v.dim() - r + t);
        prop_assert_eq!((out.realized_insertions, out.realized_deletions), (t, r));
        let meet = meet_by_rank(&v, &out.received);
        prop_assert_eq!(measure(&v, &out.received).unwrap(), (out.received.dim() - meet, v.dim() - meet));
    }

    #[test]
    fn channel_errors_accumulate(seed: u64, r1 in 0usize..2, t1 in 0usize..2, r2 in 0usize..2, t2 in 0usize..2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = Subspace::random(3, 7, 3, &mut rng).unwrap();
        let a = transmit(&v, &ChannelSpec::random(r1, t1), &mut rng).unwrap().received;
        let r2 = r2.min(a.dim());
        let b = transmit(&a, &ChannelSpec::random(r2, t2), &mut rng).unwrap().received;
        let (ti, rd) = measure(&v, &b).unwrap();
        prop_assert!(ti <= t1 + t2 && rd <= r1 + r2);
    }

    #[test]
    fn radius_ok_is_monotone(a in 0i64..20, b in 0i64..20, l in 0i64..6, c in 0i64..20) {
        let q = TradeoffQuery::new(Ratio::new(a, 7), Ratio::new(b, 9), l, Ratio::new(c, 40)).unwrap();
        if radius_ok(&q, false) {
            let smaller = TradeoffQuery { tau: q.tau / 2, rho: q.rho / 2, rate: q.rate / 2, ..q };
            let larger = TradeoffQuery { list_size: l + 1, ..q };
            prop_assert!(radius_ok(&smaller, false));
            prop_assert!(radius_ok(&larger, false));
            prop_assert!(radius_ok(&q, true));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lfrs_list_is_basis_independent_and_sound(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = LfrsParams::generate(2, 6, 4, 2, 2, seed % 8).unwrap();
        let region: Vec<(usize, usize)> = (0..=4)
            .flat_map(|r| (0..6).map(move |t| (t, r)))
            .filter(|&(t, r)| p.within_radius(t, r))
            .collect();
        let (t, r) = region[rng.gen_range(0..region.len())];
        let msg: Vec<u32> = (0..2).map(|_| rng.gen_range(0..2)).collect();
        let v = p.encode(&msg).unwrap();
        let received = transmit(&v, &ChannelSpec::random(r, t), &mut rng).unwrap().received;
        let out = p.decode(&received, t, r).unwrap();
        for m in out.verified_messages() {
            prop_assert!(within(&p.encode(&m).unwrap(), &received, t, r).unwrap());
        }

        // Same space, scrambled basis.
        let other = loop {
            let rows: Vec<Vec<u32>> = (0..received.dim()).map(|_| received.random_vector_in(&mut rng)).collect();
            if Subspace::span(2, p.ambient_dim(), rows.clone()).unwrap() == received {
                break rows;
            }
        };
        let q = lfrs::normalize_shift(p.field(), p.interpolate(&other, t, r).unwrap()).unwrap();
        let alt = lfrs::recover(p.field(), p.gamma(), p.k(), &q);
        let alt_verified: Vec<Vec<u32>> = alt
            .candidates
            .into_iter()
            .filter(|m| within(&p.encode(m).unwrap(), &received, t, r).unwrap())
            .collect();
        prop_assert_eq!(alt_verified, out.verified_messages());
    }

    #[test]
    fn candidates_are_affinely_closed(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = LfrsParams::generate(3, 5, 4, 3, 3, seed % 5).unwrap();
        let received = Subspace::random(3, p.ambient_dim(), rng.gen_range(2..=6), &mut rng).unwrap();
        let ell = 4i64;
        let d = received.dim() as i64;
        let claims: Vec<(usize, usize)> = (0..=4)
            .filter_map(|r| {
                let t = d - ell + r as i64;
                (t >= 0 && p.within_radius(t as usize, r)).then_some((t as usize, r))
            })
            .collect();
        prop_assume!(!claims.is_empty());
        let (t, r) = claims[rng.gen_range(0..claims.len())];
        let out = p.decode(&received, t, r).unwrap();
        let set: BTreeSet<Vec<u32>> = out.candidates.iter().cloned().collect();
        prop_assert!(set.len() <= 9);
        for a in &set {
            for b in &set {
                for c in &set {
                    for lambda in 0..3u32 {
                        let combo: Vec<u32> = (0..3)
                            .map(|i| (a[i] + lambda * ((b[i] + 3 - c[i]) % 3)) % 3)
                            .collect();
                        prop_assert!(set.contains(&combo));
                    }
                }
            }
        }
    }

    #[test]
    fn unique_fit_is_a_bijection(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = KkParams::generate(2, 5, 3, 2, 2, seed % 16).unwrap();
        let f = p.field();
        let a = &p.alphas()[rng.gen_range(0..3)];
        let y = f.random(&mut rng);
        prop_assert_eq!(unique_fit(f, a, &y).unwrap().eval(f, a).unwrap(), y);
        let digits: Vec<u32> = (0..5).map(|_| rng.gen_range(0..2)).collect();
        let g = LinPoly::from_base_coeffs(f, &digits);
        prop_assert_eq!(unique_fit(f, a, &g.eval(f, a).unwrap()).unwrap(), g);
    }

    #[test]
    fn kk_manufactured_span_contains_true_folded_vector(seed: u64, t in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = KkParams::generate(2, 5, 3, 2, 3, seed % 16).unwrap();
        let f = p.field();
        let msg: Vec<u32> = (0..2).map(|_| rng.gen_range(0..2)).collect();
        let poly = LinPoly::from_base_coeffs(f, &msg);
        let v = p.encode(&msg).unwrap();
        let received = transmit(&v, &ChannelSpec::random(0, t), &mut rng).unwrap().received;
        let made = p.manufacture(&p.project_components(&received).unwrap()).unwrap();
        for (i, points) in made.iter().enumerate() {
            let flat = |ys: &[crate::gf::FieldElem]| ys.iter().flat_map(|y| y.coeffs().to_vec()).collect::<Vec<u32>>();
            let span = Subspace::span(2, 15, points.iter().map(|pt| flat(&pt.ys)).collect()).unwrap();
            let truth: Vec<_> = f
                .conjugates(p.gamma(), 3)
                .iter()
                .map(|g| poly.eval(f, &f.mul(g, &p.alphas()[i])).unwrap())
                .collect();
            prop_assert!(span.contains(&flat(&truth)).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn mv_twisted_span_contains_true_tuple(seed: u64, t in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = MvParams::build(5, 2, 4, 2, 2, seed % 4).unwrap();
        let f = p.field();
        let msg: Vec<u32> = (0..2).map(|_| rng.gen_range(0..5)).collect();
        let poly = LinPoly::from_base_coeffs(f, &msg);
        let v = p.encode(&msg).unwrap();
        let received = transmit(&v, &ChannelSpec::random(0, t), &mut rng).unwrap().received;
        let points = p.manufacture_twisted(&p.project_components(&received).unwrap()).unwrap();
        let flat = |ys: &[crate::gf::FieldElem]| ys.iter().flat_map(|y| y.coeffs().to_vec()).collect::<Vec<u32>>();
        for (i, a) in p.alphas().iter().enumerate() {
            for n in 0..2 {
                let x = f.frobenius(a, n);
                let group: Vec<Vec<u32>> = points.iter().filter(|pt| pt.x == x).map(|pt| flat(&pt.ys)).collect();
                prop_assert!(!group.is_empty(), "no tuples for α_{} twist {}", i + 1, n);
                let span = Subspace::span(5, 16, group).unwrap();
                let truth: Vec<_> = (0..2)
                    .map(|d| poly.eval(f, &f.mul(&f.frobenius(p.gamma(), d), &x)).unwrap())
                    .collect();
                prop_assert!(span.contains(&flat(&truth)).unwrap());
            }
        }
    }
}
