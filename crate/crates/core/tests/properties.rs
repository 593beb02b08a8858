//! Property tests for the lattice, moves, divisor and inflation invariants.

mod common;

use common::*;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use sympdiv::document::{from_json, to_json, ConfigDocument};
use sympdiv::inflation::{
    in_region, inflate_step, lambda, normalize, plan_kahler, verify_plan, InflationPlan,
    NormalizedVector, Region, UnnormalizedArea,
};
use sympdiv::lattice::{int, rat, AmbientLattice, AreaVector, HomologyClass, Rational};
use sympdiv::moves::{blowdown, blowup, blowup_areas, is_toric_blowup_seq, toric_seq_blowup};

fn sample(seed: u64, moves: usize) -> Sample {
    let mut rng = StdRng::seed_from_u64(seed);
    let seeds: Vec<Sample> = hypothesis_seeds()
        .into_iter()
        .chain(cycle_seeds())
        .collect();
    let s = seeds[rng.gen_range(0..seeds.len())].clone();
    grow(&mut rng, &s, moves)
}

fn genus(amb: &AmbientLattice, c: &[i64]) -> i64 {
    let k = canonical(amb.kind(), amb.rank());
    (pair(amb, c, c) + pair(amb, &k, c)) / 2 + 1
}

fn target_in_p1(seed: u64, n: usize) -> Vec<Rational> {
    let mut rng = StdRng::seed_from_u64(seed);
    let cap = if n == 1 { 99 } else { 49 };
    let mut d: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(1..=cap), 100)).collect();
    d.sort_by(|a, b| b.cmp(a));
    let s: Rational = d.iter().sum();
    let floor = if n == 0 { int(1) } else { s / BigInt::from(2) };
    let mut v = vec![floor + rat(rng.gen_range(1..=300), 100)];
    v.extend(d);
    v
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn genus_formulas_agree(seed in any::<u64>(), moves in 0usize..8) {
        let s = sample(seed, moves);
        let amb = &s.cfg.ambient;
        let closed = genus(amb, &s.cfg.total_class().0);
        prop_assert_eq!(s.cfg.total_genus().unwrap(), (closed, closed));
        for c in &s.cfg.components {
            prop_assert_eq!(c.genus, genus(amb, &c.cls.0));
        }
        let pieces = s.cfg.smooth_all();
        for p in &pieces {
            prop_assert_eq!(p.genus, genus(amb, &p.cls.0));
        }
        prop_assert_eq!(pieces.iter().map(|p| p.genus - 1).sum::<i64>() + 1, closed);
    }

    #[test]
    fn validation_ignores_order(seed in any::<u64>(), moves in 0usize..6, corrupt in any::<bool>()) {
        let mut s = sample(seed, moves);
        let mut rng = StdRng::seed_from_u64(seed ^ 0x5eed);
        if corrupt {
            let i = rng.gen_range(0..s.cfg.components.len());
            let j = rng.gen_range(0..s.cfg.ambient.rank());
            s.cfg.components[i].cls.0[j] += 1;
        }
        let first = s.cfg.validate();
        prop_assert_eq!(&first, &s.cfg.validate());
        let mut shuffled = s.cfg.clone();
        shuffled.components.shuffle(&mut rng);
        shuffled.edges.shuffle(&mut rng);
        for e in shuffled.edges.iter_mut() {
            if rng.gen() {
                *e = (e.1.clone(), e.0.clone());
            }
        }
        let second = shuffled.validate();
        prop_assert_eq!(first.len(), second.len());
        prop_assert_eq!(s.cfg.is_valid(), shuffled.is_valid());
        prop_assert_eq!(s.cfg.sorted_edges(), shuffled.sorted_edges());
        prop_assert_eq!(s.cfg.total_genus().ok(), shuffled.total_genus().ok());
    }

    #[test]
    fn toric_sequences_replay(positions in prop::collection::vec(any::<prop::sample::Index>(), 0..10)) {
        let mut seq = vec![0, 0];
        for p in &positions {
            seq = toric_seq_blowup(&seq, 1 + p.index(seq.len() - 1)).unwrap();
        }
        let witness = is_toric_blowup_seq(&seq).unwrap();
        prop_assert_eq!(witness.len(), positions.len());
        let mut replay = vec![0, 0];
        for k in witness {
            replay = toric_seq_blowup(&replay, k).unwrap();
        }
        prop_assert_eq!(replay, seq);
    }

    #[test]
    fn blowup_then_blowdown_is_identity(seed in any::<u64>(), moves in 0usize..6) {
        let s = sample(seed, moves);
        let mut rng = StdRng::seed_from_u64(seed.rotate_left(7));
        let mv = random_move(&mut rng, &s.cfg);
        let b = blowup(&s.cfg, &mv).unwrap();
        prop_assert!(b.config.is_valid());
        let a = small_area(&s);
        let w = blowup_areas(&s.cfg.ambient, &s.w, &a);
        if hypothesis_area(&s.cfg, &s.w) < int(0) {
            prop_assert!(hypothesis_area(&b.config, &w) < int(0));
        }
        let d = blowdown(&b.config, &b.exceptional).unwrap();
        prop_assert_eq!(d.kind, mv.kind());
        prop_assert_eq!(&d.config, &s.cfg);
        prop_assert_eq!(d.contraction.push_areas(&w), s.w.clone());
        prop_assert_eq!(d.contraction.lift_areas(&s.w, &a), w);
    }

    #[test]
    fn regions_are_nested(g in 1u32..4, b in 1i64..400, ds in prop::collection::vec(1i64..100, 0..6)) {
        let mut entries = vec![rat(b, 100)];
        entries.extend(ds.iter().map(|d| rat(*d, 100)));
        let at = |g: u32| NormalizedVector::new(g, entries.clone());
        if in_region(&at(g + 1), Region::Pg) {
            prop_assert!(in_region(&at(g), Region::Pg));
        }
        if in_region(&at(g), Region::Pg) {
            prop_assert!(in_region(&at(g), Region::P));
        }
    }

    #[test]
    fn inflation_is_additive(seed in any::<u64>(), n in 1usize..5, s in 1i64..50, t in 1i64..50) {
        let v = NormalizedVector::new(1, target_in_p1(seed, n));
        let a = UnnormalizedArea::from_normalized(&v);
        let amb = a.ambient();
        let z = amb.parse_class(if n == 1 { "F-E1" } else { "F-E1-E2" }).unwrap();
        let (s, t) = (rat(s, 1000), rat(t, 1000));
        let Ok(whole) = inflate_step(&a, &z, &(&s + &t)) else { return Ok(()) };
        let split = inflate_step(&inflate_step(&a, &z, &s).unwrap(), &z, &t).unwrap();
        prop_assert_eq!(whole, split);
        let l = lambda(&a, &z).unwrap().unwrap();
        prop_assert!(inflate_step(&a, &z, &l).is_err());
    }

    #[test]
    fn zigzag_endpoint_is_linear(seed in any::<u64>(), n in 2usize..6, substeps in 1u64..6, t in 1i64..20) {
        let v = NormalizedVector::new(1, target_in_p1(seed, n));
        let a = UnnormalizedArea::from_normalized(&v);
        let amb = a.ambient();
        let z0 = amb.parse_class("B").unwrap();
        let z1 = amb.parse_class("F").unwrap();
        let t = rat(t, 100);
        let step = &t / BigInt::from(substeps);
        let mut cur = a.clone();
        for _ in 0..substeps {
            cur = inflate_step(&cur, &z1, &step).unwrap();
            cur = inflate_step(&cur, &z0, &step).unwrap();
        }
        let sum = HomologyClass(z0.0.iter().zip(&z1.0).map(|(x, y)| x + y).collect());
        let direct = inflate_step(&a, &sum, &t).unwrap();
        prop_assert_eq!(normalize(&cur).unwrap(), normalize(&direct).unwrap());
    }

    #[test]
    fn plans_verify(seed in any::<u64>(), n in 0usize..5) {
        let target = target_in_p1(seed, n);
        let v = NormalizedVector::new(1, target);
        prop_assume!(in_region(&v, Region::Pg));
        let plan = plan_kahler(&v).unwrap();
        prop_assert!(verify_plan(&plan).all_passed());
        let back: InflationPlan = from_json(&to_json(&plan)).unwrap();
        prop_assert_eq!(back, plan);
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>(), moves in 0usize..6) {
        let s = sample(seed, moves);
        let doc = ConfigDocument::from_config(&s.cfg, Some(&s.w));
        let parsed = ConfigDocument::parse(&to_json(&doc)).unwrap();
        let (cfg, w) = parsed.build().unwrap();
        prop_assert_eq!(cfg, s.cfg);
        prop_assert_eq!(w, Some(s.w));
        let w: AreaVector = from_json(&to_json(&AreaVector(vec![rat(-3, 7), int(2)]))).unwrap();
        prop_assert_eq!(w.0, vec![rat(-3, 7), int(2)]);
    }
}
