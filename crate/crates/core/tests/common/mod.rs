//! Shared generators and independent oracles for the integration suites.

#![allow(dead_code)]

use std::collections::HashSet;

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use sympdiv::divisor::DivisorConfig;
use sympdiv::document::ConfigDocument;
use sympdiv::lattice::{int, AmbientKind, AmbientLattice, AreaVector, HomologyClass, Rational};
use sympdiv::moves::{blowup, blowup_area_threshold, blowup_areas, blowup_named, BlowupMove};

pub fn fixture(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn load_config(name: &str) -> (DivisorConfig, Option<AreaVector>) {
    ConfigDocument::parse(&fixture(name))
        .unwrap()
        .build()
        .unwrap()
}

/// Intersection matrix of a basis, written out from the lattice definitions.
pub fn gram(kind: &AmbientKind, rank: usize) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0; rank]; rank];
    for (i, row) in g.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = match kind {
                AmbientKind::ProjectivePlane => 1,
                AmbientKind::ProductOfSpheres => i64::from(i != j),
                AmbientKind::RationalBlowup { .. } => {
                    if i != j {
                        0
                    } else if i == 0 {
                        1
                    } else {
                        -1
                    }
                }
                AmbientKind::RuledTrivial { .. } => {
                    if (i, j) == (0, 1) || (i, j) == (1, 0) {
                        1
                    } else if i == j && i >= 2 {
                        -1
                    } else {
                        0
                    }
                }
                AmbientKind::RuledTwisted { .. } => i64::from(!(i == 1 && j == 1)),
            };
        }
    }
    g
}

/// Canonical class: −3H+ΣE, −2f₁−2f₂, or −2B+(2g−2)F+ΣE.
pub fn canonical(kind: &AmbientKind, rank: usize) -> Vec<i64> {
    let mut k = vec![0; rank];
    match kind {
        AmbientKind::ProjectivePlane => k[0] = -3,
        AmbientKind::ProductOfSpheres => k = vec![-2, -2],
        AmbientKind::RationalBlowup { .. } => {
            k[0] = -3;
            k[1..].iter_mut().for_each(|x| *x = 1);
        }
        AmbientKind::RuledTrivial { g, .. } => {
            k[0] = -2;
            k[1] = 2 * i64::from(*g) - 2;
            k[2..].iter_mut().for_each(|x| *x = 1);
        }
        AmbientKind::RuledTwisted { g } => {
            k[0] = -2;
            k[1] = 2 * i64::from(*g) - 1;
        }
    }
    k
}

pub fn pair(amb: &AmbientLattice, a: &[i64], b: &[i64]) -> i64 {
    let g = gram(amb.kind(), amb.rank());
    let mut s = 0;
    for i in 0..a.len() {
        for j in 0..b.len() {
            s += a[i] * g[i][j] * b[j];
        }
    }
    s
}

pub fn area(a: &[i64], w: &AreaVector) -> Rational {
    a.iter()
        .zip(&w.0)
        .fold(int(0), |acc, (c, x)| acc + x * BigInt::from(*c))
}

/// area(K+[D]) summed directly from coefficients.
pub fn hypothesis_area(cfg: &DivisorConfig, w: &AreaVector) -> Rational {
    let mut kd = canonical(cfg.ambient.kind(), cfg.ambient.rank());
    for c in &cfg.components {
        for (x, y) in kd.iter_mut().zip(&c.cls.0) {
            *x += y;
        }
    }
    area(&kd, w)
}

/// A configuration with generator areas.
#[derive(Debug, Clone)]
pub struct Sample {
    pub cfg: DivisorConfig,
    pub w: AreaVector,
}

fn sample(
    amb: AmbientLattice,
    comps: &[(&str, &str)],
    edges: &[(&str, &str)],
    w: Vec<Rational>,
) -> Sample {
    let cl = comps
        .iter()
        .map(|(id, s)| (*id, amb.parse_class(s).unwrap()))
        .collect();
    let cfg = DivisorConfig::from_classes(amb, cl, edges.to_vec()).unwrap();
    assert!(cfg.is_valid(), "{:?}", cfg.validate());
    Sample {
        cfg,
        w: AreaVector(w),
    }
}

/// Small configurations with area(K+[D]) < 0, on every ambient family that admits blowups.
pub fn hypothesis_seeds() -> Vec<Sample> {
    let p2 = AmbientLattice::projective_plane();
    let s = AmbientLattice::product_of_spheres();
    vec![
        sample(p2.clone(), &[("L", "H")], &[], vec![int(1)]),
        sample(
            p2.clone(),
            &[("L1", "H"), ("L2", "H")],
            &[("L1", "L2")],
            vec![int(1)],
        ),
        sample(p2, &[("Q", "2H")], &[], vec![int(1)]),
        sample(
            s.clone(),
            &[("a", "f1"), ("b", "f2")],
            &[("a", "b")],
            vec![int(2), int(3)],
        ),
        sample(
            s,
            &[("a", "f1"), ("b", "f2"), ("c", "f1")],
            &[("a", "b"), ("b", "c")],
            vec![int(2), int(3)],
        ),
        sample(
            AmbientLattice::rational(1),
            &[("s", "H"), ("f", "H-E1")],
            &[("s", "f")],
            vec![int(3), int(1)],
        ),
        sample(
            AmbientLattice::ruled(1, 0),
            &[("S", "B"), ("F", "F")],
            &[("S", "F")],
            vec![int(3), int(1)],
        ),
        sample(
            AmbientLattice::ruled(2, 0),
            &[("S", "B"), ("F1", "F"), ("F2", "F")],
            &[("S", "F1"), ("S", "F2")],
            vec![int(5), int(1)],
        ),
    ]
}

/// Seeds whose dual graphs contain cycles or higher-genus components.
pub fn cycle_seeds() -> Vec<Sample> {
    let p2 = AmbientLattice::projective_plane();
    vec![
        sample(
            p2.clone(),
            &[("L1", "H"), ("L2", "H"), ("L3", "H")],
            &[("L1", "L2"), ("L2", "L3"), ("L1", "L3")],
            vec![int(1)],
        ),
        sample(p2.clone(), &[("C", "3H")], &[], vec![int(1)]),
        sample(
            p2.clone(),
            &[("Q", "2H"), ("L", "H")],
            &[("Q", "L"), ("Q", "L")],
            vec![int(1)],
        ),
        sample(
            p2,
            &[("C", "3H"), ("L", "H")],
            &[("C", "L"), ("C", "L"), ("C", "L")],
            vec![int(1)],
        ),
        sample(
            AmbientLattice::product_of_spheres(),
            &[("a", "f1"), ("b", "f2"), ("c", "f1"), ("d", "f2")],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")],
            vec![int(2), int(3)],
        ),
    ]
}

/// A uniformly chosen blowup type on a uniformly chosen target.
pub fn random_move(rng: &mut StdRng, cfg: &DivisorConfig) -> BlowupMove {
    let ids: Vec<String> = cfg.components.iter().map(|c| c.id.clone()).collect();
    loop {
        match rng.gen_range(0..4) {
            0 => {
                return BlowupMove::Exterior {
                    include_component: rng.gen_bool(0.5),
                }
            }
            1 => {
                if let Some((a, b)) = cfg.sorted_edges().choose(rng) {
                    if a != b {
                        return BlowupMove::Toric {
                            a: a.clone(),
                            b: b.clone(),
                        };
                    }
                }
            }
            2 if !ids.is_empty() => {
                return BlowupMove::NonToric {
                    component: ids.choose(rng).unwrap().clone(),
                }
            }
            3 if !ids.is_empty() => {
                return BlowupMove::HalfToric {
                    component: ids.choose(rng).unwrap().clone(),
                }
            }
            _ => {}
        }
    }
}

/// An area for a new generator below every component area, every generator area and
/// the hypothesis threshold.
pub fn small_area(s: &Sample) -> Rational {
    let mut bound =
        s.w.0
            .iter()
            .filter(|x| **x > int(0))
            .min()
            .cloned()
            .unwrap_or_else(|| int(1));
    for c in &s.cfg.components {
        let a = area(&c.cls.0, &s.w);
        if a > int(0) && a < bound {
            bound = a;
        }
    }
    if let Ok(t) = blowup_area_threshold(&s.cfg, &s.w) {
        if t > int(0) && t < bound {
            bound = t;
        }
    }
    bound / BigInt::from(3)
}

/// Applies one random blowup with a small new area.
pub fn grow_once(rng: &mut StdRng, s: &Sample) -> (Sample, BlowupMove) {
    let mv = random_move(rng, &s.cfg);
    let a = small_area(s);
    let b = blowup(&s.cfg, &mv).unwrap_or_else(|e| panic!("{mv:?}: {e}"));
    let w = blowup_areas(&s.cfg.ambient, &s.w, &a);
    (Sample { cfg: b.config, w }, mv)
}

pub fn grow(rng: &mut StdRng, s: &Sample, moves: usize) -> Sample {
    let mut cur = s.clone();
    for _ in 0..moves {
        cur = grow_once(rng, &cur).0;
    }
    cur
}

/// Associated sequence and (p,q) straight from the recursion, or None if not admissible.
pub fn admissible_oracle(a: &[i64]) -> Option<(Vec<i64>, i64, i64)> {
    let k = a.len();
    let mut c: Vec<i64> = vec![1];
    if k >= 2 {
        c.push(a[0]);
    }
    for i in 2..k {
        c.push(a[i - 1] * c[i - 1] - c[i - 2]);
    }
    if c.iter().any(|x| *x < 0) {
        return None;
    }
    let prev = if k >= 2 { c[k - 2] } else { 0 };
    let p = prev - c[k - 1] * a[k - 1];
    let q = c[k - 1];
    (p > 0).then_some((c, p, q))
}

/// Multiplicities from subtractive Euclid on (p,q).
pub fn weights_oracle(mut p: i64, mut q: i64) -> Vec<i64> {
    let mut out = Vec::new();
    while p > 0 && q > 0 {
        out.push(p.min(q));
        if p >= q {
            p -= q;
        } else {
            q -= p;
        }
    }
    out
}

/// A random admissible sequence with |aᵢ| ≤ 6 and length at most 8.
pub fn random_admissible(rng: &mut StdRng) -> Vec<i64> {
    loop {
        let k = rng.gen_range(1..=8);
        let wide = rng.gen_bool(0.1);
        let a: Vec<i64> = (0..k)
            .map(|i| {
                if wide || i + 1 == k {
                    rng.gen_range(-6..=6)
                } else {
                    rng.gen_range(1..=6)
                }
            })
            .collect();
        if admissible_oracle(&a).is_some() {
            return a;
        }
    }
}

/// One step of the chain contraction: the removed position and its neighbours then.
struct Removal {
    idx: usize,
    left: Option<usize>,
    right: Option<usize>,
}

fn contract(
    state: &[(usize, i64)],
    big: usize,
    dead: &mut HashSet<Vec<(usize, i64)>>,
) -> Option<Vec<Removal>> {
    let done = match state {
        [(i, _)] => *i == big,
        [(i, s), (j, t)] => (*i == big && *t <= 0) || (*j == big && *s <= 0),
        _ => false,
    };
    if done {
        return Some(Vec::new());
    }
    if dead.contains(state) {
        return None;
    }
    for pos in 0..state.len() {
        let (idx, sq) = state[pos];
        if idx == big || sq > -1 {
            continue;
        }
        let mut next = state.to_vec();
        if pos > 0 {
            next[pos - 1].1 += 1;
        }
        if pos + 1 < state.len() {
            next[pos + 1].1 += 1;
        }
        next.remove(pos);
        if let Some(mut rest) = contract(&next, big, dead) {
            let left = (pos > 0).then(|| state[pos - 1].0);
            let right = (pos + 1 < state.len()).then(|| state[pos + 1].0);
            rest.insert(0, Removal { idx, left, right });
            return Some(rest);
        }
    }
    dead.insert(state.to_vec());
    None
}

/// Builds a chain of spheres D1…Dl with the given self-intersections inside a blowup
/// of CP².
///
/// The chain is contracted down to the component at `big` (plus possibly one neighbour
/// of square ≤ 0) by removing components of square ≤ −1. The survivors are realized as
/// dH−(d−1)E and H−E, and the removals are replayed as toric and half-toric blowups,
/// followed by non-toric blowups that lower every square to its target.
pub fn realize_chain(squares: &[i64], big: usize) -> Option<(DivisorConfig, Vec<String>)> {
    let ids: Vec<String> = (1..=squares.len()).map(|i| format!("D{i}")).collect();
    let state: Vec<(usize, i64)> = squares.iter().copied().enumerate().collect();
    let removals = contract(&state, big, &mut HashSet::new())?;
    let mut survivors: Vec<usize> = (0..squares.len()).collect();
    survivors.retain(|i| !removals.iter().any(|r| r.idx == *i));
    let touches_big = removals
        .iter()
        .filter(|r| r.left == Some(big) || r.right == Some(big))
        .count() as i64;
    let d = ((squares[big] + touches_big + 2) / 2).max(1);
    let amb = AmbientLattice::rational(1);
    let mut big_cls = vec![d, -(d - 1)];
    if d == 1 && survivors.len() == 1 {
        big_cls = vec![1, 0];
    }
    let mut comps = vec![(ids[big].as_str(), HomologyClass(big_cls))];
    let mut edges = Vec::new();
    if let Some(&other) = survivors.iter().find(|i| **i != big) {
        comps.push((ids[other].as_str(), HomologyClass(vec![1, -1])));
        edges.push((ids[big].as_str(), ids[other].as_str()));
    }
    let mut cfg = DivisorConfig::from_classes(amb, comps, edges).ok()?;
    for r in removals.iter().rev() {
        let mv = match (r.left, r.right) {
            (Some(a), Some(b)) => BlowupMove::Toric {
                a: ids[a].clone(),
                b: ids[b].clone(),
            },
            (Some(a), None) | (None, Some(a)) => BlowupMove::HalfToric {
                component: ids[a].clone(),
            },
            (None, None) => return None,
        };
        cfg = blowup_named(&cfg, &mv, None, Some(&ids[r.idx]))
            .ok()?
            .config;
    }
    for (i, id) in ids.iter().enumerate() {
        loop {
            let c = &cfg.component(id)?.cls;
            let sq = cfg.ambient.square(c).ok()?;
            if sq < squares[i] {
                return None;
            }
            if sq == squares[i] {
                break;
            }
            cfg = blowup(
                &cfg,
                &BlowupMove::NonToric {
                    component: id.clone(),
                },
            )
            .ok()?
            .config;
        }
    }
    Some((cfg, ids))
}

/// Positive areas for any ambient: 1 on the first generators, 2⁻ⁱ on exceptional ones.
pub fn generic_areas(amb: &AmbientLattice) -> AreaVector {
    let off = amb.exceptional_offset();
    let mut w: Vec<Rational> = (0..off).map(|_| int(1)).collect();
    for i in 0..amb.exceptional_count() {
        w.push(Rational::new(
            BigInt::from(1),
            BigInt::from(2).pow(i as u32 + 2),
        ));
    }
    AreaVector(w)
}
