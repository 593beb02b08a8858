//! Exceptional classes: bounded enumeration, minimal-area selection, the numerical
//! SW criterion, D-goodness, and normalization of an exceptional class to a generator.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::checks::Checklist;
use crate::divisor::DivisorConfig;
use crate::error::{Error, Result};
use crate::lattice::{AmbientKind, AmbientLattice, AreaVector, HomologyClass, Rational, Transform};

pub const DEFAULT_COEFF_BOUND: i64 = 12;

/// Search bounds shared by the reduction pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub coeff: i64,
    /// Overrides every area bound when set.
    pub area: Option<Rational>,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            coeff: DEFAULT_COEFF_BOUND,
            area: None,
        }
    }
}

impl Bounds {
    /// Bound used when looking for minimal-area classes: the cheapest exceptional generator.
    pub fn minimal_search(&self, ambient: &AmbientLattice, w: &AreaVector) -> Option<Rational> {
        self.area
            .clone()
            .or_else(|| w.min_positive(ambient.exceptional_indices()))
    }

    /// Bound used when looking for any exceptional class: the largest exceptional generator.
    pub fn general_search(&self, ambient: &AmbientLattice, w: &AreaVector) -> Option<Rational> {
        self.area
            .clone()
            .or_else(|| ambient.exceptional_indices().map(|i| w.0[i].clone()).max())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionalSet {
    pub classes: Vec<HomologyClass>,
    pub areas: Vec<Rational>,
    pub area_bound: Rational,
    pub coeff_bound: i64,
    /// Set when the coefficient bound may have cut off a class within the area bound.
    pub incomplete: bool,
}

impl ExceptionalSet {
    pub fn empty(area_bound: Rational, coeff_bound: i64) -> Self {
        ExceptionalSet {
            classes: vec![],
            areas: vec![],
            area_bound,
            coeff_bound,
            incomplete: false,
        }
    }

    pub fn contains(&self, c: &HomologyClass) -> bool {
        self.classes.contains(c)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&HomologyClass, &Rational)> {
        self.classes.iter().zip(&self.areas)
    }
}

/// All classes with e² = −1, K·e = −1 and 0 < area ≤ `area_bound`, coefficients bounded by `coeff_bound`.
pub fn enumerate_exceptional(
    ambient: &AmbientLattice,
    w: &AreaVector,
    area_bound: &Rational,
    coeff_bound: i64,
) -> Result<ExceptionalSet> {
    let mut found: Vec<(Rational, HomologyClass)> = Vec::new();
    let mut incomplete = false;
    match *ambient.kind() {
        AmbientKind::ProjectivePlane
        | AmbientKind::ProductOfSpheres
        | AmbientKind::RuledTwisted { .. } => {}
        AmbientKind::RuledTrivial { .. } => {
            // Spheres in an irrational ruled surface have zero degree over the base,
            // which leaves exactly E_j and F − E_j.
            for j in ambient.exceptional_indices() {
                let e = ambient.generator(j);
                let mut fe = ambient.generator(1);
                fe.0[j] = -1;
                for c in [e, fe] {
                    let a = ambient.area(&c, w)?;
                    if a.is_positive() && a <= *area_bound {
                        found.push((a, c));
                    }
                }
            }
        }
        AmbientKind::RationalBlowup { n } => {
            let search = RationalSearch::new(ambient, w, area_bound, coeff_bound);
            for d in -(coeff_bound + 1)..=coeff_bound + 1 {
                let norm = d * d + 1;
                let sum = 1 - 3 * d;
                let partial = &w.0[0] * BigInt::from(d);
                let beyond = d.abs() > coeff_bound;
                if !search.feasible(0, norm, sum, &partial) {
                    continue;
                }
                if beyond {
                    incomplete = true;
                    continue;
                }
                let mut x = vec![0i64; n];
                search.dfs(
                    0,
                    norm,
                    sum,
                    partial,
                    &mut x,
                    d,
                    &mut found,
                    &mut incomplete,
                );
            }
        }
    }
    found.sort_by(|(a, c), (b, d)| a.cmp(b).then_with(|| c.cmp(d)));
    found.dedup();
    let (areas, classes) = found.into_iter().unzip();
    Ok(ExceptionalSet {
        classes,
        areas,
        area_bound: area_bound.clone(),
        coeff_bound,
        incomplete,
    })
}

struct RationalSearch<'a> {
    w: &'a AreaVector,
    area_bound: &'a Rational,
    coeff_bound: i64,
    /// Suffix sums of squared exceptional areas.
    tail_sq: Vec<Rational>,
    n: usize,
}

impl<'a> RationalSearch<'a> {
    fn new(
        ambient: &AmbientLattice,
        w: &'a AreaVector,
        area_bound: &'a Rational,
        coeff_bound: i64,
    ) -> Self {
        let n = ambient.exceptional_count();
        let mut tail_sq = vec![Rational::zero(); n + 1];
        for i in (0..n).rev() {
            tail_sq[i] = &tail_sq[i + 1] + &w.0[i + 1] * &w.0[i + 1];
        }
        RationalSearch {
            w,
            area_bound,
            coeff_bound,
            tail_sq,
            n,
        }
    }

    /// Whether positions i.. can complete norm `r`, sum `s` and an area in (0, bound].
    fn feasible(&self, i: usize, r: i64, s: i64, partial: &Rational) -> bool {
        let left = (self.n - i) as i64;
        if r < 0 || r < s.abs() || (r - s).rem_euclid(2) != 0 || s * s > left * r {
            return false;
        }
        if left == 0 {
            return partial.is_positive() && partial <= self.area_bound;
        }
        let rw = &self.tail_sq[i] * BigInt::from(r);
        let lo = -partial.clone();
        let hi = self.area_bound - partial;
        let lo_ok = lo.is_negative() || &lo * &lo < rw;
        let hi_ok = !hi.is_negative() || &hi * &hi <= rw;
        lo_ok && hi_ok
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        i: usize,
        r: i64,
        s: i64,
        partial: Rational,
        x: &mut Vec<i64>,
        d: i64,
        found: &mut Vec<(Rational, HomologyClass)>,
        incomplete: &mut bool,
    ) {
        if i == self.n {
            if r == 0 && s == 0 && partial.is_positive() && partial <= *self.area_bound {
                let mut c = vec![d];
                c.extend_from_slice(x);
                found.push((partial, HomologyClass(c)));
            }
            return;
        }
        if (self.coeff_bound + 1) * (self.coeff_bound + 1) <= r {
            *incomplete = true;
        }
        let m = Roots::sqrt(&r).min(self.coeff_bound);
        for v in -m..=m {
            if v * v > r {
                continue;
            }
            let p = &partial + &self.w.0[i + 1] * BigInt::from(v);
            if !self.feasible(i + 1, r - v * v, s - v, &p) {
                continue;
            }
            x[i] = v;
            self.dfs(i + 1, r - v * v, s - v, p, x, d, found, incomplete);
        }
        x[i] = 0;
    }
}

/// Enumerates with the default bound for minimal-area selection.
pub fn enumerate_for_minimum(
    ambient: &AmbientLattice,
    w: &AreaVector,
    bounds: &Bounds,
) -> Result<ExceptionalSet> {
    match bounds.minimal_search(ambient, w) {
        Some(a) => enumerate_exceptional(ambient, w, &a, bounds.coeff),
        None => Ok(ExceptionalSet::empty(Rational::zero(), bounds.coeff)),
    }
}

/// Enumerates with the default bound for general searches.
pub fn enumerate_general(
    ambient: &AmbientLattice,
    w: &AreaVector,
    bounds: &Bounds,
) -> Result<ExceptionalSet> {
    match bounds.general_search(ambient, w) {
        Some(a) => enumerate_exceptional(ambient, w, &a, bounds.coeff),
        None => Ok(ExceptionalSet::empty(Rational::zero(), bounds.coeff)),
    }
}

/// All classes of minimal area in the set.
pub fn minimal_area(set: &ExceptionalSet) -> Result<Vec<HomologyClass>> {
    let min = set
        .areas
        .iter()
        .min()
        .ok_or_else(|| Error::InvalidInput("empty exceptional set".into()))?;
    let mut out: Vec<HomologyClass> = set
        .iter()
        .filter(|(_, a)| *a == min)
        .map(|(c, _)| c.clone())
        .collect();
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TerminalPairTag {
    /// E1·E1′ = 0 and both meet E2 once.
    ProductOfSpheres,
    /// E1·E1′ = E1′·E2 = 1 and E1·E2 = 0.
    BlownUpPlane,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecondaryChain {
    /// E_n, E_{n−1}, …, E_2.
    pub chain: Vec<HomologyClass>,
    pub pair: (HomologyClass, HomologyClass),
    pub tag: TerminalPairTag,
}

/// Greedy chain of successively minimal exceptional classes, each orthogonal to the later ones.
pub fn secondary_chain(
    ambient: &AmbientLattice,
    w: &AreaVector,
    bounds: &Bounds,
) -> Result<SecondaryChain> {
    let n = match *ambient.kind() {
        AmbientKind::RationalBlowup { n } if n >= 2 => n,
        _ => {
            return Err(Error::Unsupported(
                "secondary chain needs CP²#n with n ≥ 2".into(),
            ))
        }
    };
    let bound = bounds.area.clone().unwrap_or_else(|| w.0[0].clone());
    let set = enumerate_exceptional(ambient, w, &bound, bounds.coeff)?;
    let mut chain: Vec<HomologyClass> = Vec::new();
    let orthogonal = |c: &HomologyClass, chain: &[HomologyClass]| {
        chain
            .iter()
            .all(|e| e != c && ambient.pair_unchecked(c, e) == 0)
    };
    while chain.len() < n - 1 {
        let next = set
            .classes
            .iter()
            .find(|c| orthogonal(c, &chain))
            .cloned()
            .ok_or_else(|| {
                Error::Stuck(format!(
                    "no orthogonal exceptional class within bounds (set incomplete: {})",
                    set.incomplete
                ))
            })?;
        chain.push(next);
    }
    let e2 = chain.last().unwrap().clone();
    let rest: Vec<&HomologyClass> = set
        .classes
        .iter()
        .filter(|c| orthogonal(c, &chain[..n - 2]))
        .filter(|c| **c != e2)
        .collect();
    if rest.len() != 2 {
        return Err(Error::Stuck(format!(
            "expected two terminal classes, found {}",
            rest.len()
        )));
    }
    let (x, y) = (rest[0].clone(), rest[1].clone());
    let p = |a: &HomologyClass, b: &HomologyClass| ambient.pair_unchecked(a, b);
    let (pair, tag) = if p(&x, &y) == 0 && p(&x, &e2) == 1 && p(&y, &e2) == 1 {
        ((x, y), TerminalPairTag::ProductOfSpheres)
    } else if p(&x, &y) == 1 && p(&x, &e2) == 0 && p(&y, &e2) == 1 {
        ((x, y), TerminalPairTag::BlownUpPlane)
    } else if p(&x, &y) == 1 && p(&y, &e2) == 0 && p(&x, &e2) == 1 {
        ((y, x), TerminalPairTag::BlownUpPlane)
    } else {
        return Err(Error::Stuck(
            "terminal pair matches neither intersection pattern".into(),
        ));
    };
    Ok(SecondaryChain { chain, pair, tag })
}

/// Sufficient numerical criterion for a nonzero SW invariant.
pub fn sw_nonzero(ambient: &AmbientLattice, a: &HomologyClass, w: &AreaVector) -> Result<bool> {
    if ambient.is_exceptional_numerically(a)? && ambient.area(a, w)?.is_positive() {
        return Ok(true);
    }
    if let Some(f) = ambient.fiber() {
        if *a == f {
            return Ok(true);
        }
    }
    let kma = &ambient.canonical() - a;
    let mut ok = ambient.sw_index(a)? >= 0 && ambient.area(&kma, w)?.is_negative();
    if let Some(f) = ambient.fiber() {
        ok &= ambient.pair(a, &f)? != -1;
    }
    Ok(ok)
}

/// The four D-goodness conditions, evaluated separately.
pub fn d_good(
    a: &HomologyClass,
    config: &DivisorConfig,
    w: &AreaVector,
    set: &ExceptionalSet,
) -> Result<Checklist> {
    let amb = &config.ambient;
    let mut out = Checklist::new();
    out.push(
        "sw_nonzero",
        sw_nonzero(amb, a, w)?,
        format!("I = {}", amb.sw_index(a)?),
    );
    let sq = amb.square(a)?;
    if sq == 0 {
        let g = a.content();
        out.push("primitive", g == 1, format!("square 0, gcd {g}"));
    } else {
        out.push("primitive", true, format!("square {sq}, not required"));
    }
    let bad: Vec<String> = set
        .classes
        .iter()
        .filter(|e| *e != a)
        .filter(|e| amb.pair_unchecked(a, e) < 0)
        .map(|e| amb.format(e))
        .collect();
    let scope = format!(
        "{} classes, area ≤ {}, |coeff| ≤ {}{}",
        set.classes.len(),
        set.area_bound,
        set.coeff_bound,
        if set.incomplete {
            ", conditional pass within bounds"
        } else {
            ""
        }
    );
    out.push(
        "nonnegative_on_exceptional",
        bad.is_empty(),
        if bad.is_empty() {
            scope
        } else {
            format!("negative against {}", bad.join(", "))
        },
    );
    let bad: Vec<String> = config
        .components
        .iter()
        .filter(|c| amb.pair_unchecked(a, &c.cls) < 0)
        .map(|c| c.id.clone())
        .collect();
    out.push(
        "nonnegative_on_components",
        bad.is_empty(),
        if bad.is_empty() {
            "all pairings ≥ 0".to_string()
        } else {
            format!("negative against {}", bad.join(", "))
        },
    );
    Ok(out)
}

const NORMALIZE_STEP_BOUND: usize = 256;

/// A K-preserving automorphism mapping `e` to the last exceptional generator, and that index.
pub fn normalize_to_basis(
    ambient: &AmbientLattice,
    e: &HomologyClass,
) -> Result<(Transform, usize)> {
    if !ambient.is_exceptional_numerically(e)? {
        return Err(Error::NotExceptional(ambient.format(e)));
    }
    let rank = ambient.rank();
    let last = rank - 1;
    let exc: Vec<usize> = ambient.exceptional_indices().collect();
    if exc.is_empty() {
        return Err(Error::Normalization(format!(
            "{} has no exceptional generators",
            ambient.format(e)
        )));
    }
    let mut t = Transform::identity(rank);
    let mut cur = e.clone();
    for _ in 0..NORMALIZE_STEP_BOUND {
        if let Some(j) = generator_index(ambient, &cur) {
            if j != last {
                t = t.then(&Transform::move_to_end(rank, j));
            }
            return Ok((t, last));
        }
        let c = match *ambient.kind() {
            AmbientKind::RationalBlowup { n } if n >= 3 => cremona_center(ambient, &cur)?,
            AmbientKind::RuledTrivial { n, .. } if n >= 2 => elementary_center(ambient, &cur)?,
            _ => {
                return Err(Error::Normalization(format!(
                    "{} cannot be moved to a generator in this ambient",
                    ambient.format(&cur)
                )))
            }
        };
        let r = Transform::reflection(ambient, &c);
        cur = r.apply(&cur);
        t = t.then(&r);
    }
    Err(Error::Normalization(format!(
        "step bound reached for {}",
        ambient.format(e)
    )))
}

fn generator_index(ambient: &AmbientLattice, c: &HomologyClass) -> Option<usize> {
    let nz: Vec<usize> = (0..c.0.len()).filter(|&i| c.0[i] != 0).collect();
    match nz.as_slice() {
        [j] if c.0[*j] == 1 && ambient.exceptional_indices().contains(j) => Some(*j),
        _ => None,
    }
}

/// Cremona center H − Ei − Ej − Ek that most reduces |degree|; ties prefer later indices.
fn cremona_center(ambient: &AmbientLattice, e: &HomologyClass) -> Result<HomologyClass> {
    let d = e.0[0];
    let n = e.0.len() - 1;
    let mut best: Option<(i64, [usize; 3])> = None;
    for i in (1..=n).rev() {
        for j in (1..i).rev() {
            for k in (1..j).rev() {
                let nd = (2 * d + e.0[i] + e.0[j] + e.0[k]).abs();
                if best.is_none_or(|(b, _)| nd < b) {
                    best = Some((nd, [k, j, i]));
                }
            }
        }
    }
    let (nd, idx) =
        best.ok_or_else(|| Error::Normalization("fewer than three exceptional generators".into()))?;
    if nd >= d.abs() && d != 0 {
        return Err(Error::Normalization(format!(
            "no Cremona reflection lowers the degree of {}",
            ambient.format(e)
        )));
    }
    let mut c = ambient.zero();
    c.0[0] = 1;
    for i in idx {
        c.0[i] = -1;
    }
    Ok(c)
}

/// Elementary center F − Ei − Ej mapping F − Ej to a generator.
fn elementary_center(ambient: &AmbientLattice, e: &HomologyClass) -> Result<HomologyClass> {
    let exc: Vec<usize> = ambient.exceptional_indices().collect();
    let j = exc
        .iter()
        .copied()
        .find(|&j| {
            let mut fe = ambient.generator(1);
            fe.0[j] = -1;
            fe == *e
        })
        .ok_or_else(|| {
            Error::Normalization(format!("{} is not of the form F−Ej", ambient.format(e)))
        })?;
    let last = *exc.last().unwrap();
    let other = if j != last { last } else { exc[exc.len() - 2] };
    let mut c = ambient.generator(1);
    c.0[j] = -1;
    c.0[other] = -1;
    Ok(c)
}
