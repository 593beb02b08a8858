//! Integer homology lattices of the ambient 4-manifolds, with the intersection
//! form, canonical class, adjunction genus, SW index and area pairing.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The five ambient families.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum AmbientKind {
    ProjectivePlane,
    ProductOfSpheres,
    RationalBlowup { n: usize },
    RuledTrivial { g: u32, n: usize },
    RuledTwisted { g: u32 },
}

/// A homology lattice with an ordered, named basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "AmbientSpec", into = "AmbientSpec")]
pub struct AmbientLattice {
    kind: AmbientKind,
    names: Vec<String>,
}

/// Serialized form of an ambient: the kind plus optional generator names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbientSpec {
    #[serde(flatten)]
    pub kind: AmbientKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

impl TryFrom<AmbientSpec> for AmbientLattice {
    type Error = Error;

    fn try_from(spec: AmbientSpec) -> Result<Self> {
        let amb = AmbientLattice::new(spec.kind)?;
        match spec.names {
            Some(names) => amb.with_names(names),
            None => Ok(amb),
        }
    }
}

impl From<AmbientLattice> for AmbientSpec {
    fn from(a: AmbientLattice) -> Self {
        let default = default_names(&a.kind).ok();
        let names = (default.as_ref() != Some(&a.names)).then_some(a.names);
        AmbientSpec {
            kind: a.kind,
            names,
        }
    }
}

/// An integer coefficient vector over an ambient basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HomologyClass(pub Vec<i64>);

/// Exact symplectic areas of the basis generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AreaVector(#[serde(with = "rational_vec")] pub Vec<Rational>);

/// Parses `p/q` or `p` into an exact rational; a zero denominator is an error.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::InvalidInput(format!("malformed rational {text:?}"));
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::InvalidInput(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(n, d))
}

/// Writes a rational as `p/q`, or `p` when integral.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde adapter storing a rational as a `p/q` string.
pub mod rational_str {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(D::Error::custom)
    }
}

/// Serde adapter storing a list of rationals as `p/q` strings.
pub mod rational_vec {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_rational(t).map_err(D::Error::custom))
            .collect()
    }
}

impl AmbientLattice {
    pub fn new(kind: AmbientKind) -> Result<Self> {
        let names = default_names(&kind)?;
        Ok(AmbientLattice { kind, names })
    }

    pub fn projective_plane() -> Self {
        Self::new(AmbientKind::ProjectivePlane).unwrap()
    }

    pub fn product_of_spheres() -> Self {
        Self::new(AmbientKind::ProductOfSpheres).unwrap()
    }

    pub fn rational(n: usize) -> Self {
        if n == 0 {
            Self::projective_plane()
        } else {
            Self::new(AmbientKind::RationalBlowup { n }).unwrap()
        }
    }

    pub fn ruled(g: u32, n: usize) -> Self {
        Self::new(AmbientKind::RuledTrivial { g, n }).unwrap()
    }

    pub fn twisted(g: u32) -> Self {
        Self::new(AmbientKind::RuledTwisted { g }).unwrap()
    }

    /// Replaces the generator names; the count must match the rank.
    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.rank() {
            return Err(Error::AmbientMismatch {
                expected: self.rank(),
                got: names.len(),
            });
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = names.iter().find(|n| !seen.insert(n.as_str())) {
            return Err(Error::InvalidInput(format!(
                "duplicate generator name {dup}"
            )));
        }
        self.names = names;
        Ok(self)
    }

    pub fn kind(&self) -> &AmbientKind {
        &self.kind
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rank(&self) -> usize {
        match self.kind {
            AmbientKind::ProjectivePlane => 1,
            AmbientKind::ProductOfSpheres | AmbientKind::RuledTwisted { .. } => 2,
            AmbientKind::RationalBlowup { n } => n + 1,
            AmbientKind::RuledTrivial { n, .. } => n + 2,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(
            self.kind,
            AmbientKind::ProjectivePlane
                | AmbientKind::ProductOfSpheres
                | AmbientKind::RationalBlowup { .. }
        )
    }

    pub fn is_ruled(&self) -> bool {
        matches!(
            self.kind,
            AmbientKind::RuledTrivial { .. } | AmbientKind::RuledTwisted { .. }
        )
    }

    pub fn base_genus(&self) -> Option<u32> {
        match self.kind {
            AmbientKind::RuledTrivial { g, .. } | AmbientKind::RuledTwisted { g } => Some(g),
            _ => None,
        }
    }

    /// Number of exceptional basis generators.
    pub fn exceptional_count(&self) -> usize {
        match self.kind {
            AmbientKind::RationalBlowup { n } | AmbientKind::RuledTrivial { n, .. } => n,
            _ => 0,
        }
    }

    /// Basis index of the first exceptional generator.
    pub fn exceptional_offset(&self) -> usize {
        match self.kind {
            AmbientKind::RuledTrivial { .. } => 2,
            _ => 1,
        }
    }

    /// Basis indices of the exceptional generators E1..En.
    pub fn exceptional_indices(&self) -> std::ops::Range<usize> {
        let o = self.exceptional_offset();
        o..o + self.exceptional_count()
    }

    /// b2 = rank of the lattice.
    pub fn b2(&self) -> usize {
        self.rank()
    }

    /// Intersection number of basis generators i and j.
    pub fn gram(&self, i: usize, j: usize) -> i64 {
        match self.kind {
            AmbientKind::ProjectivePlane => 1,
            AmbientKind::ProductOfSpheres => i64::from(i != j),
            AmbientKind::RationalBlowup { .. } => match (i, j) {
                (0, 0) => 1,
                _ if i == j => -1,
                _ => 0,
            },
            AmbientKind::RuledTrivial { .. } => match (i, j) {
                (0, 1) | (1, 0) => 1,
                (0, 0) | (1, 1) => 0,
                _ if i == j => -1,
                _ => 0,
            },
            AmbientKind::RuledTwisted { .. } => match (i, j) {
                (1, 1) => 0,
                _ => 1,
            },
        }
    }

    pub fn zero(&self) -> HomologyClass {
        HomologyClass(vec![0; self.rank()])
    }

    pub fn generator(&self, i: usize) -> HomologyClass {
        let mut c = self.zero();
        c.0[i] = 1;
        c
    }

    /// Builds a class from its coefficient vector, checking the length.
    pub fn class(&self, coeffs: &[i64]) -> Result<HomologyClass> {
        let c = HomologyClass(coeffs.to_vec());
        self.check(&c)?;
        Ok(c)
    }

    /// Parses a class written like `6H-3E1-E2` in this ambient's generator names.
    pub fn parse_class(&self, text: &str) -> Result<HomologyClass> {
        let mut c = self.zero();
        let s: String = text.chars().filter(|ch| !ch.is_whitespace()).collect();
        if s == "0" {
            return Ok(c);
        }
        let mut rest = s.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            let digits = term.chars().take_while(|ch| ch.is_ascii_digit()).count();
            let coeff: i64 = if digits == 0 {
                1
            } else {
                term[..digits]
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad coefficient in {text:?}")))?
            };
            let name = &term[digits..];
            let idx = self.names.iter().position(|n| n == name).ok_or_else(|| {
                Error::InvalidInput(format!("unknown generator {name:?} in {text:?}"))
            })?;
            c.0[idx] += sign * coeff;
        }
        Ok(c)
    }

    fn check(&self, a: &HomologyClass) -> Result<()> {
        if a.0.len() != self.rank() {
            return Err(Error::AmbientMismatch {
                expected: self.rank(),
                got: a.0.len(),
            });
        }
        Ok(())
    }

    /// Intersection pairing a·b.
    pub fn pair(&self, a: &HomologyClass, b: &HomologyClass) -> Result<i64> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.pair_unchecked(a, b))
    }

    pub(crate) fn pair_unchecked(&self, a: &HomologyClass, b: &HomologyClass) -> i64 {
        match self.kind {
            AmbientKind::ProjectivePlane => a.0[0] * b.0[0],
            AmbientKind::ProductOfSpheres => a.0[0] * b.0[1] + a.0[1] * b.0[0],
            AmbientKind::RationalBlowup { .. } => {
                a.0[0] * b.0[0]
                    - a.0[1..]
                        .iter()
                        .zip(&b.0[1..])
                        .map(|(x, y)| x * y)
                        .sum::<i64>()
            }
            AmbientKind::RuledTrivial { .. } => {
                a.0[0] * b.0[1] + a.0[1] * b.0[0]
                    - a.0[2..]
                        .iter()
                        .zip(&b.0[2..])
                        .map(|(x, y)| x * y)
                        .sum::<i64>()
            }
            AmbientKind::RuledTwisted { .. } => a.0[0] * b.0[0] + a.0[0] * b.0[1] + a.0[1] * b.0[0],
        }
    }

    pub fn square(&self, a: &HomologyClass) -> Result<i64> {
        self.pair(a, a)
    }

    pub fn canonical(&self) -> HomologyClass {
        let mut k = self.zero();
        match self.kind {
            AmbientKind::ProjectivePlane => k.0[0] = -3,
            AmbientKind::ProductOfSpheres => {
                k.0[0] = -2;
                k.0[1] = -2;
            }
            AmbientKind::RationalBlowup { .. } => {
                k.0[0] = -3;
                k.0[1..].iter_mut().for_each(|x| *x = 1);
            }
            AmbientKind::RuledTrivial { g, .. } => {
                k.0[0] = -2;
                k.0[1] = 2 * i64::from(g) - 2;
                k.0[2..].iter_mut().for_each(|x| *x = 1);
            }
            AmbientKind::RuledTwisted { g } => {
                k.0[0] = -2;
                k.0[1] = 2 * i64::from(g) - 1;
            }
        }
        k
    }

    /// K·a.
    pub fn k_dot(&self, a: &HomologyClass) -> Result<i64> {
        self.pair(&self.canonical(), a)
    }

    /// Genus ½(a²+K·a)+1 when it is a non-negative integer.
    pub fn adjunction_genus(&self, a: &HomologyClass) -> Result<Option<i64>> {
        let s = self.square(a)? + self.k_dot(a)?;
        if s % 2 != 0 {
            return Ok(None);
        }
        let g = s / 2 + 1;
        Ok((g >= 0).then_some(g))
    }

    /// SW index I(e) = e² − K·e.
    pub fn sw_index(&self, e: &HomologyClass) -> Result<i64> {
        Ok(self.square(e)? - self.k_dot(e)?)
    }

    /// e² = −1 and K·e = −1.
    pub fn is_exceptional_numerically(&self, e: &HomologyClass) -> Result<bool> {
        Ok(self.square(e)? == -1 && self.k_dot(e)? == -1)
    }

    pub fn area(&self, a: &HomologyClass, w: &AreaVector) -> Result<Rational> {
        self.check(a)?;
        if w.0.len() != self.rank() {
            return Err(Error::AmbientMismatch {
                expected: self.rank(),
                got: w.0.len(),
            });
        }
        Ok(a.0
            .iter()
            .zip(&w.0)
            .filter(|(c, _)| **c != 0)
            .fold(Rational::zero(), |acc, (c, x)| acc + x * BigInt::from(*c)))
    }

    /// Checks the area-vector invariants: exceptional generators and F have positive area.
    pub fn validate_areas(&self, w: &AreaVector) -> Result<()> {
        if w.0.len() != self.rank() {
            return Err(Error::AmbientMismatch {
                expected: self.rank(),
                got: w.0.len(),
            });
        }
        for i in self.exceptional_indices() {
            if !w.0[i].is_positive() {
                return Err(Error::InvalidInput(format!(
                    "area of {} must be positive",
                    self.names[i]
                )));
            }
        }
        if let Some(f) = self.fiber() {
            if !self.area(&f, w)?.is_positive() {
                return Err(Error::InvalidInput(
                    "area of the fiber class must be positive".into(),
                ));
            }
        }
        Ok(())
    }

    /// The fiber class F of a ruled ambient.
    pub fn fiber(&self) -> Option<HomologyClass> {
        self.is_ruled().then(|| self.generator(1))
    }

    /// Fiber class f = H − E1 of CP²#1.
    pub fn cp2_1_fiber(&self) -> Option<HomologyClass> {
        (self.kind == AmbientKind::RationalBlowup { n: 1 }).then(|| HomologyClass(vec![1, -1]))
    }

    /// Section class s = H of CP²#1.
    pub fn cp2_1_section(&self) -> Option<HomologyClass> {
        (self.kind == AmbientKind::RationalBlowup { n: 1 }).then(|| HomologyClass(vec![1, 0]))
    }

    /// Writes a class using the generator names, e.g. `6H-3E1-E2`.
    pub fn format(&self, a: &HomologyClass) -> String {
        let mut out = String::new();
        for (c, name) in a.0.iter().zip(&self.names) {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 {
                "-"
            } else if out.is_empty() {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            if mag == 1 {
                out.push_str(&format!("{sign}{name}"));
            } else {
                out.push_str(&format!("{sign}{mag}{name}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// A fresh generator name `E<k>` not already used.
    pub fn fresh_exceptional_name(&self) -> String {
        let max = self
            .names
            .iter()
            .filter_map(|n| n.strip_prefix('E').and_then(|s| s.parse::<usize>().ok()))
            .max()
            .unwrap_or(0);
        format!("E{}", max + 1)
    }
}

fn default_names(kind: &AmbientKind) -> Result<Vec<String>> {
    let es = |n: usize| (1..=n).map(|i| format!("E{i}"));
    Ok(match *kind {
        AmbientKind::ProjectivePlane => vec!["H".into()],
        AmbientKind::ProductOfSpheres => vec!["f1".into(), "f2".into()],
        AmbientKind::RationalBlowup { n } => {
            if n == 0 {
                return Err(Error::Unsupported("RationalBlowup requires n >= 1".into()));
            }
            std::iter::once("H".to_string()).chain(es(n)).collect()
        }
        AmbientKind::RuledTrivial { g, n } => {
            if g == 0 {
                return Err(Error::Unsupported(
                    "ruled ambient requires base genus >= 1".into(),
                ));
            }
            ["B".to_string(), "F".to_string()]
                .into_iter()
                .chain(es(n))
                .collect()
        }
        AmbientKind::RuledTwisted { g } => {
            if g == 0 {
                return Err(Error::Unsupported(
                    "ruled ambient requires base genus >= 1".into(),
                ));
            }
            vec!["B1".into(), "F".into()]
        }
    })
}

impl HomologyClass {
    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| *c == 0)
    }

    /// gcd of the coefficients (0 for the zero class).
    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, c| num_integer::gcd(g, *c))
    }

    /// Appends a zero coefficient, embedding into a lattice with one more generator.
    pub fn extended(&self) -> HomologyClass {
        let mut v = self.0.clone();
        v.push(0);
        HomologyClass(v)
    }
}

impl Add for &HomologyClass {
    type Output = HomologyClass;
    fn add(self, rhs: &HomologyClass) -> HomologyClass {
        assert_eq!(self.0.len(), rhs.0.len(), "ambient mismatch");
        HomologyClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &HomologyClass {
    type Output = HomologyClass;
    fn sub(self, rhs: &HomologyClass) -> HomologyClass {
        assert_eq!(self.0.len(), rhs.0.len(), "ambient mismatch");
        HomologyClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &HomologyClass {
    type Output = HomologyClass;
    fn neg(self) -> HomologyClass {
        HomologyClass(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<&HomologyClass> for i64 {
    type Output = HomologyClass;
    fn mul(self, rhs: &HomologyClass) -> HomologyClass {
        HomologyClass(rhs.0.iter().map(|a| self * a).collect())
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl AreaVector {
    pub fn new(areas: Vec<Rational>) -> Self {
        AreaVector(areas)
    }

    pub fn from_ints(areas: &[(i64, i64)]) -> Self {
        AreaVector(areas.iter().map(|(n, d)| rat(*n, *d)).collect())
    }

    /// Appends the area of a new generator.
    pub fn extended(&self, area: Rational) -> AreaVector {
        let mut v = self.0.clone();
        v.push(area);
        AreaVector(v)
    }

    pub fn min_positive(&self, idx: impl Iterator<Item = usize>) -> Option<Rational> {
        idx.map(|i| self.0[i].clone())
            .filter(|a| a.is_positive())
            .min()
    }
}

/// An invertible integer change of basis acting on coefficient vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transform {
    pub matrix: Vec<Vec<i64>>,
    pub inverse: Vec<Vec<i64>>,
}

impl Transform {
    pub fn identity(rank: usize) -> Self {
        let m: Vec<Vec<i64>> = (0..rank)
            .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
            .collect();
        Transform {
            matrix: m.clone(),
            inverse: m,
        }
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rank())
    }

    /// Reflection x ↦ x + (x·c)c in a class with c² = −2 (an involution).
    pub fn reflection(ambient: &AmbientLattice, c: &HomologyClass) -> Self {
        let n = ambient.rank();
        let mut m = vec![vec![0i64; n]; n];
        for j in 0..n {
            let xc = ambient.pair_unchecked(&ambient.generator(j), c);
            for i in 0..n {
                m[i][j] = i64::from(i == j) + xc * c.0[i];
            }
        }
        Transform {
            matrix: m.clone(),
            inverse: m,
        }
    }

    /// Permutation sending basis position `perm[k]` to position `k`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = vec![vec![0i64; n]; n];
        let mut inv = vec![vec![0i64; n]; n];
        for (k, &src) in perm.iter().enumerate() {
            m[k][src] = 1;
            inv[src][k] = 1;
        }
        Transform {
            matrix: m,
            inverse: inv,
        }
    }

    /// Cyclic permutation moving position `j` to the end, keeping the others in order.
    pub fn move_to_end(rank: usize, j: usize) -> Self {
        let perm: Vec<usize> = (0..rank)
            .filter(|&k| k != j)
            .chain(std::iter::once(j))
            .collect();
        Self::permutation(&perm)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Transform) -> Transform {
        Transform {
            matrix: matmul(&other.matrix, &self.matrix),
            inverse: matmul(&self.inverse, &other.inverse),
        }
    }

    pub fn apply(&self, c: &HomologyClass) -> HomologyClass {
        HomologyClass(matvec(&self.matrix, &c.0))
    }

    pub fn apply_inverse(&self, c: &HomologyClass) -> HomologyClass {
        HomologyClass(matvec(&self.inverse, &c.0))
    }

    /// Areas after the change of basis: the new generator j has area ω(T⁻¹ e_j).
    pub fn apply_areas(&self, w: &AreaVector) -> AreaVector {
        let n = self.rank();
        AreaVector(
            (0..n)
                .map(|j| {
                    (0..n)
                        .filter(|&i| self.inverse[i][j] != 0)
                        .fold(Rational::zero(), |acc, i| {
                            acc + &w.0[i] * BigInt::from(self.inverse[i][j])
                        })
                })
                .collect(),
        )
    }

    pub fn apply_areas_inverse(&self, w: &AreaVector) -> AreaVector {
        Transform {
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
        }
        .apply_areas(w)
    }

    /// Checks that the transform preserves the form on all basis pairs and fixes K.
    pub fn preserves(&self, ambient: &AmbientLattice) -> bool {
        let n = ambient.rank();
        let cols: Vec<HomologyClass> = (0..n).map(|j| self.apply(&ambient.generator(j))).collect();
        let form_ok = (0..n).all(|i| {
            (0..n).all(|j| ambient.pair_unchecked(&cols[i], &cols[j]) == ambient.gram(i, j))
        });
        let k = ambient.canonical();
        let inv_ok = matmul(&self.matrix, &self.inverse) == Transform::identity(n).matrix;
        form_ok && inv_ok && self.apply(&k) == k
    }
}

fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn matvec(a: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}
