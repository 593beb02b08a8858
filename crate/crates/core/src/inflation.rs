//! Normalized reduced vectors of irrational ruled surfaces, the regions 𝒫ⁿ and
//! 𝒫ⁿ_g, inflation steps, and a planner realizing vectors of 𝒫ⁿ₁ by a seed
//! followed by inflations, together with an exact replaying verifier.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::checks::Checklist;
use crate::cusp::Assumption;
use crate::document::PLAN_SCHEMA;
use crate::error::{Error, Result};
use crate::lattice::{
    format_rational, int, parse_rational, rat, rational_str, rational_vec, AmbientLattice,
    HomologyClass, Rational,
};

/// Retries of the planner, each dividing the ε factor by four.
const RETRIES: usize = 6;
/// Cap on the zig-zag doubling search.
const MAX_SUBSTEPS: u64 = 1 << 40;

/// Area data (δ_B, δ₁, …, δ_n) with ω(F) = 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedVector {
    pub g: u32,
    #[serde(with = "rational_vec")]
    pub entries: Vec<Rational>,
}

/// Which region to test: all symplectic forms, or those with ω·K < 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    P,
    Pg,
}

impl NormalizedVector {
    pub fn new(g: u32, entries: Vec<Rational>) -> Self {
        NormalizedVector { g, entries }
    }

    /// Parses a comma-separated list `δ_B,δ_1,…`.
    pub fn parse(g: u32, text: &str) -> Result<Self> {
        let entries = text
            .split(',')
            .enumerate()
            .map(|(i, s)| {
                parse_rational(s.trim())
                    .map_err(|e| Error::InvalidInput(format!("target[{i}]: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if entries.is_empty() {
            return Err(Error::InvalidInput("target: empty".into()));
        }
        Ok(NormalizedVector { g, entries })
    }

    pub fn n(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn delta_b(&self) -> &Rational {
        &self.entries[0]
    }

    /// δ_i for 1 ≤ i ≤ n.
    pub fn delta(&self, i: usize) -> &Rational {
        &self.entries[i]
    }

    pub fn format(&self) -> String {
        fmt_vec(&self.entries)
    }
}

/// The strict inequalities of the region that `v` violates; empty iff `v` lies in it.
pub fn region_violations(v: &NormalizedVector, region: Region) -> Vec<String> {
    let mut out = Vec::new();
    if v.entries.is_empty() {
        out.push("nonempty vector".to_string());
        return out;
    }
    let n = v.n();
    let g = int(v.g as i64);
    if !v.delta_b().is_positive() {
        out.push("δ_B > 0".to_string());
    }
    for i in 1..=n {
        if !v.delta(i).is_positive() {
            out.push(format!("δ_{i} > 0"));
        }
    }
    let ds = &v.entries[1..];
    match (n, region) {
        (0, Region::P) => {}
        (0, Region::Pg) => {
            if v.delta_b() <= &g {
                out.push(format!("δ_B > {}", v.g));
            }
        }
        _ => {
            match region {
                Region::P => {
                    let sq: Rational = ds.iter().map(|d| d * d).sum();
                    if !(int(2) * v.delta_b() - sq).is_positive() {
                        out.push("2δ_B - Σδ_i² > 0".to_string());
                    }
                }
                Region::Pg => {
                    let sum: Rational = ds.iter().sum();
                    if !(int(2) - int(2) * &g + int(2) * v.delta_b() - sum).is_positive() {
                        out.push(format!("2-2g+2δ_B-Σδ_i > 0 (g={})", v.g));
                    }
                }
            }
            if n == 1 {
                if v.delta(1) >= &int(1) {
                    out.push("δ_1 < 1".to_string());
                }
            } else {
                if v.delta(1) + v.delta(2) >= int(1) {
                    out.push("δ_1+δ_2 < 1".to_string());
                }
                for i in 1..n {
                    if v.delta(i) < v.delta(i + 1) {
                        out.push(format!("δ_{i} ≥ δ_{}", i + 1));
                    }
                }
            }
        }
    }
    out
}

pub fn in_region(v: &NormalizedVector, region: Region) -> bool {
    region_violations(v, region).is_empty()
}

/// Areas of the generators B, F, E1, …, En of X_{g,n}; ω(F) may differ from 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnnormalizedArea {
    pub g: u32,
    #[serde(with = "rational_vec")]
    pub areas: Vec<Rational>,
}

impl UnnormalizedArea {
    pub fn from_normalized(v: &NormalizedVector) -> Self {
        let mut areas = vec![v.entries[0].clone(), int(1)];
        areas.extend(v.entries[1..].iter().cloned());
        UnnormalizedArea { g: v.g, areas }
    }

    pub fn n(&self) -> usize {
        self.areas.len() - 2
    }

    pub fn ambient(&self) -> AmbientLattice {
        AmbientLattice::ruled(self.g, self.n())
    }

    pub fn area(&self, c: &HomologyClass) -> Result<Rational> {
        if c.0.len() != self.areas.len() {
            return Err(Error::AmbientMismatch {
                expected: self.areas.len(),
                got: c.0.len(),
            });
        }
        Ok(c.0.iter().zip(&self.areas).map(|(k, a)| a * int(*k)).sum())
    }

    pub fn fiber(&self) -> &Rational {
        &self.areas[1]
    }

    /// Name of the first generator with non-positive area.
    pub fn nonpositive_generator(&self) -> Option<String> {
        let amb = self.ambient();
        self.areas
            .iter()
            .zip(amb.names())
            .find(|(a, _)| !a.is_positive())
            .map(|(_, n)| n.clone())
    }
}

/// Inflation bound for `z`: `None` when unbounded (Z² ≥ 0), else ω(Z)/(−Z²).
pub fn lambda(a: &UnnormalizedArea, z: &HomologyClass) -> Result<Option<Rational>> {
    let sq = a.ambient().square(z)?;
    if sq >= 0 {
        return Ok(None);
    }
    Ok(Some(a.area(z)? / int(-sq)))
}

/// [ω′] = [ω] + t·PD(Z): the area of each generator c gains t·(Z·c).
pub fn inflate_step(
    a: &UnnormalizedArea,
    z: &HomologyClass,
    t: &Rational,
) -> Result<UnnormalizedArea> {
    let amb = a.ambient();
    let name = amb.format(z);
    if t.is_negative() {
        return Err(Error::InvalidMove(format!(
            "inflation along {name}: t = {} is negative",
            format_rational(t)
        )));
    }
    let wz = a.area(z)?;
    if !wz.is_positive() {
        return Err(Error::InvalidMove(format!(
            "inflation along {name}: area {} is not positive",
            format_rational(&wz)
        )));
    }
    if let Some(l) = lambda(a, z)? {
        if t >= &l {
            return Err(Error::InvalidMove(format!(
                "inflation along {name}: t = {} exceeds λ = {}",
                format_rational(t),
                format_rational(&l)
            )));
        }
    }
    let mut out = a.clone();
    for (i, area) in out.areas.iter_mut().enumerate() {
        let dot = amb.pair(z, &amb.generator(i))?;
        *area += t * int(dot);
    }
    if let Some(bad) = out.nonpositive_generator() {
        return Err(Error::InvalidMove(format!(
            "inflation along {name}: area of {bad} becomes non-positive"
        )));
    }
    Ok(out)
}

/// Divides by ω(F).
pub fn normalize(a: &UnnormalizedArea) -> Result<NormalizedVector> {
    let f = a.fiber().clone();
    if !f.is_positive() {
        return Err(Error::InvalidInput(format!(
            "ω(F) = {} is not positive",
            format_rational(&f)
        )));
    }
    let mut entries = vec![&a.areas[0] / &f];
    entries.extend(a.areas[2..].iter().map(|x| x / &f));
    Ok(NormalizedVector { g: a.g, entries })
}

/// Where a seed vector comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeedBase {
    /// Any form on the minimal surface X_{g,0}.
    Minimal,
    /// The point (x, 1−ε) near the ray {(x, 1) | x > ½} in 𝒫¹₁.
    Ray {
        #[serde(with = "rational_str")]
        x: Rational,
    },
    /// A realized vector with one more entry ε appended.
    Blowup(Box<Stage>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seed {
    pub base: SeedBase,
    #[serde(with = "rational_str")]
    pub epsilon: Rational,
    /// The normalized vector the plan starts from.
    #[serde(with = "rational_vec")]
    pub vector: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlanNode {
    Seed(Seed),
    Inflate {
        class: String,
        #[serde(with = "rational_str")]
        t: Rational,
    },
    /// Alternating steps along `classes[1]` then `classes[0]`, each of size t/substeps.
    ZigZag {
        classes: [String; 2],
        #[serde(with = "rational_str")]
        t: Rational,
        substeps: u64,
    },
}

/// A plan for one value of n: a seed followed by inflations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub n: usize,
    #[serde(with = "rational_vec")]
    pub target: Vec<Rational>,
    pub nodes: Vec<PlanNode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InflationPlan {
    pub schema: String,
    pub g: u32,
    pub plan: Stage,
    pub assumptions: Vec<Assumption>,
    pub checks: Checklist,
}

impl InflationPlan {
    pub fn target(&self) -> NormalizedVector {
        NormalizedVector::new(self.g, self.plan.target.clone())
    }
}

fn assumption(name: &str, statement: &str) -> Assumption {
    Assumption {
        name: name.into(),
        statement: statement.into(),
    }
}

fn plan_assumptions(n: usize) -> Vec<Assumption> {
    let mut out = vec![assumption(
        "inflation-curves",
        "the complex structures used carry smooth holomorphic curves in every inflated class",
    )];
    if n == 0 {
        out.push(assumption(
            "minimal-kahler",
            "every symplectic form on X_{g,0} is Kähler",
        ));
    } else {
        out.push(assumption(
            "ray-neighborhood",
            "vectors (x, 1-ε) with x > 1/2 and small ε > 0 are Kähler on X_{g,1}",
        ));
    }
    if n >= 2 {
        out.push(assumption(
            "small-blowup",
            "appending a small ε > 0 to a Kähler vector gives a Kähler vector",
        ));
    }
    out
}

fn ambient(g: u32, n: usize) -> AmbientLattice {
    AmbientLattice::ruled(g, n)
}

/// F − E_a − E_b as text.
fn fiber_minus(idx: &[usize]) -> String {
    let mut s = "F".to_string();
    for i in idx {
        s.push_str(&format!("-E{i}"));
    }
    s
}

/// Smallest power of two N such that N alternating substeps of size t/N succeed.
fn zigzag_substeps(a: &UnnormalizedArea, z: &[HomologyClass; 2], t: &Rational) -> Option<u64> {
    let mut n = 1u64;
    while n <= MAX_SUBSTEPS {
        if run_zigzag(a, z, t, n).is_ok() {
            return Some(n);
        }
        n *= 2;
    }
    None
}

fn run_zigzag(
    a: &UnnormalizedArea,
    z: &[HomologyClass; 2],
    t: &Rational,
    n: u64,
) -> Result<UnnormalizedArea> {
    let s = t / Rational::from_integer(n.into());
    let mut cur = a.clone();
    for _ in 0..n {
        cur = inflate_step(&cur, &z[1], &s)?;
        cur = inflate_step(&cur, &z[0], &s)?;
    }
    Ok(cur)
}

/// Builds the stage realizing `target` (δ_B, δ₁, …, δ_n), with ε = factor × its admissible maximum.
fn build_stage(g: u32, target: &[Rational], factor: &Rational) -> Result<Stage> {
    let n = target.len() - 1;
    let one = int(1);
    let mut nodes = Vec::new();
    match n {
        0 => nodes.push(PlanNode::Seed(Seed {
            base: SeedBase::Minimal,
            epsilon: Rational::zero(),
            vector: target.to_vec(),
        })),
        1 => {
            let (b, d) = (&target[0], &target[1]);
            let cap = (&one - d).min(&one - d / (int(2) * b));
            let eps = cap * factor;
            let top = &one - &eps;
            let x = &top * b / d;
            let t = &top / d - &one;
            nodes.push(PlanNode::Seed(Seed {
                base: SeedBase::Ray { x: x.clone() },
                epsilon: eps,
                vector: vec![x, top],
            }));
            nodes.push(PlanNode::Inflate {
                class: "B".into(),
                t,
            });
        }
        _ if n.is_multiple_of(2) => {
            let dn = &target[n];
            let eps = dn * factor;
            let mut sub = target[..n].to_vec();
            sub[0] = &target[0] - dn + &eps;
            sub[n - 1] = &target[n - 1] - dn + &eps;
            let base = build_stage(g, &sub, factor)?;
            let mut vector = sub;
            vector.push(eps.clone());
            nodes.push(PlanNode::Seed(Seed {
                base: SeedBase::Blowup(Box::new(base)),
                epsilon: eps.clone(),
                vector,
            }));
            nodes.push(PlanNode::Inflate {
                class: fiber_minus(&[n - 1, n]),
                t: dn - &eps,
            });
        }
        _ => {
            let k = n.div_ceil(2);
            let dn = &target[n];
            let eps = dn * factor;
            let t = (dn - &eps) / (&one - dn);
            let s = &one + &t;
            let mut sub = vec![&s * &target[0] - int(k as i64 - 1) * &t, &s * &target[1]];
            for d in &target[2..n] {
                sub.push(&s * d - &t);
            }
            let base = build_stage(g, &sub, factor)?;
            let mut vector = sub;
            vector.push(eps.clone());
            let seed = Seed {
                base: SeedBase::Blowup(Box::new(base)),
                epsilon: eps,
                vector,
            };
            let amb = ambient(g, n);
            let mut state =
                UnnormalizedArea::from_normalized(&NormalizedVector::new(g, seed.vector.clone()));
            nodes.push(PlanNode::Seed(seed));
            let first = fiber_minus(&[n]);
            state = inflate_step(&state, &amb.parse_class(&first)?, &t)?;
            nodes.push(PlanNode::Inflate {
                class: first,
                t: t.clone(),
            });
            for l in 2..k {
                let classes = [format!("E{}", 2 * l), fiber_minus(&[2 * l - 1, 2 * l])];
                let z = [amb.parse_class(&classes[0])?, amb.parse_class(&classes[1])?];
                let substeps = zigzag_substeps(&state, &z, &t).ok_or_else(|| {
                    Error::CheckFailed(format!(
                        "zig-zag along {} and {} found no substep count",
                        classes[0], classes[1]
                    ))
                })?;
                state = run_zigzag(&state, &z, &t, substeps)?;
                nodes.push(PlanNode::ZigZag {
                    classes,
                    t: t.clone(),
                    substeps,
                });
            }
            let mut last = "B".to_string();
            for l in 1..k {
                last.push_str(&format!("-E{}", 2 * l));
            }
            nodes.push(PlanNode::Inflate { class: last, t });
        }
    }
    Ok(Stage {
        n,
        target: target.to_vec(),
        nodes,
    })
}

/// Plans with ε equal to `factor` times its largest admissible value, quartering the
/// factor on verification failure.
pub fn plan_kahler_with(target: &NormalizedVector, factor: Rational) -> Result<InflationPlan> {
    let bad = region_violations(target, Region::Pg);
    if !bad.is_empty() {
        return Err(Error::Hypothesis(format!(
            "target {} outside 𝒫^{}_{}: violates {}",
            target.format(),
            target.n(),
            target.g,
            bad.join(", ")
        )));
    }
    let mut factor = factor;
    let mut last = None;
    for _ in 0..RETRIES {
        match build_stage(target.g, &target.entries, &factor) {
            Ok(stage) => {
                let mut plan = InflationPlan {
                    schema: PLAN_SCHEMA.to_string(),
                    g: target.g,
                    plan: stage,
                    assumptions: plan_assumptions(target.n()),
                    checks: Checklist::new(),
                };
                let checks = verify_plan(&plan);
                if checks.all_passed() {
                    plan.checks = checks;
                    return Ok(plan);
                }
                last = Some(
                    checks
                        .failures()
                        .iter()
                        .map(|c| c.name.clone())
                        .collect::<Vec<_>>()
                        .join("; "),
                );
            }
            Err(e) => last = Some(e.to_string()),
        }
        factor /= int(4);
    }
    Err(Error::CheckFailed(format!(
        "planner slack exhausted: {}",
        last.unwrap_or_default()
    )))
}

/// Plans a target of 𝒫ⁿ_g (⊆ 𝒫ⁿ₁) with ε a quarter of its admissible maximum.
pub fn plan_kahler(target: &NormalizedVector) -> Result<InflationPlan> {
    plan_kahler_with(target, rat(1, 4))
}

/// Replays one stage, returning the endpoint areas.
fn replay_stage(
    stage: &Stage,
    g: u32,
    prefix: &str,
    checks: &mut Checklist,
) -> Option<UnnormalizedArea> {
    let n = stage.n;
    if stage.target.len() != n + 1 {
        checks.push(
            format!("{prefix}target length"),
            false,
            format!("{} entries for n = {n}", stage.target.len()),
        );
        return None;
    }
    let amb = ambient(g, n);
    let mut state: Option<UnnormalizedArea> = None;
    for (i, node) in stage.nodes.iter().enumerate() {
        let tag = format!("{prefix}node[{i}]");
        match node {
            PlanNode::Seed(seed) => {
                if i != 0 {
                    checks.push(format!("{tag} seed first"), false, "seed after other nodes");
                    return None;
                }
                if seed.vector.len() != n + 1 {
                    checks.push(
                        format!("{tag} seed length"),
                        false,
                        format!("{} entries for n = {n}", seed.vector.len()),
                    );
                    return None;
                }
                let v = NormalizedVector::new(g, seed.vector.clone());
                match &seed.base {
                    SeedBase::Minimal => {
                        checks.check_eq(format!("{tag} minimal seed has n = 0"), n, 0);
                        let bad = region_violations(&v, Region::P);
                        checks.push(format!("{tag} seed in 𝒫^0"), bad.is_empty(), bad.join(", "));
                    }
                    SeedBase::Ray { x } => {
                        checks.check_eq(format!("{tag} ray seed has n = 1"), n, 1);
                        checks.push(
                            format!("{tag} ε > 0"),
                            seed.epsilon.is_positive(),
                            format_rational(&seed.epsilon),
                        );
                        let expect = vec![x.clone(), int(1) - &seed.epsilon];
                        checks.push(
                            format!("{tag} seed = (x, 1-ε)"),
                            seed.vector == expect,
                            format!("({}) vs ({})", fmt_vec(&seed.vector), fmt_vec(&expect)),
                        );
                        checks.push(format!("{tag} x > 1/2"), x > &rat(1, 2), format_rational(x));
                        let bad = region_violations(
                            &NormalizedVector::new(1, seed.vector.clone()),
                            Region::Pg,
                        );
                        checks.push(
                            format!("{tag} seed in 𝒫^1_1"),
                            bad.is_empty(),
                            bad.join(", "),
                        );
                    }
                    SeedBase::Blowup(base) => {
                        checks.check_eq(format!("{tag} base has n - 1 entries"), base.n + 1, n);
                        replay_stage(base, g, &format!("{tag} base/"), checks)?;
                        checks.push(
                            format!("{tag} ε > 0"),
                            seed.epsilon.is_positive(),
                            format_rational(&seed.epsilon),
                        );
                        let mut expect = base.target.clone();
                        expect.push(seed.epsilon.clone());
                        checks.push(
                            format!("{tag} seed = base target + ε"),
                            seed.vector == expect,
                            format!("({}) vs ({})", fmt_vec(&seed.vector), fmt_vec(&expect)),
                        );
                        let bad = region_violations(
                            &NormalizedVector::new(1, seed.vector.clone()),
                            Region::Pg,
                        );
                        checks.push(
                            format!("{tag} seed in 𝒫^{n}_1"),
                            bad.is_empty(),
                            bad.join(", "),
                        );
                    }
                }
                state = Some(UnnormalizedArea::from_normalized(&v));
            }
            PlanNode::Inflate { class, t } => {
                let Some(cur) = state.as_ref() else {
                    checks.push(format!("{tag} seeded"), false, "inflation before seed");
                    return None;
                };
                let z = match amb.parse_class(class) {
                    Ok(z) => z,
                    Err(e) => {
                        checks.push(format!("{tag} class"), false, e.to_string());
                        return None;
                    }
                };
                let detail = bound_detail(cur, &z, t);
                match inflate_step(cur, &z, t) {
                    Ok(next) => {
                        checks.push(
                            format!("{tag} inflate {class}: 0 ≤ t < λ, areas > 0"),
                            true,
                            detail,
                        );
                        state = Some(next);
                    }
                    Err(e) => {
                        checks.push(
                            format!("{tag} inflate {class}: 0 ≤ t < λ, areas > 0"),
                            false,
                            e.to_string(),
                        );
                        return None;
                    }
                }
            }
            PlanNode::ZigZag {
                classes,
                t,
                substeps,
            } => {
                let Some(cur) = state.as_ref() else {
                    checks.push(format!("{tag} seeded"), false, "zig-zag before seed");
                    return None;
                };
                let z = match (amb.parse_class(&classes[0]), amb.parse_class(&classes[1])) {
                    (Ok(a), Ok(b)) => [a, b],
                    (Err(e), _) | (_, Err(e)) => {
                        checks.push(format!("{tag} classes"), false, e.to_string());
                        return None;
                    }
                };
                if let Some((a, b)) = zigzag_indices(&amb, &z) {
                    let lhs = &cur.areas[a + 1] + &cur.areas[b + 1] + t;
                    checks.push(
                        format!("{tag} zig-zag corners: ω(E{a}) + ω(E{b}) + t < ω(F)"),
                        &lhs < cur.fiber(),
                        format!(
                            "{} < {}",
                            format_rational(&lhs),
                            format_rational(cur.fiber())
                        ),
                    );
                } else {
                    checks.push(
                        format!("{tag} zig-zag pair shape"),
                        false,
                        format!("{} / {}", classes[0], classes[1]),
                    );
                    return None;
                }
                if *substeps == 0 {
                    checks.push(format!("{tag} substeps > 0"), false, "0");
                    return None;
                }
                match run_zigzag(cur, &z, t, *substeps) {
                    Ok(next) => {
                        checks.push(
                            format!(
                                "{tag} zig-zag {} / {}: {substeps} substeps within bounds",
                                classes[0], classes[1]
                            ),
                            true,
                            format_rational(t),
                        );
                        state = Some(next);
                    }
                    Err(e) => {
                        checks.push(
                            format!(
                                "{tag} zig-zag {} / {}: {substeps} substeps within bounds",
                                classes[0], classes[1]
                            ),
                            false,
                            e.to_string(),
                        );
                        return None;
                    }
                }
            }
        }
    }
    let Some(end) = state else {
        checks.push(format!("{prefix}seeded"), false, "no nodes");
        return None;
    };
    match normalize(&end) {
        Ok(v) => {
            let sorted = |xs: &[Rational]| {
                let mut head = vec![xs[0].clone()];
                let mut tail = xs[1..].to_vec();
                tail.sort_by(|a, b| b.cmp(a));
                head.extend(tail);
                head
            };
            let got = sorted(&v.entries);
            let want = sorted(&stage.target);
            let passed = got == want;
            checks.push(
                format!("{prefix}endpoint = target"),
                passed,
                format!("({}) vs ({})", fmt_vec(&got), fmt_vec(&want)),
            );
        }
        Err(e) => checks.push(format!("{prefix}endpoint = target"), false, e.to_string()),
    }
    Some(end)
}

fn fmt_vec(xs: &[Rational]) -> String {
    xs.iter().map(format_rational).collect::<Vec<_>>().join(",")
}

fn bound_detail(a: &UnnormalizedArea, z: &HomologyClass, t: &Rational) -> String {
    match lambda(a, z) {
        Ok(Some(l)) => format!("t = {} < λ = {}", format_rational(t), format_rational(&l)),
        Ok(None) => format!("t = {}, λ = ∞", format_rational(t)),
        Err(e) => e.to_string(),
    }
}

/// For a pair (E_b, F − E_a − E_b), the indices (a, b).
fn zigzag_indices(amb: &AmbientLattice, z: &[HomologyClass; 2]) -> Option<(usize, usize)> {
    let off = amb.exceptional_offset();
    let e: Vec<usize> = (0..amb.rank()).filter(|&i| z[0].0[i] != 0).collect();
    if e.len() != 1 || e[0] < off || z[0].0[e[0]] != 1 {
        return None;
    }
    let b = e[0];
    let nz: Vec<usize> = (0..amb.rank()).filter(|&i| z[1].0[i] != 0).collect();
    if nz.len() != 3 || z[1].0[1] != 1 || z[1].0[b] != -1 {
        return None;
    }
    let a = *nz.iter().find(|&&i| i >= off && i != b)?;
    (z[1].0[a] == -1).then_some((a - off + 1, b - off + 1))
}

/// Replays every node with exact arithmetic; failures are carried in the checklist.
pub fn verify_plan(plan: &InflationPlan) -> Checklist {
    let mut checks = Checklist::new();
    checks.check_eq("schema", plan.schema.as_str(), PLAN_SCHEMA);
    let target = plan.target();
    if target.entries.is_empty() {
        checks.push("target nonempty", false, "");
        return checks;
    }
    let bad = region_violations(&target, Region::Pg);
    checks.push(
        format!("target in 𝒫^{}_{}", target.n(), plan.g),
        bad.is_empty(),
        bad.join(", "),
    );
    let names: Vec<&str> = plan.assumptions.iter().map(|a| a.name.as_str()).collect();
    for a in plan_assumptions(target.n()) {
        checks.push(
            format!("assumption {} recorded", a.name),
            names.contains(&a.name.as_str()),
            a.statement,
        );
    }
    replay_stage(&plan.plan, plan.g, "", &mut checks);
    checks
}
