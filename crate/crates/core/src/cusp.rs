//! Weight sequences, admissible subchains, cusp classes, normal crossing resolutions,
//! positive combinations and the end-to-end affine-ruledness certificate.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::checks::Checklist;
use crate::divisor::{DivisorComponent, DivisorConfig};
use crate::document::{ConfigDocument, CERTIFICATE_SCHEMA};
use crate::error::{Error, Result};
use crate::exceptional::{d_good, enumerate_general, Bounds};
use crate::lattice::{
    format_rational, parse_rational, rational_str, AreaVector, HomologyClass, Rational,
};
use crate::moves::{blowup_areas, blowup_named, replay_blowdown, BlowupMove};
use crate::reduction::{
    classify_kind, classify_minimal_model, good_chain, partially_minimal_reduce,
    quasi_minimal_reduce, ruled_reduce, ruled_validate, second_kind_reduce, GoodChain, MinimalCase,
    MinimalModelTag, PairKind, ReductionTrace, TerminalTag,
};

/// Multiplicities of the exceptional classes resolving a (p,q)-cusp.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSequence {
    pub p: i64,
    pub q: i64,
    pub weights: Vec<i64>,
}

impl WeightSequence {
    pub fn sum(&self) -> i64 {
        self.weights.iter().sum()
    }

    pub fn sum_squares(&self) -> i64 {
        self.weights.iter().map(|m| m * m).sum()
    }

    /// Σm² = pq, Σm = p+q−1 and m ≥ 1; empty sequences only for (1,0) and (0,1).
    pub fn checks(&self) -> Checklist {
        let mut out = Checklist::new();
        if self.weights.is_empty() {
            let degenerate = matches!((self.p, self.q), (1, 0) | (0, 1));
            out.push(
                "degenerate_pair",
                degenerate,
                format!("({},{}) with empty weights", self.p, self.q),
            );
            return out;
        }
        out.check_eq("sum_of_squares", self.sum_squares(), self.p * self.q);
        out.check_eq("sum", self.sum(), self.p + self.q - 1);
        out.push(
            "positive",
            self.weights.iter().all(|m| *m >= 1),
            format!("{:?}", self.weights),
        );
        out
    }
}

/// W(p,q) from the Euclidean recursion; (1,0) and (0,1) give the empty sequence.
pub fn weight_sequence(p: i64, q: i64) -> Result<WeightSequence> {
    if matches!((p, q), (1, 0) | (0, 1)) {
        return Ok(WeightSequence {
            p,
            q,
            weights: vec![],
        });
    }
    if p < 1 || q < 1 {
        return Err(Error::InvalidInput(format!(
            "({p},{q}): p and q must be positive"
        )));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::InvalidInput(format!("({p},{q}) are not coprime")));
    }
    let (mut a, mut b) = (p, q);
    let mut weights = Vec::new();
    while a != b {
        weights.push(a.min(b));
        (a, b) = ((a - b).abs(), a.min(b));
    }
    weights.push(a);
    Ok(WeightSequence { p, q, weights })
}

/// c₁ = 1, c₂ = a₁, cᵢ = a_{i−1}c_{i−1} − c_{i−2}; entries saturate at the i64 bounds.
pub fn associated_sequence(a: &[i64]) -> Vec<i64> {
    let mut c: Vec<i64> = Vec::with_capacity(a.len());
    for i in 0..a.len() {
        let next = match i {
            0 => 1,
            1 => a[0],
            _ => a[i - 1].saturating_mul(c[i - 1]).saturating_sub(c[i - 2]),
        };
        c.push(next);
    }
    c
}

/// An accepted sequence (a₁…a_k) with its associated sequence and cusp type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleSubchain {
    pub a: Vec<i64>,
    pub c: Vec<i64>,
    pub k: usize,
    /// c_{k−1} − c_k a_k, with c₀ = 0.
    pub p: i64,
    /// c_k.
    pub q: i64,
}

/// The first admissibility condition that fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub condition: String,
    pub detail: String,
}

impl std::fmt::Display for Rejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.condition, self.detail)
    }
}

pub fn admissible_check(a: &[i64]) -> std::result::Result<AdmissibleSubchain, Rejection> {
    let reject = |condition: &str, detail: String| {
        Err(Rejection {
            condition: condition.to_string(),
            detail,
        })
    };
    if a.is_empty() {
        return reject("nonempty", "empty sequence".into());
    }
    let c = associated_sequence(a);
    if c.iter().any(|x| x.abs() >= i64::MAX / 2) {
        return reject("bounded", format!("associated sequence overflows: {c:?}"));
    }
    if let Some(i) = c.iter().position(|x| *x < 0) {
        return reject("c_i >= 0", format!("c_{} = {} in {c:?}", i + 1, c[i]));
    }
    let k = a.len();
    let prev = if k >= 2 { c[k - 2] } else { 0 };
    let p = prev - c[k - 1] * a[k - 1];
    if p <= 0 {
        return reject(
            "c_(k-1) - c_k a_k > 0",
            format!("{prev} - {}·{} = {p}", c[k - 1], a[k - 1]),
        );
    }
    let q = c[k - 1];
    if p.gcd(&q) != 1 {
        return reject("coprime", format!("gcd({p},{q}) = {}", p.gcd(&q)));
    }
    Ok(AdmissibleSubchain {
        a: a.to_vec(),
        c,
        k,
        p,
        q,
    })
}

/// The class A = Σ cᵢ[Dᵢ] with its intersection data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspClass {
    pub a: HomologyClass,
    pub p: i64,
    pub q: i64,
    pub d_a: String,
    pub d_b: String,
    pub checks: Checklist,
}

/// The five identities A·[D_a] = p, A·[D_b] = q, A·[D_j] = 0 otherwise, A² and A·K.
pub fn cusp_identities(
    config: &DivisorConfig,
    a: &HomologyClass,
    d_a: Option<&str>,
    d_b: Option<&str>,
    p: i64,
    q: i64,
    square: i64,
    k_dot: i64,
) -> Result<Checklist> {
    let amb = &config.ambient;
    let mut out = Checklist::new();
    let cls = |id: &str| {
        config
            .component(id)
            .map(|c| c.cls.clone())
            .ok_or_else(|| Error::InvalidInput(format!("unknown component {id}")))
    };
    match d_a {
        Some(id) => out.check_eq(format!("A·[{id}] = p"), amb.pair(a, &cls(id)?)?, p),
        None => out.push("A·[D_a] = p", true, "D_a lies off the divisor"),
    }
    match d_b {
        Some(id) => out.check_eq(format!("A·[{id}] = q"), amb.pair(a, &cls(id)?)?, q),
        None => out.push("A·[D_b] = q", q == 0, format!("no D_b, q = {q}")),
    }
    let others: Vec<String> = config
        .components
        .iter()
        .filter(|c| Some(c.id.as_str()) != d_a && Some(c.id.as_str()) != d_b)
        .filter(|c| amb.pair_unchecked(a, &c.cls) != 0)
        .map(|c| format!("{}: {}", c.id, amb.pair_unchecked(a, &c.cls)))
        .collect();
    out.push(
        "A·[D_j] = 0 otherwise",
        others.is_empty(),
        if others.is_empty() {
            "all zero".to_string()
        } else {
            others.join(", ")
        },
    );
    out.check_eq("A² = pq", amb.square(a)?, square);
    out.check_eq("A·K = -p-q-1", amb.k_dot(a)?, k_dot);
    Ok(out)
}

fn fail_on(checks: &Checklist, what: &str) -> Result<()> {
    if checks.all_passed() {
        return Ok(());
    }
    let f: Vec<String> = checks
        .failures()
        .iter()
        .map(|c| format!("{} ({})", c.name, c.detail))
        .collect();
    Err(Error::CheckFailed(format!("{what}: {}", f.join("; "))))
}

/// A = Σ_{i≤k} cᵢ[Dᵢ] along a chain labeling, checked against the five identities.
pub fn cusp_class(
    config: &DivisorConfig,
    labels: &[String],
    adm: &AdmissibleSubchain,
) -> Result<CuspClass> {
    let k = adm.k;
    if labels.len() <= k {
        return Err(Error::InvalidInput(format!(
            "chain of length {} has no D_(k+1) for k = {k}",
            labels.len()
        )));
    }
    for w in labels.windows(2) {
        if config.edge_multiplicity(&w[0], &w[1]) != 1 {
            return Err(Error::InvalidConfig(format!(
                "{} and {} are not adjacent in the chain",
                w[0], w[1]
            )));
        }
    }
    let amb = &config.ambient;
    let mut a = amb.zero();
    for (i, id) in labels[..k].iter().enumerate() {
        let c = config
            .component(id)
            .ok_or_else(|| Error::InvalidInput(format!("unknown component {id}")))?;
        a = &a + &(adm.c[i] * &c.cls);
    }
    let (d_a, d_b) = (labels[k - 1].clone(), labels[k].clone());
    let checks = cusp_identities(
        config,
        &a,
        Some(&d_a),
        Some(&d_b),
        adm.p,
        adm.q,
        adm.p * adm.q,
        -adm.p - adm.q - 1,
    )?;
    fail_on(&checks, "cusp class identities")?;
    Ok(CuspClass {
        a,
        p: adm.p,
        q: adm.q,
        d_a,
        d_b,
        checks,
    })
}

/// One blowup of a resolution pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionBlowup {
    pub generator: String,
    pub component: String,
    pub mv: BlowupMove,
    /// Contact orders of the curve with the two branches at the center, in `mv` order.
    pub contacts: (i64, i64),
    pub multiplicity: i64,
    #[serde(with = "rational_str")]
    pub area: Rational,
}

/// Total transform of a configuration after a resolution pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub config: DivisorConfig,
    pub areas: AreaVector,
    pub blowups: Vec<ResolutionBlowup>,
    /// Exceptional classes in the final lattice, one per blowup.
    pub exceptional: Vec<HomologyClass>,
    /// A in the final lattice.
    pub a: HomologyClass,
    pub a_tilde: HomologyClass,
    /// Classes of the pre-resolution components in the final lattice.
    pub total_transforms: BTreeMap<String, HomologyClass>,
    pub checks: Checklist,
}

impl Resolution {
    pub fn multiplicities(&self) -> Vec<i64> {
        self.blowups.iter().map(|b| b.multiplicity).collect()
    }
}

/// Incremental blowups that keep A, the old component classes and the exceptional classes lifted.
struct Resolver {
    cfg: DivisorConfig,
    w: AreaVector,
    a: HomologyClass,
    transforms: BTreeMap<String, HomologyClass>,
    exceptional: Vec<HomologyClass>,
    blowups: Vec<ResolutionBlowup>,
    scale: Rational,
}

impl Resolver {
    fn new(config: &DivisorConfig, w: &AreaVector, a: &HomologyClass) -> Result<Self> {
        let amb = &config.ambient;
        let mut bounds: Vec<Rational> = Vec::new();
        for c in &config.components {
            bounds.push(amb.area(&c.cls, w)?);
        }
        bounds.extend(amb.exceptional_indices().map(|i| w.0[i].clone()));
        let hyp = config.hypothesis_area(w)?;
        if hyp.is_negative() {
            bounds.push(-hyp);
        }
        let k_area = amb.area(&amb.canonical(), w)?;
        if k_area.is_negative() {
            bounds.push(-k_area);
        }
        let min = bounds
            .into_iter()
            .filter(|x| x.is_positive())
            .min()
            .ok_or_else(|| {
                Error::InvalidConfig("no positive area to scale the resolution by".into())
            })?;
        Ok(Resolver {
            cfg: config.clone(),
            w: w.clone(),
            a: a.clone(),
            transforms: config
                .components
                .iter()
                .map(|c| (c.id.clone(), c.cls.clone()))
                .collect(),
            exceptional: Vec::new(),
            blowups: Vec::new(),
            scale: min / BigInt::from(2),
        })
    }

    fn fresh_generator(&self) -> String {
        let i = self.blowups.len() + 1;
        let names = self.cfg.ambient.names();
        let mut prime = "'".to_string();
        loop {
            let n = format!("E{prime}{i}");
            if !names.contains(&n) {
                return n;
            }
            prime.push('\'');
        }
    }

    /// Blows up and returns the new component id.
    fn blow(&mut self, mv: BlowupMove, contacts: (i64, i64), multiplicity: i64) -> Result<String> {
        let generator = self.fresh_generator();
        let comp = self.cfg.fresh_id(&format!("e{}", &generator[1..]));
        let area = &self.scale / BigInt::from(2).pow(self.blowups.len() as u32 + 1);
        let b = blowup_named(&self.cfg, &mv, Some(&generator), Some(&comp))?;
        self.w = blowup_areas(&self.cfg.ambient, &self.w, &area);
        self.a = b.embedding.lift(&self.a);
        for c in self.transforms.values_mut() {
            *c = b.embedding.lift(c);
        }
        for e in &mut self.exceptional {
            *e = b.embedding.lift(e);
        }
        self.exceptional.push(b.exceptional.clone());
        self.cfg = b.config;
        self.blowups.push(ResolutionBlowup {
            generator,
            component: comp.clone(),
            mv,
            contacts,
            multiplicity,
            area,
        });
        Ok(comp)
    }

    fn a_tilde(&self) -> HomologyClass {
        let mut t = self.a.clone();
        for (b, e) in self.blowups.iter().zip(&self.exceptional) {
            t = &t - &(b.multiplicity * e);
        }
        t
    }

    fn finish(self, checks: Checklist) -> Resolution {
        let a_tilde = self.a_tilde();
        Resolution {
            config: self.cfg,
            areas: self.w,
            blowups: self.blowups,
            exceptional: self.exceptional,
            a: self.a,
            a_tilde,
            total_transforms: self.transforms,
            checks,
        }
    }
}

/// Ã checks: square 0, Ã·K̃ = −2, 1 with the last exceptional component, 0 with the rest.
fn resolution_checks(res: &Resolver, last: Option<&str>) -> Result<Checklist> {
    let amb = &res.cfg.ambient;
    let t = res.a_tilde();
    let mut out = Checklist::new();
    out.check_eq("Ã² = 0", amb.square(&t)?, 0);
    out.check_eq("Ã·K̃ = -2", amb.k_dot(&t)?, -2);
    if let Some(last) = last {
        let c = &res.cfg.component(last).unwrap().cls;
        out.check_eq(format!("Ã·[{last}] = 1"), amb.pair(&t, c)?, 1);
    }
    let bad: Vec<String> = res
        .cfg
        .components
        .iter()
        .filter(|c| Some(c.id.as_str()) != last)
        .filter(|c| amb.pair_unchecked(&t, &c.cls) != 0)
        .map(|c| format!("{}: {}", c.id, amb.pair_unchecked(&t, &c.cls)))
        .collect();
    out.push(
        "Ã·[other components] = 0",
        bad.is_empty(),
        if bad.is_empty() {
            "all zero".to_string()
        } else {
            bad.join(", ")
        },
    );
    Ok(out)
}

/// Toric blowups at D_a ∩ D_b following the (pₙ,qₙ) recursion, contact p at D_a.
pub fn resolve_pattern(
    config: &DivisorConfig,
    w: &AreaVector,
    a: &HomologyClass,
    d_a: &str,
    d_b: Option<&str>,
    p: i64,
    q: i64,
) -> Result<Resolution> {
    let ws = weight_sequence(p, q)?;
    let mut r = Resolver::new(config, w, a)?;
    if ws.weights.is_empty() {
        let amb = &config.ambient;
        let mut checks = Checklist::new();
        checks.check_eq("Ã² = 0", amb.square(a)?, 0);
        checks.check_eq("Ã·K̃ = -2", amb.k_dot(a)?, -2);
        fail_on(&checks, "degenerate resolution")?;
        return Ok(r.finish(checks));
    }
    let d_b = d_b.ok_or_else(|| Error::InvalidInput("a non-degenerate cusp needs D_b".into()))?;
    if config.edge_multiplicity(d_a, d_b) == 0 {
        return Err(Error::InvalidConfig(format!(
            "no edge ({d_a},{d_b}) to resolve at"
        )));
    }
    let (mut x, mut y, mut pa, mut qb) = (d_a.to_string(), d_b.to_string(), p, q);
    loop {
        let m = pa.min(qb);
        let e = r.blow(
            BlowupMove::Toric {
                a: x.clone(),
                b: y.clone(),
            },
            (pa, qb),
            m,
        )?;
        if pa == qb {
            let mut checks = resolution_checks(&r, Some(&e))?;
            checks.check_eq(
                "multiplicities = W(p,q)",
                r.blowups.iter().map(|b| b.multiplicity).collect::<Vec<_>>(),
                ws.weights.clone(),
            );
            fail_on(&checks, "resolution")?;
            return Ok(r.finish(checks));
        }
        if pa > qb {
            (y, pa) = (e, pa - qb);
        } else {
            (x, qb) = (e, qb - pa);
        }
    }
}

/// Non-negative coefficients over total-transform components with their target class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositiveCombination {
    /// The component D with contact order p.
    pub component: String,
    /// Contact order at the other branch, the multiplier of [D] − [D̃].
    pub q: i64,
    pub coefficients: BTreeMap<String, i64>,
    /// q([D] − [D̃]) − Σ mᵢ Eᵢ.
    pub target: HomologyClass,
    pub checks: Checklist,
}

/// Coefficients from the inductive splitting: whenever the tracked branch has the smaller
/// contact, the difference goes on the new exceptional component, which becomes tracked.
pub fn positive_combination(res: &Resolution, q: i64, d: &str) -> Result<PositiveCombination> {
    let amb = &res.config.ambient;
    let orig = res.total_transforms.get(d).ok_or_else(|| {
        Error::InvalidInput(format!("{d} was not part of the resolved configuration"))
    })?;
    let proper = &res
        .config
        .component(d)
        .ok_or_else(|| Error::InvalidInput(format!("unknown component {d}")))?
        .cls;
    let mut target = q * &(orig - proper);
    for (b, e) in res.blowups.iter().zip(&res.exceptional) {
        target = &target - &(b.multiplicity * e);
    }
    let mut coefficients = BTreeMap::new();
    let mut tracked = d.to_string();
    for b in &res.blowups {
        let BlowupMove::Toric { a, b: other } = &b.mv else {
            continue;
        };
        let (t, o) = if *a == tracked {
            b.contacts
        } else if *other == tracked {
            (b.contacts.1, b.contacts.0)
        } else {
            continue;
        };
        if t < o {
            *coefficients.entry(b.component.clone()).or_insert(0) += o - t;
            tracked = b.component.clone();
        }
    }
    let mut sum = amb.zero();
    for (id, l) in &coefficients {
        sum = &sum + &(*l * &res.config.component(id).unwrap().cls);
    }
    let mut checks = Checklist::new();
    let negative: Vec<&String> = coefficients
        .iter()
        .filter(|(_, l)| **l < 0)
        .map(|(id, _)| id)
        .collect();
    checks.push(
        "coefficients ≥ 0",
        negative.is_empty(),
        format!("{coefficients:?}"),
    );
    checks.push(
        "Σλ·[component] = target",
        sum == target,
        format!("{} = {}", amb.format(&sum), amb.format(&target)),
    );
    fail_on(&checks, "positive combination")?;
    Ok(PositiveCombination {
        component: d.to_string(),
        q,
        coefficients,
        target,
        checks,
    })
}

/// Which argument produced the cusp class at the terminal configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    AdmissibleSubchain,
    /// A = [D₁] on a b₂ ≤ 2 minimal model.
    MinimalModel,
    Comb,
    A3pSpecial,
    RuledFiber,
}

/// (p,q), A and the intersecting components; p is the contact at D_a.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspData {
    pub p: i64,
    pub q: i64,
    pub a: HomologyClass,
    pub a_text: String,
    pub d_a: Option<String>,
    pub d_b: Option<String>,
    /// The type with the larger entry first, then reversed.
    pub spellings: Vec<String>,
    pub degenerate: bool,
}

impl CuspData {
    fn new(
        cfg: &DivisorConfig,
        p: i64,
        q: i64,
        a: HomologyClass,
        d_a: Option<String>,
        d_b: Option<String>,
    ) -> Self {
        let (p, q, d_a, d_b) = if p >= q {
            (p, q, d_a, d_b)
        } else {
            (q, p, d_b, d_a)
        };
        CuspData {
            p,
            q,
            a_text: cfg.ambient.format(&a),
            a,
            d_a,
            d_b,
            spellings: vec![format!("({p},{q})"), format!("({q},{p})")],
            degenerate: q == 0,
        }
    }

    /// Expected A² and A·K; the A3′ class is a conic with contact 4 at one point.
    fn expected(&self, route: Route) -> (i64, i64) {
        if route == Route::A3pSpecial {
            (4, -6)
        } else {
            (self.p * self.q, -self.p - self.q - 1)
        }
    }

    fn identities(&self, cfg: &DivisorConfig, route: Route) -> Result<Checklist> {
        let (sq, kd) = self.expected(route);
        cusp_identities(
            cfg,
            &self.a,
            self.d_a.as_deref(),
            self.d_b.as_deref(),
            self.p,
            self.q,
            sq,
            kd,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionRecord {
    /// Total transform with the new generator areas.
    pub config: ConfigDocument,
    pub blowups: Vec<ResolutionBlowup>,
    pub multiplicities: Vec<i64>,
    pub a: HomologyClass,
    pub a_tilde: HomologyClass,
    pub a_tilde_text: String,
    pub checks: Checklist,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageTrace {
    pub stage: String,
    pub trace: ReductionTrace,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assumption {
    pub name: String,
    pub statement: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transported {
    pub cusp: CuspData,
    pub checks: Checklist,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsRecord {
    pub coeff: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area: Option<String>,
}

impl BoundsRecord {
    fn of(b: &Bounds) -> Self {
        BoundsRecord {
            coeff: b.coeff,
            area: b.area.as_ref().map(format_rational),
        }
    }

    pub fn bounds(&self) -> Result<Bounds> {
        Ok(Bounds {
            coeff: self.coeff,
            area: self.area.as_deref().map(parse_rational).transpose()?,
        })
    }
}

/// Everything needed to re-check the affine-ruledness argument for one input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineRuledCertificate {
    pub schema: String,
    pub input: ConfigDocument,
    /// SHA-256 of the compact JSON of `input`.
    pub input_digest: String,
    pub bounds: BoundsRecord,
    pub hypothesis: Checklist,
    pub route: Route,
    pub traces: Vec<StageTrace>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<PairKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimal_model: Option<MinimalModelTag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub good_chain: Option<GoodChain>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub admissible: Option<AdmissibleSubchain>,
    /// Configuration the cusp class lives on, including any auxiliary component.
    pub terminal: ConfigDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub auxiliary: Option<String>,
    pub cusp: CuspData,
    pub weights: WeightSequence,
    pub resolution: ResolutionRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positive_combination: Option<PositiveCombination>,
    pub identities: Checklist,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_good: Option<Checklist>,
    pub transported: Transported,
    pub assumptions: Vec<Assumption>,
    pub interpretations: Vec<String>,
}

impl AffineRuledCertificate {
    /// Every recorded checklist passed.
    pub fn all_green(&self) -> bool {
        self.hypothesis.all_passed()
            && self.identities.all_passed()
            && self.resolution.checks.all_passed()
            && self.transported.checks.all_passed()
            && self.d_good.as_ref().is_none_or(Checklist::all_passed)
            && self
                .positive_combination
                .as_ref()
                .is_none_or(|p| p.checks.all_passed())
    }
}

pub fn digest(doc: &ConfigDocument) -> String {
    let bytes = serde_json::to_vec(doc).expect("documents serialize");
    Sha256::digest(&bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn assumption(name: &str, statement: &str) -> Assumption {
    Assumption {
        name: name.to_string(),
        statement: statement.to_string(),
    }
}

fn cusp_assumptions() -> Vec<Assumption> {
    vec![
        assumption("sw-nonvanishing", "The numerical criterion giving SW(Ã) ≠ 0 is used as a black box."),
        assumption(
            "embedded-representatives",
            "A D̃-good class with index 2 is represented by embedded spheres for generic almost complex structures making D̃ holomorphic.",
        ),
        assumption(
            "moduli-correspondence",
            "Embedded spheres of class Ã on the resolution correspond to rational curves of class A with contact orders (p,q) at D_a ∩ D_b.",
        ),
        assumption(
            "blowup-invariance",
            "Affine-ruledness passes to toric, non-toric, half-toric and exterior blowups; the transport below realizes this on homology.",
        ),
    ]
}

fn fiber_assumptions() -> Vec<Assumption> {
    vec![
        assumption("fiber-class", "The fiber class is J-nef and its embedded curves foliate the complement of finitely many fibers."),
        assumption(
            "blowup-invariance",
            "Affine-ruledness passes to toric, non-toric, half-toric and exterior blowups; the transport below realizes this on homology.",
        ),
    ]
}

fn a3p_assumptions() -> Vec<Assumption> {
    let mut v = cusp_assumptions();
    v.push(assumption(
        "conic-descent",
        "Smooth representatives of 2h−e₁−e₂−e₃−e₄ descend to conics with contact order 4 at one point of D.",
    ));
    v
}

/// Hypothesis checklist: valid areas, area(K+[D]) < 0, connected and a tree of spheres when rational.
pub fn hypothesis_checks(config: &DivisorConfig, w: &AreaVector) -> Result<Checklist> {
    let mut out = Checklist::new();
    let problems = config.validate_areas(w);
    out.push(
        "areas",
        problems.is_empty(),
        if problems.is_empty() {
            "all positive".into()
        } else {
            problems.join("; ")
        },
    );
    let h = config.hypothesis_area(w)?;
    out.push(
        "area(K+[D]) < 0",
        h.is_negative(),
        format!("area(K+[D]) = {}", format_rational(&h)),
    );
    if config.ambient.is_rational() {
        out.push(
            "connected",
            config.is_connected(),
            format!("{} connected pieces", config.connected_count()),
        );
        let tree = config.check_tree_of_spheres();
        out.push(
            "tree of spheres",
            tree.is_empty(),
            if tree.is_empty() {
                "ok".into()
            } else {
                tree.join("; ")
            },
        );
    }
    Ok(out)
}

/// Intermediate state while certifying.
struct Terminal {
    config: DivisorConfig,
    areas: AreaVector,
    route: Route,
    cusp: CuspData,
    auxiliary: Option<String>,
    resolution: Resolution,
    positive: Option<PositiveCombination>,
    extra: Checklist,
    interpretations: Vec<String>,
}

fn neighbor_of(cfg: &DivisorConfig, id: &str) -> Option<String> {
    let mut n = cfg.neighbors(id);
    n.sort();
    n.dedup();
    n.into_iter().next()
}

/// Cusp class, resolution and checks on a b₂ ≤ 2 configuration.
fn small_b2_route(cfg: &DivisorConfig, w: &AreaVector) -> Result<(Terminal, MinimalModelTag)> {
    let tag = classify_minimal_model(cfg).ok_or_else(|| {
        Error::at("minimal_model")(Error::Stuck(
            "no minimal-model case matches the terminal configuration".into(),
        ))
    })?;
    let amb = &cfg.ambient;
    use MinimalCase::*;
    let mut interpretations = Vec::new();
    let t = match tag.case {
        A1 | A2 | B1 | B2 | B3 | C1 | C2 | C3 => {
            return Err(Error::at("minimal_model")(Error::InvalidConfig(format!(
                "terminal matches the log Calabi-Yau case {}",
                tag.case.label()
            ))))
        }
        B1p | C1p => {
            let fiber = match (tag.case, tag.swapped) {
                (B1p, false) => amb.generator(1),
                (B1p, true) => amb.generator(0),
                _ => amb.cp2_1_fiber().expect("CP²#1 has a fiber class"),
            };
            let d_a = tag.order[0].clone();
            let d_b = tag.order.get(1).cloned();
            if d_b.is_none() {
                interpretations.push(
                    "comb with no teeth: D_b is absent and only D_a meets the fiber class".into(),
                );
            }
            let cusp = CuspData::new(cfg, 1, 0, fiber.clone(), Some(d_a.clone()), d_b.clone());
            let res = resolve_pattern(cfg, w, &fiber, &d_a, d_b.as_deref(), 1, 0)
                .map_err(Error::at("resolution"))?;
            Terminal {
                config: cfg.clone(),
                areas: w.clone(),
                route: Route::Comb,
                cusp,
                auxiliary: None,
                resolution: res,
                positive: None,
                extra: Checklist::new(),
                interpretations,
            }
        }
        A3p => return a3p_route(cfg, w).map(|t| (t, tag)),
        CombLike => {
            return Err(Error::at("minimal_model")(Error::Unsupported(
                "comb-like ruled model on the rational route".into(),
            )))
        }
        A1p | A2p | B2p | B3p | C2p | C3p => {
            let mut cfg = cfg.clone();
            let mut auxiliary = None;
            let x = tag.order[0].clone();
            if tag.case == A1p {
                let id = cfg.fresh_id("aux");
                let h = amb.generator(0);
                cfg.components.push(DivisorComponent::new(id.clone(), h, 0));
                cfg.add_edge(&x, &id);
                interpretations.push(format!(
                    "auxiliary line {id} added through {x} so the A2' argument applies"
                ));
                auxiliary = Some(id);
            }
            let y = neighbor_of(&cfg, &x).ok_or_else(|| {
                Error::at("minimal_model")(Error::InvalidConfig(format!("{x} has no neighbor")))
            })?;
            let xc = cfg.component(&x).unwrap().cls.clone();
            let q = amb.square(&xc)?;
            let cusp = CuspData::new(&cfg, 1, q, xc.clone(), Some(y.clone()), Some(x.clone()));
            let res = resolve_pattern(
                &cfg,
                w,
                &xc,
                cusp.d_a.as_deref().unwrap(),
                cusp.d_b.as_deref(),
                cusp.p,
                cusp.q,
            )
            .map_err(Error::at("resolution"))?;
            let mut extra = Checklist::new();
            let proper = &res.config.component(&x).unwrap().cls;
            extra.push(
                "Ã = [proper transform of D_1]",
                &res.a_tilde == proper,
                format!(
                    "{} vs {}",
                    res.config.ambient.format(&res.a_tilde),
                    res.config.ambient.format(proper)
                ),
            );
            let positive = if cusp.degenerate {
                None
            } else {
                Some(
                    positive_combination(&res, cusp.q, cusp.d_a.as_deref().unwrap())
                        .map_err(Error::at("positive_combination"))?,
                )
            };
            Terminal {
                config: cfg,
                areas: w.clone(),
                route: Route::MinimalModel,
                cusp,
                auxiliary,
                resolution: res,
                positive,
                extra,
                interpretations,
            }
        }
    };
    Ok((t, tag))
}

/// Half-toric blowup then three toric blowups on the 2h sphere; Ã = 2h − Σeᵢ.
fn a3p_route(cfg: &DivisorConfig, w: &AreaVector) -> Result<Terminal> {
    let x = cfg.components[0].id.clone();
    let a = cfg.components[0].cls.clone();
    let mut r = Resolver::new(cfg, w, &a).map_err(Error::at("resolution"))?;
    let stage = Error::at("resolution");
    let mut last = r
        .blow(
            BlowupMove::HalfToric {
                component: x.clone(),
            },
            (4, 0),
            1,
        )
        .map_err(stage)?;
    for _ in 0..3 {
        last = r
            .blow(
                BlowupMove::Toric {
                    a: x.clone(),
                    b: last.clone(),
                },
                (4 - r.blowups.len() as i64, 1),
                1,
            )
            .map_err(Error::at("resolution"))?;
    }
    let checks = resolution_checks(&r, Some(&last))?;
    fail_on(&checks, "A3' resolution").map_err(Error::at("resolution"))?;
    let cusp = CuspData {
        p: 4,
        q: 0,
        a_text: cfg.ambient.format(&a),
        a,
        d_a: Some(x),
        d_b: None,
        spellings: vec!["contact 4 at one point".into()],
        degenerate: false,
    };
    Ok(Terminal {
        config: cfg.clone(),
        areas: w.clone(),
        route: Route::A3pSpecial,
        cusp,
        auxiliary: None,
        resolution: r.finish(checks),
        positive: None,
        extra: Checklist::new(),
        interpretations: vec![
            "A3': the conic class 2h has contact order 4 with D at one point".into(),
        ],
    })
}

/// Fiber-class certificate for an irrational ruled ambient.
fn ruled_route(cfg: &DivisorConfig, w: &AreaVector) -> Result<Terminal> {
    let amb = &cfg.ambient;
    let f = amb
        .fiber()
        .ok_or_else(|| Error::Unsupported("ambient has no fiber class".into()))?;
    let sections: Vec<&DivisorComponent> = cfg
        .components
        .iter()
        .filter(|c| amb.pair_unchecked(&f, &c.cls) != 0)
        .collect();
    let mut interpretations = Vec::new();
    let (d_a, d_b) = match sections.as_slice() {
        [] => {
            interpretations.push(
                "no section component: a section in class B+gF is chosen off the divisor".into(),
            );
            (None, None)
        }
        [s] => (Some(s.id.clone()), neighbor_of(cfg, &s.id)),
        _ => {
            return Err(Error::CheckFailed(
                "more than one component meets the fiber class".into(),
            ))
        }
    };
    let cusp = CuspData::new(cfg, 1, 0, f.clone(), d_a, d_b);
    let mut res = Resolver::new(cfg, w, &f)?;
    let mut checks = Checklist::new();
    checks.check_eq("F² = 0", amb.square(&f)?, 0);
    checks.check_eq("F·K = -2", amb.k_dot(&f)?, -2);
    res.transforms.clear();
    Ok(Terminal {
        config: cfg.clone(),
        areas: w.clone(),
        route: Route::RuledFiber,
        cusp,
        auxiliary: None,
        resolution: res.finish(checks),
        positive: None,
        extra: Checklist::new(),
        interpretations,
    })
}

/// Carries the cusp data back through blowups, following the toric rule at D_a ∩ D_b.
fn transport(
    terminal: &DivisorConfig,
    cusp: &CuspData,
    traces: &[StageTrace],
    route: Route,
) -> Result<(DivisorConfig, CuspData)> {
    let mut cfg = terminal.clone();
    let (mut a, mut p, mut q) = (cusp.a.clone(), cusp.p, cusp.q);
    let (mut d_a, mut d_b) = (cusp.d_a.clone(), cusp.d_b.clone());
    for st in traces.iter().rev() {
        for s in st.trace.steps.iter().rev() {
            cfg = replay_blowdown(
                &cfg,
                &s.inverse,
                s.removed_component.as_deref(),
                &s.contraction,
                &s.pre_ambient,
                &s.class,
            )?;
            a = s.contraction.lift(&a);
            let hit = match (&s.inverse, &d_a, &d_b) {
                (BlowupMove::Toric { a: x, b: y }, Some(da), Some(db)) => {
                    (x == da && y == db) || (x == db && y == da)
                }
                _ => false,
            };
            if !hit || route == Route::A3pSpecial {
                continue;
            }
            let e_id = s.removed_component.clone().ok_or_else(|| {
                Error::InvalidMove("toric blowup without a recorded component".into())
            })?;
            let m = p.min(q);
            a = &a - &(m * &s.class);
            if p > q {
                (d_b, p) = (Some(e_id), p - q);
            } else if p < q {
                (d_a, q) = (Some(e_id), q - p);
            } else {
                (d_a, d_b, p, q) = (Some(e_id), d_a, 1, 0);
            }
        }
    }
    let out = if route == Route::A3pSpecial {
        CuspData {
            a_text: cfg.ambient.format(&a),
            a,
            ..cusp.clone()
        }
    } else {
        CuspData::new(&cfg, p, q, a, d_a, d_b)
    };
    Ok((cfg, out))
}

fn without(cfg: &DivisorConfig, id: Option<&str>) -> DivisorConfig {
    let mut out = cfg.clone();
    if let Some(id) = id {
        out.remove_component(id);
    }
    out
}

fn with_aux(cfg: &DivisorConfig, terminal: &DivisorConfig, aux: Option<&str>) -> DivisorConfig {
    let mut out = cfg.clone();
    if let Some(id) = aux {
        let c = terminal.component(id).unwrap().clone();
        let nbs = terminal.neighbors(id);
        out.components.push(c);
        for n in nbs {
            out.add_edge(&n, id);
        }
    }
    out
}

/// Runs the full pipeline and assembles a certificate; errors carry the stage that raised them.
pub fn certify_affine_ruled(
    config: &DivisorConfig,
    w: &AreaVector,
    bounds: &Bounds,
) -> Result<AffineRuledCertificate> {
    let problems = config.validate();
    if !problems.is_empty() {
        return Err(Error::at("input")(Error::InvalidConfig(
            problems.join("; "),
        )));
    }
    let input = ConfigDocument::from_config(config, Some(w));
    let hypothesis = hypothesis_checks(config, w).map_err(Error::at("hypothesis"))?;
    if !hypothesis.all_passed() {
        let f: Vec<String> = hypothesis
            .failures()
            .iter()
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect();
        return Err(Error::at("hypothesis")(Error::Hypothesis(f.join("; "))));
    }
    let mut traces = Vec::new();
    let mut kind = None;
    let mut minimal_model = None;
    let mut chain = None;
    let mut admissible = None;
    let mut d_good_checks = None;
    let mut interpretations = Vec::new();

    let term = if config.ambient.is_ruled() {
        let v = ruled_validate(config);
        fail_on(&v, "ruled configuration").map_err(Error::at("ruled_validate"))?;
        let (cfg, w2) = match ruled_reduce(config, w) {
            Ok(red) => {
                traces.push(StageTrace {
                    stage: "ruled_reduce".into(),
                    trace: red.trace,
                });
                (red.config, red.areas)
            }
            Err(e) => {
                interpretations.push(format!(
                    "ruled reduction not recorded, fiber class used on the input: {e}"
                ));
                (config.clone(), w.clone())
            }
        };
        let mut t = ruled_route(&cfg, &w2).map_err(Error::at("ruled_fiber"))?;
        t.extra.extend("ruled_validate: ", &v);
        t
    } else {
        let qm = quasi_minimal_reduce(config, w, bounds).map_err(Error::at("quasi_minimal"))?;
        traces.push(StageTrace {
            stage: "quasi_minimal".into(),
            trace: qm.trace.clone(),
        });
        let (cfg, w2) = (qm.config, qm.areas);
        match qm.trace.terminal {
            TerminalTag::SmallB2 => {
                let (t, tag) = small_b2_route(&cfg, &w2)?;
                minimal_model = Some(tag);
                t
            }
            TerminalTag::QuasiMinimalFirstKind | TerminalTag::QuasiMinimalSecondKind => {
                let rep = classify_kind(&cfg, &w2, bounds).map_err(Error::at("kind"))?;
                kind = Some(rep.kind);
                if rep.kind == PairKind::SecondKind {
                    let red =
                        second_kind_reduce(&cfg, &w2, bounds).map_err(Error::at("second_kind"))?;
                    traces.push(StageTrace {
                        stage: "second_kind".into(),
                        trace: red.trace,
                    });
                    let (t, tag) = small_b2_route(&red.config, &red.areas)?;
                    minimal_model = Some(tag);
                    t
                } else {
                    let red = partially_minimal_reduce(&cfg, &w2, bounds)
                        .map_err(Error::at("partially_minimal"))?;
                    traces.push(StageTrace {
                        stage: "partially_minimal".into(),
                        trace: red.trace.clone(),
                    });
                    if red.trace.terminal == TerminalTag::SmallB2 {
                        let (t, tag) = small_b2_route(&red.config, &red.areas)?;
                        minimal_model = Some(tag);
                        t
                    } else {
                        let (t, gc, adm, dg) = admissible_route(&red.config, &red.areas, bounds)?;
                        chain = Some(gc);
                        admissible = Some(adm);
                        d_good_checks = Some(dg);
                        t
                    }
                }
            }
            TerminalTag::MinimalRuled => unreachable!("rational reductions never end ruled"),
            TerminalTag::Stuck(s) => return Err(Error::at("quasi_minimal")(Error::Stuck(s))),
        }
    };

    if d_good_checks.is_none() && term.route != Route::RuledFiber {
        let set = enumerate_general(
            &term.resolution.config.ambient,
            &term.resolution.areas,
            bounds,
        )
        .map_err(Error::at("d_good"))?;
        d_good_checks = Some(
            d_good(
                &term.resolution.a_tilde,
                &term.resolution.config,
                &term.resolution.areas,
                &set,
            )
            .map_err(Error::at("d_good"))?,
        );
    }
    let mut identities = term
        .cusp
        .identities(&term.config, term.route)
        .map_err(Error::at("cusp_class"))?;
    for c in &term.extra.0 {
        identities.0.push(c.clone());
    }
    fail_on(&identities, "cusp identities").map_err(Error::at("cusp_class"))?;

    let (back, moved) =
        transport(&term.config, &term.cusp, &traces, term.route).map_err(Error::at("transport"))?;
    let mut tchecks = Checklist::new();
    let restored = without(&back, term.auxiliary.as_deref());
    tchecks.push(
        "replay reproduces the input",
        restored == *config,
        "terminal replayed through every trace",
    );
    tchecks.extend(
        "",
        &moved
            .identities(&back, term.route)
            .map_err(Error::at("transport"))?,
    );
    fail_on(&tchecks, "transport").map_err(Error::at("transport"))?;

    for st in &traces {
        for s in &st.trace.steps {
            if let Some(n) = &s.note {
                interpretations.push(format!("{}: {} ({})", st.stage, n, s.class_text));
            }
        }
    }
    interpretations.extend(term.interpretations.iter().cloned());
    let weights = if term.route == Route::A3pSpecial || term.route == Route::RuledFiber {
        WeightSequence {
            p: term.cusp.p,
            q: term.cusp.q,
            weights: term.resolution.multiplicities(),
        }
    } else {
        weight_sequence(term.cusp.p, term.cusp.q).map_err(Error::at("weights"))?
    };
    let assumptions = match term.route {
        Route::RuledFiber | Route::Comb => fiber_assumptions(),
        Route::A3pSpecial => a3p_assumptions(),
        _ => cusp_assumptions(),
    };
    let res = &term.resolution;
    Ok(AffineRuledCertificate {
        schema: CERTIFICATE_SCHEMA.to_string(),
        input_digest: digest(&input),
        input,
        bounds: BoundsRecord::of(bounds),
        hypothesis,
        route: term.route,
        traces,
        kind,
        minimal_model,
        good_chain: chain,
        admissible,
        terminal: ConfigDocument::from_config(&term.config, Some(&term.areas)),
        auxiliary: term.auxiliary.clone(),
        cusp: term.cusp.clone(),
        weights,
        resolution: ResolutionRecord {
            config: ConfigDocument::from_config(&res.config, Some(&res.areas)),
            blowups: res.blowups.clone(),
            multiplicities: res.multiplicities(),
            a: res.a.clone(),
            a_tilde: res.a_tilde.clone(),
            a_tilde_text: res.config.ambient.format(&res.a_tilde),
            checks: res.checks.clone(),
        },
        positive_combination: term.positive.clone(),
        identities,
        d_good: d_good_checks,
        transported: Transported {
            cusp: moved,
            checks: tchecks,
        },
        assumptions,
        interpretations,
    })
}

/// Good chain, admissible subchain, cusp class, resolution, positive combination and D̃-goodness.
fn admissible_route(
    cfg: &DivisorConfig,
    w: &AreaVector,
    bounds: &Bounds,
) -> Result<(Terminal, GoodChain, AdmissibleSubchain, Checklist)> {
    let gc = good_chain(cfg).map_err(Error::at("good_chain"))?;
    let a: Vec<i64> = gc.squares[..gc.k].iter().map(|s| -s).collect();
    let adm = admissible_check(&a)
        .map_err(|r| Error::at("admissible")(Error::CheckFailed(r.to_string())))?;
    let cc = cusp_class(cfg, &gc.labels, &adm).map_err(Error::at("cusp_class"))?;
    let cusp = CuspData::new(
        cfg,
        cc.p,
        cc.q,
        cc.a.clone(),
        Some(cc.d_a.clone()),
        Some(cc.d_b.clone()),
    );
    let res = resolve_pattern(
        cfg,
        w,
        &cc.a,
        cusp.d_a.as_deref().unwrap(),
        cusp.d_b.as_deref(),
        cusp.p,
        cusp.q,
    )
    .map_err(Error::at("resolution"))?;
    let pc =
        positive_combination(&res, cc.q, &cc.d_a).map_err(Error::at("positive_combination"))?;
    let mut extra = Checklist::new();
    let amb = &res.config.ambient;
    let mut sum = pc.target.clone();
    for (i, id) in gc.labels[..gc.k].iter().enumerate() {
        sum = &sum + &(adm.c[i] * &res.config.component(id).unwrap().cls);
    }
    extra.push(
        "Ã = Σcᵢ[D̃ᵢ] + positive combination",
        sum == res.a_tilde,
        format!("{} vs {}", amb.format(&sum), amb.format(&res.a_tilde)),
    );
    let set = enumerate_general(amb, &res.areas, bounds).map_err(Error::at("d_good"))?;
    let dg = d_good(&res.a_tilde, &res.config, &res.areas, &set).map_err(Error::at("d_good"))?;
    let t = Terminal {
        config: cfg.clone(),
        areas: w.clone(),
        route: Route::AdmissibleSubchain,
        cusp,
        auxiliary: None,
        resolution: res,
        positive: Some(pc),
        extra,
        interpretations: vec![],
    };
    Ok((t, gc, adm, dg))
}

/// Re-verifies a certificate from its recorded data; the checklist says what held.
pub fn verify_certificate(cert: &AffineRuledCertificate) -> Result<Checklist> {
    let mut out = Checklist::new();
    out.check_eq("schema", cert.schema.as_str(), CERTIFICATE_SCHEMA);
    out.check_eq(
        "input digest",
        digest(&cert.input),
        cert.input_digest.clone(),
    );
    let (input, w) = cert.input.build()?;
    let w = w.ok_or_else(|| Error::InvalidInput("input: areas missing".into()))?;
    out.push("input valid", input.is_valid(), input.validate().join("; "));
    out.check_eq(
        "hypothesis",
        hypothesis_checks(&input, &w)?,
        cert.hypothesis.clone(),
    );
    out.push(
        "hypothesis holds",
        cert.hypothesis.all_passed(),
        "recorded verdicts",
    );
    let (terminal, tw) = cert.terminal.build()?;
    let tw = tw.ok_or_else(|| Error::InvalidInput("terminal: areas missing".into()))?;
    let aux = cert.auxiliary.as_deref();

    let mut cfg = without(&terminal, aux);
    let mut aw = tw.clone();
    let mut hyp_ok = true;
    for st in cert.traces.iter().rev() {
        for s in st.trace.steps.iter().rev() {
            let h = cfg.hypothesis_area(&aw)?;
            hyp_ok &= h == s.hypothesis_area
                && h.is_negative() == s.hypothesis_holds
                && s.hypothesis_holds;
            cfg = replay_blowdown(
                &cfg,
                &s.inverse,
                s.removed_component.as_deref(),
                &s.contraction,
                &s.pre_ambient,
                &s.class,
            )?;
            aw = s.contraction.lift_areas(&aw, &s.area);
        }
    }
    out.push(
        "traces replay to the input",
        cfg == input && aw == w,
        "terminal blown back up",
    );
    out.push(
        "area(K+[D]) < 0 along the traces",
        hyp_ok,
        "recomputed at every step",
    );

    if let Some(adm) = &cert.admissible {
        let again = admissible_check(&adm.a).map_err(|r| Error::CheckFailed(r.to_string()))?;
        out.check_eq("admissible subchain", &again, adm);
        if let Some(gc) = &cert.good_chain {
            let cc = cusp_class(&terminal, &gc.labels, adm)?;
            out.check_eq("A = Σcᵢ[Dᵢ]", &cc.a, &cert.cusp.a);
        }
    }
    if let Some(tag) = &cert.minimal_model {
        out.check_eq(
            "minimal model",
            classify_minimal_model(&without(&terminal, aux)).as_ref(),
            Some(tag),
        );
    }
    let ids = cert.cusp.identities(&terminal, cert.route)?;
    out.push(
        "cusp identities",
        ids.all_passed(),
        format!("{} checks", ids.0.len()),
    );
    if !matches!(cert.route, Route::A3pSpecial | Route::RuledFiber) {
        let ws = weight_sequence(cert.cusp.p, cert.cusp.q)?;
        out.check_eq("weight sequence", &ws, &cert.weights);
        out.push(
            "weight identities",
            ws.checks().all_passed(),
            "Σm² = pq, Σm = p+q-1",
        );
    }

    let res = rebuild_resolution(&terminal, &tw, &cert.cusp.a, &cert.resolution.blowups)?;
    let (rcfg, rw) = cert.resolution.config.build()?;
    out.push(
        "resolution replays",
        res.config == rcfg && Some(&res.areas) == rw.as_ref(),
        format!("{} blowups", cert.resolution.blowups.len()),
    );
    out.check_eq("Ã = A − Σmᵢeᵢ", &res.a_tilde, &cert.resolution.a_tilde);
    let amb = &res.config.ambient;
    if cert.route != Route::RuledFiber {
        out.check_eq("Ã²", amb.square(&res.a_tilde)?, 0);
        out.check_eq("Ã·K̃", amb.k_dot(&res.a_tilde)?, -2);
    }
    if let Some(pc) = &cert.positive_combination {
        let again = positive_combination(&res, pc.q, &pc.component)?;
        out.check_eq("positive combination", &again, pc);
    }
    if let Some(dg) = &cert.d_good {
        let set = enumerate_general(amb, &res.areas, &cert.bounds.bounds()?)?;
        let again = d_good(&res.a_tilde, &res.config, &res.areas, &set)?;
        out.push(
            "D̃-goodness",
            again.all_passed() && again == *dg,
            "recomputed",
        );
    }
    let traces_cfg = with_aux(&without(&terminal, aux), &terminal, aux);
    let (back, moved) = transport(&traces_cfg, &cert.cusp, &cert.traces, cert.route)?;
    out.check_eq("transported cusp", &moved, &cert.transported.cusp);
    let tids = moved.identities(&back, cert.route)?;
    out.push(
        "transported identities",
        tids.all_passed(),
        format!("{} checks", tids.0.len()),
    );
    Ok(out)
}

/// Replays recorded resolution blowups from the terminal configuration.
fn rebuild_resolution(
    terminal: &DivisorConfig,
    w: &AreaVector,
    a: &HomologyClass,
    blowups: &[ResolutionBlowup],
) -> Result<Resolution> {
    let mut r = Resolver::new(terminal, w, a)?;
    for b in blowups {
        let before = r.cfg.ambient.clone();
        let out = blowup_named(&r.cfg, &b.mv, Some(&b.generator), Some(&b.component))?;
        r.w = blowup_areas(&before, &r.w, &b.area);
        r.a = out.embedding.lift(&r.a);
        for c in r.transforms.values_mut() {
            *c = out.embedding.lift(c);
        }
        for e in &mut r.exceptional {
            *e = out.embedding.lift(e);
        }
        r.exceptional.push(out.exceptional.clone());
        r.cfg = out.config;
        r.blowups.push(b.clone());
    }
    Ok(r.finish(Checklist::new()))
}
