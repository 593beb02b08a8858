//! Blowdown reductions for rational and irrational ruled pairs, the minimal-model
//! classifier and the ruled configuration validator.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::checks::Checklist;
use crate::divisor::DivisorConfig;
use crate::error::{Error, Result};
use crate::exceptional::{enumerate_for_minimum, enumerate_general, minimal_area, Bounds};
use crate::lattice::{
    rational_str, AmbientKind, AmbientLattice, AreaVector, HomologyClass, Rational,
};
use crate::moves::{
    blowdown, detect_type, replay_blowdown, Blowdown, BlowupMove, BlowupType, Contraction,
};

/// One blowdown, recorded with enough data to replay it as a blowup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    /// Blown-down class in the coordinates of `pre_ambient`.
    pub class: HomologyClass,
    pub class_text: String,
    pub kind: BlowupType,
    pub inverse: BlowupMove,
    pub removed_component: Option<String>,
    #[serde(with = "rational_str")]
    pub area: Rational,
    pub contraction: Contraction,
    pub pre_ambient: AmbientLattice,
    pub b2_before: usize,
    pub b2_after: usize,
    /// area(K+[D]) after the step.
    #[serde(with = "rational_str")]
    pub hypothesis_area: Rational,
    pub hypothesis_holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TerminalTag {
    QuasiMinimalFirstKind,
    QuasiMinimalSecondKind,
    SmallB2,
    MinimalRuled,
    Stuck(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
    pub terminal: TerminalTag,
}

/// A reduced configuration, its areas and the trace that produced it.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub config: DivisorConfig,
    pub areas: AreaVector,
    pub trace: ReductionTrace,
}

const HALF_TORIC_NOTE: &str = "E_min component with one neighbor read as a half-toric blowdown";
const EXTERIOR_NOTE: &str = "E_min component with no neighbor read as an exterior blowdown";

fn require_hypothesis(config: &DivisorConfig, w: &AreaVector) -> Result<()> {
    let problems = config.validate();
    if !problems.is_empty() {
        return Err(Error::InvalidConfig(problems.join("; ")));
    }
    let problems = config.validate_areas(w);
    if !problems.is_empty() {
        return Err(Error::InvalidConfig(problems.join("; ")));
    }
    let a = config.hypothesis_area(w)?;
    if !a.is_negative() {
        return Err(Error::Hypothesis(format!(
            "area(K+[D]) = {a} is not negative"
        )));
    }
    Ok(())
}

/// Performs a blowdown and records it; the new areas come from the contraction.
fn step(
    config: &DivisorConfig,
    w: &AreaVector,
    target: &HomologyClass,
) -> Result<(Blowdown, AreaVector, TraceStep)> {
    let amb = &config.ambient;
    let bd = blowdown(config, target)?;
    let nw = bd.contraction.push_areas(w);
    let ha = bd.config.hypothesis_area(&nw)?;
    let note = match (&bd.inverse, &bd.removed_component) {
        (BlowupMove::HalfToric { .. }, Some(_)) => Some(HALF_TORIC_NOTE.to_string()),
        (
            BlowupMove::Exterior {
                include_component: true,
            },
            _,
        ) => Some(EXTERIOR_NOTE.to_string()),
        _ => None,
    };
    let ts = TraceStep {
        class: target.clone(),
        class_text: amb.format(target),
        kind: bd.kind,
        inverse: bd.inverse.clone(),
        removed_component: bd.removed_component.clone(),
        area: amb.area(target, w)?,
        contraction: bd.contraction.clone(),
        pre_ambient: amb.clone(),
        b2_before: amb.b2(),
        b2_after: bd.config.ambient.b2(),
        hypothesis_holds: ha.is_negative(),
        hypothesis_area: ha,
        note,
    };
    Ok((bd, nw, ts))
}

fn is_rational(config: &DivisorConfig) -> Result<()> {
    if config.ambient.is_rational() {
        Ok(())
    } else {
        Err(Error::Unsupported(
            "this reduction needs a rational ambient".into(),
        ))
    }
}

/// Blows down minimal-area exceptional classes until one pairs at least 2 with [D] or b₂ ≤ 2.
pub fn quasi_minimal_reduce(
    config: &DivisorConfig,
    w: &AreaVector,
    bounds: &Bounds,
) -> Result<Reduction> {
    is_rational(config)?;
    require_hypothesis(config, w)?;
    if !config.is_connected() {
        return Err(Error::InvalidConfig("the divisor is not connected".into()));
    }
    let mut cfg = config.clone();
    let mut w = w.clone();
    let mut steps = Vec::new();
    loop {
        if cfg.ambient.b2() <= 2 {
            return Ok(Reduction {
                config: cfg,
                areas: w,
                trace: ReductionTrace {
                    steps,
                    terminal: TerminalTag::SmallB2,
                },
            });
        }
        let set = enumerate_for_minimum(&cfg.ambient, &w, bounds)?;
        let mins = minimal_area(&set)?;
        let total = cfg.total_class();
        if mins
            .iter()
            .any(|e| cfg.ambient.pair_unchecked(e, &total) >= 2)
        {
            let terminal = if mins
                .iter()
                .any(|e| cfg.components.iter().any(|c| c.cls == *e))
            {
                TerminalTag::QuasiMinimalSecondKind
            } else {
                TerminalTag::QuasiMinimalFirstKind
            };
            return Ok(Reduction {
                config: cfg,
                areas: w,
                trace: ReductionTrace { steps, terminal },
            });
        }
        let mut last_err = None;
        let mut done = false;
        for e in &mins {
            match step(&cfg, &w, e) {
                Ok((bd, nw, ts)) => {
                    cfg = bd.config;
                    w = nw;
                    steps.push(ts);
                    done = true;
                    break;
                }
                Err(err) => last_err = Some(err),
            }
        }
        if !done {
            let why = last_err.map(|e| e.to_string()).unwrap_or_default();
            return Err(Error::Stuck(format!(
                "no minimal-area class can be blown down in {} ({why})",
                cfg.ambient.names().join(",")
            )));
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairKind {
    FirstKind,
    SecondKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KindReport {
    pub kind: PairKind,
    pub e_min: HomologyClass,
    pub checks: Checklist,
}

/// Splits a quasi-minimal pair into first or second kind, checking −[D]−K = E_min.
pub fn classify_kind(
    config: &DivisorConfig,
    w: &AreaVector,
    bounds: &Bounds,
) -> Result<KindReport> {
    is_rational(config)?;
    let amb = &config.ambient;
    let total = config.total_class();
    let e = &(-&total) - &amb.canonical();
    let mut checks = Checklist::new();
    checks.push(
        "e_min_exceptional",
        amb.is_exceptional_numerically(&e)?,
        amb.format(&e),
    );
    let set = enumerate_for_minimum(amb, w, bounds)?;
    let mins = minimal_area(&set)?;
    checks.push(
        "e_min_unique_minimum",
        mins == vec![e.clone()],
        mins.iter()
            .map(|m| amb.format(m))
            .collect::<Vec<_>>()
            .join(", "),
    );
    checks.check_eq("e_min_dot_d", amb.pair(&e, &total)?, 2);
    let carrier = config.components.iter().find(|c| c.cls == e);
    let kind = match carrier {
        Some(c) => {
            let nb = config.neighbors(&c.id).len();
            checks.check_eq("e_min_component_neighbors", nb, 3);
            PairKind::SecondKind
        }
        None => PairKind::FirstKind,
    };
    if !checks.all_passed() {
        let f: Vec<String> = checks
            .failures()
            .iter()
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect();
        return Err(Error::CheckFailed(f.join("; ")));
    }
    Ok(KindReport {
        kind,
        e_min: e,
        checks,
    })
}

/// Removes toric (−1)-components and non-toric classes orthogonal to E_min until partially minimal.
pub fn partially_minimal_reduce(
    config: &DivisorConfig,
    w: &AreaVector,
    bounds: &Bounds,
) -> Result<Reduction> {
    is_rational(config)?;
    require_hypothesis(config, w)?;
    let mut cfg = config.clone();
    let mut w = w.clone();
    let mut steps = Vec::new();
    loop {
        if cfg.ambient.b2() <= 2 {
            return Ok(Reduction {
                config: cfg,
                areas: w,
                trace: ReductionTrace {
                    steps,
                    terminal: TerminalTag::SmallB2,
                },
            });
        }
        let report = classify_kind(&cfg, &w, bounds)?;
        if report.kind != PairKind::FirstKind {
            return Err(Error::CheckFailed(
                "partially minimal reduction reached a second-kind pair".into(),
            ));
        }
        let amb = cfg.ambient.clone();
        let e_min = report.e_min;
        let total = cfg.total_class();
        let mut cands: Vec<(Rational, u8, HomologyClass)> = Vec::new();
        for c in &cfg.components {
            let sq = amb.pair_unchecked(&c.cls, &c.cls);
            let rest = &total - &c.cls;
            if sq == -1 && amb.pair_unchecked(&c.cls, &rest) == 2 && cfg.neighbors(&c.id).len() == 2
            {
                if amb.pair_unchecked(&c.cls, &e_min) != 0 {
                    return Err(Error::CheckFailed(format!(
                        "toric component {} meets E_min",
                        c.id
                    )));
                }
                cands.push((amb.area(&c.cls, &w)?, 0, c.cls.clone()));
            }
        }
        let set = enumerate_general(&amb, &w, bounds)?;
        for (e, a) in set.iter() {
            if *e == e_min || cfg.components.iter().any(|c| c.cls == *e) {
                continue;
            }
            if amb.pair_unchecked(e, &e_min) != 0
                || cfg
                    .components
                    .iter()
                    .any(|c| amb.pair_unchecked(e, &c.cls) < 0)
            {
                continue;
            }
            if amb.pair_unchecked(e, &total) != 1 {
                return Err(Error::CheckFailed(format!(
                    "non-toric class {} pairs {} with [D]",
                    amb.format(e),
                    amb.pair_unchecked(e, &total)
                )));
            }
            cands.push((a.clone(), 1, e.clone()));
        }
        cands.sort();
        let Some((_, _, target)) = cands.into_iter().next() else {
            let terminal = TerminalTag::QuasiMinimalFirstKind;
            return Ok(Reduction {
                config: cfg,
                areas: w,
                trace: ReductionTrace { steps, terminal },
            });
        };
        let (bd, nw, ts) = step(&cfg, &w, &target)?;
        cfg = bd.config;
        w = nw;
        steps.push(ts);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChainBullet {
    /// [D_s]² ≤ −2 for s < k and [D_k]² ≥ 0.
    NegativeThenNonnegative,
    /// k = 2 with [D_1]² = −1 and [D_2]² = 0.
    MinusOneThenZero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodChain {
    /// Component ids D_1 … D_l.
    pub labels: Vec<String>,
    pub k: usize,
    pub bullet: ChainBullet,
    /// Self-intersections along the labeling.
    pub squares: Vec<i64>,
}

/// Component ids along a chain, starting from the endpoint listed first.
pub fn chain_order(config: &DivisorConfig) -> Result<Vec<String>> {
    if !config.is_chain() {
        return Err(Error::InvalidConfig("the divisor is not a chain".into()));
    }
    let start = config
        .components
        .iter()
        .find(|c| config.neighbors(&c.id).len() <= 1)
        .ok_or_else(|| Error::InvalidConfig("chain has no endpoint".into()))?;
    let mut order = vec![start.id.clone()];
    while order.len() < config.components.len() {
        let cur = order.last().unwrap();
        let next = config
            .neighbors(cur)
            .into_iter()
            .find(|n| !order.contains(n))
            .ok_or_else(|| Error::InvalidConfig("chain walk stopped early".into()))?;
        order.push(next);
    }
    Ok(order)
}

/// Finds a labeling and k meeting one of the two good-chain bullets; forward orientation first.
pub fn good_chain(config: &DivisorConfig) -> Result<GoodChain> {
    let fwd = chain_order(config)?;
    let mut rev = fwd.clone();
    rev.reverse();
    let amb = &config.ambient;
    for labels in [fwd, rev] {
        let squares: Vec<i64> = labels
            .iter()
            .map(|id| {
                let c = &config.component(id).unwrap().cls;
                amb.pair_unchecked(c, c)
            })
            .collect();
        let l = labels.len();
        for k in 1..l {
            if squares[..k - 1].iter().all(|s| *s <= -2) && squares[k - 1] >= 0 {
                return Ok(GoodChain {
                    labels,
                    k,
                    bullet: ChainBullet::NegativeThenNonnegative,
                    squares,
                });
            }
            if k == 2 && squares[0] == -1 && squares[1] == 0 {
                return Ok(GoodChain {
                    labels,
                    k,
                    bullet: ChainBullet::MinusOneThenZero,
                    squares,
                });
            }
        }
    }
    Err(Error::CheckFailed(
        "no labeling satisfies either good-chain condition".into(),
    ))
}

/// Greedy blowdown of a second-kind pair down to b₂ ≤ 2.
pub fn second_kind_reduce(
    config: &DivisorConfig,
    w: &AreaVector,
    bounds: &Bounds,
) -> Result<Reduction> {
    is_rational(config)?;
    require_hypothesis(config, w)?;
    let mut cfg = config.clone();
    let mut w = w.clone();
    let mut steps = Vec::new();
    while cfg.ambient.b2() > 2 {
        let set = enumerate_general(&cfg.ambient, &w, bounds)?;
        let mut cands: Vec<(Rational, BlowupType, HomologyClass)> = Vec::new();
        for (e, a) in set.iter() {
            if let Ok((mv, _)) = detect_type(&cfg, e) {
                cands.push((a.clone(), mv.kind(), e.clone()));
            }
        }
        cands.sort();
        let mut progressed = false;
        for (_, _, e) in &cands {
            if let Ok((bd, nw, ts)) = step(&cfg, &w, e) {
                if ts.hypothesis_holds {
                    cfg = bd.config;
                    w = nw;
                    steps.push(ts);
                    progressed = true;
                    break;
                }
            }
        }
        if !progressed {
            let comps: Vec<String> = cfg
                .components
                .iter()
                .map(|c| format!("{}={}", c.id, cfg.ambient.format(&c.cls)))
                .collect();
            return Err(Error::Stuck(format!(
                "no admissible blowdown among {} enumerated classes (incomplete: {}); components {}",
                set.classes.len(),
                set.incomplete,
                comps.join(", ")
            )));
        }
    }
    Ok(Reduction {
        config: cfg,
        areas: w,
        trace: ReductionTrace {
            steps,
            terminal: TerminalTag::SmallB2,
        },
    })
}

/// Rebuilds the input of a reduction from its terminal configuration and trace.
pub fn replay(
    terminal: &DivisorConfig,
    areas: &AreaVector,
    trace: &ReductionTrace,
) -> Result<(DivisorConfig, AreaVector)> {
    let mut cfg = terminal.clone();
    let mut w = areas.clone();
    for s in trace.steps.iter().rev() {
        cfg = replay_blowdown(
            &cfg,
            &s.inverse,
            s.removed_component.as_deref(),
            &s.contraction,
            &s.pre_ambient,
            &s.class,
        )?;
        w = s.contraction.lift_areas(&w, &s.area);
    }
    Ok((cfg, w))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MinimalCase {
    A1,
    A2,
    B1,
    B2,
    B3,
    C1,
    C2,
    C3,
    #[serde(rename = "A1'")]
    A1p,
    #[serde(rename = "A2'")]
    A2p,
    #[serde(rename = "A3'")]
    A3p,
    #[serde(rename = "B1'")]
    B1p,
    #[serde(rename = "B2'")]
    B2p,
    #[serde(rename = "B3'")]
    B3p,
    #[serde(rename = "C1'")]
    C1p,
    #[serde(rename = "C2'")]
    C2p,
    #[serde(rename = "C3'")]
    C3p,
    CombLike,
}

impl MinimalCase {
    pub fn label(&self) -> &'static str {
        use MinimalCase::*;
        match self {
            A1 => "A1",
            A2 => "A2",
            B1 => "B1",
            B2 => "B2",
            B3 => "B3",
            C1 => "C1",
            C2 => "C2",
            C3 => "C3",
            A1p => "A1'",
            A2p => "A2'",
            A3p => "A3'",
            B1p => "B1'",
            B2p => "B2'",
            B3p => "B3'",
            C1p => "C1'",
            C2p => "C2'",
            C3p => "C3'",
            CombLike => "CombLike",
        }
    }

    /// The seventeen listed cases in matching order.
    pub const LISTED: [MinimalCase; 17] = {
        use MinimalCase::*;
        [
            A1, A2, B1, B2, B3, C1, C2, C3, A1p, A2p, A3p, B1p, B2p, B3p, C1p, C2p, C3p,
        ]
    };
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalModelTag {
    pub case: MinimalCase,
    pub k: Option<i64>,
    pub components: usize,
    /// Component ids in the order D_1, D_2, … of the case listing.
    pub order: Vec<String>,
    /// Set when the match needed f1 and f2 exchanged.
    pub swapped: bool,
}

/// Coordinates of a class in the case tables: h; (f1, f2); or (s, f) on CP²#1.
fn table_coords(amb: &AmbientLattice, c: &HomologyClass) -> Option<(i64, i64)> {
    match *amb.kind() {
        AmbientKind::ProjectivePlane => Some((c.0[0], 0)),
        AmbientKind::ProductOfSpheres => Some((c.0[0], c.0[1])),
        AmbientKind::RationalBlowup { n: 1 } => {
            let (x, y) = (c.0[0], -c.0[1]);
            Some((x - y, y))
        }
        _ => None,
    }
}

type Pattern = fn(&[(i64, i64)]) -> Option<Option<i64>>;

fn pat_a1(v: &[(i64, i64)]) -> Option<Option<i64>> {
    (v == [(1, 0), (2, 0)]).then_some(None)
}
fn pat_a2(v: &[(i64, i64)]) -> Option<Option<i64>> {
    (v == [(1, 0), (1, 0), (1, 0)]).then_some(None)
}
fn pat_a1p(v: &[(i64, i64)]) -> Option<Option<i64>> {
    (v == [(1, 0)]).then_some(None)
}
fn pat_a2p(v: &[(i64, i64)]) -> Option<Option<i64>> {
    (v == [(1, 0), (1, 0)]).then_some(None)
}
fn pat_a3p(v: &[(i64, i64)]) -> Option<Option<i64>> {
    (v == [(2, 0)]).then_some(None)
}
// Case B in (f1, f2) coordinates.
fn pat_b1(v: &[(i64, i64)]) -> Option<Option<i64>> {
    let k = v.first()?.0;
    (v == [(k, 1), (2 - k, 1)]).then_some(Some(k))
}
fn pat_b2(v: &[(i64, i64)]) -> Option<Option<i64>> {
    let k = v.first()?.0;
    (v == [(k, 1), (1, 0), (1 - k, 1)]).then_some(Some(k))
}
fn pat_b3(v: &[(i64, i64)]) -> Option<Option<i64>> {
    let k = v.first()?.0;
    (v == [(k, 1), (1, 0), (-k, 1), (1, 0)]).then_some(Some(k))
}
fn pat_b1p(v: &[(i64, i64)]) -> Option<Option<i64>> {
    let (a, k) = *v.first()?;
    (a == 1 && v[1..].iter().all(|c| *c == (0, 1))).then_some(Some(k))
}
fn pat_b2p(v: &[(i64, i64)]) -> Option<Option<i64>> {
    let k = v.first()?.1;
    (k >= 0 && v == [(1, k), (0, 1), (1, -k)]).then_some(Some(k))
}
fn pat_b3p(v: &[(i64, i64)]) -> Option<Option<i64>> {
    let k = v.first()?.1 - 1;
    (k >= 0 && v == [(1, k + 1), (1, -k)]).then_some(Some(k))
}
// Case C in (s, f) coordinates.
fn pat_c1(v: &[(i64, i64)]) -> Option<Option<i64>> {
    if v == [(2, 0), (0, 1)] {
        return Some(None);
    }
    let k = v.first()?.1;
    (v == [(1, k), (1, 1 - k)]).then_some(Some(k))
}
fn pat_c2(v: &[(i64, i64)]) -> Option<Option<i64>> {
    let k = v.first()?.1;
    (v == [(1, k), (0, 1), (1, -k)]).then_some(Some(k))
}
fn pat_c3(v: &[(i64, i64)]) -> Option<Option<i64>> {
    let k = v.first()?.1;
    (v == [(1, k), (0, 1), (1, -k - 1), (0, 1)]).then_some(Some(k))
}
fn pat_c1p(v: &[(i64, i64)]) -> Option<Option<i64>> {
    let (a, k) = *v.first()?;
    (a == 1 && v[1..].iter().all(|c| *c == (0, 1))).then_some(Some(k))
}
fn pat_c2p(v: &[(i64, i64)]) -> Option<Option<i64>> {
    let k = v.first()?.1;
    (k >= 0 && v == [(1, k), (0, 1), (1, -1 - k)]).then_some(Some(k))
}
fn pat_c3p(v: &[(i64, i64)]) -> Option<Option<i64>> {
    let k = v.first()?.1;
    (k >= 0 && v == [(1, k), (1, -k)]).then_some(Some(k))
}

fn case_spec(case: MinimalCase) -> (AmbientKind, Pattern, bool) {
    use MinimalCase::*;
    let p2 = AmbientKind::ProjectivePlane;
    let s2 = AmbientKind::ProductOfSpheres;
    let c1 = AmbientKind::RationalBlowup { n: 1 };
    match case {
        A1 => (p2, pat_a1, false),
        A2 => (p2, pat_a2, false),
        B1 => (s2, pat_b1, false),
        B2 => (s2, pat_b2, false),
        B3 => (s2, pat_b3, false),
        C1 => (c1, pat_c1, false),
        C2 => (c1, pat_c2, false),
        C3 => (c1, pat_c3, false),
        A1p => (p2, pat_a1p, false),
        A2p => (p2, pat_a2p, false),
        A3p => (p2, pat_a3p, false),
        B1p => (s2, pat_b1p, true),
        B2p => (s2, pat_b2p, false),
        B3p => (s2, pat_b3p, false),
        C1p => (c1, pat_c1p, true),
        C2p => (c1, pat_c2p, false),
        C3p => (c1, pat_c3p, false),
        CombLike => unreachable!("comb-like ruled configurations are matched separately"),
    }
}

/// All orderings of 0..n in lexicographic order, or just the identity for combs.
fn orderings(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Matches a valid b₂ ≤ 2 configuration against the listed cases, first match wins.
pub fn classify_minimal_model(config: &DivisorConfig) -> Option<MinimalModelTag> {
    if config.components.is_empty() || !config.is_valid() || !config.is_connected() {
        return None;
    }
    if config.components.iter().any(|c| c.genus != 0) && config.ambient.is_rational() {
        return None;
    }
    if config.ambient.is_ruled() {
        return classify_ruled_minimal(config);
    }
    let amb = &config.ambient;
    let coords: Vec<(i64, i64)> = config
        .components
        .iter()
        .map(|c| table_coords(amb, &c.cls))
        .collect::<Option<_>>()?;
    let n = coords.len();
    for case in MinimalCase::LISTED {
        let (kind, pat, comb) = case_spec(case);
        if *amb.kind() != kind {
            continue;
        }
        let swaps: &[bool] = if kind == AmbientKind::ProductOfSpheres {
            &[false, true]
        } else {
            &[false]
        };
        for &swapped in swaps {
            let cs: Vec<(i64, i64)> = coords
                .iter()
                .map(|&(a, b)| if swapped { (b, a) } else { (a, b) })
                .collect();
            let perms = if comb && n > 4 {
                comb_orderings(&cs)
            } else {
                orderings(n)
            };
            for perm in perms {
                let v: Vec<(i64, i64)> = perm.iter().map(|&i| cs[i]).collect();
                if let Some(k) = pat(&v) {
                    return Some(MinimalModelTag {
                        case,
                        k,
                        components: n,
                        order: perm
                            .iter()
                            .map(|&i| config.components[i].id.clone())
                            .collect(),
                        swapped,
                    });
                }
            }
        }
    }
    None
}

/// For large combs, the orderings that put each candidate section first.
fn comb_orderings(cs: &[(i64, i64)]) -> Vec<Vec<usize>> {
    (0..cs.len())
        .filter(|&i| cs[i].0 == 1)
        .map(|i| {
            std::iter::once(i)
                .chain((0..cs.len()).filter(|&j| j != i))
                .collect()
        })
        .collect()
}

/// A minimal irrational ruled surface carrying one section-type component and fibers.
fn classify_ruled_minimal(config: &DivisorConfig) -> Option<MinimalModelTag> {
    let amb = &config.ambient;
    if amb.exceptional_count() != 0 {
        return None;
    }
    let f = amb.fiber()?;
    let (sections, fibers): (Vec<_>, Vec<_>) = config.components.iter().partition(|c| c.cls != f);
    if sections.len() > 1 || sections.iter().any(|c| amb.pair_unchecked(&c.cls, &f) != 1) {
        return None;
    }
    let k = sections.first().map(|c| c.cls.0[1]);
    let order = sections
        .iter()
        .chain(&fibers)
        .map(|c| c.id.clone())
        .collect();
    Some(MinimalModelTag {
        case: MinimalCase::CombLike,
        k,
        components: config.components.len(),
        order,
        swapped: false,
    })
}

/// Shape of a component class in an irrational ruled ambient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RuledShape {
    /// F − ΣE_j.
    Fiber,
    /// E_l − ΣE_j.
    Exceptional,
    /// B + kF − ΣE_j, or B1 + kF on the twisted bundle.
    Section,
}

/// Recognizes the three allowed class shapes.
pub fn ruled_shape(amb: &AmbientLattice, c: &HomologyClass) -> Option<RuledShape> {
    let v = &c.0;
    let exc = amb.exceptional_offset();
    let tail = &v[exc..];
    let subset = |t: &[i64]| t.iter().all(|x| *x == 0 || *x == -1);
    match (v[0], v[1]) {
        (0, 1) if subset(tail) => Some(RuledShape::Fiber),
        (0, 0)
            if tail.iter().filter(|x| **x == 1).count() == 1
                && tail.iter().all(|x| (-1..=1).contains(x)) =>
        {
            Some(RuledShape::Exceptional)
        }
        (1, _) if subset(tail) => Some(RuledShape::Section),
        _ => None,
    }
}

/// Component-shape checks for a divisor in an irrational ruled surface.
pub fn ruled_validate(config: &DivisorConfig) -> Checklist {
    let amb = &config.ambient;
    let mut out = Checklist::new();
    if !amb.is_ruled() {
        out.push("ruled_ambient", false, "ambient is not irrational ruled");
        return out;
    }
    let g = amb.base_genus().unwrap_or(0) as i64;
    let mut sections = Vec::new();
    for c in &config.components {
        match ruled_shape(amb, &c.cls) {
            Some(RuledShape::Section) => {
                out.push(
                    format!("shape:{}", c.id),
                    c.genus == g,
                    format!("section type, genus {}", c.genus),
                );
                sections.push(c.id.clone());
            }
            Some(s) => out.push(
                format!("shape:{}", c.id),
                c.genus == 0,
                format!("{s:?} type, genus {}", c.genus),
            ),
            None => out.push(
                format!("shape:{}", c.id),
                false,
                format!("{} matches no allowed shape", amb.format(&c.cls)),
            ),
        }
    }
    out.push(
        "at_most_one_section",
        sections.len() <= 1,
        format!("section components: [{}]", sections.join(", ")),
    );
    out
}

/// Blows down the smallest exceptional generator until the ruled surface is minimal.
pub fn ruled_reduce(config: &DivisorConfig, w: &AreaVector) -> Result<Reduction> {
    if !matches!(
        config.ambient.kind(),
        AmbientKind::RuledTrivial { .. } | AmbientKind::RuledTwisted { .. }
    ) {
        return Err(Error::Unsupported(
            "ruled reduction needs an irrational ruled ambient".into(),
        ));
    }
    require_hypothesis(config, w)?;
    let mut cfg = config.clone();
    let mut w = w.clone();
    let mut steps = Vec::new();
    while cfg.ambient.exceptional_count() > 0 {
        let amb = cfg.ambient.clone();
        let mut gens: Vec<(Rational, std::cmp::Reverse<usize>)> = amb
            .exceptional_indices()
            .map(|i| (w.0[i].clone(), std::cmp::Reverse(i)))
            .collect();
        gens.sort();
        let mut cands: Vec<HomologyClass> = Vec::new();
        for (_, std::cmp::Reverse(i)) in &gens {
            cands.push(amb.generator(*i));
            let mut fe = amb.generator(1);
            fe.0[*i] = -1;
            cands.push(fe);
        }
        let mut progressed = false;
        let mut last_err = None;
        for e in &cands {
            match step(&cfg, &w, e) {
                Ok((bd, nw, ts)) if ts.hypothesis_holds => {
                    cfg = bd.config;
                    w = nw;
                    steps.push(ts);
                    progressed = true;
                    break;
                }
                Ok(_) => {}
                Err(err) => last_err = Some(err),
            }
        }
        if !progressed {
            return Err(Error::Stuck(format!(
                "no exceptional generator or F−E_j can be blown down ({})",
                last_err.map(|e| e.to_string()).unwrap_or_default()
            )));
        }
    }
    Ok(Reduction {
        config: cfg,
        areas: w,
        trace: ReductionTrace {
            steps,
            terminal: TerminalTag::MinimalRuled,
        },
    })
}
