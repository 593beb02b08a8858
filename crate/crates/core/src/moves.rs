//! The four blowup types and their inverses as lattice-and-graph rewrites, and
//! toric blowup sequences on self-intersection lists.

use std::collections::HashSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::divisor::{DivisorComponent, DivisorConfig};
use crate::error::{Error, Result};
use crate::exceptional::normalize_to_basis;
use crate::lattice::{AmbientKind, AmbientLattice, AreaVector, HomologyClass, Rational, Transform};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BlowupType {
    Toric,
    HalfToric,
    NonToric,
    Exterior,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlowupMove {
    /// With the flag set the exceptional sphere becomes a component with no edges.
    Exterior {
        include_component: bool,
    },
    Toric {
        a: String,
        b: String,
    },
    NonToric {
        component: String,
    },
    HalfToric {
        component: String,
    },
}

impl BlowupMove {
    pub fn kind(&self) -> BlowupType {
        match self {
            BlowupMove::Exterior { .. } => BlowupType::Exterior,
            BlowupMove::Toric { .. } => BlowupType::Toric,
            BlowupMove::NonToric { .. } => BlowupType::NonToric,
            BlowupMove::HalfToric { .. } => BlowupType::HalfToric,
        }
    }
}

/// How classes of a blown-down ambient relate to the original lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Contraction {
    /// Apply the automorphism, then drop the last generator.
    Drop { transform: Transform },
    /// Drop the last generator and keep the basis.
    Forget,
    /// CP²#2 with e = H−E1−E2 contracts to S²×S² with f1 = H−E1, f2 = H−E2.
    ToProduct,
}

impl Contraction {
    /// Image of a class in the contracted lattice.
    pub fn push(&self, c: &HomologyClass) -> HomologyClass {
        match self {
            Contraction::Drop { transform } => {
                let mut v = transform.apply(c).0;
                v.pop();
                HomologyClass(v)
            }
            Contraction::Forget => HomologyClass(c.0[..c.0.len() - 1].to_vec()),
            Contraction::ToProduct => HomologyClass(vec![c.0[0] + c.0[2], c.0[0] + c.0[1]]),
        }
    }

    /// Embedding of the contracted lattice back into the original one.
    pub fn lift(&self, c: &HomologyClass) -> HomologyClass {
        match self {
            Contraction::Drop { transform } => transform.apply_inverse(&c.extended()),
            Contraction::Forget => c.extended(),
            Contraction::ToProduct => HomologyClass(vec![c.0[0] + c.0[1], -c.0[0], -c.0[1]]),
        }
    }

    pub fn push_areas(&self, w: &AreaVector) -> AreaVector {
        match self {
            Contraction::Drop { transform } => {
                let mut v = transform.apply_areas(w).0;
                v.pop();
                AreaVector(v)
            }
            Contraction::Forget => AreaVector(w.0[..w.0.len() - 1].to_vec()),
            Contraction::ToProduct => AreaVector(vec![&w.0[0] - &w.0[1], &w.0[0] - &w.0[2]]),
        }
    }

    /// Original areas from contracted areas and the area of the contracted class.
    pub fn lift_areas(&self, w: &AreaVector, e_area: &Rational) -> AreaVector {
        match self {
            Contraction::Drop { transform } => {
                transform.apply_areas_inverse(&w.extended(e_area.clone()))
            }
            Contraction::Forget => w.extended(e_area.clone()),
            Contraction::ToProduct => {
                let h = &w.0[0] + &w.0[1] - e_area;
                AreaVector(vec![h.clone(), &h - &w.0[0], &h - &w.0[1]])
            }
        }
    }
}

/// Outcome of a blowup: the new configuration and the new exceptional class.
#[derive(Debug, Clone)]
pub struct Blowup {
    pub config: DivisorConfig,
    pub exceptional: HomologyClass,
    pub new_component: Option<String>,
    /// Relates the blown-up lattice to the original one; `lift` embeds old classes.
    pub embedding: Contraction,
}

/// Ambient after one blowup, the class embedding and the new exceptional class.
fn blown_up_ambient(
    ambient: &AmbientLattice,
    name: Option<&str>,
) -> Result<(AmbientLattice, Contraction, HomologyClass)> {
    let fresh = name
        .map(str::to_string)
        .unwrap_or_else(|| ambient.fresh_exceptional_name());
    let mut names = ambient.names().to_vec();
    let kind = match *ambient.kind() {
        AmbientKind::ProjectivePlane => AmbientKind::RationalBlowup { n: 1 },
        AmbientKind::RationalBlowup { n } => AmbientKind::RationalBlowup { n: n + 1 },
        AmbientKind::RuledTrivial { g, n } => AmbientKind::RuledTrivial { g, n: n + 1 },
        AmbientKind::ProductOfSpheres => {
            let amb = AmbientLattice::rational(2);
            let e = HomologyClass(vec![1, -1, -1]);
            return Ok((amb, Contraction::ToProduct, e));
        }
        AmbientKind::RuledTwisted { .. } => {
            return Err(Error::Unsupported(
                "blowup of the twisted ruled surface".into(),
            ))
        }
    };
    names.push(fresh);
    let amb = AmbientLattice::new(kind)?.with_names(names)?;
    let e = amb.generator(amb.rank() - 1);
    Ok((amb, Contraction::Forget, e))
}

/// Applies a blowup move, naming the new generator `E<k>` and new component after it.
pub fn blowup(config: &DivisorConfig, mv: &BlowupMove) -> Result<Blowup> {
    blowup_named(config, mv, None, None)
}

pub fn blowup_named(
    config: &DivisorConfig,
    mv: &BlowupMove,
    generator_name: Option<&str>,
    component_id: Option<&str>,
) -> Result<Blowup> {
    let (amb, embed, e) = blown_up_ambient(&config.ambient, generator_name)?;
    let comp_id = component_id
        .map(str::to_string)
        .unwrap_or_else(|| config.fresh_id(amb.names().last().map(String::as_str).unwrap_or("E")));
    let lifted = DivisorConfig {
        ambient: amb,
        components: config
            .components
            .iter()
            .map(|c| DivisorComponent::new(c.id.clone(), embed.lift(&c.cls), c.genus))
            .collect(),
        edges: config.edges.clone(),
    };
    let mut out = apply_blowup(lifted, mv, &e, &comp_id)?;
    out.embedding = embed;
    Ok(out)
}

/// Rewrites a configuration already embedded in the blown-up lattice, with exceptional class `e`.
pub(crate) fn apply_blowup(
    mut cfg: DivisorConfig,
    mv: &BlowupMove,
    e: &HomologyClass,
    comp_id: &str,
) -> Result<Blowup> {
    let sub = |cfg: &mut DivisorConfig, id: &str| -> Result<()> {
        let c = cfg
            .component_mut(id)
            .ok_or_else(|| Error::InvalidMove(format!("unknown component {id}")))?;
        c.cls = &c.cls - e;
        Ok(())
    };
    if cfg.component(comp_id).is_some()
        && !matches!(
            mv,
            BlowupMove::NonToric { .. }
                | BlowupMove::Exterior {
                    include_component: false
                }
        )
    {
        return Err(Error::InvalidMove(format!(
            "component id {comp_id} already in use"
        )));
    }
    let mut new_component = None;
    match mv {
        BlowupMove::Exterior { include_component } => {
            if *include_component {
                cfg.components
                    .push(DivisorComponent::new(comp_id, e.clone(), 0));
                new_component = Some(comp_id.to_string());
            }
        }
        BlowupMove::Toric { a, b } => {
            if a == b || !cfg.remove_edge(a, b) {
                return Err(Error::InvalidMove(format!("no edge ({a},{b})")));
            }
            sub(&mut cfg, a)?;
            sub(&mut cfg, b)?;
            cfg.components
                .push(DivisorComponent::new(comp_id, e.clone(), 0));
            cfg.add_edge(a, comp_id);
            cfg.add_edge(b, comp_id);
            new_component = Some(comp_id.to_string());
        }
        BlowupMove::NonToric { component } => sub(&mut cfg, component)?,
        BlowupMove::HalfToric { component } => {
            sub(&mut cfg, component)?;
            cfg.components
                .push(DivisorComponent::new(comp_id, e.clone(), 0));
            cfg.add_edge(component, comp_id);
            new_component = Some(comp_id.to_string());
        }
    }
    let embedding = Contraction::Forget;
    Ok(Blowup {
        config: cfg,
        exceptional: e.clone(),
        new_component,
        embedding,
    })
}

/// Outcome of a blowdown, with everything needed to replay it as a blowup.
#[derive(Debug, Clone)]
pub struct Blowdown {
    pub config: DivisorConfig,
    pub kind: BlowupType,
    /// The inverse move, phrased in component ids of the contracted configuration.
    pub inverse: BlowupMove,
    /// Id of the removed exceptional component, if any.
    pub removed_component: Option<String>,
    pub contraction: Contraction,
    /// Ambient before the blowdown (names included).
    pub pre_ambient: AmbientLattice,
}

/// Blowup type implied by how the exceptional class meets the configuration.
pub fn detect_type(
    config: &DivisorConfig,
    e: &HomologyClass,
) -> Result<(BlowupMove, Option<String>)> {
    let amb = &config.ambient;
    let carriers: Vec<&DivisorComponent> =
        config.components.iter().filter(|c| c.cls == *e).collect();
    let fe = amb.format(e);
    match carriers.as_slice() {
        [] => {
            let pos: Vec<(&str, i64)> = config
                .components
                .iter()
                .map(|c| (c.id.as_str(), amb.pair_unchecked(e, &c.cls)))
                .filter(|(_, p)| *p != 0)
                .collect();
            if pos.iter().any(|(_, p)| *p < 0) {
                return Err(Error::AmbiguousBlowdown(format!(
                    "{fe} pairs negatively with a component"
                )));
            }
            match pos.as_slice() {
                [] => Ok((
                    BlowupMove::Exterior {
                        include_component: false,
                    },
                    None,
                )),
                [(id, 1)] => Ok((
                    BlowupMove::NonToric {
                        component: id.to_string(),
                    },
                    None,
                )),
                _ => Err(Error::AmbiguousBlowdown(format!(
                    "{fe} meets the divisor more than once"
                ))),
            }
        }
        [c] => {
            let nb = config.neighbors(&c.id);
            let id = Some(c.id.clone());
            match nb.as_slice() {
                [] => Ok((
                    BlowupMove::Exterior {
                        include_component: true,
                    },
                    id,
                )),
                [x] => Ok((
                    BlowupMove::HalfToric {
                        component: x.clone(),
                    },
                    id,
                )),
                [x, y] if x != y => Ok((
                    BlowupMove::Toric {
                        a: x.clone(),
                        b: y.clone(),
                    },
                    id,
                )),
                _ => Err(Error::AmbiguousBlowdown(format!(
                    "component {} carrying {fe} has {} edges",
                    c.id,
                    nb.len()
                ))),
            }
        }
        _ => Err(Error::AmbiguousBlowdown(format!(
            "several components carry {fe}"
        ))),
    }
}

/// Contraction sending `e` to the last generator and dropping it.
pub fn contraction_for(
    ambient: &AmbientLattice,
    e: &HomologyClass,
) -> Result<(Contraction, AmbientLattice)> {
    if *ambient.kind() == (AmbientKind::RationalBlowup { n: 2 })
        && *e == HomologyClass(vec![1, -1, -1])
    {
        return Ok((Contraction::ToProduct, AmbientLattice::product_of_spheres()));
    }
    let (t, last) = normalize_to_basis(ambient, e)?;
    let names = ambient.names();
    let new_names: Vec<String> = match permutation_source(&t) {
        Some(src) => src[..last].iter().map(|&i| names[i].clone()).collect(),
        None => names[..last].to_vec(),
    };
    let kind = match *ambient.kind() {
        AmbientKind::RationalBlowup { n: 1 } => AmbientKind::ProjectivePlane,
        AmbientKind::RationalBlowup { n } => AmbientKind::RationalBlowup { n: n - 1 },
        AmbientKind::RuledTrivial { g, n } => AmbientKind::RuledTrivial { g, n: n - 1 },
        _ => return Err(Error::Unsupported("blowdown in a minimal ambient".into())),
    };
    let amb = AmbientLattice::new(kind)?.with_names(new_names)?;
    Ok((Contraction::Drop { transform: t }, amb))
}

/// For a permutation matrix, the source position of each target position.
fn permutation_source(t: &Transform) -> Option<Vec<usize>> {
    t.matrix
        .iter()
        .map(|row| {
            let ones: Vec<usize> = (0..row.len()).filter(|&j| row[j] == 1).collect();
            (ones.len() == 1 && row.iter().all(|x| *x == 0 || *x == 1)).then(|| ones[0])
        })
        .collect()
}

/// Blows down an exceptional class, detecting the type from the incidence pattern.
pub fn blowdown(config: &DivisorConfig, target: &HomologyClass) -> Result<Blowdown> {
    let amb = &config.ambient;
    if !amb.is_exceptional_numerically(target)? {
        return Err(Error::NotExceptional(amb.format(target)));
    }
    let (mv, carrier) = detect_type(config, target)?;
    let (contraction, new_amb) = contraction_for(amb, target)?;
    let mut out = DivisorConfig {
        ambient: new_amb,
        components: vec![],
        edges: config.edges.clone(),
    };
    for c in &config.components {
        if Some(&c.id) == carrier.as_ref() {
            continue;
        }
        out.components.push(DivisorComponent::new(
            c.id.clone(),
            contraction.push(&c.cls),
            c.genus,
        ));
    }
    if let Some(id) = &carrier {
        out.edges.retain(|(a, b)| a != id && b != id);
    }
    if let BlowupMove::Toric { a, b } = &mv {
        out.add_edge(a, b);
    }
    let problems = out.validate();
    if !problems.is_empty() {
        return Err(Error::InvalidConfig(format!(
            "blowdown of {} produced: {}",
            amb.format(target),
            problems.join("; ")
        )));
    }
    Ok(Blowdown {
        config: out,
        kind: mv.kind(),
        inverse: mv,
        removed_component: carrier,
        contraction,
        pre_ambient: amb.clone(),
    })
}

/// Rebuilds the configuration before a blowdown from the contracted one.
pub fn replay_blowdown(
    post: &DivisorConfig,
    inverse: &BlowupMove,
    removed_component: Option<&str>,
    contraction: &Contraction,
    pre_ambient: &AmbientLattice,
    target: &HomologyClass,
) -> Result<DivisorConfig> {
    let lifted = DivisorConfig {
        ambient: pre_ambient.clone(),
        components: post
            .components
            .iter()
            .map(|c| DivisorComponent::new(c.id.clone(), contraction.lift(&c.cls), c.genus))
            .collect(),
        edges: post.edges.clone(),
    };
    let id = removed_component.unwrap_or("_");
    Ok(apply_blowup(lifted, inverse, target, id)?.config)
}

/// Moves an area vector across a blowup: the new generator gets `area`.
pub fn blowup_areas(ambient: &AmbientLattice, w: &AreaVector, area: &Rational) -> AreaVector {
    if *ambient.kind() == AmbientKind::ProductOfSpheres {
        return Contraction::ToProduct.lift_areas(w, area);
    }
    w.extended(area.clone())
}

/// Area below which a new generator keeps area(K+[D]) negative after any blowup type.
///
/// Toric and non-toric blowups leave area(K+[D]) unchanged, half-toric and plain
/// exterior add the new area once, exterior with its component adds it twice.
pub fn blowup_area_threshold(config: &DivisorConfig, w: &AreaVector) -> Result<Rational> {
    let a = config.hypothesis_area(w)?;
    Ok(-a / BigInt::from(2))
}

/// Toric blowup of a self-intersection sequence at 1-based position k.
pub fn toric_seq_blowup(seq: &[i64], k: usize) -> Result<Vec<i64>> {
    if k == 0 || k >= seq.len() {
        return Err(Error::InvalidInput(format!(
            "position {k} out of range 1..{}",
            seq.len().saturating_sub(1)
        )));
    }
    let mut out = Vec::with_capacity(seq.len() + 1);
    out.extend_from_slice(&seq[..k - 1]);
    out.push(seq[k - 1] - 1);
    out.push(-1);
    out.push(seq[k] - 1);
    out.extend_from_slice(&seq[k + 1..]);
    Ok(out)
}

/// Whether the sequence arises from (0,0) by toric blowups; the witness lists positions in order.
pub fn is_toric_blowup_seq(seq: &[i64]) -> Option<Vec<usize>> {
    let mut dead = HashSet::new();
    contract(seq, &mut dead)
}

fn contract(seq: &[i64], dead: &mut HashSet<Vec<i64>>) -> Option<Vec<usize>> {
    if seq == [0, 0] {
        return Some(vec![]);
    }
    if seq.len() <= 2 || dead.contains(seq) {
        return None;
    }
    for i in 1..seq.len() - 1 {
        if seq[i] != -1 {
            continue;
        }
        let mut shorter = Vec::with_capacity(seq.len() - 1);
        shorter.extend_from_slice(&seq[..i - 1]);
        shorter.push(seq[i - 1] + 1);
        shorter.push(seq[i + 1] + 1);
        shorter.extend_from_slice(&seq[i + 2..]);
        if let Some(mut w) = contract(&shorter, dead) {
            w.push(i);
            return Some(w);
        }
    }
    dead.insert(seq.to_vec());
    None
}
