//! Divisor configurations: decorated intersection graphs over an ambient lattice.

use std::collections::BTreeMap;

use num_traits::Signed;
use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::lattice::{AmbientLattice, AreaVector, HomologyClass, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorComponent {
    pub id: String,
    pub cls: HomologyClass,
    pub genus: i64,
}

/// Components plus an explicit multiset of intersection edges.
#[derive(Debug, Clone)]
pub struct DivisorConfig {
    pub ambient: AmbientLattice,
    pub components: Vec<DivisorComponent>,
    pub edges: Vec<(String, String)>,
}

/// Result of smoothing every intersection point of one connected piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothedSurface {
    pub cls: HomologyClass,
    pub genus: i64,
    pub sources: Vec<String>,
}

impl DivisorComponent {
    pub fn new(id: impl Into<String>, cls: HomologyClass, genus: i64) -> Self {
        DivisorComponent {
            id: id.into(),
            cls,
            genus,
        }
    }
}

fn edge_key(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

impl DivisorConfig {
    /// Builds a configuration whose component genera are filled in by adjunction.
    pub fn from_classes(
        ambient: AmbientLattice,
        comps: Vec<(&str, HomologyClass)>,
        edges: Vec<(&str, &str)>,
    ) -> Result<Self> {
        let mut components = Vec::new();
        for (id, cls) in comps {
            let genus = ambient.adjunction_genus(&cls)?.ok_or_else(|| {
                Error::InvalidConfig(format!("component {id} has no adjunction genus"))
            })?;
            components.push(DivisorComponent::new(id, cls, genus));
        }
        let edges = edges.into_iter().map(|(a, b)| edge_key(a, b)).collect();
        Ok(DivisorConfig {
            ambient,
            components,
            edges,
        })
    }

    /// Like `from_classes`, adding one edge per unit of positive pairing.
    pub fn from_classes_auto(
        ambient: AmbientLattice,
        comps: Vec<(&str, HomologyClass)>,
    ) -> Result<Self> {
        let mut cfg = Self::from_classes(ambient, comps, vec![])?;
        cfg.edges = cfg.forced_edges();
        Ok(cfg)
    }

    /// Edge multiset forced by the pairings (for configurations with non-negative pairings).
    pub fn forced_edges(&self) -> Vec<(String, String)> {
        let mut edges = Vec::new();
        for (i, a) in self.components.iter().enumerate() {
            for b in &self.components[i + 1..] {
                let m = self.ambient.pair_unchecked(&a.cls, &b.cls);
                for _ in 0..m.max(0) {
                    edges.push(edge_key(&a.id, &b.id));
                }
            }
        }
        edges
    }

    pub fn component(&self, id: &str) -> Option<&DivisorComponent> {
        self.components.iter().find(|c| c.id == id)
    }

    pub fn component_mut(&mut self, id: &str) -> Option<&mut DivisorComponent> {
        self.components.iter_mut().find(|c| c.id == id)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.components.iter().position(|c| c.id == id)
    }

    pub fn edge_multiplicity(&self, a: &str, b: &str) -> usize {
        self.edges
            .iter()
            .filter(|(x, y)| edge_key(x, y) == edge_key(a, b))
            .count()
    }

    /// Neighbor ids of a component, one entry per edge.
    pub fn neighbors(&self, id: &str) -> Vec<String> {
        self.edges
            .iter()
            .filter_map(|(a, b)| {
                if a == id {
                    Some(b.clone())
                } else if b == id {
                    Some(a.clone())
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn add_edge(&mut self, a: &str, b: &str) {
        self.edges.push(edge_key(a, b));
    }

    /// Removes one copy of the edge; returns whether it existed.
    pub fn remove_edge(&mut self, a: &str, b: &str) -> bool {
        let k = edge_key(a, b);
        match self.edges.iter().position(|(x, y)| edge_key(x, y) == k) {
            Some(pos) => {
                self.edges.remove(pos);
                true
            }
            None => false,
        }
    }

    pub fn remove_component(&mut self, id: &str) {
        self.components.retain(|c| c.id != id);
        self.edges.retain(|(a, b)| a != id && b != id);
    }

    /// A component id not yet used, preferring `base`.
    pub fn fresh_id(&self, base: &str) -> String {
        if self.component(base).is_none() {
            return base.to_string();
        }
        (1..)
            .map(|k| format!("{base}_{k}"))
            .find(|c| self.component(c).is_none())
            .unwrap()
    }

    /// Violated invariants; empty means valid.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.components.is_empty() {
            out.push("configuration has no components".into());
        }
        let rank = self.ambient.rank();
        let mut seen = std::collections::BTreeSet::new();
        for c in &self.components {
            if !seen.insert(c.id.as_str()) {
                out.push(format!("duplicate component id {}", c.id));
            }
            if c.cls.0.len() != rank {
                out.push(format!(
                    "component {}: expected {rank} coefficients, got {}",
                    c.id,
                    c.cls.0.len()
                ));
                continue;
            }
            match self.ambient.adjunction_genus(&c.cls) {
                Ok(Some(g)) if g == c.genus => {}
                Ok(Some(g)) => out.push(format!(
                    "component {}: genus {} but adjunction forces {g}",
                    c.id, c.genus
                )),
                _ => out.push(format!(
                    "component {}: class is not realizable by an embedded surface",
                    c.id
                )),
            }
        }
        for (a, b) in &self.edges {
            if a == b {
                out.push(format!("self-edge at {a}"));
            }
            if self.component(a).is_none() || self.component(b).is_none() {
                out.push(format!("edge ({a},{b}) references an unknown component"));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for (i, a) in self.components.iter().enumerate() {
            for b in &self.components[i + 1..] {
                let p = self.ambient.pair_unchecked(&a.cls, &b.cls);
                let m = self.edge_multiplicity(&a.id, &b.id) as i64;
                if p < 0 {
                    out.push(format!(
                        "pair ({},{}): negative intersection {p}",
                        a.id, b.id
                    ));
                } else if p != m {
                    out.push(format!(
                        "pair ({},{}): {m} edges but intersection number {p}",
                        a.id, b.id
                    ));
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn validate_areas(&self, w: &AreaVector) -> Vec<String> {
        let mut out = Vec::new();
        if let Err(e) = self.ambient.validate_areas(w) {
            out.push(e.to_string());
            return out;
        }
        for c in &self.components {
            match self.ambient.area(&c.cls, w) {
                Ok(a) if a.is_positive() => {}
                Ok(a) => out.push(format!("component {}: area {a} is not positive", c.id)),
                Err(e) => out.push(format!("component {}: {e}", c.id)),
            }
        }
        out
    }

    pub fn total_class(&self) -> HomologyClass {
        self.components
            .iter()
            .fold(self.ambient.zero(), |acc, c| &acc + &c.cls)
    }

    /// Union-find labels of the connected pieces of the dual graph.
    fn pieces(&self) -> Vec<usize> {
        let mut uf = UnionFind::<usize>::new(self.components.len());
        for (a, b) in &self.edges {
            if let (Some(i), Some(j)) = (self.index_of(a), self.index_of(b)) {
                uf.union(i, j);
            }
        }
        uf.into_labeling()
    }

    pub fn connected_count(&self) -> usize {
        let mut labels = self.pieces();
        labels.sort_unstable();
        labels.dedup();
        labels.len()
    }

    pub fn is_connected(&self) -> bool {
        self.connected_count() == 1
    }

    /// First Betti number of the dual graph (edges counted with multiplicity).
    pub fn graph_b1(&self) -> i64 {
        self.edges.len() as i64 - self.components.len() as i64 + self.connected_count() as i64
    }

    /// Total genus by the closed formula and by the graph formula.
    pub fn total_genus(&self) -> Result<(i64, i64)> {
        let d = self.total_class();
        let s = self.ambient.square(&d)? + self.ambient.k_dot(&d)?;
        if s % 2 != 0 {
            return Err(Error::InvalidConfig("[D]²+K·[D] is odd".into()));
        }
        let closed = s / 2 + 1;
        let graph = self.components.iter().map(|c| c.genus).sum::<i64>() + self.graph_b1()
            - self.connected_count() as i64
            + 1;
        if closed != graph {
            return Err(Error::InvalidConfig(format!(
                "total genus disagreement: closed formula {closed}, graph formula {graph}"
            )));
        }
        Ok((closed, graph))
    }

    /// Smooths every intersection point, one surface per connected piece.
    pub fn smooth_all(&self) -> Vec<SmoothedSurface> {
        let labels = self.pieces();
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            groups.entry(*l).or_default().push(i);
        }
        let mut out: Vec<SmoothedSurface> = groups
            .values()
            .map(|idx| {
                let ids: Vec<String> = idx.iter().map(|&i| self.components[i].id.clone()).collect();
                let cls = idx.iter().fold(self.ambient.zero(), |acc, &i| {
                    &acc + &self.components[i].cls
                });
                let edges = self.edges.iter().filter(|(a, _)| ids.contains(a)).count() as i64;
                let genus = idx.iter().map(|&i| self.components[i].genus).sum::<i64>() + edges
                    - idx.len() as i64
                    + 1;
                SmoothedSurface {
                    cls,
                    genus,
                    sources: ids,
                }
            })
            .collect();
        out.sort_by_key(|s| self.index_of(&s.sources[0]));
        out
    }

    /// True iff area(K+[D]) < 0.
    pub fn check_hypothesis(&self, w: &AreaVector) -> Result<bool> {
        Ok(self.hypothesis_area(w)?.is_negative())
    }

    pub fn hypothesis_area(&self, w: &AreaVector) -> Result<Rational> {
        let kd = &self.ambient.canonical() + &self.total_class();
        self.ambient.area(&kd, w)
    }

    /// Spheres, no loops, and [D]²+K·[D] = −2.
    pub fn check_tree_of_spheres(&self) -> Vec<String> {
        let mut out = Vec::new();
        for c in &self.components {
            if c.genus != 0 {
                out.push(format!("component {} has genus {}", c.id, c.genus));
            }
        }
        if self.graph_b1() != 0 {
            out.push(format!(
                "dual graph has {} independent loops",
                self.graph_b1()
            ));
        }
        let d = self.total_class();
        let s = self.ambient.pair_unchecked(&d, &d)
            + self.ambient.pair_unchecked(&self.ambient.canonical(), &d);
        if s != -2 {
            out.push(format!("[D]²+K·[D] = {s}, expected -2"));
        }
        out
    }

    /// Components keyed by id, for order-independent comparison.
    pub fn component_map(&self) -> BTreeMap<&str, (&HomologyClass, i64)> {
        self.components
            .iter()
            .map(|c| (c.id.as_str(), (&c.cls, c.genus)))
            .collect()
    }

    /// Edges with each pair ordered and the list sorted.
    pub fn sorted_edges(&self) -> Vec<(String, String)> {
        let mut e: Vec<(String, String)> = self.edges.iter().map(|(a, b)| edge_key(a, b)).collect();
        e.sort();
        e
    }

    /// Whether a degree sequence makes the dual graph a simple chain.
    pub fn is_chain(&self) -> bool {
        if !self.is_connected() || self.graph_b1() != 0 {
            return false;
        }
        self.components
            .iter()
            .all(|c| self.neighbors(&c.id).len() <= 2)
    }
}

impl PartialEq for DivisorConfig {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient
            && self.component_map() == other.component_map()
            && self.sorted_edges() == other.sorted_edges()
    }
}

impl Eq for DivisorConfig {}
