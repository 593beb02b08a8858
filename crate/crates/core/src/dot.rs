//! Dual graphs in Graphviz DOT, with stable node and edge order.

use std::fmt::Write;

use crate::cusp::AffineRuledCertificate;
use crate::divisor::DivisorConfig;
use crate::error::{Error, Result};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One node per component, labelled with class, self-intersection and genus; one
/// undirected edge per intersection point.
pub fn config_dot(config: &DivisorConfig, name: &str) -> String {
    let amb = &config.ambient;
    let mut comps: Vec<_> = config.components.iter().collect();
    comps.sort_by(|a, b| a.id.cmp(&b.id));
    let mut out = String::new();
    writeln!(out, "graph {} {{", quote(name)).unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for c in comps {
        let sq = amb
            .square(&c.cls)
            .map(|s| s.to_string())
            .unwrap_or_else(|_| "?".into());
        let mut label = format!("{}\\n{}\\n{}", c.id, amb.format(&c.cls), sq);
        if c.genus != 0 {
            label.push_str(&format!("\\ng={}", c.genus));
        }
        writeln!(
            out,
            "  {} [label=\"{}\"];",
            quote(&c.id),
            label.replace('"', "\\\"")
        )
        .unwrap();
    }
    for (a, b) in config.sorted_edges() {
        writeln!(out, "  {} -- {};", quote(&a), quote(&b)).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Graphs of every pipeline stage of a certificate: the input, the configuration
/// after each reduction stage, the terminal configuration and the resolution.
pub fn certificate_dots(cert: &AffineRuledCertificate) -> Result<Vec<(String, String)>> {
    let (input, _) = cert.input.build()?;
    let (terminal, terminal_areas) = cert.terminal.build()?;
    let mut out = vec![("input".to_string(), config_dot(&input, "input"))];
    let mut reduced = terminal.clone();
    if let Some(aux) = &cert.auxiliary {
        reduced.remove_component(aux);
    }
    let mut cur = reduced;
    let mut areas =
        terminal_areas.ok_or_else(|| Error::InvalidInput("terminal: missing areas".into()))?;
    let mut stages = Vec::new();
    for st in cert.traces.iter().rev() {
        stages.push((st.stage.clone(), cur.clone()));
        let (prev, w) = crate::reduction::replay(&cur, &areas, &st.trace)?;
        cur = prev;
        areas = w;
    }
    for (stage, cfg) in stages.into_iter().rev() {
        out.push((stage.clone(), config_dot(&cfg, &stage)));
    }
    out.push(("terminal".into(), config_dot(&terminal, "terminal")));
    let (res, _) = cert.resolution.config.build()?;
    out.push(("resolution".into(), config_dot(&res, "resolution")));
    Ok(out)
}
