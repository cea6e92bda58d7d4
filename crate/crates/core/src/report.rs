//! Serializable summaries behind the command-line front end.

use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::attractor::{Gdifs, Side};
use crate::cfspec::{preset_names, CfSpec, CodeVerdict, Perron};
use crate::dynamics::{Geometry, MapKind, OrbitState, Realization};
use crate::transducer::{build_transducer, fiber};
use crate::{QNum, Result};

/// A definition file, or the name of a shipped preset.
pub fn load_spec_arg(arg: &str) -> Result<CfSpec> {
    if !Path::new(arg).exists() && preset_names().contains(&arg) {
        return CfSpec::preset(arg);
    }
    CfSpec::load(arg)
}

fn verdict_text(v: &CodeVerdict) -> String {
    match v {
        CodeVerdict::Yes => "yes".into(),
        CodeVerdict::No { left, right } => format!("no: {} = {}", left.join(" "), right.join(" ")),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub admissible: bool,
    pub code: String,
    pub dual_code: String,
    pub strongly_connected: bool,
    pub g: Vec<Vec<String>>,
    pub perron: Option<Vec<i64>>,
    pub interval_problems: Vec<String>,
    pub h: Vec<String>,
    pub k: Vec<String>,
    pub r: Option<Vec<String>>,
    /// Why the attractors do not form a realization, if they do not.
    pub realization_error: Option<String>,
    pub base_check: Option<String>,
    pub dual_check: Option<String>,
    pub geometry: Option<Geometry>,
}

fn verify_side(spec: &CfSpec, side: Side) -> Vec<String> {
    let descs = match side {
        Side::Base => &spec.attractors.h,
        Side::Dual => &spec.attractors.k,
    };
    match descs {
        Some(d) => Gdifs::new(spec, side).verify(d).iter().map(|v| v.to_string()).collect(),
        None => vec![],
    }
}

pub fn check(spec: &CfSpec) -> CheckSummary {
    let cf = spec.check();
    let mut s = CheckSummary {
        name: spec.name.clone(),
        admissible: cf.admissible(),
        code: verdict_text(&cf.code),
        dual_code: verdict_text(&cf.dual_code),
        strongly_connected: cf.strongly_connected,
        g: cf.g.iter().map(|row| row.iter().map(|x| x.to_string()).collect()).collect(),
        perron: match &cf.perron {
            Perron::Yes(v) => Some(v.iter().map(|&x| x as i64).collect()),
            Perron::No => None,
        },
        interval_problems: cf.interval_problems.clone(),
        h: verify_side(spec, Side::Base),
        k: verify_side(spec, Side::Dual),
        r: None,
        realization_error: None,
        base_check: None,
        dual_check: None,
        geometry: None,
    };
    if !s.admissible {
        return s;
    }
    match Realization::new(spec.clone()) {
        Ok(r) => {
            s.r = r.r.as_ref().map(|r| r.iter().map(|u| u.to_string()).collect());
            s.base_check = Some(r.realization_check(Side::Base).to_string());
            s.dual_check = Some(r.realization_check(Side::Dual).to_string());
            s.geometry = Some(r.geometric_check());
        }
        Err(e) => s.realization_error = Some(e.to_string()),
    }
    s
}

impl fmt::Display for CheckSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "spec: {}", self.name)?;
        writeln!(f, "code: {}", self.code)?;
        writeln!(f, "dual code: {}", self.dual_code)?;
        writeln!(f, "strongly connected: {}", self.strongly_connected)?;
        let rows: Vec<String> = self.g.iter().map(|r| format!("[{}]", r.join(", "))).collect();
        writeln!(f, "G = [{}]", rows.join(", "))?;
        match &self.perron {
            Some(v) => writeln!(f, "spectral radius 1, eigenvector {v:?}")?,
            None => writeln!(f, "spectral radius test failed")?,
        }
        for p in &self.interval_problems {
            writeln!(f, "interval: {p}")?;
        }
        for (name, vs) in [("H", &self.h), ("K", &self.k)] {
            for (i, v) in vs.iter().enumerate() {
                writeln!(f, "{name}{i}: {v}")?;
            }
        }
        if let Some(r) = &self.r {
            for (i, u) in r.iter().enumerate() {
                writeln!(f, "R{i} = {u}")?;
            }
        }
        if let Some(e) = &self.realization_error {
            writeln!(f, "realization: {e}")?;
        }
        if let (Some(b), Some(d)) = (&self.base_check, &self.dual_check) {
            writeln!(f, "base realization check: {b}")?;
            writeln!(f, "dual realization check: {d}")?;
        }
        if let Some(g) = &self.geometry {
            writeln!(f, "geometry: {g:?}")?;
        }
        write!(f, "admissible: {}", self.admissible)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Iterated {
    pub iterations: usize,
    pub exact_fixed: bool,
    pub last_step: f64,
    pub state: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AttractorSummary {
    pub name: String,
    pub side: String,
    /// Verdicts on the descriptors in the spec, when it has them.
    pub given: Vec<String>,
    pub iterated: Iterated,
}

impl AttractorSummary {
    pub fn passed(&self) -> bool {
        if self.given.is_empty() {
            self.iterated.exact_fixed
        } else {
            self.given.iter().all(|v| v == "verified")
        }
    }
}

/// Verifies the given attractor of one side and iterates the Hutchinson
/// operator from the start intervals.
pub fn attractors(spec: &CfSpec, side: Side, iters: usize, tol: f64) -> AttractorSummary {
    let ifs = Gdifs::new(spec, side);
    let it = ifs.iterate(ifs.start(), iters, tol);
    AttractorSummary {
        name: spec.name.clone(),
        side: format!("{side:?}").to_lowercase(),
        given: verify_side(spec, side),
        iterated: Iterated {
            iterations: it.iterations,
            exact_fixed: it.exact_fixed,
            last_step: it.last_step,
            state: it.state.iter().map(|u| u.to_string()).collect(),
        },
    }
}

impl fmt::Display for AttractorSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "spec: {} ({} side)", self.name, self.side)?;
        for (i, v) in self.given.iter().enumerate() {
            writeln!(f, "given {i}: {v}")?;
        }
        let it = &self.iterated;
        writeln!(
            f,
            "iterated {} times, exact fixed point: {}, last step {:.3e}",
            it.iterations, it.exact_fixed, it.last_step
        )?;
        for (i, u) in it.state.iter().enumerate() {
            writeln!(f, "X{i} = {u}")?;
        }
        write!(f, "passed: {}", self.passed())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitSummary {
    pub start: String,
    pub map: MapKind,
    pub purely_periodic: bool,
    pub preperiod: Option<usize>,
    pub period_labels: Vec<String>,
    pub trace: Vec<String>,
    pub multivalued: usize,
    pub states: usize,
}

pub fn orbit(r: &Realization, map: MapKind, node: usize, x: QNum, max_states: usize) -> Result<OrbitSummary> {
    let s = OrbitState::new(node, x);
    let rep = r.orbit(map, &s, max_states)?;
    Ok(OrbitSummary {
        start: s.to_string(),
        map,
        purely_periodic: rep.purely_periodic,
        preperiod: (rep.preperiod != usize::MAX).then_some(rep.preperiod),
        period_labels: r.labels(&rep.period_letters()),
        trace: rep.trace.iter().map(|t| t.to_string()).collect(),
        multivalued: rep.multivalued,
        states: rep.states,
    })
}

impl fmt::Display for OrbitSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start: {} under {:?}", self.start, self.map)?;
        writeln!(f, "states explored: {}, multivalued: {}", self.states, self.multivalued)?;
        match self.preperiod {
            Some(p) => writeln!(f, "preperiod: {p}")?,
            None => writeln!(f, "no cycle reached")?,
        }
        if self.purely_periodic {
            writeln!(f, "period: {}", self.period_labels.join(" "))?;
            writeln!(f, "trace: {}", self.trace.join(" → "))?;
        }
        write!(f, "purely periodic: {}", self.purely_periodic)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TransducerSummary {
    pub nodes: Vec<String>,
    pub edges: Vec<String>,
    /// Symbolic sequences of the requested point, if one was given.
    pub fiber: Option<Vec<String>>,
}

pub fn transducer(spec: &CfSpec, point: Option<(usize, QNum)>, steps: usize) -> Result<TransducerSummary> {
    let t = build_transducer(&spec.code);
    let label = |k: usize| spec.code.letters[k].label.as_str();
    let edges = t
        .edges
        .iter()
        .map(|e| {
            let out = e.output.map_or("ε", label);
            format!("{} --{}/{}--> {}", t.nodes[e.from], e.input.as_char(), out, t.nodes[e.to])
        })
        .collect();
    let fiber = match point {
        Some((i, x)) => Some(fiber(&x, i, spec, steps)?.iter().map(|p| p.display(&spec.code)).collect()),
        None => None,
    };
    Ok(TransducerSummary { nodes: t.nodes.iter().map(|n| n.to_string()).collect(), edges, fiber })
}

impl fmt::Display for TransducerSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} nodes: {}", self.nodes.len(), self.nodes.join(" "))?;
        writeln!(f, "{} edges:", self.edges.len())?;
        for e in &self.edges {
            writeln!(f, "  {e}")?;
        }
        if let Some(fb) = &self.fiber {
            write!(f, "fiber ({}): {}", fb.len(), fb.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_presets() {
        let s = check(&CfSpec::preset("tau-minus-one").unwrap());
        assert!(s.admissible);
        assert_eq!(s.geometry, Some(Geometry::Geometric));
        assert_eq!(s.perron, Some(vec![1, 2]));
        let s = check(&CfSpec::preset("odd").unwrap());
        assert_eq!(s.geometry, Some(Geometry::BaseOnly));
        assert!(s.to_string().ends_with("admissible: true"));
    }

    #[test]
    fn attractor_summary() {
        let s = attractors(&CfSpec::preset("farey").unwrap(), Side::Dual, 10, 0.0);
        assert!(s.passed());
        assert!(s.iterated.exact_fixed);
    }

    #[test]
    fn transducer_summary() {
        let spec = CfSpec::preset("tau-minus-one").unwrap();
        let s = transducer(&spec, Some((1, QNum::parse("(15 -1 22 5)").unwrap())), 1000).unwrap();
        assert_eq!((s.nodes.len(), s.edges.len()), (10, 18));
        assert!(!s.fiber.unwrap().is_empty());
    }
}
