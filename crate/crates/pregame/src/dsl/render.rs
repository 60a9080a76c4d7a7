//! Deterministic DOT output for typed game expressions.
//!
//! Decisions and computations become oval nodes, copy and delete become
//! anonymous junction points, and each feedback cup becomes a back-edge
//! (`dir=back, constraint=false`) from the node producing the forward value
//! to the node consuming it backwards. Wires are labeled with their set
//! names. Node identifiers follow traversal order, so the output is stable
//! byte for byte.

use std::fmt::Write as _;

use crate::core::Interface;
use crate::finite::Ports;

use super::typecheck::{CheckedProgram, TypedExpr, TypedNode};
use super::{DslError, DslErrorKind, Span};

/// Renders one declared game as a DOT digraph.
pub fn render_dot(program: &CheckedProgram, game: &str) -> Result<String, DslError> {
    let body = program.game(game).ok_or_else(|| {
        DslError::new(
            DslErrorKind::UnknownName,
            Span::new(0, 0, 1, 1),
            format!("no game named `{game}`"),
        )
    })?;
    let mut r = Renderer {
        program,
        nodes: Vec::new(),
        next_node: 0,
        next_boundary: 0,
        wires: Wires::default(),
    };
    let root = r.walk(body);

    // Any wire still open at the root belongs to the outer boundary.
    let mut boundary_lines = Vec::new();
    let class_order = r.wires.classes();
    let mut edges = Vec::new();
    for class in class_order {
        let label = r.wires.labels[class].clone();
        let producer = match r.wires.producer[class].clone() {
            Some(p) => p,
            None => r.boundary(&mut boundary_lines),
        };
        let consumer = match r.wires.consumer[class].clone() {
            Some(c) => c,
            None => r.boundary(&mut boundary_lines),
        };
        let style = if r.wires.cupped[class] {
            ", dir=back, constraint=false"
        } else {
            ""
        };
        edges.push(format!(
            "  {producer} -> {consumer} [label=\"{label}\"{style}];"
        ));
    }
    let _ = root;

    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{game}\" {{");
    let _ = writeln!(out, "  rankdir=TB;");
    for n in &r.nodes {
        let _ = writeln!(out, "{n}");
    }
    for b in &boundary_lines {
        let _ = writeln!(out, "{b}");
    }
    for e in &edges {
        let _ = writeln!(out, "{e}");
    }
    let _ = writeln!(out, "}}");
    Ok(out)
}

#[derive(Default)]
struct Wires {
    parent: Vec<usize>,
    labels: Vec<String>,
    producer: Vec<Option<String>>,
    consumer: Vec<Option<String>>,
    cupped: Vec<bool>,
}

impl Wires {
    fn fresh(&mut self, label: &str) -> usize {
        let id = self.parent.len();
        self.parent.push(id);
        self.labels.push(label.to_string());
        self.producer.push(None);
        self.consumer.push(None);
        self.cupped.push(false);
        id
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        // Keep the earlier class as representative for stable ordering.
        let (keep, merge) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[merge] = keep;
        if self.producer[keep].is_none() {
            self.producer[keep] = self.producer[merge].take();
        }
        if self.consumer[keep].is_none() {
            self.consumer[keep] = self.consumer[merge].take();
        }
        self.cupped[keep] |= self.cupped[merge];
    }

    fn set_producer(&mut self, w: usize, node: &str) {
        let r = self.find(w);
        debug_assert!(self.producer[r].is_none(), "wire driven twice");
        self.producer[r] = Some(node.to_string());
    }

    fn set_consumer(&mut self, w: usize, node: &str) {
        let r = self.find(w);
        debug_assert!(self.consumer[r].is_none(), "wire consumed twice");
        self.consumer[r] = Some(node.to_string());
    }

    fn mark_cup(&mut self, w: usize) {
        let r = self.find(w);
        self.cupped[r] = true;
    }

    /// Distinct classes in creation order of their first member.
    fn classes(&mut self) -> Vec<usize> {
        let mut seen = Vec::new();
        for i in 0..self.parent.len() {
            let r = self.find(i);
            if !seen.contains(&r) {
                seen.push(r);
            }
        }
        seen
    }
}

/// Pending wire ends of a subdiagram, one entry per port.
struct Wiring {
    cov_in: Vec<usize>,
    cov_out: Vec<usize>,
    /// Backward values arriving from later stages (codomain side).
    contra_in: Vec<usize>,
    /// Backward values leaving towards earlier stages (domain side).
    contra_out: Vec<usize>,
}

struct Renderer<'a> {
    program: &'a CheckedProgram,
    nodes: Vec<String>,
    next_node: usize,
    next_boundary: usize,
    wires: Wires,
}

impl<'a> Renderer<'a> {
    fn fresh_node(&mut self, attrs: &str) -> String {
        let id = format!("n{}", self.next_node);
        self.next_node += 1;
        self.nodes.push(format!("  {id} [{attrs}];"));
        id
    }

    fn boundary(&mut self, lines: &mut Vec<String>) -> String {
        let id = format!("b{}", self.next_boundary);
        self.next_boundary += 1;
        lines.push(format!("  {id} [shape=none, label=\"\"];"));
        id
    }

    fn port_wires(&mut self, ports: &Ports) -> Vec<usize> {
        ports
            .sets()
            .iter()
            .map(|s| self.wires.fresh(s.name()))
            .collect()
    }

    /// Standard wiring for an atom drawn as a node: all four bundles attach
    /// to it.
    fn atom(&mut self, attrs: &str, dom: &Interface, cod: &Interface) -> Wiring {
        let node = self.fresh_node(attrs);
        let cov_in = self.port_wires(dom.cov());
        let cov_out = self.port_wires(cod.cov());
        let contra_in = self.port_wires(cod.contra());
        let contra_out = self.port_wires(dom.contra());
        for &w in &cov_in {
            self.wires.set_consumer(w, &node);
        }
        for &w in &cov_out {
            self.wires.set_producer(w, &node);
        }
        for &w in &contra_in {
            self.wires.set_consumer(w, &node);
        }
        for &w in &contra_out {
            self.wires.set_producer(w, &node);
        }
        Wiring {
            cov_in,
            cov_out,
            contra_in,
            contra_out,
        }
    }

    fn walk(&mut self, e: &TypedExpr) -> Wiring {
        const JUNCTION: &str = "shape=point, label=\"\", width=0.1";
        match &e.node {
            TypedNode::Player(name) => {
                self.atom(&format!("label=\"{name}\", shape=oval"), &e.domain, &e.codomain)
            }
            TypedNode::Fun(name) => {
                self.atom(&format!("label=\"{name}\", shape=oval"), &e.domain, &e.codomain)
            }
            TypedNode::DualFun(name) => self.atom(
                &format!("label=\"{name}*\", shape=oval"),
                &e.domain,
                &e.codomain,
            ),
            TypedNode::Copy(_)
            | TypedNode::CopyDual(_)
            | TypedNode::Delete(_)
            | TypedNode::DeleteDual(_) => self.atom(JUNCTION, &e.domain, &e.codomain),
            TypedNode::GameRef(name) => {
                let body = self.program.game(name).expect("checked reference");
                self.walk(body)
            }
            TypedNode::Id => {
                let cov: Vec<usize> = self.port_wires(e.domain.cov());
                let contra: Vec<usize> = self.port_wires(e.domain.contra());
                Wiring {
                    cov_in: cov.clone(),
                    cov_out: cov,
                    contra_in: contra.clone(),
                    contra_out: contra,
                }
            }
            TypedNode::Swap(a, b) => {
                let wa = self.port_wires(a);
                let wb = self.port_wires(b);
                let mut cov_in = wa.clone();
                cov_in.extend(&wb);
                let mut cov_out = wb;
                cov_out.extend(&wa);
                Wiring {
                    cov_in,
                    cov_out,
                    contra_in: Vec::new(),
                    contra_out: Vec::new(),
                }
            }
            TypedNode::Tau(p) => {
                let ws = self.port_wires(p);
                for &w in &ws {
                    self.wires.mark_cup(w);
                }
                Wiring {
                    cov_in: ws.clone(),
                    cov_out: Vec::new(),
                    contra_in: Vec::new(),
                    contra_out: ws,
                }
            }
            TypedNode::Compose(first, then) => {
                let wf = self.walk(first);
                let wt = self.walk(then);
                for (&a, &b) in wf.cov_out.iter().zip(&wt.cov_in) {
                    self.wires.union(a, b);
                }
                for (&a, &b) in wt.contra_out.iter().zip(&wf.contra_in) {
                    self.wires.union(a, b);
                }
                Wiring {
                    cov_in: wf.cov_in,
                    cov_out: wt.cov_out,
                    contra_in: wt.contra_in,
                    contra_out: wf.contra_out,
                }
            }
            TypedNode::Tensor(left, right) => {
                let wl = self.walk(left);
                let wr = self.walk(right);
                let join = |mut a: Vec<usize>, b: Vec<usize>| {
                    a.extend(b);
                    a
                };
                Wiring {
                    cov_in: join(wl.cov_in, wr.cov_in),
                    cov_out: join(wl.cov_out, wr.cov_out),
                    contra_in: join(wl.contra_in, wr.contra_in),
                    contra_out: join(wl.contra_out, wr.contra_out),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::check;
    use super::*;

    #[test]
    fn dilemma_diagram_has_expected_shape() {
        let p = check(include_str!("../../examples/prisoners_dilemma.pregame")).unwrap();
        let dot = render_dot(&p, "pd").unwrap();
        // 2 players + q as ovals, one junction for the backward copy.
        assert_eq!(dot.matches("shape=oval").count(), 3);
        assert_eq!(dot.matches("shape=point").count(), 1);
        // The cup contributes one styled back-edge per outcome port.
        assert_eq!(dot.matches("dir=back").count(), 2);
        assert!(dot.contains("label=\"Move\""));
        // 2 forward moves + 2 cup edges + 4 duplicated payoffs.
        assert_eq!(dot.matches(" -> ").count(), 8);
    }

    #[test]
    fn bare_identity_is_a_single_labeled_wire() {
        let p = check("set X = {a}\ngame wire = id[X]").unwrap();
        let dot = render_dot(&p, "wire").unwrap();
        assert_eq!(dot.matches(" -> ").count(), 1);
        assert!(dot.contains("label=\"X\""));
        assert_eq!(dot.matches("shape=none").count(), 2);
    }

    #[test]
    fn rendering_is_deterministic() {
        let p = check(include_str!("../../examples/two_stage.pregame")).unwrap();
        let a = render_dot(&p, "seq").unwrap();
        let b = render_dot(&p, "seq").unwrap();
        assert_eq!(a, b);
    }
}
