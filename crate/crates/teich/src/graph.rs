//! Combinatorial pants decompositions: a graph whose nodes are pairs of
//! pants (three slots each) and whose edges are slot gluings, plus the
//! exhaustion ordering that attaches one pants or one one-holed-torus unit
//! along a single curve at every step.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("slot ({0}, {1}) out of range")]
    SlotOutOfRange(usize, usize),
    #[error("slot ({0}, {1}) used more than once")]
    SlotReused(usize, usize),
    #[error("gluing {0} joins a slot to itself")]
    DegenerateGluing(usize),
    #[error("graph is disconnected; components start at nodes {0:?}")]
    Disconnected(Vec<usize>),
    #[error(
        "no exhaustion order: after prefix {prefix:?}, every remaining unit meets it \
         along more than one curve (frontier {frontier:?})"
    )]
    NoExhaustion {
        prefix: Vec<usize>,
        frontier: Vec<(usize, usize)>,
    },
    #[error("graph has no pants")]
    Empty,
}

/// One slot of one pants node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub node: usize,
    pub slot: usize,
}

impl Slot {
    pub fn new(node: usize, slot: usize) -> Self {
        Self { node, slot }
    }
}

/// An interior decomposition curve: two glued slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    pub a: Slot,
    pub b: Slot,
}

/// Pants decomposition graph. Boundary slots are the slots not covered by
/// any gluing, ordered by (node, slot); that ordering indexes boundary
/// lengths everywhere else in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PantsGraph {
    pub num_pants: usize,
    pub gluings: Vec<Gluing>,
}

impl PantsGraph {
    pub fn new(num_pants: usize, gluings: Vec<Gluing>) -> Result<Self, GraphError> {
        let g = Self { num_pants, gluings };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        if self.num_pants == 0 {
            return Err(GraphError::Empty);
        }
        let mut seen = BTreeSet::new();
        for (i, gl) in self.gluings.iter().enumerate() {
            for s in [gl.a, gl.b] {
                if s.node >= self.num_pants || s.slot >= 3 {
                    return Err(GraphError::SlotOutOfRange(s.node, s.slot));
                }
                if !seen.insert(s) {
                    return Err(GraphError::SlotReused(s.node, s.slot));
                }
            }
            if gl.a == gl.b {
                return Err(GraphError::DegenerateGluing(i));
            }
        }
        let comps = self.component_roots();
        if comps.len() > 1 {
            return Err(GraphError::Disconnected(comps));
        }
        Ok(())
    }

    /// Boundary slots in canonical order.
    pub fn boundary_slots(&self) -> Vec<Slot> {
        let glued: BTreeSet<Slot> = self
            .gluings
            .iter()
            .flat_map(|g| [g.a, g.b])
            .collect();
        let mut out = Vec::new();
        for node in 0..self.num_pants {
            for slot in 0..3 {
                let s = Slot::new(node, slot);
                if !glued.contains(&s) {
                    out.push(s);
                }
            }
        }
        out
    }

    /// Edge index glued to the given slot, if any.
    pub fn edge_of_slot(&self, s: Slot) -> Option<usize> {
        self.gluings
            .iter()
            .position(|g| g.a == s || g.b == s)
    }

    /// Smallest node index of each connected component.
    fn component_roots(&self) -> Vec<usize> {
        let mut seen = vec![false; self.num_pants];
        let mut roots = Vec::new();
        for start in 0..self.num_pants {
            if seen[start] {
                continue;
            }
            roots.push(start);
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(n) = stack.pop() {
                for g in &self.gluings {
                    for (x, y) in [(g.a, g.b), (g.b, g.a)] {
                        if x.node == n && !seen[y.node] {
                            seen[y.node] = true;
                            stack.push(y.node);
                        }
                    }
                }
            }
        }
        roots
    }

    fn edges_between(&self, node: usize, prefix: &BTreeSet<usize>) -> usize {
        self.gluings
            .iter()
            .filter(|g| {
                (g.a.node == node && prefix.contains(&g.b.node))
                    || (g.b.node == node && prefix.contains(&g.a.node))
            })
            .count()
    }
}

/// What a single exhaustion step attaches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitKind {
    Pants,
    OneHoledTorus,
}

/// One prefix of the exhaustion, with the node it added.
#[derive(Debug, Clone)]
pub struct ExhaustionStep {
    /// Node added at this step.
    pub node: usize,
    /// Pants or one-holed torus (a node carrying a self-gluing).
    pub unit: UnitKind,
    /// Nodes of the prefix after this step, in attachment order.
    pub nodes: Vec<usize>,
    /// The connecting edge, absent for the first step.
    pub attached_along: Option<usize>,
}

/// Find an exhaustion order: each step attaches one pants or one-holed-torus
/// unit along exactly one curve, and every prefix stays connected. Searches
/// orders with backtracking (deterministic by node index) and reports the
/// deepest dead end as a certificate when no order exists.
pub fn exhaustion(graph: &PantsGraph) -> Result<Vec<ExhaustionStep>, GraphError> {
    graph.validate()?;
    let n = graph.num_pants;
    let unit_of = |node: usize| {
        let self_loops = graph
            .gluings
            .iter()
            .filter(|g| g.a.node == node && g.b.node == node)
            .count();
        if self_loops > 0 {
            UnitKind::OneHoledTorus
        } else {
            UnitKind::Pants
        }
    };

    let mut best_dead_end: Option<Vec<usize>> = None;
    let mut order: Vec<usize> = Vec::new();
    let mut in_prefix = BTreeSet::new();
    let mut dead: BTreeSet<Vec<usize>> = BTreeSet::new();

    fn dfs(
        graph: &PantsGraph,
        n: usize,
        order: &mut Vec<usize>,
        in_prefix: &mut BTreeSet<usize>,
        dead: &mut BTreeSet<Vec<usize>>,
        best_dead_end: &mut Option<Vec<usize>>,
    ) -> bool {
        if order.len() == n {
            return true;
        }
        let key: Vec<usize> = in_prefix.iter().copied().collect();
        if dead.contains(&key) {
            return false;
        }
        let mut advanced = false;
        for cand in 0..n {
            if in_prefix.contains(&cand) {
                continue;
            }
            let ok = if order.is_empty() {
                // first unit stands alone
                true
            } else {
                graph.edges_between(cand, in_prefix) == 1
            };
            if !ok {
                continue;
            }
            advanced = true;
            order.push(cand);
            in_prefix.insert(cand);
            if dfs(graph, n, order, in_prefix, dead, best_dead_end) {
                return true;
            }
            in_prefix.remove(&cand);
            order.pop();
        }
        if !advanced || order.len() > best_dead_end.as_ref().map_or(0, |d| d.len()) {
            let candidate = order.clone();
            if best_dead_end.as_ref().map_or(true, |d| candidate.len() >= d.len()) {
                *best_dead_end = Some(candidate);
            }
        }
        dead.insert(key);
        false
    }

    if dfs(graph, n, &mut order, &mut in_prefix, &mut dead, &mut best_dead_end) {
        let mut steps = Vec::new();
        let mut prefix: Vec<usize> = Vec::new();
        let mut set = BTreeSet::new();
        for &node in &order {
            let attached_along = if prefix.is_empty() {
                None
            } else {
                graph
                    .gluings
                    .iter()
                    .position(|g| {
                        (g.a.node == node && set.contains(&g.b.node))
                            || (g.b.node == node && set.contains(&g.a.node))
                    })
            };
            prefix.push(node);
            set.insert(node);
            steps.push(ExhaustionStep {
                node,
                unit: unit_of(node),
                nodes: prefix.clone(),
                attached_along,
            });
        }
        return Ok(steps);
    }

    let prefix = best_dead_end.unwrap_or_default();
    let set: BTreeSet<usize> = prefix.iter().copied().collect();
    let frontier = (0..n)
        .filter(|node| !set.contains(node))
        .map(|node| (node, graph.edges_between(node, &set)))
        .collect();
    Err(GraphError::NoExhaustion { prefix, frontier })
}

/// Standard graphs used across tests and the CLI examples.
pub mod shapes {
    use super::*;

    /// One pants, slots 0 and 1 self-glued; slot 2 is the boundary.
    pub fn one_holed_torus() -> PantsGraph {
        PantsGraph::new(
            1,
            vec![Gluing {
                a: Slot::new(0, 0),
                b: Slot::new(0, 1),
            }],
        )
        .unwrap()
    }

    /// Two pants glued along slot 2 - slot 2; four boundary slots.
    pub fn shirt() -> PantsGraph {
        PantsGraph::new(
            2,
            vec![Gluing {
                a: Slot::new(0, 2),
                b: Slot::new(1, 2),
            }],
        )
        .unwrap()
    }

    /// Two-holed torus: pants 0 self-glued on slots 0-1, slot 2 glued to
    /// pants 1 slot 0; slots 1 and 2 of pants 1 are boundaries.
    pub fn two_holed_torus() -> PantsGraph {
        PantsGraph::new(
            2,
            vec![
                Gluing {
                    a: Slot::new(0, 0),
                    b: Slot::new(0, 1),
                },
                Gluing {
                    a: Slot::new(0, 2),
                    b: Slot::new(1, 0),
                },
            ],
        )
        .unwrap()
    }

    /// Closed genus-2 surface, dumbbell decomposition: two one-holed-torus
    /// units joined along the separating curve.
    pub fn genus_two_dumbbell() -> PantsGraph {
        PantsGraph::new(
            2,
            vec![
                Gluing {
                    a: Slot::new(0, 0),
                    b: Slot::new(0, 1),
                },
                Gluing {
                    a: Slot::new(1, 0),
                    b: Slot::new(1, 1),
                },
                Gluing {
                    a: Slot::new(0, 2),
                    b: Slot::new(1, 2),
                },
            ],
        )
        .unwrap()
    }

    /// Closed genus-2 surface, theta decomposition: two pants glued along
    /// all three slot pairs. Admits no valid exhaustion order.
    pub fn genus_two_theta() -> PantsGraph {
        PantsGraph::new(
            2,
            (0..3)
                .map(|k| Gluing {
                    a: Slot::new(0, k),
                    b: Slot::new(1, k),
                })
                .collect(),
        )
        .unwrap()
    }

    /// Five-holed sphere from two pants.
    pub fn five_holed_sphere() -> PantsGraph {
        shirt_with_extra_boundary()
    }

    fn shirt_with_extra_boundary() -> PantsGraph {
        PantsGraph::new(
            2,
            vec![Gluing {
                a: Slot::new(0, 2),
                b: Slot::new(1, 2),
            }],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_catches_reuse_and_disconnection() {
        let err = PantsGraph::new(
            1,
            vec![
                Gluing {
                    a: Slot::new(0, 0),
                    b: Slot::new(0, 1),
                },
                Gluing {
                    a: Slot::new(0, 0),
                    b: Slot::new(0, 2),
                },
            ],
        )
        .unwrap_err();
        assert_eq!(err, GraphError::SlotReused(0, 0));

        let err = PantsGraph::new(2, vec![]).unwrap_err();
        assert_eq!(err, GraphError::Disconnected(vec![0, 1]));
    }

    #[test]
    fn boundary_slots_are_canonically_ordered() {
        let g = shapes::shirt();
        let b = g.boundary_slots();
        assert_eq!(
            b,
            vec![
                Slot::new(0, 0),
                Slot::new(0, 1),
                Slot::new(1, 0),
                Slot::new(1, 1)
            ]
        );
    }

    #[test]
    fn single_pants_exhausts_in_one_step() {
        let g = PantsGraph::new(1, vec![]).unwrap();
        let steps = exhaustion(&g).unwrap();
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].unit, UnitKind::Pants);
        assert_eq!(steps[0].attached_along, None);
    }

    #[test]
    fn five_holed_sphere_two_steps() {
        let steps = exhaustion(&shapes::five_holed_sphere()).unwrap();
        assert_eq!(steps.len(), 2);
        assert!(steps[1].attached_along.is_some());
    }

    #[test]
    fn genus_two_dumbbell_attaches_torus_unit() {
        let steps = exhaustion(&shapes::genus_two_dumbbell()).unwrap();
        assert_eq!(steps.len(), 2);
        assert_eq!(steps[0].unit, UnitKind::OneHoledTorus);
        assert_eq!(steps[1].unit, UnitKind::OneHoledTorus);
        assert_eq!(steps[1].attached_along, Some(2));
    }

    #[test]
    fn genus_two_theta_has_no_exhaustion() {
        let err = exhaustion(&shapes::genus_two_theta()).unwrap_err();
        match err {
            GraphError::NoExhaustion { prefix, frontier } => {
                assert_eq!(prefix.len(), 1);
                assert_eq!(frontier.len(), 1);
                assert_eq!(frontier[0].1, 3);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }
}
