//! Marked hyperbolic surfaces assembled from a pants graph and
//! Fenchel-Nielsen coordinates.
//!
//! Gluing works through slot frames: every positive-length pants boundary
//! carries an isometry moving it to standard position (translation along
//! the imaginary axis, seam foot at i). Crossing a glued curve composes
//! `slot_frame . twist-translation . half-turn . slot_frame^-1`, so every
//! gluing relation holds by construction and validation only measures
//! floating-point drift. Fundamental-group generators are the pants
//! boundary loops plus one loop per non-tree edge of the pants graph.

use crate::curves::{slope_to_word, BasisSymbol, Slope, SlopeLetter, SurfaceKind};
use crate::graph::{GraphError, PantsGraph, Slot};
use crate::moebius::{IsometryClass, MoebiusError, MoebiusMatrix};
use crate::pants::{build_pants, PantsError, PantsGeometry};
use crate::real::{scaled_tol, Real};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SurfaceError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Pants(#[from] PantsError),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
    #[error("expected {expected} {what} values, got {got}")]
    CountMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("interior curve {0} must have positive finite length, got {1}")]
    NonPositiveInteriorLength(usize, f64),
    #[error("boundary slot {0} must have nonnegative finite length, got {1}")]
    NegativeBoundaryLength(usize, f64),
    #[error("twist {0} must be finite")]
    NonFiniteTwist(usize),
    #[error("holonomy validation failed: worst relator residual {0}")]
    Validation(f64),
    #[error("curve word has elliptic holonomy; not a geodesic representative")]
    EllipticCurveWord,
    #[error("empty curve word")]
    EmptyWord,
    #[error("surface is not a one-holed torus or four-holed sphere")]
    UnsupportedKind,
    #[error("Fenchel-Nielsen points have different shapes")]
    ShapeMismatch,
    #[error("pinch target {0} is not an interior curve index")]
    PinchNotInterior(usize),
    #[error("pinch length must be positive, got {0}")]
    PinchNonPositive(f64),
    #[error("empty or invalid sampling range [{0}, {1}]")]
    InvalidRange(f64, f64),
}

/// Fenchel-Nielsen coordinates for a fixed pants graph: one length and one
/// normalized twist per interior edge (displacement = twist * length), one
/// length per boundary slot (0 encodes a puncture).
#[derive(Debug, Clone, PartialEq)]
pub struct FNPoint<R: Real> {
    pub lengths: Vec<R>,
    pub twists: Vec<R>,
    pub boundary_lengths: Vec<R>,
}

impl<R: Real> FNPoint<R> {
    pub fn same_shape(&self, other: &Self) -> bool {
        self.lengths.len() == other.lengths.len()
            && self.twists.len() == other.twists.len()
            && self.boundary_lengths.len() == other.boundary_lengths.len()
    }
}

/// Fundamental-group generator: a pants boundary loop (conjugated into the
/// base frame along the spanning tree) or the loop crossing a non-tree edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gen {
    BoundaryLoop { node: usize, slot: usize },
    EdgeLoop { edge: usize },
}

/// One letter of a curve word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Letter {
    pub gen: Gen,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: Gen) -> Self {
        Self {
            gen,
            inverse: false,
        }
    }

    pub fn inv(gen: Gen) -> Self {
        Self { gen, inverse: true }
    }
}

pub type CurveWord = Vec<Letter>;

pub fn invert(word: &[Letter]) -> CurveWord {
    word.iter()
        .rev()
        .map(|l| Letter {
            gen: l.gen,
            inverse: !l.inverse,
        })
        .collect()
}

/// A hyperbolic structure on the pants graph with its holonomy data.
#[derive(Debug, Clone)]
pub struct MarkedSurface<R: Real> {
    pub graph: PantsGraph,
    pub point: FNPoint<R>,
    pub pants: Vec<PantsGeometry<R>>,
    /// Frame of each pants node in the base frame (spanning-tree product).
    frames: Vec<MoebiusMatrix<R>>,
    /// Forward transition across each edge (from side `a` into side `b`).
    transitions: Vec<MoebiusMatrix<R>>,
    tree_edge: Vec<bool>,
    boundary_slots: Vec<Slot>,
    /// Worst relator deviation observed at build time.
    pub relator_residual: R,
}

/// Build and validate the marked surface for `point` on `graph`.
pub fn build_surface<R: Real>(
    graph: &PantsGraph,
    point: &FNPoint<R>,
) -> Result<MarkedSurface<R>, SurfaceError> {
    graph.validate()?;
    let n_edges = graph.gluings.len();
    let boundary_slots = graph.boundary_slots();
    check_count("length", n_edges, point.lengths.len())?;
    check_count("twist", n_edges, point.twists.len())?;
    check_count("boundary length", boundary_slots.len(), point.boundary_lengths.len())?;
    for (i, &l) in point.lengths.iter().enumerate() {
        if !(l > R::zero()) || !l.is_finite() {
            return Err(SurfaceError::NonPositiveInteriorLength(i, l.as_f64()));
        }
    }
    for (i, &t) in point.twists.iter().enumerate() {
        if !t.is_finite() {
            return Err(SurfaceError::NonFiniteTwist(i));
        }
    }
    for (i, &b) in point.boundary_lengths.iter().enumerate() {
        if b < R::zero() || !b.is_finite() {
            return Err(SurfaceError::NegativeBoundaryLength(i, b.as_f64()));
        }
    }

    // boundary lengths per (node, slot)
    let slot_length = |s: Slot| -> R {
        if let Some(e) = graph.edge_of_slot(s) {
            point.lengths[e]
        } else {
            let idx = boundary_slots.iter().position(|&t| t == s).unwrap();
            point.boundary_lengths[idx]
        }
    };

    let mut pants = Vec::with_capacity(graph.num_pants);
    for node in 0..graph.num_pants {
        let ls: Vec<R> = (0..3).map(|k| slot_length(Slot::new(node, k))).collect();
        pants.push(build_pants(ls[0], ls[1], ls[2])?);
    }

    // forward transitions
    let half_turn = MoebiusMatrix::half_turn();
    let mut transitions = Vec::with_capacity(n_edges);
    for (e, gl) in graph.gluings.iter().enumerate() {
        let sa = pants[gl.a.node].slot_frame(gl.a.slot)?;
        let sb = pants[gl.b.node].slot_frame(gl.b.slot)?;
        let disp = point.twists[e] * point.lengths[e];
        let tw = MoebiusMatrix::diagonal_translation(disp);
        transitions.push(sa * tw * half_turn * sb.inverse());
    }

    // spanning tree frames by BFS from node 0
    let mut frames = vec![MoebiusMatrix::identity(); graph.num_pants];
    let mut tree_edge = vec![false; n_edges];
    let mut visited = vec![false; graph.num_pants];
    visited[0] = true;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(node) = queue.pop_front() {
        for (e, gl) in graph.gluings.iter().enumerate() {
            let (from, to, forward) = if gl.a.node == node {
                (gl.a.node, gl.b.node, true)
            } else if gl.b.node == node {
                (gl.b.node, gl.a.node, false)
            } else {
                continue;
            };
            if visited[to] || from == to {
                continue;
            }
            visited[to] = true;
            tree_edge[e] = true;
            let step = if forward {
                transitions[e]
            } else {
                transitions[e].inverse()
            };
            frames[to] = (frames[from] * step).renormalized();
            queue.push_back(to);
        }
    }

    let mut surface = MarkedSurface {
        graph: graph.clone(),
        point: point.clone(),
        pants,
        frames,
        transitions,
        tree_edge,
        boundary_slots,
        relator_residual: R::zero(),
    };
    surface.relator_residual = surface.validate()?;
    Ok(surface)
}

fn check_count(what: &'static str, expected: usize, got: usize) -> Result<(), SurfaceError> {
    if expected != got {
        Err(SurfaceError::CountMismatch {
            what,
            expected,
            got,
        })
    } else {
        Ok(())
    }
}

impl<R: Real> MarkedSurface<R> {
    /// Holonomy of a single generator in the base frame.
    pub fn generator(&self, g: Gen) -> MoebiusMatrix<R> {
        match g {
            Gen::BoundaryLoop { node, slot } => self.pants[node].holonomy[slot]
                .conjugate_by(&self.frames[node]),
            Gen::EdgeLoop { edge } => {
                let gl = self.graph.gluings[edge];
                self.frames[gl.a.node] * self.transitions[edge]
                    * self.frames[gl.b.node].inverse()
            }
        }
    }

    /// All generators in a deterministic order.
    pub fn generators(&self) -> Vec<Gen> {
        let mut out = Vec::new();
        for node in 0..self.graph.num_pants {
            for slot in 0..3 {
                out.push(Gen::BoundaryLoop { node, slot });
            }
        }
        for edge in 0..self.graph.gluings.len() {
            if !self.tree_edge[edge] {
                out.push(Gen::EdgeLoop { edge });
            }
        }
        out
    }

    /// Holonomy of a curve word.
    pub fn word_holonomy(&self, word: &[Letter]) -> Result<MoebiusMatrix<R>, SurfaceError> {
        if word.is_empty() {
            return Err(SurfaceError::EmptyWord);
        }
        let mut m = MoebiusMatrix::identity();
        for (i, l) in word.iter().enumerate() {
            let g = self.generator(l.gen);
            m = m * if l.inverse { g.inverse() } else { g };
            if i % 32 == 31 {
                m = m.renormalized();
            }
        }
        Ok(m.renormalized())
    }

    /// Geodesic length of the free homotopy class of a curve word
    /// (0 for parabolic or trivial classes, error for elliptic holonomy).
    pub fn curve_length(&self, word: &[Letter]) -> Result<R, SurfaceError> {
        let m = self.word_holonomy(word)?;
        m.translation_length()
            .map_err(|_| SurfaceError::EllipticCurveWord)
    }

    /// Holonomy of the decomposition curve of an interior edge.
    pub fn edge_curve(&self, edge: usize) -> MoebiusMatrix<R> {
        let gl = self.graph.gluings[edge];
        self.generator(Gen::BoundaryLoop {
            node: gl.a.node,
            slot: gl.a.slot,
        })
    }

    pub fn boundary_slots(&self) -> &[Slot] {
        &self.boundary_slots
    }

    /// Validate all gluing relations and decomposition-curve lengths;
    /// returns the worst residual.
    fn validate(&self) -> Result<R, SurfaceError> {
        let tol = scaled_tol::<R>(1e-9);
        let mut worst = R::zero();
        for node in 0..self.graph.num_pants {
            let [g0, g1, g2] = self.pants[node].holonomy;
            worst = worst.max((g0 * g1 * g2).identity_deviation());
        }
        for (e, gl) in self.graph.gluings.iter().enumerate() {
            let ga = self.generator(Gen::BoundaryLoop {
                node: gl.a.node,
                slot: gl.a.slot,
            });
            let gb = self.generator(Gen::BoundaryLoop {
                node: gl.b.node,
                slot: gl.b.slot,
            });
            let w = self.generator(Gen::EdgeLoop { edge: e });
            let crossed = (w * gb * w.inverse()).inverse();
            let scale = R::one()
                .max(entry_norm(&ga))
                .max(entry_norm(&crossed));
            worst = worst.max(ga.psl_distance(&crossed) / scale);
            let len = ga
                .translation_length()
                .map_err(SurfaceError::Moebius)?;
            let want = self.point.lengths[e];
            worst = worst.max((len - want).abs() / R::one().max(want));
        }
        if worst > tol {
            return Err(SurfaceError::Validation(worst.as_f64()));
        }
        Ok(worst)
    }

    /// Detect whether the surface is one of the two spectrum-supported
    /// kinds.
    pub fn kind(&self) -> Option<SurfaceKind> {
        let g = &self.graph;
        match (g.num_pants, g.gluings.len(), self.boundary_slots.len()) {
            (1, 1, 1) => Some(SurfaceKind::OneHoledTorus),
            (2, 1, 4) if g.gluings[0].a.node != g.gluings[0].b.node => Some(SurfaceKind::Shirt),
            _ => None,
        }
    }

    /// Concrete words for the slope basis curves A = (1,0), B = (0,1).
    ///
    /// On the torus, A is the glued decomposition curve and B the crossing
    /// loop. On the shirt, B is the decomposition curve (product of the two
    /// first-pants boundary loops in cyclic slot order) and A the curve
    /// separating delta1, delta3 from delta2, delta4.
    pub fn slope_basis_words(&self) -> Result<(CurveWord, CurveWord), SurfaceError> {
        match self.kind() {
            Some(SurfaceKind::OneHoledTorus) => {
                let gl = self.graph.gluings[0];
                let a = Letter::new(Gen::BoundaryLoop {
                    node: gl.a.node,
                    slot: gl.a.slot.min(gl.b.slot),
                });
                let b = Letter::new(Gen::EdgeLoop { edge: 0 });
                Ok((vec![a], vec![b]))
            }
            Some(SurfaceKind::Shirt) => {
                let [d1, d2, d3, _d4] = self.shirt_boundary_loops();
                // B = (0,1): decomposition curve, separates {d1,d2}|{d3,d4}
                let b_word = vec![Letter::new(d1), Letter::new(d2)];
                // A = (1,0): separates {d1,d3}|{d2,d4}
                let a_word = vec![
                    Letter::new(d1),
                    Letter::new(d2),
                    Letter::new(d3),
                    Letter::inv(d2),
                ];
                Ok((a_word, b_word))
            }
            None => Err(SurfaceError::UnsupportedKind),
        }
    }

    /// The four boundary loops of a shirt in label order: delta1, delta2 on
    /// the first pants of the gluing, delta3, delta4 on the second, each
    /// pair in cyclic slot order after the glued slot.
    pub fn shirt_boundary_loops(&self) -> [Gen; 4] {
        let gl = self.graph.gluings[0];
        let mk = |node: usize, glued_slot: usize| {
            [
                Gen::BoundaryLoop {
                    node,
                    slot: (glued_slot + 1) % 3,
                },
                Gen::BoundaryLoop {
                    node,
                    slot: (glued_slot + 2) % 3,
                },
            ]
        };
        let [d1, d2] = mk(gl.a.node, gl.a.slot);
        let [d3, d4] = mk(gl.b.node, gl.b.slot);
        [d1, d2, d3, d4]
    }

    /// Boundary lengths of a shirt in delta-label order.
    pub fn shirt_boundary_lengths(&self) -> Result<[R; 4], SurfaceError> {
        if self.kind() != Some(SurfaceKind::Shirt) {
            return Err(SurfaceError::UnsupportedKind);
        }
        let loops = self.shirt_boundary_loops();
        let mut out = [R::zero(); 4];
        for (i, g) in loops.into_iter().enumerate() {
            let Gen::BoundaryLoop { node, slot } = g else {
                unreachable!()
            };
            out[i] = self.pants[node].boundary_lengths[slot];
        }
        Ok(out)
    }

    /// Concrete word for a slope curve.
    pub fn slope_word(&self, s: &Slope) -> Result<CurveWord, SurfaceError> {
        let kind = self.kind().ok_or(SurfaceError::UnsupportedKind)?;
        let (wa, wb) = self.slope_basis_words()?;
        let abstract_word = slope_to_word(kind, s);
        let mut out = Vec::new();
        for SlopeLetter { symbol, inverse } in abstract_word {
            let piece = match symbol {
                BasisSymbol::A => &wa,
                BasisSymbol::B => &wb,
            };
            if inverse {
                out.extend(invert(piece));
            } else {
                out.extend_from_slice(piece);
            }
        }
        Ok(out)
    }

    /// Holonomy matrix of a slope curve by Stern-Brocot matrix descent;
    /// one matrix product per tree level.
    pub fn slope_matrix(&self, s: &Slope) -> Result<MoebiusMatrix<R>, SurfaceError> {
        let (wa, wb) = self.slope_basis_words()?;
        let ma = self.word_holonomy(&wa)?;
        let mb = self.word_holonomy(&wb)?;
        match s.pair() {
            (1, 0) => return Ok(ma),
            (0, 1) => return Ok(mb),
            _ => {}
        }
        let (mut left, mut right, mut ml, mut mr) = if s.p() > 0 {
            (Slope::new(1, 0).unwrap(), Slope::new(0, 1).unwrap(), ma, mb)
        } else {
            (
                Slope::new(0, 1).unwrap(),
                Slope::new(-1, 0).unwrap(),
                mb,
                ma.inverse(),
            )
        };
        let mut steps = 0usize;
        loop {
            let m = Slope::new(left.p() + right.p(), left.q() + right.q()).unwrap();
            let mm = (ml * mr).renormalized();
            if m == *s {
                return Ok(mm);
            }
            if s.det(&m) > 0 {
                right = m;
                mr = mm;
            } else {
                left = m;
                ml = mm;
            }
            steps += 1;
            debug_assert!(steps < 1_000_000, "slope descent runaway");
        }
    }

    /// Geodesic length of a slope curve.
    pub fn slope_length(&self, s: &Slope) -> Result<R, SurfaceError> {
        self.slope_matrix(s)?
            .translation_length()
            .map_err(|_| SurfaceError::EllipticCurveWord)
    }
}

/// Fenchel-Nielsen sup distance between two points of the same shape; twist
/// terms compare length-weighted twists, boundary slots compare log-lengths
/// with twist zero.
pub fn fn_distance<R: Real>(p: &FNPoint<R>, q: &FNPoint<R>) -> Result<R, SurfaceError> {
    if !p.same_shape(q) {
        return Err(SurfaceError::ShapeMismatch);
    }
    let mut sup = R::zero();
    for e in 0..p.lengths.len() {
        let (lp, lq) = (p.lengths[e], q.lengths[e]);
        sup = sup.max((lp / lq).ln().abs());
        sup = sup.max((lp * p.twists[e] - lq * q.twists[e]).abs());
    }
    for i in 0..p.boundary_lengths.len() {
        let (bp, bq) = (p.boundary_lengths[i], q.boundary_lengths[i]);
        match (bp == R::zero(), bq == R::zero()) {
            (true, true) => {}
            (false, false) => sup = sup.max((bp / bq).ln().abs()),
            // cusp against geodesic boundary: different topological type
            _ => return Err(SurfaceError::ShapeMismatch),
        }
    }
    Ok(sup)
}

/// The pinch path at parameter r: identical coordinates except the chosen
/// interior curve's length becomes r.
pub fn pinch_path<R: Real>(
    s: &MarkedSurface<R>,
    edge: usize,
    r: R,
) -> Result<MarkedSurface<R>, SurfaceError> {
    if edge >= s.graph.gluings.len() {
        return Err(SurfaceError::PinchNotInterior(edge));
    }
    if !(r > R::zero()) || !r.is_finite() {
        return Err(SurfaceError::PinchNonPositive(r.as_f64()));
    }
    let mut point = s.point.clone();
    point.lengths[edge] = r;
    build_surface(&s.graph, &point)
}

/// How interior and boundary lengths are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LengthDistribution {
    /// log-length uniform on [ln a, ln b] (default).
    LogUniform,
    /// density proportional to e^x in x = log-length, i.e. length uniform
    /// on [a, b]; the measure-motivated option.
    ExpWeighted,
}

#[derive(Debug, Clone, Copy)]
pub struct SampleOptions {
    pub distribution: LengthDistribution,
    /// Probability that a boundary slot degenerates to a puncture.
    pub cusp_probability: f64,
}

impl Default for SampleOptions {
    fn default() -> Self {
        Self {
            distribution: LengthDistribution::LogUniform,
            cusp_probability: 0.0,
        }
    }
}

/// Deterministic Fenchel-Nielsen sample for a fixed graph and seed.
pub fn sample_fn<R: Real>(
    graph: &PantsGraph,
    length_range: (f64, f64),
    twist_range: (f64, f64),
    seed: u64,
) -> Result<FNPoint<R>, SurfaceError> {
    sample_fn_with(graph, length_range, twist_range, seed, SampleOptions::default())
}

pub fn sample_fn_with<R: Real>(
    graph: &PantsGraph,
    length_range: (f64, f64),
    twist_range: (f64, f64),
    seed: u64,
    opts: SampleOptions,
) -> Result<FNPoint<R>, SurfaceError> {
    let (la, lb) = length_range;
    let (ta, tb) = twist_range;
    if !(la > 0.0 && lb >= la && la.is_finite() && lb.is_finite()) {
        return Err(SurfaceError::InvalidRange(la, lb));
    }
    if !(tb >= ta && ta.is_finite() && tb.is_finite()) {
        return Err(SurfaceError::InvalidRange(ta, tb));
    }
    graph.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw_length = |rng: &mut ChaCha8Rng| -> f64 {
        let u: f64 = rng.gen();
        match opts.distribution {
            LengthDistribution::LogUniform => (la.ln() + u * (lb.ln() - la.ln())).exp(),
            LengthDistribution::ExpWeighted => la + u * (lb - la),
        }
    };
    let n_edges = graph.gluings.len();
    let mut lengths = Vec::with_capacity(n_edges);
    let mut twists = Vec::with_capacity(n_edges);
    for _ in 0..n_edges {
        lengths.push(R::of(draw_length(&mut rng)));
        let u: f64 = rng.gen();
        twists.push(R::of(ta + u * (tb - ta)));
    }
    let mut boundary_lengths = Vec::new();
    for _ in graph.boundary_slots() {
        let cusp: f64 = rng.gen();
        if cusp < opts.cusp_probability {
            boundary_lengths.push(R::zero());
            continue;
        }
        boundary_lengths.push(R::of(draw_length(&mut rng)));
    }
    Ok(FNPoint {
        lengths,
        twists,
        boundary_lengths,
    })
}

fn entry_norm<R: Real>(m: &MoebiusMatrix<R>) -> R {
    m.a.abs().max(m.b.abs()).max(m.c.abs()).max(m.d.abs())
}

/// Classification of a slope word image, exposed for diagnostics.
pub fn word_class<R: Real>(
    s: &MarkedSurface<R>,
    word: &[Letter],
) -> Result<IsometryClass, SurfaceError> {
    Ok(s.word_holonomy(word)?.classify())
}
