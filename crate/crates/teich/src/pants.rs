//! Hyperbolic pairs of pants: boundary-length parametrization, seam
//! (common-perpendicular) lengths from right-angled hexagon trigonometry,
//! and an explicit holonomy triple, including cusped degenerations.
//!
//! The holonomy triple is stored in a trace normal form that is uniform over
//! cusps: with half-trace parameters a = 2 cosh(l1/2), b = 2 cosh(l2/2) and
//! z = exp(l3/2),
//!
//! ```text
//!   g1 = [[a, 1], [-1, 0]],   g2 = [[0, z], [-1/z, b]],   g3 = (g1 g2)^-1
//! ```
//!
//! so tr g1 = a, tr g2 = b, tr g3 = -(z + 1/z) = -2 cosh(l3/2) and
//! g1 g2 g3 = 1 exactly. Gluing code never relies on the ambient frame:
//! every boundary with positive length gets a slot frame that moves it to
//! the standard position (translation along the imaginary axis, seam foot
//! at the point i).

use crate::moebius::{
    axis_distance, map_to_zero_infinity, IdealPoint, IsometryClass, MoebiusMatrix, MoebiusError,
};
use crate::real::{acosh_stable, scaled_tol, Real};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PantsError {
    #[error("boundary length must be finite and nonnegative, got {0}")]
    InvalidBoundaryLength(f64),
    #[error("seam is undefined against a cusp: boundary {0} has length zero")]
    SeamAgainstCusp(usize),
    #[error("holonomy triple failed validation (residual {0})")]
    Validation(f64),
    #[error("slot {0} is a cusp and carries no frame")]
    CuspSlot(usize),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
}

/// Length of the common perpendicular between boundaries 1 and 2 of a pants
/// with boundary lengths (l1, l2, l3):
/// cosh s = (cosh(l3/2) + cosh(l1/2) cosh(l2/2)) / (sinh(l1/2) sinh(l2/2)).
pub fn hexagon_seam<R: Real>(l1: R, l2: R, l3: R) -> Result<R, PantsError> {
    for (idx, l) in [l1, l2].into_iter().enumerate() {
        if !(l > R::zero()) || !l.is_finite() {
            return if l == R::zero() {
                Err(PantsError::SeamAgainstCusp(idx))
            } else {
                Err(PantsError::InvalidBoundaryLength(l.as_f64()))
            };
        }
    }
    if l3 < R::zero() || !l3.is_finite() {
        return Err(PantsError::InvalidBoundaryLength(l3.as_f64()));
    }
    let half = R::of(0.5);
    let num = (l3 * half).cosh() + (l1 * half).cosh() * (l2 * half).cosh();
    let den = (l1 * half).sinh() * (l2 * half).sinh();
    Ok(acosh_stable(num / den))
}

/// A hyperbolic pair of pants with its canonical holonomy triple.
#[derive(Debug, Clone)]
pub struct PantsGeometry<R: Real> {
    /// Boundary lengths; 0 encodes a puncture.
    pub boundary_lengths: [R; 3],
    /// `seam_lengths[k]` is the separation of the two boundaries other than
    /// k: the common-perpendicular length between geodesic boundaries, and
    /// the distance truncated at the unit-area horocycle where a boundary
    /// degenerates to a cusp.
    pub seam_lengths: [R; 3],
    /// Boundary holonomies with `g1 g2 g3 = 1` and traces
    /// (+2 cosh(l1/2), +2 cosh(l2/2), -2 cosh(l3/2)).
    pub holonomy: [MoebiusMatrix<R>; 3],
}

/// Build the pants with the given boundary lengths (0 = puncture).
pub fn build_pants<R: Real>(l1: R, l2: R, l3: R) -> Result<PantsGeometry<R>, PantsError> {
    for l in [l1, l2, l3] {
        if l < R::zero() || !l.is_finite() {
            return Err(PantsError::InvalidBoundaryLength(l.as_f64()));
        }
    }
    let half = R::of(0.5);
    let a = R::of(2.0) * (l1 * half).cosh();
    let b = R::of(2.0) * (l2 * half).cosh();
    let z = (l3 * half).exp();

    let g1 = MoebiusMatrix::raw(a, R::one(), -R::one(), R::zero());
    let g2 = MoebiusMatrix::raw(R::zero(), z, -z.recip(), b);
    let g3 = (g1 * g2).inverse();

    let geom = PantsGeometry {
        boundary_lengths: [l1, l2, l3],
        seam_lengths: [
            slot_separation(&g2, &g3)?,
            slot_separation(&g3, &g1)?,
            slot_separation(&g1, &g2)?,
        ],
        holonomy: [g1, g2, g3],
    };
    geom.validate()?;
    Ok(geom)
}

impl<R: Real> PantsGeometry<R> {
    fn validate(&self) -> Result<(), PantsError> {
        let tol = scaled_tol::<R>(1e-10);
        let mut worst = R::zero();
        let prod = self.holonomy[0] * self.holonomy[1] * self.holonomy[2];
        worst = worst.max(prod.identity_deviation());
        for (k, g) in self.holonomy.iter().enumerate() {
            let want = R::of(2.0) * (self.boundary_lengths[k] * R::of(0.5)).cosh();
            worst = worst.max((g.trace().abs() - want).abs());
        }
        let scale = R::one().max(
            self.holonomy
                .iter()
                .map(|g| g.trace().abs())
                .fold(R::zero(), R::max),
        );
        if worst > tol * scale {
            return Err(PantsError::Validation((worst / scale).as_f64()));
        }
        Ok(())
    }

    /// Recover boundary lengths from the holonomy traces.
    pub fn lengths_from_traces(&self) -> [R; 3] {
        let mut out = [R::zero(); 3];
        for (k, g) in self.holonomy.iter().enumerate() {
            out[k] = R::of(2.0) * acosh_stable(g.trace().abs() * R::of(0.5));
        }
        out
    }

    /// Frame of a positive-length slot: the isometry S with
    /// S . D(l) . S^-1 = g_k and S(i) = the seam foot on the axis of g_k of
    /// the perpendicular toward slot k+1. Gluing composes these frames; the
    /// choice of reference slot pins the twist origin.
    pub fn slot_frame(&self, k: usize) -> Result<MoebiusMatrix<R>, PantsError> {
        let g = &self.holonomy[k];
        if g.classify() != IsometryClass::Hyperbolic {
            return Err(PantsError::CuspSlot(k));
        }
        let reference = &self.holonomy[(k + 1) % 3];
        let (att, rep) = g.fixed_points()?;
        let n = map_to_zero_infinity(rep, att)?;
        let foot = foot_radius(&n, reference)?;
        let shift = MoebiusMatrix::diagonal_translation(foot.ln());
        Ok(n.inverse() * shift)
    }
}

/// Radius r such that i*r is the foot, on the imaginary axis, of the
/// perpendicular dropped to the n-image of the reference boundary object.
fn foot_radius<R: Real>(
    n: &MoebiusMatrix<R>,
    reference: &MoebiusMatrix<R>,
) -> Result<R, PantsError> {
    let (b1, b2) = match reference.classify() {
        IsometryClass::Hyperbolic => {
            let (att, rep) = reference.fixed_points()?;
            (ideal_value(n.apply_ideal(att)), ideal_value(n.apply_ideal(rep)))
        }
        IsometryClass::Parabolic => {
            let p = ideal_value(n.apply_ideal(reference.parabolic_fixed_point()));
            (p, p)
        }
        _ => return Err(PantsError::Moebius(MoebiusError::NoAxis)),
    };
    let prod = b1 * b2;
    if !(prod > R::zero()) || !prod.is_finite() {
        // axes crossing the imaginary axis would mean the triple is not a
        // pants group; the construction guarantees disjointness
        return Err(PantsError::Validation(prod.as_f64()));
    }
    Ok(prod.sqrt())
}

fn ideal_value<R: Real>(p: IdealPoint<R>) -> R {
    p.x / p.y
}

/// Separation of two boundary objects of one pants: common-perpendicular
/// length between two geodesics, distance truncated at the unit-area
/// horocycle when one or both are cusps.
pub fn slot_separation<R: Real>(
    g: &MoebiusMatrix<R>,
    h: &MoebiusMatrix<R>,
) -> Result<R, PantsError> {
    use IsometryClass::*;
    match (g.classify(), h.classify()) {
        (Hyperbolic, Hyperbolic) => Ok(axis_distance(g, h)?),
        (Parabolic, Hyperbolic) => horoball_to_object(g, h),
        (Hyperbolic, Parabolic) => horoball_to_object(h, g),
        (Parabolic, Parabolic) => horoball_to_object(g, h),
        _ => Err(PantsError::Moebius(MoebiusError::NoAxis)),
    }
}

/// Distance from the unit-area horoball of the parabolic `par` to the axis
/// (or unit-area horoball) of `other`.
fn horoball_to_object<R: Real>(
    par: &MoebiusMatrix<R>,
    other: &MoebiusMatrix<R>,
) -> Result<R, PantsError> {
    let fix = par.parabolic_fixed_point();
    // Send the cusp to infinity; use the projectively orthogonal point as
    // the zero anchor so the map is always well conditioned.
    let anchor = IdealPoint { x: fix.y, y: -fix.x };
    let n = map_to_zero_infinity(anchor, fix)?;
    let p = par.conjugate_by(&n);
    // p = +-[[1, h], [0, 1]]; the unit-area horoball is {y > |h|}.
    let h_width = p.b.abs() / p.a.abs().max(R::epsilon());
    match other.classify() {
        IsometryClass::Hyperbolic => {
            let (att, rep) = other.fixed_points()?;
            let e1 = ideal_value(n.apply_ideal(att));
            let e2 = ideal_value(n.apply_ideal(rep));
            let radius = (e1 - e2).abs() * R::of(0.5);
            Ok((h_width / radius).ln())
        }
        IsometryClass::Parabolic => {
            let q = ideal_value(n.apply_ideal(other.parabolic_fixed_point()));
            // conjugate `other` to fix 0, read the horoball diameter 1/|c|
            let shift = MoebiusMatrix::raw(R::one(), -q, R::zero(), R::one());
            let om = other.conjugate_by(&(shift * n));
            let c = om.c.abs() / om.a.abs().max(R::epsilon());
            Ok((h_width * c).ln())
        }
        _ => Err(PantsError::Moebius(MoebiusError::NoAxis)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::MoebiusMatrix;

    type P = PantsGeometry<f64>;

    fn sample_lengths(seed: &mut u64, lo: f64, hi: f64) -> f64 {
        *seed ^= *seed << 13;
        *seed ^= *seed >> 7;
        *seed ^= *seed << 17;
        lo + (*seed as f64 / u64::MAX as f64) * (hi - lo)
    }

    #[test]
    fn seam_of_symmetric_pants() {
        // l1 = l2 = l3 = 2 arccosh 2: seam = arccosh((2 + 4)/3) = arccosh 2,
        // evaluated by the independent logarithm oracle ln(2 + sqrt(3)).
        let l = 2.0 * (2.0f64 + 3.0f64.sqrt()).ln();
        let oracle = (2.0f64 + 3.0f64.sqrt()).ln();
        assert!((oracle - 1.3169578969248166).abs() < 1e-15);
        let s = hexagon_seam(l, l, l).unwrap();
        assert!((s - oracle).abs() < 1e-13);
    }

    #[test]
    fn seam_is_symmetric_in_the_joined_pair() {
        let (l1, l2, l3) = (1.3, 2.1, 0.7);
        assert_eq!(hexagon_seam(l1, l2, l3).unwrap(), hexagon_seam(l2, l1, l3).unwrap());
    }

    #[test]
    fn seam_rejects_cusps_and_negative_lengths() {
        assert_eq!(hexagon_seam(0.0, 1.0, 1.0), Err(PantsError::SeamAgainstCusp(0)));
        assert_eq!(hexagon_seam(1.0, 0.0, 1.0), Err(PantsError::SeamAgainstCusp(1)));
        assert!(matches!(
            hexagon_seam(1.0, 1.0, -1.0),
            Err(PantsError::InvalidBoundaryLength(_))
        ));
    }

    #[test]
    fn seam_matches_axis_distance_of_holonomy() {
        let mut seed = 0x51ee7;
        for _ in 0..200 {
            let l1 = sample_lengths(&mut seed, 0.2, 6.0);
            let l2 = sample_lengths(&mut seed, 0.2, 6.0);
            let l3 = sample_lengths(&mut seed, 0.2, 6.0);
            let p = build_pants(l1, l2, l3).unwrap();
            let d = axis_distance(&p.holonomy[0], &p.holonomy[1]).unwrap();
            let s = hexagon_seam(l1, l2, l3).unwrap();
            assert!((d - s).abs() < 1e-9 * s.max(1.0), "{l1} {l2} {l3}");
            assert!((p.seam_lengths[2] - s).abs() < 1e-9 * s.max(1.0));
        }
    }

    #[test]
    fn thrice_punctured_sphere() {
        let p: P = build_pants(0.0, 0.0, 0.0).unwrap();
        for g in &p.holonomy {
            assert_eq!(g.classify(), IsometryClass::Parabolic);
        }
        let prod = p.holonomy[0] * p.holonomy[1] * p.holonomy[2];
        assert!(prod.identity_deviation() < 1e-12);
        // its three truncated seams coincide by symmetry
        let s = p.seam_lengths;
        assert!((s[0] - s[1]).abs() < 1e-12 && (s[1] - s[2]).abs() < 1e-12);
        assert!(s[0] > 0.0);
    }

    #[test]
    fn symmetric_pants_has_equal_seams() {
        let l = 2.4;
        let p = build_pants(l, l, l).unwrap();
        assert!((p.seam_lengths[0] - p.seam_lengths[1]).abs() < 1e-12);
        assert!((p.seam_lengths[1] - p.seam_lengths[2]).abs() < 1e-12);
    }

    #[test]
    fn generator_traces_are_plus_minus_two_cosh() {
        let (a, b, c) = (0.4, 0.9, 1.7);
        let p = build_pants(2.0 * a, 2.0 * b, 2.0 * c).unwrap();
        assert!((p.holonomy[0].trace() - 2.0 * a.cosh()).abs() < 1e-12);
        assert!((p.holonomy[1].trace() - 2.0 * b.cosh()).abs() < 1e-12);
        assert!((p.holonomy[2].trace() + 2.0 * c.cosh()).abs() < 1e-12);
    }

    #[test]
    fn boundary_length_round_trip() {
        let mut seed = 0xab01;
        for _ in 0..1000 {
            let want = [
                sample_lengths(&mut seed, 0.2, 6.0),
                sample_lengths(&mut seed, 0.2, 6.0),
                sample_lengths(&mut seed, 0.2, 6.0),
            ];
            let p = build_pants(want[0], want[1], want[2]).unwrap();
            let got = p.lengths_from_traces();
            for k in 0..3 {
                assert!((got[k] - want[k]).abs() < 1e-9 * want[k].max(1.0));
            }
        }
    }

    #[test]
    fn orientation_reversal_preserves_all_six_scalars() {
        let p = build_pants(1.1, 2.3, 0.6).unwrap();
        let refl = [
            p.holonomy[0].reflected(),
            p.holonomy[1].reflected(),
            p.holonomy[2].reflected(),
        ];
        for k in 0..3 {
            let lw = 2.0 * ((refl[k].trace().abs() / 2.0) + ((refl[k].trace() / 2.0).powi(2) - 1.0).sqrt()).ln();
            assert!((lw - p.boundary_lengths[k]).abs() < 1e-12);
        }
        for (i, j, k) in [(1, 2, 0), (2, 0, 1), (0, 1, 2)] {
            let s = slot_separation(&refl[i], &refl[j]).unwrap();
            assert!((s - p.seam_lengths[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn slot_frame_conjugates_to_standard_position() {
        let p = build_pants(1.4, 0.8, 2.2).unwrap();
        for k in 0..3 {
            let s = p.slot_frame(k).unwrap();
            let l = p.boundary_lengths[k];
            let std = MoebiusMatrix::diagonal_translation(l);
            let back = std.conjugate_by(&s);
            assert!(back.psl_distance(&p.holonomy[k]) < 1e-9, "slot {k}");
        }
    }

    #[test]
    fn slot_frame_rejects_cusps() {
        let p = build_pants(0.0, 1.0, 1.0).unwrap();
        assert!(matches!(p.slot_frame(0), Err(PantsError::CuspSlot(0))));
        assert!(p.slot_frame(1).is_ok());
    }

    #[test]
    fn hexagon_relation_holds_on_samples() {
        let mut seed = 0x77aa;
        for _ in 0..1000 {
            let l1 = sample_lengths(&mut seed, 0.2, 6.0);
            let l2 = sample_lengths(&mut seed, 0.2, 6.0);
            let l3 = sample_lengths(&mut seed, 0.2, 6.0);
            let p = build_pants(l1, l2, l3).unwrap();
            let lhs = p.seam_lengths[2].cosh() * (l1 / 2.0).sinh() * (l2 / 2.0).sinh();
            let rhs = (l3 / 2.0).cosh() + (l1 / 2.0).cosh() * (l2 / 2.0).cosh();
            assert!((lhs - rhs).abs() < 1e-10 * rhs.max(1.0));
        }
    }
}
