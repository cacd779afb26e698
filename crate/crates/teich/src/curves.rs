//! Combinatorial model of simple closed curves on the one-holed torus and
//! the four-holed sphere ("shirt") as primitive integer slopes.
//!
//! Shirt curves are carried by the same slope lattice through the standard
//! double-cover correspondence with the torus; geometric intersection
//! numbers double. Fractional Dehn twists act by slope shearing; images
//! that fail to be primitive correspond to multicurves and are reported as
//! an error naming the obstruction.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CurveError {
    #[error("slope (0, 0) does not name a curve")]
    ZeroSlope,
    #[error("twist image is a multicurve: {multiplicity} parallel copies of ({p}, {q})")]
    MulticurveImage { p: i64, q: i64, multiplicity: i64 },
}

/// Which low-complexity surface a slope lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    OneHoledTorus,
    Shirt,
}

/// Primitive slope in canonical form: gcd(|p|, |q|) = 1 and q > 0, or
/// (p, q) = (1, 0). Unoriented curves, so (p, q) ~ (-p, -q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slope {
    p: i64,
    q: i64,
}

impl Slope {
    /// Canonicalize an arbitrary nonzero integer pair.
    pub fn new(p: i64, q: i64) -> Result<Self, CurveError> {
        if p == 0 && q == 0 {
            return Err(CurveError::ZeroSlope);
        }
        let g = gcd(p.unsigned_abs(), q.unsigned_abs()) as i64;
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn pair(&self) -> (i64, i64) {
        (self.p, self.q)
    }

    /// Lattice determinant p_s q_t - q_s p_t; zero exactly for equal slopes.
    pub fn det(&self, other: &Slope) -> i64 {
        self.p * other.q - self.q * other.p
    }

    /// Residue class mod 2, an isotopy-pattern invariant: on the shirt it
    /// records which pair partition of the boundary the curve separates.
    pub fn parity(&self) -> (u8, u8) {
        ((self.p.rem_euclid(2)) as u8, (self.q.rem_euclid(2)) as u8)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Geometric intersection number of two slope curves.
pub fn intersection(kind: SurfaceKind, s: &Slope, t: &Slope) -> i64 {
    let base = s.det(t).abs();
    match kind {
        SurfaceKind::OneHoledTorus => base,
        SurfaceKind::Shirt => 2 * base,
    }
}

/// Fractional Dehn twist `T_axis^j (target)` on slopes.
///
/// One unit of j shears by one copy of the axis; j = i(axis, target) in the
/// torus count is a full Dehn twist. Non-primitive images are multicurves
/// and rejected. Twisting a curve along itself is the identity.
pub fn fractional_twist(
    _kind: SurfaceKind,
    axis: &Slope,
    j: i64,
    target: &Slope,
) -> Result<Slope, CurveError> {
    let d = axis.det(target);
    if d == 0 {
        return Ok(*target);
    }
    let s = if d > 0 { 1 } else { -1 };
    let p = target.p + j * s * axis.p;
    let q = target.q + j * s * axis.q;
    if p == 0 && q == 0 {
        return Err(CurveError::ZeroSlope);
    }
    let g = gcd(p.unsigned_abs(), q.unsigned_abs()) as i64;
    if g != 1 {
        let base = Slope::new(p, q)?;
        return Err(CurveError::MulticurveImage {
            p: base.p,
            q: base.q,
            multiplicity: g,
        });
    }
    Slope::new(p, q)
}

/// Abstract basis symbol of a slope word; the surface module maps these to
/// concrete holonomy generators per surface kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisSymbol {
    /// The (1, 0) curve.
    A,
    /// The (0, 1) curve.
    B,
}

/// One letter of a slope word: basis symbol and exponent sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlopeLetter {
    pub symbol: BasisSymbol,
    pub inverse: bool,
}

/// Reduced word whose free-homotopy class is the slope curve, built by
/// Stern-Brocot mediant concatenation from the basis words A = (1,0) and
/// B = (0,1). Deterministic.
pub fn slope_to_word(_kind: SurfaceKind, s: &Slope) -> Vec<SlopeLetter> {
    let a = |inv| SlopeLetter {
        symbol: BasisSymbol::A,
        inverse: inv,
    };
    let b = SlopeLetter {
        symbol: BasisSymbol::B,
        inverse: false,
    };
    match s.pair() {
        (1, 0) => return vec![a(false)],
        (0, 1) => return vec![b],
        _ => {}
    }
    // Descend the Stern-Brocot tree for the two half-planes. The pair
    // (left, right) keeps det(left, right) = 1; mediant words concatenate
    // left-then-right.
    let (mut left, mut right, mut wl, mut wr): (Slope, Slope, Vec<_>, Vec<_>) = if s.p > 0 {
        (
            Slope { p: 1, q: 0 },
            Slope { p: 0, q: 1 },
            vec![a(false)],
            vec![b],
        )
    } else {
        (
            Slope { p: 0, q: 1 },
            Slope { p: -1, q: 0 },
            vec![b],
            vec![a(true)],
        )
    };
    loop {
        let m = Slope {
            p: left.p + right.p,
            q: left.q + right.q,
        };
        let mut wm = wl.clone();
        wm.extend_from_slice(&wr);
        if m == *s {
            return wm;
        }
        // target strictly inside (right, m) or (m, left)
        if s.det(&m) > 0 {
            // same side as left
            right = m;
            wr = wm;
        } else {
            left = m;
            wl = wm;
        }
    }
}

/// Invert a word.
pub fn invert_word(w: &[SlopeLetter]) -> Vec<SlopeLetter> {
    w.iter()
        .rev()
        .map(|l| SlopeLetter {
            symbol: l.symbol,
            inverse: !l.inverse,
        })
        .collect()
}

/// All canonical primitive slopes with |p|, |q| <= bound.
pub fn slopes_in_box(bound: i64) -> Vec<Slope> {
    let mut out = vec![Slope { p: 1, q: 0 }];
    for q in 1..=bound {
        for p in -bound..=bound {
            if gcd(p.unsigned_abs(), q as u64) == 1 {
                out.push(Slope { p, q });
            }
        }
    }
    out
}
