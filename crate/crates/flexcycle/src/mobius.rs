//! The conformal compactification of R^3 as the quadric
//! `x^2 + y^2 + z^2 - r*h = 0` in P^4, with the extended distance, the
//! direction map on simple infinite points, the tangent slice `Fin_p`,
//! and its one-dimensional sigma projection.

use std::fmt;

use thiserror::Error;

use crate::exact::{Rat, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MobiusError {
    #[error("point is not on the quadric")]
    OffQuadricInput,
    #[error("point is not simple infinite")]
    NotSimpleInfinite,
    #[error("point is not in the tangent slice Fin_p")]
    NotInFin,
    #[error("tangent constraint not solvable for the chosen coordinate")]
    UnsolvablePivot,
    #[error("all homogeneous coordinates are zero")]
    ZeroPoint,
    #[error("pivot index out of range (expected 0..=2)")]
    BadPivotIndex,
}

/// A point of P^4 stored in canonical form: the first nonzero coordinate
/// in the order (x, y, z, r, h) is scaled to 1. Equality of canonical
/// forms is projective equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    coords: [Scalar; 5],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    Finite,
    SimpleInfinite,
    OmegaInfinity,
    OffQuadric,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtendedDistance {
    Value(Scalar),
    Infinity,
    Undefined,
}

/// A point of the plane quadric `A = {x^2 + y^2 + z^2 = 0}`, canonicalized
/// like [`ProjectivePoint`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DirectionClass {
    coords: [Scalar; 3],
}

fn canonicalize<const N: usize>(mut coords: [Scalar; N]) -> Option<[Scalar; N]> {
    let pivot = coords.iter().position(|c| !c.is_zero())?;
    let inv = coords[pivot].inv().expect("nonzero pivot");
    for c in coords.iter_mut() {
        *c = c.clone() * &inv;
    }
    Some(coords)
}

impl ProjectivePoint {
    pub fn new(coords: [Scalar; 5]) -> Result<Self, MobiusError> {
        let coords = canonicalize(coords).ok_or(MobiusError::ZeroPoint)?;
        Ok(ProjectivePoint { coords })
    }

    pub fn from_ints(coords: [i64; 5]) -> Self {
        ProjectivePoint::new(coords.map(Scalar::from_int)).expect("nonzero point")
    }

    /// The conformal embedding `(x,y,z) -> (x : y : z : x^2+y^2+z^2 : 1)`.
    pub fn embed(u: &[Rat; 3]) -> Self {
        let r = u.iter().map(|c| c * c).sum::<Rat>();
        ProjectivePoint::new([
            Scalar::from_rat(u[0].clone()),
            Scalar::from_rat(u[1].clone()),
            Scalar::from_rat(u[2].clone()),
            Scalar::from_rat(r),
            Scalar::one(),
        ])
        .expect("h = 1 is nonzero")
    }

    /// The vertex `(0:0:0:1:0)` of the cone of infinite points.
    pub fn omega_infinity() -> Self {
        ProjectivePoint::from_ints([0, 0, 0, 1, 0])
    }

    pub fn coords(&self) -> &[Scalar; 5] {
        &self.coords
    }

    pub fn x(&self) -> &Scalar {
        &self.coords[0]
    }
    pub fn y(&self) -> &Scalar {
        &self.coords[1]
    }
    pub fn z(&self) -> &Scalar {
        &self.coords[2]
    }
    pub fn r(&self) -> &Scalar {
        &self.coords[3]
    }
    pub fn h(&self) -> &Scalar {
        &self.coords[4]
    }

    /// `x^2 + y^2 + z^2 - r*h` of the canonical representative.
    pub fn quadratic_form(&self) -> Scalar {
        let [x, y, z, r, h] = &self.coords;
        x.square() + y.square() + z.square() - r * h
    }

    pub fn is_on_quadric(&self) -> bool {
        self.quadratic_form().is_zero()
    }

    pub fn classify(&self) -> PointClass {
        if !self.is_on_quadric() {
            PointClass::OffQuadric
        } else if !self.h().is_zero() {
            PointClass::Finite
        } else if self.x().is_zero() && self.y().is_zero() && self.z().is_zero() {
            PointClass::OmegaInfinity
        } else {
            PointClass::SimpleInfinite
        }
    }

    /// The bilinear form of the quadric, evaluated on the canonical
    /// representatives: `x1 x2 + y1 y2 + z1 z2 - (r1 h2 + r2 h1)/2`.
    pub fn bilinear_form(&self, other: &ProjectivePoint) -> Scalar {
        let [x1, y1, z1, r1, h1] = &self.coords;
        let [x2, y2, z2, r2, h2] = &other.coords;
        let half = Scalar::from_rat(crate::exact::rat(1, 2));
        x1 * x2 + y1 * y2 + z1 * z2 - half * (r1 * h2 + r2 * h1)
    }

    /// The extended distance `d(p1, p2) = (<p1,p2> : h1 h2)`.
    pub fn distance(&self, other: &ProjectivePoint) -> Result<ExtendedDistance, MobiusError> {
        if !self.is_on_quadric() || !other.is_on_quadric() {
            return Err(MobiusError::OffQuadricInput);
        }
        let b = self.bilinear_form(other);
        let hh = self.h() * other.h();
        Ok(if hh.is_zero() {
            if b.is_zero() {
                ExtendedDistance::Undefined
            } else {
                ExtendedDistance::Infinity
            }
        } else {
            ExtendedDistance::Value(b / hh)
        })
    }

    /// The direction `(x:y:z)` of a simple infinite point.
    pub fn psi(&self) -> Result<DirectionClass, MobiusError> {
        if self.classify() != PointClass::SimpleInfinite {
            return Err(MobiusError::NotSimpleInfinite);
        }
        let coords =
            canonicalize([self.x().clone(), self.y().clone(), self.z().clone()]).expect("nonzero");
        Ok(DirectionClass { coords })
    }

    /// Whether `q` lies in `Fin_p = M ∩ T_p M ∩ {h != 0}` for `p = self`
    /// simple infinite.
    pub fn fin_contains(&self, q: &ProjectivePoint) -> Result<bool, MobiusError> {
        if self.classify() != PointClass::SimpleInfinite {
            return Err(MobiusError::NotSimpleInfinite);
        }
        if !q.is_on_quadric() {
            return Err(MobiusError::OffQuadricInput);
        }
        Ok(q.classify() == PointClass::Finite && self.bilinear_form(q).is_zero())
    }

    /// The sqrt(2)-rescaled one-dimensional projection on `Fin_p`:
    /// for `q1, q2 in Fin_p`, `d(q1,q2) = ((sigma1 - sigma2)^2 / 2 : 1)`.
    pub fn sigma_project(&self, q: &ProjectivePoint) -> Result<Scalar, MobiusError> {
        if !self.fin_contains(q)? {
            return Err(MobiusError::NotInFin);
        }
        let [tx, ty, tz, ..] = &self.coords;
        // affine representative of q (h = 1)
        let hinv = q.h().inv().expect("finite point");
        let (x, y, z) = (q.x() * &hinv, q.y() * &hinv, q.z() * &hinv);
        let sigma = if !tx.is_zero() {
            (tz * y - ty * z) / tx
        } else if !ty.is_zero() {
            (tx * z - tz * x) / ty
        } else {
            (ty * x - tx * y) / tz
        };
        Ok(sigma)
    }

    /// Build a point of `Fin_p` by fixing two affine coordinates and
    /// solving the tangent-plane constraint `2(tx*x + ty*y + tz*z) = tr`
    /// for the coordinate at `pivot_choice` (0 = x, 1 = y, 2 = z).
    pub fn sample_fin_point(
        &self,
        free: [Scalar; 2],
        pivot_choice: usize,
    ) -> Result<ProjectivePoint, MobiusError> {
        if self.classify() != PointClass::SimpleInfinite {
            return Err(MobiusError::NotSimpleInfinite);
        }
        if pivot_choice > 2 {
            return Err(MobiusError::BadPivotIndex);
        }
        let tilde = &self.coords;
        if tilde[pivot_choice].is_zero() {
            return Err(MobiusError::UnsolvablePivot);
        }
        let mut affine = [Scalar::zero(), Scalar::zero(), Scalar::zero()];
        let mut free_iter = free.into_iter();
        for (k, slot) in affine.iter_mut().enumerate() {
            if k != pivot_choice {
                *slot = free_iter.next().expect("two free values");
            }
        }
        // 2*t_pivot*x_pivot = tr - 2*sum(other t_k x_k)
        let mut rhs = tilde[3].clone();
        for k in 0..3 {
            if k != pivot_choice {
                rhs = rhs - Scalar::from_int(2) * &tilde[k] * &affine[k];
            }
        }
        affine[pivot_choice] = rhs / (Scalar::from_int(2) * &tilde[pivot_choice]);
        let [x, y, z] = affine;
        let r = x.square() + y.square() + z.square();
        let q = ProjectivePoint::new([x, y, z, r, Scalar::one()]).expect("h = 1");
        debug_assert_eq!(self.fin_contains(&q), Ok(true));
        Ok(q)
    }
}

impl fmt::Debug for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string_exact()).collect();
        write!(f, "({})", parts.join(":"))
    }
}

impl DirectionClass {
    pub fn new(coords: [Scalar; 3]) -> Result<Self, MobiusError> {
        let coords = canonicalize(coords).ok_or(MobiusError::ZeroPoint)?;
        Ok(DirectionClass { coords })
    }

    pub fn coords(&self) -> &[Scalar; 3] {
        &self.coords
    }

    /// Membership in the plane quadric `A`.
    pub fn is_on_quadric(&self) -> bool {
        let [x, y, z] = &self.coords;
        (x.square() + y.square() + z.square()).is_zero()
    }
}

impl fmt::Debug for DirectionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string_exact()).collect();
        write!(f, "({})", parts.join(":"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    fn embed_ints(u: [i64; 3]) -> ProjectivePoint {
        ProjectivePoint::embed(&[rat_int(u[0]), rat_int(u[1]), rat_int(u[2])])
    }

    // (0 : 1 : -i : 0 : 0), the simple infinite point used throughout
    fn p_inf() -> ProjectivePoint {
        ProjectivePoint::new([
            Scalar::zero(),
            Scalar::one(),
            -Scalar::i(),
            Scalar::zero(),
            Scalar::zero(),
        ])
        .unwrap()
    }

    #[test]
    fn embed_examples() {
        assert_eq!(embed_ints([0, 0, 0]), ProjectivePoint::from_ints([0, 0, 0, 0, 1]));
        assert_eq!(embed_ints([1, 2, 3]), ProjectivePoint::from_ints([1, 2, 3, 14, 1]));
        let half = ProjectivePoint::embed(&[rat(1, 2), rat_int(0), rat_int(0)]);
        // canonical form (1 : 0 : 0 : 1/2 : 2)
        assert_eq!(half.coords()[0], Scalar::one());
        assert_eq!(half.coords()[3], Scalar::from_rat(rat(1, 2)));
        assert_eq!(half.coords()[4], Scalar::from_int(2));
        assert_eq!(half.classify(), PointClass::Finite);
    }

    #[test]
    fn canonicalization_identifies_rescalings() {
        let p = embed_ints([1, 2, 3]);
        let scaled = ProjectivePoint::new(p.coords().clone().map(|c| c * Scalar::from_int(-7)));
        assert_eq!(scaled.unwrap(), p);
        assert_eq!(
            ProjectivePoint::new(std::array::from_fn(|_| Scalar::zero())),
            Err(MobiusError::ZeroPoint)
        );
    }

    #[test]
    fn classify_examples() {
        assert_eq!(ProjectivePoint::omega_infinity().classify(), PointClass::OmegaInfinity);
        let p = ProjectivePoint::new([
            Scalar::one(),
            Scalar::i(),
            Scalar::zero(),
            Scalar::from_int(7),
            Scalar::zero(),
        ])
        .unwrap();
        assert_eq!(p.classify(), PointClass::SimpleInfinite);
        assert_eq!(
            ProjectivePoint::from_ints([1, 0, 0, 0, 1]).classify(),
            PointClass::OffQuadric
        );
    }

    #[test]
    fn bilinear_form_examples() {
        let a = ProjectivePoint::from_ints([1, 0, 0, 1, 1]);
        let origin = embed_ints([0, 0, 0]);
        assert_eq!(a.bilinear_form(&origin), Scalar::from_rat(rat(-1, 2)));
        for p in [embed_ints([1, 2, 3]), p_inf(), ProjectivePoint::omega_infinity()] {
            assert!(p.bilinear_form(&p).is_zero());
        }
        assert!(p_inf().bilinear_form(&origin).is_zero());
    }

    #[test]
    fn distance_examples() {
        let d = embed_ints([1, 0, 0]).distance(&embed_ints([0, 0, 0])).unwrap();
        assert_eq!(d, ExtendedDistance::Value(Scalar::from_rat(rat(-1, 2))));
        let d = embed_ints([1, 2, 3])
            .distance(&ProjectivePoint::omega_infinity())
            .unwrap();
        assert_eq!(d, ExtendedDistance::Infinity);
        let d = p_inf().distance(&embed_ints([0, 0, 0])).unwrap();
        assert_eq!(d, ExtendedDistance::Undefined);
        assert_eq!(
            ProjectivePoint::from_ints([1, 0, 0, 0, 1]).distance(&embed_ints([0, 0, 0])),
            Err(MobiusError::OffQuadricInput)
        );
    }

    #[test]
    fn psi_examples() {
        let p = ProjectivePoint::new([
            Scalar::zero(),
            Scalar::one(),
            -Scalar::i(),
            Scalar::from_int(5),
            Scalar::zero(),
        ])
        .unwrap();
        let dir = p.psi().unwrap();
        assert_eq!(
            dir,
            DirectionClass::new([Scalar::zero(), Scalar::one(), -Scalar::i()]).unwrap()
        );
        assert!(dir.is_on_quadric());
        assert_eq!(
            ProjectivePoint::omega_infinity().psi(),
            Err(MobiusError::NotSimpleInfinite)
        );
    }

    #[test]
    fn fin_contains_examples() {
        let p = p_inf();
        assert_eq!(p.fin_contains(&embed_ints([7, 0, 0])), Ok(true));
        let q = ProjectivePoint::embed(&[rat(1, 2), rat_int(2), rat_int(0)]);
        assert_eq!(p.fin_contains(&q), Ok(false));
        assert_eq!(p.fin_contains(&ProjectivePoint::omega_infinity()), Ok(false));
        assert_eq!(
            embed_ints([0, 0, 0]).fin_contains(&p),
            Err(MobiusError::NotSimpleInfinite)
        );
    }

    #[test]
    fn sigma_projection_examples() {
        let p = p_inf();
        let q1 = embed_ints([2, 0, 0]);
        let q2 = embed_ints([0, 0, 0]);
        let s1 = p.sigma_project(&q1).unwrap();
        let s2 = p.sigma_project(&q2).unwrap();
        assert_eq!(s1, Scalar::from_int(2) * Scalar::i());
        assert_eq!(s2, Scalar::zero());
        // contract: d(q1,q2) = ((s1-s2)^2/2 : 1)
        let diff = (s1 - s2).square() / Scalar::from_int(2);
        assert_eq!(q1.distance(&q2).unwrap(), ExtendedDistance::Value(diff));
        assert_eq!(p.sigma_project(&embed_ints([1, 2, 0])), Err(MobiusError::NotInFin));
    }

    #[test]
    fn sample_fin_point_examples() {
        let p = p_inf();
        let q = p
            .sample_fin_point([Scalar::from_int(1), Scalar::zero()], 1)
            .unwrap();
        assert_eq!(q, ProjectivePoint::from_ints([1, 0, 0, 1, 1]));

        let p2 = ProjectivePoint::new([
            Scalar::one(),
            Scalar::i(),
            Scalar::zero(),
            Scalar::from_int(2),
            Scalar::zero(),
        ])
        .unwrap();
        let q2 = p2.sample_fin_point([Scalar::zero(), Scalar::zero()], 0).unwrap();
        assert_eq!(q2, ProjectivePoint::from_ints([1, 0, 0, 1, 1]));

        assert_eq!(
            p.sample_fin_point([Scalar::zero(), Scalar::zero()], 0),
            Err(MobiusError::UnsolvablePivot)
        );
    }
}
