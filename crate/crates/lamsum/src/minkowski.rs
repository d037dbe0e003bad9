//! Minkowski 3-space primitives: the bilinear form of signature (−,+,+),
//! causal classification, the hyperboloid model of the hyperbolic plane,
//! and dual geodesics of spacelike vectors.
//!
//! Index 0 is the timelike direction. The hyperbolic plane is the sheet
//! `{ form(x,x) = -1, x0 > 0 }`; a unit spacelike vector `u` is dual to the
//! geodesic `{ form(x,u) = 0 }`.

use crate::scalar::{lit, Scalar};
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Relative tolerance for causal classification.
pub const TAU_CLASS: f64 = 1e-10;
/// Tolerance on unit normalization checks.
pub const TAU_UNIT: f64 = 1e-10;

/// A vector of Minkowski 3-space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinkVec<S> {
    pub x0: S,
    pub x1: S,
    pub x2: S,
}

#[derive(Debug, Error, PartialEq)]
pub enum MinkowskiError {
    #[error("vector is not spacelike (form = {form})")]
    NotSpacelike { form: f64 },
    #[error("segment endpoint lies on the geodesic (pairing = {pairing})")]
    Degenerate { pairing: f64 },
}

/// Causal type of a vector, relative to the classification tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CausalClass {
    Timelike,
    Spacelike,
    Lightlike,
}

impl<S: Scalar> MinkVec<S> {
    pub fn new(x0: S, x1: S, x2: S) -> Self {
        MinkVec { x0, x1, x2 }
    }

    pub fn zero() -> Self {
        MinkVec::new(S::zero(), S::zero(), S::zero())
    }

    /// Base point of the hyperboloid, (1,0,0).
    pub fn origin() -> Self {
        MinkVec::new(S::one(), S::zero(), S::zero())
    }

    /// The Minkowski pairing −u₀v₀ + u₁v₁ + u₂v₂.
    pub fn form(&self, other: &Self) -> S {
        -self.x0 * other.x0 + self.x1 * other.x1 + self.x2 * other.x2
    }

    pub fn max_abs(&self) -> S {
        self.x0.abs().max(self.x1.abs()).max(self.x2.abs())
    }

    pub fn scale(&self, s: S) -> Self {
        MinkVec::new(self.x0 * s, self.x1 * s, self.x2 * s)
    }

    /// Euclidean cross product (used through its Minkowski dual `g_cross`).
    pub fn cross(&self, other: &Self) -> Self {
        MinkVec::new(
            self.x1 * other.x2 - self.x2 * other.x1,
            self.x2 * other.x0 - self.x0 * other.x2,
            self.x0 * other.x1 - self.x1 * other.x0,
        )
    }

    /// Applies the metric G = diag(−1,1,1).
    pub fn g_dual(&self) -> Self {
        MinkVec::new(-self.x0, self.x1, self.x2)
    }

    /// Minkowski-dual cross product G·(u × v).
    ///
    /// For two unit spacelike duals of crossing geodesics this is a timelike
    /// vector through their crossing point; for two hyperboloid points it is
    /// spacelike and dual to the geodesic through them.
    pub fn g_cross(&self, other: &Self) -> Self {
        self.cross(other).g_dual()
    }

    pub fn causal_class(&self) -> CausalClass {
        let q = self.form(self);
        let scale = self.max_abs();
        let tol = lit::<S>(TAU_CLASS) * scale * scale;
        if q > tol {
            CausalClass::Spacelike
        } else if q < -tol {
            CausalClass::Timelike
        } else {
            CausalClass::Lightlike
        }
    }

    /// Checks membership on the hyperboloid sheet.
    pub fn is_hyperboloid_point(&self) -> bool {
        (self.form(self) + S::one()).abs() <= lit::<S>(TAU_UNIT) * self.max_abs().max(S::one())
            && self.x0 > S::zero()
    }
}

impl<S: Scalar> Add for MinkVec<S> {
    type Output = MinkVec<S>;
    fn add(self, rhs: Self) -> Self {
        MinkVec::new(self.x0 + rhs.x0, self.x1 + rhs.x1, self.x2 + rhs.x2)
    }
}

impl<S: Scalar> Sub for MinkVec<S> {
    type Output = MinkVec<S>;
    fn sub(self, rhs: Self) -> Self {
        MinkVec::new(self.x0 - rhs.x0, self.x1 - rhs.x1, self.x2 - rhs.x2)
    }
}

impl<S: Scalar> Neg for MinkVec<S> {
    type Output = MinkVec<S>;
    fn neg(self) -> Self {
        MinkVec::new(-self.x0, -self.x1, -self.x2)
    }
}

impl<S: Scalar> Mul<S> for MinkVec<S> {
    type Output = MinkVec<S>;
    fn mul(self, rhs: S) -> Self {
        self.scale(rhs)
    }
}

/// The Minkowski pairing as a free function.
pub fn form<S: Scalar>(u: &MinkVec<S>, v: &MinkVec<S>) -> S {
    u.form(v)
}

/// Rescales a spacelike vector to unit form.
pub fn normalize_spacelike<S: Scalar>(v: &MinkVec<S>) -> Result<MinkVec<S>, MinkowskiError> {
    let q = v.form(v);
    let scale = v.max_abs();
    if q <= lit::<S>(TAU_CLASS) * scale * scale {
        return Err(MinkowskiError::NotSpacelike {
            form: q.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(v.scale(q.sqrt().recip()))
}

/// Whether the geodesic dual to `u` separates the hyperboloid points `p`, `q`.
///
/// An endpoint lying on the geodesic (within the classification tolerance)
/// is an error rather than a boolean: crossing counts must not be corrupted
/// by silent tie-breaking.
pub fn separates<S: Scalar>(
    u: &MinkVec<S>,
    p: &MinkVec<S>,
    q: &MinkVec<S>,
) -> Result<bool, MinkowskiError> {
    let sp = u.form(p);
    let sq = u.form(q);
    let tol_p = lit::<S>(TAU_CLASS) * u.max_abs() * p.max_abs();
    let tol_q = lit::<S>(TAU_CLASS) * u.max_abs() * q.max_abs();
    if sp.abs() <= tol_p {
        return Err(MinkowskiError::Degenerate {
            pairing: sp.to_f64().unwrap_or(f64::NAN),
        });
    }
    if sq.abs() <= tol_q {
        return Err(MinkowskiError::Degenerate {
            pairing: sq.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(sp * sq < S::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type V = MinkVec<f64>;

    #[test]
    fn form_on_basis_vectors() {
        let t = V::new(1.0, 0.0, 0.0);
        let s = V::new(0.0, 0.0, 1.0);
        assert_eq!(t.form(&t), -1.0);
        assert_eq!(s.form(&s), 1.0);
        let th = 0.83f64;
        let d = V::new(0.0, -th.sin(), th.cos());
        assert!((s.form(&d) - th.cos()).abs() < 1e-15);
    }

    #[test]
    fn normalize_spacelike_examples() {
        let v = normalize_spacelike(&V::new(0.0, 0.0, 2.0)).unwrap();
        assert_eq!(v, V::new(0.0, 0.0, 1.0));
        let th = 0.4f64;
        let v = normalize_spacelike(&V::new(0.0, -2.0 * th.sin(), 2.0 * th.cos())).unwrap();
        assert!((v.x1 + th.sin()).abs() < 1e-15 && (v.x2 - th.cos()).abs() < 1e-15);
        let v = normalize_spacelike(&V::new(1.0, 2.0, 0.0)).unwrap();
        let r = 3.0f64.sqrt().recip();
        assert!((v.x0 - r).abs() < 1e-15 && (v.x1 - 2.0 * r).abs() < 1e-15);
        assert!(normalize_spacelike(&V::new(1.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn separates_mirror_points() {
        let u = V::new(0.0, 0.0, 1.0);
        let p = V::new(1f64.cosh(), 0.0, 1f64.sinh());
        let q = V::new(1f64.cosh(), 0.0, -(1f64.sinh()));
        assert!(separates(&u, &p, &q).unwrap());
        assert!(!separates(&u, &p, &p).unwrap());
        let u = V::new(0.0, 1.0, 0.0);
        let p = V::new(1f64.cosh(), 1f64.sinh(), 0.0);
        let q = V::new(2f64.cosh(), 2f64.sinh(), 0.0);
        assert!(!separates(&u, &p, &q).unwrap());
    }

    #[test]
    fn separates_degenerate_endpoint() {
        let u = V::new(0.0, 0.0, 1.0);
        let p = V::new(1.0, 0.0, 0.0); // on the geodesic
        let q = V::new(1f64.cosh(), 0.0, 1f64.sinh());
        assert!(matches!(
            separates(&u, &p, &q),
            Err(MinkowskiError::Degenerate { .. })
        ));
    }

    #[test]
    fn f32_instantiation_smoke() {
        let u: MinkVec<f32> = MinkVec::new(0.0, 0.0, 2.0);
        let n = normalize_spacelike(&u).unwrap();
        assert!((n.form(&n) - 1.0).abs() < 1e-6);
    }

    fn arb_vec() -> impl Strategy<Value = V> {
        (-10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64).prop_map(|(a, b, c)| V::new(a, b, c))
    }

    proptest! {
        #[test]
        fn form_symmetric_bilinear(u in arb_vec(), v in arb_vec(), w in arb_vec(), s in -4.0..4.0f64) {
            prop_assert!((u.form(&v) - v.form(&u)).abs() <= 1e-12);
            let lhs = (u.scale(s) + v).form(&w);
            let rhs = s * u.form(&w) + v.form(&w);
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
        }

        #[test]
        fn normalize_idempotent(u in arb_vec()) {
            if let Ok(n) = normalize_spacelike(&u) {
                let n2 = normalize_spacelike(&n).unwrap();
                prop_assert!((n2 - n).max_abs() <= TAU_UNIT);
                prop_assert!((n.form(&n) - 1.0).abs() <= TAU_UNIT);
            }
        }

        #[test]
        fn separates_symmetries(t in 0.01..2.0f64, s in -2.0..2.0f64, r in 0.01..2.0f64) {
            let u = V::new(0.0, s.sin(), s.cos());
            let p = V::new(t.cosh(), t.sinh() * 0.6, t.sinh() * 0.8);
            let q = V::new(r.cosh(), -r.sinh(), 0.0);
            if let (Ok(a), Ok(b), Ok(c)) = (
                separates(&u, &p, &q),
                separates(&u.neg(), &p, &q),
                separates(&u, &q, &p),
            ) {
                prop_assert_eq!(a, b);
                prop_assert_eq!(a, c);
            }
        }
    }
}
