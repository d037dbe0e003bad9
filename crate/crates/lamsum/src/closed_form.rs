//! Closed-form fixtures for the standard pair configuration
//! γ = M(l), δ = R_θ M(m) R_{−θ}: kernel generators of the product and of
//! the commutator, and the rank-2 coplanarity determinant. Used as ground
//! truth by property tests; all formulas are bound to these coordinates.

use crate::minkowski::MinkVec;
use crate::scalar::Scalar;

/// Generator of ker(δγ − 1): a vector spanning the axis of the product δγ.
pub fn product_kernel<S: Scalar>(l: S, m: S, theta: S) -> MinkVec<S> {
    let (chl, shl) = (l.cosh(), l.sinh());
    let (chm, shm) = (m.cosh(), m.sinh());
    let (ct, st) = (theta.cos(), theta.sin());
    MinkVec::new(
        st * (chm - S::one()) * shl,
        -st * (chm - S::one()) * (chl + S::one()),
        shl * shm + ct * (chl + S::one()) * (chm - S::one()),
    )
}

/// Generator of ker(α − 1) for α = δ⁻¹γ⁻¹δγ: a vector spanning the axis
/// of the boundary element. Equals ker(δγ − γδ), which is skew-symmetric.
pub fn commutator_kernel<S: Scalar>(l: S, m: S, theta: S) -> MinkVec<S> {
    let (chl, shl) = (l.cosh(), l.sinh());
    let (chm, shm) = (m.cosh(), m.sinh());
    let (ct, st) = (theta.cos(), theta.sin());
    MinkVec::new(
        shl * shm + (chl - S::one()) * (chm - S::one()) * ct,
        -shm * (chl - S::one()) - shl * (chm - S::one()) * ct,
        -st * shl * (chm - S::one()),
    )
}

/// The difference v − δv for v = `commutator_kernel`.
pub fn commutator_kernel_shift<S: Scalar>(l: S, m: S, theta: S) -> MinkVec<S> {
    let (chl, shl) = (l.cosh(), l.sinh());
    let chm = m.cosh();
    let (ct, st) = (theta.cos(), theta.sin());
    let two = S::one() + S::one();
    MinkVec::new(
        (chl - S::one()) * ct,
        -shl * ct,
        -shl * st,
    )
    .scale(two * (chm - S::one()))
}

/// Determinant of the 3×3 matrix with columns x⁰(γ), the product kernel,
/// and the (rescaled) commutator kernel shift; identically zero, witnessing
/// that the three vectors span only a plane.
pub fn coplanarity_det<S: Scalar>(l: S, m: S, theta: S) -> S {
    let (chl, shl) = (l.cosh(), l.sinh());
    let (chm, shm) = (m.cosh(), m.sinh());
    let (ct, st) = (theta.cos(), theta.sin());
    let w = product_kernel(l, m, theta);
    // columns: (0,0,1) | w | ((ch l − 1)cosθ, −sh l cosθ, sh l sinθ)
    let c2 = MinkVec::new((chl - S::one()) * ct, -shl * ct, shl * st);
    let _ = (chm, shm);
    crate::isometry::det3(
        &MinkVec::new(S::zero(), w.x0, c2.x0),
        &MinkVec::new(S::zero(), w.x1, c2.x1),
        &MinkVec::new(S::one(), w.x2, c2.x2),
    )
}

/// Scale of the coplanarity matrix (its largest entry), for relative
/// determinant tolerances.
pub fn coplanarity_scale<S: Scalar>(l: S, m: S, theta: S) -> S {
    let (chl, shl) = (l.cosh(), l.sinh());
    let (ct, st) = (theta.cos(), theta.sin());
    let w = product_kernel(l, m, theta);
    let c2 = MinkVec::new((chl - S::one()) * ct, -shl * ct, shl * st);
    w.max_abs().max(c2.max_abs()).max(S::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isometry::{axis, boost, commutator, rotation, Isometry};
    use crate::minkowski::normalize_spacelike;

    fn pair(l: f64, m: f64, th: f64) -> (Isometry<f64>, Isometry<f64>) {
        let g = boost(l).unwrap();
        let d = rotation(th)
            .compose(&boost(m).unwrap())
            .compose(&rotation(-th));
        (g, d)
    }

    fn apply_shift(a: &Isometry<f64>, v: &MinkVec<f64>) -> MinkVec<f64> {
        a.apply(v) - *v
    }

    #[test]
    fn product_kernel_annihilated() {
        for (l, m, th) in [(2.0, 2.0, 1.0), (0.7, 1.3, 0.4), (3.0, 0.5, std::f64::consts::FRAC_PI_2)] {
            let (g, d) = pair(l, m, th);
            let dg = d.compose(&g);
            let w = product_kernel(l, m, th);
            let r = apply_shift(&dg, &w);
            assert!(r.max_abs() <= 1e-9 * w.max_abs(), "(l,m,th)=({l},{m},{th})");
        }
    }

    #[test]
    fn product_kernel_at_right_angle() {
        let (l, m) = (1.1, 0.9);
        let w = product_kernel(l, m, std::f64::consts::FRAC_PI_2);
        assert!((w.x2 - l.sinh() * m.sinh()).abs() < 1e-14);
        assert!((w.x0 - (m.cosh() - 1.0) * l.sinh()).abs() < 1e-14);
    }

    #[test]
    fn kernels_parallel_to_axes() {
        let (l, m, th) = (2.0, 2.0, 1.0);
        let (g, d) = pair(l, m, th);
        let w = normalize_spacelike(&product_kernel(l, m, th)).unwrap();
        let xp = axis(&d.compose(&g)).unwrap();
        assert!((w - xp).max_abs().min((w + xp).max_abs()) < 1e-11);
        let v = normalize_spacelike(&commutator_kernel(l, m, th)).unwrap();
        let xa = axis(&commutator(&g, &d)).unwrap();
        assert!((v - xa).max_abs().min((v + xa).max_abs()) < 1e-11);
    }

    #[test]
    fn commutator_kernel_annihilated_and_skew_route() {
        for (l, m, th) in [(2.0, 2.0, 1.0), (0.7, 1.3, 0.4), (1.5, 2.5, 1.2)] {
            let (g, d) = pair(l, m, th);
            let al = commutator(&g, &d);
            let v = commutator_kernel(l, m, th);
            assert!(apply_shift(&al, &v).max_abs() <= 1e-9 * v.max_abs());
            // ker(α−1) = ker(δγ − γδ)
            let dg = d.compose(&g);
            let gd = g.compose(&d);
            let r = dg.apply(&v) - gd.apply(&v);
            assert!(r.max_abs() <= 1e-9 * v.max_abs());
        }
    }

    #[test]
    fn kernel_shift_closed_form() {
        for (l, m, th) in [(2.0, 2.0, 1.0), (0.6, 2.9, 0.3)] {
            let (_, d) = pair(l, m, th);
            let v = commutator_kernel(l, m, th);
            let got = v - d.apply(&v);
            let want = commutator_kernel_shift(l, m, th);
            assert!((got - want).max_abs() <= 1e-9 * want.max_abs().max(1.0));
        }
    }

    #[test]
    fn determinant_vanishes() {
        assert!(coplanarity_det::<f64>(2.0, 2.0, 1.0).abs() < 1e-9);
        assert!(coplanarity_det::<f64>(0.7, 1.3, 0.4).abs() < 1e-9);
        let mut worst: f64 = 0.0;
        for i in 0..5 {
            for j in 0..5 {
                for k in 0..4 {
                    let l = 0.5 + 0.6 * i as f64;
                    let m = 0.5 + 0.6 * j as f64;
                    let th = 0.2 + 0.34 * k as f64;
                    let s = coplanarity_scale(l, m, th);
                    worst = worst.max(coplanarity_det(l, m, th).abs() / (s * s * s));
                }
            }
        }
        assert!(worst <= 1e-9, "worst scaled det {worst}");
    }
}
