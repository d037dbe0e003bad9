//! The identity component of SO(2,1): construction, classification, axes,
//! translation lengths, and angles between axes.
//!
//! Matrices are orthochronous, of determinant one, and preserve the
//! Minkowski form; they act on the hyperboloid model as orientation
//! preserving isometries.

use crate::minkowski::{normalize_spacelike, MinkVec};
use crate::scalar::{lit, Scalar};
use thiserror::Error;

/// Tolerance on the orthogonality defect mᵀGm − G.
pub const TAU_ORTHO: f64 = 1e-9;
/// Tolerance on the trace trichotomy around tr = 3.
pub const TAU_TRACE: f64 = 1e-9;
/// Tolerance on axis pairings (crossing / asymptotic / disjoint boundary).
pub const TAU_AXIS: f64 = 1e-9;

/// A matrix in the identity component of SO(2,1), row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Isometry<S> {
    pub m: [[S; 3]; 3],
}

#[derive(Debug, Error, PartialEq)]
pub enum IsometryError {
    #[error("hyperbolic cosine of length {length} exceeds the floating range")]
    Overflow { length: f64 },
    #[error("element is not hyperbolic")]
    NotHyperbolic,
}

/// Conjugacy type of an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsoClass {
    Hyperbolic,
    Parabolic,
    Elliptic,
    Identity,
}

/// Relative position of two axes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AxesRelation<S> {
    /// Axes cross at the given angle in (0, π).
    Crossing(S),
    Disjoint,
    Asymptotic,
    Equal,
}

impl<S: Scalar> Isometry<S> {
    pub fn identity() -> Self {
        let o = S::zero();
        let i = S::one();
        Isometry {
            m: [[i, o, o], [o, i, o], [o, o, i]],
        }
    }

    pub fn row(&self, i: usize) -> MinkVec<S> {
        MinkVec::new(self.m[i][0], self.m[i][1], self.m[i][2])
    }

    pub fn col(&self, j: usize) -> MinkVec<S> {
        MinkVec::new(self.m[0][j], self.m[1][j], self.m[2][j])
    }

    fn set_col(&mut self, j: usize, v: MinkVec<S>) {
        self.m[0][j] = v.x0;
        self.m[1][j] = v.x1;
        self.m[2][j] = v.x2;
    }

    pub fn apply(&self, v: &MinkVec<S>) -> MinkVec<S> {
        MinkVec::new(
            self.m[0][0] * v.x0 + self.m[0][1] * v.x1 + self.m[0][2] * v.x2,
            self.m[1][0] * v.x0 + self.m[1][1] * v.x1 + self.m[1][2] * v.x2,
            self.m[2][0] * v.x0 + self.m[2][1] * v.x1 + self.m[2][2] * v.x2,
        )
    }

    pub fn compose(&self, other: &Isometry<S>) -> Isometry<S> {
        let mut out = [[S::zero(); 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.m[i][0] * other.m[0][j]
                    + self.m[i][1] * other.m[1][j]
                    + self.m[i][2] * other.m[2][j];
            }
        }
        Isometry { m: out }
    }

    /// Group inverse G·mᵀ·G; exact for form-preserving matrices.
    pub fn inverse(&self) -> Isometry<S> {
        let m = &self.m;
        Isometry {
            m: [
                [m[0][0], -m[1][0], -m[2][0]],
                [-m[0][1], m[1][1], m[2][1]],
                [-m[0][2], m[1][2], m[2][2]],
            ],
        }
    }

    pub fn trace(&self) -> S {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    pub fn max_abs(&self) -> S {
        let mut s = S::zero();
        for row in &self.m {
            for x in row {
                s = s.max(x.abs());
            }
        }
        s
    }

    pub fn sub(&self, other: &Isometry<S>) -> [[S; 3]; 3] {
        let mut out = [[S::zero(); 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.m[i][j] - other.m[i][j];
            }
        }
        out
    }

    /// Max-norm of mᵀGm − G, relative to the squared entry scale (the
    /// absolute defect of an accurate product grows with its entries).
    pub fn ortho_defect(&self) -> S {
        let g = [-S::one(), S::one(), S::one()];
        let mut worst = S::zero();
        for i in 0..3 {
            for j in i..3 {
                let mut s = S::zero();
                for (k, gk) in g.iter().enumerate() {
                    s = s + *gk * self.m[k][i] * self.m[k][j];
                }
                let target = if i == j { g[i] } else { S::zero() };
                worst = worst.max((s - target).abs());
            }
        }
        let scale = self.max_abs().max(S::one());
        worst / (scale * scale)
    }

    /// Gram–Schmidt against the Minkowski form, column-wise.
    pub fn renormalize(&mut self) {
        let mut c0 = self.col(0);
        let n0 = (-c0.form(&c0)).sqrt();
        c0 = c0.scale(n0.recip());
        let mut c1 = self.col(1);
        c1 = c1 + c0.scale(c1.form(&c0));
        c1 = c1.scale(c1.form(&c1).sqrt().recip());
        let mut c2 = self.col(2);
        c2 = c2 + c0.scale(c2.form(&c0)) - c1.scale(c2.form(&c1));
        c2 = c2.scale(c2.form(&c2).sqrt().recip());
        self.set_col(0, c0);
        self.set_col(1, c1);
        self.set_col(2, c2);
    }

    /// Renormalizes when the orthogonality defect warrants it and the
    /// entries are small enough for the defect to be computable.
    pub fn renormalize_if_needed(&mut self) {
        if self.max_abs() < lit::<S>(1e140) && self.ortho_defect() > lit::<S>(TAU_ORTHO / 10.0) {
            self.renormalize();
        }
    }
}

/// Euclidean triple product det[a; b; c] (rows).
pub(crate) fn det3<S: Scalar>(a: &MinkVec<S>, b: &MinkVec<S>, c: &MinkVec<S>) -> S {
    a.x0 * (b.x1 * c.x2 - b.x2 * c.x1) - a.x1 * (b.x0 * c.x2 - b.x2 * c.x0)
        + a.x2 * (b.x0 * c.x1 - b.x1 * c.x0)
}

/// The boost fixing (0,0,1): translation of length `l` along the geodesic
/// through (1,0,0) in the x1-direction.
pub fn boost<S: Scalar>(l: S) -> Result<Isometry<S>, IsometryError> {
    let ch = l.cosh();
    if !ch.is_finite() {
        return Err(IsometryError::Overflow {
            length: l.to_f64().unwrap_or(f64::NAN),
        });
    }
    let sh = l.sinh();
    let o = S::zero();
    let i = S::one();
    Ok(Isometry {
        m: [[ch, sh, o], [sh, ch, o], [o, o, i]],
    })
}

/// Rotation by `theta` about (1,0,0).
pub fn rotation<S: Scalar>(theta: S) -> Isometry<S> {
    let c = theta.cos();
    let s = theta.sin();
    let o = S::zero();
    let i = S::one();
    Isometry {
        m: [[i, o, o], [o, c, -s], [o, s, c]],
    }
}

/// Translation of length `l` along the oriented geodesic dual to the unit
/// spacelike vector `u`; `translation_from_axis(axis(g), length(g)) == g`.
pub fn translation_from_axis<S: Scalar>(
    u: &MinkVec<S>,
    l: S,
) -> Result<Isometry<S>, IsometryError> {
    let ch = l.cosh();
    if !ch.is_finite() {
        return Err(IsometryError::Overflow {
            length: l.to_f64().unwrap_or(f64::NAN),
        });
    }
    let sh = l.sinh();
    let e = [
        MinkVec::new(S::one(), S::zero(), S::zero()),
        MinkVec::new(S::zero(), S::one(), S::zero()),
        MinkVec::new(S::zero(), S::zero(), S::one()),
    ];
    let mut j = Isometry::<S>::identity();
    for (col, ei) in e.iter().enumerate() {
        j.set_col(col, u.g_cross(ei));
    }
    let jj = j.compose(&j);
    let mut out = Isometry::<S>::identity();
    for r in 0..3 {
        for c in 0..3 {
            out.m[r][c] = out.m[r][c] + sh * j.m[r][c] + (ch - S::one()) * jj.m[r][c];
        }
    }
    Ok(out)
}

/// Trace trichotomy with the identity split off.
pub fn classify<S: Scalar>(g: &Isometry<S>) -> IsoClass {
    let tr = g.trace();
    let three = lit::<S>(3.0);
    let tau = lit::<S>(TAU_TRACE);
    if tr > three + tau {
        IsoClass::Hyperbolic
    } else if tr < three - tau {
        IsoClass::Elliptic
    } else {
        let d = g.sub(&Isometry::identity());
        let mut worst = S::zero();
        for row in &d {
            for x in row {
                worst = worst.max(x.abs());
            }
        }
        if worst <= tau {
            IsoClass::Identity
        } else {
            IsoClass::Parabolic
        }
    }
}

/// A non-zero kernel vector of a (numerically) rank-2 matrix, by the
/// largest cross product of row pairs after max-entry scaling.
fn kernel_vector<S: Scalar>(a: &[[S; 3]; 3]) -> MinkVec<S> {
    let mut scale = S::zero();
    for row in a {
        for x in row {
            scale = scale.max(x.abs());
        }
    }
    let inv = if scale > S::zero() {
        scale.recip()
    } else {
        S::one()
    };
    let rows: Vec<MinkVec<S>> = a
        .iter()
        .map(|r| MinkVec::new(r[0] * inv, r[1] * inv, r[2] * inv))
        .collect();
    let cands = [
        rows[0].cross(&rows[1]),
        rows[0].cross(&rows[2]),
        rows[1].cross(&rows[2]),
    ];
    let mut best = cands[0];
    let mut best_n = S::zero();
    for c in &cands {
        let n = c.x0 * c.x0 + c.x1 * c.x1 + c.x2 * c.x2;
        if n > best_n {
            best_n = n;
            best = *c;
        }
    }
    best
}

fn scaled_shift<S: Scalar>(g: &Isometry<S>, lambda_inv: S) -> [[S; 3]; 3] {
    // g·λ⁻¹ − I, which has a well-conditioned kernel at the λ-eigenvector
    let mut out = [[S::zero(); 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = g.m[i][j] * lambda_inv - if i == j { S::one() } else { S::zero() };
        }
    }
    out
}

/// Future-pointing lightlike eigenvectors (repelling, attracting) of a
/// hyperbolic element, for eigenvalues e^{−l} and e^{l}.
pub fn lightlike_eigenvectors<S: Scalar>(
    g: &Isometry<S>,
) -> Result<(MinkVec<S>, MinkVec<S>), IsometryError> {
    if classify(g) != IsoClass::Hyperbolic {
        return Err(IsometryError::NotHyperbolic);
    }
    let ch = (g.trace() - S::one()) * lit::<S>(0.5);
    let el = ch + (ch * ch - S::one()).max(S::zero()).sqrt();
    let future = |v: MinkVec<S>| if v.x0 < S::zero() { -v } else { v };
    let vp = future(kernel_vector(&scaled_shift(g, el.recip())));
    let vm = future(kernel_vector(&scaled_shift(&g.inverse(), el.recip())));
    Ok((vm, vp))
}

/// The oriented unit spacelike axis dual x⁰(g) of a hyperbolic element,
/// pointing so that the axis runs from the repelling towards the
/// attracting fixed point; `axis(boost(l)) = (0,0,1)` for l > 0.
pub fn axis<S: Scalar>(g: &Isometry<S>) -> Result<MinkVec<S>, IsometryError> {
    if classify(g) != IsoClass::Hyperbolic {
        return Err(IsometryError::NotHyperbolic);
    }
    let ch = (g.trace() - S::one()) * lit::<S>(0.5);
    let l = ch.acosh();
    let (vm, vp) = lightlike_eigenvectors(g)?;
    if l >= S::one() {
        // dual of the plane spanned by the fixed lightlike directions;
        // sign is automatic: det(vm, vp, u) = form(u_raw, u_raw) > 0
        let u = vm.g_cross(&vp);
        return normalize_spacelike(&u).map_err(|_| IsometryError::NotHyperbolic);
    }
    // short elements: the 1-eigenvector is better conditioned directly
    let shift = g.sub(&Isometry::identity());
    let u = kernel_vector(&shift);
    let mut u = normalize_spacelike(&u).map_err(|_| IsometryError::NotHyperbolic)?;
    if det3(&vm, &vp, &u) < S::zero() {
        u = -u;
    }
    Ok(u)
}

/// Translation length arcch((tr − 1)/2) of a hyperbolic element.
pub fn translation_length<S: Scalar>(g: &Isometry<S>) -> Result<S, IsometryError> {
    if classify(g) != IsoClass::Hyperbolic {
        return Err(IsometryError::NotHyperbolic);
    }
    let ch = ((g.trace() - S::one()) * lit::<S>(0.5)).max(S::one());
    Ok(ch.acosh())
}

/// Angle in (0, π) between two crossing unit spacelike duals, computed
/// through both the pairing and the dual cross product so that small
/// angles keep relative accuracy.
pub fn crossing_angle<S: Scalar>(u: &MinkVec<S>, v: &MinkVec<S>) -> S {
    let c = u.form(v);
    let p = u.g_cross(v);
    let s2 = -p.form(&p);
    let s = s2.max(S::zero()).sqrt();
    s.atan2(c)
}

/// Classifies the relative position of the axes of two hyperbolic elements.
pub fn axes_relation<S: Scalar>(
    g: &Isometry<S>,
    h: &Isometry<S>,
) -> Result<AxesRelation<S>, IsometryError> {
    let xg = axis(g)?;
    let xh = axis(h)?;
    let s = xg.form(&xh);
    let tau = lit::<S>(TAU_AXIS);
    if s.abs() < S::one() - tau {
        Ok(AxesRelation::Crossing(crossing_angle(&xg, &xh)))
    } else if s.abs() > S::one() + tau {
        Ok(AxesRelation::Disjoint)
    } else {
        let near = (xg - xh).max_abs().min((xg + xh).max_abs());
        if near <= lit::<S>(TAU_AXIS).sqrt() {
            Ok(AxesRelation::Equal)
        } else {
            Ok(AxesRelation::Asymptotic)
        }
    }
}

/// The commutator h⁻¹g⁻¹hg.
pub fn commutator<S: Scalar>(g: &Isometry<S>, h: &Isometry<S>) -> Isometry<S> {
    h.inverse().compose(&g.inverse()).compose(h).compose(g)
}
