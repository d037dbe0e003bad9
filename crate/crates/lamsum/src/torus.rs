//! Construction and validation of the one-holed-torus configuration from
//! the geometric parameters (l, m, θ, c, d).
//!
//! The pair is realized in standard coordinates γ = M(l),
//! δ = R_θ M(m) R_{−θ}, so both axes pass through (1,0,0) and cross there
//! at angle θ. The boundary element is the commutator α = δ⁻¹γ⁻¹δγ; the
//! base point for cocycle values lives beyond the axis of α, on the side
//! away from the crossing point.

use crate::isometry::{
    self, axis, boost, classify, commutator, rotation, translation_length, Isometry,
};
use crate::minkowski::MinkVec;
use crate::scalar::{lit, Scalar};
use crate::word::{Letter, Word};
use std::collections::HashSet;
use thiserror::Error;

/// Clearance required between the base point (and its generator images)
/// and every enumerated conjugate axis.
pub const TAU_BASE: f64 = 1e-6;
/// Default enumeration bound for conjugate axes.
pub const DEFAULT_WORD_BOUND: usize = 6;

/// Geometric input parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusParams<S> {
    /// length of the first curve
    pub l: S,
    /// length of the second curve
    pub m: S,
    /// crossing angle in (0, π/2]
    pub theta: S,
    /// weight of the first curve
    pub c: S,
    /// weight of the second curve
    pub d: S,
}

#[derive(Debug, Error, PartialEq)]
pub enum TorusError {
    #[error("curve lengths must be positive and finite (l = {l}, m = {m})")]
    InvalidLength { l: f64, m: f64 },
    #[error("crossing angle {theta} outside (0, π/2]")]
    InvalidAngle { theta: f64 },
    #[error("weights must be non-negative and not both zero (c = {c}, d = {d})")]
    DegenerateWeights { c: f64, d: f64 },
    #[error(
        "boundary element is not hyperbolic (trace {trace}); the parameters do not bound a hyperbolic one-holed torus"
    )]
    NonHyperbolicBoundary { trace: f64 },
    #[error("no generic base point found within the scan ladder")]
    NoGenericPoint,
    #[error("geometry validation failed: {0}")]
    GeometryValidation(String),
    #[error(transparent)]
    Isometry(#[from] isometry::IsometryError),
}

/// The generator pair with cached inverses; the letters g/G/d/D of a
/// [`Word`] act through these matrices.
#[derive(Clone, Copy, Debug)]
pub struct PairMatrices<S> {
    pub gamma: Isometry<S>,
    pub delta: Isometry<S>,
    pub gamma_inv: Isometry<S>,
    pub delta_inv: Isometry<S>,
}

impl<S: Scalar> PairMatrices<S> {
    pub fn new(gamma: Isometry<S>, delta: Isometry<S>) -> Self {
        PairMatrices {
            gamma_inv: gamma.inverse(),
            delta_inv: delta.inverse(),
            gamma,
            delta,
        }
    }

    pub fn letter_matrix(&self, l: Letter) -> &Isometry<S> {
        match l {
            Letter::G => &self.gamma,
            Letter::Gi => &self.gamma_inv,
            Letter::D => &self.delta,
            Letter::Di => &self.delta_inv,
        }
    }

    pub fn word_matrix(&self, w: &Word) -> Isometry<S> {
        let mut m = Isometry::identity();
        for &l in w.letters() {
            m = m.compose(self.letter_matrix(l));
        }
        m
    }
}

/// The four curve families whose cocycles the decomposition manipulates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveKind {
    /// the first curve, holonomy γ
    CurveC,
    /// the second curve, holonomy δ
    CurveD,
    /// the boundary curve, holonomy the commutator
    Boundary,
    /// the product curve, holonomy δγ
    Product,
}

impl CurveKind {
    pub const ALL: [CurveKind; 4] = [
        CurveKind::CurveC,
        CurveKind::CurveD,
        CurveKind::Boundary,
        CurveKind::Product,
    ];

    /// Holonomy word in the current generator letters.
    pub fn word(self) -> Word {
        match self {
            CurveKind::CurveC => Word::parse("g").unwrap(),
            CurveKind::CurveD => Word::parse("d").unwrap(),
            CurveKind::Boundary => Word::parse("DGdg").unwrap(),
            CurveKind::Product => Word::parse("dg").unwrap(),
        }
    }
}

/// One conjugate axis from the enumeration.
#[derive(Clone, Copy, Debug)]
pub struct ConjugateAxis<S> {
    /// oriented unit dual of the conjugated element
    pub axis: MinkVec<S>,
    /// length of the shortest conjugator producing this coset
    pub conj_len: usize,
}

/// Deduplicated conjugate axes of the four curves, up to the word bound.
#[derive(Clone, Debug)]
pub struct ConjugateAtlas<S> {
    pub bound: usize,
    pub curves: [Vec<ConjugateAxis<S>>; 4],
}

/// A validated one-holed-torus configuration.
#[derive(Clone, Debug)]
pub struct TorusConfig<S> {
    /// parameters as given, before any role exchange
    pub params: TorusParams<S>,
    /// whether the two curves' roles were exchanged to meet the weight
    /// ratio condition
    pub swapped: bool,
    pub pair: PairMatrices<S>,
    /// boundary element, the commutator of the current pair
    pub alpha: Isometry<S>,
    pub x_gamma: MinkVec<S>,
    pub x_delta: MinkVec<S>,
    pub x_alpha: MinkVec<S>,
    /// dual of the product δγ
    pub x_product: MinkVec<S>,
    pub len_gamma: S,
    pub len_delta: S,
    pub theta: S,
    /// current-pair weights (post-exchange)
    pub c: S,
    pub d: S,
    /// the ratio r(γ, δ) of the current pair
    pub ratio0: S,
    pub base_point: MinkVec<S>,
    pub word_bound: usize,
    pub atlas: ConjugateAtlas<S>,
}

impl<S: Scalar> TorusConfig<S> {
    pub fn conjugate_axes(&self, kind: CurveKind) -> &[ConjugateAxis<S>] {
        &self.atlas.curves[kind as usize]
    }
}

fn ratio_from_axes<S: Scalar>(
    x_product: &MinkVec<S>,
    x_gamma: &MinkVec<S>,
    x_delta: &MinkVec<S>,
) -> S {
    x_product.form(x_delta) / x_product.form(x_gamma)
}

struct RawPair<S> {
    pair: PairMatrices<S>,
    alpha: Isometry<S>,
    x_gamma: MinkVec<S>,
    x_delta: MinkVec<S>,
    x_alpha: MinkVec<S>,
    x_product: MinkVec<S>,
    ratio: S,
}

fn build_raw_pair<S: Scalar>(l: S, m: S, theta: S) -> Result<RawPair<S>, TorusError> {
    let gamma = boost(l)?;
    let delta = rotation(theta).compose(&boost(m)?).compose(&rotation(-theta));
    let alpha = commutator(&gamma, &delta);
    if classify(&alpha) != isometry::IsoClass::Hyperbolic {
        return Err(TorusError::NonHyperbolicBoundary {
            trace: alpha.trace().to_f64().unwrap_or(f64::NAN),
        });
    }
    let pair = PairMatrices::new(gamma, delta);
    let x_gamma = axis(&gamma)?;
    let x_delta = axis(&delta)?;
    let x_alpha = axis(&alpha)?;
    let x_product = axis(&delta.compose(&gamma))?;
    let ratio = ratio_from_axes(&x_product, &x_gamma, &x_delta);
    Ok(RawPair {
        pair,
        alpha,
        x_gamma,
        x_delta,
        x_alpha,
        x_product,
        ratio,
    })
}

/// Builds and validates a configuration with the default word bound.
pub fn build_config<S: Scalar>(params: TorusParams<S>) -> Result<TorusConfig<S>, TorusError> {
    build_config_with_bound(params, DEFAULT_WORD_BOUND)
}

/// Builds and validates a configuration; `word_bound` controls the
/// conjugate-axis enumeration used for base-point clearance and by the
/// crossing oracle.
#[allow(clippy::neg_cmp_op_on_partial_ord)] // negations reject NaN inputs
pub fn build_config_with_bound<S: Scalar>(
    params: TorusParams<S>,
    word_bound: usize,
) -> Result<TorusConfig<S>, TorusError> {
    let TorusParams { l, m, theta, c, d } = params;
    if !(l > S::zero()) || !(m > S::zero()) || !l.is_finite() || !m.is_finite() {
        return Err(TorusError::InvalidLength {
            l: l.to_f64().unwrap_or(f64::NAN),
            m: m.to_f64().unwrap_or(f64::NAN),
        });
    }
    let half_pi = S::FRAC_PI_2();
    if !(theta > S::zero()) || theta > half_pi + lit::<S>(isometry::TAU_AXIS) {
        return Err(TorusError::InvalidAngle {
            theta: theta.to_f64().unwrap_or(f64::NAN),
        });
    }
    if c < S::zero() || d < S::zero() || !(c + d > S::zero()) {
        return Err(TorusError::DegenerateWeights {
            c: c.to_f64().unwrap_or(f64::NAN),
            d: d.to_f64().unwrap_or(f64::NAN),
        });
    }

    let raw = build_raw_pair(l, m, theta)?;
    // exchange the roles when the weight ratio falls below the pair ratio
    let swapped = d > S::zero() && c / d < raw.ratio;
    let (raw, c, d) = if swapped {
        let flipped = build_raw_pair_swapped(l, m, theta)?;
        (flipped, d, c)
    } else {
        (raw, c, d)
    };

    // crossing-angle validation against the requested angle
    let measured = isometry::crossing_angle(&raw.x_gamma, &raw.x_delta);
    if (measured - theta).abs() > lit::<S>(1e-9) {
        return Err(TorusError::GeometryValidation(format!(
            "crossing angle {measured} does not match requested {theta}"
        )));
    }

    let atlas = build_atlas(&raw, word_bound);
    let base_point = select_base_point(&raw, &atlas)?;

    Ok(TorusConfig {
        params,
        swapped,
        pair: raw.pair,
        alpha: raw.alpha,
        x_gamma: raw.x_gamma,
        x_delta: raw.x_delta,
        x_alpha: raw.x_alpha,
        x_product: raw.x_product,
        len_gamma: translation_length(&raw.pair.gamma)?,
        len_delta: translation_length(&raw.pair.delta)?,
        theta,
        c,
        d,
        ratio0: raw.ratio,
        base_point,
        word_bound,
        atlas,
    })
}

// The exchanged pair is rebuilt in standard position with the lengths
// swapped, γ' = M(m), δ' = R_θ M(l) R_{−θ}. Renaming the roles in place
// would produce the mirror configuration, whose crossing normals are the
// negatives of the tabulated ones; the decomposition itself is invariant
// under that mirror, so the standard realization loses nothing.
fn build_raw_pair_swapped<S: Scalar>(l: S, m: S, theta: S) -> Result<RawPair<S>, TorusError> {
    build_raw_pair(m, l, theta)
}

fn build_atlas<S: Scalar>(raw: &RawPair<S>, bound: usize) -> ConjugateAtlas<S> {
    // BFS over reduced conjugators, matrices built incrementally
    let mut words: Vec<Word> = vec![Word::identity()];
    let mut matrices: Vec<Isometry<S>> = vec![Isometry::identity()];
    let mut frontier: Vec<usize> = vec![0];
    for _ in 0..bound {
        let mut next = Vec::with_capacity(frontier.len() * 3);
        for &i in &frontier {
            for &l in &Letter::ALL {
                if words[i].letters().last() == Some(&l.inverse()) {
                    continue;
                }
                let mut w = words[i].clone();
                w.push(l);
                let m = matrices[i].compose(raw.pair.letter_matrix(l));
                next.push(words.len());
                words.push(w);
                matrices.push(m);
            }
        }
        frontier = next;
    }

    let base = [
        (CurveKind::CurveC.word(), raw.x_gamma),
        (CurveKind::CurveD.word(), raw.x_delta),
        (CurveKind::Boundary.word(), raw.x_alpha),
        (CurveKind::Product.word(), raw.x_product),
    ];

    let mut curves: [Vec<ConjugateAxis<S>>; 4] = [vec![], vec![], vec![], vec![]];
    for (slot, (eta, base_axis)) in base.iter().enumerate() {
        let mut seen: HashSet<Word> = HashSet::with_capacity(words.len());
        for (w, mw) in words.iter().zip(&matrices) {
            let key = w.conjugate(eta);
            if seen.insert(key) {
                curves[slot].push(ConjugateAxis {
                    axis: mw.apply(base_axis),
                    conj_len: w.len(),
                });
            }
        }
    }
    ConjugateAtlas { bound, curves }
}

/// Picks a base point beyond the boundary axis, on the side away from the
/// crossing point, with clearance from every enumerated conjugate axis.
fn select_base_point<S: Scalar>(
    raw: &RawPair<S>,
    atlas: &ConjugateAtlas<S>,
) -> Result<MinkVec<S>, TorusError> {
    let p = MinkVec::origin();
    let a = raw.x_alpha.form(&p);
    let sign = if a >= S::zero() { S::one() } else { -S::one() };
    // unit tangent at p pointing away from the boundary axis side of p
    let w = raw.x_alpha + p.scale(a);
    let that = w.scale(-sign / (S::one() + a * a).sqrt());
    let t_star = a.abs().asinh();

    let tau = lit::<S>(TAU_BASE);
    let clear = |q: &MinkVec<S>| -> bool {
        atlas
            .curves
            .iter()
            .flatten()
            .all(|ca| ca.axis.form(q).abs() > tau)
    };

    for k in 0..64 {
        let margin = lit::<S>(0.10 + 0.03 * k as f64);
        let t = t_star + margin;
        let p0 = p.scale(t.cosh()) + that.scale(t.sinh());
        let gp0 = raw.pair.gamma.apply(&p0);
        let dp0 = raw.pair.delta.apply(&p0);
        if clear(&p0) && clear(&gp0) && clear(&dp0) {
            return Ok(p0);
        }
    }
    Err(TorusError::NoGenericPoint)
}
