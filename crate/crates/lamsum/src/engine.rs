//! The decomposition engine: the ratio condition, the two-unknown linear
//! system, the four-branch recursion, and termination and convergence
//! detection.
//!
//! Each state carries a pair of crossing translations with weights. One
//! step splits the first weight, trades the ratio-matched part for a
//! boundary-curve contribution plus a product-curve contribution, and
//! hands the recursion a new crossing pair obtained from the old one by a
//! basis move.
//!
//! Internally the pair is held in a frame whose origin is the crossing
//! point of the two axes. Product axes come from the half-turn
//! factorization (a translation is the product of two point reflections
//! about points on its axis), so every per-step quantity is computed from
//! well-scaled local data; the accumulated frame change is kept as a
//! single isometry back to the original coordinates. Translation lengths
//! grow geometrically along the recursion, so a run either terminates,
//! hits the iteration cap, or stops at the representable-length guard.

use crate::cocycle::{self, curve_cocycle_table, GeneratorCocycle, WeightedCurve};
use crate::isometry::{
    self, axis, commutator, translation_from_axis, Isometry, IsometryError,
};
use crate::minkowski::{normalize_spacelike, MinkVec};
use crate::scalar::{lit, Scalar};
use crate::torus::{CurveKind, TorusConfig};
use crate::word::{Letter, Word};
use thiserror::Error;

/// Smallest admissible cosine in the ratio denominator.
pub const TAU_RATIO: f64 = 1e-9;
/// Relative tolerance on the ratio hypothesis of the linear system.
pub const TAU_RATIO_MATCH: f64 = 1e-9;
/// Weight floor, relative to the initial total weight.
pub const TAU_WEIGHT_SCALE: f64 = 1e-12;
/// Translation lengths beyond this exceed the representable range of the
/// matrix picture (cosh overflows near 710).
pub const LENGTH_GUARD: f64 = 650.0;
/// Default iteration cap.
pub const DEFAULT_MAX_ITER: usize = 200;

#[derive(Debug, Error, PartialEq)]
pub enum EngineError {
    #[error("ratio denominator cos θ(δγ, γ) = {cos} is not positive enough")]
    IllConditioned { cos: f64 },
    #[error("weights c/d = {got} do not satisfy the ratio condition r = {want}")]
    RatioMismatch { got: f64, want: f64 },
    #[error("solved weights fell outside their signs (a = {a}, b = {b}); orientation conventions are broken")]
    NegativeWeight { a: f64, b: f64 },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("intermediate values left the representable floating range")]
    Unrepresentable,
    #[error(transparent)]
    Isometry(#[from] IsometryError),
}

/// Solution of the two-unknown system for a ratio-matched pair.
#[derive(Clone, Copy, Debug)]
pub struct PropSolution<S> {
    /// boundary-curve weight; positive in exact arithmetic, clamped to
    /// zero when an increment falls below the float noise floor
    pub a: S,
    /// product-curve weight, non-negative; zero exactly at right angles
    pub b: S,
    /// relative max-norm residual over all six scalar equations, including
    /// the spread between the two projection formulas for b
    pub residual: S,
}

/// The geometric data the linear system needs, with all axes oriented.
struct SolveFrame<S> {
    x_g: MinkVec<S>,
    x_h: MinkVec<S>,
    /// dual of δγ
    x_dg: MinkVec<S>,
    /// dual of γδ = γ·x_dg
    x_gd: MinkVec<S>,
    x_al: MinkVec<S>,
    m_g: Isometry<S>,
    m_h: Isometry<S>,
    /// matrix of δγ
    m_dg: Isometry<S>,
}

fn solve_in_frame<S: Scalar>(
    f: &SolveFrame<S>,
    c: S,
    d: S,
    weight_tol: S,
) -> Result<PropSolution<S>, EngineError> {
    let cos_gh = f.x_g.form(&f.x_h);
    let cos_pd = f.x_dg.form(&f.x_h);
    let cos_pg = f.x_dg.form(&f.x_g);
    if cos_pg <= lit::<S>(TAU_RATIO) || cos_pd <= lit::<S>(TAU_RATIO) {
        return Err(EngineError::IllConditioned {
            cos: cos_pg.min(cos_pd).to_f64().unwrap_or(f64::NAN),
        });
    }
    // two equivalent projections; take the better conditioned one and fold
    // their disagreement into the residual
    let b1 = c * cos_gh / cos_pd;
    let b2 = d * cos_gh / cos_pg;
    let mut b = if cos_pd >= cos_pg { b1 } else { b2 };
    let spread = (b1 - b2).abs();

    let num = c * f.x_g.form(&f.x_al) - d * f.x_h.form(&f.x_al);
    let den = S::one() - f.m_dg.apply(&f.x_al).form(&f.x_al);
    let mut a = num / den;

    let e1 = (f.x_al - f.m_h.apply(&f.x_al)).scale(a) + f.x_dg.scale(b) - f.x_g.scale(c);
    let e2 = (f.x_al - f.m_g.apply(&f.x_al)).scale(a) - f.x_gd.scale(b) + f.x_h.scale(d);
    let scale = (f.x_g.max_abs() * c)
        .max(f.x_h.max_abs() * d)
        .max(b.abs())
        .max(lit::<S>(1e-300));
    let residual = (e1.max_abs().max(e2.max_abs()) + spread) / scale;

    if !a.is_finite() || !b.is_finite() || !residual.is_finite() {
        return Err(EngineError::Unrepresentable);
    }
    // materially negative weights signal broken orientation conventions;
    // increments at the float noise floor clamp to zero
    if a < -weight_tol || b < -weight_tol {
        return Err(EngineError::NegativeWeight {
            a: a.to_f64().unwrap_or(f64::NAN),
            b: b.to_f64().unwrap_or(f64::NAN),
        });
    }
    if a < S::zero() {
        a = S::zero();
    }
    if b < S::zero() {
        b = S::zero();
    }
    Ok(PropSolution { a, b, residual })
}

/// The weight ratio r(g, h) = cos θ(gh, h) / cos θ(gh, g) at which the
/// weighted pair collapses to boundary plus product in one step. Computed
/// through the conjugation-equivalent duals of hg.
pub fn ratio<S: Scalar>(g: &Isometry<S>, h: &Isometry<S>) -> Result<S, EngineError> {
    let x_g = axis(g)?;
    let x_h = axis(h)?;
    let x_dg = axis(&h.compose(g))?;
    let cos_pd = x_dg.form(&x_h);
    let cos_pg = x_dg.form(&x_g);
    if cos_pg.abs() <= lit::<S>(TAU_RATIO) {
        return Err(EngineError::IllConditioned {
            cos: cos_pg.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(cos_pd / cos_pg)
}

/// Solves the six-equation system for a pair with ratio-matched weights
/// c/d = r(g, h), returning the two curve weights and the residual.
#[allow(clippy::neg_cmp_op_on_partial_ord)] // the negation rejects NaN weights
pub fn prop_solve<S: Scalar>(
    g: &Isometry<S>,
    h: &Isometry<S>,
    c: S,
    d: S,
) -> Result<PropSolution<S>, EngineError> {
    let r = ratio(g, h)?;
    if !(d > S::zero()) {
        return Err(EngineError::RatioMismatch {
            got: f64::INFINITY,
            want: r.to_f64().unwrap_or(f64::NAN),
        });
    }
    if (c / d - r).abs() > lit::<S>(TAU_RATIO_MATCH) * r.abs().max(S::one()) {
        return Err(EngineError::RatioMismatch {
            got: (c / d).to_f64().unwrap_or(f64::NAN),
            want: r.to_f64().unwrap_or(f64::NAN),
        });
    }
    let m_dg = h.compose(g);
    let x_dg = axis(&m_dg)?;
    let frame = SolveFrame {
        x_g: axis(g)?,
        x_h: axis(h)?,
        x_gd: g.apply(&x_dg),
        x_dg,
        x_al: axis(&commutator(g, h))?,
        m_g: *g,
        m_h: *h,
        m_dg,
    };
    solve_in_frame(&frame, c, d, lit::<S>(TAU_WEIGHT_SCALE) * (c + d))
}

// ---------------------------------------------------------------------
// local-frame recursion
// ---------------------------------------------------------------------

/// Tangent direction at (1,0,0) of the axis dual to `u` (u has x0 = 0),
/// pointing along the orientation of the axis.
fn tangent_at_origin<S: Scalar>(u: &MinkVec<S>) -> MinkVec<S> {
    MinkVec::new(S::zero(), u.x2, -u.x1)
}

/// Crossing angle of two duals through the origin, with full relative
/// accuracy at small angles.
fn local_angle<S: Scalar>(u: &MinkVec<S>, v: &MinkVec<S>) -> S {
    let cos = u.x1 * v.x1 + u.x2 * v.x2;
    let sin = (u.x1 * v.x2 - u.x2 * v.x1).abs();
    sin.atan2(cos)
}

/// Per-step geometric data of the product elements of the current pair.
struct ProductFrame<S> {
    dual_dg: MinkVec<S>,
    dual_gd: MinkVec<S>,
    len_prod: S,
    ratio: S,
    /// the point −len_h/2 on the second axis; it lies on the axis of γδ
    q2m: MinkVec<S>,
}

fn product_frame<S: Scalar>(
    u_g: &MinkVec<S>,
    len_g: S,
    u_h: &MinkVec<S>,
    len_h: S,
) -> Result<ProductFrame<S>, EngineError> {
    let half = lit::<S>(0.5);
    let (a, b) = (len_g * half, len_h * half);
    let t_g = tangent_at_origin(u_g);
    let t_h = tangent_at_origin(u_h);
    let e0 = MinkVec::origin();
    let (cha, sha) = (a.cosh(), a.sinh());
    let (chb, shb) = (b.cosh(), b.sinh());
    let q1p = e0.scale(cha) + t_g.scale(sha);
    let q1m = e0.scale(cha) - t_g.scale(sha);
    let q2p = e0.scale(chb) + t_h.scale(shb);
    let q2m = e0.scale(chb) - t_h.scale(shb);
    // half-turn factorization: δγ translates along q1m → q2p,
    // γδ along q2m → q1p; pre-scale the crosses so squaring cannot
    // overflow at long lengths
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // the negation rejects NaN
    let unit_dual = |raw: MinkVec<S>| {
        let s = raw.max_abs();
        if !(s > S::zero()) || !s.is_finite() {
            return Err(EngineError::InvariantViolation(
                "product axis degenerated".into(),
            ));
        }
        normalize_spacelike(&raw.scale(s.recip()))
            .map_err(|_| EngineError::InvariantViolation("product axis degenerated".into()))
    };
    let dual_dg = unit_dual(q1m.g_cross(&q2p))?;
    let dual_gd = unit_dual(q2m.g_cross(&q1p))?;
    let cos_theta = u_g.x1 * u_h.x1 + u_g.x2 * u_h.x2;
    let ch_half = cha * chb + sha * shb * cos_theta;
    let len_prod = (ch_half.max(S::one())).acosh() * lit::<S>(2.0);
    let cos_pd = dual_dg.form(u_h);
    let cos_pg = dual_dg.form(u_g);
    if cos_pg <= lit::<S>(TAU_RATIO) {
        return Err(EngineError::IllConditioned {
            cos: cos_pg.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(ProductFrame {
        dual_dg,
        dual_gd,
        len_prod,
        ratio: cos_pd / cos_pg,
        q2m,
    })
}

/// The recursion state: the current pair in its crossing-point frame,
/// the boundary axis transported into that frame, weights, words, and the
/// bookkeeping needed to map everything back to the original coordinates.
#[derive(Clone, Debug)]
pub struct RecursionState<S> {
    pub k: usize,
    /// dual of the first axis, x0 component zero
    pub u_g: MinkVec<S>,
    /// dual of the second axis
    pub u_h: MinkVec<S>,
    pub len_g: S,
    pub len_h: S,
    /// boundary-curve dual in local coordinates; its sign tracks the
    /// inversion of the carried commutator under first-kind basis moves
    pub x_alpha: MinkVec<S>,
    /// isometry from local back to original coordinates
    pub to_global: Isometry<S>,
    /// global matrices of the pair, while entries stay representable
    pub gamma_global: Option<Isometry<S>>,
    pub delta_global: Option<Isometry<S>>,
    pub gamma_word: Word,
    pub delta_word: Word,
    /// expressions of the original generators as words in the current pair
    pub expr_gamma: Word,
    pub expr_delta: Word,
    pub a: S,
    pub c: S,
    pub d: S,
    pub weight_tol: S,
}

impl<S: Scalar> RecursionState<S> {
    pub fn theta(&self) -> S {
        local_angle(&self.u_g, &self.u_h)
    }
}

/// Starting state of the recursion for a validated configuration.
pub fn initial_state<S: Scalar>(cfg: &TorusConfig<S>) -> RecursionState<S> {
    initial_state_with_tol(cfg, lit::<S>(TAU_WEIGHT_SCALE) * (cfg.c + cfg.d))
}

/// Starting state with an explicit weight floor.
pub fn initial_state_with_tol<S: Scalar>(
    cfg: &TorusConfig<S>,
    weight_tol: S,
) -> RecursionState<S> {
    let planar = |v: &MinkVec<S>| {
        // duals of axes through (1,0,0) have no time component; drop the
        // rounding leak and renormalize in the plane
        let n = (v.x1 * v.x1 + v.x2 * v.x2).sqrt();
        MinkVec::new(S::zero(), v.x1 / n, v.x2 / n)
    };
    RecursionState {
        k: 0,
        u_g: planar(&cfg.x_gamma),
        u_h: planar(&cfg.x_delta),
        len_g: cfg.len_gamma,
        len_h: cfg.len_delta,
        x_alpha: cfg.x_alpha,
        to_global: Isometry::identity(),
        gamma_global: Some(cfg.pair.gamma),
        delta_global: Some(cfg.pair.delta),
        gamma_word: Word::parse("g").unwrap(),
        delta_word: Word::parse("d").unwrap(),
        expr_gamma: Word::parse("g").unwrap(),
        expr_delta: Word::parse("d").unwrap(),
        a: S::zero(),
        c: cfg.c,
        d: cfg.d,
        weight_tol,
    }
}

/// Which continuation a step selected.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// b vanished: the product curve drops out, d becomes zero
    ProductVanishes,
    /// the whole first weight was consumed: c becomes the product weight,
    /// d becomes zero
    ExcessVanishes,
    /// new pair (γδ, γ)
    PairProductFirst,
    /// new pair (γ, γδ)
    PairProductSecond,
}

/// Numbers produced by one executed step.
#[derive(Clone, Copy, Debug)]
pub struct StepRecord<S> {
    pub r: S,
    pub theta: S,
    pub b: S,
    pub a_step: S,
    pub residual: S,
    pub len_prod: S,
    pub branch: Branch,
}

/// Letter substitution for the expression words under a basis move.
fn substitute(word: &Word, map: &dyn Fn(Letter) -> Vec<Letter>) -> Word {
    let mut out = Word::identity();
    for &l in word.letters() {
        for n in map(l) {
            out.push(n);
        }
    }
    out
}

/// Executes one recursion step. The state must have d above the weight
/// floor; termination is the caller's check.
pub fn recursion_step<S: Scalar>(
    st: &RecursionState<S>,
) -> Result<(RecursionState<S>, StepRecord<S>), EngineError> {
    let pf = product_frame(&st.u_g, st.len_g, &st.u_h, st.len_h)?;
    let theta = st.theta();
    let r = pf.ratio;
    let cw = r * st.d;
    let excess = st.c - cw;
    if excess < -st.weight_tol {
        return Err(EngineError::InvariantViolation(format!(
            "weight ratio fell below the pair ratio at step {} (excess {excess})",
            st.k
        )));
    }

    let m_g = translation_from_axis(&st.u_g, st.len_g)?;
    let m_h = translation_from_axis(&st.u_h, st.len_h)?;
    let m_dg = translation_from_axis(&pf.dual_dg, pf.len_prod)?;
    let frame = SolveFrame {
        x_g: st.u_g,
        x_h: st.u_h,
        x_dg: pf.dual_dg,
        x_gd: pf.dual_gd,
        x_al: st.x_alpha,
        m_g,
        m_h,
        m_dg,
    };
    let sol = solve_in_frame(&frame, cw, st.d, st.weight_tol)?;

    let mut next = st.clone();
    next.k = st.k + 1;
    next.a = st.a + sol.a;

    let product_word = st.gamma_word.concat(&st.delta_word);
    let product_global = match (&st.gamma_global, &st.delta_global) {
        (Some(g), Some(h)) => {
            let mut p = g.compose(h);
            p.renormalize_if_needed();
            (p.max_abs() < lit::<S>(1e290)).then_some(p)
        }
        _ => None,
    };

    let branch;
    if sol.b <= st.weight_tol {
        branch = Branch::ProductVanishes;
        next.c = excess;
        next.d = S::zero();
    } else if excess <= st.weight_tol {
        branch = Branch::ExcessVanishes;
        next.gamma_word = product_word;
        next.gamma_global = product_global;
        next.u_g = pf.dual_gd;
        next.len_g = pf.len_prod;
        next.c = sol.b;
        next.d = S::zero();
    } else {
        // recenter to the crossing point of the new pair: the +len_g/2
        // point of the first axis, reached by sliding back along it
        let half = lit::<S>(0.5);
        let t = translation_from_axis(&st.u_g, -(st.len_g * half))?;
        let w = t.apply(&pf.q2m);
        // dual of the product axis through the new origin, oriented
        // towards the old q1p (now the origin)
        let n = (w.x1 * w.x1 + w.x2 * w.x2).sqrt();
        let dual_prod = MinkVec::new(S::zero(), w.x2 / n, -w.x1 / n);
        let x_alpha_t = t.apply(&st.x_alpha);
        next.to_global = st.to_global.compose(&t.inverse());

        // ratio of the candidate pair (γδ, γ) decides the move
        let cand = product_frame(&dual_prod, pf.len_prod, &st.u_g, st.len_g)?;
        if sol.b / excess >= cand.ratio {
            branch = Branch::PairProductFirst;
            next.u_g = dual_prod;
            next.u_h = st.u_g;
            next.len_g = pf.len_prod;
            next.len_h = st.len_g;
            next.gamma_word = product_word;
            next.delta_word = st.gamma_word.clone();
            next.gamma_global = product_global;
            next.delta_global = st.gamma_global;
            next.c = sol.b;
            next.d = excess;
            // commutator of the new pair is the inverse of the old one
            next.x_alpha = -x_alpha_t;
            let map = |l: Letter| -> Vec<Letter> {
                match l {
                    Letter::G => vec![Letter::D],
                    Letter::Gi => vec![Letter::Di],
                    Letter::D => vec![Letter::Di, Letter::G],
                    Letter::Di => vec![Letter::Gi, Letter::D],
                }
            };
            next.expr_gamma = substitute(&st.expr_gamma, &map);
            next.expr_delta = substitute(&st.expr_delta, &map);
        } else {
            branch = Branch::PairProductSecond;
            next.u_h = dual_prod;
            next.len_h = pf.len_prod;
            next.delta_word = product_word;
            next.delta_global = product_global;
            next.c = excess;
            next.d = sol.b;
            next.x_alpha = x_alpha_t;
            let map = |l: Letter| -> Vec<Letter> {
                match l {
                    Letter::G => vec![Letter::G],
                    Letter::Gi => vec![Letter::Gi],
                    Letter::D => vec![Letter::Gi, Letter::D],
                    Letter::Di => vec![Letter::Di, Letter::G],
                }
            };
            next.expr_gamma = substitute(&st.expr_gamma, &map);
            next.expr_delta = substitute(&st.expr_delta, &map);
        }
    }

    Ok((
        next,
        StepRecord {
            r,
            theta,
            b: sol.b,
            a_step: sol.a,
            residual: sol.residual,
            len_prod: pf.len_prod,
            branch,
        },
    ))
}

/// One row of the reported trace: the state at step k, plus the solve
/// numbers of the step executed from it (absent on the final row).
#[derive(Clone, Debug)]
pub struct StepState<S> {
    pub k: usize,
    pub gamma_word: Word,
    pub delta_word: Word,
    pub gamma: Option<Isometry<S>>,
    pub delta: Option<Isometry<S>>,
    pub a: S,
    pub c: S,
    pub d: S,
    pub theta: S,
    pub len_gamma: S,
    pub len_delta: S,
    /// axis duals in the original coordinates, for rendering
    pub axis_gamma: MinkVec<S>,
    pub axis_delta: MinkVec<S>,
    pub r: Option<S>,
    pub b: Option<S>,
    pub a_step: Option<S>,
    pub residual: Option<S>,
}

/// Why a run stopped.
#[derive(Clone, Debug, PartialEq)]
pub enum StopReason {
    /// d reached the weight floor: the sum is an exact weighted multicurve
    TerminatedExact { step: usize },
    MaxIterations,
    /// translation lengths left the representable range
    Overflow { step: usize, length: f64 },
    NumericalBreakdown { step: usize, reason: String },
}

/// Cauchy-tail data of a truncated run.
#[derive(Clone, Debug)]
pub struct Tail<S> {
    pub alpha_weight: S,
    pub c: S,
    pub d: S,
    pub gamma_word: Word,
    pub delta_word: Word,
}

/// Result of a run: exact components when terminated, tail estimates
/// otherwise, plus the full trace.
#[derive(Clone, Debug)]
pub struct SumDecomposition<S> {
    pub components: Vec<WeightedCurve<S>>,
    /// holonomy word of the boundary curve in the original generators
    pub alpha_word: Word,
    pub tail: Option<Tail<S>>,
    pub stop: StopReason,
    pub trace: Vec<StepState<S>>,
    /// the weight floor the run used; replays must match it
    pub weight_tol: S,
}

fn state_row<S: Scalar>(st: &RecursionState<S>, rec: Option<&StepRecord<S>>) -> StepState<S> {
    // a terminal state no longer holds a crossing pair
    let theta = if st.d > st.weight_tol {
        st.theta()
    } else {
        S::zero()
    };
    StepState {
        k: st.k,
        gamma_word: st.gamma_word.clone(),
        delta_word: st.delta_word.clone(),
        gamma: st.gamma_global,
        delta: st.delta_global,
        a: st.a,
        c: st.c,
        d: st.d,
        theta,
        len_gamma: st.len_g,
        len_delta: st.len_h,
        axis_gamma: st.to_global.apply(&st.u_g),
        axis_delta: st.to_global.apply(&st.u_h),
        r: rec.map(|r| r.r),
        b: rec.map(|r| r.b),
        a_step: rec.map(|r| r.a_step),
        residual: rec.map(|r| r.residual),
    }
}

/// Runs the recursion with the default weight floor.
pub fn run_sum<S: Scalar>(cfg: &TorusConfig<S>, max_iter: usize) -> SumDecomposition<S> {
    run_sum_with_tol(cfg, max_iter, lit::<S>(TAU_WEIGHT_SCALE) * (cfg.c + cfg.d))
}

/// Runs the recursion; `weight_tol` is the absolute weight below which a
/// coefficient counts as zero.
pub fn run_sum_with_tol<S: Scalar>(
    cfg: &TorusConfig<S>,
    max_iter: usize,
    weight_tol: S,
) -> SumDecomposition<S> {
    let mut st = initial_state_with_tol(cfg, weight_tol);
    let mut trace: Vec<StepState<S>> = Vec::new();
    let mut prev_theta: Option<S> = None;

    let stop = loop {
        if st.d <= st.weight_tol {
            break StopReason::TerminatedExact { step: st.k };
        }
        let len_sum = st.len_g + st.len_h;
        // the boundary pairings square the transported dual's magnitude
        let alpha_log = st.x_alpha.max_abs().ln().max(S::zero());
        let two = lit::<S>(2.0);
        if len_sum > lit::<S>(LENGTH_GUARD) || len_sum + two * alpha_log > lit::<S>(700.0) {
            break StopReason::Overflow {
                step: st.k,
                length: len_sum.to_f64().unwrap_or(f64::NAN),
            };
        }
        if st.k >= max_iter {
            break StopReason::MaxIterations;
        }
        let theta = st.theta();
        if let Some(prev) = prev_theta {
            if theta >= prev + lit::<S>(isometry::TAU_AXIS) {
                break StopReason::NumericalBreakdown {
                    step: st.k,
                    reason: format!("crossing angle increased from {prev} to {theta}"),
                };
            }
        }
        match recursion_step(&st) {
            Ok((next, rec)) => {
                trace.push(state_row(&st, Some(&rec)));
                prev_theta = Some(theta);
                st = next;
            }
            Err(EngineError::Isometry(IsometryError::Overflow { length })) => {
                break StopReason::Overflow {
                    step: st.k,
                    length,
                };
            }
            Err(EngineError::Unrepresentable) => {
                break StopReason::Overflow {
                    step: st.k,
                    length: len_sum.to_f64().unwrap_or(f64::NAN),
                };
            }
            Err(e) => {
                break StopReason::NumericalBreakdown {
                    step: st.k,
                    reason: e.to_string(),
                };
            }
        }
    };
    trace.push(state_row(&st, None));

    let alpha_word = Word::parse("DGdg").unwrap();
    let mut components = Vec::new();
    let mut tail = None;
    match stop {
        StopReason::TerminatedExact { .. } => {
            if st.a > st.weight_tol {
                components.push(WeightedCurve {
                    word: alpha_word.clone(),
                    weight: st.a,
                });
            }
            if st.c > st.weight_tol {
                debug_assert!(!st.gamma_word.is_proper_power());
                components.push(WeightedCurve {
                    word: st.gamma_word.clone(),
                    weight: st.c,
                });
            }
        }
        _ => {
            tail = Some(Tail {
                alpha_weight: st.a,
                c: st.c,
                d: st.d,
                gamma_word: st.gamma_word.clone(),
                delta_word: st.delta_word.clone(),
            });
        }
    }

    SumDecomposition {
        components,
        alpha_word,
        tail,
        stop,
        trace,
        weight_tol,
    }
}

/// Re-substitution report for a decomposition.
#[derive(Clone, Debug)]
pub struct VerifyReport<S> {
    /// per-step six-equation residuals, re-evaluated from fresh geometry
    /// with the recorded weights
    pub per_step: Vec<S>,
    /// their sum; bounds the defect of the running decomposition identity
    /// up to conjugation growth
    pub accumulated: S,
    /// independent generator-level comparison through the crossing oracle,
    /// when every involved holonomy word is short enough for the oracle
    /// horizon
    pub direct: Option<S>,
}

/// Re-derives each step's linear-system residual from the recorded trace
/// by replaying the local geometry, and, where feasible, checks the whole
/// decomposition identity on the generators through the crossing oracle.
pub fn verify_decomposition<S: Scalar>(
    dec: &SumDecomposition<S>,
    cfg: &TorusConfig<S>,
) -> VerifyReport<S> {
    let mut per_step = Vec::new();
    let mut st = initial_state_with_tol(cfg, dec.weight_tol);
    for row in &dec.trace {
        if row.residual.is_none() {
            break;
        }
        match recursion_step(&st) {
            Ok((next, rec)) => {
                // re-substituted residual with the recorded weights
                let recorded_a = row.a_step.unwrap_or(rec.a_step);
                let recorded_b = row.b.unwrap_or(rec.b);
                let drift = (recorded_a - rec.a_step).abs() + (recorded_b - rec.b).abs();
                per_step.push(rec.residual + drift);
                st = next;
            }
            Err(_) => break,
        }
    }
    let accumulated = per_step.iter().fold(S::zero(), |s, r| s + *r);

    let direct = direct_generator_check(dec, cfg);

    VerifyReport {
        per_step,
        accumulated,
        direct,
    }
}

/// Compares c·τ_C + d·τ_D against the decomposition's weighted cocycle sum
/// on both generators, all values computed by the crossing oracle.
fn direct_generator_check<S: Scalar>(
    dec: &SumDecomposition<S>,
    cfg: &TorusConfig<S>,
) -> Option<S> {
    let mut terms: Vec<WeightedCurve<S>> = Vec::new();
    match &dec.stop {
        StopReason::TerminatedExact { .. } => terms.extend(dec.components.iter().cloned()),
        _ => {
            let tail = dec.tail.as_ref()?;
            terms.push(WeightedCurve {
                word: dec.alpha_word.clone(),
                weight: tail.alpha_weight,
            });
            terms.push(WeightedCurve {
                word: tail.gamma_word.clone(),
                weight: tail.c,
            });
            terms.push(WeightedCurve {
                word: tail.delta_word.clone(),
                weight: tail.d,
            });
        }
    }
    if terms.iter().any(|t| t.word.len() > 8) {
        return None;
    }
    let mut worst = S::zero();
    for target in [Word::parse("g").unwrap(), Word::parse("d").unwrap()] {
        let lhs_c = cocycle::crossing_cocycle_oracle(
            &WeightedCurve {
                word: CurveKind::CurveC.word(),
                weight: cfg.c,
            },
            &target,
            cfg,
            cfg.word_bound,
        )
        .ok()?;
        let lhs_d = cocycle::crossing_cocycle_oracle(
            &WeightedCurve {
                word: CurveKind::CurveD.word(),
                weight: cfg.d,
            },
            &target,
            cfg,
            cfg.word_bound,
        )
        .ok()?;
        let mut rhs = MinkVec::zero();
        for t in &terms {
            if t.weight > S::zero() {
                let v = cocycle::crossing_cocycle_oracle(t, &target, cfg, cfg.word_bound).ok()?;
                rhs = rhs + v;
            }
        }
        let lhs = lhs_c + lhs_d;
        let scale = lhs.max_abs().max(rhs.max_abs()).max(S::one());
        worst = worst.max((lhs - rhs).max_abs() / scale);
    }
    Some(worst)
}

/// One invariant check over a finished run.
#[derive(Clone, Debug)]
pub struct InvariantCheck {
    pub name: &'static str,
    pub pass: bool,
    /// the extremal value the check observed
    pub worst: f64,
}

/// Evaluates the run invariants on a decomposition.
pub fn invariant_summary<S: Scalar>(
    dec: &SumDecomposition<S>,
    cfg: &TorusConfig<S>,
) -> Vec<InvariantCheck> {
    let rows = &dec.trace;
    let to = |x: S| x.to_f64().unwrap_or(f64::NAN);
    let mut out = Vec::new();

    // angles never increase beyond the axis tolerance
    let mut worst_rise = f64::NEG_INFINITY;
    for w in rows.windows(2) {
        worst_rise = worst_rise.max(to(w[1].theta - w[0].theta));
    }
    out.push(InvariantCheck {
        name: "angle_decrease",
        pass: rows.len() < 2 || worst_rise < isometry::TAU_AXIS,
        worst: if rows.len() < 2 { 0.0 } else { worst_rise },
    });

    // alpha weight never decreases, and ends positive if a step ran
    let min_step = rows
        .iter()
        .filter_map(|r| r.a_step)
        .fold(f64::INFINITY, |m, a| m.min(to(a)));
    let steps_ran = rows.iter().any(|r| r.a_step.is_some());
    out.push(InvariantCheck {
        name: "alpha_weight_monotone",
        pass: !steps_ran || min_step >= 0.0,
        worst: if steps_ran { min_step } else { 0.0 },
    });
    let final_a = rows.last().map(|r| to(r.a)).unwrap_or(0.0);
    out.push(InvariantCheck {
        name: "alpha_weight_positive",
        pass: !steps_ran || final_a > 0.0,
        worst: final_a,
    });

    // the weight ratio condition holds at every solved step
    let mut worst_ratio = f64::INFINITY;
    for r in rows {
        if let Some(rk) = r.r {
            worst_ratio = worst_ratio.min(to(r.c - rk * r.d));
        }
    }
    let tol = to(lit::<S>(TAU_WEIGHT_SCALE) * (cfg.c + cfg.d));
    out.push(InvariantCheck {
        name: "ratio_condition",
        pass: worst_ratio.is_infinite() || worst_ratio >= -tol,
        worst: if worst_ratio.is_finite() { worst_ratio } else { 0.0 },
    });

    // commutator words stay in the conjugacy class of the boundary word or
    // its inverse, exactly
    let alpha = Word::parse("DGdg").unwrap();
    let alpha_inv = alpha.inverse();
    let mut word_fails = 0usize;
    for r in rows {
        if r.d > S::zero() {
            let com = r
                .delta_word
                .inverse()
                .concat(&r.gamma_word.inverse())
                .concat(&r.delta_word)
                .concat(&r.gamma_word);
            if !(com.is_conjugate(&alpha) || com.is_conjugate(&alpha_inv)) {
                word_fails += 1;
            }
        }
    }
    out.push(InvariantCheck {
        name: "commutator_class_words",
        pass: word_fails == 0,
        worst: word_fails as f64,
    });

    // numeric commutator traces, on the prefix where the product entries
    // stay within the float error budget for 1e-8 relative accuracy
    let tr_alpha = to(cfg.alpha.trace());
    let budget = 0.5 * (1e-8 * tr_alpha / f64::EPSILON).ln();
    let mut worst_drift: f64 = 0.0;
    for r in rows {
        if let (Some(g), Some(h)) = (&r.gamma, &r.delta) {
            if r.d > S::zero() && to(r.len_gamma + r.len_delta) <= budget {
                let tr = to(commutator(g, h).trace());
                worst_drift = worst_drift.max((tr - tr_alpha).abs() / tr_alpha.abs());
            }
        }
    }
    out.push(InvariantCheck {
        name: "commutator_trace_drift",
        pass: worst_drift <= 1e-8,
        worst: worst_drift,
    });

    // weights stay finite; report the running maximum of c
    let max_c = rows.iter().fold(0.0f64, |m, r| m.max(to(r.c)));
    out.push(InvariantCheck {
        name: "first_weight_bounded",
        pass: max_c.is_finite(),
        worst: max_c,
    });

    // the mass the second curve carries across a fixed segment stays
    // bounded: d_k grows no faster than its length shrinks it
    let max_dlen = rows
        .iter()
        .fold(0.0f64, |m, r| m.max(to(r.d) * to(r.len_delta)));
    let cap = 10.0 * to(cfg.c + cfg.d) * to(cfg.len_delta).max(1.0);
    out.push(InvariantCheck {
        name: "second_weight_length_product",
        pass: max_dlen <= cap,
        worst: max_dlen,
    });

    // d either reached the floor or the run stopped at the guard
    let final_d = rows.last().map(|r| to(r.d)).unwrap_or(0.0);
    let d_ok = matches!(
        dec.stop,
        StopReason::TerminatedExact { .. } | StopReason::Overflow { .. }
    ) || final_d < 1e-6;
    out.push(InvariantCheck {
        name: "second_weight_progress",
        pass: d_ok,
        worst: final_d,
    });

    // per-step residuals
    let max_res = rows
        .iter()
        .filter_map(|r| r.residual)
        .fold(0.0f64, |m, r| m.max(to(r)));
    out.push(InvariantCheck {
        name: "step_residual",
        pass: max_res <= 1e-6,
        worst: max_res,
    });

    out
}

/// Total length of the exact components of a terminated run.
pub fn decomposition_length<S: Scalar>(
    dec: &SumDecomposition<S>,
    cfg: &TorusConfig<S>,
) -> Result<S, IsometryError> {
    cocycle::multicurve_length(&dec.components, cfg)
}

/// Generator-level cocycle of the decomposition's right side assembled
/// from the closed-form tables, for terminated runs whose component words
/// are among the four tabulated curves.
pub fn components_table_cocycle<S: Scalar>(
    dec: &SumDecomposition<S>,
    cfg: &TorusConfig<S>,
) -> Option<GeneratorCocycle<S>> {
    let mut total = GeneratorCocycle::zero();
    for comp in &dec.components {
        let kind = CurveKind::ALL
            .into_iter()
            .find(|k| k.word().is_conjugate(&comp.word))?;
        total = total.add(&curve_cocycle_table(cfg, kind).scale(comp.weight));
    }
    Some(total)
}
