//! Cocycles on the free group of the pair, with values in Minkowski space.
//!
//! A cocycle satisfies τ(uv) = τ(u) + u·τ(v) and is determined by its two
//! generator values. The cocycle of a weighted curve with base point p₀
//! sums the oriented unit normals of the lifts crossed by the segment
//! [p₀, βp₀]; the crossing oracle below computes that sum directly by
//! enumerating conjugates, independently of the closed-form tables.

use crate::isometry::{axis, translation_length, Isometry, IsometryError};
use crate::minkowski::{MinkVec, MinkowskiError};
use crate::scalar::{lit, Scalar};
use crate::torus::{CurveKind, PairMatrices, TorusConfig};
use crate::word::{Letter, Word};
use std::collections::HashSet;
use thiserror::Error;

/// Relative tolerance for declaring two cocycles cohomologous.
pub const TAU_CLS: f64 = 1e-8;

/// A cocycle stored by its values on the two generators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorCocycle<S> {
    pub on_gamma: MinkVec<S>,
    pub on_delta: MinkVec<S>,
}

impl<S: Scalar> GeneratorCocycle<S> {
    pub fn zero() -> Self {
        GeneratorCocycle {
            on_gamma: MinkVec::zero(),
            on_delta: MinkVec::zero(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        GeneratorCocycle {
            on_gamma: self.on_gamma + other.on_gamma,
            on_delta: self.on_delta + other.on_delta,
        }
    }

    pub fn scale(&self, s: S) -> Self {
        GeneratorCocycle {
            on_gamma: self.on_gamma.scale(s),
            on_delta: self.on_delta.scale(s),
        }
    }

    pub fn max_abs(&self) -> S {
        self.on_gamma.max_abs().max(self.on_delta.max_abs())
    }
}

/// A conjugacy-class representative with a non-negative weight.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedCurve<S> {
    pub word: Word,
    pub weight: S,
}

/// Outcome of comparing two cocycles in cohomology.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClassRelation<S> {
    /// t2 − t1 is the coboundary η ↦ (η − 1)w of the returned vector.
    Coboundary(MinkVec<S>),
    Distinct { residual: S },
}

#[derive(Debug, Error, PartialEq)]
pub enum CocycleError {
    #[error("base point or its image lies on an enumerated axis")]
    BasePointOnAxis(#[from] MinkowskiError),
    #[error("a crossing axis was found at the enumeration bound; the value is unstable")]
    BoundTooSmall { boundary_hits: usize },
    #[error(transparent)]
    Isometry(#[from] IsometryError),
}

/// Value of a cocycle on an explicit letter sequence (not necessarily
/// reduced), by the left fold of the cocycle rule.
pub fn evaluate_letters<S: Scalar>(
    tau: &GeneratorCocycle<S>,
    letters: &[Letter],
    pair: &PairMatrices<S>,
) -> MinkVec<S> {
    let mut value = MinkVec::zero();
    let mut acc = Isometry::identity();
    for &l in letters {
        let contrib = match l {
            Letter::G => tau.on_gamma,
            Letter::D => tau.on_delta,
            // τ(x⁻¹) = −x⁻¹ τ(x)
            Letter::Gi => -pair.gamma_inv.apply(&tau.on_gamma),
            Letter::Di => -pair.delta_inv.apply(&tau.on_delta),
        };
        value = value + acc.apply(&contrib);
        acc = acc.compose(pair.letter_matrix(l));
    }
    value
}

/// Value of a cocycle on a reduced word.
pub fn evaluate<S: Scalar>(
    tau: &GeneratorCocycle<S>,
    word: &Word,
    pair: &PairMatrices<S>,
) -> MinkVec<S> {
    evaluate_letters(tau, word.letters(), pair)
}

/// Generator values of the unit-weight cocycle of one of the four curve
/// families, relative to the current generator pair and the base point
/// beyond the boundary axis.
pub fn curve_cocycle_table<S: Scalar>(
    cfg: &TorusConfig<S>,
    which: CurveKind,
) -> GeneratorCocycle<S> {
    match which {
        CurveKind::CurveC => GeneratorCocycle {
            on_gamma: MinkVec::zero(),
            on_delta: cfg.x_gamma,
        },
        CurveKind::CurveD => GeneratorCocycle {
            on_gamma: -cfg.x_delta,
            on_delta: MinkVec::zero(),
        },
        CurveKind::Boundary => GeneratorCocycle {
            on_gamma: cfg.x_alpha - cfg.pair.gamma.apply(&cfg.x_alpha),
            on_delta: cfg.x_alpha - cfg.pair.delta.apply(&cfg.x_alpha),
        },
        CurveKind::Product => GeneratorCocycle {
            on_gamma: -cfg.pair.gamma.apply(&cfg.x_product),
            on_delta: cfg.x_product,
        },
    }
}

/// Solves the symmetric positive system m·x = rhs by the adjugate.
fn solve3<S: Scalar>(m: &[[S; 3]; 3], rhs: &MinkVec<S>) -> MinkVec<S> {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    let inv = det.recip();
    let adj = [
        [
            m[1][1] * m[2][2] - m[1][2] * m[2][1],
            m[0][2] * m[2][1] - m[0][1] * m[2][2],
            m[0][1] * m[1][2] - m[0][2] * m[1][1],
        ],
        [
            m[1][2] * m[2][0] - m[1][0] * m[2][2],
            m[0][0] * m[2][2] - m[0][2] * m[2][0],
            m[0][2] * m[1][0] - m[0][0] * m[1][2],
        ],
        [
            m[1][0] * m[2][1] - m[1][1] * m[2][0],
            m[0][1] * m[2][0] - m[0][0] * m[2][1],
            m[0][0] * m[1][1] - m[0][1] * m[1][0],
        ],
    ];
    let r = [rhs.x0, rhs.x1, rhs.x2];
    let mut out = [S::zero(); 3];
    for (i, row) in adj.iter().enumerate() {
        out[i] = (row[0] * r[0] + row[1] * r[1] + row[2] * r[2]) * inv;
    }
    MinkVec::new(out[0], out[1], out[2])
}

/// Decides whether two cocycles differ by a coboundary, by least squares
/// on the six-equation system (γ−1)w = Δγ, (δ−1)w = Δδ.
pub fn class_difference<S: Scalar>(
    t1: &GeneratorCocycle<S>,
    t2: &GeneratorCocycle<S>,
    pair: &PairMatrices<S>,
) -> ClassRelation<S> {
    let id = Isometry::identity();
    let rows: Vec<MinkVec<S>> = (0..3)
        .map(|i| {
            MinkVec::new(
                pair.gamma.m[i][0] - id.m[i][0],
                pair.gamma.m[i][1] - id.m[i][1],
                pair.gamma.m[i][2] - id.m[i][2],
            )
        })
        .chain((0..3).map(|i| {
            MinkVec::new(
                pair.delta.m[i][0] - id.m[i][0],
                pair.delta.m[i][1] - id.m[i][1],
                pair.delta.m[i][2] - id.m[i][2],
            )
        }))
        .collect();
    let dg = t2.on_gamma - t1.on_gamma;
    let dd = t2.on_delta - t1.on_delta;
    let b = [dg.x0, dg.x1, dg.x2, dd.x0, dd.x1, dd.x2];

    // normal equations AᵀA w = Aᵀb
    let mut m = [[S::zero(); 3]; 3];
    let mut rhs = MinkVec::zero();
    for (row, bi) in rows.iter().zip(b.iter()) {
        let r = [row.x0, row.x1, row.x2];
        for (i, ri) in r.iter().enumerate() {
            for (j, rj) in r.iter().enumerate() {
                m[i][j] = m[i][j] + *ri * *rj;
            }
        }
        rhs = rhs + row.scale(*bi);
    }
    let w = solve3(&m, &rhs);

    let mut residual = S::zero();
    for (row, bi) in rows.iter().zip(b.iter()) {
        let ax = row.x0 * w.x0 + row.x1 * w.x1 + row.x2 * w.x2;
        residual = residual.max((ax - *bi).abs());
    }
    let scale = t1.max_abs().max(t2.max_abs()).max(S::one());
    if residual <= lit::<S>(TAU_CLS) * scale {
        ClassRelation::Coboundary(w)
    } else {
        ClassRelation::Distinct { residual }
    }
}

/// Cocycle value of a weighted curve at a target word, as the sum of
/// oriented crossing normals over all conjugate lifts within the word
/// bound. Normals point towards the far endpoint of [p₀, βp₀].
pub fn crossing_cocycle_oracle<S: Scalar>(
    curve: &WeightedCurve<S>,
    target: &Word,
    cfg: &TorusConfig<S>,
    word_bound: usize,
) -> Result<MinkVec<S>, CocycleError> {
    let eta = &curve.word;
    if eta.is_empty() {
        return Ok(MinkVec::zero());
    }
    let eta_axis = axis(&cfg.pair.word_matrix(eta))?;
    let beta = cfg.pair.word_matrix(target);
    let p0 = cfg.base_point;
    let bp0 = beta.apply(&p0);

    let mut seen: HashSet<Word> = HashSet::new();
    let mut sum = MinkVec::zero();
    let mut boundary_hits = 0usize;

    // BFS over conjugators with incremental matrices
    let mut words: Vec<Word> = vec![Word::identity()];
    let mut matrices: Vec<Isometry<S>> = vec![Isometry::identity()];
    let mut frontier: Vec<usize> = vec![0];
    let mut visit = |w: &Word, mw: &Isometry<S>| -> Result<(), CocycleError> {
        let key = w.conjugate(eta);
        if !seen.insert(key) {
            return Ok(());
        }
        let u = mw.apply(&eta_axis);
        if crate::minkowski::separates(&u, &p0, &bp0)? {
            let sq = u.form(&bp0);
            let oriented = if sq > S::zero() { u } else { -u };
            sum = sum + oriented;
            if w.len() == word_bound {
                boundary_hits += 1;
            }
        }
        Ok(())
    };
    visit(&words[0], &matrices[0])?;
    for _ in 0..word_bound {
        let mut next = Vec::with_capacity(frontier.len() * 3);
        for &i in &frontier {
            for &l in &Letter::ALL {
                if words[i].letters().last() == Some(&l.inverse()) {
                    continue;
                }
                let mut w = words[i].clone();
                w.push(l);
                let m = matrices[i].compose(cfg.pair.letter_matrix(l));
                visit(&w, &m)?;
                next.push(words.len());
                words.push(w);
                matrices.push(m);
            }
        }
        frontier = next;
    }

    if boundary_hits > 0 {
        return Err(CocycleError::BoundTooSmall { boundary_hits });
    }
    Ok(sum.scale(curve.weight))
}

/// Length of a weighted multicurve: the weighted sum of the translation
/// lengths of its components.
pub fn multicurve_length<S: Scalar>(
    curves: &[WeightedCurve<S>],
    cfg: &TorusConfig<S>,
) -> Result<S, IsometryError> {
    let mut total = S::zero();
    for c in curves {
        if c.weight > S::zero() {
            total = total + c.weight * translation_length(&cfg.pair.word_matrix(&c.word))?;
        }
    }
    Ok(total)
}
