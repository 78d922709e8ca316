//! Spinor norms of orthogonal isometries.
//!
//! Three independent computations of `Θ : O(β) → k^×/k^×²`:
//! [`spinor_norm`] reads it off the elimination, [`wall_spinor_norm`] takes
//! the discriminant of Wall's form on `(I − g)V`, and
//! [`reflection_factorization`] multiplies `β(v, v)/2` over reflections.

use thiserror::Error;

use crate::eliminate::{decompose, ElimError, Terminal};
use crate::field::{FieldError, Scalar, SquareClass};
use crate::forms::{Family, FormError, GroupDescriptor};
use crate::generators::Token;
use crate::matrix::{bilinear, Matrix, MatrixError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpinorError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Elimination(#[from] ElimError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("spinor norms need an orthogonal family, not {0}")]
    NotOrthogonalFamily(Family),
    #[error("spinor norms are defined on isometries; multiplier is {0}")]
    Similitude(String),
    #[error("no reflection factorization found")]
    NoFactorization,
}

/// Wall's form on `V_g`: `gram[i][j] = β(u_i, y_j)` with `(I − g) y_j = u_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallForm {
    pub basis: Vec<Vec<Scalar>>,
    pub preimages: Vec<Vec<Scalar>>,
    pub gram: Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReflectionFactorization {
    /// `g = ρ(v₁) ⋯ ρ(v_m)`.
    pub vectors: Vec<Vec<Scalar>>,
    pub norm: SquareClass,
}

fn check(g: &Matrix, d: &GroupDescriptor) -> Result<GroupDescriptor, SpinorError> {
    if !d.family.is_orthogonal() {
        return Err(SpinorError::NotOrthogonalFamily(d.family));
    }
    let iso = d.isometries();
    iso.check_member(g)?;
    Ok(iso)
}

fn class(x: &Scalar) -> Result<SquareClass, SpinorError> {
    Ok(x.square_class()?)
}

/// Wall's form for `g`, built on the pivot columns of `I − g`.
pub fn wall_form(g: &Matrix, d: &GroupDescriptor) -> Result<WallForm, SpinorError> {
    check(g, d)?;
    let gt = d.identity().sub(g);
    let (_, pivots) = gt.rref();
    let basis: Vec<Vec<Scalar>> = pivots.iter().map(|&c| gt.column(c)).collect();
    let preimages = basis.iter().map(|u| gt.solve(u)).collect::<Result<Vec<_>, _>>()?;
    let m = basis.len();
    let rows = (0..m)
        .map(|i| (0..m).map(|j| bilinear(&d.beta, &basis[i], &preimages[j])).collect())
        .collect();
    let gram = Matrix::from_rows(d.field, rows)?;
    Ok(WallForm { basis, preimages, gram })
}

pub fn wall_spinor_norm(g: &Matrix, d: &GroupDescriptor) -> Result<SquareClass, SpinorError> {
    let w = wall_form(g, d)?;
    if w.basis.is_empty() {
        return Ok(SquareClass::trivial(d.field));
    }
    class(&w.gram.determinant()?)
}

/// `Θ` of a single token of an isometry group.
pub fn token_spinor_norm(tok: &Token, d: &GroupDescriptor) -> Result<SquareClass, SpinorError> {
    let f = d.field;
    let half_eps = || d.epsilon().checked_div(&f.from_i64(2));
    match tok {
        Token::X1 { t, .. } if t.is_one() => Ok(class(&half_eps()?)?),
        Token::X1 { t, .. } => class(&(f.one() - t)),
        Token::X2 => class(&half_eps()?),
        Token::Torus { lambda, mu, .. } if mu.is_one() => class(lambda),
        Token::Torus { mu, .. } => Err(SpinorError::Similitude(mu.to_string())),
        Token::X { .. } | Token::W(_) => Ok(SquareClass::trivial(f)),
    }
}

/// `Θ(g)` from the elimination: `class(λ)` for split families, and for
/// `GOminus` the product of the token norms over both words and the
/// terminal block.
pub fn spinor_norm(g: &Matrix, d: &GroupDescriptor) -> Result<SquareClass, SpinorError> {
    let iso = check(g, d)?;
    let dec = decompose(g, &iso)?;
    let mut theta = class(&dec.lambda)?;
    if iso.family != Family::GOMinus {
        return Ok(theta);
    }
    for tok in dec.left.tokens().iter().chain(dec.right.tokens()) {
        theta = theta.mul(&token_spinor_norm(tok, &iso)?);
    }
    if let Terminal::TwistedReflection { t, s } = dec.terminal {
        theta = theta.mul(&token_spinor_norm(&Token::X1 { t, s }, &iso)?);
    }
    Ok(theta)
}

/// `ρ_v(x) = x − 2 β(v, x)/β(v, v) · v` as a matrix.
pub fn reflection(v: &[Scalar], d: &GroupDescriptor) -> Result<Matrix, SpinorError> {
    let f = d.field;
    let n = d.n();
    let q = bilinear(&d.beta, v, v);
    let bv = d.beta.mul_vec(v);
    let c = f.from_i64(2).checked_div(&q)?;
    let mut m = d.identity();
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = &m[(i, j)] - &(&c * &(&v[i] * &bv[j]));
        }
    }
    Ok(m)
}

fn unit(d: &GroupDescriptor, k: usize) -> Vec<Scalar> {
    let mut v = vec![d.field.zero(); d.n()];
    v[k] = d.field.one();
    v
}

/// `e_a` and `e_a + c·e_b`; a quadratic form vanishing on the `c = 1` ones vanishes.
fn probes(d: &GroupDescriptor) -> Vec<Vec<Scalar>> {
    let n = d.n();
    let f = d.field;
    let mut out: Vec<Vec<Scalar>> = (0..n).map(|k| unit(d, k)).collect();
    for c in [1, -1, 2] {
        for a in 0..n {
            for b in 0..n {
                if a < b || (c != 1 && a != b) {
                    let mut v = unit(d, a);
                    v[b] = f.from_i64(c);
                    out.push(v);
                }
            }
        }
    }
    out
}

/// Anisotropic vectors `(h − I)x` over the probes.
fn moving_vectors<'a>(h: &'a Matrix, d: &'a GroupDescriptor) -> impl Iterator<Item = Vec<Scalar>> + 'a {
    let ht = h.sub(&d.identity());
    probes(d)
        .into_iter()
        .map(move |x| ht.mul_vec(&x))
        .filter(|v| !bilinear(&d.beta, v, v).is_zero())
}

/// Whether `h` is the identity or can still be reduced without a detour.
fn reducible(h: &Matrix, d: &GroupDescriptor) -> bool {
    h.is_identity() || moving_vectors(h, d).next().is_some()
}

/// Writes `g` as a product of reflections.
///
/// Each step reflects by an anisotropic `v = hx − x`; `ρ_v h` then fixes `x`
/// and everything `h` fixed. Among such `v` one is preferred whose result is
/// not stuck with a totally isotropic `(h − I)V`; if `h` itself is stuck an
/// extra reflection is spent first.
pub fn reflection_factorization(g: &Matrix, d: &GroupDescriptor) -> Result<ReflectionFactorization, SpinorError> {
    let iso = check(g, d)?;
    let d = &iso;
    let n = d.n();
    let two = d.field.from_i64(2);
    let mut h = g.clone();
    let mut vectors: Vec<Vec<Scalar>> = Vec::new();
    while !h.is_identity() {
        if vectors.len() > n + 2 {
            return Err(SpinorError::NoFactorization);
        }
        let candidates: Vec<Vec<Scalar>> = match moving_vectors(&h, d).next() {
            Some(_) => moving_vectors(&h, d).collect(),
            None => probes(d).into_iter().filter(|w| !bilinear(&d.beta, w, w).is_zero()).collect(),
        };
        let mut chosen = None;
        for v in &candidates {
            let next = &reflection(v, d)? * &h;
            if reducible(&next, d) {
                chosen = Some((v.clone(), next));
                break;
            }
        }
        let (v, next) = match chosen {
            Some(c) => c,
            None => {
                let v = candidates.first().ok_or(SpinorError::NoFactorization)?.clone();
                let next = &reflection(&v, d)? * &h;
                (v, next)
            }
        };
        h = next;
        vectors.push(v);
    }
    let mut norm = SquareClass::trivial(d.field);
    for v in &vectors {
        norm = norm.mul(&class(&bilinear(&d.beta, v, v).checked_div(&two)?)?);
    }
    Ok(ReflectionFactorization { vectors, norm })
}

/// `det g = 1` and `Θ(g)` trivial.
pub fn in_commutator_subgroup(g: &Matrix, d: &GroupDescriptor) -> Result<bool, SpinorError> {
    check(g, d)?;
    Ok(g.determinant()?.is_one() && spinor_norm(g, d)?.is_square())
}
