//! Gaussian elimination in similitude groups.
//!
//! [`decompose`] writes `g = L · D · R` with `L`, `R` words in elementary
//! tokens and `D` the canonical diagonal
//! `diag(α, 1, …, 1, λ, μ, …, μ, μ/λ)` of the family.
//!
//! Internally the algorithm multiplies `g` by tokens on both sides until it
//! reaches `D`; `L` and `R` collect the inverses of those multipliers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::Scalar;
use crate::forms::{Family, FormError, GroupDescriptor};
use crate::generators::{canonical_rotation, derived_h, derived_w, rotation_word, torus_matrix, GenError, Token, Word};
use crate::matrix::{Matrix, MatrixError};
use crate::rowops::{apply_in_place, Side};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElimError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Generator(#[from] GenError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("elimination left {0} instead of the canonical diagonal")]
    Stuck(String),
}

/// Callback for [`decompose_observed`].
pub type Observer<'o> = &'o mut dyn FnMut(Phase, &Matrix);

/// Boundaries at which an observer sees the working matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    /// Block `A` is `diag(1, …, 1, λ)` or `diag(1, …, 1, 0, …, 0)`.
    Diagonalize,
    /// Odd and twisted families: `X` (and `E` where it is cleared) zero on the pivots.
    ClearXE,
    /// Lower-left block `C` is zero, `A` is again diagonal of full rank.
    ClearC,
    /// Upper-right block `B` is zero.
    ClearB,
    /// Torus normalization finished; the matrix equals `D`.
    Torus,
}

/// How the twisted algorithm ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Terminal {
    /// `D` is a torus element.
    Diagonal,
    /// Stopped with the reflection-like block `[[t, εs], [s, -t]]` on labels ±1.
    TwistedReflection { t: Scalar, s: Scalar },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub left: Word,
    pub right: Word,
    pub diagonal: Matrix,
    pub alpha: Option<Scalar>,
    pub lambda: Scalar,
    pub mu: Scalar,
    pub op_count: usize,
    pub terminal: Terminal,
}

impl Decomposition {
    /// `L · D · R`.
    pub fn reassemble(&self, d: &GroupDescriptor) -> Result<Matrix, GenError> {
        let l = self.left.evaluate(d)?;
        let r = self.right.evaluate(d)?;
        Ok(&(&l * &self.diagonal) * &r)
    }
}

struct Eliminator<'a, 'o> {
    d: &'a GroupDescriptor,
    h: Matrix,
    lm: Vec<Token>,
    rm: Vec<Token>,
    observer: Option<Observer<'o>>,
}

impl<'a, 'o> Eliminator<'a, 'o> {
    fn at(&self, a: i32, b: i32) -> &Scalar {
        &self.h[(self.d.pos(a), self.d.pos(b))]
    }

    fn left(&mut self, tok: Token) -> Result<(), GenError> {
        apply_in_place(&mut self.h, &tok, Side::Left, self.d)?;
        self.lm.push(tok);
        Ok(())
    }

    fn right(&mut self, tok: Token) -> Result<(), GenError> {
        apply_in_place(&mut self.h, &tok, Side::Right, self.d)?;
        self.rm.push(tok);
        Ok(())
    }

    /// `h ← w · h`, so the last token acts first.
    fn left_word(&mut self, w: Word) -> Result<(), GenError> {
        w.0.into_iter().rev().try_for_each(|t| self.left(t))
    }

    fn emit(&mut self, phase: Phase) {
        if let Some(obs) = self.observer.as_mut() {
            obs(phase, &self.h);
        }
    }

    /// `row a += t · row b` inside the `A` block (with its paired row outside).
    fn row_op(&mut self, a: i32, b: i32, t: Scalar) -> Result<(), GenError> {
        if t.is_zero() {
            return Ok(());
        }
        self.left(Token::x(a, b, t))
    }

    /// `col b += t · col a` inside the `A` block.
    fn col_op(&mut self, a: i32, b: i32, t: Scalar) -> Result<(), GenError> {
        if t.is_zero() {
            return Ok(());
        }
        self.right(Token::x(a, b, t))
    }

    /// Classical elimination of the square block on `labels` to
    /// `diag(1, …, 1, λ)` or `diag(1, …, 1, 0, …, 0)`; returns the rank.
    ///
    /// Pivot: first nonzero entry scanning columns left to right and rows
    /// top to bottom inside each column.
    fn diagonalize(&mut self, labels: &[i32]) -> Result<usize, GenError> {
        let n = labels.len();
        let one = self.d.field.one();
        for k in 0..n {
            let lk = labels[k];
            let pivot = (k..n)
                .flat_map(|c| (k..n).map(move |r| (r, c)))
                .find(|&(r, c)| !self.at(labels[r], labels[c]).is_zero());
            let Some((r, c)) = pivot else { return Ok(k) };
            if c != k {
                // column k is zero below row k, so this cannot cancel
                self.col_op(labels[c], lk, one.clone())?;
            }
            if r != k {
                let t = (&one - self.at(lk, lk)).checked_div(self.at(labels[r], lk)).expect("pivot");
                self.row_op(lk, labels[r], t)?;
            } else if !self.at(lk, lk).is_one() && k + 1 < n {
                let lk1 = labels[k + 1];
                let a = self.at(lk, lk).clone();
                let t = (&one - self.at(lk1, lk)).checked_div(&a).expect("pivot");
                self.row_op(lk1, lk, t)?;
                self.row_op(lk, lk1, &one - &a)?;
            }
            let p = self.at(lk, lk).clone();
            for &lr in &labels[k + 1..] {
                let t = -self.at(lr, lk).checked_div(&p).expect("pivot");
                self.row_op(lr, lk, t)?;
            }
            for &lc in &labels[k + 1..] {
                let t = -self.at(lk, lc).checked_div(&p).expect("pivot");
                self.col_op(lk, lc, t)?;
            }
        }
        Ok(n)
    }

    /// Left tokens `x[-i,j]` (and `x[-i,i]` in GSp) adding `R · A` to `C`,
    /// with `R = -C A⁻¹` restricted to `labels`.
    fn clear_c(&mut self, labels: &[i32]) -> Result<(), GenError> {
        let sp = self.d.family == Family::GSp;
        let mut toks = Vec::new();
        for (x, &i) in labels.iter().enumerate() {
            for &j in &labels[x..] {
                if i == j && !sp {
                    continue;
                }
                let r = -self.at(-i, j).checked_div(self.at(j, j)).expect("diagonal pivot");
                if !r.is_zero() {
                    toks.push(Token::x(-i, j, r));
                }
            }
        }
        toks.into_iter().try_for_each(|t| self.left(t))
    }

    /// Left tokens `x[i,-j]` (and `x[i,-i]` in GSp) with `R = -μ⁻¹ B A`.
    fn clear_b(&mut self, labels: &[i32]) -> Result<(), GenError> {
        let sp = self.d.family == Family::GSp;
        let mut toks = Vec::new();
        for (x, &i) in labels.iter().enumerate() {
            for &j in &labels[x..] {
                if i == j && !sp {
                    continue;
                }
                // row -j restricted to the B columns is (μ/a_j) e_{-j}
                let r = -self.at(i, -j).checked_div(self.at(-j, -j)).expect("diagonal pivot");
                if !r.is_zero() {
                    toks.push(Token::x(i, -j, r));
                }
            }
        }
        toks.into_iter().try_for_each(|t| self.left(t))
    }

    /// Swap `i ↔ -i` for every block label whose diagonal entry vanished.
    fn interchange(&mut self, labels: &[i32], m: usize) -> Result<(), GenError> {
        for &i in &labels[m..] {
            let w = derived_w(i, self.d)?;
            self.left_word(w)?;
        }
        Ok(())
    }

    fn finish(self, diagonal: Matrix, alpha: Option<Scalar>, lambda: Scalar, mu: Scalar, terminal: Terminal) -> Result<Decomposition, ElimError> {
        if self.h != diagonal {
            return Err(ElimError::Stuck(format!("\n{}", self.h)));
        }
        let left: Word = self.lm.iter().flat_map(|t| t.inverse(self.d).0).collect();
        let right: Word = self.rm.iter().rev().flat_map(|t| t.inverse(self.d).0).collect();
        let op_count = self.lm.len() + self.rm.len();
        Ok(Decomposition { left, right, diagonal, alpha, lambda, mu, op_count, terminal })
    }
}

/// Decomposes a member of `GSp`, `GOplus`, `GOodd` or `GOminus`.
pub fn decompose(g: &Matrix, d: &GroupDescriptor) -> Result<Decomposition, ElimError> {
    decompose_observed(g, d, None)
}

/// [`decompose`] with a callback invoked at every [`Phase`] boundary.
pub fn decompose_observed(
    g: &Matrix,
    d: &GroupDescriptor,
    observer: Option<Observer<'_>>,
) -> Result<Decomposition, ElimError> {
    if d.family == Family::GL {
        return decompose_gl(g, d);
    }
    let mu = d.check_member(g)?;
    let mut e = Eliminator { d, h: g.clone(), lm: Vec::new(), rm: Vec::new(), observer };
    match d.family {
        Family::GSp | Family::GOEven => split_even(&mut e, mu),
        Family::GOOdd => odd(&mut e, mu),
        Family::GOMinus => twisted(&mut e, mu),
        Family::GL => unreachable!(),
    }
}

fn lambda_of(e: &Eliminator, labels: &[i32]) -> Scalar {
    labels.last().map(|&l| e.at(l, l).clone()).unwrap_or_else(|| e.d.field.one())
}

fn split_even(e: &mut Eliminator, mu: Scalar) -> Result<Decomposition, ElimError> {
    let d = e.d;
    let labels = d.block_labels();
    let l = labels.len();
    let m = e.diagonalize(&labels)?;
    e.emit(Phase::Diagonalize);
    if m == l {
        e.clear_c(&labels)?;
    } else {
        e.clear_c(&labels[..m])?;
        e.interchange(&labels, m)?;
        let full = e.diagonalize(&labels)?;
        if full != l {
            return Err(ElimError::Stuck(format!("rank {full} after interchange\n{}", e.h)));
        }
    }
    e.emit(Phase::ClearC);
    e.clear_b(&labels)?;
    e.emit(Phase::ClearB);
    let mut lambda = lambda_of(e, &labels);
    if d.family == Family::GSp && !lambda.is_one() {
        e.left_word(derived_h(&lambda.inv().expect("λ ≠ 0"), d)?)?;
        lambda = d.field.one();
    }
    e.emit(Phase::Torus);
    let diag = torus_matrix(d, None, &lambda, &mu);
    take(e).finish(diag, None, lambda, mu, Terminal::Diagonal)
}

/// Clears `X` on the pivots with left `x[0,i]`, then `E` with right `x[i,0]`.
fn odd_clear_xe(e: &mut Eliminator, labels: &[i32], clear_x: bool) -> Result<(), GenError> {
    let two = e.d.field.from_i64(2);
    for &i in labels {
        let a = e.at(i, i).clone();
        if clear_x && !e.at(0, i).is_zero() {
            let t = -e.at(0, i).checked_div(&a).expect("pivot");
            e.left(Token::x(0, i, t))?;
        }
        if !e.at(i, 0).is_zero() {
            let t = -e.at(i, 0).checked_div(&(&two * &a)).expect("pivot");
            e.right(Token::x(i, 0, t))?;
        }
    }
    Ok(())
}

fn odd(e: &mut Eliminator, mu: Scalar) -> Result<Decomposition, ElimError> {
    let d = e.d;
    let labels = d.block_labels();
    let l = labels.len();
    let m = e.diagonalize(&labels)?;
    e.emit(Phase::Diagonalize);
    odd_clear_xe(e, &labels[..m], true)?;
    e.emit(Phase::ClearXE);
    if m == l {
        e.clear_c(&labels)?;
    } else {
        e.clear_c(&labels[..m])?;
        e.interchange(&labels, m)?;
        let full = e.diagonalize(&labels)?;
        if full != l {
            return Err(ElimError::Stuck(format!("rank {full} after interchange\n{}", e.h)));
        }
        // X vanishes once C does; E still needs clearing
        odd_clear_xe(e, &labels, false)?;
    }
    e.emit(Phase::ClearC);
    e.clear_b(&labels)?;
    e.emit(Phase::ClearB);
    let lambda = lambda_of(e, &labels);
    let alpha = e.at(0, 0).clone();
    e.emit(Phase::Torus);
    let diag = torus_matrix(d, Some(&alpha), &lambda, &mu);
    take(e).finish(diag, Some(alpha), lambda, mu, Terminal::Diagonal)
}

/// Clears `X` on the pivots with left `x[i,1]`, `x[i,-1]`.
fn twisted_clear_x(e: &mut Eliminator, labels: &[i32]) -> Result<(), GenError> {
    let two = e.d.field.from_i64(2);
    for &i in labels {
        let a2 = &two * e.at(i, i);
        for k in [1, -1] {
            if !e.at(k, i).is_zero() {
                let t = -e.at(k, i).checked_div(&a2).expect("pivot");
                e.left(Token::x(i, k, t))?;
            }
        }
    }
    Ok(())
}

/// Clears `E` with right `x[1,i]`, `x[-1,i]`.
fn twisted_clear_e(e: &mut Eliminator, labels: &[i32]) -> Result<(), GenError> {
    let two = e.d.field.from_i64(2);
    let eps = e.d.epsilon().clone();
    for &i in labels {
        let a2 = &two * e.at(i, i);
        if !e.at(i, 1).is_zero() {
            let t = -e.at(i, 1).checked_div(&a2).expect("pivot");
            e.right(Token::x(1, i, t))?;
        }
        if !e.at(i, -1).is_zero() {
            let t = -e.at(i, -1).checked_div(&(&eps * &a2)).expect("pivot");
            e.right(Token::x(-1, i, t))?;
        }
    }
    Ok(())
}

fn twisted(e: &mut Eliminator, mu: Scalar) -> Result<Decomposition, ElimError> {
    let d = e.d;
    let labels = d.block_labels();
    let l = labels.len();
    let m = e.diagonalize(&labels)?;
    e.emit(Phase::Diagonalize);
    twisted_clear_x(e, &labels[..m])?;
    e.emit(Phase::ClearXE);
    if m == l {
        e.clear_c(&labels)?;
    } else {
        e.clear_c(&labels[..m])?;
        e.interchange(&labels, m)?;
        let mut m = e.diagonalize(&labels)?;
        // When -ε is a square, diag(1, ε) is isotropic and A can stay
        // singular here. With C = 0 the form forces X to be nonzero on
        // every non-pivot column, so x[±1,i] lifts such a column into the
        // zero row i and the rank grows.
        while m < l {
            let i = labels[m];
            let j = labels[m..]
                .iter()
                .copied()
                .find(|&j| !e.at(1, j).is_zero() || !e.at(-1, j).is_zero())
                .ok_or_else(|| ElimError::Stuck(format!("no pivot to lift\n{}", e.h)))?;
            let k = if e.at(1, j).is_zero() { -1 } else { 1 };
            e.left(Token::x(k, i, d.field.one()))?;
            let grown = e.diagonalize(&labels)?;
            if grown <= m {
                return Err(ElimError::Stuck(format!("rank {grown} after lifting\n{}", e.h)));
            }
            m = grown;
        }
        // no-ops for an anisotropic β0
        twisted_clear_x(e, &labels)?;
        e.clear_c(&labels)?;
    }
    twisted_clear_e(e, &labels)?;
    e.emit(Phase::ClearC);
    e.clear_b(&labels)?;
    e.emit(Phase::ClearB);
    let lambda = lambda_of(e, &labels);
    let a0 = e.h.block(&[0, 1], &[0, 1]);
    let det = a0.determinant()?;
    let terminal = if det == -&mu {
        Terminal::TwistedReflection { t: a0[(0, 0)].clone(), s: a0[(1, 0)].clone() }
    } else {
        // rotation-like: A0 = R_μ · x2 · x1(c, -d); left x2 then x1 leaves R_μ
        let r = canonical_rotation(d, &mu);
        let q = &r.inverse()? * &a0;
        for tok in rotation_word(&q[(0, 0)], &q[(1, 0)]) {
            e.left(tok)?;
        }
        Terminal::Diagonal
    };
    e.emit(Phase::Torus);
    let mut diag = torus_matrix(d, None, &lambda, &mu);
    if let Terminal::TwistedReflection { .. } = terminal {
        diag.assign_block(&[0, 1], &[0, 1], &a0);
    }
    take(e).finish(diag, None, lambda, mu, terminal)
}

fn take<'a, 'o>(e: &mut Eliminator<'a, 'o>) -> Eliminator<'a, 'o> {
    Eliminator {
        d: e.d,
        h: std::mem::replace(&mut e.h, Matrix::zeros(e.d.field, 0, 0)),
        lm: std::mem::take(&mut e.lm),
        rm: std::mem::take(&mut e.rm),
        observer: None,
    }
}

/// Transvection elimination in `GL(n)`: `g = L · diag(1, …, 1, det g) · R`.
pub fn decompose_gl(g: &Matrix, d: &GroupDescriptor) -> Result<Decomposition, ElimError> {
    let n = d.n();
    if g.rows() != n || g.cols() != n {
        return Err(FormError::WrongSize { expected: n, rows: g.rows(), cols: g.cols() }.into());
    }
    let det = g.determinant()?;
    if det.is_zero() {
        return Err(MatrixError::SingularMatrix.into());
    }
    let mut e = Eliminator { d, h: g.clone(), lm: Vec::new(), rm: Vec::new(), observer: None };
    let labels: Vec<i32> = (1..=n as i32).collect();
    e.diagonalize(&labels)?;
    let one = d.field.one();
    let diag = torus_matrix(d, None, &det, &one);
    e.finish(diag, None, det, one, Terminal::Diagonal)
}

/// Op counts of [`decompose`] over random members.
#[derive(Debug, Clone, PartialEq)]
pub struct WordLengthReport {
    pub family: Family,
    pub l: usize,
    pub trials: usize,
    pub max_ops: usize,
    pub mean_ops: f64,
    pub bound: usize,
}

impl WordLengthReport {
    pub fn within_bound(&self) -> bool {
        self.max_ops <= self.bound
    }
}

/// The regression bound `40 l³ + 60`.
pub fn word_length_bound(l: usize) -> usize {
    40 * l * l * l + 60
}

pub fn word_length_stats(d: &GroupDescriptor, trials: usize, seed: u64) -> Result<WordLengthReport, ElimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_ops = 0;
    let mut total = 0;
    for _ in 0..trials {
        let g = crate::harness::random_member_with(d, &mut rng, 4 * d.n() * d.n(), true);
        let dec = decompose(&g, d)?;
        max_ops = max_ops.max(dec.op_count);
        total += dec.op_count;
    }
    Ok(WordLengthReport {
        family: d.family,
        l: d.l,
        trials,
        max_ops,
        mean_ops: if trials == 0 { 0.0 } else { total as f64 / trials as f64 },
        bound: word_length_bound(d.l),
    })
}
