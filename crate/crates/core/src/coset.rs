//! Double cosets of the Siegel parabolic `P`, the stabilizer of `⟨e₁, …, e_l⟩`.
//!
//! [`coset_label`] finds `m` with `g ∈ P ω_m P`, `ω_m = w₁ ⋯ w_m`, together
//! with words `L`, `R` in `P` such that `L · g · R ∈ ω_m P`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::field::Scalar;
use crate::forms::{Family, FormError, GroupDescriptor};
use crate::generators::{derived_w, GenError, Kind, Token, Word};
use crate::harness::Enumeration;
use crate::matrix::Matrix;
use crate::rowops::{apply_in_place, Side};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CosetError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Generator(#[from] GenError),
    #[error("double cosets are computed for GSp, GOplus and GOodd, not {0}")]
    UnsupportedFamily(Family),
    #[error("coset reduction did not reach ω·P:\n{0}")]
    Stuck(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetLabel {
    pub m: usize,
    pub omega: Matrix,
    pub left_witness: Word,
    pub right_witness: Word,
}

impl fmt::Display for CosetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "omega({})", self.m)
    }
}

fn check(g: &Matrix, d: &GroupDescriptor) -> Result<GroupDescriptor, CosetError> {
    if !matches!(d.family, Family::GSp | Family::GOEven | Family::GOOdd) {
        return Err(CosetError::UnsupportedFamily(d.family));
    }
    let iso = d.isometries();
    iso.check_member(g)?;
    Ok(iso)
}

/// Columns `1..l` of `g` stay inside `⟨e₁, …, e_l⟩`.
pub fn is_in_parabolic(g: &Matrix, d: &GroupDescriptor) -> Result<bool, CosetError> {
    let d = check(g, d)?;
    let l = d.l as i32;
    Ok(d.labels()
        .iter()
        .copied()
        .filter(|&r| r <= 0)
        .all(|r| (1..=l).all(|c| g[(d.pos(r), d.pos(c))].is_zero())))
}

/// Tokens whose matrices lie in `P`.
pub fn is_parabolic_token(tok: &Token, d: &GroupDescriptor) -> bool {
    matches!(tok.kind(d), Ok(Kind::XijT | Kind::XiNegJ | Kind::XiNegI | Kind::Xi0))
}

/// `ω_m = w₁ ⋯ w_m`.
pub fn omega(m: usize, d: &GroupDescriptor) -> Result<Matrix, CosetError> {
    let mut w = Word::new();
    for i in 1..=m as i32 {
        w.extend(derived_w(i, d)?);
    }
    Ok(w.evaluate(d)?)
}

struct Reducer<'a> {
    d: &'a GroupDescriptor,
    h: Matrix,
    /// Left multipliers, most recent first.
    left: Vec<Token>,
    right: Vec<Token>,
}

impl Reducer<'_> {
    fn at(&self, a: i32, b: i32) -> &Scalar {
        &self.h[(self.d.pos(a), self.d.pos(b))]
    }

    fn apply(&mut self, tok: Token, side: Side) -> Result<(), CosetError> {
        debug_assert!(is_parabolic_token(&tok, self.d), "{tok}");
        apply_in_place(&mut self.h, &tok, side, self.d)?;
        match side {
            Side::Left => self.left.insert(0, tok),
            Side::Right => self.right.push(tok),
        }
        Ok(())
    }

    /// row `-a` += s · row `-b`
    fn row_c(&mut self, a: i32, b: i32, s: Scalar) -> Result<(), CosetError> {
        self.apply(Token::x(b, a, -s), Side::Left)
    }

    /// col `a` += s · col `b`
    fn col_c(&mut self, a: i32, b: i32, s: Scalar) -> Result<(), CosetError> {
        self.apply(Token::x(b, a, s), Side::Right)
    }

    /// Brings `C` to `diag(c₁, …, c_r, 0, …, 0)` by Levi additions; returns `r`.
    fn diagonalize_c(&mut self) -> Result<usize, CosetError> {
        let l = self.d.l as i32;
        for k in 1..=l {
            let pivot = (k..=l).flat_map(|a| (k..=l).map(move |b| (a, b))).find(|&(a, b)| !self.at(-a, b).is_zero());
            let Some((a, b)) = pivot else { return Ok(k as usize - 1) };
            let one = self.d.field.one();
            if self.at(-a, k).is_zero() {
                self.col_c(k, b, one.clone())?;
            }
            if self.at(-k, k).is_zero() {
                self.row_c(k, a, one)?;
            }
            let c = self.at(-k, k).clone();
            for i in (1..=l).filter(|&i| i != k) {
                let r = self.at(-i, k).clone();
                if !r.is_zero() {
                    self.row_c(i, k, -(r.checked_div(&c).expect("pivot")))?;
                }
            }
            for j in (1..=l).filter(|&j| j != k) {
                let r = self.at(-k, j).clone();
                if !r.is_zero() {
                    self.col_c(j, k, -(r.checked_div(&c).expect("pivot")))?;
                }
            }
        }
        Ok(self.d.l)
    }

    /// Odd family: row 0 against the pivots of `C`.
    fn clear_x(&mut self, r: usize) -> Result<(), CosetError> {
        for j in 1..=r as i32 {
            let x = self.at(0, j).clone();
            if !x.is_zero() {
                let t = x.checked_div(self.at(-j, j)).expect("pivot");
                self.apply(Token::x(j, 0, t), Side::Left)?;
            }
        }
        Ok(())
    }

    /// Zeroes rows `1..r` of `A` with `x[i,-j]`, using the pivot rows of `C`.
    fn clear_a(&mut self, r: usize) -> Result<(), CosetError> {
        let r = r as i32;
        let sp = self.d.family == Family::GSp;
        for i in 1..=r {
            for j in i..=r {
                if i == j && !sp {
                    continue;
                }
                let a = self.at(i, j).clone();
                if !a.is_zero() {
                    let t = -(a.checked_div(self.at(-j, j)).expect("pivot"));
                    self.apply(Token::x(i, -j, t), Side::Left)?;
                }
            }
        }
        Ok(())
    }
}

pub fn coset_label(g: &Matrix, d: &GroupDescriptor) -> Result<CosetLabel, CosetError> {
    let iso = check(g, d)?;
    let mut red = Reducer { d: &iso, h: g.clone(), left: Vec::new(), right: Vec::new() };
    let m = red.diagonalize_c()?;
    if iso.family == Family::GOOdd {
        red.clear_x(m)?;
    }
    red.clear_a(m)?;
    let omega = omega(m, &iso)?;
    let back = omega.inverse().expect("ω is invertible");
    if !is_in_parabolic(&(&back * &red.h), &iso)? {
        return Err(CosetError::Stuck(red.h.to_string()));
    }
    Ok(CosetLabel { m, omega, left_witness: Word(red.left), right_witness: Word(red.right) })
}

/// Element count per label `m`.
pub fn coset_census(d: &GroupDescriptor, e: &Enumeration) -> Result<BTreeMap<usize, usize>, CosetError> {
    let mut out = BTreeMap::new();
    for g in &e.elements {
        *out.entry(coset_label(g, d)?.m).or_insert(0) += 1;
    }
    Ok(out)
}
