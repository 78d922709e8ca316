//! Random members and exhaustive enumeration of tiny groups.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{Field, Scalar};
use crate::forms::{Family, GroupDescriptor};
use crate::generators::{all_tokens, unit_circle, Token, Word};
use crate::matrix::Matrix;
use crate::rowops::{apply_in_place, Side};

pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("enumeration exceeds the cap of {0} elements")]
    EnumerationTooLarge(usize),
    #[error("enumeration needs a finite field")]
    InfiniteField,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    BruteForce,
    GeneratorClosure,
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub descriptor: GroupDescriptor,
    pub elements: Vec<Matrix>,
    pub method: Method,
}

/// A uniformly chosen nonzero scalar; over `Q` a small fraction `±a/b`.
pub fn random_nonzero<R: Rng>(f: Field, rng: &mut R) -> Scalar {
    match f.order() {
        Some(p) => f.from_i64(rng.gen_range(1..p) as i64),
        None => {
            let num = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
            f.from_ratio(num, rng.gen_range(1..=4)).expect("nonzero denominator")
        }
    }
}

/// A random legal token (never a torus).
pub fn random_token<R: Rng>(d: &GroupDescriptor, rng: &mut R) -> Token {
    let t = random_nonzero(d.field, rng);
    let mut shapes = all_tokens(d, &t);
    if d.family == Family::GOMinus {
        // stand-in for x1, resolved below to a random point of the circle
        shapes.push(Token::X1 { t: d.field.one(), s: d.field.zero() });
    }
    let tok = shapes.choose(rng).expect("every family has tokens").clone();
    if let Token::X1 { .. } = tok {
        return unit_circle(d).choose(rng).expect("circle is nonempty").clone();
    }
    tok
}

/// A random torus element of the group (`μ = 1` for isometry descriptors).
pub fn random_torus<R: Rng>(d: &GroupDescriptor, rng: &mut R) -> Token {
    let f = d.field;
    let lambda = random_nonzero(f, rng);
    match d.family {
        Family::GL => Token::torus(None, lambda, f.one()),
        Family::GOOdd => {
            let alpha = if d.similitude {
                random_nonzero(f, rng)
            } else if rng.gen_bool(0.5) {
                f.one()
            } else {
                -f.one()
            };
            let mu = alpha.square();
            Token::torus(Some(alpha), lambda, mu)
        }
        _ => {
            let mu = if d.similitude { random_nonzero(f, rng) } else { f.one() };
            Token::torus(None, lambda, mu)
        }
    }
}

pub fn random_word<R: Rng>(d: &GroupDescriptor, rng: &mut R, len: usize) -> Word {
    (0..len).map(|_| random_token(d, rng)).collect()
}

/// Product of `len` random tokens, times a random torus element when `torus` is set.
pub fn random_member_with<R: Rng>(d: &GroupDescriptor, rng: &mut R, len: usize, torus: bool) -> Matrix {
    let mut w = random_word(d, rng, len);
    if torus {
        let t = random_torus(d, rng);
        let k = rng.gen_range(0..=w.len());
        w.0.insert(k, t);
    }
    w.evaluate(d).expect("random tokens are legal")
}

/// Deterministic per `seed`.
pub fn random_member(d: &GroupDescriptor, seed: u64, word_len: usize, torus: bool) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_member_with(d, &mut rng, word_len, torus)
}

/// Every token with every nonzero parameter, plus every torus element of the group.
pub fn generating_set(d: &GroupDescriptor) -> Result<Vec<Token>, HarnessError> {
    let f = d.field;
    if !f.is_finite() {
        return Err(HarnessError::InfiniteField);
    }
    let mut gens: Vec<Token> = Vec::new();
    for t in f.nonzero_elements() {
        for tok in all_tokens(d, &t) {
            if !gens.contains(&tok) {
                gens.push(tok);
            }
        }
    }
    if d.family == Family::GOMinus {
        gens.extend(unit_circle(d));
    }
    let mus: Vec<Scalar> = if d.similitude { f.nonzero_elements().collect() } else { vec![f.one()] };
    for lambda in f.nonzero_elements() {
        match d.family {
            Family::GL => gens.push(Token::torus(None, lambda.clone(), f.one())),
            Family::GOOdd => {
                for alpha in f.nonzero_elements() {
                    let mu = alpha.square();
                    if mus.contains(&mu) {
                        gens.push(Token::torus(Some(alpha), lambda.clone(), mu));
                    }
                }
            }
            _ => {
                for mu in &mus {
                    gens.push(Token::torus(None, lambda.clone(), mu.clone()));
                }
            }
        }
    }
    Ok(gens)
}

pub fn enumerate(d: &GroupDescriptor, method: Method, cap: usize) -> Result<Enumeration, HarnessError> {
    let elements = match method {
        Method::BruteForce => brute_force(d, cap)?,
        Method::GeneratorClosure => closure(d, cap)?,
    };
    Ok(Enumeration { descriptor: d.clone(), elements, method })
}

fn brute_force(d: &GroupDescriptor, cap: usize) -> Result<Vec<Matrix>, HarnessError> {
    let f = d.field;
    let p = f.order().ok_or(HarnessError::InfiniteField)? as usize;
    let n = d.n();
    let cells = n * n;
    let total = (0..cells).try_fold(1usize, |acc, _| acc.checked_mul(p).filter(|&v| v <= cap));
    let Some(total) = total else { return Err(HarnessError::EnumerationTooLarge(cap)) };
    let elems: Vec<Scalar> = f.elements().collect();
    let mut out = Vec::new();
    let mut digits = vec![0usize; cells];
    for _ in 0..total {
        let rows = (0..n).map(|i| (0..n).map(|j| elems[digits[i * n + j]].clone()).collect()).collect();
        let g = Matrix::from_rows(f, rows).expect("square");
        if d.is_member(&g) {
            out.push(g);
        }
        for x in digits.iter_mut() {
            *x += 1;
            if *x < p {
                break;
            }
            *x = 0;
        }
    }
    Ok(out)
}

fn closure(d: &GroupDescriptor, cap: usize) -> Result<Vec<Matrix>, HarnessError> {
    let gens = generating_set(d)?;
    let mut seen: HashSet<Matrix> = HashSet::new();
    let mut out = vec![d.identity()];
    seen.insert(d.identity());
    let mut k = 0;
    while k < out.len() {
        let g = out[k].clone();
        k += 1;
        for t in &gens {
            let mut h = g.clone();
            apply_in_place(&mut h, t, Side::Right, d).expect("generators are legal");
            if seen.insert(h.clone()) {
                if out.len() >= cap {
                    return Err(HarnessError::EnumerationTooLarge(cap));
                }
                out.push(h);
            }
        }
    }
    Ok(out)
}
