//! Elementary row and column operations.
//!
//! Each token is described by its update list: `(a, b, c)` means the
//! elementary operation `row a += c · row b` on the left and
//! `col b += c · col a` on the right, all reading the old matrix. The lists
//! are the operation tables, one arm per table row.

use crate::field::Scalar;
use crate::forms::{Family, GroupDescriptor};
use crate::generators::{canonical_rotation, GenError, Kind, Token};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `tok · g`, a row operation.
    Left,
    /// `g · tok`, a column operation.
    Right,
}

/// One replacement `new[target] = Σ coef · old[source]` over signed labels.
#[derive(Debug, Clone)]
enum Op {
    /// `row a += c · row b` (left) and `col b += c · col a` (right).
    Add(i32, i32, Scalar),
    /// Multiply the whole block on `labels` by a small matrix: rows
    /// `labels` become `m · rows` (left), columns become `cols · m` (right).
    Block(Vec<i32>, Matrix),
}

fn ops(tok: &Token, d: &GroupDescriptor) -> Result<Vec<Op>, GenError> {
    let kind = tok.kind(d)?;
    let f = d.field;
    let sp = d.family == Family::GSp;
    let add = |a: i32, b: i32, c: Scalar| Op::Add(a, b, c);
    let two = f.from_i64(2);
    Ok(match tok {
        Token::X { i, j, t } => {
            let (i, j) = (*i, *j);
            let t2 = t.square();
            match kind {
                // GL: i += t j
                Kind::XijT if d.family == Family::GL => vec![add(i, j, t.clone())],
                // i += t j, -j -= t (-i)
                Kind::XijT => vec![add(i, j, t.clone()), add(-j, -i, -t)],
                // i += t (-j), j ∓= t (-i)
                // -i += t j, -j ∓= t i
                Kind::XiNegJ | Kind::XNegIJ => {
                    vec![add(i, j, t.clone()), add(-j, -i, if sp { t.clone() } else { -t })]
                }
                // i += t (-i), -i += t i
                Kind::XiNegI | Kind::XNegII => vec![add(i, j, t.clone())],
                // 0 -= t (-i), i += 2t 0 - t² (-i)
                Kind::Xi0 => vec![add(0, -i, -t), add(i, 0, &two * t), add(i, -i, -t2)],
                // 0 += t j, -j += -2t 0 - t² j
                Kind::X0i => vec![add(0, j, t.clone()), add(-j, 0, -(&two * t)), add(-j, j, -t2)],
                // twisted: 1 -= 2t (-j), j += 2t 1 - 2t² (-j)
                Kind::X1i => vec![
                    add(1, -j, -(&two * t)),
                    add(j, 1, &two * t),
                    add(j, -j, -(&two * &t2)),
                ],
                // twisted: 1 += 2t i, -i += -2t 1 - 2t² i
                Kind::Xi1 => vec![
                    add(1, i, &two * t),
                    add(-i, 1, -(&two * t)),
                    add(-i, i, -(&two * &t2)),
                ],
                // twisted: -1 += 2t i, -i += -2εt (-1) - 2εt² i
                Kind::XiNeg1 => {
                    let e2 = &two * d.epsilon();
                    vec![add(-1, i, &two * t), add(-i, -1, -(&e2 * t)), add(-i, i, -(&e2 * &t2))]
                }
                // twisted: -1 -= 2t (-j), j += 2εt (-1) - 2εt² (-j)
                Kind::XNeg1i => {
                    let e2 = &two * d.epsilon();
                    vec![add(-1, -j, -(&two * t)), add(j, -1, &e2 * t), add(j, -j, -(&e2 * &t2))]
                }
                _ => unreachable!("root token"),
            }
        }
        // interchange i and -i, with sign -1
        Token::W(i) => vec![Op::Block(vec![*i, -*i], Matrix::from_i64(f, &[&[0, -1], &[-1, 0]]))],
        Token::X1 { t, s } => {
            let m = Matrix::from_rows(f, vec![vec![t.clone(), d.epsilon() * s], vec![s.clone(), -t]])
                .expect("2x2");
            vec![Op::Block(vec![1, -1], m)]
        }
        Token::X2 => vec![Op::Block(vec![-1], Matrix::from_i64(f, &[&[-1]]))],
        Token::Torus { alpha, lambda, mu } => {
            let l = d.l as i32;
            let scale = |k: i32, c: Scalar| Op::Block(vec![k], Matrix::diagonal(f, &[c]));
            let mut v = Vec::new();
            if d.family == Family::GL {
                return Ok(vec![scale(l + 1, lambda.clone())]);
            }
            let lo = if d.family == Family::GOMinus { 2 } else { 1 };
            for k in lo..l {
                v.push(scale(-k, mu.clone()));
            }
            if l >= lo {
                v.push(scale(l, lambda.clone()));
                v.push(scale(-l, mu.checked_div(lambda)?));
            }
            if let Some(a) = alpha {
                v.push(scale(0, a.clone()));
            }
            if d.family == Family::GOMinus {
                v.push(Op::Block(vec![1, -1], canonical_rotation(d, mu)));
            }
            v
        }
    })
}

/// `tok · g` or `g · tok`, computed by the row or column operations of `tok`.
pub fn apply(g: &Matrix, tok: &Token, side: Side, d: &GroupDescriptor) -> Result<Matrix, GenError> {
    let mut out = g.clone();
    apply_in_place(&mut out, tok, side, d)?;
    Ok(out)
}

/// In-place variant of [`apply`].
pub fn apply_in_place(g: &mut Matrix, tok: &Token, side: Side, d: &GroupDescriptor) -> Result<(), GenError> {
    let ops = ops(tok, d)?;
    let n = d.n();
    // every op of a token reads the pre-image, so snapshot the touched lines first
    let old = g.clone();
    let line = |m: &Matrix, k: usize| -> Vec<Scalar> {
        match side {
            Side::Left => m.row(k).to_vec(),
            Side::Right => m.column(k),
        }
    };
    let write = |m: &mut Matrix, k: usize, v: Vec<Scalar>| match side {
        Side::Left => m.set_row(k, v),
        Side::Right => m.set_column(k, v),
    };
    for op in ops {
        match op {
            Op::Add(a, b, c) => {
                let (target, source) = match side {
                    Side::Left => (d.pos(a), d.pos(b)),
                    Side::Right => (d.pos(b), d.pos(a)),
                };
                let src = line(&old, source);
                let mut cur = line(g, target);
                for (x, y) in cur.iter_mut().zip(&src) {
                    if !y.is_zero() {
                        *x = &*x + &(&c * y);
                    }
                }
                write(g, target, cur);
            }
            Op::Block(labels, m) => {
                let pos: Vec<usize> = labels.iter().map(|&k| d.pos(k)).collect();
                let src: Vec<Vec<Scalar>> = pos.iter().map(|&p| line(&old, p)).collect();
                for (r, &p) in pos.iter().enumerate() {
                    let mut v = vec![d.field.zero(); n];
                    for (c, s) in src.iter().enumerate() {
                        // left: new_r = Σ m[r][c] old_c; right: new_col_r = Σ old_col_c m[c][r]
                        let coef = match side {
                            Side::Left => &m[(r, c)],
                            Side::Right => &m[(c, r)],
                        };
                        if coef.is_zero() {
                            continue;
                        }
                        for (x, y) in v.iter_mut().zip(s) {
                            *x = &*x + &(coef * y);
                        }
                    }
                    write(g, p, v);
                }
            }
        }
    }
    Ok(())
}
