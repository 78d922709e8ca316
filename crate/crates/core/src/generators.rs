//! Steinberg elementary matrices as symbolic tokens.
//!
//! Token grammar (whitespace separated in a [`Word`]):
//!
//! ```text
//! x[i,j](t)        root element, signed labels
//! w[i]             Weyl-type involution on the pair i, -i
//! x1(t,s)          twisted block [[t, εs], [s, -t]]
//! x2               I - 2 e_{-1,-1}
//! torus(α;λ;μ)     diag(α, 1, …, 1, λ, μ, …, μ, μ/λ); α is empty outside GOodd
//! ```

use std::fmt;

use thiserror::Error;

use crate::field::{Field, FieldError, Scalar};
use crate::forms::{Family, GroupDescriptor};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("illegal token {token} for {family}: {reason}")]
    IllegalToken { token: String, family: Family, reason: String },
    #[error("cannot parse token {0:?}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Classification of a token against a family, mirroring the generator lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    XijT,
    XiNegJ,
    XNegIJ,
    XiNegI,
    XNegII,
    Xi0,
    X0i,
    Xi1,
    X1i,
    XiNeg1,
    XNeg1i,
    Wl,
    Wi,
    X1ts,
    X2,
    Torus,
}

impl Kind {
    /// One-parameter unipotent kinds, i.e. `x(t)x(s) = x(t+s)`.
    pub fn is_unipotent(self) -> bool {
        !matches!(self, Kind::Wl | Kind::Wi | Kind::X1ts | Kind::X2 | Kind::Torus)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Token {
    X { i: i32, j: i32, t: Scalar },
    W(i32),
    X1 { t: Scalar, s: Scalar },
    X2,
    Torus { alpha: Option<Scalar>, lambda: Scalar, mu: Scalar },
}

impl Token {
    pub fn x(i: i32, j: i32, t: Scalar) -> Token {
        Token::X { i, j, t }
    }

    /// Root element with the pair rewritten into the listed normal form
    /// (`x[i,-j]` and `x[-i,j]` need `i < j`).
    pub fn root(d: &GroupDescriptor, i: i32, j: i32, t: Scalar) -> Token {
        let sp = d.family == Family::GSp;
        if i > 0 && j < 0 && i > -j {
            return Token::x(-j, -i, if sp { t } else { -t });
        }
        if i < 0 && j > 0 && -i > j {
            return Token::x(-j, -i, if sp { t } else { -t });
        }
        Token::x(i, j, t)
    }

    pub fn torus(alpha: Option<Scalar>, lambda: Scalar, mu: Scalar) -> Token {
        Token::Torus { alpha, lambda, mu }
    }

    fn illegal(&self, d: &GroupDescriptor, reason: &str) -> GenError {
        GenError::IllegalToken {
            token: self.to_string(),
            family: d.family,
            reason: reason.to_string(),
        }
    }

    /// Classifies the token for `d`, rejecting anything outside the family's list.
    pub fn kind(&self, d: &GroupDescriptor) -> Result<Kind, GenError> {
        let fam = d.family;
        let l = d.l as i32;
        let check_field = |s: &Scalar| s.field() == d.field;
        match self {
            Token::X { i, j, t } => {
                if !check_field(t) {
                    return Err(self.illegal(d, "parameter in the wrong field"));
                }
                let (i, j) = (*i, *j);
                if fam == Family::GL {
                    let n = l + 1;
                    return if i != j && (1..=n).contains(&i) && (1..=n).contains(&j) {
                        Ok(Kind::XijT)
                    } else {
                        Err(self.illegal(d, "transvections need 1 <= i != j <= n"))
                    };
                }
                let lo = if fam == Family::GOMinus { 2 } else { 1 };
                let core = |k: i32| (lo..=l).contains(&k.abs());
                if core(i) && core(j) {
                    return match (i > 0, j > 0) {
                        (true, true) if i != j => Ok(Kind::XijT),
                        (true, false) if i < -j => Ok(Kind::XiNegJ),
                        (false, true) if -i < j => Ok(Kind::XNegIJ),
                        (true, false) if i == -j && fam == Family::GSp => Ok(Kind::XiNegI),
                        (false, true) if -i == j && fam == Family::GSp => Ok(Kind::XNegII),
                        (true, false) | (false, true) if i.abs() > j.abs() => {
                            Err(self.illegal(d, "write x[i,-j] and x[-i,j] with i < j"))
                        }
                        _ => Err(self.illegal(d, "no such root element")),
                    };
                }
                match fam {
                    Family::GOOdd if i == 0 && (1..=l).contains(&j) => Ok(Kind::X0i),
                    Family::GOOdd if j == 0 && (1..=l).contains(&i) => Ok(Kind::Xi0),
                    Family::GOMinus if (2..=l).contains(&i) && j == 1 => Ok(Kind::Xi1),
                    Family::GOMinus if i == 1 && (2..=l).contains(&j) => Ok(Kind::X1i),
                    Family::GOMinus if (2..=l).contains(&i) && j == -1 => Ok(Kind::XiNeg1),
                    Family::GOMinus if i == -1 && (2..=l).contains(&j) => Ok(Kind::XNeg1i),
                    _ => Err(self.illegal(d, "index out of range")),
                }
            }
            Token::W(i) => match fam {
                Family::GOEven | Family::GOOdd if *i == l => Ok(Kind::Wl),
                Family::GOMinus if (2..=l).contains(i) => Ok(Kind::Wi),
                _ => Err(self.illegal(d, "no such Weyl element")),
            },
            Token::X1 { t, s } => {
                if fam != Family::GOMinus {
                    return Err(self.illegal(d, "x1 exists only in the twisted family"));
                }
                if !check_field(t) || !check_field(s) {
                    return Err(self.illegal(d, "parameter in the wrong field"));
                }
                if !(t.square() + d.epsilon() * &s.square()).is_one() {
                    return Err(self.illegal(d, "x1(t,s) needs t^2 + εs^2 = 1"));
                }
                Ok(Kind::X1ts)
            }
            Token::X2 if fam == Family::GOMinus => Ok(Kind::X2),
            Token::X2 => Err(self.illegal(d, "x2 exists only in the twisted family")),
            Token::Torus { alpha, lambda, mu } => {
                if ![lambda, mu].into_iter().chain(alpha.iter()).all(check_field) {
                    return Err(self.illegal(d, "parameter in the wrong field"));
                }
                if lambda.is_zero() || mu.is_zero() {
                    return Err(self.illegal(d, "λ and μ must be nonzero"));
                }
                match (fam, alpha) {
                    (Family::GOOdd, Some(a)) if a.square() == *mu => Ok(Kind::Torus),
                    (Family::GOOdd, _) => Err(self.illegal(d, "needs α with α^2 = μ")),
                    (Family::GL, None) if mu.is_one() => Ok(Kind::Torus),
                    (Family::GL, _) => Err(self.illegal(d, "GL torus is torus(;λ;1)")),
                    (_, None) => Ok(Kind::Torus),
                    (_, Some(_)) => Err(self.illegal(d, "α only appears in GOodd")),
                }
            }
        }
    }

    /// The explicit matrix of the token.
    pub fn matrix(&self, d: &GroupDescriptor) -> Result<Matrix, GenError> {
        let kind = self.kind(d)?;
        let f = d.field;
        let mut m = d.identity();
        let mut add = |a: i32, b: i32, c: Scalar| {
            let (p, q) = (d.pos(a), d.pos(b));
            m[(p, q)] = &m[(p, q)] + &c;
        };
        let two = f.from_i64(2);
        match self {
            Token::X { i, j, t } => {
                let (i, j) = (*i, *j);
                match kind {
                    Kind::XijT if d.family == Family::GL => add(i, j, t.clone()),
                    Kind::XijT => {
                        add(i, j, t.clone());
                        add(-j, -i, -t);
                    }
                    Kind::XiNegJ | Kind::XNegIJ => {
                        let sign = if d.family == Family::GSp { t.clone() } else { -t };
                        add(i, j, t.clone());
                        add(-j, -i, sign);
                    }
                    Kind::XiNegI | Kind::XNegII => add(i, j, t.clone()),
                    Kind::Xi0 => {
                        add(i, 0, &two * t);
                        add(0, -i, -t);
                        add(i, -i, -t.square());
                    }
                    Kind::X0i => {
                        add(-j, 0, -(&two * t));
                        add(0, j, t.clone());
                        add(-j, j, -t.square());
                    }
                    _ => {
                        for (a, b, c) in twisted_entries(kind, i, j, t, d) {
                            add(a, b, c);
                        }
                    }
                }
            }
            Token::W(i) => {
                let i = *i;
                for (a, b, c) in [(i, i, -1), (-i, -i, -1), (i, -i, -1), (-i, i, -1)] {
                    add(a, b, f.from_i64(c));
                }
            }
            Token::X1 { t, s } => {
                add(1, 1, t - &f.one());
                add(-1, -1, -(t + &f.one()));
                add(-1, 1, s.clone());
                add(1, -1, d.epsilon() * s);
            }
            Token::X2 => add(-1, -1, -two),
            Token::Torus { alpha, lambda, mu } => return Ok(torus_matrix(d, alpha.as_ref(), lambda, mu)),
        }
        Ok(m)
    }

    /// `tok⁻¹` as a word. Every token but a twisted torus inverts to a single token.
    pub fn inverse(&self, d: &GroupDescriptor) -> Word {
        match self {
            Token::X { i, j, t } => Word(vec![Token::x(*i, *j, -t)]),
            Token::W(_) | Token::X1 { .. } | Token::X2 => Word(vec![self.clone()]),
            Token::Torus { alpha, lambda, mu } => {
                let inv = |s: &Scalar| s.inv().expect("torus parameters are nonzero");
                let t = Token::torus(alpha.as_ref().map(inv), inv(lambda), inv(mu));
                if d.family != Family::GOMinus || mu.is_one() {
                    return Word(vec![t]);
                }
                // the twisted block R_μ does not invert to R_{1/μ}; fix by a rotation
                let r = canonical_rotation(d, mu);
                let r_inv = canonical_rotation(d, &inv(mu));
                let q = &r_inv.inverse().expect("rotation") * &r.inverse().expect("rotation");
                let mut w = vec![t];
                w.extend(rotation_word(&q[(0, 0)], &q[(1, 0)]));
                Word(w)
            }
        }
    }
}

/// Matrix entries of the four twisted root elements through labels ±1.
fn twisted_entries(kind: Kind, i: i32, j: i32, t: &Scalar, d: &GroupDescriptor) -> Vec<(i32, i32, Scalar)> {
    let f = d.field;
    let eps = d.epsilon();
    let two_t = &f.from_i64(2) * t;
    let two_t2 = &f.from_i64(2) * &t.square();
    match kind {
        Kind::X1i => vec![(j, 1, two_t.clone()), (1, -j, -two_t), (j, -j, -two_t2)],
        Kind::Xi1 => vec![(-i, 1, -two_t.clone()), (1, i, two_t), (-i, i, -two_t2)],
        Kind::XiNeg1 => vec![
            (-i, -1, -(eps * &two_t)),
            (-1, i, two_t),
            (-i, i, -(eps * &two_t2)),
        ],
        Kind::XNeg1i => vec![
            (j, -1, eps * &two_t),
            (-1, -j, -two_t),
            (j, -j, -(eps * &two_t2)),
        ],
        _ => unreachable!("not a twisted root kind"),
    }
}

/// `diag(α, 1, …, 1, λ, μ, …, μ, μ/λ)` laid out for the family.
///
/// The twisted torus carries the canonical rotation block `R_μ` on labels ±1,
/// and `GL` puts `λ` in the last position.
pub fn torus_matrix(d: &GroupDescriptor, alpha: Option<&Scalar>, lambda: &Scalar, mu: &Scalar) -> Matrix {
    let f = d.field;
    let l = d.l as i32;
    let mut m = d.identity();
    if d.family == Family::GL {
        let n = d.n() - 1;
        m[(n, n)] = lambda.clone();
        return m;
    }
    let lo = if d.family == Family::GOMinus { 2 } else { 1 };
    for i in lo..=l {
        m[(d.pos(-i), d.pos(-i))] = mu.clone();
    }
    if l >= lo {
        m[(d.pos(l), d.pos(l))] = lambda.clone();
        m[(d.pos(-l), d.pos(-l))] = mu.checked_div(lambda).expect("λ ≠ 0");
    }
    match d.family {
        Family::GOOdd => m[(0, 0)] = alpha.cloned().unwrap_or_else(|| f.one()),
        Family::GOMinus => {
            let r = canonical_rotation(d, mu);
            for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                m[(a, b)] = r[(a, b)].clone();
            }
        }
        _ => {}
    }
    m
}

/// `R_μ = [[a, -εb], [b, a]]` for the first `(a, b)` with `a² + εb² = μ`,
/// scanning `b = 0, 1, …` and within each `b` the residues `a = 0, 1, …`.
pub fn canonical_rotation(d: &GroupDescriptor, mu: &Scalar) -> Matrix {
    let f = d.field;
    let eps = d.epsilon();
    for b in f.elements() {
        for a in f.elements() {
            if a.square() + eps * &b.square() == *mu {
                return Matrix::from_rows(f, vec![vec![a.clone(), -(eps * &b)], vec![b.clone(), a]])
                    .expect("2x2");
            }
        }
    }
    unreachable!("every element of a finite field is a norm from the quadratic extension")
}

/// Word for the rotation `[[c, -εd], [d, c]]` with `c² + εd² = 1`, namely `x2 · x1(c, -d)`.
pub fn rotation_word(c: &Scalar, s: &Scalar) -> Vec<Token> {
    if c.is_one() && s.is_zero() {
        return Vec::new();
    }
    vec![Token::X2, Token::X1 { t: c.clone(), s: -s }]
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::X { i, j, t } => write!(f, "x[{i},{j}]({t})"),
            Token::W(i) => write!(f, "w[{i}]"),
            Token::X1 { t, s } => write!(f, "x1({t},{s})"),
            Token::X2 => write!(f, "x2"),
            Token::Torus { alpha, lambda, mu } => {
                let a = alpha.as_ref().map(|a| a.to_string()).unwrap_or_default();
                write!(f, "torus({a};{lambda};{mu})")
            }
        }
    }
}

impl Token {
    pub fn parse(s: &str, field: Field) -> Result<Token, GenError> {
        let bad = || GenError::Parse(s.to_string());
        let scalar = |x: &str| field.parse(x.trim()).map_err(GenError::from);
        let int = |x: &str| x.trim().parse::<i32>().map_err(|_| bad());
        if s == "x2" {
            return Ok(Token::X2);
        }
        if let Some(rest) = s.strip_prefix("w[") {
            return Ok(Token::W(int(rest.strip_suffix(']').ok_or_else(bad)?)?));
        }
        if let Some(rest) = s.strip_prefix("x1(") {
            let (t, u) = rest.strip_suffix(')').and_then(|r| r.split_once(',')).ok_or_else(bad)?;
            return Ok(Token::X1 { t: scalar(t)?, s: scalar(u)? });
        }
        if let Some(rest) = s.strip_prefix("torus(") {
            let parts: Vec<&str> = rest.strip_suffix(')').ok_or_else(bad)?.split(';').collect();
            let [a, lam, mu] = parts[..] else { return Err(bad()) };
            let alpha = if a.trim().is_empty() { None } else { Some(scalar(a)?) };
            return Ok(Token::torus(alpha, scalar(lam)?, scalar(mu)?));
        }
        if let Some(rest) = s.strip_prefix("x[") {
            let (idx, t) = rest.split_once("](").ok_or_else(bad)?;
            let (i, j) = idx.split_once(',').ok_or_else(bad)?;
            let t = t.strip_suffix(')').ok_or_else(bad)?;
            return Ok(Token::x(int(i)?, int(j)?, scalar(t)?));
        }
        Err(bad())
    }
}

/// An ordered product of tokens.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Token>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn tokens(&self) -> &[Token] {
        &self.0
    }

    pub fn push(&mut self, t: Token) {
        self.0.push(t);
    }

    pub fn extend(&mut self, w: Word) {
        self.0.extend(w.0);
    }

    /// Product of the token matrices, left to right.
    pub fn evaluate(&self, d: &GroupDescriptor) -> Result<Matrix, GenError> {
        let mut acc = d.identity();
        for t in &self.0 {
            acc = crate::rowops::apply(&acc, t, crate::rowops::Side::Right, d)?;
        }
        Ok(acc)
    }

    /// Reverse word of inverses.
    pub fn inverse(&self, d: &GroupDescriptor) -> Word {
        Word(self.0.iter().rev().flat_map(|t| t.inverse(d).0).collect())
    }

    pub fn parse(s: &str, field: Field) -> Result<Word, GenError> {
        s.split_whitespace().map(|t| Token::parse(t, field)).collect::<Result<_, _>>().map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, t) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromIterator<Token> for Word {
    fn from_iter<I: IntoIterator<Item = Token>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// Product of token matrices by explicit multiplication.
pub fn evaluate_by_product(w: &Word, d: &GroupDescriptor) -> Result<Matrix, GenError> {
    let mut acc = d.identity();
    for t in w.tokens() {
        acc = &acc * &t.matrix(d)?;
    }
    Ok(acc)
}

/// A word for the interchange `w_{i,-i}` of rows `i` and `-i`.
///
/// * `GSp`: `x[i,-i](1) x[-i,i](-1) x[i,-i](1)`.
/// * `GOplus`: `w[l]` for `i = l`, else `w_l · w_{l,i} · w_{l,-i}` with
///   `w_{a,b} = x[a,b](1) x[b,a](-1) x[a,b](1)` and
///   `w_{l,-i} = x[l,-i](1) x[-l,i](1) x[l,-i](1)`.
/// * `GOodd`: `x[0,i](-1) x[i,0](1) x[0,i](-1)`, which also negates row 0.
/// * `GOminus`: `w[i]`.
pub fn derived_w(i: i32, d: &GroupDescriptor) -> Result<Word, GenError> {
    let f = d.field;
    let l = d.l as i32;
    let one = f.one();
    let m1 = -f.one();
    let w = match d.family {
        Family::GSp => Word(vec![
            Token::x(i, -i, one.clone()),
            Token::x(-i, i, m1),
            Token::x(i, -i, one),
        ]),
        Family::GOEven if i == l => Word(vec![Token::W(l)]),
        Family::GOEven => {
            let mut w = Word(vec![Token::W(l)]);
            w.extend(Word(vec![
                Token::x(l, i, one.clone()),
                Token::x(i, l, m1.clone()),
                Token::x(l, i, one.clone()),
            ]));
            w.extend(Word(vec![
                Token::root(d, l, -i, one.clone()),
                Token::root(d, -l, i, one.clone()),
                Token::root(d, l, -i, one),
            ]));
            w
        }
        Family::GOOdd => Word(vec![
            Token::x(0, i, m1.clone()),
            Token::x(i, 0, one),
            Token::x(0, i, m1),
        ]),
        Family::GOMinus => Word(vec![Token::W(i)]),
        Family::GL => {
            return Err(GenError::IllegalToken {
                token: format!("w[{i}]"),
                family: d.family,
                reason: "GL has no signed interchange".into(),
            })
        }
    };
    for t in w.tokens() {
        t.kind(d)?;
    }
    Ok(w)
}

/// `h_l(λ) = w_{l,-l}(λ) w_{l,-l}(-1)` with
/// `w_{l,-l}(t) = x[l,-l](t) x[-l,l](-1/t) x[l,-l](t)`; symplectic only.
pub fn derived_h(lambda: &Scalar, d: &GroupDescriptor) -> Result<Word, GenError> {
    if d.family != Family::GSp {
        return Err(GenError::IllegalToken {
            token: format!("h[{}]({lambda})", d.l),
            family: d.family,
            reason: "h_l is built for GSp only".into(),
        });
    }
    let l = d.l as i32;
    let wt = |t: Scalar| {
        let ti = t.inv().map_err(GenError::from)?;
        Ok::<_, GenError>(vec![Token::x(l, -l, t.clone()), Token::x(-l, l, -ti), Token::x(l, -l, t)])
    };
    let mut w = wt(lambda.clone())?;
    w.extend(wt(-d.field.one())?);
    Ok(Word(w))
}

/// Every legal token shape for `d` with parameter `t` (`x1` uses `(t, s)`
/// only when the pair lies on the unit norm circle, and is skipped otherwise).
pub fn all_tokens(d: &GroupDescriptor, t: &Scalar) -> Vec<Token> {
    let l = d.l as i32;
    let mut out = Vec::new();
    if d.family == Family::GL {
        for i in 1..=l + 1 {
            for j in 1..=l + 1 {
                if i != j {
                    out.push(Token::x(i, j, t.clone()));
                }
            }
        }
        return out;
    }
    let lo = if d.family == Family::GOMinus { 2 } else { 1 };
    for i in lo..=l {
        for j in lo..=l {
            if i != j {
                out.push(Token::x(i, j, t.clone()));
            }
            if i < j || (i == j && d.family == Family::GSp) {
                out.push(Token::x(i, -j, t.clone()));
                out.push(Token::x(-i, j, t.clone()));
            }
        }
    }
    match d.family {
        Family::GOEven => out.push(Token::W(l)),
        Family::GOOdd => {
            out.push(Token::W(l));
            for i in 1..=l {
                out.push(Token::x(i, 0, t.clone()));
                out.push(Token::x(0, i, t.clone()));
            }
        }
        Family::GOMinus => {
            for i in 2..=l {
                out.push(Token::W(i));
                out.push(Token::x(i, 1, t.clone()));
                out.push(Token::x(1, i, t.clone()));
                out.push(Token::x(i, -1, t.clone()));
                out.push(Token::x(-1, i, t.clone()));
            }
            out.push(Token::X2);
        }
        _ => {}
    }
    out
}

/// All `x1(t,s)` tokens, i.e. all points of `t² + εs² = 1`.
pub fn unit_circle(d: &GroupDescriptor) -> Vec<Token> {
    let f = d.field;
    let eps = d.epsilon();
    let mut out = Vec::new();
    for t in f.elements() {
        for s in f.elements() {
            if (t.square() + eps * &s.square()).is_one() {
                out.push(Token::X1 { t: t.clone(), s: s.clone() });
            }
        }
    }
    out
}
