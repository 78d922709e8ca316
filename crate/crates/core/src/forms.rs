//! Group families, their fixed Gram matrices and the multiplier.
//!
//! Rows and columns are addressed by signed labels. Storage order is
//!
//! | family    | order                                 |
//! |-----------|---------------------------------------|
//! | `GL`      | `1, …, n`                             |
//! | `GSp`, `GOEven` | `1, …, l, -1, …, -l`            |
//! | `GOOdd`   | `0, 1, …, l, -1, …, -l`               |
//! | `GOMinus` | `1, -1, 2, …, l, -2, …, -l`           |
//!
//! [`GroupDescriptor::pos`] is the only place that converts a label to a
//! storage position.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::field::{Field, Scalar};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("invalid rank l = {0}")]
    InvalidRank(usize),
    #[error("not in group at ({row},{col})")]
    NotInGroup { row: i32, col: i32 },
    #[error("expected a {expected}x{expected} matrix, got {rows}x{cols}")]
    WrongSize { expected: usize, rows: usize, cols: usize },
    #[error("unknown group family {0:?}")]
    UnknownFamily(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `GL(l+1)`, the type `A_l` baseline.
    GL,
    /// Symplectic similitudes `GSp(2l)`.
    GSp,
    /// Split orthogonal similitudes `GO(2l)`.
    GOEven,
    /// Split orthogonal similitudes `GO(2l+1)`.
    GOOdd,
    /// Twisted orthogonal similitudes `GO⁻(2l, p)`.
    GOMinus,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::GL,
        Family::GSp,
        Family::GOEven,
        Family::GOOdd,
        Family::GOMinus,
    ];

    pub fn is_orthogonal(self) -> bool {
        matches!(self, Family::GOEven | Family::GOOdd | Family::GOMinus)
    }

    pub fn dimension(self, l: usize) -> usize {
        match self {
            Family::GL => l + 1,
            Family::GSp | Family::GOEven | Family::GOMinus => 2 * l,
            Family::GOOdd => 2 * l + 1,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::GL => "GL",
            Family::GSp => "GSp",
            Family::GOEven => "GOplus",
            Family::GOOdd => "GOodd",
            Family::GOMinus => "GOminus",
        })
    }
}

impl FromStr for Family {
    type Err = FormError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "GL" => Ok(Family::GL),
            "GSp" | "Sp" => Ok(Family::GSp),
            "GOplus" | "GOeven" | "O+" => Ok(Family::GOEven),
            "GOodd" | "O" => Ok(Family::GOOdd),
            "GOminus" | "O-" => Ok(Family::GOMinus),
            other => Err(FormError::UnknownFamily(other.to_string())),
        }
    }
}

/// A concrete group: family, rank, field, and the fixed form `β`.
///
/// `similitude = false` selects the isometry kernel of the multiplier
/// (`Sp`, `O`, `O⁻`). `GL` carries no form; its `beta` is the identity and
/// membership means invertibility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDescriptor {
    pub family: Family,
    pub l: usize,
    pub field: Field,
    pub similitude: bool,
    pub beta: Matrix,
    pub epsilon: Option<Scalar>,
    labels: Vec<i32>,
}

impl GroupDescriptor {
    pub fn new(family: Family, l: usize, field: Field, similitude: bool) -> Result<Self, FormError> {
        if l == 0 {
            return Err(FormError::InvalidRank(l));
        }
        let li = l as i32;
        let labels: Vec<i32> = match family {
            Family::GL => (1..=li + 1).collect(),
            Family::GSp | Family::GOEven => (1..=li).chain((1..=li).map(|i| -i)).collect(),
            Family::GOOdd => std::iter::once(0)
                .chain(1..=li)
                .chain((1..=li).map(|i| -i))
                .collect(),
            Family::GOMinus => [1, -1]
                .into_iter()
                .chain(2..=li)
                .chain((2..=li).map(|i| -i))
                .collect(),
        };
        let epsilon = match family {
            Family::GOMinus => Some(field.canonical_nonsquare().ok_or_else(|| {
                FormError::UnsupportedField("the twisted form needs a finite field".into())
            })?),
            _ => None,
        };
        let mut d = GroupDescriptor {
            family,
            l,
            field,
            similitude,
            beta: Matrix::identity(field, labels.len()),
            epsilon,
            labels,
        };
        d.beta = d.build_beta();
        Ok(d)
    }

    fn build_beta(&self) -> Matrix {
        let f = self.field;
        let n = self.n();
        let mut b = Matrix::zeros(f, n, n);
        let li = self.l as i32;
        match self.family {
            Family::GL => return Matrix::identity(f, n),
            Family::GSp => {
                for i in 1..=li {
                    b[(self.pos(i), self.pos(-i))] = f.one();
                    b[(self.pos(-i), self.pos(i))] = -f.one();
                }
            }
            Family::GOEven | Family::GOOdd => {
                if self.family == Family::GOOdd {
                    b[(0, 0)] = f.from_i64(2);
                }
                for i in 1..=li {
                    b[(self.pos(i), self.pos(-i))] = f.one();
                    b[(self.pos(-i), self.pos(i))] = f.one();
                }
            }
            Family::GOMinus => {
                b[(self.pos(1), self.pos(1))] = f.one();
                b[(self.pos(-1), self.pos(-1))] = self.epsilon().clone();
                for i in 2..=li {
                    b[(self.pos(i), self.pos(-i))] = f.one();
                    b[(self.pos(-i), self.pos(i))] = f.one();
                }
            }
        }
        b
    }

    pub fn n(&self) -> usize {
        self.family.dimension(self.l)
    }

    /// The fixed non-square of the twisted form. Panics for other families.
    pub fn epsilon(&self) -> &Scalar {
        self.epsilon.as_ref().expect("only the twisted family has ε")
    }

    /// Storage position of a signed label. Panics on labels outside the family.
    pub fn pos(&self, label: i32) -> usize {
        self.labels
            .iter()
            .position(|&x| x == label)
            .unwrap_or_else(|| panic!("label {label} is not used by {} l={}", self.family, self.l))
    }

    pub fn has_label(&self, label: i32) -> bool {
        self.labels.contains(&label)
    }

    /// Signed label at a storage position.
    pub fn label(&self, pos: usize) -> i32 {
        self.labels[pos]
    }

    pub fn labels(&self) -> &[i32] {
        &self.labels
    }

    /// Positive labels of the `l×l` (or `(l-1)×(l-1)` twisted) block `A`.
    pub fn block_labels(&self) -> Vec<i32> {
        let li = self.l as i32;
        match self.family {
            Family::GL => (1..=li + 1).collect(),
            Family::GOMinus => (2..=li).collect(),
            _ => (1..=li).collect(),
        }
    }

    pub fn identity(&self) -> Matrix {
        Matrix::identity(self.field, self.n())
    }

    /// The matrix unit `e_{a,b}` scaled by `t`.
    pub fn unit(&self, a: i32, b: i32, t: &Scalar) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.n(), self.n());
        m[(self.pos(a), self.pos(b))] = t.clone();
        m
    }

    /// `μ(g)` with `ᵀg β g = μ β`.
    ///
    /// `μ` is read off the first nonzero entry of `β` and then checked
    /// entrywise; the first failing position is returned as the witness.
    pub fn multiplier(&self, g: &Matrix) -> Result<Scalar, FormError> {
        let n = self.n();
        if g.rows() != n || g.cols() != n {
            return Err(FormError::WrongSize { expected: n, rows: g.rows(), cols: g.cols() });
        }
        if self.family == Family::GL {
            return match g.determinant() {
                Ok(det) if !det.is_zero() => Ok(self.field.one()),
                _ => Err(FormError::NotInGroup { row: self.label(0), col: self.label(0) }),
            };
        }
        let gram = &(&g.transpose() * &self.beta) * g;
        let (i0, j0) = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| !self.beta[(i, j)].is_zero())
            .expect("β is nondegenerate");
        let mu = gram[(i0, j0)].checked_div(&self.beta[(i0, j0)]).expect("β entry is nonzero");
        let witness = |i: usize, j: usize| FormError::NotInGroup { row: self.label(i), col: self.label(j) };
        if mu.is_zero() {
            return Err(witness(i0, j0));
        }
        for i in 0..n {
            for j in 0..n {
                if gram[(i, j)] != &mu * &self.beta[(i, j)] {
                    return Err(witness(i, j));
                }
            }
        }
        Ok(mu)
    }

    /// Membership check returning `μ`; isometry descriptors require `μ = 1`.
    pub fn check_member(&self, g: &Matrix) -> Result<Scalar, FormError> {
        let mu = self.multiplier(g)?;
        if !self.similitude && !mu.is_one() {
            let n = self.n();
            let gram = &(&g.transpose() * &self.beta) * g;
            let (i, j) = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .find(|&(i, j)| gram[(i, j)] != self.beta[(i, j)])
                .expect("μ ≠ 1 changes some entry");
            return Err(FormError::NotInGroup { row: self.label(i), col: self.label(j) });
        }
        Ok(mu)
    }

    pub fn is_member(&self, g: &Matrix) -> bool {
        self.check_member(g).is_ok()
    }

    /// Same family, rank and field, restricted to the isometry kernel.
    pub fn isometries(&self) -> GroupDescriptor {
        GroupDescriptor { similitude: false, ..self.clone() }
    }

    /// Same family, rank and field, full similitude group.
    pub fn similitudes(&self) -> GroupDescriptor {
        GroupDescriptor { similitude: true, ..self.clone() }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "group={} l={} field={} similitude={}",
            self.family,
            self.l,
            self.field,
            u8::from(self.similitude)
        )
    }
}
