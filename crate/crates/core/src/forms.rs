//! Linear forms with coefficients in Q[w], the equation parser, and
//! specialization to a fixed parameter value.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exact::{Matrix, Poly, Rational};

pub const VARIABLES: [char; 4] = ['x', 'y', 'z', 't'];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormsError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("factor starting at byte {pos} is not linear in x,y,z,t")]
    NonLinearFactor { pos: usize },
    #[error("factors {0} and {1} are proportional")]
    DuplicateFactor(usize, usize),
    #[error("factor {0} is identically zero")]
    ZeroForm(usize),
    #[error("form {0} vanishes identically at this parameter value")]
    FormVanishes(usize),
    #[error("expected between 1 and 8 forms, got {0}")]
    FormCount(usize),
    #[error("invalid JSON arrangement: {0}")]
    Json(String),
}

/// A linear form c_x x + c_y y + c_z z + c_t t with c_i in Q[w].
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinearForm {
    pub coeffs: [Poly; 4],
}

impl LinearForm {
    pub fn new(coeffs: [Poly; 4]) -> Self {
        LinearForm { coeffs }
    }

    pub fn constant(c: [i64; 4]) -> Self {
        LinearForm { coeffs: c.map(|v| Poly::from_ints(&[v])) }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    pub fn eval(&self, w0: &Rational) -> [Rational; 4] {
        [0, 1, 2, 3].map(|i| self.coeffs[i].eval(w0))
    }

    /// Substitute `v = M v'`: the new coefficient row is `c M`.
    pub fn transform(&self, m: &Matrix<Rational>) -> LinearForm {
        let coeffs = [0, 1, 2, 3].map(|j| {
            (0..4).fold(Poly::zero(), |acc, i| &acc + &self.coeffs[i].scale(m.get(i, j)))
        });
        LinearForm { coeffs }
    }

    /// True when the two forms are proportional over Q(w).
    pub fn proportional_to(&self, o: &LinearForm) -> bool {
        (0..4).all(|i| {
            (i + 1..4).all(|j| {
                (&(&self.coeffs[i] * &o.coeffs[j]) - &(&self.coeffs[j] * &o.coeffs[i])).is_zero()
            })
        })
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(bool, String)> = vec![];
        for (v, c) in VARIABLES.iter().zip(&self.coeffs) {
            for (k, a) in c.coeffs().iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let mut s = String::new();
                let abs = a.abs();
                if !abs.is_one() {
                    s.push_str(&format!("{abs}*"));
                }
                match k {
                    0 => {}
                    1 => s.push_str("w*"),
                    _ => s.push_str(&format!("w^{k}*")),
                }
                s.push(*v);
                terms.push((a.is_negative(), s));
            }
        }
        if terms.len() == 1 && !terms[0].0 {
            return f.write_str(&terms[0].1);
        }
        f.write_str("(")?;
        for (i, (neg, s)) in terms.iter().enumerate() {
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            f.write_str(s)?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A family of planes parameterized by w.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ParamArrangement {
    pub forms: Vec<LinearForm>,
}

impl ParamArrangement {
    /// Validates the form count, nonzero forms and pairwise non-proportionality.
    pub fn new(forms: Vec<LinearForm>) -> Result<Self, FormsError> {
        if forms.is_empty() || forms.len() > 8 {
            return Err(FormsError::FormCount(forms.len()));
        }
        for (i, f) in forms.iter().enumerate() {
            if f.is_zero() {
                return Err(FormsError::ZeroForm(i));
            }
        }
        for i in 0..forms.len() {
            for j in i + 1..forms.len() {
                if forms[i].proportional_to(&forms[j]) {
                    return Err(FormsError::DuplicateFactor(i, j));
                }
            }
        }
        Ok(ParamArrangement { forms })
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// True when no coefficient depends on w.
    pub fn is_constant(&self) -> bool {
        self.forms.iter().all(|f| f.coeffs.iter().all(Poly::is_constant))
    }

    pub fn from_json(text: &str) -> Result<Self, FormsError> {
        #[derive(Deserialize)]
        struct Raw {
            forms: Vec<LinearForm>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| FormsError::Json(e.to_string()))?;
        ParamArrangement::new(raw.forms)
    }

    pub fn specialize(&self, w0: &Rational) -> Result<Arrangement, FormsError> {
        let mut forms = Vec::with_capacity(self.forms.len());
        for (i, f) in self.forms.iter().enumerate() {
            let v = f.eval(w0);
            if v.iter().all(Rational::is_zero) {
                return Err(FormsError::FormVanishes(i));
            }
            forms.push(v);
        }
        Ok(Arrangement { forms })
    }

    pub fn transform(&self, m: &Matrix<Rational>) -> ParamArrangement {
        ParamArrangement { forms: self.forms.iter().map(|f| f.transform(m)).collect() }
    }

    /// Indices of forms whose zero set in P^3 x A^1 is not a hyperplane in
    /// the affine chart t = 1, i.e. w multiplies x, y or z, or w^2 appears.
    pub fn nonlinear_components(&self) -> Vec<usize> {
        self.forms
            .iter()
            .enumerate()
            .filter(|(_, f)| {
                f.coeffs[..3].iter().any(|c| c.degree().unwrap_or(0) > 0)
                    || f.coeffs[3].degree().unwrap_or(0) > 1
            })
            .map(|(i, _)| i)
            .collect()
    }
}

impl fmt::Display for ParamArrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.forms.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join("*"))
    }
}

/// A fixed arrangement with rational coefficients; may contain coincident planes.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Arrangement {
    pub forms: Vec<[Rational; 4]>,
}

impl Arrangement {
    pub fn from_ints(rows: &[[i64; 4]]) -> Self {
        Arrangement { forms: rows.iter().map(|r| r.map(Rational::from)).collect() }
    }

    /// Pairs of proportional forms.
    pub fn proportional_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = vec![];
        for i in 0..self.forms.len() {
            for j in i + 1..self.forms.len() {
                let m = Matrix::from_rows(vec![self.forms[i].to_vec(), self.forms[j].to_vec()]);
                if m.rank() < 2 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn to_param(&self) -> ParamArrangement {
        ParamArrangement {
            forms: self
                .forms
                .iter()
                .map(|r| LinearForm::new(r.clone().map(Poly::constant)))
                .collect(),
        }
    }
}

mod parser;
pub use parser::parse_equation;
