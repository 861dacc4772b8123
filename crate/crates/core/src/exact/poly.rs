use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{ExactError, Rational};

/// Univariate polynomial over Q in the parameter `w`, coefficients in ascending degree.
///
/// The zero polynomial has an empty coefficient list; otherwise the last
/// coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl From<Vec<Rational>> for Poly {
    fn from(c: Vec<Rational>) -> Self {
        Poly::new(c)
    }
}

impl From<Poly> for Vec<Rational> {
    fn from(p: Poly) -> Self {
        p.coeffs
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `c * w^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k];
        v.push(c);
        Poly::new(v)
    }

    /// `w - r`.
    pub fn linear_root(r: &Rational) -> Self {
        Poly::new(vec![-r, Rational::one()])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| Rational::from(x)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.leading().recip())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Rational::from(k as i64))
                .collect(),
        )
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.coeffs.len() - 1;
        let lead_inv = d.leading().recip();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    r[k + i] = &r[k + i] - &(&c * dc);
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    /// Exact quotient; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Scale to an integer polynomial with coprime coefficients and positive leading term.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
        ints.iter().map(|c| c / &g * &sign).collect()
    }

    /// Text form in the parameter name `var`, highest degree first.
    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if mono.is_empty() {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{a}*{mono}"));
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("w"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Monic greatest common divisor.
pub fn poly_gcd(p: &Poly, q: &Poly) -> Result<Poly, ExactError> {
    if p.is_zero() && q.is_zero() {
        return Err(ExactError::BothZero);
    }
    let (mut a, mut b) = (p.clone(), q.clone());
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b);
        a = b;
        b = r;
    }
    Ok(a.monic())
}

/// Rational roots with multiplicities plus the rootless remainder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootDecomposition {
    pub roots: Vec<(Rational, u32)>,
    /// Square-free, pairwise coprime, monic factors without rational roots,
    /// each with the power to which it divides the input. Not necessarily irreducible.
    pub residual: Vec<(Poly, u32)>,
    pub leading: Rational,
}

impl RootDecomposition {
    /// Multiply everything back together.
    pub fn reassemble(&self) -> Poly {
        let mut acc = Poly::constant(self.leading.clone());
        for (r, m) in &self.roots {
            for _ in 0..*m {
                acc = &acc * &Poly::linear_root(r);
            }
        }
        for (f, m) in &self.residual {
            for _ in 0..*m {
                acc = &acc * f;
            }
        }
        acc
    }
}

fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = vec![];
    let mut large = vec![];
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Rational roots (candidates p/q over the primitive integer form) and
/// the square-free decomposition of what is left.
pub fn rational_roots(p: &Poly) -> Result<RootDecomposition, ExactError> {
    if p.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    let leading = p.leading();
    let mut rest = p.monic();
    let mut roots: Vec<(Rational, u32)> = vec![];

    let mut zero_mult = 0;
    while rest.coeff(0).is_zero() && !rest.is_constant() {
        rest = rest.div_exact(&Poly::linear_root(&Rational::zero())).unwrap();
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Rational::zero(), zero_mult));
    }

    if !rest.is_constant() {
        let ints = rest.primitive_integer();
        let nums = positive_divisors(&ints[0]);
        let dens = positive_divisors(ints.last().unwrap());
        let mut candidates: Vec<Rational> = vec![];
        for a in &nums {
            for b in &dens {
                for s in [1i64, -1] {
                    candidates.push(Rational::new(a * BigInt::from(s), b.clone()));
                }
            }
        }
        candidates.sort();
        candidates.dedup();
        for c in candidates {
            let lin = Poly::linear_root(&c);
            let mut m = 0;
            while let Some(q) = rest.div_exact(&lin) {
                rest = q;
                m += 1;
            }
            if m > 0 {
                roots.push((c, m));
            }
        }
    }
    roots.sort();

    let residual = square_free_parts(&rest);
    Ok(RootDecomposition { roots, residual, leading })
}

/// Yun's square-free factorisation of a monic polynomial; constant parts dropped.
fn square_free_parts(f: &Poly) -> Vec<(Poly, u32)> {
    if f.is_constant() {
        return vec![];
    }
    let fp = f.derivative();
    let a0 = poly_gcd(f, &fp).unwrap();
    let mut b = f.div_exact(&a0).unwrap();
    let mut c = fp.div_exact(&a0).unwrap();
    let mut d = &c - &b.derivative();
    let mut out = vec![];
    let mut i = 1;
    while !b.is_constant() {
        let a = poly_gcd(&b, &d).unwrap();
        if !a.is_constant() {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a).unwrap();
        c = d.div_exact(&a).unwrap();
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn roots_of_w_times_w_minus_one() {
        let d = rational_roots(&Poly::from_ints(&[0, -1, 1])).unwrap();
        assert_eq!(d.roots, vec![(r(0), 1), (r(1), 1)]);
        assert!(d.residual.is_empty());
    }

    #[test]
    fn no_rational_root_goes_to_residual() {
        let p = Poly::from_ints(&[1, 0, 1]);
        let d = rational_roots(&p).unwrap();
        assert!(d.roots.is_empty());
        assert_eq!(d.residual, vec![(p, 1)]);
    }

    #[test]
    fn repeated_root_multiplicity() {
        let d = rational_roots(&Poly::from_ints(&[0, 0, -1, 1])).unwrap();
        assert_eq!(d.roots, vec![(r(0), 2), (r(1), 1)]);
    }

    #[test]
    fn fractional_root_and_reassembly() {
        // 6w^3 - 5w^2 + w = w(2w-1)(3w-1); times (w^2+2)^2
        let a = Poly::from_ints(&[0, 1, -5, 6]);
        let b = Poly::from_ints(&[2, 0, 1]);
        let p = &(&a * &b) * &b;
        let d = rational_roots(&p).unwrap();
        assert_eq!(d.roots.len(), 3);
        assert_eq!(d.roots[1].0, Rational::new(1, 3));
        assert_eq!(d.residual, vec![(b, 2)]);
        assert_eq!(d.reassemble(), p);
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(rational_roots(&Poly::zero()), Err(ExactError::ZeroPolynomial));
    }

    #[test]
    fn gcd_examples() {
        let g = poly_gcd(&Poly::from_ints(&[0, 0, 1]), &Poly::from_ints(&[0, 0, 0, 1])).unwrap();
        assert_eq!(g, Poly::from_ints(&[0, 0, 1]));
        let g = poly_gcd(&Poly::from_ints(&[-1, 1]), &Poly::from_ints(&[1, 1])).unwrap();
        assert_eq!(g, Poly::one());
        let g = poly_gcd(&Poly::from_ints(&[-1, 0, 1]), &Poly::from_ints(&[1, -2, 1])).unwrap();
        assert_eq!(g, Poly::from_ints(&[-1, 1]));
        assert_eq!(poly_gcd(&Poly::zero(), &Poly::zero()), Err(ExactError::BothZero));
    }

    #[test]
    fn display() {
        assert_eq!(Poly::from_ints(&[1, -2, 3]).to_string(), "3*w^2 - 2*w + 1");
        assert_eq!(Poly::from_ints(&[0, -1]).to_string(), "-w");
    }
}
