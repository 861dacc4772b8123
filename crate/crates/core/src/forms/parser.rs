//! Recursive-descent parser for products of linear factors such as
//! `u^2 = xy(x+y+w)z` or `x*y*(x + w*y + z)`.

use num_traits::ToPrimitive;

use super::{FormsError, LinearForm, ParamArrangement, VARIABLES};
use crate::exact::{Poly, Rational};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

/// Parse an equation into one linear form per factor.
///
/// A term without x, y, z, t is read in the affine chart t = 1, so
/// `x+y+w` means `x + y + w*t`. Integer scalars outside parentheses are dropped.
pub fn parse_equation(text: &str) -> Result<ParamArrangement, FormsError> {
    let mut p = Parser { src: text, pos: 0 };
    p.prefix()?;
    let factors = p.product()?;
    p.skip_ws();
    if p.peek() == Some('=') {
        p.bump();
        p.skip_ws();
        if p.peek() != Some('0') {
            return Err(p.err("expected 0 after '='"));
        }
        p.bump();
    }
    p.skip_ws();
    if p.peek().is_some() {
        return Err(p.err("unexpected trailing input"));
    }
    if factors.is_empty() {
        return Err(p.err("no factors"));
    }
    ParamArrangement::new(factors)
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn err(&self, msg: &str) -> FormsError {
        FormsError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn expect(&mut self, c: char) -> Result<(), FormsError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    /// Optional `u^2 =` or `0 =` in front of the product.
    fn prefix(&mut self) -> Result<(), FormsError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        if rest.starts_with('u') {
            self.bump();
            self.expect('^')?;
            self.expect('2')?;
            self.expect('=')?;
        } else if rest.starts_with('0') && rest[1..].trim_start().starts_with('=') {
            self.bump();
            self.expect('=')?;
        }
        Ok(())
    }

    fn integer(&mut self) -> Result<num_bigint::BigInt, FormsError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        self.src[start..self.pos].parse().map_err(|_| self.err("expected integer"))
    }

    fn small_exponent(&mut self) -> Result<u32, FormsError> {
        self.skip_ws();
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.bump();
        self.skip_ws();
        let e = self.integer()?;
        e.to_u32().filter(|&e| e >= 1).ok_or_else(|| self.err("exponent must be a positive integer"))
    }

    /// Integer or `p/q` literal.
    fn number(&mut self) -> Result<Rational, FormsError> {
        let n = self.integer()?;
        let save = self.pos;
        self.skip_ws();
        if self.peek() == Some('/') {
            self.bump();
            self.skip_ws();
            let d = self.integer()?;
            if d == 0.into() {
                return Err(self.err("zero denominator"));
            }
            return Ok(Rational::new(n, d));
        }
        self.pos = save;
        Ok(Rational::from_int(n))
    }

    fn product(&mut self) -> Result<Vec<LinearForm>, FormsError> {
        let mut out = vec![];
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some('=') => break,
                Some('*') if !out.is_empty() => {
                    self.bump();
                    self.skip_ws();
                }
                _ => {}
            }
            self.skip_ws();
            let start = self.pos;
            let form = match self.peek() {
                Some('(') => {
                    self.bump();
                    let f = self.sum(start)?;
                    self.expect(')')?;
                    Some(f)
                }
                Some(c) if VARIABLES.contains(&c) => {
                    self.bump();
                    let mut coeffs: [Poly; 4] = Default::default();
                    coeffs[VARIABLES.iter().position(|&v| v == c).unwrap()] = Poly::one();
                    Some(LinearForm::new(coeffs))
                }
                Some(c) if c.is_ascii_digit() => {
                    if self.number()?.is_zero() {
                        return Err(FormsError::Parse { pos: start, msg: "zero scalar factor".into() });
                    }
                    None
                }
                Some('-') => {
                    self.bump();
                    None
                }
                Some('w') => {
                    return Err(self.err("the parameter w cannot be a factor on its own"));
                }
                _ => return Err(self.err("expected a factor")),
            };
            let e = self.small_exponent()?;
            if let Some(f) = form {
                for _ in 0..e {
                    out.push(f.clone());
                }
            }
        }
        Ok(out)
    }

    /// Signed sum of terms inside parentheses.
    fn sum(&mut self, factor_start: usize) -> Result<LinearForm, FormsError> {
        let mut coeffs: [Poly; 4] = Default::default();
        let mut first = true;
        loop {
            self.skip_ws();
            let sign = match self.peek() {
                Some('+') => {
                    self.bump();
                    Rational::one()
                }
                Some('-') => {
                    self.bump();
                    -Rational::one()
                }
                Some(')') if !first => break,
                _ if first => Rational::one(),
                _ => return Err(self.err("expected '+', '-' or ')'")),
            };
            first = false;
            let (c, wdeg, var) = self.term(factor_start)?;
            let slot = var.unwrap_or(3);
            let add = Poly::monomial(&sign * &c, wdeg as usize);
            coeffs[slot] = &coeffs[slot] + &add;
        }
        Ok(LinearForm::new(coeffs))
    }

    /// One monomial: returns (coefficient, power of w, variable index).
    fn term(&mut self, factor_start: usize) -> Result<(Rational, u32, Option<usize>), FormsError> {
        let mut coeff = Rational::one();
        let mut wdeg = 0u32;
        let mut var: Option<usize> = None;
        let mut vdeg = 0u32;
        let mut items = 0;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    coeff = &coeff * &self.number()?;
                }
                Some('w') => {
                    self.bump();
                    wdeg += self.small_exponent()?;
                }
                Some(c) if VARIABLES.contains(&c) => {
                    self.bump();
                    vdeg += self.small_exponent()?;
                    var = Some(VARIABLES.iter().position(|&v| v == c).unwrap());
                    if vdeg > 1 {
                        return Err(FormsError::NonLinearFactor { pos: factor_start });
                    }
                }
                Some('*') if items > 0 => {
                    self.bump();
                    continue;
                }
                _ => break,
            }
            items += 1;
        }
        if items == 0 {
            return Err(self.err("expected a term"));
        }
        Ok((coeff, wdeg, var))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn forms(s: &str) -> Vec<String> {
        parse_equation(s).unwrap().forms.iter().map(|f| f.to_string()).collect()
    }

    #[test]
    fn affine_parameter_is_homogenised() {
        assert_eq!(forms("u^2 = xy(x+y+w)z"), ["x", "y", "(x + y + w*t)", "z"]);
    }

    #[test]
    fn explicit_products() {
        assert_eq!(forms("x*y*z*t"), ["x", "y", "z", "t"]);
    }

    #[test]
    fn parameter_multiplies_a_variable() {
        assert_eq!(
            forms("xyz(x+y+zw)(x+wy+z)"),
            ["x", "y", "z", "(x + y + w*z)", "(x + w*y + z)"]
        );
    }

    #[test]
    fn rational_coefficients_and_suffix() {
        assert_eq!(forms("0 = x(x - 1/2 y + 3w^2) = 0"), ["x", "(x - 1/2*y + 3*w^2*t)"]);
    }

    #[test]
    fn duplicate_factor_rejected() {
        assert_eq!(parse_equation("x*x*y*z"), Err(FormsError::DuplicateFactor(0, 1)));
        assert_eq!(parse_equation("x(2x)"), Err(FormsError::DuplicateFactor(0, 1)));
    }

    #[test]
    fn nonlinear_factor_rejected() {
        assert_eq!(parse_equation("x(y+x^2)"), Err(FormsError::NonLinearFactor { pos: 1 }));
        assert_eq!(parse_equation("x(xy)"), Err(FormsError::NonLinearFactor { pos: 1 }));
    }

    #[test]
    fn malformed_input_reports_position() {
        match parse_equation("xy(x+") {
            Err(FormsError::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_equation("xw"), Err(FormsError::Parse { pos: 1, .. })));
    }

    #[test]
    fn print_parse_round_trip() {
        let a = parse_equation("xy(x+y-2w^2)(3z - w t + 1/3 x)").unwrap();
        let b = parse_equation(&a.to_string()).unwrap();
        assert_eq!(a, b);
    }
}
