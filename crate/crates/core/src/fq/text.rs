//! Text form of polynomials in `T`.
//!
//! Output uses implicit multiplication, highest degree first:
//! `T^6 + 2T^5 + 2T^3 + T^2 + 2T + 2`, and over `F_4` with `w` primitive
//! `w^2T^2 + T + w`. Compound coefficients are parenthesized, `(w + 1)T`.
//!
//! The parser accepts that form plus explicit `*`, `-`, parentheses,
//! powers of parenthesized expressions and negative integers, so
//! `T^3*(T+1)*(T-1)` and `T^2 - T - 1` both work.

use super::field::{Fq, FqContext};
use super::poly::APoly;
use crate::error::{Error, Result};

pub const VARIABLE: &str = "T";

/// Renders `a` in the canonical form.
pub fn format_apoly(a: &APoly, k: &FqContext) -> String {
    format_in(a.coeffs(), k, VARIABLE)
}

/// Same as [`format_apoly`] with a different variable name.
pub fn format_in(coeffs: &[Fq], k: &FqContext, var: &str) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        let term = if i == 0 {
            k.format(c)
        } else if c.is_one() {
            mono
        } else if k.is_compound(c) {
            format!("({}){mono}", k.format(c))
        } else {
            format!("{}{mono}", k.format(c))
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Parses a polynomial in `T`.
pub fn parse_apoly(s: &str, k: &FqContext) -> Result<APoly> {
    parse_in(s, k, VARIABLE)
}

/// Parses a polynomial in `var` with coefficients in `k`.
pub fn parse_in(s: &str, k: &FqContext, var: &str) -> Result<APoly> {
    let mut p = Parser { src: s, pos: 0, k, var };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty expression"));
    }
    let v = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(v)
}

/// Parses a field element (a constant expression).
pub fn parse_fq(s: &str, k: &FqContext) -> Result<Fq> {
    let a = parse_apoly(s, k)?;
    if !a.is_constant() {
        return Err(Error::InvalidInput(format!("'{s}' is not a field constant")));
    }
    Ok(a.coeff(0))
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    k: &'a FqContext,
    var: &'a str,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn error(&self, message: &str) -> Error {
        Error::Parse { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.rest().chars().next() {
            self.pos += c.len_utf8();
        }
    }

    fn sign(&mut self) -> Option<bool> {
        match self.peek()? {
            '+' => {
                self.bump();
                Some(false)
            }
            '-' | '\u{2212}' => {
                self.bump();
                Some(true)
            }
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<APoly> {
        let k = self.k;
        let negate = self.sign().unwrap_or(false);
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg(k);
        }
        while let Some(neg) = self.sign() {
            let t = self.term()?;
            acc = if neg { acc.sub(&t, k) } else { acc.add(&t, k) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<APoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.bump();
                    let f = self.factor()?;
                    acc = acc.mul(&f, self.k);
                }
                Some(c) if c == '(' || c.is_ascii_digit() || c.is_alphabetic() => {
                    let f = self.factor()?;
                    acc = acc.mul(&f, self.k);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<APoly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.bump();
            self.skip_ws();
            let e = self.integer()?;
            let e = u64::try_from(e).map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(e, self.k));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u128> {
        let digits: String = self.rest().chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return Err(self.error("expected an integer"));
        }
        let v = digits.parse::<u128>().map_err(|_| self.error("integer too large"))?;
        self.pos += digits.len();
        Ok(v)
    }

    fn atom(&mut self) -> Result<APoly> {
        let k = self.k;
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some('(') => {
                self.bump();
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.bump();
                Ok(v)
            }
            Some('-') | Some('\u{2212}') => {
                self.bump();
                Ok(self.factor()?.neg(k))
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                let p = k.characteristic() as u128;
                Ok(APoly::constant(k.from_int((v % p) as i64)))
            }
            Some(c) if c.is_alphabetic() => {
                // longest match between the variable and the generator label
                let (first, second) = if self.var.len() >= k.label().len() {
                    (self.var, k.label())
                } else {
                    (k.label(), self.var)
                };
                for name in [first, second] {
                    if self.rest().starts_with(name) {
                        self.pos += name.len();
                        return Ok(if name == self.var {
                            APoly::t()
                        } else {
                            APoly::constant(k.generator())
                        });
                    }
                }
                Err(self.error("unknown identifier"))
            }
            Some(_) => Err(self.error("unexpected character")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_style_round_trip() {
        let k = FqContext::prime(3).unwrap();
        let s = "T^6 + 2T^5 + 2T^3 + T^2 + 2T + 2";
        let a = parse_apoly(s, &k).unwrap();
        assert_eq!(format_apoly(&a, &k), s);
    }

    #[test]
    fn signed_and_factored_inputs() {
        let k = FqContext::prime(3).unwrap();
        let a = parse_apoly("T^7 - T^2 + 1", &k).unwrap();
        assert_eq!(format_apoly(&a, &k), "T^7 + 2T^2 + 1");
        let b = parse_apoly("T^3*(T+1)*(T-1)", &k).unwrap();
        assert_eq!(format_apoly(&b, &k), "T^5 + 2T^3");
        let c = parse_apoly("−T − 1", &k).unwrap();
        assert_eq!(format_apoly(&c, &k), "2T + 2");
        assert_eq!(format_apoly(&parse_apoly("(T+1)^3", &k).unwrap(), &k), "T^3 + 1");
        assert_eq!(format_apoly(&APoly::zero(), &k), "0");
    }

    #[test]
    fn f4_power_style() {
        let k = FqContext::new(2, 2, None, "w").unwrap();
        let s = "T^11 + wT^10 + w^2T^9 + wT^8 + w^2T^7 + wT^4 + wT^3 + wT^2 + T + w^2";
        let a = parse_apoly(s, &k).unwrap();
        assert_eq!(format_apoly(&a, &k), s);
        let b = parse_apoly("T + w+1", &k).unwrap();
        assert_eq!(format_apoly(&b, &k), "T + w^2");
    }

    #[test]
    fn compound_coefficients_are_parenthesized() {
        let k = FqContext::new(3, 2, Some(vec![1, 0, 1]), "a").unwrap();
        let s = "(a + 1)T^2 + 2aT + a + 2";
        let p = parse_apoly(s, &k).unwrap();
        assert_eq!(format_apoly(&p, &k), s);
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let k = FqContext::prime(3).unwrap();
        match parse_apoly("T^2 + x", &k) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_apoly("", &k).is_err());
        assert!(parse_apoly("(T+1", &k).is_err());
        assert!(parse_fq("T", &k).is_err());
    }
}
