//! Text format for scalars.
//!
//! p-adic scalars are decimal-rational strings `a/b` or `a`. Laurent
//! scalars are `(poly)/(poly)` (or just `(poly)` for polynomials) with
//! polynomials written as `c0 + c1*t + c2*t^2`. Parsing ignores
//! whitespace; rendering is canonical so equal scalars render equal.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use super::qpoly::QPoly;
use super::{FieldDescriptor, FieldKind, Repr, ValuedScalar};

impl ValuedScalar {
    pub fn render(&self) -> String {
        match &self.repr {
            Repr::Rational(q) => q.to_string(),
            Repr::RatFunc(f) => {
                let var = match self.descriptor.kind() {
                    FieldKind::Laurent(v) => v.as_ref(),
                    FieldKind::PAdic(_) => unreachable!(),
                };
                let num = render_poly(f.num(), var);
                if f.den().degree() == Some(0) && f.den().coeffs()[0].is_one() {
                    format!("({num})")
                } else {
                    format!("({num})/({})", render_poly(f.den(), var))
                }
            }
        }
    }

    pub fn parse(descriptor: &FieldDescriptor, text: &str) -> Result<ValuedScalar> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        match descriptor.kind() {
            FieldKind::PAdic(_) => {
                let q = parse_rational(&s)?;
                Ok(descriptor.from_rational(q))
            }
            FieldKind::Laurent(var) => {
                let var = var.as_ref().to_owned();
                let (num_str, den_str) = split_ratio(&s)?;
                let num = parse_poly(num_str, &var)?;
                let den = match den_str {
                    Some(d) => parse_poly(d, &var)?,
                    None => QPoly::one(),
                };
                descriptor.from_poly_ratio(num, den)
            }
        }
    }
}

fn render_poly(p: &QPoly, var: &str) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut terms = Vec::new();
    for (k, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = match k {
            0 => c.to_string(),
            1 => format!("{c}*{var}"),
            _ => format!("{c}*{var}^{k}"),
        };
        terms.push(term);
    }
    terms.join(" + ")
}

/// Split `(num)/(den)` or `(num)` or a bare polynomial.
fn split_ratio(s: &str) -> Result<(&str, Option<&str>)> {
    if !s.starts_with('(') {
        return Ok((s, None));
    }
    let close = s
        .find(')')
        .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in {s:?}")))?;
    let num = &s[1..close];
    let rest = &s[close + 1..];
    if rest.is_empty() {
        return Ok((num, None));
    }
    let den = rest
        .strip_prefix("/(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("malformed rational function {s:?}")))?;
    Ok((num, Some(den)))
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("invalid integer {num:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("invalid integer {den:?}")))?;
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(num, den))
}

/// Parse `c0 + c1*t + c2*t^2` style polynomials. The `*` is optional and
/// a bare `t^k` carries coefficient 1.
fn parse_poly(s: &str, var: &str) -> Result<QPoly> {
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut coeffs: Vec<BigRational> = Vec::new();
    for (sign, term) in split_terms(s) {
        let (k, mut c) = parse_term(term, var)?;
        if sign < 0 {
            c = -c;
        }
        if coeffs.len() <= k {
            coeffs.resize(k + 1, BigRational::zero());
        }
        coeffs[k] += c;
    }
    Ok(QPoly::new(coeffs))
}

/// Split on top-level + and - signs, keeping each term's sign.
fn split_terms(s: &str) -> Vec<(i32, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut sign = 1;
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if (c == '+' || c == '-') && i > start {
            // a sign right after '/', '^' or '*' belongs to the number
            let prev = bytes[i - 1] as char;
            if prev != '/' && prev != '^' && prev != '*' {
                out.push((sign, &s[start..i]));
                sign = if c == '-' { -1 } else { 1 };
                start = i + 1;
                i += 1;
                continue;
            }
        } else if (c == '+' || c == '-') && i == start {
            sign = if c == '-' { -sign } else { sign };
            start = i + 1;
        }
        i += 1;
    }
    if start < s.len() {
        out.push((sign, &s[start..]));
    }
    out
}

fn parse_term(term: &str, var: &str) -> Result<(usize, BigRational)> {
    match term.find(var) {
        None => Ok((0, parse_rational(term)?)),
        Some(pos) => {
            let coef_str = term[..pos].trim_end_matches('*');
            let coef = if coef_str.is_empty() {
                BigRational::one()
            } else {
                parse_rational(coef_str)?
            };
            let rest = &term[pos + var.len()..];
            let exp = if rest.is_empty() {
                1
            } else {
                let e = rest
                    .strip_prefix('^')
                    .ok_or_else(|| Error::Parse(format!("malformed term {term:?}")))?;
                e.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("invalid exponent {e:?}")))?
            };
            Ok((exp, coef))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExtValuation;

    fn q5() -> FieldDescriptor {
        FieldDescriptor::p_adic(5).unwrap()
    }

    fn lt() -> FieldDescriptor {
        FieldDescriptor::laurent("t").unwrap()
    }

    #[test]
    fn padic_round_trip() {
        for s in ["3/5", "-7", "0", "22/7"] {
            let x = ValuedScalar::parse(&q5(), s).unwrap();
            assert_eq!(x.render(), s);
            assert_eq!(ValuedScalar::parse(&q5(), &x.render()).unwrap(), x);
        }
    }

    #[test]
    fn laurent_parse_examples() {
        let d = lt();
        let x = ValuedScalar::parse(&d, "(t^2 + t^3)/(t^5)").unwrap();
        assert_eq!(x.valuation(), ExtValuation::Finite(-3));
        assert_eq!(ValuedScalar::parse(&d, &x.render()).unwrap(), x);

        let y = ValuedScalar::parse(&d, "t").unwrap();
        assert_eq!(y, d.uniformizer());
        assert_eq!(y.render(), "(1*t)");

        let z = ValuedScalar::parse(&d, "(1 + -1/2*t + 3*t^2)").unwrap();
        assert_eq!(ValuedScalar::parse(&d, &z.render()).unwrap(), z);
    }

    #[test]
    fn whitespace_insensitive() {
        let d = lt();
        let a = ValuedScalar::parse(&d, "( 1 + 2*t )/( t^2 )").unwrap();
        let b = ValuedScalar::parse(&d, "(1+2*t)/(t^2)").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn subtraction_in_poly() {
        let d = lt();
        let a = ValuedScalar::parse(&d, "(1 - t)").unwrap();
        let b = ValuedScalar::parse(&d, "(1 + -1*t)").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn malformed_inputs_rejected() {
        assert!(ValuedScalar::parse(&q5(), "three").is_err());
        assert!(ValuedScalar::parse(&q5(), "1/0").is_err());
        assert!(ValuedScalar::parse(&lt(), "(1/(t)").is_err());
        assert!(ValuedScalar::parse(&lt(), "(1)/(0)").is_err());
    }
}
