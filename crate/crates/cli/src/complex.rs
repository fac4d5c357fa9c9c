//! Complex literals for `--v`.
//!
//! Accepts `a+bi` forms such as `-1+2i`, `2i`, `-i`, and small expressions
//! built from numbers, `i`, `sqrtN`, parentheses and `+ - * /`, with
//! implicit multiplication: `(1+sqrt3)(1+i)/2`, `1-sqrt3i`.

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
enum Token {
    Num(f64),
    I,
    Sqrt(f64),
    Plus,
    Minus,
    Star,
    Slash,
    Open,
    Close,
}

fn tokenize(s: &str) -> Result<Vec<Token>, String> {
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = Vec::new();
    let mut i = 0;
    let number = |i: &mut usize| -> Result<f64, String> {
        let start = *i;
        while *i < chars.len() && (chars[*i].is_ascii_digit() || chars[*i] == '.') {
            *i += 1;
        }
        // exponent, only when followed by a digit or sign-digit
        if *i < chars.len() && (chars[*i] == 'e' || chars[*i] == 'E') {
            let mut j = *i + 1;
            if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                j += 1;
            }
            if j < chars.len() && chars[j].is_ascii_digit() {
                *i = j;
                while *i < chars.len() && chars[*i].is_ascii_digit() {
                    *i += 1;
                }
            }
        }
        let text: String = chars[start..*i].iter().collect();
        text.parse::<f64>()
            .map_err(|_| format!("bad number '{text}'"))
    };
    while i < chars.len() {
        let c = chars[i];
        match c {
            '0'..='9' | '.' => out.push(Token::Num(number(&mut i)?)),
            'i' | 'j' => {
                out.push(Token::I);
                i += 1;
            }
            's' => {
                let rest: String = chars[i..].iter().take(4).collect();
                if rest != "sqrt" {
                    return Err(format!("unexpected '{c}'"));
                }
                i += 4;
                if i < chars.len() && chars[i].is_ascii_digit() {
                    out.push(Token::Sqrt(number(&mut i)?));
                } else {
                    // sqrt(expr) is handled by the parser
                    out.push(Token::Sqrt(f64::NAN));
                }
            }
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '/' => {
                out.push(Token::Slash);
                i += 1;
            }
            '(' => {
                out.push(Token::Open);
                i += 1;
            }
            ')' => {
                out.push(Token::Close);
                i += 1;
            }
            _ => return Err(format!("unexpected '{c}'")),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<Token> {
        self.tokens.get(self.pos).copied()
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Complex64, String> {
        let mut acc = self.term()?;
        while let Some(t @ (Token::Plus | Token::Minus)) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if t == Token::Plus {
                acc + rhs
            } else {
                acc - rhs
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Complex64, String> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc *= self.unary()?;
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let den = self.unary()?;
                    if den.norm() == 0.0 {
                        return Err("division by zero".into());
                    }
                    acc /= den;
                }
                Some(Token::Num(_) | Token::I | Token::Sqrt(_) | Token::Open) => {
                    acc *= self.atom()?
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Complex64, String> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Complex64, String> {
        match self.next() {
            Some(Token::Num(x)) => Ok(Complex64::new(x, 0.0)),
            Some(Token::I) => Ok(Complex64::i()),
            Some(Token::Sqrt(x)) if x.is_nan() => {
                if self.next() != Some(Token::Open) {
                    return Err("expected '(' after sqrt".into());
                }
                let inner = self.expr()?;
                if self.next() != Some(Token::Close) {
                    return Err("missing ')'".into());
                }
                Ok(inner.sqrt())
            }
            Some(Token::Sqrt(x)) => Ok(Complex64::new(x.sqrt(), 0.0)),
            Some(Token::Open) => {
                let inner = self.expr()?;
                if self.next() != Some(Token::Close) {
                    return Err("missing ')'".into());
                }
                Ok(inner)
            }
            Some(t) => Err(format!("unexpected {t:?}")),
            None => Err("unexpected end of input".into()),
        }
    }
}

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let tokens = tokenize(s)?;
    if tokens.is_empty() {
        return Err("empty complex literal".into());
    }
    let mut p = Parser { tokens, pos: 0 };
    let z = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(format!("trailing input in '{s}'"));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(format!("'{s}' is not finite"));
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn plain_literals() {
        assert_eq!(parse_complex("-1+2i").unwrap(), c(-1.0, 2.0));
        assert_eq!(parse_complex("-1-2i").unwrap(), c(-1.0, -2.0));
        assert_eq!(parse_complex("2").unwrap(), c(2.0, 0.0));
        assert_eq!(parse_complex("-2").unwrap(), c(-2.0, 0.0));
        assert_eq!(parse_complex("0").unwrap(), c(0.0, 0.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("0.5-1.25i").unwrap(), c(0.5, -1.25));
        assert_eq!(parse_complex("1e-3+2e1i").unwrap(), c(1e-3, 20.0));
    }

    #[test]
    fn sqrt_tokens() {
        let s3 = 3f64.sqrt();
        assert_eq!(parse_complex("1+sqrt3i").unwrap(), c(1.0, s3));
        assert_eq!(parse_complex("1-sqrt3 i").unwrap(), c(1.0, -s3));
        let z = parse_complex("(1+sqrt3)(1+i)/2").unwrap();
        assert!((z - c((1.0 + s3) / 2.0, (1.0 + s3) / 2.0)).norm() < 1e-15);
        let w = parse_complex("-(1-sqrt3)*(1-i)/2").unwrap();
        assert!((w - c(-(1.0 - s3) / 2.0, (1.0 - s3) / 2.0)).norm() < 1e-15);
        assert_eq!(parse_complex("sqrt(4)").unwrap(), c(2.0, 0.0));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "1+", "x", "(1", "1/0", "sqrt", "2..3", "1)"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }
}
