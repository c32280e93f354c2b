//! Re-parseable text form of expressions.

use std::fmt;

use num::{BigRational, One, Signed};

use super::{Exponent, Expr, Kind};

const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const POWER: u8 = 3;

fn rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn exponent(q: &Exponent) -> String {
    if q.is_integer() && *q.numer() > 0 {
        q.numer().to_string()
    } else if q.is_integer() {
        format!("({})", q.numer())
    } else {
        format!("({}/{})", q.numer(), q.denom())
    }
}

/// Leading sign and magnitude of a term.
fn split_sign(e: &Expr) -> (bool, Expr) {
    match e.kind() {
        Kind::Const(c) if c.is_negative() => (true, Expr::constant(-c)),
        Kind::Mul(fs) => match fs[0].kind() {
            Kind::Const(c) if c.is_negative() => (true, e.scale(&-BigRational::one())),
            _ => (false, e.clone()),
        },
        _ => (false, e.clone()),
    }
}

fn render(e: &Expr, ctx: u8) -> String {
    let (s, prec) = match e.kind() {
        Kind::Const(c) => {
            let prec = if c.is_integer() && !c.is_negative() {
                u8::MAX
            } else if c.is_negative() {
                SUM
            } else {
                PRODUCT
            };
            (rational(c), prec)
        }
        Kind::Var(v) => (v.to_string(), u8::MAX),
        Kind::Add(ts) => {
            let mut s = String::new();
            for (k, t) in ts.iter().enumerate() {
                let (neg, mag) = split_sign(t);
                let body = render(&mag, SUM + 1);
                match (k, neg) {
                    (0, false) => s.push_str(&body),
                    (0, true) => {
                        s.push('-');
                        s.push_str(&body);
                    }
                    (_, false) => {
                        s.push_str(" + ");
                        s.push_str(&body);
                    }
                    (_, true) => {
                        s.push_str(" - ");
                        s.push_str(&body);
                    }
                }
            }
            (s, SUM)
        }
        Kind::Mul(fs) => {
            let mut num = Vec::new();
            let mut den = Vec::new();
            let mut neg = false;
            for f in fs {
                match f.kind() {
                    Kind::Const(c) if c.is_negative() && c == &-BigRational::one() => neg = true,
                    Kind::Pow(b, q) if *q.numer() < 0 => den.push(b.pow(-q)),
                    _ => num.push(f.clone()),
                }
            }
            let join = |xs: &[Expr]| {
                xs.iter().map(|x| render(x, PRODUCT + 1)).collect::<Vec<_>>().join("*")
            };
            let mut s = if num.is_empty() { "1".to_string() } else { join(&num) };
            if !den.is_empty() {
                s.push('/');
                if den.len() == 1 {
                    s.push_str(&render(&den[0], POWER));
                } else {
                    s.push('(');
                    s.push_str(&join(&den));
                    s.push(')');
                }
            }
            if neg {
                s.insert(0, '-');
                (s, SUM)
            } else {
                (s, PRODUCT)
            }
        }
        Kind::Pow(b, q) => {
            if *q.numer() < 0 && !matches!(b.kind(), Kind::Const(_)) {
                let d = render(&b.pow(-q), POWER);
                (format!("1/{d}"), PRODUCT)
            } else {
                (format!("{}^{}", render(b, u8::MAX), exponent(q)), POWER)
            }
        }
    };
    if prec < ctx {
        format!("({s})")
    } else {
        s
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, 0))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{equal_prob, parse, SampleConfig};
    use super::*;

    fn roundtrip(text: &str, m: usize, n: usize) {
        let e = parse(text, m, n).unwrap();
        let printed = e.to_string();
        let back = parse(&printed, m, n).unwrap_or_else(|err| panic!("{printed}: {err}"));
        assert!(equal_prob(&e, &back, &SampleConfig::default()).equal, "{text} -> {printed}");
    }

    #[test]
    fn printed_forms() {
        assert_eq!(parse("y1_1 - y2_1", 2, 1).unwrap().to_string().contains(" - "), true);
        assert_eq!(Expr::rational(-3, 4).to_string(), "-3/4");
        assert_eq!(Expr::var(1, 2).recip().to_string(), "1/y1_2");
        assert_eq!(Expr::var(1, 1).sqrt().to_string(), "y1_1^(1/2)");
    }

    #[test]
    fn roundtrips() {
        for (t, m, n) in [
            ("y1_1*y1_1 + y2_1^2", 2, 1),
            ("-(y1_1 - 3/4*y2_2)^(-3/2) / (y1_1^2 + y2_1^2)", 2, 2),
            ("(y1_1*y2_2 - y2_1*y1_2)^2/(y1_1^2+y2_1^2)^(5/2)", 2, 2),
            ("2^(1/2)*y1_0 - (1/3)^(1/2)", 1, 0),
            ("-y1_0/(2*y1_1*y2_1) + 1", 2, 1),
            ("(-2)*y1_1^(-2)*(y1_0+1)", 1, 1),
        ] {
            roundtrip(t, m, n);
        }
    }
}
