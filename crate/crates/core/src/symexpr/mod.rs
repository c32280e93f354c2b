//! Exact symbolic scalars over jet coordinates `y{i}_{r}`.
//!
//! An [`Expr`] is an immutable, reference-counted DAG. Constants are exact
//! rationals and powers carry exact rational exponents. Construction goes
//! through smart constructors that fold constants, drop `0`/`1` identities,
//! flatten nested sums and products and merge like terms; there is no
//! canonical simplifier beyond that, so identities are checked by sampling
//! (see [`equal_prob`]).
//!
//! Subtraction and division have no node of their own: `a - b` is stored as
//! `a + (-1)*b` and `a / b` as `a * b^(-1)`.
//!
//! Structural identity is a 128-bit Merkle hash computed at construction, so
//! equality, hashing and DAG deduplication are constant time per node.

mod calculus;
mod parse;
mod print;
mod sample;
mod tape;

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops;
use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

pub use calculus::{derivation, diff, subst, total_derivative};
pub use parse::parse;
pub use sample::{
    equal_prob, equal_prob_in, equal_prob_pairs, sample_point, zero_prob, EqualityReport,
    SampleConfig, Sampler,
};
pub use tape::Tape;

/// Exponent type of [`Kind::Pow`].
pub type Exponent = num::rational::Ratio<i64>;

/// Jet coordinate `y^i_r`; `i` is the 1-based component, `r` the derivative order.
///
/// Ordered row-major: first by `r`, then by `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub r: u32,
    pub i: u32,
}

impl Var {
    pub fn new(i: u32, r: u32) -> Self {
        assert!(i >= 1, "jet coordinate components are 1-based");
        Var { r, i }
    }

    /// Flat index of this coordinate in a row-major jet array with `m` components.
    pub fn index(&self, m: usize) -> usize {
        self.r as usize * m + (self.i as usize - 1)
    }

    /// Same component, one order higher.
    pub fn raised(&self) -> Var {
        Var { r: self.r + 1, i: self.i }
    }

    fn mask(&self) -> u128 {
        if self.i <= 8 && self.r <= 15 {
            1u128 << (self.r * 8 + self.i - 1)
        } else {
            u128::MAX
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y{}_{}", self.i, self.r)
    }
}

#[derive(Debug)]
pub enum Kind {
    Const(BigRational),
    Var(Var),
    /// At least two terms, no nested sums, at most one constant (first).
    Add(Vec<Expr>),
    /// At least two factors, no nested products, at most one constant (first).
    Mul(Vec<Expr>),
    /// Exponent is never 0 or 1.
    Pow(Expr, Exponent),
}

#[derive(Debug)]
struct Node {
    kind: Kind,
    hash: u128,
    vars: u128,
}

#[derive(Clone)]
pub struct Expr(Arc<Node>);

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.hash == other.0.hash
    }
}

impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u128(self.0.hash);
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

fn merkle(tag: u8, feed: impl Fn(&mut DefaultHasher)) -> u128 {
    let mut lo = DefaultHasher::new();
    lo.write_u8(tag);
    feed(&mut lo);
    let mut hi = DefaultHasher::new();
    hi.write_u64(0x9e37_79b9_7f4a_7c15);
    hi.write_u8(tag);
    feed(&mut hi);
    ((hi.finish() as u128) << 64) | lo.finish() as u128
}

impl Expr {
    fn from_kind(kind: Kind) -> Expr {
        let (hash, vars) = match &kind {
            Kind::Const(c) => (merkle(0, |h| c.hash(h)), 0),
            Kind::Var(v) => (merkle(1, |h| v.hash(h)), v.mask()),
            Kind::Add(ts) => (
                merkle(2, |h| ts.iter().for_each(|t| h.write_u128(t.0.hash))),
                ts.iter().fold(0, |m, t| m | t.0.vars),
            ),
            Kind::Mul(fs) => (
                merkle(3, |h| fs.iter().for_each(|t| h.write_u128(t.0.hash))),
                fs.iter().fold(0, |m, t| m | t.0.vars),
            ),
            Kind::Pow(b, q) => (
                merkle(4, |h| {
                    h.write_u128(b.0.hash);
                    q.hash(h);
                }),
                b.0.vars,
            ),
        };
        Expr(Arc::new(Node { kind, hash, vars }))
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub(crate) fn id(&self) -> u128 {
        self.0.hash
    }

    pub(crate) fn var_mask(&self) -> u128 {
        self.0.vars
    }

    pub fn constant(c: BigRational) -> Expr {
        Expr::from_kind(Kind::Const(c))
    }

    pub fn int(n: i64) -> Expr {
        Expr::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn rational(num: i64, den: i64) -> Expr {
        Expr::constant(BigRational::new(num.into(), den.into()))
    }

    /// Exact rational image of a finite double.
    pub fn from_f64(x: f64) -> Expr {
        Expr::constant(BigRational::from_float(x).expect("finite constant"))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    /// The coordinate `y^i_r` (1-based `i`).
    pub fn var(i: u32, r: u32) -> Expr {
        Expr::from_kind(Kind::Var(Var::new(i, r)))
    }

    pub fn from_var(v: Var) -> Expr {
        Expr::from_kind(Kind::Var(v))
    }

    pub fn as_const(&self) -> Option<&BigRational> {
        match self.kind() {
            Kind::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_const().is_some_and(|c| c.is_one())
    }

    /// Whether `v` may occur in the expression (exact for `i <= 8`, `r <= 15`).
    pub fn may_contain(&self, v: Var) -> bool {
        self.0.vars & v.mask() != 0
    }

    /// Sum with constant folding, flattening and like-term merging.
    pub fn sum(terms: impl IntoIterator<Item = Expr>) -> Expr {
        let mut constant = BigRational::zero();
        let mut order: Vec<Expr> = Vec::new();
        let mut coefs: HashMap<Expr, BigRational> = HashMap::new();
        // (coefficient, term); constant multiples of sums are distributed
        let mut stack: Vec<(BigRational, Expr)> =
            terms.into_iter().map(|t| (BigRational::one(), t)).collect();
        stack.reverse();
        while let Some((k, t)) = stack.pop() {
            match t.kind() {
                Kind::Const(c) => constant += k * c,
                Kind::Add(inner) => {
                    stack.extend(inner.iter().rev().map(|u| (k.clone(), u.clone())));
                }
                _ => {
                    let (c, core) = split_coef(&t);
                    if let Kind::Add(inner) = core.kind() {
                        let kc = k * c;
                        stack.extend(inner.iter().rev().map(|u| (kc.clone(), u.clone())));
                        continue;
                    }
                    match coefs.get_mut(&core) {
                        Some(acc) => *acc += k * c,
                        None => {
                            coefs.insert(core.clone(), k * c);
                            order.push(core);
                        }
                    }
                }
            }
        }
        let mut out: Vec<Expr> = order
            .into_iter()
            .filter_map(|core| {
                let c = coefs.remove(&core).unwrap();
                (!c.is_zero()).then(|| with_coef(c, core))
            })
            .collect();
        out.sort_by_key(|t| t.id());
        if !constant.is_zero() {
            out.insert(0, Expr::constant(constant));
        }
        match out.len() {
            0 => Expr::zero(),
            1 => out.pop().unwrap(),
            _ => Expr::from_kind(Kind::Add(out)),
        }
    }

    /// Product with constant folding, flattening and merging of equal bases.
    pub fn product(factors: impl IntoIterator<Item = Expr>) -> Expr {
        let mut coef = BigRational::one();
        let mut order: Vec<Expr> = Vec::new();
        let mut exps: HashMap<Expr, Exponent> = HashMap::new();
        let mut push = |f: &Expr, coef: &mut BigRational| match f.kind() {
            Kind::Const(c) => *coef *= c,
            _ => {
                let (base, q) = split_pow(f);
                match exps.get_mut(&base) {
                    Some(acc) => *acc += q,
                    None => {
                        exps.insert(base.clone(), q);
                        order.push(base);
                    }
                }
            }
        };
        for f in factors {
            match f.kind() {
                Kind::Mul(inner) => inner.iter().for_each(|u| push(u, &mut coef)),
                _ => push(&f, &mut coef),
            }
        }
        if coef.is_zero() {
            return Expr::zero();
        }
        let mut out = Vec::with_capacity(order.len());
        let mut again = false;
        for base in order {
            let q = exps.remove(&base).unwrap();
            let f = base.pow(q);
            match f.kind() {
                Kind::Const(c) => coef *= c,
                Kind::Mul(_) => {
                    again = true;
                    out.push(f);
                }
                _ => {
                    if !f.is_one() {
                        out.push(f)
                    }
                }
            }
        }
        if again {
            out.push(Expr::constant(coef));
            return Expr::product(out);
        }
        out.sort_by_key(|t| t.id());
        match (coef.is_one(), out.len()) {
            (_, 0) => Expr::constant(coef),
            (true, 1) => out.pop().unwrap(),
            (true, _) => Expr::from_kind(Kind::Mul(out)),
            (false, _) => {
                out.insert(0, Expr::constant(coef));
                Expr::from_kind(Kind::Mul(out))
            }
        }
    }

    /// `self^q` for a rational exponent.
    ///
    /// `(b^a)^q` collapses to `b^(a q)` only for integer `q`, and products
    /// are distributed over integer exponents only.
    pub fn pow(&self, q: Exponent) -> Expr {
        if q.is_zero() {
            return Expr::one();
        }
        if q.is_one() {
            return self.clone();
        }
        match self.kind() {
            Kind::Const(c) => {
                if c.is_one() {
                    return Expr::one();
                }
                if c.is_zero() && q.is_positive() {
                    return Expr::zero();
                }
                if q.is_integer() && !c.is_zero() {
                    let k = *q.numer();
                    let base = if k < 0 { c.recip() } else { c.clone() };
                    return Expr::constant(num::pow::pow(base, k.unsigned_abs() as usize));
                }
                Expr::from_kind(Kind::Pow(self.clone(), q))
            }
            Kind::Pow(b, a) if q.is_integer() => b.pow(a * q),
            Kind::Mul(fs) if q.is_integer() => Expr::product(fs.iter().map(|f| f.pow(q))),
            _ => Expr::from_kind(Kind::Pow(self.clone(), q)),
        }
    }

    pub fn powi(&self, k: i64) -> Expr {
        self.pow(Exponent::from_integer(k))
    }

    pub fn sqrt(&self) -> Expr {
        self.pow(Exponent::new(1, 2))
    }

    pub fn recip(&self) -> Expr {
        self.powi(-1)
    }

    /// Multiply by an exact rational.
    pub fn scale(&self, c: &BigRational) -> Expr {
        Expr::product([Expr::constant(c.clone()), self.clone()])
    }

    /// Number of distinct nodes in the DAG.
    pub fn node_count(&self) -> usize {
        fn walk(e: &Expr, seen: &mut std::collections::HashSet<u128>) {
            if !seen.insert(e.id()) {
                return;
            }
            match e.kind() {
                Kind::Add(xs) | Kind::Mul(xs) => xs.iter().for_each(|x| walk(x, seen)),
                Kind::Pow(b, _) => walk(b, seen),
                _ => {}
            }
        }
        let mut seen = std::collections::HashSet::new();
        walk(self, &mut seen);
        seen.len()
    }

    /// Set of coordinates occurring in the expression, in row-major order.
    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        fn walk(
            e: &Expr,
            seen: &mut std::collections::HashSet<u128>,
            out: &mut std::collections::BTreeSet<Var>,
        ) {
            if e.var_mask() == 0 || !seen.insert(e.id()) {
                return;
            }
            match e.kind() {
                Kind::Var(v) => {
                    out.insert(*v);
                }
                Kind::Add(xs) | Kind::Mul(xs) => xs.iter().for_each(|x| walk(x, seen, out)),
                Kind::Pow(b, _) => walk(b, seen, out),
                Kind::Const(_) => {}
            }
        }
        let mut out = std::collections::BTreeSet::new();
        walk(self, &mut std::collections::HashSet::new(), &mut out);
        out
    }

    /// Smallest `(m, N)` whose jet space covers every coordinate of the expression.
    pub fn dims(&self) -> (usize, usize) {
        self.vars()
            .iter()
            .fold((0, 0), |(m, n), v| (m.max(v.i as usize), n.max(v.r as usize)))
    }

    /// Evaluate at a row-major coordinate slice with `m` components per row.
    pub fn eval_slice(&self, coords: &[f64], m: usize) -> Result<f64, crate::EvalError> {
        let tape = Tape::compile(std::slice::from_ref(self), m);
        let mut out = [0.0];
        tape.eval(coords, &mut out)?;
        Ok(out[0])
    }

    /// Evaluate at a jet point.
    pub fn eval(&self, p: &crate::jetcalc::JetPoint) -> Result<f64, crate::EvalError> {
        self.eval_slice(p.coords(), p.m())
    }

    /// Rational value of a constant, as `f64`.
    pub fn const_f64(&self) -> Option<f64> {
        self.as_const().and_then(|c| c.to_f64())
    }
}

/// `(coef, core)` with `t = coef * core` and `core` free of a leading constant.
fn split_coef(t: &Expr) -> (BigRational, Expr) {
    if let Kind::Mul(fs) = t.kind() {
        if let Kind::Const(c) = fs[0].kind() {
            let rest = &fs[1..];
            let core = if rest.len() == 1 {
                rest[0].clone()
            } else {
                Expr::from_kind(Kind::Mul(rest.to_vec()))
            };
            return (c.clone(), core);
        }
    }
    (BigRational::one(), t.clone())
}

fn with_coef(c: BigRational, core: Expr) -> Expr {
    if c.is_one() {
        return core;
    }
    let mut fs = vec![Expr::constant(c)];
    match core.kind() {
        Kind::Mul(inner) => fs.extend(inner.iter().cloned()),
        _ => fs.push(core),
    }
    Expr::from_kind(Kind::Mul(fs))
}

fn split_pow(f: &Expr) -> (Expr, Exponent) {
    match f.kind() {
        Kind::Pow(b, q) => (b.clone(), *q),
        _ => (f.clone(), Exponent::one()),
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<Var> for Expr {
    fn from(v: Var) -> Self {
        Expr::from_var(v)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl ops::$tr<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                $body(self, rhs)
            }
        }
        impl ops::$tr<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                $body(self, rhs.clone())
            }
        }
        impl ops::$tr<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                $body(self.clone(), rhs)
            }
        }
        impl ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                $body(self.clone(), rhs.clone())
            }
        }
    };
}

binop!(Add, add, |a, b| Expr::sum([a, b]));
binop!(Sub, sub, |a, b: Expr| Expr::sum([a, -b]));
binop!(Mul, mul, |a, b| Expr::product([a, b]));
binop!(Div, div, |a, b: Expr| Expr::product([a, b.recip()]));

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::product([Expr::int(-1), self])
    }
}

impl ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -self.clone()
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        Expr::sum(iter)
    }
}

impl std::iter::Product for Expr {
    fn product<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        Expr::product(iter)
    }
}

/// Euclidean dot product `y_r . y_s` of two jet rows with `m` components.
pub fn dot(m: u32, r: u32, s: u32) -> Expr {
    (1..=m).map(|i| Expr::var(i, r) * Expr::var(i, s)).sum()
}
