use std::collections::{BTreeMap, HashMap};

use num::BigRational;

use super::{Expr, Kind, Var};

/// Apply the derivation that sends each coordinate `v` to `images[v]`
/// (coordinates absent from the map are constants).
///
/// Every first-order operator in the crate is an instance: partial
/// derivatives, the total derivative, and vector fields acting on functions.
pub fn derivation(e: &Expr, images: &BTreeMap<Var, Expr>) -> Expr {
    let mask = images.keys().fold(0u128, |m, v| m | Expr::from_var(*v).var_mask());
    let mut memo = HashMap::new();
    derive_rec(e, images, mask, &mut memo)
}

fn derive_rec(
    e: &Expr,
    images: &BTreeMap<Var, Expr>,
    mask: u128,
    memo: &mut HashMap<u128, Expr>,
) -> Expr {
    if e.var_mask() & mask == 0 {
        return Expr::zero();
    }
    if let Some(d) = memo.get(&e.id()) {
        return d.clone();
    }
    let d = match e.kind() {
        Kind::Const(_) => Expr::zero(),
        Kind::Var(v) => images.get(v).cloned().unwrap_or_else(Expr::zero),
        Kind::Add(ts) => Expr::sum(ts.iter().map(|t| derive_rec(t, images, mask, memo))),
        Kind::Mul(fs) => {
            let mut terms = Vec::new();
            for (j, f) in fs.iter().enumerate() {
                let df = derive_rec(f, images, mask, memo);
                if df.is_zero() {
                    continue;
                }
                let mut factors: Vec<Expr> = Vec::with_capacity(fs.len());
                factors.extend(fs.iter().enumerate().filter(|(l, _)| *l != j).map(|(_, x)| x.clone()));
                factors.push(df);
                terms.push(Expr::product(factors));
            }
            Expr::sum(terms)
        }
        Kind::Pow(b, q) => {
            let db = derive_rec(b, images, mask, memo);
            if db.is_zero() {
                Expr::zero()
            } else {
                let c = BigRational::new((*q.numer()).into(), (*q.denom()).into());
                Expr::product([Expr::constant(c), b.pow(q - 1), db])
            }
        }
    };
    memo.insert(e.id(), d.clone());
    d
}

/// Exact partial derivative with respect to `y^i_r`.
pub fn diff(e: &Expr, i: u32, r: u32) -> Expr {
    let mut images = BTreeMap::new();
    images.insert(Var::new(i, r), Expr::one());
    derivation(e, &images)
}

/// Total derivative `d_T = sum_r y^i_{r+1} d/dy^i_r`; raises the order by one.
pub fn total_derivative(e: &Expr) -> Expr {
    let images: BTreeMap<Var, Expr> = e
        .vars()
        .into_iter()
        .map(|v| (v, Expr::from_var(v.raised())))
        .collect();
    derivation(e, &images)
}

/// Simultaneous substitution of coordinates.
pub fn subst(e: &Expr, bindings: &BTreeMap<Var, Expr>) -> Expr {
    let mask = bindings.keys().fold(0u128, |m, v| m | Expr::from_var(*v).var_mask());
    let mut memo = HashMap::new();
    subst_rec(e, bindings, mask, &mut memo)
}

fn subst_rec(
    e: &Expr,
    bindings: &BTreeMap<Var, Expr>,
    mask: u128,
    memo: &mut HashMap<u128, Expr>,
) -> Expr {
    if e.var_mask() & mask == 0 {
        return e.clone();
    }
    if let Some(s) = memo.get(&e.id()) {
        return s.clone();
    }
    let s = match e.kind() {
        Kind::Const(_) => e.clone(),
        Kind::Var(v) => bindings.get(v).cloned().unwrap_or_else(|| e.clone()),
        Kind::Add(ts) => Expr::sum(ts.iter().map(|t| subst_rec(t, bindings, mask, memo))),
        Kind::Mul(fs) => Expr::product(fs.iter().map(|f| subst_rec(f, bindings, mask, memo))),
        Kind::Pow(b, q) => subst_rec(b, bindings, mask, memo).pow(*q),
    };
    memo.insert(e.id(), s.clone());
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{equal_prob, Exponent, SampleConfig};

    fn y(i: u32, r: u32) -> Expr {
        Expr::var(i, r)
    }

    #[test]
    fn product_rule() {
        assert_eq!(diff(&(y(1, 0) * y(1, 1)), 1, 1), y(1, 0));
    }

    #[test]
    fn chain_rule_rational_exponent() {
        let e = y(1, 1).powi(2).sqrt();
        let expected = y(1, 1) * y(1, 1).powi(2).pow(Exponent::new(-1, 2));
        assert_eq!(diff(&e, 1, 1), expected);
    }

    #[test]
    fn constants_differentiate_to_zero() {
        for c in [Expr::int(7), Expr::rational(-3, 5), Expr::int(2).sqrt()] {
            assert!(diff(&c, 1, 0).is_zero());
            assert!(diff(&c, 3, 4).is_zero());
        }
    }

    #[test]
    fn total_derivative_examples() {
        let e = total_derivative(&(y(1, 0) * y(1, 1)));
        assert_eq!(e, y(1, 1).powi(2) + y(1, 0) * y(1, 2));
        let sq = y(1, 1).powi(2) + y(2, 1).powi(2);
        let d = total_derivative(&sq);
        let expected = Expr::int(2) * (y(1, 1) * y(1, 2) + y(2, 1) * y(2, 2));
        assert!(equal_prob(&d, &expected, &SampleConfig::default()).equal);
    }

    #[test]
    fn substitution_examples() {
        let gamma = y(1, 1) * y(2, 2);
        let mut b = BTreeMap::new();
        b.insert(Var::new(1, 2), gamma.clone());
        assert_eq!(subst(&y(1, 2), &b), gamma);

        let mut b = BTreeMap::new();
        b.insert(Var::new(1, 0), Expr::int(2) * y(1, 0));
        assert_eq!(subst(&(y(1, 0) + y(1, 1)), &b), Expr::int(2) * y(1, 0) + y(1, 1));
    }

    #[test]
    fn substitution_is_simultaneous() {
        let mut b = BTreeMap::new();
        b.insert(Var::new(1, 0), y(2, 0));
        b.insert(Var::new(2, 0), y(1, 0));
        assert_eq!(subst(&(y(1, 0) - y(2, 0)), &b), y(2, 0) - y(1, 0));
    }
}
