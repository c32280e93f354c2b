use std::collections::HashMap;

use num::ToPrimitive;

use super::{Exponent, Expr, Kind, Var};
use crate::EvalError;

#[derive(Debug, Clone)]
enum Op {
    Const(f64),
    Load(usize, Var),
    Sum(Vec<usize>),
    Prod(Vec<usize>),
    PowI(usize, i32),
    PowF(usize, f64, Exponent),
}

/// A batch of expressions flattened into a deduplicated straight-line program.
///
/// Shared subexpressions across all outputs are evaluated once per point.
#[derive(Debug, Clone)]
pub struct Tape {
    m: usize,
    ops: Vec<Op>,
    outputs: Vec<usize>,
}

impl Tape {
    /// Compile for row-major coordinate arrays with `m` components per row.
    pub fn compile(exprs: &[Expr], m: usize) -> Tape {
        let mut tape = Tape { m, ops: Vec::new(), outputs: Vec::with_capacity(exprs.len()) };
        let mut slots = HashMap::new();
        for e in exprs {
            let s = tape.emit(e, &mut slots);
            tape.outputs.push(s);
        }
        tape
    }

    fn emit(&mut self, e: &Expr, slots: &mut HashMap<u128, usize>) -> usize {
        if let Some(&s) = slots.get(&e.id()) {
            return s;
        }
        let op = match e.kind() {
            Kind::Const(c) => Op::Const(c.to_f64().unwrap_or(f64::NAN)),
            Kind::Var(v) => {
                let idx = if v.i as usize <= self.m { v.index(self.m) } else { usize::MAX };
                Op::Load(idx, *v)
            }
            Kind::Add(ts) => Op::Sum(ts.iter().map(|t| self.emit(t, slots)).collect()),
            Kind::Mul(fs) => Op::Prod(fs.iter().map(|f| self.emit(f, slots)).collect()),
            Kind::Pow(b, q) => {
                let s = self.emit(b, slots);
                if q.is_integer() && q.numer().abs() <= i32::MAX as i64 {
                    Op::PowI(s, *q.numer() as i32)
                } else {
                    Op::PowF(s, *q.numer() as f64 / *q.denom() as f64, *q)
                }
            }
        };
        self.ops.push(op);
        let s = self.ops.len() - 1;
        slots.insert(e.id(), s);
        s
    }

    pub fn outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of distinct operations.
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn eval(&self, coords: &[f64], out: &mut [f64]) -> Result<(), EvalError> {
        let mut scratch = Vec::with_capacity(self.ops.len());
        self.eval_with(coords, &mut scratch, out)
    }

    /// Evaluate reusing a scratch buffer.
    pub fn eval_with(
        &self,
        coords: &[f64],
        scratch: &mut Vec<f64>,
        out: &mut [f64],
    ) -> Result<(), EvalError> {
        scratch.clear();
        for op in &self.ops {
            let v = match op {
                Op::Const(c) => *c,
                Op::Load(idx, var) => *coords.get(*idx).ok_or(EvalError::Uncovered(*var))?,
                Op::Sum(xs) => xs.iter().map(|&s| scratch[s]).sum(),
                Op::Prod(xs) => xs.iter().map(|&s| scratch[s]).product(),
                Op::PowI(s, k) => {
                    let b = scratch[*s];
                    if *k < 0 && b == 0.0 {
                        return Err(EvalError::DivisionByZero);
                    }
                    b.powi(*k)
                }
                Op::PowF(s, q, exact) => {
                    let b = scratch[*s];
                    if b <= 0.0 {
                        return Err(EvalError::NonPositiveBase {
                            base: b,
                            exponent: exact.to_string(),
                        });
                    }
                    b.powf(*q)
                }
            };
            scratch.push(v);
        }
        for (o, &s) in out.iter_mut().zip(&self.outputs) {
            let v = scratch[s];
            if !v.is_finite() {
                return Err(EvalError::NonFinite);
            }
            *o = v;
        }
        Ok(())
    }

    pub fn eval_vec(&self, coords: &[f64]) -> Result<Vec<f64>, EvalError> {
        let mut out = vec![0.0; self.outputs.len()];
        self.eval(coords, &mut out)?;
        Ok(out)
    }
}
