use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Expr, Tape};
use crate::jetcalc::JetPoint;

/// Configuration of probabilistic identity checks on the slit bundle.
#[derive(Debug, Clone)]
pub struct SampleConfig {
    pub count: usize,
    pub seed: u64,
    /// Coordinate range per jet level; the last entry covers all higher levels.
    pub ranges: Vec<(f64, f64)>,
    /// The level-1 row is rescaled to a norm drawn from this interval.
    pub row1_norm: (f64, f64),
    /// Minimum allowed norm of the level-1 row.
    pub guard: f64,
    /// Relative tolerance on `|a-b| / (1+|a|+|b|)`.
    pub tolerance: f64,
    /// Failed evaluations allowed per requested sample before giving up.
    pub retries: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            count: 100,
            seed: 0,
            ranges: vec![(-2.0, 2.0)],
            row1_norm: (0.5, 2.0),
            guard: 0.1,
            tolerance: 1e-9,
            retries: 20,
        }
    }
}

impl SampleConfig {
    pub fn with_count(mut self, count: usize) -> Self {
        assert!(count >= 1, "sample count must be positive");
        self.count = count;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    fn range(&self, level: usize) -> (f64, f64) {
        self.ranges[level.min(self.ranges.len() - 1)]
    }
}

/// Deterministic generator of slit jet points.
#[derive(Debug, Clone)]
pub struct Sampler {
    cfg: SampleConfig,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(cfg: &SampleConfig) -> Self {
        assert!(cfg.guard > 0.0, "guard must be positive");
        Sampler { cfg: cfg.clone(), rng: ChaCha8Rng::seed_from_u64(cfg.seed) }
    }

    /// A random point of `T^order R^m` whose level-1 row has norm in the configured band.
    pub fn point(&mut self, m: usize, order: usize) -> JetPoint {
        let mut coords = vec![0.0; (order + 1) * m];
        loop {
            for r in 0..=order {
                let (lo, hi) = self.cfg.range(r);
                for x in &mut coords[r * m..(r + 1) * m] {
                    *x = self.rng.gen_range(lo..=hi);
                }
            }
            if order == 0 {
                break;
            }
            let row = &mut coords[m..2 * m];
            let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-3 {
                continue;
            }
            let (lo, hi) = self.cfg.row1_norm;
            let target = self.rng.gen_range(lo..=hi);
            row.iter_mut().for_each(|x| *x *= target / norm);
            if target >= self.cfg.guard {
                break;
            }
        }
        JetPoint::new(m, order, coords).expect("consistent dimensions")
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// One random slit point with the default configuration and the given seed.
pub fn sample_point(m: usize, order: usize, seed: u64) -> JetPoint {
    Sampler::new(&SampleConfig::default().with_seed(seed)).point(m, order)
}

/// Outcome of a probabilistic identity check.
#[derive(Debug, Clone)]
pub struct EqualityReport {
    pub equal: bool,
    /// Largest relative residual `|a-b| / (1+|a|+|b|)` over all samples and pairs.
    pub max_residual: f64,
    pub samples: usize,
    /// Sample points rejected because evaluation failed there.
    pub failures: usize,
    /// Coordinates of the sample with the largest residual.
    pub worst: Option<Vec<f64>>,
}

/// Check every pair `a_k == b_k` at `cfg.count` random points of `T^order R^m`.
pub fn equal_prob_pairs(
    pairs: &[(Expr, Expr)],
    m: usize,
    order: usize,
    cfg: &SampleConfig,
) -> EqualityReport {
    let exprs: Vec<Expr> = pairs.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
    let tape = Tape::compile(&exprs, m);
    let mut sampler = Sampler::new(cfg);
    let mut out = vec![0.0; exprs.len()];
    let mut scratch = Vec::new();
    let mut report = EqualityReport {
        equal: true,
        max_residual: 0.0,
        samples: 0,
        failures: 0,
        worst: None,
    };
    let cap = cfg.count * cfg.retries.max(1);
    while report.samples < cfg.count {
        if report.failures >= cap {
            report.equal = false;
            if report.samples == 0 {
                report.max_residual = f64::INFINITY;
            }
            return report;
        }
        let p = sampler.point(m, order);
        if tape.eval_with(p.coords(), &mut scratch, &mut out).is_err() {
            report.failures += 1;
            continue;
        }
        report.samples += 1;
        for pair in out.chunks(2) {
            let (a, b) = (pair[0], pair[1]);
            let res = (a - b).abs() / (1.0 + a.abs() + b.abs());
            if res > report.max_residual || report.worst.is_none() {
                if res > report.max_residual {
                    report.max_residual = res;
                }
                report.worst = Some(p.coords().to_vec());
            }
        }
    }
    report.equal = report.max_residual <= cfg.tolerance;
    report
}

/// Check `a == b`, sampling in explicitly given dimensions.
pub fn equal_prob_in(a: &Expr, b: &Expr, m: usize, order: usize, cfg: &SampleConfig) -> EqualityReport {
    equal_prob_pairs(&[(a.clone(), b.clone())], m, order, cfg)
}

/// Check `a == b`, sampling in the smallest jet space covering both.
pub fn equal_prob(a: &Expr, b: &Expr, cfg: &SampleConfig) -> EqualityReport {
    let (ma, na) = a.dims();
    let (mb, nb) = b.dims();
    equal_prob_in(a, b, ma.max(mb).max(1), na.max(nb).max(1), cfg)
}

/// Check that every expression vanishes.
pub fn zero_prob(exprs: &[Expr], m: usize, order: usize, cfg: &SampleConfig) -> EqualityReport {
    let pairs: Vec<_> = exprs.iter().map(|e| (e.clone(), Expr::zero())).collect();
    equal_prob_pairs(&pairs, m, order, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_equalities() {
        let cfg = SampleConfig::default();
        let x = Expr::var(1, 1);
        assert!(equal_prob(&(&x * &x), &x.powi(2), &cfg).equal);
        let r = equal_prob(&x, &Expr::var(1, 2), &cfg);
        assert!(!r.equal);
        assert!(r.max_residual > 0.01);
        assert!(r.worst.is_some());
    }

    #[test]
    fn deterministic_given_seed() {
        let cfg = SampleConfig::default().with_seed(42);
        let a = Sampler::new(&cfg).point(3, 4);
        let b = Sampler::new(&cfg).point(3, 4);
        assert_eq!(a.coords(), b.coords());
        let c = Sampler::new(&cfg.with_seed(43)).point(3, 4);
        assert_ne!(a.coords(), c.coords());
    }

    #[test]
    fn samples_respect_guard_and_band() {
        let mut s = Sampler::new(&SampleConfig::default());
        for _ in 0..200 {
            let p = s.point(2, 3);
            let n = p.row_norm(1);
            assert!((0.5..=2.0).contains(&n));
            assert!(p.coords().iter().all(|x| x.abs() <= 2.0 + 1e-12));
        }
    }

    #[test]
    fn failing_points_are_resampled() {
        // sqrt(y1_0) is undefined for half of the samples
        let e = Expr::var(1, 0).sqrt();
        let r = equal_prob(&e, &e.clone(), &SampleConfig::default());
        assert!(r.equal);
        assert!(r.failures > 0);
        assert_eq!(r.samples, 100);
    }
}
