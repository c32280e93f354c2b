//! System definition files and point arguments.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use jetfield::homog::DEField;
use jetfield::jetcalc::JetPoint;
use jetfield::varcalc::Lagrangian;

/// A JSON system definition: an equation field, a Lagrangian, or both.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub m: usize,
    pub n: usize,
    #[serde(default)]
    pub gamma: Option<Vec<String>>,
    #[serde(default)]
    pub lagrangian: Option<String>,
    /// Free text, accepted and ignored.
    #[serde(default)]
    #[allow(dead_code)]
    pub metadata: Option<serde_json::Value>,
}

impl SystemFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let sys: SystemFile =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        if sys.gamma.is_none() && sys.lagrangian.is_none() {
            bail!("{}: needs `gamma` or `lagrangian`", path.display());
        }
        Ok(sys)
    }

    pub fn field(&self) -> Result<DEField> {
        let Some(gamma) = &self.gamma else {
            bail!("system has no `gamma`");
        };
        Ok(DEField::parse(self.m, self.n, gamma)?)
    }

    pub fn lagrangian(&self) -> Result<Lagrangian> {
        let Some(text) = &self.lagrangian else {
            bail!("system has no `lagrangian`");
        };
        Ok(Lagrangian::parse(self.m, self.n, text)?)
    }
}

pub fn parse_numbers(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().with_context(|| format!("not a number: {s:?}")))
        .collect()
}

/// A point of `T^order R^m` from comma-separated row-major coordinates, or `std`:
/// `y0 = 0, y1 = e1, y2 = e2, y3 = -e1`, higher rows zero.
pub fn parse_point(text: &str, m: usize, order: usize) -> Result<JetPoint> {
    if text.trim() == "std" {
        if m < 2 {
            bail!("`std` initial data needs m >= 2");
        }
        let mut p = JetPoint::zeros(m, order);
        if order >= 1 {
            p.set(1, 1, 1.0);
        }
        if order >= 2 {
            p.set(2, 2, 1.0);
        }
        if order >= 3 {
            p.set(1, 3, -1.0);
        }
        return Ok(p);
    }
    let coords = parse_numbers(text)?;
    if coords.len() != (order + 1) * m {
        bail!("expected {} coordinates for T^{order} R^{m}, got {}", (order + 1) * m, coords.len());
    }
    Ok(JetPoint::new(m, order, coords)?)
}
