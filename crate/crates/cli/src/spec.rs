//! Experiment descriptions in a flat `key = value` format.
//!
//! ```text
//! # 3D Dirichlet convergence run
//! problem = dirichlet-3d
//! k = 20
//! h = 1/32, 1/64, 1/128
//! methods = gmres, sks
//! ```
//!
//! Lists are comma separated. `h` accepts `1/64` or decimals; `k` accepts
//! complex values as `35.7+0.43i`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use compact_helmholtz::{Error, Family, Method, Wavenumber, C64};

use crate::format::Format;

pub const DEFAULT_MEM_BUDGET: u64 = 8 << 30;

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub problem: Family,
    pub k: Vec<C64>,
    /// Interval counts; `h = 1 / intervals`.
    pub grids: Vec<usize>,
    pub methods: Vec<Method>,
    pub tol: f64,
    pub max_iter: usize,
    pub restart: Option<usize>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub mem_budget: u64,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            problem: Family::Dirichlet3d,
            k: vec![C64::new(20.0, 0.0)],
            grids: vec![32, 64],
            methods: vec![Method::Gmres, Method::Sks],
            tol: 1e-10,
            max_iter: 100,
            restart: None,
            format: Format::Csv,
            out: None,
            seed: 0,
            mem_budget: DEFAULT_MEM_BUDGET,
        }
    }
}

fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

/// Splits `text` into keys and values. Blank lines and `#` comments are
/// skipped; repeated keys are an error.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>, Error> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| config(format!("line {}: expected `key = value`", n + 1)))?;
        let key = key.trim().replace('-', "_").to_ascii_lowercase();
        if out.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(config(format!("line {}: duplicate key `{key}`", n + 1)));
        }
    }
    Ok(out)
}

pub fn parse_complex(s: &str) -> Result<C64, Error> {
    let s = s.trim().replace(' ', "");
    let bad = || config(format!("cannot parse wavenumber `{s}`"));
    if let Some(body) = s.strip_suffix('i') {
        // split at the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let cut = (1..bytes.len())
            .rev()
            .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
            .ok_or_else(bad)?;
        let re: f64 = body[..cut].parse().map_err(|_| bad())?;
        let im: f64 = body[cut..].parse().map_err(|_| bad())?;
        Ok(C64::new(re, im))
    } else {
        Ok(C64::new(s.parse().map_err(|_| bad())?, 0.0))
    }
}

/// Grid step as an interval count of the unit interval.
pub fn parse_step(s: &str) -> Result<usize, Error> {
    let s = s.trim();
    let bad = || config(format!("cannot parse grid step `{s}`"));
    let h: f64 = match s.split_once('/') {
        Some((a, b)) => a.trim().parse::<f64>().map_err(|_| bad())? / b.trim().parse::<f64>().map_err(|_| bad())?,
        None => s.parse().map_err(|_| bad())?,
    };
    if !(h > 0.0 && h <= 1.0) {
        return Err(config(format!("grid step `{s}` must lie in (0, 1]")));
    }
    let m = (1.0 / h).round();
    if ((1.0 / h) - m).abs() > 1e-9 * m {
        return Err(config(format!("grid step `{s}` does not divide the unit interval")));
    }
    Ok(m as usize)
}

pub fn parse_list<T>(s: &str, item: impl Fn(&str) -> Result<T, Error>) -> Result<Vec<T>, Error> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(item).collect()
}

impl ExperimentSpec {
    pub fn from_text(text: &str) -> Result<Self, Error> {
        let mut spec = ExperimentSpec::default();
        for (key, value) in parse_pairs(text)? {
            spec.set(&key, &value)?;
        }
        Ok(spec)
    }

    /// Sets one field from its textual value. Keys match the command flags
    /// with `_` for `-`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), Error> {
        let num = |what: &str| config(format!("cannot parse {what} `{value}`"));
        match key {
            "problem" => self.problem = value.parse()?,
            "k" => self.k = parse_list(value, parse_complex)?,
            "h" => self.grids = parse_list(value, parse_step)?,
            "methods" | "method" => self.methods = parse_list(value, |m| m.parse())?,
            "tol" => self.tol = value.parse().map_err(|_| num("tol"))?,
            "max_iter" => self.max_iter = value.parse().map_err(|_| num("max_iter"))?,
            "restart" => {
                self.restart = match value {
                    "" | "none" => None,
                    v => Some(v.parse().map_err(|_| num("restart"))?),
                }
            }
            "format" => self.format = value.parse()?,
            "out" => self.out = Some(PathBuf::from(value)),
            "seed" => self.seed = value.parse().map_err(|_| num("seed"))?,
            "mem_budget" => self.mem_budget = parse_bytes(value)?,
            other => return Err(config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Grids must run coarse to fine and every `(k, h)` pair must resolve
    /// the wavelength.
    pub fn validate(&self) -> Result<(), Error> {
        if self.k.is_empty() {
            return Err(config("empty wavenumber list"));
        }
        if self.grids.windows(2).any(|w| w[0] >= w[1]) {
            return Err(config("grid steps must be listed in strictly decreasing order"));
        }
        for &k in &self.k {
            let w = Wavenumber::new(k)?;
            for &m in &self.grids {
                w.check_ppw(1.0 / m as f64)?;
            }
        }
        if !(self.tol > 0.0) || self.max_iter == 0 {
            return Err(config("tol must be positive and max_iter at least 1"));
        }
        Ok(())
    }
}

/// Byte counts with an optional `K`, `M`, `G` (binary) suffix.
pub fn parse_bytes(s: &str) -> Result<u64, Error> {
    let t = s.trim().to_ascii_uppercase();
    let t = t.strip_suffix("IB").or_else(|| t.strip_suffix('B')).unwrap_or(&t);
    let (digits, shift) = match t.chars().last() {
        Some('K') => (&t[..t.len() - 1], 10),
        Some('M') => (&t[..t.len() - 1], 20),
        Some('G') => (&t[..t.len() - 1], 30),
        _ => (t, 0),
    };
    let v: f64 = digits
        .trim()
        .parse()
        .map_err(|_| config(format!("cannot parse memory budget `{s}`")))?;
    Ok((v * (1u64 << shift) as f64) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_spec() {
        let spec = ExperimentSpec::from_text(
            "# comment\nproblem = dirichlet-neumann-3d\nk = 20, 35.7+0.43i\nh = 1/32, 0.015625\nmethods = gmres\nmax-iter = 50\n",
        )
        .unwrap();
        assert_eq!(spec.problem, Family::DirichletNeumann3d);
        assert_eq!(spec.k, vec![C64::new(20.0, 0.0), C64::new(35.7, 0.43)]);
        assert_eq!(spec.grids, vec![32, 64]);
        assert_eq!(spec.methods, vec![Method::Gmres]);
        assert_eq!(spec.max_iter, 50);
    }

    #[test]
    fn complex_with_exponent() {
        assert_eq!(parse_complex("1e1-2.5e-1i").unwrap(), C64::new(10.0, -0.25));
    }

    #[test]
    fn rejects_unsorted_grids_and_bad_steps() {
        let spec = ExperimentSpec::from_text("h = 1/64, 1/32").unwrap();
        assert!(spec.validate().is_err());
        assert!(parse_step("0.3").is_err());
        assert!(ExperimentSpec::from_text("colour = blue").is_err());
    }

    #[test]
    fn shipped_specs_are_valid() {
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs");
        let mut seen = 0;
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            let spec = ExperimentSpec::from_text(&std::fs::read_to_string(&path).unwrap()).unwrap();
            spec.validate().unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            seen += 1;
        }
        assert!(seen >= 8);
    }

    #[test]
    fn memory_suffixes() {
        assert_eq!(parse_bytes("8G").unwrap(), 8 << 30);
        assert_eq!(parse_bytes("512MiB").unwrap(), 512 << 20);
        assert_eq!(parse_bytes("1000").unwrap(), 1000);
    }
}
