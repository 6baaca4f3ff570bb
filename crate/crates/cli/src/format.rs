//! Plain-text tables: CSV for machines, Markdown for people.

use std::fmt::Write as _;

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Markdown,
}

impl std::str::FromStr for Format {
    type Err = compact_helmholtz::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "markdown" | "md" => Ok(Format::Markdown),
            other => Err(compact_helmholtz::Error::Config(format!("unknown format `{other}`"))),
        }
    }
}

/// Six significant digits with `%g` layout: fixed notation for exponents in
/// `-4..6`, scientific otherwise, trailing zeros removed.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `re+imi`, both parts with six significant digits.
pub fn complex(z: Complex64) -> String {
    let im = sig6(z.im);
    if im.starts_with('-') {
        format!("{}{im}i", sig6(z.re))
    } else {
        format!("{}+{im}i", sig6(z.re))
    }
}

/// Wavenumbers print as plain reals when the imaginary part vanishes.
pub fn wavenumber(k: Complex64) -> String {
    if k.im == 0.0 {
        sig6(k.re)
    } else {
        complex(k)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "| {} |", self.header.join(" | "));
        let _ = writeln!(out, "|{}", "---|".repeat(self.header.len()));
        for row in &self.rows {
            let cells: Vec<&str> = row.iter().map(|c| if c.is_empty() { " " } else { c.as_str() }).collect();
            let _ = writeln!(out, "| {} |", cells.join(" | "));
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Markdown => self.markdown(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(3.882345678e-3), "0.00388235");
        assert_eq!(sig6(1.0), "1");
        assert_eq!(sig6(123456.7), "123457");
        assert_eq!(sig6(1234567.0), "1.23457e6");
        assert_eq!(sig6(1.2e-8), "1.2e-8");
        assert_eq!(sig6(-0.5), "-0.5");
        assert_eq!(sig6(999999.6), "1e6");
    }

    #[test]
    fn complex_layout() {
        assert_eq!(complex(Complex64::new(35.7, 0.43)), "35.7+0.43i");
        assert_eq!(complex(Complex64::new(1.0, -2.0)), "1-2i");
    }
}
