use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::experiments::Sample;

/// Version of the diagnostics CSV layout, recorded in every manifest.
pub const CSV_SCHEMA_VERSION: u32 = 1;

pub const CSV_HEADER: &str = "t,energy,enstrophy,casimir_I,perp_norm,shell_distance,a,b,mu,lambda,chi_active";

/// One CSV row per observer invocation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRow {
    pub t: f64,
    pub energy: f64,
    pub enstrophy: f64,
    pub casimir_i: f64,
    pub perp_norm: f64,
    pub shell_distance: f64,
    pub a: f64,
    pub b: f64,
    pub mu: f64,
    pub lambda: f64,
    pub chi_active: bool,
}

impl From<&Sample> for DiagnosticsRow {
    fn from(s: &Sample) -> Self {
        Self {
            t: s.t,
            energy: s.energy,
            enstrophy: s.enstrophy,
            casimir_i: s.casimir_i,
            perp_norm: s.perp_norm,
            shell_distance: s.shell_distance,
            a: s.coords.a,
            b: s.coords.b,
            mu: s.coords.mu,
            lambda: s.coords.lambda,
            chi_active: s.chi_active,
        }
    }
}

/// Scientific notation with 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl DiagnosticsRow {
    pub fn to_csv_line(&self) -> String {
        let nums = [
            self.t,
            self.energy,
            self.enstrophy,
            self.casimir_i,
            self.perp_norm,
            self.shell_distance,
            self.a,
            self.b,
            self.mu,
            self.lambda,
        ];
        let mut line: Vec<String> = nums.iter().map(|&x| format_float(x)).collect();
        line.push(if self.chi_active { "1" } else { "0" }.to_string());
        line.join(",")
    }

    pub fn parse_csv_line(line: &str) -> Option<Self> {
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != 11 {
            return None;
        }
        let mut nums = [0.0f64; 10];
        for (slot, text) in nums.iter_mut().zip(&fields) {
            *slot = text.parse().ok()?;
        }
        let chi_active = match fields[10] {
            "0" => false,
            "1" => true,
            _ => return None,
        };
        let [t, energy, enstrophy, casimir_i, perp_norm, shell_distance, a, b, mu, lambda] = nums;
        Some(Self { t, energy, enstrophy, casimir_i, perp_norm, shell_distance, a, b, mu, lambda, chi_active })
    }
}

pub fn write_diagnostics(path: impl AsRef<Path>, samples: &[Sample]) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{CSV_HEADER}")?;
    for s in samples {
        writeln!(w, "{}", DiagnosticsRow::from(s).to_csv_line())?;
    }
    w.flush()
}

pub fn read_diagnostics(path: impl AsRef<Path>) -> std::io::Result<Vec<DiagnosticsRow>> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(std::io::Error::new(std::io::ErrorKind::InvalidData, "diagnostics header mismatch"));
    }
    lines
        .map(|l| {
            DiagnosticsRow::parse_csv_line(l)
                .ok_or_else(|| std::io::Error::new(std::io::ErrorKind::InvalidData, format!("bad row: {l}")))
        })
        .collect()
}
