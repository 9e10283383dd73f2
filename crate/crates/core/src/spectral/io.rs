//! Trajectory tables and binary field snapshots.
//!
//! Snapshot layout, all little-endian:
//!
//! ```text
//! u64 dim | u64 points | f64 half_length | (f64 re, f64 im) × points^dim
//! ```
//!
//! Coefficients follow the flat FFT order of [`GridSpec::wavevector`].

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64 as C64;

use super::{GridSpec, SpectralField, State};
use crate::error::{domain, Error, Result};
use crate::transforms::DerivedParams;

pub fn write_snapshot<W: Write>(mut w: W, field: &SpectralField) -> Result<()> {
    let g = &field.grid;
    w.write_all(&(g.dim as u64).to_le_bytes())?;
    w.write_all(&(g.points as u64).to_le_bytes())?;
    w.write_all(&g.half_length.to_le_bytes())?;
    let mut buf = Vec::with_capacity(16 * field.coeffs.len());
    for c in &field.coeffs {
        buf.extend_from_slice(&c.re.to_le_bytes());
        buf.extend_from_slice(&c.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_snapshot<R: Read>(mut r: R) -> Result<SpectralField> {
    let mut word = [0u8; 8];
    let mut next = |r: &mut R| -> Result<[u8; 8]> {
        r.read_exact(&mut word)?;
        Ok(word)
    };
    let dim = u64::from_le_bytes(next(&mut r)?) as usize;
    let points = u64::from_le_bytes(next(&mut r)?) as usize;
    let half_length = f64::from_le_bytes(next(&mut r)?);
    let grid = GridSpec::new(dim, points, half_length)?;
    let mut buf = vec![0u8; 16 * grid.len()];
    r.read_exact(&mut buf)?;
    let coeffs = buf
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            C64::new(re, im)
        })
        .collect();
    SpectralField::from_coeffs(grid, coeffs)
}

fn label(x: f64) -> String {
    format!("{x}")
}

/// Column names of a trajectory table for the given `γ` list.
pub fn trajectory_header(gammas: &[f64]) -> Vec<String> {
    let mut h = vec!["t".to_string(), "phi_L2".to_string()];
    for &g in gammas {
        h.push(format!("phi_Hdot{}", label(g)));
        h.push(format!("phi_H{}", label(g)));
        h.push(format!("phit_H{}", label(g - 1.0)));
    }
    h
}

/// `t, ‖φ‖_{L²}` and for each `γ`: `‖φ‖_{Ḣ^γ}, ‖φ‖_{H^γ}, ‖φ_t‖_{H^{γ−1}}`.
pub fn norm_row(state: &State, params: &DerivedParams, gammas: &[f64]) -> Vec<f64> {
    let (phi, phit) = state.to_phi(params);
    let mut row = vec![state.t, phi.l2_norm()];
    for &g in gammas {
        row.push(phi.sobolev_norm(g, true));
        row.push(phi.sobolev_norm(g, false));
        row.push(phit.sobolev_norm(g - 1.0, false));
    }
    row
}

/// Streams norm rows to a CSV file.
pub struct TrajectoryWriter<W: Write> {
    inner: csv::Writer<W>,
    gammas: Vec<f64>,
}

impl TrajectoryWriter<std::fs::File> {
    pub fn create(path: impl AsRef<Path>, gammas: &[f64]) -> Result<Self> {
        Self::new(std::fs::File::create(path)?, gammas)
    }
}

impl<W: Write> TrajectoryWriter<W> {
    pub fn new(w: W, gammas: &[f64]) -> Result<Self> {
        let mut inner = csv::Writer::from_writer(w);
        inner.write_record(trajectory_header(gammas))?;
        Ok(Self {
            inner,
            gammas: gammas.to_vec(),
        })
    }

    pub fn push(&mut self, state: &State, params: &DerivedParams) -> Result<Vec<f64>> {
        let row = norm_row(state, params, &self.gammas);
        self.inner.write_record(row.iter().map(|v| format!("{v:e}")))?;
        Ok(row)
    }

    pub fn finish(mut self) -> Result<W> {
        self.inner.flush()?;
        self.inner
            .into_inner()
            .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
    }
}

/// A numeric CSV table with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_reader(std::fs::File::open(path)?)
    }

    pub fn from_reader<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let headers: Vec<String> = rdr.headers()?.iter().map(|s| s.trim().to_string()).collect();
        let mut rows = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let row = rec
                .iter()
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|e| domain(format!("row {}: cannot parse `{s}`: {e}", line + 2)))
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        Ok(Self { headers, rows })
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let i = self
            .headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| domain(format!("missing column `{name}`; available: {}", self.headers.join(", "))))?;
        Ok(self.rows.iter().map(|r| r[i]).collect())
    }
}
