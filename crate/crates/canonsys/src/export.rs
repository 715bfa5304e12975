//! CSV exports and the binary matrix dump.

use crate::error::{CliError, Result};
use crate::report::ProfileRow;
use canonsys_core::operator_lab::DenseMatrix;
use std::io::{Read, Write};
use std::path::Path;

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().from_writer(w)
}

/// Columns `n, sigma_n` (1-based).
pub fn write_singular_values<W: Write>(w: W, sigma: &[f64]) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["n", "sigma_n"])?;
    for (k, s) in sigma.iter().enumerate() {
        out.serialize((k + 1, s))?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Columns `n, sigma_full, sigma_diag`.
pub fn write_singular_pairs<W: Write>(w: W, full: &[f64], diag: &[f64]) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["n", "sigma_full", "sigma_diag"])?;
    for (k, (a, b)) in full.iter().zip(diag).enumerate() {
        out.serialize((k + 1, a, b))?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Columns `index, lambda, sign` with eigenvalues in the order given (by modulus).
pub fn write_spectrum<W: Write>(w: W, eigenvalues: &[f64]) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["index", "lambda", "sign"])?;
    for (k, &l) in eigenvalues.iter().enumerate() {
        out.serialize((k + 1, l, if l < 0.0 { -1 } else { 1 }))?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Columns `r, n_of_r`.
pub fn write_counting<W: Write>(w: W, counting: &[(f64, usize)]) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["r", "n_of_r"])?;
    for row in counting {
        out.serialize(row)?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Columns `n, c_n, omega_n`.
pub fn write_profile<W: Write>(w: W, rows: &[ProfileRow]) -> Result<()> {
    let mut out = writer(w);
    for row in rows {
        out.serialize(row)?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Generic rows with a header.
pub fn write_rows<W: Write, R: serde::Serialize>(w: W, header: &[&str], rows: &[R]) -> Result<()> {
    let mut out = writer(w);
    out.write_record(header)?;
    for row in rows {
        out.serialize(row)?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Row-major little-endian `f64` entries after an 8-byte little-endian `u64` header
/// holding the dimension (the matrix is square).
pub fn write_matrix_dump<W: Write>(mut w: W, m: &DenseMatrix) -> std::io::Result<()> {
    assert_eq!(m.rows(), m.cols(), "matrix dumps are square");
    w.write_all(&(m.rows() as u64).to_le_bytes())?;
    let mut buf = Vec::with_capacity(8 * m.as_slice().len());
    for v in m.as_slice() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&buf)?;
    w.flush()
}

pub fn read_matrix_dump<R: Read>(mut r: R) -> Result<DenseMatrix> {
    let mut head = [0u8; 8];
    r.read_exact(&mut head).map_err(|e| CliError::Parse(format!("matrix dump header: {e}")))?;
    let n = u64::from_le_bytes(head) as usize;
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes).map_err(|e| CliError::Parse(format!("matrix dump body: {e}")))?;
    if n.checked_mul(n).and_then(|k| k.checked_mul(8)) != Some(bytes.len()) {
        return Err(CliError::Parse(format!("matrix dump holds {} bytes, expected {n}×{n} doubles", bytes.len())));
    }
    let data = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk"))).collect();
    Ok(DenseMatrix::from_row_major(n, n, data)?)
}

pub fn dump_to_file(path: &Path, m: &DenseMatrix) -> Result<()> {
    let f = std::fs::File::create(path).map_err(|source| CliError::Write { path: path.to_path_buf(), source })?;
    write_matrix_dump(std::io::BufWriter::new(f), m).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}
