//! Raw field dump: one JSON header line followed by little-endian `f64`
//! samples in storage order.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::field::Field;
use super::grid::Grid;
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    dim: usize,
    points_per_axis: usize,
    period: f64,
}

pub fn write_field<W: Write>(mut w: W, f: &Field) -> Result<()> {
    let g = f.grid();
    let header = Header {
        dim: g.dim(),
        points_per_axis: g.points_per_axis(),
        period: g.period(),
    };
    serde_json::to_writer(&mut w, &header)?;
    w.write_all(b"\n")?;
    let mut bytes = Vec::with_capacity(8 * f.samples().len());
    for v in f.samples() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&bytes)?;
    Ok(())
}

pub fn read_field<R: Read>(r: R) -> Result<Field> {
    let mut reader = BufReader::new(r);
    let mut line = String::new();
    reader.read_line(&mut line)?;
    if !line.ends_with('\n') {
        return Err(Error::MalformedDump("missing header line".into()));
    }
    let header: Header =
        serde_json::from_str(line.trim_end()).map_err(|e| Error::MalformedDump(format!("bad header: {e}")))?;
    let grid = Grid::new(header.dim, header.points_per_axis, header.period)?;
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    if bytes.len() != 8 * grid.len() {
        return Err(Error::MalformedDump(format!(
            "expected {} bytes of samples, found {}",
            8 * grid.len(),
            bytes.len()
        )));
    }
    let samples = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    Field::from_samples(grid, samples)
}

pub fn save_field(path: impl AsRef<Path>, f: &Field) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    write_field(&mut w, f)?;
    w.flush()?;
    Ok(())
}

pub fn load_field(path: impl AsRef<Path>) -> Result<Field> {
    read_field(std::fs::File::open(path)?)
}
