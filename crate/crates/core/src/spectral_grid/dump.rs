//! Debug dumps of grid fields, row-major in `(i, j, k)`.

use std::io::{self, Read, Write};

use super::field::ScalarField;
use super::grid::Grid;
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"CLFIELD1";

/// CSV with header `i,j,k,<name>...`, one row per grid point.
pub fn write_csv<W: Write>(mut out: W, names: &[&str], fields: &[&ScalarField]) -> Result<()> {
    assert_eq!(names.len(), fields.len(), "one name per field");
    let grid = fields.first().map(|f| f.grid()).ok_or_else(|| Error::Config("nothing to dump".into()))?;
    write!(out, "i,j,k")?;
    for n in names {
        write!(out, ",{n}")?;
    }
    writeln!(out)?;
    for idx in 0..grid.len() {
        let (i, j, k) = grid.unravel(idx);
        write!(out, "{i},{j},{k}")?;
        for f in fields {
            write!(out, ",{:.17e}", f.values()[idx])?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Binary layout: magic, `N` and field count as little-endian `u64`, then the
/// values of each field as little-endian `f64`.
pub fn write_binary<W: Write>(mut out: W, fields: &[&ScalarField]) -> Result<()> {
    let grid = fields.first().map(|f| f.grid()).ok_or_else(|| Error::Config("nothing to dump".into()))?;
    out.write_all(MAGIC)?;
    out.write_all(&(grid.n() as u64).to_le_bytes())?;
    out.write_all(&(fields.len() as u64).to_le_bytes())?;
    for f in fields {
        for v in f.values() {
            out.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut input: R) -> Result<Vec<ScalarField>> {
    let mut magic = [0u8; 8];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Io(io::Error::new(io::ErrorKind::InvalidData, "not a field dump")));
    }
    let mut word = [0u8; 8];
    input.read_exact(&mut word)?;
    let grid = Grid::new(u64::from_le_bytes(word) as usize)?;
    input.read_exact(&mut word)?;
    let count = u64::from_le_bytes(word) as usize;
    (0..count)
        .map(|_| {
            let mut values = Vec::with_capacity(grid.len());
            for _ in 0..grid.len() {
                input.read_exact(&mut word)?;
                values.push(f64::from_le_bytes(word));
            }
            Ok(ScalarField::from_values(grid, values))
        })
        .collect()
}
