//! Matrix serialization.
//!
//! Binary layout: magic `RFTW`, version byte `1`, `u32` LE rows, `u32` LE cols,
//! then `rows * cols` pairs of `f64` LE `(re, im)` in row-major order.
//! The JSON mirror is `{"rows":r,"cols":c,"re":[...],"im":[...]}`.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"RFTW";
pub const VERSION: u8 = 1;

pub fn write_binary<W: Write>(m: &ComplexMatrix, mut w: W) -> Result<()> {
    let rows = u32::try_from(m.rows()).map_err(|_| Error::Format("row count exceeds u32".into()))?;
    let cols = u32::try_from(m.cols()).map_err(|_| Error::Format("column count exceeds u32".into()))?;
    w.write_all(MAGIC)?;
    w.write_all(&[VERSION])?;
    w.write_all(&rows.to_le_bytes())?;
    w.write_all(&cols.to_le_bytes())?;
    for z in m.data() {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn to_binary(m: &ComplexMatrix) -> Vec<u8> {
    let mut buf = Vec::with_capacity(13 + 16 * m.data().len());
    write_binary(m, &mut buf).expect("writing to a Vec cannot fail");
    buf
}

pub fn read_binary<R: Read>(mut r: R) -> Result<ComplexMatrix> {
    let mut header = [0u8; 13];
    r.read_exact(&mut header)
        .map_err(|e| Error::Format(format!("truncated matrix header: {e}")))?;
    if &header[..4] != MAGIC {
        return Err(Error::Format("bad magic, expected RFTW".into()));
    }
    if header[4] != VERSION {
        return Err(Error::Format(format!("unsupported matrix format version {}", header[4])));
    }
    let rows = u32::from_le_bytes(header[5..9].try_into().unwrap()) as usize;
    let cols = u32::from_le_bytes(header[9..13].try_into().unwrap()) as usize;
    let count = rows
        .checked_mul(cols)
        .ok_or_else(|| Error::Format("matrix size overflows".into()))?;
    let mut payload = Vec::new();
    r.read_to_end(&mut payload)?;
    if payload.len() != count * 16 {
        return Err(Error::Format(format!(
            "payload holds {} bytes, expected {}",
            payload.len(),
            count * 16
        )));
    }
    let data = payload
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect();
    ComplexMatrix::new(rows, cols, data).map_err(|e| Error::Format(e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            re: m.data().iter().map(|z| z.re).collect(),
            im: m.data().iter().map(|z| z.im).collect(),
        }
    }
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        if j.re.len() != j.im.len() {
            return Err(Error::Format("re and im arrays differ in length".into()));
        }
        let data = j.re.into_iter().zip(j.im).map(|(re, im)| Complex64::new(re, im)).collect();
        ComplexMatrix::new(j.rows, j.cols, data).map_err(|e| Error::Format(e.to_string()))
    }
}

/// Serde adapter so structs can carry a `ComplexMatrix` field as its JSON mirror.
pub mod serde_matrix {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &ComplexMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<ComplexMatrix, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        ComplexMatrix::try_from(j).map_err(serde::de::Error::custom)
    }
}
