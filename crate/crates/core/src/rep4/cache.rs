//! Binary cache of projector tables.
//!
//! Layout (little endian): magic `QCPJ`, `u32` version, `u32` signature
//! length and UTF-8 signature, `u32` entry count, then per entry `u32 n`,
//! `u32 m`, `u32 multiplicity`, `u32 rank`, `u32 dim` and the `dim x rank`
//! basis in row-major `f64`.

use nalgebra::DMatrix;

use super::projectors::{IrrepProjector, ProjectorTable};
use super::space::{lift_generators, TensorSpace};
use crate::error::{QcError, Result};

const MAGIC: &[u8; 4] = b"QCPJ";
const VERSION: u32 = 1;
const MAX_DIM: usize = 4096;

pub fn encode(table: &ProjectorTable) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    let sig = table.space.signature();
    out.extend_from_slice(&(sig.len() as u32).to_le_bytes());
    out.extend_from_slice(sig.as_bytes());
    out.extend_from_slice(&(table.entries.len() as u32).to_le_bytes());
    for e in &table.entries {
        for v in [e.n, e.m, e.multiplicity as u32, e.rank() as u32, e.basis.nrows() as u32] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for r in 0..e.basis.nrows() {
            for c in 0..e.basis.ncols() {
                out.extend_from_slice(&e.basis[(r, c)].to_le_bytes());
            }
        }
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.buf.len() < n {
            return Err(QcError::Cache("truncated input".into()));
        }
        let (head, tail) = self.buf.split_at(n);
        self.buf = tail;
        Ok(head)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

/// Decodes a cache blob. Rejects malformed input without panicking and
/// checks that the stored bases have the dimensions of the named space.
pub fn decode(bytes: &[u8]) -> Result<ProjectorTable> {
    let mut r = Reader { buf: bytes };
    if r.take(4)? != MAGIC {
        return Err(QcError::Cache("bad magic".into()));
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(QcError::Cache(format!("unsupported version {version}")));
    }
    let sig_len = r.u32()? as usize;
    let sig = std::str::from_utf8(r.take(sig_len)?).map_err(|_| QcError::Cache("signature is not UTF-8".into()))?;
    let space = TensorSpace::from_signature(sig).ok_or_else(|| QcError::Cache(format!("unknown signature {sig:?}")))?;
    let dim = space.dim();
    if dim > MAX_DIM {
        return Err(QcError::Cache(format!("space dimension {dim} too large")));
    }
    let count = r.u32()? as usize;
    if count > dim {
        return Err(QcError::Cache("more entries than dimensions".into()));
    }
    let mut entries = Vec::with_capacity(count);
    let mut total_rank = 0;
    for _ in 0..count {
        let n = r.u32()?;
        let m = r.u32()?;
        let multiplicity = r.u32()? as usize;
        let rank = r.u32()? as usize;
        let rows = r.u32()? as usize;
        if rows != dim || rank > dim || n > 64 || m > 64 {
            return Err(QcError::Cache("entry header inconsistent with space".into()));
        }
        let irrep = ((n + 1) * (m + 1)) as usize;
        if multiplicity == 0 || irrep * multiplicity != rank {
            return Err(QcError::Cache(format!("rank {rank} does not match label ({n},{m})")));
        }
        total_rank += rank;
        if total_rank > dim {
            return Err(QcError::Cache("ranks exceed space dimension".into()));
        }
        let mut basis = DMatrix::zeros(rows, rank);
        for row in 0..rows {
            for col in 0..rank {
                let v = r.f64()?;
                if !v.is_finite() {
                    return Err(QcError::Cache("non-finite entry".into()));
                }
                basis[(row, col)] = v;
            }
        }
        let projector = &basis * basis.transpose();
        entries.push(IrrepProjector {
            n,
            m,
            basis,
            projector,
            multiplicity,
        });
    }
    if total_rank != dim {
        return Err(QcError::Cache("ranks do not sum to the space dimension".into()));
    }
    if !r.buf.is_empty() {
        return Err(QcError::Cache("trailing bytes".into()));
    }
    Ok(ProjectorTable {
        generators: lift_generators(&space),
        space,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep4::build_projectors;

    #[test]
    fn round_trip() {
        let t = build_projectors(&TensorSpace::torsion()).unwrap();
        let bytes = encode(&t);
        let back = decode(&bytes).unwrap();
        assert_eq!(back.labels(), t.labels());
        for (a, b) in back.entries.iter().zip(&t.entries) {
            assert_eq!(a.basis, b.basis);
        }
        assert_eq!(encode(&back), bytes);
    }

    #[test]
    fn rejects_corruption() {
        let t = build_projectors(&TensorSpace::torsion()).unwrap();
        let bytes = encode(&t);
        assert!(decode(&bytes[..bytes.len() - 1]).is_err());
        assert!(decode(b"").is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(decode(&bad).is_err());
        let mut extra = bytes;
        extra.push(0);
        assert!(decode(&extra).is_err());
    }
}
