//! Binary dump of a phase-cell basis matrix.
//!
//! Layout, all little-endian:
//!
//! | bytes | content |
//! |-------|---------|
//! | 8     | magic `PCBASIS\0` |
//! | 4     | `L` (u32) |
//! | 4     | degrees of freedom (u32) |
//! | 16·D² | entries as `(re, im)` f64 pairs, column-major, `D = L^(2·dof)` |
//!
//! Column `k` is the basis vector with flat label `k` in the Fock basis.

use physdist_core::linalg::CMatrix;
use physdist_core::Complex64;

pub const MAGIC: &[u8; 8] = b"PCBASIS\0";
const HEADER_LEN: usize = 16;

pub fn encode(l: usize, dof: usize, m: &CMatrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 16 * m.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(l as u32).to_le_bytes());
    out.extend_from_slice(&(dof as u32).to_le_bytes());
    for z in m.as_slice() {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    out
}

/// Inverse of [`encode`]: `(L, dof, matrix)`.
pub fn decode(bytes: &[u8]) -> Result<(usize, usize, CMatrix), String> {
    if bytes.len() < HEADER_LEN || &bytes[..8] != MAGIC {
        return Err("not a phase-cell basis file".into());
    }
    let word = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap()) as usize;
    let (l, dof) = (word(8), word(12));
    let dim = (l * l)
        .checked_pow(dof as u32)
        .ok_or_else(|| format!("header L={l}, dof={dof} is too large"))?;
    let body = &bytes[HEADER_LEN..];
    if body.len() != 16 * dim * dim {
        return Err(format!(
            "expected {} data bytes for dimension {dim}, found {}",
            16 * dim * dim,
            body.len()
        ));
    }
    let data: Vec<Complex64> = body
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect();
    Ok((l, dof, CMatrix::from_vec(dim, dim, data)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use physdist_core::phase::{build_phase_lattice_1d, PhaseWindow};

    #[test]
    fn round_trip() {
        let m = build_phase_lattice_1d(3, PhaseWindow::Shifted)
            .unwrap()
            .matrix();
        let bytes = encode(3, 1, &m);
        assert_eq!(&bytes[..8], MAGIC);
        let (l, dof, back) = decode(&bytes).unwrap();
        assert_eq!((l, dof), (3, 1));
        assert_eq!(back, m);
        assert!(decode(&bytes[..bytes.len() - 1]).is_err());
    }
}
