//! On-disk interchange formats for codes and vectors.
//!
//! A code descriptor is a small JSON document: the field (r plus the
//! modulus, which must be the canonical one for that r), a label, and the
//! parity-check rows hex-packed. Vectors travel as hex strings in the same
//! packing: one byte per element for r <= 8, two little-endian bytes
//! otherwise. Codes built from an evaluation domain carry an optional
//! `meta` block so the polynomial decoder still applies after a round trip;
//! descriptors without it load as plain linear codes.

use crate::codes::{CodeError, CodeMeta, LinearCode};
use crate::gf::{Field, FieldRef, Gf};
use crate::matrix::Mat;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DESCRIPTOR_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DescriptorError {
    #[error("schema_version {0} not supported, this build reads 1")]
    BadSchema(u32),
    #[error("r = {0} is outside the supported range 1..=16")]
    BadR(u32),
    #[error("modulus {modulus:#x} is not the canonical modulus for r = {r}")]
    ModulusMismatch { modulus: u32, r: u32 },
    #[error("bad hex: {0}")]
    Hex(#[from] hex::FromHexError),
    #[error("packed vector holds {got} elements, expected {expected}")]
    BadLength { got: usize, expected: usize },
    #[error("element {value:#06x} is out of range for GF(2^{r})")]
    OutOfRange { value: u16, r: u32 },
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Bytes per packed element for a given field.
fn stride(f: &Field) -> usize {
    if f.r() <= 8 {
        1
    } else {
        2
    }
}

/// Hex-pack a vector of field elements, little-endian within each element.
pub fn pack_vec(f: &Field, v: &[Gf]) -> String {
    let mut bytes = Vec::with_capacity(v.len() * stride(f));
    for &x in v {
        bytes.push((x.0 & 0xff) as u8);
        if stride(f) == 2 {
            bytes.push((x.0 >> 8) as u8);
        }
    }
    hex::encode(bytes)
}

/// Inverse of [`pack_vec`], validating both the length and that every
/// element fits the field.
pub fn unpack_vec(f: &Field, s: &str, expected: usize) -> Result<Vec<Gf>, DescriptorError> {
    let bytes = hex::decode(s.trim())?;
    let st = stride(f);
    if bytes.len() != expected * st {
        return Err(DescriptorError::BadLength { got: bytes.len() / st, expected });
    }
    let mut out = Vec::with_capacity(expected);
    for chunk in bytes.chunks(st) {
        let value = if st == 2 {
            u16::from_le_bytes([chunk[0], chunk[1]])
        } else {
            chunk[0] as u16
        };
        if (value as usize) >= f.order() {
            return Err(DescriptorError::OutOfRange { value, r: f.r() });
        }
        out.push(Gf(value));
    }
    Ok(out)
}

/// JSON mirror of [`CodeMeta`]; present only for evaluation-domain codes.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct MetaBlock {
    pub gamma: u16,
    pub sn: usize,
    pub window_start: usize,
    pub window_len: usize,
    pub fold: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CodeDescriptor {
    pub schema_version: u32,
    pub label: String,
    pub r: u32,
    pub modulus: u32,
    /// Code length; each packed row must hold exactly this many elements.
    pub n: usize,
    pub rows: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<MetaBlock>,
}

impl CodeDescriptor {
    pub fn from_code(code: &LinearCode) -> CodeDescriptor {
        let f = code.field();
        let h = code.parity_check();
        let rows = (0..h.rows())
            .map(|i| {
                let row: Vec<Gf> = (0..h.cols()).map(|j| h.get(i, j)).collect();
                pack_vec(f, &row)
            })
            .collect();
        CodeDescriptor {
            schema_version: DESCRIPTOR_SCHEMA_VERSION,
            label: code.label().to_string(),
            r: f.r(),
            modulus: f.modulus(),
            n: code.n(),
            rows,
            meta: code.meta().map(|m| MetaBlock {
                gamma: m.gamma.0,
                sn: m.sn,
                window_start: m.window_start,
                window_len: m.window_len,
                fold: m.fold,
            }),
        }
    }

    /// The canonical field this descriptor names. Foreign moduli are
    /// rejected rather than constructed: every artifact in this crate uses
    /// the canonical modulus per r, so a mismatch means a damaged file.
    pub fn field(&self) -> Result<FieldRef, DescriptorError> {
        if self.r == 0 || self.r > 16 {
            return Err(DescriptorError::BadR(self.r));
        }
        let f = Field::canonical(self.r);
        if f.modulus() != self.modulus {
            return Err(DescriptorError::ModulusMismatch { modulus: self.modulus, r: self.r });
        }
        Ok(f)
    }

    pub fn parity(&self) -> Result<Mat, DescriptorError> {
        if self.schema_version != DESCRIPTOR_SCHEMA_VERSION {
            return Err(DescriptorError::BadSchema(self.schema_version));
        }
        let f = self.field()?;
        let mut rows = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            rows.push(unpack_vec(&f, row, self.n)?);
        }
        Ok(Mat::from_rows(f, rows))
    }

    pub fn to_code(&self) -> Result<LinearCode, DescriptorError> {
        let code = LinearCode::from_parity(self.parity()?, self.label.clone())?;
        Ok(match self.meta {
            Some(m) => code.with_meta(CodeMeta {
                gamma: Gf(m.gamma),
                sn: m.sn,
                window_start: m.window_start,
                window_len: m.window_len,
                fold: m.fold,
            }),
            None => code,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{frs_code, rs_code};
    use crate::syndec::PolyDecoder;

    #[test]
    fn vectors_round_trip_in_both_packings() {
        let f8 = Field::canonical(3);
        let v = vec![Gf(0), Gf(5), Gf(7), Gf(1)];
        let packed = pack_vec(&f8, &v);
        assert_eq!(packed, "00050701");
        assert_eq!(unpack_vec(&f8, &packed, 4).unwrap(), v);

        let f16 = Field::canonical(12);
        let w = vec![Gf(0x0abc), Gf(1), Gf(0x0fff)];
        let packed = pack_vec(&f16, &w);
        assert_eq!(packed, "bc0a0100ff0f");
        assert_eq!(unpack_vec(&f16, &packed, 3).unwrap(), w);
    }

    #[test]
    fn unpack_rejects_bad_input() {
        let f = Field::canonical(3);
        assert!(matches!(
            unpack_vec(&f, "0005", 3),
            Err(DescriptorError::BadLength { got: 2, expected: 3 })
        ));
        assert!(matches!(
            unpack_vec(&f, "0009", 2),
            Err(DescriptorError::OutOfRange { value: 9, r: 3 })
        ));
        assert!(matches!(unpack_vec(&f, "zz", 1), Err(DescriptorError::Hex(_))));
    }

    #[test]
    fn rs_descriptor_round_trips_with_working_decoder() {
        let f = Field::canonical(3);
        let gamma = f.root_of_order(7).unwrap();
        let code = rs_code(f, gamma, 7, 3).unwrap();
        let desc = CodeDescriptor::from_code(&code);
        let json = serde_json::to_string(&desc).unwrap();
        let back: CodeDescriptor = serde_json::from_str(&json).unwrap();
        let code2 = back.to_code().unwrap();
        assert_eq!(code2.parity_check(), code.parity_check());
        assert_eq!(code2.meta(), code.meta());
        // the round-tripped code still drives the polynomial decoder
        let dec = PolyDecoder::new(&code2).unwrap();
        let mut e = vec![Gf::ZERO; 7];
        e[2] = Gf(6);
        e[5] = Gf(3);
        assert_eq!(dec.decode(&code.syndrome(&e)).unwrap(), e);
    }

    #[test]
    fn folded_descriptor_keeps_the_fold() {
        let f = Field::canonical(4);
        let gamma = f.root_of_order(15).unwrap();
        let folded = frs_code(f, gamma, 3, 5, 4).unwrap();
        let desc = CodeDescriptor::from_code(&folded.base);
        assert_eq!(desc.meta.unwrap().fold, 3);
        let back = desc.to_code().unwrap();
        assert_eq!(back.meta().unwrap().fold, 3);
    }

    #[test]
    fn descriptor_rejects_foreign_modulus_and_schema() {
        let f = Field::canonical(3);
        let gamma = f.root_of_order(7).unwrap();
        let code = rs_code(f, gamma, 7, 3).unwrap();
        let mut desc = CodeDescriptor::from_code(&code);
        desc.modulus = 0x13; // irreducible, but not the canonical pick
        assert!(matches!(
            desc.parity(),
            Err(DescriptorError::ModulusMismatch { modulus: 0x13, r: 3 })
        ));
        let mut desc = CodeDescriptor::from_code(&code);
        desc.schema_version = 2;
        assert!(matches!(desc.parity(), Err(DescriptorError::BadSchema(2))));
    }
}
