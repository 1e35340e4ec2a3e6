//! Operator file formats.
//!
//! `QOPB` binary layout (all integers and floats little-endian):
//!
//! | bytes          | content                               |
//! |----------------|---------------------------------------|
//! | 0..4           | magic `QOPB`                          |
//! | 4              | version `0x01`                        |
//! | 5..9           | `u32` local dimension `d`             |
//! | 9..13          | `u32` number of subsystems `n`        |
//! | 13..           | `d^{2n}` pairs of `f64` `(re, im)`, row-major |
//!
//! The JSON form is `{"d": …, "n": …, "re": [[…]], "im": [[…]]}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Operator;
use crate::error::{Error, Result};

pub const QOPB_MAGIC: &[u8; 4] = b"QOPB";
pub const QOPB_VERSION: u8 = 0x01;
const HEADER_LEN: usize = 13;

#[derive(Serialize, Deserialize)]
struct OperatorJson {
    d: usize,
    n: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Operator {
    pub fn to_qopb(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + 16 * self.entries().len());
        out.extend_from_slice(QOPB_MAGIC);
        out.push(QOPB_VERSION);
        out.extend_from_slice(&(self.local_dim() as u32).to_le_bytes());
        out.extend_from_slice(&(self.num_subsystems() as u32).to_le_bytes());
        for z in self.entries() {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
        out
    }

    pub fn from_qopb(bytes: &[u8]) -> Result<Operator> {
        if bytes.len() < HEADER_LEN || &bytes[..4] != QOPB_MAGIC {
            return Err(Error::Format("missing QOPB magic".into()));
        }
        if bytes[4] != QOPB_VERSION {
            return Err(Error::Format(format!("unsupported QOPB version {}", bytes[4])));
        }
        let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap()) as usize;
        let (d, n) = (u32_at(5), u32_at(9));
        let mut op = Operator::zeros(d, n)?;
        let count = op.side() * op.side();
        let body = &bytes[HEADER_LEN..];
        if body.len() != 16 * count {
            return Err(Error::Format(format!(
                "QOPB body holds {} bytes, expected {}",
                body.len(),
                16 * count
            )));
        }
        let f64_at = |i: usize| f64::from_le_bytes(body[i..i + 8].try_into().unwrap());
        let side = op.side();
        for k in 0..count {
            op.set(k / side, k % side, Complex64::new(f64_at(16 * k), f64_at(16 * k + 8)));
        }
        Ok(op)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let side = self.side();
        let rows = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..side).map(|r| (0..side).map(|c| f(&self.get(r, c))).collect()).collect()
        };
        let j = OperatorJson {
            d: self.local_dim(),
            n: self.num_subsystems(),
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        };
        serde_json::to_value(j).expect("plain data")
    }

    pub fn from_json_value(value: serde_json::Value) -> Result<Operator> {
        let j: OperatorJson = serde_json::from_value(value)?;
        let mut op = Operator::zeros(j.d, j.n)?;
        let side = op.side();
        let shaped = |m: &Vec<Vec<f64>>| m.len() == side && m.iter().all(|r| r.len() == side);
        if !shaped(&j.re) || !shaped(&j.im) {
            return Err(Error::Format(format!("re/im must be {side} x {side}")));
        }
        for r in 0..side {
            for c in 0..side {
                op.set(r, c, Complex64::new(j.re[r][c], j.im[r][c]));
            }
        }
        Ok(op)
    }

    /// Reads either format, sniffing the `QOPB` magic.
    pub fn from_bytes(bytes: &[u8]) -> Result<Operator> {
        if bytes.starts_with(QOPB_MAGIC) {
            Operator::from_qopb(bytes)
        } else {
            Operator::from_json_value(serde_json::from_slice(bytes)?)
        }
    }
}
