//! Binary tensor cache.
//!
//! Layout, little-endian throughout:
//!
//! | bytes | field |
//! |---|---|
//! | 4 | magic `IBCT` |
//! | 4 | format version (u32) |
//! | 4 | index ordering tag |
//! | 4 | order `m` (u32) |
//! | 8 × 4 | `ϖ`, `e`, `C`, drop tolerance (f64) |
//! | 8 | record count (u64) |
//! | 20 × nnz | `(rank α, rank λ, rank κ)` as u32 then the value as f64 |
//!
//! Records are sorted by `(α, λ, κ)`. Values are those of the reference
//! center `[0, 1]`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::coeff::{CollisionTensor, KernelSpec};
use crate::error::{Error, Result};
use crate::index::{basis_size, ORDERING_TAG};

pub const MAGIC: [u8; 4] = *b"IBCT";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 4 + 4 + 32 + 8;
const RECORD_LEN: usize = 20;

/// Decoded cache header.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CacheHeader {
    pub version: u32,
    pub m: usize,
    pub kernel: KernelSpec,
    pub drop_tol: f64,
    pub nnz: u64,
}

pub fn cache_write(tensor: &CollisionTensor, path: &Path) -> Result<()> {
    if tensor.center_temperature() != 1.0 || tensor.scale() != 1.0 {
        return Err(Error::Config("only reference-center tensors can be cached".into()));
    }
    let mut w = BufWriter::new(File::create(path)?);
    let k = tensor.kernel();
    w.write_all(&MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&ORDERING_TAG)?;
    w.write_all(&(tensor.m() as u32).to_le_bytes())?;
    for v in [k.varpi, k.e, k.c_const, tensor.drop_tol()] {
        w.write_all(&v.to_le_bytes())?;
    }
    w.write_all(&(tensor.nnz() as u64).to_le_bytes())?;
    for (a, l, kk, v) in tensor.entries() {
        w.write_all(&a.to_le_bytes())?;
        w.write_all(&l.to_le_bytes())?;
        w.write_all(&kk.to_le_bytes())?;
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

fn u32_at(b: &[u8], o: usize) -> u32 {
    u32::from_le_bytes(b[o..o + 4].try_into().expect("4 bytes"))
}

fn f64_at(b: &[u8], o: usize) -> f64 {
    f64::from_le_bytes(b[o..o + 8].try_into().expect("8 bytes"))
}

fn parse_header(b: &[u8], path: &Path) -> Result<CacheHeader> {
    let incompatible = |reason: String| Error::IncompatibleCache { path: path.to_path_buf(), reason };
    let corrupt = |reason: String| Error::CorruptCache { path: path.to_path_buf(), reason };
    if b.len() < 4 || b[..4] != MAGIC {
        return Err(incompatible("not a collision tensor cache (bad magic)".into()));
    }
    if b.len() < HEADER_LEN {
        return Err(corrupt(format!("header truncated at {} bytes", b.len())));
    }
    let version = u32_at(b, 4);
    if version != VERSION {
        return Err(incompatible(format!("format version {version}, expected {VERSION}")));
    }
    if b[8..12] != ORDERING_TAG {
        return Err(incompatible(format!("index ordering tag {:?} is not {:?}", &b[8..12], ORDERING_TAG)));
    }
    let m = u32_at(b, 12) as usize;
    let kernel = KernelSpec { varpi: f64_at(b, 16), e: f64_at(b, 24), c_const: f64_at(b, 32) };
    kernel.validate().map_err(|e| corrupt(format!("header kernel: {e}")))?;
    let drop_tol = f64_at(b, 40);
    let nnz = u64::from_le_bytes(b[48..56].try_into().expect("8 bytes"));
    Ok(CacheHeader { version, m, kernel, drop_tol, nnz })
}

/// Reads only the header.
pub fn cache_header(path: &Path) -> Result<CacheHeader> {
    let mut buf = Vec::with_capacity(HEADER_LEN);
    File::open(path)?.take(HEADER_LEN as u64).read_to_end(&mut buf)?;
    parse_header(&buf, path)
}

pub fn cache_read(path: &Path) -> Result<CollisionTensor> {
    let mut bytes = Vec::new();
    BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
    let h = parse_header(&bytes, path)?;
    let corrupt = |reason: String| Error::CorruptCache { path: path.to_path_buf(), reason };
    let body = &bytes[HEADER_LEN..];
    let expected = (h.nnz as usize).checked_mul(RECORD_LEN).ok_or_else(|| corrupt("record count overflows".into()))?;
    if body.len() != expected {
        return Err(corrupt(format!("{} record bytes for {} records (expected {expected})", body.len(), h.nnz)));
    }
    let n = basis_size(h.m) as u32;
    let mut prev: Option<(u32, u32, u32)> = None;
    let mut entries = Vec::with_capacity(h.nnz as usize);
    for rec in body.chunks_exact(RECORD_LEN) {
        let key = (u32_at(rec, 0), u32_at(rec, 4), u32_at(rec, 8));
        if key.0 >= n || key.1 >= n || key.2 >= n {
            return Err(corrupt(format!("record {key:?} outside order {}", h.m)));
        }
        if prev.is_some_and(|p| p >= key) {
            return Err(corrupt(format!("records not strictly sorted at {key:?}")));
        }
        prev = Some(key);
        let v = f64_at(rec, 12);
        if !v.is_finite() {
            return Err(corrupt(format!("non-finite value at {key:?}")));
        }
        entries.push((key.0, key.1, key.2, v));
    }
    CollisionTensor::from_entries(h.m, h.kernel, h.drop_tol, entries).map_err(|e| corrupt(e.to_string()))
}

/// Reads a cache and checks it was built for `m` and `kernel`.
pub fn cache_read_matching(path: &Path, m: usize, kernel: &KernelSpec) -> Result<CollisionTensor> {
    let h = cache_header(path)?;
    let mismatch = |what: &str, have: String, want: String| Error::IncompatibleCache {
        path: path.to_path_buf(),
        reason: format!("{what} is {have}, requested {want}"),
    };
    if h.m < m {
        return Err(mismatch("order", h.m.to_string(), m.to_string()));
    }
    for (what, have, want) in [("varpi", h.kernel.varpi, kernel.varpi), ("e", h.kernel.e, kernel.e), ("C", h.kernel.c_const, kernel.c_const)] {
        if have.to_bits() != want.to_bits() && (have - want).abs() > 1e-14 * want.abs().max(1.0) {
            return Err(mismatch(what, have.to_string(), want.to_string()));
        }
    }
    cache_read(path)
}
