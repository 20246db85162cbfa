//! Little-endian binary container for [`FccBases`].
//!
//! ```text
//! "FCCB" | version u32 | N u32 | K u32 | I u32 | tau_max_int u32 | delta f64 | fs f64
//! singulars K f64 | parity K u8 | coeffs K*(N/4+1) f64 | D I*K (re f64, im f64)
//! crc32 u32 over every preceding byte
//! ```

use std::fs;
use std::io;
use std::path::Path;

use fcc_core::{Complex64, DelayGrid, FccBases, Parity};
use thiserror::Error;

pub const MAGIC: &[u8; 4] = b"FCCB";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 * 5 + 8 * 2;

#[derive(Debug, Error)]
pub enum BasisFileError {
    #[error("not a basis file")]
    NotABasisFile,
    #[error("unsupported basis file version {0}")]
    UnsupportedVersion(u32),
    #[error("truncated basis file: expected {expected} bytes, found {actual}")]
    Truncated { expected: usize, actual: usize },
    #[error("invalid parity flag {flag} for basis {index}")]
    InvalidParity { index: usize, flag: u8 },
    #[error("checksum mismatch: stored {stored:08x}, computed {computed:08x}")]
    ChecksumMismatch { stored: u32, computed: u32 },
    #[error("invalid basis file: {0}")]
    Validation(#[from] fcc_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

impl BasisFileError {
    pub fn is_io(&self) -> bool {
        matches!(self, BasisFileError::Io { .. })
    }
}

pub fn to_bytes(bases: &FccBases) -> Vec<u8> {
    let grid = bases.grid();
    let k = bases.rank();
    let mut out = Vec::with_capacity(HEADER_LEN + k * (8 + 1 + 8 * bases.folded_len() + 16 * grid.len()) + 4);
    out.extend_from_slice(MAGIC);
    for v in [
        VERSION,
        bases.frame_size() as u32,
        k as u32,
        grid.tau_max_int() * grid.subdivisions() * 2 + 1,
        grid.tau_max_int(),
    ] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out.extend_from_slice(&grid.delta().to_le_bytes());
    out.extend_from_slice(&grid.sample_rate().to_le_bytes());
    for s in bases.singulars() {
        out.extend_from_slice(&s.to_le_bytes());
    }
    out.extend(bases.parity().iter().map(|p| p.to_flag()));
    for c in bases.coeffs() {
        out.extend_from_slice(&c.to_le_bytes());
    }
    for d in bases.folded_dictionary() {
        out.extend_from_slice(&d.re.to_le_bytes());
        out.extend_from_slice(&d.im.to_le_bytes());
    }
    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take<const L: usize>(&mut self) -> [u8; L] {
        let v = self.bytes[self.pos..self.pos + L].try_into().unwrap();
        self.pos += L;
        v
    }

    fn u32(&mut self) -> u32 {
        u32::from_le_bytes(self.take())
    }

    fn f64(&mut self) -> f64 {
        f64::from_le_bytes(self.take())
    }
}

pub fn from_bytes(bytes: &[u8]) -> Result<FccBases, BasisFileError> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(BasisFileError::NotABasisFile);
    }
    if bytes.len() < 8 {
        return Err(BasisFileError::Truncated {
            expected: HEADER_LEN + 4,
            actual: bytes.len(),
        });
    }
    let mut r = Reader { bytes, pos: 4 };
    let version = r.u32();
    if version != VERSION {
        return Err(BasisFileError::UnsupportedVersion(version));
    }
    if bytes.len() < HEADER_LEN {
        return Err(BasisFileError::Truncated {
            expected: HEADER_LEN + 4,
            actual: bytes.len(),
        });
    }
    let n = r.u32() as usize;
    let k = r.u32() as usize;
    let rows = r.u32() as usize;
    let tau_max_int = r.u32();
    let delta = r.f64();
    let fs = r.f64();

    let folded = n / 4 + 1;
    let expected = k
        .checked_mul(9 + 8 * folded + 16 * rows)
        .and_then(|body| body.checked_add(HEADER_LEN + 4))
        .ok_or(BasisFileError::Validation(fcc_core::Error::param("K", "size overflow")))?;
    if bytes.len() < expected {
        return Err(BasisFileError::Truncated {
            expected,
            actual: bytes.len(),
        });
    }
    if bytes.len() > expected {
        return Err(BasisFileError::Validation(fcc_core::Error::LengthMismatch {
            expected,
            actual: bytes.len(),
        }));
    }
    let stored = u32::from_le_bytes(bytes[expected - 4..].try_into().unwrap());
    let computed = crc32fast::hash(&bytes[..expected - 4]);
    if stored != computed {
        return Err(BasisFileError::ChecksumMismatch { stored, computed });
    }

    let singulars: Vec<f64> = (0..k).map(|_| r.f64()).collect();
    let mut parity = Vec::with_capacity(k);
    for index in 0..k {
        let flag = r.take::<1>()[0];
        parity.push(Parity::from_flag(flag).ok_or(BasisFileError::InvalidParity { index, flag })?);
    }
    let coeffs: Vec<f64> = (0..k * folded).map(|_| r.f64()).collect();
    let dictionary: Vec<Complex64> = (0..k * rows).map(|_| Complex64::new(r.f64(), r.f64())).collect();

    let per_sample = 1.0 / delta;
    let subdivisions = per_sample.round();
    if !(subdivisions >= 1.0 && (per_sample - subdivisions).abs() <= 1e-9 * per_sample) {
        return Err(fcc_core::Error::param("delta", "grid spacing must divide one sample").into());
    }
    let grid = DelayGrid::new(tau_max_int, subdivisions as u32, fs)?;
    if grid.len() != rows {
        return Err(fcc_core::Error::LengthMismatch {
            expected: grid.len(),
            actual: rows,
        }
        .into());
    }
    Ok(FccBases::from_parts(n, grid, singulars, parity, coeffs, dictionary)?)
}

pub fn save(bases: &FccBases, path: impl AsRef<Path>) -> Result<(), BasisFileError> {
    let path = path.as_ref();
    fs::write(path, to_bytes(bases)).map_err(|source| BasisFileError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load(path: impl AsRef<Path>) -> Result<FccBases, BasisFileError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| BasisFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    from_bytes(&bytes)
}
