use fcc_core::fcc::SteeringMatrix;
use fcc_core::{DelayGrid, FccBases};
use fcc_tools::basis_file::{from_bytes, load, save, to_bytes, BasisFileError};

fn default_bases() -> FccBases {
    let grid = DelayGrid::new(8, 2, 16000.0).unwrap();
    FccBases::decompose(&SteeringMatrix::build(grid, 512).unwrap(), 8).unwrap()
}

fn recrc(bytes: &mut Vec<u8>) {
    let n = bytes.len() - 4;
    let crc = crc32fast::hash(&bytes[..n]);
    bytes[n..].copy_from_slice(&crc.to_le_bytes());
}

#[test]
fn round_trip_is_bit_exact() {
    let bases = default_bases();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.fccb");
    save(&bases, &path).unwrap();
    let loaded = load(&path).unwrap();
    assert_eq!(loaded, bases);
    for (a, b) in loaded.coeffs().iter().zip(bases.coeffs()) {
        assert_eq!(a.to_bits(), b.to_bits());
    }
    assert_eq!(to_bytes(&loaded), std::fs::read(&path).unwrap());
}

#[test]
fn layout_matches_header() {
    let bytes = to_bytes(&default_bases());
    assert_eq!(&bytes[..4], b"FCCB");
    let u = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    assert_eq!([u(4), u(8), u(12), u(16), u(20)], [1, 512, 8, 33, 8]);
    assert_eq!(f64::from_le_bytes(bytes[24..32].try_into().unwrap()), 0.5);
    assert_eq!(f64::from_le_bytes(bytes[32..40].try_into().unwrap()), 16000.0);
    assert_eq!(bytes.len(), 40 + 8 * (8 + 129 * 8 + 33 * 8 * 2) + 8 + 4);
    // parity flags alternate
    let flags = &bytes[40 + 64..40 + 72];
    assert_eq!(flags, &[0, 1, 0, 1, 0, 1, 0, 1]);
}

#[test]
fn wrong_magic() {
    let mut bytes = to_bytes(&default_bases());
    bytes[0] = b'X';
    assert!(matches!(from_bytes(&bytes), Err(BasisFileError::NotABasisFile)));
    assert!(matches!(from_bytes(b"RIFF"), Err(BasisFileError::NotABasisFile)));
    let e = from_bytes(b"").unwrap_err();
    assert_eq!(e.to_string(), "not a basis file");
}

#[test]
fn wrong_version() {
    let mut bytes = to_bytes(&default_bases());
    bytes[4] = 2;
    assert!(matches!(from_bytes(&bytes), Err(BasisFileError::UnsupportedVersion(2))));
}

#[test]
fn truncated() {
    let bytes = to_bytes(&default_bases());
    for cut in [6, 20, 100, bytes.len() - 1] {
        assert!(
            matches!(from_bytes(&bytes[..cut]), Err(BasisFileError::Truncated { .. })),
            "cut {cut}"
        );
    }
}

#[test]
fn corrupted_payload() {
    let mut bytes = to_bytes(&default_bases());
    bytes[500] ^= 0x40;
    assert!(matches!(from_bytes(&bytes), Err(BasisFileError::ChecksumMismatch { .. })));
}

#[test]
fn invalid_parity_flag() {
    let mut bytes = to_bytes(&default_bases());
    bytes[40 + 64 + 3] = 7;
    recrc(&mut bytes);
    assert!(matches!(
        from_bytes(&bytes),
        Err(BasisFileError::InvalidParity { index: 3, flag: 7 })
    ));
}

#[test]
fn zero_rank_is_a_validation_error() {
    let mut bytes = to_bytes(&default_bases())[..40].to_vec();
    bytes[12..16].copy_from_slice(&0u32.to_le_bytes());
    bytes.extend_from_slice(&[0; 4]);
    recrc(&mut bytes);
    assert!(matches!(from_bytes(&bytes), Err(BasisFileError::Validation(_))));
}

#[test]
fn missing_file_is_io() {
    let e = load("/nonexistent/dir/b.fccb").unwrap_err();
    assert!(e.is_io());
}
