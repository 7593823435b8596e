//! Minimal PGM (portable graymap) reader: ASCII `P2` and binary `P5`,
//! comments in the header, maxval up to 65535 with big-endian two-byte
//! samples above 255.

use std::fs;
use std::io;
use std::path::Path;

use super::Image;
use crate::error::{Error, Result};

/// Loads a PGM file and returns the mean-removed pixel field.
pub fn load_pgm(path: &Path) -> Result<Image> {
    let bytes = fs::read(path)
        .map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    parse_pgm(&bytes, path)
}

fn parse_pgm(bytes: &[u8], path: &Path) -> Result<Image> {
    let malformed = |reason: &str| Error::PgmMalformedHeader {
        path: path.to_path_buf(),
        reason: reason.to_string(),
    };

    let magic = bytes
        .get(..2)
        .ok_or_else(|| malformed("file shorter than the magic number"))?;
    let binary = match magic {
        b"P2" => false,
        b"P5" => true,
        other => {
            return Err(Error::PgmUnsupportedMagic {
                path: path.to_path_buf(),
                found: String::from_utf8_lossy(other).into_owned(),
            })
        }
    };

    let mut scanner = TokenScanner::new(&bytes[2..]);
    let width = scanner
        .next_usize()
        .ok_or_else(|| malformed("missing or invalid width"))?;
    let height = scanner
        .next_usize()
        .ok_or_else(|| malformed("missing or invalid height"))?;
    let maxval = scanner
        .next_usize()
        .ok_or_else(|| malformed("missing or invalid maxval"))?;
    if width == 0 || height == 0 {
        return Err(malformed("zero image dimension"));
    }
    if !(1..=65535).contains(&maxval) {
        return Err(malformed("maxval must be in 1..=65535"));
    }
    let count = width * height;

    let mut data: Vec<f64> = Vec::with_capacity(count);
    if binary {
        // A single whitespace byte separates the header from the payload.
        let payload = bytes[2..].get(scanner.pos + 1..).unwrap_or(&[]);
        let bytes_per_sample = if maxval > 255 { 2 } else { 1 };
        let expected = count * bytes_per_sample;
        if payload.len() < expected {
            return Err(Error::PgmTruncated {
                path: path.to_path_buf(),
                expected,
                got: payload.len(),
            });
        }
        if bytes_per_sample == 1 {
            data.extend(payload[..count].iter().map(|&b| b as f64));
        } else {
            data.extend(
                payload[..expected]
                    .chunks_exact(2)
                    .map(|pair| u16::from_be_bytes([pair[0], pair[1]]) as f64),
            );
        }
    } else {
        for _ in 0..count {
            match scanner.next_usize() {
                Some(v) if v <= maxval => data.push(v as f64),
                Some(_) => return Err(malformed("sample value exceeds maxval")),
                None => {
                    return Err(Error::PgmTruncated {
                        path: path.to_path_buf(),
                        expected: count,
                        got: data.len(),
                    })
                }
            }
        }
    }

    let mean = data.iter().sum::<f64>() / count as f64;
    for v in &mut data {
        *v -= mean;
    }
    Ok(Image::new(width, height, data))
}

/// Whitespace- and comment-skipping integer scanner over raw bytes.
struct TokenScanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> TokenScanner<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        TokenScanner { bytes, pos: 0 }
    }

    fn skip_filler(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b' ' | b'\t' | b'\r' | b'\n' => self.pos += 1,
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn next_usize(&mut self) -> Option<usize> {
        self.skip_filler();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()?
            .parse()
            .ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn load_bytes(bytes: &[u8]) -> Result<Image> {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(bytes).unwrap();
        load_pgm(file.path())
    }

    #[test]
    fn ascii_example_is_mean_removed() {
        let img = load_bytes(b"P2\n2 2\n255\n0 255 0 255\n").unwrap();
        assert_eq!(img.width(), 2);
        assert_eq!(img.height(), 2);
        assert_eq!(img.pixels(), &[-127.5, 127.5, -127.5, 127.5]);
    }

    #[test]
    fn ascii_and_binary_agree() {
        let ascii = load_bytes(b"P2\n# a comment\n3 2 255\n10 20 30 40 50 60\n").unwrap();
        let binary = load_bytes(b"P5\n# a comment\n3 2\n255\n\x0a\x14\x1e\x28\x32\x3c").unwrap();
        assert_eq!(ascii, binary);
    }

    #[test]
    fn two_byte_samples_are_big_endian() {
        let img = load_bytes(b"P5\n2 1\n65535\n\x01\x00\x00\x02").unwrap();
        // Raw values 256 and 2, mean 129.
        assert_eq!(img.pixels(), &[127.0, -127.0]);
    }

    #[test]
    fn error_cases_are_distinct() {
        match load_bytes(b"P3\n2 2\n255\n0 0 0 0 0 0 0 0 0 0 0 0\n") {
            Err(Error::PgmUnsupportedMagic { found, .. }) => assert_eq!(found, "P3"),
            other => panic!("expected unsupported magic, got {other:?}"),
        }
        match load_bytes(b"P5\n4 4\n255\nabc") {
            Err(Error::PgmTruncated { expected, got, .. }) => {
                assert_eq!(expected, 16);
                assert_eq!(got, 3);
            }
            other => panic!("expected truncation, got {other:?}"),
        }
        match load_bytes(b"P2\n2 2\n255\n1 2 3\n") {
            Err(Error::PgmTruncated { expected, got, .. }) => {
                assert_eq!(expected, 4);
                assert_eq!(got, 3);
            }
            other => panic!("expected truncation, got {other:?}"),
        }
        assert!(matches!(
            load_bytes(b"P2\nx 2\n255\n0 0 0 0\n"),
            Err(Error::PgmMalformedHeader { .. })
        ));
        assert!(matches!(
            load_bytes(b"P2\n2 2\n0\n0 0 0 0\n"),
            Err(Error::PgmMalformedHeader { .. })
        ));
        assert!(matches!(
            load_bytes(b"P2\n2 2\n255\n0 0 0 999\n"),
            Err(Error::PgmMalformedHeader { .. })
        ));
        assert!(matches!(
            load_pgm(Path::new("/nonexistent/file.pgm")),
            Err(Error::Io(_))
        ));
    }

    #[test]
    fn comments_allowed_anywhere_in_header() {
        let img = load_bytes(b"P2 # magic\n# width and height\n2 # w\n1 # h\n255\n7 9\n").unwrap();
        assert_eq!(img.pixels(), &[-1.0, 1.0]);
    }
}
