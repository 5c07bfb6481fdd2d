//! Sample file formats.
//!
//! - text: one decimal symbol per line, LF-terminated;
//! - binary: 32-bit little-endian unsigned integers, no header.
//!
//! Orientation and origin are not stored; callers supply them.

use std::io::{self, BufRead, BufWriter, Read, Write};

use crate::sequence::Symbol;

pub fn write_text<W: Write>(w: W, symbols: &[Symbol]) -> io::Result<()> {
    let mut w = BufWriter::new(w);
    for s in symbols {
        writeln!(w, "{s}")?;
    }
    w.flush()
}

pub fn read_text<R: BufRead>(r: R) -> io::Result<Vec<Symbol>> {
    let mut out = Vec::new();
    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let s = t.parse::<Symbol>().map_err(|e| {
            io::Error::new(
                io::ErrorKind::InvalidData,
                format!("line {}: {e}: {t:?}", lineno + 1),
            )
        })?;
        out.push(s);
    }
    Ok(out)
}

pub fn write_bin<W: Write>(w: W, symbols: &[Symbol]) -> io::Result<()> {
    let mut w = BufWriter::new(w);
    for s in symbols {
        w.write_all(&s.to_le_bytes())?;
    }
    w.flush()
}

pub fn read_bin<R: Read>(mut r: R) -> io::Result<Vec<Symbol>> {
    let mut buf = Vec::new();
    r.read_to_end(&mut buf)?;
    if buf.len() % 4 != 0 {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            format!("binary sample length {} is not a multiple of 4", buf.len()),
        ));
    }
    Ok(buf
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn text_layout() {
        let mut out = Vec::new();
        write_text(&mut out, &[3, 0, 17]).unwrap();
        assert_eq!(out, b"3\n0\n17\n");
    }

    #[test]
    fn bin_layout() {
        let mut out = Vec::new();
        write_bin(&mut out, &[1, 256]).unwrap();
        assert_eq!(out, vec![1, 0, 0, 0, 0, 1, 0, 0]);
        assert!(read_bin(&[1u8, 2, 3][..]).is_err());
    }

    #[test]
    fn text_rejects_garbage() {
        assert!(read_text(&b"1\nx\n"[..]).is_err());
    }

    proptest! {
        #[test]
        fn formats_roundtrip(v in prop::collection::vec(any::<u32>(), 0..200)) {
            let mut t = Vec::new();
            write_text(&mut t, &v).unwrap();
            prop_assert_eq!(read_text(&t[..]).unwrap(), v.clone());
            let mut b = Vec::new();
            write_bin(&mut b, &v).unwrap();
            prop_assert_eq!(b.len(), 4 * v.len());
            prop_assert_eq!(read_bin(&b[..]).unwrap(), v);
        }
    }
}
