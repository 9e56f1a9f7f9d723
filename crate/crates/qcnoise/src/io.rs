//! File formats: distribution tables as CSV and as a compact binary dump,
//! weight statistics as CSV.
//!
//! Both table formats round-trip exactly. CSV carries floats with 17
//! significant digits (`{:.16e}`), which pins every f64 bit pattern; the
//! binary dump stores raw little-endian doubles behind a magic header.

use std::io::{self, BufRead, Read, Write};

use qcnoise_core::exact::ExactError;
use qcnoise_core::{DistTable, WeightStats};

/// Magic prefix of the binary table dump (format version 1 in the last byte).
pub const DIST_MAGIC: [u8; 8] = *b"QCNDIST\x01";

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("io: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("bad magic; not a table dump")]
    BadMagic,
    #[error("table length {len} is not a power of two")]
    BadLength { len: usize },
    #[error("header says n={n} but carries {count} entries")]
    LengthMismatch { n: u32, count: u64 },
    #[error("not a valid distribution: {0}")]
    Invalid(#[from] ExactError),
}

/// 17 significant digits: enough to reproduce any f64 exactly on parse.
pub fn fmt_f64(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:.16e}")
}

pub fn write_dist_csv<W: Write>(mut w: W, table: &DistTable) -> io::Result<()> {
    writeln!(w, "index,probability")?;
    for (index, &p) in table.probs().iter().enumerate() {
        writeln!(w, "{index},{}", fmt_f64(p))?;
    }
    Ok(())
}

pub fn read_dist_csv<R: BufRead>(r: R) -> Result<DistTable, FormatError> {
    let mut probs = Vec::new();
    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || (lineno == 0 && trimmed == "index,probability") {
            continue;
        }
        let (index_str, prob_str) =
            trimmed
                .split_once(',')
                .ok_or_else(|| FormatError::Malformed {
                    line: lineno + 1,
                    message: "expected `index,probability`".into(),
                })?;
        let index: usize = index_str
            .trim()
            .parse()
            .map_err(|_| FormatError::Malformed {
                line: lineno + 1,
                message: format!("bad index `{index_str}`"),
            })?;
        if index != probs.len() {
            return Err(FormatError::Malformed {
                line: lineno + 1,
                message: format!("expected index {} in order, got {index}", probs.len()),
            });
        }
        let p: f64 = prob_str
            .trim()
            .parse()
            .map_err(|_| FormatError::Malformed {
                line: lineno + 1,
                message: format!("bad probability `{prob_str}`"),
            })?;
        probs.push(p);
    }
    let len = probs.len();
    if !len.is_power_of_two() {
        return Err(FormatError::BadLength { len });
    }
    Ok(DistTable::new(len.trailing_zeros() as usize, probs)?)
}

/// Magic, then u32 LE n, u64 LE entry count, then the 2ⁿ doubles LE.
pub fn write_dist_bin<W: Write>(mut w: W, table: &DistTable) -> io::Result<()> {
    w.write_all(&DIST_MAGIC)?;
    w.write_all(&(table.n() as u32).to_le_bytes())?;
    w.write_all(&(table.len() as u64).to_le_bytes())?;
    for &p in table.probs() {
        w.write_all(&p.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_dist_bin<R: Read>(mut r: R) -> Result<DistTable, FormatError> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if magic != DIST_MAGIC {
        return Err(FormatError::BadMagic);
    }
    let mut n_bytes = [0u8; 4];
    r.read_exact(&mut n_bytes)?;
    let n = u32::from_le_bytes(n_bytes);
    let mut count_bytes = [0u8; 8];
    r.read_exact(&mut count_bytes)?;
    let count = u64::from_le_bytes(count_bytes);
    if n > 57 || count != 1u64 << n {
        return Err(FormatError::LengthMismatch { n, count });
    }
    let mut probs = Vec::with_capacity(count as usize);
    let mut buf = [0u8; 8];
    for _ in 0..count {
        r.read_exact(&mut buf)?;
        probs.push(f64::from_le_bytes(buf));
    }
    Ok(DistTable::new(n as usize, probs)?)
}

/// Summary fields as `# key=value` comment lines, then `weight,count` rows
/// for the populated bins.
pub fn write_weight_csv<W: Write>(mut w: W, stats: &WeightStats) -> io::Result<()> {
    writeln!(w, "# trials={}", stats.trials)?;
    writeln!(w, "# mean={}", fmt_f64(stats.mean))?;
    writeln!(w, "# variance={}", fmt_f64(stats.variance))?;
    writeln!(w, "# expected_mean={}", fmt_f64(stats.expected_mean))?;
    writeln!(w, "# z_score={}", fmt_f64(stats.z_score))?;
    writeln!(w, "weight,count")?;
    for (weight, count) in stats.nonzero_bins() {
        writeln!(w, "{weight},{count}")?;
    }
    Ok(())
}
