//! Text formats: `.perm` permutation files and `value,count` histogram CSVs.
//!
//! A `.perm` file holds one permutation per line as space-separated 1-based
//! images. Lines starting with `#` are comments; a header comment of the form
//! `# n=52 scheme=random-transpositions k=180 N=200 seed=7` records how the
//! data were produced.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::shuffle::ShuffleScheme;

pub const PERM_MAGIC: &str = "# shuffletest perm v1";

/// Provenance recorded in a `.perm` header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermHeader {
    pub n: usize,
    pub scheme: String,
    pub steps: usize,
    pub count: usize,
    pub seed: u64,
}

impl PermHeader {
    pub fn for_scheme(scheme: &ShuffleScheme, count: usize) -> Self {
        Self {
            n: scheme.n,
            scheme: scheme.kind.to_string(),
            steps: scheme.steps,
            count,
            seed: scheme.seed,
        }
    }

    fn render(&self) -> String {
        format!(
            "# n={} scheme={} k={} N={} seed={}",
            self.n, self.scheme, self.steps, self.count, self.seed
        )
    }

    fn parse(line: &str) -> Option<Self> {
        let body = line.trim_start_matches('#').trim();
        let mut n = None;
        let mut scheme = None;
        let mut steps = None;
        let mut count = None;
        let mut seed = None;
        for field in body.split_whitespace() {
            let (k, v) = field.split_once('=')?;
            match k {
                "n" => n = v.parse().ok(),
                "scheme" => scheme = Some(v.to_string()),
                "k" => steps = v.parse().ok(),
                "N" => count = v.parse().ok(),
                "seed" => seed = v.parse().ok(),
                _ => {}
            }
        }
        Some(Self {
            n: n?,
            scheme: scheme?,
            steps: steps?,
            count: count?,
            seed: seed?,
        })
    }
}

#[derive(Debug, Clone)]
pub struct PermFile {
    pub header: Option<PermHeader>,
    pub permutations: Vec<Permutation>,
}

impl PermFile {
    pub fn deck_size(&self) -> usize {
        self.permutations[0].n()
    }
}

pub fn write_perm_file<W: Write>(
    mut w: W,
    header: &PermHeader,
    permutations: &[Permutation],
) -> Result<()> {
    writeln!(w, "{PERM_MAGIC}")?;
    writeln!(w, "{}", header.render())?;
    for p in permutations {
        writeln!(w, "{p}")?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a `.perm` file. Every line must be a permutation of the same size and
/// at least one permutation must be present.
pub fn read_perm_file<R: BufRead>(r: R) -> Result<PermFile> {
    let mut header = None;
    let mut permutations: Vec<Permutation> = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('#') {
            if header.is_none() {
                header = PermHeader::parse(trimmed);
            }
            continue;
        }
        let images = trimmed
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>().map_err(|e| Error::Parse {
                    line: lineno,
                    msg: format!("'{t}': {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let p = Permutation::new(images).map_err(|e| Error::Parse {
            line: lineno,
            msg: e.to_string(),
        })?;
        if let Some(first) = permutations.first() {
            if first.n() != p.n() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("deck size {} differs from {}", p.n(), first.n()),
                });
            }
        }
        permutations.push(p);
    }
    if permutations.is_empty() {
        return Err(Error::InvalidArgument(
            "permutation file contains no data".into(),
        ));
    }
    if let Some(h) = &header {
        if h.n != permutations[0].n() {
            return Err(Error::InvalidArgument(format!(
                "header declares n={} but data have n={}",
                h.n,
                permutations[0].n()
            )));
        }
    }
    Ok(PermFile {
        header,
        permutations,
    })
}

/// Counts of a non-negative integer statistic, indexed by value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn from_values<I: IntoIterator<Item = usize>>(values: I) -> Self {
        let mut counts: Vec<u64> = Vec::new();
        for v in values {
            if v >= counts.len() {
                counts.resize(v + 1, 0);
            }
            counts[v] += 1;
        }
        Self { counts }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `Σ value·count`.
    pub fn value_sum(&self) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(v, &c)| v as u64 * c)
            .sum()
    }

    pub fn values(&self) -> impl Iterator<Item = u64> + '_ {
        self.counts
            .iter()
            .enumerate()
            .flat_map(|(v, &c)| std::iter::repeat_n(v as u64, c as usize))
    }
}

/// Reads `value,count` rows; a non-numeric first row is taken as a header.
pub fn read_histogram_csv<R: BufRead>(r: R) -> Result<Histogram> {
    let mut counts: Vec<u64> = Vec::new();
    let mut rows = 0;
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((v, c)) = trimmed.split_once(',') else {
            return Err(Error::Parse {
                line: lineno,
                msg: "expected 'value,count'".into(),
            });
        };
        let (v, c) = (v.trim(), c.trim());
        if rows == 0 && v.parse::<u64>().is_err() && v.eq_ignore_ascii_case("value") {
            continue;
        }
        let value: usize = v.parse().map_err(|e| Error::Parse {
            line: lineno,
            msg: format!("value '{v}': {e}"),
        })?;
        let count: u64 = c.parse().map_err(|e| Error::Parse {
            line: lineno,
            msg: format!("count '{c}': {e}"),
        })?;
        if value >= counts.len() {
            counts.resize(value + 1, 0);
        }
        counts[value] += count;
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::InvalidArgument(
            "histogram file contains no rows".into(),
        ));
    }
    Ok(Histogram { counts })
}

pub fn write_histogram_csv<W: Write>(mut w: W, hist: &Histogram) -> Result<()> {
    writeln!(w, "value,count")?;
    for (v, c) in hist.counts.iter().enumerate() {
        writeln!(w, "{v},{c}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perm_file_round_trip() {
        let scheme = ShuffleScheme::random_transpositions(3, 2, 7);
        let perms = vec![
            Permutation::new(vec![3, 1, 2]).unwrap(),
            Permutation::identity(3),
        ];
        let header = PermHeader::for_scheme(&scheme, perms.len());
        let mut buf = Vec::new();
        write_perm_file(&mut buf, &header, &perms).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains("3 1 2\n1 2 3\n"));
        let back = read_perm_file(&buf[..]).unwrap();
        assert_eq!(back.permutations, perms);
        assert_eq!(back.header, Some(header));
    }

    #[test]
    fn perm_file_errors() {
        assert!(read_perm_file(&b""[..]).is_err());
        assert!(read_perm_file(&b"# only comments\n"[..]).is_err());
        let e = read_perm_file(&b"1 2 3\n2 2 1\n"[..]).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert!(read_perm_file(&b"1 2 3\n1 2\n"[..]).is_err());
        assert!(read_perm_file(&b"1 x 3\n"[..]).is_err());
        let f = read_perm_file(&b"# a comment\n\n2 1\n"[..]).unwrap();
        assert!(f.header.is_none());
        assert_eq!(f.deck_size(), 2);
    }

    #[test]
    fn histogram_csv() {
        let h = read_histogram_csv(&b"value,count\n0,14\n1,19\n2,12\n3,4\n4,1\n5,2\n"[..]).unwrap();
        assert_eq!(h.counts, vec![14, 19, 12, 4, 1, 2]);
        assert_eq!(h.total(), 52);
        assert_eq!(h.value_sum(), 19 + 24 + 12 + 4 + 10);
        assert_eq!(h.values().count(), 52);
        assert!(read_histogram_csv(&b"value,count\n"[..]).is_err());
        assert!(read_histogram_csv(&b"1;2\n"[..]).is_err());
        let mut out = Vec::new();
        write_histogram_csv(&mut out, &h).unwrap();
        assert_eq!(read_histogram_csv(&out[..]).unwrap(), h);
    }
}
