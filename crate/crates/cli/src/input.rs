use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use anyhow::{Context, Result};
use shuffletest::io::{read_histogram_csv, read_perm_file, Histogram, PermHeader};
use shuffletest::{Permutation, StatisticSpec};

use crate::commands::UsageError;

/// Data read from `--in`.
pub enum Dataset {
    Perms {
        header: Option<PermHeader>,
        perms: Vec<Permutation>,
    },
    Histogram(Histogram),
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let file =
        File::open(path).map_err(|e| UsageError(format!("cannot open {}: {e}", path.display())))?;
    Ok(BufReader::new(file))
}

/// Loads a `.csv` file as a `value,count` histogram and anything else as a
/// `.perm` file.
pub fn load(path: &Path) -> Result<Dataset> {
    let reader = open(path)?;
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        let hist =
            read_histogram_csv(reader).with_context(|| format!("reading {}", path.display()))?;
        Ok(Dataset::Histogram(hist))
    } else {
        let file = read_perm_file(reader).with_context(|| format!("reading {}", path.display()))?;
        Ok(Dataset::Perms {
            header: file.header,
            perms: file.permutations,
        })
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())).into())
}

/// Histogram of a scalar integer-valued statistic.
pub fn histogram_of(dataset: Dataset, statistic: &StatisticSpec) -> Result<Histogram> {
    match dataset {
        Dataset::Histogram(h) => Ok(h),
        Dataset::Perms { perms, .. } => {
            if statistic.dimension() != 1 {
                return Err(UsageError(format!(
                    "a histogram needs a scalar statistic, got {statistic}"
                ))
                .into());
            }
            let n = perms[0].n();
            statistic.check_deck(n)?;
            Ok(Histogram::from_values(
                perms.iter().map(|p| statistic.evaluate(p)[0] as usize),
            ))
        }
    }
}
