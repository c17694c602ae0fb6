// SPDX-License-Identifier: Apache-2.0

//! Square complex matrices as text: one row per line, each entry written
//! as a `re im` pair, so a row of a d×d matrix holds 2d numbers. Blank
//! lines and `#` comments are skipped.

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};

pub fn parse_matrix(text: &str) -> Result<CMatrix> {
    let mut rows: Vec<(usize, Vec<C64>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums = line
            .split_whitespace()
            .map(|tok| tok.parse::<f64>().ok().filter(|v| v.is_finite()))
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| Error::Parse { line: line_no, key: None, msg: "expected finite numbers".into() })?;
        if nums.len() % 2 != 0 {
            return Err(Error::Parse { line: line_no, key: None, msg: "odd number of values; entries are `re im` pairs".into() });
        }
        rows.push((line_no, nums.chunks(2).map(|p| C64::new(p[0], p[1])).collect()));
    }
    let dim = rows.len();
    if dim == 0 {
        return Err(Error::Parse { line: 0, key: None, msg: "empty matrix".into() });
    }
    for (line_no, row) in &rows {
        if row.len() != dim {
            return Err(Error::Parse {
                line: *line_no,
                key: None,
                msg: format!("row has {} entries, matrix has {dim} rows", row.len()),
            });
        }
    }
    Ok(CMatrix::from_fn(dim, dim, |r, c| rows[r].1[c]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_pairs() {
        let m = parse_matrix("# swap\n0 0  1 0\n1 0  0 0\n").unwrap();
        assert_eq!(m[(0, 1)], C64::new(1.0, 0.0));
        assert_eq!(m[(1, 1)], C64::new(0.0, 0.0));
        let i = parse_matrix("0 1 0 0\n0 0 0 -1\n").unwrap();
        assert_eq!(i[(1, 1)], C64::new(0.0, -1.0));
    }

    #[test]
    fn shape_errors_name_the_line() {
        let err = parse_matrix("1 0 0 0\n\n1 0\n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        assert!(parse_matrix("1 0 0\n").is_err());
        assert!(parse_matrix("1 x\n").is_err());
        assert!(parse_matrix("# nothing\n").is_err());
    }
}
