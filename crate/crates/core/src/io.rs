//! Plain-text readers and writers for matrices, labels and permutations.
//!
//! All indices are 0-based. Matrix files have no header; values are written
//! with 17 significant digits so a write/read round trip is bit-identical.

use std::fs;
use std::path::Path;

use crate::assignment::Permutation;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

fn read_text(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    String::from_utf8(bytes).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: 0,
        message: format!("file is not valid UTF-8: {e}"),
    })
}

/// Writes `contents` to `path`.
pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Lines without their terminator; a trailing newline does not add a line.
fn lines(text: &str) -> Vec<&str> {
    let mut out: Vec<&str> = text.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l)).collect();
    if out.last() == Some(&"") {
        out.pop();
    }
    out
}

pub fn parse_matrix_csv(text: &str, path: &Path) -> Result<DenseMatrix> {
    let mut data = Vec::new();
    let mut cols = None;
    let rows = lines(text);
    if rows.is_empty() {
        return Err(parse_error(path, 0, "empty matrix file"));
    }
    for (idx, line) in rows.iter().enumerate() {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            return Err(parse_error(path, lineno, "empty line"));
        }
        let mut count = 0;
        for (col, token) in line.split(',').enumerate() {
            let token = token.trim();
            let value: f64 = token.parse().map_err(|_| {
                parse_error(path, lineno, format!("column {}: '{token}' is not a number", col + 1))
            })?;
            if !value.is_finite() {
                return Err(parse_error(
                    path,
                    lineno,
                    format!("column {}: non-finite value '{token}'", col + 1),
                ));
            }
            data.push(value);
            count += 1;
        }
        match cols {
            None => cols = Some(count),
            Some(c) if c != count => {
                return Err(parse_error(
                    path,
                    lineno,
                    format!("row has {count} fields, expected {c}"),
                ))
            }
            _ => {}
        }
    }
    DenseMatrix::from_vec(rows.len(), cols.unwrap_or(0), data)
}

pub fn read_matrix_csv(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    let path = path.as_ref();
    parse_matrix_csv(&read_text(path)?, path)
}

pub fn format_matrix_csv(m: &DenseMatrix) -> String {
    let mut out = String::with_capacity(m.rows() * m.cols() * 24);
    for row in m.row_iter() {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&format!("{v:.16e}"));
        }
        out.push('\n');
    }
    out
}

pub fn write_matrix_csv(m: &DenseMatrix, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &format_matrix_csv(m))
}

/// One label per line, taken verbatim apart from the line terminator.
pub fn parse_labels(text: &str, path: &Path) -> Result<Vec<String>> {
    let rows = lines(text);
    if rows.is_empty() {
        return Err(parse_error(path, 0, "empty label file"));
    }
    rows.iter()
        .enumerate()
        .map(|(idx, line)| {
            if line.is_empty() {
                Err(parse_error(path, idx + 1, "empty label"))
            } else {
                Ok(line.to_string())
            }
        })
        .collect()
}

pub fn read_labels_csv(path: impl AsRef<Path>) -> Result<Vec<String>> {
    let path = path.as_ref();
    parse_labels(&read_text(path)?, path)
}

pub fn write_labels_csv<S: AsRef<str>>(labels: &[S], path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::new();
    for label in labels {
        let label = label.as_ref();
        if label.is_empty() || label.contains(['\n', '\r']) {
            return Err(Error::arg(format!("label {label:?} cannot be written on one line")));
        }
        out.push_str(label);
        out.push('\n');
    }
    write_text(path.as_ref(), &out)
}

pub fn format_permutation_csv(pi: &Permutation) -> String {
    let mut out = String::new();
    for (i, j) in pi.as_slice().iter().enumerate() {
        out.push_str(&format!("{i},{j}\n"));
    }
    out
}

/// `source_index,matched_index` lines, 0-based, in any row order.
pub fn parse_permutation_csv(text: &str, path: &Path) -> Result<Permutation> {
    let rows = lines(text);
    if rows.is_empty() {
        return Err(parse_error(path, 0, "empty permutation file"));
    }
    let n = rows.len();
    let mut map = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    for (idx, line) in rows.iter().enumerate() {
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(parse_error(path, lineno, format!("expected 2 fields, found {}", fields.len())));
        }
        let parse = |s: &str, what: &str| {
            s.parse::<usize>()
                .map_err(|_| parse_error(path, lineno, format!("{what} '{s}' is not a non-negative integer")))
        };
        let src = parse(fields[0], "source index")?;
        let dst = parse(fields[1], "matched index")?;
        for (what, v) in [("source", src), ("matched", dst)] {
            if v >= n {
                return Err(parse_error(path, lineno, format!("{what} index {v} out of range 0..{n}")));
            }
        }
        if map[src] != usize::MAX {
            return Err(parse_error(path, lineno, format!("duplicate source index {src}")));
        }
        if taken[dst] {
            return Err(parse_error(path, lineno, format!("matched index {dst} used twice")));
        }
        map[src] = dst;
        taken[dst] = true;
    }
    Permutation::new(map)
}

pub fn write_permutation_csv(pi: &Permutation, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &format_permutation_csv(pi))
}

pub fn read_permutation_csv(path: impl AsRef<Path>) -> Result<Permutation> {
    let path = path.as_ref();
    parse_permutation_csv(&read_text(path)?, path)
}

/// Reads a vector stored either as one column or one row.
pub fn read_vector_csv(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let m = read_matrix_csv(path)?;
    if m.rows() != 1 && m.cols() != 1 {
        return Err(parse_error(
            path,
            0,
            format!("expected a single row or column, got {}x{}", m.rows(), m.cols()),
        ));
    }
    Ok(m.into_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("mem")
    }

    #[test]
    fn matrix_examples() {
        let m = parse_matrix_csv("1,2\n3,4\n", p()).unwrap();
        assert_eq!(m, DenseMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap());
        let m = parse_matrix_csv("1e0,2.5\r\n", p()).unwrap();
        assert_eq!(m.as_slice(), &[1.0, 2.5]);
        let m = parse_matrix_csv("1, 2\n3,4", p()).unwrap();
        assert_eq!(m.shape(), (2, 2));
    }

    #[test]
    fn matrix_errors_are_located() {
        let line_of = |text: &str| match parse_matrix_csv(text, p()) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        };
        assert_eq!(line_of(""), 0);
        assert_eq!(line_of("1,2\n3\n"), 2);
        assert_eq!(line_of("1,2\nNaN,1\n"), 2);
        assert_eq!(line_of("1,x\n"), 1);
        assert_eq!(line_of("1,2\n\n3,4\n"), 2);
        assert_eq!(line_of("1,inf\n"), 1);
    }

    #[test]
    fn permutation_examples() {
        let id = Permutation::identity(3);
        assert_eq!(format_permutation_csv(&id), "0,0\n1,1\n2,2\n");
        let back = parse_permutation_csv("2,0\n0,1\n1,2\n", p()).unwrap();
        assert_eq!(back.as_slice(), &[1, 2, 0]);
        assert!(parse_permutation_csv("0,0\n0,1\n", p()).is_err());
        assert!(parse_permutation_csv("0,0\n1,5\n", p()).is_err());
        assert!(parse_permutation_csv("0,1\n1,1\n", p()).is_err());
        assert!(parse_permutation_csv("0\n", p()).is_err());
        assert!(parse_permutation_csv("0,-1\n", p()).is_err());
    }

    #[test]
    fn label_examples() {
        assert_eq!(parse_labels("a\nb\na\n", p()).unwrap(), vec!["a", "b", "a"]);
        assert_eq!(parse_labels("CD4 T\r\nB\n", p()).unwrap(), vec!["CD4 T", "B"]);
        assert!(parse_labels("a\n\nb\n", p()).is_err());
        assert!(parse_labels("", p()).is_err());
    }
}
