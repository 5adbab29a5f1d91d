//! Matrix Market, CSV and plain-text vector files, and the JSON manifests
//! tying them together. Floats are written in shortest round-trip form.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{CsrMatrix, DenseMatrix, Matrix};
use crate::problem::Problem;

use super::transforms::LpInstance;

fn parse_err(path: &Path, line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_num<T: std::str::FromStr>(path: &Path, line: usize, (col, tok): (usize, &str), what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(path, line, col, format!("expected {what}, found `{tok}`")))
}

#[derive(Clone, Copy, PartialEq)]
enum Field {
    Real,
    Pattern,
}

#[derive(Clone, Copy, PartialEq)]
enum Symmetry {
    General,
    Symmetric,
    Skew,
}

/// Reads a Matrix Market file: `coordinate` becomes CSR, `array` dense.
/// Supports `real`, `integer` and (coordinate only) `pattern` fields with
/// `general`, `symmetric` or `skew-symmetric` storage.
pub fn read_matrix_market(path: &Path) -> Result<Matrix> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, 1, "empty file"))?;
    let head: Vec<String> = tokens(header).iter().map(|(_, t)| t.to_ascii_lowercase()).collect();
    if head.len() != 5 || head[0] != "%%matrixmarket" || head[1] != "matrix" {
        return Err(parse_err(path, 1, 1, "expected `%%MatrixMarket matrix <format> <field> <symmetry>`"));
    }
    let coordinate = match head[2].as_str() {
        "coordinate" => true,
        "array" => false,
        other => return Err(parse_err(path, 1, 1, format!("unsupported format `{other}`"))),
    };
    let field = match head[3].as_str() {
        "real" | "integer" | "double" => Field::Real,
        "pattern" if coordinate => Field::Pattern,
        other => return Err(parse_err(path, 1, 1, format!("unsupported field `{other}`"))),
    };
    let symmetry = match head[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::Skew,
        other => return Err(parse_err(path, 1, 1, format!("unsupported symmetry `{other}`"))),
    };
    let mut body = lines.filter(|(_, l)| {
        let t = l.trim_start();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size) = body
        .next()
        .ok_or_else(|| parse_err(path, 2, 1, "missing size line"))?;
    let size = tokens(size);
    let want = if coordinate { 3 } else { 2 };
    if size.len() != want {
        return Err(parse_err(path, size_line, 1, format!("size line needs {want} integers")));
    }
    let rows: usize = parse_num(path, size_line, size[0], "row count")?;
    let cols: usize = parse_num(path, size_line, size[1], "column count")?;
    if symmetry != Symmetry::General && rows != cols {
        return Err(parse_err(path, size_line, 1, "symmetric storage needs a square matrix"));
    }
    if coordinate {
        let nnz: usize = parse_num(path, size_line, size[2], "entry count")?;
        let mut trip = Vec::with_capacity(nnz);
        let mut seen = 0;
        for (ln, line) in body {
            let t = tokens(line);
            let need = if field == Field::Pattern { 2 } else { 3 };
            if t.len() != need {
                return Err(parse_err(path, ln, 1, format!("entry line needs {need} fields")));
            }
            let i: usize = parse_num(path, ln, t[0], "row index")?;
            let j: usize = parse_num(path, ln, t[1], "column index")?;
            if i == 0 || i > rows {
                return Err(parse_err(path, ln, t[0].0, format!("row index {i} outside 1..={rows}")));
            }
            if j == 0 || j > cols {
                return Err(parse_err(path, ln, t[1].0, format!("column index {j} outside 1..={cols}")));
            }
            let v: f64 = if field == Field::Pattern {
                1.0
            } else {
                parse_num(path, ln, t[2], "value")?
            };
            trip.push((i - 1, j - 1, v));
            if i != j {
                match symmetry {
                    Symmetry::General => {}
                    Symmetry::Symmetric => trip.push((j - 1, i - 1, v)),
                    Symmetry::Skew => trip.push((j - 1, i - 1, -v)),
                }
            }
            seen += 1;
        }
        if seen != nnz {
            return Err(parse_err(
                path,
                size_line,
                size[2].0,
                format!("header declares {nnz} entries, file has {seen}"),
            ));
        }
        Ok(CsrMatrix::from_triplets(rows, cols, &trip)?.into())
    } else {
        let mut values = Vec::with_capacity(rows * cols);
        let mut last_line = size_line;
        for (ln, line) in body {
            last_line = ln;
            for tok in tokens(line) {
                values.push(parse_num::<f64>(path, ln, tok, "value")?);
            }
        }
        let mut data = vec![0.0; rows * cols];
        if symmetry == Symmetry::General {
            if values.len() != rows * cols {
                return Err(parse_err(
                    path,
                    last_line,
                    1,
                    format!("expected {} values, found {}", rows * cols, values.len()),
                ));
            }
            // column-major on disk
            for j in 0..cols {
                for i in 0..rows {
                    data[i * cols + j] = values[j * rows + i];
                }
            }
        } else {
            let n = rows;
            let expected = if symmetry == Symmetry::Symmetric { n * (n + 1) / 2 } else { n * (n - 1) / 2 };
            if values.len() != expected {
                return Err(parse_err(
                    path,
                    last_line,
                    1,
                    format!("expected {expected} values, found {}", values.len()),
                ));
            }
            let mut it = values.into_iter();
            for j in 0..n {
                let first = if symmetry == Symmetry::Symmetric { j } else { j + 1 };
                for i in first..n {
                    let v = it.next().unwrap_or(0.0);
                    data[i * n + j] = v;
                    data[j * n + i] = if symmetry == Symmetry::Skew { -v } else { v };
                }
            }
        }
        Ok(DenseMatrix::new(rows, cols, data)?.into())
    }
}

/// Writes dense matrices in `array` format and CSR matrices in
/// `coordinate` format.
pub fn write_matrix_market(matrix: &Matrix, path: &Path) -> Result<()> {
    let mut out = String::new();
    match matrix {
        Matrix::Dense(d) => {
            out.push_str("%%MatrixMarket matrix array real general\n");
            let _ = writeln!(out, "{} {}", d.rows(), d.cols());
            for j in 0..d.cols() {
                for i in 0..d.rows() {
                    let _ = writeln!(out, "{:?}", d.row(i)[j]);
                }
            }
        }
        Matrix::Csr(c) => {
            out.push_str("%%MatrixMarket matrix coordinate real general\n");
            let _ = writeln!(out, "{} {} {}", c.rows(), c.cols(), c.nnz());
            for i in 0..c.rows() {
                let (idx, vals) = c.row(i);
                for (j, v) in idx.iter().zip(vals) {
                    let _ = writeln!(out, "{} {} {:?}", i + 1, j + 1, v);
                }
            }
        }
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads a dense matrix from CSV, one row per record, no header.
pub fn read_csv_matrix(path: &Path) -> Result<Matrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)?;
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(rows + 1, |p| p.line() as usize);
        if *cols.get_or_insert(record.len()) != record.len() {
            return Err(parse_err(
                path,
                line,
                1,
                format!("expected {} fields, found {}", cols.unwrap_or(0), record.len()),
            ));
        }
        for (f, field) in record.iter().enumerate() {
            data.push(parse_num::<f64>(path, line, (f + 1, field), "value")?);
        }
        rows += 1;
    }
    let cols = cols.ok_or_else(|| parse_err(path, 1, 1, "empty matrix"))?;
    Ok(DenseMatrix::new(rows, cols, data)?.into())
}

/// Reads a matrix by extension: `.csv` as CSV, anything else as Matrix
/// Market.
pub fn read_matrix(path: &Path) -> Result<Matrix> {
    match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("csv") => read_csv_matrix(path),
        _ => read_matrix_market(path),
    }
}

/// One number per line; blank lines and lines starting with `#` or `%`
/// are skipped. `inf` and `-inf` are accepted.
pub fn read_vector(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = tokens(line);
        match t.first() {
            None => continue,
            Some((_, s)) if s.starts_with('#') || s.starts_with('%') => continue,
            Some(_) if t.len() > 1 => {
                return Err(parse_err(path, i + 1, t[1].0, "expected one value per line"));
            }
            Some(&tok) => out.push(parse_num(path, i + 1, tok, "value")?),
        }
    }
    Ok(out)
}

pub fn write_vector(values: &[f64], path: &Path) -> Result<()> {
    let mut out = String::with_capacity(values.len() * 20);
    for v in values {
        let _ = writeln!(out, "{v:?}");
    }
    fs::write(path, out)?;
    Ok(())
}

/// JSON description of a stored problem. Paths are relative to the
/// manifest's directory unless absolute.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemManifest {
    pub name: String,
    pub m: usize,
    pub n: usize,
    pub matrix_path: PathBuf,
    pub rhs_path: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_path: Option<PathBuf>,
    pub kind: String,
}

#[derive(Clone, Debug)]
pub struct LoadedProblem {
    pub manifest: ProblemManifest,
    pub problem: Problem,
    pub witness: Option<Vec<f64>>,
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn base_dir(manifest: &Path) -> PathBuf {
    manifest.parent().map(Path::to_path_buf).unwrap_or_default()
}

pub fn load_problem(manifest_path: &Path) -> Result<LoadedProblem> {
    let manifest: ProblemManifest = serde_json::from_str(&fs::read_to_string(manifest_path)?)?;
    let base = base_dir(manifest_path);
    let a = read_matrix(&resolve(&base, &manifest.matrix_path))?;
    let b = read_vector(&resolve(&base, &manifest.rhs_path))?;
    if a.rows() != manifest.m {
        return Err(Error::DimensionMismatch {
            what: "matrix rows versus manifest",
            expected: manifest.m,
            got: a.rows(),
        });
    }
    if a.cols() != manifest.n {
        return Err(Error::DimensionMismatch {
            what: "matrix columns versus manifest",
            expected: manifest.n,
            got: a.cols(),
        });
    }
    let witness = match &manifest.witness_path {
        Some(p) => {
            let w = read_vector(&resolve(&base, p))?;
            if w.len() != manifest.n {
                return Err(Error::DimensionMismatch {
                    what: "witness versus manifest",
                    expected: manifest.n,
                    got: w.len(),
                });
            }
            Some(w)
        }
        None => None,
    };
    let problem = Problem::new(a, b)?;
    Ok(LoadedProblem {
        manifest,
        problem,
        witness,
    })
}

/// Writes `<name>.mtx`, `<name>.rhs.txt`, optionally `<name>.witness.txt`,
/// and the manifest `<name>.json` into `dir`. Returns the manifest path.
pub fn save_problem(problem: &Problem, dir: &Path, name: &str, kind: &str, witness: Option<&[f64]>) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let matrix_path = PathBuf::from(format!("{name}.mtx"));
    let rhs_path = PathBuf::from(format!("{name}.rhs.txt"));
    write_matrix_market(problem.matrix(), &dir.join(&matrix_path))?;
    write_vector(problem.rhs(), &dir.join(&rhs_path))?;
    let witness_path = match witness {
        Some(w) => {
            let p = PathBuf::from(format!("{name}.witness.txt"));
            write_vector(w, &dir.join(&p))?;
            Some(p)
        }
        None => None,
    };
    let manifest = ProblemManifest {
        name: name.to_string(),
        m: problem.m(),
        n: problem.n(),
        matrix_path,
        rhs_path,
        witness_path,
        kind: kind.to_string(),
    };
    let path = dir.join(format!("{name}.json"));
    fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(path)
}

/// JSON description of an LP `min c^T x, A x = b, l <= x <= u`. Missing
/// bound files mean the variables are unbounded on that side.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpManifest {
    pub name: String,
    pub a_eq_path: PathBuf,
    pub b_eq_path: PathBuf,
    pub c_path: PathBuf,
    #[serde(default)]
    pub lower_path: Option<PathBuf>,
    #[serde(default)]
    pub upper_path: Option<PathBuf>,
    #[serde(default)]
    pub p_star: Option<f64>,
}

pub fn load_lp(manifest_path: &Path) -> Result<LpInstance> {
    let manifest: LpManifest = serde_json::from_str(&fs::read_to_string(manifest_path)?)?;
    let base = base_dir(manifest_path);
    let a_eq = read_matrix(&resolve(&base, &manifest.a_eq_path))?;
    let n = a_eq.cols();
    let bound = |p: &Option<PathBuf>, default: f64| -> Result<Vec<f64>> {
        match p {
            Some(p) => read_vector(&resolve(&base, p)),
            None => Ok(vec![default; n]),
        }
    };
    Ok(LpInstance {
        c: read_vector(&resolve(&base, &manifest.c_path))?,
        b_eq: read_vector(&resolve(&base, &manifest.b_eq_path))?,
        lower: bound(&manifest.lower_path, f64::NEG_INFINITY)?,
        upper: bound(&manifest.upper_path, f64::INFINITY)?,
        a_eq,
        p_star: manifest.p_star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
        let p = dir.join(name);
        fs::write(&p, text).unwrap();
        p
    }

    #[test]
    fn coordinate_and_array_agree() {
        let dir = tempfile::tempdir().unwrap();
        let c = write(
            dir.path(),
            "c.mtx",
            "%%MatrixMarket matrix coordinate real general\n% note\n2 3 3\n1 1 1.5\n2 3 -2\n1 2 4e-3\n",
        );
        let a = write(
            dir.path(),
            "a.mtx",
            "%%MatrixMarket matrix array real general\n2 3\n1.5\n0\n4e-3\n0\n0\n-2\n",
        );
        let mc = read_matrix_market(&c).unwrap();
        let ma = read_matrix_market(&a).unwrap();
        assert!(!mc.is_dense() && ma.is_dense());
        assert_eq!(mc.to_dense(), ma.to_dense());
    }

    #[test]
    fn symmetric_coordinate_expands() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            dir.path(),
            "s.mtx",
            "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1\n2 1 3\n",
        );
        let m = read_matrix_market(&p).unwrap().to_dense();
        assert_eq!(m.data(), &[1.0, 3.0, 3.0, 0.0]);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            dir.path(),
            "bad.mtx",
            "%%MatrixMarket matrix coordinate real general\n2 2 1\n1  x 1.0\n",
        );
        match read_matrix_market(&p) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 4)),
            other => panic!("unexpected {other:?}"),
        }
        let p = write(dir.path(), "v.txt", "1.0\n2.0 3.0\n");
        assert!(matches!(read_vector(&p), Err(Error::Parse { line: 2, column: 5, .. })));
    }

    #[test]
    fn vector_round_trip_with_infinities() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("v.txt");
        let v = vec![0.1, -1e-300, f64::INFINITY, f64::NEG_INFINITY, 1.0 / 3.0];
        write_vector(&v, &p).unwrap();
        assert_eq!(read_vector(&p).unwrap(), v);
    }

    #[test]
    fn csv_matrix() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "a.csv", "1, 2\n3,4\n5 ,6\n");
        let m = read_matrix(&p).unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 2));
        let bad = write(dir.path(), "b.csv", "1,2\n3\n");
        assert!(read_matrix(&bad).is_err());
    }
}
