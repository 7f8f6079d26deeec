//! File formats: one matrix per CSV file (row-major, no header, plain
//! doubles), and families either as a directory of such CSVs (members in
//! filename order) or a single JSON document
//! `{"kind": "self_adjoint" | "rectangular", "members": [[[...]], ...]}`.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::{MatrixFamily, RectMatrix, SymMatrix};

/// Asymmetry allowed when reading a matrix that claims to be self-adjoint;
/// decimal text trims low bits, so exact mirror equality cannot be required.
pub const READ_SYMMETRY_TOL: f64 = 1e-8;

pub fn read_matrix_csv(path: &Path) -> Result<RectMatrix> {
    let text = fs::read_to_string(path)?;
    parse_matrix_csv(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_matrix_csv(text: &str) -> Result<RectMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|cell| {
                cell.trim().parse::<f64>().map_err(|_| {
                    Error::Parse(format!("line {}: bad number {:?}", lineno + 1, cell.trim()))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Parse(format!(
                    "line {}: expected {} columns, got {}",
                    lineno + 1,
                    first.len(),
                    row.len()
                )));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("no rows".into()));
    }
    RectMatrix::from_rows(rows)
}

pub fn write_matrix_csv(path: &Path, m: &RectMatrix) -> Result<()> {
    fs::write(path, matrix_to_csv(m))?;
    Ok(())
}

pub fn matrix_to_csv(m: &RectMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&format!("{}", m.get(i, j)));
        }
        out.push('\n');
    }
    out
}

pub fn read_sym_csv(path: &Path) -> Result<SymMatrix> {
    read_matrix_csv(path)?.into_sym(READ_SYMMETRY_TOL)
}

/// Loads a family from `path`:
/// - a `.json` file deserializes directly with its own kind tag;
/// - a directory reads every `*.csv` inside in lexicographic filename order,
///   taking `prefer_self_adjoint` into account only when every member is
///   square and symmetric (otherwise the family is rectangular).
pub fn load_family(path: &Path, prefer_self_adjoint: bool) -> Result<MatrixFamily> {
    if path.is_dir() {
        return load_family_dir(path, prefer_self_adjoint);
    }
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => {
            let text = fs::read_to_string(path)?;
            serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
        }
        _ => Err(Error::Parse(format!(
            "{}: expected a directory of CSV members or a .json family file",
            path.display()
        ))),
    }
}

fn load_family_dir(dir: &Path, prefer_self_adjoint: bool) -> Result<MatrixFamily> {
    let mut names: Vec<_> = fs::read_dir(dir)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().and_then(|e| e.to_str()) == Some("csv"))
        .collect();
    names.sort();
    if names.is_empty() {
        return Err(Error::Parse(format!(
            "{}: directory holds no .csv members",
            dir.display()
        )));
    }
    let members: Vec<RectMatrix> = names
        .iter()
        .map(|p| read_matrix_csv(p))
        .collect::<Result<_>>()?;

    let symmetric_ok = prefer_self_adjoint
        && members
            .iter()
            .all(|m| m.clone().into_sym(READ_SYMMETRY_TOL).is_ok());
    if symmetric_ok {
        MatrixFamily::self_adjoint(
            members
                .into_iter()
                .map(|m| m.into_sym(READ_SYMMETRY_TOL))
                .collect::<Result<_>>()?,
        )
    } else {
        MatrixFamily::rectangular(members)
    }
}

pub fn save_family_json(path: &Path, family: &MatrixFamily) -> Result<()> {
    let text = serde_json::to_string_pretty(family)
        .map_err(|e| Error::Parse(format!("serialize: {e}")))?;
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let m = RectMatrix::from_rows(vec![vec![1.0, 2.5, -3.0], vec![0.0, 1e-9, 4.0]]).unwrap();
        let text = matrix_to_csv(&m);
        let back = parse_matrix_csv(&text).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn ragged_csv_is_a_parse_error() {
        let text = "1,2\n3\n";
        assert!(matches!(parse_matrix_csv(text), Err(Error::Parse(_))));
    }

    #[test]
    fn bad_cell_is_a_parse_error() {
        let text = "1,x\n";
        assert!(matches!(parse_matrix_csv(text), Err(Error::Parse(_))));
    }

    #[test]
    fn family_json_round_trip() {
        let fam = MatrixFamily::self_adjoint(vec![
            SymMatrix::diag(&[1.0, 2.0]),
            SymMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap(),
        ])
        .unwrap();
        let text = serde_json::to_string(&fam).unwrap();
        assert!(text.contains("\"kind\":\"self_adjoint\""));
        let back: MatrixFamily = serde_json::from_str(&text).unwrap();
        assert_eq!(fam, back);
    }

    #[test]
    fn directory_family_loads_in_name_order() {
        let dir = std::env::temp_dir().join(format!(
            "family_io_test_{}_{}",
            std::process::id(),
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .unwrap()
                .as_nanos()
        ));
        fs::create_dir_all(&dir).unwrap();
        fs::write(dir.join("b_second.csv"), "0,1\n1,0\n").unwrap();
        fs::write(dir.join("a_first.csv"), "1,0\n0,2\n").unwrap();
        let fam = load_family(&dir, true).unwrap();
        let members = fam.as_self_adjoint().unwrap();
        assert_eq!(members[0].get(1, 1), 2.0);
        assert_eq!(members[1].get(0, 1), 1.0);
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn non_square_members_load_as_rectangular() {
        let dir = std::env::temp_dir().join(format!(
            "family_io_rect_{}_{}",
            std::process::id(),
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .unwrap()
                .as_nanos()
        ));
        fs::create_dir_all(&dir).unwrap();
        fs::write(dir.join("m0.csv"), "1,2,3\n4,5,6\n").unwrap();
        let fam = load_family(&dir, true).unwrap();
        assert!(fam.as_rectangular().is_ok());
        fs::remove_dir_all(&dir).unwrap();
    }
}
