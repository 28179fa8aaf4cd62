//! JSON files for groups, actions, representations and decompositions, and the
//! CSV representation table.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use symcert_core::action::{validate_action, FiniteAction};
use symcert_core::certify::RepresentationTable;
use symcert_core::group::{validate_square, DirectProductDecomposition, FiniteGroup, Subgroup};
use symcert_core::linalg::{CMatrix, C64};
use symcert_core::rep::{validate_representation, Field, LinearRepresentation};

use crate::error::{format_error, Error, IoContext, Result};

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).at(path)?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    fs::write(path, text).at(path)
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

/// `{ "order": n, "labels": [...], "cayley": [n·n entries] }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupFile {
    pub order: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
    pub cayley: Vec<usize>,
}

impl GroupFile {
    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupFile {
            order: g.order(),
            labels: g.labels().to_vec(),
            cayley: g.cayley().to_vec(),
        }
    }

    pub fn build(&self) -> Result<FiniteGroup> {
        Ok(validate_square(self.order, &self.cayley, &self.labels)?)
    }
}

/// A group stored in another file, or written out in place.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Path(PathBuf),
    Inline(GroupFile),
}

impl GroupRef {
    /// Relative paths are taken from `base`.
    pub fn resolve(&self, base: &Path) -> Result<FiniteGroup> {
        match self {
            GroupRef::Path(p) => load_group(&base.join(p)),
            GroupRef::Inline(g) => g.build(),
        }
    }
}

pub fn load_group(path: &Path) -> Result<FiniteGroup> {
    read_json::<GroupFile>(path)?.build()
}

/// `{ "group": <ref>, "set_size": m, "table": [n·m entries] }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionFile {
    pub group: GroupRef,
    pub set_size: usize,
    pub table: Vec<usize>,
}

pub fn load_action(path: &Path) -> Result<FiniteAction> {
    let file: ActionFile = read_json(path)?;
    let group = file.group.resolve(&base_dir(path))?;
    Ok(validate_action(&group, file.set_size, &file.table)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldName {
    Real,
    Complex,
}

/// `{ "group": <ref>, "dim": d, "field": "real"|"complex", "matrices": [n][d][d] }`;
/// complex entries are `[re, im]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepFile {
    pub group: GroupRef,
    pub dim: usize,
    pub field: FieldName,
    pub matrices: Vec<Vec<Vec<Entry>>>,
}

impl RepFile {
    pub fn from_rep(rep: &LinearRepresentation, group: GroupRef) -> Self {
        let field = match rep.field() {
            Field::Real => FieldName::Real,
            Field::Complex => FieldName::Complex,
        };
        let matrices = rep
            .matrices()
            .iter()
            .map(|m| {
                m.row_iter()
                    .map(|row| {
                        row.iter()
                            .map(|z| match field {
                                FieldName::Real => Entry::Real(z.re),
                                FieldName::Complex => Entry::Complex([z.re, z.im]),
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        RepFile {
            group,
            dim: rep.dim(),
            field,
            matrices,
        }
    }
}

pub fn load_representation(path: &Path, tol_rep: f64) -> Result<LinearRepresentation> {
    let file: RepFile = read_json(path)?;
    let group = file.group.resolve(&base_dir(path))?;
    let d = file.dim;
    let mut mats = Vec::with_capacity(file.matrices.len());
    for (g, rows) in file.matrices.iter().enumerate() {
        if rows.len() != d || rows.iter().any(|r| r.len() != d) {
            return Err(format_error(path, format!("matrix {g} is not {d}×{d}")));
        }
        mats.push(CMatrix::from_fn(d, d, |i, j| match rows[i][j] {
            Entry::Real(x) => C64::new(x, 0.0),
            Entry::Complex([re, im]) => C64::new(re, im),
        }));
    }
    let field = match file.field {
        FieldName::Real => Field::Real,
        FieldName::Complex => Field::Complex,
    };
    Ok(validate_representation(&group, field, mats, tol_rep)?)
}

/// `{ "factors": [[members], ...], "labels": [...] }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub factors: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl DecompositionFile {
    pub fn from_decomposition(d: &DirectProductDecomposition, labels: Option<Vec<String>>) -> Self {
        DecompositionFile {
            factors: d.factors().iter().map(|f| f.members().to_vec()).collect(),
            labels,
        }
    }

    pub fn build(&self, group: &FiniteGroup) -> Result<DirectProductDecomposition> {
        let factors = self
            .factors
            .iter()
            .map(|m| Subgroup::new(group, m.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DirectProductDecomposition::new(group, factors)?)
    }
}

pub fn load_decomposition(path: &Path, group: &FiniteGroup) -> Result<DirectProductDecomposition> {
    read_json::<DecompositionFile>(path)?.build(group)
}

/// Header `state_id,z_0,…,z_{d-1}`, one row per state in id order.
pub fn write_table(path: &Path, table: &RepresentationTable) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    let mut header = vec!["state_id".to_string()];
    header.extend((0..table.dim()).map(|k| format!("z_{k}")));
    w.write_record(&header).map_err(csv_err)?;
    for (id, row) in table.rows().enumerate() {
        let mut record = vec![id.to_string()];
        record.extend(row.iter().map(|v| v.to_string()));
        w.write_record(&record).map_err(csv_err)?;
    }
    w.flush().at(path)
}

/// Rows may come in any order but every id in `0..count` must appear once.
pub fn read_table(path: &Path) -> Result<RepresentationTable> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = r.headers().map_err(csv_err)?.clone();
    let dim = header.len().saturating_sub(1);
    let expected =
        std::iter::once("state_id".to_string()).chain((0..dim).map(|k| format!("z_{k}")));
    if dim == 0
        || !header
            .iter()
            .eq(expected.collect::<Vec<_>>().iter().map(String::as_str))
    {
        return Err(format_error(
            path,
            "header must be state_id,z_0,...,z_{d-1}",
        ));
    }
    let mut rows: Vec<Option<Vec<f64>>> = Vec::new();
    for record in r.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line());
        let parse_err = || format_error(path, format!("line {line}: bad number"));
        let id: usize = record[0].trim().parse().map_err(|_| parse_err())?;
        let values = record
            .iter()
            .skip(1)
            .map(|v| v.trim().parse::<f64>().map_err(|_| parse_err()))
            .collect::<Result<Vec<_>>>()?;
        if id >= rows.len() {
            rows.resize(id + 1, None);
        }
        if rows[id].replace(values).is_some() {
            return Err(format_error(
                path,
                format!("line {line}: duplicate state_id {id}"),
            ));
        }
    }
    let rows = rows
        .into_iter()
        .enumerate()
        .map(|(id, r)| r.ok_or_else(|| format_error(path, format!("missing state_id {id}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(RepresentationTable::new(rows)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use symcert_core::group::{cube_rotation_group, cyclic_group};
    use symcert_core::rep::regular_representation;

    #[test]
    fn group_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cube.json");
        let g = cube_rotation_group();
        write_json(&path, &GroupFile::from_group(&g)).unwrap();
        let back = load_group(&path).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.labels(), g.labels());
    }

    #[test]
    fn action_with_group_path() {
        let dir = tempfile::tempdir().unwrap();
        let g = cyclic_group(3).unwrap();
        write_json(&dir.path().join("c3.json"), &GroupFile::from_group(&g)).unwrap();
        let file = ActionFile {
            group: GroupRef::Path("c3.json".into()),
            set_size: 3,
            table: vec![0, 1, 2, 1, 2, 0, 2, 0, 1],
        };
        let path = dir.path().join("action.json");
        write_json(&path, &file).unwrap();
        assert!(load_action(&path).unwrap().is_transitive());
        let bad = ActionFile {
            table: vec![1, 0, 2, 1, 2, 0, 2, 0, 1],
            ..file
        };
        write_json(&path, &bad).unwrap();
        assert!(matches!(load_action(&path), Err(Error::Action(_))));
    }

    #[test]
    fn rep_round_trip_inline() {
        let dir = tempfile::tempdir().unwrap();
        let g = cyclic_group(4).unwrap();
        let rep = regular_representation(&g).complexified();
        let path = dir.path().join("rep.json");
        write_json(
            &path,
            &RepFile::from_rep(&rep, GroupRef::Inline(GroupFile::from_group(&g))),
        )
        .unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.contains("\"complex\""));
        let back = load_representation(&path, 1e-9).unwrap();
        assert_eq!(back.matrices(), rep.matrices());
    }

    #[test]
    fn table_round_trip_and_truncation() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let t = RepresentationTable::new(vec![vec![0.1, -2.5e-17], vec![1.0 / 3.0, 4.0]]).unwrap();
        write_table(&path, &t).unwrap();
        assert_eq!(read_table(&path).unwrap(), t);
        fs::write(&path, "state_id,z_0,z_1\n0,1,2\n1,3\n").unwrap();
        assert!(read_table(&path).is_err());
        fs::write(&path, "state_id,z_0\n0,1\n2,3\n").unwrap();
        assert!(matches!(read_table(&path), Err(Error::Format { .. })));
        fs::write(&path, "id,z_0\n0,1\n").unwrap();
        assert!(read_table(&path).is_err());
    }
}
