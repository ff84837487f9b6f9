use crate::error::{Error, Result};
use crate::group::Group;
use crate::perm::Perm;
use crate::table::GroupTable;
use serde::Deserialize;

/// On-disk group description.
///
/// ```json
/// { "name": "alt5", "kind": "perm", "degree": 5,
///   "generators": ["(1 2 3)", "(1 2 3 4 5)"] }
/// ```
/// or, for an explicit table (row-major, index 0 = identity):
/// ```json
/// { "name": "c3", "kind": "table", "degree": 3,
///   "table": [0,1,2, 1,2,0, 2,0,1] }
/// ```
#[derive(Debug, Deserialize)]
pub struct GroupFile {
    pub name: String,
    pub kind: String,
    #[serde(default)]
    pub degree: Option<usize>,
    #[serde(default)]
    pub generators: Option<Vec<String>>,
    #[serde(default)]
    pub table: Option<Vec<u32>>,
}

/// Parse a JSON group description and build the group.
pub fn build_group(json: &str) -> Result<Group> {
    let f: GroupFile =
        serde_json::from_str(json).map_err(|e| Error::Invalid(format!("bad group file: {}", e)))?;
    build_from_file(&f)
}

pub fn build_from_file(f: &GroupFile) -> Result<Group> {
    match f.kind.as_str() {
        "perm" => {
            let degree = f
                .degree
                .ok_or_else(|| Error::Invalid("perm kind needs a degree".into()))?;
            let gens = f
                .generators
                .as_ref()
                .ok_or_else(|| Error::Invalid("perm kind needs generators".into()))?;
            if degree == 0 {
                return Err(Error::Invalid("degree must be positive".into()));
            }
            let gens: Vec<Perm> = gens
                .iter()
                .map(|s| Perm::from_cycles(s, degree))
                .collect::<Result<_>>()?;
            Group::from_perm_gens(&f.name, degree, gens)
        }
        "table" => {
            let table = f
                .table
                .as_ref()
                .ok_or_else(|| Error::Invalid("table kind needs a table".into()))?;
            let n = f.degree.unwrap_or_else(|| (table.len() as f64).sqrt() as usize);
            Ok(Group::from_table(
                &f.name,
                GroupTable::from_raw_table(n, table.clone())?,
            ))
        }
        other => Err(Error::Invalid(format!("unknown kind {:?}", other))),
    }
}
