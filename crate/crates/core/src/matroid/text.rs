//! Text format: a line `dim=n` followed by a line of `2^n - 1` characters
//! over `{0,1,*}` in point order. The JSON form wraps the same payload as
//! `{"dim": n, "table": "..."}`.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use super::{Cell, Matroid, Pattern, PointTable};
use crate::gf2::num_points;
use crate::{Error, Result};

fn table_string(dim: usize, cell: impl Fn(u32) -> Cell) -> String {
    (1..=num_points(dim) as u32).map(|x| cell(x).to_char()).collect()
}

fn parse_table(dim: usize, table: &str) -> Result<Vec<Cell>> {
    let cells = table
        .chars()
        .map(|c| match c {
            '0' => Ok(Cell::Zero),
            '1' => Ok(Cell::One),
            '*' => Ok(Cell::Star),
            other => Err(Error::Parse(format!("unexpected table character {other:?}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    if cells.len() as u64 != num_points(dim) {
        return Err(Error::Parse(format!(
            "dimension {dim} needs {} table entries, found {}",
            num_points(dim),
            cells.len()
        )));
    }
    Ok(cells)
}

fn parse_text(s: &str) -> Result<(usize, Vec<Cell>)> {
    let mut lines = s
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("missing `dim=n` line".into()))?;
    let dim = header
        .strip_prefix("dim=")
        .ok_or_else(|| Error::Parse(format!("expected `dim=n`, found {header:?}")))?
        .trim()
        .parse::<usize>()
        .map_err(|e| Error::Parse(format!("bad dimension: {e}")))?;
    if dim > super::MAX_TABLE_DIM {
        return Err(Error::Parse(format!("dimension {dim} too large")));
    }
    let table = lines.next().unwrap_or("");
    if let Some(extra) = lines.next() {
        return Err(Error::Parse(format!("trailing content {extra:?}")));
    }
    Ok((dim, parse_table(dim, table)?))
}

fn pattern_from_cells(dim: usize, cells: &[Cell]) -> Result<Pattern> {
    Pattern::from_fn(dim, |x| cells[(x - 1) as usize])
}

impl Pattern {
    pub fn to_text(&self) -> String {
        format!("dim={}\n{}\n", self.dim(), self.table_string())
    }

    pub fn table_string(&self) -> String {
        table_string(self.dim(), |x| self.get(x))
    }

    pub fn from_table(dim: usize, table: &str) -> Result<Pattern> {
        pattern_from_cells(dim, &parse_table(dim, table)?)
    }
}

impl Matroid {
    pub fn to_text(&self) -> String {
        format!("dim={}\n{}\n", self.dim(), self.table_string())
    }

    pub fn table_string(&self) -> String {
        table_string(self.dim(), |x| Cell::from_bool(self.get(x)))
    }

    pub fn from_table(dim: usize, table: &str) -> Result<Matroid> {
        Pattern::from_table(dim, table)?
            .to_matroid()
            .ok_or_else(|| Error::Parse("matroid tables cannot contain `*`".into()))
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Pattern> {
        let (dim, cells) = parse_text(s)?;
        pattern_from_cells(dim, &cells)
    }
}

impl FromStr for Matroid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Matroid> {
        s.parse::<Pattern>()?
            .to_matroid()
            .ok_or_else(|| Error::Parse("matroid tables cannot contain `*`".into()))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Display for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    dim: usize,
    table: String,
}

impl Serialize for Matroid {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TableRepr {
            dim: self.dim(),
            table: self.table_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matroid {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = TableRepr::deserialize(d)?;
        Matroid::from_table(r.dim, &r.table).map_err(de::Error::custom)
    }
}

impl Serialize for Pattern {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TableRepr {
            dim: self.dim(),
            table: self.table_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Pattern {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = TableRepr::deserialize(d)?;
        Pattern::from_table(r.dim, &r.table).map_err(de::Error::custom)
    }
}
