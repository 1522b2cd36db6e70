//! Plain-text storage of a learned metric: a comment header and four rows
//! of four numbers, in feature order d, h, a, c.

use std::path::Path;

use maplink_core::MetricMatrix;

use crate::error::{Error, Result};

pub fn format_metric(m: &MetricMatrix) -> String {
    let mut out = String::from("# maplink metric, feature order: d h a c\n");
    for row in m.entries() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_metric(text: &str, origin: &str) -> Result<MetricMatrix> {
    let rows: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    if rows.len() != 4 {
        return Err(Error::format(origin, format!("expected 4 matrix rows, found {}", rows.len())));
    }
    let mut m = [[0.0; 4]; 4];
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<&str> = row.split_whitespace().collect();
        if cells.len() != 4 {
            return Err(Error::format(origin, format!("row {} has {} entries, expected 4", i + 1, cells.len())));
        }
        for (j, cell) in cells.iter().enumerate() {
            m[i][j] = cell
                .parse()
                .map_err(|_| Error::format(origin, format!("row {}: {cell:?} is not a number", i + 1)))?;
        }
    }
    MetricMatrix::new(m).map_err(|e| Error::format(origin, e.to_string()))
}

pub fn save_metric(path: impl AsRef<Path>, m: &MetricMatrix) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_metric(m)).map_err(|e| Error::io(path, e))
}

pub fn load_metric(path: impl AsRef<Path>) -> Result<MetricMatrix> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_metric(&text, &path.display().to_string())
}
