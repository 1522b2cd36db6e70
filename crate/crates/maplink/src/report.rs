//! CSV output of cross-validation results.

use std::io::Write;

use maplink_core::{CrossValidation, LinkageScore};

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_string(), |x| format!("{x}"))
}

fn counts(s: &LinkageScore) -> [String; 4] {
    [s.correct_edges, s.total_edges, s.linked_phrases, s.total_multiword_phrases].map(|n| n.to_string())
}

/// One row per method and fold, then one `mean` row per method.
pub fn write_cv_csv<W: Write>(out: W, cv: &CrossValidation) -> crate::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "method",
        "fold",
        "precision",
        "recall",
        "correct_edges",
        "total_edges",
        "linked_phrases",
        "total_multiword_phrases",
    ])?;
    for f in &cv.folds {
        let [a, b, c, d] = counts(&f.score);
        w.write_record([
            f.method.name().to_string(),
            f.fold.to_string(),
            cell(f.score.precision()),
            cell(f.score.recall()),
            a,
            b,
            c,
            d,
        ])?;
    }
    for s in &cv.summary {
        let [a, b, c, d] = counts(&s.totals);
        w.write_record([
            s.method.name().to_string(),
            "mean".to_string(),
            cell(s.precision),
            cell(s.recall),
            a,
            b,
            c,
            d,
        ])?;
    }
    w.flush().map_err(|e| crate::Error::Csv(e.into()))?;
    Ok(())
}
