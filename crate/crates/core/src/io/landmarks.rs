//! Landmark correspondence files.
//!
//! Two equivalent formats are supported: CSV with the header `sx,sy,tx,ty`
//! (one row per pair) and a JSON array of `{"source": [x, y], "target": [x, y]}`
//! objects.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::registration::{LandmarkCorrespondence, Point2};

#[derive(Debug, Serialize, Deserialize)]
struct JsonPair {
    source: [f64; 2],
    target: [f64; 2],
}

/// Parses the CSV form. Parse failures carry the 1-based line number.
pub fn parse_csv(text: &str) -> Result<LandmarkCorrespondence> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "sx,sy,tx,ty" => {}
        Some((_, header)) => {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header 'sx,sy,tx,ty', got {:?}", header.trim()),
            })
        }
        None => {
            return Err(Error::Parse {
                line: 1,
                message: "empty landmark file".into(),
            })
        }
    }

    let mut source = Vec::new();
    let mut target = Vec::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 4 comma-separated values, got {}", fields.len()),
            });
        }
        let mut vals = [0.0f64; 4];
        for (v, f) in vals.iter_mut().zip(&fields) {
            *v = f.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid number {f:?}"),
            })?;
        }
        source.push(Point2::new(vals[0], vals[1]));
        target.push(Point2::new(vals[2], vals[3]));
    }
    LandmarkCorrespondence::new(source, target)
}

/// Serializes to the CSV form with 9 significant digits.
pub fn to_csv(lm: &LandmarkCorrespondence) -> String {
    let mut out = String::from("sx,sy,tx,ty\n");
    for (s, t) in lm.source().iter().zip(lm.target()) {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt9(s.x),
            fmt9(s.y),
            fmt9(t.x),
            fmt9(t.y)
        ));
    }
    out
}

/// Parses the JSON form.
pub fn parse_json(text: &str) -> Result<LandmarkCorrespondence> {
    let pairs: Vec<JsonPair> = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let source = pairs
        .iter()
        .map(|p| Point2::new(p.source[0], p.source[1]))
        .collect();
    let target = pairs
        .iter()
        .map(|p| Point2::new(p.target[0], p.target[1]))
        .collect();
    LandmarkCorrespondence::new(source, target)
}

/// Serializes to the JSON form.
pub fn to_json(lm: &LandmarkCorrespondence) -> String {
    let pairs: Vec<JsonPair> = lm
        .source()
        .iter()
        .zip(lm.target())
        .map(|(s, t)| JsonPair {
            source: [s.x, s.y],
            target: [t.x, t.y],
        })
        .collect();
    serde_json::to_string_pretty(&pairs).expect("landmark serialization cannot fail")
}

/// Loads a landmark file, dispatching on the `.json` extension (anything else
/// is treated as CSV).
pub fn read_file(path: &Path) -> Result<LandmarkCorrespondence> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().and_then(|e| e.to_str()) == Some("json") {
        parse_json(&text)
    } else {
        parse_csv(&text)
    }
}

/// Fixed-width scientific formatting with 9 significant digits, used for all
/// deterministic file output.
pub fn fmt9(x: f64) -> String {
    format!("{x:.8e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let lm = LandmarkCorrespondence::new(
            vec![Point2::new(0.5, 0.5), Point2::new(1.0, 2.0)],
            vec![Point2::new(0.6, 0.7), Point2::new(1.0, 2.5)],
        )
        .unwrap();
        let back = parse_csv(&to_csv(&lm)).unwrap();
        assert_eq!(back, lm);
    }

    #[test]
    fn json_round_trip() {
        let lm = LandmarkCorrespondence::new(
            vec![Point2::new(0.25, -1.5)],
            vec![Point2::new(0.5, -1.0)],
        )
        .unwrap();
        assert_eq!(parse_json(&to_json(&lm)).unwrap(), lm);
    }

    #[test]
    fn csv_errors_carry_line_numbers() {
        match parse_csv("sx,sy,tx,ty\n1,2,3,4\n1,2,three,4\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_csv("x,y\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected header error, got {other:?}"),
        }
        match parse_csv("sx,sy,tx,ty\n1,2,3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected field-count error, got {other:?}"),
        }
    }

    #[test]
    fn blank_lines_are_ignored() {
        let lm = parse_csv("sx,sy,tx,ty\n0,0,1,1\n\n2,2,3,3\n").unwrap();
        assert_eq!(lm.len(), 2);
    }
}
