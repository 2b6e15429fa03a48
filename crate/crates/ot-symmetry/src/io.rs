//! CSV ingestion and emission, plus the shared numeric formatting rule
//! (6 significant digits) for all text output.

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::reference::ReferenceSet;
use crate::signedrank::Decomposition;
use crate::{Point, Real};
use std::io::BufRead;

/// Round to 6 significant digits.
pub fn round_sig(x: Real) -> Real {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let digits = x.abs().log10().floor();
    let factor = 10f64.powf(5.0 - digits);
    (x * factor).round() / factor
}

/// Format with 6 significant digits.
pub fn fmt_sig(x: Real) -> String {
    format!("{}", round_sig(x))
}

/// Parse a CSV of n rows by p numeric columns. A first row that fails
/// numeric parsing is treated as a header. NaN and infinities are
/// rejected; errors carry 1-based line numbers.
pub fn read_points_csv<R: BufRead>(reader: R) -> Result<Vec<Point>> {
    let mut out: Vec<Point> = Vec::new();
    let mut width: Option<usize> = None;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        let parsed: std::result::Result<Vec<Real>, _> =
            fields.iter().map(|f| f.parse::<Real>()).collect();
        let row = match parsed {
            Ok(row) => row,
            Err(e) => {
                if idx == 0 {
                    continue;
                }
                return Err(Error::Csv { line: line_no, msg: e.to_string() });
            }
        };
        if let Some(bad) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::Csv {
                line: line_no,
                msg: format!("non-finite value in column {}", bad + 1),
            });
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::Csv {
                    line: line_no,
                    msg: format!("expected {w} columns, found {}", row.len()),
                })
            }
            _ => {}
        }
        out.push(row);
    }
    if out.is_empty() {
        return Err(Error::Csv { line: 1, msg: "no data rows".into() });
    }
    Ok(out)
}

/// Reference points as CSV with header h1..hp.
pub fn reference_csv(reference: &ReferenceSet) -> String {
    let p = reference.dim();
    let mut out = (1..=p).map(|k| format!("h{k}")).collect::<Vec<_>>().join(",");
    out.push('\n');
    // full precision so a round trip through the file reproduces the report
    for h in reference.points() {
        out.push_str(&h.iter().map(|&v| format!("{v}")).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

fn sign_tag(sign: &GroupElement) -> String {
    let values: Vec<Real> = match sign {
        GroupElement::Scalar(s) => vec![*s],
        GroupElement::Diagonal(d) => d.clone(),
        GroupElement::Matrix(m) => m.transpose().as_slice().to_vec(),
    };
    values.iter().map(|&v| fmt_sig(v)).collect::<Vec<_>>().join(";")
}

/// Full decomposition as CSV: columns x1..xp, r1..rp, sr1..srp,
/// sign_tag (sign entries joined by semicolons).
pub fn decomposition_csv(data: &[Point], decomp: &Decomposition) -> String {
    let p = data[0].len();
    let mut header: Vec<String> = Vec::new();
    for prefix in ["x", "r", "sr"] {
        for k in 1..=p {
            header.push(format!("{prefix}{k}"));
        }
    }
    header.push("sign_tag".into());
    let mut out = header.join(",");
    out.push('\n');
    for i in 0..data.len() {
        let mut row: Vec<String> = Vec::new();
        for source in [&data[i], &decomp.ranks[i], &decomp.signed_ranks[i]] {
            row.extend(source.iter().map(|&v| fmt_sig(v)));
        }
        row.push(sign_tag(&decomp.signs[i]));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
