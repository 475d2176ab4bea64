//! File formats: signal JSON, measurement CSV, point-set CSV, and the PGM
//! spectrogram export with its sidecar metadata.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so a
//! parse of the emitted text reproduces the original values bit for bit and
//! repeated runs emit identical bytes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gabor::ProductSamples;
use crate::grid::{FrequencyGrid, LebesgueExponent};
use crate::signal::BandlimitedSignal;

/// On-disk signal layout: {"B", "M", "p", "F_re", "F_im"}.
#[derive(Debug, Serialize, Deserialize)]
pub struct SignalFile {
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "M")]
    pub m: usize,
    pub p: LebesgueExponent,
    #[serde(rename = "F_re")]
    pub f_re: Vec<f64>,
    #[serde(rename = "F_im")]
    pub f_im: Vec<f64>,
}

pub fn signal_to_json(signal: &BandlimitedSignal) -> String {
    let file = SignalFile {
        b: signal.grid().half_width(),
        m: signal.grid().len(),
        p: signal.exponent(),
        f_re: signal.values().iter().map(|v| v.re).collect(),
        f_im: signal.values().iter().map(|v| v.im).collect(),
    };
    serde_json::to_string_pretty(&file).expect("signal serialization cannot fail")
}

pub fn signal_from_json(text: &str) -> Result<BandlimitedSignal> {
    let file: SignalFile =
        serde_json::from_str(text).map_err(|e| Error::MalformedInput(e.to_string()))?;
    if file.f_re.len() != file.m || file.f_im.len() != file.m {
        return Err(Error::MalformedInput(format!(
            "profile arrays must have length M = {}, got {}/{}",
            file.m,
            file.f_re.len(),
            file.f_im.len()
        )));
    }
    let grid = FrequencyGrid::new(file.b, file.m)?;
    let values = file
        .f_re
        .iter()
        .zip(&file.f_im)
        .map(|(&re, &im)| Complex64::new(re, im))
        .collect();
    BandlimitedSignal::new(grid, values, file.p)
}

/// Measurement CSV: header `x,omega,magnitude`, rows sorted by (x, omega).
pub fn measurements_to_csv(samples: &ProductSamples) -> String {
    let mut out = String::from("x,omega,magnitude\n");
    for (i, &x) in samples.positions().iter().enumerate() {
        for (k, &om) in samples.frequencies().iter().enumerate() {
            out.push_str(&format!("{x},{om},{}\n", samples.magnitude(i, k)));
        }
    }
    out
}

/// Parses the measurement CSV into (x, omega, magnitude) rows, which must be
/// sorted by (x, omega). Rotated sample sets are point lists; use
/// [`product_from_rows`] when the rows must tile a full product set.
pub fn measurements_from_csv(text: &str) -> Result<Vec<(f64, f64, f64)>> {
    let mut lines = text.lines();
    match lines.next() {
        Some("x,omega,magnitude") => {}
        other => {
            return Err(Error::MalformedInput(format!(
                "expected header 'x,omega,magnitude', got {other:?}"
            )))
        }
    }
    let mut rows: Vec<(f64, f64, f64)> = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let parse = |s: Option<&str>| -> Result<f64> {
            s.ok_or_else(|| Error::MalformedInput(format!("short row at line {}", lineno + 2)))?
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::MalformedInput(format!("line {}: {e}", lineno + 2)))
        };
        let x = parse(parts.next())?;
        let om = parse(parts.next())?;
        let mag = parse(parts.next())?;
        if parts.next().is_some() {
            return Err(Error::MalformedInput(format!(
                "line {}: too many fields",
                lineno + 2
            )));
        }
        rows.push((x, om, mag));
    }
    if rows.is_empty() {
        return Err(Error::MalformedInput("no measurement rows".into()));
    }
    if !rows.windows(2).all(|p| (p[0].0, p[0].1) < (p[1].0, p[1].1)) {
        return Err(Error::MalformedInput(
            "rows must be sorted by (x, omega)".into(),
        ));
    }
    Ok(rows)
}

/// Reassembles sorted measurement rows into product-set coordinates and the
/// row-major magnitude matrix; the full product must be present.
pub fn product_from_rows(rows: &[(f64, f64, f64)]) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    if rows.is_empty() {
        return Err(Error::MalformedInput("no measurement rows".into()));
    }
    let x0 = rows[0].0;
    let n_omega = rows.iter().take_while(|r| r.0 == x0).count();
    if n_omega == 0 || !rows.len().is_multiple_of(n_omega) {
        return Err(Error::MalformedInput(
            "rows do not tile a full product set".into(),
        ));
    }
    let omega: Vec<f64> = rows[..n_omega].iter().map(|r| r.1).collect();
    let n_x = rows.len() / n_omega;
    let mut xs = Vec::with_capacity(n_x);
    let mut magnitudes = Vec::with_capacity(rows.len());
    for i in 0..n_x {
        let block = &rows[i * n_omega..(i + 1) * n_omega];
        let x = block[0].0;
        for (k, row) in block.iter().enumerate() {
            if row.0 != x || row.1 != omega[k] {
                return Err(Error::MalformedInput(
                    "rows are not sorted over the product set".into(),
                ));
            }
            magnitudes.push(row.2);
        }
        xs.push(x);
    }
    Ok((xs, omega, magnitudes))
}

/// Point-set CSV: a single `x` column.
pub fn points_to_csv(points: &[f64]) -> String {
    let mut out = String::from("x\n");
    for p in points {
        out.push_str(&format!("{p}\n"));
    }
    out
}

pub fn points_from_csv(text: &str) -> Result<Vec<f64>> {
    let mut lines = text.lines();
    match lines.next() {
        Some("x") => {}
        other => {
            return Err(Error::MalformedInput(format!(
                "expected header 'x', got {other:?}"
            )))
        }
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.trim()
                .parse::<f64>()
                .map_err(|e| Error::MalformedInput(e.to_string()))
        })
        .collect()
}

/// Sidecar for the PGM export: the linear scale maps [0, max] to [0, 255].
#[derive(Debug, Serialize, Deserialize)]
pub struct PgmMeta {
    pub max: f64,
    pub rows: usize,
    pub cols: usize,
    pub omega_descending: bool,
    pub x_ascending: bool,
}

/// 8-bit binary PGM of the magnitude matrix: row = ω descending,
/// column = x ascending, linearly scaled by the recorded max.
pub fn spectrogram_pgm(samples: &ProductSamples) -> (Vec<u8>, PgmMeta) {
    let rows = samples.frequencies().len();
    let cols = samples.positions().len();
    let max = samples.magnitudes().iter().cloned().fold(0.0, f64::max);
    let mut bytes = format!("P5\n{cols} {rows}\n255\n").into_bytes();
    for r in 0..rows {
        let k = rows - 1 - r;
        for c in 0..cols {
            let v = samples.magnitude(c, k);
            let pixel = if max > 0.0 {
                (255.0 * v / max).round().clamp(0.0, 255.0) as u8
            } else {
                0
            };
            bytes.push(pixel);
        }
    }
    (
        bytes,
        PgmMeta {
            max,
            rows,
            cols,
            omega_descending: true,
            x_ascending: true,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gabor::magnitude_samples;

    #[test]
    fn signal_json_roundtrip() {
        let f = BandlimitedSignal::random(0.5, 16, LebesgueExponent::TWO, 11).unwrap();
        let text = signal_to_json(&f);
        let back = signal_from_json(&text).unwrap();
        assert_eq!(f.values(), back.values());
        assert_eq!(f.grid().half_width(), back.grid().half_width());
    }

    #[test]
    fn signal_json_rejects_length_mismatch() {
        let text = r#"{"B": 0.5, "M": 3, "p": 2.0, "F_re": [1.0, 2.0], "F_im": [0.0, 0.0, 0.0]}"#;
        assert!(matches!(
            signal_from_json(text),
            Err(Error::MalformedInput(_))
        ));
    }

    #[test]
    fn signal_json_accepts_inf_exponent() {
        let text =
            r#"{"B": 0.5, "M": 2, "p": "inf", "F_re": [1.0, 2.0], "F_im": [0.0, 0.0]}"#;
        let f = signal_from_json(text).unwrap();
        assert!(f.exponent().is_infinite());
    }

    #[test]
    fn measurements_roundtrip() {
        let f = BandlimitedSignal::random(0.5, 8, LebesgueExponent::TWO, 2).unwrap();
        let x: Vec<f64> = (0..7).map(|i| -1.5 + 0.5 * i as f64).collect();
        let om: Vec<f64> = (0..5).map(|i| -1.0 + 0.5 * i as f64).collect();
        let samples = magnitude_samples(&f, &x, &om).unwrap();
        let text = measurements_to_csv(&samples);
        let rows = measurements_from_csv(&text).unwrap();
        let (xs, oms, mags) = product_from_rows(&rows).unwrap();
        assert_eq!(xs, x);
        assert_eq!(oms, om);
        assert_eq!(mags, samples.magnitudes());
    }

    #[test]
    fn measurements_reject_partial_products() {
        let text = "x,omega,magnitude\n0,0,1\n0,1,1\n1,0,1\n";
        let rows = measurements_from_csv(text).unwrap();
        assert!(product_from_rows(&rows).is_err());
        let bad_header = "a,b,c\n0,0,1\n";
        assert!(measurements_from_csv(bad_header).is_err());
        let unsorted = "x,omega,magnitude\n1,0,1\n0,0,1\n";
        assert!(measurements_from_csv(unsorted).is_err());
    }

    #[test]
    fn point_csv_roundtrip() {
        let pts = vec![-1.5, 0.0, 0.25, 3.75];
        let text = points_to_csv(&pts);
        assert_eq!(points_from_csv(&text).unwrap(), pts);
    }

    #[test]
    fn pgm_layout() {
        let f = BandlimitedSignal::random(0.5, 8, LebesgueExponent::TWO, 2).unwrap();
        let x: Vec<f64> = (0..3).map(|i| i as f64).collect();
        let om: Vec<f64> = (0..2).map(|i| i as f64).collect();
        let samples = magnitude_samples(&f, &x, &om).unwrap();
        let (bytes, meta) = spectrogram_pgm(&samples);
        assert!(bytes.starts_with(b"P5\n3 2\n255\n"));
        assert_eq!(bytes.len(), b"P5\n3 2\n255\n".len() + 6);
        assert_eq!(meta.rows, 2);
        assert_eq!(meta.cols, 3);
        // top-left pixel is the highest omega at the lowest x
        let header = b"P5\n3 2\n255\n".len();
        let expect = (255.0 * samples.magnitude(0, 1) / meta.max).round() as u8;
        assert_eq!(bytes[header], expect);
    }
}
