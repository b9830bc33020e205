//! Report files. Everything is written to a sibling temp file and renamed
//! into place.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliResult;

pub const SCHEMA_VERSION: u32 = 1;

pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir)?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

pub fn csv_bytes<R, I>(header: &[String], rows: R) -> CliResult<Vec<u8>>
where
    R: IntoIterator<Item = I>,
    I: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.into_iter().collect::<Vec<_>>())?;
    }
    w.into_inner().map_err(|e| std::io::Error::other(e.to_string()).into())
}

pub fn json_bytes<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    format!("{x}")
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;

/// Line chart of F1 against k with one polyline per series.
pub fn sweep_svg(ks: &[f64], series: &[(&str, &str, &[f64])]) -> String {
    let k_lo = ks.first().copied().unwrap_or(0.0);
    let k_hi = ks.last().copied().unwrap_or(1.0);
    let k_span = if k_hi > k_lo { k_hi - k_lo } else { 1.0 };
    let x = |k: f64| MARGIN + (k - k_lo) / k_span * (WIDTH - 2.0 * MARGIN);
    let y = |f1: f64| HEIGHT - MARGIN - f1.clamp(0.0, 1.0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let (x0, x1, y0, y1) = (MARGIN, WIDTH - MARGIN, HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">k</text>"#, (x0 + x1) / 2.0, HEIGHT - 10.0);
    let _ = writeln!(
        s,
        r#"<text x="15" y="{}" text-anchor="middle" transform="rotate(-90 15 {})">F1</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );
    let _ = writeln!(s, r#"<text x="{x0}" y="{}" text-anchor="middle">{}</text>"#, y0 + 16.0, num(k_lo));
    let _ = writeln!(s, r#"<text x="{x1}" y="{}" text-anchor="middle">{}</text>"#, y0 + 16.0, num(k_hi));
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">0</text>"#, x0 - 6.0, y0 + 4.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">1</text>"#, x0 - 6.0, y1 + 4.0);
    for (i, (name, colour, values)) in series.iter().enumerate() {
        let points: Vec<String> = ks
            .iter()
            .zip(values.iter())
            .map(|(k, f)| format!("{:.2},{:.2}", x(*k), y(*f)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"><title>{name}</title></polyline>"#,
            points.join(" ")
        );
        let ly = MARGIN + 14.0 * i as f64;
        let _ = writeln!(s, r#"<text x="{}" y="{ly}" fill="{colour}">{name}</text>"#, x1 - 60.0);
    }
    s.push_str("</svg>\n");
    s
}
