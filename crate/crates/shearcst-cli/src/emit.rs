//! File formats for sampled slices and geometry summaries.
//!
//! Both slice formats round-trip every finite `f64` bit-exactly: values are
//! written in the shortest decimal form that parses back to the same bits
//! (Rust's `Display` for CSV, `serde_json`'s shortest form for JSON), and
//! the readers parse with the standard exact decimal-to-binary conversion.
//! Non-finite values are refused at write time rather than emitted in a
//! form a reader could misinterpret.

use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use shearcst::{PhaseSlice, UniformGrid, C64};

/// On-disk representation of a slice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// Plain-text table: three `#` header lines, a column line, then
    /// `x1,x3,re,im` rows.
    Csv,
    /// A single JSON object mirroring the CSV content.
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

impl FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => bail!("unknown format {other:?} (expected csv or json)"),
        }
    }
}

impl Format {
    /// Infers the format from a file extension, defaulting to CSV.
    pub fn infer(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

/// JSON document for one slice; `values` is row-major over x₁ with each
/// sample as `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceDoc {
    pub grid1: UniformGrid,
    pub grid3: UniformGrid,
    pub x2: f64,
    pub values: Vec<[f64; 2]>,
}

impl SliceDoc {
    pub fn from_slice(s: &PhaseSlice) -> Self {
        SliceDoc {
            grid1: s.grid1,
            grid3: s.grid3,
            x2: s.x2,
            values: s.values.iter().map(|v| [v.re, v.im]).collect(),
        }
    }

    pub fn into_slice(self) -> Result<PhaseSlice> {
        let values = self.values.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        PhaseSlice::new(self.grid1, self.grid3, self.x2, values)
            .context("slice document is inconsistent")
    }
}

fn check_finite(s: &PhaseSlice) -> Result<()> {
    if !s.x2.is_finite() {
        bail!("refusing to serialize non-finite x2 = {}", s.x2);
    }
    if let Some(v) = s.values.iter().find(|v| !v.re.is_finite() || !v.im.is_finite()) {
        bail!("refusing to serialize non-finite sample {v}");
    }
    Ok(())
}

/// Writes a slice in the requested format.
pub fn write_slice(w: &mut impl Write, format: Format, s: &PhaseSlice) -> Result<()> {
    check_finite(s)?;
    match format {
        Format::Csv => write_csv(w, s),
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, &SliceDoc::from_slice(s))?;
            writeln!(w)?;
            Ok(())
        }
    }
}

/// Reads a slice in the requested format.
pub fn read_slice(r: impl Read, format: Format) -> Result<PhaseSlice> {
    match format {
        Format::Csv => read_csv(r),
        Format::Json => {
            let doc: SliceDoc = serde_json::from_reader(r).context("invalid slice JSON")?;
            doc.into_slice()
        }
    }
}

/// Writes a slice to `path`.
pub fn save_slice(path: &Path, format: Format, s: &PhaseSlice) -> Result<()> {
    let mut file = std::io::BufWriter::new(
        std::fs::File::create(path)
            .with_context(|| format!("cannot create {}", path.display()))?,
    );
    write_slice(&mut file, format, s)
}

/// Reads a slice from `path`.
pub fn load_slice(path: &Path, format: Format) -> Result<PhaseSlice> {
    let file = std::fs::File::open(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    read_slice(file, format)
}

fn write_csv(w: &mut impl Write, s: &PhaseSlice) -> Result<()> {
    writeln!(w, "# grid x1 {} {} {}", s.grid1.origin, s.grid1.step, s.grid1.count)?;
    writeln!(w, "# grid x3 {} {} {}", s.grid3.origin, s.grid3.step, s.grid3.count)?;
    writeln!(w, "# x2 {}", s.x2)?;
    writeln!(w, "x1,x3,re,im")?;
    for i1 in 0..s.grid1.count {
        let x1 = s.grid1.point(i1);
        for i3 in 0..s.grid3.count {
            let v = s.at(i1, i3);
            writeln!(w, "{},{},{},{}", x1, s.grid3.point(i3), v.re, v.im)?;
        }
    }
    Ok(())
}

fn parse_grid_header(line: &str, axis: &str) -> Result<UniformGrid> {
    let rest = line
        .strip_prefix(&format!("# grid {axis} "))
        .with_context(|| format!("expected `# grid {axis} ...`, got {line:?}"))?;
    let fields: Vec<&str> = rest.split_whitespace().collect();
    let [origin, step, count] = fields.as_slice() else {
        bail!("grid header needs `origin step count`, got {line:?}");
    };
    UniformGrid::new(
        origin.parse().with_context(|| format!("bad grid origin in {line:?}"))?,
        step.parse().with_context(|| format!("bad grid step in {line:?}"))?,
        count.parse().with_context(|| format!("bad grid count in {line:?}"))?,
    )
    .context("grid header describes an invalid grid")
}

fn read_csv(r: impl Read) -> Result<PhaseSlice> {
    let mut lines = BufReader::new(r).lines();
    let mut next = |what: &str| -> Result<String> {
        lines
            .next()
            .with_context(|| format!("file ended before the {what} line"))?
            .context("read error")
    };
    let grid1 = parse_grid_header(&next("x1 grid header")?, "x1")?;
    let grid3 = parse_grid_header(&next("x3 grid header")?, "x3")?;
    let x2_line = next("x2 header")?;
    let x2: f64 = x2_line
        .strip_prefix("# x2 ")
        .with_context(|| format!("expected `# x2 ...`, got {x2_line:?}"))?
        .trim()
        .parse()
        .with_context(|| format!("bad x2 value in {x2_line:?}"))?;
    let columns = next("column header")?;
    if columns.trim() != "x1,x3,re,im" {
        bail!("expected column header `x1,x3,re,im`, got {columns:?}");
    }

    let mut values = Vec::with_capacity(grid1.count * grid3.count);
    for (idx, line) in lines.enumerate() {
        let line = line.context("read error")?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let [x1, x3, re, im] = fields.as_slice() else {
            bail!("row {} has {} fields, expected 4", idx + 1, fields.len());
        };
        // The coordinate columns are redundant with the grid headers;
        // requiring an exact match catches truncated or reordered rows.
        let i1 = values.len() / grid3.count;
        let i3 = values.len() % grid3.count;
        let want1 = grid1.point(i1);
        let want3 = grid3.point(i3);
        if x1.parse::<f64>().ok() != Some(want1) || x3.parse::<f64>().ok() != Some(want3) {
            bail!("row {}: coordinates ({x1}, {x3}) do not match the declared grids", idx + 1);
        }
        values.push(C64::new(
            re.parse().with_context(|| format!("bad re value on row {}", idx + 1))?,
            im.parse().with_context(|| format!("bad im value on row {}", idx + 1))?,
        ));
    }
    PhaseSlice::new(grid1, grid3, x2, values).context("csv body does not match its headers")
}

/// Cayley-disk summary of one squeeze parameter, as emitted by the
/// `geometry` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryDoc {
    /// Squeeze parameter E the document describes.
    pub squeeze: f64,
    /// Centre of the Cayley circle on the real axis.
    pub center: f64,
    /// Radius of the Cayley circle.
    pub radius: f64,
    /// Closest approach to the disk centre, |u(x₂ = 0)|.
    pub contraction: f64,
    /// Admissible squeeze window (lower, upper) of the configured seed
    /// radius.
    pub window: (f64, f64),
    /// Times in the first period at which the evolved Cayley point crosses
    /// the imaginary axis; absent when the point sits at the disk centre.
    pub jump_times: Option<Vec<f64>>,
    /// Sampled points u(x₂) on the circle.
    pub circle: Vec<CayleySample>,
}

/// One sampled Cayley point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CayleySample {
    pub x2: f64,
    pub re: f64,
    pub im: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn awkward_slice() -> PhaseSlice {
        let g1 = UniformGrid::new(-0.375, 0.125, 3).unwrap();
        let g3 = UniformGrid::new(0.1, 0.3, 2).unwrap();
        let values = vec![
            C64::new(1.0, -0.0),
            C64::new(1e-300, f64::MIN_POSITIVE),
            C64::new(-2.5e17, 0.1 + 0.2),
            C64::new(std::f64::consts::PI, -1.0 / 3.0),
            C64::new(f64::EPSILON, -f64::MAX / 2.0),
            C64::new(0.0, 9.109_383_7e-31),
        ];
        PhaseSlice::new(g1, g3, -0.007, values).unwrap()
    }

    fn assert_bit_equal(a: &PhaseSlice, b: &PhaseSlice) {
        assert_eq!(a.grid1, b.grid1);
        assert_eq!(a.grid3, b.grid3);
        assert_eq!(a.x2.to_bits(), b.x2.to_bits());
        assert_eq!(a.values.len(), b.values.len());
        for (u, v) in a.values.iter().zip(&b.values) {
            assert_eq!(u.re.to_bits(), v.re.to_bits(), "re mismatch: {u} vs {v}");
            assert_eq!(u.im.to_bits(), v.im.to_bits(), "im mismatch: {u} vs {v}");
        }
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let s = awkward_slice();
        let mut buf = Vec::new();
        write_slice(&mut buf, Format::Csv, &s).unwrap();
        let back = read_slice(buf.as_slice(), Format::Csv).unwrap();
        assert_bit_equal(&s, &back);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let s = awkward_slice();
        let mut buf = Vec::new();
        write_slice(&mut buf, Format::Json, &s).unwrap();
        let back = read_slice(buf.as_slice(), Format::Json).unwrap();
        assert_bit_equal(&s, &back);
    }

    #[test]
    fn non_finite_samples_are_refused_at_write_time() {
        let g = UniformGrid::new(0.0, 1.0, 2).unwrap();
        let s =
            PhaseSlice::new(g, g, 0.0, vec![C64::new(f64::NAN, 0.0); 4]).unwrap();
        for format in [Format::Csv, Format::Json] {
            assert!(write_slice(&mut Vec::new(), format, &s).is_err());
        }
    }

    #[test]
    fn corrupted_csv_is_rejected() {
        let s = awkward_slice();
        let mut buf = Vec::new();
        write_slice(&mut buf, Format::Csv, &s).unwrap();
        let text = String::from_utf8(buf).unwrap();

        // Dropping a row breaks the coordinate check on the next row.
        let mut lines: Vec<&str> = text.lines().collect();
        lines.remove(5);
        let truncated = lines.join("\n");
        assert!(read_csv(truncated.as_bytes()).is_err());

        // Tampering with a grid header breaks the declared shape.
        let reshaped = text.replace("# grid x3 0.1 0.3 2", "# grid x3 0.1 0.3 3");
        assert!(read_csv(reshaped.as_bytes()).is_err());
    }

    #[test]
    fn format_inference_follows_the_extension() {
        assert_eq!(Format::infer(Path::new("out.json")), Format::Json);
        assert_eq!(Format::infer(Path::new("out.csv")), Format::Csv);
        assert_eq!(Format::infer(Path::new("out.dat")), Format::Csv);
    }
}
