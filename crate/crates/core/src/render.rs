//! Serialization of masks, residue rows and stripe overlays.
//!
//! Netpbm output follows the plain formats: `P1` (bitmap, `1` = black),
//! `P2` (graymap) and `P3` (pixmap), with `P4` available for compact bitmaps.
//! Nonzero entries are black and divisible entries white. Cells outside the
//! triangle are white too; the JSON format keeps them apart as `null`.
//!
//! Centered layouts use a grid of width `2R - 1` in which cell `(n, i)` sits
//! at column `(R - 1 - n) + 2i`, so each row is offset half a cell from its
//! neighbours the way the triangle is usually drawn.

use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use serde_json::json;

use crate::digits::digit_at;
use crate::triangle::{CellGrid, DivisibilityMask, TriangleRow};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Format {
    Ascii,
    /// Plain bitmap, `P1`.
    Pbm,
    /// Binary bitmap, `P4`.
    PbmRaw,
    /// Plain graymap, `P2`.
    Pgm,
    /// Plain pixmap, `P3`.
    Ppm,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "ascii" => Format::Ascii,
            "pbm" => Format::Pbm,
            "pbm-raw" => Format::PbmRaw,
            "pgm" => Format::Pgm,
            "ppm" => Format::Ppm,
            "json" => Format::Json,
            other => return Err(Error::InvalidArgument(format!("unknown format {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Alignment {
    #[default]
    Left,
    Centered,
}

impl fmt::Display for Alignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Alignment::Left => "left",
            Alignment::Centered => "centered",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Destination {
    #[default]
    Stdout,
    File(PathBuf),
}

/// How and where to render. `scale` replicates each cell into a
/// `scale × scale` pixel block in the Netpbm formats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderSpec {
    pub format: Format,
    pub alignment: Alignment,
    scale: usize,
    pub destination: Destination,
}

impl RenderSpec {
    pub fn new(format: Format) -> Self {
        RenderSpec {
            format,
            alignment: Alignment::Left,
            scale: 1,
            destination: Destination::Stdout,
        }
    }

    pub fn centered(mut self) -> Self {
        self.alignment = Alignment::Centered;
        self
    }

    pub fn with_alignment(mut self, alignment: Alignment) -> Self {
        self.alignment = alignment;
        self
    }

    pub fn with_scale(mut self, scale: usize) -> Result<Self> {
        if scale == 0 {
            return Err(Error::InvalidArgument("scale must be at least 1".into()));
        }
        self.scale = scale;
        Ok(self)
    }

    pub fn with_destination(mut self, destination: Destination) -> Self {
        self.destination = destination;
        self
    }

    pub fn scale(&self) -> usize {
        self.scale
    }
}

/// Rows of equal width; `None` marks padding outside the triangle.
type Raster<T> = Vec<Vec<Option<T>>>;

/// Places rows of lengths `1, 2, …` (or any lengths up to the longest) on a
/// rectangular raster.
fn layout<T: Copy>(rows: &[Vec<T>], alignment: Alignment) -> Raster<T> {
    let longest = rows.iter().map(Vec::len).max().unwrap_or(0);
    let width = match alignment {
        Alignment::Left => longest,
        Alignment::Centered => (2 * longest).saturating_sub(1),
    };
    rows.iter()
        .map(|row| {
            let mut line = vec![None; width];
            for (i, &value) in row.iter().enumerate() {
                let col = match alignment {
                    Alignment::Left => i,
                    Alignment::Centered => (longest - row.len()) + 2 * i,
                };
                line[col] = Some(value);
            }
            line
        })
        .collect()
}

fn raster_dims<T>(raster: &Raster<T>) -> (usize, usize) {
    (raster.first().map_or(0, Vec::len), raster.len())
}

/// Replicates every pixel of every row `scale` times in both directions.
fn scaled<T: Copy>(raster: &Raster<T>, scale: usize) -> Raster<T> {
    if scale == 1 {
        return raster.clone();
    }
    raster
        .iter()
        .flat_map(|row| {
            let wide: Vec<Option<T>> = row
                .iter()
                .flat_map(|&px| std::iter::repeat_n(px, scale))
                .collect();
            std::iter::repeat_n(wide, scale)
        })
        .collect()
}

fn plain_netpbm(magic: &str, maxval: Option<u32>, pixels: &[Vec<String>]) -> Vec<u8> {
    let width = pixels.first().map_or(0, Vec::len);
    let mut out = format!("{magic}\n{width} {}\n", pixels.len());
    if let Some(maxval) = maxval {
        out.push_str(&format!("{maxval}\n"));
    }
    for row in pixels {
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out.into_bytes()
}

fn raw_pbm(bits: &[Vec<bool>]) -> Vec<u8> {
    let width = bits.first().map_or(0, Vec::len);
    let mut out = format!("P4\n{width} {}\n", bits.len()).into_bytes();
    for row in bits {
        for chunk in row.chunks(8) {
            let byte = chunk
                .iter()
                .enumerate()
                .fold(0u8, |acc, (k, &b)| acc | (u8::from(b) << (7 - k)));
            out.push(byte);
        }
    }
    out
}

fn ascii_lines(cells: &[Vec<String>]) -> Vec<u8> {
    let mut out = String::new();
    for row in cells {
        out.push_str(row.concat().trim_end());
        out.push('\n');
    }
    out.into_bytes()
}

/// Black/white encoding shared by masks and stripe overlays.
fn render_bool_raster(
    raster: &Raster<bool>,
    spec: &RenderSpec,
    json_header: serde_json::Value,
) -> Result<Vec<u8>> {
    let map = |f: &dyn Fn(Option<bool>) -> String| -> Vec<Vec<String>> {
        scaled(raster, spec.scale)
            .iter()
            .map(|row| row.iter().map(|&c| f(c)).collect())
            .collect()
    };
    let black = |c: Option<bool>| c == Some(true);
    Ok(match spec.format {
        Format::Pbm => plain_netpbm("P1", None, &map(&|c| u8::from(black(c)).to_string())),
        Format::PbmRaw => {
            let bits: Vec<Vec<bool>> = scaled(raster, spec.scale)
                .iter()
                .map(|row| row.iter().map(|&c| black(c)).collect())
                .collect();
            raw_pbm(&bits)
        }
        Format::Pgm => plain_netpbm(
            "P2",
            Some(255),
            &map(&|c| if black(c) { "0" } else { "255" }.into()),
        ),
        Format::Ppm => plain_netpbm(
            "P3",
            Some(255),
            &map(&|c| if black(c) { "0 0 0" } else { "255 255 255" }.into()),
        ),
        Format::Ascii => ascii_lines(
            &raster
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|c| match c {
                            Some(true) => "#".to_string(),
                            Some(false) => ".".to_string(),
                            None => " ".to_string(),
                        })
                        .collect()
                })
                .collect::<Vec<_>>(),
        ),
        Format::Json => {
            let (width, height) = raster_dims(raster);
            let mut doc = json_header;
            doc["alignment"] = json!(spec.alignment.to_string());
            doc["width"] = json!(width);
            doc["height"] = json!(height);
            doc["cells"] = json!(raster);
            let mut bytes = serde_json::to_vec(&doc).expect("json values serialize");
            bytes.push(b'\n');
            bytes
        }
    })
}

fn grid_rows(grid: &CellGrid) -> Vec<Vec<bool>> {
    (0..grid.rows()).map(|n| grid.row(n).to_vec()).collect()
}

/// Black for nonzero entries, white for divisible entries and padding.
pub fn render_mask(mask: &DivisibilityMask, spec: &RenderSpec) -> Result<Vec<u8>> {
    let raster = layout(&grid_rows(&mask.grid), spec.alignment);
    render_bool_raster(
        &raster,
        spec,
        json!({ "modulus": mask.modulus, "rows": mask.rows() }),
    )
}

/// Gray level for residue `r` modulo `m`: `⌊255·(m - r)/m⌋`, so zero is white.
pub fn gray_level(residue: u64, modulus: u64) -> u8 {
    let level = 255 * u128::from(modulus - residue) / u128::from(modulus);
    level as u8
}

/// Renders residue rows. Graymaps use [`gray_level`]; ASCII prints residues
/// with `.` for zero; bitmaps reduce to the nonzero mask.
pub fn render_residues(rows: &[TriangleRow], spec: &RenderSpec) -> Result<Vec<u8>> {
    let Some(first) = rows.first() else {
        return Err(Error::InvalidArgument("no rows to render".into()));
    };
    let modulus = first.modulus();
    if rows.iter().any(|r| r.modulus() != modulus) {
        return Err(Error::InvalidArgument("rows have different moduli".into()));
    }
    let values: Vec<Vec<u64>> = rows.iter().map(TriangleRow::to_vec).collect();
    let raster = layout(&values, spec.alignment);
    let gray = |c: Option<u64>| c.map_or(255, |r| gray_level(r, modulus));
    let map = |f: &dyn Fn(Option<u64>) -> String| -> Vec<Vec<String>> {
        scaled(&raster, spec.scale)
            .iter()
            .map(|row| row.iter().map(|&c| f(c)).collect())
            .collect()
    };
    Ok(match spec.format {
        Format::Pgm => plain_netpbm("P2", Some(255), &map(&|c| gray(c).to_string())),
        Format::Ppm => plain_netpbm(
            "P3",
            Some(255),
            &map(&|c| {
                let g = gray(c);
                format!("{g} {g} {g}")
            }),
        ),
        Format::Pbm | Format::PbmRaw => {
            let bits: Vec<Vec<Option<bool>>> = raster
                .iter()
                .map(|row| row.iter().map(|c| c.map(|r| r != 0)).collect())
                .collect();
            render_bool_raster(&bits, spec, json!({}))?
        }
        Format::Ascii => {
            let width = (modulus - 1).to_string().len();
            ascii_lines(
                &raster
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|c| match c {
                                Some(0) => format!("{:>width$}", "."),
                                Some(r) => format!("{r:>width$}"),
                                None => " ".repeat(width),
                            })
                            .collect()
                    })
                    .collect::<Vec<_>>(),
            )
        }
        Format::Json => {
            let mut bytes = serde_json::to_vec(&json!({ "modulus": modulus, "rows": values }))
                .expect("json values serialize");
            bytes.push(b'\n');
            bytes
        }
    })
}

/// One family of stripes eliminating cells that cannot be special at a
/// binary place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StripeLayer {
    /// Horizontal stripes: rows whose bit at the place is 0.
    Rows,
    /// NW-to-SE stripes: `i` has bit 1 at the place.
    IDiagonals,
    /// NE-to-SW stripes: `j = n - i` has bit 1 at the place.
    JDiagonals,
    /// All three families at once; survivors are the special cells.
    Intersection,
}

impl StripeLayer {
    pub const ALL: [StripeLayer; 4] = [
        StripeLayer::Rows,
        StripeLayer::IDiagonals,
        StripeLayer::JDiagonals,
        StripeLayer::Intersection,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StripeLayer::Rows => "row",
            StripeLayer::IDiagonals => "i",
            StripeLayer::JDiagonals => "j",
            StripeLayer::Intersection => "intersection",
        }
    }

    /// Whether this layer shades cell `(n, i)` at `place`.
    fn shades(self, n: u64, i: u64, place: usize) -> bool {
        let bit = |x: u64| digit_at(x, 2, place).expect("base 2 is valid");
        match self {
            StripeLayer::Rows => bit(n) == 0,
            StripeLayer::IDiagonals => bit(i) == 1,
            StripeLayer::JDiagonals => bit(n - i) == 1,
            StripeLayer::Intersection => [
                StripeLayer::Rows,
                StripeLayer::IDiagonals,
                StripeLayer::JDiagonals,
            ]
            .iter()
            .any(|l| l.shades(n, i, place)),
        }
    }
}

impl FromStr for StripeLayer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StripeLayer::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown stripe layer {s:?}")))
    }
}

/// Cells left unshaded by every selected layer. An empty selection yields a
/// blank grid.
pub fn stripe_survivors(
    place: usize,
    rows: u64,
    layers: &BTreeSet<StripeLayer>,
) -> Result<CellGrid> {
    if place == 0 {
        return Err(Error::PlaceZero);
    }
    if rows < 1 {
        return Err(Error::InvalidRowCount { min: 1, got: rows });
    }
    Ok(CellGrid::from_fn(rows, |n, i| {
        !layers.is_empty() && layers.iter().all(|l| !l.shades(n, i, place))
    }))
}

/// Stripe overlay for one binary place: surviving cells black, shaded cells
/// white.
pub fn render_stripes(
    place: usize,
    rows: u64,
    layers: &BTreeSet<StripeLayer>,
    spec: &RenderSpec,
) -> Result<Vec<u8>> {
    let grid = stripe_survivors(place, rows, layers)?;
    let raster = layout(&grid_rows(&grid), spec.alignment);
    let names: Vec<&str> = layers.iter().map(|l| l.name()).collect();
    render_bool_raster(
        &raster,
        spec,
        json!({ "place": place, "rows": rows, "layers": names }),
    )
}

/// Cells special at some place `1..=⌈log₂ rows⌉`: the union of the stripe
/// intersections, which must be exactly the even entries.
pub fn special_union(rows: u64) -> Result<CellGrid> {
    let max_place = (u64::BITS - rows.saturating_sub(1).leading_zeros()).max(1) as usize;
    let only = BTreeSet::from([StripeLayer::Intersection]);
    let mut union = stripe_survivors(1, rows, &only)?;
    for place in 2..=max_place {
        union = union.union(&stripe_survivors(place, rows, &only)?);
    }
    Ok(union)
}

/// Writes rendered bytes to the spec's destination.
pub fn emit(bytes: &[u8], destination: &Destination, stdout: &mut dyn Write) -> Result<()> {
    match destination {
        Destination::Stdout => stdout.write_all(bytes).map_err(|source| Error::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
        Destination::File(path) => std::fs::write(path, bytes).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        }),
    }
}
