//! Dense binary rasters over a metric workspace.
//!
//! Row `j` holds cells whose centers sit at `origin.1 + j * resolution`, so
//! rows grow with world `y`. Column `i` likewise maps to
//! `origin.0 + i * resolution`.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer cell coordinate `(column, row)`.
pub type Cell = (isize, isize);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryGrid {
    width: usize,
    height: usize,
    resolution: f64,
    /// World coordinate of the center of cell `(0, 0)`.
    origin: (f64, f64),
    cells: Vec<bool>,
}

impl BinaryGrid {
    /// All-background grid.
    pub fn new(width: usize, height: usize, resolution: f64, origin: (f64, f64)) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidGrid(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if !(resolution > 0.0 && resolution.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "resolution must be positive, got {resolution}"
            )));
        }
        Ok(Self {
            width,
            height,
            resolution,
            origin,
            cells: vec![false; width * height],
        })
    }

    /// Builds a grid from a predicate over `(column, row)`.
    pub fn from_fn(
        width: usize,
        height: usize,
        resolution: f64,
        origin: (f64, f64),
        mut f: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self> {
        let mut grid = Self::new(width, height, resolution, origin)?;
        for j in 0..height {
            for i in 0..width {
                grid.cells[j * width + i] = f(i, j);
            }
        }
        Ok(grid)
    }

    pub(crate) fn with_cells(&self, cells: Vec<bool>) -> Self {
        debug_assert_eq!(cells.len(), self.cells.len());
        Self {
            cells,
            ..self.clone_geometry()
        }
    }

    fn clone_geometry(&self) -> Self {
        Self {
            width: self.width,
            height: self.height,
            resolution: self.resolution,
            origin: self.origin,
            cells: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn origin(&self) -> (f64, f64) {
        self.origin
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn same_geometry(&self, other: &Self) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.resolution == other.resolution
            && self.origin == other.origin
    }

    pub fn in_bounds(&self, (i, j): Cell) -> bool {
        i >= 0 && j >= 0 && (i as usize) < self.width && (j as usize) < self.height
    }

    /// Cell value; out-of-grid cells read as background.
    pub fn get(&self, c: Cell) -> bool {
        self.in_bounds(c) && self.cells[c.1 as usize * self.width + c.0 as usize]
    }

    /// Sets an in-bounds cell. Out-of-grid writes are ignored.
    pub fn set(&mut self, c: Cell, value: bool) {
        if self.in_bounds(c) {
            self.cells[c.1 as usize * self.width + c.0 as usize] = value;
        }
    }

    pub fn row(&self, j: usize) -> &[bool] {
        &self.cells[j * self.width..(j + 1) * self.width]
    }

    /// World coordinate of a cell center.
    pub fn world(&self, (i, j): Cell) -> (f64, f64) {
        (
            self.origin.0 + i as f64 * self.resolution,
            self.origin.1 + j as f64 * self.resolution,
        )
    }

    /// Cell whose square contains the world point. May be out of bounds.
    pub fn cell(&self, (x, y): (f64, f64)) -> Cell {
        (
            ((x - self.origin.0) / self.resolution).round() as isize,
            ((y - self.origin.1) / self.resolution).round() as isize,
        )
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    /// Foreground area in square meters.
    pub fn area(&self) -> f64 {
        self.count() as f64 * self.resolution * self.resolution
    }

    pub fn complement(&self) -> Self {
        self.with_cells(self.cells.iter().map(|c| !c).collect())
    }

    /// True when every foreground cell of `self` is foreground in `other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.cells.iter().zip(&other.cells).all(|(&a, &b)| !a || b)
    }

    /// Lowest foreground row of column `i`, if any.
    pub fn lowest_in_column(&self, i: usize) -> Option<usize> {
        (0..self.height).find(|&j| self.cells[j * self.width + i])
    }

    /// Writes a binary PGM (P5). Image rows run top-down, so the top image row
    /// is the highest grid row. Foreground is 255.
    pub fn write_pgm<W: Write>(&self, mut out: W) -> Result<()> {
        write!(out, "P5\n{} {}\n255\n", self.width, self.height)?;
        let mut buf = Vec::with_capacity(self.width * self.height);
        for j in (0..self.height).rev() {
            buf.extend(self.row(j).iter().map(|&c| if c { 255u8 } else { 0 }));
        }
        out.write_all(&buf)?;
        Ok(())
    }

    /// Reads a binary PGM written by [`BinaryGrid::write_pgm`]. Any nonzero
    /// pixel is foreground. The metric frame is not stored in PGM and must be
    /// supplied.
    pub fn read_pgm<R: Read>(mut input: R, resolution: f64, origin: (f64, f64)) -> Result<Self> {
        let mut bytes = Vec::new();
        input.read_to_end(&mut bytes)?;
        let mut pos = 0;
        let mut header = [0usize; 3];
        let magic = next_token(&bytes, &mut pos)?;
        if magic != b"P5" {
            return Err(Error::Parse("not a P5 PGM".into()));
        }
        for slot in header.iter_mut() {
            let tok = next_token(&bytes, &mut pos)?;
            *slot = std::str::from_utf8(tok)
                .ok()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse("bad PGM header".into()))?;
        }
        let [width, height, maxval] = header;
        if maxval == 0 || maxval > 255 {
            return Err(Error::Parse(format!("unsupported PGM maxval {maxval}")));
        }
        // exactly one whitespace byte separates the header from the raster
        pos += 1;
        let data = bytes
            .get(pos..pos + width * height)
            .ok_or_else(|| Error::Parse("truncated PGM raster".into()))?;
        Self::from_fn(width, height, resolution, origin, |i, j| {
            data[(height - 1 - j) * width + i] != 0
        })
    }
}

fn next_token<'a>(bytes: &'a [u8], pos: &mut usize) -> Result<&'a [u8]> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::Parse("unexpected end of PGM header".into()));
    }
    Ok(&bytes[start..*pos])
}
