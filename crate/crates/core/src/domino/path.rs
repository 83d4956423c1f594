//! Paths of a domino graph as filled rectangles.
//!
//! A path of degree `(m1, m2)` is a grid with `m1 + n` columns and `m2 + 1`
//! rows in which every horizontal window of `n` consecutive cells sums to the
//! trace. Cell `(0, 0)` is the lower-left corner; the range vertex is the
//! leftmost window of row 0 and the source vertex is the rightmost window of
//! the top row.

use std::fmt;

use crate::domino::BasicData;
use crate::error::{Error, Result};
use crate::words::Word;

/// A rectangular array of residues, rows stored bottom to top.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grid {
    width: usize,
    height: usize,
    cells: Vec<u32>,
}

impl Grid {
    pub fn new(width: usize, height: usize, cells: Vec<u32>) -> Result<Self> {
        if cells.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "{} cells for a {width}x{height} grid",
                cells.len()
            )));
        }
        Ok(Self { width, height, cells })
    }

    /// Builds a grid from rows given bottom row first.
    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(width, rows.len(), rows.concat())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, col: usize, row: usize) -> u32 {
        self.cells[row * self.width + col]
    }

    pub fn row(&self, row: usize) -> &[u32] {
        &self.cells[row * self.width..(row + 1) * self.width]
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    /// Parses the plain-text fixture format: one row per line, top row
    /// first; single characters when `q <= 10`, comma-separated otherwise.
    pub fn parse(text: &str, q: u32) -> Result<Self> {
        let partial = parse_cells(text, q)?;
        let (width, height, cells) = partial;
        let cells = cells
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                c.ok_or_else(|| Error::Parse {
                    line: height - i / width,
                    message: "unexpected hole in a complete grid".into(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(width, height, cells)
    }

    pub fn to_text(&self, q: u32) -> String {
        let cells: Vec<Option<u32>> = self.cells.iter().copied().map(Some).collect();
        render_cells(self.width, self.height, &cells, q)
    }
}

/// Returns `(width, height, cells)` with rows reordered bottom to top.
fn parse_cells(text: &str, q: u32) -> Result<(usize, usize, Vec<Option<u32>>)> {
    let mut rows: Vec<Vec<Option<u32>>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse { line: i + 1, message };
        let tokens: Vec<String> = if q <= 10 && !line.contains(',') {
            line.chars().filter(|c| !c.is_whitespace()).map(String::from).collect()
        } else {
            line.split(',').map(|s| s.trim().to_string()).collect()
        };
        let row = tokens
            .iter()
            .map(|tok| match tok.as_str() {
                "." | "_" => Ok(None),
                s => {
                    let v: u32 = s.parse().map_err(|_| err(format!("bad cell {s:?}")))?;
                    if v >= q {
                        return Err(err(format!("cell {v} out of range for q = {q}")));
                    }
                    Ok(Some(v))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(err(format!("row has {} cells, expected {}", row.len(), first.len())));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse { line: 0, message: "empty grid".into() });
    }
    rows.reverse();
    let width = rows[0].len();
    let height = rows.len();
    Ok((width, height, rows.concat()))
}

fn render_cells(width: usize, height: usize, cells: &[Option<u32>], q: u32) -> String {
    let mut out = String::new();
    for row in (0..height).rev() {
        let tokens: Vec<String> = cells[row * width..(row + 1) * width]
            .iter()
            .map(|c| c.map_or_else(|| ".".to_string(), |v| v.to_string()))
            .collect();
        out.push_str(&tokens.join(if q <= 10 { "" } else { "," }));
        out.push('\n');
    }
    out
}

fn expect_dims(data: &BasicData, degree: (u32, u32), width: usize, height: usize) -> Result<()> {
    let (w, h) = (degree.0 as usize + data.n, degree.1 as usize + 1);
    if width != w || height != h {
        return Err(Error::DimensionMismatch(format!(
            "degree {degree:?} needs a {w}x{h} grid, got {width}x{height}"
        )));
    }
    Ok(())
}

/// The first window of `grid` whose sum differs from `target`.
fn first_bad_window(grid: &Grid, n: usize, q: u32, target: u32) -> Option<(usize, usize, u32)> {
    for row in 0..grid.height {
        let cells = grid.row(row);
        if cells.len() < n {
            continue;
        }
        let mut sum: u64 = cells[..n].iter().map(|&c| u64::from(c)).sum();
        for l in 0..=cells.len() - n {
            if l > 0 {
                sum = sum + u64::from(cells[l + n - 1]) - u64::from(cells[l - 1]);
            }
            let s = (sum % u64::from(q)) as u32;
            if s != target {
                return Some((l, row, s));
            }
        }
    }
    None
}

/// True iff every length-`n` window of every row sums to the trace.
pub fn validate_path(data: &BasicData, degree: (u32, u32), grid: &Grid) -> Result<bool> {
    expect_dims(data, degree, grid.width, grid.height)?;
    Ok(first_bad_window(grid, data.n, data.q, data.t).is_none())
}

/// True iff every horizontal length-`n` window inside `grid` sums to zero,
/// i.e. the grid is a finite patch of the trace-zero window shift.
pub fn validate_shift_window(grid: &Grid, n: usize, q: u32) -> Result<bool> {
    if n == 0 || grid.width < n {
        return Err(Error::DimensionMismatch(format!(
            "grid width {} is less than the window length {n}",
            grid.width
        )));
    }
    Ok(first_bad_window(grid, n, q, 0).is_none())
}

/// A path of a domino graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathRect {
    data: BasicData,
    degree: (u32, u32),
    grid: Grid,
}

impl PathRect {
    pub fn new(data: BasicData, degree: (u32, u32), grid: Grid) -> Result<Self> {
        expect_dims(&data, degree, grid.width, grid.height)?;
        if grid.cells.iter().any(|&c| c >= data.q) {
            return Err(Error::InvalidParameters(format!("cell value out of range for q = {}", data.q)));
        }
        if let Some((column, row, sum)) = first_bad_window(&grid, data.n, data.q, data.t) {
            return Err(Error::Inconsistent {
                column,
                row,
                sum,
                expected: data.t,
            });
        }
        Ok(Self { data, degree, grid })
    }

    /// The identity morphism at `v`: degree `(0, 0)`, a single vertex row.
    pub fn identity(data: BasicData, v: &Word) -> Result<Self> {
        data.check_vertex(v)?;
        Self::new(data, (0, 0), Grid::new(data.n, 1, v.symbols().to_vec())?)
    }

    /// The unique path of degree `(m1, rows.len() - 1)` whose row `j`
    /// starts with the vertex `rows[j]`.
    pub fn from_row_vertices(data: BasicData, m1: u32, rows: &[Word]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::DimensionMismatch("a path needs at least one row".into()));
        }
        let width = m1 as usize + data.n;
        let mut partial = PartialRect::empty(data, (m1, rows.len() as u32 - 1));
        for (j, v) in rows.iter().enumerate() {
            data.check_vertex(v)?;
            for (i, &s) in v.symbols().iter().enumerate() {
                partial.cells[j * width + i] = Some(s);
            }
        }
        complete_path(&partial)
    }

    pub fn data(&self) -> BasicData {
        self.data
    }

    pub fn degree(&self) -> (u32, u32) {
        self.degree
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Leftmost window of the bottom row.
    pub fn range(&self) -> Word {
        Word::from_raw(self.grid.row(0)[..self.data.n].to_vec(), self.data.q)
    }

    /// Rightmost window of the top row.
    pub fn source(&self) -> Word {
        let m1 = self.degree.0 as usize;
        let top = self.grid.row(self.degree.1 as usize);
        Word::from_raw(top[m1..m1 + self.data.n].to_vec(), self.data.q)
    }

    /// The window anchored at `l = (l1, l2)`.
    pub fn vertex_at(&self, l: (u32, u32)) -> Word {
        let row = self.grid.row(l.1 as usize);
        Word::from_raw(row[l.0 as usize..l.0 as usize + self.data.n].to_vec(), self.data.q)
    }

    /// The sub-path covering `T(degree) + offset`, shifted back to the origin.
    pub fn restrict(&self, offset: (u32, u32), degree: (u32, u32)) -> Result<PathRect> {
        if offset.0 + degree.0 > self.degree.0 || offset.1 + degree.1 > self.degree.1 {
            return Err(Error::DegreeOutOfRange(offset.0 + degree.0, offset.1 + degree.1));
        }
        let width = degree.0 as usize + self.data.n;
        let mut cells = Vec::with_capacity(width * (degree.1 as usize + 1));
        for j in 0..=degree.1 as usize {
            let row = self.grid.row(offset.1 as usize + j);
            cells.extend_from_slice(&row[offset.0 as usize..offset.0 as usize + width]);
        }
        Ok(PathRect {
            data: self.data,
            degree,
            grid: Grid::new(width, degree.1 as usize + 1, cells)?,
        })
    }

    pub fn to_text(&self) -> String {
        self.grid.to_text(self.data.q)
    }
}

impl fmt::Display for PathRect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// A rectangle of the right shape for `degree` whose cells may be holes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialRect {
    data: BasicData,
    degree: (u32, u32),
    cells: Vec<Option<u32>>,
}

impl PartialRect {
    pub fn empty(data: BasicData, degree: (u32, u32)) -> Self {
        let size = (degree.0 as usize + data.n) * (degree.1 as usize + 1);
        Self {
            data,
            degree,
            cells: vec![None; size],
        }
    }

    pub fn width(&self) -> usize {
        self.degree.0 as usize + self.data.n
    }

    pub fn height(&self) -> usize {
        self.degree.1 as usize + 1
    }

    pub fn get(&self, col: usize, row: usize) -> Option<u32> {
        self.cells[row * self.width() + col]
    }

    pub fn set(&mut self, col: usize, row: usize, value: Option<u32>) {
        let w = self.width();
        self.cells[row * w + col] = value;
    }

    pub fn holes(&self) -> usize {
        self.cells.iter().filter(|c| c.is_none()).count()
    }

    /// Copies `path` into the rectangle with its lower-left cell at `offset`,
    /// failing if an already filled cell disagrees.
    pub fn place(&mut self, path: &PathRect, offset: (usize, usize)) -> Result<()> {
        let g = path.grid();
        if offset.0 + g.width > self.width() || offset.1 + g.height > self.height() {
            return Err(Error::DimensionMismatch("placed path does not fit".into()));
        }
        for row in 0..g.height {
            for col in 0..g.width {
                let (c, r) = (offset.0 + col, offset.1 + row);
                let v = g.get(col, row);
                match self.get(c, r) {
                    Some(existing) if existing != v => {
                        return Err(Error::NotComposable(format!(
                            "cell ({c}, {r}) is {existing} in one path and {v} in the other"
                        )))
                    }
                    _ => self.set(c, r, Some(v)),
                }
            }
        }
        Ok(())
    }

    /// Parses the fixture format with `.` marking holes.
    pub fn parse(data: BasicData, text: &str) -> Result<Self> {
        let (width, height, cells) = parse_cells(text, data.q)?;
        if width < data.n {
            return Err(Error::DimensionMismatch(format!("width {width} < n = {}", data.n)));
        }
        let degree = ((width - data.n) as u32, (height - 1) as u32);
        Ok(Self { data, degree, cells })
    }

    pub fn to_text(&self) -> String {
        render_cells(self.width(), self.height(), &self.cells, self.data.q)
    }
}

/// Fills every hole of `partial` by repeatedly choosing a window with exactly
/// one hole and setting that cell so the window sums to the trace.
///
/// The completion is unique when it exists. Fails with `Inconsistent` if a
/// fully filled window has the wrong sum and with `Stuck` if holes remain
/// but every window touching them has two or more.
pub fn complete_path(partial: &PartialRect) -> Result<PathRect> {
    let data = partial.data;
    let (n, q, t) = (data.n, data.q, data.t);
    let width = partial.width();
    let height = partial.height();
    let windows_per_row = partial.degree.0 as usize + 1;
    let mut cells = partial.cells.clone();

    let window_sum = |cells: &[Option<u32>], l: usize, row: usize| -> u64 {
        cells[row * width + l..row * width + l + n]
            .iter()
            .map(|c| u64::from(c.unwrap_or(0)))
            .sum()
    };
    let check_full = |cells: &[Option<u32>], l: usize, row: usize| -> Result<()> {
        let sum = (window_sum(cells, l, row) % u64::from(q)) as u32;
        if sum != t {
            return Err(Error::Inconsistent {
                column: l,
                row,
                sum,
                expected: t,
            });
        }
        Ok(())
    };

    let mut holes = vec![0usize; windows_per_row * height];
    let mut queue = Vec::new();
    for row in 0..height {
        for l in 0..windows_per_row {
            let k = cells[row * width + l..row * width + l + n].iter().filter(|c| c.is_none()).count();
            holes[row * windows_per_row + l] = k;
            match k {
                0 => check_full(&cells, l, row)?,
                1 => queue.push((l, row)),
                _ => {}
            }
        }
    }

    while let Some((l, row)) = queue.pop() {
        if holes[row * windows_per_row + l] != 1 {
            continue;
        }
        let col = (l..l + n)
            .find(|&c| cells[row * width + c].is_none())
            .expect("window has one hole");
        let others = (window_sum(&cells, l, row) % u64::from(q)) as u32;
        cells[row * width + col] = Some((t + q - others) % q);
        let first = col.saturating_sub(n - 1);
        let last = col.min(windows_per_row - 1);
        for w in first..=last {
            let slot = &mut holes[row * windows_per_row + w];
            *slot -= 1;
            match *slot {
                0 => check_full(&cells, w, row)?,
                1 => queue.push((w, row)),
                _ => {}
            }
        }
    }

    let remaining = cells.iter().filter(|c| c.is_none()).count();
    if remaining > 0 {
        return Err(Error::Stuck { holes: remaining });
    }
    let grid = Grid::new(width, height, cells.into_iter().map(|c| c.unwrap_or(0)).collect())?;
    Ok(PathRect {
        data,
        degree: partial.degree,
        grid,
    })
}

/// The unique path `mu nu` of degree `d(mu) + d(nu)` restricting to `mu` on
/// `T(d(mu))` and to `nu` on `T(d(nu)) + d(mu)`.
pub fn compose(mu: &PathRect, nu: &PathRect) -> Result<PathRect> {
    if mu.data != nu.data {
        return Err(Error::NotComposable(format!("basic data {} vs {}", mu.data, nu.data)));
    }
    if mu.source() != nu.range() {
        return Err(Error::NotComposable(format!(
            "s(mu) = {} but r(nu) = {}",
            mu.source(),
            nu.range()
        )));
    }
    let degree = (mu.degree.0 + nu.degree.0, mu.degree.1 + nu.degree.1);
    let mut partial = PartialRect::empty(mu.data, degree);
    partial.place(mu, (0, 0))?;
    partial.place(nu, (mu.degree.0 as usize, mu.degree.1 as usize))?;
    complete_path(&partial)
}

/// Splits `lambda` as `mu nu` with `d(mu) = m`.
pub fn factorize(lambda: &PathRect, m: (u32, u32)) -> Result<(PathRect, PathRect)> {
    let d = lambda.degree;
    if m.0 > d.0 || m.1 > d.1 {
        return Err(Error::DegreeOutOfRange(m.0, m.1));
    }
    let mu = lambda.restrict((0, 0), m)?;
    let nu = lambda.restrict(m, (d.0 - m.0, d.1 - m.1))?;
    Ok((mu, nu))
}
