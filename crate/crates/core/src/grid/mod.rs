//! Grid diagrams: representation, validation, text format and moves.
//!
//! Rows are indexed bottom to top and columns left to right. Markings sit at
//! cell centers `(c + 1/2, r + 1/2)`; grid states place their points on the
//! integer lattice. `sigma_o[r]` is the column of the O-marking in row `r`,
//! likewise `sigma_x[r]` for the X-marking.

mod rectangle;
mod state;

pub use rectangle::{empty_rectangles, rectangles, scan_rectangles, RectInfo, Rectangle};
pub use state::{
    bigrading, enumerate_states, factorial, rank_permutation, unrank_permutation, Grader, GridState, StateIter,
};

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Marking {
    O,
    X,
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Marking::O => f.write_str("O"),
            Marking::X => f.write_str("X"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GridError {
    #[error("line {line}: {inner}")]
    AtLine { line: usize, inner: Box<GridError> },
    #[error("{0}")]
    Syntax(String),
    #[error("{marking}: column {column} at field {field} is out of range for n = {n}")]
    ColumnOutOfRange { marking: Marking, field: usize, column: usize, n: usize },
    #[error("{marking}: column {column} at field {field} repeats an earlier column (not a permutation)")]
    NotPermutation { marking: Marking, field: usize, column: usize },
    #[error("O has {o} entries but X has {x}")]
    LengthMismatch { o: usize, x: usize },
    #[error("marking collision in row {row}")]
    Collision { row: usize },
    #[error("grid size {n} is too small (need n >= 2)")]
    TooSmall { n: usize },
    #[error("diagram has {components} components; only knots are supported")]
    NotAKnot { components: usize },
    #[error("row {row} out of range for a {n}x{n} grid")]
    RowOutOfRange { row: usize, n: usize },
}

impl GridError {
    fn at_line(self, line: usize) -> Self {
        GridError::AtLine { line, inner: Box::new(self) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridDiagram {
    n: usize,
    sigma_o: Vec<usize>,
    sigma_x: Vec<usize>,
    name: Option<String>,
}

fn check_permutation(marking: Marking, cols: &[usize]) -> Result<(), GridError> {
    let n = cols.len();
    let mut seen = vec![false; n];
    for (i, &c) in cols.iter().enumerate() {
        if c >= n {
            return Err(GridError::ColumnOutOfRange { marking, field: i + 1, column: c, n });
        }
        if std::mem::replace(&mut seen[c], true) {
            return Err(GridError::NotPermutation { marking, field: i + 1, column: c });
        }
    }
    Ok(())
}

impl GridDiagram {
    /// Validates and builds a knot grid diagram.
    pub fn new(sigma_o: Vec<usize>, sigma_x: Vec<usize>) -> Result<Self, GridError> {
        if sigma_o.len() != sigma_x.len() {
            return Err(GridError::LengthMismatch { o: sigma_o.len(), x: sigma_x.len() });
        }
        let n = sigma_o.len();
        if n < 2 {
            return Err(GridError::TooSmall { n });
        }
        check_permutation(Marking::O, &sigma_o)?;
        check_permutation(Marking::X, &sigma_x)?;
        if let Some(row) = (0..n).find(|&r| sigma_o[r] == sigma_x[r]) {
            return Err(GridError::Collision { row });
        }
        let g = Self { n, sigma_o, sigma_x, name: None };
        let components = g.component_count();
        if components != 1 {
            return Err(GridError::NotAKnot { components });
        }
        Ok(g)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sigma_o(&self) -> &[usize] {
        &self.sigma_o
    }

    pub fn sigma_x(&self) -> &[usize] {
        &self.sigma_x
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Number of link components traced by the markings.
    pub fn component_count(&self) -> usize {
        // Row r -> (column of its O) -> row of the X in that column.
        let mut x_row_of_col = vec![0; self.n];
        for (r, &c) in self.sigma_x.iter().enumerate() {
            x_row_of_col[c] = r;
        }
        let mut seen = vec![false; self.n];
        let mut cycles = 0;
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut r = start;
            while !seen[r] {
                seen[r] = true;
                r = x_row_of_col[self.sigma_o[r]];
            }
        }
        cycles
    }

    /// Horizontal reflection `c -> n-1-c`; represents the mirror knot.
    pub fn reflect_horizontal(&self) -> GridDiagram {
        let flip = |v: &[usize]| v.iter().map(|&c| self.n - 1 - c).collect();
        GridDiagram {
            n: self.n,
            sigma_o: flip(&self.sigma_o),
            sigma_x: flip(&self.sigma_x),
            name: self.name.as_ref().map(|s| match s.strip_prefix("m(").and_then(|s| s.strip_suffix(')')) {
                Some(inner) => inner.to_string(),
                None => format!("m({s})"),
            }),
        }
    }

    /// Stabilizes at the X-marking of `row`.
    ///
    /// The X cell is split into a 2x2 block holding X markings at its SW and
    /// NE corners and a new O at its NW corner; the SE corner stays empty.
    pub fn stabilize(&self, row: usize) -> Result<GridDiagram, GridError> {
        let n = self.n;
        if row >= n {
            return Err(GridError::RowOutOfRange { row, n });
        }
        let c = self.sigma_x[row];
        let shift = |col: usize| if col > c { col + 1 } else { col };
        let mut sigma_o = Vec::with_capacity(n + 1);
        let mut sigma_x = Vec::with_capacity(n + 1);
        for r in 0..n {
            let o = self.sigma_o[r];
            // The O that shared column c moves to the right half of the split.
            sigma_o.push(if o == c { c + 1 } else { shift(o) });
            sigma_x.push(shift(self.sigma_x[r]));
            if r == row {
                sigma_o.push(c);
                sigma_x.push(c + 1);
            }
        }
        let mut g = GridDiagram::new(sigma_o, sigma_x)?;
        g.name = self.name.clone();
        Ok(g)
    }

    /// Serializes to the two-line text format.
    pub fn to_text(&self) -> String {
        let join = |v: &[usize]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
        let mut s = String::new();
        if let Some(name) = &self.name {
            s.push_str(&format!("# {name}\n"));
        }
        s.push_str(&format!("O: {}\nX: {}\n", join(&self.sigma_o), join(&self.sigma_x)));
        s
    }
}

impl fmt::Display for GridDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Top row first, as the grid would be drawn.
        for r in (0..self.n).rev() {
            for c in 0..self.n {
                let ch = if self.sigma_o[r] == c {
                    'O'
                } else if self.sigma_x[r] == c {
                    'X'
                } else {
                    '.'
                };
                write!(f, "{ch}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn parse_row(label: &str, line: &str, line_no: usize) -> Result<Vec<usize>, GridError> {
    let rest = line
        .strip_prefix(label)
        .and_then(|r| r.trim_start().strip_prefix(':'))
        .ok_or_else(|| GridError::Syntax(format!("expected `{label}: c0 c1 ...`, found `{line}`")).at_line(line_no))?;
    rest.split_whitespace()
        .enumerate()
        .map(|(i, tok)| {
            tok.parse::<usize>().map_err(|_| {
                GridError::Syntax(format!("{label}: field {} `{tok}` is not a column index", i + 1)).at_line(line_no)
            })
        })
        .collect()
}

/// Parses the text grid format: an `O:` line then an `X:` line of 0-indexed
/// columns; lines starting with `#` and blank lines are ignored.
pub fn parse_grid(text: &str) -> Result<GridDiagram, GridError> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (o_line, o_text) =
        lines.next().ok_or_else(|| GridError::Syntax("empty grid file (missing `O:` line)".into()))?;
    let sigma_o = parse_row("O", o_text, o_line)?;
    let (x_line, x_text) =
        lines.next().ok_or_else(|| GridError::Syntax("missing `X:` line".into()).at_line(o_line + 1))?;
    let sigma_x = parse_row("X", x_text, x_line)?;
    if let Some((extra, _)) = lines.next() {
        return Err(GridError::Syntax("unexpected content after `X:` line".into()).at_line(extra));
    }
    GridDiagram::new(sigma_o, sigma_x).map_err(|e| match e {
        GridError::ColumnOutOfRange { marking: Marking::O, .. }
        | GridError::NotPermutation { marking: Marking::O, .. } => e.at_line(o_line),
        GridError::ColumnOutOfRange { marking: Marking::X, .. }
        | GridError::NotPermutation { marking: Marking::X, .. }
        | GridError::LengthMismatch { .. } => e.at_line(x_line),
        other => other,
    })
}
