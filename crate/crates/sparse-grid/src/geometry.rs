//! Closed forms for column positions and corner sites.
//!
//! In the simulated diagram column `i` is bounded by lines at `X_i = i(i+2)`
//! and `X_{i+1}`, so it has `2i+2` interior cells and consecutive corners on a
//! line are `2i+3` rows apart. The published frame counts neither the line
//! cells nor the corner rows, so a simulated corner sits at the published
//! site shifted by `(line index, -j)`.

use ca_core::Site;

/// Cell of the line left of column `i`.
pub fn line_x(i: usize) -> i64 {
    (i * (i + 2)) as i64
}

/// Distance between the two lines of column `i`.
pub fn width(i: usize) -> i64 {
    2 * i as i64 + 3
}

/// Number of squares in column `i`.
pub fn squares(i: usize) -> usize {
    2 * (i + 1)
}

/// Rows from the creation of column `i` to its top corners.
pub fn lifetime(i: usize) -> i64 {
    squares(i) as i64 * width(i)
}

/// Top-left and top-right corners of square `(i, j)` in the published frame:
/// top corners of the first column at time 0, earlier rows negative.
pub fn corner_sites(i: usize, j: usize) -> (Site, Site) {
    let (i, j) = (i as i64, j as i64);
    let t = -2 * (i + 1) * j;
    (Site::new(i * (i + 1), t), Site::new((i + 1) * (i + 2), t))
}

/// Row layout of the diagram grown from `canonical_seed(columns)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub columns: usize,
}

impl Layout {
    /// Row of the common top corners; row 0 is the seed.
    pub fn top_row(&self) -> i64 {
        lifetime(self.columns - 1) - 1
    }

    /// Row at which column `i`'s lines carry their start marks.
    pub fn creation_row(&self, i: usize) -> i64 {
        self.top_row() - lifetime(i)
    }

    /// Corners of square `(i, j)` as they occur in the diagram.
    pub fn corner_sites(&self, i: usize, j: usize) -> (Site, Site) {
        let t = self.top_row() - j as i64 * width(i);
        (Site::new(line_x(i), t), Site::new(line_x(i + 1), t))
    }

    /// Maps a published site on line `line` back to the diagram.
    pub fn from_published(&self, line: usize, site: Site, j: usize) -> Site {
        Site::new(site.cell + line as i64, self.top_row() + site.time - j as i64)
    }
}
