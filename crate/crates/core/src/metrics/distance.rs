//! Exact per-cell distance to the nearest sample of another cell.
//!
//! One two-pass Euclidean distance transform runs per distinct label, with
//! every sample of a different label as a seed. The first pass finds the
//! nearest seed row in each column (an integer offset); the second takes the
//! lower envelope of the resulting parabolas along each row.

use rayon::prelude::*;

use crate::cells::LabelGrid;

/// `d(x)` for every sample `x`: distance in meters to the nearest sample with
/// a different label, `None` when no such sample exists.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceField {
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<Option<f64>>,
}

impl DistanceField {
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.values[j * self.nx + i]
    }
}

/// Squared distance of a sample offset. Every comparison goes through this
/// one expression so ties resolve identically everywhere.
#[inline]
fn dist2(di: i64, dj: i64, px: f64, py: f64) -> f64 {
    let x = di as f64 * px;
    let y = dj as f64 * py;
    x * x + y * y
}

pub fn min_intercell_distance_field(grid: &LabelGrid) -> DistanceField {
    let (palette, ids) = grid.intern();
    let mut values = vec![None; ids.len()];
    if palette.len() > 1 {
        let per_label: Vec<Vec<(usize, f64)>> = (0..palette.len() as u32)
            .into_par_iter()
            .map(|label| label_pass(grid, &ids, label))
            .collect();
        for (s, d) in per_label.into_iter().flatten() {
            values[s] = Some(d);
        }
    }
    DistanceField { nx: grid.nx, ny: grid.ny, values }
}

fn label_pass(grid: &LabelGrid, ids: &[u32], label: u32) -> Vec<(usize, f64)> {
    let (nx, ny) = (grid.nx, grid.ny);
    let (px, py) = (grid.pitch_x, grid.pitch_y);

    // Row offset to the nearest seed in the same column.
    let mut nearest_row: Vec<Option<i64>> = vec![None; nx * ny];
    for i in 0..nx {
        let mut last: Option<usize> = None;
        for j in 0..ny {
            if ids[j * nx + i] != label {
                last = Some(j);
            }
            nearest_row[j * nx + i] = last.map(|r| (j - r) as i64);
        }
        let mut next: Option<usize> = None;
        for j in (0..ny).rev() {
            if ids[j * nx + i] != label {
                next = Some(j);
            }
            if let Some(r) = next {
                let down = (r - j) as i64;
                let cell = &mut nearest_row[j * nx + i];
                if cell.map_or(true, |up| down < up) {
                    *cell = Some(down);
                }
            }
        }
    }

    let mut out = Vec::new();
    let mut hull: Vec<usize> = Vec::with_capacity(nx);
    let mut bounds: Vec<f64> = Vec::with_capacity(nx + 1);
    for j in 0..ny {
        let row = &ids[j * nx..(j + 1) * nx];
        if !row.contains(&label) {
            continue;
        }
        let dj = &nearest_row[j * nx..(j + 1) * nx];
        let height = |q: usize| dist2(0, dj[q].unwrap(), px, py);
        let value = |q: usize, i: usize| dist2(i as i64 - q as i64, dj[q].unwrap(), px, py);
        let meet = |q: usize, r: usize| {
            let a = px * px;
            ((height(r) + a * (r * r) as f64) - (height(q) + a * (q * q) as f64)) / (2.0 * a * (r - q) as f64)
        };

        hull.clear();
        bounds.clear();
        for q in (0..nx).filter(|&q| dj[q].is_some()) {
            loop {
                match hull.last() {
                    None => {
                        hull.push(q);
                        bounds.push(f64::NEG_INFINITY);
                        break;
                    }
                    Some(&top) => {
                        let s = meet(top, q);
                        if s <= *bounds.last().unwrap() {
                            hull.pop();
                            bounds.pop();
                        } else {
                            hull.push(q);
                            bounds.push(s);
                            break;
                        }
                    }
                }
            }
        }
        if hull.is_empty() {
            // No seed anywhere: the label covers the whole grid.
            return Vec::new();
        }

        let mut k = 0;
        for i in 0..nx {
            if row[i] != label {
                continue;
            }
            while k + 1 < hull.len() && bounds[k + 1] < i as f64 {
                k += 1;
            }
            // Neighbouring envelope entries absorb rounding in the breakpoints.
            let lo = k.saturating_sub(1);
            let hi = (k + 1).min(hull.len() - 1);
            let best = (lo..=hi).map(|h| value(hull[h], i)).fold(f64::INFINITY, f64::min);
            out.push((j * nx + i, best.sqrt()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::CellId;
    use crate::geometry::Vec3;

    fn grid(nx: usize, ny: usize, px: f64, py: f64, labels: &[u8]) -> LabelGrid {
        let labels = labels.iter().map(|&n| CellId::from_parts([n; 32], false)).collect();
        LabelGrid::new(nx, ny, px, py, Vec3::ZERO, labels)
    }

    #[test]
    fn halves_split_left_right() {
        #[rustfmt::skip]
        let g = grid(4, 4, 1.0, 1.0, &[
            1, 1, 2, 2,
            1, 1, 2, 2,
            1, 1, 2, 2,
            1, 1, 2, 2,
        ]);
        let f = min_intercell_distance_field(&g);
        for j in 0..4 {
            assert_eq!(f.get(0, j), Some(2.0));
            assert_eq!(f.get(1, j), Some(1.0));
            assert_eq!(f.get(2, j), Some(1.0));
            assert_eq!(f.get(3, j), Some(2.0));
        }
    }

    #[test]
    fn uniform_grid_is_undefined() {
        let f = min_intercell_distance_field(&grid(3, 2, 1.0, 1.0, &[5; 6]));
        assert!(f.values.iter().all(Option::is_none));
    }

    #[test]
    fn corner_outlier() {
        let mut labels = [1u8; 12];
        labels[0] = 2;
        let g = grid(4, 3, 0.5, 2.0, &labels);
        let f = min_intercell_distance_field(&g);
        assert_eq!(f.get(0, 0), Some(0.5));
        let diag = (1.5f64 * 1.5 + 4.0 * 4.0).sqrt();
        assert_eq!(f.get(3, 2), Some(diag));
    }
}
