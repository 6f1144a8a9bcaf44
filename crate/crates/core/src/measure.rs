//! Exact union-measure computations: interval sweeps, rectangle-union area by
//! a coverage segment tree, unions of axis boxes up to dimension 3, and a
//! grouped sweep for unions of product grids (the shape of the rational box
//! set: per modulus, a set of x-intervals crossed with a shared set of
//! y-intervals).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Union measure of closed intervals.
pub fn interval_union_measure(intervals: &[(f64, f64)]) -> f64 {
    let mut iv: Vec<(f64, f64)> = intervals
        .iter()
        .filter(|(a, b)| b > a)
        .copied()
        .collect();
    iv.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    let mut total = 0.0;
    let mut cur: Option<(f64, f64)> = None;
    for (a, b) in iv {
        match cur {
            None => cur = Some((a, b)),
            Some((lo, hi)) => {
                if a <= hi {
                    cur = Some((lo, hi.max(b)));
                } else {
                    total += hi - lo;
                    cur = Some((a, b));
                }
            }
        }
    }
    if let Some((lo, hi)) = cur {
        total += hi - lo;
    }
    total
}

/// Measure of the intersection of two interval unions.
pub fn interval_intersection_measure(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    // |A| + |B| − |A ∪ B|
    let mut all = a.to_vec();
    all.extend_from_slice(b);
    interval_union_measure(a) + interval_union_measure(b) - interval_union_measure(&all)
}

/// Coverage segment tree over a fixed breakpoint set; tracks the total length
/// of segments with positive cover count.
struct CoverageTree {
    xs: Vec<f64>,
    cover: Vec<i32>,
    covered: Vec<f64>,
}

impl CoverageTree {
    fn new(mut xs: Vec<f64>) -> Self {
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs.dedup();
        let n = xs.len().max(2);
        CoverageTree {
            cover: vec![0; 4 * n],
            covered: vec![0.0; 4 * n],
            xs,
        }
    }

    fn segments(&self) -> usize {
        self.xs.len().saturating_sub(1)
    }

    fn update(&mut self, lo: f64, hi: f64, delta: i32) {
        if self.segments() == 0 || hi <= lo {
            return;
        }
        let l = self.xs.partition_point(|x| *x < lo);
        let r = self.xs.partition_point(|x| *x < hi);
        if l >= r {
            return;
        }
        let segs = self.segments();
        self.update_node(1, 0, segs, l, r, delta);
    }

    fn update_node(&mut self, node: usize, nlo: usize, nhi: usize, l: usize, r: usize, delta: i32) {
        if r <= nlo || nhi <= l {
            return;
        }
        if l <= nlo && nhi <= r {
            self.cover[node] += delta;
        } else {
            let mid = (nlo + nhi) / 2;
            self.update_node(2 * node, nlo, mid, l, r, delta);
            self.update_node(2 * node + 1, mid, nhi, l, r, delta);
        }
        self.covered[node] = if self.cover[node] > 0 {
            self.xs[nhi] - self.xs[nlo]
        } else if nhi - nlo == 1 {
            0.0
        } else {
            self.covered[2 * node] + self.covered[2 * node + 1]
        };
    }

    fn covered_len(&self) -> f64 {
        self.covered[1]
    }
}

/// Axis-aligned rectangle [x0, x1] × [y0, y1].
#[derive(Debug, Clone, Copy)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

/// Exact union area by the standard x-sweep with a coverage tree over y.
pub fn rect_union_area(rects: &[Rect]) -> f64 {
    let live: Vec<&Rect> = rects.iter().filter(|r| r.x1 > r.x0 && r.y1 > r.y0).collect();
    if live.is_empty() {
        return 0.0;
    }
    let ys: Vec<f64> = live.iter().flat_map(|r| [r.y0, r.y1]).collect();
    let mut tree = CoverageTree::new(ys);
    let mut events: Vec<(f64, f64, f64, i32)> = Vec::with_capacity(2 * live.len());
    for r in &live {
        events.push((r.x0, r.y0, r.y1, 1));
        events.push((r.x1, r.y0, r.y1, -1));
    }
    events.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut area = 0.0;
    let mut prev_x = events[0].0;
    for (x, y0, y1, delta) in events {
        area += (x - prev_x) * tree.covered_len();
        prev_x = x;
        tree.update(y0, y1, delta);
    }
    area
}

/// One modulus group of the rational box set: a union of x-intervals crossed
/// with a shared union of y-intervals.
#[derive(Debug, Clone)]
pub struct GridGroup {
    pub x_intervals: Vec<(f64, f64)>,
    pub y_intervals: Vec<(f64, f64)>,
}

/// Exact area of ∪_g (∪x_i × ∪y_j): sweep over x with one activation counter
/// per group; a group toggling on or off applies all its y-intervals to the
/// coverage tree at once. Groups with many x-intervals therefore cost
/// O(#x · #y · log) instead of materializing #x·#y rectangles.
pub fn grid_union_area(groups: &[GridGroup]) -> f64 {
    let mut ys: Vec<f64> = Vec::new();
    for g in groups {
        for &(a, b) in &g.y_intervals {
            if b > a {
                ys.push(a);
                ys.push(b);
            }
        }
    }
    if ys.is_empty() {
        return 0.0;
    }
    let mut tree = CoverageTree::new(ys);
    let mut events: Vec<(f64, u32, i32)> = Vec::new();
    for (gi, g) in groups.iter().enumerate() {
        for &(a, b) in &g.x_intervals {
            if b > a {
                events.push((a, gi as u32, 1));
                events.push((b, gi as u32, -1));
            }
        }
    }
    if events.is_empty() {
        return 0.0;
    }
    events.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut active = vec![0i64; groups.len()];
    let mut area = 0.0;
    let mut prev_x = events[0].0;
    for (x, gi, delta) in events {
        area += (x - prev_x) * tree.covered_len();
        prev_x = x;
        let g = gi as usize;
        let before = active[g];
        active[g] += delta as i64;
        if before == 0 && active[g] == 1 {
            for &(a, b) in &groups[g].y_intervals {
                tree.update(a, b, 1);
            }
        } else if before == 1 && active[g] == 0 {
            for &(a, b) in &groups[g].y_intervals {
                tree.update(a, b, -1);
            }
        }
    }
    area
}

/// An axis box given per-dimension as (lo, hi).
pub type AxisBox = Vec<(f64, f64)>;

/// Exact union measure of axis boxes in dimension 1, 2, or 3.
pub fn box_union_measure(boxes: &[AxisBox]) -> f64 {
    let Some(first) = boxes.first() else {
        return 0.0;
    };
    match first.len() {
        1 => {
            let iv: Vec<(f64, f64)> = boxes.iter().map(|b| b[0]).collect();
            interval_union_measure(&iv)
        }
        2 => {
            let rects: Vec<Rect> = boxes
                .iter()
                .map(|b| Rect {
                    x0: b[0].0,
                    x1: b[0].1,
                    y0: b[1].0,
                    y1: b[1].1,
                })
                .collect();
            rect_union_area(&rects)
        }
        3 => {
            // slab sweep on the first axis, exact 2-D union per slab
            let mut xs: Vec<f64> = boxes.iter().flat_map(|b| [b[0].0, b[0].1]).collect();
            xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            xs.dedup();
            let mut total = 0.0;
            for w in xs.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                if hi <= lo {
                    continue;
                }
                let mid = 0.5 * (lo + hi);
                let rects: Vec<Rect> = boxes
                    .iter()
                    .filter(|b| b[0].0 <= mid && mid < b[0].1)
                    .map(|b| Rect {
                        x0: b[1].0,
                        x1: b[1].1,
                        y0: b[2].0,
                        y1: b[2].1,
                    })
                    .collect();
                total += (hi - lo) * rect_union_area(&rects);
            }
            total
        }
        d => panic!("box_union_measure supports dimensions 1-3, got {d}"),
    }
}

/// Monte Carlo estimate of a union measure inside `bounds`, with a 95%
/// confidence half-width. Used to cross-validate the exact sweeps.
pub fn box_union_mc(boxes: &[AxisBox], bounds: &AxisBox, samples: u64, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vol: f64 = bounds.iter().map(|(a, b)| b - a).product();
    let mut hits = 0u64;
    let mut point = vec![0.0; bounds.len()];
    for _ in 0..samples {
        for (k, (a, b)) in bounds.iter().enumerate() {
            point[k] = rng.random_range(*a..*b);
        }
        if boxes
            .iter()
            .any(|bx| bx.iter().zip(&point).all(|((lo, hi), p)| lo <= p && p < hi))
        {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    let half = 1.96 * (p * (1.0 - p) / samples as f64).sqrt() * vol;
    (p * vol, half)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_union_merges_overlaps() {
        let v = interval_union_measure(&[(0.0, 1.0), (0.5, 2.0), (3.0, 4.0)]);
        assert!((v - 3.0).abs() < 1e-12);
    }

    #[test]
    fn interval_intersection() {
        let a = [(0.0, 2.0)];
        let b = [(1.0, 3.0), (1.5, 1.8)];
        let v = interval_intersection_measure(&a, &b);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rect_union_basic() {
        let rects = [
            Rect { x0: 0.0, x1: 2.0, y0: 0.0, y1: 2.0 },
            Rect { x0: 1.0, x1: 3.0, y0: 1.0, y1: 3.0 },
        ];
        let v = rect_union_area(&rects);
        assert!((v - 7.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn grid_union_matches_rect_union() {
        let groups = [
            GridGroup {
                x_intervals: vec![(0.0, 1.0), (2.0, 3.0)],
                y_intervals: vec![(0.0, 0.5), (1.0, 1.5)],
            },
            GridGroup {
                x_intervals: vec![(0.5, 2.5)],
                y_intervals: vec![(0.25, 1.25)],
            },
        ];
        let by_groups = grid_union_area(&groups);
        let mut rects = Vec::new();
        for g in &groups {
            for &(x0, x1) in &g.x_intervals {
                for &(y0, y1) in &g.y_intervals {
                    rects.push(Rect { x0, x1, y0, y1 });
                }
            }
        }
        let by_rects = rect_union_area(&rects);
        assert!((by_groups - by_rects).abs() < 1e-12, "{by_groups} vs {by_rects}");
    }

    #[test]
    fn box_union_3d_disjoint_and_overlap() {
        let unit = |lo: f64| vec![(lo, lo + 1.0), (0.0, 1.0), (0.0, 1.0)];
        let v = box_union_measure(&[unit(0.0), unit(2.0)]);
        assert!((v - 2.0).abs() < 1e-12);
        let v = box_union_measure(&[unit(0.0), unit(0.5)]);
        assert!((v - 1.5).abs() < 1e-12);
    }

    #[test]
    fn mc_agrees_with_exact() {
        let boxes = vec![
            vec![(0.0, 0.5), (0.0, 0.5)],
            vec![(0.25, 0.75), (0.25, 0.75)],
        ];
        let exact = box_union_measure(&boxes);
        let bounds = vec![(0.0, 1.0), (0.0, 1.0)];
        let (mc, half) = box_union_mc(&boxes, &bounds, 200_000, 7);
        assert!((mc - exact).abs() < 3.0 * half, "{mc} vs {exact} ± {half}");
    }
}
