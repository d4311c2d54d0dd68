//! Region boundaries along pixel edges.

use std::collections::HashMap;

use super::LabelMap;
use crate::geometry::Point;

/// Closed boundary polygon through pixel corners in pixel coordinates, one
/// vertex per unit step. The first vertex is not repeated at the end.
#[derive(Clone, Debug, PartialEq)]
pub struct PixelContour {
    pub points: Vec<Point>,
}

impl PixelContour {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn perimeter(&self) -> f64 {
        let n = self.points.len();
        (0..n).map(|i| self.points[i].distance(self.points[(i + 1) % n])).sum()
    }

    /// Shoelace `∮ x dy`; positive for the orientation used by bezigons.
    pub fn signed_area(&self) -> f64 {
        let n = self.points.len();
        (0..n)
            .map(|i| {
                let (a, b) = (self.points[i], self.points[(i + 1) % n]);
                0.5 * (a.x + b.x) * (b.y - a.y)
            })
            .sum()
    }

    pub fn reversed(&self) -> PixelContour {
        let mut points = self.points.clone();
        points.reverse();
        PixelContour { points }
    }
}

/// Outer boundary of a region and the boundaries of its holes, all
/// positively oriented.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionBoundary {
    pub outer: PixelContour,
    pub holes: Vec<PixelContour>,
}

type Vertex = (i64, i64);

/// Traces `region` along pixel edges, keeping the region on the right of
/// travel in image coordinates (y down). Diagonally touching pixels are not
/// connected. Returns `None` for an empty region.
pub fn trace_boundary(labels: &LabelMap, region: usize) -> Option<RegionBoundary> {
    let mut out: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
    let mut order: Vec<(Vertex, Vertex)> = Vec::new();
    for y in 0..labels.height as i64 {
        for x in 0..labels.width as i64 {
            if labels.get(x, y) != Some(region) {
                continue;
            }
            let outside = |dx: i64, dy: i64| labels.get(x + dx, y + dy) != Some(region);
            let mut edge = |a: Vertex, b: Vertex| {
                out.entry(a).or_default().push(b);
                order.push((a, b));
            };
            if outside(0, -1) {
                edge((x, y), (x + 1, y));
            }
            if outside(1, 0) {
                edge((x + 1, y), (x + 1, y + 1));
            }
            if outside(0, 1) {
                edge((x + 1, y + 1), (x, y + 1));
            }
            if outside(-1, 0) {
                edge((x, y + 1), (x, y));
            }
        }
    }
    if order.is_empty() {
        return None;
    }
    let mut loops = Vec::new();
    for &(start, first) in &order {
        let Some(list) = out.get_mut(&start) else { continue };
        let Some(pos) = list.iter().position(|&v| v == first) else { continue };
        list.swap_remove(pos);
        let mut pts = vec![start];
        let (mut prev, mut cur) = (start, first);
        while cur != start {
            pts.push(cur);
            let dir = (cur.0 - prev.0, cur.1 - prev.1);
            let list = out.get_mut(&cur).expect("boundary edges form closed loops");
            // right turn, straight, left turn
            let prefs = [(-dir.1, dir.0), dir, (dir.1, -dir.0)];
            let pos = prefs
                .iter()
                .find_map(|d| list.iter().position(|&v| v == (cur.0 + d.0, cur.1 + d.1)))
                .expect("boundary edges form closed loops");
            let next = list.swap_remove(pos);
            prev = cur;
            cur = next;
        }
        let points = pts.into_iter().map(|(x, y)| Point::new(x as f64, y as f64)).collect();
        loops.push(PixelContour { points });
    }
    let mut outer = None;
    let mut holes = Vec::new();
    for c in loops {
        if c.signed_area() > 0.0 && outer.is_none() {
            outer = Some(c);
        } else {
            holes.push(c.reversed());
        }
    }
    Some(RegionBoundary { outer: outer?, holes })
}
