//! Graph-based region segmentation on the 4-connected pixel grid.

use crate::imaging::{RasterImage, Rgb};

/// Per-pixel region labels, contiguous in `0..count`, numbered in order of
/// first appearance in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMap {
    pub width: usize,
    pub height: usize,
    pub labels: Vec<usize>,
    pub count: usize,
}

impl LabelMap {
    pub fn at(&self, x: usize, y: usize) -> usize {
        self.labels[y * self.width + x]
    }

    /// Label at a possibly out-of-range position.
    pub fn get(&self, x: i64, y: i64) -> Option<usize> {
        (x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height)
            .then(|| self.labels[y as usize * self.width + x as usize])
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.count];
        for &l in &self.labels {
            s[l] += 1;
        }
        s
    }

    pub fn mask(&self, region: usize) -> Vec<bool> {
        self.labels.iter().map(|&l| l == region).collect()
    }

    /// Whether all four neighbors of `(x, y)` exist and share its label.
    pub fn is_interior(&self, x: usize, y: usize) -> bool {
        let l = self.at(x, y);
        let (x, y) = (x as i64, y as i64);
        [(1, 0), (-1, 0), (0, 1), (0, -1)]
            .iter()
            .all(|(dx, dy)| self.get(x + dx, y + dy) == Some(l))
    }

    /// Mean color of each region over its interior pixels, or over all of
    /// its pixels when it has none.
    pub fn region_means(&self, image: &RasterImage) -> Vec<Rgb> {
        let mut inner = vec![([0.0; 3], 0usize); self.count];
        let mut all = vec![([0.0; 3], 0usize); self.count];
        for y in 0..self.height {
            for x in 0..self.width {
                let l = self.at(x, y);
                let p = image.rgb(x, y);
                let targets: &mut [_] = if self.is_interior(x, y) {
                    &mut [&mut inner[l], &mut all[l]][..]
                } else {
                    &mut [&mut all[l]][..]
                };
                for t in targets.iter_mut() {
                    for c in 0..3 {
                        t.0[c] += p[c];
                    }
                    t.1 += 1;
                }
            }
        }
        inner
            .iter()
            .zip(&all)
            .map(|(i, a)| {
                let (s, n) = if i.1 > 0 { i } else { a };
                s.map(|v| v / (*n).max(1) as f64)
            })
            .collect()
    }

    fn relabel(width: usize, height: usize, raw: &[usize]) -> LabelMap {
        let mut map = std::collections::HashMap::new();
        let labels = raw
            .iter()
            .map(|r| {
                let next = map.len();
                *map.entry(*r).or_insert(next)
            })
            .collect();
        LabelMap { width, height, labels, count: map.len() }
    }
}

struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
    internal: Vec<f64>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet { parent: (0..n).collect(), size: vec![1; n], internal: vec![0.0; n] }
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize, w: f64) {
        let (big, small) = if self.size[a] >= self.size[b] { (a, b) } else { (b, a) };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        self.internal[big] = w;
    }
}

fn color_distance(a: Rgb, b: Rgb) -> f64 {
    (0..3).map(|c| ((a[c] - b[c]) * 255.0).powi(2)).sum::<f64>().sqrt()
}

/// Felzenszwalb–Huttenlocher merging with threshold `k` (colors on the 0–255
/// scale), then components smaller than `min_size` are merged into a
/// neighbor, then pixels of strips at most two pixels thick (typically the
/// anti-aliased rim between two flat regions) are handed to the adjacent
/// thicker region of closest mean color. Ties are broken by row-major pixel
/// order, so the result is deterministic.
pub fn segment_regions(image: &RasterImage, k: f64, min_size: usize) -> LabelMap {
    let (w, h) = (image.width(), image.height());
    let n = w * h;
    let mut edges = Vec::with_capacity(2 * n);
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let p = image.rgb(x, y);
            if x + 1 < w {
                edges.push((color_distance(p, image.rgb(x + 1, y)), i, i + 1));
            }
            if y + 1 < h {
                edges.push((color_distance(p, image.rgb(x, y + 1)), i, i + w));
            }
        }
    }
    edges.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut set = DisjointSet::new(n);
    for &(wt, a, b) in &edges {
        let (ra, rb) = (set.find(a), set.find(b));
        if ra == rb {
            continue;
        }
        let ta = set.internal[ra] + k / set.size[ra] as f64;
        let tb = set.internal[rb] + k / set.size[rb] as f64;
        if wt <= ta.min(tb) {
            set.union(ra, rb, wt);
        }
    }
    for &(wt, a, b) in &edges {
        let (ra, rb) = (set.find(a), set.find(b));
        if ra != rb && (set.size[ra] < min_size || set.size[rb] < min_size) {
            let keep = set.internal[ra].max(set.internal[rb]).max(wt);
            set.union(ra, rb, keep);
        }
    }
    let raw: Vec<usize> = (0..n).map(|i| set.find(i)).collect();
    let labels = LabelMap::relabel(w, h, &raw);
    absorb_thin_regions(image, labels)
}

fn absorb_thin_regions(image: &RasterImage, map: LabelMap) -> LabelMap {
    let (w, h) = (map.width, map.height);
    let mut thick = vec![false; map.count];
    for y in 0..h {
        for x in 0..w {
            if map.is_interior(x, y) {
                thick[map.at(x, y)] = true;
            }
        }
    }
    if thick.iter().all(|&t| t) || !thick.iter().any(|&t| t) {
        return map;
    }
    let means = map.region_means(image);
    let mut labels = map.labels.clone();
    let mut settled: Vec<bool> = labels.iter().map(|&l| thick[l]).collect();
    loop {
        let mut changed = Vec::new();
        for y in 0..h {
            for x in 0..w {
                let i = y * w + x;
                if settled[i] {
                    continue;
                }
                let p = image.rgb(x, y);
                let mut best: Option<(f64, usize)> = None;
                for (dx, dy) in [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)] {
                    let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                    if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                        continue;
                    }
                    let j = ny as usize * w + nx as usize;
                    if settled[j] {
                        let d = color_distance(p, means[labels[j]]);
                        if best.map_or(true, |(bd, _)| d < bd) {
                            best = Some((d, labels[j]));
                        }
                    }
                }
                if let Some((_, l)) = best {
                    changed.push((i, l));
                }
            }
        }
        if changed.is_empty() {
            break;
        }
        for (i, l) in changed {
            labels[i] = l;
            settled[i] = true;
        }
    }
    LabelMap::relabel(w, h, &labels)
}
