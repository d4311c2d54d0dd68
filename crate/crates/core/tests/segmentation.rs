//! Segmentation and initialization on rendered scenes with a known answer.

use std::collections::{HashMap, VecDeque};

use bezitrace::energy::VectorShape;
use bezitrace::geometry::{shapes, Point};
use bezitrace::imaging::{psnr, RasterImage};
use bezitrace::init::{segment_regions, InitParams, Initialization};
use bezitrace::raster::{rasterize_all, Background, RasterGrid};

fn quantized(img: &RasterImage, x: usize, y: usize) -> [u8; 3] {
    img.rgb(x, y).map(|v| (v * 255.0).round() as u8)
}

/// 4-connected components of pixels with equal 8-bit color.
fn exact_color_components(img: &RasterImage) -> Vec<usize> {
    let (w, h) = (img.width(), img.height());
    let mut comp = vec![usize::MAX; w * h];
    let mut next = 0;
    for start in 0..w * h {
        if comp[start] != usize::MAX {
            continue;
        }
        let color = quantized(img, start % w, start / w);
        comp[start] = next;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let (x, y) = ((i % w) as i64, (i / w) as i64);
            for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                    continue;
                }
                let j = ny as usize * w + nx as usize;
                if comp[j] == usize::MAX && quantized(img, nx as usize, ny as usize) == color {
                    comp[j] = next;
                    queue.push_back(j);
                }
            }
        }
        next += 1;
    }
    comp
}

fn three_disc_card() -> RasterImage {
    let p = Point::new;
    let discs = [
        VectorShape::new(shapes::circle(p(0.25, 0.3), 0.16, 4), [0.85, 0.1, 0.1]),
        VectorShape::new(shapes::circle(p(0.7, 0.3), 0.18, 4), [0.1, 0.6, 0.2]),
        VectorShape::new(shapes::circle(p(0.45, 0.72), 0.2, 4), [0.1, 0.2, 0.8]),
    ];
    rasterize_all(&discs, &Background::Solid([1.0; 3]), RasterGrid::new(6).unwrap()).unwrap()
}

#[test]
fn three_disc_card_has_four_regions() {
    let img = three_disc_card();
    let labels = segment_regions(&img, 300.0, 16);
    assert_eq!(labels.count, 4);

    // Every large flat-color component maps to one label, and distinct
    // components to distinct labels.
    let comp = exact_color_components(&img);
    let mut sizes: HashMap<usize, usize> = HashMap::new();
    for &c in &comp {
        *sizes.entry(c).or_default() += 1;
    }
    let big: Vec<usize> = sizes.iter().filter(|(_, &n)| n >= 100).map(|(&c, _)| c).collect();
    assert_eq!(big.len(), 4);
    let mut label_of: HashMap<usize, usize> = HashMap::new();
    for (i, &c) in comp.iter().enumerate() {
        if big.contains(&c) {
            let l = labels.labels[i];
            assert_eq!(*label_of.entry(c).or_insert(l), l, "component {c} split across labels");
        }
    }
    let mut distinct: Vec<usize> = label_of.values().copied().collect();
    distinct.sort_unstable();
    distinct.dedup();
    assert_eq!(distinct.len(), 4);
}

#[test]
fn three_disc_card_initializes_close() {
    let img = three_disc_card();
    let init = Initialization::run(&img, &InitParams::default());
    assert_eq!(init.shapes.len(), 3);
    let grid = RasterGrid::new(6).unwrap();
    let shapes: Vec<VectorShape> = init
        .shapes
        .iter()
        .map(|s| VectorShape::new(s.bezigon.map_points(|p| p * (1.0 / 64.0)), s.color))
        .collect();
    let back = rasterize_all(&shapes, &Background::Solid(init.background_color), grid).unwrap();
    assert!(psnr(&back, &img).unwrap() > 20.0);
}
