// The four shape priors on a few curves, and how they respond to scaling.

use std::error::Error;

use bezitrace::energy::{e_apt, e_hpt, e_lpt, e_spt};
use bezitrace::geometry::{shapes, Bezigon, Point};

fn show(name: &str, b: &Bezigon) {
    println!(
        "{name:<12} spt {:.4}  apt {:.4}  hpt {:8.3}  lpt {:.4}",
        e_spt(b),
        e_apt(b),
        e_hpt(b),
        e_lpt(b)
    );
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let c = Point::new(0.5, 0.5);
    let circle = shapes::circle(c, 0.3, 4);
    show("circle", &circle);
    show("square", &shapes::rect(Point::new(0.2, 0.2), Point::new(0.8, 0.8)));
    show("star", &shapes::star(c, 0.4, 0.2, 5));
    show("figure 8", &shapes::figure_eight(c, 0.3, 0.2));

    let big = circle.map_points(|p| p * 2.0);
    println!("x2: lpt ratio {:.6}, hpt ratio {:.6}, apt ratio {:.6}",
        e_lpt(&big) / e_lpt(&circle),
        e_hpt(&big) / e_hpt(&circle),
        e_apt(&big).max(1e-300) / e_apt(&circle).max(1e-300));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
