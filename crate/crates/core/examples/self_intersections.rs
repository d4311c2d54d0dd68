// Finding where a bezigon crosses itself.

use std::error::Error;

use bezitrace::geometry::{shapes, Point, INTERSECTION_TOL};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let c = Point::new(0.5, 0.5);
    let eight = shapes::figure_eight(c, 0.3, 0.2);
    for x in eight.self_intersections(INTERSECTION_TOL) {
        let inner = eight.arc_length(x.t1, x.t2);
        println!(
            "crossing at ({:.4}, {:.4}), t = {:.4} and {:.4}, loop length {inner:.4} of {:.4}",
            x.point.x,
            x.point.y,
            x.t1,
            x.t2,
            eight.length()
        );
    }
    let circle = shapes::circle(c, 0.3, 4);
    println!("circle crossings: {}", circle.self_intersections(INTERSECTION_TOL).len());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
