// Analytic gradients of the data term and the priors against central
// differences on random blobs.

use std::error::Error;

use bezitrace::cli::{gradcheck, GradcheckOptions};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let table = gradcheck(&GradcheckOptions { trials: 10, depth: 4, ..Default::default() })?;
    print!("{}", table.render());
    if !table.pass() {
        return Err("gradient check failed".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
