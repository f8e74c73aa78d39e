//! Runs every acceptance criterion, one line per criterion.

use enricat::acceptance::CRITERIA;

fn main() {
    let mut failures = 0;
    for c in &CRITERIA {
        let (out, took) = c.run();
        if !out.ok {
            failures += 1;
        }
        println!("{}", c.line(&out, took));
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
