//! Runs every built-in corpus entry and prints its checks.
//!
//! `cargo run --example corpus_tour`

use tutte_forge::corpus::corpus;

fn main() {
    let mut failed = 0;
    for entry in corpus() {
        let run = entry.run();
        print!("{run}");
        failed += usize::from(!run.passed());
    }
    println!("{failed} entries failed");
    assert_eq!(failed, 0);
}
