//! Error classification of a small system output, then replaying the log
//! to recover the gold entities.

use sievecoref::analysis::{analyze, apply, format_error_log};
use sievecoref::{EntitySet, Span};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = |s, a, b| Span::new(s, a, b);
    let gold = EntitySet::from_spans(vec![
        vec![m(0, 0, 1), m(1, 0, 0), m(2, 3, 3)],
        vec![m(0, 4, 5), m(2, 0, 1)],
        vec![m(1, 2, 4)],
    ]);
    let sys = EntitySet::from_spans(vec![
        // same head token, shorter boundary: "man" for "de man"
        vec![m(0, 1, 1), m(1, 0, 0)],
        // conflates two gold entities
        vec![m(2, 3, 3), m(0, 4, 5), m(2, 0, 1)],
        // not a gold mention
        vec![m(3, 1, 1)],
    ]);
    let mut log = analyze(&gold, &sys, false);
    log.doc = "example".into();
    print!("{}", format_error_log(std::slice::from_ref(&log)));
    let counts = log.counts();
    println!("total errors: {}", counts.total());
    let fixed = apply(&log, &sys)?;
    println!("replay reaches gold: {}", fixed.same_partition(&gold));
    Ok(())
}
