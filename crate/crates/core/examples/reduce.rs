//! Reduce an index to terminal atoms and show the rewriting steps.
//!
//! Usage: `cargo run --example reduce -- 2,2,1`

use emzv::reduction::{is_terminal, reduce};
use emzv::Index;

fn main() -> emzv::Result<()> {
    let arg = std::env::args().nth(1).unwrap_or_else(|| "2,2,1".to_string());
    let k: Index = arg.parse()?;
    let (expr, trace) = reduce(&k, 10_000)?;

    for step in &trace.steps {
        println!("{:<12} {}", step.rule.to_string(), step.identity);
    }
    println!("\nI({k}) = {expr}");

    assert!(trace.replays());
    assert!(expr.atoms().iter().all(is_terminal));
    Ok(())
}
