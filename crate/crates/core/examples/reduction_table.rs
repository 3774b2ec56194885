//! Write the reduction table for weight <= 4 and length <= 3 as JSON lines,
//! then summarize it.

use emzv::verify::{reduction_table, write_table};

fn main() -> emzv::Result<()> {
    let rows = reduction_table(4, 3, 10_000)?;
    let mut out = std::io::stdout().lock();
    write_table(&rows, &mut out)?;

    let terminal = rows.iter().filter(|r| r.terminal).count();
    let longest = rows.iter().max_by_key(|r| r.trace_len).unwrap();
    eprintln!(
        "{} indices, {terminal} already terminal, longest trace {} steps at {}",
        rows.len(),
        longest.trace_len,
        longest.index
    );
    Ok(())
}
