//! Information transfer rate for a few (MDT, accuracy, N) settings,
//! including a below-chance row that has no ITR.

use bifb::metrics::itr;

fn main() -> bifb::Result<()> {
    let rows = [
        (5.5, 0.875, 7),
        (6.3, 1.0, 7),
        (8.2, 1.0, 7),
        (7.5, 1.0, 3),
        (10.0, 0.867, 3),
        (10.0, 0.067, 3),
    ];
    println!("MDT(s)  acc(%)  N  commands/min  ITR(bits/min)");
    for (mdt, p, n) in rows {
        let per_minute = 60.0 / mdt;
        let bits = itr(n, p, per_minute)?.map_or_else(|| "-".to_string(), |v| format!("{v:.1}"));
        println!("{mdt:6.1}  {:6.1}  {n}  {per_minute:12.2}  {bits:>13}", 100.0 * p);
    }
    Ok(())
}
