//! Smooth blocks A_T and the doubling search.
//!
//! `cargo run --example smooth_blocks`

use dilate_lab::arith::{enumerate_smooth_block, find_doubling_t};

fn main() -> dilate_lab::Result<()> {
    let block = enumerate_smooth_block(3, 6)?;
    println!("primes {:?}, T = {}", block.primes(), block.t());
    for (m, e) in block.members().iter().zip(block.exponent_vectors()) {
        println!("  {m:>4} = exponents {e:?}");
    }

    println!("\ncardinalities #A_T for s = 4:");
    for t in (0..=40).step_by(5) {
        println!("  T = {t:>2}: {}", enumerate_smooth_block(4, t)?.len());
    }

    for (s, d) in [(3, 1), (3, 2), (5, 2), (6, 3)] {
        match find_doubling_t(s, d, 60)? {
            Some(w) => println!(
                "s = {s}, d = {d}: T = {} with #A_T = {} and #A_(T+d) = {}",
                w.t, w.count_t, w.count_t_plus_d
            ),
            None => println!("s = {s}, d = {d}: no T <= 60"),
        }
    }
    Ok(())
}
