//! Plans the non-square loop for every grid up to a size and reports which
//! ones need a non-balanced overlay.
//!
//! cargo run --release --example fur_scan -- 64

use sfcurve::nonsquare::{overlay_plan, FurLoop};

fn main() {
    let max: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(64);
    let (mut planned, mut rebalanced, mut failed) = (0, 0, 0);
    for n in 1..=max {
        for m in 1..=max {
            let Ok(balanced) = overlay_plan(n, m) else { continue };
            match FurLoop::new(n, m) {
                Ok(fur) => {
                    planned += 1;
                    if *fur.grid() != balanced {
                        rebalanced += 1;
                    }
                }
                Err(e) => {
                    failed += 1;
                    println!("{n}x{m}: {e}");
                }
            }
        }
    }
    println!("planned {planned} (rebalanced {rebalanced}), failed {failed}");
}
