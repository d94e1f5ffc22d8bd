//! Writes seeded random instances as problem files.
//!
//! `cargo run --example gen_fixtures -- <dir> [count]`

use oa_core::instances::{random_instance, RandomSpec};
use oa_core::io::serialize_problem;

fn main() -> std::io::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = args.next().unwrap_or_else(|| "fixtures".into());
    let count: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(5);
    std::fs::create_dir_all(&dir)?;
    for seed in 0..count {
        let prob = random_instance(seed, &RandomSpec::default());
        let text = format!("# random instance, seed {seed}\n{}", serialize_problem(&prob));
        std::fs::write(format!("{dir}/random_{seed:03}"), text)?;
    }
    Ok(())
}
