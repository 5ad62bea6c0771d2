//! Runtime against point count, with a log-log slope. Pass sizes as
//! arguments, e.g. `cargo run --release --example scaling_bench 200 400 800`.

use trackswept::detection::Method;
use trackswept::eval::{bench_scaling, BenchConfig};

fn main() {
    let sizes: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let cfg = BenchConfig {
        sizes: if sizes.is_empty() { vec![200, 400, 800] } else { sizes },
        methods: vec![Method::Ts, Method::Ps],
        repeats: 3,
        ..Default::default()
    };
    let table = bench_scaling(&cfg).unwrap();
    table.write_csv(std::io::stdout()).unwrap();
}
