use knotbox::{build_table, OrbitOptions};
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let lo: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let hi: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(6);
    let opts = OrbitOptions::default();
    for n in lo..=hi {
        let t = Instant::now();
        let table = build_table(n, &opts);
        println!("n={n}: {} classes in {:.1?}", table.classes.len(), t.elapsed());
        for class in &table.classes {
            println!("    [{}] {}", class.count, class.key.0);
        }
    }
}
