use knotbox::{build_table_journaled, save_table, OrbitOptions};
use std::path::PathBuf;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let lo: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let hi: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(8);
    let dir = PathBuf::from(args.get(3).map(String::as_str).unwrap_or("/tmp/tables"));
    std::fs::create_dir_all(&dir).expect("table dir");
    let opts = OrbitOptions::default();
    for n in lo..=hi {
        let t = Instant::now();
        let journal = dir.join(format!("kn{n}.journal"));
        let table = build_table_journaled(n, &opts, Some(&journal)).expect("journaled build");
        let path = dir.join(format!("kn{n}.jsonl"));
        save_table(&table, &path).expect("save");
        println!(
            "n={n}: {} classes in {:.1?} -> {}",
            table.classes.len(),
            t.elapsed(),
            path.display()
        );
    }
}
