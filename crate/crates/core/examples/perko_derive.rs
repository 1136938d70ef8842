use knotbox::{
    is_prime_diagram, is_realizable, is_reduced, normalized_bracket, state_key, successors,
    witness_signed, writhe, GaussCode, Layer, MoveKind, OrbitOptions, Pass, Sign,
};

// positive even entry: the odd-numbered visit is the overpass
fn dt_to_code(dt: &[i32]) -> Option<GaussCode> {
    let n = dt.len();
    let mut label_at = vec![0u16; 2 * n + 1];
    let mut over_at = vec![false; 2 * n + 1];
    for (i, &e) in dt.iter().enumerate() {
        let odd = 2 * i + 1;
        let even = e.unsigned_abs() as usize;
        label_at[odd] = (i + 1) as u16;
        label_at[even] = (i + 1) as u16;
        over_at[odd] = e > 0;
        over_at[even] = e <= 0;
    }
    let passes = (1..=2 * n)
        .map(|p| Pass {
            layer: if over_at[p] { Layer::Over } else { Layer::Under },
            label: label_at[p],
            sign: Sign::Unknown,
        })
        .collect();
    GaussCode::from_passes(passes).ok().filter(is_realizable)
}

fn report(name: &str, code: &GaussCode) -> bool {
    println!(
        "{name}: n={} realizable={} reduced={} prime={}",
        code.n(),
        is_realizable(code),
        is_reduced(code),
        is_prime_diagram(code),
    );
    if !is_realizable(code) {
        return false;
    }
    let signed = witness_signed(code).expect("realizable");
    println!("    writhe: {:?}", writhe(&signed));
    println!("    tokens: {}", signed.render_tokens());
    println!("    key:    {}", state_key(&signed, true).0);
    println!("    vK:     {:?}", normalized_bracket(&signed));
    true
}

fn scan(a: &GaussCode) {
    let signed_a = witness_signed(a).expect("realizable");
    let key_a = state_key(&signed_a, true);
    let bracket_a = normalized_bracket(&signed_a);
    let opts = OrbitOptions::default();
    println!("  successors at 10 crossings via a 3-fragment twist:");
    for (res, recs) in successors(&signed_a, &opts) {
        if res.n() != 10 || !is_reduced(&res) || !is_prime_diagram(&res) {
            continue;
        }
        if state_key(&res, true) == key_a {
            continue;
        }
        if !recs
            .iter()
            .any(|r| r.kind == MoveKind::Twist && r.fragments.len() == 3)
        {
            continue;
        }
        let chain: Vec<String> = recs.iter().map(|r| r.to_string()).collect();
        println!(
            "  B: writhe={:?} same_bracket={} tokens={}",
            writhe(&res),
            normalized_bracket(&res) == bracket_a,
            res.render_tokens(),
        );
        println!("     key: {}", state_key(&res, true).0);
        println!("     via: {}", chain.join(" ; "));
    }
}

fn main() {
    let trefoil = dt_to_code(&[4, 6, 2]).unwrap();
    println!("trefoil check: {:?}\n", normalized_bracket(&trefoil).unwrap());

    if let Some(a) = dt_to_code(&[4, 8, -14, 2, -16, -18, -20, -12, -6, -10]) {
        if report("A(dt)", &a) {
            scan(&a);
        }
    } else {
        println!("A(dt): not realizable, discarded\n");
    }

    let braids: &[&[i32]] = &[
        &[-1, -1, -1, -2, 1, -2, -1, -2, -2, -2],
        &[1, 1, 1, 2, -1, 2, 1, 2, 2, 2],
        &[-1, -1, -1, 2, -1, 2, -2, -2, -2, 2],
    ];
    for (i, word) in braids.iter().enumerate() {
        match GaussCode::from_braid_closure(3, word) {
            Ok(a) => {
                if report(&format!("A(braid {i}) {word:?}"), &a) {
                    scan(&a);
                }
            }
            Err(e) => println!("A(braid {i}) {word:?}: {e}"),
        }
        println!();
    }
}
