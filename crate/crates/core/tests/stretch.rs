//! Level-4 cases of the recursion identity. Slow in debug builds; run with
//! `cargo test --release -p mmtr-core --test stretch -- --ignored`.

use mmtr_core::report::{main1_case, stable_cases, Context};

#[test]
#[ignore]
fn main1_level_four() {
    let ctx = Context::new();
    let level4: Vec<_> = stable_cases(4)
        .into_iter()
        .filter(|&(g, n)| 2 * g + n == 6)
        .collect();
    assert_eq!(level4, vec![(0, 6), (1, 4), (2, 2)]);
    for (g, n) in level4 {
        main1_case(&ctx, g, n).unwrap_or_else(|e| panic!("{e}"));
    }
}
