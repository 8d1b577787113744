mod support;

use corpuslab_core::morphseg::{train_segmenter, MorphConfig};
use support::{grid, optimum};

#[test]
fn greedy_matches_exhaustive_on_grid() {
    let mut worst = 0.0f64;
    let mut misses = Vec::new();
    let grid: Vec<_> = [2024, 11].into_iter().flat_map(grid).collect();
    for morph_cost in [5.0, 1.0] {
        for words in &grid {
            let cfg = MorphConfig { morph_cost, ..Default::default() };
            let m = train_segmenter(words, &cfg).unwrap();
            let h = m.cost_history();
            assert!(h.windows(2).all(|w| w[1] <= w[0] + 1e-9), "cost rose: {h:?}");
            let best = optimum(words, morph_cost);
            let gap = m.cost() - best;
            assert!(gap > -1e-9, "greedy below exhaustive optimum on {words:?}");
            if gap > 1e-9 {
                misses.push((morph_cost, words.clone(), gap));
            }
            worst = worst.max(gap);
        }
    }
    println!(
        "morphseg grid: {} vocabularies x 2 prices, {} above optimum, worst gap {worst:.6} bits",
        grid.len(),
        misses.len()
    );
    for (c, w, g) in misses.iter().take(10) {
        println!("  morph_cost {c}: {w:?} gap {g:.6}");
    }
    assert!(misses.is_empty());
}

#[test]
fn walked_talking_reaches_optimum() {
    let words: Vec<(String, u64)> = ["walked", "walking", "talked", "talking"]
        .iter()
        .map(|w| (w.to_string(), 5))
        .collect();
    let m = train_segmenter(&words, &MorphConfig::default()).unwrap();
    assert!((m.cost() - optimum(&words, 5.0)).abs() < 1e-9);
    for morph in ["walk", "talk", "ed", "ing"] {
        assert!(m.contains(morph));
    }
}
