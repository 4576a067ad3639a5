//! Shared fixtures for the integration suites: ADE graph builders and an
//! independent determinant oracle.
#![allow(dead_code)] // each test target uses a different subset

use k3calc::dualgraph::matrix::IntMatrix;
use k3calc::{Config, ConfigBuilder, InvariantLedger};
use std::collections::HashMap;

/// Independent determinant oracle: Laplace cofactor expansion along the
/// first remaining row, memoized over column subsets. A different algorithm
/// from the Bareiss elimination it cross-checks; fine up to 20 x 20.
pub fn det_laplace(m: &IntMatrix) -> i128 {
    fn go(m: &IntMatrix, row: usize, cols: u32, memo: &mut HashMap<(usize, u32), i128>) -> i128 {
        if cols == 0 {
            return 1;
        }
        if let Some(&v) = memo.get(&(row, cols)) {
            return v;
        }
        let mut acc: i128 = 0;
        let mut sign: i128 = 1;
        for j in 0..m.size() {
            if cols & (1 << j) == 0 {
                continue;
            }
            let entry = m.at(row, j);
            if entry != 0 {
                acc += sign * entry * go(m, row + 1, cols & !(1 << j), memo);
            }
            sign = -sign;
        }
        memo.insert((row, cols), acc);
        acc
    }
    let mut memo = HashMap::new();
    go(m, 0, (1u32 << m.size()) - 1, &mut memo)
}

pub fn chain_config(weights: &[i64]) -> Config {
    let mut b = ConfigBuilder::new(InvariantLedger::neutral());
    for (i, w) in weights.iter().enumerate() {
        b.add(format!("c{i}").as_str(), *w, 0);
    }
    for i in 1..weights.len() {
        b.meet(format!("c{}", i - 1).as_str(), format!("c{i}").as_str());
    }
    b.build().unwrap()
}

pub fn a_n(n: usize) -> Config {
    chain_config(&vec![-2; n])
}

/// D_n (n >= 4): a path of n - 1 nodes with one extra node on the second.
pub fn d_n(n: usize) -> Config {
    assert!(n >= 4);
    let mut b = ConfigBuilder::new(InvariantLedger::neutral());
    for i in 0..n - 1 {
        b.add(format!("c{i}").as_str(), -2, 0);
    }
    b.add("x", -2, 0);
    for i in 1..n - 1 {
        b.meet(format!("c{}", i - 1).as_str(), format!("c{i}").as_str());
    }
    b.meet("x", "c1");
    b.build().unwrap()
}

/// E_m (m = 6, 7, 8): a path of m - 1 nodes with one extra node on the third.
pub fn e_m(m: usize) -> Config {
    assert!((6..=8).contains(&m));
    let mut b = ConfigBuilder::new(InvariantLedger::neutral());
    for i in 0..m - 1 {
        b.add(format!("c{i}").as_str(), -2, 0);
    }
    b.add("x", -2, 0);
    for i in 1..m - 1 {
        b.meet(format!("c{}", i - 1).as_str(), format!("c{i}").as_str());
    }
    b.meet("x", "c2");
    b.build().unwrap()
}

/// Every ADE configuration with at most `max` nodes.
pub fn all_ade(max: usize) -> Vec<(String, Config)> {
    let mut out = Vec::new();
    for n in 1..=max {
        out.push((format!("A{n}"), a_n(n)));
    }
    for n in 4..=max {
        out.push((format!("D{n}"), d_n(n)));
    }
    for m in 6..=8.min(max) {
        out.push((format!("E{m}"), e_m(m)));
    }
    out
}
