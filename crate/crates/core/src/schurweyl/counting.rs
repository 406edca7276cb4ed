use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Total-spin label `j` of an irrep block, stored as `2j` so half-integers are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IrrepLabel {
    two_j: u32,
    n_qubits: u32,
}

impl IrrepLabel {
    pub fn new(n_qubits: u32, two_j: u32) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidArgument("n_qubits must be positive".into()));
        }
        if two_j > n_qubits || !(n_qubits - two_j).is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "2j = {two_j} is not a valid total spin for {n_qubits} qubits"
            )));
        }
        Ok(Self { two_j, n_qubits })
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn j(&self) -> f64 {
        f64::from(self.two_j) / 2.0
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_two_j(self.two_j))
    }
}

/// Renders `2j` as `j`, e.g. `3` → `3/2`, `4` → `2`.
pub fn format_two_j(two_j: u32) -> String {
    if two_j.is_multiple_of(2) {
        (two_j / 2).to_string()
    } else {
        format!("{two_j}/2")
    }
}

/// Parses `"1"`, `"3/2"` or `"1.5"` into `2j`.
pub fn parse_two_j(s: &str) -> Result<u32> {
    let bad = || Error::InvalidArgument(format!("cannot parse spin value {s:?}"));
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        if den.trim() != "2" {
            return Err(bad());
        }
        return num.trim().parse::<u32>().map_err(|_| bad());
    }
    if let Ok(j) = s.parse::<u32>() {
        return Ok(2 * j);
    }
    let x: f64 = s.parse().map_err(|_| bad())?;
    let twice = 2.0 * x;
    if x < 0.0 || (twice - twice.round()).abs() > 1e-9 {
        return Err(bad());
    }
    Ok(twice.round() as u32)
}

/// Labels present in `n` qubits, in descending `j`.
pub fn irrep_labels(n_qubits: u32) -> Vec<IrrepLabel> {
    (0..=n_qubits / 2)
        .map(|k| IrrepLabel { two_j: n_qubits - 2 * k, n_qubits })
        .collect()
}

/// `2j + 1`.
pub fn dim_r(label: IrrepLabel) -> usize {
    label.two_j as usize + 1
}

fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc = C(n, i+1)
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

/// Multiplicity of spin `j` in `n` qubits: `C(N, N/2 − j)·(2j+1)/(N/2 + j + 1)`,
/// evaluated in integer arithmetic.
pub fn dim_p(label: IrrepLabel) -> usize {
    let n = u64::from(label.n_qubits);
    let two_j = u64::from(label.two_j);
    let k = (n - two_j) / 2;
    let numerator = binomial(n, k) * u128::from(two_j + 1);
    let denominator = u128::from((n + two_j) / 2 + 1);
    debug_assert_eq!(numerator % denominator, 0);
    (numerator / denominator) as usize
}

/// Number of coupling paths (sequences of intermediate `2j` values) from one
/// qubit to `(n, 2j)`, by dynamic programming over the Bratteli diagram.
pub fn bratteli_path_count(n_qubits: u32, two_j: u32) -> u128 {
    if n_qubits == 0 {
        return 0;
    }
    let n = n_qubits as usize;
    let mut counts = vec![0u128; n + 2];
    counts[1] = 1;
    for _ in 1..n {
        let mut next = vec![0u128; n + 2];
        for (t, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            next[t + 1] += c;
            if t > 0 {
                next[t - 1] += c;
            }
        }
        counts = next;
    }
    counts.get(two_j as usize).copied().unwrap_or(0)
}

/// All coupling paths ending at `(n, 2j)`, in lexicographic order. Each path
/// lists `2j` after every qubit, starting with `1` and ending with `two_j`.
pub fn bratteli_paths(n_qubits: u32, two_j: u32) -> Vec<Vec<u32>> {
    fn walk(path: &mut Vec<u32>, remaining: u32, target: u32, out: &mut Vec<Vec<u32>>) {
        let last = *path.last().unwrap();
        if remaining == 0 {
            if last == target {
                out.push(path.clone());
            }
            return;
        }
        // prune: cannot reach target in the remaining steps
        if last.abs_diff(target) > remaining {
            return;
        }
        if last > 0 {
            path.push(last - 1);
            walk(path, remaining - 1, target, out);
            path.pop();
        }
        path.push(last + 1);
        walk(path, remaining - 1, target, out);
        path.pop();
    }
    let mut out = Vec::new();
    if n_qubits == 0 {
        return out;
    }
    walk(&mut vec![1], n_qubits - 1, two_j, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(n: u32, two_j: u32) -> IrrepLabel {
        IrrepLabel::new(n, two_j).unwrap()
    }

    #[test]
    fn label_validation() {
        assert!(IrrepLabel::new(3, 2).is_err());
        assert!(IrrepLabel::new(3, 5).is_err());
        assert!(IrrepLabel::new(0, 0).is_err());
        assert_eq!(label(3, 1).to_string(), "1/2");
        assert_eq!(label(4, 2).to_string(), "1");
    }

    #[test]
    fn dim_r_examples() {
        assert_eq!(dim_r(label(2, 2)), 3);
        assert_eq!(dim_r(label(3, 1)), 2);
        assert_eq!(dim_r(label(8, 8)), 9);
    }

    #[test]
    fn dim_p_examples() {
        assert_eq!(dim_p(label(3, 1)), 2);
        assert_eq!(dim_p(label(4, 2)), 3);
        assert_eq!(dim_p(label(2, 0)), 1);
        // N = 6: d_P = 5, 9, 5, 1 for j = 0..3
        let six: Vec<usize> = (0..=3).map(|j| dim_p(label(6, 2 * j))).collect();
        assert_eq!(six, vec![5, 9, 5, 1]);
    }

    #[test]
    fn paths_are_lexicographic_and_counted() {
        let paths = bratteli_paths(4, 2);
        assert_eq!(paths, vec![vec![1, 0, 1, 2], vec![1, 2, 1, 2], vec![1, 2, 3, 2]]);
        assert_eq!(bratteli_path_count(4, 2), 3);
        assert_eq!(bratteli_path_count(4, 1), 0);
    }

    #[test]
    fn spin_parsing() {
        assert_eq!(parse_two_j("3/2").unwrap(), 3);
        assert_eq!(parse_two_j("2").unwrap(), 4);
        assert_eq!(parse_two_j("0.5").unwrap(), 1);
        assert!(parse_two_j("1/3").is_err());
        assert!(parse_two_j("0.3").is_err());
        assert!(parse_two_j("x").is_err());
    }
}
