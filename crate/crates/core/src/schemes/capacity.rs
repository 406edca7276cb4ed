use serde::{Deserialize, Serialize};

use super::shift::cyclic_shift_count;
use crate::error::{Error, Result};
use crate::schurweyl::{dim_p, dim_r, format_two_j, irrep_labels, max_qubits, IrrepLabel};
use crate::twirl::SrfKind;

fn check_n(n_qubits: usize) -> Result<u32> {
    let limit = max_qubits();
    if n_qubits == 0 {
        return Err(Error::InvalidArgument("n_qubits must be positive".into()));
    }
    if n_qubits > limit {
        return Err(Error::Resource { what: "n_qubits", value: n_qubits, limit });
    }
    Ok(n_qubits as u32)
}

fn dims(n: u32) -> Vec<(IrrepLabel, usize, usize)> {
    irrep_labels(n).into_iter().map(|l| (l, dim_r(l), dim_p(l))).collect()
}

/// Upper bound on the number of private classical messages,
/// `Σ_j d_A · min(d_A, d_B)` with `A` the factor the twirl depolarizes.
///
/// For the combined twirl every block is depolarized whole and the only
/// ceiling is the Holevo one, `2^N`.
pub fn message_bound(n_qubits: usize, srf: SrfKind) -> Result<usize> {
    let n = check_n(n_qubits)?;
    let d = dims(n);
    Ok(match srf {
        SrfKind::Su2 => d.iter().map(|&(_, r, p)| r * r.min(p)).sum(),
        SrfKind::Perm => d.iter().map(|&(_, r, p)| p * p.min(r)).sum(),
        SrfKind::Both => 1 << n_qubits,
    })
}

/// `(N/2 − j_min)(2j_min + 1)²`.
pub fn su2_classical_size(n_qubits: usize, two_j_min: u32) -> Result<usize> {
    let n = check_n(n_qubits)?;
    if two_j_min >= n || !(n - two_j_min).is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("invalid j_min {} for N = {n}", format_two_j(two_j_min))));
    }
    let d = two_j_min as usize + 1;
    Ok((n - two_j_min) as usize / 2 * d * d)
}

/// Size of the S_N scheme over the given blocks: `|set| · min_j d_P·min(d_P, d_R)`.
pub fn perm_classical_size(n_qubits: usize, irreps: &[u32]) -> Result<usize> {
    let n = check_n(n_qubits)?;
    let mut set = irreps.to_vec();
    set.sort_unstable();
    set.dedup();
    let mut m = usize::MAX;
    for &tj in &set {
        let l = IrrepLabel::new(n, tj)?;
        m = m.min(cyclic_shift_count(dim_p(l), dim_r(l)));
    }
    if set.is_empty() {
        return Err(Error::InvalidArgument("empty irrep set".into()));
    }
    Ok(set.len() * m)
}

/// The block set maximizing `perm_classical_size`: the top `k` blocks by
/// per-block count, for the best `k`. Returned in descending `j`.
pub fn best_perm_irrep_set(n_qubits: usize) -> Result<Vec<u32>> {
    let n = check_n(n_qubits)?;
    let mut counts: Vec<(usize, u32)> =
        dims(n).iter().map(|&(l, r, p)| (cyclic_shift_count(p, r), l.two_j())).collect();
    counts.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let best_k = (1..=counts.len())
        .max_by_key(|&k| (k * counts[k - 1].0, std::cmp::Reverse(k)))
        .expect("at least one block");
    let mut set: Vec<u32> = counts[..best_k].iter().map(|&(_, tj)| tj).collect();
    set.sort_unstable_by(|a, b| b.cmp(a));
    Ok(set)
}

/// Dimension of the largest completely private subsystem: `N + 1` for SU(2),
/// `max_j d_P` for S_N, `max_j d_R·d_P` for both.
pub fn quantum_capacity_dim(n_qubits: usize, srf: SrfKind) -> Result<usize> {
    Ok(quantum_logical_dim(check_n(n_qubits)?, srf))
}

fn quantum_logical_dim(n: u32, srf: SrfKind) -> usize {
    let d = dims(n);
    match srf {
        SrfKind::Su2 => n as usize + 1,
        SrfKind::Perm => d.iter().map(|&(_, _, p)| p).max().unwrap_or(1),
        SrfKind::Both => d.iter().map(|&(_, r, p)| r * p).max().unwrap_or(1),
    }
}

/// Largest classical scheme this crate constructs for `srf`, with the name of
/// the construction that attains it.
pub fn best_classical_size(n_qubits: usize, srf: SrfKind) -> Result<(usize, String)> {
    let n = check_n(n_qubits)?;
    let mut candidates: Vec<(usize, String)> = Vec::new();
    let su2 = |candidates: &mut Vec<(usize, String)>| -> Result<()> {
        for two_j_min in (n % 2..n).step_by(2) {
            candidates.push((su2_classical_size(n_qubits, two_j_min)?, format!("su2-classical(jmin={})", format_two_j(two_j_min))));
        }
        match n {
            2 => candidates.push((4, "tetrahedron".into())),
            3 => candidates.push((8, "octet".into())),
            _ => {}
        }
        Ok(())
    };
    let perm = |candidates: &mut Vec<(usize, String)>| -> Result<()> {
        let set = best_perm_irrep_set(n_qubits)?;
        let labels: Vec<String> = set.iter().map(|&tj| format_two_j(tj)).collect();
        candidates.push((perm_classical_size(n_qubits, &set)?, format!("perm-classical(irreps={})", labels.join(","))));
        Ok(())
    };
    candidates.push((quantum_logical_dim(n, srf), "quantum-basis".into()));
    match srf {
        SrfKind::Su2 => su2(&mut candidates)?,
        SrfKind::Perm => perm(&mut candidates)?,
        SrfKind::Both => {
            candidates.push((quantum_logical_dim(n, srf), "both-classical".into()));
            su2(&mut candidates)?;
            perm(&mut candidates)?;
        }
    }
    let best = candidates.iter().map(|c| c.0).max().unwrap_or(1);
    Ok(candidates.into_iter().find(|c| c.0 == best).expect("nonempty"))
}

/// Large-`N` capacity formulas, in qubits.
pub fn asymptotic_quantum_qubits(n_qubits: usize, srf: SrfKind) -> f64 {
    let n = n_qubits as f64;
    match srf {
        SrfKind::Su2 => n.log2(),
        SrfKind::Perm => n - n.log2(),
        SrfKind::Both => n - 0.5 * n.log2(),
    }
}

/// Large-`N` capacity formulas, in c-bits.
pub fn asymptotic_classical_cbits(n_qubits: usize, srf: SrfKind) -> f64 {
    let n = n_qubits as f64;
    match srf {
        SrfKind::Su2 => 3.0 * n.log2(),
        SrfKind::Perm | SrfKind::Both => n,
    }
}

/// Finite-`N` private capacities for one SRF kind.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityRow {
    pub n_qubits: usize,
    pub srf: SrfKind,
    pub quantum_logical_dim: usize,
    pub quantum_qubits: f64,
    pub classical_scheme_size: usize,
    pub classical_cbits: f64,
    pub classical_construction: String,
    pub message_bound: usize,
    pub bound_cbits: f64,
    pub asymptotic_quantum_qubits: f64,
    pub asymptotic_classical_cbits: f64,
    pub quantum_below_asymptotic: bool,
    pub classical_below_asymptotic: bool,
}

pub fn capacity_table(n_min: usize, n_max: usize) -> Result<Vec<CapacityRow>> {
    if n_min > n_max {
        return Err(Error::InvalidArgument(format!("empty range {n_min}..={n_max}")));
    }
    let mut rows = Vec::new();
    for n_qubits in n_min..=n_max {
        let n = check_n(n_qubits)?;
        for srf in SrfKind::ALL {
            let q = quantum_logical_dim(n, srf);
            let (size, construction) = best_classical_size(n_qubits, srf)?;
            let bound = message_bound(n_qubits, srf)?;
            let (aq, ac) = (asymptotic_quantum_qubits(n_qubits, srf), asymptotic_classical_cbits(n_qubits, srf));
            let (qq, cc) = ((q as f64).log2(), (size as f64).log2());
            rows.push(CapacityRow {
                n_qubits,
                srf,
                quantum_logical_dim: q,
                quantum_qubits: qq,
                classical_scheme_size: size,
                classical_cbits: cc,
                classical_construction: construction,
                message_bound: bound,
                bound_cbits: (bound as f64).log2(),
                asymptotic_quantum_qubits: aq,
                asymptotic_classical_cbits: ac,
                quantum_below_asymptotic: qq < aq - 1e-12,
                classical_below_asymptotic: cc < ac - 1e-12,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds() {
        assert_eq!(message_bound(3, SrfKind::Su2).unwrap(), 8);
        assert_eq!(message_bound(2, SrfKind::Su2).unwrap(), 4);
        assert_eq!(message_bound(4, SrfKind::Perm).unwrap(), 12);
        assert_eq!(message_bound(4, SrfKind::Both).unwrap(), 16);
    }

    #[test]
    fn su2_counts() {
        assert_eq!(su2_classical_size(6, 4).unwrap(), 25);
        assert_eq!(su2_classical_size(6, 2).unwrap(), 18);
        assert!(su2_classical_size(6, 6).is_err());
        assert!(su2_classical_size(6, 3).is_err());
    }

    #[test]
    fn perm_counts() {
        assert_eq!(perm_classical_size(4, &[2, 0]).unwrap(), 4);
        assert_eq!(perm_classical_size(4, &[2]).unwrap(), 9);
        assert_eq!(best_perm_irrep_set(4).unwrap(), vec![2]);
        assert!(perm_classical_size(4, &[]).is_err());
    }

    #[test]
    fn best_sizes() {
        assert_eq!(best_classical_size(2, SrfKind::Su2).unwrap().0, 4);
        assert_eq!(best_classical_size(3, SrfKind::Su2).unwrap().0, 8);
        assert_eq!(best_classical_size(3, SrfKind::Both).unwrap().0, 8);
        assert_eq!(best_classical_size(6, SrfKind::Su2).unwrap(), (25, "su2-classical(jmin=2)".to_string()));
    }

    #[test]
    fn table_rows() {
        let rows = capacity_table(3, 4).unwrap();
        assert_eq!(rows.len(), 6);
        let su2_3 = &rows[0];
        assert_eq!((su2_3.quantum_qubits, su2_3.classical_cbits), (2.0, 3.0));
        let both_4 = &rows[5];
        assert_eq!(both_4.quantum_logical_dim, 9);
        assert!(capacity_table(5, 4).is_err());
    }
}
