//! Private classical and quantum communication schemes, their capacity
//! bounds, and the scheme file format.

mod capacity;
mod classical;
mod file;
mod shift;
mod quantum;

use serde_json::{Map, Value};

use crate::error::{check_dim, Error, Result};
use crate::matcore::{DensityMatrix, Ket};
use crate::twirl::SrfKind;

pub use capacity::{
    asymptotic_classical_cbits, asymptotic_quantum_qubits, best_classical_size, best_perm_irrep_set,
    capacity_table, perm_classical_size, quantum_capacity_dim, su2_classical_size, message_bound, CapacityRow,
};
pub use classical::{
    both_private_classical_scheme, perm_classical_scheme, quantum_basis_scheme, sabotaged_scheme,
    su2_classical_scheme, tetrahedron_states, three_qubit_octet,
};
pub use file::{read_scheme, write_scheme, KetJson, Scheme, SchemeRecord};
pub use shift::{cyclic_shift_count, cyclic_shift_states};
pub use quantum::{quantum_decode, quantum_scheme, quantum_target_block, QuantumScheme};

/// A set of orthogonal pure signal states together with the state the
/// eavesdropper is claimed to see for every one of them.
#[derive(Clone, Debug)]
pub struct ClassicalScheme {
    n_qubits: usize,
    srf: SrfKind,
    construction: String,
    params: Map<String, Value>,
    states: Vec<Ket>,
    claimed_rho0: DensityMatrix,
}

impl ClassicalScheme {
    pub fn new(
        n_qubits: usize,
        srf: SrfKind,
        construction: impl Into<String>,
        params: Map<String, Value>,
        states: Vec<Ket>,
        claimed_rho0: DensityMatrix,
    ) -> Result<Self> {
        if n_qubits == 0 || n_qubits >= usize::BITS as usize {
            return Err(Error::InvalidArgument(format!("bad qubit count {n_qubits}")));
        }
        let dim = 1usize << n_qubits;
        if states.len() < 2 {
            return Err(Error::Construction(format!("a scheme needs at least 2 states, got {}", states.len())));
        }
        for s in &states {
            check_dim(dim, s.dim())?;
        }
        check_dim(dim, claimed_rho0.dim())?;
        Ok(Self { n_qubits, srf, construction: construction.into(), params, states, claimed_rho0 })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn srf(&self) -> SrfKind {
        self.srf
    }

    pub fn construction(&self) -> &str {
        &self.construction
    }

    pub fn params(&self) -> &Map<String, Value> {
        &self.params
    }

    pub fn states(&self) -> &[Ket] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn claimed_rho0(&self) -> &DensityMatrix {
        &self.claimed_rho0
    }

    /// `construction/N` plus parameters, used to label reports.
    pub fn id(&self) -> String {
        let mut id = format!("{}/n{}/{}", self.construction, self.n_qubits, self.srf);
        for (k, v) in &self.params {
            id.push_str(&format!("/{k}={}", v.as_str().map_or_else(|| v.to_string(), str::to_owned)));
        }
        id
    }

    /// The same states judged against an eavesdropper lacking both frames.
    ///
    /// Any scheme private against one of the two twirls is private against
    /// their composition, with `ρ₀` replaced by its image under the other.
    pub fn for_both(&self) -> Result<ClassicalScheme> {
        let t = crate::schurweyl::SchurTransform::shared(self.n_qubits)?;
        let rho0 = crate::twirl::twirl_both_exact(&self.claimed_rho0, &t)?;
        Ok(ClassicalScheme { srf: SrfKind::Both, claimed_rho0: rho0, ..self.clone() })
    }
}

pub(crate) fn params_from<const K: usize>(pairs: [(&str, Value); K]) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_owned(), v)).collect()
}
