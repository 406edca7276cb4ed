use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::quantum::QuantumScheme;
use super::ClassicalScheme;
use crate::error::{check_dim, Error, Result};
use crate::matcore::io::MatrixJson;
use crate::matcore::{ComplexMatrix, DensityMatrix, Ket};
use crate::schurweyl::{max_qubits, SchurTransform};
use crate::twirl::SrfKind;

/// Either kind of scheme, as stored on disk.
#[derive(Clone, Debug)]
pub enum Scheme {
    Classical(ClassicalScheme),
    Quantum(QuantumScheme),
}

impl Scheme {
    pub fn n_qubits(&self) -> usize {
        match self {
            Scheme::Classical(s) => s.n_qubits(),
            Scheme::Quantum(q) => q.n_qubits(),
        }
    }

    pub fn srf(&self) -> SrfKind {
        match self {
            Scheme::Classical(s) => s.srf(),
            Scheme::Quantum(q) => q.srf(),
        }
    }

    pub fn id(&self) -> String {
        match self {
            Scheme::Classical(s) => s.id(),
            Scheme::Quantum(q) => q.id(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KetJson {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&Ket> for KetJson {
    fn from(k: &Ket) -> Self {
        KetJson { re: k.amplitudes().iter().map(|z| z.re).collect(), im: k.amplitudes().iter().map(|z| z.im).collect() }
    }
}

impl KetJson {
    fn to_ket(&self) -> Result<Ket> {
        if self.re.len() != self.im.len() {
            return Err(Error::Format("state re/im lengths differ".into()));
        }
        Ket::new(self.re.iter().zip(&self.im).map(|(&r, &i)| Complex64::new(r, i)).collect())
            .map_err(|e| Error::Format(format!("state: {e}")))
    }
}

/// On-disk scheme layout. Classical schemes carry `states`; quantum schemes
/// carry `isometry` and `target_two_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeRecord {
    pub n: usize,
    pub superop: SrfKind,
    pub construction: String,
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub states: Vec<KetJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isometry: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_two_j: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ancilla_index: Option<usize>,
    pub rho0: MatrixJson,
}

impl From<&Scheme> for SchemeRecord {
    fn from(s: &Scheme) -> Self {
        match s {
            Scheme::Classical(c) => SchemeRecord {
                n: c.n_qubits(),
                superop: c.srf(),
                construction: c.construction().to_owned(),
                params: c.params().clone(),
                states: c.states().iter().map(KetJson::from).collect(),
                isometry: None,
                target_two_j: None,
                ancilla_index: None,
                rho0: c.claimed_rho0().matrix().into(),
            },
            Scheme::Quantum(q) => SchemeRecord {
                n: q.n_qubits(),
                superop: q.srf(),
                construction: "quantum".into(),
                params: Map::new(),
                states: Vec::new(),
                isometry: Some(q.isometry().into()),
                target_two_j: Some(q.target_block().two_j()),
                ancilla_index: q.ancilla_index(),
                rho0: q.claimed_rho0().matrix().into(),
            },
        }
    }
}

impl TryFrom<SchemeRecord> for Scheme {
    type Error = Error;

    fn try_from(r: SchemeRecord) -> Result<Self> {
        let limit = max_qubits();
        if r.n == 0 || r.n > limit {
            return Err(Error::Format(format!("n = {} outside 1..={limit}", r.n)));
        }
        let rho0 = ComplexMatrix::try_from(r.rho0)
            .and_then(DensityMatrix::new)
            .map_err(|e| Error::Format(format!("rho0: {e}")))?;
        let format = |e: Error| Error::Format(e.to_string());
        match (r.isometry, r.target_two_j) {
            (None, None) => {
                let states = r.states.iter().map(KetJson::to_ket).collect::<Result<Vec<_>>>()?;
                ClassicalScheme::new(r.n, r.superop, r.construction, r.params, states, rho0)
                    .map(Scheme::Classical)
                    .map_err(format)
            }
            (Some(v), Some(two_j)) => {
                if !r.states.is_empty() {
                    return Err(Error::Format("quantum scheme must not list states".into()));
                }
                let v = ComplexMatrix::try_from(v).map_err(format)?;
                let t = SchurTransform::shared(r.n).map_err(format)?;
                let block = *t.block(two_j).map_err(format)?;
                check_dim(1 << r.n, v.rows()).map_err(format)?;
                QuantumScheme::new(r.n, r.superop, v, block, r.ancilla_index, rho0)
                    .map(Scheme::Quantum)
                    .map_err(format)
            }
            _ => Err(Error::Format("quantum scheme needs both isometry and target_two_j".into())),
        }
    }
}

impl Scheme {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&SchemeRecord::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: SchemeRecord = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Scheme::try_from(record)
    }
}

pub fn write_scheme(scheme: &Scheme, path: &Path) -> Result<()> {
    std::fs::write(path, scheme.to_json()? + "\n")?;
    Ok(())
}

pub fn read_scheme(path: &Path) -> Result<Scheme> {
    Scheme::from_json(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::{quantum_scheme, three_qubit_octet};

    #[test]
    fn classical_round_trip_is_bit_exact() {
        let s = Scheme::Classical(three_qubit_octet().unwrap());
        let json = s.to_json().unwrap();
        let back = Scheme::from_json(&json).unwrap();
        let Scheme::Classical(c) = &back else { panic!("kind changed") };
        let Scheme::Classical(orig) = &s else { unreachable!() };
        for (a, b) in orig.states().iter().zip(c.states()) {
            for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
                assert_eq!(x.re.to_bits(), y.re.to_bits());
                assert_eq!(x.im.to_bits(), y.im.to_bits());
            }
        }
        assert_eq!(back.to_json().unwrap(), json);
    }

    #[test]
    fn quantum_round_trip() {
        let s = Scheme::Quantum(quantum_scheme(4, SrfKind::Perm).unwrap());
        let json = s.to_json().unwrap();
        assert_eq!(Scheme::from_json(&json).unwrap().to_json().unwrap(), json);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(Scheme::from_json("{"), Err(Error::Format(_))));
        let good = Scheme::Classical(three_qubit_octet().unwrap()).to_json().unwrap();
        let bad_kind = good.replace("\"su2\"", "\"u1\"");
        assert!(matches!(Scheme::from_json(&bad_kind), Err(Error::Format(_))));
        let mut record: SchemeRecord = serde_json::from_str(&good).unwrap();
        record.states[0].re[0] += 0.5;
        let unnormalized = serde_json::to_string(&record).unwrap();
        assert!(matches!(Scheme::from_json(&unnormalized), Err(Error::Format(_))));
        record.states[0].re[0] -= 0.5;
        record.states.truncate(1);
        let too_few = serde_json::to_string(&record).unwrap();
        assert!(matches!(Scheme::from_json(&too_few), Err(Error::Format(_))));
    }
}
