//! JSON file formats. Agents and goods are 1-based on disk, 0-based in memory.

use std::fmt;
use std::fs;
use std::path::Path;

use maximin_core::{Allocation, CertificateMode, Instance, MaximinCertificate};
use serde::{Deserialize, Serialize};

#[derive(Debug)]
pub enum FileError {
    Io(std::io::Error),
    Json(serde_json::Error),
    Format(String),
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FileError::Io(e) => write!(f, "{e}"),
            FileError::Json(e) => write!(f, "malformed JSON: {e}"),
            FileError::Format(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for FileError {}

impl From<std::io::Error> for FileError {
    fn from(e: std::io::Error) -> Self {
        FileError::Io(e)
    }
}

impl From<serde_json::Error> for FileError {
    fn from(e: serde_json::Error) -> Self {
        FileError::Json(e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    pub m: usize,
    pub scale: u64,
    pub valuations: Vec<Vec<u64>>,
}

impl InstanceFile {
    pub fn from_instance(instance: &Instance) -> Self {
        InstanceFile {
            n: instance.agents(),
            m: instance.goods(),
            scale: instance.scale(),
            valuations: instance
                .rows()
                .map(|row| row.iter().map(|v| v.get()).collect())
                .collect(),
        }
    }

    pub fn to_instance(&self) -> Result<Instance, FileError> {
        if self.valuations.len() != self.n {
            return Err(FileError::Format(format!(
                "n is {} but there are {} valuation rows",
                self.n,
                self.valuations.len()
            )));
        }
        if let Some((i, row)) = self.valuations.iter().enumerate().find(|(_, r)| r.len() != self.m) {
            return Err(FileError::Format(format!(
                "m is {} but row {} has {} entries",
                self.m,
                i + 1,
                row.len()
            )));
        }
        Instance::new(self.valuations.clone(), self.scale).map_err(|e| FileError::Format(e.to_string()))
    }
}

pub fn read_instance(path: &Path) -> Result<Instance, FileError> {
    let text = fs::read_to_string(path)?;
    let file: InstanceFile = serde_json::from_str(&text)?;
    file.to_instance()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub agent: usize,
    pub value: u64,
    /// Smallest integer value meeting the agent's guarantee.
    pub threshold: u64,
}

/// Solver output. Field order is the key order on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllocationFile {
    pub bundles: Vec<Vec<usize>>,
    pub certificates: Vec<Certificate>,
    /// Present when the thresholds rest on a lower bound instead of exact shares.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guarantee: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<serde_json::Value>,
}

impl AllocationFile {
    /// Converts 1-based bundles back to an allocation, checking index range.
    pub fn allocation(&self, goods: usize) -> Result<Allocation, FileError> {
        let mut bundles = Vec::with_capacity(self.bundles.len());
        for (i, bundle) in self.bundles.iter().enumerate() {
            let mut zero = Vec::with_capacity(bundle.len());
            for &g in bundle {
                if g == 0 || g > goods {
                    return Err(FileError::Format(format!(
                        "bundle {} holds good {g}, outside 1..={goods}",
                        i + 1
                    )));
                }
                zero.push(g - 1);
            }
            bundles.push(zero);
        }
        Ok(Allocation::new(bundles))
    }
}

pub fn one_based(bundles: &[Vec<usize>]) -> Vec<Vec<usize>> {
    bundles
        .iter()
        .map(|b| b.iter().map(|g| g + 1).collect())
        .collect()
}

pub fn read_allocation(path: &Path) -> Result<AllocationFile, FileError> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub agent: usize,
    pub k: usize,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<String>,
    pub value: u64,
    pub witness: Vec<Vec<usize>>,
}

impl CertificateFile {
    pub fn new(agent: usize, k: usize, cert: &MaximinCertificate) -> Self {
        let (mode, eps) = match cert.mode {
            CertificateMode::Exact => ("exact", None),
            CertificateMode::Ptas(eps) => ("ptas", Some(eps.to_string())),
            CertificateMode::Greedy => ("greedy", None),
        };
        CertificateFile {
            agent: agent + 1,
            k,
            mode: mode.to_string(),
            eps,
            value: cert.value.get(),
            witness: one_based(&cert.witness),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_round_trip() {
        let inst = Instance::from_rows(&[&[4, 3, 2, 1], &[1, 2, 3, 4]]).unwrap();
        let file = InstanceFile::from_instance(&inst);
        let text = to_json(&file);
        let back: InstanceFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_instance().unwrap(), inst);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let file = InstanceFile {
            n: 2,
            m: 2,
            scale: 1,
            valuations: vec![vec![1, 2], vec![3]],
        };
        let err = file.to_instance().unwrap_err().to_string();
        assert!(err.contains("row 2"), "{err}");
        let file = InstanceFile { n: 3, ..file };
        assert!(file.to_instance().is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = r#"{"n":1,"m":1,"scale":1,"valuations":[[1]],"extra":0}"#;
        assert!(serde_json::from_str::<InstanceFile>(text).is_err());
    }

    #[test]
    fn allocation_indices_are_checked() {
        let file = AllocationFile {
            bundles: vec![vec![1, 3], vec![2]],
            certificates: vec![],
            guarantee: None,
            trace: None,
        };
        assert_eq!(file.allocation(3).unwrap().bundles(), &[vec![0, 2], vec![1]]);
        assert!(file.allocation(2).is_err());
        let zero = AllocationFile {
            bundles: vec![vec![0]],
            ..file
        };
        assert!(zero.allocation(3).is_err());
    }

    #[test]
    fn key_order_is_fixed() {
        let file = AllocationFile {
            bundles: vec![vec![1]],
            certificates: vec![Certificate {
                agent: 1,
                value: 3,
                threshold: 2,
            }],
            guarantee: None,
            trace: None,
        };
        let text = serde_json::to_string(&file).unwrap();
        assert_eq!(
            text,
            r#"{"bundles":[[1]],"certificates":[{"agent":1,"value":3,"threshold":2}]}"#
        );
    }
}
