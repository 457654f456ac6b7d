//! Named forms and witness vectors stored as JSON next to a SHA-256
//! manifest. Every read is checked against the manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::forms::{QForm, FORMAT_VERSION};
use crate::linalg::{int_serde, IntVector};

pub const MANIFEST: &str = "MANIFEST.json";
pub const ENV_VAR: &str = "LATTICE_CATALOG";

/// A vector of `I_{p,q}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub format_version: u32,
    pub name: String,
    pub p: usize,
    pub q: usize,
    #[serde(with = "int_serde")]
    pub vector: IntVector,
}

impl Witness {
    pub fn new(name: &str, p: usize, q: usize, vector: IntVector) -> Self {
        Witness { format_version: FORMAT_VERSION, name: name.into(), p, q, vector }
    }

    /// Reads an unhashed witness file.
    pub fn from_file(path: &Path) -> Result<Self> {
        let w: Witness = serde_json::from_slice(&fs::read(path)?)?;
        w.check()?;
        Ok(w)
    }

    fn check(&self) -> Result<()> {
        if self.vector.len() != self.p + self.q {
            return Err(Error::DimensionMismatch { expected: self.p + self.q, found: self.vector.len() });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Manifest {
    format_version: u32,
    files: BTreeMap<String, String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug)]
pub struct Catalog {
    dir: PathBuf,
    files: BTreeMap<String, String>,
}

impl Catalog {
    /// `$LATTICE_CATALOG`, or the `catalog/` directory of the source tree.
    pub fn default_dir() -> PathBuf {
        match std::env::var_os(ENV_VAR) {
            Some(d) => PathBuf::from(d),
            None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../catalog"),
        }
    }

    pub fn open_default() -> Result<Self> {
        Self::open(&Self::default_dir())
    }

    pub fn open(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST);
        let bytes = fs::read(&path)
            .map_err(|e| Error::Catalog(format!("cannot read {}: {e}", path.display())))?;
        let manifest: Manifest = serde_json::from_slice(&bytes)?;
        Ok(Catalog { dir: dir.to_path_buf(), files: manifest.files })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn read(&self, file: &str) -> Result<Vec<u8>> {
        let expected = self
            .files
            .get(file)
            .ok_or_else(|| Error::Catalog(format!("{file} is not listed in the manifest")))?;
        let bytes = fs::read(self.dir.join(file))
            .map_err(|e| Error::Catalog(format!("cannot read {file}: {e}")))?;
        let actual = sha256_hex(&bytes);
        if &actual != expected {
            return Err(Error::Catalog(format!("{file}: hash {actual} does not match manifest {expected}")));
        }
        Ok(bytes)
    }

    /// The form stored as `<name>.json`.
    pub fn form(&self, name: &str) -> Result<QForm> {
        Ok(serde_json::from_slice(&self.read(&format!("{name}.json"))?)?)
    }

    /// The witness stored as `<name>_witness.json`.
    pub fn witness(&self, name: &str) -> Result<Witness> {
        let w: Witness = serde_json::from_slice(&self.read(&format!("{name}_witness.json"))?)?;
        w.check()?;
        Ok(w)
    }

    /// Re-hashes every file in the manifest.
    pub fn verify_all(&self) -> Result<()> {
        for file in self.files.keys() {
            self.read(file)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::standard_form;
    use crate::linalg::ivec;

    #[test]
    fn shipped_catalog() {
        let c = Catalog::open(&Path::new(env!("CARGO_MANIFEST_DIR")).join("../../catalog")).unwrap();
        c.verify_all().unwrap();
        let e8 = c.form("e8").unwrap();
        assert_eq!(e8.dim(), 8);
        let t = c.witness("leech").unwrap();
        assert_eq!((t.p, t.q), (24, 1));
        let q = standard_form(24, 1).unwrap();
        assert_eq!(q.evaluate_int(&t.vector).unwrap(), crate::Scalar::int(-1));
        assert_eq!(c.witness("e8").unwrap().vector, ivec(&[1, 1, 1, 1, 1, 1, 1, 1, 3]));
    }

    #[test]
    fn tampering_is_detected() {
        let dir = std::env::temp_dir().join(format!("unimod-catalog-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let w = Witness::new("x", 1, 1, ivec(&[0, 1]));
        let body = serde_json::to_vec(&w).unwrap();
        let manifest = Manifest {
            format_version: FORMAT_VERSION,
            files: [("x_witness.json".to_string(), sha256_hex(&body))].into(),
        };
        fs::write(dir.join(MANIFEST), serde_json::to_vec(&manifest).unwrap()).unwrap();
        fs::write(dir.join("x_witness.json"), &body).unwrap();
        let c = Catalog::open(&dir).unwrap();
        assert_eq!(c.witness("x").unwrap(), w);
        fs::write(dir.join("x_witness.json"), b"{}").unwrap();
        assert!(matches!(c.witness("x"), Err(Error::Catalog(_))));
        assert!(matches!(c.form("missing"), Err(Error::Catalog(_))));
        fs::remove_dir_all(&dir).unwrap();
    }
}
