//! On-disk JSON cache for sector decompositions and block transforms.
//!
//! Files are keyed by representation and format version. A file whose
//! recorded version or representation disagrees with the request is ignored
//! and overwritten.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::macwilliams::{block_macwilliams, BlockMacWilliams};
use crate::rep::{conjugation_sectors, Decomposition, Rep, RepSpec, SECTOR_FORMAT_VERSION};

pub const CACHE_ENV: &str = "IMW_CACHE_DIR";

#[derive(Clone, Debug, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    /// Uses `$IMW_CACHE_DIR` when set, otherwise `<tmp>/imw-cache`.
    pub fn from_env() -> Self {
        let dir = std::env::var_os(CACHE_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| std::env::temp_dir().join("imw-cache"));
        Self { dir: Some(dir) }
    }

    pub fn disabled() -> Self {
        Self { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Self {
            dir: Some(dir.into()),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn path(&self, kind: &str, spec: &RepSpec) -> Option<PathBuf> {
        self.dir
            .as_ref()
            .map(|d| d.join(format!("{kind}-{}-v{SECTOR_FORMAT_VERSION}.json", spec.key())))
    }

    fn load<T: serde::de::DeserializeOwned>(&self, path: &Option<PathBuf>) -> Option<T> {
        let text = fs::read_to_string(path.as_ref()?).ok()?;
        serde_json::from_str(&text).ok()
    }

    fn store<T: serde::Serialize>(&self, path: &Option<PathBuf>, value: &T) -> Result<()> {
        let Some(path) = path else { return Ok(()) };
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        // write then rename so a concurrent reader never sees a partial file
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(value)?)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn decomposition(&self, rep: &Rep) -> Result<Decomposition> {
        let path = self.path("sectors", &rep.spec);
        if let Some(dec) = self.load::<Decomposition>(&path) {
            if dec.format_version == SECTOR_FORMAT_VERSION && dec.spec == rep.spec {
                return Ok(dec);
            }
        }
        let dec = conjugation_sectors(rep)?;
        self.store(&path, &dec)?;
        Ok(dec)
    }

    pub fn block_macwilliams(&self, dec: &Decomposition) -> Result<BlockMacWilliams> {
        let path = self.path("block-m", &dec.spec);
        if let Some(bm) = self.load::<BlockMacWilliams>(&path) {
            if bm.provenance.basis_convention_version == SECTOR_FORMAT_VERSION
                && bm.provenance.rep == dec.spec.key()
            {
                return Ok(bm);
            }
        }
        let bm = block_macwilliams(dec)?;
        self.store(&path, &bm)?;
        Ok(bm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::su2_irrep;

    #[test]
    fn round_trip_and_stale_files() {
        let dir = std::env::temp_dir().join(format!("imw-cache-test-{}", std::process::id()));
        let cache = Cache::at(&dir);
        let rep = su2_irrep(3);
        let a = cache.decomposition(&rep).unwrap();
        let b = cache.decomposition(&rep).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let m1 = cache.block_macwilliams(&a).unwrap();
        let m2 = cache.block_macwilliams(&b).unwrap();
        assert_eq!(m1.m, m2.m);
        // a corrupt file is recomputed
        let path = cache.path("sectors", &rep.spec).unwrap();
        fs::write(&path, "{").unwrap();
        assert_eq!(cache.decomposition(&rep).unwrap().sectors.len(), 4);
        fs::remove_dir_all(&dir).unwrap();
    }
}
