//! On-disk cache of Hurwitz class numbers, enabled by pointing
//! `SHEAFWC_HURWITZ_CACHE` at a directory.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sheafwc_core::modular::HurwitzCache;
use sheafwc_core::Rational;

pub const ENV_VAR: &str = "SHEAFWC_HURWITZ_CACHE";
const FILE_NAME: &str = "hurwitz.json";

#[derive(Serialize, Deserialize)]
struct CacheFile {
    /// `H(0), H(1), ...` as "p/q" strings.
    values: Vec<String>,
}

fn read(path: &Path) -> Result<Vec<Rational>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: CacheFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    file.values
        .iter()
        .map(|s| s.parse::<Rational>().map_err(|_| anyhow::anyhow!("bad value {s:?} in {}", path.display())))
        .collect()
}

fn write(path: &Path, values: &[Rational]) -> Result<()> {
    let file = CacheFile {
        values: values.iter().map(Rational::to_string).collect(),
    };
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_string(&file)?).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("replacing {}", path.display()))?;
    Ok(())
}

/// `H(0..=bound)`, read from `dir` when it already holds enough values and
/// written back when it does not.
pub fn load_or_build(dir: &Path, bound: u64) -> Result<HurwitzCache> {
    let path = dir.join(FILE_NAME);
    if path.exists() {
        let values = read(&path)?;
        if values.len() as u64 > bound {
            return Ok(HurwitzCache::from_values(values));
        }
    }
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let cache = HurwitzCache::new(bound);
    write(&path, cache.values())?;
    Ok(cache)
}

/// The cache selected by the environment, or an empty one.
pub fn from_env(bound: u64) -> Result<HurwitzCache> {
    match std::env::var_os(ENV_VAR) {
        Some(dir) if !dir.is_empty() => load_or_build(&PathBuf::from(dir), bound),
        _ => Ok(HurwitzCache::from_values(Vec::new())),
    }
}
