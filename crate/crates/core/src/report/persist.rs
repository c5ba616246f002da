use std::collections::{BTreeMap, HashSet};
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigUint;

use super::record::{completed_decompositions, VerificationRecord};
use crate::error::{Error, Result};
use crate::number::factor::KnownDecompositions;

/// `<out>.kernels.tsv`
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".kernels.tsv");
    PathBuf::from(s)
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn existing_keys(path: &Path) -> Result<HashSet<String>> {
    let mut keys = HashSet::new();
    if !path.exists() {
        return Ok(keys);
    }
    let file = fs::File::open(path).map_err(io(path))?;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value = serde_json::from_str(&line).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?;
        match value.get("subject_key").and_then(|k| k.as_str()) {
            Some(k) => keys.insert(k.to_string()),
            None => {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: i + 1,
                    message: "record has no subject_key".into(),
                })
            }
        };
    }
    Ok(keys)
}

/// Appends records whose subject key is not yet in the file, then merges
/// their completed squarefree decompositions into the sidecar cache.
pub fn persist_records(records: &[VerificationRecord], path: &Path) -> Result<()> {
    let mut seen = existing_keys(path)?;
    let mut file = OpenOptions::new().create(true).append(true).open(path).map_err(io(path))?;
    let mut buf = String::new();
    for r in records {
        if seen.insert(r.subject_key.clone()) {
            buf.push_str(&r.to_json_line());
            buf.push('\n');
        }
    }
    file.write_all(buf.as_bytes()).map_err(io(path))?;

    let fresh = completed_decompositions(records);
    let sidecar = sidecar_path(path);
    if fresh.is_empty() && !sidecar.exists() {
        return Ok(());
    }
    let mut entries: BTreeMap<BigUint, (String, String)> = BTreeMap::new();
    for (radicand, (kernel, root)) in read_sidecar(&sidecar)? {
        entries.insert(radicand, (kernel.to_string(), root.to_string()));
    }
    for (radicand, kernel, root) in fresh {
        if let Ok(n) = radicand.parse::<BigUint>() {
            entries.entry(n).or_insert((kernel, root));
        }
    }
    let mut out = String::new();
    for (radicand, (kernel, root)) in &entries {
        out.push_str(&format!("{radicand}\t{kernel}\t{root}\n"));
    }
    fs::write(&sidecar, out).map_err(io(&sidecar))
}

fn read_sidecar(path: &Path) -> Result<Vec<(BigUint, (BigUint, BigUint))>> {
    let mut out = Vec::new();
    if !path.exists() {
        return Ok(out);
    }
    let text = fs::read_to_string(path).map_err(io(path))?;
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(parse_err(format!("expected 3 tab-separated fields, found {}", fields.len())));
        }
        let nums = fields
            .iter()
            .map(|f| f.trim_start_matches('-').parse::<BigUint>().map_err(|e| parse_err(format!("{f:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let (n, k, s) = (&nums[0], &nums[1], &nums[2]);
        if &(k * s * s) != n {
            return Err(parse_err(format!("{k}·{s}² ≠ {n}")));
        }
        out.push((n.clone(), (k.clone(), s.clone())));
    }
    Ok(out)
}

/// Reads a sidecar cache into the map consulted by the factoring budget.
pub fn load_kernel_cache(path: &Path) -> Result<KnownDecompositions> {
    Ok(read_sidecar(path)?.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::record::{family_record, Stamp};
    use crate::families::{family_b, VerifyOptions};

    #[test]
    fn empty_list_creates_empty_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.jsonl");
        persist_records(&[], &path).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "");
        assert!(!sidecar_path(&path).exists());
    }

    #[test]
    fn dedup_and_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.jsonl");
        let opts = VerifyOptions::default();
        let recs: Vec<_> = (1..=3).map(|y| family_record(&family_b(y, &opts).unwrap(), Stamp::default())).collect();
        persist_records(&recs, &path).unwrap();
        let first = fs::read_to_string(&path).unwrap();
        persist_records(&recs, &path).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), first);
        assert_eq!(first.lines().count(), 3);

        let cache = load_kernel_cache(&sidecar_path(&path)).unwrap();
        assert_eq!(cache.len(), 3);
        assert!(cache.contains_key(&"2635".parse::<BigUint>().unwrap()));
    }

    #[test]
    fn bad_sidecar_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.tsv");
        fs::write(&path, "12\t3\t3\n").unwrap();
        assert!(matches!(load_kernel_cache(&path), Err(Error::Parse { line: 1, .. })));
    }
}
