use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::SpatialError;
use crate::ingest::FileEntry;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "rule", content = "paths")]
pub enum OrderingRule {
    #[default]
    Alphabetical,
    DirectoryStructure,
    Manual(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileOrder {
    pub ordering_rule: OrderingRule,
    pub ordered_files: Vec<FileEntry>,
}

/// Depth-first tree order: at each level the files of a directory come
/// first, then its subdirectories; names compare byte-wise.
fn tree_cmp(a: &str, b: &str) -> Ordering {
    let ca: Vec<&str> = a.split('/').collect();
    let cb: Vec<&str> = b.split('/').collect();
    for i in 0..ca.len().min(cb.len()) {
        let a_is_dir = i + 1 < ca.len();
        let b_is_dir = i + 1 < cb.len();
        let ord = a_is_dir
            .cmp(&b_is_dir)
            .then_with(|| ca[i].as_bytes().cmp(cb[i].as_bytes()));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len())
}

pub fn build_order(manifest: &[FileEntry], rule: &OrderingRule) -> Result<FileOrder, SpatialError> {
    let mut files = manifest.to_vec();
    match rule {
        OrderingRule::Alphabetical => files.sort_by(|a, b| a.path.as_bytes().cmp(b.path.as_bytes())),
        OrderingRule::DirectoryStructure => files.sort_by(|a, b| tree_cmp(&a.path, &b.path)),
        OrderingRule::Manual(paths) => {
            let listed: BTreeSet<&str> = paths.iter().map(String::as_str).collect();
            let have: BTreeSet<&str> = manifest.iter().map(|f| f.path.as_str()).collect();
            if listed.len() != paths.len() || listed != have {
                let missing: Vec<&str> = have.difference(&listed).copied().collect();
                let extra: Vec<&str> = listed.difference(&have).copied().collect();
                return Err(SpatialError::ManualOrderIncomplete(format!(
                    "missing {missing:?}, unknown {extra:?}, {} duplicate entries",
                    paths.len() - listed.len()
                )));
            }
            files = paths
                .iter()
                .map(|p| manifest.iter().find(|f| &f.path == p).cloned().expect("checked above"))
                .collect();
        }
    }
    Ok(FileOrder {
        ordering_rule: rule.clone(),
        ordered_files: files,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paths(order: &FileOrder) -> Vec<&str> {
        order.ordered_files.iter().map(|f| f.path.as_str()).collect()
    }

    fn manifest(names: &[&str]) -> Vec<FileEntry> {
        names.iter().map(|n| FileEntry::new(*n, 10)).collect()
    }

    #[test]
    fn alphabetical() {
        let o = build_order(&manifest(&["b.java", "a.java"]), &OrderingRule::Alphabetical).unwrap();
        assert_eq!(paths(&o), ["a.java", "b.java"]);
    }

    #[test]
    fn directory_structure() {
        let o = build_order(
            &manifest(&["src/z.java", "README.md", "src/a.java"]),
            &OrderingRule::DirectoryStructure,
        )
        .unwrap();
        assert_eq!(paths(&o), ["README.md", "src/a.java", "src/z.java"]);

        let o = build_order(
            &manifest(&["src/b/x.java", "src/a.java", "src/c/y.java", "lib/q.java", "Z.md"]),
            &OrderingRule::DirectoryStructure,
        )
        .unwrap();
        assert_eq!(paths(&o), ["Z.md", "lib/q.java", "src/a.java", "src/b/x.java", "src/c/y.java"]);
    }

    #[test]
    fn manual() {
        let rule = OrderingRule::Manual(vec!["b".into(), "a".into()]);
        let o = build_order(&manifest(&["a", "b"]), &rule).unwrap();
        assert_eq!(paths(&o), ["b", "a"]);

        let partial = OrderingRule::Manual(vec!["b".into()]);
        assert!(matches!(build_order(&manifest(&["a", "b"]), &partial), Err(SpatialError::ManualOrderIncomplete(_))));
        let dup = OrderingRule::Manual(vec!["a".into(), "b".into(), "a".into()]);
        assert!(build_order(&manifest(&["a", "b"]), &dup).is_err());
    }

    #[test]
    fn deterministic_regardless_of_manifest_order() {
        let a = manifest(&["x/y.rs", "a.rs", "x/b.rs", "m/n/o.rs"]);
        let mut b = a.clone();
        b.reverse();
        for rule in [OrderingRule::Alphabetical, OrderingRule::DirectoryStructure] {
            assert_eq!(build_order(&a, &rule).unwrap(), build_order(&b, &rule).unwrap());
        }
    }
}
