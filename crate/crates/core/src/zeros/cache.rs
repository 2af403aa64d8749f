//! On-disk zero tables: one CSV per `(bc, n, tol)` with rows `m,k`.
//!
//! New rows are staged in memory and written on `flush` (or drop). Writers take
//! a per-file lock, re-read the file, merge by `m` and replace it atomically
//! through a rename, so concurrent writers never drop each other's rows.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use super::BoundaryCondition;
use crate::output::{fmt_sig17, parse_f64};
use crate::{Error, Result};

type Key = (BoundaryCondition, u32);

#[derive(Debug)]
pub struct ZeroCache {
    dir: PathBuf,
    tol: f64,
    tables: RwLock<HashMap<Key, Arc<BTreeMap<u32, f64>>>>,
    locks: Mutex<HashMap<Key, Arc<Mutex<()>>>>,
    pending: Mutex<BTreeMap<Key, Vec<(u32, f64)>>>,
    tmp_counter: AtomicU64,
}

impl ZeroCache {
    pub fn open(dir: impl Into<PathBuf>, tol: f64) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(ZeroCache {
            dir,
            tol,
            tables: RwLock::new(HashMap::new()),
            locks: Mutex::new(HashMap::new()),
            pending: Mutex::new(BTreeMap::new()),
            tmp_counter: AtomicU64::new(0),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, bc: BoundaryCondition, n: u32) -> PathBuf {
        self.dir.join(format!("{bc}_n{n}_tol{:e}.csv", self.tol))
    }

    pub fn get(&self, bc: BoundaryCondition, n: u32, m: u32) -> Result<Option<f64>> {
        Ok(self.table(bc, n)?.get(&m).copied())
    }

    /// All cached rows for `(bc, n)`.
    pub fn table(&self, bc: BoundaryCondition, n: u32) -> Result<Arc<BTreeMap<u32, f64>>> {
        if let Some(t) = self.tables.read().expect("cache lock").get(&(bc, n)) {
            return Ok(Arc::clone(t));
        }
        let t = Arc::new(read_table(&self.path_for(bc, n))?);
        self.tables
            .write()
            .expect("cache lock")
            .insert((bc, n), Arc::clone(&t));
        Ok(t)
    }

    /// Make `rows` visible to `get` now and queue them for the next `flush`.
    pub fn stage(&self, bc: BoundaryCondition, n: u32, rows: &[(u32, f64)]) -> Result<()> {
        self.table(bc, n)?;
        let mut fresh = Vec::new();
        {
            let mut tables = self.tables.write().expect("cache lock");
            let current = tables.get(&(bc, n)).cloned().unwrap_or_default();
            let mut merged = (*current).clone();
            for &(m, k) in rows {
                if let std::collections::btree_map::Entry::Vacant(e) = merged.entry(m) {
                    e.insert(k);
                    fresh.push((m, k));
                }
            }
            if fresh.is_empty() {
                return Ok(());
            }
            tables.insert((bc, n), Arc::new(merged));
        }
        self.pending
            .lock()
            .expect("cache lock")
            .entry((bc, n))
            .or_default()
            .extend(fresh);
        Ok(())
    }

    /// Write every staged row to disk.
    pub fn flush(&self) -> Result<()> {
        let pending = std::mem::take(&mut *self.pending.lock().expect("cache lock"));
        for ((bc, n), rows) in pending {
            self.put(bc, n, &rows)?;
        }
        Ok(())
    }

    /// Merge `rows` into the file for `(bc, n)` immediately. Rows already on disk win.
    pub fn put(&self, bc: BoundaryCondition, n: u32, rows: &[(u32, f64)]) -> Result<()> {
        let lock = {
            let mut locks = self.locks.lock().expect("cache lock");
            Arc::clone(locks.entry((bc, n)).or_default())
        };
        let _guard = lock.lock().expect("file lock");
        let path = self.path_for(bc, n);
        let mut merged = read_table(&path)?;
        let before = merged.len();
        for &(m, k) in rows {
            merged.entry(m).or_insert(k);
        }
        if merged.len() != before || !path.exists() {
            let tmp = self.dir.join(format!(
                ".{}.{}.{}.tmp",
                path.file_name().and_then(|s| s.to_str()).unwrap_or("zeros"),
                std::process::id(),
                self.tmp_counter.fetch_add(1, Ordering::Relaxed)
            ));
            {
                let mut f = fs::File::create(&tmp)?;
                f.write_all(render(&merged).as_bytes())?;
                f.sync_all()?;
            }
            fs::rename(&tmp, &path)?;
        }
        self.tables
            .write()
            .expect("cache lock")
            .insert((bc, n), Arc::new(merged));
        Ok(())
    }
}

impl Drop for ZeroCache {
    fn drop(&mut self) {
        let _ = self.flush();
    }
}

fn render(rows: &BTreeMap<u32, f64>) -> String {
    let mut s = String::from("m,k\n");
    for (m, k) in rows {
        s.push_str(&format!("{m},{}\n", fmt_sig17(*k)));
    }
    s
}

fn read_table(path: &Path) -> Result<BTreeMap<u32, f64>> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(BTreeMap::new()),
        Err(e) => return Err(e.into()),
    };
    let bad = |detail: String| Error::Parse {
        path: path.to_path_buf(),
        detail,
    };
    let mut lines = text.lines();
    match lines.next() {
        Some("m,k") | None => {}
        Some(h) => return Err(bad(format!("unexpected header '{h}'"))),
    }
    let mut out = BTreeMap::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let (m, k) = line
            .split_once(',')
            .ok_or_else(|| bad(format!("line {}: expected 'm,k'", i + 2)))?;
        let m: u32 = m
            .parse()
            .map_err(|_| bad(format!("line {}: bad index '{m}'", i + 2)))?;
        let k = parse_f64(k).map_err(|e| bad(format!("line {}: {e}", i + 2)))?;
        out.insert(m, k);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn staged_rows_reach_disk_on_flush() {
        let dir = tempfile::tempdir().unwrap();
        let c = ZeroCache::open(dir.path(), 1e-12).unwrap();
        c.stage(BoundaryCondition::Neumann, 4, &[(2, 8.5), (1, 5.25)])
            .unwrap();
        assert_eq!(c.get(BoundaryCondition::Neumann, 4, 2).unwrap(), Some(8.5));
        let path = c.path_for(BoundaryCondition::Neumann, 4);
        assert!(!path.exists());
        c.flush().unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "m,k\n1,5.25\n2,8.5\n");
        c.stage(BoundaryCondition::Neumann, 5, &[(1, 7.0)]).unwrap();
        drop(c);
        assert!(dir.path().join("neumann_n5_tol1e-12.csv").exists());
    }

    #[test]
    fn merge_keeps_rows_from_both_writers() {
        let dir = tempfile::tempdir().unwrap();
        let a = ZeroCache::open(dir.path(), 1e-12).unwrap();
        let b = ZeroCache::open(dir.path(), 1e-12).unwrap();
        a.put(BoundaryCondition::Dirichlet, 3, &[(1, 6.5), (2, 9.75)])
            .unwrap();
        b.put(BoundaryCondition::Dirichlet, 3, &[(5, 19.4)])
            .unwrap();
        let c = ZeroCache::open(dir.path(), 1e-12).unwrap();
        let t = c.table(BoundaryCondition::Dirichlet, 3).unwrap();
        assert_eq!(t.keys().copied().collect::<Vec<_>>(), vec![1, 2, 5]);
        let text = fs::read_to_string(c.path_for(BoundaryCondition::Dirichlet, 3)).unwrap();
        assert!(text.starts_with("m,k\n1,6.5\n"));
    }

    #[test]
    fn corrupt_file_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let c = ZeroCache::open(dir.path(), 1e-12).unwrap();
        fs::write(c.path_for(BoundaryCondition::Neumann, 0), "m,k\n1,abc\n").unwrap();
        assert!(matches!(
            c.get(BoundaryCondition::Neumann, 0, 1),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn tolerance_is_part_of_the_file_name() {
        let dir = tempfile::tempdir().unwrap();
        let a = ZeroCache::open(dir.path(), 1e-12).unwrap();
        let b = ZeroCache::open(dir.path(), 1e-10).unwrap();
        assert_ne!(
            a.path_for(BoundaryCondition::Dirichlet, 1),
            b.path_for(BoundaryCondition::Dirichlet, 1)
        );
    }
}
