//! Content-addressed store of Leja sequences.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant, SystemTime};

use sha2::{Digest, Sha256};

use super::csv_out::write_atomic;
use crate::extremal::{leja_points, NodeKind, NodeSequence};
use crate::sets::{build_mesh, CompactSetSpec, Mesh, MeshRole};
use crate::{Complex, Error, Result};

const FORMAT: &str = "potapprox-nodes 1";
const LOCK_WAIT: Duration = Duration::from_secs(60);
const LOCK_STALE: Duration = Duration::from_secs(600);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Miss,
    /// A record existed but failed verification and was replaced.
    Recomputed(String),
}

#[derive(Clone, Debug)]
pub struct NodeCache {
    dir: PathBuf,
}

struct LockGuard(PathBuf);

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

fn checksum(body: &str) -> String {
    hex::encode(Sha256::digest(body.as_bytes()))
}

impl NodeCache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Key of the mesh the nodes are drawn from; the degree is not part of it.
    pub fn key(spec: &CompactSetSpec, resolution: f64) -> String {
        let material = format!(
            "{FORMAT}\n{}\nboundary\n{:016x}\nleja",
            spec.fingerprint(),
            resolution.to_bits()
        );
        checksum(&material)
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.nodes"))
    }

    fn lock(&self) -> Result<LockGuard> {
        let path = self.dir.join(".lock");
        let start = Instant::now();
        loop {
            match fs::OpenOptions::new().write(true).create_new(true).open(&path) {
                Ok(_) => return Ok(LockGuard(path)),
                Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                    let stale = fs::metadata(&path)
                        .and_then(|m| m.modified())
                        .ok()
                        .and_then(|t| SystemTime::now().duration_since(t).ok())
                        .is_some_and(|age| age > LOCK_STALE);
                    if stale {
                        let _ = fs::remove_file(&path);
                        continue;
                    }
                    if start.elapsed() > LOCK_WAIT {
                        return Err(Error::CacheRejected {
                            path,
                            reason: "timed out waiting for the cache lock".into(),
                        });
                    }
                    std::thread::sleep(Duration::from_millis(50));
                }
                Err(e) => return Err(e.into()),
            }
        }
    }

    /// Leja nodes of degree `degree` on the boundary mesh of `spec`, from the cache when a
    /// verified record of at least that degree exists.
    pub fn leja(
        &self,
        spec: &CompactSetSpec,
        resolution: f64,
        degree: usize,
    ) -> Result<(Arc<NodeSequence>, CacheStatus)> {
        let mesh = Arc::new(build_mesh(spec, MeshRole::Boundary, resolution)?);
        let key = Self::key(spec, resolution);
        let path = self.path_for(&key);
        let _guard = self.lock()?;
        let mut status = CacheStatus::Miss;
        if path.exists() {
            match read_record(&path, &key, &mesh) {
                Ok(ns) if ns.degree() >= degree => {
                    let ns = if ns.degree() == degree { ns } else { ns.truncated(degree)? };
                    return Ok((Arc::new(ns), CacheStatus::Hit));
                }
                Ok(_) => status = CacheStatus::Miss,
                Err(Error::CacheRejected { reason, .. }) => status = CacheStatus::Recomputed(reason),
                Err(e) => return Err(e),
            }
        }
        let ns = leja_points(&mesh, degree)?;
        write_atomic(&path, render_record(&key, &ns).as_bytes())?;
        Ok((Arc::new(ns), status))
    }
}

fn render_record(key: &str, ns: &NodeSequence) -> String {
    let mut body = format!("{FORMAT}\nkey {key}\nkind {}\ndegree {}\n", ns.kind.name(), ns.degree());
    for (&i, z) in ns.mesh_indices.iter().zip(&ns.nodes) {
        body.push_str(&format!("{i} {:016x} {:016x}\n", z.re.to_bits(), z.im.to_bits()));
    }
    let sum = checksum(&body);
    body.push_str(&format!("checksum {sum}\n"));
    body
}

fn read_record(path: &Path, key: &str, mesh: &Arc<Mesh>) -> Result<NodeSequence> {
    let reject = |reason: &str| Error::CacheRejected {
        path: path.to_path_buf(),
        reason: reason.to_string(),
    };
    let text = fs::read_to_string(path).map_err(|_| reject("unreadable"))?;
    let cut = text.rfind("checksum ").ok_or_else(|| reject("no checksum"))?;
    let (body, tail) = text.split_at(cut);
    if tail.trim_end() != format!("checksum {}", checksum(body)) {
        return Err(reject("checksum mismatch"));
    }
    let mut lines = body.lines();
    if lines.next() != Some(FORMAT) {
        return Err(reject("unknown format"));
    }
    if lines.next() != Some(&format!("key {key}")) {
        return Err(reject("key mismatch"));
    }
    if lines.next() != Some("kind leja") {
        return Err(reject("unexpected node kind"));
    }
    let degree: usize = lines
        .next()
        .and_then(|l| l.strip_prefix("degree "))
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| reject("bad degree line"))?;
    let mut nodes = Vec::with_capacity(degree + 1);
    let mut idx = Vec::with_capacity(degree + 1);
    for line in lines {
        let parts: Vec<&str> = line.split(' ').collect();
        let parsed = (|| {
            let i: usize = parts.first()?.parse().ok()?;
            let re = f64::from_bits(u64::from_str_radix(parts.get(1)?, 16).ok()?);
            let im = f64::from_bits(u64::from_str_radix(parts.get(2)?, 16).ok()?);
            Some((i, Complex::new(re, im)))
        })();
        let (i, z) = parsed.ok_or_else(|| reject("bad node line"))?;
        // the node must be the mesh point it claims to be
        if mesh.points.get(i) != Some(&z) {
            return Err(reject("node does not match the mesh"));
        }
        idx.push(i);
        nodes.push(z);
    }
    if nodes.len() != degree + 1 {
        return Err(reject("node count does not match degree"));
    }
    let mut ns = NodeSequence {
        nodes,
        kind: NodeKind::Leja,
        log_nodal_supnorm: 0.0,
        mesh_indices: idx,
        source: mesh.clone(),
    };
    ns.log_nodal_supnorm = ns.recompute_log_nodal_supnorm();
    Ok(ns)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hit_miss_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = NodeCache::open(dir.path()).unwrap();
        let spec = CompactSetSpec::unit_disk();
        let (a, s1) = cache.leja(&spec, 0.05, 20).unwrap();
        assert_eq!(s1, CacheStatus::Miss);
        let (b, s2) = cache.leja(&spec, 0.05, 20).unwrap();
        assert_eq!(s2, CacheStatus::Hit);
        assert_eq!(a.nodes, b.nodes);
        let (c, s3) = cache.leja(&spec, 0.05, 10).unwrap();
        assert_eq!(s3, CacheStatus::Hit);
        assert_eq!(c.nodes[..], a.nodes[..11]);

        let path = cache.path_for(&NodeCache::key(&spec, 0.05));
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, text.replacen("3ff0", "3ff1", 1)).unwrap();
        let (d, s4) = cache.leja(&spec, 0.05, 20).unwrap();
        assert!(matches!(s4, CacheStatus::Recomputed(_)), "{s4:?}");
        assert_eq!(d.nodes, a.nodes);

        assert_ne!(NodeCache::key(&spec, 0.05), NodeCache::key(&spec, 0.025));
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
