//! Binary cache of built grids.
//!
//! Layout, all little-endian: the magic bytes, then `version: u32`,
//! `gl_order: u32`, `t_max: f64`, `rel_tol: f64`, `abs_tol: f64`,
//! `panels_per_oscillation: u32`, a reserved `u32`, `panels: u64`, followed by
//! the `bounds`, `cumulative` and `samples` arrays as `f64`.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::{CumulativeZGrid, QuadratureSpec, GL_ORDER, GRID_FORMAT_VERSION};
use crate::error::{Error, Result};

pub const GRID_MAGIC: &[u8; 8] = b"JLZGRID\n";

/// How [`load_or_build`] obtained its grid.
#[derive(Debug, Clone, PartialEq)]
pub enum CacheOutcome {
    Loaded,
    Built,
    /// A cache file existed but could not be used.
    Rebuilt { reason: String },
}

/// File name of the cache entry for a grid.
pub fn cache_file_name(t_max: f64, spec: &QuadratureSpec) -> String {
    let mut h = Sha256::new();
    h.update(GRID_FORMAT_VERSION.to_le_bytes());
    h.update(t_max.to_le_bytes());
    h.update(spec.rel_tol.to_le_bytes());
    h.update(spec.abs_tol.to_le_bytes());
    h.update(spec.panels_per_oscillation.to_le_bytes());
    let digest = h.finalize();
    let hex: String = digest.iter().take(16).map(|b| format!("{b:02x}")).collect();
    format!("grid-{hex}.bin")
}

/// Load the grid for `(t_max, spec)` from `dir`, building and saving it when
/// the file is missing or unusable.
pub fn load_or_build(dir: &Path, t_max: f64, spec: QuadratureSpec) -> Result<(CumulativeZGrid, CacheOutcome)> {
    spec.validate()?;
    let path = dir.join(cache_file_name(t_max, &spec));
    let outcome = if path.exists() {
        match CumulativeZGrid::load(&path) {
            Ok(g) if g.t_max.to_bits() == t_max.to_bits() && g.spec == spec => {
                return Ok((g, CacheOutcome::Loaded))
            }
            Ok(_) => CacheOutcome::Rebuilt {
                reason: "cache header does not match the request".into(),
            },
            Err(e) => CacheOutcome::Rebuilt { reason: e.to_string() },
        }
    } else {
        CacheOutcome::Built
    };
    if let CacheOutcome::Rebuilt { reason } = &outcome {
        log::warn!("rebuilding grid cache {}: {reason}", path.display());
    }
    let grid = super::build_grid(t_max, spec)?;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    grid.save(&path)?;
    Ok((grid, outcome))
}

fn put_f64s(w: &mut impl Write, xs: &[f64]) -> std::io::Result<()> {
    for x in xs {
        w.write_all(&x.to_le_bytes())?;
    }
    Ok(())
}

struct Reader<R> {
    inner: R,
    path: PathBuf,
}

impl<R: Read> Reader<R> {
    fn bytes<const N: usize>(&mut self) -> Result<[u8; N]> {
        let mut buf = [0u8; N];
        self.inner.read_exact(&mut buf).map_err(|e| self.truncated(e))?;
        Ok(buf)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.bytes()?))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.bytes()?))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.bytes()?))
    }

    fn f64s(&mut self, n: usize) -> Result<Vec<f64>> {
        let mut raw = vec![0u8; n * 8];
        self.inner.read_exact(&mut raw).map_err(|e| self.truncated(e))?;
        Ok(raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }

    fn truncated(&self, e: std::io::Error) -> Error {
        self.format(format!("truncated file ({e})"))
    }

    fn format(&self, detail: String) -> Error {
        Error::Format {
            path: self.path.clone(),
            detail,
        }
    }
}

impl CumulativeZGrid {
    /// Write the grid atomically (temporary file, then rename).
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        let write = || -> std::io::Result<()> {
            let mut w = BufWriter::new(File::create(&tmp)?);
            w.write_all(GRID_MAGIC)?;
            w.write_all(&GRID_FORMAT_VERSION.to_le_bytes())?;
            w.write_all(&(GL_ORDER as u32).to_le_bytes())?;
            w.write_all(&self.t_max.to_le_bytes())?;
            w.write_all(&self.spec.rel_tol.to_le_bytes())?;
            w.write_all(&self.spec.abs_tol.to_le_bytes())?;
            w.write_all(&self.spec.panels_per_oscillation.to_le_bytes())?;
            w.write_all(&0u32.to_le_bytes())?;
            w.write_all(&(self.panel_count() as u64).to_le_bytes())?;
            put_f64s(&mut w, &self.bounds)?;
            put_f64s(&mut w, &self.cumulative)?;
            put_f64s(&mut w, &self.samples)?;
            w.into_inner().map_err(|e| e.into_error())?.sync_all()
        };
        if let Err(e) = write() {
            let _ = fs::remove_file(&tmp);
            return Err(Error::io(&tmp, e));
        }
        fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
    }

    /// Read a grid written by [`CumulativeZGrid::save`].
    pub fn load(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut r = Reader {
            inner: BufReader::new(file),
            path: path.to_path_buf(),
        };
        let magic: [u8; 8] = r.bytes()?;
        if &magic != GRID_MAGIC {
            return Err(r.format("bad magic".into()));
        }
        let version = r.u32()?;
        if version != GRID_FORMAT_VERSION {
            return Err(r.format(format!("version {version}, expected {GRID_FORMAT_VERSION}")));
        }
        let order = r.u32()?;
        if order as usize != GL_ORDER {
            return Err(r.format(format!("quadrature order {order}, expected {GL_ORDER}")));
        }
        let t_max = r.f64()?;
        let spec = QuadratureSpec {
            rel_tol: r.f64()?,
            abs_tol: r.f64()?,
            panels_per_oscillation: r.u32()?,
        };
        let _reserved = r.u32()?;
        let panels = r.u64()? as usize;
        if panels == 0 || panels > (1 << 34) {
            return Err(r.format(format!("implausible panel count {panels}")));
        }
        let bounds = r.f64s(panels + 1)?;
        let cumulative = r.f64s(panels + 1)?;
        let samples = r.f64s(panels * GL_ORDER)?;
        let mut rest = [0u8; 1];
        if r.inner.read(&mut rest).map_err(|e| Error::io(path, e))? != 0 {
            return Err(r.format("trailing bytes".into()));
        }
        let sane = bounds.windows(2).all(|w| w[0] < w[1])
            && bounds.last().map(|b| b.to_bits()) == Some(t_max.to_bits())
            && cumulative.iter().chain(&samples).all(|v| v.is_finite());
        if !sane {
            return Err(r.format("inconsistent grid contents".into()));
        }
        Ok(CumulativeZGrid::assemble(t_max, spec, bounds, cumulative, samples))
    }
}
