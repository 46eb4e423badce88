//! On-disk cache of coefficient tables and bridge calibrations. Every file starts with a
//! header line carrying the format version and the parameters it was computed for; files
//! that fail to parse or carry another version are ignored and recomputed.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::arith::ImaginaryQuadraticField;
use crate::eisenstein::FourierTable;
use crate::error::Result;
use crate::siegel::{BridgeParameters, Limits};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct TableHeader {
    format_version: u32,
    kind: String,
    disc: u64,
    weight: u32,
    degree: usize,
    max_diag: i64,
    max_group: u64,
    max_level: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct CalibrationFile {
    format_version: u32,
    max_group: u64,
    max_level: u32,
    params: BridgeParameters,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn table_path(&self, disc: u64, weight: u32, degree: usize, max_diag: i64, limits: &Limits) -> PathBuf {
        self.dir.join(format!(
            "table-D{disc}-k{weight}-m{degree}-b{max_diag}-g{}-l{}.jsonl",
            limits.max_group, limits.max_level
        ))
    }

    pub fn calibration_path(&self, disc: u64, q: u64, limits: &Limits) -> PathBuf {
        self.dir.join(format!("bridge-D{disc}-q{q}-g{}-l{}.json", limits.max_group, limits.max_level))
    }

    fn header(t: &FourierTable, limits: &Limits) -> TableHeader {
        TableHeader {
            format_version: FORMAT_VERSION,
            kind: "fourier-table".into(),
            disc: t.field.disc(),
            weight: t.weight,
            degree: t.degree,
            max_diag: t.max_diag,
            max_group: limits.max_group,
            max_level: limits.max_level,
        }
    }

    pub fn store_table(&self, t: &FourierTable, limits: &Limits) -> Result<PathBuf> {
        let path = self.table_path(t.field.disc(), t.weight, t.degree, t.max_diag, limits);
        let mut buf = Vec::new();
        writeln!(buf, "{}", serde_json::to_string(&Self::header(t, limits)).expect("header serializes"))?;
        t.write_jsonl_with_locals(&mut buf)?;
        atomic_write(&path, &buf)?;
        Ok(path)
    }

    /// `None` on a miss, a version mismatch or a damaged file (the latter two with a warning).
    pub fn load_table(
        &self,
        field: &ImaginaryQuadraticField,
        weight: u32,
        degree: usize,
        max_diag: i64,
        limits: &Limits,
    ) -> Option<FourierTable> {
        let path = self.table_path(field.disc(), weight, degree, max_diag, limits);
        let text = fs::read_to_string(&path).ok()?;
        let (head, body) = text.split_once('\n').unwrap_or((&text, ""));
        let expected = TableHeader {
            format_version: FORMAT_VERSION,
            kind: "fourier-table".into(),
            disc: field.disc(),
            weight,
            degree,
            max_diag,
            max_group: limits.max_group,
            max_level: limits.max_level,
        };
        match serde_json::from_str::<TableHeader>(head) {
            Ok(h) if h == expected => {}
            Ok(h) => {
                eprintln!("warning: ignoring cached table {} (format {})", path.display(), h.format_version);
                return None;
            }
            Err(_) => {
                eprintln!("warning: ignoring damaged cache file {}", path.display());
                return None;
            }
        }
        match FourierTable::read_jsonl(*field, weight, degree, max_diag, body) {
            Ok(t) => Some(t),
            Err(e) => {
                eprintln!("warning: ignoring damaged cache file {}: {e}", path.display());
                None
            }
        }
    }

    pub fn store_calibration(&self, p: &BridgeParameters, limits: &Limits) -> Result<PathBuf> {
        let path = self.calibration_path(p.disc, p.q, limits);
        let f = CalibrationFile {
            format_version: FORMAT_VERSION,
            max_group: limits.max_group,
            max_level: limits.max_level,
            params: p.clone(),
        };
        atomic_write(&path, serde_json::to_string_pretty(&f).expect("serializes").as_bytes())?;
        Ok(path)
    }

    pub fn load_calibration(&self, disc: u64, q: u64, limits: &Limits) -> Option<BridgeParameters> {
        let path = self.calibration_path(disc, q, limits);
        let text = fs::read_to_string(&path).ok()?;
        match serde_json::from_str::<CalibrationFile>(&text) {
            Ok(f) if f.format_version == FORMAT_VERSION
                && f.max_group == limits.max_group
                && f.max_level == limits.max_level
                && f.params.disc == disc
                && f.params.q == q =>
            {
                Some(f.params)
            }
            _ => {
                eprintln!("warning: ignoring cached calibration {}", path.display());
                None
            }
        }
    }
}

/// Write to a sibling temporary file, then rename over the target.
fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}
