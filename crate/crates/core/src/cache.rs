//! Plain-text spectrum cache.
//!
//! ```text
//! hyperball-spectrum v1
//! dim 3
//! e_max 5.0000000000000000e2
//! levels 42
//! total_states 1234
//!      l      s                        j                   energy           g
//!      0      1   3.1415926535897931e0   9.8696044010893580e0           1
//! ```
//!
//! Floats are written with 17 significant digits, which round-trips every f64.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::spectrum::{Level, ModeIndex, Spectrum};

const MAGIC: &str = "hyperball-spectrum v1";
const EXTENSION: &str = "spectrum";

/// Serialize a spectrum in the cache format.
pub fn to_string(spec: &Spectrum) -> String {
    let mut out = String::with_capacity(80 * (spec.levels().len() + 8));
    out.push_str(MAGIC);
    out.push('\n');
    out.push_str(&format!("dim {}\n", spec.dim()));
    out.push_str(&format!("e_max {:.16e}\n", spec.e_max()));
    out.push_str(&format!("levels {}\n", spec.levels().len()));
    out.push_str(&format!("total_states {}\n", spec.total_states()));
    out.push_str(&format!("{:>6} {:>6} {:>24} {:>24} {:>20}\n", "l", "s", "j", "energy", "g"));
    for level in spec.levels() {
        out.push_str(&format!(
            "{:>6} {:>6} {:>24.16e} {:>24.16e} {:>20}\n",
            level.mode.l(),
            level.mode.s(),
            level.zero,
            level.energy,
            level.degeneracy
        ));
    }
    out
}

fn header_value<'a>(line: Option<&'a str>, key: &str) -> Result<&'a str> {
    let line = line.ok_or_else(|| Error::Format(format!("missing `{key}` line")))?;
    line.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix(' '))
        .ok_or_else(|| Error::Format(format!("expected `{key} <value>`, found `{line}`")))
}

fn parse<T: std::str::FromStr>(text: &str, what: &str) -> Result<T> {
    text.trim().parse().map_err(|_| Error::Format(format!("cannot parse {what} from `{text}`")))
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Header {
    dim: u32,
    e_max: f64,
    levels: usize,
    total_states: u64,
}

fn parse_header<'a>(lines: &mut impl Iterator<Item = &'a str>) -> Result<Header> {
    match lines.next() {
        Some(MAGIC) => {}
        other => return Err(Error::Format(format!("bad magic line {other:?}"))),
    }
    Ok(Header {
        dim: parse(header_value(lines.next(), "dim")?, "dim")?,
        e_max: parse(header_value(lines.next(), "e_max")?, "e_max")?,
        levels: parse(header_value(lines.next(), "levels")?, "level count")?,
        total_states: parse(header_value(lines.next(), "total_states")?, "state count")?,
    })
}

/// Parse the cache format back into a validated spectrum.
pub fn from_str(text: &str) -> Result<Spectrum> {
    let mut lines = text.lines();
    let header = parse_header(&mut lines)?;
    lines.next().ok_or_else(|| Error::Format("missing column header".into()))?;
    let mut levels = Vec::with_capacity(header.levels);
    for line in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [l, s, j, e, g] = fields[..] else {
            return Err(Error::Format(format!("expected 5 fields, found `{line}`")));
        };
        let mode = ModeIndex::new(header.dim, parse(l, "l")?, parse(s, "s")?)
            .map_err(|e| Error::Format(e.to_string()))?;
        levels.push(Level {
            mode,
            zero: parse(j, "zero")?,
            energy: parse(e, "energy")?,
            degeneracy: parse(g, "degeneracy")?,
        });
    }
    if levels.len() != header.levels {
        return Err(Error::Format(format!(
            "header promises {} levels, file holds {}",
            header.levels,
            levels.len()
        )));
    }
    let spec = Spectrum::from_levels(header.dim, header.e_max, levels)?;
    if spec.total_states() != header.total_states {
        return Err(Error::Format("total state count does not match the records".into()));
    }
    Ok(spec)
}

/// Write `spec` to `path`, replacing any existing file atomically.
pub fn write(spec: &Spectrum, path: &Path) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(to_string(spec).as_bytes())?;
        file.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read(path: &Path) -> Result<Spectrum> {
    from_str(&fs::read_to_string(path)?)
}

/// Canonical cache file name for a spectrum.
pub fn file_name(dim: u32, e_max: f64) -> String {
    format!("d{dim}-emax{e_max:.16e}.{EXTENSION}")
}

fn read_header(path: &Path) -> Result<Header> {
    let reader = BufReader::new(fs::File::open(path)?);
    let lines: Vec<String> = reader.lines().take(5).collect::<std::io::Result<_>>()?;
    parse_header(&mut lines.iter().map(String::as_str))
}

/// Spectrum store in a directory, one file per `(dim, e_max)`.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Smallest cached spectrum covering `e_max`, restricted to it.
    pub fn lookup(&self, dim: u32, e_max: f64) -> Result<Option<Spectrum>> {
        let mut best: Option<(f64, PathBuf)> = None;
        for entry in fs::read_dir(&self.dir)? {
            let path = entry?.path();
            if path.extension().and_then(|e| e.to_str()) != Some(EXTENSION) {
                continue;
            }
            let Ok(header) = read_header(&path) else { continue };
            if header.dim == dim
                && header.e_max >= e_max
                && best.as_ref().is_none_or(|(e, _)| header.e_max < *e)
            {
                best = Some((header.e_max, path));
            }
        }
        match best {
            Some((stored, path)) => {
                let spec = read(&path)?;
                Ok(Some(if stored == e_max { spec } else { spec.restrict(e_max)? }))
            }
            None => Ok(None),
        }
    }

    pub fn store(&self, spec: &Spectrum) -> Result<PathBuf> {
        let path = self.dir.join(file_name(spec.dim(), spec.e_max()));
        write(spec, &path)?;
        Ok(path)
    }

    /// Cached spectrum if one covers `e_max`, otherwise build and store it.
    pub fn get_or_build(&self, dim: u32, e_max: f64) -> Result<Spectrum> {
        if let Some(spec) = self.lookup(dim, e_max)? {
            return Ok(spec);
        }
        let spec = Spectrum::build(dim, e_max)?;
        self.store(&spec)?;
        Ok(spec)
    }
}
