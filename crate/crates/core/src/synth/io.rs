//! Points CSV and tracks JSON.
//!
//! Points are stored as `frame,x,y` rows; row order defines ids. Tracks
//! (ground truth or detector output) are a JSON object with a `tracks` array
//! and a `params` object.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use thiserror::Error;

use super::{GeneratedScene, SceneConfig};
use crate::detection::TrackSet;
use crate::geometry::PointSet;

pub const POINTS_FILE: &str = "points.csv";
pub const GT_FILE: &str = "gt.json";
pub const SCENE_FILE: &str = "scene.json";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error at line {line}{}: {message}", column.as_ref().map(|c| format!(", column `{c}`")).unwrap_or_default())]
    Parse { line: u64, column: Option<String>, message: String },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("{path}: {source}")]
    File { path: String, source: std::io::Error },
}

fn open(path: &Path) -> Result<BufReader<File>, IoError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| IoError::File { path: path.display().to_string(), source })
}

fn create(path: &Path) -> Result<BufWriter<File>, IoError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| IoError::File { path: path.display().to_string(), source })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::File { path: path.display().to_string(), source }
}

pub fn write_points_csv<W: Write>(points: &PointSet, w: W) -> Result<(), IoError> {
    let mut wr = csv::Writer::from_writer(w);
    let wrap = |e: csv::Error| IoError::Schema(e.to_string());
    wr.write_record(["frame", "x", "y"]).map_err(wrap)?;
    for p in points.points() {
        wr.write_record([p.t.to_string(), p.x.to_string(), p.y.to_string()]).map_err(wrap)?;
    }
    wr.flush().map_err(|e| IoError::Schema(e.to_string()))
}

pub fn read_points_csv<R: Read>(r: R) -> Result<PointSet, IoError> {
    let mut rd = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let headers = rd
        .headers()
        .map_err(|e| IoError::Parse { line: 1, column: None, message: e.to_string() })?
        .clone();
    let col = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| IoError::Parse {
            line: 1,
            column: Some(name.to_string()),
            message: "missing required column".into(),
        })
    };
    let (ct, cx, cy) = (col("frame")?, col("x")?, col("y")?);

    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| IoError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            column: None,
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let field = |i: usize, name: &str| {
            rec.get(i).ok_or_else(|| IoError::Parse { line, column: Some(name.into()), message: "missing value".into() })
        };
        let bad = |name: &str, v: &str| IoError::Parse { line, column: Some(name.into()), message: format!("cannot parse `{v}`") };
        let t = field(ct, "frame")?;
        let x = field(cx, "x")?;
        let y = field(cy, "y")?;
        rows.push((
            t.parse::<u32>().map_err(|_| bad("frame", t))?,
            x.parse::<f64>().map_err(|_| bad("x", x))?,
            y.parse::<f64>().map_err(|_| bad("y", y))?,
        ));
    }
    PointSet::from_rows(rows).map_err(|e| match e {
        crate::geometry::GeometryError::InvalidPoint { index, reason } => {
            IoError::Parse { line: index as u64 + 2, column: None, message: reason }
        }
        other => IoError::Schema(other.to_string()),
    })
}

pub fn write_tracks_json<W: Write>(tracks: &TrackSet, mut w: W) -> Result<(), IoError> {
    serde_json::to_writer_pretty(&mut w, tracks).map_err(|e| IoError::Schema(e.to_string()))?;
    writeln!(w).map_err(|e| IoError::Schema(e.to_string()))
}

/// Reads a track set; with `points` given, every id must refer to one of them.
pub fn read_tracks_json<R: Read>(r: R, points: Option<&PointSet>) -> Result<TrackSet, IoError> {
    let ts: TrackSet = serde_json::from_reader(r).map_err(|e| IoError::Schema(e.to_string()))?;
    if let Some(ps) = points {
        for (k, t) in ts.tracks.iter().enumerate() {
            if let Some(bad) = t.point_ids.iter().find(|&&i| i >= ps.len()) {
                return Err(IoError::Schema(format!(
                    "track {k} references point {bad}, but only {} points exist",
                    ps.len()
                )));
            }
        }
    }
    Ok(ts)
}

pub fn load_points(path: &Path) -> Result<PointSet, IoError> {
    read_points_csv(open(path)?)
}

pub fn save_points(path: &Path, points: &PointSet) -> Result<(), IoError> {
    let mut w = create(path)?;
    write_points_csv(points, &mut w)?;
    w.flush().map_err(io_err(path))
}

pub fn load_tracks(path: &Path, points: Option<&PointSet>) -> Result<TrackSet, IoError> {
    read_tracks_json(open(path)?, points)
}

pub fn save_tracks(path: &Path, tracks: &TrackSet) -> Result<(), IoError> {
    let mut w = create(path)?;
    write_tracks_json(tracks, &mut w)?;
    w.flush().map_err(io_err(path))
}

/// Writes `points.csv`, `gt.json` and `scene.json` into `dir`.
pub fn write_scene(dir: &Path, scene: &GeneratedScene) -> Result<(), IoError> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    save_points(&dir.join(POINTS_FILE), &scene.points)?;
    save_tracks(&dir.join(GT_FILE), &scene.gt)?;
    let path = dir.join(SCENE_FILE);
    let mut w = create(&path)?;
    serde_json::to_writer_pretty(&mut w, &scene.config).map_err(|e| IoError::Schema(e.to_string()))?;
    writeln!(w).map_err(io_err(&path))?;
    w.flush().map_err(io_err(&path))
}

pub fn read_scene(dir: &Path) -> Result<GeneratedScene, IoError> {
    let points = load_points(&dir.join(POINTS_FILE))?;
    let gt = load_tracks(&dir.join(GT_FILE), Some(&points))?;
    let config: SceneConfig =
        serde_json::from_reader(open(&dir.join(SCENE_FILE))?).map_err(|e| IoError::Schema(e.to_string()))?;
    Ok(GeneratedScene { points, gt, config })
}
