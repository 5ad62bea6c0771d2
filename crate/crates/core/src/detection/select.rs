use serde::{Deserialize, Serialize};

use super::{Track, TrackSet};

/// Final-track selection rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    /// The K longest tracks.
    TopK(usize),
    /// Every track longer than the threshold.
    Threshold(usize),
    /// Everything, unfiltered.
    All,
}

impl std::str::FromStr for Selection {
    type Err = String;

    /// Parses `topk:K`, `thresh:Tr` or `all`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        if s == "all" {
            return Ok(Selection::All);
        }
        let (kind, value) = s.split_once(':').ok_or_else(|| format!("bad selection `{s}`"))?;
        let n: usize = value.parse().map_err(|_| format!("bad selection count `{value}`"))?;
        match kind {
            "topk" => Ok(Selection::TopK(n)),
            "thresh" | "threshold" => Ok(Selection::Threshold(n)),
            _ => Err(format!("bad selection `{s}` (expected topk:K, thresh:Tr or all)")),
        }
    }
}

impl std::fmt::Display for Selection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Selection::TopK(k) => write!(f, "topk:{k}"),
            Selection::Threshold(t) => write!(f, "thresh:{t}"),
            Selection::All => f.write_str("all"),
        }
    }
}

fn contains(big: &[usize], small: &[usize]) -> bool {
    small.len() < big.len() && small.iter().all(|x| big.binary_search(x).is_ok())
}

/// Ranks tracks by length (longest first), then by normalised residual, then
/// by ids, and keeps them in that order subject to the rule. Tracks strictly
/// contained in an already kept track are skipped.
pub fn select_tracks(ts: &TrackSet, selection: Selection) -> TrackSet {
    if selection == Selection::All {
        return ts.clone();
    }
    let (e1, e2) = (ts.params.eps1, ts.params.eps2);
    let quality = |t: &Track| (t.residual_xy / e1).max(t.residual_tx / e2);
    let mut ranked: Vec<&Track> = ts.tracks.iter().collect();
    ranked.sort_by(|a, b| {
        b.len()
            .cmp(&a.len())
            .then(quality(a).total_cmp(&quality(b)))
            .then(a.key().cmp(&b.key()))
    });

    let (limit, min_len) = match selection {
        Selection::TopK(k) => (k, 0),
        Selection::Threshold(tr) => (usize::MAX, tr + 1),
        Selection::All => unreachable!(),
    };
    let mut kept: Vec<(&Track, Vec<usize>)> = Vec::new();
    for t in ranked {
        if kept.len() == limit || t.len() < min_len {
            break;
        }
        let key = t.key();
        if kept.iter().any(|(_, k)| contains(k, &key)) {
            continue;
        }
        kept.push((t, key));
    }
    TrackSet { tracks: kept.into_iter().map(|(t, _)| t.clone()).collect(), params: ts.params }
}
