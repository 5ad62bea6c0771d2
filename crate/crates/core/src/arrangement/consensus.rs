use super::{LineKind, OffsetLine};

/// Per-region membership along the current cut.
///
/// Region `r` lies between cut positions `r - 1` and `r`; region 0 is above
/// every line and region `2N` below every line. For each region the set of
/// member points, a per-frame member count and the number of occupied frames
/// are kept up to date as adjacent lines swap.
#[derive(Debug, Clone)]
pub struct Consensus {
    words: usize,
    frames: usize,
    members: Vec<u64>,
    frame_counts: Vec<u32>,
    occupied: Vec<u32>,
    /// XOR of the members' keys, per region.
    fingerprint: Vec<u64>,
    /// Dense frame column of each source point.
    column: Vec<u32>,
}

/// splitmix64 finalizer; spreads source indices over 64 bits.
fn key(source: usize) -> u64 {
    let mut z = (source as u64).wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Consensus {
    /// Builds the region table for the initial cut `order` (top to bottom).
    pub(crate) fn new(lines: &[OffsetLine], order: &[u32], frames_of_sources: &[u32]) -> Self {
        let n_points = frames_of_sources.len();
        let mut distinct: Vec<u32> = frames_of_sources.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let column: Vec<u32> = frames_of_sources
            .iter()
            .map(|t| distinct.binary_search(t).expect("frame present") as u32)
            .collect();

        let regions = order.len() + 1;
        let words = n_points.div_ceil(64).max(1);
        let frames = distinct.len();
        let mut c = Self {
            words,
            frames,
            members: vec![0; regions * words],
            frame_counts: vec![0; regions * frames],
            occupied: vec![0; regions],
            fingerprint: vec![0; regions],
            column,
        };
        for r in 0..order.len() {
            c.members.copy_within(r * words..(r + 1) * words, (r + 1) * words);
            c.frame_counts.copy_within(r * frames..(r + 1) * frames, (r + 1) * frames);
            c.occupied[r + 1] = c.occupied[r];
            c.fingerprint[r + 1] = c.fingerprint[r];
            let l = &lines[order[r] as usize];
            match l.kind {
                LineKind::Upper => c.add(r + 1, l.source as usize),
                LineKind::Lower => c.remove(r + 1, l.source as usize),
            }
        }
        c
    }

    pub fn regions(&self) -> usize {
        self.occupied.len()
    }

    pub fn contains(&self, region: usize, source: usize) -> bool {
        self.members[region * self.words + source / 64] >> (source % 64) & 1 == 1
    }

    /// Number of distinct frames among the region's members.
    pub fn frames_in(&self, region: usize) -> usize {
        self.occupied[region] as usize
    }

    /// Order-independent hash of the region's member set.
    pub(crate) fn fingerprint(&self, region: usize) -> u64 {
        self.fingerprint[region]
    }

    /// True when the region holds exactly the sorted sources `ids`.
    pub(crate) fn holds_exactly(&self, region: usize, ids: &[u32]) -> bool {
        let mut it = ids.iter();
        self.members(region).all(|m| it.next() == Some(&(m as u32))) && it.next().is_none()
    }

    pub fn members(&self, region: usize) -> impl Iterator<Item = usize> + '_ {
        let row = &self.members[region * self.words..(region + 1) * self.words];
        row.iter().enumerate().flat_map(|(w, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + b)
            })
        })
    }

    fn add(&mut self, region: usize, source: usize) {
        let word = &mut self.members[region * self.words + source / 64];
        debug_assert_eq!(*word >> (source % 64) & 1, 0, "point entered twice");
        *word |= 1 << (source % 64);
        self.fingerprint[region] ^= key(source);
        let fc = &mut self.frame_counts[region * self.frames + self.column[source] as usize];
        *fc += 1;
        if *fc == 1 {
            self.occupied[region] += 1;
        }
    }

    fn remove(&mut self, region: usize, source: usize) {
        let word = &mut self.members[region * self.words + source / 64];
        debug_assert_eq!(*word >> (source % 64) & 1, 1, "point left twice");
        *word &= !(1 << (source % 64));
        self.fingerprint[region] ^= key(source);
        let fc = &mut self.frame_counts[region * self.frames + self.column[source] as usize];
        *fc -= 1;
        if *fc == 0 {
            self.occupied[region] -= 1;
        }
    }

    /// Updates region `region` after `upper` (previously above) and `lower`
    /// swap across it. Returns true when the region just became a local
    /// maximum of membership, i.e. both boundaries now face inward.
    pub(crate) fn apply_swap(&mut self, region: usize, upper: &OffsetLine, lower: &OffsetLine) -> bool {
        let (p, q) = (upper.source as usize, lower.source as usize);
        // Crossing the region's old upper edge from below: a lower boundary
        // lets its point in, an upper boundary lets it out. Mirrored for the
        // old lower edge.
        match upper.kind {
            LineKind::Lower => self.add(region, p),
            LineKind::Upper => self.remove(region, p),
        }
        match lower.kind {
            LineKind::Upper => self.add(region, q),
            LineKind::Lower => self.remove(region, q),
        }
        upper.kind == LineKind::Lower && lower.kind == LineKind::Upper
    }
}
