//! Follow individual eigenpairs across basis sizes or Lanczos iterations by
//! greedy nearest-value matching.

use super::RitzPair;

/// Matching window for a level `v` whose nearest neighbour (in the same
/// list) is `gap` away: `max(abs_window, rel_window |v|, gap_fraction gap)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackerConfig {
    pub abs_window: f64,
    pub rel_window: f64,
    pub gap_fraction: f64,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        Self { abs_window: 1e-6, rel_window: 1e-3, gap_fraction: 0.25 }
    }
}

impl TrackerConfig {
    pub fn window(&self, value: f64, gap: f64) -> f64 {
        let gap_term = if gap.is_finite() { self.gap_fraction * gap } else { 0.0 };
        self.abs_window.max(self.rel_window * value.abs()).max(gap_term)
    }
}

/// One tracked state: `(step, position)` indices into the histories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Track {
    pub id: usize,
    pub members: Vec<(usize, usize)>,
}

fn nearest_gap(values: &[f64], i: usize) -> f64 {
    let below = if i > 0 { values[i] - values[i - 1] } else { f64::INFINITY };
    let above = values.get(i + 1).map_or(f64::INFINITY, |v| v - values[i]);
    below.min(above)
}

/// Assign track ids to ascending value lists, one list per step.
///
/// Candidate links join each level to its nearest neighbours in the next
/// list; links are accepted greedily by distance (ties by lower previous
/// index, then lower current index) while both ends are free and the
/// distance lies within the previous level's window. Unmatched levels open
/// new tracks, numbered in order of appearance.
pub fn assign_tracks(levels: &[Vec<f64>], config: &TrackerConfig) -> Vec<Vec<usize>> {
    let mut ids: Vec<Vec<usize>> = Vec::with_capacity(levels.len());
    let mut next_id = 0;
    for (step, current) in levels.iter().enumerate() {
        debug_assert!(current.windows(2).all(|w| w[0] <= w[1]), "levels must be sorted");
        let mut assigned: Vec<Option<usize>> = vec![None; current.len()];
        if step > 0 {
            let previous = &levels[step - 1];
            let previous_ids = &ids[step - 1];
            let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
            let mut consider = |i: usize, j: usize| {
                let dist = (current[j] - previous[i]).abs();
                if dist <= config.window(previous[i], nearest_gap(previous, i)) {
                    candidates.push((dist, i, j));
                }
            };
            for (i, &v) in previous.iter().enumerate() {
                let hi = current.partition_point(|&c| c < v);
                for j in [hi.wrapping_sub(1), hi] {
                    if j < current.len() {
                        consider(i, j);
                    }
                }
            }
            for (j, &v) in current.iter().enumerate() {
                let hi = previous.partition_point(|&p| p < v);
                for i in [hi.wrapping_sub(1), hi] {
                    if i < previous.len() {
                        consider(i, j);
                    }
                }
            }
            candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
            let mut taken = vec![false; previous.len()];
            for (_, i, j) in candidates {
                if !taken[i] && assigned[j].is_none() {
                    taken[i] = true;
                    assigned[j] = Some(previous_ids[i]);
                }
            }
        }
        let step_ids = assigned
            .into_iter()
            .map(|id| {
                id.unwrap_or_else(|| {
                    next_id += 1;
                    next_id - 1
                })
            })
            .collect();
        ids.push(step_ids);
    }
    ids
}

/// Track Ritz pairs across steps, writing `track_id` into every pair.
/// Each inner list must be sorted by value.
pub fn track_states(histories: &mut [Vec<RitzPair>], config: &TrackerConfig) -> Vec<Track> {
    let levels: Vec<Vec<f64>> = histories.iter().map(|h| h.iter().map(|p| p.value).collect()).collect();
    let ids = assign_tracks(&levels, config);
    let mut tracks: Vec<Track> = Vec::new();
    for (step, (pairs, step_ids)) in histories.iter_mut().zip(&ids).enumerate() {
        for (pos, (pair, &id)) in pairs.iter_mut().zip(step_ids).enumerate() {
            pair.track_id = Some(id);
            if id == tracks.len() {
                tracks.push(Track { id, members: Vec::new() });
            }
            tracks[id].members.push((step, pos));
        }
    }
    tracks
}
