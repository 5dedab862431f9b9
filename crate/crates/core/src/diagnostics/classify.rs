//! Convergence-based verdicts on tracked delta series.

use std::fmt;
use std::str::FromStr;

use super::DeltaRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// delta converges to zero: an eigenstate of the full operator.
    GenuineBound,
    /// delta stalls well above its neighbours.
    Spurious,
    /// delta stalls at a level shared with neighbouring states.
    ContinuumLike,
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Trend {
    Decreasing,
    Plateau,
    Increasing,
}

macro_rules! text_enum {
    ($ty:ty { $($variant:ident => $text:literal),* $(,)? }) => {
        impl $ty {
            pub fn as_str(&self) -> &'static str {
                match self { $(Self::$variant => $text),* }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $ty {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok(Self::$variant),)*
                    other => Err(format!("unknown {}: {other}", stringify!($ty))),
                }
            }
        }
    };
}

text_enum!(Verdict {
    GenuineBound => "genuine_bound",
    Spurious => "spurious",
    ContinuumLike => "continuum_like",
    Undecided => "undecided",
});

text_enum!(Trend {
    Decreasing => "decreasing",
    Plateau => "plateau",
    Increasing => "increasing",
});

/// Records examined for the trend.
pub const TREND_WINDOW: usize = 3;
/// A step counts as decreasing when `next <= DECREASE_RATIO * previous`.
pub const DECREASE_RATIO: f64 = 0.9;
/// Neighbours must sit this far below a state for it to be isolated.
pub const ISOLATION_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyConfig {
    pub tol_bound: f64,
    pub plateau_factor: f64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self { tol_bound: 1e-6, plateau_factor: 2.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub track_id: usize,
    pub verdict: Verdict,
    pub trend: Option<Trend>,
    pub final_delta_rel: f64,
    pub final_value: f64,
}

/// Trend over the last [`TREND_WINDOW`] records (sorted by iteration).
///
/// A final record that is exact (see [`DeltaRecord::is_exact`]) has
/// converged and counts as decreasing regardless of history, and a step
/// into an exact record always counts as a decrease. Otherwise fewer than
/// [`TREND_WINDOW`] records give no trend.
pub fn trend(records: &[DeltaRecord], plateau_factor: f64) -> Option<Trend> {
    let last = records.last()?;
    if last.is_exact() {
        return Some(Trend::Decreasing);
    }
    if records.len() < TREND_WINDOW {
        return None;
    }
    let window = &records[records.len() - TREND_WINDOW..];
    let decreasing = window
        .windows(2)
        .all(|p| p[1].is_exact() || p[1].delta_rel <= DECREASE_RATIO * p[0].delta_rel);
    if decreasing {
        return Some(Trend::Decreasing);
    }
    let (lo, hi) = window
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r.delta_rel), hi.max(r.delta_rel)));
    if hi <= plateau_factor * lo {
        Some(Trend::Plateau)
    } else {
        Some(Trend::Increasing)
    }
}

/// Classify every tracked series. `series[t]` holds the records of one
/// track; the output keeps the same order.
///
/// - `GenuineBound`: decreasing trend and final `delta_rel < tol_bound`.
/// - `Spurious`: plateau or increasing, final `delta_rel >= tol_bound`, and
///   isolated: each neighbouring track in energy (among tracks present at
///   the last step) has a final `delta_rel` at least [`ISOLATION_FACTOR`]
///   times smaller.
/// - `ContinuumLike`: plateau, final `delta_rel >= tol_bound`, not isolated.
/// - `Undecided` otherwise.
pub fn classify(series: &[Vec<DeltaRecord>], config: &ClassifyConfig) -> Vec<Classification> {
    let sorted: Vec<Vec<DeltaRecord>> = series
        .iter()
        .map(|s| {
            let mut s = s.clone();
            s.sort_by_key(|r| r.iteration);
            s
        })
        .collect();
    let last_step = sorted.iter().filter_map(|s| s.last()).map(|r| r.iteration).max();
    // (final value, final delta_rel, series index) of tracks alive at the end
    let mut alive: Vec<(f64, f64, usize)> = sorted
        .iter()
        .enumerate()
        .filter_map(|(t, s)| s.last().filter(|r| Some(r.iteration) == last_step).map(|r| (r.value, r.delta_rel, t)))
        .collect();
    alive.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)));

    let isolated = |t: usize, value: f64, delta_rel: f64| {
        let pos = alive.partition_point(|a| a.0 < value || (a.0 == value && a.2 < t));
        let below = alive[..pos].iter().rev().find(|a| a.2 != t);
        let above = alive[pos..].iter().find(|a| a.2 != t);
        let neighbours: Vec<_> = below.into_iter().chain(above).collect();
        !neighbours.is_empty() && neighbours.iter().all(|n| ISOLATION_FACTOR * n.1 <= delta_rel)
    };

    sorted
        .iter()
        .enumerate()
        .map(|(t, records)| {
            let Some(last) = records.last() else {
                return Classification {
                    track_id: t,
                    verdict: Verdict::Undecided,
                    trend: None,
                    final_delta_rel: f64::NAN,
                    final_value: f64::NAN,
                };
            };
            let track_id = last.track_id.unwrap_or(t);
            let trend = trend(records, config.plateau_factor);
            let above_tol = last.delta_rel >= config.tol_bound;
            let verdict = match trend {
                Some(Trend::Decreasing) if last.delta_rel < config.tol_bound => Verdict::GenuineBound,
                Some(Trend::Plateau | Trend::Increasing) if above_tol && isolated(t, last.value, last.delta_rel) => {
                    Verdict::Spurious
                }
                Some(Trend::Plateau) if above_tol => Verdict::ContinuumLike,
                _ => Verdict::Undecided,
            };
            Classification { track_id, verdict, trend, final_delta_rel: last.delta_rel, final_value: last.value }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Records whose `delta_rel` equals the given values, never exact.
    fn series(track: usize, value: f64, rels: &[f64]) -> Vec<DeltaRecord> {
        rels.iter()
            .enumerate()
            .map(|(i, &rel)| DeltaRecord::new(Some(track), 100 * (i + 1), value, rel * (1.0 + value * value), 0.0))
            .collect()
    }

    fn verdicts(all: &[Vec<DeltaRecord>], config: ClassifyConfig) -> Vec<Verdict> {
        classify(all, &config).iter().map(|c| c.verdict).collect()
    }

    #[test]
    fn rule_table() {
        use Verdict::*;
        let cfg = ClassifyConfig::default();
        let cases: Vec<(&str, Vec<Vec<DeltaRecord>>, Vec<Verdict>)> = vec![
            ("converging", vec![series(0, -0.5, &[1e-3, 1e-5, 1e-9])], vec![GenuineBound]),
            (
                "isolated plateau",
                vec![
                    series(0, -1.0, &[1e-3, 1e-3, 1e-3]),
                    series(1, 0.0, &[0.04, 0.05, 0.045]),
                    series(2, 1.0, &[1e-3, 1.1e-3, 1e-3]),
                ],
                vec![ContinuumLike, Spurious, ContinuumLike],
            ),
            (
                "shared plateau",
                vec![
                    series(0, 1.0, &[0.02, 0.03, 0.025]),
                    series(1, 2.0, &[0.04, 0.05, 0.045]),
                    series(2, 3.0, &[0.03, 0.03, 0.03]),
                ],
                vec![ContinuumLike, ContinuumLike, ContinuumLike],
            ),
            (
                "isolated and rising",
                vec![series(0, 0.0, &[1e-7, 1e-7, 1e-7]), series(1, 1.0, &[1e-2, 1e-1, 1.0])],
                vec![Undecided, Spurious],
            ),
            ("too short", vec![series(0, 0.0, &[1e-3, 1e-9])], vec![Undecided]),
            ("decreasing but large", vec![series(0, 0.0, &[1.0, 0.5, 0.2])], vec![Undecided]),
            ("rising and not isolated", vec![series(0, 0.0, &[1e-3, 1e-2, 1e-1])], vec![Undecided]),
            ("plateau below tolerance", vec![series(0, 0.0, &[1e-8, 1e-8, 1e-8])], vec![Undecided]),
        ];
        for (name, input, expected) in cases {
            assert_eq!(verdicts(&input, cfg), expected, "case {name}");
        }
    }

    #[test]
    fn exact_records_converge_immediately() {
        let exact = DeltaRecord::new(Some(0), 50, 1.0, 0.0, 10.0);
        let c = classify(&[vec![exact]], &ClassifyConfig::default());
        assert_eq!(c[0].verdict, Verdict::GenuineBound);
        assert_eq!(c[0].trend, Some(Trend::Decreasing));
        // roundoff flicker at the floor is not an increase
        let flicker = vec![
            DeltaRecord::new(Some(0), 1, 0.5, 1e-14, 100.0),
            DeltaRecord::new(Some(0), 2, 0.5, 3e-14, 100.0),
            DeltaRecord::new(Some(0), 3, 0.5, 2e-14, 100.0),
        ];
        assert_eq!(trend(&flicker, 2.0), Some(Trend::Decreasing));
    }

    #[test]
    fn tiny_tolerance_rejects_everything_nonzero() {
        let cfg = ClassifyConfig { tol_bound: 1e-300, ..ClassifyConfig::default() };
        let c = classify(
            &[series(0, -0.5, &[1e-3, 1e-5, 1e-9]), vec![DeltaRecord::new(Some(1), 1, 0.0, 0.0, 1.0)]],
            &cfg,
        );
        assert_ne!(c[0].verdict, Verdict::GenuineBound);
        assert_eq!(c[1].verdict, Verdict::GenuineBound);
    }

    #[test]
    fn strict_plateau_factor() {
        let input = vec![
            series(0, 1.0, &[0.02, 0.021, 0.0205]),
            series(1, 2.0, &[0.03, 0.03, 0.03]),
            series(2, 3.0, &[0.02, 0.019, 0.0195]),
        ];
        let loose = classify(&input, &ClassifyConfig::default());
        assert!(loose.iter().all(|c| c.trend == Some(Trend::Plateau)));
        let strict = classify(&input, &ClassifyConfig { plateau_factor: 1.0001, ..ClassifyConfig::default() });
        let trends: Vec<_> = strict.iter().map(|c| c.trend).collect();
        assert_eq!(trends, vec![Some(Trend::Increasing), Some(Trend::Plateau), Some(Trend::Increasing)]);
        let verdicts: Vec<_> = strict.iter().map(|c| c.verdict).collect();
        assert_eq!(verdicts, vec![Verdict::Undecided, Verdict::ContinuumLike, Verdict::Undecided]);
    }

    #[test]
    fn invariant_genuine_implies_decreasing_below_tolerance() {
        let cfg = ClassifyConfig::default();
        let input = vec![
            series(0, -2.0, &[1e-2, 1e-4, 1e-7]),
            series(1, -1.0, &[1e-2, 1e-2, 1e-2]),
            series(2, 0.0, &[1e-7, 1e-8, 1e-9]),
        ];
        for c in classify(&input, &cfg) {
            if c.verdict == Verdict::GenuineBound {
                assert_eq!(c.trend, Some(Trend::Decreasing));
                assert!(c.final_delta_rel < cfg.tol_bound);
            }
        }
    }

    #[test]
    fn text_round_trip() {
        for v in [Verdict::GenuineBound, Verdict::Spurious, Verdict::ContinuumLike, Verdict::Undecided] {
            assert_eq!(v.as_str().parse::<Verdict>().unwrap(), v);
        }
        assert!("bogus".parse::<Trend>().is_err());
    }
}
