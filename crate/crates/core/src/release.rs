//! Release schedules r(t): mosquitoes per day added to the Wolbachia aquatic
//! compartment.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Width of the bump profile, `sech(BUMP_WIDTH * (t - peak))`.
const BUMP_WIDTH: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScheduleKind {
    Constant { rate: f64 },
    /// `-(2m/T)(t - T)`: starts at `2m`, reaches zero at the horizon.
    LinearDecreasing { magnitude: f64 },
    Bump { magnitude: f64, peak_day: f64 },
    /// Piece `i` (1-based) is active where `ceil(t N / T) = i`.
    Piecewise { values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReleaseSchedule {
    #[serde(flatten)]
    pub kind: ScheduleKind,
    pub horizon: u32,
}

impl ReleaseSchedule {
    pub fn new(kind: ScheduleKind, horizon: u32) -> Result<Self> {
        let s = ReleaseSchedule { kind, horizon };
        s.validate()?;
        Ok(s)
    }

    pub fn zero(horizon: u32) -> Self {
        ReleaseSchedule { kind: ScheduleKind::Constant { rate: 0.0 }, horizon }
    }

    pub fn constant(rate: f64, horizon: u32) -> Result<Self> {
        Self::new(ScheduleKind::Constant { rate }, horizon)
    }

    pub fn linear(magnitude: f64, horizon: u32) -> Result<Self> {
        Self::new(ScheduleKind::LinearDecreasing { magnitude }, horizon)
    }

    pub fn bump(magnitude: f64, peak_day: f64, horizon: u32) -> Result<Self> {
        Self::new(ScheduleKind::Bump { magnitude, peak_day }, horizon)
    }

    pub fn piecewise(values: Vec<f64>, horizon: u32) -> Result<Self> {
        Self::new(ScheduleKind::Piecewise { values }, horizon)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| Error::InvalidInput(format!("{what} must be finite and non-negative, got {v}"));
        match &self.kind {
            ScheduleKind::Constant { rate } if !(rate.is_finite() && *rate >= 0.0) => Err(bad("constant rate", *rate)),
            ScheduleKind::LinearDecreasing { magnitude } | ScheduleKind::Bump { magnitude, .. }
                if !(magnitude.is_finite() && *magnitude >= 0.0) =>
            {
                Err(bad("magnitude", *magnitude))
            }
            ScheduleKind::Bump { peak_day, .. } if !peak_day.is_finite() => {
                Err(Error::InvalidInput("bump peak day must be finite".into()))
            }
            ScheduleKind::Piecewise { values } => {
                if values.is_empty() {
                    return Err(Error::InvalidInput("piecewise schedule needs at least one piece".into()));
                }
                if self.horizon == 0 {
                    return Err(Error::InvalidInput("piecewise schedule needs a positive horizon".into()));
                }
                match values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
                    Some(v) => Err(bad("piece value", *v)),
                    None => Ok(()),
                }
            }
            _ => Ok(()),
        }
    }

    /// 1-based index of the active piece at time `t`, clamped to `[1, N]`.
    pub fn piece_index(&self, t: f64) -> Option<usize> {
        match &self.kind {
            ScheduleKind::Piecewise { values } => Some(piece_of(t, values.len(), self.horizon)),
            _ => None,
        }
    }

    /// Release rate at time `t`.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        if !(0.0..=self.horizon as f64).contains(&t) {
            return Err(Error::InvalidInput(format!("t = {t} lies outside the horizon [0, {}]", self.horizon)));
        }
        Ok(self.rate(t))
    }

    /// Unchecked evaluation; callers guarantee `t` lies in the horizon.
    pub(crate) fn rate(&self, t: f64) -> f64 {
        match &self.kind {
            ScheduleKind::Constant { rate } => *rate,
            ScheduleKind::LinearDecreasing { magnitude } => {
                let h = self.horizon as f64;
                if h == 0.0 {
                    return 2.0 * magnitude;
                }
                (-(2.0 * magnitude / h) * (t - h)).max(0.0)
            }
            ScheduleKind::Bump { magnitude, peak_day } => magnitude / (BUMP_WIDTH * (t - peak_day)).cosh(),
            ScheduleKind::Piecewise { values } => values[piece_of(t, values.len(), self.horizon) - 1],
        }
    }

    /// Rate used while integrating strictly inside the segment `(lo, hi)`
    /// between two consecutive breakpoints. Piece selection uses the
    /// segment midpoint so that the value at the endpoints never leaks in.
    pub(crate) fn rate_in_segment(&self, t: f64, lo: f64, hi: f64) -> f64 {
        match &self.kind {
            ScheduleKind::Piecewise { values } => values[piece_of(0.5 * (lo + hi), values.len(), self.horizon) - 1],
            _ => self.rate(t),
        }
    }

    /// Interior times in `(0, T)` where the schedule is discontinuous.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            ScheduleKind::Piecewise { values } => {
                let n = values.len();
                let h = self.horizon as f64;
                let mut out: Vec<f64> = (1..n).map(|i| i as f64 * h / n as f64).filter(|t| *t > 0.0 && *t < h).collect();
                out.dedup();
                out
            }
            _ => Vec::new(),
        }
    }

    /// Number of integer days `t` in `1..=T` that fall in each piece.
    pub fn piece_day_counts(&self) -> Option<Vec<u32>> {
        let ScheduleKind::Piecewise { values } = &self.kind else { return None };
        let mut counts = vec![0u32; values.len()];
        for t in 1..=self.horizon {
            counts[piece_of(t as f64, values.len(), self.horizon) - 1] += 1;
        }
        Some(counts)
    }

    /// Daily release over `t = 1..=T`.
    pub fn daily(&self) -> Vec<f64> {
        (1..=self.horizon).map(|t| self.rate(t as f64)).collect()
    }

    /// Maximum of the schedule over `[0, T]`.
    pub fn peak(&self) -> f64 {
        match &self.kind {
            ScheduleKind::Constant { rate } => *rate,
            ScheduleKind::LinearDecreasing { magnitude } => 2.0 * magnitude,
            ScheduleKind::Bump { peak_day, .. } => self.rate(peak_day.clamp(0.0, self.horizon as f64)),
            ScheduleKind::Piecewise { values } => values.iter().copied().fold(0.0, f64::max),
        }
    }

    /// Multiplies the magnitude parameter (every piece, for piecewise) by `k`.
    pub fn scaled(&self, k: f64) -> ReleaseSchedule {
        let kind = match &self.kind {
            ScheduleKind::Constant { rate } => ScheduleKind::Constant { rate: rate * k },
            ScheduleKind::LinearDecreasing { magnitude } => ScheduleKind::LinearDecreasing { magnitude: magnitude * k },
            ScheduleKind::Bump { magnitude, peak_day } => ScheduleKind::Bump { magnitude: magnitude * k, peak_day: *peak_day },
            ScheduleKind::Piecewise { values } => ScheduleKind::Piecewise { values: values.iter().map(|v| v * k).collect() },
        };
        ReleaseSchedule { kind, horizon: self.horizon }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            ScheduleKind::Constant { .. } => "constant".into(),
            ScheduleKind::LinearDecreasing { .. } => "linear".into(),
            ScheduleKind::Bump { peak_day, .. } => format!("bump-{peak_day}"),
            ScheduleKind::Piecewise { values } => format!("piecewise-{}", values.len()),
        }
    }
}

fn piece_of(t: f64, pieces: usize, horizon: u32) -> usize {
    let raw = (t * pieces as f64 / horizon as f64).ceil();
    (raw.max(1.0) as usize).min(pieces)
}

/// Total mosquitoes released, summed daily over `t = 1..=T`.
pub fn total_release(schedule: &ReleaseSchedule) -> f64 {
    schedule.daily().iter().sum()
}

/// Rescales every schedule so that its maximum over the horizon is `peak`.
pub fn normalize_same_peak(schedules: &[ReleaseSchedule], peak: f64) -> Result<Vec<ReleaseSchedule>> {
    if !(peak > 0.0 && peak.is_finite()) {
        return Err(Error::InvalidInput(format!("peak must be positive, got {peak}")));
    }
    schedules
        .iter()
        .map(|s| {
            let current = s.peak();
            if current <= 0.0 {
                return Err(Error::InvalidInput(format!("cannot normalize zero-magnitude {} schedule", s.label())));
            }
            Ok(s.scaled(peak / current))
        })
        .collect()
}

/// Rescales every schedule so that its daily total over the horizon is `total`.
pub fn normalize_same_total(schedules: &[ReleaseSchedule], total: f64) -> Result<Vec<ReleaseSchedule>> {
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::InvalidInput(format!("total must be positive, got {total}")));
    }
    schedules
        .iter()
        .map(|s| {
            let current = total_release(s);
            if current <= 0.0 {
                return Err(Error::InvalidInput(format!("cannot normalize zero-magnitude {} schedule", s.label())));
            }
            Ok(s.scaled(total / current))
        })
        .collect()
}

/// Schedule description as accepted on the command line, e.g. `constant:1000`,
/// `linear:500`, `bump:1000@50`, `piecewise:1e6,0,0` or `zero`. The horizon
/// is supplied separately.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleSpec(pub ScheduleKind);

impl ScheduleSpec {
    pub fn with_horizon(self, horizon: u32) -> Result<ReleaseSchedule> {
        ReleaseSchedule::new(self.0, horizon)
    }
}

impl FromStr for ScheduleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |v: &str| -> Result<f64> {
            v.trim().parse::<f64>().map_err(|_| Error::Parse(format!("invalid number '{v}' in schedule '{s}'")))
        };
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        let kind = match head.trim() {
            "zero" | "none" => ScheduleKind::Constant { rate: 0.0 },
            "constant" => ScheduleKind::Constant { rate: num(rest)? },
            "linear" => ScheduleKind::LinearDecreasing { magnitude: num(rest)? },
            "bump" => {
                let (m, peak) = rest
                    .split_once('@')
                    .ok_or_else(|| Error::Parse(format!("bump schedule needs 'bump:MAG@DAY', got '{s}'")))?;
                ScheduleKind::Bump { magnitude: num(m)?, peak_day: num(peak)? }
            }
            "piecewise" => ScheduleKind::Piecewise { values: rest.split(',').map(num).collect::<Result<_>>()? },
            other => return Err(Error::Parse(format!("unknown schedule kind '{other}'"))),
        };
        Ok(ScheduleSpec(kind))
    }
}

impl fmt::Display for ScheduleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            ScheduleKind::Constant { rate } => write!(f, "constant:{rate}"),
            ScheduleKind::LinearDecreasing { magnitude } => write!(f, "linear:{magnitude}"),
            ScheduleKind::Bump { magnitude, peak_day } => write!(f, "bump:{magnitude}@{peak_day}"),
            ScheduleKind::Piecewise { values } => {
                let joined: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                write!(f, "piecewise:{}", joined.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn linear_endpoints() {
        let s = ReleaseSchedule::linear(1000.0, 365).unwrap();
        assert_eq!(s.evaluate(365.0).unwrap(), 0.0);
        assert_eq!(s.evaluate(0.0).unwrap(), 2000.0);
        assert_eq!(s.peak(), 2000.0);
    }

    #[test]
    fn bump_peak() {
        let s = ReleaseSchedule::bump(1000.0, 50.0, 365).unwrap();
        assert_eq!(s.evaluate(50.0).unwrap(), 1000.0);
        assert_eq!(s.peak(), 1000.0);
        assert!(s.evaluate(80.0).unwrap() < 1000.0);
    }

    #[test]
    fn evaluate_outside_horizon() {
        let s = ReleaseSchedule::constant(1.0, 10).unwrap();
        assert!(s.evaluate(-0.5).is_err());
        assert!(s.evaluate(10.5).is_err());
    }

    #[test]
    fn totals() {
        assert_eq!(total_release(&ReleaseSchedule::constant(100.0, 10).unwrap()), 1000.0);
        assert_eq!(total_release(&ReleaseSchedule::piecewise(vec![100.0, 0.0], 10).unwrap()), 500.0);
        // Arithmetic series: sum_{t=1}^{365} (2m/365)(365 - t) = m * 364.
        let lin = ReleaseSchedule::linear(1000.0, 365).unwrap();
        assert_relative_eq!(total_release(&lin), 364_000.0, max_relative = 1e-12);
    }

    #[test]
    fn paper_piece_layout() {
        let s = ReleaseSchedule::piecewise((1..=12).map(f64::from).collect(), 365).unwrap();
        let counts = s.piece_day_counts().unwrap();
        assert_eq!(counts.iter().sum::<u32>(), 365);
        assert_eq!(counts[0], 30);
        assert_eq!(s.evaluate(0.0).unwrap(), 1.0);
        assert_eq!(s.evaluate(30.0).unwrap(), 1.0);
        assert_eq!(s.evaluate(31.0).unwrap(), 2.0);
        assert_eq!(s.evaluate(365.0).unwrap(), 12.0);
        assert_eq!(s.breakpoints().len(), 11);
    }

    #[test]
    fn right_open_breakpoints() {
        let s = ReleaseSchedule::piecewise((1..=12).map(f64::from).collect(), 365).unwrap();
        let ell = 31.0;
        for i in 1..12 {
            for eps in [1e-9, 0.25, 0.5, 0.999] {
                assert_eq!(s.evaluate(ell * i as f64 + eps).unwrap(), (i + 1) as f64, "i={i} eps={eps}");
            }
        }
    }

    #[test]
    fn same_peak_normalization() {
        let out = normalize_same_peak(
            &[
                ReleaseSchedule::constant(500.0, 365).unwrap(),
                ReleaseSchedule::bump(2000.0, 50.0, 365).unwrap(),
                ReleaseSchedule::linear(7.0, 365).unwrap(),
            ],
            1000.0,
        )
        .unwrap();
        assert_eq!(out[0].kind, ScheduleKind::Constant { rate: 1000.0 });
        assert_eq!(out[1].kind, ScheduleKind::Bump { magnitude: 1000.0, peak_day: 50.0 });
        assert_eq!(out[2].kind, ScheduleKind::LinearDecreasing { magnitude: 500.0 });
        assert!(normalize_same_peak(&[ReleaseSchedule::zero(10)], 1.0).is_err());
    }

    #[test]
    fn same_total_normalization() {
        let out = normalize_same_total(&[ReleaseSchedule::constant(3.0, 365).unwrap()], 365_000.0).unwrap();
        assert_relative_eq!(out[0].peak(), 1000.0, max_relative = 1e-12);

        // Independent sum of the sech series.
        let series: f64 = (1..=365).map(|t| 1.0 / (0.01 * (t as f64 - 50.0)).cosh()).sum();
        let out = normalize_same_total(&[ReleaseSchedule::bump(1.0, 50.0, 365).unwrap()], 365_000.0).unwrap();
        let ScheduleKind::Bump { magnitude, .. } = out[0].kind else { panic!() };
        assert_relative_eq!(magnitude, 365_000.0 / series, max_relative = 1e-12);
    }

    #[test]
    fn parse_specs() {
        let p = |s: &str| s.parse::<ScheduleSpec>().unwrap().0;
        assert_eq!(p("constant:1000"), ScheduleKind::Constant { rate: 1000.0 });
        assert_eq!(p("bump:10@100"), ScheduleKind::Bump { magnitude: 10.0, peak_day: 100.0 });
        assert_eq!(p("piecewise:1,2,3e6"), ScheduleKind::Piecewise { values: vec![1.0, 2.0, 3e6] });
        assert_eq!(p("zero"), ScheduleKind::Constant { rate: 0.0 });
        assert!("bump:10".parse::<ScheduleSpec>().is_err());
        assert!("wiggle:3".parse::<ScheduleSpec>().is_err());
        let spec = ScheduleSpec(ScheduleKind::Bump { magnitude: 2.5, peak_day: 50.0 });
        assert_eq!(spec.to_string().parse::<ScheduleSpec>().unwrap(), spec);
    }

    #[test]
    fn rejects_negative_values() {
        assert!(ReleaseSchedule::constant(-1.0, 10).is_err());
        assert!(ReleaseSchedule::piecewise(vec![1.0, f64::NAN], 10).is_err());
        assert!(ReleaseSchedule::piecewise(vec![], 10).is_err());
    }
}
