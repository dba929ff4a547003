use std::str::FromStr;

use crate::error::CliError;

/// `name=start:stop:step`. Points are `start + k·step` for
/// `k = 0..K` with `K = round((stop − start)/step)`; the final point is `stop`
/// itself, so both endpoints are included whenever the grid reaches `stop`
/// within half a step.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Sweep {
    pub fn points(&self) -> Vec<f64> {
        let last = ((self.stop - self.start) / self.step).round() as usize;
        (0..=last)
            .map(|k| {
                if k == last && k > 0 {
                    self.stop
                } else {
                    self.start + k as f64 * self.step
                }
            })
            .collect()
    }
}

impl FromStr for Sweep {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| {
            CliError::Usage(format!(
                "bad sweep {s:?}: {why} (expected name=start:stop:step)"
            ))
        };
        let (name, range) = s.split_once('=').ok_or_else(|| bad("missing '='"))?;
        let parts: Vec<f64> = range
            .split(':')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad("non-numeric bound"))?;
        let [start, stop, step] = parts[..] else {
            return Err(bad("need three fields"));
        };
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(bad("non-finite bound"));
        }
        if step <= 0.0 || stop < start {
            return Err(bad("need step > 0 and start <= stop"));
        }
        let name = name.trim();
        if name.is_empty() {
            return Err(bad("empty parameter name"));
        }
        Ok(Self {
            name: name.to_string(),
            start,
            stop,
            step,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_inclusive() {
        let s: Sweep = "a=0:1:0.005".parse().unwrap();
        let p = s.points();
        assert_eq!(p.len(), 201);
        assert_eq!((p[0], p[200]), (0.0, 1.0));

        let s: Sweep = "f=-1:0:0.01".parse().unwrap();
        let p = s.points();
        assert_eq!(p.len(), 101);
        assert_eq!(*p.last().unwrap(), 0.0);
    }

    #[test]
    fn half_step_tolerance() {
        let s: Sweep = "x=0:1:0.3".parse().unwrap();
        assert_eq!(s.points(), vec![0.0, 0.3, 0.6, 1.0]);
        let s: Sweep = "x=0:1:0.45".parse().unwrap();
        assert_eq!(s.points(), vec![0.0, 0.45, 1.0]);
        let s: Sweep = "x=0:0.04:0.1".parse().unwrap();
        assert_eq!(s.points(), vec![0.0]);
        let s: Sweep = "x=0.5:0.5:0.1".parse().unwrap();
        assert_eq!(s.points(), vec![0.5]);
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "a",
            "a=0:1",
            "a=0:1:0",
            "a=1:0:0.1",
            "a=x:1:0.1",
            "=0:1:0.1",
            "a=0:1:0.1:2",
        ] {
            assert!(bad.parse::<Sweep>().is_err(), "{bad}");
        }
    }
}
