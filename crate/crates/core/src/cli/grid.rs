//! Dimension grids of the form `start:end:linear|geometric`.

use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NGrid {
    pub start: usize,
    pub end: usize,
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    /// Every integer from start to end.
    Linear,
    /// start, 2 start, 4 start, ... up to end.
    Geometric,
}

impl NGrid {
    pub fn points(&self) -> Vec<usize> {
        match self.spacing {
            Spacing::Linear => (self.start..=self.end).collect(),
            Spacing::Geometric => std::iter::successors(Some(self.start), |&n| n.checked_mul(2))
                .take_while(|&n| n <= self.end)
                .collect(),
        }
    }
}

impl FromStr for NGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let fields: Vec<&str> = s.split(':').collect();
        let [start, end, spacing] = fields[..] else {
            return Err(format!("grid {s:?} is not start:end:linear|geometric"));
        };
        let parse = |v: &str| {
            v.parse::<usize>()
                .map_err(|_| format!("grid bound {v:?} is not a positive integer"))
        };
        let (start, end) = (parse(start)?, parse(end)?);
        let spacing = match spacing {
            "linear" => Spacing::Linear,
            "geometric" => Spacing::Geometric,
            other => return Err(format!("grid spacing {other:?} is not linear or geometric")),
        };
        if start == 0 {
            return Err("grid start must be at least 1".into());
        }
        if start > end {
            return Err(format!("grid {s:?} is empty"));
        }
        Ok(Self {
            start,
            end,
            spacing,
        })
    }
}
