//! Model spec strings: `family:key=value,...`, case-insensitive.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::{Family, TailModel};
use crate::error::{Error, Result};

fn config<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

struct Params {
    family: String,
    values: BTreeMap<String, f64>,
}

impl Params {
    fn take(&mut self, keys: &[&str]) -> Result<f64> {
        for k in keys {
            if let Some(v) = self.values.remove(*k) {
                return Ok(v);
            }
        }
        config(format!("model '{}' needs parameter '{}'", self.family, keys[0]))
    }

    fn finish(self) -> Result<()> {
        match self.values.keys().next() {
            Some(k) => config(format!("unknown parameter '{k}' for model '{}'", self.family)),
            None => Ok(()),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let (name, rest) = s.split_once(':').unwrap_or((s.as_str(), ""));
        let mut values = BTreeMap::new();
        for item in rest.split(',').map(str::trim).filter(|i| !i.is_empty()) {
            let Some((k, v)) = item.split_once('=') else {
                return config(format!("expected key=value, got '{item}'"));
            };
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("parameter '{}' is not a number: '{}'", k.trim(), v.trim())))?;
            if values.insert(k.trim().to_string(), v).is_some() {
                return config(format!("parameter '{}' given twice", k.trim()));
            }
        }
        let name = name.trim().replace('-', "_");
        let mut p = Params {
            family: name.clone(),
            values,
        };
        let family = match name.as_str() {
            "std_pareto" | "stdpareto" => Family::StdPareto {
                alpha: p.take(&["alpha"])?,
            },
            "pareto" | "lomax" => Family::Pareto {
                alpha: p.take(&["alpha"])?,
                theta: p.take(&["theta"])?,
            },
            "burr" => Family::Burr {
                a: p.take(&["a"])?,
                b: p.take(&["b"])?,
            },
            "frechet" => Family::Frechet {
                alpha: p.take(&["alpha"])?,
            },
            "hall_weiss" | "hallweiss" => Family::HallWeiss {
                alpha: p.take(&["alpha"])?,
                rho: p.take(&["rho"])?,
            },
            "abs_t" | "abs_student_t" => Family::AbsStudentT {
                v: p.take(&["v", "nu", "df"])?,
            },
            "g_and_h" | "gh" => Family::GAndH {
                g: p.take(&["g"])?,
                h: p.take(&["h"])?,
            },
            other => return config(format!("unknown model family '{other}'")),
        };
        p.finish()?;
        Ok(family)
    }
}

impl FromStr for TailModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TailModel::new(s.parse()?)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::StdPareto { alpha } => write!(f, "std_pareto:alpha={alpha}"),
            Family::Pareto { alpha, theta } => write!(f, "pareto:alpha={alpha},theta={theta}"),
            Family::Burr { a, b } => write!(f, "burr:a={a},b={b}"),
            Family::Frechet { alpha } => write!(f, "frechet:alpha={alpha}"),
            Family::HallWeiss { alpha, rho } => write!(f, "hall_weiss:alpha={alpha},rho={rho}"),
            Family::AbsStudentT { v } => write!(f, "abs_t:v={v}"),
            Family::GAndH { g, h } => write!(f, "g_and_h:g={g},h={h}"),
        }
    }
}

impl fmt::Display for TailModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.family().fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_case_insensitively() {
        let f: Family = "BURR:A=0.8, b=2.5".parse().unwrap();
        assert_eq!(f, Family::Burr { a: 0.8, b: 2.5 });
        let f: Family = "G-and-H:g=2,h=0.5".parse().unwrap();
        assert_eq!(f, Family::GAndH { g: 2.0, h: 0.5 });
        let f: Family = "abs_student_t:nu=3".parse().unwrap();
        assert_eq!(f, Family::AbsStudentT { v: 3.0 });
    }

    #[test]
    fn round_trips_through_display() {
        for s in [
            "std_pareto:alpha=1.5",
            "pareto:alpha=4,theta=1",
            "burr:a=0.8,b=2.5",
            "frechet:alpha=2",
            "hall_weiss:alpha=2,rho=-1",
            "abs_t:v=2",
            "g_and_h:g=2,h=0.5",
        ] {
            let f: Family = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
    }

    #[test]
    fn syntax_problems_are_config_errors() {
        for s in ["weibull:k=1", "burr:a=1", "burr:a=1,b=2,c=3", "burr:a=x,b=1", "burr:a", "burr:a=1,a=2,b=1"] {
            assert!(matches!(s.parse::<Family>(), Err(Error::Config(_))), "{s}");
        }
    }

    #[test]
    fn invalid_values_are_domain_errors() {
        assert!(matches!("burr:a=-1,b=2".parse::<TailModel>(), Err(Error::Domain(_))));
    }
}
