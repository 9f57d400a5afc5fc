//! Grid arguments: comma lists (`0,0.5,0.9`) or inclusive ranges
//! (`start:step:stop`).

use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A grid as written on the command line or in a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridValue {
    List(Vec<f64>),
    Text(String),
}

impl GridValue {
    pub fn resolve(&self) -> Result<Vec<f64>, CliError> {
        match self {
            GridValue::List(v) => {
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(CliError::Usage("grid values must be finite".into()));
                }
                Ok(v.clone())
            }
            GridValue::Text(s) => parse_grid(s),
        }
    }
}

pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(CliError::Usage("empty grid".into()));
    }
    if text.contains(':') {
        return parse_range(text);
    }
    text.split(',').map(|t| parse_number(t.trim())).collect()
}

fn parse_number(t: &str) -> Result<f64, CliError> {
    let v: f64 = t.parse().map_err(|_| CliError::Usage(format!("not a number: {t:?}")))?;
    if !v.is_finite() {
        return Err(CliError::Usage(format!("grid value must be finite: {t:?}")));
    }
    Ok(v)
}

fn parse_range(text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, step, stop] = parts.as_slice() else {
        return Err(CliError::Usage(format!("range must be start:step:stop, got {text:?}")));
    };
    let (start, step, stop) = (parse_number(start)?, parse_number(step)?, parse_number(stop)?);
    if step <= 0.0 {
        return Err(CliError::Usage(format!("range step must be positive, got {step}")));
    }
    if stop < start {
        return Err(CliError::Usage(format!("range stop {stop} is below start {start}")));
    }
    // Index-based so the points carry no accumulated rounding.
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 1_000_000 {
        return Err(CliError::Usage(format!("range {text:?} has too many points")));
    }
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_ranges() {
        assert_eq!(parse_grid("0, 0.5,0.9").unwrap(), vec![0.0, 0.5, 0.9]);
        assert_eq!(
            parse_grid("-10:10:40").unwrap(),
            vec![-10.0, 0.0, 10.0, 20.0, 30.0, 40.0]
        );
        assert_eq!(parse_grid("3").unwrap(), vec![3.0]);
        let r = parse_grid("0:0.1:1").unwrap();
        assert_eq!(r.len(), 11);
        assert!((r[10] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_malformed_grids() {
        for bad in ["", "a,b", "1:2", "0:-1:5", "5:1:0", "1,inf", "0:0:1"] {
            assert!(parse_grid(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn config_values() {
        let v: GridValue = serde_json_from("[1, 2.5]");
        assert_eq!(v.resolve().unwrap(), vec![1.0, 2.5]);
        let v: GridValue = serde_json_from("\"0:5:10\"");
        assert_eq!(v.resolve().unwrap(), vec![0.0, 5.0, 10.0]);
    }

    fn serde_json_from(s: &str) -> GridValue {
        serde_json::from_str(s).unwrap()
    }
}
