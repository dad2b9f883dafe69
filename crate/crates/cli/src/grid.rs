use crate::error::CliError;

/// Parses `start:stop:step` into `start + k·step` for every `k` with
/// `start + k·step <= stop + step/2`. A single number is a one-point grid.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = |why: &str| CliError::Input(format!("grid {s:?}: {why}"));
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    let num = |t: &str| -> Result<f64, CliError> {
        let v: f64 = t.parse().map_err(|_| bad(&format!("{t:?} is not a number")))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad("values must be finite"))
        }
    };
    match parts.as_slice() {
        [single] => Ok(vec![num(single)?]),
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if step <= 0.0 {
                return Err(bad("step must be positive"));
            }
            if stop < start {
                return Err(bad("stop is below start"));
            }
            let count = ((stop - start) / step + 0.5).floor() as usize + 1;
            if count > 1_000_000 {
                return Err(bad("more than 10^6 points"));
            }
            Ok((0..count).map(|k| start + k as f64 * step).collect())
        }
        _ => Err(bad("expected start:stop:step")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inclusive_endpoints() {
        let g = parse_grid("0:5:0.25").unwrap();
        assert_eq!(g.len(), 21);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[20], 5.0);
        assert_eq!(parse_grid("0:1:0.3").unwrap().len(), 4);
        assert_eq!(parse_grid("0:1:0.45").unwrap().len(), 3);
        assert_eq!(parse_grid("2").unwrap(), vec![2.0]);
    }

    #[test]
    fn malformed() {
        for s in ["", "a:b:c", "0:1", "0:1:0", "1:0:0.5", "0:1:-1", "0:inf:1"] {
            assert!(parse_grid(s).is_err(), "{s}");
        }
    }
}
