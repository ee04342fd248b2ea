//! Grid syntax shared by config files and flags.
//!
//! Real grids: `a:b:steps` (inclusive, evenly spaced) or a comma list such as
//! `0.25,0.5,pi/4`. Integer lists: comma-separated items, each an integer,
//! an inclusive range `a..b`, or a geometric range `a..b*r`.

use crate::config::eval_number;

pub fn parse_real_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.len() {
        1 => s.split(',').map(eval_number).collect(),
        3 => {
            let a = eval_number(parts[0])?;
            let b = eval_number(parts[1])?;
            let steps: usize = parts[2].parse().map_err(|_| format!("step count `{}` is not an integer", parts[2]))?;
            match steps {
                0 => Err("a grid needs at least one step".into()),
                1 if a != b => Err(format!("one step cannot span {a}..{b}")),
                1 => Ok(vec![a]),
                _ => {
                    let h = (b - a) / (steps - 1) as f64;
                    Ok((0..steps).map(|i| if i + 1 == steps { b } else { a + h * i as f64 }).collect())
                }
            }
        }
        _ => Err(format!("`{s}` is neither `a:b:steps` nor a comma list")),
    }
}

pub fn parse_int_list(s: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for item in s.split(',') {
        let int = |x: &str| x.parse::<usize>().map_err(|_| format!("`{x}` is not a nonnegative integer"));
        match item.split_once("..") {
            None => out.push(int(item)?),
            Some((a, rest)) => {
                let a = int(a)?;
                match rest.split_once('*') {
                    None => {
                        let b = int(rest)?;
                        if b < a {
                            return Err(format!("empty range `{item}`"));
                        }
                        out.extend(a..=b);
                    }
                    Some((b, r)) => {
                        let (b, r) = (int(b)?, int(r)?);
                        if a == 0 || r < 2 || b < a {
                            return Err(format!("geometric range `{item}` needs 1 <= a <= b and ratio >= 2"));
                        }
                        let mut x = a;
                        while x <= b {
                            out.push(x);
                            x = x.saturating_mul(r);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_grids() {
        assert_eq!(parse_real_grid("0:1:5").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_real_grid("0.5").unwrap(), vec![0.5]);
        assert_eq!(parse_real_grid("2:2:1").unwrap(), vec![2.0]);
        assert_eq!(parse_real_grid("0.25,pi/2").unwrap(), vec![0.25, std::f64::consts::FRAC_PI_2]);
        assert!(parse_real_grid("0:1").is_err());
        assert!(parse_real_grid("0:1:0").is_err());
        assert!(parse_real_grid("0:1:1").is_err());
        assert!(parse_real_grid("0,,1").is_err());
    }

    #[test]
    fn int_lists() {
        assert_eq!(parse_int_list("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_int_list("8..512*2").unwrap(), vec![8, 16, 32, 64, 128, 256, 512]);
        assert_eq!(parse_int_list("3,1..2,7").unwrap(), vec![3, 1, 2, 7]);
        assert!(parse_int_list("4..1").is_err());
        assert!(parse_int_list("0..8*2").is_err());
        assert!(parse_int_list("-1").is_err());
        assert!(parse_int_list("").is_err());
    }
}
