//! Grid axis syntax: `1..6` (inclusive), `5..40:5` (with step), `1,2,5`, or
//! any comma-separated mix of these.

pub fn parse_grid(spec: &str) -> Result<Vec<u32>, String> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim) {
        if part.is_empty() {
            return Err(format!("empty element in '{spec}'"));
        }
        let num = |s: &str| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| format!("'{s}' is not a non-negative integer"))
        };
        match part.split_once("..") {
            Some((lo, rest)) => {
                let (hi, step) = match rest.split_once(':') {
                    Some((hi, step)) => (num(hi)?, num(step)?),
                    None => (num(rest)?, 1),
                };
                let lo = num(lo)?;
                if step == 0 {
                    return Err(format!("zero step in '{part}'"));
                }
                if hi < lo {
                    return Err(format!("descending range '{part}'"));
                }
                out.extend((lo..=hi).step_by(step as usize));
            }
            None => out.push(num(part)?),
        }
    }
    if out.windows(2).any(|w| w[0] >= w[1]) {
        return Err(format!("values in '{spec}' must be strictly ascending"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse_grid("1..6").unwrap(), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(parse_grid("5..40:5").unwrap(), vec![5, 10, 15, 20, 25, 30, 35, 40]);
        assert_eq!(parse_grid("1, 3,7").unwrap(), vec![1, 3, 7]);
        assert_eq!(parse_grid("1..3,10..20:5").unwrap(), vec![1, 2, 3, 10, 15, 20]);
        assert_eq!(parse_grid("5..12:5").unwrap(), vec![5, 10]);
    }

    #[test]
    fn rejects() {
        for bad in ["", "3..1", "1..5:0", "a..3", "2,1", "1,,2", "-1..3", "1..3,3"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }
}
