//! Value lists on the command line: `a,b,c` or an inclusive `start:end:step`.

use std::str::FromStr;

use crate::error::{CliError, Result};

fn parse_one<T: FromStr>(flag: &str, text: &str) -> Result<T> {
    text.trim()
        .parse()
        .map_err(|_| CliError::config(flag, format!("cannot parse {text:?}")))
}

fn non_empty<T>(flag: &str, values: Vec<T>) -> Result<Vec<T>> {
    if values.is_empty() {
        Err(CliError::config(flag, "empty range"))
    } else {
        Ok(values)
    }
}

pub fn float_list(flag: &str, text: &str) -> Result<Vec<f64>> {
    if let Some((start, end, step)) = split_range(text) {
        let (start, end, step): (f64, f64, f64) =
            (parse_one(flag, start)?, parse_one(flag, end)?, parse_one(flag, step)?);
        if !(step > 0.0 && step.is_finite()) {
            return Err(CliError::config(flag, "range step must be positive"));
        }
        let slack = step * 1e-9;
        let mut values = Vec::new();
        let mut k = 0u32;
        loop {
            let x = start + f64::from(k) * step;
            if x > end + slack {
                break;
            }
            // Trim accumulation noise such as 0.15000000000000002.
            values.push((x * 1e12).round() / 1e12);
            k += 1;
        }
        return non_empty(flag, values);
    }
    non_empty(flag, comma_list(flag, text)?)
}

pub fn int_list(flag: &str, text: &str) -> Result<Vec<u64>> {
    if let Some((start, end, step)) = split_range(text) {
        let (start, end, step): (u64, u64, u64) =
            (parse_one(flag, start)?, parse_one(flag, end)?, parse_one(flag, step)?);
        if step == 0 {
            return Err(CliError::config(flag, "range step must be positive"));
        }
        return non_empty(flag, (start..=end).step_by(step as usize).collect());
    }
    non_empty(flag, comma_list(flag, text)?)
}

fn split_range(text: &str) -> Option<(&str, &str, &str)> {
    let mut parts = text.split(':');
    match (parts.next(), parts.next(), parts.next(), parts.next()) {
        (Some(a), Some(b), Some(c), None) => Some((a, b, c)),
        (Some(a), Some(b), None, None) => Some((a, b, "1")),
        _ => None,
    }
}

fn comma_list<T: FromStr>(flag: &str, text: &str) -> Result<Vec<T>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_one(flag, s))
        .collect()
}
