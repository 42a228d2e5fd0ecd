//! Exact edge weights.
//!
//! Weights are positive rationals. Shortest-path code works on integer
//! units obtained by clearing a common denominator.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Weight = Ratio<i64>;

/// Parses `3`, `0.25` or `7/3`.
pub fn parse_weight(s: &str) -> Option<Weight> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().ok()?;
        let q: i64 = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        return Some(Ratio::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 12 {
        return None;
    }
    let den = 10i64.checked_pow(frac.len() as u32)?;
    let int_v: i64 = if int.is_empty() { 0 } else { int.parse().ok()? };
    let frac_v: i64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
    let num = int_v.checked_mul(den)?.checked_add(frac_v)?;
    Some(Ratio::new(if neg { -num } else { num }, den))
}

/// Decimal rendering when the denominator divides a power of ten, `p/q` otherwise.
pub fn format_weight(w: &Weight) -> String {
    let (mut n, d) = (*w.numer(), *w.denom());
    let mut twos = 0u32;
    let mut fives = 0u32;
    let mut r = d;
    while r % 2 == 0 {
        r /= 2;
        twos += 1;
    }
    while r % 5 == 0 {
        r /= 5;
        fives += 1;
    }
    if r != 1 {
        return format!("{}/{}", n, d);
    }
    let digits = twos.max(fives);
    if digits == 0 {
        return n.to_string();
    }
    let scale = 10i64.pow(digits);
    n *= scale / d;
    let sign = if n < 0 { "-" } else { "" };
    let a = n.abs();
    let s = format!("{}{}.{:0width$}", sign, a / scale, a % scale, width = digits as usize);
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Common denominator of a weight table; converts weights to integer units.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Scale {
    den: i64,
}

impl Scale {
    pub fn for_weights(ws: &[Weight]) -> Scale {
        let den = ws.iter().fold(1i64, |acc, w| acc.lcm(w.denom()));
        Scale { den }
    }

    pub fn units(&self, w: &Weight) -> u64 {
        (w.numer() * (self.den / w.denom())) as u64
    }

    pub fn weight(&self, units: u64) -> Weight {
        Ratio::new(units as i64, self.den)
    }
}

pub fn check_positive(ws: &[Weight]) -> Result<()> {
    match ws.iter().position(|w| w.is_zero() || w.is_negative()) {
        Some(e) => Err(Error::NonPositiveWeight(e)),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!(parse_weight("1"), Some(Ratio::from_integer(1)));
        assert_eq!(parse_weight("0.25"), Some(Ratio::new(1, 4)));
        assert_eq!(parse_weight(".5"), Some(Ratio::new(1, 2)));
        assert_eq!(parse_weight("7/3"), Some(Ratio::new(7, 3)));
        assert_eq!(parse_weight("x"), None);
        assert_eq!(parse_weight("1/0"), None);
    }

    #[test]
    fn formats_round_trip() {
        for s in ["1", "0.25", "2.5", "0.015625", "7/3", "-1.5"] {
            let w = parse_weight(s).unwrap();
            assert_eq!(format_weight(&w), s);
            assert_eq!(parse_weight(&format_weight(&w)), Some(w));
        }
    }

    #[test]
    fn scale_units() {
        let ws = [Ratio::new(1, 4), Ratio::new(2, 3), Ratio::from_integer(1)];
        let s = Scale::for_weights(&ws);
        assert_eq!(s.units(&ws[0]), 3);
        assert_eq!(s.units(&ws[1]), 8);
        assert_eq!(s.weight(11), Ratio::new(11, 12));
    }
}
