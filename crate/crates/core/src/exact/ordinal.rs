//! Ordinals below ω^5 in Cantor normal form.
//!
//! An ordinal is `c_4·ω^4 + … + c_1·ω + c_0` with natural coefficients.
//! Stage labels of elimination traces live here; finite games only ever use
//! the naturals, the ranked family reaches `ω·k`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::ParseError;

/// Highest exponent of ω that can carry a nonzero coefficient.
pub const MAX_DEGREE: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    // coeffs[k] is the coefficient of ω^k; no trailing zeros.
    coeffs: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("ordinal degree {0} exceeds the supported maximum ω^{MAX_DEGREE}")]
pub struct DegreeOverflow(pub usize);

impl Ordinal {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn finite(n: u64) -> Self {
        Self::from_cnf(&[n]).expect("degree 0")
    }

    /// `ω·k`
    pub fn omega_times(k: u64) -> Self {
        Self::from_cnf(&[k, 0]).expect("degree 1")
    }

    /// Builds from coefficients listed highest degree first, `(c_k, …, c_0)`.
    pub fn from_cnf(cnf: &[u64]) -> Result<Self, DegreeOverflow> {
        let mut coeffs: Vec<u64> = cnf.iter().rev().copied().collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.len() > MAX_DEGREE + 1 {
            return Err(DegreeOverflow(coeffs.len() - 1));
        }
        Ok(Self { coeffs })
    }

    /// Coefficients highest degree first; empty for zero.
    pub fn cnf(&self) -> Vec<u64> {
        self.coeffs.iter().rev().copied().collect()
    }

    pub fn coefficient(&self, degree: usize) -> u64 {
        self.coeffs.get(degree).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_limit(&self) -> bool {
        !self.is_zero() && self.coefficient(0) == 0
    }

    pub fn as_finite(&self) -> Option<u64> {
        match self.coeffs.len() {
            0 => Some(0),
            1 => Some(self.coeffs[0]),
            _ => None,
        }
    }

    pub fn succ(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        coeffs[0] += 1;
        Self { coeffs }
    }

    /// `self + n` for a natural `n`.
    pub fn plus(&self, n: u64) -> Self {
        if n == 0 {
            return self.clone();
        }
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        coeffs[0] += n;
        Self { coeffs }
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Self::finite(n)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (degree, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            terms.push(match degree {
                0 => c.to_string(),
                1 => format!("w*{c}"),
                d => format!("w^{d}*{c}"),
            });
        }
        write!(f, "{}", terms.join("+"))
    }
}

impl FromStr for Ordinal {
    type Err = ParseError;

    /// Accepts `w^2*a+w*b+c` with zero terms omitted; a bare `w` or `w^k`
    /// means coefficient one.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = || ParseError::Ordinal(text.to_string());
        let text = text.trim();
        if text.is_empty() {
            return Err(bad());
        }
        let mut coeffs = [0u64; MAX_DEGREE + 1];
        let mut last_degree: Option<usize> = None;
        for term in text.split('+') {
            let term = term.trim();
            let (degree, coeff) = if let Some(rest) = term.strip_prefix('w') {
                let (degree_part, coeff_part) = match rest.split_once('*') {
                    Some((d, c)) => (d, Some(c)),
                    None => (rest, None),
                };
                let degree = if degree_part.is_empty() {
                    1
                } else {
                    degree_part
                        .strip_prefix('^')
                        .and_then(|d| d.parse::<usize>().ok())
                        .ok_or_else(bad)?
                };
                let coeff = match coeff_part {
                    Some(c) => c.parse::<u64>().map_err(|_| bad())?,
                    None => 1,
                };
                (degree, coeff)
            } else {
                (0, term.parse::<u64>().map_err(|_| bad())?)
            };
            if degree > MAX_DEGREE {
                return Err(bad());
            }
            // terms must appear in strictly decreasing degree
            if last_degree.is_some_and(|last| degree >= last) {
                return Err(bad());
            }
            last_degree = Some(degree);
            coeffs[degree] = coeff;
        }
        let cnf: Vec<u64> = coeffs.iter().rev().copied().collect();
        Self::from_cnf(&cnf).map_err(|_| bad())
    }
}
