use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Scalar;

/// Exponent vector of a commutative monomial.
pub type Exponents = Vec<u32>;

/// A polynomial in commuting variables `x0, ..., x{n-1}` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Exponents, Scalar>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Polynomial::monomial(nvars, vec![0; nvars], c)
    }

    pub fn variable(nvars: usize, k: usize) -> Self {
        let mut e = vec![0; nvars];
        e[k] = 1;
        Polynomial::monomial(nvars, e, Scalar::one())
    }

    pub fn monomial(nvars: usize, exps: Exponents, c: Scalar) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Polynomial { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exps: Exponents, c: &Scalar) {
        let slot = self.terms.entry(exps.clone()).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), &(c * s));
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, &(c1 * c2));
            }
        }
        out
    }

    /// Value at a point.
    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(x).fold(c.clone(), |acc, (k, v)| &acc * &v.pow(*k)))
            .sum()
    }

    pub fn partial(&self, k: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[k] > 0 {
                let mut f = e.clone();
                f[k] -= 1;
                out.add_term(f, &(c * &Scalar::from_int(e[k] as i64)));
            }
        }
        out
    }

    /// Largest total degree of a term; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// The weighted degree if the polynomial is homogeneous and nonzero.
    pub fn homogeneous_degree(&self, weights: &[u32]) -> Option<Option<usize>> {
        let mut deg = None;
        for e in self.terms.keys() {
            let d = weighted_degree(e, weights);
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => return None,
                _ => {}
            }
        }
        Some(deg)
    }

    /// Parses strings like `"3/2*x0^2*x1 - x2 + 5"`.
    pub fn parse(s: &str, nvars: usize) -> Result<Self> {
        let err = |msg: &str| Error::Parse(format!("{msg} in polynomial `{s}`"));
        let mut out = Polynomial::zero(nvars);
        let mut chars = s.chars().filter(|c| !c.is_whitespace()).peekable();
        if chars.peek().is_none() {
            return Err(err("empty input"));
        }
        let compact: String = chars.collect();
        // split into signed terms
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && !(i > 0 && compact[..i].ends_with('^')) {
                if i == 0 {
                    negative = ch == '-';
                    continue;
                }
                if current.is_empty() {
                    return Err(err("dangling sign"));
                }
                terms.push((negative, std::mem::take(&mut current)));
                negative = ch == '-';
            } else {
                current.push(ch);
            }
        }
        if current.is_empty() {
            return Err(err("dangling sign"));
        }
        terms.push((negative, current));
        for (neg, term) in terms {
            let mut coeff = Scalar::one();
            let mut exps = vec![0u32; nvars];
            for factor in term.split('*') {
                if factor.is_empty() {
                    return Err(err("empty factor"));
                }
                if let Some(rest) = factor.strip_prefix('x') {
                    let (idx, pow) = match rest.split_once('^') {
                        Some((i, p)) => (i, p.parse::<u32>().map_err(|_| err("bad exponent"))?),
                        None => (rest, 1),
                    };
                    let k: usize = idx.parse().map_err(|_| err("bad variable index"))?;
                    if k >= nvars {
                        return Err(err(&format!("variable x{k} out of range")));
                    }
                    exps[k] += pow;
                } else {
                    let c: Scalar = factor.parse().map_err(|_| err(&format!("bad coefficient `{factor}`")))?;
                    coeff = &coeff * &c;
                }
            }
            if neg {
                coeff = -coeff;
            }
            out.add_term(exps, &coeff);
        }
        Ok(out)
    }
}

pub fn weighted_degree(e: &[u32], weights: &[u32]) -> usize {
    e.iter().zip(weights).map(|(a, w)| (a * w) as usize).sum()
}

/// Name of a monomial: `x0^2*x1`, or `1` for the constant monomial.
pub fn monomial_name(e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, a)| **a > 0)
        .map(|(k, a)| if *a == 1 { format!("x{k}") } else { format!("x{k}^{a}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// All monomials of weighted degree `d`, in descending lexicographic order (`x0` largest).
pub fn monomials_of_degree(weights: &[u32], d: usize) -> Vec<Exponents> {
    fn rec(weights: &[u32], k: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Exponents>) {
        if k == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = weights[k] as usize;
        let max = if w == 0 { 0 } else { left / w };
        for a in (0..=max).rev() {
            cur.push(a as u32);
            rec(weights, k + 1, left - a * w, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(weights, 0, d, &mut Vec::new(), &mut out);
    out
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // descending order so the leading monomial prints first
        for (e, c) in self.terms.iter().rev() {
            let (neg, abs) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let name = monomial_name(e);
            match (abs.is_one(), name.as_str()) {
                (_, "1") => write!(f, "{abs}")?,
                (true, _) => write!(f, "{name}")?,
                (false, _) => write!(f, "{abs}*{name}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
