//! Polynomial data: complex polynomials in `z, z̄` (entries of complex
//! matrices, scalar test functions) and real polynomials in `y` (edge
//! graphs), together with the line-oriented text grammar used by the
//! definition files.
//!
//! Grammar, one statement per line, `#` starts a comment:
//!
//! ```text
//! dim 2
//! entry 1 2 : 0.1 0.0 z1 ; 0.05 0.0 z1^2 zb2     # A[1,2] += 0.1 z1 + 0.05 z1² z̄2
//! poly : 1.0 0.0 z1 ; 0.0 0.1 zb1                # scalar F = z1 + 0.1i z̄1
//! graph 1 : 0.05 y1^2 ; 0.05 y2^2                # h_1(y) = 0.05 |y|²
//! ```
//!
//! Complex terms are `re im factor*` with factors `z<k>[^p]` or
//! `zb<k>[^p]`; real terms are `coef factor*` with factors `y<k>[^p]`.
//! Indices are 1-based.

use crate::error::{Error, Result};
use crate::linalg::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coef: C64,
    pub z_pow: Vec<u32>,
    pub zb_pow: Vec<u32>,
}

/// Polynomial in `z_1..z_n, z̄_1..z̄_n`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComplexPoly {
    pub n: usize,
    pub terms: Vec<Monomial>,
}

fn powi(z: C64, p: u32) -> C64 {
    match p {
        0 => C64::new(1.0, 0.0),
        1 => z,
        _ => z.powu(p),
    }
}

impl ComplexPoly {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: Vec::new() }
    }

    pub fn constant(n: usize, c: C64) -> Self {
        Self {
            n,
            terms: vec![Monomial { coef: c, z_pow: vec![0; n], zb_pow: vec![0; n] }],
        }
    }

    /// `c · z_k` (0-based `k`).
    pub fn linear(n: usize, k: usize, c: C64) -> Self {
        let mut z_pow = vec![0; n];
        z_pow[k] = 1;
        Self { n, terms: vec![Monomial { coef: c, z_pow, zb_pow: vec![0; n] }] }
    }

    /// `c · z̄_k` (0-based `k`).
    pub fn conj_linear(n: usize, k: usize, c: C64) -> Self {
        let mut zb_pow = vec![0; n];
        zb_pow[k] = 1;
        Self { n, terms: vec![Monomial { coef: c, z_pow: vec![0; n], zb_pow }] }
    }

    pub fn add(mut self, other: ComplexPoly) -> Self {
        self.terms.extend(other.terms);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coef == C64::new(0.0, 0.0))
    }

    pub fn eval(&self, z: &[C64]) -> C64 {
        self.terms
            .iter()
            .map(|t| {
                let mut v = t.coef;
                for k in 0..self.n {
                    v *= powi(z[k], t.z_pow[k]) * powi(z[k].conj(), t.zb_pow[k]);
                }
                v
            })
            .sum()
    }

    /// Analytic `(F_z, F_z̄)` row vectors.
    pub fn grad(&self, z: &[C64]) -> (Vec<C64>, Vec<C64>) {
        let mut fz = vec![C64::new(0.0, 0.0); self.n];
        let mut fzb = vec![C64::new(0.0, 0.0); self.n];
        for t in &self.terms {
            for d in 0..self.n {
                for conj in [false, true] {
                    let p = if conj { t.zb_pow[d] } else { t.z_pow[d] };
                    if p == 0 {
                        continue;
                    }
                    let mut v = t.coef * p as f64;
                    for k in 0..self.n {
                        let (mut a, mut b) = (t.z_pow[k], t.zb_pow[k]);
                        if k == d {
                            if conj {
                                b -= 1;
                            } else {
                                a -= 1;
                            }
                        }
                        v *= powi(z[k], a) * powi(z[k].conj(), b);
                    }
                    if conj {
                        fzb[d] += v;
                    } else {
                        fz[d] += v;
                    }
                }
            }
        }
        (fz, fzb)
    }

    pub fn max_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.z_pow.iter().chain(&t.zb_pow).sum::<u32>())
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealMonomial {
    pub coef: f64,
    pub pow: Vec<u32>,
}

/// Real polynomial in `y_1..y_n`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RealPoly {
    pub n: usize,
    pub terms: Vec<RealMonomial>,
}

impl RealPoly {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: Vec::new() }
    }

    /// `eps · |y|²`.
    pub fn quadratic(n: usize, eps: f64) -> Self {
        let terms = (0..n)
            .map(|k| {
                let mut pow = vec![0; n];
                pow[k] = 2;
                RealMonomial { coef: eps, pow }
            })
            .collect();
        Self { n, terms }
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coef * t.pow.iter().zip(y).map(|(&p, &v)| v.powi(p as i32)).product::<f64>())
            .sum()
    }

    pub fn grad(&self, y: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.n];
        for t in &self.terms {
            for d in 0..self.n {
                if t.pow[d] == 0 {
                    continue;
                }
                let mut v = t.coef * t.pow[d] as f64;
                for k in 0..self.n {
                    let p = if k == d { t.pow[k] - 1 } else { t.pow[k] };
                    v *= y[k].powi(p as i32);
                }
                g[d] += v;
            }
        }
        g
    }

    /// Lowest total degree among nonzero terms (`None` for the zero polynomial).
    pub fn min_degree(&self) -> Option<u32> {
        self.terms
            .iter()
            .filter(|t| t.coef != 0.0)
            .map(|t| t.pow.iter().sum())
            .min()
    }
}

// ---------------------------------------------------------------------------
// Text grammar

#[derive(Debug, Clone, PartialEq)]
pub struct Token<'a> {
    pub text: &'a str,
    pub column: usize,
}

/// Split a line into whitespace-separated tokens; `:` and `;` are always
/// tokens of their own. Everything after `#` is dropped.
pub fn tokenize(line: &str) -> Vec<Token<'_>> {
    let line = match line.find('#') {
        Some(p) => &line[..p],
        None => line,
    };
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in line.char_indices() {
        let sep = ch.is_whitespace() || ch == ':' || ch == ';';
        if sep {
            if let Some(s) = start.take() {
                out.push(Token { text: &line[s..i], column: s + 1 });
            }
            if ch == ':' || ch == ';' {
                out.push(Token { text: &line[i..i + 1], column: i + 1 });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token { text: &line[s..], column: s + 1 });
    }
    out
}

pub fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

pub fn parse_f64(tok: &Token, line: usize) -> Result<f64> {
    tok.text
        .parse::<f64>()
        .map_err(|_| parse_err(line, tok.column, format!("expected a number, found `{}`", tok.text)))
}

pub fn parse_usize(tok: &Token, line: usize) -> Result<usize> {
    tok.text
        .parse::<usize>()
        .map_err(|_| parse_err(line, tok.column, format!("expected an integer, found `{}`", tok.text)))
}

/// Parse `<prefix><k>[^p]` with 1-based `k ≤ n`; returns 0-based index and power.
fn parse_factor(tok: &Token, prefix: &str, n: usize, line: usize) -> Result<Option<(usize, u32)>> {
    let Some(rest) = tok.text.strip_prefix(prefix) else {
        return Ok(None);
    };
    let (idx, pow) = match rest.split_once('^') {
        Some((i, p)) => (i, p),
        None => (rest, "1"),
    };
    let Ok(k) = idx.parse::<usize>() else {
        return Ok(None);
    };
    if k == 0 || k > n {
        return Err(parse_err(line, tok.column, format!("variable index {k} outside 1..={n}")));
    }
    let p = pow
        .parse::<u32>()
        .map_err(|_| parse_err(line, tok.column, format!("bad exponent in `{}`", tok.text)))?;
    Ok(Some((k - 1, p)))
}

fn split_terms<'a, 'b>(tokens: &'b [Token<'a>]) -> Vec<&'b [Token<'a>]> {
    tokens.split(|t| t.text == ";").filter(|s| !s.is_empty()).collect()
}

/// Parse a `;`-separated list of complex terms.
pub fn parse_complex_terms(tokens: &[Token], n: usize, line: usize) -> Result<ComplexPoly> {
    let mut poly = ComplexPoly::zero(n);
    for term in split_terms(tokens) {
        if term.len() < 2 {
            return Err(parse_err(line, term[0].column, "a term needs `re im` coefficients"));
        }
        let coef = C64::new(parse_f64(&term[0], line)?, parse_f64(&term[1], line)?);
        let mut z_pow = vec![0; n];
        let mut zb_pow = vec![0; n];
        for tok in &term[2..] {
            if let Some((k, p)) = parse_factor(tok, "zb", n, line)? {
                zb_pow[k] += p;
            } else if let Some((k, p)) = parse_factor(tok, "z", n, line)? {
                z_pow[k] += p;
            } else {
                return Err(parse_err(line, tok.column, format!("unknown factor `{}`", tok.text)));
            }
        }
        poly.terms.push(Monomial { coef, z_pow, zb_pow });
    }
    Ok(poly)
}

/// Parse a `;`-separated list of real terms in `y`.
pub fn parse_real_terms(tokens: &[Token], n: usize, line: usize) -> Result<RealPoly> {
    let mut poly = RealPoly::zero(n);
    for term in split_terms(tokens) {
        let coef = parse_f64(&term[0], line)?;
        let mut pow = vec![0; n];
        for tok in &term[1..] {
            match parse_factor(tok, "y", n, line)? {
                Some((k, p)) => pow[k] += p,
                None => {
                    return Err(parse_err(line, tok.column, format!("unknown factor `{}`", tok.text)))
                }
            }
        }
        poly.terms.push(RealMonomial { coef, pow });
    }
    Ok(poly)
}

/// Expect `tokens[at]` to be `:` and return the remainder.
pub fn after_colon<'a, 'b>(tokens: &'b [Token<'a>], at: usize, line: usize) -> Result<&'b [Token<'a>]> {
    match tokens.get(at) {
        Some(t) if t.text == ":" => Ok(&tokens[at + 1..]),
        Some(t) => Err(parse_err(line, t.column, format!("expected `:`, found `{}`", t.text))),
        None => Err(parse_err(line, tokens.last().map_or(1, |t| t.column + t.text.len()), "expected `:`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizer_splits_separators() {
        let t = tokenize("entry 1 2: 0.1 0 z1;0.2 0 zb2 # c");
        let texts: Vec<_> = t.iter().map(|t| t.text).collect();
        assert_eq!(texts, ["entry", "1", "2", ":", "0.1", "0", "z1", ";", "0.2", "0", "zb2"]);
        assert_eq!(t[3].column, 10);
    }

    #[test]
    fn complex_terms_and_gradient() {
        let toks = tokenize("2 0 z1^2 zb2 ; 0 1");
        let p = parse_complex_terms(&toks, 2, 1).unwrap();
        let z = [C64::new(0.3, -0.2), C64::new(-0.1, 0.4)];
        let expect = 2.0 * z[0] * z[0] * z[1].conj() + C64::new(0.0, 1.0);
        assert!((p.eval(&z) - expect).norm() < 1e-15);
        let (fz, fzb) = p.grad(&z);
        assert!((fz[0] - 4.0 * z[0] * z[1].conj()).norm() < 1e-15);
        assert!(fz[1].norm() < 1e-15);
        assert!(fzb[0].norm() < 1e-15);
        assert!((fzb[1] - 2.0 * z[0] * z[0]).norm() < 1e-15);
    }

    #[test]
    fn bad_factor_reports_column() {
        let toks = tokenize("1 0 w3");
        match parse_complex_terms(&toks, 2, 7) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (7, 5)),
            other => panic!("{other:?}"),
        }
        let toks = tokenize("1 0 z3");
        assert!(parse_complex_terms(&toks, 2, 1).is_err());
    }

    #[test]
    fn real_poly_quadratic() {
        let h = RealPoly::quadratic(2, 0.05);
        assert!((h.eval(&[1.0, 2.0]) - 0.25).abs() < 1e-15);
        assert_eq!(h.grad(&[1.0, 2.0]), vec![0.1, 0.2]);
        assert_eq!(h.min_degree(), Some(2));
    }
}
