use serde::{Deserialize, Serialize};

use crate::accal::{dbar_from_gradients, ComplexMatrixField, ScalarField};
use crate::error::{Error, Result};
use crate::linalg::{I, C64};
use crate::poly::{after_colon, parse_complex_terms, parse_err, parse_f64, parse_usize, tokenize, ComplexPoly};

/// One summand of a [`TestFunction`].
#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Poly(ComplexPoly),
    /// `c · e^{z_k}`.
    Exp { k: usize, coef: C64 },
    /// `c · (−z_k)^i = c · e^{i log(−z_k)}`, principal branch. Bounded by
    /// `|c| e^{π/2}` on `{x_k ≤ 0}`; no limit at `z_k = 0`.
    PowerI { k: usize, coef: C64 },
}

impl Term {
    fn eval(&self, z: &[C64]) -> C64 {
        match self {
            Term::Poly(p) => p.eval(z),
            Term::Exp { k, coef } => coef * z[*k].exp(),
            Term::PowerI { k, coef } => coef * (I * (-z[*k]).ln()).exp(),
        }
    }

    fn grad(&self, z: &[C64], fz: &mut [C64], fzb: &mut [C64]) {
        match self {
            Term::Poly(p) => {
                let (a, b) = p.grad(z);
                fz.iter_mut().zip(a).for_each(|(x, y)| *x += y);
                fzb.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            }
            Term::Exp { k, coef } => fz[*k] += coef * z[*k].exp(),
            Term::PowerI { k, coef } => fz[*k] += coef * I * (I * (-z[*k]).ln()).exp() / z[*k],
        }
    }
}

/// A scalar function on a wedge with declared bounds on `|F|` and on the
/// `∂̄_J` residual `F_z̄ + F_z A`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    pub n: usize,
    pub terms: Vec<Term>,
    pub sup_bound: f64,
    pub dbar_bound: f64,
    pub name: String,
}

impl ScalarField for TestFunction {
    fn dim(&self) -> usize {
        self.n
    }
    fn eval(&self, z: &[C64]) -> C64 {
        self.terms.iter().map(|t| t.eval(z)).sum()
    }
    fn gradient(&self, z: &[C64]) -> Option<(Vec<C64>, Vec<C64>)> {
        let mut fz = vec![C64::new(0.0, 0.0); self.n];
        let mut fzb = fz.clone();
        for t in &self.terms {
            t.grad(z, &mut fz, &mut fzb);
        }
        Some((fz, fzb))
    }
}

/// Outcome of [`TestFunction::spot_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub max_abs: f64,
    pub max_dbar: f64,
    pub within: bool,
}

impl TestFunction {
    pub fn new(n: usize, terms: Vec<Term>, sup_bound: f64, dbar_bound: f64) -> Result<Self> {
        for t in &terms {
            let k = match t {
                Term::Poly(p) if p.n != n => return Err(Error::Dimension { expected: n, got: p.n }),
                Term::Exp { k, .. } | Term::PowerI { k, .. } => *k,
                _ => 0,
            };
            if k >= n {
                return Err(Error::InvalidArgument(format!("variable index {} outside 1..={n}", k + 1)));
            }
        }
        Ok(Self { n, terms, sup_bound, dbar_bound, name: String::new() })
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    /// `(−z_1)^i`.
    pub fn power_i(n: usize) -> Self {
        Self::new(n, vec![Term::PowerI { k: 0, coef: C64::new(1.0, 0.0) }], std::f64::consts::FRAC_PI_2.exp(), 0.0)
            .unwrap()
            .named("power_i")
    }

    /// `e^{z_1} + c z̄_1`, with `|F| ≤ 1 + c R` declared on `|z_1| ≤ R`.
    pub fn exp_plus_conj(n: usize, c: f64, radius: f64) -> Self {
        let terms = vec![Term::Exp { k: 0, coef: C64::new(1.0, 0.0) }, Term::Poly(ComplexPoly::conj_linear(n, 0, C64::new(c, 0.0)))];
        Self::new(n, terms, 1.0 + c * radius, c).unwrap().named("exp_conj")
    }

    /// `(−z_1)^i + c z̄_1`.
    pub fn power_i_plus_conj(n: usize, c: f64, radius: f64) -> Self {
        let terms = vec![Term::PowerI { k: 0, coef: C64::new(1.0, 0.0) }, Term::Poly(ComplexPoly::conj_linear(n, 0, C64::new(c, 0.0)))];
        Self::new(n, terms, std::f64::consts::FRAC_PI_2.exp() + c * radius, c).unwrap().named("power_i_conj")
    }

    /// Catalog entry by name: `power_i`, `exp_conj`, `power_i_conj`, `z1`.
    pub fn catalog(name: &str, n: usize) -> Result<Self> {
        match name {
            "power_i" => Ok(Self::power_i(n)),
            "exp_conj" => Ok(Self::exp_plus_conj(n, 0.1, 2.0)),
            "power_i_conj" => Ok(Self::power_i_plus_conj(n, 0.1, 2.0)),
            "z1" => Ok(Self::new(n, vec![Term::Poly(ComplexPoly::linear(n, 0, C64::new(1.0, 0.0)))], f64::INFINITY, 0.0)?.named("z1")),
            other => Err(Error::InvalidArgument(format!("unknown test function `{other}`"))),
        }
    }

    /// Parse `dim n`, `name s`, `bound b`, `dbar_bound d` and term lines
    /// `poly : re im z1 ; …`, `exp k : re im`, `power_i k : re im`.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut terms = Vec::new();
        let mut bound = f64::INFINITY;
        let mut dbar = f64::INFINITY;
        let mut name = String::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let toks = tokenize(raw);
            let Some(head) = toks.first() else { continue };
            let value = |what: &str| toks.get(1).ok_or_else(|| parse_err(line, head.column, format!("{what} needs a value")));
            let dim = || n.ok_or_else(|| parse_err(line, head.column, "`dim` must come first"));
            match head.text {
                "dim" => {
                    let d = parse_usize(value("dim")?, line)?;
                    if d == 0 {
                        return Err(parse_err(line, toks[1].column, "dimension must be positive"));
                    }
                    n = Some(d);
                }
                "name" => name = value("name")?.text.to_string(),
                "bound" => bound = parse_f64(value("bound")?, line)?,
                "dbar_bound" => dbar = parse_f64(value("dbar_bound")?, line)?,
                "poly" => {
                    let d = dim()?;
                    terms.push(Term::Poly(parse_complex_terms(after_colon(&toks, 1, line)?, d, line)?));
                }
                "exp" | "power_i" => {
                    let d = dim()?;
                    let k = parse_usize(value(head.text)?, line)?;
                    if k == 0 || k > d {
                        return Err(parse_err(line, toks[1].column, format!("variable index {k} outside 1..={d}")));
                    }
                    let rest = after_colon(&toks, 2, line)?;
                    if rest.len() != 2 {
                        return Err(parse_err(line, rest.first().map_or(head.column, |t| t.column), "expected `re im`"));
                    }
                    let coef = C64::new(parse_f64(&rest[0], line)?, parse_f64(&rest[1], line)?);
                    terms.push(if head.text == "exp" { Term::Exp { k: k - 1, coef } } else { Term::PowerI { k: k - 1, coef } });
                }
                other => return Err(parse_err(line, head.column, format!("unknown statement `{other}`"))),
            }
        }
        let n = n.ok_or_else(|| parse_err(1, 1, "missing `dim` statement"))?;
        Ok(Self::new(n, terms, bound, dbar)?.named(&name))
    }

    /// `F_z̄ + F_z A(z)`.
    pub fn dbar_residual(&self, a: &ComplexMatrixField, z: &[C64]) -> Result<Vec<C64>> {
        let (fz, fzb) = self.gradient(z).expect("analytic gradient");
        Ok(dbar_from_gradients(&fz, &fzb, &a.eval(z))?.residual)
    }

    /// Compare `|F|` and `|F_z̄ + F_z A|` against the declared bounds at
    /// `points`.
    pub fn spot_check(&self, a: &ComplexMatrixField, points: &[Vec<C64>]) -> Result<BoundCheck> {
        let mut max_abs: f64 = 0.0;
        let mut max_dbar: f64 = 0.0;
        for z in points {
            max_abs = max_abs.max(self.eval(z).norm());
            let r = self.dbar_residual(a, z)?;
            max_dbar = max_dbar.max(r.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt());
        }
        let slack = 1e-12;
        Ok(BoundCheck { max_abs, max_dbar, within: max_abs <= self.sup_bound + slack && max_dbar <= self.dbar_bound + slack })
    }

    /// Value at an edge point of the model wedge, or `None` where a
    /// `(−z_k)^i` term has no limit (`z_k = 0`).
    pub fn edge_limit(&self, p: &[C64]) -> Option<C64> {
        for t in &self.terms {
            if let Term::PowerI { k, .. } = t {
                if p[*k] == C64::new(0.0, 0.0) {
                    return None;
                }
            }
        }
        Some(self.eval(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::accal::fd_gradient;

    #[test]
    fn power_i_closed_form_on_edge() {
        let f = TestFunction::power_i(2);
        for y in [-2.0, -0.3, 0.7, 5.0f64] {
            let p = [C64::new(0.0, y), C64::new(0.0, 1.0)];
            let want = C64::from_polar(1.0, y.abs().ln()) * (std::f64::consts::FRAC_PI_2 * y.signum()).exp();
            assert!((f.edge_limit(&p).unwrap() - want).norm() < 1e-14);
        }
        assert!(f.edge_limit(&[C64::new(0.0, 0.0), C64::new(0.0, 1.0)]).is_none());
    }

    #[test]
    fn analytic_gradient_matches_differences() {
        let f = TestFunction::power_i_plus_conj(2, 0.1, 2.0);
        let z = [C64::new(-0.3, 0.4), C64::new(-0.2, -0.1)];
        let (a, b) = f.gradient(&z).unwrap();
        let (c, d) = fd_gradient(&f, &z, 1e-6);
        for (x, y) in a.iter().chain(&b).zip(c.iter().chain(&d)) {
            assert!((x - y).norm() < 1e-8);
        }
    }

    #[test]
    fn declared_bounds_hold() {
        let f = TestFunction::exp_plus_conj(2, 0.1, 2.0);
        let pts: Vec<Vec<C64>> = (0..50).map(|k| vec![C64::from_polar(1.5, k as f64 * 0.2) - 0.1, C64::new(-0.1, 0.0)]).filter(|z| z[0].re < 0.0).collect();
        let r = f.spot_check(&ComplexMatrixField::zero(2), &pts).unwrap();
        assert!(r.within && (r.max_dbar - 0.1).abs() < 1e-14, "{r:?}");
    }

    #[test]
    fn text_grammar() {
        let f = TestFunction::from_text("dim 2\nname g\npower_i 1 : 1 0\npoly : 0.1 0 zb1\nbound 5\ndbar_bound 0.1\n").unwrap();
        let z = [C64::new(-0.5, 0.2), C64::new(-1.0, 0.0)];
        assert!((f.eval(&z) - TestFunction::power_i_plus_conj(2, 0.1, 2.0).eval(&z)).norm() < 1e-15);
        match TestFunction::from_text("dim 2\nexp 3 : 1 0\n") {
            Err(Error::Parse { line: 2, column: 5, .. }) => {}
            other => panic!("{other:?}"),
        }
    }
}
