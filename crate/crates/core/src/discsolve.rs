//! Pseudoholomorphic discs by fixed-point iteration.
//!
//! A disc `z: 𝔻 → ℂⁿ` is `J`-holomorphic iff `z_ζ̄ = A(z) z̄_ζ̄`. Writing
//! `z = h + T(A(z) z̄_ζ̄)` with `h` holomorphic and `T` the Cauchy–Green
//! transform turns this into a fixed-point problem that contracts when `A`
//! is small.

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::accal::ComplexMatrixField;
use crate::diskops::dbar::{d_zeta, dbar, DbarScheme};
use crate::diskops::grid::{eval_modes, DiscGrid, GridFunction};
use crate::diskops::{cauchy_green_on_grid, BoundaryFunction};
use crate::error::{Error, Result};
use crate::linalg::{cvec_norm, mat_vec, C64};
use crate::par;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 200;
pub const DEFAULT_GRID: (usize, usize) = (128, 256);

/// Power-series seed `h(ζ) = Σ_k a_k ζ^k`, one series per component.
#[derive(Debug, Clone, PartialEq)]
pub struct HolomorphicSeed {
    pub components: Vec<Vec<C64>>,
}

impl HolomorphicSeed {
    pub fn new(components: Vec<Vec<C64>>) -> Self {
        Self { components }
    }

    /// Complex-linear disc `p + ζ v`.
    pub fn linear(p: &[C64], v: &[C64]) -> Self {
        Self { components: p.iter().zip(v).map(|(a, b)| vec![*a, *b]).collect() }
    }

    /// Holomorphic extension of boundary samples. Fails when the samples
    /// carry negative Fourier modes above `tol` (relative to the sup norm).
    pub fn from_boundary(samples: &[BoundaryFunction], tol: f64) -> Result<Self> {
        let mut components = Vec::with_capacity(samples.len());
        for s in samples {
            let n = s.len();
            let mut buf = s.values.clone();
            rustfft::FftPlanner::new().plan_fft_forward(n).process(&mut buf);
            let scale = 1.0 / n as f64;
            let sup = s.values.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1.0);
            let neg = buf[n / 2 + 1..].iter().map(|c| c.norm() * scale).fold(0.0, f64::max);
            if neg > tol * sup {
                return Err(Error::InvalidArgument(format!("boundary data has antiholomorphic modes of size {neg:.3e}")));
            }
            components.push(buf[..=n / 2].iter().map(|c| c * scale).collect());
        }
        Ok(Self { components })
    }

    /// Parse a `;`-separated list of polynomials in `zeta`, e.g.
    /// `"zeta; 0.3i*zeta^2 + 1"` or `"(1-2i)*zeta"`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut components = Vec::new();
        let mut offset = 0;
        for part in text.split(';') {
            components.push(parse_series(part, offset)?);
            offset += part.len() + 1;
        }
        Ok(Self { components })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn eval(&self, zeta: C64) -> Vec<C64> {
        self.components.iter().map(|c| horner(c, zeta)).collect()
    }

    pub fn derivative(&self, zeta: C64) -> Vec<C64> {
        self.components.iter().map(|c| horner_derivative(c, zeta)).collect()
    }

    /// Samples on the grid, with boundary trace.
    pub fn on_grid(&self, grid: &Arc<DiscGrid>) -> Vec<GridFunction> {
        self.components
            .iter()
            .map(|c| crate::diskops::SchwarzSeries { coeffs: c.clone() }.on_grid(grid))
            .collect()
    }
}

pub(crate) fn horner(c: &[C64], zeta: C64) -> C64 {
    c.iter().rev().fold(C64::new(0.0, 0.0), |acc, a| acc * zeta + a)
}

pub(crate) fn horner_derivative(c: &[C64], zeta: C64) -> C64 {
    c.iter().enumerate().skip(1).rev().fold(C64::new(0.0, 0.0), |acc, (k, a)| acc * zeta + a * k as f64)
}

fn parse_series(text: &str, offset: usize) -> Result<Vec<C64>> {
    let mut p = SeedParser { s: text.as_bytes(), pos: 0, offset };
    let mut coeffs: Vec<C64> = vec![C64::new(0.0, 0.0)];
    p.skip_ws();
    if p.at_end() {
        return Err(p.err("empty component"));
    }
    let mut first = true;
    loop {
        p.skip_ws();
        if p.at_end() {
            break;
        }
        let mut sign = 1.0;
        match p.peek() {
            Some(b'+') => {
                p.pos += 1;
            }
            Some(b'-') => {
                p.pos += 1;
                sign = -1.0;
            }
            _ if !first => return Err(p.err("expected `+` or `-`")),
            _ => {}
        }
        first = false;
        let (c, k) = p.term()?;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, C64::new(0.0, 0.0));
        }
        coeffs[k] += c * sign;
    }
    Ok(coeffs)
}

struct SeedParser<'a> {
    s: &'a [u8],
    pos: usize,
    offset: usize,
}

impl SeedParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { line: 1, column: self.offset + self.pos + 1, message: msg.into() }
    }
    fn at_end(&self) -> bool {
        self.pos >= self.s.len()
    }
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }
    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }
    fn keyword(&mut self, kw: &str) -> bool {
        if self.s[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }
    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            let exp_sign = (c == b'-' || c == b'+') && self.pos > start && matches!(self.s[self.pos - 1], b'e' | b'E');
            if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exp_sign {
                self.pos += 1;
            } else {
                break;
            }
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse { line: 1, column: self.offset + start + 1, message: "bad number".into() })
    }
    /// `[number][i] | i`, the imaginary unit suffix optional.
    fn scalar(&mut self) -> Result<C64> {
        if self.keyword("i") {
            return Ok(C64::new(0.0, 1.0));
        }
        let v = self.number()?;
        Ok(if self.keyword("i") { C64::new(0.0, v) } else { C64::new(v, 0.0) })
    }
    fn factor(&mut self) -> Result<(C64, usize)> {
        self.skip_ws();
        if self.keyword("zeta") {
            self.skip_ws();
            if self.keyword("^") {
                self.skip_ws();
                let start = self.pos;
                let k = self.number()?;
                if k < 0.0 || k.fract() != 0.0 {
                    return Err(Error::Parse { line: 1, column: self.offset + start + 1, message: "exponent must be a non-negative integer".into() });
                }
                return Ok((C64::new(1.0, 0.0), k as usize));
            }
            return Ok((C64::new(1.0, 0.0), 1));
        }
        if self.keyword("(") {
            let mut acc = C64::new(0.0, 0.0);
            let mut sign = 1.0;
            loop {
                self.skip_ws();
                match self.peek() {
                    Some(b')') => {
                        self.pos += 1;
                        return Ok((acc, 0));
                    }
                    Some(b'+') => self.pos += 1,
                    Some(b'-') => {
                        self.pos += 1;
                        sign = -sign;
                    }
                    None => return Err(self.err("unclosed `(`")),
                    _ => {
                        acc += self.scalar()? * sign;
                        sign = 1.0;
                    }
                }
            }
        }
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'.' || c == b'i' => Ok((self.scalar()?, 0)),
            _ => Err(self.err("expected a number, `i`, `zeta` or `(`")),
        }
    }
    fn term(&mut self) -> Result<(C64, usize)> {
        let (mut c, mut k) = self.factor()?;
        loop {
            self.skip_ws();
            if self.keyword("*") {
                let (c2, k2) = self.factor()?;
                c *= c2;
                k += k2;
            } else if matches!(self.peek(), Some(b'z')) {
                let (c2, k2) = self.factor()?;
                c *= c2;
                k += k2;
            } else {
                return Ok((c, k));
            }
        }
    }
}

/// Options for [`solve_disc`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Bound on the holomorphy residual.
    pub tol: f64,
    pub max_iter: usize,
    pub scheme: DbarScheme,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, max_iter: DEFAULT_MAX_ITER, scheme: DbarScheme::Spectral }
    }
}

/// Solver bookkeeping carried by a [`DiscMap`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveInfo {
    pub iterations: usize,
    pub residual: f64,
    /// Sup-norm size of each Picard update.
    pub steps: Vec<f64>,
    pub solved: bool,
}

impl SolveInfo {
    /// Successive step ratios `s_{k+1} / s_k`, ignoring steps at roundoff.
    pub fn ratios(&self) -> Vec<f64> {
        self.steps
            .windows(2)
            .filter(|w| w[0] > 1e-13)
            .map(|w| w[1] / w[0])
            .collect()
    }

    /// Largest step ratio from the second iteration on (0 when the
    /// iteration stopped before a ratio was available).
    pub fn contraction(&self) -> f64 {
        self.ratios().into_iter().skip(1).fold(0.0, f64::max)
    }
}

/// A sampled map `𝔻 → ℂⁿ`. Off-grid values come from an exact power series
/// plus a spectrally interpolated correction.
#[derive(Debug, Clone)]
pub struct DiscMap {
    pub grid: Arc<DiscGrid>,
    /// Node values and boundary trace per component.
    pub components: Vec<GridFunction>,
    /// Holomorphic part, as power series.
    pub series: Vec<Vec<C64>>,
    /// Remainder `z − series` on the grid, if any.
    pub correction: Option<Vec<GridFunction>>,
    pub info: SolveInfo,
    modes: OnceLock<Vec<Vec<C64>>>,
}

impl PartialEq for DiscMap {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components && self.series == other.series && self.info == other.info
    }
}

impl DiscMap {
    /// Disc given by power series only.
    pub fn from_series(grid: &Arc<DiscGrid>, series: Vec<Vec<C64>>) -> Self {
        let seed = HolomorphicSeed::new(series);
        let components = seed.on_grid(grid);
        Self::assemble(grid.clone(), components, seed.components, None, SolveInfo::default())
    }

    /// Disc from raw samples (node values, optional boundary traces).
    pub fn from_samples(grid: &Arc<DiscGrid>, values: Vec<Vec<C64>>, boundary: Option<Vec<Vec<C64>>>) -> Result<Self> {
        let mut components = Vec::with_capacity(values.len());
        for (c, v) in values.into_iter().enumerate() {
            let mut g = GridFunction::new(grid.clone(), v)?;
            g.boundary = boundary.as_ref().map(|b| b[c].clone());
            components.push(g);
        }
        let n = components.len();
        Ok(Self::assemble(grid.clone(), components.clone(), vec![Vec::new(); n], Some(components), SolveInfo::default()))
    }

    pub(crate) fn assemble(
        grid: Arc<DiscGrid>,
        components: Vec<GridFunction>,
        series: Vec<Vec<C64>>,
        correction: Option<Vec<GridFunction>>,
        info: SolveInfo,
    ) -> Self {
        Self { grid, components, series, correction, info, modes: OnceLock::new() }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn at(&self, j: usize, k: usize) -> Vec<C64> {
        self.components.iter().map(|c| c.at(j, k)).collect()
    }

    /// Boundary trace of component `c`.
    pub fn boundary(&self, c: usize) -> Option<&[C64]> {
        self.components[c].boundary.as_deref()
    }

    /// Boundary point at grid angle `k`.
    pub fn boundary_point(&self, k: usize) -> Option<Vec<C64>> {
        self.components.iter().map(|c| c.boundary.as_ref().map(|b| b[k])).collect()
    }

    fn correction_modes(&self) -> &[Vec<C64>] {
        self.modes.get_or_init(|| match &self.correction {
            Some(c) => c.iter().map(|g| g.modes()).collect(),
            None => Vec::new(),
        })
    }

    /// Value at an arbitrary point of the closed disc.
    pub fn eval_at(&self, zeta: C64) -> Vec<C64> {
        let modes = self.correction_modes();
        (0..self.dim())
            .map(|c| {
                let s = horner(&self.series[c], zeta);
                match modes.get(c) {
                    Some(m) => s + eval_modes(&self.grid, m, zeta),
                    None => s,
                }
            })
            .collect()
    }

    /// `z(0)`.
    pub fn center(&self) -> Vec<C64> {
        self.eval_at(C64::new(0.0, 0.0))
    }

    /// `z_ζ(0)`.
    pub fn derivative_at_origin(&self) -> Vec<C64> {
        let zero = C64::new(0.0, 0.0);
        (0..self.dim())
            .map(|c| {
                let s = horner_derivative(&self.series[c], zero);
                match &self.correction {
                    Some(corr) => s + crate::diskops::d_zeta_spectral(&corr[c]).eval_at(zero),
                    None => s,
                }
            })
            .collect()
    }

    /// Largest jump between adjacent boundary samples.
    pub fn boundary_modulus(&self) -> f64 {
        self.components
            .iter()
            .filter_map(|c| c.boundary.as_ref())
            .flat_map(|b| (0..b.len()).map(move |k| (b[(k + 1) % b.len()] - b[k]).norm()))
            .fold(0.0, f64::max)
    }

    /// Sup distance at the nodes and boundary samples.
    pub fn sup_dist(&self, other: &DiscMap) -> f64 {
        let mut d: f64 = 0.0;
        for (a, b) in self.components.iter().zip(&other.components) {
            d = d.max(a.sup_dist(b));
            if let (Some(x), Some(y)) = (&a.boundary, &b.boundary) {
                d = x.iter().zip(y).map(|(p, q)| (p - q).norm()).fold(d, f64::max);
            }
        }
        d
    }
}

/// Pointwise `A(z) w` over the grid.
fn apply_field(a: &ComplexMatrixField, z: &[GridFunction], w: &[GridFunction]) -> Vec<GridFunction> {
    let grid = &z[0].grid;
    let n = z.len();
    let rows: Vec<Vec<C64>> = par::map_range(grid.len(), |i| {
        let zi: Vec<C64> = z.iter().map(|c| c.values[i]).collect();
        let wi: Vec<C64> = w.iter().map(|c| c.values[i]).collect();
        mat_vec(&a.eval(&zi), &wi)
    });
    (0..n)
        .map(|c| GridFunction { grid: grid.clone(), values: rows.iter().map(|r| r[c]).collect(), boundary: None })
        .collect()
}

/// `z̄_ζ̄ = conj(z_ζ)` per component.
fn conj_dzeta(z: &[GridFunction], scheme: DbarScheme) -> Result<Vec<GridFunction>> {
    z.iter().map(|c| Ok(d_zeta(c, scheme)?.map(|v| v.conj()))).collect()
}

/// Sup over nodes of `|z_ζ̄ − A(z) z̄_ζ̄|` (vector max-norm).
pub fn holomorphy_residual(z: &DiscMap, a: &ComplexMatrixField) -> Result<f64> {
    holomorphy_residual_with(z, a, DbarScheme::Spectral)
}

pub fn holomorphy_residual_with(z: &DiscMap, a: &ComplexMatrixField, scheme: DbarScheme) -> Result<f64> {
    residual_of(&z.components, a, scheme)
}

fn residual_of(z: &[GridFunction], a: &ComplexMatrixField, scheme: DbarScheme) -> Result<f64> {
    if a.dim() != z.len() {
        return Err(Error::Dimension { expected: a.dim(), got: z.len() });
    }
    let zb: Vec<GridFunction> = z.iter().map(|c| dbar(c, scheme)).collect::<Result<_>>()?;
    let rhs = if a.is_zero() { None } else { Some(apply_field(a, z, &conj_dzeta(z, scheme)?)) };
    let grid = &z[0].grid;
    let mut worst: f64 = 0.0;
    for i in 0..grid.len() {
        for c in 0..z.len() {
            let r = match &rhs {
                Some(rhs) => zb[c].values[i] - rhs[c].values[i],
                None => zb[c].values[i],
            };
            worst = worst.max(r.norm());
        }
    }
    Ok(worst)
}

/// Solve `z = h + T(A(z) z̄_ζ̄)` by Picard iteration.
pub fn solve_disc(a: &ComplexMatrixField, h: &HolomorphicSeed, grid: &Arc<DiscGrid>, opts: &SolveOptions) -> Result<DiscMap> {
    if a.dim() != h.dim() {
        return Err(Error::Dimension { expected: a.dim(), got: h.dim() });
    }
    let hg = h.on_grid(grid);
    let n = hg.len();
    let mut info = SolveInfo::default();
    if a.is_zero() {
        info.iterations = 1;
        info.steps.push(0.0);
        info.residual = residual_of(&hg, a, opts.scheme)?;
        info.solved = info.residual < opts.tol;
        let zero = vec![GridFunction::zeros(grid).with_boundary(vec![C64::new(0.0, 0.0); grid.n_theta()]); n];
        return Ok(DiscMap::assemble(grid.clone(), hg, h.components.clone(), Some(zero), info));
    }
    let mut z = hg.clone();
    let mut u: Vec<GridFunction>;
    let mut growth = 0;
    let step_tol = opts.tol * 1e-3;
    loop {
        info.iterations += 1;
        let src = apply_field(a, &z, &conj_dzeta(&z, opts.scheme)?);
        u = src.iter().map(cauchy_green_on_grid).collect();
        let next: Vec<GridFunction> = hg.iter().zip(&u).map(|(h, t)| h.zip_with(t, |x, y| x + y)).collect();
        let step = next
            .iter()
            .zip(&z)
            .map(|(p, q)| {
                let b = match (&p.boundary, &q.boundary) {
                    (Some(x), Some(y)) => x.iter().zip(y).map(|(s, t)| (s - t).norm()).fold(0.0, f64::max),
                    _ => 0.0,
                };
                p.sup_dist(q).max(b)
            })
            .fold(0.0, f64::max);
        if let Some(&prev) = info.steps.last() {
            if prev > 1e-13 && step >= prev {
                growth += 1;
            } else {
                growth = 0;
            }
        }
        info.steps.push(step);
        z = next;
        if !step.is_finite() || growth >= 3 {
            let ratio = info.ratios().last().copied().unwrap_or(f64::INFINITY);
            return Err(Error::NoContraction { ratio, iterations: info.iterations });
        }
        if step <= step_tol {
            break;
        }
        if info.iterations >= opts.max_iter {
            let residual = residual_of(&z, a, opts.scheme)?;
            return Err(Error::MaxIterExceeded { iterations: info.iterations, residual });
        }
    }
    info.residual = residual_of(&z, a, opts.scheme)?;
    info.solved = info.residual < opts.tol;
    Ok(DiscMap::assemble(grid.clone(), z, h.components.clone(), Some(u), info))
}

/// Largest re-seeding rounds in [`disc_through`].
pub const RESEED_ROUNDS: usize = 20;

/// Disc with `z(0) = p` and `z_ζ(0)` parallel to `v`, by affine re-seeding
/// of the linear seed `p + ζ v`.
pub fn disc_through(a: &ComplexMatrixField, p: &[C64], v: &[C64], grid: &Arc<DiscGrid>, opts: &SolveOptions) -> Result<DiscMap> {
    if cvec_norm(v) == 0.0 {
        return Err(Error::InvalidArgument("tangent vector must be nonzero".into()));
    }
    if p.len() != a.dim() || v.len() != a.dim() {
        return Err(Error::Dimension { expected: a.dim(), got: p.len().max(v.len()) });
    }
    let mut sp = p.to_vec();
    let mut sv = v.to_vec();
    let mut defect = f64::INFINITY;
    for _ in 0..RESEED_ROUNDS {
        let disc = solve_disc(a, &HolomorphicSeed::linear(&sp, &sv), grid, opts)?;
        let c = disc.center();
        let d = disc.derivative_at_origin();
        let center_err: f64 = c.iter().zip(p).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        defect = direction_defect(&d, v);
        if center_err < opts.tol && defect < opts.tol {
            return Ok(disc);
        }
        for k in 0..p.len() {
            sp[k] += p[k] - c[k];
            sv[k] += v[k] - d[k];
        }
    }
    Err(Error::DirectionLost { defect })
}

/// Sine of the complex angle between `d` and `v`.
pub fn direction_defect(d: &[C64], v: &[C64]) -> f64 {
    let nd = cvec_norm(d);
    let nv = cvec_norm(v);
    if nd == 0.0 {
        return 1.0;
    }
    let inner: C64 = d.iter().zip(v).map(|(x, y)| x * y.conj()).sum();
    let cos = inner.norm() / (nd * nv);
    (1.0 - cos * cos).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn seed_grammar() {
        let s = HolomorphicSeed::parse("zeta; 0.3i*zeta^2 + 1").unwrap();
        assert_eq!(s.components[0], vec![c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(s.components[1], vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.3)]);
        let s = HolomorphicSeed::parse("(1-2i) zeta - 0.5 + 2e-1*zeta*zeta").unwrap();
        assert_eq!(s.components[0], vec![c(-0.5, 0.0), c(1.0, -2.0), c(0.2, 0.0)]);
        match HolomorphicSeed::parse("zeta; 1 + + w") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 11),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_structure_returns_seed() {
        let g = DiscGrid::new(16, 32).unwrap();
        let h = HolomorphicSeed::parse("zeta + 0.2*zeta^3; 1i").unwrap();
        let z = solve_disc(&ComplexMatrixField::zero(2), &h, &g, &SolveOptions::default()).unwrap();
        assert_eq!(z.info.iterations, 1);
        assert!(z.info.residual < 1e-10);
        let p = c(0.3, -0.2);
        assert!((z.eval_at(p)[0] - (p + 0.2 * p.powu(3))).norm() < 1e-14);
    }

    #[test]
    fn constant_structure_closed_form() {
        let g = DiscGrid::new(32, 64).unwrap();
        let a = ComplexMatrixField::constant(1, c(0.3, 0.0));
        let z = solve_disc(&a, &HolomorphicSeed::parse("zeta").unwrap(), &g, &SolveOptions::default()).unwrap();
        let err = g.nodes().iter().zip(&z.components[0].values).map(|(w, v)| (v - (w + 0.3 * w.conj())).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
        assert!(z.info.iterations <= 30 && z.info.solved);
        assert!(z.info.contraction() < 0.9);
    }

    #[test]
    fn residual_examples() {
        let g = DiscGrid::new(24, 48).unwrap();
        let anti = DiscMap::from_samples(&g, vec![g.nodes().iter().map(|w| w.conj()).collect()], None).unwrap();
        assert!((holomorphy_residual(&anti, &ComplexMatrixField::zero(1)).unwrap() - 1.0).abs() < 1e-10);
        let lin = DiscMap::from_samples(&g, vec![g.nodes().iter().map(|w| w + 0.3 * w.conj()).collect()], None).unwrap();
        assert!(holomorphy_residual(&lin, &ComplexMatrixField::constant(1, c(0.3, 0.0))).unwrap() < 1e-10);
    }

    #[test]
    fn variable_structure_converges() {
        let g = DiscGrid::new(32, 64).unwrap();
        let a = ComplexMatrixField::linear_scalar(1, c(0.1, 0.0));
        let z = solve_disc(&a, &HolomorphicSeed::parse("zeta").unwrap(), &g, &SolveOptions::default()).unwrap();
        assert!(z.info.solved, "{:?}", z.info);
        assert!(z.info.contraction() < 0.5);
    }

    #[test]
    fn large_structure_does_not_contract() {
        let g = DiscGrid::new(16, 32).unwrap();
        let a = ComplexMatrixField::linear_scalar(1, c(40.0, 0.0));
        let r = solve_disc(&a, &HolomorphicSeed::parse("2*zeta").unwrap(), &g, &SolveOptions::default());
        assert!(matches!(r, Err(Error::NoContraction { .. })), "{r:?}");
    }

    #[test]
    fn disc_through_point() {
        let g = DiscGrid::new(24, 48).unwrap();
        let a = ComplexMatrixField::constant(1, c(0.2, 0.0));
        let z = disc_through(&a, &[c(0.0, 0.0)], &[c(1.0, 0.0)], &g, &SolveOptions::default()).unwrap();
        let p = c(0.4, 0.3);
        assert!((z.eval_at(p)[0] - (p + 0.2 * p.conj())).norm() < 1e-10);

        let a = ComplexMatrixField::linear_entry(2, 0, 1, 0, c(0.1, 0.0));
        let p0 = [c(0.1, -0.05), c(0.0, 0.2)];
        let v = [c(1.0, 0.0), c(0.0, 0.0)];
        let z = disc_through(&a, &p0, &v, &g, &SolveOptions::default()).unwrap();
        assert!(z.info.residual < 1e-8);
        let cen = z.center();
        assert!((cen[0] - p0[0]).norm() < 1e-8 && (cen[1] - p0[1]).norm() < 1e-8);
        assert!(direction_defect(&z.derivative_at_origin(), &v) < 1e-8);
    }
}
