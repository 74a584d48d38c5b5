//! Almost-complex calculus in local coordinates.
//!
//! A structure `J` on a domain of ℂⁿ is encoded by its complex matrix `A(z)`:
//! with `L = (J_st + J)⁻¹ (J_st − J)`, the map `L` is conjugate-linear and
//! `L v = A v̄`. `A(z) = 0` exactly where `J(z) = J_st`. A map `z(ζ)` from
//! the disc is `J`-holomorphic iff `z_ζ̄ = A(z) z̄_ζ̄`, and a scalar `F` is
//! `J`-holomorphic iff `F_z̄ + F_z A = 0`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{
    complex_linear_to_real, conj, conj_linear_to_real, inverse_checked, inverse_checked_real,
    j_standard, op_norm, op_norm_real, row_times, to_complex, RMatrix, CMatrix, C64,
};
use crate::poly::{after_colon, parse_complex_terms, parse_err, parse_usize, tokenize, ComplexPoly};

/// Default bound on `‖A‖` inside which the perturbative machinery is used.
pub const DEFAULT_WORKING_BOUND: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Allowed `‖J² + Id‖`.
    pub structure: f64,
    /// Largest accepted condition number when inverting.
    pub cond_max: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { structure: 1e-10, cond_max: 1e12 }
    }
}

type MatrixFn = Arc<dyn Fn(&[C64]) -> CMatrix + Send + Sync>;
type TensorFn = Arc<dyn Fn(&[C64]) -> RMatrix + Send + Sync>;

#[derive(Clone)]
enum MatrixSource {
    Polynomial(Vec<ComplexPoly>),
    Function(MatrixFn),
}

/// The matrix-valued map `z ↦ A(z)`.
#[derive(Clone)]
pub struct ComplexMatrixField {
    n: usize,
    source: MatrixSource,
    /// Working bound λ₀ on `‖A‖`.
    pub working_bound: f64,
}

impl fmt::Debug for ComplexMatrixField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            MatrixSource::Polynomial(p) => f
                .debug_struct("ComplexMatrixField")
                .field("n", &self.n)
                .field("entries", p)
                .finish(),
            MatrixSource::Function(_) => write!(f, "ComplexMatrixField {{ n: {}, <fn> }}", self.n),
        }
    }
}

impl ComplexMatrixField {
    /// Row-major polynomial entries.
    pub fn from_polynomials(n: usize, entries: Vec<ComplexPoly>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Dimension { expected: n * n, got: entries.len() });
        }
        if let Some(p) = entries.iter().find(|p| p.n != n) {
            return Err(Error::Dimension { expected: n, got: p.n });
        }
        Ok(Self { n, source: MatrixSource::Polynomial(entries), working_bound: DEFAULT_WORKING_BOUND })
    }

    pub fn from_fn(n: usize, f: impl Fn(&[C64]) -> CMatrix + Send + Sync + 'static) -> Self {
        Self { n, source: MatrixSource::Function(Arc::new(f)), working_bound: DEFAULT_WORKING_BOUND }
    }

    pub fn zero(n: usize) -> Self {
        Self::from_polynomials(n, vec![ComplexPoly::zero(n); n * n]).unwrap()
    }

    /// `a · Id`.
    pub fn constant(n: usize, a: C64) -> Self {
        let entries = (0..n * n)
            .map(|i| if i / n == i % n { ComplexPoly::constant(n, a) } else { ComplexPoly::zero(n) })
            .collect();
        Self::from_polynomials(n, entries).unwrap()
    }

    pub fn constant_matrix(a: CMatrix) -> Self {
        let n = a.nrows();
        let entries = (0..n * n).map(|i| ComplexPoly::constant(n, a[(i / n, i % n)])).collect();
        Self::from_polynomials(n, entries).unwrap()
    }

    /// `c · z_1 · Id`.
    pub fn linear_scalar(n: usize, c: C64) -> Self {
        let entries = (0..n * n)
            .map(|i| if i / n == i % n { ComplexPoly::linear(n, 0, c) } else { ComplexPoly::zero(n) })
            .collect();
        Self::from_polynomials(n, entries).unwrap()
    }

    /// `c · z_k` placed at entry `(row, col)`, zero elsewhere (0-based).
    pub fn linear_entry(n: usize, row: usize, col: usize, k: usize, c: C64) -> Self {
        let entries = (0..n * n)
            .map(|i| if i == row * n + col { ComplexPoly::linear(n, k, c) } else { ComplexPoly::zero(n) })
            .collect();
        Self::from_polynomials(n, entries).unwrap()
    }

    /// `ε · A(z)`, used for deformation studies.
    pub fn scaled(&self, eps: f64) -> Self {
        let source = match &self.source {
            MatrixSource::Polynomial(p) => MatrixSource::Polynomial(
                p.iter()
                    .map(|q| {
                        let mut q = q.clone();
                        q.terms.iter_mut().for_each(|t| t.coef *= eps);
                        q
                    })
                    .collect(),
            ),
            MatrixSource::Function(f) => {
                let f = f.clone();
                MatrixSource::Function(Arc::new(move |z| f(z) * C64::new(eps, 0.0)))
            }
        };
        Self { n: self.n, source, working_bound: self.working_bound }
    }

    /// Parse the entry-by-entry text grammar (see [`crate::poly`]).
    pub fn from_text(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut entries: Vec<ComplexPoly> = Vec::new();
        let mut bound = DEFAULT_WORKING_BOUND;
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let toks = tokenize(raw);
            let Some(head) = toks.first() else { continue };
            match head.text {
                "dim" => {
                    let d = toks.get(1).ok_or_else(|| parse_err(line, head.column, "dim needs a value"))?;
                    let d = parse_usize(d, line)?;
                    if d == 0 {
                        return Err(parse_err(line, toks[1].column, "dimension must be positive"));
                    }
                    n = Some(d);
                    entries = vec![ComplexPoly::zero(d); d * d];
                }
                "bound" => {
                    let b = toks.get(1).ok_or_else(|| parse_err(line, head.column, "bound needs a value"))?;
                    bound = crate::poly::parse_f64(b, line)?;
                }
                "entry" => {
                    let d = n.ok_or_else(|| parse_err(line, head.column, "`dim` must come first"))?;
                    if toks.len() < 3 {
                        return Err(parse_err(line, head.column, "entry needs row and column"));
                    }
                    let r = parse_usize(&toks[1], line)?;
                    let c = parse_usize(&toks[2], line)?;
                    if r == 0 || r > d || c == 0 || c > d {
                        return Err(parse_err(line, toks[1].column, format!("entry ({r},{c}) outside 1..={d}")));
                    }
                    let rest = after_colon(&toks, 3, line)?;
                    let p = parse_complex_terms(rest, d, line)?;
                    let slot = &mut entries[(r - 1) * d + (c - 1)];
                    slot.terms.extend(p.terms);
                }
                other => return Err(parse_err(line, head.column, format!("unknown statement `{other}`"))),
            }
        }
        let n = n.ok_or_else(|| parse_err(1, 1, "missing `dim` statement"))?;
        let mut field = Self::from_polynomials(n, entries)?;
        field.working_bound = bound;
        Ok(field)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn eval(&self, z: &[C64]) -> CMatrix {
        match &self.source {
            MatrixSource::Polynomial(p) => CMatrix::from_fn(self.n, self.n, |r, c| p[r * self.n + c].eval(z)),
            MatrixSource::Function(f) => f(z),
        }
    }

    /// True when the field is known to vanish identically.
    pub fn is_zero(&self) -> bool {
        matches!(&self.source, MatrixSource::Polynomial(p) if p.iter().all(|q| q.is_zero()))
    }

    /// True when every entry is a constant.
    pub fn is_constant(&self) -> bool {
        matches!(&self.source, MatrixSource::Polynomial(p) if p.iter().all(|q| q.max_degree() == 0))
    }

    pub fn norm_at(&self, z: &[C64]) -> f64 {
        op_norm(&self.eval(z))
    }
}

/// A field of real 2n×2n matrices `J(z)`.
#[derive(Clone)]
pub struct StructureTensorField {
    n: usize,
    eval: TensorFn,
    pub normalized_at_origin: bool,
}

impl fmt::Debug for StructureTensorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StructureTensorField {{ n: {}, normalized: {} }}", self.n, self.normalized_at_origin)
    }
}

impl StructureTensorField {
    pub fn new(n: usize, f: impl Fn(&[C64]) -> RMatrix + Send + Sync + 'static) -> Self {
        Self { n, eval: Arc::new(f), normalized_at_origin: false }
    }

    pub fn standard(n: usize) -> Self {
        let j = j_standard(n);
        Self { n, eval: Arc::new(move |_| j.clone()), normalized_at_origin: true }
    }

    pub fn constant(j: RMatrix) -> Self {
        let n = j.nrows() / 2;
        Self { n, eval: Arc::new(move |_| j.clone()), normalized_at_origin: false }
    }

    /// The structure whose complex matrix is `A`.
    pub fn from_complex_matrix(a: ComplexMatrixField) -> Self {
        let n = a.dim();
        Self {
            n,
            eval: Arc::new(move |z| structure_of(&a.eval(z)).unwrap_or_else(|_| RMatrix::from_element(2 * n, 2 * n, f64::NAN))),
            normalized_at_origin: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn eval(&self, z: &[C64]) -> RMatrix {
        (self.eval)(z)
    }

    /// `‖J(z)² + Id‖`.
    pub fn square_defect(&self, z: &[C64]) -> f64 {
        square_defect(&self.eval(z))
    }
}

pub fn square_defect(j: &RMatrix) -> f64 {
    let id = RMatrix::identity(j.nrows(), j.ncols());
    op_norm_real(&(j * j + id))
}

/// Complex matrix of a single structure matrix `J`.
pub fn complex_matrix_of(j: &RMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let dim = j.nrows();
    let n = dim / 2;
    let defect = square_defect(j);
    if !(defect <= tol.structure) {
        return Err(Error::NotAlmostComplex { defect, tol: tol.structure });
    }
    let jst = j_standard(n);
    let plus = &jst + j;
    let inv = inverse_checked_real(&plus, tol.cond_max).ok_or(Error::SingularStructure)?;
    let l = inv * (&jst - j);
    // Column k of A is L applied to the real basis vector e_{x_k}.
    let a = CMatrix::from_fn(n, n, |r, c| C64::new(l[(2 * r, 2 * c)], l[(2 * r + 1, 2 * c)]));
    // Conjugate linearity: L(i e_k) must equal A·conj(i e_k) = -i A e_k.
    let scale = 1.0 + op_norm_real(&l);
    for c in 0..n {
        for r in 0..n {
            let got = C64::new(l[(2 * r, 2 * c + 1)], l[(2 * r + 1, 2 * c + 1)]);
            let want = -crate::linalg::I * a[(r, c)];
            let d = (got - want).norm();
            if d > 10.0 * tol.structure * scale {
                return Err(Error::NotAlmostComplex { defect: d, tol: tol.structure });
            }
        }
    }
    Ok(a)
}

/// `A(z)` for the structure field `J` at `z`.
pub fn complex_matrix_from_structure(j: &StructureTensorField, z: &[C64], tol: &Tolerances) -> Result<CMatrix> {
    complex_matrix_of(&j.eval(z), tol)
}

/// Structure matrix with complex matrix `a`: `J = J_st (I − L)(I + L)⁻¹`.
pub fn structure_of(a: &CMatrix) -> Result<RMatrix> {
    let norm = op_norm(a);
    if !(norm < 1.0) {
        return Err(Error::NormTooLarge { norm });
    }
    let n = a.nrows();
    let l = conj_linear_to_real(a);
    let id = RMatrix::identity(2 * n, 2 * n);
    let inv = (&id + &l).try_inverse().ok_or(Error::NormTooLarge { norm })?;
    Ok(j_standard(n) * (&id - &l) * inv)
}

pub fn structure_from_complex_matrix(a: &ComplexMatrixField, z: &[C64]) -> Result<RMatrix> {
    structure_of(&a.eval(z))
}

/// Transformation rule of the complex matrix under a change of coordinates
/// `t = t(z)`: `A' = (t_z A + t_z̄)(t̄_z̄ + t̄_z A)⁻¹`, where `t̄_z̄ = conj(t_z)`
/// and `t̄_z = conj(t_z̄)`.
pub fn transform_complex_matrix(a: &CMatrix, t_z: &CMatrix, t_zbar: &CMatrix, cond_max: f64) -> Result<CMatrix> {
    let num = t_z * a + t_zbar;
    let den = conj(t_z) + conj(t_zbar) * a;
    let inv = inverse_checked(&den, cond_max).ok_or(Error::SingularTransform)?;
    Ok(num * inv)
}

/// Coefficients of a 1-form in the basis `α = dz − A dz̄`, `ᾱ = dz̄ − Ā dz`.
#[derive(Debug, Clone, PartialEq)]
pub struct CotangentDecomposition {
    pub alpha: Vec<C64>,
    pub alpha_bar: Vec<C64>,
}

impl CotangentDecomposition {
    /// Expand back into `(dz, dz̄)` coefficients.
    pub fn reconstruct(&self, a: &CMatrix) -> (Vec<C64>, Vec<C64>) {
        let abar = conj(a);
        let bab = row_times(&self.alpha_bar, &abar);
        let aa = row_times(&self.alpha, a);
        let dz = self.alpha.iter().zip(&bab).map(|(x, y)| x - y).collect();
        let dzb = self.alpha_bar.iter().zip(&aa).map(|(x, y)| x - y).collect();
        (dz, dzb)
    }
}

/// A scalar function on a domain of ℂⁿ.
pub trait ScalarField: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, z: &[C64]) -> C64;
    /// Analytic `(F_z, F_z̄)` when available.
    fn gradient(&self, _z: &[C64]) -> Option<(Vec<C64>, Vec<C64>)> {
        None
    }
}

impl ScalarField for ComplexPoly {
    fn dim(&self) -> usize {
        self.n
    }
    fn eval(&self, z: &[C64]) -> C64 {
        ComplexPoly::eval(self, z)
    }
    fn gradient(&self, z: &[C64]) -> Option<(Vec<C64>, Vec<C64>)> {
        Some(self.grad(z))
    }
}

/// Closure-backed scalar field.
pub struct FnField<F> {
    pub n: usize,
    pub f: F,
}

impl<F: Fn(&[C64]) -> C64 + Send + Sync> ScalarField for FnField<F> {
    fn dim(&self) -> usize {
        self.n
    }
    fn eval(&self, z: &[C64]) -> C64 {
        (self.f)(z)
    }
}

pub const DEFAULT_FD_STEP: f64 = 1e-6;

/// Central-difference `(F_z, F_z̄)` with relative step.
pub fn fd_gradient(f: &dyn ScalarField, z: &[C64], step: f64) -> (Vec<C64>, Vec<C64>) {
    let n = z.len();
    let mut fz = Vec::with_capacity(n);
    let mut fzb = Vec::with_capacity(n);
    let mut w = z.to_vec();
    for k in 0..n {
        let h = step * z[k].norm().max(1.0);
        let mut diff = |dir: C64| {
            w[k] = z[k] + dir * h;
            let p = f.eval(&w);
            w[k] = z[k] - dir * h;
            let m = f.eval(&w);
            w[k] = z[k];
            (p - m) / (2.0 * h)
        };
        let fx = diff(C64::new(1.0, 0.0));
        let fy = diff(C64::new(0.0, 1.0));
        let i = crate::linalg::I;
        fz.push(0.5 * (fx - i * fy));
        fzb.push(0.5 * (fx + i * fy));
    }
    (fz, fzb)
}

/// Analytic gradients when present, central differences otherwise.
pub fn gradients(f: &dyn ScalarField, z: &[C64], fd_step: f64) -> Result<(Vec<C64>, Vec<C64>)> {
    let g = f.gradient(z).unwrap_or_else(|| fd_gradient(f, z, fd_step));
    if g.0.iter().chain(&g.1).all(|c| c.re.is_finite() && c.im.is_finite()) {
        Ok(g)
    } else {
        Err(Error::GradientUnavailable(format!("non-finite derivative at {z:?}")))
    }
}

/// `∂̄_J F` at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct DbarScalar {
    /// Full decomposition of `dF` in the `(α, ᾱ)` basis; `alpha_bar` holds
    /// the `∂̄_J F` coefficients.
    pub decomposition: CotangentDecomposition,
    /// Canonical residual `F_z̄ + F_z A(z)`.
    pub residual: Vec<C64>,
}

impl DbarScalar {
    pub fn residual_norm(&self) -> f64 {
        self.residual.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// `∂̄_J F = (F_z̄ (I − ĀA)⁻¹ + F_z (I − AĀ)⁻¹ A) ᾱ`, together with the
/// simplified residual `F_z̄ + F_z A`.
pub fn dbar_scalar(f: &dyn ScalarField, a: &ComplexMatrixField, z: &[C64], fd_step: f64) -> Result<DbarScalar> {
    let am = a.eval(z);
    let (fz, fzb) = gradients(f, z, fd_step)?;
    dbar_from_gradients(&fz, &fzb, &am)
}

pub fn dbar_from_gradients(fz: &[C64], fzb: &[C64], am: &CMatrix) -> Result<DbarScalar> {
    let n = am.nrows();
    let norm = op_norm(am);
    if !(norm < 1.0) {
        return Err(Error::NormTooLarge { norm });
    }
    let abar = conj(am);
    let id = CMatrix::identity(n, n);
    let inv1 = (&id - &abar * am).try_inverse().ok_or(Error::NormTooLarge { norm })?;
    let inv2 = (&id - am * &abar).try_inverse().ok_or(Error::NormTooLarge { norm })?;
    let t1 = row_times(fzb, &inv1);
    let t2 = row_times(fz, &(inv2 * am));
    let alpha_bar: Vec<C64> = t1.iter().zip(&t2).map(|(x, y)| x + y).collect();
    let ba = row_times(&alpha_bar, &abar);
    let alpha = fz.iter().zip(&ba).map(|(x, y)| x + y).collect();
    let fza = row_times(fz, am);
    let residual = fzb.iter().zip(&fza).map(|(x, y)| x + y).collect();
    Ok(DbarScalar { decomposition: CotangentDecomposition { alpha, alpha_bar }, residual })
}

/// Real linear change of coordinates `C` with `C J(p) C⁻¹ = J_st`.
///
/// Built from a basis `(v_1, J v_1, …, v_n, J v_n)`; each `v_k` is the
/// standard basis vector farthest from the span collected so far.
pub fn normalize_at_point(j: &StructureTensorField, p: &[C64], tol: &Tolerances) -> Result<RMatrix> {
    let jp = j.eval(p);
    let defect = square_defect(&jp);
    if !(defect <= tol.structure) {
        return Err(Error::NotAlmostComplex { defect, tol: tol.structure });
    }
    let dim = jp.nrows();
    let mut basis: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(dim);
    let residual_of = |v: &nalgebra::DVector<f64>, basis: &[nalgebra::DVector<f64>]| {
        // Gram–Schmidt against an orthonormalized copy of the current basis.
        let mut q: Vec<nalgebra::DVector<f64>> = Vec::new();
        for b in basis {
            let mut w = b.clone();
            for e in &q {
                w -= e * e.dot(&w);
            }
            let nw = w.norm();
            if nw > 1e-300 {
                q.push(w / nw);
            }
        }
        let mut r = v.clone();
        for e in &q {
            r -= e * e.dot(&r);
        }
        r.norm()
    };
    let mut used = vec![false; dim];
    for _ in 0..dim / 2 {
        let mut best = (usize::MAX, -1.0);
        for (i, u) in used.iter().enumerate() {
            if *u {
                continue;
            }
            let e = nalgebra::DVector::from_fn(dim, |r, _| if r == i { 1.0 } else { 0.0 });
            let r = residual_of(&e, &basis);
            if r > best.1 {
                best = (i, r);
            }
        }
        used[best.0] = true;
        let v = nalgebra::DVector::from_fn(dim, |r, _| if r == best.0 { 1.0 } else { 0.0 });
        let jv = &jp * &v;
        basis.push(v);
        basis.push(jv);
    }
    let b = RMatrix::from_columns(&basis);
    inverse_checked_real(&b, tol.cond_max).ok_or(Error::SingularStructure)
}

/// Push a structure matrix forward by a real linear map: `C J C⁻¹`.
pub fn push_forward(c: &RMatrix, j: &RMatrix) -> Option<RMatrix> {
    c.clone().try_inverse().map(|ci| c * j * ci)
}

/// Complex matrix of `J_st` pushed by a complex-linear map is zero; this
/// helper turns a complex-linear map into the real matrix acting on points.
pub fn linear_change(m: &CMatrix) -> RMatrix {
    complex_linear_to_real(m)
}

/// Evaluate a point given in interleaved real coordinates.
pub fn point_from_real(x: &[f64]) -> Vec<C64> {
    to_complex(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::to_real;

    fn lam_structure(l: f64) -> RMatrix {
        RMatrix::from_row_slice(2, 2, &[0.0, -l, 1.0 / l, 0.0])
    }

    /// Brute-force oracle: assemble L as a real 2×2 map and read off `a`
    /// from `L(v) = a v̄` on the basis vectors.
    fn oracle_scalar_a(j: &RMatrix) -> C64 {
        let jst = j_standard(1);
        let l = (&jst + j).try_inverse().unwrap() * (&jst - j);
        let e1 = crate::linalg::apply_real(&l, &[1.0, 0.0]);
        let e2 = crate::linalg::apply_real(&l, &[0.0, 1.0]);
        // L(1) = a, L(i) = a·(-i) = -i a
        let a = C64::new(e1[0], e1[1]);
        let check = C64::new(e2[0], e2[1]) + crate::linalg::I * a;
        assert!(check.norm() < 1e-14);
        a
    }

    #[test]
    fn standard_structure_has_zero_matrix() {
        for n in 1..4 {
            let a = complex_matrix_of(&j_standard(n), &Tolerances::default()).unwrap();
            assert!(op_norm(&a) < 1e-15);
        }
    }

    #[test]
    fn lambda_family_closed_form() {
        for lam in [1.0, 2.0, 3.0] {
            let j = lam_structure(lam);
            let oracle = oracle_scalar_a(&j);
            let closed = (lam - 1.0) / (lam + 1.0);
            assert!((oracle - C64::new(closed, 0.0)).norm() < 1e-14);
            let a = complex_matrix_of(&j, &Tolerances::default()).unwrap();
            assert!((a[(0, 0)] - oracle).norm() < 1e-14);
        }
    }

    #[test]
    fn inverse_of_one_third() {
        let j = structure_of(&CMatrix::from_element(1, 1, C64::new(1.0 / 3.0, 0.0))).unwrap();
        let want = lam_structure(2.0);
        assert!((j - want).norm() < 1e-14);
        assert!((structure_of(&CMatrix::zeros(2, 2)).unwrap() - j_standard(2)).norm() < 1e-15);
    }

    #[test]
    fn not_almost_complex_and_norm_errors() {
        let bad = RMatrix::from_row_slice(2, 2, &[0.0, -1.0, 2.0, 0.0]);
        assert!(matches!(complex_matrix_of(&bad, &Tolerances::default()), Err(Error::NotAlmostComplex { .. })));
        let big = CMatrix::from_element(1, 1, C64::new(1.0, 0.0));
        assert!(matches!(structure_of(&big), Err(Error::NormTooLarge { .. })));
    }

    #[test]
    fn singular_structure_detected() {
        // J = -J_st squares to -Id but J_st + J = 0.
        let j = -j_standard(1);
        assert!(matches!(complex_matrix_of(&j, &Tolerances::default()), Err(Error::SingularStructure)));
    }

    #[test]
    fn transform_examples() {
        let a = CMatrix::from_element(1, 1, C64::new(0.2, -0.1));
        let id = CMatrix::identity(1, 1);
        let z = CMatrix::zeros(1, 1);
        let same = transform_complex_matrix(&a, &id, &z, 1e12).unwrap();
        assert!((same - &a).norm() < 1e-15);
        let rot = CMatrix::from_element(1, 1, crate::linalg::I);
        let neg = transform_complex_matrix(&a, &rot, &z, 1e12).unwrap();
        assert!((neg + &a).norm() < 1e-15);
        let real = CMatrix::from_element(1, 1, C64::new(-2.5, 0.0));
        let same = transform_complex_matrix(&a, &real, &z, 1e12).unwrap();
        assert!((same - &a).norm() < 1e-15);
        // t = z̄ with A = 1: denominator conj(0) + conj(1)·1 ... and t = z - z̄ makes it singular for A = 1.
        let one = CMatrix::from_element(1, 1, C64::new(1.0, 0.0));
        assert!(matches!(
            transform_complex_matrix(&one, &id, &(-&id), 1e12),
            Err(Error::SingularTransform)
        ));
    }

    #[test]
    fn dbar_examples() {
        let n = 2;
        let z = [C64::new(0.1, 0.2), C64::new(-0.3, 0.05)];
        let zero = ComplexMatrixField::zero(n);
        let f = ComplexPoly::linear(n, 0, C64::new(1.0, 0.0));
        let d = dbar_scalar(&f, &zero, &z, DEFAULT_FD_STEP).unwrap();
        assert!(d.decomposition.alpha_bar.iter().all(|c| c.norm() < 1e-15));
        let g = ComplexPoly::conj_linear(n, 0, C64::new(1.0, 0.0));
        let d = dbar_scalar(&g, &zero, &z, DEFAULT_FD_STEP).unwrap();
        assert!((d.decomposition.alpha_bar[0] - 1.0).norm() < 1e-15);
        assert!(d.decomposition.alpha_bar[1].norm() < 1e-15);
        let am = CMatrix::from_row_slice(2, 2, &[
            C64::new(0.1, 0.05), C64::new(-0.2, 0.0),
            C64::new(0.0, 0.15), C64::new(0.05, -0.1),
        ]);
        let a = ComplexMatrixField::constant_matrix(am.clone());
        let d = dbar_scalar(&f, &a, &z, DEFAULT_FD_STEP).unwrap();
        assert!((d.residual[0] - am[(0, 0)]).norm() < 1e-15);
        assert!((d.residual[1] - am[(0, 1)]).norm() < 1e-15);
    }

    #[test]
    fn normalization_examples() {
        let tol = Tolerances::default();
        let c = normalize_at_point(&StructureTensorField::standard(2), &[C64::new(0.0, 0.0); 2], &tol).unwrap();
        assert!((c - RMatrix::identity(4, 4)).norm() < 1e-15);
        let j = StructureTensorField::constant(lam_structure(2.0));
        let c = normalize_at_point(&j, &[C64::new(0.0, 0.0)], &tol).unwrap();
        let pushed = push_forward(&c, &j.eval(&[C64::new(0.0, 0.0)])).unwrap();
        assert!((pushed - j_standard(1)).norm() < 1e-12);
    }

    #[test]
    fn structure_field_from_matrix_field() {
        let a = ComplexMatrixField::linear_scalar(2, C64::new(0.3, 0.1));
        let j = StructureTensorField::from_complex_matrix(a.clone());
        let z = [C64::new(0.5, -0.2), C64::new(0.1, 0.3)];
        assert!(j.square_defect(&z) < 1e-12);
        let back = complex_matrix_from_structure(&j, &z, &Tolerances::default()).unwrap();
        assert!((back - a.eval(&z)).norm() < 1e-12);
        assert_eq!(to_real(&z).len(), 4);
    }

    #[test]
    fn matrix_file_grammar() {
        let text = "# structure\ndim 2\nentry 1 2 : 0.1 0 z1\nentry 1 2 : 0 0.2 zb2^2\nbound 0.4\n";
        let a = ComplexMatrixField::from_text(text).unwrap();
        assert_eq!(a.working_bound, 0.4);
        let z = [C64::new(0.5, 0.5), C64::new(0.0, 1.0)];
        let m = a.eval(&z);
        let want = 0.1 * z[0] + C64::new(0.0, 0.2) * z[1].conj() * z[1].conj();
        assert!((m[(0, 1)] - want).norm() < 1e-15);
        assert_eq!(m[(1, 0)], C64::new(0.0, 0.0));
        match ComplexMatrixField::from_text("dim 2\nentry 3 1 : 1 0") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(ComplexMatrixField::from_text("entry 1 1 : 1 0").is_err());
    }
}
