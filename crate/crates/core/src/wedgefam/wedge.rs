use crate::accal::{dbar_from_gradients, ComplexMatrixField, ScalarField};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::poly::{after_colon, parse_err, parse_f64, parse_real_terms, parse_usize, tokenize, RealPoly};

pub const DEFAULT_DELTA: f64 = 0.1;

/// Wedge `{ρ_j < 0}` with faces `ρ_j = x_j − h_j(y)`, `h_j(0) = 0`,
/// `dh_j(0) = 0`. With `h ≡ 0` this is the model wedge `{x_j < 0}` whose
/// edge is `iℝⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct WedgeDomain {
    pub n: usize,
    /// One graph per face; `graphs.len()` is the number of faces `k ≤ n`.
    pub graphs: Vec<RealPoly>,
    /// Shrink parameter of `W_δ`.
    pub delta: f64,
}

/// One defining function `ρ_j = x_j − h_j(y)` as a scalar field.
pub struct Face<'a> {
    pub j: usize,
    pub graph: &'a RealPoly,
}

impl ScalarField for Face<'_> {
    fn dim(&self) -> usize {
        self.graph.n
    }
    fn eval(&self, z: &[C64]) -> C64 {
        let y: Vec<f64> = z.iter().map(|c| c.im).collect();
        C64::new(z[self.j].re - self.graph.eval(&y), 0.0)
    }
    fn gradient(&self, z: &[C64]) -> Option<(Vec<C64>, Vec<C64>)> {
        // ρ_z = (ρ_x − iρ_y)/2, ρ_z̄ = (ρ_x + iρ_y)/2
        let y: Vec<f64> = z.iter().map(|c| c.im).collect();
        let gy = self.graph.grad(&y);
        let n = z.len();
        let mut fz = vec![C64::new(0.0, 0.0); n];
        let mut fzb = vec![C64::new(0.0, 0.0); n];
        for k in 0..n {
            let rx = if k == self.j { 1.0 } else { 0.0 };
            let ry = -gy[k];
            fz[k] = C64::new(0.5 * rx, -0.5 * ry);
            fzb[k] = C64::new(0.5 * rx, 0.5 * ry);
        }
        Some((fz, fzb))
    }
}

impl WedgeDomain {
    pub fn new(n: usize, graphs: Vec<RealPoly>, delta: f64) -> Result<Self> {
        if graphs.is_empty() || graphs.len() > n {
            return Err(Error::InvalidArgument(format!("need between 1 and {n} faces, got {}", graphs.len())));
        }
        for (j, g) in graphs.iter().enumerate() {
            if g.n != n {
                return Err(Error::Dimension { expected: n, got: g.n });
            }
            if g.min_degree().is_some_and(|d| d < 2) {
                return Err(Error::InvalidArgument(format!("graph {} must vanish to second order at 0", j + 1)));
            }
        }
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::InvalidArgument(format!("delta must be a non-negative number, got {delta}")));
        }
        Ok(Self { n, graphs, delta })
    }

    /// `W₀ = {x_j < 0, j = 1..n}`.
    pub fn model(n: usize) -> Self {
        Self { n, graphs: vec![RealPoly::zero(n); n], delta: DEFAULT_DELTA }
    }

    /// Faces `x_j = ε|y|²` for every `j`.
    pub fn quadratic(n: usize, eps: f64) -> Self {
        Self { n, graphs: vec![RealPoly::quadratic(n, eps); n], delta: DEFAULT_DELTA }
    }

    /// Parse `dim n`, `delta d` and `graph j : coef y1^2 ; …` lines.
    /// Without `graph` lines the wedge is the model wedge.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut delta = DEFAULT_DELTA;
        let mut graphs: Vec<RealPoly> = Vec::new();
        let mut faces: Option<usize> = None;
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let toks = tokenize(raw);
            let Some(head) = toks.first() else { continue };
            let value = |what: &str| toks.get(1).ok_or_else(|| parse_err(line, head.column, format!("{what} needs a value")));
            match head.text {
                "dim" => {
                    let d = parse_usize(value("dim")?, line)?;
                    if d == 0 {
                        return Err(parse_err(line, toks[1].column, "dimension must be positive"));
                    }
                    n = Some(d);
                    graphs = vec![RealPoly::zero(d); d];
                }
                "delta" => delta = parse_f64(value("delta")?, line)?,
                "faces" => faces = Some(parse_usize(value("faces")?, line)?),
                "model" => {}
                "graph" => {
                    let d = n.ok_or_else(|| parse_err(line, head.column, "`dim` must come first"))?;
                    let j = parse_usize(value("graph")?, line)?;
                    if j == 0 || j > d {
                        return Err(parse_err(line, toks[1].column, format!("face {j} outside 1..={d}")));
                    }
                    let rest = after_colon(&toks, 2, line)?;
                    let p = parse_real_terms(rest, d, line)?;
                    if p.min_degree().is_some_and(|deg| deg < 2) {
                        return Err(parse_err(line, rest[0].column, "edge graph must vanish to second order at 0"));
                    }
                    graphs[j - 1].terms.extend(p.terms);
                }
                other => return Err(parse_err(line, head.column, format!("unknown statement `{other}`"))),
            }
        }
        let n = n.ok_or_else(|| parse_err(1, 1, "missing `dim` statement"))?;
        if let Some(k) = faces {
            if k == 0 || k > n {
                return Err(parse_err(1, 1, format!("faces must lie in 1..={n}")));
            }
            graphs.truncate(k);
        }
        Self::new(n, graphs, delta)
    }

    pub fn faces(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_model(&self) -> bool {
        self.graphs.iter().all(|g| g.terms.iter().all(|t| t.coef == 0.0))
    }

    /// Totally real edge: as many faces as complex dimensions.
    pub fn is_totally_real(&self) -> bool {
        self.faces() == self.n
    }

    pub fn face(&self, j: usize) -> Face<'_> {
        Face { j, graph: &self.graphs[j] }
    }

    pub fn rho(&self, z: &[C64]) -> Vec<f64> {
        let y: Vec<f64> = z.iter().map(|c| c.im).collect();
        self.graphs.iter().enumerate().map(|(j, g)| z[j].re - g.eval(&y)).collect()
    }

    /// `∇ρ_j` in interleaved real coordinates.
    pub fn rho_gradient(&self, j: usize, z: &[C64]) -> Vec<f64> {
        let y: Vec<f64> = z.iter().map(|c| c.im).collect();
        let gy = self.graphs[j].grad(&y);
        let mut out = vec![0.0; 2 * self.n];
        out[2 * j] = 1.0;
        for k in 0..self.n {
            out[2 * k + 1] = -gy[k];
        }
        out
    }

    pub fn contains(&self, z: &[C64]) -> bool {
        self.rho(z).iter().all(|&r| r < 0.0)
    }

    /// Membership in `W_δ = {ρ_j − δ Σ_{k≠j} ρ_k < 0}`.
    pub fn in_shrunk(&self, z: &[C64]) -> bool {
        self.shrunk_margin(z) < 0.0
    }

    /// `max_j (ρ_j − δ Σ_{k≠j} ρ_k)`.
    pub fn shrunk_margin(&self, z: &[C64]) -> f64 {
        let rho = self.rho(z);
        let total: f64 = rho.iter().sum();
        rho.iter().map(|r| r - self.delta * (total - r)).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn edge_distance(&self, z: &[C64]) -> f64 {
        self.rho(z).iter().map(|r| r.abs()).fold(0.0, f64::max)
    }

    /// Edge point with imaginary parts `y`: `x = h(y)`.
    pub fn edge_point(&self, y: &[f64]) -> Vec<C64> {
        (0..self.n)
            .map(|j| {
                let x = if j < self.faces() { self.graphs[j].eval(y) } else { 0.0 };
                C64::new(x, y[j])
            })
            .collect()
    }

    /// `k × n` matrix whose rows are the `∂̄_J ρ_j` residual rows
    /// `ρ_z̄ + ρ_z A`.
    pub fn dbar_rho_matrix(&self, a: &ComplexMatrixField, z: &[C64]) -> Result<CMatrix> {
        let am = a.eval(z);
        let k = self.faces();
        let mut m = CMatrix::zeros(k, self.n);
        for j in 0..k {
            let face = self.face(j);
            let (fz, fzb) = face.gradient(z).expect("faces carry analytic gradients");
            let d = dbar_from_gradients(&fz, &fzb, &am)?;
            for c in 0..self.n {
                m[(j, c)] = d.residual[c];
            }
        }
        Ok(m)
    }

    /// Smallest singular value of [`Self::dbar_rho_matrix`]; positive iff
    /// the faces are generic at `z`.
    pub fn genericity(&self, a: &ComplexMatrixField, z: &[C64]) -> Result<f64> {
        let m = self.dbar_rho_matrix(a, z)?;
        let sv = m.svd(false, false).singular_values;
        Ok(sv.iter().copied().fold(f64::INFINITY, f64::min))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_membership() {
        let w = WedgeDomain::model(2);
        assert!(w.contains(&[C64::new(-0.1, 3.0), C64::new(-2.0, 0.0)]));
        assert!(!w.contains(&[C64::new(0.0, 1.0), C64::new(-1.0, 0.0)]));
        assert!(w.in_shrunk(&[C64::new(-0.1, 0.0), C64::new(-0.1, 0.0)]));
        assert!(!w.in_shrunk(&[C64::new(-0.001, 0.0), C64::new(-1.0, 0.0)]));
    }

    #[test]
    fn genericity_of_model_and_graph() {
        let a = ComplexMatrixField::zero(2);
        let w = WedgeDomain::model(2);
        let p = w.edge_point(&[0.3, -0.2]);
        assert!((w.genericity(&a, &p).unwrap() - 0.5).abs() < 1e-14);
        let g = WedgeDomain::quadratic(2, 0.05);
        assert!(g.genericity(&a, &g.edge_point(&[0.3, -0.2])).unwrap() > 0.4);
    }

    #[test]
    fn text_grammar() {
        let w = WedgeDomain::from_text("dim 2\ndelta 0.2\ngraph 1 : 0.05 y1^2 ; 0.05 y2^2\ngraph 2 : 0.05 y1^2 ; 0.05 y2^2\n").unwrap();
        assert_eq!(w, WedgeDomain { delta: 0.2, ..WedgeDomain::quadratic(2, 0.05) });
        assert!(WedgeDomain::from_text("dim 2\n").unwrap().is_model());
        match WedgeDomain::from_text("dim 2\ngraph 1 : 0.1 y1\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        match WedgeDomain::from_text("dim 2\ngraph 3 : 0.1 y1^2\n") {
            Err(Error::Parse { line: 2, column: 7, .. }) => {}
            other => panic!("{other:?}"),
        }
    }
}
