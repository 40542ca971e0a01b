//! Dense operator matrices with grid-aware normalization.
//!
//! Entries are stored with respect to orthonormal cell bases `chi_j / sqrt(h)`,
//! so singular values and operator norms of the stored matrix agree with the
//! discrete `L^2` quantities even when domain and range live on different
//! grids. `apply` converts back to plain cell values.

use super::OperatorError;
use crate::exec;
use crate::grid::GridDomain;
use crate::spaces::GridFunction;
use faer::Mat;
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Where an operator's vectors live.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorSpace {
    /// Functions on a half-line or line grid, cell values, weight `h`.
    Grid(GridDomain),
    /// Samples on a uniform circle grid of `n` angles, weight `2 pi / n`.
    Circle { n: usize },
    /// Plain coordinate sequences, weight one.
    Sequence { len: usize },
}

impl OperatorSpace {
    pub fn dim(&self) -> usize {
        match self {
            OperatorSpace::Grid(d) => d.n(),
            OperatorSpace::Circle { n } => *n,
            OperatorSpace::Sequence { len } => *len,
        }
    }

    /// Quadrature weight of one cell.
    pub fn weight(&self) -> f64 {
        match self {
            OperatorSpace::Grid(d) => d.h(),
            OperatorSpace::Circle { n } => std::f64::consts::TAU / *n as f64,
            OperatorSpace::Sequence { .. } => 1.0,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            OperatorSpace::Grid(GridDomain::HalfLine { length, n }) => {
                format!("half-line [0, {length}) with {n} cells")
            }
            OperatorSpace::Grid(GridDomain::Line { half_extent, n }) => {
                format!("line [-{half_extent}, {half_extent}) with {n} cells")
            }
            OperatorSpace::Circle { n } => format!("circle with {n} angles"),
            OperatorSpace::Sequence { len } => format!("sequences of length {len}"),
        }
    }
}

/// A dense matrix representation of a discretized operator.
pub struct OperatorMatrix {
    domain: OperatorSpace,
    range: OperatorSpace,
    label: String,
    warnings: Vec<String>,
    mat: Mat<Complex64>,
}

impl OperatorMatrix {
    /// Builds from raw columns: `columns[j]` is the cell-value image of the
    /// indicator of domain cell `j`. The orthonormal-basis scale
    /// `sqrt(w_range / w_domain)` is applied here.
    pub fn from_columns(
        domain: OperatorSpace,
        range: OperatorSpace,
        label: impl Into<String>,
        columns: Vec<Vec<Complex64>>,
    ) -> OperatorMatrix {
        assert_eq!(columns.len(), domain.dim(), "column count");
        let scale = (range.weight() / domain.weight()).sqrt();
        let mat = Mat::from_fn(range.dim(), domain.dim(), |i, j| scale * columns[j][i]);
        OperatorMatrix {
            domain,
            range,
            label: label.into(),
            warnings: Vec::new(),
            mat,
        }
    }

    pub fn identity(space: OperatorSpace) -> OperatorMatrix {
        let n = space.dim();
        OperatorMatrix {
            domain: space,
            range: space,
            label: "I".into(),
            warnings: Vec::new(),
            mat: Mat::from_fn(n, n, |i, j| {
                if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::ZERO
                }
            }),
        }
    }

    pub fn domain(&self) -> OperatorSpace {
        self.domain
    }

    pub fn range(&self) -> OperatorSpace {
        self.range
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> OperatorMatrix {
        self.label = label.into();
        self
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub(crate) fn push_warning(&mut self, w: String) {
        self.warnings.push(w);
    }

    pub fn nrows(&self) -> usize {
        self.mat.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.mat.ncols()
    }

    /// Orthonormal-basis matrix entry.
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.mat[(i, j)]
    }

    /// Applies the operator to raw cell values.
    pub fn apply_samples(&self, values: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(values.len(), self.domain.dim(), "input length");
        let scale = (self.domain.weight() / self.range.weight()).sqrt();
        let x = Mat::from_fn(values.len(), 1, |i, _| values[i]);
        let y = &self.mat * &x;
        (0..self.range.dim()).map(|i| scale * y[(i, 0)]).collect()
    }

    /// Applies the operator to a grid function; panics unless both domain and
    /// range are grids and the function lives on the domain grid.
    pub fn apply(&self, f: &GridFunction) -> GridFunction {
        let OperatorSpace::Grid(dom) = self.domain else {
            panic!("operator domain is not a grid");
        };
        let OperatorSpace::Grid(ran) = self.range else {
            panic!("operator range is not a grid");
        };
        assert_eq!(f.domain(), dom, "grid mismatch");
        GridFunction::from_values(ran, self.apply_samples(f.values())).expect("length")
    }

    /// `self - other`; spaces must match.
    pub fn sub(&self, other: &OperatorMatrix) -> Result<OperatorMatrix, OperatorError> {
        if self.domain != other.domain || self.range != other.range {
            return Err(OperatorError::Invalid(
                "operator difference requires matching spaces".into(),
            ));
        }
        Ok(OperatorMatrix {
            domain: self.domain,
            range: self.range,
            label: format!("({} - {})", self.label, other.label),
            warnings: Vec::new(),
            mat: &self.mat - &other.mat,
        })
    }

    /// Scalar multiple `c . self`.
    pub fn scaled(&self, c: Complex64) -> OperatorMatrix {
        OperatorMatrix {
            domain: self.domain,
            range: self.range,
            label: format!("{c} {}", self.label),
            warnings: Vec::new(),
            mat: Mat::from_fn(self.mat.nrows(), self.mat.ncols(), |i, j| {
                c * self.mat[(i, j)]
            }),
        }
    }

    /// `self . other` (apply `other` first).
    pub fn compose(&self, other: &OperatorMatrix) -> Result<OperatorMatrix, OperatorError> {
        if other.range != self.domain {
            return Err(OperatorError::Invalid(
                "operator composition requires matching inner spaces".into(),
            ));
        }
        Ok(OperatorMatrix {
            domain: other.domain,
            range: self.range,
            label: format!("{} {}", self.label, other.label),
            warnings: Vec::new(),
            mat: &self.mat * &other.mat,
        })
    }

    /// Adjoint with respect to the discrete inner products.
    pub fn adjoint(&self) -> OperatorMatrix {
        let mat = Mat::from_fn(self.mat.ncols(), self.mat.nrows(), |i, j| {
            self.mat[(j, i)].conj()
        });
        OperatorMatrix {
            domain: self.range,
            range: self.domain,
            label: format!("{}*", self.label),
            warnings: Vec::new(),
            mat,
        }
    }

    /// Operator norm by power iteration on `A* A`; deterministic start.
    pub fn operator_norm(&self) -> f64 {
        let (m, n) = (self.mat.nrows(), self.mat.ncols());
        if m == 0 || n == 0 {
            return 0.0;
        }
        let adj = Mat::from_fn(n, m, |i, j| self.mat[(j, i)].conj());
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut v = Mat::from_fn(n, 1, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let mut prev = 0.0;
        for iter in 0..200 {
            let w = &self.mat * &v;
            let mut u = &adj * &w;
            let norm = frob(&u);
            if norm == 0.0 {
                return 0.0;
            }
            let inv = Complex64::new(1.0 / norm, 0.0);
            for i in 0..n {
                u[(i, 0)] *= inv;
            }
            v = u;
            // Rayleigh quotient of A*A is the squared singular value estimate.
            let sigma = norm.sqrt();
            if iter > 4 && (sigma - prev).abs() <= 1e-12 * sigma.max(1e-300) {
                return sigma;
            }
            prev = sigma;
        }
        prev
    }

    /// All singular values, descending.
    pub fn singular_values(&self) -> Vec<f64> {
        let svd = self.mat.svd().expect("svd convergence");
        let s = svd.S();
        let k = self.mat.nrows().min(self.mat.ncols());
        (0..k).map(|i| s[i].re).collect()
    }

    /// Frobenius norm of the stored matrix.
    pub fn frobenius_norm(&self) -> f64 {
        frob(&self.mat)
    }

    /// Writes the matrix as CSV (`i,j,re,im`).
    pub fn export_csv(&self, out: &mut impl std::io::Write) -> std::io::Result<()> {
        writeln!(out, "i,j,re,im")?;
        for i in 0..self.mat.nrows() {
            for j in 0..self.mat.ncols() {
                let v = self.mat[(i, j)];
                writeln!(out, "{},{},{:.17e},{:.17e}", i, j, v.re, v.im)?;
            }
        }
        Ok(())
    }
}

fn frob(m: &Mat<Complex64>) -> f64 {
    let mut acc = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            acc += m[(i, j)].norm_sqr();
        }
    }
    acc.sqrt()
}

/// Assembles columns in parallel from a per-index closure producing raw
/// cell-value images of domain indicators.
pub(crate) fn assemble(
    domain: OperatorSpace,
    range: OperatorSpace,
    label: impl Into<String>,
    column: impl Fn(usize) -> Vec<Complex64> + Sync + Send,
) -> OperatorMatrix {
    let cols = exec::map_indexed(domain.dim(), column);
    OperatorMatrix::from_columns(domain, range, label, cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_by_two(values: [[Complex64; 2]; 2]) -> OperatorMatrix {
        let space = OperatorSpace::Sequence { len: 2 };
        OperatorMatrix::from_columns(
            space,
            space,
            "t",
            vec![
                vec![values[0][0], values[1][0]],
                vec![values[0][1], values[1][1]],
            ],
        )
    }

    #[test]
    fn norm_and_singular_values_agree() {
        let a = two_by_two([
            [Complex64::new(3.0, 0.0), Complex64::new(0.0, 1.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(-2.0, 0.0)],
        ]);
        let svals = a.singular_values();
        let norm = a.operator_norm();
        assert!((norm - svals[0]).abs() < 1e-10);
        // Frobenius^2 = sum of squared singular values
        let fr: f64 = svals.iter().map(|s| s * s).sum::<f64>().sqrt();
        assert!((fr - a.frobenius_norm()).abs() < 1e-10);
    }

    #[test]
    fn adjoint_flips_inner_products() {
        let dom = OperatorSpace::Grid(GridDomain::half_line(4.0, 32));
        let ran = OperatorSpace::Grid(GridDomain::half_line(8.0, 64));
        let cols: Vec<Vec<Complex64>> = (0..32)
            .map(|j| {
                (0..64)
                    .map(|i| Complex64::new((i * 7 + j) as f64 % 5.0, (i + 3 * j) as f64 % 3.0))
                    .collect()
            })
            .collect();
        let a = OperatorMatrix::from_columns(dom, ran, "a", cols);
        let adj = a.adjoint();

        let f = GridFunction::from_fn(GridDomain::half_line(4.0, 32), |x| {
            Complex64::new((-x).exp(), x.cos())
        });
        let g = GridFunction::from_fn(GridDomain::half_line(8.0, 64), |x| {
            Complex64::new(x.sin(), -x)
        });
        let lhs = a.apply(&f).inner(&g);
        let rhs = f.inner(&adj.apply(&g));
        assert!((lhs - rhs).norm() < 1e-9 * lhs.norm().max(1.0));
    }

    #[test]
    fn rectangular_normalization_matches_l2_quantities() {
        // Embedding [0,4) cells into a refined grid of the same interval is an
        // isometry; its singular values must all be 1.
        let dom = OperatorSpace::Grid(GridDomain::half_line(4.0, 16));
        let ran = OperatorSpace::Grid(GridDomain::half_line(4.0, 32));
        let cols: Vec<Vec<Complex64>> = (0..16)
            .map(|j| {
                let mut c = vec![Complex64::ZERO; 32];
                c[2 * j] = Complex64::new(1.0, 0.0);
                c[2 * j + 1] = Complex64::new(1.0, 0.0);
                c
            })
            .collect();
        let a = OperatorMatrix::from_columns(dom, ran, "embed", cols);
        for s in a.singular_values() {
            assert!((s - 1.0).abs() < 1e-12, "sigma = {s}");
        }
    }

    #[test]
    fn compose_and_sub_check_spaces() {
        let a = two_by_two([
            [Complex64::new(1.0, 0.0), Complex64::ZERO],
            [Complex64::ZERO, Complex64::new(1.0, 0.0)],
        ]);
        let id = OperatorMatrix::identity(OperatorSpace::Sequence { len: 2 });
        let diff = a.sub(&id).unwrap();
        assert!(diff.frobenius_norm() < 1e-15);
        let other = OperatorMatrix::identity(OperatorSpace::Sequence { len: 3 });
        assert!(a.sub(&other).is_err());
        assert!(a.compose(&other).is_err());
    }
}
