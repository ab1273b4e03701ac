//! Finite-difference assembly for the one- and d-dimensional Poisson problem.
//!
//! Matrices are stored without the `1/h²` prefactor: the periodic, Dirichlet
//! and Neumann stencils are integer valued, and Robin only adds the two
//! boundary entries `C` and `D`. [`build_rhs`] multiplies the data by `h²`
//! instead, so `L · u = rhs` is the same system as `(1/h²) L · u = f`.

use serde::{Deserialize, Serialize};

use crate::matrix::RealMatrix;
use crate::{Error, Result};

/// Default cap on `N^d` for dense assembly.
pub const DEFAULT_SIZE_CAP: usize = 1 << 14;

/// Robin data for `a·u(0) + b·u'(0) = A` and `c·u(1) + d·u'(1) = B`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobinParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    #[serde(rename = "A")]
    pub left_value: f64,
    #[serde(rename = "B")]
    pub right_value: f64,
}

impl RobinParams {
    /// First diagonal entry `C = 1 + a·h/b`.
    pub fn left_diagonal(&self, h: f64) -> f64 {
        1.0 + self.a * h / self.b
    }

    /// Last diagonal entry `D = 1 + c·h/d`.
    pub fn right_diagonal(&self, h: f64) -> f64 {
        1.0 + self.c * h / self.d
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum BoundaryCondition {
    Periodic,
    Dirichlet { left: f64, right: f64 },
    Neumann { left: f64, right: f64 },
    Robin(RobinParams),
}

/// Boundary-condition family without its data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Periodic,
    Dirichlet,
    Neumann,
    Robin,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Periodic, Variant::Dirichlet, Variant::Neumann, Variant::Robin];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Periodic => "periodic",
            Variant::Dirichlet => "dirichlet",
            Variant::Neumann => "neumann",
            Variant::Robin => "robin",
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "periodic" | "p" => Ok(Variant::Periodic),
            "dirichlet" | "d" => Ok(Variant::Dirichlet),
            "neumann" | "n" => Ok(Variant::Neumann),
            "robin" | "r" => Ok(Variant::Robin),
            other => Err(Error::UnsupportedVariant(other.to_string())),
        }
    }
}

impl BoundaryCondition {
    pub fn variant(&self) -> Variant {
        match self {
            BoundaryCondition::Periodic => Variant::Periodic,
            BoundaryCondition::Dirichlet { .. } => Variant::Dirichlet,
            BoundaryCondition::Neumann { .. } => Variant::Neumann,
            BoundaryCondition::Robin(_) => Variant::Robin,
        }
    }

    /// Homogeneous data for a variant; Robin gets `a = c = 0, b = d = 1`,
    /// i.e. `C = D = 1`.
    pub fn homogeneous(variant: Variant) -> Self {
        match variant {
            Variant::Periodic => BoundaryCondition::Periodic,
            Variant::Dirichlet => BoundaryCondition::Dirichlet { left: 0.0, right: 0.0 },
            Variant::Neumann => BoundaryCondition::Neumann { left: 0.0, right: 0.0 },
            Variant::Robin => BoundaryCondition::Robin(RobinParams {
                a: 0.0,
                b: 1.0,
                c: 0.0,
                d: 1.0,
                left_value: 0.0,
                right_value: 0.0,
            }),
        }
    }

    /// Robin condition that produces the diagonal entries `C` and `D` on a
    /// grid of spacing `h`, with `b = d = 1`.
    pub fn robin_from_diagonals(c_entry: f64, d_entry: f64, h: f64) -> Self {
        BoundaryCondition::Robin(RobinParams {
            a: (c_entry - 1.0) / h,
            b: 1.0,
            c: (d_entry - 1.0) / h,
            d: 1.0,
            left_value: 0.0,
            right_value: 0.0,
        })
    }

    /// `(C, D)` for a Robin condition on this grid, after checking that
    /// `b, d ≠ 0` and `C, D ∈ [0, 2)`.
    pub fn robin_diagonals(&self, grid: &Grid) -> Result<Option<(f64, f64)>> {
        let BoundaryCondition::Robin(p) = self else {
            return Ok(None);
        };
        if p.b == 0.0 || p.d == 0.0 {
            return Err(Error::RobinDegenerate);
        }
        let (c, d) = (p.left_diagonal(grid.h), p.right_diagonal(grid.h));
        if !(0.0..2.0).contains(&c) || !(0.0..2.0).contains(&d) {
            return Err(Error::RobinOutOfRange { c, d });
        }
        Ok(Some((c, d)))
    }
}

/// Uniform grid with `N = 2ⁿ` unknowns per dimension.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    /// Qubits per dimension.
    pub n: u32,
    /// Number of spatial dimensions.
    pub dims: usize,
    /// Grid spacing.
    pub h: f64,
}

impl Grid {
    /// Grid with the spacing the boundary condition prescribes:
    /// `h = 1/(N+2)` for Dirichlet, `h = 1/N` otherwise.
    pub fn new(n: u32, dims: usize, bc: &BoundaryCondition) -> Result<Self> {
        if !(2..=30).contains(&n) {
            return Err(Error::NonPowerOfTwoSize(1usize.checked_shl(n).unwrap_or(0)));
        }
        if dims == 0 {
            return Err(Error::DomainError("dimension count must be at least 1".into()));
        }
        let points = 1usize << n;
        let h = match bc.variant() {
            Variant::Dirichlet => 1.0 / (points + 2) as f64,
            _ => 1.0 / points as f64,
        };
        Ok(Self { n, dims, h })
    }

    /// Grid from the number of points per dimension, which must be a power
    /// of two and at least 4.
    pub fn from_points(points: usize, dims: usize, bc: &BoundaryCondition) -> Result<Self> {
        if points < 4 || !points.is_power_of_two() {
            return Err(Error::NonPowerOfTwoSize(points));
        }
        Self::new(points.trailing_zeros(), dims, bc)
    }

    /// Same grid with a different spacing.
    pub fn with_spacing(self, h: f64) -> Self {
        Self { h, ..self }
    }

    /// Points per dimension.
    pub fn points(&self) -> usize {
        1 << self.n
    }

    /// Total unknowns `N^d`.
    pub fn size(&self) -> usize {
        self.points().pow(self.dims as u32)
    }

    /// Coordinates of the unknowns along one axis: `j·h` for `j = 0..N`,
    /// shifted by one node for Dirichlet (the boundary node `x = 0` is not an
    /// unknown).
    pub fn nodes(&self, variant: Variant) -> Vec<f64> {
        let offset = if variant == Variant::Dirichlet { 1.0 } else { 0.0 };
        (0..self.points()).map(|j| (j as f64 + offset) * self.h).collect()
    }
}

/// Unscaled stencil matrix; the operator it represents is `entries / h²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StencilMatrix {
    pub variant: Variant,
    pub dims: usize,
    pub h: f64,
    pub entries: RealMatrix,
}

impl StencilMatrix {
    pub fn size(&self) -> usize {
        self.entries.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.entries.mul_vec(x)
    }

    /// True when every row sums to zero, i.e. the all-ones vector is in the
    /// null space (periodic and Neumann).
    pub fn has_constant_null_space(&self) -> bool {
        (0..self.size()).all(|i| self.entries.row(i).iter().sum::<f64>() == 0.0)
    }

    pub fn write_matrix_market<W: std::io::Write>(&self, out: W) -> std::io::Result<()> {
        self.entries.write_matrix_market(out)
    }
}

/// The `N×N` three-point stencil for one axis.
pub fn build_matrix(bc: &BoundaryCondition, grid: &Grid) -> Result<StencilMatrix> {
    let size = grid.points();
    if size < 4 || !size.is_power_of_two() {
        return Err(Error::NonPowerOfTwoSize(size));
    }
    let mut m = RealMatrix::zeros(size, size);
    for i in 0..size {
        m[(i, i)] = 2.0;
        if i + 1 < size {
            m[(i, i + 1)] = -1.0;
            m[(i + 1, i)] = -1.0;
        }
    }
    let last = size - 1;
    match bc {
        BoundaryCondition::Periodic => {
            m[(0, last)] = -1.0;
            m[(last, 0)] = -1.0;
        }
        BoundaryCondition::Dirichlet { .. } => {}
        BoundaryCondition::Neumann { .. } => {
            m[(0, 0)] = 1.0;
            m[(last, last)] = 1.0;
        }
        BoundaryCondition::Robin(_) => {
            let (c, d) = bc.robin_diagonals(grid)?.expect("robin");
            m[(0, 0)] = c;
            m[(last, last)] = d;
        }
    }
    Ok(StencilMatrix { variant: bc.variant(), dims: 1, h: grid.h, entries: m })
}

/// Right-hand side of the unscaled system, `h²` times the data vector with
/// the boundary contributions folded in.
pub fn build_rhs(bc: &BoundaryCondition, grid: &Grid, f_samples: &[f64]) -> Result<Vec<f64>> {
    let size = grid.points();
    if f_samples.len() != size {
        return Err(Error::LengthMismatch { expected: size, found: f_samples.len() });
    }
    let h = grid.h;
    let h2 = h * h;
    let mut rhs: Vec<f64> = f_samples.iter().map(|f| h2 * f).collect();
    let last = size - 1;
    match *bc {
        BoundaryCondition::Periodic => {}
        BoundaryCondition::Dirichlet { left, right } => {
            // Known boundary values move to the right-hand side with a plus
            // sign, since the off-diagonal coupling is −1.
            rhs[0] += left;
            rhs[last] += right;
        }
        BoundaryCondition::Neumann { left, right } => {
            rhs[0] = -left * h;
            rhs[last] = right * h;
        }
        BoundaryCondition::Robin(p) => {
            bc.robin_diagonals(grid)?;
            rhs[0] = -p.left_value * h2 / p.b;
            rhs[last] = p.right_value * h2 / p.d;
        }
    }
    Ok(rhs)
}

/// Kronecker sum `Σ_k I^{⊗(k-1)} ⊗ L ⊗ I^{⊗(d-k)}`; dimension 1 is the most
/// significant digit of the flattened index.
pub fn build_matrix_ndim(bc: &BoundaryCondition, grid: &Grid) -> Result<StencilMatrix> {
    build_matrix_ndim_capped(bc, grid, DEFAULT_SIZE_CAP)
}

pub fn build_matrix_ndim_capped(bc: &BoundaryCondition, grid: &Grid, cap: usize) -> Result<StencilMatrix> {
    let one_d = build_matrix(bc, grid)?;
    let points = grid.points();
    let size = points
        .checked_pow(grid.dims as u32)
        .filter(|&s| s <= cap)
        .ok_or(Error::SizeCapExceeded { size: points.saturating_pow(grid.dims as u32), cap })?;
    if grid.dims == 1 {
        return Ok(one_d);
    }
    let mut m = RealMatrix::zeros(size, size);
    for row in 0..size {
        for k in 0..grid.dims {
            let stride = points.pow((grid.dims - 1 - k) as u32);
            let digit = (row / stride) % points;
            for (col_digit, &v) in one_d.entries.row(digit).iter().enumerate() {
                if v != 0.0 {
                    let col = row - digit * stride + col_digit * stride;
                    m[(row, col)] += v;
                }
            }
        }
    }
    Ok(StencilMatrix { variant: bc.variant(), dims: grid.dims, h: grid.h, entries: m })
}
