//! Fast cross-correlation.
//!
//! The steering matrix `W[i][f] = exp(j 2 pi f tau_i / N)` is factored offline
//! as `W ~= D P` with `K` rows in `P`. Writing each row as
//! `exp(j pi tau / 2) * exp(j 2 pi (f - N/4) tau / N)` splits `W` into a part
//! whose real rows are even about bin `N/4` and a part whose imaginary rows
//! are odd about it. The two parts have orthogonal row and column spaces, so
//! they are decomposed separately and their bases merged by singular value.
//! Every row of `P` is then either real and even or imaginary and odd, and
//! only its first `N/4 + 1` coefficients are stored.
//!
//! Online, the PHAT vector is folded once into sums and differences of
//! mirrored bins and each basis is a real dot product against one of them:
//! `K (N + 2) + N + I (4K - 1)` flops per frame.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::gcc::{CorrelationVector, DelayGrid};
use crate::linalg::{dot, orthogonalize_rows, symmetric_eigen, Matrix};
use crate::xspec::PhatVector;
use crate::{is_power_of_two, Error, Result};

/// Singular values below this fraction of the largest do not count towards rank.
pub const RANK_TOLERANCE: f64 = 1e-10;
/// Relative gap under which consecutive singular values are reported degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;
/// Largest accepted parity deviation of an unfolded basis, relative to the
/// leading singular value.
pub const PARITY_TOLERANCE: f64 = 1e-10;

fn expj(a: f64) -> Complex64 {
    Complex64::new(libm::cos(a), libm::sin(a))
}

/// Dense `I x (N/2 + 1)` steering matrix for a delay grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringMatrix {
    n: usize,
    grid: DelayGrid,
    data: Vec<Complex64>,
}

impl SteeringMatrix {
    pub fn build(grid: DelayGrid, n: usize) -> Result<Self> {
        if n < 4 || !is_power_of_two(n) {
            return Err(Error::NotPowerOfTwo(n));
        }
        let bins = n / 2 + 1;
        let mut data = Vec::with_capacity(grid.len() * bins);
        for tau in grid.taus() {
            data.extend((0..bins).map(|f| expj(2.0 * PI * f as f64 * tau / n as f64)));
        }
        Ok(Self { n, grid, data })
    }

    pub fn frame_size(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> &DelayGrid {
        &self.grid
    }

    pub fn rows(&self) -> usize {
        self.grid.len()
    }

    pub fn cols(&self) -> usize {
        self.n / 2 + 1
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        let c = self.cols();
        &self.data[i * c..(i + 1) * c]
    }

    pub fn get(&self, i: usize, f: usize) -> Complex64 {
        self.data[i * self.cols() + f]
    }

    /// Dense `2 Re{W x}`.
    pub fn correlate_dense(&self, x: &PhatVector) -> Result<CorrelationVector> {
        if x.len() != self.cols() {
            return Err(Error::LengthMismatch {
                expected: self.cols(),
                actual: x.len(),
            });
        }
        Ok(CorrelationVector(
            (0..self.rows())
                .map(|i| {
                    let s: Complex64 = self.row(i).iter().zip(x.as_slice()).map(|(w, v)| w * v).sum();
                    2.0 * s.re
                })
                .collect(),
        ))
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|v| v.norm_sqr()).sum())
    }
}

/// Symmetry of a basis about bin `N/4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    /// Real, `p(f) = p(N/2 - f)`.
    EvenReal,
    /// Purely imaginary, `p(f) = -p(N/2 - f)`.
    OddImaginary,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::EvenReal => 1.0,
            Parity::OddImaginary => -1.0,
        }
    }

    pub fn to_flag(self) -> u8 {
        match self {
            Parity::EvenReal => 0,
            Parity::OddImaginary => 1,
        }
    }

    pub fn from_flag(flag: u8) -> Option<Self> {
        match flag {
            0 => Some(Parity::EvenReal),
            1 => Some(Parity::OddImaginary),
            _ => None,
        }
    }
}

/// Offline product of the decomposition.
///
/// `coeffs` holds `K` rows of `N/4 + 1` real values. For odd rows the factor
/// `j` of the imaginary basis has been moved into the matching column of the
/// stored dictionary, so `y = 2 Re{D z}` with `z` a real-weighted sum.
#[derive(Debug, Clone, PartialEq)]
pub struct FccBases {
    n: usize,
    grid: DelayGrid,
    singulars: Vec<f64>,
    parity: Vec<Parity>,
    coeffs: Vec<f64>,
    dictionary: Vec<Complex64>,
}

/// Diagnostics produced alongside the bases.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionReport {
    /// Number of singular values at or above `RANK_TOLERANCE` of the largest.
    pub attainable_rank: usize,
    /// All attainable singular values, descending, with their parity.
    pub spectrum: Vec<(f64, Parity)>,
    /// `||W - D P||_F / ||W||_F` for the retained rank.
    pub relative_residual: f64,
    /// Largest deviation of the unfolded bases from their parity.
    pub parity_residual: f64,
    /// Largest `|D^H W - P|` entry over the retained bases, relative to the
    /// leading singular value.
    pub projection_residual: f64,
    /// Indices `k` where `singulars[k]` and `singulars[k + 1]` coincide.
    pub degenerate: Vec<usize>,
}

struct Candidate {
    sigma: f64,
    parity: Parity,
    // left vector over the grid
    u: Vec<f64>,
    // folded coefficients over m = 0..=N/4, unweighted
    coeffs: Vec<f64>,
}

impl FccBases {
    /// Truncated decomposition of `w` keeping the `k` strongest bases.
    pub fn decompose(w: &SteeringMatrix, k: usize) -> Result<Self> {
        Self::decompose_with_report(w, k).map(|(b, _)| b)
    }

    pub fn decompose_with_report(w: &SteeringMatrix, k: usize) -> Result<(Self, DecompositionReport)> {
        if k == 0 {
            return Err(Error::param("K", "rank must be at least one"));
        }
        let n = w.frame_size();
        let grid = *w.grid();
        let rows = grid.len();
        let quarter = n / 4;
        let folded = quarter + 1;

        // Rotate each row by exp(-j pi tau / 2) and project its real part onto
        // even vectors and its imaginary part onto odd vectors, folded to
        // m = 0..=N/4. Columns are weighted by sqrt(2) (sqrt(1) at m = N/4) so
        // that Euclidean products on the folded rows equal full-band products.
        let weight = |m: usize| if m == quarter { 1.0 } else { libm::sqrt(2.0) };
        let mut even = Matrix::zeros(rows, folded);
        let mut odd = Matrix::zeros(rows, folded);
        for i in 0..rows {
            let phase = expj(-PI * grid.tau(i) / 2.0);
            for m in 0..folded {
                let a = phase * w.get(i, m);
                let b = phase * w.get(i, n / 2 - m);
                even[(i, m)] = 0.5 * (a.re + b.re) * weight(m);
                odd[(i, m)] = 0.5 * (a.im - b.im) * weight(m);
            }
        }

        let mut candidates = Vec::with_capacity(2 * rows);
        for (block, parity) in [(even, Parity::EvenReal), (odd, Parity::OddImaginary)] {
            let (_, vecs) = symmetric_eigen(&block.gram());
            // rows of q are left vectors; y = q * block
            let mut q = transpose(&vecs);
            let mut y = matmul(&q, &block);
            orthogonalize_rows(&mut y, &mut q);
            for r in 0..rows {
                let yr = y.row(r);
                let sigma = libm::sqrt(dot(yr, yr));
                let coeffs = (0..folded).map(|m| yr[m] / weight(m)).collect();
                candidates.push(Candidate {
                    sigma,
                    parity,
                    u: q.row(r).to_vec(),
                    coeffs,
                });
            }
        }

        let sigma_max = candidates.iter().fold(0.0f64, |m, c| m.max(c.sigma));
        candidates.sort_by(|a, b| {
            b.sigma
                .total_cmp(&a.sigma)
                .then(a.parity.to_flag().cmp(&b.parity.to_flag()))
        });
        let attainable = candidates
            .iter()
            .take_while(|c| c.sigma >= RANK_TOLERANCE * sigma_max && c.sigma > 0.0)
            .count();
        if k > attainable {
            return Err(Error::RankExceeded {
                requested: k,
                attainable,
            });
        }

        let dropped: f64 = candidates[k..].iter().map(|c| c.sigma * c.sigma).sum();
        let relative_residual = libm::sqrt(dropped) / w.frobenius_norm();

        let mut singulars = Vec::with_capacity(k);
        let mut parity = Vec::with_capacity(k);
        let mut coeffs = Vec::with_capacity(k * folded);
        let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(k);
        for c in candidates.iter_mut().take(k) {
            // largest coefficient positive; ties go to the lowest bin
            let mut lead = 0;
            for (m, v) in c.coeffs.iter().enumerate() {
                if v.abs() > c.coeffs[lead].abs() {
                    lead = m;
                }
            }
            if c.coeffs[lead] < 0.0 {
                c.coeffs.iter_mut().for_each(|v| *v = -*v);
                c.u.iter_mut().for_each(|v| *v = -*v);
            }
            if c.parity == Parity::OddImaginary {
                c.coeffs[quarter] = 0.0;
            }
            let absorbed = match c.parity {
                Parity::EvenReal => Complex64::new(1.0, 0.0),
                Parity::OddImaginary => Complex64::new(0.0, 1.0),
            };
            columns.push(
                (0..rows)
                    .map(|i| expj(PI * grid.tau(i) / 2.0) * absorbed * c.u[i])
                    .collect(),
            );
            singulars.push(c.sigma);
            parity.push(c.parity);
            coeffs.extend_from_slice(&c.coeffs);
        }
        let mut dictionary = Vec::with_capacity(rows * k);
        for i in 0..rows {
            dictionary.extend(columns.iter().map(|col| col[i]));
        }

        let bases = Self {
            n,
            grid,
            singulars,
            parity,
            coeffs,
            dictionary,
        };
        let parity_residual = bases.parity_residual();
        if parity_residual > PARITY_TOLERANCE * sigma_max {
            return Err(Error::ParityViolation(parity_residual));
        }
        let projection_residual = bases.projection_residual(w) / sigma_max;
        let report = DecompositionReport {
            attainable_rank: attainable,
            spectrum: candidates[..attainable]
                .iter()
                .map(|c| (c.sigma, c.parity))
                .collect(),
            relative_residual,
            parity_residual,
            projection_residual,
            degenerate: bases.degenerate_pairs(),
        };
        Ok((bases, report))
    }

    /// Assembles bases from stored parts, checking shapes and invariants.
    pub fn from_parts(
        n: usize,
        grid: DelayGrid,
        singulars: Vec<f64>,
        parity: Vec<Parity>,
        coeffs: Vec<f64>,
        dictionary: Vec<Complex64>,
    ) -> Result<Self> {
        if n < 4 || !is_power_of_two(n) {
            return Err(Error::NotPowerOfTwo(n));
        }
        let k = singulars.len();
        if k == 0 {
            return Err(Error::param("K", "rank must be at least one"));
        }
        let folded = n / 4 + 1;
        for (expected, actual) in [
            (k, parity.len()),
            (k * folded, coeffs.len()),
            (k * grid.len(), dictionary.len()),
        ] {
            if expected != actual {
                return Err(Error::LengthMismatch { expected, actual });
            }
        }
        if singulars.iter().any(|s| !(s.is_finite() && *s >= 0.0))
            || singulars.windows(2).any(|w| w[1] > w[0])
        {
            return Err(Error::param("singulars", "must be finite, non-negative and descending"));
        }
        if coeffs.iter().any(|v| !v.is_finite()) || dictionary.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::param("bases", "non-finite coefficient"));
        }
        for (row, p) in coeffs.chunks_exact(folded).zip(&parity) {
            if *p == Parity::OddImaginary && row[folded - 1] != 0.0 {
                return Err(Error::param("coeffs", "odd basis has a non-zero middle coefficient"));
            }
        }
        Ok(Self {
            n,
            grid,
            singulars,
            parity,
            coeffs,
            dictionary,
        })
    }

    pub fn frame_size(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.singulars.len()
    }

    pub fn grid(&self) -> &DelayGrid {
        &self.grid
    }

    pub fn singulars(&self) -> &[f64] {
        &self.singulars
    }

    pub fn parity(&self) -> &[Parity] {
        &self.parity
    }

    /// Length of a folded coefficient row, `N/4 + 1`.
    pub fn folded_len(&self) -> usize {
        self.n / 4 + 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff_row(&self, k: usize) -> &[f64] {
        let c = self.folded_len();
        &self.coeffs[k * c..(k + 1) * c]
    }

    /// Stored `I x K` dictionary with the odd-basis `j` absorbed, row-major.
    pub fn folded_dictionary(&self) -> &[Complex64] {
        &self.dictionary
    }

    /// Basis `p(k)` over all `N/2 + 1` bins.
    pub fn unfolded_row(&self, k: usize) -> Vec<Complex64> {
        let half = self.n / 2;
        let row = self.coeff_row(k);
        let (unit, sign) = match self.parity[k] {
            Parity::EvenReal => (Complex64::new(1.0, 0.0), 1.0),
            Parity::OddImaginary => (Complex64::new(0.0, 1.0), -1.0),
        };
        (0..=half)
            .map(|f| {
                if f <= half / 2 {
                    unit * row[f]
                } else {
                    unit * (sign * row[half - f])
                }
            })
            .collect()
    }

    /// Dictionary entry `D[i][k]` such that `W ~= D P` with `P` the unfolded rows.
    pub fn dictionary(&self, i: usize, k: usize) -> Complex64 {
        let d = self.dictionary[i * self.rank() + k];
        match self.parity[k] {
            Parity::EvenReal => d,
            Parity::OddImaginary => d * Complex64::new(0.0, -1.0),
        }
    }

    /// Dense `D P`.
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let rows: Vec<Vec<Complex64>> = (0..self.rank()).map(|k| self.unfolded_row(k)).collect();
        let bins = self.n / 2 + 1;
        let mut out = vec![Complex64::new(0.0, 0.0); self.grid.len() * bins];
        for i in 0..self.grid.len() {
            for (k, row) in rows.iter().enumerate() {
                let d = self.dictionary(i, k);
                for (o, p) in out[i * bins..(i + 1) * bins].iter_mut().zip(row) {
                    *o += d * p;
                }
            }
        }
        out
    }

    /// Largest entry of `D^H W - P`.
    fn projection_residual(&self, w: &SteeringMatrix) -> f64 {
        let mut worst = 0.0f64;
        for k in 0..self.rank() {
            let row = self.unfolded_row(k);
            for (f, p) in row.iter().enumerate() {
                let proj: Complex64 = (0..self.grid.len())
                    .map(|i| self.dictionary(i, k).conj() * w.get(i, f))
                    .sum();
                worst = worst.max((proj - p).norm());
            }
        }
        worst
    }

    /// Largest `|p(k,f) - s p(k, N/2 - f)|` over all bases, `s` the parity sign,
    /// or stray real (odd) or imaginary (even) component.
    pub fn parity_residual(&self) -> f64 {
        let half = self.n / 2;
        let mut worst = 0.0f64;
        for k in 0..self.rank() {
            let row = self.unfolded_row(k);
            let sign = self.parity[k].sign();
            for f in 0..=half {
                worst = worst.max((row[f] - row[half - f] * sign).norm());
                let stray = match self.parity[k] {
                    Parity::EvenReal => row[f].im,
                    Parity::OddImaginary => row[f].re,
                };
                worst = worst.max(stray.abs());
            }
        }
        worst
    }

    pub fn degenerate_pairs(&self) -> Vec<usize> {
        let top = self.singulars.first().copied().unwrap_or(0.0);
        self.singulars
            .windows(2)
            .enumerate()
            .filter(|(_, w)| (w[0] - w[1]).abs() <= DEGENERACY_TOLERANCE * top)
            .map(|(k, _)| k)
            .collect()
    }

    /// `y = 2 Re{D z}`, `z[k] = sum_m coeffs[k][m] * (x_add or x_sub)[m]`.
    pub fn correlate(&self, folded: &FoldedInput) -> Result<CorrelationVector> {
        let mut z = vec![Complex64::new(0.0, 0.0); self.rank()];
        let mut y = CorrelationVector::zeros(self.grid.len());
        self.correlate_into(folded, &mut z, &mut y.0)?;
        Ok(y)
    }

    pub fn correlate_into(&self, folded: &FoldedInput, z: &mut [Complex64], y: &mut [f64]) -> Result<()> {
        let c = self.folded_len();
        if folded.add.len() != c || folded.sub.len() != c {
            return Err(Error::LengthMismatch {
                expected: c,
                actual: folded.add.len(),
            });
        }
        if z.len() != self.rank() || y.len() != self.grid.len() {
            return Err(Error::LengthMismatch {
                expected: self.grid.len(),
                actual: y.len(),
            });
        }
        for ((zk, row), p) in z.iter_mut().zip(self.coeffs.chunks_exact(c)).zip(&self.parity) {
            let src = match p {
                Parity::EvenReal => &folded.add,
                Parity::OddImaginary => &folded.sub,
            };
            let (mut re, mut im) = (0.0, 0.0);
            for (a, x) in row.iter().zip(src) {
                re += a * x.re;
                im += a * x.im;
            }
            *zk = Complex64::new(re, im);
        }
        for (yi, d) in y.iter_mut().zip(self.dictionary.chunks_exact(self.rank())) {
            let mut acc = 0.0;
            for (dk, zk) in d.iter().zip(z.iter()) {
                acc += dk.re * zk.re - dk.im * zk.im;
            }
            *yi = 2.0 * acc;
        }
        Ok(())
    }
}

/// PHAT vector folded about bin `N/4`.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldedInput {
    pub add: Vec<Complex64>,
    pub sub: Vec<Complex64>,
}

impl FoldedInput {
    pub fn zeros(folded_len: usize) -> Self {
        Self {
            add: vec![Complex64::new(0.0, 0.0); folded_len],
            sub: vec![Complex64::new(0.0, 0.0); folded_len],
        }
    }

    /// `add[m] = x[m] + x[N/2 - m]`, `sub[m] = x[m] - x[N/2 - m]` for `m < N/4`;
    /// the middle bin is copied into both.
    pub fn fold(x: &PhatVector) -> Result<Self> {
        let mut out = Self::zeros(x.len() / 2 + 1);
        out.fold_from(x)?;
        Ok(out)
    }

    pub fn fold_from(&mut self, x: &PhatVector) -> Result<()> {
        let x = x.as_slice();
        let len = x.len();
        if len < 3 || (len - 1) % 2 != 0 || !is_power_of_two(2 * (len - 1)) {
            return Err(Error::LengthMismatch {
                expected: 2 * self.add.len().saturating_sub(1) + 1,
                actual: len,
            });
        }
        let half = len - 1;
        let quarter = half / 2;
        if self.add.len() != quarter + 1 {
            return Err(Error::LengthMismatch {
                expected: 2 * self.add.len().saturating_sub(1) + 1,
                actual: len,
            });
        }
        for m in 0..quarter {
            let (a, b) = (x[m], x[half - m]);
            self.add[m] = a + b;
            self.sub[m] = a - b;
        }
        self.add[quarter] = x[quarter];
        self.sub[quarter] = x[quarter];
        Ok(())
    }
}

/// Online correlator sharing immutable bases.
#[derive(Debug, Clone)]
pub struct FccCorrelator {
    bases: Arc<FccBases>,
    folded: FoldedInput,
    z: Vec<Complex64>,
}

impl FccCorrelator {
    pub fn new(bases: Arc<FccBases>) -> Self {
        let folded = FoldedInput::zeros(bases.folded_len());
        let z = vec![Complex64::new(0.0, 0.0); bases.rank()];
        Self { bases, folded, z }
    }

    pub fn bases(&self) -> &FccBases {
        &self.bases
    }

    pub fn grid(&self) -> &DelayGrid {
        self.bases.grid()
    }

    pub fn correlate_into(&mut self, x: &PhatVector, y: &mut [f64]) -> Result<()> {
        self.folded.fold_from(x)?;
        self.bases.correlate_into(&self.folded, &mut self.z, y)
    }

    pub fn correlate(&mut self, x: &PhatVector) -> Result<CorrelationVector> {
        let mut y = CorrelationVector::zeros(self.bases.grid().len());
        self.correlate_into(x, &mut y.0)?;
        Ok(y)
    }
}

fn transpose(m: &Matrix) -> Matrix {
    let mut t = Matrix::zeros(m.cols(), m.rows());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            t[(j, i)] = m[(i, j)];
        }
    }
    t
}

fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for k in 0..a.cols() {
            let v = a[(i, k)];
            if v == 0.0 {
                continue;
            }
            for (o, x) in out.row_mut(i).iter_mut().zip(b.row(k)) {
                *o += v * x;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn default_grid() -> DelayGrid {
        DelayGrid::new(8, 2, 16000.0).unwrap()
    }

    fn random_phat(n: usize, rng: &mut ChaCha8Rng) -> PhatVector {
        PhatVector(
            (0..=n / 2)
                .map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI)))
                .collect(),
        )
    }

    fn argmax(y: &[f64]) -> usize {
        let mut best = 0;
        for (i, &v) in y.iter().enumerate() {
            if v > y[best] {
                best = i;
            }
        }
        best
    }

    #[test]
    fn steering_entries() {
        let g = default_grid();
        let w = SteeringMatrix::build(g, 32).unwrap();
        for f in 0..w.cols() {
            assert!((w.get(16, f) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
        for i in 0..w.rows() {
            assert!((w.get(i, 0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
            for f in 0..w.cols() {
                assert!((w.get(i, f).norm() - 1.0).abs() < 1e-14);
                assert!((w.get(i, f) - w.get(g.mirror(i), f).conj()).norm() < 1e-14);
            }
        }
        // tau = N/4 at f = 1 is exp(j pi / 2)
        let w = SteeringMatrix::build(DelayGrid::new(8, 1, 16000.0).unwrap(), 32).unwrap();
        assert!((w.get(16, 1) - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn full_rank_reconstructs_w() {
        for n in [64usize, 512] {
            let w = SteeringMatrix::build(default_grid(), n).unwrap();
            let probe = FccBases::decompose_with_report(&w, 1).unwrap().1;
            let bases = FccBases::decompose(&w, probe.attainable_rank).unwrap();
            let rebuilt = bases.reconstruct();
            let worst = rebuilt
                .iter()
                .zip(&w.data)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            assert!(worst <= 1e-9, "n={n}: {worst:e}");
        }
    }

    #[test]
    fn default_bases_alternate_parity() {
        let w = SteeringMatrix::build(default_grid(), 512).unwrap();
        let (bases, report) = FccBases::decompose_with_report(&w, 8).unwrap();
        for (k, p) in bases.parity().iter().enumerate() {
            let expected = if k % 2 == 0 {
                Parity::EvenReal
            } else {
                Parity::OddImaginary
            };
            assert_eq!(*p, expected, "basis {}", k + 1);
        }
        assert!(bases.parity_residual() <= 1e-10);
        assert!(report.parity_residual <= 1e-10);
        assert!(report.degenerate.is_empty());
        assert!(bases.singulars().windows(2).all(|s| s[0] >= s[1]));
        for k in 0..8 {
            if bases.parity()[k] == Parity::OddImaginary {
                assert_eq!(bases.coeff_row(k)[128], 0.0);
            }
        }
    }

    #[test]
    fn residual_matches_dense_reconstruction() {
        let w = SteeringMatrix::build(default_grid(), 512).unwrap();
        let mut last = f64::INFINITY;
        for k in 1..=12 {
            let (bases, report) = FccBases::decompose_with_report(&w, k).unwrap();
            let dense: f64 = bases
                .reconstruct()
                .iter()
                .zip(&w.data)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt()
                / w.frobenius_norm();
            assert!((dense - report.relative_residual).abs() < 1e-9, "k={k}");
            assert!(report.relative_residual <= last + 1e-15);
            last = report.relative_residual;
        }
    }

    #[test]
    fn rank_errors() {
        let w = SteeringMatrix::build(default_grid(), 512).unwrap();
        assert!(matches!(
            FccBases::decompose(&w, 64),
            Err(Error::RankExceeded { requested: 64, attainable: 23 })
        ));
        assert!(FccBases::decompose(&w, 0).is_err());
    }

    #[test]
    fn fold_examples() {
        let x = PhatVector(vec![Complex64::new(1.0, 0.0); 9]);
        let f = FoldedInput::fold(&x).unwrap();
        assert_eq!(f.add, vec![Complex64::new(2.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert_eq!(f.sub[..4], [Complex64::new(0.0, 0.0); 4]);
        assert_eq!(f.sub[4], Complex64::new(1.0, 0.0));

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = random_phat(16, &mut rng);
        let f = FoldedInput::fold(&x).unwrap();
        for m in 0..4 {
            assert_eq!(f.add[m], x.0[m] + x.0[8 - m]);
            assert_eq!(f.sub[m], x.0[m] - x.0[8 - m]);
        }
        assert_eq!(f.add[4], x.0[4]);

        // even about N/4: sub vanishes except in the middle
        let e: Vec<Complex64> = (0..9).map(|f| Complex64::new((f as f64 - 4.0).abs(), 0.0)).collect();
        let f = FoldedInput::fold(&PhatVector(e)).unwrap();
        assert!(f.sub[..4].iter().all(|v| v.norm() == 0.0));

        assert!(FoldedInput::fold(&PhatVector(vec![Complex64::new(0.0, 0.0); 8])).is_err());
    }

    #[test]
    fn folded_path_matches_dense_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let w = SteeringMatrix::build(default_grid(), 64).unwrap();
        for k in [1usize, 3, 8, 22] {
            let bases = FccBases::decompose(&w, k).unwrap();
            let rows: Vec<Vec<Complex64>> = (0..k).map(|r| bases.unfolded_row(r)).collect();
            for _ in 0..10 {
                let x = random_phat(64, &mut rng);
                let y = bases.correlate(&FoldedInput::fold(&x).unwrap()).unwrap();
                let z: Vec<Complex64> = rows
                    .iter()
                    .map(|p| p.iter().zip(&x.0).map(|(a, b)| a * b).sum())
                    .collect();
                for i in 0..w.rows() {
                    let dz: Complex64 = (0..k).map(|c| bases.dictionary(i, c) * z[c]).sum();
                    assert!((y.0[i] - 2.0 * dz.re).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn pure_delay_and_zero_phase() {
        let w = SteeringMatrix::build(default_grid(), 512).unwrap();
        let mut fcc = FccCorrelator::new(Arc::new(FccBases::decompose(&w, 8).unwrap()));
        let y = fcc.correlate(&PhatVector::pure_delay(512, 3.0)).unwrap();
        assert_eq!(default_grid().tau(argmax(&y.0)), 3.0);
        let y = fcc
            .correlate(&PhatVector(vec![Complex64::new(1.0, 0.0); 257]))
            .unwrap();
        assert_eq!(default_grid().tau(argmax(&y.0)), 0.0);
    }

    #[test]
    fn from_parts_validates() {
        let w = SteeringMatrix::build(default_grid(), 64).unwrap();
        let b = FccBases::decompose(&w, 4).unwrap();
        let rebuilt = FccBases::from_parts(
            64,
            *b.grid(),
            b.singulars().to_vec(),
            b.parity().to_vec(),
            b.coeffs().to_vec(),
            b.folded_dictionary().to_vec(),
        )
        .unwrap();
        assert_eq!(rebuilt, b);
        assert!(FccBases::from_parts(64, *b.grid(), vec![], vec![], vec![], vec![]).is_err());
        let mut bad = b.coeffs().to_vec();
        bad[b.folded_len() * 2 - 1] = 0.5;
        assert!(FccBases::from_parts(
            64,
            *b.grid(),
            b.singulars().to_vec(),
            b.parity().to_vec(),
            bad,
            b.folded_dictionary().to_vec()
        )
        .is_err());
    }
}
