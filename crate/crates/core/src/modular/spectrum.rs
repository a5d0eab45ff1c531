use crate::discretization::OrthonormalFrame;
use crate::error::{Error, Result};
use crate::linalg::{invert, spectral_sum, sym_eigen, MatrixMP, SymEigen};
use crate::precision::{arcoth, Real};

/// `B = A⁺ χ A⁻ + A⁻ χ A⁺ - 1` in the orthonormal frame, with `A⁺` obtained
/// by inverting `A⁻`.
pub fn build_b(chi_t: &MatrixMP, a_neg_t: &MatrixMP) -> Result<MatrixMP> {
    let a_pos_t = invert(a_neg_t)?;
    assemble_b(chi_t, a_neg_t, &a_pos_t)
}

/// `B` from both powers. With symmetric inputs the second product is the
/// transpose of the first, so `B = S + Sᵀ - 1` is symmetric by construction.
pub fn assemble_b(chi_t: &MatrixMP, a_neg_t: &MatrixMP, a_pos_t: &MatrixMP) -> Result<MatrixMP> {
    let s = a_pos_t.multiply(chi_t)?.multiply(a_neg_t)?;
    let ctx = *s.context();
    Ok(MatrixMP::symmetric_from_fn(&ctx, s.rows(), |i, j| {
        let v = s.get(i, j) + s.get(j, i);
        if i == j {
            v - 1
        } else {
            v
        }
    }))
}

/// Eigensystem of `B` that passed the forbidden-band check.
#[derive(Clone, Debug)]
pub struct GatedSpectrum {
    pub eigen: SymEigen,
    /// `min (|λ| - 1)` over the eigenvalues that were not deflated.
    pub min_gap: Real,
    /// Indices (into the ascending eigenvalues) set aside as `λ = ±1`.
    pub deflated: Vec<usize>,
    /// `max |λ - target|` over the deflated eigenvalues; zero when none were.
    pub deflation_residual: Real,
}

impl GatedSpectrum {
    /// `arcoth(B)`, extended by zero on the deflated eigenspace.
    pub fn arcoth(&self) -> Result<MatrixMP> {
        let values = self
            .eigen
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(i, lambda)| {
                if self.deflated.contains(&i) {
                    Ok(lambda.zero_like())
                } else {
                    arcoth(lambda)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        spectral_sum(&self.eigen, &values)
    }
}

/// How many eigenvalues of `B` to set aside, and at which end of the band.
///
/// A uniform discretization in which the outside part of the region carries
/// more elements than the inside has `-1` eigenvalues by dimension count
/// alone, `2·outside - n` of them; the reverse imbalance gives `+1`
/// eigenvalues. Either way they span the orthogonal complement of the
/// cyclic subspace, on which the modular generator is not defined.
#[derive(Clone, Debug)]
pub struct Deflation {
    pub count: usize,
    /// `-1` or `1`.
    pub target: i32,
    /// Each deflated eigenvalue must lie this close to `target`.
    pub tolerance: Real,
}

impl Deflation {
    pub fn none(tolerance: Real) -> Self {
        Self {
            count: 0,
            target: -1,
            tolerance,
        }
    }

    /// From the element count `n` and the number of elements outside the
    /// region.
    pub fn from_counts(n: usize, outside: usize, tolerance: Real) -> Self {
        let (count, target) = if 2 * outside >= n {
            (2 * outside - n, -1)
        } else {
            (n - 2 * outside, 1)
        };
        Self {
            count,
            target,
            tolerance,
        }
    }
}

/// Eigen-decomposes `B` and requires `|λ| ≥ 1 + epsilon` for every
/// eigenvalue.
pub fn spectrum_gate(b: &MatrixMP, epsilon: &Real) -> Result<GatedSpectrum> {
    gate(sym_eigen(b)?, epsilon, &Deflation::none(epsilon.clone()))
}

/// As [`spectrum_gate`], after removing the `deflation.count` eigenvalues
/// nearest `deflation.target`.
pub fn spectrum_gate_deflated(
    b: &MatrixMP,
    epsilon: &Real,
    deflation: &Deflation,
) -> Result<GatedSpectrum> {
    gate(sym_eigen(b)?, epsilon, deflation)
}

fn gate(eigen: SymEigen, epsilon: &Real, deflation: &Deflation) -> Result<GatedSpectrum> {
    let values = &eigen.eigenvalues;
    let n = values.len();
    let forbidden = |index: usize| Error::ForbiddenSpectrum {
        index,
        lambda: values[index].clone(),
        gap: values[index].abs() - 1,
    };
    if n == 0 {
        return Err(Error::Dimension("empty B matrix".into()));
    }
    if deflation.target.abs() != 1 {
        return Err(Error::InvalidConfig(format!(
            "deflation target must be -1 or 1, got {}",
            deflation.target
        )));
    }
    let distance = |i: usize| (&values[i] - deflation.target).abs();
    if deflation.count >= n {
        // nothing left: the region is empty or fills the box
        let nearest = (0..n)
            .min_by(|&i, &j| distance(i).total_cmp(&distance(j)))
            .expect("non-empty");
        return Err(forbidden(nearest));
    }
    let mut by_distance: Vec<usize> = (0..n).collect();
    by_distance.sort_by(|&i, &j| distance(i).total_cmp(&distance(j)).then(i.cmp(&j)));
    let mut deflated: Vec<usize> = by_distance[..deflation.count].to_vec();
    deflated.sort_unstable();
    let mut deflation_residual = values[0].zero_like();
    for &i in &deflated {
        let d = distance(i);
        if d > deflation.tolerance {
            return Err(forbidden(i));
        }
        deflation_residual = deflation_residual.max(d);
    }
    let threshold = epsilon.clone() + 1;
    let mut min_gap: Option<Real> = None;
    for (i, lambda) in values.iter().enumerate() {
        if deflated.contains(&i) {
            continue;
        }
        if lambda.abs() < threshold {
            return Err(forbidden(i));
        }
        let gap = lambda.abs() - 1;
        min_gap = Some(match min_gap {
            Some(g) => g.min(gap),
            None => gap,
        });
    }
    Ok(GatedSpectrum {
        min_gap: min_gap.expect("at least one eigenvalue kept"),
        eigen,
        deflated,
        deflation_residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Minus,
    Plus,
}

/// `M̃± = 2 A^{±1/4} arcoth(B) A^{±1/4}` in the frame, returned as the
/// hat-basis bilinear form `L M̃ Lᵀ`.
pub fn build_m(
    spectrum: &GatedSpectrum,
    a_neg_t: &MatrixMP,
    a_pos_t: &MatrixMP,
    sign: Sign,
    frame: &OrthonormalFrame,
) -> Result<MatrixMP> {
    build_m_from(&spectrum.arcoth()?, a_neg_t, a_pos_t, sign, frame)
}

pub(crate) fn build_m_from(
    arcoth_b: &MatrixMP,
    a_neg_t: &MatrixMP,
    a_pos_t: &MatrixMP,
    sign: Sign,
    frame: &OrthonormalFrame,
) -> Result<MatrixMP> {
    let a = match sign {
        Sign::Minus => a_neg_t,
        Sign::Plus => a_pos_t,
    };
    let ctx = *a.context();
    let m_t = a
        .multiply(arcoth_b)?
        .multiply(a)?
        .scale(&ctx.int(2))
        .symmetrized()?;
    frame.from_frame(&m_t)
}
