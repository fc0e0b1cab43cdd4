//! Endomorphism operad of a finite-dimensional space.
//!
//! A [`MultiOp`] of degree `n` is a multilinear map `V^{⊗n} -> V` stored by its
//! structure constants `c[k; i1..in]` (value index `k`, inputs `i1..in`), each
//! an [`OperatorExpr`]. Indices are zero-based here. Products of entries keep
//! the outer operation's entry on the left.

use std::fmt;

use thiserror::Error;

use crate::weyl::{Mode, OperatorExpr, WeylError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperadError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("mode mismatch: {0} vs {1}")]
    ModeMismatch(Mode, Mode),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("partial composition index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("dimension and degree must be positive")]
    Empty,
    #[error("expected a degree-{expected} operation of dimension {dim}, got degree {degree} and dimension {found_dim}")]
    Shape { expected: usize, dim: usize, degree: usize, found_dim: usize },
    #[error("entry mode {0} differs from operation mode {1}")]
    EntryMode(Mode, Mode),
    #[error(transparent)]
    Algebra(#[from] WeylError),
}

#[derive(Clone, PartialEq, Eq)]
pub struct MultiOp {
    dim: usize,
    degree: usize,
    mode: Mode,
    entries: Vec<OperatorExpr>,
}

impl MultiOp {
    pub fn zero(dim: usize, degree: usize, mode: Mode) -> Result<Self, OperadError> {
        if dim == 0 || degree == 0 {
            return Err(OperadError::Empty);
        }
        let len = dim.pow(degree as u32 + 1);
        Ok(MultiOp { dim, degree, mode, entries: vec![OperatorExpr::zero(mode); len] })
    }

    /// Builds an operation from `f(out, inputs)`.
    pub fn from_fn(
        dim: usize,
        degree: usize,
        mode: Mode,
        mut f: impl FnMut(usize, &[usize]) -> OperatorExpr,
    ) -> Result<Self, OperadError> {
        let mut op = MultiOp::zero(dim, degree, mode)?;
        let mut inputs = vec![0usize; degree];
        for flat in 0..op.entries.len() {
            let out = op.decode(flat, &mut inputs);
            let v = f(out, &inputs);
            if v.mode() != mode {
                return Err(OperadError::EntryMode(v.mode(), mode));
            }
            op.entries[flat] = v;
        }
        Ok(op)
    }

    /// Degree-1 operation from a square matrix, `M[k][s]` acting as `(Mv)_k = Σ M[k][s] v_s`.
    pub fn from_matrix(rows: &[Vec<OperatorExpr>], mode: Mode) -> Result<Self, OperadError> {
        let dim = rows.len();
        for r in rows {
            if r.len() != dim {
                return Err(OperadError::DimMismatch(dim, r.len()));
            }
        }
        MultiOp::from_fn(dim, 1, mode, |k, ins| rows[k][ins[0]].clone())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `degree - 1`.
    pub fn reduced_degree(&self) -> usize {
        self.degree - 1
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    fn index(&self, out: usize, inputs: &[usize]) -> usize {
        assert_eq!(inputs.len(), self.degree, "wrong number of inputs");
        assert!(out < self.dim && inputs.iter().all(|&i| i < self.dim), "index out of range");
        let mut flat = 0;
        for &i in inputs {
            flat = flat * self.dim + i;
        }
        flat * self.dim + out
    }

    fn decode(&self, mut flat: usize, inputs: &mut [usize]) -> usize {
        let out = flat % self.dim;
        flat /= self.dim;
        for slot in inputs.iter_mut().rev() {
            *slot = flat % self.dim;
            flat /= self.dim;
        }
        out
    }

    pub fn get(&self, out: usize, inputs: &[usize]) -> &OperatorExpr {
        &self.entries[self.index(out, inputs)]
    }

    pub fn set(&mut self, out: usize, inputs: &[usize], v: OperatorExpr) {
        assert_eq!(v.mode(), self.mode, "entry mode must match the operation");
        let k = self.index(out, inputs);
        self.entries[k] = v;
    }

    /// Sets `c[k; i, j] = v` and `c[k; j, i] = -v` on a binary operation.
    pub fn set_antisymmetric(&mut self, out: usize, i: usize, j: usize, v: OperatorExpr) {
        assert_eq!(self.degree, 2, "antisymmetric fill needs a binary operation");
        assert_ne!(i, j, "diagonal entries of an antisymmetric operation are zero");
        self.set(out, &[j, i], -&v);
        self.set(out, &[i, j], v);
    }

    pub fn is_antisymmetric(&self) -> bool {
        if self.degree != 2 {
            return false;
        }
        (0..self.dim).all(|k| {
            (0..self.dim).all(|i| {
                (0..self.dim).all(|j| (self.get(k, &[i, j]) + self.get(k, &[j, i])).is_zero())
            })
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(OperatorExpr::is_zero)
    }

    /// All `(out, inputs, entry)` triples in storage order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, Vec<usize>, &OperatorExpr)> + '_ {
        self.entries.iter().enumerate().map(move |(flat, e)| {
            let mut inputs = vec![0; self.degree];
            let out = self.decode(flat, &mut inputs);
            (out, inputs, e)
        })
    }

    /// Applies `f` to every entry; `f` may change the mode.
    pub fn try_map(
        &self,
        mode: Mode,
        mut f: impl FnMut(&OperatorExpr) -> Result<OperatorExpr, WeylError>,
    ) -> Result<MultiOp, OperadError> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            let v = f(e)?;
            if v.mode() != mode {
                return Err(OperadError::EntryMode(v.mode(), mode));
            }
            entries.push(v);
        }
        Ok(MultiOp { dim: self.dim, degree: self.degree, mode, entries })
    }

    fn check_compatible(&self, other: &MultiOp) -> Result<(), OperadError> {
        if self.dim != other.dim {
            return Err(OperadError::DimMismatch(self.dim, other.dim));
        }
        if self.mode != other.mode {
            return Err(OperadError::ModeMismatch(self.mode, other.mode));
        }
        Ok(())
    }

    fn check_same_shape(&self, other: &MultiOp) -> Result<(), OperadError> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(OperadError::DegreeMismatch(self.degree, other.degree));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MultiOp) -> Result<MultiOp, OperadError> {
        self.check_same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(MultiOp { entries, ..self.clone_shape() })
    }

    pub fn try_sub(&self, other: &MultiOp) -> Result<MultiOp, OperadError> {
        self.check_same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(MultiOp { entries, ..self.clone_shape() })
    }

    pub fn neg(&self) -> MultiOp {
        MultiOp { entries: self.entries.iter().map(|e| -e).collect(), ..self.clone_shape() }
    }

    fn clone_shape(&self) -> MultiOp {
        MultiOp { dim: self.dim, degree: self.degree, mode: self.mode, entries: Vec::new() }
    }

    fn signed(self, negative: bool) -> MultiOp {
        if negative {
            self.neg()
        } else {
            self
        }
    }
}

impl fmt::Debug for MultiOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MultiOp(dim={}, degree={}, {})", self.dim, self.degree, self.mode)?;
        for (out, inputs, e) in self.entries() {
            if !e.is_zero() {
                writeln!(f, "  [{out}; {inputs:?}] = {e}")?;
            }
        }
        Ok(())
    }
}

/// `f ∘_i g = (-1)^{i|g|} f ∘ (id^{⊗i} ⊗ g ⊗ id^{⊗(|f|-i)})`.
///
/// Entry-wise: `(f ∘_i g)[k; a] = ± Σ_s f[k; a_0..a_{i-1}, s, a_{i+n_g}..] · g[s; a_i..a_{i+n_g-1}]`.
pub fn partial_compose(f: &MultiOp, i: usize, g: &MultiOp) -> Result<MultiOp, OperadError> {
    f.check_compatible(g)?;
    if i > f.reduced_degree() {
        return Err(OperadError::IndexOutOfRange { index: i, max: f.reduced_degree() });
    }
    let d = f.dim;
    let ng = g.degree;
    let degree = f.degree + g.reduced_degree();
    let negative = (i * g.reduced_degree()) % 2 == 1;
    let mut f_in = vec![0usize; f.degree];
    let out = MultiOp::from_fn(d, degree, f.mode, |k, inputs| {
        f_in[..i].copy_from_slice(&inputs[..i]);
        f_in[i + 1..].copy_from_slice(&inputs[i + ng..]);
        let g_in = &inputs[i..i + ng];
        let mut acc = OperatorExpr::zero(f.mode);
        for s in 0..d {
            f_in[i] = s;
            let fe = f.get(k, &f_in);
            if fe.is_zero() {
                continue;
            }
            let ge = g.get(s, g_in);
            if ge.is_zero() {
                continue;
            }
            acc = &acc + &(fe * ge);
        }
        acc
    })?;
    Ok(out.signed(negative))
}

/// `f ∘ g = Σ_{i=0}^{|f|} f ∘_i g`.
pub fn total_compose(f: &MultiOp, g: &MultiOp) -> Result<MultiOp, OperadError> {
    let mut acc = partial_compose(f, 0, g)?;
    for i in 1..=f.reduced_degree() {
        acc = acc.try_add(&partial_compose(f, i, g)?)?;
    }
    Ok(acc)
}

/// Gerstenhaber bracket `[f, g] = f∘g - (-1)^{|f||g|} g∘f`.
pub fn g_bracket(f: &MultiOp, g: &MultiOp) -> Result<MultiOp, OperadError> {
    let fg = total_compose(f, g)?;
    let gf = total_compose(g, f)?;
    if (f.reduced_degree() * g.reduced_degree()) % 2 == 1 {
        fg.try_add(&gf)
    } else {
        fg.try_sub(&gf)
    }
}

fn sign(exp: usize) -> bool {
    exp % 2 == 1
}

/// `(-1)^{|f||h|}[f,[g,h]] + (-1)^{|g||f|}[g,[h,f]] + (-1)^{|h||g|}[h,[f,g]]`.
pub fn graded_jacobi_defect(f: &MultiOp, g: &MultiOp, h: &MultiOp) -> Result<MultiOp, OperadError> {
    let (rf, rg, rh) = (f.reduced_degree(), g.reduced_degree(), h.reduced_degree());
    let t1 = g_bracket(f, &g_bracket(g, h)?)?.signed(sign(rf * rh));
    let t2 = g_bracket(g, &g_bracket(h, f)?)?.signed(sign(rg * rf));
    let t3 = g_bracket(h, &g_bracket(f, g)?)?.signed(sign(rh * rg));
    t1.try_add(&t2)?.try_add(&t3)
}
