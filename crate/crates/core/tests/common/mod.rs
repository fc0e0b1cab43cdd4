//! Strategies, independent oracles and property bodies shared by the
//! property suite and the acceptance suite.
#![allow(dead_code)]

use std::collections::BTreeMap;

use oplax::jacobi::{jacobi_op, Vec3};
use oplax::operad::{g_bracket, graded_jacobi_defect, partial_compose, MultiOp};
use oplax::scalars::{Exponents, GaussRat, ScalarPoly, Symbol};
use oplax::weyl::{normalize_word_with, Generator, Mode, OperatorExpr, Word};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub fn gauss() -> impl Strategy<Value = GaussRat> {
    (-6i64..=6, 1i64..=4, -3i64..=3).prop_map(|(n, d, im)| {
        &GaussRat::ratio(n, d) + &(&GaussRat::int(im) * &GaussRat::i())
    })
}

pub fn monomial() -> impl Strategy<Value = Exponents> {
    (0i32..=2, 0i32..=1, -2i32..=2, 0i32..=1, 0i32..=1).prop_map(|(w, h, s, a, x)| {
        let mut e = Exponents::one();
        e.0[Symbol::Omega.index()] = w;
        e.0[Symbol::Hbar.index()] = h;
        e.0[Symbol::S.index()] = s;
        e.0[Symbol::A.index()] = a;
        e.0[Symbol::X1.index()] = x;
        e
    })
}

pub fn scalar() -> impl Strategy<Value = ScalarPoly> {
    prop::collection::vec((gauss(), monomial()), 0..4).prop_map(|terms| {
        terms.into_iter().fold(ScalarPoly::zero(), |acc, (c, e)| acc + ScalarPoly::term(c, e))
    })
}

pub fn generator() -> impl Strategy<Value = Generator> {
    prop_oneof![Just(Generator::Q), Just(Generator::P), Just(Generator::Ap), Just(Generator::Am)]
}

pub fn word(max_len: usize) -> impl Strategy<Value = Vec<Generator>> {
    prop::collection::vec(generator(), 0..=max_len)
}

/// Raw `(word, coefficient)` pairs.
pub fn raw_terms() -> impl Strategy<Value = Vec<(Vec<Generator>, ScalarPoly)>> {
    prop::collection::vec((word(4), scalar()), 0..4)
}

pub fn operator(mode: Mode) -> impl Strategy<Value = OperatorExpr> {
    raw_terms().prop_map(move |raw| OperatorExpr::normalize(mode, raw))
}

/// Confluence: any redex order gives the leftmost-first normal form.
pub fn check_confluence(w: &[Generator], picks: &[usize]) -> Result<(), TestCaseError> {
    let coeff = ScalarPoly::one();
    let leftmost = normalize_word_with(&Word(w.to_vec()), &coeff, Mode::Quantum, |r| r[0]);
    let mut n = 0;
    let random = normalize_word_with(&Word(w.to_vec()), &coeff, Mode::Quantum, |r| {
        n += 1;
        r[picks[n % picks.len()] % r.len()]
    });
    let rightmost = normalize_word_with(&Word(w.to_vec()), &coeff, Mode::Quantum, |r| r[r.len() - 1]);
    prop_assert_eq!(&random, &leftmost);
    prop_assert_eq!(&rightmost, &leftmost);
    for (word, _) in leftmost.terms() {
        prop_assert!(word.ccr_redexes().is_empty());
    }
    Ok(())
}

/// An operation with integer entries, kept alongside its table for the
/// multilinear-evaluation oracle.
#[derive(Clone, Debug)]
pub struct IntOp {
    pub dim: usize,
    pub degree: usize,
    /// Indexed by `(out, inputs)` with `out` fastest: `flat = inputs_base_d * d + out`.
    pub vals: Vec<i64>,
}

impl IntOp {
    pub fn get(&self, out: usize, inputs: &[usize]) -> i64 {
        let mut flat = 0;
        for &a in inputs {
            flat = flat * self.dim + a;
        }
        self.vals[flat * self.dim + out]
    }

    pub fn to_multi(&self, mode: Mode) -> MultiOp {
        MultiOp::from_fn(self.dim, self.degree, mode, |k, ins| OperatorExpr::int(mode, self.get(k, ins)))
            .expect("valid shape")
    }

    /// `f(v_1, ..., v_n)` computed by expanding every input.
    pub fn eval(&self, vs: &[Vec<i64>]) -> Vec<i64> {
        assert_eq!(vs.len(), self.degree);
        let mut out = vec![0i64; self.dim];
        let total = self.dim.pow(self.degree as u32);
        let mut idx = vec![0usize; self.degree];
        for flat in 0..total {
            let mut rest = flat;
            for slot in idx.iter_mut().rev() {
                *slot = rest % self.dim;
                rest /= self.dim;
            }
            let weight: i64 = idx.iter().zip(vs).map(|(&a, v)| v[a]).product();
            if weight == 0 {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                *o += self.get(k, &idx) * weight;
            }
        }
        out
    }
}

pub fn int_op(dim: usize, degree: usize) -> impl Strategy<Value = IntOp> {
    prop::collection::vec(-2i64..=2, dim.pow(degree as u32 + 1)).prop_map(move |vals| IntOp { dim, degree, vals })
}

pub fn int_vec(dim: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, dim)
}

pub fn as_int(e: &OperatorExpr) -> i64 {
    let c = e.as_scalar().expect("scalar entry");
    if c.is_zero() {
        return 0;
    }
    let k = c.as_constant().expect("constant entry");
    assert!(k.re.is_integer() && num_traits::Zero::is_zero(&k.im));
    k.re.to_integer().try_into().expect("fits")
}

/// Evaluates a scalar MultiOp with integer values.
pub fn eval_multi(op: &MultiOp, vs: &[Vec<i64>]) -> Vec<i64> {
    let mut vals = vec![0; op.dim().pow(op.degree() as u32 + 1)];
    for (k, ins, e) in op.entries() {
        let mut flat = 0;
        for &a in &ins {
            flat = flat * op.dim() + a;
        }
        vals[flat * op.dim() + k] = as_int(e);
    }
    IntOp { dim: op.dim(), degree: op.degree(), vals }.eval(vs)
}

/// `(f ∘_i g)(v) = (-1)^{i|g|} f(v_1..v_i, g(v_{i+1}..), ...)`, evaluated directly.
pub fn check_partial_compose(f: &IntOp, i: usize, g: &IntOp, vs: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let composed = partial_compose(&f.to_multi(Mode::Classical), i, &g.to_multi(Mode::Classical)).unwrap();
    let inner = g.eval(&vs[i..i + g.degree]);
    let mut args: Vec<Vec<i64>> = vs[..i].to_vec();
    args.push(inner);
    args.extend_from_slice(&vs[i + g.degree..]);
    let sign = if (i * (g.degree - 1)) % 2 == 1 { -1 } else { 1 };
    let expect: Vec<i64> = f.eval(&args).into_iter().map(|v| sign * v).collect();
    prop_assert_eq!(eval_multi(&composed, vs), expect);
    Ok(())
}

/// `[f, g] = -(-1)^{|f||g|}[g, f]` and the graded Jacobi defect vanishes.
pub fn check_graded_lie(f: &IntOp, g: &IntOp, h: &IntOp) -> Result<(), TestCaseError> {
    let m = Mode::Classical;
    let (f, g, h) = (f.to_multi(m), g.to_multi(m), h.to_multi(m));
    let fg = g_bracket(&f, &g).unwrap();
    let gf = g_bracket(&g, &f).unwrap();
    let both_odd = (f.reduced_degree() * g.reduced_degree()) % 2 == 1;
    let sum = if both_odd { fg.try_sub(&gf).unwrap() } else { fg.try_add(&gf).unwrap() };
    prop_assert!(sum.is_zero(), "graded antisymmetry failed");
    prop_assert!(graded_jacobi_defect(&f, &g, &h).unwrap().is_zero(), "Jacobi defect nonzero");
    Ok(())
}

/// Three operations of a common dimension with arities in `1..=3`.
pub fn graded_triple() -> impl Strategy<Value = (IntOp, IntOp, IntOp)> {
    (2usize..=3, 1usize..=3, 1usize..=3, 1usize..=3)
        .prop_flat_map(|(d, a, b, c)| (int_op(d, a), int_op(d, b), int_op(d, c)))
}

pub fn rational_vec3() -> impl Strategy<Value = Vec3> {
    prop::array::uniform3((-4i64..=4, 1i64..=3)).prop_map(|c| Vec3(c.map(|(n, d)| ScalarPoly::ratio(n, d))))
}

/// Linearity of the Jacobi operator in its first slot.
pub fn check_jacobi_linear(
    mu: &MultiOp,
    x: &Vec3,
    x2: &Vec3,
    y: &Vec3,
    z: &Vec3,
    c: &ScalarPoly,
) -> Result<(), TestCaseError> {
    let lhs = jacobi_op(&x.add(&x2.scale(c)), y, z, mu).unwrap();
    let a = jacobi_op(x, y, z, mu).unwrap();
    let b = jacobi_op(x2, y, z, mu).unwrap();
    for k in 0..3 {
        prop_assert_eq!(&lhs[k], &(&a[k] + &b[k].scale(c)));
    }
    // the operator is cyclic, so linearity in the first slot covers all three
    let cyc = jacobi_op(y, z, x, mu).unwrap();
    prop_assert_eq!(cyc, a);
    Ok(())
}

/// Classical Jacobi identity from integer structure constants, without any
/// of the crate's algebra.
pub fn classical_jacobi_defect(c: &[[[i64; 3]; 3]; 3]) -> i64 {
    // c[i][j][k] = coefficient of e_k in [e_i, e_j]
    let mut worst = 0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let s: i64 = (0..3)
                        .map(|m| c[j][k][m] * c[i][m][l] + c[k][i][m] * c[j][m][l] + c[i][j][m] * c[k][m][l])
                        .sum();
                    worst = worst.max(s.abs());
                }
            }
        }
    }
    worst
}

pub fn hbar_zero() -> BTreeMap<Symbol, ScalarPoly> {
    BTreeMap::from([(Symbol::Hbar, ScalarPoly::zero())])
}
