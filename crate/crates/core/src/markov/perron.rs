//! Perron root and eigenvectors of irreducible nonnegative integer matrices.

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{nullspace, IntMatrix};
use crate::number::context::factor_at_root;
use crate::number::{scalar_to_json, AlgebraicContext, QPoly, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerronData {
    /// `det(tI − A)`, little-endian.
    pub charpoly: Vec<BigInt>,
    pub s: Scalar,
    /// Right eigenvector, `A·m = s·m`, `Σ mᵢ = 1`.
    pub right: Vec<Scalar>,
    /// Left eigenvector, `ℓ·A = s·ℓ`, `ℓ·m = 1`.
    pub left: Vec<Scalar>,
}

impl PerronData {
    pub fn to_json(&self) -> Value {
        json!({
            "charpoly": self.charpoly.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "s": scalar_to_json(&self.s),
            "right": self.right.iter().map(scalar_to_json).collect::<Vec<_>>(),
            "left": self.left.iter().map(scalar_to_json).collect::<Vec<_>>(),
        })
    }
}

/// Evaluates an integer polynomial at a scalar.
pub fn eval_int_poly(p: &[BigInt], x: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    for c in p.iter().rev() {
        acc = acc * x + Scalar::from_bigint(c.clone());
    }
    acc
}

/// Largest real root of `p`, as an exact scalar. Candidates (for instance the
/// slope of the map) are tried first so the result shares their context.
pub fn largest_root(p: &QPoly, candidates: &[Scalar]) -> Result<Scalar> {
    let roots = p.isolate_real_roots();
    let Some((lo, hi)) = roots.last().cloned() else {
        return Err(Error::unsupported("characteristic polynomial has no real root"));
    };
    let ints = p.primitive_integer();
    for c in candidates {
        let (clo, chi) = (Scalar::Rational(lo.clone()), Scalar::Rational(hi.clone()));
        if *c > clo && *c <= chi && eval_int_poly(&ints, c).is_zero() {
            return Ok(c.clone());
        }
    }
    let (f, a, b) = factor_at_root(p, &lo, &hi).expect("an irreducible factor vanishes at the root");
    if f.degree() == Some(1) {
        return Ok(Scalar::Rational(-f.coeff(0) / f.coeff(1)));
    }
    if a == b {
        return Ok(Scalar::Rational(a));
    }
    let ctx = AlgebraicContext::from_isolated(&f, a, b);
    for c in candidates {
        if let Some(k) = c.context() {
            if k.same_root(&ctx) {
                return Ok(Scalar::generator(k));
            }
        }
    }
    Ok(Scalar::generator(&ctx))
}

fn normalized(v: Vec<Scalar>) -> Vec<Scalar> {
    let total: Scalar = v.iter().sum();
    v.iter().map(|x| x / &total).collect()
}

/// Perron data of an irreducible nonnegative matrix.
pub fn perron_data(a: &IntMatrix, candidates: &[Scalar]) -> Result<PerronData> {
    let q = a.nrows();
    let charpoly = a.charpoly();
    let cp = QPoly::from_bigints(&charpoly);
    // Strip the t^k factor before locating the root.
    let k = charpoly.iter().take_while(|c| c.is_zero()).count();
    let reduced = QPoly::new(cp.coeffs()[k..].to_vec());
    let s = if reduced.is_constant() { Scalar::zero() } else { largest_root(&reduced, candidates)? };
    let shifted = |t: bool| -> Vec<Vec<Scalar>> {
        (0..q)
            .map(|i| {
                (0..q)
                    .map(|j| {
                        let e = if t { a.get(j, i) } else { a.get(i, j) };
                        let x = Scalar::from_bigint(e.clone());
                        if i == j {
                            x - &s
                        } else {
                            x
                        }
                    })
                    .collect()
            })
            .collect()
    };
    let right = nullspace(&shifted(false));
    let left = nullspace(&shifted(true));
    if right.len() != 1 || left.len() != 1 {
        return Err(Error::unsupported("Perron eigenvalue is not simple; the matrix is not irreducible"));
    }
    let right = normalized(right.into_iter().next().unwrap());
    let left = left.into_iter().next().unwrap();
    let dot: Scalar = left.iter().zip(&right).map(|(x, y)| x * y).sum();
    let left = left.iter().map(|x| x / &dot).collect();
    Ok(PerronData { charpoly, s, right, left })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::rat;

    fn m(r: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64(r)
    }

    #[test]
    fn doubling() {
        let p = perron_data(&m(&[vec![1, 1], vec![1, 1]]), &[]).unwrap();
        assert_eq!(p.s, Scalar::int(2));
        assert_eq!(p.right, vec![Scalar::frac(1, 2), Scalar::frac(1, 2)]);
        assert_eq!(p.charpoly, vec![BigInt::from(0), BigInt::from(-2), BigInt::from(1)]);
    }

    #[test]
    fn golden() {
        let a = m(&[vec![1, 1], vec![1, 0]]);
        let p = perron_data(&a, &[]).unwrap();
        let phi = p.s.clone();
        assert_eq!(&phi * &phi, &phi + Scalar::one());
        assert_eq!(p.right, vec![&phi - Scalar::one(), Scalar::int(2) - &phi]);
        assert_eq!(a.right_mul_scalar(&p.right), p.right.iter().map(|x| x * &phi).collect::<Vec<_>>());
        let l = a.left_mul_scalar(&p.left);
        assert_eq!(l, p.left.iter().map(|x| x * &phi).collect::<Vec<_>>());
    }

    #[test]
    fn permutation_and_candidates() {
        let p = perron_data(&m(&[vec![0, 1], vec![1, 0]]), &[]).unwrap();
        assert_eq!(p.s, Scalar::one());
        assert_eq!(p.right, vec![Scalar::frac(1, 2), Scalar::frac(1, 2)]);
        // √2 period-2 matrix reuses a supplied context.
        let mp: Vec<BigInt> = [-2, 0, 1].iter().map(|&c| BigInt::from(c)).collect();
        let ctx = AlgebraicContext::new(&mp, rat::int(1), rat::int(2)).unwrap();
        let r2 = Scalar::generator(&ctx);
        let a = m(&[vec![0, 0, 1], vec![0, 0, 1], vec![1, 1, 0]]);
        let p = perron_data(&a, &[r2.clone()]).unwrap();
        assert_eq!(p.s, r2);
        assert!(p.right.iter().all(|x| x.sign() > 0));
    }
}
