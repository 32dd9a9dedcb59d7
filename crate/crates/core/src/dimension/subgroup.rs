//! Subgroups `Σ Z[s, s⁻¹]·wᵢ` of the reals, with exact membership where the
//! arithmetic of `s` allows it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::linalg::{hermite_rows, solve};
use crate::number::{rat, scalar_to_json, AlgebraicContext, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Backend {
    /// `s = p/q` rational: the group is `g·Z[1/N]` with `N = |pq|`.
    RationalDenominator { n: BigInt, g: BigRational },
    /// `s` an algebraic integer with minimal polynomial constant term `c`:
    /// the group is the `Z[1/c]`-span of `basis/denom` in coordinates
    /// `1, s, …, s^{d-1}`. `c = ±1` is the unit case.
    Lattice { c: BigInt, basis: Vec<Vec<BigInt>>, denom: BigInt, ctx: AlgebraicContext },
    /// `s` treated as transcendental: elements are integer Laurent
    /// combinations of the generators, so membership is syntactic.
    GenericSymbolic,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupOfR {
    pub s: Scalar,
    pub generators: Vec<Scalar>,
    pub backend: Backend,
}

fn rational_gcd(xs: &[BigRational]) -> BigRational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for x in xs.iter().filter(|x| !x.is_zero()) {
        num = num.gcd(x.numer());
        den = den.lcm(x.denom());
    }
    BigRational::new(num, den)
}

/// Removes from `x` every prime factor shared with `n`.
fn strip_primes(mut x: BigInt, n: &BigInt) -> BigInt {
    loop {
        let g = x.gcd(n);
        if g.is_one() || g.is_zero() {
            return x;
        }
        x /= g;
    }
}

/// True when every prime of the denominator of `x` divides `n`.
fn is_n_local_integer(x: &BigRational, n: &BigInt) -> bool {
    strip_primes(x.denom().clone(), n).is_one()
}

impl SubgroupOfR {
    pub fn backend_name(&self) -> &'static str {
        match &self.backend {
            Backend::RationalDenominator { .. } => "rational_denominator",
            Backend::Lattice { c, .. } if c.abs().is_one() => "unit_lattice",
            Backend::Lattice { .. } => "localized_lattice",
            Backend::GenericSymbolic => "generic_symbolic",
            Backend::Undecided => "undecided",
        }
    }

    /// Exact membership; `None` when the backend cannot decide.
    pub fn contains(&self, x: &Scalar) -> Option<bool> {
        match &self.backend {
            Backend::RationalDenominator { n, g } => {
                let Some(x) = x.as_rational() else { return Some(false) };
                if x.is_zero() {
                    return Some(true);
                }
                if g.is_zero() {
                    return Some(false);
                }
                Some(is_n_local_integer(&(x / g), n))
            }
            Backend::Lattice { c, basis, denom, ctx } => {
                if x.context().is_some_and(|k| !k.same_root(ctx)) {
                    return None;
                }
                let d = ctx.degree();
                let y = coords(x, d);
                let y: Vec<Scalar> = y.iter().map(|v| Scalar::Rational(v * BigRational::from_integer(denom.clone()))).collect();
                if y.iter().all(Scalar::is_zero) {
                    return Some(true);
                }
                if basis.is_empty() {
                    return Some(false);
                }
                // Solve λ·basis = y (columns of the transposed system).
                let m: Vec<Vec<Scalar>> =
                    (0..d).map(|j| basis.iter().map(|row| Scalar::from_bigint(row[j].clone())).collect()).collect();
                let lambda = solve(&m, &y)?;
                let ok = lambda.iter().all(|l| l.as_rational().is_some_and(|r| is_n_local_integer(r, c)));
                Some(ok)
            }
            Backend::GenericSymbolic | Backend::Undecided => None,
        }
    }

    /// Membership of `Σᵢ pᵢ(s)·wᵢ` for Laurent polynomials `pᵢ`, given as
    /// rational coefficient lists; decided syntactically under the generic backend.
    pub fn contains_symbolic(&self, polys: &[Vec<BigRational>]) -> Option<bool> {
        match self.backend {
            Backend::GenericSymbolic => Some(polys.iter().flatten().all(|c| c.is_integer())),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match &self.backend {
            Backend::RationalDenominator { n, g } => {
                let ring = if n.is_one() { "Z".to_string() } else { format!("Z[1/{n}]") };
                if g.is_one() {
                    ring
                } else {
                    format!("({}){}", rat::render(g), ring)
                }
            }
            Backend::Lattice { c, basis, denom, ctx } => {
                let ring = if c.abs().is_one() { "Z".to_string() } else { format!("Z[1/{}]", c.abs()) };
                if basis.is_empty() {
                    return "0".into();
                }
                basis
                    .iter()
                    .map(|row| {
                        let p = crate::number::QPoly::new(
                            row.iter().map(|x| BigRational::new(x.clone(), denom.clone())).collect(),
                        );
                        format!("{ring}·({})", render_poly_in_s(&Scalar::from_poly(ctx, p)))
                    })
                    .collect::<Vec<_>>()
                    .join(" + ")
            }
            Backend::GenericSymbolic => {
                let g: Vec<String> = self.generators.iter().map(Scalar::pretty).collect();
                format!("Σ Z[s,s⁻¹]·{{{}}} (s generic)", g.join(", "))
            }
            Backend::Undecided => "undecided".into(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "s": scalar_to_json(&self.s),
            "generators": self.generators.iter().map(scalar_to_json).collect::<Vec<_>>(),
            "backend": self.backend_name(),
            "group": self.describe(),
        })
    }
}

fn render_poly_in_s(x: &Scalar) -> String {
    match x {
        Scalar::Rational(r) => rat::render(r),
        Scalar::Algebraic(_) => x.as_poly().to_string().replace('t', "s"),
    }
}

/// Coordinates of `x` in `1, s, …, s^{d-1}`.
fn coords(x: &Scalar, d: usize) -> Vec<BigRational> {
    let p = x.as_poly();
    (0..d).map(|k| p.coeff(k)).collect()
}

/// `Σ Z[s,s⁻¹]·wᵢ` with the backend picked by the arithmetic class of `s`.
pub fn state_range(s: &Scalar, generators: &[Scalar], generic: bool) -> SubgroupOfR {
    let generators: Vec<Scalar> = generators.to_vec();
    let backend = if generic {
        Backend::GenericSymbolic
    } else if let Some(r) = s.as_rational() {
        match generators.iter().map(|g| g.as_rational().cloned()).collect::<Option<Vec<_>>>() {
            Some(ws) => {
                let n = (r.numer() * r.denom()).abs();
                let g = rational_gcd(&ws);
                let g = if g.is_zero() {
                    g
                } else {
                    BigRational::new(strip_primes(g.numer().clone(), &n), strip_primes(g.denom().clone(), &n))
                };
                Backend::RationalDenominator { n, g }
            }
            None => Backend::Undecided,
        }
    } else {
        let ctx = s.context().expect("irrational scalar has a context").clone();
        let same = generators.iter().all(|g| g.context().is_none_or(|k| k.same_root(&ctx)));
        if ctx.is_algebraic_integer() && same && *s == Scalar::generator(&ctx) {
            lattice_backend(&ctx, &generators)
        } else {
            Backend::Undecided
        }
    };
    SubgroupOfR { s: s.clone(), generators, backend }
}

fn lattice_backend(ctx: &AlgebraicContext, generators: &[Scalar]) -> Backend {
    let d = ctx.degree();
    let c = ctx.minpoly()[0].clone();
    let s = Scalar::generator(ctx);
    let mut rows_q: Vec<Vec<BigRational>> = Vec::new();
    for w in generators {
        let mut x = w.clone();
        for _ in 0..d {
            rows_q.push(coords(&x, d));
            x = &x * &s;
        }
    }
    let denom = rows_q.iter().flatten().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let rows: Vec<Vec<BigInt>> = rows_q
        .iter()
        .map(|r| r.iter().map(|x| (x * BigRational::from_integer(denom.clone())).to_integer()).collect())
        .collect();
    let basis = hermite_rows(rows);
    Backend::Lattice { c, basis, denom, ctx: ctx.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_third_z_half() {
        let g = state_range(&Scalar::int(2), &vec![Scalar::frac(1, 3); 3], false);
        assert_eq!(g.describe(), "(1/3)Z[1/2]");
        assert_eq!(g.contains(&Scalar::frac(1, 6)), Some(true));
        assert_eq!(g.contains(&Scalar::frac(1, 5)), Some(false));
        assert_eq!(g.contains(&Scalar::frac(7, 3)), Some(true));
    }

    #[test]
    fn dyadic() {
        let g = state_range(&Scalar::int(2), &[Scalar::frac(1, 2), Scalar::frac(1, 2)], false);
        assert_eq!(g.describe(), "Z[1/2]");
        assert_eq!(g.contains(&Scalar::frac(3, 8)), Some(true));
        assert_eq!(g.contains(&Scalar::frac(1, 3)), Some(false));
    }

    #[test]
    fn three_halves_gives_sixths() {
        let g = state_range(&Scalar::frac(3, 2), &[Scalar::one()], false);
        assert_eq!(g.describe(), "Z[1/6]");
        assert_eq!(g.contains(&Scalar::frac(5, 36)), Some(true));
        assert_eq!(g.contains(&Scalar::frac(1, 5)), Some(false));
    }

    #[test]
    fn golden_unit_lattice() {
        let m: Vec<BigInt> = [-1, -1, 1].iter().map(|&c| BigInt::from(c)).collect();
        let ctx = AlgebraicContext::new(&m, rat::int(1), rat::int(2)).unwrap();
        let phi = Scalar::generator(&ctx);
        let g = state_range(&phi, &[&phi - Scalar::one(), Scalar::int(2) - &phi], false);
        assert_eq!(g.backend_name(), "unit_lattice");
        assert_eq!(g.contains(&(Scalar::int(3) * &phi - Scalar::int(7))), Some(true));
        assert_eq!(g.contains(&phi.pow(-5)), Some(true));
        assert_eq!(g.contains(&Scalar::frac(1, 2)), Some(false));
        assert_eq!(g.contains(&(&phi / Scalar::int(2))), Some(false));
    }

    #[test]
    fn sqrt_two_localizes_at_two() {
        let m: Vec<BigInt> = [-2, 0, 1].iter().map(|&c| BigInt::from(c)).collect();
        let ctx = AlgebraicContext::new(&m, rat::int(1), rat::int(2)).unwrap();
        let r = Scalar::generator(&ctx);
        let g = state_range(&r, &[Scalar::one()], false);
        assert_eq!(g.backend_name(), "localized_lattice");
        assert_eq!(g.contains(&Scalar::frac(1, 4)), Some(true));
        assert_eq!(g.contains(&(&r / Scalar::int(8))), Some(true));
        assert_eq!(g.contains(&Scalar::frac(1, 3)), Some(false));
    }

    #[test]
    fn generic_is_syntactic() {
        let g = state_range(&Scalar::frac(5, 2), &[Scalar::one()], true);
        assert_eq!(g.contains(&Scalar::one()), None);
        assert_eq!(g.contains_symbolic(&[vec![rat::int(2), rat::int(-1)]]), Some(true));
        assert_eq!(g.contains_symbolic(&[vec![rat::frac(1, 2)]]), Some(false));
    }
}
