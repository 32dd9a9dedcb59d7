//! Brute-force checks behind the derived test values.

use num_bigint::BigInt;
use serde_json::{json, Value};

use pwmap::decomposition::exact_decomposition;
use pwmap::dimension::{ga_equal, ga_equal_search, Basis, GAElement, MarkovLimit, OrderRule};
use pwmap::linalg::IntMatrix;
use pwmap::map_model::PLMap;
use pwmap::markov::{cylinder_counts, scaling_measure, uniformize, MeasureSource};
use pwmap::number::Scalar;
use pwmap::pf_lab::markov_fixed_point;
use pwmap::transfer::TransferContext;
use pwmap::{Error, Result};

fn int_rows(v: &Value, field: &str) -> Result<Vec<Vec<BigInt>>> {
    let rows = v.as_array().ok_or_else(|| Error::invalid(field, "expected an array of rows"))?;
    let out: Vec<Vec<BigInt>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| int_vec(r, &format!("{field}[{i}]")))
        .collect::<Result<_>>()?;
    let q = out.len();
    if q == 0 || out.iter().any(|r| r.len() != q) {
        return Err(Error::invalid(field, "expected a nonempty square matrix"));
    }
    Ok(out)
}

pub fn int_vec(v: &Value, field: &str) -> Result<Vec<BigInt>> {
    let arr = v.as_array().ok_or_else(|| Error::invalid(field, "expected an array of integers"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| {
            x.as_i64().map(BigInt::from).ok_or_else(|| Error::invalid(format!("{field}[{i}]"), "expected an integer"))
        })
        .collect()
}

/// Decides `[x, xn] = [y, yn]` with the `k = q` test and by searching `k ≤ max_k`.
pub fn ga_equal_check(matrix: &Value, x: &Value, xn: usize, y: &Value, yn: usize, max_k: usize) -> Result<Value> {
    let a = IntMatrix::new(int_rows(matrix, "matrix")?);
    let q = a.nrows();
    let (xv, yv) = (int_vec(x, "x")?, int_vec(y, "y")?);
    if xv.len() != q {
        return Err(Error::invalid("x", format!("expected length {q}")));
    }
    if yv.len() != q {
        return Err(Error::invalid("y", format!("expected length {q}")));
    }
    let t = MarkovLimit { a, s: Scalar::one(), weights: vec![Scalar::zero(); q], order: OrderRule::Strict, basis: Basis::Abstract };
    let (gx, gy) = (GAElement::new(xv, xn), GAElement::new(yv, yn));
    let exact = ga_equal(&t, &gx, &gy);
    let search = ga_equal_search(&t, &gx, &gy, max_k);
    Ok(json!({"k_equals_q": exact, "search": search, "max_k": max_k, "agree": exact == search}))
}

/// Exact eigenfunctions from the Markov linear solve, with exact residuals.
pub fn pf_solve(map: &PLMap, bound: usize) -> Result<Value> {
    let m = scaling_measure(map, bound)?;
    let model = match m.source {
        MeasureSource::Lebesgue => map.clone(),
        MeasureSource::Perron => uniformize(map, &m.weights, &m.s)?,
    };
    let dec = exact_decomposition(&model, bound)?;
    let ctx = TransferContext::new(&model);
    let mut phis = Vec::new();
    for part in &dec.parts {
        let phi = markov_fixed_point(&model, &m.s, dec.n, part, bound)
            .ok_or_else(|| Error::unsupported("fixed-point solve needs a Markov partition"))?;
        phis.push(phi);
    }
    let mut residual_zero = true;
    for i in 0..dec.n {
        let r = ctx.pf_apply(&phis[i], &m.s)?.sub(&phis[(i + 1) % dec.n]);
        residual_zero &= r.is_zero();
    }
    Ok(json!({
        "N": dec.n,
        "phi": phis.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
        "cycle_residual_zero": residual_zero,
    }))
}

pub fn cylinders(map: &PLMap, n: usize) -> Value {
    json!({"n": n, "counts": cylinder_counts(map, n).iter().map(BigInt::to_string).collect::<Vec<_>>()})
}
