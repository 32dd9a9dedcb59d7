//! Number literals in JSON: `"p/q"` strings, bare integers, or
//! `{"minpoly": [...], "interval": ["lo", "hi"], "value": [...]}` objects.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use super::context::AlgebraicContext;
use super::poly::QPoly;
use super::rat;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Tracks the single algebraic generator admitted while reading an input.
#[derive(Clone, Debug, Default)]
pub struct Session {
    ctx: Option<AlgebraicContext>,
}

impl Session {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_context(ctx: AlgebraicContext) -> Self {
        Session { ctx: Some(ctx) }
    }

    pub fn context(&self) -> Option<&AlgebraicContext> {
        self.ctx.as_ref()
    }

    /// Admits `ctx`, returning the canonical handle for its root.
    pub fn admit(&mut self, ctx: AlgebraicContext) -> Result<AlgebraicContext> {
        match &self.ctx {
            Some(cur) if cur.same_root(&ctx) => Ok(cur.clone()),
            Some(cur) => Err(Error::invalid(
                "",
                format!("only one algebraic generator is supported per input; already using the {cur}, got the {ctx}"),
            )),
            None => {
                self.ctx = Some(ctx.clone());
                Ok(ctx)
            }
        }
    }
}

fn parse_int(v: &Value, field: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::invalid(field, "expected an integer")),
        Value::String(s) => s.trim().parse().map_err(|_| Error::invalid(field, format!("not an integer: {s:?}"))),
        _ => Err(Error::invalid(field, "expected an integer")),
    }
}

fn parse_rational(v: &Value, field: &str) -> Result<BigRational> {
    match v {
        Value::String(s) => rat::parse(s).map_err(|e| e.within(field)),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(rat::int(i))
            } else {
                rat::parse(&n.to_string()).map_err(|e| e.within(field))
            }
        }
        _ => Err(Error::invalid(field, "expected a rational literal such as \"3/2\"")),
    }
}

fn array<'a>(v: &'a Value, key: &str, field: &str) -> Result<&'a Vec<Value>> {
    v.get(key)
        .ok_or_else(|| Error::invalid(format!("{field}.{key}"), "missing"))?
        .as_array()
        .ok_or_else(|| Error::invalid(format!("{field}.{key}"), "expected an array"))
}

/// Parses one numeric literal; `field` locates it in error messages.
pub fn parse_scalar(v: &Value, session: &mut Session, field: &str) -> Result<Scalar> {
    match v {
        Value::Object(_) => {
            let mp = array(v, "minpoly", field)?;
            let minpoly = mp
                .iter()
                .enumerate()
                .map(|(i, c)| parse_int(c, &format!("{field}.minpoly[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            let iv = array(v, "interval", field)?;
            if iv.len() != 2 {
                return Err(Error::invalid(format!("{field}.interval"), "expected [lo, hi]"));
            }
            let lo = parse_rational(&iv[0], &format!("{field}.interval[0]"))?;
            let hi = parse_rational(&iv[1], &format!("{field}.interval[1]"))?;
            let value = match v.get("value") {
                None => QPoly::x(),
                Some(_) => QPoly::new(
                    array(v, "value", field)?
                        .iter()
                        .enumerate()
                        .map(|(i, c)| parse_rational(c, &format!("{field}.value[{i}]")))
                        .collect::<Result<Vec<_>>>()?,
                ),
            };
            let ctx = AlgebraicContext::new(&minpoly, lo, hi).map_err(|e| e.within(field))?;
            let ctx = session.admit(ctx).map_err(|e| e.within(field))?;
            Ok(Scalar::from_poly(&ctx, value))
        }
        _ => parse_rational(v, field).map(Scalar::Rational),
    }
}

fn int_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(i) => json!(i),
        None => json!(n.to_string()),
    }
}

/// Exact JSON form; algebraic values carry a 2^-64-wide decimal-free enclosure.
pub fn scalar_to_json(x: &Scalar) -> Value {
    match x {
        Scalar::Rational(r) => json!(rat::render(r)),
        Scalar::Algebraic(a) => {
            let ctx = a.context();
            let (glo, ghi) = ctx.given_interval();
            let d = ctx.degree();
            let value: Vec<Value> = (0..d).map(|k| json!(rat::render(&a.poly().coeff(k)))).collect();
            let width = rat::pow2_inv(64);
            let (lo, hi) = x.refine_interval(&width);
            json!({
                "minpoly": ctx.minpoly().iter().map(int_json).collect::<Vec<_>>(),
                "interval": [rat::render(glo), rat::render(ghi)],
                "value": value,
                "enclosure": {
                    "lo": rat::render(&lo),
                    "hi": rat::render(&hi),
                    "width": rat::render(&(&hi - &lo)),
                    "approx": format!("{:.12}", x.to_f64()),
                },
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut s = Session::new();
        let v = json!({"minpoly": [-2, 0, 1], "interval": ["1", "2"], "value": ["0", "1"]});
        let r2 = parse_scalar(&v, &mut s, "s").unwrap();
        assert_eq!(&r2 * &r2, Scalar::int(2));
        let back = scalar_to_json(&r2);
        let again = parse_scalar(&back, &mut s, "s").unwrap();
        assert_eq!(again, r2);
        assert_eq!(parse_scalar(&json!("6/4"), &mut s, "x").unwrap(), Scalar::frac(3, 2));
        assert_eq!(parse_scalar(&json!(3), &mut s, "x").unwrap(), Scalar::int(3));
    }

    #[test]
    fn rejects_second_generator() {
        let mut s = Session::new();
        parse_scalar(&json!({"minpoly": [-2, 0, 1], "interval": ["1", "2"]}), &mut s, "a").unwrap();
        let err = parse_scalar(&json!({"minpoly": [-3, 0, 1], "interval": ["1", "2"]}), &mut s, "b");
        assert!(matches!(err, Err(Error::Invalid { field, .. }) if field == "b"));
    }

    #[test]
    fn error_names_field() {
        let mut s = Session::new();
        let err = parse_scalar(&json!({"minpoly": [-2, 0, 1], "interval": ["1", "x"]}), &mut s, "map.s").unwrap_err();
        assert!(matches!(err, Error::Invalid { ref field, .. } if field == "map.s.interval[1]"), "{err:?}");
    }
}
