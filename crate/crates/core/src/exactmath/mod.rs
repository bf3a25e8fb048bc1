//! Exact rational arithmetic, labelled vectors, dense linear algebra and an
//! exact simplex. Everything else in the crate is built on top of this.

mod linalg;
mod lp;
mod space;
mod system;
mod vertices;

pub use linalg::{affine_rank, nullspace, rank, rref, same_affine_subspace, solve, Solution};
pub use lp::{lp_maximize, lp_minimize, LpOutcome, LpStatus};
pub use space::{PointSet, RVector, Space, Subset};
pub use system::{LinearSystem, Row};
pub use vertices::{enumerate_vertices, enumerate_vertices_by_subsystems, is_vertex, DEFAULT_VERTEX_GUARD};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational number; always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den` in lowest terms. Panics on a zero denominator.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let r: Rational = s.parse().ok()?;
    Some(r)
}

/// Dot product of two equally long slices.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::default();
    for (x, y) in a.iter().zip(b) {
        if !num_traits::Zero::is_zero(x) && !num_traits::Zero::is_zero(y) {
            acc += x * y;
        }
    }
    acc
}

/// Serialize rationals as exact `"p/q"` strings.
pub mod serde_rational {
    use super::Rational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}")))
    }

    pub mod vec {
        use super::super::Rational;
        use serde::{de::Error as _, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&r.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let raw = Vec::<String>::deserialize(d)?;
            raw.iter()
                .map(|s| super::super::parse_rational(s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}"))))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_normalized() {
        let r = frac(6, -4);
        assert_eq!(r, frac(-3, 2));
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(parse_rational("  10/4 ").unwrap(), frac(5, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1.5").is_none());
        assert!(parse_rational("1/0").is_none());
    }

    #[test]
    fn dot_product() {
        let a = vec![int(1), frac(1, 2), int(0)];
        let b = vec![int(3), int(4), int(100)];
        assert_eq!(dot(&a, &b), int(5));
    }
}
