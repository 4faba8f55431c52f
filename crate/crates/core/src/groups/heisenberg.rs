use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{Group, GroupError};

/// Integer Heisenberg group: triples `(x, y, z)` with
/// `(x,y,z)·(x',y',z') = (x+x', y+y', z+z'+x·y')`.
#[derive(Debug, Clone, Default)]
pub struct Heisenberg;

pub type Triple = (BigInt, BigInt, BigInt);

fn triple(x: i64, y: i64, z: i64) -> Triple {
    (x.into(), y.into(), z.into())
}

impl Group for Heisenberg {
    type Element = Triple;

    fn name(&self) -> String {
        "heisenberg".into()
    }

    fn identity(&self) -> Triple {
        triple(0, 0, 0)
    }

    fn multiply(&self, a: &Triple, b: &Triple) -> Triple {
        (&a.0 + &b.0, &a.1 + &b.1, &a.2 + &b.2 + &a.0 * &b.1)
    }

    fn inverse(&self, a: &Triple) -> Triple {
        (-&a.0, -&a.1, -&a.2 + &a.0 * &a.1)
    }

    fn encode(&self, a: &Triple) -> String {
        format!("{},{},{}", a.0, a.1, a.2)
    }

    fn decode(&self, text: &str) -> Result<Triple, GroupError> {
        let bad = || GroupError::InvalidElement(text.to_string());
        let parts: Vec<BigInt> = text
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(|p| p.trim().parse::<BigInt>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        match <[BigInt; 3]>::try_from(parts) {
            Ok([x, y, z]) => Ok((x, y, z)),
            Err(_) => Err(bad()),
        }
    }

    fn standard_generators(&self) -> Vec<Triple> {
        vec![
            triple(1, 0, 0),
            triple(-1, 0, 0),
            triple(0, 1, 0),
            triple(0, -1, 0),
        ]
    }

    fn layout(&self, a: &Triple) -> Option<[f64; 2]> {
        let z = if a.2.is_zero() { 0.0 } else { a.2.to_f64()? };
        Some([a.0.to_f64()? + 0.1 * z, a.1.to_f64()? + 0.1 * z])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutator_is_central_generator() {
        let h = Heisenberg;
        let [a, ai, b, bi] = <[Triple; 4]>::try_from(h.standard_generators()).unwrap();
        let comm = h.multiply(&h.multiply(&a, &b), &h.multiply(&ai, &bi));
        assert_eq!(h.encode(&comm), "0,0,1");
    }

    #[test]
    fn decode_round_trip() {
        let h = Heisenberg;
        let t = h.decode("(3, -4, 123456789012345678901234567890)").unwrap();
        assert_eq!(h.encode(&t), "3,-4,123456789012345678901234567890");
        assert!(h.decode("1,2").is_err());
    }
}
