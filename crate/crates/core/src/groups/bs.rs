use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{Group, GroupError};

/// Exact dyadic rational `num / 2^exp`, kept in lowest terms (`num` odd
/// whenever `exp > 0`, and `exp == 0` for zero).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u64,
}

impl Dyadic {
    pub fn new(num: BigInt, exp: u64) -> Self {
        let mut d = Dyadic { num, exp };
        d.normalize();
        d
    }

    pub fn integer(n: i64) -> Self {
        Dyadic::new(n.into(), 0)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        while self.exp > 0 && self.num.is_even() {
            self.num >>= 1;
            self.exp -= 1;
        }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let e = self.exp.max(other.exp);
        let a = &self.num << (e - self.exp);
        let b = &other.num << (e - other.exp);
        Dyadic::new(a + b, e)
    }

    /// `self · 2^k`.
    pub fn shift(&self, k: i64) -> Dyadic {
        if k >= 0 {
            let k = k as u64;
            if k <= self.exp {
                Dyadic::new(self.num.clone(), self.exp - k)
            } else {
                Dyadic::new(&self.num << (k - self.exp), 0)
            }
        } else {
            Dyadic::new(self.num.clone(), self.exp + k.unsigned_abs())
        }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            num: -&self.num,
            exp: self.exp,
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        Some(self.num.to_f64()? / 2f64.powi(i32::try_from(self.exp).ok()?))
    }
}

impl std::fmt::Display for Dyadic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

impl std::str::FromStr for Dyadic {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        let s = s.trim();
        match s.split_once('/') {
            None => Ok(Dyadic::new(s.parse().map_err(|_| ())?, 0)),
            Some((n, d)) => {
                let num: BigInt = n.trim().parse().map_err(|_| ())?;
                let d = d.trim();
                let exp = if let Some(e) = d.strip_prefix("2^") {
                    e.parse::<u64>().map_err(|_| ())?
                } else {
                    let den: BigInt = d.parse().map_err(|_| ())?;
                    if !den.is_positive() {
                        return Err(());
                    }
                    let bits = den.bits() - 1;
                    if den != BigInt::from(1) << bits {
                        return Err(());
                    }
                    bits
                };
                Ok(Dyadic::new(num, exp))
            }
        }
    }
}

/// Baumslag–Solitar group `BS(1,2) = <a, t | t a t⁻¹ = a²>` as affine pairs
/// `(q, k)` with `(q,k)·(q',k') = (q + 2^k q', k + k')`. Encoded `q@k`.
#[derive(Debug, Clone, Default)]
pub struct BaumslagSolitar12;

pub type Affine = (Dyadic, i64);

impl Group for BaumslagSolitar12 {
    type Element = Affine;

    fn name(&self) -> String {
        "BS(1,2)".into()
    }

    fn identity(&self) -> Affine {
        (Dyadic::integer(0), 0)
    }

    fn multiply(&self, a: &Affine, b: &Affine) -> Affine {
        (a.0.add(&b.0.shift(a.1)), a.1 + b.1)
    }

    fn inverse(&self, a: &Affine) -> Affine {
        (a.0.shift(-a.1).neg(), -a.1)
    }

    fn encode(&self, a: &Affine) -> String {
        format!("{}@{}", a.0, a.1)
    }

    fn decode(&self, text: &str) -> Result<Affine, GroupError> {
        let bad = || GroupError::InvalidElement(text.to_string());
        let (q, k) = text.trim().split_once('@').ok_or_else(bad)?;
        let q: Dyadic = q.parse().map_err(|_| bad())?;
        let k: i64 = k.trim().parse().map_err(|_| bad())?;
        Ok((q, k))
    }

    fn standard_generators(&self) -> Vec<Affine> {
        vec![
            (Dyadic::integer(1), 0),
            (Dyadic::integer(-1), 0),
            (Dyadic::integer(0), 1),
            (Dyadic::integer(0), -1),
        ]
    }

    fn layout(&self, a: &Affine) -> Option<[f64; 2]> {
        Some([a.0.to_f64()?, a.1 as f64])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defining_relation_holds() {
        let g = BaumslagSolitar12;
        let a = g.decode("1@0").unwrap();
        let t = g.decode("0@1").unwrap();
        let lhs = g.multiply(&g.multiply(&t, &a), &g.inverse(&t));
        assert_eq!(lhs, g.multiply(&a, &a));
    }

    #[test]
    fn dyadics_normalize() {
        let d: Dyadic = "6/8".parse().unwrap();
        assert_eq!(d.to_string(), "3/2^2");
        let d: Dyadic = "4/2^2".parse().unwrap();
        assert_eq!(d.to_string(), "1");
        assert!("1/3".parse::<Dyadic>().is_err());
        assert_eq!(Dyadic::integer(3).shift(-1).to_string(), "3/2^1");
        assert_eq!(Dyadic::integer(3).shift(-1).shift(1).to_string(), "3");
    }

    #[test]
    fn encode_fractional_elements() {
        let g = BaumslagSolitar12;
        let ti = g.decode("0@-1").unwrap();
        let a = g.decode("1@0").unwrap();
        assert_eq!(g.encode(&g.multiply(&ti, &a)), "1/2^1@-1");
    }
}
