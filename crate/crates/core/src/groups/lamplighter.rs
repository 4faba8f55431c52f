use std::collections::BTreeSet;

use super::{Group, GroupError};

/// Lamplighter group `Z/2 ≀ Z`: a finite set of lit lamps and a cursor.
/// Encoded as `{l1,l2,...}@cursor`. Generators: `t` moves the cursor right,
/// `a` toggles the lamp under the cursor.
#[derive(Debug, Clone, Default)]
pub struct Lamplighter;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LampState {
    pub lamps: BTreeSet<i64>,
    pub cursor: i64,
}

impl Group for Lamplighter {
    type Element = LampState;

    fn name(&self) -> String {
        "lamplighter".into()
    }

    fn identity(&self) -> LampState {
        LampState {
            lamps: BTreeSet::new(),
            cursor: 0,
        }
    }

    fn multiply(&self, a: &LampState, b: &LampState) -> LampState {
        let mut lamps = a.lamps.clone();
        for &l in &b.lamps {
            let p = l + a.cursor;
            if !lamps.remove(&p) {
                lamps.insert(p);
            }
        }
        LampState {
            lamps,
            cursor: a.cursor + b.cursor,
        }
    }

    fn inverse(&self, a: &LampState) -> LampState {
        LampState {
            lamps: a.lamps.iter().map(|l| l - a.cursor).collect(),
            cursor: -a.cursor,
        }
    }

    fn encode(&self, a: &LampState) -> String {
        let lamps: Vec<String> = a.lamps.iter().map(i64::to_string).collect();
        format!("{{{}}}@{}", lamps.join(","), a.cursor)
    }

    fn decode(&self, text: &str) -> Result<LampState, GroupError> {
        let bad = || GroupError::InvalidElement(text.to_string());
        let (lamps, cursor) = text.trim().split_once('@').ok_or_else(bad)?;
        let inner = lamps
            .trim()
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(bad)?;
        let mut set = BTreeSet::new();
        for p in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let l: i64 = p.parse().map_err(|_| bad())?;
            if !set.insert(l) {
                return Err(bad());
            }
        }
        Ok(LampState {
            lamps: set,
            cursor: cursor.trim().parse().map_err(|_| bad())?,
        })
    }

    fn standard_generators(&self) -> Vec<LampState> {
        vec![
            LampState {
                lamps: BTreeSet::new(),
                cursor: 1,
            },
            LampState {
                lamps: BTreeSet::new(),
                cursor: -1,
            },
            LampState {
                lamps: BTreeSet::from([0]),
                cursor: 0,
            },
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toggle_then_move() {
        let g = Lamplighter;
        let a = g.decode("{0}@0").unwrap();
        let t = g.decode("{}@1").unwrap();
        let at = g.multiply(&a, &t);
        let ta = g.multiply(&t, &a);
        assert_eq!(g.encode(&at), "{0}@1");
        assert_eq!(g.encode(&ta), "{1}@1");
        assert_eq!(g.multiply(&a, &a), g.identity());
    }

    #[test]
    fn decode_rejects_duplicates_and_garbage() {
        let g = Lamplighter;
        assert!(g.decode("{1,1}@0").is_err());
        assert!(g.decode("1@0").is_err());
        assert_eq!(g.encode(&g.decode(" { 3, -1 } @ 2 ").unwrap()), "{-1,3}@2");
    }
}
