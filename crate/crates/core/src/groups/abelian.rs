use super::{Group, GroupError};

/// `Z^rank` with integer-tuple elements, encoded as `x,y,z`.
#[derive(Debug, Clone)]
pub struct FreeAbelian {
    rank: usize,
}

impl FreeAbelian {
    pub fn new(rank: usize) -> Result<Self, GroupError> {
        if rank == 0 {
            return Err(GroupError::InvalidParameter("rank must be positive".into()));
        }
        Ok(FreeAbelian { rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

impl Group for FreeAbelian {
    type Element = Vec<i64>;

    fn name(&self) -> String {
        format!("Z^{}", self.rank)
    }

    fn identity(&self) -> Vec<i64> {
        vec![0; self.rank]
    }

    fn multiply(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn inverse(&self, a: &Vec<i64>) -> Vec<i64> {
        a.iter().map(|x| -x).collect()
    }

    fn encode(&self, a: &Vec<i64>) -> String {
        let parts: Vec<String> = a.iter().map(i64::to_string).collect();
        parts.join(",")
    }

    fn decode(&self, text: &str) -> Result<Vec<i64>, GroupError> {
        let bad = || GroupError::InvalidElement(text.to_string());
        let coords = text
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(|p| p.trim().parse::<i64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        if coords.len() != self.rank {
            return Err(bad());
        }
        Ok(coords)
    }

    fn standard_generators(&self) -> Vec<Vec<i64>> {
        let mut gens = Vec::with_capacity(2 * self.rank);
        for i in 0..self.rank {
            for sign in [1, -1] {
                let mut e = vec![0; self.rank];
                e[i] = sign;
                gens.push(e);
            }
        }
        gens
    }

    fn layout(&self, a: &Vec<i64>) -> Option<[f64; 2]> {
        Some(match a.as_slice() {
            [x] => [*x as f64, 0.0],
            [x, y] => [*x as f64, *y as f64],
            [x, y, z, ..] => [*x as f64 + 0.35 * *z as f64, *y as f64 + 0.35 * *z as f64],
            [] => return None,
        })
    }
}
