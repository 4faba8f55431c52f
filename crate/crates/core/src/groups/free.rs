use super::{Group, GroupError};

/// Free group on `rank` letters. Elements are freely reduced words; letter
/// `k` is written `a`, `b`, ... and its inverse in upper case. The identity
/// is `1`.
#[derive(Debug, Clone)]
pub struct FreeGroup {
    rank: usize,
}

impl FreeGroup {
    pub fn new(rank: usize) -> Result<Self, GroupError> {
        if rank == 0 || rank > 26 {
            return Err(GroupError::InvalidParameter(
                "free group rank must be in 1..=26".into(),
            ));
        }
        Ok(FreeGroup { rank })
    }
}

/// Letters are `±(k + 1)` for generator `k`.
fn push_reduced(word: &mut Vec<i8>, letter: i8) {
    if word.last() == Some(&-letter) {
        word.pop();
    } else {
        word.push(letter);
    }
}

impl Group for FreeGroup {
    type Element = Vec<i8>;

    fn name(&self) -> String {
        format!("F{}", self.rank)
    }

    fn identity(&self) -> Vec<i8> {
        Vec::new()
    }

    fn multiply(&self, a: &Vec<i8>, b: &Vec<i8>) -> Vec<i8> {
        let mut out = a.clone();
        for &l in b {
            push_reduced(&mut out, l);
        }
        out
    }

    fn inverse(&self, a: &Vec<i8>) -> Vec<i8> {
        a.iter().rev().map(|l| -l).collect()
    }

    fn encode(&self, a: &Vec<i8>) -> String {
        if a.is_empty() {
            return "1".into();
        }
        a.iter()
            .map(|&l| {
                let c = (b'a' + (l.unsigned_abs() - 1)) as char;
                if l > 0 {
                    c
                } else {
                    c.to_ascii_uppercase()
                }
            })
            .collect()
    }

    fn decode(&self, text: &str) -> Result<Vec<i8>, GroupError> {
        let text = text.trim();
        let mut out = Vec::new();
        if text == "1" || text.is_empty() {
            return Ok(out);
        }
        for c in text.chars() {
            let lower = c.to_ascii_lowercase();
            if !lower.is_ascii_lowercase() || (lower as usize - 'a' as usize) >= self.rank {
                return Err(GroupError::InvalidElement(text.to_string()));
            }
            let k = (lower as u8 - b'a' + 1) as i8;
            push_reduced(&mut out, if c.is_ascii_lowercase() { k } else { -k });
        }
        Ok(out)
    }

    fn standard_generators(&self) -> Vec<Vec<i8>> {
        (1..=self.rank as i8)
            .flat_map(|k| [vec![k], vec![-k]])
            .collect()
    }
}
