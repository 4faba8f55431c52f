//! Grigorchuk's first group acting on the rooted binary tree.
//!
//! Elements are carried as reduced words over `{a, b, c, d}` together with a
//! canonical key: the element's minimal portrait. The portrait of `g` is its
//! letter when `g` lies in the nucleus `{1, a, b, c, d}`, and otherwise
//! `p(g0,g1)` or `s(g0,g1)` (no swap / swap at the root) built from the
//! portraits of the two first-level sections. The action is faithful and
//! sections of reduced words of length at least two are strictly shorter, so
//! the recursion terminates and equal elements get equal keys.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::{Group, GroupError};

/// A reduced word plus its canonical key. Equality and hashing use the key.
#[derive(Debug, Clone)]
pub struct GrigElement {
    word: Arc<[u8]>,
    key: Arc<str>,
}

impl GrigElement {
    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn key(&self) -> &str {
        &self.key
    }
}

impl PartialEq for GrigElement {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for GrigElement {}

impl std::hash::Hash for GrigElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key.hash(state)
    }
}

const MEMO_LIMIT: usize = 4_000_000;

#[derive(Default)]
struct Memo {
    portraits: HashMap<Vec<u8>, Arc<str>>,
    words: HashMap<Arc<str>, Arc<[u8]>>,
}

#[derive(Default)]
pub struct Grigorchuk {
    memo: Mutex<Memo>,
}

impl std::fmt::Debug for Grigorchuk {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("Grigorchuk")
    }
}

fn third(x: u8, y: u8) -> u8 {
    match (x, y) {
        (b'b', b'c') | (b'c', b'b') => b'd',
        (b'b', b'd') | (b'd', b'b') => b'c',
        (b'c', b'd') | (b'd', b'c') => b'b',
        _ => unreachable!("third() on {} {}", x as char, y as char),
    }
}

fn push_letter(out: &mut Vec<u8>, mut x: u8) {
    loop {
        match out.last() {
            Some(&y) if y == x => {
                out.pop();
                return;
            }
            Some(&y) if y != b'a' && x != b'a' => {
                out.pop();
                x = third(x, y);
            }
            _ => {
                out.push(x);
                return;
            }
        }
    }
}

/// Applies `aa = bb = cc = dd = 1` and `bc = cb = d`, `bd = db = c`,
/// `cd = dc = b` until no rule applies.
pub fn reduce(word: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(word.len());
    for &x in word {
        push_letter(&mut out, x);
    }
    out
}

fn section(letter: u8, pos: usize) -> Option<u8> {
    match (letter, pos) {
        (b'b', 0) | (b'c', 0) => Some(b'a'),
        (b'b', _) => Some(b'c'),
        (b'c', _) => Some(b'd'),
        (b'd', 0) => None,
        (b'd', _) => Some(b'b'),
        _ => unreachable!(),
    }
}

/// Root permutation and the two reduced first-level sections of a word.
pub fn sections(word: &[u8]) -> (bool, Vec<u8>, Vec<u8>) {
    let mut parts = [Vec::new(), Vec::new()];
    let mut swaps = 0usize;
    for (start, part) in parts.iter_mut().enumerate() {
        let mut pos = start;
        for &x in word {
            if x == b'a' {
                pos ^= 1;
                if start == 0 {
                    swaps += 1;
                }
            } else if let Some(s) = section(x, pos) {
                push_letter(part, s);
            }
        }
    }
    let [s0, s1] = parts;
    (swaps % 2 == 1, s0, s1)
}

/// Word problem by direct section recursion; independent of the portrait
/// machinery.
pub fn is_identity(word: &[u8]) -> bool {
    let w = reduce(word);
    if w.is_empty() {
        return true;
    }
    let (swap, s0, s1) = sections(&w);
    !swap && is_identity(&s0) && is_identity(&s1)
}

pub fn words_equal(u: &[u8], v: &[u8]) -> bool {
    let mut w = u.to_vec();
    w.extend(v.iter().rev());
    is_identity(&w)
}

fn portrait(memo: &mut HashMap<Vec<u8>, Arc<str>>, word: &[u8]) -> Arc<str> {
    match word {
        [] => return Arc::from("1"),
        [x] => return Arc::from((*x as char).to_string()),
        _ => {}
    }
    if let Some(p) = memo.get(word) {
        return p.clone();
    }
    let (swap, s0, s1) = sections(word);
    let p0 = portrait(memo, &s0);
    let p1 = portrait(memo, &s1);
    let key: Arc<str> = match (swap, &*p0, &*p1) {
        (false, "1", "1") => "1".into(),
        (true, "1", "1") => "a".into(),
        (false, "a", "c") => "b".into(),
        (false, "a", "d") => "c".into(),
        (false, "1", "b") => "d".into(),
        (false, _, _) => format!("p({p0},{p1})").into(),
        (true, _, _) => format!("s({p0},{p1})").into(),
    };
    if memo.len() >= MEMO_LIMIT {
        memo.clear();
    }
    memo.insert(word.to_vec(), key.clone());
    key
}

impl Grigorchuk {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds the element represented by an arbitrary word over `{a,b,c,d}`.
    pub fn element(&self, word: &[u8]) -> GrigElement {
        let w = reduce(word);
        let mut memo = self.memo.lock().expect("memo lock");
        let key = portrait(&mut memo.portraits, &w);
        let word: Arc<[u8]> = match memo.words.get(&key) {
            Some(existing) => existing.clone(),
            None => {
                let word: Arc<[u8]> = w.into();
                if memo.words.len() >= MEMO_LIMIT {
                    memo.words.clear();
                }
                memo.words.insert(key.clone(), word.clone());
                word
            }
        };
        GrigElement { word, key }
    }
}

impl Group for Grigorchuk {
    type Element = GrigElement;

    fn name(&self) -> String {
        "grigorchuk".into()
    }

    fn identity(&self) -> GrigElement {
        self.element(b"")
    }

    fn multiply(&self, a: &GrigElement, b: &GrigElement) -> GrigElement {
        let mut w = a.word.to_vec();
        w.extend_from_slice(&b.word);
        self.element(&w)
    }

    fn inverse(&self, a: &GrigElement) -> GrigElement {
        let w: Vec<u8> = a.word.iter().rev().copied().collect();
        self.element(&w)
    }

    fn encode(&self, a: &GrigElement) -> String {
        a.key.to_string()
    }

    /// Accepts a word over `{a,b,c,d}` (`1` for the identity) or a portrait
    /// key already produced by this group instance.
    fn decode(&self, text: &str) -> Result<GrigElement, GroupError> {
        let t = text.trim();
        if t == "1" || t.is_empty() {
            return Ok(self.identity());
        }
        if t.bytes().all(|c| matches!(c, b'a'..=b'd')) {
            return Ok(self.element(t.as_bytes()));
        }
        let word = {
            let memo = self.memo.lock().expect("memo lock");
            memo.words.get(t).cloned()
        };
        match word {
            Some(w) => Ok(GrigElement {
                key: Arc::from(t),
                word: w,
            }),
            None => Err(GroupError::InvalidElement(text.to_string())),
        }
    }

    fn standard_generators(&self) -> Vec<GrigElement> {
        [b"a", b"b", b"c", b"d"]
            .iter()
            .map(|w| self.element(*w))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pow(w: &str, n: usize) -> Vec<u8> {
        w.repeat(n).into_bytes()
    }

    #[test]
    fn generators_are_involutions() {
        let g = Grigorchuk::new();
        for x in ["a", "b", "c", "d"] {
            let s = g.decode(x).unwrap();
            assert_eq!(g.multiply(&s, &s), g.identity(), "{x}^2");
            assert!(is_identity(&pow(x, 2)));
        }
    }

    #[test]
    fn klein_relations() {
        let g = Grigorchuk::new();
        let e = |w: &str| g.decode(w).unwrap();
        assert_eq!(g.multiply(&e("b"), &e("c")), e("d"));
        assert_eq!(g.multiply(&e("c"), &e("d")), e("b"));
        assert_eq!(g.multiply(&e("d"), &e("b")), e("c"));
    }

    #[test]
    fn known_orders() {
        // (ad) has order 4, (ac) order 8, (ab) order 16.
        for (w, order) in [("ad", 4), ("ac", 8), ("ab", 16)] {
            for k in 1..order {
                assert!(!is_identity(&pow(w, k)), "({w})^{k} should be nontrivial");
            }
            assert!(
                is_identity(&pow(w, order)),
                "({w})^{order} should be trivial"
            );
            let g = Grigorchuk::new();
            assert_eq!(g.element(&pow(w, order)).key(), "1");
            assert_ne!(g.element(&pow(w, order / 2)).key(), "1");
        }
    }

    #[test]
    fn portrait_equality_matches_word_problem() {
        let g = Grigorchuk::new();
        let words: Vec<Vec<u8>> = (0..400u32)
            .map(|i| {
                let mut x = i.wrapping_mul(2654435761);
                (0..(i % 9))
                    .map(|_| {
                        x = x.wrapping_mul(1103515245).wrapping_add(12345);
                        b"abcd"[(x >> 16) as usize % 4]
                    })
                    .collect()
            })
            .collect();
        for u in words.iter().take(60) {
            for v in &words {
                let same_key = g.element(u) == g.element(v);
                assert_eq!(same_key, words_equal(u, v), "{:?} vs {:?}", u, v);
            }
        }
    }

    #[test]
    fn decode_portrait_after_encode() {
        let g = Grigorchuk::new();
        let x = g.decode("abacab").unwrap();
        let key = g.encode(&x);
        assert_eq!(g.decode(&key).unwrap(), x);
        assert!(g.decode("p(zz,1)").is_err());
    }

    #[test]
    fn reduce_rules() {
        assert_eq!(reduce(b"abcda"), Vec::<u8>::new());
        assert_eq!(reduce(b"abca"), b"ada".to_vec());
        assert_eq!(reduce(b"aa"), Vec::<u8>::new());
        assert_eq!(reduce(b"abba"), Vec::<u8>::new());
        assert_eq!(reduce(b"bcb"), b"c".to_vec());
    }
}
