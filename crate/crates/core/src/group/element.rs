use std::fmt;

use serde::{Deserialize, Serialize};

/// A group element in canonical form.
///
/// Free-group words store letters as `±(i + 1)` for the generator `a_i` and
/// its inverse; they are always freely reduced. Residue vectors always lie in
/// `[0, modulus)` coordinatewise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Element {
    Int(i64),
    Vector(Vec<i64>),
    Word(Vec<i32>),
    Index(usize),
    Residues(Vec<u32>),
}

impl Element {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            Element::Int(n) => Some(*n),
            _ => None,
        }
    }
}

pub(crate) fn letter_name(letter: i32) -> String {
    let i = (letter.unsigned_abs() - 1) as usize;
    let base = if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("x{i}")
    };
    if letter < 0 {
        format!("{base}^-1")
    } else {
        base
    }
}

/// Freely reduce a word in place.
pub(crate) fn reduce_word(word: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Parse a free-group word such as `ab^-1a` or `x27^-1b`. `e` is the empty word.
pub(crate) fn parse_word(text: &str) -> Option<Vec<i32>> {
    let text = text.trim();
    if text == "e" || text.is_empty() {
        return Some(Vec::new());
    }
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut word = Vec::new();
    while i < chars.len() {
        let idx = if chars[i] == 'x' {
            i += 1;
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            chars[start..i].iter().collect::<String>().parse::<i32>().ok()?
        } else if chars[i].is_ascii_lowercase() {
            i += 1;
            (chars[i - 1] as u8 - b'a') as i32
        } else {
            return None;
        };
        let mut letter = idx + 1;
        if chars[i..].starts_with(&['^', '-', '1']) {
            letter = -letter;
            i += 3;
        }
        word.push(letter);
    }
    Some(word)
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Int(n) => write!(f, "{n}"),
            Element::Vector(v) => {
                let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
            Element::Word(w) if w.is_empty() => write!(f, "e"),
            Element::Word(w) => {
                for &l in w {
                    write!(f, "{}", letter_name(l))?;
                }
                Ok(())
            }
            Element::Index(i) => write!(f, "#{i}"),
            Element::Residues(r) => {
                let parts: Vec<String> = r.iter().map(|c| c.to_string()).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}
