//! Letter conventions for the two word systems.
//!
//! Two-copy flow of rank `3m + 1`: letters `1..=2m+1` are `e_j` for
//! `j = -m..=m`, letters `2m+2..=3m+1` are `b_1..b_m`. All are involutions.
//! McMahon flow of rank `2m + 1`: letter `k + m + 1` is `θ_k`, and its
//! inverse letter acts as `θ_k^3`. Sheet 0 is the `+1` copy (resp. `δ = 0`).

use crate::cantor::{CoordinateScheme, Point};
use crate::error::{Error, Result};
use crate::group::Element;

pub(crate) fn two_copy_rank(m: u32) -> usize {
    3 * m as usize + 1
}

pub(crate) fn mcmahon_rank(m: u32) -> usize {
    2 * m as usize + 1
}

/// The letter for `e_j`.
pub fn e_letter(m: u32, j: i64) -> Result<i32> {
    if j.unsigned_abs() > m as u64 {
        return Err(Error::Range(format!("e_{j} outside the truncation |j| <= {m}")));
    }
    Ok((j + m as i64 + 1) as i32)
}

/// The letter for `b_i`, `1 ≤ i ≤ m`.
pub fn b_letter(m: u32, i: u32) -> Result<i32> {
    if i == 0 || i > m {
        return Err(Error::Range(format!("b_{i} outside the truncation 1 <= i <= {m}")));
    }
    Ok((2 * m + 1 + i) as i32)
}

/// The letter for `θ_k`.
pub fn theta_letter(m: u32, k: i64) -> Result<i32> {
    if k.unsigned_abs() > m as u64 {
        return Err(Error::Range(format!("theta_{k} outside the truncation |k| <= {m}")));
    }
    Ok((k + m as i64 + 1) as i32)
}

/// The word `l_1 l_2 … l_r`, acting as `l_1(l_2(…(l_r x)))`; not reduced, so
/// that products like `θθ` stay visible.
pub fn word(letters: &[i32]) -> Element {
    Element::Word(letters.to_vec())
}

enum TwoCopyLetter {
    Flip(i64),
    Swap(i64),
}

fn two_copy_letter(m: u32, l: i32) -> TwoCopyLetter {
    let i = l.unsigned_abs() as i64;
    let m = m as i64;
    if i <= 2 * m + 1 {
        TwoCopyLetter::Flip(i - m - 1)
    } else {
        TwoCopyLetter::Swap(i - 2 * m - 1)
    }
}

pub(crate) fn two_copy_name(m: u32, l: i32) -> String {
    match two_copy_letter(m, l) {
        TwoCopyLetter::Flip(j) => format!("e_{j}"),
        TwoCopyLetter::Swap(i) => format!("b_{i}"),
    }
}

pub(crate) fn mcmahon_name(m: u32, l: i32) -> String {
    let k = l.unsigned_abs() as i64 - m as i64 - 1;
    if l < 0 {
        format!("theta_{k}^-1")
    } else {
        format!("theta_{k}")
    }
}

pub(crate) fn render(w: &[i32], name: impl Fn(i32) -> String) -> String {
    if w.is_empty() {
        return "e".to_string();
    }
    w.iter().map(|&l| name(l)).collect::<Vec<_>>().join(" ")
}

fn flip(scheme: &CoordinateScheme, x: &Point, j: i64) -> Result<Point> {
    x.with_symbols(scheme, j, &[1 - x.sym(j)])
}

pub(crate) fn two_copy_act(scheme: &CoordinateScheme, m: u32, w: &[i32], x: &Point) -> Result<Point> {
    let mut y = x.clone();
    for &l in w.iter().rev() {
        y = match two_copy_letter(m, l) {
            TwoCopyLetter::Flip(j) => flip(scheme, &y, j)?,
            TwoCopyLetter::Swap(i) => {
                // b_i switches copies exactly on [0_{-i}, …, 0_i, 1_{i+1}].
                if (-i..=i).all(|n| y.sym(n) == 0) && y.sym(i + 1) == 1 {
                    y.with_sheet(1 - y.sheet())
                } else {
                    y
                }
            }
        };
    }
    Ok(y)
}

fn theta(scheme: &CoordinateScheme, x: &Point, k: i64) -> Result<Point> {
    let bit = x.sym(k);
    Ok(flip(scheme, x, k)?.with_sheet((x.sheet() + bit) % 2))
}

pub(crate) fn mcmahon_act(scheme: &CoordinateScheme, m: u32, w: &[i32], x: &Point) -> Result<Point> {
    let mut y = x.clone();
    for &l in w.iter().rev() {
        let k = l.unsigned_abs() as i64 - m as i64 - 1;
        let times = if l > 0 { 1 } else { 3 };
        for _ in 0..times {
            y = theta(scheme, &y, k)?;
        }
    }
    Ok(y)
}
