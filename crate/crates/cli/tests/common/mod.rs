//! Test-side permutation arithmetic, independent of the library's own.

#![allow(dead_code)]

use killer_toolkit::report::QuotientReport;

/// Test-side permutation: images of 1..=d as a 0-based vector, parsed from cycle notation.
pub fn parse_perm(text: &str, degree: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..degree).collect();
    for cycle in text
        .split(')')
        .map(|c| c.trim().trim_start_matches('('))
        .filter(|c| !c.is_empty())
    {
        let pts: Vec<usize> = cycle
            .split_whitespace()
            .map(|s| s.parse::<usize>().unwrap() - 1)
            .collect();
        for (i, &a) in pts.iter().enumerate() {
            p[a] = pts[(i + 1) % pts.len()];
        }
    }
    p
}

/// Evaluates a word like `x1 x2^-1 x3^2` under the images; composition acts left to right.
pub fn evaluate(word: &str, q: &QuotientReport) -> Vec<usize> {
    let lookup = |g: &str| {
        let img = &q
            .images
            .iter()
            .find(|[name, _]| name == g)
            .unwrap_or_else(|| panic!("no image for {g}"))[1];
        parse_perm(img, q.degree)
    };
    let mut acc: Vec<usize> = (0..q.degree).collect();
    for syllable in word.split_whitespace() {
        let (g, e) = match syllable.split_once('^') {
            Some((g, e)) => (g, e.parse::<i64>().unwrap()),
            None => (syllable, 1),
        };
        let mut p = lookup(g);
        if e < 0 {
            let mut inv = vec![0; p.len()];
            for (i, &j) in p.iter().enumerate() {
                inv[j] = i;
            }
            p = inv;
        }
        for _ in 0..e.unsigned_abs() {
            acc = acc.iter().map(|&i| p[i]).collect();
        }
    }
    acc
}

pub fn is_identity(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &j)| i == j)
}

pub fn invert(word: &str) -> String {
    word.split_whitespace()
        .rev()
        .map(|s| match s.split_once('^') {
            Some((g, e)) => format!("{g}^{}", -e.parse::<i64>().unwrap()),
            None => format!("{s}^-1"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}
