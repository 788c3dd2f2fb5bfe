//! Alphabets, word families, harmonic encodings and the textual grammar.
//!
//! Letter index `0` is `e_0`; index `j >= 1` is `e_{z_j}`. Harmonic words are
//! stored outer-first: `s[0] = s_d`, and `j[0] = j_{d+1}, ..., j[d] = j_1`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LetterKind {
    E0,
    EZ(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub kind: LetterKind,
    pub rev: bool,
}

impl Letter {
    pub fn e0() -> Self {
        Letter { kind: LetterKind::E0, rev: false }
    }
    pub fn e0_rev() -> Self {
        Letter { kind: LetterKind::E0, rev: true }
    }
    pub fn ez(j: u32) -> Self {
        Letter { kind: LetterKind::EZ(j), rev: false }
    }
    pub fn ez_rev(j: u32) -> Self {
        Letter { kind: LetterKind::EZ(j), rev: true }
    }
    pub fn is_e0(&self) -> bool {
        self.kind == LetterKind::E0
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LetterKind::E0 => write!(f, "0")?,
            LetterKind::EZ(j) => write!(f, "z{j}")?,
        }
        if self.rev {
            write!(f, "r")?;
        }
        Ok(())
    }
}

/// A plain word over `e_0, e_{z_1}, ..., e_{z_N}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: &[u8]) -> Self {
        Word(letters.to_vec())
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn depth(&self) -> usize {
        self.0.iter().filter(|&&c| c != 0).count()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `e_0^a`.
    pub fn e0_power(a: usize) -> Word {
        Word(vec![0; a])
    }

    /// Text in the word grammar; for `N = 1` the root letter prints as `1`.
    pub fn to_text(&self, n_roots: u32) -> String {
        if self.0.is_empty() {
            return String::new();
        }
        self.0
            .iter()
            .map(|&c| match c {
                0 => "0".to_string(),
                1 if n_roots == 1 => "1".to_string(),
                j => format!("z{j}"),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn to_wr(&self) -> WordWR {
        WordWR {
            letters: self
                .0
                .iter()
                .map(|&c| if c == 0 { Letter::e0() } else { Letter::ez(c as u32) })
                .collect(),
        }
    }

    /// All words of weight at most `w` (and depth at most `d`), shortlex order.
    pub fn enumerate(n_roots: u32, max_weight: usize, max_depth: Option<usize>) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..max_weight {
            let mut next = Vec::new();
            for w in &layer {
                for c in 0..=n_roots as u8 {
                    let mut v = w.0.clone();
                    v.push(c);
                    let nw = Word(v);
                    if max_depth.map_or(true, |d| nw.depth() <= d) {
                        next.push(nw);
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "()");
        }
        write!(f, "{}", self.to_text(0))
    }
}

/// Word with reversal flags in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct WordWR {
    letters: Vec<Letter>,
}

impl WordWR {
    pub fn new(mut letters: Vec<Letter>) -> Self {
        canonicalize(&mut letters);
        WordWR { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn weight(&self) -> usize {
        self.letters.len()
    }

    pub fn depth(&self) -> usize {
        self.letters.iter().filter(|l| !l.is_e0()).count()
    }

    pub fn concat(&self, other: &WordWR) -> WordWR {
        let mut v = self.letters.clone();
        v.extend_from_slice(&other.letters);
        WordWR::new(v)
    }

    pub fn is_plain(&self) -> bool {
        self.letters.iter().all(|l| !l.rev)
    }

    pub fn to_plain(&self) -> Option<Word> {
        self.is_plain().then(|| {
            Word(
                self.letters
                    .iter()
                    .map(|l| match l.kind {
                        LetterKind::E0 => 0,
                        LetterKind::EZ(j) => j as u8,
                    })
                    .collect(),
            )
        })
    }

    pub fn to_loc(&self) -> WordLoc {
        let mut blocks = Vec::new();
        let (mut u, mut ur) = (0i64, 0i64);
        for l in &self.letters {
            match l.kind {
                LetterKind::E0 if l.rev => ur += 1,
                LetterKind::E0 => u += 1,
                LetterKind::EZ(j) => {
                    blocks.push(LocBlock { u, u_rev: ur, root: j, rev: l.rev });
                    u = 0;
                    ur = 0;
                }
            }
        }
        WordLoc { blocks, tail: (u, ur) }
    }
}

impl fmt::Display for WordWR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Plain `e_0` letters before reversed ones inside every run of `e_0` letters.
fn canonicalize(letters: &mut [Letter]) {
    let mut i = 0;
    while i < letters.len() {
        if letters[i].is_e0() {
            let start = i;
            while i < letters.len() && letters[i].is_e0() {
                i += 1;
            }
            letters[start..i].sort_by_key(|l| l.rev);
        } else {
            i += 1;
        }
    }
}

/// One block `e_0^{u + u_rev^(rev)} e_{z_root}^{(rev?)}` of a localized word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LocBlock {
    pub u: i64,
    pub u_rev: i64,
    pub root: u32,
    pub rev: bool,
}

/// Localized word: blocks read left to right, followed by a trailing `e_0` exponent pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct WordLoc {
    pub blocks: Vec<LocBlock>,
    pub tail: (i64, i64),
}

impl WordLoc {
    pub fn weight(&self) -> i64 {
        self.blocks.iter().map(|b| b.u + b.u_rev + 1).sum::<i64>() + self.tail.0 + self.tail.1
    }

    pub fn depth(&self) -> usize {
        self.blocks.len()
    }
}

impl fmt::Display for WordLoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let push_exp = |parts: &mut Vec<String>, u: i64, ur: i64| {
            if u != 0 {
                parts.push(format!("0^{u}"));
            }
            if ur != 0 {
                parts.push(format!("0r^{ur}"));
            }
        };
        for b in &self.blocks {
            push_exp(&mut parts, b.u, b.u_rev);
            parts.push(format!("z{}{}", b.root, if b.rev { "r" } else { "" }));
        }
        push_exp(&mut parts, self.tail.0, self.tail.1);
        write!(f, "{}", parts.join(" "))
    }
}

/// Harmonic word `(z_{j_{d+1}}, ..., z_{j_1}; s_d, ..., s_1)`, outer-first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HarmonicWord {
    pub s: Vec<u32>,
    pub j: Vec<u32>,
}

/// Harmonic word with reversals: entries `(s_i, s'_i)`, outer-first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HarmonicWordWR {
    pub entries: Vec<(u32, u32)>,
    pub j: Vec<u32>,
}

/// Localized harmonic word: arbitrary integer entries `(u_i, u'_i)`, outer-first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HarmonicWordLoc {
    pub entries: Vec<(i64, i64)>,
    pub j: Vec<u32>,
}

fn check_roots(j: &[u32], n_roots: u32) -> Result<()> {
    for &x in j {
        if x == 0 || x > n_roots {
            return Err(Error::RootIndex { index: x as i64, n_roots });
        }
    }
    Ok(())
}

impl HarmonicWord {
    /// `N = 1` harmonic word with all roots equal to `1`.
    pub fn plain(s: &[u32]) -> Self {
        HarmonicWord { s: s.to_vec(), j: vec![1; s.len() + 1] }
    }

    pub fn new(s: Vec<u32>, j: Vec<u32>) -> Result<Self> {
        if j.len() != s.len() + 1 {
            return Err(Error::InvalidWord(format!("need {} roots, got {}", s.len() + 1, j.len())));
        }
        if s.iter().any(|&x| x == 0) {
            return Err(Error::InvalidWord("harmonic entries must be positive".into()));
        }
        Ok(HarmonicWord { s, j })
    }

    pub fn depth(&self) -> usize {
        self.s.len()
    }

    pub fn weight(&self) -> u32 {
        self.s.iter().sum()
    }

    pub fn to_wr(&self) -> HarmonicWordWR {
        HarmonicWordWR { entries: self.s.iter().map(|&x| (x, 0)).collect(), j: self.j.clone() }
    }

    pub fn to_loc(&self) -> HarmonicWordLoc {
        HarmonicWordLoc {
            entries: self.s.iter().map(|&x| (x as i64, 0)).collect(),
            j: self.j.clone(),
        }
    }

    /// Inverse of [`to_harmonic`].
    pub fn to_word(&self) -> Word {
        let mut v = Vec::new();
        for (k, &s) in self.s.iter().enumerate() {
            v.extend(std::iter::repeat(0u8).take(s as usize - 1));
            v.push(self.j[k + 1] as u8);
        }
        Word(v)
    }

    pub fn validate(&self, n_roots: u32) -> Result<()> {
        check_roots(&self.j, n_roots)
    }
}

impl HarmonicWordWR {
    pub fn depth(&self) -> usize {
        self.entries.len()
    }

    pub fn weight(&self) -> u32 {
        self.entries.iter().map(|&(a, b)| a + b).sum()
    }

    pub fn to_loc(&self) -> HarmonicWordLoc {
        HarmonicWordLoc {
            entries: self.entries.iter().map(|&(a, b)| (a as i64, b as i64)).collect(),
            j: self.j.clone(),
        }
    }

    pub fn to_plain(&self) -> Option<HarmonicWord> {
        self.entries.iter().all(|&(a, b)| a > 0 && b == 0).then(|| HarmonicWord {
            s: self.entries.iter().map(|&(a, _)| a).collect(),
            j: self.j.clone(),
        })
    }

    /// A representing word: plain letter when `s_i >= 1`, reversed otherwise.
    pub fn to_word(&self) -> WordWR {
        let mut v = Vec::new();
        for (k, &(s, sr)) in self.entries.iter().enumerate() {
            let j = self.j[k + 1];
            if s >= 1 {
                v.extend(std::iter::repeat(Letter::e0()).take(s as usize - 1));
                v.extend(std::iter::repeat(Letter::e0_rev()).take(sr as usize));
                v.push(Letter::ez(j));
            } else {
                v.extend(std::iter::repeat(Letter::e0_rev()).take(sr as usize - 1));
                v.push(Letter::ez_rev(j));
            }
        }
        WordWR::new(v)
    }
}

impl HarmonicWordLoc {
    pub fn depth(&self) -> usize {
        self.entries.len()
    }

    pub fn weight(&self) -> i64 {
        self.entries.iter().map(|&(a, b)| a + b).sum()
    }

    pub fn to_wr(&self) -> Option<HarmonicWordWR> {
        self.entries
            .iter()
            .all(|&(a, b)| a >= 0 && b >= 0 && (a, b) != (0, 0))
            .then(|| HarmonicWordWR {
                entries: self.entries.iter().map(|&(a, b)| (a as u32, b as u32)).collect(),
                j: self.j.clone(),
            })
    }

    pub fn to_plain(&self) -> Option<HarmonicWord> {
        self.to_wr().and_then(|w| w.to_plain())
    }
}

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for HarmonicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h[{};{}]", join(&self.j), join(&self.s))
    }
}

fn entry_text(a: i64, b: i64) -> String {
    if b == 0 {
        a.to_string()
    } else {
        format!("{a}~{b}")
    }
}

impl fmt::Display for HarmonicWordWR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.entries.iter().map(|&(a, b)| entry_text(a as i64, b as i64)).collect();
        write!(f, "h[{};{}]", join(&self.j), e.join(","))
    }
}

impl fmt::Display for HarmonicWordLoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.entries.iter().map(|&(a, b)| entry_text(a, b)).collect();
        write!(f, "h[{};{}]", join(&self.j), e.join(","))
    }
}

/// `w = e_0^{s_d-1} e_{z_{j_d}} ... e_0^{s_1-1} e_{z_{j_1}}` read off as a harmonic word.
pub fn to_harmonic(w: &Word, j_outer: u32) -> Result<HarmonicWord> {
    if w.0.last().map_or(true, |&c| c == 0) {
        return Err(Error::InvalidWord(format!(
            "word '{w}' is empty or ends with e_0 and has no harmonic form"
        )));
    }
    let mut s = Vec::new();
    let mut j = vec![j_outer];
    let mut run = 0;
    for &c in &w.0 {
        if c == 0 {
            run += 1;
        } else {
            s.push(run + 1);
            j.push(c as u32);
            run = 0;
        }
    }
    Ok(HarmonicWord { s, j })
}

/// Inverse of [`to_harmonic`].
pub fn from_harmonic(h: &HarmonicWord) -> Word {
    h.to_word()
}

pub fn to_harmonic_wr(w: &WordWR, j_outer: u32) -> Result<HarmonicWordWR> {
    let loc = to_harmonic_loc(&w.to_loc(), j_outer)?;
    Ok(HarmonicWordWR {
        entries: loc.entries.iter().map(|&(a, b)| (a as u32, b as u32)).collect(),
        j: loc.j,
    })
}

pub fn to_harmonic_loc(w: &WordLoc, j_outer: u32) -> Result<HarmonicWordLoc> {
    if w.tail != (0, 0) || w.blocks.is_empty() {
        return Err(Error::InvalidWord(format!(
            "word '{w}' is empty or ends with e_0 and has no harmonic form"
        )));
    }
    let mut entries = Vec::new();
    let mut j = vec![j_outer];
    for b in &w.blocks {
        let eps = if b.rev { (0, 1) } else { (1, 0) };
        entries.push((b.u + eps.0, b.u_rev + eps.1));
        j.push(b.root);
    }
    Ok(HarmonicWordLoc { entries, j })
}

/// Ratio encoding of a harmonic word: `eta_i = j_{i+1} - j_i mod N`, outer-first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EtaWord {
    pub n_roots: u32,
    pub s: Vec<u32>,
    pub eta: Vec<u32>,
}

impl EtaWord {
    pub fn depth(&self) -> usize {
        self.s.len()
    }

    /// Sum of the ratio exponents, i.e. `j_{d+1} - j_1 mod N`.
    pub fn total_eta(&self) -> u32 {
        self.eta.iter().fold(0, |a, &e| (a + e) % self.n_roots)
    }
}

fn modn(x: i64, n: u32) -> u32 {
    x.rem_euclid(n as i64) as u32
}

/// Root index in `1..=N` congruent to `x`.
pub fn root_index(x: i64, n: u32) -> u32 {
    let r = modn(x, n);
    if r == 0 {
        n
    } else {
        r
    }
}

pub fn eta_encode(h: &HarmonicWord, n_roots: u32) -> EtaWord {
    let eta = (0..h.s.len())
        .map(|k| modn(h.j[k] as i64 - h.j[k + 1] as i64, n_roots))
        .collect();
    EtaWord { n_roots, s: h.s.clone(), eta }
}

/// Inverse of [`eta_encode`] given the innermost root index `j_1`.
pub fn eta_decode(e: &EtaWord, j_1: u32) -> HarmonicWord {
    let d = e.s.len();
    let mut j = vec![0u32; d + 1];
    j[d] = root_index(j_1 as i64, e.n_roots);
    for k in (0..d).rev() {
        j[k] = root_index(j[k + 1] as i64 + e.eta[k] as i64, e.n_roots);
    }
    HarmonicWord { s: e.s.clone(), j }
}

// ---------------------------------------------------------------------------
// Grammar

struct Token<'a> {
    text: &'a str,
    pos: usize,
}

fn tokens(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token { text: &text[s..i], pos: s });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token { text: &text[s..], pos: s });
    }
    out
}

enum Parsed {
    E0 { rev: bool, exp: i64 },
    EZ { j: u32, rev: bool },
}

fn parse_token(t: &Token<'_>, n_roots: u32) -> Result<Parsed> {
    let syntax = |msg: String| Error::Syntax { pos: t.pos, msg };
    let (body, exp) = match t.text.split_once('^') {
        Some((b, e)) => {
            let e: i64 = e.parse().map_err(|_| syntax(format!("bad exponent in '{}'", t.text)))?;
            (b, Some(e))
        }
        None => (t.text, None),
    };
    let (core, rev) = match body.strip_suffix('r') {
        Some(c) => (c, true),
        None => (body, false),
    };
    if core == "0" {
        return Ok(Parsed::E0 { rev, exp: exp.unwrap_or(1) });
    }
    if exp.is_some() {
        return Err(syntax(format!("exponent only allowed on e_0 letters: '{}'", t.text)));
    }
    let j: i64 = if core == "1" && n_roots == 1 {
        1
    } else if let Some(num) = core.strip_prefix('z') {
        num.parse().map_err(|_| syntax(format!("bad root index in '{}'", t.text)))?
    } else {
        return Err(syntax(format!("unknown letter '{}'", t.text)));
    };
    if j < 1 || j > n_roots as i64 {
        return Err(Error::RootIndex { index: j, n_roots });
    }
    Ok(Parsed::EZ { j: j as u32, rev })
}

/// Parse a word with optional reversal flags into canonical form.
pub fn parse_word(text: &str, n_roots: u32) -> Result<WordWR> {
    let mut letters = Vec::new();
    for t in tokens(text) {
        match parse_token(&t, n_roots)? {
            Parsed::E0 { rev, exp } => {
                if exp < 0 {
                    return Err(Error::Syntax {
                        pos: t.pos,
                        msg: "negative exponent needs a localized word".into(),
                    });
                }
                let l = if rev { Letter::e0_rev() } else { Letter::e0() };
                letters.extend(std::iter::repeat(l).take(exp as usize));
            }
            Parsed::EZ { j, rev } => letters.push(Letter { kind: LetterKind::EZ(j), rev }),
        }
    }
    Ok(WordWR::new(letters))
}

/// Parse a plain word (no reversal flags).
pub fn parse_plain_word(text: &str, n_roots: u32) -> Result<Word> {
    parse_word(text, n_roots)?
        .to_plain()
        .ok_or_else(|| Error::InvalidWord(format!("'{text}' has reversal flags")))
}

/// Parse a localized word; `e_0` exponents may be negative.
pub fn parse_word_loc(text: &str, n_roots: u32) -> Result<WordLoc> {
    let mut blocks = Vec::new();
    let (mut u, mut ur) = (0i64, 0i64);
    for t in tokens(text) {
        match parse_token(&t, n_roots)? {
            Parsed::E0 { rev: false, exp } => u += exp,
            Parsed::E0 { rev: true, exp } => ur += exp,
            Parsed::EZ { j, rev } => {
                blocks.push(LocBlock { u, u_rev: ur, root: j, rev });
                u = 0;
                ur = 0;
            }
        }
    }
    Ok(WordLoc { blocks, tail: (u, ur) })
}

/// Parse `h[j_{d+1},...,j_1 ; s_d,...,s_1]`. A single root index is used for every position.
pub fn parse_harmonic(text: &str, n_roots: u32) -> Result<HarmonicWordLoc> {
    let t = text.trim();
    let offset = text.len() - text.trim_start().len();
    let syntax = |pos: usize, msg: &str| Error::Syntax { pos: offset + pos, msg: msg.to_string() };
    let inner = t
        .strip_prefix("h[")
        .ok_or_else(|| syntax(0, "expected 'h['"))?
        .strip_suffix(']')
        .ok_or_else(|| syntax(t.len(), "expected closing ']'"))?;
    let (js, ss) = inner.split_once(';').ok_or_else(|| syntax(2, "expected ';'"))?;
    let semi = 2 + js.len();
    let mut j = Vec::new();
    for part in js.split(',') {
        let p = part.trim();
        let x: i64 = p.parse().map_err(|_| syntax(2, &format!("bad root index '{p}'")))?;
        if x < 1 || x > n_roots as i64 {
            return Err(Error::RootIndex { index: x, n_roots });
        }
        j.push(x as u32);
    }
    let mut entries = Vec::new();
    if !ss.trim().is_empty() {
        for part in ss.split(',') {
            let p = part.trim();
            let bad = || syntax(semi + 1, &format!("bad entry '{p}'"));
            let e = match p.split_once('~') {
                Some((a, b)) => {
                    (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)
                }
                None => (p.parse().map_err(|_| bad())?, 0),
            };
            entries.push(e);
        }
    }
    let d = entries.len();
    if j.len() == 1 && d > 0 {
        j = vec![j[0]; d + 1];
    }
    if j.len() != d + 1 {
        return Err(syntax(2, &format!("expected {} root indices, got {}", d + 1, j.len())));
    }
    Ok(HarmonicWordLoc { entries, j })
}

pub fn parse_harmonic_plain(text: &str, n_roots: u32) -> Result<HarmonicWord> {
    parse_harmonic(text, n_roots)?
        .to_plain()
        .ok_or_else(|| Error::InvalidWord(format!("'{text}' is not a plain harmonic word")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let w = parse_word("0 z1", 1).unwrap();
        assert_eq!((w.weight(), w.depth()), (2, 1));
        assert_eq!(w.to_plain().unwrap(), Word(vec![0, 1]));
        assert_eq!(parse_word("z1r 0", 1).unwrap().to_string(), "z1r 0");
        assert_eq!(parse_word("0r 0 z1", 1).unwrap().to_string(), "0 0r z1");
        assert_eq!(parse_word("0 1 1", 1).unwrap().to_plain().unwrap(), Word(vec![0, 1, 1]));
        assert!(matches!(parse_word("z3", 2), Err(Error::RootIndex { index: 3, .. })));
        assert!(matches!(parse_word("0 q", 1), Err(Error::Syntax { pos: 2, .. })));
        assert!(parse_word("0^-1 z1", 1).is_err());
        assert_eq!(parse_word("0^2 z1", 1).unwrap().to_plain().unwrap(), Word(vec![0, 0, 1]));
    }

    #[test]
    fn harmonic_readoff() {
        let h = to_harmonic(&Word(vec![0, 1]), 1).unwrap();
        assert_eq!(h.s, vec![2]);
        assert_eq!(to_harmonic(&Word(vec![1, 1]), 1).unwrap().s, vec![1, 1]);
        assert!(to_harmonic(&Word(vec![1, 0]), 1).is_err());
        let w = parse_word("0 0r z1", 1).unwrap();
        assert_eq!(to_harmonic_wr(&w, 1).unwrap().entries, vec![(2, 1)]);
        let w = parse_word("z1r", 1).unwrap();
        assert_eq!(to_harmonic_wr(&w, 1).unwrap().entries, vec![(0, 1)]);
        let w = parse_word_loc("0^-2 z1", 1).unwrap();
        assert_eq!(to_harmonic_loc(&w, 1).unwrap().entries, vec![(-1, 0)]);
    }

    #[test]
    fn harmonic_grammar() {
        let h = parse_harmonic("h[1;2]", 1).unwrap();
        assert_eq!(h.entries, vec![(2, 0)]);
        assert_eq!(h.j, vec![1, 1]);
        let h = parse_harmonic("h[2,1,3 ; 1~2, -3]", 4).unwrap();
        assert_eq!(h.entries, vec![(1, 2), (-3, 0)]);
        assert_eq!(h.j, vec![2, 1, 3]);
        assert_eq!(h.to_string(), "h[2,1,3;1~2,-3]");
        assert!(parse_harmonic("h[1,1,1;2]", 1).is_err());
        assert!(parse_harmonic("h[5;2]", 4).is_err());
        let e = parse_harmonic("h[1;]", 1).unwrap();
        assert!(e.entries.is_empty());
    }

    #[test]
    fn eta_examples() {
        let h = HarmonicWord::new(vec![2, 1], vec![1, 1, 1]).unwrap();
        assert_eq!(eta_encode(&h, 1).eta, vec![0, 0]);
        // j_1 = 1, j_2 = 3
        let h = HarmonicWord::new(vec![2], vec![3, 1]).unwrap();
        let e = eta_encode(&h, 4);
        assert_eq!(e.eta, vec![2]);
        assert_eq!(eta_decode(&e, 1), h);
    }

    #[test]
    fn enumerate_counts() {
        assert_eq!(Word::enumerate(1, 3, None).len(), 1 + 2 + 4 + 8);
        assert_eq!(Word::enumerate(2, 2, Some(1)).len(), 1 + 3 + (1 + 2 + 2));
    }
}
