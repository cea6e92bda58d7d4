//! The monoid Σ = ⟨l, n, f | fl = nf, fn = lf, ff = ε⟩ and the multimonoid
//! of node-decorated elements `iσj`.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Letter {
    L,
    N,
}

impl Letter {
    pub fn swap(self) -> Self {
        match self {
            Letter::L => Letter::N,
            Letter::N => Letter::L,
        }
    }

    pub fn swap_if(self, flip: bool) -> Self {
        if flip {
            self.swap()
        } else {
            self
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::L => 'l',
            Letter::N => 'n',
        }
    }
}

/// Raw generator, before normalization.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Gen {
    L,
    N,
    F,
}

/// Normal form `w` or `w f`, with `w` a free word in `l`, `n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Default)]
pub struct Word {
    pub body: Vec<Letter>,
    pub flip: bool,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn f() -> Self {
        Word { body: vec![], flip: true }
    }

    pub fn letter(x: Letter) -> Self {
        Word { body: vec![x], flip: false }
    }

    pub fn new(body: Vec<Letter>, flip: bool) -> Self {
        Word { body, flip }
    }

    pub fn grade(&self) -> usize {
        self.body.len()
    }

    pub fn is_empty(&self) -> bool {
        self.body.is_empty() && !self.flip
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut body = self.body.clone();
        body.extend(other.body.iter().map(|x| x.swap_if(self.flip)));
        Word { body, flip: self.flip ^ other.flip }
    }

    pub fn sharp(&self) -> Word {
        sharp(self)
    }

    /// Word repeated `k` times.
    pub fn pow(&self, k: usize) -> Word {
        (0..k).fold(Word::empty(), |acc, _| acc.concat(self))
    }
}

/// Pushes every `f` to the right, swapping letters as it passes, and cancels pairs.
pub fn normalize(raw: &[Gen]) -> Word {
    let mut body = Vec::with_capacity(raw.len());
    let mut flip = false;
    for g in raw {
        match g {
            Gen::L => body.push(Letter::L.swap_if(flip)),
            Gen::N => body.push(Letter::N.swap_if(flip)),
            Gen::F => flip = !flip,
        }
    }
    Word { body, flip }
}

pub fn concat(a: &Word, b: &Word) -> Word {
    a.concat(b)
}

/// Reverse, exchange `l` and `n`, then renormalize.
pub fn sharp(w: &Word) -> Word {
    let mut raw = Vec::with_capacity(w.body.len() + 1);
    if w.flip {
        raw.push(Gen::F);
    }
    for x in w.body.iter().rev() {
        raw.push(match x {
            Letter::L => Gen::N,
            Letter::N => Gen::L,
        });
    }
    normalize(&raw)
}

/// The unique `r` with `prefix · r = whole`.
pub fn left_quotient(prefix: &Word, whole: &Word) -> Result<Word> {
    let k = prefix.body.len();
    if whole.body.len() < k || whole.body[..k] != prefix.body[..] {
        return Err(Error::NotAPrefix(prefix.to_string()));
    }
    let body = whole.body[k..].iter().map(|x| x.swap_if(prefix.flip)).collect();
    Ok(Word { body, flip: whole.flip ^ prefix.flip })
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "e");
        }
        for x in &self.body {
            write!(f, "{}", x.as_char())?;
        }
        if self.flip {
            write!(f, "f")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "e" || s == "ε" {
            return Ok(Word::empty());
        }
        let raw = s
            .chars()
            .map(|c| match c {
                'l' => Ok(Gen::L),
                'n' => Ok(Gen::N),
                'f' => Ok(Gen::F),
                _ => Err(Error::Parse(format!("bad letter `{c}` in word `{s}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(normalize(&raw))
    }
}

/// An element `iσj` of the multimonoid.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Arrow {
    pub from: usize,
    pub word: Word,
    pub to: usize,
}

impl Arrow {
    pub fn new(from: usize, word: Word, to: usize) -> Self {
        Arrow { from, word, to }
    }

    pub fn identity(i: usize) -> Self {
        Arrow::new(i, Word::empty(), i)
    }

    pub fn grade(&self) -> usize {
        self.word.grade()
    }

    pub fn is_identity(&self) -> bool {
        self.from == self.to && self.word.is_empty()
    }

    pub fn sharp(&self) -> Arrow {
        Arrow::new(self.to, self.word.sharp(), self.from)
    }

    pub fn product(&self, b: &Arrow) -> Result<Arrow> {
        arrow_product(self, b)
    }

    pub fn is_parabolic(&self) -> bool {
        is_parabolic(self)
    }
}

pub fn arrow_product(a: &Arrow, b: &Arrow) -> Result<Arrow> {
    if a.to != b.from {
        return Err(Error::NodeMismatch(a.to, b.from));
    }
    Ok(Arrow::new(a.from, a.word.concat(&b.word), b.to))
}

/// `il^ki` or `in^ki` with `k >= 1`.
pub fn is_parabolic(a: &Arrow) -> bool {
    a.from == a.to
        && !a.word.flip
        && !a.word.body.is_empty()
        && a.word.body.iter().all(|&x| x == a.word.body[0])
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.from, self.word, self.to)
    }
}

impl FromStr for Arrow {
    type Err = Error;

    fn from_str(s: &str) -> Result<Arrow> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected `i:word:j`, got `{s}`")));
        }
        let node = |t: &str| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad node `{t}`")));
        Ok(Arrow::new(node(parts[0])?, parts[1].parse()?, node(parts[2])?))
    }
}
