use std::fmt;

use crate::error::{Error, Result};
use crate::hermitian::Isometry;
use crate::scalar::Scalar;

/// A generator raised to a nonzero power.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub name: String,
    pub power: i32,
}

/// Product of letters, written left to right as a matrix product (the rightmost acts first).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(vec![])
    }

    /// Parse `"g3 g2 g1"`, `"g1^-1"`, `"r1*r2"`, `"g2^3"`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut out = Vec::new();
        for tok in s.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
            let (name, power) = match tok.split_once('^') {
                Some((n, p)) => {
                    let p: i32 = p.parse().map_err(|_| Error::BadWord(tok.to_string()))?;
                    (n, p)
                }
                None => (tok, 1),
            };
            if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(Error::BadWord(tok.to_string()));
            }
            if power != 0 {
                out.push(Letter { name: name.to_string(), power });
            }
        }
        Ok(Word(out))
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| Letter { name: l.name.clone(), power: -l.power }).collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| if l.power == 1 { l.name.clone() } else { format!("{}^{}", l.name, l.power) })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// (word)^order = 1 in PU(2,1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub word: Word,
    pub order: u32,
}

impl Relation {
    pub fn new(word: &str, order: u32) -> Result<Self> {
        Ok(Self { word: Word::parse(word)?, order })
    }

    pub fn full_word(&self) -> Word {
        let mut w = Vec::new();
        for _ in 0..self.order {
            w.extend(self.word.0.iter().cloned());
        }
        Word(w)
    }

    pub fn label(&self) -> String {
        if self.order == 1 {
            self.word.to_string()
        } else {
            format!("({})^{}", self.word, self.order)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RepKind {
    Turnover,
    Hyperelliptic,
    Custom,
}

impl RepKind {
    pub fn name(self) -> &'static str {
        match self {
            RepKind::Turnover => "turnover",
            RepKind::Hyperelliptic => "hyperelliptic",
            RepKind::Custom => "custom",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Representation<T> {
    pub generators: Vec<(String, Isometry<T>)>,
    pub relations: Vec<Relation>,
    pub kind: RepKind,
}

impl<T: Scalar> Representation<T> {
    pub fn generator(&self, name: &str) -> Result<&Isometry<T>> {
        self.generators
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, g)| g)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn evaluate(&self, w: &Word) -> Result<Isometry<T>> {
        let mut acc = Isometry::identity();
        for l in w.0.iter() {
            let g = self.generator(&l.name)?;
            let g = if l.power < 0 { g.inverse() } else { *g };
            acc = acc.compose(&g.pow(l.power.unsigned_abs()));
        }
        Ok(acc)
    }

    /// (label, residual) for every relation.
    pub fn relation_residuals(&self) -> Result<Vec<(String, T)>> {
        self.relations.iter().map(|r| Ok((r.label(), relation_residual(self, &r.full_word())?))).collect()
    }

    pub fn max_relation_residual(&self) -> Result<T> {
        Ok(self.relation_residuals()?.into_iter().fold(T::zero(), |a, (_, r)| a.max(r)))
    }
}

/// min over cube roots w of |product - w I|_max, product normalized to det one.
pub fn relation_residual<T: Scalar>(rep: &Representation<T>, word: &Word) -> Result<T> {
    Ok(rep.evaluate(word)?.distance_from_identity())
}
