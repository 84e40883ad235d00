//! The group mini-language.
//!
//! Grammar:
//!
//! ```text
//! expr   := term ( "x" term )*
//! term   := S(n) | A(n) | C(n) | D(n) | Q8 | H([p,...],d) | Gn(n)
//!         | gens[<perm>,<perm>,...]@<degree>
//! perm   := ( "(" point+ ")" )*          e.g. (0 1 2)(3 4)
//! ```
//!
//! `x` is the direct product (left associative). Points are 0-based.

use crate::error::{Error, Result};
use crate::perm::{
    alternating_group, cyclic_group, dihedral_group, extremal_gn, h_pi_d, quaternion_group,
    symmetric_group, FiniteGroup, Permutation, Point,
};

/// A textual group expression; parses to exactly one group or an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec(pub String);

impl GroupSpec {
    pub fn new(text: impl Into<String>) -> Self {
        GroupSpec(text.into())
    }

    pub fn build(&self, cap: usize) -> Result<FiniteGroup> {
        let mut parser = Parser {
            chars: self.0.chars().collect(),
            pos: 0,
            cap,
        };
        let g = parser.expr()?;
        parser.skip_ws();
        if parser.pos != parser.chars.len() {
            return Err(Error::BadGroupSpec(format!(
                "trailing input at position {}: {:?}",
                parser.pos, self.0
            )));
        }
        Ok(g)
    }
}

/// Convenience: parse and build in one step.
pub fn parse_group(text: &str, cap: usize) -> Result<FiniteGroup> {
    GroupSpec::new(text).build(cap)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    cap: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        self.skip_ws();
        let c = self.chars.get(self.pos).copied();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.bump() {
            Some(got) if got == c => Ok(()),
            got => Err(Error::BadGroupSpec(format!(
                "expected {c:?}, found {got:?}"
            ))),
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::BadGroupSpec("expected a number".into()));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse()
            .map_err(|_| Error::BadGroupSpec(format!("bad number {s:?}")))
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn expr(&mut self) -> Result<FiniteGroup> {
        let mut g = self.term()?;
        loop {
            let save = self.pos;
            self.skip_ws();
            if self.chars.get(self.pos) == Some(&'x')
                // "x" must be a lone operator, not the start of an identifier
                && !matches!(self.chars.get(self.pos + 1), Some(c) if c.is_ascii_alphanumeric())
            {
                self.pos += 1;
                let rhs = self.term()?;
                g = g.direct_product(&rhs, self.cap)?;
            } else {
                self.pos = save;
                return Ok(g);
            }
        }
    }

    fn term(&mut self) -> Result<FiniteGroup> {
        let name = self.ident();
        match name.as_str() {
            "S" => {
                self.expect('(')?;
                let n = self.number()? as usize;
                self.expect(')')?;
                symmetric_group(n, self.cap)
            }
            "A" => {
                self.expect('(')?;
                let n = self.number()? as usize;
                self.expect(')')?;
                alternating_group(n, self.cap)
            }
            "C" => {
                self.expect('(')?;
                let n = self.number()? as usize;
                self.expect(')')?;
                cyclic_group(n, self.cap)
            }
            "D" => {
                self.expect('(')?;
                let n = self.number()? as usize;
                self.expect(')')?;
                dihedral_group(n, self.cap)
            }
            "Q8" => quaternion_group(self.cap),
            "H" => {
                self.expect('(')?;
                self.expect('[')?;
                let mut pi = Vec::new();
                loop {
                    pi.push(self.number()?);
                    match self.bump() {
                        Some(',') => continue,
                        Some(']') => break,
                        got => {
                            return Err(Error::BadGroupSpec(format!(
                                "expected ',' or ']' in prime list, found {got:?}"
                            )))
                        }
                    }
                }
                self.expect(',')?;
                let d = self.number()? as usize;
                self.expect(')')?;
                h_pi_d(&pi, d, self.cap)
            }
            "Gn" => {
                self.expect('(')?;
                let n = self.number()? as usize;
                self.expect(')')?;
                extremal_gn(n, self.cap)
            }
            "gens" => {
                self.expect('[')?;
                let mut raw_gens: Vec<Vec<Vec<u64>>> = Vec::new();
                loop {
                    raw_gens.push(self.cycles()?);
                    match self.bump() {
                        Some(',') => continue,
                        Some(']') => break,
                        got => {
                            return Err(Error::BadGroupSpec(format!(
                                "expected ',' or ']' in generator list, found {got:?}"
                            )))
                        }
                    }
                }
                self.expect('@')?;
                let degree = self.number()? as usize;
                let mut gens = Vec::new();
                for cycles in raw_gens {
                    let cycles: Vec<Vec<Point>> = cycles
                        .iter()
                        .map(|c| c.iter().map(|&x| x as Point).collect())
                        .collect();
                    gens.push(Permutation::from_cycles(&cycles, degree)?);
                }
                FiniteGroup::from_generators(gens, self.cap)
            }
            other => Err(Error::BadGroupSpec(format!(
                "unknown constructor {other:?}"
            ))),
        }
    }

    /// One permutation as a (possibly empty) sequence of cycles.
    fn cycles(&mut self) -> Result<Vec<Vec<u64>>> {
        let mut cycles = Vec::new();
        while self.peek() == Some('(') {
            self.expect('(')?;
            let mut cycle = Vec::new();
            loop {
                cycle.push(self.number()?);
                match self.peek() {
                    Some(')') => {
                        self.bump();
                        break;
                    }
                    Some(c) if c.is_ascii_digit() => continue,
                    got => {
                        return Err(Error::BadGroupSpec(format!(
                            "expected point or ')' in cycle, found {got:?}"
                        )))
                    }
                }
            }
            cycles.push(cycle);
        }
        if cycles.is_empty() {
            return Err(Error::BadGroupSpec("expected at least one cycle".into()));
        }
        Ok(cycles)
    }
}
