//! The family container and its text file format.
//!
//! ```text
//! n=4 m=2
//! 1 2 3 4
//! 4 3 2 1
//! ```
//!
//! The header gives the ground size and the member count; each following
//! line is one permutation of `1..=n` in one-line notation.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Family {
    n: usize,
    members: Vec<Permutation>,
}

impl Family {
    pub fn new(n: usize, members: Vec<Permutation>) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("ground size must be at least 1"));
        }
        if let Some(p) = members.iter().find(|p| p.n() != n) {
            return Err(Error::domain(format!("member {p} is not a permutation of [{n}]")));
        }
        Ok(Family { n, members })
    }

    /// Convenience constructor from one-line rows; the ground size is taken
    /// from the first row.
    pub fn from_rows<R: AsRef<[u32]>>(rows: &[R]) -> Result<Self> {
        let first = rows
            .first()
            .ok_or_else(|| Error::domain("cannot infer ground size of an empty family"))?;
        let n = first.as_ref().len();
        let members = rows
            .iter()
            .map(|r| Permutation::new(r.as_ref().to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Family::new(n, members)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Permutation] {
        &self.members
    }

    pub fn into_members(self) -> Vec<Permutation> {
        self.members
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.members.contains(p)
    }

    pub fn has_duplicates(&self) -> bool {
        let mut sorted: Vec<&Permutation> = self.members.iter().collect();
        sorted.sort();
        sorted.windows(2).any(|w| w[0] == w[1])
    }

    pub fn push(&mut self, p: Permutation) -> Result<()> {
        if p.n() != self.n {
            return Err(Error::domain(format!("member {p} is not a permutation of [{}]", self.n)));
        }
        self.members.push(p);
        Ok(())
    }

    pub fn reversed(&self) -> Family {
        Family {
            n: self.n,
            members: self.members.iter().map(Permutation::reverse).collect(),
        }
    }

    /// Deletes every element above `m` from every member.
    pub fn restrict_to_prefix(&self, m: usize) -> Result<Family> {
        let members = self
            .members
            .iter()
            .map(|p| p.restrict_to_prefix(m))
            .collect::<Result<Vec<_>>>()?;
        Family::new(m, members)
    }

    /// Renames every element of every member by the bijection `map`.
    pub fn relabel(&self, map: &[u32]) -> Result<Family> {
        let members = self
            .members
            .iter()
            .map(|p| p.relabel(map))
            .collect::<Result<Vec<_>>>()?;
        Family::new(self.n, members)
    }

    /// Members sorted lexicographically.
    pub fn sorted(&self) -> Family {
        let mut members = self.members.clone();
        members.sort();
        Family { n: self.n, members }
    }

    pub fn parse(text: &str) -> Result<Family> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let (hline, header) = lines
            .find(|(_, l)| !l.is_empty())
            .ok_or(Error::Parse {
                line: 1,
                message: "missing header `n=<n> m=<m>`".into(),
            })?;
        let (n, m) = parse_header(header).map_err(|message| Error::Parse { line: hline, message })?;

        let mut members = Vec::with_capacity(m);
        let mut last_line = hline;
        for (line, row) in lines {
            last_line = line;
            if row.is_empty() {
                continue;
            }
            if members.len() == m {
                return Err(Error::Parse {
                    line,
                    message: format!("more than m={m} permutations"),
                });
            }
            members.push(parse_row(row, n).map_err(|message| Error::Parse { line, message })?);
        }
        if members.len() != m {
            return Err(Error::Parse {
                line: last_line + 1,
                message: format!("expected {m} permutations, found {}", members.len()),
            });
        }
        Family::new(n, members)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Family> {
        Family::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_string())?;
        Ok(())
    }
}

fn parse_header(header: &str) -> std::result::Result<(usize, usize), String> {
    let mut n = None;
    let mut m = None;
    for field in header.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| format!("malformed header field `{field}`"))?;
        let value: usize = value
            .parse()
            .map_err(|_| format!("header value `{value}` is not a non-negative integer"))?;
        match key {
            "n" if n.is_none() => n = Some(value),
            "m" if m.is_none() => m = Some(value),
            _ => return Err(format!("unexpected header field `{field}`")),
        }
    }
    match (n, m) {
        (Some(0), _) => Err("ground size n must be at least 1".into()),
        (Some(n), Some(m)) => Ok((n, m)),
        _ => Err("header must be `n=<n> m=<m>`".into()),
    }
}

fn parse_row(row: &str, n: usize) -> std::result::Result<Permutation, String> {
    let mut seen = vec![false; n + 1];
    let mut order = Vec::with_capacity(n);
    for tok in row.split_whitespace() {
        let v: u32 = tok.parse().map_err(|_| format!("`{tok}` is not a positive integer"))?;
        if v == 0 || v as usize > n {
            return Err(format!("value {v} outside 1..={n}"));
        }
        if seen[v as usize] {
            return Err(format!("duplicate value {v}"));
        }
        seen[v as usize] = true;
        order.push(v);
    }
    if order.len() != n {
        return Err(format!("expected {n} values, found {}", order.len()));
    }
    Permutation::new(order).map_err(|e| e.to_string())
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={} m={}", self.n, self.members.len())?;
        for p in &self.members {
            let mut first = true;
            for a in p.order() {
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{a}")?;
                first = false;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
