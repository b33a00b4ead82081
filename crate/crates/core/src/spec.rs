//! Group expressions such as `Dih(Z3xZ9)` or `Z2xtable:k4.tbl`.
//!
//! Grammar (whitespace is ignored everywhere):
//!
//! ```text
//! spec    := factor ('x' factor)*
//! factor  := 'Z' digits | 'Dih(' spec ')' | 'table:' path
//! ```
//!
//! A `table:` path runs to the next `)` or the end of input, so it must be
//! the last factor of its product.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::group::GroupTable;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Cyclic(usize),
    Product(Box<GroupSpec>, Box<GroupSpec>),
    Dih(Box<GroupSpec>),
    TableFile(PathBuf),
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser { chars, pos: 0 };
        let spec = p.product()?;
        if p.pos != p.chars.len() {
            return Err(p.error(format!("unexpected {:?}", p.chars[p.pos])));
        }
        Ok(spec)
    }

    pub fn cyclic(n: usize) -> Self {
        GroupSpec::Cyclic(n)
    }

    pub fn product(a: GroupSpec, b: GroupSpec) -> Self {
        GroupSpec::Product(Box::new(a), Box::new(b))
    }

    pub fn dih(a: GroupSpec) -> Self {
        GroupSpec::Dih(Box::new(a))
    }

    /// Constructs the Cayley table. Table files are resolved relative to the
    /// working directory.
    pub fn build(&self) -> Result<GroupTable> {
        match self {
            GroupSpec::Cyclic(n) => GroupTable::cyclic(*n),
            GroupSpec::Product(a, b) => GroupTable::direct_product(&a.build()?, &b.build()?),
            GroupSpec::Dih(a) => GroupTable::dihedralize(&a.build()?),
            GroupSpec::TableFile(path) => GroupTable::load_table(path),
        }
    }

    /// Flattened factors of a (possibly nested) product.
    pub fn factors(&self) -> Vec<&GroupSpec> {
        match self {
            GroupSpec::Product(a, b) => {
                let mut v = a.factors();
                v.extend(b.factors());
                v
            }
            other => vec![other],
        }
    }

    /// Spelling used for cache keys: product factors are flattened and sorted
    /// (cyclic factors ascending by order, then everything else by text).
    pub fn canonical(&self) -> String {
        match self {
            GroupSpec::Cyclic(n) => format!("Z{n}"),
            GroupSpec::Dih(a) => format!("Dih({})", a.canonical()),
            GroupSpec::TableFile(p) => format!("table:{}", p.display()),
            GroupSpec::Product(..) => {
                let mut keyed: Vec<((u8, usize), String)> = self
                    .factors()
                    .into_iter()
                    .map(|f| match f {
                        GroupSpec::Cyclic(n) => ((0, *n), f.canonical()),
                        _ => ((1, 0), f.canonical()),
                    })
                    .collect();
                keyed.sort();
                let parts: Vec<String> = keyed.into_iter().map(|(_, s)| s).collect();
                // Table paths swallow everything up to `)`, so they go last.
                let (tables, rest): (Vec<String>, Vec<String>) = parts.into_iter().partition(|s| s.starts_with("table:"));
                rest.into_iter().chain(tables).collect::<Vec<_>>().join("x")
            }
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GroupSpec::parse(s)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "Z{n}"),
            GroupSpec::Product(a, b) => write!(f, "{a}x{b}"),
            GroupSpec::Dih(a) => write!(f, "Dih({a})"),
            GroupSpec::TableFile(p) => write!(f, "table:{}", p.display()),
        }
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse { position: self.pos, message: message.into() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, lit: &str) -> bool {
        let n = lit.chars().count();
        if self.chars.len() >= self.pos + n && self.chars[self.pos..self.pos + n].iter().copied().eq(lit.chars()) {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn product(&mut self) -> Result<GroupSpec> {
        let mut acc = self.factor()?;
        while self.eat("x") {
            let rhs = self.factor()?;
            acc = GroupSpec::product(acc, rhs);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<GroupSpec> {
        if self.eat("Dih(") {
            let inner = self.product()?;
            if !self.eat(")") {
                return Err(self.error("expected ')'"));
            }
            Ok(GroupSpec::dih(inner))
        } else if self.eat("table:") {
            let start = self.pos;
            while self.peek().is_some_and(|c| c != ')') {
                self.pos += 1;
            }
            if self.pos == start {
                return Err(self.error("empty table path"));
            }
            Ok(GroupSpec::TableFile(self.chars[start..self.pos].iter().collect::<String>().into()))
        } else if self.eat("Z") {
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            if self.pos == start {
                return Err(self.error("expected cyclic order after 'Z'"));
            }
            let digits: String = self.chars[start..self.pos].iter().collect();
            let n: usize = digits.parse().map_err(|_| Error::Parse { position: start, message: "order too large".into() })?;
            if n == 0 {
                return Err(Error::Parse { position: start, message: "Z0 is not a group".into() });
            }
            Ok(GroupSpec::Cyclic(n))
        } else {
            match self.peek() {
                Some(c) => Err(self.error(format!("expected 'Z', 'Dih(' or 'table:', found {c:?}"))),
                None => Err(self.error("unexpected end of input")),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use GroupSpec::*;

    fn p(s: &str) -> GroupSpec {
        GroupSpec::parse(s).unwrap()
    }

    #[test]
    fn grammar_cases() {
        assert_eq!(p("Z4"), Cyclic(4));
        assert_eq!(p("Dih(Z3xZ9)"), GroupSpec::dih(GroupSpec::product(Cyclic(3), Cyclic(9))));
        assert_eq!(p("table:k4.tbl"), TableFile("k4.tbl".into()));
        assert_eq!(p(" Dih ( Z2 x Z2 x Z2 ) "), p("Dih(Z2xZ2xZ2)"));
        assert_eq!(p("Dih(table:dir/x.tbl)"), GroupSpec::dih(TableFile("dir/x.tbl".into())));
        assert_eq!(p("Dih(Z3)xZ2"), GroupSpec::product(GroupSpec::dih(Cyclic(3)), Cyclic(2)));
    }

    #[test]
    fn parse_errors_carry_position() {
        for (text, pos) in [("Dih(Z3", 6), ("Z", 1), ("Z3y", 2), ("", 0), ("Z3x", 3), ("Z0", 1), ("table:", 6)] {
            match GroupSpec::parse(text) {
                Err(Error::Parse { position, .. }) => assert_eq!(position, pos, "{text:?}"),
                other => panic!("{text:?} parsed as {other:?}"),
            }
        }
    }

    #[test]
    fn canonical_sorts_factors() {
        assert_eq!(p("Z9xZ3").canonical(), "Z3xZ9");
        assert_eq!(p("Dih(Z6xZ2)").canonical(), "Dih(Z2xZ6)");
        assert_eq!(p("Dih(Z4xZ2xZ2)").canonical(), "Dih(Z2xZ2xZ4)");
        assert_eq!(p("table:t.tblxZ3").canonical(), "table:t.tblxZ3");
        assert_eq!(p("Z5xDih(Z3)xZ2").canonical(), "Z2xZ5xDih(Z3)");
        for s in ["Z3xZ9", "Dih(Z2xZ6)", "Z2xZ5xDih(Z3)"] {
            assert_eq!(p(s).canonical(), s);
            assert_eq!(p(&p(s).canonical()), p(s));
        }
    }

    #[test]
    fn build_reports_nonabelian() {
        assert!(matches!(p("Dih(Dih(Z3))").build(), Err(Error::NonAbelian { .. })));
        assert_eq!(p("Dih(Z3xZ9)").build().unwrap().order(), 54);
    }
}
