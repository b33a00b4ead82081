//! Finite groups stored as Cayley tables.
//!
//! Every table keeps the identity at index 0. Loaded tables are re-indexed
//! to enforce this before any other code sees them.

use std::fmt;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::{ElementSet, MAX_ORDER};
use crate::error::{Error, Result};

/// Tables up to this order are checked for associativity on every triple;
/// larger ones on a random sample.
const FULL_ASSOC_LIMIT: usize = 64;
const ASSOC_SAMPLES: usize = 100_000;

#[derive(Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    names: Vec<String>,
}

impl GroupTable {
    /// Assembles a table from a product closure. `mul(0, i) = i` must hold.
    fn from_fn(order: usize, names: Vec<String>, op: impl Fn(usize, usize) -> usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidSpec("a group needs at least one element".into()));
        }
        if order > MAX_ORDER {
            return Err(Error::Capacity { what: "element-set", order, cap: MAX_ORDER });
        }
        let mut mul = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                mul.push(op(a, b) as u16);
            }
        }
        let mut inv = vec![0u16; order];
        for a in 0..order {
            let b = (0..order)
                .find(|&b| mul[a * order + b] == 0)
                .ok_or_else(|| Error::MalformedTable(format!("element {a} has no inverse")))?;
            inv[a] = b as u16;
        }
        Ok(Self { order, mul, inv, names })
    }

    /// The cyclic group `Z_n` with `i * j = (i + j) mod n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("Z0 is not a group; cyclic order must be at least 1".into()));
        }
        let names = (0..n).map(|k| if k == 0 { "e".to_string() } else { format!("g^{k}") }).collect();
        Self::from_fn(n, names, |i, j| (i + j) % n)
    }

    /// Componentwise product `G x H`. Element `(a, b)` has index `a * |H| + b`.
    pub fn direct_product(g: &GroupTable, h: &GroupTable) -> Result<Self> {
        let m = h.order;
        let order = g.order * m;
        if order > MAX_ORDER {
            return Err(Error::Capacity { what: "element-set", order, cap: MAX_ORDER });
        }
        let names = (0..order).map(|i| format!("({},{})", g.name(i / m), h.name(i % m))).collect();
        Self::from_fn(order, names, |x, y| g.mul(x / m, y / m) * m + h.mul(x % m, y % m))
    }

    /// The generalized dihedral group `Dih(A) = C2 ⋉ A`, with `x` acting on
    /// `A` by inversion.
    ///
    /// Element `(k, a)` has index `k * |A| + a`, so `A` embeds as the first
    /// `|A|` indices. Products follow `(k,a)(1,b) = (k,ab)` and
    /// `(k,a)(x,b) = (kx, a⁻¹b)`.
    pub fn dihedralize(a: &GroupTable) -> Result<Self> {
        if let Some((p, q)) = a.non_commuting_pair() {
            return Err(Error::NonAbelian { a: p, b: q });
        }
        let n = a.order;
        let names = (0..2 * n)
            .map(|i| if i < n { a.name(i).to_string() } else { format!("x·{}", a.name(i - n)) })
            .collect();
        Self::from_fn(2 * n, names, |p, q| {
            let (k1, x) = (p / n, p % n);
            let (k2, y) = (q / n, q % n);
            let coset = k1 ^ k2;
            let base = if k2 == 0 { a.mul(x, y) } else { a.mul(a.inv(x), y) };
            coset * n + base
        })
    }

    /// Parses the Cayley table text format: the order on the first line, one
    /// row of 0-based product indices per element, then optional
    /// `name <i> <string>` lines.
    pub fn from_table_text(text: &str) -> Result<Self> {
        let bad = |m: String| Error::MalformedTable(m);
        let mut lines = text.lines().map(str::trim).enumerate().filter(|(_, l)| !l.is_empty());

        let (_, first) = lines.next().ok_or_else(|| bad("empty table file".into()))?;
        let n: usize = first.parse().map_err(|_| bad(format!("first line must be the order, got {first:?}")))?;
        if n == 0 {
            return Err(bad("order must be at least 1".into()));
        }
        if n > MAX_ORDER {
            return Err(Error::Capacity { what: "element-set", order: n, cap: MAX_ORDER });
        }

        let mut raw = Vec::with_capacity(n * n);
        for row in 0..n {
            let (lineno, line) = lines.next().ok_or_else(|| bad(format!("expected {n} table rows, found {row}")))?;
            let before = raw.len();
            for tok in line.split_whitespace() {
                let v: usize = tok
                    .parse()
                    .map_err(|_| bad(format!("line {}: {tok:?} is not an index", lineno + 1)))?;
                if v >= n {
                    return Err(bad(format!("line {}: index {v} out of range for order {n}", lineno + 1)));
                }
                raw.push(v);
            }
            if raw.len() - before != n {
                return Err(bad(format!("line {}: row {row} has {} entries, expected {n}", lineno + 1, raw.len() - before)));
            }
        }

        let mut names: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
        for (lineno, line) in lines {
            let mut parts = line.splitn(3, char::is_whitespace);
            let (Some("name"), Some(idx), Some(label)) = (parts.next(), parts.next(), parts.next()) else {
                return Err(bad(format!("line {}: expected `name <i> <string>`", lineno + 1)));
            };
            let i: usize = idx.parse().map_err(|_| bad(format!("line {}: bad element index {idx:?}", lineno + 1)))?;
            if i >= n {
                return Err(bad(format!("line {}: element {i} out of range", lineno + 1)));
            }
            names[i] = label.trim().to_string();
        }

        let at = |a: usize, b: usize| raw[a * n + b];
        check_latin(n, at)?;
        let e = (0..n)
            .find(|&e| (0..n).all(|i| at(e, i) == i && at(i, e) == i))
            .ok_or_else(|| bad("no identity element".into()))?;
        check_associative(n, at)?;

        // Re-index so the identity sits at 0; other elements keep their order.
        let mut perm: Vec<usize> = Vec::with_capacity(n);
        perm.push(e);
        perm.extend((0..n).filter(|&i| i != e));
        let mut new_index = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            new_index[old] = new;
        }
        let names = perm.iter().map(|&old| names[old].clone()).collect();
        Self::from_fn(n, names, |a, b| new_index[at(perm[a], perm[b])])
    }

    pub fn load_table(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::TableLoad { path: path.to_path_buf(), message: e.to_string() })?;
        Self::from_table_text(&text).map_err(|e| match e {
            Error::MalformedTable(m) => Error::TableLoad { path: path.to_path_buf(), message: m },
            other => other,
        })
    }

    /// Serializes to the text format read by [`GroupTable::from_table_text`].
    pub fn to_table_text(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for a in 0..self.order {
            let row: Vec<String> = (0..self.order).map(|b| self.mul(a, b).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        for (i, name) in self.names.iter().enumerate() {
            out.push_str(&format!("name {i} {name}\n"));
        }
        out
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn elements(&self) -> ElementSet {
        ElementSet::full(self.order)
    }

    pub fn is_abelian(&self) -> bool {
        self.non_commuting_pair().is_none()
    }

    fn non_commuting_pair(&self) -> Option<(usize, usize)> {
        (0..self.order)
            .flat_map(|a| (a + 1..self.order).map(move |b| (a, b)))
            .find(|&(a, b)| self.mul(a, b) != self.mul(b, a))
    }

    /// Least `k >= 1` with `i^k = e`.
    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut x = i;
        while x != 0 {
            x = self.mul(x, i);
            k += 1;
        }
        k
    }

    /// Sorted multiset of element orders; a cheap isomorphism fingerprint.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.order).map(|i| self.element_order(i)).collect();
        v.sort_unstable();
        v
    }

    /// Smallest superset of `start` closed under right multiplication by each
    /// element of `gens`. When `start` is a subgroup generated by a subset of
    /// `gens`, this is `⟨start ∪ gens⟩`.
    pub fn close_under(&self, start: ElementSet, gens: &[usize]) -> ElementSet {
        let mut set = start;
        let mut frontier: Vec<usize> = start.iter().collect();
        while let Some(h) = frontier.pop() {
            for &g in gens {
                let p = self.mul(h, g);
                if set.insert(p) {
                    frontier.push(p);
                }
            }
        }
        set
    }

    /// The subgroup `⟨seed⟩`.
    pub fn generated_subgroup(&self, seed: &ElementSet) -> ElementSet {
        let gens: Vec<usize> = seed.iter().filter(|&g| g != 0).collect();
        self.close_under(ElementSet::singleton(0), &gens)
    }

    pub fn generates(&self, seed: &ElementSet) -> bool {
        self.generated_subgroup(seed).len() == self.order
    }

    pub fn is_subgroup(&self, set: &ElementSet) -> bool {
        set.contains(0) && set.iter().all(|a| set.iter().all(|b| set.contains(self.mul(a, b))))
    }

    /// Full structural check: identity at 0, Latin rows and columns,
    /// inverses, and associativity (exhaustive up to order 64, sampled above).
    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        let at = |a: usize, b: usize| self.mul(a, b);
        if (0..n).any(|i| at(0, i) != i || at(i, 0) != i) {
            return Err(Error::MalformedTable("index 0 is not the identity".into()));
        }
        check_latin(n, at)?;
        for i in 0..n {
            if at(i, self.inv(i)) != 0 || at(self.inv(i), i) != 0 {
                return Err(Error::MalformedTable(format!("inv[{i}] = {} is not an inverse", self.inv(i))));
            }
        }
        check_associative(n, at)
    }
}

fn check_latin(n: usize, at: impl Fn(usize, usize) -> usize) -> Result<()> {
    for a in 0..n {
        let mut row_seen = vec![usize::MAX; n];
        let mut col_seen = vec![usize::MAX; n];
        for b in 0..n {
            let r = at(a, b);
            if row_seen[r] != usize::MAX {
                return Err(Error::MalformedTable(format!(
                    "not a Latin square: {a}·{} = {a}·{b} = {r}",
                    row_seen[r]
                )));
            }
            row_seen[r] = b;
            let c = at(b, a);
            if col_seen[c] != usize::MAX {
                return Err(Error::MalformedTable(format!(
                    "not a Latin square: {}·{a} = {b}·{a} = {c}",
                    col_seen[c]
                )));
            }
            col_seen[c] = b;
        }
    }
    Ok(())
}

fn check_associative(n: usize, at: impl Fn(usize, usize) -> usize) -> Result<()> {
    let check = |a: usize, b: usize, c: usize| {
        let left = at(at(a, b), c);
        let right = at(a, at(b, c));
        if left != right {
            Err(Error::MalformedTable(format!(
                "not associative at ({a}, {b}, {c}): ({a}·{b})·{c} = {left} but {a}·({b}·{c}) = {right}"
            )))
        } else {
            Ok(())
        }
    };
    if n <= FULL_ASSOC_LIMIT {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    check(a, b, c)?;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x6e696d67656e);
        for _ in 0..ASSOC_SAMPLES {
            check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
        }
    }
    Ok(())
}

impl fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupTable").field("order", &self.order).finish_non_exhaustive()
    }
}
