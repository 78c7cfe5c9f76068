//! Hereditarily finite sets.
//!
//! A hereditarily finite (HF) set is a finite set whose elements are
//! themselves hereditarily finite sets. Every [`Hf`] value is kept in a
//! canonical form: its element list is strictly descending under the linear
//! order, so structural equality coincides with extensional set equality.
//!
//! The kernel also provides the Ackermann coding, a bijection between HF sets
//! and the natural numbers given by `code(x) = Σ { 2^code(y) | y ∈ x }`, and
//! the linear order `x < y ⟺ code(x) < code(y)`. The order is computed
//! structurally, without materializing codes: the element lists are compared
//! lexicographically, which matches comparing the binary expansions of the
//! codes bit by bit from the highest bit down.
//!
//! Values are interned, so equality is a pointer comparison and shared
//! subtrees are stored once. Interning is not observable: it only ever
//! identifies extensionally equal sets.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use dashmap::DashMap;
use num_bigint::BigUint;

struct Node {
    /// Structural hash, fixed at construction.
    hash: u64,
    /// Elements, strictly descending under the linear order.
    children: Box<[Hf]>,
}

/// A canonical hereditarily finite set.
///
/// Cloning is cheap (an `Arc` bump) and all operations are pure, so values
/// can be shared freely across threads.
#[derive(Clone)]
pub struct Hf(Arc<Node>);

static INTERNER: OnceLock<DashMap<u64, Vec<Hf>>> = OnceLock::new();

fn interner() -> &'static DashMap<u64, Vec<Hf>> {
    INTERNER.get_or_init(DashMap::new)
}

/// Interns an already canonical (strictly descending, duplicate-free)
/// element list. Every `Hf` constructor funnels through here, which is what
/// makes pointer equality coincide with extensional equality.
fn intern(children: Vec<Hf>) -> Hf {
    let mut hasher = DefaultHasher::new();
    hasher.write_usize(children.len());
    for c in &children {
        hasher.write_u64(c.0.hash);
    }
    let hash = hasher.finish();

    let mut bucket = interner().entry(hash).or_default();
    for existing in bucket.iter() {
        if existing.0.children.len() == children.len()
            && existing
                .0
                .children
                .iter()
                .zip(&children)
                .all(|(a, b)| Arc::ptr_eq(&a.0, &b.0))
        {
            return existing.clone();
        }
    }
    let hf = Hf(Arc::new(Node {
        hash,
        children: children.into_boxed_slice(),
    }));
    bucket.push(hf.clone());
    hf
}

impl Hf {
    /// The empty set `{}`, the unique set with code 0.
    pub fn empty() -> Hf {
        intern(Vec::new())
    }

    /// The canonical set whose elements are the distinct members of `xs`.
    /// Duplicates collapse and input order is irrelevant.
    pub fn from_elements<I: IntoIterator<Item = Hf>>(xs: I) -> Hf {
        let mut v: Vec<Hf> = xs.into_iter().collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v.dedup();
        intern(v)
    }

    /// `{x}`.
    pub fn singleton(x: Hf) -> Hf {
        Hf::from_elements([x])
    }

    /// The elements, strictly descending under the linear order.
    pub fn elements(&self) -> &[Hf] {
        &self.0.children
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.0.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.children.is_empty()
    }

    /// The element set as an ordered collection (ascending).
    pub fn to_set(&self) -> BTreeSet<Hf> {
        self.0.children.iter().cloned().collect()
    }

    /// Membership: is `x` an element of `self`?
    pub fn contains(&self, x: &Hf) -> bool {
        // Children are sorted descending, so the probe comparator ascends.
        self.0
            .children
            .binary_search_by(|c| x.cmp(c))
            .is_ok()
    }

    /// Subset: is every element of `self` an element of `other`?
    pub fn is_subset_of(&self, other: &Hf) -> bool {
        // Merge walk over the two descending element lists.
        let mut them = other.elements().iter();
        'outer: for c in self.elements() {
            for o in them.by_ref() {
                match c.cmp(o) {
                    Ordering::Equal => continue 'outer,
                    Ordering::Less => continue, // o still larger, keep scanning
                    Ordering::Greater => return false, // passed c's slot
                }
            }
            return false;
        }
        true
    }

    /// The Ackermann code `Σ { 2^code(y) | y ∈ self }` as an exact natural.
    ///
    /// Codes grow doubly exponentially in set depth; this is meant for
    /// display and for test oracles, never as a working representation.
    /// Panics if an element's code does not fit in `u64` (such a code could
    /// not be materialized anyway).
    pub fn code(&self) -> BigUint {
        let mut acc = BigUint::default();
        for c in self.elements() {
            let bit = u64::try_from(c.code())
                .expect("element code too large to materialize as an exponent");
            acc |= BigUint::from(1u8) << bit;
        }
        acc
    }

    /// The code as a `u64`, if it fits.
    pub fn small_code(&self) -> Option<u64> {
        let mut acc: u64 = 0;
        for c in self.elements() {
            let bit = c.small_code()?;
            if bit >= 64 {
                return None;
            }
            acc |= 1 << bit;
        }
        Some(acc)
    }

    /// The unique set with the given code: bit `p` of `n` set means the set
    /// with code `p` is an element.
    pub fn decode(n: &BigUint) -> Hf {
        let mut children = Vec::with_capacity(n.count_ones() as usize);
        // Highest bit first keeps the list descending without a sort.
        for p in (0..n.bits()).rev() {
            if n.bit(p) {
                children.push(Hf::decode(&BigUint::from(p)));
            }
        }
        intern(children)
    }

    /// `decode` for small codes.
    pub fn decode_u64(n: u64) -> Hf {
        Hf::decode(&BigUint::from(n))
    }

    /// The Kuratowski ordered pair `{{a},{a,b}}`.
    pub fn pair(a: Hf, b: Hf) -> Hf {
        let first = Hf::singleton(a.clone());
        let both = Hf::from_elements([a, b]);
        Hf::from_elements([first, both])
    }

    /// Inverts [`Hf::pair`]: `Some((a, b))` iff `self` is a Kuratowski pair.
    pub fn unpair(&self) -> Option<(Hf, Hf)> {
        match self.elements() {
            [only] => {
                // {{a}} is the pair (a, a).
                match only.elements() {
                    [a] => Some((a.clone(), a.clone())),
                    _ => None,
                }
            }
            [x, y] => {
                let (single, double) = match (x.len(), y.len()) {
                    (1, 2) => (x, y),
                    (2, 1) => (y, x),
                    _ => return None,
                };
                let a = &single.elements()[0];
                if !double.contains(a) {
                    return None;
                }
                let b = double.elements().iter().find(|e| *e != a)?;
                Some((a.clone(), b.clone()))
            }
            _ => None,
        }
    }

    /// First projection of a Kuratowski pair.
    pub fn pair_fst(&self) -> Option<Hf> {
        self.unpair().map(|(a, _)| a)
    }

    /// Second projection of a Kuratowski pair.
    pub fn pair_snd(&self) -> Option<Hf> {
        self.unpair().map(|(_, b)| b)
    }

    /// The von Neumann ordinal `n`, i.e. the set `{0, 1, …, n−1}`.
    pub fn ord_of(n: usize) -> Hf {
        let mut cur = Hf::empty();
        for _ in 0..n {
            let mut children = Vec::with_capacity(cur.len() + 1);
            children.push(cur.clone());
            children.extend(cur.elements().iter().cloned());
            // cur exceeds each of its own elements in the linear order, so
            // prepending keeps the list descending.
            cur = intern(children);
        }
        cur
    }

    /// Left injection into a tagged sum: `⟨0, a⟩`.
    pub fn inl(a: Hf) -> Hf {
        Hf::pair(Hf::ord_of(0), a)
    }

    /// Right injection into a tagged sum: `⟨1, b⟩`.
    pub fn inr(b: Hf) -> Hf {
        Hf::pair(Hf::ord_of(1), b)
    }

    /// Decomposes a tagged sum built by [`Hf::inl`]/[`Hf::inr`].
    pub fn as_sum(&self) -> Option<(SumTag, Hf)> {
        let (tag, payload) = self.unpair()?;
        if tag == Hf::ord_of(0) {
            Some((SumTag::Left, payload))
        } else if tag == Hf::ord_of(1) {
            Some((SumTag::Right, payload))
        } else {
            None
        }
    }

    /// Parses the brace syntax, e.g. `{{},{{}}}`, or `#n` for the set with
    /// code `n`. See [`parse_hf`].
    pub fn parse(s: &str) -> Result<Hf, HfParseError> {
        parse_hf(s)
    }
}

/// Which injection a tagged sum value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumTag {
    Left,
    Right,
}

impl PartialEq for Hf {
    fn eq(&self, other: &Self) -> bool {
        // Sound because every value is interned.
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Hf {}

impl Hash for Hf {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl Ord for Hf {
    /// The linear order `x < y ⟺ code(x) < code(y)`, computed without
    /// materializing codes.
    ///
    /// Both element lists are descending sequences of the codes' bit
    /// positions, so comparing them lexicographically finds the highest bit
    /// where the codes differ; if one list is a prefix of the other, the
    /// longer one has extra lower bits and is larger. The order extends both
    /// membership and the subset relation.
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        for (a, b) in self.0.children.iter().zip(other.0.children.iter()) {
            match a.cmp(b) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        self.0.children.len().cmp(&other.0.children.len())
    }
}

impl PartialOrd for Hf {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Hf {
    /// Brace rendering with elements in descending order, e.g. `{{{}},{}}`
    /// for the set with code 3.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.elements().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            fmt::Display::fmt(c, f)?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Hf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Error from [`parse_hf`], with the byte offset of the problem.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("offset {offset}: {message}")]
pub struct HfParseError {
    pub offset: usize,
    pub message: String,
}

fn err(offset: usize, message: impl Into<String>) -> HfParseError {
    HfParseError {
        offset,
        message: message.into(),
    }
}

/// Parses the textual set syntax:
///
/// ```text
/// set := '{' (set (',' set)*)? '}' | '#' digits
/// ```
///
/// `#n` abbreviates the set with code `n`. Whitespace is allowed around
/// punctuation. Duplicate elements are tolerated and collapse.
pub fn parse_hf(input: &str) -> Result<Hf, HfParseError> {
    let bytes = input.as_bytes();
    let mut pos = 0usize;
    let value = parse_value(bytes, &mut pos)?;
    skip_ws(bytes, &mut pos);
    if pos != bytes.len() {
        return Err(err(pos, "unexpected trailing input"));
    }
    Ok(value)
}

fn skip_ws(bytes: &[u8], pos: &mut usize) {
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn parse_value(bytes: &[u8], pos: &mut usize) -> Result<Hf, HfParseError> {
    skip_ws(bytes, pos);
    match bytes.get(*pos) {
        Some(b'{') => {
            *pos += 1;
            let mut elems = Vec::new();
            skip_ws(bytes, pos);
            if bytes.get(*pos) == Some(&b'}') {
                *pos += 1;
                return Ok(Hf::empty());
            }
            loop {
                elems.push(parse_value(bytes, pos)?);
                skip_ws(bytes, pos);
                match bytes.get(*pos) {
                    Some(b',') => *pos += 1,
                    Some(b'}') => {
                        *pos += 1;
                        return Ok(Hf::from_elements(elems));
                    }
                    Some(_) => return Err(err(*pos, "expected ',' or '}'")),
                    None => return Err(err(*pos, "unclosed '{'")),
                }
            }
        }
        Some(b'#') => {
            *pos += 1;
            let start = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            if *pos == start {
                return Err(err(start, "expected digits after '#'"));
            }
            let digits = std::str::from_utf8(&bytes[start..*pos]).unwrap();
            let n = BigUint::from_str(digits)
                .map_err(|_| err(start, "invalid number"))?;
            Ok(Hf::decode(&n))
        }
        Some(_) => Err(err(*pos, "expected '{' or '#'")),
        None => Err(err(*pos, "expected a set")),
    }
}

impl FromStr for Hf {
    type Err = HfParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_hf(s)
    }
}
