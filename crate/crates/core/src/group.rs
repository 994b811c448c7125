//! Finite abelian groups presented as direct products of cyclic groups.
//!
//! Elements are stored as reduced residue vectors. The group carries a parity
//! split: an element is *even* when its last residue is even, which picks out
//! the index-2 subgroup `Z3 x 2Z(12s)` inside `Z3 x Z(12s)`.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{PrimInt, Unsigned};
use smallvec::SmallVec;
use thiserror::Error;

/// Integer type usable as a residue. Implemented for all unsigned primitives.
pub trait Residue:
    PrimInt + Unsigned + Integer + Hash + fmt::Debug + fmt::Display + FromStr + Send + Sync + 'static
{
}

impl<T> Residue for T where
    T: PrimInt
        + Unsigned
        + Integer
        + Hash
        + fmt::Debug
        + fmt::Display
        + FromStr
        + Send
        + Sync
        + 'static
{
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group needs at least one modulus")]
    NoModuli,
    #[error("modulus {0} is smaller than 2")]
    InvalidModulus(u64),
    #[error("element {element} does not belong to {group}")]
    Mismatch { element: String, group: String },
    #[error("parity is undefined in {0}: last modulus is odd")]
    ParityUndefined(String),
    #[error("cannot parse {what} from {text:?}")]
    Syntax { what: &'static str, text: String },
}

/// An element of a product of cyclic groups, stored componentwise reduced.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement<R> {
    residues: SmallVec<[R; 4]>,
}

impl<R: Residue> GroupElement<R> {
    pub fn residues(&self) -> &[R] {
        &self.residues
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }
}

impl<R: fmt::Debug> fmt::Debug for GroupElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.residues.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r:?}")?;
        }
        write!(f, ")")
    }
}

impl<R: fmt::Display> fmt::Display for GroupElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.residues.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// `Z(m1) x Z(m2) x ...`, with all moduli at least 2.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec<R> {
    moduli: SmallVec<[R; 4]>,
}

impl<R: fmt::Debug> fmt::Debug for GroupSpec<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.moduli.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "Z{m:?}")?;
        }
        Ok(())
    }
}

impl<R: fmt::Display> fmt::Display for GroupSpec<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.moduli.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "Z{m}")?;
        }
        Ok(())
    }
}

impl<R: Residue> FromStr for GroupSpec<R> {
    type Err = GroupError;

    /// Parses the compact form `Z3xZ36`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let syntax = || GroupError::Syntax {
            what: "group",
            text: s.to_string(),
        };
        let moduli = s
            .trim()
            .split('x')
            .map(|part| {
                part.strip_prefix('Z')
                    .and_then(|m| m.parse::<R>().ok())
                    .ok_or_else(syntax)
            })
            .collect::<Result<Vec<_>, _>>()?;
        GroupSpec::new(moduli)
    }
}

impl<R: Residue> GroupSpec<R> {
    pub fn new(moduli: impl IntoIterator<Item = R>) -> Result<Self, GroupError> {
        let moduli: SmallVec<[R; 4]> = moduli.into_iter().collect();
        if moduli.is_empty() {
            return Err(GroupError::NoModuli);
        }
        let two = R::one() + R::one();
        if let Some(m) = moduli.iter().find(|m| **m < two) {
            return Err(GroupError::InvalidModulus(m.to_u64().unwrap_or(0)));
        }
        Ok(GroupSpec { moduli })
    }

    /// `Z3 x Z(12s)`, the current group used for `K(36s)`.
    pub fn z3_z12s(s: u32) -> Result<Self, GroupError> {
        let last = R::from(12u64 * u64::from(s)).ok_or(GroupError::InvalidModulus(12 * s as u64))?;
        GroupSpec::new([R::from(3u8).unwrap(), last])
    }

    pub fn moduli(&self) -> &[R] {
        &self.moduli
    }

    pub fn order(&self) -> usize {
        self.moduli.iter().map(|m| m.to_usize().unwrap()).product()
    }

    pub fn identity(&self) -> GroupElement<R> {
        GroupElement {
            residues: self.moduli.iter().map(|_| R::zero()).collect(),
        }
    }

    /// Builds an element from arbitrary integers, reducing each component.
    pub fn element(&self, values: &[i64]) -> Result<GroupElement<R>, GroupError> {
        if values.len() != self.moduli.len() {
            return Err(self.mismatch(values));
        }
        let residues = values
            .iter()
            .zip(&self.moduli)
            .map(|(v, m)| R::from(v.rem_euclid(m.to_i64().unwrap())).unwrap())
            .collect();
        Ok(GroupElement { residues })
    }

    /// Builds an element from residues that must already be reduced.
    pub fn element_exact(&self, residues: &[R]) -> Result<GroupElement<R>, GroupError> {
        if residues.len() != self.moduli.len() || residues.iter().zip(&self.moduli).any(|(r, m)| r >= m) {
            return Err(self.mismatch(residues));
        }
        Ok(GroupElement {
            residues: residues.iter().copied().collect(),
        })
    }

    /// Parses `(a,b,...)`; residues must lie in range.
    pub fn parse_element(&self, text: &str) -> Result<GroupElement<R>, GroupError> {
        let inner = text
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| GroupError::Syntax {
                what: "element",
                text: text.to_string(),
            })?;
        let residues = inner
            .split(',')
            .map(|r| {
                r.trim().parse::<R>().map_err(|_| GroupError::Syntax {
                    what: "element",
                    text: text.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.element_exact(&residues)
    }

    pub fn contains(&self, a: &GroupElement<R>) -> bool {
        a.residues.len() == self.moduli.len() && a.residues.iter().zip(&self.moduli).all(|(r, m)| r < m)
    }

    fn check(&self, a: &GroupElement<R>) -> Result<(), GroupError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(self.mismatch(a.residues()))
        }
    }

    fn mismatch<T: fmt::Debug>(&self, values: &[T]) -> GroupError {
        GroupError::Mismatch {
            element: format!("{values:?}"),
            group: self.to_string(),
        }
    }

    pub fn add(&self, a: &GroupElement<R>, b: &GroupElement<R>) -> Result<GroupElement<R>, GroupError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub(crate) fn add_unchecked(&self, a: &GroupElement<R>, b: &GroupElement<R>) -> GroupElement<R> {
        let residues = a
            .residues
            .iter()
            .zip(&b.residues)
            .zip(&self.moduli)
            .map(|((&x, &y), &m)| if x >= m - y { x - (m - y) } else { x + y })
            .collect();
        GroupElement { residues }
    }

    pub fn sub(&self, a: &GroupElement<R>, b: &GroupElement<R>) -> Result<GroupElement<R>, GroupError> {
        self.check(b)?;
        self.add(a, &self.negate(b))
    }

    pub fn negate(&self, a: &GroupElement<R>) -> GroupElement<R> {
        let residues = a
            .residues
            .iter()
            .zip(&self.moduli)
            .map(|(&x, &m)| if x.is_zero() { x } else { m - x })
            .collect();
        GroupElement { residues }
    }

    /// `k * a` for a nonnegative multiplier.
    pub fn scale(&self, a: &GroupElement<R>, k: u64) -> GroupElement<R> {
        let residues = a
            .residues
            .iter()
            .zip(&self.moduli)
            .map(|(&x, &m)| {
                let m64 = m.to_u64().unwrap();
                let v = (x.to_u64().unwrap() as u128 * k as u128 % m64 as u128) as u64;
                R::from(v).unwrap()
            })
            .collect();
        GroupElement { residues }
    }

    pub fn is_identity(&self, a: &GroupElement<R>) -> bool {
        a.residues.iter().all(|r| r.is_zero())
    }

    /// Least `k >= 1` with `k * a = 0`.
    pub fn element_order(&self, a: &GroupElement<R>) -> u64 {
        a.residues.iter().zip(&self.moduli).fold(1u64, |acc, (&x, &m)| {
            let m = m.to_u64().unwrap();
            let x = x.to_u64().unwrap();
            acc.lcm(&(m / m.gcd(&x)))
        })
    }

    pub fn has_parity(&self) -> bool {
        self.moduli.last().map_or(false, |m| m.is_even())
    }

    pub fn is_even(&self, a: &GroupElement<R>) -> Result<bool, GroupError> {
        if !self.has_parity() {
            return Err(GroupError::ParityUndefined(self.to_string()));
        }
        self.check(a)?;
        Ok(a.residues.last().map_or(true, |r| r.is_even()))
    }

    /// Mixed-radix index with the first component varying fastest, so `(a,b)`
    /// in `Z3 x Zn` maps to `a + 3b`.
    pub fn index_of(&self, a: &GroupElement<R>) -> usize {
        let mut index = 0usize;
        let mut stride = 1usize;
        for (r, m) in a.residues.iter().zip(&self.moduli) {
            index += r.to_usize().unwrap() * stride;
            stride *= m.to_usize().unwrap();
        }
        index
    }

    pub fn from_index(&self, mut index: usize) -> GroupElement<R> {
        let residues = self
            .moduli
            .iter()
            .map(|m| {
                let m = m.to_usize().unwrap();
                let r = index % m;
                index /= m;
                R::from(r).unwrap()
            })
            .collect();
        GroupElement { residues }
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement<R>> + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }
}

/// Dense lookup tables over element indices, for hot loops.
#[derive(Debug, Clone)]
pub struct GroupTable {
    order: usize,
    sum: Vec<u32>,
    neg: Vec<u32>,
    elem_order: Vec<u32>,
    even: Vec<bool>,
}

impl GroupTable {
    pub const MAX_ORDER: usize = 4096;

    pub fn new<R: Residue>(spec: &GroupSpec<R>) -> Option<Self> {
        let order = spec.order();
        if order > Self::MAX_ORDER {
            return None;
        }
        let elems: Vec<_> = spec.elements().collect();
        let mut sum = vec![0u32; order * order];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                sum[i * order + j] = spec.index_of(&spec.add_unchecked(a, b)) as u32;
            }
        }
        let neg = elems.iter().map(|a| spec.index_of(&spec.negate(a)) as u32).collect();
        let elem_order = elems.iter().map(|a| spec.element_order(a) as u32).collect();
        let even = elems
            .iter()
            .map(|a| a.residues().last().map_or(true, |r| r.is_even()))
            .collect();
        Some(GroupTable {
            order,
            sum,
            neg,
            elem_order,
            even,
        })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.sum[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn element_order(&self, a: u32) -> u32 {
        self.elem_order[a as usize]
    }

    #[inline]
    pub fn is_even(&self, a: u32) -> bool {
        self.even[a as usize]
    }
}
