//! Memory states: total maps from natural addresses to natural values.
//!
//! A state stores an explicit finite footprint; every address outside the
//! footprint reads as zero. Bindings to zero are never stored, so two states
//! compare equal exactly when they agree on every address.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

/// Natural numbers, unbounded.
pub type Nat = BigUint;

/// Subtraction truncated at zero.
pub fn monus(a: &Nat, b: &Nat) -> Nat {
    if b <= a {
        a - b
    } else {
        Nat::zero()
    }
}

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct MemState {
    bindings: BTreeMap<Nat, Nat>,
}

impl MemState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Value stored at `addr`, zero when unbound.
    pub fn get(&self, addr: &Nat) -> Nat {
        self.bindings.get(addr).cloned().unwrap_or_default()
    }

    pub fn get_u64(&self, addr: u64) -> Nat {
        self.get(&Nat::from(addr))
    }

    /// `σ[i/n]`: a new state equal to `self` except that `addr` holds `value`.
    pub fn update(&self, addr: Nat, value: Nat) -> MemState {
        let mut next = self.clone();
        next.set(addr, value);
        next
    }

    /// In-place form of [`MemState::update`], used by the interpreter on
    /// states it owns.
    pub fn set(&mut self, addr: Nat, value: Nat) {
        if value.is_zero() {
            self.bindings.remove(&addr);
        } else {
            self.bindings.insert(addr, value);
        }
    }

    /// Nonzero bindings in ascending address order.
    pub fn iter(&self) -> impl Iterator<Item = (&Nat, &Nat)> {
        self.bindings.iter()
    }

    pub fn footprint_len(&self) -> usize {
        self.bindings.len()
    }
}

impl<A: Into<Nat>, V: Into<Nat>> FromIterator<(A, V)> for MemState {
    fn from_iter<I: IntoIterator<Item = (A, V)>>(iter: I) -> Self {
        let mut state = MemState::new();
        for (a, v) in iter {
            state.set(a.into(), v.into());
        }
        state
    }
}

impl fmt::Display for MemState {
    /// `a=v` pairs separated by spaces; the all-zero state prints as `{}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bindings.is_empty() {
            return write!(f, "{{}}");
        }
        let mut first = true;
        for (a, v) in &self.bindings {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{a}={v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for MemState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MemState{{{self}}}")
    }
}
