//! Size guards. Limits are per thread and can be overridden for a scope.

use crate::error::{Error, Result};
use std::cell::Cell;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Ceiling on table cells of any single constructed algebra.
    pub max_cells: u64,
    /// Ceiling on enumerated assignments, candidate maps or search nodes.
    pub max_enum: u64,
    /// Ceiling on total carrier size for congruence enumeration.
    pub max_congruence_elems: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_cells: 1_000_000,
            max_enum: 1_000_000,
            max_congruence_elems: 12,
        }
    }
}

/// Running totals, reported by the CLI.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Usage {
    pub cells_built: u64,
    pub maps_enumerated: u64,
}

thread_local! {
    static CURRENT: Cell<Limits> = Cell::new(Limits::default());
    static USAGE: Cell<Usage> = Cell::new(Usage::default());
}

pub fn current() -> Limits {
    CURRENT.with(|c| c.get())
}

/// Runs `f` with `limits` in force, restoring the previous limits afterwards.
pub fn with_limits<R>(limits: Limits, f: impl FnOnce() -> R) -> R {
    struct Restore(Limits);
    impl Drop for Restore {
        fn drop(&mut self) {
            CURRENT.with(|c| c.set(self.0));
        }
    }
    let _restore = Restore(CURRENT.with(|c| c.replace(limits)));
    f()
}

pub fn usage() -> Usage {
    USAGE.with(|u| u.get())
}

pub fn reset_usage() {
    USAGE.with(|u| u.set(Usage::default()));
}

pub fn check_cells(what: &'static str, needed: u128) -> Result<()> {
    let limit = current().max_cells;
    if needed > limit as u128 {
        return Err(Error::Resource { what, needed, limit });
    }
    USAGE.with(|u| {
        let mut v = u.get();
        v.cells_built = v.cells_built.saturating_add(needed as u64);
        u.set(v);
    });
    Ok(())
}

pub fn check_enum(what: &'static str, needed: u128) -> Result<()> {
    let limit = current().max_enum;
    if needed > limit as u128 {
        return Err(Error::Resource { what, needed, limit });
    }
    USAGE.with(|u| {
        let mut v = u.get();
        v.maps_enumerated = v.maps_enumerated.saturating_add(needed as u64);
        u.set(v);
    });
    Ok(())
}

/// Incremental counter for searches whose size is not known in advance.
pub struct Budget {
    what: &'static str,
    used: u64,
    limit: u64,
}

impl Budget {
    pub fn new(what: &'static str) -> Self {
        Budget { what, used: 0, limit: current().max_enum }
    }

    pub fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            return Err(Error::Resource {
                what: self.what,
                needed: self.used as u128,
                limit: self.limit,
            });
        }
        Ok(())
    }
}

impl Drop for Budget {
    fn drop(&mut self) {
        let used = self.used;
        USAGE.with(|u| {
            let mut v = u.get();
            v.maps_enumerated = v.maps_enumerated.saturating_add(used);
            u.set(v);
        });
    }
}

/// Product of sizes as u128, saturating.
pub fn product_size<I: IntoIterator<Item = usize>>(sizes: I) -> u128 {
    sizes
        .into_iter()
        .fold(1u128, |acc, s| acc.saturating_mul(s as u128))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scoped_override_restores() {
        let before = current();
        let tight = Limits { max_cells: 3, ..before };
        with_limits(tight, || {
            assert!(check_cells("t", 4).is_err());
            assert!(check_cells("t", 3).is_ok());
        });
        assert_eq!(current(), before);
    }

    #[test]
    fn budget_trips() {
        with_limits(Limits { max_enum: 2, ..Limits::default() }, || {
            let mut b = Budget::new("nodes");
            assert!(b.tick().is_ok());
            assert!(b.tick().is_ok());
            assert!(matches!(b.tick(), Err(Error::Resource { .. })));
        });
    }
}
