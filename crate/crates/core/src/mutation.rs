//! Deliberate defects that can be switched on per thread, so that the law
//! checkers can be shown to notice them.

use std::cell::Cell;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Substitution into a composite no longer skips its own bound name.
    CompositeGuard,
    /// Open boxes are accepted even when a face mentions its own direction.
    BoxFreshness,
    /// The down-filler of the detour filling forgets to move its result back
    /// from the frame it computes in.
    FillerUniformity,
}

impl Mutation {
    pub const ALL: [Mutation; 3] = [
        Mutation::CompositeGuard,
        Mutation::BoxFreshness,
        Mutation::FillerUniformity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Mutation::CompositeGuard => "composite-guard",
            Mutation::BoxFreshness => "box-freshness",
            Mutation::FillerUniformity => "filler-uniformity",
        }
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mutation::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::schema("mutation", format!("unknown mutation {s:?}")))
    }
}

thread_local! {
    static ACTIVE: Cell<Option<Mutation>> = const { Cell::new(None) };
}

pub fn is_active(m: Mutation) -> bool {
    ACTIVE.with(|c| c.get() == Some(m))
}

struct Restore(Option<Mutation>);

impl Drop for Restore {
    fn drop(&mut self) {
        ACTIVE.with(|c| c.set(self.0));
    }
}

/// Runs `f` with mutation `m` switched on for the current thread.
pub fn with_mutation<R>(m: Mutation, f: impl FnOnce() -> R) -> R {
    let _restore = Restore(ACTIVE.with(|c| c.replace(Some(m))));
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn switch_is_scoped() {
        assert!(!is_active(Mutation::BoxFreshness));
        with_mutation(Mutation::BoxFreshness, || {
            assert!(is_active(Mutation::BoxFreshness));
            assert!(!is_active(Mutation::CompositeGuard));
        });
        assert!(!is_active(Mutation::BoxFreshness));
    }

    #[test]
    fn names_parse() {
        for m in Mutation::ALL {
            assert_eq!(m.as_str().parse::<Mutation>().unwrap(), m);
        }
    }
}
