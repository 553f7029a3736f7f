//! Graded representations of restricted sl2 and truncated polynomial rings over F_p.

pub mod arquiver;
pub mod checks;
pub mod constructions;
pub mod gf;
pub mod grmod;
pub mod homological;
pub mod polynomial;
