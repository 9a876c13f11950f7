//! Exact-arithmetic decisions on embeddings between mixed Lipschitz and
//! Besov spaces, with counterexample parameters when an embedding fails.

mod params;
mod rational;
mod rules;
mod verdict;

pub use num_rational::BigRational;
pub use params::{Direction, RationalParams};
pub use rational::{format_rational, parse_rational, ExtRational};
pub use rules::{decide_besov_to_lip, decide_cross_exponent, decide_lip_to_besov, decide_lip_to_lip, decide_third_index};
pub use verdict::{EmbeddingVerdict, Rule, Status, Witness};

#[cfg(test)]
mod tests;
