use alloc::vec::Vec;

use num_rational::BigRational;

use super::rational::ExtRational;

/// Exact parameters of an embedding query. Fields not used by a rule may be
/// left empty; `theta`-type fields admit infinity.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RationalParams {
    pub p: Option<ExtRational>,
    pub tau: Option<ExtRational>,
    pub theta: Option<ExtRational>,
    pub p0: Option<ExtRational>,
    pub p1: Option<ExtRational>,
    pub tau0: Option<ExtRational>,
    pub tau1: Option<ExtRational>,
    pub theta0: Option<ExtRational>,
    pub theta1: Option<ExtRational>,
    pub q: Option<ExtRational>,
    pub r: Option<ExtRational>,
    pub alpha: Option<Vec<BigRational>>,
    pub b: Option<Vec<BigRational>>,
    pub xi: Option<Vec<BigRational>>,
    pub alpha0: Option<Vec<BigRational>>,
    pub alpha1: Option<Vec<BigRational>>,
    pub b0: Option<Vec<BigRational>>,
    pub b1: Option<Vec<BigRational>>,
    /// Preferred violating axis for witnesses.
    pub j0: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// The Lipschitz space is the target.
    IntoLip,
    /// The Lipschitz space is the source.
    FromLip,
}
