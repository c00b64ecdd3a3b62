use crate::error::{Error, Result};

/// Cap on the estimated loop count of an exhaustive computation.
///
/// Every exhaustive operation computes its cost estimate up front and refuses
/// to start when the estimate exceeds the cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub limit: u128,
}

impl Budget {
    /// Default for enumerations of polynomials or field elements.
    pub const ENUMERATION: Budget = Budget { limit: 10_000_000 };
    /// Default for measure evaluation; covers l <= 3, N <= 32, F <= 12.
    pub const MEASURE: Budget = Budget {
        limit: 1_000_000_000,
    };

    pub fn new(limit: u128) -> Self {
        Budget { limit }
    }

    pub fn unlimited() -> Self {
        Budget { limit: u128::MAX }
    }

    pub fn check(&self, what: &str, estimate: u128) -> Result<()> {
        if estimate > self.limit {
            Err(Error::Budget {
                what: what.to_string(),
                estimate,
                limit: self.limit,
                certified: None,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::MEASURE
    }
}

pub(crate) fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

pub(crate) fn pow_sat(base: u128, exp: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}
