//! Stable-rank reduction tables for "Real" and "Quaternionic" bundles over
//! finite Z/2-CW complexes of dimension `d`.

use std::fmt;

use serde::Serialize;

use crate::error::ClassifyError;

/// Where the classification of rank-`r` bundles reduces to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Reduction {
    /// A single isomorphism class.
    Trivial,
    /// No bundles of this rank exist.
    Empty,
    /// In bijection with `Pic_Q`, a torsor over `Pic_R`.
    PicQ,
    /// In bijection with `Pic_R`.
    PicR,
    /// Same classes as the given lower rank.
    Rank { rank: u32 },
    /// The rank is below the stable range; no reduction applies.
    Unstable,
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reduction::Trivial => write!(f, "trivial"),
            Reduction::Empty => write!(f, "empty"),
            Reduction::PicQ => write!(f, "Pic_Q ≅ Pic_R torsor"),
            Reduction::PicR => write!(f, "Pic_R"),
            Reduction::Rank { rank } => write!(f, "reduce to rank {rank}"),
            Reduction::Unstable => write!(f, "unstable"),
        }
    }
}

/// Reduction for "Quaternionic" bundles of the given rank.
///
/// Odd ranks need an empty fixed set; they exist only when `Pic_Q` is
/// nonempty.
pub fn stable_rank_reduce(d: u32, rank: u32, fixed_empty: bool, pic_q_nonempty: bool) -> Result<Reduction, ClassifyError> {
    if rank == 0 {
        return Ok(Reduction::Trivial);
    }
    if rank % 2 == 0 {
        let m = rank / 2;
        return Ok(match d {
            0 | 1 => Reduction::Trivial,
            2..=5 => Reduction::Rank { rank: 2 },
            _ if 4 * m >= d + 3 => Reduction::Rank { rank: 2 * ((d + 2) / 4) },
            _ => Reduction::Unstable,
        });
    }
    if !fixed_empty {
        return Err(ClassifyError::OddRankWithFixedPoints);
    }
    if !pic_q_nonempty {
        return Ok(Reduction::Empty);
    }
    let m = (rank - 1) / 2;
    Ok(match d {
        0 | 1 => Reduction::Trivial,
        2 | 3 => Reduction::PicQ,
        4 | 5 => Reduction::Rank { rank: 2 },
        // m ≥ (d - 1)/4
        _ if 4 * m + 1 >= d => Reduction::Rank { rank: d / 2 },
        _ => Reduction::Unstable,
    })
}

/// Reduction for "Real" bundles, assuming the fixed set is empty or
/// zero-dimensional.
pub fn real_stable_rank_reduce(d: u32, rank: u32) -> Reduction {
    match d {
        _ if rank == 0 => Reduction::Trivial,
        0 | 1 => Reduction::Trivial,
        2 | 3 => Reduction::PicR,
        // m ≥ (d + 1)/2
        _ if 2 * rank > d => Reduction::Rank { rank: d / 2 },
        _ => Reduction::Unstable,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_cases() {
        assert_eq!(stable_rank_reduce(2, 6, false, false).unwrap(), Reduction::Rank { rank: 2 });
        assert_eq!(stable_rank_reduce(1, 4, false, true).unwrap(), Reduction::Trivial);
        assert_eq!(stable_rank_reduce(3, 3, true, true).unwrap(), Reduction::PicQ);
        assert!(stable_rank_reduce(3, 3, false, true).is_err());
        assert_eq!(stable_rank_reduce(3, 5, true, false).unwrap(), Reduction::Empty);
        assert_eq!(stable_rank_reduce(9, 4, false, false).unwrap(), Reduction::Unstable);
        assert_eq!(stable_rank_reduce(9, 6, false, false).unwrap(), Reduction::Rank { rank: 4 });
        assert_eq!(real_stable_rank_reduce(3, 7), Reduction::PicR);
        assert_eq!(real_stable_rank_reduce(6, 4), Reduction::Rank { rank: 3 });
    }
}
