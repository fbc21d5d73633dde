use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::smith::{eliminate, Track};

/// A finitely generated abelian group `Z^free_rank + Z/d_1 + ... + Z/d_k`
/// in invariant-factor form (`d_i >= 2`, `d_i | d_{i+1}`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FGAbelianGroup {
    pub free_rank: usize,
    #[serde(with = "bigint_strings")]
    pub torsion: Vec<BigInt>,
}

impl FGAbelianGroup {
    pub fn trivial() -> Self {
        FGAbelianGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FGAbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(order: u64) -> Self {
        Self::from_orders(0, &[BigInt::from(order)])
    }

    /// Canonical form of `Z^free_rank + sum Z/c_i` for arbitrary `c_i`.
    ///
    /// Orders `0` contribute free summands, orders `±1` vanish.
    pub fn from_orders(free_rank: usize, orders: &[BigInt]) -> Self {
        let mut free = free_rank;
        let mut finite = Vec::new();
        for c in orders {
            if c.is_zero() {
                free += 1;
            } else if !c.abs().is_one() {
                finite.push(c.abs());
            }
        }
        let n = finite.len();
        let diag = IntMatrix::diagonal(n, n, &finite);
        let torsion = eliminate(&diag, Track::default())
            .invariants
            .into_iter()
            .filter(|d| !d.is_one())
            .collect();
        FGAbelianGroup {
            free_rank: free,
            torsion,
        }
    }

    pub fn direct_sum(&self, other: &FGAbelianGroup) -> Self {
        let orders: Vec<BigInt> = self.torsion.iter().chain(&other.torsion).cloned().collect();
        Self::from_orders(self.free_rank + other.free_rank, &orders)
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        self.torsion.iter().all(|d| *d >= BigInt::from(2))
            && self.torsion.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
    }
}

impl fmt::Display for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        // Repeated factors are grouped: Z/2 + Z/2 prints as (Z/2)^2.
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|x| *x == d).count();
            if run == 1 {
                parts.push(format!("Z/{d}"));
            } else {
                parts.push(format!("(Z/{d})^{run}"));
            }
            i += run;
        }
        write!(f, "{}", parts.join(" + "))
    }
}

pub(crate) mod bigint_strings {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    // Small values serialize as JSON numbers, larger ones as decimal strings.
    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Small(i64),
        Big(String),
    }

    fn to_repr(v: &BigInt) -> Repr {
        i64::try_from(v).map_or_else(|_| Repr::Big(v.to_string()), Repr::Small)
    }

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(to_repr).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let reprs = Vec::<Repr>::deserialize(d)?;
        reprs
            .into_iter()
            .map(|r| match r {
                Repr::Small(x) => Ok(BigInt::from(x)),
                Repr::Big(s) => s.parse().map_err(serde::de::Error::custom),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn canonicalizes_coprime_factors() {
        let g = FGAbelianGroup::from_orders(1, &big(&[2, 3, 1, 0]));
        assert_eq!(g.free_rank, 2);
        assert_eq!(g.torsion, big(&[6]));
        assert!(g.is_canonical());
    }

    #[test]
    fn direct_sum_merges() {
        let a = FGAbelianGroup::cyclic(4);
        let b = FGAbelianGroup::from_orders(1, &big(&[6]));
        let s = a.direct_sum(&b);
        assert_eq!(s, FGAbelianGroup::from_orders(1, &big(&[2, 12])));
        assert_eq!(s.to_string(), "Z + Z/2 + Z/12");
    }

    #[test]
    fn rendering() {
        assert_eq!(FGAbelianGroup::trivial().to_string(), "0");
        assert_eq!(FGAbelianGroup::free(2).to_string(), "Z^2");
        assert_eq!(
            FGAbelianGroup::from_orders(0, &big(&[2, 2])).to_string(),
            "(Z/2)^2"
        );
    }

    #[test]
    fn json_round_trip() {
        let g = FGAbelianGroup::from_orders(3, &big(&[2, 4]));
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"free_rank":3,"torsion":[2,4]}"#);
        assert_eq!(serde_json::from_str::<FGAbelianGroup>(&s).unwrap(), g);
    }
}
