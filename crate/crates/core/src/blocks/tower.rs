use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::arith::divisors;
use crate::error::{Error, Result};

/// Largest order of a transitive iterated wreath product of cyclic groups
/// of degree `n`: `c(1) = 1`, `c(n) = max_{b | n, b > 1} b * c(n/b)^b`.
pub fn max_cyclic_tower_order(n: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Domain("c(n) needs n >= 1".into()));
    }
    let mut memo: BTreeMap<u64, BigUint> = BTreeMap::new();
    memo.insert(1, BigUint::one());
    for m in divisors(n).into_iter().filter(|&m| m > 1) {
        let best = divisors(m)
            .into_iter()
            .filter(|&b| b > 1)
            .map(|b| memo[&(m / b)].pow(b as u32) * b)
            .max()
            .expect("m > 1 has a divisor > 1");
        memo.insert(m, best);
    }
    Ok(memo.remove(&n).unwrap())
}

#[derive(Clone, Debug, Serialize)]
pub struct CyclicTowerRow {
    pub n: u64,
    pub c: String,
    pub log2_c: u64,
    pub within_power_bound: bool,
}

/// `c(n)` for `1..=max`, each checked against `2^(n-1)`.
#[derive(Clone, Debug, Serialize)]
pub struct CyclicTowerTable {
    pub rows: Vec<CyclicTowerRow>,
}

impl CyclicTowerTable {
    pub fn build(max: u64) -> Result<Self> {
        let rows = (1..=max)
            .map(|n| {
                let c = max_cyclic_tower_order(n)?;
                Ok(CyclicTowerRow {
                    n,
                    log2_c: c.bits() - 1,
                    within_power_bound: c <= BigUint::one() << (n - 1),
                    c: c.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rows })
    }

    pub fn all_within_bound(&self) -> bool {
        self.rows.iter().all(|r| r.within_power_bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(max_cyclic_tower_order(1).unwrap(), BigUint::from(1u32));
        assert_eq!(max_cyclic_tower_order(4).unwrap(), BigUint::from(8u32));
        assert_eq!(max_cyclic_tower_order(6).unwrap(), BigUint::from(24u32));
        assert_eq!(max_cyclic_tower_order(7).unwrap(), BigUint::from(7u32));
        assert!(max_cyclic_tower_order(0).is_err());
    }

    #[test]
    fn two_powers_meet_the_bound() {
        for k in 0..=5u32 {
            let n = 1u64 << k;
            assert_eq!(max_cyclic_tower_order(n).unwrap(), BigUint::one() << (n - 1));
        }
    }

    #[test]
    fn table_respects_bound() {
        let t = CyclicTowerTable::build(64).unwrap();
        assert!(t.all_within_bound());
        assert_eq!(t.rows[15].c, (1u64 << 15).to_string());
    }
}
