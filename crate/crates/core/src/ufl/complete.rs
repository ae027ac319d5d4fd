use serde::{Deserialize, Serialize};

const LEVEL_EPS: f64 = 1e-12;

/// Fractional single-stage solution over facility copies in which every
/// positive assignment equals its copy's opening value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompleteSolution {
    /// Original facility of each copy.
    pub copy_of: Vec<usize>,
    pub y: Vec<f64>,
    /// `x[copy][client]`
    pub x: Vec<Vec<f64>>,
}

impl CompleteSolution {
    pub fn num_copies(&self) -> usize {
        self.copy_of.len()
    }

    pub fn is_complete(&self) -> bool {
        self.x
            .iter()
            .zip(&self.y)
            .all(|(row, &y)| row.iter().all(|&v| v == 0.0 || (v - y).abs() <= LEVEL_EPS))
    }
}

/// Splits facility `i` at the distinct positive values of `x[i][·]`.
///
/// With levels `l_1 < ... < l_m` a facility gets copies of size
/// `l_1, l_2 - l_1, ...` plus `y_i - l_m` if positive, and a client
/// assigned `l_t` is assigned to the first `t` copies. Opening and
/// assignment totals are unchanged. `y` is `y[i]`, `x` is `x[i][j]`.
pub fn make_complete(y: &[f64], x: &[Vec<f64>]) -> CompleteSolution {
    let mut out = CompleteSolution {
        copy_of: Vec::new(),
        y: Vec::new(),
        x: Vec::new(),
    };
    let nc = x.first().map_or(0, Vec::len);
    for (i, row) in x.iter().enumerate() {
        let cap = y[i];
        let mut levels: Vec<f64> = row
            .iter()
            .map(|&v| v.min(cap))
            .filter(|&v| v > LEVEL_EPS)
            .collect();
        levels.sort_by(f64::total_cmp);
        levels.dedup_by(|a, b| (*a - *b).abs() <= LEVEL_EPS);
        if cap - levels.last().copied().unwrap_or(0.0) > LEVEL_EPS {
            levels.push(cap);
        }
        let mut prev = 0.0;
        for &level in &levels {
            let size = level - prev;
            out.copy_of.push(i);
            out.y.push(size);
            out.x.push(
                (0..nc)
                    .map(|j| {
                        if row[j].min(cap) >= level - LEVEL_EPS {
                            size
                        } else {
                            0.0
                        }
                    })
                    .collect(),
            );
            prev = level;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    #[test]
    fn already_complete_is_identity() {
        let c = make_complete(&[0.5, 1.0], &[vec![0.5, 0.0], vec![0.0, 1.0]]);
        assert_eq!(c.copy_of, vec![0, 1]);
        assert_eq!(c.y, vec![0.5, 1.0]);
        assert_eq!(c.x, vec![vec![0.5, 0.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn splits_at_levels() {
        let c = make_complete(&[0.6], &[vec![0.6, 0.2]]);
        assert_eq!(c.copy_of, vec![0, 0]);
        assert!((c.y[0] - 0.2).abs() < 1e-15 && (c.y[1] - 0.4).abs() < 1e-15);
        assert_eq!(c.x[0], vec![c.y[0], c.y[0]]);
        assert_eq!(c.x[1], vec![c.y[1], 0.0]);
        assert!(c.is_complete());
    }

    #[test]
    fn single_pair_unchanged() {
        let c = make_complete(&[0.7], &[vec![0.7]]);
        assert_eq!((c.y.clone(), c.x.clone()), (vec![0.7], vec![vec![0.7]]));
    }

    #[test]
    fn slack_opening_gets_its_own_copy() {
        let c = make_complete(&[0.9], &[vec![0.3]]);
        assert_eq!(c.x[1], vec![0.0]);
        assert!((c.y.iter().sum::<f64>() - 0.9).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn totals_preserved(
            rows in prop::collection::vec((0.0f64..1.0, prop::collection::vec(0.0f64..1.0, 1..5)), 1..5)
        ) {
            let nc = rows[0].1.len();
            let y: Vec<f64> = rows.iter().map(|r| r.0).collect();
            let x: Vec<Vec<f64>> = rows
                .iter()
                .map(|(yi, r)| (0..nc).map(|j| r.get(j).copied().unwrap_or(0.0) * yi).collect())
                .collect();
            let c = make_complete(&y, &x);
            prop_assert!(c.is_complete());
            for i in 0..y.len() {
                let total: f64 = c.copy_of.iter().zip(&c.y).filter(|(&o, _)| o == i).map(|(_, v)| v).sum();
                prop_assert!((total - y[i]).abs() < 1e-9);
                for j in 0..nc {
                    let xs: f64 = (0..c.num_copies()).filter(|&t| c.copy_of[t] == i).map(|t| c.x[t][j]).sum();
                    prop_assert!((xs - x[i][j]).abs() < 1e-9);
                }
            }
        }
    }
}
