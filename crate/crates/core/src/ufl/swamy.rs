use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Filtered view of one client's assignment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilteredClient {
    /// Facilities of the sorted prefix first reaching mass `gamma`.
    pub near: Vec<usize>,
    /// `x / gamma` on `near`.
    pub x: Vec<f64>,
    /// Average distance of the first `gamma` units of mass.
    pub c_gamma: f64,
    /// Distance of the last facility in `near`.
    pub r_gamma: f64,
}

/// Keeps, per client, the nearest facilities carrying `gamma` of its mass.
///
/// `y` is indexed by facility, `x[i][j]` and `dist[i][j]` by facility and
/// client. Facilities are sorted by distance, ties to the lower id.
/// Returns the filtered clients and `ŷ = min(1, y / gamma)`.
pub fn swamy_filter(
    y: &[f64],
    x: &[Vec<f64>],
    dist: &[Vec<f64>],
    gamma: f64,
) -> Result<(Vec<FilteredClient>, Vec<f64>)> {
    if !(1.0 / 3.0..1.0).contains(&gamma) {
        return Err(Error::Parameter(format!(
            "gamma = {gamma} must lie in [1/3, 1)"
        )));
    }
    let nc = x.first().map_or(0, Vec::len);
    let mut clients = Vec::with_capacity(nc);
    for j in 0..nc {
        let xc: Vec<f64> = x.iter().map(|r| r[j]).collect();
        let dc: Vec<f64> = dist.iter().map(|r| r[j]).collect();
        clients.push(filter_column(&xc, &dc, gamma).map_err(|e| match e {
            Error::Structure(m) => Error::Structure(format!("client {j}: {m}")),
            other => other,
        })?);
    }
    let y_hat = y.iter().map(|v| (v / gamma).min(1.0)).collect();
    Ok((clients, y_hat))
}

/// Filters one assignment column `x[i]` with distances `dist[i]`.
pub(crate) fn filter_column(x: &[f64], dist: &[f64], gamma: f64) -> Result<FilteredClient> {
    let mut order: Vec<usize> = (0..x.len()).filter(|&i| x[i] > 0.0).collect();
    order.sort_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(a.cmp(&b)));
    let mut near = Vec::new();
    let mut mass = 0.0;
    let mut weighted = 0.0;
    for &i in &order {
        let take = x[i].min(gamma - mass);
        weighted += take * dist[i];
        mass += x[i];
        near.push(i);
        if mass >= gamma - 1e-12 {
            let r_gamma = dist[i];
            return Ok(FilteredClient {
                x: near.iter().map(|&f| x[f] / gamma).collect(),
                near,
                c_gamma: weighted / gamma,
                r_gamma,
            });
        }
    }
    Err(Error::Structure(format!(
        "assignment mass {mass} below {gamma}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_facility() {
        let (c, y) = swamy_filter(&[1.0], &[vec![1.0]], &[vec![2.5]], 0.5).unwrap();
        assert_eq!(c[0].near, vec![0]);
        assert_eq!((c[0].c_gamma, c[0].r_gamma), (2.5, 2.5));
        assert_eq!(y, vec![1.0]);
    }

    #[test]
    fn three_facility_prefix() {
        let x = [vec![0.3], vec![0.3], vec![0.4]];
        let d = [vec![1.0], vec![2.0], vec![3.0]];
        let (c, _) = swamy_filter(&[0.3, 0.3, 0.4], &x, &d, 0.5).unwrap();
        assert_eq!(c[0].near, vec![0, 1]);
        assert!((c[0].c_gamma - 1.4).abs() < 1e-12);
        assert_eq!(c[0].r_gamma, 2.0);
        assert!((c[0].x[0] - 0.6).abs() < 1e-12);
    }

    #[test]
    fn gamma_near_one_keeps_support() {
        let x = [vec![0.3], vec![0.3], vec![0.4]];
        let d = [vec![1.0], vec![2.0], vec![3.0]];
        let (c, _) = swamy_filter(&[0.3, 0.3, 0.4], &x, &d, 1.0 - 1e-9).unwrap();
        assert_eq!(c[0].near, vec![0, 1, 2]);
        assert!((c[0].c_gamma - 2.1).abs() < 1e-6);
    }

    #[test]
    fn gamma_range() {
        assert!(swamy_filter(&[1.0], &[vec![1.0]], &[vec![1.0]], 0.3).is_err());
        assert!(swamy_filter(&[1.0], &[vec![1.0]], &[vec![1.0]], 1.0).is_err());
    }
}
