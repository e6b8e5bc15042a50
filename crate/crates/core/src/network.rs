//! Gossip matrices: who an agent asks for a recommendation at each phase
//! boundary, plus the graph metrics the convergence analysis depends on.

use std::collections::VecDeque;

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-stochastic `N x N` matrix; `P(n, q)` is the probability that agent
/// `n` receives its recommendation from agent `q`.
///
/// Diagonal entries are zero except in the single-agent matrix `[[1]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GossipMatrix<F> {
    rows: Vec<Vec<F>>,
}

impl<F: Scalar> GossipMatrix<F> {
    /// Validates a dense matrix.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("matrix has no rows".into()));
        }
        let tol = F::row_sum_tolerance(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|&p| !(p >= F::zero() && p <= F::one())) {
                return Err(Error::InvalidMatrix(format!(
                    "entry ({i}, {j}) = {} is not a probability",
                    row[j]
                )));
            }
            if n > 1 && row[i] != F::zero() {
                return Err(Error::InvalidMatrix(format!("diagonal entry ({i}, {i}) is nonzero")));
            }
            let sum = row.iter().fold(F::zero(), |acc, &p| acc + p);
            if (sum - F::one()).abs() > tol {
                return Err(Error::InvalidMatrix(format!("row {i} sums to {sum}, not 1")));
            }
        }
        Ok(Self { rows })
    }

    /// The lone agent of a one-agent system answers itself.
    pub fn single_agent() -> Self {
        Self {
            rows: vec![vec![F::one()]],
        }
    }

    pub fn complete(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewAgents {
                topology: "complete",
                min: 2,
                got: n,
            });
        }
        let p = F::one() / F::from_count(n as u64 - 1);
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { F::zero() } else { p }).collect())
            .collect();
        Ok(Self { rows })
    }

    /// Ring where each agent asks either neighbour with probability 1/2.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewAgents {
                topology: "cycle",
                min: 3,
                got: n,
            });
        }
        let half = F::lit(0.5);
        let mut rows = vec![vec![F::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[(i + 1) % n] = half;
            row[(i + n - 1) % n] = half;
        }
        Ok(Self { rows })
    }

    /// Leaves always ask `center`; the center asks a uniformly random leaf.
    pub fn star(n: usize, center: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewAgents {
                topology: "star",
                min: 3,
                got: n,
            });
        }
        if center >= n {
            return Err(Error::AgentOutOfRange {
                agent: center,
                agents: n,
            });
        }
        let leaf = F::one() / F::from_count(n as u64 - 1);
        let mut rows = vec![vec![F::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            if i == center {
                for (j, p) in row.iter_mut().enumerate() {
                    if j != center {
                        *p = leaf;
                    }
                }
            } else {
                row[center] = F::one();
            }
        }
        Ok(Self { rows })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<F>] {
        &self.rows
    }

    pub fn get(&self, from: usize, to: usize) -> F {
        self.rows[from][to]
    }

    /// Draws `q ~ P(n, .)`, consuming one uniform from `rng`.
    pub fn sample_neighbor<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> usize {
        let row = &self.rows[n];
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        let mut last_positive = n;
        for (q, &p) in row.iter().enumerate() {
            if p > F::zero() {
                acc += p.as_f64();
                last_positive = q;
                if u < acc {
                    return q;
                }
            }
        }
        // rounding left the row total a hair under u
        last_positive
    }

    fn successors(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[n]
            .iter()
            .enumerate()
            .filter(|&(_, &p)| p > F::zero())
            .map(|(q, _)| q)
    }

    /// Directed hop distances from `source` along positive entries; `None`
    /// for unreachable agents.
    fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.size()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for v in self.successors(u) {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_strongly_connected(&self) -> bool {
        (0..self.size()).all(|s| self.distances_from(s).iter().all(Option::is_some))
    }

    /// Longest shortest directed path between two distinct agents.
    pub fn diameter(&self) -> Result<usize> {
        let mut diameter = 0;
        for s in 0..self.size() {
            for d in self.distances_from(s) {
                diameter = diameter.max(d.ok_or(Error::NotStronglyConnected)?);
            }
        }
        Ok(diameter)
    }

    /// Smallest nonzero entry.
    pub fn p_min(&self) -> F {
        self.rows
            .iter()
            .flatten()
            .copied()
            .filter(|&p| p > F::zero())
            .fold(F::one(), F::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn row_sums_ok(m: &GossipMatrix<f64>) -> bool {
        m.rows().iter().all(|r| (r.iter().sum::<f64>() - 1.0).abs() <= 1e-12)
    }

    // Exhaustive oracle: enumerate every simple directed path.
    fn diameter_by_paths(m: &GossipMatrix<f64>) -> Option<usize> {
        let n = m.size();
        let mut best = vec![vec![usize::MAX; n]; n];
        fn walk(m: &GossipMatrix<f64>, path: &mut Vec<usize>, best: &mut Vec<Vec<usize>>) {
            let u = *path.last().unwrap();
            let start = path[0];
            let len = path.len() - 1;
            best[start][u] = best[start][u].min(len);
            for v in 0..m.size() {
                if m.get(u, v) > 0.0 && !path.contains(&v) {
                    path.push(v);
                    walk(m, path, best);
                    path.pop();
                }
            }
        }
        for s in 0..n {
            walk(m, &mut vec![s], &mut best);
        }
        let mut d = 0;
        for (s, row) in best.iter().enumerate() {
            for (t, &v) in row.iter().enumerate() {
                if s != t {
                    if v == usize::MAX {
                        return None;
                    }
                    d = d.max(v);
                }
            }
        }
        Some(d)
    }

    #[test]
    fn complete_graph() {
        let m = GossipMatrix::<f64>::complete(2).unwrap();
        assert_eq!(m.rows(), &[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let m = GossipMatrix::<f64>::complete(20).unwrap();
        assert_eq!(m.get(3, 7), 1.0 / 19.0);
        assert_eq!(m.get(3, 3), 0.0);
        assert!(row_sums_ok(&m));
        assert_eq!(m.diameter().unwrap(), 1);
        assert_eq!(m.p_min(), 1.0 / 19.0);
        assert!(GossipMatrix::<f64>::complete(1).is_err());
    }

    #[test]
    fn cycle_graph() {
        let m = GossipMatrix::<f64>::cycle(3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.get(i, j), if i == j { 0.0 } else { 0.5 });
            }
        }
        let m = GossipMatrix::<f64>::cycle(4).unwrap();
        assert_eq!((m.get(0, 1), m.get(0, 3), m.get(0, 2)), (0.5, 0.5, 0.0));
        assert_eq!(m.p_min(), 0.5);
        assert_eq!(GossipMatrix::<f64>::cycle(10).unwrap().diameter().unwrap(), 5);
        assert!(GossipMatrix::<f64>::cycle(2).is_err());
    }

    #[test]
    fn star_graph() {
        let m = GossipMatrix::<f64>::star(3, 0).unwrap();
        assert_eq!(m.rows(), &[vec![0.0, 0.5, 0.5], vec![1.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]]);
        assert_eq!(m.diameter().unwrap(), 2);
        let m = GossipMatrix::<f64>::star(10, 4).unwrap();
        assert_abs_diff_eq!(m.p_min(), 1.0 / 9.0, epsilon = 1e-15);
        assert!(row_sums_ok(&m));
        assert_eq!(m.get(0, 4), 1.0);
        assert!(GossipMatrix::<f64>::star(2, 0).is_err());
        assert!(GossipMatrix::<f64>::star(5, 5).is_err());
    }

    #[test]
    fn connectivity() {
        for m in [
            GossipMatrix::<f64>::complete(6).unwrap(),
            GossipMatrix::cycle(6).unwrap(),
            GossipMatrix::star(6, 2).unwrap(),
        ] {
            assert!(m.is_strongly_connected());
        }
        let pairs = GossipMatrix::<f64>::from_rows(vec![
            vec![0.0, 1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        assert!(!pairs.is_strongly_connected());
        assert_eq!(pairs.diameter(), Err(Error::NotStronglyConnected));
        // chain 0 -> 1 -> 2 with the sink forced to point backwards one step
        let chain = GossipMatrix::<f64>::from_rows(vec![
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![0.0, 1.0, 0.0],
        ])
        .unwrap();
        assert!(!chain.is_strongly_connected());
    }

    #[test]
    fn validation() {
        assert!(GossipMatrix::<f64>::from_rows(vec![vec![0.0, 0.9], vec![1.0, 0.0]]).is_err());
        assert!(GossipMatrix::<f64>::from_rows(vec![vec![0.5, 0.5], vec![1.0, 0.0]]).is_err());
        assert!(GossipMatrix::<f64>::from_rows(vec![vec![0.0, 1.0]]).is_err());
        assert!(GossipMatrix::<f64>::from_rows(vec![vec![0.0, 1.5], vec![1.0, 0.0]]).is_err());
        assert!(GossipMatrix::<f64>::from_rows(vec![vec![1.0]]).is_ok());
        assert_eq!(GossipMatrix::<f64>::single_agent().diameter().unwrap(), 0);
    }

    #[test]
    fn diameter_matches_path_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut checked = 0;
        for _ in 0..400 {
            let n = rng.gen_range(2..=6);
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|i| {
                    let mut w: Vec<f64> = (0..n)
                        .map(|j| if i != j && rng.gen_bool(0.4) { rng.gen_range(0.1..1.0) } else { 0.0 })
                        .collect();
                    if w.iter().all(|&x| x == 0.0) {
                        w[(i + 1) % n] = 1.0;
                    }
                    let s: f64 = w.iter().sum();
                    w.iter().map(|x| x / s).collect()
                })
                .collect();
            let Ok(m) = GossipMatrix::from_rows(rows) else { continue };
            assert_eq!(m.diameter().ok(), diameter_by_paths(&m));
            assert_eq!(m.is_strongly_connected(), diameter_by_paths(&m).is_some());
            checked += 1;
        }
        assert!(checked > 300);
    }

    #[test]
    fn sampling_single_entry_and_determinism() {
        let m = GossipMatrix::<f64>::star(5, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!((0..100).all(|_| m.sample_neighbor(0, &mut rng) == 2));
        let c = GossipMatrix::<f64>::complete(7).unwrap();
        let mut a = ChaCha8Rng::seed_from_u64(9);
        let mut b = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            assert_eq!(c.sample_neighbor(3, &mut a), c.sample_neighbor(3, &mut b));
        }
    }

    #[test]
    fn sampling_frequencies() {
        let n = 10;
        let draws = 100_000;
        let m = GossipMatrix::<f64>::complete(n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut counts = vec![0u64; n];
        for _ in 0..draws {
            counts[m.sample_neighbor(0, &mut rng)] += 1;
        }
        assert_eq!(counts[0], 0);
        let expected = draws as f64 / (n - 1) as f64;
        for &c in &counts[1..] {
            assert!((c as f64 / draws as f64 - 1.0 / 9.0).abs() < 0.01);
        }
        // chi-square, 8 degrees of freedom; 10^-6 critical value is about 42.7
        let chi2: f64 = counts[1..].iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        assert!(chi2 < 42.7, "chi2 = {chi2}");

        let star = GossipMatrix::<f64>::from_rows(vec![
            vec![0.0, 0.7, 0.2, 0.1],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.5, 0.5, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        let mut counts = [0u64; 4];
        for _ in 0..draws {
            counts[star.sample_neighbor(0, &mut rng)] += 1;
        }
        // 2 degrees of freedom; 10^-6 critical value is about 27.6
        let chi2: f64 = [0.7, 0.2, 0.1]
            .iter()
            .zip(&counts[1..])
            .map(|(p, &c)| {
                let e = p * draws as f64;
                (c as f64 - e).powi(2) / e
            })
            .sum();
        assert!(chi2 < 27.6, "chi2 = {chi2}");
    }
}
