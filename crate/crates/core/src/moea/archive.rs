use rand::Rng;

use crate::space::Split;

/// Cumulative heat and count per `(dimension, candidate)` player.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PlayerArchives {
    heat: Vec<Vec<f64>>,
    count: Vec<Vec<u64>>,
}

/// Player partition of one dimension. Candidate indices are sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlayerPartition {
    pub hot: Vec<usize>,
    pub normal: Vec<usize>,
    pub cold: Vec<usize>,
}

/// Offspring assembly pool.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pool {
    Hot,
    NonHot,
}

impl Pool {
    pub fn opposite(self) -> Pool {
        match self {
            Pool::Hot => Pool::NonHot,
            Pool::NonHot => Pool::Hot,
        }
    }
}

/// `⌈x⌉` tolerant of products like `0.3 * 10 = 3.0000000000000004`.
fn ceil_count(x: f64) -> usize {
    (x - 1e-9).ceil().max(0.0) as usize
}

impl PlayerArchives {
    /// Empty archives for dimensions of the given cardinalities.
    pub fn new(cardinalities: impl IntoIterator<Item = usize>) -> Self {
        let (heat, count) = cardinalities.into_iter().map(|c| (vec![0.0; c], vec![0; c])).unzip();
        Self { heat, count }
    }

    pub fn heat(&self, j: usize) -> &[f64] {
        &self.heat[j]
    }

    pub fn count(&self, j: usize) -> &[u64] {
        &self.count[j]
    }

    /// Credits `weight` and one occurrence to every active player of an
    /// individual. `genes[j]` is ignored where `active[j]` is false.
    pub fn credit(&mut self, genes: &[usize], active: &[bool], weight: f64) {
        for (j, (&g, &a)) in genes.iter().zip(active).enumerate() {
            if a {
                self.heat[j][g] += weight;
                self.count[j][g] += 1;
            }
        }
    }

    /// Follows interval splits: a split player's statistics are copied to
    /// both children. `splits` must be in ascending pre-split order per dim.
    pub fn apply_splits(&mut self, splits: &[Split]) {
        let mut shift = 0usize;
        let mut last_dim = usize::MAX;
        for s in splits {
            if s.dim != last_dim {
                shift = 0;
                last_dim = s.dim;
            }
            let k = s.interval + shift;
            let h = self.heat[s.dim][k];
            let c = self.count[s.dim][k];
            self.heat[s.dim].insert(k + 1, h);
            self.count[s.dim].insert(k + 1, c);
            shift += 1;
        }
    }

    /// Hot: top `⌈q|A|⌉` by heat. Cold: bottom `⌈p|A|⌉` by count among the
    /// rest. Ties go to the lower candidate index in both orders.
    pub fn partition(&self, j: usize, q: f64, p: f64) -> PlayerPartition {
        let heat = &self.heat[j];
        let count = &self.count[j];
        let n = heat.len();
        let n_hot = ceil_count(q * n as f64).min(n);
        let mut by_heat: Vec<usize> = (0..n).collect();
        by_heat.sort_by(|&a, &b| heat[b].partial_cmp(&heat[a]).expect("finite heat").then(a.cmp(&b)));
        let mut hot: Vec<usize> = by_heat[..n_hot].to_vec();
        let mut rest: Vec<usize> = by_heat[n_hot..].to_vec();
        let n_cold = ceil_count(p * n as f64).min(rest.len());
        rest.sort_by(|&a, &b| count[a].cmp(&count[b]).then(a.cmp(&b)));
        let mut cold: Vec<usize> = rest[..n_cold].to_vec();
        let mut normal: Vec<usize> = rest[n_cold..].to_vec();
        hot.sort_unstable();
        cold.sort_unstable();
        normal.sort_unstable();
        PlayerPartition { hot, normal, cold }
    }
}

impl PlayerPartition {
    pub fn non_hot(&self) -> Vec<usize> {
        let mut nh: Vec<usize> = self.normal.iter().chain(&self.cold).copied().collect();
        nh.sort_unstable();
        nh
    }

    /// Draws a candidate from `pool`: uniform over hot; cold weighted `o`
    /// and normal weighted 1 over non-hot. An empty pool falls back to
    /// uniform over all `cardinality` candidates.
    pub fn sample<R: Rng + ?Sized>(&self, pool: Pool, o: f64, cardinality: usize, rng: &mut R) -> usize {
        match pool {
            Pool::Hot if !self.hot.is_empty() => self.hot[rng.gen_range(0..self.hot.len())],
            Pool::NonHot if !(self.normal.is_empty() && self.cold.is_empty()) => {
                let total = self.normal.len() as f64 + o * self.cold.len() as f64;
                let mut u = rng.gen::<f64>() * total;
                for &a in &self.non_hot() {
                    let eta = if self.cold.contains(&a) { o } else { 1.0 };
                    if u < eta {
                        return a;
                    }
                    u -= eta;
                }
                // rounding left u at the upper edge
                *self.non_hot().last().expect("non-empty pool")
            }
            _ => rng.gen_range(0..cardinality),
        }
    }

    /// Probability of drawing `a` from the non-hot pool.
    pub fn non_hot_probability(&self, a: usize, o: f64) -> f64 {
        let total = self.normal.len() as f64 + o * self.cold.len() as f64;
        if self.cold.contains(&a) {
            o / total
        } else if self.normal.contains(&a) {
            1.0 / total
        } else {
            0.0
        }
    }
}
