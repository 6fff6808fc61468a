//! Lower bounds on the cost of covering the rows still open at a node.
//!
//! All three bounds are valid for any restriction of the row set, so each is
//! evaluated on the full open set and on every stratum (rows of one Pauli
//! weight), keeping the largest value.

use super::matrix::Matrix;
use super::Certificate;
use crate::bits::ones;

const EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct NodeBound {
    pub value: f64,
    pub kind: Certificate,
}

/// Scratch space for repeated bound evaluation on one matrix.
pub(crate) struct Bounder {
    /// `counts[s * cols + j]`: open rows of stratum `s` in column `j`; the last
    /// stratum slot holds the count over all open rows.
    counts: Vec<u32>,
    active: Vec<u32>,
    min_price: Vec<f64>,
    sorted: Vec<(f64, f64)>,
    histogram: Vec<u32>,
    strata: usize,
}

impl Bounder {
    pub fn new(m: &Matrix) -> Self {
        let strata = m.strata.len() + 1;
        Bounder {
            counts: vec![0; strata * m.cols],
            active: Vec::with_capacity(m.cols),
            min_price: vec![f64::INFINITY; m.rows],
            sorted: Vec::with_capacity(m.cols),
            histogram: Vec::new(),
            strata,
        }
    }

    /// Largest of the bounds, stopping early once `stop_at` is reached.
    pub fn bound(&mut self, m: &Matrix, open: &[u64], avail: &[u64], stop_at: f64) -> NodeBound {
        self.count(m, open, avail);
        let all = self.strata - 1;
        let open_total: usize = open.iter().map(|w| w.count_ones() as usize).sum();
        let mut best = NodeBound {
            value: self.knapsack(m, all, open_total),
            kind: Certificate::MaxSetSize,
        };
        if best.value >= stop_at {
            return best;
        }
        let stratum_sizes: Vec<usize> = m
            .strata
            .iter()
            .map(|mask| mask.iter().zip(open).map(|(a, b)| (a & b).count_ones() as usize).sum())
            .collect();
        for (s, &size) in stratum_sizes.iter().enumerate() {
            if size == 0 {
                continue;
            }
            let v = self.knapsack(m, s, size);
            if v > best.value + EPS {
                best = NodeBound {
                    value: v,
                    kind: Certificate::WeightStratified,
                };
                if v >= stop_at {
                    return best;
                }
            }
        }
        let v = self.dual(m, open, None, all);
        if v > best.value + EPS {
            best = NodeBound {
                value: v,
                kind: Certificate::Fractional,
            };
            if v >= stop_at {
                return best;
            }
        }
        for (s, &size) in stratum_sizes.iter().enumerate() {
            if size == 0 {
                continue;
            }
            let v = self.dual(m, open, Some(&m.strata[s]), s);
            if v > best.value + EPS {
                best = NodeBound {
                    value: v,
                    kind: Certificate::Fractional,
                };
                if v >= stop_at {
                    return best;
                }
            }
        }
        best
    }

    fn count(&mut self, m: &Matrix, open: &[u64], avail: &[u64]) {
        let cols = m.cols;
        self.active.clear();
        for j in ones(avail) {
            let col = m.col(j);
            let mut total = 0u32;
            for s in 0..self.strata - 1 {
                self.counts[s * cols + j] = 0;
            }
            for (w, (&c, &u)) in col.iter().zip(open).enumerate() {
                let x = c & u;
                if x == 0 {
                    continue;
                }
                total += x.count_ones();
                for (s, mask) in m.strata.iter().enumerate() {
                    self.counts[s * cols + j] += (x & mask[w]).count_ones();
                }
            }
            self.counts[(self.strata - 1) * cols + j] = total;
            if total > 0 {
                self.active.push(j as u32);
            }
        }
    }

    /// Cheapest way to collect `demand` row-hits in stratum `s` when columns
    /// are only charged for their hit counts. Exact for unit costs, the
    /// fractional relaxation otherwise.
    fn knapsack(&mut self, m: &Matrix, s: usize, demand: usize) -> f64 {
        if demand == 0 {
            return 0.0;
        }
        let base = s * m.cols;
        let unit = m.integral && self.active.iter().all(|&j| m.costs[j as usize] == 1.0);
        if unit {
            let max = self
                .active
                .iter()
                .map(|&j| self.counts[base + j as usize])
                .max()
                .unwrap_or(0) as usize;
            if max == 0 {
                return f64::INFINITY;
            }
            self.histogram.clear();
            self.histogram.resize(max + 1, 0);
            for &j in &self.active {
                self.histogram[self.counts[base + j as usize] as usize] += 1;
            }
            let mut need = demand;
            let mut taken = 0usize;
            for size in (1..=max).rev() {
                let avail = self.histogram[size] as usize;
                if avail == 0 {
                    continue;
                }
                let use_n = need.div_ceil(size).min(avail);
                taken += use_n;
                if use_n * size >= need {
                    return taken as f64;
                }
                need -= use_n * size;
            }
            return f64::INFINITY;
        }
        self.sorted.clear();
        for &j in &self.active {
            let c = self.counts[base + j as usize];
            if c > 0 {
                self.sorted.push((c as f64, m.costs[j as usize]));
            }
        }
        self.sorted
            .sort_by(|a, b| (b.0 / b.1).partial_cmp(&(a.0 / a.1)).unwrap());
        let mut need = demand as f64;
        let mut cost = 0.0;
        for &(hits, c) in &self.sorted {
            if hits >= need {
                return cost + c * need / hits;
            }
            need -= hits;
            cost += c;
        }
        f64::INFINITY
    }

    /// Dual-feasible prices: each open row pays the cheapest per-row rate of
    /// any column containing it, so no column is overcharged.
    fn dual(&mut self, m: &Matrix, open: &[u64], mask: Option<&[u64]>, s: usize) -> f64 {
        let base = s * m.cols;
        let mut touched = 0usize;
        for &j in &self.active {
            let hits = self.counts[base + j as usize];
            if hits == 0 {
                continue;
            }
            let rate = m.costs[j as usize] / hits as f64;
            let col = m.col(j as usize);
            for (w, (&c, &u)) in col.iter().zip(open).enumerate() {
                let mut x = c & u;
                if let Some(mask) = mask {
                    x &= mask[w];
                }
                while x != 0 {
                    let r = w * 64 + x.trailing_zeros() as usize;
                    x &= x - 1;
                    let slot = &mut self.min_price[r];
                    if rate < *slot {
                        if slot.is_infinite() {
                            touched += 1;
                        }
                        *slot = rate;
                    }
                }
            }
        }
        let mut total = 0.0;
        let mut reached = 0usize;
        for (w, &u) in open.iter().enumerate() {
            let mut x = u;
            if let Some(mask) = mask {
                x &= mask[w];
            }
            while x != 0 {
                let r = w * 64 + x.trailing_zeros() as usize;
                x &= x - 1;
                let p = self.min_price[r];
                if p.is_finite() {
                    total += p;
                    reached += 1;
                    self.min_price[r] = f64::INFINITY;
                } else {
                    // an open row no column reaches
                    total = f64::INFINITY;
                }
            }
        }
        debug_assert_eq!(reached, touched);
        total
    }
}

/// Rounds a bound up when every cost is integral.
pub(crate) fn round_bound(m: &Matrix, value: f64) -> f64 {
    if m.integral && value.is_finite() {
        (value - EPS).ceil()
    } else {
        value
    }
}
