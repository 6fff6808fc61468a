//! Row-weighting local search for good incumbents.
//!
//! Starting from a cover, the search drops a column whenever the current
//! selection is feasible and then repeatedly swaps one column out and one in,
//! raising the weight of rows that stay uncovered. Column choice uses
//! weighted scores with configuration checking: a dropped column may only
//! return after one of its neighbours has changed state.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::matrix::Matrix;
use crate::bits::ones;

const EPS: f64 = 1e-9;

struct State<'a> {
    m: &'a Matrix,
    col_rows: Vec<Vec<u32>>,
    in_s: Vec<bool>,
    cover: Vec<u32>,
    weight: Vec<i64>,
    score: Vec<i64>,
    stamp: Vec<u64>,
    conf: Vec<bool>,
    uncovered: Vec<u32>,
    slot: Vec<usize>,
    cost: f64,
}

impl<'a> State<'a> {
    fn new(m: &'a Matrix) -> Self {
        let col_rows = (0..m.cols)
            .map(|j| ones(m.col(j)).map(|r| r as u32).collect())
            .collect();
        let mut s = State {
            m,
            col_rows,
            in_s: vec![false; m.cols],
            cover: vec![0; m.rows],
            weight: vec![1; m.rows],
            score: vec![0; m.cols],
            stamp: vec![0; m.cols],
            conf: vec![true; m.cols],
            uncovered: (0..m.rows as u32).collect(),
            slot: (0..m.rows).collect(),
            cost: 0.0,
        };
        for j in 0..m.cols {
            s.score[j] = s.col_rows[j].len() as i64;
        }
        s
    }

    fn uncover(&mut self, r: usize) {
        self.slot[r] = self.uncovered.len();
        self.uncovered.push(r as u32);
    }

    fn mark_covered(&mut self, r: usize) {
        let at = self.slot[r];
        let last = *self.uncovered.last().expect("row is uncovered");
        self.uncovered.swap_remove(at);
        if last as usize != r {
            self.slot[last as usize] = at;
        }
    }

    /// The single selected column containing `r`.
    fn sole_cover(&self, r: usize) -> usize {
        self.m.row_cols[r]
            .iter()
            .map(|&k| k as usize)
            .find(|&k| self.in_s[k])
            .expect("row has one selected column")
    }

    fn add(&mut self, j: usize, step: u64) {
        self.in_s[j] = true;
        self.cost += self.m.costs[j];
        self.stamp[j] = step;
        let mut own = 0i64;
        for i in 0..self.col_rows[j].len() {
            let r = self.col_rows[j][i] as usize;
            self.cover[r] += 1;
            match self.cover[r] {
                1 => {
                    self.mark_covered(r);
                    own -= self.weight[r];
                    for &k in &self.m.row_cols[r] {
                        let k = k as usize;
                        if k != j {
                            self.score[k] -= self.weight[r];
                        }
                    }
                }
                2 => {
                    // the previous sole cover no longer owns this row
                    let k0 = self
                        .m
                        .row_cols[r]
                        .iter()
                        .map(|&k| k as usize)
                        .find(|&k| k != j && self.in_s[k])
                        .expect("row had one selected column");
                    self.score[k0] += self.weight[r];
                }
                _ => {}
            }
            for &k in &self.m.row_cols[r] {
                self.conf[k as usize] = true;
            }
        }
        self.score[j] = own;
    }

    fn remove(&mut self, j: usize, step: u64) {
        self.in_s[j] = false;
        self.cost -= self.m.costs[j];
        self.stamp[j] = step;
        let mut own = 0i64;
        for i in 0..self.col_rows[j].len() {
            let r = self.col_rows[j][i] as usize;
            self.cover[r] -= 1;
            match self.cover[r] {
                0 => {
                    self.uncover(r);
                    own += self.weight[r];
                    for &k in &self.m.row_cols[r] {
                        let k = k as usize;
                        if k != j {
                            self.score[k] += self.weight[r];
                        }
                    }
                }
                1 => {
                    let k0 = self.sole_cover(r);
                    self.score[k0] -= self.weight[r];
                }
                _ => {}
            }
            for &k in &self.m.row_cols[r] {
                self.conf[k as usize] = true;
            }
        }
        self.score[j] = own;
        self.conf[j] = false;
    }

    fn bump_weights(&mut self) {
        for i in 0..self.uncovered.len() {
            let r = self.uncovered[i] as usize;
            self.weight[r] += 1;
            for &k in &self.m.row_cols[r] {
                self.score[k as usize] += 1;
            }
        }
    }

    /// Score per unit cost; for selected columns this is a (negative) loss.
    fn key(&self, j: usize) -> f64 {
        self.score[j] as f64 / self.m.costs[j]
    }

    /// Higher key first, then the column unchanged for longest, then index.
    fn prefer(&self, a: usize, b: usize) -> bool {
        let (ka, kb) = (self.key(a), self.key(b));
        if ka != kb {
            return ka > kb;
        }
        (self.stamp[a], a) < (self.stamp[b], b)
    }

    fn pick_removal(&self, tabu: Option<usize>) -> Option<usize> {
        let mut best: Option<usize> = None;
        for j in (0..self.m.cols).filter(|&j| self.in_s[j] && Some(j) != tabu) {
            if best.map_or(true, |b| self.prefer(j, b)) {
                best = Some(j);
            }
        }
        best.or(tabu.filter(|&t| self.in_s[t]))
    }

    fn pick_addition(&self, r: usize) -> usize {
        let mut best: Option<usize> = None;
        let mut fallback: Option<usize> = None;
        for &k in &self.m.row_cols[r] {
            let k = k as usize;
            if self.in_s[k] {
                continue;
            }
            if fallback.map_or(true, |b| self.prefer(k, b)) {
                fallback = Some(k);
            }
            if self.conf[k] && best.map_or(true, |b| self.prefer(k, b)) {
                best = Some(k);
            }
        }
        best.or(fallback).expect("row has columns")
    }

    fn selection(&self) -> Vec<usize> {
        (0..self.m.cols).filter(|&j| self.in_s[j]).collect()
    }
}

/// Improves the cover `start` for at most `steps` swap moves, stopping early
/// at `deadline` or once the cost reaches `floor`. Deterministic for a fixed
/// `seed` when the deadline does not intervene.
pub(crate) fn improve(
    m: &Matrix,
    start: &[usize],
    steps: u64,
    deadline: Instant,
    floor: f64,
    seed: u64,
) -> Vec<usize> {
    let mut s = State::new(m);
    for &j in start {
        s.add(j, 0);
    }
    debug_assert!(s.uncovered.is_empty());
    let mut best = s.selection();
    let mut best_cost = s.cost;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tabu: Option<usize> = None;
    for step in 1..=steps {
        while s.uncovered.is_empty() || s.cost >= best_cost - EPS {
            if s.uncovered.is_empty() && s.cost < best_cost - EPS {
                best = s.selection();
                best_cost = s.cost;
                if best_cost <= floor + EPS {
                    return best;
                }
            }
            let Some(j) = s.pick_removal(None) else {
                return best;
            };
            s.remove(j, step);
        }
        if step % 256 == 0 && Instant::now() >= deadline {
            break;
        }
        if let Some(j) = s.pick_removal(tabu) {
            s.remove(j, step);
        }
        let r = s.uncovered[rng.gen_range(0..s.uncovered.len())] as usize;
        let j = s.pick_addition(r);
        s.add(j, step);
        s.bump_weights();
        tabu = Some(j);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::canonical_local_set;
    use crate::settings::{build_instance, CostRule, DetectionModel};
    use crate::solver::greedy::greedy_cover;
    use std::time::Duration;

    fn covers(m: &Matrix, cols: &[usize]) -> bool {
        let mut hit = vec![0u64; m.words];
        for &j in cols {
            for (h, w) in hit.iter_mut().zip(m.col(j)) {
                *h |= w;
            }
        }
        ones(&hit).count() == m.rows
    }

    #[test]
    fn improves_greedy_at_four_qubits() {
        let inst = build_instance(
            &DetectionModel::Homonuclear,
            4,
            &canonical_local_set(4).unwrap(),
            &CostRule::Unit,
        )
        .unwrap();
        let m = Matrix::from_instance(&inst);
        let start = greedy_cover(&m).unwrap();
        let far = Instant::now() + Duration::from_secs(600);
        let a = improve(&m, &start, 20_000, far, 15.0, 7);
        assert!(covers(&m, &a));
        assert_eq!(a.len(), 15);
        assert_eq!(a, improve(&m, &start, 20_000, far, 15.0, 7));
    }
}
