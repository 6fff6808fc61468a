//! Depth-first branch and bound over columns.
//!
//! Each node branches on the open row with the fewest usable columns. Child
//! `i` takes the `i`-th candidate and forbids candidates `0..i`, so every
//! column subset is reached at most once.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use super::bounds::{round_bound, Bounder, NodeBound};
use super::matrix::Matrix;
use crate::bits::{ones, word_count};

const EPS: f64 = 1e-9;

/// Incumbent shared by all workers.
pub(crate) struct Shared {
    best_bits: AtomicU64,
    best: Mutex<Option<Incumbent>>,
    timed_out: AtomicBool,
    deadline: Instant,
}

#[derive(Clone, Debug)]
pub(crate) struct Incumbent {
    pub cost: f64,
    pub cols: Vec<usize>,
}

impl Shared {
    pub fn new(deadline: Instant, initial: Option<Incumbent>) -> Self {
        let bits = initial.as_ref().map_or(f64::INFINITY, |i| i.cost).to_bits();
        Shared {
            best_bits: AtomicU64::new(bits),
            best: Mutex::new(initial),
            timed_out: AtomicBool::new(false),
            deadline,
        }
    }

    #[inline]
    pub fn best_cost(&self) -> f64 {
        f64::from_bits(self.best_bits.load(Ordering::Acquire))
    }

    /// Positive floats order like their bit patterns, so `fetch_min` on the
    /// bits is a numeric minimum.
    fn offer(&self, cost: f64, cols: &[usize]) {
        let mut guard = self.best.lock().expect("incumbent lock poisoned");
        let current = guard.as_ref().map_or(f64::INFINITY, |i| i.cost);
        if cost < current - EPS {
            *guard = Some(Incumbent {
                cost,
                cols: cols.to_vec(),
            });
            self.best_bits.fetch_min(cost.to_bits(), Ordering::AcqRel);
        }
    }

    pub fn timed_out(&self) -> bool {
        self.timed_out.load(Ordering::Relaxed)
    }

    pub fn into_incumbent(self) -> Option<Incumbent> {
        self.best.into_inner().expect("incumbent lock poisoned")
    }
}

pub(crate) struct Search<'a> {
    m: &'a Matrix,
    shared: &'a Shared,
    bounder: Bounder,
    open: Vec<u64>,
    avail: Vec<u64>,
    cwords: usize,
    path: Vec<usize>,
    pub nodes: u64,
}

impl<'a> Search<'a> {
    pub fn new(m: &'a Matrix, shared: &'a Shared) -> Self {
        let depth = m.cols + 2;
        let cwords = word_count(m.cols);
        Search {
            m,
            shared,
            bounder: Bounder::new(m),
            open: vec![0; depth * m.words],
            avail: vec![0; depth * cwords],
            cwords,
            path: Vec::new(),
            nodes: 0,
        }
    }

    fn all_open(&mut self) {
        let words = self.m.words;
        for r in 0..self.m.rows {
            self.open[r / 64] |= 1 << (r % 64);
        }
        debug_assert!(self.open[..words].iter().map(|w| w.count_ones() as usize).sum::<usize>() == self.m.rows);
        for j in 0..self.m.cols {
            self.avail[j / 64] |= 1 << (j % 64);
        }
    }

    /// Bound for the root node.
    pub fn root_bound(&mut self) -> NodeBound {
        self.all_open();
        let m = self.m;
        let mut b = self.bounder.bound(m, &self.open[..m.words], &self.avail[..self.cwords], f64::INFINITY);
        b.value = round_bound(m, b.value);
        b
    }

    /// Branching row and its usable columns, ordered by open-row hits.
    fn branch_candidates(&self, depth: usize) -> Option<Vec<usize>> {
        let m = self.m;
        let open = &self.open[depth * m.words..(depth + 1) * m.words];
        let avail = &self.avail[depth * self.cwords..(depth + 1) * self.cwords];
        let mut best_row = None;
        let mut best_count = usize::MAX;
        for r in ones(open) {
            let count = m.row_cols[r]
                .iter()
                .filter(|&&c| avail[c as usize / 64] >> (c % 64) & 1 == 1)
                .count();
            if count < best_count {
                best_count = count;
                best_row = Some(r);
                if count == 0 {
                    return None;
                }
            }
        }
        let r = best_row?;
        let mut cands: Vec<(u32, usize)> = m.row_cols[r]
            .iter()
            .filter(|&&c| avail[c as usize / 64] >> (c % 64) & 1 == 1)
            .map(|&c| {
                let hits = m
                    .col(c as usize)
                    .iter()
                    .zip(open)
                    .map(|(a, b)| (a & b).count_ones())
                    .sum::<u32>();
                (hits, c as usize)
            })
            .collect();
        cands.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        Some(cands.into_iter().map(|(_, c)| c).collect())
    }

    fn tick(&mut self) {
        self.nodes += 1;
        if self.nodes % 512 == 0 && Instant::now() >= self.shared.deadline {
            self.shared.timed_out.store(true, Ordering::Relaxed);
        }
    }

    /// Explores the subtree at `depth`. Returns a lower bound on any solution
    /// in the subtree that beats the incumbent and was not explored, or
    /// infinity when the subtree is settled.
    fn dfs(&mut self, depth: usize, cost: f64) -> f64 {
        self.tick();
        let m = self.m;
        let words = m.words;
        let cw = self.cwords;
        let open = &self.open[depth * words..(depth + 1) * words];
        if open.iter().all(|&w| w == 0) {
            self.shared.offer(cost, &self.path);
            return f64::INFINITY;
        }
        let incumbent = self.shared.best_cost();
        let avail = &self.avail[depth * cw..(depth + 1) * cw];
        let stop_at = if m.integral {
            incumbent - cost - 1.0 + EPS
        } else {
            incumbent - cost - EPS
        };
        let b = self.bounder.bound(m, open, avail, stop_at);
        let node_bound = cost + round_bound(m, b.value);
        if node_bound >= incumbent - EPS {
            return f64::INFINITY;
        }
        if self.shared.timed_out() {
            return node_bound;
        }
        let Some(cands) = self.branch_candidates(depth) else {
            return f64::INFINITY;
        };
        let mut unsettled = f64::INFINITY;
        for (i, &c) in cands.iter().enumerate() {
            if self.shared.timed_out() {
                unsettled = unsettled.min(node_bound);
                break;
            }
            if i > 0 {
                let prev = cands[i - 1];
                self.avail[depth * cw + prev / 64] &= !(1 << (prev % 64));
            }
            let (head, tail) = self.avail.split_at_mut((depth + 1) * cw);
            tail[..cw].copy_from_slice(&head[depth * cw..]);
            tail[c / 64] &= !(1 << (c % 64));
            let (head, tail) = self.open.split_at_mut((depth + 1) * words);
            let col = m.col(c);
            for ((dst, src), w) in tail[..words].iter_mut().zip(&head[depth * words..]).zip(col) {
                *dst = src & !w;
            }
            self.path.push(c);
            let r = self.dfs(depth + 1, cost + m.costs[c]);
            self.path.pop();
            unsettled = unsettled.min(r);
        }
        // restore the forbidden candidates for the caller's next sibling
        for &c in &cands {
            self.avail[depth * cw + c / 64] |= 1 << (c % 64);
        }
        unsettled
    }

    /// Expands the root's children whose position is `worker` modulo `stride`.
    pub fn run_root(&mut self, worker: usize, stride: usize) -> f64 {
        self.all_open();
        let m = self.m;
        let cw = self.cwords;
        let words = m.words;
        self.tick();
        let incumbent = self.shared.best_cost();
        let stop_at = if m.integral { incumbent - 1.0 + EPS } else { incumbent - EPS };
        let b = self.bounder.bound(m, &self.open[..words], &self.avail[..cw], stop_at);
        let root_bound = round_bound(m, b.value);
        if root_bound >= incumbent - EPS {
            return f64::INFINITY;
        }
        let Some(cands) = self.branch_candidates(0) else {
            return f64::INFINITY;
        };
        let mut unsettled = f64::INFINITY;
        for (i, &c) in cands.iter().enumerate() {
            if i % stride != worker {
                continue;
            }
            if self.shared.timed_out() {
                unsettled = unsettled.min(root_bound);
                break;
            }
            let (head, tail) = self.avail.split_at_mut(cw);
            tail[..cw].copy_from_slice(head);
            for &f in &cands[..=i] {
                tail[f / 64] &= !(1 << (f % 64));
            }
            let (head, tail) = self.open.split_at_mut(words);
            for ((dst, src), w) in tail[..words].iter_mut().zip(head.iter()).zip(m.col(c)) {
                *dst = src & !w;
            }
            self.path.clear();
            self.path.push(c);
            let r = self.dfs(1, m.costs[c]);
            self.path.pop();
            unsettled = unsettled.min(r);
        }
        unsettled
    }
}
