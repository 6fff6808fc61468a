//! Packed column-major incidence used by the search, plus presolve.

use crate::bits::{ones, word_count};
use crate::settings::CoverInstance;

/// Rows and columns surviving presolve, with back-references into the
/// original instance.
#[derive(Clone, Debug)]
pub(crate) struct Matrix {
    pub rows: usize,
    pub cols: usize,
    /// Words per column bitset.
    pub words: usize,
    /// Column `j` occupies `bits[j * words..(j + 1) * words]`.
    pub bits: Vec<u64>,
    pub costs: Vec<f64>,
    /// Columns containing each row.
    pub row_cols: Vec<Vec<u32>>,
    /// Row masks of the bound strata.
    pub strata: Vec<Vec<u64>>,
    /// Original column index for each column.
    pub col_origin: Vec<usize>,
    /// Original columns that presolve fixed into every solution.
    pub forced: Vec<usize>,
    pub forced_cost: f64,
    /// Every cost is an integer, so bounds may be rounded up.
    pub integral: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PresolveStats {
    pub duplicate_columns: usize,
    pub dominated_columns: usize,
    pub dominated_rows: usize,
    pub forced_columns: usize,
}

impl Matrix {
    #[inline]
    pub fn col(&self, j: usize) -> &[u64] {
        &self.bits[j * self.words..(j + 1) * self.words]
    }

    /// Direct copy of the instance with one stratum per Pauli weight.
    pub fn from_instance(inst: &CoverInstance) -> Matrix {
        let rows = inst.num_rows();
        let cols = inst.num_columns();
        let words = word_count(rows);
        let mut bits = vec![0u64; cols * words];
        let mut row_cols = vec![Vec::new(); rows];
        for j in 0..cols {
            for &k in inst.column_rows(j) {
                let k = k as usize;
                bits[j * words + k / 64] |= 1 << (k % 64);
                row_cols[k].push(j as u32);
            }
        }
        let weights: Vec<usize> = inst.universe().iter().map(|p| p.weight()).collect();
        let strata = (1..=inst.n())
            .map(|w| {
                let mut mask = vec![0u64; words];
                for (k, &wk) in weights.iter().enumerate() {
                    if wk == w {
                        mask[k / 64] |= 1 << (k % 64);
                    }
                }
                mask
            })
            .collect();
        let costs = inst.costs();
        let integral = costs.iter().all(|c| c.fract() == 0.0);
        Matrix {
            rows,
            cols,
            words,
            bits,
            costs,
            row_cols,
            strata,
            col_origin: (0..cols).collect(),
            forced: Vec::new(),
            forced_cost: 0.0,
            integral,
        }
    }

    /// Applies duplicate-column merging, column dominance, row dominance and
    /// forced columns until nothing changes.
    pub fn presolve(self) -> (Matrix, PresolveStats) {
        let mut stats = PresolveStats::default();
        let mut m = self;
        loop {
            let before = stats;
            m = m.drop_columns(&mut stats);
            m = m.drop_rows(&mut stats);
            m = m.force_columns(&mut stats);
            if stats == before {
                return (m, stats);
            }
        }
    }

    fn col_count(&self, j: usize) -> usize {
        self.col(j).iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_subset(&self, a: usize, b: usize) -> bool {
        self.col(a).iter().zip(self.col(b)).all(|(x, y)| x & !y == 0)
    }

    fn drop_columns(self, stats: &mut PresolveStats) -> Matrix {
        let mut keep = vec![true; self.cols];
        let counts: Vec<usize> = (0..self.cols).map(|j| self.col_count(j)).collect();
        for j in 0..self.cols {
            if counts[j] == 0 {
                keep[j] = false;
                stats.dominated_columns += 1;
            }
        }
        for j in 0..self.cols {
            if !keep[j] {
                continue;
            }
            for k in 0..self.cols {
                if k == j || !keep[k] || counts[k] < counts[j] || self.costs[k] > self.costs[j] {
                    continue;
                }
                if !self.is_subset(j, k) {
                    continue;
                }
                if counts[k] == counts[j] {
                    // equal sets: the cheaper survives, then the lower index
                    let k_wins = self.costs[k] < self.costs[j] || (self.costs[k] == self.costs[j] && k < j);
                    if k_wins {
                        keep[j] = false;
                        stats.duplicate_columns += 1;
                        break;
                    }
                } else {
                    keep[j] = false;
                    stats.dominated_columns += 1;
                    break;
                }
            }
        }
        self.retain_columns(&keep)
    }

    fn retain_columns(self, keep: &[bool]) -> Matrix {
        if keep.iter().all(|&k| k) {
            return self;
        }
        let mut bits = Vec::new();
        let mut costs = Vec::new();
        let mut col_origin = Vec::new();
        let mut remap = vec![u32::MAX; self.cols];
        for j in 0..self.cols {
            if keep[j] {
                remap[j] = costs.len() as u32;
                bits.extend_from_slice(self.col(j));
                costs.push(self.costs[j]);
                col_origin.push(self.col_origin[j]);
            }
        }
        let row_cols = self
            .row_cols
            .iter()
            .map(|cs| {
                cs.iter()
                    .filter(|&&c| keep[c as usize])
                    .map(|&c| remap[c as usize])
                    .collect()
            })
            .collect();
        Matrix {
            cols: costs.len(),
            bits,
            costs,
            col_origin,
            row_cols,
            ..self
        }
    }

    /// A row whose column set contains another row's column set is covered
    /// whenever that other row is.
    fn drop_rows(self, stats: &mut PresolveStats) -> Matrix {
        let mut keep = vec![true; self.rows];
        let sets: Vec<Vec<u64>> = self
            .row_cols
            .iter()
            .map(|cs| {
                let mut b = vec![0u64; word_count(self.cols)];
                for &c in cs {
                    b[c as usize / 64] |= 1 << (c % 64);
                }
                b
            })
            .collect();
        let mut order: Vec<usize> = (0..self.rows).collect();
        order.sort_by_key(|&r| (self.row_cols[r].len(), r));
        for (pos, &r) in order.iter().enumerate() {
            if self.row_cols[r].is_empty() {
                continue;
            }
            // smaller rows that r's set contains
            for &s in &order[..pos] {
                if !keep[s] || self.row_cols[s].is_empty() {
                    continue;
                }
                if sets[s].iter().zip(&sets[r]).all(|(a, b)| a & !b == 0) {
                    keep[r] = false;
                    stats.dominated_rows += 1;
                    break;
                }
            }
        }
        self.retain_rows(&keep)
    }

    fn retain_rows(self, keep: &[bool]) -> Matrix {
        if keep.iter().all(|&k| k) {
            return self;
        }
        let rows = keep.iter().filter(|&&k| k).count();
        let words = word_count(rows);
        let mut remap = vec![usize::MAX; self.rows];
        let mut next = 0;
        for (r, &k) in keep.iter().enumerate() {
            if k {
                remap[r] = next;
                next += 1;
            }
        }
        let repack = |src: &[u64]| {
            let mut out = vec![0u64; words];
            for r in ones(src) {
                if keep[r] {
                    let nr = remap[r];
                    out[nr / 64] |= 1 << (nr % 64);
                }
            }
            out
        };
        let mut bits = Vec::with_capacity(self.cols * words);
        for j in 0..self.cols {
            bits.extend(repack(self.col(j)));
        }
        let strata = self.strata.iter().map(|s| repack(s)).collect();
        let row_cols = self
            .row_cols
            .iter()
            .zip(keep)
            .filter(|(_, &k)| k)
            .map(|(cs, _)| cs.clone())
            .collect();
        Matrix {
            rows,
            words,
            bits,
            row_cols,
            strata,
            ..self
        }
    }

    /// Columns that are the only option for some row.
    fn force_columns(self, stats: &mut PresolveStats) -> Matrix {
        let mut forced = vec![false; self.cols];
        for cs in &self.row_cols {
            if cs.len() == 1 {
                forced[cs[0] as usize] = true;
            }
        }
        if !forced.iter().any(|&f| f) {
            return self;
        }
        let mut covered = vec![0u64; self.words];
        let mut m = self;
        for j in 0..m.cols {
            if forced[j] {
                for (c, w) in covered.iter_mut().zip(m.col(j)) {
                    *c |= w;
                }
                m.forced.push(m.col_origin[j]);
                m.forced_cost += m.costs[j];
                stats.forced_columns += 1;
            }
        }
        let keep_rows: Vec<bool> = (0..m.rows).map(|r| covered[r / 64] >> (r % 64) & 1 == 0).collect();
        let keep_cols: Vec<bool> = forced.iter().map(|f| !f).collect();
        m.retain_columns(&keep_cols).retain_rows(&keep_rows)
    }
}
