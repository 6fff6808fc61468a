use super::matrix::Matrix;
use crate::bits::word_count;

/// Repeatedly takes the column with the most open rows per unit cost,
/// lowest index on ties. Returns matrix column indices, or `None` when some
/// row is unreachable.
pub(crate) fn greedy_cover(m: &Matrix) -> Option<Vec<usize>> {
    let mut open = vec![0u64; word_count(m.rows)];
    for r in 0..m.rows {
        open[r / 64] |= 1 << (r % 64);
    }
    let mut remaining = m.rows;
    let mut used = vec![false; m.cols];
    let mut chosen = Vec::new();
    while remaining > 0 {
        let mut best: Option<(usize, usize)> = None;
        for j in 0..m.cols {
            if used[j] {
                continue;
            }
            let hits = m
                .col(j)
                .iter()
                .zip(&open)
                .map(|(a, b)| (a & b).count_ones() as usize)
                .sum::<usize>();
            if hits == 0 {
                continue;
            }
            let better = match best {
                None => true,
                Some((bh, bj)) => hits as f64 * m.costs[bj] > bh as f64 * m.costs[j],
            };
            if better {
                best = Some((hits, j));
            }
        }
        let (hits, j) = best?;
        used[j] = true;
        chosen.push(j);
        remaining -= hits;
        for (o, w) in open.iter_mut().zip(m.col(j)) {
            *o &= !w;
        }
    }
    Some(chosen)
}
