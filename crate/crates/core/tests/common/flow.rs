//! Discretized rearrangement oracle for the distance between partition types over
//! the trivial algebra.
//!
//! Both partitions are discretized to `res` cells. A rearrangement of the second is an
//! integer transport plan `M` with row sums the cell counts of the first partition
//! and column sums those of the second; part `i` then moves `r_i + s_i − 2 M_ii` cells.
//! The smallest achievable maximum is found by testing each bound `t` as a flow
//! problem with lower bounds `M_ii ≥ ⌈(r_i + s_i − t)/2⌉`.

use std::collections::VecDeque;

use ergoalg::{q, Event, Rational};

struct Graph {
    cap: Vec<Vec<i64>>,
}

impl Graph {
    fn new(n: usize) -> Self {
        Graph {
            cap: vec![vec![0; n]; n],
        }
    }

    fn add(&mut self, u: usize, v: usize, c: i64) {
        self.cap[u][v] += c;
    }

    /// Edmonds–Karp.
    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let n = self.cap.len();
        let mut total = 0;
        loop {
            let mut prev = vec![usize::MAX; n];
            prev[s] = s;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                #[allow(clippy::needless_range_loop)]
                for v in 0..n {
                    if prev[v] == usize::MAX && self.cap[u][v] > 0 {
                        prev[v] = u;
                        queue.push_back(v);
                    }
                }
            }
            if prev[t] == usize::MAX {
                return total;
            }
            let mut push = i64::MAX;
            let mut v = t;
            while v != s {
                push = push.min(self.cap[prev[v]][v]);
                v = prev[v];
            }
            let mut v = t;
            while v != s {
                self.cap[prev[v]][v] -= push;
                self.cap[v][prev[v]] += push;
                v = prev[v];
            }
            total += push;
        }
    }
}

const BIG: i64 = 1 << 40;

/// Whether a transport plan exists with every part moving at most `t` cells.
fn feasible(rows: &[i64], cols: &[i64], t: i64) -> bool {
    let n = rows.len();
    // Nodes: S, rows, cols, T, S', T'.
    let (s, t_node) = (0, 2 * n + 1);
    let (ss, tt) = (2 * n + 2, 2 * n + 3);
    let row = |i: usize| 1 + i;
    let col = |j: usize| 1 + n + j;
    let mut g = Graph::new(2 * n + 4);
    let mut demand = 0;
    for i in 0..n {
        // S → row_i must carry exactly r_i.
        g.add(ss, row(i), rows[i]);
        g.add(s, tt, rows[i]);
        // col_j → T must carry exactly s_j.
        g.add(ss, t_node, cols[i]);
        g.add(col(i), tt, cols[i]);
        demand += rows[i] + cols[i];
        let low = (rows[i] + cols[i] - t + 1).div_euclid(2).max(0);
        if low > rows[i].min(cols[i]) {
            return false;
        }
        for j in 0..n {
            if i != j {
                g.add(row(i), col(j), BIG);
            }
        }
        g.add(row(i), col(i), BIG - low);
        g.add(ss, col(i), low);
        g.add(row(i), tt, low);
        demand += low;
    }
    g.add(t_node, s, BIG);
    g.max_flow(ss, tt) == demand
}

/// Cell counts for the parts: each measure scaled by `res` and rounded by largest
/// remainder, so every count is within one cell of the exact mass.
fn counts(parts: &[Event], res: i64) -> Vec<i64> {
    let scaled: Vec<Rational> = parts.iter().map(|p| p.measure() * q!(res)).collect();
    let mut out: Vec<i64> = scaled.iter().map(|x| i64::try_from(&x.floor()).expect("small")).collect();
    let rem: Vec<Rational> = scaled.iter().zip(&out).map(|(x, &f)| x - q!(f)).collect();
    let mut order: Vec<usize> = (0..parts.len()).collect();
    order.sort_by(|&i, &j| rem[j].cmp(&rem[i]).then(i.cmp(&j)));
    let missing = res - out.iter().sum::<i64>();
    for &i in order.iter().take(missing as usize) {
        out[i] += 1;
    }
    out
}

/// Minimal achievable `max_i m(a_i Δ b′_i)` over rearrangements `b′` of `b`, at the
/// given resolution.
pub fn discrete_distance(a: &[Event], b: &[Event], res: i64) -> Rational {
    let rows = counts(a, res);
    let cols = counts(b, res);
    let t = (0..=2 * res)
        .find(|&t| feasible(&rows, &cols, t))
        .expect("moving everything is always feasible");
    q!(t, res)
}
