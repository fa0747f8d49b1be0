//! Dense linear assignment by shortest augmenting paths (Jonker–Volgenant).
//!
//! Column reduction, reduction transfer and two rounds of augmenting row
//! reduction seed the duals; remaining free rows are assigned by a
//! Dijkstra-style search over reduced costs. On return `x[i]` is the column
//! assigned to row `i` and `(u, v)` are dual potentials with
//! `c[i][j] - u[i] - v[j] >= 0` up to rounding.

const NONE: usize = usize::MAX;

#[derive(Debug, Clone)]
pub struct Assignment {
    pub row_to_col: Vec<usize>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl Assignment {
    pub fn cost(&self, costs: &[f64], n: usize) -> f64 {
        self.row_to_col
            .iter()
            .enumerate()
            .map(|(i, &j)| costs[i * n + j])
            .sum()
    }

    /// Smallest reduced cost over all pairs; the optimality witness.
    pub fn min_reduced_cost(&self, costs: &[f64], n: usize) -> f64 {
        let mut worst = f64::INFINITY;
        for i in 0..n {
            let row = &costs[i * n..(i + 1) * n];
            for j in 0..n {
                worst = worst.min(row[j] - self.u[i] - self.v[j]);
            }
        }
        worst
    }
}

/// Solves the square assignment problem on a row-major `n x n` cost matrix.
// the augmenting scan grows `up` inside loops over a range fixed at entry
#[allow(clippy::mut_range_bound)]
pub fn solve(costs: &[f64], n: usize) -> Assignment {
    assert_eq!(costs.len(), n * n, "cost matrix must be n x n");
    if n == 0 {
        return Assignment {
            row_to_col: vec![],
            u: vec![],
            v: vec![],
        };
    }
    let c = |i: usize, j: usize| costs[i * n + j];

    let mut x = vec![NONE; n];
    let mut y = vec![NONE; n];
    let mut v = vec![0.0f64; n];
    let mut matches = vec![0usize; n];

    // column reduction
    for j in (0..n).rev() {
        let mut imin = 0;
        let mut min = c(0, j);
        for i in 1..n {
            if c(i, j) < min {
                min = c(i, j);
                imin = i;
            }
        }
        v[j] = min;
        matches[imin] += 1;
        if matches[imin] == 1 {
            x[imin] = j;
            y[j] = imin;
        } else {
            y[j] = NONE;
        }
    }

    // reduction transfer
    let mut free = Vec::with_capacity(n);
    for i in 0..n {
        match matches[i] {
            0 => free.push(i),
            1 => {
                let j1 = x[i];
                let mut min = f64::INFINITY;
                for j in 0..n {
                    if j != j1 {
                        min = min.min(c(i, j) - v[j]);
                    }
                }
                if min.is_finite() {
                    v[j1] -= min;
                }
            }
            _ => {}
        }
    }

    // augmenting row reduction; the step cap guards against float ping-pong
    for _ in 0..2 {
        let previous = std::mem::take(&mut free);
        let mut queue = previous;
        let mut k = 0;
        let mut steps = 0usize;
        let cap = 8 * n + 64;
        while k < queue.len() {
            let i = queue[k];
            k += 1;
            steps += 1;
            if steps > cap {
                free.extend_from_slice(&queue[k - 1..]);
                break;
            }
            let mut umin = c(i, 0) - v[0];
            let mut j1 = 0;
            let mut usubmin = f64::INFINITY;
            let mut j2 = NONE;
            for j in 1..n {
                let h = c(i, j) - v[j];
                if h < usubmin {
                    if h >= umin {
                        usubmin = h;
                        j2 = j;
                    } else {
                        usubmin = umin;
                        umin = h;
                        j2 = j1;
                        j1 = j;
                    }
                }
            }
            let mut i0 = y[j1];
            let strict = umin < usubmin;
            if strict {
                v[j1] -= usubmin - umin;
            } else if i0 != NONE && j2 != NONE {
                j1 = j2;
                i0 = y[j2];
            }
            if x[i] != NONE && y[x[i]] == i {
                y[x[i]] = NONE;
            }
            x[i] = j1;
            y[j1] = i;
            if i0 != NONE && i0 != i {
                x[i0] = NONE;
                if strict {
                    // reprocess the displaced row immediately
                    k -= 1;
                    queue[k] = i0;
                } else {
                    free.push(i0);
                }
            }
        }
    }

    // augmentation
    let mut d = vec![0.0f64; n];
    let mut pred = vec![0usize; n];
    let mut collist: Vec<usize> = (0..n).collect();
    for &f in &free {
        for j in 0..n {
            d[j] = c(f, j) - v[j];
            pred[j] = f;
            collist[j] = j;
        }
        let mut low = 0;
        let mut up = 0;
        let mut last = 0;
        let mut min = 0.0;
        let endofpath;
        'search: loop {
            if up == low {
                last = low;
                min = d[collist[up]];
                up += 1;
                for k in up..n {
                    let j = collist[k];
                    let h = d[j];
                    if h <= min {
                        if h < min {
                            up = low;
                            min = h;
                        }
                        collist[k] = collist[up];
                        collist[up] = j;
                        up += 1;
                    }
                }
                for &j in &collist[low..up] {
                    if y[j] == NONE {
                        endofpath = j;
                        break 'search;
                    }
                }
            }
            let j1 = collist[low];
            low += 1;
            let i = y[j1];
            let u1 = c(i, j1) - v[j1] - min;
            for k in up..n {
                let j = collist[k];
                let h = c(i, j) - v[j] - u1;
                if h < d[j] {
                    d[j] = h;
                    pred[j] = i;
                    if h == min {
                        if y[j] == NONE {
                            endofpath = j;
                            break 'search;
                        }
                        collist[k] = collist[up];
                        collist[up] = j;
                        up += 1;
                    }
                }
            }
        }
        // columns scanned before the final todo batch get their duals raised
        for &j in &collist[..last] {
            v[j] += d[j] - min;
        }
        let mut j = endofpath;
        loop {
            let i = pred[j];
            y[j] = i;
            let prev = x[i];
            x[i] = j;
            if i == f {
                break;
            }
            j = prev;
        }
    }

    let u = (0..n).map(|i| c(i, x[i]) - v[x[i]]).collect();
    Assignment {
        row_to_col: x,
        u,
        v,
    }
}
