//! Primal network simplex on the complete bipartite transport graph.
//!
//! The tree bookkeeping (parent, thread, successor counts, last successor)
//! follows the classic LEMON layout. Transport arcs are implicit: arc
//! `e = i * n2 + j` runs from supply node `i` to demand node `n1 + j` and
//! its cost lives in a dense row-major matrix. Every arc is uncapacitated,
//! so non-tree arcs always sit at zero flow and only the tree arcs carry
//! state; the flow on a node's predecessor arc is stored on the node.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

pub(crate) struct Solution {
    /// `Σ flow · cost` over the transport arcs.
    pub cost: f64,
    /// `(supply index, demand index, flow)` with indices into the caller's slices.
    pub flows: Vec<(usize, usize, f64)>,
}

/// Minimal-cost transport of `supply` onto `demand` with arc costs `cost(i, j)`.
///
/// Masses below `min(1e-12, 1e-10 / n)` of the total are pruned, and the demand
/// side is rescaled onto the supply total before solving. Flows on degenerate
/// tree arcs below the same threshold are dropped from the result.
pub(crate) fn solve(
    supply: &[f64],
    demand: &[f64],
    cost: impl Fn(usize, usize) -> f64,
) -> Result<Solution> {
    let total_s: f64 = supply.iter().sum();
    let total_d: f64 = demand.iter().sum();
    if !(total_s > 0.0 && total_d > 0.0) {
        return Err(Error::InvalidInput(
            "transport needs positive total mass".into(),
        ));
    }
    let n = supply.len().max(demand.len()).max(1) as f64;
    let cut = 1e-12f64.min(1e-10 / n);
    let src: Vec<usize> = (0..supply.len())
        .filter(|&i| supply[i] > cut * total_s)
        .collect();
    let dst: Vec<usize> = (0..demand.len())
        .filter(|&j| demand[j] > cut * total_d)
        .collect();
    let s: Vec<f64> = src.iter().map(|&i| supply[i]).collect();
    let kept_s: f64 = s.iter().sum();
    let kept_d: f64 = dst.iter().map(|&j| demand[j]).sum();
    let d: Vec<f64> = dst.iter().map(|&j| demand[j] * kept_s / kept_d).collect();

    let n1 = src.len();
    let n2 = dst.len();
    let mut c = Vec::with_capacity(n1 * n2);
    for &i in &src {
        for &j in &dst {
            let v = cost(i, j);
            if !v.is_finite() || v < 0.0 {
                return Err(Error::NonFiniteMetric { i, j });
            }
            c.push(v);
        }
    }

    let flows = if n1 == 1 || n2 == 1 {
        // A star: the coupling is forced.
        let mut f = Vec::with_capacity(n1 * n2);
        for (a, &sa) in s.iter().enumerate() {
            for (b, &db) in d.iter().enumerate() {
                f.push((a, b, if n1 == 1 { db } else { sa }));
            }
        }
        f
    } else {
        Simplex::new(&s, &d, &c, n1, n2).run()?
    };

    let mut total = 0.0;
    let mut out = Vec::with_capacity(flows.len());
    for (a, b, m) in flows {
        if m > cut * total_s {
            total += m * c[a * n2 + b];
            out.push((src[a], dst[b], m));
        }
    }
    Ok(Solution {
        cost: total,
        flows: out,
    })
}

struct Simplex<'a> {
    n1: usize,
    n2: usize,
    cost: &'a [f64],
    arc_num: usize,
    root: usize,
    parent: Vec<usize>,
    pred: Vec<usize>,
    forward: Vec<bool>,
    flow: Vec<f64>,
    thread: Vec<usize>,
    rev_thread: Vec<usize>,
    succ_num: Vec<usize>,
    last_succ: Vec<usize>,
    pi: Vec<f64>,
    dirty: Vec<usize>,
    block: usize,
    next_arc: usize,
    eps: f64,
    in_arc: usize,
    join: usize,
    u_in: usize,
    v_in: usize,
    u_out: usize,
    delta: f64,
}

const NONE: usize = usize::MAX;

impl<'a> Simplex<'a> {
    fn new(s: &[f64], d: &[f64], cost: &'a [f64], n1: usize, n2: usize) -> Self {
        let node_num = n1 + n2;
        let root = node_num;
        let arc_num = n1 * n2;
        let max_cost = cost.iter().copied().fold(0.0, f64::max);
        let art_cost = (max_cost + 1.0) * node_num as f64;

        let mut parent = vec![root; node_num + 1];
        let mut pred = vec![NONE; node_num + 1];
        let mut forward = vec![true; node_num + 1];
        let mut flow = vec![0.0; node_num + 1];
        let mut thread = vec![0; node_num + 1];
        let mut rev_thread = vec![0; node_num + 1];
        let mut succ_num = vec![1; node_num + 1];
        let mut last_succ = vec![0; node_num + 1];
        let mut pi = vec![0.0; node_num + 1];

        for u in 0..node_num {
            pred[u] = arc_num + u;
            thread[u] = u + 1;
            rev_thread[u + 1] = u;
            last_succ[u] = u;
            if u < n1 {
                forward[u] = true;
                flow[u] = s[u];
            } else {
                forward[u] = false;
                flow[u] = d[u - n1];
                pi[u] = art_cost;
            }
        }
        parent[root] = NONE;
        thread[root] = 0;
        rev_thread[0] = root;
        succ_num[root] = node_num + 1;
        last_succ[root] = root - 1;

        let block = ((arc_num as f64).sqrt().ceil() as usize)
            .max(10)
            .min(arc_num);
        Self {
            n1,
            n2,
            cost,
            arc_num,
            root,
            parent,
            pred,
            forward,
            flow,
            thread,
            rev_thread,
            succ_num,
            last_succ,
            pi,
            dirty: Vec::new(),
            block,
            next_arc: 0,
            eps: 1e-14 * art_cost + 1e-12 * max_cost,
            in_arc: 0,
            join: 0,
            u_in: 0,
            v_in: 0,
            u_out: 0,
            delta: 0.0,
        }
    }

    #[inline]
    fn source(&self, e: usize) -> usize {
        e / self.n2
    }

    #[inline]
    fn target(&self, e: usize) -> usize {
        self.n1 + e % self.n2
    }

    fn run(mut self) -> Result<Vec<(usize, usize, f64)>> {
        let max_iter = 20 * self.arc_num as u64 + 100_000;
        let mut iter = 0u64;
        while self.find_entering_arc() {
            iter += 1;
            if iter > max_iter {
                return Err(Error::NonConvergence(format!(
                    "network simplex after {max_iter} pivots"
                )));
            }
            self.find_join();
            self.find_leaving_arc();
            self.change_flow();
            self.update_tree();
            self.update_potential();
        }
        let mut out = Vec::new();
        for u in 0..self.root {
            let e = self.pred[u];
            if e < self.arc_num {
                out.push((self.source(e), self.target(e) - self.n1, self.flow[u]));
            }
        }
        Ok(out)
    }

    /// Block search pricing over the implicit arcs.
    fn find_entering_arc(&mut self) -> bool {
        let mut best = -self.eps;
        let mut found = NONE;
        let mut cnt = self.block;
        let m = self.arc_num;
        let mut e = self.next_arc;
        let mut i = e / self.n2;
        let mut j = e % self.n2;
        for _ in 0..m {
            let r = self.cost[e] + self.pi[i] - self.pi[self.n1 + j];
            if r < best {
                best = r;
                found = e;
            }
            e += 1;
            j += 1;
            if j == self.n2 {
                j = 0;
                i += 1;
                if e == m {
                    e = 0;
                    i = 0;
                }
            }
            cnt -= 1;
            if cnt == 0 {
                if found != NONE {
                    break;
                }
                cnt = self.block;
            }
        }
        if found == NONE {
            return false;
        }
        self.in_arc = found;
        self.next_arc = e;
        true
    }

    fn find_join(&mut self) {
        let mut u = self.source(self.in_arc);
        let mut v = self.target(self.in_arc);
        while u != v {
            if self.succ_num[u] < self.succ_num[v] {
                u = self.parent[u];
            } else {
                v = self.parent[v];
            }
        }
        self.join = u;
    }

    fn find_leaving_arc(&mut self) {
        let first = self.source(self.in_arc);
        let second = self.target(self.in_arc);
        let mut delta = f64::INFINITY;
        let mut side = 0;
        let mut u = first;
        while u != self.join {
            if self.forward[u] && self.flow[u] < delta {
                delta = self.flow[u];
                self.u_out = u;
                side = 1;
            }
            u = self.parent[u];
        }
        u = second;
        while u != self.join {
            if !self.forward[u] && self.flow[u] <= delta {
                delta = self.flow[u];
                self.u_out = u;
                side = 2;
            }
            u = self.parent[u];
        }
        debug_assert!(side != 0, "transport graph has no directed cycles");
        if side == 1 {
            self.u_in = first;
            self.v_in = second;
        } else {
            self.u_in = second;
            self.v_in = first;
        }
        self.delta = delta.max(0.0);
    }

    fn change_flow(&mut self) {
        let val = self.delta;
        if val > 0.0 {
            let mut u = self.source(self.in_arc);
            while u != self.join {
                let f = if self.forward[u] {
                    self.flow[u] - val
                } else {
                    self.flow[u] + val
                };
                self.flow[u] = f.max(0.0);
                u = self.parent[u];
            }
            u = self.target(self.in_arc);
            while u != self.join {
                let f = if self.forward[u] {
                    self.flow[u] + val
                } else {
                    self.flow[u] - val
                };
                self.flow[u] = f.max(0.0);
                u = self.parent[u];
            }
        }
    }

    fn update_tree(&mut self) {
        let u_in = self.u_in;
        let v_in = self.v_in;
        let u_out = self.u_out;
        let join = self.join;

        let old_rev_thread = self.rev_thread[u_out];
        let old_succ_num = self.succ_num[u_out];
        let old_last_succ = self.last_succ[u_out];
        let v_out = self.parent[u_out];

        let mut u = self.last_succ[u_in];
        let mut right = self.thread[u];

        let last = if old_rev_thread == v_in {
            self.thread[self.last_succ[u_out]]
        } else {
            self.thread[v_in]
        };

        // Re-hang the stem u_in .. u_out below v_in.
        let mut stem = u_in;
        self.thread[v_in] = stem;
        self.dirty.clear();
        self.dirty.push(v_in);
        let mut par_stem = v_in;
        while stem != u_out {
            let new_stem = self.parent[stem];
            self.thread[u] = new_stem;
            self.dirty.push(u);

            let w = self.rev_thread[stem];
            self.thread[w] = right;
            self.rev_thread[right] = w;

            self.parent[stem] = par_stem;
            par_stem = stem;
            stem = new_stem;

            u = if self.last_succ[stem] == self.last_succ[par_stem] {
                self.rev_thread[par_stem]
            } else {
                self.last_succ[stem]
            };
            right = self.thread[u];
        }
        self.parent[u_out] = par_stem;
        self.thread[u] = last;
        self.rev_thread[last] = u;
        self.last_succ[u_out] = u;

        if old_rev_thread != v_in {
            self.thread[old_rev_thread] = right;
            self.rev_thread[right] = old_rev_thread;
        }

        for k in 0..self.dirty.len() {
            let d = self.dirty[k];
            let t = self.thread[d];
            self.rev_thread[t] = d;
        }

        // Reverse pred arcs, flows and successor data along the stem.
        let mut tmp_sc = 0usize;
        let tmp_ls = self.last_succ[u_out];
        u = u_out;
        while u != u_in {
            let w = self.parent[u];
            self.pred[u] = self.pred[w];
            self.flow[u] = self.flow[w];
            self.forward[u] = !self.forward[w];
            tmp_sc = tmp_sc + self.succ_num[u] - self.succ_num[w];
            self.succ_num[u] = tmp_sc;
            self.last_succ[w] = tmp_ls;
            u = w;
        }
        self.pred[u_in] = self.in_arc;
        self.flow[u_in] = self.delta;
        self.forward[u_in] = u_in == self.source(self.in_arc);
        self.succ_num[u_in] = old_succ_num;

        let (up_limit_in, up_limit_out) = if self.last_succ[join] == v_in {
            (NONE, join)
        } else {
            (join, NONE)
        };

        u = v_in;
        while u != up_limit_in && u != NONE && self.last_succ[u] == v_in {
            self.last_succ[u] = self.last_succ[u_out];
            u = self.parent[u];
        }
        let replacement = if join != old_rev_thread && v_in != old_rev_thread {
            old_rev_thread
        } else {
            self.last_succ[u_out]
        };
        u = v_out;
        while u != up_limit_out && u != NONE && self.last_succ[u] == old_last_succ {
            self.last_succ[u] = replacement;
            u = self.parent[u];
        }

        u = v_in;
        while u != join {
            self.succ_num[u] += old_succ_num;
            u = self.parent[u];
        }
        u = v_out;
        while u != join {
            self.succ_num[u] -= old_succ_num;
            u = self.parent[u];
        }
    }

    fn update_potential(&mut self) {
        let u_in = self.u_in;
        let c = self.cost[self.in_arc];
        let sigma = if self.forward[u_in] {
            self.pi[self.v_in] - self.pi[u_in] - c
        } else {
            self.pi[self.v_in] - self.pi[u_in] + c
        };
        let end = self.thread[self.last_succ[u_in]];
        let mut u = u_in;
        while u != end {
            self.pi[u] += sigma;
            u = self.thread[u];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive vertex search for 2x2 problems.
    fn brute_2x2(s: &[f64], d: &[f64], c: &[[f64; 2]; 2]) -> f64 {
        let lo = (s[0] - d[1]).max(0.0);
        let hi = s[0].min(d[0]);
        [lo, hi]
            .iter()
            .map(|&x| {
                let p = [[x, s[0] - x], [d[0] - x, s[1] - d[0] + x]];
                (0..2)
                    .flat_map(|i| (0..2).map(move |j| (i, j)))
                    .map(|(i, j)| p[i][j] * c[i][j])
                    .sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn two_by_two_matches_vertex_enumeration() {
        let s = [0.3, 0.7];
        let d = [0.6, 0.4];
        let c = [[1.0, 4.0], [2.0, 0.5]];
        let sol = solve(&s, &d, |i, j| c[i][j]).unwrap();
        assert!((sol.cost - brute_2x2(&s, &d, &c)).abs() < 1e-12);
    }

    #[test]
    fn integer_masses_keep_scale() {
        let sol = solve(&[2.0, 0.0, 1.0], &[0.0, 3.0, 0.0], |i, j| {
            (i as f64 - j as f64).abs()
        })
        .unwrap();
        assert!((sol.cost - 3.0).abs() < 1e-12);
    }

    #[test]
    fn pruned_supports_map_back_to_original_indices() {
        let sol = solve(&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], |i, j| {
            (i as f64 - j as f64).abs()
        })
        .unwrap();
        assert_eq!(sol.flows.len(), 1);
        assert_eq!((sol.flows[0].0, sol.flows[0].1), (1, 2));
    }
}
