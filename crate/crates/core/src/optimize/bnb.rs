use alloc::vec;
use alloc::vec::Vec;

use super::{Budget, OptStatus, OptimizeResult};
use crate::clock::{BudgetKind, Clock, Deadline};
use crate::encode::SymmetryMode;
use crate::layout::{Instance, Layout, Machine, Slot};

/// Sum of `w · md` over soft pairs whose endpoints are both placed.
///
/// `partial[i]` is the slot of machine `i` for the placed prefix
/// `0..partial.len()`.
pub fn lower_bound(instance: &Instance, partial: &[Slot]) -> u64 {
    let grid = instance.grid();
    let k = partial.len();
    instance
        .soft_pairs()
        .iter()
        .filter(|p| p.a < k && p.b < k)
        .map(|p| p.weight as u64 * grid.md(partial[p.a], partial[p.b]) as u64)
        .sum()
}

/// Pruning bound used by [`branch_and_bound`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BoundMode {
    /// [`lower_bound`] alone.
    PlacedPairs,
    /// [`lower_bound`] plus, for every soft pair not fully placed, its
    /// weight times the smallest distance it can still realize: 1 if both
    /// endpoints are free, otherwise the distance from the placed endpoint
    /// to the nearest free slot.
    #[default]
    Completion,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BnbConfig {
    pub bound: BoundMode,
    /// Restricts machine 0 to representative slots.
    pub symmetry: SymmetryMode,
    pub budget: Budget,
}

const CLOCK_POLL: u64 = 256;
const UNPLACED: Slot = usize::MAX;
const NO_PATH: u32 = u32::MAX;

/// BFS hop counts between machines over adjacency pairs, or `None` if the
/// adjacency graph has an odd cycle (a grid cannot host one).
fn adjacency_hops(adj: &[Vec<Machine>]) -> Option<Vec<Vec<u32>>> {
    let n = adj.len();
    let mut hops = vec![vec![NO_PATH; n]; n];
    for src in 0..n {
        let row = &mut hops[src];
        row[src] = 0;
        let mut queue = alloc::collections::VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if row[v] == NO_PATH {
                    row[v] = row[u] + 1;
                    queue.push_back(v);
                } else if row[v] == row[u] {
                    return None;
                }
            }
        }
    }
    Some(hops)
}

struct Search<'a> {
    clock: &'a dyn Clock,
    deadline: Deadline,
    node_limit: Option<u64>,
    bound: BoundMode,
    n: usize,
    words: usize,
    open: Vec<Slot>,
    dist: Vec<Vec<u32>>,
    neighbors: Vec<Vec<Slot>>,
    neighbor_mask: Vec<Vec<u64>>,
    // ball[s][h]: slots within h steps of s whose distance has the parity of h
    ball: Vec<Vec<Vec<u64>>>,
    // soft partners with index below the machine, for incremental cost
    soft_below: Vec<Vec<(Machine, u64)>>,
    // soft partners with index above the machine, by partner index
    soft_above: Vec<Vec<(Machine, u64)>>,
    // adjacency partners that are not also soft partners
    adj_reserve: Vec<Vec<Machine>>,
    // ring_suffix[k]: ring bound summed over machines k.. for pairs among them
    ring_suffix: Vec<u64>,
    max_md: usize,
    // ring_at[s][d]: unblocked slots at distance d from s
    ring_at: Vec<Vec<u32>>,
    adj: Vec<Vec<Machine>>,
    // hop distance in the adjacency graph, NO_PATH if disconnected
    hops: Vec<Vec<u32>>,
    sep: Vec<Vec<Machine>>,
    // domains[k]: candidate slots of every machine at depth k, n·words words
    domains: Vec<Vec<u64>>,
    slot_of: Vec<Slot>,
    used: Vec<bool>,
    cost: u64,
    ub: u64,
    incumbent: Option<Vec<Slot>>,
    explored: u64,
    pruned: u64,
    stop: Option<BudgetKind>,
}

/// `Σ w_i · d_i` with weights (sorted descending) sent to the nearest
/// distances first, `capacity[d]` slots being available at distance `d`.
/// Weights that find no capacity are charged one step past the last ring.
fn greedy_rings(weights: &[u64], capacity: &[u32]) -> u64 {
    let mut total = 0;
    let mut d = 1;
    let mut left = capacity.get(1).copied().unwrap_or(0);
    for &w in weights {
        while left == 0 && d < capacity.len() {
            d += 1;
            left = capacity.get(d).copied().unwrap_or(0);
        }
        if left == 0 {
            // grid exhausted; cannot happen for a feasible completion
            d = capacity.len();
        } else {
            left -= 1;
        }
        total += w * d as u64;
    }
    total
}

fn has(set: &[u64], s: Slot) -> bool {
    set[s / 64] >> (s % 64) & 1 == 1
}

fn slots_of(set: &[u64]) -> impl Iterator<Item = Slot> + '_ {
    set.iter().enumerate().flat_map(|(w, &word)| {
        let mut bits = word;
        core::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(w * 64 + b)
        })
    })
}

impl Search<'_> {
    fn domain(&self, k: usize, m: Machine) -> &[u64] {
        &self.domains[k][m * self.words..(m + 1) * self.words]
    }

    /// Bound on the soft pairs not yet fully placed at depth `k`. Each
    /// pair is charged to its lower-index endpoint `a`. If `a` is free too,
    /// a precomputed ring bound applies; if `a` is placed, its free partners
    /// need distinct slots, so the heaviest get the nearest free slots at
    /// best, and each also sits no closer than its own domain allows.
    fn completion(&self, k: usize) -> u64 {
        self.oriented_bound(k).max(self.split_bound(k))
    }

    /// Bound with each soft pair's weight split evenly between its
    /// endpoints (computed doubled). A placed machine charges its free
    /// partners as in [`Search::oriented_bound`]; a free machine charges
    /// the cheapest slot left in its domain, counting exact distances to
    /// placed partners and ring capacities around the slot for free ones.
    fn split_bound(&self, k: usize) -> u64 {
        let mut doubled = 0u64;
        let mut counts = vec![0u32; self.max_md + 1];
        let mut weights = Vec::new();
        for a in 0..k {
            let partners = &self.soft_above[a];
            let first = partners.partition_point(|&(p, _)| p < k);
            if first == partners.len() {
                continue;
            }
            let t = self.slot_of[a];
            counts.iter_mut().for_each(|c| *c = 0);
            for &s in &self.open {
                if !self.used[s] {
                    counts[self.dist[t][s] as usize] += 1;
                }
            }
            let reserved = self.adj_reserve[a].iter().filter(|&&p| p >= k).count() as u32;
            counts[1] = counts[1].saturating_sub(reserved);
            weights.clear();
            weights.extend(partners[first..].iter().map(|&(_, w)| w));
            weights.sort_unstable_by(|x, y| y.cmp(x));
            doubled += greedy_rings(&weights, &counts);
        }
        for m in k..self.n {
            let below = &self.soft_below[m];
            let above = &self.soft_above[m];
            if below.is_empty() && above.is_empty() {
                continue;
            }
            weights.clear();
            weights.extend(below.iter().chain(above).filter(|&&(p, _)| p >= k).map(|&(_, w)| w));
            weights.sort_unstable_by(|x, y| y.cmp(x));
            let reserved = self.adj_reserve[m].len() as u32;
            let mut best = u64::MAX;
            for s in slots_of(self.domain(k, m)) {
                let mut c: u64 = below
                    .iter()
                    .chain(above)
                    .filter(|&&(p, _)| p < k)
                    .map(|&(p, w)| w * self.dist[s][self.slot_of[p]] as u64)
                    .sum();
                if !weights.is_empty() {
                    counts.copy_from_slice(&self.ring_at[s]);
                    counts[1] = counts[1].saturating_sub(reserved);
                    c += greedy_rings(&weights, &counts);
                }
                best = best.min(c);
            }
            doubled += if best == u64::MAX { 0 } else { best };
        }
        self.cost + doubled.div_ceil(2)
    }

    fn oriented_bound(&self, k: usize) -> u64 {
        let mut total = self.cost + self.ring_suffix[k];
        let mut counts = vec![0u32; self.max_md + 1];
        for a in 0..k {
            let partners = &self.soft_above[a];
            let first = partners.partition_point(|&(p, _)| p < k);
            let open_partners = &partners[first..];
            if open_partners.is_empty() {
                continue;
            }
            let t = self.slot_of[a];
            let mut by_domain = 0u64;
            for &(m, w) in open_partners {
                let d = slots_of(self.domain(k, m)).map(|s| self.dist[t][s]).min().unwrap_or(0);
                by_domain += w * d as u64;
            }
            counts.iter_mut().for_each(|c| *c = 0);
            for &s in &self.open {
                if !self.used[s] {
                    counts[self.dist[t][s] as usize] += 1;
                }
            }
            let reserved = self.adj_reserve[a].iter().filter(|&&p| p >= k).count() as u32;
            counts[1] = counts[1].saturating_sub(reserved);
            let mut weights: Vec<u64> = open_partners.iter().map(|&(_, w)| w).collect();
            weights.sort_unstable_by(|x, y| y.cmp(x));
            let by_rings = greedy_rings(&weights, &counts);
            total += by_domain.max(by_rings);
        }
        total
    }

    fn free_neighbors(&self, t: Slot) -> usize {
        self.neighbors[t].iter().filter(|&&s| !self.used[s]).count()
    }

    fn unplaced_adj(&self, m: Machine, placed_upto: usize) -> usize {
        self.adj[m].iter().filter(|&&p| p >= placed_upto).count()
    }

    /// Adjacency partners still to come need distinct free neighbours, both
    /// around `s` and around placed machines next to it.
    fn capacity_ok(&self, k: Machine, s: Slot) -> bool {
        if self.unplaced_adj(k, k + 1) > self.free_neighbors(s) {
            return false;
        }
        for &t in &self.neighbors[s] {
            if !self.used[t] {
                continue;
            }
            if let Some(q) = self.slot_of[..k].iter().position(|&x| x == t) {
                if self.unplaced_adj(q, k + 1) > self.free_neighbors(t) {
                    return false;
                }
            }
        }
        true
    }

    /// Derives the depth `k + 1` domains from placing machine `k` at `s`,
    /// propagating to a fixpoint: a machine left with one slot constrains
    /// the others as if placed, and when machines and free slots are equal
    /// in number, a slot only one machine can take is given to it. False if
    /// some machine or (in the equal case) some slot runs out of options.
    fn filter(&mut self, k: Machine, s: Slot) -> bool {
        let w = self.words;
        let n = self.n;
        let (lo, hi) = self.domains.split_at_mut(k + 1);
        let next = &mut hi[0];
        next.copy_from_slice(&lo[k]);
        let unplaced = n - k - 1;
        let free_slots = self.open.iter().filter(|&&t| !self.used[t]).count();
        let tight = unplaced == free_slots;
        let mut fixed = vec![false; n];
        let mut queue = vec![(k, s)];
        loop {
            while let Some((f, t)) = queue.pop() {
                for m in k + 1..n {
                    if m == f || fixed[m] {
                        continue;
                    }
                    let dom = &mut next[m * w..(m + 1) * w];
                    dom[t / 64] &= !(1u64 << (t % 64));
                    let h = self.hops[f][m];
                    if h != NO_PATH {
                        let last = self.ball[t].len() - 1;
                        let h = h as usize;
                        let r = if h <= last { h } else { last - ((h - last) & 1) };
                        for (d, b) in dom.iter_mut().zip(&self.ball[t][r]) {
                            *d &= b;
                        }
                    }
                    if self.sep[f].contains(&m) {
                        for (d, b) in dom.iter_mut().zip(&self.neighbor_mask[t]) {
                            *d &= !b;
                        }
                    }
                    let count: u32 = dom.iter().map(|x| x.count_ones()).sum();
                    if count == 0 {
                        return false;
                    }
                    if count == 1 {
                        fixed[m] = true;
                        queue.push((m, slots_of(dom).next().unwrap()));
                    }
                }
            }
            if !tight {
                let mut union = vec![0u64; w];
                for m in k + 1..n {
                    for (u, d) in union.iter_mut().zip(&next[m * w..(m + 1) * w]) {
                        *u |= d;
                    }
                }
                let covered: u32 = union.iter().map(|x| x.count_ones()).sum();
                return covered as usize >= unplaced;
            }
            // tight: every free slot needs a machine
            let mut once = vec![0u64; w];
            let mut twice = vec![0u64; w];
            for m in k + 1..n {
                for ((o, t2), d) in once.iter_mut().zip(twice.iter_mut()).zip(&next[m * w..(m + 1) * w]) {
                    *t2 |= *o & d;
                    *o |= d;
                }
            }
            for &t in &self.open {
                if !self.used[t] && !has(&once, t) {
                    return false;
                }
            }
            let mut forced = false;
            for m in k + 1..n {
                if fixed[m] {
                    continue;
                }
                let dom = &mut next[m * w..(m + 1) * w];
                let lonely = slots_of(dom).find(|&t| !has(&twice, t));
                if let Some(t) = lonely {
                    dom.iter_mut().for_each(|x| *x = 0);
                    dom[t / 64] |= 1 << (t % 64);
                    fixed[m] = true;
                    queue.push((m, t));
                    forced = true;
                }
            }
            if !forced {
                return true;
            }
        }
    }

    fn out_of_budget(&mut self) -> bool {
        if self.stop.is_some() {
            return true;
        }
        if let Some(limit) = self.node_limit {
            if self.explored >= limit {
                self.stop = Some(BudgetKind::Nodes);
                return true;
            }
        }
        if self.explored.is_multiple_of(CLOCK_POLL) && self.deadline.expired(self.clock) {
            self.stop = Some(BudgetKind::Time);
            return true;
        }
        false
    }

    fn visit(&mut self, k: usize) {
        if self.out_of_budget() {
            return;
        }
        self.explored += 1;
        let lb = match self.bound {
            BoundMode::PlacedPairs => self.cost,
            BoundMode::Completion => self.completion(k),
        };
        if lb >= self.ub {
            self.pruned += 1;
            return;
        }
        if k == self.n {
            // lb == cost < ub here
            self.ub = self.cost;
            self.incumbent = Some(self.slot_of.clone());
            return;
        }
        for idx in 0..self.open.len() {
            let s = self.open[idx];
            if self.used[s] || !has(self.domain(k, k), s) {
                continue;
            }
            self.used[s] = true;
            self.slot_of[k] = s;
            if self.capacity_ok(k, s) && self.filter(k, s) {
                let delta: u64 = self.soft_below[k]
                    .iter()
                    .map(|&(p, w)| w * self.dist[s][self.slot_of[p]] as u64)
                    .sum();
                self.cost += delta;
                self.visit(k + 1);
                self.cost -= delta;
            }
            self.slot_of[k] = UNPLACED;
            self.used[s] = false;
            if self.stop.is_some() {
                return;
            }
        }
    }
}

/// Static branching order. Starts from the machine with the most weight on
/// its pairs, then repeatedly takes the one most strongly tied to those
/// already chosen, so that soft costs and hard constraints bind early.
/// Hard adjacency outweighs any soft pair; separation counts least.
fn branching_order(instance: &Instance) -> Vec<Machine> {
    let n = instance.n_machines();
    let mut tie = vec![vec![0u64; n]; n];
    let mut link = |a: Machine, b: Machine, w: u64| {
        tie[a][b] += w;
        tie[b][a] += w;
    };
    for p in instance.soft_pairs() {
        link(p.a, p.b, 2 * p.weight as u64);
    }
    for &(a, b) in instance.adjacency() {
        link(a, b, 20);
    }
    for &(a, b) in instance.separation() {
        link(a, b, 1);
    }
    let degree: Vec<u64> = tie.iter().map(|row| row.iter().sum()).collect();
    let mut score = vec![0u64; n];
    let mut chosen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let m = (0..n)
            .filter(|&m| !chosen[m])
            .max_by_key(|&m| (score[m], degree[m], core::cmp::Reverse(m)))
            .expect("machines left");
        chosen[m] = true;
        order.push(m);
        for (s, &t) in score.iter_mut().zip(&tie[m]) {
            *s += t;
        }
    }
    order
}

/// Depth-first branch and bound. Machines are placed in the fixed order of
/// [`branching_order`], each into free slots in row-major order; a node is fathomed when its bound
/// reaches the incumbent cost. A valid `hint` sets the initial incumbent;
/// an invalid one is ignored and the search starts cold.
///
/// Each node carries the remaining candidate slots of every unplaced
/// machine, filtered by the hard constraints; a placement that empties a
/// domain is never expanded.
pub fn branch_and_bound(
    instance: &Instance,
    hint: Option<&Layout>,
    config: &BnbConfig,
    clock: &dyn Clock,
) -> OptimizeResult {
    let deadline = Deadline::start(clock, config.budget.time_limit);
    let grid = instance.grid();
    let n = instance.n_machines();
    let slots = grid.num_slots();
    let words = slots.div_ceil(64);
    let mask_of = |f: &dyn Fn(Slot) -> bool| {
        let mut m = vec![0u64; words];
        for s in (0..slots).filter(|&s| f(s)) {
            m[s / 64] |= 1 << (s % 64);
        }
        m
    };
    let dist: Vec<Vec<u32>> = (0..slots)
        .map(|j| (0..slots).map(|l| grid.md(j, l) as u32).collect())
        .collect();
    let neighbors: Vec<Vec<Slot>> = (0..slots).map(|j| grid.neighbors(j)).collect();
    let neighbor_mask: Vec<Vec<u64>> = (0..slots).map(|j| mask_of(&|l| dist[j][l] == 1)).collect();
    let max_md = (grid.rows() + grid.cols()).saturating_sub(2);
    // radii past max_md + 1 add nothing new for either parity
    let ball: Vec<Vec<Vec<u64>>> = (0..slots)
        .map(|j| {
            (0..=max_md + 1)
                .map(|h| mask_of(&|l| dist[j][l] as usize <= h && (dist[j][l] as usize ^ h) & 1 == 0))
                .collect()
        })
        .collect();
    // the search works on depths; order[k] is the machine placed at depth k
    let order = branching_order(instance);
    let mut pos = vec![0; n];
    for (k, &m) in order.iter().enumerate() {
        pos[m] = k;
    }
    let mut soft_below = vec![Vec::new(); n];
    for p in instance.soft_pairs() {
        let (lo, hi) = (pos[p.a].min(pos[p.b]), pos[p.a].max(pos[p.b]));
        soft_below[hi].push((lo, p.weight as u64));
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in instance.adjacency() {
        let (a, b) = (pos[a], pos[b]);
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut soft_above: Vec<Vec<(Machine, u64)>> = vec![Vec::new(); n];
    for p in instance.soft_pairs() {
        let (lo, hi) = (pos[p.a].min(pos[p.b]), pos[p.a].max(pos[p.b]));
        soft_above[lo].push((hi, p.weight as u64));
    }
    for list in &mut soft_above {
        list.sort_unstable();
    }
    let adj_reserve: Vec<Vec<Machine>> = (0..n)
        .map(|m| {
            adj[m]
                .iter()
                .copied()
                .filter(|&p| !soft_below[m].iter().chain(&soft_above[m]).any(|&(q, _)| q == p))
                .collect()
        })
        .collect();
    // most slots any unblocked slot has at each distance
    let ring_at: Vec<Vec<u32>> = (0..slots)
        .map(|j| {
            let mut c = vec![0u32; max_md + 1];
            for l in (0..slots).filter(|&l| !grid.is_blocked(l)) {
                c[dist[j][l] as usize] += 1;
            }
            c
        })
        .collect();
    let mut ring_capacity = vec![0u32; max_md + 1];
    for j in (0..slots).filter(|&j| !grid.is_blocked(j)) {
        for (r, &x) in ring_capacity.iter_mut().zip(&ring_at[j]) {
            *r = (*r).max(x);
        }
    }
    let mut ring_suffix = vec![0u64; n + 1];
    for m in (0..n).rev() {
        let mut cap = ring_capacity.clone();
        cap[1] = cap[1].saturating_sub(adj_reserve[m].len() as u32);
        let mut weights: Vec<u64> = soft_above[m].iter().map(|&(_, w)| w).collect();
        weights.sort_unstable_by(|x, y| y.cmp(x));
        ring_suffix[m] = ring_suffix[m + 1] + greedy_rings(&weights, &cap);
    }
    let hops = adjacency_hops(&adj);
    let mut sep = vec![Vec::new(); n];
    for &(a, b) in instance.separation() {
        let (a, b) = (pos[a], pos[b]);
        sep[a].push(b);
        sep[b].push(a);
    }

    let free = mask_of(&|s| !grid.is_blocked(s));
    let mut root = Vec::with_capacity(n * words);
    for _ in 0..n {
        root.extend_from_slice(&free);
    }
    for &(m, f) in instance.on_floor() {
        let floor = mask_of(&|s| grid.floors()[f].slots.binary_search(&s).is_ok());
        let m = pos[m];
        for (d, fl) in root[m * words..(m + 1) * words].iter_mut().zip(&floor) {
            *d &= fl;
        }
    }
    if n > 0 {
        if let Some(reps) = config.symmetry.machine0_slots(instance) {
            let reps = mask_of(&|s| reps.contains(&s));
            let m = pos[0];
            for (d, r) in root[m * words..(m + 1) * words].iter_mut().zip(&reps) {
                *d &= r;
            }
        }
    }
    let mut domains = vec![root; n + 1];
    domains.shrink_to_fit();

    let (ub, incumbent, hint_cost) = match hint {
        Some(h) if instance.is_feasible(h) => {
            let c = instance.objective_unchecked(h);
            (c, Some(order.iter().map(|&m| h.slot_of[m]).collect()), Some(c))
        }
        _ => (u64::MAX, None, None),
    };

    // an adjacency degree above the grid's largest neighbourhood can never be met
    let max_degree = (0..slots)
        .filter(|&j| !grid.is_blocked(j))
        .map(|j| neighbors[j].len())
        .max()
        .unwrap_or(0);
    let hopeless = (n > 0 && hops.is_none())
        || adj.iter().any(|a| a.len() > max_degree)
        || domains[0].chunks(words.max(1)).any(|d| d.iter().all(|&x| x == 0));

    let mut search = Search {
        clock,
        deadline,
        node_limit: config.budget.node_limit,
        bound: config.bound,
        n,
        words,
        open: grid.unblocked_slots(),
        dist,
        neighbors,
        neighbor_mask,
        ball,
        soft_below,
        soft_above,
        adj_reserve,
        ring_suffix,
        ring_at,
        max_md,
        hops: hops.unwrap_or_default(),
        adj,
        sep,
        domains,
        slot_of: vec![UNPLACED; n],
        used: vec![false; slots],
        cost: 0,
        ub,
        incumbent,
        explored: 0,
        pruned: 0,
        stop: None,
    };
    if !hopeless {
        search.visit(0);
    }

    let status = match (search.stop, search.incumbent.is_some()) {
        (None, true) => OptStatus::Opt,
        (None, false) => OptStatus::Infeasible,
        (Some(_), true) => OptStatus::Feasible,
        (Some(_), false) => OptStatus::Unknown,
    };
    let best_objective = search.incumbent.as_ref().map(|_| search.ub);
    OptimizeResult {
        status,
        best_layout: search.incumbent.map(|by_depth| {
            let mut slot_of = vec![UNPLACED; n];
            for (k, s) in by_depth.into_iter().enumerate() {
                slot_of[order[k]] = s;
            }
            Layout::new(slot_of)
        }),
        best_objective,
        nodes_explored: search.explored,
        nodes_pruned: search.pruned,
        runtime: deadline.elapsed(clock),
        hint_cost,
        exhausted: search.stop,
        ..OptimizeResult::default()
    }
}
