use alloc::vec::Vec;

use super::lit::Var;

pub const RESCALE_THRESHOLD: f64 = 1e100;
pub const RESCALE_FACTOR: f64 = 1e-100;

/// Variable activities with EVSIDS bumping and a max-heap over candidate
/// decision variables.
///
/// Heap order is activity descending, then variable index ascending, so
/// the branching choice is fully determined by the activity values.
#[derive(Clone, Debug)]
pub struct Vsids {
    activity: Vec<f64>,
    increment: f64,
    decay: f64,
    heap: Vec<u32>,
    // position of each variable in `heap`, or NONE
    pos: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl Vsids {
    pub fn new(decay: f64) -> Vsids {
        assert!(decay > 0.0 && decay < 1.0, "decay factor must lie in (0, 1)");
        Vsids {
            activity: Vec::new(),
            increment: 1.0,
            decay,
            heap: Vec::new(),
            pos: Vec::new(),
        }
    }

    pub fn grow_to(&mut self, num_vars: usize) {
        while self.activity.len() < num_vars {
            self.activity.push(0.0);
            self.pos.push(NONE);
            let v = self.activity.len() - 1;
            self.insert_idx(v);
        }
    }

    pub fn len(&self) -> usize {
        self.activity.len()
    }

    pub fn is_empty(&self) -> bool {
        self.activity.is_empty()
    }

    pub fn activity(&self, var: Var) -> f64 {
        self.activity[var.idx()]
    }

    pub fn increment(&self) -> f64 {
        self.increment
    }

    pub fn decay_factor(&self) -> f64 {
        self.decay
    }

    /// Overwrites an activity. Intended for seeding and tests.
    pub fn set_activity(&mut self, var: Var, value: f64) {
        let i = var.idx();
        let old = self.activity[i];
        self.activity[i] = value;
        if self.pos[i] != NONE {
            if value >= old {
                self.sift_up(self.pos[i] as usize);
            } else {
                self.sift_down(self.pos[i] as usize);
            }
        }
    }

    /// Bumps every listed variable by the current increment, then grows the
    /// increment by `1 / decay`. Call once per conflict.
    pub fn bump_and_decay(&mut self, vars: &[Var]) {
        for &v in vars {
            self.bump(v);
        }
        self.decay();
    }

    pub(crate) fn bump(&mut self, var: Var) {
        let i = var.idx();
        self.activity[i] += self.increment;
        if self.activity[i] > RESCALE_THRESHOLD {
            self.rescale();
        }
        if self.pos[i] != NONE {
            self.sift_up(self.pos[i] as usize);
        }
    }

    pub(crate) fn decay(&mut self) {
        self.increment /= self.decay;
        if self.increment > RESCALE_THRESHOLD {
            self.rescale();
        }
    }

    fn rescale(&mut self) {
        for a in &mut self.activity {
            *a *= RESCALE_FACTOR;
        }
        self.increment *= RESCALE_FACTOR;
    }

    pub fn contains(&self, var: Var) -> bool {
        self.pos[var.idx()] != NONE
    }

    pub fn insert(&mut self, var: Var) {
        self.insert_idx(var.idx());
    }

    fn insert_idx(&mut self, i: usize) {
        if self.pos[i] != NONE {
            return;
        }
        self.pos[i] = self.heap.len() as u32;
        self.heap.push(i as u32);
        self.sift_up(self.heap.len() - 1);
    }

    pub fn pop_max(&mut self) -> Option<Var> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.pos[top as usize] = NONE;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = 0;
            self.sift_down(0);
        }
        Some(Var::from_idx(top as usize))
    }

    #[inline]
    fn better(&self, a: u32, b: u32) -> bool {
        let (x, y) = (self.activity[a as usize], self.activity[b as usize]);
        x > y || (x == y && a < b)
    }

    fn sift_up(&mut self, mut i: usize) {
        let item = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if !self.better(item, self.heap[parent]) {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.pos[self.heap[i] as usize] = i as u32;
            i = parent;
        }
        self.heap[i] = item;
        self.pos[item as usize] = i as u32;
    }

    fn sift_down(&mut self, mut i: usize) {
        let item = self.heap[i];
        let n = self.heap.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let child = if r < n && self.better(self.heap[r], self.heap[l]) {
                r
            } else {
                l
            };
            if !self.better(self.heap[child], item) {
                break;
            }
            self.heap[i] = self.heap[child];
            self.pos[self.heap[i] as usize] = i as u32;
            i = child;
        }
        self.heap[i] = item;
        self.pos[item as usize] = i as u32;
    }
}
