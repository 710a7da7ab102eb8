//! Indexed 4-ary max-heap over residual values.

use crate::slots::Slots;

const ARITY: usize = 4;

/// Max-heap of `(node, residual)` with a node → slot map, so a node's key
/// can be raised, lowered, or removed in `O(log n)`.
#[derive(Debug, Clone, Default)]
pub struct ResidualHeap {
    entries: Vec<(usize, f64)>,
    slots: Slots,
    ops: u64,
}

impl ResidualHeap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Heap whose position map is presized for node ids below `n`.
    pub fn with_nodes(n: usize) -> Self {
        ResidualHeap {
            slots: Slots::with_nodes(n),
            ..Self::default()
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, node: usize) -> bool {
        self.slots.get(node).is_some()
    }

    pub fn key(&self, node: usize) -> Option<f64> {
        self.slots.get(node).map(|s| self.entries[s].1)
    }

    /// Insert, update, and remove operations performed so far.
    pub fn ops(&self) -> u64 {
        self.ops
    }

    pub fn peek(&self) -> Option<(usize, f64)> {
        self.entries.first().copied()
    }

    pub fn pop(&mut self) -> Option<(usize, f64)> {
        let top = self.peek()?;
        self.remove(top.0);
        Some(top)
    }

    /// Inserts `node` or moves it to its new key.
    pub fn upsert(&mut self, node: usize, key: f64) {
        self.ops += 1;
        match self.slots.get(node) {
            Some(slot) => {
                let old = self.entries[slot].1;
                self.entries[slot].1 = key;
                if key > old {
                    self.sift_up(slot);
                } else if key < old {
                    self.sift_down(slot);
                }
            }
            None => {
                let slot = self.entries.len();
                self.entries.push((node, key));
                self.slots.set(node, slot);
                self.sift_up(slot);
            }
        }
    }

    pub fn remove(&mut self, node: usize) -> Option<f64> {
        let slot = self.slots.remove(node)?;
        self.ops += 1;
        let (_, key) = self.entries.swap_remove(slot);
        if slot < self.entries.len() {
            let moved = self.entries[slot].0;
            self.slots.set(moved, slot);
            self.sift_down(slot);
            self.sift_up(slot);
        }
        Some(key)
    }

    /// Full scan of heap order and slot map consistency.
    pub fn is_consistent(&self) -> bool {
        if self.slots.len() != self.entries.len() {
            return false;
        }
        self.entries.iter().enumerate().all(|(i, &(node, key))| {
            self.slots.get(node) == Some(i) && (i == 0 || self.entries[(i - 1) / ARITY].1 >= key)
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().copied()
    }

    // Both sifts move a hole instead of swapping, so each displaced entry's
    // slot is written once and the moving entry's slot only at the end.
    fn sift_up(&mut self, mut slot: usize) {
        let moving = self.entries[slot];
        while slot > 0 {
            let parent = (slot - 1) / ARITY;
            if self.entries[parent].1 >= moving.1 {
                break;
            }
            self.place(slot, self.entries[parent]);
            slot = parent;
        }
        self.place(slot, moving);
    }

    fn sift_down(&mut self, mut slot: usize) {
        let moving = self.entries[slot];
        let len = self.entries.len();
        loop {
            let first = ARITY * slot + 1;
            if first >= len {
                break;
            }
            let mut child = first;
            for c in first + 1..(first + ARITY).min(len) {
                if self.entries[c].1 > self.entries[child].1 {
                    child = c;
                }
            }
            if moving.1 >= self.entries[child].1 {
                break;
            }
            self.place(slot, self.entries[child]);
            slot = child;
        }
        self.place(slot, moving);
    }

    #[inline]
    fn place(&mut self, slot: usize, entry: (usize, f64)) {
        self.entries[slot] = entry;
        self.slots.set(entry.0, slot);
    }
}
