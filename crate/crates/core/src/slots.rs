//! Optional positions indexed by node id.

/// `node → Option<usize>` stored as a flat array with `0` for absent.
///
/// Presized arrays come from a zeroed allocation, so untouched pages cost
/// nothing; ids past the end grow the array on demand.
#[derive(Debug, Clone, Default)]
pub(crate) struct Slots {
    cells: Vec<usize>,
    len: usize,
}

impl Slots {
    pub(crate) fn with_nodes(n: usize) -> Self {
        Slots {
            cells: vec![0; n],
            len: 0,
        }
    }

    #[inline]
    pub(crate) fn get(&self, node: usize) -> Option<usize> {
        match self.cells.get(node) {
            Some(&c) if c > 0 => Some(c - 1),
            _ => None,
        }
    }

    #[inline]
    pub(crate) fn set(&mut self, node: usize, value: usize) {
        if node >= self.cells.len() {
            self.cells.resize((node + 1).max(2 * self.cells.len()), 0);
        }
        let cell = &mut self.cells[node];
        if *cell == 0 {
            self.len += 1;
        }
        *cell = value + 1;
    }

    #[inline]
    pub(crate) fn remove(&mut self, node: usize) -> Option<usize> {
        let cell = self.cells.get_mut(node)?;
        let old = std::mem::take(cell).checked_sub(1)?;
        self.len -= 1;
        Some(old)
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }
}
