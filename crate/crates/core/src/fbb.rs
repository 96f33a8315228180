//! Fibonacci-chunked append-only lists ("FBB").
//!
//! A list is a singly linked chain of chunks allocated from an [`Arena`].
//! Chunk capacities follow the Fibonacci sequence F = 1, 1, 2, 3, 5, …, with
//! capacity F(r) repeated for a run of F(r) consecutive chunks. The schedule
//! is a property of the chunk ordinal alone, so readers can recompute each
//! chunk's capacity while walking the chain and no capacity needs to be
//! stored.
//!
//! Chunk layout: unit 0 holds the handle of the next chunk (null for the
//! tail) and units `1..=capacity` hold postings. A list is identified by its
//! head and tail handles; two handles is all a vocabulary entry must store.

use crate::arena::{Arena, ArenaError, Unit, UnitHandle};

/// Capacity of the k-th chunk of any list, 1-based.
pub fn chunk_capacity(k: u64) -> u64 {
    assert!(k >= 1, "chunk ordinals are 1-based");
    let (mut cap, mut next) = (1u64, 1u64);
    let mut chunks = 0u64;
    loop {
        chunks += cap; // a run of capacity `cap` is `cap` chunks long
        if chunks >= k {
            return cap;
        }
        let sum = cap + next;
        cap = next;
        next = sum;
    }
}

/// Streaming form of the chunk-capacity schedule: each call to
/// [`FibCursor::next_capacity`] yields the capacity of the next chunk.
#[derive(Debug, Clone)]
pub(crate) struct FibCursor {
    cap: u64,
    next: u64,
    left: u64,
}

impl FibCursor {
    pub(crate) fn new() -> Self {
        FibCursor { cap: 1, next: 1, left: 1 }
    }

    #[inline]
    pub(crate) fn next_capacity(&mut self) -> u64 {
        if self.left == 0 {
            let sum = self.cap + self.next;
            self.cap = self.next;
            self.next = sum;
            self.left = self.cap;
        }
        self.left -= 1;
        self.cap
    }
}

/// Space accounting for one list, in units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ComponentStats {
    pub components: u64,
    /// Posting capacity allocated across all chunks (excludes link units).
    pub allocated_units: u64,
    /// One link unit per chunk.
    pub link_units: u64,
    /// Unfilled capacity in the tail chunk.
    pub waste_units: u64,
}

/// An append-only postings list stored as Fibonacci-sized chunks.
///
/// The struct itself holds only cursors and counters; all postings live in
/// the arena, which must be passed to every operation. Lists are built once
/// and then read; there is no removal.
#[derive(Debug, Clone)]
pub struct FbbList<U: Unit> {
    head: UnitHandle<U>,
    tail: UnitHandle<U>,
    count: u64,
    /// Capacity of the tail chunk (0 while empty).
    last_cap: u64,
    /// Postings stored in the tail chunk.
    last_fill: u64,
    components: u64,
    cursor: FibCursor,
}

impl<U: Unit> Default for FbbList<U> {
    fn default() -> Self {
        Self::new()
    }
}

impl<U: Unit> FbbList<U> {
    pub fn new() -> Self {
        FbbList {
            head: UnitHandle::null(),
            tail: UnitHandle::null(),
            count: 0,
            last_cap: 0,
            last_fill: 0,
            components: 0,
            cursor: FibCursor::new(),
        }
    }

    /// Appends one posting. The value must fit in a memory unit; the
    /// inverter checks this once per record rather than per posting.
    pub fn append(&mut self, arena: &mut Arena<U>, posting: u64) -> Result<(), ArenaError> {
        if self.last_fill == self.last_cap {
            let cap = self.cursor.next_capacity();
            let chunk = arena.alloc(1 + cap)?;
            arena.set(chunk, 0, UnitHandle::<U>::null().to_unit());
            if self.tail.is_null() {
                self.head = chunk;
            } else {
                arena.set(self.tail, 0, chunk.to_unit());
            }
            self.tail = chunk;
            self.last_cap = cap;
            self.last_fill = 0;
            self.components += 1;
        }
        arena.set(self.tail, 1 + self.last_fill, U::from_u64(posting));
        self.last_fill += 1;
        self.count += 1;
        Ok(())
    }

    #[inline]
    pub fn len(&self) -> u64 {
        self.count
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Capacity of the most recently opened chunk. Capacities never shrink,
    /// so this is also the largest chunk in the list.
    pub fn last_component_capacity(&self) -> u64 {
        self.last_cap
    }

    pub fn stats(&self) -> ComponentStats {
        ComponentStats {
            components: self.components,
            allocated_units: self.count - self.last_fill + self.last_cap,
            link_units: self.components,
            waste_units: self.last_cap - self.last_fill,
        }
    }

    /// Iterates the postings in append order by walking the chunk chain.
    pub fn iter<'a>(&self, arena: &'a Arena<U>) -> FbbIter<'a, U> {
        FbbIter {
            arena,
            chunk: self.head,
            slice: &[],
            pos: 0,
            remaining: self.count,
            cursor: FibCursor::new(),
        }
    }

    #[cfg(test)]
    pub(crate) fn corrupt_count_for_tests(&mut self, count: u64) {
        self.count = count;
    }
}

pub struct FbbIter<'a, U: Unit> {
    arena: &'a Arena<U>,
    /// Next chunk to load (null once the tail has been loaded).
    chunk: UnitHandle<U>,
    slice: &'a [U],
    pos: usize,
    /// Postings not yet loaded into `slice`.
    remaining: u64,
    cursor: FibCursor,
}

impl<'a, U: Unit> Iterator for FbbIter<'a, U> {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        if self.pos == self.slice.len() {
            // Ending on a null link as well as on the count lets a traversal
            // of an inconsistent list terminate instead of chasing garbage;
            // the inverter's integrity check reports the shortfall.
            if self.remaining == 0 || self.chunk.is_null() {
                return None;
            }
            let chunk = self.chunk;
            let cap = self.cursor.next_capacity();
            let take = cap.min(self.remaining);
            self.slice = self.arena.slice(chunk, 1, take);
            self.chunk = UnitHandle::from_unit(self.arena.get(chunk, 0));
            self.pos = 0;
            self.remaining -= take;
        }
        let v = self.slice[self.pos].to_u64();
        self.pos += 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.remaining as usize + (self.slice.len() - self.pos);
        (n, Some(n))
    }
}

impl<'a, U: Unit> ExactSizeIterator for FbbIter<'a, U> {}
