//! Extensible arrays of geometrically growing segments ("SQA").
//!
//! A list is a sequence of segments reached through a dope vector (an array
//! of segment handles). Segments are grouped into conceptual superblocks:
//! superblock `j` holds `2^⌊j/2⌋` segments of capacity `2^⌈j/2⌉`, so both
//! the segment count and the segment size double on alternating steps and
//! `2^(j+1) - 1` items fit in superblocks `0..=j`. Unlike the chunked
//! Fibonacci lists this layout supports O(1) random access: a little bit
//! arithmetic on the item index yields its segment and offset, and the dope
//! vector does the rest.
//!
//! The dope vector itself is an ordinary growable array: it starts with
//! capacity 1 and doubles by copying into a fresh allocation. The arena
//! never frees, so outgrown dope copies stay behind as dead space — that
//! dead space is precisely what separates the two cost accountings in
//! [`crate::model`] (variant A charges it, variant B assumes reuse).

use crate::arena::{Arena, ArenaError, Unit, UnitHandle};

/// Which segment, and where inside it, an item index refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Location {
    pub segment: u64,
    pub offset: u64,
}

/// Number of segments in superblocks `0..j` (closed form).
pub fn segments_before_superblock(j: u64) -> u64 {
    if j % 2 == 0 {
        (1 << (j / 2 + 1)) - 2
    } else {
        3 * (1 << ((j - 1) / 2)) - 2
    }
}

/// Maps an item index (0-based, must be below the list length) to its
/// segment ordinal and offset using shifts and masks only.
#[inline]
pub fn locate(i: u64) -> Location {
    let p = i + 1;
    let j = 63 - u64::from(p.leading_zeros()); // superblock = floor(log2(i+1))
    let b = p - (1 << j); // item rank within superblock j
    let seg_bits = (j + 1) / 2; // log2(segment capacity) = ceil(j/2)
    Location {
        segment: segments_before_superblock(j) + (b >> seg_bits),
        offset: b & ((1 << seg_bits) - 1),
    }
}

/// Streaming form of the segment-capacity schedule.
#[derive(Debug, Clone)]
pub(crate) struct SqCursor {
    j: u64,
    cap: u64,
    left: u64,
}

impl SqCursor {
    pub(crate) fn new() -> Self {
        SqCursor { j: 0, cap: 1, left: 1 }
    }

    #[inline]
    pub(crate) fn next_capacity(&mut self) -> u64 {
        if self.left == 0 {
            self.j += 1;
            self.cap = 1 << ((self.j + 1) / 2);
            self.left = 1 << (self.j / 2);
        }
        self.left -= 1;
        self.cap
    }
}

/// Space accounting for one list, in units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SqStats {
    /// Segments allocated.
    pub components: u64,
    /// Item capacity allocated across all segments.
    pub allocated_units: u64,
    /// Unfilled capacity in the tail segment.
    pub waste_units: u64,
    /// Capacity of the current dope vector.
    pub dope_capacity: u64,
    /// Dope entries in use (equals `components`).
    pub dope_used: u64,
    /// Units abandoned in outgrown dope vectors.
    pub discarded_dope_units: u64,
}

/// An append-only postings list stored as an extensible array.
///
/// As with [`crate::fbb::FbbList`], the struct holds only counters plus the
/// dope handle; a vocabulary entry referencing the list needs one handle.
#[derive(Debug, Clone)]
pub struct SqArray<U: Unit> {
    dope: UnitHandle<U>,
    dope_capacity: u64,
    dope_used: u64,
    count: u64,
    last_cap: u64,
    last_fill: u64,
    discarded_dope_units: u64,
    cursor: SqCursor,
}

impl<U: Unit> Default for SqArray<U> {
    fn default() -> Self {
        Self::new()
    }
}

impl<U: Unit> SqArray<U> {
    pub fn new() -> Self {
        SqArray {
            dope: UnitHandle::null(),
            dope_capacity: 0,
            dope_used: 0,
            count: 0,
            last_cap: 0,
            last_fill: 0,
            discarded_dope_units: 0,
            cursor: SqCursor::new(),
        }
    }

    /// Appends one posting. The value must fit in a memory unit.
    pub fn append(&mut self, arena: &mut Arena<U>, posting: u64) -> Result<(), ArenaError> {
        if self.last_fill == self.last_cap {
            let cap = self.cursor.next_capacity();
            if self.dope_used == self.dope_capacity {
                self.grow_dope(arena)?;
            }
            let segment = arena.alloc(cap)?;
            arena.set(self.dope, self.dope_used, segment.to_unit());
            self.dope_used += 1;
            self.last_cap = cap;
            self.last_fill = 0;
        }
        let segment = UnitHandle::from_unit(arena.get(self.dope, self.dope_used - 1));
        arena.set(segment, self.last_fill, U::from_u64(posting));
        self.last_fill += 1;
        self.count += 1;
        Ok(())
    }

    fn grow_dope(&mut self, arena: &mut Arena<U>) -> Result<(), ArenaError> {
        let new_capacity = (self.dope_capacity * 2).max(1);
        let new_dope = arena.alloc(new_capacity)?;
        if self.dope_used > 0 {
            arena.copy_units(self.dope, new_dope, self.dope_used);
        }
        // The outgrown vector cannot be freed; it stays behind as dead space.
        self.discarded_dope_units += self.dope_capacity;
        self.dope = new_dope;
        self.dope_capacity = new_capacity;
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

    /// Capacity of the most recently opened segment. Capacities never
    /// shrink, so this is also the largest segment in the list.
    pub fn last_component_capacity(&self) -> u64 {
        self.last_cap
    }

    /// Random access by item index.
    pub fn get(&self, arena: &Arena<U>, i: u64) -> Option<u64> {
        if i >= self.count {
            return None;
        }
        let loc = locate(i);
        let segment = UnitHandle::from_unit(arena.get(self.dope, loc.segment));
        Some(arena.get(segment, loc.offset).to_u64())
    }

    pub fn stats(&self) -> SqStats {
        SqStats {
            components: self.dope_used,
            allocated_units: self.count - self.last_fill + self.last_cap,
            waste_units: self.last_cap - self.last_fill,
            dope_capacity: self.dope_capacity,
            dope_used: self.dope_used,
            discarded_dope_units: self.discarded_dope_units,
        }
    }

    /// Iterates the postings in append order by walking the dope vector.
    pub fn iter<'a>(&self, arena: &'a Arena<U>) -> SqaIter<'a, U> {
        let dope = if self.dope_used == 0 {
            &[]
        } else {
            arena.slice(self.dope, 0, self.dope_used)
        };
        SqaIter {
            arena,
            dope,
            seg_idx: 0,
            slice: &[],
            pos: 0,
            remaining: self.count,
            cursor: SqCursor::new(),
        }
    }

    #[cfg(test)]
    pub(crate) fn corrupt_count_for_tests(&mut self, count: u64) {
        self.count = count;
    }
}

pub struct SqaIter<'a, U: Unit> {
    arena: &'a Arena<U>,
    dope: &'a [U],
    seg_idx: usize,
    slice: &'a [U],
    pos: usize,
    /// Postings not yet loaded into `slice`.
    remaining: u64,
    cursor: SqCursor,
}

impl<'a, U: Unit> Iterator for SqaIter<'a, U> {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        if self.pos == self.slice.len() {
            // Ending when the dope vector runs out as well as on the count
            // lets a traversal of an inconsistent list terminate cleanly;
            // the inverter's integrity check reports the shortfall.
            if self.remaining == 0 || self.seg_idx == self.dope.len() {
                return None;
            }
            let cap = self.cursor.next_capacity();
            let take = cap.min(self.remaining);
            let segment = UnitHandle::from_unit(self.dope[self.seg_idx]);
            self.slice = self.arena.slice(segment, 0, take);
            self.seg_idx += 1;
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

impl<'a, U: Unit> ExactSizeIterator for SqaIter<'a, U> {}

#[cfg(test)]
mod tests {
    use super::*;

    fn arena() -> Arena<u32> {
        Arena::<u32>::new(64 * 1024 * 1024).unwrap()
    }

    fn filled(values: &[u64]) -> (Arena<u32>, SqArray<u32>) {
        let mut a = arena();
        let mut list = SqArray::new();
        for &v in values {
            list.append(&mut a, v).unwrap();
        }
        (a, list)
    }

    #[test]
    fn locate_spot_values() {
        let cases = [
            (0, (0, 0)),
            (1, (1, 0)),
            (2, (1, 1)),
            (3, (2, 0)),
            (4, (2, 1)),
            (5, (3, 0)),
            (6, (3, 1)),
            (7, (4, 0)),
            (8, (4, 1)),
            (15, (6, 0)),
            (16, (6, 1)),
            (100, (18, 5)),
            (1000, (61, 9)),
            (12345, (222, 58)),
            (1 << 20, (2046, 1)),
            ((1 << 20) - 1, (2046, 0)),
        ];
        for (i, (segment, offset)) in cases {
            assert_eq!(locate(i), Location { segment, offset }, "index {i}");
        }
    }

    #[test]
    fn locate_agrees_with_schedule_walk() {
        // Walk the segment schedule item by item and compare against the
        // closed-form index arithmetic.
        let mut cursor = SqCursor::new();
        let mut segment = 0u64;
        let mut cap = cursor.next_capacity();
        let mut offset = 0u64;
        for i in 0..1u64 << 16 {
            if offset == cap {
                segment += 1;
                cap = cursor.next_capacity();
                offset = 0;
            }
            assert_eq!(locate(i), Location { segment, offset }, "index {i}");
            offset += 1;
        }
    }

    #[test]
    fn segment_count_closed_form() {
        let mut total = 0u64;
        for j in 0..40u64 {
            assert_eq!(segments_before_superblock(j), total, "superblock {j}");
            total += 1 << (j / 2);
        }
    }

    #[test]
    fn empty_list_has_no_footprint() {
        let a = arena();
        let list = SqArray::<u32>::new();
        assert!(list.is_empty());
        assert_eq!(list.stats(), SqStats::default());
        assert_eq!(list.get(&a, 0), None);
        assert_eq!(list.iter(&a).count(), 0);
    }

    #[test]
    fn single_posting_footprint() {
        let (a, list) = filled(&[42]);
        let s = list.stats();
        assert_eq!(s, SqStats {
            components: 1,
            allocated_units: 1,
            waste_units: 0,
            dope_capacity: 1,
            dope_used: 1,
            discarded_dope_units: 0,
        });
        assert_eq!(list.get(&a, 0), Some(42));
    }

    #[test]
    fn four_postings_trigger_two_dope_doublings() {
        let (_, list) = filled(&[1, 2, 3, 4]);
        let s = list.stats();
        assert_eq!(s, SqStats {
            components: 3,
            allocated_units: 5,
            waste_units: 1,
            dope_capacity: 4,
            dope_used: 3,
            discarded_dope_units: 3,
        });
    }

    #[test]
    fn seven_postings_fill_superblocks_exactly() {
        let (a, list) = filled(&[0, 1, 2, 3, 4, 5, 6]);
        let s = list.stats();
        assert_eq!(s, SqStats {
            components: 4,
            allocated_units: 7,
            waste_units: 0,
            dope_capacity: 4,
            dope_used: 4,
            discarded_dope_units: 3,
        });
        assert_eq!(list.last_component_capacity(), 2);
        assert!(list.iter(&a).eq(0..7));
    }

    #[test]
    fn superblock_boundaries_leave_no_waste() {
        for j in 0..=12u64 {
            let n = (1u64 << (j + 1)) - 1;
            let values: Vec<u64> = (0..n).collect();
            let (_, list) = filled(&values);
            assert_eq!(list.stats().waste_units, 0, "after {n} appends");
        }
    }

    #[test]
    fn dope_capacity_tracks_segment_count() {
        let mut a = arena();
        let mut list = SqArray::new();
        for v in 0..200u64 {
            list.append(&mut a, v).unwrap();
            let s = list.stats();
            assert_eq!(s.dope_capacity, s.dope_used.next_power_of_two());
            assert_eq!(s.discarded_dope_units, s.dope_capacity - 1);
        }
    }

    #[test]
    fn thousand_posting_footprint() {
        let values: Vec<u64> = (0..1000).collect();
        let (a, list) = filled(&values);
        let s = list.stats();
        assert_eq!(s, SqStats {
            components: 62,
            allocated_units: 1023,
            waste_units: 23,
            dope_capacity: 64,
            dope_used: 62,
            discarded_dope_units: 63,
        });
        for (i, &v) in values.iter().enumerate() {
            assert_eq!(list.get(&a, i as u64), Some(v));
        }
        assert_eq!(list.get(&a, 1000), None);
    }

    #[test]
    fn million_postings_cap_at_kilobyte_segments() {
        let mut a = arena();
        let mut list = SqArray::new();
        for i in 0..1_000_000u64 {
            list.append(&mut a, i).unwrap();
        }
        let s = list.stats();
        assert_eq!(s.components, 1999);
        assert_eq!(s.allocated_units, 1_000_447);
        assert_eq!(s.waste_units, 447);
        assert_eq!(list.last_component_capacity(), 1024);
        assert_eq!(s.dope_capacity, 2048);
        assert_eq!(s.discarded_dope_units, 2047);
        assert_eq!(
            a.stats().used_units,
            s.allocated_units + s.dope_capacity + s.discarded_dope_units
        );
        // Spot random access deep into the list.
        assert_eq!(list.get(&a, 999_999), Some(999_999));
        assert_eq!(list.get(&a, 123_456), Some(123_456));
    }

    #[test]
    fn interleaved_lists_remain_disjoint() {
        let mut a = arena();
        let mut odd = SqArray::new();
        let mut even = SqArray::new();
        for i in 0..500u64 {
            even.append(&mut a, i * 2).unwrap();
            odd.append(&mut a, i * 2 + 1).unwrap();
        }
        assert!(even.iter(&a).eq((0..500).map(|i| i * 2)));
        assert!(odd.iter(&a).eq((0..500).map(|i| i * 2 + 1)));
        for i in 0..500u64 {
            assert_eq!(even.get(&a, i), Some(i * 2));
            assert_eq!(odd.get(&a, i), Some(i * 2 + 1));
        }
    }

    proptest::proptest! {
        #[test]
        fn iter_and_get_agree_with_appends(values in proptest::collection::vec(0u64..u32::MAX as u64, 0..300)) {
            let (a, list) = filled(&values);
            proptest::prop_assert_eq!(list.len(), values.len() as u64);
            let via_iter: Vec<u64> = list.iter(&a).collect();
            proptest::prop_assert_eq!(&via_iter, &values);
            for (i, &v) in values.iter().enumerate() {
                proptest::prop_assert_eq!(list.get(&a, i as u64), Some(v));
            }
            proptest::prop_assert_eq!(list.get(&a, values.len() as u64), None);
        }
    }
}
