//! Bump allocator over large fixed-size blocks.
//!
//! All postings data lives in one arena per index. The arena hands out
//! [`UnitHandle`]s — plain unit offsets into a flat address space — rather
//! than pointers, so a handle occupies exactly one memory unit and can be
//! stored inside the structures themselves (chunk links, dope vector
//! entries). Nothing is ever freed; superseded regions (old dope vectors)
//! are simply abandoned in place, which keeps allocation branch-free and
//! makes total memory use a pure function of the allocation history.
//!
//! Address layout: regular blocks occupy ascending addresses from zero, each
//! `block_units` wide, and requests are bump-allocated within the newest
//! block. A request larger than one block gets a dedicated block of exactly
//! its size; those grow downward from the top of the address space. The
//! all-ones address is reserved as the null handle.

use std::marker::PhantomData;

use thiserror::Error;

/// Unit widths supported by [`validate_config`] and the index builders.
pub const SUPPORTED_UNIT_BYTES: [u64; 2] = [4, 8];

mod sealed {
    pub trait Sealed {}
    impl Sealed for u32 {}
    impl Sealed for u64 {}
}

/// A memory unit: the word size everything in the arena is measured in.
///
/// Implemented for `u32` (4-byte units, 4 GiB of addressable payload) and
/// `u64` (8-byte units). Postings and handles must each fit in one unit.
pub trait Unit:
    sealed::Sealed + Copy + Eq + Ord + std::fmt::Debug + Send + Sync + 'static
{
    const BYTES: u64;
    const ZERO: Self;
    /// Highest encodable address, reserved for the null handle.
    const NULL_ADDR: u64;

    fn from_u64(v: u64) -> Self;
    fn to_u64(self) -> u64;
    fn checked_from_u64(v: u64) -> Option<Self>;
}

impl Unit for u32 {
    const BYTES: u64 = 4;
    const ZERO: Self = 0;
    const NULL_ADDR: u64 = u32::MAX as u64;

    #[inline]
    fn from_u64(v: u64) -> Self {
        debug_assert!(v <= u32::MAX as u64);
        v as u32
    }

    #[inline]
    fn to_u64(self) -> u64 {
        self as u64
    }

    #[inline]
    fn checked_from_u64(v: u64) -> Option<Self> {
        u32::try_from(v).ok()
    }
}

impl Unit for u64 {
    const BYTES: u64 = 8;
    const ZERO: Self = 0;
    const NULL_ADDR: u64 = u64::MAX;

    #[inline]
    fn from_u64(v: u64) -> Self {
        v
    }

    #[inline]
    fn to_u64(self) -> u64 {
        self
    }

    #[inline]
    fn checked_from_u64(v: u64) -> Option<Self> {
        Some(v)
    }
}

/// A single-unit reference to an arena location.
///
/// Handles are just unit addresses, so they can be written into arena memory
/// (chunk link words, dope entries) and read back with no translation. The
/// all-ones address is the null handle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct UnitHandle<U: Unit> {
    addr: U,
}

impl<U: Unit> UnitHandle<U> {
    #[inline]
    pub fn null() -> Self {
        Self { addr: U::from_u64(U::NULL_ADDR) }
    }

    #[inline]
    pub fn is_null(self) -> bool {
        self.addr.to_u64() == U::NULL_ADDR
    }

    #[inline]
    pub fn addr(self) -> u64 {
        self.addr.to_u64()
    }

    #[inline]
    pub fn from_addr(addr: u64) -> Self {
        Self { addr: U::from_u64(addr) }
    }

    /// The handle as a storable memory unit.
    #[inline]
    pub fn to_unit(self) -> U {
        self.addr
    }

    /// Reinterprets a stored unit as a handle.
    #[inline]
    pub fn from_unit(unit: U) -> Self {
        Self { addr: unit }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ArenaError {
    #[error("invalid arena configuration: {0}")]
    Config(String),
    #[error("arena address space exhausted: requested {requested} units, {available} available")]
    Capacity { requested: u64, available: u64 },
}

/// Checks an arena configuration expressed in raw numbers, as supplied on a
/// command line: `unit_bytes` must be 4 or 8 and `block_bytes` a positive
/// multiple of it.
pub fn validate_config(block_bytes: u64, unit_bytes: u64) -> Result<(), ArenaError> {
    if !SUPPORTED_UNIT_BYTES.contains(&unit_bytes) {
        return Err(ArenaError::Config(format!(
            "unit_bytes must be one of {SUPPORTED_UNIT_BYTES:?}, got {unit_bytes}"
        )));
    }
    if block_bytes == 0 || block_bytes % unit_bytes != 0 {
        return Err(ArenaError::Config(format!(
            "block_bytes must be a positive multiple of unit_bytes ({unit_bytes}), got {block_bytes}"
        )));
    }
    Ok(())
}

/// Snapshot of arena consumption.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ArenaStats {
    /// Regular (non-oversize) blocks acquired so far.
    pub blocks: u64,
    /// Bytes acquired from the underlying allocator, including oversize blocks.
    pub total_bytes: u64,
    /// Units handed out to callers.
    pub used_units: u64,
    /// Units stranded at the tails of closed regular blocks.
    pub wasted_block_tail_units: u64,
    pub oversize_blocks: u64,
    pub oversize_bytes: u64,
}

struct OversizeBlock<U> {
    base: u64,
    data: Box<[U]>,
}

/// Bump allocator handing out [`UnitHandle`]s; see the module docs for the
/// address-space layout.
pub struct Arena<U: Unit> {
    blocks: Vec<Box<[U]>>,
    /// Oversize blocks in allocation order; bases strictly descend.
    oversize: Vec<OversizeBlock<U>>,
    block_units: u64,
    block_bytes: u64,
    /// `log2(block_units)` when `block_units` is a power of two.
    shift: Option<u32>,
    /// Units used in the newest regular block.
    fill: u64,
    /// One past the last address covered by regular blocks.
    regular_end: u64,
    /// Lowest address occupied by any oversize block; regular growth must
    /// stay below this. Starts at the configured address-space limit.
    oversize_floor: u64,
    used_units: u64,
    wasted_tail_units: u64,
    _marker: PhantomData<U>,
}

impl<U: Unit> Arena<U> {
    /// Creates an arena with the given block size in bytes. No memory is
    /// acquired until the first allocation.
    pub fn new(block_bytes: u64) -> Result<Self, ArenaError> {
        Self::with_unit_limit(block_bytes, U::NULL_ADDR)
    }

    /// Like [`Arena::new`] but with the usable address space capped at
    /// `unit_limit` units. The natural limit is `U::NULL_ADDR`; smaller
    /// caps exist for deployments with a memory budget and for exercising
    /// capacity-exhaustion paths in tests without allocating gigabytes.
    pub fn with_unit_limit(block_bytes: u64, unit_limit: u64) -> Result<Self, ArenaError> {
        validate_config(block_bytes, U::BYTES)?;
        let block_units = block_bytes / U::BYTES;
        Ok(Self {
            blocks: Vec::new(),
            oversize: Vec::new(),
            block_units,
            block_bytes,
            shift: block_units
                .is_power_of_two()
                .then(|| block_units.trailing_zeros()),
            fill: 0,
            regular_end: 0,
            oversize_floor: unit_limit.min(U::NULL_ADDR),
            used_units: 0,
            wasted_tail_units: 0,
            _marker: PhantomData,
        })
    }

    #[inline]
    pub fn block_units(&self) -> u64 {
        self.block_units
    }

    /// Allocates `n_units` (≥ 1) contiguous zeroed units.
    ///
    /// Requests that fit in a block are bump-allocated, opening a fresh
    /// block when the current one cannot hold the request (the remainder of
    /// the old block is abandoned and counted as tail waste). Larger
    /// requests get a dedicated block of exactly `n_units`.
    pub fn alloc(&mut self, n_units: u64) -> Result<UnitHandle<U>, ArenaError> {
        assert!(n_units >= 1, "alloc of zero units");
        if n_units > self.block_units {
            return self.alloc_oversize(n_units);
        }
        if self.blocks.is_empty() || self.fill + n_units > self.block_units {
            self.open_block(n_units)?;
        }
        let addr = self.regular_end - self.block_units + self.fill;
        self.fill += n_units;
        self.used_units += n_units;
        Ok(UnitHandle::from_addr(addr))
    }

    fn open_block(&mut self, requested: u64) -> Result<(), ArenaError> {
        let room_in_open_block = if self.blocks.is_empty() {
            0
        } else {
            self.block_units - self.fill
        };
        let new_end = self
            .regular_end
            .checked_add(self.block_units)
            .filter(|&end| end <= self.oversize_floor)
            .ok_or(ArenaError::Capacity {
                requested,
                available: room_in_open_block + (self.oversize_floor - self.regular_end),
            })?;
        if !self.blocks.is_empty() {
            self.wasted_tail_units += self.block_units - self.fill;
        }
        self.blocks.push(zeroed(self.block_units));
        self.fill = 0;
        self.regular_end = new_end;
        Ok(())
    }

    fn alloc_oversize(&mut self, n_units: u64) -> Result<UnitHandle<U>, ArenaError> {
        let base = self
            .oversize_floor
            .checked_sub(n_units)
            .filter(|&base| base >= self.regular_end)
            .ok_or(ArenaError::Capacity {
                requested: n_units,
                available: self.oversize_floor - self.regular_end,
            })?;
        self.oversize.push(OversizeBlock { base, data: zeroed(n_units) });
        self.oversize_floor = base;
        self.used_units += n_units;
        Ok(UnitHandle::from_addr(base))
    }

    #[inline]
    fn locate(&self, addr: u64) -> (&[U], usize) {
        if addr < self.regular_end {
            let (block, offset) = match self.shift {
                Some(s) => (addr >> s, addr & (self.block_units - 1)),
                None => (addr / self.block_units, addr % self.block_units),
            };
            (&self.blocks[block as usize], offset as usize)
        } else {
            // Bases strictly descend, so the owning block is the first one
            // at or below `addr`.
            let i = self.oversize.partition_point(|b| b.base > addr);
            let block = &self.oversize[i];
            (&block.data, (addr - block.base) as usize)
        }
    }

    #[inline]
    fn locate_mut(&mut self, addr: u64) -> (&mut [U], usize) {
        if addr < self.regular_end {
            let (block, offset) = match self.shift {
                Some(s) => (addr >> s, addr & (self.block_units - 1)),
                None => (addr / self.block_units, addr % self.block_units),
            };
            (&mut self.blocks[block as usize], offset as usize)
        } else {
            let i = self.oversize.partition_point(|b| b.base > addr);
            let block = &mut self.oversize[i];
            (&mut block.data, (addr - block.base) as usize)
        }
    }

    /// Reads the unit at `handle + offset`.
    #[inline]
    pub fn get(&self, handle: UnitHandle<U>, offset: u64) -> U {
        let (data, i) = self.locate(handle.addr() + offset);
        data[i]
    }

    /// Writes the unit at `handle + offset`.
    #[inline]
    pub fn set(&mut self, handle: UnitHandle<U>, offset: u64, value: U) {
        let (data, i) = self.locate_mut(handle.addr() + offset);
        data[i] = value;
    }

    /// Borrows `len` units starting at `handle + offset`. The range must lie
    /// within a single allocation, which holds for any range inside a
    /// region returned by [`Arena::alloc`].
    #[inline]
    pub fn slice(&self, handle: UnitHandle<U>, offset: u64, len: u64) -> &[U] {
        let (data, i) = self.locate(handle.addr() + offset);
        &data[i..i + len as usize]
    }

    /// Mutable variant of [`Arena::slice`].
    #[inline]
    pub fn slice_mut(&mut self, handle: UnitHandle<U>, offset: u64, len: u64) -> &mut [U] {
        let (data, i) = self.locate_mut(handle.addr() + offset);
        &mut data[i..i + len as usize]
    }

    /// Copies `len` units from one allocation to another (used when a dope
    /// vector is rehoused). The regions must not overlap.
    pub fn copy_units(&mut self, src: UnitHandle<U>, dst: UnitHandle<U>, len: u64) {
        if len == 0 {
            return;
        }
        // Source and destination may live in different blocks; a bounce
        // buffer keeps this safe and simple, and the path is cold (a handful
        // of copies per term, geometrically spaced).
        let tmp: Vec<U> = self.slice(src, 0, len).to_vec();
        self.slice_mut(dst, 0, len).copy_from_slice(&tmp);
    }

    pub fn stats(&self) -> ArenaStats {
        let oversize_bytes: u64 =
            self.oversize.iter().map(|b| b.data.len() as u64 * U::BYTES).sum();
        ArenaStats {
            blocks: self.blocks.len() as u64,
            total_bytes: self.blocks.len() as u64 * self.block_bytes + oversize_bytes,
            used_units: self.used_units,
            wasted_block_tail_units: self.wasted_tail_units,
            oversize_blocks: self.oversize.len() as u64,
            oversize_bytes,
        }
    }

    /// Bytes acquired from the underlying allocator.
    pub fn total_bytes(&self) -> u64 {
        self.stats().total_bytes
    }
}

fn zeroed<U: Unit>(n: u64) -> Box<[U]> {
    vec![U::ZERO; n as usize].into_boxed_slice()
}
