//! The five-phase packing algorithm.
//!
//! Disks are packed in descending order. Two huge disks shrink the container
//! (phase 1); large disks go along the container boundary (phase 2); the rest
//! fill concentric rings from the outside in (phases 3 to 5), alternating
//! between the outer and inner ring boundary.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{
    center_penetration, inscribed_disk_after_two, place_in_ring, place_tangent, ContainerDisk, GeomError,
    PlacedDisk, Point, RingShape, Side,
};

/// Radii below this are rejected; they are under verifier resolution.
pub const MIN_RADIUS: f64 = 1e-9;

/// Two largest pending disks at least this fraction of the container trigger
/// the recursion.
pub const RECURSION_RATIO: f64 = 0.495;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InstanceError {
    #[error("instance has no disks")]
    Empty,
    #[error("radius #{index} = {radius} is not a finite value >= {MIN_RADIUS}")]
    BadRadius { index: usize, radius: f64 },
}

/// Radii of the disks to pack, in units of the container radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub radii: Vec<f64>,
}

impl InstanceSpec {
    pub fn new(radii: Vec<f64>) -> Result<Self, InstanceError> {
        if radii.is_empty() {
            return Err(InstanceError::Empty);
        }
        if let Some((index, &radius)) = radii
            .iter()
            .enumerate()
            .find(|(_, r)| !r.is_finite() || **r < MIN_RADIUS)
        {
            return Err(InstanceError::BadRadius { index, radius });
        }
        Ok(Self { radii })
    }

    pub fn total_area(&self) -> f64 {
        self.radii.iter().map(|r| std::f64::consts::PI * r * r).sum()
    }

    /// Radii in the order the engine consumes them (stable, descending).
    pub fn sorted_desc(&self) -> Vec<f64> {
        let mut radii = self.radii.clone();
        radii.sort_by(|a, b| b.total_cmp(a));
        radii
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingState {
    Open,
    Closed,
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingRecord {
    pub shape: RingShape,
    pub state: RingState,
    pub last_angle: f64,
    pub last_side: Side,
    /// Indices into the placed disks, in packing order.
    pub placed: Vec<usize>,
}

impl RingRecord {
    fn open(shape: RingShape) -> Self {
        Self {
            shape,
            state: RingState::Open,
            last_angle: 0.0,
            last_side: Side::Inner,
            placed: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum PhaseEvent {
    Recursion { container: ContainerDisk },
    BoundaryPacking { container: ContainerDisk, threshold: f64, placed: usize },
    RingCreated { ring: usize, shape: RingShape },
    RingPacked { ring: usize, state: RingState, placed: usize },
    RingSplit { parent: usize, outer: usize, inner: usize },
    ContainerShrunk { container: ContainerDisk },
    CentralFallback { container: ContainerDisk, radius: f64 },
    Aborted { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingResult {
    pub placements: Vec<PlacedDisk>,
    pub unplaced: Vec<f64>,
    pub phase_trace: Vec<PhaseEvent>,
    pub complete: bool,
}

impl PackingResult {
    /// Ring shapes in creation order, as recorded in the trace.
    pub fn rings(&self) -> impl Iterator<Item = &RingShape> {
        self.phase_trace.iter().filter_map(|e| match e {
            PhaseEvent::RingCreated { shape, .. } => Some(shape),
            _ => None,
        })
    }
}

/// The engine's mutable world.
#[derive(Debug, Clone)]
pub struct PackingState {
    pub container: ContainerDisk,
    pub rings: Vec<RingRecord>,
    pub threshold: f64,
    pub r_min: f64,
    pub placed: Vec<PlacedDisk>,
    pub pending: VecDeque<f64>,
    pub trace: Vec<PhaseEvent>,
}

impl PackingState {
    pub fn new(instance: &InstanceSpec) -> Self {
        Self {
            container: ContainerDisk::unit(),
            rings: Vec::new(),
            threshold: 0.5,
            r_min: 1.0,
            placed: Vec::new(),
            pending: instance.sorted_desc().into(),
            trace: Vec::new(),
        }
    }

    /// Disks that can touch an anchor circle of radius `anchor` around `center`.
    fn near(&self, center: Point, anchor: f64, r: f64) -> Vec<PlacedDisk> {
        self.placed
            .iter()
            .filter(|q| (q.center.distance(center) - anchor).abs() < r + q.radius)
            .copied()
            .collect()
    }

    fn max_angle<'a>(center: Point, disks: impl Iterator<Item = &'a PlacedDisk>) -> f64 {
        disks
            .filter(|d| d.center.distance(center) > 1e-12)
            .map(|d| d.center.angle_from(center))
            .fold(0.0, f64::max)
    }

    /// Largest polar angle of a disk center among disks meeting `c`.
    fn container_floor(&self, c: &ContainerDisk) -> f64 {
        Self::max_angle(c.center, self.placed.iter().filter(|d| c.meets(d)))
    }

    fn ring_floor(&self, ring: &RingShape) -> f64 {
        Self::max_angle(ring.center, self.placed.iter().filter(|d| ring.meets(d)))
    }

    /// Pack pending disks along the boundary of `c` until one is smaller than
    /// `threshold` or does not fit. Returns the number of disks placed.
    pub fn boundary_packing(&mut self, c: ContainerDisk, threshold: f64) -> usize {
        let mut floor = self.container_floor(&c);
        let mut count = 0;
        while let Some(&r) = self.pending.front() {
            if r < threshold || r > c.radius {
                break;
            }
            let prev = self.near(c.center, c.radius - r, r);
            match place_tangent(&c, r, floor, &prev) {
                Ok(Some(disk)) => {
                    floor = disk.center.angle_from(c.center);
                    self.placed.push(disk);
                    self.pending.pop_front();
                    count += 1;
                }
                Ok(None) | Err(_) => break,
            }
        }
        self.trace.push(PhaseEvent::BoundaryPacking { container: c, threshold, placed: count });
        count
    }

    /// Create the ring `R[r_min, r_min − 2r]` and lower `r_min`. `None` when
    /// the ring would reach the center.
    pub fn create_ring(&mut self, r: f64) -> Option<usize> {
        let r_in = self.r_min - 2.0 * r;
        if !(r_in > 0.0) {
            return None;
        }
        let shape = RingShape::new(self.container.center, self.r_min, r_in).ok()?;
        self.r_min = r_in;
        Some(self.push_ring(shape))
    }

    fn push_ring(&mut self, shape: RingShape) -> usize {
        self.rings.push(RingRecord::open(shape));
        let ring = self.rings.len() - 1;
        self.trace.push(PhaseEvent::RingCreated { ring, shape });
        ring
    }

    /// Pack pending disks into an open ring, alternating outer and inner
    /// boundary. The ring ends `Full` when a disk does not fit and `Closed`
    /// when two consecutive disks could pass each other; it stays `Open` only
    /// if the pending queue runs dry.
    pub fn ring_packing(&mut self, ring: usize) -> RingState {
        let shape = self.rings[ring].shape;
        let width = shape.width();
        let mut floor = self.ring_floor(&shape);
        let mut side = Side::Outer;
        let mut last_r: Option<f64> = None;
        let mut count = 0;
        let mut state = RingState::Open;

        while let Some(&r) = self.pending.front() {
            if let Some(prev_r) = last_r {
                if 2.0 * prev_r + 2.0 * r < width {
                    state = RingState::Closed;
                    break;
                }
            }
            let anchor = match side {
                Side::Outer => shape.r_out - r,
                Side::Inner => shape.r_in + r,
            };
            let prev = self.near(shape.center, anchor, r);
            match place_in_ring(&shape, side, floor, &prev, r) {
                Ok(Some(disk)) => {
                    floor = disk.center.angle_from(shape.center);
                    self.placed.push(disk);
                    self.pending.pop_front();
                    let record = &mut self.rings[ring];
                    record.placed.push(self.placed.len() - 1);
                    record.last_angle = floor;
                    record.last_side = side;
                    last_r = Some(r);
                    side = side.flip();
                    count += 1;
                }
                Ok(None) | Err(GeomError::TooWide { .. }) => {
                    state = RingState::Full;
                    break;
                }
                Err(_) => {
                    state = RingState::Full;
                    break;
                }
            }
        }
        self.rings[ring].state = state;
        self.trace.push(PhaseEvent::RingPacked { ring, state, placed: count });
        state
    }

    /// Split a closed ring when the two largest pending disks can pass each
    /// other inside it.
    fn manage_closed(&mut self, ring: usize) {
        let Some(&ri) = self.pending.front() else { return };
        let rj = self.pending.get(1).copied().unwrap_or(0.0);
        let shape = self.rings[ring].shape;
        if 2.0 * ri + 2.0 * rj <= shape.width() {
            let mid = shape.r_out - 2.0 * ri;
            let (Ok(outer), Ok(inner)) = (
                RingShape::new(shape.center, shape.r_out, mid),
                RingShape::new(shape.center, mid, shape.r_in),
            ) else {
                return;
            };
            let outer = self.push_ring(outer);
            let inner = self.push_ring(inner);
            self.trace.push(PhaseEvent::RingSplit { parent: ring, outer, inner });
        }
    }

    fn open_ring_with_largest_inner_radius(&self) -> Option<usize> {
        self.rings
            .iter()
            .enumerate()
            .filter(|(_, r)| r.state == RingState::Open)
            .max_by(|a, b| a.1.shape.r_in.total_cmp(&b.1.shape.r_in).then(b.0.cmp(&a.0)))
            .map(|(i, _)| i)
    }

    /// Phase 1: while the two largest pending disks are both huge relative to
    /// the container, put them on its boundary and recurse into the largest
    /// disk left over.
    fn recurse(&mut self) {
        while self.pending.len() >= 2 {
            let c = self.container;
            let (r1, r2) = (self.pending[0], self.pending[1]);
            if r1 < RECURSION_RATIO * c.radius || r2 < RECURSION_RATIO * c.radius {
                break;
            }
            let before = self.placed.len();
            self.boundary_packing_exact(c, 2);
            if self.placed.len() - before < 2 {
                break;
            }
            let (d1, d2) = (self.placed[before], self.placed[before + 1]);
            let next = inscribed_disk_after_two(&c, &d1, &d2);
            self.container = next;
            self.threshold = next.radius;
            self.r_min = next.radius;
            self.rings.clear();
            self.trace.push(PhaseEvent::Recursion { container: next });
        }
    }

    /// Boundary packing limited to the next `n` disks.
    fn boundary_packing_exact(&mut self, c: ContainerDisk, n: usize) {
        let rest = self.pending.split_off(n.min(self.pending.len()));
        self.boundary_packing(c, 0.0);
        self.pending.extend(rest);
    }

    fn run(&mut self) -> bool {
        self.recurse();
        let mut last_progress: Option<(usize, usize)> = None;
        loop {
            if self.pending.is_empty() {
                return true;
            }
            let progress = (self.placed.len(), self.rings.len());
            if last_progress == Some(progress) {
                self.trace.push(PhaseEvent::Aborted {
                    reason: format!(
                        "no progress in a full cycle with {} disks pending (largest {})",
                        self.pending.len(),
                        self.pending[0]
                    ),
                });
                return false;
            }
            last_progress = Some(progress);

            // Phase 2.
            let c = self.container;
            let d = center_penetration(&c, &self.placed);
            self.threshold = (c.radius - d) / 4.0;
            self.boundary_packing(c, self.threshold);

            // Phases 3 to 5.
            loop {
                let Some(&ri) = self.pending.front() else { return true };
                let ring = match self.open_ring_with_largest_inner_radius() {
                    Some(ring) => ring,
                    None => match self.create_ring(ri) {
                        Some(ring) => ring,
                        None => {
                            let central = ContainerDisk::new(self.container.center, self.r_min);
                            self.container = central;
                            self.trace.push(PhaseEvent::CentralFallback { container: central, radius: ri });
                            break;
                        }
                    },
                };
                if self.ring_packing(ring) == RingState::Closed {
                    self.manage_closed(ring);
                }
                if self.pending.is_empty() {
                    return true;
                }
                if self.open_ring_with_largest_inner_radius().is_none() {
                    let shrunk = ContainerDisk::new(self.container.center, self.r_min);
                    self.container = shrunk;
                    self.threshold = shrunk.radius;
                    self.trace.push(PhaseEvent::ContainerShrunk { container: shrunk });
                    break;
                }
            }
        }
    }

    pub fn into_result(self, complete: bool) -> PackingResult {
        PackingResult {
            placements: self.placed,
            unplaced: self.pending.into_iter().collect(),
            phase_trace: self.trace,
            complete,
        }
    }
}

/// Pack `instance` into the unit disk.
pub fn pack(instance: &InstanceSpec) -> PackingResult {
    let mut state = PackingState::new(instance);
    let complete = state.run();
    let complete = complete && state.pending.is_empty();
    state.into_result(complete)
}
