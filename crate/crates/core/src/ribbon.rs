//! Band calculus on a single disk.
//!
//! A [`RibbonSurface`] is a disk with `N` bands attached along its boundary
//! circle. Band `j` owns the two ends `2j` and `2j + 1`; the cyclic order
//! records where every end meets the circle. Boundary curves are traced
//! through *corners*: each end has a left corner (towards the previous slot)
//! and a right corner (towards the next slot). Free arcs of the circle join
//! the right corner of one slot to the left corner of the next. An even band
//! joins left-to-right and right-to-left corners of its two ends; an odd band
//! joins left-to-left and right-to-right.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type EndId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RibbonError {
    #[error("malformed matching: {0}")]
    MalformedMatching(String),
    #[error("slot collision: both ends requested position {0}")]
    SlotCollision(usize),
    #[error("slot {slot} out of range for refined order of length {len}")]
    SlotOutOfRange { slot: usize, len: usize },
    #[error("end {0} does not exist")]
    UnknownEnd(EndId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Band {
    pub ends: (EndId, EndId),
    pub parity: Parity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Corner {
    pub end: EndId,
    pub side: Side,
}

impl Corner {
    fn index(self) -> usize {
        2 * self.end + usize::from(self.side == Side::Right)
    }

    fn from_index(i: usize) -> Corner {
        Corner {
            end: i / 2,
            side: if i.is_multiple_of(2) { Side::Left } else { Side::Right },
        }
    }
}

/// Component ids of the two corners of one band end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EndClasses {
    pub left: usize,
    pub right: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(into = "SurfaceJson")]
pub struct RibbonSurface {
    order: Vec<EndId>,
    parities: Vec<Parity>,
    slot_of: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceJson {
    pub order: Vec<EndId>,
    pub bands: Vec<(EndId, EndId, Parity)>,
}

impl From<RibbonSurface> for SurfaceJson {
    fn from(s: RibbonSurface) -> Self {
        SurfaceJson {
            bands: s.bands().map(|b| (b.ends.0, b.ends.1, b.parity)).collect(),
            order: s.order,
        }
    }
}

impl<'de> Deserialize<'de> for RibbonSurface {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = SurfaceJson::deserialize(deserializer)?;
        RibbonSurface::from_json(raw).map_err(serde::de::Error::custom)
    }
}

/// Classification of a compact surface with nonempty boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    pub boundary_components: usize,
    pub euler_characteristic: i64,
    pub orientable: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub genus: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub crosscap_number: Option<usize>,
}

impl SurfaceInvariants {
    /// Genus when orientable, crosscap number otherwise.
    pub fn genus_or_crosscap(&self) -> usize {
        self.genus.or(self.crosscap_number).unwrap_or(0)
    }
}

/// Result of tracing the boundary: a component id for every corner.
#[derive(Debug, Clone)]
pub struct BoundaryTrace {
    component_of_corner: Vec<usize>,
    count: usize,
    /// Component of the arc that precedes each slot.
    arc_component: Vec<usize>,
    /// Whether the walk runs along that arc in the direction of increasing slots.
    arc_forward: Vec<bool>,
}

impl BoundaryTrace {
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn corner(&self, c: Corner) -> usize {
        self.component_of_corner[c.index()]
    }

    /// Component containing the free arc that ends at slot `slot`
    /// (between slot `slot - 1` and `slot`, cyclically).
    pub fn arc_before_slot(&self, slot: usize) -> usize {
        if self.arc_component.is_empty() {
            0
        } else {
            self.arc_component[slot % self.arc_component.len()]
        }
    }

    /// Direction in which the curve through the arc ending at `slot` runs
    /// along it, relative to its component's traversal.
    pub fn arc_before_slot_forward(&self, slot: usize) -> bool {
        if self.arc_forward.is_empty() {
            true
        } else {
            self.arc_forward[slot % self.arc_forward.len()]
        }
    }
}

impl RibbonSurface {
    /// The bare disk.
    pub fn disk() -> Self {
        RibbonSurface {
            order: Vec::new(),
            parities: Vec::new(),
            slot_of: Vec::new(),
        }
    }

    /// Build from a cyclic order of end ids; band `j` owns ends `2j`, `2j+1`.
    pub fn new(order: Vec<EndId>, parities: Vec<Parity>) -> Result<Self, RibbonError> {
        let n_ends = 2 * parities.len();
        if order.len() != n_ends {
            return Err(RibbonError::MalformedMatching(format!(
                "{} bands need {} ends, order has {}",
                parities.len(),
                n_ends,
                order.len()
            )));
        }
        let mut slot_of = vec![usize::MAX; n_ends];
        for (slot, &end) in order.iter().enumerate() {
            if end >= n_ends {
                return Err(RibbonError::UnknownEnd(end));
            }
            if slot_of[end] != usize::MAX {
                return Err(RibbonError::MalformedMatching(format!(
                    "end {end} appears twice in the order"
                )));
            }
            slot_of[end] = slot;
        }
        Ok(RibbonSurface {
            order,
            parities,
            slot_of,
        })
    }

    /// Accept arbitrary end ids and a band list, relabelling ends so that the
    /// `j`-th listed band owns `2j` and `2j+1`.
    pub fn from_json(raw: SurfaceJson) -> Result<Self, RibbonError> {
        use std::collections::HashMap;
        let mut relabel: HashMap<EndId, EndId> = HashMap::new();
        let mut parities = Vec::with_capacity(raw.bands.len());
        for (j, &(a, b, parity)) in raw.bands.iter().enumerate() {
            if a == b {
                return Err(RibbonError::MalformedMatching(format!(
                    "band {j} joins end {a} to itself"
                )));
            }
            for (end, new) in [(a, 2 * j), (b, 2 * j + 1)] {
                if relabel.insert(end, new).is_some() {
                    return Err(RibbonError::MalformedMatching(format!(
                        "end {end} belongs to two bands"
                    )));
                }
            }
            parities.push(parity);
        }
        let order = raw
            .order
            .iter()
            .map(|e| relabel.get(e).copied().ok_or(RibbonError::UnknownEnd(*e)))
            .collect::<Result<Vec<_>, _>>()?;
        RibbonSurface::new(order, parities)
    }

    pub fn to_json(&self) -> SurfaceJson {
        self.clone().into()
    }

    pub fn num_bands(&self) -> usize {
        self.parities.len()
    }

    pub fn num_ends(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[EndId] {
        &self.order
    }

    pub fn slot_of(&self, end: EndId) -> Option<usize> {
        self.slot_of.get(end).copied()
    }

    pub fn band_of(end: EndId) -> usize {
        end / 2
    }

    pub fn partner(end: EndId) -> EndId {
        end ^ 1
    }

    pub fn parity(&self, band: usize) -> Parity {
        self.parities[band]
    }

    pub fn bands(&self) -> impl Iterator<Item = Band> + '_ {
        self.parities.iter().enumerate().map(|(j, &parity)| Band {
            ends: (2 * j, 2 * j + 1),
            parity,
        })
    }

    /// Trace every boundary curve.
    pub fn trace(&self) -> BoundaryTrace {
        let n_ends = self.num_ends();
        if n_ends == 0 {
            return BoundaryTrace {
                component_of_corner: Vec::new(),
                count: 1,
                arc_component: Vec::new(),
                arc_forward: Vec::new(),
            };
        }
        let n_corners = 2 * n_ends;
        // Each corner has exactly one arc neighbour and one band neighbour.
        let mut arc_mate = vec![0usize; n_corners];
        for slot in 0..n_ends {
            let here = Corner { end: self.order[slot], side: Side::Right }.index();
            let next = Corner {
                end: self.order[(slot + 1) % n_ends],
                side: Side::Left,
            }
            .index();
            arc_mate[here] = next;
            arc_mate[next] = here;
        }
        let mut band_mate = vec![0usize; n_corners];
        for band in self.bands() {
            let (e, f) = band.ends;
            let pairs = match band.parity {
                Parity::Even => [(Side::Left, Side::Right), (Side::Right, Side::Left)],
                Parity::Odd => [(Side::Left, Side::Left), (Side::Right, Side::Right)],
            };
            for (se, sf) in pairs {
                let a = Corner { end: e, side: se }.index();
                let b = Corner { end: f, side: sf }.index();
                band_mate[a] = b;
                band_mate[b] = a;
            }
        }

        let mut component_of_corner = vec![usize::MAX; n_corners];
        let mut arc_forward = vec![true; n_ends];
        let mut count = 0;
        // Label components in order of first appearance walking the circle.
        let walk = self
            .order
            .iter()
            .flat_map(|&e| [Corner { end: e, side: Side::Left }, Corner { end: e, side: Side::Right }]);
        for start in walk {
            let start = start.index();
            if component_of_corner[start] != usize::MAX {
                continue;
            }
            // The corner graph is 2-regular with alternating edge kinds, so
            // an arc hop followed by a band hop walks each cycle once.
            let mut c = start;
            loop {
                component_of_corner[c] = count;
                let corner = Corner::from_index(c);
                let slot = self.slot_of[corner.end];
                match corner.side {
                    Side::Right => arc_forward[(slot + 1) % n_ends] = true,
                    Side::Left => arc_forward[slot] = false,
                }
                c = arc_mate[c];
                component_of_corner[c] = count;
                c = band_mate[c];
                if c == start {
                    break;
                }
            }
            count += 1;
        }

        let arc_component = (0..n_ends)
            .map(|slot| component_of_corner[Corner { end: self.order[slot], side: Side::Left }.index()])
            .collect();
        BoundaryTrace {
            component_of_corner,
            count,
            arc_component,
            arc_forward,
        }
    }

    pub fn boundary_components(&self) -> usize {
        self.trace().count()
    }

    pub fn euler_characteristic(&self) -> i64 {
        1 - self.num_bands() as i64
    }

    pub fn is_orientable(&self) -> bool {
        self.parities.iter().all(|&p| p == Parity::Even)
    }

    pub fn invariants(&self) -> SurfaceInvariants {
        let b = self.boundary_components();
        let chi = self.euler_characteristic();
        let orientable = self.is_orientable();
        // 2 - chi - b is 2g (orientable) or the crosscap number.
        let deficit = (2 - chi - b as i64) as usize;
        let (genus, crosscap_number) = if orientable {
            debug_assert!(deficit.is_multiple_of(2));
            (Some(deficit / 2), None)
        } else {
            (None, Some(deficit))
        };
        SurfaceInvariants {
            boundary_components: b,
            euler_characteristic: chi,
            orientable,
            genus,
            crosscap_number,
        }
    }

    /// Which boundary curves pass the two corners of `end`.
    pub fn boundary_class_of_end(&self, end: EndId) -> Result<EndClasses, RibbonError> {
        if end >= self.num_ends() {
            return Err(RibbonError::UnknownEnd(end));
        }
        let t = self.trace();
        Ok(EndClasses {
            left: t.corner(Corner { end, side: Side::Left }),
            right: t.corner(Corner { end, side: Side::Right }),
        })
    }

    /// Component of the free arc into which an end placed at position `slot`
    /// of the refined order (which also contains an end at `other`) falls.
    pub fn insertion_arc(&self, trace: &BoundaryTrace, slot: usize, other: usize) -> usize {
        let old_before = slot - usize::from(other < slot);
        trace.arc_before_slot(old_before)
    }

    /// Attach a new band whose ends land at positions `slots` of the refined
    /// cyclic order (length `num_ends() + 2`). The new band's first end sits
    /// at `slots.0` and gets id `2N`, the second at `slots.1` with id `2N+1`.
    pub fn add_band(&self, slots: (usize, usize), parity: Parity) -> Result<RibbonSurface, RibbonError> {
        let len = self.num_ends() + 2;
        let (p, q) = slots;
        for s in [p, q] {
            if s >= len {
                return Err(RibbonError::SlotOutOfRange { slot: s, len });
            }
        }
        if p == q {
            return Err(RibbonError::SlotCollision(p));
        }
        let first = 2 * self.num_bands();
        let mut old = self.order.iter().copied();
        let order: Vec<EndId> = (0..len)
            .map(|slot| {
                if slot == p {
                    first
                } else if slot == q {
                    first + 1
                } else {
                    old.next().expect("old ends fill the remaining slots")
                }
            })
            .collect();
        let mut parities = self.parities.clone();
        parities.push(parity);
        RibbonSurface::new(order, parities)
    }

    /// Twist parity of a band at `slots` measured along the boundary curve
    /// it attaches to. A curve that runs along the two insertion arcs in
    /// opposite directions around the disk adds a half twist.
    pub fn relative_parity(&self, trace: &BoundaryTrace, slots: (usize, usize), parity: Parity) -> Parity {
        let sense = |slot: usize, other: usize| {
            trace.arc_before_slot_forward(slot - usize::from(other < slot))
        };
        if sense(slots.0, slots.1) == sense(slots.1, slots.0) {
            parity
        } else {
            match parity {
                Parity::Even => Parity::Odd,
                Parity::Odd => Parity::Even,
            }
        }
    }

    /// Boundary-count change that adding a band at `slots` must produce:
    /// ends on different curves merge them, ends on one curve split it when
    /// the band is even along that curve and leave the count unchanged when
    /// it is odd.
    pub fn predicted_delta(&self, slots: (usize, usize), parity: Parity) -> i64 {
        let trace = self.trace();
        let c1 = self.insertion_arc(&trace, slots.0, slots.1);
        let c2 = self.insertion_arc(&trace, slots.1, slots.0);
        match (c1 == c2, self.relative_parity(&trace, slots, parity)) {
            (false, _) => -1,
            (true, Parity::Even) => 1,
            (true, Parity::Odd) => 0,
        }
    }

    /// Every corner, for partition checks.
    pub fn corners(&self) -> impl Iterator<Item = Corner> {
        (0..2 * self.num_ends()).map(Corner::from_index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_band(parity: Parity) -> RibbonSurface {
        RibbonSurface::disk().add_band((0, 1), parity).unwrap()
    }

    fn rainbow(n: usize) -> RibbonSurface {
        let mut order: Vec<EndId> = (0..n).map(|j| 2 * j).collect();
        order.extend((0..n).rev().map(|j| 2 * j + 1));
        RibbonSurface::new(order, vec![Parity::Even; n]).unwrap()
    }

    #[test]
    fn single_band_counts() {
        assert_eq!(one_band(Parity::Even).boundary_components(), 2);
        assert_eq!(one_band(Parity::Odd).boundary_components(), 1);
    }

    #[test]
    fn rainbow_counts() {
        for n in 1..=8 {
            assert_eq!(rainbow(n).boundary_components(), n + 1, "n = {n}");
        }
    }

    #[test]
    fn disk_invariants() {
        let inv = RibbonSurface::disk().invariants();
        assert_eq!(inv.boundary_components, 1);
        assert_eq!(inv.euler_characteristic, 1);
        assert!(inv.orientable);
        assert_eq!(inv.genus, Some(0));
    }

    #[test]
    fn klein_bottle_with_one_hole() {
        // two odd bands side by side
        let s = RibbonSurface::new(vec![0, 1, 2, 3], vec![Parity::Odd, Parity::Odd]).unwrap();
        let inv = s.invariants();
        assert_eq!(inv.boundary_components, 1);
        assert_eq!(inv.euler_characteristic, -1);
        assert_eq!(inv.crosscap_number, Some(2));
    }

    #[test]
    fn even_band_across_a_mobius_band() {
        // the single curve runs along the two arcs in opposite directions
        let m = RibbonSurface::new(vec![0, 1], vec![Parity::Odd]).unwrap();
        assert_eq!(m.predicted_delta((0, 2), Parity::Even), 0);
        assert_eq!(m.predicted_delta((0, 2), Parity::Odd), 1);
        assert_eq!(m.add_band((0, 2), Parity::Even).unwrap().boundary_components(), 1);
        assert_eq!(m.add_band((0, 2), Parity::Odd).unwrap().boundary_components(), 2);
        // both ends in one arc: no reversal
        assert_eq!(m.predicted_delta((0, 1), Parity::Even), 1);
        assert_eq!(m.add_band((0, 1), Parity::Even).unwrap().boundary_components(), 2);
    }

    #[test]
    fn interlaced_odd_bands() {
        let s = RibbonSurface::new(vec![0, 2, 1, 3], vec![Parity::Odd, Parity::Odd]).unwrap();
        let inv = s.invariants();
        assert_eq!(inv.boundary_components, 2);
        assert_eq!(inv.crosscap_number, Some(1));
    }

    #[test]
    fn torus_with_three_holes() {
        // interlaced pair then two nested bands
        let s = RibbonSurface::new(vec![0, 2, 1, 3, 4, 6, 7, 5], vec![Parity::Even; 4]).unwrap();
        let inv = s.invariants();
        assert_eq!(inv.boundary_components, 3);
        assert_eq!(inv.euler_characteristic, -3);
        assert_eq!(inv.genus, Some(1));
    }

    #[test]
    fn add_band_cases() {
        let disk = RibbonSurface::disk();
        assert_eq!(disk.add_band((0, 1), Parity::Even).unwrap().boundary_components(), 2);
        assert_eq!(disk.add_band((1, 0), Parity::Odd).unwrap().boundary_components(), 1);

        // Annulus [a, a']: the arc before a' and the arc before a lie on
        // different curves. Slots 1 and 3 of the refined order hit both.
        let annulus = one_band(Parity::Even);
        assert_eq!(annulus.predicted_delta((1, 3), Parity::Even), -1);
        let merged = annulus.add_band((1, 3), Parity::Even).unwrap();
        assert_eq!(merged.boundary_components(), 1);
    }

    #[test]
    fn slot_errors() {
        let disk = RibbonSurface::disk();
        assert_eq!(disk.add_band((0, 0), Parity::Even), Err(RibbonError::SlotCollision(0)));
        assert!(matches!(
            disk.add_band((0, 2), Parity::Even),
            Err(RibbonError::SlotOutOfRange { slot: 2, len: 2 })
        ));
    }

    #[test]
    fn end_classes() {
        let annulus = one_band(Parity::Even);
        for end in 0..2 {
            let c = annulus.boundary_class_of_end(end).unwrap();
            assert_ne!(c.left, c.right);
        }
        let mobius = one_band(Parity::Odd);
        for end in 0..2 {
            let c = mobius.boundary_class_of_end(end).unwrap();
            assert_eq!((c.left, c.right), (0, 0));
        }
        // a1 a2 a2' a1': the curve running between a2 and a2' passes the
        // right corner of a2 and the left corner of a2'.
        let nested = rainbow(2);
        let a2 = nested.boundary_class_of_end(2).unwrap();
        let a2p = nested.boundary_class_of_end(3).unwrap();
        assert_eq!(a2.right, a2p.left);
        assert!(nested.boundary_class_of_end(4).is_err());
    }

    #[test]
    fn malformed_inputs() {
        assert!(RibbonSurface::new(vec![0, 0], vec![Parity::Even]).is_err());
        assert!(RibbonSurface::new(vec![0], vec![Parity::Even]).is_err());
        let dup = SurfaceJson {
            order: vec![5, 7, 9],
            bands: vec![(5, 7, Parity::Even), (7, 9, Parity::Even)],
        };
        assert!(RibbonSurface::from_json(dup).is_err());
    }

    #[test]
    fn json_relabels_ends() {
        let raw: SurfaceJson =
            serde_json::from_str(r#"{"order":[10,20,11,21],"bands":[[10,11,"odd"],[20,21,"odd"]]}"#).unwrap();
        let s = RibbonSurface::from_json(raw).unwrap();
        assert_eq!(s.order(), &[0, 2, 1, 3]);
        assert_eq!(s.invariants().crosscap_number, Some(1));
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"order":[0,2,1,3],"bands":[[0,1,"odd"],[2,3,"odd"]]}"#);
        let back: RibbonSurface = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }
}
