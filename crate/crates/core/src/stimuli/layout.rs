use std::f64::consts::TAU;

use rand::Rng;

/// Position in units of visual-field radii; fixation starts at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn polar(radius: f64, angle: f64) -> Self {
        Point {
            x: radius * angle.cos(),
            y: radius * angle.sin(),
        }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn norm(self) -> f64 {
        self.distance(Point::ORIGIN)
    }
}

/// Ring geometry for generated displays.
#[derive(Debug, Clone, PartialEq)]
pub struct LayoutParams {
    /// Radius of the innermost ring.
    pub ring_radius: f64,
    /// Maximum items per ring before another ring is added.
    pub ring_capacity: usize,
    /// Radial gap between successive rings.
    pub ring_spacing: f64,
}

impl Default for LayoutParams {
    fn default() -> Self {
        LayoutParams {
            ring_radius: 0.5,
            ring_capacity: 12,
            ring_spacing: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisplayLayout {
    pub positions: Vec<Point>,
    pub ring_radii: Vec<f64>,
}

/// Places `set_size` items on concentric rings around fixation.
///
/// The number of rings is `ceil(set_size / ring_capacity)`; items are split
/// across rings as evenly as possible (inner rings take the remainder) and
/// sit at equal angular spacing, each ring rotated by an independent
/// uniform angle.
pub fn layout_radial<R: Rng + ?Sized>(
    set_size: usize,
    params: &LayoutParams,
    rng: &mut R,
) -> DisplayLayout {
    let capacity = params.ring_capacity.max(1);
    let n_rings = set_size.div_ceil(capacity).max(1);
    let base = set_size / n_rings;
    let extra = set_size % n_rings;
    let mut positions = Vec::with_capacity(set_size);
    let mut ring_radii = Vec::with_capacity(n_rings);
    for ring in 0..n_rings {
        let count = base + usize::from(ring < extra);
        let radius = params.ring_radius + ring as f64 * params.ring_spacing;
        ring_radii.push(radius);
        let phase = rng.gen_range(0.0..TAU);
        let step = TAU / count.max(1) as f64;
        positions.extend((0..count).map(|i| Point::polar(radius, phase + i as f64 * step)));
    }
    DisplayLayout {
        positions,
        ring_radii,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit() -> LayoutParams {
        LayoutParams {
            ring_radius: 1.0,
            ..LayoutParams::default()
        }
    }

    #[test]
    fn default_geometry() {
        let d = LayoutParams::default();
        assert_eq!((d.ring_radius, d.ring_capacity, d.ring_spacing), (0.5, 12, 0.5));
    }

    #[test]
    fn single_item_sits_on_the_ring() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let l = layout_radial(1, &unit(), &mut rng);
        assert_eq!(l.positions.len(), 1);
        assert!((l.positions[0].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eight_items_equally_spaced() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let l = layout_radial(8, &unit(), &mut rng);
        assert_eq!(l.ring_radii, vec![1.0]);
        let angles: Vec<f64> = l.positions.iter().map(|p| p.y.atan2(p.x)).collect();
        for i in 0..8 {
            let a = angles[i];
            let b = angles[(i + 1) % 8];
            let gap = (b - a).rem_euclid(TAU);
            assert!((gap - TAU / 8.0).abs() < 1e-9);
        }
    }

    #[test]
    fn large_sets_use_more_rings() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let l = layout_radial(30, &unit(), &mut rng);
        assert_eq!(l.positions.len(), 30);
        assert_eq!(l.ring_radii, vec![1.0, 1.5, 2.0]);
        let l = layout_radial(13, &unit(), &mut rng);
        assert_eq!(l.ring_radii.len(), 2);
        let inner = l.positions.iter().filter(|p| (p.norm() - 1.0).abs() < 1e-9).count();
        assert_eq!(inner, 7);
    }

    #[test]
    fn positions_stay_inside_processing_horizon() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 1..=48 {
            let l = layout_radial(n, &unit(), &mut rng);
            for p in &l.positions {
                assert!(1.0 - p.norm() / 4.0 > 0.0);
            }
        }
    }
}
