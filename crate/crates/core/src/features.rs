//! Trinary feature space: canonical color and shape encodings, salience,
//! and display-wide feature classification.
//!
//! Dimension order inside a filler vector is frozen:
//!
//! | segment       | width | labels                                           |
//! |---------------|-------|--------------------------------------------------|
//! | color         | 18    | `wb0..wb5`, `rg0..rg5`, `by0..by5`               |
//! | shape         | 27    | `o0_0..o0_2`, `o1_0, o1_1`, ..., `o4_0..o4_2`, ..., `o7_1`, `L1..L4`, `T1..T4`, `X` |
//! | higher-order  | 2n    | `h0..h{2n-1}` (optional)                         |
//! | emergent      | 2     | `e_target`, `e_distractor` (optional)            |
//!
//! Orientation units follow the pi/8 bins left to right; bins 0 (horizontal)
//! and 4 (vertical) carry three units, every other bin two.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const COLOR_WIDTH: usize = 18;
pub const SHAPE_WIDTH: usize = 27;
pub const EMERGENT_WIDTH: usize = 2;

/// Units per pi/8 orientation bin.
const ORIENTATION_UNITS: [usize; 8] = [3, 2, 2, 2, 3, 2, 2, 2];

/// Opponent color categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    White,
    Black,
    Red,
    Green,
    Blue,
    LightBlue,
    Yellow,
    Orange,
    Pink,
    DarkGreen,
    Brown,
    /// No color information; all 18 units are zero.
    None,
}

impl Color {
    /// The eleven encoded colors, in table order.
    pub const ALL: [Color; 11] = [
        Color::White,
        Color::Black,
        Color::Red,
        Color::Green,
        Color::Blue,
        Color::LightBlue,
        Color::Yellow,
        Color::Orange,
        Color::Pink,
        Color::DarkGreen,
        Color::Brown,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Color::White => "white",
            Color::Black => "black",
            Color::Red => "red",
            Color::Green => "green",
            Color::Blue => "blue",
            Color::LightBlue => "light-blue",
            Color::Yellow => "yellow",
            Color::Orange => "orange",
            Color::Pink => "pink",
            Color::DarkGreen => "dark-green",
            Color::Brown => "brown",
            Color::None => "none",
        }
    }

    /// The 18 color units: white/black, red/green, blue/yellow channels.
    pub fn units(self) -> [i8; COLOR_WIDTH] {
        match self {
            Color::None => [0; COLOR_WIDTH],
            c => COLOR_TABLE[Color::ALL.iter().position(|&x| x == c).unwrap()],
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Color {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        if matches!(key.as_str(), "none" | "achromatic" | "achromatic-none") {
            return Ok(Color::None);
        }
        Color::ALL
            .iter()
            .copied()
            .find(|c| c.name() == key || c.name().replace('-', "") == key)
            .ok_or_else(|| Error::UnknownColor(s.to_string()))
    }
}

#[rustfmt::skip]
const COLOR_TABLE: [[i8; COLOR_WIDTH]; 11] = [
    // white
    [ 1, 1, 1,-1,-1,-1,   0, 0, 0, 0, 0, 0,   0, 0, 0, 0, 0, 0],
    // black
    [-1,-1,-1, 1, 1, 1,   0, 0, 0, 0, 0, 0,   0, 0, 0, 0, 0, 0],
    // red
    [ 0, 0, 0, 0, 0, 0,   1, 1, 1,-1,-1,-1,   0, 0, 0, 0, 0, 0],
    // green
    [ 0, 0, 0, 0, 0, 0,  -1,-1,-1, 1, 1, 1,   0, 0, 0, 0, 0, 0],
    // blue
    [ 0, 0, 0, 0, 0, 0,   0, 0, 0, 0, 0, 0,   1, 1, 1,-1,-1,-1],
    // light blue
    [ 1, 1, 1, 1, 1, 1,   0, 0, 0, 0, 0, 0,   1, 1, 1,-1,-1,-1],
    // yellow
    [ 0, 0, 0, 0, 0, 0,   1, 1, 1, 1, 1, 1,   0, 0, 0, 1, 1, 1],
    // orange
    [ 0, 0, 0, 0, 0, 0,   1, 1, 0,-1,-1, 0,  -1, 0, 0, 1, 0, 0],
    // pink
    [ 1, 1, 0,-1,-1, 0,   1, 0, 0,-1, 0, 0,   0, 0, 0, 0, 0, 0],
    // dark green
    [ 1, 1, 1,-1,-1, 0,  -1,-1,-1, 1, 1, 1,   0, 0, 0, 0, 0, 0],
    // brown
    [ 1, 1, 1,-1,-1, 0,   1, 1,-1,-1,-1, 1,   0, 0, 0, 0, 0, 0],
];

/// Low-level shapes: oriented segments, T and L junction variants, X, O,
/// a Q-like shape, and the good/poor configural pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    Horizontal,
    Vertical,
    Diagonal45,
    Diagonal135,
    T1,
    T2,
    T3,
    T4,
    L1,
    L2,
    L3,
    L4,
    X,
    O,
    Q,
    G1,
    G2,
    P1,
    P2,
}

impl Shape {
    /// The nineteen encoded shapes, in table order.
    pub const ALL: [Shape; 19] = [
        Shape::Horizontal,
        Shape::Vertical,
        Shape::Diagonal45,
        Shape::Diagonal135,
        Shape::T1,
        Shape::T2,
        Shape::T3,
        Shape::T4,
        Shape::L1,
        Shape::L2,
        Shape::L3,
        Shape::L4,
        Shape::X,
        Shape::O,
        Shape::Q,
        Shape::G1,
        Shape::G2,
        Shape::P1,
        Shape::P2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Shape::Horizontal => "horizontal",
            Shape::Vertical => "vertical",
            Shape::Diagonal45 => "diagonal-45",
            Shape::Diagonal135 => "diagonal-135",
            Shape::T1 => "T1",
            Shape::T2 => "T2",
            Shape::T3 => "T3",
            Shape::T4 => "T4",
            Shape::L1 => "L1",
            Shape::L2 => "L2",
            Shape::L3 => "L3",
            Shape::L4 => "L4",
            Shape::X => "X",
            Shape::O => "O",
            Shape::Q => "Q",
            Shape::G1 => "G1",
            Shape::G2 => "G2",
            Shape::P1 => "P1",
            Shape::P2 => "P2",
        }
    }

    pub fn units(self) -> [i8; SHAPE_WIDTH] {
        SHAPE_TABLE[self as usize]
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(found) = Shape::ALL.iter().find(|sh| sh.name() == s) {
            return Ok(*found);
        }
        let alias = match s.to_ascii_lowercase().as_str() {
            "h" | "horizontal" => Some(Shape::Horizontal),
            "v" | "vertical" => Some(Shape::Vertical),
            "diagonal-45" | "diag45" | "diagonal-pi4" => Some(Shape::Diagonal45),
            "diagonal-135" | "diag135" | "diagonal-3pi4" => Some(Shape::Diagonal135),
            "t" => Some(Shape::T1),
            "l" => Some(Shape::L1),
            "x" => Some(Shape::X),
            "o" => Some(Shape::O),
            "q" => Some(Shape::Q),
            _ => None,
        };
        alias.ok_or_else(|| Error::UnknownShape(s.to_string()))
    }
}

#[rustfmt::skip]
const SHAPE_TABLE: [[i8; SHAPE_WIDTH]; 19] = [
    //  0        1     2     3     4        5     6     7      L           T           X
    // horizontal
    [1,1,1,   1,0,  0,0,  0,0,  0,0,0,   0,0,  0,0,  1,0,   0,0,0,0,   0,0,0,0,   0],
    // vertical
    [0,0,0,   0,0,  0,0,  1,0,  1,1,1,   1,0,  0,0,  0,0,   0,0,0,0,   0,0,0,0,   0],
    // pi/4 diagonal
    [0,0,0,   1,0,  1,1,  1,0,  0,0,0,   0,0,  0,0,  0,0,   0,0,0,0,   0,0,0,0,   0],
    // 3pi/4 diagonal
    [0,0,0,   0,0,  0,0,  0,0,  0,0,0,   1,0,  1,1,  1,0,   0,0,0,0,   0,0,0,0,   0],
    // T1
    [1,1,1,   1,0,  0,0,  1,0,  1,1,1,   1,0,  0,0,  1,0,   0,0,0,0,   1,0,0,0,   0],
    // T2
    [1,1,1,   1,0,  0,0,  1,0,  1,1,1,   1,0,  0,0,  1,0,   0,0,0,0,   0,1,0,0,   0],
    // T3
    [1,1,1,   1,0,  0,0,  1,0,  1,1,1,   1,0,  0,0,  1,0,   0,0,0,0,   0,0,1,0,   0],
    // T4
    [1,1,1,   1,0,  0,0,  1,0,  1,1,1,   1,0,  0,0,  1,0,   0,0,0,0,   0,0,0,1,   0],
    // L1
    [1,1,1,   1,0,  0,0,  1,0,  1,1,1,   0,0,  0,0,  1,0,   1,0,0,0,   0,0,0,0,   0],
    // L2
    [1,1,1,   1,0,  0,0,  1,0,  1,1,1,   0,0,  0,0,  1,0,   0,1,0,0,   0,0,0,0,   0],
    // L3
    [1,1,1,   1,0,  0,0,  1,0,  1,1,1,   0,0,  0,0,  1,0,   0,0,1,0,   0,0,0,0,   0],
    // L4
    [1,1,1,   1,0,  0,0,  1,0,  1,1,1,   0,0,  0,0,  1,0,   0,0,0,1,   0,0,0,0,   0],
    // X
    [0,0,0,   1,0,  1,1,  1,0,  0,0,0,   1,0,  1,1,  1,0,   0,0,0,0,   0,0,0,0,   1],
    // O
    [1,0,0,   1,0,  0,0,  1,0,  1,0,0,   1,0,  1,0,  0,0,   0,0,0,0,   0,0,0,0,   0],
    // Q
    [1,0,0,   1,0,  0,0,  1,0,  1,1,1,   1,0,  1,0,  0,0,   0,0,0,0,   0,0,0,0,   0],
    // G1
    [1,1,1,   1,1,  1,1,  1,1,  1,1,1,   1,0,  0,0,  1,0,   1,0,0,0,   0,0,0,0,   1],
    // G2
    [1,1,1,   1,0,  0,0,  1,0,  1,1,1,   1,1,  1,1,  1,0,   1,0,0,0,   0,0,0,0,   0],
    // P1
    [1,1,1,   1,1,  1,1,  1,1,  1,1,1,   1,0,  0,0,  1,0,   1,0,1,0,   0,0,0,0,   1],
    // P2
    [1,1,1,   1,0,  0,0,  1,0,  1,1,1,   1,1,  1,1,  1,0,   1,0,1,0,   0,0,0,0,   0],
];

/// Named segment of a filler vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Segment {
    Color,
    Shape,
    HigherOrder,
    Emergent,
}

impl Segment {
    pub fn name(self) -> &'static str {
        match self {
            Segment::Color => "color",
            Segment::Shape => "shape",
            Segment::HigherOrder => "higher_order",
            Segment::Emergent => "emergent",
        }
    }
}

impl FromStr for Segment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "color" => Ok(Segment::Color),
            "shape" => Ok(Segment::Shape),
            "higher_order" | "higher-order" => Ok(Segment::HigherOrder),
            "emergent" => Ok(Segment::Emergent),
            other => Err(Error::UnknownDimension(other.to_string())),
        }
    }
}

/// Widths of the optional segments; color and shape are always present.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Layout {
    pub higher_order: usize,
    pub emergent: usize,
}

impl Layout {
    pub const BASIC: Layout = Layout {
        higher_order: 0,
        emergent: 0,
    };

    pub fn width(&self) -> usize {
        COLOR_WIDTH + SHAPE_WIDTH + self.higher_order + self.emergent
    }

    pub fn range(&self, segment: Segment) -> std::ops::Range<usize> {
        let shape_end = COLOR_WIDTH + SHAPE_WIDTH;
        let higher_end = shape_end + self.higher_order;
        match segment {
            Segment::Color => 0..COLOR_WIDTH,
            Segment::Shape => COLOR_WIDTH..shape_end,
            Segment::HigherOrder => shape_end..higher_end,
            Segment::Emergent => higher_end..higher_end + self.emergent,
        }
    }

    pub fn segment_of(&self, dim: usize) -> Segment {
        [
            Segment::Color,
            Segment::Shape,
            Segment::HigherOrder,
            Segment::Emergent,
        ]
        .into_iter()
        .find(|s| self.range(*s).contains(&dim))
        .expect("dimension outside layout")
    }

    /// Stable label for every dimension, in storage order.
    pub fn labels(&self) -> Vec<String> {
        let mut labels = Vec::with_capacity(self.width());
        for channel in ["wb", "rg", "by"] {
            labels.extend((0..6).map(|i| format!("{channel}{i}")));
        }
        for (bin, &units) in ORIENTATION_UNITS.iter().enumerate() {
            labels.extend((0..units).map(|u| format!("o{bin}_{u}")));
        }
        labels.extend((1..=4).map(|i| format!("L{i}")));
        labels.extend((1..=4).map(|i| format!("T{i}")));
        labels.push("X".to_string());
        labels.extend((0..self.higher_order).map(|i| format!("h{i}")));
        if self.emergent == EMERGENT_WIDTH {
            labels.push("e_target".into());
            labels.push("e_distractor".into());
        } else {
            labels.extend((0..self.emergent).map(|i| format!("e{i}")));
        }
        labels
    }

    pub fn dimension_index(&self, label: &str) -> Option<usize> {
        self.labels().iter().position(|l| l == label)
    }
}

/// Fixed-length trinary vector over one [`Layout`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FeatureVector {
    layout: Layout,
    values: Vec<i8>,
}

impl FeatureVector {
    pub fn zeros(layout: Layout) -> Self {
        FeatureVector {
            layout,
            values: vec![0; layout.width()],
        }
    }

    /// Builds a vector from raw entries, rejecting anything outside {-1, 0, 1}.
    pub fn from_values(layout: Layout, values: Vec<i8>) -> Result<Self> {
        if values.len() != layout.width() {
            return Err(Error::LayoutMismatch {
                expected: layout.width(),
                found: values.len(),
            });
        }
        if let Some(bad) = values.iter().find(|v| !(-1..=1).contains(*v)) {
            return Err(Error::NotTrinary(*bad));
        }
        Ok(FeatureVector { layout, values })
    }

    /// A color and a shape on the given layout; optional segments start at zero.
    pub fn filler(layout: Layout, color: Color, shape: Shape) -> Self {
        let mut v = FeatureVector::zeros(layout);
        v.values[layout.range(Segment::Color)].copy_from_slice(&color.units());
        v.values[layout.range(Segment::Shape)].copy_from_slice(&shape.units());
        v
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn segment(&self, segment: Segment) -> &[i8] {
        &self.values[self.layout.range(segment)]
    }

    pub fn set_segment(&mut self, segment: Segment, values: &[i8]) -> Result<()> {
        let range = self.layout.range(segment);
        if range.len() != values.len() {
            return Err(Error::SegmentNotDeclared(segment.name()));
        }
        if let Some(bad) = values.iter().find(|v| !(-1..=1).contains(*v)) {
            return Err(Error::NotTrinary(*bad));
        }
        self.values[range].copy_from_slice(values);
        Ok(())
    }

    /// Re-homes the vector onto a wider layout, zero-filling new units.
    pub fn widened(&self, layout: Layout) -> Result<Self> {
        if layout.higher_order < self.layout.higher_order || layout.emergent < self.layout.emergent
        {
            return Err(Error::LayoutMismatch {
                expected: layout.width(),
                found: self.len(),
            });
        }
        let mut out = FeatureVector::zeros(layout);
        for seg in [
            Segment::Color,
            Segment::Shape,
            Segment::HigherOrder,
            Segment::Emergent,
        ] {
            let src = self.segment(seg);
            let dst = layout.range(seg);
            out.values[dst.start..dst.start + src.len()].copy_from_slice(src);
        }
        Ok(out)
    }
}

/// Encodes a named color onto the basic layout (color + shape).
pub fn encode_color(name: &str) -> Result<FeatureVector> {
    let color: Color = name.parse()?;
    let mut v = FeatureVector::zeros(Layout::BASIC);
    v.values[..COLOR_WIDTH].copy_from_slice(&color.units());
    Ok(v)
}

/// Encodes a named shape onto the basic layout (color + shape).
pub fn encode_shape(name: &str) -> Result<FeatureVector> {
    let shape: Shape = name.parse()?;
    let mut v = FeatureVector::zeros(Layout::BASIC);
    v.values[COLOR_WIDTH..COLOR_WIDTH + SHAPE_WIDTH].copy_from_slice(&shape.units());
    Ok(v)
}

/// Per-dimension multiplicative salience, default 1.0 everywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct SalienceMap {
    eta: Vec<f64>,
}

impl SalienceMap {
    pub fn uniform(layout: Layout) -> Self {
        SalienceMap {
            eta: vec![1.0; layout.width()],
        }
    }

    pub fn get(&self, dim: usize) -> f64 {
        self.eta[dim]
    }

    pub fn values(&self) -> &[f64] {
        &self.eta
    }

    pub fn len(&self) -> usize {
        self.eta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eta.is_empty()
    }

    pub fn set(&mut self, dim: usize, eta: f64) -> Result<()> {
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(Error::InvalidSalience(eta));
        }
        self.eta[dim] = eta;
        Ok(())
    }

    pub fn set_segment(&mut self, layout: Layout, segment: Segment, eta: f64) -> Result<()> {
        let range = layout.range(segment);
        if range.is_empty() {
            return Err(Error::SegmentNotDeclared(segment.name()));
        }
        for dim in range {
            self.set(dim, eta)?;
        }
        Ok(())
    }

    /// Copies onto a wider layout; new dimensions get 1.0.
    pub fn widened(&self, from: Layout, to: Layout) -> SalienceMap {
        let mut out = SalienceMap::uniform(to);
        for seg in [
            Segment::Color,
            Segment::Shape,
            Segment::HigherOrder,
            Segment::Emergent,
        ] {
            let src = from.range(seg);
            let dst = to.range(seg).start;
            for (i, d) in src.enumerate() {
                out.eta[dst + i] = self.eta[d];
            }
        }
        out
    }
}

/// Role a dimension plays in discriminating the target from the display.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeatureClass {
    Relevant,
    Irrelevant,
    Absent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureClassification {
    classes: Vec<FeatureClass>,
}

impl FeatureClassification {
    pub fn from_classes(classes: Vec<FeatureClass>) -> Self {
        FeatureClassification { classes }
    }

    pub fn class(&self, dim: usize) -> FeatureClass {
        self.classes[dim]
    }

    pub fn classes(&self) -> &[FeatureClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn count(&self, class: FeatureClass) -> usize {
        self.classes.iter().filter(|c| **c == class).count()
    }

    pub fn relevant(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices(FeatureClass::Relevant)
    }

    pub fn indices(&self, class: FeatureClass) -> impl Iterator<Item = usize> + '_ {
        self.classes
            .iter()
            .enumerate()
            .filter(move |(_, c)| **c == class)
            .map(|(i, _)| i)
    }
}

/// Classifies every dimension against a set of comparison pairs.
///
/// Each pair is one (template vector, item vector) comparison; a dimension
/// is Relevant when any pair disagrees on it, Absent when it is zero in
/// every vector, Irrelevant otherwise.
pub fn classify_pairs<'a, I>(width: usize, pairs: I) -> Result<FeatureClassification>
where
    I: IntoIterator<Item = (&'a [i8], &'a [i8])>,
{
    let mut mismatch = vec![false; width];
    let mut nonzero = vec![false; width];
    for (template, item) in pairs {
        if template.len() != width || item.len() != width {
            return Err(Error::LayoutMismatch {
                expected: width,
                found: if template.len() != width {
                    template.len()
                } else {
                    item.len()
                },
            });
        }
        for k in 0..width {
            mismatch[k] |= template[k] != item[k];
            nonzero[k] |= template[k] != 0 || item[k] != 0;
        }
    }
    let classes = (0..width)
        .map(|k| {
            if mismatch[k] {
                FeatureClass::Relevant
            } else if nonzero[k] {
                FeatureClass::Irrelevant
            } else {
                FeatureClass::Absent
            }
        })
        .collect();
    Ok(FeatureClassification { classes })
}

/// Classifies dimensions of single vectors: template against each item.
pub fn classify_vectors(
    template: &FeatureVector,
    items: &[&FeatureVector],
) -> Result<FeatureClassification> {
    classify_pairs(
        template.len(),
        items.iter().map(|it| (template.values(), it.values())),
    )
}

/// Shared / differing counts for one segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OverlapCount {
    pub shared: usize,
    pub differing: usize,
}

/// Per-segment overlap between a template vector and an item vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Overlap {
    pub color: OverlapCount,
    pub shape: OverlapCount,
    pub higher_order: OverlapCount,
    pub emergent: OverlapCount,
}

/// Counts equal-and-nonzero (shared) and unequal (differing) dimensions.
/// Dimensions that are zero in both vectors count as neither.
pub fn count_overlap(template: &FeatureVector, item: &FeatureVector) -> Result<Overlap> {
    if template.layout() != item.layout() {
        return Err(Error::LayoutMismatch {
            expected: template.len(),
            found: item.len(),
        });
    }
    let count = |seg: Segment| {
        let mut out = OverlapCount::default();
        for (a, b) in template.segment(seg).iter().zip(item.segment(seg)) {
            if a != b {
                out.differing += 1;
            } else if *a != 0 {
                out.shared += 1;
            }
        }
        out
    };
    Ok(Overlap {
        color: count(Segment::Color),
        shape: count(Segment::Shape),
        higher_order: count(Segment::HigherOrder),
        emergent: count(Segment::Emergent),
    })
}

/// The color table as CSV: `name,wb0,...,by5`.
pub fn color_table_csv() -> String {
    let labels = Layout::BASIC.labels();
    let mut out = String::from("name");
    for l in &labels[..COLOR_WIDTH] {
        out.push(',');
        out.push_str(l);
    }
    out.push('\n');
    for c in Color::ALL {
        out.push_str(c.name());
        for v in c.units() {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    out
}

/// The shape table as CSV: `name,o0_0,...,X`.
pub fn shape_table_csv() -> String {
    let labels = Layout::BASIC.labels();
    let mut out = String::from("name");
    for l in &labels[COLOR_WIDTH..] {
        out.push(',');
        out.push_str(l);
    }
    out.push('\n');
    for s in Shape::ALL {
        out.push_str(s.name());
        for v in s.units() {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn color_seg(name: &str) -> Vec<i8> {
        encode_color(name).unwrap().segment(Segment::Color).to_vec()
    }

    fn shape_seg(name: &str) -> Vec<i8> {
        encode_shape(name).unwrap().segment(Segment::Shape).to_vec()
    }

    #[test]
    fn red_row() {
        let red = color_seg("red");
        assert_eq!(&red[0..6], &[0, 0, 0, 0, 0, 0]);
        assert_eq!(&red[6..12], &[1, 1, 1, -1, -1, -1]);
        assert_eq!(&red[12..18], &[0, 0, 0, 0, 0, 0]);
        let v = encode_color("red").unwrap();
        assert!(v.segment(Segment::Shape).iter().all(|x| *x == 0));
    }

    #[test]
    fn orange_row() {
        let orange = color_seg("orange");
        assert_eq!(&orange[6..12], &[1, 1, 0, -1, -1, 0]);
        assert_eq!(&orange[12..18], &[-1, 0, 0, 1, 0, 0]);
    }

    #[test]
    fn achromatic_is_zero() {
        assert!(color_seg("none").iter().all(|v| *v == 0));
        assert!(color_seg("achromatic-none").iter().all(|v| *v == 0));
    }

    #[test]
    fn unknown_names_are_rejected() {
        match encode_color("mauve") {
            Err(Error::UnknownColor(name)) => assert_eq!(name, "mauve"),
            other => panic!("unexpected {other:?}"),
        }
        match encode_shape("star") {
            Err(Error::UnknownShape(name)) => assert_eq!(name, "star"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn x_and_o_rows() {
        let x = shape_seg("X");
        assert_eq!(
            &x[..18],
            &[0, 0, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 1, 0, 1, 1, 1, 0]
        );
        assert_eq!(&x[18..26], &[0; 8]);
        assert_eq!(x[26], 1);

        let o = shape_seg("O");
        assert_eq!(
            &o[..18],
            &[1, 0, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 1, 0, 1, 0, 0, 0]
        );
        assert!(o[18..].iter().all(|v| *v == 0));
    }

    #[test]
    fn q_differs_from_o_only_on_vertical_units() {
        let q = shape_seg("Q");
        let o = shape_seg("O");
        let diff: Vec<usize> = (0..SHAPE_WIDTH).filter(|&k| q[k] != o[k]).collect();
        // vertical bin occupies shape units 9..12
        assert_eq!(diff, vec![10, 11]);
        assert_eq!(&q[9..12], &[1, 1, 1]);
        assert_eq!(&o[9..12], &[1, 0, 0]);
    }

    #[test]
    fn tables_are_injective() {
        for (i, a) in Color::ALL.iter().enumerate() {
            for b in &Color::ALL[i + 1..] {
                assert_ne!(a.units(), b.units(), "{a} vs {b}");
            }
        }
        for (i, a) in Shape::ALL.iter().enumerate() {
            for b in &Shape::ALL[i + 1..] {
                assert_ne!(a.units(), b.units(), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for c in Color::ALL {
            assert_eq!(c.name().parse::<Color>().unwrap(), c);
        }
        for s in Shape::ALL {
            assert_eq!(s.name().parse::<Shape>().unwrap(), s);
        }
    }

    #[test]
    fn labels_cover_layout() {
        let layout = Layout {
            higher_order: 8,
            emergent: 2,
        };
        let labels = layout.labels();
        assert_eq!(labels.len(), layout.width());
        assert_eq!(labels[0], "wb0");
        assert_eq!(labels[18], "o0_0");
        assert_eq!(labels[44], "X");
        assert_eq!(labels[45], "h0");
        assert_eq!(labels.last().unwrap(), "e_distractor");
        assert_eq!(layout.dimension_index("rg2"), Some(8));
    }

    #[test]
    fn from_values_rejects_non_trinary() {
        let mut raw = vec![0i8; Layout::BASIC.width()];
        raw[3] = 2;
        assert!(matches!(
            FeatureVector::from_values(Layout::BASIC, raw),
            Err(Error::NotTrinary(2))
        ));
    }

    #[test]
    fn red_x_among_green_x() {
        let t = FeatureVector::filler(Layout::BASIC, Color::Red, Shape::X);
        let d = FeatureVector::filler(Layout::BASIC, Color::Green, Shape::X);
        let cls = classify_vectors(&t, &[&d, &d]).unwrap();
        for k in 6..12 {
            assert_eq!(cls.class(k), FeatureClass::Relevant);
        }
        for k in (0..6).chain(12..18) {
            assert_eq!(cls.class(k), FeatureClass::Absent);
        }
        let x = Shape::X.units();
        for (i, v) in x.iter().enumerate() {
            let expect = if *v != 0 {
                FeatureClass::Irrelevant
            } else {
                FeatureClass::Absent
            };
            assert_eq!(cls.class(COLOR_WIDTH + i), expect);
        }
        // T-junction units
        for k in 40..44 {
            assert_eq!(cls.class(k), FeatureClass::Absent);
        }
    }

    #[test]
    fn identical_display_has_no_relevant_dimensions() {
        let t = FeatureVector::filler(Layout::BASIC, Color::Blue, Shape::L2);
        let cls = classify_vectors(&t, &[&t.clone(), &t.clone()]).unwrap();
        assert_eq!(cls.count(FeatureClass::Relevant), 0);
    }

    #[test]
    fn mixed_layouts_are_rejected() {
        let t = FeatureVector::filler(Layout::BASIC, Color::Red, Shape::X);
        let wide = Layout {
            higher_order: 0,
            emergent: 2,
        };
        let d = FeatureVector::filler(wide, Color::Red, Shape::X);
        assert!(classify_vectors(&t, &[&d]).is_err());
        assert!(count_overlap(&t, &d).is_err());
    }

    #[test]
    fn wolfe_overlap_counts() {
        let template = FeatureVector::filler(Layout::BASIC, Color::Green, Shape::Horizontal);
        let d1 = FeatureVector::filler(Layout::BASIC, Color::Green, Shape::Vertical);
        let d2 = FeatureVector::filler(Layout::BASIC, Color::Red, Shape::Horizontal);
        let o1 = count_overlap(&template, &d1).unwrap();
        assert_eq!(o1.color, OverlapCount { shared: 6, differing: 0 });
        assert_eq!(o1.shape, OverlapCount { shared: 0, differing: 10 });
        let o2 = count_overlap(&template, &d2).unwrap();
        assert_eq!(o2.color, OverlapCount { shared: 0, differing: 6 });
        assert_eq!(o2.shape, OverlapCount { shared: 5, differing: 0 });
    }

    #[test]
    fn treisman_overlap_counts() {
        // conjunction template is the dark-green T
        let template = FeatureVector::filler(Layout::BASIC, Color::DarkGreen, Shape::T1);
        let d1 = FeatureVector::filler(Layout::BASIC, Color::DarkGreen, Shape::X);
        let d2 = FeatureVector::filler(Layout::BASIC, Color::Brown, Shape::T1);
        let o1 = count_overlap(&template, &d1).unwrap();
        assert_eq!(o1.color, OverlapCount { shared: 11, differing: 0 });
        assert_eq!(o1.shape.shared, 4);
        // 12 by element-wise comparison; the published table prints 11
        assert_eq!(o1.shape.differing, 12);
        let o2 = count_overlap(&template, &d2).unwrap();
        assert_eq!(o2.color, OverlapCount { shared: 7, differing: 4 });
        assert_eq!(o2.shape, OverlapCount { shared: 11, differing: 0 });
    }

    #[test]
    fn table_csv_shapes() {
        let colors = color_table_csv();
        let shapes = shape_table_csv();
        assert_eq!(colors.lines().count(), 1 + 11);
        assert_eq!(shapes.lines().count(), 1 + 19);
        assert!(colors.contains("\nred,0,0,0,0,0,0,1,1,1,-1,-1,-1,0,0,0,0,0,0\n"));
        assert_eq!(colors.lines().next().unwrap().split(',').count(), 19);
        assert_eq!(shapes.lines().next().unwrap().split(',').count(), 28);
    }

    #[test]
    fn salience_rejects_negative() {
        let mut s = SalienceMap::uniform(Layout::BASIC);
        assert!(s.values().iter().all(|v| *v == 1.0));
        assert!(s.set(0, -0.5).is_err());
        s.set_segment(Layout::BASIC, Segment::Shape, 1.5).unwrap();
        assert_eq!(s.get(COLOR_WIDTH), 1.5);
        assert!(s
            .set_segment(Layout::BASIC, Segment::Emergent, 1.0)
            .is_err());
    }
}
