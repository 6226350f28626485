//! Display construction: items built from color/shape fillers, optional
//! relational roles, higher-order and emergent units, and radial geometry.

mod grammar;
mod layout;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::features::{
    Color, FeatureVector, Layout, SalienceMap, Segment, Shape, EMERGENT_WIDTH,
};

pub use grammar::{parse_experiment, serialize_experiment};
pub use layout::{layout_radial, DisplayLayout, LayoutParams, Point};

/// Relational role a filler is bound to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Above,
    Below,
    Left,
    Right,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::Above => "above",
            Role::Below => "below",
            Role::Left => "left",
            Role::Right => "right",
        }
    }
}

/// Two-place spatial relation; `above(a, b)` reads "a above b".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Above,
    Below,
    LeftOf,
    RightOf,
}

impl Relation {
    pub fn name(self) -> &'static str {
        match self {
            Relation::Above => "above",
            Relation::Below => "below",
            Relation::LeftOf => "left_of",
            Relation::RightOf => "right_of",
        }
    }

    /// Roles taken by the first and second argument.
    pub fn roles(self) -> [Role; 2] {
        match self {
            Relation::Above => [Role::Above, Role::Below],
            Relation::Below => [Role::Below, Role::Above],
            Relation::LeftOf => [Role::Left, Role::Right],
            Relation::RightOf => [Role::Right, Role::Left],
        }
    }

    pub fn arity(self) -> usize {
        2
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "above" | "over" => Ok(Relation::Above),
            "below" | "under" => Ok(Relation::Below),
            "left_of" | "left-of" => Ok(Relation::LeftOf),
            "right_of" | "right-of" => Ok(Relation::RightOf),
            other => Err(Error::UnknownRelation(other.to_string())),
        }
    }
}

/// A color and a shape occupying one role (or the whole item).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Filler {
    pub color: Color,
    pub shape: Shape,
}

impl Filler {
    pub fn new(color: Color, shape: Shape) -> Self {
        Filler { color, shape }
    }
}

impl fmt::Display for Filler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.color, self.shape)
    }
}

/// Item definition as written in an experiment document.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ItemExpr {
    Simple(Filler),
    Relational { relation: Relation, args: Vec<Filler> },
}

impl ItemExpr {
    pub fn simple(color: Color, shape: Shape) -> Self {
        ItemExpr::Simple(Filler::new(color, shape))
    }

    pub fn relational(relation: Relation, first: Filler, second: Filler) -> Self {
        ItemExpr::Relational {
            relation,
            args: vec![first, second],
        }
    }

    /// Fillers paired with their roles, sorted by role. Non-relational
    /// items have no role (`None`).
    pub fn bindings(&self) -> Result<Vec<(Option<Role>, Filler)>> {
        match self {
            ItemExpr::Simple(f) => Ok(vec![(None, *f)]),
            ItemExpr::Relational { relation, args } => {
                if args.len() != relation.arity() {
                    return Err(Error::Arity {
                        relation: relation.name().to_string(),
                        expected: relation.arity(),
                        found: args.len(),
                    });
                }
                let mut out: Vec<_> = relation
                    .roles()
                    .iter()
                    .zip(args)
                    .map(|(r, f)| (Some(*r), *f))
                    .collect();
                out.sort_by_key(|(r, _)| *r);
                Ok(out)
            }
        }
    }

    /// Role-to-shape arrangement, ignoring color.
    pub fn arrangement(&self) -> Result<Vec<(Option<Role>, Shape)>> {
        Ok(self
            .bindings()?
            .into_iter()
            .map(|(r, f)| (r, f.shape))
            .collect())
    }
}

impl fmt::Display for ItemExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ItemExpr::Simple(filler) => write!(f, "{filler}"),
            ItemExpr::Relational { relation, args } => {
                write!(f, "{}(", relation.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// One role's feature vector. Non-relational items carry a single
/// role-less vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RoleBoundVector {
    pub role: Option<Role>,
    pub vector: FeatureVector,
}

impl RoleBoundVector {
    /// Role tag (one-hot over `roles`) followed by the feature vector.
    pub fn tagged(&self, roles: &[Role]) -> Vec<i8> {
        let mut out: Vec<i8> = roles
            .iter()
            .map(|r| i8::from(self.role == Some(*r)))
            .collect();
        out.extend_from_slice(self.vector.values());
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ItemState {
    Active,
    RejectedParallel,
    RejectedSerial,
    Accepted,
}

impl ItemState {
    pub fn is_rejected(self) -> bool {
        matches!(self, ItemState::RejectedParallel | ItemState::RejectedSerial)
    }
}

/// One display element.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchItem {
    pub roles: Vec<RoleBoundVector>,
    pub position: Point,
    pub priority: f64,
    pub state: ItemState,
    pub is_target: bool,
}

impl SearchItem {
    pub fn layout(&self) -> Layout {
        self.roles[0].vector.layout()
    }

    pub fn role_set(&self) -> Vec<Option<Role>> {
        self.roles.iter().map(|r| r.role).collect()
    }
}

/// The sought item plus per-dimension salience.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetTemplate {
    pub roles: Vec<RoleBoundVector>,
    pub salience: SalienceMap,
}

impl TargetTemplate {
    pub fn layout(&self) -> Layout {
        self.roles[0].vector.layout()
    }

    pub fn role_set(&self) -> Vec<Option<Role>> {
        self.roles.iter().map(|r| r.role).collect()
    }
}

/// How role vectors are pooled into the single vector the parallel
/// process sees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pooling {
    /// Element-wise sum across roles, clamped to {-1, 0, 1}.
    ClampedSum,
    /// A unit is +1 if any role has it present, else -1 if any role
    /// opposes it, else 0.
    PresenceUnion,
}

impl Pooling {
    pub fn name(self) -> &'static str {
        match self {
            Pooling::ClampedSum => "clamped_sum",
            Pooling::PresenceUnion => "presence_union",
        }
    }
}

impl FromStr for Pooling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "clamped_sum" => Ok(Pooling::ClampedSum),
            "presence_union" => Ok(Pooling::PresenceUnion),
            other => Err(Error::InvalidParam {
                key: "pooling".into(),
                value: other.into(),
            }),
        }
    }
}

/// Strips role tags and pools all role vectors into one.
pub fn superimpose_roles(roles: &[RoleBoundVector], pooling: Pooling) -> Vec<i8> {
    let width = roles[0].vector.len();
    if roles.len() == 1 {
        return roles[0].vector.values().to_vec();
    }
    (0..width)
        .map(|k| match pooling {
            Pooling::ClampedSum => {
                let s: i32 = roles.iter().map(|r| r.vector.values()[k] as i32).sum();
                s.clamp(-1, 1) as i8
            }
            Pooling::PresenceUnion => {
                let vals = roles.iter().map(|r| r.vector.values()[k]);
                if vals.clone().any(|v| v > 0) {
                    1
                } else if vals.clone().any(|v| v < 0) {
                    -1
                } else {
                    0
                }
            }
        })
        .collect()
}

/// Builds the role-bound vectors of an item expression on `layout`.
pub fn make_roles(expr: &ItemExpr, layout: Layout) -> Result<Vec<RoleBoundVector>> {
    Ok(expr
        .bindings()?
        .into_iter()
        .map(|(role, f)| RoleBoundVector {
            role,
            vector: FeatureVector::filler(layout, f.color, f.shape),
        })
        .collect())
}

/// Builds a display item at `position` with the initial priority unset (1.0).
pub fn make_item(expr: &ItemExpr, layout: Layout, position: Point) -> Result<SearchItem> {
    Ok(SearchItem {
        roles: make_roles(expr, layout)?,
        position,
        priority: 1.0,
        state: ItemState::Active,
        is_target: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HigherOrderKind {
    Arrow,
    Triangle,
}

impl HigherOrderKind {
    pub fn name(self) -> &'static str {
        match self {
            HigherOrderKind::Arrow => "arrow",
            HigherOrderKind::Triangle => "triangle",
        }
    }

    /// `n` zeros then `n` ones for an arrow; the reverse for a triangle.
    pub fn units(self, n: usize) -> Vec<i8> {
        let (first, second) = match self {
            HigherOrderKind::Arrow => (0, 1),
            HigherOrderKind::Triangle => (1, 0),
        };
        let mut v = vec![first; n];
        v.extend(std::iter::repeat_n(second, n));
        v
    }
}

impl FromStr for HigherOrderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "arrow" => Ok(HigherOrderKind::Arrow),
            "triangle" => Ok(HigherOrderKind::Triangle),
            other => Err(Error::UnknownShape(other.to_string())),
        }
    }
}

/// Writes a higher-order pattern of half-width `n` into the first role of
/// each vector set. The layout's higher-order segment must be at least `2n`
/// wide; any remaining units stay zero.
pub fn attach_higher_order(
    roles: &mut [RoleBoundVector],
    kind: HigherOrderKind,
    n: usize,
) -> Result<()> {
    let first = &mut roles[0].vector;
    let layout = first.layout();
    if layout.higher_order < 2 * n {
        return Err(Error::SegmentNotDeclared(Segment::HigherOrder.name()));
    }
    let mut units = kind.units(n);
    units.resize(layout.higher_order, 0);
    first.set_segment(Segment::HigherOrder, &units)
}

/// Emergent-unit pattern for the target arrangement.
pub const EMERGENT_TARGET: [i8; EMERGENT_WIDTH] = [1, 0];
/// Emergent-unit pattern for any other arrangement.
pub const EMERGENT_DISTRACTOR: [i8; EMERGENT_WIDTH] = [0, 1];

/// Writes the emergent unit pattern into the first role of a vector set.
pub fn set_emergent(roles: &mut [RoleBoundVector], pattern: [i8; EMERGENT_WIDTH]) -> Result<()> {
    let first = &mut roles[0].vector;
    if first.layout().emergent != EMERGENT_WIDTH {
        return Err(Error::SegmentNotDeclared(Segment::Emergent.name()));
    }
    first.set_segment(Segment::Emergent, &pattern)
}

/// Emergent pattern for an item: the target unit when its role-to-shape
/// arrangement equals the template's, the distractor unit otherwise.
pub fn emergent_pattern(
    template: &[RoleBoundVector],
    item: &[RoleBoundVector],
) -> [i8; EMERGENT_WIDTH] {
    let same = template.len() == item.len()
        && template.iter().zip(item).all(|(a, b)| {
            a.role == b.role && a.vector.segment(Segment::Shape) == b.vector.segment(Segment::Shape)
        });
    if same {
        EMERGENT_TARGET
    } else {
        EMERGENT_DISTRACTOR
    }
}

/// Adds emergent units to a template and its display items.
///
/// The template gets the target unit and each item gets
/// [`emergent_pattern`]. Both emergent dimensions get salience `eta`.
pub fn attach_emergent(
    template: &mut TargetTemplate,
    items: &mut [SearchItem],
    eta: f64,
) -> Result<()> {
    for item in items.iter_mut() {
        let pattern = emergent_pattern(&template.roles, &item.roles);
        set_emergent(&mut item.roles, pattern)?;
    }
    set_emergent(&mut template.roles, EMERGENT_TARGET)?;
    let layout = template.layout();
    template
        .salience
        .set_segment(layout, Segment::Emergent, eta)
}

/// A display ready for one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct Display {
    pub items: Vec<SearchItem>,
}

impl Display {
    pub fn target_index(&self) -> Option<usize> {
        self.items.iter().position(|i| i.is_target)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// Role-bound vectors for a target and its distractor types, prepared once
/// per condition and reused for every display.
#[derive(Debug, Clone, PartialEq)]
pub struct ItemPrototypes {
    pub template: TargetTemplate,
    pub target: Vec<RoleBoundVector>,
    pub distractors: Vec<Vec<RoleBoundVector>>,
}

impl ItemPrototypes {
    /// Lays out `set_size` items. With `target_present`, one slot chosen
    /// uniformly holds the target; distractor types are dealt in rotation
    /// from a random starting type so counts differ by at most one.
    pub fn build_display<R: Rng + ?Sized>(
        &self,
        set_size: usize,
        target_present: bool,
        geometry: &LayoutParams,
        rng: &mut R,
    ) -> Result<Display> {
        if set_size == 0 {
            return Err(Error::InvalidExperiment("set size must be at least 1".into()));
        }
        if self.distractors.is_empty() && (set_size > 1 || !target_present) {
            return Err(Error::InvalidExperiment(
                "display needs distractors but none are defined".into(),
            ));
        }
        let layout = layout_radial(set_size, geometry, rng);
        let target_slot = if target_present {
            Some(rng.gen_range(0..set_size))
        } else {
            None
        };
        let n_types = self.distractors.len().max(1);
        let offset = rng.gen_range(0..n_types);
        let mut kinds: Vec<usize> = (0..set_size - usize::from(target_present))
            .map(|j| (j + offset) % n_types)
            .collect();
        kinds.shuffle(rng);
        let mut kinds = kinds.into_iter();
        let items = layout
            .positions
            .iter()
            .enumerate()
            .map(|(slot, &position)| {
                let (roles, is_target) = if Some(slot) == target_slot {
                    (self.target.clone(), true)
                } else {
                    (self.distractors[kinds.next().unwrap()].clone(), false)
                };
                SearchItem {
                    roles,
                    position,
                    priority: 1.0,
                    state: ItemState::Active,
                    is_target,
                }
            })
            .collect();
        Ok(Display { items })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn red_x() -> Filler {
        Filler::new(Color::Red, Shape::X)
    }

    fn green_o() -> Filler {
        Filler::new(Color::Green, Shape::O)
    }

    #[test]
    fn relational_item_has_two_roles() {
        let expr = ItemExpr::relational(Relation::Above, red_x(), green_o());
        let item = make_item(&expr, Layout::BASIC, Point::ORIGIN).unwrap();
        assert_eq!(item.roles.len(), 2);
        assert_eq!(item.roles[0].role, Some(Role::Above));
        assert_eq!(
            item.roles[0].vector,
            FeatureVector::filler(Layout::BASIC, Color::Red, Shape::X)
        );
        assert_eq!(item.roles[1].role, Some(Role::Below));
        assert_eq!(
            item.roles[1].vector,
            FeatureVector::filler(Layout::BASIC, Color::Green, Shape::O)
        );
    }

    #[test]
    fn simple_item_has_one_roleless_vector() {
        let item = make_item(
            &ItemExpr::simple(Color::Blue, Shape::X),
            Layout::BASIC,
            Point::ORIGIN,
        )
        .unwrap();
        assert_eq!(item.roles.len(), 1);
        assert_eq!(item.roles[0].role, None);
    }

    #[test]
    fn above_and_below_describe_the_same_item() {
        let a = ItemExpr::relational(Relation::Above, red_x(), green_o());
        let b = ItemExpr::relational(Relation::Below, green_o(), red_x());
        assert_eq!(
            make_roles(&a, Layout::BASIC).unwrap(),
            make_roles(&b, Layout::BASIC).unwrap()
        );
    }

    #[test]
    fn arity_is_checked() {
        let bad = ItemExpr::Relational {
            relation: Relation::Above,
            args: vec![red_x()],
        };
        assert!(matches!(
            make_roles(&bad, Layout::BASIC),
            Err(Error::Arity { expected: 2, found: 1, .. })
        ));
    }

    #[test]
    fn role_swap_has_identical_superposition() {
        let target = make_roles(
            &ItemExpr::relational(Relation::Above, red_x(), green_o()),
            Layout::BASIC,
        )
        .unwrap();
        let swapped = make_roles(
            &ItemExpr::relational(Relation::Above, green_o(), red_x()),
            Layout::BASIC,
        )
        .unwrap();
        assert_ne!(target, swapped);
        for pooling in [Pooling::ClampedSum, Pooling::PresenceUnion] {
            assert_eq!(
                superimpose_roles(&target, pooling),
                superimpose_roles(&swapped, pooling)
            );
        }
    }

    #[test]
    fn pooling_rules_on_opposing_colors() {
        let roles = make_roles(
            &ItemExpr::relational(Relation::Above, red_x(), green_o()),
            Layout::BASIC,
        )
        .unwrap();
        let sum = superimpose_roles(&roles, Pooling::ClampedSum);
        assert!(sum[6..12].iter().all(|v| *v == 0));
        let union = superimpose_roles(&roles, Pooling::PresenceUnion);
        assert!(union[6..12].iter().all(|v| *v == 1));
        // shared X/O units saturate at 1 either way
        assert!(sum[18..].iter().all(|v| (0..=1).contains(v)));
        assert_eq!(&sum[18..], &union[18..]);
    }

    #[test]
    fn tagged_vector_prepends_one_hot_role() {
        let roles = make_roles(
            &ItemExpr::relational(Relation::Above, red_x(), green_o()),
            Layout::BASIC,
        )
        .unwrap();
        let tag_roles = [Role::Above, Role::Below];
        let t = roles[1].tagged(&tag_roles);
        assert_eq!(&t[..2], &[0, 1]);
        assert_eq!(t.len(), 2 + Layout::BASIC.width());
    }

    #[test]
    fn higher_order_patterns() {
        assert_eq!(HigherOrderKind::Arrow.units(4), vec![0, 0, 0, 0, 1, 1, 1, 1]);
        assert_eq!(HigherOrderKind::Triangle.units(4), vec![1, 1, 1, 1, 0, 0, 0, 0]);
        for n in [1, 8, 16, 32, 64, 128] {
            let dot: i32 = HigherOrderKind::Arrow
                .units(n)
                .iter()
                .zip(HigherOrderKind::Triangle.units(n))
                .map(|(a, b)| (*a as i32) * (b as i32))
                .sum();
            assert_eq!(dot, 0);
        }
    }

    #[test]
    fn higher_order_needs_declared_segment() {
        let mut roles = make_roles(&ItemExpr::simple(Color::None, Shape::G1), Layout::BASIC).unwrap();
        assert!(attach_higher_order(&mut roles, HigherOrderKind::Arrow, 4).is_err());
        let layout = Layout {
            higher_order: 8,
            emergent: 0,
        };
        let mut roles = make_roles(&ItemExpr::simple(Color::None, Shape::G1), layout).unwrap();
        attach_higher_order(&mut roles, HigherOrderKind::Arrow, 4).unwrap();
        assert_eq!(
            roles[0].vector.segment(Segment::HigherOrder),
            &[0, 0, 0, 0, 1, 1, 1, 1]
        );
    }

    fn emergent_setup(eta: f64) -> (TargetTemplate, Vec<SearchItem>) {
        let layout = Layout {
            higher_order: 0,
            emergent: 2,
        };
        let t_expr = ItemExpr::relational(Relation::Above, red_x(), green_o());
        let template = TargetTemplate {
            roles: make_roles(&t_expr, layout).unwrap(),
            salience: SalienceMap::uniform(layout),
        };
        let swap = ItemExpr::relational(Relation::Above, green_o(), red_x());
        let feature = ItemExpr::relational(
            Relation::Above,
            Filler::new(Color::Orange, Shape::X),
            green_o(),
        );
        let items = vec![
            make_item(&t_expr, layout, Point::ORIGIN).unwrap(),
            make_item(&swap, layout, Point::ORIGIN).unwrap(),
            make_item(&feature, layout, Point::ORIGIN).unwrap(),
        ];
        let mut template = template;
        let mut items = items;
        attach_emergent(&mut template, &mut items, eta).unwrap();
        (template, items)
    }

    #[test]
    fn emergent_units_follow_arrangement() {
        let (template, items) = emergent_setup(0.33);
        let em = |roles: &[RoleBoundVector]| roles[0].vector.segment(Segment::Emergent).to_vec();
        assert_eq!(em(&template.roles), vec![1, 0]);
        assert_eq!(em(&items[0].roles), vec![1, 0]);
        assert_eq!(em(&items[1].roles), vec![0, 1]);
        // same arrangement, different color
        assert_eq!(em(&items[2].roles), vec![1, 0]);
        let layout = template.layout();
        for k in layout.range(Segment::Emergent) {
            assert_eq!(template.salience.get(k), 0.33);
        }
    }

    #[test]
    fn emergent_needs_declared_segment() {
        let mut template = TargetTemplate {
            roles: make_roles(&ItemExpr::simple(Color::Red, Shape::X), Layout::BASIC).unwrap(),
            salience: SalienceMap::uniform(Layout::BASIC),
        };
        assert!(attach_emergent(&mut template, &mut [], 1.0).is_err());
    }

    fn prototypes(n_types: usize) -> ItemPrototypes {
        let layout = Layout::BASIC;
        let t = make_roles(&ItemExpr::simple(Color::Red, Shape::X), layout).unwrap();
        let ds = (0..n_types)
            .map(|i| make_roles(&ItemExpr::simple(Color::ALL[i + 3], Shape::O), layout).unwrap())
            .collect();
        ItemPrototypes {
            template: TargetTemplate {
                roles: t.clone(),
                salience: SalienceMap::uniform(layout),
            },
            target: t,
            distractors: ds,
        }
    }

    #[test]
    fn display_has_one_target_and_balanced_distractors() {
        let protos = prototypes(2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for set_size in [1, 2, 5, 15, 30] {
            let d = protos
                .build_display(set_size, true, &LayoutParams::default(), &mut rng)
                .unwrap();
            assert_eq!(d.len(), set_size);
            assert_eq!(d.items.iter().filter(|i| i.is_target).count(), 1);
            let first = d
                .items
                .iter()
                .filter(|i| !i.is_target && i.roles == protos.distractors[0])
                .count() as i64;
            let second = (set_size as i64 - 1) - first;
            assert!((first - second).abs() <= 1);
        }
    }

    #[test]
    fn target_absent_display() {
        let protos = prototypes(1);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = protos
            .build_display(4, false, &LayoutParams::default(), &mut rng)
            .unwrap();
        assert_eq!(d.target_index(), None);
        assert_eq!(d.len(), 4);
    }

    #[test]
    fn target_slot_is_uniform() {
        let protos = prototypes(1);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 6;
        let draws = 60_000;
        let mut counts = vec![0usize; n];
        for _ in 0..draws {
            let d = protos
                .build_display(n, true, &LayoutParams::default(), &mut rng)
                .unwrap();
            counts[d.target_index().unwrap()] += 1;
        }
        let expected = draws as f64 / n as f64;
        let sd = (draws as f64 * (1.0 / n as f64) * (1.0 - 1.0 / n as f64)).sqrt();
        for c in counts {
            assert!((c as f64 - expected).abs() < 4.0 * sd, "{c} vs {expected}");
        }
    }
}
