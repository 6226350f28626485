//! Relational items: role-bound vectors, their pooled (role-free) form seen
//! by the parallel process, and the role-sensitive serial check.
//!
//! ```text
//! cargo run --example relational_search
//! ```

use casper::engine::{scrutinize, EngineParams, Verdict};
use casper::features::{Color, Layout, SalienceMap, Shape};
use casper::stimuli::{
    make_item, make_roles, superimpose_roles, Filler, ItemExpr, Point, Relation, TargetTemplate,
};

fn main() -> casper::Result<()> {
    let layout = Layout::BASIC;
    let red_x = Filler::new(Color::Red, Shape::X);
    let green_o = Filler::new(Color::Green, Shape::O);
    let target = ItemExpr::relational(Relation::Above, red_x, green_o);
    let swapped = ItemExpr::relational(Relation::Above, green_o, red_x);

    let template = TargetTemplate {
        roles: make_roles(&target, layout)?,
        salience: SalienceMap::uniform(layout),
    };
    let pooling = EngineParams::default().pooling;
    let t_item = make_item(&target, layout, Point::ORIGIN)?;
    let s_item = make_item(&swapped, layout, Point::ORIGIN)?;

    let pooled_t = superimpose_roles(&t_item.roles, pooling);
    let pooled_s = superimpose_roles(&s_item.roles, pooling);
    println!("pooling: {}", pooling.name());
    println!("pooled vectors identical: {}", pooled_t == pooled_s);

    for (label, item) in [("target", &t_item), ("role swap", &s_item)] {
        let verdict = match scrutinize(item, &template) {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
        };
        println!("serial scrutiny of {label:<10} -> {verdict}");
    }
    Ok(())
}
