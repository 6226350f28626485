//! Feature encodings: the color and shape tables, vector layouts, and how
//! a display's dimensions split into relevant, irrelevant and absent.
//!
//! ```text
//! cargo run --example encodings
//! ```

use casper::features::{
    classify_vectors, color_table_csv, count_overlap, Color, FeatureClass, FeatureVector, Layout,
    Shape,
};

fn main() -> casper::Result<()> {
    let colors = color_table_csv();
    println!("{} colors, {} shapes", colors.lines().count() - 1, shape_count());
    println!("{}", colors.lines().take(4).collect::<Vec<_>>().join("\n"));

    let layout = Layout::BASIC;
    println!("\nbasic layout: {} dimensions", layout.width());
    let red_x = FeatureVector::filler(layout, Color::Red, Shape::X);
    let green_x = FeatureVector::filler(layout, Color::Green, Shape::X);
    let red_o = FeatureVector::filler(layout, Color::Red, Shape::O);

    // Red X among green Xs: only color differs.
    let c = classify_vectors(&red_x, &[&green_x])?;
    report("red X among green X", &c);
    // Red X among green Xs and red Os: both segments carry differences.
    let c = classify_vectors(&red_x, &[&green_x, &red_o])?;
    report("red X among green X, red O", &c);

    let dark_green_t = FeatureVector::filler(layout, Color::DarkGreen, Shape::T1);
    for d in [
        FeatureVector::filler(layout, Color::DarkGreen, Shape::X),
        FeatureVector::filler(layout, Color::Brown, Shape::T1),
    ] {
        let o = count_overlap(&dark_green_t, &d)?;
        println!(
            "dark-green T1 vs distractor: color {} shared / {} differing, shape {} / {}",
            o.color.shared, o.color.differing, o.shape.shared, o.shape.differing
        );
    }
    Ok(())
}

fn shape_count() -> usize {
    casper::features::shape_table_csv().lines().count() - 1
}

fn report(label: &str, c: &casper::features::FeatureClassification) {
    println!(
        "{label:<30} relevant {:>2}  irrelevant {:>2}  absent {:>2}",
        c.count(FeatureClass::Relevant),
        c.count(FeatureClass::Irrelevant),
        c.count(FeatureClass::Absent)
    );
}
