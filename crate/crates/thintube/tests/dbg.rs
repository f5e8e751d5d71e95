#[test]
fn dbg_tube() {
    use thintube::geometry::*;
    let g = CurveGeometry::circle(1.0, 256).unwrap();
    match TubeDescriptor::validate(&g, 0.1) {
        Ok(_) => println!("ok"),
        Err(e) => println!("err: {e}"),
    }
}
