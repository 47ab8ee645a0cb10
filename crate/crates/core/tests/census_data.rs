use std::path::PathBuf;

use nashpoly::census::{census, check_t49, diff_golden, parse_golden, recognize_semi_cube, Census, CombinatorialPolytope};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(n: usize) -> (Vec<nashpoly::census::CensusRow>, nashpoly::census::GoldenDiff) {
    let c = Census::from_file(data(&format!("p4_{n}.txt"))).unwrap();
    assert_eq!((c.dim, c.facet_count), (4, n));
    let rows = census(&c.polytopes).unwrap();
    let golden = parse_golden(&std::fs::read_to_string(data(&format!("golden/p4_{n}.txt"))).unwrap()).unwrap();
    let diff = diff_golden(&rows, &golden);
    (rows, diff)
}

#[test]
fn small_classes_match_golden() {
    for (n, count) in [(5, 1), (6, 2), (7, 5)] {
        let (rows, diff) = run(n);
        assert_eq!(rows.len(), count);
        assert!(diff.all_match(), "{diff:?}");
        assert!(rows.iter().all(|r| r.obstructions >= 3));
    }
}

#[test]
fn eight_facets_match_golden() {
    let (rows, diff) = run(8);
    assert!(diff.all_match(), "{diff:?}");
    let few: Vec<_> = diff.rows.iter().filter(|r| r.vertex_count - r.bound < 4).collect();
    assert_eq!(few.len(), 2);
    let golden = parse_golden(&std::fs::read_to_string(data("golden/p4_8.txt")).unwrap()).unwrap();
    let mut ids: Vec<&str> = few.iter().map(|r| golden[r.golden.unwrap()].id.as_deref().unwrap()).collect();
    ids.sort();
    assert_eq!(ids, ["23", "24"]);
    assert_eq!(rows.iter().filter(|r| r.dual_neighborly).count(), 3);
}

#[test]
fn semi_cube_and_cube_are_the_exceptions() {
    let c = Census::from_file(data("p4_8.txt")).unwrap();
    let semi: Vec<_> = c.polytopes.iter().filter(|p| recognize_semi_cube(p).unwrap()).collect();
    assert_eq!(semi.len(), 1);
    let rows = census(&c.polytopes).unwrap();
    let cubes: Vec<_> = rows.iter().filter(|r| r.cube_facets() == 8).collect();
    assert_eq!(cubes.len(), 1);
    assert_eq!((cubes[0].vertex_count, cubes[0].bound), (16, 16));
    assert!(!recognize_semi_cube(&CombinatorialPolytope::cube(4)).unwrap());
}

#[test]
fn eight_facet_rows_pass_t49_style_checks_where_they_apply() {
    let (rows, _) = run(8);
    let rep = check_t49(&rows);
    assert_eq!(rep.max_vertices, 20);
    assert!(rep.passes('a') && rep.passes('c'));
}
