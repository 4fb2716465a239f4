use genericlab::io::{measure_from_json, measure_to_json, point_from_json};
use genericlab::measure::{emp_measure, prohorov};
use genericlab::rational::{frac, int};
use genericlab::reductions::{oxtoby_build, oxtoby_reduce, psi_reduction, tree_point, PsiSchedule, TreeOnOmega};
use genericlab::symbolic::ShiftSpace;
use genericlab::tracing::{build_generic_point, trace_full_shift, verify_trace, BuildOptions, Specification};
use genericlab::{DiscreteMeasure, Point, Word};

fn mixture(h: usize) -> DiscreteMeasure {
    DiscreteMeasure::new(vec![(Point::constant(0), frac(1, 4)), (Point::constant(1), frac(3, 4))], h).unwrap()
}

#[test]
fn measure_through_json_and_build() {
    let h = 10;
    let mu = measure_from_json(&measure_to_json(&mixture(h)), h).unwrap();
    let eps = frac(1, 8);
    let b = build_generic_point(&vec![mu.clone(); 4], &eps, 3, &BuildOptions::default()).unwrap();
    for (n, c) in (1..).zip(&b.certificates) {
        let d = prohorov(&emp_measure(&b.point, c.l_n, h).unwrap(), &mu, h);
        assert_eq!(d, c.achieved);
        assert!(d <= frac(1, n) + int(7) * &eps / int(1 << (n + 1)));
    }
}

#[test]
fn recipe_point_reads_back() {
    let v = serde_json::json!({"kind": "recipe", "name": "oxtoby_toeplitz", "params": {"s": [3, 4]}});
    let x = point_from_json(&v).unwrap();
    assert_eq!(x.prefix(3), Word::new(vec![0, 1, 1]));
}

#[test]
fn psi_reduction_reaches_its_stages() {
    let nu = DiscreteMeasure::dirac(Point::constant(1));
    let target = DiscreteMeasure::dirac(Point::constant(0));
    let opts = BuildOptions {
        horizon: 8,
        decompose: false,
        ..Default::default()
    };
    let r = psi_reduction(&[3, 4, 5, 6], &PsiSchedule::triangular(4), 3, &frac(1, 8), &nu, &[target], &opts).unwrap();
    assert_eq!(r.rows.len(), 3);
    assert!(r.rows.iter().all(|row| row.to_mixture <= row.bound));
}

#[test]
fn oxtoby_checkpoints_and_tree_schedule() {
    let m = oxtoby_build(&[4, 8, 16, 32], 4).unwrap();
    let r = oxtoby_reduce(&m, &[0, 0], None).unwrap();
    assert!(r.all_checkpoints_hold());
    let t = TreeOnOmega::new(vec![vec![], vec![0]]).unwrap();
    let p = tree_point(&t, 3, 1 << 16).unwrap();
    assert_eq!(p.ell.len(), 3);
}

#[test]
fn traced_concatenation_verifies_at_full_radius() {
    let space = ShiftSpace::full([0, 1]);
    let xi = Specification::new(vec![(Point::constant(1), 5), (Point::periodic(Word::parse("01").unwrap()).unwrap(), 7)])
        .unwrap();
    let y = trace_full_shift(&space, &xi).unwrap();
    assert!(verify_trace(&y, &xi, &int(1), &int(0), &int(0)).unwrap().verdict);
}
