use canonsys_core::criteria::{bounded_invertibility, discreteness, summability};
use canonsys_core::examples::registry;
use canonsys_core::growth::GrowthFunction;

#[test]
fn continuous_and_sequential_methods_agree_on_registry() {
    let g = GrowthFunction::power(2.0).unwrap();
    for case in registry() {
        let h = &case.spec;
        let reports = [
            discreteness(h, 40).unwrap(),
            bounded_invertibility(h, 40).unwrap(),
            summability(h, &g, 40).unwrap(),
        ];
        for r in &reports {
            println!("{:<28} {:<22} {}", case.name, r.criterion, r.verdict.as_str());
            assert_eq!(r.agreement, Some(true), "{} / {}", case.name, r.criterion);
        }
    }
}
