use dodeca_ca::catalog::load_default;
use dodeca_ca::scenario::{default_golden_dir, scenario, SWITCH_SCENARIOS};

#[test]
fn every_switch_scenario_reproduces_its_reference_trace() {
    let table = load_default().unwrap();
    for (name, ..) in SWITCH_SCENARIOS {
        let s = scenario(name).unwrap();
        let golden = s.load_golden(&default_golden_dir()).unwrap().unwrap();
        let got = s.run(&table, s.steps).unwrap().table(&s.print_order);
        let diff = golden.diff(&got);
        assert!(diff.is_empty(), "{name}: {:?}", diff);
    }
}

#[test]
fn printed_trace_parses_back_to_the_reference() {
    let table = load_default().unwrap();
    let s = scenario("fixed-nonsel").unwrap();
    let trace = s.run(&table, s.steps).unwrap();
    let text = dodeca_ca::engine::format_trace(&trace, &s.print_order);
    let reparsed = dodeca_ca::TraceTable::parse(&text).unwrap();
    let golden = s.load_golden(&default_golden_dir()).unwrap().unwrap();
    assert_eq!(reparsed, golden);
    let row4: Vec<String> = golden.rows[4]
        .states
        .iter()
        .map(|c| c.to_string())
        .collect();
    assert_eq!(
        row4.join(" "),
        "W W W W B R W W W W W W W W W W B R W R R B"
    );
}
