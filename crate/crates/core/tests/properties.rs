use std::sync::OnceLock;

use proptest::prelude::*;

use dodeca_ca::catalog::load_default;
use dodeca_ca::geometry::{FACE_COUNT, MOTION_COUNT};
use dodeca_ca::pentagrid::FibCoord;
use dodeca_ca::rules::{minimal_context, rotated_context, RuleContext};
use dodeca_ca::trace::{TraceRow, TraceTable};
use dodeca_ca::{CellState, RotationGroup, RuleTable};

fn catalog() -> &'static RuleTable {
    static T: OnceLock<RuleTable> = OnceLock::new();
    T.get_or_init(|| load_default().unwrap())
}

fn state() -> impl Strategy<Value = CellState> {
    prop::sample::select(CellState::ALL.to_vec())
}

fn context() -> impl Strategy<Value = RuleContext> {
    (state(), prop::array::uniform12(state())).prop_map(|(c, n)| RuleContext::new(c, n))
}

fn rotation() -> impl Strategy<Value = usize> {
    0..MOTION_COUNT
}

proptest! {
    #[test]
    fn minimal_form_is_rotation_invariant(ctx in context(), i in rotation()) {
        let sigma = &RotationGroup::get().elements()[i];
        let rotated = rotated_context(&ctx, sigma);
        let min = minimal_context(&ctx);
        prop_assert_eq!(minimal_context(&rotated), min);
        prop_assert!(min <= rotated);
        prop_assert_eq!(minimal_context(&min), min);
    }

    #[test]
    fn rotating_by_composition(ctx in context(), i in rotation(), j in rotation()) {
        let g = RotationGroup::get().elements();
        let once = rotated_context(&rotated_context(&ctx, &g[i]), &g[j]);
        let composed = rotated_context(&ctx, &g[i].compose(&g[j]));
        prop_assert_eq!(once, composed);
    }

    #[test]
    fn lookup_is_rotation_invariant(rule in 0usize..134, i in rotation()) {
        let table = catalog();
        let r = table.rules()[rule].rule;
        let sigma = &RotationGroup::get().elements()[i];
        let rotated = rotated_context(&r.context, sigma);
        prop_assert_eq!(table.lookup(&rotated), Ok(r.new_state));
    }

    #[test]
    fn default_rule_keeps_mostly_blank_cells(current in state(), busy in prop::collection::vec((0..FACE_COUNT, state()), 0..=2)) {
        let table = catalog();
        let mut n = [CellState::W; FACE_COUNT];
        for (f, s) in busy {
            n[f] = s;
        }
        let ctx = RuleContext::new(current, n);
        if table.explicit(&ctx).is_none() {
            prop_assert_eq!(table.lookup(&ctx), Ok(current));
        }
    }

    #[test]
    fn context_text_round_trip(ctx in context()) {
        prop_assert_eq!(ctx.to_string().parse::<RuleContext>(), Ok(ctx));
    }

    #[test]
    fn trace_text_round_trip(
        labels in prop::collection::btree_set(1u32..500, 1..30),
        rows in prop::collection::vec(prop::collection::vec(state(), 30), 0..10),
    ) {
        let labels: Vec<u32> = labels.into_iter().collect();
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(t, mut s)| {
                s.truncate(labels.len());
                TraceRow { time: t as u64, states: s }
            })
            .collect();
        let table = TraceTable { labels, rows };
        prop_assert_eq!(TraceTable::parse(&table.to_text()).unwrap(), table.clone());
    }

    #[test]
    fn fib_coordinate_round_trip(n in 1u64..1_000_000) {
        let c = FibCoord::longest(n);
        prop_assert_eq!(c.value(), n);
        prop_assert_eq!(c.to_string().parse::<FibCoord>().unwrap(), c.clone());
        prop_assert_eq!(c.preferred_son().value() > n, true);
    }
}
