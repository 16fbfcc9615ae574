//! Line-for-line rendering of the hallucinator pseudocode: same grouping,
//! then look for a channel pair with equal data, a different visual output
//! and at least one side mapped.

use semsnap_core::model::{Canvas, View};

use crate::oracle::{same_grouping, same_look, tuple_data, tuples, Eq3, Equivalence};

struct Filter {
    d: bool,
    v: bool,
    mapped_to_data: bool,
}

fn find_channel_pairs(view1: &View, view2: &View, want: Filter, eq: &Equivalence) -> Vec<(usize, usize)> {
    let g = same_grouping(view1, view2, eq);
    let (t1, t2) = (tuples(view1), tuples(view2));
    let mut pairs = Vec::new();
    for (i, a) in t1.iter().enumerate() {
        for (j, b) in t2.iter().enumerate() {
            if a.class != b.class {
                continue;
            }
            let d = tuple_data(a, b, g, eq) == Eq3::Yes;
            let v = same_look(&a.visual, &b.visual);
            let mapped = a.field.is_some() || b.field.is_some();
            if d == want.d && v == want.v && mapped == want.mapped_to_data {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

pub fn is_hallucinator(view1: &View, view2: &View, canvas: &Canvas) -> bool {
    let eq = Equivalence::from_canvas(canvas);
    if same_grouping(view1, view2, &eq) {
        let pairs = find_channel_pairs(
            view1,
            view2,
            Filter {
                d: true,
                v: false,
                mapped_to_data: true,
            },
            &eq,
        );
        return !pairs.is_empty();
    }
    false
}
