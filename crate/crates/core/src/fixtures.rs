//! Small polygraphs shipped with the crate.

use std::sync::Arc;

use crate::functor::PolyMap;
use crate::io;
use crate::model::{build_polygraph, Polygraph, RawPolygraph};

pub const FIX_INT_JSON: &str = include_str!("../../../fixtures/fix_int.json");
pub const FIX_EH_JSON: &str = include_str!("../../../fixtures/fix_eh.json");
pub const FIX_Q_JSON: &str = include_str!("../../../fixtures/fix_q.json");
pub const LOOP_JSON: &str = include_str!("../../../fixtures/loop.json");
pub const COLLAPSE_JSON: &str = include_str!("../../../fixtures/collapse.json");

fn raw(text: &str) -> RawPolygraph {
    serde_json::from_str(text).expect("fixture parses")
}

pub fn fix_int_raw() -> RawPolygraph {
    raw(FIX_INT_JSON)
}

pub fn fix_eh_raw() -> RawPolygraph {
    raw(FIX_EH_JSON)
}

pub fn fix_q_raw() -> RawPolygraph {
    raw(FIX_Q_JSON)
}

/// Points x, y, z; f, f': x → y; g, g': y → z; phi: f ⇒ f'; psi: g ⇒ g'.
pub fn fix_int() -> Polygraph {
    build_polygraph(&fix_int_raw()).expect("fixture is valid")
}

/// One point x, a loop f on it and alpha: 1_x ⇒ f.
pub fn fix_eh() -> Polygraph {
    build_polygraph(&fix_eh_raw()).expect("fixture is valid")
}

/// One point p, a loop h and beta: h ⇒ h.
pub fn fix_q() -> Polygraph {
    build_polygraph(&fix_q_raw()).expect("fixture is valid")
}

/// One point p, a loop f and gamma: f ⇒ f.
pub fn loop_fixture() -> Polygraph {
    build_polygraph(&raw(LOOP_JSON)).expect("fixture is valid")
}

/// The map [`fix_int`] → [`fix_q`] sending everything of each dimension to
/// the unique generator there.
pub fn collapse() -> PolyMap {
    io::polymap_from_json(COLLAPSE_JSON).expect("fixture is valid")
}

pub fn fix_int_arc() -> Arc<Polygraph> {
    Arc::new(fix_int())
}
