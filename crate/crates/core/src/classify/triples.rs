//! N-Triples emission of emotion assertions (`triples/1`).

use std::collections::BTreeSet;
use std::fmt::Write;

use super::{EmotionAssignment, Target};

pub const TRIPLES_SCHEMA: &str = "triples/1";

const PREDICATE: &str = "<urn:spice:evokes>";

/// Percent-encodes every byte outside the URI unreserved set.
fn encode_segment(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    for b in raw.bytes() {
        if b.is_ascii_alphanumeric() || matches!(b, b'-' | b'.' | b'_' | b'~') {
            out.push(b as char);
        } else {
            write!(out, "%{b:02X}").expect("writing to a String");
        }
    }
    out
}

fn subject(target: &Target) -> String {
    match target {
        Target::Item(id) => format!("<urn:spice:item:{}>", encode_segment(id)),
        Target::Story(id) => format!("<urn:spice:story:{}>", encode_segment(id)),
    }
}

/// One line per distinct assertion, sorted by subject then object.
pub fn export_assignments<'a>(assignments: impl IntoIterator<Item = &'a EmotionAssignment>) -> String {
    let triples: BTreeSet<(String, String)> = assignments
        .into_iter()
        .map(|a| {
            (
                subject(&a.target),
                format!("<urn:spice:emotion:{}>", a.emotion.name()),
            )
        })
        .collect();
    let mut out = String::new();
    for (s, o) in triples {
        writeln!(out, "{s} {PREDICATE} {o} .").expect("writing to a String");
    }
    out
}
