//! Brute-force reference for the HEAD/MODIFIER combination.
//!
//! Works on plain `(term, positive, degree)` tuples and sets, enumerating every
//! scenario and applying the discard rules literally. Shares no code with the
//! library's bit-mask search.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub type Lit = (String, bool);

#[derive(Debug, Clone)]
pub struct Instance {
    pub head: Vec<(Lit, f64)>,
    pub modifier: Vec<(Lit, f64)>,
    pub head_rigid: Vec<Lit>,
    pub modifier_rigid: Vec<Lit>,
}

fn conflict(a: &Lit, b: &Lit) -> bool {
    a.0 == b.0 && a.1 != b.1
}

/// Expected typical set as `(term, positive, degree)`, sorted by term then
/// polarity.
pub fn oracle_combine(inst: &Instance) -> Vec<(String, bool, f64)> {
    let all: Vec<(Lit, f64, bool)> = inst
        .head
        .iter()
        .map(|(l, d)| (l.clone(), *d, true))
        .chain(inst.modifier.iter().map(|(l, d)| (l.clone(), *d, false)))
        .collect();
    let rigid: Vec<Lit> = inst
        .head_rigid
        .iter()
        .chain(&inst.modifier_rigid)
        .cloned()
        .collect();
    let n = all.len();

    let inheritable: Vec<bool> = all
        .iter()
        .map(|(l, _, is_head)| *is_head && !rigid.iter().any(|r| conflict(r, l)))
        .collect();

    let mut scenarios: Vec<(f64, Vec<bool>)> = Vec::new();
    for code in 0..(1usize << n) {
        let sel: Vec<bool> = (0..n).map(|i| code >> i & 1 == 1).collect();
        let mut p = 1.0;
        for (i, (_, d, _)) in all.iter().enumerate() {
            p *= if sel[i] { *d } else { 1.0 - *d };
        }
        scenarios.push((p, sel));
    }
    scenarios.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());

    let admissible = |sel: &[bool]| -> bool {
        let mut lits: Vec<Lit> = rigid.clone();
        for i in 0..n {
            if sel[i] {
                lits.push(all[i].0.clone());
            }
        }
        for a in &lits {
            for b in &lits {
                if conflict(a, b) {
                    return false;
                }
            }
        }
        let trivial = (0..n).all(|i| !inheritable[i] || sel[i]);
        if trivial {
            return false;
        }
        for j in 0..n {
            if sel[j] && !all[j].2 {
                for i in 0..n {
                    if inheritable[i] && conflict(&all[i].0, &all[j].0) {
                        return false;
                    }
                }
            }
        }
        true
    };

    let mut start = 0;
    while start < scenarios.len() {
        let anchor = scenarios[start].0;
        if anchor <= 0.0 {
            break;
        }
        let mut end = start;
        while end < scenarios.len() && anchor - scenarios[end].0 <= 1e-12 {
            end += 1;
        }
        let winners: Vec<&Vec<bool>> = scenarios[start..end]
            .iter()
            .map(|(_, s)| s)
            .filter(|s| admissible(s))
            .collect();
        if !winners.is_empty() {
            let mut out: BTreeMap<Lit, f64> = BTreeMap::new();
            for sel in winners {
                for i in 0..n {
                    if sel[i] {
                        let lit = all[i].0.clone();
                        // First occurrence in HEAD-then-MODIFIER order.
                        let degree = all.iter().find(|(l, _, _)| *l == lit).unwrap().1;
                        out.insert(lit, degree);
                    }
                }
            }
            return out.into_iter().map(|((t, pos), d)| (t, pos, d)).collect();
        }
        start = end;
    }
    Vec::new()
}

const TERMS: [&str; 12] = [
    "alpha", "beta", "gamma", "delta", "eps", "zeta", "eta", "theta", "iota", "kappa", "lambda",
    "mu",
];

fn degree(rng: &mut StdRng, grid: f64) -> f64 {
    if rng.gen_bool(grid) {
        // Coarse grid so that equal-probability blocks actually occur.
        *[0.6, 0.7, 0.75, 0.8, 0.9, 1.0].choose(rng).unwrap()
    } else {
        1.0 - rng.gen::<f64>() * 0.5
    }
}

/// Up to `max_side` inclusions per concept with `0..=max_conflicts` injected
/// polarity conflicts (HEAD vs MODIFIER typicality, or typicality vs rigid).
/// About 30% of degrees come from a coarse grid.
pub fn random_instance(rng: &mut StdRng, max_side: usize, max_conflicts: usize) -> Instance {
    random_instance_with(rng, max_side, max_conflicts, 0.3)
}

/// As [`random_instance`], drawing a fraction `grid` of degrees from the grid
/// and the rest uniformly from (0.5, 1].
pub fn random_instance_with(
    rng: &mut StdRng,
    max_side: usize,
    max_conflicts: usize,
    grid: f64,
) -> Instance {
    let mut pool: Vec<&str> = TERMS.to_vec();
    pool.shuffle(rng);
    let nh = rng.gen_range(1..=max_side);
    let nm = rng.gen_range(1..=max_side);
    let head: Vec<(Lit, f64)> = pool[..nh]
        .iter()
        .map(|t| ((t.to_string(), rng.gen_bool(0.85)), degree(rng, grid)))
        .collect();
    // Modifier terms may overlap with HEAD terms (shared literals).
    pool.shuffle(rng);
    let mut modifier: Vec<(Lit, f64)> = pool[..nm]
        .iter()
        .map(|t| ((t.to_string(), true), degree(rng, grid)))
        .collect();
    for (l, _) in modifier.iter_mut() {
        if let Some(((_, pos), _)) = head.iter().find(|((t, _), _)| *t == l.0) {
            l.1 = *pos;
        }
    }
    let mut head_rigid = Vec::new();
    let mut modifier_rigid = Vec::new();
    let conflicts = rng.gen_range(0..=max_conflicts);
    for _ in 0..conflicts {
        let ((term, pos), _) = head[rng.gen_range(0..head.len())].clone();
        match rng.gen_range(0..3) {
            0 => {
                let idx = rng.gen_range(0..modifier.len());
                if !modifier
                    .iter()
                    .enumerate()
                    .any(|(k, ((t, _), _))| k != idx && *t == term)
                {
                    modifier[idx].0 = (term, !pos);
                }
            }
            1 => modifier_rigid.push((term, !pos)),
            _ => {
                let ((mterm, mpos), _) = modifier[rng.gen_range(0..modifier.len())].clone();
                head_rigid.push((mterm, !mpos));
            }
        }
    }
    // Rigid sets of one concept never contain both polarities of a term.
    dedup_rigid(&mut head_rigid);
    dedup_rigid(&mut modifier_rigid);
    Instance {
        head,
        modifier,
        head_rigid,
        modifier_rigid,
    }
}

fn dedup_rigid(rigid: &mut Vec<Lit>) {
    let mut keep: Vec<Lit> = Vec::new();
    for l in rigid.drain(..) {
        if !keep.iter().any(|k| k.0 == l.0) {
            keep.push(l);
        }
    }
    *rigid = keep;
}

fn lit_text((term, pos): &Lit) -> String {
    if *pos {
        term.clone()
    } else {
        format!("!{term}")
    }
}

/// The instance in the line-oriented KB format, concepts `H` and `M`.
pub fn to_kb_text(inst: &Instance) -> String {
    let mut s = String::new();
    for l in &inst.head_rigid {
        s.push_str(&format!("rigid H {}\n", lit_text(l)));
    }
    for l in &inst.modifier_rigid {
        s.push_str(&format!("rigid M {}\n", lit_text(l)));
    }
    for (l, d) in &inst.head {
        s.push_str(&format!("typ H {} {:?}\n", lit_text(l), d));
    }
    for (l, d) in &inst.modifier {
        s.push_str(&format!("typ M {} {:?}\n", lit_text(l), d));
    }
    s
}
