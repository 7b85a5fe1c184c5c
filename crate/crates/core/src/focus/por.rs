use crate::normalize::normalize;
use crate::subst::Substitution;
use crate::term::Term;

use super::{GroundEquation, PorMode};

/// Primary occurrence restriction, checked with fresh-constant probes: the
/// candidate ground value is applied to fresh constants `c1..cn` and the
/// result inspected at the primary positions of the semantics.
pub fn por_filter(candidates: &[Substitution], geq: &GroundEquation, mode: PorMode) -> Vec<Substitution> {
    if mode == PorMode::Off {
        return candidates.to_vec();
    }
    let mut taken = std::collections::BTreeSet::new();
    geq.sem.symbol_names(&mut taken);
    let probes: Vec<Term> = geq
        .argument_types()
        .into_iter()
        .enumerate()
        .map(|(i, ty)| {
            let name = (0..)
                .map(|k| format!("_c{}{}", i + 1, "'".repeat(k)))
                .find(|n| !taken.contains(n))
                .expect("unbounded name supply");
            normalize(&Term::constant(&name, ty))
        })
        .collect();
    let expected = geq
        .primary_positions
        .iter()
        .try_fold(geq.sem.strip_primary(), |acc, (path, i)| acc.replace_at(path, &probes[*i]))
        .expect("primary positions lie inside the semantics");
    candidates
        .iter()
        .filter(|sigma| {
            let Some(gd) = sigma.get(&geq.gd_var.name) else {
                return false;
            };
            let probed = normalize(&Term::apply(gd.clone(), probes.iter().cloned()));
            let abstracted = geq
                .primary_positions
                .iter()
                .all(|(path, i)| probed.subterm_at(path) == Some(&probes[*i]));
            match mode {
                PorMode::Dsp => abstracted,
                PorMode::Strict => abstracted && probed == expected,
                PorMode::Off => true,
            }
        })
        .cloned()
        .collect()
}
