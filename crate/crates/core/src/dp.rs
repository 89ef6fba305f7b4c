//! Variable elimination over a factor model along a fixed variable order.
//!
//! The state after step `k` is the assignment of those already-placed
//! variables that still appear in an unprocessed factor. Each factor is
//! evaluated at the step placing its last free variable.

use std::collections::BTreeMap;

use crate::geometry::ExponentVector;
use crate::model::FactorModel;

/// Value semiring for elimination: `extend` multiplies by a factor monomial
/// (recording the hidden symbol just placed, if any), `merge` adds.
pub(crate) trait DpValue: Clone {
    fn extend(&self, monomial: &ExponentVector, symbol: Option<usize>) -> Self;
    fn merge(self, other: Self) -> Self;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Var {
    Hidden(usize),
    Observed(usize),
}

/// Eliminates the variables in `order`. Observed variables not in `order`
/// take their value from `fixed`. Returns `None` when every assignment has a
/// structural zero.
pub(crate) fn eliminate<V: DpValue>(model: &FactorModel, order: &[Var], fixed: &[Option<usize>], init: V) -> Option<V> {
    let q = model.hidden_count();
    let mut hidden_pos = vec![usize::MAX; q];
    let mut observed_pos = vec![usize::MAX; model.observed_count()];
    for (k, v) in order.iter().enumerate() {
        match *v {
            Var::Hidden(h) => hidden_pos[h] = k,
            Var::Observed(o) => observed_pos[o] = k,
        }
    }
    debug_assert!(hidden_pos.iter().all(|&p| p != usize::MAX), "every hidden variable must be ordered");

    let factors = model.factors();
    let mut at_step: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
    let mut last_use = vec![None::<usize>; order.len()];
    let mut acc = init;
    for (fi, f) in factors.iter().enumerate() {
        let positions: Vec<usize> = f
            .scope_hidden()
            .iter()
            .map(|&h| hidden_pos[h])
            .chain(f.scope_observed().iter().map(|&o| observed_pos[o]).filter(|&p| p != usize::MAX))
            .collect();
        match positions.iter().max() {
            None => {
                let ov: Vec<usize> = f.scope_observed().iter().map(|&o| fixed[o].expect("fixed observation")).collect();
                acc = acc.extend(f.get(&[], &ov)?, None);
            }
            Some(&last) => {
                at_step[last].push(fi);
                for &p in &positions {
                    last_use[p] = Some(last_use[p].map_or(last, |u: usize| u.max(last)));
                }
            }
        }
    }

    let radix = |v: Var| match v {
        Var::Hidden(_) => model.hidden_alphabet().len(),
        Var::Observed(_) => model.observed_alphabet().len(),
    };

    // live[k]: positions <= k still needed after step k
    let mut live: Vec<usize> = Vec::new();
    let mut table: BTreeMap<Vec<usize>, V> = BTreeMap::new();
    table.insert(Vec::new(), acc);
    let mut assign = vec![0usize; order.len()];
    let mut hv = Vec::new();
    let mut ov = Vec::new();
    for k in 0..order.len() {
        let next_live: Vec<usize> =
            live.iter().copied().chain(std::iter::once(k)).filter(|&p| last_use[p].is_some_and(|u| u > k)).collect();
        let mut next: BTreeMap<Vec<usize>, V> = BTreeMap::new();
        let symbol_of = |s| match order[k] {
            Var::Hidden(_) => Some(s),
            Var::Observed(_) => None,
        };
        for (state, val) in table {
            for (&p, &s) in live.iter().zip(&state) {
                assign[p] = s;
            }
            'sym: for s in 0..radix(order[k]) {
                assign[k] = s;
                let mut mono: Option<ExponentVector> = None;
                for &fi in &at_step[k] {
                    let f = &factors[fi];
                    hv.clear();
                    hv.extend(f.scope_hidden().iter().map(|&h| assign[hidden_pos[h]]));
                    ov.clear();
                    ov.extend(f.scope_observed().iter().map(|&o| {
                        let p = observed_pos[o];
                        if p == usize::MAX {
                            fixed[o].expect("fixed observation")
                        } else {
                            assign[p]
                        }
                    }));
                    match f.get(&hv, &ov) {
                        Some(e) => mono = Some(mono.map_or_else(|| e.clone(), |m| m.add(e))),
                        None => continue 'sym,
                    }
                }
                let mono = mono.unwrap_or_else(|| ExponentVector::zeros(model.d()));
                let key: Vec<usize> = next_live.iter().map(|&p| assign[p]).collect();
                let value = val.extend(&mono, symbol_of(s));
                match next.remove(&key) {
                    Some(old) => {
                        next.insert(key, old.merge(value));
                    }
                    None => {
                        next.insert(key, value);
                    }
                }
            }
        }
        table = next;
        live = next_live;
        if table.is_empty() {
            return None;
        }
    }
    table.remove(&Vec::new())
}
