//! The `A = B` case: sets `A` with `#A >= 2` and `A + A = Q`.

use std::time::Instant;

use super::{DecompositionCertificate, Mode, SearchConfig, SearchReport};
use crate::error::Result;
use crate::field::{Element, Field};
use crate::set::{sumset_unchecked, ElementSet, ResidueShifts};

struct Walk<'a, 'f> {
    field: &'f Field,
    shifts: &'a ResidueShifts<'f>,
    residues: &'a ElementSet,
    nodes: u64,
    coverage_pruned: u64,
    found: Vec<ElementSet>,
}

impl Walk<'_, '_> {
    /// `compat = ∩_{a∈A} (Q - a)`; every candidate lies in `compat` and
    /// satisfies `2u ∈ Q`, so `A + A ⊆ Q` holds along the whole walk.
    fn visit(&mut self, a: &ElementSet, compat: &ElementSet, cands: &[Element]) {
        self.nodes += 1;
        if a.len() >= 2 && sumset_unchecked(self.field, a, a) == *self.residues {
            self.found.push(a.clone());
        }
        if cands.is_empty() {
            return;
        }
        let mut pool = a.clone();
        for &u in cands {
            pool.insert(u);
        }
        if !self
            .residues
            .is_subset(&sumset_unchecked(self.field, &pool, &pool))
        {
            self.coverage_pruned += 1;
            return;
        }
        for (i, &u) in cands.iter().enumerate() {
            let mut child = a.clone();
            child.insert(u);
            let child_compat = compat.and(&self.shifts.minus(u));
            let next: Vec<Element> = cands[i + 1..]
                .iter()
                .copied()
                .filter(|&w| child_compat.contains(w))
                .collect();
            self.visit(&child, &child_compat, &next);
        }
    }
}

pub fn shkredov_search(field: &Field) -> Result<SearchReport> {
    let start = Instant::now();
    let shifts = ResidueShifts::new(field);
    let residues = shifts.residues().clone();
    let mut walk = Walk {
        field,
        shifts: &shifts,
        residues: &residues,
        nodes: 0,
        coverage_pruned: 0,
        found: Vec::new(),
    };
    let q = field.q();
    let roots: Vec<Element> = (0..q)
        .filter(|&u| residues.contains(field.add(u, u)))
        .collect();
    walk.visit(&ElementSet::empty(q), &ElementSet::full(q), &roots);

    let mut report = SearchReport::new(field, SearchConfig::unpruned(Mode::Shkredov));
    let mut found = walk.found;
    found.sort();
    report.n_q = Some(found.len() as u64);
    report.certificates = found
        .into_iter()
        .map(|a| DecompositionCertificate::new(field, a.clone(), a))
        .collect();
    report.nodes_explored = walk.nodes;
    report
        .pruned_by
        .insert("coverage".into(), walk.coverage_pruned);
    report.wall_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}
