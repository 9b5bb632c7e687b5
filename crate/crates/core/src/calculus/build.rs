//! Incremental construction of proofs.

use std::collections::HashMap;

use crate::syntax::Formula;

use super::{Justification, Proof, ProofLine, SystemId};

/// Appends lines to a proof, reusing an earlier line whenever the same
/// formula has already been derived.
#[derive(Clone, Debug)]
pub struct ProofBuilder {
    proof: Proof,
    index: HashMap<Formula, usize>,
}

impl ProofBuilder {
    pub fn new(system: SystemId, hyps: Vec<Formula>) -> Self {
        ProofBuilder {
            proof: Proof::new(system, hyps),
            index: HashMap::new(),
        }
    }

    pub fn system(&self) -> SystemId {
        self.proof.system
    }

    pub fn formula(&self, i: usize) -> &Formula {
        &self.proof.lines[i].formula
    }

    pub fn len(&self) -> usize {
        self.proof.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.proof.lines.is_empty()
    }

    /// Adds `f` unless it is already a line; returns its index.
    pub fn line(&mut self, f: Formula, just: Justification) -> usize {
        if let Some(&i) = self.index.get(&f) {
            return i;
        }
        self.force(f, just)
    }

    /// Adds `f` even if it is already a line.
    pub fn force(&mut self, f: Formula, just: Justification) -> usize {
        let i = self.proof.push(f.clone(), just);
        self.index.entry(f).or_insert(i);
        i
    }

    pub fn taut(&mut self, f: Formula) -> usize {
        self.line(f, Justification::Taut)
    }

    pub fn hyp(&mut self, f: Formula) -> usize {
        self.line(f, Justification::Hyp)
    }

    /// Modus ponens on two lines, in either order.
    ///
    /// Panics if neither line is an implication whose antecedent is the
    /// other line.
    pub fn mp(&mut self, i: usize, j: usize) -> usize {
        let (a, b) = (self.formula(i), self.formula(j));
        let concl = match (a, b) {
            (Formula::Implies(x, y), _) if **x == *b => (**y).clone(),
            (_, Formula::Implies(x, y)) if **x == *a => (**y).clone(),
            _ => panic!("modus ponens on unrelated lines {i} and {j}"),
        };
        self.line(concl, Justification::MP(i, j))
    }

    /// Derives `target` from the given lines with one tautology
    /// `p1 → (p2 → ... → target)` and modus ponens. The caller guarantees
    /// that this is a tautology.
    pub fn combine(&mut self, premises: &[usize], target: Formula) -> usize {
        if let Some(&i) = self.index.get(&target) {
            return i;
        }
        let forms: Vec<Formula> = premises.iter().map(|&i| self.formula(i).clone()).collect();
        let mut cur = self.taut(Formula::implies_chain(forms, target));
        for &p in premises {
            cur = self.mp(cur, p);
        }
        cur
    }

    /// Copies the lines of `other` (whose hypotheses must be available
    /// here) and returns the new index of each of its lines.
    pub fn append(&mut self, other: &Proof) -> Vec<usize> {
        let mut map: Vec<usize> = Vec::with_capacity(other.lines.len());
        for l in &other.lines {
            let just = l.just.remap(|i| map[i]);
            let i = match just {
                Justification::RExists(_) | Justification::RForall(_) => self.force(l.formula.clone(), just),
                _ => self.line(l.formula.clone(), just),
            };
            map.push(i);
        }
        map
    }

    /// Ensures the last line is `f`, repeating it if it was derived
    /// earlier.
    pub fn conclude(&mut self, f: &Formula) {
        if self.proof.conclusion() == Some(f) {
            return;
        }
        let i = self.index[f];
        let t = self.force(Formula::implies(f.clone(), f.clone()), Justification::Taut);
        let concl = f.clone();
        self.proof.lines.push(ProofLine {
            formula: concl,
            just: Justification::MP(t, i),
        });
    }

    pub fn finish(self) -> Proof {
        self.proof
    }
}
