//! Truth-table tautology checking. Atomic formulas, equations and
//! quantified formulas are propositional atoms, identified up to ≡.

use std::collections::BTreeMap;

use crate::syntax::Formula;

pub const DEFAULT_MAX_ATOMS: usize = 20;

/// The atom bound in effect: `EPSKIT_MAX_ATOMS` if set to a number,
/// otherwise [`DEFAULT_MAX_ATOMS`].
pub fn max_atoms() -> usize {
    std::env::var("EPSKIT_MAX_ATOMS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_ATOMS)
}

/// Whether `a` is a tautology. `Err(n)` when it has `n` atoms, more than
/// [`max_atoms`] allows.
pub fn is_tautology(a: &Formula) -> Result<bool, usize> {
    is_tautology_with_bound(a, max_atoms())
}

pub fn is_tautology_with_bound(a: &Formula, bound: usize) -> Result<bool, usize> {
    let mut atoms = BTreeMap::new();
    collect_atoms(a, &mut atoms);
    let n = atoms.len();
    if n > bound || n > 40 {
        return Err(n);
    }
    // Assignments are processed 64 at a time: atom i < 6 varies within a
    // word, higher atoms are fixed per word.
    const LOW: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    let valid_mask = if n >= 6 { u64::MAX } else { (1u64 << (1u32 << n)) - 1 };
    let words: u64 = if n > 6 { 1 << (n - 6) } else { 1 };
    let mut values = vec![0u64; n];
    for w in 0..words {
        for (i, v) in values.iter_mut().enumerate() {
            *v = if i < 6 {
                LOW[i]
            } else if (w >> (i - 6)) & 1 == 1 {
                u64::MAX
            } else {
                0
            };
        }
        if eval(a, &atoms, &values) & valid_mask != valid_mask {
            return Ok(false);
        }
    }
    Ok(true)
}

fn collect_atoms<'a>(f: &'a Formula, atoms: &mut BTreeMap<&'a Formula, usize>) {
    match f {
        Formula::Top | Formula::Bottom => {}
        Formula::Not(a) => collect_atoms(a, atoms),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            collect_atoms(a, atoms);
            collect_atoms(b, atoms);
        }
        _ => {
            let n = atoms.len();
            atoms.entry(f).or_insert(n);
        }
    }
}

fn eval(f: &Formula, atoms: &BTreeMap<&Formula, usize>, values: &[u64]) -> u64 {
    match f {
        Formula::Top => u64::MAX,
        Formula::Bottom => 0,
        Formula::Not(a) => !eval(a, atoms, values),
        Formula::And(a, b) => eval(a, atoms, values) & eval(b, atoms, values),
        Formula::Or(a, b) => eval(a, atoms, values) | eval(b, atoms, values),
        Formula::Implies(a, b) => !eval(a, atoms, values) | eval(b, atoms, values),
        Formula::Iff(a, b) => !(eval(a, atoms, values) ^ eval(b, atoms, values)),
        _ => values[atoms[f]],
    }
}
