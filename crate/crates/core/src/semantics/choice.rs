//! Choice functions, intensional choice operators, and the lazy
//! quantification over all of them.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::syntax::{EpsilonType, Term};

use super::model::join;
use super::SemanticsError;

/// Members of a subset bitmask, or the whole domain for the empty set
/// (the value chosen for the empty set is unconstrained).
pub fn candidates(subset: u32, k: usize) -> Vec<usize> {
    if subset == 0 {
        (0..k).collect()
    } else {
        (0..k).filter(|i| subset & (1 << i) != 0).collect()
    }
}

fn subset_string(subset: u32, k: usize) -> String {
    format!(
        "{{{}}}",
        join((0..k).filter(|i| subset & (1 << i) != 0).map(|i| i.to_string()))
    )
}

/// A total map from subsets of the domain to elements, with `phi(X) ∈ X`
/// for nonempty `X`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtChoiceFunction {
    pub size: usize,
    /// Indexed by subset bitmask.
    pub table: Vec<usize>,
}

impl ExtChoiceFunction {
    pub fn new(size: usize, table: Vec<usize>) -> Result<Self, SemanticsError> {
        if table.len() != 1 << size {
            return Err(SemanticsError::Bound("choice table must cover every subset".into()));
        }
        for (x, &v) in table.iter().enumerate() {
            if !candidates(x as u32, size).contains(&v) {
                return Err(SemanticsError::Bound(format!(
                    "choice {v} for {} is not a member",
                    subset_string(x as u32, size)
                )));
            }
        }
        Ok(ExtChoiceFunction { size, table })
    }

    /// Least member of every nonempty set, 0 for the empty set.
    pub fn least(size: usize) -> Self {
        let table = (0..1u32 << size)
            .map(|x| if x == 0 { 0 } else { x.trailing_zeros() as usize })
            .collect();
        ExtChoiceFunction { size, table }
    }

    pub fn choose(&self, subset: u32) -> usize {
        self.table[subset as usize]
    }
}

impl fmt::Display for ExtChoiceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries = self
            .table
            .iter()
            .enumerate()
            .map(|(x, v)| format!("{} -> {v}", subset_string(x as u32, self.size)));
        write!(f, "{}", join(entries))
    }
}

/// Number of choice functions on a domain of size `k`: `k` choices for the
/// empty set times `|X|` for each nonempty `X`.
pub fn choice_function_count(k: usize) -> u128 {
    (0..1u32 << k)
        .map(|x| candidates(x, k).len() as u128)
        .product()
}

/// Refuse explicit enumerations larger than this.
pub const MAX_ENUMERATION: u128 = 1 << 24;

/// Every choice function on a domain of size `k`, without duplicates.
pub fn enumerate_choice_functions(k: usize) -> Result<impl Iterator<Item = ExtChoiceFunction>, SemanticsError> {
    let count = choice_function_count(k);
    if count > MAX_ENUMERATION || k > super::model::MAX_DOMAIN {
        return Err(SemanticsError::Bound(format!("{count} choice functions on size {k}")));
    }
    let options: Vec<Vec<usize>> = (0..1u32 << k).map(|x| candidates(x, k)).collect();
    Ok((0..count).map(move |mut idx| {
        let table = options
            .iter()
            .map(|opts| {
                let n = opts.len() as u128;
                let v = opts[(idx % n) as usize];
                idx /= n;
                v
            })
            .collect();
        ExtChoiceFunction { size: k, table }
    }))
}

/// A choice function per (ε-type, parameter values), with a default for
/// keys not listed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntChoiceOperator {
    pub entries: BTreeMap<(EpsilonType, Vec<usize>), ExtChoiceFunction>,
    pub default: ExtChoiceFunction,
}

impl IntChoiceOperator {
    pub fn constant(phi: ExtChoiceFunction) -> Self {
        IntChoiceOperator {
            entries: BTreeMap::new(),
            default: phi,
        }
    }

    /// Registers the choice function for a type at the given parameter
    /// values; the tuple length must equal the type's parameter count.
    pub fn insert(&mut self, ty: EpsilonType, params: Vec<usize>, phi: ExtChoiceFunction) -> Result<(), SemanticsError> {
        if params.len() != ty.arity {
            return Err(SemanticsError::Bound(format!(
                "type {} takes {} parameters, got {}",
                ty.skeleton,
                ty.arity,
                params.len()
            )));
        }
        self.entries.insert((ty, params), phi);
        Ok(())
    }

    pub fn function_for(&self, ty: &EpsilonType, params: &[usize]) -> &ExtChoiceFunction {
        self.entries
            .get(&(ty.clone(), params.to_vec()))
            .unwrap_or(&self.default)
    }
}

impl fmt::Display for IntChoiceOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((ty, params), phi) in &self.entries {
            writeln!(f, "{} [{}]: {phi}", ty.skeleton, join(params.iter().map(|p| p.to_string())))?;
        }
        write!(f, "default: {}", self.default)
    }
}

/// All operators over the given types: one choice function per (type,
/// parameter tuple) key plus one for the default.
pub fn enumerate_intensional_operators(
    k: usize,
    types: &[EpsilonType],
) -> Result<impl Iterator<Item = IntChoiceOperator>, SemanticsError> {
    let mut keys = Vec::new();
    for ty in types {
        let tuples = k.checked_pow(ty.arity as u32).unwrap_or(usize::MAX);
        if tuples > 1 << 16 {
            return Err(SemanticsError::Bound(format!("too many parameter tuples for {}", ty.skeleton)));
        }
        for i in 0..tuples {
            keys.push((ty.clone(), super::model::tuple_at(i, ty.arity, k)));
        }
    }
    let per_key = choice_function_count(k);
    let slots = keys.len() as u32 + 1;
    let total = per_key
        .checked_pow(slots)
        .filter(|&t| t <= MAX_ENUMERATION)
        .ok_or_else(|| SemanticsError::Bound(format!("operator enumeration over {slots} keys is too large")))?;
    let functions: Vec<ExtChoiceFunction> = enumerate_choice_functions(k)?.collect();
    Ok((0..total).map(move |mut idx| {
        let mut pick = || {
            let phi = functions[(idx % per_key) as usize].clone();
            idx /= per_key;
            phi
        };
        let default = pick();
        let entries = keys.iter().map(|key| (key.clone(), pick())).collect();
        IntChoiceOperator { entries, default }
    }))
}

/// A request for the value chosen from `subset`. In extensional mode
/// `ty` and `params` are unused and left empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChoiceKey {
    pub ty: Option<usize>,
    pub params: Vec<usize>,
    pub subset: u32,
}

/// Source of choices during evaluation. `Err` asks the caller to branch on
/// the returned key.
pub trait Chooser {
    fn choose(&mut self, types: &[EpsilonType], key: &ChoiceKey) -> Result<usize, ChoiceKey>;
}

impl Chooser for &ExtChoiceFunction {
    fn choose(&mut self, _: &[EpsilonType], key: &ChoiceKey) -> Result<usize, ChoiceKey> {
        Ok(ExtChoiceFunction::choose(self, key.subset))
    }
}

impl Chooser for &IntChoiceOperator {
    fn choose(&mut self, types: &[EpsilonType], key: &ChoiceKey) -> Result<usize, ChoiceKey> {
        let phi = match key.ty {
            Some(t) => self.function_for(&types[t], &key.params),
            None => &self.default,
        };
        Ok(phi.choose(key.subset))
    }
}

/// The finitely many choices fixed so far in a lazy enumeration.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartialChoice {
    pub fixed: HashMap<ChoiceKey, usize>,
}

impl Chooser for &mut PartialChoice {
    fn choose(&mut self, _: &[EpsilonType], key: &ChoiceKey) -> Result<usize, ChoiceKey> {
        self.fixed.get(key).copied().ok_or_else(|| key.clone())
    }
}

/// A choice function or operator restricted to the keys that mattered,
/// rendered for countermodel reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChoiceWitness {
    pub size: usize,
    /// `(type, parameters, subset, chosen)`; type `None` in extensional mode.
    pub entries: Vec<(Option<Term>, Vec<usize>, u32, usize)>,
}

impl ChoiceWitness {
    pub fn from_partial(p: &PartialChoice, types: &[EpsilonType], size: usize) -> Self {
        let mut entries: Vec<_> = p
            .fixed
            .iter()
            .map(|(k, v)| (k.ty.map(|t| types[t].skeleton.clone()), k.params.clone(), k.subset, *v))
            .collect();
        entries.sort();
        ChoiceWitness { size, entries }
    }
}

impl fmt::Display for ChoiceWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (ty, params, subset, v) in &self.entries {
            match ty {
                Some(t) => writeln!(
                    f,
                    "{t} [{}]: {} -> {v}",
                    join(params.iter().map(|p| p.to_string())),
                    subset_string(*subset, self.size)
                )?,
                None => writeln!(f, "{} -> {v}", subset_string(*subset, self.size))?,
            }
        }
        write!(f, "otherwise: least member (0 for the empty set)")
    }
}

/// Decides `test` for every total choice function (or operator) by
/// branching on each key the test asks for. Returns the choices of a
/// failing branch, or `None` if the test holds for all.
pub fn for_all_choices(
    k: usize,
    test: &mut dyn FnMut(&mut PartialChoice) -> Result<bool, ChoiceKey>,
) -> Option<PartialChoice> {
    let mut partial = PartialChoice::default();
    if branch(k, &mut partial, test) {
        None
    } else {
        Some(partial)
    }
}

fn branch(k: usize, partial: &mut PartialChoice, test: &mut dyn FnMut(&mut PartialChoice) -> Result<bool, ChoiceKey>) -> bool {
    match test(partial) {
        Ok(v) => v,
        Err(key) => {
            for c in candidates(key.subset, k) {
                partial.fixed.insert(key.clone(), c);
                if !branch(k, partial, test) {
                    return false;
                }
            }
            partial.fixed.remove(&key);
            true
        }
    }
}

/// Whether `test` holds for some choice function, with the witnessing
/// choices.
pub fn exists_choice(
    k: usize,
    test: &mut dyn FnMut(&mut PartialChoice) -> Result<bool, ChoiceKey>,
) -> Option<PartialChoice> {
    for_all_choices(k, &mut |p| test(p).map(|b| !b))
}
