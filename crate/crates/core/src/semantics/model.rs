//! Finite structures and their exhaustive enumeration.

use std::fmt;
use std::sync::Arc;

use crate::syntax::{Name, Signature};

use super::SemanticsError;

/// Largest domain size supported anywhere (subsets are `u32` bitmasks).
pub const MAX_DOMAIN: usize = 5;

/// Function and predicate symbols in a fixed order, so that tables can be
/// indexed by position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolTable {
    pub functions: Vec<(Name, usize)>,
    pub predicates: Vec<(Name, usize)>,
}

impl SymbolTable {
    pub fn new(sig: &Signature) -> Self {
        SymbolTable {
            functions: sig.functions.iter().map(|(n, a)| (n.clone(), *a)).collect(),
            predicates: sig.predicates.iter().map(|(n, a)| (n.clone(), *a)).collect(),
        }
    }

    pub fn function_id(&self, name: &str) -> Option<usize> {
        self.functions.iter().position(|(n, _)| &**n == name)
    }

    pub fn predicate_id(&self, name: &str) -> Option<usize> {
        self.predicates.iter().position(|(n, _)| &**n == name)
    }
}

/// A finite structure with domain `0..size`. `=` is identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    pub size: usize,
    pub symbols: Arc<SymbolTable>,
    /// Per function, values indexed by the argument tuple in base `size`.
    pub functions: Vec<Vec<usize>>,
    /// Per predicate, membership indexed by the argument tuple in base `size`.
    pub predicates: Vec<Vec<bool>>,
}

pub(crate) fn tuple_index(args: &[usize], k: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * k + a)
}

pub(crate) fn tuple_at(mut idx: usize, n: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = idx % k;
        idx /= k;
    }
    out
}

impl Structure {
    /// Structure over `sig` with every function constantly 0 and every
    /// predicate empty.
    pub fn new(sig: &Signature, size: usize) -> Result<Self, SemanticsError> {
        Self::with_symbols(Arc::new(SymbolTable::new(sig)), size)
    }

    pub fn with_symbols(symbols: Arc<SymbolTable>, size: usize) -> Result<Self, SemanticsError> {
        if size == 0 || size > MAX_DOMAIN {
            return Err(SemanticsError::Bound(format!(
                "domain size {size} outside 1..={MAX_DOMAIN}"
            )));
        }
        let functions = symbols.functions.iter().map(|(_, a)| vec![0; size.pow(*a as u32)]).collect();
        let predicates = symbols.predicates.iter().map(|(_, a)| vec![false; size.pow(*a as u32)]).collect();
        Ok(Structure {
            size,
            symbols,
            functions,
            predicates,
        })
    }

    pub fn set_function(&mut self, name: &str, args: &[usize], value: usize) -> Result<(), SemanticsError> {
        let id = self
            .symbols
            .function_id(name)
            .ok_or_else(|| SemanticsError::UnknownSymbol(name.to_string()))?;
        self.check_tuple(self.symbols.functions[id].1, args)?;
        self.check_element(value)?;
        let idx = tuple_index(args, self.size);
        self.functions[id][idx] = value;
        Ok(())
    }

    /// Sets the extension of a predicate to exactly `tuples`.
    pub fn set_predicate(&mut self, name: &str, tuples: &[&[usize]]) -> Result<(), SemanticsError> {
        let id = self
            .symbols
            .predicate_id(name)
            .ok_or_else(|| SemanticsError::UnknownSymbol(name.to_string()))?;
        let arity = self.symbols.predicates[id].1;
        let mut table = vec![false; self.size.pow(arity as u32)];
        for t in tuples {
            self.check_tuple(arity, t)?;
            table[tuple_index(t, self.size)] = true;
        }
        self.predicates[id] = table;
        Ok(())
    }

    fn check_tuple(&self, arity: usize, args: &[usize]) -> Result<(), SemanticsError> {
        if args.len() != arity {
            return Err(SemanticsError::Bound(format!(
                "tuple of length {} for a symbol of arity {arity}",
                args.len()
            )));
        }
        args.iter().try_for_each(|&a| self.check_element(a))
    }

    fn check_element(&self, a: usize) -> Result<(), SemanticsError> {
        if a >= self.size {
            return Err(SemanticsError::Bound(format!("element {a} outside the domain")));
        }
        Ok(())
    }

    pub fn function_value(&self, id: usize, args: &[usize]) -> usize {
        self.functions[id][tuple_index(args, self.size)]
    }

    pub fn holds(&self, id: usize, args: &[usize]) -> bool {
        self.predicates[id][tuple_index(args, self.size)]
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain: {{{}}}", join((0..self.size).map(|i| i.to_string())))?;
        for (id, (name, arity)) in self.symbols.functions.iter().enumerate() {
            if *arity == 0 {
                writeln!(f, "{name} = {}", self.functions[id][0])?;
                continue;
            }
            let entries = (0..self.functions[id].len()).map(|i| {
                let args = tuple_at(i, *arity, self.size);
                format!("{name}({}) = {}", join(args.iter().map(|a| a.to_string())), self.functions[id][i])
            });
            writeln!(f, "{}", join(entries))?;
        }
        for (id, (name, arity)) in self.symbols.predicates.iter().enumerate() {
            let members = (0..self.predicates[id].len())
                .filter(|&i| self.predicates[id][i])
                .map(|i| {
                    let t = tuple_at(i, *arity, self.size);
                    if *arity == 1 {
                        t[0].to_string()
                    } else {
                        format!("({})", join(t.iter().map(|a| a.to_string())))
                    }
                });
            if *arity == 0 {
                writeln!(f, "{name} = {}", self.predicates[id][0])?;
            } else {
                writeln!(f, "{name} = {{{}}}", join(members))?;
            }
        }
        Ok(())
    }
}

pub(crate) fn join<I: Iterator<Item = String>>(items: I) -> String {
    items.collect::<Vec<_>>().join(", ")
}

/// Exhaustive enumeration of the structures of one size over a signature.
/// Structures are addressed by index so that ranges can be split across
/// workers.
#[derive(Clone, Debug)]
pub struct StructureSpace {
    pub symbols: Arc<SymbolTable>,
    pub size: usize,
    radices: Vec<u128>,
    count: u128,
}

/// Refuse enumerations larger than this.
pub const MAX_STRUCTURES: u128 = 1 << 32;

impl StructureSpace {
    pub fn new(sig: &Signature, size: usize) -> Result<Self, SemanticsError> {
        Self::with_symbols(Arc::new(SymbolTable::new(sig)), size)
    }

    pub fn with_symbols(symbols: Arc<SymbolTable>, size: usize) -> Result<Self, SemanticsError> {
        if size == 0 || size > MAX_DOMAIN {
            return Err(SemanticsError::Bound(format!(
                "domain size {size} outside 1..={MAX_DOMAIN}"
            )));
        }
        let mut radices = Vec::new();
        let mut count: u128 = 1;
        let too_big = || SemanticsError::Bound(format!("too many structures of size {size}"));
        for (_, a) in &symbols.functions {
            let cells = size.checked_pow(*a as u32).ok_or_else(too_big)?;
            for _ in 0..cells {
                radices.push(size as u128);
                count = count.checked_mul(size as u128).ok_or_else(too_big)?;
            }
        }
        for (_, a) in &symbols.predicates {
            let cells = size.checked_pow(*a as u32).ok_or_else(too_big)?;
            for _ in 0..cells {
                radices.push(2);
                count = count.checked_mul(2).ok_or_else(too_big)?;
            }
        }
        if count > MAX_STRUCTURES {
            return Err(too_big());
        }
        Ok(StructureSpace {
            symbols,
            size,
            radices,
            count,
        })
    }

    pub fn count(&self) -> u128 {
        self.count
    }

    pub fn get(&self, mut index: u128) -> Structure {
        let mut m = Structure::with_symbols(self.symbols.clone(), self.size).expect("validated size");
        let mut digits = self.radices.iter().map(|&r| {
            let d = index % r;
            index /= r;
            d as usize
        });
        for table in m.functions.iter_mut() {
            for cell in table.iter_mut() {
                *cell = digits.next().expect("digit per cell");
            }
        }
        for table in m.predicates.iter_mut() {
            for cell in table.iter_mut() {
                *cell = digits.next().expect("digit per cell") == 1;
            }
        }
        m
    }

    pub fn iter(&self) -> impl Iterator<Item = Structure> + '_ {
        (0..self.count).map(move |i| self.get(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    #[test]
    fn counts_structures() {
        let f = parse_formula("P(f(x)) & Q(a)").unwrap();
        let sig = Signature::of_formulas([&f]).unwrap();
        let space = StructureSpace::new(&sig, 2).unwrap();
        // f: 2^2, a: 2, P: 2^2, Q: 2^2
        assert_eq!(space.count(), 4 * 2 * 4 * 4);
        let all: std::collections::BTreeSet<String> = space.iter().map(|m| m.to_string()).collect();
        assert_eq!(all.len() as u128, space.count());
    }

    #[test]
    fn tuple_indexing_roundtrips() {
        for i in 0..27 {
            assert_eq!(tuple_index(&tuple_at(i, 3, 3), 3), i);
        }
    }
}
