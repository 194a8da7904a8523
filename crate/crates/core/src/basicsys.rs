//! Basic systems: atomic assertion rules `+a <- b, c.` and negative axioms
//! `-b.`, with acyclicity checking, forward chaining and atom heights.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::syntax::Atom;

/// `+conclusion <- premises`; an empty premise list is a premise-free rule.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasicRule {
    pub premises: Vec<Atom>,
    pub conclusion: Atom,
}

/// A finite acyclic set of positive atomic rules plus negative atomic axioms.
///
/// Rule references inside derivations (`basic:i`) index `rules` first and then
/// continue into `negative_axioms`, so `basic:(rules.len() + j)` is the axiom
/// `-negative_axioms[j]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BasicSystem {
    rules: Vec<BasicRule>,
    negative_axioms: Vec<Atom>,
}

/// What `basic:i` refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasicRef<'a> {
    Rule(&'a BasicRule),
    Axiom(&'a Atom),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BasicSystemError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("dependency cycle: {}", display_cycle(.0))]
    Cycle(Vec<Atom>),
}

fn display_cycle(atoms: &[Atom]) -> String {
    atoms.iter().map(Atom::as_str).collect::<Vec<_>>().join(" <~ ")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeightError {
    #[error("atom {0} does not occur in the basic system")]
    UnknownAtom(Atom),
    #[error("height of {0} is undefined: +{0} is underivable and -{0} is not an axiom")]
    Undefined(Atom),
}

/// How the successor clause of the height definition aggregates premises.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HeightMode {
    /// `1 + min over rules (max over premises)`: the well-founded rank.
    #[default]
    Rank,
    /// `1 + min over rules (min over premises)`.
    MinPremise,
}

impl BasicSystem {
    pub fn empty() -> BasicSystem {
        BasicSystem::default()
    }

    /// Builds a system, rejecting dependency cycles.
    pub fn new(rules: Vec<BasicRule>, negative_axioms: Vec<Atom>) -> Result<BasicSystem, BasicSystemError> {
        let mut axioms: Vec<Atom> = Vec::new();
        for a in negative_axioms {
            if !axioms.contains(&a) {
                axioms.push(a);
            }
        }
        let system = BasicSystem {
            rules,
            negative_axioms: axioms,
        };
        if let Some(cycle) = system.find_cycle() {
            return Err(BasicSystemError::Cycle(cycle));
        }
        Ok(system)
    }

    pub fn rules(&self) -> &[BasicRule] {
        &self.rules
    }

    pub fn negative_axioms(&self) -> &[Atom] {
        &self.negative_axioms
    }

    /// Number of `basic:i` references (rules plus axioms).
    pub fn len(&self) -> usize {
        self.rules.len() + self.negative_axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, index: usize) -> Option<BasicRef<'_>> {
        if index < self.rules.len() {
            Some(BasicRef::Rule(&self.rules[index]))
        } else {
            self.negative_axioms.get(index - self.rules.len()).map(BasicRef::Axiom)
        }
    }

    /// Every atom mentioned anywhere, sorted.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        for r in &self.rules {
            out.insert(r.conclusion.clone());
            out.extend(r.premises.iter().cloned());
        }
        out.extend(self.negative_axioms.iter().cloned());
        out
    }

    pub fn mentions(&self, a: &Atom) -> bool {
        self.negative_axioms.contains(a) || self.rules.iter().any(|r| &r.conclusion == a || r.premises.contains(a))
    }

    pub fn is_axiom(&self, a: &Atom) -> bool {
        self.negative_axioms.contains(a)
    }

    /// Atoms whose assertion is reachable by forward chaining.
    pub fn derivable_atoms(&self) -> BTreeSet<Atom> {
        let mut known: BTreeSet<Atom> = BTreeSet::new();
        loop {
            let before = known.len();
            for r in &self.rules {
                if r.premises.iter().all(|p| known.contains(p)) {
                    known.insert(r.conclusion.clone());
                }
            }
            if known.len() == before {
                return known;
            }
        }
    }

    fn find_cycle(&self) -> Option<Vec<Atom>> {
        // conclusion depends on premise
        let mut edges: BTreeMap<&Atom, Vec<&Atom>> = BTreeMap::new();
        for r in &self.rules {
            edges.entry(&r.conclusion).or_default().extend(r.premises.iter());
        }
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Active,
            Done,
        }
        fn visit<'a>(
            a: &'a Atom,
            edges: &BTreeMap<&'a Atom, Vec<&'a Atom>>,
            marks: &mut HashMap<&'a Atom, Mark>,
            stack: &mut Vec<&'a Atom>,
        ) -> Option<Vec<Atom>> {
            match marks.get(a) {
                Some(Mark::Done) => return None,
                Some(Mark::Active) => {
                    let start = stack.iter().position(|x| *x == a).unwrap_or(0);
                    let mut cycle: Vec<Atom> = stack[start..].iter().map(|x| (*x).clone()).collect();
                    cycle.push(a.clone());
                    return Some(cycle);
                }
                None => {}
            }
            marks.insert(a, Mark::Active);
            stack.push(a);
            for next in edges.get(a).map(Vec::as_slice).unwrap_or(&[]) {
                if let Some(c) = visit(next, edges, marks, stack) {
                    return Some(c);
                }
            }
            stack.pop();
            marks.insert(a, Mark::Done);
            None
        }
        let mut marks = HashMap::new();
        for a in edges.keys() {
            let mut stack = Vec::new();
            if let Some(c) = visit(a, &edges, &mut marks, &mut stack) {
                return Some(c);
            }
        }
        None
    }

    /// Renders the canonical text form: rules in order, then axioms.
    pub fn save(&self) -> String {
        let mut out = String::new();
        for r in &self.rules {
            out.push('+');
            out.push_str(r.conclusion.as_str());
            if !r.premises.is_empty() {
                out.push_str(" <- ");
                let names: Vec<&str> = r.premises.iter().map(Atom::as_str).collect();
                out.push_str(&names.join(", "));
            }
            out.push_str(".\n");
        }
        for a in &self.negative_axioms {
            out.push('-');
            out.push_str(a.as_str());
            out.push_str(".\n");
        }
        out
    }
}

impl fmt::Display for BasicSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.save())
    }
}

/// Parses the line-oriented basic-system format.
///
/// Entries end with `.`; several may share a line. `#` starts a comment that
/// runs to the end of the line.
pub fn load_basic_system(text: &str) -> Result<BasicSystem, BasicSystemError> {
    let mut rules = Vec::new();
    let mut axioms = Vec::new();
    let mut pending = String::new();
    let mut pending_line = 1;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        for ch in line.chars() {
            if ch == '.' {
                parse_entry(pending.trim(), pending_line, &mut rules, &mut axioms)?;
                pending.clear();
            } else {
                if pending.trim().is_empty() {
                    pending_line = line_no;
                }
                pending.push(ch);
            }
        }
        pending.push(' ');
    }
    if !pending.trim().is_empty() {
        return Err(BasicSystemError::Parse {
            line: pending_line,
            message: format!("entry {:?} is missing its terminating '.'", pending.trim()),
        });
    }
    BasicSystem::new(rules, axioms)
}

fn parse_atom(text: &str, line: usize) -> Result<Atom, BasicSystemError> {
    let name = text.trim();
    Atom::new(name).ok_or_else(|| BasicSystemError::Parse {
        line,
        message: format!("expected an atom name, found {name:?}"),
    })
}

fn parse_entry(
    entry: &str,
    line: usize,
    rules: &mut Vec<BasicRule>,
    axioms: &mut Vec<Atom>,
) -> Result<(), BasicSystemError> {
    if let Some(rest) = entry.strip_prefix('-') {
        axioms.push(parse_atom(rest, line)?);
        return Ok(());
    }
    let Some(rest) = entry.strip_prefix('+') else {
        return Err(BasicSystemError::Parse {
            line,
            message: format!("entry {entry:?} must start with '+' or '-'"),
        });
    };
    let (head, body) = match rest.split_once("<-") {
        Some((h, b)) => (h, Some(b)),
        None => (rest, None),
    };
    let conclusion = parse_atom(head, line)?;
    let premises = match body {
        None => Vec::new(),
        Some(b) => b
            .split(',')
            .map(|p| {
                let p = p.trim().strip_prefix('+').unwrap_or(p.trim());
                parse_atom(p, line)
            })
            .collect::<Result<Vec<_>, _>>()?,
    };
    rules.push(BasicRule { premises, conclusion });
    Ok(())
}

/// True iff `+a` is in the forward-chaining closure of the positive rules.
pub fn derivable_plus(b: &BasicSystem, a: &Atom) -> bool {
    b.derivable_atoms().contains(a)
}

/// True iff no atom is both derivable and negatively axiomatized.
pub fn is_consistent(b: &BasicSystem) -> bool {
    let derivable = b.derivable_atoms();
    !b.negative_axioms.iter().any(|a| derivable.contains(a))
}

/// Height of an atom under the default rank reading.
pub fn height(b: &BasicSystem, a: &Atom) -> Result<usize, HeightError> {
    Heights::compute(b, HeightMode::Rank).get(a)
}

pub fn height_with(b: &BasicSystem, a: &Atom, mode: HeightMode) -> Result<usize, HeightError> {
    Heights::compute(b, mode).get(a)
}

/// Memoized heights for every atom of a system.
///
/// `h(a) = 0` when `a` has a premise-free rule or `-a` is an axiom; otherwise
/// `h(a) = 1 + min` over rules concluding `a` whose premises all have a height,
/// of the premises' max (or min, under [`HeightMode::MinPremise`]).
#[derive(Clone, Debug)]
pub struct Heights {
    table: BTreeMap<Atom, Option<usize>>,
}

impl Heights {
    pub fn compute(b: &BasicSystem, mode: HeightMode) -> Heights {
        let mut table: BTreeMap<Atom, Option<usize>> = BTreeMap::new();
        let mut visiting = BTreeSet::new();
        for a in b.atoms() {
            Self::eval(b, &a, mode, &mut table, &mut visiting);
        }
        Heights { table }
    }

    fn eval(
        b: &BasicSystem,
        a: &Atom,
        mode: HeightMode,
        table: &mut BTreeMap<Atom, Option<usize>>,
        visiting: &mut BTreeSet<Atom>,
    ) -> Option<usize> {
        if let Some(h) = table.get(a) {
            return *h;
        }
        let base = b.is_axiom(a) || b.rules.iter().any(|r| &r.conclusion == a && r.premises.is_empty());
        if base {
            table.insert(a.clone(), Some(0));
            return Some(0);
        }
        // acyclic systems never revisit, kept for safety on hand-built values
        if !visiting.insert(a.clone()) {
            return None;
        }
        let mut best: Option<usize> = None;
        for r in b.rules.iter().filter(|r| &r.conclusion == a) {
            let hs: Option<Vec<usize>> = r
                .premises
                .iter()
                .map(|p| Self::eval(b, p, mode, table, visiting))
                .collect();
            let Some(hs) = hs else { continue };
            let agg = match mode {
                HeightMode::Rank => hs.iter().copied().max().unwrap_or(0),
                HeightMode::MinPremise => hs.iter().copied().min().unwrap_or(0),
            };
            best = Some(best.map_or(agg + 1, |cur: usize| cur.min(agg + 1)));
        }
        visiting.remove(a);
        table.insert(a.clone(), best);
        best
    }

    pub fn get(&self, a: &Atom) -> Result<usize, HeightError> {
        match self.table.get(a) {
            None => Err(HeightError::UnknownAtom(a.clone())),
            Some(None) => Err(HeightError::Undefined(a.clone())),
            Some(Some(h)) => Ok(*h),
        }
    }
}

/// Checks that every name in `names` is an identifier; used by front ends that
/// take atom lists on the command line.
pub fn parse_atom_list(names: &str) -> Option<Vec<Atom>> {
    names
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(Atom::new)
        .collect()
}

/// A random acyclic system over atoms `a0 .. a{n-1}` with `1 <= n <= max_atoms`
/// and at most `max_rules` rules of up to two premises each. Rules only point
/// from an atom to atoms of larger index, so the result is acyclic. With
/// `consistent`, negative axioms on derivable atoms are dropped.
pub fn random_system(rng: &mut impl rand::Rng, max_atoms: usize, max_rules: usize, consistent: bool) -> BasicSystem {
    let n = rng.gen_range(1..=max_atoms.max(1));
    let atom = |i: usize| Atom::new(&format!("a{i}")).expect("identifier");
    let mut rules: Vec<BasicRule> = Vec::new();
    for _ in 0..rng.gen_range(1..=max_rules.max(1)) {
        let c = rng.gen_range(0..n);
        let k = if c + 1 < n && rng.gen_bool(0.75) {
            rng.gen_range(1..=2)
        } else {
            0
        };
        let mut premises: Vec<Atom> = (0..k).map(|_| atom(rng.gen_range(c + 1..n))).collect();
        premises.sort();
        premises.dedup();
        let rule = BasicRule {
            premises,
            conclusion: atom(c),
        };
        if !rules.contains(&rule) {
            rules.push(rule);
        }
    }
    let axioms: Vec<Atom> = (0..n).filter(|_| rng.gen_bool(0.25)).map(atom).collect();
    let mut b = BasicSystem::new(rules, axioms).expect("acyclic by construction");
    if consistent {
        let derivable = b.derivable_atoms();
        b.negative_axioms.retain(|a| !derivable.contains(a));
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(s: &str) -> Atom {
        Atom::new(s).unwrap()
    }

    #[test]
    fn loads_rules_and_axioms() {
        let b = load_basic_system("+b. +a <- b.").unwrap();
        assert_eq!(b.rules().len(), 2);
        assert!(b.rules()[0].premises.is_empty());
        assert_eq!(b.rules()[1].premises, vec![atom("b")]);
        assert!(b.negative_axioms().is_empty());

        let b = load_basic_system("-c. +a <- b, c.").unwrap();
        assert_eq!(b.negative_axioms(), &[atom("c")]);
        assert_eq!(b.rules()[0].premises, vec![atom("b"), atom("c")]);
    }

    #[test]
    fn rejects_cycles() {
        let err = load_basic_system("+a <- b. +b <- a.").unwrap_err();
        match err {
            BasicSystemError::Cycle(c) => {
                assert_eq!(c.first(), c.last());
                assert!(c.contains(&atom("a")) && c.contains(&atom("b")));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(load_basic_system("+a <- a."), Err(BasicSystemError::Cycle(_))));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            load_basic_system("+a <- b"),
            Err(BasicSystemError::Parse { .. })
        ));
        assert!(matches!(
            load_basic_system("a."),
            Err(BasicSystemError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            load_basic_system("# ok\n+A."),
            Err(BasicSystemError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn comments_and_save_round_trip() {
        let text = "# facts\n+b.   # base\n+a <- b, c.\n-c.\n";
        let b = load_basic_system(text).unwrap();
        let saved = b.save();
        assert_eq!(saved, "+b.\n+a <- b, c.\n-c.\n");
        assert_eq!(load_basic_system(&saved).unwrap(), b);
        assert_eq!(load_basic_system(&saved).unwrap().save(), saved);
    }

    #[test]
    fn derivability() {
        let b = load_basic_system("+b. +a <- b.").unwrap();
        assert!(derivable_plus(&b, &atom("a")));
        assert!(!derivable_plus(&BasicSystem::empty(), &atom("p")));
        let b = load_basic_system("+a <- c.").unwrap();
        assert!(!derivable_plus(&b, &atom("a")));
    }

    #[test]
    fn consistency() {
        assert!(!is_consistent(&load_basic_system("+a. -a.").unwrap()));
        assert!(is_consistent(&load_basic_system("+a. -b.").unwrap()));
        assert!(is_consistent(&load_basic_system("+a <- b. -a.").unwrap()));
    }

    #[test]
    fn heights() {
        let b = load_basic_system("+b. +a <- b.").unwrap();
        assert_eq!(height(&b, &atom("b")), Ok(0));
        assert_eq!(height(&b, &atom("a")), Ok(1));

        let b = load_basic_system("-c.").unwrap();
        assert_eq!(height(&b, &atom("c")), Ok(0));

        let b = load_basic_system("+a <- b, c. +b. +c <- b.").unwrap();
        assert_eq!(height(&b, &atom("c")), Ok(1));
        assert_eq!(height(&b, &atom("a")), Ok(2));
        assert_eq!(height_with(&b, &atom("a"), HeightMode::MinPremise), Ok(1));

        assert_eq!(height(&b, &atom("zz")), Err(HeightError::UnknownAtom(atom("zz"))));
        let b = load_basic_system("+a <- c.").unwrap();
        assert_eq!(height(&b, &atom("a")), Err(HeightError::Undefined(atom("a"))));
    }

    #[test]
    fn basic_refs_index_rules_then_axioms() {
        let b = load_basic_system("+a. -c. +d <- a.").unwrap();
        assert_eq!(b.len(), 3);
        assert!(matches!(b.get(1), Some(BasicRef::Rule(r)) if r.conclusion == atom("d")));
        assert!(matches!(b.get(2), Some(BasicRef::Axiom(a)) if *a == atom("c")));
        assert!(b.get(3).is_none());
    }
}
