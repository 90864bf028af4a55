//! Compilation of symbolic names to raw names over a truncated poset, and the
//! recursive forcing relation.
//!
//! The relation is computed as truth sets over atoms. In a finite poset every
//! condition lies above an atom, so "dense below p" holds of a set of
//! conditions iff it contains every atom below p, and an atom forces a
//! formula iff it forces it outright. The usual clauses then become:
//!
//! * `g ⊩ a ∈ b` iff some `(s, y) ∈ b` has `g ≤ s` and `g ⊩ a = y`;
//! * `g ⊩ a = b` iff every `(s, y) ∈ a` with `g ≤ s` has `g ⊩ y ∈ b`, and
//!   symmetrically;
//! * `g ⊩ ¬φ` iff `g ⊮ φ`, with conjunction and disjunction atomwise;
//!
//! and `p ⊩ φ` iff every atom below `p` forces `φ`.

use std::collections::HashMap;

use crate::action::Condition;
use crate::error::{Error, Result};
use crate::forcing::formula::Formula;
use crate::forcing::poset::{AtomSet, CondBits, TruncatedPoset};
use crate::hf::HfSet;
use crate::name::Name;
use crate::order::OrderPoint;

pub type NodeId = u32;

/// Owns the compiled names of one poset. Nodes are hash-consed, so equal
/// raw names share one id and all derived sets are memoized per id.
pub struct Engine<'p> {
    poset: &'p TruncatedPoset,
    nodes: Vec<Vec<(CondBits, NodeId)>>,
    interned: HashMap<Vec<(CondBits, NodeId)>, NodeId>,
    compiled: HashMap<Name, NodeId>,
    checks: HashMap<HfSet, NodeId>,
    restricted: HashMap<(NodeId, CondBits), NodeId>,
    ext: HashMap<CondBits, AtomSet>,
    elem: HashMap<(NodeId, NodeId), AtomSet>,
    eq: HashMap<(NodeId, NodeId), AtomSet>,
}

impl<'p> Engine<'p> {
    pub fn new(poset: &'p TruncatedPoset) -> Self {
        Engine {
            poset,
            nodes: Vec::new(),
            interned: HashMap::new(),
            compiled: HashMap::new(),
            checks: HashMap::new(),
            restricted: HashMap::new(),
            ext: HashMap::new(),
            elem: HashMap::new(),
            eq: HashMap::new(),
        }
    }

    pub fn poset(&self) -> &'p TruncatedPoset {
        self.poset
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn entries(&self, id: NodeId) -> &[(CondBits, NodeId)] {
        &self.nodes[id as usize]
    }

    pub fn intern(&mut self, mut entries: Vec<(CondBits, NodeId)>) -> NodeId {
        entries.sort_unstable();
        entries.dedup();
        if let Some(id) = self.interned.get(&entries) {
            return *id;
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(entries.clone());
        self.interned.insert(entries, id);
        id
    }

    pub fn compile(&mut self, name: &Name) -> Result<NodeId> {
        if let Some(id) = self.compiled.get(name) {
            return Ok(*id);
        }
        let id = self.compile_uncached(name)?;
        self.compiled.insert(name.clone(), id);
        Ok(id)
    }

    fn compile_uncached(&mut self, name: &Name) -> Result<NodeId> {
        match name {
            Name::Check(x) => Ok(self.check(x)),
            Name::Gen(i) => {
                let mut entries = Vec::new();
                for j in 0..self.poset.slots() {
                    let key = self.poset.key(i, j)?;
                    entries.push((
                        CondBits::TOP.with(key, true),
                        self.check(&HfSet::nat(j as u64)),
                    ));
                }
                if !self.poset.contains_point(i) {
                    return Err(Error::CoordinateOutOfDomain(i.to_string()));
                }
                Ok(self.intern(entries))
            }
            Name::Bullet(elems) => {
                let mut entries = Vec::with_capacity(elems.len());
                for e in elems {
                    entries.push((CondBits::TOP, self.compile(e)?));
                }
                Ok(self.intern(entries))
            }
            Name::OPair(a, b) => {
                let a = a.as_ref().clone();
                let kuratowski = Name::bullet([
                    Name::bullet([a.clone()]),
                    Name::bullet([a, b.as_ref().clone()]),
                ]);
                self.compile(&kuratowski)
            }
            Name::Raw(entries) => {
                let mut out = Vec::with_capacity(entries.len());
                for (p, n) in entries {
                    out.push((self.poset.bits(p)?, self.compile(n)?));
                }
                Ok(self.intern(out))
            }
            Name::Restrict(inner, p) => {
                let bits = self.poset.bits(p)?;
                let x = self.compile(inner)?;
                Ok(self.restrict_node(x, bits))
            }
            Name::Mix(branches) => {
                let mut out = Vec::new();
                for (p, n) in branches {
                    let bits = self.poset.bits(p)?;
                    let x = self.compile(n)?;
                    let r = self.restrict_node(x, bits);
                    out.extend_from_slice(&self.nodes[r as usize]);
                }
                Ok(self.intern(out))
            }
            Name::Based(f) => {
                let mut pairs = Vec::new();
                for c in self.poset.domain() {
                    pairs.push(Name::opair(
                        Name::gen(c.clone()),
                        Name::check_nat(f.eval(c)?),
                    ));
                }
                self.compile(&Name::bullet(pairs))
            }
            Name::Prec(d) => {
                let pts: Vec<&OrderPoint> =
                    self.poset.domain().iter().filter(|x| d.admits(x)).collect();
                let mut pairs = Vec::new();
                for a in &pts {
                    for b in &pts {
                        if a.less_than(b)? {
                            pairs.push(Name::opair(
                                Name::gen((*a).clone()),
                                Name::gen((*b).clone()),
                            ));
                        }
                    }
                }
                self.compile(&Name::bullet(pairs))
            }
        }
    }

    fn check(&mut self, x: &HfSet) -> NodeId {
        if let Some(id) = self.checks.get(x) {
            return *id;
        }
        let entries = x.iter().map(|y| (CondBits::TOP, self.check(y))).collect();
        let id = self.intern(entries);
        self.checks.insert(x.clone(), id);
        id
    }

    /// `x ↾ p = {(q, y ↾ p) : q ≤ p, q ⊩ y ∈ x, y ∈ dom x}`, keeping for each
    /// `y` only the minimal such `q`. Every other `q` extends a minimal one,
    /// so the evaluation at any atom is unchanged.
    pub fn restrict_node(&mut self, x: NodeId, p: CondBits) -> NodeId {
        if let Some(id) = self.restricted.get(&(x, p)) {
            return *id;
        }
        let mut ys: Vec<NodeId> = self.nodes[x as usize].iter().map(|(_, y)| *y).collect();
        ys.sort_unstable();
        ys.dedup();
        let mut entries = Vec::new();
        for y in ys {
            let truth = self.elem_set(y, x);
            let minimal = self.minimal_forcing(p, &truth);
            if minimal.is_empty() {
                continue;
            }
            let ry = self.restrict_node(y, p);
            entries.extend(minimal.into_iter().map(|q| (q, ry)));
        }
        let id = self.intern(entries);
        self.restricted.insert((x, p), id);
        id
    }

    /// The ⊆-minimal conditions `q ≤ p` with `ext(q) ⊆ truth`.
    pub fn minimal_forcing(&mut self, p: CondBits, truth: &AtomSet) -> Vec<CondBits> {
        let mut found = Vec::new();
        self.search_forcing(p, 0, truth, &mut found);
        found.sort_by_key(|q| q.len());
        let mut minimal: Vec<CondBits> = Vec::new();
        for q in found {
            if !minimal.iter().any(|m| q.extends(*m)) {
                minimal.push(q);
            }
        }
        minimal
    }

    fn search_forcing(
        &mut self,
        q: CondBits,
        from: usize,
        truth: &AtomSet,
        found: &mut Vec<CondBits>,
    ) {
        let ext = self.ext_set(q);
        if ext.is_subset(truth) {
            found.push(q);
            return;
        }
        if !ext.intersects(truth) {
            return;
        }
        for k in from..self.poset.key_count() {
            if q.mask >> k & 1 == 0 {
                self.search_forcing(q.with(k, false), k + 1, truth, found);
                self.search_forcing(q.with(k, true), k + 1, truth, found);
            }
        }
    }

    pub fn ext_set(&mut self, p: CondBits) -> AtomSet {
        if let Some(s) = self.ext.get(&p) {
            return s.clone();
        }
        let s = self.poset.ext(p);
        self.ext.insert(p, s.clone());
        s
    }

    /// Atoms forcing `a ∈ b`.
    pub fn elem_set(&mut self, a: NodeId, b: NodeId) -> AtomSet {
        if let Some(s) = self.elem.get(&(a, b)) {
            return s.clone();
        }
        let mut out = AtomSet::empty(self.poset.atom_count());
        let entries = self.nodes[b as usize].clone();
        for (s, y) in entries {
            let mut part = self.ext_set(s);
            if part.is_empty() {
                continue;
            }
            part.and_with(&self.eq_set(a, y));
            out.or_with(&part);
        }
        self.elem.insert((a, b), out.clone());
        out
    }

    /// Atoms forcing `a = b`.
    pub fn eq_set(&mut self, a: NodeId, b: NodeId) -> AtomSet {
        let key = if a <= b { (a, b) } else { (b, a) };
        if let Some(s) = self.eq.get(&key) {
            return s.clone();
        }
        let mut out = AtomSet::full(self.poset.atom_count());
        if a != b {
            for (x, y) in [(a, b), (b, a)] {
                let entries = self.nodes[x as usize].clone();
                for (s, z) in entries {
                    let mut ok = self.ext_set(s).complement();
                    ok.or_with(&self.elem_set(z, y));
                    out.and_with(&ok);
                    if out.is_empty() {
                        break;
                    }
                }
            }
        }
        self.eq.insert(key, out.clone());
        out
    }

    /// Atoms forcing `φ`.
    pub fn truth(&mut self, phi: &Formula) -> Result<AtomSet> {
        Ok(match phi {
            Formula::Elem(a, b) => {
                let (a, b) = (self.compile(a)?, self.compile(b)?);
                self.elem_set(a, b)
            }
            Formula::Eq(a, b) => {
                let (a, b) = (self.compile(a)?, self.compile(b)?);
                self.eq_set(a, b)
            }
            Formula::Not(f) => self.truth(f)?.complement(),
            Formula::And(a, b) => {
                let mut s = self.truth(a)?;
                s.and_with(&self.truth(b)?);
                s
            }
            Formula::Or(a, b) => {
                let mut s = self.truth(a)?;
                s.or_with(&self.truth(b)?);
                s
            }
            Formula::IsFunctionOn(..) | Formula::ValueIn(..) => self.truth(&phi.expand()?)?,
        })
    }

    pub fn forces_bits(&mut self, p: CondBits, phi: &Formula) -> Result<bool> {
        let t = self.truth(phi)?;
        Ok(self.ext_set(p).is_subset(&t))
    }

    pub fn forces(&mut self, p: &Condition, phi: &Formula) -> Result<bool> {
        let bits = self.poset.bits(p)?;
        self.forces_bits(bits, phi)
    }

    /// Value of a compiled name under the filter generated by `atom`.
    pub fn val(&self, id: NodeId, atom: u32) -> HfSet {
        let mut memo = HashMap::new();
        self.val_memo(id, atom, &mut memo)
    }

    fn val_memo(&self, id: NodeId, atom: u32, memo: &mut HashMap<NodeId, HfSet>) -> HfSet {
        if let Some(v) = memo.get(&id) {
            return v.clone();
        }
        let v = HfSet::from_members(
            self.nodes[id as usize]
                .iter()
                .filter(|(s, _)| atom & s.mask == s.vals)
                .map(|(_, y)| self.val_memo(*y, atom, memo)),
        );
        memo.insert(id, v.clone());
        v
    }

    /// Raw-expansion depth: the empty name has depth 0.
    pub fn depth(&self, id: NodeId) -> usize {
        let mut memo = HashMap::new();
        self.depth_memo(id, &mut memo)
    }

    fn depth_memo(&self, id: NodeId, memo: &mut HashMap<NodeId, usize>) -> usize {
        if let Some(d) = memo.get(&id) {
            return *d;
        }
        let d = self.nodes[id as usize]
            .iter()
            .map(|(_, y)| self.depth_memo(*y, memo) + 1)
            .max()
            .unwrap_or(0);
        memo.insert(id, d);
        d
    }

    /// The compiled node as an explicit raw name.
    pub fn to_name(&self, id: NodeId) -> Name {
        Name::raw(
            self.nodes[id as usize]
                .iter()
                .map(|(s, y)| (self.poset.condition(*s), self.to_name(*y))),
        )
    }
}

/// Compiles `name` and returns it as an explicit raw name.
pub fn compile(name: &Name, poset: &TruncatedPoset) -> Result<Name> {
    let mut engine = Engine::new(poset);
    let id = engine.compile(name)?;
    Ok(engine.to_name(id))
}

pub fn forces(p: &Condition, phi: &Formula, poset: &TruncatedPoset) -> Result<bool> {
    Engine::new(poset).forces(p, phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(n: u64) -> OrderPoint {
        OrderPoint::Nat(n)
    }

    #[test]
    fn compile_examples() {
        let t = TruncatedPoset::plain(2, 2).unwrap();
        assert_eq!(compile(&Name::check_nat(0), &t).unwrap(), Name::raw([]));
        let g = compile(&Name::gen(nat(0)), &t).unwrap();
        let expected = Name::raw([
            (Condition::singleton(nat(0), 0, true), Name::raw([])),
            (
                Condition::singleton(nat(0), 1, true),
                Name::raw([(Condition::new(), Name::raw([]))]),
            ),
        ]);
        assert_eq!(g, expected);
        assert!(matches!(
            compile(&Name::gen(nat(5)), &t),
            Err(Error::CoordinateOutOfDomain(_))
        ));
    }

    #[test]
    fn forcing_examples() {
        let t = TruncatedPoset::plain(2, 2).unwrap();
        let phi = Formula::elem(Name::check_nat(0), Name::gen(nat(0)));
        assert!(forces(&Condition::singleton(nat(0), 0, true), &phi, &t).unwrap());
        assert!(!forces(&Condition::new(), &phi, &t).unwrap());
        let refl = Formula::eq(Name::gen(nat(1)), Name::gen(nat(1)));
        assert!(forces(&Condition::new(), &refl, &t).unwrap());
        let lem = Formula::or(phi.clone(), Formula::not(phi.clone()));
        assert!(forces(&Condition::new(), &lem, &t).unwrap());
    }

    #[test]
    fn semantic_equality_of_distinct_terms() {
        let t = TruncatedPoset::plain(1, 1).unwrap();
        let two = Name::check_nat(2);
        let b = Name::bullet([Name::check_nat(0), Name::check_nat(1)]);
        assert!(forces(&Condition::new(), &Formula::eq(two, b), &t).unwrap());
    }

    #[test]
    fn evaluation() {
        let t = TruncatedPoset::plain(1, 2).unwrap();
        let mut e = Engine::new(&t);
        let g = e.compile(&Name::gen(nat(0))).unwrap();
        // row 0 = (1, 0): only slot 0 is set
        assert_eq!(e.val(g, 0b01), HfSet::singleton(HfSet::nat(0)));
        let c = e.compile(&Name::check_nat(3)).unwrap();
        assert_eq!(e.val(c, 0b10), HfSet::nat(3));
        let b = e.compile(&Name::bullet([Name::gen(nat(0))])).unwrap();
        assert_eq!(
            e.val(b, 0b01),
            HfSet::singleton(HfSet::singleton(HfSet::nat(0)))
        );
        assert_eq!(e.depth(c), 3);
    }

    #[test]
    fn restriction_below_and_away() {
        let t = TruncatedPoset::plain(2, 1).unwrap();
        let p = Condition::singleton(nat(0), 0, true);
        let q = Condition::singleton(nat(0), 0, false);
        let x = Name::bullet([Name::gen(nat(1)), Name::check_nat(1)]);
        let r = Name::restrict(x.clone(), p.clone());
        let mut e = Engine::new(&t);
        assert!(e.forces(&p, &Formula::eq(r.clone(), x)).unwrap());
        assert!(e.forces(&q, &Formula::eq(r, Name::check_nat(0))).unwrap());
    }

    #[test]
    fn mixing_picks_branch() {
        let t = TruncatedPoset::plain(1, 1).unwrap();
        let p0 = Condition::singleton(nat(0), 0, false);
        let p1 = Condition::singleton(nat(0), 0, true);
        let m = Name::mix([
            (p0.clone(), Name::check_nat(1)),
            (p1.clone(), Name::check_nat(2)),
        ])
        .unwrap();
        let mut e = Engine::new(&t);
        assert!(e
            .forces(&p0, &Formula::eq(m.clone(), Name::check_nat(1)))
            .unwrap());
        assert!(e.forces(&p1, &Formula::eq(m, Name::check_nat(2))).unwrap());
    }
}
