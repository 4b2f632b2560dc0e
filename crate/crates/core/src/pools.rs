//! The four operator pools: fermionic, qubit, qubit-excitation (QEB) and the
//! minimal `G` pool.
//!
//! Operator ids are contiguous from zero and follow the lexicographic order of
//! `(kind, indices)`, so argmax tie-breaking downstream is reproducible.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jw;
use crate::operator::AntihermitianSum;
use crate::pauli::{Pauli, PauliWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    FermionicSingle,
    FermionicDouble,
    QubitSingle,
    QubitDoubleYxxx,
    QubitDoubleXyyy,
    QebSingle,
    QebDouble,
    GYz,
    GY,
}

impl OperatorKind {
    pub fn is_qubit(self) -> bool {
        matches!(
            self,
            OperatorKind::QubitSingle | OperatorKind::QubitDoubleYxxx | OperatorKind::QubitDoubleXyyy
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnchorKind {
    /// One `Y` among `X`s; the `Y` qubit is the anchor.
    YAnchor,
    /// One `X` among `Y`s; the `X` qubit is the anchor.
    XAnchor,
}

impl AnchorKind {
    /// The single-qubit factor sitting on the anchor.
    pub fn anchor_pauli(self) -> Pauli {
        match self {
            AnchorKind::YAnchor => Pauli::Y,
            AnchorKind::XAnchor => Pauli::X,
        }
    }

    /// The factor every other qubit of a member carries.
    pub fn companion_pauli(self) -> Pauli {
        match self {
            AnchorKind::YAnchor => Pauli::X,
            AnchorKind::XAnchor => Pauli::Y,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Anchor {
    pub qubit: usize,
    pub kind: AnchorKind,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoolOperator {
    pub id: usize,
    pub label: String,
    pub generator: AntihermitianSum,
    pub kind: OperatorKind,
    /// Minority-Pauli qubit for qubit-pool words; for QEB operators the anchor
    /// of the leading word.
    pub anchor_hint: Option<Anchor>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoolKind {
    Qubit,
    Qeb,
    Fermionic,
    G,
}

impl PoolKind {
    pub fn name(self) -> &'static str {
        match self {
            PoolKind::Qubit => "qubit",
            PoolKind::Qeb => "qeb",
            PoolKind::Fermionic => "fermionic",
            PoolKind::G => "g",
        }
    }
}

impl fmt::Display for PoolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PoolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qubit" => Ok(PoolKind::Qubit),
            "qeb" => Ok(PoolKind::Qeb),
            "fermionic" => Ok(PoolKind::Fermionic),
            "g" | "G" => Ok(PoolKind::G),
            other => Err(Error::InvalidArgument(format!(
                "unknown pool `{other}` (expected qubit, qeb, fermionic or g)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OperatorPool {
    pub kind: PoolKind,
    pub n_qubits: usize,
    pub operators: Vec<PoolOperator>,
}

impl OperatorPool {
    pub fn build(kind: PoolKind, n: usize) -> Result<Self> {
        match kind {
            PoolKind::Qubit => qubit_pool(n),
            PoolKind::Qeb => qeb_pool(n),
            PoolKind::Fermionic => fermionic_pool(n),
            PoolKind::G => g_pool(n),
        }
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn get(&self, id: usize) -> Option<&PoolOperator> {
        self.operators.get(id)
    }

    /// Keeps the operators accepted by `keep` and renumbers ids in order.
    pub fn filtered(mut self, keep: impl Fn(&PoolOperator) -> bool) -> Self {
        self.operators.retain(|op| keep(op));
        for (id, op) in self.operators.iter_mut().enumerate() {
            op.id = id;
        }
        self
    }
}

fn check_size(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("pools need at least 2 qubits, got {n}")));
    }
    Ok(())
}

struct Builder {
    n: usize,
    ops: Vec<PoolOperator>,
}

impl Builder {
    fn push(&mut self, kind: OperatorKind, label: String, generator: AntihermitianSum, anchor_hint: Option<Anchor>) {
        debug_assert_eq!(generator.n_qubits(), self.n);
        self.ops.push(PoolOperator {
            id: self.ops.len(),
            label,
            generator,
            kind,
            anchor_hint,
        });
    }
}

fn subsets4(n: usize) -> impl Iterator<Item = [usize; 4]> {
    (0..n).flat_map(move |i| {
        (i + 1..n).flat_map(move |j| (j + 1..n).flat_map(move |k| (k + 1..n).map(move |l| [i, j, k, l])))
    })
}

fn word_with(n: usize, anchor: usize, anchor_pauli: Pauli, rest: &[usize], rest_pauli: Pauli) -> PauliWord {
    let mut w = PauliWord::identity(n);
    w.set(anchor, anchor_pauli);
    for &q in rest {
        w.set(q, rest_pauli);
    }
    w
}

fn join(idx: &[usize]) -> String {
    idx.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",")
}

/// Anchor of a single Pauli word with exactly one minority factor.
fn minority_anchor(word: &PauliWord) -> Option<Anchor> {
    let (ny, nx) = (word.count(Pauli::Y), word.count(Pauli::X));
    if word.count(Pauli::Z) > 0 {
        return None;
    }
    let (kind, p) = if ny == 1 {
        (AnchorKind::YAnchor, Pauli::Y)
    } else if nx == 1 {
        (AnchorKind::XAnchor, Pauli::X)
    } else {
        return None;
    };
    word.factors().find(|&(_, f)| f == p).map(|(qubit, _)| Anchor { qubit, kind })
}

/// Singles `iY_aX_b` for every ordered pair plus, per 4-subset, the four
/// `YXXX` and four `XYYY` placements: `n(n−1) + 8·C(n,4)` operators.
pub fn qubit_pool(n: usize) -> Result<OperatorPool> {
    check_size(n)?;
    let mut b = Builder { n, ops: Vec::new() };
    for a in 0..n {
        for c in (0..n).filter(|&c| c != a) {
            let word = word_with(n, a, Pauli::Y, &[c], Pauli::X);
            let anchor = Anchor { qubit: a, kind: AnchorKind::YAnchor };
            b.push(OperatorKind::QubitSingle, format!("YX({a};{c})"), AntihermitianSum::single(word), Some(anchor));
        }
    }
    for (kind, anchor_kind, tag) in [
        (OperatorKind::QubitDoubleYxxx, AnchorKind::YAnchor, "YXXX"),
        (OperatorKind::QubitDoubleXyyy, AnchorKind::XAnchor, "XYYY"),
    ] {
        let mut entries: Vec<(usize, [usize; 3])> = Vec::new();
        for s in subsets4(n) {
            for pos in 0..4 {
                let rest: Vec<usize> = s.iter().copied().filter(|&q| q != s[pos]).collect();
                entries.push((s[pos], [rest[0], rest[1], rest[2]]));
            }
        }
        entries.sort_unstable();
        for (anchor, rest) in entries {
            let word = word_with(n, anchor, anchor_kind.anchor_pauli(), &rest, anchor_kind.companion_pauli());
            b.push(
                kind,
                format!("{tag}({anchor};{})", join(&rest)),
                AntihermitianSum::single(word),
                Some(Anchor { qubit: anchor, kind: anchor_kind }),
            );
        }
    }
    Ok(OperatorPool { kind: PoolKind::Qubit, n_qubits: n, operators: b.ops })
}

/// The three creation/annihilation pairings of a 4-subset `p<q<r<s`.
fn pairings([p, q, r, s]: [usize; 4]) -> [[usize; 4]; 3] {
    [[p, q, r, s], [p, r, q, s], [p, s, q, r]]
}

/// Qubit excitations: `C(n,2)` singles and `3·C(n,4)` doubles, i.e. the
/// fermionic excitations with every parity string deleted.
pub fn qeb_pool(n: usize) -> Result<OperatorPool> {
    check_size(n)?;
    let mut b = Builder { n, ops: Vec::new() };
    for i in 0..n {
        for j in i + 1..n {
            let g = jw::qubit_single_excitation(i, j, n)?;
            let hint = minority_anchor(&g.terms()[0].1);
            b.push(OperatorKind::QebSingle, format!("QE({i},{j})"), g, hint);
        }
    }
    for s in subsets4(n) {
        for [i, j, k, l] in pairings(s) {
            let g = jw::qubit_double_excitation(i, j, k, l, n)?;
            let hint = minority_anchor(&g.terms()[0].1);
            b.push(OperatorKind::QebDouble, format!("QE({i},{j};{k},{l})"), g, hint);
        }
    }
    Ok(OperatorPool { kind: PoolKind::Qeb, n_qubits: n, operators: b.ops })
}

/// Generalized (occupation-agnostic) fermionic singles and doubles under JW.
pub fn fermionic_pool(n: usize) -> Result<OperatorPool> {
    check_size(n)?;
    let mut b = Builder { n, ops: Vec::new() };
    for i in 0..n {
        for j in i + 1..n {
            b.push(OperatorKind::FermionicSingle, format!("T({i},{j})"), jw::jw_single_excitation(i, j, n)?, None);
        }
    }
    for s in subsets4(n) {
        for (k, [i, j, c, d]) in pairings(s).into_iter().enumerate() {
            let g = if k == 0 {
                jw::jw_double_excitation(i, j, c, d, n)?
            } else {
                jw::fermionic_double_excitation(i, j, c, d, n)?
            };
            b.push(OperatorKind::FermionicDouble, format!("T({i},{j};{c},{d})"), g, None);
        }
    }
    Ok(OperatorPool { kind: PoolKind::Fermionic, n_qubits: n, operators: b.ops })
}

/// `{iY_k Z_{k+1} : 0 ≤ k ≤ n−2} ∪ {iY_k : 1 ≤ k ≤ n−1}`, `2n − 2` operators.
pub fn g_pool(n: usize) -> Result<OperatorPool> {
    check_size(n)?;
    let mut b = Builder { n, ops: Vec::new() };
    for k in 0..n - 1 {
        let mut w = PauliWord::identity(n);
        w.set(k, Pauli::Y);
        w.set(k + 1, Pauli::Z);
        b.push(OperatorKind::GYz, format!("YZ({k},{})", k + 1), AntihermitianSum::single(w), None);
    }
    for k in 1..n {
        let mut w = PauliWord::identity(n);
        w.set(k, Pauli::Y);
        b.push(OperatorKind::GY, format!("Y({k})"), AntihermitianSum::single(w), None);
    }
    Ok(OperatorPool { kind: PoolKind::G, n_qubits: n, operators: b.ops })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn qubit_pool_sizes() {
        assert_eq!(qubit_pool(4).unwrap().len(), 20);
        assert_eq!(qubit_pool(6).unwrap().len(), 150);
        for n in 4..=12 {
            assert_eq!(qubit_pool(n).unwrap().len(), n * (n - 1) + 8 * binom(n, 4), "n={n}");
        }
    }

    #[test]
    fn qubit_operators_are_unit_z_free_words() {
        let pool = qubit_pool(6).unwrap();
        for op in &pool.operators {
            assert_eq!(op.generator.len(), 1);
            let (c, w) = &op.generator.terms()[0];
            assert_eq!(*c, 1.0);
            assert_eq!(w.count(Pauli::Z), 0);
            let expected = if op.kind == OperatorKind::QubitSingle { 2 } else { 4 };
            assert_eq!(w.weight(), expected, "{}", op.label);
            let hint = op.anchor_hint.unwrap();
            assert_eq!(w.get(hint.qubit), hint.kind.anchor_pauli());
            assert_eq!(minority_anchor(w), Some(hint));
        }
    }

    #[test]
    fn qubit_doubles_on_one_subset_commute() {
        let pool = qubit_pool(5).unwrap();
        let on_subset: Vec<&PauliWord> = pool
            .operators
            .iter()
            .filter(|op| op.kind != OperatorKind::QubitSingle)
            .map(|op| &op.generator.terms()[0].1)
            .filter(|w| w.support() == [0, 1, 3, 4])
            .collect();
        assert_eq!(on_subset.len(), 8);
        for a in &on_subset {
            for b in &on_subset {
                assert!(a.commutes_with(b));
            }
        }
    }

    #[test]
    fn labels_and_order() {
        let pool = qubit_pool(4).unwrap();
        assert_eq!(pool.operators[0].label, "YX(0;1)");
        assert_eq!(pool.operators[12].label, "YXXX(0;1,2,3)");
        assert_eq!(pool.operators[16].label, "XYYY(0;1,2,3)");
        assert!(pool.operators.windows(2).all(|w| w[0].kind <= w[1].kind));
        assert!(pool.operators.iter().enumerate().all(|(i, op)| op.id == i));
    }

    #[test]
    fn qeb_pool_structure() {
        let pool = qeb_pool(4).unwrap();
        assert_eq!(pool.len(), 6 + 3);
        let single = &pool.operators[0];
        let w = |t: &str| PauliWord::parse(t, 4).unwrap();
        assert_eq!(single.generator.terms(), &[(0.5, w("X0 Y1")), (-0.5, w("Y0 X1"))]);
        let double = &pool.operators[6];
        assert_eq!(double.generator.len(), 8);
        for (c, word) in double.generator.terms() {
            assert_eq!(c.abs(), 0.125);
            assert_eq!(word.weight(), 4);
            assert_eq!(word.count(Pauli::Z), 0);
        }
        assert!(pool.operators.iter().all(|op| op.anchor_hint.is_some()));
        assert_eq!(qeb_pool(6).unwrap().len(), binom(6, 2) + 3 * binom(6, 4));
    }

    #[test]
    fn fermionic_pool_structure() {
        let pool = fermionic_pool(4).unwrap();
        assert_eq!(pool.len(), 9);
        for op in &pool.operators {
            assert!(op.anchor_hint.is_none());
            assert!(op.generator.terms_commute(), "{}", op.label);
        }
        let far = pool.operators.iter().find(|op| op.label == "T(0,2)").unwrap();
        assert!(far.generator.terms().iter().all(|(_, w)| w.get(1) == Pauli::Z));
    }

    #[test]
    fn g_pool_structure() {
        let pool = g_pool(4).unwrap();
        assert_eq!(pool.len(), 6);
        let two = g_pool(2).unwrap();
        let texts: Vec<String> = two.operators.iter().map(|op| op.generator.terms()[0].1.to_text()).collect();
        assert_eq!(texts, ["Y0 Z1", "Y1"]);
        for n in 2..10 {
            let pool = g_pool(n).unwrap();
            assert_eq!(pool.len(), 2 * n - 2);
            for op in &pool.operators {
                let w = &op.generator.terms()[0].1;
                assert!(w.weight() <= 2);
                let s = w.support();
                assert!(s.len() == 1 || s[1] == s[0] + 1);
            }
        }
    }

    #[test]
    fn tiny_registers_are_rejected() {
        for kind in [PoolKind::Qubit, PoolKind::Qeb, PoolKind::Fermionic, PoolKind::G] {
            assert!(OperatorPool::build(kind, 1).is_err());
        }
    }

    #[test]
    fn filtering_renumbers() {
        let pool = g_pool(4).unwrap().filtered(|op| op.kind == OperatorKind::GY);
        assert_eq!(pool.len(), 3);
        assert_eq!(pool.operators.iter().map(|o| o.id).collect::<Vec<_>>(), [0, 1, 2]);
    }

    #[test]
    fn pool_names_round_trip() {
        for kind in [PoolKind::Qubit, PoolKind::Qeb, PoolKind::Fermionic, PoolKind::G] {
            assert_eq!(kind.name().parse::<PoolKind>().unwrap(), kind);
        }
        assert!("uccsd".parse::<PoolKind>().is_err());
    }
}
