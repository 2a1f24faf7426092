//! The necessary-condition scanner: enumerate induced cycles through a
//! spine edge avoiding the two opposite vertices, and decide exactly
//! whether some sign assignment zeroes the signed edge-length sum.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Zero;
use rayon::prelude::*;

use crate::exact::{Radical, Rat};
use crate::limit::SignedCycle;
use crate::polyhedron::{Edge, EdgeLengths, Polyhedron, SpineEdge, VertexId};

/// Result of scanning one spine edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionReport {
    pub spine: SpineEdge,
    pub witness: Option<SignedCycle>,
    pub cycles_examined: usize,
    pub exhausted: bool,
}

/// All induced (chordless) cycles through `through_edge` avoiding the
/// `forbidden` vertices, each reported once as the sequence starting with
/// the edge's endpoints; ascending length, then lexicographic.
pub fn enumerate_induced_cycles(
    p: &Polyhedron,
    through_edge: Edge,
    forbidden: &BTreeSet<VertexId>,
    max_len: usize,
) -> Vec<Vec<VertexId>> {
    let allowed: BTreeSet<VertexId> = p
        .vertices()
        .iter()
        .copied()
        .filter(|v| !forbidden.contains(v))
        .collect();
    enumerate_induced_cycles_within(p, through_edge, &allowed, max_len, through_edge.0)
}

/// Same, restricted to an allowed vertex set; `start` picks which edge
/// endpoint the canonical sequence begins with.
pub(crate) fn enumerate_induced_cycles_within(
    p: &Polyhedron,
    through_edge: Edge,
    allowed: &BTreeSet<VertexId>,
    max_len: usize,
    start: VertexId,
) -> Vec<Vec<VertexId>> {
    if max_len < 3
        || !p.has_edge(through_edge)
        || !allowed.contains(&through_edge.0)
        || !allowed.contains(&through_edge.1)
    {
        return Vec::new();
    }
    let second = if start == through_edge.0 {
        through_edge.1
    } else {
        through_edge.0
    };
    let mut out = Vec::new();
    let mut path = vec![start, second];
    let mut in_path: BTreeSet<VertexId> = path.iter().copied().collect();
    extend_chordless(p, allowed, max_len, &mut path, &mut in_path, &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

// Depth-first extension of a chordless path anchored at the fixed edge.
// A candidate vertex adjacent to any non-endpoint path vertex would be a
// chord, so it either closes the cycle (adjacent to the start only) or is
// rejected.
fn extend_chordless(
    p: &Polyhedron,
    allowed: &BTreeSet<VertexId>,
    max_len: usize,
    path: &mut Vec<VertexId>,
    in_path: &mut BTreeSet<VertexId>,
    out: &mut Vec<Vec<VertexId>>,
) {
    let last = *path.last().unwrap();
    let start = path[0];
    let neighbors = p.neighbors(last).expect("vertex exists");
    for &v in neighbors {
        if !allowed.contains(&v) || in_path.contains(&v) {
            continue;
        }
        let v_neigh = p.neighbors(v).expect("vertex exists");
        // adjacency to interior path vertices means a chord
        if path[1..path.len() - 1].iter().any(|u| v_neigh.contains(u)) {
            continue;
        }
        if v_neigh.contains(&start) {
            if path.len() + 1 >= 3 {
                let mut cycle = path.clone();
                cycle.push(v);
                out.push(cycle);
            }
            continue; // closing vertex cannot be extended without a chord
        }
        if path.len() + 1 < max_len {
            path.push(v);
            in_path.insert(v);
            extend_chordless(p, allowed, max_len, path, in_path, out);
            path.pop();
            in_path.remove(&v);
        }
    }
}

/// Find signs with exact zero signed sum, if any. Coefficients are
/// grouped by squarefree core; a simultaneous signed zero must hold in
/// every group. Canonical output: first sign +1, then lexicographically
/// smallest (+1 before -1).
pub fn zero_sum_assignment(lengths: &[Radical]) -> Option<Vec<i8>> {
    assert!(!lengths.is_empty());
    let k = lengths.len();
    // coefficient vector of each term over the union of cores
    let cores: BTreeSet<_> = lengths
        .iter()
        .flat_map(|l| l.terms().map(|(c, _)| c.clone()))
        .collect();
    let cores: Vec<_> = cores.into_iter().collect();
    let vecs: Vec<Vec<Rat>> = lengths
        .iter()
        .map(|l| {
            cores
                .iter()
                .map(|c| {
                    l.terms()
                        .find(|(core, _)| *core == c)
                        .map(|(_, coeff)| coeff.clone())
                        .unwrap_or_else(Rat::zero)
                })
                .collect()
        })
        .collect();
    if k <= 24 {
        direct_scan(&vecs)
    } else {
        meet_in_the_middle(&vecs)
    }
}

fn add_assign(acc: &mut [Rat], v: &[Rat], sign: i8) {
    for (a, b) in acc.iter_mut().zip(v) {
        if sign > 0 {
            *a += b;
        } else {
            *a -= b;
        }
    }
}

fn signed_sum_vec(vecs: &[Vec<Rat>], signs: &[i8]) -> Vec<Rat> {
    let dim = vecs[0].len();
    let mut acc = vec![Rat::zero(); dim];
    for (v, &s) in vecs.iter().zip(signs) {
        add_assign(&mut acc, v, s);
    }
    acc
}

fn direct_scan(vecs: &[Vec<Rat>]) -> Option<Vec<i8>> {
    let k = vecs.len();
    // lex order with +1 < -1: ascending mask, high bit = second term
    for mask in 0u64..(1u64 << (k - 1)) {
        let mut signs = vec![1i8; k];
        for j in 1..k {
            if mask >> (k - 1 - j) & 1 == 1 {
                signs[j] = -1;
            }
        }
        if signed_sum_vec(vecs, &signs).iter().all(|c| c.is_zero()) {
            return Some(signs);
        }
    }
    None
}

fn meet_in_the_middle(vecs: &[Vec<Rat>]) -> Option<Vec<i8>> {
    let k = vecs.len();
    let half = k / 2;
    let (front, back) = vecs.split_at(half);
    // map: back-half sum -> lexicographically smallest back signs
    let mut table: HashMap<Vec<Rat>, Vec<i8>> = HashMap::new();
    let bk = back.len();
    for mask in 0u64..(1u64 << bk) {
        let mut signs = vec![1i8; bk];
        for j in 0..bk {
            if mask >> (bk - 1 - j) & 1 == 1 {
                signs[j] = -1;
            }
        }
        let sum = signed_sum_vec(back, &signs);
        table.entry(sum).or_insert(signs);
    }
    let fk = front.len();
    for mask in 0u64..(1u64 << (fk - 1)) {
        let mut signs = vec![1i8; fk];
        for j in 1..fk {
            if mask >> (fk - 1 - j) & 1 == 1 {
                signs[j] = -1;
            }
        }
        let sum = signed_sum_vec(front, &signs);
        let negated: Vec<Rat> = sum.iter().map(|c| -c.clone()).collect();
        if let Some(back_signs) = table.get(&negated) {
            signs.extend_from_slice(back_signs);
            return Some(signs);
        }
    }
    None
}

/// Scan one spine edge: the first induced cycle (in enumeration order)
/// through it avoiding `s` and `n` that admits a zero-sum assignment.
pub fn edge_obstruction_report(
    p: &Polyhedron,
    lambda: &EdgeLengths,
    spine: &SpineEdge,
    max_len: usize,
) -> ObstructionReport {
    let forbidden = BTreeSet::from([spine.s, spine.n]);
    let cycles = enumerate_induced_cycles(p, spine.edge(), &forbidden, max_len);
    let exhausted = max_len >= p.vertices().len();
    let mut examined = 0;
    for cycle in &cycles {
        examined += 1;
        let k = cycle.len();
        let lengths: Vec<Radical> = (0..k)
            .map(|j| lambda.length[&Edge::new(cycle[j], cycle[(j + 1) % k])].clone())
            .collect();
        if let Some(signs) = zero_sum_assignment(&lengths) {
            let witness = SignedCycle { cycle: cycle.clone(), signs, lengths };
            debug_assert!(witness.signed_sum().is_zero());
            return ObstructionReport {
                spine: *spine,
                witness: Some(witness),
                cycles_examined: examined,
                exhausted,
            };
        }
    }
    ObstructionReport { spine: *spine, witness: None, cycles_examined: examined, exhausted }
}

/// One report per edge, spine apexes from the complex, deterministic
/// edge order.
pub fn scan_all_edges(
    p: &Polyhedron,
    lambda: &EdgeLengths,
    max_len: usize,
) -> BTreeMap<Edge, ObstructionReport> {
    let edges: Vec<Edge> = p.edges().collect();
    edges
        .into_par_iter()
        .map(|e| {
            let (s, n) = p.opposite_vertices(e).expect("edge of the complex");
            let spine = SpineEdge { w1: e.0, w2: e.1, s, n };
            (e, edge_obstruction_report(p, lambda, &spine, max_len))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{radical_from_square, radical_signed_sum, rat_int};
    use crate::polyhedron::octahedron;

    #[test]
    fn octahedron_cycle_enumeration() {
        let p = octahedron();
        let cycles =
            enumerate_induced_cycles(&p, Edge::new(1, 2), &BTreeSet::from([5, 6]), 6);
        assert_eq!(cycles, vec![vec![1, 2, 3, 4]]);
        let cycles =
            enumerate_induced_cycles(&p, Edge::new(1, 5), &BTreeSet::from([2, 4]), 6);
        assert_eq!(cycles, vec![vec![1, 5, 3, 6]]);
        let cycles =
            enumerate_induced_cycles(&p, Edge::new(1, 2), &BTreeSet::from([5, 6]), 3);
        assert!(cycles.is_empty());
    }

    #[test]
    fn zero_sum_examples() {
        let ints = |v: &[i64]| -> Vec<Radical> { v.iter().map(|&n| Radical::from_int(n)).collect() };
        assert_eq!(zero_sum_assignment(&ints(&[1, 2, 1, 2])), Some(vec![1, 1, -1, -1]));
        assert_eq!(zero_sum_assignment(&ints(&[1, 1, 3])), None);
        let sqrt = |n: i64| radical_from_square(&rat_int(n)).unwrap();
        assert_eq!(
            zero_sum_assignment(&[sqrt(2), sqrt(2), sqrt(8)]),
            Some(vec![1, 1, -1])
        );
        // mixed cores must vanish simultaneously: the only choices
        // zeroing the sqrt(2) group leave the rational group at 2
        let one_plus_sqrt2 = sqrt(2) + Radical::from_int(1);
        let mixed = vec![one_plus_sqrt2.clone(), one_plus_sqrt2, sqrt(8)];
        assert_eq!(zero_sum_assignment(&mixed), None);
    }

    #[test]
    fn meet_in_the_middle_agrees_with_direct() {
        // 26 terms forces the MITM path
        let mut lengths: Vec<Radical> = (1..=25).map(Radical::from_int).collect();
        lengths.push(Radical::from_int((1..=25).sum::<i64>() - 2 * (1 + 2)));
        let signs = zero_sum_assignment(&lengths).unwrap();
        assert!(radical_signed_sum(&lengths, &signs).is_zero());
        assert_eq!(signs[0], 1);
    }

    #[test]
    fn obstruction_reports() {
        let p = octahedron();
        let spine = SpineEdge { w1: 1, w2: 2, s: 5, n: 6 };
        // equator lengths 1,2,1,2 (squared 1,4,1,4); others arbitrary
        let mut squared = BTreeMap::new();
        for e in p.edges() {
            squared.insert(e, rat_int(7) + rat_int(e.0 as i64 * 13 + e.1 as i64));
        }
        squared.insert(Edge::new(1, 2), rat_int(1));
        squared.insert(Edge::new(2, 3), rat_int(4));
        squared.insert(Edge::new(3, 4), rat_int(1));
        squared.insert(Edge::new(4, 1), rat_int(4));
        let lambda = EdgeLengths::from_squared(squared).unwrap();
        let report = edge_obstruction_report(&p, &lambda, &spine, 6);
        let w = report.witness.unwrap();
        assert_eq!(w.cycle, vec![1, 2, 3, 4]);
        assert_eq!(w.signs, vec![1, 1, -1, -1]);
        assert!(report.exhausted);
        assert!(w.signed_sum().is_zero());
    }
}
