//! Root data: reduced root systems realized inside a chosen character
//! lattice, with the simple roots numbered the standard (Bourbaki) way.
//!
//! Internal coordinates. A character is stored by its integer coordinates in
//! a fixed basis of X*; a cocharacter by its integer coordinates in the dual
//! basis of X_*. The pairing is then the dot product. The lattice choice
//! (adjoint / simply connected / generator matrix) only changes the basis
//! matrix `lattice_basis`, whose rows express the X* basis in fundamental
//! weight coordinates.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::linalg::{self, Mat, RowLattice};
use crate::{Error, Int, Rat, Result};
use num_integer::Integer;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SimpleType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl SimpleType {
    pub fn letter(self) -> char {
        match self {
            SimpleType::A => 'A',
            SimpleType::B => 'B',
            SimpleType::C => 'C',
            SimpleType::D => 'D',
            SimpleType::E => 'E',
            SimpleType::F => 'F',
            SimpleType::G => 'G',
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(SimpleType::A),
            "B" => Ok(SimpleType::B),
            "C" => Ok(SimpleType::C),
            "D" => Ok(SimpleType::D),
            "E" => Ok(SimpleType::E),
            "F" => Ok(SimpleType::F),
            "G" => Ok(SimpleType::G),
            other => Err(Error::UnknownType(other.to_string())),
        }
    }
}

/// One irreducible factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TypeSpec {
    pub kind: SimpleType,
    pub rank: usize,
}

/// Total rank past which datum construction refuses to proceed; root lists
/// grow quadratically and every consumer here is exact arithmetic.
pub const MAX_TOTAL_RANK: usize = 24;

impl TypeSpec {
    pub fn new(kind: SimpleType, rank: usize) -> Result<Self> {
        let ok = match kind {
            SimpleType::A => rank >= 1,
            SimpleType::B | SimpleType::C => rank >= 2,
            SimpleType::D => rank >= 3,
            SimpleType::E => (6..=8).contains(&rank),
            SimpleType::F => rank == 4,
            SimpleType::G => rank == 2,
        };
        if !ok {
            let why = match kind {
                SimpleType::A => "need n >= 1",
                SimpleType::B | SimpleType::C => "need n >= 2",
                SimpleType::D => "need n >= 3",
                SimpleType::E => "need n in {6, 7, 8}",
                SimpleType::F => "need n = 4",
                SimpleType::G => "need n = 2",
            };
            return Err(Error::RankOutOfRange { kind: kind.letter(), rank, why: why.into() });
        }
        if rank > MAX_TOTAL_RANK {
            return Err(Error::RankOutOfRange {
                kind: kind.letter(),
                rank,
                why: format!("supported rank cap is {MAX_TOTAL_RANK}"),
            });
        }
        Ok(TypeSpec { kind, rank })
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.kind.letter(), self.rank)
    }

    /// Cartan matrix with entry (i, j) equal to the value of the j-th simple
    /// root on the i-th simple coroot.
    pub fn cartan(&self) -> Mat<Int> {
        let n = self.rank;
        let mut c = Mat::zeros(n, n);
        for i in 0..n {
            c[(i, i)] = 2;
        }
        let mut edge = |i: usize, j: usize| {
            c[(i, j)] = -1;
            c[(j, i)] = -1;
        };
        match self.kind {
            SimpleType::A => {
                for i in 0..n.saturating_sub(1) {
                    edge(i, i + 1);
                }
            }
            SimpleType::B => {
                for i in 0..n - 1 {
                    edge(i, i + 1);
                }
                // Last simple root is short: its value on the previous coroot
                // stays -1, but the last coroot sees the long neighbor twice.
                c[(n - 1, n - 2)] = -2;
                c[(n - 2, n - 1)] = -1;
            }
            SimpleType::C => {
                for i in 0..n - 1 {
                    edge(i, i + 1);
                }
                // Last simple root is long.
                c[(n - 1, n - 2)] = -1;
                c[(n - 2, n - 1)] = -2;
            }
            SimpleType::D => {
                for i in 0..n.saturating_sub(3) {
                    edge(i, i + 1);
                }
                edge(n - 3, n - 2);
                edge(n - 3, n - 1);
            }
            SimpleType::E => {
                // Chain 1-3-4-5-6(-7)(-8) with node 2 hanging off node 4.
                edge(0, 2);
                edge(2, 3);
                edge(3, 4);
                edge(4, 5);
                if n >= 7 {
                    edge(5, 6);
                }
                if n == 8 {
                    edge(6, 7);
                }
                edge(1, 3);
            }
            SimpleType::F => {
                edge(0, 1);
                edge(2, 3);
                // Double bond: roots 1, 2 long; 3, 4 short.
                c[(1, 2)] = -1;
                c[(2, 1)] = -2;
            }
            SimpleType::G => {
                // Root 1 short, root 2 long.
                c[(0, 1)] = -3;
                c[(1, 0)] = -1;
            }
        }
        c
    }

    pub fn root_count(&self) -> usize {
        let n = self.rank;
        match self.kind {
            SimpleType::A => n * (n + 1),
            SimpleType::B | SimpleType::C => 2 * n * n,
            SimpleType::D => 2 * n * (n - 1),
            SimpleType::E => match n {
                6 => 72,
                7 => 126,
                _ => 240,
            },
            SimpleType::F => 48,
            SimpleType::G => 12,
        }
    }

    /// Order of the Weyl group, checked.
    pub fn weyl_order(&self) -> Result<u128> {
        let n = self.rank as u128;
        let fact = |k: u128| -> Result<u128> {
            let mut acc: u128 = 1;
            for i in 2..=k {
                acc = acc.checked_mul(i).ok_or(Error::OrderOverflow)?;
            }
            Ok(acc)
        };
        let pow2 = |k: u128| -> Result<u128> {
            if k >= 127 {
                return Err(Error::OrderOverflow);
            }
            Ok(1u128 << k)
        };
        Ok(match self.kind {
            SimpleType::A => fact(n + 1)?,
            SimpleType::B | SimpleType::C => pow2(n)?.checked_mul(fact(n)?).ok_or(Error::OrderOverflow)?,
            SimpleType::D => pow2(n - 1)?.checked_mul(fact(n)?).ok_or(Error::OrderOverflow)?,
            SimpleType::E => match self.rank {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            SimpleType::F => 1152,
            SimpleType::G => 12,
        })
    }

    /// Distinct primes dividing the Weyl order, in closed form (valid at any
    /// rank, no big integers).
    pub fn weyl_order_primes(&self) -> Vec<u64> {
        let n = self.rank as u64;
        let mut ps: BTreeSet<u64> = BTreeSet::new();
        match self.kind {
            SimpleType::A => ps.extend(linalg::primes_up_to(n + 1)),
            SimpleType::B | SimpleType::C | SimpleType::D => {
                ps.insert(2);
                ps.extend(linalg::primes_up_to(n));
            }
            SimpleType::E => {
                ps.extend([2, 3, 5]);
                if self.rank >= 7 {
                    ps.insert(7);
                }
            }
            SimpleType::F | SimpleType::G => ps.extend([2, 3]),
        }
        ps.into_iter().collect()
    }
}

/// Which character lattice to place between the root and weight lattices.
#[derive(Debug, Clone)]
pub enum LatticeChoice {
    Adjoint,
    SimplyConnected,
    /// Rows are generators of X* in fundamental weight coordinates.
    Generators(Vec<Vec<Int>>),
}

/// A root datum: roots in X*-basis coordinates, coroots in the dual basis,
/// dot-product pairing.
#[derive(Debug, Clone)]
pub struct RootDatum {
    components: Vec<TypeSpec>,
    /// Simple-root index range of each component.
    ranges: Vec<std::ops::Range<usize>>,
    rank: usize,
    cartan: Mat<Int>,
    /// Rows: X* basis in fundamental weight coordinates.
    lattice_basis: Mat<Int>,
    /// X*-basis coordinates, sorted lexicographically.
    roots: Vec<Vec<Int>>,
    /// Dual-basis coordinates, parallel to `roots`.
    coroots: Vec<Vec<Int>>,
    /// Simple-root basis coordinates, parallel to `roots`.
    delta_coords: Vec<Vec<Int>>,
    /// Indices of the simple roots, in Bourbaki order.
    simples: Vec<usize>,
    index: HashMap<Vec<Int>, usize>,
}

pub fn build_root_datum(components: &[TypeSpec], lattice: &LatticeChoice) -> Result<RootDatum> {
    if components.is_empty() {
        return Err(Error::EmptyComponents);
    }
    let rank: usize = components.iter().map(|c| c.rank).sum();
    if rank > MAX_TOTAL_RANK {
        return Err(Error::RankOutOfRange {
            kind: 'x',
            rank,
            why: format!("total rank cap is {MAX_TOTAL_RANK}"),
        });
    }
    let mut ranges = Vec::new();
    let mut at = 0;
    for c in components {
        ranges.push(at..at + c.rank);
        at += c.rank;
    }
    let cartan = Mat::block_diag(&components.iter().map(|c| c.cartan()).collect::<Vec<_>>());

    // Close the simple roots under all simple reflections, tracking the
    // coroot of each root through the same reflections.
    let mut pairs: BTreeMap<Vec<Int>, Vec<Int>> = BTreeMap::new();
    let mut work: Vec<Vec<Int>> = Vec::new();
    for i in 0..rank {
        let mut e = vec![0; rank];
        e[i] = 1;
        pairs.insert(e.clone(), e.clone());
        work.push(e);
    }
    while let Some(b) = work.pop() {
        let v = pairs[&b].clone();
        for i in 0..rank {
            // Value of the root b on the i-th simple coroot.
            let on_coroot: Int = (0..rank).map(|j| cartan[(i, j)] * b[j]).sum();
            // Value of the i-th simple root on the coroot v.
            let on_root: Int = (0..rank).map(|k| v[k] * cartan[(k, i)]).sum();
            let mut nb = b.clone();
            nb[i] -= on_coroot;
            let mut nv = v.clone();
            nv[i] -= on_root;
            match pairs.get(&nb) {
                Some(old) => debug_assert_eq!(old, &nv, "coroot tracking must be consistent"),
                None => {
                    pairs.insert(nb.clone(), nv);
                    work.push(nb);
                }
            }
        }
    }
    let expected: usize = components.iter().map(|c| c.root_count()).sum();
    if pairs.len() != expected {
        return Err(Error::Internal(format!(
            "closure produced {} roots, expected {expected}",
            pairs.len()
        )));
    }

    // Basis matrix of X* in weight coordinates.
    let basis = match lattice {
        LatticeChoice::SimplyConnected => Mat::identity(rank),
        LatticeChoice::Adjoint => cartan.transpose(),
        LatticeChoice::Generators(rows) => {
            if rows.is_empty() || rows.iter().any(|r| r.len() != rank) {
                return Err(Error::BadLattice(format!(
                    "generator rows must have length {rank}"
                )));
            }
            let g = Mat::from_rows(rows.clone());
            let h = hermite_basis(&g);
            if h.nrows() != rank {
                return Err(Error::BadLattice("generators do not span full rank".into()));
            }
            let glat = RowLattice::new(&h);
            for j in 0..rank {
                let alpha_j = cartan.col(j);
                if !glat.contains(&alpha_j) {
                    return Err(Error::BadLattice(format!(
                        "root lattice not contained: simple root {} is missing",
                        j + 1
                    )));
                }
            }
            h
        }
    };
    let blat = RowLattice::new(&basis);

    let mut roots: Vec<Vec<Int>> = Vec::with_capacity(pairs.len());
    let mut coroots: Vec<Vec<Int>> = Vec::with_capacity(pairs.len());
    let mut delta: Vec<Vec<Int>> = Vec::with_capacity(pairs.len());
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    let plist: Vec<(Vec<Int>, Vec<Int>)> = pairs.into_iter().collect();
    let mut xs: Vec<Vec<Int>> = Vec::with_capacity(plist.len());
    for (b, _) in &plist {
        let u = cartan.mul_vec(b);
        let x = blat
            .solve(&u)
            .ok_or_else(|| Error::BadLattice("a root falls outside the chosen lattice".into()))?;
        xs.push(x);
    }
    order.sort_by(|&a, &b| xs[a].cmp(&xs[b]));
    for &k in &order {
        roots.push(xs[k].clone());
        coroots.push(basis.mul_vec(&plist[k].1));
        delta.push(plist[k].0.clone());
    }

    let index: HashMap<Vec<Int>, usize> =
        roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
    let mut simples = vec![0usize; rank];
    for (i, d) in delta.iter().enumerate() {
        if d.iter().map(|c| c.abs()).sum::<Int>() == 1 && d.iter().sum::<Int>() == 1 {
            let j = d.iter().position(|&c| c == 1).unwrap();
            simples[j] = i;
        }
    }

    let datum = RootDatum {
        components: components.to_vec(),
        ranges,
        rank,
        cartan,
        lattice_basis: basis,
        roots,
        coroots,
        delta_coords: delta,
        simples,
        index,
    };
    datum.check_invariants()?;
    Ok(datum)
}

/// Canonical row Hermite form basis of the row span (zero rows dropped,
/// pivots positive, entries above pivots reduced).
fn hermite_basis(g: &Mat<Int>) -> Mat<Int> {
    let mut rows: Vec<Vec<i128>> =
        g.rows_vec().into_iter().map(|r| r.into_iter().map(|x| x as i128).collect()).collect();
    let cols = g.ncols();
    let mut pivot_row = 0;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for col in 0..cols {
        // Euclidean elimination in this column below pivot_row.
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..rows.len() {
                if rows[r][col] != 0 {
                    best = match best {
                        None => Some(r),
                        Some(b) if rows[r][col].abs() < rows[b][col].abs() => Some(r),
                        keep => keep,
                    };
                }
            }
            let Some(b) = best else { break };
            rows.swap(pivot_row, b);
            let mut done = true;
            for r in pivot_row + 1..rows.len() {
                if rows[r][col] != 0 {
                    let q = Integer::div_floor(&rows[r][col], &rows[pivot_row][col]);
                    for c in 0..cols {
                        let s = rows[pivot_row][c];
                        rows[r][c] -= q * s;
                    }
                    if rows[r][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < rows.len() && rows[pivot_row][col] != 0 {
            if rows[pivot_row][col] < 0 {
                for c in 0..cols {
                    rows[pivot_row][c] = -rows[pivot_row][c];
                }
            }
            pivots.push((pivot_row, col));
            pivot_row += 1;
        }
    }
    // Reduce entries above each pivot.
    for &(pr, pc) in pivots.iter() {
        for r in 0..pr {
            let q = Integer::div_floor(&rows[r][pc], &rows[pr][pc]);
            if q != 0 {
                for c in 0..cols {
                    let s = rows[pr][c];
                    rows[r][c] -= q * s;
                }
            }
        }
    }
    rows.truncate(pivot_row);
    Mat::from_rows(
        rows.into_iter()
            .map(|r| r.into_iter().map(|x| Int::try_from(x).expect("HNF overflow")).collect())
            .collect(),
    )
}

impl RootDatum {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn components(&self) -> &[TypeSpec] {
        &self.components
    }

    pub fn component_ranges(&self) -> &[std::ops::Range<usize>] {
        &self.ranges
    }

    pub fn label(&self) -> String {
        self.components.iter().map(|c| c.label()).collect::<Vec<_>>().join("x")
    }

    pub fn cartan(&self) -> &Mat<Int> {
        &self.cartan
    }

    pub fn lattice_basis(&self) -> &Mat<Int> {
        &self.lattice_basis
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn root(&self, i: usize) -> &[Int] {
        &self.roots[i]
    }

    pub fn coroot(&self, i: usize) -> &[Int] {
        &self.coroots[i]
    }

    pub fn delta_coords(&self, i: usize) -> &[Int] {
        &self.delta_coords[i]
    }

    /// Indices of the simple roots in Bourbaki order.
    pub fn simple_indices(&self) -> &[usize] {
        &self.simples
    }

    pub fn root_index(&self, coords: &[Int]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    pub fn neg_index(&self, i: usize) -> usize {
        let neg: Vec<Int> = self.roots[i].iter().map(|&c| -c).collect();
        self.index[&neg]
    }

    /// Value of root j on coroot i.
    pub fn pairing(&self, coroot_i: usize, root_j: usize) -> Int {
        dot(&self.coroots[coroot_i], &self.roots[root_j])
    }

    /// True when the root is positive for the standard simple system (first
    /// nonzero simple-root coordinate positive; realizes the generic
    /// functional 1, eps, eps^2, ... for infinitesimal eps).
    pub fn is_positive(&self, i: usize) -> bool {
        lex_positive(&self.delta_coords[i])
    }

    pub fn positive_indices(&self) -> Vec<usize> {
        (0..self.num_roots()).filter(|&i| self.is_positive(i)).collect()
    }

    pub fn height(&self, i: usize) -> Int {
        self.delta_coords[i].iter().sum()
    }

    /// Component that a root belongs to.
    pub fn component_of(&self, i: usize) -> usize {
        let support = self.delta_coords[i].iter().position(|&c| c != 0).unwrap();
        self.ranges.iter().position(|r| r.contains(&support)).unwrap()
    }

    /// Index of the highest root of one component.
    pub fn highest_root(&self, comp: usize) -> usize {
        let range = &self.ranges[comp];
        let mut best: Option<usize> = None;
        for i in 0..self.num_roots() {
            let d = &self.delta_coords[i];
            if d.iter().enumerate().any(|(j, &c)| c != 0 && !range.contains(&j)) {
                continue;
            }
            if d.iter().all(|&c| c == 0) {
                continue;
            }
            best = match best {
                None => Some(i),
                Some(b) if self.height(i) > self.height(b) => Some(i),
                keep => keep,
            };
        }
        best.expect("component has roots")
    }

    /// Primes dividing a coefficient of the highest root of some component,
    /// written in the simple-root basis.
    pub fn bad_primes(&self) -> Vec<u64> {
        let mut ps = BTreeSet::new();
        for comp in 0..self.components.len() {
            let h = self.highest_root(comp);
            for &c in &self.delta_coords[h] {
                if c != 0 {
                    ps.extend(linalg::prime_factors(c.unsigned_abs() as u128));
                }
            }
        }
        ps.into_iter().collect()
    }

    /// Absolute determinant of the Cartan matrix.
    pub fn connection_index(&self) -> u128 {
        linalg::abs_det(&self.cartan)
    }

    /// Primes p for which X*/(root lattice) has p-torsion.
    pub fn torsion_primes_of_char_quotient(&self) -> Vec<u64> {
        let m = Mat::from_rows(self.simples.iter().map(|&i| self.roots[i].clone()).collect());
        let lat = RowLattice::new(&m);
        let mut ps = BTreeSet::new();
        for f in lat.invariant_factors() {
            ps.extend(linalg::prime_factors(f));
        }
        ps.into_iter().collect()
    }

    pub fn weyl_order(&self) -> Result<u128> {
        let mut acc: u128 = 1;
        for c in &self.components {
            acc = acc.checked_mul(c.weyl_order()?).ok_or(Error::OrderOverflow)?;
        }
        Ok(acc)
    }

    pub fn weyl_order_primes(&self) -> Vec<u64> {
        let mut ps = BTreeSet::new();
        for c in &self.components {
            ps.extend(c.weyl_order_primes());
        }
        ps.into_iter().collect()
    }

    /// Reflection in the given root, as a matrix acting on cocharacter
    /// coordinates (column convention).
    pub fn reflection_matrix(&self, root: usize) -> Mat<Int> {
        let n = self.rank;
        let mut m = Mat::identity(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] -= self.coroots[root][i] * self.roots[root][j];
            }
        }
        m
    }

    /// Reflection in the given root, as a permutation of the root list.
    pub fn reflection_perm(&self, root: usize) -> Vec<u16> {
        (0..self.num_roots())
            .map(|i| {
                let pair = self.pairing(root, i);
                let image: Vec<Int> = self.roots[i]
                    .iter()
                    .zip(&self.roots[root])
                    .map(|(&x, &a)| x - pair * a)
                    .collect();
                self.index[&image] as u16
            })
            .collect()
    }

    /// Smallest closed subsystem containing the given roots: the integer span
    /// intersected with the root set.
    pub fn closure(&self, seeds: &[usize]) -> Subsystem {
        if seeds.is_empty() {
            return Subsystem { members: vec![] };
        }
        let m = Mat::from_rows(seeds.iter().map(|&i| self.roots[i].clone()).collect());
        let lat = RowLattice::new(&m);
        let members =
            (0..self.num_roots()).filter(|&i| lat.contains(&self.roots[i])).collect();
        Subsystem { members }
    }

    /// Rational span intersected with the root set.
    pub fn rational_closure(&self, seeds: &[usize]) -> Subsystem {
        if seeds.is_empty() {
            return Subsystem { members: vec![] };
        }
        let base: Vec<Vec<Rat>> = seeds
            .iter()
            .map(|&i| self.roots[i].iter().map(|&c| Rat::from_integer(c)).collect())
            .collect();
        let base_rank = linalg::rank(&Mat::from_rows(base.clone()));
        let members = (0..self.num_roots())
            .filter(|&i| {
                let mut rows = base.clone();
                rows.push(self.roots[i].iter().map(|&c| Rat::from_integer(c)).collect());
                linalg::rank(&Mat::from_rows(rows)) == base_rank
            })
            .collect();
        Subsystem { members }
    }

    /// Is the set of root indices closed (integer span meets no new roots)?
    pub fn is_closed(&self, members: &[usize]) -> bool {
        let set: BTreeSet<usize> = members.iter().copied().collect();
        self.closure(members).members.iter().all(|i| set.contains(i))
            && set.len() == self.closure(members).members.len()
    }

    /// Base of a (closed, symmetric) subsystem: the indecomposable positive
    /// members, positivity taken from the fixed generic functional.
    pub fn subsystem_basis(&self, sub: &Subsystem) -> Vec<usize> {
        let set: BTreeSet<usize> = sub.members.iter().copied().collect();
        let positives: Vec<usize> =
            sub.members.iter().copied().filter(|&i| self.is_positive(i)).collect();
        let pos_set: BTreeSet<Vec<Int>> =
            positives.iter().map(|&i| self.roots[i].clone()).collect();
        debug_assert_eq!(positives.len() * 2, set.len(), "subsystem must be symmetric");
        positives
            .iter()
            .copied()
            .filter(|&i| {
                !positives.iter().any(|&j| {
                    if i == j {
                        return false;
                    }
                    let diff: Vec<Int> =
                        self.roots[i].iter().zip(&self.roots[j]).map(|(&a, &b)| a - b).collect();
                    pos_set.contains(&diff)
                })
            })
            .collect()
    }

    /// Fundamental coweights of a subsystem basis: rational cocharacter
    /// vectors dual to the basis inside the subsystem's span.
    pub fn fundamental_coweights(&self, basis: &[usize]) -> Result<CoweightReport> {
        let k = basis.len();
        if k == 0 {
            return Ok(CoweightReport {
                basis: vec![],
                coweights: vec![],
                scaling: vec![],
                denominator_primes: vec![],
                dual_connection_index: 1,
            });
        }
        let mut c0 = Mat::<Rat>::zeros(k, k);
        for a in 0..k {
            for b in 0..k {
                c0[(a, b)] = Rat::from_integer(self.pairing(basis[a], basis[b]));
            }
        }
        let inv = linalg::inverse(&c0)
            .ok_or_else(|| Error::NotClosed("subsystem basis is not linearly independent".into()))?;
        let int_c0 = c0.map(|r| r.to_integer());
        let dual_index = linalg::abs_det(&int_c0);

        let mut coweights = Vec::with_capacity(k);
        let mut scaling = Vec::with_capacity(k);
        let mut denom_primes: BTreeSet<u64> = BTreeSet::new();
        for a in 0..k {
            let mut w = vec![Rat::zero(); self.rank];
            let mut n_a: Int = 1;
            for b in 0..k {
                let coeff = inv[(a, b)];
                n_a = n_a.lcm(coeff.denom());
                for (t, wt) in w.iter_mut().enumerate() {
                    *wt += coeff * Rat::from_integer(self.coroots[basis[b]][t]);
                }
            }
            for &p in &linalg::prime_factors(n_a.unsigned_abs() as u128) {
                denom_primes.insert(p);
            }
            scaling.push(n_a);
            coweights.push(w);
        }
        Ok(CoweightReport {
            basis: basis.to_vec(),
            coweights,
            scaling,
            denominator_primes: denom_primes.into_iter().collect(),
            dual_connection_index: dual_index,
        })
    }

    /// Torsion primes of (root lattice)/(subsystem root lattice).
    pub fn subsystem_torsion_primes(&self, members: &[usize]) -> Vec<u64> {
        if members.is_empty() {
            return vec![];
        }
        let m = Mat::from_rows(members.iter().map(|&i| self.delta_coords[i].clone()).collect());
        let lat = RowLattice::new(&m);
        let mut ps = BTreeSet::new();
        for f in lat.invariant_factors() {
            ps.extend(linalg::prime_factors(f));
        }
        ps.into_iter().collect()
    }

    fn check_invariants(&self) -> Result<()> {
        for (i, &s) in self.simples.iter().enumerate() {
            let mut e = vec![0; self.rank];
            e[i] = 1;
            if self.delta_coords[s] != e {
                return Err(Error::Internal("simple root indexing broken".into()));
            }
        }
        for i in 0..self.num_roots() {
            if dot(&self.coroots[i], &self.roots[i]) != 2 {
                return Err(Error::Internal("a root does not pair to 2 with its coroot".into()));
            }
            let neg: Vec<Int> = self.roots[i].iter().map(|&c| -c).collect();
            if !self.index.contains_key(&neg) {
                return Err(Error::Internal("root set is not symmetric".into()));
            }
        }
        Ok(())
    }
}

fn lex_positive(v: &[Int]) -> bool {
    for &c in v {
        if c != 0 {
            return c > 0;
        }
    }
    false
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// A subset of the root list, sorted ascending. Plain data; operations live
/// on the datum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subsystem {
    pub members: Vec<usize>,
}

impl Subsystem {
    pub fn from_members(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Subsystem { members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }
}

/// Fundamental coweights of a subsystem basis plus the denominators that
/// decide whether the construction is p-integral.
#[derive(Debug, Clone)]
pub struct CoweightReport {
    pub basis: Vec<usize>,
    /// Rational cocharacter coordinates, one vector per basis element.
    pub coweights: Vec<Vec<Rat>>,
    /// Minimal positive integer clearing each coweight into the subsystem
    /// coroot lattice.
    pub scaling: Vec<Int>,
    pub denominator_primes: Vec<u64>,
    /// Absolute Cartan determinant of the subsystem (equal for the dual).
    pub dual_connection_index: u128,
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn datum(kind: SimpleType, rank: usize, lattice: LatticeChoice) -> RootDatum {
        build_root_datum(&[TypeSpec::new(kind, rank).unwrap()], &lattice).unwrap()
    }

    #[test]
    fn root_counts_match_closure_generation() {
        for (kind, rank, count) in [
            (SimpleType::A, 1, 2),
            (SimpleType::A, 2, 6),
            (SimpleType::A, 5, 30),
            (SimpleType::B, 2, 8),
            (SimpleType::B, 3, 18),
            (SimpleType::C, 3, 18),
            (SimpleType::D, 4, 24),
            (SimpleType::E, 6, 72),
            (SimpleType::E, 7, 126),
            (SimpleType::E, 8, 240),
            (SimpleType::F, 4, 48),
            (SimpleType::G, 2, 12),
        ] {
            let d = datum(kind, rank, LatticeChoice::Adjoint);
            assert_eq!(d.num_roots(), count, "{kind:?}{rank}");
            let pos = d.positive_indices();
            assert_eq!(pos.len() * 2, count);
        }
    }

    #[test]
    fn product_datum() {
        let d = build_root_datum(
            &[TypeSpec::new(SimpleType::A, 2).unwrap(), TypeSpec::new(SimpleType::B, 2).unwrap()],
            &LatticeChoice::SimplyConnected,
        )
        .unwrap();
        assert_eq!(d.rank(), 4);
        assert_eq!(d.num_roots(), 6 + 8);
        assert_eq!(d.label(), "A2xB2");
        assert_eq!(d.connection_index(), 3 * 2);
        assert_eq!(d.bad_primes(), vec![2]);
    }

    #[test]
    fn bad_primes_table() {
        let rows: Vec<(SimpleType, usize, Vec<u64>)> = vec![
            (SimpleType::A, 1, vec![]),
            (SimpleType::A, 6, vec![]),
            (SimpleType::B, 2, vec![2]),
            (SimpleType::B, 6, vec![2]),
            (SimpleType::C, 3, vec![2]),
            (SimpleType::D, 4, vec![2]),
            (SimpleType::D, 6, vec![2]),
            (SimpleType::E, 6, vec![2, 3]),
            (SimpleType::E, 7, vec![2, 3]),
            (SimpleType::E, 8, vec![2, 3, 5]),
            (SimpleType::F, 4, vec![2, 3]),
            (SimpleType::G, 2, vec![2, 3]),
        ];
        for (kind, rank, want) in rows {
            let d = datum(kind, rank, LatticeChoice::Adjoint);
            assert_eq!(d.bad_primes(), want, "{kind:?}{rank}");
        }
    }

    #[test]
    fn connection_index_table() {
        for (kind, rank, want) in [
            (SimpleType::A, 2, 3),
            (SimpleType::A, 4, 5),
            (SimpleType::B, 3, 2),
            (SimpleType::C, 4, 2),
            (SimpleType::D, 5, 4),
            (SimpleType::E, 6, 3),
            (SimpleType::E, 7, 2),
            (SimpleType::E, 8, 1),
            (SimpleType::F, 4, 1),
            (SimpleType::G, 2, 1),
        ] {
            let d = datum(kind, rank, LatticeChoice::Adjoint);
            assert_eq!(d.connection_index(), want, "{kind:?}{rank}");
        }
    }

    #[test]
    fn connection_index_divides_weyl_order_rank_le_8() {
        let mut specs = vec![];
        for n in 1..=8 {
            specs.push((SimpleType::A, n));
        }
        for n in 2..=8 {
            specs.push((SimpleType::B, n));
            specs.push((SimpleType::C, n));
        }
        for n in 3..=8 {
            specs.push((SimpleType::D, n));
        }
        specs.extend([(SimpleType::E, 6), (SimpleType::E, 7), (SimpleType::E, 8)]);
        specs.push((SimpleType::F, 4));
        specs.push((SimpleType::G, 2));
        for (kind, rank) in specs {
            let d = datum(kind, rank, LatticeChoice::Adjoint);
            let w = d.weyl_order().unwrap();
            assert_eq!(w % d.connection_index(), 0, "{kind:?}{rank}");
        }
    }

    #[test]
    fn torsion_primes_of_char_quotient_examples() {
        let sc = datum(SimpleType::A, 1, LatticeChoice::SimplyConnected);
        assert_eq!(sc.torsion_primes_of_char_quotient(), vec![2]);
        let adj = datum(SimpleType::A, 1, LatticeChoice::Adjoint);
        assert_eq!(adj.torsion_primes_of_char_quotient(), Vec::<u64>::new());
        let a2sc = datum(SimpleType::A, 2, LatticeChoice::SimplyConnected);
        assert_eq!(a2sc.torsion_primes_of_char_quotient(), vec![3]);
    }

    #[test]
    fn intermediate_lattice_validation() {
        // For sc A1 the weight lattice is Z; the root lattice is 2Z. The rows
        // below give X* = 2Z (adjoint inside weight coordinates).
        let d = build_root_datum(
            &[TypeSpec::new(SimpleType::A, 1).unwrap()],
            &LatticeChoice::Generators(vec![vec![2]]),
        )
        .unwrap();
        assert_eq!(d.torsion_primes_of_char_quotient(), Vec::<u64>::new());
        // 3Z does not contain the root lattice.
        let bad = build_root_datum(
            &[TypeSpec::new(SimpleType::A, 1).unwrap()],
            &LatticeChoice::Generators(vec![vec![3]]),
        );
        assert!(bad.is_err());
        // D4 intermediate: between root lattice (index 4 in weights) there are
        // index-2 lattices; take the one generated by roots plus one weight
        // vector of order 2 in the quotient.
        let c = TypeSpec::new(SimpleType::D, 4).unwrap().cartan();
        let mut gens: Vec<Vec<Int>> = (0..4).map(|j| c.col(j)).collect();
        gens.push(vec![1, 0, 0, 1]);
        let d4 = build_root_datum(
            &[TypeSpec::new(SimpleType::D, 4).unwrap()],
            &LatticeChoice::Generators(gens),
        )
        .unwrap();
        assert_eq!(d4.torsion_primes_of_char_quotient(), vec![2]);
        assert_eq!(d4.connection_index(), 4);
    }

    #[test]
    fn closure_of_simples_is_everything() {
        let d = datum(SimpleType::A, 2, LatticeChoice::Adjoint);
        let sub = d.closure(&d.simple_indices().to_vec());
        assert_eq!(sub.len(), 6);
        let g = datum(SimpleType::G, 2, LatticeChoice::Adjoint);
        let sub = g.closure(&g.simple_indices().to_vec());
        assert_eq!(sub.len(), 12);
    }

    #[test]
    fn closure_operator_laws() {
        // Extensive, monotone, idempotent on a few concrete subsystems.
        let d = datum(SimpleType::B, 3, LatticeChoice::Adjoint);
        let all: Vec<usize> = (0..d.num_roots()).collect();
        for take in 1..=3usize {
            let seeds: Vec<usize> = all.iter().copied().step_by(7 / take + 1).take(take).collect();
            let cl = d.closure(&seeds);
            for &s in &seeds {
                assert!(cl.contains(s), "extensive");
            }
            let cl2 = d.closure(&cl.members);
            assert_eq!(cl.members, cl2.members, "idempotent");
            let bigger: Vec<usize> = seeds.iter().copied().chain([all[0]]).collect();
            let clb = d.closure(&bigger);
            assert!(cl.members.iter().all(|i| clb.contains(*i)), "monotone");
        }
    }

    #[test]
    fn b2_long_roots_rational_closure() {
        let d = datum(SimpleType::B, 2, LatticeChoice::Adjoint);
        // Long roots: the two with squared length twice the short one; in
        // delta coordinates these are a1 and a1 + 2 a2 (and negatives).
        let long_pos: Vec<usize> = (0..d.num_roots())
            .filter(|&i| {
                let dcs = d.delta_coords(i);
                dcs == [1, 0] || dcs == [1, 2]
            })
            .collect();
        assert_eq!(long_pos.len(), 2);
        let with_negs: Vec<usize> =
            long_pos.iter().flat_map(|&i| [i, d.neg_index(i)]).collect();
        let cl = d.closure(&with_negs);
        assert_eq!(cl.len(), 4, "long roots form a closed A1xA1");
        assert!(d.is_closed(&cl.members));
        assert_eq!(d.subsystem_torsion_primes(&cl.members), vec![2]);
        // The rational closure picks up the short roots: strictly larger.
        let rcl = d.rational_closure(&with_negs);
        assert_eq!(rcl.len(), 8);
        // A single short-root pair rationally closes to itself.
        let short = (0..d.num_roots()).find(|&i| d.delta_coords(i) == [1, 1]).unwrap();
        let pair = vec![short, d.neg_index(short)];
        assert_eq!(d.rational_closure(&pair).len(), 2);
        // Basis of the long subsystem: two orthogonal elements spanning rank 2.
        let basis = d.subsystem_basis(&cl);
        assert_eq!(basis.len(), 2);
        let cw = d.fundamental_coweights(&basis).unwrap();
        assert_eq!(cw.denominator_primes, vec![2]);
        assert_eq!(cw.dual_connection_index, 4);
    }

    #[test]
    fn full_basis_is_simple_roots() {
        for (kind, rank) in [(SimpleType::A, 2), (SimpleType::B, 3), (SimpleType::G, 2)] {
            for lattice in [LatticeChoice::Adjoint, LatticeChoice::SimplyConnected] {
                let d = datum(kind, rank, lattice);
                let all = Subsystem::from_members((0..d.num_roots()).collect());
                let mut basis = d.subsystem_basis(&all);
                basis.sort_unstable();
                let mut simples = d.simple_indices().to_vec();
                simples.sort_unstable();
                assert_eq!(basis, simples, "{kind:?}{rank}");
            }
        }
    }

    #[test]
    fn coweights_a2_single_alpha2() {
        let d = datum(SimpleType::A, 2, LatticeChoice::Adjoint);
        let a2 = d.simple_indices()[1];
        let rep = d.fundamental_coweights(&[a2]).unwrap();
        assert_eq!(rep.scaling, vec![2]);
        assert_eq!(rep.denominator_primes, vec![2]);
        // The coweight is half the coroot of alpha_2.
        let coroot = d.coroot(a2);
        for (w, &c) in rep.coweights[0].iter().zip(coroot) {
            assert_eq!(*w * Rat::from_integer(2), Rat::from_integer(c));
        }
        // Duality on the basis.
        let val: Rat = rep.coweights[0]
            .iter()
            .zip(d.root(a2))
            .map(|(w, &x)| *w * Rat::from_integer(x))
            .sum();
        assert_eq!(val, Rat::one());
    }

    #[test]
    fn coweights_integral_for_e8() {
        let d = datum(SimpleType::E, 8, LatticeChoice::Adjoint);
        let rep = d.fundamental_coweights(&d.simple_indices().to_vec()).unwrap();
        assert!(rep.denominator_primes.is_empty());
        assert!(rep.scaling.iter().all(|&n| n == 1));
        assert_eq!(rep.dual_connection_index, 1);
    }

    #[test]
    fn coweight_duality_property() {
        // Pairing of coweight a with basis root b is delta_{ab}, across types
        // and lattices.
        for (kind, rank) in [(SimpleType::B, 3), (SimpleType::D, 4), (SimpleType::G, 2)] {
            for lattice in [LatticeChoice::Adjoint, LatticeChoice::SimplyConnected] {
                let d = datum(kind, rank, lattice);
                // Use a non-full subsystem: drop the last simple root.
                let seeds: Vec<usize> = d.simple_indices()[..rank - 1]
                    .iter()
                    .flat_map(|&i| [i, d.neg_index(i)])
                    .collect();
                let sub = d.closure(&seeds);
                let basis = d.subsystem_basis(&sub);
                let rep = d.fundamental_coweights(&basis).unwrap();
                for (a, w) in rep.coweights.iter().enumerate() {
                    for (b, &root) in basis.iter().enumerate() {
                        let v: Rat = w
                            .iter()
                            .zip(d.root(root))
                            .map(|(c, &x)| *c * Rat::from_integer(x))
                            .sum();
                        let want = if a == b { Rat::one() } else { Rat::zero() };
                        assert_eq!(v, want);
                    }
                }
            }
        }
    }

    #[test]
    fn reflection_preserves_roots_and_pairing() {
        let d = datum(SimpleType::F, 4, LatticeChoice::Adjoint);
        for &s in d.simple_indices() {
            let mat = d.reflection_matrix(s);
            let perm = d.reflection_perm(s);
            // Permutation is an involution and matches the matrix through the
            // pairing.
            for i in 0..d.num_roots() {
                assert_eq!(perm[perm[i] as usize] as usize, i);
            }
            for i in 0..d.num_roots() {
                let wy = mat.mul_vec(d.coroot(i));
                let wx = d.root(perm[i] as usize);
                assert_eq!(dot(&wy, wx), 2, "reflected pair must still pair to 2");
            }
        }
    }

    #[test]
    fn rank_validation() {
        assert!(TypeSpec::new(SimpleType::B, 1).is_err());
        assert!(TypeSpec::new(SimpleType::D, 2).is_err());
        assert!(TypeSpec::new(SimpleType::E, 5).is_err());
        assert!(TypeSpec::new(SimpleType::G, 3).is_err());
        assert!(TypeSpec::new(SimpleType::A, 1).is_ok());
        assert!(TypeSpec::new(SimpleType::D, 3).is_ok());
    }
}
