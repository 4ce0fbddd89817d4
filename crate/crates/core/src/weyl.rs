//! Weyl groups: explicit breadth-first enumeration, element invariants
//! (order, characteristic polynomial, ellipticity), conjugacy classes, the
//! longest element, Coxeter elements, and diagram-automorphism fixed
//! subgroups.
//!
//! Elements act on the cocharacter lattice by an integer matrix; the induced
//! permutation of the (spanning) root list is cached and serves as the
//! equality/hash key, so group-level bookkeeping never touches the matrices.

use std::collections::HashMap;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::Zero;

use crate::linalg::{self, Mat};
use crate::rootsys::{RootDatum, SimpleType, TypeSpec};
use crate::{Error, Int, Rat, Result};

/// Default enumeration bound: large enough for every irreducible type of
/// rank ≤ 6 (the biggest, E6, has 51840 elements).
pub const DEFAULT_CAP: u128 = 60_000;

/// One Weyl-group element.
#[derive(Debug, Clone)]
pub struct WeylElement {
    /// Action on cocharacter coordinates (column convention).
    pub matrix: Mat<Int>,
    /// Induced permutation of the root list: root `i` maps to `perm[i]`.
    pub perm: Vec<u16>,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        // Roots span the character space rationally, so the root permutation
        // determines the matrix.
        self.perm == other.perm
    }
}

impl Eq for WeylElement {}

impl std::hash::Hash for WeylElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.perm.hash(state);
    }
}

impl WeylElement {
    pub fn identity(d: &RootDatum) -> Self {
        WeylElement {
            matrix: Mat::identity(d.rank()),
            perm: (0..d.num_roots() as u16).collect(),
        }
    }

    /// The simple reflection at position `k` of the simple-root list.
    pub fn simple_reflection(d: &RootDatum, k: usize) -> Self {
        let root = d.simple_indices()[k];
        WeylElement {
            matrix: d.reflection_matrix(root),
            perm: d.reflection_perm(root),
        }
    }

    /// Function composition: `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Self) -> Self {
        WeylElement {
            matrix: self.matrix.mul_mat(&other.matrix),
            perm: other
                .perm
                .iter()
                .map(|&r| self.perm[r as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut perm = vec![0u16; self.perm.len()];
        for (i, &img) in self.perm.iter().enumerate() {
            perm[img as usize] = i as u16;
        }
        let inv_rat = linalg::inverse(&self.matrix.map(|&x| Rat::from_integer(x)))
            .expect("Weyl matrices are unimodular");
        let matrix = inv_rat.map(|r| {
            debug_assert!(r.is_integer());
            r.to_integer()
        });
        WeylElement { matrix, perm }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &img)| img as usize == i)
    }

    /// Index of the image of root `i`.
    pub fn apply_root(&self, i: usize) -> usize {
        self.perm[i] as usize
    }

    /// Image of a cocharacter coordinate vector.
    pub fn apply_cochar(&self, v: &[Int]) -> Vec<Int> {
        self.matrix.mul_vec(v)
    }

    /// Multiplicative order: the root permutation is faithful, so this is the
    /// least common multiple of its cycle lengths.
    pub fn order(&self) -> u64 {
        let n = self.perm.len();
        let mut seen = vec![false; n];
        let mut ord: u64 = 1;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len: u64 = 0;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = self.perm[cur] as usize;
                len += 1;
            }
            ord = ord.lcm(&len);
        }
        ord
    }

    /// Characteristic polynomial of the cocharacter action, ascending
    /// coefficients, monic.
    pub fn char_poly(&self) -> Vec<Int> {
        linalg::char_poly(&self.matrix)
    }

    /// No nonzero fixed vector on the cocharacter space, i.e. 1 is not an
    /// eigenvalue.
    pub fn is_elliptic(&self) -> bool {
        !linalg::poly_eval(&self.char_poly(), 1).is_zero()
    }
}

/// Product of the simple reflections in the stored (Bourbaki) order.
pub fn coxeter_element(d: &RootDatum) -> WeylElement {
    let mut w = WeylElement::identity(d);
    for k in 0..d.rank() {
        w = w.compose(&WeylElement::simple_reflection(d, k));
    }
    w
}

/// Whether the Weyl group of this irreducible type contains −identity:
/// every type except A_n (n ≥ 2), D_odd, and E6.
pub fn contains_minus_one(ts: &TypeSpec) -> bool {
    match ts.kind {
        SimpleType::A => ts.rank == 1,
        SimpleType::B | SimpleType::C | SimpleType::F | SimpleType::G => true,
        SimpleType::D => ts.rank % 2 == 0,
        SimpleType::E => ts.rank != 6,
    }
}

/// One conjugacy class, summarized through a representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassInfo {
    /// Index of the class representative in the group's element list.
    pub rep: usize,
    pub size: u128,
    pub order: u64,
    /// Ascending coefficients, monic; shared by the whole class.
    pub char_poly: Vec<Int>,
    pub centralizer_order: u128,
}

/// A diagram automorphism: a permutation of the simple roots preserving the
/// Cartan matrix, extended to the whole root list.
#[derive(Debug, Clone)]
pub struct DiagramAutomorphism {
    /// `simple_perm[k]` is the position simple root `k` is sent to.
    pub simple_perm: Vec<usize>,
    /// Induced permutation of the root list.
    pub root_perm: Vec<u16>,
}

/// Build a diagram automorphism from its action on simple-root positions,
/// validating that it preserves the Cartan matrix.
pub fn diagram_automorphism(d: &RootDatum, simple_perm: &[usize]) -> Result<DiagramAutomorphism> {
    let n = d.rank();
    if simple_perm.len() != n {
        return Err(Error::BadAutomorphism(format!(
            "expected {} entries, got {}",
            n,
            simple_perm.len()
        )));
    }
    let mut hit = vec![false; n];
    for &img in simple_perm {
        if img >= n || hit[img] {
            return Err(Error::BadAutomorphism(
                "not a permutation of the simple positions".into(),
            ));
        }
        hit[img] = true;
    }
    let c = d.cartan();
    for i in 0..n {
        for j in 0..n {
            if c[(simple_perm[i], simple_perm[j])] != c[(i, j)] {
                return Err(Error::BadAutomorphism(format!(
                    "Cartan matrix not preserved at ({i},{j})"
                )));
            }
        }
    }
    // Image of a root: permuting its simple-root coordinates, realized on
    // character coordinates through the simple roots themselves.
    let simples = d.simple_indices();
    let root_perm = (0..d.num_roots())
        .map(|i| {
            let b = d.delta_coords(i);
            let mut x = vec![0; d.root(0).len()];
            for (k, &bk) in b.iter().enumerate() {
                let xr = d.root(simples[simple_perm[k]]);
                for (xc, &rc) in x.iter_mut().zip(xr) {
                    *xc += bk * rc;
                }
            }
            d.root_index(&x)
                .expect("diagram automorphism permutes the root list") as u16
        })
        .collect();
    Ok(DiagramAutomorphism {
        simple_perm: simple_perm.to_vec(),
        root_perm,
    })
}

/// A fully enumerated Weyl group.
#[derive(Debug)]
pub struct WeylGroup {
    datum: Arc<RootDatum>,
    elements: Vec<WeylElement>,
    /// Root-permutation key → element index.
    index: HashMap<Vec<u16>, u32>,
    /// The simple reflections, in simple-root order.
    generators: Vec<WeylElement>,
}

/// Enumerate the full Weyl group of `datum` by breadth-first closure over the
/// simple reflections. Refuses (rather than thrashes) when the closed-form
/// order exceeds `cap`.
pub fn generate_group(datum: &Arc<RootDatum>, cap: u128) -> Result<WeylGroup> {
    let order = datum.weyl_order()?;
    if order > cap {
        return Err(Error::CapExceeded { order, cap });
    }
    let generators: Vec<WeylElement> = (0..datum.rank())
        .map(|k| WeylElement::simple_reflection(datum, k))
        .collect();
    let mut elements = vec![WeylElement::identity(datum)];
    let mut index = HashMap::with_capacity(order as usize);
    index.insert(elements[0].perm.clone(), 0u32);
    let mut next = 0usize;
    while next < elements.len() {
        let base = elements[next].clone();
        next += 1;
        for s in &generators {
            let cand = base.compose(s);
            if !index.contains_key(&cand.perm) {
                index.insert(cand.perm.clone(), elements.len() as u32);
                elements.push(cand);
            }
        }
    }
    debug_assert_eq!(elements.len() as u128, order);
    Ok(WeylGroup {
        datum: Arc::clone(datum),
        elements,
        index,
        generators,
    })
}

impl WeylGroup {
    pub fn datum(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn order(&self) -> u128 {
        self.elements.len() as u128
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &WeylElement {
        &self.elements[i]
    }

    pub fn generators(&self) -> &[WeylElement] {
        &self.generators
    }

    pub fn position(&self, w: &WeylElement) -> Option<usize> {
        self.index.get(&w.perm).map(|&i| i as usize)
    }

    /// The unique element sending every positive root to a negative one.
    pub fn longest_element(&self) -> &WeylElement {
        let positives = self.datum.positive_indices();
        let w0 = self
            .elements
            .iter()
            .find(|w| positives.iter().all(|&i| !self.datum.is_positive(w.apply_root(i))))
            .expect("every finite Weyl group has a longest element");
        // It permutes −Δ ∪ Δ pairs and is an involution.
        assert!(w0.compose(w0).is_identity());
        for &s in self.datum.simple_indices() {
            let img = w0.apply_root(s);
            assert!(
                self.datum
                    .simple_indices()
                    .iter()
                    .any(|&t| self.datum.neg_index(t) == img),
                "longest element must send the basis to its negative"
            );
        }
        w0
    }

    /// Whether −identity belongs to the group, by direct lookup.
    pub fn has_minus_one(&self) -> bool {
        let neg: Vec<u16> = (0..self.datum.num_roots())
            .map(|i| self.datum.neg_index(i) as u16)
            .collect();
        self.index.contains_key(&neg)
    }

    /// All conjugacy classes, computed by orbiting under conjugation by the
    /// simple reflections; sorted by (element order, class size, char poly).
    pub fn conjugacy_classes(&self) -> Vec<ClassInfo> {
        let n = self.elements.len();
        let gens: Vec<&[u16]> = self.generators.iter().map(|g| g.perm.as_slice()).collect();
        let mut visited = vec![false; n];
        let mut classes = Vec::new();
        for seed in 0..n {
            if visited[seed] {
                continue;
            }
            visited[seed] = true;
            let mut orbit = vec![seed];
            let mut qi = 0;
            while qi < orbit.len() {
                let wp = self.elements[orbit[qi]].perm.clone();
                qi += 1;
                for sp in &gens {
                    // Simple reflections are involutions: s ∘ w ∘ s⁻¹ = s ∘ w ∘ s.
                    let conj: Vec<u16> = (0..wp.len())
                        .map(|r| sp[wp[sp[r] as usize] as usize])
                        .collect();
                    let j = self.index[&conj] as usize;
                    if !visited[j] {
                        visited[j] = true;
                        orbit.push(j);
                    }
                }
            }
            let rep = &self.elements[seed];
            classes.push(ClassInfo {
                rep: seed,
                size: orbit.len() as u128,
                order: rep.order(),
                char_poly: rep.char_poly(),
                centralizer_order: n as u128 / orbit.len() as u128,
            });
        }
        classes.sort_by(|a, b| {
            (a.order, a.size, &a.char_poly).cmp(&(b.order, b.size, &b.char_poly))
        });
        classes
    }

    /// True iff no element has order `N·p` with `N > 1`.
    pub fn no_order_multiple(&self, p: u64) -> bool {
        self.elements
            .iter()
            .all(|w| {
                let o = w.order();
                o % p != 0 || o == p
            })
    }

    /// Indices of all elements commuting with the diagram automorphism.
    pub fn fixed_subgroup(&self, sigma: &DiagramAutomorphism) -> Vec<usize> {
        let sp = &sigma.root_perm;
        (0..self.elements.len())
            .filter(|&i| {
                let wp = &self.elements[i].perm;
                (0..wp.len()).all(|r| sp[wp[r] as usize] == wp[sp[r] as usize])
            })
            .collect()
    }

    /// Order of the subgroup fixed (element-wise under conjugation) by the
    /// diagram automorphism.
    pub fn diagram_fixed_subgroup(&self, sigma: &DiagramAutomorphism) -> u128 {
        self.fixed_subgroup(sigma).len() as u128
    }

    /// First element (in enumeration order) with the given characteristic
    /// polynomial, ascending monic coefficients.
    pub fn find_char_poly(&self, target: &[Int]) -> Option<usize> {
        self.elements.iter().position(|w| w.char_poly() == target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::poly_mul;
    use crate::rootsys::{build_root_datum, LatticeChoice};
    use proptest::prelude::*;

    fn datum(kind: SimpleType, rank: usize) -> Arc<RootDatum> {
        Arc::new(
            build_root_datum(
                &[TypeSpec::new(kind, rank).unwrap()],
                &LatticeChoice::SimplyConnected,
            )
            .unwrap(),
        )
    }

    fn group(kind: SimpleType, rank: usize) -> WeylGroup {
        generate_group(&datum(kind, rank), DEFAULT_CAP).unwrap()
    }

    #[test]
    fn orders_match_closed_forms() {
        for (kind, rank, want) in [
            (SimpleType::A, 1, 2u128),
            (SimpleType::A, 2, 6),
            (SimpleType::A, 3, 24),
            (SimpleType::B, 2, 8),
            (SimpleType::B, 3, 48),
            (SimpleType::C, 3, 48),
            (SimpleType::D, 4, 192),
            (SimpleType::G, 2, 12),
            (SimpleType::F, 4, 1152),
        ] {
            let g = group(kind, rank);
            assert_eq!(g.order(), want, "{kind:?}{rank}");
            assert_eq!(
                g.order(),
                TypeSpec::new(kind, rank).unwrap().weyl_order().unwrap()
            );
        }
    }

    #[test]
    fn cap_refusal() {
        let d = datum(SimpleType::D, 4);
        match generate_group(&d, 100) {
            Err(Error::CapExceeded { order: 192, cap: 100 }) => {}
            other => panic!("expected cap refusal, got {other:?}"),
        }
    }

    #[test]
    fn a2_conjugacy_classes() {
        let g = group(SimpleType::A, 2);
        let classes = g.conjugacy_classes();
        assert_eq!(classes.len(), 3);
        let mut sizes: Vec<u128> = classes.iter().map(|c| c.size).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(classes.iter().map(|c| c.size).sum::<u128>(), 6);
        for c in &classes {
            assert_eq!(c.size * c.centralizer_order, 6);
        }
    }

    #[test]
    fn longest_elements() {
        // Rank 1: the single reflection.
        let g = group(SimpleType::A, 1);
        let w0 = g.longest_element();
        assert_eq!(w0.order(), 2);
        assert!(g.has_minus_one());

        // A2: an involution that is not −identity.
        let g = group(SimpleType::A, 2);
        let w0 = g.longest_element();
        assert_eq!(w0.order(), 2);
        assert_ne!(w0.matrix, Mat::identity(2).map(|&x: &Int| -x));
        assert!(!g.has_minus_one());

        // D4: −identity itself.
        let g = group(SimpleType::D, 4);
        let w0 = g.longest_element();
        assert_eq!(w0.matrix, Mat::identity(4).map(|&x: &Int| -x));
        assert!(g.has_minus_one());
    }

    #[test]
    fn minus_one_formula_matches_search() {
        for (kind, rank) in [
            (SimpleType::A, 1),
            (SimpleType::A, 2),
            (SimpleType::A, 3),
            (SimpleType::B, 2),
            (SimpleType::C, 3),
            (SimpleType::D, 3),
            (SimpleType::D, 4),
            (SimpleType::G, 2),
        ] {
            let ts = TypeSpec::new(kind, rank).unwrap();
            let g = group(kind, rank);
            assert_eq!(contains_minus_one(&ts), g.has_minus_one(), "{kind:?}{rank}");
        }
        // D3 ≅ A3: both lack −identity.
        assert!(!contains_minus_one(&TypeSpec::new(SimpleType::D, 3).unwrap()));
    }

    #[test]
    fn coxeter_elements() {
        let d = datum(SimpleType::A, 1);
        let cox = coxeter_element(&d);
        assert_eq!(cox.char_poly(), vec![1, 1]); // t + 1
        assert_eq!(cox.order(), 2);

        let d = datum(SimpleType::A, 2);
        assert_eq!(coxeter_element(&d).order(), 3);

        let d = datum(SimpleType::G, 2);
        let cox = coxeter_element(&d);
        assert_eq!(cox.order(), 6);
        assert!(cox.is_elliptic());
    }

    #[test]
    fn d4_elliptic_char_poly_family() {
        // l = 4, i = 1: (t³+1)(t+1), elliptic, order lcm(6, 2) = 6.
        let g = group(SimpleType::D, 4);
        let target = poly_mul(&[1, 0, 0, 1], &[1, 1]);
        let idx = g.find_char_poly(&target).expect("witness exists");
        let w = g.element(idx);
        assert!(w.is_elliptic());
        assert_eq!(w.order(), 6);
    }

    #[test]
    fn d4_fixed_subgroups() {
        let d = datum(SimpleType::D, 4);
        let g = generate_group(&d, DEFAULT_CAP).unwrap();

        // Identity automorphism fixes everything.
        let id = diagram_automorphism(&d, &[0, 1, 2, 3]).unwrap();
        assert_eq!(g.diagram_fixed_subgroup(&id), 192);

        // Swapping the two fork nodes: fixed subgroup of order |W(B3)| = 48.
        let swap = diagram_automorphism(&d, &[0, 1, 3, 2]).unwrap();
        assert_eq!(g.diagram_fixed_subgroup(&swap), 48);

        // Triality (3-cycle on the outer nodes): fixed subgroup of order
        // |W(G2)| = 12.
        let tri = diagram_automorphism(&d, &[2, 1, 3, 0]).unwrap();
        assert_eq!(g.diagram_fixed_subgroup(&tri), 12);

        // Fixed sets are closed under composition.
        for sigma in [&swap, &tri] {
            let fixed = g.fixed_subgroup(sigma);
            let set: std::collections::HashSet<usize> = fixed.iter().copied().collect();
            for &a in fixed.iter().take(8) {
                for &b in fixed.iter().take(8) {
                    let prod = g.element(a).compose(g.element(b));
                    assert!(set.contains(&g.position(&prod).unwrap()));
                }
            }
        }
    }

    #[test]
    fn bad_automorphism_rejected() {
        let d = datum(SimpleType::D, 4);
        // Moving the branch node cannot preserve the Cartan matrix.
        assert!(matches!(
            diagram_automorphism(&d, &[1, 0, 2, 3]),
            Err(Error::BadAutomorphism(_))
        ));
        assert!(matches!(
            diagram_automorphism(&d, &[0, 0, 2, 3]),
            Err(Error::BadAutomorphism(_))
        ));
    }

    #[test]
    fn no_order_multiple_small() {
        let g = group(SimpleType::A, 1);
        assert!(g.no_order_multiple(2));
        // W(B2) has elements of order 4 = 2·2.
        let g = group(SimpleType::B, 2);
        assert!(!g.no_order_multiple(2));
    }

    #[test]
    fn inverse_and_compose() {
        let g = group(SimpleType::B, 3);
        for w in g.elements().iter().step_by(7) {
            let winv = w.inverse();
            assert!(w.compose(&winv).is_identity());
            assert!(winv.compose(w).is_identity());
            assert_eq!(w.matrix.mul_mat(&winv.matrix), Mat::identity(3));
        }
    }

    #[test]
    fn char_poly_constant_term_unimodular() {
        let g = group(SimpleType::B, 2);
        for w in g.elements() {
            let cp = w.char_poly();
            assert_eq!(cp.len(), 3);
            assert_eq!(*cp.last().unwrap(), 1);
            assert_eq!(cp[0].abs(), 1);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        // Sampled closure: products and inverses stay inside the enumerated
        // group, and conjugate elements share their characteristic polynomial.
        #[test]
        fn group_closure_sampled(a in 0usize..48, b in 0usize..48) {
            let g = group(SimpleType::B, 3);
            let x = g.element(a % g.elements().len());
            let y = g.element(b % g.elements().len());
            let prod = x.compose(y);
            let pos = g.position(&prod);
            prop_assert!(pos.is_some());
            prop_assert!(g.position(&x.inverse()).is_some());
            let conj = x.compose(y).compose(&x.inverse());
            prop_assert_eq!(conj.char_poly(), y.char_poly());
            prop_assert_eq!(conj.order(), y.order());
        }
    }
}
