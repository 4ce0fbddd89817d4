//! Decision procedures around good semisimple elements: when tameness alone
//! settles the question, which primes can obstruct it, the three working
//! hypotheses, and the constructive extraction of a good element from an
//! arbitrary one — in the Lie algebra and in the group.

use std::sync::Arc;

use crate::linalg::{self, Mat, RowLattice};
use crate::localfield::{FieldElement, Val};
use crate::rootsys::{RootDatum, SimpleType, Subsystem, TypeSpec};
use crate::torus::{TorusGroupElement, TorusLieElement};
use crate::{Error, Int, Rat, Result};

/// Prime exclusion bounds for one irreducible type.
#[derive(Debug, Clone)]
pub struct TamePrimeReport {
    /// Primes dividing the Weyl group order: outside these, every maximal
    /// torus splits over a tame extension.
    pub excluded_lower: Vec<u64>,
    /// The smaller exclusion set that suffices for inner forms of the types
    /// where the two differ.
    pub excluded_upper: Vec<u64>,
    pub form_note: String,
}

/// The three hypotheses a prime must satisfy relative to a closed subsystem,
/// each with its numeric witness.
#[derive(Debug, Clone)]
pub struct HypothesisReport {
    pub p: u64,
    pub bad_prime_ok: bool,
    pub bad_primes: Vec<u64>,
    pub char_torsion_ok: bool,
    pub torsion_primes: Vec<u64>,
    pub subsystem_index_ok: bool,
    pub dual_connection_index: u128,
}

impl HypothesisReport {
    pub fn all_ok(&self) -> bool {
        self.bad_prime_ok && self.char_torsion_ok && self.subsystem_index_ok
    }

    pub fn failure_message(&self) -> String {
        let mut parts = Vec::new();
        if !self.bad_prime_ok {
            parts.push(format!("p={} is a bad prime (bad set {:?})", self.p, self.bad_primes));
        }
        if !self.char_torsion_ok {
            parts.push(format!(
                "character quotient has p-torsion (torsion primes {:?})",
                self.torsion_primes
            ));
        }
        if !self.subsystem_index_ok {
            parts.push(format!(
                "p divides the dual connection index {}",
                self.dual_connection_index
            ));
        }
        parts.join("; ")
    }
}

/// Certificate accompanying an extraction: everything needed to re-derive
/// the verdict from valuations alone.
#[derive(Debug, Clone)]
pub struct GoodifyCertificate {
    /// Depth of the input (and of the output when the input is nontrivial).
    pub depth: Val,
    /// Roots whose evaluation sits strictly deeper than the depth.
    pub phi0: Vec<usize>,
    /// Basis of that subsystem.
    pub delta0: Vec<usize>,
    /// Valuation of each root evaluation on the input, by root index.
    pub before: Vec<Val>,
    /// The same on the constructed good element.
    pub after: Vec<Val>,
    pub hypotheses: HypothesisReport,
    /// Group case only: clearing integer per basis root of Φ₀.
    pub n_map: Vec<(usize, Int)>,
}

#[derive(Debug, Clone)]
pub struct GoodifyLie {
    pub x1: TorusLieElement,
    pub x2: TorusLieElement,
    pub phi0: Subsystem,
    pub certificate: GoodifyCertificate,
}

#[derive(Debug, Clone)]
pub struct GoodifyGroup {
    pub gamma1: TorusGroupElement,
    pub gamma2: TorusGroupElement,
    pub phi0: Subsystem,
    pub n_map: Vec<(usize, Int)>,
    pub certificate: GoodifyCertificate,
}

/// Does tameness already force every semisimple element to be contained in a
/// tamely-splitting torus: true iff the group splits over a tame extension
/// and p does not divide the Weyl group order.
pub fn tame_sufficient(p: u64, d: &RootDatum, split_over_tame: bool) -> bool {
    split_over_tame && !d.weyl_order_primes().contains(&p)
}

/// Exclusion bounds for one irreducible type. The lower set (divisors of
/// |W|) always suffices; for types A_n (n ≥ 2), D_l (l ≥ 4) and E_6 a smaller
/// set suffices for every inner form.
pub fn tame_prime_bounds(ts: &TypeSpec) -> TamePrimeReport {
    let excluded_lower = ts.weyl_order_primes();
    let (excluded_upper, form_note) = match (ts.kind, ts.rank) {
        (SimpleType::A, n) if n >= 2 => (
            linalg::prime_factors((n as u128) + 1),
            format!(
                "inner forms need only the prime divisors of {}; \
                 split forms use the divisors of |W|",
                n + 1
            ),
        ),
        (SimpleType::D, l) if l >= 4 => {
            let mut ps = vec![2];
            ps.extend(linalg::primes_up_to((l as u64) - 1).into_iter().filter(|&q| q != 2));
            (
                ps,
                format!(
                    "inner forms need only the prime divisors of 2^{}·{}!; \
                     split forms use the divisors of |W|",
                    l - 1,
                    l - 1
                ),
            )
        }
        (SimpleType::E, 6) => (
            vec![2, 3],
            "inner forms need only {2, 3}; split forms use the divisors of |W|".to_string(),
        ),
        _ => (
            excluded_lower.clone(),
            "bounds coincide: the prime divisors of the Weyl group order".to_string(),
        ),
    };
    debug_assert!(excluded_upper.iter().all(|p| excluded_lower.contains(p)));
    TamePrimeReport { excluded_lower, excluded_upper, form_note }
}

/// Torsion primes of X*/ZΦ₀ for a subsystem Φ₀ of the datum.
fn subsystem_char_torsion(d: &RootDatum, phi0: &Subsystem) -> Vec<u64> {
    if phi0.is_empty() {
        return vec![];
    }
    let rows: Vec<Vec<Int>> = phi0.members.iter().map(|&i| d.root(i).to_vec()).collect();
    let lat = RowLattice::new(&Mat::from_rows(rows));
    let mut ps = std::collections::BTreeSet::new();
    for f in lat.invariant_factors() {
        ps.extend(linalg::prime_factors(f));
    }
    ps.into_iter().collect()
}

/// Absolute Cartan determinant of the subsystem basis (equals the connection
/// index of the dual subsystem).
fn subsystem_dual_index(d: &RootDatum, basis: &[usize]) -> u128 {
    let k = basis.len();
    if k == 0 {
        return 1;
    }
    let mut c0 = Mat::<Int>::zeros(k, k);
    for a in 0..k {
        for b in 0..k {
            c0[(a, b)] = d.pairing(basis[a], basis[b]);
        }
    }
    linalg::abs_det(&c0)
}

/// The three hypotheses for the pair (p, Φ₀): p is not a bad prime of the
/// ambient system, X*/ZΦ₀ has no p-torsion, and p does not divide the dual
/// connection index of Φ₀.
pub fn check_hypotheses(p: u64, d: &RootDatum, phi0: &Subsystem) -> HypothesisReport {
    let bad_primes = d.bad_primes();
    let torsion_primes = subsystem_char_torsion(d, phi0);
    let basis = d.subsystem_basis(phi0);
    let dual_connection_index = subsystem_dual_index(d, &basis);
    HypothesisReport {
        p,
        bad_prime_ok: !bad_primes.contains(&p),
        bad_primes,
        char_torsion_ok: !torsion_primes.contains(&p),
        torsion_primes,
        subsystem_index_ok: dual_connection_index % (p as u128) != 0,
        dual_connection_index,
    }
}

/// Roots evaluating strictly deeper than the depth. With a determinate
/// depth every truncated-to-zero evaluation has its bound above the depth,
/// so membership is unambiguous.
fn deeper_than_depth(vals: &[Val], r: &Val) -> Subsystem {
    let members = match r {
        Val::Infinite => (0..vals.len()).collect(),
        Val::Finite(r) => (0..vals.len())
            .filter(|&i| match &vals[i] {
                Val::Finite(v) => v > r,
                Val::Infinite => true,
                Val::Indeterminate(b) => {
                    debug_assert!(b > r, "depth determinacy forces bounds above depth");
                    true
                }
            })
            .collect(),
        Val::Indeterminate(_) => unreachable!("depth is never indeterminate here"),
    };
    Subsystem { members }
}

/// Closure and hypothesis gate shared by both extractions.
fn validate_subsystem(d: &RootDatum, phi0: &Subsystem, p: u64) -> Result<HypothesisReport> {
    if !d.is_closed(&phi0.members) {
        return Err(Error::NotClosed(
            "the deeper-than-depth root set is not closed".to_string(),
        ));
    }
    if d.rational_closure(&phi0.members).members != phi0.members {
        return Err(Error::NotClosed(
            "the deeper-than-depth root set is not rationally saturated".to_string(),
        ));
    }
    let report = check_hypotheses(p, d, phi0);
    if !report.all_ok() {
        return Err(Error::HypothesisFailure(report.failure_message()));
    }
    Ok(report)
}

/// Split X into X₁ + X₂ with X₂ good of the same depth: X₁ collects the
/// deeper-than-depth part along the fundamental coweights of Φ₀.
pub fn goodify_lie(x: &TorusLieElement) -> Result<GoodifyLie> {
    let d = Arc::clone(x.datum());
    let ctx = x.context();
    let p = ctx.p;
    let r = x.depth()?;

    let before: Vec<Val> = (0..d.num_roots())
        .map(|i| x.eval_root(i).map(|e| e.val()))
        .collect::<Result<Vec<_>>>()?;
    let phi0 = deeper_than_depth(&before, &r);
    let hypotheses = validate_subsystem(&d, &phi0, p)?;
    let delta0 = d.subsystem_basis(&phi0);
    let cw = d.fundamental_coweights(&delta0)?;

    // X₁ = Σ_{α ∈ Δ₀} dα(X) · ω̌⁰_α, assembled coordinate by coordinate;
    // the rational coweight entries are p-integral under the hypotheses.
    let mut coords = vec![FieldElement::zero(ctx); d.rank()];
    for (a, &alpha) in delta0.iter().enumerate() {
        let ev = x.eval_root(alpha)?;
        for (t, c) in coords.iter_mut().enumerate() {
            let w = cw.coweights[a][t];
            if w != Rat::from_integer(0) {
                *c = c.add(&ev.scale_zp(w)?)?;
            }
        }
    }
    let x1 = TorusLieElement::new(Arc::clone(&d), coords)?;
    let x2 = x.sub(&x1)?;

    // Postconditions, re-derived from the output itself.
    let after: Vec<Val> = (0..d.num_roots())
        .map(|i| x2.eval_root(i).map(|e| e.val()))
        .collect::<Result<Vec<_>>>()?;
    for i in 0..d.num_roots() {
        if phi0.contains(i) {
            if matches!(after[i], Val::Finite(_)) {
                return Err(Error::Internal(
                    "extraction left a visible value on a deeper-than-depth root".to_string(),
                ));
            }
        } else if after[i] != r {
            return Err(Error::Internal(
                "extraction moved the valuation of a root at depth".to_string(),
            ));
        }
    }
    match (x1.depth()?, &r) {
        (Val::Infinite, _) => {}
        (Val::Finite(v), Val::Finite(r)) if v > *r => {}
        (Val::Finite(_), Val::Infinite) => {
            return Err(Error::Internal("corrector of a trivial element is nonzero".to_string()))
        }
        (Val::Finite(_), _) | (Val::Indeterminate(_), _) => {
            return Err(Error::Internal("corrector does not sit strictly below depth".to_string()))
        }
    }

    let certificate = GoodifyCertificate {
        depth: r,
        phi0: phi0.members.clone(),
        delta0,
        before,
        after,
        hypotheses,
        n_map: vec![],
    };
    Ok(GoodifyLie { x1, x2, phi0, certificate })
}

/// Factor γ = γ₁·γ₂ with γ₂ good of the same depth: γ₁ is assembled from
/// n_α-th roots of the deeper-than-depth root values along integer
/// cocharacters.
pub fn goodify_group(gamma: &TorusGroupElement) -> Result<GoodifyGroup> {
    let d = Arc::clone(gamma.datum());
    let ctx = gamma.context();
    let p = ctx.p;
    let r = gamma.depth()?;
    if let Val::Finite(v) = &r {
        if *v <= Rat::from_integer(0) {
            return Err(Error::NonPositiveDepth(*v));
        }
    }

    let one = FieldElement::one(ctx);
    let evals: Vec<FieldElement> = (0..d.num_roots())
        .map(|i| gamma.eval_root(i))
        .collect::<Result<Vec<_>>>()?;
    let before: Vec<Val> = evals
        .iter()
        .map(|e| e.sub(&one).map(|u| u.val()))
        .collect::<Result<Vec<_>>>()?;
    let phi0 = deeper_than_depth(&before, &r);
    let hypotheses = validate_subsystem(&d, &phi0, p)?;
    let delta0 = d.subsystem_basis(&phi0);
    let cw = d.fundamental_coweights(&delta0)?;

    // γ₁ = Π_α (n_α·ω̌⁰_α)(α(γ)^{1/n_α}): each n_α·ω̌⁰_α is an integer
    // cocharacter, and n_α is prime to p by the hypotheses.
    let mut n_map: Vec<(usize, Int)> = Vec::with_capacity(delta0.len());
    let mut values = vec![FieldElement::one(ctx); d.rank()];
    for (a, &alpha) in delta0.iter().enumerate() {
        let n = cw.scaling[a];
        if n <= 0 || (n as u64) % p == 0 {
            return Err(Error::HypothesisFailure(format!(
                "clearing integer {n} for a basis root is not prime to p={p}"
            )));
        }
        n_map.push((alpha, n));
        let s = evals[alpha].nth_root_one_unit(n)?;
        let s_inv = s.invert()?;
        for (i, v) in values.iter_mut().enumerate() {
            let e_num = cw.coweights[a][i] * Rat::from_integer(n);
            debug_assert!(e_num.is_integer(), "cleared coweight must be integral");
            let e = e_num.to_integer();
            if e > 0 {
                *v = v.mul(&s.pow_int(e)?)?;
            } else if e < 0 {
                *v = v.mul(&s_inv.pow_int(-e)?)?;
            }
        }
    }
    let gamma1 = TorusGroupElement::new(Arc::clone(&d), values)?;
    let gamma2 = gamma.mul(&gamma1.inverse()?)?;

    // Postconditions, re-derived from the outputs.
    let after: Vec<Val> = (0..d.num_roots())
        .map(|i| gamma2.eval_root(i).and_then(|e| e.sub(&one)).map(|u| u.val()))
        .collect::<Result<Vec<_>>>()?;
    for i in 0..d.num_roots() {
        let g1_val = gamma1.eval_root(i)?.sub(&one)?.val();
        let deep_enough = match (&g1_val, &r) {
            (Val::Infinite, _) => true,
            (Val::Finite(v), Val::Finite(r)) => v > r,
            (Val::Indeterminate(b), Val::Finite(r)) => b > r,
            (_, Val::Infinite) => matches!(g1_val, Val::Infinite),
            (_, Val::Indeterminate(_)) => false,
        };
        if !deep_enough {
            return Err(Error::Internal(
                "correcting factor is not deeper than the depth on some root".to_string(),
            ));
        }
        if phi0.contains(i) {
            if matches!(after[i], Val::Finite(_)) {
                return Err(Error::Internal(
                    "factorization left a visible value on a deeper-than-depth root".to_string(),
                ));
            }
        } else if after[i] != r {
            return Err(Error::Internal(
                "factorization moved the valuation of a root at depth".to_string(),
            ));
        }
    }
    match (gamma1.depth()?, &r) {
        (Val::Infinite, _) => {}
        (Val::Finite(v), Val::Finite(r)) if v > *r => {}
        _ => {
            return Err(Error::Internal(
                "correcting factor does not sit strictly below depth".to_string(),
            ))
        }
    }

    let certificate = GoodifyCertificate {
        depth: r,
        phi0: phi0.members.clone(),
        delta0,
        before,
        after,
        hypotheses,
        n_map: n_map.clone(),
    };
    Ok(GoodifyGroup { gamma1, gamma2, phi0, n_map, certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::FieldContext;
    use crate::rootsys::{build_root_datum, LatticeChoice};

    fn datum(kind: SimpleType, rank: usize, lattice: LatticeChoice) -> Arc<RootDatum> {
        Arc::new(build_root_datum(&[TypeSpec::new(kind, rank).unwrap()], &lattice).unwrap())
    }

    fn ctx(p: u64, prec: i64) -> Arc<FieldContext> {
        Arc::new(FieldContext::new(p, 1, 1, 1, Rat::from_integer(prec)).unwrap())
    }

    fn t_pow(c: &Arc<FieldContext>, e: i64) -> FieldElement {
        FieldElement::from_terms(c, &[(Rat::from_integer(e), vec![1])]).unwrap()
    }

    /// Coordinates with prescribed values on the simple roots.
    fn lie_from_simple_values(d: &Arc<RootDatum>, vals: &[FieldElement]) -> TorusLieElement {
        let s = Mat::from_rows(
            d.simple_indices().iter().map(|&i| d.root(i).to_vec()).collect(),
        );
        let sinv = linalg::inverse(&s.map(|&x| Rat::from_integer(x))).unwrap();
        let c = vals[0].context();
        let coords = (0..d.rank())
            .map(|j| {
                let mut acc = FieldElement::zero(c);
                for (i, v) in vals.iter().enumerate() {
                    acc = acc.add(&v.scale_zp(sinv[(j, i)]).unwrap()).unwrap();
                }
                acc
            })
            .collect();
        TorusLieElement::new(Arc::clone(d), coords).unwrap()
    }

    #[test]
    fn tame_sufficiency_gate() {
        let e6 = datum(SimpleType::E, 6, LatticeChoice::SimplyConnected);
        assert!(tame_sufficient(7, &e6, true));
        assert!(!tame_sufficient(5, &e6, true)); // 5 divides |W(E6)|
        assert!(!tame_sufficient(7, &e6, false));
    }

    #[test]
    fn tame_prime_bound_tables() {
        let a3 = tame_prime_bounds(&TypeSpec::new(SimpleType::A, 3).unwrap());
        assert_eq!(a3.excluded_lower, vec![2, 3]);
        assert_eq!(a3.excluded_upper, vec![2]);

        let d5 = tame_prime_bounds(&TypeSpec::new(SimpleType::D, 5).unwrap());
        assert_eq!(d5.excluded_lower, vec![2, 3, 5]);
        assert_eq!(d5.excluded_upper, vec![2, 3]);

        let e6 = tame_prime_bounds(&TypeSpec::new(SimpleType::E, 6).unwrap());
        assert_eq!(e6.excluded_lower, vec![2, 3, 5]);
        assert_eq!(e6.excluded_upper, vec![2, 3]);

        let b3 = tame_prime_bounds(&TypeSpec::new(SimpleType::B, 3).unwrap());
        assert_eq!(b3.excluded_lower, b3.excluded_upper);

        let a1 = tame_prime_bounds(&TypeSpec::new(SimpleType::A, 1).unwrap());
        assert_eq!(a1.excluded_lower, vec![2]);
        assert_eq!(a1.excluded_upper, vec![2]);
    }

    #[test]
    fn upper_bound_is_contained_in_lower() {
        for (kind, max) in [
            (SimpleType::A, 6),
            (SimpleType::B, 6),
            (SimpleType::C, 6),
            (SimpleType::D, 6),
            (SimpleType::E, 6),
            (SimpleType::F, 4),
            (SimpleType::G, 2),
        ] {
            for rank in 1..=max {
                let Ok(ts) = TypeSpec::new(kind, rank) else { continue };
                let rep = tame_prime_bounds(&ts);
                assert!(
                    rep.excluded_upper.iter().all(|p| rep.excluded_lower.contains(p)),
                    "{kind:?}{rank}"
                );
            }
        }
    }

    #[test]
    fn hypothesis_examples() {
        // Large prime on E6: everything passes for any basis-subset closure.
        let e6 = datum(SimpleType::E, 6, LatticeChoice::Adjoint);
        let seeds: Vec<usize> = e6.simple_indices()[..3].to_vec();
        let phi0 = e6.closure(&seeds);
        let rep = check_hypotheses(7, &e6, &phi0);
        assert!(rep.all_ok());

        // p = 2 with the long roots of B2: 2 is a bad prime of B2.
        let b2 = datum(SimpleType::B, 2, LatticeChoice::SimplyConnected);
        let long = b2.closure(&[b2.simple_indices()[0], b2.highest_root(0)]);
        assert_eq!(long.len(), 4);
        let rep = check_hypotheses(2, &b2, &long);
        assert!(!rep.bad_prime_ok);
        assert_eq!(rep.bad_primes, vec![2]);

        // p = 3 with the full A2 system in the simply connected lattice:
        // the character quotient has 3-torsion.
        let a2 = datum(SimpleType::A, 2, LatticeChoice::SimplyConnected);
        let phi = Subsystem { members: (0..a2.num_roots()).collect() };
        let rep = check_hypotheses(3, &a2, &phi);
        assert!(!rep.char_torsion_ok);
        assert_eq!(rep.torsion_primes, vec![3]);
        assert_eq!(rep.dual_connection_index, 3);
    }

    #[test]
    fn hypotheses_follow_from_weyl_coprimality() {
        // For p coprime to |W| every basis-subset closure passes all three.
        for (kind, rank) in [
            (SimpleType::A, 3),
            (SimpleType::B, 3),
            (SimpleType::C, 3),
            (SimpleType::G, 2),
        ] {
            for lattice in [LatticeChoice::SimplyConnected, LatticeChoice::Adjoint] {
                let d = datum(kind, rank, lattice);
                let order = d.weyl_order().unwrap();
                for p in [5u64, 7, 11, 13, 17, 19, 23] {
                    if order % (p as u128) == 0 {
                        continue;
                    }
                    let simples = d.simple_indices().to_vec();
                    for mask in 0u32..(1 << rank) {
                        let seeds: Vec<usize> = (0..rank)
                            .filter(|i| mask & (1 << i) != 0)
                            .map(|i| simples[i])
                            .collect();
                        let phi0 = d.closure(&seeds);
                        let rep = check_hypotheses(p, &d, &phi0);
                        assert!(rep.all_ok(), "{kind:?}{rank} p={p} mask={mask:b}");
                    }
                }
            }
        }
    }

    #[test]
    fn lie_extraction_worked_example() {
        // dα₁(X) = t, dα₂(X) = t² over F5: the corrector moves t² off α₂ and
        // leaves dα₁(X₂) = t + 3t² (3 is the image of 1/2).
        let d = datum(SimpleType::A, 2, LatticeChoice::SimplyConnected);
        let c = ctx(5, 8);
        let x = lie_from_simple_values(&d, &[t_pow(&c, 1), t_pow(&c, 2)]);
        let out = goodify_lie(&x).unwrap();
        let s = d.simple_indices().to_vec();

        let mut wanted = vec![s[1], d.neg_index(s[1])];
        wanted.sort_unstable();
        assert_eq!(out.phi0.members, wanted);
        assert!(out.x2.eval_root(s[1]).unwrap().is_zero_at_precision());
        assert_eq!(
            out.x2.eval_root(s[0]).unwrap().terms(),
            vec![
                (Rat::from_integer(1), vec![1]),
                (Rat::from_integer(2), vec![3]),
            ]
        );
        // X₁ realizes t²·(α̌₂ / 2).
        let half = Rat::new(1, 2);
        for (i, c1) in out.x1.coords().iter().enumerate() {
            let want = t_pow(&c, 2)
                .scale_zp(half * Rat::from_integer(d.coroot(s[1])[i]))
                .unwrap();
            assert!(c1.agrees_with(&want).unwrap());
        }
        let rep = out.x2.is_good().unwrap();
        assert!(rep.good && rep.certified);
        assert_eq!(rep.depth, Val::Finite(Rat::from_integer(1)));
    }

    #[test]
    fn lie_extraction_trivial_cases() {
        let d = datum(SimpleType::A, 2, LatticeChoice::SimplyConnected);
        let c = ctx(5, 8);

        // Already good: empty Φ₀, X₂ = X, X₁ = 0.
        let x = lie_from_simple_values(&d, &[t_pow(&c, 1), t_pow(&c, 1)]);
        let out = goodify_lie(&x).unwrap();
        assert!(out.phi0.is_empty());
        assert_eq!(out.x1.depth().unwrap(), Val::Infinite);
        for (a, b) in out.x2.coords().iter().zip(x.coords()) {
            assert!(a.agrees_with(b).unwrap());
        }

        // The zero element: Φ₀ is everything, X₂ = 0.
        let zero = TorusLieElement::zero(Arc::clone(&d), &c);
        let out = goodify_lie(&zero).unwrap();
        assert_eq!(out.phi0.len(), d.num_roots());
        assert_eq!(out.x2.depth().unwrap(), Val::Infinite);

        // Negative depth is allowed in the Lie algebra.
        let deep = lie_from_simple_values(&d, &[t_pow(&c, -2), t_pow(&c, 1)]);
        let out = goodify_lie(&deep).unwrap();
        assert_eq!(out.certificate.depth, Val::Finite(Rat::from_integer(-2)));
        assert!(out.x2.is_good().unwrap().good);
    }

    #[test]
    fn lie_extraction_is_idempotent() {
        let d = datum(SimpleType::B, 2, LatticeChoice::SimplyConnected);
        let c = ctx(7, 9);
        let x = lie_from_simple_values(&d, &[t_pow(&c, 1), t_pow(&c, 3)]);
        let first = goodify_lie(&x).unwrap();
        let second = goodify_lie(&first.x2).unwrap();
        assert_eq!(second.certificate.depth, first.certificate.depth);
        assert_eq!(second.phi0, first.phi0);
        assert_eq!(second.x1.depth().unwrap(), Val::Infinite);
        for (a, b) in second.x2.coords().iter().zip(first.x2.coords()) {
            assert!(a.agrees_with(b).unwrap());
        }
    }

    #[test]
    fn lie_extraction_refuses_on_hypothesis_failure() {
        // Over F3 the A2 root evaluations of (t, 2t) all vanish mod 3, so
        // Φ₀ = Φ — and the simply connected lattice has 3-torsion quotient.
        let d = datum(SimpleType::A, 2, LatticeChoice::SimplyConnected);
        let c = ctx(3, 8);
        let t = t_pow(&c, 1);
        let two_t = t.scale_zp(Rat::from_integer(2)).unwrap();
        let x = TorusLieElement::new(Arc::clone(&d), vec![t, two_t]).unwrap();
        assert!(matches!(goodify_lie(&x), Err(Error::HypothesisFailure(_))));
    }

    #[test]
    fn group_extraction_worked_example() {
        // α₁(γ) = 1+t, α₂(γ) = 1+t² over F5 (adjoint lattice): n_{α₂} = 2,
        // γ₁ = α̌₂((1+t²)^{1/2}), and γ₂ is good of depth 1 with α₂(γ₂) = 1.
        let d = datum(SimpleType::A, 2, LatticeChoice::Adjoint);
        let c = ctx(5, 8);
        let one = FieldElement::one(&c);
        let v1 = one.add(&t_pow(&c, 1)).unwrap();
        let v2 = one.add(&t_pow(&c, 2)).unwrap();
        let g = TorusGroupElement::new(Arc::clone(&d), vec![v1, v2.clone()]).unwrap();
        let out = goodify_group(&g).unwrap();
        let s = d.simple_indices().to_vec();

        assert_eq!(out.n_map, vec![(s[1], 2)]);
        // β(γ₁) = β(γ) on Φ₀: here α₂(γ₁) = 1 + t² exactly.
        assert!(out.gamma1.eval_root(s[1]).unwrap().agrees_with(&v2).unwrap());
        assert!(out
            .gamma2
            .eval_root(s[1])
            .unwrap()
            .sub(&one)
            .unwrap()
            .is_zero_at_precision());
        let u = out.gamma2.eval_root(s[0]).unwrap().sub(&one).unwrap();
        assert_eq!(u.val(), Val::Finite(Rat::from_integer(1)));
        let rep = out.gamma2.is_good().unwrap();
        assert!(rep.good);
        assert_eq!(rep.depth, Val::Finite(Rat::from_integer(1)));
        // γ₁ lives strictly below the depth.
        match out.gamma1.depth().unwrap() {
            Val::Finite(v) => assert!(v > Rat::from_integer(1)),
            Val::Infinite => {}
            Val::Indeterminate(_) => panic!("certified input, indeterminate corrector"),
        }
    }

    #[test]
    fn group_extraction_trivial_cases() {
        let d = datum(SimpleType::A, 2, LatticeChoice::Adjoint);
        let c = ctx(5, 8);
        let one = FieldElement::one(&c);

        // Already good: Φ₀ empty, γ₁ the identity.
        let v = one.add(&t_pow(&c, 1)).unwrap();
        let g = TorusGroupElement::new(Arc::clone(&d), vec![v.clone(), v]).unwrap();
        let out = goodify_group(&g).unwrap();
        assert!(out.phi0.is_empty());
        assert!(out.n_map.is_empty());
        assert_eq!(out.gamma1.depth().unwrap(), Val::Infinite);
        for (a, b) in out.gamma2.values().iter().zip(g.values()) {
            assert!(a.agrees_with(b).unwrap());
        }

        // The identity: γ₂ = identity.
        let id = TorusGroupElement::identity(Arc::clone(&d), &c);
        let out = goodify_group(&id).unwrap();
        assert_eq!(out.gamma2.depth().unwrap(), Val::Infinite);
    }

    #[test]
    fn group_extraction_is_idempotent() {
        let d = datum(SimpleType::A, 2, LatticeChoice::Adjoint);
        let c = ctx(5, 10);
        let one = FieldElement::one(&c);
        let v1 = one.add(&t_pow(&c, 1)).unwrap();
        let v2 = one.add(&t_pow(&c, 3)).unwrap();
        let g = TorusGroupElement::new(Arc::clone(&d), vec![v1, v2]).unwrap();
        let first = goodify_group(&g).unwrap();
        let second = goodify_group(&first.gamma2).unwrap();
        assert_eq!(second.phi0, first.phi0);
        assert_eq!(second.gamma1.depth().unwrap(), Val::Infinite);
        for (a, b) in second.gamma2.values().iter().zip(first.gamma2.values()) {
            assert!(a.agrees_with(b).unwrap());
        }
    }

    #[test]
    fn certificates_record_the_valuation_picture() {
        let d = datum(SimpleType::A, 2, LatticeChoice::SimplyConnected);
        let c = ctx(5, 8);
        let x = lie_from_simple_values(&d, &[t_pow(&c, 1), t_pow(&c, 2)]);
        let cert = goodify_lie(&x).unwrap().certificate;
        assert_eq!(cert.before.len(), d.num_roots());
        assert_eq!(cert.after.len(), d.num_roots());
        assert!(cert.hypotheses.all_ok());
        assert_eq!(cert.delta0.len(), 1);
        for &i in &cert.phi0 {
            assert!(!matches!(cert.after[i], Val::Finite(_)));
        }
    }
}
