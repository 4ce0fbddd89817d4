//! Exact truncated-series model of a tamely ramified extension E of
//! F_q((t)): residue field F_{p^{f·m}}, ramification index e coprime to p,
//! elements as finite sums of residue coefficients times t^{k/e}.
//!
//! Every element carries `known_up_to`: the exponent bound below which its
//! terms are exact. Operations propagate that bound pessimistically, and any
//! question whose answer would depend on unknown terms fails with an
//! "indeterminate" error instead of guessing. Exponents are stored scaled by
//! e (so they are integers); the context-wide cap is `precision`.

pub mod residue;

use std::sync::Arc;

use num_traits::Zero;

use residue::ResidueField;

use crate::{Error, Rat, Result};

/// Hard bound on the scaled precision window, to keep the dense slot model
/// honest about memory.
pub const MAX_SCALED_PRECISION: i64 = 1 << 16;

/// Guard on user-supplied exponents (scaled): far outside the window is a
/// typo, not a series.
const MAX_SCALED_EXPONENT: i64 = 1 << 20;

/// Parameters of E = F_{p^{f·m}}((t^{1/e})) over k = F_{p^f}((t)), with a
/// hard precision cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldContext {
    pub p: u64,
    pub f: u32,
    pub m: u32,
    pub e: i64,
    pub residue: ResidueField,
    /// Exclusive scaled exponent cap: representable exponents are k/e with
    /// k < cap.
    cap: i64,
}

impl FieldContext {
    pub fn new(p: u64, f: u32, m: u32, e: i64, precision: Rat) -> Result<FieldContext> {
        if f == 0 || m == 0 {
            return Err(Error::BadContext("f and m must be positive".into()));
        }
        if e < 1 {
            return Err(Error::BadContext("ramification index e must be positive".into()));
        }
        let residue = ResidueField::new(p, (f as usize) * (m as usize))?;
        if num_integer::gcd(e as u64, p) != 1 {
            return Err(Error::BadContext(format!(
                "p = {p} divides e = {e}: wildly ramified extensions are out of scope"
            )));
        }
        if precision <= Rat::zero() {
            return Err(Error::BadContext("precision must be positive".into()));
        }
        let scaled = precision * Rat::from_integer(e);
        let cap = scaled.floor().to_integer();
        if cap < 1 {
            return Err(Error::BadContext(format!(
                "precision {precision} leaves no representable exponent on the 1/{e} grid"
            )));
        }
        if cap > MAX_SCALED_PRECISION {
            return Err(Error::BadContext(format!(
                "scaled precision {cap} exceeds the supported window {MAX_SCALED_PRECISION}"
            )));
        }
        Ok(FieldContext { p, f, m, e, residue, cap })
    }

    /// The effective precision cap, snapped to the 1/e grid.
    pub fn precision(&self) -> Rat {
        Rat::new(self.cap, self.e)
    }

    pub fn cap_scaled(&self) -> i64 {
        self.cap
    }

    /// Residue degree d = f·m.
    pub fn residue_degree(&self) -> usize {
        self.residue.d
    }

    /// Cardinality q^m of the residue field, when it fits u128.
    pub fn residue_cardinality(&self) -> Option<u128> {
        (self.p as u128).checked_pow(self.f * self.m)
    }
}

/// Valuation of a truncated element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Val {
    Finite(Rat),
    /// No terms anywhere below the full precision cap.
    Infinite,
    /// No known term, but the element is only known below `bound` < cap: the
    /// true valuation is ≥ bound and cannot be pinned down.
    Indeterminate(Rat),
}

impl Val {
    pub fn is_finite(&self) -> bool {
        matches!(self, Val::Finite(_))
    }

    pub fn finite(&self) -> Option<Rat> {
        match self {
            Val::Finite(r) => Some(*r),
            _ => None,
        }
    }
}

/// One element of E, exact below `ku`.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    ctx: Arc<FieldContext>,
    /// Scaled exponent of the first stored slot (0 when no slots).
    lo: i64,
    /// Slot coefficients, `d` words each, consecutive scaled exponents
    /// starting at `lo`. First and last slots are nonzero (canonical form).
    coeffs: Vec<u64>,
    /// Exclusive scaled bound: terms at exponents < ku are exactly right.
    ku: i64,
}

impl FieldElement {
    // ----- constructors -----

    fn termless(ctx: &Arc<FieldContext>, ku: i64) -> FieldElement {
        FieldElement { ctx: Arc::clone(ctx), lo: 0, coeffs: vec![], ku: ku.min(ctx.cap) }
    }

    fn new_canonical(ctx: Arc<FieldContext>, mut lo: i64, mut coeffs: Vec<u64>, ku: i64) -> FieldElement {
        let d = ctx.residue.d;
        let ku = ku.min(ctx.cap);
        debug_assert_eq!(coeffs.len() % d, 0);
        let mut n = coeffs.len() / d;
        // Drop slots at exponents ≥ ku.
        if lo + n as i64 > ku {
            n = (ku - lo).max(0) as usize;
            coeffs.truncate(n * d);
        }
        // Trim leading zero slots.
        let mut skip = 0;
        while skip < n && ResidueField::is_zero(&coeffs[skip * d..(skip + 1) * d]) {
            skip += 1;
        }
        if skip > 0 {
            coeffs.drain(..skip * d);
            lo += skip as i64;
            n -= skip;
        }
        // Trim trailing zero slots.
        while n > 0 && ResidueField::is_zero(&coeffs[(n - 1) * d..n * d]) {
            n -= 1;
            coeffs.truncate(n * d);
        }
        if n == 0 {
            return FieldElement { ctx, lo: 0, coeffs: vec![], ku };
        }
        FieldElement { ctx, lo, coeffs, ku }
    }

    /// The exact zero (at full precision).
    pub fn zero(ctx: &Arc<FieldContext>) -> FieldElement {
        FieldElement::termless(ctx, ctx.cap)
    }

    pub fn one(ctx: &Arc<FieldContext>) -> FieldElement {
        let mut coeffs = ctx.residue.one();
        coeffs.resize(ctx.residue.d, 0);
        FieldElement { ctx: Arc::clone(ctx), lo: 0, coeffs, ku: ctx.cap }
    }

    /// The uniformizer t_E = t^{1/e} of the extension.
    pub fn uniformizer(ctx: &Arc<FieldContext>) -> FieldElement {
        FieldElement::new_canonical(Arc::clone(ctx), 1, ctx.residue.one(), ctx.cap)
    }

    /// Build an exact element from (exponent, residue coefficient) pairs.
    /// Exponents must sit on the 1/e grid below the precision cap; repeated
    /// exponents accumulate.
    pub fn from_terms(ctx: &Arc<FieldContext>, terms: &[(Rat, Vec<u64>)]) -> Result<FieldElement> {
        let d = ctx.residue.d;
        let mut scaled: Vec<(i64, Vec<u64>)> = Vec::with_capacity(terms.len());
        for (exp, coeff) in terms {
            let s = *exp * Rat::from_integer(ctx.e);
            if !s.is_integer() {
                return Err(Error::BadExponent(*exp, ctx.e));
            }
            let s = s.to_integer();
            if s >= ctx.cap {
                return Err(Error::BadInput(format!(
                    "term exponent {exp} is at or beyond the precision cap {}",
                    ctx.precision()
                )));
            }
            if s.abs() > MAX_SCALED_EXPONENT {
                return Err(Error::BadInput(format!("term exponent {exp} out of range")));
            }
            if coeff.len() > d {
                return Err(Error::BadCoefficient);
            }
            let mut c = vec![0u64; d];
            for (w, &x) in c.iter_mut().zip(coeff) {
                *w = x % ctx.p;
            }
            scaled.push((s, c));
        }
        if scaled.is_empty() {
            return Ok(FieldElement::zero(ctx));
        }
        let lo = scaled.iter().map(|(s, _)| *s).min().unwrap();
        let hi = scaled.iter().map(|(s, _)| *s).max().unwrap();
        let width = (hi - lo + 1) as usize;
        let mut coeffs = vec![0u64; width * d];
        for (s, c) in scaled {
            let k = (s - lo) as usize;
            ctx.residue.add_assign(&mut coeffs[k * d..(k + 1) * d], &c);
        }
        Ok(FieldElement::new_canonical(Arc::clone(ctx), lo, coeffs, ctx.cap))
    }

    /// Restrict the known-up-to bound (exponent on the 1/e grid).
    pub fn with_known_up_to(&self, bound: Rat) -> Result<FieldElement> {
        let s = bound * Rat::from_integer(self.ctx.e);
        if !s.is_integer() {
            return Err(Error::BadExponent(bound, self.ctx.e));
        }
        let ku = s.to_integer().min(self.ku);
        Ok(FieldElement::new_canonical(
            Arc::clone(&self.ctx),
            self.lo,
            self.coeffs.clone(),
            ku,
        ))
    }

    // ----- accessors -----

    pub fn context(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    fn d(&self) -> usize {
        self.ctx.residue.d
    }

    fn nslots(&self) -> usize {
        self.coeffs.len() / self.d()
    }

    fn slot(&self, i: usize) -> &[u64] {
        let d = self.d();
        &self.coeffs[i * d..(i + 1) * d]
    }

    fn exp_rat(&self, scaled: i64) -> Rat {
        Rat::new(scaled, self.ctx.e)
    }

    /// Effective valuation bound used in precision propagation.
    fn v_eff(&self) -> i64 {
        if self.coeffs.is_empty() {
            self.ku
        } else {
            self.lo
        }
    }

    pub fn known_up_to(&self) -> Rat {
        self.exp_rat(self.ku)
    }

    pub fn val(&self) -> Val {
        if self.coeffs.is_empty() {
            if self.ku >= self.ctx.cap {
                Val::Infinite
            } else {
                Val::Indeterminate(self.exp_rat(self.ku))
            }
        } else {
            Val::Finite(self.exp_rat(self.lo))
        }
    }

    /// Valuation, erroring when it is a precision artifact.
    pub fn val_determinate(&self) -> Result<Val> {
        match self.val() {
            Val::Indeterminate(bound) => Err(Error::IndeterminateValuation {
                bound,
                cap: self.ctx.precision(),
            }),
            v => Ok(v),
        }
    }

    /// No terms at all below the full precision cap.
    pub fn is_zero_at_precision(&self) -> bool {
        self.coeffs.is_empty() && self.ku >= self.ctx.cap
    }

    pub fn has_terms(&self) -> bool {
        !self.coeffs.is_empty()
    }

    /// Nonzero terms as (exponent, residue coefficient) pairs, ascending.
    pub fn terms(&self) -> Vec<(Rat, Vec<u64>)> {
        (0..self.nslots())
            .filter(|&i| !ResidueField::is_zero(self.slot(i)))
            .map(|i| (self.exp_rat(self.lo + i as i64), self.slot(i).to_vec()))
            .collect()
    }

    fn check_ctx(&self, o: &FieldElement) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &o.ctx) || *self.ctx == *o.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    // ----- arithmetic -----

    pub fn neg(&self) -> FieldElement {
        let mut coeffs = self.coeffs.clone();
        let d = self.d();
        for i in 0..self.nslots() {
            self.ctx.residue.neg_assign(&mut coeffs[i * d..(i + 1) * d]);
        }
        FieldElement { ctx: Arc::clone(&self.ctx), lo: self.lo, coeffs, ku: self.ku }
    }

    pub fn add(&self, o: &FieldElement) -> Result<FieldElement> {
        self.check_ctx(o)?;
        let ku = self.ku.min(o.ku);
        if self.coeffs.is_empty() && o.coeffs.is_empty() {
            return Ok(FieldElement::termless(&self.ctx, ku));
        }
        let d = self.d();
        let lo = match (self.coeffs.is_empty(), o.coeffs.is_empty()) {
            (false, false) => self.lo.min(o.lo),
            (false, true) => self.lo,
            (true, false) => o.lo,
            (true, true) => unreachable!(),
        };
        let hi_x = if self.coeffs.is_empty() { lo } else { self.lo + self.nslots() as i64 };
        let hi_y = if o.coeffs.is_empty() { lo } else { o.lo + o.nslots() as i64 };
        let hi = hi_x.max(hi_y).min(ku);
        if hi <= lo {
            return Ok(FieldElement::termless(&self.ctx, ku));
        }
        let width = (hi - lo) as usize;
        let mut coeffs = vec![0u64; width * d];
        for (src, src_lo) in [(self, self.lo), (o, o.lo)] {
            for i in 0..src.nslots() {
                let k = src_lo + i as i64;
                if k >= hi {
                    break;
                }
                let k = (k - lo) as usize;
                self.ctx.residue.add_assign(&mut coeffs[k * d..(k + 1) * d], src.slot(i));
            }
        }
        Ok(FieldElement::new_canonical(Arc::clone(&self.ctx), lo, coeffs, ku))
    }

    pub fn sub(&self, o: &FieldElement) -> Result<FieldElement> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &FieldElement) -> Result<FieldElement> {
        self.check_ctx(o)?;
        let cap = self.ctx.cap;
        let ku = (self.v_eff() + o.ku).min(o.v_eff() + self.ku).min(cap);
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Ok(FieldElement::termless(&self.ctx, ku));
        }
        let d = self.d();
        let lo = self.lo + o.lo;
        let nx = self.nslots();
        let ny = o.nslots();
        let full = nx + ny - 1;
        let width = full.min((ku - lo).max(0) as usize);
        if width == 0 {
            return Ok(FieldElement::termless(&self.ctx, ku));
        }
        let field = &self.ctx.residue;
        let mut coeffs = vec![0u64; width * d];
        let mut scratch = vec![0u128; 2 * d - 1];
        for s in 0..width {
            let i_min = s.saturating_sub(ny - 1);
            let i_max = s.min(nx - 1);
            for i in i_min..=i_max {
                field.acc_cross(&mut scratch, self.slot(i), o.slot(s - i));
            }
            field.reduce_scratch(&mut scratch, &mut coeffs[s * d..(s + 1) * d]);
        }
        Ok(FieldElement::new_canonical(Arc::clone(&self.ctx), lo, coeffs, ku))
    }

    /// Multiply by a residue-field constant.
    pub fn scale_residue(&self, c: &[u64]) -> FieldElement {
        if ResidueField::is_zero(c) {
            // An exact scalar zero annihilates the unknown tail too.
            return FieldElement::zero(&self.ctx);
        }
        let d = self.d();
        let field = &self.ctx.residue;
        let mut coeffs = vec![0u64; self.coeffs.len()];
        for i in 0..self.nslots() {
            let prod = field.mul(self.slot(i), c);
            coeffs[i * d..(i + 1) * d].copy_from_slice(&prod);
        }
        // A field has no zero divisors: canonical form is preserved.
        FieldElement { ctx: Arc::clone(&self.ctx), lo: self.lo, coeffs, ku: self.ku }
    }

    /// Multiply by the reduction of a p-integral rational to F_p.
    pub fn scale_zp(&self, a: Rat) -> Result<FieldElement> {
        let c = reduce_zp(a, self.ctx.p)?;
        Ok(self.scale_residue(&self.ctx.residue.scalar(c)))
    }

    /// Multiplicative inverse. Errors on an element with no visible term:
    /// a domain error if it is zero at full precision, an indeterminate
    /// error if the precision cap hides a potential leading term.
    pub fn invert(&self) -> Result<FieldElement> {
        if self.coeffs.is_empty() {
            return Err(if self.ku >= self.ctx.cap {
                Error::InvertZero
            } else {
                Error::IndeterminateValuation {
                    bound: self.exp_rat(self.ku),
                    cap: self.ctx.precision(),
                }
            });
        }
        let d = self.d();
        let field = &self.ctx.residue;
        let v = self.lo;
        let ku_r = (self.ku - 2 * v).min(self.ctx.cap);
        let width = (ku_r + v).max(0) as usize;
        if width == 0 {
            return Ok(FieldElement::termless(&self.ctx, ku_r));
        }
        let c_inv = field.inv(self.slot(0)).expect("leading slot of a canonical element");
        // y = c⁻¹ t^{−v} x = 1 + u; z = y⁻¹ from z_n = −Σ_{i≥1} y_i z_{n−i}.
        let ny = self.nslots().min(width);
        let mut ynorm = vec![0u64; ny * d];
        for i in 0..ny {
            let prod = field.mul(self.slot(i), &c_inv);
            ynorm[i * d..(i + 1) * d].copy_from_slice(&prod);
        }
        let mut z = vec![0u64; width * d];
        z[..d].copy_from_slice(&field.one());
        let mut scratch = vec![0u128; 2 * d - 1];
        for n in 1..width {
            for i in 1..=n.min(ny - 1) {
                field.acc_cross(&mut scratch, &ynorm[i * d..(i + 1) * d], &z[(n - i) * d..(n - i + 1) * d]);
            }
            let (head, tail) = z.split_at_mut(n * d);
            let _ = head;
            field.reduce_scratch(&mut scratch, &mut tail[..d]);
            field.neg_assign(&mut tail[..d]);
        }
        // x⁻¹ = c⁻¹ t^{−v} z.
        for k in 0..width {
            let prod = field.mul(&z[k * d..(k + 1) * d], &c_inv);
            z[k * d..(k + 1) * d].copy_from_slice(&prod);
        }
        Ok(FieldElement::new_canonical(Arc::clone(&self.ctx), -v, z, ku_r))
    }

    /// Integer power (negative exponents through inversion).
    pub fn pow_int(&self, k: i64) -> Result<FieldElement> {
        if k == 0 {
            return Ok(FieldElement::one(&self.ctx));
        }
        let base = if k < 0 { self.invert()? } else { self.clone() };
        let mut k = k.unsigned_abs();
        let mut acc: Option<FieldElement> = None;
        let mut sq = base;
        loop {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => a.mul(&sq)?,
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            sq = sq.mul(&sq)?;
        }
        Ok(acc.expect("k != 0"))
    }

    /// x ↦ x^a for a one-unit x and a p-integral rational exponent a, by the
    /// binomial series Σ C(a,k)(x−1)^k with coefficients reduced from Z_(p).
    pub fn zp_power(&self, a: Rat) -> Result<FieldElement> {
        let p = self.ctx.p;
        if reduce_zp_denominator(a, p).is_none() {
            return Err(Error::NotPIntegral(a, p));
        }
        let u = self.sub(&FieldElement::one(&self.ctx))?;
        if let Some(first) = u.terms().first() {
            if first.0 <= Rat::zero() {
                return Err(Error::NotOneUnit);
            }
        }
        if !u.has_terms() && u.ku <= 0 {
            return Err(Error::IndeterminateValuation {
                bound: u.exp_rat(u.ku),
                cap: self.ctx.precision(),
            });
        }
        let ku_res = u.ku; // = min(self.ku, cap): u = x − 1 keeps the bound
        if a.is_zero() {
            return Ok(FieldElement::one(&self.ctx));
        }
        let mut acc = FieldElement::one(&self.ctx);
        if !u.has_terms() {
            // x = 1 + O(t^ku): every series term beyond 1 is invisible.
            acc.ku = ku_res;
            return Ok(acc);
        }
        let vu = u.lo;
        debug_assert!(vu >= 1);
        let alpha = *a.numer() as i128;
        let beta = *a.denom() as i128;
        let beta_inv = residue::scalar_inv(p, mod_p_i128(beta, p));
        let mut vpow: i64 = 0;
        let mut unit: u64 = 1;
        let mut pw = FieldElement::one(&self.ctx);
        let mut k: i64 = 1;
        while k.saturating_mul(vu) < ku_res {
            // C(a,k) = C(a,k−1) · (a − k + 1) / k, tracking the p-part exactly.
            let num = alpha - (k as i128 - 1) * beta;
            if num == 0 {
                // a is a nonnegative integer < k: the series is a polynomial
                // and already complete.
                return Ok(acc);
            }
            let (s_num, num_rest) = strip_p(num, p as i128);
            let (s_k, k_rest) = strip_p(k as i128, p as i128);
            vpow += s_num - s_k;
            unit = unit * mod_p_i128(num_rest, p) % p;
            unit = unit * beta_inv % p;
            unit = unit * residue::scalar_inv(p, mod_p_i128(k_rest, p)) % p;
            pw = pw.mul(&u)?;
            debug_assert!(vpow >= 0, "binomial coefficients of Z_(p) exponents are p-integral");
            if vpow == 0 {
                acc = acc.add(&pw.scale_residue(&self.ctx.residue.scalar(unit)))?;
            }
            k += 1;
        }
        Ok(clamp_ku(acc, ku_res))
    }

    /// The unique n-th root in 1 + 𝒫 of a one-unit, for n coprime to p.
    pub fn nth_root_one_unit(&self, n: i64) -> Result<FieldElement> {
        if n < 1 || n as u64 % self.ctx.p == 0 {
            return Err(Error::BadRootIndex { n, p: self.ctx.p });
        }
        self.zp_power(Rat::new(1, n))
    }

    /// Whether the two elements agree on every known term (the difference has
    /// no visible term up to the shared precision).
    pub fn agrees_with(&self, o: &FieldElement) -> Result<bool> {
        Ok(!self.sub(o)?.has_terms())
    }
}

fn clamp_ku(x: FieldElement, ku: i64) -> FieldElement {
    let ku = ku.min(x.ku);
    FieldElement::new_canonical(Arc::clone(&x.ctx), x.lo, x.coeffs, ku)
}

fn strip_p(mut n: i128, p: i128) -> (i64, i128) {
    debug_assert!(n != 0);
    let mut s = 0;
    while n % p == 0 {
        n /= p;
        s += 1;
    }
    (s, n)
}

fn mod_p_i128(n: i128, p: u64) -> u64 {
    (((n % p as i128) + p as i128) % p as i128) as u64
}

/// Denominator of `a` reduced mod p, if p-free.
fn reduce_zp_denominator(a: Rat, p: u64) -> Option<u64> {
    let den = *a.denom();
    debug_assert!(den > 0);
    if den as u64 % p == 0 {
        None
    } else {
        Some(den as u64 % p)
    }
}

/// Reduce a p-integral rational to F_p.
pub fn reduce_zp(a: Rat, p: u64) -> Result<u64> {
    let den = reduce_zp_denominator(a, p).ok_or(Error::NotPIntegral(a, p))?;
    let num = mod_p_i128(*a.numer() as i128, p);
    Ok(num * residue::scalar_inv(p, den) % p)
}

impl std::fmt::Debug for FieldElement {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (exp, coeff) in self.terms() {
            if !first {
                write!(fm, " + ")?;
            }
            first = false;
            write!(fm, "{coeff:?}·t^({exp})")?;
        }
        if first {
            write!(fm, "0")?;
        }
        write!(fm, " + O(t^({}))", self.known_up_to())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(p: u64, f: u32, m: u32, e: i64, prec: i64) -> Arc<FieldContext> {
        Arc::new(FieldContext::new(p, f, m, e, Rat::from_integer(prec)).unwrap())
    }

    fn t_pow(c: &Arc<FieldContext>, num: i64, den: i64) -> FieldElement {
        FieldElement::from_terms(c, &[(Rat::new(num, den), vec![1])]).unwrap()
    }

    #[test]
    fn context_validation() {
        assert!(matches!(
            FieldContext::new(6, 1, 1, 1, Rat::from_integer(10)),
            Err(Error::NotPrime(6))
        ));
        assert!(FieldContext::new(5, 1, 1, 10, Rat::from_integer(10)).is_err()); // p | e
        assert!(FieldContext::new(5, 1, 1, 3, Rat::zero()).is_err());
        assert!(FieldContext::new(5, 0, 1, 1, Rat::from_integer(10)).is_err());
        let c = FieldContext::new(5, 1, 2, 3, Rat::from_integer(4)).unwrap();
        assert_eq!(c.precision(), Rat::from_integer(4));
        assert_eq!(c.cap_scaled(), 12);
        assert_eq!(c.residue_degree(), 2);
    }

    #[test]
    fn fractional_exponent_multiplication() {
        let c = ctx(5, 1, 1, 3, 10);
        let a = t_pow(&c, 1, 3);
        let b = t_pow(&c, 2, 3);
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.val(), Val::Finite(Rat::from_integer(1)));
        assert_eq!(prod.terms(), vec![(Rat::from_integer(1), vec![1])]);
    }

    #[test]
    fn char_2_cancellation() {
        let c = ctx(2, 1, 1, 1, 8);
        let t = t_pow(&c, 1, 1);
        let sum = t.add(&t).unwrap();
        assert!(!sum.has_terms());
        assert_eq!(sum.val(), Val::Infinite);
        assert!(sum.is_zero_at_precision());
    }

    #[test]
    fn geometric_inverse() {
        let c = ctx(5, 1, 1, 1, 8);
        let x = FieldElement::one(&c).add(&t_pow(&c, 1, 1)).unwrap();
        let inv = x.invert().unwrap();
        let expected = FieldElement::from_terms(
            &c,
            &[
                (Rat::from_integer(0), vec![1]),
                (Rat::from_integer(1), vec![4]),
                (Rat::from_integer(2), vec![1]),
                (Rat::from_integer(3), vec![4]),
            ],
        )
        .unwrap();
        let head: Vec<_> = inv.terms().into_iter().take(4).collect();
        assert_eq!(head, expected.terms());
        assert!(x.mul(&inv).unwrap().agrees_with(&FieldElement::one(&c)).unwrap());
    }

    #[test]
    fn inverse_precision_bookkeeping() {
        let c = ctx(7, 1, 1, 1, 12);
        // x = t² + t³, exact: inverse known only up to 12 − 2·2 = 8.
        let x = t_pow(&c, 2, 1).add(&t_pow(&c, 3, 1)).unwrap();
        let inv = x.invert().unwrap();
        assert_eq!(inv.val(), Val::Finite(Rat::from_integer(-2)));
        assert_eq!(inv.known_up_to(), Rat::from_integer(8));
        let prod = x.mul(&inv).unwrap();
        assert!(prod.agrees_with(&FieldElement::one(&c)).unwrap());
        // Inverting something indeterminate-zero is a precision error;
        // inverting the exact zero is a domain error.
        let weak = x.with_known_up_to(Rat::from_integer(2)).unwrap();
        assert!(matches!(weak.invert(), Err(Error::IndeterminateValuation { .. })));
        assert!(matches!(FieldElement::zero(&c).invert(), Err(Error::InvertZero)));
    }

    #[test]
    fn square_root_worked_example() {
        // (1 + t²)^{1/2} over F_5 = 1 + 3t² + 3t⁴ + …
        let c = ctx(5, 1, 1, 1, 8);
        let x = FieldElement::one(&c).add(&t_pow(&c, 2, 1)).unwrap();
        let y = x.nth_root_one_unit(2).unwrap();
        let head: Vec<_> = y.terms().into_iter().take(3).collect();
        assert_eq!(
            head,
            vec![
                (Rat::from_integer(0), vec![1]),
                (Rat::from_integer(2), vec![3]),
                (Rat::from_integer(4), vec![3]),
            ]
        );
        assert!(y.mul(&y).unwrap().agrees_with(&x).unwrap());
        assert_eq!(y.known_up_to(), c.precision());

        // Exact square roots come back exactly.
        let one_plus_t = FieldElement::one(&c).add(&t_pow(&c, 1, 1)).unwrap();
        let sq = one_plus_t.mul(&one_plus_t).unwrap();
        let root = sq.nth_root_one_unit(2).unwrap();
        assert!(root.agrees_with(&one_plus_t).unwrap());

        // Root index divisible by p refused.
        assert!(matches!(
            x.nth_root_one_unit(5),
            Err(Error::BadRootIndex { n: 5, p: 5 })
        ));
        // Non-one-units refused.
        assert!(matches!(
            t_pow(&c, 1, 1).nth_root_one_unit(2),
            Err(Error::NotOneUnit)
        ));
    }

    #[test]
    fn zp_power_basics() {
        let c = ctx(5, 1, 1, 1, 10);
        let x = FieldElement::one(&c).add(&t_pow(&c, 1, 1)).unwrap();
        // Exponent 1 is the identity.
        assert!(x.zp_power(Rat::from_integer(1)).unwrap().agrees_with(&x).unwrap());
        // Exponent 0 is exactly 1.
        let z = x.zp_power(Rat::zero()).unwrap();
        assert!(z.agrees_with(&FieldElement::one(&c)).unwrap());
        assert_eq!(z.known_up_to(), c.precision());
        // Exponent −1 agrees with inversion.
        let m1 = x.zp_power(Rat::from_integer(-1)).unwrap();
        assert!(m1.agrees_with(&x.invert().unwrap()).unwrap());
        // p-divisible denominators refused.
        assert!(matches!(
            x.zp_power(Rat::new(1, 5)),
            Err(Error::NotPIntegral(..))
        ));
        // Integer exponents agree with repeated multiplication.
        let cube = x.zp_power(Rat::from_integer(3)).unwrap();
        assert!(cube.agrees_with(&x.pow_int(3).unwrap()).unwrap());
    }

    #[test]
    fn zp_power_one_unit_depth() {
        // val(x^a − 1) ≥ val(x − 1), equality iff a is a Z_(p) unit.
        let c = ctx(7, 1, 1, 2, 9);
        let u = t_pow(&c, 3, 2);
        let x = FieldElement::one(&c).add(&u).unwrap();
        let one = FieldElement::one(&c);
        let unit_pow = x.zp_power(Rat::new(3, 2)).unwrap();
        assert_eq!(
            unit_pow.sub(&one).unwrap().val(),
            Val::Finite(Rat::new(3, 2))
        );
        let nonunit_pow = x.zp_power(Rat::from_integer(7)).unwrap();
        match nonunit_pow.sub(&one).unwrap().val() {
            Val::Finite(v) => assert!(v > Rat::new(3, 2)),
            Val::Infinite => {}
            Val::Indeterminate(_) => panic!("determinate input, determinate output"),
        }
    }

    #[test]
    fn residue_extension_arithmetic() {
        // F_49 = F_7[x]/(x²+1); (x)·(x) = −1 = 6.
        let c = ctx(7, 2, 1, 1, 6);
        let gen = FieldElement::from_terms(&c, &[(Rat::zero(), vec![0, 1])]).unwrap();
        let sq = gen.mul(&gen).unwrap();
        assert_eq!(sq.terms(), vec![(Rat::zero(), vec![6, 0])]);
        let inv = gen.invert().unwrap();
        assert!(gen.mul(&inv).unwrap().agrees_with(&FieldElement::one(&c)).unwrap());
    }

    #[test]
    fn context_mismatch_detected() {
        let c1 = ctx(5, 1, 1, 1, 8);
        let c2 = ctx(5, 1, 1, 2, 8);
        let a = t_pow(&c1, 1, 1);
        let b = t_pow(&c2, 1, 1);
        assert!(matches!(a.add(&b), Err(Error::ContextMismatch)));
        assert!(matches!(a.mul(&b), Err(Error::ContextMismatch)));
    }

    #[test]
    fn precision_soundness_invariant() {
        let c = ctx(3, 1, 1, 1, 5);
        let x = t_pow(&c, 4, 1);
        let y = t_pow(&c, 3, 1);
        let prod = x.mul(&y).unwrap(); // exponent 7 ≥ cap 5: invisible
        assert!(!prod.has_terms());
        assert_eq!(prod.val(), Val::Infinite);
        for (exp, _) in prod.terms() {
            assert!(exp < prod.known_up_to());
        }
    }

    fn arb_element(c: Arc<FieldContext>) -> impl Strategy<Value = FieldElement> {
        let cap = c.cap_scaled();
        prop::collection::vec((0..cap / 2, 1u64..7), 1..4).prop_map(move |raw| {
            let terms: Vec<(Rat, Vec<u64>)> = raw
                .into_iter()
                .map(|(s, w)| (Rat::new(s, c.e), vec![w]))
                .collect();
            FieldElement::from_terms(&c, &terms).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn valuation_laws((x, y) in (Just(()), Just(())).prop_flat_map(|_| {
            let c = ctx(7, 1, 1, 2, 10);
            (arb_element(c.clone()), arb_element(c))
        })) {
            // val(xy) = val(x) + val(y) whenever both are visible.
            if let (Val::Finite(vx), Val::Finite(vy)) = (x.val(), y.val()) {
                let prod = x.mul(&y).unwrap();
                if vx + vy < x.context().precision() {
                    prop_assert_eq!(prod.val(), Val::Finite(vx + vy));
                }
                // Ultrametric inequality, equality on distinct valuations.
                let sum = x.add(&y).unwrap();
                match sum.val() {
                    Val::Finite(v) => prop_assert!(v >= vx.min(vy)),
                    Val::Infinite | Val::Indeterminate(_) => {}
                }
                if vx != vy {
                    prop_assert_eq!(sum.val(), Val::Finite(vx.min(vy)));
                }
            }
        }

        #[test]
        fn mul_commutes_distributes((x, y, z) in (Just(()), Just(())).prop_flat_map(|_| {
            let c = ctx(5, 1, 1, 1, 9);
            (arb_element(c.clone()), arb_element(c.clone()), arb_element(c))
        })) {
            prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
            let lhs = x.mul(&y.add(&z).unwrap()).unwrap();
            let rhs = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
            prop_assert!(lhs.agrees_with(&rhs).unwrap());
        }

        #[test]
        fn zp_power_is_homomorphic(w in 1u64..7, a in -6i64..7, b in -6i64..7) {
            let c = ctx(7, 1, 1, 1, 8);
            let u = FieldElement::from_terms(&c, &[(Rat::from_integer(1), vec![w])]).unwrap();
            let x = FieldElement::one(&c).add(&u).unwrap();
            let pa = x.zp_power(Rat::new(a, 2)).unwrap();
            let pb = x.zp_power(Rat::new(b, 2)).unwrap();
            let pab = x.zp_power(Rat::new(a + b, 2)).unwrap();
            prop_assert!(pa.mul(&pb).unwrap().agrees_with(&pab).unwrap());
        }

        #[test]
        fn root_then_power_round_trips(w in 1u64..5, n in prop::sample::select(vec![2i64, 3, 4, 6])) {
            let c = ctx(5, 1, 1, 1, 10);
            let u = FieldElement::from_terms(&c, &[(Rat::from_integer(1), vec![w])]).unwrap();
            let x = FieldElement::one(&c).add(&u).unwrap();
            if n % 5 != 0 {
                let y = x.nth_root_one_unit(n).unwrap();
                prop_assert!(y.pow_int(n).unwrap().agrees_with(&x).unwrap());
                // Uniqueness: recomputing gives the identical element.
                let y2 = x.nth_root_one_unit(n).unwrap();
                prop_assert_eq!(y, y2);
            }
        }
    }
}
