//! Split tori over the series field: Lie-algebra and group elements,
//! character evaluation, Moy–Prasad depth, and the goodness predicates.
//!
//! A Lie element is stored by its coordinates in the dual (cocharacter)
//! basis, so dχᵢ(X) is literally the i-th coordinate; a group element is
//! stored by its one-unit values on the X* basis, so every character value
//! is a finite product of integer powers.

use std::sync::Arc;

use crate::localfield::{FieldContext, FieldElement, Val};
use crate::rootsys::RootDatum;
use crate::{Error, Int, Rat, Result};

/// X ∈ 𝔱(E) = X_*(T) ⊗ E, in dual-basis coordinates.
#[derive(Debug, Clone)]
pub struct TorusLieElement {
    datum: Arc<RootDatum>,
    coords: Vec<FieldElement>,
}

/// γ ∈ T(E)_{0+}, described by the values χᵢ(γ) on the X*-basis characters;
/// every value is a one-unit.
#[derive(Debug, Clone)]
pub struct TorusGroupElement {
    datum: Arc<RootDatum>,
    values: Vec<FieldElement>,
}

/// How a single root evaluation relates to the depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootStatus {
    /// dα(X) = 0 resp. α(γ) = 1, as far as the precision shows.
    Vanishing,
    /// Valuation exactly equal to the depth.
    AtDepth,
    /// Nonzero with valuation different from the depth.
    Violating,
}

#[derive(Debug, Clone)]
pub struct RootReport {
    pub root_index: usize,
    pub status: RootStatus,
    /// Valuation of dα(X) resp. α(γ) − 1.
    pub val: Val,
}

/// Verdict of the goodness predicate.
#[derive(Debug, Clone)]
pub struct GoodnessReport {
    pub good: bool,
    /// Finite depth r, or Infinite for the trivial element.
    pub depth: Val,
    /// False when some root vanishes only up to a bound short of the
    /// precision cap: the verdict then relies on truncation.
    pub certified: bool,
    pub roots: Vec<RootReport>,
    pub vanishing: Vec<usize>,
    pub violating: Vec<usize>,
}

impl TorusLieElement {
    pub fn new(datum: Arc<RootDatum>, coords: Vec<FieldElement>) -> Result<Self> {
        if coords.len() != datum.rank() {
            return Err(Error::WrongCoordinateCount {
                got: coords.len(),
                want: datum.rank(),
            });
        }
        for c in &coords[1..] {
            if *c.context() != *coords[0].context() {
                return Err(Error::ContextMismatch);
            }
        }
        Ok(TorusLieElement { datum, coords })
    }

    pub fn zero(datum: Arc<RootDatum>, ctx: &Arc<FieldContext>) -> Self {
        let coords = vec![FieldElement::zero(ctx); datum.rank()];
        TorusLieElement { datum, coords }
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn context(&self) -> &Arc<FieldContext> {
        self.coords[0].context()
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    /// dχ(X) for χ given in X*-basis coordinates.
    pub fn eval_char(&self, chi: &[Int]) -> Result<FieldElement> {
        if chi.len() != self.datum.rank() {
            return Err(Error::WrongCoordinateCount {
                got: chi.len(),
                want: self.datum.rank(),
            });
        }
        let mut acc = FieldElement::zero(self.context());
        for (&m, c) in chi.iter().zip(&self.coords) {
            if m != 0 {
                acc = acc.add(&c.scale_zp(Rat::from_integer(m))?)?;
            }
        }
        Ok(acc)
    }

    /// dα(X) for the root with the given index.
    pub fn eval_root(&self, root: usize) -> Result<FieldElement> {
        self.eval_char(self.datum.root(root))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let coords = self
            .coords
            .iter()
            .zip(&o.coords)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        TorusLieElement::new(Arc::clone(&self.datum), coords)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        let coords = self
            .coords
            .iter()
            .zip(&o.coords)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<Vec<_>>>()?;
        TorusLieElement::new(Arc::clone(&self.datum), coords)
    }

    pub fn scale(&self, c: &FieldElement) -> Result<Self> {
        let coords = self
            .coords
            .iter()
            .map(|x| x.mul(c))
            .collect::<Result<Vec<_>>>()?;
        TorusLieElement::new(Arc::clone(&self.datum), coords)
    }

    /// Filtration depth: min over the dual basis of val(dχᵢ(X)); +∞ for the
    /// zero element.
    pub fn depth(&self) -> Result<Val> {
        depth_of_vals(self.coords.iter().map(|c| c.val()))
    }

    /// The goodness predicate: every root evaluation vanishes or sits at
    /// valuation exactly depth(X).
    pub fn is_good(&self) -> Result<GoodnessReport> {
        let r = self.depth()?;
        let evals = (0..self.datum.num_roots())
            .map(|i| self.eval_root(i))
            .collect::<Result<Vec<_>>>()?;
        goodness_report(&r, &evals, self.context())
    }
}

impl TorusGroupElement {
    pub fn new(datum: Arc<RootDatum>, values: Vec<FieldElement>) -> Result<Self> {
        if values.len() != datum.rank() {
            return Err(Error::WrongCoordinateCount {
                got: values.len(),
                want: datum.rank(),
            });
        }
        for v in &values {
            if *v.context() != *values[0].context() {
                return Err(Error::ContextMismatch);
            }
            let u = v.sub(&FieldElement::one(v.context()))?;
            match u.val() {
                Val::Finite(r) if r <= Rat::from_integer(0) => {
                    return Err(Error::ValueNotOneUnit);
                }
                Val::Indeterminate(bound) if bound <= Rat::from_integer(0) => {
                    return Err(Error::IndeterminateValuation {
                        bound,
                        cap: v.context().precision(),
                    });
                }
                _ => {}
            }
        }
        Ok(TorusGroupElement { datum, values })
    }

    pub fn identity(datum: Arc<RootDatum>, ctx: &Arc<FieldContext>) -> Self {
        let values = vec![FieldElement::one(ctx); datum.rank()];
        TorusGroupElement { datum, values }
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn context(&self) -> &Arc<FieldContext> {
        self.values[0].context()
    }

    pub fn values(&self) -> &[FieldElement] {
        &self.values
    }

    /// χ(γ) for χ = Σ mᵢχᵢ in X*-basis coordinates.
    pub fn eval_char(&self, chi: &[Int]) -> Result<FieldElement> {
        if chi.len() != self.datum.rank() {
            return Err(Error::WrongCoordinateCount {
                got: chi.len(),
                want: self.datum.rank(),
            });
        }
        let mut acc = FieldElement::one(self.context());
        for (&m, v) in chi.iter().zip(&self.values) {
            if m != 0 {
                acc = acc.mul(&v.pow_int(m)?)?;
            }
        }
        Ok(acc)
    }

    /// α(γ) for the root with the given index.
    pub fn eval_root(&self, root: usize) -> Result<FieldElement> {
        self.eval_char(self.datum.root(root))
    }

    /// Value-wise product (the torus is abelian).
    pub fn mul(&self, o: &Self) -> Result<Self> {
        let values = self
            .values
            .iter()
            .zip(&o.values)
            .map(|(a, b)| a.mul(b))
            .collect::<Result<Vec<_>>>()?;
        TorusGroupElement::new(Arc::clone(&self.datum), values)
    }

    pub fn inverse(&self) -> Result<Self> {
        let values = self
            .values
            .iter()
            .map(|v| v.invert())
            .collect::<Result<Vec<_>>>()?;
        TorusGroupElement::new(Arc::clone(&self.datum), values)
    }

    /// Filtration depth: min over the basis of val(χᵢ(γ) − 1); +∞ for the
    /// identity. Always positive: values are one-units.
    pub fn depth(&self) -> Result<Val> {
        let one = FieldElement::one(self.context());
        let vals = self
            .values
            .iter()
            .map(|v| v.sub(&one).map(|u| u.val()))
            .collect::<Result<Vec<_>>>()?;
        depth_of_vals(vals.into_iter())
    }

    /// The goodness predicate: every α(γ) equals 1 or has val(α(γ) − 1)
    /// exactly equal to depth(γ).
    pub fn is_good(&self) -> Result<GoodnessReport> {
        let r = self.depth()?;
        let one = FieldElement::one(self.context());
        // One inversion per basis value, shared by all root evaluations.
        let needs_inverse = (0..self.datum.num_roots())
            .any(|i| self.datum.root(i).iter().any(|&m| m < 0));
        let inverses: Option<Vec<FieldElement>> = if needs_inverse {
            Some(
                self.values
                    .iter()
                    .map(|v| v.invert())
                    .collect::<Result<Vec<_>>>()?,
            )
        } else {
            None
        };
        let mut evals = Vec::with_capacity(self.datum.num_roots());
        for i in 0..self.datum.num_roots() {
            let mut acc = one.clone();
            for (j, &m) in self.datum.root(i).iter().enumerate() {
                if m > 0 {
                    acc = acc.mul(&self.values[j].pow_int(m)?)?;
                } else if m < 0 {
                    let inv = &inverses.as_ref().expect("negative exponent implies inverses")[j];
                    acc = acc.mul(&inv.pow_int(-m)?)?;
                }
            }
            evals.push(acc.sub(&one)?);
        }
        goodness_report(&r, &evals, self.context())
    }
}

/// Minimum of a family of valuations, erroring when a precision-truncated
/// entry could change the answer.
fn depth_of_vals(vals: impl Iterator<Item = Val>) -> Result<Val> {
    let mut min_finite: Option<Rat> = None;
    let mut min_bound: Option<Rat> = None;
    for v in vals {
        match v {
            Val::Finite(r) => min_finite = Some(min_finite.map_or(r, |m: Rat| m.min(r))),
            Val::Indeterminate(b) => min_bound = Some(min_bound.map_or(b, |m: Rat| m.min(b))),
            Val::Infinite => {}
        }
    }
    match (min_finite, min_bound) {
        (Some(m), None) => Ok(Val::Finite(m)),
        (Some(m), Some(b)) if b > m => Ok(Val::Finite(m)),
        (None, None) => Ok(Val::Infinite),
        _ => Err(Error::IndeterminateDepth),
    }
}

/// Classify every root evaluation against the depth and aggregate.
fn goodness_report(
    r: &Val,
    evals: &[FieldElement],
    ctx: &Arc<FieldContext>,
) -> Result<GoodnessReport> {
    let mut roots = Vec::with_capacity(evals.len());
    let mut vanishing = Vec::new();
    let mut violating = Vec::new();
    let mut certified = true;
    for (i, ev) in evals.iter().enumerate() {
        let val = ev.val();
        let status = match (&val, r) {
            (Val::Infinite, _) => RootStatus::Vanishing,
            (Val::Finite(v), Val::Finite(depth)) => {
                if v == depth {
                    RootStatus::AtDepth
                } else {
                    RootStatus::Violating
                }
            }
            (Val::Finite(_), _) => RootStatus::Violating,
            (Val::Indeterminate(bound), Val::Finite(depth)) if bound > depth => {
                // Provably not at depth; zero only as far as the cap shows.
                certified = false;
                RootStatus::Vanishing
            }
            (Val::Indeterminate(bound), _) => {
                return Err(Error::IndeterminateValuation {
                    bound: *bound,
                    cap: ctx.precision(),
                });
            }
        };
        match status {
            RootStatus::Vanishing => vanishing.push(i),
            RootStatus::Violating => violating.push(i),
            RootStatus::AtDepth => {}
        }
        roots.push(RootReport { root_index: i, status, val });
    }
    Ok(GoodnessReport {
        good: violating.is_empty(),
        depth: r.clone(),
        certified,
        roots,
        vanishing,
        violating,
    })
}
