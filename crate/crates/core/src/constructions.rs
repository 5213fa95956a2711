//! Thickenings, pullbacks along canonical bijections, and the explicit
//! reductions that connect them to the base set.

use crate::domain::{ComputableDomain, DomainKind};
use crate::error::{capacity, Error, Result};
use crate::pairing;
use crate::reductions::{Reduction, ReductionClass};
use crate::sets::OmegaSet;

fn require_k(k: u64) -> Result<()> {
    if k == 0 {
        Err(Error::Precondition(
            "thickening factor k must be >= 1".into(),
        ))
    } else {
        Ok(())
    }
}

/// The `k`-thickening `{ x : floor(x / k) in a }`.
pub fn thicken(a: &OmegaSet, k: u64) -> Result<OmegaSet> {
    require_k(k)?;
    Ok(OmegaSet::thickening(a, k))
}

/// `x -> floor(x / k)`, reducing `a_(k)` to `a`. Exactly `k`-to-one.
pub fn thicken_witness_down(a: &OmegaSet, k: u64) -> Result<Reduction> {
    let thick = thicken(a, k)?;
    Ok(Reduction::new(
        format!("floor(x/{k})"),
        ReductionClass::BoundedFiniteOne(k),
        thick.descriptor(),
        a.descriptor(),
        move |x| Ok(x / k),
    ))
}

/// `x -> k x`, reducing `a` one-one to `a_(k)`.
pub fn thicken_witness_up(a: &OmegaSet, k: u64) -> Result<Reduction> {
    let thick = thicken(a, k)?;
    Ok(Reduction::new(
        format!("{k}x"),
        ReductionClass::OneOne,
        a.descriptor(),
        thick.descriptor(),
        move |x| {
            x.checked_mul(k)
                .ok_or_else(|| capacity(format!("{k} * {x}")))
        },
    ))
}

/// The block embedding `(k+1) floor(x/k) + (x mod k)` of `a_(k)` into
/// `a_(k+1)`: strictly increasing, and `floor(p(x)/(k+1)) = floor(x/k)`.
pub fn chain_embedding(k: u64, x: u64) -> Result<u64> {
    require_k(k)?;
    (x / k)
        .checked_mul(k + 1)
        .and_then(|block| block.checked_add(x % k))
        .ok_or_else(|| capacity(format!("chain embedding k={k} at x={x}")))
}

/// [`chain_embedding`] as a one-one reduction `a_(k) -> a_(k+1)`.
pub fn chain_witness(a: &OmegaSet, k: u64) -> Result<Reduction> {
    let from = thicken(a, k)?;
    let to = thicken(a, k + 1)?;
    Ok(Reduction::new(
        format!("({})floor(x/{k}) + x mod {k}", k + 1),
        ReductionClass::OneOne,
        from.descriptor(),
        to.descriptor(),
        move |x| chain_embedding(k, x),
    ))
}

pub fn pyramid_domain() -> ComputableDomain {
    ComputableDomain::pyramid()
}

pub fn full_domain() -> ComputableDomain {
    ComputableDomain::full()
}

pub fn calibrated_domain(s: &OmegaSet) -> Result<ComputableDomain> {
    ComputableDomain::calibrated(s)
}

pub fn bounded_calibrated_domain(s: &OmegaSet) -> Result<ComputableDomain> {
    ComputableDomain::bounded_calibrated(s)
}

/// `{ n : pi_1(sigma_d(n)) in a }`. Over the full domain this is the
/// cylinder `a × omega`.
pub fn pullback(d: &ComputableDomain, a: &OmegaSet) -> OmegaSet {
    OmegaSet::pullback(d, a)
}

/// Fibre class of `q` read off the column profile.
pub fn projection_class(d: &ComputableDomain) -> ReductionClass {
    match d.kind() {
        DomainKind::BoundedCalibrated(_) => ReductionClass::BoundedFiniteOne(2),
        DomainKind::Pyramid => ReductionClass::FiniteOne,
        DomainKind::Calibrated(_) | DomainKind::Full => ReductionClass::ManyOne,
    }
}

/// `q(n) = pi_1(sigma_d(n))`, reducing the pullback to `a`.
pub fn pullback_witness_q(d: &ComputableDomain, a: &OmegaSet) -> Reduction {
    let domain = d.clone();
    Reduction::new(
        format!("pi1(sigma[{}](n))", d.descriptor()),
        projection_class(d),
        pullback(d, a).descriptor(),
        a.descriptor(),
        move |n| Ok(pairing::left(domain.sigma(n)?)),
    )
}

/// `r(x) = sigma_d^{-1}(<x, 0>)`, reducing `a` one-one to the pullback.
pub fn pullback_witness_r(d: &ComputableDomain, a: &OmegaSet) -> Reduction {
    let domain = d.clone();
    Reduction::new(
        format!("sigma[{}]^-1(<x,0>)", d.descriptor()),
        ReductionClass::OneOne,
        a.descriptor(),
        pullback(d, a).descriptor(),
        move |x| domain.sigma_inv(pairing::pair(x, 0)?),
    )
}

/// Member `k` of a family of pairwise disjoint infinite decidable sets.
pub fn disjoint_family(k: u64) -> OmegaSet {
    OmegaSet::column(k)
}
