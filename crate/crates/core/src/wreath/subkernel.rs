use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::context::{coset_census, tuple_to_perm, KernelElement, WreathContext};
use crate::arith::{fmt_ratio, prime_divisors, ratio};
use crate::blocks::is_affine_type;
use crate::error::{Error, Result};
use crate::group::{generate, PermGroup, DEFAULT_ENUMERATION_CAP};
use crate::perm::Permutation;

/// Random tuples drawn per candidate subkernel.
const TUPLES_PER_SUBKERNEL: usize = 4;
const ATTEMPTS_PER_TRIAL: usize = 25;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SubkernelRow {
    pub group: String,
    pub s: usize,
    pub r: usize,
    pub kernel: String,
    pub kernel_order: String,
    pub measured: String,
    pub claimed: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SubkernelReport {
    pub group: String,
    pub s: usize,
    pub r: usize,
    pub affine: bool,
    pub seed: u64,
    pub trials_requested: usize,
    pub subkernels_found: usize,
    pub rows: Vec<SubkernelRow>,
    pub all_ok: bool,
}

fn is_elementary_abelian(k: &PermGroup, p: u64) -> bool {
    let gens = k.generators();
    gens.iter().all(|a| a.pow(p).is_identity())
        && gens.iter().all(|a| gens.iter().all(|b| a.then(b) == b.then(a)))
}

/// Upper bound on the full-cycle proportion of `K shift` for a kernel `K`
/// with onto block projections: `(p-1)/p` or 1 for affine `H` of prime
/// degree `p`, otherwise `1/2 * prod_{p | s, p coprime to r} (p-1)/p`.
pub fn claimed_bound(h: &PermGroup, r: usize, kernel: &PermGroup) -> BigRational {
    let s = h.degree() as u64;
    let r = r as u64;
    if is_affine_type(h) {
        if s.gcd(&r) == 1 || !is_elementary_abelian(kernel, s) {
            ratio(s - 1, s)
        } else {
            BigRational::one()
        }
    } else {
        prime_divisors(s)
            .into_iter()
            .filter(|p| p.gcd(&r) == 1)
            .fold(ratio(1, 2), |acc, p| acc * ratio(p - 1, p))
    }
}

fn projections_onto(ctx: &WreathContext, kernel: &PermGroup) -> Result<bool> {
    let gens = kernel.generators();
    for i in 0..ctx.r() {
        let images: Vec<Permutation> = gens
            .iter()
            .map(|g| super::kernel_tuple(ctx, g).map(|t| t.components()[i].clone()))
            .collect::<Result<_>>()?;
        if generate(&images, DEFAULT_ENUMERATION_CAP)?.order() != ctx.bottom().order() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Random `shift`-invariant kernels: the closure of a few random tuples, all
/// their `shift`-conjugates and `shift^r`.
fn random_subkernel(ctx: &WreathContext, rng: &mut ChaCha8Rng) -> Result<PermGroup> {
    let h = ctx.bottom().require_elements("random subkernel")?;
    let shift = ctx.shift();
    let n = ctx.degree();
    let mut gens = vec![shift.pow(ctx.r() as u64)];
    for _ in 0..TUPLES_PER_SUBKERNEL {
        let tuple = KernelElement::new((0..ctx.r()).map(|_| h[rng.gen_range(0..h.len())].clone()).collect());
        let g = tuple_to_perm(ctx, &tuple)?;
        let mut conj = g.clone();
        for _ in 0..n {
            if !gens.contains(&conj) {
                gens.push(conj.clone());
            }
            conj = conj.conjugate_by(shift);
        }
    }
    generate(&gens, DEFAULT_ENUMERATION_CAP)
}

/// Measures the full-cycle proportion of `K shift` for `K = H^r` and up to `trials` random proper
/// subkernels with onto block projections, against the claimed bound.
pub fn subkernel_check(name: &str, h: &PermGroup, r: usize, trials: usize, seed: u64) -> Result<SubkernelReport> {
    if r == 0 || r > 4 {
        return Err(Error::Domain(format!("top degree {r} outside 1..=4")));
    }
    let ctx = WreathContext::new(h, r)?;
    let bottom = ctx.bottom();
    let full_order = bottom.order().pow(r as u32);
    if full_order.clone() * BigUint::from(r) > BigUint::from(DEFAULT_ENUMERATION_CAP) {
        return Err(Error::Size(format!(
            "|H|^r * r = {} exceeds the enumeration cap",
            full_order * BigUint::from(r)
        )));
    }
    let affine = is_affine_type(bottom);
    let is_s4 = bottom.degree() == 4 && bottom.order() == &BigUint::from(24u32);
    if !affine && !is_s4 && bottom.is_solvable()? {
        return Err(Error::Precondition(format!(
            "{name}: solvable bottom group of degree {} that is neither affine nor S4",
            bottom.degree()
        )));
    }
    let mut kernels = vec![("full".to_string(), ctx.full_kernel()?)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = 0;
    for _ in 0..trials * ATTEMPTS_PER_TRIAL {
        if found == trials {
            break;
        }
        let k = random_subkernel(&ctx, &mut rng)?;
        if k.order() == &full_order || !projections_onto(&ctx, &k)? {
            continue;
        }
        if kernels.iter().any(|(_, other)| other.order() == k.order() && k.generators().iter().all(|g| other.contains(g))) {
            continue;
        }
        found += 1;
        kernels.push((format!("sub{found}"), k));
    }
    let rows = kernels
        .iter()
        .map(|(label, k)| {
            let measured = coset_census(&ctx, k, ctx.shift())?;
            let claimed = claimed_bound(bottom, r, k);
            Ok(SubkernelRow {
                group: name.to_string(),
                s: ctx.s(),
                r,
                kernel: label.clone(),
                kernel_order: k.order().to_string(),
                ok: measured <= claimed,
                measured: fmt_ratio(&measured),
                claimed: fmt_ratio(&claimed),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SubkernelReport {
        group: name.to_string(),
        s: ctx.s(),
        r,
        affine,
        seed,
        trials_requested: trials,
        subkernels_found: found,
        all_ok: rows.iter().all(|row| row.ok),
        rows,
    })
}
