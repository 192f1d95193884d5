use std::cmp::Ordering;
use std::f64::consts::FRAC_PI_2;

use super::{Action, AceAction, CanonResult};
use crate::energy::{ace_constraints_hold, AceInstance, FieldEnergy2D, ACE_CONSTRAINT_TOL, SENTINEL};
use crate::error::{Error, Result};
use crate::fields::Field2D;
use crate::lie::{AceGroupElement, LieGroup, Se2Element};

const SCREEN_BAND: f64 = 1e-9;

fn lex_cmp(a: &Field2D, b: &Field2D) -> Ordering {
    a.values.iter().zip(&b.values).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

/// Exhaustive canonicalization over quarter turns and whole-cell translations of a square grid.
///
/// Every orbit member is ranked by its inner energy, with ties broken by the lexicographic order
/// of the field values, so `canon(g·x)` and `canon(x)` coincide bitwise for every discrete `g`.
/// The time shift is left at zero.
pub fn ace_discrete_canonicalize<I: FieldEnergy2D + ?Sized>(
    inst: &AceInstance,
    inner: &I,
) -> Result<CanonResult<AceGroupElement, AceInstance>> {
    let f = &inst.field;
    if f.nx != f.ny {
        return Err(Error::InvalidArgument(format!("discrete canonicalization needs a square grid, got {}×{}", f.nx, f.ny)));
    }
    let n = f.nx;
    let screened = inner.orbit_energies(f);
    let best = screened.iter().flatten().copied().filter(|e| e.is_finite()).fold(f64::INFINITY, f64::min);
    if !best.is_finite() {
        return Err(Error::NonFiniteEnergy);
    }
    let cutoff = best + SCREEN_BAND * best.abs().max(1.0);
    let mut winner: Option<(f64, Field2D, u8, usize, usize)> = None;
    for (k, energies) in screened.iter().enumerate() {
        if !energies.iter().any(|&e| e <= cutoff) {
            continue;
        }
        let rotated = f.rotated_quarter(k as u8);
        for (idx, &e) in energies.iter().enumerate() {
            if !(e <= cutoff) {
                continue;
            }
            let (sx, sy) = (idx % n, idx / n);
            let cand = rotated.shifted(sx, sy);
            let exact = inner.energy(&cand);
            let better = match &winner {
                None => true,
                Some((we, wf, ..)) => exact.total_cmp(we).then_with(|| lex_cmp(&cand, wf)).is_lt(),
            };
            if better {
                winner = Some((exact, cand, k as u8, sx, sy));
            }
        }
    }
    let (_, _, k, sx, sy) = winner.ok_or(Error::NonFiniteEnergy)?;
    let rigid = Se2Element::new(k as f64 * FRAC_PI_2, sx as f64 / n as f64, sy as f64 / n as f64);
    let g_inv = AceGroupElement::new(0.0, rigid);
    let canonical = AceAction.act(&g_inv, inst)?;
    let constrained = |x: &AceInstance| {
        if ace_constraints_hold(x, ACE_CONSTRAINT_TOL) {
            inner.energy(&x.field)
        } else {
            SENTINEL
        }
    };
    let energy_trace = vec![constrained(inst), constrained(&canonical)];
    let final_energy = energy_trace[1];
    Ok(CanonResult { canonical, g: g_inv.inverse(), g_inv, energy_trace, init_index: 0, final_energy, steps: Vec::new() })
}
