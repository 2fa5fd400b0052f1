//! Distances between right cosets of a subgroup.

use super::window::GroupWindow;
use crate::error::{Error, Result};
use crate::group::Element;

/// `d̄(Cx, Cy) = min_{c ∈ C} d(x, c·y)`, minimized over the subgroup
/// elements of the window.
///
/// The minimum is certified only when every `c` that could beat it lies
/// in the window: `‖x⁻¹cy‖ ≥ ‖c‖ − ‖x‖ − ‖y‖`, so the window radius must
/// reach `best + ‖x‖ + ‖y‖`.
pub fn coset_distance(
    window: &GroupWindow,
    in_c: impl Fn(&Element) -> bool,
    x: &Element,
    y: &Element,
) -> Result<u32> {
    let g = window.group();
    let o = window.oracle();
    let xi = g.inv(x);
    let mut best: Option<u32> = None;
    for c in window.elements().iter().filter(|c| in_c(c)) {
        let b = o.bounds(&g.mul(&g.mul(&xi, c), y));
        if best.is_some_and(|v| b.lo >= v) {
            continue;
        }
        let n = o.norm(&g.mul(&g.mul(&xi, c), y))?;
        best = Some(best.map_or(n, |v| v.min(n)));
    }
    let best = best.ok_or_else(|| Error::input("subgroup has no element in the window"))?;
    let reach = best + o.norm(x)? + o.norm(y)?;
    if reach > window.radius() {
        return Err(Error::exhausted(
            "coset distance",
            format!(
                "minimum {best} is not certified: needs subgroup elements of norm up to {reach}, window radius {}",
                window.radius()
            ),
        ));
    }
    Ok(best)
}
